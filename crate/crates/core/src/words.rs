//! Reduced words in free groups on named generators.
//!
//! A [`Word`] is always freely reduced. Words print and parse in the textual
//! form `B[1,2]^-1 r[2,1]^2 [r[1,1], x[2,1]]`, with the empty string standing
//! for the identity.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::Mul;
use core::str::FromStr;

use crate::error::{Error, Result};

/// A generator symbol.
///
/// The derived order is `B < r < x < p < g`, then lexicographic on indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Generator {
    /// `B[i,j]` with `i < j`: the pure braid twisting strands `i` and `j`.
    B(u16, u16),
    /// `r[k,l]`: strand `k` travelling once through crosscap `l`.
    Rho(u16, u16),
    /// `x[u,t]`: strand `u` travelling around boundary component `t`.
    X(u16, u16),
    /// `p[i]`: the standard generators of the surface group.
    P(u16),
    /// `g[i]`: generators of an abstract presentation.
    Abstract(u16),
}

impl Generator {
    /// The strand a braid generator belongs to; the larger index for `B`.
    pub fn level(self) -> Option<u16> {
        match self {
            Generator::B(_, j) => Some(j),
            Generator::Rho(k, _) | Generator::X(k, _) => Some(k),
            Generator::P(_) | Generator::Abstract(_) => None,
        }
    }

    pub fn letter(self) -> Letter {
        Letter { gen: self, inverse: false }
    }

    pub fn word(self) -> Word {
        Word(alloc::vec![self.letter()])
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Generator::B(i, j) => write!(f, "B[{},{}]", i, j),
            Generator::Rho(k, l) => write!(f, "r[{},{}]", k, l),
            Generator::X(u, t) => write!(f, "x[{},{}]", u, t),
            Generator::P(i) => write!(f, "p[{}]", i),
            Generator::Abstract(i) => write!(f, "g[{}]", i),
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn inv(self) -> Letter {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    pub fn sign(self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// A freely reduced word.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    /// Builds a word from arbitrary letters, reducing as it goes.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// `gen^exp`.
    pub fn power_of(gen: Generator, exp: i64) -> Word {
        let letter = Letter { gen, inverse: exp < 0 };
        Word(core::iter::repeat_n(letter, exp.unsigned_abs() as usize).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.0.is_empty()
    }

    /// Appends a letter, cancelling against the last one if possible.
    pub fn push(&mut self, l: Letter) {
        if self.0.last() == Some(&l.inv()) {
            self.0.pop();
        } else {
            self.0.push(l);
        }
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn pow(&self, exp: i64) -> Word {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..exp.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// `[h,k] = h^-1 k^-1 h k`.
    pub fn commutator(h: &Word, k: &Word) -> Word {
        &(&(&h.inverse() * &k.inverse()) * h) * k
    }

    /// `c w c^-1`.
    pub fn conjugate_by(&self, c: &Word) -> Word {
        &(c * self) * &c.inverse()
    }

    /// Replaces every generator by its image and reduces.
    pub fn substitute<F>(&self, mut image: F) -> Result<Word>
    where
        F: FnMut(Generator) -> Option<Word>,
    {
        let mut out = Word::identity();
        for l in &self.0 {
            let img = image(l.gen).ok_or(Error::MissingImage(l.gen))?;
            if l.inverse {
                out = &out * &img.inverse();
            } else {
                out = &out * &img;
            }
        }
        Ok(out)
    }

    /// Sum of exponents of `gen`.
    pub fn exponent_sum(&self, gen: Generator) -> i64 {
        self.0.iter().filter(|l| l.gen == gen).map(|l| l.sign()).sum()
    }

    /// The set of generators occurring in the word, in increasing order.
    pub fn support(&self) -> Vec<Generator> {
        let mut gens: Vec<Generator> = self.0.iter().map(|l| l.gen).collect();
        gens.sort();
        gens.dedup();
        gens
    }
}

impl Mul<&Word> for &Word {
    type Output = Word;

    fn mul(self, rhs: &Word) -> Word {
        let mut out = self.clone();
        for &l in &rhs.0 {
            out.push(l);
        }
        out
    }
}

impl Mul<Word> for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl From<Generator> for Word {
    fn from(g: Generator) -> Word {
        g.word()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            if !first {
                f.write_str(" ")?;
            }
            first = false;
            write!(f, "{}", l.gen)?;
            match (l.inverse, run) {
                (false, 1) => {}
                (false, r) => write!(f, "^{}", r)?,
                (true, r) => write!(f, "^-{}", r)?,
            }
            i += run;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

/// Parses the textual word syntax.
///
/// ```text
/// word := term (WS term)*
/// term := atom ("^" SIGNED_INT)?
/// atom := gen | "(" word ")" | "[" word "," word "]"
/// gen  := "B[" INT "," INT "]" | "r[" INT "," INT "]" | "x[" INT "," INT "]"
///       | "p[" INT "]" | "g[" INT "]"
/// ```
pub fn parse_word(text: &str) -> Result<Word> {
    let mut p = Parser { s: text.as_bytes(), pos: 0 };
    let w = p.word()?;
    p.skip_ws();
    if p.pos < p.s.len() {
        return Err(p.error("unexpected character"));
    }
    Ok(w)
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::Syntax { offset: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.s.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            let mut msg = String::from("expected '");
            msg.push(c as char);
            msg.push('\'');
            Err(self.error(&msg))
        }
    }

    fn word(&mut self) -> Result<Word> {
        let mut w = Word::identity();
        loop {
            self.skip_ws();
            match self.peek() {
                None | Some(b')') | Some(b']') | Some(b',') => return Ok(w),
                _ => {
                    let t = self.term()?;
                    w = &w * &t;
                }
            }
        }
    }

    fn term(&mut self) -> Result<Word> {
        let atom = self.atom()?;
        self.skip_ws();
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let e = self.signed_int()?;
            Ok(atom.pow(e))
        } else {
            Ok(atom)
        }
    }

    fn atom(&mut self) -> Result<Word> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.word()?;
                self.skip_ws();
                self.expect(b')')?;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let h = self.word()?;
                self.skip_ws();
                self.expect(b',')?;
                let k = self.word()?;
                self.skip_ws();
                self.expect(b']')?;
                Ok(Word::commutator(&h, &k))
            }
            Some(c @ (b'B' | b'r' | b'x' | b'p' | b'g')) => {
                let start = self.pos;
                self.pos += 1;
                self.expect(b'[')?;
                let first = self.int()?;
                let gen = if matches!(c, b'p' | b'g') {
                    self.expect(b']')?;
                    if c == b'p' {
                        Generator::P(first)
                    } else {
                        Generator::Abstract(first)
                    }
                } else {
                    self.expect(b',')?;
                    let second = self.int()?;
                    self.expect(b']')?;
                    match c {
                        b'B' => {
                            if first >= second {
                                return Err(Error::Syntax {
                                    offset: start,
                                    message: "B[i,j] requires i < j".to_string(),
                                });
                            }
                            Generator::B(first, second)
                        }
                        b'r' => Generator::Rho(first, second),
                        _ => Generator::X(first, second),
                    }
                };
                Ok(gen.word())
            }
            _ => Err(self.error("expected a generator, '(' or '['")),
        }
    }

    fn int(&mut self) -> Result<u16> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected a positive integer"));
        }
        let digits = core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        match digits.parse::<u16>() {
            Ok(v) if v >= 1 => Ok(v),
            _ => Err(Error::Syntax { offset: start, message: "index out of range".to_string() }),
        }
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("expected an exponent"));
        }
        let digits = core::str::from_utf8(&self.s[start..self.pos]).unwrap_or("");
        let v: i64 = digits
            .parse()
            .map_err(|_| Error::Syntax { offset: start, message: "exponent out of range".to_string() })?;
        if v > 1 << 20 {
            return Err(Error::Syntax { offset: start, message: "exponent out of range".to_string() });
        }
        Ok(if neg { -v } else { v })
    }
}
