//! Finite presentations of surface braid groups, surface groups and free
//! groups, together with the named elements used throughout the crate.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::words::{Generator, Word};

/// Which group to work with.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupSpec {
    /// Pure braid group `P_n(N_g)` of the closed surface with `g` crosscaps.
    ClosedBraid { g: u16, n: u16 },
    /// Pure braid group `P_n(N_{g,b})` of the surface with `b` boundary components.
    BorderedBraid { g: u16, b: u16, n: u16 },
    /// Fundamental group of the closed surface with `g` crosscaps.
    ClosedSurface { g: u16 },
    /// Free group on `g[1], ..., g[rank]`.
    Free { rank: u16 },
}

impl GroupSpec {
    pub fn closed(g: u16, n: u16) -> Result<GroupSpec> {
        let s = GroupSpec::ClosedBraid { g, n };
        s.validate()?;
        Ok(s)
    }

    pub fn bordered(g: u16, b: u16, n: u16) -> Result<GroupSpec> {
        let s = GroupSpec::BorderedBraid { g, b, n };
        s.validate()?;
        Ok(s)
    }

    pub fn surface(g: u16) -> Result<GroupSpec> {
        let s = GroupSpec::ClosedSurface { g };
        s.validate()?;
        Ok(s)
    }

    pub fn free(rank: u16) -> GroupSpec {
        GroupSpec::Free { rank }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            GroupSpec::ClosedBraid { g, n } => {
                if g < 2 {
                    return Err(Error::Unsupported(format!(
                        "closed braid groups need at least two crosscaps, got g={}",
                        g
                    )));
                }
                if n < 1 {
                    return Err(Error::Unsupported("need at least one strand".to_string()));
                }
            }
            GroupSpec::BorderedBraid { g, b, n } => {
                if g < 1 || b < 1 || n < 1 {
                    return Err(Error::Unsupported(format!(
                        "bordered braid groups need g, b, n >= 1, got g={}, b={}, n={}",
                        g, b, n
                    )));
                }
            }
            GroupSpec::ClosedSurface { g } => {
                if g < 2 {
                    return Err(Error::Unsupported(format!(
                        "surface groups need at least two crosscaps, got g={}",
                        g
                    )));
                }
            }
            GroupSpec::Free { .. } => {}
        }
        Ok(())
    }

    /// Whether `gen` is one of the defining generators.
    pub fn has_generator(&self, gen: Generator) -> bool {
        match (*self, gen) {
            (GroupSpec::ClosedBraid { n, .. }, Generator::B(i, j))
            | (GroupSpec::BorderedBraid { n, .. }, Generator::B(i, j)) => 1 <= i && i < j && j <= n,
            (GroupSpec::ClosedBraid { g, n }, Generator::Rho(k, l))
            | (GroupSpec::BorderedBraid { g, n, .. }, Generator::Rho(k, l)) => {
                1 <= k && k <= n && 1 <= l && l <= g
            }
            (GroupSpec::BorderedBraid { b, n, .. }, Generator::X(u, t)) => 1 <= u && u <= n && 1 <= t && t < b,
            (GroupSpec::ClosedSurface { g }, Generator::P(i)) => 1 <= i && i <= g,
            (GroupSpec::Free { rank }, Generator::Abstract(i)) => 1 <= i && i <= rank,
            _ => false,
        }
    }

    /// Checks that every letter of `w` is a generator of this group.
    pub fn check_word(&self, w: &Word) -> Result<()> {
        for l in w.letters() {
            if !self.has_generator(l.gen) {
                return Err(Error::UnknownGenerator(l.gen));
            }
        }
        Ok(())
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            GroupSpec::ClosedBraid { g, n } => write!(f, "closed:g={},n={}", g, n),
            GroupSpec::BorderedBraid { g, b, n } => write!(f, "bordered:g={},b={},n={}", g, b, n),
            GroupSpec::ClosedSurface { g } => write!(f, "surface:g={}", g),
            GroupSpec::Free { rank } => write!(f, "free:rank={}", rank),
        }
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    /// Parses `closed:g=G,n=N`, `bordered:g=G,b=B,n=N`, `surface:g=G` or
    /// `free:rank=R`.
    fn from_str(s: &str) -> Result<GroupSpec> {
        let syntax = |offset: usize, message: &str| Error::Syntax { offset, message: message.to_string() };
        let (family, params) = s.split_once(':').ok_or_else(|| syntax(0, "expected family:params"))?;
        let mut g = None;
        let mut b = None;
        let mut n = None;
        let mut rank = None;
        let mut offset = family.len() + 1;
        for item in params.split(',') {
            let (key, value) = item.split_once('=').ok_or_else(|| syntax(offset, "expected key=value"))?;
            let v: u16 = value.trim().parse().map_err(|_| syntax(offset + key.len() + 1, "expected an integer"))?;
            let slot = match key.trim() {
                "g" => &mut g,
                "b" => &mut b,
                "n" => &mut n,
                "rank" => &mut rank,
                _ => return Err(syntax(offset, "unknown parameter")),
            };
            if slot.replace(v).is_some() {
                return Err(syntax(offset, "repeated parameter"));
            }
            offset += item.len() + 1;
        }
        let missing = |name: &str| syntax(s.len(), &format!("missing parameter {}", name));
        let spec = match family.trim() {
            "closed" => GroupSpec::ClosedBraid { g: g.ok_or_else(|| missing("g"))?, n: n.ok_or_else(|| missing("n"))? },
            "bordered" => GroupSpec::BorderedBraid {
                g: g.ok_or_else(|| missing("g"))?,
                b: b.ok_or_else(|| missing("b"))?,
                n: n.ok_or_else(|| missing("n"))?,
            },
            "surface" => GroupSpec::ClosedSurface { g: g.ok_or_else(|| missing("g"))? },
            "free" => GroupSpec::Free { rank: rank.ok_or_else(|| missing("rank"))? },
            _ => return Err(syntax(0, "unknown family")),
        };
        let extra = match spec {
            GroupSpec::ClosedBraid { .. } => b.is_some() || rank.is_some(),
            GroupSpec::BorderedBraid { .. } => rank.is_some(),
            GroupSpec::ClosedSurface { .. } => b.is_some() || n.is_some() || rank.is_some(),
            GroupSpec::Free { .. } => g.is_some() || b.is_some() || n.is_some(),
        };
        if extra {
            return Err(syntax(family.len() + 1, "parameter does not apply to this family"));
        }
        spec.validate()?;
        Ok(spec)
    }
}

/// The family a defining relator comes from.
///
/// Relators of the braid presentations are written `LHS * RHS^-1` where the
/// left-hand side is a conjugate `c z c^-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Family {
    A1,
    A2,
    A3,
    A4,
    B1,
    B2,
    B3,
    C,
    D1,
    D2,
    D3,
    L1,
    L2,
    L3,
    M1,
    /// Conjugation of `r[k,l]` by `x[u,t]` for `u < k`. The published
    /// right-hand side mentions `B[u,j]` with `j` unbound; it is read here as
    /// `B[u,k]`, the only index that makes the word live on strands `u, k`.
    M2,
    N1,
    N2,
    N3,
    Surface,
    Given,
}

impl Family {
    /// Relators whose printed form had to be reconstructed.
    pub fn is_reconstructed(self) -> bool {
        self == Family::M2
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relator {
    pub word: Word,
    pub family: Family,
}

/// A finite presentation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    pub name: String,
    pub spec: Option<GroupSpec>,
    pub generators: Vec<Generator>,
    pub relators: Vec<Relator>,
}

impl Presentation {
    /// The standard presentation of the group described by `spec`.
    pub fn of(spec: GroupSpec) -> Result<Presentation> {
        spec.validate()?;
        let (generators, relators) = match spec {
            GroupSpec::ClosedBraid { g, n } => braid_relators(g, 0, n, true),
            GroupSpec::BorderedBraid { g, b, n } => braid_relators(g, b, n, false),
            GroupSpec::ClosedSurface { g } => {
                let gens: Vec<Generator> = (1..=g).map(Generator::P).collect();
                let rel = surface_relator(g);
                (gens, alloc::vec![Relator { word: rel, family: Family::Surface }])
            }
            GroupSpec::Free { rank } => ((1..=rank).map(Generator::Abstract).collect(), Vec::new()),
        };
        Ok(Presentation { name: spec.to_string(), spec: Some(spec), generators, relators })
    }

    /// A presentation on `g[1], ..., g[k]` with the given relators.
    pub fn custom(name: &str, rank: u16, relators: Vec<Word>) -> Presentation {
        Presentation {
            name: name.to_string(),
            spec: None,
            generators: (1..=rank).map(Generator::Abstract).collect(),
            relators: relators.into_iter().map(|word| Relator { word, family: Family::Given }).collect(),
        }
    }

    /// `<g1, g2 | g1 g2 g1^-1 g2>`, the Klein bottle group.
    pub fn klein_bottle() -> Presentation {
        let (a, b) = (Generator::Abstract(1).word(), Generator::Abstract(2).word());
        let rel = &(&(&a * &b) * &a.inverse()) * &b;
        Presentation::custom("klein", 2, alloc::vec![rel])
    }

    /// `<g1, g2 | [g1, g2]>`.
    pub fn free_abelian_rank_two() -> Presentation {
        let (a, b) = (Generator::Abstract(1).word(), Generator::Abstract(2).word());
        Presentation::custom("zxz", 2, alloc::vec![Word::commutator(&a, &b)])
    }

    pub fn relator_words(&self) -> impl Iterator<Item = &Word> {
        self.relators.iter().map(|r| &r.word)
    }

    pub fn contains(&self, gen: Generator) -> bool {
        self.generators.contains(&gen)
    }

    pub fn check_word(&self, w: &Word) -> Result<()> {
        for l in w.letters() {
            if !self.contains(l.gen) {
                return Err(Error::UnknownGenerator(l.gen));
            }
        }
        Ok(())
    }
}

/// `p[1]^2 p[2]^2 ... p[g]^2`.
pub fn surface_relator(g: u16) -> Word {
    let mut w = Word::identity();
    for i in 1..=g {
        w = &w * &Word::power_of(Generator::P(i), 2);
    }
    w
}

fn bw(i: u16, j: u16) -> Word {
    Generator::B(i, j).word()
}

fn rw(k: u16, l: u16) -> Word {
    Generator::Rho(k, l).word()
}

fn xw(u: u16, t: u16) -> Word {
    Generator::X(u, t).word()
}

fn prod(parts: &[Word]) -> Word {
    let mut w = Word::identity();
    for p in parts {
        w = &w * p;
    }
    w
}

fn conj_relator(c: &Word, z: &Word, rhs: &Word, family: Family) -> Relator {
    Relator { word: &z.conjugate_by(c) * &rhs.inverse(), family }
}

/// `T_i = B[1,i] ... B[i-1,i] B[i,i+1] ... B[i,n]`.
pub fn full_twist(n: u16, i: u16) -> Word {
    let mut w = Word::identity();
    for k in 1..i {
        w = &w * &bw(k, i);
    }
    for k in i + 1..=n {
        w = &w * &bw(i, k);
    }
    w
}

/// Right-hand side of the conjugation relations for `r[i,k] r[j,l] r[i,k]^-1`, `i < j`.
pub(crate) fn rho_on_rho(i: u16, k: u16, j: u16, l: u16) -> (Word, Family) {
    let b = bw(i, j);
    if k < l {
        (rw(j, l), Family::B1)
    } else if k == l {
        (prod(&[rw(j, k).inverse(), b.inverse(), rw(j, k), rw(j, k)]), Family::B2)
    } else {
        let rk = rw(j, k);
        (
            prod(&[
                rk.inverse(),
                b.inverse(),
                rk.clone(),
                b.inverse(),
                rw(j, l),
                b.clone(),
                rk.inverse(),
                b,
                rk,
            ]),
            Family::B3,
        )
    }
}

/// Right-hand side for `B[r,s] B[i,j] B[r,s]^-1`, when a relation exists.
pub(crate) fn b_on_b(r: u16, s: u16, i: u16, j: u16) -> Option<(Word, Family)> {
    if (i < r && s < j) || s < i {
        Some((bw(i, j), Family::A1))
    } else if r < i && i == s {
        Some((prod(&[bw(i, j).inverse(), bw(r, j).inverse(), bw(i, j), bw(r, j), bw(i, j)]), Family::A2))
    } else if i == r && s < j {
        Some((prod(&[bw(s, j).inverse(), bw(i, j), bw(s, j)]), Family::A3))
    } else if r < i && i < s && s < j {
        let (bs, br) = (bw(s, j), bw(r, j));
        Some((
            prod(&[
                bs.inverse(),
                br.inverse(),
                bs.clone(),
                br.clone(),
                bw(i, j),
                br.inverse(),
                bs.inverse(),
                br,
                bs,
            ]),
            Family::A4,
        ))
    } else {
        None
    }
}

/// Right-hand side for `r[k,l] B[i,j] r[k,l]^-1`, `k != j`.
pub(crate) fn rho_on_b(k: u16, l: u16, i: u16, j: u16) -> (Word, Family) {
    if k < i || j < k {
        (bw(i, j), Family::D1)
    } else if k == i {
        (prod(&[rw(j, l).inverse(), bw(i, j).inverse(), rw(j, l)]), Family::D2)
    } else {
        let (r, b) = (rw(j, l), bw(k, j));
        (
            prod(&[
                r.inverse(),
                b.inverse(),
                r.clone(),
                b.inverse(),
                bw(i, j),
                b.clone(),
                r.inverse(),
                b,
                r,
            ]),
            Family::D3,
        )
    }
}

/// Right-hand side for `x[u,t] B[i,j] x[u,t]^-1`, `u != j`.
pub(crate) fn x_on_b(u: u16, t: u16, i: u16, j: u16) -> (Word, Family) {
    if u < i || j < u {
        (bw(i, j), Family::L1)
    } else if u == i {
        (prod(&[xw(j, t).inverse(), bw(i, j), xw(j, t)]), Family::L2)
    } else {
        let (x, b) = (xw(j, t), bw(u, j));
        (
            prod(&[
                x.inverse(),
                b.clone(),
                x.clone(),
                b.inverse(),
                bw(i, j),
                b.clone(),
                x.inverse(),
                b.inverse(),
                x,
            ]),
            Family::L3,
        )
    }
}

/// Right-hand side for `x[u,t] r[k,l] x[u,t]^-1`, `k != u`.
pub(crate) fn x_on_rho(u: u16, t: u16, k: u16, l: u16) -> (Word, Family) {
    if k < u {
        (rw(k, l), Family::M1)
    } else {
        let (x, b) = (xw(k, t), bw(u, k));
        (
            prod(&[
                x.inverse(),
                b.clone(),
                x.clone(),
                b.inverse(),
                rw(k, l),
                b.clone(),
                x.inverse(),
                b.inverse(),
                x,
            ]),
            Family::M2,
        )
    }
}

/// Right-hand side for `x[i,t] x[j,s] x[i,t]^-1`, `i < j`.
pub(crate) fn x_on_x(i: u16, t: u16, j: u16, s: u16) -> (Word, Family) {
    let b = bw(i, j);
    if t < s {
        (xw(j, s), Family::N1)
    } else if t == s {
        (prod(&[xw(j, t).inverse(), b.clone(), xw(j, t), b.inverse(), xw(j, t)]), Family::N2)
    } else {
        let x = xw(j, t);
        (
            prod(&[
                x.inverse(),
                b.clone(),
                x.clone(),
                b.inverse(),
                xw(j, s),
                b.clone(),
                x.inverse(),
                b.inverse(),
                x,
            ]),
            Family::N3,
        )
    }
}

fn braid_relators(g: u16, b: u16, n: u16, closed: bool) -> (Vec<Generator>, Vec<Relator>) {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in i + 1..=n {
            gens.push(Generator::B(i, j));
        }
    }
    for k in 1..=n {
        for l in 1..=g {
            gens.push(Generator::Rho(k, l));
        }
    }
    if !closed {
        for u in 1..=n {
            for t in 1..b {
                gens.push(Generator::X(u, t));
            }
        }
    }
    let mut rels = Vec::new();
    let pairs: Vec<(u16, u16)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
    for &(i, j) in &pairs {
        for &(r, s) in &pairs {
            if let Some((rhs, fam)) = b_on_b(r, s, i, j) {
                rels.push(conj_relator(&bw(r, s), &bw(i, j), &rhs, fam));
            }
        }
    }
    for &(i, j) in &pairs {
        for k in 1..=g {
            for l in 1..=g {
                let (rhs, fam) = rho_on_rho(i, k, j, l);
                rels.push(conj_relator(&rw(i, k), &rw(j, l), &rhs, fam));
            }
        }
    }
    if closed {
        for i in 1..=n {
            let mut lhs = Word::identity();
            for l in 1..=g {
                lhs = &lhs * &Word::power_of(Generator::Rho(i, l), 2);
            }
            rels.push(Relator { word: &lhs * &full_twist(n, i).inverse(), family: Family::C });
        }
    }
    for &(i, j) in &pairs {
        for k in (1..=n).filter(|&k| k != j) {
            for l in 1..=g {
                let (rhs, fam) = rho_on_b(k, l, i, j);
                rels.push(conj_relator(&rw(k, l), &bw(i, j), &rhs, fam));
            }
        }
    }
    if !closed {
        for &(i, j) in &pairs {
            for u in (1..=n).filter(|&u| u != j) {
                for t in 1..b {
                    let (rhs, fam) = x_on_b(u, t, i, j);
                    rels.push(conj_relator(&xw(u, t), &bw(i, j), &rhs, fam));
                }
            }
        }
        for u in 1..=n {
            for k in (1..=n).filter(|&k| k != u) {
                for l in 1..=g {
                    for t in 1..b {
                        let (rhs, fam) = x_on_rho(u, t, k, l);
                        rels.push(conj_relator(&xw(u, t), &rw(k, l), &rhs, fam));
                    }
                }
            }
        }
        for &(i, j) in &pairs {
            for t in 1..b {
                for s in 1..b {
                    let (rhs, fam) = x_on_x(i, t, j, s);
                    rels.push(conj_relator(&xw(i, t), &xw(j, s), &rhs, fam));
                }
            }
        }
    }
    (gens, rels)
}

/// Distinguished elements of a closed braid group `P_n(N_g)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NamedElement {
    /// `T_i`, the loop of strand `i` around all other strands.
    T(u16),
    /// `a_k = r[k,g-1] r[k,g]`.
    A(u16),
    /// `U = a_n a_{n-1} ... a_2`.
    U,
    /// Image of `p[i]` under the section of the forgetful map.
    Sigma(u16),
}

impl NamedElement {
    pub fn evaluate(self, spec: GroupSpec) -> Result<Word> {
        let (g, n) = match spec {
            GroupSpec::ClosedBraid { g, n } => (g, n),
            _ => return Err(Error::Unsupported("named elements live in closed braid groups".to_string())),
        };
        spec.validate()?;
        let bad = |what: &str| Err(Error::Unsupported(format!("{} out of range for g={}, n={}", what, g, n)));
        match self {
            NamedElement::T(i) if (1..=n).contains(&i) => Ok(full_twist(n, i)),
            NamedElement::T(_) => bad("T index"),
            NamedElement::A(k) if (1..=n).contains(&k) => Ok(a_elem(g, k)),
            NamedElement::A(_) => bad("a index"),
            NamedElement::U => Ok(u_elem(g, n)),
            NamedElement::Sigma(i) if (1..=g).contains(&i) => Ok(sigma_image(g, n, i)),
            NamedElement::Sigma(_) => bad("section index"),
        }
    }
}

fn a_elem(g: u16, k: u16) -> Word {
    &rw(k, g - 1) * &rw(k, g)
}

fn u_elem(g: u16, n: u16) -> Word {
    let mut w = Word::identity();
    for k in (2..=n).rev() {
        w = &w * &a_elem(g, k);
    }
    w
}

fn sigma_image(g: u16, n: u16, i: u16) -> Word {
    let u = u_elem(g, n);
    if i + 3 <= g {
        rw(1, i)
    } else if i + 2 == g {
        &rw(1, i) * &u.inverse()
    } else if i + 1 == g {
        &u * &rw(1, i)
    } else {
        &rw(1, i) * &full_twist(n, 1).inverse()
    }
}

/// The closed-form assignment `p[i] -> sigma(p[i])` built from `U` and `T_1`.
/// It respects the surface relation for `g >= 3` only.
pub fn stated_section_images(g: u16, n: u16) -> Vec<(Generator, Word)> {
    (1..=g).map(|i| (Generator::P(i), sigma_image(g, n, i))).collect()
}

/// `p[l] -> r[1,l] r[n,l] r[n-1,l] ... r[2,l]`: every strand follows the
/// first one around the loop. A section on the Klein bottle.
pub fn parallel_section_images(g: u16, n: u16) -> Vec<(Generator, Word)> {
    (1..=g)
        .map(|l| {
            let mut w = rw(1, l);
            for k in (2..=n).rev() {
                w = &w * &rw(k, l);
            }
            (Generator::P(l), w)
        })
        .collect()
}

/// A section of `lambda` for the closed braid group: the parallel one on the
/// Klein bottle, the closed-form one otherwise.
pub fn section_images(g: u16, n: u16) -> Vec<(Generator, Word)> {
    if g == 2 {
        parallel_section_images(g, n)
    } else {
        stated_section_images(g, n)
    }
}

/// A word that must be trivial in `P_n(N_g)`, labelled by the identity it
/// encodes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Identity {
    pub label: String,
    pub word: Word,
}

/// Commutation identities among `B[i,j]`, `r[k,l]`, `a_k`, `U` and `T_1`
/// in the closed braid group, each written as a word equal to `1`.
/// Labels `e`, `f1`, `f2`, `g`, `h`, `i`, `j`, `k` name the families; the
/// `f1` family is empty for `g = 2`.
pub fn commutation_identities(g: u16, n: u16) -> Result<Vec<Identity>> {
    GroupSpec::closed(g, n)?;
    let b = |i, j| Generator::B(i, j).word();
    let comm = Word::commutator;
    let t1 = full_twist(n, 1);
    let u = u_elem(g, n);
    let mut all_a = Word::identity();
    for k in (1..=n).rev() {
        all_a = &all_a * &a_elem(g, k);
    }
    let mut out = Vec::new();
    let mut push = |label: String, word: Word| out.push(Identity { label, word });
    for i in 1..=n {
        for j in i + 1..=n {
            for k in 1..=g {
                push(format!("e[{},{},{}]", i, j, k), &comm(&rw(i, k), &rw(j, k).inverse()) * &b(i, j));
            }
        }
    }
    for l in 1..=g.saturating_sub(2) {
        push(format!("f1[{}]", l), comm(&u, &rw(1, l)));
    }
    push("f2".to_string(), &comm(&rw(1, g - 1), &u.inverse()) * &t1);
    for i in 1..=n {
        for j in i + 1..=n {
            for k in j + 1..=n {
                let x = a_elem(g, j).conjugate_by(&a_elem(g, k));
                push(format!("g[{},{},{}]", i, j, k), comm(&x, &b(i, k)));
            }
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            push(format!("h[{},{}]", i, j), comm(&all_a, &b(i, j)));
        }
    }
    for i in 2..=n {
        for j in i + 1..=n {
            push(format!("i[{},{}]", i, j), comm(&u, &b(i, j)));
        }
    }
    push("j".to_string(), comm(&all_a, &t1));
    for i in 2..=n {
        for j in i + 1..=n {
            push(format!("k[{},{}]", i, j), comm(&t1, &b(i, j)));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn closed_two_two() {
        let p = Presentation::of(GroupSpec::closed(2, 2).unwrap()).unwrap();
        assert_eq!(
            p.generators,
            [Generator::B(1, 2), Generator::Rho(1, 1), Generator::Rho(1, 2), Generator::Rho(2, 1), Generator::Rho(2, 2)]
        );
        let c: Vec<&Word> = p.relators.iter().filter(|r| r.family == Family::C).map(|r| &r.word).collect();
        assert_eq!(c[0], &w("r[1,1]^2 r[1,2]^2 B[1,2]^-1"));
        assert_eq!(c[1], &w("r[2,1]^2 r[2,2]^2 B[1,2]^-1"));
    }

    #[test]
    fn closed_presentation_rejects_projective_plane() {
        assert!(matches!(GroupSpec::closed(1, 2), Err(Error::Unsupported(_))));
        assert!(matches!(GroupSpec::surface(1), Err(Error::Unsupported(_))));
    }

    #[test]
    fn bordered_single_strand_is_free() {
        let p = Presentation::of(GroupSpec::bordered(2, 2, 1).unwrap()).unwrap();
        assert_eq!(p.generators, [Generator::Rho(1, 1), Generator::Rho(1, 2), Generator::X(1, 1)]);
        assert!(p.relators.is_empty());
    }

    #[test]
    fn bordered_boundary_relator() {
        let p = Presentation::of(GroupSpec::bordered(1, 2, 2).unwrap()).unwrap();
        let n2: Vec<&Relator> = p.relators.iter().filter(|r| r.family == Family::N2).collect();
        assert_eq!(n2.len(), 1);
        let expected = &w("x[1,1] x[2,1] x[1,1]^-1") * &w("x[2,1]^-1 B[1,2] x[2,1] B[1,2]^-1 x[2,1]").inverse();
        assert_eq!(n2[0].word, expected);
        assert!(p.relators.iter().any(|r| r.family.is_reconstructed()));
    }

    #[test]
    fn named_elements() {
        let s23 = GroupSpec::closed(2, 3).unwrap();
        assert_eq!(NamedElement::T(2).evaluate(s23).unwrap(), w("B[1,2] B[2,3]"));
        assert_eq!(NamedElement::U.evaluate(s23).unwrap(), w("r[3,1] r[3,2] r[2,1] r[2,2]"));
        let s22 = GroupSpec::closed(2, 2).unwrap();
        assert_eq!(NamedElement::Sigma(2).evaluate(s22).unwrap(), w("r[1,2] B[1,2]^-1"));
        assert_eq!(NamedElement::Sigma(1).evaluate(s22).unwrap(), w("r[2,1] r[2,2] r[1,1]"));
        let s52 = GroupSpec::closed(5, 2).unwrap();
        assert_eq!(NamedElement::Sigma(2).evaluate(s52).unwrap(), w("r[1,2]"));
        assert_eq!(NamedElement::Sigma(3).evaluate(s52).unwrap(), w("r[1,3] r[2,5]^-1 r[2,4]^-1"));
        assert!(NamedElement::T(4).evaluate(s23).is_err());
    }

    #[test]
    fn spec_strings_round_trip() {
        for s in ["closed:g=2,n=3", "bordered:g=2,b=1,n=3", "surface:g=4", "free:rank=2"] {
            let spec: GroupSpec = s.parse().unwrap();
            assert_eq!(spec.to_string(), s);
        }
        assert!("closed:g=2".parse::<GroupSpec>().is_err());
        assert!("closed:g=1,n=2".parse::<GroupSpec>().is_err());
        assert!("torus:g=1".parse::<GroupSpec>().is_err());
    }

    #[test]
    fn relator_counts() {
        // (a) has one relation per pair of pairs with s < j, (b) g^2 per pair,
        // (c) one per strand and (d) (n-1) g per pair.
        let p = Presentation::of(GroupSpec::closed(2, 3).unwrap()).unwrap();
        let count = |f: &[Family]| p.relators.iter().filter(|r| f.contains(&r.family)).count();
        assert_eq!(count(&[Family::A1, Family::A2, Family::A3, Family::A4]), 2);
        assert_eq!(count(&[Family::B1, Family::B2, Family::B3]), 12);
        assert_eq!(count(&[Family::C]), 3);
        assert_eq!(count(&[Family::D1, Family::D2, Family::D3]), 12);
    }
}
