//! Word problem in `pi_1(N_g) = <p_1, ..., p_g | p_1^2 ... p_g^2>`, g >= 2.
//!
//! Besides a verdict the solver returns, for trivial words, an explicit
//! expression `w = prod_k V_k R^{e_k} V_k^-1` as an identity in the free group,
//! with `R` the surface relator. Callers lift these certificates through
//! homomorphisms defined only on the free group.
//!
//! * `g = 2`: the Klein bottle group, rewritten to the normal form `b^j a^i`
//!   in the generators `a = p_1`, `b = p_1 p_2`.
//! * `g = 3`: the orientation double cover, a genus-two orientable surface
//!   group, where Dehn's algorithm applies.
//! * `g >= 4`: Dehn's algorithm on the relator itself.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::free::{self, Dense};
use crate::presentations::{surface_relator, GroupSpec};
use crate::words::{Generator, Letter, Word};

/// One factor `V R^sign V^-1` of a triviality certificate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub conjugator: Word,
    pub sign: i8,
}

/// Multiplies out a certificate.
pub fn evaluate_trace(entries: &[TraceEntry], relator: &Word) -> Word {
    let mut out = Word::identity();
    for e in entries {
        let r = if e.sign > 0 { relator.clone() } else { relator.inverse() };
        out = &out * &r.conjugate_by(&e.conjugator);
    }
    out
}

#[derive(Clone, Debug)]
pub struct SurfaceSolver {
    g: u16,
    relator: Dense,
    dehn: Option<Dehn>,
}

// Local letters for the Klein bottle normal form.
const A: u32 = 0;
const B: u32 = 2;

// Local letters for the double cover when g = 3.
const Y2: usize = 0;
const Y3: usize = 1;
const Z1: usize = 2;
const Z2: usize = 3;
const Z3: usize = 4;

impl SurfaceSolver {
    pub fn new(g: u16) -> Result<SurfaceSolver> {
        GroupSpec::surface(g)?;
        let relator = encode_p(&surface_relator(g))?;
        let dehn = match g {
            2 => None,
            3 => Some(Dehn::new(cover_relator())),
            _ => Some(Dehn::new(relator.clone())),
        };
        Ok(SurfaceSolver { g, relator, dehn })
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec::ClosedSurface { g: self.g }
    }

    pub fn genus(&self) -> u16 {
        self.g
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        Ok(self.trivial_trace(w)?.is_some())
    }

    /// `Some(certificate)` if `w` is trivial, `None` otherwise.
    pub fn trivial_trace(&self, w: &Word) -> Result<Option<Vec<TraceEntry>>> {
        let dense = encode_p(w)?;
        Ok(self.trace_dense(&dense).map(|entries| {
            entries
                .into_iter()
                .map(|(v, sign)| TraceEntry { conjugator: decode_p(&v), sign })
                .collect()
        }))
    }

    /// Certificate over the dense alphabet `p[i] -> i - 1`.
    pub(crate) fn trace_dense(&self, w: &[u32]) -> Option<Vec<(Dense, i8)>> {
        let w = free::reduce(w);
        let trace = match self.g {
            2 => klein_trace(&w),
            3 => self.cover_trace(&w),
            _ => {
                let dehn = self.dehn.as_ref().expect("Dehn system for g >= 4");
                let mut trace = Vec::new();
                let rest = dehn.reduce(w.clone(), &mut trace);
                if rest.is_empty() {
                    Some(trace)
                } else {
                    None
                }
            }
        };
        debug_assert!(trace.as_ref().is_none_or(|t| {
            let mut prod = Vec::new();
            for (v, s) in t {
                let r = if *s > 0 { self.relator.clone() } else { free::inverse(&self.relator) };
                free::append(&mut prod, &free::conjugate(&r, v));
            }
            prod == w
        }));
        trace
    }

    fn cover_trace(&self, w: &[u32]) -> Option<Vec<(Dense, i8)>> {
        if w.len() % 2 == 1 {
            return None;
        }
        // Reidemeister-Schreier rewriting with transversal {1, p1}.
        let mut coset = 0usize;
        let mut h: Dense = Vec::new();
        for &l in w {
            let i = free::index(l);
            if l & 1 == 0 {
                if let Some(s) = schreier(coset, i) {
                    free::push(&mut h, free::letter(s, false));
                }
            } else if let Some(s) = schreier(1 - coset, i) {
                free::push(&mut h, free::letter(s, true));
            }
            coset = 1 - coset;
        }
        let mut trace = Vec::new();
        // Eliminate z1 = R1 W^-1 with R1 = z1 y2 z2 y3 z3 and W = y2 z2 y3 z3.
        let w_word: Dense = [Y2, Z2, Y3, Z3].iter().map(|&x| free::letter(x, false)).collect();
        while let Some(pos) = h.iter().position(|&l| free::index(l) == Z1) {
            let prefix = &h[..pos];
            let mut next = prefix.to_vec();
            if h[pos] & 1 == 0 {
                trace.push((cover_to_p(prefix), 1));
                free::append_inverse(&mut next, &w_word);
            } else {
                let mut conj = prefix.to_vec();
                free::append(&mut conj, &w_word);
                trace.push((cover_to_p(&conj), -1));
                free::append(&mut next, &w_word);
            }
            free::append(&mut next, &h[pos + 1..]);
            h = next;
        }
        let mut cover = Vec::new();
        let dehn = self.dehn.as_ref().expect("cover Dehn system");
        let rest = dehn.reduce(h, &mut cover);
        if !rest.is_empty() {
            return None;
        }
        // The cover relator maps to R^-1 (p1 R p1^-1).
        let p1 = free::letter(0, false);
        for (v, s) in cover {
            let v = cover_to_p(&v);
            let mut vp = v.clone();
            free::push(&mut vp, p1);
            if s > 0 {
                trace.push((v, -1));
                trace.push((vp, 1));
            } else {
                trace.push((vp, -1));
                trace.push((v, 1));
            }
        }
        Some(trace)
    }
}

fn encode_p(w: &Word) -> Result<Dense> {
    w.letters()
        .iter()
        .map(|l| match l.gen {
            Generator::P(i) => Ok(free::letter(i as usize - 1, l.inverse)),
            other => Err(Error::UnknownGenerator(other)),
        })
        .collect()
}

pub(crate) fn decode_p(w: &[u32]) -> Word {
    Word::from_letters(
        w.iter()
            .map(|&l| Letter { gen: Generator::P(free::index(l) as u16 + 1), inverse: l & 1 == 1 }),
    )
}

/// Schreier generator for `t_coset p_i t^-1`, `None` on the tree edge.
fn schreier(coset: usize, i: usize) -> Option<usize> {
    match (coset, i) {
        (0, 0) => None,
        (0, 1) => Some(Y2),
        (0, 2) => Some(Y3),
        (1, 0) => Some(Z1),
        (1, 1) => Some(Z2),
        (1, 2) => Some(Z3),
        _ => unreachable!("three crosscaps"),
    }
}

fn cover_image(x: usize) -> Dense {
    let p = |i: usize, inv: bool| free::letter(i, inv);
    match x {
        Y2 => vec![p(1, false), p(0, true)],
        Y3 => vec![p(2, false), p(0, true)],
        Z1 => vec![p(0, false), p(0, false)],
        Z2 => vec![p(0, false), p(1, false)],
        _ => vec![p(0, false), p(2, false)],
    }
}

fn cover_to_p(w: &[u32]) -> Dense {
    let images: Vec<Dense> = (0..5).map(cover_image).collect();
    free::substitute(w, &images)
}

/// `z3^-1 y3^-1 z2^-1 y2^-1 z2 y2 z3 y3`, the relator of the cover after
/// eliminating `z1`.
fn cover_relator() -> Dense {
    let l = free::letter;
    vec![l(Z3, true), l(Y3, true), l(Z2, true), l(Y2, true), l(Z2, false), l(Y2, false), l(Z3, false), l(Y3, false)]
}

/// Dehn's algorithm for a single cyclically reduced relator satisfying C'(1/6).
#[derive(Clone, Debug)]
struct Dehn {
    /// `(rotation, u, sign)` with `rotation = u^-1 R^sign u`.
    rotations: Vec<(Dense, Dense, i8)>,
}

impl Dehn {
    fn new(relator: Dense) -> Dehn {
        let mut rotations = Vec::new();
        for (base, sign) in [(relator.clone(), 1i8), (free::inverse(&relator), -1)] {
            for o in 0..base.len() {
                let mut rot = base[o..].to_vec();
                rot.extend_from_slice(&base[..o]);
                rotations.push((rot, base[..o].to_vec(), sign));
            }
        }
        Dehn { rotations }
    }

    /// Shortens `w` while more than half of a relator occurs in it; records
    /// the removed conjugates in `trace`.
    fn reduce(&self, mut w: Dense, trace: &mut Vec<(Dense, i8)>) -> Dense {
        let rlen = self.rotations[0].0.len();
        'outer: loop {
            for start in 0..w.len() {
                for (rot, u, sign) in &self.rotations {
                    let len = rot.iter().zip(&w[start..]).take_while(|(a, b)| a == b).count();
                    if 2 * len > rlen {
                        let prefix = &w[..start];
                        let mut conj = prefix.to_vec();
                        free::append_inverse(&mut conj, u);
                        trace.push((conj, *sign));
                        let mut next = prefix.to_vec();
                        free::append_inverse(&mut next, &rot[len..]);
                        free::append(&mut next, &w[start + len..]);
                        w = next;
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }
}

/// Klein bottle group `<a, b | a b a^-1 b>` with `a = p1`, `b = p1 p2`.
fn klein_trace(w: &[u32]) -> Option<Vec<(Dense, i8)>> {
    // p1 -> a, p2 -> a^-1 b
    let images = vec![vec![A], vec![A | 1, B]];
    let ab = free::substitute(w, &images);
    let (rest, trace) = klein_rewrite(ab);
    if !rest.is_empty() {
        return None;
    }
    // a -> p1, b -> p1 p2
    let back = vec![vec![free::letter(0, false)], vec![free::letter(0, false), free::letter(1, false)]];
    Some(trace.into_iter().map(|(v, s)| (free::substitute(&v, &back), s)).collect())
}

/// Rewrites a word in `a, b` to `b^j a^i` using `a^e b^d = b^-d a^e`.
///
/// Returns the normal form and a certificate relative to `K = a b a^-1 b`.
pub(crate) fn klein_rewrite(mut w: Dense) -> (Dense, Vec<(Dense, i8)>) {
    let k: Dense = vec![A, B, A | 1, B];
    let rel = Dehn::new(k);
    let mut trace = Vec::new();
    while let Some(pos) = (0..w.len().saturating_sub(1)).find(|&i| w[i] | 1 == A | 1 && w[i + 1] | 1 == B | 1) {
        let (a, b) = (w[pos], w[pos + 1]);
        // D = a^e b^d a^-e b^d is a cyclic permutation of K or K^-1.
        let d: Dense = vec![a, b, free::inv(a), b];
        let (u, sign) = rel
            .rotations
            .iter()
            .find(|(rot, _, _)| *rot == d)
            .map(|(_, u, s)| (u.clone(), *s))
            .expect("commutation move is a relator conjugate");
        let mut conj = w[..pos].to_vec();
        free::append_inverse(&mut conj, &u);
        trace.push((conj, sign));
        let mut next = w[..pos].to_vec();
        free::push(&mut next, free::inv(b));
        free::push(&mut next, a);
        free::append(&mut next, &w[pos + 2..]);
        w = next;
    }
    (w, trace)
}

/// The normal form `b^j a^i` of a Klein bottle word given in `g[1] = a`,
/// `g[2] = b`, as `(j, i)`.
pub fn klein_normal_form(w: &Word) -> Result<(i64, i64)> {
    let mut dense = Vec::new();
    for l in w.letters() {
        let code = match l.gen {
            Generator::Abstract(1) => A,
            Generator::Abstract(2) => B,
            other => return Err(Error::UnknownGenerator(other)),
        };
        free::push(&mut dense, code | l.inverse as u32);
    }
    let (nf, _) = klein_rewrite(dense);
    let j = nf.iter().filter(|&&l| l | 1 == B | 1).map(|&l| if l & 1 == 0 { 1 } else { -1 }).sum();
    let i = nf.iter().filter(|&&l| l | 1 == A | 1).map(|&l| if l & 1 == 0 { 1 } else { -1 }).sum();
    Ok((j, i))
}
