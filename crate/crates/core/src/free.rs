//! Dense free-group words and endomorphisms of finitely generated free groups.
//!
//! Letters are `u32` codes `2 * index + inverse`, which keeps the inner loops
//! of combing and rewriting free of map lookups.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::words::{Generator, Letter, Word};

pub type Dense = Vec<u32>;

#[inline]
pub fn inv(l: u32) -> u32 {
    l ^ 1
}

#[inline]
pub fn letter(index: usize, inverse: bool) -> u32 {
    (index as u32) << 1 | inverse as u32
}

#[inline]
pub fn index(l: u32) -> usize {
    (l >> 1) as usize
}

/// Appends `l`, cancelling against the last letter when possible.
#[inline]
pub fn push(w: &mut Dense, l: u32) {
    if w.last() == Some(&inv(l)) {
        w.pop();
    } else {
        w.push(l);
    }
}

pub fn append(w: &mut Dense, tail: &[u32]) {
    for &l in tail {
        push(w, l);
    }
}

pub fn append_inverse(w: &mut Dense, tail: &[u32]) {
    for &l in tail.iter().rev() {
        push(w, inv(l));
    }
}

pub fn inverse(w: &[u32]) -> Dense {
    w.iter().rev().map(|&l| inv(l)).collect()
}

pub fn reduce(w: &[u32]) -> Dense {
    let mut out = Vec::with_capacity(w.len());
    append(&mut out, w);
    out
}

pub fn concat(a: &[u32], b: &[u32]) -> Dense {
    let mut out = a.to_vec();
    append(&mut out, b);
    out
}

/// Applies the endomorphism sending generator `i` to `images[i]`.
pub fn substitute(w: &[u32], images: &[Dense]) -> Dense {
    let mut out = Vec::new();
    for &l in w {
        let img = &images[index(l)];
        if l & 1 == 0 {
            append(&mut out, img);
        } else {
            append_inverse(&mut out, img);
        }
    }
    out
}

/// `c w c^-1`.
pub fn conjugate(w: &[u32], c: &[u32]) -> Dense {
    let mut out = c.to_vec();
    append(&mut out, w);
    append_inverse(&mut out, c);
    out
}

/// `a^-1 b^-1 a b`.
pub fn commutator(a: &[u32], b: &[u32]) -> Dense {
    let mut out = inverse(a);
    append_inverse(&mut out, b);
    append(&mut out, a);
    append(&mut out, b);
    out
}

/// A finite list of generators with dense indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    gens: Vec<Generator>,
    lookup: BTreeMap<Generator, usize>,
}

impl Alphabet {
    pub fn new(gens: Vec<Generator>) -> Alphabet {
        let lookup = gens.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        Alphabet { gens, lookup }
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn gens(&self) -> &[Generator] {
        &self.gens
    }

    pub fn index_of(&self, g: Generator) -> Option<usize> {
        self.lookup.get(&g).copied()
    }

    pub fn gen(&self, i: usize) -> Generator {
        self.gens[i]
    }

    pub fn encode(&self, w: &Word) -> Result<Dense> {
        let mut out = Vec::with_capacity(w.len());
        for l in w.letters() {
            let i = self.index_of(l.gen).ok_or(Error::UnknownGenerator(l.gen))?;
            out.push(letter(i, l.inverse));
        }
        Ok(out)
    }

    pub fn decode(&self, w: &[u32]) -> Word {
        Word::from_letters(w.iter().map(|&l| Letter { gen: self.gens[index(l)], inverse: l & 1 == 1 }))
    }
}

/// Inverts an automorphism of the free group of rank `images.len()` given by
/// the images of the basis.
///
/// The images are read off a Stallings graph whose edges also carry labels in
/// the domain free group; folding keeps the labelled fundamental group fixed,
/// so when the graph folds to a rose the edge labels are the preimages of the
/// basis. Fails with [`Error::NotInvertible`] if the map is not onto or not
/// injective.
pub fn invert_automorphism(images: &[Dense]) -> Result<Vec<Dense>> {
    let rank = images.len();
    let mut g = FoldGraph { edges: Vec::new(), vertices: 1 };
    for (y, img) in images.iter().enumerate() {
        if img.is_empty() {
            return Err(Error::NotInvertible);
        }
        let mut at = 0usize;
        for (pos, &l) in img.iter().enumerate() {
            let next = if pos + 1 == img.len() {
                0
            } else {
                g.vertices += 1;
                g.vertices - 1
            };
            let mut label = Vec::new();
            if pos == 0 {
                label.push(letter(y, false));
            }
            if l & 1 == 0 {
                g.edges.push(Edge { from: at, to: next, gen: index(l), label, alive: true });
            } else {
                g.edges.push(Edge { from: next, to: at, gen: index(l), label: inverse(&label), alive: true });
            }
            at = next;
        }
    }
    while let Some((e1, d1, e2, d2)) = g.find_fold() {
        g.fold(e1, d1, e2, d2)?;
    }
    let mut out: Vec<Option<Dense>> = vec![None; rank];
    for e in g.edges.iter().filter(|e| e.alive) {
        if e.from != 0 || e.to != 0 || e.gen >= rank || out[e.gen].is_some() {
            return Err(Error::NotInvertible);
        }
        out[e.gen] = Some(e.label.clone());
    }
    let out: Vec<Dense> = out.into_iter().collect::<Option<Vec<_>>>().ok_or(Error::NotInvertible)?;
    for (x, pre) in out.iter().enumerate() {
        if substitute(pre, images) != [letter(x, false)] {
            return Err(Error::NotInvertible);
        }
    }
    Ok(out)
}

struct Edge {
    from: usize,
    to: usize,
    gen: usize,
    label: Dense,
    alive: bool,
}

struct FoldGraph {
    edges: Vec<Edge>,
    vertices: usize,
}

impl FoldGraph {
    /// Half-edge view: `(start, gen, forward, end, label along traversal)`.
    fn half(&self, e: usize, forward: bool) -> (usize, usize, usize, Dense) {
        let edge = &self.edges[e];
        if forward {
            (edge.from, edge.gen, edge.to, edge.label.clone())
        } else {
            (edge.to, edge.gen, edge.from, inverse(&edge.label))
        }
    }

    fn find_fold(&self) -> Option<(usize, bool, usize, bool)> {
        let mut seen: BTreeMap<(usize, usize, bool), (usize, bool)> = BTreeMap::new();
        for (i, e) in self.edges.iter().enumerate() {
            if !e.alive {
                continue;
            }
            for (start, fwd) in [(e.from, true), (e.to, false)] {
                if let Some(&(j, dj)) = seen.get(&(start, e.gen, fwd)) {
                    return Some((j, dj, i, fwd));
                }
                seen.insert((start, e.gen, fwd), (i, fwd));
            }
        }
        None
    }

    /// Gauge-transforms `v` by `t`: traversal labels `a -> b` become
    /// `g(a) L g(b)^-1`.
    fn gauge(&mut self, v: usize, t: &[u32]) {
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if e.from == v {
                let mut l = t.to_vec();
                append(&mut l, &e.label);
                e.label = l;
            }
            if e.to == v {
                append_inverse(&mut e.label, t);
            }
        }
    }

    fn fold(&mut self, e1: usize, d1: bool, e2: usize, d2: bool) -> Result<()> {
        let (_, _, w1, l1) = self.half(e1, d1);
        let (_, _, w2, l2) = self.half(e2, d2);
        if w1 == w2 {
            if l1 != l2 {
                return Err(Error::NotInvertible);
            }
            self.edges[e2].alive = false;
            return Ok(());
        }
        let (moved, keep, t) = if w2 != 0 {
            (w2, w1, concat(&inverse(&l1), &l2))
        } else {
            (w1, w2, concat(&inverse(&l2), &l1))
        };
        self.gauge(moved, &t);
        for e in self.edges.iter_mut().filter(|e| e.alive) {
            if e.from == moved {
                e.from = keep;
            }
            if e.to == moved {
                e.to = keep;
            }
        }
        let (_, _, _, a) = self.half(e1, d1);
        let (_, _, _, b) = self.half(e2, d2);
        if a != b {
            return Err(Error::NotInvertible);
        }
        self.edges[e2].alive = false;
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_word(rng: &mut ChaCha8Rng, rank: usize, len: usize) -> Dense {
        let mut w = Vec::new();
        for _ in 0..len {
            push(&mut w, letter(rng.gen_range(0..rank), rng.gen_bool(0.5)));
        }
        w
    }

    #[test]
    fn inverts_elementary_and_composite_automorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for rank in 1..5usize {
            for _ in 0..40 {
                // compose random Nielsen moves and conjugations
                let mut images: Vec<Dense> = (0..rank).map(|i| vec![letter(i, false)]).collect();
                for _ in 0..6 {
                    let i = rng.gen_range(0..rank);
                    let move_kind = rng.gen_range(0..3);
                    let mut step: Vec<Dense> = (0..rank).map(|k| vec![letter(k, false)]).collect();
                    match move_kind {
                        0 if rank > 1 => {
                            let j = (i + 1 + rng.gen_range(0..rank - 1)) % rank;
                            step[i] = reduce(&[letter(i, false), letter(j, rng.gen_bool(0.5))]);
                        }
                        1 => step[i] = vec![letter(i, true)],
                        _ => {
                            let c = random_word(&mut rng, rank, 3);
                            step = step.iter().map(|s| conjugate(s, &c)).collect();
                        }
                    }
                    images = images.iter().map(|w| substitute(w, &step)).collect();
                }
                let pre = invert_automorphism(&images).unwrap();
                for (x, p) in pre.iter().enumerate() {
                    assert_eq!(substitute(p, &images), vec![letter(x, false)]);
                    assert_eq!(substitute(&images[x], &pre), vec![letter(x, false)]);
                }
            }
        }
    }

    #[test]
    fn rejects_non_surjective_maps() {
        let images = vec![vec![letter(0, false), letter(0, false)], vec![letter(1, false)]];
        assert_eq!(invert_automorphism(&images), Err(Error::NotInvertible));
        let images = vec![vec![letter(0, false)], vec![letter(0, false)]];
        assert_eq!(invert_automorphism(&images), Err(Error::NotInvertible));
    }
}
