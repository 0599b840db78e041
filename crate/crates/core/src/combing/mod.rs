//! Solving the word problem in surface braid groups.
//!
//! For a surface with boundary the braid group is an iterated semidirect
//! product of free groups: strand `m` together with its loops generates a free
//! normal subgroup of `P_m(N_{g,b})` and conjugation by lower strands acts on
//! it by the automorphisms read off the defining relations. Combing pushes all
//! letters of the top strand to the left, leaving a unique normal form
//! `w_n w_{n-1} ... w_1` with `w_m` a reduced word in the level-`m` free
//! generators.
//!
//! Closed surfaces are handled in [`closed`] by splitting off the first
//! strand, and surface groups in [`surface`].

pub mod closed;
pub mod surface;

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::free::{self, Alphabet, Dense};
use crate::presentations::{self, GroupSpec, Presentation};
use crate::words::{Generator, Letter, Word};

pub use closed::ClosedSolver;
pub use surface::{SurfaceSolver, TraceEntry};

/// Combed normal form: `levels[0] = w_n`, ..., `levels[n-1] = w_1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CombedForm {
    pub levels: Vec<Word>,
}

impl CombedForm {
    pub fn is_identity(&self) -> bool {
        self.levels.iter().all(|w| w.is_identity())
    }

    /// The product `w_n ... w_1`.
    pub fn to_word(&self) -> Word {
        self.levels.iter().fold(Word::identity(), |acc, w| &acc * w)
    }
}

/// Conjugation actions of lower strands on the free kernels of higher ones,
/// for a surface with at least one boundary component.
#[derive(Clone, Debug)]
pub struct BorderedComber {
    spec: GroupSpec,
    n: u16,
    alphabet: Alphabet,
    level: Vec<u16>,
    /// `act[letter][z]` is `c z c^-1` for the letter code `c`, or empty when
    /// `z` is not above `c`.
    act: Vec<Vec<Dense>>,
}

impl BorderedComber {
    pub fn new(spec: GroupSpec) -> Result<BorderedComber> {
        let n = match spec {
            GroupSpec::BorderedBraid { n, .. } => n,
            _ => return Err(Error::Unsupported(format!("combing needs a bordered surface, got {}", spec))),
        };
        spec.validate()?;
        let pres = Presentation::of(spec)?;
        let alphabet = Alphabet::new(pres.generators.clone());
        let level: Vec<u16> = alphabet.gens().iter().map(|g| g.level().unwrap_or(0)).collect();
        let size = alphabet.len();
        let mut act = vec![vec![Vec::new(); size]; 2 * size];
        for c in 0..size {
            for z in 0..size {
                if level[z] <= level[c] {
                    continue;
                }
                let img = forward_image(alphabet.gen(c), alphabet.gen(z));
                act[free::letter(c, false) as usize][z] = alphabet.encode(&img)?;
            }
            for m in level[c] + 1..=n {
                let kernel: Vec<usize> = (0..size).filter(|&z| level[z] == m).collect();
                let local = |w: &Dense| -> Dense {
                    w.iter()
                        .map(|&l| {
                            let pos = kernel.iter().position(|&k| k == free::index(l)).unwrap_or(usize::MAX);
                            free::letter(pos, l & 1 == 1)
                        })
                        .collect()
                };
                let images: Vec<Dense> = kernel.iter().map(|&z| local(&act[free::letter(c, false) as usize][z])).collect();
                if images.iter().flatten().any(|&l| free::index(l) >= kernel.len()) {
                    return Err(Error::NoAction(format!("{} moves level {} outside its kernel", alphabet.gen(c), m)));
                }
                let pre = free::invert_automorphism(&images)?;
                for (pos, &z) in kernel.iter().enumerate() {
                    act[free::letter(c, true) as usize][z] = pre[pos].iter().map(|&l| free::letter(kernel[free::index(l)], l & 1 == 1)).collect();
                }
            }
        }
        Ok(BorderedComber { spec, n, alphabet, level, act })
    }

    pub fn spec(&self) -> GroupSpec {
        self.spec
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    /// `c z c^-1` as a word in the free kernel of `z`'s strand.
    pub fn action(&self, c: Letter, z: Generator) -> Result<Word> {
        let ci = self.alphabet.index_of(c.gen).ok_or(Error::UnknownGenerator(c.gen))?;
        let zi = self.alphabet.index_of(z).ok_or(Error::UnknownGenerator(z))?;
        if self.level[zi] <= self.level[ci] {
            return Err(Error::NoAction(format!("{} is not above {}", z, c.gen)));
        }
        Ok(self.alphabet.decode(&self.act[free::letter(ci, c.inverse) as usize][zi]))
    }

    /// Combs a dense word; `out[m - 1]` is the level-`m` factor.
    pub(crate) fn comb_dense(&self, w: &[u32]) -> Vec<Dense> {
        let mut out = vec![Vec::new(); self.n as usize];
        let mut current = w.to_vec();
        for m in (1..=self.n).rev() {
            // Scan right to left, keeping the suffix as K * H with K in the
            // level-m kernel and H below it. Both are stored inverted so that
            // prepending becomes pushing.
            let mut k_inv: Dense = Vec::new();
            let mut h_inv: Dense = Vec::new();
            for &l in current.iter().rev() {
                let lv = self.level[free::index(l)];
                if lv == m {
                    free::push(&mut k_inv, free::inv(l));
                } else {
                    debug_assert!(lv < m);
                    if !k_inv.is_empty() {
                        k_inv = free::substitute(&k_inv, &self.act[l as usize]);
                    }
                    free::push(&mut h_inv, free::inv(l));
                }
            }
            out[m as usize - 1] = free::inverse(&k_inv);
            current = free::inverse(&h_inv);
        }
        out
    }

    pub fn comb(&self, w: &Word) -> Result<CombedForm> {
        let dense = self.alphabet.encode(w)?;
        let levels = self.comb_dense(&dense);
        Ok(CombedForm { levels: levels.iter().rev().map(|l| self.alphabet.decode(l)).collect() })
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        let dense = self.alphabet.encode(w)?;
        Ok(self.is_trivial_dense(&dense))
    }

    pub(crate) fn is_trivial_dense(&self, w: &[u32]) -> bool {
        self.comb_dense(w).iter().all(|l| l.is_empty())
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_trivial(&(u * &v.inverse()))
    }
}

/// `c z c^-1` for a generator `c` strictly below `z`, read off the relations.
fn forward_image(c: Generator, z: Generator) -> Word {
    use Generator::{Rho, B, X};
    match (c, z) {
        (B(r, s), B(i, m)) => match presentations::b_on_b(r, s, i, m) {
            Some((w, _)) => w,
            None => z.word(),
        },
        (B(..), _) => z.word(),
        (Rho(k, l), B(i, m)) => presentations::rho_on_b(k, l, i, m).0,
        (Rho(k, l), Rho(m, t)) => presentations::rho_on_rho(k, l, m, t).0,
        (Rho(..), _) => z.word(),
        (X(u, t), B(i, m)) => presentations::x_on_b(u, t, i, m).0,
        (X(u, t), Rho(m, l)) => presentations::x_on_rho(u, t, m, l).0,
        (X(u, t), X(m, s)) => presentations::x_on_x(u, t, m, s).0,
        _ => z.word(),
    }
}

/// Decides triviality in any of the supported groups.
#[derive(Clone, Debug)]
#[allow(clippy::large_enum_variant)]
pub enum Solver {
    Closed(ClosedSolver),
    Bordered(BorderedComber),
    Surface(SurfaceSolver),
    Free(GroupSpec),
}

impl Solver {
    pub fn new(spec: GroupSpec) -> Result<Solver> {
        spec.validate()?;
        Ok(match spec {
            GroupSpec::ClosedBraid { g, n } => Solver::Closed(ClosedSolver::new(g, n)?),
            GroupSpec::BorderedBraid { .. } => Solver::Bordered(BorderedComber::new(spec)?),
            GroupSpec::ClosedSurface { g } => Solver::Surface(SurfaceSolver::new(g)?),
            GroupSpec::Free { .. } => Solver::Free(spec),
        })
    }

    pub fn spec(&self) -> GroupSpec {
        match self {
            Solver::Closed(s) => s.spec(),
            Solver::Bordered(s) => s.spec(),
            Solver::Surface(s) => s.spec(),
            Solver::Free(spec) => *spec,
        }
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        self.spec().check_word(w)?;
        match self {
            Solver::Closed(s) => s.is_trivial(w),
            Solver::Bordered(s) => s.is_trivial(w),
            Solver::Surface(s) => s.is_trivial(w),
            Solver::Free(_) => Ok(w.is_identity()),
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_trivial(&(u * &v.inverse()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::parse_word;

    fn w(s: &str) -> Word {
        parse_word(s).unwrap()
    }

    #[test]
    fn small_examples() {
        let c = BorderedComber::new(GroupSpec::bordered(2, 1, 2).unwrap()).unwrap();
        assert!(c.is_trivial(&w("[r[1,1], r[2,1]^-1] B[1,2]")).unwrap());
        assert!(!c.is_trivial(&w("r[1,1]")).unwrap());
        assert!(c.is_trivial(&w("")).unwrap());
        let f = c.comb(&w("r[1,1] r[2,1]")).unwrap();
        assert_eq!(f.levels.len(), 2);
    }

    #[test]
    fn action_tables_invert() {
        for spec in [GroupSpec::bordered(2, 1, 3).unwrap(), GroupSpec::bordered(1, 3, 3).unwrap()] {
            let c = BorderedComber::new(spec).unwrap();
            let gens = c.alphabet().gens().to_vec();
            for &x in &gens {
                for &z in &gens {
                    if z.level() <= x.level() {
                        continue;
                    }
                    let fwd = c.action(x.letter(), z).unwrap();
                    let back = fwd
                        .substitute(|y| c.action(x.letter().inv(), y).ok())
                        .unwrap();
                    assert_eq!(back, z.word());
                }
            }
        }
    }

    #[test]
    fn every_relator_combs_to_identity() {
        for spec in [
            GroupSpec::bordered(2, 1, 3).unwrap(),
            GroupSpec::bordered(1, 2, 3).unwrap(),
            GroupSpec::bordered(2, 3, 3).unwrap(),
            GroupSpec::bordered(3, 1, 4).unwrap(),
        ] {
            let c = BorderedComber::new(spec).unwrap();
            for r in Presentation::of(spec).unwrap().relators {
                assert!(c.is_trivial(&r.word).unwrap(), "{} {:?} {}", spec, r.family, r.word);
            }
        }
    }
}
