//! Word problem in `P_n(N_g)` for closed surfaces.
//!
//! Forgetting all strands but the first gives a split extension
//! `1 -> A -> P_n(N_g) -> pi_1(N_g) -> 1` whose kernel `A`, generated by the
//! `r[i,k]` and `B[i,j]` with `i >= 2`, is a copy of `P_{n-1}(N_{g,1})`. The
//! remaining generators `B[1,j]` are expressible in `A` through the relations
//! of type (c), and the `r[1,l]` act on `A` by conjugation.
//!
//! A word `w` is swept left to right into the form `s(S) * a` where `S` is a
//! free word in the `p[l]`, `s` is the free lift `p[l] -> r[1,l]` and `a` is a
//! word in `A`. If `S` is nontrivial in `pi_1(N_g)` so is `w`. Otherwise the
//! surface solver provides `S` as a product of conjugates of the surface
//! relator, whose lift is `T_1 = B[1,2] ... B[1,n]`, so `s(S)` becomes an
//! explicit word in `A` and the question is settled by combing in
//! `P_{n-1}(N_{g,1})`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::free::{self, Alphabet, Dense};
use crate::presentations::{self, section_images, GroupSpec, Presentation};
use crate::words::{Generator, Letter, Word};

use super::{BorderedComber, SurfaceSolver};

#[derive(Clone, Copy, Debug)]
enum Kind {
    Kernel(usize),
    Twist(usize),
    Cross(usize),
}

#[derive(Clone, Debug)]
pub struct ClosedSolver {
    g: u16,
    n: u16,
    alphabet: Alphabet,
    kinds: Vec<Kind>,
    /// Kernel generators in the closed group's names.
    kernel: Alphabet,
    /// `B[1,j]` as a kernel word, indexed by `j - 2`.
    twists: Vec<Dense>,
    /// `r[1,l] x r[1,l]^-1` on kernel generators, indexed by `l - 1`.
    forward: Vec<Vec<Dense>>,
    /// `r[1,l]^-1 x r[1,l]`.
    backward: Vec<Vec<Dense>>,
    /// Whether `backward[l]` was obtained by folding rather than from the
    /// product relation.
    folded: Vec<bool>,
    t1: Dense,
    comber: Option<BorderedComber>,
    surface: SurfaceSolver,
}

impl ClosedSolver {
    pub fn new(g: u16, n: u16) -> Result<ClosedSolver> {
        let spec = GroupSpec::closed(g, n)?;
        let surface = SurfaceSolver::new(g)?;
        let pres = Presentation::of(spec)?;
        let alphabet = Alphabet::new(pres.generators.clone());
        let kernel_gens: Vec<Generator> = pres
            .generators
            .iter()
            .copied()
            .filter(|gen| matches!(gen, Generator::B(i, _) | Generator::Rho(i, _) if *i >= 2))
            .collect();
        let kernel = Alphabet::new(kernel_gens);
        let kinds = pres
            .generators
            .iter()
            .map(|&gen| match gen {
                Generator::B(1, j) => Kind::Twist(j as usize - 2),
                Generator::Rho(1, l) => Kind::Cross(l as usize - 1),
                other => Kind::Kernel(kernel.index_of(other).expect("kernel generator")),
            })
            .collect();
        let mut solver = ClosedSolver {
            g,
            n,
            alphabet,
            kinds,
            kernel,
            twists: Vec::new(),
            forward: Vec::new(),
            backward: Vec::new(),
            folded: Vec::new(),
            t1: Vec::new(),
            comber: None,
            surface,
        };
        if n == 1 {
            return Ok(solver);
        }
        for j in 2..=n {
            // B[1,j] = r[j,1]^2 ... r[j,g]^2 (B[2,j] ... B[j-1,j] B[j,j+1] ... B[j,n])^-1
            let mut e = Word::identity();
            for l in 1..=g {
                e = &e * &Word::power_of(Generator::Rho(j, l), 2);
            }
            let mut rest = Word::identity();
            for k in 2..j {
                rest = &rest * &Generator::B(k, j).word();
            }
            for k in j + 1..=n {
                rest = &rest * &Generator::B(j, k).word();
            }
            e = &e * &rest.inverse();
            let dense = solver.kernel.encode(&e)?;
            solver.twists.push(dense);
        }
        let mut t1 = Vec::new();
        for t in &solver.twists {
            free::append(&mut t1, t);
        }
        solver.t1 = t1;
        for l in 1..=g {
            let images = solver
                .kernel
                .gens()
                .iter()
                .map(|&z| {
                    let img = match z {
                        Generator::Rho(j, t) => presentations::rho_on_rho(1, l, j, t).0,
                        _ => z.word(),
                    };
                    solver.to_kernel(&img)
                })
                .collect::<Result<Vec<Dense>>>()?;
            solver.forward.push(images);
        }
        for l in 0..g as usize {
            match free::invert_automorphism(&solver.forward[l]) {
                Ok(inv) => {
                    solver.backward.push(inv);
                    solver.folded.push(true);
                }
                Err(_) => {
                    let inv = (0..solver.kernel.len())
                        .map(|z| solver.inverse_by_product_relation(l, &[free::letter(z, false)]))
                        .collect();
                    solver.backward.push(inv);
                    solver.folded.push(false);
                }
            }
        }
        solver.comber = Some(BorderedComber::new(GroupSpec::bordered(g, 1, n - 1)?)?);
        Ok(solver)
    }

    pub fn spec(&self) -> GroupSpec {
        GroupSpec::ClosedBraid { g: self.g, n: self.n }
    }

    /// Rewrites a word without `r[1,l]` letters as a kernel word.
    fn to_kernel(&self, w: &Word) -> Result<Dense> {
        let mut out = Vec::new();
        for l in w.letters() {
            match l.gen {
                Generator::B(1, j) => {
                    let t = &self.twists[j as usize - 2];
                    if l.inverse {
                        free::append_inverse(&mut out, t);
                    } else {
                        free::append(&mut out, t);
                    }
                }
                gen => {
                    let i = self.kernel.index_of(gen).ok_or_else(|| {
                        Error::RewriteFailure(alloc::format!("{} does not lie in the kernel", gen))
                    })?;
                    free::push(&mut out, free::letter(i, l.inverse));
                }
            }
        }
        Ok(out)
    }

    /// `r[1,l]^-1 x r[1,l]` using `r[1,l]^-2 = Q T_1^-1 P` where
    /// `P = r[1,1]^2 ... r[1,l-1]^2` and `Q = r[1,l+1]^2 ... r[1,g]^2`.
    fn inverse_by_product_relation(&self, l: usize, x: &[u32]) -> Dense {
        let mut y = x.to_vec();
        for k in (0..l).rev() {
            y = free::substitute(&y, &self.forward[k]);
            y = free::substitute(&y, &self.forward[k]);
        }
        y = free::conjugate(&y, &free::inverse(&self.t1));
        for k in (l + 1..self.g as usize).rev() {
            y = free::substitute(&y, &self.forward[k]);
            y = free::substitute(&y, &self.forward[k]);
        }
        free::substitute(&y, &self.forward[l])
    }

    /// Whether the inverse action of `r[1,l]` came from folding.
    pub fn inverse_action_folded(&self, l: u16) -> bool {
        self.folded[l as usize - 1]
    }

    /// `r[1,l]^sign z r[1,l]^-sign` for a kernel generator `z`, as a word in
    /// the closed group's generators.
    pub fn kernel_action(&self, l: u16, inverse: bool, z: Generator) -> Result<Word> {
        let zi = self.kernel.index_of(z).ok_or(Error::UnknownGenerator(z))?;
        let table = if inverse { &self.backward } else { &self.forward };
        let row = table.get(l as usize - 1).ok_or(Error::UnknownGenerator(Generator::Rho(1, l)))?;
        Ok(self.kernel.decode(&row[zi]))
    }

    /// Splits `w` as `s(S) * a`, returning `S` (dense in `p`) and `a`.
    fn sweep(&self, w: &[u32]) -> (Dense, Dense) {
        let mut s = Vec::new();
        let mut a: Dense = Vec::new();
        for &l in w {
            match self.kinds[free::index(l)] {
                Kind::Kernel(i) => free::push(&mut a, free::letter(i, l & 1 == 1)),
                Kind::Twist(j) => {
                    if l & 1 == 0 {
                        free::append(&mut a, &self.twists[j]);
                    } else {
                        free::append_inverse(&mut a, &self.twists[j]);
                    }
                }
                Kind::Cross(c) => {
                    // s(S) a r^e = s(S) r^e (r^-e a r^e)
                    a = if l & 1 == 0 {
                        free::substitute(&a, &self.backward[c])
                    } else {
                        free::substitute(&a, &self.forward[c])
                    };
                    free::push(&mut s, free::letter(c, l & 1 == 1));
                }
            }
        }
        (s, a)
    }

    /// Conjugates a kernel word by the lift of a `p`-word.
    fn conjugate_by_lift(&self, x: &[u32], v: &[u32]) -> Dense {
        let mut y = x.to_vec();
        for &l in v.iter().rev() {
            let table = if l & 1 == 0 { &self.forward } else { &self.backward };
            y = free::substitute(&y, &table[free::index(l)]);
        }
        y
    }

    /// Rewrites a word in the closed group as a kernel word, if its image in
    /// the surface group is trivial. The result uses the closed group's names.
    pub fn rewrite_to_kernel(&self, w: &Word) -> Result<Option<Word>> {
        let dense = self.alphabet.encode(w)?;
        Ok(self.kernel_part(&dense).map(|a| self.kernel.decode(&a)))
    }

    fn kernel_part(&self, w: &[u32]) -> Option<Dense> {
        let (s, a) = self.sweep(w);
        if s.is_empty() {
            return Some(a);
        }
        let trace = self.surface.trace_dense(&s)?;
        let mut total = Vec::new();
        for (v, sign) in trace {
            let r = if sign > 0 { self.t1.clone() } else { free::inverse(&self.t1) };
            free::append(&mut total, &self.conjugate_by_lift(&r, &v));
        }
        free::append(&mut total, &a);
        Some(total)
    }

    /// Kernel word in the names of `P_{n-1}(N_{g,1})`: strand `i` becomes `i - 1`.
    pub fn kernel_to_bordered(w: &Word) -> Word {
        Word::from_letters(w.letters().iter().map(|l| Letter {
            gen: match l.gen {
                Generator::B(i, j) => Generator::B(i - 1, j - 1),
                Generator::Rho(k, t) => Generator::Rho(k - 1, t),
                other => other,
            },
            inverse: l.inverse,
        }))
    }

    /// Inverse of [`Self::kernel_to_bordered`].
    pub fn bordered_to_kernel(w: &Word) -> Word {
        Word::from_letters(w.letters().iter().map(|l| Letter {
            gen: match l.gen {
                Generator::B(i, j) => Generator::B(i + 1, j + 1),
                Generator::Rho(k, t) => Generator::Rho(k + 1, t),
                other => other,
            },
            inverse: l.inverse,
        }))
    }

    pub fn is_trivial(&self, w: &Word) -> Result<bool> {
        if self.n == 1 {
            let p = w.substitute(|gen| match gen {
                Generator::Rho(1, l) => Some(Generator::P(l).word()),
                _ => None,
            })?;
            return self.surface.is_trivial(&p);
        }
        let dense = self.alphabet.encode(w)?;
        match self.kernel_part(&dense) {
            None => Ok(false),
            Some(a) => {
                let comber = self.comber.as_ref().expect("comber for n >= 2");
                // kernel index i and bordered index i coincide: both list
                // B[i,j] then r[k,l] in increasing order
                Ok(comber.is_trivial_dense(&a))
            }
        }
    }

    pub fn equal(&self, u: &Word, v: &Word) -> Result<bool> {
        self.is_trivial(&(u * &v.inverse()))
    }

    /// `lambda(w)`: forget all strands but the first.
    pub fn forget(&self, w: &Word) -> Result<Word> {
        w.substitute(|gen| match gen {
            Generator::Rho(1, l) => Some(Generator::P(l).word()),
            g if self.alphabet.index_of(g).is_some() => Some(Word::identity()),
            _ => None,
        })
    }

    /// `sigma(p)` for a surface word `p`.
    pub fn section(&self, p: &Word) -> Result<Word> {
        let images = section_images(self.g, self.n);
        p.substitute(|gen| images.iter().find(|(x, _)| *x == gen).map(|(_, w)| w.clone()))
    }

    /// `tau(w) = sigma(lambda(w))^-1 w`, the kernel component of `w`.
    pub fn tau(&self, w: &Word) -> Result<Word> {
        let s = self.section(&self.forget(w)?)?;
        Ok(&s.inverse() * w)
    }
}
