//! Quotients by the lower exponent-`p` central series.
//!
//! `P_1(G) = G`, `P_{c+1}(G) = [P_c(G), G] P_c(G)^p`. The quotient
//! `G / P_{c+1}(G)` is a finite `p`-group, represented by a consistent
//! power-commutator presentation on generators `g_1, ..., g_m` ordered by
//! weight. Elements are exponent vectors with entries in `0..p`.
//!
//! Class one is `H_1(G; F_p)`. Each further class is obtained by adding a
//! central tail of order `p` to every relation that does not define a
//! generator, solving the linear conditions imposed by the consistency checks
//! and by the relators of `G`, and keeping the surviving tails as generators
//! of the next layer.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::error::{Error, Result};
use crate::free::{self, Alphabet, Dense};
use crate::linalg;
use crate::presentations::Presentation;
use crate::words::Word;

/// Exponent vector of an element.
pub type Exp = Vec<u32>;
type Sparse = Vec<(usize, u32)>;

/// Default cap on the order of a computed quotient.
pub const DEFAULT_ORDER_LIMIT: u128 = 1 << 20;

/// How a power-commutator generator was introduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DefinitionKind {
    /// Image of the given defining generator of `G`.
    Image(usize),
    /// `g_i^p`.
    Power(usize),
    /// `[g_j, g_i]` with `j > i`.
    Commutator(usize, usize),
}

/// The generator `t` satisfies `lhs = prefix * t`, `lhs` given by `kind`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Definition {
    pub kind: DefinitionKind,
    pub prefix: Vec<(usize, u32)>,
}

/// Power and commutator tables with a collector.
#[derive(Clone, Debug)]
struct Tables {
    p: u32,
    /// `g_i^p`.
    power: Vec<Sparse>,
    /// `comm[j][i] = [g_j, g_i]` for `i < j`.
    comm: Vec<Vec<Sparse>>,
}

impl Tables {
    fn len(&self) -> usize {
        self.power.len()
    }

    fn identity(&self) -> Exp {
        vec![0; self.len()]
    }

    /// `v := v * g_i` by collection from the left.
    fn mul_gen(&self, v: &mut [u32], i: usize) {
        let m = self.len();
        let mut stack = vec![i];
        while let Some(k) = stack.pop() {
            let moves = (k + 1..m).any(|j| v[j] != 0 && !self.comm[j][k].is_empty());
            if !moves {
                v[k] += 1;
                if v[k] == self.p {
                    v[k] = 0;
                    push_sparse(&mut stack, &self.power[k]);
                }
                continue;
            }
            // v = prefix g_k^e suffix, and suffix g_k = g_k suffix^{g_k}
            let mut pending: Vec<usize> = Vec::new();
            v[k] += 1;
            if v[k] == self.p {
                v[k] = 0;
                for &(j, e) in &self.power[k] {
                    pending.extend(core::iter::repeat_n(j, e as usize));
                }
            }
            for j in k + 1..m {
                for _ in 0..v[j] {
                    pending.push(j);
                    for &(h, e) in &self.comm[j][k] {
                        pending.extend(core::iter::repeat_n(h, e as usize));
                    }
                }
                v[j] = 0;
            }
            stack.extend(pending.into_iter().rev());
        }
    }

    fn mul(&self, v: &mut [u32], w: &[u32]) {
        for (j, &e) in w.iter().enumerate() {
            for _ in 0..e {
                self.mul_gen(v, j);
            }
        }
    }

    fn product(&self, a: &[u32], b: &[u32]) -> Exp {
        let mut v = a.to_vec();
        self.mul(&mut v, b);
        v
    }

    fn inverse(&self, a: &[u32]) -> Exp {
        let mut z = a.to_vec();
        let mut y = self.identity();
        for i in 0..self.len() {
            if z[i] != 0 {
                let e = self.p - z[i];
                for _ in 0..e {
                    self.mul_gen(&mut z, i);
                }
                y[i] = e;
            }
        }
        y
    }

    fn pow(&self, a: &[u32], k: u32) -> Exp {
        let mut v = self.identity();
        for _ in 0..k {
            self.mul(&mut v, a);
        }
        v
    }

    /// `a^-1 b^-1 a b`.
    fn commutator(&self, a: &[u32], b: &[u32]) -> Exp {
        let mut v = self.inverse(&self.product(b, a));
        self.mul(&mut v, a);
        self.mul(&mut v, b);
        v
    }

    fn expand_sparse(&self, s: &Sparse) -> Exp {
        let mut v = self.identity();
        for &(j, e) in s {
            v[j] = e;
        }
        v
    }
}

fn push_sparse(stack: &mut Vec<usize>, s: &Sparse) {
    for &(j, e) in s.iter().rev() {
        stack.extend(core::iter::repeat_n(j, e as usize));
    }
}

fn sparse(v: &[u32]) -> Sparse {
    v.iter().enumerate().filter(|(_, &e)| e != 0).map(|(j, &e)| (j, e)).collect()
}

/// `G / P_{c+1}(G)` together with the images of the generators of `G`.
#[derive(Clone, Debug)]
pub struct PQuotient {
    class: u32,
    source: Presentation,
    alphabet: Alphabet,
    relators: Vec<Dense>,
    tables: Tables,
    weights: Vec<u32>,
    defs: Vec<Definition>,
    images: Vec<Exp>,
    limit: u128,
}

enum Tail {
    Power(usize),
    Comm(usize, usize),
    Image(usize),
}

impl PQuotient {
    /// `G / P_2(G) = H_1(G; F_p)`.
    pub fn class_one(pres: &Presentation, p: u32, limit: u128) -> Result<PQuotient> {
        if p < 2 || (2..p).any(|d| d * d <= p && p.is_multiple_of(d)) {
            return Err(Error::Unsupported(format!("{} is not a prime", p)));
        }
        let alphabet = Alphabet::new(pres.generators.clone());
        let relators: Vec<Dense> = pres.relator_words().map(|w| alphabet.encode(w)).collect::<Result<_>>()?;
        let d = alphabet.len();
        let mut rows = exponent_rows(&relators, d, p);
        let pivots = linalg::rref(&mut rows, p);
        let free_cols: Vec<usize> = (0..d).filter(|c| !pivots.contains(c)).collect();
        let m = free_cols.len();
        check_limit(p, m, limit)?;
        let mut images = vec![vec![0; m]; d];
        for (k, &f) in free_cols.iter().enumerate() {
            images[f][k] = 1;
        }
        for (r, &c) in pivots.iter().enumerate() {
            for (k, &f) in free_cols.iter().enumerate() {
                images[c][k] = (p - rows[r][f]) % p;
            }
        }
        let tables = Tables { p, power: vec![Vec::new(); m], comm: vec![vec![Vec::new(); m]; m] };
        let defs = free_cols
            .iter()
            .map(|&f| Definition { kind: DefinitionKind::Image(f), prefix: Vec::new() })
            .collect();
        Ok(PQuotient {
            class: 1,
            source: pres.clone(),
            alphabet,
            relators,
            tables,
            weights: vec![1; m],
            defs,
            images,
            limit,
        })
    }

    /// Computes `G / P_{c+1}(G)` for `c = class`.
    pub fn new(pres: &Presentation, p: u32, class: u32, limit: u128) -> Result<PQuotient> {
        let mut q = PQuotient::class_one(pres, p, limit)?;
        while q.class < class {
            q = q.next_class()?;
        }
        Ok(q)
    }

    pub fn p(&self) -> u32 {
        self.tables.p
    }

    pub fn class(&self) -> u32 {
        self.class
    }

    pub fn source(&self) -> &Presentation {
        &self.source
    }

    /// Number of power-commutator generators, i.e. `log_p` of the order.
    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn order_log(&self) -> u32 {
        self.len() as u32
    }

    /// The order as a decimal string.
    pub fn order_decimal(&self) -> String {
        decimal_power(self.p(), self.order_log())
    }

    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// `log_p |P_k / P_{k+1}|`.
    pub fn rank(&self, k: u32) -> usize {
        self.weights.iter().filter(|&&w| w == k).count()
    }

    pub fn definitions(&self) -> &[Definition] {
        &self.defs
    }

    /// Image of the `i`-th defining generator of `G`.
    pub fn generator_image(&self, i: usize) -> &Exp {
        &self.images[i]
    }

    pub fn identity(&self) -> Exp {
        self.tables.identity()
    }

    pub fn unit(&self, i: usize) -> Exp {
        let mut v = self.identity();
        v[i] = 1;
        v
    }

    pub fn multiply(&self, a: &[u32], b: &[u32]) -> Exp {
        self.tables.product(a, b)
    }

    pub fn inverse(&self, a: &[u32]) -> Exp {
        self.tables.inverse(a)
    }

    pub fn pow(&self, a: &[u32], k: u32) -> Exp {
        self.tables.pow(a, k)
    }

    pub fn commutator(&self, a: &[u32], b: &[u32]) -> Exp {
        self.tables.commutator(a, b)
    }

    /// Weight of the layer an element lies in; `None` for the identity.
    pub fn weight(&self, a: &[u32]) -> Option<u32> {
        a.iter().position(|&e| e != 0).map(|i| self.weights[i])
    }

    /// Image of a word in the generators of `G`.
    pub fn image(&self, w: &Word) -> Result<Exp> {
        let dense = self.alphabet.encode(w)?;
        Ok(self.image_dense(&dense))
    }

    fn image_dense(&self, w: &[u32]) -> Exp {
        let inverses: Vec<Option<Exp>> = vec![None; self.images.len()];
        let mut inverses = inverses;
        let mut v = self.identity();
        for &l in w {
            let i = free::index(l);
            if l & 1 == 0 {
                self.tables.mul(&mut v, &self.images[i]);
            } else {
                let inv = inverses[i].get_or_insert_with(|| self.tables.inverse(&self.images[i]));
                self.tables.mul(&mut v, inv);
            }
        }
        v
    }

    /// Formats an exponent vector as `g1 g3^2`, or `1` for the identity.
    pub fn format(&self, a: &[u32]) -> String {
        let mut s = String::new();
        for (i, &e) in a.iter().enumerate().filter(|(_, &e)| e != 0) {
            if !s.is_empty() {
                s.push(' ');
            }
            let _ = write!(s, "g{}", i + 1);
            if e != 1 {
                let _ = write!(s, "^{}", e);
            }
        }
        if s.is_empty() {
            s.push('1');
        }
        s
    }

    /// Images of this quotient's generators under the homomorphism to
    /// `target` determined by the images of the defining generators of `G`.
    ///
    /// The map must be well defined; it is evaluated along the definitions.
    pub fn induced_images<F>(&self, target: &PQuotient, mut gen_image: F) -> Result<Vec<Exp>>
    where
        F: FnMut(usize) -> Result<Exp>,
    {
        let mut out: Vec<Exp> = Vec::with_capacity(self.len());
        for def in &self.defs {
            let mut prefix = target.identity();
            for &(j, e) in &def.prefix {
                for _ in 0..e {
                    target.tables.mul(&mut prefix, &out[j]);
                }
            }
            let lhs = match def.kind {
                DefinitionKind::Image(x) => gen_image(x)?,
                DefinitionKind::Power(i) => target.pow(&out[i], self.p()),
                DefinitionKind::Commutator(j, i) => target.commutator(&out[j], &out[i]),
            };
            out.push(target.multiply(&target.inverse(&prefix), &lhs));
        }
        Ok(out)
    }

    /// Maps an element along precomputed generator images.
    pub fn map_element(&self, target: &PQuotient, images: &[Exp], a: &[u32]) -> Exp {
        let mut v = target.identity();
        for (j, &e) in a.iter().enumerate() {
            for _ in 0..e {
                target.tables.mul(&mut v, &images[j]);
            }
        }
        v
    }

    /// `G / P_{c+2}(G)`.
    pub fn next_class(&self) -> Result<PQuotient> {
        let p = self.p();
        let m = self.len();
        let defined = |kind: DefinitionKind| self.defs.iter().any(|d| d.kind == kind);
        let mut tails = Vec::new();
        for i in 0..m {
            if !defined(DefinitionKind::Power(i)) {
                tails.push(Tail::Power(i));
            }
        }
        for j in 0..m {
            for i in 0..j {
                if !defined(DefinitionKind::Commutator(j, i)) {
                    tails.push(Tail::Comm(j, i));
                }
            }
        }
        for x in 0..self.images.len() {
            if !defined(DefinitionKind::Image(x)) {
                tails.push(Tail::Image(x));
            }
        }
        let t_count = tails.len();
        let big = m + t_count;
        let mut cover = Tables { p, power: vec![Vec::new(); big], comm: vec![vec![Vec::new(); big]; big] };
        for i in 0..m {
            cover.power[i] = self.tables.power[i].clone();
            for j in i + 1..m {
                cover.comm[j][i] = self.tables.comm[j][i].clone();
            }
        }
        let mut cover_images: Vec<Exp> = self
            .images
            .iter()
            .map(|v| {
                let mut w = v.clone();
                w.resize(big, 0);
                w
            })
            .collect();
        for (t, tail) in tails.iter().enumerate() {
            match *tail {
                Tail::Power(i) => cover.power[i].push((m + t, 1)),
                Tail::Comm(j, i) => cover.comm[j][i].push((m + t, 1)),
                Tail::Image(x) => cover_images[x][m + t] = 1,
            }
        }

        let mut equations: Vec<Vec<u32>> = Vec::new();
        let mut record = |left: Exp, right: Exp| {
            assert!(left[..m] == right[..m], "inconsistent power-commutator presentation");
            let row: Vec<u32> = (m..big).map(|t| (left[t] + p - right[t]) % p).collect();
            if row.iter().any(|&x| x != 0) {
                equations.push(row);
            }
        };
        let unit = |i: usize| {
            let mut v = vec![0; big];
            v[i] = 1;
            v
        };
        for k in 0..m {
            for j in 0..k {
                for i in 0..j {
                    // (g_k g_j) g_i = g_k (g_j g_i)
                    let mut left = unit(k);
                    cover.mul_gen(&mut left, j);
                    cover.mul_gen(&mut left, i);
                    let mut ji = unit(j);
                    cover.mul_gen(&mut ji, i);
                    let right = cover.product(&unit(k), &ji);
                    record(left, right);
                }
            }
        }
        for j in 0..m {
            let gj_pow = cover.expand_sparse(&cover.power[j]);
            for i in 0..j {
                // g_j^{p-1} (g_j g_i) = (g_j^p) g_i
                let mut ji = unit(j);
                cover.mul_gen(&mut ji, i);
                let left = cover.product(&cover.pow(&unit(j), p - 1), &ji);
                let mut right = gj_pow.clone();
                cover.mul_gen(&mut right, i);
                record(left, right);
                // g_j (g_i^p) = (g_j g_i^{p-1}) g_i
                let gi_pow = cover.expand_sparse(&cover.power[i]);
                let left = cover.product(&unit(j), &gi_pow);
                let mut right = cover.product(&unit(j), &cover.pow(&unit(i), p - 1));
                cover.mul_gen(&mut right, i);
                record(left, right);
            }
            // g_j (g_j^p) = (g_j^p) g_j
            let left = cover.product(&unit(j), &gj_pow);
            let mut right = gj_pow.clone();
            cover.mul_gen(&mut right, j);
            record(left, right);
        }
        let inverses: Vec<Exp> = cover_images.iter().map(|v| cover.inverse(v)).collect();
        for r in &self.relators {
            let mut v = vec![0; big];
            for &l in r {
                let i = free::index(l);
                let img = if l & 1 == 0 { &cover_images[i] } else { &inverses[i] };
                cover.mul(&mut v, img);
            }
            record(v, vec![0; big]);
        }

        let pivots = linalg::rref(&mut equations, p);
        let kept: Vec<usize> = (0..t_count).filter(|t| !pivots.contains(t)).collect();
        let new_len = m + kept.len();
        check_limit(p, new_len, self.limit)?;
        // tail t as a vector over the kept tails
        let mut expr: Vec<Vec<u32>> = vec![vec![0; kept.len()]; t_count];
        for (q, &t) in kept.iter().enumerate() {
            expr[t][q] = 1;
        }
        for (r, &t) in pivots.iter().enumerate() {
            for (q, &f) in kept.iter().enumerate() {
                expr[t][q] = (p - equations[r][f]) % p;
            }
        }
        let rewrite = |v: &[u32]| -> Exp {
            let mut out = v[..m].to_vec();
            out.resize(new_len, 0);
            for t in 0..t_count {
                let e = v[m + t];
                if e == 0 {
                    continue;
                }
                for q in 0..kept.len() {
                    out[m + q] = (out[m + q] + e * expr[t][q]) % p;
                }
            }
            out
        };
        let mut tables = Tables { p, power: vec![Vec::new(); new_len], comm: vec![vec![Vec::new(); new_len]; new_len] };
        for i in 0..m {
            tables.power[i] = sparse(&rewrite(&cover.expand_sparse(&cover.power[i])));
            for j in i + 1..m {
                tables.comm[j][i] = sparse(&rewrite(&cover.expand_sparse(&cover.comm[j][i])));
            }
        }
        let images = cover_images.iter().map(|v| rewrite(v)).collect();
        let mut defs = self.defs.clone();
        let mut weights = self.weights.clone();
        for &t in &kept {
            let (kind, prefix) = match tails[t] {
                Tail::Power(i) => (DefinitionKind::Power(i), self.tables.power[i].clone()),
                Tail::Comm(j, i) => (DefinitionKind::Commutator(j, i), self.tables.comm[j][i].clone()),
                Tail::Image(x) => (DefinitionKind::Image(x), sparse(&self.images[x])),
            };
            defs.push(Definition { kind, prefix });
            weights.push(self.class + 1);
        }
        Ok(PQuotient {
            class: self.class + 1,
            source: self.source.clone(),
            alphabet: self.alphabet.clone(),
            relators: self.relators.clone(),
            tables,
            weights,
            defs,
            images,
            limit: self.limit,
        })
    }
}

fn exponent_rows(relators: &[Dense], d: usize, p: u32) -> Vec<Vec<u32>> {
    relators
        .iter()
        .map(|r| {
            let mut row = vec![0i64; d];
            for &l in r {
                row[free::index(l)] += if l & 1 == 0 { 1 } else { -1 };
            }
            row.iter().map(|&x| x.rem_euclid(p as i64) as u32).collect()
        })
        .collect()
}

fn check_limit(p: u32, m: usize, limit: u128) -> Result<()> {
    let mut order: u128 = 1;
    for _ in 0..m {
        order = order.saturating_mul(p as u128);
        if order > limit {
            return Err(Error::ResourceLimit(format!(
                "quotient order exceeds the limit {} (reached {}^{} or more)",
                limit, p, m
            )));
        }
    }
    Ok(())
}

/// `dim H_1(G; F_p)`.
pub fn h1_dimension(pres: &Presentation, p: u32) -> Result<usize> {
    let alphabet = Alphabet::new(pres.generators.clone());
    let relators: Vec<Dense> = pres.relator_words().map(|w| alphabet.encode(w)).collect::<Result<_>>()?;
    let rows = exponent_rows(&relators, alphabet.len(), p);
    Ok(alphabet.len() - linalg::rank(&rows, p))
}

/// Orders and layer ranks of the quotients `G / P_{c+1}(G)`, `c = 1..`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationReport {
    pub p: u32,
    /// `log_p |G / P_{c+1}(G)|` at index `c - 1`.
    pub orders_log: Vec<u32>,
    /// `log_p |P_c / P_{c+1}|` at index `c - 1`.
    pub ranks: Vec<u32>,
}

impl FiltrationReport {
    pub fn orders_decimal(&self) -> Vec<String> {
        self.orders_log.iter().map(|&e| decimal_power(self.p, e)).collect()
    }
}

/// All quotients `G / P_{c+1}(G)` for `c = 1..=max_class`.
pub fn series(pres: &Presentation, p: u32, max_class: u32, limit: u128) -> Result<Vec<PQuotient>> {
    let mut out: Vec<PQuotient> = Vec::new();
    for c in 1..=max_class {
        let q = match out.last() {
            None => PQuotient::class_one(pres, p, limit)?,
            Some(prev) => prev.next_class()?,
        };
        debug_assert_eq!(q.class(), c);
        out.push(q);
    }
    Ok(out)
}

pub fn filtration(pres: &Presentation, p: u32, max_class: u32, limit: u128) -> Result<FiltrationReport> {
    let qs = series(pres, p, max_class, limit)?;
    Ok(FiltrationReport {
        p,
        orders_log: qs.iter().map(|q| q.order_log()).collect(),
        ranks: (1..=max_class).map(|c| qs.last().map_or(0, |q| q.rank(c) as u32)).collect(),
    })
}

/// `p^e` in decimal.
pub fn decimal_power(p: u32, e: u32) -> String {
    // little-endian base 10^9 limbs
    let mut limbs: Vec<u64> = vec![1];
    for _ in 0..e {
        let mut carry = 0u64;
        for limb in limbs.iter_mut() {
            let x = *limb * p as u64 + carry;
            *limb = x % 1_000_000_000;
            carry = x / 1_000_000_000;
        }
        if carry > 0 {
            limbs.push(carry);
        }
    }
    let mut s = format!("{}", limbs.last().copied().unwrap_or(0));
    for limb in limbs.iter().rev().skip(1) {
        let _ = write!(s, "{:09}", limb);
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presentations::GroupSpec;

    #[test]
    fn decimal_powers() {
        assert_eq!(decimal_power(2, 0), "1");
        assert_eq!(decimal_power(2, 10), "1024");
        assert_eq!(decimal_power(2, 100), "1267650600228229401496703205376");
        assert_eq!(decimal_power(3, 5), "243");
    }

    #[test]
    fn cyclic_quotients() {
        let z = Presentation::of(GroupSpec::free(1)).unwrap();
        let report = filtration(&z, 2, 3, DEFAULT_ORDER_LIMIT).unwrap();
        assert_eq!(report.orders_log, [1, 2, 3]);
        let q = PQuotient::new(&z, 2, 3, DEFAULT_ORDER_LIMIT).unwrap();
        let x = q.generator_image(0).clone();
        // x has order 8
        assert!(q.pow(&x, 4).iter().any(|&e| e != 0));
        assert!(q.pow(&x, 8).iter().all(|&e| e == 0));
    }

    #[test]
    fn rejects_composite_p() {
        let z = Presentation::of(GroupSpec::free(1)).unwrap();
        assert!(PQuotient::class_one(&z, 4, DEFAULT_ORDER_LIMIT).is_err());
    }

    #[test]
    fn resource_limit() {
        let f = Presentation::of(GroupSpec::free(3)).unwrap();
        assert!(matches!(PQuotient::new(&f, 2, 4, 1 << 10), Err(Error::ResourceLimit(_))));
    }
}
