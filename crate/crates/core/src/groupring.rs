//! Group rings `F_2[Q]` of finite groups: powers of the augmentation ideal,
//! their decomposition over a semidirect product `Q = A x| C`, and the
//! rewriting of special elements into standard ones.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::padp::SplitSequence;
use crate::pquotient::PQuotient;
use crate::words::Word;

/// Largest group order accepted for dense tables.
pub const MAX_ORDER: usize = 4096;

/// A finite group given by its full multiplication table. Element `0` is
/// the identity.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    order: usize,
    table: Vec<u16>,
    inv: Vec<u16>,
    gens: Vec<usize>,
    labels: Vec<String>,
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::ResourceLimit(format!("group order {} exceeds {}", n, MAX_ORDER)));
    }
    Ok(())
}

impl FiniteGroup {
    fn from_fn(order: usize, gens: Vec<usize>, labels: Vec<String>, mul: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
        check_order(order)?;
        let mut table = vec![0u16; order * order];
        for x in 0..order {
            for y in 0..order {
                table[x * order + y] = mul(x, y) as u16;
            }
        }
        let mut inv = vec![0u16; order];
        for x in 0..order {
            let y = (0..order).find(|&y| table[x * order + y] == 0).ok_or_else(|| {
                Error::PreconditionFailed(format!("element {} has no inverse", labels[x]))
            })?;
            inv[x] = y as u16;
        }
        Ok(FiniteGroup { order, table, inv, gens, labels })
    }

    /// The finite `p`-group of a consistent p-quotient, elements indexed by
    /// their exponent vectors read in base `p`.
    pub fn from_pquotient(q: &PQuotient) -> Result<FiniteGroup> {
        let p = q.p() as usize;
        let len = q.len();
        let order = p.checked_pow(len as u32).filter(|&n| n <= MAX_ORDER).ok_or_else(|| {
            Error::ResourceLimit(format!("group order {}^{} exceeds {}", p, len, MAX_ORDER))
        })?;
        let exps: Vec<Vec<u32>> = (0..order).map(|x| digits(x, p, len)).collect();
        let index = |e: &[u32]| e.iter().rev().fold(0usize, |acc, &d| acc * p + d as usize);
        let gens = (0..len).filter(|&i| q.weights()[i] == 1).map(|i| index(&q.unit(i))).collect();
        let labels = exps.iter().map(|e| q.format(e)).collect();
        FiniteGroup::from_fn(order, gens, labels, |x, y| index(&q.multiply(&exps[x], &exps[y])))
    }

    /// Index of an exponent vector produced by [`FiniteGroup::from_pquotient`].
    pub fn index_of_exponents(p: u32, e: &[u32]) -> usize {
        e.iter().rev().fold(0usize, |acc, &d| acc * p as usize + d as usize)
    }

    pub fn cyclic(m: usize) -> Result<FiniteGroup> {
        if m == 0 {
            return Err(Error::PreconditionFailed("cyclic group of order 0".into()));
        }
        let gens = if m > 1 { vec![1] } else { vec![] };
        let labels = (0..m).map(|k| if k == 0 { String::from("1") } else { format!("t^{}", k) }).collect();
        FiniteGroup::from_fn(m, gens, labels, |x, y| (x + y) % m)
    }

    /// `G x H`, with `(x, y)` stored at `x * |H| + y`.
    pub fn direct_product(g: &FiniteGroup, h: &FiniteGroup) -> Result<FiniteGroup> {
        FiniteGroup::semidirect(g, h, |_, a| a)
    }

    /// `A x| C` where `act(c, a)` is `c a c^-1`. Elements `(a, c)` stand for
    /// `a c` and sit at `a * |C| + c`.
    pub fn semidirect(a: &FiniteGroup, c: &FiniteGroup, act: impl Fn(usize, usize) -> usize) -> Result<FiniteGroup> {
        let (na, nc) = (a.order, c.order);
        check_order(na * nc)?;
        let mut gens: Vec<usize> = a.gens.iter().map(|&x| x * nc).collect();
        gens.extend(c.gens.iter().copied());
        let mut labels = Vec::with_capacity(na * nc);
        for x in 0..na {
            for y in 0..nc {
                labels.push(format!("({},{})", a.labels[x], c.labels[y]));
            }
        }
        // Precompute the action so the table fill is a lookup.
        let mut action = vec![0usize; na * nc];
        for y in 0..nc {
            for x in 0..na {
                action[y * na + x] = act(y, x);
            }
        }
        FiniteGroup::from_fn(na * nc, gens, labels, |u, v| {
            let (a1, c1) = (u / nc, u % nc);
            let (a2, c2) = (v / nc, v % nc);
            // a1 c1 a2 c2 = a1 (c1 a2 c1^-1) c1 c2
            let a = a.mul(a1, action[c1 * na + a2]);
            a * nc + c.mul(c1, c2)
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// A generating set.
    pub fn generators(&self) -> &[usize] {
        &self.gens
    }

    pub fn label(&self, x: usize) -> &str {
        &self.labels[x]
    }

    pub fn mul(&self, x: usize, y: usize) -> usize {
        self.table[x * self.order + y] as usize
    }

    pub fn inv(&self, x: usize) -> usize {
        self.inv[x] as usize
    }

    /// `x y x^-1`.
    pub fn conj(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(x, y), self.inv(x))
    }

    /// `x^-1 y^-1 x y`.
    pub fn commutator(&self, x: usize, y: usize) -> usize {
        self.mul(self.mul(self.inv(x), self.inv(y)), self.mul(x, y))
    }

    /// Elements of the subgroup generated by `gens`, identity first.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<usize> {
        let mut seen = vec![false; self.order];
        seen[0] = true;
        let mut out = vec![0];
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y] {
                    seen[y] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out
    }
}

fn digits(mut x: usize, p: usize, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for d in out.iter_mut() {
        *d = (x % p) as u32;
        x /= p;
    }
    out
}

/// An element of `F_2[Q]`, stored as the indicator of its support.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RingElement {
    bits: Vec<u64>,
}

impl RingElement {
    pub fn zero(order: usize) -> RingElement {
        RingElement { bits: vec![0; order.div_ceil(64)] }
    }

    pub fn group_element(order: usize, x: usize) -> RingElement {
        let mut r = RingElement::zero(order);
        r.toggle(x);
        r
    }

    /// `x - 1`.
    pub fn augmented(order: usize, x: usize) -> RingElement {
        let mut r = RingElement::group_element(order, x);
        r.toggle(0);
        r
    }

    pub fn toggle(&mut self, x: usize) {
        self.bits[x / 64] ^= 1 << (x % 64);
    }

    pub fn coefficient(&self, x: usize) -> bool {
        self.bits[x / 64] >> (x % 64) & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    pub fn add_assign(&mut self, other: &RingElement) {
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a ^= b;
        }
    }

    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }

    pub fn mul(&self, q: &FiniteGroup, other: &RingElement) -> RingElement {
        let mut out = RingElement::zero(q.order);
        let right: Vec<usize> = other.support().collect();
        for x in self.support() {
            for &y in &right {
                out.toggle(q.mul(x, y));
            }
        }
        out
    }

    /// `self * g`.
    pub fn mul_group(&self, q: &FiniteGroup, g: usize) -> RingElement {
        let mut out = RingElement::zero(q.order);
        for x in self.support() {
            out.toggle(q.mul(x, g));
        }
        out
    }

    /// `g * self`.
    pub fn group_mul(&self, q: &FiniteGroup, g: usize) -> RingElement {
        let mut out = RingElement::zero(q.order);
        for x in self.support() {
            out.toggle(q.mul(g, x));
        }
        out
    }
}

/// A subspace of `F_2[Q]` held as rows with distinct pivots; each row is
/// reduced against the rows inserted before it.
#[derive(Clone, Debug)]
pub struct Subspace {
    order: usize,
    rows: Vec<(usize, RingElement)>,
}

impl Subspace {
    pub fn new(order: usize) -> Subspace {
        Subspace { order, rows: Vec::new() }
    }

    /// Dimension of the ambient ring.
    pub fn ambient_dim(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> impl Iterator<Item = &RingElement> {
        self.rows.iter().map(|(_, r)| r)
    }

    pub fn reduce(&self, v: &RingElement) -> RingElement {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.coefficient(*pivot) {
                v.add_assign(row);
            }
        }
        v
    }

    /// Adds `v`; returns whether the dimension grew.
    pub fn insert(&mut self, v: &RingElement) -> bool {
        let r = self.reduce(v);
        let pivot = r.support().next();
        match pivot {
            Some(pivot) => {
                self.rows.push((pivot, r));
                true
            }
            None => false,
        }
    }

    pub fn contains(&self, v: &RingElement) -> bool {
        self.reduce(v).is_zero()
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis().all(|v| other.contains(v))
    }

    pub fn equals(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.is_subspace_of(other)
    }
}

/// `I^0, I^1, ..., I^kmax` for the augmentation ideal of the subgroup with
/// the given elements and generators, as subspaces of `F_2[Q]`.
/// `I^{k+1}` is spanned by `b (x - 1)` for `b` in a basis of `I^k` and `x`
/// a generator.
pub fn aug_chain(q: &FiniteGroup, elements: &[usize], gens: &[usize], kmax: usize) -> Vec<Subspace> {
    aug_chain_sided(q, elements, gens, kmax, false)
}

/// As [`aug_chain`] but multiplying by `(x - 1)` on the left.
pub fn aug_chain_left(q: &FiniteGroup, elements: &[usize], gens: &[usize], kmax: usize) -> Vec<Subspace> {
    aug_chain_sided(q, elements, gens, kmax, true)
}

fn aug_chain_sided(q: &FiniteGroup, elements: &[usize], gens: &[usize], kmax: usize, left: bool) -> Vec<Subspace> {
    let n = q.order;
    let mut whole = Subspace::new(n);
    for &x in elements {
        whole.insert(&RingElement::group_element(n, x));
    }
    let mut chain = vec![whole];
    if kmax == 0 {
        return chain;
    }
    let mut first = Subspace::new(n);
    for &x in elements {
        first.insert(&RingElement::augmented(n, x));
    }
    chain.push(first);
    let factors: Vec<RingElement> = gens.iter().map(|&x| RingElement::augmented(n, x)).collect();
    for _ in 2..=kmax {
        let prev = chain.last().expect("nonempty");
        let mut next = Subspace::new(n);
        for b in prev.basis() {
            for f in &factors {
                let v = if left { f.mul(q, b) } else { b.mul(q, f) };
                next.insert(&v);
            }
        }
        chain.push(next);
    }
    chain
}

/// A basis of `I^k(F_2[Q])`.
pub fn aug_power_basis(q: &FiniteGroup, k: usize) -> Subspace {
    let all: Vec<usize> = (0..q.order).collect();
    aug_chain(q, &all, &q.gens, k).pop().expect("nonempty")
}

/// `dim I^k(F_2[Q])` for `k = 1..=kmax`.
pub fn aug_dims(q: &FiniteGroup, kmax: usize) -> Vec<usize> {
    let all: Vec<usize> = (0..q.order).collect();
    aug_chain(q, &all, &q.gens, kmax).iter().skip(1).map(Subspace::dim).collect()
}

/// The least `K` with `I^K(F_2[Q]) = 0`, if it is at most `bound`.
pub fn nilpotency_index(q: &FiniteGroup, bound: usize) -> Option<usize> {
    let all: Vec<usize> = (0..q.order).collect();
    aug_chain(q, &all, &q.gens, bound).iter().position(|s| s.dim() == 0)
}

/// An internal semidirect decomposition `Q = A C` with `A` normal.
#[derive(Clone, Debug)]
pub struct SemidirectQuotient {
    group: FiniteGroup,
    a: Vec<usize>,
    a_gens: Vec<usize>,
    c: Vec<usize>,
    c_gens: Vec<usize>,
    /// `x = a c` with `factor[x] = (a, c)`.
    factor: Vec<(u16, u16)>,
    in_a: Vec<bool>,
    frattini_a: Vec<bool>,
}

impl SemidirectQuotient {
    pub fn new(group: FiniteGroup, a_gens: Vec<usize>, c_gens: Vec<usize>) -> Result<SemidirectQuotient> {
        let a = group.subgroup(&a_gens);
        let c = group.subgroup(&c_gens);
        let n = group.order;
        let mut in_a = vec![false; n];
        for &x in &a {
            in_a[x] = true;
        }
        for &g in group.gens.iter().chain(&c_gens) {
            if let Some(&x) = a_gens.iter().find(|&&x| !in_a[group.conj(g, x)]) {
                return Err(Error::PreconditionFailed(format!("A is not normal: conjugating {} moves it out", group.label(x))));
            }
        }
        let mut factor = vec![(u16::MAX, u16::MAX); n];
        for &x in &a {
            for &y in &c {
                let z = group.mul(x, y);
                if factor[z].0 != u16::MAX {
                    return Err(Error::PreconditionFailed("A and C intersect nontrivially".into()));
                }
                factor[z] = (x as u16, y as u16);
            }
        }
        if a.len() * c.len() != n {
            return Err(Error::PreconditionFailed(format!("|A| |C| = {} * {} differs from |Q| = {}", a.len(), c.len(), n)));
        }
        let mut phi_gens = Vec::new();
        for &x in &a {
            phi_gens.push(group.mul(x, x));
            for &y in &a {
                phi_gens.push(group.commutator(x, y));
            }
        }
        phi_gens.sort_unstable();
        phi_gens.dedup();
        let mut frattini_a = vec![false; n];
        for x in group.subgroup(&phi_gens) {
            frattini_a[x] = true;
        }
        Ok(SemidirectQuotient { group, a, a_gens, c, c_gens, factor, in_a, frattini_a })
    }

    /// The class-`class` quotient of the total group of a split sequence,
    /// with `A` and `C` the images of the kernel and of the section.
    pub fn from_split(seq: &SplitSequence, class: u32, limit: u128) -> Result<SemidirectQuotient> {
        let pq = PQuotient::new(&seq.total, 2, class, limit)?;
        let group = FiniteGroup::from_pquotient(&pq)?;
        let idx = |w: Word| -> Result<usize> { Ok(FiniteGroup::index_of_exponents(2, &pq.image(&w)?)) };
        let a_gens = seq.kernel.generators.iter().map(|g| idx(seq.include(&g.word())?)).collect::<Result<_>>()?;
        let c_gens = seq.quotient.generators.iter().map(|g| idx(seq.lift(&g.word())?)).collect::<Result<_>>()?;
        SemidirectQuotient::new(group, a_gens, c_gens)
    }

    /// `G x H` with `A = G` and `C = H`.
    pub fn direct(g: &FiniteGroup, h: &FiniteGroup) -> Result<SemidirectQuotient> {
        let group = FiniteGroup::direct_product(g, h)?;
        let nh = h.order;
        let a_gens = g.gens.iter().map(|&x| x * nh).collect();
        let c_gens = h.gens.clone();
        SemidirectQuotient::new(group, a_gens, c_gens)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn a_elements(&self) -> &[usize] {
        &self.a
    }

    pub fn c_elements(&self) -> &[usize] {
        &self.c
    }

    pub fn in_a(&self, x: usize) -> bool {
        self.in_a[x]
    }

    /// `(a, c)` with `x = a c`.
    pub fn split(&self, x: usize) -> (usize, usize) {
        let (a, c) = self.factor[x];
        (a as usize, c as usize)
    }

    /// Whether `C` acts trivially on `H_1(A; F_2)`, i.e. `c a c^-1 a^-1`
    /// lies in `[A, A] A^2` for all generators.
    pub fn is_two_almost_direct(&self) -> bool {
        let g = &self.group;
        self.c_gens.iter().all(|&c| self.a_gens.iter().all(|&a| self.frattini_a[g.mul(g.conj(c, a), g.inv(a))]))
    }

    fn require_almost_direct(&self) -> Result<()> {
        if self.is_two_almost_direct() {
            Ok(())
        } else {
            Err(Error::PreconditionFailed("C acts nontrivially on H_1(A; F_2)".into()))
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionReport {
    /// `dim I^k(F_2[Q])` for `k = 1..=kmax`.
    pub dims: Vec<usize>,
    /// Dimension of `sum_{i+h=k} I^i(A) I^h(C)` for `k = 1..=kmax`.
    pub rhs_dims: Vec<usize>,
    pub holds: bool,
}

/// Compares `I^k(F_2[Q])` with `sum_{i+h=k} span(I^i(A) I^h(C))` for
/// `k <= kmax` by mutual containment.
pub fn check_decomposition(sq: &SemidirectQuotient, kmax: usize) -> Result<DecompositionReport> {
    sq.require_almost_direct()?;
    let q = &sq.group;
    let all: Vec<usize> = (0..q.order).collect();
    let total = aug_chain(q, &all, &q.gens, kmax);
    let ca = aug_chain(q, &sq.a, &sq.a_gens, kmax);
    let cc = aug_chain(q, &sq.c, &sq.c_gens, kmax);
    let mut report = DecompositionReport { dims: Vec::new(), rhs_dims: Vec::new(), holds: true };
    for k in 1..=kmax {
        let rhs = decomposition_rhs(q, &ca, &cc, k);
        report.dims.push(total[k].dim());
        report.rhs_dims.push(rhs.dim());
        report.holds &= rhs.equals(&total[k]);
    }
    Ok(report)
}

fn decomposition_rhs(q: &FiniteGroup, ca: &[Subspace], cc: &[Subspace], k: usize) -> Subspace {
    let mut rhs = Subspace::new(q.order);
    for i in 0..=k {
        for u in ca[i].basis() {
            for v in cc[k - i].basis() {
                rhs.insert(&u.mul(q, v));
            }
        }
    }
    rhs
}

/// The least `K` with `sum_{i+h=K} I^i(A) I^h(C) = 0`, if at most `bound`.
pub fn decomposition_nilpotency_index(sq: &SemidirectQuotient, bound: usize) -> Option<usize> {
    let q = &sq.group;
    let ca = aug_chain(q, &sq.a, &sq.a_gens, bound);
    let cc = aug_chain(q, &sq.c, &sq.c_gens, bound);
    (0..=bound).find(|&k| decomposition_rhs(q, &ca, &cc, k).dim() == 0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Tag {
    A,
    C,
}

/// `(e_1 - 1) ... (e_k - 1)` with each `e_j` in `A` or `C`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecialElement {
    pub factors: Vec<(Tag, usize)>,
}

impl SpecialElement {
    pub fn new(sq: &SemidirectQuotient, factors: Vec<(Tag, usize)>) -> Result<SpecialElement> {
        if factors.is_empty() {
            return Err(Error::PreconditionFailed("a special element needs at least one factor".into()));
        }
        for &(tag, x) in &factors {
            let (a, c) = sq.split(x);
            let ok = match tag {
                Tag::A => c == 0,
                Tag::C => a == 0,
            };
            if !ok {
                return Err(Error::PreconditionFailed(format!("{} is not in {:?}", sq.group.label(x), tag)));
            }
        }
        Ok(SpecialElement { factors })
    }

    /// `0` for an `A`-factor, `1` for a `C`-factor.
    pub fn type_vector(&self) -> Vec<u8> {
        self.factors.iter().map(|(t, _)| (*t == Tag::C) as u8).collect()
    }

    /// All `A`-factors precede all `C`-factors.
    pub fn is_standard(&self) -> bool {
        self.type_vector().windows(2).all(|w| w[0] <= w[1])
    }

    pub fn evaluate(&self, q: &FiniteGroup) -> RingElement {
        let mut acc = RingElement::group_element(q.order, 0);
        for &(_, x) in &self.factors {
            acc = acc.mul(q, &RingElement::augmented(q.order, x));
        }
        acc
    }
}

/// A uniformly random special element with between 1 and `max_len` factors.
pub fn random_special<R: Rng>(sq: &SemidirectQuotient, rng: &mut R, max_len: usize) -> SpecialElement {
    let len = rng.gen_range(1..=max_len.max(1));
    let factors = (0..len)
        .map(|_| {
            if rng.gen_bool(0.5) {
                (Tag::A, sq.a[rng.gen_range(0..sq.a.len())])
            } else {
                (Tag::C, sq.c[rng.gen_range(0..sq.c.len())])
            }
        })
        .collect();
    SpecialElement { factors }
}

/// `(a_1 - 1)...(a_i' - 1)(c_1 - 1)...(c_h' - 1) m`, filed under `(i, h)`
/// with `i <= i'`, `h <= h'` and `i + h` the degree of the input.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct StandardTerm {
    pub i: usize,
    pub h: usize,
    pub a_factors: Vec<usize>,
    pub c_factors: Vec<usize>,
    pub multiplier: usize,
}

impl StandardTerm {
    pub fn evaluate(&self, q: &FiniteGroup) -> RingElement {
        let mut acc = RingElement::group_element(q.order, 0);
        for &x in self.a_factors.iter().chain(&self.c_factors) {
            acc = acc.mul(q, &RingElement::augmented(q.order, x));
        }
        acc.mul_group(q, self.multiplier)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecompositionCertificate {
    pub degree: usize,
    pub terms: Vec<StandardTerm>,
}

impl DecompositionCertificate {
    pub fn evaluate(&self, q: &FiniteGroup) -> RingElement {
        let mut acc = RingElement::zero(q.order);
        for t in &self.terms {
            acc.add_assign(&t.evaluate(q));
        }
        acc
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Factor {
    Aug(Tag, usize),
    Mul(usize),
}

#[derive(Clone, Copy, Debug)]
enum Atom {
    Square(usize),
    Comm(usize, usize),
}

/// Reduction steps allowed before giving up.
const STEP_LIMIT: usize = 1 << 20;
/// Depth of the search for `f` as a product of commutators and squares.
const ATOM_DEPTH: usize = 4;

struct Reducer<'a> {
    sq: &'a SemidirectQuotient,
    /// Shortest decomposition of each element of `[A, A] A^2` reached.
    paths: BTreeMap<usize, Vec<Atom>>,
    nilpotency: usize,
}

impl<'a> Reducer<'a> {
    fn new(sq: &'a SemidirectQuotient) -> Reducer<'a> {
        let g = &sq.group;
        let mut atoms = Vec::new();
        let mut seen = BTreeSet::new();
        for &u in &sq.a_gens {
            if seen.insert(g.mul(u, u)) {
                atoms.push((g.mul(u, u), Atom::Square(u)));
            }
        }
        for &u in &sq.a_gens {
            for &v in &sq.a_gens {
                let h = g.commutator(u, v);
                if seen.insert(h) {
                    atoms.push((h, Atom::Comm(u, v)));
                }
            }
        }
        let mut paths = BTreeMap::new();
        paths.insert(0usize, Vec::new());
        let mut frontier = vec![0usize];
        for _ in 0..ATOM_DEPTH {
            let mut next = Vec::new();
            for x in frontier {
                for &(h, atom) in &atoms {
                    let y = g.mul(x, h);
                    if !paths.contains_key(&y) {
                        let mut path = paths[&x].clone();
                        path.push(atom);
                        paths.insert(y, path);
                        next.push(y);
                    }
                }
            }
            frontier = next;
        }
        let nilpotency = nilpotency_index(g, g.order).unwrap_or(g.order);
        Reducer { sq, paths, nilpotency }
    }

    /// `f - 1` for `f` in `[A, A] A^2` as a sum of factor strings, each with
    /// at least two augmentation factors.
    fn expand(&self, f: usize) -> Result<Vec<Vec<Factor>>> {
        let g = &self.sq.group;
        let path = self.paths.get(&f).ok_or_else(|| {
            Error::SearchFailure(format!("{} is not a product of at most {} commutators and squares", g.label(f), ATOM_DEPTH))
        })?;
        let pieces: Vec<Vec<Vec<Factor>>> = path
            .iter()
            .map(|atom| match *atom {
                Atom::Square(u) => vec![vec![Factor::Aug(Tag::A, u), Factor::Aug(Tag::A, u)]],
                Atom::Comm(u, v) => {
                    // [u, v] - 1 = (vu)^-1 ((u - 1)(v - 1) + (v - 1)(u - 1))
                    let m = g.inv(g.mul(v, u));
                    vec![
                        vec![Factor::Mul(m), Factor::Aug(Tag::A, u), Factor::Aug(Tag::A, v)],
                        vec![Factor::Mul(m), Factor::Aug(Tag::A, v), Factor::Aug(Tag::A, u)],
                    ]
                }
            })
            .collect();
        // h_1 ... h_m - 1 = sum over nonempty S of prod_{j in S} (h_j - 1)
        let mut out = Vec::new();
        for mask in 1u32..(1 << pieces.len()) {
            let mut partial: Vec<Vec<Factor>> = vec![Vec::new()];
            for (j, piece) in pieces.iter().enumerate() {
                if mask >> j & 1 == 0 {
                    continue;
                }
                partial = partial
                    .iter()
                    .flat_map(|pre| piece.iter().map(move |s| pre.iter().chain(s).copied().collect()))
                    .collect();
            }
            out.extend(partial);
        }
        Ok(out)
    }

    fn normalize(&self, term: Vec<Factor>) -> Option<Vec<Factor>> {
        let g = &self.sq.group;
        let mut out: Vec<Factor> = Vec::with_capacity(term.len());
        let mut degree = 0;
        for f in term {
            match f {
                Factor::Aug(_, 0) => return None,
                Factor::Aug(..) => {
                    degree += 1;
                    out.push(f);
                }
                Factor::Mul(0) => {}
                Factor::Mul(x) => match out.last_mut() {
                    Some(Factor::Mul(y)) => {
                        *y = g.mul(*y, x);
                        if *y == 0 {
                            out.pop();
                        }
                    }
                    _ => out.push(f),
                },
            }
        }
        if degree >= self.nilpotency {
            return None;
        }
        Some(out)
    }

    /// One rewriting step, or `None` if the term is standard.
    fn step(&self, term: &[Factor]) -> Result<Option<Vec<Vec<Factor>>>> {
        let g = &self.sq.group;
        let splice = |at: usize, width: usize, mid: &[Factor]| -> Vec<Factor> {
            term[..at].iter().chain(mid).chain(&term[at + width..]).copied().collect()
        };
        if let Some(j) = (0..term.len().saturating_sub(1)).find(|&j| matches!(term[j], Factor::Mul(_))) {
            let Factor::Mul(m) = term[j] else { unreachable!() };
            let Factor::Aug(tag, y) = term[j + 1] else { unreachable!("adjacent multipliers are merged") };
            return Ok(Some(match tag {
                Tag::A => vec![splice(j, 2, &[Factor::Aug(Tag::A, g.conj(m, y)), Factor::Mul(m)])],
                Tag::C => {
                    // m y m^-1 = f y' with y' in C and f in [A, A] A^2
                    let (_, c) = self.sq.split(m);
                    let y2 = g.conj(c, y);
                    let f = g.mul(g.conj(m, y), g.inv(y2));
                    let mut out = vec![splice(j, 2, &[Factor::Aug(Tag::C, y2), Factor::Mul(m)])];
                    if f != 0 {
                        for e in self.expand(f)? {
                            let mut with_c = e.clone();
                            with_c.extend([Factor::Aug(Tag::C, y2), Factor::Mul(m)]);
                            out.push(splice(j, 2, &with_c));
                            let mut alone = e;
                            alone.push(Factor::Mul(m));
                            out.push(splice(j, 2, &alone));
                        }
                    }
                    out
                }
            }));
        }
        let swap = (0..term.len().saturating_sub(1))
            .find(|&j| matches!((term[j], term[j + 1]), (Factor::Aug(Tag::C, _), Factor::Aug(Tag::A, _))));
        let Some(j) = swap else { return Ok(None) };
        let (Factor::Aug(_, c), Factor::Aug(_, a)) = (term[j], term[j + 1]) else { unreachable!() };
        // (c - 1)(a - 1) = (a - 1)(c - 1) + (f - 1) a c,  f = c a c^-1 a^-1
        let mut out = vec![splice(j, 2, &[Factor::Aug(Tag::A, a), Factor::Aug(Tag::C, c)])];
        let f = swap_commutator(g, c, a);
        if f != 0 {
            for mut e in self.expand(f)? {
                e.push(Factor::Mul(g.mul(a, c)));
                out.push(splice(j, 2, &e));
            }
        }
        Ok(Some(out))
    }
}

/// `f = c a c^-1 a^-1 = [c^-1, a^-1]`, the correction in
/// `(c - 1)(a - 1) = (a - 1)(c - 1) + (f - 1) a c`.
pub fn swap_commutator(q: &FiniteGroup, c: usize, a: usize) -> usize {
    q.commutator(q.inv(c), q.inv(a))
}

/// Rewrites a special element as a sum of standard terms of the same
/// degree. The result is checked against the evaluation of `e`.
pub fn special_reduce(sq: &SemidirectQuotient, e: &SpecialElement) -> Result<DecompositionCertificate> {
    sq.require_almost_direct()?;
    let q = &sq.group;
    let degree = e.factors.len();
    let reducer = Reducer::new(sq);
    // Both sets hold F_2 sums, so inserting a present term cancels it.
    let mut pending: BTreeSet<Vec<Factor>> = BTreeSet::new();
    let mut leaves: BTreeSet<Vec<Factor>> = BTreeSet::new();
    let toggle = |set: &mut BTreeSet<Vec<Factor>>, t: Vec<Factor>| {
        if !set.remove(&t) {
            set.insert(t);
        }
    };
    if let Some(t) = reducer.normalize(e.factors.iter().map(|&(tag, x)| Factor::Aug(tag, x)).collect()) {
        pending.insert(t);
    }
    let mut steps = 0;
    while let Some(term) = pending.pop_first() {
        steps += 1;
        if steps > STEP_LIMIT {
            return Err(Error::SearchFailure(format!("reduction exceeded {} steps", STEP_LIMIT)));
        }
        match reducer.step(&term)? {
            None => toggle(&mut leaves, term),
            Some(next) => {
                for t in next.into_iter().filter_map(|t| reducer.normalize(t)) {
                    toggle(&mut pending, t);
                }
            }
        }
    }
    let mut terms = Vec::with_capacity(leaves.len());
    for leaf in leaves {
        let mut t = StandardTerm { i: 0, h: 0, a_factors: Vec::new(), c_factors: Vec::new(), multiplier: 0 };
        for f in leaf {
            match f {
                Factor::Aug(Tag::A, x) => t.a_factors.push(x),
                Factor::Aug(Tag::C, x) => t.c_factors.push(x),
                Factor::Mul(x) => t.multiplier = x,
            }
        }
        if t.a_factors.len() + t.c_factors.len() < degree {
            return Err(Error::RewriteFailure("a standard term lost degree".into()));
        }
        t.i = t.a_factors.len().min(degree);
        t.h = degree - t.i;
        terms.push(t);
    }
    let cert = DecompositionCertificate { degree, terms };
    if cert.evaluate(q) != e.evaluate(q) {
        return Err(Error::RewriteFailure("certificate does not evaluate to its input".into()));
    }
    Ok(cert)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// `(Z/2)^2 x| Z/2` with the swap action: the dihedral group of order 8.
    fn swap_product() -> SemidirectQuotient {
        let v = FiniteGroup::direct_product(&FiniteGroup::cyclic(2).unwrap(), &FiniteGroup::cyclic(2).unwrap()).unwrap();
        let c = FiniteGroup::cyclic(2).unwrap();
        let swap = |t: usize, a: usize| if t == 0 { a } else { (a % 2) * 2 + a / 2 };
        let q = FiniteGroup::semidirect(&v, &c, swap).unwrap();
        SemidirectQuotient::new(q, vec![2, 4], vec![1]).unwrap()
    }

    #[test]
    fn cyclic_dims() {
        assert_eq!(aug_dims(&FiniteGroup::cyclic(2).unwrap(), 2), [1, 0]);
        assert_eq!(aug_dims(&FiniteGroup::cyclic(4).unwrap(), 4), [3, 2, 1, 0]);
        assert_eq!(aug_power_basis(&FiniteGroup::cyclic(8).unwrap(), 0).dim(), 8);
    }

    #[test]
    fn cyclic_ring_is_truncated_polynomial() {
        // F_2[Z/4] = F_2[u]/(u^4) with u = t - 1
        let q = FiniteGroup::cyclic(4).unwrap();
        let u = RingElement::augmented(4, 1);
        let mut power = RingElement::group_element(4, 0);
        for k in 0..4 {
            assert!(!power.is_zero(), "u^{} vanished", k);
            assert!(aug_power_basis(&q, k).contains(&power));
            power = power.mul(&q, &u);
        }
        assert!(power.is_zero());
    }

    #[test]
    fn left_and_right_chains_agree() {
        let sq = swap_product();
        let q = sq.group();
        let all: Vec<usize> = (0..q.order()).collect();
        let right = aug_chain(q, &all, q.generators(), 6);
        let left = aug_chain_left(q, &all, q.generators(), 6);
        for (r, l) in right.iter().zip(&left) {
            assert!(r.equals(l));
        }
    }

    #[test]
    fn swap_action_is_rejected() {
        let sq = swap_product();
        assert!(!sq.is_two_almost_direct());
        assert!(matches!(check_decomposition(&sq, 2), Err(Error::PreconditionFailed(_))));
        let e = SpecialElement::new(&sq, vec![(Tag::C, 1), (Tag::A, 2)]).unwrap();
        assert!(matches!(special_reduce(&sq, &e), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn trivial_c_gives_equality() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sq = SemidirectQuotient::direct(&z4, &FiniteGroup::cyclic(1).unwrap()).unwrap();
        assert!(check_decomposition(&sq, 4).unwrap().holds);
    }

    #[test]
    fn z4_squared_decomposes() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sq = SemidirectQuotient::direct(&z4, &z4).unwrap();
        let report = check_decomposition(&sq, 3).unwrap();
        assert!(report.holds, "{:?}", report);
        assert_eq!(report.dims[0], 15);
    }

    #[test]
    fn one_swap() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sq = SemidirectQuotient::direct(&z4, &z4).unwrap();
        let (a, c) = (4, 1);
        let e = SpecialElement::new(&sq, vec![(Tag::C, c), (Tag::A, a)]).unwrap();
        assert_eq!(e.type_vector(), [1, 0]);
        assert!(!e.is_standard());
        let cert = special_reduce(&sq, &e).unwrap();
        assert_eq!(cert.terms.len(), 1);
        assert_eq!((cert.terms[0].a_factors.as_slice(), cert.terms[0].c_factors.as_slice()), (&[a][..], &[c][..]));
    }

    #[test]
    fn standard_input_is_kept() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sq = SemidirectQuotient::direct(&z4, &z4).unwrap();
        let e = SpecialElement::new(&sq, vec![(Tag::A, 4), (Tag::C, 2)]).unwrap();
        assert_eq!(e.type_vector(), [0, 1]);
        let cert = special_reduce(&sq, &e).unwrap();
        assert_eq!(cert.terms, [StandardTerm { i: 1, h: 1, a_factors: vec![4], c_factors: vec![2], multiplier: 0 }]);
    }

    #[test]
    fn mixed_tags_rejected() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sq = SemidirectQuotient::direct(&z4, &z4).unwrap();
        assert!(SpecialElement::new(&sq, vec![(Tag::A, 5)]).is_err());
        assert!(SpecialElement::new(&sq, vec![]).is_err());
    }

    #[test]
    fn squares_shortcut() {
        let sq = SemidirectQuotient::direct(&FiniteGroup::cyclic(8).unwrap(), &FiniteGroup::cyclic(4).unwrap()).unwrap();
        let q = sq.group();
        for x in 0..q.order() {
            let u = RingElement::augmented(q.order(), x);
            assert_eq!(RingElement::augmented(q.order(), q.mul(x, x)), u.mul(q, &u));
        }
    }

    #[test]
    fn random_certificates_on_product() {
        let z4 = FiniteGroup::cyclic(4).unwrap();
        let sq = SemidirectQuotient::direct(&z4, &FiniteGroup::cyclic(2).unwrap()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let e = random_special(&sq, &mut rng, 4);
            let cert = special_reduce(&sq, &e).unwrap();
            assert_eq!(cert.evaluate(sq.group()), e.evaluate(sq.group()));
            assert!(cert.terms.iter().all(|t| t.i + t.h == e.factors.len()));
        }
    }
}
