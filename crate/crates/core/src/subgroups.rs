//! The groups attached to a form net: generators of `Ep(sigma, Gamma)`,
//! seeded word sampling, row lengths and level-wise `Sp(sigma, Gamma)`
//! membership, plus executable versions of the row-length identities.

use rand::{Rng, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{EquivRel, IndexSet};
use crate::net::{FormNet, LevelSeed};
use crate::symplectic::{
    transvection_unchecked, SympMatrix, TransvectionKind, TransvectionSpec,
};
use crate::zmod::{Ideal, ModRing, RingElem};

/// The sampler's PRNG. SplitMix64 output is fixed across platforms.
pub type WordRng = SplitMix64;

pub fn word_rng(seed: u64) -> WordRng {
    SplitMix64::seed_from_u64(seed)
}

/// A transvection family `T_ij(xi)`, `xi` ranging over `level`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GeneratorSlot {
    pub i: i32,
    pub j: i32,
    pub level: Ideal,
}

impl GeneratorSlot {
    pub fn kind(&self) -> TransvectionKind {
        if self.j == -self.i {
            TransvectionKind::Long
        } else {
            TransvectionKind::Short
        }
    }

    fn spec(&self, param: u64) -> TransvectionSpec {
        TransvectionSpec::of(self.i, self.j, RingElem::new(self.level.ring(), param))
            .expect("slots hold valid index pairs")
    }
}

/// A finite generating set made of transvection families.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSet {
    ring: ModRing,
    index_set: IndexSet,
    slots: Vec<GeneratorSlot>,
}

impl GeneratorSet {
    /// Generators of `Ep(sigma, Gamma)`: every nonzero level.
    pub fn from_net(net: &FormNet) -> Self {
        let s = net.index_set();
        let mut slots = Vec::new();
        for i in s.indices() {
            for j in s.indices() {
                if j == i {
                    continue;
                }
                let level = net.level(i, j);
                if !level.is_zero() {
                    slots.push(GeneratorSlot { i, j, level });
                }
            }
        }
        Self { ring: net.ring(), index_set: s, slots }
    }

    /// Generators of `H = <Ep(nu, R), seeded transvections>`.
    pub fn for_overgroup(nu: &EquivRel, seed: &LevelSeed, ring: ModRing) -> Result<Self> {
        let s = nu.index_set();
        seed.check(ring, s)?;
        let mut set = Self::from_net(&FormNet::nu_net(nu, ring));
        for &(i, j, level) in &seed.sigma {
            if i != j && !level.is_zero() {
                set.slots.push(GeneratorSlot { i, j, level });
            }
        }
        for &(i, level) in &seed.gamma {
            if !level.is_zero() {
                set.slots.push(GeneratorSlot { i, j: -i, level });
            }
        }
        Ok(set)
    }

    /// Keeps only parameters in `level ∩ ideal` for every slot.
    pub fn restricted_to(&self, ideal: Ideal) -> Self {
        let slots = self
            .slots
            .iter()
            .map(|s| GeneratorSlot { level: s.level.meet(ideal), ..*s })
            .filter(|s| !s.level.is_zero())
            .collect();
        Self { slots, ..*self }
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn slots(&self) -> &[GeneratorSlot] {
        &self.slots
    }

    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Every generator with a nonzero parameter.
    pub fn generators(&self) -> impl Iterator<Item = TransvectionSpec> + '_ {
        self.slots
            .iter()
            .flat_map(|slot| slot.level.elements().skip(1).map(move |x| slot.spec(x)))
    }

    /// Uniform slot, then a parameter uniform over the slot's level.
    pub fn sample_spec<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<TransvectionSpec> {
        if self.slots.is_empty() {
            return None;
        }
        let slot = self.slots[rng.random_range(0..self.slots.len())];
        let k = rng.random_range(0..slot.level.size());
        Some(slot.spec(k * slot.level.generator()))
    }

    pub fn sample_specs<R: Rng + ?Sized>(&self, rng: &mut R, length: usize) -> Vec<TransvectionSpec> {
        (0..length).filter_map(|_| self.sample_spec(rng)).collect()
    }

    /// A word whose length is drawn uniformly from `0..=max_len` by the same stream.
    pub fn sample_bounded_word(&self, max_len: usize, seed: u64) -> (GeneratorWord, SympMatrix) {
        let mut rng = word_rng(seed);
        let length = rng.random_range(0..=max_len);
        let word = GeneratorWord { specs: self.sample_specs(&mut rng, length), seed };
        let product = word.product(self.ring, self.index_set);
        (word, product)
    }

    /// A word of exactly `length` generators (empty when there are none) and its product.
    pub fn sample_word(&self, length: usize, seed: u64) -> (GeneratorWord, SympMatrix) {
        let mut rng = word_rng(seed);
        let word = GeneratorWord { specs: self.sample_specs(&mut rng, length), seed };
        let product = word.product(self.ring, self.index_set);
        (word, product)
    }
}

/// A word in transvections with the seed it was drawn from.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct GeneratorWord {
    #[serde(rename = "word")]
    pub specs: Vec<TransvectionSpec>,
    pub seed: u64,
}

impl GeneratorWord {
    pub fn product(&self, ring: ModRing, index_set: IndexSet) -> SympMatrix {
        let mut acc = SympMatrix::identity(ring, index_set);
        for s in &self.specs {
            acc = acc.mul_unchecked(&transvection_unchecked(s, index_set));
        }
        acc
    }

    /// First spec whose parameter is outside its net level.
    pub fn level_violation(&self, net: &FormNet) -> Option<TransvectionSpec> {
        self.specs
            .iter()
            .copied()
            .find(|s| !net.level(s.i(), s.j()).contains_value(s.param().value()))
    }
}

/// Every generator of `Ep(sigma, Gamma)` with a nonzero parameter.
pub fn ep_generators(net: &FormNet) -> Vec<TransvectionSpec> {
    GeneratorSet::from_net(net).generators().collect()
}

/// A seeded word over the generators of `Ep(sigma, Gamma)` and its product.
pub fn sample_word(net: &FormNet, length: usize, seed: u64) -> (GeneratorWord, SympMatrix) {
    GeneratorSet::from_net(net).sample_word(length, seed)
}

/// `S_{i,-i}(g) = sum_{j > 0} g_ij g'_{j,-i}`.
pub fn row_length(g: &SympMatrix, i: i32) -> RingElem {
    RingElem::new(g.ring(), row_length_raw(g, i))
}

#[inline]
pub(crate) fn row_length_raw(g: &SympMatrix, i: i32) -> u64 {
    let ring = g.ring();
    g.index_set()
        .positives()
        .fold(0, |acc, j| ring.add(acc, ring.mul(g.get(i, j), g.inv_entry(j, -i))))
}

/// Row lengths `S_{i,-i}` for every `i`, in matrix order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LengthVector(pub Vec<RingElem>);

impl LengthVector {
    pub fn of(g: &SympMatrix) -> Self {
        Self(g.index_set().indices().map(|i| row_length(g, i)).collect())
    }

    pub fn get(&self, index_set: IndexSet, i: i32) -> RingElem {
        self.0[index_set.pos(i)]
    }
}

/// Why a matrix is outside `Sp(sigma, Gamma)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum MembershipDefect {
    Entry { i: i32, j: i32, value: u64, level: u64 },
    Length { i: i32, value: u64, level: u64 },
}

/// First entry or row length outside its level.
pub fn membership_defect(g: &SympMatrix, net: &FormNet) -> Option<MembershipDefect> {
    let s = g.index_set();
    for i in s.indices() {
        for j in s.indices() {
            let v = g.get(i, j);
            let level = net.sigma(i, j);
            if !level.contains_value(v) {
                return Some(MembershipDefect::Entry { i, j, value: v, level: level.generator() });
            }
        }
    }
    for i in s.indices() {
        let v = row_length_raw(g, i);
        let level = net.gamma(i);
        if !level.contains_value(v) {
            return Some(MembershipDefect::Length { i, value: v, level: level.generator() });
        }
    }
    None
}

/// `g in Sp(sigma, Gamma)`: entries in `sigma` and row lengths in `Gamma`.
pub fn sp_membership(g: &SympMatrix, net: &FormNet) -> bool {
    membership_defect(g, net).is_none()
}

/// Entries only: `g in Sp(sigma)`.
pub fn in_net_subgroup(g: &SympMatrix, net: &FormNet) -> bool {
    let s = g.index_set();
    s.indices().all(|i| s.indices().all(|j| net.sigma(i, j).contains_value(g.get(i, j))))
}

/// Right-hand side of the expansion of `S_{i,-i}(ab)` in terms of `a` and `b`.
pub fn product_length_expansion(a: &SympMatrix, b: &SympMatrix, i: i32) -> Result<RingElem> {
    a.ring().check_same(b.ring())?;
    if a.index_set() != b.index_set() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    a.index_set().check(i)?;
    let ring = a.ring();
    let s = a.index_set();
    let (add, mul) = (|x, y| ring.add(x, y), |x, y| ring.mul(x, y));
    let mut total = row_length_raw(a, i);
    for k in s.indices() {
        let term = mul(mul(a.get(i, k), row_length_raw(b, k)), a.inv_entry(-k, -i));
        total = add(total, term);
    }
    let pos: Vec<i32> = s.positives().collect();
    let mut first = 0;
    for &j in &pos {
        for &k in &pos {
            for &l in &pos {
                let t = mul(mul(a.get(i, l), b.get(l, -j)), mul(b.inv_entry(-j, k), a.inv_entry(k, -i)));
                first = add(first, t);
            }
        }
    }
    let mut second = 0;
    for &j in &pos {
        for &k in &pos {
            for &l in pos.iter().filter(|&&l| l > k) {
                let t1 = mul(mul(a.get(i, -k), b.get(-k, -j)), mul(b.inv_entry(-j, l), a.inv_entry(l, -i)));
                let t2 = mul(mul(a.get(i, k), b.get(k, -j)), mul(b.inv_entry(-j, -l), a.inv_entry(-l, -i)));
                second = add(second, add(t1, t2));
            }
        }
    }
    total = ring.sub(total, mul(2, first));
    total = ring.sub(total, mul(2, second));
    Ok(RingElem::new(ring, total))
}

/// Compares the expansion with the directly computed `S_{i,-i}(ab)`.
pub fn product_length_identity_check(a: &SympMatrix, b: &SympMatrix, i: i32) -> Result<bool> {
    let rhs = product_length_expansion(a, b, i)?;
    Ok(row_length(&a.mul_unchecked(b), i) == rhs)
}

/// Inputs for the congruences satisfied by row lengths modulo `Gamma_i`.
#[derive(Clone, Debug)]
pub enum CorollaryInput {
    /// `S(ab) = S(a) + sum_k a_ik^2 S_k(b)`, `a, b in Sp(sigma)`
    GroupClosure { a: SympMatrix, b: SympMatrix },
    /// `S(T_pq(xi) a)` case split on `i in {p, -q}`
    LeftMult { a: SympMatrix, t: TransvectionSpec },
    /// `S(a T_pq(xi)) = S(a)`
    RightMult { a: SympMatrix, t: TransvectionSpec },
    /// `S(a T_sr(xi) a^{-1}) = a_is^2 xi^2 S_r(a^{-1}) + a_{i,-r}^2 xi^2 S_{-s}(a^{-1})`
    RootShort { a: SympMatrix, t: TransvectionSpec },
    /// two short transvections `T_sr(xi) T_st(zeta)` sharing the row `s`
    RootShortPair { a: SympMatrix, t1: TransvectionSpec, t2: TransvectionSpec },
}

/// Per-index outcome of a congruence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceOutcome {
    /// indices where `lhs - rhs` is outside `Gamma_i`, with both sides
    pub failures: Vec<(i32, RingElem, RingElem)>,
}

impl CongruenceOutcome {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

fn require_short_in_net(t: &TransvectionSpec, net: &FormNet) -> Result<()> {
    if t.kind() != TransvectionKind::Short {
        return Err(Error::Hypothesis(format!("{t} is not a short transvection")));
    }
    net.index_set().check(t.i())?;
    net.index_set().check(t.j())?;
    if !net.sigma(t.i(), t.j()).contains_value(t.param().value()) {
        return Err(Error::Hypothesis(format!("{t} is not in Ep(sigma, Gamma)")));
    }
    Ok(())
}

fn require_net_subgroup(a: &SympMatrix, net: &FormNet) -> Result<()> {
    net.ring().check_same(a.ring())?;
    if a.index_set() != net.index_set() {
        return Err(Error::DimensionMismatch { expected: net.index_set().dim(), found: a.dim() });
    }
    if !in_net_subgroup(a, net) {
        return Err(Error::Hypothesis("matrix is not in Sp(sigma)".into()));
    }
    Ok(())
}

/// Evaluates both sides of the chosen congruence for every `i` and tests
/// `lhs - rhs in Gamma_i`.
pub fn congruence_corollary_check(input: &CorollaryInput, net: &FormNet) -> Result<CongruenceOutcome> {
    let ring = net.ring();
    let s = net.index_set();
    let sq = |x: u64| ring.mul(x, x);
    let (mul, add) = (|x, y| ring.mul(x, y), |x, y| ring.add(x, y));
    let mut sides: Vec<(i32, u64, u64)> = Vec::new();
    match input {
        CorollaryInput::GroupClosure { a, b } => {
            require_net_subgroup(a, net)?;
            require_net_subgroup(b, net)?;
            let ab = a.mul_unchecked(b);
            for i in s.indices() {
                let rhs = s.indices().fold(row_length_raw(a, i), |acc, k| {
                    add(acc, mul(sq(a.get(i, k)), row_length_raw(b, k)))
                });
                sides.push((i, row_length_raw(&ab, i), rhs));
            }
        }
        CorollaryInput::LeftMult { a, t } => {
            require_net_subgroup(a, net)?;
            require_short_in_net(t, net)?;
            let (p, q, x) = (t.i(), t.j(), t.param().value());
            let ta = transvection_unchecked(t, s).mul_unchecked(a);
            for i in s.indices() {
                let rhs = if i == p {
                    add(row_length_raw(a, p), mul(sq(x), row_length_raw(a, q)))
                } else if i == -q {
                    add(row_length_raw(a, -q), mul(sq(x), row_length_raw(a, -p)))
                } else {
                    row_length_raw(a, i)
                };
                sides.push((i, row_length_raw(&ta, i), rhs));
            }
        }
        CorollaryInput::RightMult { a, t } => {
            require_net_subgroup(a, net)?;
            require_short_in_net(t, net)?;
            let at = a.mul_unchecked(&transvection_unchecked(t, s));
            for i in s.indices() {
                sides.push((i, row_length_raw(&at, i), row_length_raw(a, i)));
            }
        }
        CorollaryInput::RootShort { a, t } => {
            require_net_subgroup(a, net)?;
            require_short_in_net(t, net)?;
            let (sr, r, x2) = (t.i(), t.j(), sq(t.param().value()));
            let inv = a.inverse();
            let b = crate::symplectic::root_element_unchecked(a, t);
            for i in s.indices() {
                let rhs = add(
                    mul(mul(sq(a.get(i, sr)), x2), row_length_raw(&inv, r)),
                    mul(mul(sq(a.get(i, -r)), x2), row_length_raw(&inv, -sr)),
                );
                sides.push((i, row_length_raw(&b, i), rhs));
            }
        }
        CorollaryInput::RootShortPair { a, t1, t2 } => {
            require_net_subgroup(a, net)?;
            require_short_in_net(t1, net)?;
            require_short_in_net(t2, net)?;
            let (sr, r, t) = (t1.i(), t1.j(), t2.j());
            if t2.i() != sr || r == t || r == -t {
                return Err(Error::Hypothesis(format!(
                    "need T_sr, T_st with s != +-r, +-t and r != +-t; got {t1}, {t2}"
                )));
            }
            let (xi2, zeta2) = (sq(t1.param().value()), sq(t2.param().value()));
            let inv = a.inverse();
            let b = a
                .mul_unchecked(&transvection_unchecked(t1, s))
                .mul_unchecked(&transvection_unchecked(t2, s))
                .mul_unchecked(&inv);
            for i in s.indices() {
                let ais2 = sq(a.get(i, sr));
                let rhs = [
                    mul(mul(ais2, zeta2), row_length_raw(&inv, t)),
                    mul(mul(ais2, xi2), row_length_raw(&inv, r)),
                    mul(mul(sq(a.get(i, -t)), zeta2), row_length_raw(&inv, -sr)),
                    mul(mul(sq(a.get(i, -r)), xi2), row_length_raw(&inv, -sr)),
                ]
                .into_iter()
                .fold(0, add);
                sides.push((i, row_length_raw(&b, i), rhs));
            }
        }
    }
    let failures = sides
        .into_iter()
        .filter(|&(i, lhs, rhs)| !net.gamma(i).contains_value(ring.sub(lhs, rhs)))
        .map(|(i, lhs, rhs)| (i, RingElem::new(ring, lhs), RingElem::new(ring, rhs)))
        .collect();
    Ok(CongruenceOutcome { failures })
}
