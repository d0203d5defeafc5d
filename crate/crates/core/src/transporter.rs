//! The transporter conditions (T1)-(T3), sampled normalization and the
//! sandwich check `Ep(sigma, Gamma) <= H <= N(Sp(sigma, Gamma))`.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{EquivRel, IndexSet};
use crate::net::{closure_from_levels, FormNet, LevelSeed};
use crate::subgroups::{
    membership_defect, row_length_raw, word_rng, GeneratorSet, GeneratorWord, MembershipDefect,
};
use crate::symplectic::{root_element_unchecked, SympMatrix, TransvectionKind, TransvectionSpec};
use crate::zmod::{Ideal, ModRing};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct T1Violation {
    pub i: i32,
    pub j: i32,
    pub k: i32,
    pub l: i32,
    pub value: u64,
    pub level: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct T2Violation {
    pub i: i32,
    pub j: i32,
    pub k: i32,
    pub value: u64,
    pub level: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct T3Violation {
    pub i: i32,
    pub j: i32,
    pub value: u64,
    pub level: u64,
}

/// Witnesses for each transporter condition; empty lists mean the matrix passes.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TransporterReport {
    pub t1_violations: Vec<T1Violation>,
    pub t2_violations: Vec<T2Violation>,
    pub t3_violations: Vec<T3Violation>,
    /// set when the net does not meet the theorem's hypothesis
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hypothesis_warning: Option<String>,
}

impl TransporterReport {
    pub fn passes(&self) -> bool {
        self.t1_violations.is_empty() && self.t2_violations.is_empty() && self.t3_violations.is_empty()
    }

    /// The first violation as a tagged value, for witnesses.
    pub fn first_violation(&self) -> Option<TransporterViolation> {
        self.t1_violations
            .first()
            .map(|&v| TransporterViolation::T1(v))
            .or_else(|| self.t2_violations.first().map(|&v| TransporterViolation::T2(v)))
            .or_else(|| self.t3_violations.first().map(|&v| TransporterViolation::T3(v)))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "condition")]
pub enum TransporterViolation {
    T1(T1Violation),
    T2(T2Violation),
    T3(T3Violation),
}

fn check_shape(a: &SympMatrix, net: &FormNet) -> Result<()> {
    net.ring().check_same(a.ring())?;
    if a.index_set() != net.index_set() {
        return Err(Error::DimensionMismatch { expected: net.index_set().dim(), found: a.dim() });
    }
    Ok(())
}

/// `a_ij sigma_jk a'_kl <= sigma_il`, tested on the generator of `sigma_jk`.
pub fn check_t1(a: &SympMatrix, net: &FormNet) -> Result<Vec<T1Violation>> {
    check_shape(a, net)?;
    let ring = net.ring();
    let s = net.index_set();
    let mut out = Vec::new();
    for i in s.indices() {
        for j in s.indices() {
            let aij = a.get(i, j);
            if aij == 0 {
                continue;
            }
            for k in s.indices() {
                let left = ring.mul(aij, net.sigma(j, k).generator());
                if left == 0 {
                    continue;
                }
                for l in s.indices() {
                    let value = ring.mul(left, a.inv_entry(k, l));
                    let level = net.sigma(i, l);
                    if !level.contains_value(value) {
                        out.push(T1Violation { i, j, k, l, value, level: level.generator() });
                    }
                }
            }
        }
    }
    Ok(out)
}

/// `a_ij^2 sigma_jk^[2] S_{k,-k}(a^{-1}) <= Gamma_i`.
pub fn check_t2(a: &SympMatrix, net: &FormNet) -> Result<Vec<T2Violation>> {
    check_shape(a, net)?;
    let ring = net.ring();
    let s = net.index_set();
    let inv = a.inverse();
    let lengths: Vec<u64> = s.indices().map(|k| row_length_raw(&inv, k)).collect();
    let mut out = Vec::new();
    for i in s.indices() {
        for j in s.indices() {
            let aij = a.get(i, j);
            let aij2 = ring.mul(aij, aij);
            if aij2 == 0 {
                continue;
            }
            for k in s.indices() {
                let d = net.sigma(j, k).generator();
                let value = ring.mul(ring.mul(aij2, ring.mul(d, d)), lengths[s.pos(k)]);
                let level = net.gamma(i);
                if !level.contains_value(value) {
                    out.push(T2Violation { i, j, k, value, level: level.generator() });
                }
            }
        }
    }
    Ok(out)
}

/// `a_ij^2 Gamma_j <= Gamma_i`.
pub fn check_t3(a: &SympMatrix, net: &FormNet) -> Result<Vec<T3Violation>> {
    check_shape(a, net)?;
    let ring = net.ring();
    let s = net.index_set();
    let mut out = Vec::new();
    for i in s.indices() {
        for j in s.indices() {
            let aij = a.get(i, j);
            let value = ring.mul(ring.mul(aij, aij), net.gamma(j).generator());
            let level = net.gamma(i);
            if !level.contains_value(value) {
                out.push(T3Violation { i, j, value, level: level.generator() });
            }
        }
    }
    Ok(out)
}

/// The relation `i ~ j` iff `sigma_ij = sigma_ji = R`, when it is a partition.
pub fn derived_relation(net: &FormNet) -> Option<EquivRel> {
    let s = net.index_set();
    if s.indices().any(|i| !net.sigma(i, i).is_unit()) {
        return None;
    }
    let full = |i: i32, j: i32| net.sigma(i, j).is_unit() && net.sigma(j, i).is_unit();
    let idx: Vec<i32> = s.indices().collect();
    let mut label = vec![usize::MAX; idx.len()];
    let mut next = 0;
    for (p, &i) in idx.iter().enumerate() {
        if label[p] != usize::MAX {
            continue;
        }
        for (q, &j) in idx.iter().enumerate() {
            if label[q] == usize::MAX && full(i, j) {
                label[q] = next;
            }
        }
        next += 1;
    }
    EquivRel::from_labels(s, &label).ok()
}

/// `None` when the net is major for a relation whose classes all have at least 3 elements.
pub fn transporter_hypothesis_failure(net: &FormNet) -> Option<String> {
    let Some(nu) = derived_relation(net) else {
        return Some("the full levels of the net do not form a unitary equivalence".into());
    };
    if nu.min_class_size() < 3 {
        return Some(format!("a class of the derived relation has {} < 3 elements", nu.min_class_size()));
    }
    if !net.is_major(&nu).unwrap_or(false) {
        return Some("the net is not major for its derived relation".into());
    }
    None
}

/// Runs (T1)-(T3); the hypothesis is reported, not enforced.
pub fn is_in_transporter(a: &SympMatrix, net: &FormNet) -> Result<(bool, TransporterReport)> {
    let report = TransporterReport {
        t1_violations: check_t1(a, net)?,
        t2_violations: check_t2(a, net)?,
        t3_violations: check_t3(a, net)?,
        hypothesis_warning: transporter_hypothesis_failure(net),
    };
    Ok((report.passes(), report))
}

/// A conjugate `a g a^{-1}` that left `Sp(sigma, Gamma)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizationWitness {
    /// the word producing `g`
    pub word: GeneratorWord,
    pub defect: MembershipDefect,
}

/// Conjugates `trials` sampled words over `Ep(sigma, Gamma)` by `a` and tests membership.
pub fn normalization_witness(
    a: &SympMatrix,
    net: &FormNet,
    trials: usize,
    seed: u64,
    max_len: usize,
) -> Result<Option<NormalizationWitness>> {
    check_shape(a, net)?;
    let gens = GeneratorSet::from_net(net);
    let inv = a.inverse();
    let mut master = word_rng(seed);
    for _ in 0..trials {
        let (word, g) = gens.sample_bounded_word(max_len, master.random());
        let conj = a.mul_unchecked(&g).mul_unchecked(&inv);
        if let Some(defect) = membership_defect(&conj, net) {
            return Ok(Some(NormalizationWitness { word, defect }));
        }
    }
    Ok(None)
}

/// Deliberate corruption of the closure net for mutation runs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NetMutation {
    pub i: i32,
    pub j: i32,
    /// the new (smaller) level of `sigma_ij` and `sigma_{-j,-i}`
    pub level: u64,
}

impl NetMutation {
    /// Shrinks the first nonzero level linking two classes of `nu`, or failing
    /// that the first short level inside a class, to zero.
    pub fn default_for(nu: &EquivRel, net: &FormNet) -> Option<NetMutation> {
        let s = net.index_set();
        let pairs: Vec<(i32, i32)> = s
            .indices()
            .flat_map(|i| s.indices().map(move |j| (i, j)))
            .filter(|&(i, j)| j != i && j != -i && !net.sigma(i, j).is_zero())
            .collect();
        let pick = pairs
            .iter()
            .find(|&&(i, j)| !nu.equiv(i, j))
            .or_else(|| pairs.first())?;
        Some(NetMutation { i: pick.0, j: pick.1, level: net.ring().modulus() })
    }

    pub fn apply(&self, net: &FormNet) -> Result<FormNet> {
        let s = net.index_set();
        s.check(self.i)?;
        s.check(self.j)?;
        let level = net.ring().ideal(self.level)?;
        if !level.le(net.sigma(self.i, self.j)) || level == net.sigma(self.i, self.j) {
            return Err(Error::Hypothesis(format!(
                "mutation must shrink sigma[{},{}] = {}",
                self.i,
                self.j,
                net.sigma(self.i, self.j)
            )));
        }
        let mut out = net.clone();
        out.set_sigma(self.i, self.j, level);
        out.set_sigma(-self.j, -self.i, level);
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "assertion", rename_all = "snake_case")]
pub enum SandwichFailure {
    /// (a): a sampled `h` outside the transporter
    Transporter { word: GeneratorWord, violation: TransporterViolation },
    /// (b): `h T h^{-1}` outside `Sp(sigma, Gamma)` for a generator `T`
    Conjugate { word: GeneratorWord, generator: TransvectionSpec, defect: MembershipDefect },
}

impl SandwichFailure {
    pub fn word(&self) -> &GeneratorWord {
        match self {
            SandwichFailure::Transporter { word, .. } | SandwichFailure::Conjugate { word, .. } => word,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SandwichReport {
    pub sigma: Vec<Vec<u64>>,
    pub gamma: Vec<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mutation: Option<NetMutation>,
    pub words_checked: usize,
    pub conjugates_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<SandwichFailure>,
}

impl SandwichReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }
}

/// Generators with one representative per `T_ij = T_{-j,-i}` pair.
fn canonical_generators(net: &FormNet) -> Vec<TransvectionSpec> {
    let s = net.index_set();
    GeneratorSet::from_net(net)
        .generators()
        .filter(|t| t.kind() == TransvectionKind::Long || s.pos(t.i()) <= s.pos(-t.j()))
        .collect()
}

/// Checks both sides of the sandwich on sampled words of the test subgroup
/// `H = <Ep(nu, R), seeded transvections>`: every word satisfies (T1)-(T3)
/// for the closure net and conjugates every `Ep(sigma, Gamma)` generator into
/// `Sp(sigma, Gamma)`.
pub fn sandwich_check(
    nu: &EquivRel,
    extra: &LevelSeed,
    ring: ModRing,
    trials: usize,
    seed: u64,
    max_len: usize,
    mutation: Option<NetMutation>,
) -> Result<SandwichReport> {
    if !nu.height_at_least(4, 5) {
        return Err(Error::Hypothesis(format!("h(nu) = {} is not at least (4, 5)", nu.height())));
    }
    let closure = closure_from_levels(nu, extra, ring)?;
    let net = match mutation {
        Some(mu) => mu.apply(&closure)?,
        None => closure,
    };
    let h_gens = GeneratorSet::for_overgroup(nu, extra, ring)?;
    let ep = canonical_generators(&net);
    let mut master = word_rng(seed);
    let mut report = SandwichReport {
        sigma: net.sigma_divisors(),
        gamma: net.gamma_divisors(),
        mutation,
        words_checked: 0,
        conjugates_checked: 0,
        failure: None,
    };
    for _ in 0..trials {
        let (word, h) = h_gens.sample_bounded_word(max_len, master.random());
        report.words_checked += 1;
        let (ok, tr) = is_in_transporter(&h, &net)?;
        if !ok {
            let violation = tr.first_violation().expect("failing report has a violation");
            report.failure = Some(SandwichFailure::Transporter { word, violation });
            return Ok(report);
        }
        for t in &ep {
            report.conjugates_checked += 1;
            if let Some(defect) = membership_defect(&root_element_unchecked(&h, t), &net) {
                report.failure = Some(SandwichFailure::Conjugate { word, generator: *t, defect });
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Re-evaluates a reported failure from its word alone.
pub fn replay_sandwich_failure(failure: &SandwichFailure, net: &FormNet) -> Result<bool> {
    let h = failure.word().product(net.ring(), net.index_set());
    Ok(match failure {
        SandwichFailure::Transporter { .. } => !is_in_transporter(&h, net)?.0,
        SandwichFailure::Conjugate { generator, .. } => {
            membership_defect(&root_element_unchecked(&h, generator), net).is_some()
        }
    })
}

/// Off-antidiagonal level recovery: the `(i, j)` entry of `T_ij(xi)` is `xi`,
/// so a net containing every generator of `Ep(sigma, Gamma)` must dominate
/// `sigma` away from the antidiagonal.
pub fn recovered_levels(gens: &[TransvectionSpec], index_set: IndexSet, ring: ModRing) -> Vec<Vec<Ideal>> {
    let dim = index_set.dim();
    let mut out = vec![vec![ring.zero_ideal(); dim]; dim];
    for t in gens.iter().filter(|t| t.kind() == TransvectionKind::Short) {
        let g = crate::symplectic::transvection_unchecked(t, index_set);
        let xi = g.get(t.i(), t.j());
        let (p, q) = (index_set.pos(t.i()), index_set.pos(t.j()));
        out[p][q] = out[p][q].join(ring.ideal_generated_by(xi));
    }
    out
}
