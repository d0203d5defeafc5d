//! Localization over `Z/m`: every localization at a maximal ideal is the
//! surjection onto a CRT component `Z/p^k`, so patching is the Chinese
//! remainder theorem and the S-closure is the identity.

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::EquivRel;
use crate::net::{closure_from_levels, FormNet, LevelSeed};
use crate::subgroups::{membership_defect, sp_membership, word_rng, GeneratorSet, GeneratorWord, MembershipDefect};
use crate::symplectic::SympMatrix;
use crate::zmod::{project_ideal, Ideal, ModRing};

fn check_component(ring: ModRing, factor: ModRing) -> Result<()> {
    if ring.crt_split().rings().contains(&factor) {
        Ok(())
    } else {
        Err(Error::NotAComponent { factor: factor.modulus(), m: ring.modulus() })
    }
}

/// Entrywise reduction onto a CRT component.
pub fn project_matrix(a: &SympMatrix, factor: ModRing) -> Result<SympMatrix> {
    check_component(a.ring(), factor)?;
    Ok(SympMatrix::from_trusted(a.reduce_to(factor)))
}

/// Levelwise image on a CRT component; validity (and exactness, if present) must survive.
pub fn project_net(net: &FormNet, factor: ModRing) -> Result<FormNet> {
    check_component(net.ring(), factor)?;
    let out = net.map_levels(|a| project_ideal(a, factor), factor);
    let exact = net.validate(true).is_valid();
    let report = out.validate(exact);
    if report.is_valid() {
        Ok(out)
    } else {
        Err(Error::InvalidNet(Box::new(report)))
    }
}

/// A standard setting over a finite ring: the subring is the whole ring and
/// the multiplicative set consists of units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardSettingZm {
    ring: ModRing,
    multipliers: Vec<u64>,
}

impl StandardSettingZm {
    /// All units as multipliers.
    pub fn new(ring: ModRing) -> Self {
        Self { ring, multipliers: ring.units() }
    }

    pub fn with_multipliers(ring: ModRing, multipliers: Vec<u64>) -> Result<Self> {
        if let Some(&x) = multipliers.iter().find(|&&x| !ring.is_unit(x % ring.modulus())) {
            return Err(Error::Hypothesis(format!("{x} is not a unit of {ring}")));
        }
        Ok(Self { ring, multipliers: multipliers.iter().map(|x| x % ring.modulus()).collect() })
    }

    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn multipliers(&self) -> &[u64] {
        &self.multipliers
    }
}

fn saturate(level: Ideal, multipliers: &[u64], square: bool) -> Ideal {
    let ring = level.ring();
    let mut acc = ring.zero_ideal();
    for xi in 0..ring.modulus() {
        let hit = multipliers.iter().any(|&x| {
            let x = if square { ring.mul(x, x) } else { x };
            level.contains_value(ring.mul(x, xi))
        });
        if hit {
            acc = acc.join(ring.ideal_generated_by(xi));
        }
    }
    acc
}

/// `sigma_ij -> {xi | x xi in sigma_ij}`, `Gamma_i -> {alpha | x^2 alpha in Gamma_i}`
/// for some multiplier `x`, by enumeration.
pub fn s_closure(net: &FormNet, setting: &StandardSettingZm) -> Result<FormNet> {
    net.ring().check_same(setting.ring)?;
    let s = net.index_set();
    let mut out = net.clone();
    for i in s.indices() {
        for j in s.indices() {
            out.set_sigma(i, j, saturate(net.sigma(i, j), &setting.multipliers, false));
        }
        out.set_gamma(i, saturate(net.gamma(i), &setting.multipliers, true));
    }
    Ok(out)
}

/// The level `I` of the principal congruence subgroup `Sp(2n, R, I)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CongruenceLevel {
    pub ideal: Ideal,
}

impl CongruenceLevel {
    pub fn jacobson(ring: ModRing) -> Self {
        Self { ideal: ring.jacobson_radical() }
    }
}

/// `a_ij = delta_ij mod I` for all `i, j`.
pub fn congruence_membership(a: &SympMatrix, level: CongruenceLevel) -> Result<bool> {
    a.ring().check_same(level.ideal.ring())?;
    let s = a.index_set();
    let ring = a.ring();
    Ok(s.indices().all(|i| {
        s.indices().all(|j| level.ideal.contains_value(ring.sub(a.get(i, j), u64::from(i == j))))
    }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobsonWitness {
    pub word: GeneratorWord,
    pub defect: MembershipDefect,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JacobsonReport {
    pub jacobson_radical: u64,
    /// words of `H` sampled directly
    pub plain_words: usize,
    /// of those, the ones congruent to `e` modulo `J`
    pub plain_congruent: usize,
    /// words `w x w^{-1}` with `x` built from parameters in `J`
    pub conjugate_words: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<JacobsonWitness>,
}

impl JacobsonReport {
    pub fn passes(&self) -> bool {
        self.failure.is_none()
    }

    pub fn congruent_checked(&self) -> usize {
        self.plain_congruent + self.conjugate_words
    }
}

/// Every sampled word of `H` lying in `Sp(2n, R, J)` must lie in `Sp(sigma, Gamma)`
/// for the closure net. Random words rarely reduce to `e` mod `J`, so each trial
/// also builds `w x w^{-1}` with `x` a word whose parameters lie in `J`.
pub fn jacobson_corollary_check(
    nu: &EquivRel,
    extra: &LevelSeed,
    ring: ModRing,
    trials: usize,
    seed: u64,
    max_len: usize,
) -> Result<JacobsonReport> {
    if !ring.is_local() {
        return Err(Error::Hypothesis(format!("{ring} is not local")));
    }
    if !nu.height_at_least(4, 5) {
        return Err(Error::Hypothesis(format!("h(nu) = {} is not at least (4, 5)", nu.height())));
    }
    let net = closure_from_levels(nu, extra, ring)?;
    let level = CongruenceLevel::jacobson(ring);
    let gens = GeneratorSet::for_overgroup(nu, extra, ring)?;
    let small = gens.restricted_to(level.ideal);
    let s = nu.index_set();
    let mut report = JacobsonReport {
        jacobson_radical: level.ideal.generator(),
        plain_words: 0,
        plain_congruent: 0,
        conjugate_words: 0,
        failure: None,
    };
    let mut master = word_rng(seed);
    for _ in 0..trials {
        let (word, h) = gens.sample_bounded_word(max_len, master.random());
        report.plain_words += 1;
        if congruence_membership(&h, level)? {
            report.plain_congruent += 1;
            if let Some(defect) = membership_defect(&h, &net) {
                report.failure = Some(JacobsonWitness { word, defect });
                return Ok(report);
            }
        }

        let conj_seed = master.random();
        let mut rng = word_rng(conj_seed);
        let w_len = rng.random_range(0..=max_len);
        let w = gens.sample_specs(&mut rng, w_len);
        let x_len = rng.random_range(1..=max_len.max(1));
        let x = small.sample_specs(&mut rng, x_len);
        let specs: Vec<_> = w
            .iter()
            .chain(&x)
            .copied()
            .chain(w.iter().rev().map(|t| t.negated()))
            .collect();
        let word = GeneratorWord { specs, seed: conj_seed };
        let g = word.product(ring, s);
        debug_assert!(congruence_membership(&g, level)?);
        report.conjugate_words += 1;
        if let Some(defect) = membership_defect(&g, &net) {
            report.failure = Some(JacobsonWitness { word, defect });
            return Ok(report);
        }
    }
    Ok(report)
}

/// Membership on one CRT component.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactorMembership {
    /// `p^k`
    pub factor: u64,
    pub prime: u64,
    pub exponent: u32,
    pub member: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PatchReport {
    pub direct: bool,
    pub factors: Vec<FactorMembership>,
}

impl PatchReport {
    pub fn patched(&self) -> bool {
        self.factors.iter().all(|f| f.member)
    }

    pub fn agrees(&self) -> bool {
        self.direct == self.patched()
    }
}

pub fn patch_report(b: &SympMatrix, net: &FormNet) -> Result<PatchReport> {
    net.ring().check_same(b.ring())?;
    let mut factors = Vec::new();
    for f in b.ring().crt_split().factors() {
        let member = sp_membership(&project_matrix(b, f.ring)?, &project_net(net, f.ring)?);
        factors.push(FactorMembership {
            factor: f.ring.modulus(),
            prime: f.prime,
            exponent: f.exponent,
            member,
        });
    }
    Ok(PatchReport { direct: sp_membership(b, net), factors })
}

/// Membership decided factor by factor.
pub fn patch_membership(b: &SympMatrix, net: &FormNet) -> Result<bool> {
    Ok(patch_report(b, net)?.patched())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::IndexSet;
    use crate::subgroups::{row_length, sample_word};
    use crate::symplectic::{transvection, TransvectionSpec};

    fn zm(m: u64) -> ModRing {
        ModRing::new(m).unwrap()
    }

    fn iset(n: usize) -> IndexSet {
        IndexSet::new(n).unwrap()
    }

    fn blocks() -> EquivRel {
        EquivRel::new(iset(4), &[vec![1, 2, -1, -2], vec![3, 4, -3, -4]]).unwrap()
    }

    fn cross_net(r: ModRing, d: u64) -> FormNet {
        let seed = LevelSeed { sigma: vec![(1, 3, r.ideal_generated_by(d))], gamma: vec![] };
        closure_from_levels(&blocks(), &seed, r).unwrap()
    }

    #[test]
    fn project_examples() {
        let r = zm(12);
        let s = iset(2);
        let e = SympMatrix::identity(r, s);
        assert!(project_matrix(&e, zm(4)).unwrap().is_identity());
        let t = transvection(&TransvectionSpec::short(1, 2, r.elem(7)).unwrap(), s).unwrap();
        let t4 = transvection(&TransvectionSpec::short(1, 2, zm(4).elem(3)).unwrap(), s).unwrap();
        let t3 = transvection(&TransvectionSpec::short(1, 2, zm(3).one()).unwrap(), s).unwrap();
        assert_eq!(project_matrix(&t, zm(4)).unwrap(), t4);
        assert_eq!(project_matrix(&t, zm(3)).unwrap(), t3);
        assert!(matches!(project_matrix(&t, zm(2)), Err(Error::NotAComponent { factor: 2, m: 12 })));
        assert!(project_matrix(&t, zm(6)).is_err());
    }

    #[test]
    fn projection_is_a_homomorphism() {
        let r = zm(12);
        let net = FormNet::full(r, iset(3));
        for seed in 0..500 {
            let (_, a) = sample_word(&net, 6, seed);
            let (_, b) = sample_word(&net, 6, seed + 10_000);
            for f in [zm(4), zm(3)] {
                let lhs = project_matrix(&a.mul_unchecked(&b), f).unwrap();
                let rhs = project_matrix(&a, f).unwrap().mul_unchecked(&project_matrix(&b, f).unwrap());
                assert_eq!(lhs, rhs);
                for i in iset(3).indices() {
                    assert_eq!(row_length(&lhs, i).value(), row_length(&a.mul_unchecked(&b), i).value() % f.modulus());
                }
            }
        }
    }

    #[test]
    fn project_net_examples() {
        let r = zm(12);
        let full = FormNet::full(r, iset(4));
        assert_eq!(project_net(&full, zm(4)).unwrap(), FormNet::full(zm(4), iset(4)));
        let net = cross_net(r, 6);
        assert_eq!(net.sigma(1, 3), r.ideal(6).unwrap());
        assert_eq!(project_net(&net, zm(4)).unwrap().sigma(1, 3), zm(4).ideal(2).unwrap());
        assert_eq!(project_net(&net, zm(3)).unwrap().sigma(1, 3), zm(3).ideal(3).unwrap());
    }

    #[test]
    fn exactness_survives_projection() {
        for m in [12u64, 36, 60] {
            let r = zm(m);
            for d in r.divisors() {
                let net = cross_net(r, d);
                for f in r.crt_split().rings() {
                    assert!(project_net(&net, f).unwrap().validate(true).is_valid());
                }
            }
        }
    }

    #[test]
    fn s_closure_collapses() {
        let r = zm(8);
        let setting = StandardSettingZm::new(r);
        for d in r.divisors() {
            let net = cross_net(r, d);
            assert_eq!(s_closure(&net, &setting).unwrap(), net);
        }
        let zero = FormNet::diagonal(r, iset(4));
        assert_eq!(s_closure(&zero, &setting).unwrap(), zero);
        assert!(StandardSettingZm::with_multipliers(r, vec![1, 2]).is_err());
        let partial = StandardSettingZm::with_multipliers(r, vec![3]).unwrap();
        let net = cross_net(r, 2);
        let once = s_closure(&net, &partial).unwrap();
        assert_eq!(once, net);
        assert_eq!(s_closure(&once, &partial).unwrap(), once);
    }

    #[test]
    fn congruence_examples() {
        let r = zm(8);
        let s = iset(2);
        let j = CongruenceLevel::jacobson(r);
        assert_eq!(j.ideal.generator(), 2);
        assert!(congruence_membership(&SympMatrix::identity(r, s), j).unwrap());
        let t2 = transvection(&TransvectionSpec::short(1, 2, r.elem(2)).unwrap(), s).unwrap();
        let t1 = transvection(&TransvectionSpec::short(1, 2, r.one()).unwrap(), s).unwrap();
        assert!(congruence_membership(&t2, j).unwrap());
        assert!(!congruence_membership(&t1, j).unwrap());
    }

    #[test]
    fn jacobson_small_campaign() {
        let r = zm(4);
        let nu = EquivRel::full(iset(4));
        let seed = LevelSeed { sigma: vec![], gamma: vec![(1, r.zero_ideal())] };
        let rep = jacobson_corollary_check(&nu, &seed, r, 50, 3, 20).unwrap();
        assert!(rep.passes(), "{rep:?}");
        assert!(rep.congruent_checked() >= 50);
        assert!(jacobson_corollary_check(&nu, &seed, zm(12), 1, 1, 1).is_err());
        assert!(jacobson_corollary_check(&blocks(), &seed, zm(12), 1, 1, 1).is_err());
    }

    #[test]
    fn jacobson_over_z2_only_identity_is_congruent() {
        let r = zm(2);
        let nu = EquivRel::full(iset(4));
        let rep = jacobson_corollary_check(&nu, &LevelSeed::default(), r, 30, 1, 10).unwrap();
        assert!(rep.passes());
        assert_eq!(rep.jacobson_radical, 2);
    }

    #[test]
    fn patching_agrees() {
        for m in [12u64, 36] {
            let r = zm(m);
            let net = cross_net(r, 6);
            for seed in 0..200 {
                let (_, g) = sample_word(&FormNet::full(r, iset(4)), 4, seed);
                let rep = patch_report(&g, &net).unwrap();
                assert!(rep.agrees(), "{rep:?}");
            }
        }
        let r = zm(12);
        let net = cross_net(r, 6);
        assert!(patch_membership(&SympMatrix::identity(r, iset(4)), &net).unwrap());
        // 4 = 0 mod 4 but not mod 3: only the Z/3 factor rejects
        let t = transvection(&TransvectionSpec::short(1, 3, r.elem(4)).unwrap(), iset(4)).unwrap();
        let rep = patch_report(&t, &net).unwrap();
        assert!(!rep.direct && !rep.patched());
        assert_eq!(rep.factors.iter().filter(|f| !f.member).count(), 1);
    }
}
