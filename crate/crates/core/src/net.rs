//! Nets and form nets of ideals over `Z/m`.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::{EquivRel, IndexSet};
use crate::zmod::{Ideal, ModRing};

/// A `2n x 2n` array of ideals `sigma` with a column of form parameters `gamma`.
///
/// Construction only checks shapes; [`FormNet::validate`] checks the axioms.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormNet {
    ring: ModRing,
    index_set: IndexSet,
    sigma: Vec<Ideal>,
    gamma: Vec<Ideal>,
}

impl fmt::Debug for FormNet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "FormNet over {} (n = {}):", self.ring, self.index_set.n())?;
        for i in self.index_set.indices() {
            let row: Vec<u64> = self.index_set.indices().map(|j| self.sigma(i, j).generator()).collect();
            writeln!(f, "  {i:>3}: {row:?}  gamma = {}", self.gamma(i))?;
        }
        Ok(())
    }
}

/// One failed axiom, with the witnessing indices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum Violation {
    /// `sigma_ik sigma_kj` is not inside `sigma_ij`
    Net { i: i32, k: i32, j: i32 },
    /// `sigma_ij != sigma_{-j,-i}`
    Unitary { i: i32, j: i32 },
    /// `sigma_ii != R`
    DNet { i: i32 },
    /// `2 sigma_{i,-i}` is not inside `gamma_i`
    DoubledBelowGamma { i: i32 },
    /// `gamma_i` is not inside `sigma_{i,-i}`
    GammaBelowSigma { i: i32 },
    /// `sigma_ij^[2] gamma_j` is not inside `gamma_i`
    SquareScale { i: i32, j: i32 },
    /// `sigma_{i,-i}` differs from `sum_{k != +-i} sigma_ik sigma_{k,-i} + gamma_i`
    NotExact { i: i32 },
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize)]
pub struct NetReport {
    pub violations: Vec<Violation>,
}

impl NetReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for NetReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.violations.first() {
            None => write!(f, "no violations"),
            Some(v) => write!(f, "{} violation(s), first: {v:?}", self.violations.len()),
        }
    }
}

impl FormNet {
    pub fn new(
        ring: ModRing,
        index_set: IndexSet,
        sigma: Vec<Vec<Ideal>>,
        gamma: Vec<Ideal>,
    ) -> Result<Self> {
        let dim = index_set.dim();
        if sigma.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: sigma.len() });
        }
        if gamma.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: gamma.len() });
        }
        let mut flat = Vec::with_capacity(dim * dim);
        for row in sigma {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            flat.extend(row);
        }
        for a in flat.iter().chain(&gamma) {
            ring.check_same(a.ring())?;
        }
        Ok(Self { ring, index_set, sigma: flat, gamma })
    }

    /// Builds a net from divisor generators in matrix order.
    pub fn from_divisors(
        ring: ModRing,
        index_set: IndexSet,
        sigma: &[Vec<u64>],
        gamma: &[u64],
    ) -> Result<Self> {
        let sigma = sigma
            .iter()
            .map(|row| row.iter().map(|&d| ring.ideal(d)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        let gamma = gamma.iter().map(|&d| ring.ideal(d)).collect::<Result<Vec<_>>>()?;
        Self::new(ring, index_set, sigma, gamma)
    }

    fn uniform(ring: ModRing, index_set: IndexSet, off: Ideal, gamma: Ideal) -> Self {
        let dim = index_set.dim();
        let mut sigma = vec![off; dim * dim];
        for p in 0..dim {
            sigma[p * dim + p] = ring.unit_ideal();
        }
        Self { ring, index_set, sigma, gamma: vec![gamma; dim] }
    }

    /// Every level equal to `R`.
    pub fn full(ring: ModRing, index_set: IndexSet) -> Self {
        Self::uniform(ring, index_set, ring.unit_ideal(), ring.unit_ideal())
    }

    /// `R` on the diagonal, zero elsewhere, zero form parameters.
    pub fn diagonal(ring: ModRing, index_set: IndexSet) -> Self {
        Self::uniform(ring, index_set, ring.zero_ideal(), ring.zero_ideal())
    }

    /// `[nu]_R`: `R` inside equivalence blocks, zero outside.
    pub fn nu_net(nu: &EquivRel, ring: ModRing) -> Self {
        let s = nu.index_set();
        let mut net = Self::diagonal(ring, s);
        for i in s.indices() {
            for j in s.indices() {
                if nu.equiv(i, j) {
                    net.set_sigma(i, j, ring.unit_ideal());
                }
            }
            if nu.equiv(i, -i) {
                net.set_gamma(i, ring.unit_ideal());
            }
        }
        net
    }

    #[inline]
    pub fn ring(&self) -> ModRing {
        self.ring
    }

    #[inline]
    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    #[inline]
    pub fn sigma(&self, i: i32, j: i32) -> Ideal {
        self.sigma[self.index_set.pos(i) * self.index_set.dim() + self.index_set.pos(j)]
    }

    #[inline]
    pub fn gamma(&self, i: i32) -> Ideal {
        self.gamma[self.index_set.pos(i)]
    }

    /// `(sigma, Gamma)_{sr}`: `gamma_s` when `r = -s`, else `sigma_sr`.
    #[inline]
    pub fn level(&self, s: i32, r: i32) -> Ideal {
        if r == -s {
            self.gamma(s)
        } else {
            self.sigma(s, r)
        }
    }

    pub fn set_sigma(&mut self, i: i32, j: i32, a: Ideal) {
        debug_assert_eq!(a.ring(), self.ring);
        let p = self.index_set.pos(i) * self.index_set.dim() + self.index_set.pos(j);
        self.sigma[p] = a;
    }

    pub fn set_gamma(&mut self, i: i32, a: Ideal) {
        debug_assert_eq!(a.ring(), self.ring);
        let p = self.index_set.pos(i);
        self.gamma[p] = a;
    }

    /// Divisor generators of `sigma`, row by row.
    pub fn sigma_divisors(&self) -> Vec<Vec<u64>> {
        let s = self.index_set;
        s.indices().map(|i| s.indices().map(|j| self.sigma(i, j).generator()).collect()).collect()
    }

    pub fn gamma_divisors(&self) -> Vec<u64> {
        self.gamma.iter().map(|g| g.generator()).collect()
    }

    /// `sum_{k != +-i} sigma_ik sigma_{k,-i} + gamma_i`.
    pub fn exact_antidiagonal(&self, i: i32) -> Ideal {
        self.index_set
            .indices()
            .filter(|&k| k != i && k != -i)
            .fold(self.gamma(i), |acc, k| acc.join(self.sigma(i, k).times(self.sigma(k, -i))))
    }

    /// Lists every violated axiom. Exactness is checked only when `require_exact`.
    pub fn validate(&self, require_exact: bool) -> NetReport {
        let s = self.index_set;
        let mut violations = Vec::new();
        for i in s.indices() {
            if !self.sigma(i, i).is_unit() {
                violations.push(Violation::DNet { i });
            }
        }
        for i in s.indices() {
            for j in s.indices() {
                if self.sigma(i, j) != self.sigma(-j, -i) {
                    violations.push(Violation::Unitary { i, j });
                }
            }
        }
        for i in s.indices() {
            for k in s.indices() {
                for j in s.indices() {
                    if !self.sigma(i, k).times(self.sigma(k, j)).le(self.sigma(i, j)) {
                        violations.push(Violation::Net { i, k, j });
                    }
                }
            }
        }
        for i in s.indices() {
            let anti = self.sigma(i, -i);
            if !anti.doubled().le(self.gamma(i)) {
                violations.push(Violation::DoubledBelowGamma { i });
            }
            if !self.gamma(i).le(anti) {
                violations.push(Violation::GammaBelowSigma { i });
            }
            for j in s.indices() {
                if !self.sigma(i, j).square_scale(self.gamma(j)).le(self.gamma(i)) {
                    violations.push(Violation::SquareScale { i, j });
                }
            }
            if require_exact && self.exact_antidiagonal(i) != anti {
                violations.push(Violation::NotExact { i });
            }
        }
        NetReport { violations }
    }

    fn check_compatible(&self, other: &FormNet) -> Result<()> {
        self.ring.check_same(other.ring)?;
        if self.index_set != other.index_set {
            return Err(Error::DimensionMismatch {
                expected: self.index_set.dim(),
                found: other.index_set.dim(),
            });
        }
        Ok(())
    }

    /// The partial order: every level of `self` inside the matching level of `other`.
    pub fn leq(&self, other: &FormNet) -> Result<bool> {
        self.check_compatible(other)?;
        Ok(self.sigma.iter().zip(&other.sigma).all(|(a, b)| a.le(*b))
            && self.gamma.iter().zip(&other.gamma).all(|(a, b)| a.le(*b)))
    }

    /// `[nu]_R <= self`.
    pub fn is_major(&self, nu: &EquivRel) -> Result<bool> {
        if nu.index_set() != self.index_set {
            return Err(Error::DimensionMismatch {
                expected: self.index_set.dim(),
                found: nu.index_set().dim(),
            });
        }
        FormNet::nu_net(nu, self.ring).leq(self)
    }

    /// Replaces every `sigma_{i,-i}` by the right-hand side of the exactness equation.
    pub fn recompute_exact_antidiag(&self) -> Result<FormNet> {
        let mut out = self.clone();
        for i in self.index_set.indices() {
            out.set_sigma(i, -i, self.exact_antidiagonal(i));
        }
        let report = out.validate(true);
        if report.is_valid() {
            Ok(out)
        } else {
            Err(Error::InvalidNet(Box::new(report)))
        }
    }

    /// Applies `f` to every level, landing in `target`.
    pub(crate) fn map_levels(&self, mut f: impl FnMut(Ideal) -> Ideal, target: ModRing) -> FormNet {
        FormNet {
            ring: target,
            index_set: self.index_set,
            sigma: self.sigma.iter().map(|&a| f(a)).collect(),
            gamma: self.gamma.iter().map(|&a| f(a)).collect(),
        }
    }
}

/// Extra generator levels absorbed by [`closure_from_levels`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LevelSeed {
    /// `(i, j, I)`: short transvections `T_ij(xi)`, `xi in I`, `j != -i`
    pub sigma: Vec<(i32, i32, Ideal)>,
    /// `(i, I)`: long transvections `T_{i,-i}(alpha)`, `alpha in I`
    pub gamma: Vec<(i32, Ideal)>,
}

impl LevelSeed {
    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty() && self.gamma.is_empty()
    }

    pub fn check(&self, ring: ModRing, index_set: IndexSet) -> Result<()> {
        for &(i, j, a) in &self.sigma {
            index_set.check(i)?;
            index_set.check(j)?;
            ring.check_same(a.ring())?;
            if j == -i {
                return Err(Error::InvalidSeed {
                    i,
                    j,
                    reason: "antidiagonal levels are fixed by exactness; seed gamma instead",
                });
            }
        }
        for &(i, a) in &self.gamma {
            index_set.check(i)?;
            ring.check_same(a.ring())?;
        }
        Ok(())
    }
}

/// The least exact unitary form D-net above `[nu]_R` containing the seed levels.
///
/// Every rule below only enlarges ideals in a finite lattice, so iterating to
/// stability reaches the least fixpoint regardless of rule order.
pub fn closure_from_levels(nu: &EquivRel, seed: &LevelSeed, ring: ModRing) -> Result<FormNet> {
    let s = nu.index_set();
    seed.check(ring, s)?;
    let mut net = FormNet::nu_net(nu, ring);
    for &(i, j, a) in &seed.sigma {
        net.set_sigma(i, j, net.sigma(i, j).join(a));
    }
    for &(i, a) in &seed.gamma {
        net.set_gamma(i, net.gamma(i).join(a));
    }
    let idx: Vec<i32> = s.indices().collect();
    loop {
        let before = net.clone();
        // unitarity
        for &i in &idx {
            for &j in &idx {
                let joined = net.sigma(i, j).join(net.sigma(-j, -i));
                net.set_sigma(i, j, joined);
                net.set_sigma(-j, -i, joined);
            }
        }
        // net products
        for &k in &idx {
            for &i in &idx {
                let ik = net.sigma(i, k);
                if ik.is_zero() {
                    continue;
                }
                for &j in &idx {
                    let grown = net.sigma(i, j).join(ik.times(net.sigma(k, j)));
                    net.set_sigma(i, j, grown);
                }
            }
        }
        // form parameter floors
        for &i in &idx {
            let mut g = net.gamma(i).join(net.sigma(i, -i).doubled());
            for &j in &idx {
                g = g.join(net.sigma(i, j).square_scale(net.gamma(j)));
            }
            net.set_gamma(i, g);
        }
        // exactness
        for &i in &idx {
            let anti = net.sigma(i, -i).join(net.exact_antidiagonal(i));
            net.set_sigma(i, -i, anti);
        }
        if net == before {
            break;
        }
    }
    let report = net.validate(true);
    if !report.is_valid() {
        return Err(Error::InvalidNet(Box::new(report)));
    }
    Ok(net)
}
