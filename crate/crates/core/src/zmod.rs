//! Exact arithmetic in `Z/m` and its lattice of ideals.
//!
//! Every ideal of `Z/m` is principal and generated by a divisor `d` of `m`,
//! so an [`Ideal`] is stored as that divisor: `d = 1` is the unit ideal and
//! `d = m` the zero ideal. Additive subgroups of `Z/m` coincide with ideals,
//! which is why form parameters are represented by the same type.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The ring `Z/m`, `2 <= m < 2^32`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct ModRing {
    modulus: u64,
}

impl TryFrom<u64> for ModRing {
    type Error = Error;

    fn try_from(m: u64) -> Result<Self> {
        ModRing::new(m)
    }
}

impl From<ModRing> for u64 {
    fn from(r: ModRing) -> u64 {
        r.modulus
    }
}

impl fmt::Display for ModRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Z/{}", self.modulus)
    }
}

impl ModRing {
    pub fn new(modulus: u64) -> Result<Self> {
        if !(2..1 << 32).contains(&modulus) {
            return Err(Error::InvalidModulus(modulus));
        }
        Ok(Self { modulus })
    }

    #[inline]
    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub(crate) fn check_same(self, other: ModRing) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::RingMismatch { left: self.modulus, right: other.modulus })
        }
    }

    /// Canonical representative of an arbitrary integer.
    #[inline]
    pub fn reduce(self, v: i64) -> u64 {
        v.rem_euclid(self.modulus as i64) as u64
    }

    #[inline]
    pub fn add(self, a: u64, b: u64) -> u64 {
        (a + b) % self.modulus
    }

    #[inline]
    pub fn sub(self, a: u64, b: u64) -> u64 {
        (a + self.modulus - b) % self.modulus
    }

    #[inline]
    pub fn mul(self, a: u64, b: u64) -> u64 {
        (a * b) % self.modulus
    }

    #[inline]
    pub fn neg(self, a: u64) -> u64 {
        (self.modulus - a) % self.modulus
    }

    /// Multiplies by a sign in `{+1, -1}`.
    #[inline]
    pub fn signed(self, sign: i32, a: u64) -> u64 {
        if sign < 0 {
            self.neg(a)
        } else {
            a
        }
    }

    pub fn elem(self, v: i64) -> RingElem {
        RingElem { ring: self, value: self.reduce(v) }
    }

    pub fn zero(self) -> RingElem {
        RingElem { ring: self, value: 0 }
    }

    pub fn one(self) -> RingElem {
        RingElem { ring: self, value: 1 }
    }

    pub fn elements(self) -> impl Iterator<Item = RingElem> {
        (0..self.modulus).map(move |value| RingElem { ring: self, value })
    }

    pub fn is_unit(self, a: u64) -> bool {
        a.gcd(&self.modulus) == 1
    }

    pub fn units(self) -> Vec<u64> {
        (1..self.modulus).filter(|&a| self.is_unit(a)).collect()
    }

    /// All divisors of `m` in increasing order.
    pub fn divisors(self) -> Vec<u64> {
        let m = self.modulus;
        let mut small = Vec::new();
        let mut large = Vec::new();
        let mut d = 1;
        while d * d <= m {
            if m % d == 0 {
                small.push(d);
                if d * d != m {
                    large.push(m / d);
                }
            }
            d += 1;
        }
        small.extend(large.into_iter().rev());
        small
    }

    /// Prime factorisation `m = prod p^k`, primes ascending.
    pub fn factorize(self) -> Vec<(u64, u32)> {
        let mut m = self.modulus;
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= m {
            if m % p == 0 {
                let mut k = 0;
                while m % p == 0 {
                    m /= p;
                    k += 1;
                }
                out.push((p, k));
            }
            p += 1;
        }
        if m > 1 {
            out.push((m, 1));
        }
        out
    }

    /// `Z/m` is local iff `m` is a prime power.
    pub fn is_local(self) -> bool {
        self.factorize().len() == 1
    }

    pub fn ideal(self, d: u64) -> Result<Ideal> {
        if d == 0 || self.modulus % d != 0 {
            return Err(Error::NotADivisor { d, m: self.modulus });
        }
        Ok(Ideal { ring: self, d })
    }

    /// The principal ideal `xR`.
    pub fn ideal_generated_by(self, x: u64) -> Ideal {
        Ideal { ring: self, d: (x % self.modulus).gcd(&self.modulus) }
    }

    pub fn zero_ideal(self) -> Ideal {
        Ideal { ring: self, d: self.modulus }
    }

    pub fn unit_ideal(self) -> Ideal {
        Ideal { ring: self, d: 1 }
    }

    pub fn ideals(self) -> Vec<Ideal> {
        self.divisors().into_iter().map(|d| Ideal { ring: self, d }).collect()
    }

    /// The Jacobson radical, generated by the product of the distinct primes dividing `m`.
    pub fn jacobson_radical(self) -> Ideal {
        let d = self.factorize().iter().map(|&(p, _)| p).product();
        Ideal { ring: self, d }
    }

    pub fn crt_split(self) -> CrtSplit {
        let factors = self
            .factorize()
            .into_iter()
            .map(|(prime, exponent)| CrtFactor {
                prime,
                exponent,
                ring: ModRing { modulus: prime.pow(exponent) },
            })
            .collect();
        CrtSplit { ring: self, factors }
    }
}

/// An element of `Z/m` in canonical form `0 <= value < m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: ModRing,
    value: u64,
}

impl RingElem {
    pub fn new(ring: ModRing, value: u64) -> Self {
        Self { ring, value: value % ring.modulus }
    }

    #[inline]
    pub fn ring(self) -> ModRing {
        self.ring
    }

    #[inline]
    pub fn value(self) -> u64 {
        self.value
    }

    pub fn is_zero(self) -> bool {
        self.value == 0
    }

    pub fn is_unit(self) -> bool {
        self.ring.is_unit(self.value)
    }

    pub fn square(self) -> Self {
        self * self
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for RingElem {
    type Output = RingElem;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElem { ring: self.ring, value: self.ring.add(self.value, rhs.value) }
    }
}

impl Sub for RingElem {
    type Output = RingElem;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElem { ring: self.ring, value: self.ring.sub(self.value, rhs.value) }
    }
}

impl Mul for RingElem {
    type Output = RingElem;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.ring, rhs.ring);
        RingElem { ring: self.ring, value: self.ring.mul(self.value, rhs.value) }
    }
}

impl Neg for RingElem {
    type Output = RingElem;
    fn neg(self) -> Self {
        RingElem { ring: self.ring, value: self.ring.neg(self.value) }
    }
}

/// The principal ideal `dZ/m` for a divisor `d` of `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    ring: ModRing,
    d: u64,
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.d)
    }
}

impl Ideal {
    #[inline]
    pub fn ring(self) -> ModRing {
        self.ring
    }

    /// The divisor generator; `m` for the zero ideal.
    #[inline]
    pub fn generator(self) -> u64 {
        self.d
    }

    pub fn is_zero(self) -> bool {
        self.d == self.ring.modulus
    }

    pub fn is_unit(self) -> bool {
        self.d == 1
    }

    /// Number of elements, `m / d`.
    pub fn size(self) -> u64 {
        self.ring.modulus / self.d
    }

    /// The elements `{k d mod m}` in increasing order.
    pub fn elements(self) -> impl Iterator<Item = u64> {
        let d = self.d;
        (0..self.size()).map(move |k| k * d)
    }

    /// Inclusion `self <= other`.
    #[inline]
    pub fn le(self, other: Ideal) -> bool {
        debug_assert_eq!(self.ring, other.ring);
        self.d % other.d == 0
    }

    #[inline]
    pub fn contains_value(self, x: u64) -> bool {
        x % self.d == 0
    }

    pub fn contains(self, x: RingElem) -> Result<bool> {
        self.ring.check_same(x.ring)?;
        Ok(self.contains_value(x.value))
    }

    pub fn sum(self, other: Ideal) -> Result<Ideal> {
        self.ring.check_same(other.ring)?;
        Ok(self.join(other))
    }

    pub fn product(self, other: Ideal) -> Result<Ideal> {
        self.ring.check_same(other.ring)?;
        Ok(self.times(other))
    }

    /// Smallest ideal containing `{xi^2 beta | xi in self, beta in other}`.
    pub fn square_scale_product(self, other: Ideal) -> Result<Ideal> {
        self.ring.check_same(other.ring)?;
        Ok(self.square_scale(other))
    }

    /// The ideal `2 self`.
    pub fn doubled(self) -> Ideal {
        self.scaled(2)
    }

    /// The ideal generated by `c * self`.
    pub fn scaled(self, c: u64) -> Ideal {
        let m = self.ring.modulus;
        Ideal { ring: self.ring, d: ((c % m) * self.d % m).gcd(&m) }
    }

    /// `a ∩ b`, generated by the lcm of the generators.
    pub fn intersection(self, other: Ideal) -> Result<Ideal> {
        self.ring.check_same(other.ring)?;
        Ok(self.meet(other))
    }

    // Unchecked variants for callers that already hold a single ring.

    #[inline]
    pub(crate) fn meet(self, other: Ideal) -> Ideal {
        debug_assert_eq!(self.ring, other.ring);
        Ideal { ring: self.ring, d: self.d.lcm(&other.d) }
    }

    #[inline]
    pub(crate) fn join(self, other: Ideal) -> Ideal {
        debug_assert_eq!(self.ring, other.ring);
        Ideal { ring: self.ring, d: self.d.gcd(&other.d) }
    }

    #[inline]
    pub(crate) fn times(self, other: Ideal) -> Ideal {
        debug_assert_eq!(self.ring, other.ring);
        Ideal { ring: self.ring, d: (self.d * other.d).gcd(&self.ring.modulus) }
    }

    #[inline]
    pub(crate) fn square_scale(self, other: Ideal) -> Ideal {
        debug_assert_eq!(self.ring, other.ring);
        let m = self.ring.modulus;
        let sq = (self.d * self.d).gcd(&m);
        Ideal { ring: self.ring, d: (sq * other.d).gcd(&m) }
    }
}

/// One prime-power component `Z/p^k` of `Z/m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CrtFactor {
    pub prime: u64,
    pub exponent: u32,
    pub ring: ModRing,
}

/// The decomposition `Z/m = prod Z/p^k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrtSplit {
    ring: ModRing,
    factors: Vec<CrtFactor>,
}

impl CrtSplit {
    pub fn ring(&self) -> ModRing {
        self.ring
    }

    pub fn factors(&self) -> &[CrtFactor] {
        &self.factors
    }

    pub fn rings(&self) -> Vec<ModRing> {
        self.factors.iter().map(|f| f.ring).collect()
    }

    pub fn project(&self, x: RingElem) -> Vec<RingElem> {
        self.factors.iter().map(|f| RingElem::new(f.ring, x.value)).collect()
    }

    pub fn project_ideal(&self, a: Ideal) -> Vec<Ideal> {
        self.factors.iter().map(|f| project_ideal(a, f.ring)).collect()
    }

    /// Inverse of [`CrtSplit::project`].
    pub fn reconstruct(&self, residues: &[RingElem]) -> Result<RingElem> {
        if residues.len() != self.factors.len() {
            return Err(Error::DimensionMismatch {
                expected: self.factors.len(),
                found: residues.len(),
            });
        }
        let m = i128::from(self.ring.modulus);
        let mut acc = 0i128;
        for (f, r) in self.factors.iter().zip(residues) {
            f.ring.check_same(r.ring)?;
            let q = i128::from(f.ring.modulus);
            let cofactor = m / q;
            // cofactor is invertible mod q
            let inv = cofactor.extended_gcd(&q).x.rem_euclid(q);
            acc = (acc + i128::from(r.value) * inv % m * cofactor) % m;
        }
        Ok(RingElem::new(self.ring, acc as u64))
    }
}

/// Image of an ideal under `Z/m -> Z/q` for `q | m`.
pub(crate) fn project_ideal(a: Ideal, target: ModRing) -> Ideal {
    Ideal { ring: target, d: a.d.gcd(&target.modulus) }
}
