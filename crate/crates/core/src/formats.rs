//! Serializable shapes for the JSON boundary. Every conversion into a domain
//! type re-validates its invariants.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{EquivRel, IndexSet};
use crate::net::{FormNet, LevelSeed};
use crate::symplectic::{Matrix, SympMatrix, TransvectionKind, TransvectionSpec};
use crate::zmod::{Ideal, ModRing};

/// `{"m": 12, "d": 4}` for the ideal `(4)` of `Z/12`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdealDto {
    pub m: u64,
    pub d: u64,
}

impl TryFrom<IdealDto> for Ideal {
    type Error = Error;

    fn try_from(v: IdealDto) -> Result<Self> {
        ModRing::new(v.m)?.ideal(v.d)
    }
}

impl From<Ideal> for IdealDto {
    fn from(a: Ideal) -> Self {
        IdealDto { m: a.ring().modulus(), d: a.generator() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquivRelDto {
    pub n: usize,
    pub classes: Vec<Vec<i32>>,
}

impl TryFrom<EquivRelDto> for EquivRel {
    type Error = Error;

    fn try_from(v: EquivRelDto) -> Result<Self> {
        EquivRel::new(IndexSet::new(v.n)?, &v.classes)
    }
}

impl From<&EquivRel> for EquivRelDto {
    fn from(nu: &EquivRel) -> Self {
        EquivRelDto { n: nu.index_set().n(), classes: nu.classes().to_vec() }
    }
}

/// Rows in the order `1..n, -n..-1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDto {
    pub m: u64,
    pub n: usize,
    pub rows: Vec<Vec<u64>>,
}

impl TryFrom<MatrixDto> for Matrix {
    type Error = Error;

    fn try_from(v: MatrixDto) -> Result<Self> {
        Matrix::from_rows(ModRing::new(v.m)?, IndexSet::new(v.n)?, &v.rows)
    }
}

impl TryFrom<MatrixDto> for SympMatrix {
    type Error = Error;

    fn try_from(v: MatrixDto) -> Result<Self> {
        SympMatrix::new(Matrix::try_from(v)?)
    }
}

impl From<&Matrix> for MatrixDto {
    fn from(a: &Matrix) -> Self {
        MatrixDto { m: a.ring().modulus(), n: a.index_set().n(), rows: a.rows() }
    }
}

/// Levels as divisor generators, rows in matrix order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NetDto {
    pub m: u64,
    pub n: usize,
    pub sigma: Vec<Vec<u64>>,
    pub gamma: Vec<u64>,
}

impl TryFrom<NetDto> for FormNet {
    type Error = Error;

    /// Rejects arrays that are not form nets; exactness is not required.
    fn try_from(v: NetDto) -> Result<Self> {
        let net = FormNet::from_divisors(ModRing::new(v.m)?, IndexSet::new(v.n)?, &v.sigma, &v.gamma)?;
        let report = net.validate(false);
        if report.is_valid() {
            Ok(net)
        } else {
            Err(Error::InvalidNet(Box::new(report)))
        }
    }
}

impl From<&FormNet> for NetDto {
    fn from(net: &FormNet) -> Self {
        NetDto {
            m: net.ring().modulus(),
            n: net.index_set().n(),
            sigma: net.sigma_divisors(),
            gamma: net.gamma_divisors(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WordEntryDto {
    pub kind: TransvectionKind,
    pub i: i32,
    pub j: i32,
    pub xi: u64,
}

impl WordEntryDto {
    pub fn to_spec(self, ring: ModRing, index_set: IndexSet) -> Result<TransvectionSpec> {
        if self.xi >= ring.modulus() {
            return Err(Error::UnreducedParameter { value: self.xi, m: ring.modulus() });
        }
        let spec = TransvectionSpec::new(self.kind, self.i, self.j, ring.elem(self.xi as i64))?;
        spec.check_range(index_set)?;
        Ok(spec)
    }
}

impl From<&TransvectionSpec> for WordEntryDto {
    fn from(t: &TransvectionSpec) -> Self {
        WordEntryDto { kind: t.kind(), i: t.i(), j: t.j(), xi: t.param().value() }
    }
}

pub fn word_from_dto(entries: &[WordEntryDto], ring: ModRing, index_set: IndexSet) -> Result<Vec<TransvectionSpec>> {
    entries.iter().map(|e| e.to_spec(ring, index_set)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaSeedDto {
    pub i: i32,
    pub j: i32,
    pub d: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSeedDto {
    pub i: i32,
    pub d: u64,
}

/// `{"m": 4, "sigma": [{"i": 1, "j": 3, "d": 2}], "gamma": [{"i": 1, "d": 2}]}`
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LevelSeedDto {
    pub m: u64,
    #[serde(default)]
    pub sigma: Vec<SigmaSeedDto>,
    #[serde(default)]
    pub gamma: Vec<GammaSeedDto>,
}

impl LevelSeedDto {
    pub fn to_seed(&self, index_set: IndexSet) -> Result<(ModRing, LevelSeed)> {
        let ring = ModRing::new(self.m)?;
        let seed = LevelSeed {
            sigma: self.sigma.iter().map(|e| Ok((e.i, e.j, ring.ideal(e.d)?))).collect::<Result<_>>()?,
            gamma: self.gamma.iter().map(|e| Ok((e.i, ring.ideal(e.d)?))).collect::<Result<_>>()?,
        };
        seed.check(ring, index_set)?;
        Ok((ring, seed))
    }

    pub fn from_seed(ring: ModRing, seed: &LevelSeed) -> Self {
        LevelSeedDto {
            m: ring.modulus(),
            sigma: seed.sigma.iter().map(|&(i, j, a)| SigmaSeedDto { i, j, d: a.generator() }).collect(),
            gamma: seed.gamma.iter().map(|&(i, a)| GammaSeedDto { i, d: a.generator() }).collect(),
        }
    }
}
