//! Symplectic matrices over `Z/m`, elementary transvections and the
//! Steinberg relations.
//!
//! Membership in `Sp(2n, R)` is decided by the mirror test: with
//! `mirror(a)_{ij} = eps_i eps_j a_{-j,-i}`, a matrix is symplectic iff
//! `a * mirror(a) = e`, and then `mirror(a)` is its inverse.

use std::fmt;
use std::ops::Deref;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{eps, IndexSet};
use crate::zmod::{ModRing, RingElem};

/// A dense `2n x 2n` matrix over `Z/m`, rows and columns in the order `1..n, -n..-1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: ModRing,
    index_set: IndexSet,
    entries: Vec<u64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix over {} (n = {}):", self.ring, self.index_set.n())?;
        for row in self.rows() {
            writeln!(f, "  {row:?}")?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn identity(ring: ModRing, index_set: IndexSet) -> Self {
        let dim = index_set.dim();
        let mut entries = vec![0; dim * dim];
        for p in 0..dim {
            entries[p * dim + p] = 1;
        }
        Self { ring, index_set, entries }
    }

    pub fn zero(ring: ModRing, index_set: IndexSet) -> Self {
        let dim = index_set.dim();
        Self { ring, index_set, entries: vec![0; dim * dim] }
    }

    /// Rows must be reduced and in matrix order.
    pub fn from_rows(ring: ModRing, index_set: IndexSet, rows: &[Vec<u64>]) -> Result<Self> {
        let dim = index_set.dim();
        if rows.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: rows.len() });
        }
        let mut entries = Vec::with_capacity(dim * dim);
        for (r, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: row.len() });
            }
            for (c, &v) in row.iter().enumerate() {
                if v >= ring.modulus() {
                    return Err(Error::UnreducedEntry { row: r, col: c, value: v, m: ring.modulus() });
                }
                entries.push(v);
            }
        }
        Ok(Self { ring, index_set, entries })
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
    pub fn dim(&self) -> usize {
        self.index_set.dim()
    }

    /// Entry `a_{ij}` addressed by signed indices.
    #[inline]
    pub fn get(&self, i: i32, j: i32) -> u64 {
        self.entries[self.index_set.pos(i) * self.dim() + self.index_set.pos(j)]
    }

    pub fn entry(&self, i: i32, j: i32) -> RingElem {
        RingElem::new(self.ring, self.get(i, j))
    }

    #[inline]
    pub fn get_pos(&self, r: usize, c: usize) -> u64 {
        self.entries[r * self.dim() + c]
    }

    /// Sets `a_{ij}` to `v mod m`.
    pub fn set(&mut self, i: i32, j: i32, v: u64) {
        let dim = self.dim();
        let p = self.index_set.pos(i) * dim + self.index_set.pos(j);
        self.entries[p] = v % self.ring.modulus();
    }

    pub fn rows(&self) -> Vec<Vec<u64>> {
        self.entries.chunks(self.dim()).map(<[u64]>::to_vec).collect()
    }

    fn check_compatible(&self, other: &Matrix) -> Result<()> {
        self.ring.check_same(other.ring)?;
        if self.index_set != other.index_set {
            return Err(Error::DimensionMismatch { expected: self.dim(), found: other.dim() });
        }
        Ok(())
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_compatible(other)?;
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Matrix) -> Matrix {
        let dim = self.dim();
        let m = self.ring.modulus();
        let mut out = vec![0u64; dim * dim];
        for r in 0..dim {
            let row = &self.entries[r * dim..(r + 1) * dim];
            let acc = &mut out[r * dim..(r + 1) * dim];
            for (k, &a) in row.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let other_row = &other.entries[k * dim..(k + 1) * dim];
                for (o, &b) in acc.iter_mut().zip(other_row) {
                    *o = (*o + a * b) % m;
                }
            }
        }
        Matrix { ring: self.ring, index_set: self.index_set, entries: out }
    }

    /// `mirror(a)_{ij} = eps_i eps_j a_{-j,-i}`.
    pub fn mirror(&self) -> Matrix {
        let s = self.index_set;
        let mut out = Matrix::zero(self.ring, s);
        for i in s.indices() {
            for j in s.indices() {
                let v = self.ring.signed(eps(i) * eps(j), self.get(-j, -i));
                out.set(i, j, v);
            }
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        let dim = self.dim();
        self.entries
            .iter()
            .enumerate()
            .all(|(p, &v)| v == u64::from(p / dim == p % dim))
    }

    /// First position where `a * mirror(a)` differs from `e`.
    fn mirror_defect(&self) -> Option<(i32, i32)> {
        let prod = self.mul_unchecked(&self.mirror());
        let dim = self.dim();
        (0..dim * dim)
            .find(|&p| prod.entries[p] != u64::from(p / dim == p % dim))
            .map(|p| (self.index_set.index_at(p / dim), self.index_set.index_at(p % dim)))
    }

    pub fn is_symplectic(&self) -> bool {
        self.mirror_defect().is_none()
    }

    /// Entrywise image under `Z/m -> Z/q`.
    pub(crate) fn reduce_to(&self, target: ModRing) -> Matrix {
        let q = target.modulus();
        Matrix {
            ring: target,
            index_set: self.index_set,
            entries: self.entries.iter().map(|v| v % q).collect(),
        }
    }
}

/// Free-function form of [`Matrix::is_symplectic`].
pub fn is_symplectic(a: &Matrix) -> bool {
    a.is_symplectic()
}

/// A matrix that passed the mirror test.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SympMatrix(Matrix);

impl fmt::Debug for SympMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl Deref for SympMatrix {
    type Target = Matrix;
    fn deref(&self) -> &Matrix {
        &self.0
    }
}

impl TryFrom<Matrix> for SympMatrix {
    type Error = Error;
    fn try_from(m: Matrix) -> Result<Self> {
        SympMatrix::new(m)
    }
}

impl SympMatrix {
    pub fn new(a: Matrix) -> Result<Self> {
        match a.mirror_defect() {
            None => Ok(SympMatrix(a)),
            Some((row, col)) => Err(Error::NotSymplectic { row, col }),
        }
    }

    pub fn identity(ring: ModRing, index_set: IndexSet) -> Self {
        SympMatrix(Matrix::identity(ring, index_set))
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn multiply(&self, other: &SympMatrix) -> Result<SympMatrix> {
        Ok(SympMatrix(self.0.mul(&other.0)?))
    }

    pub(crate) fn mul_unchecked(&self, other: &SympMatrix) -> SympMatrix {
        SympMatrix(self.0.mul_unchecked(&other.0))
    }

    /// The mirror matrix, which is the inverse.
    pub fn inverse(&self) -> SympMatrix {
        SympMatrix(self.0.mirror())
    }

    /// `a'_{ij} = eps_i eps_j a_{-j,-i}` without materialising the inverse.
    #[inline]
    pub fn inv_entry(&self, i: i32, j: i32) -> u64 {
        self.ring.signed(eps(i) * eps(j), self.get(-j, -i))
    }

    /// `x y x^{-1} y^{-1}`.
    pub fn commutator(&self, other: &SympMatrix) -> Result<SympMatrix> {
        self.0.check_compatible(&other.0)?;
        Ok(self
            .mul_unchecked(other)
            .mul_unchecked(&self.inverse())
            .mul_unchecked(&other.inverse()))
    }

    pub(crate) fn from_trusted(a: Matrix) -> SympMatrix {
        debug_assert!(a.is_symplectic());
        SympMatrix(a)
    }
}

/// Mirror inverse of an arbitrary matrix; fails unless it passes the mirror test.
pub fn symp_inverse(a: &Matrix) -> Result<SympMatrix> {
    Ok(SympMatrix::new(a.clone())?.inverse())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TransvectionKind {
    Short,
    Long,
}

/// `T_{ij}(xi)`: short when `j != +-i`, long when `j = -i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TransvectionSpec {
    kind: TransvectionKind,
    i: i32,
    j: i32,
    param: RingElem,
}

impl Serialize for TransvectionSpec {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("TransvectionSpec", 4)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("i", &self.i)?;
        st.serialize_field("j", &self.j)?;
        st.serialize_field("xi", &self.param.value())?;
        st.end()
    }
}

impl fmt::Display for TransvectionSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "T[{},{}]({})", self.i, self.j, self.param)
    }
}

impl TransvectionSpec {
    pub fn new(kind: TransvectionKind, i: i32, j: i32, param: RingElem) -> Result<Self> {
        let ok = i != 0
            && j != 0
            && match kind {
                TransvectionKind::Short => j != i && j != -i,
                TransvectionKind::Long => j == -i,
            };
        if !ok {
            return Err(Error::InvalidTransvection { i, j });
        }
        Ok(Self { kind, i, j, param })
    }

    /// Infers the kind from the index pair.
    pub fn of(i: i32, j: i32, param: RingElem) -> Result<Self> {
        let kind = if j == -i { TransvectionKind::Long } else { TransvectionKind::Short };
        Self::new(kind, i, j, param)
    }

    pub fn short(i: i32, j: i32, param: RingElem) -> Result<Self> {
        Self::new(TransvectionKind::Short, i, j, param)
    }

    pub fn long(i: i32, param: RingElem) -> Result<Self> {
        Self::new(TransvectionKind::Long, i, -i, param)
    }

    pub fn kind(&self) -> TransvectionKind {
        self.kind
    }

    pub fn i(&self) -> i32 {
        self.i
    }

    pub fn j(&self) -> i32 {
        self.j
    }

    pub fn param(&self) -> RingElem {
        self.param
    }

    pub fn with_param(&self, param: RingElem) -> Self {
        Self { param, ..*self }
    }

    pub fn negated(&self) -> Self {
        self.with_param(-self.param)
    }

    pub fn check_range(&self, index_set: IndexSet) -> Result<()> {
        index_set.check(self.i)?;
        index_set.check(self.j)
    }
}

/// `e + xi e_ij - eps_i eps_j xi e_{-j,-i}` (short) or `e + alpha e_{i,-i}` (long).
pub fn transvection(spec: &TransvectionSpec, index_set: IndexSet) -> Result<SympMatrix> {
    spec.check_range(index_set)?;
    Ok(transvection_unchecked(spec, index_set))
}

pub(crate) fn transvection_unchecked(spec: &TransvectionSpec, index_set: IndexSet) -> SympMatrix {
    let ring = spec.param.ring();
    let x = spec.param.value();
    let mut a = Matrix::identity(ring, index_set);
    let (i, j) = (spec.i, spec.j);
    match spec.kind {
        TransvectionKind::Long => a.set(i, -i, x),
        TransvectionKind::Short => {
            a.set(i, j, x);
            a.set(-j, -i, ring.signed(-eps(i) * eps(j), x));
        }
    }
    SympMatrix(a)
}

/// Product of a word of transvections, left to right.
pub fn word_product(
    specs: &[TransvectionSpec],
    ring: ModRing,
    index_set: IndexSet,
) -> Result<SympMatrix> {
    let mut acc = SympMatrix::identity(ring, index_set);
    for s in specs {
        ring.check_same(s.param.ring())?;
        acc = acc.mul_unchecked(&transvection(s, index_set)?);
    }
    Ok(acc)
}

/// `g T g^{-1}` computed as a rank-two update of the identity.
pub fn root_element(g: &SympMatrix, t: &TransvectionSpec) -> Result<SympMatrix> {
    g.ring().check_same(t.param.ring())?;
    t.check_range(g.index_set())?;
    Ok(root_element_unchecked(g, t))
}

pub(crate) fn root_element_unchecked(g: &SympMatrix, t: &TransvectionSpec) -> SympMatrix {
    let ring = g.ring();
    let s = g.index_set();
    let x = t.param.value();
    let mut out = Matrix::identity(ring, s);
    // e + x g_{*i} g'_{j*}  [ - eps_i eps_j x g_{*,-j} g'_{-i,*} ]
    let mut add_outer = |col: i32, row: i32, coeff: u64| {
        if coeff == 0 {
            return;
        }
        for r in s.indices() {
            let left = ring.mul(coeff, g.get(r, col));
            if left == 0 {
                continue;
            }
            for c in s.indices() {
                let v = ring.add(out.get(r, c), ring.mul(left, g.inv_entry(row, c)));
                out.set(r, c, v);
            }
        }
    };
    add_outer(t.i, t.j, x);
    if t.kind == TransvectionKind::Short {
        add_outer(-t.j, -t.i, ring.signed(-eps(t.i) * eps(t.j), x));
    }
    SympMatrix(out)
}

/// The six Steinberg relations with their index and parameter data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `T_ij(xi) = T_{-j,-i}(-eps_i eps_j xi)`, `i != +-j`
    R1 { i: i32, j: i32, xi: u64 },
    /// `T_ij(xi) T_ij(zeta) = T_ij(xi + zeta)`, `i != j`
    R2 { i: i32, j: i32, xi: u64, zeta: u64 },
    /// `[T_ij(xi), T_hk(zeta)] = e`, `h != j, -i` and `k != i, -j`
    R3 { i: i32, j: i32, h: i32, k: i32, xi: u64, zeta: u64 },
    /// `[T_ij(xi), T_jh(zeta)] = T_ih(xi zeta)`, `i, h != +-j`, `i != +-h`
    R4 { i: i32, j: i32, h: i32, xi: u64, zeta: u64 },
    /// `[T_ij(xi), T_{j,-i}(zeta)] = T_{i,-i}(2 xi zeta)`, `i != +-j`
    R5 { i: i32, j: i32, xi: u64, zeta: u64 },
    /// `[T_{i,-i}(xi), T_{-i,j}(zeta)] = T_ij(xi zeta) T_{-j,j}(eps_i eps_j xi zeta^2)`, `i != +-j`
    R6 { i: i32, j: i32, xi: u64, zeta: u64 },
}

impl Relation {
    pub fn name(&self) -> &'static str {
        match self {
            Relation::R1 { .. } => "R1",
            Relation::R2 { .. } => "R2",
            Relation::R3 { .. } => "R3",
            Relation::R4 { .. } => "R4",
            Relation::R5 { .. } => "R5",
            Relation::R6 { .. } => "R6",
        }
    }

    fn indices(&self) -> Vec<i32> {
        match *self {
            Relation::R1 { i, j, .. }
            | Relation::R2 { i, j, .. }
            | Relation::R5 { i, j, .. }
            | Relation::R6 { i, j, .. } => vec![i, j],
            Relation::R3 { i, j, h, k, .. } => vec![i, j, h, k],
            Relation::R4 { i, j, h, .. } => vec![i, j, h],
        }
    }

    /// `None` when the side conditions hold, otherwise a description.
    pub fn side_condition_failure(&self) -> Option<String> {
        let bad = |cond: bool, what: &str| (!cond).then(|| what.to_string());
        match *self {
            Relation::R1 { i, j, .. }
            | Relation::R5 { i, j, .. }
            | Relation::R6 { i, j, .. } => bad(i != j && i != -j, "need i != +-j"),
            Relation::R2 { i, j, .. } => bad(i != j, "need i != j"),
            Relation::R3 { i, j, h, k, .. } => bad(i != j, "need i != j")
                .or_else(|| bad(h != k, "need h != k"))
                .or_else(|| bad(h != j && h != -i, "need h != j, -i"))
                .or_else(|| bad(k != i && k != -j, "need k != i, -j")),
            Relation::R4 { i, j, h, .. } => {
                bad(i != j && i != -j && h != j && h != -j, "need i, h != +-j")
                    .or_else(|| bad(i != h && i != -h, "need i != +-h"))
            }
        }
    }

    /// Exhaustive list of admissible instances over `ring` with `n = index_set.n()`.
    pub fn exhaustive(index_set: IndexSet, ring: ModRing) -> Vec<Relation> {
        let idx: Vec<i32> = index_set.indices().collect();
        let m = ring.modulus();
        let params: Vec<(u64, u64)> =
            (0..m).flat_map(|x| (0..m).map(move |z| (x, z))).collect();
        let mut out = Vec::new();
        let mut push = |r: Relation| {
            if r.side_condition_failure().is_none() {
                out.push(r);
            }
        };
        for &i in &idx {
            for &j in &idx {
                for xi in 0..m {
                    push(Relation::R1 { i, j, xi });
                }
                for &(xi, zeta) in &params {
                    push(Relation::R2 { i, j, xi, zeta });
                    push(Relation::R5 { i, j, xi, zeta });
                    push(Relation::R6 { i, j, xi, zeta });
                }
            }
        }
        for &i in &idx {
            for &j in &idx {
                for &h in &idx {
                    for &(xi, zeta) in &params {
                        push(Relation::R4 { i, j, h, xi, zeta });
                    }
                    for &k in &idx {
                        for &(xi, zeta) in &params {
                            push(Relation::R3 { i, j, h, k, xi, zeta });
                        }
                    }
                }
            }
        }
        out
    }

    /// A uniformly chosen relation type with admissible random data.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, index_set: IndexSet, ring: ModRing) -> Relation {
        let m = ring.modulus();
        let idx: Vec<i32> = index_set.indices().collect();
        loop {
            let mut pick = || idx[rng.random_range(0..idx.len())];
            let (i, j, h, k) = (pick(), pick(), pick(), pick());
            let xi = rng.random_range(0..m);
            let zeta = rng.random_range(0..m);
            let r = match rng.random_range(0..6) {
                0 => Relation::R1 { i, j, xi },
                1 => Relation::R2 { i, j, xi, zeta },
                2 => Relation::R3 { i, j, h, k, xi, zeta },
                3 => Relation::R4 { i, j, h, xi, zeta },
                4 => Relation::R5 { i, j, xi, zeta },
                _ => Relation::R6 { i, j, xi, zeta },
            };
            if r.side_condition_failure().is_none() {
                return r;
            }
        }
    }
}

/// Evaluates both sides of a Steinberg relation and compares them exactly.
pub fn steinberg_check(relation: &Relation, ring: ModRing, index_set: IndexSet) -> Result<bool> {
    if let Some(detail) = relation.side_condition_failure() {
        return Err(Error::SideCondition { relation: relation.name(), detail });
    }
    for i in relation.indices() {
        index_set.check(i)?;
    }
    let t = |i: i32, j: i32, x: u64| {
        let spec = TransvectionSpec::of(i, j, RingElem::new(ring, x))?;
        transvection(&spec, index_set)
    };
    let holds = match *relation {
        Relation::R1 { i, j, xi } => {
            let rhs = ring.signed(-eps(i) * eps(j), xi % ring.modulus());
            t(i, j, xi)? == t(-j, -i, rhs)?
        }
        Relation::R2 { i, j, xi, zeta } => {
            t(i, j, xi)?.multiply(&t(i, j, zeta)?)? == t(i, j, ring.add(xi % ring.modulus(), zeta % ring.modulus()))?
        }
        Relation::R3 { i, j, h, k, xi, zeta } => {
            t(i, j, xi)?.commutator(&t(h, k, zeta)?)?.is_identity()
        }
        Relation::R4 { i, j, h, xi, zeta } => {
            t(i, j, xi)?.commutator(&t(j, h, zeta)?)? == t(i, h, ring.mul(xi % ring.modulus(), zeta % ring.modulus()))?
        }
        Relation::R5 { i, j, xi, zeta } => {
            let two_xz = ring.mul(2, ring.mul(xi % ring.modulus(), zeta % ring.modulus()));
            t(i, j, xi)?.commutator(&t(j, -i, zeta)?)? == t(i, -i, two_xz)?
        }
        Relation::R6 { i, j, xi, zeta } => {
            let (x, z) = (xi % ring.modulus(), zeta % ring.modulus());
            let long = ring.signed(eps(i) * eps(j), ring.mul(x, ring.mul(z, z)));
            let rhs = t(i, j, ring.mul(x, z))?.multiply(&t(-j, j, long)?)?;
            t(i, -i, xi)?.commutator(&t(-i, j, zeta)?)? == rhs
        }
    };
    Ok(holds)
}
