//! The signed index set `I = {1, .., n, -n, .., -1}` and unitary equivalence
//! relations on it.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Sign of a nonzero index.
#[inline]
pub fn eps(i: i32) -> i32 {
    if i > 0 {
        1
    } else {
        -1
    }
}

/// Rows and columns of `2n x 2n` matrices, ordered `1..n, -n..-1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct IndexSet {
    n: usize,
}

impl IndexSet {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyIndexSet);
        }
        Ok(Self { n })
    }

    #[inline]
    pub fn n(self) -> usize {
        self.n
    }

    /// `2n`.
    #[inline]
    pub fn dim(self) -> usize {
        2 * self.n
    }

    #[inline]
    pub fn contains(self, i: i32) -> bool {
        i != 0 && i.unsigned_abs() as usize <= self.n
    }

    pub fn check(self, i: i32) -> Result<()> {
        if self.contains(i) {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index: i, n: self.n })
        }
    }

    pub fn sign(self, i: i32) -> Result<i32> {
        self.check(i)?;
        Ok(eps(i))
    }

    /// Dense position of `i` in the matrix order.
    #[inline]
    pub fn pos(self, i: i32) -> usize {
        debug_assert!(self.contains(i));
        if i > 0 {
            i as usize - 1
        } else {
            (2 * self.n as i32 + i) as usize
        }
    }

    /// Inverse of [`IndexSet::pos`].
    #[inline]
    pub fn index_at(self, pos: usize) -> i32 {
        debug_assert!(pos < self.dim());
        if pos < self.n {
            pos as i32 + 1
        } else {
            pos as i32 - 2 * self.n as i32
        }
    }

    /// All indices in matrix order.
    pub fn indices(self) -> impl Iterator<Item = i32> + Clone {
        (0..self.dim()).map(move |p| self.index_at(p))
    }

    /// `1..=n`.
    pub fn positives(self) -> impl Iterator<Item = i32> + Clone {
        1..=self.n as i32
    }
}

/// Which base tuples to enumerate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TupleKind {
    A,
    C,
}

/// `h(nu)`: minimum sizes of self-conjugate and non-self-conjugate classes.
/// `None` stands for infinity (no class of that type).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct HeightPair {
    pub self_conjugate_min: Option<usize>,
    pub non_self_conjugate_min: Option<usize>,
}

fn cmp_extended(a: Option<usize>, b: Option<usize>) -> Ordering {
    match (a, b) {
        (None, None) => Ordering::Equal,
        (None, Some(_)) => Ordering::Greater,
        (Some(_), None) => Ordering::Less,
        (Some(x), Some(y)) => x.cmp(&y),
    }
}

impl PartialOrd for HeightPair {
    /// Product order.
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let a = cmp_extended(self.self_conjugate_min, other.self_conjugate_min);
        let b = cmp_extended(self.non_self_conjugate_min, other.non_self_conjugate_min);
        match (a, b) {
            (x, y) if x == y => Some(x),
            (Ordering::Equal, y) => Some(y),
            (x, Ordering::Equal) => Some(x),
            _ => None,
        }
    }
}

impl HeightPair {
    pub fn finite(a: usize, b: usize) -> Self {
        Self { self_conjugate_min: Some(a), non_self_conjugate_min: Some(b) }
    }
}

impl fmt::Display for HeightPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<usize>| v.map_or("inf".to_string(), |x| x.to_string());
        write!(f, "({}, {})", show(self.self_conjugate_min), show(self.non_self_conjugate_min))
    }
}

/// A unitary equivalence relation: `i ~ j` implies `-i ~ -j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EquivRel {
    index_set: IndexSet,
    /// class label per dense position
    class_of: Vec<usize>,
    /// classes ordered by their first member in matrix order
    classes: Vec<Vec<i32>>,
}

impl EquivRel {
    /// Validates that `partition` covers `I` exactly once and is unitary.
    pub fn new(index_set: IndexSet, partition: &[Vec<i32>]) -> Result<Self> {
        let dim = index_set.dim();
        let mut label = vec![usize::MAX; dim];
        for (c, class) in partition.iter().enumerate() {
            if class.is_empty() {
                return Err(Error::NotAPartition(format!("class {c} is empty")));
            }
            for &i in class {
                index_set.check(i)?;
                let p = index_set.pos(i);
                if label[p] != usize::MAX {
                    return Err(Error::NotAPartition(format!("index {i} appears twice")));
                }
                label[p] = c;
            }
        }
        if let Some(p) = label.iter().position(|&l| l == usize::MAX) {
            return Err(Error::NotAPartition(format!(
                "index {} is not covered",
                index_set.index_at(p)
            )));
        }
        Self::from_labels(index_set, &label)
    }

    /// Builds the relation from an arbitrary labelling of positions.
    pub(crate) fn from_labels(index_set: IndexSet, label: &[usize]) -> Result<Self> {
        for i in index_set.indices() {
            for j in index_set.indices() {
                let same = label[index_set.pos(i)] == label[index_set.pos(j)];
                let neg_same = label[index_set.pos(-i)] == label[index_set.pos(-j)];
                if same && !neg_same {
                    return Err(Error::NotUnitary { i, j });
                }
            }
        }
        // relabel by first appearance in matrix order
        let mut remap = std::collections::HashMap::new();
        let mut classes: Vec<Vec<i32>> = Vec::new();
        let mut class_of = vec![0; index_set.dim()];
        for (p, &l) in label.iter().enumerate() {
            let c = *remap.entry(l).or_insert_with(|| {
                classes.push(Vec::new());
                classes.len() - 1
            });
            classes[c].push(index_set.index_at(p));
            class_of[p] = c;
        }
        Ok(Self { index_set, class_of, classes })
    }

    /// The discrete relation: every index alone.
    pub fn discrete(index_set: IndexSet) -> Self {
        let label: Vec<usize> = (0..index_set.dim()).collect();
        Self::from_labels(index_set, &label).expect("discrete relation is unitary")
    }

    /// The relation with a single class.
    pub fn full(index_set: IndexSet) -> Self {
        Self::from_labels(index_set, &vec![0; index_set.dim()]).expect("full relation is unitary")
    }

    pub fn index_set(&self) -> IndexSet {
        self.index_set
    }

    pub fn classes(&self) -> &[Vec<i32>] {
        &self.classes
    }

    #[inline]
    pub fn class_id(&self, i: i32) -> usize {
        self.class_of[self.index_set.pos(i)]
    }

    /// `nu(i)`.
    pub fn class_of(&self, i: i32) -> &[i32] {
        &self.classes[self.class_id(i)]
    }

    #[inline]
    pub fn equiv(&self, i: i32, j: i32) -> bool {
        self.class_id(i) == self.class_id(j)
    }

    /// The action of `-1` on classes: `nu(i) -> nu(-i)`.
    pub fn conjugate_class(&self, class: usize) -> usize {
        self.class_id(-self.classes[class][0])
    }

    pub fn is_self_conjugate(&self, class: usize) -> bool {
        self.conjugate_class(class) == class
    }

    pub fn height(&self) -> HeightPair {
        let mut h = HeightPair { self_conjugate_min: None, non_self_conjugate_min: None };
        for (c, class) in self.classes.iter().enumerate() {
            let slot = if self.is_self_conjugate(c) {
                &mut h.self_conjugate_min
            } else {
                &mut h.non_self_conjugate_min
            };
            *slot = Some(slot.map_or(class.len(), |v| v.min(class.len())));
        }
        h
    }

    /// `h(nu) >= (a, b)` in the product order.
    pub fn height_at_least(&self, a: usize, b: usize) -> bool {
        let h = self.height();
        h.self_conjugate_min.is_none_or(|v| v >= a)
            && h.non_self_conjugate_min.is_none_or(|v| v >= b)
    }

    /// Smallest class size.
    pub fn min_class_size(&self) -> usize {
        self.classes.iter().map(Vec::len).min().unwrap_or(0)
    }

    /// Enumerates base `k`-tuples. A-type: pairwise equivalent and pairwise
    /// non-opposite. C-type additionally requires every member to be
    /// equivalent to its negative.
    pub fn base_tuples(&self, kind: TupleKind, k: usize) -> impl Iterator<Item = Vec<i32>> {
        let mut out = Vec::new();
        if k > 0 {
            for class in &self.classes {
                let candidates: Vec<i32> = class
                    .iter()
                    .copied()
                    .filter(|&i| kind == TupleKind::A || self.equiv(i, -i))
                    .collect();
                let mut current = Vec::with_capacity(k);
                extend_tuples(&candidates, k, &mut current, &mut out);
            }
        }
        out.into_iter()
    }

    /// Enumerates every unitary equivalence relation on `I_{2n}`.
    ///
    /// A unitary relation is a set partition of `{1..n}` where each block `B`
    /// either becomes the self-conjugate class `B u -B` or is split into a
    /// conjugate pair `C, -C` by a choice of signs (up to global flip).
    pub fn enumerate_all(index_set: IndexSet) -> Vec<EquivRel> {
        let n = index_set.n();
        let mut out = Vec::new();
        for blocks in set_partitions(n) {
            // per block: 0 = self-conjugate, otherwise a sign mask with bit 0 clear
            let choices: Vec<usize> = blocks.iter().map(|b| 1 + (1usize << (b.len() - 1))).collect();
            let total: usize = choices.iter().product();
            for mut code in 0..total {
                let mut label = vec![0usize; index_set.dim()];
                let mut next = 0;
                for (b, block) in blocks.iter().enumerate() {
                    let choice = code % choices[b];
                    code /= choices[b];
                    if choice == 0 {
                        for &x in block {
                            label[index_set.pos(x)] = next;
                            label[index_set.pos(-x)] = next;
                        }
                        next += 1;
                    } else {
                        let mask = (choice - 1) << 1;
                        for (t, &x) in block.iter().enumerate() {
                            let flip = mask >> t & 1 == 1;
                            let (plus, minus) = if flip { (next + 1, next) } else { (next, next + 1) };
                            label[index_set.pos(x)] = plus;
                            label[index_set.pos(-x)] = minus;
                        }
                        next += 2;
                    }
                }
                out.push(Self::from_labels(index_set, &label).expect("construction is unitary"));
            }
        }
        out
    }
}

fn extend_tuples(candidates: &[i32], k: usize, current: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
    if current.len() == k {
        out.push(current.clone());
        return;
    }
    for &c in candidates {
        if current.iter().any(|&x| x == c || x == -c) {
            continue;
        }
        current.push(c);
        extend_tuples(candidates, k, current, out);
        current.pop();
    }
}

/// Set partitions of `{1..n}` via restricted growth strings.
fn set_partitions(n: usize) -> Vec<Vec<Vec<i32>>> {
    fn go(pos: usize, n: usize, rgs: &mut Vec<usize>, max: usize, out: &mut Vec<Vec<Vec<i32>>>) {
        if pos == n {
            let mut blocks = vec![Vec::new(); max + 1];
            for (x, &b) in rgs.iter().enumerate() {
                blocks[b].push(x as i32 + 1);
            }
            out.push(blocks);
            return;
        }
        for b in 0..=max + 1 {
            if pos == 0 && b > 0 {
                break;
            }
            rgs.push(b);
            go(pos + 1, n, rgs, if pos == 0 { 0 } else { max.max(b) }, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, &mut Vec::new(), 0, &mut out);
    out
}
