//! The matrix groups `S_Y`: block upper triangular integer matrices whose
//! rows and columns are indexed by a closed set `Y` in `≺` order.

use std::fmt;
use std::ops::Range;
use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::int_matrix::{IntMatrix, RowOp};
use crate::lattice::{ClosureLattice, TotalOrder};
use crate::vertex_set::VertexSet;

/// Where a member of `S_Y` may have nonzero entries.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct StabPattern {
    closed_set: VertexSet,
    order: Vec<usize>,
    index: Vec<Option<usize>>,
    blocks: Vec<Range<usize>>,
    block_of: Vec<usize>,
    allowed: Vec<u64>,
}

impl StabPattern {
    pub fn new(lat: &ClosureLattice, ord: &TotalOrder, y: VertexSet) -> Result<Self> {
        lat.require_closed(y)?;
        let order = ord.sorted(y);
        let r = order.len();
        let mut index = vec![None; lat.vertex_count()];
        for (i, &v) in order.iter().enumerate() {
            index[v] = Some(i);
        }
        let mut blocks: Vec<Range<usize>> = Vec::new();
        let mut block_of = vec![0; r];
        for i in 0..r {
            let same = i > 0 && lat.class_index(order[i]) == lat.class_index(order[i - 1]);
            if same {
                blocks.last_mut().unwrap().end = i + 1;
            } else {
                blocks.push(i..i + 1);
            }
            block_of[i] = blocks.len() - 1;
        }
        let allowed = (0..r)
            .map(|i| {
                (0..r)
                    .filter(|&j| block_of[i] == block_of[j] || (i < j && lat.l_less(order[j], order[i])))
                    .fold(0u64, |acc, j| acc | 1 << j)
            })
            .collect();
        Ok(StabPattern {
            closed_set: y,
            order,
            index,
            blocks,
            block_of,
            allowed,
        })
    }

    pub fn closed_set(&self) -> VertexSet {
        self.closed_set
    }

    /// `u_1 ≺ ⋯ ≺ u_r`.
    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn dim(&self) -> usize {
        self.order.len()
    }

    /// Row of vertex `v`, if `v ∈ Y`.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.index.get(v).copied().flatten()
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block_of[i]
    }

    pub fn is_allowed(&self, i: usize, j: usize) -> bool {
        self.allowed[i] >> j & 1 == 1
    }

    /// Allowed positions outside the diagonal blocks.
    pub fn off_block_positions(&self) -> Vec<(usize, usize)> {
        let r = self.dim();
        (0..r)
            .flat_map(|i| (0..r).map(move |j| (i, j)))
            .filter(|&(i, j)| self.block_of[i] != self.block_of[j] && self.is_allowed(i, j))
            .collect()
    }

    /// Why `a` fails to be a member, or `None` if it is one.
    pub fn violation(&self, a: &IntMatrix) -> Result<Option<String>> {
        if a.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: a.dim(),
            });
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if a.get(i, j) != 0 && !self.is_allowed(i, j) {
                    return Ok(Some(format!("nonzero entry at ({}, {})", i + 1, j + 1)));
                }
            }
        }
        for b in &self.blocks {
            let idx: Vec<usize> = b.clone().collect();
            let d = a.submatrix(&idx).det()?;
            if d != 1 && d != -1 {
                return Ok(Some(format!(
                    "diagonal block {}..{} has determinant {d}",
                    b.start + 1,
                    b.end
                )));
            }
        }
        Ok(None)
    }

    pub fn is_member(&self, a: &IntMatrix) -> Result<bool> {
        Ok(self.violation(a)?.is_none())
    }

    /// A random member: unimodular diagonal blocks built from at most `bound`
    /// elementary moves each, times a unipotent matrix with allowed entries
    /// drawn from `[-bound, bound]`.
    pub fn sample<R: Rng + ?Sized>(self: &Arc<Self>, bound: u32, rng: &mut R) -> StabMatrix {
        let r = self.dim();
        let bound_i = bound as i64;
        let mut d = IntMatrix::identity(r);
        for b in &self.blocks {
            let k = b.len();
            for _ in 0..rng.gen_range(0..=bound) {
                let op = if k == 1 {
                    RowOp::Negate(b.start)
                } else {
                    let t = b.start + rng.gen_range(0..k);
                    let mut s = b.start + rng.gen_range(0..k - 1);
                    if s >= t {
                        s += 1;
                    }
                    match rng.gen_range(0..4) {
                        0 => RowOp::Swap(t, s),
                        1 => RowOp::Negate(t),
                        _ => RowOp::AddMultiple {
                            target: t,
                            source: s,
                            factor: if rng.gen() { 1 } else { -1 },
                        },
                    }
                };
                d.apply_row_op(op).expect("small entries");
            }
        }
        let mut u = IntMatrix::identity(r);
        for (i, j) in self.off_block_positions() {
            u.set(i, j, rng.gen_range(-bound_i..=bound_i));
        }
        let m = u.mul(&d).expect("small entries");
        StabMatrix {
            pattern: Arc::clone(self),
            m,
        }
    }

    pub fn sample_seeded(self: &Arc<Self>, bound: u32, seed: u64) -> StabMatrix {
        self.sample(bound, &mut ChaCha8Rng::seed_from_u64(seed))
    }

    /// Human-readable listing of blocks and allowed off-block positions.
    pub fn describe(&self, names: &[String]) -> String {
        let name = |i: usize| names[self.order[i]].as_str();
        let mut out = String::new();
        let order: Vec<&str> = (0..self.dim()).map(name).collect();
        out.push_str(&format!("order: {}\n", order.join(" ")));
        for (k, b) in self.blocks.iter().enumerate() {
            let members: Vec<&str> = b.clone().map(name).collect();
            out.push_str(&format!("block {}: {{{}}}\n", k + 1, members.join(", ")));
        }
        let off: Vec<String> = self
            .off_block_positions()
            .into_iter()
            .map(|(i, j)| format!("({},{})", name(i), name(j)))
            .collect();
        out.push_str(&format!("off-block: {}\n", off.join(" ")));
        out
    }
}

impl fmt::Debug for StabPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StabPattern")
            .field("closed_set", &self.closed_set)
            .field("order", &self.order)
            .field("blocks", &self.blocks)
            .finish()
    }
}

/// A member of `S_Y`.
#[derive(Clone, PartialEq, Eq)]
pub struct StabMatrix {
    pattern: Arc<StabPattern>,
    m: IntMatrix,
}

impl StabMatrix {
    pub fn new(pattern: Arc<StabPattern>, m: IntMatrix) -> Result<Self> {
        if let Some(why) = pattern.violation(&m)? {
            return Err(Error::NotMember(why));
        }
        Ok(StabMatrix { pattern, m })
    }

    pub fn identity(pattern: Arc<StabPattern>) -> Self {
        let m = IntMatrix::identity(pattern.dim());
        StabMatrix { pattern, m }
    }

    pub(crate) fn new_unchecked(pattern: Arc<StabPattern>, m: IntMatrix) -> Self {
        debug_assert!(pattern.is_member(&m).unwrap_or(false));
        StabMatrix { pattern, m }
    }

    pub fn pattern(&self) -> &Arc<StabPattern> {
        &self.pattern
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.m
    }

    pub fn is_identity(&self) -> bool {
        self.m.is_identity()
    }

    fn check_pattern(&self, other: &StabMatrix) -> Result<()> {
        if Arc::ptr_eq(&self.pattern, &other.pattern) || self.pattern == other.pattern {
            Ok(())
        } else {
            Err(Error::PatternMismatch)
        }
    }

    pub fn mul(&self, other: &StabMatrix) -> Result<StabMatrix> {
        self.check_pattern(other)?;
        let m = self.m.mul(&other.m)?;
        if let Some(why) = self.pattern.violation(&m)? {
            return Err(Error::Internal(format!("product left S_Y: {why}")));
        }
        Ok(StabMatrix {
            pattern: Arc::clone(&self.pattern),
            m,
        })
    }

    pub fn inverse(&self) -> Result<StabMatrix> {
        let m = self.m.inverse()?;
        if let Some(why) = self.pattern.violation(&m)? {
            return Err(Error::Internal(format!("inverse left S_Y: {why}")));
        }
        Ok(StabMatrix {
            pattern: Arc::clone(&self.pattern),
            m,
        })
    }

    pub fn det(&self) -> Result<i64> {
        self.m.det()
    }

    /// The `Z`-minor: rows and columns of the vertices in `Z`.
    pub fn minor(&self, z: &Arc<StabPattern>) -> Result<StabMatrix> {
        let idx = self.sub_indices(z)?;
        Ok(StabMatrix::new_unchecked(Arc::clone(z), self.m.submatrix(&idx)))
    }

    /// Copies a matrix over `Z ⊆ Y` into the `Z` positions of the identity
    /// over `Y`.
    pub fn embed(&self, y: &Arc<StabPattern>) -> Result<StabMatrix> {
        let idx = StabMatrix::identity(Arc::clone(y)).sub_indices(&self.pattern)?;
        let mut m = IntMatrix::identity(y.dim());
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                m.set(i, j, self.m.get(a, b));
            }
        }
        Ok(StabMatrix::new_unchecked(Arc::clone(y), m))
    }

    fn sub_indices(&self, z: &StabPattern) -> Result<Vec<usize>> {
        let y = self.pattern.closed_set;
        if !z.closed_set.is_subset(y) {
            return Err(Error::NotSubset {
                sub: format!("{:?}", z.closed_set),
                sup: format!("{:?}", y),
            });
        }
        Ok(z.order
            .iter()
            .map(|&v| self.pattern.index_of(v).expect("subset"))
            .collect())
    }

    /// Block diagonal part.
    pub fn diagonal_part(&self) -> StabMatrix {
        let p = &self.pattern;
        let mut d = IntMatrix::zeros(p.dim());
        for i in 0..p.dim() {
            for j in p.blocks[p.block_of[i]].clone() {
                d.set(i, j, self.m.get(i, j));
            }
        }
        StabMatrix::new_unchecked(Arc::clone(p), d)
    }

    /// `A = U·D` with `D` block diagonal and `U` unipotent.
    pub fn split_semidirect(&self) -> Result<(StabMatrix, StabMatrix)> {
        let d = self.diagonal_part();
        let u = self.mul(&d.inverse()?)?;
        if !u.is_in_uy() {
            return Err(Error::Internal("unipotent factor has nontrivial blocks".into()));
        }
        Ok((u, d))
    }

    /// Block diagonal.
    pub fn is_in_dy(&self) -> bool {
        let p = &self.pattern;
        (0..p.dim()).all(|i| (0..p.dim()).all(|j| p.block_of[i] == p.block_of[j] || self.m.get(i, j) == 0))
    }

    /// Identity diagonal blocks.
    pub fn is_in_uy(&self) -> bool {
        let p = &self.pattern;
        (0..p.dim()).all(|i| {
            p.blocks[p.block_of[i]]
                .clone()
                .all(|j| self.m.get(i, j) == (i == j) as i64)
        })
    }
}

impl fmt::Debug for StabMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "StabMatrix({:?}, {:?})", self.pattern.order, self.m)
    }
}

impl fmt::Display for StabMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.m, f)
    }
}

/// Whether the row of every vertex `x` (rows and columns of `a` indexed by
/// `≺`) is supported on `max_envelope(x)`, a necessary condition for the
/// matrix of an automorphism stabilising every `G(Y)`, `Y ∈ L^max`.
pub fn max_pattern_check(a: &IntMatrix, lat: &ClosureLattice, ord: &TotalOrder) -> bool {
    let seq = ord.sequence();
    if a.dim() != seq.len() {
        return false;
    }
    seq.iter().enumerate().all(|(i, &x)| {
        let env = lat.max_envelope(x);
        seq.iter()
            .enumerate()
            .all(|(j, &z)| a.get(i, j) == 0 || env.contains(z))
    })
}
