//! Square integer matrices with overflow-checked arithmetic, and row
//! reduction of unimodular matrices to the identity.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(n: usize) -> Self {
        IntMatrix {
            n,
            data: vec![0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        let mut data = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(IntMatrix { n, data })
    }

    pub fn rows(&self) -> Vec<Vec<i64>> {
        self.data
            .chunks(self.n.max(1))
            .take(self.n)
            .map(|r| r.to_vec())
            .collect()
    }

    pub fn row(&self, i: usize) -> &[i64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn is_identity(&self) -> bool {
        (0..self.n).all(|i| (0..self.n).all(|j| self.get(i, j) == (i == j) as i64))
    }

    pub fn max_abs(&self) -> u64 {
        self.data.iter().map(|v| v.unsigned_abs()).max().unwrap_or(0)
    }

    pub fn mul(&self, other: &IntMatrix) -> Result<IntMatrix> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let n = self.n;
        let mut out = IntMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if b == 0 {
                        continue;
                    }
                    let cur = out.get(i, j);
                    let v = a
                        .checked_mul(b)
                        .and_then(|p| p.checked_add(cur))
                        .ok_or(Error::Overflow)?;
                    out.set(i, j, v);
                }
            }
        }
        Ok(out)
    }

    /// Rows and columns `idx`, in the given order.
    pub fn submatrix(&self, idx: &[usize]) -> IntMatrix {
        let k = idx.len();
        let mut out = IntMatrix::zeros(k);
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                out.set(a, b, self.get(i, j));
            }
        }
        out
    }

    /// Determinant by fraction-free elimination.
    pub fn det(&self) -> Result<i64> {
        let n = self.n;
        if n == 0 {
            return Ok(1);
        }
        let mut a: Vec<i128> = self.data.iter().map(|&v| v as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                match (k + 1..n).find(|&i| a[i * n + k] != 0) {
                    Some(i) => {
                        for j in 0..n {
                            a.swap(k * n + j, i * n + j);
                        }
                        sign = -sign;
                    }
                    None => return Ok(0),
                }
            }
            let p = a[k * n + k];
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = a[i * n + j]
                        .checked_mul(p)
                        .and_then(|x| x.checked_sub(a[i * n + k].checked_mul(a[k * n + j])?))
                        .ok_or(Error::Overflow)?;
                    a[i * n + j] = v / prev;
                }
            }
            prev = p;
        }
        i64::try_from(sign * a[n * n - 1]).map_err(|_| Error::Overflow)
    }

    pub fn apply_row_op(&mut self, op: RowOp) -> Result<()> {
        let n = self.n;
        match op {
            RowOp::AddMultiple {
                target,
                source,
                factor,
            } => {
                for j in 0..n {
                    let s = self.get(source, j);
                    if s != 0 {
                        let v = s
                            .checked_mul(factor)
                            .and_then(|p| p.checked_add(self.get(target, j)))
                            .ok_or(Error::Overflow)?;
                        self.set(target, j, v);
                    }
                }
            }
            RowOp::Swap(i, k) => {
                for j in 0..n {
                    self.data.swap(i * n + j, k * n + j);
                }
            }
            RowOp::Negate(i) => {
                for j in 0..n {
                    let v = self.get(i, j).checked_neg().ok_or(Error::Overflow)?;
                    self.set(i, j, v);
                }
            }
        }
        Ok(())
    }

    /// Row operations `E_1, …, E_k` with `E_k ⋯ E_1 · self = I`.
    pub fn reduce_to_identity(&self) -> Result<Vec<RowOp>> {
        let n = self.n;
        let mut m = self.clone();
        let mut ops = Vec::new();
        let mut push = |m: &mut IntMatrix, op: RowOp| -> Result<()> {
            m.apply_row_op(op)?;
            ops.push(op);
            Ok(())
        };
        for c in 0..n {
            // Euclid on column c among rows c.., leaving the gcd in row c
            loop {
                let mut nonzero = (c..n).filter(|&i| m.get(i, c) != 0);
                let Some(first) = nonzero.next() else {
                    return Err(Error::NotUnimodular);
                };
                if nonzero.next().is_none() {
                    if first != c {
                        push(&mut m, RowOp::Swap(first, c))?;
                    }
                    break;
                }
                let p = (c..n)
                    .filter(|&i| m.get(i, c) != 0)
                    .min_by_key(|&i| m.get(i, c).unsigned_abs())
                    .unwrap();
                let pv = m.get(p, c);
                for i in c..n {
                    let v = m.get(i, c);
                    if i != p && v != 0 {
                        push(
                            &mut m,
                            RowOp::AddMultiple {
                                target: i,
                                source: p,
                                factor: -v.div_euclid(pv),
                            },
                        )?;
                    }
                }
            }
            match m.get(c, c) {
                1 => {}
                -1 => push(&mut m, RowOp::Negate(c))?,
                _ => return Err(Error::NotUnimodular),
            }
            for i in 0..n {
                let v = m.get(i, c);
                if i != c && v != 0 {
                    push(
                        &mut m,
                        RowOp::AddMultiple {
                            target: i,
                            source: c,
                            factor: -v,
                        },
                    )?;
                }
            }
        }
        debug_assert!(m.is_identity());
        Ok(ops)
    }

    /// Exact inverse of a unimodular matrix.
    pub fn inverse(&self) -> Result<IntMatrix> {
        let ops = self.reduce_to_identity()?;
        let mut inv = IntMatrix::identity(self.n);
        for op in ops {
            inv.apply_row_op(op)?;
        }
        Ok(inv)
    }

    /// Elementary matrices whose product, in order, is `self`.
    pub fn elementary_factors(&self) -> Result<Vec<RowOp>> {
        Ok(self
            .reduce_to_identity()?
            .into_iter()
            .map(RowOp::inverse)
            .collect())
    }
}

/// An elementary row operation; as a matrix it acts by left multiplication.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum RowOp {
    /// Adds `factor` times row `source` to row `target`.
    AddMultiple {
        target: usize,
        source: usize,
        factor: i64,
    },
    Swap(usize, usize),
    Negate(usize),
}

impl RowOp {
    pub fn inverse(self) -> RowOp {
        match self {
            RowOp::AddMultiple {
                target,
                source,
                factor,
            } => RowOp::AddMultiple {
                target,
                source,
                factor: -factor,
            },
            op => op,
        }
    }

    pub fn to_matrix(self, n: usize) -> IntMatrix {
        let mut m = IntMatrix::identity(n);
        m.apply_row_op(self).expect("elementary matrix entries are small");
        m
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self.data.iter().map(|v| v.to_string().len()).max().unwrap_or(1);
        for i in 0..self.n {
            let cells: Vec<String> = self.row(i).iter().map(|v| format!("{v:>width$}")).collect();
            writeln!(f, "[{}]", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[i64]]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn unipotent_product() {
        let a = m(&[&[1, 0, 1], &[0, 1, 0], &[0, 0, 1]]);
        let b = m(&[&[1, 0, 0], &[0, 1, 1], &[0, 0, 1]]);
        assert_eq!(a.mul(&b).unwrap(), m(&[&[1, 0, 1], &[0, 1, 1], &[0, 0, 1]]));
    }

    #[test]
    fn determinant_small_cases() {
        assert_eq!(IntMatrix::identity(0).det().unwrap(), 1);
        assert_eq!(m(&[&[2, 1], &[7, 4]]).det().unwrap(), 1);
        assert_eq!(m(&[&[0, 1], &[1, 0]]).det().unwrap(), -1);
        assert_eq!(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]).det().unwrap(), 0);
        assert_eq!(m(&[&[0, 0, 1], &[0, 2, 0], &[3, 0, 0]]).det().unwrap(), -6);
    }

    #[test]
    fn inverse_and_factors() {
        let a = m(&[&[2, 1, 0], &[7, 4, 3], &[0, 0, -1]]);
        let inv = a.inverse().unwrap();
        assert!(a.mul(&inv).unwrap().is_identity());
        let mut prod = IntMatrix::identity(3);
        for op in a.elementary_factors().unwrap() {
            prod = prod.mul(&op.to_matrix(3)).unwrap();
        }
        assert_eq!(prod, a);
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            m(&[&[2, 0], &[0, 1]]).inverse(),
            Err(Error::NotUnimodular)
        ));
        assert!(matches!(
            m(&[&[1, 1], &[1, 1]]).inverse(),
            Err(Error::NotUnimodular)
        ));
    }

    #[test]
    fn overflow_is_reported() {
        let a = m(&[&[i64::MAX, 0], &[0, 1]]);
        let b = m(&[&[2, 0], &[0, 1]]);
        assert!(matches!(a.mul(&b), Err(Error::Overflow)));
    }

    #[test]
    fn ragged_rows_rejected() {
        let rows = vec![vec![1, 0], vec![0]];
        assert!(matches!(
            IntMatrix::from_rows(&rows),
            Err(Error::DimensionMismatch { .. })
        ));
    }
}
