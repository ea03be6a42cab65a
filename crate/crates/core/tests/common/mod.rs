//! Brute-force reference implementations used to check the library. Nothing
//! here calls into the algorithms under test: sets are plain bitmasks,
//! words are lists of `(vertex, ±1)` letters and matrices are `i128` rows.

#![allow(dead_code)]

use pcstab::{Graph, VertexSet, Word};

pub type Letters = Vec<(usize, i64)>;
pub type Mat = Vec<Vec<i128>>;

pub struct Oracle {
    pub n: usize,
    pub adj: Vec<u64>,
    /// `x^⊥`, the closed neighbourhood of `x`.
    pub perp: Vec<u64>,
    /// `cl(x)`.
    pub cl: Vec<u64>,
}

impl Oracle {
    pub fn new(g: &Graph) -> Self {
        let n = g.len();
        let mut adj = vec![0u64; n];
        for (x, y) in g.edges() {
            adj[x] |= 1 << y;
            adj[y] |= 1 << x;
        }
        let mut o = Oracle {
            n,
            adj,
            perp: Vec::new(),
            cl: Vec::new(),
        };
        o.perp = (0..n).map(|x| o.orth(1 << x)).collect();
        o.cl = (0..n).map(|x| o.closure(1 << x)).collect();
        o
    }

    pub fn full(&self) -> u64 {
        if self.n == 64 {
            u64::MAX
        } else {
            (1u64 << self.n) - 1
        }
    }

    /// Vertices equal or adjacent to every member of `y`.
    pub fn orth(&self, y: u64) -> u64 {
        (0..self.n)
            .filter(|&v| (0..self.n).all(|u| y >> u & 1 == 0 || u == v || self.adj[u] >> v & 1 == 1))
            .fold(0, |acc, v| acc | 1 << v)
    }

    pub fn closure(&self, y: u64) -> u64 {
        self.orth(self.orth(y))
    }

    pub fn closed_sets(&self) -> Vec<u64> {
        (0..=self.full()).filter(|&y| self.closure(y) == y).collect()
    }

    pub fn commute(&self, x: usize, y: usize) -> bool {
        x == y || self.adj[x] >> y & 1 == 1
    }

    /// `x <_L y`: `cl(x) ⊊ cl(y)`.
    pub fn l_less(&self, x: usize, y: usize) -> bool {
        let (a, b) = (self.cl[x], self.cl[y]);
        a & b == a && a != b
    }

    pub fn same_class(&self, x: usize, y: usize) -> bool {
        self.perp[x] == self.perp[y]
    }

    pub fn class(&self, x: usize) -> u64 {
        (0..self.n)
            .filter(|&y| self.same_class(x, y))
            .fold(0, |acc, v| acc | 1 << v)
    }

    /// Whether the matrix entry at row `u`, column `v` may be nonzero.
    pub fn allowed(&self, u: usize, v: usize) -> bool {
        self.same_class(u, v) || self.l_less(v, u)
    }

    /// Membership in `S_Y` for a matrix whose rows and columns are indexed by
    /// `verts`, a listing of `Y`.
    pub fn is_member(&self, verts: &[usize], m: &Mat) -> bool {
        let k = verts.len();
        for i in 0..k {
            for j in 0..k {
                if m[i][j] != 0 && !self.allowed(verts[i], verts[j]) {
                    return false;
                }
            }
        }
        let mut done = vec![false; k];
        for i in 0..k {
            if done[i] {
                continue;
            }
            let idx: Vec<usize> = (0..k).filter(|&j| self.same_class(verts[i], verts[j])).collect();
            for &j in &idx {
                done[j] = true;
            }
            let block: Mat = idx
                .iter()
                .map(|&r| idx.iter().map(|&c| m[r][c]).collect())
                .collect();
            if det(&block).abs() != 1 {
                return false;
            }
        }
        true
    }

    /// Appends letters one at a time; a new letter `x^e` cancels against the
    /// last `x^-e` if every letter after it commutes with `x`.
    pub fn reduce(&self, w: &[(usize, i64)]) -> Letters {
        let mut out: Letters = Vec::with_capacity(w.len());
        for &(x, e) in w {
            let mut hit = None;
            for k in (0..out.len()).rev() {
                let (y, f) = out[k];
                if y == x && f == -e {
                    hit = Some(k);
                    break;
                }
                if !self.commute(x, y) {
                    break;
                }
            }
            match hit {
                Some(k) => {
                    out.remove(k);
                }
                None => out.push((x, e)),
            }
        }
        out
    }

    pub fn equal(&self, u: &[(usize, i64)], w: &[(usize, i64)]) -> bool {
        let mut p = u.to_vec();
        p.extend(inverse(w));
        self.reduce(&p).is_empty()
    }

    pub fn in_parabolic(&self, w: &[(usize, i64)], y: u64) -> bool {
        self.reduce(w).iter().all(|&(v, _)| y >> v & 1 == 1)
    }

    /// Removes a letter that can be shuffled to the front together with an
    /// inverse letter that can be shuffled to the back, until none remain.
    pub fn cyclic_core(&self, w: &[(usize, i64)]) -> Letters {
        let mut w = self.reduce(w);
        'outer: loop {
            for i in 0..w.len() {
                let (x, e) = w[i];
                if !w[..i].iter().all(|&(y, _)| self.commute(x, y)) {
                    continue;
                }
                for j in (i + 1..w.len()).rev() {
                    if w[j] == (x, -e) && w[j + 1..].iter().all(|&(y, _)| self.commute(x, y)) {
                        w.remove(j);
                        w.remove(i);
                        continue 'outer;
                    }
                }
            }
            return w;
        }
    }

    pub fn is_conjugate_of_generator(&self, w: &[(usize, i64)], v: usize) -> bool {
        self.cyclic_core(w) == vec![(v, 1)]
    }
}

pub fn letters(w: &Word) -> Letters {
    w.letters().iter().map(|l| (l.vertex(), l.exponent())).collect()
}

pub fn inverse(w: &[(usize, i64)]) -> Letters {
    w.iter().rev().map(|&(v, e)| (v, -e)).collect()
}

/// The image of `w` under the substitution `v ↦ images[v]`.
pub fn substitute(images: &[Letters], w: &[(usize, i64)]) -> Letters {
    let mut out = Vec::new();
    for &(v, e) in w {
        if e > 0 {
            out.extend_from_slice(&images[v]);
        } else {
            out.extend(inverse(&images[v]));
        }
    }
    out
}

pub fn exponent_sums(n: usize, w: &[(usize, i64)]) -> Vec<i128> {
    let mut s = vec![0i128; n];
    for &(v, e) in w {
        s[v] += e as i128;
    }
    s
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect())
        .collect()
}

pub fn identity(n: usize) -> Mat {
    (0..n)
        .map(|i| (0..n).map(|j| (i == j) as i128).collect())
        .collect()
}

/// Determinant by expansion along rows, memoised over sets of used columns.
pub fn det(m: &Mat) -> i128 {
    let n = m.len();
    let mut dp = vec![0i128; 1 << n];
    dp[0] = 1;
    for mask in 0usize..1 << n {
        if dp[mask] == 0 {
            continue;
        }
        let row = mask.count_ones() as usize;
        if row == n {
            continue;
        }
        for c in 0..n {
            if mask >> c & 1 == 0 {
                // sign of placing column c after the columns already used
                let later = (mask >> c).count_ones();
                let sign = if later % 2 == 0 { 1 } else { -1 };
                dp[mask | 1 << c] += sign * m[row][c] * dp[mask];
            }
        }
    }
    dp[(1 << n) - 1]
}

pub fn from_lib(m: &pcstab::IntMatrix) -> Mat {
    let n = m.dim();
    (0..n)
        .map(|i| (0..n).map(|j| m.get(i, j) as i128).collect())
        .collect()
}

pub fn set(bits: u64) -> VertexSet {
    VertexSet::from_bits(bits)
}

pub fn bits_of(v: impl IntoIterator<Item = usize>) -> u64 {
    v.into_iter().fold(0, |acc, x| acc | 1 << x)
}
