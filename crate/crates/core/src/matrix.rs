//! Exact dense rational linear algebra.
//!
//! Rank, kernel, inverse and solving run through one fraction-free engine:
//! rows are cleared of denominators and reduced with Bareiss two-step
//! elimination over the integers, which keeps intermediate entries the size
//! of minors instead of letting gcd-free fractions pile up. Signatures of
//! symmetric and hermitian forms are computed by exact congruence.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{rat_int, Rat};

/// Row-major rectangular matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RatMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl RatMatrix {
    pub fn zero(rows: usize, cols: usize) -> Self {
        RatMatrix { rows, cols, data: vec![Rat::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = RatMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Rat::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RatMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Rat) -> Self {
        let mut m = RatMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> RatMatrix {
        RatMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn is_symmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in (i + 1)..self.cols {
                if self[(i, j)] != self[(j, i)] {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_antisymmetric(&self) -> bool {
        if !self.is_square() {
            return false;
        }
        for i in 0..self.rows {
            for j in i..self.cols {
                if self[(i, j)] != -self[(j, i)].clone() {
                    return false;
                }
            }
        }
        true
    }

    pub fn add(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] + &other[(i, j)])
    }

    pub fn sub(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        RatMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] - &other[(i, j)])
    }

    pub fn scale(&self, c: &Rat) -> RatMatrix {
        RatMatrix::from_fn(self.rows, self.cols, |i, j| &self[(i, j)] * c)
    }

    pub fn mul(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = RatMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] += prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rat]) -> Vec<Rat> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = Rat::zero();
                for j in 0..self.cols {
                    if !self[(i, j)].is_zero() && !v[j].is_zero() {
                        acc += &self[(i, j)] * &v[j];
                    }
                }
                acc
            })
            .collect()
    }

    pub fn pow(&self, mut e: u32) -> RatMatrix {
        assert!(self.is_square());
        let mut base = self.clone();
        let mut acc = RatMatrix::identity(self.rows);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Stack columns of `self` and `other` side by side.
    pub fn hstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.rows, other.rows);
        RatMatrix::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                other[(i, j - self.cols)].clone()
            }
        })
    }

    /// Stack rows of `self` above rows of `other`.
    pub fn vstack(&self, other: &RatMatrix) -> RatMatrix {
        assert_eq!(self.cols, other.cols);
        RatMatrix::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows {
                self[(i, j)].clone()
            } else {
                other[(i - self.rows, j)].clone()
            }
        })
    }

    pub fn from_columns(cols: &[Vec<Rat>]) -> RatMatrix {
        let c = cols.len();
        let r = cols.first().map_or(0, |v| v.len());
        RatMatrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn rank(&self) -> usize {
        self.integer_echelon().pivot_cols.len()
    }

    /// Basis of the right kernel, as column vectors.
    pub fn kernel_basis(&self) -> Vec<Vec<Rat>> {
        let ech = self.integer_echelon();
        let pivots = &ech.pivot_cols;
        let pivot_of_col: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = Some(r);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_of_col[free].is_some() {
                continue;
            }
            let mut x = vec![Rat::zero(); self.cols];
            x[free] = Rat::one();
            // Back-substitute pivot rows bottom-up.
            for r in (0..pivots.len()).rev() {
                let pc = pivots[r];
                let mut acc = Rat::zero();
                for j in (pc + 1)..self.cols {
                    if !ech.mat[r][j].is_zero() && !x[j].is_zero() {
                        acc += Rat::from_integer(ech.mat[r][j].clone()) * &x[j];
                    }
                }
                if !acc.is_zero() {
                    x[pc] = -acc / Rat::from_integer(ech.mat[r][pc].clone());
                }
            }
            basis.push(x);
        }
        basis
    }

    /// Exact inverse of a square nonsingular matrix.
    pub fn inverse(&self) -> Result<RatMatrix> {
        if !self.is_square() {
            return Err(Error::Singular);
        }
        let n = self.rows;
        let aug = self.hstack(&RatMatrix::identity(n));
        let ech = aug.integer_echelon();
        if ech.pivot_cols.len() < n || ech.pivot_cols.iter().take(n).enumerate().any(|(i, &c)| i != c) {
            return Err(Error::Singular);
        }
        // Back-substitute each of the n right-hand-side columns.
        let mut inv = RatMatrix::zero(n, n);
        for rhs in 0..n {
            let col = n + rhs;
            let mut x = vec![Rat::zero(); n];
            for r in (0..n).rev() {
                let mut acc = Rat::from_integer(ech.mat[r][col].clone());
                for j in (r + 1)..n {
                    if !ech.mat[r][j].is_zero() && !x[j].is_zero() {
                        acc -= Rat::from_integer(ech.mat[r][j].clone()) * &x[j];
                    }
                }
                x[r] = acc / Rat::from_integer(ech.mat[r][r].clone());
            }
            for i in 0..n {
                inv[(i, rhs)] = std::mem::take(&mut x[i]);
            }
        }
        Ok(inv)
    }

    /// Solve `self * x = b` when the solution is unique; `None` when the
    /// system is inconsistent or underdetermined.
    pub fn solve_unique(&self, b: &[Rat]) -> Option<Vec<Rat>> {
        assert_eq!(b.len(), self.rows);
        let bmat = RatMatrix::from_columns(&[b.to_vec()]);
        let aug = self.hstack(&bmat);
        let ech = aug.integer_echelon();
        let pivots = &ech.pivot_cols;
        if pivots.iter().any(|&c| c == self.cols) {
            return None; // inconsistent
        }
        if pivots.len() < self.cols {
            return None; // underdetermined
        }
        let mut x = vec![Rat::zero(); self.cols];
        for r in (0..pivots.len()).rev() {
            let pc = pivots[r];
            let mut acc = Rat::from_integer(ech.mat[r][self.cols].clone());
            for j in (pc + 1)..self.cols {
                if !ech.mat[r][j].is_zero() && !x[j].is_zero() {
                    acc -= Rat::from_integer(ech.mat[r][j].clone()) * &x[j];
                }
            }
            x[pc] = acc / Rat::from_integer(ech.mat[r][pc].clone());
        }
        Some(x)
    }

    /// Fraction-free row echelon form over the integers after clearing row
    /// denominators. Row scaling preserves rank, kernel and solution sets.
    fn integer_echelon(&self) -> IntEchelon {
        let mut m: Vec<Vec<BigInt>> = (0..self.rows)
            .map(|i| {
                let mut lcm = BigInt::one();
                for j in 0..self.cols {
                    lcm = lcm.lcm(self[(i, j)].denom());
                }
                (0..self.cols)
                    .map(|j| {
                        let r = &self[(i, j)];
                        r.numer() * (&lcm / r.denom())
                    })
                    .collect()
            })
            .collect();
        let mut pivot_cols = Vec::new();
        let mut prev = BigInt::one();
        let mut r = 0;
        for c in 0..self.cols {
            // Choose the nonzero pivot with smallest magnitude for stability
            // of entry sizes; ties broken by row index for determinism.
            let mut pivot_row: Option<usize> = None;
            for i in r..self.rows {
                if !m[i][c].is_zero() {
                    match pivot_row {
                        None => pivot_row = Some(i),
                        Some(p) => {
                            if m[i][c].magnitude() < m[p][c].magnitude() {
                                pivot_row = Some(i);
                            }
                        }
                    }
                }
            }
            let Some(p) = pivot_row else { continue };
            m.swap(r, p);
            for i in (r + 1)..self.rows {
                for j in (c + 1)..self.cols {
                    let t = &m[i][j] * &m[r][c] - &m[i][c] * &m[r][j];
                    debug_assert!((&t % &prev).is_zero());
                    m[i][j] = t / &prev;
                }
                m[i][c] = BigInt::zero();
            }
            prev = m[r][c].clone();
            pivot_cols.push(c);
            r += 1;
            if r == self.rows {
                break;
            }
        }
        IntEchelon { mat: m, pivot_cols }
    }
}

struct IntEchelon {
    mat: Vec<Vec<BigInt>>,
    pivot_cols: Vec<usize>,
}

impl std::ops::Index<(usize, usize)> for RatMatrix {
    type Output = Rat;
    fn index(&self, (i, j): (usize, usize)) -> &Rat {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for RatMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rat {
        &mut self.data[i * self.cols + j]
    }
}

/// Multiset of Jordan block sizes of a nilpotent operator, descending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JordanPartition(pub Vec<usize>);

impl JordanPartition {
    pub fn dim(&self) -> usize {
        self.0.iter().sum()
    }

    /// Number of blocks of size exactly `s`.
    pub fn blocks_of_size(&self, s: usize) -> usize {
        self.0.iter().filter(|&&b| b == s).count()
    }
}

/// Jordan partition of a nilpotent matrix from its rank sequence:
/// the number of blocks of size >= k is rank(N^{k-1}) - rank(N^k).
pub fn jordan_partition_nilpotent(n: &RatMatrix) -> Result<JordanPartition> {
    assert!(n.is_square());
    let dim = n.nrows();
    if dim == 0 {
        return Ok(JordanPartition(Vec::new()));
    }
    let mut ranks = vec![dim];
    let mut power = n.clone();
    loop {
        let r = power.rank();
        let prev = *ranks.last().unwrap();
        if r == prev && r > 0 {
            // Rank stabilized above zero: the operator is invertible on a
            // nonzero stable image, hence not nilpotent.
            return Err(Error::NotNilpotent);
        }
        ranks.push(r);
        if r == 0 {
            break;
        }
        if ranks.len() > dim + 1 {
            return Err(Error::NotNilpotent);
        }
        power = power.mul(n);
    }
    let ge = |k: usize| -> usize {
        if k < ranks.len() {
            ranks[k - 1] - ranks[k]
        } else {
            0
        }
    };
    let mut sizes = Vec::new();
    let max_size = ranks.len() - 1;
    for s in (1..=max_size).rev() {
        let count = ge(s) - if s + 1 <= max_size { ge(s + 1) } else { 0 };
        for _ in 0..count {
            sizes.push(s);
        }
    }
    debug_assert_eq!(sizes.iter().sum::<usize>(), dim);
    Ok(JordanPartition(sizes))
}

/// Inertia (n_plus, n_minus, n_zero) of a symmetric rational matrix by
/// congruence diagonalization. When no diagonal pivot is available, a
/// row+column addition turns a hyperbolic pair into usable pivots, which
/// contributes one +1 and one -1.
pub fn symmetric_signature(s: &RatMatrix) -> Result<(usize, usize, usize)> {
    if !s.is_symmetric() {
        return Err(Error::NotSymmetric);
    }
    let n = s.nrows();
    let mut a = s.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let mut plus = 0;
    let mut minus = 0;
    while !active.is_empty() {
        let diag = active.iter().position(|&k| !a[(k, k)].is_zero());
        let k = match diag {
            Some(idx) => active[idx],
            None => {
                // Find an off-diagonal nonzero among active entries.
                let mut found = None;
                'outer: for (ii, &i) in active.iter().enumerate() {
                    for &j in &active[(ii + 1)..] {
                        if !a[(i, j)].is_zero() {
                            found = Some((i, j));
                            break 'outer;
                        }
                    }
                }
                let Some((i, j)) = found else {
                    return Ok((plus, minus, n - plus - minus));
                };
                // Congruence e_i <- e_i + e_j creates a diagonal pivot.
                for col in 0..n {
                    let t = a[(j, col)].clone();
                    a[(i, col)] += t;
                }
                for row in 0..n {
                    let t = a[(row, j)].clone();
                    a[(row, i)] += t;
                }
                i
            }
        };
        let d = a[(k, k)].clone();
        if d.is_positive() {
            plus += 1;
        } else {
            minus += 1;
        }
        active.retain(|&x| x != k);
        for &i in &active {
            if a[(i, k)].is_zero() {
                continue;
            }
            let c = &a[(i, k)] / &d;
            for col in 0..n {
                let t = &c * &a[(k, col)];
                a[(i, col)] -= t;
            }
            for row in 0..n {
                let t = &c * &a[(row, k)];
                a[(row, i)] -= t;
            }
        }
    }
    Ok((plus, minus, n - plus - minus))
}

/// Inertia of the hermitian form H = H_re + i*H_im given by a symmetric real
/// part and antisymmetric imaginary part: half the inertia of the real
/// symmetric realification [[H_re, -H_im], [H_im, H_re]].
pub fn hermitian_signature(h_re: &RatMatrix, h_im: &RatMatrix) -> Result<(usize, usize, usize)> {
    let n = h_re.nrows();
    if !h_re.is_symmetric() || !h_im.is_antisymmetric() || h_im.nrows() != n {
        return Err(Error::NotHermitian);
    }
    let big = RatMatrix::from_fn(2 * n, 2 * n, |i, j| {
        let (bi, ii) = (i / n, i % n);
        let (bj, jj) = (j / n, j % n);
        match (bi, bj) {
            (0, 0) | (1, 1) => h_re[(ii, jj)].clone(),
            (0, 1) => -h_im[(ii, jj)].clone(),
            (1, 0) => h_im[(ii, jj)].clone(),
            _ => unreachable!(),
        }
    });
    let (p, m, z) = symmetric_signature(&big)?;
    debug_assert!(p % 2 == 0 && m % 2 == 0 && z % 2 == 0);
    Ok((p / 2, m / 2, z / 2))
}

/// Signature (n_plus - n_minus) shorthand used by reports.
pub fn signature_value(inertia: (usize, usize, usize)) -> i64 {
    inertia.0 as i64 - inertia.1 as i64
}

/// Build a nilpotent matrix in Jordan form for the given partition,
/// blocks in the listed order. Test helper and reconstruction oracle.
pub fn nilpotent_from_partition(partition: &[usize]) -> RatMatrix {
    let dim: usize = partition.iter().sum();
    let mut m = RatMatrix::zero(dim, dim);
    let mut offset = 0;
    for &s in partition {
        for k in 1..s {
            m[(offset + k, offset + k - 1)] = rat_int(1);
        }
        offset += s;
    }
    m
}
