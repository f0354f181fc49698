//! Exact scalar arithmetic and integer-matrix normal forms.
//!
//! Scalars are arbitrary-precision rationals in lowest terms with positive
//! denominator (the canonical form maintained by [`num_rational`]). Integer
//! matrices come with the two lattice computations the rest of the crate
//! leans on: Smith normal form with recorded unimodular transforms, and
//! integer kernel bases in Hermite-reduced form.

use num_integer::Integer as IntegerOps;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Arbitrary-precision integer.
pub type Integer = num_bigint::BigInt;

/// Arbitrary-precision rational in lowest terms, denominator positive.
pub type Rational = num_rational::BigRational;

/// Builds the rational `numer/denom` from machine integers.
///
/// Panics if `denom` is zero; intended for literals, not untrusted input.
pub fn rat(numer: i64, denom: i64) -> Rational {
    Rational::new(Integer::from(numer), Integer::from(denom))
}

/// Builds the integer rational `n`.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(Integer::from(n))
}

/// Raises a rational to a signed integer power. `0^e` for `e < 0` is `None`.
pub fn rat_pow(base: &Rational, exp: i64) -> Option<Rational> {
    if exp == 0 {
        return Some(Rational::one());
    }
    if base.is_zero() && exp < 0 {
        return None;
    }
    let mag = exp.unsigned_abs() as u32;
    let p = Rational::new(base.numer().pow(mag), base.denom().pow(mag));
    Some(if exp < 0 { p.recip() } else { p })
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MatrixError {
    #[error("entry count {found} does not match {rows}x{cols}")]
    ShapeMismatch {
        rows: usize,
        cols: usize,
        found: usize,
    },
    #[error("dimension mismatch: {left_rows}x{left_cols} * {right_rows}x{right_cols}")]
    MulMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("determinant requires a square matrix")]
    NotSquare,
}

/// Dense integer matrix, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Integer>,
}

impl IntMatrix {
    /// Builds a matrix from row-major entries, checking the count.
    pub fn new(rows: usize, cols: usize, data: Vec<Integer>) -> Result<Self, MatrixError> {
        if data.len() != rows * cols {
            return Err(MatrixError::ShapeMismatch {
                rows,
                cols,
                found: data.len(),
            });
        }
        Ok(IntMatrix { rows, cols, data })
    }

    /// Convenience constructor from machine integers; panics on a bad count.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        IntMatrix::new(
            rows,
            cols,
            entries.iter().map(|&e| Integer::from(e)).collect(),
        )
        .expect("entry count must match rows*cols")
    }

    /// The all-zero matrix.
    pub fn zero(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![Integer::zero(); rows * cols],
        }
    }

    /// The n-by-n identity.
    pub fn identity(n: usize) -> Self {
        let mut m = IntMatrix::zero(n, n);
        for i in 0..n {
            m.set(i, i, Integer::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Integer {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, value: Integer) {
        self.data[r * self.cols + c] = value;
    }

    /// Matrix product, checking inner dimensions.
    pub fn mul(&self, rhs: &IntMatrix) -> Result<IntMatrix, MatrixError> {
        if self.cols != rhs.rows {
            return Err(MatrixError::MulMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: rhs.rows,
                right_cols: rhs.cols,
            });
        }
        let mut out = IntMatrix::zero(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let add = a * rhs.get(k, j);
                    let cur = out.get(i, j) + add;
                    out.set(i, j, cur);
                }
            }
        }
        Ok(out)
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut out = IntMatrix::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// True when every off-diagonal entry is zero.
    pub fn is_diagonal(&self) -> bool {
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j && !self.get(i, j).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> Result<Integer, MatrixError> {
        if self.rows != self.cols {
            return Err(MatrixError::NotSquare);
        }
        let n = self.rows;
        if n == 0 {
            return Ok(Integer::one());
        }
        let mut a: Vec<Vec<Integer>> = (0..n)
            .map(|i| (0..n).map(|j| self.get(i, j).clone()).collect())
            .collect();
        let mut sign = 1i32;
        let mut prev = Integer::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(k, i);
                        sign = -sign;
                    }
                    None => return Ok(Integer::zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = &num / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        let d = a[n - 1][n - 1].clone();
        Ok(if sign < 0 { -d } else { d })
    }

    fn swap_rows(&mut self, r1: usize, r2: usize) {
        if r1 == r2 {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(r1 * self.cols + j, r2 * self.cols + j);
        }
    }

    fn swap_cols(&mut self, c1: usize, c2: usize) {
        if c1 == c2 {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + c1, i * self.cols + c2);
        }
    }

    /// row[target] += q * row[source]
    fn row_add(&mut self, target: usize, source: usize, q: &Integer) {
        for j in 0..self.cols {
            let add = q * self.get(source, j);
            let cur = self.get(target, j) + add;
            self.set(target, j, cur);
        }
    }

    /// col[target] += q * col[source]
    fn col_add(&mut self, target: usize, source: usize, q: &Integer) {
        for i in 0..self.rows {
            let add = q * self.get(i, source);
            let cur = self.get(i, target) + add;
            self.set(i, target, cur);
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -self.get(r, j).clone();
            self.set(r, j, v);
        }
    }

    /// Unimodular two-column mix: (col a, col b) <- (s·a + t·b, p·a + q·b).
    /// Caller guarantees s·q - t·p = ±1.
    #[allow(clippy::too_many_arguments)]
    fn col_mix(
        &mut self,
        ca: usize,
        cb: usize,
        s: &Integer,
        t: &Integer,
        p: &Integer,
        q: &Integer,
    ) {
        for i in 0..self.rows {
            let va = self.get(i, ca).clone();
            let vb = self.get(i, cb).clone();
            self.set(i, ca, s * &va + t * &vb);
            self.set(i, cb, p * &va + q * &vb);
        }
    }
}

/// Smith normal form `U * M * V = D` with `U`, `V` unimodular and `D`
/// diagonal, nonnegative, each entry dividing the next.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

/// Locates the nonzero entry of minimal absolute value in the submatrix
/// starting at `(k, k)`, ties broken by smallest `(row, col)`.
fn find_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let v = a.get(i, j);
            if v.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some((bi, bj)) => {
                    if v.abs() < a.get(bi, bj).abs() {
                        best = Some((i, j));
                    }
                }
            }
        }
    }
    best
}

/// Diagonalises `a` from position `k` onward by elementary row/column
/// operations, mirroring every operation into `u` (rows) and `v` (columns).
fn eliminate_from(a: &mut IntMatrix, u: &mut IntMatrix, v: &mut IntMatrix, start: usize) {
    let t = a.rows().min(a.cols());
    for k in start..t {
        loop {
            let Some((pi, pj)) = find_pivot(a, k) else {
                return; // remaining submatrix is zero
            };
            a.swap_rows(k, pi);
            u.swap_rows(k, pi);
            a.swap_cols(k, pj);
            v.swap_cols(k, pj);
            let mut dirty = false;
            for i in k + 1..a.rows() {
                if a.get(i, k).is_zero() {
                    continue;
                }
                let q = -(a.get(i, k) / a.get(k, k));
                a.row_add(i, k, &q);
                u.row_add(i, k, &q);
                if !a.get(i, k).is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..a.cols() {
                if a.get(k, j).is_zero() {
                    continue;
                }
                let q = -(a.get(k, j) / a.get(k, k));
                a.col_add(j, k, &q);
                v.col_add(j, k, &q);
                if !a.get(k, j).is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                break;
            }
        }
    }
}

/// Computes the Smith normal form of `m`.
///
/// The pivot strategy (minimal absolute value, ties by position) makes the
/// output deterministic. Diagonal entries are nonnegative and form a
/// divisibility chain; zeros trail.
pub fn smith_normal_form(m: &IntMatrix) -> SmithDecomposition {
    let mut a = m.clone();
    let mut u = IntMatrix::identity(m.rows());
    let mut v = IntMatrix::identity(m.cols());
    eliminate_from(&mut a, &mut u, &mut v, 0);

    let t = a.rows().min(a.cols());
    // Establish the divisibility chain d_k | d_j for k < j via 2x2 unimodular
    // fixes on the diagonal: (a, b) -> (gcd, lcm).
    for k in 0..t {
        for j in k + 1..t {
            let dk = a.get(k, k).clone();
            let dj = a.get(j, j).clone();
            if dj.is_zero() {
                continue;
            }
            if dk.is_zero() {
                a.swap_rows(k, j);
                u.swap_rows(k, j);
                a.swap_cols(k, j);
                v.swap_cols(k, j);
                continue;
            }
            if (&dj % &dk).is_zero() {
                continue;
            }
            // Bring b next to a: row k += row j puts b at (k, j).
            a.row_add(k, j, &Integer::one());
            u.row_add(k, j, &Integer::one());
            let eg = dk.extended_gcd(&dj);
            let g = eg.gcd.clone();
            // Columns (k, j) <- (x·k + y·j, -(b/g)·k + (a/g)·j): entry (k,k)
            // becomes g, (k,j) becomes 0, and (j,k) picks up y·b.
            let mb_g = -(&dj / &g);
            let a_g = &dk / &g;
            a.col_mix(k, j, &eg.x, &eg.y, &mb_g, &a_g);
            v.col_mix(k, j, &eg.x, &eg.y, &mb_g, &a_g);
            // Clear the (j, k) leftover: row j -= (y·b/g) · row k.
            let q = -(&eg.y * &dj / &g);
            a.row_add(j, k, &q);
            u.row_add(j, k, &q);
        }
    }
    for k in 0..t {
        if a.get(k, k).is_negative() {
            a.negate_row(k);
            u.negate_row(k);
        }
    }
    SmithDecomposition { u, d: a, v }
}

/// Rank of an integer matrix (number of nonzero Smith diagonal entries).
pub fn rank(m: &IntMatrix) -> usize {
    let snf = smith_normal_form(m);
    let t = m.rows().min(m.cols());
    (0..t).filter(|&k| !snf.d.get(k, k).is_zero()).count()
}

/// Basis of the integer kernel `{v : M v = 0}`, returned as rows in
/// Hermite-reduced form: echelon shape, pivots positive, entries above each
/// pivot reduced into `[0, pivot)`. Deterministic; empty when the kernel is.
pub fn kernel_basis(m: &IntMatrix) -> Vec<Vec<Integer>> {
    let snf = smith_normal_form(m);
    let t = m.rows().min(m.cols());
    let r = (0..t).filter(|&k| !snf.d.get(k, k).is_zero()).count();
    let vectors: Vec<Vec<Integer>> = (r..m.cols())
        .map(|j| (0..m.cols()).map(|i| snf.v.get(i, j).clone()).collect())
        .collect();
    hermite_rows(vectors)
}

/// Row-style Hermite reduction of a generating set (rows may be dependent;
/// zero rows are dropped).
// Column loops read one row while writing another, which iterator form
// cannot express without split borrows.
#[allow(clippy::needless_range_loop)]
fn hermite_rows(mut rows: Vec<Vec<Integer>>) -> Vec<Vec<Integer>> {
    if rows.is_empty() {
        return rows;
    }
    let ncols = rows[0].len();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row >= rows.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for (i, row) in rows.iter().enumerate().skip(pivot_row) {
                if row[col].is_zero() {
                    continue;
                }
                match best {
                    None => best = Some(i),
                    Some(b) => {
                        if row[col].abs() < rows[b][col].abs() {
                            best = Some(i);
                        }
                    }
                }
            }
            let Some(b) = best else {
                break;
            };
            rows.swap(pivot_row, b);
            let mut any_left = false;
            for i in pivot_row + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = &rows[i][col] / &rows[pivot_row][col];
                for c in 0..ncols {
                    let sub = &q * &rows[pivot_row][c];
                    rows[i][c] = &rows[i][c] - sub;
                }
                if !rows[i][col].is_zero() {
                    any_left = true;
                }
            }
            if !any_left {
                break;
            }
        }
        if rows[pivot_row][col].is_zero() {
            continue;
        }
        if rows[pivot_row][col].is_negative() {
            for c in 0..ncols {
                rows[pivot_row][c] = -rows[pivot_row][c].clone();
            }
        }
        let pivot = rows[pivot_row][col].clone();
        for i in 0..pivot_row {
            if rows[i][col].is_zero() {
                continue;
            }
            let q = rows[i][col].div_floor(&pivot);
            for c in 0..ncols {
                let sub = &q * &rows[pivot_row][c];
                rows[i][c] = &rows[i][c] - sub;
            }
        }
        pivot_row += 1;
    }
    rows.truncate(pivot_row);
    rows
}

/// Reduced row echelon form over the rationals, in place. Returns the pivot
/// column for each pivot row.
// Column loops read one row while writing another, which iterator form
// cannot express without split borrows.
#[allow(clippy::needless_range_loop)]
pub(crate) fn rational_rref(rows: &mut Vec<Vec<Rational>>) -> Vec<usize> {
    let mut pivots = Vec::new();
    if rows.is_empty() {
        return pivots;
    }
    let ncols = rows[0].len();
    let mut pr = 0;
    for col in 0..ncols {
        if pr >= rows.len() {
            break;
        }
        let Some(sel) = (pr..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(pr, sel);
        let inv = rows[pr][col].clone().recip();
        for c in col..ncols {
            let v = &rows[pr][c] * &inv;
            rows[pr][c] = v;
        }
        for i in 0..rows.len() {
            if i == pr || rows[i][col].is_zero() {
                continue;
            }
            let f = rows[i][col].clone();
            for c in col..ncols {
                let sub = &f * &rows[pr][c];
                rows[i][c] = &rows[i][c] - sub;
            }
        }
        pivots.push(col);
        pr += 1;
    }
    rows.truncate(pr);
    pivots
}

/// Nullspace basis of a rational matrix, one vector per free column, in
/// ascending free-column order (deterministic).
pub(crate) fn rational_nullspace(mut rows: Vec<Vec<Rational>>, ncols: usize) -> Vec<Vec<Rational>> {
    let pivots = rational_rref(&mut rows);
    let pivot_set: std::collections::BTreeSet<usize> = pivots.iter().copied().collect();
    let mut basis = Vec::new();
    for free in 0..ncols {
        if pivot_set.contains(&free) {
            continue;
        }
        let mut vec = vec![Rational::zero(); ncols];
        vec[free] = Rational::one();
        for (pr, &pc) in pivots.iter().enumerate() {
            // row: x_pc + sum_{c > pc} a_c x_c = 0  =>  x_pc = -a_free
            vec[pc] = -rows[pr][free].clone();
        }
        basis.push(vec);
    }
    basis
}
