//! Dense vectors and matrices over an exact scalar field, with the
//! elimination routines every certificate rests on: Bareiss fraction-free
//! rank, reduced-row-echelon nullspace, span tests and inversion.
//!
//! Two deliberately independent elimination routes exist: [`Matrix::rank`]
//! uses fraction-free (Bareiss) pivoting, while [`Matrix::nullspace`] uses
//! plain Gauss–Jordan division. The property tests cross-check them via
//! `rank + nullity = cols`.

use super::scalar::ExactScalar;

/// Column vector with exact entries.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Vector<T> {
    entries: Vec<T>,
}

impl<T: ExactScalar> Vector<T> {
    pub fn new(entries: Vec<T>) -> Self {
        Vector { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Vector { entries: vec![T::zero(); dim] }
    }

    /// Standard basis vector `e_k` (0-based) in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[k] = T::one();
        v
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[T] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &T {
        &self.entries[i]
    }

    pub fn set(&mut self, i: usize, value: T) {
        self.entries[i] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Indices of nonzero entries (0-based).
    pub fn support(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| !e.is_zero())
            .map(|(i, _)| i)
            .collect()
    }

    /// Hermitian inner product `⟨u, v⟩ = Σ conj(u_i)·v_i` (plain dot
    /// product over ℚ).
    pub fn inner(&self, other: &Self) -> T {
        assert_eq!(self.dim(), other.dim(), "inner product dimension mismatch");
        let mut acc = T::zero();
        for (a, b) in self.entries.iter().zip(&other.entries) {
            acc = acc + a.conj() * b.clone();
        }
        acc
    }

    pub fn scale(&self, c: &T) -> Self {
        Vector::new(self.entries.iter().map(|e| e.clone() * c.clone()).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!(self.dim(), other.dim());
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        )
    }

    /// Scales so that the first nonzero entry becomes 1. Zero vectors are
    /// returned unchanged. Canonical form used to deduplicate hyperplane
    /// normals.
    pub fn normalized(&self) -> Self {
        match self.entries.iter().find(|e| !e.is_zero()) {
            None => self.clone(),
            Some(first) => {
                let inv = T::one() / first.clone();
                self.scale(&inv)
            }
        }
    }

    /// Outer product `v·v*`, the rank-one operator of the measurement
    /// associated with this vector.
    pub fn outer_self(&self) -> Matrix<T> {
        let n = self.dim();
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, self.entries[i].clone() * self.entries[j].conj());
            }
        }
        m
    }

    pub fn iter(&self) -> std::slice::Iter<'_, T> {
        self.entries.iter()
    }
}

/// Dense row-major matrix with exact entries.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: ExactScalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![T::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, T::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_row_vectors(rows: &[Vector<T>]) -> Self {
        Self::from_rows(rows.iter().map(|v| v.entries.clone()).collect())
    }

    pub fn from_col_vectors(cols: &[Vector<T>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vector::dim);
        assert!(cols.iter().all(|v| v.dim() == r), "ragged columns");
        let mut m = Self::zeros(r, c);
        for (j, v) in cols.iter().enumerate() {
            for i in 0..r {
                m.set(i, j, v.get(i).clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: T) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> Vector<T> {
        Vector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn col(&self, j: usize) -> Vector<T> {
        Vector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn conj_transpose(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.set(j, i, self.get(i, j).conj());
            }
        }
        m
    }

    pub fn is_hermitian(&self) -> bool {
        self.rows == self.cols && *self == self.conj_transpose()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() + b.clone())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.clone() - b.clone())
            .collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, c: &T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|e| e.clone() * c.clone()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "matrix product dimension mismatch");
        let mut m = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                let mut acc = T::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn mul_vector(&self, v: &Vector<T>) -> Vector<T> {
        assert_eq!(self.cols, v.dim(), "matrix-vector dimension mismatch");
        Vector::new(
            (0..self.rows)
                .map(|i| {
                    let mut acc = T::zero();
                    for k in 0..self.cols {
                        acc = acc + self.get(i, k).clone() * v.get(k).clone();
                    }
                    acc
                })
                .collect(),
        )
    }

    pub fn trace(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut acc = T::zero();
        for i in 0..self.rows {
            acc = acc + self.get(i, i).clone();
        }
        acc
    }

    /// Rank over the field of the entries, by fraction-free (Bareiss)
    /// elimination with deterministic pivoting: the first nonzero entry in
    /// column order.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut prev_pivot = T::one();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let pivot_row = match (r..rows).find(|&i| !m.get(i, c).is_zero()) {
                Some(i) => i,
                None => continue,
            };
            if pivot_row != r {
                for j in 0..cols {
                    m.data.swap(pivot_row * cols + j, r * cols + j);
                }
            }
            let pivot = m.get(r, c).clone();
            for i in (r + 1)..rows {
                let lead = m.get(i, c).clone();
                for j in 0..cols {
                    // Bareiss step: (m[i][j]·pivot − m[i][c]·m[r][j]) / prev_pivot
                    // is exact division in any field (and over any integral
                    // domain, which keeps intermediate entries small).
                    let val = (m.get(i, j).clone() * pivot.clone()
                        - lead.clone() * m.get(r, j).clone())
                        / prev_pivot.clone();
                    m.set(i, j, val);
                }
            }
            prev_pivot = pivot;
            r += 1;
        }
        r
    }

    /// In-place reduction to reduced row echelon form by Gauss–Jordan
    /// elimination (first-nonzero pivoting), returning the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let (rows, cols) = (self.rows, self.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let pivot_row = match (r..rows).find(|&i| !self.get(i, c).is_zero()) {
                Some(i) => i,
                None => continue,
            };
            if pivot_row != r {
                for j in 0..cols {
                    self.data.swap(pivot_row * cols + j, r * cols + j);
                }
            }
            let inv = T::one() / self.get(r, c).clone();
            for j in 0..cols {
                let v = self.get(r, j).clone() * inv.clone();
                self.set(r, j, v);
            }
            for i in 0..rows {
                if i == r || self.get(i, c).is_zero() {
                    continue;
                }
                let factor = self.get(i, c).clone();
                for j in 0..cols {
                    let v = self.get(i, j).clone() - factor.clone() * self.get(r, j).clone();
                    self.set(i, j, v);
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    /// Basis of `{x : Mx = 0}` in the echelon parametrization: one vector
    /// per free column, with a 1 in the free coordinate. Deterministic for
    /// a given matrix.
    pub fn nullspace(&self) -> Vec<Vector<T>> {
        let mut m = self.clone();
        let pivots = m.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = Vector::zeros(self.cols);
                x.set(f, T::one());
                for (r, &p) in pivots.iter().enumerate() {
                    x.set(p, -m.get(r, f).clone());
                }
                x
            })
            .collect()
    }

    /// Inverse by Gauss–Jordan on `[M | I]`; `None` when singular.
    pub fn inverse(&self) -> Option<Self> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                aug.set(i, j, self.get(i, j).clone());
            }
            aug.set(i, n + i, T::one());
        }
        let pivots = aug.rref();
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        let mut inv = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                inv.set(i, j, aug.get(i, n + j).clone());
            }
        }
        Some(inv)
    }
}

/// True iff the vectors span the full space of dimension `n`. Uses an
/// incremental echelon accumulator with early exit at rank `n`.
pub fn spans<T: ExactScalar>(vectors: &[Vector<T>], n: usize) -> bool {
    let mut ech = Echelon::new(n);
    for v in vectors {
        assert_eq!(v.dim(), n, "spans: vector dimension mismatch");
        if ech.add(v) && ech.rank() == n {
            return true;
        }
    }
    ech.rank() == n
}

/// Rank of a set of vectors, early-exiting at `cap`.
pub fn rank_of<T: ExactScalar>(vectors: &[Vector<T>], n: usize, cap: usize) -> usize {
    let mut ech = Echelon::new(n);
    for v in vectors {
        ech.add(v);
        if ech.rank() >= cap {
            break;
        }
    }
    ech.rank()
}

/// Incremental row-echelon accumulator supporting push/pop, the workhorse
/// behind span tests and the subset search in the complement-property
/// checker. Rows are kept forward-reduced only (adding a row never rewrites
/// earlier rows), so truncation undoes an `add`.
#[derive(Clone, Debug)]
pub struct Echelon<T> {
    dim: usize,
    // (pivot column, row vector with pivot entry normalized to 1), in
    // insertion order.
    rows: Vec<(usize, Vector<T>)>,
}

impl<T: ExactScalar> Echelon<T> {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Reduces `v` against the accumulated rows; returns the remainder
    /// (zero iff `v` is in the current span).
    pub fn reduce(&self, v: &Vector<T>) -> Vector<T> {
        let mut w = v.clone();
        for (p, row) in &self.rows {
            let c = w.get(*p).clone();
            if !c.is_zero() {
                w = w.sub(&row.scale(&c));
            }
        }
        w
    }

    pub fn contains(&self, v: &Vector<T>) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v` to the span. Returns true iff the rank increased.
    pub fn add(&mut self, v: &Vector<T>) -> bool {
        assert_eq!(v.dim(), self.dim, "echelon: vector dimension mismatch");
        let w = self.reduce(v);
        match w.entries().iter().position(|e| !e.is_zero()) {
            None => false,
            Some(p) => {
                let inv = T::one() / w.get(p).clone();
                self.rows.push((p, w.scale(&inv)));
                true
            }
        }
    }

    /// Undoes the most recent successful `add`.
    pub fn pop(&mut self) {
        self.rows.pop();
    }

    /// A basis of the solution set of `⟨row, x⟩ = 0` for all accumulated
    /// rows, i.e. the orthogonal complement of the span over ℚ (for the
    /// complex field this is the nullspace of the row matrix, not the
    /// Hermitian complement).
    pub fn complement_basis(&self) -> Vec<Vector<T>> {
        let mut pivots: Vec<usize> = self.rows.iter().map(|(p, _)| *p).collect();
        pivots.sort_unstable();
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        // Rows sorted by pivot form an upper-triangular system; solve by
        // back-substitution for each free coordinate.
        let mut by_pivot: Vec<&(usize, Vector<T>)> = self.rows.iter().collect();
        by_pivot.sort_by_key(|(p, _)| *p);
        free.iter()
            .map(|&f| {
                let mut x = Vector::zeros(self.dim);
                x.set(f, T::one());
                for (p, row) in by_pivot.iter().rev() {
                    // row·x = x[p] + Σ_{c>p} row[c]·x[c] = 0
                    let mut acc = T::zero();
                    for c in (p + 1)..self.dim {
                        let rc = row.get(c);
                        if !rc.is_zero() {
                            acc = acc + rc.clone() * x.get(c).clone();
                        }
                    }
                    x.set(*p, -acc);
                }
                x
            })
            .collect()
    }
}
