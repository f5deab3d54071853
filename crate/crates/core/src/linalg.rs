//! Dense exact matrices and the elimination routines everything else is built on.
//!
//! Elimination runs through [`Echelon`], an incremental reduced row echelon form with
//! sparse pivot rows. Because the reduced row echelon form of a row space is unique, the
//! kernel and solution bases it produces depend only on the row space and the column
//! order, never on the order rows were inserted in.

use std::fmt;
use std::ops::Mul;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::field::{clear_denominators, FieldSpec, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = field.one();
        }
        m
    }

    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let nrows = rows.len();
        let mut data = Vec::with_capacity(nrows * cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for s in row {
                if !field.contains(&s) {
                    return Err(Error::FieldMismatch(format!("entry {s} is not in {field}")));
                }
                data.push(s);
            }
        }
        Ok(Matrix { field, rows: nrows, cols, data })
    }

    /// Builds from a row-major buffer. Panics if the length is wrong.
    pub fn from_vec(field: FieldSpec, rows: usize, cols: usize, data: Vec<Scalar>) -> Self {
        assert_eq!(data.len(), rows * cols, "buffer length");
        Matrix { field, rows, cols, data }
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .flat_map(|r| {
                assert_eq!(r.len(), cols, "ragged rows");
                r.iter().map(|&v| field.from_i64(v))
            })
            .collect();
        Matrix { field, rows: rows.len(), cols, data }
    }

    pub fn column_vector(field: FieldSpec, entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        Matrix::from_vec(field, n, 1, entries)
    }

    pub fn row_vector(field: FieldSpec, entries: Vec<Scalar>) -> Self {
        let n = entries.len();
        Matrix::from_vec(field, 1, n, entries)
    }

    /// Matrix whose columns are the given vectors (each of length `rows`).
    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Matrix::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows, "column length");
            for (i, s) in c.iter().enumerate() {
                m.data[i * columns.len() + j] = s.clone();
            }
        }
        m
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        debug_assert!(self.field.contains(&value));
        self.data[i * self.cols + j] = value;
    }

    pub fn add_at(&mut self, i: usize, j: usize, value: &Scalar) {
        let idx = i * self.cols + j;
        self.data[idx] = &self.data[idx] + value;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn nonzero_count(&self) -> usize {
        self.data.iter().filter(|s| !s.is_zero()).count()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn checked_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.same_field(rhs)?;
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * rhs.cols + j;
                    out.data[idx] = &out.data[idx] + &(a * b);
                }
            }
        }
        Ok(out)
    }

    pub fn checked_add(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_shape(rhs)?;
        Ok(self.zip(rhs, |a, b| a + b))
    }

    pub fn checked_sub(&self, rhs: &Matrix) -> Result<Matrix> {
        self.same_shape(rhs)?;
        Ok(self.zip(rhs, |a, b| a - b))
    }

    /// Panicking variants for internal code whose shapes are correct by construction.
    pub fn add(&self, rhs: &Matrix) -> Matrix {
        self.checked_add(rhs).expect("matrix addition shapes")
    }

    pub fn sub(&self, rhs: &Matrix) -> Matrix {
        self.checked_sub(rhs).expect("matrix subtraction shapes")
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    fn zip(&self, rhs: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    fn same_shape(&self, rhs: &Matrix) -> Result<()> {
        if self.shape() != rhs.shape() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        self.same_field(rhs)
    }

    fn same_field(&self, rhs: &Matrix) -> Result<()> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch(format!("{} vs {}", self.field, rhs.field)));
        }
        Ok(())
    }

    pub fn kron(&self, rhs: &Matrix) -> Matrix {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Matrix::zeros(self.field, r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.get(i, j);
                if a.is_zero() {
                    continue;
                }
                for k in 0..rhs.rows {
                    for l in 0..rhs.cols {
                        let b = rhs.get(k, l);
                        if !b.is_zero() {
                            out.data[(i * rhs.rows + k) * c + j * rhs.cols + l] = a * b;
                        }
                    }
                }
            }
        }
        out
    }

    /// `(self ⊗ I_inner) · v` without materializing the Kronecker product.
    pub fn kron_identity_apply(&self, inner: usize, v: &Matrix) -> Matrix {
        assert_eq!(v.rows, self.cols * inner, "kron_identity_apply shape");
        let mut out = Matrix::zeros(self.field, self.rows * inner, v.cols);
        for a in 0..self.rows {
            for x in 0..self.cols {
                let coef = self.get(a, x);
                if coef.is_zero() {
                    continue;
                }
                for y in 0..inner {
                    for col in 0..v.cols {
                        let s = v.get(x * inner + y, col);
                        if !s.is_zero() {
                            out.add_at(a * inner + y, col, &(coef * s));
                        }
                    }
                }
            }
        }
        out
    }

    /// `(I_outer ⊗ self) · v` without materializing the Kronecker product.
    pub fn identity_kron_apply(&self, outer: usize, v: &Matrix) -> Matrix {
        assert_eq!(v.rows, outer * self.cols, "identity_kron_apply shape");
        let mut out = Matrix::zeros(self.field, outer * self.rows, v.cols);
        for o in 0..outer {
            for a in 0..self.rows {
                for x in 0..self.cols {
                    let coef = self.get(a, x);
                    if coef.is_zero() {
                        continue;
                    }
                    for col in 0..v.cols {
                        let s = v.get(o * self.cols + x, col);
                        if !s.is_zero() {
                            out.add_at(o * self.rows + a, col, &(coef * s));
                        }
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch("hstack row counts differ".into()));
        }
        let mut out = Matrix::zeros(self.field, self.rows, self.cols + rhs.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(i, j).clone());
            }
            for j in 0..rhs.cols {
                out.set(i, self.cols + j, rhs.get(i, j).clone());
            }
        }
        Ok(out)
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(rows.len() * self.cols);
        for &r in rows {
            data.extend_from_slice(self.row(r));
        }
        Matrix::from_vec(self.field, rows.len(), self.cols, data)
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut out = Matrix::zeros(self.field, self.rows, cols.len());
        for i in 0..self.rows {
            for (jj, &j) in cols.iter().enumerate() {
                out.set(i, jj, self.get(i, j).clone());
            }
        }
        out
    }

    /// Reinterprets column `col` (length `r * c`) as an `r x c` row-major matrix.
    pub fn column_as_matrix(&self, col: usize, r: usize, c: usize) -> Matrix {
        assert_eq!(self.rows, r * c, "reshape size");
        Matrix::from_vec(self.field, r, c, self.column(col))
    }

    /// Row-major flattening of a matrix into a column vector.
    pub fn vectorize(&self) -> Matrix {
        Matrix::from_vec(self.field, self.rows * self.cols, 1, self.data.clone())
    }

    pub fn echelon(&self) -> Echelon {
        let mut e = Echelon::new(self.field, self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i).to_vec());
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.echelon().rank()
    }

    /// Basis of the null space as the columns of the result.
    pub fn kernel(&self) -> Matrix {
        self.echelon().kernel()
    }

    /// Solves `self · x = b`.
    pub fn solve(&self, b: &[Scalar]) -> Result<Option<Solution>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has length {}, matrix has {} rows",
                b.len(),
                self.rows
            )));
        }
        let mut e = Echelon::new(self.field, self.cols + 1);
        for i in 0..self.rows {
            let mut row = self.row(i).to_vec();
            row.push(b[i].clone());
            e.insert(row);
        }
        Ok(e.solution())
    }

    pub fn determinant(&self) -> Result<Scalar> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "determinant of non-square {}x{}",
                self.rows, self.cols
            )));
        }
        Ok(match self.field {
            FieldSpec::Rationals => bareiss_rational(self),
            FieldSpec::Prime(p) => modular_det(self, p),
        })
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut e = Echelon::new(self.field, 2 * n);
        for i in 0..n {
            let mut row = self.row(i).to_vec();
            row.extend((0..n).map(|j| if i == j { self.field.one() } else { self.field.zero() }));
            e.insert(row);
        }
        if e.rank() != n || e.pivots().iter().any(|&p| p >= n) {
            return None;
        }
        let mut inv = Matrix::zeros(self.field, n, n);
        for (p, row) in e.sorted_rows() {
            for (c, s) in row {
                if *c >= n {
                    inv.set(p, c - n, s.clone());
                }
            }
        }
        Some(inv)
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.checked_mul(rhs).expect("matrix product shapes")
    }
}

/// Particular solution plus a null-space basis (as columns).
#[derive(Clone, Debug)]
pub struct Solution {
    pub particular: Vec<Scalar>,
    pub null_basis: Matrix,
}

type SparseRow = Vec<(usize, Scalar)>;

/// Incremental reduced row echelon form with first-nonzero pivoting.
#[derive(Clone, Debug)]
pub struct Echelon {
    field: FieldSpec,
    ncols: usize,
    rows: Vec<SparseRow>,
    pivot_cols: Vec<usize>,
    row_of_col: Vec<Option<usize>>,
}

impl Echelon {
    pub fn new(field: FieldSpec, ncols: usize) -> Self {
        Echelon {
            field,
            ncols,
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            row_of_col: vec![None; ncols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Pivot columns in ascending order.
    pub fn pivots(&self) -> Vec<usize> {
        let mut p = self.pivot_cols.clone();
        p.sort_unstable();
        p
    }

    fn sorted_rows(&self) -> Vec<(usize, &SparseRow)> {
        self.pivots()
            .into_iter()
            .map(|c| (c, &self.rows[self.row_of_col[c].expect("pivot")]))
            .collect()
    }

    /// Reduces `v` against the current pivots in place.
    pub fn reduce(&self, v: &mut [Scalar]) {
        assert_eq!(v.len(), self.ncols);
        let hits: Vec<usize> = (0..self.ncols)
            .filter(|&j| self.row_of_col[j].is_some() && !v[j].is_zero())
            .collect();
        for p in hits {
            let f = v[p].clone();
            for (j, x) in &self.rows[self.row_of_col[p].unwrap()] {
                v[*j] = &v[*j] - &(&f * x);
            }
        }
    }

    /// Inserts a sparse row given as `(column, value)` pairs; duplicates are summed.
    pub fn insert_sparse(&mut self, entries: &[(usize, Scalar)]) -> bool {
        if entries.is_empty() {
            return false;
        }
        let mut v = vec![self.field.zero(); self.ncols];
        for (j, s) in entries {
            v[*j] = &v[*j] + s;
        }
        self.insert(v)
    }

    /// Inserts a row; returns whether it increased the rank.
    pub fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        assert_eq!(v.len(), self.ncols, "row width");
        self.reduce(&mut v);
        let Some(q) = v.iter().position(|s| !s.is_zero()) else {
            return false;
        };
        let inv = v[q].inv().expect("nonzero pivot");
        let new_row: SparseRow = v
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(j, s)| (j, s * &inv))
            .collect();
        for row in &mut self.rows {
            if let Ok(pos) = row.binary_search_by_key(&q, |(c, _)| *c) {
                let f = row[pos].1.clone();
                *row = axpy_sparse(row, &f, &new_row);
            }
        }
        self.row_of_col[q] = Some(self.rows.len());
        self.pivot_cols.push(q);
        self.rows.push(new_row);
        true
    }

    fn entry(row: &SparseRow, col: usize) -> Option<&Scalar> {
        row.binary_search_by_key(&col, |(c, _)| *c).ok().map(|i| &row[i].1)
    }

    /// Kernel basis over the first `width` columns: one column per free variable, with
    /// a 1 in its own position and 0 in every other free position.
    fn kernel_over(&self, width: usize) -> Matrix {
        let free: Vec<usize> = (0..width).filter(|&j| self.row_of_col[j].is_none()).collect();
        let mut k = Matrix::zeros(self.field, width, free.len());
        for (idx, &f) in free.iter().enumerate() {
            k.set(f, idx, self.field.one());
            for (p, row) in self.sorted_rows() {
                if p >= width {
                    continue;
                }
                if let Some(s) = Self::entry(row, f) {
                    k.set(p, idx, -s);
                }
            }
        }
        k
    }

    pub fn kernel(&self) -> Matrix {
        self.kernel_over(self.ncols)
    }

    /// Free columns (non-pivots) in ascending order.
    pub fn free_columns(&self) -> Vec<usize> {
        (0..self.ncols).filter(|&j| self.row_of_col[j].is_none()).collect()
    }

    /// Interprets the last column as the right-hand side of an augmented system.
    pub fn solution(&self) -> Option<Solution> {
        let last = self.ncols - 1;
        if self.row_of_col[last].is_some() {
            return None;
        }
        let mut particular = vec![self.field.zero(); last];
        for (p, row) in self.sorted_rows() {
            if let Some(s) = Self::entry(row, last) {
                particular[p] = s.clone();
            }
        }
        Some(Solution { particular, null_basis: self.kernel_over(last) })
    }

    /// Whether `v` lies in the row space.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut w = v.to_vec();
        self.reduce(&mut w);
        w.iter().all(Scalar::is_zero)
    }

    /// The reduced rows as a dense matrix, ordered by pivot column.
    pub fn to_matrix(&self) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rank(), self.ncols);
        for (i, (_, row)) in self.sorted_rows().into_iter().enumerate() {
            for (j, s) in row {
                m.set(i, *j, s.clone());
            }
        }
        m
    }
}

fn axpy_sparse(row: &SparseRow, f: &Scalar, other: &SparseRow) -> SparseRow {
    // row - f * other
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let take_row = j >= other.len() || (i < row.len() && row[i].0 < other[j].0);
        let take_other = i >= row.len() || (j < other.len() && other[j].0 < row[i].0);
        if take_row {
            out.push(row[i].clone());
            i += 1;
        } else if take_other {
            out.push((other[j].0, -&(f * &other[j].1)));
            j += 1;
        } else {
            let v = &row[i].1 - &(f * &other[j].1);
            if !v.is_zero() {
                out.push((row[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

fn bareiss_rational(m: &Matrix) -> Scalar {
    let n = m.rows;
    if n == 0 {
        return m.field.one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            let row: Vec<BigRational> = m
                .row(i)
                .iter()
                .map(|s| s.as_rational().expect("rational entry").clone())
                .collect();
            let (ints, mult) = clear_denominators(&row);
            scale *= mult;
            ints
        })
        .collect();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        let Some(p) = (k..n).find(|&i| !a[i][k].is_zero()) else {
            return m.field.zero();
        };
        if p != k {
            a.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
            a[i][k] = BigInt::zero();
        }
        prev = a[k][k].clone();
    }
    Scalar::Rational(BigRational::new(sign * &a[n - 1][n - 1], scale))
}

fn modular_det(m: &Matrix, p: u64) -> Scalar {
    let n = m.rows;
    let mut a: Vec<Vec<u64>> = (0..n)
        .map(|i| {
            m.row(i)
                .iter()
                .map(|s| match s {
                    Scalar::Modular { value, .. } => *value,
                    Scalar::Rational(_) => unreachable!("field checked"),
                })
                .collect()
        })
        .collect();
    let mut det = 1u64;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&i| a[i][k] != 0) else {
            return Scalar::Modular { value: 0, modulus: p };
        };
        if piv != k {
            a.swap(piv, k);
            det = (p - det) % p;
        }
        det = det * a[k][k] % p;
        let inv = Scalar::Modular { value: a[k][k], modulus: p }.inv().unwrap();
        let Scalar::Modular { value: inv, .. } = inv else { unreachable!() };
        for i in k + 1..n {
            if a[i][k] == 0 {
                continue;
            }
            let f = a[i][k] * inv % p;
            for j in k..n {
                a[i][j] = (a[i][j] + p - f * a[k][j] % p) % p;
            }
        }
    }
    Scalar::Modular { value: det, modulus: p }
}

/// A subspace given by a basis (the columns of `basis`) with a fast coordinate map.
#[derive(Clone, Debug)]
pub struct Subspace {
    basis: Matrix,
    coord_rows: Vec<usize>,
    coord_map: Matrix,
}

impl Subspace {
    /// Requires linearly independent columns.
    pub fn new(basis: Matrix) -> Result<Self> {
        let e = basis.transpose().echelon();
        if e.rank() != basis.cols() {
            return Err(Error::Inconsistent("subspace basis columns are dependent".into()));
        }
        let coord_rows = e.pivots();
        let coord_map = basis
            .select_rows(&coord_rows)
            .inverse()
            .expect("independent rows form an invertible block");
        Ok(Subspace { basis, coord_rows, coord_map })
    }

    /// Null space of `a`, with coordinates read off the free columns.
    pub fn kernel_of(a: &Matrix) -> Self {
        let e = a.echelon();
        let free = e.free_columns();
        let basis = e.kernel();
        let coord_map = Matrix::identity(a.field(), free.len());
        Subspace { basis, coord_rows: free, coord_map }
    }

    /// Span of the columns of `a` (dependent columns are dropped, earliest kept).
    pub fn column_space(a: &Matrix) -> Result<Self> {
        let e = a.echelon();
        Subspace::new(a.select_columns(&e.pivots()))
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    /// Coordinates of every column of `v`, or `None` if some column leaves the subspace.
    pub fn coordinates(&self, v: &Matrix) -> Option<Matrix> {
        assert_eq!(v.rows(), self.ambient_dim(), "ambient dimension");
        let x = &self.coord_map * &v.select_rows(&self.coord_rows);
        if &self.basis * &x == *v {
            Some(x)
        } else {
            None
        }
    }

    /// Index of the first column of `v` outside the subspace.
    pub fn first_outside(&self, v: &Matrix) -> Option<usize> {
        let x = &self.coord_map * &v.select_rows(&self.coord_rows);
        let back = &self.basis * &x;
        (0..v.cols()).find(|&j| back.column(j) != v.column(j))
    }

    pub fn contains(&self, v: &Matrix) -> bool {
        self.coordinates(v).is_some()
    }

    /// Equality of spans via mutual containment.
    pub fn same_span(&self, other: &Subspace) -> bool {
        self.dim() == other.dim() && self.contains(other.basis()) && other.contains(self.basis())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::Rationals
    }

    #[test]
    fn kernel_of_zero_is_everything() {
        let k = Matrix::zeros(q(), 2, 3).kernel();
        assert_eq!(k, Matrix::identity(q(), 3));
    }

    #[test]
    fn kernel_of_identity_is_trivial() {
        assert_eq!(Matrix::identity(q(), 4).kernel().cols(), 0);
    }

    #[test]
    fn kernel_substitution() {
        let a = Matrix::from_i64(q(), &[&[1, 2, 3], &[2, 4, 6]]);
        let k = a.kernel();
        assert_eq!(k.cols(), 2);
        assert!((&a * &k).is_zero());
        assert_eq!(k.rank(), 2);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(q(), 3);
        let b: Vec<Scalar> = [4, -1, 2].iter().map(|&v| q().from_i64(v)).collect();
        let s = id.solve(&b).unwrap().unwrap();
        assert_eq!(s.particular, b);
        assert_eq!(s.null_basis.cols(), 0);

        let z = Matrix::zeros(q(), 2, 2);
        assert!(z.solve(&[q().one(), q().zero()]).unwrap().is_none());

        let a = Matrix::from_i64(q(), &[&[1, 1], &[1, 1]]);
        let two = q().from_i64(2);
        let s = a.solve(&[two.clone(), two.clone()]).unwrap().unwrap();
        assert_eq!(&s.particular[0] + &s.particular[1], two);
        assert_eq!(s.null_basis.cols(), 1);
        assert!((&a * &s.null_basis).is_zero());

        assert!(a.solve(&[two]).is_err());
    }

    #[test]
    fn determinants_agree_across_fields() {
        let a = [[2i64, -1, 0], [1, 3, 4], [0, 5, -2]];
        let rows: Vec<&[i64]> = a.iter().map(|r| r.as_slice()).collect();
        // 2(-6-20) + 1(-2-0) = -54
        let dq = Matrix::from_i64(q(), &rows).determinant().unwrap();
        assert_eq!(dq, q().from_i64(-54));
        let f7 = FieldSpec::prime(7).unwrap();
        let d7 = Matrix::from_i64(f7, &rows).determinant().unwrap();
        assert_eq!(d7, f7.from_i64(-54));
    }

    #[test]
    fn determinant_with_fractions_and_swaps() {
        let half = q().parse("1/2").unwrap();
        let m = Matrix::from_rows(
            q(),
            vec![vec![q().zero(), half.clone()], vec![q().from_i64(3), q().one()]],
        )
        .unwrap();
        assert_eq!(m.determinant().unwrap(), q().parse("-3/2").unwrap());
        assert_eq!(Matrix::zeros(q(), 0, 0).determinant().unwrap(), q().one());
    }

    #[test]
    fn inverse_roundtrip() {
        let m = Matrix::from_i64(q(), &[&[2, 1], &[7, 4]]);
        let inv = m.inverse().unwrap();
        assert_eq!(&m * &inv, Matrix::identity(q(), 2));
        assert!(Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn kron_apply_matches_explicit_kron() {
        let a = Matrix::from_i64(q(), &[&[1, 2], &[0, -1], &[3, 1]]);
        let v = Matrix::from_i64(q(), &[&[1, 0], &[2, 1], &[0, 3], &[-1, 1]]);
        let i2 = Matrix::identity(q(), 2);
        assert_eq!(a.kron_identity_apply(2, &v), &a.kron(&i2) * &v);
        assert_eq!(a.identity_kron_apply(2, &v), &i2.kron(&a) * &v);
    }

    #[test]
    fn subspace_coordinates() {
        let b = Matrix::from_i64(q(), &[&[1, 0], &[1, 1], &[0, 2]]);
        let s = Subspace::new(b.clone()).unwrap();
        let v = Matrix::from_i64(q(), &[&[3], &[5], &[4]]);
        let x = s.coordinates(&v).unwrap();
        assert_eq!(&b * &x, v);
        let w = Matrix::from_i64(q(), &[&[1], &[0], &[0]]);
        assert!(s.coordinates(&w).is_none());
        assert_eq!(s.first_outside(&v.hstack(&w).unwrap()), Some(1));
    }
}
