use super::{Field, Scalar, UniPoly};
use crate::error::{Error, Result};

/// Dense row-major matrix of field elements. The field is supplied to each
/// operation rather than stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Scalar::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::ONE;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Builds a matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch(format!("column {j} has length {}", col.len())));
            }
            for (i, &v) in col.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Scalar {
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    pub fn mul(&self, field: &Field, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
            for k in 0..self.cols {
                field.axpy(dst, self.get(i, k), other.row(k));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, field: &Field, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch("vector length".into()));
        }
        Ok((0..self.rows).map(|i| field.dot(self.row(i), v)).collect())
    }

    pub fn sub(&self, field: &Field, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| field.sub(a, b)).collect();
        Matrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|v| v.is_zero())
    }

    pub fn pow(&self, field: &Field, mut e: u64) -> Result<Matrix> {
        if !self.is_square() {
            return Err(Error::DimensionMismatch("power of a non-square matrix".into()));
        }
        let mut acc = Matrix::identity(self.rows);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(field, &base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(field, &base)?;
            }
        }
        Ok(acc)
    }

    pub fn inverse(&self, field: &Field) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let mut aug = Matrix::zeros(n, 2 * n);
        for i in 0..n {
            aug.data[i * 2 * n..i * 2 * n + n].copy_from_slice(self.row(i));
            aug.data[i * 2 * n + n + i] = Scalar::ONE;
        }
        let pivots = aug.rref_in_place(field, n);
        if pivots.len() < n {
            return None;
        }
        let mut out = Matrix::zeros(n, n);
        for i in 0..n {
            out.data[i * n..(i + 1) * n].copy_from_slice(&aug.data[i * 2 * n + n..(i + 1) * 2 * n]);
        }
        Some(out)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let c = self.cols;
        let (lo, hi) = (a.min(b), a.max(b));
        let (top, bottom) = self.data.split_at_mut(hi * c);
        top[lo * c..(lo + 1) * c].swap_with_slice(&mut bottom[..c]);
    }

    /// `row[dst] += c * row[src]`.
    fn add_row_multiple(&mut self, field: &Field, dst: usize, c: Scalar, src: usize) {
        let cols = self.cols;
        if dst < src {
            let (top, bottom) = self.data.split_at_mut(src * cols);
            field.axpy(&mut top[dst * cols..(dst + 1) * cols], c, &bottom[..cols]);
        } else {
            let (top, bottom) = self.data.split_at_mut(dst * cols);
            field.axpy(&mut bottom[..cols], c, &top[src * cols..(src + 1) * cols]);
        }
    }

    /// Reduced row echelon form over the first `pivot_cols` columns, pivots
    /// chosen by least column index. Returns the pivot columns in row order.
    pub(crate) fn rref_in_place(&mut self, field: &Field, pivot_cols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..pivot_cols.min(self.cols) {
            if row == self.rows {
                break;
            }
            let Some(pr) = (row..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            self.swap_rows(row, pr);
            let inv = field.inv(self.get(row, col)).expect("pivot is nonzero");
            let start = row * self.cols;
            for v in &mut self.data[start..start + self.cols] {
                *v = field.mul(*v, inv);
            }
            for r in 0..self.rows {
                if r != row {
                    let c = self.get(r, col);
                    if !c.is_zero() {
                        self.add_row_multiple(field, r, field.neg(c), row);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        pivots
    }

    pub fn rref(&self, field: &Field) -> (Matrix, Vec<usize>) {
        let mut m = self.clone();
        let piv = m.rref_in_place(field, m.cols);
        (m, piv)
    }

    pub fn rank(&self, field: &Field) -> usize {
        // Eliminate along the shorter side.
        if self.rows > self.cols {
            return self.transpose().rank(field);
        }
        let mut m = self.clone();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                continue;
            };
            m.swap_rows(row, pr);
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for r in row + 1..m.rows {
                let c = m.get(r, col);
                if !c.is_zero() {
                    m.add_row_multiple(field, r, field.neg(field.mul(c, inv)), row);
                }
            }
            row += 1;
        }
        row
    }

    pub fn det(&self, field: &Field) -> Option<Scalar> {
        if !self.is_square() {
            return None;
        }
        let mut m = self.clone();
        let mut det = Scalar::ONE;
        for col in 0..m.cols {
            let Some(pr) = (col..m.rows).find(|&r| !m.get(r, col).is_zero()) else {
                return Some(Scalar::ZERO);
            };
            if pr != col {
                m.swap_rows(col, pr);
                det = field.neg(det);
            }
            let pivot = m.get(col, col);
            det = field.mul(det, pivot);
            let inv = field.inv(pivot).expect("pivot is nonzero");
            for r in col + 1..m.rows {
                let c = m.get(r, col);
                if !c.is_zero() {
                    m.add_row_multiple(field, r, field.neg(field.mul(c, inv)), col);
                }
            }
        }
        Some(det)
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.get(i, j);
            }
        }
        out
    }
}

/// Result of [`solve_linear`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    /// One solution; free coordinates are set to zero.
    pub x: Vec<Scalar>,
    /// True when the solution set is a single point.
    pub unique: bool,
    /// `determined[j]` is true when every solution has the same `x[j]`.
    pub determined: Vec<bool>,
}

/// Solves `a x = b`. Pivots are chosen by least column index and free
/// variables are set to zero.
pub fn solve_linear(field: &Field, a: &Matrix, b: &[Scalar]) -> Result<LinearSolution> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch(format!(
            "matrix has {} rows, right-hand side {}",
            a.rows,
            b.len()
        )));
    }
    let n = a.cols;
    let mut aug = Matrix::zeros(a.rows, n + 1);
    for i in 0..a.rows {
        aug.data[i * (n + 1)..i * (n + 1) + n].copy_from_slice(a.row(i));
        aug.data[i * (n + 1) + n] = b[i];
    }
    let pivots = aug.rref_in_place(field, n);
    let rank = pivots.len();
    if (rank..a.rows).any(|r| !aug.get(r, n).is_zero()) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![Scalar::ZERO; n];
    let mut is_pivot = vec![false; n];
    for (r, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(r, n);
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_pivot[c]).collect();
    // A pivot coordinate is pinned iff no free column feeds into its row.
    let mut determined = vec![false; n];
    for (r, &c) in pivots.iter().enumerate() {
        determined[c] = free.iter().all(|&f| aug.get(r, f).is_zero());
    }
    Ok(LinearSolution { x, unique: free.is_empty(), determined })
}

/// `det(tI - a)` via reduction to upper Hessenberg form followed by the
/// standard three-term expansion.
pub fn char_poly(field: &Field, a: &Matrix) -> Result<UniPoly> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!("{}x{} is not square", a.rows, a.cols)));
    }
    let n = a.rows;
    let mut h = a.data.clone();
    hessenberg(field, &mut h, n);
    Ok(hessenberg_char_poly(field, &h, n))
}

fn hessenberg(field: &Field, h: &mut [Scalar], n: usize) {
    let mut coeffs: Vec<(usize, Scalar)> = Vec::with_capacity(n);
    for k in 0..n.saturating_sub(2) {
        let Some(piv) = (k + 1..n).find(|&i| !h[i * n + k].is_zero()) else {
            continue;
        };
        if piv != k + 1 {
            let (top, bottom) = h.split_at_mut(piv * n);
            top[(k + 1) * n..(k + 2) * n].swap_with_slice(&mut bottom[..n]);
            for row in h.chunks_exact_mut(n) {
                row.swap(piv, k + 1);
            }
        }
        let inv = field.inv(h[(k + 1) * n + k]).expect("pivot is nonzero");
        coeffs.clear();
        for i in k + 2..n {
            let c = field.mul(h[i * n + k], inv);
            if !c.is_zero() {
                coeffs.push((i, c));
            }
        }
        if coeffs.is_empty() {
            continue;
        }
        // Row operations: row_i -= c_i * row_{k+1}.
        {
            let (top, bottom) = h.split_at_mut((k + 2) * n);
            let pivot_row = &top[(k + 1) * n + k..(k + 2) * n];
            for &(i, c) in &coeffs {
                let off = (i - k - 2) * n;
                field.axpy(&mut bottom[off + k..off + n], field.neg(c), pivot_row);
            }
        }
        // Column operations: col_{k+1} += c_i * col_i, done row by row.
        if field.is_prime_field() {
            let p = field.p() as u64;
            for row in h.chunks_exact_mut(n) {
                let mut acc = row[k + 1].0 as u64;
                for &(i, c) in &coeffs {
                    acc += c.0 as u64 * row[i].0 as u64;
                }
                row[k + 1] = Scalar((acc % p) as u32);
            }
        } else {
            for row in h.chunks_exact_mut(n) {
                let mut acc = row[k + 1];
                for &(i, c) in &coeffs {
                    acc = field.add(acc, field.mul(c, row[i]));
                }
                row[k + 1] = acc;
            }
        }
    }
}

fn hessenberg_char_poly(field: &Field, h: &[Scalar], n: usize) -> UniPoly {
    let at = |i: usize, j: usize| h[i * n + j];
    // polys[m] = characteristic polynomial of the leading m x m block.
    let mut polys: Vec<Vec<Scalar>> = Vec::with_capacity(n + 1);
    polys.push(vec![Scalar::ONE]);
    for m in 1..=n {
        let prev = &polys[m - 1];
        let mut next = vec![Scalar::ZERO; m + 1];
        next[1..].copy_from_slice(prev);
        field.axpy(&mut next[..m], field.neg(at(m - 1, m - 1)), prev);
        // - sum_{i=1}^{m-1} h[i-1][m-1] * prod_{j=i}^{m-1} h[j][j-1] * polys[i-1]
        let mut prod = Scalar::ONE;
        for i in (1..m).rev() {
            prod = field.mul(prod, at(i, i - 1));
            if prod.is_zero() {
                break;
            }
            let c = field.mul(at(i - 1, m - 1), prod);
            if !c.is_zero() {
                let src = &polys[i - 1];
                field.axpy(&mut next[..src.len()], field.neg(c), src);
            }
        }
        polys.push(next);
    }
    UniPoly::new(polys.pop().expect("n + 1 polynomials"))
}
