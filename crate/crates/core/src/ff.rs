//! Exact arithmetic and dense linear algebra over prime fields.
//!
//! Entries are stored as canonical residues `0..p`. Row reduction always
//! pivots on the first nonzero entry of the leftmost unreduced column
//! (scanning rows top to bottom), so every derived result is deterministic.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Largest supported modulus (the largest prime below 2^16).
pub const MAX_MODULUS: u32 = 65521;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("modulus {0} outside supported range 2..={MAX_MODULUS}")]
    ModulusOutOfRange(u32),
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("field mismatch: F_{0} vs F_{1}")]
    FieldMismatch(u32, u32),
    #[error("expected {expected} entries, got {got}")]
    EntryCount { expected: usize, got: usize },
}

/// The prime field F_p with a precomputed inverse table.
#[derive(Clone)]
pub struct PrimeField {
    p: u32,
    inverses: Arc<[u32]>,
}

impl PrimeField {
    pub fn new(p: u32) -> Result<Self, FfError> {
        if !(2..=MAX_MODULUS).contains(&p) {
            return Err(FfError::ModulusOutOfRange(p));
        }
        if !is_prime(p) {
            return Err(FfError::NotPrime(p));
        }
        let mut inverses = vec![0u32; p as usize];
        for a in 1..p {
            if inverses[a as usize] == 0 {
                let inv = pow_mod(a, p - 2, p);
                inverses[a as usize] = inv;
                inverses[inv as usize] = a;
            }
        }
        Ok(Self {
            p,
            inverses: inverses.into(),
        })
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn add(&self, a: u32, b: u32) -> u32 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u32, b: u32) -> u32 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u32) -> u32 {
        if a == 0 {
            0
        } else {
            self.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        ((a as u64 * b as u64) % self.p as u64) as u32
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            None
        } else {
            Some(self.inverses[a as usize])
        }
    }

    /// Canonical residue of an arbitrary integer.
    pub fn reduce(&self, a: i64) -> u32 {
        a.rem_euclid(self.p as i64) as u32
    }

    fn check_same(&self, other: &PrimeField) -> Result<(), FfError> {
        if self.p == other.p {
            Ok(())
        } else {
            Err(FfError::FieldMismatch(self.p, other.p))
        }
    }
}

impl PartialEq for PrimeField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p
    }
}

impl Eq for PrimeField {}

impl std::hash::Hash for PrimeField {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.p.hash(state)
    }
}

impl fmt::Debug for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn pow_mod(base: u32, mut exp: u32, m: u32) -> u32 {
    let mut acc = 1u64;
    let mut b = base as u64 % m as u64;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u64;
        }
        b = b * b % m as u64;
        exp >>= 1;
    }
    acc as u32
}

/// Dense row-major matrix over a prime field.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: PrimeField,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: &PrimeField, rows: usize, cols: usize) -> Self {
        Self {
            field: field.clone(),
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: &PrimeField, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    /// Builds a matrix from residues given row-major; entries are reduced mod p.
    pub fn from_vec(
        field: &PrimeField,
        rows: usize,
        cols: usize,
        entries: Vec<u32>,
    ) -> Result<Self, FfError> {
        if entries.len() != rows * cols {
            return Err(FfError::EntryCount {
                expected: rows * cols,
                got: entries.len(),
            });
        }
        let p = field.order();
        let data = entries.into_iter().map(|e| e % p).collect();
        Ok(Self {
            field: field.clone(),
            rows,
            cols,
            data,
        })
    }

    /// Builds a matrix from integer rows. All rows must have equal length.
    pub fn from_rows<R: AsRef<[i64]>>(field: &PrimeField, rows: &[R]) -> Result<Self, FfError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(FfError::EntryCount {
                    expected: cols,
                    got: r.len(),
                });
            }
            data.extend(r.iter().map(|&e| field.reduce(e)));
        }
        Ok(Self {
            field: field.clone(),
            rows: rows.len(),
            cols,
            data,
        })
    }

    /// Builds a `column.len() x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns(field: &PrimeField, height: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(field, height, columns.len());
        for (j, c) in columns.iter().enumerate() {
            debug_assert_eq!(c.len(), height);
            for (i, &v) in c.iter().enumerate() {
                m.data[i * m.cols + j] = v;
            }
        }
        m
    }

    #[inline]
    pub fn field(&self) -> &PrimeField {
        &self.field
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: u32) {
        self.data[r * self.cols + c] = v % self.field.order();
    }

    pub fn entries(&self) -> &[u32] {
        &self.data
    }

    pub fn row(&self, r: usize) -> &[u32] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<u32> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix, FfError> {
        self.field.check_same(&other.field)?;
        if self.cols != other.rows {
            return Err(FfError::DimensionMismatch {
                op: "mat_mul",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let p = self.field.order() as u64;
        let mut out = Matrix::zeros(&self.field, self.rows, other.cols);
        let mut acc = vec![0u64; other.cols];
        for i in 0..self.rows {
            acc.iter_mut().for_each(|a| *a = 0);
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k] as u64;
                if a == 0 {
                    continue;
                }
                let orow = &other.data[k * other.cols..(k + 1) * other.cols];
                for (slot, &b) in acc.iter_mut().zip(orow) {
                    *slot = (*slot + a * b as u64) % p;
                }
            }
            for (j, &v) in acc.iter().enumerate() {
                out.data[i * other.cols + j] = v as u32;
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[u32]) -> Result<Vec<u32>, FfError> {
        if v.len() != self.cols {
            return Err(FfError::DimensionMismatch {
                op: "mat_vec",
                left: self.shape(),
                right: (v.len(), 1),
            });
        }
        let p = self.field.order() as u64;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0u64, |acc, (&a, &b)| (acc + a as u64 * b as u64) % p) as u32
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix, FfError> {
        self.zip_with(other, "mat_add", |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, FfError> {
        self.zip_with(other, "mat_sub", |f, a, b| f.sub(a, b))
    }

    fn zip_with(
        &self,
        other: &Matrix,
        op: &'static str,
        f: impl Fn(&PrimeField, u32, u32) -> u32,
    ) -> Result<Matrix, FfError> {
        self.field.check_same(&other.field)?;
        if self.shape() != other.shape() {
            return Err(FfError::DimensionMismatch {
                op,
                left: self.shape(),
                right: other.shape(),
            });
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| f(&self.field, a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn scale(&self, c: u32) -> Matrix {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = self.field.mul(*e, c);
        }
        out
    }

    pub fn neg(&self) -> Matrix {
        let mut out = self.clone();
        for e in &mut out.data {
            *e = self.field.neg(*e);
        }
        out
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(&self.field, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j];
            }
        }
        out
    }

    /// Horizontal concatenation `[self | other]`.
    pub fn hstack(&self, other: &Matrix) -> Result<Matrix, FfError> {
        self.field.check_same(&other.field)?;
        if self.rows != other.rows {
            return Err(FfError::DimensionMismatch {
                op: "hstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let cols = self.cols + other.cols;
        let mut out = Matrix::zeros(&self.field, self.rows, cols);
        for i in 0..self.rows {
            out.data[i * cols..i * cols + self.cols].copy_from_slice(self.row(i));
            out.data[i * cols + self.cols..(i + 1) * cols].copy_from_slice(other.row(i));
        }
        Ok(out)
    }

    /// Vertical concatenation.
    pub fn vstack(&self, other: &Matrix) -> Result<Matrix, FfError> {
        self.field.check_same(&other.field)?;
        if self.cols != other.cols {
            return Err(FfError::DimensionMismatch {
                op: "vstack",
                left: self.shape(),
                right: other.shape(),
            });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows + other.rows,
            cols: self.cols,
            data,
        })
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix) {
        assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            let dst = (r0 + i) * self.cols + c0;
            self.data[dst..dst + block.cols].copy_from_slice(block.row(i));
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        assert!(r0 + rows <= self.rows && c0 + cols <= self.cols);
        let mut out = Matrix::zeros(&self.field, rows, cols);
        for i in 0..rows {
            let src = (r0 + i) * self.cols + c0;
            out.data[i * cols..(i + 1) * cols].copy_from_slice(&self.data[src..src + cols]);
        }
        out
    }

    pub fn rref(&self) -> Rref {
        let f = &self.field;
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut pivot_row = 0;
        for col in 0..m.cols {
            if pivot_row == m.rows {
                break;
            }
            let Some(r) = (pivot_row..m.rows).find(|&r| m.data[r * m.cols + col] != 0) else {
                continue;
            };
            if r != pivot_row {
                for j in 0..m.cols {
                    m.data.swap(r * m.cols + j, pivot_row * m.cols + j);
                }
            }
            let inv = f.inv(m.data[pivot_row * m.cols + col]).expect("nonzero pivot");
            for j in col..m.cols {
                let idx = pivot_row * m.cols + j;
                m.data[idx] = f.mul(m.data[idx], inv);
            }
            for r2 in 0..m.rows {
                if r2 == pivot_row {
                    continue;
                }
                let factor = m.data[r2 * m.cols + col];
                if factor == 0 {
                    continue;
                }
                for j in col..m.cols {
                    let pv = m.data[pivot_row * m.cols + j];
                    if pv != 0 {
                        let idx = r2 * m.cols + j;
                        m.data[idx] = f.sub(m.data[idx], f.mul(factor, pv));
                    }
                }
            }
            pivots.push(col);
            pivot_row += 1;
        }
        Rref { matrix: m, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().pivots.len()
    }

    /// Basis of the null space `{v : self * v = 0}`, one vector per free column.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let Rref { matrix: r, pivots } = self.rref();
        let f = &self.field;
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let mut basis = Vec::with_capacity(self.cols - pivots.len());
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = f.neg(r.get(i, free));
            }
            basis.push(v);
        }
        basis
    }

    /// Some `x` with `self * x = b`, or `None` when the system is inconsistent.
    pub fn solve(&self, b: &[u32]) -> Result<Option<Vec<u32>>, FfError> {
        if b.len() != self.rows {
            return Err(FfError::DimensionMismatch {
                op: "solve",
                left: self.shape(),
                right: (b.len(), 1),
            });
        }
        let rhs = Matrix::from_columns(&self.field, self.rows, &[b.to_vec()]);
        let aug = self.hstack(&rhs)?;
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![0u32; self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = r.get(i, self.cols);
        }
        Ok(Some(x))
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(self.clone());
        }
        let aug = self
            .hstack(&Matrix::identity(&self.field, n))
            .expect("same field and height");
        let Rref { matrix: r, pivots } = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(r.block(0, n, n, n))
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix{:?}{:?}", self.field, self.to_rows())
    }
}
