use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::rings::{Ring, Scalar};

/// Column vector over some ring.
pub type Vector = Vec<Scalar>;

/// Dense square matrix over one exact ring, stored row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    ring: Ring,
    n: usize,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn new(ring: Ring, n: usize, entries: Vec<Scalar>) -> Result<Matrix> {
        if n == 0 {
            return Err(Error::PreconditionViolated("dimension must be at least 1".into()));
        }
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        if let Some(bad) = entries.iter().find(|x| !ring.contains(x)) {
            return Err(Error::OutOfRing {
                value: bad.to_string(),
                ring: ring.to_string(),
            });
        }
        Ok(Matrix { ring, n, entries })
    }

    /// Skips the per-entry membership check; entries must come from ring
    /// arithmetic.
    pub(crate) fn from_raw(ring: Ring, n: usize, entries: Vec<Scalar>) -> Matrix {
        debug_assert_eq!(entries.len(), n * n);
        Matrix { ring, n, entries }
    }

    pub fn from_rows(ring: Ring, rows: Vec<Vector>) -> Result<Matrix> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: row.len(),
                });
            }
            entries.extend(row);
        }
        Matrix::new(ring, n, entries)
    }

    /// Matrix with integer entries mapped into `ring`. Panics if not square.
    pub fn from_ints<const N: usize>(ring: Ring, rows: &[[i64; N]]) -> Matrix {
        assert_eq!(rows.len(), N, "matrix must be square");
        let entries = rows.iter().flatten().map(|&x| ring.int(x)).collect();
        Matrix::from_raw(ring, N, entries)
    }

    pub fn from_int_rows(ring: Ring, rows: &[Vec<i64>]) -> Result<Matrix> {
        Matrix::from_rows(
            ring,
            rows.iter().map(|r| r.iter().map(|&x| ring.int(x)).collect()).collect(),
        )
    }

    /// Matrix whose `j`-th column is `columns[j]`.
    pub fn from_columns(ring: Ring, columns: &[Vector]) -> Result<Matrix> {
        let n = columns.len();
        if n == 0 {
            return Err(Error::PreconditionViolated("no columns".into()));
        }
        let mut entries = vec![ring.zero(); n * n];
        for (j, c) in columns.iter().enumerate() {
            if c.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: c.len(),
                });
            }
            for (i, x) in c.iter().enumerate() {
                entries[i * n + j] = x.clone();
            }
        }
        Matrix::new(ring, n, entries)
    }

    pub fn zero(ring: Ring, n: usize) -> Matrix {
        Matrix::from_raw(ring, n, vec![ring.zero(); n * n])
    }

    pub fn identity(ring: Ring, n: usize) -> Matrix {
        let mut m = Matrix::zero(ring, n);
        for i in 0..n {
            m.entries[i * n + i] = ring.one();
        }
        m
    }

    /// Block-diagonal matrix `diag(blocks[0], blocks[1], ...)`.
    pub fn block_diagonal(blocks: &[Matrix]) -> Result<Matrix> {
        let first = blocks
            .first()
            .ok_or_else(|| Error::PreconditionViolated("no blocks".into()))?;
        let ring = first.ring;
        if let Some(b) = blocks.iter().find(|b| b.ring != ring) {
            return Err(Error::RingMismatch(ring.to_string(), b.ring.to_string()));
        }
        let n: usize = blocks.iter().map(|b| b.n).sum();
        let mut m = Matrix::zero(ring, n);
        let mut off = 0;
        for b in blocks {
            for i in 0..b.n {
                for j in 0..b.n {
                    m.entries[(off + i) * n + off + j] = b.get(i, j).clone();
                }
            }
            off += b.n;
        }
        Ok(m)
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: Scalar) {
        debug_assert!(self.ring.contains(&x));
        self.entries[i * self.n + j] = x;
    }

    pub fn row(&self, i: usize) -> Vector {
        self.entries[i * self.n..(i + 1) * self.n].to_vec()
    }

    pub fn column(&self, j: usize) -> Vector {
        (0..self.n).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vector> {
        (0..self.n).map(|j| self.column(j)).collect()
    }

    pub fn rows(&self) -> Vec<Vector> {
        (0..self.n).map(|i| self.row(i)).collect()
    }

    /// Extracts the block `diag` block at offset `off` of size `size`.
    pub fn sub_block(&self, off: usize, size: usize) -> Matrix {
        let mut m = Matrix::zero(self.ring, size);
        for i in 0..size {
            for j in 0..size {
                m.entries[i * size + j] = self.get(off + i, off + j).clone();
            }
        }
        m
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let entries = (0..n * n).map(|k| self.get(k % n, k / n).clone()).collect();
        Matrix::from_raw(self.ring, n, entries)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vector {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        let r = self.ring;
        (0..self.n)
            .map(|i| (0..self.n).fold(r.zero(), |acc, j| r.add(&acc, &r.mul(self.get(i, j), &v[j]))))
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        let r = self.ring;
        Matrix::from_raw(r, self.n, self.entries.iter().map(|x| r.mul(x, c)).collect())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        *self == Matrix::identity(self.ring, self.n)
    }

    pub fn is_idempotent(&self) -> bool {
        &(self * self) == self
    }

    fn check_compatible(&self, other: &Matrix) {
        assert_eq!(self.ring, other.ring, "ring mismatch");
        assert_eq!(self.n, other.n, "dimension mismatch");
    }

    /// Rows of the matrix rendered in the scalar text format.
    pub fn render_rows(&self) -> Vec<Vec<String>> {
        self.rows()
            .iter()
            .map(|r| r.iter().map(|x| self.ring.render(x)).collect())
            .collect()
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &'a Matrix) -> Matrix {
        self.check_compatible(rhs);
        let (r, n) = (self.ring, self.n);
        let mut out = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = r.zero();
                for k in 0..n {
                    let a = self.get(i, k);
                    if a.is_zero() {
                        continue;
                    }
                    acc = r.add(&acc, &r.mul(a, rhs.get(k, j)));
                }
                out.push(acc);
            }
        }
        Matrix::from_raw(r, n, out)
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn add(self, rhs: &'a Matrix) -> Matrix {
        self.check_compatible(rhs);
        let r = self.ring;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| r.add(a, b))
            .collect();
        Matrix::from_raw(r, self.n, entries)
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &'a Matrix) -> Matrix {
        self.check_compatible(rhs);
        let r = self.ring;
        let entries = self
            .entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| r.sub(a, b))
            .collect();
        Matrix::from_raw(r, self.n, entries)
    }
}

impl Neg for &Matrix {
    type Output = Matrix;

    fn neg(self) -> Matrix {
        let r = self.ring;
        Matrix::from_raw(r, self.n, self.entries.iter().map(|x| r.neg(x)).collect())
    }
}

/// Product of a non-empty list of matrices, left to right.
pub fn product<'a>(factors: impl IntoIterator<Item = &'a Matrix>) -> Option<Matrix> {
    let mut it = factors.into_iter();
    let first = it.next()?.clone();
    Some(it.fold(first, |acc, m| &acc * m))
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:?}", self.ring, self.render_rows())
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}
