//! Subspaces and submodules of the ambient free module: kernels, fixed
//! spaces, images, complements, and the projections attached to a split
//! basis.

use crate::error::{Error, Result};
use crate::linalg::elim;
use crate::linalg::matrix::{Matrix, Vector};
use crate::rings::{Ring, Scalar};

/// A list of independent column vectors spanning a submodule of `R^dim`.
///
/// `pure` records whether the span is a direct summand (over `Z_(p)`: some
/// maximal minor of the generator matrix is a unit). Over a field every span
/// is pure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ColumnSpan {
    ring: Ring,
    dim: usize,
    generators: Vec<Vector>,
    pure: bool,
}

impl ColumnSpan {
    pub fn new(ring: Ring, dim: usize, generators: Vec<Vector>) -> Result<ColumnSpan> {
        for g in &generators {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: g.len(),
                });
            }
            if let Some(bad) = g.iter().find(|x| !ring.contains(x)) {
                return Err(Error::OutOfRing {
                    value: bad.to_string(),
                    ring: ring.to_string(),
                });
            }
        }
        if elim::rank_of_columns(ring, dim, &generators) != generators.len() {
            return Err(Error::PreconditionViolated("generators are dependent".into()));
        }
        let pure = elim::residue_rank(ring, dim, &generators) == generators.len();
        Ok(ColumnSpan {
            ring,
            dim,
            generators,
            pure,
        })
    }

    pub fn empty(ring: Ring, dim: usize) -> ColumnSpan {
        ColumnSpan {
            ring,
            dim,
            generators: Vec::new(),
            pure: true,
        }
    }

    pub fn full(ring: Ring, dim: usize) -> ColumnSpan {
        ColumnSpan {
            ring,
            dim,
            generators: Matrix::identity(ring, dim).columns(),
            pure: true,
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[Vector] {
        &self.generators
    }

    pub fn is_pure(&self) -> bool {
        self.pure
    }

    /// Membership over the fraction field. For a pure span and a vector with
    /// ring entries this coincides with module membership.
    pub fn contains(&self, v: &[Scalar]) -> bool {
        let mut cols = self.generators.clone();
        cols.push(v.to_vec());
        elim::rank_of_columns(self.ring, self.dim, &cols) == self.rank()
    }

    pub fn contains_span(&self, other: &ColumnSpan) -> bool {
        let mut cols = self.generators.clone();
        cols.extend(other.generators.iter().cloned());
        elim::rank_of_columns(self.ring, self.dim, &cols) == self.rank()
    }

    /// Whether `self + other` is direct (the spans meet only in zero).
    pub fn meets_trivially(&self, other: &ColumnSpan) -> bool {
        let mut cols = self.generators.clone();
        cols.extend(other.generators.iter().cloned());
        elim::rank_of_columns(self.ring, self.dim, &cols) == self.rank() + other.rank()
    }

    /// Whether `self ⊕ other` is the whole ambient module.
    pub fn complements(&self, other: &ColumnSpan) -> bool {
        let mut cols = self.generators.clone();
        cols.extend(other.generators.iter().cloned());
        cols.len() == self.dim && elim::residue_rank(self.ring, self.dim, &cols) == self.dim
    }

    /// Same span, ignoring the choice of generators.
    pub fn same_span(&self, other: &ColumnSpan) -> bool {
        self.rank() == other.rank() && self.contains_span(other)
    }

    /// Image of the span under an invertible matrix.
    pub fn mapped(&self, m: &Matrix) -> ColumnSpan {
        ColumnSpan {
            ring: self.ring,
            dim: self.dim,
            generators: self.generators.iter().map(|g| m.apply(g)).collect(),
            pure: self.pure,
        }
    }
}

impl Matrix {
    /// Rank over the fraction field.
    pub fn rank(&self) -> usize {
        elim::rank_of_rows(self.ring(), &self.rows(), self.n())
    }

    /// Basis of `ker(A)`. Over `Z_(p)` the basis is pure.
    pub fn kernel_basis(&self) -> ColumnSpan {
        let gens = elim::kernel_of_rows(self.ring(), &self.rows(), self.n());
        ColumnSpan {
            ring: self.ring(),
            dim: self.n(),
            generators: gens,
            pure: true,
        }
    }

    /// Basis of `fix(A) = ker(1 - A)`.
    pub fn fix_basis(&self) -> ColumnSpan {
        (&Matrix::identity(self.ring(), self.n()) - self).kernel_basis()
    }

    /// Maximal independent subset of the columns, scanned left to right. Not
    /// saturated over `Z_(p)`; the purity flag reports whether it happens to
    /// be a direct summand.
    pub fn image_basis(&self) -> ColumnSpan {
        let ring = self.ring();
        let n = self.n();
        let mut gens: Vec<Vector> = Vec::new();
        for c in self.columns() {
            gens.push(c);
            if elim::rank_of_columns(ring, n, &gens) < gens.len() {
                gens.pop();
            }
        }
        let pure = elim::residue_rank(ring, n, &gens) == gens.len();
        ColumnSpan {
            ring,
            dim: n,
            generators: gens,
            pure,
        }
    }

    /// Row vectors `x` with `x A = 0`, returned as columns (kernel of `Aᵀ`).
    pub fn left_kernel_basis(&self) -> ColumnSpan {
        self.transpose().kernel_basis()
    }

    pub fn is_singular(&self) -> bool {
        self.rank() < self.n()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let inv = elim::inverse(self.ring(), self.n(), self.entries())?;
        Ok(Matrix::from_raw(self.ring(), self.n(), inv))
    }
}

/// `U⁻¹ A U`.
pub fn conjugate(a: &Matrix, u: &Matrix) -> Result<Matrix> {
    let ui = u.inverse()?;
    Ok(&(&ui * a) * u)
}

/// Completes a pure span to a basis of the ambient module with standard
/// basis vectors, taken in ascending index order.
pub fn complement(s: &ColumnSpan) -> Result<ColumnSpan> {
    if !s.pure {
        return Err(Error::ImpureSpan);
    }
    let ring = s.ring;
    let n = s.dim;
    let mut all = s.generators.clone();
    let mut chosen = Vec::new();
    for i in 0..n {
        if all.len() == n {
            break;
        }
        let e: Vector = (0..n).map(|k| if k == i { ring.one() } else { ring.zero() }).collect();
        all.push(e.clone());
        if elim::residue_rank(ring, n, &all) == all.len() {
            chosen.push(e);
        } else {
            all.pop();
        }
    }
    debug_assert_eq!(all.len(), n);
    Ok(ColumnSpan {
        ring,
        dim: n,
        generators: chosen,
        pure: true,
    })
}

/// A labeled segment of a [`SplitBasis`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub label: String,
    pub start: usize,
    pub len: usize,
}

/// An ordered basis of the ambient free module cut into consecutive labeled
/// segments, e.g. `FIX | Q | KER`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitBasis {
    basis: Matrix,
    inverse: Matrix,
    segments: Vec<Segment>,
}

impl SplitBasis {
    pub fn new(ring: Ring, n: usize, parts: Vec<(&str, Vec<Vector>)>) -> Result<SplitBasis> {
        let mut vectors = Vec::with_capacity(n);
        let mut segments = Vec::new();
        for (label, vs) in parts {
            segments.push(Segment {
                label: label.to_string(),
                start: vectors.len(),
                len: vs.len(),
            });
            vectors.extend(vs);
        }
        if vectors.len() != n {
            return Err(Error::NotABasis);
        }
        let basis = Matrix::from_columns(ring, &vectors)?;
        let inverse = basis.inverse().map_err(|_| Error::NotABasis)?;
        Ok(SplitBasis {
            basis,
            inverse,
            segments,
        })
    }

    /// Basis matrix: column `j` is the `j`-th basis vector.
    pub fn matrix(&self) -> &Matrix {
        &self.basis
    }

    pub fn inverse(&self) -> &Matrix {
        &self.inverse
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn vector(&self, j: usize) -> Vector {
        self.basis.column(j)
    }

    pub fn segment(&self, label: &str) -> Option<&Segment> {
        self.segments.iter().find(|s| s.label == label)
    }

    pub fn span(&self, label: &str) -> Option<ColumnSpan> {
        let s = self.segment(label)?;
        Some(ColumnSpan {
            ring: self.basis.ring(),
            dim: self.basis.n(),
            generators: (s.start..s.start + s.len).map(|j| self.vector(j)).collect(),
            pure: true,
        })
    }

    /// Express a matrix in this basis: `P⁻¹ A P`.
    pub fn coordinates_of(&self, a: &Matrix) -> Matrix {
        &(&self.inverse * a) * &self.basis
    }

    /// Map a coordinate matrix back to the standard basis: `P X P⁻¹`.
    pub fn from_coordinates(&self, x: &Matrix) -> Matrix {
        &(&self.basis * x) * &self.inverse
    }

    /// Projection onto the span of the given basis indices along the others.
    pub fn projection_onto(&self, indices: impl IntoIterator<Item = usize>) -> Matrix {
        let ring = self.basis.ring();
        let mut d = Matrix::zero(ring, self.basis.n());
        for j in indices {
            d.set(j, j, ring.one());
        }
        self.from_coordinates(&d)
    }

    /// Projection onto the named segment along all other segments.
    pub fn projection(&self, label: &str) -> Result<Matrix> {
        let s = self
            .segment(label)
            .ok_or_else(|| Error::PreconditionViolated(format!("no segment {label}")))?;
        Ok(self.projection_onto(s.start..s.start + s.len))
    }

    /// One projection per segment.
    pub fn peirce(&self) -> PeirceBasis {
        PeirceBasis {
            idempotents: self
                .segments
                .iter()
                .map(|s| self.projection_onto(s.start..s.start + s.len))
                .collect(),
        }
    }
}

/// Pairwise orthogonal idempotents summing to the identity.
#[derive(Clone, Debug)]
pub struct PeirceBasis {
    idempotents: Vec<Matrix>,
}

impl PeirceBasis {
    pub fn new(idempotents: Vec<Matrix>) -> Result<PeirceBasis> {
        let first = idempotents
            .first()
            .ok_or_else(|| Error::PreconditionViolated("empty Peirce basis".into()))?;
        let (ring, n) = (first.ring(), first.n());
        let mut sum = Matrix::zero(ring, n);
        for (i, e) in idempotents.iter().enumerate() {
            if e.ring() != ring || e.n() != n {
                return Err(Error::RingMismatch(ring.to_string(), e.ring().to_string()));
            }
            if !e.is_idempotent() {
                return Err(Error::NotIdempotent);
            }
            for f in &idempotents[i + 1..] {
                if !(e * f).is_zero() || !(f * e).is_zero() {
                    return Err(Error::PreconditionViolated("idempotents are not orthogonal".into()));
                }
            }
            sum = &sum + e;
        }
        if !sum.is_identity() {
            return Err(Error::PreconditionViolated("idempotents do not sum to 1".into()));
        }
        Ok(PeirceBasis { idempotents })
    }

    pub fn idempotents(&self) -> &[Matrix] {
        &self.idempotents
    }
}
