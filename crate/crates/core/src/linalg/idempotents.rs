//! The idempotent toolkit: certificates, nested and perturbed idempotents,
//! the kernel idempotent that avoids the fixed space, and minimum-valuation
//! dependence witnesses.

use crate::error::{Error, Result};
use crate::linalg::elim;
use crate::linalg::matrix::{Matrix, Vector};
use crate::linalg::spaces::{complement, ColumnSpan, SplitBasis};
use crate::rings::{Ring, Scalar, Valuation};

/// The three equivalent idempotency conditions evaluated independently,
/// together with the kernel and fixed-space bases.
#[derive(Clone, Debug)]
pub struct IdempotentCertificate {
    /// `A² = A`
    pub squares_to_itself: bool,
    /// `ker(A) ⊕ fix(A)` is the whole module.
    pub kernel_fix_direct_sum: bool,
    /// `im(A) = fix(A)`
    pub image_equals_fix: bool,
    pub rank: usize,
    pub kernel: ColumnSpan,
    pub fix: ColumnSpan,
}

impl IdempotentCertificate {
    pub fn is_idempotent(&self) -> bool {
        self.squares_to_itself
    }

    /// Idempotent with a rank-one kernel.
    pub fn is_coprimitive(&self) -> bool {
        self.squares_to_itself && self.kernel.rank() == 1
    }
}

pub fn idempotent_certificate(a: &Matrix) -> Result<IdempotentCertificate> {
    let squares_to_itself = a.is_idempotent();
    let kernel = a.kernel_basis();
    let fix = a.fix_basis();
    let kernel_fix_direct_sum = kernel.complements(&fix);
    let mut cols = fix.generators().to_vec();
    cols.extend(a.columns());
    let image_equals_fix = elim::rank_of_columns(a.ring(), a.n(), &cols) == fix.rank();
    if squares_to_itself != kernel_fix_direct_sum || squares_to_itself != image_equals_fix {
        return Err(Error::InternalInconsistency(format!(
            "idempotency conditions disagree on {a}: square {squares_to_itself}, \
             direct sum {kernel_fix_direct_sum}, image {image_equals_fix}"
        )));
    }
    Ok(IdempotentCertificate {
        squares_to_itself,
        kernel_fix_direct_sum,
        image_equals_fix,
        rank: a.n() - kernel.rank(),
        kernel,
        fix,
    })
}

/// Splitting of an idempotent `f` along a nested idempotent `e`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NestedSplit {
    /// Idempotent with the image of `e` and `e0 = e0 f = f e0`.
    pub e0: Matrix,
    /// `f - e0`, idempotent and orthogonal to `e0`.
    pub f0: Matrix,
}

/// Given idempotents with `im(e) ⊆ im(f)`, returns `e0 = ef` and
/// `f0 = f - e0` so that `im(f) = im(e0) ⊕ im(f0)`.
pub fn idempotent_between(e: &Matrix, f: &Matrix) -> Result<NestedSplit> {
    if !e.is_idempotent() || !f.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    if &(f * e) != e {
        return Err(Error::NotNested);
    }
    let e0 = e * f;
    let f0 = f - &e0;
    let ok = e0.is_idempotent()
        && f0.is_idempotent()
        && (&e0 * &f0).is_zero()
        && (&f0 * &e0).is_zero()
        && (&e0 * f) == e0
        && (f * &e0) == e0
        && e0.image_basis().same_span(&e.image_basis())
        && e0.rank() + f0.rank() == f.rank();
    if !ok {
        return Err(Error::InternalInconsistency("nested split failed its checks".into()));
    }
    Ok(NestedSplit { e0, f0 })
}

/// `e + z` for an idempotent `e` and a square-zero `z` with `ez + ze = z`
/// (e.g. `z ∈ eR(1-e) ∪ (1-e)Re`).
pub fn orthogonal_sum_idempotent(e: &Matrix, z: &Matrix) -> Result<Matrix> {
    if !e.is_idempotent() {
        return Err(Error::NotIdempotent);
    }
    if !(z * z).is_zero() || &(&(e * z) + &(z * e)) != z {
        return Err(Error::BadPerturbation);
    }
    let s = e + z;
    if !s.is_idempotent() {
        return Err(Error::InternalInconsistency("e + z is not idempotent".into()));
    }
    Ok(s)
}

/// Projection onto `ker(a)` along the standard complement of `ker(a)`.
pub fn kernel_projection(a: &Matrix) -> Result<Matrix> {
    let ker = a.kernel_basis();
    if ker.is_empty() {
        return Err(Error::Injective);
    }
    let comp = complement(&ker)?;
    let basis = SplitBasis::new(
        a.ring(),
        a.n(),
        vec![("KER", ker.generators().to_vec()), ("REST", comp.generators().to_vec())],
    )?;
    basis.projection("KER")
}

/// Idempotent `e = f - f a` with `im(e) = ker(a)` and `fix(a) ⊆ ker(e)`,
/// where `f` is the kernel projection.
pub fn kernel_idempotent_avoiding_fix(a: &Matrix) -> Result<Matrix> {
    let f = kernel_projection(a)?;
    Ok(&f - &(&f * a))
}

/// `x_index = Σ x_i b_i` over the remaining indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependenceWitness {
    /// 0-based index of the dependent vector.
    pub index: usize,
    /// `(i, b_i)` for every `i != index`, ascending.
    pub coefficients: Vec<(usize, Scalar)>,
}

impl DependenceWitness {
    pub fn coefficient(&self, i: usize) -> Option<&Scalar> {
        self.coefficients.iter().find(|(j, _)| *j == i).map(|(_, b)| b)
    }

    /// Checks the identity exactly.
    pub fn holds(&self, ring: Ring, xs: &[Vector]) -> bool {
        let dim = xs.first().map_or(0, |x| x.len());
        let mut rhs = vec![ring.zero(); dim];
        for (i, b) in &self.coefficients {
            if !ring.contains(b) {
                return false;
            }
            for (r, x) in rhs.iter_mut().zip(&xs[*i]) {
                *r = ring.add(r, &ring.mul(x, b));
            }
        }
        rhs == xs[self.index]
    }
}

/// For linearly dependent vectors over `Z_(p)` (or a field), finds an index
/// `ℓ` and ring coefficients with `x_ℓ = Σ_{i≠ℓ} x_i b_i`. The dependence is
/// normalized by the minimum valuation of its coefficients and `ℓ` is the
/// smallest index with a unit coefficient.
pub fn min_valuation_dependence(ring: Ring, xs: &[Vector]) -> Result<DependenceWitness> {
    if xs.is_empty() {
        return Err(Error::PreconditionViolated("no vectors".into()));
    }
    let dim = xs[0].len();
    if let Some(x) = xs.iter().find(|x| x.len() != dim) {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: x.len(),
        });
    }
    let rows: Vec<Vector> = (0..dim).map(|i| xs.iter().map(|x| x[i].clone()).collect()).collect();
    let kernel = elim::kernel_of_rows(ring, &rows, xs.len());
    let Some(mut a) = kernel.into_iter().next() else {
        return Err(Error::Independent);
    };
    let s = a
        .iter()
        .filter_map(|x| ring.valuation(x).finite())
        .min()
        .expect("kernel vector is non-zero");
    if s > 0 {
        let ps = ring.prime_power(s);
        for x in a.iter_mut() {
            *x = ring.exact_div(x, &ps)?;
        }
    }
    let index = a
        .iter()
        .position(|x| ring.valuation(x) == Valuation::Finite(0))
        .expect("normalized dependence has a unit coefficient");
    let lead_inv = ring.inv(&a[index])?;
    let coefficients = a
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != index)
        .map(|(i, x)| (i, ring.neg(&ring.mul(x, &lead_inv))))
        .collect();
    Ok(DependenceWitness { index, coefficients })
}
