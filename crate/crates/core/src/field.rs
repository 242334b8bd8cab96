//! Factorization of singular matrices over a field into at most
//! `n - dim fix(A)` idempotents of rank `n - 1`.
//!
//! Every step writes the current matrix as `A = B C` with `C` an idempotent
//! of rank `n - 1` and `fix(A) ⊊ fix(B)`, emits `C`, and continues on `B`.
//! Three splitting steps cover all cases:
//!
//! * `dim ker(A) >= 2`: split along a line inside the kernel;
//! * `dim ker(A) = 1` and `ker(A) ≠ ker(A²)`: split along the kernel;
//! * `dim ker(A) = 1`, `ker(A) = ker(A²)`, `A² ≠ A`: the Peirce-triple
//!   construction with a rank-one transfer pair `y, z`.

use crate::error::{Error, Result};
use crate::factorization::{BlockFactorization, IdempotentFactorization};
use crate::linalg::{complement, kernel_projection, product, ColumnSpan, Matrix, SplitBasis, Vector};
use crate::rings::Ring;

/// `A = left · right`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Split {
    pub left: Matrix,
    pub right: Matrix,
}

/// For an idempotent `e` with `A e = 0`: `B = e + (1 - e) A`,
/// `C = 1 - e + e A`; then `A = B C` and `C² = C`.
pub fn split_along_kernel_idempotent(a: &Matrix, e: &Matrix) -> Split {
    let one = Matrix::identity(a.ring(), a.n());
    let one_minus_e = &one - e;
    let left = e + &(&one_minus_e * a);
    let right = &one_minus_e + &(e * a);
    Split { left, right }
}

fn kernel_rank(a: &Matrix) -> usize {
    a.n() - a.rank()
}

/// Both fixed spaces strictly contain `fix(a)`.
fn fix_grows(a: &Matrix, split: &Split) -> bool {
    let fa = a.fix_basis();
    [&split.left, &split.right].iter().all(|m| {
        let fm = m.fix_basis();
        fm.rank() > fa.rank() && fm.contains_span(&fa)
    })
}

fn check_split(a: &Matrix, split: &Split, what: &str) -> Result<()> {
    let ok = &(&split.left * &split.right) == a
        && split.right.is_idempotent()
        && kernel_rank(&split.right) == 1
        && fix_grows(a, split);
    if ok {
        Ok(())
    } else {
        Err(Error::ConstructionFailure(format!(
            "{what} produced an invalid split of {a}"
        )))
    }
}

/// Split for `dim ker(A) >= 2`: `e` projects onto the first kernel basis
/// vector along its standard complement.
pub fn split_decomposable_kernel(a: &Matrix) -> Result<Split> {
    let ker = a.kernel_basis();
    if ker.rank() < 2 {
        return Err(Error::KernelTooSmall(ker.rank()));
    }
    let line = ColumnSpan::new(a.ring(), a.n(), vec![ker.generators()[0].clone()])?;
    let rest = complement(&line)?;
    let basis = SplitBasis::new(
        a.ring(),
        a.n(),
        vec![
            ("LINE", line.generators().to_vec()),
            ("REST", rest.generators().to_vec()),
        ],
    )?;
    let e = basis.projection("LINE")?;
    let split = split_along_kernel_idempotent(a, &e);
    check_split(a, &split, "split_decomposable_kernel")?;
    Ok(split)
}

/// Split for a rank-one kernel with `ker(A) ⊊ ker(A²)`: `e` projects onto
/// `ker(A)` along its standard complement, so `ker(C) = ker(A)`.
pub fn split_unstable_kernel(a: &Matrix) -> Result<Split> {
    let k = kernel_rank(a);
    if k != 1 {
        return Err(Error::PreconditionViolated(format!("kernel rank is {k}, expected 1")));
    }
    if (a * a).rank() == a.rank() {
        return Err(Error::PreconditionViolated("ker(A) = ker(A²)".into()));
    }
    let e = kernel_projection(a)?;
    let split = split_along_kernel_idempotent(a, &e);
    check_split(a, &split, "split_unstable_kernel")?;
    Ok(split)
}

/// Scales `v` so that its first non-zero coordinate is 1.
fn monic(ring: Ring, v: &[crate::Scalar]) -> Result<Vector> {
    let lead = v
        .iter()
        .find(|x| !x.is_zero())
        .ok_or_else(|| Error::ConstructionFailure("zero basis vector".into()))?;
    let inv = ring.inv(lead)?;
    Ok(v.iter().map(|x| ring.mul(x, &inv)).collect())
}

/// Split for a rank-one kernel with `ker(A) = ker(A²)` and `A` not
/// idempotent.
///
/// With `k` spanning `ker(A)`, `F` a basis of `fix(A)` extended inside
/// `im(A)` by `X` and one more vector `w`, the basis `k | F | X | w` gives
/// the Peirce triple `e1` (onto `k`), `e2` (onto `F ⊕ X`), `e3` (onto `w`).
/// `y` sends `k ↦ w` and `z` sends `w ↦ k` (both zero on the other basis
/// vectors), so `y z = e3`, and
/// `B = e3 + A e2 + (A - 1) y`, `C = 1 - e1 + z`.
pub fn split_stable_rank1(a: &Matrix) -> Result<Split> {
    let ring = a.ring();
    if !ring.is_field() {
        return Err(Error::NotAField);
    }
    let n = a.n();
    let k = kernel_rank(a);
    if k != 1 {
        return Err(Error::PreconditionViolated(format!("kernel rank is {k}, expected 1")));
    }
    if (a * a).rank() != a.rank() {
        return Err(Error::PreconditionViolated("ker(A) ≠ ker(A²)".into()));
    }
    if a.is_idempotent() {
        return Err(Error::PreconditionViolated("A is idempotent".into()));
    }
    let kvec = monic(ring, &a.kernel_basis().generators()[0])?;
    let fix = a.fix_basis();
    let mut span = fix.generators().to_vec();
    let mut rest = Vec::new();
    for c in a.image_basis().generators() {
        span.push(c.clone());
        if ColumnSpan::new(ring, n, span.clone()).is_ok() {
            rest.push(c.clone());
        } else {
            span.pop();
        }
    }
    let Some((w, extra)) = rest.split_first() else {
        return Err(Error::ConstructionFailure("image equals the fixed space".into()));
    };
    let w = monic(ring, w)?;
    let d = fix.rank();
    let basis = SplitBasis::new(
        ring,
        n,
        vec![
            ("KER", vec![kvec]),
            ("FIX", fix.generators().to_vec()),
            ("EXTRA", extra.to_vec()),
            ("W", vec![w]),
        ],
    )
    .map_err(|_| Error::ConstructionFailure("kernel and image do not span".into()))?;
    let e1 = basis.projection("KER")?;
    let e2 = basis.projection_onto(1..1 + d + extra.len());
    let e3 = basis.projection("W")?;

    let mut y_coords = Matrix::zero(ring, n);
    y_coords.set(n - 1, 0, ring.one());
    let y = basis.from_coordinates(&y_coords);
    let z = basis.from_coordinates(&y_coords.transpose());
    if &y * &z != e3 {
        return Err(Error::ConstructionFailure("y z ≠ e3".into()));
    }

    let one = Matrix::identity(ring, n);
    let left = &(&e3 + &(a * &e2)) + &(&(a - &one) * &y);
    let right = &(&one - &e1) + &z;
    let split = Split { left, right };
    check_split(a, &split, "split_stable_rank1")?;
    if !split.right.kernel_basis().same_span(&a.kernel_basis()) {
        return Err(Error::ConstructionFailure("ker(C) ≠ ker(A)".into()));
    }
    Ok(split)
}

/// Which splitting step applies to a singular matrix that is not itself a
/// rank `n - 1` idempotent.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    DecomposableKernel,
    UnstableKernel,
    StableRankOne,
}

/// `None` for rank `n - 1` idempotents (terminal) and non-singular input.
pub fn classify(a: &Matrix) -> Option<SplitKind> {
    let k = kernel_rank(a);
    if k == 0 {
        return None;
    }
    if k >= 2 {
        return Some(SplitKind::DecomposableKernel);
    }
    if a.is_idempotent() {
        return None;
    }
    if (a * a).rank() < a.rank() {
        Some(SplitKind::UnstableKernel)
    } else {
        Some(SplitKind::StableRankOne)
    }
}

/// Factors a singular matrix over `Q` or `F_p` into at most
/// `n - dim fix(A)` idempotents of rank `n - 1`.
pub fn factor_singular_field(a: &Matrix) -> Result<IdempotentFactorization> {
    let ring = a.ring();
    if !ring.is_field() {
        return Err(Error::NotAField);
    }
    if !a.is_singular() {
        return Err(Error::NotSingular);
    }
    let n = a.n();
    let bound = n - a.fix_basis().rank();
    let mut right_factors = Vec::new();
    let mut current = a.clone();
    loop {
        let split = match classify(&current) {
            None => break,
            Some(SplitKind::DecomposableKernel) => split_decomposable_kernel(&current)?,
            Some(SplitKind::UnstableKernel) => split_unstable_kernel(&current)?,
            Some(SplitKind::StableRankOne) => split_stable_rank1(&current)?,
        };
        right_factors.push(split.right);
        current = split.left;
        if right_factors.len() >= bound {
            return Err(Error::ConstructionFailure(format!(
                "length bound {bound} exceeded for {a}"
            )));
        }
    }
    let mut factors = vec![current];
    factors.extend(right_factors.into_iter().rev());
    let f = IdempotentFactorization::certify(a.clone(), factors, bound);
    if !f.is_valid() {
        return Err(Error::ConstructionFailure(format!("certificate failed for {a}")));
    }
    Ok(f)
}

/// Factors `diag(blocks)` blockwise: every singular block is factored on its
/// own, shorter factor lists are padded with identities, and the `t`-th
/// factors are assembled into a block-diagonal matrix. The length is at most
/// the largest block size.
pub fn factor_block_diagonal(blocks: &[Matrix]) -> Result<BlockFactorization> {
    let target = Matrix::block_diagonal(blocks)?;
    if !target.ring().is_field() {
        return Err(Error::NotAField);
    }
    let mut per_block = Vec::with_capacity(blocks.len());
    for (i, b) in blocks.iter().enumerate() {
        if b.is_identity() {
            per_block.push(Vec::new());
        } else if b.is_singular() {
            per_block.push(factor_singular_field(b)?.factors);
        } else {
            return Err(Error::PreconditionViolated(format!(
                "block {i} is invertible but not the identity"
            )));
        }
    }
    let len = per_block.iter().map(Vec::len).max().unwrap_or(0);
    if len == 0 {
        return Err(Error::AllInvertible);
    }
    let mut factors = Vec::with_capacity(len);
    let mut block_ranks = Vec::with_capacity(len);
    for t in 0..len {
        let parts: Vec<Matrix> = blocks
            .iter()
            .zip(&per_block)
            .map(|(b, fs)| fs.get(t).cloned().unwrap_or_else(|| Matrix::identity(b.ring(), b.n())))
            .collect();
        block_ranks.push(parts.iter().map(Matrix::rank).collect());
        factors.push(Matrix::block_diagonal(&parts)?);
    }
    let result = BlockFactorization {
        product: product(&factors).as_ref() == Some(&target),
        idempotent: factors.iter().map(Matrix::is_idempotent).collect(),
        block_sizes: blocks.iter().map(Matrix::n).collect(),
        bound: blocks.iter().map(Matrix::n).max().unwrap_or(0),
        target,
        factors,
        block_ranks,
    };
    if !result.is_valid() {
        return Err(Error::ConstructionFailure(
            "block factorization failed its checks".into(),
        ));
    }
    Ok(result)
}
