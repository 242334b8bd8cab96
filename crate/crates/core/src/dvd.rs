//! Factorization of singular matrices over `Z_(p)` into at most `2n - 2`
//! idempotents of rank `n - 1`.
//!
//! The pipeline keeps a left and a right stack of emitted factors around a
//! shrinking middle term. Kernel rank is first reduced to one; a fix-free
//! middle term is split once so that it gains a fixed vector; from then on
//! every split enlarges the fixed module by at least one rank and emits at
//! most two factors, until the middle term is itself a rank `n - 1`
//! idempotent.

use crate::error::{Error, Result};
use crate::factorization::IdempotentFactorization;
use crate::field::{split_along_kernel_idempotent, Split};
use crate::linalg::{complement, min_valuation_dependence, ColumnSpan, DependenceWitness, Matrix, SplitBasis, Vector};
use crate::rings::{Ring, RingKind, Scalar};

/// Coordinates of a kernel-rank-one map in a basis `FIX | Q | KER`.
///
/// Indices below are 0-based: `fix` occupies `0..d`, `Q` occupies
/// `d..n-1`, and the kernel vector is basis vector `n - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdaptedBasis {
    pub basis: SplitBasis,
    pub d: usize,
    /// `coefficients.get(i, j)` is the `e_i`-coordinate of `A e_j`.
    pub coefficients: Matrix,
    /// `v[i - d]` holds the `Q`-coordinates of row `i`, for `i` in `d..n`.
    pub v: Vec<Vector>,
    /// Dependence among the `v`; `witness.index + d` is `ℓ`.
    pub witness: DependenceWitness,
}

impl AdaptedBasis {
    pub fn n(&self) -> usize {
        self.coefficients.n()
    }

    /// `ℓ` as a 0-based basis index.
    pub fn ell(&self) -> usize {
        self.d + self.witness.index
    }

    /// `b_i` for a 0-based basis index `i`; zero outside `I`.
    pub fn b(&self, i: usize) -> Scalar {
        let ring = self.coefficients.ring();
        if i < self.d {
            return ring.zero();
        }
        self.witness
            .coefficient(i - self.d)
            .cloned()
            .unwrap_or_else(|| ring.zero())
    }

    /// `a_{ℓ,j} = Σ_{i∈I} a_{i,j} b_i` for every `j` in `Q`.
    pub fn dependence_holds(&self) -> bool {
        let ring = self.coefficients.ring();
        let n = self.n();
        let ell = self.ell();
        (self.d..n - 1).all(|j| {
            let rhs = (self.d..n).filter(|&i| i != ell).fold(ring.zero(), |acc, i| {
                ring.add(&acc, &ring.mul(self.coefficients.get(i, j), &self.b(i)))
            });
            rhs == *self.coefficients.get(ell, j)
        })
    }
}

fn require_local(a: &Matrix) -> Result<()> {
    if a.ring().kind() != RingKind::Zp {
        return Err(Error::WrongRing {
            expected: "Z_(p)".into(),
            found: a.ring().to_string(),
        });
    }
    Ok(())
}

fn kernel_rank(a: &Matrix) -> usize {
    a.n() - a.rank()
}

/// Splits off a rank `n - 1` idempotent along the first kernel basis vector.
/// `A = G H`, `ker(H)` is that vector's span, and both fixed modules strictly
/// contain `fix(A)`.
pub fn reduce_kernel_rank(a: &Matrix) -> Result<Split> {
    let ker = a.kernel_basis();
    if ker.rank() < 2 {
        return Err(Error::KernelTooSmall(ker.rank()));
    }
    let ring = a.ring();
    let n = a.n();
    let line = ColumnSpan::new(ring, n, vec![ker.generators()[0].clone()])?;
    let rest = complement(&line)?;
    let basis = SplitBasis::new(
        ring,
        n,
        vec![
            ("LINE", line.generators().to_vec()),
            ("REST", rest.generators().to_vec()),
        ],
    )?;
    let e = basis.projection("LINE")?;
    let split = split_along_kernel_idempotent(a, &e);
    if &(&split.left * &split.right) != a || !split.right.is_idempotent() || kernel_rank(&split.right) != 1 {
        return Err(Error::ConstructionFailure(format!("kernel reduction failed for {a}")));
    }
    Ok(split)
}

pub fn adapted_basis(a: &Matrix) -> Result<AdaptedBasis> {
    let ring = a.ring();
    let n = a.n();
    let ker = a.kernel_basis();
    if ker.rank() != 1 {
        return Err(Error::PreconditionViolated(format!(
            "kernel rank is {}, expected 1",
            ker.rank()
        )));
    }
    let fix = a.fix_basis();
    let d = fix.rank();
    let mut both = fix.generators().to_vec();
    both.extend(ker.generators().iter().cloned());
    let q = complement(&ColumnSpan::new(ring, n, both)?)?;
    let basis = SplitBasis::new(
        ring,
        n,
        vec![
            ("FIX", fix.generators().to_vec()),
            ("Q", q.generators().to_vec()),
            ("KER", ker.generators().to_vec()),
        ],
    )?;
    let coefficients = basis.coordinates_of(a);
    let v: Vec<Vector> = (d..n)
        .map(|i| (d..n - 1).map(|j| coefficients.get(i, j).clone()).collect())
        .collect();
    let witness = min_valuation_dependence(ring, &v)?;
    let adapted = AdaptedBasis {
        basis,
        d,
        coefficients,
        v,
        witness,
    };
    if !adapted.dependence_holds() {
        return Err(Error::InternalInconsistency(
            "dependence relation fails in adapted basis".into(),
        ));
    }
    Ok(adapted)
}

/// Factors produced by one dge1 step, `A = β γ` or `A = β γ δ`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Dge1Split {
    pub beta: Matrix,
    pub gamma: Matrix,
    pub delta: Option<Matrix>,
}

impl Dge1Split {
    pub fn product(&self) -> Matrix {
        let bg = &self.beta * &self.gamma;
        match &self.delta {
            Some(delta) => &bg * delta,
            None => bg,
        }
    }
}

fn unit_column(ring: Ring, n: usize, i: usize) -> Vector {
    (0..n).map(|k| if k == i { ring.one() } else { ring.zero() }).collect()
}

fn set_column(m: &mut Matrix, j: usize, col: &[Scalar]) {
    for (i, x) in col.iter().enumerate() {
        m.set(i, j, x.clone());
    }
}

/// `β` for `ℓ ≠ n` in adapted coordinates: identity on `fix`, `e_ℓ ↦ 0`,
/// `e_j ↦ e_j + e_ℓ b_j` for `j ∈ I`.
fn beta_case1(ab: &AdaptedBasis) -> Matrix {
    let ring = ab.coefficients.ring();
    let n = ab.n();
    let ell = ab.ell();
    let mut beta = Matrix::identity(ring, n);
    beta.set(ell, ell, ring.zero());
    for j in ab.d..n {
        if j != ell {
            beta.set(ell, j, ab.b(j));
        }
    }
    beta
}

/// Column `j` of the coefficients with its `e_ℓ` entry removed.
fn column_without_ell(ab: &AdaptedBasis, j: usize) -> Vector {
    let ring = ab.coefficients.ring();
    let mut col = ab.coefficients.column(j);
    col[ab.ell()] = ring.zero();
    col
}

/// The `ℓ = n` construction: conjugate by `η = 1 + e_n bᵀ` so that the image
/// avoids `e_n`, take `β` (identity except `e_n ↦ α'(e_{d+1}) - e_{d+1}`) and
/// `γ` (`α'` except `e_{d+1} ↦ e_{d+1} + e_n`), and conjugate back.
fn split_case2(ab: &AdaptedBasis) -> Result<Dge1Split> {
    let ring = ab.coefficients.ring();
    let n = ab.n();
    let d = ab.d;
    let mut eta = Matrix::identity(ring, n);
    for i in 0..n - 1 {
        eta.set(n - 1, i, ab.b(i));
    }
    let eta_inv = eta.inverse()?;
    let alpha = &(&eta_inv * &ab.coefficients) * &eta;
    if (0..n).any(|j| !alpha.get(n - 1, j).is_zero()) {
        return Err(Error::InternalInconsistency("conjugated image meets e_n".into()));
    }
    let mut beta = Matrix::identity(ring, n);
    let mut last = alpha.column(d);
    last[d] = ring.sub(&last[d], &ring.one());
    set_column(&mut beta, n - 1, &last);
    let mut gamma = alpha;
    let mut col = unit_column(ring, n, d);
    col[n - 1] = ring.one();
    set_column(&mut gamma, d, &col);
    let back = |x: &Matrix| ab.basis.from_coordinates(&(&(&eta * x) * &eta_inv));
    Ok(Dge1Split {
        beta: back(&beta),
        gamma: back(&gamma),
        delta: None,
    })
}

fn check_dge1(a: &Matrix, split: &Dge1Split, what: &str) -> Result<()> {
    let fa = a.fix_basis();
    let fg = split.gamma.fix_basis();
    let idem_ok = std::iter::once(&split.beta)
        .chain(split.delta.as_ref())
        .all(|m| m.is_idempotent() && kernel_rank(m) == 1);
    let ok =
        &split.product() == a && idem_ok && split.gamma.is_singular() && fg.rank() > fa.rank() && fg.contains_span(&fa);
    if ok {
        Ok(())
    } else {
        Err(Error::ConstructionFailure(format!(
            "{what} produced an invalid split of {a}"
        )))
    }
}

/// Split of a fix-free map with rank-one kernel: `A = β γ`, `β` a rank
/// `n - 1` idempotent and `fix(γ) ≠ 0`.
pub fn dge1_split_fixfree(a: &Matrix, ab: &AdaptedBasis) -> Result<Dge1Split> {
    if ab.d != 0 {
        return Err(Error::PreconditionViolated(format!("fixed module has rank {}", ab.d)));
    }
    let ring = a.ring();
    let n = a.n();
    let ell = ab.ell();
    let split = if ell == n - 1 {
        split_case2(ab)?
    } else {
        let beta = beta_case1(ab);
        let mut gamma = Matrix::zero(ring, n);
        for j in 0..n - 1 {
            let mut col = column_without_ell(ab, j);
            if j == ell {
                col[ell] = ring.one();
            }
            set_column(&mut gamma, j, &col);
        }
        Dge1Split {
            beta: ab.basis.from_coordinates(&beta),
            gamma: ab.basis.from_coordinates(&gamma),
            delta: None,
        }
    };
    check_dge1(a, &split, "dge1_split_fixfree")?;
    Ok(split)
}

/// Split of a map with rank-one kernel and `1 <= d < n - 1`. For `ℓ ≠ n`
/// this is `A = β γ δ` with `δ` the projection onto `fix ⊕ Q` along the
/// kernel; for `ℓ = n` it is `A = β γ`.
pub fn dge1_split_general(a: &Matrix, ab: &AdaptedBasis) -> Result<Dge1Split> {
    let n = a.n();
    if ab.d == 0 || ab.d + 1 >= n {
        return Err(Error::PreconditionViolated(format!(
            "fixed module has rank {}, expected 1..{}",
            ab.d,
            n - 1
        )));
    }
    let ring = a.ring();
    let ell = ab.ell();
    let split = if ell == n - 1 {
        split_case2(ab)?
    } else {
        let beta = beta_case1(ab);
        let mut gamma = Matrix::identity(ring, n);
        for j in ab.d..n - 1 {
            set_column(&mut gamma, j, &column_without_ell(ab, j));
        }
        let mut delta = Matrix::identity(ring, n);
        delta.set(n - 1, n - 1, ring.zero());
        Dge1Split {
            beta: ab.basis.from_coordinates(&beta),
            gamma: ab.basis.from_coordinates(&gamma),
            delta: Some(ab.basis.from_coordinates(&delta)),
        }
    };
    check_dge1(a, &split, "dge1_split_general")?;
    Ok(split)
}

/// Length bound for a singular `n x n` matrix with fixed module of rank `d`.
pub fn dvd_bound(n: usize, d: usize) -> usize {
    if n == 1 {
        1
    } else if d >= 1 {
        2 * (n - d) - 1
    } else {
        2 * n - 2
    }
}

pub fn factor_singular_dvd(a: &Matrix) -> Result<IdempotentFactorization> {
    require_local(a)?;
    if !a.is_singular() {
        return Err(Error::NotSingular);
    }
    let n = a.n();
    let bound = dvd_bound(n, a.fix_basis().rank());
    let mut left = Vec::new();
    let mut right = Vec::new();
    let mut current = a.clone();
    loop {
        if left.len() + right.len() >= bound {
            return Err(Error::ConstructionFailure(format!(
                "length bound {bound} exceeded for {a}"
            )));
        }
        if kernel_rank(&current) >= 2 {
            let split = reduce_kernel_rank(&current)?;
            right.push(split.right);
            current = split.left;
            continue;
        }
        if current.is_idempotent() {
            break;
        }
        let ab = adapted_basis(&current)?;
        if ab.d == 0 {
            let split = dge1_split_fixfree(&current, &ab)?;
            left.push(split.beta);
            current = split.gamma;
        } else if ab.d + 1 < n {
            let split = dge1_split_general(&current, &ab)?;
            left.push(split.beta);
            right.extend(split.delta);
            current = split.gamma;
        } else {
            return Err(Error::ConstructionFailure(format!(
                "fixed module of rank n - 1 but {current} is not idempotent"
            )));
        }
    }
    let mut factors = left;
    factors.push(current);
    factors.extend(right.into_iter().rev());
    let f = IdempotentFactorization::certify(a.clone(), factors, bound);
    if !f.is_valid() {
        return Err(Error::ConstructionFailure(format!("certificate failed for {a}")));
    }
    Ok(f)
}
