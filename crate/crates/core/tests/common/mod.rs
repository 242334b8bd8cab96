//! Contract checks and input generators shared by the property suites and
//! the acceptance run. Every check returns `Err(reason)` on violation.

#![allow(dead_code)]

use idemfact::linalg::{
    conjugate, idempotent_between, idempotent_certificate, kernel_idempotent_avoiding_fix, kernel_projection,
    min_valuation_dependence, orthogonal_sum_idempotent, Vector,
};
use idemfact::sample::MatrixSampler;
use idemfact::{Matrix, Ring};

pub type Check = Result<(), String>;

pub fn rings() -> Vec<Ring> {
    vec![
        Ring::rationals(),
        Ring::prime_field(2).unwrap(),
        Ring::prime_field(3).unwrap(),
        Ring::local(2).unwrap(),
        Ring::local(3).unwrap(),
    ]
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Check {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn is_zero_vec(v: &[idemfact::Scalar]) -> bool {
    v.iter().all(|x| x.is_zero())
}

/// Generators of `ker(m1) ∩ ker(m2)`: `K · ker(m2 K)` with `K` a kernel basis
/// of `m1`, using a zero-padded square matrix for the inner kernel.
pub fn joint_kernel(m1: &Matrix, m2: &Matrix) -> Vec<Vector> {
    let ring = m1.ring();
    let n = m1.n();
    let k = m1.kernel_basis().generators().to_vec();
    if k.is_empty() {
        return Vec::new();
    }
    let mut cols: Vec<Vector> = k.iter().map(|v| m2.apply(v)).collect();
    cols.resize(n, vec![ring.zero(); n]);
    let inner = Matrix::from_columns(ring, &cols).unwrap();
    inner
        .kernel_basis()
        .generators()
        .iter()
        .map(|c| {
            (0..n)
                .map(|i| {
                    k.iter()
                        .enumerate()
                        .fold(ring.zero(), |acc, (j, kj)| ring.add(&acc, &ring.mul(&kj[i], &c[j])))
                })
                .collect::<Vector>()
        })
        .filter(|v: &Vector| !is_zero_vec(v))
        .collect()
}

fn rank_of(ring: Ring, n: usize, vs: &[Vector]) -> usize {
    if vs.is_empty() {
        return 0;
    }
    let mut cols = vs.to_vec();
    let extra = cols.len().max(n);
    for c in cols.iter_mut() {
        c.resize(extra, ring.zero());
    }
    cols.resize(extra, vec![ring.zero(); extra]);
    Matrix::from_columns(ring, &cols).unwrap().rank()
}

fn all_fixed(m: &Matrix, vs: &[Vector]) -> bool {
    vs.iter().all(|v| m.apply(v) == *v)
}

fn all_killed(m: &Matrix, vs: &[Vector]) -> bool {
    vs.iter().all(|v| is_zero_vec(&m.apply(v)))
}

/// Direct sum: the ranks of the parts add up.
fn direct(ring: Ring, n: usize, u: &[Vector], v: &[Vector]) -> bool {
    let mut both = u.to_vec();
    both.extend_from_slice(v);
    rank_of(ring, n, &both) == rank_of(ring, n, u) + rank_of(ring, n, v)
}

/// An idempotent `e` with `a e = 0`: a projection onto the first kernel
/// vector or onto the whole kernel, perturbed by `e X (1 - e)`.
pub fn idempotent_in_kernel(s: &mut MatrixSampler, a: &Matrix) -> Option<Matrix> {
    let ring = a.ring();
    let n = a.n();
    let mut e = kernel_projection(a).ok()?;
    if s.index(2) == 0 && e.rank() > 1 {
        let ker = a.kernel_basis();
        let line = idemfact::linalg::ColumnSpan::new(ring, n, vec![ker.generators()[0].clone()]).unwrap();
        let rest = idemfact::linalg::complement(&line).unwrap();
        let basis = idemfact::linalg::SplitBasis::new(
            ring,
            n,
            vec![("L", line.generators().to_vec()), ("R", rest.generators().to_vec())],
        )
        .unwrap();
        e = basis.projection("L").unwrap();
    }
    let x = s.matrix(n);
    let one = Matrix::identity(ring, n);
    Some(&e + &(&(&e * &x) * &(&one - &e)))
}

/// Containments for the split `a = (e + (1-e)a)((1-e) + ea)` with `a e = 0`.
pub fn kernel_split_contract(a: &Matrix, e: &Matrix) -> Check {
    let ring = a.ring();
    let n = a.n();
    let one = Matrix::identity(ring, n);
    let b = e + &(&(&one - e) * a);
    let c = &(&one - e) + &(e * a);
    ensure(&(&b * &c) == a, || format!("b c ≠ a for a = {a}, e = {e}"))?;
    ensure(c.is_idempotent(), || format!("c not idempotent for a = {a}"))?;
    let im_e = e.image_basis().generators().to_vec();
    let fix_a = a.fix_basis().generators().to_vec();
    let ker_a_not_e = joint_kernel(a, e);
    ensure(all_killed(&b, &ker_a_not_e), || "ker(a) ∩ (1-e)R ⊄ ker(b)".into())?;
    ensure(
        all_fixed(&b, &im_e) && all_fixed(&b, &fix_a) && direct(ring, n, &im_e, &fix_a),
        || "eR ⊕ fix(a) ⊄ fix(b)".into(),
    )?;
    ensure(all_killed(&c, &im_e) && im_e.len() + c.rank() == n, || {
        "eR ≠ ker(c)".into()
    })?;
    ensure(
        all_fixed(&c, &fix_a) && all_fixed(&c, &ker_a_not_e) && direct(ring, n, &fix_a, &ker_a_not_e),
        || "fix(a) ⊕ (ker(a) ∩ (1-e)R) ⊄ fix(c)".into(),
    )?;
    if e.rank() == n - a.rank() {
        let a2 = a * a;
        let p = joint_kernel(&a2, e);
        let q: Vec<Vector> = p
            .iter()
            .map(|x| x.iter().zip(a.apply(x)).map(|(u, v)| ring.add(u, &v)).collect())
            .collect();
        ensure(all_killed(&b, &p), || "p ⊄ ker(b)".into())?;
        ensure(all_fixed(&c, &q) && direct(ring, n, &q, &fix_a), || {
            "q ⊕ fix(a) ⊄ fix(c)".into()
        })?;
    }
    Ok(())
}

/// `e = f - f a` spans the kernel of `a` and kills `fix(a)`.
pub fn avoiding_fix_contract(a: &Matrix) -> Check {
    let e = kernel_idempotent_avoiding_fix(a).map_err(|err| format!("{a}: {err}"))?;
    ensure(e.is_idempotent(), || format!("e not idempotent for {a}"))?;
    ensure((a * &e).is_zero() && e.rank() == a.n() - a.rank(), || {
        format!("eR ≠ ker(a) for {a}")
    })?;
    ensure(all_killed(&e, a.fix_basis().generators()), || {
        format!("fix(a) ⊄ (1-e)R for {a}")
    })
}

/// The three idempotency criteria agree, and agree with `a² = a`.
pub fn certificate_agreement(a: &Matrix) -> Check {
    let cert = idempotent_certificate(a).map_err(|err| format!("{a}: {err}"))?;
    let squares = &(a * a) == a;
    ensure(
        cert.squares_to_itself == squares
            && cert.kernel_fix_direct_sum == squares
            && cert.image_equals_fix == squares
            && cert.rank == a.rank(),
        || format!("certificate disagrees for {a}"),
    )
}

/// A random idempotent: `U D U⁻¹` with `D` a 0/1 diagonal, perturbed by
/// `e X (1 - e)`.
pub fn random_idempotent(s: &mut MatrixSampler, n: usize) -> Matrix {
    let ring = s.ring();
    let mut d = Matrix::zero(ring, n);
    for i in 0..n {
        if s.index(2) == 0 {
            d.set(i, i, ring.one());
        }
    }
    let u = s.unimodular(n);
    let e = &(&u * &d) * &u.inverse().unwrap();
    let x = s.matrix(n);
    &e + &(&(&e * &x) * &(&Matrix::identity(ring, n) - &e))
}

/// A pair `e, f` of idempotents with `eR ⊆ fR`.
pub fn nested_idempotents(s: &mut MatrixSampler, n: usize) -> (Matrix, Matrix) {
    let ring = s.ring();
    let u = s.unimodular(n);
    let u_inv = u.inverse().unwrap();
    let mut df = Matrix::zero(ring, n);
    let mut de = Matrix::zero(ring, n);
    for i in 0..n {
        if s.index(3) > 0 {
            df.set(i, i, ring.one());
            if s.index(2) == 0 {
                de.set(i, i, ring.one());
            }
        }
    }
    let one = Matrix::identity(ring, n);
    let f0 = &(&u * &df) * &u_inv;
    let e0 = &(&u * &de) * &u_inv;
    let x = s.matrix(n);
    let y = s.matrix(n);
    let f = &f0 + &(&(&f0 * &x) * &(&one - &f0));
    let e = &e0 + &(&(&e0 * &y) * &(&one - &e0));
    (e, f)
}

/// `e0` and `f0` split `fR` with `e0R = eR`.
pub fn between_contract(e: &Matrix, f: &Matrix) -> Check {
    let split = idempotent_between(e, f).map_err(|err| format!("{e} / {f}: {err}"))?;
    let (e0, f0) = (&split.e0, &split.f0);
    ensure(e0.is_idempotent() && f0.is_idempotent(), || {
        "e0 or f0 not idempotent".into()
    })?;
    ensure(&(e0 * f) == e0 && &(f * e0) == e0, || "e0 ≠ e0 f or f e0".into())?;
    ensure(e0.image_basis().same_span(&e.image_basis()), || "e0R ≠ eR".into())?;
    let (i0, i1) = (
        e0.image_basis().generators().to_vec(),
        f0.image_basis().generators().to_vec(),
    );
    ensure(
        direct(f.ring(), f.n(), &i0, &i1)
            && e0.rank() + f0.rank() == f.rank()
            && all_fixed(f, &i0)
            && all_fixed(f, &i1),
        || "fR ≠ e0R ⊕ f0R".into(),
    )
}

/// `e + z` is idempotent for `z` in `eS(1-e)` or `(1-e)Se`.
pub fn orthogonal_sum_contract(s: &mut MatrixSampler, e: &Matrix) -> Check {
    let one = Matrix::identity(e.ring(), e.n());
    let x = s.matrix(e.n());
    let z = if s.index(2) == 0 {
        &(e * &x) * &(&one - e)
    } else {
        &(&(&one - e) * &x) * e
    };
    let sum = orthogonal_sum_idempotent(e, &z).map_err(|err| format!("{e} + {z}: {err}"))?;
    ensure(sum.is_idempotent() && sum == e + &z, || "e + z not idempotent".into())
}

/// Rank, idempotency, kernel and fixed dimensions, and coprimitivity are
/// invariant under conjugation, and kernels transform by `U⁻¹`.
pub fn conjugation_contract(a: &Matrix, u: &Matrix) -> Check {
    let c = conjugate(a, u).map_err(|err| err.to_string())?;
    let n = a.n();
    let coprim = |m: &Matrix| m.is_idempotent() && m.rank() + 1 == n;
    ensure(
        c.rank() == a.rank()
            && c.is_idempotent() == a.is_idempotent()
            && c.fix_basis().rank() == a.fix_basis().rank()
            && coprim(&c) == coprim(a),
        || format!("invariant changed under conjugation of {a}"),
    )?;
    let u_inv = u.inverse().map_err(|err| err.to_string())?;
    let mapped = a.kernel_basis().mapped(&u_inv);
    ensure(c.kernel_basis().same_span(&mapped), || {
        format!("ker(U⁻¹AU) ≠ U⁻¹ ker(A) for {a}")
    })
}

/// Dependent vectors: random ones plus a combination of them.
pub fn dependent_vectors(s: &mut MatrixSampler) -> Vec<Vector> {
    let ring = s.ring();
    let dim = 1 + s.index(4);
    let k = 1 + s.index(3);
    let mut xs: Vec<Vector> = (0..k).map(|_| (0..dim).map(|_| s.scalar()).collect()).collect();
    let mut comb = vec![ring.zero(); dim];
    for x in &xs {
        let c = s.scalar();
        for (t, xi) in comb.iter_mut().zip(x) {
            *t = ring.add(t, &ring.mul(xi, &c));
        }
    }
    let at = s.index(k + 1);
    xs.insert(at, comb);
    xs
}

pub fn dependence_contract(ring: Ring, xs: &[Vector]) -> Check {
    let w = min_valuation_dependence(ring, xs).map_err(|err| err.to_string())?;
    ensure(w.holds(ring, xs), || "witness identity fails".into())?;
    ensure(w.coefficients.iter().all(|(_, b)| ring.contains(b)), || {
        "coefficient outside the ring".into()
    })?;
    ensure(w.coefficients.len() + 1 == xs.len(), || {
        "wrong number of coefficients".into()
    })
}
