//! Acceptance run: every criterion prints one PASS/FAIL line, and the run
//! exits non-zero if any criterion fails.

mod common;

use std::time::Instant;

use idemfact::dvd::{dvd_bound, factor_singular_dvd};
use idemfact::field::{factor_block_diagonal, factor_singular_field};
use idemfact::oracle::{singular_monoid, verify_factorization, MonoidSnapshot};
use idemfact::preorder::{factor_into_irreducibles, factor_into_quarks, quarks, PreorderView};
use idemfact::sample::MatrixSampler;
use idemfact::{Matrix, Ring};

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

const MONOIDS: [(u8, usize); 3] = [(2, 2), (3, 2), (2, 3)];

/// `|GL_n(F_q)| = Π_{i<n} (q^n - q^i)`.
fn gl_order(q: u64, n: u32) -> u64 {
    (0..n).map(|i| q.pow(n) - q.pow(i)).product()
}

struct Fixture {
    snap: MonoidSnapshot,
    view: PreorderView,
}

fn fixtures() -> Vec<Fixture> {
    MONOIDS
        .iter()
        .map(|&(q, n)| {
            let snap = singular_monoid(q, n).expect("within the enumeration guard");
            let expected = u64::from(q).pow((n * n) as u32) - gl_order(u64::from(q), n as u32) + 1;
            assert_eq!(snap.size() as u64, expected, "size of M_{n}(F_{q})^#");
            let view = PreorderView::new(snap.monoid());
            Fixture { snap, view }
        })
        .collect()
}

fn singular_elements(s: &MonoidSnapshot) -> impl Iterator<Item = usize> + '_ {
    (0..s.size()).filter(move |&x| x != s.identity())
}

fn criterion_1(fx: &[Fixture]) -> Outcome {
    let mut counts = Vec::new();
    for f in fx {
        let s = &f.snap;
        let n = s.n();
        let mut count = 0;
        for x in singular_elements(s) {
            let a = s.to_matrix(x);
            let fz = factor_singular_field(&a).map_err(|e| format!("{a}: {e}"))?;
            let bound = n - a.fix_basis().rank();
            let report = verify_factorization(&a, &fz.factors, n - 1, Some(bound));
            if !report.passed() {
                return Err(format!("{a}: {:?}", report.failures));
            }
            let min = s.min_idempotent_lengths()[x].ok_or(format!("{a} has no idempotent factorization"))?;
            if fz.len() < min || fz.len() > n {
                return Err(format!("{a}: length {} outside [{min}, {n}]", fz.len()));
            }
            count += 1;
        }
        counts.push(count);
    }
    if counts != [10, 33, 344] {
        return Err(format!("singular counts {counts:?}"));
    }
    Ok(format!("{counts:?} singular matrices factor within n - dim fix"))
}

fn criterion_2(fx: &[Fixture]) -> Outcome {
    let mut maxima = Vec::new();
    for f in fx.iter().filter(|f| f.snap.q() == 2) {
        let s = &f.snap;
        let depth = s.idempotent_depth();
        if !depth.generated || depth.depth != s.n() {
            return Err(format!("M_{}(F_2): depth {depth:?}", s.n()));
        }
        maxima.push(depth.depth);
    }
    Ok(format!("max minimum length {maxima:?} for n = 2, 3"))
}

fn criterion_3(fx: &[Fixture]) -> Outcome {
    for f in fx {
        let s = &f.snap;
        let engine: Vec<usize> = quarks(&f.view).ones().collect();
        let expected: Vec<usize> = (0..s.size())
            .filter(|&x| s.is_idempotent(x) && s.rank(x) + 1 == s.n())
            .collect();
        if engine != expected {
            return Err(format!("M_{}(F_{}): quarks {engine:?} vs {expected:?}", s.n(), s.q()));
        }
    }
    Ok("quarks are exactly the rank n - 1 idempotents".into())
}

fn criterion_4(fx: &[Fixture]) -> Outcome {
    for f in fx {
        let s = &f.snap;
        for x in 0..s.size() {
            let h = s.heights()[x];
            let bound = s.n() - s.to_matrix(x).fix_basis().rank();
            if h > bound {
                return Err(format!("{}: height {h} > {bound}", s.label(x)));
            }
            if f.view.height(x) != h {
                return Err(format!(
                    "{}: engine height {} vs oracle {h}",
                    s.label(x),
                    f.view.height(x)
                ));
            }
        }
    }
    Ok("oracle heights ≤ n - dim fix and match the engine".into())
}

fn criterion_5(fx: &[Fixture]) -> Outcome {
    let s_deg = 2;
    for f in fx {
        let h = f.view.monoid();
        for x in f.view.non_units() {
            let hgt = f.view.height(x);
            let irr = factor_into_irreducibles(&f.view, x, s_deg).map_err(|e| e.to_string())?;
            if h.product(&irr) != x || irr.len() > s_deg.pow(hgt as u32 - 1) {
                return Err(format!("{}: irreducible factorization {irr:?}", h.label(x)));
            }
            let qs = factor_into_quarks(&f.view, x, s_deg).map_err(|e| format!("{}: {e}", h.label(x)))?;
            if h.product(&qs) != x
                || qs.len() > (s_deg - 1) * hgt - (s_deg - 2)
                || !qs.iter().all(|&y| f.view.is_quark(y))
            {
                return Err(format!("{}: quark factorization {qs:?}", h.label(x)));
            }
        }
    }
    Ok("irreducible and quark factorizations within bounds".into())
}

fn criterion_6() -> Outcome {
    let mut max_len = 0;
    for p in [2u64, 3] {
        let ring = Ring::local(p).unwrap();
        for n in 2..=4 {
            let mut sampler = MatrixSampler::new(ring, 1000 * p + n as u64);
            for _ in 0..500 {
                let a = sampler.singular(n);
                let d = a.fix_basis().rank();
                let fz = factor_singular_dvd(&a).map_err(|e| format!("{a}: {e}"))?;
                let bound = dvd_bound(n, d);
                if bound > 2 * n - 2 || (d >= 1 && bound != 2 * (n - d) - 1) {
                    return Err(format!("bound {bound} for n = {n}, d = {d}"));
                }
                let report = verify_factorization(&a, &fz.factors, n - 1, Some(bound));
                if !report.passed() {
                    return Err(format!("{a}: {:?}", report.failures));
                }
                max_len = max_len.max(fz.len());
            }
        }
    }
    Ok(format!(
        "3000 matrices over Z_(2), Z_(3); longest factorization {max_len}"
    ))
}

fn criterion_7() -> Outcome {
    const CASES: usize = 1000;
    let rings = common::rings();
    let run = |name: &str, check: &mut dyn FnMut(&mut MatrixSampler, usize) -> common::Check| -> Result<(), String> {
        for i in 0..CASES {
            let ring = rings[i % rings.len()];
            let mut s = MatrixSampler::new(ring, i as u64);
            let n = 1 + s.index(4);
            check(&mut s, n).map_err(|e| format!("{name}, case {i}: {e}"))?;
        }
        Ok(())
    };
    run("kernel split", &mut |s, n| {
        let a = s.singular(n);
        let e = common::idempotent_in_kernel(s, &a).ok_or("singular matrix has zero kernel")?;
        common::kernel_split_contract(&a, &e)
    })?;
    run("kernel idempotent avoiding fix", &mut |s, n| {
        common::avoiding_fix_contract(&s.singular(n))
    })?;
    run("idempotency certificate", &mut |s, n| {
        let a = if s.index(2) == 0 {
            common::random_idempotent(s, n)
        } else {
            s.matrix(n)
        };
        common::certificate_agreement(&a)
    })?;
    run("idempotent between", &mut |s, n| {
        let (e, f) = common::nested_idempotents(s, n);
        common::between_contract(&e, &f)
    })?;
    run("orthogonal sum", &mut |s, n| {
        let e = common::random_idempotent(s, n);
        common::orthogonal_sum_contract(s, &e)
    })?;
    run("conjugation invariance", &mut |s, n| {
        let a = if s.index(2) == 0 {
            common::random_idempotent(s, n)
        } else {
            s.singular(n)
        };
        let u = s.unimodular(n);
        common::conjugation_contract(&a, &u)
    })?;
    run("dependence witness", &mut |s, _| {
        let xs = common::dependent_vectors(s);
        common::dependence_contract(s.ring(), &xs)
    })?;
    Ok(format!("7 suites x {CASES} cases"))
}

fn criterion_8() -> Outcome {
    let s = singular_monoid(2, 2).unwrap();
    let blocks: Vec<Matrix> = singular_elements(&s).map(|x| s.to_matrix(x)).collect();
    let mut pairs = 0;
    for a in &blocks {
        for b in &blocks {
            let bf = factor_block_diagonal(&[a.clone(), b.clone()]).map_err(|e| e.to_string())?;
            let target = Matrix::block_diagonal(&[a.clone(), b.clone()]).unwrap();
            let report = verify_factorization(&target, &bf.factors, 0, Some(2));
            if !bf.is_valid() || !report.product || !report.idempotent.iter().all(|&x| x) || bf.factors.len() > 2 {
                return Err(format!("diag({a}, {b}): {:?}", report.failures));
            }
            pairs += 1;
        }
    }
    Ok(format!("{pairs} block pairs factor with ≤ 2 factors"))
}

fn main() {
    let start = Instant::now();
    let fx = fixtures();
    let setup = start.elapsed();
    let criteria: Vec<Criterion> = vec![
        ("1 field factorization, exhaustive", Box::new(|| criterion_1(&fx))),
        ("2 sharpness of n", Box::new(|| criterion_2(&fx))),
        ("3 quarks = coprimitive idempotents", Box::new(|| criterion_3(&fx))),
        ("4 height bounds and agreement", Box::new(|| criterion_4(&fx))),
        ("5 irreducible and quark length bounds", Box::new(|| criterion_5(&fx))),
        ("6 DVD bound on random matrices", Box::new(criterion_6)),
        ("7 construction contracts", Box::new(criterion_7)),
        ("8 block-diagonal length", Box::new(criterion_8)),
    ];
    println!("monoid setup: {:.2?}", setup);
    let mut failed = Vec::new();
    for (name, run) in &criteria {
        let t = Instant::now();
        match run() {
            Ok(msg) => println!("PASS criterion {name}: {msg} ({:.2?})", t.elapsed()),
            Err(msg) => {
                println!("FAIL criterion {name}: {msg} ({:.2?})", t.elapsed());
                failed.push(*name);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
