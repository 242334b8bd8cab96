use idemfact::error::Error;
use idemfact::oracle::singular_monoid;
use idemfact::preorder::{factor_into_irreducibles, factor_into_quarks, quarks, FiniteMonoid, PreorderView};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

const POINTS: u8 = 3;

/// Monoid of maps on `POINTS` points generated by `gens`, with `a * b`
/// meaning "apply `a`, then `b`".
fn transformation_monoid(gens: &[Vec<u8>]) -> FiniteMonoid {
    let compose = |a: &[u8], b: &[u8]| -> Vec<u8> { a.iter().map(|&i| b[i as usize]).collect() };
    let mut elems: Vec<Vec<u8>> = vec![(0..POINTS).collect()];
    let mut index: HashMap<Vec<u8>, usize> = HashMap::from([(elems[0].clone(), 0)]);
    let mut i = 0;
    while i < elems.len() {
        for g in gens {
            let c = compose(&elems[i], g);
            if !index.contains_key(&c) {
                index.insert(c.clone(), elems.len());
                elems.push(c);
            }
        }
        i += 1;
    }
    let table = elems
        .iter()
        .map(|a| elems.iter().map(|b| index[&compose(a, b)]).collect())
        .collect();
    let labels = elems.iter().map(|e| format!("{e:?}")).collect();
    FiniteMonoid::new(table, 0, labels).unwrap()
}

fn check_view(view: &PreorderView) -> Result<(), TestCaseError> {
    let h = view.monoid();
    let m = h.size();
    for a in 0..m {
        prop_assert!(view.leq(a, a));
        for b in 0..m {
            if view.lt(a, b) {
                prop_assert!(view.height(a) < view.height(b));
            }
        }
    }
    let transitive = |a: usize, b: usize, c: usize| !(view.leq(a, b) && view.leq(b, c)) || view.leq(a, c);
    if m <= 300 {
        for (a, b, c) in (0..m).flat_map(|a| (0..m).flat_map(move |b| (0..m).map(move |c| (a, b, c)))) {
            prop_assert!(transitive(a, b, c));
        }
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for _ in 0..100_000 {
            let (a, b) = (rng.random_range(0..m), rng.random_range(0..m));
            let c = rng.random_range(0..m);
            prop_assert!(transitive(a, b, c));
        }
    }
    let qs = quarks(view);
    for x in 0..m {
        prop_assert_eq!(qs.contains(x), !view.is_unit(x) && view.height(x) == 1);
    }
    for x in view.non_units() {
        let hgt = view.height(x);
        let irr = factor_into_irreducibles(view, x, 2).unwrap();
        prop_assert_eq!(h.product(&irr), x);
        prop_assert!(irr.len() <= 1 << (hgt - 1));
        match factor_into_quarks(view, x, 2) {
            Ok(q) => {
                prop_assert_eq!(h.product(&q), x);
                prop_assert!(q.len() <= hgt && q.iter().all(|&y| view.is_quark(y)));
            }
            Err(Error::HypothesisFailed(_)) => {}
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn transformation_monoids(gens in prop::collection::vec(prop::collection::vec(0..POINTS, POINTS as usize), 1..=3)) {
        let view = PreorderView::new(transformation_monoid(&gens));
        check_view(&view)?;
    }
}

#[test]
fn matrix_monoids() {
    for (q, n) in [(2, 2), (3, 2), (2, 3)] {
        let view = PreorderView::new(singular_monoid(q, n).unwrap().monoid());
        check_view(&view).unwrap_or_else(|e| panic!("M_{n}(F_{q}): {e}"));
    }
}
