mod common;

use idemfact::sample::MatrixSampler;
use idemfact::Valuation;
use proptest::prelude::*;

fn sampler(ring: usize, seed: u64) -> MatrixSampler {
    let rings = common::rings();
    MatrixSampler::new(rings[ring % rings.len()], seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn ring_axioms(ring in 0usize..5, seed: u64) {
        let mut s = sampler(ring, seed);
        let r = s.ring();
        let (a, b, c) = (s.scalar(), s.scalar(), s.scalar());
        prop_assert_eq!(r.add(&r.add(&a, &b), &c), r.add(&a, &r.add(&b, &c)));
        prop_assert_eq!(r.mul(&r.mul(&a, &b), &c), r.mul(&a, &r.mul(&b, &c)));
        prop_assert_eq!(r.mul(&a, &r.add(&b, &c)), r.add(&r.mul(&a, &b), &r.mul(&a, &c)));
        prop_assert_eq!(r.mul(&a, &b), r.mul(&b, &a));
        prop_assert!(r.add(&a, &r.neg(&a)).is_zero());
        prop_assert_eq!(r.sub(&a, &b), r.add(&a, &r.neg(&b)));
        for x in [&a, &b, &c] {
            prop_assert!(r.contains(x));
            if r.is_unit(x) {
                prop_assert!(r.mul(x, &r.inv(x).unwrap()).is_one());
            } else {
                prop_assert!(r.inv(x).is_err());
            }
        }
    }

    #[test]
    fn valuation_laws(ring in 3usize..5, seed: u64) {
        let mut s = sampler(ring, seed);
        let r = s.ring();
        let (a, b) = (s.scalar(), s.scalar());
        let (va, vb) = (r.valuation(&a), r.valuation(&b));
        let vab = r.valuation(&r.mul(&a, &b));
        match (va.finite(), vb.finite()) {
            (Some(x), Some(y)) => prop_assert_eq!(vab.finite(), Some(x + y)),
            _ => prop_assert_eq!(vab, Valuation::Infinite),
        }
        let sum = r.valuation(&r.add(&a, &b));
        if let Some(m) = va.finite().into_iter().chain(vb.finite()).min() {
            prop_assert!(sum.finite().is_none_or(|v| v >= m));
        }
        prop_assert_eq!(r.is_unit(&a), va.finite() == Some(0));
    }

    #[test]
    fn render_parse_round_trip(ring in 0usize..5, seed: u64) {
        let mut s = sampler(ring, seed);
        let r = s.ring();
        let x = s.scalar();
        prop_assert_eq!(r.parse(&r.render(&x)).unwrap(), x);
    }
}
