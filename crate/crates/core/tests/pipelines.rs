use idemfact::dvd::{dvd_bound, factor_singular_dvd};
use idemfact::field::factor_singular_field;
use idemfact::sample::MatrixSampler;
use idemfact::Ring;

#[test]
fn dvd_pipeline_on_seeded_matrices() {
    for p in [2, 3, 5] {
        let mut sampler = MatrixSampler::new(Ring::local(p).unwrap(), 11 + p);
        for n in 1..=4 {
            for _ in 0..200 {
                let a = sampler.singular(n);
                let f = factor_singular_dvd(&a).unwrap_or_else(|e| panic!("{a}: {e}"));
                assert!(f.is_valid(), "{a}");
                assert!(f.len() <= dvd_bound(n, a.fix_basis().rank()));
            }
        }
    }
}

#[test]
fn field_pipeline_on_seeded_matrices() {
    for ring in [
        Ring::rationals(),
        Ring::prime_field(2).unwrap(),
        Ring::prime_field(5).unwrap(),
    ] {
        let mut sampler = MatrixSampler::new(ring, 3);
        for n in 1..=4 {
            for _ in 0..200 {
                let a = sampler.singular(n);
                let f = factor_singular_field(&a).unwrap_or_else(|e| panic!("{a}: {e}"));
                assert!(f.is_valid(), "{a}");
                assert!(f.len() <= n - a.fix_basis().rank());
            }
        }
    }
}
