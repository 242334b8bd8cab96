//! Seeded random singular matrices for tests and batch runs.
//!
//! Entries over `Q` and `Z_(p)` have the form `u p^s` with `s ∈ {0, 1, 2}`
//! and `u` a small unit, so valuations stay small. Two shapes are mixed:
//! a product `X Y` with `Y` rank-deficient, and a conjugate
//! `U (1_d ⊕ N) U⁻¹` with `U` unimodular, which has a fixed module of rank
//! at least `d`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;
use crate::rings::{Ring, RingKind, Scalar};

const UNITS: [(i64, i64); 8] = [(1, 1), (-1, 1), (3, 1), (-3, 1), (1, 3), (5, 1), (-5, 7), (7, 5)];

pub struct MatrixSampler {
    ring: Ring,
    rng: ChaCha8Rng,
}

impl MatrixSampler {
    pub fn new(ring: Ring, seed: u64) -> MatrixSampler {
        MatrixSampler {
            ring,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn ring(&self) -> Ring {
        self.ring
    }

    /// Uniform in `0..bound`.
    pub fn index(&mut self, bound: usize) -> usize {
        self.rng.random_range(0..bound)
    }

    fn unit(&mut self) -> Scalar {
        let ring = self.ring;
        match ring.kind() {
            RingKind::Fp => {
                let p = ring.prime().expect("F_p has a prime");
                ring.int(self.rng.random_range(1..p) as i64)
            }
            _ => loop {
                let (num, den) = UNITS[self.rng.random_range(0..UNITS.len())];
                let q = Ring::rationals();
                let x = q.div(&q.int(num), &q.int(den)).expect("non-zero denominator");
                if let Ok(x) = ring.from_rational(x.as_rational().clone()) {
                    if ring.is_unit(&x) {
                        return x;
                    }
                }
            },
        }
    }

    /// Zero with probability 1/4, otherwise `u p^s`.
    pub fn scalar(&mut self) -> Scalar {
        let ring = self.ring;
        if self.rng.random_range(0..4) == 0 {
            return ring.zero();
        }
        let u = self.unit();
        match ring.kind() {
            RingKind::Fp => u,
            RingKind::Zp => {
                let s = self.rng.random_range(0..3u32);
                ring.mul(&u, &ring.prime_power(s))
            }
            RingKind::Q => ring.mul(&u, &ring.int(self.rng.random_range(1..4))),
        }
    }

    pub fn matrix(&mut self, n: usize) -> Matrix {
        let entries = (0..n * n).map(|_| self.scalar()).collect();
        Matrix::new(self.ring, n, entries).expect("entries lie in the ring")
    }

    /// A product of random elementary matrices and a permutation.
    pub fn unimodular(&mut self, n: usize) -> Matrix {
        let ring = self.ring;
        let mut u = Matrix::identity(ring, n);
        if n < 2 {
            return u;
        }
        for _ in 0..2 * n {
            let i = self.rng.random_range(0..n);
            let j = self.rng.random_range(0..n - 1);
            let j = if j >= i { j + 1 } else { j };
            let c = self.scalar();
            let mut e = Matrix::identity(ring, n);
            e.set(i, j, c);
            u = &u * &e;
        }
        let mut perm = Matrix::zero(ring, n);
        let mut order: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            order.swap(k, self.rng.random_range(0..=k));
        }
        for (i, &j) in order.iter().enumerate() {
            perm.set(i, j, ring.one());
        }
        &u * &perm
    }

    /// `X Y` where one column of `Y` is a combination of the others.
    fn low_rank_product(&mut self, n: usize) -> Matrix {
        let ring = self.ring;
        let x = self.matrix(n);
        let mut y = self.matrix(n);
        let target = self.rng.random_range(0..n);
        for i in 0..n {
            y.set(i, target, ring.zero());
        }
        for j in 0..n {
            if j == target {
                continue;
            }
            let c = self.scalar();
            for i in 0..n {
                let v = ring.add(y.get(i, target), &ring.mul(y.get(i, j), &c));
                y.set(i, target, v);
            }
        }
        &x * &y
    }

    /// A singular matrix; about half of them have a non-trivial fixed part.
    pub fn singular(&mut self, n: usize) -> Matrix {
        if n == 1 {
            return Matrix::zero(self.ring, 1);
        }
        if self.rng.random_bool(0.5) {
            return self.low_rank_product(n);
        }
        let d = self.rng.random_range(1..n);
        let core = self.low_rank_product(n - d);
        let block = Matrix::block_diagonal(&[Matrix::identity(self.ring, d), core]).expect("same ring");
        let u = self.unimodular(n);
        let u_inv = u.inverse().expect("unimodular");
        &(&u * &block) * &u_inv
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_singular() {
        for ring in [
            Ring::local(2).unwrap(),
            Ring::prime_field(3).unwrap(),
            Ring::rationals(),
        ] {
            let mut a = MatrixSampler::new(ring, 7);
            let mut b = MatrixSampler::new(ring, 7);
            for n in 1..5 {
                let m = a.singular(n);
                assert_eq!(m, b.singular(n));
                assert!(m.is_singular());
            }
        }
    }
}
