use crate::linalg::{product, Matrix};

/// Self-checks recorded by a factorizer for its own output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationChecks {
    /// The factors multiply (left to right) to the target.
    pub product: bool,
    pub idempotent: Vec<bool>,
    pub ranks: Vec<usize>,
}

/// An ordered list of idempotent factors of a singular target, with the
/// length bound the producing algorithm guarantees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdempotentFactorization {
    pub target: Matrix,
    pub factors: Vec<Matrix>,
    pub bound: usize,
    pub checks: FactorizationChecks,
}

impl IdempotentFactorization {
    /// Records the checks for `factors` against `target`.
    pub fn certify(target: Matrix, factors: Vec<Matrix>, bound: usize) -> Self {
        let checks = FactorizationChecks {
            product: product(&factors).as_ref() == Some(&target),
            idempotent: factors.iter().map(Matrix::is_idempotent).collect(),
            ranks: factors.iter().map(Matrix::rank).collect(),
        };
        IdempotentFactorization {
            target,
            factors,
            bound,
            checks,
        }
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    /// Exact product, every factor an idempotent of rank `n - 1`, and the
    /// length within the declared bound.
    pub fn is_valid(&self) -> bool {
        let n = self.target.n();
        self.checks.product
            && self.checks.idempotent.iter().all(|&b| b)
            && self.checks.ranks.iter().all(|&r| r + 1 == n)
            && self.factors.len() <= self.bound
    }
}

/// A block-diagonal factorization; each factor is block-diagonal with an
/// idempotent of rank `n_i - 1` (or the identity, as padding) in block `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockFactorization {
    pub target: Matrix,
    pub block_sizes: Vec<usize>,
    pub factors: Vec<Matrix>,
    /// The largest block size.
    pub bound: usize,
    pub product: bool,
    pub idempotent: Vec<bool>,
    /// `block_ranks[t][i]`: rank of block `i` of factor `t`.
    pub block_ranks: Vec<Vec<usize>>,
}

impl BlockFactorization {
    pub fn is_valid(&self) -> bool {
        let rank_ok = self
            .block_ranks
            .iter()
            .all(|ranks| ranks.iter().zip(&self.block_sizes).all(|(&r, &n)| r + 1 == n || r == n));
        self.product && self.idempotent.iter().all(|&b| b) && rank_ok && self.factors.len() <= self.bound
    }
}
