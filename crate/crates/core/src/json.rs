//! JSON interchange for rings, matrices, and factorizations. Scalars are
//! written as strings in the ring's text format.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factorization::{FactorizationChecks, IdempotentFactorization};
use crate::linalg::Matrix;
use crate::rings::{Ring, RingKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingJson {
    pub kind: RingKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

impl RingJson {
    pub fn to_ring(&self) -> Result<Ring> {
        Ring::new(self.kind, self.p)
    }
}

impl From<Ring> for RingJson {
    fn from(r: Ring) -> Self {
        RingJson {
            kind: r.kind(),
            p: r.prime(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub ring: RingJson,
    pub n: usize,
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn to_matrix(&self) -> Result<Matrix> {
        let ring = self.ring.to_ring()?;
        if self.entries.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: self.entries.len(),
            });
        }
        let mut flat = Vec::with_capacity(self.n * self.n);
        for row in &self.entries {
            if row.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    found: row.len(),
                });
            }
            for s in row {
                flat.push(ring.parse(s)?);
            }
        }
        Matrix::new(ring, self.n, flat)
    }
}

impl From<&Matrix> for MatrixJson {
    fn from(m: &Matrix) -> Self {
        MatrixJson {
            ring: m.ring().into(),
            n: m.n(),
            entries: m.render_rows(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChecksJson {
    pub product: bool,
    pub idempotent: Vec<bool>,
    pub ranks: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorizationJson {
    pub target: MatrixJson,
    pub factors: Vec<MatrixJson>,
    pub bound: usize,
    pub checks: ChecksJson,
}

impl From<&IdempotentFactorization> for FactorizationJson {
    fn from(f: &IdempotentFactorization) -> Self {
        FactorizationJson {
            target: (&f.target).into(),
            factors: f.factors.iter().map(MatrixJson::from).collect(),
            bound: f.bound,
            checks: ChecksJson {
                product: f.checks.product,
                idempotent: f.checks.idempotent.clone(),
                ranks: f.checks.ranks.clone(),
            },
        }
    }
}

impl FactorizationJson {
    /// Parses target and factors; the recorded checks are kept as claimed,
    /// not recomputed.
    pub fn to_factorization(&self) -> Result<IdempotentFactorization> {
        let target = self.target.to_matrix()?;
        let factors = self
            .factors
            .iter()
            .map(MatrixJson::to_matrix)
            .collect::<Result<Vec<_>>>()?;
        if let Some(f) = factors.iter().find(|f| f.ring() != target.ring()) {
            return Err(Error::RingMismatch(target.ring().to_string(), f.ring().to_string()));
        }
        if let Some(f) = factors.iter().find(|f| f.n() != target.n()) {
            return Err(Error::DimensionMismatch {
                expected: target.n(),
                found: f.n(),
            });
        }
        Ok(IdempotentFactorization {
            target,
            factors,
            bound: self.bound,
            checks: FactorizationChecks {
                product: self.checks.product,
                idempotent: self.checks.idempotent.clone(),
                ranks: self.checks.ranks.clone(),
            },
        })
    }
}

pub fn matrix_from_json(s: &str) -> Result<Matrix> {
    serde_json::from_str::<MatrixJson>(s)?.to_matrix()
}

pub fn matrix_to_json(m: &Matrix) -> String {
    serde_json::to_string(&MatrixJson::from(m)).expect("matrices serialize")
}
