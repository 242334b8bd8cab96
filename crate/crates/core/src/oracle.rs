//! Brute-force ground truth for small matrix monoids `M_n(F_q)^#` (the
//! singular matrices together with the identity).
//!
//! Nothing here calls into the factorizers or the preorder engine: matrices
//! are byte arrays with their own arithmetic mod `q`, heights come from an
//! exhaustive chain search, and factorization checks re-multiply over exact
//! rationals independently of [`crate::linalg`].

use std::collections::{HashMap, VecDeque};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::preorder::{CayleyTable, FiniteMonoid};
use crate::rings::{Ring, RingKind};

/// Cap on the Cayley table of the full matrix space, `(q^(n²))²` entries.
const MAX_TABLE: u128 = 1_000_000;

fn mul_mod(q: u8, n: usize, a: &[u8], b: &[u8]) -> Vec<u8> {
    let q = u32::from(q);
    let mut c = vec![0u8; n * n];
    for i in 0..n {
        for j in 0..n {
            let mut s = 0u32;
            for k in 0..n {
                s += u32::from(a[i * n + k]) * u32::from(b[k * n + j]);
            }
            c[i * n + j] = (s % q) as u8;
        }
    }
    c
}

fn inv_mod(q: u8, x: u8) -> u8 {
    (1..q)
        .find(|&y| (u32::from(x) * u32::from(y)) % u32::from(q) == 1)
        .expect("q is prime")
}

fn rank_mod(q: u8, n: usize, a: &[u8]) -> usize {
    let qq = u32::from(q);
    let mut m: Vec<Vec<u32>> = (0..n)
        .map(|i| a[i * n..(i + 1) * n].iter().map(|&x| u32::from(x)).collect())
        .collect();
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(rank, p);
        let inv = u32::from(inv_mod(q, m[rank][col] as u8));
        for x in m[rank].iter_mut() {
            *x = (*x * inv) % qq;
        }
        for r in 0..n {
            if r != rank && m[r][col] != 0 {
                let f = m[r][col];
                let pivot = m[rank].clone();
                for (x, y) in m[r].iter_mut().zip(pivot) {
                    *x = (*x + (qq - f) * y) % qq;
                }
            }
        }
        rank += 1;
    }
    rank
}

fn identity_bytes(n: usize) -> Vec<u8> {
    (0..n * n).map(|k| u8::from(k / n == k % n)).collect()
}

fn label(n: usize, a: &[u8]) -> String {
    let rows: Vec<String> = a
        .chunks(n)
        .map(|r| format!("[{}]", r.iter().map(u8::to_string).collect::<Vec<_>>().join(",")))
        .collect();
    format!("[{}]", rows.join(","))
}

/// Per-element data exported alongside the Cayley table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Annotation {
    pub rank: usize,
    pub idempotent: bool,
    /// `None` when the element is not a product of idempotents.
    pub min_len: Option<usize>,
    pub height: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnapshotExport {
    #[serde(flatten)]
    pub cayley: CayleyTable,
    pub annotations: Vec<Annotation>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdempotentDepth {
    /// Largest minimum length over the idempotent-generated part.
    pub depth: usize,
    /// Whether every element is a product of idempotents.
    pub generated: bool,
}

/// `M_n(F_q)^#` with its multiplication table and brute-force annotations.
#[derive(Clone, Debug)]
pub struct MonoidSnapshot {
    q: u8,
    n: usize,
    elements: Vec<Vec<u8>>,
    index: HashMap<Vec<u8>, usize>,
    identity: usize,
    table: Vec<usize>,
    ranks: Vec<usize>,
    idempotent: Vec<bool>,
    min_len: Vec<Option<usize>>,
    heights: Vec<usize>,
}

pub fn singular_monoid(q: u8, n: usize) -> Result<MonoidSnapshot> {
    if q < 2 || !(2..q).all(|d| !q.is_multiple_of(d)) {
        return Err(Error::CompositeModulus(u64::from(q)));
    }
    let total = u128::from(q).checked_pow((n * n) as u32).unwrap_or(u128::MAX);
    let entries = total.saturating_mul(total);
    if entries > MAX_TABLE {
        return Err(Error::TooLarge(entries));
    }
    let id = identity_bytes(n);
    let mut elements = Vec::new();
    for code in 0..total {
        let mut c = code;
        let mut a = vec![0u8; n * n];
        for k in (0..n * n).rev() {
            a[k] = (c % u128::from(q)) as u8;
            c /= u128::from(q);
        }
        if a == id || rank_mod(q, n, &a) < n {
            elements.push(a);
        }
    }
    let index: HashMap<Vec<u8>, usize> = elements.iter().enumerate().map(|(i, a)| (a.clone(), i)).collect();
    let m = elements.len();
    let mut table = Vec::with_capacity(m * m);
    for a in &elements {
        for b in &elements {
            let c = mul_mod(q, n, a, b);
            let k = *index
                .get(&c)
                .ok_or_else(|| Error::InternalInconsistency("singular matrices are not closed".into()))?;
            table.push(k);
        }
    }
    let ranks: Vec<usize> = elements.iter().map(|a| rank_mod(q, n, a)).collect();
    let idempotent: Vec<bool> = (0..m).map(|i| table[i * m + i] == i).collect();
    let mut snap = MonoidSnapshot {
        q,
        n,
        identity: index[&id],
        elements,
        index,
        table,
        ranks,
        idempotent,
        min_len: Vec::new(),
        heights: Vec::new(),
    };
    snap.min_len = snap.bfs_lengths();
    let sets = snap.rfix_sets();
    snap.heights = (0..m).map(|x| chain_search(&sets, snap.identity, x)).collect();
    Ok(snap)
}

impl MonoidSnapshot {
    pub fn q(&self) -> u8 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.elements.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn element(&self, i: usize) -> &[u8] {
        &self.elements[i]
    }

    pub fn label(&self, i: usize) -> String {
        label(self.n, &self.elements[i])
    }

    pub fn index_of_bytes(&self, a: &[u8]) -> Option<usize> {
        self.index.get(a).copied()
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size() + b]
    }

    pub fn rank(&self, i: usize) -> usize {
        self.ranks[i]
    }

    pub fn is_idempotent(&self, i: usize) -> bool {
        self.idempotent[i]
    }

    pub fn field(&self) -> Ring {
        Ring::prime_field(u64::from(self.q)).expect("q was validated")
    }

    pub fn to_matrix(&self, i: usize) -> Matrix {
        let ring = self.field();
        let entries = self.elements[i].iter().map(|&x| ring.int(i64::from(x))).collect();
        Matrix::new(ring, self.n, entries).expect("entries are reduced")
    }

    /// Index of an `F_q` matrix of the right size, if it is an element.
    pub fn index_of(&self, a: &Matrix) -> Option<usize> {
        let ring = a.ring();
        if ring.kind() != RingKind::Fp || ring.prime() != Some(u64::from(self.q)) || a.n() != self.n {
            return None;
        }
        let bytes: Option<Vec<u8>> = a.entries().iter().map(|x| ring.residue(x).map(|r| r as u8)).collect();
        self.index_of_bytes(&bytes?)
    }

    pub fn monoid(&self) -> FiniteMonoid {
        FiniteMonoid::from_cayley(self.cayley()).expect("matrix multiplication is associative")
    }

    pub fn cayley(&self) -> CayleyTable {
        let m = self.size();
        CayleyTable {
            size: m,
            identity: self.identity,
            table: self.table.chunks(m).map(<[usize]>::to_vec).collect(),
            labels: (0..m).map(|i| self.label(i)).collect(),
        }
    }

    /// Breadth-first search from the non-identity idempotents under right
    /// multiplication by them; the identity is the empty product.
    fn bfs_lengths(&self) -> Vec<Option<usize>> {
        let m = self.size();
        let gens: Vec<usize> = (0..m).filter(|&e| self.idempotent[e] && e != self.identity).collect();
        let mut dist = vec![None; m];
        dist[self.identity] = Some(0);
        let mut queue = VecDeque::new();
        for &e in &gens {
            if dist[e].is_none() {
                dist[e] = Some(1);
                queue.push_back(e);
            }
        }
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].expect("queued elements have a distance");
            for &e in &gens {
                let y = self.mul(x, e);
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    pub fn min_idempotent_lengths(&self) -> &[Option<usize>] {
        &self.min_len
    }

    /// Members of the subsemigroup generated by the idempotents.
    pub fn generated_by_idempotents(&self) -> Vec<bool> {
        self.min_len.iter().map(Option::is_some).collect()
    }

    pub fn idempotent_depth(&self) -> IdempotentDepth {
        IdempotentDepth {
            depth: self.min_len.iter().flatten().copied().max().unwrap_or(0),
            generated: self.min_len.iter().all(Option::is_some),
        }
    }

    fn rfix_sets(&self) -> Vec<Vec<bool>> {
        let m = self.size();
        (0..m).map(|a| (0..m).map(|x| self.mul(a, x) == x).collect()).collect()
    }

    /// Longest chain `x = x_1 ≻ x_2 ≻ ⋯` of non-units found by exhaustive
    /// depth-first search. Elements with equal rfix sets are interchangeable
    /// in a chain, so the search runs over distinct rfix sets.
    pub fn brute_height(&self, x: usize) -> usize {
        chain_search(&self.rfix_sets(), self.identity, x)
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Elements with no non-unit strictly below them.
    pub fn brute_quarks(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| self.heights[x] == 1).collect()
    }

    pub fn export(&self) -> SnapshotExport {
        SnapshotExport {
            cayley: self.cayley(),
            annotations: (0..self.size())
                .map(|i| Annotation {
                    rank: self.ranks[i],
                    idempotent: self.idempotent[i],
                    min_len: self.min_len[i],
                    height: self.heights[i],
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.export()).expect("snapshots serialize")
    }
}

fn chain_search(sets: &[Vec<bool>], identity: usize, x: usize) -> usize {
    let full = &sets[identity];
    if sets[x] == *full {
        return 0;
    }
    let mut classes: Vec<&Vec<bool>> = Vec::new();
    for s in sets {
        if s != full && !classes.contains(&s) {
            classes.push(s);
        }
    }
    fn strictly_contains(big: &[bool], small: &[bool]) -> bool {
        big != small && small.iter().zip(big).all(|(&s, &b)| !s || b)
    }
    fn dfs(classes: &[&Vec<bool>], current: &[bool]) -> usize {
        1 + classes
            .iter()
            .filter(|c| strictly_contains(c, current))
            .map(|c| dfs(classes, c))
            .max()
            .unwrap_or(0)
    }
    dfs(&classes, &sets[x])
}

/// Outcome of re-checking a claimed factorization from scratch.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub product: bool,
    pub idempotent: Vec<bool>,
    pub ranks: Vec<usize>,
    pub expected_rank: usize,
    pub length: usize,
    pub bound: Option<usize>,
    pub failures: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

type Grid = Vec<Vec<BigRational>>;

fn to_grid(a: &Matrix) -> Grid {
    let n = a.n();
    (0..n)
        .map(|i| (0..n).map(|j| a.get(i, j).as_rational().clone()).collect())
        .collect()
}

fn reduce(ring: Ring, x: BigRational) -> BigRational {
    match (ring.kind(), ring.prime()) {
        (RingKind::Fp, Some(p)) => {
            let p = num_bigint::BigInt::from(p);
            let r = ((x.numer() % &p) + &p) % &p;
            BigRational::from_integer(r)
        }
        _ => x,
    }
}

fn grid_mul(ring: Ring, a: &Grid, b: &Grid) -> Grid {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| reduce(ring, (0..n).fold(BigRational::zero(), |s, k| s + &a[i][k] * &b[k][j])))
                .collect()
        })
        .collect()
}

/// Rank over `Q`, or over `F_p` for prime-field input.
fn grid_rank(ring: Ring, a: &Grid) -> usize {
    let n = a.len();
    let mut m = a.clone();
    let modulus = match ring.kind() {
        RingKind::Fp => ring.prime(),
        _ => None,
    };
    let inverse = |x: &BigRational| -> BigRational {
        match modulus {
            Some(p) => {
                let p = num_bigint::BigInt::from(p);
                let v = x.numer().modpow(&(&p - 2u8), &p);
                BigRational::from_integer(v)
            }
            None => x.recip(),
        }
    };
    let mut rank = 0;
    for col in 0..n {
        let Some(p) = (rank..n).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        let inv = inverse(&m[rank][col]);
        for x in m[rank].iter_mut() {
            *x = reduce(ring, &*x * &inv);
        }
        let pivot = m[rank].clone();
        for (r, row) in m.iter_mut().enumerate() {
            if r != rank && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = reduce(ring, &*x - &f * y);
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Re-multiplies `factors` and checks that each is an idempotent of rank
/// `expected_rank`, and that the length is within `bound`.
pub fn verify_factorization(
    target: &Matrix,
    factors: &[Matrix],
    expected_rank: usize,
    bound: Option<usize>,
) -> VerificationReport {
    let ring = target.ring();
    let n = target.n();
    let mut failures = Vec::new();
    if let Some(bad) = factors.iter().position(|f| f.ring() != ring || f.n() != n) {
        failures.push(format!("factor {bad} has a different ring or size"));
        return VerificationReport {
            product: false,
            idempotent: Vec::new(),
            ranks: Vec::new(),
            expected_rank,
            length: factors.len(),
            bound,
            failures,
        };
    }
    let grids: Vec<Grid> = factors.iter().map(to_grid).collect();
    let identity: Grid = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    let prod = grids.iter().fold(identity, |acc, g| grid_mul(ring, &acc, g));
    let product = prod == to_grid(target);
    if !product {
        failures.push("product mismatch".into());
    }
    let idempotent: Vec<bool> = grids.iter().map(|g| grid_mul(ring, g, g) == *g).collect();
    for (i, ok) in idempotent.iter().enumerate() {
        if !ok {
            failures.push(format!("factor {i} is not idempotent"));
        }
    }
    let ranks: Vec<usize> = grids.iter().map(|g| grid_rank(ring, g)).collect();
    for (i, &r) in ranks.iter().enumerate() {
        if r != expected_rank {
            failures.push(format!("factor {i} has rank {r}, expected {expected_rank}"));
        }
    }
    if let Some(b) = bound {
        if factors.len() > b {
            failures.push("bound exceeded".into());
        }
    }
    VerificationReport {
        product,
        idempotent,
        ranks,
        expected_rank,
        length: factors.len(),
        bound,
        failures,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(singular_monoid(2, 2).unwrap().size(), 11);
        assert_eq!(singular_monoid(3, 2).unwrap().size(), 34);
        assert_eq!(singular_monoid(2, 1).unwrap().size(), 2);
        assert_eq!(singular_monoid(2, 5).unwrap_err(), Error::TooLarge(1 << 50));
        assert_eq!(singular_monoid(3, 3).unwrap_err(), Error::TooLarge(19683 * 19683));
        assert_eq!(singular_monoid(4, 2).unwrap_err(), Error::CompositeModulus(4));
    }

    #[test]
    fn m2f2_lengths_and_heights() {
        let s = singular_monoid(2, 2).unwrap();
        let nil = s.index_of_bytes(&[0, 1, 0, 0]).unwrap();
        assert_eq!(s.min_idempotent_lengths()[nil], Some(2));
        assert_eq!(s.min_idempotent_lengths()[s.identity()], Some(0));
        assert_eq!(s.brute_height(s.identity()), 0);
        assert_eq!(s.brute_height(nil), 2);
        let e = s.index_of_bytes(&[1, 0, 0, 0]).unwrap();
        assert_eq!(s.brute_height(e), 1);
        assert_eq!(s.min_idempotent_lengths()[e], Some(1));
        assert_eq!(
            s.idempotent_depth(),
            IdempotentDepth {
                depth: 2,
                generated: true
            }
        );
        assert_eq!(s.label(nil), "[[0,1],[0,0]]");
    }

    #[test]
    fn one_element_monoid_depth() {
        let s = singular_monoid(2, 1).unwrap();
        // {0, 1}: 0 is idempotent
        assert_eq!(s.idempotent_depth().depth, 1);
    }

    #[test]
    fn verification() {
        let r = Ring::prime_field(2).unwrap();
        let target = Matrix::from_ints(r, &[[0, 1], [0, 0]]);
        let e = Matrix::from_ints(r, &[[1, 0], [0, 0]]);
        let f = Matrix::from_ints(r, &[[0, 1], [0, 1]]);
        let ok = verify_factorization(&target, &[e.clone(), f.clone()], 1, Some(2));
        assert!(ok.passed(), "{:?}", ok.failures);
        let swapped = verify_factorization(&target, &[f, e], 1, Some(2));
        assert_eq!(swapped.failures, vec!["product mismatch".to_string()]);
        let lone = verify_factorization(&target, std::slice::from_ref(&target), 1, None);
        assert!(!lone.idempotent[0]);
        assert!(!lone.passed());
    }

    #[test]
    fn export_shape() {
        let s = singular_monoid(2, 1).unwrap();
        let v: serde_json::Value = serde_json::from_str(&s.to_json()).unwrap();
        assert_eq!(v["size"], 2);
        assert_eq!(v["annotations"][0]["rank"], 0);
        assert_eq!(v["labels"][1], "[[1]]");
    }
}
