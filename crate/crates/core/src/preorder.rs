//! Factorization theory of a finite monoid under the rFix-preorder
//! `b ⪯ c ⇔ rfix(c) ⊆ rfix(b)`, where `rfix(a) = {x : a x = x}`.
//!
//! Elements are indices into a Cayley table.

use fixedbitset::FixedBitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const EXHAUSTIVE_LIMIT: usize = 300;
const ASSOCIATIVITY_SAMPLES: usize = 1_000_000;

/// How associativity was validated.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AssociativityCheck {
    Exhaustive,
    /// Random triples only; the table may still be non-associative.
    Sampled {
        samples: usize,
    },
}

/// Cayley-table interchange format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CayleyTable {
    pub size: usize,
    pub identity: usize,
    pub table: Vec<Vec<usize>>,
    pub labels: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMonoid {
    size: usize,
    identity: usize,
    table: Vec<usize>,
    labels: Vec<String>,
    associativity: AssociativityCheck,
}

impl FiniteMonoid {
    /// Validates shape, the identity, and associativity.
    pub fn new(table: Vec<Vec<usize>>, identity: usize, labels: Vec<String>) -> Result<FiniteMonoid> {
        let m = table.len();
        if m == 0 {
            return Err(Error::InvalidTable("empty table".into()));
        }
        if labels.len() != m {
            return Err(Error::InvalidTable(format!("{} labels for {m} elements", labels.len())));
        }
        if identity >= m {
            return Err(Error::InvalidTable(format!("identity {identity} out of range")));
        }
        let mut flat = Vec::with_capacity(m * m);
        for (i, row) in table.iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidTable(format!("row {i} has length {}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= m) {
                return Err(Error::InvalidTable(format!("entry {bad} in row {i} out of range")));
            }
            flat.extend_from_slice(row);
        }
        let mut monoid = FiniteMonoid {
            size: m,
            identity,
            table: flat,
            labels,
            associativity: AssociativityCheck::Exhaustive,
        };
        if (0..m).any(|x| monoid.mul(identity, x) != x || monoid.mul(x, identity) != x) {
            return Err(Error::InvalidTable(format!("{identity} is not a two-sided identity")));
        }
        monoid.associativity = monoid.check_associativity()?;
        Ok(monoid)
    }

    fn check_associativity(&self) -> Result<AssociativityCheck> {
        let m = self.size;
        let assoc = |a: usize, b: usize, c: usize| self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c));
        let fail = |a, b, c| Err(Error::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
        if m <= EXHAUSTIVE_LIMIT {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if !assoc(a, b, c) {
                            return fail(a, b, c);
                        }
                    }
                }
            }
            return Ok(AssociativityCheck::Exhaustive);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(m as u64);
        for _ in 0..ASSOCIATIVITY_SAMPLES {
            let (a, b, c) = (rng.random_range(0..m), rng.random_range(0..m), rng.random_range(0..m));
            if !assoc(a, b, c) {
                return fail(a, b, c);
            }
        }
        Ok(AssociativityCheck::Sampled {
            samples: ASSOCIATIVITY_SAMPLES,
        })
    }

    pub fn from_cayley(t: CayleyTable) -> Result<FiniteMonoid> {
        if t.size != t.table.len() {
            return Err(Error::InvalidTable(format!(
                "size {} but {} rows",
                t.size,
                t.table.len()
            )));
        }
        FiniteMonoid::new(t.table, t.identity, t.labels)
    }

    pub fn to_cayley(&self) -> CayleyTable {
        CayleyTable {
            size: self.size,
            identity: self.identity,
            table: self.table.chunks(self.size).map(<[usize]>::to_vec).collect(),
            labels: self.labels.clone(),
        }
    }

    pub fn from_json(s: &str) -> Result<FiniteMonoid> {
        FiniteMonoid::from_cayley(serde_json::from_str(s)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_cayley()).expect("Cayley tables serialize")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn associativity(&self) -> AssociativityCheck {
        self.associativity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.size + b]
    }

    pub fn product(&self, xs: &[usize]) -> usize {
        xs.iter().fold(self.identity, |acc, &x| self.mul(acc, x))
    }
}

/// `{x : a x = x}`.
pub fn rfix_set(h: &FiniteMonoid, a: usize) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(h.size());
    for x in 0..h.size() {
        if h.mul(a, x) == x {
            set.insert(x);
        }
    }
    set
}

/// Per-element facts under the preorder.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeightTable {
    pub heights: Vec<usize>,
    pub quark: Vec<bool>,
    /// `irreducible[s - 2][x]`: `x` is a degree-`s` irreducible.
    pub irreducible: Vec<Vec<bool>>,
}

/// The rFix-preorder of a finite monoid, with heights precomputed.
#[derive(Clone, Debug)]
pub struct PreorderView {
    monoid: FiniteMonoid,
    rfix: Vec<FixedBitSet>,
    heights: Vec<usize>,
}

impl PreorderView {
    pub fn new(monoid: FiniteMonoid) -> PreorderView {
        let rfix: Vec<FixedBitSet> = (0..monoid.size()).map(|a| rfix_set(&monoid, a)).collect();
        let mut view = PreorderView {
            monoid,
            rfix,
            heights: Vec::new(),
        };
        view.heights = view.compute_heights();
        view
    }

    pub fn monoid(&self) -> &FiniteMonoid {
        &self.monoid
    }

    pub fn rfix(&self, a: usize) -> &FixedBitSet {
        &self.rfix[a]
    }

    /// `a ⪯ b`.
    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.rfix[b].is_subset(&self.rfix[a])
    }

    /// `a ≺ b`.
    pub fn lt(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) && !self.leq(b, a)
    }

    pub fn is_unit(&self, a: usize) -> bool {
        let one = self.monoid.identity();
        self.leq(a, one) && self.leq(one, a)
    }

    pub fn non_units(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.monoid.size()).filter(|&a| !self.is_unit(a))
    }

    pub fn height(&self, x: usize) -> usize {
        self.heights[x]
    }

    pub fn heights(&self) -> &[usize] {
        &self.heights
    }

    /// Longest strictly descending chain of non-units from each element.
    /// Equivalent elements share an rfix set, so they are handled as one
    /// class, in order of decreasing rfix size.
    fn compute_heights(&self) -> Vec<usize> {
        let m = self.monoid.size();
        let mut classes: Vec<(FixedBitSet, Vec<usize>)> = Vec::new();
        for a in self.non_units() {
            match classes.iter_mut().find(|(set, _)| *set == self.rfix[a]) {
                Some((_, members)) => members.push(a),
                None => classes.push((self.rfix[a].clone(), vec![a])),
            }
        }
        classes.sort_by_key(|(set, _)| std::cmp::Reverse(set.count_ones(..)));
        let mut class_height = vec![0usize; classes.len()];
        for i in 0..classes.len() {
            let below = (0..i)
                .filter(|&j| {
                    let (bigger, smaller) = (&classes[j].0, &classes[i].0);
                    smaller.is_subset(bigger) && bigger != smaller
                })
                .map(|j| class_height[j])
                .max()
                .unwrap_or(0);
            class_height[i] = below + 1;
        }
        let mut heights = vec![0; m];
        for (i, (_, members)) in classes.iter().enumerate() {
            for &a in members {
                heights[a] = class_height[i];
            }
        }
        heights
    }

    pub fn height_table(&self, max_degree: usize) -> HeightTable {
        HeightTable {
            heights: self.heights.clone(),
            quark: (0..self.monoid.size()).map(|x| self.is_quark(x)).collect(),
            irreducible: (2..=max_degree)
                .map(|s| {
                    let set = irreducibles_of_degree(self, s);
                    (0..self.monoid.size()).map(|x| set.contains(x)).collect()
                })
                .collect(),
        }
    }

    pub fn is_quark(&self, x: usize) -> bool {
        !self.is_unit(x) && !self.non_units().any(|b| self.lt(b, x))
    }

    /// Shortest factorization `x = b_1 ⋯ b_k`, `2 <= k <= s`, into non-units
    /// strictly below `x`; ascending scan, pairs before triples.
    pub fn strict_split(&self, x: usize, s: usize) -> Option<Vec<usize>> {
        let below: Vec<usize> = self.non_units().filter(|&b| self.lt(b, x)).collect();
        if below.is_empty() {
            return None;
        }
        let h = &self.monoid;
        let m = h.size();
        let mut layers: Vec<Vec<Option<(usize, usize)>>> = Vec::new();
        let mut current = FixedBitSet::with_capacity(m);
        for &b in &below {
            current.insert(b);
        }
        for _ in 2..=s {
            let mut parent = vec![None; m];
            let mut next = FixedBitSet::with_capacity(m);
            for w in current.ones() {
                for &y in &below {
                    let z = h.mul(w, y);
                    if !next.contains(z) {
                        next.insert(z);
                        parent[z] = Some((w, y));
                    }
                }
            }
            layers.push(parent);
            if next.contains(x) {
                let mut factors = Vec::new();
                let mut z = x;
                for layer in layers.iter().rev() {
                    let (w, y) = layer[z].expect("reached elements have parents");
                    factors.push(y);
                    z = w;
                }
                factors.push(z);
                factors.reverse();
                return Some(factors);
            }
            current = next;
        }
        None
    }
}

/// Every element that is a unit; for the rFix-preorder this is exactly the
/// identity.
pub fn preorder_units(view: &PreorderView) -> Result<Vec<usize>> {
    let units: Vec<usize> = (0..view.monoid().size()).filter(|&a| view.is_unit(a)).collect();
    if units != [view.monoid().identity()] {
        return Err(Error::InternalInconsistency(format!(
            "units {units:?} besides the identity"
        )));
    }
    Ok(units)
}

pub fn quarks(view: &PreorderView) -> FixedBitSet {
    let mut set = FixedBitSet::with_capacity(view.monoid().size());
    for x in view.non_units() {
        if view.is_quark(x) {
            set.insert(x);
        }
    }
    set
}

pub fn irreducibles_of_degree(view: &PreorderView, s: usize) -> FixedBitSet {
    assert!(s >= 2, "degree must be at least 2");
    let mut set = FixedBitSet::with_capacity(view.monoid().size());
    for x in view.non_units() {
        if view.strict_split(x, s).is_none() {
            set.insert(x);
        }
    }
    set
}

/// Recursive splitting into degree-`s` irreducibles; at most
/// `s^(hgt(x) - 1)` factors.
pub fn factor_into_irreducibles(view: &PreorderView, x: usize, s: usize) -> Result<Vec<usize>> {
    if view.is_unit(x) {
        return Err(Error::UnitInput(x));
    }
    let mut out = Vec::new();
    irreducible_rec(view, x, s, &mut out);
    Ok(out)
}

fn irreducible_rec(view: &PreorderView, x: usize, s: usize, out: &mut Vec<usize>) {
    match view.strict_split(x, s) {
        None => out.push(x),
        Some(parts) => {
            for y in parts {
                irreducible_rec(view, y, s, out);
            }
        }
    }
}

/// A factorization `x = y_1 ⋯ y_k`, `2 <= k <= s`, into non-units
/// `y_i ⪯ x` with `Σ hgt(y_i) <= hgt(x) + k - 2`, minimizing the height sum
/// for each `k`; `None` if no such split exists.
pub fn height_split(view: &PreorderView, x: usize, s: usize) -> Option<Vec<usize>> {
    let h = view.monoid();
    let m = h.size();
    let cands: Vec<usize> = view.non_units().filter(|&y| view.leq(y, x)).collect();
    let mut best: Vec<Option<usize>> = vec![None; m];
    for &y in &cands {
        best[y] = Some(view.height(y));
    }
    let mut layers: Vec<Vec<Option<(usize, usize)>>> = Vec::new();
    for k in 2..=s {
        let mut next: Vec<Option<usize>> = vec![None; m];
        let mut parent = vec![None; m];
        for (w, bw) in best.iter().enumerate() {
            let Some(bw) = *bw else { continue };
            for &y in &cands {
                let z = h.mul(w, y);
                let total = bw + view.height(y);
                if next[z].is_none_or(|cur| total < cur) {
                    next[z] = Some(total);
                    parent[z] = Some((w, y));
                }
            }
        }
        layers.push(parent);
        if next[x].is_some_and(|total| total + 2 <= view.height(x) + k) {
            let mut factors = Vec::new();
            let mut z = x;
            for layer in layers.iter().rev() {
                let (w, y) = layer[z].expect("reached elements have parents");
                factors.push(y);
                z = w;
            }
            factors.push(z);
            factors.reverse();
            return Some(factors);
        }
        best = next;
    }
    None
}

/// Recursive splitting into quarks under the height-sum condition; at most
/// `(s - 1) hgt(x) - (s - 2)` factors when every split exists.
pub fn factor_into_quarks(view: &PreorderView, x: usize, s: usize) -> Result<Vec<usize>> {
    if view.is_unit(x) {
        return Err(Error::UnitInput(x));
    }
    let mut out = Vec::new();
    quark_rec(view, x, s, &mut out)?;
    Ok(out)
}

fn quark_rec(view: &PreorderView, x: usize, s: usize, out: &mut Vec<usize>) -> Result<()> {
    if view.is_quark(x) {
        out.push(x);
        return Ok(());
    }
    let parts = height_split(view, x, s).ok_or(Error::HypothesisFailed(x))?;
    for y in parts {
        quark_rec(view, y, s, out)?;
    }
    Ok(())
}
