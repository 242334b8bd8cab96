//! Elimination kernels shared by the rank, kernel, and inverse operations.
//!
//! Pivot rule: over a field, the first non-zero candidate; over `Z_(p)`, the
//! candidate of minimum valuation, earliest index on ties. A minimum-valuation
//! pivot divides every other candidate, so all eliminations stay inside
//! `Z_(p)` and the transforms are unimodular.

use crate::error::{Error, Result};
use crate::linalg::matrix::Vector;
use crate::rings::{Ring, RingKind, Scalar, Valuation};

fn choose_pivot<'a>(ring: Ring, candidates: impl Iterator<Item = (usize, &'a Scalar)>) -> Option<usize> {
    match ring.kind() {
        RingKind::Zp => {
            let mut best: Option<(usize, Valuation)> = None;
            for (j, x) in candidates {
                let v = ring.valuation(x);
                if v == Valuation::Infinite {
                    continue;
                }
                if best.is_none_or(|(_, bv)| v < bv) {
                    best = Some((j, v));
                }
            }
            best.map(|(j, _)| j)
        }
        _ => candidates.into_iter().find(|(_, x)| !x.is_zero()).map(|(j, _)| j),
    }
}

/// Outcome of unimodular column reduction of an `rows x cols` matrix `A`:
/// `A * transform` has its first `rank` columns independent and the rest
/// zero, so `transform`'s trailing columns form a kernel basis.
pub(crate) struct ColumnReduction {
    pub rank: usize,
    /// Columns of the `cols x cols` transform.
    pub transform: Vec<Vector>,
}

/// `rows` is the list of matrix rows, each of length `cols`.
pub(crate) fn column_reduce(ring: Ring, rows: &[Vector], cols: usize) -> ColumnReduction {
    let mut work: Vec<Vector> = (0..cols).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
    let mut transform: Vec<Vector> = (0..cols)
        .map(|j| {
            (0..cols)
                .map(|i| if i == j { ring.one() } else { ring.zero() })
                .collect()
        })
        .collect();
    let mut c = 0;
    for i in 0..rows.len() {
        if c == cols {
            break;
        }
        let Some(piv) = choose_pivot(ring, (c..cols).map(|j| (j, &work[j][i]))) else {
            continue;
        };
        work.swap(c, piv);
        transform.swap(c, piv);
        let pv = work[c][i].clone();
        for j in c + 1..cols {
            if work[j][i].is_zero() {
                continue;
            }
            let f = ring
                .exact_div(&work[j][i], &pv)
                .expect("pivot divides every entry of its row");
            let (head, tail) = work.split_at_mut(j);
            axpy(ring, &mut tail[0], &head[c], &f);
            let (head, tail) = transform.split_at_mut(j);
            axpy(ring, &mut tail[0], &head[c], &f);
        }
        c += 1;
    }
    ColumnReduction { rank: c, transform }
}

/// `y -= x * f`
fn axpy(ring: Ring, y: &mut Vector, x: &Vector, f: &Scalar) {
    for (yi, xi) in y.iter_mut().zip(x) {
        if !xi.is_zero() {
            *yi = ring.sub(yi, &ring.mul(xi, f));
        }
    }
}

pub(crate) fn rank_of_rows(ring: Ring, rows: &[Vector], cols: usize) -> usize {
    column_reduce(ring, rows, cols).rank
}

/// Rank of a list of vectors (as columns) over the fraction field.
pub(crate) fn rank_of_columns(ring: Ring, dim: usize, columns: &[Vector]) -> usize {
    let rows: Vec<Vector> = (0..dim)
        .map(|i| columns.iter().map(|c| c[i].clone()).collect())
        .collect();
    rank_of_rows(ring, &rows, columns.len())
}

/// Kernel basis of the `rows x cols` matrix given by `rows`.
pub(crate) fn kernel_of_rows(ring: Ring, rows: &[Vector], cols: usize) -> Vec<Vector> {
    let red = column_reduce(ring, rows, cols);
    red.transform.into_iter().skip(red.rank).collect()
}

/// Rank of the images of `columns` in the residue field. Over a field this is
/// the ordinary rank.
pub(crate) fn residue_rank(ring: Ring, dim: usize, columns: &[Vector]) -> usize {
    match ring.kind() {
        RingKind::Zp => {
            let p = ring.prime().expect("Z_(p) carries a prime");
            let fp = Ring::prime_field(p).expect("prime was validated");
            let reduced: Vec<Vector> = columns
                .iter()
                .map(|c| {
                    c.iter()
                        .map(|x| fp.int(ring.residue(x).expect("residue exists") as i64))
                        .collect()
                })
                .collect();
            rank_of_columns(fp, dim, &reduced)
        }
        _ => rank_of_columns(ring, dim, columns),
    }
}

/// Inverse of the `n x n` row-major matrix; fails unless the determinant is
/// a unit of the ring.
pub(crate) fn inverse(ring: Ring, n: usize, entries: &[Scalar]) -> Result<Vec<Scalar>> {
    let mut a: Vec<Vector> = (0..n).map(|i| entries[i * n..(i + 1) * n].to_vec()).collect();
    let mut inv: Vec<Vector> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { ring.one() } else { ring.zero() }).collect())
        .collect();
    for c in 0..n {
        let piv = choose_pivot(ring, (c..n).map(|i| (i, &a[i][c]))).ok_or(Error::NotInvertible)?;
        if !ring.is_unit(&a[piv][c]) {
            return Err(Error::NotInvertible);
        }
        a.swap(c, piv);
        inv.swap(c, piv);
        let pinv = ring.inv(&a[c][c])?;
        for x in a[c].iter_mut().chain(inv[c].iter_mut()) {
            *x = ring.mul(x, &pinv);
        }
        for i in 0..n {
            if i == c || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let (pa, pi) = (a[c].clone(), inv[c].clone());
            axpy(ring, &mut a[i], &pa, &f);
            axpy(ring, &mut inv[i], &pi, &f);
        }
    }
    Ok(inv.into_iter().flatten().collect())
}
