//! Smith normal form of sparse integer matrices.
//!
//! The relator exponent matrices this crate produces are huge but shallow:
//! tens of thousands of rows, a couple of thousand columns, a dozen small
//! entries per row, and almost every column eliminable with a `±1` pivot.
//! The computation therefore runs in two phases: a sparse elimination that
//! repeatedly picks a unit pivot with a Markowitz-style fill estimate and
//! deletes its row and column (each such pivot contributes an invariant
//! factor 1), followed by a classical dense reduction of whatever core
//! remains.

use num::traits::{One, Signed, Zero};
use num::BigInt;
use std::collections::{HashMap, HashSet};

/// One sparse row: sorted, deduplicated, nonzero entries.
pub type SparseRow = Vec<(usize, BigInt)>;

/// Invariant factors of the integer matrix with the given rows.
///
/// Returns `(rank, torsion)`: `torsion` lists the invariant factors
/// greater than one in divisibility order; the free rank of the cokernel
/// is `ncols - rank`.
pub fn invariant_factors(rows: Vec<SparseRow>, ncols: usize) -> (usize, Vec<BigInt>) {
    let mut active: Vec<Option<SparseRow>> = Vec::new();
    let mut seen: HashSet<SparseRow> = HashSet::new();
    for row in rows {
        let row = normalize_row(row);
        if row.is_empty() {
            continue;
        }
        if seen.insert(row.clone()) {
            active.push(Some(row));
        }
    }

    let mut col_rows: HashMap<usize, HashSet<usize>> = HashMap::new();
    for (i, row) in active.iter().enumerate() {
        for (j, _) in row.as_ref().unwrap() {
            col_rows.entry(*j).or_default().insert(i);
        }
    }

    let mut unit_pivots = 0usize;
    loop {
        let Some((pi, pj)) = best_unit_pivot(&active, &col_rows) else {
            break;
        };
        let pivot_row = active[pi].take().unwrap();
        for (j, _) in &pivot_row {
            col_rows.get_mut(j).unwrap().remove(&pi);
        }
        let pivot_val = pivot_row
            .iter()
            .find(|(j, _)| *j == pj)
            .unwrap()
            .1
            .clone();
        debug_assert!(pivot_val.is_one() || (-&pivot_val).is_one());

        let targets: Vec<usize> = col_rows
            .get(&pj)
            .map(|s| s.iter().copied().collect())
            .unwrap_or_default();
        for ri in targets {
            let row = active[ri].take().unwrap();
            let coeff = row.iter().find(|(j, _)| *j == pj).unwrap().1.clone();
            // row -= (coeff / pivot) * pivot_row, exact since pivot = ±1
            let factor = if pivot_val.is_one() { coeff } else { -coeff };
            let new_row = row_sub_scaled(&row, &pivot_row, &factor);
            for (j, _) in &row {
                col_rows.get_mut(j).unwrap().remove(&ri);
            }
            if new_row.is_empty() {
                continue;
            }
            for (j, _) in &new_row {
                col_rows.entry(*j).or_default().insert(ri);
            }
            active[ri] = Some(new_row);
        }
        col_rows.remove(&pj);
        unit_pivots += 1;
    }

    // dense core: remap the surviving columns and run the classical
    // reduction
    let survivors: Vec<SparseRow> = active.into_iter().flatten().collect();
    let mut cols: Vec<usize> = survivors
        .iter()
        .flat_map(|r| r.iter().map(|(j, _)| *j))
        .collect();
    cols.sort_unstable();
    cols.dedup();
    let col_of: HashMap<usize, usize> = cols.iter().enumerate().map(|(k, j)| (*j, k)).collect();
    let mut dense: Vec<Vec<BigInt>> = survivors
        .iter()
        .map(|r| {
            let mut row = vec![BigInt::zero(); cols.len()];
            for (j, v) in r {
                row[col_of[j]] = v.clone();
            }
            row
        })
        .collect();

    let diag = dense_smith_diagonal(&mut dense);
    let rank = unit_pivots + diag.len();
    let torsion: Vec<BigInt> = diag.into_iter().filter(|v| *v > BigInt::from(1)).collect();
    let _ = ncols;
    (rank, torsion)
}

fn normalize_row(mut row: SparseRow) -> SparseRow {
    row.sort_by_key(|(j, _)| *j);
    let mut out: SparseRow = Vec::with_capacity(row.len());
    for (j, v) in row {
        if let Some(last) = out.last_mut() {
            if last.0 == j {
                last.1 += v;
                if last.1.is_zero() {
                    out.pop();
                }
                continue;
            }
        }
        if !v.is_zero() {
            out.push((j, v));
        }
    }
    out
}

/// The `±1` entry minimizing `(row_nnz - 1) * (col_nnz - 1)`.
fn best_unit_pivot(
    active: &[Option<SparseRow>],
    col_rows: &HashMap<usize, HashSet<usize>>,
) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), usize)> = None;
    for (i, row) in active.iter().enumerate() {
        let Some(row) = row else { continue };
        let rn = row.len() - 1;
        for (j, v) in row {
            if !v.is_one() && !(-v).is_one() {
                continue;
            }
            let cn = col_rows[j].len() - 1;
            let score = rn * cn;
            if best.as_ref().is_none_or(|(_, s)| score < *s) {
                best = Some(((i, *j), score));
                if score == 0 {
                    return Some((i, *j));
                }
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn row_sub_scaled(row: &SparseRow, pivot: &SparseRow, factor: &BigInt) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let mut a = row.iter().peekable();
    let mut b = pivot.iter().peekable();
    loop {
        match (a.peek(), b.peek()) {
            (Some((ja, va)), Some((jb, vb))) => {
                if ja < jb {
                    out.push((*ja, va.clone()));
                    a.next();
                } else if jb < ja {
                    let v = -(factor * vb);
                    if !v.is_zero() {
                        out.push((*jb, v));
                    }
                    b.next();
                } else {
                    let v = va - factor * vb;
                    if !v.is_zero() {
                        out.push((*ja, v));
                    }
                    a.next();
                    b.next();
                }
            }
            (Some((ja, va)), None) => {
                out.push((*ja, va.clone()));
                a.next();
            }
            (None, Some((jb, vb))) => {
                let v = -(factor * vb);
                if !v.is_zero() {
                    out.push((*jb, v));
                }
                b.next();
            }
            (None, None) => break,
        }
    }
    out
}

/// Classical Smith reduction of a dense matrix; returns the nonzero
/// diagonal in divisibility order, all entries positive.
pub fn dense_smith_diagonal(m: &mut Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let nrows = m.len();
    let ncols = if nrows == 0 { 0 } else { m[0].len() };
    let steps = nrows.min(ncols);
    let mut diag: Vec<BigInt> = Vec::new();

    for t in 0..steps {
        // smallest nonzero entry of the trailing block as pivot
        let Some((mut pi, mut pj)) = smallest_nonzero(m, t) else {
            break;
        };
        loop {
            m.swap(t, pi);
            for row in m.iter_mut() {
                row.swap(t, pj);
            }
            // clear column t by row operations with rounded quotients
            let mut dirty = false;
            for i in 0..nrows {
                if i == t || m[i][t].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&m[i][t], &m[t][t]);
                if !q.is_zero() {
                    for j in t..ncols {
                        let delta = &q * &m[t][j];
                        m[i][j] -= delta;
                    }
                }
                if !m[i][t].is_zero() {
                    dirty = true;
                }
            }
            // clear row t by column operations
            for j in (t + 1)..ncols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = rounded_quotient(&m[t][j], &m[t][t]);
                if !q.is_zero() {
                    for i in 0..nrows {
                        let delta = &q * &m[i][t];
                        m[i][j] -= delta;
                    }
                }
                if !m[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                let (ni, nj) = smallest_nonzero(m, t).unwrap();
                pi = ni;
                pj = nj;
                continue;
            }
            // pivot must divide every remaining entry
            if let Some((di, _)) = find_nondivisible(m, t) {
                for j in t..ncols {
                    let add = m[di][j].clone();
                    m[t][j] += add;
                }
                let (ni, nj) = smallest_nonzero(m, t).unwrap();
                pi = ni;
                pj = nj;
                continue;
            }
            break;
        }
        if m[t][t].is_negative() {
            for j in t..ncols {
                m[t][j] = -m[t][j].clone();
            }
        }
        diag.push(m[t][t].clone());
    }

    diag.retain(|v| !v.is_zero());
    diag
}

fn smallest_nonzero(m: &[Vec<BigInt>], from: usize) -> Option<(usize, usize)> {
    let mut best: Option<((usize, usize), BigInt)> = None;
    for (i, row) in m.iter().enumerate().skip(from) {
        for (j, v) in row.iter().enumerate().skip(from) {
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.as_ref().is_none_or(|(_, b)| a < *b) {
                best = Some(((i, j), a));
            }
        }
    }
    best.map(|(pos, _)| pos)
}

fn find_nondivisible(m: &[Vec<BigInt>], t: usize) -> Option<(usize, usize)> {
    let pivot = &m[t][t];
    for (i, row) in m.iter().enumerate().skip(t + 1) {
        for (j, v) in row.iter().enumerate().skip(t + 1) {
            if !(v % pivot).is_zero() {
                return Some((i, j));
            }
        }
    }
    None
}

fn rounded_quotient(a: &BigInt, b: &BigInt) -> BigInt {
    // quotient minimizing |a - q b|
    let two = BigInt::from(2);
    let (q, r) = (a / b, a % b);
    if &r.abs() * &two > b.abs() {
        if (r.is_negative()) == (b.is_negative()) {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}
