//! Invariant factors of sparse integer matrices.

use super::int::Int;

/// Integer matrix stored by columns; each column is sorted by row and holds
/// no zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: Vec<Vec<(u32, Int)>>,
}

impl SparseMatrix {
    pub fn new(rows: usize) -> SparseMatrix {
        SparseMatrix { rows, cols: Vec::new() }
    }

    pub fn from_dense(rows: &[Vec<i64>]) -> SparseMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        let mut m = SparseMatrix::new(r);
        for j in 0..c {
            m.push_column((0..r).filter(|&i| rows[i][j] != 0).map(|i| (i as u32, Int::from(rows[i][j]))).collect());
        }
        m
    }

    /// Append a column; entries are sorted and zeros dropped.
    pub fn push_column(&mut self, mut entries: Vec<(u32, Int)>) {
        entries.retain(|(_, v)| !v.is_zero());
        entries.sort_by_key(|e| e.0);
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        debug_assert!(entries.last().is_none_or(|e| (e.0 as usize) < self.rows));
        self.cols.push(entries);
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &[(u32, Int)] {
        &self.cols[j]
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// `self * other`.
    pub fn mul(&self, other: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols(), other.rows());
        let mut out = SparseMatrix::new(self.rows);
        for col in &other.cols {
            let mut acc: std::collections::BTreeMap<u32, Int> = Default::default();
            for (k, b) in col {
                for (i, a) in &self.cols[*k as usize] {
                    let e = acc.entry(*i).or_insert(Int::ZERO);
                    *e = &*e + &(a * b);
                }
            }
            out.push_column(acc.into_iter().collect());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(Vec::is_empty)
    }
}

/// Nonzero invariant factors `d₁ | d₂ | …`, all positive. Their count is the
/// rank.
///
/// Pivots on unit entries first, choosing the one whose row is shortest, and
/// eliminates by column operations; each unit pivot contributes a factor 1.
/// Whatever remains is diagonalized densely and the diagonal is normalized
/// with gcd/lcm steps.
pub fn smith_normal_form(m: &SparseMatrix) -> Vec<Int> {
    let mut cols = m.cols.clone();
    let mut row_cols: Vec<Vec<u32>> = vec![Vec::new(); m.rows];
    for (j, col) in cols.iter().enumerate() {
        for (r, _) in col {
            row_cols[*r as usize].push(j as u32);
        }
    }
    let mut active = vec![true; cols.len()];
    let mut units = 0usize;
    let mut order: Vec<usize> = (0..cols.len()).collect();
    order.sort_by_key(|&j| (cols[j].len(), j));
    loop {
        let mut progress = false;
        for &c in &order {
            if !active[c] || cols[c].is_empty() {
                continue;
            }
            let Some((r, v)) = cols[c]
                .iter()
                .filter(|(_, v)| v.is_unit())
                .min_by_key(|(r, _)| (row_cols[*r as usize].len(), *r))
                .cloned()
            else {
                continue;
            };
            active[c] = false;
            units += 1;
            progress = true;
            let pivot_col = std::mem::take(&mut cols[c]);
            let mut users = std::mem::take(&mut row_cols[r as usize]);
            users.sort_unstable();
            users.dedup();
            for &c2 in &users {
                let c2 = c2 as usize;
                if c2 == c || !active[c2] {
                    continue;
                }
                let Ok(pos) = cols[c2].binary_search_by_key(&r, |e| e.0) else {
                    continue;
                };
                // col c2 -= (a / v) * pivot_col, and a / v = a * v for a unit v
                let f = &cols[c2][pos].1 * &v;
                let merged = axpy(&cols[c2], &f, &pivot_col, &mut |row| row_cols[row as usize].push(c2 as u32));
                cols[c2] = merged;
            }
        }
        if !progress {
            break;
        }
    }

    let residual: Vec<&Vec<(u32, Int)>> =
        (0..cols.len()).filter(|&j| active[j] && !cols[j].is_empty()).map(|j| &cols[j]).collect();
    let mut factors = vec![Int::ONE; units];
    if !residual.is_empty() {
        let mut rows: Vec<u32> = residual.iter().flat_map(|c| c.iter().map(|e| e.0)).collect();
        rows.sort_unstable();
        rows.dedup();
        let mut dense = vec![vec![Int::ZERO; residual.len()]; rows.len()];
        for (j, col) in residual.iter().enumerate() {
            for (r, v) in col.iter() {
                dense[rows.binary_search(r).unwrap()][j] = v.clone();
            }
        }
        factors.extend(normalize_diagonal(diagonalize(dense)));
    }
    factors
}

/// `x - f * y` for sorted sparse columns; `on_new` sees rows present in the
/// result but not in `x`.
fn axpy(x: &[(u32, Int)], f: &Int, y: &[(u32, Int)], on_new: &mut impl FnMut(u32)) -> Vec<(u32, Int)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take_x = j >= y.len() || (i < x.len() && x[i].0 < y[j].0);
        let take_y = i >= x.len() || (j < y.len() && y[j].0 < x[i].0);
        if take_x {
            out.push(x[i].clone());
            i += 1;
        } else if take_y {
            on_new(y[j].0);
            out.push((y[j].0, -&(f * &y[j].1)));
            j += 1;
        } else {
            let v = &x[i].1 - &(f * &y[j].1);
            if !v.is_zero() {
                out.push((x[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Diagonal entries (nonzero, positive) of a diagonal form of `a`.
fn diagonalize(mut a: Vec<Vec<Int>>) -> Vec<Int> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut diag = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the remaining block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !a[i][j].is_zero() && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        a.swap(t, bi);
        for row in a.iter_mut() {
            row.swap(t, bj);
        }
        let p = a[t][t].clone();
        let mut clean = true;
        for i in t + 1..rows {
            if a[i][t].is_zero() {
                continue;
            }
            let q = a[i][t].div_floor(&p);
            for j in t..cols {
                let d = &q * &a[t][j];
                a[i][j] = &a[i][j] - &d;
            }
            clean &= a[i][t].is_zero();
        }
        for j in t + 1..cols {
            if a[t][j].is_zero() {
                continue;
            }
            let q = a[t][j].div_floor(&p);
            for row in a.iter_mut().skip(t) {
                let d = &q * &row[t];
                row[j] = &row[j] - &d;
            }
            clean &= a[t][j].is_zero();
        }
        if clean {
            diag.push(p.abs());
            t += 1;
        }
    }
    diag
}

/// Turn any diagonal into the divisibility chain with the same cokernel.
fn normalize_diagonal(mut d: Vec<Int>) -> Vec<Int> {
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let g = d[i].gcd(&d[j]);
            let l = &d[i].div_exact(&g) * &d[j];
            d[i] = g;
            d[j] = l;
        }
    }
    d
}
