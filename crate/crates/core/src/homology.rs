//! Integer homology through Smith normal form.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde_json::{json, Map, Value};

use crate::budget::Deadline;
use crate::complex::ChainComplex;
use crate::error::{Error, Result};
use crate::matrix::SparseMatrix;

/// Invariant factors `d_1 | d_2 | ... | d_r` of an integer matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SnfResult {
    pub invariant_factors: Vec<BigInt>,
}

impl SnfResult {
    pub fn rank(&self) -> usize {
        self.invariant_factors.len()
    }

    /// Factors greater than one, i.e. the torsion they produce in a cokernel.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }

    pub fn divisibility_holds(&self) -> bool {
        self.invariant_factors.iter().all(|d| d.is_positive())
            && self
                .invariant_factors
                .windows(2)
                .all(|p| (&p[1] % &p[0]).is_zero())
    }
}

pub fn snf(m: &SparseMatrix) -> SnfResult {
    snf_within(m, &Deadline::none()).expect("no deadline")
}

pub fn snf_dense(m: &[Vec<i64>]) -> SnfResult {
    snf(&SparseMatrix::from_dense(m))
}

/// Smith normal form in two phases. Unit pivots are eliminated sparsely
/// in i64 arithmetic, choosing a shortest column and then its shortest row
/// with a ±1 entry. Each such pivot splits off an invariant factor 1. The
/// remainder then goes through a dense BigInt reduction.
pub fn snf_within(m: &SparseMatrix, deadline: &Deadline) -> Result<SnfResult> {
    let mut elim = UnitElimination::new(m);
    let ones = elim.run(deadline)?;
    let residual = elim.residual();
    let mut factors = vec![BigInt::one(); ones];
    factors.extend(dense_snf(residual, deadline)?);
    Ok(SnfResult {
        invariant_factors: factors,
    })
}

struct UnitElimination {
    rows: Vec<Vec<(usize, i64)>>,
    cols: Vec<BTreeSet<usize>>,
    alive: Vec<bool>,
}

impl UnitElimination {
    fn new(m: &SparseMatrix) -> Self {
        let mut rows = vec![Vec::new(); m.rows()];
        let mut cols = vec![BTreeSet::new(); m.cols()];
        // Triplets are column-major, so each row receives columns in order.
        for &(r, c, v) in m.triplets() {
            rows[r].push((c, v));
            cols[c].insert(r);
        }
        UnitElimination {
            rows,
            alive: vec![true; m.cols()],
            cols,
        }
    }

    fn entry(&self, r: usize, c: usize) -> i64 {
        let row = &self.rows[r];
        row.binary_search_by_key(&c, |&(j, _)| j)
            .map_or(0, |i| row[i].1)
    }

    /// Returns the number of unit pivots eliminated.
    fn run(&mut self, deadline: &Deadline) -> Result<usize> {
        let mut heap: BinaryHeap<Reverse<(usize, usize)>> = self
            .cols
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_empty())
            .map(|(c, s)| Reverse((s.len(), c)))
            .collect();
        let mut ones = 0;
        while let Some(Reverse((len, c))) = heap.pop() {
            if !self.alive[c] || self.cols[c].len() != len || len == 0 {
                continue;
            }
            if ones % 256 == 0 {
                deadline.check()?;
            }
            let pivot = self.cols[c]
                .iter()
                .copied()
                .filter(|&r| self.entry(r, c).abs() == 1)
                .min_by_key(|&r| (self.rows[r].len(), r));
            let Some(pr) = pivot else {
                continue;
            };
            match self.eliminate(pr, c) {
                Some(touched) => {
                    ones += 1;
                    for j in touched {
                        if self.alive[j] && !self.cols[j].is_empty() {
                            heap.push(Reverse((self.cols[j].len(), j)));
                        }
                    }
                }
                // An update would overflow i64: leave the rest to BigInt.
                None => break,
            }
        }
        Ok(ones)
    }

    /// Clears column `c` using the unit at `(pr, c)`, then drops row `pr`
    /// and column `c`. Returns the touched columns, or `None` if a row
    /// update overflowed (that row is then left unchanged).
    fn eliminate(&mut self, pr: usize, c: usize) -> Option<Vec<usize>> {
        let pivot_row = self.rows[pr].clone();
        let p = self.entry(pr, c);
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&r| r != pr).collect();
        for r in others {
            let f = self.entry(r, c) * p;
            let merged = merge_sub(&self.rows[r], &pivot_row, f)?;
            for &(j, _) in &pivot_row {
                if merged.binary_search_by_key(&j, |&(k, _)| k).is_ok() {
                    self.cols[j].insert(r);
                } else {
                    self.cols[j].remove(&r);
                }
            }
            self.rows[r] = merged;
        }
        for &(j, _) in &pivot_row {
            self.cols[j].remove(&pr);
        }
        self.rows[pr].clear();
        self.alive[c] = false;
        Some(pivot_row.into_iter().map(|(j, _)| j).collect())
    }

    fn residual(&self) -> Vec<Vec<BigInt>> {
        let live_cols: Vec<usize> = (0..self.cols.len())
            .filter(|&c| self.alive[c] && !self.cols[c].is_empty())
            .collect();
        let mut col_pos = vec![usize::MAX; self.cols.len()];
        for (i, &c) in live_cols.iter().enumerate() {
            col_pos[c] = i;
        }
        self.rows
            .iter()
            .filter(|row| !row.is_empty())
            .map(|row| {
                let mut dense = vec![BigInt::zero(); live_cols.len()];
                for &(j, v) in row {
                    dense[col_pos[j]] = BigInt::from(v);
                }
                dense
            })
            .collect()
    }
}

/// `a - f * b` over sorted sparse rows, `None` on overflow.
fn merge_sub(a: &[(usize, i64)], b: &[(usize, i64)], f: i64) -> Option<Vec<(usize, i64)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i]);
            i += 1;
        } else if take_b {
            out.push((b[j].0, f.checked_mul(b[j].1)?.checked_neg()?));
            j += 1;
        } else {
            let v = a[i].1.checked_sub(f.checked_mul(b[j].1)?)?;
            if v != 0 {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    Some(out)
}

/// Dense Smith normal form with a minimum-absolute-value pivot (ties: row,
/// then column). Returns the positive diagonal.
#[allow(clippy::needless_range_loop)]
fn dense_snf(mut a: Vec<Vec<BigInt>>, deadline: &Deadline) -> Result<Vec<BigInt>> {
    let m = a.len();
    let n = a.first().map_or(0, Vec::len);
    let mut factors = Vec::new();
    for t in 0..m.min(n) {
        deadline.check()?;
        let Some((pi, pj)) = min_entry(&a, (t..m).flat_map(|i| (t..n).map(move |j| (i, j)))) else {
            break;
        };
        move_to_pivot(&mut a, t, pi, pj);
        loop {
            let mut clean = true;
            for i in t + 1..m {
                if !a[i][t].is_zero() {
                    let q = &a[i][t] / &a[t][t];
                    for j in t..n {
                        let d = &q * &a[t][j];
                        a[i][j] -= d;
                    }
                    clean &= a[i][t].is_zero();
                }
            }
            for j in t + 1..n {
                if !a[t][j].is_zero() {
                    let q = &a[t][j] / &a[t][t];
                    for i in t..m {
                        let d = &q * &a[i][t];
                        a[i][j] -= d;
                    }
                    clean &= a[t][j].is_zero();
                }
            }
            if !clean {
                let cross = (t..m).map(|i| (i, t)).chain((t + 1..n).map(|j| (t, j)));
                let (pi, pj) = min_entry(&a, cross).expect("pivot is nonzero");
                move_to_pivot(&mut a, t, pi, pj);
                continue;
            }
            let bad = (t + 1..m).find(|&i| (t + 1..n).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match bad {
                Some(i) => {
                    for j in t..n {
                        let v = a[i][j].clone();
                        a[t][j] += v;
                    }
                }
                None => break,
            }
        }
        factors.push(a[t][t].abs());
    }
    Ok(factors)
}

fn min_entry(
    a: &[Vec<BigInt>],
    cells: impl Iterator<Item = (usize, usize)>,
) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for (i, j) in cells {
        if a[i][j].is_zero() {
            continue;
        }
        let better = match best {
            None => true,
            Some((bi, bj)) => a[i][j].abs() < a[bi][bj].abs(),
        };
        if better {
            best = Some((i, j));
        }
    }
    best
}

fn move_to_pivot(a: &mut [Vec<BigInt>], t: usize, i: usize, j: usize) {
    a.swap(t, i);
    if j != t {
        for row in a.iter_mut() {
            row.swap(t, j);
        }
    }
}

/// Rank over the rationals by fraction-free (Bareiss) elimination.
pub fn rational_rank(m: &SparseMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|row| row.into_iter().map(BigInt::from).collect())
        .collect();
    let rows = a.len();
    let cols = m.cols();
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else {
            continue;
        };
        a.swap(rank, p);
        for r in rank + 1..rows {
            for j in c + 1..cols {
                let v = (&a[r][j] * &a[rank][c] - &a[r][c] * &a[rank][j]) / &prev;
                a[r][j] = v;
            }
            a[r][c] = BigInt::zero();
        }
        prev = a[rank][c].clone();
        rank += 1;
    }
    rank
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeHomology {
    pub betti: usize,
    /// Invariant factors above one; `[2]` is a single ℤ/2 summand.
    pub torsion: Vec<BigInt>,
    /// Cells one degree up were not built, so `betti` is an upper bound.
    pub truncated: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomologySummary {
    pub degrees: Vec<DegreeHomology>,
    pub cell_counts: Vec<usize>,
    /// Alternating sum of cell counts over all built dimensions.
    pub euler: i64,
}

impl HomologySummary {
    pub fn betti(&self, n: usize) -> usize {
        self.degrees.get(n).map_or(0, |d| d.betti)
    }

    pub fn torsion(&self, n: usize) -> &[BigInt] {
        self.degrees.get(n).map_or(&[], |d| &d.torsion)
    }

    pub fn has_torsion(&self, n: usize, order: u32) -> bool {
        self.torsion(n).iter().any(|d| *d == BigInt::from(order))
    }

    pub fn to_json_value(&self) -> Value {
        let mut map = Map::new();
        for (n, d) in self.degrees.iter().enumerate() {
            let torsion: Vec<Value> = d
                .torsion
                .iter()
                .map(|t| {
                    t.to_u64()
                        .map_or_else(|| json!(t.to_string()), |v| json!(v))
                })
                .collect();
            map.insert(
                n.to_string(),
                json!({"betti": d.betti, "torsion": torsion, "truncated": d.truncated}),
            );
        }
        map.insert("euler".into(), json!(self.euler));
        Value::Object(map)
    }
}

pub fn homology_summary(cx: &ChainComplex, max_deg: usize) -> Result<HomologySummary> {
    homology_summary_within(cx, max_deg, &Deadline::none())
}

/// Homology in degrees `0..=max_deg`. Fails with `InconsistentComplex` if
/// some pair of consecutive boundaries does not compose to zero.
pub fn homology_summary_within(
    cx: &ChainComplex,
    max_deg: usize,
    deadline: &Deadline,
) -> Result<HomologySummary> {
    let top = cx.top_dim();
    for n in 1..top {
        if !cx.boundary(n)?.multiply(cx.boundary(n + 1)?).is_zero() {
            return Err(Error::InconsistentComplex { dim: n });
        }
    }

    let needed: Vec<usize> = (1..=top.min(max_deg + 1)).collect();
    let results: Vec<Result<SnfResult>> = std::thread::scope(|s| {
        let handles: Vec<_> = needed
            .iter()
            .map(|&n| {
                let m = cx.boundary(n).expect("in range");
                s.spawn(move || snf_within(m, deadline))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("snf worker panicked"))
            .collect()
    });
    let mut snfs: Vec<Option<SnfResult>> = vec![None; top + 2];
    for (n, r) in needed.into_iter().zip(results) {
        snfs[n] = Some(r?);
    }
    let rank = |n: usize| {
        snfs.get(n)
            .and_then(Option::as_ref)
            .map_or(0, SnfResult::rank)
    };

    let cap = cx.max_dim();
    let cap_populated = cx.cell_count(cap) > 0;
    let degrees = (0..=max_deg)
        .map(|n| {
            let c = cx.cell_count(n);
            DegreeHomology {
                betti: c - rank(n) - rank(n + 1),
                torsion: snfs
                    .get(n + 1)
                    .and_then(Option::as_ref)
                    .map_or_else(Vec::new, SnfResult::torsion),
                truncated: n >= cap && cap_populated,
            }
        })
        .collect();
    let cell_counts: Vec<usize> = (0..=top).map(|n| cx.cell_count(n)).collect();
    let euler = cell_counts
        .iter()
        .enumerate()
        .map(|(n, &c)| if n % 2 == 0 { c as i64 } else { -(c as i64) })
        .sum();
    Ok(HomologySummary {
        degrees,
        cell_counts,
        euler,
    })
}
