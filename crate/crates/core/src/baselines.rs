//! Comparators for the optimizer: exhaustive search, Reverse Cuthill-McKee
//! on the bipartite row/column graph, and best-improvement swap descent.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{bandwidth_cost, Arrangement, DataMatrix, Mode, ModeProfile, Permutation};

pub const DEFAULT_ORACLE_LIMIT: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleResult {
    pub optimal_cost: f64,
    pub optimal_arrangement: Arrangement,
    pub enumerated: u64,
}

fn factorial(k: usize) -> Option<u64> {
    (1..=k as u64).try_fold(1u64, |acc, v| acc.checked_mul(v))
}

/// Rearrange `v` into its lexicographic successor; false when `v` is the
/// last permutation.
fn next_permutation(v: &mut [usize]) -> bool {
    let Some(i) = v.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = v.iter().rposition(|&x| x > v[i]).expect("successor exists");
    v.swap(i, j);
    v[i + 1..].reverse();
    true
}

fn lex_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut cur: Vec<usize> = (0..k).collect();
    let mut all = vec![cur.clone()];
    while next_permutation(&mut cur) {
        all.push(cur.clone());
    }
    all
}

/// Exact minimum over all `m! * n!` arrangements. Ties resolve to the
/// lexicographically smallest `(rows, cols)` pair.
pub fn brute_force_optimum(a: &DataMatrix, limit: u64) -> Result<OracleResult> {
    let (m, n) = (a.rows(), a.cols());
    let space = factorial(m)
        .zip(factorial(n))
        .and_then(|(x, y)| x.checked_mul(y))
        .filter(|&s| s <= limit)
        .ok_or_else(|| {
            Error::Size(format!(
                "{m}! * {n}! arrangements exceed the limit of {limit}"
            ))
        })?;

    let row_perms = lex_permutations(m);
    let col_perms = lex_permutations(n);
    // (cost, row index, col index); the reduce keeps the earliest minimum.
    let (_, ri, ci) = row_perms
        .par_iter()
        .enumerate()
        .map(|(ri, rows)| {
            let rows = Permutation::try_from(rows.clone()).expect("generated permutation");
            let profile = ModeProfile::new(a, Mode::Cols, &rows);
            let mut best = (f64::INFINITY, ri, 0);
            for (ci, cols) in col_perms.iter().enumerate() {
                let c = profile.cost(cols);
                if c < best.0 {
                    best = (c, ri, ci);
                }
            }
            best
        })
        .reduce(
            || (f64::INFINITY, usize::MAX, usize::MAX),
            |x, y| {
                if y.0 < x.0 || (y.0 == x.0 && (y.1, y.2) < (x.1, x.2)) {
                    y
                } else {
                    x
                }
            },
        );
    let arrangement = Arrangement::new(
        Permutation::try_from(row_perms[ri].clone())?,
        Permutation::try_from(col_perms[ci].clone())?,
    );
    Ok(OracleResult {
        optimal_cost: bandwidth_cost(a, &arrangement)?,
        optimal_arrangement: arrangement,
        enumerated: space,
    })
}

/// Reverse Cuthill-McKee on the bipartite graph with an edge between row
/// `i` and column `j` whenever `|a_ij| > tau`, projected back onto rows and
/// columns.
///
/// Nodes `0..m` are rows and `m..m+n` are columns. Isolated rows and
/// columns keep their relative order after all connected nodes.
pub fn rcm_order(a: &DataMatrix, tau: f64) -> Arrangement {
    let (m, n) = (a.rows(), a.cols());
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); m + n];
    for i in 0..m {
        for (j, v) in a.row(i).iter().enumerate() {
            if v.abs() > tau {
                adj[i].push(m + j);
                adj[m + j].push(i);
            }
        }
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();
    for list in &mut adj {
        list.sort_by_key(|&v| (degree[v], v));
    }

    let mut by_degree: Vec<usize> = (0..m + n).filter(|&v| degree[v] > 0).collect();
    by_degree.sort_by_key(|&v| (degree[v], v));

    let mut visited = vec![false; m + n];
    let mut order = Vec::with_capacity(m + n);
    let mut queue = VecDeque::new();
    for &start in &by_degree {
        if visited[start] {
            continue;
        }
        visited[start] = true;
        queue.push_back(start);
        while let Some(v) = queue.pop_front() {
            order.push(v);
            for &w in &adj[v] {
                if !visited[w] {
                    visited[w] = true;
                    queue.push_back(w);
                }
            }
        }
    }
    order.reverse();
    order.extend((0..m + n).filter(|&v| degree[v] == 0));

    let rows: Vec<usize> = order.iter().copied().filter(|&v| v < m).collect();
    let cols: Vec<usize> = order.iter().filter(|&&v| v >= m).map(|&v| v - m).collect();
    Arrangement::new(
        Permutation::try_from(rows).expect("every row appears once"),
        Permutation::try_from(cols).expect("every column appears once"),
    )
}

/// Apply best-improving swaps of `mode` until none lowers the cost.
/// Returns the total change.
fn descend_mode(a: &DataMatrix, arr: &mut Arrangement, mode: Mode) -> f64 {
    let profile = ModeProfile::new(a, mode, arr.perm(mode.other()));
    let perm = arr.perm_mut(mode);
    let k = perm.len();
    let mut total = 0.0;
    loop {
        let mut best = (0.0, 0, 0);
        for p in 0..k {
            for q in p + 1..k {
                let d = profile.swap_delta(perm.as_slice(), p, q);
                if d < best.0 {
                    best = (d, p, q);
                }
            }
        }
        if best.0 < 0.0 {
            perm.swap(best.1, best.2);
            total += best.0;
        } else {
            return total;
        }
    }
}

/// Pairwise-swap descent from `start`: each pass drives rows to a local
/// optimum, then columns. Stops when a pass makes no change or after
/// `max_passes` passes.
pub fn hill_climb(a: &DataMatrix, start: &Arrangement, max_passes: usize) -> Result<Arrangement> {
    start.check(a)?;
    let mut arr = start.clone();
    for _ in 0..max_passes {
        let improved =
            descend_mode(a, &mut arr, Mode::Rows) + descend_mode(a, &mut arr, Mode::Cols);
        if improved >= 0.0 {
            break;
        }
    }
    Ok(arr)
}
