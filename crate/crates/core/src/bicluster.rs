//! Planted-block generator, diagonal block extraction and recovery scoring.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{Arrangement, DataMatrix, Permutation};
use crate::rng;

const SYNTHETIC: &str = "synthetic";

/// A block of original row indices crossed with original column indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Bicluster {
    #[serde(rename = "rows")]
    pub row_indices: Vec<usize>,
    #[serde(rename = "cols")]
    pub col_indices: Vec<usize>,
}

impl Bicluster {
    pub fn new(mut rows: Vec<usize>, mut cols: Vec<usize>) -> Self {
        rows.sort_unstable();
        rows.dedup();
        cols.sort_unstable();
        cols.dedup();
        Self {
            row_indices: rows,
            col_indices: cols,
        }
    }

    pub fn cells(&self) -> usize {
        self.row_indices.len() * self.col_indices.len()
    }

    fn map(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::new(
            self.row_indices.iter().map(|&i| rows[i]).collect(),
            self.col_indices.iter().map(|&j| cols[j]).collect(),
        )
    }
}

fn overlap(a: &[usize], b: &[usize]) -> usize {
    // both sorted
    let (mut i, mut j, mut count) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                count += 1;
                i += 1;
                j += 1;
            }
        }
    }
    count
}

/// Jaccard similarity of the cell sets `rows x cols` of two blocks.
pub fn cell_jaccard(a: &Bicluster, b: &Bicluster) -> f64 {
    let inter = overlap(&a.row_indices, &b.row_indices) * overlap(&a.col_indices, &b.col_indices);
    let union = a.cells() + b.cells() - inter;
    if union == 0 {
        0.0
    } else {
        inter as f64 / union as f64
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct BiclusterSet {
    pub blocks: Vec<Bicluster>,
}

impl BiclusterSet {
    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Rename indices: row `i` becomes `rows[i]`, column `j` becomes `cols[j]`.
    pub fn relabel(&self, rows: &Permutation, cols: &Permutation) -> Self {
        Self {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.map(rows.as_slice(), cols.as_slice()))
                .collect(),
        }
    }

    /// Express blocks given in original indices in the index space of
    /// `apply_arrangement(original, arr)`.
    pub fn through(&self, arr: &Arrangement) -> Self {
        self.relabel(&arr.rows.inverse(), &arr.cols.inverse())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticParams {
    pub rows: usize,
    pub cols: usize,
    pub blocks: usize,
    pub lo: u32,
    pub hi: u32,
    pub noise: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub blocks: Vec<Bicluster>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<SyntheticParams>,
}

impl GroundTruth {
    pub fn as_set(&self) -> BiclusterSet {
        BiclusterSet {
            blocks: self.blocks.clone(),
        }
    }

    pub fn through(&self, arr: &Arrangement) -> Self {
        Self {
            blocks: self.as_set().through(arr).blocks,
            ..self.clone()
        }
    }
}

/// Sizes of `k` contiguous chunks covering `total`; earlier chunks take
/// the remainder.
pub fn chunk_sizes(total: usize, k: usize) -> Vec<usize> {
    let (base, rem) = (total / k, total % k);
    (0..k).map(|b| base + usize::from(b < rem)).collect()
}

fn chunk_ranges(total: usize, k: usize) -> Vec<std::ops::Range<usize>> {
    let mut start = 0;
    chunk_sizes(total, k)
        .into_iter()
        .map(|s| {
            let r = start..start + s;
            start += s;
            r
        })
        .collect()
}

/// Planted block-diagonal matrix: block `b` spans row chunk `b` and column
/// chunk `b` with uniform integers in `[lo, hi]`. Each cell is then toggled
/// with probability `noise` (zero to a random in-range value, nonzero to
/// zero).
pub fn generate_synthetic(
    m: usize,
    n: usize,
    k: usize,
    value_range: (u32, u32),
    noise: f64,
    seed: u64,
) -> Result<(DataMatrix, GroundTruth)> {
    let (lo, hi) = value_range;
    if k == 0 || k > m.min(n) {
        return Err(Error::Parameter(format!(
            "block count {k} must lie in 1..={}",
            m.min(n)
        )));
    }
    if lo == 0 || lo > hi {
        return Err(Error::Parameter(format!(
            "value range ({lo}, {hi}) must satisfy 1 <= lo <= hi"
        )));
    }
    if !(0.0..1.0).contains(&noise) {
        return Err(Error::Parameter(format!(
            "noise {noise} must lie in [0, 1)"
        )));
    }

    let mut rng = rng::substream(seed, SYNTHETIC, 0);
    let mut a = DataMatrix::zeros(m, n)?;
    let row_chunks = chunk_ranges(m, k);
    let col_chunks = chunk_ranges(n, k);
    let mut blocks = Vec::with_capacity(k);
    for (rows, cols) in row_chunks.iter().zip(&col_chunks) {
        for i in rows.clone() {
            for j in cols.clone() {
                a.set(i, j, f64::from(rng.gen_range(lo..=hi)));
            }
        }
        blocks.push(Bicluster::new(
            rows.clone().collect(),
            cols.clone().collect(),
        ));
    }
    if noise > 0.0 {
        for i in 0..m {
            for j in 0..n {
                if rng.gen::<f64>() < noise {
                    let v = if a.get(i, j) == 0.0 {
                        f64::from(rng.gen_range(lo..=hi))
                    } else {
                        0.0
                    };
                    a.set(i, j, v);
                }
            }
        }
    }
    let truth = GroundTruth {
        blocks,
        seed: Some(seed),
        params: Some(SyntheticParams {
            rows: m,
            cols: n,
            blocks: k,
            lo,
            hi,
            noise,
        }),
    };
    Ok((a, truth))
}

/// Read diagonal blocks off a reordered matrix.
///
/// Cells with `|a| > tau` are active; rows and columns without active cells
/// belong to no block. Starting from the current diagonal corner, the row
/// and column ranges grow forward to cover every active cell reachable
/// from the block, and the block closes when neither range can grow.
/// Reported indices are original indices, recovered through `arr`.
pub fn extract_blocks(reordered: &DataMatrix, arr: &Arrangement, tau: f64) -> Result<BiclusterSet> {
    arr.check(reordered)?;
    let active = |r: usize, c: usize| reordered.get(r, c).abs() > tau;
    let rows: Vec<usize> = (0..reordered.rows())
        .filter(|&r| (0..reordered.cols()).any(|c| active(r, c)))
        .collect();
    let cols: Vec<usize> = (0..reordered.cols())
        .filter(|&c| (0..reordered.rows()).any(|r| active(r, c)))
        .collect();
    let on = |ri: usize, ci: usize| active(rows[ri], cols[ci]);

    let mut blocks = Vec::new();
    let (mut r0, mut c0) = (0, 0);
    while r0 < rows.len() && c0 < cols.len() {
        let (mut r1, mut c1) = (r0, c0);
        // rows r0..row_done have had their forward columns scanned, etc.
        let (mut row_done, mut col_done) = (r0, c0);
        let mut any = on(r0, c0);
        loop {
            let mut grew = false;
            while row_done <= r1 {
                if let Some(c) = (c0..cols.len()).rev().find(|&c| on(row_done, c)) {
                    any = true;
                    if c > c1 {
                        c1 = c;
                        grew = true;
                    }
                }
                row_done += 1;
            }
            while col_done <= c1 {
                if let Some(r) = (r0..rows.len()).rev().find(|&r| on(r, col_done)) {
                    any = true;
                    if r > r1 {
                        r1 = r;
                        grew = true;
                    }
                }
                col_done += 1;
            }
            if !grew {
                break;
            }
        }
        if any {
            blocks.push(Bicluster::new(
                rows[r0..=r1].iter().map(|&r| arr.rows[r]).collect(),
                cols[c0..=c1].iter().map(|&c| arr.cols[c]).collect(),
            ));
            r0 = r1 + 1;
            c0 = c1 + 1;
        } else {
            r0 += 1;
            c0 += 1;
        }
    }
    Ok(BiclusterSet { blocks })
}

/// Mean over truth blocks of the best cell-level Jaccard match among the
/// found blocks.
pub fn recovery_score(found: &BiclusterSet, truth: &BiclusterSet) -> f64 {
    if truth.is_empty() {
        return if found.is_empty() { 1.0 } else { 0.0 };
    }
    if found.is_empty() {
        return 0.0;
    }
    let total: f64 = truth
        .blocks
        .iter()
        .map(|t| {
            found
                .blocks
                .iter()
                .map(|f| cell_jaccard(f, t))
                .fold(0.0, f64::max)
        })
        .sum();
    total / truth.len() as f64
}
