//! Dense two-mode matrices, row/column permutations and the weighted
//! bandwidth objective `sum a_ij^2 (i - j)^2`.
//!
//! Positions are 0-based throughout; the objective only depends on `i - j`,
//! so the result is identical to the 1-based formulation.

use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng;

/// Dense `rows x cols` matrix of finite reals, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DataMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
    row_labels: Option<Vec<String>>,
    col_labels: Option<Vec<String>>,
}

impl DataMatrix {
    pub fn new(rows: usize, cols: usize, values: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Input(format!(
                "matrix must be non-empty, got {rows}x{cols}"
            )));
        }
        if values.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows * cols,
                values.len()
            )));
        }
        if let Some(k) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Input(format!(
                "non-finite value at ({}, {})",
                k / cols,
                k % cols
            )));
        }
        Ok(Self {
            rows,
            cols,
            values,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::Dimension(format!(
                "row {bad} has {} entries, expected {n}",
                rows[bad].len()
            )));
        }
        Self::new(m, n, rows.iter().flatten().copied().collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::new(rows, cols, vec![0.0; rows * cols])
    }

    pub fn identity(k: usize) -> Result<Self> {
        let mut a = Self::zeros(k, k)?;
        for i in 0..k {
            a.set(i, i, 1.0);
        }
        Ok(a)
    }

    pub fn with_labels(
        mut self,
        row_labels: Option<Vec<String>>,
        col_labels: Option<Vec<String>>,
    ) -> Result<Self> {
        if let Some(l) = &row_labels {
            if l.len() != self.rows {
                return Err(Error::Dimension(format!(
                    "{} row labels for {} rows",
                    l.len(),
                    self.rows
                )));
            }
        }
        if let Some(l) = &col_labels {
            if l.len() != self.cols {
                return Err(Error::Dimension(format!(
                    "{} column labels for {} columns",
                    l.len(),
                    self.cols
                )));
            }
        }
        self.row_labels = row_labels;
        self.col_labels = col_labels;
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dim(&self, mode: Mode) -> usize {
        match mode {
            Mode::Rows => self.rows,
            Mode::Cols => self.cols,
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        assert!(v.is_finite(), "matrix values must be finite");
        self.values[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.values[i * self.cols..(i + 1) * self.cols]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn row_labels(&self) -> Option<&[String]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[String]> {
        self.col_labels.as_deref()
    }

    pub fn transpose(&self) -> DataMatrix {
        let mut values = Vec::with_capacity(self.values.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                values.push(self.get(i, j));
            }
        }
        DataMatrix {
            rows: self.cols,
            cols: self.rows,
            values,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn scaled(&self, c: f64) -> DataMatrix {
        let mut out = self.clone();
        for v in &mut out.values {
            *v *= c;
        }
        out
    }

    pub fn nnz(&self) -> usize {
        self.values.iter().filter(|&&v| v != 0.0).count()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |acc, v| acc.max(v.abs()))
    }
}

/// Which index set of the matrix a permutation acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Rows,
    Cols,
}

impl Mode {
    pub fn other(self) -> Mode {
        match self {
            Mode::Rows => Mode::Cols,
            Mode::Cols => Mode::Rows,
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Rows => "rows",
            Mode::Cols => "cols",
        })
    }
}

/// A bijection on `0..k`. Entry `perm[p]` is the original index placed at
/// position `p`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(k: usize) -> Self {
        Self((0..k).collect())
    }

    pub fn random<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        let mut v: Vec<usize> = (0..k).collect();
        v.shuffle(rng);
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(p, &v)| p == v)
    }

    pub fn swap(&mut self, p: usize, q: usize) {
        self.0.swap(p, q);
    }

    pub fn inverse(&self) -> Self {
        let mut inv = vec![0; self.0.len()];
        for (p, &v) in self.0.iter().enumerate() {
            inv[v] = p;
        }
        Self(inv)
    }

    /// Permutation equivalent to reordering by `self` and then by `next`.
    pub fn then(&self, next: &Permutation) -> Self {
        assert_eq!(self.len(), next.len(), "permutation sizes differ");
        Self(next.0.iter().map(|&p| self.0[p]).collect())
    }

    pub fn is_valid(values: &[usize]) -> bool {
        let mut seen = vec![false; values.len()];
        values
            .iter()
            .all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = Error;

    fn try_from(values: Vec<usize>) -> Result<Self> {
        if Permutation::is_valid(&values) {
            Ok(Self(values))
        } else {
            Err(Error::Input(format!(
                "{values:?} is not a permutation of 0..{}",
                values.len()
            )))
        }
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for Permutation {
    type Output = usize;

    fn index(&self, p: usize) -> &usize {
        &self.0[p]
    }
}

/// Row and column reordering of a matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Arrangement {
    pub rows: Permutation,
    pub cols: Permutation,
}

impl Arrangement {
    pub fn new(rows: Permutation, cols: Permutation) -> Self {
        Self { rows, cols }
    }

    pub fn identity(m: usize, n: usize) -> Self {
        Self::new(Permutation::identity(m), Permutation::identity(n))
    }

    pub fn perm(&self, mode: Mode) -> &Permutation {
        match mode {
            Mode::Rows => &self.rows,
            Mode::Cols => &self.cols,
        }
    }

    pub fn perm_mut(&mut self, mode: Mode) -> &mut Permutation {
        match mode {
            Mode::Rows => &mut self.rows,
            Mode::Cols => &mut self.cols,
        }
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.rows.inverse(), self.cols.inverse())
    }

    pub fn then(&self, next: &Arrangement) -> Self {
        Self::new(self.rows.then(&next.rows), self.cols.then(&next.cols))
    }

    pub fn transposed(&self) -> Self {
        Self::new(self.cols.clone(), self.rows.clone())
    }

    pub fn check(&self, a: &DataMatrix) -> Result<()> {
        if self.rows.len() != a.rows() || self.cols.len() != a.cols() {
            return Err(Error::Dimension(format!(
                "arrangement is {}x{} but matrix is {}x{}",
                self.rows.len(),
                self.cols.len(),
                a.rows(),
                a.cols()
            )));
        }
        Ok(())
    }
}

/// A transposition of two positions of one mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Swap {
    pub mode: Mode,
    pub p: usize,
    pub q: usize,
}

impl Swap {
    pub fn new(mode: Mode, p: usize, q: usize) -> Self {
        Self { mode, p, q }
    }
}

/// Weighted bandwidth of `a` after reordering by `arr`.
pub fn bandwidth_cost(a: &DataMatrix, arr: &Arrangement) -> Result<f64> {
    arr.check(a)?;
    let mut total = 0.0;
    for (r, &i) in arr.rows.as_slice().iter().enumerate() {
        let row = a.row(i);
        for (c, &j) in arr.cols.as_slice().iter().enumerate() {
            let v = row[j];
            if v != 0.0 {
                let d = r as f64 - c as f64;
                total += v * v * d * d;
            }
        }
    }
    Ok(total)
}

/// Change in [`bandwidth_cost`] caused by applying `swap` to `arr`.
///
/// Only the two affected rows (or columns) are read.
pub fn bandwidth_cost_delta(a: &DataMatrix, arr: &Arrangement, swap: Swap) -> Result<f64> {
    arr.check(a)?;
    let k = a.dim(swap.mode);
    if swap.p >= k || swap.q >= k {
        return Err(Error::Index(format!(
            "swap ({}, {}) out of range for {} {}",
            swap.p, swap.q, k, swap.mode
        )));
    }
    if swap.p == swap.q {
        return Err(Error::Index(format!(
            "swap of position {} with itself",
            swap.p
        )));
    }
    let (p, q) = (swap.p, swap.q);
    let this = arr.perm(swap.mode);
    let other = arr.perm(swap.mode.other());
    let (ip, iq) = (this[p], this[q]);
    // delta = (p - q) * sum_c (w_q,c - w_p,c) * (p + q - 2c)
    let pq = (p + q) as f64;
    let mut acc = 0.0;
    for (c, &j) in other.as_slice().iter().enumerate() {
        let (vp, vq) = match swap.mode {
            Mode::Rows => (a.get(ip, j), a.get(iq, j)),
            Mode::Cols => (a.get(j, ip), a.get(j, iq)),
        };
        let w = vq * vq - vp * vp;
        if w != 0.0 {
            acc += w * (pq - 2.0 * c as f64);
        }
    }
    Ok((p as f64 - q as f64) * acc)
}

/// Classic bandwidth: the largest `|i - j|` over nonzero cells.
pub fn classic_bandwidth(a: &DataMatrix) -> usize {
    let mut best = 0;
    for i in 0..a.rows() {
        for (j, &v) in a.row(i).iter().enumerate() {
            if v != 0.0 {
                best = best.max(i.abs_diff(j));
            }
        }
    }
    best
}

/// Reordered copy of `a`: output cell `(r, c)` is input cell
/// `(arr.rows[r], arr.cols[c])`.
pub fn apply_arrangement(a: &DataMatrix, arr: &Arrangement) -> Result<DataMatrix> {
    arr.check(a)?;
    let mut values = Vec::with_capacity(a.rows() * a.cols());
    for &i in arr.rows.as_slice() {
        let row = a.row(i);
        values.extend(arr.cols.as_slice().iter().map(|&j| row[j]));
    }
    let permute = |labels: Option<&[String]>, perm: &Permutation| {
        labels.map(|l| {
            perm.as_slice()
                .iter()
                .map(|&i| l[i].clone())
                .collect::<Vec<_>>()
        })
    };
    DataMatrix::new(a.rows(), a.cols(), values)?.with_labels(
        permute(a.row_labels(), &arr.rows),
        permute(a.col_labels(), &arr.cols),
    )
}

/// Randomly permute rows and columns with Fisher-Yates shuffles drawn from
/// the seed's scramble stream. Returns the scrambled matrix and the
/// arrangement that produced it.
pub fn scramble(a: &DataMatrix, seed: u64) -> (DataMatrix, Arrangement) {
    let mut rng = rng::substream(seed, rng::SCRAMBLE, 0);
    let rows = Permutation::random(a.rows(), &mut rng);
    let cols = Permutation::random(a.cols(), &mut rng);
    let arr = Arrangement::new(rows, cols);
    let out = apply_arrangement(a, &arr).expect("arrangement built for this matrix");
    (out, arr)
}

/// Per-index moments of squared weights against the fixed positions of the
/// other mode.
///
/// With the other mode frozen, the cost contributed by index `i` placed at
/// position `t` is `t^2 s0[i] - 2 t s1[i] + s2[i]`, which makes both full
/// evaluation (`O(k)`) and swap deltas (`O(1)`) cheap.
#[derive(Debug, Clone)]
pub struct ModeProfile {
    s0: Vec<f64>,
    s1: Vec<f64>,
    s2: Vec<f64>,
}

impl ModeProfile {
    pub fn new(a: &DataMatrix, mode: Mode, other: &Permutation) -> Self {
        let k = a.dim(mode);
        let mut s0 = vec![0.0; k];
        let mut s1 = vec![0.0; k];
        let mut s2 = vec![0.0; k];
        for (t, &j) in other.as_slice().iter().enumerate() {
            let t = t as f64;
            for i in 0..k {
                let v = match mode {
                    Mode::Rows => a.get(i, j),
                    Mode::Cols => a.get(j, i),
                };
                if v != 0.0 {
                    let w = v * v;
                    s0[i] += w;
                    s1[i] += w * t;
                    s2[i] += w * t * t;
                }
            }
        }
        Self { s0, s1, s2 }
    }

    pub fn len(&self) -> usize {
        self.s0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.s0.is_empty()
    }

    /// Full objective for `perm` on this mode.
    pub fn cost(&self, perm: &[usize]) -> f64 {
        perm.iter()
            .enumerate()
            .map(|(t, &i)| {
                let t = t as f64;
                t * t * self.s0[i] - 2.0 * t * self.s1[i] + self.s2[i]
            })
            .sum()
    }

    /// Change in objective when positions `p` and `q` of `perm` are swapped.
    #[inline]
    pub fn swap_delta(&self, perm: &[usize], p: usize, q: usize) -> f64 {
        let (a, b) = (perm[p], perm[q]);
        let (pf, qf) = (p as f64, q as f64);
        (pf - qf) * ((pf + qf) * (self.s0[b] - self.s0[a]) - 2.0 * (self.s1[b] - self.s1[a]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[&[f64]]) -> DataMatrix {
        DataMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn perm(v: &[usize]) -> Permutation {
        Permutation::try_from(v.to_vec()).unwrap()
    }

    #[test]
    fn cost_examples() {
        let id2 = Arrangement::identity(2, 2);
        assert_eq!(
            bandwidth_cost(&m(&[&[1.0, 0.0], &[0.0, 1.0]]), &id2).unwrap(),
            0.0
        );

        let anti = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert_eq!(bandwidth_cost(&anti, &id2).unwrap(), 2.0);
        let swapped = Arrangement::new(perm(&[1, 0]), Permutation::identity(2));
        assert_eq!(bandwidth_cost(&anti, &swapped).unwrap(), 0.0);

        let mut a = DataMatrix::zeros(3, 3).unwrap();
        a.set(0, 2, 2.0);
        assert_eq!(
            bandwidth_cost(&a, &Arrangement::identity(3, 3)).unwrap(),
            16.0
        );
    }

    #[test]
    fn cost_rejects_mismatched_arrangement() {
        let a = DataMatrix::zeros(2, 3).unwrap();
        let err = bandwidth_cost(&a, &Arrangement::identity(3, 2)).unwrap_err();
        assert!(matches!(err, Error::Dimension(_)));
    }

    #[test]
    fn delta_examples() {
        let anti = m(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let id = Arrangement::identity(2, 2);
        assert_eq!(
            bandwidth_cost_delta(&anti, &id, Swap::new(Mode::Rows, 0, 1)).unwrap(),
            -2.0
        );

        let mut a = DataMatrix::zeros(4, 3).unwrap();
        a.set(0, 0, 3.0);
        a.set(3, 2, 1.0);
        let id = Arrangement::identity(4, 3);
        assert_eq!(
            bandwidth_cost_delta(&a, &id, Swap::new(Mode::Rows, 1, 2)).unwrap(),
            0.0
        );
    }

    #[test]
    fn delta_rejects_bad_indices() {
        let a = DataMatrix::zeros(2, 3).unwrap();
        let id = Arrangement::identity(2, 3);
        assert!(matches!(
            bandwidth_cost_delta(&a, &id, Swap::new(Mode::Rows, 0, 2)),
            Err(Error::Index(_))
        ));
        assert!(bandwidth_cost_delta(&a, &id, Swap::new(Mode::Cols, 0, 2)).is_ok());
        assert!(matches!(
            bandwidth_cost_delta(&a, &id, Swap::new(Mode::Cols, 1, 1)),
            Err(Error::Index(_))
        ));
    }

    #[test]
    fn classic_bandwidth_examples() {
        assert_eq!(
            classic_bandwidth(&m(&[&[1.0, 0.0, 1.0], &[0.0, 1.0, 0.0], &[1.0, 0.0, 1.0]])),
            2
        );
        assert_eq!(classic_bandwidth(&DataMatrix::zeros(3, 4).unwrap()), 0);
        assert_eq!(classic_bandwidth(&DataMatrix::identity(5).unwrap()), 0);
        assert_eq!(classic_bandwidth(&m(&[&[7.0]])), 0);
    }

    #[test]
    fn apply_identity_and_inverse() {
        let a = m(&[&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]])
            .with_labels(
                Some(vec!["a".into(), "b".into()]),
                Some(vec!["x".into(), "y".into(), "z".into()]),
            )
            .unwrap();
        assert_eq!(
            apply_arrangement(&a, &Arrangement::identity(2, 3)).unwrap(),
            a
        );

        let arr = Arrangement::new(perm(&[1, 0]), perm(&[2, 0, 1]));
        let b = apply_arrangement(&a, &arr).unwrap();
        assert_eq!(b.row(0), &[6.0, 4.0, 5.0]);
        assert_eq!(b.row_labels().unwrap(), &["b".to_string(), "a".to_string()]);
        assert_eq!(b.col_labels().unwrap()[0], "z");
        assert_eq!(apply_arrangement(&b, &arr.inverse()).unwrap(), a);
    }

    #[test]
    fn scramble_contract() {
        let one = m(&[&[4.0]]);
        let (s, arr) = scramble(&one, 3);
        assert_eq!(s, one);
        assert_eq!(arr, Arrangement::identity(1, 1));

        let a = DataMatrix::new(5, 4, (0..20).map(f64::from).collect()).unwrap();
        let (s1, a1) = scramble(&a, 42);
        let (s2, a2) = scramble(&a, 42);
        assert_eq!(s1, s2);
        assert_eq!(a1, a2);
        assert_eq!(apply_arrangement(&s1, &a1.inverse()).unwrap(), a);
    }

    #[test]
    fn permutation_validation() {
        assert!(Permutation::try_from(vec![0, 2, 1]).is_ok());
        assert!(Permutation::try_from(vec![0, 0, 1]).is_err());
        assert!(Permutation::try_from(vec![0, 3, 1]).is_err());
        let p: std::result::Result<Permutation, _> = serde_json::from_str("[1,1]");
        assert!(p.is_err());
    }

    #[test]
    fn profile_matches_full_cost() {
        let a = m(&[
            &[1.0, 0.0, 2.0],
            &[0.0, 3.0, 0.0],
            &[1.0, 1.0, 0.0],
            &[0.0, 0.0, 5.0],
        ]);
        let arr = Arrangement::new(perm(&[2, 0, 3, 1]), perm(&[1, 2, 0]));
        let full = bandwidth_cost(&a, &arr).unwrap();
        let rows = ModeProfile::new(&a, Mode::Rows, &arr.cols);
        let cols = ModeProfile::new(&a, Mode::Cols, &arr.rows);
        assert_eq!(rows.cost(arr.rows.as_slice()), full);
        assert_eq!(cols.cost(arr.cols.as_slice()), full);
        let d = bandwidth_cost_delta(&a, &arr, Swap::new(Mode::Cols, 0, 2)).unwrap();
        assert_eq!(cols.swap_delta(arr.cols.as_slice(), 0, 2), d);
    }
}
