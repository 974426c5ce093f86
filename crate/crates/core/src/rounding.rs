//! Rounding a similarity matrix to a vertex correspondence.
//!
//! Every rounder maximizes (exactly or heuristically) `⟨X, Π⟩` and breaks
//! ties towards the lowest index, so its output is a deterministic function
//! of the input matrix.

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::models::Permutation;

/// Largest dimension accepted by [`brute_force_round`].
pub const BRUTE_FORCE_MAX_N: usize = 8;

/// Row-to-column assignment; `None` marks an unassigned row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matching {
    map: Vec<Option<usize>>,
    bijective: bool,
}

impl Matching {
    pub fn new(map: Vec<Option<usize>>) -> Self {
        let n = map.len();
        let mut seen = vec![false; n];
        let mut bijective = true;
        for t in &map {
            match *t {
                Some(j) if j < n && !seen[j] => seen[j] = true,
                _ => bijective = false,
            }
        }
        Self { map, bijective }
    }

    pub fn from_permutation(p: &Permutation) -> Self {
        Self {
            map: p.targets().iter().map(|&t| Some(t)).collect(),
            bijective: true,
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn map(&self) -> &[Option<usize>] {
        &self.map
    }

    pub fn get(&self, i: usize) -> Option<usize> {
        self.map[i]
    }

    pub fn is_bijective(&self) -> bool {
        self.bijective
    }

    pub fn to_permutation(&self) -> Option<Permutation> {
        if !self.bijective {
            return None;
        }
        Permutation::new(self.map.iter().map(|t| t.unwrap()).collect()).ok()
    }
}

fn check_scores(x: &Matrix) -> Result<()> {
    if !x.is_square() {
        return Err(Error::DimensionError {
            expected: x.rows(),
            found: x.cols(),
        });
    }
    if !x.is_finite() {
        return Err(Error::InvalidMatrix("non-finite score".into()));
    }
    Ok(())
}

/// `Σ_i X[i][map(i)]` over assigned rows, summed in row order.
pub fn assignment_value(x: &Matrix, m: &Matching) -> f64 {
    m.map
        .iter()
        .enumerate()
        .filter_map(|(i, t)| t.map(|j| x[(i, j)]))
        .sum()
}

/// Exact linear assignment: a permutation maximizing `Σ_i X[i][π(i)]`.
///
/// Shortest augmenting path Hungarian method with row and column potentials,
/// run on the cost `−X`; `O(n³)`.
pub fn lap_round(x: &Matrix) -> Result<Matching> {
    check_scores(x)?;
    let n = x.rows();
    if n == 0 {
        return Ok(Matching::new(Vec::new()));
    }
    // 1-based arrays; index 0 is the virtual root of each augmenting tree.
    let mut u = vec![0.0f64; n + 1];
    let mut v = vec![0.0f64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![0.0f64; n + 1];
    let mut used = vec![false; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut j0 = 0usize;
        minv.fill(f64::INFINITY);
        used.fill(false);
        loop {
            used[j0] = true;
            let i0 = owner[j0];
            let ui0 = u[i0];
            let xrow = x.row(i0 - 1);
            let mut delta = f64::INFINITY;
            let mut j1 = 0usize;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = -xrow[j - 1] - ui0 - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if owner[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            owner[j0] = owner[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut map = vec![None; n];
    for j in 1..=n {
        map[owner[j] - 1] = Some(j - 1);
    }
    Ok(Matching::new(map))
}

/// Greedy matching: repeatedly take the largest remaining entry and delete
/// its row and column. Ties go to the lower row, then the lower column.
pub fn greedy_round(x: &Matrix) -> Result<Matching> {
    check_scores(x)?;
    let n = x.rows();
    let mut cells: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).collect();
    cells.sort_by(|&(i1, j1), &(i2, j2)| {
        x[(i2, j2)]
            .total_cmp(&x[(i1, j1)])
            .then(i1.cmp(&i2))
            .then(j1.cmp(&j2))
    });
    let mut map = vec![None; n];
    let mut col_taken = vec![false; n];
    let mut assigned = 0;
    for (i, j) in cells {
        if assigned == n {
            break;
        }
        if map[i].is_none() && !col_taken[j] {
            map[i] = Some(j);
            col_taken[j] = true;
            assigned += 1;
        }
    }
    Ok(Matching::new(map))
}

/// Row-wise argmax (thresholding). Ties go to the lowest column; the result
/// need not be a bijection and is reported as is.
pub fn argmax_round(x: &Matrix) -> Result<Matching> {
    check_scores(x)?;
    let map = (0..x.rows())
        .map(|i| {
            let row = x.row(i);
            let mut best = 0;
            for (j, &val) in row.iter().enumerate() {
                if val > row[best] {
                    best = j;
                }
            }
            Some(best)
        })
        .collect();
    Ok(Matching::new(map))
}

/// Exhaustive maximization over all `n!` permutations; the
/// lexicographically smallest maximizer wins.
pub fn brute_force_round(x: &Matrix) -> Result<Matching> {
    check_scores(x)?;
    let n = x.rows();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::SizeError {
            n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best = perm.clone();
    let mut best_value = f64::NEG_INFINITY;
    loop {
        let value: f64 = perm.iter().enumerate().map(|(i, &j)| x[(i, j)]).sum();
        if value > best_value {
            best_value = value;
            best.copy_from_slice(&perm);
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    Ok(Matching::new(best.into_iter().map(Some).collect()))
}

/// Advances to the next permutation in lexicographic order.
fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let mut i = p.len() - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = p.len() - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// Fraction of rows matched to their true partner; unassigned rows count as
/// wrong.
pub fn overlap(candidate: &Matching, truth: &Permutation) -> Result<f64> {
    let n = truth.len();
    if candidate.len() != n {
        return Err(Error::DimensionError {
            expected: n,
            found: candidate.len(),
        });
    }
    if n == 0 {
        return Ok(1.0);
    }
    let hits = candidate
        .map
        .iter()
        .enumerate()
        .filter(|&(i, t)| *t == Some(truth.apply(i)))
        .count();
    Ok(hits as f64 / n as f64)
}
