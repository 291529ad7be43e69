use alloc::vec::Vec;

use nalgebra::DMatrix;

/// Maximum-weight assignment on a rectangular score matrix.
///
/// Returns `min(rows, cols)` pairs `(row, col)` sorted by row, using the
/// Hungarian algorithm with potentials (O(n²m)). Rows and columns are scanned in
/// increasing order and only strict improvements move the search, so ties resolve
/// toward the lexicographically first `(row, column)`.
pub fn max_weight_assignment(scores: &DMatrix<f64>) -> Vec<(usize, usize)> {
    let (r, c) = scores.shape();
    if r == 0 || c == 0 {
        return Vec::new();
    }
    if r > c {
        let mut t: Vec<(usize, usize)> = max_weight_assignment(&scores.transpose()).into_iter().map(|(a, b)| (b, a)).collect();
        t.sort_unstable();
        return t;
    }
    let peak = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    // minimise peak − score; 1-based arrays with a virtual row/column 0
    let cost = |i: usize, j: usize| peak - scores[(i - 1, j - 1)];
    let (n, m) = (r, c);
    let mut u = alloc::vec![0.0f64; n + 1];
    let mut v = alloc::vec![0.0f64; m + 1];
    let mut p = alloc::vec![0usize; m + 1];
    let mut way = alloc::vec![0usize; m + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = alloc::vec![f64::INFINITY; m + 1];
        let mut used = alloc::vec![false; m + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=m {
                if !used[j] {
                    let cur = cost(i0, j) - u[i0] - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=m {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut out: Vec<(usize, usize)> = (1..=m).filter(|&j| p[j] != 0).map(|j| (p[j] - 1, j - 1)).collect();
    out.sort_unstable();
    out
}
