//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection.

/// Number of eigenvalues strictly below `x`.
///
/// `off` holds the `n - 1` off-diagonal entries.
pub fn sturm_count(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0f64;
    for i in 0..diag.len() {
        let coupling = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        let prev = if q == 0.0 { f64::EPSILON * (x.abs() + 1.0) } else { q };
        q = diag[i] - x - if i == 0 { 0.0 } else { coupling / prev };
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

/// Gershgorin interval enclosing every eigenvalue.
pub fn gershgorin_bounds(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let n = diag.len();
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let left = if i > 0 { off[i - 1].abs() } else { 0.0 };
        let right = if i + 1 < n { off[i].abs() } else { 0.0 };
        lo = lo.min(diag[i] - left - right);
        hi = hi.max(diag[i] + left + right);
    }
    let pad = 1e-12 * (lo.abs().max(hi.abs()) + 1.0);
    (lo - pad, hi + pad)
}

/// The `k`-th smallest eigenvalue (0-based), refined to machine precision.
pub fn kth_eigenvalue(diag: &[f64], off: &[f64], k: usize) -> Option<f64> {
    if k >= diag.len() {
        return None;
    }
    let (mut lo, mut hi) = gershgorin_bounds(diag, off);
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if sturm_count(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// The `k` smallest eigenvalues in ascending order.
pub fn lowest_eigenvalues(diag: &[f64], off: &[f64], k: usize) -> Vec<f64> {
    (0..k.min(diag.len())).filter_map(|i| kth_eigenvalue(diag, off, i)).collect()
}

/// Every eigenvalue in ascending order.
pub fn all_eigenvalues(diag: &[f64], off: &[f64]) -> Vec<f64> {
    lowest_eigenvalues(diag, off, diag.len())
}

/// Eigenvector for an (already accurate) eigenvalue by inverse iteration.
pub fn eigenvector(diag: &[f64], off: &[f64], eigenvalue: f64) -> Vec<f64> {
    let n = diag.len();
    let shift = eigenvalue + 1e-10 * (eigenvalue.abs() + 1.0);
    let mut v = vec![1.0; n];
    for _ in 0..3 {
        v = solve_shifted(diag, off, shift, &v);
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 0.0 && norm.is_finite() {
            v.iter_mut().for_each(|x| *x /= norm);
        }
    }
    v
}

// Thomas algorithm for (T - shift I) x = rhs.
fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Vec<f64> {
    let n = diag.len();
    let mut c = vec![0.0; n];
    let mut d = vec![0.0; n];
    let tiny = 1e-300;
    let mut denom = diag[0] - shift;
    if denom.abs() < tiny {
        denom = tiny;
    }
    if n > 1 {
        c[0] = off[0] / denom;
    }
    d[0] = rhs[0] / denom;
    for i in 1..n {
        let mut m = diag[i] - shift - off[i - 1] * c[i - 1];
        if m.abs() < tiny {
            m = tiny;
        }
        if i + 1 < n {
            c[i] = off[i] / m;
        }
        d[i] = (rhs[i] - off[i - 1] * d[i - 1]) / m;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = d[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = d[i] - c[i] * x[i + 1];
    }
    x
}
