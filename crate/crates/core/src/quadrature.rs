//! Gauss rules built from three-term recurrence coefficients, and
//! double-exponential (tanh–sinh) rules for integrands with algebraic
//! endpoint behavior.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};
use crate::tridiag;

/// A quadrature rule as `(node, weight)` pairs.
pub type Rule = Vec<(f64, f64)>;

/// Gauss rule for the monic recurrence `p_{k+1} = (x - a_k) p_k - b_k² p_{k-1}`.
///
/// `a` has `n` entries, `b` has `n - 1` entries (`b[k-1]` couples `p_{k-1}`
/// and `p_k`), `mu0` is the total mass of the weight.
/// Nodes are the Jacobi-matrix eigenvalues; weights follow from the
/// Christoffel function of the orthonormal polynomials.
pub fn gauss_from_recurrence(a: &[f64], b: &[f64], mu0: f64) -> Rule {
    let nodes = tridiag::all_eigenvalues(a, b);
    nodes
        .into_iter()
        .map(|x| {
            let mut prev = 0.0;
            let mut cur = 1.0;
            let mut sum = 1.0;
            for k in 0..a.len() - 1 {
                let back = if k == 0 { 0.0 } else { b[k - 1] * prev };
                let next = ((x - a[k]) * cur - back) / b[k];
                prev = cur;
                cur = next;
                sum += cur * cur;
            }
            (x, mu0 / sum)
        })
        .collect()
}

fn check_nodes(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Config("quadrature needs at least one node".into()));
    }
    Ok(())
}

/// Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> Result<Rule> {
    check_nodes(n)?;
    let a = vec![0.0; n];
    let b: Vec<f64> = (1..n)
        .map(|k| {
            let k = k as f64;
            k / (4.0 * k * k - 1.0).sqrt()
        })
        .collect();
    Ok(gauss_from_recurrence(&a, &b, 2.0))
}

/// Gauss–Legendre rule mapped onto `[lo, hi]`.
pub fn gauss_legendre_on(n: usize, lo: f64, hi: f64) -> Result<Rule> {
    let half = 0.5 * (hi - lo);
    let mid = 0.5 * (hi + lo);
    Ok(gauss_legendre(n)?.into_iter().map(|(x, w)| (mid + half * x, half * w)).collect())
}

/// Gauss–Jacobi rule on `[-1, 1]` for the weight `(1-x)^alpha (1+x)^beta`.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> Result<Rule> {
    check_nodes(n)?;
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(Error::Parameter(format!("Jacobi weight needs alpha, beta > -1, got ({alpha}, {beta})")));
    }
    let ab = alpha + beta;
    let a: Vec<f64> = (0..n)
        .map(|k| {
            if k == 0 {
                (beta - alpha) / (ab + 2.0)
            } else {
                let s = 2.0 * k as f64 + ab;
                (beta * beta - alpha * alpha) / (s * (s + 2.0))
            }
        })
        .collect();
    let b: Vec<f64> = (1..n)
        .map(|k| {
            let kf = k as f64;
            let s = 2.0 * kf + ab;
            let b2 = if k == 1 {
                4.0 * (1.0 + alpha) * (1.0 + beta) / ((2.0 + ab).powi(2) * (3.0 + ab))
            } else {
                4.0 * kf * (kf + alpha) * (kf + beta) * (kf + ab) / (s * s * (s + 1.0) * (s - 1.0))
            };
            b2.sqrt()
        })
        .collect();
    let mu0 = ((ab + 1.0) * std::f64::consts::LN_2 + libm::lgamma(alpha + 1.0) + libm::lgamma(beta + 1.0)
        - libm::lgamma(ab + 2.0))
    .exp();
    Ok(gauss_from_recurrence(&a, &b, mu0))
}

/// Generalized Gauss–Laguerre rule on `[0, ∞)` for the weight `x^alpha e^{-x}`.
pub fn gauss_laguerre(n: usize, alpha: f64) -> Result<Rule> {
    check_nodes(n)?;
    if !(alpha > -1.0) {
        return Err(Error::Parameter(format!("Laguerre weight needs alpha > -1, got {alpha}")));
    }
    let a: Vec<f64> = (0..n).map(|k| 2.0 * k as f64 + alpha + 1.0).collect();
    let b: Vec<f64> = (1..n).map(|k| (k as f64 * (k as f64 + alpha)).sqrt()).collect();
    Ok(gauss_from_recurrence(&a, &b, libm::tgamma(alpha + 1.0)))
}

/// Abscissa range of the tanh–sinh rule. Nodes reach within ~1e-60 of the
/// endpoints, enough for integrable singularities as strong as `x^-0.9`.
const TANH_SINH_T_MAX: f64 = 4.5;

/// Tanh–sinh rule on `(lo, hi)` with step `2^-level`.
///
/// Nodes never coincide with the endpoints, and the distance to the nearer
/// endpoint is computed without cancellation so integrands with algebraic
/// endpoint behavior stay accurate.
pub fn tanh_sinh(level: u32, lo: f64, hi: f64) -> Rule {
    let h = (0.5f64).powi(level as i32);
    let half = 0.5 * (hi - lo);
    let kmax = (TANH_SINH_T_MAX / h).ceil() as i64;
    let mut rule = Vec::with_capacity(2 * kmax as usize + 1);
    for k in -kmax..=kmax {
        let t = k as f64 * h;
        let u = FRAC_PI_2 * t.sinh();
        let cosh_u = u.cosh();
        // 1 - |tanh u| = e^{-|u|} / cosh u
        let gap = (-u.abs()).exp() / cosh_u;
        let w = h * FRAC_PI_2 * t.cosh() / (cosh_u * cosh_u) * half;
        let x = if t < 0.0 { lo + half * gap } else { hi - half * gap };
        if x > lo && x < hi && w > 0.0 {
            rule.push((x, w));
        }
    }
    rule
}

/// Integrate `f` over `(lo, hi)` by tanh–sinh, halving the step until two
/// successive levels agree to `rel_tol`. Returns `(value, error_estimate)`.
pub fn integrate_tanh_sinh<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64, max_level: u32) -> (f64, f64) {
    let eval = |level| tanh_sinh(level, lo, hi).iter().map(|&(x, w)| w * f(x)).sum::<f64>();
    let mut prev = eval(3);
    let mut err = f64::INFINITY;
    for level in 4..=max_level {
        let cur = eval(level);
        err = (cur - prev).abs();
        prev = cur;
        if err <= rel_tol * cur.abs() {
            break;
        }
    }
    (prev, err)
}

/// Integrate `f` over `(0, ∞)` through `r = s·u/(1-u)`, `u ∈ (0, 1)`, with
/// [`integrate_tanh_sinh`]. `scale` should be of the order of the width of
/// the integrand.
pub fn integrate_half_line<F: Fn(f64) -> f64>(f: F, scale: f64, rel_tol: f64, max_level: u32) -> (f64, f64) {
    integrate_tanh_sinh(
        |u| {
            let gap = 1.0 - u;
            let r = scale * u / gap;
            if !r.is_finite() {
                return 0.0;
            }
            let v = f(r) * scale / (gap * gap);
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        0.0,
        1.0,
        rel_tol,
        max_level,
    )
}
