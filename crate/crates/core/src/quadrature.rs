//! Adaptive Gauss-Legendre quadrature.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSettings {
    pub atol: f64,
    pub max_depth: usize,
    /// Number of Gauss-Legendre nodes per panel.
    pub order: usize,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            atol: 1e-8,
            max_depth: 30,
            order: 8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: usize,
    /// False when some panel hit `max_depth` before meeting its tolerance.
    pub converged: bool,
}

/// Nodes and weights of the `n`-point rule on `[-1, 1]`, by Newton's
/// method on the Legendre polynomial `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // three-term recurrence for P_n(x) and P_{n-1}(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

struct Rule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl Rule {
    fn apply(&self, f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64, evals: &mut usize) -> Result<f64> {
        let (mid, half) = (0.5 * (a + b), 0.5 * (b - a));
        let mut s = 0.0;
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            s += w * f(mid + half * x)?;
            *evals += 1;
        }
        Ok(s * half)
    }
}

/// `int_a^b f` by recursive bisection: a panel is accepted when its two
/// halves agree with the whole to within the panel's share of `atol`.
pub fn integrate(
    mut f: impl FnMut(f64) -> Result<f64>,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadratureResult> {
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("integration limits must be finite".into()));
    }
    if settings.order == 0 || settings.atol <= 0.0 {
        return Err(Error::InvalidInput("quadrature needs order >= 1 and atol > 0".into()));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 0,
            converged: true,
        });
    }
    let (nodes, weights) = gauss_legendre(settings.order);
    let rule = Rule { nodes, weights };
    let mut evals = 0;
    let whole = rule.apply(&mut f, a, b, &mut evals)?;
    let mut out = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
        converged: true,
    };
    // explicit stack keeps panels in left-to-right order
    let mut stack = vec![(a, b, whole, settings.atol, 0usize)];
    while let Some((lo, hi, est, tol, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.apply(&mut f, lo, mid, &mut evals)?;
        let right = rule.apply(&mut f, mid, hi, &mut evals)?;
        let err = (left + right - est).abs();
        if err <= tol || depth + 1 >= settings.max_depth {
            if err > tol {
                out.converged = false;
            }
            out.value += left + right;
            out.error_estimate += err;
        } else {
            stack.push((mid, hi, right, 0.5 * tol, depth + 1));
            stack.push((lo, mid, left, 0.5 * tol, depth + 1));
        }
    }
    out.evaluations = evals;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_rules_integrate_polynomials_exactly() {
        for n in 1..=12 {
            let (x, w) = gauss_legendre(n);
            assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
            for deg in 0..(2 * n) {
                let exact = if deg % 2 == 1 { 0.0 } else { 2.0 / (deg as f64 + 1.0) };
                let approx: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(deg as i32)).sum();
                assert!((approx - exact).abs() < 1e-13, "n={n} deg={deg}");
            }
        }
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|_| Ok(1.0), 0.3, 0.3, &QuadratureSettings::default()).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.evaluations, 0);
    }

    #[test]
    fn smooth_and_kinked_integrands() {
        let s = QuadratureSettings::default();
        let r = integrate(|t| Ok(t.sin()), 0.0, std::f64::consts::PI, &s).unwrap();
        assert!((r.value - 2.0).abs() < 1e-12);
        assert!(r.converged);
        let r = integrate(|t| Ok((t - 0.3).abs()), 0.0, 1.0, &s).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-8);
        assert!(r.evaluations > 3 * s.order);
    }

    #[test]
    fn depth_limit_flags_non_convergence() {
        let s = QuadratureSettings {
            atol: 1e-14,
            max_depth: 2,
            order: 2,
        };
        let r = integrate(|t| Ok(t.sqrt()), 0.0, 1.0, &s).unwrap();
        assert!(!r.converged);
    }

    #[test]
    fn additivity() {
        let s = QuadratureSettings::default();
        let f = |t: f64| Ok((3.0 * t).cos().abs() + 1.0);
        let a = integrate(f, 0.0, 0.4, &s).unwrap().value;
        let b = integrate(f, 0.4, 1.1, &s).unwrap().value;
        let c = integrate(f, 0.0, 1.1, &s).unwrap().value;
        assert!((a + b - c).abs() < 2e-8);
    }
}
