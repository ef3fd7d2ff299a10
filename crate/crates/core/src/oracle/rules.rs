//! Gauss–Legendre on (0,1) and Gauss–Laguerre on (0,∞) in double-double.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, OnceLock, RwLock};

use crate::error::{Error, Result};
use crate::numerics::DoubleDouble;

pub const MIN_ORDER: usize = 2;
pub const MAX_ORDER: usize = 512;
const MAX_NEWTON: usize = 200;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    /// Weight 1 on (0, 1).
    Legendre01,
    /// Weight e^{-t} on (0, ∞).
    Laguerre0Inf,
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RuleKind::Legendre01 => "legendre_01",
            RuleKind::Laguerre0Inf => "laguerre_0inf",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    pub kind: RuleKind,
    /// (abscissa, weight), abscissas increasing. Laguerre nodes whose weight
    /// underflows binary64 are left out.
    pub nodes: Vec<(DoubleDouble, DoubleDouble)>,
    pub order: usize,
}

/// Builds the `order`-point rule by Newton iteration on the three-term
/// recurrence.
pub fn build_rule(kind: RuleKind, order: usize) -> Result<QuadratureRule> {
    if !(MIN_ORDER..=MAX_ORDER).contains(&order) {
        return Err(Error::InvalidParameter(format!(
            "quadrature order must be in [{MIN_ORDER}, {MAX_ORDER}], got {order}"
        )));
    }
    let nodes = match kind {
        RuleKind::Legendre01 => legendre_nodes(order)?,
        RuleKind::Laguerre0Inf => laguerre_nodes(order)?,
    };
    Ok(QuadratureRule { kind, nodes, order })
}

type Cache = RwLock<HashMap<(RuleKind, usize), Arc<QuadratureRule>>>;

/// Shared, lazily filled rule cache.
pub fn cached_rule(kind: RuleKind, order: usize) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    if let Some(rule) = cache.read().expect("rule cache poisoned").get(&(kind, order)) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(build_rule(kind, order)?);
    let mut map = cache.write().expect("rule cache poisoned");
    Ok(Arc::clone(map.entry((kind, order)).or_insert(rule)))
}

// P_n(z) and P_{n-1}(z).
fn legendre_pair(n: usize, z: DoubleDouble) -> (DoubleDouble, DoubleDouble) {
    let mut p0 = DoubleDouble::ONE;
    let mut p1 = z;
    for k in 1..n {
        let kf = k as f64;
        let p2 = (z * p1).mul_f64(2.0 * kf + 1.0) - p0.mul_f64(kf);
        p0 = p1;
        p1 = p2.div_f64(kf + 1.0);
    }
    (p1, p0)
}

// Newton has converged when the step is at roundoff level, or has stopped
// shrinking once it is close to it.
fn settled(step: f64, previous: f64, scale: f64) -> bool {
    step <= 1e-31 * scale || (step <= 1e-24 * scale && step >= previous)
}

fn newton_failed(kind: &str, i: usize) -> Error {
    Error::QuadratureNonConvergence(format!("{kind} root {i} did not converge in {MAX_NEWTON} Newton steps"))
}

fn legendre_nodes(n: usize) -> Result<Vec<(DoubleDouble, DoubleDouble)>> {
    let nf = n as f64;
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut z = DoubleDouble::from_f64((std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos());
        let mut converged = false;
        let mut deriv = DoubleDouble::ONE;
        let mut previous = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let (pn, pm) = legendre_pair(n, z);
            deriv = (z * pn - pm).mul_f64(nf) / (z.sqr() - DoubleDouble::ONE);
            let dz = pn / deriv;
            z -= dz;
            let step = dz.abs().hi;
            if settled(step, previous, 1.0) {
                converged = true;
                break;
            }
            previous = step;
        }
        if !converged {
            return Err(newton_failed("Legendre", i));
        }
        let (pn, pm) = legendre_pair(n, z);
        if pn.abs().hi > 1e-20 {
            deriv = (z * pn - pm).mul_f64(nf) / (z.sqr() - DoubleDouble::ONE);
        }
        let w = DoubleDouble::from_f64(2.0) / ((DoubleDouble::ONE - z.sqr()) * deriv.sqr());
        // map [-1, 1] to [0, 1]
        out.push(((z + DoubleDouble::ONE).mul_f64(0.5), w.mul_f64(0.5)));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite nodes"));
    Ok(out)
}

// L_n(x), L_{n-1}(x) rescaled by 2^-shift; returns (L_n, L_{n-1}, shift).
fn laguerre_pair(n: usize, x: DoubleDouble) -> (DoubleDouble, DoubleDouble, i32) {
    let mut p0 = DoubleDouble::ONE;
    let mut p1 = DoubleDouble::ONE - x;
    let mut shift = 0i32;
    for k in 1..n {
        let kf = k as f64;
        let p2 = ((DoubleDouble::from_f64(2.0 * kf + 1.0) - x) * p1 - p0.mul_f64(kf)).div_f64(kf + 1.0);
        p0 = p1;
        p1 = p2;
        if p1.abs().hi > 1e200 {
            p0 = p0.ldexp(-600);
            p1 = p1.ldexp(-600);
            shift += 600;
        }
    }
    (p1, p0, shift)
}

// Eigenvalues of the Laguerre Jacobi matrix by Sturm bisection in binary64;
// these seed the double-double Newton iteration.
fn laguerre_seeds(n: usize) -> Vec<f64> {
    let count_below = |lambda: f64| {
        let mut count = 0;
        let mut d = 1.0 - lambda;
        if d < 0.0 {
            count += 1;
        }
        for i in 1..n {
            let beta2 = (i * i) as f64;
            let denom = if d == 0.0 { f64::MIN_POSITIVE } else { d };
            d = (2.0 * i as f64 + 1.0) - lambda - beta2 / denom;
            if d < 0.0 {
                count += 1;
            }
        }
        count
    };
    let upper = 4.0 * n as f64 + 2.0;
    (0..n)
        .map(|k| {
            let (mut lo, mut hi) = (0.0, upper);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if count_below(mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn laguerre_nodes(n: usize) -> Result<Vec<(DoubleDouble, DoubleDouble)>> {
    let nf = n as f64;
    let mut out = Vec::with_capacity(n);
    for (i, seed) in laguerre_seeds(n).into_iter().enumerate() {
        let mut x = DoubleDouble::from_f64(seed);
        let mut converged = false;
        let mut previous = f64::INFINITY;
        for _ in 0..MAX_NEWTON {
            let (ln, lm, _) = laguerre_pair(n, x);
            // L_n' = n (L_n - L_{n-1}) / x
            let deriv = (ln - lm).mul_f64(nf) / x;
            let dx = ln / deriv;
            x -= dx;
            let step = dx.abs().hi;
            if settled(step, previous, x.hi.max(1.0)) {
                converged = true;
                break;
            }
            previous = step;
        }
        if !converged {
            return Err(newton_failed("Laguerre", i));
        }
        // w = x / ((n+1)^2 L_{n+1}(x)^2), in logarithms to survive the scaling
        let (ln, lm, shift) = laguerre_pair(n, x);
        let next = ((DoubleDouble::from_f64(2.0 * nf + 1.0) - x) * ln - lm.mul_f64(nf)).div_f64(nf + 1.0);
        let log_w = x.ln()
            - DoubleDouble::from_f64(nf + 1.0).ln().mul_f64(2.0)
            - next.abs().ln().mul_f64(2.0)
            - DoubleDouble::LN_2.mul_f64(2.0 * shift as f64);
        let w = log_w.exp();
        if w.hi > 0.0 && w.hi.is_normal() {
            out.push((x, w));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_point_legendre() {
        let rule = build_rule(RuleKind::Legendre01, 2).unwrap();
        let offset = DoubleDouble::ONE / DoubleDouble::from_f64(12.0).sqrt();
        let half = DoubleDouble::from_f64(0.5);
        assert!((rule.nodes[0].0 - (half - offset)).abs().hi < 1e-31);
        assert!((rule.nodes[1].0 - (half + offset)).abs().hi < 1e-31);
        for &(_, w) in &rule.nodes {
            assert!((w - half).abs().hi < 1e-31);
        }
    }

    #[test]
    fn legendre_weights_and_moments() {
        for n in [4, 17, 128, 512] {
            let rule = build_rule(RuleKind::Legendre01, n).unwrap();
            assert_eq!(rule.nodes.len(), n);
            let mut sum = DoubleDouble::ZERO;
            let mut cubic = DoubleDouble::ZERO;
            for &(t, w) in &rule.nodes {
                assert!(t.hi > 0.0 && t.hi < 1.0 && w.hi > 0.0);
                sum += w;
                cubic += w * t * t * t;
            }
            assert!((sum - DoubleDouble::ONE).abs().hi < 1e-20, "n={n}");
            assert!((cubic - DoubleDouble::from_f64(0.25)).abs().hi < 1e-20);
            assert!(rule.nodes.windows(2).all(|p| p[0].0 < p[1].0));
        }
    }

    #[test]
    fn laguerre_moments() {
        for n in [20, 96, 192] {
            let rule = build_rule(RuleKind::Laguerre0Inf, n).unwrap();
            let mut m0 = DoubleDouble::ZERO;
            let mut m1 = DoubleDouble::ZERO;
            let mut m3 = DoubleDouble::ZERO;
            for &(t, w) in &rule.nodes {
                assert!(t.hi > 0.0 && w.hi > 0.0);
                m0 += w;
                m1 += w * t;
                m3 += w * t * t * t;
            }
            assert!((m0 - DoubleDouble::ONE).abs().hi < 1e-18, "n={n}");
            assert!((m1 - DoubleDouble::ONE).abs().hi < 1e-18, "n={n}");
            assert!((m3 - DoubleDouble::from_f64(6.0)).abs().hi < 1e-16, "n={n}");
            assert!(rule.nodes.windows(2).all(|p| p[0].0 < p[1].0));
        }
    }

    #[test]
    fn order_bounds() {
        assert!(build_rule(RuleKind::Legendre01, 1).is_err());
        assert!(build_rule(RuleKind::Laguerre0Inf, 513).is_err());
    }

    #[test]
    fn cache_returns_same_rule() {
        let a = cached_rule(RuleKind::Legendre01, 8).unwrap();
        let b = cached_rule(RuleKind::Legendre01, 8).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(*a, build_rule(RuleKind::Legendre01, 8).unwrap());
    }
}
