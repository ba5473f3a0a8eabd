//! Numerical checks of the two elementary inequalities behind the counting
//! arguments: the Chernoff bound for a sum of Bernoulli variables and a
//! linear lower bound on the divergence `D(zeta p || p)`. Both use natural
//! logarithms.

use crate::error::{Error, Result};

/// `D(t || p)` in nats for Bernoulli laws.
pub fn binary_divergence_nats(t: f64, p: f64) -> f64 {
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    term(t, p) + term(1.0 - t, 1.0 - p)
}

fn open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::DomainError(format!("{name} = {v} must lie in (0, 1)")))
    }
}

/// `ln` of `(1 - p + p e^{hs})^n e^{-hsnt}`.
fn log_mgf_bound(t: f64, p: f64, n: usize, s: f64, h: f64) -> f64 {
    let hs = h * s;
    // ln(1 - p + p e^{hs}) without overflow for large |hs|
    let log_term = if hs > 0.0 {
        hs + ((1.0 - p) * (-hs).exp() + p).ln()
    } else {
        (1.0 - p + p * hs.exp()).ln()
    };
    n as f64 * (log_term - hs * t)
}

/// Minimizer of the exponent: `h = s ln(t (1-p) / (p (1-t)))`.
pub fn chernoff_minimizer(t: f64, p: f64, s: i8) -> f64 {
    f64::from(s) * (t * (1.0 - p) / (p * (1.0 - t))).ln()
}

/// Checks `min_h (1 - p + p e^{hs})^n e^{-hsnt} <= e^{-n D(t||p)}`.
///
/// The minimum is taken at the analytic critical point, where the bound must
/// hold within a relative slack of `1e-9`. A guard grid of `h` values around
/// it must never go below that value, confirming the point is the minimum.
pub fn chernoff_bound_check(t: f64, p: f64, n: usize, s: i8) -> Result<bool> {
    open_unit("t", t)?;
    open_unit("p", p)?;
    if s != 1 && s != -1 {
        return Err(Error::DomainError(format!("s = {s} must be +1 or -1")));
    }
    if n == 0 {
        return Err(Error::DomainError("n must be positive".into()));
    }
    let sf = f64::from(s);
    let h_star = chernoff_minimizer(t, p, s);
    let at_min = log_mgf_bound(t, p, n, sf, h_star);
    let target = -(n as f64) * binary_divergence_nats(t, p);
    let slack = 1e-9_f64.ln_1p();
    if at_min > target + slack {
        return Ok(false);
    }
    let offsets = [1e-4, 1e-3, 1e-2, 0.1, 0.5, 1.0, 2.0];
    let coarse = (-50..=50).map(|k| k as f64 * 0.1);
    let guard = offsets.iter().flat_map(|&d| [h_star - d, h_star + d]).chain(coarse);
    for h in guard {
        if log_mgf_bound(t, p, n, sf, h) < at_min - slack * (1.0 + at_min.abs()) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Checks `D(zeta p || p) >= p (zeta ln zeta - zeta + 1)` within `1e-12`.
pub fn divergence_linearization_check(zeta: f64, p: f64) -> Result<bool> {
    open_unit("zeta", zeta)?;
    open_unit("p", p)?;
    let lhs = binary_divergence_nats(zeta * p, p);
    let rhs = p * (zeta * zeta.ln() - zeta + 1.0);
    Ok(lhs >= rhs - 1e-12)
}

/// `(t, p, n, s)` with `t, p` in `{0.05, 0.10, ..., 0.95}`, `n` in
/// `{10, 100}` and both signs.
pub fn chernoff_grid() -> Vec<(f64, f64, usize, i8)> {
    let vals: Vec<f64> = (1..=19).map(|k| k as f64 * 0.05).collect();
    let mut out = Vec::with_capacity(vals.len() * vals.len() * 4);
    for &t in &vals {
        for &p in &vals {
            for n in [10, 100] {
                for s in [-1, 1] {
                    out.push((t, p, n, s));
                }
            }
        }
    }
    out
}

/// `(zeta, p)` on the grid `{0.01, ..., 0.99}` squared.
pub fn divergence_grid() -> Vec<(f64, f64)> {
    let vals: Vec<f64> = (1..=99).map(|k| k as f64 * 0.01).collect();
    vals.iter().flat_map(|&z| vals.iter().map(move |&p| (z, p))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_parameters_are_tight() {
        assert_eq!(chernoff_minimizer(0.3, 0.3, 1), 0.0);
        assert!(chernoff_bound_check(0.3, 0.3, 20, 1).unwrap());
        assert_eq!(binary_divergence_nats(0.3, 0.3), 0.0);
    }

    #[test]
    fn lower_tail_example() {
        assert!(chernoff_bound_check(0.1, 0.3, 50, -1).unwrap());
        // closed forms agree at the minimizer
        let h = chernoff_minimizer(0.1, 0.3, -1);
        assert!(h > 0.0);
        let direct = (1.0 - 0.3 + 0.3 * (-h).exp()).powi(50) * (h * 50.0 * 0.1).exp();
        let bound = (-50.0 * binary_divergence_nats(0.1, 0.3)).exp();
        assert!((direct / bound - 1.0).abs() < 1e-10);
    }

    #[test]
    fn wrong_bound_is_rejected() {
        // plugging a looser divergence would still pass; a tighter one must not
        let t = 0.1;
        let p = 0.3;
        let n = 50;
        let at_min = log_mgf_bound(t, p, n, -1.0, chernoff_minimizer(t, p, -1));
        assert!(at_min > -(n as f64) * binary_divergence_nats(t, p) * 1.01);
    }

    #[test]
    fn divergence_examples() {
        assert!(divergence_linearization_check(0.5, 0.2).unwrap());
        let near_one = divergence_linearization_check(0.999999, 0.4).unwrap();
        assert!(near_one);
        assert!(divergence_linearization_check(1.0, 0.4).is_err());
        assert!(chernoff_bound_check(0.0, 0.4, 10, 1).is_err());
        assert!(chernoff_bound_check(0.2, 0.4, 10, 0).is_err());
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(chernoff_grid().len(), 19 * 19 * 4);
        assert_eq!(divergence_grid().len(), 99 * 99);
    }
}
