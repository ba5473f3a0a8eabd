use crate::error::{Error, Result};
use crate::prob::{binary_entropy, Dist};

/// Capacity in bits of the binary asymmetric channel with `P(1|0) = p0` and
/// `P(0|1) = p1`, with the input law achieving it.
///
/// Uses the closed form for square invertible channels: with
/// `c = -W^{-1} h`, `C = log2(2^c0 + 2^c1)` and the optimal output law is
/// `2^{c_y - C}`.
pub fn bac_capacity(p0: f64, p1: f64) -> Result<(f64, Dist)> {
    for (name, p) in [("p0", p0), ("p1", p1)] {
        if !(0.0..1.0).contains(&p) {
            return Err(Error::DomainError(format!("{name} = {p} must lie in [0, 1)")));
        }
    }
    let det = 1.0 - p0 - p1;
    if det.abs() < 1e-12 {
        return Err(Error::DegenerateChannel(format!(
            "BAC({p0}, {p1}) has identical rows and zero capacity"
        )));
    }
    let (h0, h1) = (binary_entropy(p0), binary_entropy(p1));
    let c0 = (-h0 * (1.0 - p1) + h1 * p0) / det;
    let c1 = (-h1 * (1.0 - p0) + h0 * p1) / det;
    let top = c0.max(c1);
    let capacity = top + ((c0 - top).exp2() + (c1 - top).exp2()).log2();
    let q1 = (c1 - capacity).exp2();
    let alpha = ((q1 - p0) / det).clamp(0.0, 1.0);
    Ok((capacity.max(0.0), Dist::bernoulli(alpha)?))
}

/// Mutual information in bits between a Bernoulli(`alpha`) input and the
/// output of BAC(`p0`, `p1`).
pub fn bac_mutual_information(alpha: f64, p0: f64, p1: f64) -> f64 {
    let q1 = (1.0 - alpha) * p0 + alpha * (1.0 - p1);
    binary_entropy(q1) - (1.0 - alpha) * binary_entropy(p0) - alpha * binary_entropy(p1)
}

/// Crossover from a `1` input through Z(`gamma`) followed by BSC(`p`).
pub fn z_then_bsc_crossover(p: f64, gamma: f64) -> f64 {
    gamma + p - 2.0 * gamma * p
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid_max(p0: f64, p1: f64) -> (f64, f64) {
        // coarse scan followed by a fine one around the best point
        let mut best = (0.0, 0.0);
        for k in 0..=10_000 {
            let a = k as f64 / 10_000.0;
            let v = bac_mutual_information(a, p0, p1);
            if v > best.0 {
                best = (v, a);
            }
        }
        let centre = best.1;
        for k in -2000..=2000 {
            let a = (centre + k as f64 * 1e-7).clamp(0.0, 1.0);
            let v = bac_mutual_information(a, p0, p1);
            if v > best.0 {
                best = (v, a);
            }
        }
        best
    }

    #[test]
    fn symmetric_case_is_bsc() {
        for p in [0.0, 0.05, 0.11, 0.3] {
            let (c, alpha) = bac_capacity(p, p).unwrap();
            assert!((c - (1.0 - binary_entropy(p))).abs() < 1e-12, "{p}");
            assert!((alpha.prob(1) - 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn agrees_with_grid_search() {
        let gamma = 0.1;
        let cases = [
            (0.25, z_then_bsc_crossover(0.25, gamma)),
            (0.0, 0.1),
            (0.1, z_then_bsc_crossover(0.1, 0.05)),
            (0.02, 0.4),
            (0.7, 0.6),
        ];
        for (p0, p1) in cases {
            let (c, alpha) = bac_capacity(p0, p1).unwrap();
            let (gv, ga) = grid_max(p0, p1);
            assert!((c - gv).abs() < 1e-6, "{p0} {p1}: {c} vs {gv}");
            assert!((alpha.prob(1) - ga).abs() < 1e-3, "{p0} {p1}");
            assert!((bac_mutual_information(alpha.prob(1), p0, p1) - c).abs() < 1e-9);
        }
    }

    #[test]
    fn z_channel_capacity() {
        // Z-channel: C = log2(1 + (1-g) g^{g/(1-g)})
        let g: f64 = 0.1;
        let expected = (1.0 + (1.0 - g) * g.powf(g / (1.0 - g))).log2();
        let (c, _) = bac_capacity(0.0, g).unwrap();
        assert!((c - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_useless_and_invalid() {
        assert!(matches!(bac_capacity(0.3, 0.7), Err(Error::DegenerateChannel(_))));
        assert!(matches!(bac_capacity(1.0, 0.0), Err(Error::DomainError(_))));
        assert!(matches!(bac_capacity(-0.1, 0.0), Err(Error::DomainError(_))));
        assert_eq!(bac_capacity(0.0, 0.0).unwrap().0, 1.0);
    }

    #[test]
    fn composed_crossover() {
        assert!((z_then_bsc_crossover(0.25, 0.1) - 0.3).abs() < 1e-15);
        assert_eq!(z_then_bsc_crossover(0.2, 0.0), 0.2);
    }
}
