#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Exact,
    MonteCarlo,
}

impl Estimator {
    pub fn name(self) -> &'static str {
        match self {
            Self::Exact => "exact",
            Self::MonteCarlo => "mc",
        }
    }
}

/// Per-message and pooled authentication error.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub estimator: Estimator,
    pub per_message: Vec<f64>,
    pub average: f64,
    pub maximum: f64,
    /// Wilson 95% half-widths per message (Monte Carlo only).
    pub ci_half_width: Option<Vec<f64>>,
    /// Wilson 95% half-width of the pooled average (Monte Carlo only).
    pub pooled_ci_half_width: Option<f64>,
    /// Trials per message; zero for exact evaluation.
    pub trials: usize,
    pub seed: Option<u64>,
}

impl ErrorReport {
    pub fn exact(per_message: Vec<f64>) -> Self {
        let (average, maximum) = summarize(&per_message);
        Self {
            estimator: Estimator::Exact,
            per_message,
            average,
            maximum,
            ci_half_width: None,
            pooled_ci_half_width: None,
            trials: 0,
            seed: None,
        }
    }

    pub(crate) fn from_counts(errors: &[u64], trials: usize, seed: u64) -> Self {
        let per_message: Vec<f64> = errors.iter().map(|&e| e as f64 / trials as f64).collect();
        let halves = errors.iter().map(|&e| wilson_half_width(e, trials as u64)).collect();
        let total: u64 = errors.iter().sum();
        let pooled = wilson_half_width(total, (trials * errors.len()) as u64);
        let (average, maximum) = summarize(&per_message);
        Self {
            estimator: Estimator::MonteCarlo,
            per_message,
            average,
            maximum,
            ci_half_width: Some(halves),
            pooled_ci_half_width: Some(pooled),
            trials,
            seed: Some(seed),
        }
    }
}

fn summarize(per_message: &[f64]) -> (f64, f64) {
    let avg = per_message.iter().sum::<f64>() / per_message.len().max(1) as f64;
    let max = per_message.iter().copied().fold(0.0, f64::max);
    (avg, max)
}

/// Half-width of the 95% Wilson score interval for `successes` out of
/// `trials`.
pub fn wilson_half_width(successes: u64, trials: u64) -> f64 {
    if trials == 0 {
        return 1.0;
    }
    const Z: f64 = 1.96;
    let n = trials as f64;
    let p = successes as f64 / n;
    let z2 = Z * Z;
    Z / (1.0 + z2 / n) * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt()
}
