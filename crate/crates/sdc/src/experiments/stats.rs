//! Failure-rate statistics: Wilson intervals, the logical-CNOT estimator
//! and power-law fits.

use serde::Serialize;

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Points whose interval spans more than this factor are left out of fits.
pub const MAX_CI_RATIO: f64 = 3.0;

/// Minimum failure count for a point to enter a fit.
pub const MIN_FAILURES: u64 = 10;

/// One sweep point. `rate` is the reported failure estimate (the raw
/// failure fraction, or the per-gate rate for the logical-CNOT benchmark)
/// and `[ci_lo, ci_hi]` its 95% interval.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepPoint {
    pub p: f64,
    pub shots: u64,
    pub failures: u64,
    pub rate: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Encoder runs started.
    pub attempts: u64,
    /// Encoder runs accepted.
    pub accepted: u64,
}

impl SweepPoint {
    /// Point whose rate is the plain failure fraction.
    pub fn from_counts(p: f64, shots: u64, failures: u64, attempts: u64, accepted: u64) -> Self {
        let (ci_lo, ci_hi) = wilson_interval(failures, shots);
        let rate = if shots == 0 {
            0.0
        } else {
            failures as f64 / shots as f64
        };
        SweepPoint {
            p,
            shots,
            failures,
            rate,
            ci_lo,
            ci_hi,
            attempts,
            accepted,
        }
    }

    /// Accepted fraction of encoder runs (1 when nothing was encoded).
    pub fn acceptance(&self) -> f64 {
        if self.attempts == 0 {
            1.0
        } else {
            self.accepted as f64 / self.attempts as f64
        }
    }

    fn usable(&self) -> bool {
        self.failures >= MIN_FAILURES
            && self.p > 0.0
            && self.rate > 0.0
            && self.ci_lo > 0.0
            && self.ci_hi / self.ci_lo <= MAX_CI_RATIO
    }
}

/// Wilson score interval for a binomial proportion at 95% confidence.
pub fn wilson_interval(failures: u64, shots: u64) -> (f64, f64) {
    if shots == 0 {
        return (0.0, 1.0);
    }
    let n = shots as f64;
    let phat = failures as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let center = (phat + z2 / (2.0 * n)) / denom;
    let half = Z95 * (phat * (1.0 - phat) / n + z2 / (4.0 * n * n)).sqrt() / denom;
    // The bounds are exactly 0 and 1 at the extremes; pin them against
    // rounding.
    let lo = if failures == 0 { 0.0 } else { (center - half).max(0.0) };
    let hi = if failures == shots { 1.0 } else { (center + half).min(1.0) };
    (lo, hi)
}

/// Per-gate logical error rate from the failure probability of `rounds`
/// rounds of `gates` parallel logical CNOTs:
/// `p_1 = 1 - (1 - p_rounds)^(1/rounds)`, `p_gate = 1 - (1 - p_1)^(1/gates)`.
pub fn per_gate_rate(p_rounds: f64, rounds: u32, gates: u32) -> f64 {
    let p1 = 1.0 - (1.0 - p_rounds).powf(1.0 / rounds as f64);
    1.0 - (1.0 - p1).powf(1.0 / gates as f64)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PowerLawFit {
    /// `a` in `rate = c p^a`.
    pub exponent: f64,
    /// `c` in `rate = c p^a`.
    pub prefactor: f64,
    pub exponent_stderr: f64,
    /// Standard error of `ln c`.
    pub log_prefactor_stderr: f64,
    /// Indices of the points that entered the fit.
    pub used: Vec<usize>,
    /// Residuals `ln rate - (ln c + a ln p)` of the used points.
    pub residuals: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("power-law fit needs at least 2 usable points, found {usable} of {total}")]
pub struct FitError {
    pub usable: usize,
    pub total: usize,
}

/// Unweighted least squares of `ln rate` on `ln p` over the points with at
/// least [`MIN_FAILURES`] failures and an interval narrower than
/// [`MAX_CI_RATIO`]. Standard errors come from the residual variance (zero
/// with only two points).
pub fn fit_power_law(points: &[SweepPoint]) -> Result<PowerLawFit, FitError> {
    let used: Vec<usize> = (0..points.len()).filter(|&i| points[i].usable()).collect();
    let m = used.len();
    if m < 2 {
        return Err(FitError {
            usable: m,
            total: points.len(),
        });
    }
    let xs: Vec<f64> = used.iter().map(|&i| points[i].p.ln()).collect();
    let ys: Vec<f64> = used.iter().map(|&i| points[i].rate.ln()).collect();
    let mf = m as f64;
    let xbar = xs.iter().sum::<f64>() / mf;
    let ybar = ys.iter().sum::<f64>() / mf;
    let sxx: f64 = xs.iter().map(|x| (x - xbar).powi(2)).sum();
    if sxx == 0.0 {
        return Err(FitError {
            usable: 1,
            total: points.len(),
        });
    }
    let sxy: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (x - xbar) * (y - ybar))
        .sum();
    let a = sxy / sxx;
    let b = ybar - a * xbar;
    let residuals: Vec<f64> = xs.iter().zip(&ys).map(|(x, y)| y - (b + a * x)).collect();
    let s2 = if m > 2 {
        residuals.iter().map(|r| r * r).sum::<f64>() / (mf - 2.0)
    } else {
        0.0
    };
    Ok(PowerLawFit {
        exponent: a,
        prefactor: b.exp(),
        exponent_stderr: (s2 / sxx).sqrt(),
        log_prefactor_stderr: (s2 * (1.0 / mf + xbar * xbar / sxx)).sqrt(),
        used,
        residuals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_brackets_the_estimate() {
        let (lo, hi) = wilson_interval(50, 1000);
        assert!(lo < 0.05 && 0.05 < hi);
        assert_eq!(wilson_interval(0, 100).0, 0.0);
        assert!(wilson_interval(0, 100).1 > 0.0);
        assert_eq!(wilson_interval(100, 100).1, 1.0);
    }

    #[test]
    fn per_gate_rate_of_zero_is_zero() {
        assert_eq!(per_gate_rate(0.0, 10, 6), 0.0);
    }
}
