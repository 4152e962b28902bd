//! Student's t statistics used by the experiment harness.

use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::StatsError;

/// Result of a two-sample test.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TTest {
    pub t: f64,
    pub p: f64,
    pub df: f64,
}

/// Sample mean.
pub fn mean(samples: &[f64]) -> f64 {
    samples.iter().sum::<f64>() / samples.len() as f64
}

/// Unbiased sample variance.
pub fn variance(samples: &[f64]) -> f64 {
    let m = mean(samples);
    samples.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (samples.len() as f64 - 1.0)
}

/// Two-tailed pooled-variance Student's t-test.
///
/// Degenerate inputs: zero pooled variance with equal means gives `p = 1`;
/// zero variance with unequal means gives `p = 0` with an infinite
/// t-statistic.
pub fn two_sample_t_test(group_a: &[f64], group_b: &[f64]) -> Result<TTest, StatsError> {
    for group in [group_a, group_b] {
        if group.len() < 2 {
            return Err(StatsError::TooFewSamples { need: 2, got: group.len() });
        }
    }
    let (na, nb) = (group_a.len() as f64, group_b.len() as f64);
    let (ma, mb) = (mean(group_a), mean(group_b));
    let df = na + nb - 2.0;
    let pooled = ((na - 1.0) * variance(group_a) + (nb - 1.0) * variance(group_b)) / df;
    let diff = ma - mb;
    if pooled <= 0.0 {
        return Ok(if diff == 0.0 {
            TTest { t: 0.0, p: 1.0, df }
        } else {
            TTest { t: diff.signum() * f64::INFINITY, p: 0.0, df }
        });
    }
    let t = diff / (pooled.sqrt() * (1.0 / na + 1.0 / nb).sqrt());
    let dist = StudentsT::new(0.0, 1.0, df).expect("df >= 2");
    let p = 2.0 * (1.0 - dist.cdf(t.abs()));
    Ok(TTest { t, p, df })
}

/// Mean and 95% confidence half-width: `t(0.975, n-1) * s / sqrt(n)`.
pub fn confidence_interval_95(samples: &[f64]) -> Result<(f64, f64), StatsError> {
    if samples.len() < 2 {
        return Err(StatsError::TooFewSamples { need: 2, got: samples.len() });
    }
    let n = samples.len() as f64;
    let m = mean(samples);
    let s = variance(samples).sqrt();
    if s == 0.0 {
        return Ok((m, 0.0));
    }
    let dist = StudentsT::new(0.0, 1.0, n - 1.0).expect("df >= 1");
    let t_crit = dist.inverse_cdf(0.975);
    Ok((m, t_crit * s / n.sqrt()))
}
