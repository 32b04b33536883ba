use serde::{Deserialize, Serialize};

use super::{average_ranks, check_finite, StatsError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CorrelationMagnitude {
    Weak,
    Moderate,
    Strong,
}

impl CorrelationMagnitude {
    /// weak below 0.3, moderate below 0.7, strong otherwise (on |rho|).
    pub fn of(rho: f64) -> Self {
        let r = rho.abs();
        if r < 0.3 {
            CorrelationMagnitude::Weak
        } else if r < 0.7 {
            CorrelationMagnitude::Moderate
        } else {
            CorrelationMagnitude::Strong
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CorrelationMagnitude::Weak => "weak",
            CorrelationMagnitude::Moderate => "moderate",
            CorrelationMagnitude::Strong => "strong",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CorrelationResult {
    pub rho: f64,
    pub n: usize,
    pub magnitude: CorrelationMagnitude,
}

/// Spearman's rho: Pearson correlation of the average-tie ranks.
pub fn spearman_rho(x: &[f64], y: &[f64]) -> Result<CorrelationResult, StatsError> {
    if x.len() != y.len() {
        return Err(StatsError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < 2 {
        return Err(StatsError::TooFewSamples {
            needed: 2,
            got: x.len(),
        });
    }
    check_finite(x)?;
    check_finite(y)?;
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    let n = x.len() as f64;
    let mean = (n + 1.0) / 2.0;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in rx.iter().zip(&ry) {
        let (da, db) = (a - mean, b - mean);
        sxy += da * db;
        sxx += da * da;
        syy += db * db;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(StatsError::ConstantSample);
    }
    let rho = (sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0);
    Ok(CorrelationResult {
        rho,
        n: x.len(),
        magnitude: CorrelationMagnitude::of(rho),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_and_reverse() {
        let x = [1.0, 5.0, 2.5, 9.0];
        assert_eq!(spearman_rho(&x, &x).unwrap().rho, 1.0);
        let inc = [1.0, 2.0, 3.0, 4.0, 5.0];
        let dec = [5.0, 4.0, 3.0, 2.0, 1.0];
        assert_eq!(spearman_rho(&inc, &dec).unwrap().rho, -1.0);
    }

    #[test]
    fn hand_computed_value() {
        // 1 - 6 * 4 / 120
        let r = spearman_rho(&[1.0, 2.0, 3.0, 4.0, 5.0], &[2.0, 1.0, 4.0, 3.0, 5.0]).unwrap();
        assert!((r.rho - 0.8).abs() < 1e-12);
        assert_eq!(r.magnitude, CorrelationMagnitude::Strong);
    }

    #[test]
    fn two_points() {
        assert_eq!(spearman_rho(&[0.2, 0.8], &[0.1, 0.9]).unwrap().rho, 1.0);
        assert_eq!(spearman_rho(&[0.2, 0.8], &[0.9, 0.1]).unwrap().rho, -1.0);
    }

    #[test]
    fn errors() {
        assert_eq!(spearman_rho(&[1.0], &[1.0]), Err(StatsError::TooFewSamples { needed: 2, got: 1 }));
        assert_eq!(spearman_rho(&[1.0, 2.0], &[1.0]), Err(StatsError::LengthMismatch(2, 1)));
        assert_eq!(spearman_rho(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]), Err(StatsError::ConstantSample));
        assert_eq!(spearman_rho(&[1.0, f64::NAN], &[1.0, 2.0]), Err(StatsError::NonFinite));
    }

    #[test]
    fn magnitude_thresholds() {
        assert_eq!(CorrelationMagnitude::of(0.29), CorrelationMagnitude::Weak);
        assert_eq!(CorrelationMagnitude::of(-0.3), CorrelationMagnitude::Moderate);
        assert_eq!(CorrelationMagnitude::of(0.69), CorrelationMagnitude::Moderate);
        assert_eq!(CorrelationMagnitude::of(0.7), CorrelationMagnitude::Strong);
    }
}
