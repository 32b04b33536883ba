use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EffectMagnitude {
    Negligible,
    Small,
    Medium,
    Large,
}

impl EffectMagnitude {
    /// Thresholds on |delta|: 0.147, 0.33, 0.474.
    pub fn of(delta: f64) -> Self {
        let d = delta.abs();
        if d < 0.147 {
            EffectMagnitude::Negligible
        } else if d < 0.33 {
            EffectMagnitude::Small
        } else if d < 0.474 {
            EffectMagnitude::Medium
        } else {
            EffectMagnitude::Large
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EffectMagnitude::Negligible => "negligible",
            EffectMagnitude::Small => "small",
            EffectMagnitude::Medium => "medium",
            EffectMagnitude::Large => "large",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EffectSizeResult {
    pub delta: f64,
    pub magnitude: EffectMagnitude,
}

/// Cliff's delta of `x` over `y`. Returns a zero, negligible effect when
/// either sample is empty.
pub fn cliffs_delta(x: &[f64], y: &[f64]) -> EffectSizeResult {
    if x.is_empty() || y.is_empty() {
        return EffectSizeResult {
            delta: 0.0,
            magnitude: EffectMagnitude::Negligible,
        };
    }
    let mut sorted = y.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut greater: i64 = 0;
    let mut less: i64 = 0;
    for &xi in x {
        let below = sorted.partition_point(|&v| v < xi);
        let at_or_below = sorted.partition_point(|&v| v <= xi);
        greater += below as i64;
        less += (sorted.len() - at_or_below) as i64;
    }
    let delta = (greater - less) as f64 / (x.len() * y.len()) as f64;
    EffectSizeResult {
        delta,
        magnitude: EffectMagnitude::of(delta),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dominance() {
        let r = cliffs_delta(&[3.0, 4.0, 5.0], &[1.0, 2.0]);
        assert_eq!(r.delta, 1.0);
        assert_eq!(r.magnitude, EffectMagnitude::Large);
    }

    #[test]
    fn symmetric_samples() {
        let x = [1.0, 2.0, 2.0, 7.0];
        let r = cliffs_delta(&x, &x);
        assert_eq!(r.delta, 0.0);
        assert_eq!(r.magnitude, EffectMagnitude::Negligible);
    }

    #[test]
    fn interleaved() {
        // pairs: (1,2)<, (1,4)<, (3,2)>, (3,4)<
        let r = cliffs_delta(&[1.0, 3.0], &[2.0, 4.0]);
        assert_eq!(r.delta, -0.5);
        assert_eq!(r.magnitude, EffectMagnitude::Large);
    }

    #[test]
    fn thresholds() {
        assert_eq!(EffectMagnitude::of(0.146), EffectMagnitude::Negligible);
        assert_eq!(EffectMagnitude::of(0.147), EffectMagnitude::Small);
        assert_eq!(EffectMagnitude::of(-0.33), EffectMagnitude::Medium);
        assert_eq!(EffectMagnitude::of(0.473), EffectMagnitude::Medium);
        assert_eq!(EffectMagnitude::of(0.474), EffectMagnitude::Large);
    }
}
