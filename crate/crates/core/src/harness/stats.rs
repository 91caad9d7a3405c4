use serde::{Deserialize, Serialize};

/// Two-sided 95% normal quantile.
pub const Z95: f64 = 1.959_963_984_540_054;

/// Wilson score interval at 95% for `count` successes out of `trials`.
pub fn wilson(count: usize, trials: usize) -> (f64, f64) {
    if trials == 0 {
        return (0.0, 1.0);
    }
    let n = trials as f64;
    let p = count as f64 / n;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / n;
    let centre = (p + z2 / (2.0 * n)) / denom;
    let half = Z95 / denom * (p * (1.0 - p) / n + z2 / (4.0 * n * n)).sqrt();
    ((centre - half).max(0.0), (centre + half).min(1.0))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Frequency {
    pub count: usize,
    pub trials: usize,
    pub frequency: f64,
    pub wilson_low: f64,
    pub wilson_high: f64,
}

impl Frequency {
    pub fn new(count: usize, trials: usize) -> Self {
        let (wilson_low, wilson_high) = wilson(count, trials);
        Frequency {
            count,
            trials,
            frequency: if trials == 0 { 0.0 } else { count as f64 / trials as f64 },
            wilson_low,
            wilson_high,
        }
    }

    pub fn contains(&self, p: f64) -> bool {
        (self.wilson_low..=self.wilson_high).contains(&p)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub count: usize,
    pub min: f64,
    pub mean: f64,
    pub max: f64,
}

impl Summary {
    pub fn of(values: impl IntoIterator<Item = f64>) -> Option<Self> {
        let values: Vec<f64> = values.into_iter().collect();
        if values.is_empty() {
            return None;
        }
        let sum: f64 = values.iter().sum();
        Some(Summary {
            count: values.len(),
            min: values.iter().copied().fold(f64::INFINITY, f64::min),
            mean: sum / values.len() as f64,
            max: values.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wilson_reference_values() {
        // 50/100: 0.5 +- 0.0962 (approximately symmetric)
        let (lo, hi) = wilson(50, 100);
        assert!((lo - 0.4038).abs() < 1e-3 && (hi - 0.5962).abs() < 1e-3);
        let (lo, hi) = wilson(0, 10);
        assert!(lo.abs() < 1e-12);
        assert!((hi - 0.2775).abs() < 1e-3);
        let (lo, hi) = wilson(10, 10);
        assert!((lo - 0.7225).abs() < 1e-3 && (hi - 1.0).abs() < 1e-12);
    }
}
