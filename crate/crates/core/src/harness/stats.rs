use serde::{Deserialize, Serialize};

const Z95: f64 = 1.96;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiMethod {
    /// mean ± 1.96·s/√n for every metric.
    #[default]
    Normal,
    /// Wilson score interval for the stability proportion; regrets stay normal.
    Wilson,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConfidenceInterval {
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    /// Fewer than two samples: the interval collapses onto the mean.
    pub degenerate: bool,
}

impl ConfidenceInterval {
    pub fn half_width(&self) -> f64 {
        (self.hi - self.lo) / 2.0
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn overlaps(&self, other: &Self) -> bool {
        self.lo <= other.hi && other.lo <= self.hi
    }
}

/// Normal-approximation 95% interval using the sample standard deviation.
pub fn ci95(samples: &[f64]) -> ConfidenceInterval {
    let n = samples.len();
    let constant = n > 0 && samples.iter().all(|&x| x == samples[0]);
    let mean = match n {
        0 => f64::NAN,
        // summing a repeated value can drift in the last bit
        _ if constant => samples[0],
        _ => samples.iter().sum::<f64>() / n as f64,
    };
    if n < 2 || constant {
        return ConfidenceInterval {
            mean,
            lo: mean,
            hi: mean,
            degenerate: n < 2,
        };
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    let half = Z95 * var.sqrt() / (n as f64).sqrt();
    ConfidenceInterval {
        mean,
        lo: mean - half,
        hi: mean + half,
        degenerate: false,
    }
}

/// Wilson score 95% interval for `successes` out of `n`.
pub fn wilson95(successes: usize, n: usize) -> ConfidenceInterval {
    if n == 0 {
        return ConfidenceInterval {
            mean: f64::NAN,
            lo: f64::NAN,
            hi: f64::NAN,
            degenerate: true,
        };
    }
    let nf = n as f64;
    let p = successes as f64 / nf;
    let z2 = Z95 * Z95;
    let denom = 1.0 + z2 / nf;
    let centre = (p + z2 / (2.0 * nf)) / denom;
    let half = Z95 * (p * (1.0 - p) / nf + z2 / (4.0 * nf * nf)).sqrt() / denom;
    ConfidenceInterval {
        mean: p,
        lo: (centre - half).max(0.0),
        hi: (centre + half).min(1.0),
        degenerate: n < 2,
    }
}
