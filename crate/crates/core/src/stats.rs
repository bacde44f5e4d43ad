use serde::{Deserialize, Serialize};

/// Min / median / mean / max of a sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StatSummary {
    pub min: f64,
    pub median: f64,
    pub mean: f64,
    pub max: f64,
    pub count: usize,
}

impl StatSummary {
    /// `None` for an empty sample. The median of an even-sized sample is the
    /// mean of the two middle values.
    pub fn from_values<I>(values: I) -> Option<Self>
    where
        I: IntoIterator<Item = f64>,
    {
        let mut v: Vec<f64> = values.into_iter().collect();
        if v.is_empty() {
            return None;
        }
        v.sort_by(f64::total_cmp);
        let count = v.len();
        let median = if count % 2 == 1 {
            v[count / 2]
        } else {
            (v[count / 2 - 1] + v[count / 2]) / 2.0
        };
        let mean = v.iter().sum::<f64>() / count as f64;
        // Rounding in the sum can push the mean a hair outside [min, max].
        let mean = mean.clamp(v[0], v[count - 1]);
        Some(Self {
            min: v[0],
            median,
            mean,
            max: v[count - 1],
            count,
        })
    }
}

pub fn mean(values: &[f64]) -> Option<f64> {
    (!values.is_empty()).then(|| values.iter().sum::<f64>() / values.len() as f64)
}

pub fn median(values: &[f64]) -> Option<f64> {
    StatSummary::from_values(values.iter().copied()).map(|s| s.median)
}
