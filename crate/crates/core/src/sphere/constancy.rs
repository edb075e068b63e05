use crate::kahler::SKPoint;
use crate::numerics::pfaffian;
use crate::GeometryError;

use super::darboux::DarbouxFrame;

/// Spreads (max − min across samples) of quantities that are `∇`-parallel and
/// therefore constant in Darboux coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstancySpreads {
    /// Spread of `det G`.
    pub det_g: f64,
    /// Largest spread over the components `ω_ab`.
    pub omega: f64,
    /// Spread of `m!·Pf(ω) / √|det G|`, the ratio of `ω^m` to the metric volume.
    pub volume_ratio: f64,
}

/// Per-sample values entering [`ConstancySpreads`].
#[derive(Debug, Clone, PartialEq)]
pub struct ConstancyValues {
    pub det_g: f64,
    pub omega: Vec<f64>,
    pub volume_ratio: f64,
}

impl ConstancyValues {
    pub fn new(frame: &DarbouxFrame) -> Self {
        let n = frame.omega.nrows();
        let m = n / 2;
        let det_g = frame.det_g();
        let factorial: f64 = (1..=m).map(|k| k as f64).product();
        let volume_ratio = factorial * pfaffian(&frame.omega) / det_g.abs().sqrt();
        ConstancyValues {
            det_g,
            omega: frame.omega.transpose().iter().copied().collect(),
            volume_ratio,
        }
    }
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

pub fn spreads_of(values: &[ConstancyValues]) -> Result<ConstancySpreads, GeometryError> {
    if values.len() < 2 {
        return Err(GeometryError::TooFewSamples(values.len()));
    }
    let k = values[0].omega.len();
    Ok(ConstancySpreads {
        det_g: spread(values.iter().map(|v| v.det_g)),
        omega: (0..k)
            .map(|i| spread(values.iter().map(|v| v.omega[i])))
            .fold(0.0, f64::max),
        volume_ratio: spread(values.iter().map(|v| v.volume_ratio)),
    })
}

pub fn constancy_certificates(samples: &[SKPoint]) -> Result<ConstancySpreads, GeometryError> {
    if samples.len() < 2 {
        return Err(GeometryError::TooFewSamples(samples.len()));
    }
    let values = samples
        .iter()
        .map(|p| DarbouxFrame::new(p).map(|f| ConstancyValues::new(&f)))
        .collect::<Result<Vec<_>, _>>()?;
    spreads_of(&values)
}
