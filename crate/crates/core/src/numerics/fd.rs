//! Central finite differences with Richardson extrapolation.

use super::NumericsError;

/// Step and extrapolation depth for central differences. The step is relative:
/// the absolute step is `base_step * max(1, |point|∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FdConfig {
    base_step: f64,
    levels: usize,
}

impl Default for FdConfig {
    fn default() -> Self {
        FdConfig {
            base_step: 1e-5,
            levels: 2,
        }
    }
}

impl FdConfig {
    pub fn new(base_step: f64, levels: usize) -> Result<Self, NumericsError> {
        if !(base_step > 1e-9 && base_step < 1e-2) {
            return Err(NumericsError::InvalidFdConfig(format!(
                "base step {base_step} outside (1e-9, 1e-2)"
            )));
        }
        if !(1..=4).contains(&levels) {
            return Err(NumericsError::InvalidFdConfig(format!(
                "richardson levels {levels} outside 1..=4"
            )));
        }
        Ok(FdConfig { base_step, levels })
    }

    pub fn base_step(&self) -> f64 {
        self.base_step
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn with_levels(self, levels: usize) -> Result<Self, NumericsError> {
        FdConfig::new(self.base_step, levels)
    }

    pub fn step_at(&self, point: &[f64]) -> f64 {
        let scale = point.iter().fold(1.0f64, |acc, v| acc.max(v.abs()));
        self.base_step * scale
    }
}

/// Richardson tableau over steps `h, h/2, …` for an O(h²)-leading estimate.
fn richardson(estimates: Vec<Vec<f64>>) -> Vec<f64> {
    let mut table = estimates;
    let levels = table.len();
    for j in 1..levels {
        let factor = 4f64.powi(j as i32) - 1.0;
        for k in (j..levels).rev() {
            let (lo, hi) = table.split_at_mut(k);
            let prev = &lo[k - 1];
            for (cur, p) in hi[0].iter_mut().zip(prev) {
                *cur += (*cur - p) / factor;
            }
        }
    }
    table.pop().unwrap_or_default()
}

/// Directional derivative of a vector field at `point` along `direction`.
pub fn fd_derivative<E>(
    field: impl Fn(&[f64]) -> Result<Vec<f64>, E>,
    point: &[f64],
    direction: &[f64],
    cfg: &FdConfig,
) -> Result<Vec<f64>, E> {
    let h0 = cfg.step_at(point);
    let mut shifted = point.to_vec();
    let mut estimates = Vec::with_capacity(cfg.levels);
    for level in 0..cfg.levels {
        let h = h0 / f64::from(1u32 << level);
        for (s, (p, d)) in shifted.iter_mut().zip(point.iter().zip(direction)) {
            *s = p + h * d;
        }
        let plus = field(&shifted)?;
        for (s, (p, d)) in shifted.iter_mut().zip(point.iter().zip(direction)) {
            *s = p - h * d;
        }
        let minus = field(&shifted)?;
        estimates.push(
            plus.iter()
                .zip(&minus)
                .map(|(a, b)| (a - b) / (2.0 * h))
                .collect(),
        );
    }
    Ok(richardson(estimates))
}

/// Partial derivatives along every coordinate axis: `out[b]` is `∂_b field`.
pub fn fd_jacobian<E>(
    field: impl Fn(&[f64]) -> Result<Vec<f64>, E>,
    point: &[f64],
    cfg: &FdConfig,
) -> Result<Vec<Vec<f64>>, E> {
    let n = point.len();
    let mut dir = vec![0.0; n];
    (0..n)
        .map(|b| {
            dir.iter_mut().for_each(|d| *d = 0.0);
            dir[b] = 1.0;
            fd_derivative(&field, point, &dir, cfg)
        })
        .collect()
}

/// Hessian of a scalar field by second differences, Richardson-extrapolated.
/// Returned row-major `n × n`, exactly symmetric.
pub fn fd_hessian<E>(
    field: impl Fn(&[f64]) -> Result<f64, E>,
    point: &[f64],
    cfg: &FdConfig,
) -> Result<Vec<f64>, E> {
    let n = point.len();
    let h0 = cfg.step_at(point);
    let f0 = field(point)?;
    let mut estimates = Vec::with_capacity(cfg.levels);
    let mut p = point.to_vec();
    for level in 0..cfg.levels {
        let h = h0 / f64::from(1u32 << level);
        let mut hess = vec![0.0; n * n];
        for a in 0..n {
            p[a] = point[a] + h;
            let fp = field(&p)?;
            p[a] = point[a] - h;
            let fm = field(&p)?;
            p[a] = point[a];
            hess[a * n + a] = (fp - 2.0 * f0 + fm) / (h * h);
            for b in a + 1..n {
                let mut corner = |sa: f64, sb: f64| {
                    p[a] = point[a] + sa * h;
                    p[b] = point[b] + sb * h;
                    let v = field(&p);
                    p[a] = point[a];
                    p[b] = point[b];
                    v
                };
                let v = (corner(1.0, 1.0)? - corner(1.0, -1.0)? - corner(-1.0, 1.0)? + corner(-1.0, -1.0)?)
                    / (4.0 * h * h);
                hess[a * n + b] = v;
                hess[b * n + a] = v;
            }
        }
        estimates.push(hess);
    }
    Ok(richardson(estimates))
}
