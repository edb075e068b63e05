//! Gauss–Legendre quadrature and line integrals of real one-forms on the
//! complex parameter domain.

use num_complex::Complex64;

use super::NumericsError;

pub const DEFAULT_QUADRATURE_ORDER: usize = 16;

/// Nodes and weights on `[0, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        assert!(order >= 1, "quadrature order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for k in 0..n.div_ceil(2) {
            // Newton on P_n from the Chebyshev-like initial guess.
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = 0.5 * (1.0 - x);
            nodes[n - 1 - k] = 0.5 * (1.0 + x);
            weights[k] = 0.5 * w;
            weights[n - 1 - k] = 0.5 * w;
        }
        GaussLegendre { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn integrate<E>(&self, mut f: impl FnMut(f64) -> Result<f64, E>) -> Result<f64, E> {
        let mut acc = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(*t)?;
        }
        Ok(acc)
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Polyline through the complex parameter domain.
#[derive(Debug, Clone, PartialEq)]
pub struct PathSpec {
    waypoints: Vec<Vec<Complex64>>,
    order: usize,
}

impl PathSpec {
    pub fn new(waypoints: Vec<Vec<Complex64>>, order: usize) -> Result<Self, NumericsError> {
        if waypoints.len() < 2 {
            return Err(NumericsError::InvalidPath("a path needs at least two waypoints".into()));
        }
        let m = waypoints[0].len();
        if m == 0 || waypoints.iter().any(|w| w.len() != m) {
            return Err(NumericsError::InvalidPath("waypoints have inconsistent dimension".into()));
        }
        if waypoints.windows(2).any(|w| w[0] == w[1]) {
            return Err(NumericsError::InvalidPath("consecutive waypoints coincide".into()));
        }
        if order == 0 {
            return Err(NumericsError::InvalidPath("quadrature order must be positive".into()));
        }
        Ok(PathSpec { waypoints, order })
    }

    pub fn segment(from: Vec<Complex64>, to: Vec<Complex64>) -> Result<Self, NumericsError> {
        Self::new(vec![from, to], DEFAULT_QUADRATURE_ORDER)
    }

    pub fn with_order(mut self, order: usize) -> Result<Self, NumericsError> {
        if order == 0 {
            return Err(NumericsError::InvalidPath("quadrature order must be positive".into()));
        }
        self.order = order;
        Ok(self)
    }

    pub fn waypoints(&self) -> &[Vec<Complex64>] {
        &self.waypoints
    }

    pub fn order(&self) -> usize {
        self.order
    }

    /// Concatenates `other` onto `self`; the end of `self` must be the start of `other`.
    pub fn concat(&self, other: &PathSpec) -> Result<PathSpec, NumericsError> {
        if self.waypoints.last() != other.waypoints.first() {
            return Err(NumericsError::InvalidPath("paths do not join".into()));
        }
        let mut w = self.waypoints.clone();
        w.extend(other.waypoints[1..].iter().cloned());
        PathSpec::new(w, self.order)
    }
}

/// Integrates a real one-form `Σ a_j dx_j + b_j dv_j` (with `z = x + i v`)
/// along `path`. The sampler returns the `2m` coefficients `(a, b)` at a point.
pub fn line_integral<E>(
    form: impl Fn(&[Complex64]) -> Result<Vec<f64>, E>,
    path: &PathSpec,
) -> Result<f64, E>
where
    E: From<NumericsError>,
{
    let rule = GaussLegendre::new(path.order);
    let m = path.waypoints[0].len();
    let mut total = 0.0;
    let mut point = vec![Complex64::new(0.0, 0.0); m];
    for seg in path.waypoints.windows(2) {
        let (p, q) = (&seg[0], &seg[1]);
        let delta: Vec<Complex64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
        total += rule.integrate(|t| {
            for k in 0..m {
                point[k] = p[k] + delta[k] * t;
            }
            let coeffs = form(&point)?;
            let mut s = 0.0;
            for k in 0..m {
                s += coeffs[k] * delta[k].re + coeffs[m + k] * delta[k].im;
            }
            if s.is_finite() {
                Ok(s)
            } else {
                Err(E::from(NumericsError::SingularPath))
            }
        })?;
    }
    Ok(total)
}
