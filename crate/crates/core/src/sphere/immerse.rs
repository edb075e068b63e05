//! Sampling the Blaschke immersion `ξ ↦ (x, y, u)` over a grid or point set.

use std::collections::VecDeque;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::dsl::Prepotential;
use crate::kahler::SKPoint;
use crate::numerics::SymMatrix;
use crate::GeometryError;

use super::darboux::DarbouxFrame;
use super::potential::potential_on_segment;

/// Default relative margin from the degenerate locus; see [`Screening`].
pub const DEFAULT_DEGENERATE_MARGIN: f64 = 0.1;

/// Node acceptance rule: the point must be nondegenerate and the smallest
/// `|eigenvalue|` of `Im Hess F` must exceed `margin * (1 + ‖Hess F‖∞)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Screening {
    pub margin: f64,
}

impl Default for Screening {
    fn default() -> Self {
        Screening {
            margin: DEFAULT_DEGENERATE_MARGIN,
        }
    }
}

impl Screening {
    pub fn accepts(&self, p: &SKPoint) -> bool {
        p.is_nondegenerate() && p.relative_margin() > self.margin
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridAxis {
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl GridAxis {
    pub fn new(lo: f64, hi: f64, n: usize) -> Result<Self, GeometryError> {
        if n < 2 {
            return Err(GeometryError::InvalidPlan(format!("axis resolution {n} < 2")));
        }
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(GeometryError::InvalidPlan(format!("axis range [{lo}, {hi}] is empty")));
        }
        Ok(GridAxis { lo, hi, n })
    }

    pub fn node(&self, k: usize) -> f64 {
        if k + 1 == self.n {
            return self.hi;
        }
        self.lo + (self.hi - self.lo) * k as f64 / (self.n - 1) as f64
    }
}

/// Product grid over the working chart. Axes are ordered `(x1..xm, v1..vm)`;
/// node indices are lexicographic with the first axis slowest.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    axes: Vec<GridAxis>,
}

impl Grid {
    pub fn new(axes: Vec<GridAxis>) -> Result<Self, GeometryError> {
        if axes.is_empty() || axes.len() % 2 != 0 {
            return Err(GeometryError::InvalidPlan("grid needs an x and v axis per complex variable".into()));
        }
        Ok(Grid { axes })
    }

    /// Same `(x, v)` axes for every complex variable.
    pub fn uniform(m: usize, x: GridAxis, v: GridAxis) -> Self {
        let mut axes = vec![x; m];
        axes.extend(std::iter::repeat_n(v, m));
        Grid { axes }
    }

    pub fn arity(&self) -> usize {
        self.axes.len() / 2
    }

    pub fn axes(&self) -> &[GridAxis] {
        &self.axes
    }

    pub fn len(&self) -> usize {
        self.axes.iter().map(|a| a.n).product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn multi_index(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.axes.len()];
        for (slot, axis) in out.iter_mut().zip(&self.axes).rev() {
            *slot = idx % axis.n;
            idx /= axis.n;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi.iter().zip(&self.axes).fold(0, |acc, (k, a)| acc * a.n + k)
    }

    pub fn chart_point(&self, idx: usize) -> Vec<f64> {
        self.multi_index(idx)
            .iter()
            .zip(&self.axes)
            .map(|(k, a)| a.node(*k))
            .collect()
    }

    pub fn z(&self, idx: usize) -> Vec<Complex64> {
        crate::kahler::chart_to_z(&self.chart_point(idx))
    }

    /// Grid neighbours of `idx` in axis order, `−1` before `+1`.
    pub fn neighbours(&self, idx: usize) -> Vec<usize> {
        let multi = self.multi_index(idx);
        let mut out = Vec::with_capacity(2 * self.axes.len());
        for (axis, a) in self.axes.iter().enumerate() {
            let k = multi[axis];
            let mut step = |nk: usize| {
                let mut mm = multi.clone();
                mm[axis] = nk;
                out.push(self.flat_index(&mm));
            };
            if k > 0 {
                step(k - 1);
            }
            if k + 1 < a.n {
                step(k + 1);
            }
        }
        out
    }
}

pub mod flags {
    /// `u` is normalized at a node of its own component instead of the base
    /// point, because no nondegenerate path reaches the base.
    pub const SEPARATE_SHEET: u32 = 1;
}

/// One point of the realized parabolic sphere.
#[derive(Debug, Clone, PartialEq)]
pub struct ImmersionSample {
    /// Index in the sample plan (grid index for grids).
    pub index: usize,
    pub z: Vec<Complex64>,
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub u: f64,
    pub g: SymMatrix,
    pub det_g: f64,
    pub flags: u32,
}

impl ImmersionSample {
    /// Ambient point `Φ = (x, y, u) ∈ R^{2m+1}`.
    pub fn ambient(&self) -> Vec<f64> {
        self.x.iter().chain(&self.y).copied().chain(std::iter::once(self.u)).collect()
    }

    /// Affine normal of the graph realization, `e_{2m+1}`.
    pub fn affine_normal(&self) -> Vec<f64> {
        let mut n = vec![0.0; self.x.len() + self.y.len() + 1];
        *n.last_mut().expect("nonempty") = 1.0;
        n
    }
}

#[derive(Debug, Clone, Default)]
pub struct Immersion {
    /// Samples in plan order, degenerate nodes omitted.
    pub samples: Vec<ImmersionSample>,
    /// Plan indices rejected by screening or evaluation.
    pub degenerate: Vec<usize>,
    pub warnings: Vec<String>,
}

struct NodeData {
    z: Vec<Complex64>,
    frame: DarbouxFrame,
}

fn evaluate_nodes(
    prep: &Prepotential,
    points: &[Vec<Complex64>],
    screening: Screening,
) -> Vec<Result<NodeData, String>> {
    points
        .par_iter()
        .map(|z| {
            let p = SKPoint::new(prep, z).map_err(|e| e.to_string())?;
            if !screening.accepts(&p) {
                return Err(format!(
                    "degenerate (relative margin {:.3e} ≤ {})",
                    p.relative_margin(),
                    screening.margin
                ));
            }
            let frame = DarbouxFrame::new(&p).map_err(|e| e.to_string())?;
            Ok(NodeData { z: z.clone(), frame })
        })
        .collect()
}

fn sample(index: usize, node: &NodeData, u: f64, flags: u32) -> ImmersionSample {
    ImmersionSample {
        index,
        z: node.z.clone(),
        x: node.frame.x.clone(),
        y: node.frame.y.clone(),
        u,
        g: node.frame.g.clone(),
        det_g: node.frame.det_g(),
        flags,
    }
}

fn check_base(prep: &Prepotential, base: &[Complex64]) -> Result<(), GeometryError> {
    if base.len() != prep.arity() {
        return Err(GeometryError::InvalidPlan(format!(
            "base point has {} coordinates, expected {}",
            base.len(),
            prep.arity()
        )));
    }
    SKPoint::new(prep, base)?.require_nondegenerate()
}

/// Realizes the immersion on a grid. `u` is integrated along a breadth-first
/// spanning tree of grid edges from the node nearest the base point; every
/// quadrature node on every edge is checked against the degenerate locus.
pub fn immerse(
    prep: &Prepotential,
    grid: &Grid,
    base: &[Complex64],
    screening: Screening,
) -> Result<Immersion, GeometryError> {
    check_base(prep, base)?;
    if grid.arity() != prep.arity() {
        return Err(GeometryError::InvalidPlan("grid arity does not match prepotential".into()));
    }
    let points: Vec<Vec<Complex64>> = (0..grid.len()).map(|i| grid.z(i)).collect();
    let nodes = evaluate_nodes(prep, &points, screening);

    let mut out = Immersion::default();
    for (i, n) in nodes.iter().enumerate() {
        if let Err(reason) = n {
            out.degenerate.push(i);
            log::warn!("grid node {i} skipped: {reason}");
        }
    }
    if !out.degenerate.is_empty() {
        out.warnings
            .push(format!("{} grid node(s) flagged degenerate and skipped", out.degenerate.len()));
    }

    let mut u: Vec<Option<(f64, u32)>> = vec![None; grid.len()];
    let usable = |i: usize| nodes[i].is_ok();

    // Root: nearest reachable node to the base.
    let base_xi = crate::kahler::z_to_chart(base);
    let mut order: Vec<usize> = (0..grid.len()).filter(|&i| usable(i)).collect();
    order.sort_by(|&a, &b| {
        let da = dist2(&grid.chart_point(a), &base_xi);
        let db = dist2(&grid.chart_point(b), &base_xi);
        da.total_cmp(&db).then(a.cmp(&b))
    });
    let mut root = None;
    for &i in &order {
        match potential_on_segment(prep, base, &points[i]) {
            Ok(val) => {
                root = Some((i, val));
                break;
            }
            Err(e) => log::debug!("base cannot reach node {i}: {e}"),
        }
    }

    let bfs = |start: usize, u0: f64, flag: u32, u: &mut Vec<Option<(f64, u32)>>| {
        u[start] = Some((u0, flag));
        let mut queue = VecDeque::from([start]);
        while let Some(cur) = queue.pop_front() {
            let (ucur, _) = u[cur].expect("visited");
            for nb in grid.neighbours(cur) {
                if u[nb].is_some() || !usable(nb) {
                    continue;
                }
                match potential_on_segment(prep, &points[cur], &points[nb]) {
                    Ok(du) => {
                        u[nb] = Some((ucur + du, flag));
                        queue.push_back(nb);
                    }
                    Err(e) => log::debug!("edge {cur}->{nb} rejected: {e}"),
                }
            }
        }
    };

    match root {
        Some((i, val)) => bfs(i, val, 0, &mut u),
        None => out
            .warnings
            .push("no grid node is reachable from the base point without crossing the degenerate locus".into()),
    }
    let mut sheets = 0;
    for i in 0..grid.len() {
        if usable(i) && u[i].is_none() {
            sheets += 1;
            bfs(i, 0.0, flags::SEPARATE_SHEET, &mut u);
        }
    }
    if sheets > 0 {
        out.warnings.push(format!(
            "{sheets} component(s) not reachable from the base; u normalized at their first node"
        ));
    }

    for (i, node) in nodes.iter().enumerate() {
        if let (Ok(node), Some((val, flag))) = (node, u[i]) {
            out.samples.push(sample(i, node, val, flag));
        }
    }
    Ok(out)
}

/// Realizes the immersion at arbitrary points, integrating `u` along the
/// straight segment from the base. Points whose segment meets the degenerate
/// locus are skipped with a warning.
pub fn immerse_points(
    prep: &Prepotential,
    points: &[Vec<Complex64>],
    base: &[Complex64],
    screening: Screening,
) -> Result<Immersion, GeometryError> {
    check_base(prep, base)?;
    let nodes = evaluate_nodes(prep, points, screening);
    let potentials: Vec<Option<Result<f64, GeometryError>>> = nodes
        .par_iter()
        .zip(points.par_iter())
        .map(|(n, z)| n.as_ref().ok().map(|_| potential_on_segment(prep, base, z)))
        .collect();
    let mut out = Immersion::default();
    let mut blocked = 0;
    for (i, (node, pot)) in nodes.iter().zip(potentials).enumerate() {
        match (node, pot) {
            (Ok(node), Some(Ok(u))) => out.samples.push(sample(i, node, u, 0)),
            (Ok(_), Some(Err(e))) => {
                blocked += 1;
                log::warn!("point {i}: no straight path from base: {e}");
            }
            _ => out.degenerate.push(i),
        }
    }
    if !out.degenerate.is_empty() {
        out.warnings
            .push(format!("{} point(s) flagged degenerate and skipped", out.degenerate.len()));
    }
    if blocked > 0 {
        out.warnings.push(format!(
            "{blocked} point(s) skipped: straight path from base crosses the degenerate locus"
        ));
    }
    Ok(out)
}

fn dist2(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_indexing() {
        let g = Grid::uniform(1, GridAxis::new(-1.0, 1.0, 3).unwrap(), GridAxis::new(0.0, 2.0, 4).unwrap());
        assert_eq!(g.len(), 12);
        assert_eq!(g.multi_index(5), vec![1, 1]);
        assert_eq!(g.flat_index(&[2, 3]), 11);
        assert_eq!(g.chart_point(11), vec![1.0, 2.0]);
        assert_eq!(g.neighbours(0), vec![4, 1]);
        assert_eq!(g.neighbours(5).len(), 4);
    }

    #[test]
    fn axis_validation() {
        assert!(GridAxis::new(0.0, 1.0, 1).is_err());
        assert!(GridAxis::new(1.0, 1.0, 3).is_err());
        assert!(Grid::new(vec![GridAxis::new(0.0, 1.0, 2).unwrap()]).is_err());
    }
}
