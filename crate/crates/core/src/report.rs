//! Named residual maxima over a sample set.

use std::collections::BTreeMap;

/// Every residual certified over a sample plan. Declaration order is report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ResidualKind {
    Lagrangian,
    Conjugacy,
    NablaOmega,
    DNablaJ,
    Nijenhuis,
    TorsionNabla,
    CurvatureNabla,
    TorsionNablaJ,
    CurvatureNablaJ,
    Shape,
    ShapeLambda,
    MongeAmpere,
    MongeAmpereFd,
    HessianConsistency,
    ConstancyDetG,
    ConstancyOmega,
    ConstancyVolume,
}

/// Default tolerance for residuals computed in closed form.
pub const CLOSED_FORM_TOLERANCE: f64 = 1e-9;
/// Default tolerance for residuals that go through finite differences.
pub const FD_TOLERANCE: f64 = 1e-5;

impl ResidualKind {
    pub const ALL: [ResidualKind; 17] = [
        ResidualKind::Lagrangian,
        ResidualKind::Conjugacy,
        ResidualKind::NablaOmega,
        ResidualKind::DNablaJ,
        ResidualKind::Nijenhuis,
        ResidualKind::TorsionNabla,
        ResidualKind::CurvatureNabla,
        ResidualKind::TorsionNablaJ,
        ResidualKind::CurvatureNablaJ,
        ResidualKind::Shape,
        ResidualKind::ShapeLambda,
        ResidualKind::MongeAmpere,
        ResidualKind::MongeAmpereFd,
        ResidualKind::HessianConsistency,
        ResidualKind::ConstancyDetG,
        ResidualKind::ConstancyOmega,
        ResidualKind::ConstancyVolume,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ResidualKind::Lagrangian => "lagrangian",
            ResidualKind::Conjugacy => "conjugacy",
            ResidualKind::NablaOmega => "nabla_omega",
            ResidualKind::DNablaJ => "d_nabla_J",
            ResidualKind::Nijenhuis => "nijenhuis",
            ResidualKind::TorsionNabla => "torsion_nabla",
            ResidualKind::CurvatureNabla => "curvature_nabla",
            ResidualKind::TorsionNablaJ => "torsion_nablaJ",
            ResidualKind::CurvatureNablaJ => "curvature_nablaJ",
            ResidualKind::Shape => "shape",
            ResidualKind::ShapeLambda => "shape_lambda",
            ResidualKind::MongeAmpere => "monge_ampere",
            ResidualKind::MongeAmpereFd => "monge_ampere_fd",
            ResidualKind::HessianConsistency => "hessian_consistency",
            ResidualKind::ConstancyDetG => "constancy_detG",
            ResidualKind::ConstancyOmega => "constancy_omega",
            ResidualKind::ConstancyVolume => "constancy_volume",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }

    /// True when the residual involves a finite-difference derivative.
    pub fn uses_finite_differences(self) -> bool {
        !matches!(
            self,
            ResidualKind::Lagrangian
                | ResidualKind::TorsionNabla
                | ResidualKind::TorsionNablaJ
                | ResidualKind::MongeAmpere
                | ResidualKind::ConstancyDetG
                | ResidualKind::ConstancyOmega
                | ResidualKind::ConstancyVolume
        )
    }

    pub fn default_tolerance(self) -> f64 {
        if self.uses_finite_differences() {
            FD_TOLERANCE
        } else {
            CLOSED_FORM_TOLERANCE
        }
    }
}

impl std::fmt::Display for ResidualKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tolerances(BTreeMap<ResidualKind, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances(ResidualKind::ALL.into_iter().map(|k| (k, k.default_tolerance())).collect())
    }
}

impl Tolerances {
    pub fn get(&self, kind: ResidualKind) -> f64 {
        self.0[&kind]
    }

    pub fn set(&mut self, kind: ResidualKind, tol: f64) {
        self.0.insert(kind, tol);
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Tolerances(self.0.iter().map(|(k, v)| (*k, v * factor)).collect())
    }
}

/// Max-reduction of residuals; merging is order-independent.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    maxima: BTreeMap<ResidualKind, f64>,
    pub samples: usize,
    pub tolerances: Tolerances,
}

impl Default for ResidualReport {
    fn default() -> Self {
        ResidualReport::new(Tolerances::default())
    }
}

impl ResidualReport {
    pub fn new(tolerances: Tolerances) -> Self {
        ResidualReport {
            maxima: BTreeMap::new(),
            samples: 0,
            tolerances,
        }
    }

    /// Records a residual; non-finite values are stored as `f64::MAX` so the
    /// entry stays finite and fails any tolerance.
    pub fn record(&mut self, kind: ResidualKind, value: f64) {
        let v = if value.is_finite() { value.abs() } else { f64::MAX };
        let slot = self.maxima.entry(kind).or_insert(0.0);
        *slot = slot.max(v);
    }

    pub fn merge(mut self, other: &ResidualReport) -> Self {
        for (k, v) in &other.maxima {
            self.record(*k, *v);
        }
        self.samples += other.samples;
        self
    }

    pub fn get(&self, kind: ResidualKind) -> Option<f64> {
        self.maxima.get(&kind).copied()
    }

    pub fn passes(&self, kind: ResidualKind) -> Option<bool> {
        self.get(kind).map(|v| v <= self.tolerances.get(kind))
    }

    pub fn all_pass(&self) -> bool {
        self.maxima.keys().all(|k| self.passes(*k) == Some(true))
    }

    /// `(kind, max, tolerance, pass)` in report order.
    pub fn entries(&self) -> Vec<(ResidualKind, f64, f64, bool)> {
        self.maxima
            .iter()
            .map(|(k, v)| {
                let tol = self.tolerances.get(*k);
                (*k, *v, tol, *v <= tol)
            })
            .collect()
    }
}
