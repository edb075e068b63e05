//! Reference prepotentials with boxes on which they are nondegenerate.

use crate::dsl::Prepotential;
use crate::sphere::{Grid, GridAxis};
use crate::GeometryError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BundledCase {
    pub name: &'static str,
    pub source: &'static str,
    pub arity: usize,
    /// Range of every `Re z_i`.
    pub x: (f64, f64),
    /// Range of every `Im z_i`.
    pub v: (f64, f64),
}

pub const BUNDLED: [BundledCase; 6] = [
    BundledCase {
        name: "flat",
        source: "(i/2)*z1^2",
        arity: 1,
        x: (-1.0, 1.0),
        v: (-1.0, 1.0),
    },
    BundledCase {
        name: "flat_sheared",
        source: "((1+i)/2)*z1^2",
        arity: 1,
        x: (-1.0, 1.0),
        v: (-1.0, 1.0),
    },
    BundledCase {
        name: "cubic",
        source: "z1^3/6",
        arity: 1,
        x: (-1.0, 1.0),
        v: (0.5, 2.0),
    },
    BundledCase {
        name: "exponential",
        source: "exp(z1) + (i/2)*z1^2",
        arity: 1,
        x: (-1.0, 1.0),
        v: (0.1, 1.0),
    },
    BundledCase {
        name: "coupled_quadratic",
        source: "z1*z2 + (i/2)*(z1^2 + z2^2)",
        arity: 2,
        x: (-1.0, 1.0),
        v: (-1.0, 1.0),
    },
    BundledCase {
        name: "cubic_pair",
        source: "(i/6)*(z1^3 + z2^3) + (i/2)*(z1^2 + z2^2)",
        arity: 2,
        x: (0.0, 1.0),
        v: (-1.0, 1.0),
    },
];

impl BundledCase {
    pub fn by_name(name: &str) -> Option<&'static BundledCase> {
        BUNDLED.iter().find(|c| c.name == name)
    }

    pub fn prepotential(&self) -> Result<Prepotential, GeometryError> {
        Ok(Prepotential::parse(self.source, self.arity)?)
    }

    /// Uniform grid with `n` nodes per real axis.
    pub fn grid(&self, n: usize) -> Result<Grid, GeometryError> {
        let mut axes = Vec::with_capacity(2 * self.arity);
        for _ in 0..self.arity {
            axes.push(GridAxis::new(self.x.0, self.x.1, n)?);
        }
        for _ in 0..self.arity {
            axes.push(GridAxis::new(self.v.0, self.v.1, n)?);
        }
        Grid::new(axes)
    }
}
