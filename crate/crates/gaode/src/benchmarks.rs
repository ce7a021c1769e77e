//! The six continuous test functions, with seeded rotation construction,
//! search boxes, and known optima. All functions are minimized, with
//! optimum value 0 at the origin (all-ones for Rosenbrock).

use std::f64::consts::{E, PI};

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::error::{GaodeError, Result};
use crate::rng::{derive_seed, Stream};

/// Function selector token.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FunctionKind {
    Sphere,
    Ellipsoid,
    RotEllipsoid,
    Rosenbrock,
    Ackley,
    Rastrigin,
}

impl FunctionKind {
    pub const ALL: [FunctionKind; 6] = [
        FunctionKind::Sphere,
        FunctionKind::Ellipsoid,
        FunctionKind::RotEllipsoid,
        FunctionKind::Rosenbrock,
        FunctionKind::Ackley,
        FunctionKind::Rastrigin,
    ];

    pub fn from_token(token: &str) -> Result<Self> {
        match token {
            "sphere" => Ok(FunctionKind::Sphere),
            "ellipsoid" => Ok(FunctionKind::Ellipsoid),
            "rot-ellipsoid" => Ok(FunctionKind::RotEllipsoid),
            "rosenbrock" => Ok(FunctionKind::Rosenbrock),
            "ackley" => Ok(FunctionKind::Ackley),
            "rastrigin" => Ok(FunctionKind::Rastrigin),
            other => Err(GaodeError::UnknownFunction(other.to_string())),
        }
    }

    pub fn token(self) -> &'static str {
        match self {
            FunctionKind::Sphere => "sphere",
            FunctionKind::Ellipsoid => "ellipsoid",
            FunctionKind::RotEllipsoid => "rot-ellipsoid",
            FunctionKind::Rosenbrock => "rosenbrock",
            FunctionKind::Ackley => "ackley",
            FunctionKind::Rastrigin => "rastrigin",
        }
    }

    /// Conventional search box for this function.
    fn box_bounds(self) -> (f64, f64) {
        match self {
            FunctionKind::Sphere | FunctionKind::Ellipsoid | FunctionKind::RotEllipsoid => {
                (-5.0, 5.0)
            }
            FunctionKind::Rosenbrock => (-5.0, 10.0),
            FunctionKind::Ackley => (-32.0, 32.0),
            FunctionKind::Rastrigin => (-5.12, 5.12),
        }
    }
}

/// An immutable problem instance: function, box, optimum, and (for the
/// rotated ellipsoid) a fixed orthogonal rotation.
#[derive(Clone, Debug)]
pub struct Problem {
    pub kind: FunctionKind,
    pub dim: usize,
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    pub x_star: Vec<f64>,
    rotation: Option<Vec<f64>>,
}

impl Problem {
    /// Build a problem instance. The rotation, when present, is fixed by
    /// `(kind, dim, instance_seed)` so that all runs of one experiment cell
    /// share a single instance.
    pub fn new(kind: FunctionKind, dim: usize, instance_seed: u64) -> Result<Self> {
        if dim < 2 {
            return Err(GaodeError::DimensionTooSmall(dim));
        }
        let (lo, hi) = kind.box_bounds();
        let x_star = match kind {
            FunctionKind::Rosenbrock => vec![1.0; dim],
            _ => vec![0.0; dim],
        };
        let rotation = match kind {
            FunctionKind::RotEllipsoid => Some(make_rotation(
                dim,
                derive_seed(instance_seed, kind as u64 + 101, dim as u64),
            )),
            _ => None,
        };
        Ok(Problem {
            kind,
            dim,
            lower: vec![lo; dim],
            upper: vec![hi; dim],
            x_star,
            rotation,
        })
    }

    pub fn f_star(&self) -> f64 {
        0.0
    }

    /// Objective value at `x`.
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        assert_eq!(x.len(), self.dim, "dimension mismatch");
        match self.kind {
            FunctionKind::Sphere => sphere(x),
            FunctionKind::Ellipsoid => ellipsoid(x),
            FunctionKind::RotEllipsoid => {
                let r = self.rotation.as_ref().expect("rotation missing");
                let z = apply_rotation(r, x);
                ellipsoid(&z)
            }
            FunctionKind::Rosenbrock => rosenbrock(x),
            FunctionKind::Ackley => ackley(x),
            FunctionKind::Rastrigin => rastrigin(x),
        }
    }

    /// Row-major rotation matrix, for tests and metadata.
    pub fn rotation(&self) -> Option<&[f64]> {
        self.rotation.as_deref()
    }
}

fn sphere(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

fn ellipsoid(x: &[f64]) -> f64 {
    let d = x.len();
    x.iter()
        .enumerate()
        .map(|(i, v)| 10f64.powf(6.0 * i as f64 / (d - 1) as f64) * v * v)
        .sum()
}

fn rosenbrock(x: &[f64]) -> f64 {
    x.windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            100.0 * (b - a * a).powi(2) + (1.0 - a).powi(2)
        })
        .sum()
}

fn ackley(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    let sum_sq: f64 = x.iter().map(|v| v * v).sum();
    let sum_cos: f64 = x.iter().map(|v| (2.0 * PI * v).cos()).sum();
    -20.0 * (-0.2 * (sum_sq / d).sqrt()).exp() - (sum_cos / d).exp() + 20.0 + E
}

fn rastrigin(x: &[f64]) -> f64 {
    let d = x.len() as f64;
    10.0 * d
        + x.iter()
            .map(|v| v * v - 10.0 * (2.0 * PI * v).cos())
            .sum::<f64>()
}

/// Row-major `dim x dim` orthogonal matrix: Gram-Schmidt on a seeded
/// standard-normal matrix. Deterministic per `(dim, seed)`.
pub fn make_rotation(dim: usize, seed: u64) -> Vec<f64> {
    let mut rng = Stream::seed_from_u64(seed);
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(dim);
    while rows.len() < dim {
        let mut row: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng)).collect();
        for prev in &rows {
            let dot: f64 = row.iter().zip(prev).map(|(a, b)| a * b).sum();
            for (r, p) in row.iter_mut().zip(prev) {
                *r -= dot * p;
            }
        }
        let norm = row.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm < 1e-8 {
            // Degenerate draw; take a fresh row.
            continue;
        }
        for r in &mut row {
            *r /= norm;
        }
        rows.push(row);
    }
    rows.into_iter().flatten().collect()
}

fn apply_rotation(r: &[f64], x: &[f64]) -> Vec<f64> {
    let d = x.len();
    (0..d)
        .map(|i| (0..d).map(|j| r[i * d + j] * x[j]).sum())
        .collect()
}

fn standard_normal(rng: &mut Stream) -> f64 {
    // Box-Muller; 1 - u keeps the log argument in (0, 1].
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (2.0 * PI * u2).cos()
}
