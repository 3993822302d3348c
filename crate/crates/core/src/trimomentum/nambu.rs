//! The standard 4-vector field `ξ` on `ℝ^{4m}`, the quaternary bracket it
//! induces, and the flows of its hamiltonian vector fields.

use std::fmt::Write as _;

use nalgebra::Matrix4;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exterior::MultiVector;

/// Default central-difference step.
pub const FD_STEP: f64 = 1e-5;

pub type ScalarField<'a> = &'a dyn Fn(&[f64]) -> f64;

/// Central-difference gradient.
pub fn gradient(f: ScalarField, x: &[f64], h: f64) -> Vec<f64> {
    let mut y = x.to_vec();
    (0..x.len())
        .map(|i| {
            y[i] = x[i] + h;
            let plus = f(&y);
            y[i] = x[i] - h;
            let minus = f(&y);
            y[i] = x[i];
            (plus - minus) / (2.0 * h)
        })
        .collect()
}

/// `ξ = (1/m) Σ_b ∂_{4b} ∧ ∂_{4b+1} ∧ ∂_{4b+2} ∧ ∂_{4b+3}`, the 4-vector with
/// `i_ξ ψ^m = ψ^{m−1}` for the standard `ψ`.
pub fn xi_standard(m: usize) -> Result<MultiVector> {
    if m == 0 {
        return Err(Error::Precondition("xi needs m >= 1".into()));
    }
    let mut xi = MultiVector::zeros(4 * m, 4)?;
    for b in 0..m {
        xi.set(&[4 * b, 4 * b + 1, 4 * b + 2, 4 * b + 3], 1.0 / m as f64);
    }
    Ok(xi)
}

fn block_matrix(rows: [&[f64]; 4], b: usize) -> Matrix4<f64> {
    Matrix4::from_fn(|r, c| rows[r][4 * b + c])
}

fn blocks_of(x: &[f64]) -> Result<usize> {
    if x.is_empty() || x.len() % 4 != 0 {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} is not in H^m",
            x.len()
        )));
    }
    Ok(x.len() / 4)
}

/// `{f₁, f₂, f₃, f₄}(x) = ⟨ξ, df₁ ∧ df₂ ∧ df₃ ∧ df₄⟩ = (1/m) Σ_b det J_b`, where
/// `J_b` is the 4×4 block of central-difference gradients.
pub fn quaternary_bracket(f: [ScalarField; 4], x: &[f64], h: f64) -> Result<f64> {
    if h <= 0.0 {
        return Err(Error::Precondition("step must be positive".into()));
    }
    let m = blocks_of(x)?;
    let g: Vec<Vec<f64>> = f.iter().map(|fi| gradient(*fi, x, h)).collect();
    let rows = [&g[0][..], &g[1][..], &g[2][..], &g[3][..]];
    Ok((0..m)
        .map(|b| block_matrix(rows, b).determinant())
        .sum::<f64>()
        / m as f64)
}

/// `Y = i(df₁ ∧ df₂ ∧ df₃) ξ`, so that `dg(Y) = {f₁, f₂, f₃, g}`.
pub fn hamiltonian_field(f: [ScalarField; 3], x: &[f64], h: f64) -> Result<Vec<f64>> {
    let m = blocks_of(x)?;
    let g: Vec<Vec<f64>> = f.iter().map(|fi| gradient(*fi, x, h)).collect();
    Ok(field_from_gradients([&g[0], &g[1], &g[2]], m))
}

fn field_from_gradients(g: [&[f64]; 3], m: usize) -> Vec<f64> {
    let mut y = vec![0.0; 4 * m];
    let mut e = [0.0; 4];
    for b in 0..m {
        for k in 0..4 {
            e[k] = 1.0;
            let mut row = vec![0.0; 4 * m];
            row[4 * b..4 * b + 4].copy_from_slice(&e);
            y[4 * b + k] = block_matrix([g[0], g[1], g[2], &row], b).determinant() / m as f64;
            e[k] = 0.0;
        }
    }
    y
}

/// Sampled solution of `ẋ = Y_{f₁,f₂,f₃}(x)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    /// `(f₁, f₂, f₃)` at every state
    pub conserved: Vec<[f64; 3]>,
}

impl Trajectory {
    /// Largest `|f_i(x_t) − f_i(x_0)|`, relative to `|f_i(x_0)|` when that is
    /// at least 1 and absolute otherwise.
    pub fn max_drift(&self) -> f64 {
        let first = self.conserved[0];
        self.conserved
            .iter()
            .flat_map(|c| (0..3).map(move |i| (c[i] - first[i]).abs() / first[i].abs().max(1.0)))
            .fold(0.0, f64::max)
    }

    pub fn to_csv(&self) -> String {
        let d = self.states[0].len();
        let mut out = String::from("t");
        for i in 1..=d {
            write!(out, ",x_{i}").unwrap();
        }
        out.push_str(",f_1,f_2,f_3\n");
        for ((t, x), c) in self.times.iter().zip(&self.states).zip(&self.conserved) {
            write!(out, "{t}").unwrap();
            for v in x.iter().chain(c) {
                write!(out, ",{v}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

/// Classical fourth-order Runge–Kutta with central-difference gradients.
pub fn nambu_flow(
    f: [ScalarField; 3],
    g0: &[f64],
    dt: f64,
    steps: usize,
    h: f64,
) -> Result<Trajectory> {
    if dt <= 0.0 || !dt.is_finite() {
        return Err(Error::Precondition("dt must be positive".into()));
    }
    blocks_of(g0)?;
    let eval = |x: &[f64]| [f[0](x), f[1](x), f[2](x)];
    let field = |x: &[f64]| hamiltonian_field(f, x, h);
    let axpy = |x: &[f64], k: &[f64], s: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + s * b).collect()
    };
    let mut x = g0.to_vec();
    let mut traj = Trajectory {
        times: vec![0.0],
        states: vec![x.clone()],
        conserved: vec![eval(&x)],
    };
    for step in 1..=steps {
        let k1 = field(&x)?;
        let k2 = field(&axpy(&x, &k1, dt / 2.0))?;
        let k3 = field(&axpy(&x, &k2, dt / 2.0))?;
        let k4 = field(&axpy(&x, &k3, dt))?;
        for i in 0..x.len() {
            x[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite(step));
        }
        traj.times.push(step as f64 * dt);
        traj.conserved.push(eval(&x));
        traj.states.push(x.clone());
    }
    Ok(traj)
}

/// Built-in hamiltonians on `ℝ^{4m}`; indices are 1-based.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Hamiltonian {
    Constant(f64),
    /// `x_i`
    Coordinate(usize),
    /// `Π x_i^{k_i}` over `(i, k_i)` pairs
    Monomial(Vec<(usize, i32)>),
    /// `|q_b|⁴` for quaternion block `b`
    Quartic(usize),
    /// `Σ c_j h_j`
    Sum(Vec<(f64, Hamiltonian)>),
}

impl Hamiltonian {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Constant(c) => *c,
            Self::Coordinate(i) => x[i - 1],
            Self::Monomial(f) => f.iter().map(|&(i, k)| x[i - 1].powi(k)).product(),
            Self::Quartic(b) => {
                let s: f64 = x[4 * (b - 1)..4 * b].iter().map(|v| v * v).sum();
                s * s
            }
            Self::Sum(terms) => terms.iter().map(|(c, h)| c * h.eval(x)).sum(),
        }
    }

    /// Checks every index against the dimension `d = 4m`.
    pub fn validate(&self, d: usize) -> Result<()> {
        let bad = |what: &str, i: usize| {
            Err(Error::Precondition(format!(
                "{what} {i} out of range for dimension {d}"
            )))
        };
        match self {
            Self::Constant(_) => Ok(()),
            Self::Coordinate(i) if *i == 0 || *i > d => bad("coordinate", *i),
            Self::Coordinate(_) => Ok(()),
            Self::Monomial(f) => match f.iter().find(|(i, _)| *i == 0 || *i > d) {
                Some((i, _)) => bad("coordinate", *i),
                None => Ok(()),
            },
            Self::Quartic(b) if *b == 0 || 4 * b > d => bad("block", *b),
            Self::Quartic(_) => Ok(()),
            Self::Sum(terms) => terms.iter().try_for_each(|(_, h)| h.validate(d)),
        }
    }
}

/// Input of a flow run: initial point on `ℍ^m` and three hamiltonians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FlowSpec {
    pub initial: Vec<f64>,
    pub hamiltonians: [Hamiltonian; 3],
}

impl FlowSpec {
    pub fn validate(&self) -> Result<()> {
        blocks_of(&self.initial)?;
        self.hamiltonians
            .iter()
            .try_for_each(|h| h.validate(self.initial.len()))
    }

    pub fn run(&self, dt: f64, steps: usize) -> Result<Trajectory> {
        self.validate()?;
        let [a, b, c] = &self.hamiltonians;
        let (fa, fb, fc) = (
            |x: &[f64]| a.eval(x),
            |x: &[f64]| b.eval(x),
            |x: &[f64]| c.eval(x),
        );
        nambu_flow([&fa, &fb, &fc], &self.initial, dt, steps, FD_STEP)
    }
}
