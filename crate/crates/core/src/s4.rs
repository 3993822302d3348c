//! The invariant volume density `|q|³ / (1 + |q|⁴)² d|q| Ω` of `S⁴ = ℍP¹` in
//! the affine chart `ℍ`, with `Ω` the round volume form of the unit sphere
//! `S³ ⊂ ℍ`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Radial factor `r³ / (1 + r⁴)²`.
pub fn s4_density(r: f64) -> f64 {
    r.powi(3) / (1.0 + r.powi(4)).powi(2)
}

/// Midpoint rule for the radial integral over `[0, ∞)` after `r = t / (1 − t)`.
pub fn radial_integral(grid: usize) -> f64 {
    let dt = 1.0 / grid as f64;
    (0..grid)
        .map(|i| {
            let t = (i as f64 + 0.5) * dt;
            let r = t / (1.0 - t);
            s4_density(r) / (1.0 - t).powi(2) * dt
        })
        .sum()
}

/// Midpoint rule for `∫_{cutoff}^∞ r³/(1+r⁴)² dr` after `r = cutoff / s`.
pub fn radial_tail(cutoff: f64, grid: usize) -> f64 {
    let ds = 1.0 / grid as f64;
    (0..grid)
        .map(|i| {
            let s = (i as f64 + 0.5) * ds;
            s4_density(cutoff / s) * cutoff / (s * s) * ds
        })
        .sum()
}

/// `∫ Ω` over `S³` in hyperspherical angles: `sin²α sin β dα dβ dγ` on a
/// `grid × grid` midpoint product in `(α, β)`; the integrand does not
/// depend on `γ`, which contributes `2π`.
pub fn sphere_volume(grid: usize) -> f64 {
    let h = std::f64::consts::PI / grid as f64;
    let mid = |i: usize| (i as f64 + 0.5) * h;
    let a: f64 = (0..grid).map(|i| mid(i).sin().powi(2) * h).sum();
    let b: f64 = (0..grid).map(|i| mid(i).sin() * h).sum();
    2.0 * std::f64::consts::PI * a * b
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct S4Volume {
    pub grid: usize,
    pub radial: f64,
    pub sphere: f64,
    pub total: f64,
}

/// Product-quadrature integral of the density over `ℍ` with `grid` nodes per axis.
pub fn s4_volume(grid: usize) -> Result<S4Volume> {
    if grid < 10 {
        return Err(Error::Precondition("grid must be at least 10".into()));
    }
    let radial = radial_integral(grid);
    let sphere = sphere_volume(grid);
    Ok(S4Volume {
        grid,
        radial,
        sphere,
        total: radial * sphere,
    })
}
