//! Pointwise certificates for tri-momentum maps on `ℍⁿ ≅ ℝ^{4n}`: the
//! momentum identity `d(μ, δ) = i_δ̃ ψ` and horizontality of `ψ` along level
//! sets. Quaternion `b` occupies coordinates `4b..4b+4` as `(w, x, y, z)`.

use nalgebra::{DMatrix, SymmetricEigen};
use rand::Rng;

use crate::error::{Error, Result};
use crate::exterior::{interior, AltForm, MultiVector};
use crate::quat::{Quaternion, UnitQuaternion};
use crate::trimomentum::nambu::{gradient, ScalarField};

pub type VectorField<'a> = &'a dyn Fn(&[f64]) -> Vec<f64>;
pub type FormField<'a> = &'a dyn Fn(&[f64]) -> Result<AltForm>;

/// The constant `c` in `i_{iq ∧ jq ∧ kq} ψ_std = c · d(|q|⁴)` once `i ∧ j ∧ k`
/// is identified with 1. See [`calibrate_momentum_normalization`].
pub const MOMENTUM_NORMALIZATION: f64 = -0.25;

/// `(|q₁|⁴, …, |qₙ|⁴)`.
pub fn mu_standard(q: &[Quaternion]) -> Vec<f64> {
    q.iter().map(|q| q.norm_sqr().powi(2)).collect()
}

/// `|q₁|⁴ + |q₂|⁴`.
pub fn mu_diagonal(q1: Quaternion, q2: Quaternion) -> f64 {
    q1.norm_sqr().powi(2) + q2.norm_sqr().powi(2)
}

pub fn to_coords(q: &[Quaternion]) -> Vec<f64> {
    q.iter().flat_map(|q| q.to_array()).collect()
}

pub fn from_coords(x: &[f64]) -> Vec<Quaternion> {
    x.chunks_exact(4)
        .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
        .collect()
}

/// Fundamental field of left multiplication by `exp(t u)` acting on the
/// listed blocks: `q_b ↦ u q_b` there, zero elsewhere.
pub fn left_mult_generator(u: Quaternion, blocks: Vec<usize>) -> impl Fn(&[f64]) -> Vec<f64> {
    move |x: &[f64]| {
        let q = from_coords(x);
        let mut v = vec![0.0; x.len()];
        for &b in &blocks {
            v[4 * b..4 * b + 4].copy_from_slice(&(u * q[b]).to_array());
        }
        v
    }
}

/// `i_{g₁ ∧ g₂ ∧ g₃} ψ(x)`.
fn contract_triple(generators: &[VectorField; 3], psi: &AltForm, x: &[f64]) -> Result<AltForm> {
    let mut blade = MultiVector::scalar(x.len(), 1.0)?;
    for g in generators {
        blade = blade.wedge(&MultiVector::from_components(&g(x))?)?;
    }
    interior(&blade, psi)
}

/// Worst componentwise `|i_δ̃ ψ(x) − c · dμ(x)|` over `points`, where
/// `δ̃ = g₁ ∧ g₂ ∧ g₃`, `dμ` is a central difference with step `h`, and `c` is
/// [`MOMENTUM_NORMALIZATION`].
pub fn momentum_identity_check(
    mu: ScalarField,
    generators: [VectorField; 3],
    psi: FormField,
    points: &[Vec<f64>],
    h: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for x in points {
        let lhs = contract_triple(&generators, &psi(x)?, x)?;
        let dmu = gradient(mu, x, h);
        for (a, b) in lhs.coeffs().iter().zip(&dmu) {
            worst = worst.max((a - MOMENTUM_NORMALIZATION * b).abs());
        }
    }
    Ok(worst)
}

/// Least-squares `c` with `i_{iq ∧ jq ∧ kq} ψ_std ≈ c · d(|q|⁴)` on `ℍ¹`.
pub fn calibrate_momentum_normalization(points: &[Vec<f64>], h: f64) -> Result<f64> {
    let gens: Vec<_> = [Quaternion::I, Quaternion::J, Quaternion::K]
        .into_iter()
        .map(|u| left_mult_generator(u, vec![0]))
        .collect();
    let gens: [VectorField; 3] = [&gens[0], &gens[1], &gens[2]];
    let psi = crate::exterior::psi_standard(1)?;
    let mu = |x: &[f64]| mu_standard(&from_coords(x))[0];
    let (mut num, mut den) = (0.0, 0.0);
    for x in points {
        let lhs = contract_triple(&gens, &psi, x)?;
        let dmu = gradient(&mu, x, h);
        num += lhs
            .coeffs()
            .iter()
            .zip(&dmu)
            .map(|(a, b)| a * b)
            .sum::<f64>();
        den += dmu.iter().map(|b| b * b).sum::<f64>();
    }
    if den == 0.0 {
        return Err(Error::Precondition("calibration points have dμ = 0".into()));
    }
    Ok(num / den)
}

/// Orthonormal basis of `ker dL(x)` for the level functions `L`, from the
/// eigenvectors of `JᵀJ` with eigenvalue below `1e−10 · λ_max`.
pub fn level_tangent_basis(level_fns: &[ScalarField], x: &[f64], h: f64) -> Vec<Vec<f64>> {
    let d = x.len();
    let rows: Vec<Vec<f64>> = level_fns.iter().map(|f| gradient(*f, x, h)).collect();
    let j = DMatrix::from_fn(rows.len(), d, |r, c| rows[r][c]);
    let eig = SymmetricEigen::new(j.transpose() * &j);
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    order
        .into_iter()
        .filter(|&i| eig.eigenvalues[i] <= 1e-10 * top.max(f64::MIN_POSITIVE))
        .map(|i| eig.eigenvectors.column(i).iter().copied().collect())
        .collect()
}

/// Worst `|(i_g ψ)(t_a, t_b, t_c)|` over generators `g`, points, and triples
/// of an orthonormal basis of the tangent space of
/// `{L_1 = targets[0], L_2 = targets[1], …}`.
pub fn horizontality_check(
    psi: FormField,
    level_fns: &[ScalarField],
    targets: &[f64],
    generators: &[VectorField],
    points: &[Vec<f64>],
    h: f64,
) -> Result<f64> {
    if level_fns.len() != targets.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} level functions with {} targets",
            level_fns.len(),
            targets.len()
        )));
    }
    let mut worst = 0.0f64;
    for x in points {
        for (f, t) in level_fns.iter().zip(targets) {
            let off = (f(x) - t).abs();
            if off > 1e-8 {
                return Err(Error::Precondition(format!(
                    "sample point is {off:e} off its level set"
                )));
            }
        }
        let tangent = level_tangent_basis(level_fns, x, h);
        let form = psi(x)?;
        for g in generators {
            let beta = interior(&MultiVector::from_components(&g(x))?, &form)?;
            for (a, b, c) in itertools::Itertools::tuple_combinations(0..tangent.len()) {
                let v = beta.evaluate(&[&tangent[a], &tangent[b], &tangent[c]])?;
                worst = worst.max(v.abs());
            }
        }
    }
    Ok(worst)
}

fn block_angles(x: &[f64], b: usize) -> (f64, f64, f64) {
    let q = Quaternion::new(x[4 * b], x[4 * b + 1], x[4 * b + 2], x[4 * b + 3]);
    UnitQuaternion::new(q)
        .map(|u| u.angles_unchecked())
        .unwrap_or((0.0, 0.0, 0.0))
}

/// `|q₁|⁴ − |q₂|⁴` on `ℍ²`.
pub fn quartic_difference(x: &[f64]) -> f64 {
    let q = from_coords(x);
    q[0].norm_sqr().powi(2) - q[1].norm_sqr().powi(2)
}

/// `|q₁|⁴ + |q₂|⁴` on `ℍ²`.
pub fn quartic_sum(x: &[f64]) -> f64 {
    let q = from_coords(x);
    mu_diagonal(q[0], q[1])
}

/// `d(|q₁|⁴ − |q₂|⁴) ∧ d(α₁ − α₂) ∧ d(β₁ − β₂) ∧ d(γ₁ − γ₂)` on `ℍ²`, with
/// `(α_b, β_b, γ_b)` the hyperspherical angles of `q_b/|q_b|` and all
/// differentials by central differences. Valid away from the chart's
/// singular locus and the cut of `γ`.
pub fn modified_psi(x: &[f64], h: f64) -> Result<AltForm> {
    if x.len() != 8 {
        return Err(Error::DimensionMismatch(format!(
            "point of length {} in H^2",
            x.len()
        )));
    }
    let da = |x: &[f64]| block_angles(x, 0).0 - block_angles(x, 1).0;
    let db = |x: &[f64]| block_angles(x, 0).1 - block_angles(x, 1).1;
    let dc = |x: &[f64]| block_angles(x, 0).2 - block_angles(x, 1).2;
    let fs: [ScalarField; 4] = [&quartic_difference, &da, &db, &dc];
    let mut psi = AltForm::scalar(8, 1.0)?;
    for f in fs {
        psi = psi.wedge(&AltForm::from_components(&gradient(f, x, h))?)?;
    }
    Ok(psi)
}

/// Margin kept from the chart's singular locus (`sin α sin β`) and from the
/// cut `|γ| = π` when sampling.
pub const CHART_MARGIN: f64 = 0.1;

fn well_charted(u: UnitQuaternion) -> bool {
    let q = u.quaternion();
    let (_, _, gamma) = u.angles_unchecked();
    q.y.hypot(q.z) > CHART_MARGIN && gamma.abs() < std::f64::consts::PI - CHART_MARGIN
}

fn charted_unit<R: Rng + ?Sized>(rng: &mut R) -> UnitQuaternion {
    loop {
        let u = UnitQuaternion::random(rng);
        if well_charted(u) {
            return u;
        }
    }
}

/// Points `(r₁u₁, r₂u₂)` with `|q₁|⁴ − |q₂|⁴ = c1`, `|q₁|⁴ + |q₂|⁴ = c2`
/// (so `|c1| < c2`) and both `u_b` away from chart singularities.
pub fn sample_modified_level<R: Rng + ?Sized>(
    c1: f64,
    c2: f64,
    count: usize,
    rng: &mut R,
) -> Result<Vec<Vec<f64>>> {
    if c1.abs() >= c2 {
        return Err(Error::Precondition("need |c1| < c2".into()));
    }
    let r1 = ((c2 + c1) / 2.0).powf(0.25);
    let r2 = ((c2 - c1) / 2.0).powf(0.25);
    Ok((0..count)
        .map(|_| {
            let q1 = charted_unit(rng).quaternion() * r1;
            let q2 = charted_unit(rng).quaternion() * r2;
            to_coords(&[q1, q2])
        })
        .collect())
}

/// Points with `|q₁|⁴ + |q₂|⁴ = c`: a uniformly random direction on `S⁷`
/// rescaled onto the level.
pub fn sample_diagonal_level<R: Rng + ?Sized>(c: f64, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            let q = [
                Quaternion::random_gaussian(rng),
                Quaternion::random_gaussian(rng),
            ];
            let s = (c / mu_diagonal(q[0], q[1])).powf(0.25);
            to_coords(&[q[0] * s, q[1] * s])
        })
        .collect()
}

/// Uniform-ish points of `ℝ^{4m}` with gaussian coordinates.
pub fn sample_points<R: Rng + ?Sized>(m: usize, count: usize, rng: &mut R) -> Vec<Vec<f64>> {
    (0..count)
        .map(|_| {
            to_coords(
                &(0..m)
                    .map(|_| Quaternion::random_gaussian(rng))
                    .collect::<Vec<_>>(),
            )
        })
        .collect()
}
