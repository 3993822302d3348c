//! Momentum coordinates on quaternionic Grassmannians and their polytopes.

use std::fmt::Write as _;

use itertools::Itertools;
use minilp::{ComparisonOp, OptimizationDirection, Problem};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::qlinalg::{dieudonne_det, qr_gram_schmidt, QMatrix};
use crate::quat::{Quaternion, UnitQuaternion};
use crate::rng::stream;

/// Refuse planes whose largest `D⁴` of a maximal minor falls below this.
pub const MIN_MINOR_D4: f64 = 1e-40;
/// A minor contributes a hull vertex when `D(M(J)) > VERTEX_TOL · max_J D(M(J))`.
pub const VERTEX_TOL: f64 = 1e-10;
/// Default tolerance for polytope membership.
pub const CONTAINMENT_TOL: f64 = 1e-9;

/// A quaternionic `p`-plane in `ℍⁿ`, stored as an `n × p` matrix of rank `p`
/// whose columns span the plane (right-module convention).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrassmannPoint {
    m: QMatrix,
}

impl GrassmannPoint {
    pub fn new(m: QMatrix) -> Result<Self> {
        if m.cols() > m.rows() {
            return Err(Error::DimensionMismatch(format!(
                "a {}-plane in H^{}",
                m.cols(),
                m.rows()
            )));
        }
        let rank = qr_gram_schmidt(&m).rank;
        if rank < m.cols() {
            return Err(Error::RankDeficient {
                rank,
                expected: m.cols(),
            });
        }
        Ok(Self { m })
    }

    /// Span of the coordinate vectors `e_j`, `j ∈ indices` (0-based).
    pub fn coordinate(n: usize, indices: &[usize]) -> Result<Self> {
        let mut m = QMatrix::zeros(n, indices.len());
        for (c, &j) in indices.iter().enumerate() {
            if j >= n {
                return Err(Error::BadSubset(format!("index {j} >= {n}")));
            }
            m[(j, c)] = Quaternion::ONE;
        }
        Self::new(m)
    }

    pub fn random<R: Rng + ?Sized>(n: usize, p: usize, rng: &mut R) -> Self {
        loop {
            if let Ok(g) = Self::new(QMatrix::random_gaussian(n, p, rng)) {
                return g;
            }
        }
    }

    pub fn matrix(&self) -> &QMatrix {
        &self.m
    }

    pub fn n(&self) -> usize {
        self.m.rows()
    }

    pub fn p(&self) -> usize {
        self.m.cols()
    }

    /// `D(M(J))` for every `p`-subset `J` of rows, in lexicographic order.
    pub fn minors(&self) -> Result<Vec<(Vec<usize>, f64)>> {
        (0..self.n())
            .combinations(self.p())
            .map(|j| {
                let d = dieudonne_det(&self.m.submatrix(&j)?)?;
                Ok((j, d))
            })
            .collect()
    }

    /// Same plane with orthonormal columns.
    pub fn orthonormalized(&self) -> Result<Self> {
        Self::new(qr_gram_schmidt(&self.m).q)
    }
}

/// `x_i = Σ_{J ∋ i} D⁴(M(J)) / Σ_J D⁴(M(J))`.
pub fn grassmann_coords(pi: &GrassmannPoint) -> Result<Vec<f64>> {
    let minors = pi.minors()?;
    let d4: Vec<f64> = minors.iter().map(|(_, d)| d.powi(4)).collect();
    let best = d4.iter().copied().fold(0.0, f64::max);
    if best < MIN_MINOR_D4 {
        return Err(Error::DegeneratePlane);
    }
    let total: f64 = d4.iter().sum();
    let mut x = vec![0.0; pi.n()];
    for ((j, _), w) in minors.iter().zip(&d4) {
        for &i in j {
            x[i] += w;
        }
    }
    x.iter_mut().for_each(|v| *v /= total);
    Ok(x)
}

/// An element `(a₁, …, aₙ)` of the spheroid `Sp(1)ⁿ`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpheroidElement(pub Vec<UnitQuaternion>);

impl SpheroidElement {
    pub fn identity(n: usize) -> Self {
        Self(vec![UnitQuaternion::IDENTITY; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| UnitQuaternion::random(rng)).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Left multiplication `q_i ↦ a_i q_i` on a point of `ℍⁿ`.
    pub fn act_on_point(&self, q: &[Quaternion]) -> Vec<Quaternion> {
        self.0
            .iter()
            .zip(q)
            .map(|(a, q)| a.quaternion() * *q)
            .collect()
    }
}

/// Row `i` of `M` left-multiplied by `a_i`.
pub fn spheroid_act(a: &SpheroidElement, pi: &GrassmannPoint) -> Result<GrassmannPoint> {
    if a.len() != pi.n() {
        return Err(Error::DimensionMismatch(format!(
            "spheroid of rank {} on H^{}",
            a.len(),
            pi.n()
        )));
    }
    let mut m = pi.m.clone();
    for (i, ai) in a.0.iter().enumerate() {
        m.scale_row_left(i, ai.quaternion());
    }
    GrassmannPoint::new(m)
}

/// Change of basis `M ↦ M g` for invertible `g`.
pub fn basis_change(pi: &GrassmannPoint, g: &QMatrix) -> Result<GrassmannPoint> {
    if g.rows() != pi.p() || g.cols() != pi.p() {
        return Err(Error::DimensionMismatch(format!(
            "basis change of size {}x{} for a {}-plane",
            g.rows(),
            g.cols(),
            pi.p()
        )));
    }
    if dieudonne_det(g)? == 0.0 {
        return Err(Error::Singular);
    }
    GrassmannPoint::new(pi.m.matmul(g)?)
}

/// `Z^n_p = {0 ≤ x_i ≤ 1, Σ x_i = p}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hypersimplex {
    pub n: usize,
    pub p: usize,
}

impl Hypersimplex {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if p > n {
            return Err(Error::Precondition(format!(
                "level {p} above dimension {n}"
            )));
        }
        Ok(Self { n, p })
    }

    /// Vectors of the wrong length are never contained.
    pub fn contains(&self, x: &[f64], tol: f64) -> bool {
        x.len() == self.n
            && x.iter().all(|&v| (-tol..=1.0 + tol).contains(&v))
            && (x.iter().sum::<f64>() - self.p as f64).abs() <= tol
    }

    pub fn vertices(&self) -> Vec<Vec<u8>> {
        (0..self.n)
            .combinations(self.p)
            .map(|j| indicator(self.n, &j))
            .collect()
    }
}

pub fn indicator(n: usize, j: &[usize]) -> Vec<u8> {
    let mut v = vec![0; n];
    j.iter().for_each(|&i| v[i] = 1);
    v
}

/// Whether `x ∈ conv(vertices)`: minimizes the `ℓ¹` slack of
/// `Σ λ_v v + s⁺ − s⁻ = x`, `Σ λ_v = 1`, `λ, s± ≥ 0`, and accepts when the
/// optimum is at most `tol`. Solver failures count as "not contained".
pub fn matroid_hull_contains(vertices: &[Vec<u8>], x: &[f64], tol: f64) -> bool {
    if vertices.is_empty() || vertices.iter().any(|v| v.len() != x.len()) {
        return false;
    }
    let mut lp = Problem::new(OptimizationDirection::Minimize);
    let lambda: Vec<_> = vertices
        .iter()
        .map(|_| lp.add_var(0.0, (0.0, f64::INFINITY)))
        .collect();
    for (i, &xi) in x.iter().enumerate() {
        let plus = lp.add_var(1.0, (0.0, f64::INFINITY));
        let minus = lp.add_var(1.0, (0.0, f64::INFINITY));
        let mut row: Vec<_> = vertices
            .iter()
            .zip(&lambda)
            .filter(|(v, _)| v[i] != 0)
            .map(|(v, &l)| (l, f64::from(v[i])))
            .collect();
        row.push((plus, 1.0));
        row.push((minus, -1.0));
        lp.add_constraint(row, ComparisonOp::Eq, xi);
    }
    lp.add_constraint(lambda.iter().map(|&l| (l, 1.0)), ComparisonOp::Eq, 1.0);
    match lp.solve() {
        Ok(sol) => sol.objective() <= tol,
        Err(_) => false,
    }
}

/// Indicators of the subsets `J` with non-vanishing minor.
pub fn matroid_vertices(pi: &GrassmannPoint) -> Result<Vec<Vec<u8>>> {
    let minors = pi.minors()?;
    let best = minors.iter().map(|(_, d)| *d).fold(0.0, f64::max);
    Ok(minors
        .iter()
        .filter(|(_, d)| *d > VERTEX_TOL * best)
        .map(|(j, _)| indicator(pi.n(), j))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SampleKind {
    Spheroid,
    Closure,
}

impl SampleKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Spheroid => "spheroid",
            Self::Closure => "closure",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumSample {
    pub sample_id: usize,
    pub kind: SampleKind,
    pub x: Vec<f64>,
    pub in_hypersimplex: bool,
    pub in_matroid_hull: bool,
}

/// Images of sampled orbit points with their containment verdicts.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MomentumReport {
    pub n: usize,
    pub p: usize,
    pub tolerance: f64,
    pub samples: Vec<MomentumSample>,
    pub containment_failures: usize,
    pub hull_vertices: Vec<Vec<u8>>,
}

impl MomentumReport {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("sample_id,kind");
        for i in 1..=self.n {
            write!(out, ",x_{i}").unwrap();
        }
        out.push_str(",in_hypersimplex,in_matroid_hull\n");
        for s in &self.samples {
            write!(out, "{},{}", s.sample_id, s.kind.as_str()).unwrap();
            for v in &s.x {
                write!(out, ",{v}").unwrap();
            }
            writeln!(out, ",{},{}", s.in_hypersimplex, s.in_matroid_hull).unwrap();
        }
        out
    }
}

/// A point on the boundary strata of the `(ℍ*)ⁿ`-orbit closure: rows scaled
/// by `t_i ∈ [0, 1]` (some exactly 0) and unit quaternions, then
/// re-orthonormalized. Resamples when the rank drops.
fn closure_sample<R: Rng + ?Sized>(pi: &GrassmannPoint, rng: &mut R) -> Result<GrassmannPoint> {
    loop {
        let a = SpheroidElement::random(pi.n(), rng);
        let mut m = pi.m.clone();
        for (i, ai) in a.0.iter().enumerate() {
            let t = if rng.gen_bool(0.25) {
                0.0
            } else {
                rng.gen::<f64>().powi(3)
            };
            m.scale_row_left(i, ai.quaternion() * t);
        }
        if let Ok(g) = GrassmannPoint::new(m) {
            if let Ok(g) = g.orthonormalized() {
                if grassmann_coords(&g).is_ok() {
                    return Ok(g);
                }
            }
        }
    }
}

/// Samples alternate between spheroid translates (even ids) and closure
/// degenerations (odd ids); sample `i` draws from stream `i` of `seed`.
pub fn orbit_scan(pi: &GrassmannPoint, samples: usize, seed: u64) -> Result<MomentumReport> {
    let z = Hypersimplex::new(pi.n(), pi.p())?;
    let hull_vertices = matroid_vertices(pi)?;
    let mut out = Vec::with_capacity(samples);
    for id in 0..samples {
        let mut rng = stream(seed, id as u64);
        let (kind, point) = if id % 2 == 0 {
            let a = SpheroidElement::random(pi.n(), &mut rng);
            (SampleKind::Spheroid, spheroid_act(&a, pi)?)
        } else {
            (SampleKind::Closure, closure_sample(pi, &mut rng)?)
        };
        let x = grassmann_coords(&point)?;
        out.push(MomentumSample {
            sample_id: id,
            kind,
            in_hypersimplex: z.contains(&x, CONTAINMENT_TOL),
            in_matroid_hull: matroid_hull_contains(&hull_vertices, &x, CONTAINMENT_TOL),
            x,
        });
    }
    let containment_failures = out
        .iter()
        .filter(|s| !(s.in_hypersimplex && s.in_matroid_hull))
        .count();
    Ok(MomentumReport {
        n: pi.n(),
        p: pi.p(),
        tolerance: CONTAINMENT_TOL,
        samples: out,
        containment_failures,
        hull_vertices,
    })
}
