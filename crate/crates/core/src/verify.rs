//! Seeded verification suites with machine-readable reports.
//!
//! Every check records its measured value, the tolerance it was held to, and
//! the comparison direction, so a report is self-describing. Reports depend
//! only on the seed and tolerances.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use itertools::Itertools;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::{
    kernel_matrix, pairing, psi_standard, sigma_min, volume_form, AltForm, MultiVector,
};
use crate::orbit::{
    check_closed_ce, check_invariance, diag_moment, four_commutator, hp1_orbit_point,
    jacobi5_residual, orbit_form_as_altform, orbit_tangent_basis, psi_y, HermitianPoint,
};
use crate::qlinalg::{dieudonne_det, random_sp_n, study_det, HermitianQ, QMatrix};
use crate::quat::{ImQuaternion, Quaternion};
use crate::rng::{stream, Stream};
use crate::trimomentum::certify::{
    from_coords, horizontality_check, left_mult_generator, modified_psi, momentum_identity_check,
    mu_standard, quartic_difference, quartic_sum, sample_diagonal_level, sample_modified_level,
    sample_points,
};
use crate::trimomentum::grassmann::{
    basis_change, grassmann_coords, indicator, orbit_scan, spheroid_act, GrassmannPoint,
    Hypersimplex, SpheroidElement,
};
use crate::trimomentum::nambu::{quaternary_bracket, xi_standard, FlowSpec, ScalarField, FD_STEP};

/// Orbit spectra exercised by the orbit suite.
pub const ORBIT_SPECTRA: [&[f64]; 4] = [
    &[0.0, 1.0],
    &[1.0, -1.0],
    &[0.0, 0.0, 1.0],
    &[0.0, 1.0, 2.0],
];

const DEFAULT_TOLERANCES: &[(&str, f64)] = &[
    ("quat.norm", 1e-13),
    ("quat.conj", 4.0 * f64::EPSILON),
    ("quat.bracket", 1e-14),
    ("quat.exp_log", 1e-12),
    ("det.multiplicative", 1e-9),
    ("det.study", 1e-8),
    ("det.triangular", 1e-12),
    ("det.invariance", 1e-9),
    ("det.row_swap", 1e-12),
    ("ext.associativity", 1e-12),
    ("ext.commutativity", 1e-13),
    ("ext.adjunction", 1e-12),
    ("ext.power", 1e-13),
    ("ext.sigma_min", 1e-6),
    ("orbit.five_term", 1e-10),
    ("orbit.hermitian", 1e-12),
    ("orbit.antisymmetry", 1e-12),
    ("orbit.sigma_min", 1e-6),
    ("orbit.ce", 1e-9),
    ("orbit.invariance", 1e-9),
    ("grassmann.sum", 1e-11),
    ("grassmann.spheroid", 1e-11),
    ("grassmann.basis_change", 1e-10),
    ("grassmann.vertex", 0.0),
    ("scan.failures", 0.0),
    ("mu.invariance", 1e-13),
    ("momentum.identity", 1e-6),
    ("xi.identity", 1e-13),
    ("bracket.antisymmetry", 1e-9),
    ("flow.drift", 1e-6),
    ("horizontality", 1e-6),
    ("horizontality.control", 1e-2),
    ("hp1.anchor", 1e-12),
];

/// Named tolerances with overridable defaults.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Tolerances(BTreeMap<String, f64>);

impl Default for Tolerances {
    fn default() -> Self {
        Self(
            DEFAULT_TOLERANCES
                .iter()
                .map(|(k, v)| (k.to_string(), *v))
                .collect(),
        )
    }
}

impl Tolerances {
    pub fn get(&self, name: &str) -> f64 {
        self.0[name]
    }

    /// Rejects names that no check uses.
    pub fn set(&mut self, name: &str, value: f64) -> Result<()> {
        match self.0.get_mut(name) {
            Some(v) if value.is_finite() && value >= 0.0 => {
                *v = value;
                Ok(())
            }
            Some(_) => Err(Error::Precondition(format!(
                "tolerance {name} must be finite and >= 0"
            ))),
            None => Err(Error::Precondition(format!("unknown tolerance {name}"))),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Comparison {
    /// passes when `value ≤ tolerance`
    AtMost,
    /// passes when `value > tolerance`
    Above,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance_name: String,
    pub tolerance: f64,
    pub comparison: Comparison,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl SuiteReport {
    /// Largest measured value among `AtMost` checks.
    pub fn max_residual(&self) -> f64 {
        self.checks
            .iter()
            .filter(|c| c.comparison == Comparison::AtMost)
            .map(|c| c.value)
            .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub seed: u64,
    pub suites: Vec<SuiteReport>,
    /// `AtMost` maximum per suite
    pub max_residuals: BTreeMap<String, f64>,
    pub failing: Vec<String>,
    pub pass: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Quat,
    Qlinalg,
    Exterior,
    Orbit,
    Momentum,
    All,
}

impl Suite {
    pub const MODULES: [Suite; 5] = [
        Suite::Quat,
        Suite::Qlinalg,
        Suite::Exterior,
        Suite::Orbit,
        Suite::Momentum,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Quat => "quat",
            Self::Qlinalg => "qlinalg",
            Self::Exterior => "exterior",
            Self::Orbit => "orbit",
            Self::Momentum => "momentum",
            Self::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Self::Quat,
            Self::Qlinalg,
            Self::Exterior,
            Self::Orbit,
            Self::Momentum,
            Self::All,
        ]
        .into_iter()
        .find(|x| x.name() == s)
        .ok_or_else(|| Error::Precondition(format!("unknown suite {s}")))
    }
}

struct Recorder<'a> {
    tol: &'a Tolerances,
    checks: Vec<Check>,
}

impl Recorder<'_> {
    fn at_most(&mut self, name: impl Into<String>, tol: &str, value: f64) {
        self.push(name.into(), tol, value, Comparison::AtMost);
    }

    fn above(&mut self, name: impl Into<String>, tol: &str, value: f64) {
        self.push(name.into(), tol, value, Comparison::Above);
    }

    fn push(&mut self, name: String, tol: &str, value: f64, comparison: Comparison) {
        let tolerance = self.tol.get(tol);
        let pass = match comparison {
            Comparison::AtMost => value <= tolerance,
            Comparison::Above => value > tolerance,
        };
        self.checks.push(Check {
            name,
            value,
            tolerance_name: tol.to_string(),
            tolerance,
            comparison,
            pass,
        });
    }
}

/// Runs one suite, or every module suite for [`Suite::All`].
pub fn run(suite: Suite, seed: u64, tol: &Tolerances) -> Result<VerifyReport> {
    let suites = if suite == Suite::All {
        Suite::MODULES.to_vec()
    } else {
        vec![suite]
    };
    let reports = suites
        .into_iter()
        .map(|s| run_suite(s, seed, tol))
        .collect::<Result<Vec<_>>>()?;
    let failing = reports
        .iter()
        .flat_map(|r| r.checks.iter().filter(|c| !c.pass).map(|c| c.name.clone()))
        .collect_vec();
    Ok(VerifyReport {
        seed,
        max_residuals: reports
            .iter()
            .map(|r| (r.suite.to_string(), r.max_residual()))
            .collect(),
        pass: failing.is_empty(),
        failing,
        suites: reports,
    })
}

fn run_suite(suite: Suite, seed: u64, tol: &Tolerances) -> Result<SuiteReport> {
    let mut rec = Recorder {
        tol,
        checks: Vec::new(),
    };
    match suite {
        Suite::Quat => quat_suite(&mut rec, seed),
        Suite::Qlinalg => qlinalg_suite(&mut rec, seed)?,
        Suite::Exterior => exterior_suite(&mut rec, seed)?,
        Suite::Orbit => orbit_suite(&mut rec, seed)?,
        Suite::Momentum => momentum_suite(&mut rec, seed)?,
        Suite::All => unreachable!("expanded by run"),
    }
    Ok(SuiteReport {
        suite,
        pass: rec.checks.iter().all(|c| c.pass),
        checks: rec.checks,
    })
}

fn quat_suite(rec: &mut Recorder, seed: u64) {
    let mut rng = stream(seed, 100);
    let (mut norm, mut conj, mut bracket, mut explog) = (0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for _ in 0..1000 {
        let a = Quaternion::random_gaussian(&mut rng);
        let b = Quaternion::random_gaussian(&mut rng);
        let scale = a.norm() * b.norm();
        norm = norm.max(((a * b).norm() - scale).abs() / scale);
        conj = conj.max(((a * b).conj() - b.conj() * a.conj()).norm() / scale);
        let u = ImQuaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let v = ImQuaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let c = u.quaternion() * v.quaternion() - v.quaternion() * u.quaternion();
        let cross = u.cross(v);
        bracket = bracket
            .max(c.w.abs())
            .max((c.x - 2.0 * cross.x).abs())
            .max((c.y - 2.0 * cross.y).abs())
            .max((c.z - 2.0 * cross.z).abs());
        let dir = ImQuaternion::new(
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        let w = dir * (rng.gen_range(0.0..3.0) / dir.norm().max(1e-300));
        if let Ok(back) = w.exp().log() {
            let err = (back.x - w.x)
                .abs()
                .max((back.y - w.y).abs())
                .max((back.z - w.z).abs());
            explog = explog.max(err);
        } else {
            explog = f64::INFINITY;
        }
    }
    rec.at_most("quat.norm_multiplicative", "quat.norm", norm);
    rec.at_most("quat.conj_reverses_products", "quat.conj", conj);
    rec.at_most("quat.bracket_is_twice_cross", "quat.bracket", bracket);
    rec.at_most("quat.exp_log_roundtrip", "quat.exp_log", explog);
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn upper_triangular(n: usize, rng: &mut Stream) -> QMatrix {
    QMatrix::from_fn(n, n, |i, j| {
        if j >= i {
            Quaternion::random_gaussian(rng)
        } else {
            Quaternion::ZERO
        }
    })
}

fn qlinalg_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut rng = stream(seed, 200);
    let (mut mult, mut study, mut tri, mut inv, mut swap) =
        (0.0f64, 0.0f64, 0.0f64, 0.0f64, 0.0f64);
    for t in 0..200 {
        let n = 1 + t % 5;
        let a = QMatrix::random_gaussian(n, n, &mut rng);
        let b = QMatrix::random_gaussian(n, n, &mut rng);
        let (da, db) = (dieudonne_det(&a)?, dieudonne_det(&b)?);
        mult = mult.max(rel(dieudonne_det(&a.matmul(&b)?)?, da * db));
        study = study.max(rel(da * da, study_det(&a)?.powi(2)));
        let u = upper_triangular(n, &mut rng);
        let diag: f64 = (0..n).map(|i| u[(i, i)].norm()).product();
        tri = tri.max(rel(dieudonne_det(&u)?, diag));
        let g = random_sp_n(n, &mut rng);
        inv = inv.max(rel(dieudonne_det(&g.matrix().matmul(&a)?)?, da));
        if n > 1 {
            let mut s = a.clone();
            s.swap_rows(0, n - 1);
            swap = swap.max(rel(dieudonne_det(&s)?, da));
        }
    }
    rec.at_most("det.multiplicativity", "det.multiplicative", mult);
    rec.at_most("det.study_oracle", "det.study", study);
    rec.at_most("det.triangular_rule", "det.triangular", tri);
    rec.at_most("det.sp_invariance", "det.invariance", inv);
    rec.at_most("det.row_swap", "det.row_swap", swap);
    Ok(())
}

fn random_form(d: usize, k: usize, rng: &mut Stream) -> Result<AltForm> {
    let mut a = AltForm::zeros(d, k)?;
    a.coeffs_mut()
        .iter_mut()
        .for_each(|c| *c = rng.gen_range(-1.0..1.0));
    Ok(a)
}

fn random_multivector(d: usize, k: usize, rng: &mut Stream) -> Result<MultiVector> {
    let mut a = MultiVector::zeros(d, k)?;
    a.coeffs_mut()
        .iter_mut()
        .for_each(|c| *c = rng.gen_range(-1.0..1.0));
    Ok(a)
}

fn exterior_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut rng = stream(seed, 300);
    let (mut assoc, mut comm, mut adj) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..20 {
        let a = random_form(8, 2, &mut rng)?;
        let b = random_form(8, 3, &mut rng)?;
        let c = random_form(8, 2, &mut rng)?;
        let l = a.wedge(&b)?.wedge(&c)?;
        let r = a.wedge(&b.wedge(&c)?)?;
        assoc = assoc.max(l.max_abs_diff(&r)?);
        let sign = if (a.degree() * b.degree()) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        comm = comm.max(a.wedge(&b)?.max_abs_diff(&b.wedge(&a)?.scale(sign))?);
        let v = random_multivector(8, 1, &mut rng)?;
        let u = random_multivector(8, 2, &mut rng)?;
        let lhs = pairing(&u, &crate::exterior::interior(&v, &b)?)?;
        let rhs = pairing(&v.wedge(&u)?, &b)?;
        adj = adj.max((lhs - rhs).abs());
    }
    rec.at_most("ext.wedge_associativity", "ext.associativity", assoc);
    rec.at_most("ext.graded_commutativity", "ext.commutativity", comm);
    rec.at_most("ext.contraction_adjunction", "ext.adjunction", adj);
    for m in 1..=3 {
        let psi = psi_standard(m)?;
        let fact: f64 = (1..=m).product::<usize>() as f64;
        let err = psi
            .power(m)?
            .max_abs_diff(&volume_form(4 * m)?.scale(fact))?;
        rec.at_most(format!("ext.standard_power[m={m}]"), "ext.power", err);
        rec.above(
            format!("ext.standard_kernel_sigma_min[m={m}]"),
            "ext.sigma_min",
            sigma_min(&kernel_matrix(&psi)?),
        );
    }
    Ok(())
}

fn spectrum_label(s: &[f64]) -> String {
    format!("diag({})", s.iter().map(|v| v.to_string()).join(","))
}

fn orbit_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut rng = stream(seed, 400);
    let (mut five_term, mut herm, mut anti) = (0.0f64, 0.0f64, 0.0f64);
    for t in 0..200 {
        let n = 2 + t % 2;
        let a: Vec<HermitianQ> = (0..5).map(|_| HermitianQ::random(n, &mut rng)).collect();
        five_term = five_term.max(jacobi5_residual([&a[0], &a[1], &a[2], &a[3], &a[4]])?);
        let m: Vec<&QMatrix> = a.iter().map(|h| h.matrix()).collect();
        let c = four_commutator([m[0], m[1], m[2], m[3]])?;
        herm = herm.max(c.max_abs_diff(&c.adjoint())?);
        if t < 10 {
            let y = HermitianPoint::new(a[4].clone());
            let base = psi_y(&y, [m[0], m[1], m[2], m[3]])?;
            for p in (0..4).permutations(4) {
                let inv = p.iter().tuple_combinations().filter(|(x, y)| x > y).count();
                let s = if inv % 2 == 0 { 1.0 } else { -1.0 };
                let v = psi_y(&y, [m[p[0]], m[p[1]], m[p[2]], m[p[3]]])?;
                anti = anti.max((v - s * base).abs());
            }
        }
    }
    rec.at_most("orbit.five_term_residual", "orbit.five_term", five_term);
    rec.at_most("orbit.four_commutator_hermitian", "orbit.hermitian", herm);
    rec.at_most("orbit.psi_antisymmetry", "orbit.antisymmetry", anti);
    for (k, spec) in ORBIT_SPECTRA.iter().enumerate() {
        let label = spectrum_label(spec);
        let y = HermitianPoint::diag(spec);
        let form = orbit_form_as_altform(&orbit_tangent_basis(&y)?)?;
        rec.above(
            format!("orbit.sigma_min[{label}]"),
            "orbit.sigma_min",
            sigma_min(&kernel_matrix(&form)?),
        );
        rec.at_most(
            format!("orbit.ce_residual[{label}]"),
            "orbit.ce",
            check_closed_ce(&y)?,
        );
        let trials = if spec.len() == 2 { 100 } else { 50 };
        let disc = check_invariance(&y, trials, &mut stream(seed, 410 + k as u64))?;
        rec.at_most(
            format!("orbit.invariance[{label}]"),
            "orbit.invariance",
            disc,
        );
    }
    Ok(())
}

fn diagonal_generators(blocks: Vec<usize>) -> Vec<impl Fn(&[f64]) -> Vec<f64>> {
    [Quaternion::I, Quaternion::J, Quaternion::K]
        .into_iter()
        .map(|u| left_mult_generator(u, blocks.clone()))
        .collect()
}

fn momentum_suite(rec: &mut Recorder, seed: u64) -> Result<()> {
    grassmann_checks(rec, seed)?;
    dynamics_checks(rec, seed)?;
    certificate_checks(rec, seed)
}

fn grassmann_checks(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut rng = stream(seed, 500);
    let (mut sum, mut sph, mut bc) = (0.0f64, 0.0f64, 0.0f64);
    for t in 0..60 {
        let (n, p) = [(2, 1), (3, 1), (4, 2), (5, 2)][t % 4];
        let pi = GrassmannPoint::random(n, p, &mut rng);
        let x = grassmann_coords(&pi)?;
        sum = sum.max((x.iter().sum::<f64>() - p as f64).abs());
        let xa = grassmann_coords(&spheroid_act(&SpheroidElement::random(n, &mut rng), &pi)?)?;
        sph = sph.max(
            x.iter()
                .zip(&xa)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
        let g = QMatrix::random_gaussian(p, p, &mut rng);
        let xg = grassmann_coords(&basis_change(&pi, &g)?)?;
        bc = bc.max(
            x.iter()
                .zip(&xg)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max),
        );
    }
    rec.at_most("grassmann.sum_identity", "grassmann.sum", sum);
    rec.at_most("grassmann.spheroid_invariance", "grassmann.spheroid", sph);
    rec.at_most(
        "grassmann.basis_change_invariance",
        "grassmann.basis_change",
        bc,
    );
    let mut vertex = 0.0f64;
    for (n, p) in [(2, 1), (3, 1), (4, 2)] {
        for v in Hypersimplex::new(n, p)?.vertices() {
            let j: Vec<usize> = (0..n).filter(|&i| v[i] == 1).collect();
            let x = grassmann_coords(&GrassmannPoint::coordinate(n, &j)?)?;
            let ind = indicator(n, &j);
            vertex = vertex.max(
                x.iter()
                    .zip(&ind)
                    .map(|(a, &b)| (a - f64::from(b)).abs())
                    .fold(0.0, f64::max),
            );
        }
    }
    rec.at_most("grassmann.vertices_exact", "grassmann.vertex", vertex);
    for (k, (n, p)) in [(2, 1), (3, 1), (4, 2)].into_iter().enumerate() {
        let pi = GrassmannPoint::random(n, p, &mut stream(seed, 510 + k as u64));
        let r = orbit_scan(&pi, 1000, seed.wrapping_add(520 + k as u64))?;
        rec.at_most(
            format!("scan.containment_failures[n={n},p={p}]"),
            "scan.failures",
            r.containment_failures as f64,
        );
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut anchor = 0.0f64;
    for (a, b) in [(0.0, 1.0), (1.0, 0.0), (s, s)] {
        let (s2, s4) = (Quaternion::real(a), Quaternion::real(b));
        let m = diag_moment(&hp1_orbit_point(s2, s4)?);
        let pi = GrassmannPoint::new(QMatrix::from_rows(&[vec![s2], vec![s4]])?)?;
        let x = grassmann_coords(&pi)?;
        anchor = anchor.max(
            m.iter()
                .zip(&x)
                .map(|(u, v)| (u - v).abs())
                .fold(0.0, f64::max),
        );
    }
    rec.at_most("hp1.anchor_agreement", "hp1.anchor", anchor);
    Ok(())
}

fn dynamics_checks(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut xi_err = 0.0f64;
    for m in 1..=3 {
        let psi = psi_standard(m)?;
        let lhs = crate::exterior::interior(&xi_standard(m)?, &psi.power(m)?)?;
        xi_err = xi_err.max(lhs.max_abs_diff(&psi.power(m - 1)?)?);
    }
    rec.at_most("xi.contracts_powers", "xi.identity", xi_err);
    let mut rng = stream(seed, 600);
    let f1 = |x: &[f64]| x[0] * x[5] + x[2].sin();
    let f2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().powi(2);
    let f3 = |x: &[f64]| x[1] * x[3] * x[7] - x[4];
    let f4 = |x: &[f64]| (x[6] + x[0]).cos() + x[2] * x[5];
    let fs: [ScalarField; 4] = [&f1, &f2, &f3, &f4];
    let mut anti = 0.0f64;
    for _ in 0..5 {
        let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let base = quaternary_bracket(fs, &x, FD_STEP)?;
        for p in (0..4).permutations(4) {
            let inv = p.iter().tuple_combinations().filter(|(a, b)| a > b).count();
            let s = if inv % 2 == 0 { 1.0 } else { -1.0 };
            let v = quaternary_bracket([fs[p[0]], fs[p[1]], fs[p[2]], fs[p[3]]], &x, FD_STEP)?;
            anti = anti.max((v - s * base).abs());
        }
    }
    rec.at_most("bracket.antisymmetry", "bracket.antisymmetry", anti);
    let spec = default_flow_spec();
    let drift = spec.run(1e-3, 1000)?.max_drift();
    rec.at_most("flow.conservation_drift", "flow.drift", drift);
    Ok(())
}

/// The flow exercised by the momentum suite.
pub fn default_flow_spec() -> FlowSpec {
    serde_json::from_str(
        r#"{"initial": [0.3, -0.5, 0.7, 0.2, 0.9, 0.1, -0.4, 0.6],
            "hamiltonians": [
              {"sum": [[1.0, {"quartic": 1}], [0.5, {"quartic": 2}]]},
              {"monomial": [[1, 1], [6, 1]]},
              {"sum": [[1.0, {"coordinate": 3}], [-2.0, {"coordinate": 8}]]}]}"#,
    )
    .expect("valid built-in spec")
}

fn certificate_checks(rec: &mut Recorder, seed: u64) -> Result<()> {
    let mut rng = stream(seed, 700);
    let mut inv = 0.0f64;
    for _ in 0..1000 {
        let q: Vec<Quaternion> = (0..3)
            .map(|_| Quaternion::random_gaussian(&mut rng))
            .collect();
        let a = SpheroidElement::random(3, &mut rng);
        let before = mu_standard(&q);
        let after = mu_standard(&a.act_on_point(&q));
        for (x, y) in before.iter().zip(&after) {
            inv = inv.max((x - y).abs() / x.max(1.0));
        }
    }
    rec.at_most("mu.spheroid_invariance", "mu.invariance", inv);
    for m in 1..=2 {
        let psi = move |_: &[f64]| psi_standard(m);
        let pts = sample_points(m, 100, &mut stream(seed, 710 + m as u64));
        let mut worst = 0.0f64;
        for b in 0..m {
            let g = diagonal_generators(vec![b]);
            let mu = move |x: &[f64]| mu_standard(&from_coords(x))[b];
            worst = worst.max(momentum_identity_check(
                &mu,
                [&g[0], &g[1], &g[2]],
                &psi,
                &pts,
                FD_STEP,
            )?);
        }
        rec.at_most(
            format!("momentum.identity[H^{m}]"),
            "momentum.identity",
            worst,
        );
    }
    let g = diagonal_generators(vec![0, 1]);
    let gens: [&dyn Fn(&[f64]) -> Vec<f64>; 3] = [&g[0], &g[1], &g[2]];
    let (c1, c2) = (0.3, 1.0);
    let pts = sample_modified_level(c1, c2, 50, &mut stream(seed, 720))?;
    let psi = |x: &[f64]| modified_psi(x, FD_STEP);
    let levels: [ScalarField; 2] = [&quartic_difference, &quartic_sum];
    let r = horizontality_check(&psi, &levels, &[c1, c2], &gens, &pts, FD_STEP)?;
    rec.at_most("horizontality.modified_form", "horizontality", r);
    let pts = sample_diagonal_level(1.0, 50, &mut stream(seed, 721));
    let psi = |_: &[f64]| psi_standard(2);
    let levels: [ScalarField; 1] = [&quartic_sum];
    let r = horizontality_check(&psi, &levels, &[1.0], &gens, &pts, FD_STEP)?;
    rec.above("horizontality.negative_control", "horizontality.control", r);
    Ok(())
}
