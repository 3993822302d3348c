//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines always reach the log; exits non-zero if any fails.

use std::time::{Duration, Instant};

use itertools::Itertools;
use rand::Rng;

use tetraplectic::exterior::{interior, kernel_matrix, psi_standard, sigma_min};
use tetraplectic::orbit::{
    check_closed_ce, check_invariance, jacobi5_residual, orbit_form_as_altform,
    orbit_tangent_basis, HermitianPoint,
};
use tetraplectic::qlinalg::{dieudonne_det, study_det};
use tetraplectic::rng::stream;
use tetraplectic::trimomentum::certify::{
    calibrate_momentum_normalization, from_coords, horizontality_check, left_mult_generator,
    modified_psi, momentum_identity_check, mu_standard, quartic_difference, quartic_sum,
    sample_diagonal_level, sample_modified_level, sample_points, MOMENTUM_NORMALIZATION,
};
use tetraplectic::trimomentum::grassmann::{
    grassmann_coords, indicator, orbit_scan, GrassmannPoint, Hypersimplex, SpheroidElement,
};
use tetraplectic::trimomentum::nambu::{quaternary_bracket, xi_standard, ScalarField, FD_STEP};
use tetraplectic::verify::{self, default_flow_spec, Suite, Tolerances};
use tetraplectic::{HermitianQ, QMatrix, Quaternion};

struct Outcome {
    pass: bool,
    detail: String,
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn dieudonne() -> Outcome {
    let mut rng = stream(1, 0);
    let (mut mult, mut study, mut block) = (0.0f64, 0.0f64, 0.0f64);
    for t in 0..500 {
        let n = 1 + t % 5;
        let a = QMatrix::random_gaussian(n, n, &mut rng);
        let b = QMatrix::random_gaussian(n, n, &mut rng);
        let (da, db) = (dieudonne_det(&a).unwrap(), dieudonne_det(&b).unwrap());
        mult = mult.max(rel(dieudonne_det(&a.matmul(&b).unwrap()).unwrap(), da * db));
        study = study.max(rel(da * da, study_det(&a).unwrap().powi(2)));
        if n > 1 {
            let k = 1 + t % (n - 1);
            let top = QMatrix::random_gaussian(k, k, &mut rng);
            let bottom = QMatrix::random_gaussian(n - k, n - k, &mut rng);
            let corner = QMatrix::random_gaussian(k, n - k, &mut rng);
            let m = QMatrix::from_fn(n, n, |i, j| match (i < k, j < k) {
                (true, true) => top[(i, j)],
                (true, false) => corner[(i, j - k)],
                (false, true) => Quaternion::ZERO,
                (false, false) => bottom[(i - k, j - k)],
            });
            let expected = dieudonne_det(&top).unwrap() * dieudonne_det(&bottom).unwrap();
            block = block.max(rel(dieudonne_det(&m).unwrap(), expected));
        }
    }
    Outcome {
        pass: mult <= 1e-9 && study <= 1e-8 && block <= 1e-12,
        detail: format!("multiplicativity {mult:.2e} (<= 1e-9), D^2 vs |det chi| {study:.2e} (<= 1e-8), block rule {block:.2e} (<= 1e-12)"),
    }
}

fn five_term_identity() -> Outcome {
    let mut rng = stream(2, 0);
    let mut worst = 0.0f64;
    for t in 0..200 {
        let n = 2 + t % 2;
        let a: Vec<HermitianQ> = (0..5).map(|_| HermitianQ::random(n, &mut rng)).collect();
        worst = worst.max(jacobi5_residual([&a[0], &a[1], &a[2], &a[3], &a[4]]).unwrap());
    }
    Outcome {
        pass: worst <= 1e-10,
        detail: format!("max residual {worst:.2e} over 200 quintuples (<= 1e-10)"),
    }
}

fn orbit_certificate() -> Outcome {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, spec) in verify::ORBIT_SPECTRA.iter().enumerate() {
        let y = HermitianPoint::diag(spec);
        let form = orbit_form_as_altform(&orbit_tangent_basis(&y).unwrap()).unwrap();
        let smin = sigma_min(&kernel_matrix(&form).unwrap());
        let ce = check_closed_ce(&y).unwrap();
        let trials = if spec.len() == 2 { 100 } else { 50 };
        let inv = check_invariance(&y, trials, &mut stream(3, k as u64)).unwrap();
        let ok = smin > 1e-6 && ce <= 1e-9 && inv <= 1e-9;
        pass &= ok;
        parts.push(format!(
            "{spec:?}: sigma_min {smin:.3} ce {ce:.2e} inv {inv:.2e}{}",
            if ok { "" } else { " FAILED" }
        ));
    }
    Outcome {
        pass,
        detail: format!(
            "{} (sigma_min > 1e-6, ce <= 1e-9, inv <= 1e-9)",
            parts.join("; ")
        ),
    }
}

fn polytope() -> Outcome {
    let mut rng = stream(4, 0);
    let mut sum = 0.0f64;
    let mut outside = 0;
    for t in 0..100 {
        let (n, p) = [(2, 1), (3, 1), (4, 2), (5, 2)][t % 4];
        let x = grassmann_coords(&GrassmannPoint::random(n, p, &mut rng)).unwrap();
        sum = sum.max((x.iter().sum::<f64>() - p as f64).abs());
        if !Hypersimplex::new(n, p).unwrap().contains(&x, 1e-11) {
            outside += 1;
        }
    }
    let mut vertex = 0.0f64;
    for (n, p) in [(2, 1), (3, 1), (4, 2)] {
        for j in (0..n).combinations(p) {
            let x = grassmann_coords(&GrassmannPoint::coordinate(n, &j).unwrap()).unwrap();
            let v: Vec<f64> = indicator(n, &j).into_iter().map(f64::from).collect();
            vertex = vertex.max(max_abs_diff(&x, &v));
        }
    }
    let mut failures = Vec::new();
    for (k, (n, p)) in [(2, 1), (3, 1), (4, 2)].into_iter().enumerate() {
        let pi = GrassmannPoint::random(n, p, &mut stream(4, 10 + k as u64));
        failures.push(
            orbit_scan(&pi, 1000, 40 + k as u64)
                .unwrap()
                .containment_failures,
        );
    }
    Outcome {
        pass: sum <= 1e-11 && outside == 0 && vertex == 0.0 && failures.iter().all(|&f| f == 0),
        detail: format!("sum identity {sum:.2e} (<= 1e-11), outside Z {outside}, vertex deviation {vertex:e}, scan failures {failures:?}"),
    }
}

fn diagonal_generators(blocks: Vec<usize>) -> Vec<impl Fn(&[f64]) -> Vec<f64>> {
    [Quaternion::I, Quaternion::J, Quaternion::K]
        .into_iter()
        .map(|u| left_mult_generator(u, blocks.clone()))
        .collect()
}

fn momentum() -> Outcome {
    let mut rng = stream(5, 0);
    let mut inv = 0.0f64;
    for _ in 0..1000 {
        let q: Vec<Quaternion> = (0..3)
            .map(|_| Quaternion::random_gaussian(&mut rng))
            .collect();
        let a = SpheroidElement::random(3, &mut rng);
        let (before, after) = (mu_standard(&q), mu_standard(&a.act_on_point(&q)));
        for (x, y) in before.iter().zip(&after) {
            inv = inv.max((x - y).abs() / x.max(1.0));
        }
    }
    let c = calibrate_momentum_normalization(&sample_points(1, 20, &mut stream(5, 1)), FD_STEP)
        .unwrap();
    let mut identity = Vec::new();
    for m in 1..=2 {
        let psi = move |_: &[f64]| psi_standard(m);
        let pts = sample_points(m, 100, &mut stream(5, 10 + m as u64));
        let mut worst = 0.0f64;
        for b in 0..m {
            let g = diagonal_generators(vec![b]);
            let mu = move |x: &[f64]| mu_standard(&from_coords(x))[b];
            worst = worst.max(
                momentum_identity_check(&mu, [&g[0], &g[1], &g[2]], &psi, &pts, FD_STEP).unwrap(),
            );
        }
        identity.push(worst);
    }
    Outcome {
        pass: inv <= 1e-13 && (c - MOMENTUM_NORMALIZATION).abs() <= 1e-9 && identity.iter().all(|&r| r <= 1e-6),
        detail: format!(
            "spheroid invariance {inv:.2e} (<= 1e-13), calibrated c = {c:.12} (stored {MOMENTUM_NORMALIZATION}), identity residual H^1 {:.2e} H^2 {:.2e} (<= 1e-6)",
            identity[0], identity[1]
        ),
    }
}

fn xi_and_bracket() -> Outcome {
    let mut xi = 0.0f64;
    for m in 1..=3 {
        let psi = psi_standard(m).unwrap();
        let lhs = interior(&xi_standard(m).unwrap(), &psi.power(m).unwrap()).unwrap();
        xi = xi.max(lhs.max_abs_diff(&psi.power(m - 1).unwrap()).unwrap());
    }
    let f1 = |x: &[f64]| x[0] * x[5] + x[2].sin();
    let f2 = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().powi(2);
    let f3 = |x: &[f64]| x[1] * x[3] * x[7] - x[4];
    let f4 = |x: &[f64]| (x[6] + x[0]).cos() + x[2] * x[5];
    let fs: [ScalarField; 4] = [&f1, &f2, &f3, &f4];
    let mut rng = stream(6, 0);
    let mut anti = 0.0f64;
    for _ in 0..5 {
        let x: Vec<f64> = (0..8).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let base = quaternary_bracket(fs, &x, FD_STEP).unwrap();
        for p in (0..4).permutations(4) {
            let inversions = p.iter().tuple_combinations().filter(|(a, b)| a > b).count();
            let s = if inversions % 2 == 0 { 1.0 } else { -1.0 };
            let v =
                quaternary_bracket([fs[p[0]], fs[p[1]], fs[p[2]], fs[p[3]]], &x, FD_STEP).unwrap();
            anti = anti.max((v - s * base).abs());
        }
    }
    let drift = default_flow_spec().run(1e-3, 1000).unwrap().max_drift();
    Outcome {
        pass: xi <= 1e-13 && anti <= 1e-9 && drift <= 1e-6,
        detail: format!("xi identity {xi:.2e} (<= 1e-13), bracket antisymmetry {anti:.2e} (<= 1e-9), flow drift {drift:.2e} (<= 1e-6)"),
    }
}

fn horizontality() -> Outcome {
    let g = diagonal_generators(vec![0, 1]);
    let gens: [&dyn Fn(&[f64]) -> Vec<f64>; 3] = [&g[0], &g[1], &g[2]];
    let pts = sample_modified_level(0.3, 1.0, 50, &mut stream(7, 0)).unwrap();
    let psi = |x: &[f64]| modified_psi(x, FD_STEP);
    let levels: [ScalarField; 2] = [&quartic_difference, &quartic_sum];
    let r = horizontality_check(&psi, &levels, &[0.3, 1.0], &gens, &pts, FD_STEP).unwrap();
    let pts = sample_diagonal_level(1.0, 50, &mut stream(7, 1));
    let std = |_: &[f64]| psi_standard(2);
    let levels: [ScalarField; 1] = [&quartic_sum];
    let control = horizontality_check(&std, &levels, &[1.0], &gens, &pts, FD_STEP).unwrap();
    Outcome {
        pass: r <= 1e-6 && control > 1e-2,
        detail: format!(
            "modified form residual {r:.2e} (<= 1e-6), negative control {control:.3} (> 1e-2)"
        ),
    }
}

fn determinism() -> Outcome {
    let tol = Tolerances::default();
    let a = serde_json::to_string_pretty(&verify::run(Suite::All, 2024, &tol).unwrap()).unwrap();
    let b = serde_json::to_string_pretty(&verify::run(Suite::All, 2024, &tol).unwrap()).unwrap();
    Outcome {
        pass: a == b,
        detail: format!(
            "two `verify all` reports, {} bytes each, identical: {}",
            a.len(),
            a == b
        ),
    }
}

fn main() {
    let criteria: [(&str, Option<Duration>, fn() -> Outcome); 8] = [
        (
            "Dieudonne determinant correctness",
            Some(Duration::from_secs(5)),
            dieudonne,
        ),
        (
            "five-term four-commutator identity",
            Some(Duration::from_secs(5)),
            five_term_identity,
        ),
        (
            "orbit form non-degenerate, closed, invariant",
            Some(Duration::from_secs(60)),
            orbit_certificate,
        ),
        (
            "Grassmannian momentum polytopes",
            Some(Duration::from_secs(30)),
            polytope,
        ),
        (
            "tri-momentum invariance and identity",
            Some(Duration::from_secs(10)),
            momentum,
        ),
        (
            "xi field, quaternary bracket, Nambu flow",
            Some(Duration::from_secs(10)),
            xi_and_bracket,
        ),
        (
            "horizontality of the modified form",
            Some(Duration::from_secs(10)),
            horizontality,
        ),
        ("verify report determinism", None, determinism),
    ];
    let mut failed = Vec::new();
    for (i, (name, budget, run)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let elapsed = start.elapsed();
        let in_time = budget.map_or(true, |b| elapsed <= b);
        let pass = out.pass && in_time;
        println!(
            "criterion {} [{}] {name}: {}; runtime {:.2} s{}",
            i + 1,
            if pass { "PASS" } else { "FAIL" },
            out.detail,
            elapsed.as_secs_f64(),
            match budget {
                Some(b) if in_time => format!(" (budget {} s)", b.as_secs()),
                Some(b) => format!(" (budget {} s, exceeded)", b.as_secs()),
                None => String::new(),
            }
        );
        if !pass {
            failed.push(i + 1);
        }
    }
    if failed.is_empty() {
        println!("acceptance: all 8 criteria pass");
    } else {
        println!("acceptance: failing criteria {failed:?}");
        std::process::exit(1);
    }
}
