//! `tetra`: runs verification suites and numerical experiments on
//! quaternionic matrices, orbit forms and tri-momentum maps.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use tetraplectic::qlinalg::{dieudonne_det, study_det};
use tetraplectic::s4::s4_volume;
use tetraplectic::trimomentum::{
    grassmann_coords, orbit_scan, FlowSpec, GrassmannPoint, Hypersimplex,
};
use tetraplectic::verify::{self, Suite, Tolerances};
use tetraplectic::QMatrix;

#[derive(Debug, Parser)]
#[command(name = "tetra", version, about)]
struct Cli {
    /// Seed for every random draw
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dieudonné determinant of a square matrix next to its complex-embedding value
    Det { file: PathBuf },
    /// Run a verification suite: quat, qlinalg, exterior, orbit, momentum or all
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
    /// Tri-momentum image of the plane spanned by the columns of an n×p matrix
    Mumap { file: PathBuf, p: usize },
    /// Sample the spheroid orbit and its closure and test hull containment
    OrbitScan {
        file: PathBuf,
        p: usize,
        #[arg(long, default_value_t = 1000)]
        samples: usize,
    },
    /// Integrate the quaternary flow of three built-in hamiltonians
    Flow {
        spec: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        dt: f64,
        #[arg(long, default_value_t = 1000)]
        steps: usize,
    },
    /// Product-quadrature volume of S⁴ in the affine chart
    S4Volume {
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: tetraplectic::Error| e.to_string())
}

#[derive(Debug)]
enum Failure {
    Check(String),
    Usage(String),
    Io(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Self::Check(_) => 1,
            Self::Usage(_) => 2,
            Self::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Self::Check(m) | Self::Usage(m) | Self::Io(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

/// Pulls `--tol.<name>=<v>` and `--tol.<name> <v>` out of the argument list.
fn split_tolerances(args: Vec<String>) -> Result<(Vec<String>, Vec<(String, f64)>), Failure> {
    let mut rest = Vec::with_capacity(args.len());
    let mut tols = Vec::new();
    let mut it = args.into_iter();
    while let Some(a) = it.next() {
        let Some(spec) = a.strip_prefix("--tol.") else {
            rest.push(a);
            continue;
        };
        let (name, value) = match spec.split_once('=') {
            Some((n, v)) => (n.to_string(), v.to_string()),
            None => {
                let v = it
                    .next()
                    .ok_or_else(|| usage(format!("--tol.{spec} needs a value")))?;
                (spec.to_string(), v)
            }
        };
        let value: f64 = value
            .parse()
            .map_err(|_| usage(format!("--tol.{name}: cannot parse {value:?} as a number")))?;
        tols.push((name, value));
    }
    Ok((rest, tols))
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn read_matrix(path: &Path) -> Result<QMatrix, Failure> {
    serde_json::from_str(&read_input(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn join(x: &[f64]) -> String {
    x.iter()
        .map(|v| v.to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

#[derive(Serialize)]
struct DetReport {
    dieudonne: f64,
    study: f64,
    relative_gap: f64,
}

fn cmd_det(cli: &Cli, file: &Path) -> Outcome {
    let a = read_matrix(file)?;
    let d = dieudonne_det(&a).map_err(usage)?;
    let s = study_det(&a).map_err(usage)?;
    let gap = if d == s {
        0.0
    } else {
        (d - s).abs() / d.abs().max(s.abs())
    };
    let text = match cli.format {
        Format::Json => json(&DetReport {
            dieudonne: d,
            study: s,
            relative_gap: gap,
        }),
        Format::Csv => format!("dieudonne,study,relative_gap\n{d:?},{s:?},{gap}\n"),
    };
    println!("{d:?}, {s:?}, gap {gap}");
    if cli.out.is_some() || cli.format == Format::Csv {
        emit(cli.out.as_deref(), &text)?;
    }
    Ok(())
}

fn cmd_verify(cli: &Cli, suite: Suite, tol: &Tolerances) -> Outcome {
    let report = verify::run(suite, cli.seed, tol).map_err(|e| Failure::Check(e.to_string()))?;
    let text = match cli.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut s = String::from("suite,check,value,tolerance_name,tolerance,pass\n");
            for r in &report.suites {
                for c in &r.checks {
                    writeln!(
                        s,
                        "{},{},{:e},{},{:e},{}",
                        r.suite, c.name, c.value, c.tolerance_name, c.tolerance, c.pass
                    )
                    .unwrap();
                }
            }
            s
        }
    };
    emit(cli.out.as_deref(), &text)?;
    if report.pass {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "failing checks: {}",
            report.failing.join(", ")
        )))
    }
}

fn load_plane(file: &Path, p: usize) -> Result<GrassmannPoint, Failure> {
    let m = read_matrix(file)?;
    if m.cols() != p {
        return Err(usage(format!(
            "matrix has {} columns, expected p = {p}",
            m.cols()
        )));
    }
    if p > m.rows() {
        return Err(usage(format!("p = {p} exceeds n = {}", m.rows())));
    }
    GrassmannPoint::new(m).map_err(|e| Failure::Check(e.to_string()))
}

#[derive(Serialize)]
struct MumapReport {
    n: usize,
    p: usize,
    x: Vec<f64>,
    sum: f64,
    tolerance: f64,
    in_hypersimplex: bool,
}

fn cmd_mumap(cli: &Cli, file: &Path, p: usize, tol: &Tolerances) -> Outcome {
    let pi = load_plane(file, p)?;
    let x = grassmann_coords(&pi).map_err(|e| Failure::Check(e.to_string()))?;
    let tolerance = tol.get("grassmann.sum");
    let z = Hypersimplex::new(pi.n(), p).map_err(usage)?;
    let report = MumapReport {
        n: pi.n(),
        p,
        sum: x.iter().sum(),
        in_hypersimplex: z.contains(&x, tolerance),
        x,
        tolerance,
    };
    println!("{}", join(&report.x));
    println!("sum {}", report.sum);
    println!("in_hypersimplex {}", report.in_hypersimplex);
    if let Some(out) = &cli.out {
        let text = match cli.format {
            Format::Json => json(&report),
            Format::Csv => {
                let cols: Vec<String> = (1..=report.n).map(|i| format!("x_{i}")).collect();
                let vals: Vec<String> = report.x.iter().map(|v| v.to_string()).collect();
                format!(
                    "{},sum,in_hypersimplex\n{},{},{}\n",
                    cols.join(","),
                    vals.join(","),
                    report.sum,
                    report.in_hypersimplex
                )
            }
        };
        emit(Some(out), &text)?;
    }
    if report.in_hypersimplex {
        Ok(())
    } else {
        Err(Failure::Check(
            "grassmann.sum: image lies outside the hypersimplex".into(),
        ))
    }
}

fn cmd_orbit_scan(cli: &Cli, file: &Path, p: usize, samples: usize) -> Outcome {
    let pi = load_plane(file, p)?;
    let report = orbit_scan(&pi, samples, cli.seed).map_err(|e| Failure::Check(e.to_string()))?;
    let text = match cli.format {
        Format::Csv => report.to_csv(),
        Format::Json => json(&report),
    };
    emit(cli.out.as_deref(), &text)?;
    eprintln!(
        "containment failures: {} of {} (tolerance {:e})",
        report.containment_failures, samples, report.tolerance
    );
    if report.containment_failures == 0 {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "scan.failures: {} samples outside the hull",
            report.containment_failures
        )))
    }
}

#[derive(Serialize)]
struct FlowReport<'a> {
    dt: f64,
    steps: usize,
    max_drift: f64,
    tolerance: f64,
    trajectory: &'a tetraplectic::trimomentum::Trajectory,
}

fn cmd_flow(cli: &Cli, spec: &Path, dt: f64, steps: usize, tol: &Tolerances) -> Outcome {
    let flow: FlowSpec = serde_json::from_str(&read_input(spec)?)
        .map_err(|e| usage(format!("{}: {e}", spec.display())))?;
    flow.validate().map_err(usage)?;
    if !(dt.is_finite() && dt > 0.0) {
        return Err(usage("dt must be positive and finite"));
    }
    let traj = flow
        .run(dt, steps)
        .map_err(|e| Failure::Check(e.to_string()))?;
    let drift = traj.max_drift();
    let tolerance = tol.get("flow.drift");
    let text = match cli.format {
        Format::Csv => traj.to_csv(),
        Format::Json => json(&FlowReport {
            dt,
            steps,
            max_drift: drift,
            tolerance,
            trajectory: &traj,
        }),
    };
    emit(cli.out.as_deref(), &text)?;
    eprintln!("max drift: {drift:e} (tolerance {tolerance:e})");
    if drift <= tolerance {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "flow.drift: {drift:e} > {tolerance:e}"
        )))
    }
}

fn cmd_s4_volume(cli: &Cli, grid: usize) -> Outcome {
    let v = s4_volume(grid).map_err(usage)?;
    let text = match cli.format {
        Format::Json => json(&v),
        Format::Csv => format!(
            "grid,radial,sphere,total\n{},{},{},{}\n",
            v.grid, v.radial, v.sphere, v.total
        ),
    };
    emit(cli.out.as_deref(), &text)?;
    if cli.out.is_some() {
        println!("{}", v.total);
    }
    Ok(())
}

fn run(args: Vec<String>) -> Outcome {
    let (args, overrides) = split_tolerances(args)?;
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return Err(Failure::Usage(String::new()));
        }
        Err(e) => {
            let _ = e.print();
            return Ok(());
        }
    };
    let mut tol = Tolerances::default();
    for (name, value) in &overrides {
        tol.set(name, *value).map_err(usage)?;
    }
    match &cli.command {
        Command::Det { file } => cmd_det(&cli, file),
        Command::Verify { suite } => cmd_verify(&cli, *suite, &tol),
        Command::Mumap { file, p } => cmd_mumap(&cli, file, *p, &tol),
        Command::OrbitScan { file, p, samples } => cmd_orbit_scan(&cli, file, *p, *samples),
        Command::Flow { spec, dt, steps } => cmd_flow(&cli, spec, *dt, *steps, &tol),
        Command::S4Volume { grid } => cmd_s4_volume(&cli, *grid),
    }
}

fn main() -> ExitCode {
    match run(std::env::args().collect()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message().is_empty() {
                eprintln!("tetra: {}", f.message());
            }
            ExitCode::from(f.code())
        }
    }
}
