use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ladder_transform::diffops::failing_minors;
use ladder_transform::display::{format_fock, format_section};
use ladder_transform::error::Error;
use ladder_transform::fock::{fock_inner, FockPoly};
use ladder_transform::group::{omega_eval, phi_sigma_eval};
use ladder_transform::index::MultiIndex;
use ladder_transform::inversion::{invert, pairing};
use ladder_transform::json::{fock_from_json, fock_to_json, group_from_json, section_from_json, section_to_json};
use ladder_transform::moments::{quad_oracle, Budget, Domain};
use ladder_transform::operators::{l_op, p_op};
use ladder_transform::scalar::format_exact;
use ladder_transform::section::DiskSection;
use ladder_transform::transform::{phi, phi_integrand, phi_with_grade};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Parser)]
#[command(name = "ladder", version, about = "Exact transform, inversion and pairing for ladder representations of U(p,q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Shape {
    /// Expected number of holomorphic variables.
    #[arg(long)]
    p: Option<usize>,
    /// Expected number of antiholomorphic variables.
    #[arg(long)]
    q: Option<usize>,
}

#[derive(Args, Clone)]
struct Sampling {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Monte Carlo sample count when the quadrature rule is too large.
    #[arg(long = "mc-budget", default_value_t = 200_000)]
    mc_budget: usize,
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
}

#[derive(Subcommand)]
enum Command {
    /// Transform a polynomial (JSON) into a disk section (JSON).
    Transform {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Grade to transform at; inferred from the input when omitted.
        #[arg(long, allow_negative_numbers = true)]
        n: Option<i64>,
        #[command(flatten)]
        shape: Shape,
    },
    /// Recover the polynomial from a section (p = 1).
    Invert {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        shape: Shape,
    },
    /// Pair two sections (p = 1); a single input is paired with itself.
    Pair {
        #[arg(long, num_args = 1..=2, required = true)]
        input: Vec<PathBuf>,
        #[command(flatten)]
        shape: Shape,
    },
    /// List the 2×2 minors that fail to annihilate a section.
    CheckMinors {
        #[arg(long)]
        input: PathBuf,
        #[command(flatten)]
        shape: Shape,
    },
    /// Compare the exact transform with quadrature of its defining integral.
    Verify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 5)]
        points: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Check ω(g)Φf = Φσ(g)f at random points for a group element (JSON).
    Intertwine {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 10)]
        points: usize,
        #[command(flatten)]
        sampling: Sampling,
    },
    /// Run the worked example z₁³z̄₂z̄₃³z̄₄ through the whole pipeline.
    Demo,
}

#[derive(Debug)]
enum Failure {
    Io(String),
    Validation(String),
    Unsupported(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Io(_) => 1,
            Failure::Validation(_) => 2,
            Failure::Unsupported(_) => 3,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Unsupported(_) => Failure::Unsupported(e.to_string()),
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Io(m) | Failure::Validation(m) | Failure::Unsupported(m) => f.write_str(m),
        }
    }
}

type Outcome = Result<(), Failure>;

fn read(path: &PathBuf) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))
}

fn emit(text: &str, output: &Option<PathBuf>) -> Outcome {
    match output {
        Some(path) => fs::write(path, format!("{text}\n")).map_err(|e| Failure::Io(format!("{}: {e}", path.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn check_shape(shape: &Shape, p: usize, q: usize) -> Outcome {
    for (name, want, got) in [("p", shape.p, p), ("q", shape.q, q)] {
        if let Some(w) = want {
            if w != got {
                return Err(Failure::Validation(format!("--{name} {w} does not match the input ({name} = {got})")));
            }
        }
    }
    Ok(())
}

fn require_ball(p: usize) -> Outcome {
    if p != 1 {
        return Err(Failure::Unsupported(format!(
            "unsupported: inversion and pairing are only established for p = 1 (input has p = {p})"
        )));
    }
    Ok(())
}

fn load_section(path: &PathBuf, shape: &Shape) -> Result<DiskSection, Failure> {
    let s = section_from_json(&read(path)?)?;
    check_shape(shape, s.p(), s.q())?;
    Ok(s)
}

/// Random `ζ` with `‖ζ‖_F < 1/2` (inside the disk) and `v` in the unit box.
fn sample_point(rng: &mut ChaCha8Rng, p: usize, q: usize) -> (Vec<Complex64>, Vec<Complex64>) {
    let r = 0.5 / ((2 * p * q) as f64).sqrt();
    let zeta = (0..p * q).map(|_| Complex64::new(rng.gen_range(-r..r), rng.gen_range(-r..r))).collect();
    let v = (0..q).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
    (zeta, v)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Transform { input, output, n, shape } => {
            let f = fock_from_json(&read(&input)?)?;
            check_shape(&shape, f.p(), f.q())?;
            let s = match n {
                Some(n) => phi_with_grade(&f, n)?,
                None => phi(&f)?,
            };
            emit(&section_to_json(&s), &output)
        }
        Command::Invert { input, output, shape } => {
            let s = load_section(&input, &shape)?;
            require_ball(s.p())?;
            emit(&fock_to_json(&invert(&s)?), &output)
        }
        Command::Pair { input, shape } => {
            let a = load_section(&input[0], &shape)?;
            let b = match input.get(1) {
                Some(path) => load_section(path, &shape)?,
                None => a.clone(),
            };
            require_ball(a.p())?;
            require_ball(b.p())?;
            println!("{}", format_exact(&pairing(&a, &b)?));
            Ok(())
        }
        Command::CheckMinors { input, shape } => {
            let s = load_section(&input, &shape)?;
            let bad = failing_minors(&s)?;
            if bad.is_empty() {
                println!("annihilated by all 2×2 minors");
                return Ok(());
            }
            for m in &bad {
                println!("rows {:?} cols {:?} do not annihilate", m.rows, m.cols);
            }
            Err(Failure::Validation(format!("{} minor(s) fail", bad.len())))
        }
        Command::Verify { input, points, sampling } => {
            let f = fock_from_json(&read(&input)?)?;
            let n = f.pure_grade_or(0)?;
            let s = phi_with_grade(&f, n)?;
            let budget = Budget { samples: sampling.mc_budget, seed: sampling.seed, tolerance: sampling.tolerance, ..Budget::default() };
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            let mut ok = true;
            for _ in 0..points {
                let (zeta, v) = sample_point(&mut rng, f.p(), f.q());
                let exact = s.eval(&zeta, &v)?;
                let est = quad_oracle(phi_integrand(&f, &zeta, &v), &Domain::Gaussian(f.q()), &budget);
                let agrees = est.agrees(exact, 3.0, sampling.tolerance);
                ok &= agrees;
                println!(
                    "{} exact {:.10} estimate {:.10} ({:?}, error {:.1e})",
                    if agrees { "ok  " } else { "FAIL" },
                    exact,
                    est.value,
                    est.method,
                    est.std_error
                );
            }
            if ok {
                Ok(())
            } else {
                Err(Failure::Validation("quadrature disagrees with the exact transform".into()))
            }
        }
        Command::Intertwine { group, input, points, sampling } => {
            let g = group_from_json(&read(&group)?)?;
            let f = fock_from_json(&read(&input)?)?;
            if (f.p(), f.q()) != (g.p(), g.q()) {
                return Err(Failure::Validation("group element and polynomial differ in (p, q)".into()));
            }
            let n = f.pure_grade_or(0)?;
            let s = phi_with_grade(&f, n)?;
            let mut rng = ChaCha8Rng::seed_from_u64(sampling.seed);
            let mut worst: f64 = 0.0;
            for _ in 0..points {
                let (zeta, v) = sample_point(&mut rng, g.p(), g.q());
                let lhs = omega_eval(&g, &s, &zeta, &v)?;
                let rhs = phi_sigma_eval(&g, &f, &zeta, &v)?;
                worst = worst.max((lhs - rhs).norm() / lhs.norm().max(1.0));
            }
            println!("max relative discrepancy {worst:.3e} over {points} points");
            if worst <= sampling.tolerance {
                Ok(())
            } else {
                Err(Failure::Validation(format!("discrepancy {worst:.3e} exceeds tolerance {:.1e}", sampling.tolerance)))
            }
        }
        Command::Demo => demo(),
    }
}

fn demo() -> Outcome {
    let f = FockPoly::monomial(MultiIndex::new(vec![3]), MultiIndex::new(vec![1, 3, 1]));
    let s = phi(&f)?;
    let ps = p_op(&s)?;
    let ls = l_op(&s)?;
    let back = invert(&s)?;
    let pair = pairing(&s, &s)?;
    let norm = fock_inner(&f, &f)?;
    let minors = failing_minors(&s)?;

    println!("f = {}", format_fock(&f));
    println!("Φ₂f = {}", format_section(&s));
    println!("Pφ = {}", format_section(&ps));
    println!("Lφ = {}", format_section(&ls));
    println!("Φ₂⁻¹φ = {}", format_fock(&back));
    println!("((φ, φ)) = {}", format_exact(&pair));
    println!("⟨f, f⟩ = {}", format_exact(&norm));
    println!("failing minors: {}", minors.len());

    let checks = [
        ("Pφ", format_section(&ps) == "18 ζ₂²ζ₃ v̄₁v̄₂"),
        ("Lφ", format_section(&ls) == "6 ζ₂²ζ₃ v̄₁v̄₂"),
        ("round trip", back == f),
        ("pairing", pair == norm && format_exact(&pair) == "36/1"),
        ("minors", minors.is_empty()),
    ];
    let failed: Vec<&str> = checks.iter().filter(|(_, ok)| !ok).map(|(name, _)| *name).collect();
    if failed.is_empty() {
        println!("all checks passed");
        Ok(())
    } else {
        Err(Failure::Validation(format!("failed checks: {}", failed.join(", "))))
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ladder: {e}");
            ExitCode::from(e.code())
        }
    }
}
