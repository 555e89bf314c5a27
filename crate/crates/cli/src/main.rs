use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use pathoid::config::{RepConfig, SweepConfig};
use pathoid::planar::{half_circle, Point, Polyline, PuncturedPlane};
use pathoid::propagator::{configure_threads_from_env, flux_sweep, gauge_check, lattice_rep, Budget, SectorAmplitudes};
use pathoid::representation::{half_phase, GroupoidRep, PolarFrame, HALF_CIRCLE_SEGMENTS, PHASE_TOL};
use pathoid::{FiniteGroupoid, WeakGroupoid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::json;

mod failure;

use failure::Failure;

const DEFAULT_SEED: u64 = 1;

#[derive(Parser)]
#[command(
    name = "pathoid",
    version,
    about = "Fundamental groupoids, path weights and lattice propagators"
)]
struct Cli {
    /// Structured JSON on stdout, errors included.
    #[arg(long, global = true)]
    json: bool,
    /// Write the artifact here instead of stdout.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Finite groupoid tables.
    #[command(subcommand)]
    Groupoid(GroupoidCmd),
    /// Winding numbers of a closed polyline.
    Winding(PathArgs),
    /// Homotopy class (endpoints and swept angles) of a polyline.
    Class(PathArgs),
    /// Whether two polylines with common endpoints are homotopic.
    Homotopic {
        #[command(flatten)]
        space: SpaceArg,
        first: PathBuf,
        second: PathBuf,
    },
    /// One-dimensional path-weight representations.
    #[command(subcommand)]
    Rep(RepCmd),
    /// Lattice propagator with a flux tube.
    #[command(subcommand)]
    Ab(AbCmd),
}

#[derive(Subcommand)]
enum GroupoidCmd {
    /// Check the groupoid axioms exhaustively.
    Verify { table: PathBuf },
    /// Derive two-sided inverses from one-sided inverse data; missing entries are searched for.
    Derive { table: PathBuf },
}

#[derive(Args)]
struct SpaceArg {
    /// Space JSON `{punctures, clearance}`; default is the origin with clearance 1e-3.
    #[arg(long)]
    space: Option<PathBuf>,
}

#[derive(Args)]
struct PathArgs {
    #[command(flatten)]
    space: SpaceArg,
    path: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum WeightChoice {
    Symmetric,
    Unity,
}

#[derive(Args)]
struct SampleArgs {
    #[arg(long)]
    phi: f64,
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = WeightChoice::Symmetric)]
    weights: WeightChoice,
    #[arg(long, default_value_t = PHASE_TOL)]
    tol: f64,
}

#[derive(Subcommand)]
enum RepCmd {
    /// Weight of one path.
    Chi { rep: PathBuf, path: PathBuf },
    /// Representation law and reversal on seeded random paths; compatibility with `--against`.
    Check {
        rep: PathBuf,
        #[arg(long)]
        against: Option<PathBuf>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = PHASE_TOL)]
        tol: f64,
    },
    /// Weights of random counter-clockwise half circles about the origin.
    Halfcircle(SampleArgs),
    /// Largest weight change under point inversion of half circles.
    Defect(SampleArgs),
}

#[derive(Args)]
struct LatticeArgs {
    config: PathBuf,
    #[arg(long, default_value_t = pathoid::propagator::DEFAULT_MAX_STEPS)]
    max_steps: usize,
}

#[derive(Subcommand)]
enum AbCmd {
    /// `|K(φ)|` for each flux value in the config; CSV `phi,abs_k,re_k,im_k`.
    Sweep(LatticeArgs),
    /// Partial amplitude of each winding sector.
    Sectors {
        #[command(flatten)]
        lattice: LatticeArgs,
        /// Also report the weighted total at this flux.
        #[arg(long)]
        phi: Option<f64>,
    },
    /// `|K|` under seeded random mesh-weight gauges versus the unit-weight gauge.
    GaugeCheck {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[arg(long, default_value_t = 1.0)]
        phi: f64,
        #[arg(long, default_value_t = 20)]
        gauges: usize,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = PHASE_TOL)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads_from_env()
        .map_err(Failure::from)
        .and_then(|_| run(&cli));
    let emitted = match result {
        Ok((text, code)) => emit(cli.output.as_deref(), &text).map(|_| code),
        Err(f) => Err(f),
    };
    match emitted {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let body = f.to_json();
            if cli.json {
                println!("{body}");
            } else {
                eprintln!("{body}");
            }
            ExitCode::from(f.exit_code())
        }
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(p) => fs::write(p, text).map_err(|e| Failure::io(p, e)),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .map_err(|e| Failure::io(Path::new("<stdout>"), e))
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn ok(text: String) -> Outcome {
    Ok((text, 0))
}

fn to_json(v: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable output");
    s.push('\n');
    s
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::io(path, e))
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| Failure::json(path, e))
}

fn load_space(arg: &SpaceArg) -> Result<PuncturedPlane, Failure> {
    match &arg.space {
        Some(p) => read_json(p),
        None => Ok(PuncturedPlane::origin(1e-3)?),
    }
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!({ "re": z.re, "im": z.im, "abs": z.norm(), "arg": z.arg() })
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Groupoid(GroupoidCmd::Verify { table }) => {
            let g = FiniteGroupoid::from_text(&read(table)?)?;
            let report = g.verify_axioms()?;
            Ok((to_json(&report), if report.passed { 0 } else { failure::DOMAIN }))
        }
        Command::Groupoid(GroupoidCmd::Derive { table }) => {
            let weak = WeakGroupoid::from_text_searching(&read(table)?)?;
            let report = weak.derive_strong_inverses()?;
            let inverse: Vec<_> = (0..weak.table.len())
                .map(|a| (weak.table.name(a), weak.table.name(weak.left_inverse[a])))
                .collect();
            let code = if report.passed { 0 } else { failure::DOMAIN };
            Ok((to_json(&json!({ "report": report, "inverse": inverse })), code))
        }
        Command::Winding(args) => {
            let space = load_space(&args.space)?;
            let path: Polyline = read_json(&args.path)?;
            let w = space.winding_number(&path)?;
            ok(if cli.json {
                to_json(&json!({ "winding": w }))
            } else {
                format!("{}\n", join(&w))
            })
        }
        Command::Class(args) => {
            let space = load_space(&args.space)?;
            let path: Polyline = read_json(&args.path)?;
            ok(to_json(&space.homotopy_class(&path)?))
        }
        Command::Homotopic { space, first, second } => {
            let space = load_space(space)?;
            let p: Polyline = read_json(first)?;
            let q: Polyline = read_json(second)?;
            let (cp, cq) = (space.homotopy_class(&p)?, space.homotopy_class(&q)?);
            let same = cp.same_class(&cq);
            if cli.json {
                ok(to_json(&json!({ "homotopic": same, "first": cp, "second": cq })))
            } else {
                ok(format!("{same}\n"))
            }
        }
        Command::Rep(cmd) => run_rep(cli, cmd),
        Command::Ab(cmd) => run_ab(cli, cmd),
    }
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(",")
}

fn origin_rep(args: &SampleArgs) -> Result<GroupoidRep, Failure> {
    let space = PuncturedPlane::origin(1e-3)?;
    Ok(match args.weights {
        WeightChoice::Symmetric => GroupoidRep::symmetric(space, PolarFrame::STANDARD, args.phi)?,
        WeightChoice::Unity => GroupoidRep::ldw(space, args.phi, pathoid::Mesh::spiral(PolarFrame::STANDARD))?,
    })
}

fn weight_name(w: WeightChoice) -> &'static str {
    match w {
        WeightChoice::Symmetric => "symmetric",
        WeightChoice::Unity => "unity",
    }
}

fn half_circle_samples(args: &SampleArgs) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    (0..args.samples)
        .map(|_| {
            (
                rng.random_range(0.2..=10.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            )
        })
        .collect()
}

fn check_tol(tol: f64) -> Result<(), Failure> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Failure::config(format!("tolerance must be positive, got {tol}")))
    }
}

/// A random polyline from `start` whose segments all clear the punctures.
fn random_path(
    rng: &mut ChaCha8Rng,
    space: &PuncturedPlane,
    start: Point,
    segments: usize,
) -> Result<Polyline, Failure> {
    let mut vertices = vec![start];
    while vertices.len() <= segments {
        let last = *vertices.last().expect("nonempty");
        for attempt in 0.. {
            let next = Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
            if let Ok(seg) = Polyline::new(vec![last, next]) {
                if space.lifts(&seg).is_ok() {
                    vertices.push(next);
                    break;
                }
            }
            if attempt > 10_000 {
                return Err(Failure::config("no clear segments found; clearance too large".into()));
            }
        }
    }
    Ok(Polyline::new(vertices)?)
}

fn random_start(rng: &mut ChaCha8Rng, space: &PuncturedPlane) -> Point {
    loop {
        let p = Point::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
        if space.check_point(p).is_ok() {
            return p;
        }
    }
}

fn run_rep(cli: &Cli, cmd: &RepCmd) -> Outcome {
    match cmd {
        RepCmd::Chi { rep, path } => {
            let rep = read_json::<RepConfig>(rep)?.build()?;
            let path: Polyline = read_json(path)?;
            let chi = rep.chi(&path)?;
            ok(if cli.json {
                to_json(&complex_json(chi))
            } else {
                format!("{},{}\n", chi.re, chi.im)
            })
        }
        RepCmd::Check {
            rep,
            against,
            samples,
            seed,
            tol,
        } => {
            check_tol(*tol)?;
            let rep = read_json::<RepConfig>(rep)?.build()?;
            let space = rep.space().clone();
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let (mut law, mut reversal): (f64, f64) = (0.0, 0.0);
            let mut pairs = Vec::new();
            for _ in 0..*samples {
                let start = random_start(&mut rng, &space);
                let p = random_path(&mut rng, &space, start, 3)?;
                let q = random_path(&mut rng, &space, p.target(), 3)?;
                let (cp, cq) = (rep.chi(&p)?, rep.chi(&q)?);
                law = law.max((rep.chi(&p.concat(&q)?)? - cp * cq).norm());
                reversal = reversal.max((rep.chi(&p.reverse())? - cp.conj()).norm());
                pairs.push((p.source(), q.target()));
            }
            let compatible = match against {
                Some(other) => {
                    let other = read_json::<RepConfig>(other)?.build()?;
                    let ratios = rep.compatibility_ratios(&other, &pairs, 5)?;
                    let spread = ratios
                        .iter()
                        .flat_map(|row| row.iter().map(move |r| (r - row[0]).norm()))
                        .fold(0.0, f64::max);
                    Some(spread <= *tol)
                }
                None => None,
            };
            let passed = law <= *tol && reversal <= *tol && compatible.unwrap_or(true);
            let body = json!({
                "seed": seed,
                "samples": samples,
                "tolerance": tol,
                "law_deviation": law,
                "reversal_deviation": reversal,
                "compatible": compatible,
                "passed": passed,
            });
            Ok((to_json(&body), if passed { 0 } else { failure::DOMAIN }))
        }
        RepCmd::Halfcircle(args) => {
            check_tol(args.tol)?;
            let rep = origin_rep(args)?;
            let expected = half_phase(args.phi);
            let mut rows = Vec::new();
            let mut worst: f64 = 0.0;
            for (r, omega) in half_circle_samples(args) {
                let chi = rep.half_circle_phase(r, omega)?;
                let dev = (chi - expected).norm();
                worst = worst.max(dev);
                rows.push((r, omega, chi, dev));
            }
            let passed = worst <= args.tol;
            let text = if cli.json {
                let samples: Vec<_> = rows
                    .iter()
                    .map(|(r, o, c, d)| json!({ "r": r, "omega": o, "re": c.re, "im": c.im, "deviation": d }))
                    .collect();
                to_json(&json!({
                    "seed": args.seed,
                    "phi": args.phi,
                    "weights": weight_name(args.weights),
                    "expected": complex_json(expected),
                    "max_deviation": worst,
                    "passed": passed,
                    "samples": samples,
                }))
            } else {
                let mut s = format!(
                    "# seed={} phi={} weights={} max_deviation={worst:e}\nr,omega,re,im,deviation\n",
                    args.seed,
                    args.phi,
                    weight_name(args.weights)
                );
                for (r, o, c, d) in &rows {
                    s.push_str(&format!("{r},{o},{},{},{d:e}\n", c.re, c.im));
                }
                s
            };
            Ok((text, if passed { 0 } else { failure::DOMAIN }))
        }
        RepCmd::Defect(args) => {
            let rep = origin_rep(args)?;
            let samples = half_circle_samples(args);
            let defect = rep.inversion_defect(&samples)?;
            let witness = {
                let q = half_circle(1.0, 0.0, HALF_CIRCLE_SEGMENTS)?;
                (rep.chi(&q)? - rep.chi(&rep.space().invert_point(&q)?)?).norm()
            };
            ok(to_json(&json!({
                "seed": args.seed,
                "phi": args.phi,
                "weights": weight_name(args.weights),
                "samples": args.samples,
                "defect": defect,
                "witness_omega0": witness,
                "invariant": defect.max(witness) <= args.tol,
            })))
        }
    }
}

fn load_sweep(args: &LatticeArgs) -> Result<(SweepConfig, Budget), Failure> {
    let config: SweepConfig = read_json(&args.config)?;
    config.lattice.validate()?;
    let budget = Budget {
        max_steps: args.max_steps,
        ..Budget::default()
    };
    Ok((config, budget))
}

fn run_ab(cli: &Cli, cmd: &AbCmd) -> Outcome {
    match cmd {
        AbCmd::Sweep(args) => {
            let (c, budget) = load_sweep(args)?;
            let [a, b] = c.endpoints;
            let points = flux_sweep(&c.lattice, a, b, c.steps, &c.phis, budget)?;
            if cli.json {
                let rows: Vec<_> = points
                    .iter()
                    .map(|p| json!({ "phi": p.phi, "abs_k": p.abs(), "re_k": p.k.re, "im_k": p.k.im }))
                    .collect();
                return ok(to_json(&json!({ "config": c, "points": rows })));
            }
            let mut s = String::from("phi,abs_k,re_k,im_k\n");
            for p in &points {
                s.push_str(&format!("{},{},{},{}\n", p.phi, p.abs(), p.k.re, p.k.im));
            }
            ok(s)
        }
        AbCmd::Sectors { lattice, phi } => {
            let (c, budget) = load_sweep(lattice)?;
            let [a, b] = c.endpoints;
            let rep = lattice_rep(&c.lattice, a, phi.unwrap_or(0.0))?;
            let sectors = SectorAmplitudes::enumerate(&rep, &c.lattice, a, b, c.steps, budget)?;
            let total = match phi {
                Some(_) => Some(pathoid::propagator::total_propagator(&sectors, &rep)?.value),
                None => None,
            };
            if cli.json {
                let rows: Vec<_> = sectors
                    .sectors
                    .values()
                    .map(|s| json!({ "winding": s.winding, "count": s.count, "re": s.amplitude.re, "im": s.amplitude.im }))
                    .collect();
                return ok(to_json(&json!({
                    "source": sectors.source,
                    "target": sectors.target,
                    "steps": sectors.steps,
                    "total_walks": sectors.total_walks,
                    "sectors": rows,
                    "phi": phi,
                    "k": total.map(complex_json),
                })));
            }
            let mut s = format!("# total_walks={}\nwinding,count,re,im\n", sectors.total_walks);
            for sec in sectors.sectors.values() {
                s.push_str(&format!(
                    "{},{},{},{}\n",
                    sec.winding, sec.count, sec.amplitude.re, sec.amplitude.im
                ));
            }
            if let (Some(phi), Some(k)) = (phi, total) {
                s.push_str(&format!("# phi={phi} abs_k={} re_k={} im_k={}\n", k.norm(), k.re, k.im));
            }
            ok(s)
        }
        AbCmd::GaugeCheck {
            lattice,
            phi,
            gauges,
            seed,
            tol,
        } => {
            check_tol(*tol)?;
            let (c, budget) = load_sweep(lattice)?;
            let [a, b] = c.endpoints;
            let check = gauge_check(&c.lattice, a, b, c.steps, *phi, *gauges, *seed, budget)?;
            let passed = check.max_deviation <= *tol;
            let body = json!({ "check": check, "tolerance": tol, "passed": passed });
            Ok((to_json(&body), if passed { 0 } else { failure::DOMAIN }))
        }
    }
}
