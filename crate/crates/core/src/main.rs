use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use log::warn;

use monolie::cauchy::CauchyTransform;
use monolie::clifford::{blade_label, Multivector, Paravector};
use monolie::geometry::{gamma_c, gamma_max_dist, in_lie_ball, kappa_ball_member, lie_norm};
use monolie::harmonics::legendre_eval;
use monolie::io;
use monolie::lie::{decompose, map_w_many};
use monolie::monogenic::{ck_extension, PolyMultivector};
use monolie::opcalc::{phi_of_a, poly_norm_probe, tuple_norm};
use monolie::poly::CLEANUP_THRESHOLD;
use monolie::quadrature::{build_sphere_quadrature, Measure};
use monolie::sampling::rng_from_seed;
use monolie::verify::{self, Suite};

#[derive(Parser, Debug)]
#[command(name = "monolie", version, about = "Clifford analysis on the Lie ball")]
struct Cli {
    #[command(flatten)]
    config: RunConfig,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct RunConfig {
    /// Series truncation order.
    #[arg(long = "K", global = true, default_value_t = 40)]
    k: u32,
    /// Quadrature level.
    #[arg(long, global = true, default_value_t = 32)]
    level: usize,
    /// Integration radius.
    #[arg(long, global = true, default_value_t = 0.8)]
    r: f64,
    #[arg(long, global = true, default_value_t = 1e-7)]
    tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Lie ball geometry and the holomorphic-to-monogenic extension.
    #[command(subcommand)]
    Lie(LieCmd),
    /// Legendre polynomials P_{k,n}.
    #[command(subcommand)]
    Legendre(LegendreCmd),
    /// Sphere Cauchy transform.
    #[command(subcommand)]
    Cauchy(CauchyCmd),
    /// Polynomial extensions.
    #[command(subcommand)]
    Extend(ExtendCmd),
    /// Functional calculus for matrix tuples.
    #[command(subcommand)]
    Opcalc(OpcalcCmd),
    /// Run self-check suites: `all` or one of clifford, geometry, harmonics,
    /// monogenic, cauchy, lie, opcalc.
    Verify {
        #[arg(default_value = "all")]
        target: String,
    },
}

#[derive(Subcommand, Debug)]
enum LieCmd {
    /// Lie norm of each point.
    Norm {
        #[arg(long)]
        points: PathBuf,
    },
    /// Lie ball membership of each point.
    Member {
        #[arg(long)]
        points: PathBuf,
    },
    /// Singular set gamma_C of each complex paravector.
    Gamma {
        #[arg(long)]
        points: PathBuf,
    },
    /// Decompose a polynomial in z_1..z_n into the components S_{m,k}.
    Decompose {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long, default_value_t = 6)]
        max_degree: u32,
    },
    /// Evaluate the complex regular extension of a decomposition.
    Extend {
        #[arg(long)]
        dec: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Round trip, Cauchy-Hua and extension checks.
    Verify,
}

#[derive(Subcommand, Debug)]
enum LegendreCmd {
    Eval {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, allow_negative_numbers = true)]
        t: f64,
    },
    /// CSV of t, P, P' and the bound check on an even grid of [-1, 1].
    Table {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        n: u32,
        #[arg(long, default_value_t = 11)]
        grid: usize,
    },
}

#[derive(Subcommand, Debug)]
enum CauchyCmd {
    /// Cauchy transform over r S^n of a monogenic polynomial.
    Transform {
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        points: PathBuf,
    },
    /// Reproduction and vanishing checks.
    Check,
}

#[derive(Subcommand, Debug)]
enum ExtendCmd {
    /// Cauchy-Kowalevski extension of a polynomial in x_1..x_n.
    Ck {
        #[arg(long)]
        poly: PathBuf,
        /// Evaluate at these points; without them the extension is printed
        /// as a JSON polynomial.
        #[arg(long)]
        points: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
enum OpcalcCmd {
    /// Apply the functional calculus to a tuple.
    Run {
        #[arg(long)]
        tuple: PathBuf,
        /// Polynomial in x_1..x_n (extended) or monogenic in x_0..x_n.
        #[arg(long)]
        phi: PathBuf,
    },
    /// Compare ||p(A)|| with sup |p| on the sphere for random p.
    Probe {
        #[arg(long)]
        tuple: PathBuf,
        #[arg(long, default_value_t = 3)]
        degree: u32,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

/// Failure while reading inputs; reported with exit status 2.
#[derive(Debug)]
struct InputError(anyhow::Error);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{:#}", self.0)
    }
}

impl std::error::Error for InputError {}

fn read_input<T>(path: &Path, parse: impl Fn(&str) -> monolie::Result<T>) -> anyhow::Result<T> {
    let load = || -> anyhow::Result<T> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        parse(&text).with_context(|| format!("parsing {}", path.display()))
    };
    load().map_err(|e| InputError(e).into())
}

enum Outcome {
    Done,
    ChecksFailed,
}

fn emit(config: &RunConfig, text: &str) -> anyhow::Result<()> {
    match &config.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn multivector_header(n: usize) -> String {
    let mut cols = vec!["index".to_string()];
    for mask in 0..1usize << n {
        let label = blade_label(mask);
        cols.push(format!("re_{label}"));
        cols.push(format!("im_{label}"));
    }
    cols.join(",")
}

fn multivector_rows(values: &[Multivector]) -> String {
    let n = values.first().map_or(0, Multivector::n);
    let mut out = multivector_header(n);
    out.push('\n');
    for (i, v) in values.iter().enumerate() {
        let fields: Vec<String> = v.coeffs().iter().map(|&c| io::fmt_complex(c)).collect();
        out.push_str(&format!("{i},{}\n", fields.join(",")));
    }
    out
}

fn paravector_rows(values: &[Paravector]) -> String {
    let n = values.first().map_or(0, Paravector::n);
    let mut cols = vec!["index".to_string()];
    for j in 0..=n {
        cols.push(format!("re_z{j}"));
        cols.push(format!("im_z{j}"));
    }
    let mut out = cols.join(",");
    out.push('\n');
    for (i, v) in values.iter().enumerate() {
        let fields: Vec<String> = v.comps().iter().map(|&c| io::fmt_complex(c)).collect();
        out.push_str(&format!("{i},{}\n", fields.join(",")));
    }
    out
}

fn report(config: &RunConfig, suites: &[Suite]) -> anyhow::Result<Outcome> {
    let rep = verify::run(suites, config.seed);
    emit(config, &rep.render())?;
    Ok(if rep.passed() {
        Outcome::Done
    } else {
        Outcome::ChecksFailed
    })
}

fn check_points_dim(points: &[Paravector], n: usize) -> anyhow::Result<()> {
    if let Some(p) = points.iter().find(|p| p.n() != n) {
        bail!(InputError(anyhow::anyhow!(
            "point with {} components, expected {}",
            p.n() + 1,
            n + 1
        )));
    }
    Ok(())
}

/// `P'_{k,n}(t) = k(k+n-2)/(n-1) P_{k-1,n+2}(t)`.
fn legendre_derivative(k: u32, n: u32, t: f64) -> monolie::Result<f64> {
    if k == 0 {
        return legendre_eval(0, n, t).map(|_| 0.0);
    }
    let factor = (k * (k + n - 2)) as f64 / (n - 1) as f64;
    Ok(factor * legendre_eval(k - 1, n + 2, t)?)
}

fn run(cli: Cli) -> anyhow::Result<Outcome> {
    let config = &cli.config;
    match cli.command {
        Command::Lie(cmd) => match cmd {
            LieCmd::Norm { points } => {
                let pts = read_input(&points, io::points_from_json)?;
                let mut out = String::from("index,norm\n");
                for (i, z) in pts.iter().enumerate() {
                    out.push_str(&format!("{i},{}\n", io::fmt_f64(lie_norm(z))));
                }
                emit(config, &out)?;
            }
            LieCmd::Member { points } => {
                let pts = read_input(&points, io::points_from_json)?;
                let mut out = String::from("index,norm,member\n");
                for (i, z) in pts.iter().enumerate() {
                    out.push_str(&format!("{i},{},{}\n", io::fmt_f64(lie_norm(z)), in_lie_ball(z)));
                }
                emit(config, &out)?;
            }
            LieCmd::Gamma { points } => {
                let pts = read_input(&points, io::paravectors_from_json)?;
                let mut out = String::from("index,kind,radius,maxdist,member\n");
                for (i, z) in pts.iter().enumerate() {
                    let g = gamma_c(z);
                    out.push_str(&format!(
                        "{i},{},{},{},{}\n",
                        g.kind.as_str(),
                        io::fmt_f64(g.radius),
                        io::fmt_f64(gamma_max_dist(z)),
                        kappa_ball_member(z, config.r)
                    ));
                }
                emit(config, &out)?;
            }
            LieCmd::Decompose { poly, max_degree } => {
                let f = read_input(&poly, io::scalar_poly_from_json)?;
                let dec = decompose(&f, max_degree)?;
                emit(config, &(io::decomposition_to_json(&dec) + "\n"))?;
            }
            LieCmd::Extend { dec, points } => {
                let dec = read_input(&dec, io::decomposition_from_json)?;
                let pts = read_input(&points, io::paravectors_from_json)?;
                check_points_dim(&pts, dec.n)?;
                let values = map_w_many(&dec, &pts, config.k)?;
                emit(config, &paravector_rows(&values))?;
            }
            LieCmd::Verify => return report(config, &[Suite::Lie]),
        },
        Command::Legendre(cmd) => match cmd {
            LegendreCmd::Eval { k, n, t } => {
                emit(config, &format!("{}\n", io::fmt_f64(legendre_eval(k, n, t)?)))?;
            }
            LegendreCmd::Table { k, n, grid } => {
                if grid < 2 {
                    bail!(InputError(anyhow::anyhow!("grid needs at least 2 points")));
                }
                let mut out = String::from("t,P,dP,bound_ok\n");
                for i in 0..grid {
                    let t = (-1.0 + 2.0 * i as f64 / (grid - 1) as f64).clamp(-1.0, 1.0);
                    let p = legendre_eval(k, n, t)?;
                    out.push_str(&format!(
                        "{},{},{},{}\n",
                        io::fmt_f64(t),
                        io::fmt_f64(p),
                        io::fmt_f64(legendre_derivative(k, n, t)?),
                        p.abs() <= 1.0 + 1e-12
                    ));
                }
                emit(config, &out)?;
            }
        },
        Command::Cauchy(cmd) => match cmd {
            CauchyCmd::Transform { poly, points } => {
                let f = read_input(&poly, io::poly_multivector_from_json)?;
                let mut d = f.dirac_d();
                d.cleanup(CLEANUP_THRESHOLD);
                if !d.is_zero(config.tol) {
                    warn!("input polynomial is not left monogenic; the transform will not reproduce it");
                }
                let pts = read_input(&points, io::paravectors_from_json)?;
                check_points_dim(&pts, f.n())?;
                let quad = build_sphere_quadrature(f.n(), config.r, config.level, Measure::Hypersurface)?;
                let t = CauchyTransform::new(&f, &quad)?;
                let values = pts.iter().map(|z| t.eval(z)).collect::<monolie::Result<Vec<_>>>()?;
                emit(config, &multivector_rows(&values))?;
            }
            CauchyCmd::Check => return report(config, &[Suite::Cauchy]),
        },
        Command::Extend(ExtendCmd::Ck { poly, points }) => {
            let p = read_input(&poly, io::poly_multivector_from_json)?;
            let f = ck_extension(&p)?;
            match points {
                None => emit(config, &(io::poly_multivector_to_json(&f) + "\n"))?,
                Some(points) => {
                    let pts = read_input(&points, io::paravectors_from_json)?;
                    check_points_dim(&pts, f.n())?;
                    let values = pts
                        .iter()
                        .map(|z| f.eval(z.comps()))
                        .collect::<monolie::Result<Vec<_>>>()?;
                    emit(config, &multivector_rows(&values))?;
                }
            }
        }
        Command::Opcalc(cmd) => match cmd {
            OpcalcCmd::Run { tuple, phi } => {
                let a = read_input(&tuple, io::tuple_from_json)?;
                let p = read_input(&phi, io::poly_multivector_from_json)?;
                if p.n() != a.n() {
                    bail!(InputError(anyhow::anyhow!(
                        "phi has n = {} but the tuple has n = {}",
                        p.n(),
                        a.n()
                    )));
                }
                let f: PolyMultivector = if p.depends_on_x0() { p } else { ck_extension(&p)? };
                let res = phi_of_a(&a, &f, config.r, config.level, config.k as usize)?;
                let off: serde_json::Map<String, serde_json::Value> = res
                    .off_blade_norms
                    .iter()
                    .map(|(&mask, &v)| (blade_label(mask), serde_json::json!(v)))
                    .collect();
                let doc = serde_json::json!({
                    "matrix": io::matrix_to_value(&res.matrix),
                    "off_blade_norms": off,
                    "max_tail_ratio": res.max_tail_ratio,
                    "nodes": res.nodes,
                    "tuple_norm": tuple_norm(&a),
                });
                emit(config, &(serde_json::to_string_pretty(&doc)? + "\n"))?;
            }
            OpcalcCmd::Probe {
                tuple,
                degree,
                samples,
            } => {
                let a = read_input(&tuple, io::tuple_from_json)?;
                let mut rng = rng_from_seed(config.seed);
                let ratio = poly_norm_probe(&a, degree, samples, &mut rng)?;
                let out = match config.format {
                    Format::Csv => format!(
                        "tuple_norm,degree,max_ratio\n{},{degree},{}\n",
                        io::fmt_f64(tuple_norm(&a)),
                        io::fmt_f64(ratio)
                    ),
                    Format::Json => {
                        serde_json::json!({"tuple_norm": tuple_norm(&a), "degree": degree, "max_ratio": ratio})
                            .to_string()
                            + "\n"
                    }
                };
                emit(config, &out)?;
            }
        },
        Command::Verify { target } => {
            let suites: Vec<Suite> = if target == "all" {
                Suite::ALL.to_vec()
            } else {
                vec![target.parse::<Suite>().map_err(|e| InputError(e.into()))?]
            };
            return report(config, &suites);
        }
    }
    Ok(Outcome::Done)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Ok(threads) = std::env::var("MONOLIE_THREADS") {
        match threads.parse::<usize>() {
            Ok(t) if t > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(t).build_global() {
                    warn!("could not size the thread pool: {e}");
                }
            }
            _ => warn!("ignoring MONOLIE_THREADS={threads:?}"),
        }
    }
    match run(cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::ChecksFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.downcast_ref::<InputError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
