//! `troplam`: command-line access to the kernel with JSON on stdout.
//!
//! Exit codes: 0 success, 2 invalid input, 3 cap exceeded, 4 a property or
//! check failed.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use troplam::hyperbolic::{
    self, check_cf_all, check_ct_all, degeneration_path, degeneration_path_icd, in_cell,
    parse_log_t, solve_cyclic, DEFAULT_TOL,
};
use troplam::io::{self, Bundle};
use troplam::lamination::{decompose_by_splitting, decompose_multicurve};
use troplam::measures::{
    check_balanced_cells, check_cgt, check_ct_all as check_ct_measure, check_tf_all, check_tgt,
    check_tt_all, complete_balanced, perimeter_profile, total_weight, Q,
};
use troplam::oracle::{self, PolygonInput, RandomConfig};
use troplam::simplify::{self, NeutralRule, Simplified, SimplifyConfig};
use troplam::{EdgeId, Error, Mode, Triangulation};

#[derive(Parser)]
#[command(
    name = "troplam",
    version,
    about = "Tropical and classical coordinates on ideal triangulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Default)]
struct Input {
    /// Bundle with any of "triangulation", "measure", "lambda".
    #[arg(long)]
    input: Option<PathBuf>,
    /// Triangulation file (overrides the bundle).
    #[arg(long)]
    tri: Option<PathBuf>,
    /// Measure file (overrides the bundle).
    #[arg(long)]
    measure: Option<PathBuf>,
    /// Lambda length file (overrides the bundle).
    #[arg(long)]
    lambda: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct Caps {
    /// Largest neutral class explored.
    #[arg(long, default_value_t = 100_000)]
    class_cap: usize,
    /// Largest number of flips in a run.
    #[arg(long, default_value_t = 1_000_000)]
    flip_cap: usize,
    #[arg(long, value_enum, default_value_t = Rule::PairMax)]
    rule: Rule,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    PairMax,
    FullProfile,
}

#[derive(Clone, Copy, ValueEnum)]
enum Method {
    Trace,
    Split,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate conditions on the input.
    Check {
        #[command(flatten)]
        input: Input,
        /// Comma-separated subset of ct,tt,cf,tf,cgt,tgt,balanced.
        #[arg(long, value_delimiter = ',', required = true)]
        conditions: Vec<String>,
        /// Cut edges (keys) for the balanced check on a surface.
        #[arg(long, value_delimiter = ',')]
        cut: Vec<usize>,
        /// Relative tolerance for the classical face condition.
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Flip one edge, transporting any measure and lambda lengths.
    Flip {
        #[command(flatten)]
        input: Input,
        /// Key of the edge to flip.
        #[arg(long)]
        edge: usize,
    },
    /// Reduce the perimeter profile by flips.
    Simplify {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: Caps,
    },
    /// Search for a triangulation on which the measure satisfies TT.
    FindTt {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        caps: Caps,
    },
    /// Split a multicurve measure into weighted closed curves.
    Decompose {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = Method::Trace)]
        method: Method,
    },
    /// Complete frontier values of a polygon to the balanced measure.
    Balance {
        #[command(flatten)]
        input: Input,
    },
    /// Solve for the cyclic polygon with the given side lengths.
    Cyclic {
        /// Comma-separated side lengths in order.
        #[arg(long, value_delimiter = ',', required = true)]
        sides: Vec<f64>,
        /// Read the sides as natural logarithms of the lengths.
        #[arg(long)]
        log: bool,
    },
    /// Lambda lengths along the degeneration path at parameter t.
    Degenerate {
        #[command(flatten)]
        input: Input,
        /// A float or "1e<k>".
        #[arg(long)]
        t: String,
        /// Use the cyclic-polygon path relative to the cut edges.
        #[arg(long)]
        icd: bool,
        /// Cut edges (keys) for --icd; defaults to none.
        #[arg(long, value_delimiter = ',')]
        cut: Vec<usize>,
    },
    /// Emit the standard triangulation of a punctured surface.
    Surface {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        punctures: usize,
    },
    /// Brute-force verification.
    Oracle {
        #[command(subcommand)]
        which: OracleCommand,
    },
}

#[derive(Subcommand)]
enum OracleCommand {
    /// Every triangulation of a small polygon.
    Polygon {
        #[arg(long)]
        n: usize,
        /// Corner band weights at consecutive vertices.
        #[arg(long, value_delimiter = ',', conflicts_with = "frontier")]
        bands: Vec<String>,
        /// Vertex of the first band (A = 0).
        #[arg(long, default_value_t = 1)]
        band_start: usize,
        /// Frontier values, side k from vertex k to k + 1.
        #[arg(long, value_delimiter = ',')]
        frontier: Vec<String>,
    },
    /// Randomized property suite.
    Random {
        /// Master seed; TROPLAM_SEED takes precedence.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        trials: u64,
        /// Worker threads (0 picks the number of cores).
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        /// Run the decomposition round trip every k-th trial.
        #[arg(long, default_value_t = 100)]
        decompose_every: u64,
    },
}

/// Command outcome: JSON for stdout and whether a checked property failed.
struct Outcome {
    json: Value,
    failed: bool,
}

impl Outcome {
    fn ok(json: Value) -> Self {
        Outcome {
            json,
            failed: false,
        }
    }
}

type Res<T> = Result<T, Error>;

fn read_json(path: &PathBuf) -> Res<Value> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Format(format!("cannot read {}: {e}", path.display())))?;
    io::parse(&text)
}

fn load(input: &Input) -> Res<Bundle> {
    let mut b = match &input.input {
        Some(p) => Bundle::from_json(&read_json(p)?)?,
        None => Bundle::default(),
    };
    if let Some(p) = &input.tri {
        b.triangulation = Some(io::triangulation_from_json(&read_json(p)?)?);
    }
    if let Some(p) = &input.measure {
        b.measure = Some(read_json(p)?);
    }
    if let Some(p) = &input.lambda {
        b.lambda = Some(read_json(p)?);
    }
    Ok(b)
}

fn config(caps: &Caps) -> SimplifyConfig {
    SimplifyConfig {
        class_cap: caps.class_cap,
        flip_cap: caps.flip_cap,
        rule: match caps.rule {
            Rule::PairMax => NeutralRule::PairMax,
            Rule::FullProfile => NeutralRule::FullProfile,
        },
    }
}

fn strings(values: &[Q]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

fn cut_edges(tri: &Triangulation, keys: &[usize]) -> Res<Vec<EdgeId>> {
    keys.iter().map(|&k| tri.edge_by_key(k)).collect()
}

fn parse_rationals(items: &[String]) -> Res<Vec<Q>> {
    items.iter().map(|s| io::parse_rational(s)).collect()
}

fn frontier_values(tri: &Triangulation, mu: &troplam::measures::Measure) -> Res<Vec<Q>> {
    Ok(tri
        .boundary_cycle()?
        .iter()
        .map(|&s| mu[tri.edge_of(s)].clone())
        .collect())
}

fn check(input: &Input, conditions: &[String], cut: &[usize], tol: f64) -> Res<Outcome> {
    let b = load(input)?;
    let tri = b.triangulation()?;
    let mut out = Map::new();
    for c in conditions {
        let value = match c.as_str() {
            "tt" => check_tt_all(tri, &b.measure()?),
            "tf" => check_tf_all(tri, &b.measure()?),
            "ct" => match &b.lambda {
                Some(_) => check_ct_all(tri, &b.lambda()?),
                None => check_ct_measure(tri, &b.measure()?),
            },
            "cf" => check_cf_all(tri, &b.lambda()?, tol)?,
            "cgt" | "tgt" => {
                let values: Vec<Q> = if tri.mode() == Mode::Polygon {
                    frontier_values(tri, &b.measure()?)?
                } else {
                    return Err(Error::Precondition(format!("{c} needs a polygon")));
                };
                if c == "cgt" {
                    check_cgt(&values)?
                } else {
                    check_tgt(&values)?
                }
            }
            "balanced" => check_balanced_cells(tri, &cut_edges(tri, cut)?, &b.measure()?)?,
            other => return Err(Error::Format(format!("unknown condition {other:?}"))),
        };
        out.insert(c.clone(), Value::Bool(value));
    }
    let failed = out.values().any(|v| v == &Value::Bool(false));
    Ok(Outcome {
        json: Value::Object(out),
        failed,
    })
}

fn flip(input: &Input, key: usize) -> Res<Outcome> {
    let b = load(input)?;
    let tri = b.triangulation()?;
    let e = tri.edge_by_key(key)?;
    let (t2, _) = tri.flip(e)?;
    let mu = match &b.measure {
        Some(_) => Some(troplam::measures::tropical_ptolemy(tri, &b.measure()?, e)?.1),
        None => None,
    };
    let lam = match &b.lambda {
        Some(_) => Some(hyperbolic::classical_ptolemy(tri, &b.lambda()?, e)?.1),
        None => None,
    };
    let mut json = Bundle::to_json(&t2, mu.as_ref(), lam.as_ref());
    json["edge"] = json!(t2.key(e));
    Ok(Outcome::ok(json))
}

fn simplified_json(start: &Triangulation, run: &Simplified) -> Res<Value> {
    Ok(json!({
        "path": io::flip_path_to_json(start, &run.path)?,
        "triangulation": io::triangulation_to_json(&run.tri),
        "measure": io::measure_to_json(&run.tri, &run.mu),
        "profile": strings(&perimeter_profile(&run.tri, &run.mu).0),
        "total": total_weight(&run.mu).to_string(),
        "tt": check_tt_all(&run.tri, &run.mu),
        "reducing_steps": run.steps.len(),
        "class_size": run.class.len(),
    }))
}

fn simplify_cmd(input: &Input, caps: &Caps, tt: bool) -> Res<Outcome> {
    let b = load(input)?;
    let tri = b.triangulation()?;
    let mu = b.measure()?;
    let cfg = config(caps);
    let run = if tt {
        simplify::find_tt_triangulation_with(tri, &mu, &cfg)?
    } else {
        simplify::simplify_with(tri, &mu, &cfg)?
    };
    Ok(Outcome::ok(simplified_json(tri, &run)?))
}

fn decompose(input: &Input, method: Method) -> Res<Outcome> {
    let b = load(input)?;
    let tri = b.triangulation()?;
    let mu = b.measure()?;
    let mc = match method {
        Method::Trace => decompose_multicurve(tri, &mu)?,
        Method::Split => decompose_by_splitting(tri, &mu)?,
    };
    Ok(Outcome::ok(io::multicurve_to_json(tri, &mc)))
}

fn balance(input: &Input) -> Res<Outcome> {
    let b = load(input)?;
    let tri = b.triangulation()?;
    let (mu, present) = b.measure_partial()?;
    if let Some(e) = tri.frontier_edges().find(|e| !present[e.0]) {
        return Err(Error::Format(format!(
            "frontier edge {} has no value",
            tri.key(e)
        )));
    }
    let done = complete_balanced(tri, &mu)?;
    Ok(Outcome::ok(Bundle::to_json(tri, Some(&done), None)))
}

fn cyclic(sides: &[f64], log: bool) -> Res<Outcome> {
    let poly = if log {
        hyperbolic::solve_cyclic_log(sides)?
    } else {
        solve_cyclic(sides)?
    };
    Ok(Outcome::ok(json!({
        "R": poly.radius(),
        "diagonals": poly.fan_diagonals(),
        "center_inside": poly.center_inside,
        "vertex_angles": poly.vertex_angles(),
        "residual": poly.residual(),
    })))
}

fn degenerate(input: &Input, t: &str, icd: bool, cut: &[usize]) -> Res<Outcome> {
    let b = load(input)?;
    let tri = b.triangulation()?;
    let mu = b.measure()?;
    let log_t = parse_log_t(t)?;
    let lam = if icd {
        degeneration_path_icd(tri, &cut_edges(tri, cut)?, &mu, log_t)?
    } else {
        degeneration_path(tri, &mu, log_t)?
    };
    let mut exps = Map::new();
    if log_t > 0.0 {
        let mut keyed: Vec<(usize, f64)> = tri
            .edges()
            .map(|e| (tri.key(e), lam.log(e) / log_t))
            .collect();
        keyed.sort_by_key(|p| p.0);
        for (k, x) in keyed {
            exps.insert(k.to_string(), json!(x));
        }
    }
    let mut logs = Map::new();
    let mut keyed: Vec<(usize, f64)> = tri.edges().map(|e| (tri.key(e), lam.log(e))).collect();
    keyed.sort_by_key(|p| p.0);
    for (k, x) in keyed {
        logs.insert(k.to_string(), json!(x));
    }
    Ok(Outcome::ok(json!({
        "lambda": io::lambda_to_json(tri, &lam),
        "log_lambda": logs,
        "exponents": exps,
        "in_cell": in_cell(tri, &lam, 0.0)?,
    })))
}

fn oracle_cmd(which: &OracleCommand) -> Res<Outcome> {
    match which {
        OracleCommand::Polygon {
            n,
            bands,
            band_start,
            frontier,
        } => {
            let input = if !frontier.is_empty() {
                PolygonInput::Frontier(parse_rationals(frontier)?)
            } else if !bands.is_empty() {
                PolygonInput::Bands {
                    start: *band_start,
                    weights: parse_rationals(bands)?,
                }
            } else {
                return Err(Error::Format("give --bands or --frontier".into()));
            };
            let r = oracle::polygon_exhaustive(*n, &input)?;
            let failed = !r.report.all_passed();
            let json = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Outcome { json, failed })
        }
        OracleCommand::Random {
            seed,
            trials,
            jobs,
            decompose_every,
        } => {
            let seed = match std::env::var("TROPLAM_SEED") {
                Ok(s) => s
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("TROPLAM_SEED={s:?} is not an integer")))?,
                Err(_) => *seed,
            };
            let cfg = RandomConfig {
                decompose_every: *decompose_every,
                ..Default::default()
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(*jobs)
                .build()
                .map_err(|e| Error::Internal(e.to_string()))?;
            let r = pool.install(|| oracle::random_property_suite_with(seed, *trials, &cfg))?;
            let failed = !r.all_passed();
            let json = serde_json::to_value(&r).map_err(|e| Error::Internal(e.to_string()))?;
            Ok(Outcome { json, failed })
        }
    }
}

fn run(cli: &Cli) -> Res<Outcome> {
    match &cli.command {
        Command::Check {
            input,
            conditions,
            cut,
            tol,
        } => check(input, conditions, cut, *tol),
        Command::Flip { input, edge } => flip(input, *edge),
        Command::Simplify { input, caps } => simplify_cmd(input, caps, false),
        Command::FindTt { input, caps } => simplify_cmd(input, caps, true),
        Command::Decompose { input, method } => decompose(input, *method),
        Command::Balance { input } => balance(input),
        Command::Cyclic { sides, log } => cyclic(sides, *log),
        Command::Degenerate { input, t, icd, cut } => degenerate(input, t, *icd, cut),
        Command::Surface { genus, punctures } => {
            let t = troplam::tri::surfaces::standard_surface(*genus, *punctures)?;
            Ok(Outcome::ok(io::triangulation_to_json(&t)))
        }
        Command::Oracle { which } => oracle_cmd(which),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => match io::to_json_string(&out.json) {
            Ok(text) => {
                println!("{text}");
                ExitCode::from(if out.failed { 4 } else { 0 })
            }
            Err(e) => {
                eprintln!("{}", json!({ "error": e.to_string() }));
                ExitCode::from(4)
            }
        },
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
