mod format;
mod svg;

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use evac_core::algorithms::{alpha_beta, build, closed_form_worst, Family, FamilySpec};
use evac_core::frontier::{default_grid, solve_for_budget, sweep_family, FrontierRow};
use evac_core::verify::{diagnostics, run_all, SuiteSize};
use evac_core::{Engine, EngineConfig, EvacError, Point};

use format::sig9;

#[derive(Parser)]
#[command(name = "evac", version, about = "Two-robot evacuation from the unit disk")]
struct Cli {
    /// Output format; single values default to JSON, sweeps to CSV.
    #[arg(long, global = true, value_enum)]
    format: Option<OutputFormat>,
    /// Absolute tolerance of the average-case quadrature.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Search, catch-up and total cost for one exit position.
    Evaluate {
        #[command(flatten)]
        algo: AlgoArgs,
        /// Exit position as an angle.
        #[arg(long)]
        x: f64,
    },
    /// Worst-case cost over all exit positions.
    Worst {
        #[command(flatten)]
        algo: AlgoArgs,
    },
    /// Cost averaged over a uniformly placed exit.
    Average {
        #[command(flatten)]
        algo: AlgoArgs,
    },
    /// Average and worst case along a family.
    Frontier {
        #[arg(long, value_parser = parse_family)]
        family: Family,
        /// Number of grid values.
        #[arg(long)]
        grid: usize,
        /// Write the table here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Write an SVG scatter plot here.
        #[arg(long)]
        plot: Option<PathBuf>,
    },
    /// Best known algorithm for a worst-case budget.
    Solve {
        #[arg(long)]
        w: f64,
    },
    /// Run the acceptance suite.
    Verify {
        /// Coarser grids.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Args)]
struct AlgoArgs {
    #[arg(long, value_parser = parse_family)]
    algo: Family,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long)]
    bx: Option<f64>,
    #[arg(long)]
    by: Option<f64>,
}

fn parse_family(s: &str) -> Result<Family, String> {
    s.parse().map_err(|e: EvacError| e.to_string())
}

enum Failure {
    Usage(String),
    Run(String),
    Verification,
}

impl From<EvacError> for Failure {
    fn from(e: EvacError) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Run(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

impl Cli {
    fn single_format(&self) -> OutputFormat {
        self.format.unwrap_or(OutputFormat::Json)
    }

    fn sweep_format(&self) -> OutputFormat {
        self.format.unwrap_or(OutputFormat::Csv)
    }
}

impl AlgoArgs {
    fn spec(&self) -> Result<FamilySpec, Failure> {
        let need = |name: &str, v: Option<f64>| {
            v.ok_or_else(|| Failure::Usage(format!("--algo {} needs --{name}", self.algo)))
        };
        let given: Vec<&str> = [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("bx", self.bx),
            ("by", self.by),
        ]
        .iter()
        .filter(|(_, v)| v.is_some())
        .map(|(n, _)| *n)
        .collect();
        let allowed: &[&str] = match self.algo {
            Family::B1 | Family::B2 => &[],
            Family::A0 => &["alpha", "bx", "by"],
            Family::A1 | Family::A2 => &["alpha"],
            Family::A2p => &["alpha", "beta"],
        };
        if let Some(extra) = given.iter().find(|g| !allowed.contains(g)) {
            return Err(Failure::Usage(format!(
                "--{extra} does not apply to --algo {}",
                self.algo
            )));
        }
        Ok(match self.algo {
            Family::B1 => FamilySpec::B1,
            Family::B2 => FamilySpec::B2,
            Family::A0 => FamilySpec::A0 {
                alpha: need("alpha", self.alpha)?,
                detour: Point::new(need("bx", self.bx)?, need("by", self.by)?),
            },
            Family::A1 => FamilySpec::A1 {
                alpha: need("alpha", self.alpha)?,
            },
            Family::A2 => FamilySpec::A2 {
                alpha: need("alpha", self.alpha)?,
            },
            Family::A2p => {
                let beta = need("beta", self.beta)?;
                FamilySpec::A2p {
                    alpha: self.alpha.unwrap_or_else(|| alpha_beta(beta)),
                    beta,
                }
            }
        })
    }
}

/// Writes a single record either as a JSON object or as a one-row CSV.
fn emit_record(format: OutputFormat, fields: &[(&str, Option<f64>)], extra: &[(&str, String)]) -> Outcome {
    let mut out = io::stdout().lock();
    match format {
        OutputFormat::Json => {
            let mut map = serde_json::Map::new();
            for (k, v) in extra {
                map.insert((*k).into(), v.clone().into());
            }
            for (k, v) in fields {
                if let Some(v) = v {
                    map.insert((*k).into(), (*v).into());
                }
            }
            writeln!(out, "{}", serde_json::Value::Object(map))?;
        }
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            let header: Vec<&str> = extra.iter().map(|e| e.0).chain(fields.iter().map(|f| f.0)).collect();
            w.write_record(&header)?;
            let row: Vec<String> = extra
                .iter()
                .map(|e| e.1.clone())
                .chain(fields.iter().map(|f| f.1.map(sig9).unwrap_or_default()))
                .collect();
            w.write_record(&row)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn evaluate(engine: &Engine, cli: &Cli, algo: &AlgoArgs, x: f64) -> Outcome {
    let a = build(&algo.spec()?)?;
    let e = engine.evacuation_cost(&a, x)?;
    emit_record(
        cli.single_format(),
        &[("S", Some(e.search)), ("E", Some(e.catch)), ("C", Some(e.cost))],
        &[],
    )
}

fn worst(engine: &Engine, cli: &Cli, algo: &AlgoArgs) -> Outcome {
    let spec = algo.spec()?;
    let w = engine.worst_case(&build(&spec)?)?;
    emit_record(
        cli.single_format(),
        &[
            ("value", Some(w.value)),
            ("argmax_x", Some(w.argmax_x)),
            ("closed_form", closed_form_worst(&spec).ok()),
        ],
        &[],
    )
}

fn average(engine: &Engine, cli: &Cli, algo: &AlgoArgs) -> Outcome {
    let spec = algo.spec()?;
    let value = engine.average_case(&build(&spec)?)?;
    let closed = matches!(spec, FamilySpec::B2).then_some(1.0 + std::f64::consts::PI);
    emit_record(
        cli.single_format(),
        &[("value", Some(value)), ("closed_form", closed)],
        &[],
    )
}

fn opt9(v: Option<f64>) -> String {
    v.map(sig9).unwrap_or_default()
}

fn frontier(
    engine: &Engine,
    cli: &Cli,
    family: Family,
    grid: usize,
    out: Option<&PathBuf>,
    plot: Option<&PathBuf>,
) -> Outcome {
    if matches!(family, Family::B1 | Family::B2) {
        return Err(Failure::Usage(format!("{family} has no parameters to sweep")));
    }
    if grid == 0 {
        return Err(Failure::Usage("--grid must be positive".into()));
    }
    let b1_average = if family == Family::A0 {
        engine.average_case(&build(&FamilySpec::B1)?)?
    } else {
        f64::NAN
    };
    let points = sweep_family(engine, &default_grid(family, grid))?;
    let rows: Vec<FrontierRow> = points.iter().map(|p| FrontierRow::new(p, b1_average)).collect();

    let mut buf = Vec::new();
    match cli.sweep_format() {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut buf);
            w.write_record(["family", "param1", "param2", "average", "worst", "bound", "margin"])?;
            for r in &rows {
                let p2: Vec<String> = r.param2.iter().map(|&v| sig9(v)).collect();
                w.write_record([
                    r.family.name().to_string(),
                    sig9(r.param1),
                    p2.join(";"),
                    sig9(r.average),
                    sig9(r.worst),
                    opt9(r.bound),
                    opt9(r.margin),
                ])?;
            }
            w.flush()?;
        }
        OutputFormat::Json => {
            serde_json::to_writer(&mut buf, &rows).map_err(|e| Failure::Run(e.to_string()))?;
            buf.push(b'\n');
        }
    }
    match out {
        Some(path) => fs::write(path, &buf)?,
        None => io::stdout().lock().write_all(&buf)?,
    }
    if let Some(path) = plot {
        let pairs: Vec<(f64, f64)> = points.iter().map(|p| (p.average, p.worst)).collect();
        let title = format!("{family}: average vs worst-case");
        fs::write(path, svg::scatter(&title, &pairs, family != Family::A0))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Solution {
    family: Family,
    params: BTreeMap<&'static str, f64>,
    bound_g: f64,
    engine_average: f64,
    engine_worst: f64,
}

fn solve(engine: &Engine, cli: &Cli, w: f64) -> Outcome {
    let s = solve_for_budget(w)?;
    let algo = build(&s.spec)?;
    let sol = Solution {
        family: s.spec.family(),
        params: s.spec.params().into_iter().collect(),
        bound_g: s.bound,
        engine_average: engine.average_case(&algo)?,
        engine_worst: engine.worst_case(&algo)?.value,
    };
    match cli.single_format() {
        OutputFormat::Json => {
            let text = serde_json::to_string(&sol).map_err(|e| Failure::Run(e.to_string()))?;
            writeln!(io::stdout().lock(), "{text}")?;
            Ok(())
        }
        OutputFormat::Csv => {
            let params: Vec<(&str, Option<f64>)> =
                sol.params.iter().map(|(k, v)| (*k, Some(*v))).collect();
            let mut fields = params;
            fields.extend([
                ("bound_g", Some(sol.bound_g)),
                ("engine_average", Some(sol.engine_average)),
                ("engine_worst", Some(sol.engine_worst)),
            ]);
            emit_record(cli.single_format(), &fields, &[("family", sol.family.name().into())])
        }
    }
}

fn verify(engine: &Engine, cli: &Cli, quick: bool) -> Outcome {
    let size = if quick { SuiteSize::quick() } else { SuiteSize::full() };
    let results = run_all(engine, &size);
    let notes = diagnostics()?;
    let mut out = io::stdout().lock();
    match cli.format {
        None => {
            for r in &results {
                writeln!(out, "{r}")?;
            }
            for n in &notes {
                writeln!(out, "{n}")?;
            }
        }
        Some(OutputFormat::Json) => {
            let text = serde_json::to_string(&serde_json::json!({
                "criteria": results,
                "diagnostics": notes,
            }))
            .map_err(|e| Failure::Run(e.to_string()))?;
            writeln!(out, "{text}")?;
        }
        Some(OutputFormat::Csv) => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(["id", "name", "passed", "detail"])?;
            for r in &results {
                w.write_record([r.id.to_string(), r.name.into(), r.passed.to_string(), r.detail.clone()])?;
            }
            w.flush()?;
        }
    }
    if results.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run(cli: &Cli) -> Outcome {
    let mut config = EngineConfig::default();
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(Failure::Usage(format!("--tol must be positive, got {tol}")));
        }
        config.quadrature.tol = tol;
    }
    let engine = Engine::new(config);
    match &cli.command {
        Command::Evaluate { algo, x } => evaluate(&engine, cli, algo, *x),
        Command::Worst { algo } => worst(&engine, cli, algo),
        Command::Average { algo } => average(&engine, cli, algo),
        Command::Frontier {
            family,
            grid,
            out,
            plot,
        } => frontier(&engine, cli, *family, *grid, out.as_ref(), plot.as_ref()),
        Command::Solve { w } => solve(&engine, cli, *w),
        Command::Verify { quick } => verify(&engine, cli, *quick),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.threads).build();
    let pool = match pool {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
        Err(Failure::Run(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Verification) => ExitCode::from(1),
    }
}
