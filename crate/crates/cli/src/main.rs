use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};

use san_avail::catalog::{self, CatalogId};
use san_avail::san::{validate_model, ParamSet};
use san_avail::sim::SimConfig;
use san_avail::structural::{enumerate_min_cutsets, Topology, Variant};
use san_avail::ctmc;
use san_avail_cli::{run_study, solve, write_atomic, write_csv, write_long_csv, Backend, Engine, ResultRow, RunError, RunOptions, StudySpec};

#[derive(Parser)]
#[command(name = "san-avail", version, about = "Availability studies of IP and SDN backbone models")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every grid point of a study and write a CSV.
    RunStudy(RunStudyArgs),
    /// Evaluate one model at one parameter point.
    Solve(SolveArgs),
    /// Check catalog models for structural errors and solvability.
    Validate {
        #[arg(long)]
        model: Option<String>,
        #[arg(long, default_value_t = ctmc::DEFAULT_STATE_CAP)]
        state_cap: usize,
    },
    /// Enumerate minimal cut sets of a topology.
    EnumerateCuts {
        /// Topology file; the built-in backbone when omitted.
        #[arg(long)]
        topology: Option<PathBuf>,
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long, default_value_t = 3)]
        max_card: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List catalog models and built-in studies.
    List,
    /// Write a built-in study as an editable spec file.
    ExportStudy {
        #[arg(long)]
        study: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SimArgs {
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    t_end: Option<f64>,
    /// Target half-width relative to the mean.
    #[arg(long)]
    rel_ci: Option<f64>,
    #[arg(long)]
    confidence: Option<f64>,
    #[arg(long)]
    min_reps: Option<usize>,
    #[arg(long)]
    max_reps: Option<usize>,
}

impl SimArgs {
    fn apply(&self, cfg: &mut SimConfig) {
        if let Some(v) = self.seed {
            cfg.seed = v;
        }
        if let Some(v) = self.t_end {
            cfg.t_end = v;
        }
        if let Some(v) = self.rel_ci {
            cfg.relative_half_width = v;
        }
        if let Some(v) = self.confidence {
            cfg.confidence_level = v;
        }
        if let Some(v) = self.min_reps {
            cfg.min_replications = v;
        }
        if let Some(v) = self.max_reps {
            cfg.max_replications = v;
        }
    }
}

#[derive(Args)]
struct RunStudyArgs {
    /// Built-in study name.
    #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
    study: Option<String>,
    /// Study spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    /// Run the study grid on another model.
    #[arg(long)]
    model: Option<String>,
    #[arg(long, value_enum)]
    backend: Option<Backend>,
    #[arg(long)]
    out: PathBuf,
    /// Also write a long-format CSV for plotting.
    #[arg(long)]
    long: Option<PathBuf>,
    /// Add a wall-clock column.
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long, default_value_t = ctmc::DEFAULT_STATE_CAP)]
    state_cap: usize,
    /// Spare control cards return at the card recovery rate.
    #[arg(long)]
    corrected: bool,
    #[command(flatten)]
    sim: SimArgs,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    model: String,
    /// Study supplying the defaults; the model's own study when omitted.
    #[arg(long)]
    study: Option<String>,
    /// Parameter override, `name=value`.
    #[arg(long = "set", value_parser = parse_assignment)]
    set: Vec<(String, f64)>,
    #[arg(long, value_enum, default_value_t = Backend::Ctmc)]
    backend: Backend,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    timing: bool,
    #[arg(long, default_value_t = ctmc::DEFAULT_STATE_CAP)]
    state_cap: usize,
    #[arg(long)]
    corrected: bool,
    #[command(flatten)]
    sim: SimArgs,
}

fn parse_variant(s: &str) -> Result<Variant, String> {
    s.parse().map_err(|e: san_avail::structural::StructuralError| e.to_string())
}

fn parse_assignment(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected name=value, got {s:?}"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("not a number: {v:?}"))?;
    Ok((k.trim().to_string(), v))
}

/// Error paired with its exit code.
struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 1, error: e.into() }
}

fn model_error(e: impl Into<anyhow::Error>) -> Failure {
    Failure { code: 2, error: e.into() }
}

fn classify(e: RunError) -> Failure {
    if e.is_usage() {
        usage(e)
    } else {
        model_error(e)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}

fn dispatch(cmd: Command) -> Result<u8, Failure> {
    match cmd {
        Command::RunStudy(a) => run_study_cmd(a),
        Command::Solve(a) => solve_cmd(a),
        Command::Validate { model, state_cap } => validate_cmd(model.as_deref(), state_cap),
        Command::EnumerateCuts { topology, variant, max_card, out } => cuts_cmd(topology.as_deref(), variant, max_card, out.as_deref()),
        Command::List => {
            list_cmd();
            Ok(0)
        }
        Command::ExportStudy { study, out } => {
            let spec = StudySpec::builtin(&study).map_err(classify)?;
            emit(out.as_deref(), |w| w.write_all(spec.to_toml().as_bytes()).map_err(|e| RunError::Io { path: "output".into(), source: e }))?;
            Ok(0)
        }
    }
}

fn parse_model(name: &str) -> Result<CatalogId, Failure> {
    name.parse::<CatalogId>().map_err(usage)
}

/// Exit code for a finished run: failed rows beat unconverged ones.
fn row_code(rows: &[ResultRow]) -> u8 {
    if rows.iter().any(ResultRow::failed) {
        2
    } else if rows.iter().any(|r| r.engine == Engine::Sim && !r.converged) {
        3
    } else {
        0
    }
}

fn report_failures(rows: &[ResultRow]) {
    for r in rows {
        if let Some(e) = &r.error {
            let point: Vec<String> = r.point.iter().map(|(k, v)| format!("{k}={v}")).collect();
            eprintln!("failed [{}] {} {}: {e}", r.engine.name(), r.study, point.join(" "));
        } else if r.engine == Engine::Sim && !r.converged {
            eprintln!("warning: simulation did not reach the target precision after {} replications", r.replications);
        }
    }
}

fn emit(path: Option<&Path>, fill: impl FnOnce(&mut dyn Write) -> Result<(), RunError>) -> Result<(), Failure> {
    match path {
        Some(p) => write_atomic(p, fill).map_err(model_error),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            fill(&mut lock).map_err(model_error)
        }
    }
}

fn run_study_cmd(a: RunStudyArgs) -> Result<u8, Failure> {
    let mut spec = match (&a.study, &a.spec) {
        (Some(name), _) => StudySpec::builtin(name).map_err(classify)?,
        (None, Some(path)) => StudySpec::load(path).map_err(classify)?,
        (None, None) => return Err(usage(anyhow!("one of --study or --spec is required"))),
    };
    if let Some(m) = &a.model {
        spec = spec.with_model(parse_model(m)?);
    }
    if let Some(b) = a.backend {
        spec.backend = b;
    }
    spec.corrected |= a.corrected;
    a.sim.apply(&mut spec.sim);
    let opts = RunOptions { workers: a.workers, state_cap: a.state_cap };
    let rows = run_study(&spec, &opts).map_err(classify)?;
    let ranged = spec.ranged();
    emit(Some(&a.out), |w| write_csv(w, &ranged, &rows, a.timing))?;
    if let Some(long) = &a.long {
        emit(Some(long), |w| write_long_csv(w, &ranged, &rows))?;
    }
    report_failures(&rows);
    eprintln!("{} rows written to {}", rows.len(), a.out.display());
    Ok(row_code(&rows))
}

fn solve_cmd(a: SolveArgs) -> Result<u8, Failure> {
    let id = parse_model(&a.model)?;
    let study = a.study.as_deref().unwrap_or(id.default_study());
    let mut params: ParamSet = catalog::default_params(id, study).map_err(usage)?;
    let declared = catalog::build(id).params;
    for (k, v) in &a.set {
        let name = catalog::param_aliases().iter().find(|(alias, _)| alias == k).map_or(k.as_str(), |p| p.1);
        if !declared.iter().any(|d| d.name == name) {
            return Err(usage(anyhow!("model {id} has no parameter {k:?}")));
        }
        params.set(name, *v);
    }
    let mut cfg = SimConfig::default();
    a.sim.apply(&mut cfg);
    let opts = RunOptions { workers: None, state_cap: a.state_cap };
    let rows = solve(id, &params, a.backend, cfg, a.corrected, &opts).map_err(classify)?;
    emit(a.out.as_deref(), |w| write_csv(w, &[], &rows, a.timing))?;
    report_failures(&rows);
    Ok(row_code(&rows))
}

fn validate_cmd(model: Option<&str>, state_cap: usize) -> Result<u8, Failure> {
    let ids = match model {
        Some(m) => vec![parse_model(m)?],
        None => CatalogId::ALL.to_vec(),
    };
    let mut bad = 0;
    for id in ids {
        match validate_one(id, state_cap) {
            Ok(line) => println!("ok      {:<10} {line}", id.name()),
            Err(e) => {
                bad += 1;
                println!("invalid {:<10} {e:#}", id.name());
            }
        }
    }
    Ok(if bad == 0 { 0 } else { 2 })
}

fn validate_one(id: CatalogId, state_cap: usize) -> anyhow::Result<String> {
    let model = catalog::build(id);
    let diags = validate_model(&model);
    if !diags.is_empty() {
        let text: Vec<String> = diags.iter().map(ToString::to_string).collect();
        return Err(anyhow!(text.join("; ")));
    }
    let params = catalog::default_params(id, id.default_study())?;
    let inst = catalog::instantiate(id, &params, Default::default())?;
    let sol = ctmc::solve(&inst.model, &inst.bindings, &inst.reward, state_cap)?;
    Ok(format!(
        "places={} activities={} states={} {}={}",
        model.places.len(),
        model.activities.len(),
        sol.space.len(),
        inst.reward.id,
        san_avail_cli::sci(sol.value)
    ))
}

fn cuts_cmd(topology: Option<&Path>, variant: Variant, max_card: usize, out: Option<&Path>) -> Result<u8, Failure> {
    let topo = match topology {
        Some(p) => {
            let text = std::fs::read_to_string(p).with_context(|| format!("reading {}", p.display())).map_err(usage)?;
            Topology::parse(&text).with_context(|| p.display().to_string()).map_err(usage)?
        }
        None => Topology::backbone(),
    };
    let cuts = enumerate_min_cutsets(&topo, variant, max_card).map_err(model_error)?;
    emit(out, |w| {
        let mut csv = csv::Writer::from_writer(w);
        csv.write_record(["variant", "cardinality", "type", "elements"])?;
        for c in &cuts {
            csv.write_record([variant.to_string(), c.cardinality().to_string(), c.type_tag(), c.labels().join(" ")])?;
        }
        csv.flush().map_err(csv::Error::from)?;
        Ok(())
    })?;
    if out.is_some() {
        eprintln!("{} minimal cut sets ({variant})", cuts.len());
    }
    Ok(0)
}

fn list_cmd() {
    println!("models:");
    for id in CatalogId::ALL {
        println!("  {:<10} {:<10} {}", id.name(), id.default_study(), id.describe());
    }
    println!("studies:");
    for s in catalog::studies() {
        let ranged = s.ranged().join(" x ");
        println!("  {:<12} {:<10} {:>3} points  {}", s.name, s.model.name(), s.grid_size(), ranged);
    }
}
