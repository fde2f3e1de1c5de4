use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hopf_lpa::classifier::explain;
use hopf_lpa::cross_check::{
    default_sweep, run_parsed, summarize, sweep_json, CheckConfig, Instance, InstanceResult,
};
use hopf_lpa::hopf_graph::{build_delta_lambda, SubgraphView};
use hopf_lpa::ramification::{parse_ramification_document, RamificationDocument};
use hopf_lpa::{
    parse_group, parse_ramification, AmbientGroup, Error, MultiDigraph, RamificationData,
};
use rayon::prelude::*;

#[derive(Parser)]
#[command(
    name = "hopf-lpa",
    version,
    about = "Hopf graphs of groups and their Leavitt path algebras"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the Leavitt path algebra of one Hopf graph.
    Classify(InstanceArgs),
    /// Emit Γ, Δ or Λ as DOT or JSON.
    Graph {
        #[command(flatten)]
        instance: InstanceArgs,
        #[arg(long, value_enum, default_value_t = Which::Gamma)]
        subgraph: Which,
    },
    /// Classify and compare every verdict with a direct graph computation.
    Validate(InstanceArgs),
    /// Validate a batch of instances.
    Sweep {
        /// JSON list of `{"group": ..., "ramification": ...}`; defaults to the built-in sweep.
        #[arg(long)]
        manifest: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        jobs: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args)]
struct InstanceArgs {
    /// `trivial`, `cyclic:N`, `symmetric:N`, `dihedral:N`, `product(A,B)`, `table:FILE` or `integers`.
    #[arg(short, long)]
    group: String,
    /// `rep=mult; ...`, or `@FILE` for the JSON form.
    #[arg(short, long, default_value = "", allow_hyphen_values = true)]
    ramification: String,
    /// Half-width of the rendered window of ℤ.
    #[arg(long)]
    window: Option<u32>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct CommonArgs {
    #[arg(long, value_enum)]
    format: Option<Format>,
    #[arg(long, default_value_t = hopf_lpa::groups::DEFAULT_MAX_ORDER)]
    max_order: usize,
    #[arg(long, default_value_t = hopf_lpa::hopf_graph::DEFAULT_MAX_EDGES)]
    max_edges: u64,
    /// Maximum number of monoid elements visited per search.
    #[arg(long)]
    monoid_budget: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Clone, Copy, ValueEnum)]
enum Which {
    Gamma,
    Delta,
    Lambda,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 2,
            message: message.into(),
        }
    }

    /// Parse errors point at the offending text; cap violations get code 3.
    fn from_error(e: &Error, group: &str, ramification: &str) -> Self {
        let (text, span) = match e {
            Error::Group(g) => (group, g.span()),
            Error::Ramification(r) => (ramification, r.span()),
            Error::Graph(_) => ("", None),
        };
        let mut message = format!("error: {e}");
        if let Some((offset, len)) = span.filter(|_| !text.is_empty()) {
            let offset = offset.min(text.len());
            let end = (offset + len).min(text.len());
            let pad = text[..offset].chars().count();
            let width = text[offset..end].chars().count().max(1);
            message.push_str(&format!(
                "\n  {text}\n  {}{}",
                " ".repeat(pad),
                "^".repeat(width)
            ));
        }
        Failure {
            code: if e.is_size_limit() { 3 } else { 2 },
            message,
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::usage(format!("error: {e}"))
    }
}

impl CommonArgs {
    fn config(&self) -> CheckConfig {
        let mut config = CheckConfig {
            max_order: self.max_order,
            max_edges: self.max_edges,
            ..CheckConfig::default()
        };
        if let Some(n) = self.monoid_budget {
            config.budget.max_visited = n;
        }
        config
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.output {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn pretty(value: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON values serialize");
    s.push('\n');
    s
}

fn parse_instance(
    args: &InstanceArgs,
    config: &CheckConfig,
) -> Result<(AmbientGroup, RamificationData), Failure> {
    let group = parse_group(&args.group, config.max_order)
        .map_err(|e| Failure::from_error(&e.into(), &args.group, &args.ramification))?;
    let r = match args.ramification.strip_prefix('@') {
        Some(path) => {
            let doc: RamificationDocument = serde_json::from_str(&fs::read_to_string(path)?)
                .map_err(|e| Failure::usage(format!("error: {path}: {e}")))?;
            parse_ramification_document(&group, &doc, config.max_multiplicity)
        }
        None => parse_ramification(&group, &args.ramification, config.max_multiplicity),
    }
    .map_err(|e| Failure::from_error(&e.into(), &args.group, &args.ramification))?;
    Ok((group, r))
}

fn evaluate(args: &InstanceArgs) -> Result<InstanceResult, Failure> {
    let mut config = args.common.config();
    if let Some(n) = args.window {
        config.integer_window = n;
    }
    let (group, r) = parse_instance(args, &config)?;
    let instance = Instance::new(&args.group, &args.ramification);
    run_parsed(instance, group, r, &config)
        .map_err(|e| Failure::from_error(&e, &args.group, &args.ramification))
}

fn classify_text(res: &InstanceResult) -> String {
    let canonical = res.ramification.to_text();
    let shown = if canonical.is_empty() {
        "0"
    } else {
        canonical.as_str()
    };
    let mut out = format!("group: {}\nramification: {shown}\n", res.instance.group);
    for line in explain(
        &res.classification,
        &res.semigroup,
        res.ramification.degree_sum(),
    ) {
        out.push_str(&line);
        out.push('\n');
    }
    out
}

fn checks_text(res: &InstanceResult) -> String {
    let mut out = String::new();
    for c in &res.cross_check.checks {
        let mark = if c.agree { "ok  " } else { "FAIL" };
        out.push_str(&format!(
            "{mark} {}: formula {} / graph {}\n",
            c.property, c.theorem_value, c.direct_value
        ));
    }
    for s in &res.cross_check.skipped {
        out.push_str(&format!("skip {}: {}\n", s.property, s.reason));
    }
    out
}

fn cmd_classify(args: &InstanceArgs) -> Result<ExitCode, Failure> {
    let res = evaluate(args)?;
    let text = match args.common.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&res.to_json()),
        Format::Text => classify_text(&res),
        Format::Dot => {
            return Err(Failure::usage(
                "error: `classify` does not produce a graph; use `graph`",
            ))
        }
    };
    args.common.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn cmd_validate(args: &InstanceArgs) -> Result<ExitCode, Failure> {
    let res = evaluate(args)?;
    let text = match args.common.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&res.to_json()),
        Format::Text => checks_text(&res),
        Format::Dot => {
            return Err(Failure::usage(
                "error: `validate` does not produce a graph; use `graph`",
            ))
        }
    };
    args.common.emit(&text)?;
    Ok(if res.cross_check.all_agree() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn adjacency_text(g: &MultiDigraph) -> String {
    let mut out = format!("{} vertices, {} edges\n", g.vertex_count(), g.edge_count());
    for v in 0..g.vertex_count() {
        let targets: Vec<&str> = g.successors(v).map(|w| g.label(w)).collect();
        out.push_str(&format!("{} -> {}\n", g.label(v), targets.join(", ")));
    }
    out
}

fn cmd_graph(args: &InstanceArgs, which: Which) -> Result<ExitCode, Failure> {
    let config = args.common.config();
    let (group, r) = parse_instance(args, &config)?;
    if !group.is_finite() && args.window.is_none() {
        return Err(Failure::usage(
            "error: the graph over the integers is infinite; pass --window N",
        ));
    }
    let sg = hopf_lpa::semigroup::analyze(&group, &r);
    let bundle = build_delta_lambda(&group, &r, &sg, args.window, config.max_edges)
        .map_err(|e| Failure::from_error(&e.into(), &args.group, &args.ramification))?;
    let (name, view) = match which {
        Which::Gamma => ("Gamma", None),
        Which::Delta => ("Delta", Some(&bundle.delta)),
        Which::Lambda => ("Lambda", Some(&bundle.lambda)),
    };
    let empty;
    let graph = match view {
        None => bundle.gamma.as_ref().expect("finite or windowed Γ"),
        Some(SubgraphView::Graph(s)) => &s.graph,
        Some(SubgraphView::Trivial) => {
            empty = MultiDigraph::new(Vec::new(), Vec::new()).expect("empty graph is valid");
            &empty
        }
        Some(SubgraphView::Symbolic(s)) => {
            return Err(Failure::usage(format!("error: {name} is {s}")))
        }
    };
    let text = match args.common.format.unwrap_or(Format::Dot) {
        Format::Dot => graph.to_dot(name),
        Format::Json => {
            let mut s = graph.to_json();
            s.push('\n');
            s
        }
        Format::Text => adjacency_text(graph),
    };
    args.common.emit(&text)?;
    Ok(ExitCode::SUCCESS)
}

fn read_manifest(path: &Path) -> Result<Vec<Instance>, Failure> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("error: {}: {e}", path.display())))
}

fn cmd_sweep(
    manifest: Option<&Path>,
    jobs: usize,
    common: &CommonArgs,
) -> Result<ExitCode, Failure> {
    let instances = match manifest {
        Some(path) => read_manifest(path)?,
        None => default_sweep(),
    };
    let config = common.config();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Failure::usage(format!("error: {e}")))?;
    let results: Vec<_> = pool.install(|| {
        instances
            .par_iter()
            .map(|inst| hopf_lpa::run_instance(inst, &config))
            .collect()
    });
    let summary = summarize(&results);
    log::info!(
        "{} instances, {} checks, {} disagreements, {} errors",
        summary.instances,
        summary.checks,
        summary.disagreements,
        summary.errors
    );
    if summary.errors > 0 {
        log::warn!("{} instances failed to evaluate", summary.errors);
    }
    let text = match common.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&sweep_json(&results, &instances)),
        Format::Text => {
            let mut out = format!(
                "instances: {}\nerrors: {}\nchecks: {}\ndisagreements: {}\nmonoid IBN oracle decisive: {}/{}\nskipped: {}\n",
                summary.instances,
                summary.errors,
                summary.checks,
                summary.disagreements,
                summary.ibn_decisive,
                summary.ibn_oracle_runs,
                summary.skipped
            );
            for (inst, res) in instances.iter().zip(&results) {
                if let Ok(res) = res {
                    for c in res.cross_check.disagreements() {
                        out.push_str(&format!(
                            "disagreement: {} [{}] {}: formula {} / graph {}\n",
                            inst.group,
                            inst.ramification,
                            c.property,
                            c.theorem_value,
                            c.direct_value
                        ));
                    }
                }
            }
            out
        }
        Format::Dot => return Err(Failure::usage("error: `sweep` does not produce a graph")),
    };
    common.emit(&text)?;
    Ok(if summary.disagreements == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Classify(args) => cmd_classify(args),
        Command::Validate(args) => cmd_validate(args),
        Command::Graph { instance, subgraph } => cmd_graph(instance, *subgraph),
        Command::Sweep {
            manifest,
            jobs,
            common,
        } => cmd_sweep(manifest.as_deref(), *jobs, common),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
