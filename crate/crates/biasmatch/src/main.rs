//! Command-line surface over the library: generate instances, audit
//! degrees, classify pairs, harvest gadgets, run the pipeline, query the
//! exact oracle, verify the balanced constructions, and probe for
//! adversarial colourings.
//!
//! Exit codes: 0 success, 1 hypothesis/feasibility failure, 2 usage or
//! input-format error.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use biasmatch::arith::{binomial, format_rational, parse_rational, rational_from, Rational};
use biasmatch::colouring::{classify_all_pairs, profile, ColourProfile, PairType, ThresholdMode};
use biasmatch::error::{Error, Result};
use biasmatch::extremal::{
    adversarial_colouring_search, gen_3uniform_ab, gen_gprime, gen_random_dense,
    gen_random_uniform, Construction,
};
use biasmatch::gadgets::{Gadget, GoodnessCertificate};
use biasmatch::hypergraph::Hypergraph;
use biasmatch::instance::Instance;
use biasmatch::oracle::{
    enumerate_perfect_matchings, find_biased_pm_with, max_bias_perfect_matching_with, BiasResult,
    Matching, SearchConfig,
};
use biasmatch::pipeline::{
    default_t, eq1_lower_bound, harvest_gadget, run as run_pipeline, theorem_bias_bound,
    HarvestFailure, HarvestOutcome, RunParams,
};
use biasmatch::Colouring;

#[derive(Parser)]
#[command(
    name = "biasmatch",
    version,
    about = "Colour-bias analysis of perfect matchings in k-uniform hypergraphs"
)]
struct Cli {
    /// Worker threads for parallel sections (1 keeps output ordering
    /// deterministic).
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate an instance file from an inline generator spec.
    Gen(GenCmd),
    /// Minimum-degree audit against the hypothesis thresholds.
    Audit(AuditCmd),
    /// Census of vertex-pair types at a classification threshold.
    Classify(ClassifyCmd),
    /// Harvest disjoint good gadgets and print their certificates.
    Gadgets(GadgetsCmd),
    /// Full bias pipeline; emits a run report.
    Run(RunCmd),
    /// Exact oracle: maximum-bias perfect matching, or a target query.
    Oracle(OracleCmd),
    /// Check the exactly-balanced constructions' claims.
    VerifyExtremal(VerifyCmd),
    /// Search for a colouring minimizing the best achievable bias.
    Probe(ProbeCmd),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Instance file to read (.json for the JSON mirror, text otherwise).
    #[arg(long, value_name = "PATH", conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Inline generator spec: gprime:N | 3ab:N | complete:K,N |
    /// uniform:K,N,NUM/DEN | random:K,N,L,NUM/DEN.
    #[arg(long, value_name = "KIND:PARAMS")]
    gen: Option<String>,
}

impl InputArgs {
    fn load(&self, colours: usize, seed: u64) -> Result<Instance> {
        match (&self.input, &self.gen) {
            (Some(path), None) => Instance::read(path),
            (None, Some(spec)) => generate(spec, colours, seed),
            _ => Err(Error::invalid(
                "exactly one of --input and --gen must be given",
            )),
        }
    }
}

#[derive(Args)]
struct GenCmd {
    /// Inline generator spec: gprime:N | 3ab:N | complete:K,N |
    /// uniform:K,N,NUM/DEN | random:K,N,L,NUM/DEN.
    #[arg(long, value_name = "KIND:PARAMS", required = true)]
    gen: String,
    /// Colour count for the seeded generators.
    #[arg(long, default_value_t = 2)]
    colours: usize,
    /// Seed for the seeded generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Write here instead of stdout.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Output format; defaults to json when --output ends in .json, text
    /// otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

impl OutputArgs {
    fn format(&self) -> Format {
        self.format.unwrap_or_else(|| {
            if self.output.as_deref().map_or(false, is_json_path) {
                Format::Json
            } else {
                Format::Text
            }
        })
    }

    fn emit(&self, content: &str) -> Result<()> {
        match &self.output {
            Some(path) => std::fs::write(path, content)?,
            None => print!("{content}"),
        }
        Ok(())
    }
}

fn is_json_path(p: &Path) -> bool {
    p.extension().map_or(false, |e| e.eq_ignore_ascii_case("json"))
}

#[derive(Args)]
struct AuditCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Restrict the audit to one degree index (default: all 1 <= l < k).
    #[arg(long)]
    ell: Option<usize>,
    /// Surplus added to the degree fraction in the hypothesis check.
    #[arg(long, value_name = "NUM/DEN", default_value = "1/10")]
    eta: String,
    /// Colour count for inline generators.
    #[arg(long, default_value_t = 2)]
    colours: usize,
    /// Seed for inline generators.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct ClassifyCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Threshold policy: strict | scaled | scaled:NUM/DEN.
    #[arg(long, value_name = "MODE", default_value = "scaled")]
    threshold_mode: String,
    #[arg(long, default_value_t = 2)]
    colours: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct PipelineFlags {
    /// Degree index for the hypothesis audit (default k-1).
    #[arg(long)]
    ell: Option<usize>,
    /// Surplus parameter eta.
    #[arg(long, value_name = "NUM/DEN", default_value = "1/10")]
    eta: String,
    /// Override the harvest count t.
    #[arg(long)]
    t: Option<usize>,
    /// Threshold policy: strict | scaled | scaled:NUM/DEN.
    #[arg(long, value_name = "MODE", default_value = "scaled")]
    threshold_mode: String,
    /// Hypothesis degree fraction (default: the known lower-bound value).
    #[arg(long, value_name = "NUM/DEN")]
    c_threshold: Option<String>,
    /// Seed echoed into the report.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Oracle node budget per search.
    #[arg(long)]
    budget: Option<u64>,
}

impl PipelineFlags {
    fn params(&self, instance: &Instance) -> Result<RunParams> {
        let k = instance.hypergraph.k();
        let r = instance.colouring.r();
        let l = self.ell.unwrap_or(k.saturating_sub(1).max(1));
        let mut params = RunParams::new(l, parse_rational(&self.eta)?, r);
        params.t_override = self.t;
        params.threshold_mode = parse_threshold_mode(&self.threshold_mode, r)?;
        params.c_threshold = self.c_threshold.as_deref().map(parse_rational).transpose()?;
        params.seed = self.seed;
        params.budget = self.budget;
        Ok(params)
    }
}

#[derive(Args)]
struct GadgetsCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    flags: PipelineFlags,
    #[arg(long, default_value_t = 2)]
    colours: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct RunCmd {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    flags: PipelineFlags,
    #[arg(long, default_value_t = 2)]
    colours: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OracleCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Instead of maximizing, search for any perfect matching with at
    /// least this many edges of one colour.
    #[arg(long)]
    target: Option<i64>,
    /// Surplus used for the reference bound in the report.
    #[arg(long, value_name = "NUM/DEN", default_value = "1/10")]
    eta: String,
    /// Oracle node budget.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, default_value_t = 2)]
    colours: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ExtremalKind {
    Gprime,
    #[value(name = "3ab")]
    ThreeAb,
}

#[derive(Args)]
struct VerifyCmd {
    /// Which construction to verify.
    #[arg(long, value_enum)]
    kind: ExtremalKind,
    /// Vertex count (gprime: multiple of 4; 3ab: multiple of 6).
    #[arg(long)]
    n: usize,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProbeStart {
    /// Start the local search from the instance's own colouring.
    Own,
    /// Start from a seeded random colouring.
    Random,
}

#[derive(Args)]
struct ProbeCmd {
    #[command(flatten)]
    input: InputArgs,
    /// Colour count to probe with (default: the instance's own).
    #[arg(long)]
    colours: Option<usize>,
    /// Colouring-evaluation budget.
    #[arg(long, default_value_t = 10_000)]
    budget: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = ProbeStart::Own)]
    start: ProbeStart,
    #[command(flatten)]
    out: OutputArgs,
}

fn main() {
    let cli = Cli::parse();
    if cli.threads != 1 {
        // Deliberately ignore failure: the pool can only be set once.
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(match e {
                Error::InvalidArgument(_) | Error::Parse { .. } | Error::Json(_) | Error::Io(_) => {
                    2
                }
                _ => 1,
            });
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Gen(cmd) => cmd_gen(cmd),
        Command::Audit(cmd) => cmd_audit(cmd),
        Command::Classify(cmd) => cmd_classify(cmd),
        Command::Gadgets(cmd) => cmd_gadgets(cmd),
        Command::Run(cmd) => cmd_run(cmd),
        Command::Oracle(cmd) => cmd_oracle(cmd),
        Command::VerifyExtremal(cmd) => cmd_verify(cmd),
        Command::Probe(cmd) => cmd_probe(cmd),
    }
}

/// Builds an instance from an inline generator spec.
fn generate(spec: &str, colours: usize, seed: u64) -> Result<Instance> {
    let (kind, rest) = spec
        .split_once(':')
        .ok_or_else(|| Error::invalid(format!("generator spec `{spec}` must be KIND:PARAMS")))?;
    fn nums(s: &str) -> Vec<&str> {
        s.split(',').collect()
    }
    let int = |s: &str| -> Result<usize> {
        s.trim()
            .parse()
            .map_err(|_| Error::invalid(format!("`{s}` is not a non-negative integer")))
    };
    let (h, c, meta): (Hypergraph, Colouring, Construction) = match kind {
        "gprime" => gen_gprime(int(rest)?)?,
        "3ab" => gen_3uniform_ab(int(rest)?)?,
        "complete" => {
            let p = nums(rest);
            if p.len() != 2 {
                return Err(Error::invalid("complete spec is complete:K,N"));
            }
            gen_random_uniform(
                int(p[0])?,
                int(p[1])?,
                &Rational::from_integer(1.into()),
                colours,
                seed,
            )?
        }
        "uniform" => {
            let p = nums(rest);
            if p.len() != 3 {
                return Err(Error::invalid("uniform spec is uniform:K,N,NUM/DEN"));
            }
            gen_random_uniform(int(p[0])?, int(p[1])?, &parse_rational(p[2])?, colours, seed)?
        }
        "random" => {
            let p = nums(rest);
            if p.len() != 4 {
                return Err(Error::invalid("random spec is random:K,N,L,NUM/DEN"));
            }
            gen_random_dense(
                int(p[0])?,
                int(p[1])?,
                int(p[2])?,
                &parse_rational(p[3])?,
                colours,
                seed,
            )?
        }
        other => {
            return Err(Error::invalid(format!(
                "unknown generator kind `{other}` (expected gprime, 3ab, complete, uniform, random)"
            )))
        }
    };
    let comments = meta.comment_lines();
    Ok(Instance::new(h, c)?
        .with_comments(comments)
        .with_construction(serde_json::to_value(&meta)?))
}

fn parse_threshold_mode(s: &str, r: usize) -> Result<ThresholdMode> {
    match s {
        "strict" => Ok(ThresholdMode::Strict),
        "scaled" => ThresholdMode::default_scaled(r),
        _ => match s.split_once(':') {
            Some(("scaled", frac)) => Ok(ThresholdMode::Scaled(parse_rational(frac)?)),
            _ => Err(Error::invalid(format!(
                "threshold mode `{s}` must be strict, scaled, or scaled:NUM/DEN"
            ))),
        },
    }
}

fn to_json(value: &impl Serialize) -> Result<String> {
    Ok(serde_json::to_string_pretty(value)? + "\n")
}

fn cmd_gen(cmd: GenCmd) -> Result<i32> {
    let instance = generate(&cmd.gen, cmd.colours, cmd.seed)?;
    let content = match cmd.out.format() {
        Format::Text => instance.to_text()?,
        Format::Json => instance.to_json()?,
    };
    cmd.out.emit(&content)?;
    Ok(0)
}

#[derive(Serialize)]
struct AuditRow {
    l: usize,
    min_degree: usize,
    witness: Vec<usize>,
    /// C(n-l, k-l), the number of possible edges through an l-set.
    possible: String,
    #[serde(with = "biasmatch::arith::serde_rational")]
    degree_fraction_bound: Rational,
    #[serde(with = "biasmatch::arith::serde_rational")]
    hypothesis_bound: Rational,
    met: bool,
}

#[derive(Serialize)]
struct AuditReport {
    k: usize,
    n: usize,
    eta: String,
    rows: Vec<AuditRow>,
    all_met: bool,
}

fn cmd_audit(cmd: AuditCmd) -> Result<i32> {
    let instance = cmd.input.load(cmd.colours, cmd.seed)?;
    let h = &instance.hypergraph;
    let eta = parse_rational(&cmd.eta)?;
    let k = h.k();
    let n = h.n();
    let range: Vec<usize> = match cmd.ell {
        Some(l) => vec![l],
        None => (1..k).collect(),
    };
    let mut rows = Vec::new();
    for l in range {
        let (min_degree, witness) = h.min_l_degree(l)?;
        let possible = binomial(n - l, k - l);
        let fraction = eq1_lower_bound(k, l)?;
        let bound = (&fraction + &eta) * Rational::from_integer(possible.clone());
        let met = rational_from(min_degree) >= bound;
        rows.push(AuditRow {
            l,
            min_degree,
            witness: witness.to_vec(),
            possible: possible.to_string(),
            degree_fraction_bound: fraction,
            hypothesis_bound: bound,
            met,
        });
    }
    let all_met = rows.iter().all(|r| r.met);
    let report = AuditReport {
        k,
        n,
        eta: cmd.eta.clone(),
        rows,
        all_met,
    };
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = format!("degree audit: k={k} n={n} eta={}\n", report.eta);
            for row in &report.rows {
                s.push_str(&format!(
                    "  l={}: min degree {} (witness {{{}}}) of {} possible; needs >= {}: {}\n",
                    row.l,
                    row.min_degree,
                    row.witness.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(","),
                    row.possible,
                    format_rational(&row.hypothesis_bound),
                    if row.met { "met" } else { "NOT MET" },
                ));
            }
            s.push_str(if report.all_met {
                "hypothesis met at every audited l\n"
            } else {
                "hypothesis NOT met\n"
            });
            s
        }
    };
    cmd.out.emit(&content)?;
    Ok(if report.all_met { 0 } else { 1 })
}

#[derive(Serialize)]
struct ClassifyPairRow {
    u: usize,
    v: usize,
    #[serde(flatten)]
    classification: biasmatch::colouring::PairClassification,
}

#[derive(Serialize)]
struct ClassifyReport {
    threshold_mode: ThresholdMode,
    pairs: usize,
    with_same_type: usize,
    with_cross_type: usize,
    untyped: usize,
    rows: Vec<ClassifyPairRow>,
}

fn cmd_classify(cmd: ClassifyCmd) -> Result<i32> {
    let instance = cmd.input.load(cmd.colours, cmd.seed)?;
    let h = &instance.hypergraph;
    let c = &instance.colouring;
    let mode = parse_threshold_mode(&cmd.threshold_mode, c.r())?;
    let all = classify_all_pairs(h, c, &mode)?;
    let rows: Vec<ClassifyPairRow> = all
        .into_iter()
        .map(|(u, v, classification)| ClassifyPairRow {
            u,
            v,
            classification,
        })
        .collect();
    let with_same = rows
        .iter()
        .filter(|r| r.classification.has_type(PairType::Same))
        .count();
    let with_cross = rows
        .iter()
        .filter(|r| {
            r.classification
                .types
                .iter()
                .any(|t| matches!(t, PairType::Cross(_, _)))
        })
        .count();
    let untyped = rows.iter().filter(|r| r.classification.types.is_empty()).count();
    let report = ClassifyReport {
        threshold_mode: mode,
        pairs: rows.len(),
        with_same_type: with_same,
        with_cross_type: with_cross,
        untyped,
        rows,
    };
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = format!(
                "pair census: {} pairs, {} same-typed, {} cross-typed, {} untyped\n",
                report.pairs, report.with_same_type, report.with_cross_type, report.untyped
            );
            for row in &report.rows {
                if row.classification.types.is_empty() {
                    continue;
                }
                let types: Vec<String> = row
                    .classification
                    .types
                    .iter()
                    .map(|t| match t {
                        PairType::Same => "S".to_string(),
                        PairType::Cross(i, j) => format!("C{i}C{j}"),
                    })
                    .collect();
                s.push_str(&format!(
                    "  ({}, {}): {} [same {}, common {}, threshold {}]\n",
                    row.u,
                    row.v,
                    types.join(" "),
                    row.classification.same_count,
                    row.classification.common_size,
                    row.classification.threshold,
                ));
            }
            s
        }
    };
    cmd.out.emit(&content)?;
    Ok(0)
}

#[derive(Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
enum StageReport {
    Gadget {
        stage: usize,
        gadget: Gadget,
        certificate: GoodnessCertificate,
    },
    HugeBias {
        stage: usize,
        matching: Matching,
        profile: ColourProfile,
    },
    Failed {
        stage: usize,
        diagnostic: HarvestFailure,
    },
}

#[derive(Serialize)]
struct GadgetsReport {
    t_requested: usize,
    gadgets_found: usize,
    stages: Vec<StageReport>,
}

fn cmd_gadgets(cmd: GadgetsCmd) -> Result<i32> {
    let instance = cmd.input.load(cmd.colours, cmd.flags.seed)?;
    let h = &instance.hypergraph;
    let c = &instance.colouring;
    let params = cmd.flags.params(&instance)?;
    let t = match params.t_override {
        Some(t) => t,
        None => default_t(h.n(), h.k(), &params.eta)?,
    };
    let mut survivor = h.clone();
    let mut stages = Vec::new();
    let mut found = 0usize;
    for stage in 1..=t {
        match harvest_gadget(&survivor, c, &params)? {
            HarvestOutcome::Gadget(g) => {
                survivor = survivor.remove_vertices(g.gadget.vertex_set());
                found += 1;
                stages.push(StageReport::Gadget {
                    stage,
                    gadget: g.gadget,
                    certificate: g.certificate,
                });
            }
            HarvestOutcome::HugeBias(m) => {
                let p = profile(m.edges(), c)?;
                stages.push(StageReport::HugeBias {
                    stage,
                    matching: m,
                    profile: p,
                });
                break;
            }
            HarvestOutcome::Failed(diagnostic) => {
                stages.push(StageReport::Failed { stage, diagnostic });
                break;
            }
        }
    }
    let productive = found > 0
        || stages
            .iter()
            .any(|s| matches!(s, StageReport::HugeBias { .. }));
    let report = GadgetsReport {
        t_requested: t,
        gadgets_found: found,
        stages,
    };
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = format!(
                "harvest: {} gadget(s) over {} requested stage(s)\n",
                report.gadgets_found, report.t_requested
            );
            for stage in &report.stages {
                match stage {
                    StageReport::Gadget {
                        stage,
                        gadget,
                        certificate,
                    } => {
                        s.push_str(&format!(
                            "  stage {stage}: {:?} gadget e={} f={}, profiles {:?} vs {:?}, differs in {:?}\n",
                            gadget.shape,
                            gadget.e,
                            gadget.f,
                            certificate.profiles.0,
                            certificate.profiles.1,
                            certificate.differing_colours,
                        ));
                    }
                    StageReport::HugeBias {
                        stage,
                        matching,
                        profile,
                    } => {
                        s.push_str(&format!(
                            "  stage {stage}: huge-bias matching of {} edges, profile {profile:?}\n",
                            matching.len()
                        ));
                    }
                    StageReport::Failed { stage, diagnostic } => {
                        s.push_str(&format!("  stage {stage}: failed: {diagnostic}\n"));
                    }
                }
            }
            s
        }
    };
    cmd.out.emit(&content)?;
    Ok(if productive { 0 } else { 1 })
}

fn cmd_run(cmd: RunCmd) -> Result<i32> {
    let instance = cmd.input.load(cmd.colours, cmd.flags.seed)?;
    let params = cmd.flags.params(&instance)?;
    let report = run_pipeline(&instance.hypergraph, &instance.colouring, &params)?;
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = format!(
                "pipeline: k={} n={} r={} t={} (L={})\n",
                report.k, report.n, report.r, report.t_used, report.l_used
            );
            s.push_str(&format!(
                "hypothesis (l={}, fraction {}): {}\n",
                report.params.l,
                format_rational(&report.c_threshold),
                if report.hypothesis_met { "met" } else { "not met (advisory)" }
            ));
            if let Some(stage) = report.early_exit {
                s.push_str(&format!("early exit: huge-bias matching at stage {stage}\n"));
            }
            for g in &report.gadgets {
                s.push_str(&format!(
                    "gadget at stage {}: {:?}, assigned colour {}\n",
                    g.stage, g.gadget.shape, g.assigned_colour
                ));
            }
            if let Some(d) = &report.diagnostic {
                s.push_str(&format!("harvest stopped: {d}\n"));
            }
            if let Some(j) = report.chosen_colour {
                s.push_str(&format!("chosen colour: {j}\n"));
            }
            if let Some([plus, minus]) = report.candidate_biases {
                s.push_str(&format!("candidate biases: with-majority {plus}, against {minus}\n"));
            }
            s.push_str(&format!(
                "result: bias {} in colour {} (profile {:?}), bound {} -> {}\n",
                report.result.bias,
                report.result.bias_colour,
                report.result.profile,
                format_rational(&report.result.bound),
                if report.result.meets_bound { "met" } else { "below bound" },
            ));
            s
        }
    };
    cmd.out.emit(&content)?;
    Ok(0)
}

#[derive(Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
enum OracleReport {
    MaxBias {
        result: BiasResult,
    },
    Target {
        target: i64,
        found: bool,
        #[serde(skip_serializing_if = "Option::is_none")]
        matching: Option<Matching>,
        #[serde(skip_serializing_if = "Option::is_none")]
        profile: Option<ColourProfile>,
    },
}

fn cmd_oracle(cmd: OracleCmd) -> Result<i32> {
    let instance = cmd.input.load(cmd.colours, cmd.seed)?;
    let h = &instance.hypergraph;
    let c = &instance.colouring;
    let config = SearchConfig { budget: cmd.budget };
    let report = match cmd.target {
        Some(target) => {
            let found = find_biased_pm_with(h, c, target, config)?;
            let profile = found
                .as_ref()
                .map(|m| profile(m.edges(), c))
                .transpose()?;
            OracleReport::Target {
                target,
                found: found.is_some(),
                matching: found,
                profile,
            }
        }
        None => {
            let eta = parse_rational(&cmd.eta)?;
            let bound = if h.n() % h.k() == 0 && c.r() >= 2 {
                theorem_bias_bound(h.n(), h.k(), c.r(), &eta)?
            } else {
                Rational::from_integer(0.into())
            };
            let result = max_bias_perfect_matching_with(h, c, &bound, config)?
                .ok_or_else(|| {
                    Error::NoPerfectMatching("the instance has no perfect matching".into())
                })?;
            OracleReport::MaxBias { result }
        }
    };
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => match &report {
            OracleReport::MaxBias { result } => format!(
                "maximum bias: {} in colour {} (profile {:?})\nmatching: {}\nbound {}: {}\n",
                result.bias,
                result.bias_colour,
                result.profile,
                result
                    .matching
                    .edges()
                    .iter()
                    .map(|e| e.to_string())
                    .collect::<Vec<_>>()
                    .join(" "),
                format_rational(&result.bound),
                if result.meets_bound { "met" } else { "below" },
            ),
            OracleReport::Target {
                target,
                found,
                matching,
                profile,
            } => {
                if let (true, Some(m), Some(p)) = (found, matching, profile) {
                    format!(
                        "target {target}: found (profile {p:?})\nmatching: {}\n",
                        m.edges()
                            .iter()
                            .map(|e| e.to_string())
                            .collect::<Vec<_>>()
                            .join(" ")
                    )
                } else {
                    format!("target {target}: no perfect matching reaches it\n")
                }
            }
        },
    };
    cmd.out.emit(&content)?;
    Ok(0)
}

#[derive(Serialize)]
struct CheckRow {
    name: String,
    detail: String,
    passed: bool,
}

#[derive(Serialize)]
struct VerifyReport {
    kind: String,
    n: usize,
    checks: Vec<CheckRow>,
    all_passed: bool,
}

fn check(checks: &mut Vec<CheckRow>, name: &str, detail: String, passed: bool) {
    checks.push(CheckRow {
        name: name.to_string(),
        detail,
        passed,
    });
}

fn cmd_verify(cmd: VerifyCmd) -> Result<i32> {
    let mut checks = Vec::new();
    let kind_name = match cmd.kind {
        ExtremalKind::Gprime => "gprime",
        ExtremalKind::ThreeAb => "3ab",
    };
    match cmd.kind {
        ExtremalKind::Gprime => {
            let n = cmd.n;
            let (h, c, meta) = gen_gprime(n)?;
            let (delta, _) = h.min_l_degree(1)?;
            check(
                &mut checks,
                "minimum-degree",
                format!("delta = {delta}, expected 3n/4 = {}", 3 * n / 4),
                delta == 3 * n / 4,
            );
            let a = meta.part_a.expect("generator reports parts");
            check(
                &mut checks,
                "independent-part",
                "no edge lies inside part A".to_string(),
                h.edges().iter().all(|e| !e.is_subset_of(a)),
            );
            let all = enumerate_perfect_matchings(&h, None)?;
            let balanced = all
                .matchings
                .iter()
                .map(|m| profile(m.edges(), &c))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|p| p.counts() == [n / 4, n / 4]);
            check(
                &mut checks,
                "balanced-matchings",
                format!(
                    "{} perfect matchings, each with n/4 = {} edges per colour",
                    all.matchings.len(),
                    n / 4
                ),
                balanced && !all.matchings.is_empty(),
            );
        }
        ExtremalKind::ThreeAb => {
            let n = cmd.n;
            let (h, c, _) = gen_3uniform_ab(n)?;
            let half = n / 2;
            let expected = half * (half - 1) / 2 + half * (half - 1);
            let (delta, _) = h.min_l_degree(1)?;
            check(
                &mut checks,
                "minimum-degree",
                format!("delta_1 = {delta}, expected C(n/2,2) + (n/2)(n/2-1) = {expected}"),
                delta == expected,
            );
            let floor = Rational::new(3.into(), 4.into())
                * Rational::from_integer(binomial(n - 1, 2));
            check(
                &mut checks,
                "degree-floor",
                format!("delta_1 = {delta} >= (3/4)C(n-1,2) = {}", format_rational(&floor)),
                rational_from(delta) >= floor,
            );
            let all = enumerate_perfect_matchings(&h, None)?;
            let balanced = all
                .matchings
                .iter()
                .map(|m| profile(m.edges(), &c))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(|p| p.counts() == [n / 6, n / 6]);
            check(
                &mut checks,
                "balanced-matchings",
                format!(
                    "{} perfect matchings, each with n/6 = {} edges per colour",
                    all.matchings.len(),
                    n / 6
                ),
                balanced && !all.matchings.is_empty(),
            );
        }
    }
    let all_passed = checks.iter().all(|c| c.passed);
    let report = VerifyReport {
        kind: kind_name.to_string(),
        n: cmd.n,
        checks,
        all_passed,
    };
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => {
            let mut s = format!("verify {} at n={}\n", report.kind, report.n);
            for row in &report.checks {
                s.push_str(&format!(
                    "  [{}] {}: {}\n",
                    if row.passed { "ok" } else { "FAIL" },
                    row.name,
                    row.detail
                ));
            }
            s
        }
    };
    cmd.out.emit(&content)?;
    Ok(if report.all_passed { 0 } else { 1 })
}

#[derive(Serialize)]
struct ProbeReport {
    r: usize,
    start: String,
    evaluations: u64,
    exhaustive: bool,
    incomplete: bool,
    value: usize,
    /// Colour of each edge under the best colouring, in edge order.
    best_colouring: Vec<usize>,
}

fn cmd_probe(cmd: ProbeCmd) -> Result<i32> {
    let instance = cmd.input.load(cmd.colours.unwrap_or(2), cmd.seed)?;
    let h = &instance.hypergraph;
    let r = cmd.colours.unwrap_or_else(|| instance.colouring.r());
    let start = match cmd.start {
        ProbeStart::Own => {
            if instance.colouring.r() != r {
                return Err(Error::invalid(format!(
                    "--start own needs --colours to match the instance's r = {}",
                    instance.colouring.r()
                )));
            }
            Some(&instance.colouring)
        }
        ProbeStart::Random => None,
    };
    let probe = adversarial_colouring_search(h, r, start, cmd.budget, cmd.seed)?;
    let best_colouring = h
        .edges()
        .iter()
        .map(|&e| probe.colouring.colour(e))
        .collect::<Result<Vec<_>>>()?;
    let report = ProbeReport {
        r,
        start: match cmd.start {
            ProbeStart::Own => "own".to_string(),
            ProbeStart::Random => "random".to_string(),
        },
        evaluations: probe.evaluations,
        exhaustive: probe.exhaustive,
        incomplete: probe.incomplete,
        value: probe.value,
        best_colouring,
    };
    let content = match cmd.out.format() {
        Format::Json => to_json(&report)?,
        Format::Text => format!(
            "probe: min max-bias {} over r={} colourings ({}, {} evaluations{})\n",
            report.value,
            report.r,
            if report.exhaustive {
                "exhaustive"
            } else {
                "local search"
            },
            report.evaluations,
            if report.incomplete {
                ", budget exhausted"
            } else {
                ""
            },
        ),
    };
    cmd.out.emit(&content)?;
    Ok(0)
}
