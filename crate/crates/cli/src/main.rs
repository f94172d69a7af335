//! Command-line front end for the workbench.
//!
//! Exit codes follow one contract everywhere: 0 for pass/success, 1 for a
//! fail verdict (the witness is in the output), 2 for usage problems,
//! not-applicable verdicts, and tier errors. Output is JSON unless
//! `--format text|dot|graph6` says otherwise, and identical invocations
//! produce byte-identical output: sampling is seeded (never wall-clock) and
//! timing fields only appear under `--timing`.

use std::collections::HashMap;
use std::fmt::Display;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ktb_core::algebra::term::{eval_term, Term};
use ktb_core::family::{build_truncation, FamilySpec};
use ktb_core::frames::{decode_graph6, encode_graph6, Frame, Subset};
use ktb_core::morphisms::{cover_check, enumerate_stable_partitions, quotient, CoverVerdict};
use ktb_core::search::{enumerate_connected_graphs, filter_covers};
use ktb_core::verify::{
    frame_descriptor, list_lemmas, subset_json, verify_lemma, Applicability,
    ModeChoice, Status, Target, VerifyOptions, DEFAULT_SAMPLES, DEFAULT_SEED,
};

const EXIT_PASS: u8 = 0;
const EXIT_FAIL: u8 = 1;

/// Anything that should stop the run with exit code 2 and a message on the
/// diagnostic stream.
#[derive(Debug)]
struct CliError(String);

impl Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn err(e: impl Display) -> CliError {
    CliError(e.to_string())
}

#[derive(Parser)]
#[command(
    name = "ktb",
    version,
    about = "Finite modal-algebra workbench over reflexive symmetric frames"
)]
struct Cli {
    /// Flat key=value config file; explicit flags win over it.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Write output to this file instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Inspect a frame or convert it between formats.
    Frame(FrameCmd),
    /// Build a truncation-family member and inspect it.
    Family(FamilyCmd),
    /// List stable partitions of a frame with their quotients.
    Quotients(QuotientsCmd),
    /// Decide whether a frame admits no midsize stable partition.
    CheckCover(CheckCoverCmd),
    /// Evaluate a modal term on a frame.
    Term(TermCmd),
    /// Run a catalog lemma check, or list the catalog.
    Verify(VerifyCmd),
    /// Sweep the cover check over many graphs in parallel.
    Search(SearchCmd),
}

/// Frame source: exactly one of these must be given.
#[derive(Args, Clone, Default)]
struct FrameInput {
    /// Frame as graph6 text.
    #[arg(long, value_name = "TEXT")]
    graph6: Option<String>,
    /// Read one graph6 line from a file.
    #[arg(long, value_name = "PATH")]
    file: Option<PathBuf>,
    /// Named member: g1 is the tail-length-2 member, g2 the tail-length-3 one.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    /// Family member spec, like "N=2,4;p=6".
    #[arg(long, value_name = "SPEC")]
    family: Option<String>,
}

/// Ineffective step-set members are accepted (one spec can be reused across
/// tail lengths) but flagged on the diagnostic stream.
fn warn_ineffective(spec: &FamilySpec) {
    let skipped = spec.ineffective_members();
    if !skipped.is_empty() {
        let listed: Vec<String> = skipped.iter().map(usize::to_string).collect();
        eprintln!(
            "note: member(s) {} exceed p-2 = {}; their extra rung does not fit this truncation",
            listed.join(","),
            spec.p().saturating_sub(2)
        );
    }
}

impl FrameInput {
    fn family_spec(&self) -> Result<Option<FamilySpec>, CliError> {
        if let Some(name) = &self.preset {
            let spec = match name.as_str() {
                "g1" => FamilySpec::new([], 2),
                "g2" => FamilySpec::new([], 3),
                other => return Err(CliError(format!("unknown preset {other:?}; try g1 or g2"))),
            };
            return Ok(Some(spec.map_err(err)?));
        }
        if let Some(text) = &self.family {
            let spec = text.parse::<FamilySpec>().map_err(err)?;
            warn_ineffective(&spec);
            return Ok(Some(spec));
        }
        Ok(None)
    }

    fn resolve(&self) -> Result<(Frame, Option<FamilySpec>), CliError> {
        let picked = [
            self.graph6.is_some(),
            self.file.is_some(),
            self.preset.is_some(),
            self.family.is_some(),
        ]
        .iter()
        .filter(|&&b| b)
        .count();
        if picked != 1 {
            return Err(CliError(
                "pass exactly one of --graph6, --file, --preset, --family".to_string(),
            ));
        }
        if let Some(spec) = self.family_spec()? {
            let frame = build_truncation(&spec);
            return Ok((frame, Some(spec)));
        }
        let text = if let Some(text) = &self.graph6 {
            text.clone()
        } else {
            let path = self.file.as_ref().expect("file is the only remaining source");
            let content = fs::read_to_string(path).map_err(err)?;
            content
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty())
                .ok_or_else(|| CliError(format!("no graph6 line in {}", path.display())))?
                .to_string()
        };
        Ok((decode_graph6(text.trim()).map_err(err)?, None))
    }
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum Format {
    Json,
    Text,
    Dot,
    Graph6,
}

#[derive(ValueEnum, Clone, Copy, PartialEq, Eq, Debug)]
enum ModeArg {
    Auto,
    Exhaustive,
    Sampled,
}

impl From<ModeArg> for ModeChoice {
    fn from(mode: ModeArg) -> ModeChoice {
        match mode {
            ModeArg::Auto => ModeChoice::Auto,
            ModeArg::Exhaustive => ModeChoice::Exhaustive,
            ModeArg::Sampled => ModeChoice::Sampled,
        }
    }
}

#[derive(Args)]
struct FrameCmd {
    #[command(flatten)]
    input: FrameInput,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct FamilyCmd {
    /// Family member spec, like "N=2,4;p=6".
    #[arg(long, value_name = "SPEC", required_unless_present = "preset")]
    family: Option<String>,
    /// Named member: g1 or g2.
    #[arg(long, value_name = "NAME")]
    preset: Option<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct QuotientsCmd {
    #[command(flatten)]
    input: FrameInput,
    /// Smallest block count to report.
    #[arg(long, value_name = "K", default_value_t = 1)]
    min_blocks: usize,
    /// Largest block count to report (default: the vertex count).
    #[arg(long, value_name = "K")]
    max_blocks: Option<usize>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct CheckCoverCmd {
    #[command(flatten)]
    input: FrameInput,
    /// Record wall-clock milliseconds in the output.
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct TermCmd {
    #[command(flatten)]
    input: FrameInput,
    /// Term in prefix text form, e.g. "And(Dia(Var x))(Not(Var x))".
    #[arg(long, value_name = "TERM")]
    expr: String,
    /// Variable binding NAME=V1,V2,... by vertex label (or index when the
    /// frame is unlabeled); NAME= binds the empty set. Repeatable.
    #[arg(long = "var", value_name = "NAME=SET")]
    vars: Vec<String>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct VerifyCmd {
    /// List the lemma catalog and exit.
    #[arg(long)]
    list: bool,
    /// Lemma id from the catalog, e.g. ddd.
    #[arg(long, value_name = "ID", required_unless_present = "list")]
    lemma: Option<String>,
    #[command(flatten)]
    input: FrameInput,
    /// Second family spec, for pair lemmas such as diff.
    #[arg(long, value_name = "SPEC")]
    family_b: Option<String>,
    /// Case generation: auto picks exhaustive when the case space fits.
    #[arg(long, value_enum)]
    mode: Option<ModeArg>,
    /// Seed for sampled runs (defaults to a fixed constant, never the clock).
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Number of random cases for sampled runs.
    #[arg(long, value_name = "N")]
    samples: Option<u64>,
    /// Record wall-clock milliseconds in the report.
    #[arg(long)]
    timing: bool,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct SearchCmd {
    /// Enumerate all connected graphs on exactly this many vertices.
    #[arg(long, value_name = "N", conflicts_with = "input")]
    max_n: Option<usize>,
    /// Read graph6 lines from this file ("-" for standard input).
    #[arg(long, value_name = "PATH")]
    input: Option<PathBuf>,
    /// Worker threads; 0 means all available cores.
    #[arg(long, value_name = "N")]
    jobs: Option<usize>,
    /// Record per-graph wall-clock milliseconds.
    #[arg(long)]
    timing: bool,
}

/// Flat key=value file; unknown keys are rejected so typos surface.
struct FileConfig(HashMap<String, String>);

const CONFIG_KEYS: &[&str] = &["format", "jobs", "mode", "samples", "seed", "timing"];

impl FileConfig {
    fn load(path: Option<&PathBuf>) -> Result<FileConfig, CliError> {
        let mut map = HashMap::new();
        let Some(path) = path else {
            return Ok(FileConfig(map));
        };
        let text = fs::read_to_string(path).map_err(err)?;
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError(format!("{}:{}: expected key=value", path.display(), idx + 1))
            })?;
            let key = key.trim();
            if !CONFIG_KEYS.contains(&key) {
                return Err(CliError(format!(
                    "{}:{}: unknown config key {key:?} (known: {})",
                    path.display(),
                    idx + 1,
                    CONFIG_KEYS.join(", ")
                )));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(FileConfig(map))
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: Display,
    {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw
                .parse::<T>()
                .map(Some)
                .map_err(|e| CliError(format!("config key {key}: {e}"))),
        }
    }

    fn format(&self) -> Result<Option<Format>, CliError> {
        match self.0.get("format").map(String::as_str) {
            None => Ok(None),
            Some("json") => Ok(Some(Format::Json)),
            Some("text") => Ok(Some(Format::Text)),
            Some("dot") => Ok(Some(Format::Dot)),
            Some("graph6") => Ok(Some(Format::Graph6)),
            Some(other) => Err(CliError(format!("config key format: unknown format {other:?}"))),
        }
    }

    fn mode(&self) -> Result<Option<ModeChoice>, CliError> {
        match self.0.get("mode").map(String::as_str) {
            None => Ok(None),
            Some("auto") => Ok(Some(ModeChoice::Auto)),
            Some("exhaustive") => Ok(Some(ModeChoice::Exhaustive)),
            Some("sampled") => Ok(Some(ModeChoice::Sampled)),
            Some(other) => Err(CliError(format!("config key mode: unknown mode {other:?}"))),
        }
    }

    fn timing(&self) -> Result<Option<bool>, CliError> {
        self.parsed::<bool>("timing")
    }
}

/// Buffered writer over stdout or `--out`.
fn open_sink(out: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    Ok(match out {
        Some(path) => Box::new(io::BufWriter::new(fs::File::create(path).map_err(err)?)),
        None => Box::new(io::BufWriter::new(io::stdout())),
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<u8, CliError> {
    let config = FileConfig::load(cli.config.as_ref())?;
    let mut sink = open_sink(cli.out.as_ref())?;
    let code = match cli.command {
        Command::Frame(cmd) => {
            let (frame, spec) = cmd.input.resolve()?;
            let format = resolve_format(cmd.format, &config)?;
            emit_frame(&mut sink, &frame, spec.as_ref(), format, cli.out.as_ref())?
        }
        Command::Family(cmd) => {
            let input = FrameInput {
                family: cmd.family.clone(),
                preset: cmd.preset.clone(),
                ..FrameInput::default()
            };
            let (frame, spec) = input.resolve()?;
            let format = resolve_format(cmd.format, &config)?;
            emit_frame(&mut sink, &frame, spec.as_ref(), format, cli.out.as_ref())?
        }
        Command::Quotients(cmd) => run_quotients(&mut sink, &cmd, &config)?,
        Command::CheckCover(cmd) => run_check_cover(&mut sink, &cmd, &config)?,
        Command::Term(cmd) => run_term(&mut sink, &cmd, &config)?,
        Command::Verify(cmd) => run_verify(&mut sink, &cmd, &config)?,
        Command::Search(cmd) => run_search(&mut sink, &cmd, &config)?,
    };
    sink.flush().map_err(err)?;
    Ok(code)
}

fn resolve_format(flag: Option<Format>, config: &FileConfig) -> Result<Format, CliError> {
    Ok(flag.or(config.format()?).unwrap_or(Format::Json))
}

fn emit_line(sink: &mut dyn Write, line: &str) -> Result<(), CliError> {
    writeln!(sink, "{line}").map_err(err)
}

fn frame_info_json(frame: &Frame, spec: Option<&FamilySpec>) -> serde_json::Value {
    let mut doc = serde_json::json!({
        "n": frame.n(),
        "edges": frame.edge_count(),
        "connected": frame.is_connected(),
        "diameter": frame.diameter(),
    });
    if let Ok(text) = encode_graph6(frame) {
        doc["graph6"] = text.into();
    }
    if let Some(labels) = frame.labels() {
        doc["labels"] = labels.to_vec().into();
    }
    if let Some(spec) = spec {
        doc["family"] = spec.to_string().into();
    }
    doc
}

fn emit_frame(
    sink: &mut dyn Write,
    frame: &Frame,
    spec: Option<&FamilySpec>,
    format: Format,
    out: Option<&PathBuf>,
) -> Result<u8, CliError> {
    match format {
        Format::Json => emit_line(sink, &frame_info_json(frame, spec).to_string())?,
        Format::Text => {
            emit_line(sink, &format!("n: {}", frame.n()))?;
            emit_line(sink, &format!("edges: {}", frame.edge_count()))?;
            emit_line(sink, &format!("connected: {}", frame.is_connected()))?;
            match frame.diameter() {
                Some(d) => emit_line(sink, &format!("diameter: {d}"))?,
                None => emit_line(sink, "diameter: none")?,
            }
            if let Some(spec) = spec {
                emit_line(sink, &format!("family: {spec}"))?;
            }
            if let Some(labels) = frame.labels() {
                emit_line(sink, &format!("labels: {}", labels.join(" ")))?;
            }
        }
        Format::Dot => write!(sink, "{}", frame.to_dot()).map_err(err)?,
        Format::Graph6 => {
            let text = encode_graph6(frame).map_err(err)?;
            emit_line(sink, &text)?;
            // graph6 cannot carry labels; park them in a sidecar next to --out.
            if let (Some(out), Some(labels)) = (out, frame.labels()) {
                let sidecar = format!("{}.labels.json", out.display());
                fs::write(&sidecar, serde_json::to_string(labels).map_err(err)?).map_err(err)?;
            }
        }
    }
    Ok(EXIT_PASS)
}

fn run_quotients(
    sink: &mut dyn Write,
    cmd: &QuotientsCmd,
    config: &FileConfig,
) -> Result<u8, CliError> {
    let (frame, _) = cmd.input.resolve()?;
    let format = resolve_format(cmd.format, config)?;
    let max_blocks = cmd.max_blocks.unwrap_or(frame.n());
    let partitions = enumerate_stable_partitions(&frame, cmd.min_blocks, max_blocks).map_err(err)?;
    let mut rows = Vec::new();
    for partition in &partitions {
        let image = quotient(&frame, partition).map_err(err)?;
        rows.push((partition.to_string(), partition.block_count(), encode_graph6(&image).map_err(err)?));
    }
    match format {
        Format::Text => {
            for (text, blocks, image) in &rows {
                emit_line(sink, &format!("{text}  blocks={blocks}  quotient={image}"))?;
            }
            emit_line(sink, &format!("count: {}", rows.len()))?;
        }
        _ => {
            let doc = serde_json::json!({
                "frame": frame_descriptor(&frame),
                "count": rows.len(),
                "partitions": rows
                    .iter()
                    .map(|(text, blocks, image)| serde_json::json!({
                        "partition": text,
                        "blocks": blocks,
                        "quotient": image,
                    }))
                    .collect::<Vec<_>>(),
            });
            emit_line(sink, &doc.to_string())?;
        }
    }
    Ok(EXIT_PASS)
}

fn run_check_cover(
    sink: &mut dyn Write,
    cmd: &CheckCoverCmd,
    config: &FileConfig,
) -> Result<u8, CliError> {
    let (frame, _) = cmd.input.resolve()?;
    let format = resolve_format(cmd.format, config)?;
    let timing = cmd.timing || config.timing()?.unwrap_or(false);
    let start = std::time::Instant::now();
    let verdict = cover_check(&frame);
    let millis = timing.then(|| start.elapsed().as_millis() as u64);
    let (mut doc, code) = match verdict {
        CoverVerdict::Pass => (serde_json::json!({ "status": "pass" }), EXIT_PASS),
        CoverVerdict::Fail { witness } => {
            let blocks: Vec<serde_json::Value> =
                witness.blocks().iter().map(|b| subset_json(&frame, b)).collect();
            (
                serde_json::json!({
                    "status": "fail",
                    "witness": witness.to_string(),
                    "blocks": blocks,
                }),
                EXIT_FAIL,
            )
        }
        CoverVerdict::NotApplicable { reason } => {
            (serde_json::json!({ "status": "not_applicable", "reason": reason }), 2)
        }
    };
    if let Some(ms) = millis {
        doc["millis"] = ms.into();
    }
    match format {
        Format::Text => {
            let mut line = doc["status"].as_str().unwrap_or("?").to_string();
            if let Some(witness) = doc["witness"].as_str() {
                line.push_str(&format!("  witness={witness}"));
            }
            if let Some(reason) = doc["reason"].as_str() {
                line.push_str(&format!("  reason={reason}"));
            }
            emit_line(sink, &line)?;
        }
        _ => emit_line(sink, &doc.to_string())?,
    }
    Ok(code)
}

fn parse_bindings(frame: &Frame, specs: &[String]) -> Result<HashMap<String, Subset>, CliError> {
    let mut env = HashMap::new();
    for spec in specs {
        let (name, set) = spec
            .split_once('=')
            .ok_or_else(|| CliError(format!("bad --var {spec:?}: expected NAME=V1,V2,...")))?;
        let mut vertices = Vec::new();
        for token in set.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let index = match frame.labels() {
                Some(labels) => labels
                    .iter()
                    .position(|l| l == token)
                    .or_else(|| token.parse::<usize>().ok().filter(|&v| v < frame.n())),
                None => token.parse::<usize>().ok().filter(|&v| v < frame.n()),
            };
            let index = index
                .ok_or_else(|| CliError(format!("unknown vertex {token:?} in --var {name}")))?;
            vertices.push(index);
        }
        env.insert(name.trim().to_string(), Subset::from_indices(frame.n(), vertices));
    }
    Ok(env)
}

fn run_term(sink: &mut dyn Write, cmd: &TermCmd, config: &FileConfig) -> Result<u8, CliError> {
    let (frame, _) = cmd.input.resolve()?;
    let format = resolve_format(cmd.format, config)?;
    let term: Term = cmd.expr.parse().map_err(err)?;
    let env = parse_bindings(&frame, &cmd.vars)?;
    let value = eval_term(&frame, &term, &env).map_err(err)?;
    match format {
        Format::Text => emit_line(sink, &frame.render_subset(&value))?,
        _ => emit_line(
            sink,
            &serde_json::json!({ "result": subset_json(&frame, &value) }).to_string(),
        )?,
    }
    Ok(EXIT_PASS)
}

fn applicability_tag(applicability: Applicability) -> &'static str {
    match applicability {
        Applicability::AnyFrame => "any_frame",
        Applicability::FamilyOnly => "family_only",
        Applicability::Pair => "pair",
    }
}

fn run_verify(sink: &mut dyn Write, cmd: &VerifyCmd, config: &FileConfig) -> Result<u8, CliError> {
    let format = resolve_format(cmd.format, config)?;
    if cmd.list {
        let doc = serde_json::json!({
            "lemmas": list_lemmas()
                .iter()
                .map(|l| serde_json::json!({
                    "id": l.id,
                    "applicability": applicability_tag(l.applicability),
                    "summary": l.summary,
                }))
                .collect::<Vec<_>>(),
        });
        match format {
            Format::Text => {
                for l in list_lemmas() {
                    emit_line(
                        sink,
                        &format!("{:<13} {:<12} {}", l.id, applicability_tag(l.applicability), l.summary),
                    )?;
                }
            }
            _ => emit_line(sink, &doc.to_string())?,
        }
        return Ok(EXIT_PASS);
    }

    let lemma = cmd.lemma.as_deref().expect("clap requires --lemma without --list");
    let opts = VerifyOptions {
        mode: cmd
            .mode
            .map(ModeChoice::from)
            .or(config.mode()?)
            .unwrap_or(ModeChoice::Auto),
        seed: cmd.seed.or(config.parsed("seed")?).unwrap_or(DEFAULT_SEED),
        samples: cmd.samples.or(config.parsed("samples")?).unwrap_or(DEFAULT_SAMPLES),
        timing: cmd.timing || config.timing()?.unwrap_or(false),
    };

    // Pair lemmas take --family/--preset plus --family-b; everything else
    // takes a single frame or family source.
    let report = if let Some(second) = &cmd.family_b {
        let first = cmd.input.family_spec()?.ok_or_else(|| {
            CliError("--family-b needs --family or --preset for the first member".to_string())
        })?;
        let second = second.parse::<FamilySpec>().map_err(err)?;
        warn_ineffective(&second);
        verify_lemma(lemma, Target::Pair(&first, &second), &opts).map_err(err)?
    } else if let Some(spec) = cmd.input.family_spec()? {
        verify_lemma(lemma, Target::Family(&spec), &opts).map_err(err)?
    } else {
        let (frame, _) = cmd.input.resolve()?;
        verify_lemma(lemma, Target::Frame(&frame), &opts).map_err(err)?
    };

    match format {
        Format::Text => {
            let mut line = format!(
                "{} on {}: {} ({} cases)",
                report.lemma,
                report.frame,
                match report.status {
                    Status::Pass => "pass",
                    Status::Fail => "fail",
                },
                report.cases
            );
            if let Some(cx) = &report.counterexample {
                line.push_str(&format!("  counterexample={cx}"));
            }
            emit_line(sink, &line)?;
        }
        _ => emit_line(sink, &serde_json::to_string(&report).map_err(err)?)?,
    }
    Ok(match report.status {
        Status::Pass => EXIT_PASS,
        Status::Fail => EXIT_FAIL,
    })
}

fn run_search(sink: &mut dyn Write, cmd: &SearchCmd, config: &FileConfig) -> Result<u8, CliError> {
    let jobs = cmd.jobs.or(config.parsed("jobs")?).unwrap_or(0);
    let timing = cmd.timing || config.timing()?.unwrap_or(false);

    let mut failure: Option<CliError> = None;
    let summary = {
        let mut write_record = |record: &ktb_core::search::SearchRecord| {
            if failure.is_none() {
                let line = serde_json::to_string(record).expect("records serialize");
                if let Err(e) = writeln!(sink, "{line}") {
                    failure = Some(err(e));
                }
            }
        };
        match (&cmd.max_n, &cmd.input) {
            (Some(n), None) => {
                let stream = enumerate_connected_graphs(*n).map_err(err)?;
                filter_covers(stream, jobs, timing, &mut write_record)
            }
            (None, Some(path)) => {
                let frames = read_graph6_lines(path)?;
                filter_covers(frames, jobs, timing, &mut write_record)
            }
            _ => {
                return Err(CliError("pass exactly one of --max-n or --input".to_string()));
            }
        }
    };
    if let Some(e) = failure {
        return Err(e);
    }
    emit_line(sink, &serde_json::to_string(&summary).map_err(err)?)?;
    Ok(EXIT_PASS)
}

fn read_graph6_lines(path: &PathBuf) -> Result<Vec<Frame>, CliError> {
    let reader: Box<dyn BufRead> = if path.as_os_str() == "-" {
        Box::new(io::BufReader::new(io::stdin()))
    } else {
        Box::new(io::BufReader::new(fs::File::open(path).map_err(err)?))
    };
    let mut frames = Vec::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line.map_err(err)?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let frame = decode_graph6(line)
            .map_err(|e| CliError(format!("line {}: {e}", idx + 1)))?;
        frames.push(frame);
    }
    Ok(frames)
}
