use std::fmt::Write as _;
use std::io::{self, Write};
use std::ops::RangeInclusive;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use k3sys::classifier::{decompose, Decomposition, MemberKind};
use k3sys::verifier::{
    enumerate_v0_classes, hunt_counterexamples, verify_addition_identity, verify_lemma_table,
    verify_pair_inequality, Certificate, NumericalClass, SearchBounds, VerificationReport,
    DEFAULT_HUNT_MASS_BOUND, DEFAULT_HUNT_MAX_D, DEFAULT_HUNT_MAX_N, DEFAULT_HUNT_MAX_POINTS,
    DEFAULT_PAIR_MASS_BOUND, DEFAULT_PAIR_MAX_N, DEFAULT_PAIR_MAX_POINTS, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};
use serde::Serialize;

use crate::literal::{parse_literal, SystemLiteral};
use crate::record::{CsvRecord, OutputRecord};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(
    name = "k3sys",
    version,
    about = "Fat-point linear systems on generic K3 surfaces"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Suppress normal output; the exit status still reports the outcome.
    #[arg(long, global = true)]
    quiet: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dimension of a system, e.g. `dim "L4(3;6)"`.
    Dim { literal: String },
    /// Full classification of a system.
    Classify { literal: String },
    /// Intersection number of two classes, points aligned by position.
    Intersect { left: String, right: String },
    /// Enumerate numerical classes.
    #[command(subcommand)]
    Enumerate(EnumerateCommand),
    /// Run one of the exhaustive or sampled checks.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Scan a window of systems for classifier incoherence.
    Hunt {
        /// Comma-separated `key=value` list; keys n, d, mass, points.
        #[arg(long)]
        bounds: Option<String>,
    },
    /// Classify one literal per line of a file.
    Batch { file: PathBuf },
}

#[derive(Debug, Subcommand)]
enum EnumerateCommand {
    /// Classes with v = 0, t >= 1 and C^2 in a window.
    V0 {
        /// Window `a..b` (inclusive).
        #[arg(long = "self-int", allow_hyphen_values = true)]
        self_int: String,
    },
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// The v = 0 classes with C^2 in [-2, 1].
    LemmaTable,
    /// The pair inequality over all v = 0 pairs within bounds.
    Pairs {
        #[arg(long, default_value_t = DEFAULT_PAIR_MASS_BOUND)]
        mass_bound: i64,
        #[arg(long, default_value_t = DEFAULT_PAIR_MAX_POINTS)]
        max_points: usize,
        #[arg(long, default_value_t = DEFAULT_PAIR_MAX_N)]
        max_n: i64,
    },
    /// The addition identities on seeded random pairs.
    Identity {
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
    },
}

/// Failure of one command, mapped to an exit status.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(io::Error),
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(io::Error::other(e))
    }
}

fn usage(e: impl std::fmt::Display) -> Failure {
    Failure::Usage(e.to_string())
}

struct Ctx<'a> {
    format: Format,
    quiet: bool,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
}

impl Ctx<'_> {
    fn emit(&mut self, text: &str) -> io::Result<()> {
        if !self.quiet {
            self.out.write_all(text.as_bytes())?;
        }
        Ok(())
    }

    fn emit_json<T: Serialize>(&mut self, value: &T) -> Result<(), Failure> {
        let mut line = serde_json::to_string(value)?;
        line.push('\n');
        Ok(self.emit(&line)?)
    }

    fn emit_csv<T: Serialize>(&mut self, rows: &[T]) -> Result<(), Failure> {
        let mut w = csv_writer(Vec::new());
        for row in rows {
            w.serialize(row)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| io::Error::other(e.to_string()))?;
        Ok(self.emit(&String::from_utf8_lossy(&bytes))?)
    }
}

pub fn csv_writer<W: Write>(inner: W) -> csv::Writer<W> {
    csv::WriterBuilder::new()
        .quote_style(csv::QuoteStyle::NonNumeric)
        .from_writer(inner)
}

/// Runs one invocation and returns its exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = target.write_all(rendered.as_bytes());
            return e.exit_code();
        }
    };
    let mut ctx = Ctx {
        format: cli.format,
        quiet: cli.quiet,
        out,
        err,
    };
    let status = match dispatch(&mut ctx, cli.command) {
        Ok(status) => status,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(ctx.err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(ctx.err, "error: {e}");
            EXIT_USAGE
        }
    };
    let _ = ctx.out.flush();
    status
}

fn dispatch(ctx: &mut Ctx<'_>, command: Command) -> Result<i32, Failure> {
    match command {
        Command::Dim { literal } => cmd_dim(ctx, &literal),
        Command::Classify { literal } => cmd_classify(ctx, &literal),
        Command::Intersect { left, right } => cmd_intersect(ctx, &left, &right),
        Command::Enumerate(EnumerateCommand::V0 { self_int }) => cmd_enumerate(ctx, &self_int),
        Command::Verify(VerifyCommand::LemmaTable) => {
            report(ctx, verify_lemma_table().map_err(usage)?)
        }
        Command::Verify(VerifyCommand::Pairs {
            mass_bound,
            max_points,
            max_n,
        }) => {
            let bounds = SearchBounds::pairs(mass_bound, max_points, max_n).map_err(usage)?;
            report(ctx, verify_pair_inequality(&bounds).map_err(usage)?)
        }
        Command::Verify(VerifyCommand::Identity { samples, seed }) => {
            report(ctx, verify_addition_identity(samples, seed).map_err(usage)?)
        }
        Command::Hunt { bounds } => {
            let bounds = parse_hunt_bounds(bounds.as_deref().unwrap_or(""))?;
            report(ctx, hunt_counterexamples(&bounds).map_err(usage)?)
        }
        Command::Batch { file } => cmd_batch(ctx, &file),
    }
}

fn classify_literal(text: &str) -> Result<(SystemLiteral, Decomposition), String> {
    let lit = parse_literal(text).map_err(|e| e.to_string())?;
    let dec = decompose(&lit.spec()).map_err(|e| e.to_string())?;
    Ok((lit, dec))
}

fn dim_line(dec: &Decomposition) -> String {
    let v = dec.virtual_dimension;
    if dec.special {
        let h1 = dec.h1.expect("special systems have a known h1");
        format!("{} (special; v = {v}, h1 = {h1})", dec.dimension)
    } else if dec.member_kind == MemberKind::Empty {
        format!("-1 (empty; v = {v})")
    } else {
        format!("{} (v = {v})", dec.dimension)
    }
}

fn classify_text(dec: &Decomposition) -> String {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    let mut s = String::new();
    let _ = writeln!(s, "{}", dec.spec);
    let _ = writeln!(
        s,
        "  v = {}, e = {}, dim = {}, special = {}",
        dec.virtual_dimension,
        dec.expected_dimension,
        dec.dimension,
        yes_no(dec.special)
    );
    match (dec.h1, dec.h1_lower_bound) {
        (Some(h1), _) => {
            let _ = writeln!(s, "  h1 = {h1}");
        }
        (None, Some(lb)) => {
            let _ = writeln!(s, "  h1 >= {lb}");
        }
        (None, None) => {}
    }
    let _ = writeln!(s, "  member kind: {}", dec.member_kind);
    if let Some(family) = dec.family {
        let _ = writeln!(s, "  family: {family}");
    }
    if !dec.fixed_part.is_empty() {
        let parts: Vec<String> = dec.fixed_part.iter().map(ToString::to_string).collect();
        let _ = writeln!(s, "  fixed part: {}", parts.join(" + "));
    }
    if let Some(free) = &dec.free_part {
        let _ = writeln!(s, "  free part: {free}");
    }
    let _ = writeln!(s, "  conjectural: {}", yes_no(dec.conjectural));
    s
}

fn emit_records(
    ctx: &mut Ctx<'_>,
    decs: &[Decomposition],
    text: impl Fn(&Decomposition) -> String,
) -> Result<(), Failure> {
    let records: Vec<OutputRecord> = decs.iter().map(OutputRecord::from).collect();
    match ctx.format {
        Format::Text => {
            for dec in decs {
                let mut t = text(dec);
                if !t.ends_with('\n') {
                    t.push('\n');
                }
                ctx.emit(&t)?;
            }
        }
        Format::Json => {
            for r in &records {
                ctx.emit_json(r)?;
            }
        }
        Format::Csv => {
            let rows: Vec<CsvRecord> = records.iter().map(CsvRecord::from).collect();
            ctx.emit_csv(&rows)?;
        }
    }
    Ok(())
}

fn cmd_dim(ctx: &mut Ctx<'_>, text: &str) -> Result<i32, Failure> {
    let (_, dec) = classify_literal(text).map_err(Failure::Usage)?;
    emit_records(ctx, &[dec], dim_line)?;
    Ok(EXIT_OK)
}

fn cmd_classify(ctx: &mut Ctx<'_>, text: &str) -> Result<i32, Failure> {
    let (_, dec) = classify_literal(text).map_err(Failure::Usage)?;
    emit_records(ctx, &[dec], classify_text)?;
    Ok(EXIT_OK)
}

#[derive(Serialize)]
struct IntersectRecord {
    left: String,
    right: String,
    intersection: i64,
}

fn cmd_intersect(ctx: &mut Ctx<'_>, left: &str, right: &str) -> Result<i32, Failure> {
    let a = parse_literal(left).map_err(|e| usage(format!("left: {e}")))?;
    let b = parse_literal(right).map_err(|e| usage(format!("right: {e}")))?;
    let value = a.raw_class().intersect(&b.raw_class()).map_err(usage)?;
    let rec = IntersectRecord {
        left: a.raw_class().to_string(),
        right: b.raw_class().to_string(),
        intersection: value,
    };
    match ctx.format {
        Format::Text => ctx.emit(&format!("{value}\n"))?,
        Format::Json => ctx.emit_json(&rec)?,
        Format::Csv => ctx.emit_csv(&[rec])?,
    }
    Ok(EXIT_OK)
}

/// Parses `a..b` or `a..=b`, both inclusive.
pub fn parse_window(text: &str) -> Result<RangeInclusive<i64>, String> {
    let (lo, hi) = text
        .split_once("..")
        .ok_or_else(|| format!("expected a window like -2..1, got {text:?}"))?;
    let hi = hi.strip_prefix('=').unwrap_or(hi);
    let parse = |s: &str| {
        s.trim()
            .parse::<i64>()
            .map_err(|_| format!("bad window bound {s:?} in {text:?}"))
    };
    Ok(parse(lo)?..=parse(hi)?)
}

#[derive(Serialize)]
struct EnumeratedRow {
    self_intersection: i64,
    n: i64,
    t: i64,
    mults: String,
    v: i64,
    system: String,
}

fn cmd_enumerate(ctx: &mut Ctx<'_>, window: &str) -> Result<i32, Failure> {
    let window = parse_window(window).map_err(Failure::Usage)?;
    let classes: Vec<NumericalClass> = enumerate_v0_classes(window).map_err(usage)?;
    match ctx.format {
        Format::Text => {
            let mut s = String::new();
            for c in &classes {
                let _ = writeln!(s, "C^2 = {:>3}  {}", c.self_intersection, c.spec());
            }
            let _ = writeln!(s, "{} classes", classes.len());
            ctx.emit(&s)?;
        }
        Format::Json => ctx.emit_json(&classes)?,
        Format::Csv => {
            let rows: Vec<EnumeratedRow> = classes
                .iter()
                .map(|c| EnumeratedRow {
                    self_intersection: c.self_intersection,
                    n: c.n,
                    t: c.t,
                    mults: k3sys::classifier::mults_literal(&c.mults),
                    v: c.v,
                    system: c.spec().to_string(),
                })
                .collect();
            if rows.is_empty() {
                ctx.emit("self_intersection,n,t,mults,v,system\n")?;
            } else {
                ctx.emit_csv(&rows)?;
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `n=10,d=6,mass=60,points=6`; missing keys keep their defaults.
fn parse_hunt_bounds(text: &str) -> Result<SearchBounds, Failure> {
    let (mut n, mut d, mut mass) = (
        DEFAULT_HUNT_MAX_N,
        DEFAULT_HUNT_MAX_D,
        DEFAULT_HUNT_MASS_BOUND,
    );
    let mut points = DEFAULT_HUNT_MAX_POINTS as i64;
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| usage(format!("bounds entry {item:?} is not key=value")))?;
        let value: i64 = value
            .trim()
            .parse()
            .map_err(|_| usage(format!("bounds value for {key:?} is not an integer")))?;
        match key.trim() {
            "n" => n = value,
            "d" => d = value,
            "mass" => mass = value,
            "points" => points = value,
            other => {
                return Err(usage(format!(
                    "unknown bounds key {other:?} (use n, d, mass, points)"
                )))
            }
        }
    }
    let points = usize::try_from(points).map_err(|_| usage("points must be non-negative"))?;
    SearchBounds::hunt(n, d, mass, points).map_err(usage)
}

#[derive(Serialize)]
struct ReportSummary<'a> {
    check: &'a str,
    passed: bool,
    checked_count: u64,
    violations: usize,
    expected_exceptions: usize,
    elapsed_ms: u128,
}

fn certificate_line(c: &Certificate) -> String {
    let kind = serde_json::to_value(c.kind)
        .ok()
        .and_then(|v| v.as_str().map(str::to_owned))
        .unwrap_or_default();
    let classes: Vec<String> = c.classes.iter().map(ToString::to_string).collect();
    let values: Vec<String> = c
        .values
        .iter()
        .map(|m| format!("{} = {}", m.quantity, m.value))
        .collect();
    let mut line = format!("  [{kind}] {}", classes.join(", "));
    if !values.is_empty() {
        let _ = write!(line, "  ({})", values.join(", "));
    }
    if !c.note.is_empty() {
        let _ = write!(line, "  {}", c.note);
    }
    line
}

fn report(ctx: &mut Ctx<'_>, r: VerificationReport) -> Result<i32, Failure> {
    match ctx.format {
        Format::Text => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "{}: {} (checked {}, violations {}, expected exceptions {}, {} ms)",
                r.check,
                if r.passed { "PASS" } else { "FAIL" },
                r.checked_count,
                r.violations.len(),
                r.expected_exceptions_found.len(),
                r.elapsed.as_millis()
            );
            for c in r
                .violations
                .iter()
                .chain(&r.expected_exceptions_found)
                .chain(&r.findings)
            {
                let _ = writeln!(s, "{}", certificate_line(c));
            }
            ctx.emit(&s)?;
        }
        Format::Json => ctx.emit_json(&r)?,
        Format::Csv => ctx.emit_csv(&[ReportSummary {
            check: &r.check,
            passed: r.passed,
            checked_count: r.checked_count,
            violations: r.violations.len(),
            expected_exceptions: r.expected_exceptions_found.len(),
            elapsed_ms: r.elapsed.as_millis(),
        }])?,
    }
    if !r.passed {
        for c in &r.violations {
            let _ = writeln!(
                ctx.err,
                "violation:{}",
                certificate_line(c).trim_start_matches(' ')
            );
        }
    }
    Ok(if r.passed { EXIT_OK } else { EXIT_VIOLATION })
}

fn batch_line(dec: &Decomposition) -> String {
    format!("{}\t{}\t{}", dec.spec, dim_line(dec), dec.member_kind)
}

fn cmd_batch(ctx: &mut Ctx<'_>, path: &std::path::Path) -> Result<i32, Failure> {
    let content = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    let mut decs = Vec::new();
    let mut bad = 0usize;
    for (k, line) in content.lines().enumerate() {
        let body = line
            .split_once('#')
            .map_or(line, |(before, _)| before)
            .trim();
        if body.is_empty() {
            continue;
        }
        match classify_literal(body) {
            Ok((_, dec)) => decs.push(dec),
            Err(msg) => {
                bad += 1;
                writeln!(ctx.err, "line {}: {msg}", k + 1)?;
            }
        }
    }
    emit_records(ctx, &decs, batch_line)?;
    Ok(if bad == 0 { EXIT_OK } else { EXIT_USAGE })
}
