//! Command line front end. Each subcommand parses its flags, calls one
//! library entry point and renders the result; verdict logic stays in the
//! library modules.
//!
//! Exit codes: 0 for success, 1 for domain failures (an infeasible point
//! or demand, a scheme that fails to parse, validate or decode, a missing
//! file), 2 for usage errors (unknown flags, malformed values).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bounds::{
    full_region, region_to_csv, region_to_json, region_to_text, restrict_private, Region,
};
use crate::core::{format_rational, parse_rational, DofPoint, Rat, UserSubset};
use crate::engine::{simulate_with, Mode, SimReport};
use crate::polytope::{
    contains, extension_feasibility, maximize, remove_redundant, slice, vertices, ExtensionVerdict,
    PolytopeError, ResidualDemand,
};
use crate::rates::{dof_slope, RateReport};
use crate::schemedsl::{builtin, builtin_scheme, parse_scheme, validate, Scheme, BUILTIN_NAMES};

#[derive(Parser)]
#[command(
    name = "doflab",
    version,
    about = "Degrees-of-freedom outer bounds and linear scheme verification \
             for broadcast channels with mixed CSIT"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
struct RegionArgs {
    /// Number of receivers
    #[arg(long, default_value_t = 3)]
    users: u8,

    /// How many leading receivers feed back perfect CSIT
    #[arg(long, default_value_t = 1)]
    perfect: u8,

    /// Keep only the private-message variables
    #[arg(long)]
    private: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Print the outer-bound region, optionally sliced or as vertices
    Bounds {
        #[command(flatten)]
        region: RegionArgs,

        /// Pin variables before printing, e.g. d_1=1 or d_1=1,d_23=0
        #[arg(long, value_delimiter = ',')]
        slice: Vec<String>,

        /// Enumerate vertices instead of inequalities
        #[arg(long)]
        vertices: bool,

        /// Drop inequalities implied by the rest
        #[arg(long)]
        reduce: bool,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Test whether a DoF point satisfies the outer bound
    Check {
        #[command(flatten)]
        region: RegionArgs,

        /// Coordinates in variable order, e.g. 1,1/2,1/2
        #[arg(long)]
        point: String,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Maximize a weighted sum of DoF over the outer bound
    Maximize {
        #[command(flatten)]
        region: RegionArgs,

        /// Objective weights in variable order, e.g. 1,1,1
        #[arg(long)]
        weights: String,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Test whether a residual stream demand fits a slot budget
    Feas {
        /// Number of receivers
        #[arg(long, default_value_t = 3)]
        users: u8,

        /// How many leading receivers feed back perfect CSIT
        #[arg(long, default_value_t = 1)]
        perfect: u8,

        /// Demanded stream counts, e.g. d_1=3,d_12=1,d_23=2
        #[arg(long)]
        residual: String,

        /// Slot budget the demand must fit into
        #[arg(long)]
        slots: u64,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Parse a scheme and print its shape
    Parse {
        /// Scheme file or builtin name
        #[arg(value_name = "FILE|BUILTIN")]
        scheme: String,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Check a scheme against its CSIT grid and antenna budget
    Validate {
        /// Scheme file or builtin name
        #[arg(value_name = "FILE|BUILTIN")]
        scheme: String,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Decode a scheme over random channel draws
    Sim {
        /// Scheme file or builtin name
        #[arg(value_name = "FILE|BUILTIN")]
        scheme: String,

        /// Channel realizations to try
        #[arg(long, default_value_t = 100)]
        trials: u64,

        /// Seed for the channel draws
        #[arg(long, env = "DOFLAB_SEED", default_value_t = 0)]
        seed: u64,

        /// Scalar mode: field, rational or float
        #[arg(long, default_value = "field")]
        mode: String,

        /// Worker threads for the trial loop
        #[arg(long, default_value_t = 1)]
        threads: usize,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Estimate per-receiver DoF as rate slopes between two SNR points
    Rate {
        /// Scheme file or builtin name
        #[arg(value_name = "FILE|BUILTIN")]
        scheme: String,

        /// Seed for the channel draw
        #[arg(long, env = "DOFLAB_SEED", default_value_t = 0)]
        seed: u64,

        /// Two SNR points in dB, comma separated
        #[arg(long = "snr-db", default_value = "60,100")]
        snr_db: String,

        /// Output format
        #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
        format: OutputFormat,
    },

    /// Show the bundled schemes
    Builtin {
        /// Bundled scheme name; omit to list all of them
        #[arg(value_name = "NAME")]
        name: Option<String>,

        /// Print the scheme source instead of a summary
        #[arg(long)]
        emit: bool,
    },
}

#[derive(Debug)]
struct Output {
    text: String,
    failed: bool,
}

impl Output {
    fn ok(text: String) -> Output {
        Output {
            text,
            failed: false,
        }
    }

    fn verdict(text: String, ok: bool) -> Output {
        Output { text, failed: !ok }
    }
}

#[derive(Debug)]
enum Failure {
    Domain(String),
    Usage(String),
}

fn domain(err: impl std::fmt::Display) -> Failure {
    Failure::Domain(err.to_string())
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

/// Runs the command line and returns the process exit code.
pub fn run(args: &[String]) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            print!("{}", out.text);
            i32::from(out.failed)
        }
        Err(Failure::Domain(msg)) => {
            eprintln!("error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
    }
}

fn execute(command: &Command) -> Result<Output, Failure> {
    match command {
        Command::Bounds {
            region,
            slice: fixes,
            vertices: want_vertices,
            reduce,
            format,
        } => cmd_bounds(region, fixes, *want_vertices, *reduce, *format),
        Command::Check {
            region,
            point,
            format,
        } => cmd_check(region, point, *format),
        Command::Maximize {
            region,
            weights,
            format,
        } => cmd_maximize(region, weights, *format),
        Command::Feas {
            users,
            perfect,
            residual,
            slots,
            format,
        } => cmd_feas(*users, *perfect, residual, *slots, *format),
        Command::Parse { scheme, format } => cmd_parse(scheme, *format),
        Command::Validate { scheme, format } => cmd_validate(scheme, *format),
        Command::Sim {
            scheme,
            trials,
            seed,
            mode,
            threads,
            format,
        } => cmd_sim(scheme, *trials, *seed, mode, *threads, *format),
        Command::Rate {
            scheme,
            seed,
            snr_db,
            format,
        } => cmd_rate(scheme, *seed, snr_db, *format),
        Command::Builtin { name, emit } => cmd_builtin(name.as_deref(), *emit),
    }
}

fn build_region(args: &RegionArgs) -> Result<Region, Failure> {
    let region = full_region(args.users, args.perfect).map_err(|e| usage(e.to_string()))?;
    if args.private {
        restrict_private(&region).map_err(|e| usage(e.to_string()))
    } else {
        Ok(region)
    }
}

fn json_line(value: serde_json::Value) -> String {
    let mut text = serde_json::to_string_pretty(&value).expect("serializable value");
    text.push('\n');
    text
}

fn label_list(region: &Region) -> String {
    let labels: Vec<String> = region.variables().iter().map(|s| s.label()).collect();
    labels.join(", ")
}

fn no_csv(format: OutputFormat) -> Result<(), Failure> {
    match format {
        OutputFormat::Csv => Err(usage("csv output is only available for bounds")),
        _ => Ok(()),
    }
}

fn parse_fixes(entries: &[String]) -> Result<BTreeMap<UserSubset, Rat>, Failure> {
    let mut fixes = BTreeMap::new();
    for entry in entries {
        let (label, value) = entry
            .split_once('=')
            .ok_or_else(|| usage(format!("slice entry {entry:?} is not label=value")))?;
        let subset = UserSubset::parse_label(label.trim()).map_err(|e| usage(e.to_string()))?;
        let value = parse_rational(value.trim()).map_err(|e| usage(e.to_string()))?;
        if fixes.insert(subset, value).is_some() {
            return Err(usage(format!("duplicate slice entry {:?}", label.trim())));
        }
    }
    Ok(fixes)
}

fn parse_coords(region: &Region, text: &str, what: &str) -> Result<Vec<Rat>, Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != region.variables().len() {
        return Err(usage(format!(
            "{what} has {} coordinates but the region's variables are {}",
            parts.len(),
            label_list(region)
        )));
    }
    parts
        .into_iter()
        .map(|p| parse_rational(p).map_err(|e| usage(e.to_string())))
        .collect()
}

fn cmd_bounds(
    args: &RegionArgs,
    fixes: &[String],
    want_vertices: bool,
    reduce: bool,
    format: OutputFormat,
) -> Result<Output, Failure> {
    let mut region = build_region(args)?;
    if !fixes.is_empty() {
        let fixes = parse_fixes(fixes)?;
        region = slice(&region, &fixes).map_err(|e| match e {
            PolytopeError::UnknownVariable(_) => usage(e.to_string()),
            other => domain(other),
        })?;
    }
    if reduce {
        region = remove_redundant(&region).map_err(domain)?;
    }
    if want_vertices {
        let verts = vertices(&region).map_err(domain)?;
        return Ok(Output::ok(render_vertices(&region, &verts, format)));
    }
    Ok(Output::ok(match format {
        OutputFormat::Text => region_to_text(&region),
        OutputFormat::Json => json_line(region_to_json(&region)),
        OutputFormat::Csv => region_to_csv(&region),
    }))
}

fn render_vertices(region: &Region, verts: &[Vec<Rat>], format: OutputFormat) -> String {
    let labels: Vec<String> = region.variables().iter().map(|s| s.label()).collect();
    let rows: Vec<Vec<String>> = verts
        .iter()
        .map(|v| v.iter().map(format_rational).collect())
        .collect();
    match format {
        OutputFormat::Text => {
            let mut out = String::new();
            for row in &rows {
                let _ = writeln!(out, "({})", row.join(", "));
            }
            out
        }
        OutputFormat::Json => json_line(serde_json::json!({
            "variables": labels,
            "vertices": rows,
        })),
        OutputFormat::Csv => {
            let mut out = labels.join(",");
            out.push('\n');
            for row in &rows {
                out.push_str(&row.join(","));
                out.push('\n');
            }
            out
        }
    }
}

fn cmd_check(args: &RegionArgs, point: &str, format: OutputFormat) -> Result<Output, Failure> {
    no_csv(format)?;
    let region = build_region(args)?;
    let coords = parse_coords(&region, point, "point")?;
    let mut point = DofPoint::new(region.k());
    for (subset, value) in region.variables().iter().zip(coords) {
        point.set(*subset, value).map_err(|e| usage(e.to_string()))?;
    }
    let verdict = contains(&region, &point).map_err(domain)?;
    let row = |i: &usize| region.inequalities()[*i].to_string();
    let tight: Vec<String> = verdict.tight.iter().map(row).collect();
    let violated: Vec<String> = verdict.violated.iter().map(row).collect();
    let text = if format == OutputFormat::Json {
        json_line(serde_json::json!({
            "feasible": verdict.feasible,
            "tight": tight,
            "violated": violated,
        }))
    } else {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{}",
            if verdict.feasible {
                "feasible"
            } else {
                "infeasible"
            }
        );
        for t in &tight {
            let _ = writeln!(out, "tight: {t}");
        }
        for v in &violated {
            let _ = writeln!(out, "violated: {v}");
        }
        out
    };
    Ok(Output::verdict(text, verdict.feasible))
}

fn cmd_maximize(args: &RegionArgs, weights: &str, format: OutputFormat) -> Result<Output, Failure> {
    no_csv(format)?;
    let region = build_region(args)?;
    let weights = parse_coords(&region, weights, "weights")?;
    let (value, argpoint) = maximize(&region, &weights).map_err(domain)?;
    let coords: Vec<String> = argpoint.iter().map(format_rational).collect();
    let text = if format == OutputFormat::Json {
        json_line(serde_json::json!({
            "value": format_rational(&value),
            "variables": region.variables().iter().map(|s| s.label()).collect::<Vec<_>>(),
            "argpoint": coords,
        }))
    } else {
        let mut out = String::new();
        let _ = writeln!(out, "value = {}", format_rational(&value));
        for (subset, coord) in region.variables().iter().zip(&coords) {
            let _ = writeln!(out, "{} = {}", subset.label(), coord);
        }
        out
    };
    Ok(Output::ok(text))
}

fn parse_residual(text: &str) -> Result<BTreeMap<UserSubset, u64>, Failure> {
    let mut cardinalities = BTreeMap::new();
    for entry in text.split(',') {
        let entry = entry.trim();
        let (label, count) = entry
            .split_once('=')
            .ok_or_else(|| usage(format!("residual entry {entry:?} is not label=count")))?;
        let subset = UserSubset::parse_label(label.trim()).map_err(|e| usage(e.to_string()))?;
        let count: u64 = count
            .trim()
            .parse()
            .map_err(|_| usage(format!("residual entry {entry:?} needs an integer count")))?;
        if cardinalities.insert(subset, count).is_some() {
            return Err(usage(format!("duplicate residual entry {:?}", label.trim())));
        }
    }
    Ok(cardinalities)
}

fn cmd_feas(
    users: u8,
    perfect: u8,
    residual: &str,
    slots: u64,
    format: OutputFormat,
) -> Result<Output, Failure> {
    no_csv(format)?;
    let demand = ResidualDemand {
        cardinalities: parse_residual(residual)?,
        slots,
    };
    let verdict =
        extension_feasibility(users, perfect, &demand).map_err(|e| usage(e.to_string()))?;
    Ok(Output::verdict(
        render_feas(&verdict, format),
        verdict.feasible,
    ))
}

fn render_feas(verdict: &ExtensionVerdict, format: OutputFormat) -> String {
    if format == OutputFormat::Json {
        let rows: Vec<_> = verdict
            .rows
            .iter()
            .map(|row| {
                serde_json::json!({
                    "inequality": row.inequality.to_string(),
                    "lhs": format_rational(&row.lhs),
                    "tight": row.tight,
                    "violated": row.violated,
                })
            })
            .collect();
        return json_line(serde_json::json!({
            "feasible": verdict.feasible,
            "slots": verdict.slots,
            "rows": rows,
        }));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{} over {} slots",
        if verdict.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        verdict.slots
    );
    for row in &verdict.rows {
        if row.violated {
            let _ = writeln!(
                out,
                "violated: {} needs {} slots",
                row.inequality,
                format_rational(&row.lhs)
            );
        } else if row.tight {
            let _ = writeln!(out, "tight: {}", row.inequality);
        }
    }
    out
}

fn load_scheme(source: &str) -> Result<Scheme, Failure> {
    if let Some(scheme) = builtin_scheme(source) {
        return Ok(scheme);
    }
    let text =
        fs::read_to_string(source).map_err(|e| Failure::Domain(format!("cannot read {source}: {e}")))?;
    parse_scheme(&text).map_err(|e| Failure::Domain(format!("{source}: {e}")))
}

enum Loaded {
    Scheme(Scheme),
    ParseFailure(String),
}

/// Like [`load_scheme`], but keeps a parse failure as a reportable verdict
/// instead of an error, for the commands whose subject is the parse itself.
fn load_for_report(source: &str) -> Result<Loaded, Failure> {
    if let Some(scheme) = builtin_scheme(source) {
        return Ok(Loaded::Scheme(scheme));
    }
    let text =
        fs::read_to_string(source).map_err(|e| Failure::Domain(format!("cannot read {source}: {e}")))?;
    Ok(match parse_scheme(&text) {
        Ok(scheme) => Loaded::Scheme(scheme),
        Err(err) => Loaded::ParseFailure(err.to_string()),
    })
}

fn parse_failure_output(message: &str, format: OutputFormat) -> Output {
    let text = if format == OutputFormat::Json {
        json_line(serde_json::json!({ "ok": false, "error": message }))
    } else {
        format!("{message}\n")
    };
    Output {
        text,
        failed: true,
    }
}

fn render_scheme_summary(scheme: &Scheme, format: OutputFormat) -> String {
    let symbols = scheme.symbols_per_receiver();
    let streams: Vec<usize> = scheme.schedule.iter().map(Vec::len).collect();
    if format == OutputFormat::Json {
        return json_line(serde_json::json!({
            "ok": true,
            "name": scheme.name,
            "users": scheme.users,
            "antennas": scheme.antennas,
            "slots": scheme.slots,
            "symbols_per_receiver": symbols,
            "streams_per_slot": streams,
        }));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scheme {:?}: users {}, antennas {}, slots {}",
        scheme.name, scheme.users, scheme.antennas, scheme.slots
    );
    let per: Vec<String> = symbols
        .iter()
        .enumerate()
        .map(|(r, n)| format!("R{} {}", r + 1, n))
        .collect();
    let _ = writeln!(out, "symbols: {}", per.join(", "));
    let counts: Vec<String> = streams.iter().map(usize::to_string).collect();
    let _ = writeln!(out, "streams per slot: {}", counts.join(" "));
    out
}

fn cmd_parse(source: &str, format: OutputFormat) -> Result<Output, Failure> {
    no_csv(format)?;
    Ok(match load_for_report(source)? {
        Loaded::Scheme(scheme) => Output::ok(render_scheme_summary(&scheme, format)),
        Loaded::ParseFailure(message) => parse_failure_output(&message, format),
    })
}

fn cmd_validate(source: &str, format: OutputFormat) -> Result<Output, Failure> {
    no_csv(format)?;
    let scheme = match load_for_report(source)? {
        Loaded::Scheme(scheme) => scheme,
        Loaded::ParseFailure(message) => return Ok(parse_failure_output(&message, format)),
    };
    let report = validate(&scheme);
    let text = if format == OutputFormat::Json {
        let issues: Vec<_> = report
            .issues
            .iter()
            .map(|issue| {
                serde_json::json!({
                    "slot": issue.slot,
                    "kind": issue.kind.as_str(),
                    "detail": issue.detail,
                })
            })
            .collect();
        json_line(serde_json::json!({ "ok": report.ok, "issues": issues }))
    } else if report.ok {
        "ok\n".to_string()
    } else {
        let mut out = String::new();
        for issue in &report.issues {
            let _ = writeln!(out, "{issue}");
        }
        out
    };
    Ok(Output::verdict(text, report.ok))
}

fn dof_point_text(point: &DofPoint) -> String {
    let parts: Vec<String> = point
        .entries()
        .map(|(s, v)| format!("{} = {}", s.label(), format_rational(v)))
        .collect();
    parts.join(", ")
}

fn dof_point_json(point: &DofPoint) -> serde_json::Value {
    serde_json::json!({
        "variables": point.entries().map(|(s, _)| s.label()).collect::<Vec<_>>(),
        "values": point.entries().map(|(_, v)| format_rational(v)).collect::<Vec<_>>(),
    })
}

fn cmd_sim(
    source: &str,
    trials: u64,
    seed: u64,
    mode: &str,
    threads: usize,
    format: OutputFormat,
) -> Result<Output, Failure> {
    no_csv(format)?;
    if trials == 0 {
        return Err(usage("--trials must be at least 1"));
    }
    if threads == 0 {
        return Err(usage("--threads must be at least 1"));
    }
    let mode: Mode = mode.parse().map_err(|e: crate::engine::EngineError| {
        usage(e.to_string())
    })?;
    let scheme = load_scheme(source)?;
    let report = simulate_with(&scheme, trials, seed, mode, threads).map_err(domain)?;
    let all_decoded = report.full_successes == report.trials;
    Ok(Output::verdict(render_sim(&report, format), all_decoded))
}

fn render_sim(report: &SimReport, format: OutputFormat) -> String {
    if format == OutputFormat::Json {
        let receivers: Vec<_> = report
            .receiver_successes
            .iter()
            .zip(&report.first_trial.receivers)
            .map(|(successes, rd)| {
                serde_json::json!({
                    "rx": rd.rx,
                    "successes": successes,
                    "rank_full": rd.rank_full,
                    "rank_int": rd.rank_int,
                    "desired": rd.desired,
                })
            })
            .collect();
        return json_line(serde_json::json!({
            "scheme": report.scheme,
            "mode": report.mode.as_str(),
            "seed": report.seed,
            "trials": report.trials,
            "full_successes": report.full_successes,
            "receivers": receivers,
            "achieved": report.achieved.as_ref().map(dof_point_json),
        }));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scheme {:?} mode {} seed {} trials {}",
        report.scheme, report.mode, report.seed, report.trials
    );
    for (successes, rd) in report.receiver_successes.iter().zip(&report.first_trial.receivers) {
        let _ = writeln!(
            out,
            "R{}: {}/{} decoded, first trial rank {} over interference {} for {} symbols",
            rd.rx, successes, report.trials, rd.rank_full, rd.rank_int, rd.desired
        );
    }
    match &report.achieved {
        Some(point) => {
            let _ = writeln!(out, "achieved: {}", dof_point_text(point));
        }
        None => {
            let _ = writeln!(
                out,
                "no achieved point: {}/{} trials decoded everywhere",
                report.full_successes, report.trials
            );
        }
    }
    out
}

fn parse_snr(text: &str) -> Result<(f64, f64), Failure> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 2 {
        return Err(usage(format!("--snr-db wants two values, got {text:?}")));
    }
    let mut points = [0.0; 2];
    for (slot, part) in points.iter_mut().zip(&parts) {
        *slot = part
            .parse()
            .map_err(|_| usage(format!("bad SNR value {part:?}")))?;
    }
    Ok((points[0], points[1]))
}

fn cmd_rate(source: &str, seed: u64, snr_db: &str, format: OutputFormat) -> Result<Output, Failure> {
    no_csv(format)?;
    let snr_db = parse_snr(snr_db)?;
    let scheme = load_scheme(source)?;
    let report = dof_slope(&scheme, seed, snr_db).map_err(domain)?;
    Ok(Output::ok(render_rate(&report, format)))
}

fn render_rate(report: &RateReport, format: OutputFormat) -> String {
    if format == OutputFormat::Json {
        let receivers: Vec<_> = report
            .receivers
            .iter()
            .map(|r| {
                serde_json::json!({
                    "rx": r.rx,
                    "bits": [r.bits.0, r.bits.1],
                    "slope": r.slope,
                    "rank_deficient": r.rank_deficient,
                })
            })
            .collect();
        return json_line(serde_json::json!({
            "scheme": report.scheme,
            "seed": report.seed,
            "snr_db": [report.snr_db.0, report.snr_db.1],
            "receivers": receivers,
        }));
    }
    let mut out = String::new();
    let _ = writeln!(
        out,
        "scheme {:?} seed {} snr {} dB to {} dB",
        report.scheme, report.seed, report.snr_db.0, report.snr_db.1
    );
    for r in &report.receivers {
        let flag = if r.rank_deficient {
            " (rank deficient)"
        } else {
            ""
        };
        let _ = writeln!(
            out,
            "R{}: slope {:.4}, bits {:.2} to {:.2}{}",
            r.rx, r.slope, r.bits.0, r.bits.1, flag
        );
    }
    out
}

fn cmd_builtin(name: Option<&str>, emit: bool) -> Result<Output, Failure> {
    let Some(name) = name else {
        let mut out = String::new();
        for n in BUILTIN_NAMES {
            let _ = writeln!(out, "{n}");
        }
        return Ok(Output::ok(out));
    };
    let Some(source) = builtin(name) else {
        return Err(Failure::Domain(format!(
            "no builtin scheme named {name:?}; have {}",
            BUILTIN_NAMES.join(", ")
        )));
    };
    if emit {
        return Ok(Output::ok(source.to_string()));
    }
    let scheme = builtin_scheme(name).expect("bundled scheme parses");
    Ok(Output::ok(render_scheme_summary(&scheme, OutputFormat::Text)))
}
