//! Command-line front end. `run` takes the argument list and two writers so
//! the whole thing can be driven from tests.

use std::io::{self, BufRead, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::asymptotics::{compare, estimate, Family};
use crate::bijection::{from_horizontal, to_horizontal, HPath};
use crate::brute::{check_jump_set, run_battery};
use crate::kernel::{analyze, Config};
use crate::limits::{law, LawParam, LimitLaw};
use crate::model::{format_steps, parse_rational, parse_steps, path_statistics, validate_path};
use crate::reproduce;
use crate::sampler::{build_sampler, empirical_law, rng, Kind, RNG_NAME};
use crate::series::{d_series, e_series, f0_series, f_series, m_series, parameter_series, q_series, Param, Series};
use crate::{CatastrophePolicy, Error, JumpSet};

/// Version of every JSON document written by the CLI.
pub const SCHEMA: &str = "catpaths/1";

#[derive(Parser, Debug)]
#[command(name = "catpaths", version, about = "Lattice paths with catastrophes")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args, Debug, Clone)]
struct JumpArgs {
    /// Jump set, e.g. "-1:1,1:1,q=1" or "-2:1/2,1:1,q=1/3,policy=anywhere".
    #[arg(long, default_value = "-1:1,1:1,q=1", allow_hyphen_values = true)]
    jumps: String,
    /// Catastrophe weight, overriding the one in --jumps.
    #[arg(long)]
    q: Option<String>,
    /// `default`, `anywhere` or `exclude=h1;h2`.
    #[arg(long)]
    policy: Option<String>,
}

impl JumpArgs {
    fn resolve(&self) -> crate::Result<JumpSet> {
        let mut js: JumpSet = self.jumps.parse()?;
        if let Some(q) = &self.q {
            js = js.with_q(parse_rational(q)?)?;
        }
        if let Some(p) = &self.policy {
            js = js.with_policy(p.parse::<CatastrophePolicy>()?)?;
        }
        Ok(js)
    }
}

#[derive(Args, Debug, Clone)]
struct AnalysisArgs {
    #[command(flatten)]
    jumps: JumpArgs,
    /// Run singularity analysis on periodic supports too.
    #[arg(long)]
    allow_periodic: bool,
}

impl AnalysisArgs {
    fn config(&self) -> Config {
        let c = Config::from_env();
        if self.allow_periodic {
            c.allowing_periodic()
        } else {
            c
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Slice {
    /// Excursions with catastrophes.
    Excursions,
    /// Meanders with catastrophes.
    Meanders,
    /// Excursions ending with a catastrophe.
    CatEnding,
    /// Excursions without catastrophes.
    PlainExcursions,
    /// Meanders without catastrophes.
    PlainMeanders,
    /// Single catastrophe steps closing a catastrophe-free prefix.
    Catastrophe,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    ToHorizontal,
    FromHorizontal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SampleKind {
    Excursion,
    Meander,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact series coefficients.
    Series {
        #[command(flatten)]
        jumps: JumpArgs,
        /// Truncation order.
        #[arg(long = "N", default_value_t = 20)]
        order: usize,
        #[arg(long, value_enum, default_value_t = Slice::Excursions)]
        slice: Slice,
        /// Print the bivariate series of a parameter instead of a slice.
        #[arg(long)]
        param: Option<String>,
    },
    /// Structural constants and regime.
    Constants {
        #[command(flatten)]
        analysis: AnalysisArgs,
    },
    /// Leading asymptotic term of d_n, e_n or m_n.
    Asymptotics {
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long, default_value = "e")]
        family: String,
        #[arg(long, default_value_t = 100)]
        n: u64,
        /// Also compute the exact coefficient.
        #[arg(long)]
        exact: bool,
    },
    /// Limit law of a parameter.
    Law {
        #[command(flatten)]
        analysis: AnalysisArgs,
        #[arg(long)]
        param: String,
        /// PMF truncation.
        #[arg(long = "K")]
        truncation: Option<usize>,
        /// Shorthand for --format csv.
        #[arg(long)]
        csv: bool,
    },
    /// Uniform random paths, one per line.
    Sample {
        #[command(flatten)]
        jumps: JumpArgs,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SampleKind::Excursion)]
        kind: SampleKind,
        /// Condition meanders on this final altitude.
        #[arg(long)]
        end: Option<usize>,
        /// Where to write the JSON statistics; stderr if absent.
        #[arg(long)]
        stats: Option<std::path::PathBuf>,
    },
    /// Histogram of a parameter over sampled paths.
    EmpiricalLaw {
        #[command(flatten)]
        jumps: JumpArgs,
        #[arg(long)]
        param: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Dyck paths with catastrophes <-> 1-horizontal Dyck paths.
    Biject {
        #[arg(long, value_enum, default_value_t = Direction::ToHorizontal)]
        direction: Direction,
        /// Paths to map; read from stdin, one per line, if absent.
        #[arg(long, allow_hyphen_values = true)]
        path: Vec<String>,
    },
    /// Series against brute-force enumeration.
    OracleCheck {
        /// A single jump set; the whole battery if absent.
        #[arg(long, allow_hyphen_values = true)]
        jumps: Option<String>,
        #[arg(long = "N", default_value_t = 12)]
        order: usize,
    },
    /// Run the acceptance suite.
    ReproducePaper {
        /// Only these criteria.
        #[arg(long)]
        only: Vec<u8>,
    },
}

/// Command failure: exit code and message.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_) | Error::InvalidJumpSet(_) | Error::InvalidArgument(_) | Error::UnknownParam(_) => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        // A closed pipe (`| head`) is not an error.
        if e.kind() == io::ErrorKind::BrokenPipe {
            return Failure(0, String::new());
        }
        Failure(1, e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure(1, e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and runs the command. Returns the
/// exit code: 0 on success, 1 on a failed check or computation, 2 on a
/// usage error.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match dispatch(cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            if !msg.is_empty() {
                let _ = writeln!(err, "error: {msg}");
            }
            code
        }
    }
}

fn envelope(command: &str, result: impl Serialize) -> Value {
    json!({ "schema": SCHEMA, "command": command, "result": result })
}

fn write_json(out: &mut dyn Write, command: &str, result: impl Serialize) -> io::Result<()> {
    serde_json::to_writer_pretty(&mut *out, &envelope(command, result))?;
    writeln!(out)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let format = cli.format;
    match cli.command {
        Command::Series { jumps, order, slice, param } => series(format, &jumps, order, slice, param, out),
        Command::Constants { analysis } => constants(format, &analysis, out),
        Command::Asymptotics { analysis, family, n, exact } => asymptotics(format, &analysis, &family, n, exact, out),
        Command::Law { analysis, param, truncation, csv } => {
            let format = if csv { Format::Csv } else { format };
            limit_law(format, &analysis, &param, truncation, out)
        }
        Command::Sample { jumps, n, count, seed, kind, end, stats } => {
            sample(&jumps, n, count, seed, kind, end, stats, out, err)
        }
        Command::EmpiricalLaw { jumps, param, n, trials, seed } => {
            empirical(format, &jumps, &param, n, trials, seed, out)
        }
        Command::Biject { direction, path } => biject(format, direction, path, out),
        Command::OracleCheck { jumps, order } => oracle(format, jumps, order, out),
        Command::ReproducePaper { only } => reproduce_all(format, only, out),
    }
}

fn series(
    format: Format,
    jumps: &JumpArgs,
    order: usize,
    slice: Slice,
    param: Option<String>,
    out: &mut dyn Write,
) -> Outcome {
    let js = jumps.resolve()?;
    if let Some(p) = param {
        let p: Param = p.parse()?;
        let bs = parameter_series(&js, order, p);
        match format {
            Format::Json => write_json(out, "series", bs.to_json())?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["n", "k", "coeff"])?;
                for n in 0..=order {
                    for (k, c) in bs.row(n).iter().enumerate() {
                        w.write_record([n.to_string(), k.to_string(), c.to_string()])?;
                    }
                }
                w.flush()?;
            }
            Format::Text => {
                for n in 0..=order {
                    let row: Vec<String> = bs.row(n).iter().map(ToString::to_string).collect();
                    writeln!(out, "{n}: {}", row.join(","))?;
                }
            }
        }
        return Ok(0);
    }
    let s: Series = match slice {
        Slice::Excursions => f0_series(&js, order),
        Slice::Meanders => f_series(&js, order),
        Slice::CatEnding => d_series(&js, order),
        Slice::PlainExcursions => e_series(&js, order),
        Slice::PlainMeanders => m_series(&js, order),
        Slice::Catastrophe => q_series(&js, order),
    };
    match format {
        Format::Json => write_json(out, "series", s.to_json())?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["n", "coeff"])?;
            for (n, c) in s.coeffs().iter().enumerate() {
                w.write_record([n.to_string(), c.to_string()])?;
            }
            w.flush()?;
        }
        Format::Text => writeln!(out, "{s}")?,
    }
    Ok(0)
}

fn key_values(format: Format, command: &str, value: Value, out: &mut dyn Write) -> Outcome {
    match format {
        Format::Json => write_json(out, command, &value)?,
        _ => {
            let sep = if format == Format::Csv { "," } else { " = " };
            if format == Format::Csv {
                writeln!(out, "key,value")?;
            }
            if let Value::Object(map) = value {
                for (k, v) in map {
                    let v = match v {
                        Value::String(s) => s,
                        other => other.to_string(),
                    };
                    writeln!(out, "{k}{sep}{v}")?;
                }
            }
        }
    }
    Ok(0)
}

fn constants(format: Format, analysis: &AnalysisArgs, out: &mut dyn Write) -> Outcome {
    let an = analyze(&analysis.jumps.resolve()?, &analysis.config())?;
    let value = serde_json::to_value(&an.report).map_err(|e| Failure(1, e.to_string()))?;
    key_values(format, "constants", value, out)
}

fn asymptotics(
    format: Format,
    analysis: &AnalysisArgs,
    family: &str,
    n: u64,
    exact: bool,
    out: &mut dyn Write,
) -> Outcome {
    let family: Family = family.parse()?;
    let an = analyze(&analysis.jumps.resolve()?, &analysis.config())?;
    let value = if exact {
        serde_json::to_value(compare(&an, family, n)?)
    } else {
        serde_json::to_value(estimate(&an, family, n)?)
    }
    .map_err(|e| Failure(1, e.to_string()))?;
    if format == Format::Json {
        write_json(out, "asymptotics", &value)?;
        return Ok(0);
    }
    let mut flat = serde_json::Map::new();
    let (est, rest) = match value {
        Value::Object(mut m) if m.contains_key("estimate") => {
            let est = m.remove("estimate").unwrap_or_default();
            (est, m)
        }
        other => (other, serde_json::Map::new()),
    };
    if let Value::Object(m) = est {
        flat.extend(m);
    }
    flat.extend(rest);
    key_values(format, "asymptotics", Value::Object(flat), out)
}

fn limit_law(
    format: Format,
    analysis: &AnalysisArgs,
    param: &str,
    truncation: Option<usize>,
    out: &mut dyn Write,
) -> Outcome {
    let param: LawParam = param.parse()?;
    let an = analyze(&analysis.jumps.resolve()?, &analysis.config())?;
    let r = law(&an, param, truncation.unwrap_or(param.default_truncation()))?;
    match format {
        Format::Json => write_json(out, "law", &r)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            match &r.law {
                LimitLaw::Gaussian { mu, sigma2 } => {
                    w.write_record(["param", "value"])?;
                    w.write_record(["mu".to_string(), mu.to_string()])?;
                    w.write_record(["sigma2".to_string(), sigma2.to_string()])?;
                }
                LimitLaw::Rayleigh { theta } => {
                    w.write_record(["param", "value"])?;
                    w.write_record(["theta".to_string(), theta.to_string()])?;
                }
                discrete => {
                    let k = truncation.unwrap_or(param.default_truncation());
                    w.write_record(["k", "probability"])?;
                    for (k, p) in discrete.pmf_values(k).unwrap_or_default().iter().enumerate() {
                        w.write_record([k.to_string(), p.to_string()])?;
                    }
                }
            }
            w.flush()?;
        }
        Format::Text => {
            writeln!(out, "param = {}", r.param)?;
            writeln!(out, "regime = {:?}", r.regime)?;
            writeln!(out, "z = {}", r.z)?;
            writeln!(out, "law = {}", serde_json::to_string(&r.law).map_err(|e| Failure(1, e.to_string()))?)?;
            for (k, v) in &r.constants {
                writeln!(out, "{k} = {v}")?;
            }
            for w in &r.warnings {
                writeln!(out, "warning: {w}")?;
            }
        }
    }
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn sample(
    jumps: &JumpArgs,
    n: usize,
    count: usize,
    seed: u64,
    kind: SampleKind,
    end: Option<usize>,
    stats: Option<std::path::PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let js = jumps.resolve()?;
    let kind = match (kind, end) {
        (SampleKind::Excursion, None) => Kind::Excursion,
        (SampleKind::Meander, None) => Kind::Meander,
        (_, Some(h)) => Kind::EndingAt(h),
    };
    let tables = build_sampler(&js, n, kind);
    let mut r = rng(seed);
    let mut per_path = Vec::with_capacity(count);
    for _ in 0..count {
        let p = tables.sample(&mut r)?;
        writeln!(out, "{}", format_steps(p.steps()))?;
        per_path.push(path_statistics(&p));
    }
    let sidecar = envelope(
        "sample",
        json!({
            "jumps": js.to_string(),
            "n": n,
            "kind": kind,
            "count": count,
            "seed": seed,
            "rng": RNG_NAME,
            "total_weight": tables.total().to_string(),
            "statistics": per_path,
        }),
    );
    let text = serde_json::to_string_pretty(&sidecar).map_err(|e| Failure(1, e.to_string()))?;
    match stats {
        Some(path) => std::fs::write(path, text + "\n")?,
        None => writeln!(err, "{text}")?,
    }
    Ok(0)
}

fn empirical(
    format: Format,
    jumps: &JumpArgs,
    param: &str,
    n: usize,
    trials: usize,
    seed: u64,
    out: &mut dyn Write,
) -> Outcome {
    let param: LawParam = param.parse()?;
    let law = empirical_law(&jumps.resolve()?, n, trials, param, seed)?;
    match format {
        Format::Json => write_json(out, "empirical-law", &law)?,
        _ => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["k", "count", "frequency"])?;
            for (k, c) in &law.histogram {
                let f = *c as f64 / law.observations as f64;
                w.write_record([k.to_string(), c.to_string(), f.to_string()])?;
            }
            w.flush()?;
        }
    }
    Ok(0)
}

fn biject(format: Format, direction: Direction, paths: Vec<String>, out: &mut dyn Write) -> Outcome {
    let inputs = if paths.is_empty() { io::stdin().lock().lines().collect::<io::Result<Vec<_>>>()? } else { paths };
    let mut images = Vec::new();
    for line in inputs.iter().map(|l| l.trim()).filter(|l| !l.is_empty()) {
        let image = match direction {
            Direction::ToHorizontal => {
                let p = validate_path(&JumpSet::dyck(), &parse_steps(line)?)?;
                to_horizontal(&p)?.to_string()
            }
            Direction::FromHorizontal => format_steps(from_horizontal(&line.parse::<HPath>()?)?.steps()),
        };
        images.push((line.to_string(), image));
    }
    match format {
        Format::Json => {
            let pairs: Vec<Value> = images.iter().map(|(a, b)| json!({ "input": a, "image": b })).collect();
            write_json(out, "biject", pairs)?;
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["input", "image"])?;
            for (a, b) in &images {
                w.write_record([a, b])?;
            }
            w.flush()?;
        }
        Format::Text => {
            for (_, b) in &images {
                writeln!(out, "{b}")?;
            }
        }
    }
    Ok(0)
}

fn oracle(format: Format, jumps: Option<String>, order: usize, out: &mut dyn Write) -> Outcome {
    let result = match jumps {
        Some(text) => {
            let js: JumpSet = text.parse()?;
            check_jump_set(&js, order)
                .map(|coefficients| json!({ "jump_sets": 1, "max_n": order, "coefficients": coefficients }))
        }
        None => run_battery(order).map(|r| json!(r)),
    };
    let (code, value) = match result {
        Ok(v) => (0, json!({ "passed": true, "report": v })),
        Err(m) => (1, json!({ "passed": false, "mismatch": m })),
    };
    if format == Format::Json {
        write_json(out, "oracle-check", &value)?;
    } else {
        writeln!(out, "{}", serde_json::to_string(&value).map_err(|e| Failure(1, e.to_string()))?)?;
    }
    Ok(code)
}

fn reproduce_all(format: Format, only: Vec<u8>, out: &mut dyn Write) -> Outcome {
    let ids: Vec<u8> = if only.is_empty() { reproduce::CRITERIA.iter().map(|c| c.0).collect() } else { only };
    let mut results = Vec::new();
    for id in ids {
        let r = reproduce::run(id).ok_or_else(|| Failure(2, format!("no criterion {id}")))?;
        if format == Format::Text {
            writeln!(out, "{}", r.line())?;
            out.flush()?;
        }
        results.push(r);
    }
    let passed = results.iter().filter(|r| r.passed).count();
    match format {
        Format::Json => write_json(out, "reproduce-paper", &results)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(&mut *out);
            w.write_record(["criterion", "name", "passed", "seconds", "details"])?;
            for r in &results {
                w.write_record([
                    r.id.to_string(),
                    r.name.to_string(),
                    r.passed.to_string(),
                    format!("{:.3}", r.seconds),
                    r.details.join("; "),
                ])?;
            }
            w.flush()?;
        }
        Format::Text => writeln!(out, "{passed}/{} criteria passed", results.len())?,
    }
    Ok(if passed == results.len() { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let argv = std::iter::once("catpaths").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn excursion_slice() {
        let (code, out, _) = call(&["series", "--jumps", "-1:1,1:1,q=1", "--N", "7", "--slice", "excursions"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "1,0,1,1,3,5,12,23");
    }

    #[test]
    fn dyck_constants_text() {
        let (code, out, _) = call(&["constants", "--jumps", "-1:1,1:1,q=1"]);
        assert_eq!(code, 0);
        let line = out.lines().find(|l| l.starts_with("rho0 = ")).unwrap();
        let rho0: f64 = line["rho0 = ".len()..].parse().unwrap();
        assert!((rho0 - 0.46557).abs() < 1e-5);
    }

    #[test]
    fn json_is_versioned() {
        let (code, out, _) = call(&["--format", "json", "law", "--param", "final-altitude", "--K", "5"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["schema"], SCHEMA);
        assert_eq!(v["result"]["law"]["values"].as_array().unwrap().len(), 6);
    }

    #[test]
    fn usage_errors_exit_with_two() {
        assert_eq!(call(&["series", "--slice", "sideways"]).0, 2);
        assert_eq!(call(&["law", "--param", "height"]).0, 2);
        assert_eq!(call(&["series", "--jumps", "1:1"]).0, 2);
        assert_eq!(call(&["frobnicate"]).0, 2);
    }

    #[test]
    fn failed_check_exits_with_one() {
        // Periodic support without --allow-periodic: analysis refuses.
        assert_eq!(call(&["law", "--jumps", "-1:4,1:1,q=2", "--param", "catastrophes"]).0, 1);
        assert_eq!(call(&["law", "--jumps", "-1:4,1:1,q=2", "--param", "catastrophes", "--allow-periodic"]).0, 0);
    }

    #[test]
    fn sample_writes_paths_and_stats() {
        let dir = std::env::temp_dir().join(format!("catpaths-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let stats = dir.join("stats.json");
        let args = ["sample", "--n", "12", "--count", "3", "--seed", "42", "--stats", stats.to_str().unwrap()];
        let (code, out, _) = call(&args);
        assert_eq!(code, 0);
        assert_eq!(out.lines().count(), 3);
        assert_eq!(call(&args).1, out);
        let v: Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
        assert_eq!(v["result"]["statistics"].as_array().unwrap().len(), 3);
        std::fs::remove_dir_all(dir).unwrap();
    }

    #[test]
    fn biject_both_ways() {
        let (_, out, _) = call(&["biject", "--path", "1 1 -1 1 1 C3"]);
        assert_eq!(out.trim(), "1 1 -1 0h 0h -1");
        let (_, out, _) = call(&["biject", "--direction", "from-horizontal", "--path", "1 1 -1 0h 0h -1"]);
        assert_eq!(out.trim(), "1 1 -1 1 1 C3");
    }

    #[test]
    fn empirical_law_csv() {
        let (code, out, _) = call(&["empirical-law", "--param", "catastrophes", "--n", "30", "--trials", "50"]);
        assert_eq!(code, 0);
        let mut lines = out.lines();
        assert_eq!(lines.next(), Some("k,count,frequency"));
        let total: u64 = lines.map(|l| l.split(',').nth(1).unwrap().parse::<u64>().unwrap()).sum();
        assert_eq!(total, 50);
    }

    #[test]
    fn oracle_check_single_set() {
        let (code, out, _) = call(&["oracle-check", "--jumps", "-1:1,0:1,1:1,q=1", "--N", "6"]);
        assert_eq!(code, 0, "{out}");
    }
}
