//! Command-line front end for `circdeg`: argument parsing, result envelopes,
//! the JSON-lines cache and the command implementations.

use std::collections::BTreeMap;
use std::fs::OpenOptions;
use std::io::{self, BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use circdeg::{census, circulant, cyclotomic, integral, mintable, numtheory, verify};
use circdeg::{ConnectionSet, Error as CoreError};
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

/// Environment variable naming the cache file when `--cache` is absent.
pub const CACHE_ENV: &str = "CIRCDEG_CACHE";

pub mod exit {
    pub const OK: i32 = 0;
    pub const PROPERTY_FAILURE: i32 = 1;
    pub const USAGE: i32 = 2;
    pub const DISAGREEMENT: i32 = 3;
    pub const GOLDEN_MISMATCH: i32 = 4;
}

#[derive(Debug, Parser)]
#[command(name = "circdeg", version, about = "Algebraic degree of circulant graphs")]
pub struct Cli {
    /// Append a result envelope to this JSON-lines file.
    #[arg(long, global = true, value_name = "PATH")]
    pub cache: Option<PathBuf>,

    /// Print the result envelope as JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree, |Fix(S)|, valency, connectivity and integrality of a symbol `n:s1,s2,...`.
    Deg {
        symbol: String,
        /// Also compute the degree from the exact eigenvalues and compare.
        #[arg(long)]
        oracle: bool,
    },
    /// C(d), p_d and a minimal witness for d = 1..=D_MAX.
    Table {
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        d_max: u64,
        #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
        format: TableFormat,
        /// Compare with the published table for d <= 100.
        #[arg(long)]
        check: bool,
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
    /// Number of degree-D circulants on P vertices up to isomorphism.
    Census {
        p: u64,
        d: u64,
        /// Print the canonical witnesses, one per line.
        #[arg(long)]
        witnesses: bool,
        /// Brute-force isomorphism census, for 3 <= n <= 12.
        #[arg(long, conflicts_with = "bounds")]
        naive: bool,
        /// Lower bound with its witness family, for any admissible order.
        #[arg(long)]
        bounds: bool,
    },
    /// Number of connected integral circulants on N vertices.
    Integral {
        n: u64,
        /// Also count by enumerating symbols and compare.
        #[arg(long)]
        brute: bool,
    },
    /// Run a property suite.
    Verify {
        #[arg(value_enum)]
        suite: SuiteArg,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Fast,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FaultArg {
    Totient,
}

/// One cached command result.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultEnvelope {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub output: Value,
    pub library_version: String,
    pub timestamp: u64,
}

impl ResultEnvelope {
    pub fn new(command: &str, inputs: BTreeMap<String, Value>, output: Value) -> ResultEnvelope {
        ResultEnvelope {
            command: command.to_string(),
            inputs,
            output,
            library_version: circdeg::VERSION.to_string(),
            timestamp: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CacheError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("cannot serialize envelope: {0}")]
    Serialize(#[from] serde_json::Error),
}

/// Appends one envelope as a single line. The line is written with one
/// `write_all` on a file opened in append mode, so concurrent appenders
/// never interleave within a line.
pub fn cache_append(path: &Path, envelope: &ResultEnvelope) -> Result<(), CacheError> {
    let mut line = serde_json::to_string(envelope)?;
    line.push('\n');
    let io_err = |source| CacheError::Io { path: path.to_path_buf(), source };
    let mut file = OpenOptions::new().create(true).append(true).open(path).map_err(io_err)?;
    file.write_all(line.as_bytes()).map_err(io_err)
}

/// Reads every well-formed envelope. A missing file is empty; corrupt lines
/// are skipped with a warning.
pub fn cache_read(path: &Path) -> Result<Vec<ResultEnvelope>, CacheError> {
    let file = match std::fs::File::open(path) {
        Ok(f) => f,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(source) => return Err(CacheError::Io { path: path.to_path_buf(), source }),
    };
    let mut out = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|source| CacheError::Io { path: path.to_path_buf(), source })?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(&line) {
            Ok(env) => out.push(env),
            Err(e) => log::warn!("{}:{}: skipping corrupt cache line: {e}", path.display(), i + 1),
        }
    }
    Ok(out)
}

/// A command's result: exit code, text for stdout, envelope and any
/// diagnostic for stderr.
#[derive(Debug)]
pub struct Outcome {
    pub code: i32,
    pub text: String,
    pub envelope: Option<ResultEnvelope>,
    pub error: Option<String>,
}

impl Outcome {
    fn fail(code: i32, msg: impl Into<String>) -> Outcome {
        Outcome { code, text: String::new(), envelope: None, error: Some(msg.into()) }
    }
}

fn usage(err: CoreError) -> Outcome {
    Outcome::fail(exit::USAGE, err.to_string())
}

fn internal(err: CoreError) -> Outcome {
    let code = match err {
        CoreError::InvalidArgument(_) | CoreError::Malformed { .. } | CoreError::NotAUnit { .. } => exit::USAGE,
        _ => exit::PROPERTY_FAILURE,
    };
    Outcome::fail(code, err.to_string())
}

fn inputs<const N: usize>(pairs: [(&str, Value); N]) -> BTreeMap<String, Value> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn cmd_deg(symbol: &str, oracle: bool) -> Outcome {
    let s: ConnectionSet = match symbol.parse() {
        Ok(s) => s,
        Err(e) => return usage(e),
    };
    let degree = circulant::algebraic_degree(&s);
    let fix_order = circulant::fix(&s).order();
    let connected = circulant::is_connected(&s);
    let integral = integral::is_integral(&s);
    let mut text = format!(
        "symbol: {s}\ndegree: {degree}\nfix_order: {fix_order}\nvalency: {}\nconnected: {connected}\nintegral: {}\n",
        s.valency(),
        integral.as_ref().map_or("no".to_string(), |sym| format!("yes ({sym})")),
    );
    let mut output = json!({
        "symbol": s.to_string(),
        "degree": degree,
        "fix_order": fix_order,
        "valency": s.valency(),
        "connected": connected,
        "integral_symbol": integral.map(|sym| sym.to_string()),
    });
    let mut code = exit::OK;
    let mut error = None;
    if oracle {
        let o = match cyclotomic::splitting_degree_oracle(&s) {
            Ok(o) => o,
            Err(e) => return internal(e),
        };
        let agree = o == degree;
        text.push_str(&format!("oracle: {o} ({})\n", if agree { "agree" } else { "DISAGREE" }));
        output["oracle"] = json!(o);
        output["agree"] = json!(agree);
        if !agree {
            code = exit::DISAGREEMENT;
            error = Some(format!("degree formula gives {degree} but the eigenvalue oracle gives {o}"));
        }
    }
    Outcome {
        code,
        text,
        envelope: Some(ResultEnvelope::new(
            "deg",
            inputs([("symbol", json!(symbol)), ("oracle", json!(oracle))]),
            output,
        )),
        error,
    }
}

fn cmd_table(d_max: u64, format: TableFormat, check: bool, output: Option<&Path>) -> Outcome {
    let rows = match mintable::table(d_max) {
        Ok(r) => r,
        Err(e) => return internal(e),
    };
    let rendered = match format {
        TableFormat::Csv => mintable::to_csv_string(&rows),
        TableFormat::Json => mintable::to_json_string(&rows).map(|mut s| {
            s.push('\n');
            s
        }),
    };
    let rendered = match rendered {
        Ok(s) => s,
        Err(e) => return internal(e),
    };
    let mut text = String::new();
    match output {
        Some(path) => {
            if let Err(e) = std::fs::write(path, &rendered) {
                return Outcome::fail(exit::USAGE, format!("{}: {e}", path.display()));
            }
        }
        None => text = rendered,
    }
    let mismatches = if check { mintable::check_against_golden(&rows) } else { Vec::new() };
    let strict: Vec<u64> = rows.iter().filter(|r| r.strict).map(|r| r.d).collect();
    let envelope = ResultEnvelope::new(
        "table",
        inputs([
            ("d_max", json!(d_max)),
            ("check", json!(check)),
            ("format", json!(format!("{format:?}").to_lowercase())),
        ]),
        json!({
            "rows": rows.len(),
            "strict": strict,
            "golden_mismatches": mismatches,
        }),
    );
    let (code, error) = if mismatches.is_empty() {
        (exit::OK, None)
    } else {
        let lines: Vec<String> = mismatches
            .iter()
            .map(|m| format!("d = {}: expected {:?}, found {:?}", m.d, m.expected, m.found))
            .collect();
        (exit::GOLDEN_MISMATCH, Some(format!("table differs from the published rows:\n{}", lines.join("\n"))))
    };
    Outcome { code, text, envelope: Some(envelope), error }
}

fn cmd_census(p: u64, d: u64, witnesses: bool, naive: bool, bounds: bool) -> Outcome {
    let record = if naive {
        census::naive_census(p, d)
    } else if bounds {
        census::lower_bound_census(p, d)
    } else {
        census::prime_census(p, d)
    };
    let record = match record {
        Ok(r) => r,
        Err(e) => return internal(e),
    };
    let kind = serde_json::to_value(record.kind).unwrap_or(Value::Null);
    let mut text = format!(
        "n: {}\nd: {}\nkind: {}\ncount: {}\nmethod: {}\n",
        record.n,
        record.d,
        kind.as_str().unwrap_or_default(),
        record.value,
        record.method
    );
    let mut output = json!({
        "n": record.n,
        "d": record.d,
        "kind": kind,
        "value": record.value,
        "method": record.method,
    });
    if bounds && numtheory::is_prime(p) {
        if let Ok(hi) = census::upper_bound_prime(d) {
            text.push_str(&format!("upper_bound: {hi}\n"));
            output["upper_bound"] = json!(hi);
        }
    }
    if witnesses {
        if record.witnesses.is_empty() && record.value > 0 {
            text.push_str(&format!("witnesses: not materialized for d > {}\n", census::ENUMERATION_LIMIT));
        }
        for w in &record.witnesses {
            text.push_str(&format!("{w}\n"));
        }
        output["witnesses"] = json!(record.witnesses.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    }
    Outcome {
        code: exit::OK,
        text,
        envelope: Some(ResultEnvelope::new(
            "census",
            inputs([
                ("p", json!(p)),
                ("d", json!(d)),
                ("witnesses", json!(witnesses)),
                ("naive", json!(naive)),
                ("bounds", json!(bounds)),
            ]),
            output,
        )),
        error: None,
    }
}

fn cmd_integral(n: u64, brute: bool) -> Outcome {
    let count = match integral::count_connected_integral(n) {
        Ok(c) => c,
        Err(e) => return internal(e),
    };
    let mut text = format!("n: {n}\ncount: {count}\n");
    let mut output = json!({ "n": n, "count": count });
    let mut code = exit::OK;
    let mut error = None;
    if brute {
        let b = match integral::count_connected_integral_bruteforce(n) {
            Ok(b) => b,
            Err(e) => return internal(e),
        };
        text.push_str(&format!("brute_force: {b}\n"));
        output["brute_force"] = json!(b);
        if b != count {
            code = exit::DISAGREEMENT;
            error = Some(format!("closed form gives {count} but enumeration gives {b}"));
        }
    }
    Outcome {
        code,
        text,
        envelope: Some(ResultEnvelope::new(
            "integral",
            inputs([("n", json!(n)), ("brute", json!(brute))]),
            output,
        )),
        error,
    }
}

fn cmd_verify(suite: SuiteArg, fault: Option<FaultArg>, live: &mut dyn Write) -> Outcome {
    let suite = match suite {
        SuiteArg::Fast => verify::Suite::Fast,
        SuiteArg::Full => verify::Suite::Full,
    };
    let opts = verify::VerifyOptions {
        fault: fault.map(|FaultArg::Totient| verify::Fault::Totient),
    };
    let report = verify::run(suite, &opts, |o| {
        let _ = writeln!(
            live,
            "{} {} ({}) [{:.2}s]",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail,
            o.seconds
        );
        let _ = live.flush();
    });
    let failed: Vec<String> = report.failures().map(|o| o.name.clone()).collect();
    let text = format!(
        "{}: {} of {} checks passed\n",
        if failed.is_empty() { "ok" } else { "FAILED" },
        report.outcomes.len() - failed.len(),
        report.outcomes.len()
    );
    let envelope = ResultEnvelope::new(
        "verify",
        inputs([
            ("suite", json!(report.suite)),
            ("inject_fault", json!(opts.fault)),
        ]),
        serde_json::to_value(&report).unwrap_or(Value::Null),
    );
    Outcome {
        code: if failed.is_empty() { exit::OK } else { exit::PROPERTY_FAILURE },
        text,
        envelope: Some(envelope),
        error: (!failed.is_empty()).then(|| format!("failing properties: {}", failed.join(", "))),
    }
}

/// Executes a parsed command. Progress lines of `verify` go to `live`.
pub fn execute(cli: &Cli, live: &mut dyn Write) -> Outcome {
    let mut outcome = match &cli.command {
        Command::Deg { symbol, oracle } => cmd_deg(symbol, *oracle),
        Command::Table { d_max, format, check, output } => {
            cmd_table(*d_max, *format, *check, output.as_deref())
        }
        Command::Census { p, d, witnesses, naive, bounds } => cmd_census(*p, *d, *witnesses, *naive, *bounds),
        Command::Integral { n, brute } => cmd_integral(*n, *brute),
        Command::Verify { suite, inject_fault } => cmd_verify(*suite, *inject_fault, live),
    };
    let cache = cli
        .cache
        .clone()
        .or_else(|| std::env::var_os(CACHE_ENV).map(PathBuf::from));
    if let (Some(path), Some(env)) = (cache, &outcome.envelope) {
        if let Err(e) = cache_append(&path, env) {
            log::error!("cannot write cache: {e}");
            if outcome.code == exit::OK {
                outcome.code = exit::USAGE;
                outcome.error = Some(format!("cannot write cache: {e}"));
            }
        }
    }
    if cli.json {
        if let Some(env) = &outcome.envelope {
            outcome.text = serde_json::to_string_pretty(env).unwrap_or_default() + "\n";
        }
    }
    outcome
}
