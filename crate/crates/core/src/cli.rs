//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::Value;

use crate::config::{OutputFormat, RunConfig, HORIZON_ENV};
use crate::convergence::sequence::named_set;
use crate::convergence::{ideal_limit, imu_limit, istat_limit, Outcome, SymbolicSequence};
use crate::corpus::{Corpus, DEFAULT_SEED};
use crate::error::{Error, Result};
use crate::functionals::density::{uniform_eval, upper_density};
use crate::functionals::submeasure::Submeasure;
use crate::ideals::Ideal;
use crate::num::{parse_q, Nat, NatJson, QJson};
use crate::sets::{BlockScheme, Schedule, SymbolicSet};
use crate::tauberian;

pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "idealstat", version, about = "Ideal and statistical convergence over symbolic subsets of N")]
pub struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Overrides the configured horizon (and the IDEALSTAT_HORIZON variable).
    #[arg(long, global = true)]
    pub horizon: Option<u64>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// |A ∩ [1, n]| and λ_n(A).
    Count {
        /// Set JSON, or a name: evens, odds, all, empty or a generator
        #[arg(long)]
        set: String,
        #[arg(long)]
        n: String,
    },
    /// Upper asymptotic density with its certificate.
    Density {
        /// Set JSON, or a name: evens, odds, all, empty or a generator
        #[arg(long)]
        set: String,
    },
    /// Membership of a set in an ideal.
    Member {
        #[arg(long)]
        ideal: String,
        /// Set JSON, or a name: evens, odds, all, empty or a generator
        #[arg(long)]
        set: String,
    },
    /// Convergence of a sequence to a limit.
    Converge(ConvergeArgs),
    /// Tauberian bounds, the slope-condition suite and block means
    #[command(subcommand)]
    Tauberian(TauberianCommand),
    /// Generate, validate and rewrite corpus files
    #[command(subcommand)]
    Corpus(CorpusCommand),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum ModeArg {
    Ideal,
    Istat,
    Imu,
}

#[derive(Args, Debug)]
pub struct ConvergeArgs {
    #[arg(long, value_enum, default_value = "ideal")]
    pub mode: ModeArg,
    #[arg(long)]
    pub seq: String,
    #[arg(long, default_value = "fin")]
    pub ideal: String,
    /// Submeasure for `imu` mode.
    #[arg(long, default_value = "uniform")]
    pub mu: String,
    #[arg(long)]
    pub limit: String,
}

#[derive(Subcommand, Debug)]
pub enum TauberianCommand {
    /// Window sums of consecutive submeasure differences against κc.
    Claim1 {
        #[arg(long, default_value = "uniform")]
        mu: String,
        /// Set JSON, or a name: evens, odds, all, empty or a generator
        #[arg(long)]
        set: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        d: String,
        #[arg(long)]
        c: String,
    },
    /// Windows after each crossing stay above δ/2.
    Claim2 {
        #[arg(long, default_value = "uniform")]
        mu: String,
        /// Set JSON, or a name: evens, odds, all, empty or a generator
        #[arg(long)]
        set: String,
        #[arg(long)]
        delta: String,
        #[arg(long)]
        alpha: String,
        #[arg(long)]
        d: String,
    },
    /// Slope condition plus statistical limit 0 forces ordinary limit 0.
    Fridy {
        /// A single sequence; omit to run the seeded suite.
        #[arg(long)]
        seq: Option<String>,
        #[arg(long, default_value = "2")]
        d: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        count: usize,
    },
    /// Searches for a statistically null sequence with slope d_n/n that does not converge.
    Sharpness {
        /// `log` or a constant.
        #[arg(long, default_value = "log")]
        schedule: String,
    },
    /// Z_μ-convergence against (Z_ν, μ)-convergence over the corpus.
    Character {
        #[arg(long, default_value = "uniform")]
        nu: String,
        #[arg(long, default_value = "uniform")]
        mu: String,
        #[arg(long, default_value = "1")]
        alpha: String,
        #[arg(long, default_value = "1")]
        d: String,
    },
    /// Block means of a 0/1 block sequence against 2a_{n−1}/a_n.
    Blockmean {
        #[arg(long)]
        seq: String,
        /// Largest a_n checked.
        #[arg(long, default_value = "100000000")]
        upto: String,
    },
    /// Running means over blocks 3u−2..3u and the set where they reach ε (CSV).
    Figure1 {
        #[arg(long, default_value = "factorial")]
        scheme: String,
        #[arg(long)]
        u: u64,
        #[arg(long)]
        eps: String,
        #[arg(long, default_value_t = 1)]
        resolution: u64,
    },
}

#[derive(Subcommand, Debug)]
pub enum CorpusCommand {
    /// Writes the seeded default corpus.
    Generate {
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Validates a corpus file and lists its entries.
    Load { path: PathBuf },
    /// Loads a corpus file and writes it back in canonical form.
    Save {
        path: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

/// A rendered report and its exit code.
pub struct Output {
    pub text: String,
    pub code: i32,
}

fn exit_for(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Schema(_) | Error::Validation(_) | Error::Precondition(_) | Error::Io(_) => EXIT_USAGE,
        _ => 2,
    }
}

/// Runs a command line and returns the exit code, writing reports to stdout
/// and diagnostics to stderr.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            let _ = stdout.write_all(out.text.as_bytes());
            out.code
        }
        Err(e) => {
            eprintln!("idealstat: {e}");
            exit_for(&e)
        }
    }
}

pub fn config(cli: &Cli) -> Result<RunConfig> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Ok(v) = std::env::var(HORIZON_ENV) {
        cfg.horizon = v.trim().parse().map_err(|_| Error::Parse(format!("{HORIZON_ENV}=`{v}` is not an integer")))?;
    }
    if let Some(h) = cli.horizon {
        cfg.horizon = h;
    }
    if let Some(f) = cli.format {
        cfg.format = match f {
            Format::Json => OutputFormat::Json,
            Format::Csv => OutputFormat::Csv,
            Format::Table => OutputFormat::Table,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn parse_nat(s: &str) -> Result<Nat> {
    s.trim().parse().map_err(|_| Error::Parse(format!("`{s}` is not a natural number")))
}

fn schedule(s: &str) -> Result<Schedule> {
    if s == "log" {
        Ok(Schedule::Log)
    } else {
        Ok(Schedule::Const(parse_q(s)?))
    }
}

fn corpus(cfg: &RunConfig) -> Result<Corpus> {
    match &cfg.corpus {
        Some(p) => Corpus::load(p),
        None => Corpus::shipped(),
    }
}

fn emit<T: Serialize>(report: &T, cfg: &RunConfig, code: i32) -> Result<Output> {
    let v = serde_json::to_value(report).expect("reports serialize");
    Ok(Output { text: render(&v, cfg.format), code })
}

/// Runs a parsed command.
pub fn run(cli: &Cli) -> Result<Output> {
    let cfg = config(cli)?;
    match &cli.command {
        Command::Count { set, n } => {
            let a = named_set(set)?;
            let n = parse_nat(n)?;
            #[derive(Serialize)]
            struct R {
                set: SymbolicSet,
                n: NatJson,
                count: NatJson,
                uniform: QJson,
            }
            let r = R { count: NatJson(a.count(&n)?), uniform: QJson(uniform_eval(&a, &n)?), set: a, n: NatJson(n) };
            emit(&r, &cfg, 0)
        }
        Command::Density { set } => {
            let a = named_set(set)?;
            let d = upper_density(&a, cfg.horizon)?;
            let code = if d.is_certified() { 0 } else { 2 };
            emit(&d, &cfg, code)
        }
        Command::Member { ideal, set } => {
            let i = Ideal::parse(ideal)?;
            let a = named_set(set)?;
            let v = i.decide(&a, &cfg)?;
            #[derive(Serialize)]
            struct R {
                ideal: String,
                set: SymbolicSet,
                #[serde(flatten)]
                verdict: crate::Verdict,
            }
            let code = v.exit_code();
            emit(&R { ideal: i.name(), set: a, verdict: v }, &cfg, code)
        }
        Command::Converge(c) => {
            let x = SymbolicSequence::parse(&c.seq)?;
            let i = Ideal::parse(&c.ideal)?;
            let l = parse_q(&c.limit)?;
            let r = match c.mode {
                ModeArg::Ideal => ideal_limit(&x, &i, &l, &cfg)?,
                ModeArg::Istat => istat_limit(&x, &i, &l, &cfg)?,
                ModeArg::Imu => imu_limit(&x, &i, &Submeasure::parse(&c.mu)?, &l, &cfg)?,
            };
            let code = r.outcome.exit_code();
            emit(&r, &cfg, code)
        }
        Command::Tauberian(t) => run_tauberian(t, &cfg),
        Command::Corpus(c) => run_corpus(c, &cfg),
    }
}

fn pass_code(pass: bool) -> i32 {
    if pass {
        0
    } else {
        1
    }
}

fn run_tauberian(t: &TauberianCommand, cfg: &RunConfig) -> Result<Output> {
    match t {
        TauberianCommand::Claim1 { mu, set, alpha, d, c } => {
            let mu = Submeasure::parse(mu)?;
            let s = named_set(set)?;
            let grid = tauberian::sample_grid(Some(&s), 1, cfg.horizon)?;
            let r = tauberian::claim1_bound_check(&mu, &s, &parse_q(alpha)?, &parse_q(d)?, &parse_q(c)?, &grid)?;
            let code = pass_code(r.pass);
            emit(&r, cfg, code)
        }
        TauberianCommand::Claim2 { mu, set, delta, alpha, d } => {
            let mu = Submeasure::parse(mu)?;
            let s = named_set(set)?;
            let r =
                tauberian::claim2_window_check(&mu, &s, &parse_q(delta)?, &parse_q(alpha)?, &parse_q(d)?, cfg.horizon)?;
            let code = pass_code(r.pass);
            emit(&r, cfg, code)
        }
        TauberianCommand::Fridy { seq, d, seed, count } => {
            let d = parse_q(d)?;
            match seq {
                Some(s) => {
                    let r = tauberian::fridy_check(&SymbolicSequence::parse(s)?, &d, cfg)?;
                    let code = if r.contradiction.is_some() {
                        1
                    } else if r.applicable && r.stat_limit_zero == Outcome::CertifiedConverges {
                        0
                    } else {
                        2
                    };
                    emit(&r, cfg, code)
                }
                None => {
                    let reports = tauberian::fridy_corpus(*seed, *count)?
                        .iter()
                        .map(|x| tauberian::fridy_check(x, &d, cfg))
                        .collect::<Result<Vec<_>>>()?;
                    #[derive(Serialize)]
                    struct Suite {
                        seed: u64,
                        count: usize,
                        applicable: usize,
                        contradictions: usize,
                        reports: Vec<tauberian::FridyReport>,
                    }
                    let contradictions = reports.iter().filter(|r| r.contradiction.is_some()).count();
                    let s = Suite {
                        seed: *seed,
                        count: *count,
                        applicable: reports.iter().filter(|r| r.applicable).count(),
                        contradictions,
                        reports,
                    };
                    emit(&s, cfg, pass_code(contradictions == 0))
                }
            }
        }
        TauberianCommand::Sharpness { schedule: s } => {
            let r = match tauberian::sharpness_search(schedule(s)?, cfg) {
                Ok(r) => r,
                Err(Error::Infeasible(why)) => {
                    let v =
                        serde_json::json!({ "schedule": s, "horizon": cfg.horizon, "feasible": false, "reason": why });
                    return Ok(Output { text: render(&v, cfg.format), code: 1 });
                }
                Err(e) => return Err(e),
            };
            let code = pass_code(r.feasible);
            emit(&r, cfg, code)
        }
        TauberianCommand::Character { nu, mu, alpha, d } => {
            let c = corpus(cfg)?;
            let sets: Vec<SymbolicSet> = c.sets().into_iter().map(|(_, s)| s).collect();
            let seqs: Vec<SymbolicSequence> = c.sequences().into_iter().map(|(_, x)| x).collect();
            let r = tauberian::character_harness(
                &Submeasure::parse(nu)?,
                &Submeasure::parse(mu)?,
                &parse_q(alpha)?,
                &parse_q(d)?,
                &sets,
                &seqs,
                &crate::convergence::zero_one(),
                cfg,
            )?;
            let code = pass_code(r.harness.falsifications.is_empty());
            emit(&r, cfg, code)
        }
        TauberianCommand::Blockmean { seq, upto } => {
            let r = tauberian::blockmean_check(&SymbolicSequence::parse(seq)?, &parse_nat(upto)?)?;
            let code = pass_code(r.pass);
            emit(&r, cfg, code)
        }
        TauberianCommand::Figure1 { scheme, u, eps, resolution } => {
            let f = tauberian::figure1_emit(&BlockScheme::named(scheme)?, *u, &parse_q(eps)?, *resolution)?;
            if cfg.format == OutputFormat::Json {
                emit(&f, cfg, 0)
            } else {
                Ok(Output { text: f.csv(), code: 0 })
            }
        }
    }
}

fn run_corpus(c: &CorpusCommand, cfg: &RunConfig) -> Result<Output> {
    match c {
        CorpusCommand::Generate { seed, out } => {
            let corpus = Corpus::generate(*seed)?;
            match out {
                Some(p) => {
                    corpus.save(p)?;
                    Ok(Output { text: format!("wrote {} entries to {}\n", corpus.entries.len(), p.display()), code: 0 })
                }
                None => Ok(Output { text: corpus.to_json(), code: 0 }),
            }
        }
        CorpusCommand::Load { path } => {
            let corpus = Corpus::load(path)?;
            let names: Vec<Value> = corpus
                .entries
                .iter()
                .map(|e| {
                    let kind = match e.item {
                        crate::corpus::Item::Set(_) => "set",
                        crate::corpus::Item::Sequence(_) => "sequence",
                    };
                    serde_json::json!({ "name": e.name, "type": kind })
                })
                .collect();
            let v = serde_json::json!({ "seed": corpus.seed, "count": names.len(), "entries": names });
            Ok(Output { text: render(&v, cfg.format), code: 0 })
        }
        CorpusCommand::Save { path, out } => {
            let corpus = Corpus::load(path)?;
            corpus.save(out)?;
            Ok(Output { text: format!("wrote {} entries to {}\n", corpus.entries.len(), out.display()), code: 0 })
        }
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Object(m) if m.len() == 2 && m.contains_key("num") && m.contains_key("den") => {
            let (n, d) = (m["num"].as_str().unwrap_or(""), m["den"].as_str().unwrap_or(""));
            if d == "1" {
                n.to_string()
            } else {
                format!("{n}/{d}")
            }
        }
        other => other.to_string(),
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Renders a report. Tables list top-level fields; CSV lists the first array
/// of records, or the top-level fields when there is none.
pub fn render(v: &Value, format: OutputFormat) -> String {
    match format {
        OutputFormat::Json => {
            let mut s = serde_json::to_string_pretty(v).expect("values serialize");
            s.push('\n');
            s
        }
        OutputFormat::Table => {
            let Value::Object(m) = v else { return format!("{}\n", scalar(v)) };
            let w = m.keys().map(|k| k.chars().count()).max().unwrap_or(0);
            m.iter().map(|(k, x)| format!("{k:<w$}  {}\n", scalar(x))).collect()
        }
        OutputFormat::Csv => {
            let Value::Object(m) = v else { return format!("{}\n", csv_field(&scalar(v))) };
            let records = m.values().find_map(|x| match x {
                Value::Array(a) if !a.is_empty() && a.iter().all(Value::is_object) => Some(a),
                _ => None,
            });
            match records {
                Some(rows) => {
                    let Value::Object(first) = &rows[0] else { unreachable!() };
                    let keys: Vec<&String> = first.keys().collect();
                    let mut out = keys.iter().map(|k| csv_field(k)).collect::<Vec<_>>().join(",");
                    out.push('\n');
                    for r in rows {
                        let line: Vec<String> = keys
                            .iter()
                            .map(|k| csv_field(&r.get(k.as_str()).map(scalar).unwrap_or_default()))
                            .collect();
                        out.push_str(&line.join(","));
                        out.push('\n');
                    }
                    out
                }
                None => {
                    let mut out = String::from("field,value\n");
                    for (k, x) in m {
                        out.push_str(&format!("{},{}\n", csv_field(k), csv_field(&scalar(x))));
                    }
                    out
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String) {
        let cli = match Cli::try_parse_from(std::iter::once("idealstat").chain(args.iter().copied())) {
            Ok(c) => c,
            Err(_) => return (EXIT_USAGE, String::new()),
        };
        match run(&cli) {
            Ok(o) => (o.code, o.text),
            Err(e) => (exit_for(&e), e.to_string()),
        }
    }

    #[test]
    fn density_of_evens() {
        let (code, out) = run_args(&["density", "--set", r#"{"kind":"residue","mod":2,"res":0}"#]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["value"], serde_json::json!({"num": "1", "den": "2"}));
        assert_eq!(v["certificate"]["kind"], "closed-form");
    }

    #[test]
    fn usage_errors() {
        let (code, msg) = run_args(&["density", "--set", r#"{"kind":"residue","mod":2,"res":0"#]);
        assert_eq!(code, EXIT_USAGE);
        assert!(msg.contains("line 1"), "{msg}");
        assert_eq!(run_args(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--horizon", "10", "density", "--set", r#"{"kind":"fiber2","k":0}"#]).0, EXIT_USAGE);
    }

    #[test]
    fn exit_codes() {
        let (code, _) =
            run_args(&["member", "--ideal", "summable", "--set", r#"{"kind":"intervals","gen":"factorial"}"#]);
        assert_eq!(code, 1);
        let (code, _) = run_args(&[
            "converge",
            "--mode",
            "istat",
            "--seq",
            "indicator:factorial",
            "--ideal",
            "fin",
            "--limit",
            "1",
        ]);
        assert_eq!(code, 1);
        let (code, _) = run_args(&["converge", "--seq", "inv-n", "--limit", "0"]);
        assert_eq!(code, EXIT_USAGE);
        let (code, _) = run_args(&["converge", "--seq", "inv-power:1:1", "--limit", "0"]);
        assert_eq!(code, 0);
    }

    #[test]
    fn renderers() {
        let v = serde_json::json!({"a": {"num": "1", "den": "2"}, "rows": [{"n": 1, "x": "p,q"}]});
        assert_eq!(render(&v, OutputFormat::Csv), "n,x\n1,\"p,q\"\n");
        assert!(render(&v, OutputFormat::Table).starts_with("a     1/2\n"));
    }
}
