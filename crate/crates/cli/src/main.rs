use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use conicfib::classify::{enumerate_minimal, invariants, mu_bound, BoundLevel};
use conicfib::config::{elm_step, normalize_to_f1, random_config};
use conicfib::lines::{all_lines, find_line, section_span_relation};
use conicfib::osculation::line_in_inflectional_locus;
use conicfib::positivity::{bese_vs_paper, check, verify_certificate};
use conicfib::{Certificate, ElmDatum, Error, Level, PointConfig, Verdict};

const EXIT_OK: u8 = 0;
const EXIT_REJECTED: u8 = 1;
const EXIT_UNDECIDED: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_DATAERR: u8 = 65;
const EXIT_SOFTWARE: u8 = 70;

#[derive(Parser, Debug)]
#[command(name = "conicfib", version, about = "Exact checks for genus-2 rational conic fibrations")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the JSON result here instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum LevelArg {
    Ample,
    VeryAmple,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide ampleness or very ampleness and emit a certificate.
    Check {
        config: PathBuf,
        #[arg(long, value_enum, default_value = "very-ample")]
        level: LevelArg,
    },
    /// Tabulate minimal models, invariants and bounds on the number of points.
    Classify {
        #[arg(long, default_value_t = 2)]
        genus: i64,
        /// Aligned text instead of JSON.
        #[arg(long)]
        text: bool,
    },
    /// List every line of a very ample configuration.
    Lines { config: PathBuf },
    /// Scan a line for inflection points.
    Inflect {
        config: PathBuf,
        #[arg(long)]
        line: String,
    },
    /// Elementary transformation at a center (1-based).
    Elm {
        /// A configuration, or a datum `{"e": .., "mu": .., "on_section": [..]}`.
        input: PathBuf,
        #[arg(long)]
        center: Option<usize>,
        /// Normalize to F_1 instead of taking a single step.
        #[arg(long, conflicts_with = "center")]
        normalize: bool,
    },
    /// Compare the necessary conditions of the Bese bounds with the verdict.
    Bese { config: PathBuf },
    /// Re-check a certificate against a configuration.
    Verify { config: PathBuf, certificate: PathBuf },
    /// Print a random valid configuration.
    Random {
        #[arg(long)]
        mu: usize,
        #[arg(long, default_value_t = 0)]
        t: usize,
        #[arg(long, default_value_t = 6)]
        height: i64,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Internal(_) => EXIT_SOFTWARE,
            Error::Precondition(_) => EXIT_REJECTED,
            _ => EXIT_DATAERR,
        };
        Failure { code, message: e.to_string() }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure { code: EXIT_DATAERR, message: format!("{}: {e}", path.display()) })
}

fn load_config(path: &Path) -> Result<PointConfig, Failure> {
    let cfg = PointConfig::from_json_str(&read(path)?)?;
    cfg.validate()?;
    Ok(cfg)
}

fn emit<T: Serialize>(out: &Option<PathBuf>, value: &T) -> Result<(), Failure> {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    write_text(out, &s)
}

fn write_text(out: &Option<PathBuf>, s: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, s)
            .map_err(|e| Failure { code: EXIT_DATAERR, message: format!("{}: {e}", p.display()) }),
        None => {
            print!("{s}");
            Ok(())
        }
    }
}

fn verdict_code(v: Verdict) -> u8 {
    if v.is_positive() {
        EXIT_OK
    } else if v.is_rejection() {
        EXIT_REJECTED
    } else {
        EXIT_UNDECIDED
    }
}

fn classify_table(g: i64) -> Result<Value, Failure> {
    let max = mu_bound(g, BoundLevel::Ample)?.value().unwrap();
    let blown: Vec<_> = (0..=max).map(|mu| invariants(g, mu)).collect::<Result<_, _>>()?;
    let bounds: Vec<Value> = [BoundLevel::Ample, BoundLevel::AmpleSpanned, BoundLevel::VeryAmple]
        .iter()
        .map(|&l| Ok(json!({"level": l, "bound": mu_bound(g, l)?})))
        .collect::<Result<_, Error>>()?;
    Ok(json!({
        "genus": g,
        "minimal": enumerate_minimal(g)?,
        "blown_up": blown,
        "mu_bounds": bounds,
    }))
}

fn classify_text(v: &Value) -> String {
    let mut s = String::new();
    s.push_str(&format!("genus {}\n\nminimal models\n", v["genus"]));
    s.push_str(&format!("{:>3} {:>4} {:>4}\n", "e", "d", "h0"));
    for m in v["minimal"].as_array().unwrap() {
        s.push_str(&format!("{:>3} {:>4} {:>4}\n", m["e"], m["d"], m["expected_h0"]));
    }
    s.push_str(&format!("\nblow-ups of F_1\n{:>3} {:>4} {:>4} {:>4} {:>4}\n", "mu", "d", "K^2", "h0", "N"));
    for m in v["blown_up"].as_array().unwrap() {
        s.push_str(&format!(
            "{:>3} {:>4} {:>4} {:>4} {:>4}\n",
            m["mu"], m["d"], m["Ksq"], m["expected_h0"], m["expected_N"]
        ));
    }
    s.push_str("\nbounds on mu\n");
    for b in v["mu_bounds"].as_array().unwrap() {
        let val = match b["bound"]["bound"].as_u64() {
            Some(n) => n.to_string(),
            None => "undecided".to_string(),
        };
        s.push_str(&format!("{:<14} {}\n", b["level"].as_str().unwrap(), val));
    }
    s
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = &cli.output;
    match cli.command {
        Command::Check { config, level } => {
            let cfg = load_config(&config)?;
            let level = match level {
                LevelArg::Ample => Level::Ample,
                LevelArg::VeryAmple => Level::VeryAmple,
            };
            let cert = check(&cfg, level)?;
            emit(out, &cert)?;
            Ok(verdict_code(cert.verdict))
        }
        Command::Classify { genus, text } => {
            let table = classify_table(genus)?;
            if text {
                write_text(out, &classify_text(&table))?;
            } else {
                emit(out, &table)?;
            }
            Ok(EXIT_OK)
        }
        Command::Lines { config } => {
            let cfg = load_config(&config)?;
            let lines = all_lines(&cfg)?;
            let records: Vec<Value> = lines
                .iter()
                .map(|r| {
                    let mut v = serde_json::to_value(r).unwrap();
                    v["section_relation"] = serde_json::to_value(section_span_relation(&cfg, r)?).unwrap();
                    Ok(v)
                })
                .collect::<Result<_, Error>>()?;
            emit(out, &records)?;
            Ok(EXIT_OK)
        }
        Command::Inflect { config, line } => {
            let cfg = load_config(&config)?;
            let rec = find_line(&cfg, &line)?;
            let report = line_in_inflectional_locus(&cfg, &rec, cli.seed)?;
            emit(out, &json!({"line": rec, "report": report}))?;
            Ok(EXIT_OK)
        }
        Command::Elm { input, center, normalize } => {
            let text = read(&input)?;
            let v: Value = serde_json::from_str(&text)
                .map_err(|e| Failure { code: EXIT_DATAERR, message: format!("<document>: {e}") })?;
            let datum = if v.get("on_section").is_some() {
                serde_json::from_value::<ElmDatum>(v)
                    .map_err(|e| Failure { code: EXIT_DATAERR, message: format!("datum: {e}") })?
            } else {
                let cfg = PointConfig::from_json(&v)?;
                cfg.validate()?;
                ElmDatum::from_config(&cfg)
            };
            if datum.on_section.len() != datum.mu {
                return Err(Failure { code: EXIT_DATAERR, message: "on_section: length differs from mu".into() });
            }
            if normalize {
                let (d, maps) = normalize_to_f1(&datum)?;
                emit(out, &json!({"input": datum, "datum": d, "steps": maps}))?;
            } else {
                let c = center.ok_or_else(|| Failure {
                    code: EXIT_USAGE,
                    message: "elm needs --center or --normalize".into(),
                })?;
                if c == 0 {
                    return Err(Failure { code: EXIT_DATAERR, message: "center: indices start at 1".into() });
                }
                let (d, map) = elm_step(&datum, c - 1)?;
                emit(out, &json!({"input": datum, "datum": d, "map": map, "matrix": map.matrix()}))?;
            }
            Ok(EXIT_OK)
        }
        Command::Bese { config } => {
            let cfg = load_config(&config)?;
            let report = bese_vs_paper(&cfg)?;
            emit(out, &report)?;
            Ok(EXIT_OK)
        }
        Command::Verify { config, certificate } => {
            let cfg = load_config(&config)?;
            let cert: Certificate = serde_json::from_str(&read(&certificate)?)
                .map_err(|e| Failure { code: EXIT_DATAERR, message: format!("certificate: {e}") })?;
            match verify_certificate(&cfg, &cert) {
                Ok(()) => {
                    emit(out, &json!({"sound": true}))?;
                    Ok(EXIT_OK)
                }
                Err(Error::Precondition(m)) => {
                    emit(out, &json!({"sound": false, "reason": m}))?;
                    Ok(EXIT_REJECTED)
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Random { mu, t, height } => {
            if mu > conicfib::picard::MAX_MU || t > 1 || t > mu || height < 1 {
                return Err(Failure {
                    code: EXIT_DATAERR,
                    message: "random: needs mu <= 11, t <= min(1, mu) and height >= 1".into(),
                });
            }
            let mut rng = ChaCha8Rng::seed_from_u64(cli.seed);
            let cfg = random_config(&mut rng, mu, t, height);
            emit(out, &cfg.to_json())?;
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
