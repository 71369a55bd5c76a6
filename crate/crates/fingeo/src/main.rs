//! Command-line front end. Every subcommand prints one JSON object to
//! stdout by default (`--table` switches to a human layout); identical
//! invocations produce byte-identical JSON. Exit codes: 0 success,
//! 1 verification failure, 2 usage or input error.

use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use fingeo::codes::{CodesCtx, Codeword, Domain, MinWeightReport, DEFAULT_ENUM_BUDGET};
use fingeo::codes::{hexagon_example, octagon_example};
use fingeo::decoder::{channel_trials, CodeSel, CSV_HEADER};
use fingeo::geometry::GeomConfig;
use fingeo::incidence::{build_incidence, Orientation};
use fingeo::ksets::{build_kset, KSpec};
use fingeo::linalg::{rank_char0_incidence, rank_mod_incidence, Char0Opts};
use fingeo::util::is_prime;
use fingeo::verify::{charlemma_sweep, run_all, VerifyOptions};
use fingeo::wenger::wenger_verify;
use fingeo::{Error, Result};

#[derive(Parser)]
#[command(name = "fingeo", version, about = "incidence codes of affine line systems")]
struct Cli {
    /// Print a human-readable table instead of JSON.
    #[arg(long, global = true)]
    table: bool,
    /// Worker threads for partitionable operations; results do not
    /// depend on this value.
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct GeomArgs {
    /// Field characteristic (prime).
    #[arg(long)]
    p: u64,
    /// Field extension degree, q = p^e.
    #[arg(long, default_value_t = 1)]
    e: u32,
    /// Ambient affine dimension (>= 2).
    #[arg(long)]
    n: usize,
    /// Direction set: full | line:<m> | line:<c,c;c,c> | hyperoval |
    /// rnc | random:<m>:<seed> | file:<path>.
    #[arg(long, default_value = "full")]
    kset: String,
}

impl GeomArgs {
    fn build(&self) -> Result<(GeomConfig, fingeo::ksets::KSet)> {
        let cfg = GeomConfig::new(self.p, self.e, self.n)?;
        let k = build_kset(&cfg, &KSpec::parse(&self.kset)?)?;
        Ok((cfg, k))
    }
}

#[derive(Subcommand)]
enum Cmd {
    /// Rank of the point-line incidence matrix over one characteristic.
    Rank {
        #[command(flatten)]
        geom: GeomArgs,
        /// Coefficient characteristic: a prime, or 0 for the rationals.
        #[arg(long = "char")]
        characteristic: u64,
    },
    /// Lengths and dimensions of the kernel codes C and D.
    Dims {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long = "char")]
        characteristic: u64,
    },
    /// Minimum weight report for C or D.
    Minweight {
        #[command(flatten)]
        geom: GeomArgs,
        /// C (line-indexed) or D (point-indexed).
        #[arg(long)]
        code: CodeSel,
        /// Coefficient characteristic: a prime, or 0 for the rationals.
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
        /// Enumeration state budget; FINGEO_BUDGET overrides the default.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Generate a plane, capacitor, flat-capacitor, or k-gon word.
    Words {
        #[command(flatten)]
        geom: GeomArgs,
        /// plane | capacitor | dcap | kgon (kgon brings its own K).
        #[arg(long)]
        kind: String,
        /// Also check that the full family spans its code (plane and
        /// capacitor kinds only).
        #[arg(long)]
        verify_span: bool,
        /// Characteristic for the emitted word; 0 keeps integer entries.
        #[arg(long = "char", default_value_t = 0)]
        characteristic: u64,
    },
    /// Rank consistency for the rational normal curve geometry.
    Wenger {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: u64,
        /// Coefficient prime; defaults to the smallest prime not
        /// dividing q.
        #[arg(long = "char")]
        characteristic: Option<u64>,
    },
    /// Write the incidence matrix to a file.
    Export {
        #[command(flatten)]
        geom: GeomArgs,
        /// alist | mtx.
        #[arg(long)]
        format: String,
        /// N (points x lines) or NT (lines x points).
        #[arg(long, default_value = "N")]
        orient: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Seeded decoding trials against the zero codeword.
    Decode {
        #[command(flatten)]
        geom: GeomArgs,
        #[arg(long)]
        code: CodeSel,
        /// Number of bit errors per trial.
        #[arg(long)]
        errors: usize,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Exhaustive character-sum and trace dichotomy check.
    Charlemma {
        #[arg(long)]
        p: u64,
        /// Auxiliary prime, must be 1 mod p.
        #[arg(long)]
        aux: u64,
    },
    /// Run the whole invariant grid; exits 1 on any violation.
    Verify {
        #[arg(long)]
        max_q: Option<u32>,
        #[arg(long)]
        max_n: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Serialize)]
struct RankOut {
    rank: usize,
    h_k: usize,
    dual_zero: usize,
}

#[derive(Serialize)]
struct MinweightOut {
    code: String,
    #[serde(rename = "char")]
    characteristic: u64,
    #[serde(flatten)]
    report: MinWeightReport,
}

#[derive(Serialize)]
struct SpanOut {
    span_dim: usize,
    code_dim: usize,
    spans: bool,
    all_codewords: bool,
}

#[derive(Serialize)]
struct WordsOut {
    kind: String,
    available: usize,
    word: Codeword,
    #[serde(skip_serializing_if = "Option::is_none")]
    span: Option<SpanOut>,
}

#[derive(Serialize)]
struct KgonWordOut {
    label: String,
    k_size: usize,
    word: Codeword,
}

#[derive(Serialize)]
struct KgonOut {
    kind: String,
    words: Vec<KgonWordOut>,
}

#[derive(Serialize)]
struct WengerOut {
    matrix_rank: usize,
    formula: u128,
    rootless: u64,
    consistent: bool,
}

#[derive(Serialize)]
struct ExportOut {
    format: String,
    orient: String,
    n_rows: usize,
    n_cols: usize,
    nnz: usize,
    path: String,
}

#[derive(Serialize)]
struct DecodeOut {
    code: String,
    n: usize,
    q: u32,
    k_size: usize,
    t: usize,
    trials: u64,
    successes: u64,
}

#[derive(Serialize)]
struct CharlemmaOut {
    p: u64,
    aux: u64,
    omega: u64,
    checked: u64,
    violations: u64,
}

#[derive(Serialize)]
struct VerifyCriterionOut {
    id: u32,
    name: String,
    passed: bool,
    checks: u64,
    failures: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    detail: Option<String>,
}

#[derive(Serialize)]
struct VerifyOut {
    passed: bool,
    criteria: Vec<VerifyCriterionOut>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn env_budget() -> Option<u64> {
    std::env::var("FINGEO_BUDGET").ok().and_then(|s| s.parse().ok())
}

fn require_char(l: u64) -> Result<()> {
    if l == 0 || is_prime(l) {
        return Ok(());
    }
    Err(Error::InvalidArgument(format!(
        "--char must be 0 or a prime, got {l}"
    )))
}

fn smallest_other_prime(p: u64) -> u64 {
    if p == 2 {
        3
    } else {
        2
    }
}

fn emit<T: Serialize>(value: &T, table: bool) -> Result<()> {
    if table {
        let v = serde_json::to_value(value)?;
        print_table(&v, 0);
    } else {
        println!("{}", serde_json::to_string(value)?);
    }
    Ok(())
}

fn print_table(v: &serde_json::Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        serde_json::Value::Object(map) => {
            for (key, val) in map {
                match val {
                    serde_json::Value::Object(_) | serde_json::Value::Array(_) => {
                        println!("{pad}{key}:");
                        print_table(val, indent + 1);
                    }
                    _ => println!("{pad}{key:<12} {val}"),
                }
            }
        }
        serde_json::Value::Array(items) => {
            for item in items {
                print_table(item, indent);
                if indent == 1 {
                    println!();
                }
            }
        }
        other => println!("{pad}{other}"),
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let table = cli.table;
    match cli.cmd {
        Cmd::Rank {
            geom,
            characteristic,
        } => {
            require_char(characteristic)?;
            let (cfg, k) = geom.build()?;
            let inc = build_incidence(&cfg, &k)?;
            let h_k = cfg.count_h_k(&k);
            let dual_zero = cfg.dual_zero_count(&k);
            let rank = if characteristic == 0 {
                let opts = Char0Opts {
                    avoid_prime: Some(cfg.id().p as u64),
                    expected_rank: Some(dual_zero),
                    ..Char0Opts::default()
                };
                rank_char0_incidence(&inc, Orientation::N, &opts)?.rank
            } else {
                rank_mod_incidence(&inc, Orientation::N, characteristic)?
            };
            emit(&RankOut { rank, h_k, dual_zero }, table)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Dims {
            geom,
            characteristic,
        } => {
            require_char(characteristic)?;
            let (cfg, k) = geom.build()?;
            let ctx = CodesCtx::new(&cfg, &k)?;
            let dims = if characteristic == 0 {
                ctx.dims_char0()?.0
            } else {
                ctx.dims_mod(characteristic)?
            };
            emit(&dims, table)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Minweight {
            geom,
            code,
            characteristic,
            budget,
        } => {
            require_char(characteristic)?;
            let (cfg, k) = geom.build()?;
            let ctx = CodesCtx::new(&cfg, &k)?;
            let domain = match code {
                CodeSel::C => Domain::LIndexed,
                CodeSel::D => Domain::PIndexed,
            };
            let budget = budget.or_else(env_budget).unwrap_or(DEFAULT_ENUM_BUDGET);
            let report = if characteristic == 0 {
                ctx.min_weight_char0(domain, budget, &[])?
            } else {
                ctx.min_weight_mod(domain, characteristic, budget, &[])?
            };
            let out = MinweightOut {
                code: code.to_string(),
                characteristic,
                report,
            };
            emit(&out, table)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Words {
            geom,
            kind,
            verify_span,
            characteristic,
        } => {
            require_char(characteristic)?;
            words_cmd(&geom, &kind, verify_span, characteristic, table)
        }
        Cmd::Wenger {
            n,
            q,
            characteristic,
        } => {
            let (p, e) = fingeo::util::prime_power(q)?;
            let l = characteristic.unwrap_or_else(|| smallest_other_prime(p));
            let rep = wenger_verify(n, p, e, l)?;
            let out = WengerOut {
                matrix_rank: rep.matrix_rank,
                formula: rep.formula_rank,
                rootless: rep.rootless_count,
                consistent: rep.consistent,
            };
            emit(&out, table)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Export {
            geom,
            format,
            orient,
            out,
        } => {
            let (cfg, k) = geom.build()?;
            let inc = build_incidence(&cfg, &k)?;
            let orientation: Orientation = orient.parse()?;
            let mut file = BufWriter::new(File::create(&out)?);
            match format.as_str() {
                "alist" => inc.write_alist(orientation, &mut file)?,
                "mtx" => inc.write_matrix_market(orientation, &mut file)?,
                other => {
                    return Err(Error::InvalidArgument(format!(
                        "--format must be alist or mtx, got {other:?}"
                    )))
                }
            }
            file.flush()?;
            let (n_rows, n_cols) = match orientation {
                Orientation::N => (inc.n_rows(), inc.n_cols()),
                Orientation::Nt => (inc.n_cols(), inc.n_rows()),
            };
            let nnz = inc.n_cols() * cfg.q() as usize;
            let report = ExportOut {
                format,
                orient: orientation.to_string(),
                n_rows,
                n_cols,
                nnz,
                path: out.display().to_string(),
            };
            emit(&report, table)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Decode {
            geom,
            code,
            errors,
            trials,
            seed,
        } => {
            let (cfg, k) = geom.build()?;
            let summary = channel_trials(&cfg, &k, code, errors, trials, seed)?;
            if table {
                println!("{CSV_HEADER}");
                println!("{}", summary.csv_row());
            } else {
                let out = DecodeOut {
                    code: summary.code.to_string(),
                    n: summary.n,
                    q: summary.q,
                    k_size: summary.k_size,
                    t: summary.t,
                    trials: summary.trials,
                    successes: summary.successes,
                };
                emit(&out, false)?;
            }
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Charlemma { p, aux } => {
            let (omega, checked, violations) = charlemma_sweep(p, aux)?;
            let out = CharlemmaOut {
                p,
                aux,
                omega,
                checked,
                violations,
            };
            emit(&out, table)?;
            Ok(if violations == 0 {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Verify { max_q, max_n, seed } => {
            let defaults = VerifyOptions::default();
            let opts = VerifyOptions {
                max_q: max_q.unwrap_or(defaults.max_q),
                max_n: max_n.unwrap_or(defaults.max_n),
                seed: seed.unwrap_or(defaults.seed),
                budget: env_budget().unwrap_or(defaults.budget),
                threads: cli.threads.unwrap_or(defaults.threads),
                ..defaults
            };
            let report = run_all(&opts)?;
            if table {
                for c in &report.criteria {
                    println!(
                        "criterion {} [{}] {} checks, {:.1}s  {}",
                        c.id,
                        if c.passed { "pass" } else { "FAIL" },
                        c.checks,
                        c.seconds,
                        c.name
                    );
                    if !c.passed {
                        println!("  {}", c.detail);
                    }
                }
                println!("overall: {}", if report.passed { "pass" } else { "FAIL" });
            } else {
                let out = VerifyOut {
                    passed: report.passed,
                    criteria: report
                        .criteria
                        .iter()
                        .map(|c| VerifyCriterionOut {
                            id: c.id,
                            name: c.name.clone(),
                            passed: c.passed,
                            checks: c.checks,
                            failures: c.failures,
                            detail: if c.passed { None } else { Some(c.detail.clone()) },
                        })
                        .collect(),
                };
                emit(&out, false)?;
            }
            Ok(if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn words_cmd(
    geom: &GeomArgs,
    kind: &str,
    verify_span: bool,
    characteristic: u64,
    table: bool,
) -> Result<ExitCode> {
    if kind == "kgon" {
        if verify_span {
            return Err(Error::InvalidArgument(
                "--verify-span applies to plane and capacitor kinds".into(),
            ));
        }
        let cfg = GeomConfig::new(geom.p, geom.e, geom.n)?;
        let mut words = Vec::new();
        let (hex_k, hex_w) = hexagon_example(&cfg)?;
        words.push(KgonWordOut {
            label: "hexagon".into(),
            k_size: hex_k.len(),
            word: hex_w,
        });
        if geom.p >= 5 {
            let (oct_k, oct_w) = octagon_example(&cfg)?;
            words.push(KgonWordOut {
                label: "octagon".into(),
                k_size: oct_k.len(),
                word: oct_w,
            });
        }
        let out = KgonOut {
            kind: kind.to_string(),
            words,
        };
        emit(&out, table)?;
        return Ok(ExitCode::SUCCESS);
    }
    let (cfg, k) = geom.build()?;
    let ctx = CodesCtx::new(&cfg, &k)?;
    let span_char = if characteristic == 0 {
        smallest_other_prime(cfg.id().p as u64)
    } else {
        characteristic
    };
    let (available, word, span) = match kind {
        "plane" => {
            let specs = ctx.enumerate_plane_specs();
            let Some(first) = specs.first() else {
                return Err(Error::InvalidArgument(
                    "plane words need at least two directions in K".into(),
                ));
            };
            let word = ctx.plane_word(first, characteristic)?;
            let span = if verify_span {
                let check = ctx.verify_spanning(
                    Domain::LIndexed,
                    span_char,
                    specs
                        .iter()
                        .map(|s| ctx.plane_word(s, span_char).expect("enumerated spec is valid")),
                )?;
                Some(SpanOut {
                    span_dim: check.span_dim,
                    code_dim: check.code_dim,
                    spans: check.spans(),
                    all_codewords: check.all_codewords,
                })
            } else {
                None
            };
            (specs.len(), word, span)
        }
        "capacitor" => {
            let specs = ctx.capacitor_family_specs();
            let Some(first) = specs.first() else {
                return Err(Error::InvalidArgument(
                    "every functional meets K: D is the zero code, no capacitor exists".into(),
                ));
            };
            let word = ctx.capacitor_word(first, characteristic)?;
            let span = if verify_span {
                let check = ctx.verify_spanning(
                    Domain::PIndexed,
                    span_char,
                    specs
                        .iter()
                        .map(|s| ctx.capacitor_word(s, span_char).expect("family spec is valid")),
                )?;
                Some(SpanOut {
                    span_dim: check.span_dim,
                    code_dim: check.code_dim,
                    spans: check.spans(),
                    all_codewords: check.all_codewords,
                })
            } else {
                None
            };
            (specs.len(), word, span)
        }
        "dcap" => {
            if verify_span {
                return Err(Error::InvalidArgument(
                    "--verify-span applies to plane and capacitor kinds".into(),
                ));
            }
            let Some((_, word)) = ctx.flat_capacitor_example(characteristic) else {
                return Err(Error::InvalidArgument(
                    "every functional meets K: D is the zero code, no flat capacitor exists"
                        .into(),
                ));
            };
            (1, word, None)
        }
        other => {
            return Err(Error::InvalidArgument(format!(
                "--kind must be plane, capacitor, dcap, or kgon, got {other:?}"
            )))
        }
    };
    let out = WordsOut {
        kind: kind.to_string(),
        available,
        word,
        span,
    };
    emit(&out, table)?;
    Ok(ExitCode::SUCCESS)
}
