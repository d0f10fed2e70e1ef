//! The `tlr` command line.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Ratio;
use serde::Serialize;
use serde_json::json;
use tlr_core::algebra::{random_linear_code, rs_code, Field, LinearCode, Symbol};
use tlr_core::allr::{allr_tensor, Overrides};
use tlr_core::compose::{compose_llr, default_reps, filter_by_radius, globalize, ComposeParams};
use tlr_core::concat::{gv_feasibility, gv_unique_decode, thommesen_sample, GvDecodeParams};
use tlr_core::format::{load_code, load_concat, load_linear, load_list_tuple, load_word, save_code, save_concat, save_list_tuple, save_word, AnyCode};
use tlr_core::listrec::{brute_force_list_recover, corrupt_to_lists, worst_case_list_size, ChannelMode};
use tlr_core::oracle::QueryOracle;
use tlr_core::seed;
use tlr_core::tensor::tensor_power;
use tlr_core::Radius;

use crate::config::{LdcKind, LdcSpec};
use crate::report::ExperimentReport;
use crate::{run_experiment, ExperimentConfig, HarnessError};

#[derive(Debug, Parser)]
#[command(name = "tlr", version, about = "Local list recovery of tensor codes: generate, corrupt, recover, experiment")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a code file.
    #[command(subcommand)]
    Gen(Gen),
    /// Encode a message.
    Encode {
        #[arg(long)]
        code: PathBuf,
        /// Message as a JSON array, e.g. "[1,2]".
        #[arg(long)]
        msg: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Turn a word into a seeded list tuple with an alpha fraction of violations.
    Corrupt {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        #[arg(long)]
        alpha: Radius,
        #[arg(long, default_value_t = 2)]
        ell: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "filled")]
        mode: ChannelMode,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List-recover from a list tuple.
    Recover(RecoverArgs),
    /// Decoding near the Gilbert-Varshamov bound.
    #[command(subcommand)]
    Gv(Gv),
    /// Run an experiment described by a JSON config.
    Experiment {
        #[arg(long)]
        config: PathBuf,
        /// Report path; overrides `output` in the config. The CSV goes next to it.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print a saved report's aggregates, or its per-trial table with --csv.
    Report {
        report: PathBuf,
        #[arg(long)]
        csv: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum Gen {
    /// Reed-Solomon code over GF(q) on the first n field elements.
    Rs {
        #[command(flatten)]
        shape: Shape,
    },
    /// Random full-rank linear code.
    Random {
        #[command(flatten)]
        shape: Shape,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Tensor power of a code, as an explicit linear code.
    Tensor {
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value_t = 2)]
        t: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Concatenation with independent random binary inner codes.
    Thommesen {
        /// Outer code file over GF(2^s).
        #[arg(long)]
        code: PathBuf,
        #[arg(long, default_value = "1/2")]
        rho_in: Radius,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Shape {
    #[arg(long)]
    q: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    k: usize,
    /// Reduce the generator to systematic form.
    #[arg(long)]
    systematic: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RecoverMode {
    Global,
    Allr,
    Compose,
    Globalize,
}

#[derive(Debug, Args)]
struct RecoverArgs {
    /// Base code (the code itself for `global`).
    #[arg(long)]
    code: PathBuf,
    #[arg(long)]
    lists: PathBuf,
    #[arg(long, value_enum, default_value = "global")]
    mode: RecoverMode,
    /// Radius of the base code.
    #[arg(long, default_value = "1/4")]
    alpha: Radius,
    /// Input list size used to derive L when --list-bound is absent.
    #[arg(long)]
    ell: Option<usize>,
    #[arg(long)]
    list_bound: Option<usize>,
    #[arg(long, default_value_t = 2)]
    t: usize,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    eps_tilde: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value = "hadamard")]
    ldc: LdcArg,
    #[arg(long, default_value_t = 1)]
    kh: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum LdcArg {
    Identity,
    Hadamard,
}

#[derive(Debug, Subcommand)]
enum Gv {
    /// Decode a received word up to half the minimum distance.
    Decode {
        #[arg(long)]
        code: PathBuf,
        #[arg(long)]
        word: PathBuf,
        /// Minimum distance; computed by enumeration when absent.
        #[arg(long)]
        d: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate the half-distance condition at (rho, eps) for a given constant c.
    Feasibility {
        #[arg(long)]
        rho: f64,
        #[arg(long)]
        eps: f64,
        #[arg(long, default_value_t = 1.0)]
        c: f64,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code: 0 on success, 2 on usage or validation errors, 3 on guard overflow.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| HarnessError::Io(format!("{}: {e}", p.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| HarnessError::Io(e.to_string()))
        }
    }
}

fn emit_json<T: Serialize>(out: Option<&Path>, value: &T) -> Result<(), HarnessError> {
    emit(out, &(serde_json::to_string_pretty(value).expect("plain data") + "\n"))
}

fn emit_code(out: Option<&Path>, code: &LinearCode) -> Result<(), HarnessError> {
    match out {
        Some(p) => Ok(save_code(p, code)?),
        None => emit(out, &(tlr_core::format::code_to_json(code) + "\n")),
    }
}

fn parse_message(text: &str) -> Result<Vec<Symbol>, HarnessError> {
    serde_json::from_str(text).map_err(|e| HarnessError::Invalid(format!("--msg: {e}")))
}

fn execute(cmd: Command) -> Result<(), HarnessError> {
    match cmd {
        Command::Gen(g) => gen(g),
        Command::Encode { code, msg, out } => {
            let msg = parse_message(&msg)?;
            let word = match load_code(&code)? {
                AnyCode::Linear(c) => c.encode(&msg)?,
                AnyCode::Concat(cc) => cc.encode(&msg)?,
            };
            write_word(out.as_deref(), &word)
        }
        Command::Corrupt {
            code,
            word,
            alpha,
            ell,
            seed,
            mode,
            out,
        } => {
            let field = match load_code(&code)? {
                AnyCode::Linear(c) => c.field().clone(),
                AnyCode::Concat(cc) => cc.inner_field().clone(),
            };
            let s = corrupt_to_lists(&load_word(&word)?, &field, alpha, ell, seed, mode)?;
            match out {
                Some(p) => Ok(save_list_tuple(p, &s)?),
                None => emit_json(None, &tlr_core::format::ListTupleFile::from(&s)),
            }
        }
        Command::Recover(args) => recover(args),
        Command::Gv(Gv::Decode { code, word, d, out }) => {
            let cc = load_concat(&code)?;
            let d = match d {
                Some(d) => d,
                None => cc.to_linear_code()?.min_distance()?,
            };
            let got = gv_unique_decode(&cc, &load_word(&word)?, d, &GvDecodeParams::default())?;
            emit_json(
                out.as_deref(),
                &json!({
                    "d": d,
                    "message": got.as_ref().map(|g| &g.message),
                    "errors": got.as_ref().map(|g| g.distance),
                }),
            )
        }
        Command::Gv(Gv::Feasibility { rho, eps, c }) => emit_json(None, &gv_feasibility(rho, eps, c)?),
        Command::Experiment { config, out } => {
            let cfg = ExperimentConfig::load(&config)?;
            let report = run_experiment(&cfg)?;
            match out.or(cfg.output.clone()) {
                Some(p) => report.save(&p),
                None => emit(None, &report.to_json()),
            }
        }
        Command::Report { report, csv, out } => {
            let text = std::fs::read_to_string(&report)
                .map_err(|e| HarnessError::Io(format!("{}: {e}", report.display())))?;
            let r = ExperimentReport::from_json(&text)?;
            if csv {
                let mut buf = Vec::new();
                r.write_csv(&mut buf)?;
                emit(out.as_deref(), &String::from_utf8(buf).expect("csv is utf-8"))
            } else {
                emit_json(out.as_deref(), &r.aggregates)
            }
        }
    }
}

fn write_word(out: Option<&Path>, word: &[Symbol]) -> Result<(), HarnessError> {
    match out {
        Some(p) => Ok(save_word(p, word)?),
        None => emit(None, &(serde_json::to_string(word).expect("plain data") + "\n")),
    }
}

fn shaped(shape: &Shape, code: LinearCode) -> Result<(), HarnessError> {
    let code = if shape.systematic { code.systematize()? } else { code };
    emit_code(shape.out.as_deref(), &code)
}

fn gen(g: Gen) -> Result<(), HarnessError> {
    match g {
        Gen::Rs { shape } => {
            let f = Field::with_order(shape.q as u32)?;
            let c = rs_code(&f, shape.n, shape.k)?;
            shaped(&shape, c)
        }
        Gen::Random { shape, seed } => {
            let f = Field::with_order(shape.q as u32)?;
            let c = random_linear_code(&f, shape.n, shape.k, seed)?;
            shaped(&shape, c)
        }
        Gen::Tensor { code, t, out } => {
            let c = tensor_power(&load_linear(&code)?, t)?.to_linear_code()?;
            emit_code(out.as_deref(), &c)
        }
        Gen::Thommesen { code, rho_in, seed, out } => {
            let rho = Ratio::new(rho_in.numer() as usize, rho_in.denom() as usize);
            let cc = thommesen_sample(&load_linear(&code)?, rho, seed)?;
            match out {
                Some(p) => Ok(save_concat(p, &cc)?),
                None => emit_json(None, &tlr_core::format::ConcatFile::from(&cc)),
            }
        }
    }
}

fn recover(a: RecoverArgs) -> Result<(), HarnessError> {
    let base = load_linear(&a.code)?;
    let s = load_list_tuple(&a.lists)?;
    let out = a.out.as_deref();
    if a.mode == RecoverMode::Global {
        let messages = brute_force_list_recover(&base, &s, a.alpha)?;
        return emit_json(out, &json!({ "alpha": a.alpha, "messages": messages }));
    }
    let list_bound = match a.list_bound {
        Some(l) => l,
        None => worst_case_list_size(&base, a.alpha, a.ell.unwrap_or(s.ell()))?,
    };
    let overrides = Overrides {
        m: a.m,
        ..Overrides::default()
    };
    match a.mode {
        RecoverMode::Global => unreachable!("handled above"),
        RecoverMode::Allr => {
            let allr = allr_tensor(&base, a.t, a.alpha, list_bound, a.eps_tilde.unwrap_or(0.5), overrides)?;
            let rec = allr.preprocess(a.seed)?;
            let mut words = BTreeSet::new();
            rec.for_each_output(&QueryOracle::new(&s), &mut |_, w, _| {
                words.insert(w.to_vec());
                true
            })?;
            emit_json(
                out,
                &json!({
                    "alpha_tilde": allr.alpha_tilde()?,
                    "list_size": rec.list_size(),
                    "query_bound": rec.query_bound(),
                    "words": words,
                }),
            )
        }
        RecoverMode::Compose | RecoverMode::Globalize => {
            let base = if base.is_systematic() { base } else { base.systematize()? };
            let spec = LdcSpec {
                kind: match a.ldc {
                    LdcArg::Identity => LdcKind::Identity,
                    LdcArg::Hadamard => LdcKind::Hadamard,
                },
                kh: a.kh,
                ..LdcSpec::default()
            };
            let ldc = spec.build(base.field())?;
            let params = ComposeParams {
                eps_tilde: a.eps_tilde,
                overrides,
            };
            let llr = compose_llr(&base, a.t, a.alpha, list_bound, ldc, params)?;
            let alpha_tilde = llr.alpha_tilde()?;
            if a.mode == RecoverMode::Globalize {
                let (rl, rc) = default_reps(llr.list_size(), llr.code().n());
                let raw = globalize(&llr, &s, rl, rc, a.seed)?;
                let kept = filter_by_radius(&raw, llr.code(), &s, alpha_tilde)?;
                return emit_json(out, &json!({ "alpha_tilde": alpha_tilde, "messages": kept, "unfiltered": raw }));
            }
            let inst = llr.preprocess(a.seed)?;
            let mut messages = BTreeSet::new();
            let mut failure = None;
            inst.for_each_table(&QueryOracle::new(&s), &mut |j, word| {
                let mut rng = seed::rng(a.seed, &[seed::stage::DECODE, j]);
                let msg: Result<Vec<Symbol>, _> = (0..inst.message_len())
                    .map(|i| inst.decode_from_table(i, word, &mut rng))
                    .collect();
                match msg {
                    Ok(m) => {
                        messages.insert(m);
                        true
                    }
                    Err(e) => {
                        failure = Some(e);
                        false
                    }
                }
            })?;
            if let Some(e) = failure {
                return Err(e.into());
            }
            emit_json(
                out,
                &json!({
                    "alpha_tilde": alpha_tilde,
                    "list_size": inst.list_size(),
                    "query_bound": llr.query_bound(),
                    "messages": messages,
                }),
            )
        }
    }
}
