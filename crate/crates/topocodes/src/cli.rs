//! Command-line front end. Machine output goes to stdout (or `--out`), the
//! resolved configuration and human summaries to stderr.

use crate::builders::{build, Family, Hole, LatticeSpec};
use crate::decode::{adjudicate, ml_decode_exact, sample_error_with, syndrome, MwpmDecoder, Sides};
use crate::error::Error;
use crate::ising::class_probability_identity;
use crate::mc::{parse_grid, run_sweep, DecoderKind, SweepSpec};
use crate::rng::{derive_seed, stream};
use crate::stab::{check_constraints, code_for, distance, CodeFamily, StabilizerCode};
use crate::BitVec;
use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::Rng;
use serde_json::json;
use std::ffi::OsString;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "TOPOCODES_WORKERS";

#[derive(Parser, Debug)]
#[command(name = "topocodes", version, about = "Surface and color codes: build, inspect, decode, sweep")]
pub struct Cli {
    /// Worker threads (default: $TOPOCODES_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write machine output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<std::path::PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit the lattice as JSON.
    Build(CodeArgs),
    /// Print [[n,k,d]], topology and generator relations.
    Info {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dist: DistArgs,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Sample errors, decode them and report one JSON line per trial.
    Decode {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "mwpm")]
        decoder: String,
        #[arg(long, default_value = "both")]
        sides: String,
    },
    /// Failure rates over sizes and a probability grid.
    Sweep {
        #[arg(long, default_value = "toric")]
        family: String,
        /// Comma-separated sizes.
        #[arg(long, value_delimiter = ',', required = true)]
        sizes: Vec<usize>,
        /// `a:b:step` or a comma-separated list.
        #[arg(long)]
        p: String,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value = "mwpm")]
        decoder: String,
        #[arg(long, default_value = "x")]
        sides: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Class probability against the Ising partition function.
    IsingVerify {
        #[command(flatten)]
        code: CodeArgs,
        #[arg(long)]
        p: f64,
        /// `zero` or `random:SEED`.
        #[arg(long, default_value = "zero")]
        chain: String,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
    },
    /// Minimum logical weight, exact or bounded.
    Distance {
        #[command(flatten)]
        code: CodeArgs,
        #[command(flatten)]
        dist: DistArgs,
    },
}

#[derive(Args, Debug, Clone)]
struct CodeArgs {
    #[arg(long)]
    family: String,
    #[arg(long, default_value_t = 3)]
    size: usize,
    /// Cells to erase, e.g. `f0,f5,v2`.
    #[arg(long, value_delimiter = ',')]
    holes: Vec<String>,
}

#[derive(Args, Debug, Clone)]
struct DistArgs {
    /// Search budget for the color-code logical search.
    #[arg(long, default_value_t = 6)]
    budget: usize,
    /// Search up to one below the best witness, which settles the distance.
    #[arg(long)]
    exhaustive: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Csv,
    Json,
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::Parse(_)) { EXIT_USAGE } else { EXIT_FAILED };
        Failure { code, msg: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: EXIT_FAILED, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

type Out<'a> = &'a mut dyn Write;

impl CodeArgs {
    fn spec(&self) -> Result<LatticeSpec, Failure> {
        let family: Family = self.family.parse()?;
        let holes = self.holes.iter().map(|h| h.parse::<Hole>()).collect::<Result<Vec<_>, _>>()?;
        Ok(LatticeSpec::new(family, self.size).with_holes(holes))
    }

    fn code(&self) -> Result<StabilizerCode, Failure> {
        Ok(code_for(&build(&self.spec()?)?)?)
    }

    fn config(&self) -> serde_json::Value {
        json!({"family": self.family, "size": self.size, "holes": self.holes})
    }
}

fn fresh_seed() -> u64 {
    let t = std::time::SystemTime::now().duration_since(std::time::UNIX_EPOCH).map(|d| d.as_nanos()).unwrap_or(0);
    derive_seed(&[t as u64, (t >> 64) as u64, std::process::id() as u64])
}

fn resolve_workers(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(n) = flag {
        return if n == 0 { Err(usage("--workers must be at least 1")) } else { Ok(n) };
    }
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        return v.trim().parse::<usize>().ok().filter(|&n| n > 0).ok_or_else(|| usage(format!("bad {WORKERS_ENV}={v:?}")));
    }
    Ok(std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

fn distance_json(code: &StabilizerCode, dist: &DistArgs, err: Out) -> Result<serde_json::Value, Failure> {
    let mut rep = distance(code, dist.budget)?;
    if dist.exhaustive && !rep.exact {
        if let Some(ub) = rep.upper_bound {
            writeln!(err, "exhaustive search up to weight {}", ub - 1)?;
            rep = distance(code, ub - 1)?;
        }
    }
    Ok(json!({
        "exact": rep.exact,
        "distance": rep.distance(),
        "lower_bound": rep.lower_bound,
        "upper_bound": rep.upper_bound,
        "witness": rep.witness.as_ref().map(|w| w.support()),
    }))
}

fn info(code: &StabilizerCode, dist: &DistArgs, format: Format, out: Out, err: Out) -> Result<i32, Failure> {
    let d = distance_json(code, dist, err)?;
    let h = code.lattice.homology()?;
    let constraints = if code.lattice.is_closed() { Some(check_constraints(code)?) } else { None };
    let title = match (d["exact"].as_bool(), d["upper_bound"].as_u64()) {
        (Some(true), Some(ub)) => format!("[[{},{},{}]]", code.n, code.k(), ub),
        (_, Some(ub)) => format!("[[{},{},{ub}]] (distance: upper bound {ub} / exact with --exhaustive)", code.n, code.k()),
        _ => format!("[[{},{},?]] (distance above {})", code.n, code.k(), d["lower_bound"]),
    };
    let ok = constraints.as_ref().map_or(true, |c| c.ok) && code.k() == code.k_by_rank();
    match format {
        Format::Json => {
            let v = json!({
                "n": code.n, "k": code.k(), "distance": d,
                "family": code.family, "chi": h.chi, "genus": h.genus, "closed": code.lattice.is_closed(),
                "x_generators": code.hx.nrows(), "z_generators": code.hz.nrows(),
                "rank_x": code.rank_x(), "rank_z": code.rank_z(),
                "constraints": constraints,
                "summary": title,
            });
            writeln!(out, "{v}")?;
        }
        _ => {
            writeln!(out, "{title}")?;
            writeln!(out, "family: {:?}", code.family)?;
            writeln!(out, "chi = {}, genus = {}, closed = {}", h.chi, h.genus, code.lattice.is_closed())?;
            writeln!(
                out,
                "generators: {} X (rank {}), {} Z (rank {})",
                code.hx.nrows(),
                code.rank_x(),
                code.hz.nrows(),
                code.rank_z()
            )?;
            if let Some(c) = &constraints {
                for (name, holds) in &c.relations {
                    writeln!(out, "  {name}: {}", if *holds { "holds" } else { "FAILS" })?;
                }
                writeln!(out, "  independent generators: {} (expected {})", c.independent, c.expected_independent)?;
            }
        }
    }
    Ok(if ok { EXIT_OK } else { EXIT_FAILED })
}

fn decode_cmd(
    code: &StabilizerCode,
    p: f64,
    trials: usize,
    seed: u64,
    decoder: DecoderKind,
    sides: Sides,
    out: Out,
    err: Out,
) -> Result<i32, Failure> {
    let model = sides.model(p)?;
    let mwpm = match decoder {
        DecoderKind::Mwpm => Some(MwpmDecoder::new(code)?),
        DecoderKind::MlExact => None,
    };
    let mut failures = 0;
    for t in 0..trials {
        let mut rng = stream(derive_seed(&[seed, t as u64]));
        let e = sample_error_with(&model, code.n, &mut rng);
        let s = syndrome(code, &e)?;
        let corr = match &mwpm {
            Some(m) => m.decode(&s)?,
            None => ml_decode_exact(code, &s, &model)?.correction,
        };
        let ok = adjudicate(code, &e, &corr)?;
        failures += usize::from(!ok);
        let line = json!({
            "trial": t, "error_weight": e.weight(), "syndrome_weight": s.weight(),
            "correction_weight": corr.weight(), "success": ok,
        });
        writeln!(out, "{line}")?;
    }
    let summary = json!({"summary": {"trials": trials, "failures": failures, "rate": failures as f64 / trials.max(1) as f64}});
    writeln!(out, "{summary}")?;
    writeln!(err, "{failures} failures in {trials} trials")?;
    Ok(EXIT_OK)
}

fn parse_chain(s: &str, code: &StabilizerCode, p: f64) -> Result<BitVec, Failure> {
    if s == "zero" {
        return Ok(BitVec::zeros(code.n));
    }
    let seed = s
        .strip_prefix("random:")
        .and_then(|v| v.parse::<u64>().ok())
        .ok_or_else(|| usage(format!("--chain expects zero or random:SEED, got {s:?}")))?;
    let mut rng = stream(seed);
    let idx: Vec<usize> = (0..code.n).filter(|_| rng.gen::<f64>() < p).collect();
    Ok(BitVec::from_indices(code.n, &idx))
}

fn run(cli: Cli, out: Out, err: Out) -> Result<i32, Failure> {
    let workers = resolve_workers(cli.workers)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Failure { code: EXIT_FAILED, msg: e.to_string() })?;
    let mut buf: Vec<u8> = Vec::new();
    let mut ebuf: Vec<u8> = Vec::new();
    // the pool needs Send closures; collect both streams and copy them out
    let status = pool.install(|| -> Result<i32, Failure> {
        let out: Out = &mut buf;
        let err: Out = &mut ebuf;
        match &cli.command {
            Command::Build(c) => {
                writeln!(err, "config: {}", json!({"command": "build", "code": c.config()}))?;
                let lattice = build(&c.spec()?)?;
                writeln!(out, "{}", lattice.to_json())?;
                Ok(EXIT_OK)
            }
            Command::Info { code, dist, format } => {
                let cfg = json!({"command": "info", "code": code.config(), "budget": dist.budget, "exhaustive": dist.exhaustive});
                writeln!(err, "config: {cfg}")?;
                info(&code.code()?, dist, *format, out, err)
            }
            Command::Decode { code, p, trials, seed, decoder, sides } => {
                let seed = seed.unwrap_or_else(fresh_seed);
                let (decoder, sides): (DecoderKind, Sides) = (decoder.parse()?, sides.parse()?);
                let cfg = json!({"command": "decode", "code": code.config(), "p": p, "trials": trials,
                    "seed": seed, "decoder": decoder, "sides": sides, "workers": workers});
                writeln!(err, "config: {cfg}")?;
                decode_cmd(&code.code()?, *p, *trials, seed, decoder, sides, out, err)
            }
            Command::Sweep { family, sizes, p, trials, seed, decoder, sides, format } => {
                let spec = SweepSpec {
                    family: family.parse()?,
                    sizes: sizes.clone(),
                    p_grid: parse_grid(p)?,
                    trials: *trials,
                    seed: seed.unwrap_or_else(fresh_seed),
                    decoder: decoder.parse()?,
                    sides: sides.parse()?,
                };
                writeln!(err, "config: {}", json!({"command": "sweep", "spec": spec, "workers": workers}))?;
                spec.validate()?;
                let res = run_sweep(&spec)?;
                let crossing = serde_json::to_value(&res.crossing).expect("serializable");
                match format {
                    Format::Json => writeln!(out, "{}", res.to_json())?,
                    _ => {
                        write!(out, "{}", res.to_csv())?;
                        if let Some(path) = &cli.out {
                            std::fs::write(path.with_extension("crossing.json"), format!("{crossing}\n"))?;
                        }
                    }
                }
                writeln!(err, "crossing: {crossing}")?;
                Ok(EXIT_OK)
            }
            Command::IsingVerify { code, p, chain, tolerance } => {
                let c = code.code()?;
                writeln!(
                    err,
                    "config: {}",
                    json!({"command": "ising-verify", "code": code.config(), "p": p, "chain": chain, "tolerance": tolerance})
                )?;
                let ch = parse_chain(chain, &c, *p)?;
                let r = class_probability_identity(&c, &ch, *p)?;
                writeln!(out, "{}", serde_json::to_value(&r).expect("serializable"))?;
                let ok = r.rel_error < *tolerance;
                writeln!(err, "relative error {:.3e}: {}", r.rel_error, if ok { "ok" } else { "FAILED" })?;
                Ok(if ok { EXIT_OK } else { EXIT_FAILED })
            }
            Command::Distance { code, dist } => {
                let cfg = json!({"command": "distance", "code": code.config(), "budget": dist.budget, "exhaustive": dist.exhaustive});
                writeln!(err, "config: {cfg}")?;
                let c = code.code()?;
                let mut v = distance_json(&c, dist, err)?;
                v["surface"] = json!(c.family == CodeFamily::Surface);
                writeln!(out, "{v}")?;
                Ok(EXIT_OK)
            }
        }
    });
    err.write_all(&ebuf)?;
    let status = status?;
    match &cli.out {
        Some(path) => std::fs::write(path, &buf)?,
        None => out.write_all(&buf)?,
    }
    Ok(status)
}

/// Parses `args` (program name first) and runs the command.
pub fn main_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return EXIT_USAGE;
            }
            let _ = write!(out, "{text}");
            return EXIT_OK;
        }
    };
    match run(cli, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}
