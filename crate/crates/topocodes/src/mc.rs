//! Monte Carlo estimates of logical failure rates and their crossing point.

use crate::builders::{build, Family, LatticeSpec};
use crate::decode::{adjudicate, ml_decode_exact, sample_error_with, syndrome, MwpmDecoder, Sides};
use crate::error::{Error, Result};
use crate::rng::{stream, trial_seed};
use crate::stab::{code_for, StabilizerCode};
use rayon::prelude::*;
use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DecoderKind {
    Mwpm,
    MlExact,
}

impl std::str::FromStr for DecoderKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "mwpm" => Ok(DecoderKind::Mwpm),
            "ml" | "ml_exact" => Ok(DecoderKind::MlExact),
            _ => Err(Error::Parse(format!("unknown decoder {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepSpec {
    pub family: Family,
    pub sizes: Vec<usize>,
    pub p_grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub decoder: DecoderKind,
    pub sides: Sides,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        if self.sizes.is_empty() || self.p_grid.is_empty() {
            return Err(Error::Invalid("empty size list or probability grid".into()));
        }
        if self.p_grid.iter().any(|p| !(0.0..=0.5).contains(p)) {
            return Err(Error::Invalid("probabilities must lie in [0, 0.5]".into()));
        }
        if self.p_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Invalid("probability grid must be strictly increasing".into()));
        }
        Ok(())
    }
}

/// Parses `a:b:step` (inclusive of b up to rounding) or a comma list.
pub fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let num = |t: &str| t.trim().parse::<f64>().map_err(|_| Error::Parse(format!("bad number {t:?}")));
    let parts: Vec<&str> = s.split(':').collect();
    match parts.len() {
        1 => s.split(',').map(num).collect(),
        3 => {
            let (a, b, step) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step <= 0.0 || b < a {
                return Err(Error::Parse(format!("bad range {s:?}")));
            }
            let count = ((b - a) / step + 1e-9).floor() as usize;
            // round to kill accumulated float noise in the printed grid
            Ok((0..=count).map(|i| ((a + i as f64 * step) * 1e12).round() / 1e12).collect())
        }
        _ => Err(Error::Parse(format!("expected a:b:step or a list, got {s:?}"))),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PointResult {
    pub d: usize,
    pub p: f64,
    pub trials: usize,
    pub failures: usize,
    pub rate: f64,
    pub lo95: f64,
    pub hi95: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PairCrossing {
    pub d_small: usize,
    pub d_big: usize,
    pub p: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Crossing {
    /// Median of the pairwise crossings.
    pub estimate: Option<f64>,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub pairwise: Vec<PairCrossing>,
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub points: Vec<PointResult>,
    pub crossing: Crossing,
}

/// Wilson score interval at 95%.
pub fn wilson(failures: usize, trials: usize) -> (f64, f64) {
    const Z: f64 = 1.959963984540054;
    let n = trials as f64;
    let f = failures as f64 / n;
    let z2 = Z * Z;
    let denom = 1.0 + z2 / n;
    let center = (f + z2 / (2.0 * n)) / denom;
    let half = Z / denom * (f * (1.0 - f) / n + z2 / (4.0 * n * n)).sqrt();
    ((center - half).max(0.0), (center + half).min(1.0))
}

enum Decoder {
    Mwpm(MwpmDecoder),
    MlExact,
}

struct Instance {
    d: usize,
    code: StabilizerCode,
    decoder: Decoder,
}

const BLOCK: usize = 250;

fn run_trials(inst: &Instance, spec: &SweepSpec, p_index: usize, range: std::ops::Range<usize>) -> Result<usize> {
    let model = spec.sides.model(spec.p_grid[p_index])?;
    let mut failures = 0;
    for t in range {
        let mut rng = stream(trial_seed(spec.seed, inst.d as u64, p_index as u64, t as u64));
        let e = sample_error_with(&model, inst.code.n, &mut rng);
        let s = syndrome(&inst.code, &e)?;
        let corr = match &inst.decoder {
            Decoder::Mwpm(m) => m.decode(&s)?,
            Decoder::MlExact => ml_decode_exact(&inst.code, &s, &model)?.correction,
        };
        if !adjudicate(&inst.code, &e, &corr)? {
            failures += 1;
        }
    }
    Ok(failures)
}

/// Runs every (d, p) point. Counts depend only on the spec, never on the
/// number of worker threads.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let instances: Vec<Instance> = spec
        .sizes
        .iter()
        .map(|&d| {
            let code = code_for(&build(&LatticeSpec::new(spec.family, d))?)?;
            let decoder = match spec.decoder {
                DecoderKind::Mwpm => Decoder::Mwpm(MwpmDecoder::new(&code)?),
                DecoderKind::MlExact => Decoder::MlExact,
            };
            Ok(Instance { d, code, decoder })
        })
        .collect::<Result<_>>()?;
    let mut jobs = Vec::new();
    for i in 0..instances.len() {
        for j in 0..spec.p_grid.len() {
            for start in (0..spec.trials).step_by(BLOCK) {
                jobs.push((i, j, start..(start + BLOCK).min(spec.trials)));
            }
        }
    }
    let counts: Vec<(usize, usize, usize)> = jobs
        .into_par_iter()
        .map(|(i, j, r)| run_trials(&instances[i], spec, j, r).map(|f| (i, j, f)))
        .collect::<Result<_>>()?;
    let mut fail = vec![vec![0usize; spec.p_grid.len()]; instances.len()];
    for (i, j, f) in counts {
        fail[i][j] += f;
    }
    let mut points = Vec::new();
    for (i, inst) in instances.iter().enumerate() {
        for (j, &p) in spec.p_grid.iter().enumerate() {
            let (lo95, hi95) = wilson(fail[i][j], spec.trials);
            points.push(PointResult {
                d: inst.d,
                p,
                trials: spec.trials,
                failures: fail[i][j],
                rate: fail[i][j] as f64 / spec.trials as f64,
                lo95,
                hi95,
            });
        }
    }
    let crossing = estimate_crossing(&points);
    Ok(SweepResult { spec: spec.clone(), points, crossing })
}

fn logit(f: f64, trials: usize) -> f64 {
    let eps = 0.5 / trials as f64;
    let f = f.clamp(eps, 1.0 - eps);
    (f / (1.0 - f)).ln()
}

/// Pairwise crossings of the failure curves, found where the larger size
/// stops beating the smaller one, interpolated linearly in logit space.
pub fn estimate_crossing(points: &[PointResult]) -> Crossing {
    let mut sizes: Vec<usize> = points.iter().map(|p| p.d).collect();
    sizes.sort_unstable();
    sizes.dedup();
    let curve = |d: usize| {
        let mut c: Vec<&PointResult> = points.iter().filter(|p| p.d == d).collect();
        c.sort_by(|a, b| a.p.total_cmp(&b.p));
        c
    };
    let mut pairwise = Vec::new();
    for (a, &ds) in sizes.iter().enumerate() {
        for &db in &sizes[a + 1..] {
            let (cs, cb) = (curve(ds), curve(db));
            if cs.len() != cb.len() || cs.len() < 2 {
                continue;
            }
            let diff: Vec<f64> =
                cs.iter().zip(&cb).map(|(s, b)| logit(b.rate, b.trials) - logit(s.rate, s.trials)).collect();
            for i in 0..diff.len() - 1 {
                if diff[i] < 0.0 && diff[i + 1] >= 0.0 {
                    let t = diff[i] / (diff[i] - diff[i + 1]);
                    pairwise.push(PairCrossing { d_small: ds, d_big: db, p: cs[i].p + t * (cs[i + 1].p - cs[i].p) });
                    break;
                }
            }
        }
    }
    if pairwise.is_empty() {
        return Crossing { estimate: None, lo: None, hi: None, pairwise, note: "no crossing in grid".into() };
    }
    let mut ps: Vec<f64> = pairwise.iter().map(|c| c.p).collect();
    ps.sort_by(f64::total_cmp);
    let m = ps.len();
    let median = if m % 2 == 1 { ps[m / 2] } else { 0.5 * (ps[m / 2 - 1] + ps[m / 2]) };
    Crossing {
        estimate: Some(median),
        lo: Some(ps[0]),
        hi: Some(ps[m - 1]),
        pairwise,
        note: format!("median of {m} pairwise crossings"),
    }
}

impl SweepResult {
    /// Columns d, p, trials, failures, rate, lo95, hi95.
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        for p in &self.points {
            w.serialize(p).expect("plain numeric record");
        }
        String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8")
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }

    pub fn point(&self, d: usize, p: f64) -> Option<&PointResult> {
        self.points.iter().find(|x| x.d == d && (x.p - p).abs() < 1e-12)
    }
}
