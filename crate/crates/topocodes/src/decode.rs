//! Noise, syndromes and decoders. X and Z errors are handled separately: the
//! X part of an error is seen by the Z checks and vice versa.

use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec, Span};
use crate::graph::{Bfs, ChainGraph};
use crate::matching::min_weight_perfect_matching;
use crate::stab::{CodeFamily, PauliOp, StabilizerCode};
use rand::Rng;
use serde::Serialize;

/// Independent X flips with probability `px` and Z flips with `pz`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ErrorModel {
    pub px: f64,
    pub pz: f64,
}

impl ErrorModel {
    pub fn new(px: f64, pz: f64) -> Result<Self> {
        for p in [px, pz] {
            if !(0.0..=1.0).contains(&p) {
                return Err(Error::Invalid(format!("probability {p} outside [0, 1]")));
            }
        }
        Ok(ErrorModel { px, pz })
    }

    pub fn bit_flip(p: f64) -> Result<Self> {
        Self::new(p, 0.0)
    }

    pub fn independent(p: f64) -> Result<Self> {
        Self::new(p, p)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Sides {
    X,
    Z,
    Both,
}

impl Sides {
    pub fn model(self, p: f64) -> Result<ErrorModel> {
        match self {
            Sides::X => ErrorModel::new(p, 0.0),
            Sides::Z => ErrorModel::new(0.0, p),
            Sides::Both => ErrorModel::new(p, p),
        }
    }
}

impl std::str::FromStr for Sides {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "x" => Ok(Sides::X),
            "z" => Ok(Sides::Z),
            "both" | "xz" => Ok(Sides::Both),
            _ => Err(Error::Parse(format!("unknown error sides {s:?}"))),
        }
    }
}

fn bernoulli(n: usize, p: f64, rng: &mut impl Rng) -> BitVec {
    let mut v = BitVec::zeros(n);
    if p <= 0.0 {
        return v;
    }
    for i in 0..n {
        if rng.gen::<f64>() < p {
            v.set(i, true);
        }
    }
    v
}

pub fn sample_error_with(model: &ErrorModel, n: usize, rng: &mut impl Rng) -> PauliOp {
    let x = bernoulli(n, model.px, rng);
    let z = bernoulli(n, model.pz, rng);
    PauliOp::from_parts(x, z)
}

pub fn sample_error(model: &ErrorModel, n: usize, seed: u64) -> PauliOp {
    sample_error_with(model, n, &mut crate::rng::stream(seed))
}

/// `vertex_bits`: outcomes of the Z-type generators (they see X errors).
/// `face_bits`: outcomes of the X-type generators (they see Z errors).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Syndrome {
    pub vertex_bits: BitVec,
    pub face_bits: BitVec,
}

impl Syndrome {
    pub fn weight(&self) -> usize {
        self.vertex_bits.weight() + self.face_bits.weight()
    }

    pub fn is_zero(&self) -> bool {
        self.vertex_bits.is_zero() && self.face_bits.is_zero()
    }
}

pub fn syndrome(code: &StabilizerCode, e: &PauliOp) -> Result<Syndrome> {
    check_len(code.n, e.n())?;
    Ok(Syndrome { vertex_bits: code.hz.mul_vec(&e.x), face_bits: code.hx.mul_vec(&e.z) })
}

#[derive(Clone, Debug)]
pub struct DecodeOutcome {
    pub correction: PauliOp,
    pub success: bool,
    /// Class of the residual error: its commutation with each logical Z
    /// (X part) and with each logical X (Z part).
    pub residual_class: (BitVec, BitVec),
}

fn residual_labels(code: &StabilizerCode, r: &PauliOp) -> (BitVec, BitVec) {
    let k = code.k();
    let mut lx = BitVec::zeros(k);
    let mut lz = BitVec::zeros(k);
    for i in 0..k {
        lx.set(i, r.x.dot(&code.logical_z[i].z));
        lz.set(i, r.z.dot(&code.logical_x[i].x));
    }
    (lx, lz)
}

pub fn outcome(code: &StabilizerCode, error: &PauliOp, correction: &PauliOp) -> Result<DecodeOutcome> {
    if syndrome(code, error)? != syndrome(code, correction)? {
        return Err(Error::Invalid("correction does not reproduce the syndrome".into()));
    }
    let residual = error.multiply(correction);
    let residual_class = residual_labels(code, &residual);
    let success = residual_class.0.is_zero() && residual_class.1.is_zero();
    Ok(DecodeOutcome { correction: correction.clone(), success, residual_class })
}

/// Success iff error·correction acts trivially on the code space.
pub fn adjudicate(code: &StabilizerCode, error: &PauliOp, correction: &PauliOp) -> Result<bool> {
    Ok(outcome(code, error, correction)?.success)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MatchingMode {
    #[default]
    Exact,
    /// Pairs the closest defects first. For profiling only.
    Greedy,
}

/// Shortest paths on one decoding graph, with a BFS tree from every node.
#[derive(Clone, Debug)]
struct SideGraph {
    graph: ChainGraph,
    trees: Vec<Bfs>,
}

impl SideGraph {
    fn new(graph: ChainGraph) -> Self {
        let trees = (0..graph.nnodes()).map(|v| graph.bfs(v)).collect();
        SideGraph { graph, trees }
    }

    fn dist(&self, a: usize, b: usize) -> i64 {
        let d = self.trees[a].dist[b];
        if d == u32::MAX {
            i64::MAX / 4
        } else {
            d as i64
        }
    }

    fn decode(&self, flagged: &BitVec, mode: MatchingMode) -> Result<BitVec> {
        let defects: Vec<usize> = flagged.support();
        let m = defects.len();
        let mut out = BitVec::zeros(self.graph.nedges());
        if m == 0 {
            return Ok(out);
        }
        let vnode = self.graph.virtual_node();
        if vnode.is_none() && m % 2 == 1 {
            return Err(Error::Invalid(format!("odd number of defects ({m}) on a closed surface")));
        }
        // nodes 0..m are defects; with open boundaries m..2m are their
        // boundary partners, which pair among themselves for free
        let mut edges = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                edges.push((i, j, self.dist(defects[i], defects[j])));
            }
        }
        let nodes = if let Some(v) = vnode {
            for i in 0..m {
                edges.push((i, m + i, self.dist(defects[i], v)));
                for j in i + 1..m {
                    edges.push((m + i, m + j, 0));
                }
            }
            2 * m
        } else {
            m
        };
        let mate = match mode {
            MatchingMode::Exact => {
                min_weight_perfect_matching(nodes, &edges).ok_or_else(|| Error::Invalid("no perfect matching".into()))?
            }
            MatchingMode::Greedy => greedy_matching(nodes, &mut edges)?,
        };
        for i in 0..m {
            let j = mate[i];
            if j < m {
                if i < j {
                    self.graph.tree_path(&self.trees[defects[i]], defects[j], &mut out);
                }
            } else {
                let v = vnode.expect("boundary partner");
                self.graph.tree_path(&self.trees[v], defects[i], &mut out);
            }
        }
        Ok(out)
    }
}

fn greedy_matching(nodes: usize, edges: &mut [(usize, usize, i64)]) -> Result<Vec<usize>> {
    edges.sort_by_key(|&(a, b, w)| (w, a, b));
    let mut mate = vec![usize::MAX; nodes];
    for &(a, b, _) in edges.iter() {
        if mate[a] == usize::MAX && mate[b] == usize::MAX {
            mate[a] = b;
            mate[b] = a;
        }
    }
    if mate.iter().any(|&m| m == usize::MAX) {
        return Err(Error::Invalid("greedy matching left defects unpaired".into()));
    }
    Ok(mate)
}

/// Minimum-weight perfect matching decoder for surface codes. Vertex
/// defects are matched on the lattice, face defects on the dual; open
/// boundaries act as a shared virtual node reachable from every defect.
#[derive(Clone, Debug)]
pub struct MwpmDecoder {
    n: usize,
    x_side: SideGraph,
    z_side: SideGraph,
    pub mode: MatchingMode,
}

impl MwpmDecoder {
    pub fn new(code: &StabilizerCode) -> Result<Self> {
        if code.family != CodeFamily::Surface {
            return Err(Error::Unsupported("matching decodes surface codes only".into()));
        }
        Ok(MwpmDecoder {
            n: code.n,
            x_side: SideGraph::new(code.lattice.primal_graph()),
            z_side: SideGraph::new(code.lattice.dual_graph()),
            mode: MatchingMode::Exact,
        })
    }

    pub fn decode(&self, s: &Syndrome) -> Result<PauliOp> {
        let x = self.x_side.decode(&s.vertex_bits, self.mode)?;
        let z = self.z_side.decode(&s.face_bits, self.mode)?;
        check_len(self.n, x.len())?;
        Ok(PauliOp::from_parts(x, z))
    }
}

pub fn mwpm_decode(code: &StabilizerCode, s: &Syndrome) -> Result<PauliOp> {
    MwpmDecoder::new(code)?.decode(s)
}

/// Largest stabilizer rank the coset sums will enumerate.
pub const MAX_COSET_RANK: usize = 20;

/// One CSS side: errors of one type, the checks that see them, the
/// stabilizers that make them degenerate and the logical operators that
/// label their classes.
struct CssSide {
    n: usize,
    checks: BitMatrix,
    stab_basis: Vec<BitVec>,
    logicals: Vec<BitVec>,
}

impl CssSide {
    fn x(code: &StabilizerCode) -> Self {
        CssSide {
            n: code.n,
            checks: code.hz.clone(),
            stab_basis: code.hx.row_basis(),
            logicals: code.logical_x.iter().map(|p| p.x.clone()).collect(),
        }
    }

    fn z(code: &StabilizerCode) -> Self {
        CssSide {
            n: code.n,
            checks: code.hx.clone(),
            stab_basis: code.hz.row_basis(),
            logicals: code.logical_z.iter().map(|p| p.z.clone()).collect(),
        }
    }

    fn check_bound(&self) -> Result<()> {
        if self.stab_basis.len() > MAX_COSET_RANK || self.logicals.len() > 8 {
            return Err(Error::SizeBound(format!(
                "coset enumeration over 2^{} stabilizers and 2^{} classes",
                self.stab_basis.len(),
                self.logicals.len()
            )));
        }
        Ok(())
    }

    fn class_rep(&self, base: &BitVec, class: usize) -> BitVec {
        let mut v = base.clone();
        for (i, l) in self.logicals.iter().enumerate() {
            if class >> i & 1 == 1 {
                v.xor_assign(l);
            }
        }
        v
    }

    /// Probability of the coset base + B, where B is the stabilizer span.
    fn coset_prob(&self, base: &BitVec, p: f64) -> f64 {
        let hist = coset_weights(base, &self.stab_basis);
        weight_sum(&hist, self.n, p)
    }

    /// Class probabilities for the errors with syndrome `s`.
    fn class_probs(&self, s: &BitVec, p: f64) -> Result<(BitVec, Vec<f64>)> {
        let base = self
            .checks
            .solve(s)
            .ok_or_else(|| Error::Invalid("syndrome is not produced by any error".into()))?;
        let probs = (0..1usize << self.logicals.len()).map(|c| self.coset_prob(&self.class_rep(&base, c), p)).collect();
        Ok((base, probs))
    }
}

/// Weight histogram of base + span(basis), by Gray-code enumeration.
pub fn coset_weights(base: &BitVec, basis: &[BitVec]) -> Vec<u64> {
    let mut hist = vec![0u64; base.len() + 1];
    let mut v = base.clone();
    hist[v.weight()] += 1;
    for i in 1u64..(1u64 << basis.len()) {
        v.xor_assign(&basis[i.trailing_zeros() as usize]);
        hist[v.weight()] += 1;
    }
    hist
}

/// Σ_w hist[w] p^w (1−p)^{n−w}
pub fn weight_sum(hist: &[u64], n: usize, p: f64) -> f64 {
    hist.iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(w, &c)| c as f64 * p.powi(w as i32) * (1.0 - p).powi((n - w) as i32))
        .sum()
}

fn argmax(v: &[f64]) -> usize {
    // first maximum, i.e. the lowest class index on ties
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn normalize(v: &[f64]) -> Vec<f64> {
    let t: f64 = v.iter().sum();
    if t > 0.0 {
        v.iter().map(|x| x / t).collect()
    } else {
        vec![1.0 / v.len() as f64; v.len()]
    }
}

#[derive(Clone, Debug)]
pub struct MlResult {
    pub correction: PauliOp,
    /// Posterior over the 2^k classes of the X part, class bit i meaning
    /// "add the i-th logical X".
    pub x_posterior: Vec<f64>,
    pub z_posterior: Vec<f64>,
    pub x_class: usize,
    pub z_class: usize,
}

/// Exact maximum-likelihood decoding by summing the error probability over
/// every coset consistent with the syndrome. Ties go to the lowest class.
pub fn ml_decode_exact(code: &StabilizerCode, s: &Syndrome, model: &ErrorModel) -> Result<MlResult> {
    let xs = CssSide::x(code);
    let zs = CssSide::z(code);
    xs.check_bound()?;
    zs.check_bound()?;
    let (xb, xp) = xs.class_probs(&s.vertex_bits, model.px)?;
    let (zb, zp) = zs.class_probs(&s.face_bits, model.pz)?;
    let (x_class, z_class) = (argmax(&xp), argmax(&zp));
    Ok(MlResult {
        correction: PauliOp::from_parts(xs.class_rep(&xb, x_class), zs.class_rep(&zb, z_class)),
        x_posterior: normalize(&xp),
        z_posterior: normalize(&zp),
        x_class,
        z_class,
    })
}

/// The same coset-enumeration decoder, restricted to color codes (matching
/// does not apply to them).
pub fn color_ml_decode(code: &StabilizerCode, s: &Syndrome, model: &ErrorModel) -> Result<MlResult> {
    if code.family != CodeFamily::Color {
        return Err(Error::Unsupported("color_ml_decode needs a color code".into()));
    }
    ml_decode_exact(code, s, model)
}

/// Σ over syndromes of the largest class probability, for one side.
fn side_success(side: &CssSide, p: f64) -> Result<f64> {
    side.check_bound()?;
    // pure errors: single-qubit flips with independent syndromes
    let mut synd_span = Span::new(side.checks.nrows(), &[]);
    let mut pure = Vec::new();
    for q in 0..side.n {
        let e = BitVec::from_indices(side.n, &[q]);
        if synd_span.insert(&side.checks.mul_vec(&e)) {
            pure.push(e);
        }
    }
    let total = pure.len() + side.stab_basis.len() + side.logicals.len();
    if total > 26 {
        return Err(Error::SizeBound(format!("success probability enumerates 2^{total} errors")));
    }
    let mut t = BitVec::zeros(side.n);
    let mut sum = 0.0;
    for i in 0u64..(1u64 << pure.len()) {
        if i > 0 {
            t.xor_assign(&pure[i.trailing_zeros() as usize]);
        }
        let best = (0..1usize << side.logicals.len())
            .map(|c| side.coset_prob(&side.class_rep(&t, c), p))
            .fold(0.0, f64::max);
        sum += best;
    }
    Ok(sum)
}

/// Success probability of the optimal (class maximum-likelihood) decoder,
/// the two sides multiplied. A side with zero flip probability contributes 1.
pub fn success_prob_exact(code: &StabilizerCode, model: &ErrorModel) -> Result<f64> {
    let px = if model.px > 0.0 { side_success(&CssSide::x(code), model.px)? } else { 1.0 };
    let pz = if model.pz > 0.0 { side_success(&CssSide::z(code), model.pz)? } else { 1.0 };
    Ok(px * pz)
}
