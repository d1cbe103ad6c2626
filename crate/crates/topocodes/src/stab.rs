//! Pauli operators in symplectic form and the CSS codes built on complexes.

use crate::complex2d::{CellComplex2D, Color};
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec, Span};
use crate::graph::{canon_key, ChainGraph};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::collections::BTreeSet;
use std::fmt;

/// `i^alpha · X^x · Z^z`, with all X factors written to the left.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliOp {
    pub x: BitVec,
    pub z: BitVec,
    pub alpha: u8,
}

impl PauliOp {
    pub fn identity(n: usize) -> Self {
        PauliOp { x: BitVec::zeros(n), z: BitVec::zeros(n), alpha: 0 }
    }

    pub fn from_parts(x: BitVec, z: BitVec) -> Self {
        assert_eq!(x.len(), z.len(), "length mismatch");
        PauliOp { x, z, alpha: 0 }
    }

    pub fn x_type(x: BitVec) -> Self {
        let n = x.len();
        PauliOp { x, z: BitVec::zeros(n), alpha: 0 }
    }

    pub fn z_type(z: BitVec) -> Self {
        let n = z.len();
        PauliOp { x: BitVec::zeros(n), z, alpha: 0 }
    }

    pub fn x_on(n: usize, qubits: &[usize]) -> Self {
        Self::x_type(BitVec::from_indices(n, qubits))
    }

    pub fn z_on(n: usize, qubits: &[usize]) -> Self {
        Self::z_type(BitVec::from_indices(n, qubits))
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    /// Number of qubits acted on nontrivially.
    pub fn weight(&self) -> usize {
        self.support().len()
    }

    pub fn support(&self) -> Vec<usize> {
        let mut s = self.x.clone();
        for i in self.z.ones_iter() {
            s.set(i, true);
        }
        s.support()
    }

    pub fn is_identity(&self) -> bool {
        self.x.is_zero() && self.z.is_zero() && self.alpha % 4 == 0
    }

    /// Equal up to the phase.
    pub fn same_up_to_phase(&self, other: &PauliOp) -> bool {
        self.x == other.x && self.z == other.z
    }

    pub fn commutes(&self, other: &PauliOp) -> bool {
        self.x.dot(&other.z) == self.z.dot(&other.x)
    }

    /// Product `self · other`.
    pub fn multiply(&self, other: &PauliOp) -> PauliOp {
        // moving Z^z1 past X^x2 costs (−1)^{z1·x2}
        let swap = if self.z.dot(&other.x) { 2 } else { 0 };
        PauliOp {
            x: self.x.xor(&other.x),
            z: self.z.xor(&other.z),
            alpha: (self.alpha + other.alpha + swap) % 4,
        }
    }

    pub fn inverse(&self) -> PauliOp {
        // b² = i^{2α} (−1)^{x·z}
        let xz = if self.x.dot(&self.z) { 2 } else { 0 };
        PauliOp { x: self.x.clone(), z: self.z.clone(), alpha: (8 - self.alpha % 4 - xz) % 4 }
    }

    /// Tensor product with an operator on further qubits.
    pub fn tensor(&self, other: &PauliOp) -> PauliOp {
        PauliOp {
            x: self.x.concat(&other.x),
            z: self.z.concat(&other.z),
            alpha: (self.alpha + other.alpha) % 4,
        }
    }

    /// Conjugation by H on every qubit.
    pub fn conj_h(&self) -> PauliOp {
        let both = if self.x.dot(&self.z) { 2 } else { 0 };
        PauliOp { x: self.z.clone(), z: self.x.clone(), alpha: (self.alpha + both) % 4 }
    }

    /// Conjugation by P = diag(1, i) on every qubit: X → iXZ, Z → Z.
    pub fn conj_p(&self) -> PauliOp {
        let wx = (self.x.weight() % 4) as u8;
        PauliOp { x: self.x.clone(), z: self.z.xor(&self.x), alpha: (self.alpha + wx) % 4 }
    }

    /// Conjugation by CNOT from qubit i of the first half to qubit i of the
    /// second half, for every i. The operator must act on 2m qubits.
    pub fn conj_cnot_blocks(&self) -> PauliOp {
        let n = self.n();
        assert!(n % 2 == 0, "CNOT blocks need an even qubit count");
        let m = n / 2;
        let (xa, xb) = (self.x.slice(0, m), self.x.slice(m, n));
        let (za, zb) = (self.z.slice(0, m), self.z.slice(m, n));
        PauliOp { x: xa.concat(&xb.xor(&xa)), z: za.xor(&zb).concat(&zb), alpha: self.alpha }
    }
}

impl fmt::Display for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // as a Pauli word; Y = iXZ absorbs one factor of i per Y
        let ny = self.x.and(&self.z).weight();
        let phase = (self.alpha as usize + 4 * ny - ny) % 4;
        f.write_str(["+", "+i", "-", "-i"][phase])?;
        for q in 0..self.n() {
            let c = match (self.x.get(q), self.z.get(q)) {
                (false, false) => 'I',
                (true, false) => 'X',
                (false, true) => 'Z',
                (true, true) => 'Y',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliOp({self})")
    }
}

pub fn commutes(a: &PauliOp, b: &PauliOp) -> Result<bool> {
    check_len(a.n(), b.n())?;
    Ok(a.commutes(b))
}

pub fn multiply(a: &PauliOp, b: &PauliOp) -> Result<PauliOp> {
    check_len(a.n(), b.n())?;
    Ok(a.multiply(b))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CodeFamily {
    Surface,
    Color,
}

/// CSS code with X checks `hx` and Z checks `hz`. For surface codes qubits
/// are edges, X checks faces and Z checks vertices; for color codes qubits
/// are vertices and both check sets are the faces.
#[derive(Clone, Debug)]
pub struct StabilizerCode {
    pub n: usize,
    pub family: CodeFamily,
    pub lattice: CellComplex2D,
    pub hx: BitMatrix,
    pub hz: BitMatrix,
    pub logical_x: Vec<PauliOp>,
    pub logical_z: Vec<PauliOp>,
    /// Cell index behind each qubit.
    pub qubit_map: Vec<usize>,
    pub distance: Option<usize>,
}

impl StabilizerCode {
    pub fn k(&self) -> usize {
        self.logical_x.len()
    }

    pub fn rank_x(&self) -> usize {
        self.hx.rank()
    }

    pub fn rank_z(&self) -> usize {
        self.hz.rank()
    }

    /// n minus the number of independent generators.
    pub fn k_by_rank(&self) -> usize {
        self.n - self.rank_x() - self.rank_z()
    }

    /// X generators first, then Z generators.
    pub fn generators(&self) -> Vec<PauliOp> {
        let mut g: Vec<PauliOp> = self.hx.rows().iter().cloned().map(PauliOp::x_type).collect();
        g.extend(self.hz.rows().iter().cloned().map(PauliOp::z_type));
        g
    }

    pub fn x_stabilizer_span(&self) -> Span {
        Span::new(self.n, self.hx.rows())
    }

    pub fn z_stabilizer_span(&self) -> Span {
        Span::new(self.n, self.hz.rows())
    }

    pub fn in_normalizer(&self, p: &PauliOp) -> Result<bool> {
        check_len(self.n, p.n())?;
        Ok(self.hz.mul_vec(&p.x).is_zero() && self.hx.mul_vec(&p.z).is_zero())
    }

    pub fn in_stabilizer(&self, p: &PauliOp) -> Result<bool> {
        Ok(self.in_normalizer(p)?
            && p.alpha % 4 == 0
            && self.x_stabilizer_span().contains(&p.x)
            && self.z_stabilizer_span().contains(&p.z))
    }

    /// Plain-text check matrix: one row per generator, X block then Z block.
    pub fn check_matrix_text(&self) -> String {
        let mut out = String::new();
        let zero = BitVec::zeros(self.n);
        for r in self.hx.rows() {
            out.push_str(&format!("{} {}\n", r, zero));
        }
        for r in self.hz.rows() {
            out.push_str(&format!("{} {}\n", zero, r));
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows = |m: &BitMatrix| m.rows().iter().map(|r| r.support()).collect::<Vec<_>>();
        serde_json::json!({
            "family": self.family,
            "n": self.n,
            "k": self.k(),
            "distance": self.distance,
            "x_checks": rows(&self.hx),
            "z_checks": rows(&self.hz),
            "logical_x": self.logical_x.iter().map(|p| p.x.support()).collect::<Vec<_>>(),
            "logical_z": self.logical_z.iter().map(|p| p.z.support()).collect::<Vec<_>>(),
            "qubit_map": self.qubit_map,
        })
    }
}

/// Qubits on edges, X_f on face boundaries, Z_v on vertex stars. Erased
/// cells simply have no generator.
pub fn surface_code(c: &CellComplex2D) -> Result<StabilizerCode> {
    c.validate()?;
    if c.is_colored() && c.edges.iter().any(|e| e.len() < 2) {
        return Err(Error::Invalid("surface code on a color lattice with open edges".into()));
    }
    let n = c.ne();
    let hx = BitMatrix::from_rows(n, c.faces.iter().map(|f| BitVec::from_indices(n, f)).collect());
    let hz = BitMatrix::from_rows(n, c.vertex_edges().iter().map(|v| BitVec::from_indices(n, v)).collect());
    let xs = span_of(&hx);
    let zs = span_of(&hz);
    let xl = cycle_classes(&c.primal_graph(), &xs, &hz);
    let zl = cycle_classes(&c.dual_graph(), &zs, &hx);
    let (lx, lz) = pair_logicals(xl, zl)?;
    let mut code = StabilizerCode {
        n,
        family: CodeFamily::Surface,
        lattice: c.clone(),
        hx,
        hz,
        logical_x: lx,
        logical_z: lz,
        qubit_map: (0..n).collect(),
        distance: None,
    };
    if code.k() != code.k_by_rank() {
        return Err(Error::Invalid(format!("found {} logical pairs, expected {}", code.k(), code.k_by_rank())));
    }
    if code.k() > 0 {
        code.distance = Some(surface_distance_unchecked(&code).0);
    }
    Ok(code)
}

/// Qubits on vertices, X_f and Z_f on every face.
pub fn color_code(c: &CellComplex2D) -> Result<StabilizerCode> {
    if !c.is_colored() {
        return Err(Error::Coloring("color code needs a colored lattice".into()));
    }
    c.validate()?;
    let n = c.nv();
    let h = BitMatrix::from_rows(n, c.face_vertices().iter().map(|f| BitVec::from_indices(n, f)).collect());
    let mut code = StabilizerCode {
        n,
        family: CodeFamily::Color,
        lattice: c.clone(),
        hx: h.clone(),
        hz: h,
        logical_x: Vec::new(),
        logical_z: Vec::new(),
        qubit_map: (0..n).collect(),
        distance: None,
    };
    let k = code.k_by_rank();
    let (lx, lz) = if c.is_closed() {
        match string_logicals(&code) {
            Some(p) if p.0.len() == k => p,
            _ => generic_logicals(&code)?,
        }
    } else if k == 1 {
        // a single string-net class: X̄ and Z̄ share the support of a
        // low-weight representative
        let w = witness_search(&code.hz, &code.x_stabilizer_span(), 400, 7);
        match w {
            Some(x) => (vec![PauliOp::x_type(x.clone())], vec![PauliOp::z_type(x)]),
            None => generic_logicals(&code)?,
        }
    } else {
        generic_logicals(&code)?
    };
    code.logical_x = lx;
    code.logical_z = lz;
    if code.k() != k {
        return Err(Error::Invalid(format!("found {} logical pairs, expected {k}", code.k())));
    }
    Ok(code)
}

/// Surface code for uncolored lattices, color code otherwise.
pub fn code_for(c: &CellComplex2D) -> Result<StabilizerCode> {
    if c.is_colored() {
        color_code(c)
    } else {
        surface_code(c)
    }
}

fn span_of(m: &BitMatrix) -> Span {
    Span::new(m.ncols(), m.rows())
}

/// Lowest-weight independent nontrivial cycles of `g`, relative to `trivial`.
/// Candidates that violate `checks` are skipped.
fn cycle_classes(g: &ChainGraph, trivial: &Span, checks: &BitMatrix) -> Vec<BitVec> {
    let mut cands = BTreeSet::new();
    g.fundamental_cycles(|c| {
        if !trivial.contains(&c) {
            cands.insert((c.weight(), c.support()));
        }
    });
    let mut span = trivial.clone();
    let mut reps = Vec::new();
    let n = trivial_len(checks);
    for (_, sup) in cands {
        let c = BitVec::from_indices(n, &sup);
        if checks.mul_vec(&c).is_zero() && span.insert(&c) {
            reps.push(c);
        }
    }
    reps
}

fn trivial_len(m: &BitMatrix) -> usize {
    m.ncols()
}

/// Symplectic Gram–Schmidt: returns X and Z lists whose pairing matrix is
/// the identity.
fn pair_logicals(mut xs: Vec<BitVec>, mut zs: Vec<BitVec>) -> Result<(Vec<PauliOp>, Vec<PauliOp>)> {
    let mut out_x = Vec::new();
    let mut out_z = Vec::new();
    while let Some(x) = (!xs.is_empty()).then(|| xs.remove(0)) {
        let Some(j) = zs.iter().position(|z| x.dot(z)) else {
            return Err(Error::Invalid("logical operator with no conjugate partner".into()));
        };
        let z = zs.remove(j);
        for o in xs.iter_mut() {
            if o.dot(&z) {
                o.xor_assign(&x);
            }
        }
        for o in zs.iter_mut() {
            if o.dot(&x) {
                o.xor_assign(&z);
            }
        }
        out_x.push(PauliOp::x_type(x));
        out_z.push(PauliOp::z_type(z));
    }
    if !zs.is_empty() {
        return Err(Error::Invalid("unpaired logical operators".into()));
    }
    Ok((out_x, out_z))
}

/// Representatives of ker(hz)/rowspan(hx) and ker(hx)/rowspan(hz) from the
/// kernels, then paired.
fn generic_logicals(code: &StabilizerCode) -> Result<(Vec<PauliOp>, Vec<PauliOp>)> {
    let pick = |checks: &BitMatrix, stab: Span| {
        let mut span = stab;
        checks.kernel_basis().into_iter().filter(|v| span.insert(v)).collect::<Vec<_>>()
    };
    let xs = pick(&code.hz, code.x_stabilizer_span());
    let zs = pick(&code.hx, code.z_stabilizer_span());
    pair_logicals(xs, zs)
}

/// Logical operators of a closed color code from colored strings along the
/// homology generators of the green and blue shrunk lattices.
fn string_logicals(code: &StabilizerCode) -> Option<(Vec<PauliOp>, Vec<PauliOp>)> {
    let c = &code.lattice;
    let ec = c.edge_colors.as_ref()?;
    let mut cands = Vec::new();
    for color in [Color::G, Color::B] {
        let sh = c.shrunk(color).ok()?;
        let hom = sh.homology().ok()?;
        let cedges: Vec<usize> = (0..c.ne()).filter(|&e| ec[e] == color).collect();
        for rep in hom.h1_reps {
            let path: Vec<usize> = rep.ones_iter().map(|i| cedges[i]).collect();
            cands.push(string_support(c, &path, color));
        }
    }
    let mut span = code.x_stabilizer_span();
    let xs: Vec<BitVec> = cands.into_iter().filter(|v| code.hz.mul_vec(v).is_zero() && span.insert(v)).collect();
    let zs = xs.clone();
    pair_logicals(xs, zs).ok()
}

fn string_support(c: &CellComplex2D, path: &[usize], color: Color) -> BitVec {
    let ec = c.edge_colors.as_ref().expect("colored lattice");
    let mut s = BitVec::zeros(c.nv());
    for &e in path {
        if ec[e] == color {
            for &v in &c.edges[e] {
                s.flip(v);
            }
        }
    }
    s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PauliKind {
    X,
    Z,
}

/// String operator of color `color` along `path` (edge ids): X or Z on the
/// vertices of the path's `color` edges. The walk must be closed or end on
/// boundaries of that color.
pub fn colored_string(code: &StabilizerCode, path: &[usize], color: Color, kind: PauliKind) -> Result<PauliOp> {
    if code.family != CodeFamily::Color {
        return Err(Error::Unsupported("colored strings need a color code".into()));
    }
    let c = &code.lattice;
    for &e in path {
        if e >= c.ne() {
            return Err(Error::Invalid(format!("edge {e} out of range")));
        }
    }
    let chain = c.edge_chain(path);
    let ends = c.boundary_maps()?.d1.mul_vec(&chain);
    if !ends.is_zero() {
        let mut allowed = BTreeSet::new();
        for b in &c.boundaries {
            if b.mark == crate::complex2d::BoundaryMark::color(color) {
                for &e in &b.edges {
                    allowed.extend(c.edges[e].iter().copied());
                }
            }
        }
        if let Some(v) = ends.ones_iter().find(|v| !allowed.contains(v)) {
            return Err(Error::Invalid(format!("string ends at vertex {v}, not on a {} boundary", color.letter())));
        }
    }
    let s = string_support(c, path, color);
    let op = match kind {
        PauliKind::X => PauliOp::x_type(s),
        PauliKind::Z => PauliOp::z_type(s),
    };
    if !code.in_normalizer(&op)? {
        return Err(Error::Invalid("string operator does not commute with the stabilizer".into()));
    }
    Ok(op)
}

#[derive(Clone, Debug)]
pub struct DistanceReport {
    /// True when the search was complete.
    pub exact: bool,
    pub lower_bound: usize,
    pub upper_bound: Option<usize>,
    pub witness: Option<PauliOp>,
}

impl DistanceReport {
    pub fn distance(&self) -> Option<usize> {
        if self.exact {
            self.upper_bound
        } else {
            None
        }
    }
}

fn surface_distance_unchecked(code: &StabilizerCode) -> (usize, PauliOp) {
    let c = &code.lattice;
    let xs = code.x_stabilizer_span();
    let zs = code.z_stabilizer_span();
    let bx = c.primal_graph().shortest_cycle_where(|v| !xs.contains(v));
    let bz = c.dual_graph().shortest_cycle_where(|v| !zs.contains(v));
    let (wx, wz) = (bx.as_ref().map_or(usize::MAX, |v| v.weight()), bz.as_ref().map_or(usize::MAX, |v| v.weight()));
    if wx <= wz {
        (wx, PauliOp::x_type(bx.expect("nontrivial cycle")))
    } else {
        (wz, PauliOp::z_type(bz.expect("nontrivial cycle")))
    }
}

/// Minimum weight of a nontrivial logical operator. Surface codes use
/// shortest nontrivial cycles on the lattice and its dual. Color codes use a
/// syndrome-guided search over X supports of weight up to `budget`; if it
/// finds nothing the report carries the lower bound `budget + 1` and a
/// witness from a randomized scan when one was found.
pub fn distance(code: &StabilizerCode, budget: usize) -> Result<DistanceReport> {
    if code.k() == 0 {
        return Err(Error::Invalid("code encodes no qubits".into()));
    }
    match code.family {
        CodeFamily::Surface => {
            let (d, w) = surface_distance_unchecked(code);
            Ok(DistanceReport { exact: true, lower_bound: d, upper_bound: Some(d), witness: Some(w) })
        }
        CodeFamily::Color => {
            let zl: Vec<BitVec> = code.logical_z.iter().map(|p| p.z.clone()).collect();
            let xl: Vec<BitVec> = code.logical_x.iter().map(|p| p.x.clone()).collect();
            let sx = min_weight_logical(&code.hz, &zl, budget);
            // Hx = Hz for color codes, so the Z side has the same distance
            let sz = if code.hx == code.hz { None } else { min_weight_logical(&code.hx, &xl, budget) };
            let best = match (sx, sz) {
                (Some(a), Some(b)) => Some(if b.weight() < a.weight() { PauliOp::z_type(b) } else { PauliOp::x_type(a) }),
                (Some(a), None) => Some(PauliOp::x_type(a)),
                (None, Some(b)) => Some(PauliOp::z_type(b)),
                (None, None) => None,
            };
            if let Some(w) = best {
                let d = w.weight();
                return Ok(DistanceReport { exact: true, lower_bound: d, upper_bound: Some(d), witness: Some(w) });
            }
            let wit = upper_bound_witness(code);
            // nothing up to the budget and a witness just above it settles it
            let exact = wit.as_ref().is_some_and(|w| w.weight() == budget + 1);
            Ok(DistanceReport {
                exact,
                lower_bound: budget + 1,
                upper_bound: wit.as_ref().map(|w| w.weight()),
                witness: wit,
            })
        }
    }
}

/// Low-weight logical from randomized information sets; no optimality claim.
pub fn upper_bound_witness(code: &StabilizerCode) -> Option<PauliOp> {
    let x = witness_search(&code.hz, &code.x_stabilizer_span(), 400, 7).map(PauliOp::x_type);
    let z = witness_search(&code.hx, &code.z_stabilizer_span(), 400, 11).map(PauliOp::z_type);
    match (x, z) {
        (Some(a), Some(b)) => Some(if b.weight() < a.weight() { b } else { a }),
        (a, b) => a.or(b),
    }
}

/// Kernel vectors of `checks` (and sums of pairs of them) taken under random
/// column orders; returns the lightest one outside `trivial`.
fn witness_search(checks: &BitMatrix, trivial: &Span, iters: usize, seed: u64) -> Option<BitVec> {
    let n = checks.ncols();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<BitVec> = None;
    let consider = |v: BitVec, best: &mut Option<BitVec>| {
        let better = match best {
            None => true,
            Some(b) => (v.weight(), canon_key(&v)) < (b.weight(), canon_key(b)),
        };
        if better && !trivial.contains(&v) {
            *best = Some(v);
        }
    };
    let mut perm: Vec<usize> = (0..n).collect();
    for _ in 0..iters {
        perm.shuffle(&mut rng);
        let permuted = BitMatrix::from_columns(checks.nrows(), &perm.iter().map(|&q| checks.column(q).support()).collect::<Vec<_>>());
        let ker: Vec<BitVec> = permuted
            .kernel_basis()
            .into_iter()
            .map(|v| BitVec::from_indices(n, &v.ones_iter().map(|i| perm[i]).collect::<Vec<_>>()))
            .collect();
        for (i, a) in ker.iter().enumerate() {
            consider(a.clone(), &mut best);
            for b in &ker[i + 1..] {
                consider(a.xor(b), &mut best);
            }
        }
    }
    best
}

/// Exact minimum-weight x with `checks·x = 0` and odd overlap with one of
/// `conj`, by iterative deepening up to `budget`. `None` if there is none
/// that light.
pub fn min_weight_logical(checks: &BitMatrix, conj: &[BitVec], budget: usize) -> Option<BitVec> {
    let n = checks.ncols();
    let check_qubits: Vec<Vec<usize>> = checks.rows().iter().map(|r| r.support()).collect();
    let mut qubit_checks = vec![Vec::new(); n];
    for (c, qs) in check_qubits.iter().enumerate() {
        for &q in qs {
            qubit_checks[q].push(c);
        }
    }
    let maxcol = qubit_checks.iter().map(|c| c.len()).max().unwrap_or(0);
    let ctx = SearchCtx { check_qubits, qubit_checks, maxcol, conj, n, nchecks: checks.nrows() };
    for w in 1..=budget {
        let hit = (0..n).into_par_iter().find_map_first(|q0| ctx.search_from(q0, w));
        if hit.is_some() {
            return hit;
        }
    }
    None
}

struct SearchCtx<'a> {
    check_qubits: Vec<Vec<usize>>,
    qubit_checks: Vec<Vec<usize>>,
    maxcol: usize,
    conj: &'a [BitVec],
    n: usize,
    nchecks: usize,
}

struct SearchState {
    x: BitVec,
    synd: BitVec,
    viol: usize,
    banned: Vec<bool>,
}

impl SearchCtx<'_> {
    fn search_from(&self, q0: usize, w: usize) -> Option<BitVec> {
        let mut st = SearchState {
            x: BitVec::zeros(self.n),
            synd: BitVec::zeros(self.nchecks),
            viol: 0,
            banned: vec![false; self.n],
        };
        for q in 0..=q0 {
            st.banned[q] = true;
        }
        self.toggle(&mut st, q0);
        if self.dfs(&mut st, w - 1) {
            Some(st.x)
        } else {
            None
        }
    }

    fn toggle(&self, st: &mut SearchState, q: usize) {
        st.x.flip(q);
        for &c in &self.qubit_checks[q] {
            st.synd.flip(c);
            if st.synd.get(c) {
                st.viol += 1;
            } else {
                st.viol -= 1;
            }
        }
    }

    fn dfs(&self, st: &mut SearchState, rem: usize) -> bool {
        if st.viol == 0 {
            // a trivial zero-syndrome piece cannot be part of a minimal logical
            return self.conj.iter().any(|l| l.dot(&st.x));
        }
        if rem == 0 || st.viol > self.maxcol * rem {
            return false;
        }
        let c = st.synd.first_one().expect("violated check");
        let mut tried = Vec::new();
        let mut found = false;
        for &q in &self.check_qubits[c] {
            if st.banned[q] || st.x.get(q) {
                continue;
            }
            self.toggle(st, q);
            if self.dfs(st, rem - 1) {
                found = true;
                break;
            }
            self.toggle(st, q);
            st.banned[q] = true;
            tried.push(q);
        }
        for q in tried {
            st.banned[q] = false;
        }
        found
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstraintReport {
    /// Each relation among the generators with whether it holds.
    pub relations: Vec<(String, bool)>,
    /// Independent generators, as counted by rank.
    pub independent: usize,
    /// What the relations alone predict: V+F−2 or 2F−4.
    pub expected_independent: usize,
    pub ok: bool,
}

fn row_sum(m: &BitMatrix, keep: impl Fn(usize) -> bool) -> BitVec {
    let mut v = BitVec::zeros(m.ncols());
    for (i, r) in m.rows().iter().enumerate() {
        if keep(i) {
            v.xor_assign(r);
        }
    }
    v
}

/// Relations among the generators of a code on a closed surface: the product
/// of all face and of all vertex operators is trivial for surface codes; for
/// color codes the products over red, green and blue faces agree, for X and
/// for Z. Also checks that these are the only relations.
pub fn check_constraints(code: &StabilizerCode) -> Result<ConstraintReport> {
    let c = &code.lattice;
    if !c.is_closed() {
        return Err(Error::Unsupported("generator relations are checked on closed surfaces".into()));
    }
    let mut relations = Vec::new();
    let expected_independent = match code.family {
        CodeFamily::Surface => {
            relations.push(("prod X_f = 1".to_string(), row_sum(&code.hx, |_| true).is_zero()));
            relations.push(("prod Z_v = 1".to_string(), row_sum(&code.hz, |_| true).is_zero()));
            code.hx.nrows() + code.hz.nrows() - 2
        }
        CodeFamily::Color => {
            let colors = c.face_colors.as_ref().ok_or_else(|| Error::Coloring("faces are not colored".into()))?;
            for (name, m) in [("X", &code.hx), ("Z", &code.hz)] {
                let by: Vec<BitVec> = Color::ALL.iter().map(|&col| row_sum(m, |i| colors[i] == col)).collect();
                relations.push((format!("prod_R {name}_f = prod_G {name}_f"), by[0] == by[1]));
                relations.push((format!("prod_G {name}_f = prod_B {name}_f"), by[1] == by[2]));
            }
            code.hx.nrows() + code.hz.nrows() - 4
        }
    };
    let independent = code.rank_x() + code.rank_z();
    let ok = relations.iter().all(|r| r.1) && independent == expected_independent;
    Ok(ConstraintReport { relations, independent, expected_independent, ok })
}

#[derive(Clone, Debug, Serialize)]
pub struct CodespaceReport {
    pub chains: usize,
    /// Non-cycles whose projection vanished.
    pub annihilated: usize,
    /// Cycles whose projection is the uniform superposition over z + B1.
    pub uniform_cosets: usize,
    pub cycles: usize,
    pub classes: usize,
    pub expected_classes: usize,
    pub ok: bool,
}

/// Enumerates every X-basis chain |c⟩ of a closed surface code and applies
/// the two projectors combinatorially: Z_v acts by the sign (−1)^{(∂c)_v},
/// the X_f generate the coset c + B1.
pub fn codespace_check(code: &StabilizerCode) -> Result<CodespaceReport> {
    if code.family != CodeFamily::Surface || !code.lattice.is_closed() {
        return Err(Error::Unsupported("codespace check needs a closed surface code".into()));
    }
    let n = code.n;
    if n > 24 {
        return Err(Error::SizeBound(format!("codespace check enumerates 2^{n} chains; limit is 2^24")));
    }
    let nf = code.hx.nrows();
    if nf > 20 {
        return Err(Error::SizeBound("too many faces to expand the projector".into()));
    }
    let faces: Vec<u64> = code.hx.rows().iter().map(|r| r.words().first().copied().unwrap_or(0)).collect();
    let stars: Vec<u64> = code.hz.rows().iter().map(|r| r.words().first().copied().unwrap_or(0)).collect();
    let rank = code.rank_x();
    let coset_size = 1usize << rank;
    let mut report = CodespaceReport {
        chains: 1 << n,
        annihilated: 0,
        uniform_cosets: 0,
        cycles: 0,
        classes: 0,
        expected_classes: 1 << code.k(),
        ok: false,
    };
    let mut seen = std::collections::HashSet::new();
    for c in 0u64..(1u64 << n) {
        let flagged = stars.iter().any(|&s| (s & c).count_ones() % 2 == 1);
        if flagged {
            report.annihilated += 1;
            continue;
        }
        report.cycles += 1;
        // expand ∏_f (1 + X_f)/2 on |c⟩ and tally the amplitudes
        let mut amp: std::collections::HashMap<u64, usize> = std::collections::HashMap::new();
        for s in 0u64..(1u64 << nf) {
            let mut v = c;
            for (f, &m) in faces.iter().enumerate() {
                if s >> f & 1 == 1 {
                    v ^= m;
                }
            }
            *amp.entry(v).or_default() += 1;
        }
        let each = (1usize << nf) / coset_size;
        if amp.len() == coset_size && amp.values().all(|&a| a == each) {
            report.uniform_cosets += 1;
        }
        let rep = *amp.keys().min().unwrap();
        seen.insert(rep);
    }
    report.classes = seen.len();
    report.ok = report.annihilated + report.cycles == report.chains
        && report.uniform_cosets == report.cycles
        && report.classes == report.expected_classes;
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Gate {
    #[serde(rename = "H_all")]
    HAll,
    #[serde(rename = "P_all")]
    PAll,
    #[serde(rename = "CNOT_pairwise")]
    CnotPairwise,
}

impl std::str::FromStr for Gate {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "H_all" | "h" | "H" => Ok(Gate::HAll),
            "P_all" | "p" | "P" => Ok(Gate::PAll),
            "CNOT_pairwise" | "cnot" | "CNOT" => Ok(Gate::CnotPairwise),
            _ => Err(Error::Parse(format!("unknown gate {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FaceFailure {
    pub generator: usize,
    pub size: usize,
    /// Sign in front of X_f Z_f after conjugation.
    pub sign: i8,
}

#[derive(Clone, Debug, Serialize)]
pub struct TransversalReport {
    pub gate: Gate,
    pub preserved: bool,
    pub failures: Vec<FaceFailure>,
    /// Surface code under H: images equal the dual lattice's generators.
    pub matches_dual: Option<bool>,
    /// Logical action, when it could be identified ("P", "-P", "H", ...).
    pub logical_action: Option<String>,
    pub logical_x_weight: Option<usize>,
}

pub fn transversal_check(code: &StabilizerCode, gate: Gate) -> Result<TransversalReport> {
    let gens = code.generators();
    let mut rep = TransversalReport {
        gate,
        preserved: true,
        failures: Vec::new(),
        matches_dual: None,
        logical_action: None,
        logical_x_weight: None,
    };
    match gate {
        Gate::HAll | Gate::PAll => {
            for (i, g) in gens.iter().enumerate() {
                let img = if gate == Gate::HAll { g.conj_h() } else { g.conj_p() };
                if !code.in_stabilizer(&img)? {
                    rep.preserved = false;
                    let size = g.weight();
                    let sign = if img.alpha % 4 == 2 { -1 } else { 1 };
                    rep.failures.push(FaceFailure { generator: i, size, sign });
                }
            }
        }
        Gate::CnotPairwise => {
            let id = PauliOp::identity(code.n);
            let doubled = double_code(code);
            for g in &gens {
                for img in [g.tensor(&id).conj_cnot_blocks(), id.tensor(g).conj_cnot_blocks()] {
                    if !doubled.in_stabilizer(&img)? {
                        rep.preserved = false;
                    }
                }
            }
            let ok = (0..code.k()).all(|i| {
                let (x, z) = (&code.logical_x[i], &code.logical_z[i]);
                let xi = x.tensor(&id).conj_cnot_blocks();
                let zi = id.tensor(z).conj_cnot_blocks();
                equivalent(&doubled, &xi, &x.tensor(x)) && equivalent(&doubled, &zi, &z.tensor(z))
            });
            if ok && rep.preserved {
                rep.logical_action = Some("CNOT".into());
            }
            return Ok(rep);
        }
    }
    if gate == Gate::HAll && code.family == CodeFamily::Surface && code.lattice.is_closed() {
        let dual = surface_code(&code.lattice.dual()?)?;
        let imgs: BTreeSet<PauliOp> = gens.iter().map(|g| g.conj_h()).collect();
        let want: BTreeSet<PauliOp> = dual.generators().into_iter().collect();
        rep.matches_dual = Some(imgs == want);
    }
    if rep.preserved && code.family == CodeFamily::Color && code.k() == 1 {
        let (x, z) = (&code.logical_x[0], &code.logical_z[0]);
        rep.logical_x_weight = Some(x.weight());
        match gate {
            Gate::HAll => {
                if equivalent(code, &x.conj_h(), z) && equivalent(code, &z.conj_h(), x) {
                    rep.logical_action = Some("H".into());
                }
            }
            Gate::PAll => {
                // X̄ ↦ i^{|X̄|} X̄ Z̄ when Z̄ shares the support of X̄
                let img = x.conj_p();
                let xz = x.multiply(z);
                let w = x.weight();
                if x.x == z.z && w % 2 == 1 && img.same_up_to_phase(&xz) && equivalent(code, &z.conj_p(), z) {
                    let rel = (img.alpha + 4 - xz.alpha) % 4;
                    rep.logical_action = Some(if rel == 1 { "P".into() } else { "-P".into() });
                }
            }
            Gate::CnotPairwise => unreachable!(),
        }
    }
    Ok(rep)
}

/// a ∈ b·S
fn equivalent(code: &StabilizerCode, a: &PauliOp, b: &PauliOp) -> bool {
    code.in_stabilizer(&b.inverse().multiply(a)).unwrap_or(false)
}

fn double_code(code: &StabilizerCode) -> StabilizerCode {
    let n = code.n;
    let z = BitVec::zeros(n);
    let blk = |m: &BitMatrix| {
        let mut rows: Vec<BitVec> = m.rows().iter().map(|r| r.concat(&z)).collect();
        rows.extend(m.rows().iter().map(|r| z.concat(r)));
        BitMatrix::from_rows(2 * n, rows)
    };
    StabilizerCode {
        n: 2 * n,
        family: code.family,
        lattice: code.lattice.clone(),
        hx: blk(&code.hx),
        hz: blk(&code.hz),
        logical_x: Vec::new(),
        logical_z: Vec::new(),
        qubit_map: Vec::new(),
        distance: None,
    }
}
