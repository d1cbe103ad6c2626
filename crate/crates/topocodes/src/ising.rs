//! Random-bond Ising models attached to CSS codes, with exact enumeration.
//!
//! Spins sit on the X generators (faces). Every qubit gives one interaction
//! term over the generators containing it: two spins across an edge of a
//! surface code, three spins around a vertex of a color code. A bit-flip
//! chain c fixes the coupling signs τ_q = (−1)^{c_q}.

use crate::decode::{coset_weights, weight_sum};
use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec};
use crate::rng::{derive_seed, stream};
use crate::stab::{CodeFamily, StabilizerCode};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::LN_2;

/// Largest spin count `partition_exact` enumerates.
pub const MAX_SPINS: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum IsingKind {
    TwoBody,
    ThreeBody,
}

#[derive(Clone, Debug)]
pub struct IsingInstance {
    pub kind: IsingKind,
    pub nspins: usize,
    /// Spins in each interaction term, one term per qubit.
    pub terms: Vec<Vec<usize>>,
    /// ±1 per term.
    pub tau: Vec<i8>,
    pub beta: f64,
    /// Spin-term incidence (rows are spins), used to solve for gauge flips.
    incidence: BitMatrix,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NishimoriPoint {
    pub p: f64,
    pub beta: f64,
}

impl NishimoriPoint {
    pub fn new(p: f64) -> Result<Self> {
        Ok(NishimoriPoint { p, beta: beta_nishimori(p)? })
    }
}

/// β with e^{−2β} = p/(1−p). p = 1/2 gives β = 0.
pub fn beta_nishimori(p: f64) -> Result<f64> {
    if !(p > 0.0 && p <= 0.5) {
        return Err(Error::Invalid(format!("Nishimori line needs 0 < p <= 1/2, got {p}")));
    }
    Ok(0.5 * ((1.0 - p) / p).ln())
}

impl IsingInstance {
    /// A model with explicit terms; two-body terms have at most two spins,
    /// three-body terms at most three.
    pub fn new(kind: IsingKind, nspins: usize, terms: Vec<Vec<usize>>, tau: Vec<i8>, beta: f64) -> Result<Self> {
        check_len(terms.len(), tau.len())?;
        let max_arity = if kind == IsingKind::TwoBody { 2 } else { 3 };
        let mut incidence = BitMatrix::zeros(nspins, terms.len());
        for (q, t) in terms.iter().enumerate() {
            if t.is_empty() || t.len() > max_arity || t.iter().any(|&i| i >= nspins) {
                return Err(Error::Invalid(format!("term {q} = {t:?} does not fit a {kind:?} model on {nspins} spins")));
            }
            for &i in t {
                incidence.set(i, q, true);
            }
        }
        if tau.iter().any(|&t| t != 1 && t != -1) {
            return Err(Error::Invalid("couplings must be +1 or -1".into()));
        }
        Ok(IsingInstance { kind, nspins, terms, tau, beta, incidence })
    }

    /// The model for X errors on `code`, with couplings from `chain`.
    pub fn from_code(code: &StabilizerCode, chain: &BitVec, beta: f64) -> Result<Self> {
        check_len(code.n, chain.len())?;
        let kind = match code.family {
            CodeFamily::Surface => IsingKind::TwoBody,
            CodeFamily::Color => IsingKind::ThreeBody,
        };
        let max_arity = if kind == IsingKind::TwoBody { 2 } else { 3 };
        let terms: Vec<Vec<usize>> = (0..code.n).map(|q| code.hx.column(q).support()).collect();
        if let Some(t) = terms.iter().find(|t| t.len() > max_arity) {
            return Err(Error::Unsupported(format!("{}-spin term in a {kind:?} model", t.len())));
        }
        let tau = (0..code.n).map(|q| if chain.get(q) { -1 } else { 1 }).collect();
        Ok(IsingInstance { kind, nspins: code.hx.nrows(), terms, tau, beta, incidence: code.hx.clone() })
    }

    pub fn with_beta(&self, beta: f64) -> Self {
        IsingInstance { beta, ..self.clone() }
    }

    /// Flip the coupling signs on the support of `chain`.
    pub fn flipped(&self, chain: &BitVec) -> Result<Self> {
        check_len(self.terms.len(), chain.len())?;
        let mut out = self.clone();
        for q in chain.ones_iter() {
            out.tau[q] = -out.tau[q];
        }
        Ok(out)
    }

    /// The chain whose couplings this instance carries.
    pub fn chain(&self) -> BitVec {
        let idx: Vec<usize> = (0..self.tau.len()).filter(|&q| self.tau[q] < 0).collect();
        BitVec::from_indices(self.tau.len(), &idx)
    }

    /// −Σ τ_q Π_{i∈q} s_i for spins s_i = ±1.
    pub fn energy(&self, s: &[i8]) -> Result<i64> {
        check_len(self.nspins, s.len())?;
        if s.iter().any(|&v| v != 1 && v != -1) {
            return Err(Error::Invalid("spins must be +1 or -1".into()));
        }
        let mut e = 0i64;
        for (t, &tau) in self.terms.iter().zip(&self.tau) {
            let prod: i64 = t.iter().map(|&i| s[i] as i64).product();
            e -= tau as i64 * prod;
        }
        Ok(e)
    }

    /// Number of spin configurations at each value of −H, indexed by
    /// −H + (number of terms).
    fn energy_histogram(&self) -> Result<Vec<u64>> {
        if self.nspins > MAX_SPINS {
            return Err(Error::SizeBound(format!("{} spins, enumeration limit is {MAX_SPINS}", self.nspins)));
        }
        let m = self.terms.len();
        let mut of_spin = vec![Vec::new(); self.nspins];
        for (q, t) in self.terms.iter().enumerate() {
            for &i in t {
                of_spin[i].push(q);
            }
        }
        // value of each term at the current configuration, all spins up
        let mut val: Vec<i64> = self.tau.iter().map(|&t| t as i64).collect();
        let mut neg_h: i64 = val.iter().sum();
        let mut hist = vec![0u64; 2 * m + 1];
        hist[(neg_h + m as i64) as usize] += 1;
        for g in 1u64..(1u64 << self.nspins) {
            let i = g.trailing_zeros() as usize;
            for &q in &of_spin[i] {
                neg_h -= 2 * val[q];
                val[q] = -val[q];
            }
            hist[(neg_h + m as i64) as usize] += 1;
        }
        Ok(hist)
    }

    /// ln Z with Z = Σ_s e^{−βH(s)}, summed exactly over 2^N configurations.
    pub fn partition_exact(&self) -> Result<f64> {
        let hist = self.energy_histogram()?;
        let m = self.terms.len() as i64;
        let logs: Vec<f64> = hist
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(j, &c)| (c as f64).ln() + self.beta * (j as i64 - m) as f64)
            .collect();
        Ok(log_sum_exp(&logs))
    }

    /// Free energy −ln Z / β.
    pub fn free_energy(&self) -> Result<f64> {
        if self.beta == 0.0 {
            return Err(Error::Invalid("free energy at beta = 0 is unbounded".into()));
        }
        Ok(-self.partition_exact()? / self.beta)
    }

    /// Spin flips s_b whose action on couplings is the boundary `b`.
    pub fn gauge_for(&self, b: &BitVec) -> Result<Vec<i8>> {
        check_len(self.terms.len(), b.len())?;
        let y = self
            .incidence
            .transpose()
            .solve(b)
            .ok_or_else(|| Error::Invalid("chain is not a boundary".into()))?;
        Ok((0..self.nspins).map(|i| if y.get(i) { -1 } else { 1 }).collect())
    }

    /// ln of (2 cosh β)^{−n} e^{−βH(all up)}, which equals ln p_c at the
    /// Nishimori point.
    pub fn reference_log_weight(&self) -> f64 {
        let up = vec![1i8; self.nspins];
        let h = self.energy(&up).expect("length matches") as f64;
        -(self.terms.len() as f64) * log_2cosh(self.beta) - self.beta * h
    }
}

fn log_sum_exp(v: &[f64]) -> f64 {
    let m = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + v.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}

fn log_2cosh(beta: f64) -> f64 {
    let a = beta.abs();
    a + (1.0 + (-2.0 * a).exp()).ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct GaugeReport {
    pub configurations: usize,
    pub exhaustive: bool,
    pub energies_match: bool,
    pub log_z: f64,
    pub log_z_shifted: f64,
    pub ok: bool,
}

/// Checks H_{τ_{c+b}}(s) = H_{τ_c}(s·s_b) and Z(τ_{c+b}) = Z(τ_c) for a
/// boundary b. Exhaustive up to 16 spins, 4096 seeded samples beyond.
pub fn gauge_property_check(inst: &IsingInstance, b: &BitVec) -> Result<GaugeReport> {
    let sb = inst.gauge_for(b)?;
    let shifted = inst.flipped(b)?;
    let n = inst.nspins;
    let exhaustive = n <= 16;
    let configs: Vec<Vec<i8>> = if exhaustive {
        (0u64..1 << n).map(|m| (0..n).map(|i| if m >> i & 1 == 1 { -1 } else { 1 }).collect()).collect()
    } else {
        let mut rng = stream(derive_seed(&[0x6761_7567, n as u64]));
        (0..4096).map(|_| (0..n).map(|_| if rng.gen::<bool>() { -1 } else { 1 }).collect()).collect()
    };
    let mut energies_match = true;
    for s in &configs {
        let moved: Vec<i8> = s.iter().zip(&sb).map(|(a, b)| a * b).collect();
        if shifted.energy(s)? != inst.energy(&moved)? {
            energies_match = false;
            break;
        }
    }
    let (log_z, log_z_shifted) = if n <= MAX_SPINS {
        (inst.partition_exact()?, shifted.partition_exact()?)
    } else {
        (f64::NAN, f64::NAN)
    };
    let z_match = n > MAX_SPINS || (log_z - log_z_shifted).abs() <= 1e-12 * log_z.abs().max(1.0);
    Ok(GaugeReport {
        configurations: configs.len(),
        exhaustive,
        energies_match,
        log_z,
        log_z_shifted,
        ok: energies_match && z_match,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub p: f64,
    pub beta: f64,
    /// Class probability from the coset sum.
    pub lhs: f64,
    /// 2^{−s} (2 cosh β)^{−n} Z(β, τ_c), with 2^s the global spin symmetry.
    pub rhs: f64,
    pub rel_error: f64,
    /// 2^s: 2 for surface codes on closed surfaces, 4 for color codes.
    pub symmetry_factor: u64,
    pub coset_terms: u64,
    pub spin_terms: u64,
}

/// Compares the probability of the class of `chain` with the partition
/// function of the Ising model at the Nishimori temperature.
pub fn class_probability_identity(code: &StabilizerCode, chain: &BitVec, p: f64) -> Result<IdentityReport> {
    let beta = beta_nishimori(p)?;
    let inst = IsingInstance::from_code(code, chain, beta)?;
    let basis = code.hx.row_basis();
    if basis.len() > MAX_SPINS {
        return Err(Error::SizeBound(format!("coset of 2^{} terms", basis.len())));
    }
    let lhs = weight_sum(&coset_weights(chain, &basis), code.n, p);
    let sym = inst.nspins - basis.len();
    let log_rhs = inst.partition_exact()? - sym as f64 * LN_2 - code.n as f64 * log_2cosh(beta);
    let rhs = log_rhs.exp();
    Ok(IdentityReport {
        p,
        beta,
        lhs,
        rhs,
        rel_error: (lhs - rhs).abs() / lhs.abs().max(f64::MIN_POSITIVE),
        symmetry_factor: 1 << sym,
        coset_terms: 1 << basis.len(),
        spin_terms: 1 << inst.nspins,
    })
}

/// Δ = F(τ_{c+z}) − F(τ_c). Zero at β = 0.
pub fn domain_wall_free_energy(inst: &IsingInstance, z: &BitVec) -> Result<f64> {
    let other = inst.flipped(z)?;
    if inst.beta == 0.0 {
        // both sides are −T N ln 2; the difference vanishes
        return Ok(0.0);
    }
    Ok((inst.partition_exact()? - other.partition_exact()?) / inst.beta)
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct QuenchedEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Disorder average of Δ over chains with i.i.d. flips at rate `p`.
pub fn quenched_average(
    code: &StabilizerCode,
    z: &BitVec,
    p: f64,
    beta: f64,
    samples: usize,
    seed: u64,
) -> Result<QuenchedEstimate> {
    if samples == 0 {
        return Err(Error::Invalid("need at least one disorder sample".into()));
    }
    let base = IsingInstance::from_code(code, &BitVec::zeros(code.n), beta)?;
    let vals: Vec<f64> = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream(derive_seed(&[seed, i as u64]));
            let idx: Vec<usize> = (0..code.n).filter(|_| rng.gen::<f64>() < p).collect();
            let inst = base.flipped(&BitVec::from_indices(code.n, &idx))?;
            domain_wall_free_energy(&inst, z)
        })
        .collect::<Result<_>>()?;
    let n = vals.len() as f64;
    let mean = vals.iter().sum::<f64>() / n;
    let var = if vals.len() > 1 { vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0) } else { 0.0 };
    Ok(QuenchedEstimate { mean, std_error: (var / n).sqrt(), samples })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{build, Family, LatticeSpec};
    use crate::stab::code_for;

    fn code(f: Family, d: usize) -> StabilizerCode {
        code_for(&build(&LatticeSpec::new(f, d)).unwrap()).unwrap()
    }

    #[test]
    fn nishimori_values() {
        assert_eq!(beta_nishimori(0.5).unwrap(), 0.0);
        assert!((beta_nishimori(0.1).unwrap() - 0.5 * 9f64.ln()).abs() < 1e-12);
        let b = beta_nishimori(0.11).unwrap();
        assert!(((-2.0 * b).exp() - 0.11 / 0.89).abs() < 1e-12);
        assert!(beta_nishimori(0.0).is_err() && beta_nishimori(0.7).is_err());
        assert_eq!(NishimoriPoint::new(0.1).unwrap().beta, beta_nishimori(0.1).unwrap());
    }

    #[test]
    fn single_bond() {
        let b = 0.7f64;
        let inst = IsingInstance::new(IsingKind::TwoBody, 2, vec![vec![0, 1]], vec![1], b).unwrap();
        let want = (2.0 * b.exp() + 2.0 * (-b).exp()).ln();
        assert!((inst.partition_exact().unwrap() - want).abs() < 1e-12);
        assert!(IsingInstance::new(IsingKind::TwoBody, 3, vec![vec![0, 1, 2]], vec![1], b).is_err());
    }

    #[test]
    fn toric_2x2_partition() {
        let c = code(Family::Toric, 2);
        for b in [0.0f64, 0.3, 1.1] {
            let inst = IsingInstance::from_code(&c, &BitVec::zeros(8), b).unwrap();
            let want = (2.0 * (8.0 * b).exp() + 12.0 + 2.0 * (-8.0 * b).exp()).ln();
            assert!((inst.partition_exact().unwrap() - want).abs() < 1e-12, "beta {b}");
        }
    }

    #[test]
    fn infinite_temperature() {
        let c = code(Family::Toric, 3);
        let chain = BitVec::from_indices(18, &[1, 4, 9]);
        let inst = IsingInstance::from_code(&c, &chain, 0.0).unwrap();
        assert!((inst.partition_exact().unwrap() - 9.0 * LN_2).abs() < 1e-12);
    }

    #[test]
    fn energy_symmetries() {
        let c = code(Family::Toric, 3);
        let inst = IsingInstance::from_code(&c, &BitVec::zeros(18), 1.0).unwrap();
        assert_eq!(inst.energy(&[1; 9]).unwrap(), -18);
        let s = [1, -1, 1, 1, -1, -1, 1, 1, -1];
        let flipped: Vec<i8> = s.iter().map(|v| -v).collect();
        assert_eq!(inst.energy(&s).unwrap(), inst.energy(&flipped).unwrap());
        assert!(inst.energy(&[1; 4]).is_err());

        let cc = code(Family::Color488Torus, 2);
        let colors = cc.lattice.face_colors.clone().unwrap();
        let inst = IsingInstance::from_code(&cc, &BitVec::from_indices(cc.n, &[0, 5]), 1.0).unwrap();
        assert_eq!(inst.kind, IsingKind::ThreeBody);
        let s: Vec<i8> = (0..inst.nspins).map(|i| if i % 3 == 0 { -1 } else { 1 }).collect();
        for keep in crate::complex2d::Color::ALL {
            let moved: Vec<i8> = s.iter().zip(&colors).map(|(&v, &col)| if col == keep { v } else { -v }).collect();
            assert_eq!(inst.energy(&s).unwrap(), inst.energy(&moved).unwrap());
        }
    }

    #[test]
    fn gauge_invariance() {
        let c = code(Family::Toric, 3);
        let inst = IsingInstance::from_code(&c, &BitVec::from_indices(18, &[2, 11]), 0.8).unwrap();
        let rep = gauge_property_check(&inst, &BitVec::zeros(18)).unwrap();
        assert!(rep.ok);
        let face = c.hx.row(4).clone();
        let rep = gauge_property_check(&inst, &face).unwrap();
        assert!(rep.ok && rep.exhaustive && rep.configurations == 512);
        // a nontrivial cycle is not a boundary, and it changes Z
        let z = c.logical_x[0].x.clone();
        assert!(gauge_property_check(&inst, &z).is_err());
        let cold = inst.with_beta(3.0);
        let a = cold.partition_exact().unwrap();
        let b = cold.flipped(&z).unwrap().partition_exact().unwrap();
        assert!((a - b).abs() > 1.0);
    }

    #[test]
    fn chain_probability_from_energy() {
        let c = code(Family::Toric, 3);
        let p: f64 = 0.13;
        let chain = BitVec::from_indices(18, &[0, 7, 8, 15]);
        let inst = IsingInstance::from_code(&c, &chain, beta_nishimori(p).unwrap()).unwrap();
        let w = chain.weight() as i32;
        let direct = p.powi(w) * (1.0 - p).powi(18 - w);
        assert!((inst.reference_log_weight().exp() - direct).abs() < 1e-15);
        assert_eq!(inst.chain(), chain);
    }

    #[test]
    fn class_identity_factors() {
        let t = code(Family::Toric, 2);
        let r = class_probability_identity(&t, &BitVec::zeros(8), 0.1).unwrap();
        assert_eq!(r.symmetry_factor, 2);
        assert!(r.rel_error < 1e-10);
        let t3 = code(Family::Toric, 3);
        let r = class_probability_identity(&t3, &BitVec::from_indices(18, &[3]), 0.2).unwrap();
        assert!(r.rel_error < 1e-10);
        let cc = code(Family::Color488Torus, 2);
        let r = class_probability_identity(&cc, &BitVec::from_indices(cc.n, &[1]), 0.07).unwrap();
        assert_eq!(r.symmetry_factor, 4);
        assert!(r.rel_error < 1e-10);
        // class probabilities of one syndrome add up to the syndrome probability
        let e = BitVec::from_indices(8, &[0]);
        let total: f64 = (0..4)
            .map(|cls| {
                let mut ch = e.clone();
                for i in 0..2 {
                    if cls >> i & 1 == 1 {
                        ch.xor_assign(&t.logical_x[i].x);
                    }
                }
                class_probability_identity(&t, &ch, 0.1).unwrap().rhs
            })
            .sum();
        let mut direct = 0.0;
        for m in 0u64..256 {
            let x = BitVec::from_mask(8, m);
            if t.hz.mul_vec(&x) == t.hz.mul_vec(&e) {
                let w = x.weight() as i32;
                direct += 0.1f64.powi(w) * 0.9f64.powi(8 - w);
            }
        }
        assert!((total - direct).abs() < 1e-12);
    }

    #[test]
    fn domain_walls() {
        for d in [2usize, 3, 4] {
            let c = code(Family::Toric, d);
            let z = c.logical_x[0].x.clone();
            let inst = IsingInstance::from_code(&c, &BitVec::zeros(c.n), 6.0).unwrap();
            let delta = domain_wall_free_energy(&inst, &z).unwrap();
            assert!(delta > 0.0);
            assert!((delta - 2.0 * d as f64).abs() < 0.5, "d={d}: {delta}");
            assert_eq!(domain_wall_free_energy(&inst.with_beta(0.0), &z).unwrap(), 0.0);
        }
    }

    #[test]
    fn quenched_trend() {
        let avg = |d: usize, p: f64| {
            let c = code(Family::Toric, d);
            let z = c.logical_x[0].x.clone();
            quenched_average(&c, &z, p, beta_nishimori(p).unwrap(), 200, 17).unwrap()
        };
        let (lo2, lo3) = (avg(2, 0.02), avg(3, 0.02));
        assert!(lo3.mean > lo2.mean, "{lo2:?} {lo3:?}");
        let (hi2, hi3) = (avg(2, 0.4), avg(3, 0.4));
        assert!(hi3.mean <= hi2.mean + 2.0 * (hi2.std_error + hi3.std_error), "{hi2:?} {hi3:?}");
        assert!(lo2.std_error >= 0.0);
    }
}
