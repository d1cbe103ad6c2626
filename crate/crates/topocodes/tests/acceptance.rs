//! One line per acceptance criterion. Failures are reported, not fatal,
//! unless TOPOCODES_ACCEPTANCE_STRICT is set.

use std::time::Instant;
use topocodes::builders::{build, Family, Hole, LatticeSpec};
use topocodes::decode::{
    adjudicate, ml_decode_exact, mwpm_decode, sample_error, success_prob_exact, syndrome, ErrorModel, MwpmDecoder,
    Sides,
};
use topocodes::ising::class_probability_identity;
use topocodes::mc::{run_sweep, DecoderKind, SweepSpec};
use topocodes::rng::{derive_seed, stream};
use topocodes::stab::{
    check_constraints, code_for, codespace_check, distance, transversal_check, upper_bound_witness, CodeFamily, Gate,
};
use topocodes::{BitVec, PauliOp, StabilizerCode};

type Check = Result<String, String>;

fn code(f: Family, d: usize) -> StabilizerCode {
    code_for(&build(&LatticeSpec::new(f, d)).expect("builds")).expect("code")
}

fn ensure(ok: bool, msg: impl Into<String>) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn nkd(c: &StabilizerCode, budget: usize) -> (usize, usize, Option<usize>) {
    (c.n, c.k(), distance(c, budget).expect("distance").distance())
}

fn criterion_1() -> Check {
    for d in 2..=8 {
        let c = code(Family::Toric, d);
        ensure(nkd(&c, 0) == (2 * d * d, 2, Some(d)), format!("toric {d}: {:?}", nkd(&c, 0)))?;
    }
    for d in 2..=7 {
        let c = code(Family::PlanarToric, d);
        ensure(nkd(&c, 0) == (2 * d * (d - 1) + 1, 1, Some(d)), format!("planar {d}: {:?}", nkd(&c, 0)))?;
    }
    let h = code(Family::HoneycombTorus, 4);
    ensure(h.k() == 4 && h.k_by_rank() == 4, "honeycomb k")?;
    let rep = distance(&h, 7).map_err(|e| e.to_string())?;
    ensure(h.n == 96 && rep.exact && rep.distance() == Some(8), format!("honeycomb: n={} {rep:?}", h.n))?;

    let t = code(Family::Triangular488, 9);
    ensure(t.n == 73 && t.k() == 1 && t.k_by_rank() == 1, format!("triangular-488: n={} k={}", t.n, t.k()))?;
    let w = upper_bound_witness(&t).ok_or("no witness")?;
    let logical = t.in_normalizer(&w).unwrap() && !t.in_stabilizer(&w).unwrap();
    ensure(logical && w.weight() == 9, format!("witness weight {} logical {logical}", w.weight()))?;
    let t0 = Instant::now();
    let rep = distance(&t, 8).map_err(|e| e.to_string())?;
    ensure(rep.exact && rep.distance() == Some(9), format!("exhaustive: {rep:?}"))?;
    let extra = format!("no logical of weight <= 8 ({:.1?})", t0.elapsed());
    Ok(format!("toric 2..8, planar 2..7, [[96,4,8]] exact, [[73,1,9]] witness of weight 9, {extra}"))
}

fn all_lattices() -> Vec<LatticeSpec> {
    let mut v = Vec::new();
    for d in 2..=8 {
        v.push(LatticeSpec::new(Family::Toric, d));
    }
    for d in 2..=7 {
        v.push(LatticeSpec::new(Family::PlanarToric, d));
    }
    for m in 1..=3 {
        v.push(LatticeSpec::new(Family::SurfaceWithHoles, m));
    }
    v.push(LatticeSpec::new(Family::SurfaceWithHoles, 2).with_holes(vec![Hole::Face(0), Hole::Face(5)]));
    v.push(LatticeSpec::new(Family::Toric, 3).with_holes(vec![Hole::Face(0), Hole::Vertex(8)]));
    for m in [2, 4, 6] {
        v.push(LatticeSpec::new(Family::HoneycombTorus, m));
        v.push(LatticeSpec::new(Family::Color488Torus, m));
    }
    v.push(LatticeSpec::new(Family::ColorSphere, 0));
    v.push(LatticeSpec::new(Family::ColorSphere, 0).with_holes(vec![Hole::Face(0), Hole::Face(6), Hole::Face(23)]));
    for d in [3, 5] {
        v.push(LatticeSpec::new(Family::Triangular666, d));
    }
    for d in [3, 5, 7, 9] {
        v.push(LatticeSpec::new(Family::Triangular488, d));
    }
    v
}

fn criterion_2() -> Check {
    let (mut closed, mut total) = (0, 0);
    for spec in all_lattices() {
        let lat = build(&spec).map_err(|e| format!("{spec:?}: {e}"))?;
        let maps = lat.boundary_maps().map_err(|e| e.to_string())?;
        ensure(maps.d1.mul(&maps.d2).is_zero(), format!("{spec:?}: d1 d2 != 0"))?;
        total += 1;
        let c = code_for(&lat).map_err(|e| format!("{spec:?}: {e}"))?;
        ensure(c.k() == c.k_by_rank(), format!("{spec:?}: k"))?;
        if lat.is_closed() {
            closed += 1;
            let rep = check_constraints(&c).map_err(|e| e.to_string())?;
            ensure(rep.ok, format!("{spec:?}: {rep:?}"))?;
            let g = lat.homology().map_err(|e| e.to_string())?.genus as usize;
            let want = if c.family == CodeFamily::Surface { 2 * g } else { 4 * g };
            ensure(c.k() == want, format!("{spec:?}: k={} genus={g}", c.k()))?;
        } else if spec.family == Family::ColorSphere {
            // one face of each color removed
            ensure(c.k() == 2, format!("{spec:?}: k={}", c.k()))?;
        }
    }
    Ok(format!("d1 d2 = 0 on {total} lattices; relations and k = 2g / 4g on {closed} closed ones"))
}

fn criterion_3() -> Check {
    let rep = codespace_check(&code(Family::Toric, 2)).map_err(|e| e.to_string())?;
    ensure(rep.ok && rep.classes == 4, format!("{rep:?}"))?;
    Ok(format!("{} chains, {} classes", rep.chains, rep.classes))
}

fn criterion_4() -> Check {
    let mut problems = Vec::new();
    for d in 2..=5 {
        let r = transversal_check(&code(Family::Toric, d), Gate::HAll).unwrap();
        if r.matches_dual != Some(true) {
            problems.push(format!("toric {d}: H_all images differ from the dual generators"));
        }
    }
    let hc = transversal_check(&code(Family::HoneycombTorus, 4), Gate::PAll).unwrap();
    let size6 = !hc.failures.is_empty() && hc.failures.iter().all(|f| f.size == 6 && f.sign == -1);
    if hc.preserved || !size6 || hc.failures.len() != 48 {
        problems.push(format!("honeycomb P_all should fail on all 48 hexagons with sign -1: {} failures", hc.failures.len()));
    }
    let mut tri = Vec::new();
    for d in [3, 5, 7, 9] {
        let c = code(Family::Triangular488, d);
        let r = transversal_check(&c, Gate::PAll).unwrap();
        let odd = r.logical_x_weight.is_some_and(|w| w % 2 == 1);
        if r.preserved && odd && r.logical_action.is_some() {
            tri.push(format!("d={d} {} |X|={}", r.logical_action.unwrap(), r.logical_x_weight.unwrap()));
        } else {
            let sizes: std::collections::BTreeSet<usize> = r.failures.iter().map(|f| f.size).collect();
            problems.push(format!("triangular-488 d={d} P_all breaks {} faces of sizes {sizes:?}", r.failures.len()));
        }
    }
    let summary = format!("toric H_all = dual generators; honeycomb P_all fails on hexagons; triangular-488 P_all ok at [{}]", tri.join(", "));
    if problems.is_empty() {
        Ok(summary)
    } else {
        Err(format!("{summary}; {}", problems.join("; ")))
    }
}

fn criterion_5() -> Check {
    let mut worst: f64 = 0.0;
    let mut cases = 0;
    let mut check = |c: &StabilizerCode, chain: BitVec, p: f64, factor: u64| -> Result<(), String> {
        let r = class_probability_identity(c, &chain, p).map_err(|e| e.to_string())?;
        ensure(r.symmetry_factor == factor, format!("factor {}", r.symmetry_factor))?;
        ensure(r.rel_error < 1e-9, format!("n={} p={p}: {r:?}", c.n))?;
        worst = worst.max(r.rel_error);
        cases += 1;
        Ok(())
    };
    for (f, d, factor) in [
        (Family::Toric, 2, 2),
        (Family::Toric, 3, 2),
        (Family::Color488Torus, 2, 4),
        (Family::HoneycombTorus, 2, 4),
    ] {
        let c = code(f, d);
        for (i, p) in [0.02, 0.1, 0.2, 0.35, 0.5].into_iter().enumerate() {
            check(&c, BitVec::zeros(c.n), p, factor)?;
            check(&c, BitVec::from_indices(c.n, &[0]), p, factor)?;
            check(&c, c.logical_x[0].x.clone(), p, factor)?;
            let e = sample_error(&ErrorModel::bit_flip(0.3).unwrap(), c.n, derive_seed(&[5, d as u64, i as u64]));
            check(&c, e.x, p, factor)?;
        }
    }
    Ok(format!("{cases} cases, worst relative error {worst:.1e}"))
}

fn criterion_6() -> Check {
    for d in [2, 3] {
        let c = code(Family::Toric, d);
        let p0 = success_prob_exact(&c, &ErrorModel::independent(0.0).unwrap()).unwrap();
        ensure(p0 == 1.0, format!("toric {d}: p_succ(0) = {p0}"))?;
        let ph = success_prob_exact(&c, &ErrorModel::bit_flip(0.5).unwrap()).unwrap();
        ensure((ph - 0.25).abs() < 1e-12, format!("toric {d}: p_succ(0.5) = {ph}"))?;
    }
    let c = code(Family::Toric, 2);
    let grid: Vec<f64> = (1..=10).map(|i| 0.045 * i as f64).collect();
    let vals: Vec<f64> = grid.iter().map(|&p| success_prob_exact(&c, &ErrorModel::bit_flip(p).unwrap()).unwrap()).collect();
    ensure(vals.windows(2).all(|w| w[1] < w[0]), format!("not decreasing: {vals:?}"))?;
    Ok(format!("p_succ 1 at p=0, 1/4 at p=1/2, decreasing {:.4} -> {:.4}", vals[0], vals[9]))
}

fn criterion_7() -> Check {
    let t0 = Instant::now();
    let spec = SweepSpec {
        family: Family::Toric,
        sizes: vec![4, 6, 8],
        p_grid: (7..=13).map(|i| i as f64 / 100.0).collect(),
        trials: 10_000,
        seed: 7,
        decoder: DecoderKind::Mwpm,
        sides: Sides::X,
    };
    let res = run_sweep(&spec).map_err(|e| e.to_string())?;
    let x = &res.crossing;
    let est = x.estimate.ok_or_else(|| format!("no crossing: {}", x.note))?;
    ensure((0.09..=0.11).contains(&est), format!("crossing {est:.4} outside [0.09, 0.11]: {:?}", x.pairwise))?;
    let low = run_sweep(&SweepSpec { p_grid: vec![0.05], seed: 8, ..spec.clone() }).map_err(|e| e.to_string())?;
    let pts: Vec<_> = [4, 6, 8].iter().map(|&d| *low.point(d, 0.05).unwrap()).collect();
    for w in pts.windows(2) {
        ensure(
            w[1].rate < w[0].rate && w[1].hi95 < w[0].lo95,
            format!("p=0.05: d={} {:.4} [{:.4},{:.4}] vs d={} {:.4} [{:.4},{:.4}]", w[0].d, w[0].rate, w[0].lo95, w[0].hi95, w[1].d, w[1].rate, w[1].lo95, w[1].hi95),
        )?;
    }
    Ok(format!(
        "crossing {est:.4} (pairwise {:.4}..{:.4}); p=0.05 rates {:.4} > {:.4} > {:.4}; {:.0?}",
        x.lo.unwrap(),
        x.hi.unwrap(),
        pts[0].rate,
        pts[1].rate,
        pts[2].rate,
        t0.elapsed()
    ))
}

fn stabilizer_sample(c: &StabilizerCode, rng: &mut impl rand::Rng) -> PauliOp {
    let mut s = PauliOp::identity(c.n);
    for g in c.generators() {
        if rng.gen::<bool>() {
            s = s.multiply(&g);
        }
    }
    s
}

fn criterion_8() -> Check {
    const TRIALS: u64 = 10_000;
    // (family, size, use matching)
    let cases = [
        (Family::Toric, 4, true),
        (Family::PlanarToric, 5, true),
        (Family::Triangular666, 5, false),
        (Family::Triangular488, 5, false),
        (Family::Color488Torus, 2, false),
    ];
    for (f, d, matching) in cases {
        let c = code(f, d);
        let mw = if matching { Some(MwpmDecoder::new(&c).unwrap()) } else { None };
        let model = ErrorModel::independent(0.08).unwrap();
        for t in 0..TRIALS {
            let mut rng = stream(derive_seed(&[88, d as u64, t]));
            let e = topocodes::decode::sample_error_with(&model, c.n, &mut rng);
            let s = syndrome(&c, &e).unwrap();
            let corr = match &mw {
                Some(m) => m.decode(&s).unwrap(),
                None => ml_decode_exact(&c, &s, &model).unwrap().correction,
            };
            ensure(syndrome(&c, &corr).unwrap() == s, format!("{f} {d} trial {t}: syndrome not reproduced"))?;
            let deformed = e.multiply(&stabilizer_sample(&c, &mut rng));
            ensure(
                adjudicate(&c, &e, &corr).unwrap() == adjudicate(&c, &deformed, &corr).unwrap(),
                format!("{f} {d} trial {t}: adjudication changed under a stabilizer"),
            )?;
        }
    }
    let c = code(Family::Toric, 4);
    let mut count = 0;
    for q in 0..=c.n {
        let e = if q == c.n { PauliOp::identity(c.n) } else { PauliOp::x_on(c.n, &[q]) };
        let corr = mwpm_decode(&c, &syndrome(&c, &e).unwrap()).unwrap();
        ensure(adjudicate(&c, &e, &corr).unwrap(), format!("weight-1 X error on qubit {q} not corrected"))?;
        count += 1;
    }
    Ok(format!("{} families x {TRIALS} trials; {count} errors of weight <= 1 on d=4 toric corrected", cases.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 8] = [
        ("parameter tables", criterion_1),
        ("structural identities", criterion_2),
        ("codespace check", criterion_3),
        ("transversal gates", criterion_4),
        ("Ising mapping", criterion_5),
        ("exact ML sanity", criterion_6),
        ("threshold existence", criterion_7),
        ("decoder contracts", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let r = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        match r {
            Ok(msg) => println!("criterion {}: PASS {name}: {msg} [{:.1?}]", i + 1, t0.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {msg} [{:.1?}]", i + 1, t0.elapsed());
            }
        }
    }
    println!("acceptance: {} of 8 criteria pass", 8 - failed);
    if failed > 0 && std::env::var_os("TOPOCODES_ACCEPTANCE_STRICT").is_some() {
        std::process::exit(1);
    }
}
