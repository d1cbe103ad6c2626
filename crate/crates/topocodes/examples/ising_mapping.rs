//! The random-bond Ising mapping: class probabilities as partition
//! functions, and the domain-wall free energy along the Nishimori line.

use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::ising::{
    beta_nishimori, class_probability_identity, domain_wall_free_energy, gauge_property_check, quenched_average,
    IsingInstance,
};
use topocodes::stab::code_for;
use topocodes::BitVec;

fn main() -> topocodes::Result<()> {
    let toric = code_for(&build(&LatticeSpec::new(Family::Toric, 3))?)?;
    let chain = BitVec::from_indices(toric.n, &[0, 4, 11]);
    for p in [0.05, 0.11, 0.3] {
        let r = class_probability_identity(&toric, &chain, p)?;
        println!("toric 3, p={p}: class prob {:.6e} vs Ising {:.6e} (rel err {:.1e})", r.lhs, r.rhs, r.rel_error);
    }

    // three-body model from a color code
    let hc = code_for(&build(&LatticeSpec::new(Family::HoneycombTorus, 2))?)?;
    let r = class_probability_identity(&hc, &BitVec::from_indices(hc.n, &[1, 7]), 0.1)?;
    println!("honeycomb 2: rel err {:.1e}, symmetry factor {}", r.rel_error, r.symmetry_factor);

    let beta = beta_nishimori(0.1)?;
    let inst = IsingInstance::from_code(&toric, &chain, beta)?;
    let face = toric.lattice.boundary_maps()?.d2.column(0);
    let g = gauge_property_check(&inst, &face)?;
    println!("gauge invariance under a boundary flip: {}", g.ok);
    let wall = &toric.logical_x[0].x;
    println!("domain-wall free energy at beta_N(0.1) = {beta:.4}: {:.4}", domain_wall_free_energy(&inst, wall)?);

    let toric4 = code_for(&build(&LatticeSpec::new(Family::Toric, 4))?)?;
    for p in [0.05, 0.15] {
        let q = quenched_average(&toric4, &toric4.logical_x[0].x, p, beta_nishimori(p)?, 200, 1)?;
        println!("toric 4, p={p}: <Delta> = {:.3} +- {:.3}", q.mean, q.std_error);
    }
    Ok(())
}
