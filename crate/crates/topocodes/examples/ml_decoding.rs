//! Exact maximum-likelihood decoding by coset enumeration, and the exact
//! success probability of the ML decoder.

use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::decode::{color_ml_decode, ml_decode_exact, success_prob_exact, syndrome, ErrorModel};
use topocodes::stab::{code_for, PauliOp};

fn main() -> topocodes::Result<()> {
    let toric = code_for(&build(&LatticeSpec::new(Family::Toric, 3))?)?;
    let model = ErrorModel::bit_flip(0.1)?;
    let e = PauliOp::x_on(toric.n, &[0, 1]);
    let r = ml_decode_exact(&toric, &syndrome(&toric, &e)?, &model)?;
    println!("toric 3, X on edges 0 and 1");
    for (class, p) in r.x_posterior.iter().enumerate() {
        println!("  class {class:02b}: {p:.4}");
    }
    println!("  chosen class {:02b}, correction {:?}", r.x_class, r.correction.x.support());

    let color = code_for(&build(&LatticeSpec::new(Family::Triangular666, 5))?)?;
    let both = ErrorModel::independent(0.05)?;
    let e = PauliOp::from_parts(
        topocodes::BitVec::from_indices(color.n, &[2, 9]),
        topocodes::BitVec::from_indices(color.n, &[4]),
    );
    let r = color_ml_decode(&color, &syndrome(&color, &e)?, &both)?;
    println!("triangular-666 d=5: X posterior {:.4?}, Z posterior {:.4?}", r.x_posterior, r.z_posterior);

    println!("exact ML success probability, toric 3, bit flips:");
    for p in [0.0, 0.02, 0.05, 0.1, 0.2, 0.5] {
        println!("  p = {p:<4}  {:.6}", success_prob_exact(&toric, &ErrorModel::bit_flip(p)?)?);
    }
    Ok(())
}
