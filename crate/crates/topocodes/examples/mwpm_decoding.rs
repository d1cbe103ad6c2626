//! Minimum-weight matching on a toric and a planar code.

use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::decode::{outcome, sample_error, syndrome, ErrorModel, MwpmDecoder};
use topocodes::stab::code_for;

fn main() -> topocodes::Result<()> {
    let model = ErrorModel::independent(0.06)?;
    for (family, d) in [(Family::Toric, 6), (Family::PlanarToric, 5)] {
        let code = code_for(&build(&LatticeSpec::new(family, d))?)?;
        let decoder = MwpmDecoder::new(&code)?;
        let trials = 2000;
        let mut failures = 0;
        for t in 0..trials {
            let e = sample_error(&model, code.n, t);
            let s = syndrome(&code, &e)?;
            let corr = decoder.decode(&s)?;
            let o = outcome(&code, &e, &corr)?;
            if !o.success {
                failures += 1;
            }
            if t == 0 {
                println!(
                    "{family} {d}: error weight {}, {} defects, correction weight {}",
                    e.weight(),
                    s.weight(),
                    corr.weight()
                );
            }
        }
        println!("{family} {d}: {failures}/{trials} logical failures at p = 0.06");
    }
    Ok(())
}
