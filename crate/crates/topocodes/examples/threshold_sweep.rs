//! A small threshold sweep with the matching decoder. Pass a trial count to
//! change the default of 2000 per point.

use topocodes::builders::Family;
use topocodes::decode::Sides;
use topocodes::mc::{parse_grid, run_sweep, DecoderKind, SweepSpec};

fn main() -> topocodes::Result<()> {
    let trials = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2000);
    let spec = SweepSpec {
        family: Family::Toric,
        sizes: vec![4, 6, 8],
        p_grid: parse_grid("0.07:0.13:0.01")?,
        trials,
        seed: 7,
        decoder: DecoderKind::Mwpm,
        sides: Sides::X,
    };
    let res = run_sweep(&spec)?;
    print!("{}", res.to_csv());
    let c = &res.crossing;
    match c.estimate {
        Some(p) => println!("crossing ~ {p:.4} (pairs span {:.4}..{:.4})", c.lo.unwrap_or(p), c.hi.unwrap_or(p)),
        None => println!("{}", c.note),
    }
    Ok(())
}
