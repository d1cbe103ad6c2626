//! Prints [[n, k, d]] for the standard lattice families.

use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::stab::{code_for, distance};

fn main() -> topocodes::Result<()> {
    let cases = [
        (Family::Toric, 2),
        (Family::Toric, 4),
        (Family::Toric, 8),
        (Family::PlanarToric, 3),
        (Family::PlanarToric, 7),
        (Family::HoneycombTorus, 4),
        (Family::Color488Torus, 4),
        (Family::Triangular666, 3),
        (Family::Triangular666, 5),
        (Family::Triangular488, 3),
        (Family::Triangular488, 5),
        (Family::Triangular488, 9),
    ];
    for (family, size) in cases {
        let lattice = build(&LatticeSpec::new(family, size))?;
        let code = code_for(&lattice)?;
        // bounded search; the larger color codes fall back to an upper bound
        let rep = distance(&code, 6)?;
        let d = match rep.distance() {
            Some(d) => d.to_string(),
            None => format!("<= {} (> {})", rep.upper_bound.map_or("?".into(), |u| u.to_string()), rep.lower_bound - 1),
        };
        println!("{family:>16} {size:>2}: [[{}, {}, {d}]]", code.n, code.k());
    }
    Ok(())
}
