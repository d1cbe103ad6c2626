//! Which transversal gates preserve which codes.

use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::stab::{code_for, transversal_check, Gate};

fn main() -> topocodes::Result<()> {
    let cases = [
        (Family::Toric, 3, Gate::HAll),
        (Family::Toric, 3, Gate::CnotPairwise),
        (Family::HoneycombTorus, 2, Gate::HAll),
        (Family::HoneycombTorus, 2, Gate::PAll),
        (Family::Triangular666, 3, Gate::HAll),
        (Family::Triangular488, 3, Gate::PAll),
        (Family::Triangular488, 5, Gate::PAll),
    ];
    for (family, size, gate) in cases {
        let code = code_for(&build(&LatticeSpec::new(family, size))?)?;
        let r = transversal_check(&code, gate)?;
        let mut line = format!("{family:>15} {size} {gate:?}: preserved={}", r.preserved);
        if let Some(m) = r.matches_dual {
            line += &format!(" dual-lattice generators={m}");
        }
        if let Some(a) = &r.logical_action {
            line += &format!(" logical {a}");
        }
        if let Some(w) = r.logical_x_weight {
            line += &format!(" |X|={w}");
        }
        if !r.failures.is_empty() {
            let sizes: std::collections::BTreeSet<usize> = r.failures.iter().map(|f| f.size).collect();
            line += &format!(" broken generators={} of weights {sizes:?}", r.failures.len());
        }
        println!("{line}");
    }
    Ok(())
}
