//! Lattices and codes serialize to JSON; lattices also read back.

use topocodes::builders::{build, Family, LatticeSpec};
use topocodes::stab::code_for;
use topocodes::CellComplex2D;

fn main() -> topocodes::Result<()> {
    let lat = build(&LatticeSpec::new(Family::Triangular666, 3))?;
    let text = lat.to_json();
    let back = CellComplex2D::from_json(&text)?;
    println!("lattice json: {} bytes, round trip equal: {}", text.len(), back.faces == lat.faces);
    let code = code_for(&back)?;
    println!("{}", serde_json::to_string_pretty(&code.to_json()).unwrap_or_default());
    print!("{}", code.check_matrix_text());
    Ok(())
}
