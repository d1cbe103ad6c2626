//! Euler characteristic, genus and first homology of a few lattices, plus
//! the shortest homologically nontrivial cycle of each.

use topocodes::builders::{self, build, Family, LatticeSpec};
use topocodes::Color;

fn main() -> topocodes::Result<()> {
    let lattices = [
        ("cube sphere", builders::cube_sphere(2)?),
        ("toric 5", build(&LatticeSpec::new(Family::Toric, 5))?),
        ("planar toric 7", build(&LatticeSpec::new(Family::PlanarToric, 7))?),
        ("honeycomb torus", builders::honeycomb_torus(4)?),
    ];
    for (name, c) in &lattices {
        let chi = c.euler_characteristic();
        let genus = if c.is_closed() { c.euler_genus()?.1.to_string() } else { "-".into() };
        let h = c.homology()?;
        let (len, _) = c.shortest_nontrivial_cycle().unwrap_or((0, Default::default()));
        println!(
            "{name:>16}: V={} E={} F={} chi={chi} g={genus} rank H1={} shortest={len}",
            c.nv(),
            c.ne(),
            c.nf(),
            h.h1_rank
        );
    }

    // duals and shrunk lattices of the honeycomb
    let hc = &lattices[3].1;
    let tri = hc.dual()?;
    println!("honeycomb dual: {} vertices, {} triangles", tri.nv(), tri.nf());
    for col in [Color::R, Color::G, Color::B] {
        let s = hc.shrunk(col)?;
        let k = 2 * (s.ne() as i64 - s.nv() as i64 - s.nf() as i64 + 2);
        println!("shrunk {}: V={} E={} F={} -> k = {k}", col.letter(), s.nv(), s.ne(), s.nf());
    }
    Ok(())
}
