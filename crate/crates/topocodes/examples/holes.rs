//! Encoding qubits by punching holes in a sphere.

use topocodes::builders::{self, build, Family, Hole, LatticeSpec};
use topocodes::stab::code_for;
use topocodes::Color;

fn main() -> topocodes::Result<()> {
    let sphere = LatticeSpec::new(Family::SurfaceWithHoles, 2);
    let variants = [
        ("no holes", vec![]),
        ("two faces", vec![Hole::Face(0), Hole::Face(5)]),
        ("three faces", vec![Hole::Face(0), Hole::Face(5), Hole::Face(10)]),
        ("two faces and a vertex", vec![Hole::Face(0), Hole::Face(5), Hole::Vertex(8)]),
    ];
    for (name, holes) in variants {
        let c = code_for(&build(&sphere.clone().with_holes(holes))?)?;
        println!("surface code, sphere with {name:<24} [[{}, {}]]", c.n, c.k());
    }

    // color code: one hole of each color leaves two logical qubits
    let cs = builders::color_sphere()?;
    let colors = cs.face_colors.clone().unwrap_or_default();
    let fv = cs.face_vertices();
    let mut picked: Vec<usize> = Vec::new();
    for col in [Color::R, Color::G, Color::B] {
        let free = |f: usize| picked.iter().all(|&g| fv[f].iter().all(|v| !fv[g].contains(v)));
        if let Some(f) = (0..cs.nf()).find(|&f| colors[f] == col && free(f)) {
            picked.push(f);
        }
        let c = code_for(&builders::punch_holes(&cs, &picked, &[])?)?;
        println!("color code, sphere minus faces {picked:?}: [[{}, {}]]", c.n, c.k());
    }
    Ok(())
}
