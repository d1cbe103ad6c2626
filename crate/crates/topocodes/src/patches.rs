//! Triangulated disks whose closures give the triangular color codes.
//! Each region is returned as vertex colors, vertex-triple triangles and
//! planar positions.

use crate::complex2d::Color;
use crate::error::{Error, Result};
use std::collections::BTreeMap;

pub(crate) type Region = (Vec<Color>, Vec<[usize; 3]>, Vec<[f64; 2]>);

struct Builder<K: Ord> {
    ids: BTreeMap<K, usize>,
    colors: Vec<Color>,
    pos: Vec<[f64; 2]>,
    tris: Vec<[usize; 3]>,
}

impl<K: Ord + Copy> Builder<K> {
    fn new() -> Self {
        Builder { ids: BTreeMap::new(), colors: Vec::new(), pos: Vec::new(), tris: Vec::new() }
    }

    fn vertex(&mut self, k: K, c: Color, p: [f64; 2]) -> usize {
        if let Some(&v) = self.ids.get(&k) {
            return v;
        }
        let v = self.colors.len();
        self.ids.insert(k, v);
        self.colors.push(c);
        self.pos.push(p);
        v
    }

    fn finish(self) -> Region {
        (self.colors, self.tris, self.pos)
    }
}

/// Triangular-lattice triangle of side `L` with the vertices of one color
/// removed from each side, so every side becomes a single-color boundary.
/// Only d = 3 and d = 5 have a known cut pattern.
pub(crate) fn region_666(d: usize) -> Result<Region> {
    let (l, cuts) = match d {
        3 => (2i64, [0i64, 1, 2]),
        5 => (4, [0, 2, 1]),
        _ => return Err(Error::InvalidSize(format!("triangular-666 is available for d in {{3, 5}}, got {d}"))),
    };
    let color = |a: i64, b: i64| (a - b).rem_euclid(3);
    let keep = |a: i64, b: i64| {
        if a < 0 || b < 0 || a + b > l {
            return false;
        }
        let c = color(a, b);
        !((b == 0 && c == cuts[0]) || (a == 0 && c == cuts[1]) || (a + b == l && c == cuts[2]))
    };
    let mut bld = Builder::new();
    for b in 0..=l {
        for a in 0..=l {
            let up = [(a, b), (a + 1, b), (a, b + 1)];
            let down = [(a + 1, b), (a + 1, b + 1), (a, b + 1)];
            for t in [up, down] {
                if t.iter().all(|&(x, y)| keep(x, y)) {
                    let mut vs = [0; 3];
                    for (k, &(x, y)) in t.iter().enumerate() {
                        let p = [x as f64 + 0.5 * y as f64, y as f64 * 0.866];
                        vs[k] = bld.vertex((x, y), Color::from_index(color(x, y) as usize), p);
                    }
                    bld.tris.push(vs);
                }
            }
        }
    }
    Ok(bld.finish())
}

/// Piece of the Union Jack lattice bounded by a grid line (red side) and two
/// diagonals (blue on the left, green on the right). Grid points carry the
/// octagons, cell centers the squares. Gives d² − d + 1 qubits at odd d.
pub(crate) fn region_488(d: usize) -> Result<Region> {
    if d < 3 || d % 2 == 0 {
        return Err(Error::InvalidSize(format!("triangular-488 needs odd d >= 3, got {d}")));
    }
    let top = (d - 2) as i64;
    let mut bld = Builder::new();
    for j in 0..=top {
        for i in 0..=top {
            let corners = [(i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1)];
            for k in 0..4 {
                let (a, b) = (corners[k], corners[(k + 1) % 4]);
                // centroid of the triangle
                let gx = (2 * i + 1) as f64 / 2.0 + (a.0 + b.0) as f64;
                let gy = (2 * j + 1) as f64 / 2.0 + (a.1 + b.1) as f64;
                let (gx, gy) = (gx / 3.0, gy / 3.0);
                if gy < 0.0 || gy > gx || gx + gy > top as f64 {
                    continue;
                }
                let c = bld.vertex((2 * i + 1, 2 * j + 1), Color::R, [i as f64 + 0.5, j as f64 + 0.5]);
                let grid = |bld: &mut Builder<(i64, i64)>, (x, y): (i64, i64)| {
                    let col = if (x + y) % 2 == 0 { Color::G } else { Color::B };
                    bld.vertex((2 * x, 2 * y), col, [x as f64, y as f64])
                };
                let u = grid(&mut bld, a);
                let w = grid(&mut bld, b);
                bld.tris.push([c, u, w]);
            }
        }
    }
    Ok(bld.finish())
}
