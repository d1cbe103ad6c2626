//! Deterministic lattice generators.

use crate::complex2d::{BoundaryComponent, BoundaryMark, CellComplex2D, Color, SurfaceKind};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Toric,
    PlanarToric,
    SurfaceWithHoles,
    HoneycombTorus,
    Color488Torus,
    ColorSphere,
    Triangular666,
    Triangular488,
}

impl Family {
    pub const ALL: [Family; 8] = [
        Family::Toric,
        Family::PlanarToric,
        Family::SurfaceWithHoles,
        Family::HoneycombTorus,
        Family::Color488Torus,
        Family::ColorSphere,
        Family::Triangular666,
        Family::Triangular488,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Toric => "toric",
            Family::PlanarToric => "planar-toric",
            Family::SurfaceWithHoles => "surface-with-holes",
            Family::HoneycombTorus => "honeycomb-torus",
            Family::Color488Torus => "color-488-torus",
            Family::ColorSphere => "color-sphere",
            Family::Triangular666 => "triangular-666",
            Family::Triangular488 => "triangular-488",
        }
    }

    pub fn is_color(self) -> bool {
        matches!(
            self,
            Family::HoneycombTorus
                | Family::Color488Torus
                | Family::ColorSphere
                | Family::Triangular666
                | Family::Triangular488
        )
    }
}

impl std::str::FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Family> {
        Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown family {s:?}")))
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A cell to erase when punching holes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Hole {
    Face(usize),
    Vertex(usize),
}

impl std::str::FromStr for Hole {
    type Err = Error;
    /// `f12` erases face 12, `v3` erases vertex 3.
    fn from_str(s: &str) -> Result<Hole> {
        let bad = || Error::Parse(format!("bad hole {s:?}, expected f<id> or v<id>"));
        let (kind, id) = s.split_at(1.min(s.len()));
        let id: usize = id.parse().map_err(|_| bad())?;
        match kind {
            "f" => Ok(Hole::Face(id)),
            "v" => Ok(Hole::Vertex(id)),
            _ => Err(bad()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeSpec {
    pub family: Family,
    pub size: usize,
    #[serde(default)]
    pub holes: Vec<Hole>,
}

impl LatticeSpec {
    pub fn new(family: Family, size: usize) -> Self {
        LatticeSpec { family, size, holes: Vec::new() }
    }

    pub fn with_holes(mut self, holes: Vec<Hole>) -> Self {
        self.holes = holes;
        self
    }
}

pub fn build(spec: &LatticeSpec) -> Result<CellComplex2D> {
    let d = spec.size;
    let c = match spec.family {
        Family::Toric => toric(d)?,
        Family::PlanarToric => planar_toric(d)?,
        Family::SurfaceWithHoles => cube_sphere(d)?,
        Family::HoneycombTorus => honeycomb_torus(d)?,
        Family::Color488Torus => color_488_torus(d)?,
        Family::ColorSphere => color_sphere()?,
        Family::Triangular666 => triangular_666(d)?,
        Family::Triangular488 => triangular_488(d)?,
    };
    if spec.holes.is_empty() {
        return Ok(c);
    }
    if !c.is_closed() {
        return Err(Error::Invalid(format!("{} already has boundaries", spec.family)));
    }
    let faces: Vec<usize> = spec.holes.iter().filter_map(|h| if let Hole::Face(f) = h { Some(*f) } else { None }).collect();
    let verts: Vec<usize> = spec.holes.iter().filter_map(|h| if let Hole::Vertex(v) = h { Some(*v) } else { None }).collect();
    punch_holes(&c, &faces, &verts)
}

/// d×d periodic square lattice. Vertex (i,j) is i·d+j; horizontal edge
/// (i,j)→(i,j+1) is i·d+j, vertical edge (i,j)→(i+1,j) is d²+i·d+j; face
/// (i,j) has corner (i,j) at its top left.
pub fn toric(d: usize) -> Result<CellComplex2D> {
    if d < 2 {
        return Err(Error::InvalidSize(format!("toric needs d >= 2, got {d}")));
    }
    let v = |i: usize, j: usize| (i % d) * d + (j % d);
    let h = |i: usize, j: usize| (i % d) * d + (j % d);
    let w = |i: usize, j: usize| d * d + (i % d) * d + (j % d);
    let mut edges = vec![Vec::new(); 2 * d * d];
    let mut faces = Vec::with_capacity(d * d);
    for i in 0..d {
        for j in 0..d {
            edges[h(i, j)] = vec![v(i, j), v(i, j + 1)];
            edges[w(i, j)] = vec![v(i, j), v(i + 1, j)];
        }
    }
    for i in 0..d {
        for j in 0..d {
            faces.push(vec![h(i, j), h(i + 1, j), w(i, j), w(i, j + 1)]);
        }
    }
    let mut c = CellComplex2D::new(d * d, edges, faces, SurfaceKind::ClosedOrientable);
    c.coords = Some((0..d * d).map(|k| [(k % d) as f64, -((k / d) as f64)]).collect());
    c.validate()?;
    Ok(c)
}

/// Square patch with rough left/right sides and soft top/bottom sides:
/// d rows of d−1 vertices, d horizontal edges per row (the outer two
/// dangling), and d−1 rows of d−1 vertical edges.
pub fn planar_toric(d: usize) -> Result<CellComplex2D> {
    if d < 2 {
        return Err(Error::InvalidSize(format!("planar-toric needs d >= 2, got {d}")));
    }
    let cols = d - 1;
    let v = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    // horizontal edge k of row r sits between columns k−1 and k
    for r in 0..d {
        for k in 0..d {
            let mut e = Vec::new();
            if k >= 1 {
                e.push(v(r, k - 1));
            }
            if k < cols {
                e.push(v(r, k));
            }
            edges.push(e);
        }
    }
    let hz = |r: usize, k: usize| r * d + k;
    let vt0 = d * d;
    for r in 0..d - 1 {
        for c in 0..cols {
            edges.push(vec![v(r, c), v(r + 1, c)]);
        }
    }
    let vt = |r: usize, c: usize| vt0 + r * cols + c;
    let mut faces = Vec::new();
    for r in 0..d - 1 {
        for k in 0..d {
            let mut f = vec![hz(r, k), hz(r + 1, k)];
            if k >= 1 {
                f.push(vt(r, k - 1));
            }
            if k < cols {
                f.push(vt(r, k));
            }
            faces.push(f);
        }
    }
    let mut c = CellComplex2D::new(d * cols, edges, faces, SurfaceKind::PlanarWithBoundary);
    c.boundaries = vec![
        BoundaryComponent { mark: BoundaryMark::Rough, edges: (0..d).map(|r| hz(r, 0)).collect() },
        BoundaryComponent { mark: BoundaryMark::Rough, edges: (0..d).map(|r| hz(r, d - 1)).collect() },
        BoundaryComponent { mark: BoundaryMark::Soft, edges: (0..d).map(|k| hz(0, k)).collect() },
        BoundaryComponent { mark: BoundaryMark::Soft, edges: (0..d).map(|k| hz(d - 1, k)).collect() },
    ];
    c.coords = Some((0..d * cols).map(|k| [(k % cols) as f64 + 0.5, -((k / cols) as f64)]).collect());
    c.validate()?;
    Ok(c)
}

/// Surface of the cube [0,m]³ cut into unit squares: a sphere with
/// V = 6m²+2, E = 12m², F = 6m².
pub fn cube_sphere(m: usize) -> Result<CellComplex2D> {
    if m < 1 {
        return Err(Error::InvalidSize("sphere needs size >= 1".into()));
    }
    let mi = m as i64;
    let on_surface = |p: [i64; 3]| p.iter().any(|&x| x == 0 || x == mi);
    let mut vid = BTreeMap::new();
    for x in 0..=mi {
        for y in 0..=mi {
            for z in 0..=mi {
                if on_surface([x, y, z]) {
                    let n = vid.len();
                    vid.insert([x, y, z], n);
                }
            }
        }
    }
    // an edge or square lies on the surface iff some fixed coordinate is 0 or m
    let mut eid = BTreeMap::new();
    let mut edges = Vec::new();
    for (&p, &a) in &vid {
        for ax in 0..3 {
            let mut q = p;
            q[ax] += 1;
            let Some(&b) = vid.get(&q) else { continue };
            if (0..3).filter(|&k| k != ax).any(|k| p[k] == 0 || p[k] == mi) {
                eid.insert((p, ax), edges.len());
                edges.push(vec![a, b]);
            }
        }
    }
    let mut faces = Vec::new();
    for &p in vid.keys() {
        for ax in 0..3 {
            if p[ax] != 0 && p[ax] != mi {
                continue;
            }
            let (u, w) = ((ax + 1) % 3, (ax + 2) % 3);
            if p[u] >= mi || p[w] >= mi {
                continue;
            }
            let mut pu = p;
            pu[u] += 1;
            let mut pw = p;
            pw[w] += 1;
            faces.push(vec![eid[&(p, u)], eid[&(p, w)], eid[&(pu, w)], eid[&(pw, u)]]);
        }
    }
    let c = CellComplex2D::new(vid.len(), edges, faces, SurfaceKind::ClosedOrientable);
    c.validate()?;
    Ok(c)
}

/// Erase faces (leaving soft boundaries) and vertices with their incident
/// edges' far ends kept (leaving rough boundaries). Works on color lattices
/// too, where only faces may be erased.
pub fn punch_holes(c: &CellComplex2D, faces: &[usize], vertices: &[usize]) -> Result<CellComplex2D> {
    let fv = c.face_vertices();
    let ve = c.vertex_edges();
    let fset: BTreeSet<usize> = faces.iter().copied().collect();
    let vset: BTreeSet<usize> = vertices.iter().copied().collect();
    if fset.len() != faces.len() || vset.len() != vertices.len() {
        return Err(Error::Invalid("repeated hole".into()));
    }
    if let Some(&f) = fset.iter().find(|&&f| f >= c.nf()) {
        return Err(Error::Invalid(format!("face {f} does not exist")));
    }
    if let Some(&v) = vset.iter().find(|&&v| v >= c.nv()) {
        return Err(Error::Invalid(format!("vertex {v} does not exist")));
    }
    if c.is_colored() && !vset.is_empty() {
        return Err(Error::Unsupported("erasing vertices of a color lattice".into()));
    }
    let fl: Vec<usize> = fset.iter().copied().collect();
    for (i, &a) in fl.iter().enumerate() {
        for &b in &fl[i + 1..] {
            if fv[a].iter().any(|v| fv[b].contains(v)) {
                return Err(Error::Invalid(format!("faces {a} and {b} touch")));
            }
        }
        if let Some(v) = fv[a].iter().find(|v| vset.contains(v)) {
            return Err(Error::Invalid(format!("vertex {v} lies on face {a}")));
        }
    }
    for &v in &vset {
        for &e in &ve[v] {
            if c.edges[e].iter().any(|&u| u != v && vset.contains(&u)) {
                return Err(Error::Invalid(format!("vertices joined by edge {e}")));
            }
        }
    }
    let mut vmap = vec![usize::MAX; c.nv()];
    let mut nv = 0;
    for (v, slot) in vmap.iter_mut().enumerate() {
        if !vset.contains(&v) {
            *slot = nv;
            nv += 1;
        }
    }
    let edges: Vec<Vec<usize>> = c
        .edges
        .iter()
        .map(|ends| ends.iter().filter(|v| !vset.contains(v)).map(|&v| vmap[v]).collect())
        .collect();
    let new_faces: Vec<Vec<usize>> =
        (0..c.nf()).filter(|f| !fset.contains(f)).map(|f| c.faces[f].clone()).collect();
    let mut out = CellComplex2D::new(nv, edges, new_faces, SurfaceKind::PlanarWithBoundary);
    out.edge_colors = c.edge_colors.clone();
    if let Some(fc) = &c.face_colors {
        out.face_colors = Some((0..c.nf()).filter(|f| !fset.contains(f)).map(|f| fc[f]).collect());
    }
    out.boundaries = c.boundaries.clone();
    for &f in &fset {
        let mark = match &c.face_colors {
            Some(fc) => BoundaryMark::color(fc[f]),
            None => BoundaryMark::Soft,
        };
        out.boundaries.push(BoundaryComponent { mark, edges: c.faces[f].clone() });
    }
    for &v in &vset {
        out.boundaries.push(BoundaryComponent { mark: BoundaryMark::Rough, edges: ve[v].clone() });
    }
    if let Some(xy) = &c.coords {
        out.coords = Some((0..c.nv()).filter(|v| !vset.contains(v)).map(|v| xy[v]).collect());
    }
    out.validate()?;
    Ok(out)
}

/// A 3-colored triangulation whose triangles become the qubits of a color
/// lattice and whose non-virtual vertices become its faces. Virtual vertices
/// stand for erased faces, i.e. colored boundaries.
#[derive(Clone, Debug)]
pub struct DualTriangulation {
    pub colors: Vec<Color>,
    pub virtual_vertex: Vec<bool>,
    pub edges: Vec<[usize; 2]>,
    /// Edge ids of each triangle.
    pub triangles: Vec<[usize; 3]>,
    pub positions: Option<Vec<[f64; 2]>>,
}

impl DualTriangulation {
    pub fn to_color_lattice(&self, kind: SurfaceKind) -> Result<CellComplex2D> {
        let nverts = self.colors.len();
        let mut tri_of_edge = vec![Vec::new(); self.edges.len()];
        for (t, es) in self.triangles.iter().enumerate() {
            for &e in es {
                tri_of_edge[e].push(t);
            }
        }
        let mut face_id = vec![usize::MAX; nverts];
        let mut nf = 0;
        for v in 0..nverts {
            if !self.virtual_vertex[v] {
                face_id[v] = nf;
                nf += 1;
            }
        }
        let mut edges = Vec::new();
        let mut edge_colors = Vec::new();
        let mut faces = vec![Vec::new(); nf];
        let mut bd: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (de, &[a, b]) in self.edges.iter().enumerate() {
            let ts = &tri_of_edge[de];
            if ts.len() > 2 {
                return Err(Error::Malformed(format!("dual edge {de} on {} triangles", ts.len())));
            }
            if ts.len() < 2 || (self.virtual_vertex[a] && self.virtual_vertex[b]) {
                continue;
            }
            if self.colors[a] == self.colors[b] {
                return Err(Error::Coloring(format!("dual edge {de} joins equal colors")));
            }
            let pe = edges.len();
            edges.push(vec![ts[0], ts[1]]);
            edge_colors.push(Color::third(self.colors[a], self.colors[b]));
            for v in [a, b] {
                if self.virtual_vertex[v] {
                    bd.entry(v).or_default().push(pe);
                } else {
                    faces[face_id[v]].push(pe);
                }
            }
        }
        let mut c = CellComplex2D::new(self.triangles.len(), edges, faces, kind);
        c.face_colors = Some((0..nverts).filter(|&v| !self.virtual_vertex[v]).map(|v| self.colors[v]).collect());
        c.edge_colors = Some(edge_colors);
        c.boundaries = bd
            .into_iter()
            .map(|(v, edges)| BoundaryComponent { mark: BoundaryMark::color(self.colors[v]), edges })
            .collect();
        if let Some(pos) = &self.positions {
            let centroid = |t: &[usize; 3]| {
                let vs: BTreeSet<usize> = t.iter().flat_map(|&e| self.edges[e]).collect();
                let k = vs.len() as f64;
                let (x, y) = vs.iter().fold((0.0, 0.0), |(x, y), &v| (x + pos[v][0], y + pos[v][1]));
                [x / k, y / k]
            };
            c.coords = Some(self.triangles.iter().map(centroid).collect());
        }
        c.validate()?;
        Ok(c)
    }

    /// Closes a triangulated disk: every boundary edge gets a fan triangle to
    /// a virtual vertex of the color it is missing, and the three places where
    /// that color changes get one corner triangle each. The boundary walk must
    /// split into exactly three runs of distinct missing colors.
    pub fn close_disk(colors: &[Color], tris: &[[usize; 3]], positions: Option<Vec<[f64; 2]>>) -> Result<Self> {
        let mut eid: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edges: Vec<[usize; 2]> = Vec::new();
        let mut count: Vec<usize> = Vec::new();
        let mut edge = |a: usize, b: usize, edges: &mut Vec<[usize; 2]>, count: &mut Vec<usize>| {
            let k = (a.min(b), a.max(b));
            let id = *eid.entry(k).or_insert_with(|| {
                edges.push([k.0, k.1]);
                count.push(0);
                edges.len() - 1
            });
            count[id] += 1;
            id
        };
        let mut triangles = Vec::new();
        for t in tris {
            triangles.push([
                edge(t[0], t[1], &mut edges, &mut count),
                edge(t[1], t[2], &mut edges, &mut count),
                edge(t[0], t[2], &mut edges, &mut count),
            ]);
        }
        // walk the boundary cycle
        let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (e, &[a, b]) in edges.iter().enumerate() {
            if count[e] == 1 {
                adj.entry(a).or_default().push(b);
                adj.entry(b).or_default().push(a);
            }
        }
        if adj.values().any(|n| n.len() != 2) || adj.is_empty() {
            return Err(Error::Malformed("region boundary is not a simple cycle".into()));
        }
        let start = *adj.keys().next().unwrap();
        let mut cyc = vec![start];
        let (mut prev, mut cur) = (start, adj[&start][0]);
        while cur != start {
            cyc.push(cur);
            let n = &adj[&cur];
            let nx = if n[0] == prev { n[1] } else { n[0] };
            prev = cur;
            cur = nx;
            if cyc.len() > adj.len() {
                return Err(Error::Malformed("region boundary is not a simple cycle".into()));
            }
        }
        if cyc.len() != adj.len() {
            return Err(Error::Malformed("region boundary has several components".into()));
        }
        let m = cyc.len();
        let mut miss = Vec::with_capacity(m);
        for i in 0..m {
            let (a, b) = (colors[cyc[i]], colors[cyc[(i + 1) % m]]);
            if a == b {
                return Err(Error::Coloring("boundary edge joins equal colors".into()));
            }
            miss.push(Color::third(a, b));
        }
        let changes: Vec<usize> = (0..m).filter(|&i| miss[i] != miss[(i + m - 1) % m]).collect();
        let runs: BTreeSet<Color> = miss.iter().copied().collect();
        if changes.len() != 3 || runs.len() != 3 {
            return Err(Error::Coloring("boundary is not three runs of distinct colors".into()));
        }
        let mut all_colors = colors.to_vec();
        let mut virt = vec![false; colors.len()];
        let mut special = [0usize; 3];
        for c in Color::ALL {
            special[c.index()] = all_colors.len();
            all_colors.push(c);
            virt.push(true);
        }
        for i in 0..m {
            let s = special[miss[i].index()];
            let (u, w) = (cyc[i], cyc[(i + 1) % m]);
            triangles.push([
                edge(s, u, &mut edges, &mut count),
                edge(u, w, &mut edges, &mut count),
                edge(s, w, &mut edges, &mut count),
            ]);
        }
        for &j in &changes {
            let a = special[miss[(j + m - 1) % m].index()];
            let b = special[miss[j].index()];
            let x = cyc[j];
            triangles.push([
                edge(a, b, &mut edges, &mut count),
                edge(b, x, &mut edges, &mut count),
                edge(a, x, &mut edges, &mut count),
            ]);
        }
        let positions = positions.map(|mut p| {
            let n = p.len() as f64;
            let (cx, cy) = p.iter().fold((0.0, 0.0), |(x, y), q| (x + q[0] / n, y + q[1] / n));
            for c in Color::ALL {
                // park each virtual vertex outside the middle of its run
                let on: Vec<usize> = (0..m).filter(|&i| miss[i] == c).collect();
                let mid = cyc[on[on.len() / 2]];
                let (dx, dy) = (p[mid][0] - cx, p[mid][1] - cy);
                p.push([cx + 2.0 * dx, cy + 2.0 * dy]);
            }
            p
        });
        Ok(DualTriangulation { colors: all_colors, virtual_vertex: virt, edges, triangles, positions })
    }
}

/// Honeycomb lattice on a torus, as the dual of the triangular lattice with
/// periods (3m/2, 0) and (−m, 2m). Gives 6m² qubits and 3m² hexagons; m = 4
/// is the 96-qubit lattice.
pub fn honeycomb_torus(m: usize) -> Result<CellComplex2D> {
    if m < 2 || m % 2 != 0 {
        return Err(Error::InvalidSize(format!("honeycomb-torus needs even m >= 2, got {m}")));
    }
    let w = (3 * m / 2) as i64;
    let h = (2 * m) as i64;
    let mi = m as i64;
    let canon = |a: i64, b: i64| -> (i64, i64) {
        let q = b.div_euclid(h);
        let (a, b) = (a + mi * q, b - h * q);
        (a.rem_euclid(w), b)
    };
    let vid = |a: i64, b: i64| -> usize {
        let (a, b) = canon(a, b);
        (b * w + a) as usize
    };
    let nverts = (w * h) as usize;
    let mut colors = vec![Color::R; nverts];
    let mut pos = vec![[0.0; 2]; nverts];
    for b in 0..h {
        for a in 0..w {
            colors[vid(a, b)] = Color::from_index((a - b).rem_euclid(3) as usize);
            pos[vid(a, b)] = [a as f64 + 0.5 * b as f64, b as f64 * 0.866];
        }
    }
    // three edge directions per vertex
    let dirs = [(1, 0), (0, 1), (-1, 1)];
    let eid = |a: i64, b: i64, k: usize| vid(a, b) * 3 + k;
    let mut edges = vec![[0usize; 2]; nverts * 3];
    for b in 0..h {
        for a in 0..w {
            for (k, &(da, db)) in dirs.iter().enumerate() {
                edges[eid(a, b, k)] = [vid(a, b), vid(a + da, b + db)];
            }
        }
    }
    let mut triangles = Vec::new();
    for b in 0..h {
        for a in 0..w {
            // up: (a,b),(a+1,b),(a,b+1); down: (a+1,b),(a+1,b+1),(a,b+1)
            triangles.push([eid(a, b, 0), eid(a + 1, b, 2), eid(a, b, 1)]);
            triangles.push([eid(a + 1, b, 1), eid(a, b + 1, 0), eid(a + 1, b, 2)]);
        }
    }
    let dt = DualTriangulation {
        colors,
        virtual_vertex: vec![false; nverts],
        edges,
        triangles,
        positions: Some(pos),
    };
    dt.to_color_lattice(SurfaceKind::ClosedOrientable)
}

/// 4-8-8 lattice on an L×L torus (L even), as the dual of the periodic
/// Union Jack lattice: octagons at grid points, squares at cell centers.
pub fn color_488_torus(l: usize) -> Result<CellComplex2D> {
    if l < 2 || l % 2 != 0 {
        return Err(Error::InvalidSize(format!("color-488-torus needs even L >= 2, got {l}")));
    }
    let p = |i: usize, j: usize| (i % l) * l + (j % l);
    let c = |i: usize, j: usize| l * l + (i % l) * l + (j % l);
    let nverts = 2 * l * l;
    let mut colors = vec![Color::R; nverts];
    let mut pos = vec![[0.0; 2]; nverts];
    for i in 0..l {
        for j in 0..l {
            colors[p(i, j)] = if (i + j) % 2 == 0 { Color::G } else { Color::B };
            pos[p(i, j)] = [i as f64, j as f64];
            pos[c(i, j)] = [i as f64 + 0.5, j as f64 + 0.5];
        }
    }
    // grid edges: (i,j)-(i+1,j) and (i,j)-(i,j+1); then four diagonals per cell
    let gx = |i: usize, j: usize| 2 * p(i, j);
    let gy = |i: usize, j: usize| 2 * p(i, j) + 1;
    let dg = |i: usize, j: usize, k: usize| 2 * l * l + 4 * ((i % l) * l + (j % l)) + k;
    let mut edges = vec![[0usize; 2]; 6 * l * l];
    for i in 0..l {
        for j in 0..l {
            edges[gx(i, j)] = [p(i, j), p(i + 1, j)];
            edges[gy(i, j)] = [p(i, j), p(i, j + 1)];
            let corners = [p(i, j), p(i + 1, j), p(i + 1, j + 1), p(i, j + 1)];
            for (k, &q) in corners.iter().enumerate() {
                edges[dg(i, j, k)] = [c(i, j), q];
            }
        }
    }
    let mut triangles = Vec::new();
    for i in 0..l {
        for j in 0..l {
            let sides = [gx(i, j), gy(i + 1, j), gx(i, j + 1), gy(i, j)];
            for k in 0..4 {
                triangles.push([dg(i, j, k), sides[k], dg(i, j, (k + 1) % 4)]);
            }
        }
    }
    let dt = DualTriangulation {
        colors,
        virtual_vertex: vec![false; nverts],
        edges,
        triangles,
        positions: Some(pos),
    };
    dt.to_color_lattice(SurfaceKind::ClosedOrientable)
}

/// Truncated cuboctahedron (6 octagons, 8 hexagons, 12 squares, 48
/// vertices), the dual of the barycentric subdivision of the cube.
pub fn color_sphere() -> Result<CellComplex2D> {
    let mut pts: Vec<[i64; 3]> = Vec::new();
    let mut colors = Vec::new();
    // cube face centers, edge midpoints, corners
    for ax in 0..3 {
        for s in [-1, 1] {
            let mut q = [0; 3];
            q[ax] = s;
            pts.push(q);
            colors.push(Color::R);
        }
    }
    for ax in 0..3 {
        for s in [-1, 1] {
            for t in [-1, 1] {
                let mut q = [0; 3];
                q[(ax + 1) % 3] = s;
                q[(ax + 2) % 3] = t;
                pts.push(q);
                colors.push(Color::G);
            }
        }
    }
    for x in [-1, 1] {
        for y in [-1, 1] {
            for z in [-1, 1] {
                pts.push([x, y, z]);
                colors.push(Color::B);
            }
        }
    }
    let id = |q: [i64; 3]| pts.iter().position(|&p| p == q).unwrap();
    let mut tris = Vec::new();
    for ax in 0..3 {
        for s in [-1, 1] {
            let mut f = [0; 3];
            f[ax] = s;
            for other in [(ax + 1) % 3, (ax + 2) % 3] {
                let third = 3 - ax - other;
                for t in [-1, 1] {
                    let mut m = f;
                    m[other] = t;
                    for u in [-1, 1] {
                        let mut k = m;
                        k[third] = u;
                        tris.push([id(f), id(m), id(k)]);
                    }
                }
            }
        }
    }
    let mut eid = BTreeMap::new();
    let mut edges = Vec::new();
    let mut triangles = Vec::new();
    for t in &tris {
        let mut es = [0usize; 3];
        for (k, (a, b)) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])].into_iter().enumerate() {
            let key = (a.min(b), a.max(b));
            es[k] = *eid.entry(key).or_insert_with(|| {
                edges.push([key.0, key.1]);
                edges.len() - 1
            });
        }
        triangles.push(es);
    }
    let n = pts.len();
    let dt = DualTriangulation { colors, virtual_vertex: vec![false; n], edges, triangles, positions: None };
    dt.to_color_lattice(SurfaceKind::ClosedOrientable)
}

pub fn triangular_666(d: usize) -> Result<CellComplex2D> {
    let (colors, tris, pos) = crate::patches::region_666(d)?;
    DualTriangulation::close_disk(&colors, &tris, Some(pos))?.to_color_lattice(SurfaceKind::PlanarWithBoundary)
}

pub fn triangular_488(d: usize) -> Result<CellComplex2D> {
    let (colors, tris, pos) = crate::patches::region_488(d)?;
    DualTriangulation::close_disk(&colors, &tris, Some(pos))?.to_color_lattice(SurfaceKind::PlanarWithBoundary)
}
