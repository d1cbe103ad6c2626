//! Combinatorial 2-complexes over Z2: boundary maps, Euler characteristic,
//! homology, duality and shrunk lattices.
//!
//! An edge has one or two endpoints. A one-endpoint edge runs into an erased
//! vertex, which is how rough boundaries are represented; soft boundaries
//! are edges lying on a single face.

use crate::error::{check_len, Error, Result};
use crate::gf2::{BitMatrix, BitVec, Span};
use crate::graph::ChainGraph;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    #[serde(rename = "r")]
    R,
    #[serde(rename = "g")]
    G,
    #[serde(rename = "b")]
    B,
}

impl Color {
    pub const ALL: [Color; 3] = [Color::R, Color::G, Color::B];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Color {
        Color::ALL[i % 3]
    }

    /// The color that is neither `a` nor `b` (which must differ).
    pub fn third(a: Color, b: Color) -> Color {
        Color::from_index(3 - a.index() - b.index())
    }

    pub fn letter(self) -> char {
        ['r', 'g', 'b'][self.index()]
    }
}

impl std::str::FromStr for Color {
    type Err = Error;
    fn from_str(s: &str) -> Result<Color> {
        match s {
            "r" | "red" => Ok(Color::R),
            "g" | "green" => Ok(Color::G),
            "b" | "blue" => Ok(Color::B),
            _ => Err(Error::Parse(format!("unknown color {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SurfaceKind {
    ClosedOrientable,
    PlanarWithBoundary,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryMark {
    /// Left by an erased face; direct strings end here.
    Soft,
    /// Left by an erased vertex; dual strings end here.
    Rough,
    #[serde(rename = "r")]
    Red,
    #[serde(rename = "g")]
    Green,
    #[serde(rename = "b")]
    Blue,
}

impl BoundaryMark {
    pub fn color(c: Color) -> Self {
        [BoundaryMark::Red, BoundaryMark::Green, BoundaryMark::Blue][c.index()]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundaryComponent {
    pub mark: BoundaryMark,
    /// Edges along the component (one-face edges, or dangling edges).
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellComplex2D {
    pub num_vertices: usize,
    /// Endpoints of each edge: one or two distinct vertex ids.
    pub edges: Vec<Vec<usize>>,
    /// Boundary edge ids of each face.
    pub faces: Vec<Vec<usize>>,
    pub kind: SurfaceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub face_colors: Option<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub edge_colors: Option<Vec<Color>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub boundaries: Vec<BoundaryComponent>,
    /// Optional vertex positions, for plotting only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub coords: Option<Vec<[f64; 2]>>,
}

#[derive(Clone, Debug)]
pub struct BoundaryMaps {
    pub d2: BitMatrix,
    pub d1: BitMatrix,
}

#[derive(Clone, Debug)]
pub struct HomologySummary {
    pub chi: i64,
    pub genus: i64,
    pub h1_rank: usize,
    pub h1_reps: Vec<BitVec>,
}

impl CellComplex2D {
    pub fn new(num_vertices: usize, edges: Vec<Vec<usize>>, faces: Vec<Vec<usize>>, kind: SurfaceKind) -> Self {
        CellComplex2D {
            num_vertices,
            edges,
            faces,
            kind,
            face_colors: None,
            edge_colors: None,
            boundaries: Vec::new(),
            coords: None,
        }
    }

    pub fn nv(&self) -> usize {
        self.num_vertices
    }

    pub fn ne(&self) -> usize {
        self.edges.len()
    }

    pub fn nf(&self) -> usize {
        self.faces.len()
    }

    pub fn is_closed(&self) -> bool {
        self.kind == SurfaceKind::ClosedOrientable
    }

    pub fn is_colored(&self) -> bool {
        self.face_colors.is_some()
    }

    /// Faces containing each edge.
    pub fn edge_faces(&self) -> Vec<Vec<usize>> {
        let mut ef = vec![Vec::new(); self.ne()];
        for (f, es) in self.faces.iter().enumerate() {
            for &e in es {
                ef[e].push(f);
            }
        }
        ef
    }

    /// Edges meeting each vertex.
    pub fn vertex_edges(&self) -> Vec<Vec<usize>> {
        let mut ve = vec![Vec::new(); self.nv()];
        for (e, ends) in self.edges.iter().enumerate() {
            for &v in ends {
                ve[v].push(e);
            }
        }
        ve
    }

    /// Vertices of each face, sorted.
    pub fn face_vertices(&self) -> Vec<Vec<usize>> {
        self.faces
            .iter()
            .map(|es| {
                let s: BTreeSet<usize> = es.iter().flat_map(|&e| self.edges[e].iter().copied()).collect();
                s.into_iter().collect()
            })
            .collect()
    }

    /// Faces around each vertex, sorted.
    pub fn vertex_faces(&self) -> Vec<Vec<usize>> {
        let mut vf = vec![BTreeSet::new(); self.nv()];
        for (f, vs) in self.face_vertices().into_iter().enumerate() {
            for v in vs {
                vf[v].insert(f);
            }
        }
        vf.into_iter().map(|s| s.into_iter().collect()).collect()
    }

    pub fn validate(&self) -> Result<()> {
        let nv = self.nv();
        for (e, ends) in self.edges.iter().enumerate() {
            if ends.is_empty() || ends.len() > 2 {
                return Err(Error::Malformed(format!("edge {e} has {} endpoints", ends.len())));
            }
            if ends.iter().any(|&v| v >= nv) {
                return Err(Error::Malformed(format!("edge {e} references a missing vertex")));
            }
            if ends.len() == 2 && ends[0] == ends[1] {
                return Err(Error::Malformed(format!("edge {e} is a self-loop")));
            }
            if ends.len() == 1 && self.is_closed() {
                return Err(Error::Malformed(format!("edge {e} is dangling on a closed surface")));
            }
        }
        for (f, es) in self.faces.iter().enumerate() {
            if es.is_empty() {
                return Err(Error::Malformed(format!("face {f} is empty")));
            }
            let set: BTreeSet<_> = es.iter().collect();
            if set.len() != es.len() || es.iter().any(|&e| e >= self.ne()) {
                return Err(Error::Malformed(format!("face {f} has a bad edge list")));
            }
        }
        let ef = self.edge_faces();
        for (e, fs) in ef.iter().enumerate() {
            if fs.len() > 2 {
                return Err(Error::Malformed(format!("edge {e} lies on {} faces", fs.len())));
            }
            if self.is_closed() && fs.len() != 2 {
                return Err(Error::Malformed(format!("edge {e} lies on {} faces of a closed surface", fs.len())));
            }
        }
        let m = self.boundary_maps_unchecked();
        if !m.d1.mul(&m.d2).is_zero() {
            return Err(Error::Malformed("face boundaries are not closed".into()));
        }
        if self.is_colored() {
            self.validate_coloring()?;
        }
        Ok(())
    }

    fn validate_coloring(&self) -> Result<()> {
        let fc = self.face_colors.as_ref().unwrap();
        check_len(self.nf(), fc.len())?;
        let ec = self
            .edge_colors
            .as_ref()
            .ok_or_else(|| Error::Coloring("face colors without edge colors".into()))?;
        check_len(self.ne(), ec.len())?;
        for (v, es) in self.vertex_edges().iter().enumerate() {
            let ok = if self.is_closed() { es.len() == 3 } else { (2..=3).contains(&es.len()) };
            if !ok {
                return Err(Error::Coloring(format!("vertex {v} has degree {}", es.len())));
            }
            let cols: BTreeSet<_> = es.iter().map(|&e| ec[e]).collect();
            if cols.len() != es.len() {
                return Err(Error::Coloring(format!("vertex {v} repeats an edge color")));
            }
        }
        for (e, fs) in self.edge_faces().iter().enumerate() {
            for &f in fs {
                if fc[f] == ec[e] {
                    return Err(Error::Coloring(format!("edge {e} has the color of face {f}")));
                }
            }
            if fs.len() == 2 {
                if fc[fs[0]] == fc[fs[1]] {
                    return Err(Error::Coloring(format!("faces {} and {} share color and edge {e}", fs[0], fs[1])));
                }
                if Color::third(fc[fs[0]], fc[fs[1]]) != ec[e] {
                    return Err(Error::Coloring(format!("edge {e} color mismatch")));
                }
            }
        }
        Ok(())
    }

    fn boundary_maps_unchecked(&self) -> BoundaryMaps {
        let d2 = BitMatrix::from_columns(self.ne(), &self.faces);
        let d1 = BitMatrix::from_columns(self.nv(), &self.edges);
        BoundaryMaps { d2, d1 }
    }

    pub fn boundary_maps(&self) -> Result<BoundaryMaps> {
        self.validate()?;
        Ok(self.boundary_maps_unchecked())
    }

    pub fn euler_genus(&self) -> Result<(i64, i64)> {
        if !self.is_closed() {
            return Err(Error::Malformed("genus needs a closed surface".into()));
        }
        let chi = self.nv() as i64 - self.ne() as i64 + self.nf() as i64;
        if chi % 2 != 0 || chi > 2 {
            return Err(Error::Malformed(format!("Euler characteristic {chi} on a closed orientable surface")));
        }
        Ok((chi, 1 - chi / 2))
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.nv() as i64 - self.ne() as i64 + self.nf() as i64
    }

    pub fn edge_chain(&self, edges: &[usize]) -> BitVec {
        BitVec::from_indices(self.ne(), edges)
    }

    pub fn is_cycle(&self, chain: &BitVec) -> Result<bool> {
        check_len(self.ne(), chain.len())?;
        Ok(self.boundary_maps_unchecked().d1.mul_vec(chain).is_zero())
    }

    /// Span of the face boundaries, B1.
    pub fn boundary_span(&self) -> Span {
        let cols: Vec<BitVec> = self.faces.iter().map(|es| self.edge_chain(es)).collect();
        Span::new(self.ne(), &cols)
    }

    pub fn is_boundary(&self, chain: &BitVec) -> Result<bool> {
        check_len(self.ne(), chain.len())?;
        Ok(self.boundary_span().contains(chain))
    }

    pub fn same_class(&self, a: &BitVec, b: &BitVec) -> Result<bool> {
        if !self.is_cycle(a)? || !self.is_cycle(b)? {
            return Err(Error::Invalid("same_class needs cycles".into()));
        }
        self.is_boundary(&a.xor(b))
    }

    /// The vertex-edge graph. Dangling edges meet a virtual node.
    pub fn primal_graph(&self) -> ChainGraph {
        ChainGraph::from_incidence(self.nv(), &self.edges)
    }

    /// The face-edge graph. One-face edges meet a virtual node.
    pub fn dual_graph(&self) -> ChainGraph {
        ChainGraph::from_incidence(self.nf(), &self.edge_faces())
    }

    /// Greedy minimum-weight basis of H1 (relative to rough boundaries on
    /// planar complexes): candidates are sorted by (weight, support) and kept
    /// when independent of B1 and of those already chosen.
    pub fn homology(&self) -> Result<HomologySummary> {
        self.validate()?;
        let b1 = self.boundary_span();
        let mut cands = BTreeSet::new();
        self.primal_graph().fundamental_cycles(|c| {
            cands.insert((c.weight(), c.support()));
        });
        let mut span = b1.clone();
        let mut reps = Vec::new();
        let z1_dim = self.ne() - self.boundary_maps_unchecked().d1.rank();
        let h1_rank = z1_dim - b1.dim();
        for (_, sup) in cands {
            if reps.len() == h1_rank {
                break;
            }
            let c = self.edge_chain(&sup);
            if span.insert(&c) {
                reps.push(c);
            }
        }
        let chi = self.euler_characteristic();
        let genus = if self.is_closed() { 1 - chi / 2 } else { 0 };
        Ok(HomologySummary { chi, genus, h1_rank, h1_reps: reps })
    }

    /// Shortest 1-cycle that is not a boundary. On planar complexes cycles
    /// may pass through the erased-vertex node, i.e. run between rough
    /// boundary components.
    pub fn shortest_nontrivial_cycle(&self) -> Result<(usize, BitVec)> {
        self.validate()?;
        let b1 = self.boundary_span();
        let c = self
            .primal_graph()
            .shortest_cycle_where(|c| !b1.contains(c))
            .ok_or_else(|| Error::Invalid("trivial homology".into()))?;
        Ok((c.weight(), c))
    }

    /// Vertices become faces and faces vertices; edge indices are kept.
    pub fn dual(&self) -> Result<CellComplex2D> {
        if !self.is_closed() {
            return Err(Error::Unsupported("dual of a complex with boundary".into()));
        }
        self.validate()?;
        let edges = self.edge_faces();
        let faces = self.vertex_edges();
        let d = CellComplex2D::new(self.nf(), edges, faces, SurfaceKind::ClosedOrientable);
        d.validate()?;
        Ok(d)
    }

    /// Contract every face of `color` to a point.
    pub fn shrunk(&self, color: Color) -> Result<CellComplex2D> {
        let fc = self.face_colors.as_ref().ok_or_else(|| Error::Coloring("uncolored complex".into()))?;
        let ec = self.edge_colors.as_ref().ok_or_else(|| Error::Coloring("uncolored complex".into()))?;
        let vf = self.vertex_faces();
        let mut vid = BTreeMap::new();
        for (f, &c) in fc.iter().enumerate() {
            if c == color {
                let n = vid.len();
                vid.insert(f, n);
            }
        }
        let mut eid = BTreeMap::new();
        let mut edges = Vec::new();
        for (e, &c) in ec.iter().enumerate() {
            if c != color {
                continue;
            }
            let mut ends = Vec::new();
            for &v in &self.edges[e] {
                if let Some(&f) = vf[v].iter().find(|&&f| fc[f] == color) {
                    ends.push(vid[&f]);
                }
            }
            if ends.is_empty() {
                continue;
            }
            eid.insert(e, edges.len());
            edges.push(ends);
        }
        let faces = (0..self.nf())
            .filter(|&f| fc[f] != color)
            .map(|f| self.faces[f].iter().filter_map(|e| eid.get(e).copied()).collect())
            .collect();
        Ok(CellComplex2D::new(vid.len(), edges, faces, self.kind))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("complex serializes")
    }

    pub fn from_json(s: &str) -> Result<CellComplex2D> {
        let c: CellComplex2D = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}
