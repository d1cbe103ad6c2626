//! Multigraphs whose edges are qubits and whose nodes are checks, plus an
//! optional virtual node standing in for every open boundary at once.
//! Shared by the matching decoder and by the shortest-cycle searches.

use crate::gf2::BitVec;
use std::collections::VecDeque;

#[derive(Clone, Debug)]
pub struct ChainGraph {
    nnodes: usize,
    ends: Vec<(usize, usize)>,
    adj: Vec<Vec<(usize, usize)>>,
    virtual_node: Option<usize>,
}

impl ChainGraph {
    /// `checks[e]` lists the one or two checks touching edge `e`. Edges with a
    /// single check are attached to a shared virtual node appended after the
    /// real ones; edges with none become loops on that node.
    pub fn from_incidence(nchecks: usize, checks: &[Vec<usize>]) -> Self {
        let open = checks.iter().any(|c| c.len() < 2);
        let vnode = if open { Some(nchecks) } else { None };
        let nnodes = nchecks + usize::from(open);
        let mut ends = Vec::with_capacity(checks.len());
        for c in checks {
            let e = match c.len() {
                0 => (nchecks, nchecks),
                1 => (c[0], nchecks),
                2 => (c[0], c[1]),
                _ => panic!("edge touches more than two checks"),
            };
            ends.push(e);
        }
        let mut adj = vec![Vec::new(); nnodes];
        for (e, &(a, b)) in ends.iter().enumerate() {
            adj[a].push((b, e));
            if a != b {
                adj[b].push((a, e));
            }
        }
        for l in adj.iter_mut() {
            l.sort_unstable();
        }
        ChainGraph { nnodes, ends, adj, virtual_node: vnode }
    }

    pub fn nnodes(&self) -> usize {
        self.nnodes
    }

    pub fn nedges(&self) -> usize {
        self.ends.len()
    }

    pub fn ends(&self, e: usize) -> (usize, usize) {
        self.ends[e]
    }

    pub fn virtual_node(&self) -> Option<usize> {
        self.virtual_node
    }

    pub fn neighbors(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    /// BFS from `src`. Neighbors are scanned in (node, edge) order so the
    /// tree, and every path read off it, is deterministic.
    pub fn bfs(&self, src: usize) -> Bfs {
        let mut dist = vec![u32::MAX; self.nnodes];
        let mut parent = vec![usize::MAX; self.nnodes];
        let mut q = VecDeque::new();
        dist[src] = 0;
        q.push_back(src);
        while let Some(u) = q.pop_front() {
            for &(w, e) in &self.adj[u] {
                if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = e;
                    q.push_back(w);
                }
            }
        }
        Bfs { src, dist, parent }
    }

    /// Edges on the tree path from the BFS root to `v`, as a chain.
    pub fn tree_path(&self, t: &Bfs, v: usize, out: &mut BitVec) {
        let mut cur = v;
        while cur != t.src {
            let e = t.parent[cur];
            assert!(e != usize::MAX, "node not reachable");
            out.flip(e);
            let (a, b) = self.ends[e];
            cur = if a == cur { b } else { a };
        }
    }

    /// Candidate cycles from every root: for each non-tree edge (u,w) the
    /// chain path(r,u) + e + path(r,w). A shortest cycle satisfying any
    /// class predicate closed under addition appears among them.
    pub fn fundamental_cycles(&self, mut visit: impl FnMut(BitVec)) {
        for r in 0..self.nnodes {
            let t = self.bfs(r);
            for (e, &(a, b)) in self.ends.iter().enumerate() {
                if t.dist[a] == u32::MAX || t.dist[b] == u32::MAX {
                    continue;
                }
                if t.parent[a] == e || t.parent[b] == e {
                    continue;
                }
                let mut c = BitVec::zeros(self.ends.len());
                self.tree_path(&t, a, &mut c);
                self.tree_path(&t, b, &mut c);
                c.flip(e);
                visit(c);
            }
        }
    }

    /// Minimum-weight cycle accepted by `nontrivial`, smallest in (weight,
    /// bit order) among minimum ones.
    pub fn shortest_cycle_where(&self, nontrivial: impl Fn(&BitVec) -> bool) -> Option<BitVec> {
        let mut best: Option<BitVec> = None;
        self.fundamental_cycles(|c| {
            let w = c.weight();
            if let Some(b) = &best {
                let bw = b.weight();
                if w > bw || (w == bw && canon_key(&c) >= canon_key(b)) {
                    return;
                }
            }
            if nontrivial(&c) {
                best = Some(c);
            }
        });
        best
    }
}

/// Ordering key: sorted support, compared lexicographically.
pub fn canon_key(c: &BitVec) -> Vec<usize> {
    c.support()
}

#[derive(Clone, Debug)]
pub struct Bfs {
    pub src: usize,
    pub dist: Vec<u32>,
    pub parent: Vec<usize>,
}
