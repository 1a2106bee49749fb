//! Planarity testing with embedding construction (left-right criterion).
//!
//! Follows the DFS orientation / testing / embedding phases of the LR
//! algorithm. The embedding is returned as a rotation system, which the
//! separator order uses to triangulate the incidence graph.

use std::collections::HashMap;

use crate::incidence::IncidenceGraph;

const NONE: usize = usize::MAX;

/// Cyclic order of neighbors around each vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    rotation: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn from_rotation(rotation: Vec<Vec<usize>>) -> Self {
        RotationSystem { rotation }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotation.len()
    }

    pub fn around(&self, v: usize) -> &[usize] {
        &self.rotation[v]
    }

    /// Face boundaries as dart sequences `(u, v)`; each dart is used once.
    pub fn faces(&self) -> Vec<Vec<(usize, usize)>> {
        let pos: HashMap<(usize, usize), usize> = self
            .rotation
            .iter()
            .enumerate()
            .flat_map(|(v, r)| r.iter().enumerate().map(move |(i, &u)| ((v, u), i)))
            .collect();
        let mut used: HashMap<(usize, usize), bool> = pos.keys().map(|&d| (d, false)).collect();
        let mut faces = Vec::new();
        for v in 0..self.rotation.len() {
            for &u in &self.rotation[v] {
                if used[&(v, u)] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut b) = (v, u);
                while !used[&(a, b)] {
                    used.insert((a, b), true);
                    face.push((a, b));
                    let rb = &self.rotation[b];
                    let i = pos[&(b, a)];
                    let c = rb[(i + 1) % rb.len()];
                    a = b;
                    b = c;
                }
                faces.push(face);
            }
        }
        faces
    }

    /// Euler's formula per connected component, the certificate that the
    /// rotation system describes a plane embedding.
    pub fn is_plane(&self) -> bool {
        let n = self.rotation.len();
        let darts: usize = self.rotation.iter().map(Vec::len).sum();
        if darts % 2 != 0 {
            return false;
        }
        // every dart must have its reverse
        for (v, r) in self.rotation.iter().enumerate() {
            for &u in r {
                if u >= n || !self.rotation[u].contains(&v) {
                    return false;
                }
            }
        }
        let edges = darts / 2;
        let isolated = self.rotation.iter().filter(|r| r.is_empty()).count();
        let components = count_components(&self.rotation);
        let faces = self.faces().len() + isolated;
        n + faces == edges + 2 * components
    }
}

fn count_components(adj: &[Vec<usize>]) -> usize {
    let n = adj.len();
    let mut seen = vec![false; n];
    let mut count = 0;
    for s in 0..n {
        if seen[s] {
            continue;
        }
        count += 1;
        seen[s] = true;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
    }
    count
}

/// Planarity of the incidence graph (multi-edges collapsed).
pub fn is_planar(g: &IncidenceGraph) -> bool {
    planar_embedding(&g.adjacency()).is_some()
}

/// Planarity test for a simple undirected graph given by adjacency lists.
/// Self-loops and repeated neighbors are ignored.
pub fn planar_embedding(adj: &[Vec<usize>]) -> Option<RotationSystem> {
    let n = adj.len();
    let mut clean: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (v, list) in adj.iter().enumerate() {
        for &u in list {
            if u != v && !clean[v].contains(&u) {
                clean[v].push(u);
            }
            if u != v && !clean[u].contains(&v) {
                clean[u].push(v);
            }
        }
    }
    let m: usize = clean.iter().map(Vec::len).sum::<usize>() / 2;
    if n > 2 && m > 3 * n - 6 {
        return None;
    }
    let mut lr = LrState::new(clean);
    lr.run()
}

#[derive(Clone, Copy, Default, PartialEq, Eq)]
struct Interval {
    low: Option<usize>,
    high: Option<usize>,
}

impl Interval {
    fn is_empty(&self) -> bool {
        self.low.is_none() && self.high.is_none()
    }
}

#[derive(Clone, Copy)]
struct ConflictPair {
    id: usize,
    left: Interval,
    right: Interval,
}

impl ConflictPair {
    fn swap(&mut self) {
        std::mem::swap(&mut self.left, &mut self.right);
    }
}

struct LrState {
    adj: Vec<Vec<usize>>,
    // oriented edges
    src: Vec<usize>,
    dst: Vec<usize>,
    edge_of: HashMap<(usize, usize), usize>,
    out: Vec<Vec<usize>>,
    ordered: Vec<Vec<usize>>,
    roots: Vec<usize>,
    height: Vec<usize>,
    parent_edge: Vec<usize>,
    lowpt: Vec<usize>,
    lowpt2: Vec<usize>,
    nesting: Vec<i64>,
    refs: Vec<Option<usize>>,
    side: Vec<i64>,
    lowpt_edge: Vec<usize>,
    stack_bottom: Vec<Option<usize>>,
    stack: Vec<ConflictPair>,
    next_pair_id: usize,
    left_ref: Vec<usize>,
    right_ref: Vec<usize>,
}

impl LrState {
    fn new(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        LrState {
            adj,
            src: Vec::new(),
            dst: Vec::new(),
            edge_of: HashMap::new(),
            out: vec![Vec::new(); n],
            ordered: vec![Vec::new(); n],
            roots: Vec::new(),
            height: vec![NONE; n],
            parent_edge: vec![NONE; n],
            lowpt: Vec::new(),
            lowpt2: Vec::new(),
            nesting: Vec::new(),
            refs: Vec::new(),
            side: Vec::new(),
            lowpt_edge: Vec::new(),
            stack_bottom: Vec::new(),
            stack: Vec::new(),
            next_pair_id: 0,
            left_ref: vec![NONE; n],
            right_ref: vec![NONE; n],
        }
    }

    fn run(&mut self) -> Option<RotationSystem> {
        let n = self.adj.len();
        for v in 0..n {
            if self.height[v] == NONE {
                self.height[v] = 0;
                self.roots.push(v);
                self.dfs_orientation(v);
            }
        }
        for v in 0..n {
            let mut o = self.out[v].clone();
            o.sort_by_key(|&e| self.nesting[e]);
            self.ordered[v] = o;
        }
        for r in self.roots.clone() {
            if !self.dfs_testing(r) {
                return None;
            }
        }
        for e in 0..self.src.len() {
            let s = self.sign(e);
            self.nesting[e] *= s;
        }
        let mut emb = Builder::new(n);
        for v in 0..n {
            let mut o = self.out[v].clone();
            o.sort_by_key(|&e| self.nesting[e]);
            let mut prev = None;
            for &e in &o {
                let w = self.dst[e];
                emb.add_cw(v, w, prev);
                prev = Some(w);
            }
            self.ordered[v] = o;
        }
        for r in self.roots.clone() {
            self.dfs_embedding(r, &mut emb);
        }
        Some(emb.finish())
    }

    fn new_edge(&mut self, v: usize, w: usize) -> usize {
        let id = self.src.len();
        self.src.push(v);
        self.dst.push(w);
        self.edge_of.insert((v, w), id);
        self.out[v].push(id);
        self.lowpt.push(0);
        self.lowpt2.push(0);
        self.nesting.push(0);
        self.refs.push(None);
        self.side.push(1);
        self.lowpt_edge.push(NONE);
        self.stack_bottom.push(None);
        id
    }

    fn dfs_orientation(&mut self, v: usize) {
        let e = self.parent_edge[v];
        for i in 0..self.adj[v].len() {
            let w = self.adj[v][i];
            if self.edge_of.contains_key(&(v, w)) || self.edge_of.contains_key(&(w, v)) {
                continue;
            }
            let vw = self.new_edge(v, w);
            self.lowpt[vw] = self.height[v];
            self.lowpt2[vw] = self.height[v];
            if self.height[w] == NONE {
                self.parent_edge[w] = vw;
                self.height[w] = self.height[v] + 1;
                self.dfs_orientation(w);
            } else {
                self.lowpt[vw] = self.height[w];
            }
            self.nesting[vw] = 2 * self.lowpt[vw] as i64;
            if self.lowpt2[vw] < self.height[v] {
                self.nesting[vw] += 1;
            }
            if e != NONE {
                if self.lowpt[vw] < self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt[e].min(self.lowpt2[vw]);
                    self.lowpt[e] = self.lowpt[vw];
                } else if self.lowpt[vw] > self.lowpt[e] {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt[vw]);
                } else {
                    self.lowpt2[e] = self.lowpt2[e].min(self.lowpt2[vw]);
                }
            }
        }
    }

    fn top_id(&self) -> Option<usize> {
        self.stack.last().map(|p| p.id)
    }

    fn push_pair(&mut self, left: Interval, right: Interval) {
        let id = self.next_pair_id;
        self.next_pair_id += 1;
        self.stack.push(ConflictPair { id, left, right });
    }

    fn conflicting(&self, i: &Interval, b: usize) -> bool {
        match i.high {
            Some(h) if !i.is_empty() => self.lowpt[h] > self.lowpt[b],
            _ => false,
        }
    }

    fn lowest(&self, p: &ConflictPair) -> usize {
        match (p.left.low, p.right.low) {
            (None, Some(r)) => self.lowpt[r],
            (Some(l), None) => self.lowpt[l],
            (Some(l), Some(r)) => self.lowpt[l].min(self.lowpt[r]),
            (None, None) => NONE,
        }
    }

    fn dfs_testing(&mut self, v: usize) -> bool {
        let e = self.parent_edge[v];
        let ordered = self.ordered[v].clone();
        for (idx, &ei) in ordered.iter().enumerate() {
            let w = self.dst[ei];
            self.stack_bottom[ei] = self.top_id();
            if self.parent_edge[w] == ei {
                if !self.dfs_testing(w) {
                    return false;
                }
            } else {
                self.lowpt_edge[ei] = ei;
                self.push_pair(
                    Interval::default(),
                    Interval {
                        low: Some(ei),
                        high: Some(ei),
                    },
                );
            }
            if self.lowpt[ei] < self.height[v] {
                if idx == 0 {
                    self.lowpt_edge[e] = self.lowpt_edge[ei];
                } else if !self.add_constraints(ei, e) {
                    return false;
                }
            }
        }
        if e != NONE {
            self.remove_back_edges(e);
        }
        true
    }

    fn add_constraints(&mut self, ei: usize, e: usize) -> bool {
        let id = self.next_pair_id;
        self.next_pair_id += 1;
        let mut p = ConflictPair {
            id,
            left: Interval::default(),
            right: Interval::default(),
        };
        loop {
            let Some(mut q) = self.stack.pop() else { break };
            if !q.left.is_empty() {
                q.swap();
            }
            if !q.left.is_empty() {
                return false;
            }
            let qlow = q.right.low.expect("non-empty right interval");
            if self.lowpt[qlow] > self.lowpt[e] {
                if p.right.is_empty() {
                    p.right = q.right;
                } else if let Some(pl) = p.right.low {
                    self.refs[pl] = q.right.high;
                }
                p.right.low = q.right.low;
            } else {
                self.refs[qlow] = Some(self.lowpt_edge[e]);
            }
            if self.top_id() == self.stack_bottom[ei] {
                break;
            }
        }
        while let Some(top) = self.stack.last().copied() {
            if !(self.conflicting(&top.left, ei) || self.conflicting(&top.right, ei)) {
                break;
            }
            let mut q = self.stack.pop().unwrap();
            if self.conflicting(&q.right, ei) {
                q.swap();
            }
            if self.conflicting(&q.right, ei) {
                return false;
            }
            if let Some(pl) = p.right.low {
                self.refs[pl] = q.right.high;
            }
            if q.right.low.is_some() {
                p.right.low = q.right.low;
            }
            if p.left.is_empty() {
                p.left = q.left;
            } else if let Some(pl) = p.left.low {
                self.refs[pl] = q.left.high;
            }
            p.left.low = q.left.low;
        }
        if !(p.left.is_empty() && p.right.is_empty()) {
            self.stack.push(p);
        }
        true
    }

    fn remove_back_edges(&mut self, e: usize) {
        let u = self.src[e];
        while let Some(top) = self.stack.last() {
            if self.lowest(top) != self.height[u] {
                break;
            }
            let p = self.stack.pop().unwrap();
            if let Some(l) = p.left.low {
                self.side[l] = -1;
            }
        }
        if let Some(mut p) = self.stack.pop() {
            while let Some(h) = p.left.high {
                if self.dst[h] != u {
                    break;
                }
                p.left.high = self.refs[h];
            }
            if p.left.high.is_none() {
                if let Some(l) = p.left.low {
                    self.refs[l] = p.right.low;
                    self.side[l] = -1;
                    p.left.low = None;
                }
            }
            while let Some(h) = p.right.high {
                if self.dst[h] != u {
                    break;
                }
                p.right.high = self.refs[h];
            }
            if p.right.high.is_none() {
                if let Some(r) = p.right.low {
                    self.refs[r] = p.left.low;
                    self.side[r] = -1;
                    p.right.low = None;
                }
            }
            self.stack.push(p);
        }
        if self.lowpt[e] < self.height[u] {
            if let Some(top) = self.stack.last() {
                let hl = top.left.high;
                let hr = top.right.high;
                self.refs[e] = match (hl, hr) {
                    (Some(l), None) => Some(l),
                    (Some(l), Some(r)) if self.lowpt[l] > self.lowpt[r] => Some(l),
                    _ => hr,
                };
            }
        }
    }

    fn sign(&mut self, e: usize) -> i64 {
        let mut chain = vec![e];
        while let Some(r) = self.refs[*chain.last().unwrap()] {
            chain.push(r);
        }
        for i in (0..chain.len() - 1).rev() {
            let (a, b) = (chain[i], chain[i + 1]);
            self.side[a] *= self.side[b];
            self.refs[a] = None;
        }
        self.side[e]
    }

    fn dfs_embedding(&mut self, v: usize, emb: &mut Builder) {
        let ordered = self.ordered[v].clone();
        for &ei in &ordered {
            let w = self.dst[ei];
            if self.parent_edge[w] == ei {
                emb.add_first(w, v);
                self.left_ref[v] = w;
                self.right_ref[v] = w;
                self.dfs_embedding(w, emb);
            } else if self.side[ei] == 1 {
                emb.add_cw(w, v, Some(self.right_ref[w]));
            } else {
                emb.add_ccw(w, v, Some(self.left_ref[w]));
                self.left_ref[w] = v;
            }
        }
    }
}

/// Doubly linked cyclic neighbor lists under construction.
struct Builder {
    links: HashMap<(usize, usize), (usize, usize)>, // (cw, ccw)
    first: Vec<Option<usize>>,
}

impl Builder {
    fn new(n: usize) -> Self {
        Builder {
            links: HashMap::new(),
            first: vec![None; n],
        }
    }

    fn add_cw(&mut self, start: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => {
                self.links.insert((start, end), (end, end));
                self.first[start] = Some(end);
            }
            Some(r) => {
                let (cw_r, ccw_r) = self.links[&(start, r)];
                self.links.insert((start, r), (end, ccw_r));
                self.links.insert((start, end), (cw_r, r));
                let entry = self.links.get_mut(&(start, cw_r)).unwrap();
                entry.1 = end;
            }
        }
    }

    fn add_ccw(&mut self, start: usize, end: usize, reference: Option<usize>) {
        match reference {
            None => self.add_cw(start, end, None),
            Some(r) => {
                let ccw_r = self.links[&(start, r)].1;
                self.add_cw(start, end, Some(ccw_r));
                if self.first[start] == Some(r) {
                    self.first[start] = Some(end);
                }
            }
        }
    }

    fn add_first(&mut self, start: usize, end: usize) {
        let r = self.first[start];
        self.add_ccw(start, end, r);
    }

    fn finish(self) -> RotationSystem {
        let rotation = self
            .first
            .iter()
            .enumerate()
            .map(|(v, f)| {
                let mut r = Vec::new();
                if let Some(f) = *f {
                    let mut cur = f;
                    loop {
                        r.push(cur);
                        cur = self.links[&(v, cur)].0;
                        if cur == f {
                            break;
                        }
                    }
                }
                r
            })
            .collect();
        RotationSystem { rotation }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::incidence::incidence_graph;
    use crate::perm::Permutation;

    fn from_edges(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); n];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        adj
    }

    fn complete(n: usize) -> Vec<Vec<usize>> {
        (0..n)
            .map(|v| (0..n).filter(|&u| u != v).collect())
            .collect()
    }

    fn grid(r: usize, c: usize) -> Vec<Vec<usize>> {
        let mut e = Vec::new();
        for i in 0..r {
            for j in 0..c {
                let v = i * c + j;
                if j + 1 < c {
                    e.push((v, v + 1));
                }
                if i + 1 < r {
                    e.push((v, v + c));
                }
            }
        }
        from_edges(r * c, &e)
    }

    fn assert_planar(adj: &[Vec<usize>]) {
        let emb = planar_embedding(adj).expect("planar");
        assert!(emb.is_plane(), "embedding fails Euler check");
        for v in 0..adj.len() {
            let mut a = emb.around(v).to_vec();
            a.sort_unstable();
            let mut b = adj[v].clone();
            b.sort_unstable();
            b.dedup();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn small_planar_graphs() {
        assert_planar(&complete(4));
        assert_planar(&grid(3, 3));
        assert_planar(&grid(6, 7));
        assert_planar(&from_edges(5, &[(0, 1), (1, 2), (2, 0), (3, 4)]));
        assert_planar(&from_edges(1, &[]));
    }

    #[test]
    fn kuratowski_graphs_rejected() {
        assert!(planar_embedding(&complete(5)).is_none());
        let k33: Vec<_> = (0..3).flat_map(|a| (3..6).map(move |b| (a, b))).collect();
        assert!(planar_embedding(&from_edges(6, &k33)).is_none());
    }

    #[test]
    fn subdivided_k33_rejected() {
        // K3,3 with every edge subdivided once; passes the edge-count filter
        let mut e = Vec::new();
        let mut next = 6;
        for a in 0..3 {
            for b in 3..6 {
                e.push((a, next));
                e.push((next, b));
                next += 1;
            }
        }
        assert!(planar_embedding(&from_edges(next, &e)).is_none());
    }

    #[test]
    fn petersen_rejected() {
        let e = [
            (0, 1), (1, 2), (2, 3), (3, 4), (4, 0),
            (0, 5), (1, 6), (2, 7), (3, 8), (4, 9),
            (5, 7), (7, 9), (9, 6), (6, 8), (8, 5),
        ];
        assert!(planar_embedding(&from_edges(10, &e)).is_none());
    }

    #[test]
    fn paper_jordan_example_is_planar() {
        let p = Permutation::parse("4 1 2 3 8 5 6 7").unwrap();
        assert!(is_planar(&incidence_graph(&p)));
        assert!(is_planar(&incidence_graph(&Permutation::identity(9))));
    }
}
