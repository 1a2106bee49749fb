//! Nested-dissection order for planar incidence graphs.
//!
//! A separator comes from BFS levels: two cheap levels `l0 ≤ l1 ≤ l2` around
//! the median level `l1`. When the band strictly between them is still
//! heavier than 2/3, the band is cut further by a fundamental cycle of a
//! triangulation of the band with everything below `l0` contracted to a root.
//! Components of the remainder are ordered recursively, then the separator.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::incidence::IncidenceGraph;
use crate::perm::Permutation;
use crate::planar::{planar_embedding, RotationSystem};

use super::EmbeddingOrder;

/// Subgraphs this small are emitted in index order.
const BASE_SIZE: usize = 4;

/// The narrower of the nested-dissection order and the BFS-level order of
/// the incidence graph; ties keep the dissection order.
pub fn order_separator(pattern: &Permutation) -> Result<EmbeddingOrder> {
    let g = IncidenceGraph::new(pattern);
    let adj = g.adjacency();
    let seq = separator_order_for_graph(&adj)?;
    let dissection = EmbeddingOrder::new(pattern, seq.into_iter().map(|v| v + 1).collect())?;
    let levels = EmbeddingOrder::new(pattern, bfs_order(&adj).into_iter().map(|v| v + 1).collect())?;
    Ok(if levels.bd_tau() < dissection.bd_tau() { levels } else { dissection })
}

/// Nested-dissection vertex order (0-based) for a planar graph given by
/// simple adjacency lists: components of the remainder first, separator last.
pub fn separator_order_for_graph(adj: &[Vec<usize>]) -> Result<Vec<usize>> {
    if planar_embedding(adj).is_none() {
        return Err(Error::NonPlanar);
    }
    let all: Vec<usize> = (0..adj.len()).collect();
    let mut ctx = Ctx {
        adj,
        mark: vec![0; adj.len()],
        stamp: 0,
    };
    let mut out = Vec::with_capacity(adj.len());
    ctx.order_set(&all, &mut out);
    Ok(out)
}

/// BFS order of every component, each from its smallest vertex.
fn bfs_order(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut out = Vec::with_capacity(adj.len());
    for s in 0..adj.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let start = out.len();
        out.push(s);
        let mut i = start;
        while i < out.len() {
            let v = out[i];
            i += 1;
            for &u in &adj[v] {
                if !seen[u] {
                    seen[u] = true;
                    out.push(u);
                }
            }
        }
    }
    out
}

struct Ctx<'a> {
    adj: &'a [Vec<usize>],
    /// Membership scratch: `mark[v] == stamp` iff `v` is in the current set.
    mark: Vec<u64>,
    stamp: u64,
}

impl Ctx<'_> {
    fn select(&mut self, vs: &[usize]) {
        self.stamp += 1;
        for &v in vs {
            self.mark[v] = self.stamp;
        }
    }

    fn inside(&self, v: usize) -> bool {
        self.mark[v] == self.stamp
    }

    /// Connected components of the subgraph induced by `vs`, each sorted,
    /// listed by smallest vertex.
    fn components(&mut self, vs: &[usize]) -> Vec<Vec<usize>> {
        self.select(vs);
        let mut sorted = vs.to_vec();
        sorted.sort_unstable();
        let mut seen: HashMap<usize, ()> = HashMap::with_capacity(vs.len());
        let mut comps = Vec::new();
        for &s in &sorted {
            if seen.insert(s, ()).is_some() {
                continue;
            }
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &u in &self.adj[v] {
                    if self.inside(u) && seen.insert(u, ()).is_none() {
                        comp.push(u);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    fn order_set(&mut self, vs: &[usize], out: &mut Vec<usize>) {
        for comp in self.components(vs) {
            self.order_connected(&comp, out);
        }
    }

    fn order_connected(&mut self, vs: &[usize], out: &mut Vec<usize>) {
        if vs.len() <= BASE_SIZE {
            out.extend_from_slice(vs);
            return;
        }
        let mut sep = self.separator(vs);
        sep.sort_unstable();
        sep.dedup();
        let rest: Vec<usize> = vs.iter().copied().filter(|v| sep.binary_search(v).is_err()).collect();
        self.order_set(&rest, out);
        out.extend_from_slice(&sep);
    }

    /// BFS levels of the connected set `vs` from its smallest vertex.
    fn levels(&mut self, vs: &[usize]) -> Vec<Vec<usize>> {
        self.select(vs);
        let mut level: HashMap<usize, usize> = HashMap::with_capacity(vs.len());
        let root = *vs.iter().min().expect("nonempty");
        level.insert(root, 0);
        let mut levels = vec![vec![root]];
        loop {
            let mut next = Vec::new();
            for &v in levels.last().unwrap() {
                for &u in &self.adj[v] {
                    if self.inside(u) && !level.contains_key(&u) {
                        level.insert(u, levels.len());
                        next.push(u);
                    }
                }
            }
            if next.is_empty() {
                break;
            }
            levels.push(next);
        }
        levels
    }

    fn separator(&mut self, vs: &[usize]) -> Vec<usize> {
        let n = vs.len();
        let levels = self.levels(vs);
        let r = levels.len() as isize - 1;
        let size = |l: isize| if l < 0 || l > r { 0 } else { levels[l as usize].len() };
        let mut acc = 0;
        let mut l1 = 0isize;
        for (l, lv) in levels.iter().enumerate() {
            acc += lv.len();
            if 2 * acc >= n {
                l1 = l as isize;
                break;
            }
        }
        let cost = |l: isize| size(l) + 2 * l1.abs_diff(l);
        // ties favour levels closer to l1
        let l0 = (-1..=l1).rev().min_by_key(|&l| cost(l)).unwrap();
        let l2 = (l1..=r + 1).min_by_key(|&l| cost(l)).unwrap();
        if l0 == l1 && l2 == l1 {
            return levels[l1 as usize].clone();
        }
        let mut sep = Vec::new();
        for l in [l0, l2] {
            if (0..=r).contains(&l) {
                sep.extend_from_slice(&levels[l as usize]);
            }
        }
        let middle: Vec<usize> = ((l0 + 1)..l2).flat_map(|l| levels[l as usize].iter().copied()).collect();
        if 3 * middle.len() > 2 * n {
            let attach = (l0 >= 0).then(|| levels[(l0 + 1) as usize].as_slice());
            sep.extend(self.cycle_separator(&middle, attach));
        }
        if sep.is_empty() {
            sep = levels[l1 as usize].clone();
        }
        sep
    }

    /// Real vertices of a balancing fundamental cycle in the band `middle`.
    /// `attach` lists the band vertices adjacent to the contracted root.
    fn cycle_separator(&mut self, middle: &[usize], attach: Option<&[usize]>) -> Vec<usize> {
        self.select(middle);
        let m = middle.len();
        let local: HashMap<usize, usize> = middle.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut h: Vec<Vec<usize>> = middle
            .iter()
            .map(|&v| {
                self.adj[v]
                    .iter()
                    .filter(|&&u| self.inside(u))
                    .map(|u| local[u])
                    .collect()
            })
            .collect();
        let root = match attach {
            Some(att) => {
                h.push(att.iter().map(|u| local[u]).collect());
                for u in att {
                    h[local[u]].push(m);
                }
                m
            }
            None => local[middle.iter().min().unwrap()],
        };
        let real = h.len();
        let Some(emb) = planar_embedding(&h) else {
            return Vec::new();
        };

        // Fan a dummy vertex into every face with more than three distinct
        // corners, attaching at the first visit of each corner.
        let mut rot: Vec<Vec<usize>> = (0..real).map(|v| emb.around(v).to_vec()).collect();
        for face in emb.faces() {
            let mut corners: Vec<(usize, usize)> = Vec::new();
            for &(a, b) in &face {
                if !corners.iter().any(|&(_, c)| c == b) {
                    corners.push((a, b));
                }
            }
            if corners.len() <= 3 {
                continue;
            }
            let z = rot.len();
            for &(a, b) in &corners {
                let at = rot[b].iter().position(|&x| x == a).expect("dart reverse exists");
                rot[b].insert(at + 1, z);
            }
            rot.push(corners.iter().rev().map(|&(_, b)| b).collect());
        }
        let total = rot.len();

        // BFS tree over real edges from the root; dummies hang off a corner.
        let mut parent = vec![usize::MAX; total];
        let mut depth = vec![0usize; total];
        parent[root] = root;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &u in &h[v] {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    depth[u] = depth[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        for z in real..total {
            let c = rot[z][0];
            parent[z] = c;
            depth[z] = depth[c] + 1;
        }
        let is_tree = |a: usize, b: usize| (parent[a] == b && a != b) || (parent[b] == a && a != b);

        // Dual spanning tree formed by the non-tree edges.
        let faces = RotationSystem::from_rotation(rot.clone()).faces();
        let mut face_of: HashMap<(usize, usize), usize> = HashMap::new();
        for (f, face) in faces.iter().enumerate() {
            for &d in face {
                face_of.insert(d, f);
            }
        }
        let mut weight = vec![0usize; faces.len()];
        for v in (0..m).filter(|&v| v != root || attach.is_none()) {
            if let Some(&u) = rot[v].first() {
                weight[face_of[&(v, u)]] += 1;
            }
        }
        let mut dual: Vec<Vec<(usize, (usize, usize))>> = vec![Vec::new(); faces.len()];
        for (a, ra) in rot.iter().enumerate() {
            for &b in ra {
                if a < b && !is_tree(a, b) {
                    let (f, g) = (face_of[&(a, b)], face_of[&(b, a)]);
                    dual[f].push((g, (a, b)));
                    dual[g].push((f, (a, b)));
                }
            }
        }
        let mut dparent: Vec<Option<(usize, (usize, usize))>> = vec![None; faces.len()];
        let mut visited = vec![false; faces.len()];
        let mut dorder = Vec::with_capacity(faces.len());
        let mut stack = vec![0usize];
        visited[0] = true;
        while let Some(f) = stack.pop() {
            dorder.push(f);
            for &(g, e) in &dual[f] {
                if !visited[g] {
                    visited[g] = true;
                    dparent[g] = Some((f, e));
                    stack.push(g);
                }
            }
        }
        let mut sub = weight.clone();
        for &f in dorder.iter().rev() {
            if let Some((p, _)) = dparent[f] {
                sub[p] += sub[f];
            }
        }
        let w_total: usize = weight.iter().sum();
        let best = dorder
            .iter()
            .filter_map(|&f| dparent[f].map(|(_, e)| (sub[f].max(w_total - sub[f]), e)))
            .min_by_key(|&(score, _)| score);
        let Some((_, (a, b))) = best else {
            return Vec::new();
        };

        // Tree paths from both ends up to their common ancestor.
        let (mut x, mut y) = (a, b);
        let mut cycle = vec![x, y];
        while x != y {
            if depth[x] >= depth[y] {
                x = parent[x];
                cycle.push(x);
            } else {
                y = parent[y];
                cycle.push(y);
            }
        }
        cycle
            .into_iter()
            .filter(|&v| v < m && !(attach.is_some() && v == root))
            .map(|v| middle[v])
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gen_jordan;

    fn perm(s: &str) -> Permutation {
        Permutation::parse(s).unwrap()
    }

    #[test]
    fn jordan_example_order() {
        let p = perm("4 1 2 3 8 5 6 7");
        let o = order_separator(&p).unwrap();
        assert_eq!(o.len(), 8);
        assert!(o.bd_tau() <= 4);
    }

    #[test]
    fn identity_has_small_width() {
        for k in [1, 5, 17, 100, 400] {
            let o = order_separator(&Permutation::identity(k)).unwrap();
            assert!(o.bd_tau() <= 1, "k={k} bd={}", o.bd_tau());
        }
    }

    #[test]
    fn rejects_non_planar() {
        let mut found = false;
        for seed in 0..200u64 {
            let p = crate::generators::gen_random(12, seed);
            if !crate::planar::is_planar(&IncidenceGraph::new(&p)) {
                assert_eq!(order_separator(&p), Err(Error::NonPlanar));
                found = true;
                break;
            }
        }
        assert!(found);
    }

    #[test]
    fn grid_graph_order_is_complete() {
        let side = 20;
        let id = |r: usize, c: usize| r * side + c;
        let mut adj = vec![Vec::new(); side * side];
        for r in 0..side {
            for c in 0..side {
                if r + 1 < side {
                    adj[id(r, c)].push(id(r + 1, c));
                    adj[id(r + 1, c)].push(id(r, c));
                }
                if c + 1 < side {
                    adj[id(r, c)].push(id(r, c + 1));
                    adj[id(r, c + 1)].push(id(r, c));
                }
            }
        }
        let seq = separator_order_for_graph(&adj).unwrap();
        let mut s = seq.clone();
        s.sort_unstable();
        assert_eq!(s, (0..side * side).collect::<Vec<_>>());
    }

    #[test]
    fn jordan_orders_are_bijections() {
        for seed in 0..20 {
            let p = gen_jordan(64, seed).unwrap();
            let o = order_separator(&p).unwrap();
            let mut t = o.tau().to_vec();
            t.sort_unstable();
            assert_eq!(t, (1..=64).collect::<Vec<_>>());
        }
    }
}
