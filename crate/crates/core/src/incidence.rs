//! Neighbor operators, the incidence graph and boundary sets.

use fixedbitset::FixedBitSet;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::perm::{Permutation, Point};

/// The two virtual points: `Low` stands for `(0,0)`, `High` for `(∞,∞)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sentinel {
    Low,
    High,
}

/// Result of a neighbor query: a real point or one of the sentinels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Neighbor {
    Real(Point),
    Virtual(Sentinel),
}

impl Neighbor {
    pub fn real(self) -> Option<Point> {
        match self {
            Neighbor::Real(p) => Some(p),
            Neighbor::Virtual(_) => None,
        }
    }

    /// Coordinate key along x: sentinels sort strictly outside `1..=n`.
    pub fn x_key(self) -> u64 {
        match self {
            Neighbor::Real(p) => p.x as u64,
            Neighbor::Virtual(Sentinel::Low) => 0,
            Neighbor::Virtual(Sentinel::High) => u64::MAX,
        }
    }

    pub fn y_key(self) -> u64 {
        match self {
            Neighbor::Real(p) => p.y as u64,
            Neighbor::Virtual(Sentinel::Low) => 0,
            Neighbor::Virtual(Sentinel::High) => u64::MAX,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Direction {
    Left,
    Right,
    Down,
    Up,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Left,
        Direction::Right,
        Direction::Down,
        Direction::Up,
    ];

    #[inline]
    pub(crate) fn slot(self) -> usize {
        self as usize
    }

    pub fn opposite(self) -> Direction {
        match self {
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
            Direction::Down => Direction::Up,
            Direction::Up => Direction::Down,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Neighbors {
    pub left: Neighbor,
    pub right: Neighbor,
    pub down: Neighbor,
    pub up: Neighbor,
}

impl Neighbors {
    pub fn get(&self, d: Direction) -> Neighbor {
        match d {
            Direction::Left => self.left,
            Direction::Right => self.right,
            Direction::Down => self.down,
            Direction::Up => self.up,
        }
    }
}

/// The four neighbors `N^L, N^R, N^D, N^U` of a point of `perm`.
pub fn neighbors(perm: &Permutation, p: Point) -> Result<Neighbors> {
    if !perm.contains_point(p) {
        return Err(Error::InvalidArgument(format!("{p} is not a point of {perm}")));
    }
    let n = perm.len();
    let left = if p.x > 1 {
        Neighbor::Real(perm.point(p.x - 1))
    } else {
        Neighbor::Virtual(Sentinel::Low)
    };
    let right = if p.x < n {
        Neighbor::Real(perm.point(p.x + 1))
    } else {
        Neighbor::Virtual(Sentinel::High)
    };
    let down = if p.y > 1 {
        Neighbor::Real(Point::new(perm.position(p.y - 1), p.y - 1))
    } else {
        Neighbor::Virtual(Sentinel::Low)
    };
    let up = if p.y < n {
        Neighbor::Real(Point::new(perm.position(p.y + 1), p.y + 1))
    } else {
        Neighbor::Virtual(Sentinel::High)
    };
    Ok(Neighbors {
        left,
        right,
        down,
        up,
    })
}

/// Neighbor slots as 0-based point indices, `None` for sentinels.
type Slots = [Option<u32>; 4];

/// Incidence graph `G_σ`: every point joined to its index- and
/// value-neighbors. Vertices are 0-based positions.
#[derive(Debug, Clone)]
pub struct IncidenceGraph {
    slots: Vec<Slots>,
}

impl IncidenceGraph {
    pub fn new(perm: &Permutation) -> Self {
        let n = perm.len();
        let slots = (0..n)
            .map(|i| {
                let v = perm.val0(i);
                [
                    (i > 0).then(|| (i - 1) as u32),
                    (i + 1 < n).then(|| (i + 1) as u32),
                    (v > 0).then(|| perm.pos0(v - 1) as u32),
                    (v + 1 < n).then(|| perm.pos0(v + 1) as u32),
                ]
            })
            .collect();
        IncidenceGraph { slots }
    }

    pub fn vertex_count(&self) -> usize {
        self.slots.len()
    }

    /// Neighbor of the 0-based vertex `v` in direction `d`.
    pub fn neighbor(&self, v: usize, d: Direction) -> Option<usize> {
        self.slots[v][d.slot()].map(|u| u as usize)
    }

    /// Distinct real neighbors of `v`.
    pub fn adjacent(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        let s = &self.slots[v];
        (0..4).filter_map(move |i| {
            let u = s[i]?;
            // skip a slot already reported by an earlier slot
            if s[..i].contains(&Some(u)) {
                None
            } else {
                Some(u as usize)
            }
        })
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacent(v).count()
    }

    /// Edges of the index path `(i, i+1)`.
    pub fn index_path(&self) -> Vec<(usize, usize)> {
        (1..self.slots.len()).map(|i| (i - 1, i)).collect()
    }

    /// Edges of the value path, as position pairs of consecutive values.
    pub fn value_path(&self) -> Vec<(usize, usize)> {
        // walk up from the point holding the lowest value
        let Some(start) = (0..self.slots.len()).find(|&v| self.slots[v][2].is_none()) else {
            return Vec::new();
        };
        let mut out = Vec::with_capacity(self.slots.len().saturating_sub(1));
        let mut cur = start;
        while let Some(next) = self.slots[cur][3] {
            out.push((cur, next as usize));
            cur = next as usize;
        }
        out
    }

    /// Edge multiset: index path followed by value path. An edge present in
    /// both paths appears twice.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = self.index_path();
        e.extend(self.value_path());
        e
    }

    /// Edges without multiplicity, normalised to `(min, max)` and sorted.
    pub fn simple_edges(&self) -> Vec<(usize, usize)> {
        let mut e: Vec<_> = self
            .edges()
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        e.sort_unstable();
        e.dedup();
        e
    }

    /// Simple adjacency lists (0-based), ascending.
    pub fn adjacency(&self) -> Vec<Vec<usize>> {
        (0..self.slots.len())
            .map(|v| {
                let mut a: Vec<usize> = self.adjacent(v).collect();
                a.sort_unstable();
                a
            })
            .collect()
    }
}

pub fn incidence_graph(perm: &Permutation) -> IncidenceGraph {
    IncidenceGraph::new(perm)
}

/// A set of points of one permutation, keyed by 1-based index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSet {
    bits: FixedBitSet,
}

impl PointSet {
    pub fn new(n: usize) -> Self {
        PointSet {
            bits: FixedBitSet::with_capacity(n),
        }
    }

    pub fn full(n: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(n);
        bits.insert_range(..);
        PointSet { bits }
    }

    pub fn from_indices(n: usize, xs: impl IntoIterator<Item = usize>) -> Self {
        let mut s = PointSet::new(n);
        for x in xs {
            s.insert(x);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.bits.len()
    }

    pub fn insert(&mut self, x: usize) {
        self.bits.insert(x - 1);
    }

    pub fn remove(&mut self, x: usize) {
        self.bits.set(x - 1, false);
    }

    pub fn contains(&self, x: usize) -> bool {
        x >= 1 && self.bits.contains(x - 1)
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    /// Members as 1-based indices, ascending.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones().map(|i| i + 1)
    }

    pub(crate) fn contains0(&self, i: usize) -> bool {
        self.bits.contains(i)
    }

    pub(crate) fn insert0(&mut self, i: usize) {
        self.bits.insert(i);
    }
}

/// `bd(P)`: members of `subset` with at least one real neighbor outside it.
pub fn boundary(pattern: &Permutation, subset: &PointSet) -> PointSet {
    boundary_in(&IncidenceGraph::new(pattern), subset)
}

pub(crate) fn boundary_in(g: &IncidenceGraph, subset: &PointSet) -> PointSet {
    let mut out = PointSet::new(g.vertex_count());
    for v in subset.bits.ones() {
        if g.adjacent(v).any(|u| !subset.contains0(u)) {
            out.insert0(v);
        }
    }
    out
}
