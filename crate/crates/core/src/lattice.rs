//! Finite boxes in Z^d with free boundary.
//!
//! Vertices are indexed in lexicographic order of their coordinates (first
//! coordinate most significant). A positive edge joins `v` to `v + e_mu`;
//! positive edges are numbered in lexicographic order of `(start, mu)`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Oriented lattice edge: a positive edge id plus an orientation bit.
///
/// The derived order (id first, positive before negative) is the total order
/// used to canonicalize loops.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DirectedEdge {
    id: u32,
    negative: bool,
}

impl DirectedEdge {
    pub fn positive(id: usize) -> Self {
        DirectedEdge {
            id: id as u32,
            negative: false,
        }
    }

    pub fn negative(id: usize) -> Self {
        DirectedEdge {
            id: id as u32,
            negative: true,
        }
    }

    /// Index of the underlying positive edge.
    pub fn id(self) -> usize {
        self.id as usize
    }

    pub fn is_positive(self) -> bool {
        !self.negative
    }

    #[must_use]
    pub fn reverse(self) -> Self {
        DirectedEdge {
            id: self.id,
            negative: !self.negative,
        }
    }

    /// Dense index over both orientations: `2 * id + negative`.
    pub fn index(self) -> usize {
        2 * self.id as usize + self.negative as usize
    }
}

impl fmt::Display for DirectedEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "e{}^-1", self.id)
        } else {
            write!(f, "e{}", self.id)
        }
    }
}

/// Closed path of four edges around a unit square.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Plaquette {
    edges: [DirectedEdge; 4],
}

impl Plaquette {
    pub fn edges(&self) -> &[DirectedEdge; 4] {
        &self.edges
    }

    pub fn first(&self) -> DirectedEdge {
        self.edges[0]
    }

    /// The same square traversed backwards, starting from the reverse of the last edge.
    #[must_use]
    pub fn reverse(&self) -> Plaquette {
        let e = &self.edges;
        Plaquette {
            edges: [e[3].reverse(), e[2].reverse(), e[1].reverse(), e[0].reverse()],
        }
    }

    #[must_use]
    pub fn rotate(&self, k: usize) -> Plaquette {
        let mut edges = self.edges;
        edges.rotate_left(k % 4);
        Plaquette { edges }
    }

    fn edge_key(&self) -> [u32; 4] {
        let mut key = self.edges.map(|e| e.id);
        key.sort_unstable();
        key
    }
}

/// Serializable description of a box: dimension and inclusive corners.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoxSpec {
    pub d: usize,
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

#[derive(Clone, Debug)]
pub struct Lattice {
    d: usize,
    lo: Vec<i64>,
    hi: Vec<i64>,
    extent: Vec<usize>,
    strides: Vec<usize>,
    num_vertices: usize,
    edge_start: Vec<usize>,
    edge_dir: Vec<usize>,
    // vertex * d + mu -> positive edge id leaving that vertex in direction mu
    edge_at: Vec<Option<u32>>,
    plaquettes: Vec<Plaquette>,
    plaquette_lookup: HashMap<[u32; 4], usize>,
    through: Vec<Vec<Plaquette>>,
    containing: Vec<Vec<usize>>,
}

impl Lattice {
    /// Box with inclusive corners `lo` and `hi`.
    pub fn new(d: usize, lo: &[i64], hi: &[i64]) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidLattice(format!("dimension {d} < 2")));
        }
        if lo.len() != d || hi.len() != d {
            return Err(Error::InvalidLattice(format!(
                "corners must have {d} coordinates"
            )));
        }
        if let Some(mu) = (0..d).find(|&mu| hi[mu] <= lo[mu]) {
            return Err(Error::InvalidLattice(format!(
                "degenerate box: zero extent in direction {mu}"
            )));
        }
        let extent: Vec<usize> = (0..d).map(|mu| (hi[mu] - lo[mu] + 1) as usize).collect();
        let mut strides = vec![1usize; d];
        for mu in (0..d - 1).rev() {
            strides[mu] = strides[mu + 1] * extent[mu + 1];
        }
        let num_vertices = strides[0] * extent[0];

        let mut lat = Lattice {
            d,
            lo: lo.to_vec(),
            hi: hi.to_vec(),
            extent,
            strides,
            num_vertices,
            edge_start: Vec::new(),
            edge_dir: Vec::new(),
            edge_at: vec![None; num_vertices * d],
            plaquettes: Vec::new(),
            plaquette_lookup: HashMap::new(),
            through: Vec::new(),
            containing: Vec::new(),
        };

        for v in 0..num_vertices {
            for mu in 0..d {
                if lat.shift(v, mu, true).is_some() {
                    lat.edge_at[v * d + mu] = Some(lat.edge_start.len() as u32);
                    lat.edge_start.push(v);
                    lat.edge_dir.push(mu);
                }
            }
        }

        // Positive plaquettes: e1 runs from the smallest vertex to the second
        // smallest, which is v0 + e_nu for mu < nu.
        for v in 0..num_vertices {
            for mu in 0..d {
                for nu in mu + 1..d {
                    if let Some(p) = lat.square(v, nu, true, mu, true) {
                        lat.plaquette_lookup.insert(p.edge_key(), lat.plaquettes.len());
                        lat.plaquettes.push(p);
                    }
                }
            }
        }

        let num_edges = lat.edge_start.len();
        let mut through = vec![Vec::new(); 2 * num_edges];
        for id in 0..num_edges {
            for e in [DirectedEdge::positive(id), DirectedEdge::negative(id)] {
                let (mu, fwd) = (lat.edge_dir[id], e.is_positive());
                let start = lat.start(e);
                for nu in (0..d).filter(|&nu| nu != mu) {
                    for side in [true, false] {
                        if let Some(p) = lat.square(start, mu, fwd, nu, side) {
                            through[e.index()].push(p);
                        }
                    }
                }
            }
        }
        lat.through = through;

        let mut containing = vec![Vec::new(); num_edges];
        for (k, p) in lat.plaquettes.iter().enumerate() {
            for e in p.edges {
                containing[e.id()].push(k);
            }
        }
        lat.containing = containing;
        Ok(lat)
    }

    pub fn from_spec(spec: &BoxSpec) -> Result<Self> {
        Lattice::new(spec.d, &spec.lo, &spec.hi)
    }

    pub fn spec(&self) -> BoxSpec {
        BoxSpec {
            d: self.d,
            lo: self.lo.clone(),
            hi: self.hi.clone(),
        }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn lo(&self) -> &[i64] {
        &self.lo
    }

    pub fn hi(&self) -> &[i64] {
        &self.hi
    }

    pub fn num_vertices(&self) -> usize {
        self.num_vertices
    }

    pub fn num_edges(&self) -> usize {
        self.edge_start.len()
    }

    pub fn vertex_coords(&self, v: usize) -> Vec<i64> {
        (0..self.d)
            .map(|mu| self.lo[mu] + ((v / self.strides[mu]) % self.extent[mu]) as i64)
            .collect()
    }

    pub fn vertex_index(&self, coords: &[i64]) -> Option<usize> {
        if coords.len() != self.d {
            return None;
        }
        let mut v = 0;
        for mu in 0..self.d {
            if coords[mu] < self.lo[mu] || coords[mu] > self.hi[mu] {
                return None;
            }
            v += (coords[mu] - self.lo[mu]) as usize * self.strides[mu];
        }
        Some(v)
    }

    /// Neighbor of `v` one step along `+mu` (`forward`) or `-mu`.
    pub fn shift(&self, v: usize, mu: usize, forward: bool) -> Option<usize> {
        let x = self.lo[mu] + ((v / self.strides[mu]) % self.extent[mu]) as i64;
        if forward && x < self.hi[mu] {
            Some(v + self.strides[mu])
        } else if !forward && x > self.lo[mu] {
            Some(v - self.strides[mu])
        } else {
            None
        }
    }

    /// Directed edge from `v` one step along `+mu` or `-mu`.
    pub fn step(&self, v: usize, mu: usize, forward: bool) -> Option<DirectedEdge> {
        if forward {
            self.edge_at[v * self.d + mu].map(|id| DirectedEdge::positive(id as usize))
        } else {
            let w = self.shift(v, mu, false)?;
            self.edge_at[w * self.d + mu].map(|id| DirectedEdge::negative(id as usize))
        }
    }

    pub fn start(&self, e: DirectedEdge) -> usize {
        let s = self.edge_start[e.id()];
        if e.is_positive() {
            s
        } else {
            s + self.strides[self.edge_dir[e.id()]]
        }
    }

    pub fn end(&self, e: DirectedEdge) -> usize {
        self.start(e.reverse())
    }

    /// Lattice direction `mu` of the edge.
    pub fn direction(&self, e: DirectedEdge) -> usize {
        self.edge_dir[e.id()]
    }

    pub fn contains_edge(&self, e: DirectedEdge) -> bool {
        e.id() < self.num_edges()
    }

    pub fn positive_edges(&self) -> impl Iterator<Item = DirectedEdge> + '_ {
        (0..self.num_edges()).map(DirectedEdge::positive)
    }

    /// Positive plaquettes, in lexicographic order of their base vertex.
    pub fn plaquettes(&self) -> &[Plaquette] {
        &self.plaquettes
    }

    /// Plaquettes whose first edge is `e`. There are `2(d-1)` of them away from the boundary.
    pub fn plaquettes_through(&self, e: DirectedEdge) -> Result<&[Plaquette]> {
        self.through
            .get(e.index())
            .map(|v| v.as_slice())
            .ok_or_else(|| Error::EdgeNotInLattice(e.to_string()))
    }

    /// Indices into `plaquettes()` of the positive plaquettes that contain edge `id`.
    pub fn plaquettes_containing(&self, id: usize) -> &[usize] {
        &self.containing[id]
    }

    /// The positive plaquette representing `p` up to rotation and reversal,
    /// together with a flag telling whether a reversal was needed.
    pub fn canonical_plaquette(&self, p: &Plaquette) -> Result<(usize, bool)> {
        let k = *self
            .plaquette_lookup
            .get(&p.edge_key())
            .ok_or_else(|| Error::InvalidLattice(format!("{p:?} is not a lattice plaquette")))?;
        let canon = self.plaquettes[k];
        let is_rotation = |q: &Plaquette| (0..4).any(|r| canon.rotate(r) == *q);
        if is_rotation(p) {
            Ok((k, false))
        } else if is_rotation(&p.reverse()) {
            Ok((k, true))
        } else {
            Err(Error::InvalidLattice(format!("{p:?} is not a closed square")))
        }
    }

    pub fn describe(&self, e: DirectedEdge) -> String {
        format!(
            "{:?}->{:?}",
            self.vertex_coords(self.start(e)),
            self.vertex_coords(self.end(e))
        )
    }

    // Square starting at `v`: one step along (mu, fwd_mu), one along (nu, fwd_nu),
    // then back along both. None if it leaves the box.
    fn square(&self, v: usize, mu: usize, fwd_mu: bool, nu: usize, fwd_nu: bool) -> Option<Plaquette> {
        let e1 = self.step(v, mu, fwd_mu)?;
        let v1 = self.shift(v, mu, fwd_mu)?;
        let e2 = self.step(v1, nu, fwd_nu)?;
        let v2 = self.shift(v1, nu, fwd_nu)?;
        let e3 = self.step(v2, mu, !fwd_mu)?;
        let v3 = self.shift(v2, mu, !fwd_mu)?;
        let e4 = self.step(v3, nu, !fwd_nu)?;
        Some(Plaquette {
            edges: [e1, e2, e3, e4],
        })
    }
}
