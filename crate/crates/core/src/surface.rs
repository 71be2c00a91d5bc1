//! Triangulated closed surfaces carrying a scalar field, and the PL Morse
//! classification of their vertices.
//!
//! Vertices are totally ordered by `(value, index)`. That order decides
//! which neighbours are "lower" when values tie, so every field behaves like
//! a generic one for classification purposes, while levels themselves are
//! kept exactly as given.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::dsu::Dsu;
use crate::level::Level;

/// A triangulated surface with one scalar per vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceField {
    values: Vec<Level>,
    triangles: Vec<[usize; 3]>,
    coords: Option<Vec<[f64; 3]>>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SurfaceError {
    #[error("surface has no triangles")]
    Empty,
    #[error("triangle {triangle} references vertex {index}, but there are only {vertex_count} vertices")]
    IndexOutOfRange { triangle: usize, index: usize, vertex_count: usize },
    #[error("triangle {triangle} repeats a vertex")]
    RepeatedVertex { triangle: usize },
    #[error("triangles {first} and {second} span the same vertices")]
    DuplicateTriangle { first: usize, second: usize },
    #[error("coordinate count {got} does not match vertex count {expected}")]
    CoordinateCount { expected: usize, got: usize },
    #[error("edge ({0}, {1}) is on the boundary")]
    BoundaryEdge(usize, usize),
    #[error("edge ({0}, {1}) belongs to more than two triangles")]
    NonManifoldEdge(usize, usize),
    #[error("edge ({0}, {1}) is glued with inconsistent orientations")]
    NonOrientable(usize, usize),
    #[error("the link of vertex {0} is not a single cycle")]
    NonManifoldVertex(usize),
    #[error("vertex {0} belongs to no triangle")]
    IsolatedVertex(usize),
    #[error("surface is disconnected")]
    Disconnected,
}

impl SurfaceField {
    /// Builds a field, checking indices and rejecting degenerate or
    /// duplicated triangles. Topology is checked by [`ClosedSurface::new`].
    pub fn new(values: Vec<Level>, triangles: Vec<[usize; 3]>) -> Result<Self, SurfaceError> {
        if triangles.is_empty() {
            return Err(SurfaceError::Empty);
        }
        let n = values.len();
        let mut seen: BTreeMap<[usize; 3], usize> = BTreeMap::new();
        for (t, tri) in triangles.iter().enumerate() {
            for &i in tri {
                if i >= n {
                    return Err(SurfaceError::IndexOutOfRange { triangle: t, index: i, vertex_count: n });
                }
            }
            if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
                return Err(SurfaceError::RepeatedVertex { triangle: t });
            }
            let mut key = *tri;
            key.sort_unstable();
            if let Some(&first) = seen.get(&key) {
                return Err(SurfaceError::DuplicateTriangle { first, second: t });
            }
            seen.insert(key, t);
        }
        Ok(SurfaceField { values, triangles, coords: None })
    }

    pub fn with_coords(mut self, coords: Vec<[f64; 3]>) -> Result<Self, SurfaceError> {
        if coords.len() != self.values.len() {
            return Err(SurfaceError::CoordinateCount { expected: self.values.len(), got: coords.len() });
        }
        self.coords = Some(coords);
        Ok(self)
    }

    pub fn vertex_count(&self) -> usize {
        self.values.len()
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn values(&self) -> &[Level] {
        &self.values
    }

    pub fn value(&self, v: usize) -> &Level {
        &self.values[v]
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn coords(&self) -> Option<&[[f64; 3]]> {
        self.coords.as_deref()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum VertexKind {
    Minimum,
    Regular,
    Saddle,
    Maximum,
}

/// PL type of a vertex. `multiplicity` is `k >= 1` for a `k`-fold saddle
/// and 0 otherwise.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexClass {
    pub kind: VertexKind,
    pub multiplicity: usize,
}

impl VertexClass {
    pub const MINIMUM: VertexClass = VertexClass { kind: VertexKind::Minimum, multiplicity: 0 };
    pub const MAXIMUM: VertexClass = VertexClass { kind: VertexKind::Maximum, multiplicity: 0 };
    pub const REGULAR: VertexClass = VertexClass { kind: VertexKind::Regular, multiplicity: 0 };

    pub fn saddle(multiplicity: usize) -> Self {
        VertexClass { kind: VertexKind::Saddle, multiplicity }
    }

    pub fn is_critical(&self) -> bool {
        self.kind != VertexKind::Regular
    }

    /// +1 for extrema, `-k` for a `k`-fold saddle, 0 for regular vertices.
    pub fn index(&self) -> i64 {
        match self.kind {
            VertexKind::Minimum | VertexKind::Maximum => 1,
            VertexKind::Regular => 0,
            VertexKind::Saddle => -(self.multiplicity as i64),
        }
    }
}

impl core::fmt::Display for VertexClass {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self.kind {
            VertexKind::Minimum => f.write_str("min"),
            VertexKind::Maximum => f.write_str("max"),
            VertexKind::Regular => f.write_str("regular"),
            VertexKind::Saddle if self.multiplicity == 1 => f.write_str("saddle"),
            VertexKind::Saddle => write!(f, "saddle{}", self.multiplicity),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceSummary {
    pub chi: i64,
    pub genus: u64,
}

/// A validated closed, connected, coherently oriented triangulated surface
/// together with the adjacency the algorithms need.
#[derive(Debug, Clone)]
pub struct ClosedSurface {
    field: SurfaceField,
    edges: Vec<[usize; 2]>,
    edge_index: BTreeMap<(usize, usize), usize>,
    edge_triangles: Vec<[usize; 2]>,
    triangle_edges: Vec<[usize; 3]>,
    link: Vec<Vec<usize>>,
    star: Vec<Vec<usize>>,
    rank: Vec<usize>,
    classes: Vec<VertexClass>,
}

impl ClosedSurface {
    pub fn new(field: SurfaceField) -> Result<Self, SurfaceError> {
        let n = field.vertex_count();
        let tris = field.triangles();

        // Directed edges: each undirected edge must occur once in each direction.
        let mut directed: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                let (a, b) = (tri[k], tri[(k + 1) % 3]);
                if directed.insert((a, b), t).is_some() {
                    let (x, y) = (a.min(b), a.max(b));
                    let uses = tris.iter().filter(|tr| tr.contains(&x) && tr.contains(&y)).count();
                    return Err(if uses > 2 {
                        SurfaceError::NonManifoldEdge(x, y)
                    } else {
                        SurfaceError::NonOrientable(x, y)
                    });
                }
            }
        }
        let mut edges = Vec::new();
        let mut edge_index = BTreeMap::new();
        let mut edge_triangles = Vec::new();
        for (&(a, b), &t) in &directed {
            if a < b {
                let Some(&u) = directed.get(&(b, a)) else {
                    return Err(SurfaceError::BoundaryEdge(a, b));
                };
                edge_index.insert((a, b), edges.len());
                edges.push([a, b]);
                edge_triangles.push([t, u]);
            } else if !directed.contains_key(&(b, a)) {
                return Err(SurfaceError::BoundaryEdge(b, a));
            }
        }
        let triangle_edges = tris
            .iter()
            .map(|tri| {
                let mut out = [0; 3];
                for k in 0..3 {
                    let (a, b) = (tri[k], tri[(k + 1) % 3]);
                    out[k] = edge_index[&(a.min(b), a.max(b))];
                }
                out
            })
            .collect();

        // Vertex links in counter-clockwise order.
        let mut fans: Vec<Vec<(usize, usize, usize)>> = alloc::vec![Vec::new(); n];
        for (t, tri) in tris.iter().enumerate() {
            for k in 0..3 {
                fans[tri[k]].push((tri[(k + 1) % 3], tri[(k + 2) % 3], t));
            }
        }
        let mut link = Vec::with_capacity(n);
        let mut star = Vec::with_capacity(n);
        for (v, fan) in fans.iter().enumerate() {
            if fan.is_empty() {
                return Err(SurfaceError::IsolatedVertex(v));
            }
            let next: BTreeMap<usize, (usize, usize)> = fan.iter().map(|&(x, y, t)| (x, (y, t))).collect();
            if next.len() != fan.len() {
                return Err(SurfaceError::NonManifoldVertex(v));
            }
            let start = fan.iter().min_by_key(|e| e.2).map(|e| e.0).unwrap_or(0);
            let mut ring = Vec::with_capacity(fan.len());
            let mut ring_tris = Vec::with_capacity(fan.len());
            let mut x = start;
            loop {
                let Some(&(y, t)) = next.get(&x) else {
                    return Err(SurfaceError::NonManifoldVertex(v));
                };
                ring.push(x);
                ring_tris.push(t);
                x = y;
                if x == start || ring.len() > fan.len() {
                    break;
                }
            }
            if ring.len() != fan.len() || x != start {
                return Err(SurfaceError::NonManifoldVertex(v));
            }
            link.push(ring);
            star.push(ring_tris);
        }

        let mut dsu = Dsu::new(n);
        for e in &edges {
            dsu.union(e[0], e[1]);
        }
        let root = dsu.find(0);
        if (1..n).any(|v| dsu.find(v) != root) {
            return Err(SurfaceError::Disconnected);
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| field.values[a].cmp(&field.values[b]).then(a.cmp(&b)));
        let mut rank = alloc::vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }

        let mut surface = ClosedSurface {
            field,
            edges,
            edge_index,
            edge_triangles,
            triangle_edges,
            link,
            star,
            rank,
            classes: Vec::new(),
        };
        surface.classes = (0..n).map(|v| surface.compute_class(v)).collect();
        Ok(surface)
    }

    pub fn field(&self) -> &SurfaceField {
        &self.field
    }

    pub fn value(&self, v: usize) -> &Level {
        self.field.value(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.field.vertex_count()
    }

    pub fn triangle_count(&self) -> usize {
        self.field.triangle_count()
    }

    pub fn triangle(&self, t: usize) -> [usize; 3] {
        self.field.triangles[t]
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Edge id of the unordered pair `{a, b}`.
    pub fn edge_between(&self, a: usize, b: usize) -> Option<usize> {
        self.edge_index.get(&(a.min(b), a.max(b))).copied()
    }

    /// `[t, u]`: `t` traverses the edge as `lo -> hi`, `u` as `hi -> lo`.
    pub fn edge_triangles(&self, e: usize) -> [usize; 2] {
        self.edge_triangles[e]
    }

    /// Edge ids of `(v0 v1, v1 v2, v2 v0)`.
    pub fn triangle_edges(&self, t: usize) -> [usize; 3] {
        self.triangle_edges[t]
    }

    /// Neighbours of `v` in counter-clockwise order.
    pub fn link(&self, v: usize) -> &[usize] {
        &self.link[v]
    }

    /// `star(v)[i]` is the triangle `(v, link[i], link[i+1])`.
    pub fn star(&self, v: usize) -> &[usize] {
        &self.star[v]
    }

    /// Position of `v` in the `(value, index)` order.
    pub fn rank(&self, v: usize) -> usize {
        self.rank[v]
    }

    pub fn class(&self, v: usize) -> VertexClass {
        self.classes[v]
    }

    pub fn classes(&self) -> &[VertexClass] {
        &self.classes
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.triangle_count() as i64
    }

    pub fn summary(&self) -> SurfaceSummary {
        let chi = self.euler_characteristic();
        SurfaceSummary { chi, genus: ((2 - chi) / 2) as u64 }
    }

    /// Strict total order used for tie-breaking.
    pub fn cmp_vertices(&self, a: usize, b: usize) -> Ordering {
        self.rank[a].cmp(&self.rank[b])
    }

    fn compute_class(&self, v: usize) -> VertexClass {
        let ring = &self.link[v];
        let lower: Vec<bool> = ring.iter().map(|&u| self.rank[u] < self.rank[v]).collect();
        let runs = |want: bool| -> usize {
            let d = lower.len();
            if lower.iter().all(|&x| x == want) {
                return 1;
            }
            (0..d).filter(|&i| lower[i] == want && lower[(i + d - 1) % d] != want).count()
        };
        let has_lower = lower.iter().any(|&x| x);
        let has_upper = lower.iter().any(|&x| !x);
        if !has_lower {
            VertexClass::MINIMUM
        } else if !has_upper {
            VertexClass::MAXIMUM
        } else {
            let c = runs(true);
            debug_assert_eq!(c, runs(false));
            if c == 1 {
                VertexClass::REGULAR
            } else {
                VertexClass::saddle(c - 1)
            }
        }
    }
}

/// Checks that `s` is a closed, connected, coherently oriented surface and
/// returns its Euler characteristic and genus.
pub fn validate_closed_orientable(s: &SurfaceField) -> Result<SurfaceSummary, SurfaceError> {
    ClosedSurface::new(s.clone()).map(|c| c.summary())
}

/// PL type of vertex `v` from the lower and upper link components.
pub fn classify_vertex(s: &ClosedSurface, v: usize) -> VertexClass {
    s.class(v)
}

/// Sum of PL indices over all vertices. Equals the Euler characteristic.
pub fn total_index(s: &ClosedSurface) -> i64 {
    s.classes().iter().map(VertexClass::index).sum()
}
