//! Kronrod-Reeb graph of a PL field.
//!
//! Nodes are the connected components of critical level sets that contain a
//! critical vertex. Edges are maximal families of regular contours: the
//! connected components of the open bands between consecutive critical
//! values, chained through regular components that happen to sit at a
//! critical value.
//!
//! The construction is a band decomposition: one union-find over triangles
//! per critical value and one per open band. The graph keeps, per critical
//! value and per band, the Reeb element carrying every triangle's piece,
//! which is all the quotient map `p_f` downstream code needs.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use crate::dsu::Dsu;
use crate::level::Level;
use crate::surface::{ClosedSurface, VertexClass};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ReebElement {
    Node(usize),
    Edge(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReebNode {
    pub level: Level,
    /// Index into [`ReebGraph::critical_values`].
    pub level_index: usize,
    /// Critical vertices lying on the component, ascending.
    pub vertices: Vec<usize>,
    /// Their classes, sorted.
    pub kinds: Vec<VertexClass>,
    pub is_critical: bool,
    /// Triangles meeting the component.
    pub support: Vec<usize>,
    /// Triangles whose barycenter lies on the component.
    pub owned: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReebEdge {
    pub lower: usize,
    pub upper: usize,
    /// Bands `(c_t, c_{t+1})` the edge passes through, ascending.
    pub bands: Vec<usize>,
    /// Triangles whose barycenter lies on the edge's preimage.
    pub owned: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct ReebGraph {
    nodes: Vec<ReebNode>,
    edges: Vec<ReebEdge>,
    critical_values: Vec<Level>,
    level_map: Vec<Vec<Option<ReebElement>>>,
    band_map: Vec<Vec<Option<usize>>>,
    triangle_owner: Vec<ReebElement>,
    vertex_owner: Vec<ReebElement>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReebError {
    #[error("field is constant; its Kronrod-Reeb graph is a single point")]
    ConstantField,
    #[error("Reeb construction inconsistency: {0}")]
    Inconsistent(&'static str),
}

impl ReebGraph {
    pub fn nodes(&self) -> &[ReebNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[ReebEdge] {
        &self.edges
    }

    pub fn node(&self, id: usize) -> &ReebNode {
        &self.nodes[id]
    }

    pub fn edge(&self, id: usize) -> &ReebEdge {
        &self.edges[id]
    }

    /// Sorted distinct values of critical vertices.
    pub fn critical_values(&self) -> &[Level] {
        &self.critical_values
    }

    /// Reeb element containing the part of triangle `t` at critical value
    /// `level_index`, if the triangle meets that level.
    pub fn level_element(&self, level_index: usize, t: usize) -> Option<ReebElement> {
        self.level_map[level_index][t]
    }

    /// Edge containing the part of triangle `t` inside the open band above
    /// critical value `band`.
    pub fn band_edge(&self, band: usize, t: usize) -> Option<usize> {
        self.band_map.get(band).and_then(|b| b[t])
    }

    /// Element containing the barycenter of triangle `t`.
    pub fn triangle_owner(&self, t: usize) -> ReebElement {
        self.triangle_owner[t]
    }

    /// Element containing mesh vertex `v`.
    pub fn vertex_owner(&self, v: usize) -> ReebElement {
        self.vertex_owner[v]
    }

    /// Edge ids incident to `node`, ascending.
    pub fn incident_edges(&self, node: usize) -> Vec<usize> {
        (0..self.edges.len()).filter(|&e| self.edges[e].lower == node || self.edges[e].upper == node).collect()
    }

    pub fn degree(&self, node: usize) -> usize {
        self.edges.iter().map(|e| (e.lower == node) as usize + (e.upper == node) as usize).sum()
    }

    /// First Betti number `E - N + 1` of the (connected) graph.
    pub fn betti1(&self) -> usize {
        self.edges.len() + 1 - self.nodes.len()
    }

    /// Endpoint of `edge` opposite to `node`.
    pub fn opposite(&self, edge: usize, node: usize) -> usize {
        let e = &self.edges[edge];
        if e.lower == node {
            e.upper
        } else {
            e.lower
        }
    }
}

/// True iff the graph has no cycle. Connectivity is a construction invariant.
pub fn is_tree(g: &ReebGraph) -> bool {
    g.edges.len() + 1 == g.nodes.len()
}

struct Ranges {
    /// position of each vertex value among the sorted distinct values
    vpos: Vec<usize>,
    tmin: Vec<usize>,
    tmax: Vec<usize>,
    emin: Vec<usize>,
    emax: Vec<usize>,
}

impl Ranges {
    fn new(s: &ClosedSurface) -> (Self, Vec<Level>) {
        let mut distinct: Vec<Level> = s.field().values().to_vec();
        distinct.sort();
        distinct.dedup();
        let vpos: Vec<usize> = s.field().values().iter().map(|v| distinct.binary_search(v).unwrap()).collect();
        let (mut tmin, mut tmax) = (Vec::new(), Vec::new());
        for t in 0..s.triangle_count() {
            let p = s.triangle(t).map(|v| vpos[v]);
            tmin.push(*p.iter().min().unwrap());
            tmax.push(*p.iter().max().unwrap());
        }
        let (mut emin, mut emax) = (Vec::new(), Vec::new());
        for e in s.edges() {
            emin.push(vpos[e[0]].min(vpos[e[1]]));
            emax.push(vpos[e[0]].max(vpos[e[1]]));
        }
        (Ranges { vpos, tmin, tmax, emin, emax }, distinct)
    }
}

/// Connected components of the level set at value position `p`, as labels
/// on the triangles meeting it.
fn level_components(s: &ClosedSurface, r: &Ranges, p: usize) -> (Vec<Option<usize>>, usize) {
    let nt = s.triangle_count();
    let mut dsu = Dsu::new(nt);
    for e in 0..s.edge_count() {
        if r.emin[e] <= p && p <= r.emax[e] {
            let [a, b] = s.edge_triangles(e);
            dsu.union(a, b);
        }
    }
    for v in 0..s.vertex_count() {
        if r.vpos[v] == p {
            let star = s.star(v);
            for w in star.windows(2) {
                dsu.union(w[0], w[1]);
            }
        }
    }
    dsu.labels((0..nt).filter(|&t| r.tmin[t] <= p && p <= r.tmax[t]), nt)
}

/// Connected components of the open band between value positions `lo < hi`.
fn band_components(s: &ClosedSurface, r: &Ranges, lo: usize, hi: usize) -> (Vec<Option<usize>>, usize) {
    let nt = s.triangle_count();
    let mut dsu = Dsu::new(nt);
    for e in 0..s.edge_count() {
        if r.emin[e] < hi && r.emax[e] > lo {
            let [a, b] = s.edge_triangles(e);
            dsu.union(a, b);
        }
    }
    dsu.labels((0..nt).filter(|&t| r.tmin[t] < hi && r.tmax[t] > lo), nt)
}

/// Builds the Kronrod-Reeb graph of the field on `s`.
pub fn compute_reeb(s: &ClosedSurface) -> Result<ReebGraph, ReebError> {
    let (ranges, distinct) = Ranges::new(s);
    if distinct.len() < 2 {
        return Err(ReebError::ConstantField);
    }
    let nt = s.triangle_count();

    // critical values as positions in `distinct`
    let crit_pos: Vec<usize> = {
        let set: BTreeSet<usize> =
            (0..s.vertex_count()).filter(|&v| s.class(v).is_critical()).map(|v| ranges.vpos[v]).collect();
        set.into_iter().collect()
    };
    let ns = crit_pos.len();
    if ns < 2 || crit_pos[0] != 0 || crit_pos[ns - 1] != distinct.len() - 1 {
        return Err(ReebError::Inconsistent("global extrema must be critical"));
    }

    let levels: Vec<(Vec<Option<usize>>, usize)> = crit_pos.iter().map(|&p| level_components(s, &ranges, p)).collect();
    let bands: Vec<(Vec<Option<usize>>, usize)> =
        crit_pos.windows(2).map(|w| band_components(s, &ranges, w[0], w[1])).collect();

    // global element ids: all level components, then all band components
    let mut level_offset = Vec::with_capacity(ns);
    let mut total = 0;
    for l in &levels {
        level_offset.push(total);
        total += l.1;
    }
    let mut band_offset = Vec::with_capacity(ns - 1);
    for b in &bands {
        band_offset.push(total);
        total += b.1;
    }
    let n_level = band_offset.first().copied().unwrap_or(total);

    // which level components carry a critical vertex
    let mut critical_vertices: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in 0..s.vertex_count() {
        if !s.class(v).is_critical() {
            continue;
        }
        let t = crit_pos.binary_search(&ranges.vpos[v]).unwrap();
        let comp = levels[t].0[s.star(v)[0]].ok_or(ReebError::Inconsistent("critical vertex off its level"))?;
        critical_vertices.entry(level_offset[t] + comp).or_default().push(v);
    }

    // band -> level adjacency at both ends
    let mut band_lower = alloc::vec![usize::MAX; total];
    let mut band_upper = alloc::vec![usize::MAX; total];
    let mut level_adjacent: Vec<Vec<usize>> = alloc::vec![Vec::new(); n_level];
    for (t, (labels, _)) in bands.iter().enumerate() {
        for tri in 0..nt {
            let Some(b) = labels[tri] else { continue };
            let gb = band_offset[t] + b;
            if ranges.tmin[tri] <= crit_pos[t] {
                let l = level_offset[t] + levels[t].0[tri].unwrap();
                if band_lower[gb] == usize::MAX {
                    band_lower[gb] = l;
                    level_adjacent[l].push(gb);
                } else if band_lower[gb] != l {
                    return Err(ReebError::Inconsistent("band attaches to two lower components"));
                }
            }
            if ranges.tmax[tri] >= crit_pos[t + 1] {
                let l = level_offset[t + 1] + levels[t + 1].0[tri].unwrap();
                if band_upper[gb] == usize::MAX {
                    band_upper[gb] = l;
                    level_adjacent[l].push(gb);
                } else if band_upper[gb] != l {
                    return Err(ReebError::Inconsistent("band attaches to two upper components"));
                }
            }
        }
    }
    for gb in n_level..total {
        if band_lower[gb] == usize::MAX || band_upper[gb] == usize::MAX {
            return Err(ReebError::Inconsistent("band without an end"));
        }
    }

    // chain bands through regular level components
    let mut merge = Dsu::new(total);
    for l in 0..n_level {
        if critical_vertices.contains_key(&l) {
            continue;
        }
        if level_adjacent[l].len() != 2 {
            return Err(ReebError::Inconsistent("regular contour is not between exactly two bands"));
        }
        merge.union(l, level_adjacent[l][0]);
        merge.union(l, level_adjacent[l][1]);
    }

    // nodes, ordered by level then by lowest supporting triangle
    let mut node_of_level: BTreeMap<usize, usize> = BTreeMap::new();
    let mut nodes = Vec::new();
    for (t, (labels, _)) in levels.iter().enumerate() {
        let mut support: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for tri in 0..nt {
            if let Some(c) = labels[tri] {
                support.entry(level_offset[t] + c).or_default().push(tri);
            }
        }
        let mut comps: Vec<(usize, Vec<usize>)> =
            support.into_iter().filter(|(g, _)| critical_vertices.contains_key(g)).collect();
        comps.sort_by_key(|(_, tris)| tris[0]);
        for (g, tris) in comps {
            let mut vertices = critical_vertices[&g].clone();
            vertices.sort_unstable();
            let mut kinds: Vec<VertexClass> = vertices.iter().map(|&v| s.class(v)).collect();
            kinds.sort();
            node_of_level.insert(g, nodes.len());
            nodes.push(ReebNode {
                level: distinct[crit_pos[t]].clone(),
                level_index: t,
                vertices,
                kinds,
                is_critical: true,
                support: tris,
                owned: Vec::new(),
            });
        }
    }

    // edges: merged classes of bands
    let mut class_ends: BTreeMap<usize, (Option<usize>, Option<usize>, usize)> = BTreeMap::new();
    for gb in n_level..total {
        let root = merge.find(gb);
        let entry = class_ends.entry(root).or_insert((None, None, usize::MAX));
        entry.2 = entry.2.min(gb);
        if let Some(&n) = node_of_level.get(&band_lower[gb]) {
            if entry.0.replace(n).is_some() {
                return Err(ReebError::Inconsistent("edge with two lower ends"));
            }
        }
        if let Some(&n) = node_of_level.get(&band_upper[gb]) {
            if entry.1.replace(n).is_some() {
                return Err(ReebError::Inconsistent("edge with two upper ends"));
            }
        }
    }
    let mut edge_list: Vec<(usize, usize, usize, usize)> = Vec::new();
    for (&root, &(lo, hi, first)) in &class_ends {
        let (Some(lo), Some(hi)) = (lo, hi) else {
            return Err(ReebError::Inconsistent("edge missing an endpoint"));
        };
        edge_list.push((lo, hi, first, root));
    }
    edge_list.sort();
    let mut edge_of_root: BTreeMap<usize, usize> = BTreeMap::new();
    let mut edges = Vec::with_capacity(edge_list.len());
    for (id, &(lower, upper, _, root)) in edge_list.iter().enumerate() {
        edge_of_root.insert(root, id);
        let bands_used: Vec<usize> = (0..ns - 1)
            .filter(|&t| (0..bands[t].1).any(|b| merge.find(band_offset[t] + b) == root))
            .collect();
        edges.push(ReebEdge { lower, upper, bands: bands_used, owned: Vec::new() });
    }

    let element_of = |g: usize, merge: &mut Dsu| -> ReebElement {
        match node_of_level.get(&g) {
            Some(&n) => ReebElement::Node(n),
            None => ReebElement::Edge(edge_of_root[&merge.find(g)]),
        }
    };

    let mut level_map = Vec::with_capacity(ns);
    for (t, (labels, _)) in levels.iter().enumerate() {
        level_map.push(labels.iter().map(|c| c.map(|c| element_of(level_offset[t] + c, &mut merge))).collect::<Vec<_>>());
    }
    let mut band_map = Vec::with_capacity(ns - 1);
    for (t, (labels, _)) in bands.iter().enumerate() {
        band_map.push(labels.iter().map(|c| c.map(|c| edge_of_root[&merge.find(band_offset[t] + c)])).collect::<Vec<_>>());
    }

    let crit_levels: Vec<Level> = crit_pos.iter().map(|&p| distinct[p].clone()).collect();
    let locate = |value: &Level| -> Result<usize, usize> { crit_levels.binary_search(value) };

    let mut triangle_owner = Vec::with_capacity(nt);
    for tri in 0..nt {
        let [a, b, c] = s.triangle(tri);
        let m = Level::mean3(s.value(a), s.value(b), s.value(c));
        let owner = match locate(&m) {
            Ok(t) => level_map[t][tri],
            Err(i) if i > 0 && i < ns => band_map[i - 1][tri].map(ReebElement::Edge),
            Err(_) => None,
        }
        .ok_or(ReebError::Inconsistent("triangle barycenter outside every element"))?;
        triangle_owner.push(owner);
    }
    let mut vertex_owner = Vec::with_capacity(s.vertex_count());
    for v in 0..s.vertex_count() {
        let tri = s.star(v)[0];
        let owner = match locate(s.value(v)) {
            Ok(t) => level_map[t][tri],
            Err(i) if i > 0 && i < ns => band_map[i - 1][tri].map(ReebElement::Edge),
            Err(_) => None,
        }
        .ok_or(ReebError::Inconsistent("vertex outside every element"))?;
        vertex_owner.push(owner);
    }

    for (tri, owner) in triangle_owner.iter().enumerate() {
        match *owner {
            ReebElement::Node(n) => nodes[n].owned.push(tri),
            ReebElement::Edge(e) => edges[e].owned.push(tri),
        }
    }

    let graph = ReebGraph {
        nodes,
        edges,
        critical_values: crit_levels,
        level_map,
        band_map,
        triangle_owner,
        vertex_owner,
    };

    let mut conn = Dsu::new(graph.nodes.len());
    for e in &graph.edges {
        if graph.nodes[e.lower].level >= graph.nodes[e.upper].level {
            return Err(ReebError::Inconsistent("edge is not monotone"));
        }
        conn.union(e.lower, e.upper);
    }
    let root = conn.find(0);
    if (0..graph.nodes.len()).any(|n| conn.find(n) != root) {
        return Err(ReebError::Inconsistent("graph is disconnected"));
    }
    Ok(graph)
}

/// Euler characteristic of a node's level component, counted directly from
/// the pieces of the level set inside open simplices.
pub fn level_component_euler(s: &ClosedSurface, g: &ReebGraph, node: usize) -> i64 {
    let n = &g.nodes[node];
    let t = n.level_index;
    let c = &n.level;
    let here = ReebElement::Node(node);
    let in_comp = |tri: usize| g.level_map[t][tri] == Some(here);
    let mut chi = 0i64;
    for v in 0..s.vertex_count() {
        if s.value(v) == c && in_comp(s.star(v)[0]) {
            chi += 1;
        }
    }
    for (e, [a, b]) in s.edges().iter().enumerate() {
        let (va, vb) = (s.value(*a), s.value(*b));
        if !in_comp(s.edge_triangles(e)[0]) {
            continue;
        }
        if va == c && vb == c {
            chi -= 1;
        } else if (va < c && c < vb) || (vb < c && c < va) {
            chi += 1;
        }
    }
    for &tri in &n.support {
        let vals = s.triangle(tri).map(|v| s.value(v));
        let lo = vals.iter().min().unwrap();
        let hi = vals.iter().max().unwrap();
        if *lo == c && *hi == c {
            chi += 1;
        } else if *lo < c && c < *hi {
            chi -= 1;
        }
    }
    chi
}
