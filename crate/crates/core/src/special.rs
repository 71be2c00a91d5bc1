//! The special vertex of a Kronrod-Reeb tree on the torus and the cell
//! partition of the torus cut out by its level component `V`.
//!
//! `V` is traced directly on the mesh. Its points are the mesh vertices at
//! the critical value plus the strict edge crossings, its segments are the
//! pieces of the level set inside single triangles or along level edges.
//! Every segment is oriented so that the side above the level lies on its
//! left. Maximal chains of segments between critical vertices become the
//! 1-cells, and the complement components, one per Reeb edge at `v`, become
//! the 2-cells.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::homology::{cellular_homology, ChainComplex, IntMatrix};
use crate::level::Level;
use crate::reeb::{is_tree, ReebElement, ReebGraph};
use crate::surface::{ClosedSurface, VertexClass};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SpecialVertexError {
    #[error("surface has Euler characteristic {0}, expected a torus")]
    NotATorus(i64),
    #[error("Kronrod-Reeb graph has first Betti number {0}; expected a tree")]
    NotATree(usize),
    #[error("no node has only disk branches (branch Euler characteristics per node: {0:?})")]
    NoSpecialVertex(Vec<Vec<i64>>),
    #[error("nodes {0:?} all have only disk branches")]
    Multiple(Vec<usize>),
    #[error("branch Euler characteristic disagrees: cell count {cells}, index sum {indices}")]
    EulerMismatch { cells: i64, indices: i64 },
    #[error("edge {edge} is not incident to node {node}")]
    NotIncident { node: usize, edge: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PartitionError {
    #[error("degenerate level set: {0}")]
    Degenerate(String),
    #[error("node {0} carries no critical vertex")]
    NoCriticalVertex(usize),
    #[error("complement component {cell} has Euler characteristic {chi}, not an open disk")]
    NotADisk { cell: usize, chi: i64 },
    #[error(transparent)]
    Euler(#[from] SpecialVertexError),
    #[error("cell partition inconsistency: {0}")]
    Inconsistent(&'static str),
}

/// A point of the traced level component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LevelPoint {
    /// A mesh vertex lying on the level.
    Vertex(usize),
    /// The interior point of a mesh edge whose ends lie strictly on both
    /// sides of the level.
    Crossing(usize),
}

/// What carries a segment of the level component.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Carrier {
    Triangle(usize),
    /// A mesh edge lying on the level.
    Edge(usize),
}

/// A segment of `V`, oriented with the upper side on its left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Segment {
    pub from: usize,
    pub to: usize,
    pub carrier: Carrier,
    /// Triangle on the upper side.
    pub upper_triangle: usize,
    /// Triangle on the lower side.
    pub lower_triangle: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ZeroCell {
    pub vertex: usize,
    pub class: VertexClass,
}

/// A maximal arc of `V` between critical vertices, oriented with the
/// 2-cell above the level on its left.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OneCell {
    pub tail: usize,
    pub head: usize,
    /// 2-cell on the upper side.
    pub upper: usize,
    /// 2-cell on the lower side.
    pub lower: usize,
    /// Segment ids from tail to head.
    pub segments: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoCell {
    /// Reeb edge at `v` whose branch this cell is.
    pub reeb_edge: usize,
    /// Whether the branch lies above the level of `v`.
    pub above: bool,
    /// Triangles meeting the open cell.
    pub support: Vec<usize>,
    /// Boundary walk with the cell on the left: `(one_cell, +1 | -1)`.
    pub boundary: Vec<(usize, i8)>,
    /// Canonical description of the branch: levels and vertex classes of
    /// the rooted subtree, and the side it lies on.
    pub label: String,
    pub euler: i64,
}

/// CW structure of the torus given by `V`.
///
/// Darts are numbered `2 * one_cell` (leaving the tail) and
/// `2 * one_cell + 1` (leaving the head).
#[derive(Debug, Clone)]
pub struct CellPartition {
    node: usize,
    level: Level,
    points: Vec<LevelPoint>,
    segments: Vec<Segment>,
    zero_cells: Vec<ZeroCell>,
    one_cells: Vec<OneCell>,
    two_cells: Vec<TwoCell>,
    rotation: Vec<Vec<usize>>,
    rotation_pos: Vec<(usize, usize)>,
    face_of_dart: Vec<usize>,
    complex: ChainComplex,
}

impl CellPartition {
    pub fn node(&self) -> usize {
        self.node
    }

    pub fn level(&self) -> &Level {
        &self.level
    }

    pub fn points(&self) -> &[LevelPoint] {
        &self.points
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn zero_cells(&self) -> &[ZeroCell] {
        &self.zero_cells
    }

    pub fn one_cells(&self) -> &[OneCell] {
        &self.one_cells
    }

    pub fn two_cells(&self) -> &[TwoCell] {
        &self.two_cells
    }

    pub fn counts(&self) -> [usize; 3] {
        [self.zero_cells.len(), self.one_cells.len(), self.two_cells.len()]
    }

    pub fn chain_complex(&self) -> &ChainComplex {
        &self.complex
    }

    pub fn dart_count(&self) -> usize {
        2 * self.one_cells.len()
    }

    /// 0-cell the dart leaves from.
    pub fn dart_origin(&self, d: usize) -> usize {
        let a = &self.one_cells[d / 2];
        if d.is_multiple_of(2) {
            a.tail
        } else {
            a.head
        }
    }

    /// The same 1-cell traversed the other way.
    pub fn alpha(&self, d: usize) -> usize {
        d ^ 1
    }

    /// Next dart counter-clockwise around the origin.
    pub fn sigma(&self, d: usize) -> usize {
        let (z, i) = self.rotation_pos[d];
        let r = &self.rotation[z];
        r[(i + 1) % r.len()]
    }

    pub fn sigma_inv(&self, d: usize) -> usize {
        let (z, i) = self.rotation_pos[d];
        let r = &self.rotation[z];
        r[(i + r.len() - 1) % r.len()]
    }

    /// Darts leaving 0-cell `z`, counter-clockwise.
    pub fn rotation(&self, z: usize) -> &[usize] {
        &self.rotation[z]
    }

    /// 2-cell on the left of a dart.
    pub fn face_of_dart(&self, d: usize) -> usize {
        self.face_of_dart[d]
    }
}

/// Reeb nodes of the branch hanging off `v` through `edge`.
pub fn branch_nodes(g: &ReebGraph, v: usize, edge: usize) -> Vec<usize> {
    let start = g.opposite(edge, v);
    let mut seen = BTreeSet::from([v, start]);
    let mut stack = alloc::vec![start];
    while let Some(n) = stack.pop() {
        for e in g.incident_edges(n) {
            let m = g.opposite(e, n);
            if seen.insert(m) {
                stack.push(m);
            }
        }
    }
    seen.remove(&v);
    seen.into_iter().collect()
}

/// Compactly supported Euler characteristic of every Reeb element's
/// preimage, summed over the pieces of the level sets and open bands inside
/// open simplices. Returns `(per node, per edge)`.
pub fn element_euler(s: &ClosedSurface, g: &ReebGraph) -> (Vec<i64>, Vec<i64>) {
    let mut nodes = alloc::vec![0i64; g.nodes().len()];
    let mut edges = alloc::vec![0i64; g.edges().len()];
    let mut add = |el: Option<ReebElement>, x: i64| match el {
        Some(ReebElement::Node(n)) => nodes[n] += x,
        Some(ReebElement::Edge(e)) => edges[e] += x,
        None => {}
    };
    let crit = g.critical_values();
    let tri_range = |t: usize| {
        let vals = s.triangle(t).map(|v| s.value(v));
        (*vals.iter().min().unwrap(), *vals.iter().max().unwrap())
    };
    for (t, c) in crit.iter().enumerate() {
        for v in 0..s.vertex_count() {
            if s.value(v) == c {
                add(g.level_element(t, s.star(v)[0]), 1);
            }
        }
        for (e, &[a, b]) in s.edges().iter().enumerate() {
            let (lo, hi) = minmax(s.value(a), s.value(b));
            let el = g.level_element(t, s.edge_triangles(e)[0]);
            if lo == c && hi == c {
                add(el, -1);
            } else if lo < c && c < hi {
                add(el, 1);
            }
        }
        for tri in 0..s.triangle_count() {
            let (lo, hi) = tri_range(tri);
            if lo == c && hi == c {
                add(g.level_element(t, tri), 1);
            } else if lo < c && c < hi {
                add(g.level_element(t, tri), -1);
            }
        }
    }
    for (t, w) in crit.windows(2).enumerate() {
        let (lo_c, hi_c) = (&w[0], &w[1]);
        let band = |tri: usize| g.band_edge(t, tri).map(ReebElement::Edge);
        for v in 0..s.vertex_count() {
            if lo_c < s.value(v) && s.value(v) < hi_c {
                add(band(s.star(v)[0]), 1);
            }
        }
        for (e, &[a, b]) in s.edges().iter().enumerate() {
            let (lo, hi) = minmax(s.value(a), s.value(b));
            if lo < hi_c && hi > lo_c {
                add(band(s.edge_triangles(e)[0]), -1);
            }
        }
        for tri in 0..s.triangle_count() {
            let (lo, hi) = tri_range(tri);
            if lo < hi_c && hi > lo_c {
                add(band(tri), 1);
            }
        }
    }
    (nodes, edges)
}

fn minmax<'a>(a: &'a Level, b: &'a Level) -> (&'a Level, &'a Level) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Euler characteristic of the preimage of the branch of `g - v` entered
/// through `edge`, computed by counting simplex pieces and, independently,
/// as the sum of PL indices of the critical vertices in the branch.
pub fn branch_euler(s: &ClosedSurface, g: &ReebGraph, v: usize, edge: usize) -> Result<i64, SpecialVertexError> {
    let (node_chi, edge_chi) = element_euler(s, g);
    branch_euler_with(s, g, v, edge, &node_chi, &edge_chi)
}

fn branch_euler_with(
    s: &ClosedSurface,
    g: &ReebGraph,
    v: usize,
    edge: usize,
    node_chi: &[i64],
    edge_chi: &[i64],
) -> Result<i64, SpecialVertexError> {
    let e = g.edge(edge);
    if e.lower != v && e.upper != v {
        return Err(SpecialVertexError::NotIncident { node: v, edge });
    }
    let nodes = branch_nodes(g, v, edge);
    let in_branch: BTreeSet<usize> = nodes.iter().copied().collect();
    let mut cells: i64 = nodes.iter().map(|&n| node_chi[n]).sum();
    for (id, e) in g.edges().iter().enumerate() {
        if in_branch.contains(&e.lower) || in_branch.contains(&e.upper) {
            cells += edge_chi[id];
        }
    }
    let indices: i64 = nodes.iter().flat_map(|&n| g.node(n).vertices.iter()).map(|&w| s.class(w).index()).sum();
    if cells != indices {
        return Err(SpecialVertexError::EulerMismatch { cells, indices });
    }
    Ok(cells)
}

/// Euler characteristics of all branches at `v`, in incident-edge order.
pub fn branch_chis(s: &ClosedSurface, g: &ReebGraph, v: usize) -> Result<Vec<i64>, SpecialVertexError> {
    let (node_chi, edge_chi) = element_euler(s, g);
    g.incident_edges(v).into_iter().map(|e| branch_euler_with(s, g, v, e, &node_chi, &edge_chi)).collect()
}

/// The unique node all of whose branches have disk preimages.
pub fn find_special_vertex(s: &ClosedSurface, g: &ReebGraph) -> Result<usize, SpecialVertexError> {
    let chi = s.euler_characteristic();
    if chi != 0 {
        return Err(SpecialVertexError::NotATorus(chi));
    }
    if !is_tree(g) {
        return Err(SpecialVertexError::NotATree(g.betti1()));
    }
    let (node_chi, edge_chi) = element_euler(s, g);
    let mut all = Vec::with_capacity(g.nodes().len());
    let mut passers = Vec::new();
    for v in 0..g.nodes().len() {
        let chis = g
            .incident_edges(v)
            .into_iter()
            .map(|e| branch_euler_with(s, g, v, e, &node_chi, &edge_chi))
            .collect::<Result<Vec<_>, _>>()?;
        if chis.iter().all(|&c| c == 1) {
            passers.push(v);
        }
        all.push(chis);
    }
    match passers.len() {
        1 => Ok(passers[0]),
        0 => Err(SpecialVertexError::NoSpecialVertex(all)),
        _ => Err(SpecialVertexError::Multiple(passers)),
    }
}

/// Canonical text of the subtree rooted at `node`, not going back through
/// `from_edge`. Children are sorted so the text does not depend on ids.
fn subtree_signature(g: &ReebGraph, node: usize, from_edge: usize) -> String {
    let n = g.node(node);
    let kinds: Vec<String> = n.kinds.iter().map(|k| format!("{k}")).collect();
    let mut children: Vec<String> = g
        .incident_edges(node)
        .into_iter()
        .filter(|&e| e != from_edge)
        .map(|e| {
            let m = g.opposite(e, node);
            let dir = if g.node(m).level > n.level { '+' } else { '-' };
            format!("{dir}{}", subtree_signature(g, m, e))
        })
        .collect();
    children.sort();
    format!("{}:{}[{}]", n.level, kinds.join(","), children.join(","))
}

/// Builds the CW partition of the torus by the level component of node `v`.
pub fn build_partition(s: &ClosedSurface, g: &ReebGraph, v: usize) -> Result<CellPartition, PartitionError> {
    let node = g.node(v);
    if node.vertices.is_empty() {
        return Err(PartitionError::NoCriticalVertex(v));
    }
    let t = node.level_index;
    let c = node.level.clone();
    if t == 0 || t + 1 == g.critical_values().len() {
        return Err(PartitionError::Inconsistent("special level is a global extremum"));
    }
    let sign = |w: usize| s.value(w).cmp(&c);

    let mut point_ids: BTreeMap<LevelPoint, usize> = BTreeMap::new();
    let mut points: Vec<LevelPoint> = Vec::new();
    let mut point_id = |p: LevelPoint, points: &mut Vec<LevelPoint>| -> usize {
        *point_ids.entry(p).or_insert_with(|| {
            points.push(p);
            points.len() - 1
        })
    };

    let mut segments: Vec<Segment> = Vec::new();
    let support: BTreeSet<usize> = node.support.iter().copied().collect();
    for &tri in &node.support {
        let vs = s.triangle(tri);
        let sg = vs.map(sign);
        if sg.iter().all(|&o| o == Ordering::Equal) {
            return Err(PartitionError::Degenerate(format!("triangle {tri} is flat on the special level")));
        }
        // boundary walk: (point, sign before, sign after)
        let es = s.triangle_edges(tri);
        let mut walk: Vec<(LevelPoint, Ordering, Ordering)> = Vec::new();
        for i in 0..3 {
            let prev = sg[(i + 2) % 3];
            let next = sg[(i + 1) % 3];
            if sg[i] == Ordering::Equal {
                walk.push((LevelPoint::Vertex(vs[i]), prev, next));
            } else if next == sg[i].reverse() {
                walk.push((LevelPoint::Crossing(es[i]), sg[i], next));
            }
        }
        let ids: Vec<usize> = walk.iter().map(|w| point_id(w.0, &mut points)).collect();
        if walk.len() != 2 {
            continue; // a single touching vertex
        }
        if walk.iter().all(|w| matches!(w.0, LevelPoint::Vertex(_))) {
            continue; // a level edge, handled below
        }
        let p = walk.iter().position(|w| w.1 == Ordering::Greater && w.2 == Ordering::Less);
        let q = walk.iter().position(|w| w.1 == Ordering::Less && w.2 == Ordering::Greater);
        let (Some(p), Some(q)) = (p, q) else {
            return Err(PartitionError::Inconsistent("level segment without a sign change"));
        };
        segments.push(Segment {
            from: ids[p],
            to: ids[q],
            carrier: Carrier::Triangle(tri),
            upper_triangle: tri,
            lower_triangle: tri,
        });
    }
    for (e, &[a, b]) in s.edges().iter().enumerate() {
        if sign(a) != Ordering::Equal || sign(b) != Ordering::Equal {
            continue;
        }
        let [t0, t1] = s.edge_triangles(e);
        if !support.contains(&t0) {
            continue;
        }
        let third = |tri: usize| s.triangle(tri).into_iter().find(|&w| w != a && w != b).unwrap();
        let (s0, s1) = (sign(third(t0)), sign(third(t1)));
        // t0 runs a -> b with its interior on the left
        let (from, to, up, down) = match (s0, s1) {
            (Ordering::Greater, Ordering::Less) => (a, b, t0, t1),
            (Ordering::Less, Ordering::Greater) => (b, a, t1, t0),
            _ => {
                return Err(PartitionError::Degenerate(format!(
                    "level edge ({a}, {b}) has both neighbouring triangles on one side"
                )))
            }
        };
        let from = point_id(LevelPoint::Vertex(from), &mut points);
        let to = point_id(LevelPoint::Vertex(to), &mut points);
        segments.push(Segment { from, to, carrier: Carrier::Edge(e), upper_triangle: up, lower_triangle: down });
    }

    // 2-cells: one per Reeb edge at v
    let cell_edges = g.incident_edges(v);
    let cell_of_edge: BTreeMap<usize, usize> = cell_edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let upper_cell = |seg: &Segment| g.band_edge(t, seg.upper_triangle).and_then(|e| cell_of_edge.get(&e).copied());
    let lower_cell = |seg: &Segment| g.band_edge(t - 1, seg.lower_triangle).and_then(|e| cell_of_edge.get(&e).copied());

    // 0-cells
    let zero_cells: Vec<ZeroCell> = node.vertices.iter().map(|&w| ZeroCell { vertex: w, class: s.class(w) }).collect();
    let mut zero_of_point: BTreeMap<usize, usize> = BTreeMap::new();
    for (z, zc) in zero_cells.iter().enumerate() {
        let p = point_ids.get(&LevelPoint::Vertex(zc.vertex)).copied();
        let p = p.ok_or(PartitionError::Inconsistent("critical vertex not on the traced level set"))?;
        zero_of_point.insert(p, z);
    }
    let mut outgoing: Vec<Vec<usize>> = alloc::vec![Vec::new(); points.len()];
    let mut incoming: Vec<Vec<usize>> = alloc::vec![Vec::new(); points.len()];
    for (i, seg) in segments.iter().enumerate() {
        outgoing[seg.from].push(i);
        incoming[seg.to].push(i);
    }
    for p in 0..points.len() {
        let regular = !zero_of_point.contains_key(&p);
        if regular && (outgoing[p].len() != 1 || incoming[p].len() != 1) {
            return Err(PartitionError::Inconsistent("regular point of the level set is not on a single arc"));
        }
        if !regular && (outgoing[p].len() != incoming[p].len() || outgoing[p].is_empty()) {
            return Err(PartitionError::Inconsistent("critical vertex with unbalanced level arcs"));
        }
    }

    // angular position of a segment end at a critical vertex
    let angle = |w: usize, seg: &Segment| -> Result<usize, PartitionError> {
        let pos = match seg.carrier {
            Carrier::Triangle(tri) => s.star(w).iter().position(|&x| x == tri).map(|i| 2 * i + 1),
            Carrier::Edge(e) => {
                let [a, b] = s.edges()[e];
                let other = if a == w { b } else { a };
                s.link(w).iter().position(|&x| x == other).map(|i| 2 * i)
            }
        };
        pos.ok_or(PartitionError::Inconsistent("segment does not touch its critical vertex"))
    };

    // 1-cells: trace from each 0-cell along outgoing segments in angular order
    let mut used = alloc::vec![false; segments.len()];
    let mut one_cells: Vec<OneCell> = Vec::new();
    let mut tail_angle: Vec<usize> = Vec::new();
    let mut head_angle: Vec<usize> = Vec::new();
    for (z, zc) in zero_cells.iter().enumerate() {
        let p0 = point_ids[&LevelPoint::Vertex(zc.vertex)];
        let mut starts: Vec<(usize, usize)> =
            outgoing[p0].iter().map(|&i| angle(zc.vertex, &segments[i]).map(|a| (a, i))).collect::<Result<_, _>>()?;
        starts.sort_unstable();
        for (a0, first) in starts {
            let mut path = alloc::vec![first];
            used[first] = true;
            let mut cur = first;
            while !zero_of_point.contains_key(&segments[cur].to) {
                cur = outgoing[segments[cur].to][0];
                if used[cur] {
                    return Err(PartitionError::Inconsistent("arc revisits a segment"));
                }
                used[cur] = true;
                path.push(cur);
            }
            let head = zero_of_point[&segments[cur].to];
            let up = upper_cell(&segments[first]);
            let down = lower_cell(&segments[first]);
            for &i in &path {
                if upper_cell(&segments[i]) != up || lower_cell(&segments[i]) != down {
                    return Err(PartitionError::Inconsistent("arc changes its neighbouring cells"));
                }
            }
            let (Some(upper), Some(lower)) = (up, down) else {
                return Err(PartitionError::Inconsistent("arc side is not a branch at the node"));
            };
            tail_angle.push(a0);
            head_angle.push(angle(zero_cells[head].vertex, &segments[cur])?);
            one_cells.push(OneCell { tail: z, head, upper, lower, segments: path });
        }
    }
    if used.iter().any(|&u| !u) {
        return Err(PartitionError::Inconsistent("level component contains a circle without critical vertices"));
    }

    // rotation system
    let mut rotation: Vec<Vec<(usize, usize)>> = alloc::vec![Vec::new(); zero_cells.len()];
    for (a, oc) in one_cells.iter().enumerate() {
        rotation[oc.tail].push((tail_angle[a], 2 * a));
        rotation[oc.head].push((head_angle[a], 2 * a + 1));
    }
    let rotation: Vec<Vec<usize>> = rotation
        .into_iter()
        .map(|mut r| {
            r.sort_unstable();
            r.into_iter().map(|(_, d)| d).collect()
        })
        .collect();
    let mut rotation_pos = alloc::vec![(0, 0); 2 * one_cells.len()];
    for (z, r) in rotation.iter().enumerate() {
        for (i, &d) in r.iter().enumerate() {
            rotation_pos[d] = (z, i);
        }
    }

    let left_cell = |d: usize| {
        let oc = &one_cells[d / 2];
        if d.is_multiple_of(2) {
            oc.upper
        } else {
            oc.lower
        }
    };
    let next_dart = |d: usize| {
        let back = d ^ 1;
        let (z, i) = rotation_pos[back];
        let r = &rotation[z];
        r[(i + r.len() - 1) % r.len()]
    };

    // faces: orbits of the dart walk, each must bound exactly one cell
    let nd = 2 * one_cells.len();
    let mut face_of_dart = alloc::vec![usize::MAX; nd];
    let mut boundaries: Vec<Option<Vec<(usize, i8)>>> = alloc::vec![None; cell_edges.len()];
    for d0 in 0..nd {
        if face_of_dart[d0] != usize::MAX {
            continue;
        }
        let cell = left_cell(d0);
        let mut walk = Vec::new();
        let mut d = d0;
        loop {
            if left_cell(d) != cell {
                return Err(PartitionError::Inconsistent("face walk crosses into another cell"));
            }
            face_of_dart[d] = cell;
            walk.push((d / 2, if d % 2 == 0 { 1 } else { -1 }));
            d = next_dart(d);
            if d == d0 {
                break;
            }
        }
        if boundaries[cell].replace(walk).is_some() {
            return Err(PartitionError::Inconsistent("complement component has several boundary walks"));
        }
    }

    // chain complex
    let mut d1 = IntMatrix::zeros(zero_cells.len(), one_cells.len());
    let mut d2 = IntMatrix::zeros(one_cells.len(), cell_edges.len());
    for (a, oc) in one_cells.iter().enumerate() {
        d1.add_at(oc.head, a, 1);
        d1.add_at(oc.tail, a, -1);
        d2.add_at(a, oc.upper, 1);
        d2.add_at(a, oc.lower, -1);
    }
    let (node_chi, edge_chi) = element_euler(s, g);
    let mut two_cells = Vec::with_capacity(cell_edges.len());
    for (i, &e) in cell_edges.iter().enumerate() {
        let boundary = boundaries[i].take().ok_or(PartitionError::Inconsistent("2-cell without a boundary walk"))?;
        // the walk and the side labels give the same boundary chain
        let mut col = alloc::vec![0i64; one_cells.len()];
        for &(a, sgn) in &boundary {
            col[a] += sgn as i64;
        }
        if (0..one_cells.len()).any(|a| *d2.get(a, i) != col[a].into()) {
            return Err(PartitionError::Inconsistent("boundary walk disagrees with the incidence matrix"));
        }
        let euler = branch_euler_with(s, g, v, e, &node_chi, &edge_chi)?;
        if euler != 1 {
            return Err(PartitionError::NotADisk { cell: i, chi: euler });
        }
        let other = g.opposite(e, v);
        let above = g.node(other).level > c;
        let branch: BTreeSet<usize> = branch_nodes(g, v, e).into_iter().collect();
        let in_branch = |el: Option<ReebElement>| match el {
            Some(ReebElement::Node(n)) => branch.contains(&n),
            Some(ReebElement::Edge(x)) => {
                let ed = g.edge(x);
                branch.contains(&ed.lower) || branch.contains(&ed.upper)
            }
            None => false,
        };
        let support: Vec<usize> = (0..s.triangle_count())
            .filter(|&tri| {
                (0..g.critical_values().len()).any(|k| in_branch(g.level_element(k, tri)))
                    || (0..g.critical_values().len() - 1).any(|k| in_branch(g.band_edge(k, tri).map(ReebElement::Edge)))
            })
            .collect();
        let label = format!("{}{}", if above { '+' } else { '-' }, subtree_signature(g, other, e));
        two_cells.push(TwoCell { reeb_edge: e, above, support, boundary, label, euler });
    }
    let complex = ChainComplex::new(d1, d2).map_err(|_| PartitionError::Inconsistent("boundary of a boundary is not zero"))?;
    let h = cellular_homology(&complex);
    if h.betti != [1, 2, 1] || h.torsion.iter().any(|t| !t.is_empty()) {
        return Err(PartitionError::Inconsistent("cell partition does not have the homology of a torus"));
    }

    Ok(CellPartition {
        node: v,
        level: c,
        points,
        segments,
        zero_cells,
        one_cells,
        two_cells,
        rotation,
        rotation_pos,
        face_of_dart,
        complex,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::reeb::compute_reeb;
    use crate::surface::fixtures::*;
    use crate::surface::VertexKind;
    use crate::SurfaceField;

    fn setup(f: SurfaceField) -> (ClosedSurface, ReebGraph) {
        let s = ClosedSurface::new(f).unwrap();
        let g = compute_reeb(&s).unwrap();
        (s, g)
    }

    /// Brute force over every node: which ones have only disk branches.
    fn passers(s: &ClosedSurface, g: &ReebGraph) -> Vec<usize> {
        (0..g.nodes().len())
            .filter(|&v| g.incident_edges(v).iter().all(|&e| branch_euler(s, g, v, e).unwrap() == 1))
            .collect()
    }

    /// Components of the complement of `{f = c}` restricted to the open
    /// triangles strictly above or below, merged across shared edges whose
    /// interior avoids the level. Oracle for the 2-cell count.
    fn complement_components(s: &ClosedSurface, c: &Level) -> usize {
        let n = s.triangle_count();
        // a triangle piece per side it reaches
        let side = |tri: usize, up: bool| {
            s.triangle(tri).iter().any(|&w| if up { s.value(w) > c } else { s.value(w) < c })
        };
        let id = |tri: usize, up: bool| 2 * tri + up as usize;
        let mut dsu = crate::dsu::Dsu::new(2 * n);
        for (e, &[a, b]) in s.edges().iter().enumerate() {
            let [t0, t1] = s.edge_triangles(e);
            for up in [false, true] {
                let reaches = |w: usize| if up { s.value(w) > c } else { s.value(w) < c };
                if (reaches(a) || reaches(b)) && side(t0, up) && side(t1, up) {
                    dsu.union(id(t0, up), id(t1, up));
                }
            }
        }
        let mut roots = BTreeSet::new();
        for tri in 0..n {
            for up in [false, true] {
                if side(tri, up) {
                    roots.insert(dsu.find(id(tri, up)));
                }
            }
        }
        roots.len()
    }

    #[test]
    fn special_vertex_of_cos_cos() {
        let (s, g) = setup(cos_field(16, 1, 1, 1.0));
        let v = find_special_vertex(&s, &g).unwrap();
        assert_eq!(g.node(v).level, Level::zero());
        assert_eq!(passers(&s, &g), alloc::vec![v]);
        assert_eq!(branch_chis(&s, &g, v).unwrap(), alloc::vec![1, 1]);
    }

    #[test]
    fn special_vertex_of_z2_field() {
        let (s, g) = setup(cos_field(16, 2, 1, 1.0));
        let v = find_special_vertex(&s, &g).unwrap();
        assert_eq!(passers(&s, &g), alloc::vec![v]);
        assert_eq!(g.node(v).level, Level::zero());
        assert_eq!(g.node(v).kinds, alloc::vec![VertexClass::saddle(1); 4]);
    }

    #[test]
    fn branch_examples() {
        let (s, g) = setup(cos_field(16, 1, 1, 1.0));
        let max = g.nodes().iter().position(|n| n.kinds == [VertexClass::MAXIMUM]).unwrap();
        let e = g.incident_edges(max)[0];
        let mid = g.opposite(e, max);
        // disk around the maximum
        assert_eq!(branch_euler(&s, &g, mid, e).unwrap(), 1);
        // from the maximum the rest of the torus is a punctured torus
        assert_eq!(branch_euler(&s, &g, max, e).unwrap(), -1);
        assert!(matches!(
            branch_euler(&s, &g, max, g.incident_edges(mid).into_iter().find(|&x| x != e).unwrap()),
            Err(SpecialVertexError::NotIncident { .. })
        ));
    }

    /// cos + cos with the peak split in two: `(0,0)` lowered below its
    /// horizontal neighbours, which become maxima.
    fn split_peak() -> SurfaceField {
        grid_field(16, |i, j| match (i, j) {
            (0, 0) => "1.95".parse().unwrap(),
            (1, 0) | (15, 0) => Level::from_integer(2),
            _ => quantize(cos_turn(i as i64, 16) + cos_turn(j as i64, 16)),
        })
    }

    #[test]
    fn saddle_with_two_maxima_is_a_disk() {
        let (s, g) = setup(split_peak());
        assert_eq!(s.class(0), VertexClass::saddle(1));
        let v = find_special_vertex(&s, &g).unwrap();
        assert_eq!(g.node(v).level, Level::zero());
        let up = g.incident_edges(v).into_iter().find(|&e| g.node(g.opposite(e, v)).level > Level::zero()).unwrap();
        let nodes = branch_nodes(&g, v, up);
        let mut kinds: Vec<VertexClass> = nodes.iter().flat_map(|&n| g.node(n).kinds.clone()).collect();
        kinds.sort();
        assert_eq!(kinds, alloc::vec![VertexClass::saddle(1), VertexClass::MAXIMUM, VertexClass::MAXIMUM]);
        assert_eq!(branch_euler(&s, &g, v, up).unwrap(), 1);
        check_partition(split_peak(), [2, 4, 2]);
    }

    #[test]
    fn element_euler_sums_to_the_surface() {
        for f in [cos_field(16, 1, 1, 1.0), cos_field(16, 2, 2, 1.0), cos_field(12, 1, 1, 0.3)] {
            let (s, g) = setup(f);
            let (nodes, edges) = element_euler(&s, &g);
            assert!(edges.iter().all(|&x| x == 0), "open annuli");
            for (id, &chi) in nodes.iter().enumerate() {
                assert_eq!(chi, crate::reeb::level_component_euler(&s, &g, id));
            }
            assert_eq!(nodes.iter().sum::<i64>(), 0);
        }
    }

    #[test]
    fn non_tree_and_sphere_are_rejected() {
        let (s, g) = setup(cos_field(16, 1, 1, 0.3));
        assert_eq!(find_special_vertex(&s, &g), Err(SpecialVertexError::NotATree(1)));
        let (s, g) = setup(tetrahedron([0, 1, 2, 3]));
        assert_eq!(find_special_vertex(&s, &g), Err(SpecialVertexError::NotATorus(2)));
    }

    fn check_partition(f: SurfaceField, expected: [usize; 3]) -> CellPartition {
        let (s, g) = setup(f);
        let v = find_special_vertex(&s, &g).unwrap();
        let p = build_partition(&s, &g, v).unwrap();
        assert_eq!(p.counts(), expected);
        let [z, o, t] = p.counts();
        assert_eq!(z as i64 - o as i64 + t as i64, 0);
        assert_eq!(t, g.degree(v));
        assert_eq!(t, complement_components(&s, &g.node(v).level));
        assert!(p.chain_complex().d1().mul(p.chain_complex().d2()).is_zero());
        assert!(p.zero_cells().iter().all(|z| z.class.kind == VertexKind::Saddle));
        // every dart walk closes up, darts at a vertex are all distinct
        for d in 0..p.dart_count() {
            assert_eq!(p.sigma_inv(p.sigma(d)), d);
            assert_eq!(p.dart_origin(p.sigma(d)), p.dart_origin(d));
        }
        for cell in p.two_cells() {
            assert_eq!(cell.euler, 1);
            assert!(!cell.support.is_empty());
        }
        p
    }

    #[test]
    fn partition_of_cos_cos() {
        let p = check_partition(cos_field(16, 1, 1, 1.0), [2, 4, 2]);
        let labels: BTreeSet<&str> = p.two_cells().iter().map(|c| c.label.as_str()).collect();
        assert_eq!(labels.len(), 2);
    }

    #[test]
    fn partition_of_z2_field() {
        check_partition(cos_field(16, 2, 1, 1.0), [4, 8, 4]);
    }

    #[test]
    fn partition_of_z2xz2_field() {
        check_partition(cos_field(16, 2, 2, 1.0), [8, 16, 8]);
    }

    #[test]
    fn partition_on_a_finer_grid() {
        check_partition(cos_field(24, 2, 1, 1.0), [4, 8, 4]);
    }

    #[test]
    fn non_special_node_is_not_a_disk_partition() {
        let (s, g) = setup(cos_field(16, 1, 1, 1.0));
        let v = find_special_vertex(&s, &g).unwrap();
        let other = (0..g.nodes().len()).find(|&n| n != v).unwrap();
        assert!(build_partition(&s, &g, other).is_err());
    }
}
