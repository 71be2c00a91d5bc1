//! End-to-end analysis: surface, Reeb tree, special level, cell partition,
//! symmetry group, orbit indexing, and the group expression
//! `(A_1 x ... x A_r) wr[Z_n x Z_nm] Z^2`.

use alloc::boxed::Box;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;

use crate::dsu::Dsu;
use crate::homology::{cokernel_invariants, IntMatrix};
use crate::level::Level;
use crate::reeb::{compute_reeb, is_tree, ReebError, ReebGraph};
use crate::special::{branch_chis, build_partition, find_special_vertex, CellPartition, PartitionError, SpecialVertexError};
use crate::surface::{ClosedSurface, SurfaceError, SurfaceField, VertexClass};
use crate::symmetry::{enumerate_symmetries_with_census, group_structure, index_orbits, Census, OrbitTable, SymmetryError, SymmetryGroup};
use crate::wreath::{Cyclic, Group, Product, ShiftAction, Translation, WreathElement, WreathProduct};

/// Report format tag.
pub const FORMAT: &str = "kr-torus/1";

/// How a failure should be read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// The input is outside the accepted class (not a torus, not a tree,
    /// degenerate level set).
    Input,
    /// The input is accepted but a conclusion the theory guarantees fails.
    HypothesisViolation,
    /// An internal consistency check failed.
    Internal,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Input => 1,
            ErrorClass::HypothesisViolation | ErrorClass::Internal => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AnalysisError {
    #[error("invalid surface: {0}")]
    Surface(#[from] SurfaceError),
    #[error("surface is not a torus (Euler characteristic {0})")]
    NotATorus(i64),
    #[error(transparent)]
    Reeb(#[from] ReebError),
    #[error("KR-graph is not a tree (first Betti number {0})")]
    NotATree(usize),
    #[error(transparent)]
    Special(#[from] SpecialVertexError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error(transparent)]
    Symmetry(#[from] SymmetryError),
    #[error("disk index {index} out of range 1..={r}")]
    DiskIndex { index: usize, r: usize },
    #[error("extracted disk {0} is not a disk with one boundary circle on the level")]
    DiskShape(usize),
}

impl AnalysisError {
    pub fn class(&self) -> ErrorClass {
        match self {
            AnalysisError::Surface(_) | AnalysisError::NotATorus(_) | AnalysisError::NotATree(_) => ErrorClass::Input,
            AnalysisError::Reeb(ReebError::ConstantField) => ErrorClass::Input,
            AnalysisError::Partition(PartitionError::Degenerate(_)) => ErrorClass::Input,
            AnalysisError::DiskIndex { .. } => ErrorClass::Input,
            AnalysisError::Special(SpecialVertexError::NoSpecialVertex(_) | SpecialVertexError::Multiple(_)) => {
                ErrorClass::HypothesisViolation
            }
            AnalysisError::Symmetry(SymmetryError::NonAbelian | SymmetryError::TooManyFactors(_)) => {
                ErrorClass::HypothesisViolation
            }
            _ => ErrorClass::Internal,
        }
    }

    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            AnalysisError::Surface(_) => "invalid-surface",
            AnalysisError::NotATorus(_) => "not-a-torus",
            AnalysisError::Reeb(ReebError::ConstantField) => "constant-field",
            AnalysisError::Reeb(_) => "reeb-inconsistency",
            AnalysisError::NotATree(_) => "not-a-tree",
            AnalysisError::Special(SpecialVertexError::NoSpecialVertex(_)) => "no-special-vertex",
            AnalysisError::Special(SpecialVertexError::Multiple(_)) => "several-special-vertices",
            AnalysisError::Special(_) => "special-level-inconsistency",
            AnalysisError::Partition(PartitionError::Degenerate(_)) => "degenerate-level",
            AnalysisError::Partition(_) => "partition-inconsistency",
            AnalysisError::Symmetry(SymmetryError::NonAbelian) => "non-abelian-symmetry",
            AnalysisError::Symmetry(SymmetryError::TooManyFactors(_)) => "too-many-invariant-factors",
            AnalysisError::Symmetry(_) => "symmetry-inconsistency",
            AnalysisError::DiskIndex { .. } => "disk-index",
            AnalysisError::DiskShape(_) => "disk-shape",
        }
    }
}

/// Symbolic group expression.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupExpr {
    Trivial,
    /// `pi_0 S'(f|D_i, dD_i)`, kept symbolic.
    Atom { id: usize, kr_subtree: String },
    DirectProduct(Vec<GroupExpr>),
    /// `base wr[Z_n x Z_nm] acting`.
    Wreath { base: Box<GroupExpr>, n: u64, nm: u64, acting: Box<GroupExpr> },
    FreeAbelian(u32),
}

impl GroupExpr {
    /// `(prod A_i) wr[Z_n x Z_nm] Z^2`, or `(prod A_i) x Z^2` when the
    /// symmetry group is trivial.
    pub fn orbit_group(atoms: Vec<GroupExpr>, n: u64, nm: u64) -> GroupExpr {
        let base = match atoms.len() {
            0 => GroupExpr::Trivial,
            1 => atoms.into_iter().next().unwrap(),
            _ => GroupExpr::DirectProduct(atoms),
        };
        if n == 1 && nm == 1 {
            GroupExpr::DirectProduct(alloc::vec![base, GroupExpr::FreeAbelian(2)])
        } else {
            GroupExpr::Wreath { base: Box::new(base), n, nm, acting: Box::new(GroupExpr::FreeAbelian(2)) }
        }
    }

    fn fmt_inner(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::DirectProduct(v) if v.len() > 1 => write!(f, "({self})"),
            GroupExpr::Wreath { .. } => write!(f, "({self})"),
            _ => write!(f, "{self}"),
        }
    }
}

impl fmt::Display for GroupExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupExpr::Trivial => f.write_str("1"),
            GroupExpr::Atom { id, .. } => write!(f, "A_{id}"),
            GroupExpr::FreeAbelian(1) => f.write_str("Z"),
            GroupExpr::FreeAbelian(k) => write!(f, "Z^{k}"),
            GroupExpr::DirectProduct(v) => {
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" x ")?;
                    }
                    g.fmt_inner(f)?;
                }
                Ok(())
            }
            GroupExpr::Wreath { base, n, nm, acting } => {
                base.fmt_inner(f)?;
                write!(f, " wr[Z_{n} x Z_{nm}] ")?;
                acting.fmt_inner(f)
            }
        }
    }
}

/// The full result of [`analyze`].
#[derive(Debug, Clone)]
pub struct Analysis {
    pub surface: ClosedSurface,
    pub reeb: ReebGraph,
    pub special: usize,
    pub branch_chis: Vec<i64>,
    pub partition: CellPartition,
    pub group: SymmetryGroup,
    pub census: Census,
    pub orbits: OrbitTable,
    pub expr: GroupExpr,
    /// Whether every symmetry moves the 0-cells by one common translation
    /// of the coordinates modulo 1. `None` without coordinates.
    pub realized_by_translations: Option<bool>,
}

/// Runs the whole pipeline on a field.
pub fn analyze(field: SurfaceField) -> Result<Analysis, AnalysisError> {
    let surface = ClosedSurface::new(field)?;
    let chi = surface.euler_characteristic();
    if chi != 0 {
        return Err(AnalysisError::NotATorus(chi));
    }
    let reeb = compute_reeb(&surface)?;
    if !is_tree(&reeb) {
        return Err(AnalysisError::NotATree(reeb.betti1()));
    }
    let special = find_special_vertex(&surface, &reeb)?;
    let branch_chis = branch_chis(&surface, &reeb, special)?;
    let partition = build_partition(&surface, &reeb, special)?;
    let (syms, census) = enumerate_symmetries_with_census(&partition)?;
    let group = group_structure(&syms)?;
    let orbits = index_orbits(&group, &partition)?;
    let atoms = orbits
        .representatives
        .iter()
        .enumerate()
        .map(|(i, &c)| GroupExpr::Atom { id: i + 1, kr_subtree: partition.two_cells()[c].label.clone() })
        .collect();
    let (n, nm) = group.invariant_factors();
    let expr = GroupExpr::orbit_group(atoms, n, nm);
    let realized_by_translations = translation_check(&surface, &partition, &group);
    Ok(Analysis { surface, reeb, special, branch_chis, partition, group, census, orbits, expr, realized_by_translations })
}

fn translation_check(s: &ClosedSurface, p: &CellPartition, g: &SymmetryGroup) -> Option<bool> {
    let coords = s.field().coords()?;
    let wrap = |x: f64| x - libm_floor(x);
    let close = |a: f64, b: f64| {
        let d = wrap(a - b);
        !(1e-9..=1.0 - 1e-9).contains(&d)
    };
    Some(g.elements().iter().all(|a| {
        let shift = |z: usize| {
            let (u, w) = (p.zero_cells()[z].vertex, p.zero_cells()[a.zero[z]].vertex);
            (coords[w][0] - coords[u][0], coords[w][1] - coords[u][1])
        };
        let (dx, dy) = shift(0);
        (0..p.zero_cells().len()).all(|z| {
            let (ex, ey) = shift(z);
            close(ex, dx) && close(ey, dy)
        })
    }))
}

fn libm_floor(x: f64) -> f64 {
    let t = x as i64 as f64;
    if t > x {
        t - 1.0
    } else {
        t
    }
}

/// A representative disk `D_i00`: the closure of the 2-cell, cut open at
/// the points where its boundary touches itself.
#[derive(Debug, Clone)]
pub struct DiskField {
    pub id: usize,
    pub cell: usize,
    pub field: SurfaceField,
    /// Where each disk vertex comes from.
    pub origin: Vec<DiskVertex>,
    /// Boundary circle, in order.
    pub boundary: Vec<usize>,
    /// Critical vertices of the original field strictly inside the disk.
    pub interior_critical: Vec<(usize, VertexClass)>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiskVertex {
    /// A mesh vertex off the level.
    Mesh(usize),
    /// One sheet of a mesh vertex on the level.
    Sheet { vertex: usize, sheet: usize },
    /// The level crossing on a mesh edge.
    Crossing(usize),
}

/// Extracts the representative disk of orbit `i` (counted from 1).
pub fn extract_disk_field(a: &Analysis, i: usize) -> Result<DiskField, AnalysisError> {
    let r = a.orbits.r;
    if i == 0 || i > r {
        return Err(AnalysisError::DiskIndex { index: i, r });
    }
    let s = &a.surface;
    let g = &a.reeb;
    let p = &a.partition;
    let cell = a.orbits.representatives[i - 1];
    let tc = &p.two_cells()[cell];
    let c = p.level().clone();
    let t = g.node(p.node()).level_index;
    let side = if tc.above { Ordering::Greater } else { Ordering::Less };
    let sign = |w: usize| s.value(w).cmp(&c);
    let band = |tri: usize| if tc.above { g.band_edge(t, tri) } else { g.band_edge(t - 1, tri) };
    let support: BTreeSet<usize> = tc.support.iter().copied().collect();
    // a triangle's piece on the cell side belongs to the cell
    let piece_in_cell = |tri: usize| {
        if !support.contains(&tri) || !s.triangle(tri).iter().any(|&w| sign(w) == side) {
            return false;
        }
        let touches = s.triangle(tri).iter().any(|&w| sign(w) != side);
        !touches || band(tri) == Some(tc.reeb_edge)
    };

    // sheets of level vertices: runs of cell pieces around the vertex joined
    // across edges whose far end is strictly on the cell side
    let mut sheet_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut level_vertices: BTreeSet<usize> = BTreeSet::new();
    for &tri in &tc.support {
        if piece_in_cell(tri) {
            for w in s.triangle(tri) {
                if sign(w) == Ordering::Equal {
                    level_vertices.insert(w);
                }
            }
        }
    }
    for &w in &level_vertices {
        let star = s.star(w);
        let link = s.link(w);
        let d = star.len();
        let mut dsu = Dsu::new(d);
        for k in 0..d {
            let next = (k + 1) % d;
            if piece_in_cell(star[k]) && piece_in_cell(star[next]) && sign(link[next]) == side {
                dsu.union(k, next);
            }
        }
        let (labels, _) = dsu.labels((0..d).filter(|&k| piece_in_cell(star[k])), d);
        for k in 0..d {
            if let Some(l) = labels[k] {
                sheet_of.insert((w, star[k]), l);
            }
        }
    }

    let mut ids: BTreeMap<DiskVertex, usize> = BTreeMap::new();
    let mut origin: Vec<DiskVertex> = Vec::new();
    let mut values: Vec<Level> = Vec::new();
    let mut triangles: Vec<[usize; 3]> = Vec::new();
    for &tri in &tc.support {
        if !piece_in_cell(tri) {
            continue;
        }
        let vs = s.triangle(tri);
        let es = s.triangle_edges(tri);
        let mut poly: Vec<DiskVertex> = Vec::new();
        for k in 0..3 {
            let (w, next) = (vs[k], vs[(k + 1) % 3]);
            match sign(w) {
                o if o == side => poly.push(DiskVertex::Mesh(w)),
                Ordering::Equal => poly.push(DiskVertex::Sheet { vertex: w, sheet: sheet_of[&(w, tri)] }),
                _ => {}
            }
            let (a, b) = (sign(w), sign(next));
            if a != Ordering::Equal && b != Ordering::Equal && a != b {
                poly.push(DiskVertex::Crossing(es[k]));
            }
        }
        if poly.len() < 3 {
            continue;
        }
        let mut idx = Vec::with_capacity(poly.len());
        for dv in poly {
            let id = *ids.entry(dv).or_insert_with(|| {
                origin.push(dv);
                values.push(match dv {
                    DiskVertex::Mesh(w) => s.value(w).clone(),
                    _ => c.clone(),
                });
                origin.len() - 1
            });
            idx.push(id);
        }
        for k in 1..idx.len() - 1 {
            triangles.push([idx[0], idx[k], idx[k + 1]]);
        }
    }
    let field = SurfaceField::new(values, triangles).map_err(|_| AnalysisError::DiskShape(i))?;
    let boundary = disk_boundary(&field).ok_or(AnalysisError::DiskShape(i))?;
    if boundary.iter().any(|&b| field.value(b) != &c) {
        return Err(AnalysisError::DiskShape(i));
    }
    let mut interior_critical: Vec<(usize, VertexClass)> = origin
        .iter()
        .filter_map(|o| match *o {
            DiskVertex::Mesh(w) if s.class(w).is_critical() => Some((w, s.class(w))),
            _ => None,
        })
        .collect();
    interior_critical.sort();
    Ok(DiskField { id: i, cell, field, origin, boundary, interior_critical })
}

/// The single boundary circle of a triangulated disk, or `None` when the
/// complex is not a disk.
fn disk_boundary(f: &SurfaceField) -> Option<Vec<usize>> {
    let mut directed: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for t in f.triangles() {
        for k in 0..3 {
            let (a, b) = (t[k], t[(k + 1) % 3]);
            if !directed.insert((a, b)) {
                return None;
            }
            edges.insert((a.min(b), a.max(b)));
        }
    }
    let chi = f.vertex_count() as i64 - edges.len() as i64 + f.triangle_count() as i64;
    if chi != 1 {
        return None;
    }
    let mut next: BTreeMap<usize, usize> = BTreeMap::new();
    for &(a, b) in &directed {
        if !directed.contains(&(b, a)) && next.insert(a, b).is_some() {
            return None;
        }
    }
    let (&start, _) = next.iter().next()?;
    let mut cycle = alloc::vec![start];
    let mut cur = next[&start];
    while cur != start {
        cycle.push(cur);
        cur = *next.get(&cur)?;
        if cycle.len() > next.len() {
            return None;
        }
    }
    (cycle.len() == next.len()).then_some(cycle)
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SurfaceReport {
    pub vertices: usize,
    pub triangles: usize,
    pub chi: i64,
    pub genus: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct NodeReport {
    pub id: usize,
    pub level: String,
    pub kinds: Vec<String>,
    pub vertices: Vec<usize>,
    pub degree: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EdgeReport {
    pub id: usize,
    pub lower: usize,
    pub upper: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReebReport {
    pub nodes: usize,
    pub edges: usize,
    pub is_tree: bool,
    pub betti1: usize,
    pub node_list: Vec<NodeReport>,
    pub edge_list: Vec<EdgeReport>,
}

impl ReebReport {
    pub fn new(g: &ReebGraph) -> Self {
        ReebReport {
            nodes: g.nodes().len(),
            edges: g.edges().len(),
            is_tree: is_tree(g),
            betti1: g.betti1(),
            node_list: g
                .nodes()
                .iter()
                .enumerate()
                .map(|(id, n)| NodeReport {
                    id,
                    level: n.level.to_string(),
                    kinds: n.kinds.iter().map(|k| k.to_string()).collect(),
                    vertices: n.vertices.clone(),
                    degree: g.degree(id),
                })
                .collect(),
            edge_list: g.edges().iter().enumerate().map(|(id, e)| EdgeReport { id, lower: e.lower, upper: e.upper }).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SpecialReport {
    pub node: usize,
    pub level: String,
    pub zero_cells: usize,
    pub one_cells: usize,
    pub two_cells: usize,
    pub branch_chis: Vec<i64>,
    pub two_cell_labels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Generators {
    /// Action of `L` on the 2-cells.
    #[cfg_attr(feature = "serde", serde(rename = "L"))]
    pub l: Vec<usize>,
    /// Action of `M` on the 2-cells.
    #[cfg_attr(feature = "serde", serde(rename = "M"))]
    pub m: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OrbitEntry {
    pub cell: usize,
    pub i: u64,
    pub j: u64,
    pub k: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CensusReport {
    pub candidates: usize,
    pub orientation_reversing: usize,
    pub homologically_nontrivial: usize,
    pub not_free: usize,
    pub kept: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SymmetryReport {
    pub order: usize,
    pub n: u64,
    pub m: u64,
    pub r: usize,
    pub invariant_factors: [u64; 2],
    pub generators: Generators,
    pub orbit_table: Vec<OrbitEntry>,
    pub census: CensusReport,
    pub realized_by_translations: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AtomReport {
    pub id: usize,
    pub cell: usize,
    pub kr_subtree: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GroupReport {
    pub expr: String,
    pub atoms: Vec<AtomReport>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DiskReport {
    pub id: usize,
    pub cell: usize,
    pub vertices: usize,
    pub triangles: usize,
    pub boundary_length: usize,
    pub interior_critical: Vec<String>,
}

/// Serializable summary of an [`Analysis`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AnalysisReport {
    pub format: String,
    pub surface: SurfaceReport,
    pub reeb: ReebReport,
    pub special: SpecialReport,
    pub symmetry: SymmetryReport,
    pub group: GroupReport,
    pub disks: Vec<DiskReport>,
}

impl Analysis {
    pub fn report(&self) -> Result<AnalysisReport, AnalysisError> {
        let s = &self.surface;
        let p = &self.partition;
        let g = &self.group;
        let summary = s.summary();
        let [z, o, t] = p.counts();
        let disks = (1..=self.orbits.r)
            .map(|i| {
                let d = extract_disk_field(self, i)?;
                Ok(DiskReport {
                    id: i,
                    cell: d.cell,
                    vertices: d.field.vertex_count(),
                    triangles: d.field.triangle_count(),
                    boundary_length: d.boundary.len(),
                    interior_critical: d.interior_critical.iter().map(|(v, c)| format!("{v}:{c}")).collect(),
                })
            })
            .collect::<Result<Vec<_>, AnalysisError>>()?;
        Ok(AnalysisReport {
            format: FORMAT.to_string(),
            surface: SurfaceReport { vertices: s.vertex_count(), triangles: s.triangle_count(), chi: summary.chi, genus: summary.genus },
            reeb: ReebReport::new(&self.reeb),
            special: SpecialReport {
                node: self.special,
                level: p.level().to_string(),
                zero_cells: z,
                one_cells: o,
                two_cells: t,
                branch_chis: self.branch_chis.clone(),
                two_cell_labels: p.two_cells().iter().map(|c| c.label.clone()).collect(),
            },
            symmetry: SymmetryReport {
                order: g.order(),
                n: g.n(),
                m: g.m(),
                r: self.orbits.r,
                invariant_factors: [g.invariant_factors().0, g.invariant_factors().1],
                generators: Generators { l: g.elements()[g.l()].two.clone(), m: g.elements()[g.mgen()].two.clone() },
                orbit_table: self
                    .orbits
                    .index
                    .iter()
                    .enumerate()
                    .map(|(cell, &[i, j, k])| OrbitEntry { cell, i, j, k })
                    .collect(),
                census: CensusReport {
                    candidates: self.census.candidates,
                    orientation_reversing: self.census.orientation_reversing,
                    homologically_nontrivial: self.census.homologically_nontrivial,
                    not_free: self.census.not_free,
                    kept: self.census.kept,
                },
                realized_by_translations: self.realized_by_translations,
            },
            group: GroupReport {
                expr: self.expr.to_string(),
                atoms: self
                    .orbits
                    .representatives
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| AtomReport { id: i + 1, cell: c, kr_subtree: p.two_cells()[c].label.clone() })
                    .collect(),
            },
            disks,
        })
    }
}

/// One named check of [`verify_extension`].
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Verification {
    pub expr: String,
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// Whether every check whose name starts with `prefix` passed.
    pub fn group_passed(&self, prefix: &str) -> bool {
        self.checks.iter().filter(|c| c.name.starts_with(prefix)).all(|c| c.passed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("{given} atom groups given, the report has r = {r}")]
    AtomCount { given: usize, r: usize },
    #[error("atom groups must have positive order")]
    EmptyAtom,
}

/// Instantiates `W = (prod A_i) wr[Z_n x Z_nm] Z^2` with concrete cyclic
/// atoms and checks (a) the group axioms and exactness of
/// `1 -> Map -> W -> Z^2 -> 1` on samples, (b) the lattice sequence
/// `Z^2 -(q)-> Z^2 -> Z_n x Z_nm` with `q = diag(n, nm)`, and (c) the
/// kernel size `|prod A_i|^(n nm)` of the finite truncation.
pub fn verify_extension(report: &AnalysisReport, atoms: &[Cyclic]) -> Result<Verification, VerifyError> {
    verify_extension_with(report, atoms, Translation)
}

/// [`verify_extension`] with a custom shift action, for negative tests.
pub fn verify_extension_with<S: ShiftAction>(
    report: &AnalysisReport,
    atoms: &[Cyclic],
    action: S,
) -> Result<Verification, VerifyError> {
    let sym = &report.symmetry;
    if atoms.len() != sym.r {
        return Err(VerifyError::AtomCount { given: atoms.len(), r: sym.r });
    }
    if atoms.iter().any(|a| a.0 == 0) {
        return Err(VerifyError::EmptyAtom);
    }
    let (n, nm) = (sym.n, sym.n * sym.m);
    let base = Product(atoms.to_vec());
    let w = WreathProduct::with_action(base.clone(), n as usize, nm as usize, action).expect("positive grid");
    let mut checks = Vec::new();
    let mut check = |name: &str, passed: bool, detail: String| checks.push(Check { name: name.to_string(), passed, detail });

    // (a) samples: up to 16 maps times shifts in [-2, 2]^2
    let maps = sample_maps(&base, (n * nm) as usize, 16);
    let shifts: Vec<(i64, i64)> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a, b))).collect();
    let mut elems = Vec::new();
    for m in &maps {
        for &k in &shifts {
            elems.push(w.element(m.clone(), k).expect("sampled grid"));
        }
    }
    let e = w.identity();
    type El = WreathElement<Vec<u64>>;
    let mul = |x: &El, y: &El| -> El { w.multiply(x, y).expect("sampled grid") };
    let identity_ok = elems.iter().all(|x| mul(x, &e) == *x && mul(&e, x) == *x);
    check("a.identity", identity_ok, format!("{} elements", elems.len()));
    let inverse_ok = elems.iter().all(|x| {
        let xi = w.inverse(x).expect("sampled grid");
        mul(x, &xi) == e && mul(&xi, x) == e
    });
    check("a.inverse", inverse_ok, format!("{} elements", elems.len()));
    let stride = (elems.len() / 24).max(1);
    let sub: Vec<_> = elems.iter().step_by(stride).collect();
    let mut assoc_ok = true;
    for x in &sub {
        for y in &sub {
            let xy = mul(x, y);
            for z in &sub {
                if mul(&xy, z) != mul(x, &mul(y, z)) {
                    assoc_ok = false;
                }
            }
        }
    }
    check("a.associativity", assoc_ok, format!("{} triples", sub.len().pow(3)));
    let sig: Vec<_> = maps.iter().map(|m| w.sigma(m.clone()).expect("sampled grid")).collect();
    let injective = sig.iter().collect::<BTreeSet<_>>().len() == maps.len();
    let mut sigma_hom = true;
    for (a, sa) in maps.iter().zip(&sig) {
        for (b, sb) in maps.iter().zip(&sig) {
            let ab: Vec<_> = a.iter().zip(b).map(|(x, y)| base.op(x, y)).collect();
            if w.sigma(ab).expect("sampled grid") != mul(sa, sb) {
                sigma_hom = false;
            }
        }
    }
    check("a.sigma", injective && sigma_hom, format!("injective {injective}, homomorphism {sigma_hom}"));
    let proj_hom = sub.iter().all(|x| {
        sub.iter().all(|y| {
            let (p, q) = (w.proj(x), w.proj(y));
            w.proj(&mul(x, y)) == (p.0 + q.0, p.1 + q.1)
        })
    });
    let hit: BTreeSet<(i64, i64)> = elems.iter().map(|x| w.proj(x)).collect();
    let proj_onto = shifts.iter().all(|k| hit.contains(k));
    check("a.proj", proj_hom && proj_onto, format!("homomorphism {proj_hom}, onto sampled shifts {proj_onto}"));
    let exact = elems.iter().all(|x| (w.proj(x) == (0, 0)) == sig.contains(x)) && sig.iter().all(|x| w.proj(x) == (0, 0));
    check("a.exactness", exact, "ker(proj) = im(sigma) on samples".to_string());

    // (b) lattice sequence
    let q = IntMatrix::diagonal(&[n as i64, nm as i64]);
    let d = |x: i64, y: i64| (x.rem_euclid(n as i64), y.rem_euclid(nm as i64));
    let composite_zero = (-3..=3).all(|l| (-3..=3).all(|mu| d(n as i64 * l, nm as i64 * mu) == (0, 0)));
    let q_injective = q.determinant() != BigInt::from(0);
    let onto: BTreeSet<(i64, i64)> = (0..n as i64).flat_map(|x| (0..nm as i64).map(move |y| d(x, y))).collect();
    let d_onto = onto.len() as u64 == n * nm;
    let (bx, by) = (2 * n as i64, 2 * nm as i64);
    let exact_b = (-bx..=bx).all(|x| {
        (-by..=by).all(|y| (d(x, y) == (0, 0)) == (x % n as i64 == 0 && y % nm as i64 == 0))
    });
    let coker = cokernel_invariants(&q).two_factor_type();
    check("b.lattice", composite_zero && q_injective && d_onto && exact_b, format!("q = diag({n},{nm})"));
    let shown = coker.map_or_else(|| "not of two-factor type".to_string(), |(a, b)| format!("Z_{a} x Z_{b}"));
    check("b.cokernel", coker == Some((n, nm)), shown);

    // (c) finite truncation: shifts reduced mod (n, nm)
    let atom_order: u64 = atoms.iter().map(|a| a.0).product();
    let expected = atom_order.checked_pow((n * nm) as u32);
    let counted = w.all_maps(1 << 16).map(|all| {
        let mut kernel = 0u64;
        for m in &all {
            for a in 0..n as i64 {
                for b in 0..nm as i64 {
                    let x = w.element(m.clone(), (a, b)).expect("enumerated grid");
                    if d(w.proj(&x).0, w.proj(&x).1) == (0, 0) {
                        kernel += 1;
                    }
                }
            }
        }
        kernel
    });
    let kernel_ok = match (counted, expected) {
        (Some(c), Some(e)) => c == e,
        (None, Some(e)) => w.map_count() == Some(e),
        _ => false,
    };
    check("c.kernel", kernel_ok, {
        let show = |x: Option<u64>| x.map_or_else(|| "too many to count".to_string(), |v| v.to_string());
        format!("counted {}, expected {}", show(counted), show(expected))
    });
    let cells = sym.r as u64 * n * nm == report.special.two_cells as u64;
    check("c.cardinality", cells && sym.order as u64 == n * nm, format!("r n nm = {}", sym.r as u64 * n * nm));

    Ok(Verification { expr: report.group.expr.clone(), checks })
}

/// Deterministic sample of grids: all of them when there are at most
/// `limit`, otherwise the constant grids and single-entry perturbations.
fn sample_maps(base: &Product<Cyclic>, cells: usize, limit: usize) -> Vec<Vec<Vec<u64>>> {
    let elems = base.elements().unwrap_or_default();
    let total = (elems.len() as u128).checked_pow(cells as u32);
    if total.is_some_and(|t| t <= limit as u128) {
        let mut out: Vec<Vec<Vec<u64>>> = alloc::vec![Vec::new()];
        for _ in 0..cells {
            out = out
                .into_iter()
                .flat_map(|p| {
                    elems.iter().map(move |e| {
                        let mut q = p.clone();
                        q.push(e.clone());
                        q
                    })
                })
                .collect();
        }
        return out;
    }
    let mut out = BTreeSet::new();
    for e in &elems {
        out.insert(alloc::vec![e.clone(); cells]);
    }
    let id = base.identity();
    'outer: for pos in 0..cells {
        for e in &elems {
            if out.len() >= limit {
                break 'outer;
            }
            let mut g = alloc::vec![id.clone(); cells];
            g[pos] = e.clone();
            out.insert(g);
        }
    }
    out.into_iter().take(limit.max(elems.len())).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::fixtures::*;
    use crate::surface::VertexKind;
    use alloc::vec;

    #[test]
    fn expressions_render() {
        let atoms = |r: usize| (1..=r).map(|id| GroupExpr::Atom { id, kr_subtree: String::new() }).collect::<Vec<_>>();
        assert_eq!(GroupExpr::orbit_group(atoms(2), 1, 1).to_string(), "(A_1 x A_2) x Z^2");
        assert_eq!(GroupExpr::orbit_group(atoms(2), 1, 2).to_string(), "(A_1 x A_2) wr[Z_1 x Z_2] Z^2");
        assert_eq!(GroupExpr::orbit_group(atoms(1), 2, 4).to_string(), "A_1 wr[Z_2 x Z_4] Z^2");
        assert_eq!(GroupExpr::orbit_group(vec![], 1, 1).to_string(), "1 x Z^2");
    }

    #[test]
    fn preset_analyses() {
        for (p, q, n, m, r, cells) in [(1, 1, 1, 1, 2, [2, 4, 2]), (2, 1, 1, 2, 2, [4, 8, 4]), (2, 2, 2, 1, 2, [8, 16, 8])] {
            let a = analyze(cos_field(16, p, q, 1.0)).unwrap();
            assert_eq!((a.group.n(), a.group.m(), a.orbits.r), (n, m, r));
            assert_eq!(a.partition.counts(), cells);
            let rep = a.report().unwrap();
            assert_eq!(rep.special.level, "0");
            assert_eq!(rep.symmetry.r as u64 * n * n * m, cells[2] as u64);
        }
        let a = analyze(cos_field(16, 2, 1, 1.0)).unwrap();
        assert_eq!(a.expr.to_string(), "(A_1 x A_2) wr[Z_1 x Z_2] Z^2");
        let a = analyze(cos_field(16, 1, 1, 1.0)).unwrap();
        assert_eq!(a.expr.to_string(), "(A_1 x A_2) x Z^2");
    }

    #[test]
    fn height_like_field_is_rejected() {
        let err = analyze(cos_field(16, 1, 1, 0.3)).unwrap_err();
        assert_eq!(err, AnalysisError::NotATree(1));
        assert_eq!(err.class().exit_code(), 1);
        assert!(err.to_string().contains("KR-graph is not a tree"));
        let err = analyze(tetrahedron([0, 1, 2, 3])).unwrap_err();
        assert_eq!(err.code(), "not-a-torus");
    }

    #[test]
    fn disks_of_cos_cos() {
        let a = analyze(cos_field(16, 1, 1, 1.0)).unwrap();
        let mut kinds = Vec::new();
        for i in 1..=a.orbits.r {
            let d = extract_disk_field(&a, i).unwrap();
            assert_eq!(d.interior_critical.len(), 1);
            kinds.push(d.interior_critical[0].1.kind);
            assert!(d.boundary.len() >= 4);
        }
        kinds.sort();
        assert_eq!(kinds, vec![VertexKind::Minimum, VertexKind::Maximum]);
        assert_eq!(extract_disk_field(&a, 3).unwrap_err(), AnalysisError::DiskIndex { index: 3, r: 2 });
    }

    #[test]
    fn min_disk_of_z2_field() {
        let a = analyze(cos_field(16, 2, 1, 1.0)).unwrap();
        let mins: Vec<_> = (1..=a.orbits.r)
            .map(|i| extract_disk_field(&a, i).unwrap())
            .filter(|d| !a.partition.two_cells()[d.cell].above)
            .collect();
        assert_eq!(mins.len(), 1);
        assert_eq!(mins[0].interior_critical.len(), 1);
        assert_eq!(mins[0].interior_critical[0].1, VertexClass::MINIMUM);
    }

    #[test]
    fn extension_checks_pass_on_presets() {
        for (p, q) in [(1, 1), (2, 1), (2, 2)] {
            let rep = analyze(cos_field(16, p, q, 1.0)).unwrap().report().unwrap();
            for atoms in [[1, 1], [2, 2], [3, 2], [1, 3]] {
                let atoms: Vec<Cyclic> = atoms.iter().map(|&k| Cyclic(k)).collect();
                let v = verify_extension(&rep, &atoms).unwrap();
                assert!(v.passed(), "{:?}", v.checks);
            }
            assert_eq!(verify_extension(&rep, &[Cyclic(2)]), Err(VerifyError::AtomCount { given: 1, r: 2 }));
        }
    }

    #[test]
    fn z2_kernel_has_sixteen_maps() {
        let rep = analyze(cos_field(16, 2, 1, 1.0)).unwrap().report().unwrap();
        let v = verify_extension(&rep, &[Cyclic(2), Cyclic(2)]).unwrap();
        let c = v.checks.iter().find(|c| c.name == "c.kernel").unwrap();
        assert!(c.detail.contains("counted 16, expected 16"), "{}", c.detail);
    }

    struct OffByOne;
    impl ShiftAction for OffByOne {
        fn source(&self, n: usize, m: usize, i: usize, j: usize, k: (i64, i64)) -> (usize, usize) {
            Translation.source(n, m, i, j, (k.0 + 1, k.1 + 1))
        }
    }

    #[test]
    fn corrupted_shift_fails_check_a() {
        let rep = analyze(cos_field(16, 2, 1, 1.0)).unwrap().report().unwrap();
        let v = verify_extension_with(&rep, &[Cyclic(2), Cyclic(3)], OffByOne).unwrap();
        assert!(!v.group_passed("a."));
    }

    #[test]
    fn coordinates_confirm_translations() {
        let a = analyze(cos_field(16, 2, 2, 1.0)).unwrap();
        assert_eq!(a.realized_by_translations, Some(true));
    }
}
