//! Kronrod-Reeb trees of piecewise-linear functions on the torus.
//!
//! Given a scalar field on a triangulated torus whose Kronrod-Reeb graph is
//! a tree, this crate finds the special level component, the cell partition
//! it induces, the free symmetry group `Z_n x Z_nm` of that partition, and
//! the orbit group as an explicit wreath product
//! `(A_1 x ... x A_r) wr[Z_n x Z_nm] Z^2`.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, presets and
//! the command-line front end live in the `krtorus` crate.

#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

mod dsu;
pub mod homology;
pub mod level;
pub mod pipeline;
pub mod reeb;
pub mod special;
pub mod surface;
pub mod symmetry;
pub mod wreath;

pub use homology::{
    cellular_homology, cokernel_invariants, h1_action, smith_normal_form, ChainComplex, Cokernel,
    H1Basis, Homology, HomologyError, IntMatrix, SnfResult,
};
pub use level::{Level, ParseLevelError};
pub use pipeline::{
    analyze, extract_disk_field, verify_extension, verify_extension_with, Analysis, AnalysisError,
    AnalysisReport, Check, DiskField, DiskVertex, ErrorClass, GroupExpr, Verification, VerifyError,
};
pub use reeb::{compute_reeb, is_tree, ReebElement, ReebError, ReebGraph};
pub use special::{
    branch_chis, branch_euler, build_partition, find_special_vertex, CellPartition, PartitionError,
    SpecialVertexError,
};
pub use surface::{
    classify_vertex, total_index, validate_closed_orientable, ClosedSurface, SurfaceError,
    SurfaceField, SurfaceSummary, VertexClass, VertexKind,
};
pub use symmetry::{
    enumerate_cell_automorphisms, enumerate_symmetries, enumerate_symmetries_with_census,
    group_structure, index_orbits, CellAutomorphism, Census, OrbitTable, SymmetryError,
    SymmetryGroup,
};
pub use wreath::{
    tau_reindex, Cyclic, Group, Product, ShiftAction, Translation, WreathElement, WreathError,
    WreathProduct,
};
