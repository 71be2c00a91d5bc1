//! Sampled model fields on the `N x N` grid torus.
//!
//! Vertex `(i, j)` has id `j * N + i` and sits at `(i/N, j/N)`. Each square
//! is split along its `(i,j)-(i+1,j+1)` diagonal.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use krtorus_core::{Level, SurfaceField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// `cos 2 pi x + cos 2 pi y`
    TwoCell,
    /// `cos 4 pi x + cos 2 pi y`
    Z2Sym,
    /// `cos 4 pi x + cos 4 pi y`
    Z2xZ2Sym,
    /// `cos 2 pi y + 0.3 cos 2 pi x`, whose KR-graph has a cycle
    CyclicHeight,
}

impl Preset {
    pub const ALL: [Preset; 4] = [Preset::TwoCell, Preset::Z2Sym, Preset::Z2xZ2Sym, Preset::CyclicHeight];

    pub fn name(self) -> &'static str {
        match self {
            Preset::TwoCell => "two-cell",
            Preset::Z2Sym => "z2-sym",
            Preset::Z2xZ2Sym => "z2xz2-sym",
            Preset::CyclicHeight => "cyclic-height",
        }
    }

    pub fn formula(self) -> &'static str {
        match self {
            Preset::TwoCell => "cos(2 pi x) + cos(2 pi y)",
            Preset::Z2Sym => "cos(4 pi x) + cos(2 pi y)",
            Preset::Z2xZ2Sym => "cos(4 pi x) + cos(4 pi y)",
            Preset::CyclicHeight => "cos(2 pi y) + 0.3 cos(2 pi x)",
        }
    }

    /// `(a, p, b, q)` in `a cos(2 pi p x) + b cos(2 pi q y)`.
    fn coefficients(self) -> (f64, i64, f64, i64) {
        match self {
            Preset::TwoCell => (1.0, 1, 1.0, 1),
            Preset::Z2Sym => (1.0, 2, 1.0, 1),
            Preset::Z2xZ2Sym => (1.0, 2, 1.0, 2),
            Preset::CyclicHeight => (0.3, 1, 1.0, 1),
        }
    }

    pub fn sample(self, n: usize) -> SurfaceField {
        let (a, p, b, q) = self.coefficients();
        let n64 = n as i64;
        grid_field(n, |i, j| quantize(a * cos_turn(p * i as i64, n64) + b * cos_turn(q * j as i64, n64)))
    }
}

impl fmt::Display for Preset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown preset `{0}` (expected two-cell, z2-sym, z2xz2-sym or cyclic-height)")]
pub struct UnknownPreset(pub String);

impl FromStr for Preset {
    type Err = UnknownPreset;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Preset::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| UnknownPreset(s.to_string()))
    }
}

pub fn grid_triangles(n: usize) -> Vec<[usize; 3]> {
    let id = |i: usize, j: usize| (j % n) * n + (i % n);
    let mut tris = Vec::with_capacity(2 * n * n);
    for j in 0..n {
        for i in 0..n {
            tris.push([id(i, j), id(i + 1, j), id(i + 1, j + 1)]);
            tris.push([id(i, j), id(i + 1, j + 1), id(i, j + 1)]);
        }
    }
    tris
}

/// The grid torus with value `f(i, j)` at vertex `(i, j)`.
///
/// # Panics
/// If `n < 3`, where the grid is not a simplicial torus.
pub fn grid_field(n: usize, f: impl Fn(usize, usize) -> Level) -> SurfaceField {
    assert!(n >= 3, "grid size must be at least 3");
    let values = (0..n * n).map(|v| f(v % n, v / n)).collect();
    let coords = (0..n * n).map(|v| [(v % n) as f64 / n as f64, (v / n) as f64 / n as f64, 0.0]).collect();
    SurfaceField::new(values, grid_triangles(n))
        .and_then(|s| s.with_coords(coords))
        .expect("grid torus is well formed")
}

/// `cos(2 pi k / n)`, reduced to the first octant before evaluating, so
/// samples related by a symmetry of cosine are bit-identical.
pub fn cos_turn(k: i64, n: i64) -> f64 {
    let mut r = k.rem_euclid(n);
    if 2 * r > n {
        r = n - r;
    }
    if 4 * r == n {
        return 0.0;
    }
    // r in [0, n/2]; fold [n/4, n/2] onto [0, n/4] via cos(pi - t) = -cos t
    let (sign, twice) = if 4 * r > n { (-1.0, n - 2 * r) } else { (1.0, 2 * r) };
    sign * (PI * twice as f64 / n as f64).cos()
}

/// Rounds to 12 decimals and reads the result exactly.
pub fn quantize(x: f64) -> Level {
    let s = format!("{x:.12}");
    s.parse().expect("formatted float is a decimal")
}

#[cfg(test)]
mod tests {
    use super::*;
    use krtorus_core::{classify_vertex, total_index, ClosedSurface, VertexKind};

    #[test]
    fn names_round_trip() {
        for p in Preset::ALL {
            assert_eq!(p.name().parse::<Preset>().unwrap(), p);
        }
        assert!("torus".parse::<Preset>().is_err());
    }

    #[test]
    fn cos_symmetries_are_exact() {
        for n in [8, 12, 16, 20] {
            for k in 0..n {
                assert_eq!(cos_turn(k, n), cos_turn(-k, n));
                assert_eq!(cos_turn(n / 2 - k, n), -cos_turn(k, n));
                assert!((cos_turn(k, n) - (2.0 * PI * k as f64 / n as f64).cos()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn eight_grid_is_a_torus() {
        let s = Preset::TwoCell.sample(8);
        assert_eq!((s.vertex_count(), s.triangle_count()), (64, 128));
        let summary = krtorus_core::validate_closed_orientable(&s).unwrap();
        assert_eq!((summary.chi, summary.genus), (0, 1));
    }

    #[test]
    fn two_cell_classes() {
        let c = ClosedSurface::new(Preset::TwoCell.sample(16)).unwrap();
        assert_eq!(classify_vertex(&c, 0).kind, VertexKind::Maximum);
        let half = classify_vertex(&c, 8);
        assert_eq!((half.kind, half.multiplicity), (VertexKind::Saddle, 1));
        assert_eq!(total_index(&c), 0);
    }
}
