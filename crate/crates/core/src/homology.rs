//! Exact integer linear algebra: Smith normal form, cokernels, and cellular
//! homology of 2-dimensional chain complexes.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::special::CellPartition;
use crate::symmetry::CellAutomorphism;

/// Dense integer matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: alloc::vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = BigInt::one();
        }
        m
    }

    /// Panics if `entries.len() != rows * cols`.
    pub fn from_i64(rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "entry count does not match shape");
        IntMatrix { rows, cols, data: entries.iter().map(|&x| BigInt::from(x)).collect() }
    }

    pub fn from_rows(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let flat: Vec<i64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
        Self::from_i64(rows.len(), cols, &flat)
    }

    pub fn diagonal(entries: &[i64]) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, &x) in entries.iter().enumerate() {
            m.data[i * n + i] = BigInt::from(x);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn add_at(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.cols + j] += v;
    }

    pub fn entries(&self) -> &[BigInt] {
        &self.data
    }

    pub fn column(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = IntMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, v.len(), "shape mismatch in product");
        (0..self.rows)
            .map(|i| (0..self.cols).fold(BigInt::zero(), |acc, j| acc + self.get(i, j) * &v[j]))
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols
            && (0..self.rows).all(|i| (0..self.cols).all(|j| *self.get(i, j) == BigInt::from((i == j) as i64)))
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k * n + k].is_zero() {
                let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                    return BigInt::zero();
                };
                for j in 0..n {
                    a.swap(k * n + j, p * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i * n + j] * &a[k * n + k] - &a[i * n + k] * &a[k * n + j]) / &prev;
                    a[i * n + j] = v;
                }
            }
            prev = a[k * n + k].clone();
        }
        sign * &a[n * n - 1]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    /// row[dst] += q * row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        for j in 0..self.cols {
            let v = q * &self.data[src * self.cols + j];
            self.data[dst * self.cols + j] += v;
        }
    }

    /// col[dst] += q * col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        for i in 0..self.rows {
            let v = q * &self.data[i * self.cols + src];
            self.data[i * self.cols + dst] += v;
        }
    }

    fn negate_row(&mut self, r: usize) {
        for j in 0..self.cols {
            let v = -core::mem::take(&mut self.data[r * self.cols + j]);
            self.data[r * self.cols + j] = v;
        }
    }

    fn negate_col(&mut self, c: usize) {
        for i in 0..self.rows {
            let v = -core::mem::take(&mut self.data[i * self.cols + c]);
            self.data[i * self.cols + c] = v;
        }
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    /// `[[a,b],[c,d]]`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for j in 0..self.cols {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

/// `U * A * V = D` with `U`, `V` unimodular and `D` diagonal,
/// `d_1 | d_2 | ... | d_rank`, all positive.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SnfResult {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub u_inv: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SnfResult {
    /// Nonzero diagonal entries.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d.get(i, i).clone()).collect()
    }
}

struct SnfWork {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
    v_inv: IntMatrix,
}

impl SnfWork {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
        self.v_inv.swap_rows(i, j);
    }

    /// row[dst] += q row[src]
    fn add_row(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_row(dst, src, q);
        self.u.add_row(dst, src, q);
        self.u_inv.add_col(src, dst, &-q);
    }

    /// col[dst] += q col[src]
    fn add_col(&mut self, dst: usize, src: usize, q: &BigInt) {
        self.a.add_col(dst, src, q);
        self.v.add_col(dst, src, q);
        self.v_inv.add_row(src, dst, &-q);
    }

    fn negate_row(&mut self, r: usize) {
        self.a.negate_row(r);
        self.u.negate_row(r);
        self.u_inv.negate_col(r);
    }

    /// Smallest nonzero |entry| of the trailing block, ties by row-major position.
    fn block_pivot(&self, k: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in k..self.a.rows {
            for j in k..self.a.cols {
                let x = self.a.get(i, j);
                if x.is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| x.abs() < self.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

/// Smith normal form with a deterministic pivot rule.
pub fn smith_normal_form(m: &IntMatrix) -> SnfResult {
    let (rows, cols) = (m.rows, m.cols);
    let mut w = SnfWork {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
        v_inv: IntMatrix::identity(cols),
    };
    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = w.block_pivot(k) else { break };
        w.swap_rows(k, pi);
        w.swap_cols(k, pj);
        loop {
            let p = w.a.get(k, k).clone();
            for i in k + 1..rows {
                if !w.a.get(i, k).is_zero() {
                    let q = w.a.get(i, k).div_floor(&p);
                    w.add_row(i, k, &-q);
                }
            }
            for j in k + 1..cols {
                if !w.a.get(k, j).is_zero() {
                    let q = w.a.get(k, j).div_floor(&p);
                    w.add_col(j, k, &-q);
                }
            }
            // leftover remainders are smaller than the pivot: move the smallest in
            let mut best: Option<(usize, usize)> = None;
            let cand = (k + 1..cols).map(|j| (k, j)).chain((k + 1..rows).map(|i| (i, k)));
            for (i, j) in cand {
                let x = w.a.get(i, j);
                if !x.is_zero() && best.is_none_or(|(bi, bj)| x.abs() < w.a.get(bi, bj).abs()) {
                    best = Some((i, j));
                }
            }
            if let Some((i, j)) = best {
                if i == k {
                    w.swap_cols(k, j);
                } else {
                    w.swap_rows(k, i);
                }
                continue;
            }
            let p = w.a.get(k, k).clone();
            let bad = (k + 1..rows).find(|&i| (k + 1..cols).any(|j| !w.a.get(i, j).is_multiple_of(&p)));
            match bad {
                Some(i) => w.add_row(k, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a.get(k, k).is_negative() {
            w.negate_row(k);
        }
        rank = k + 1;
    }
    SnfResult { u: w.u, d: w.a, v: w.v, u_inv: w.u_inv, v_inv: w.v_inv, rank }
}

/// Structure of `Z^rows / (column span of A)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    /// Invariant factors greater than one, ascending in the divisibility chain.
    pub factors: Vec<BigInt>,
    pub free_rank: usize,
}

impl Cokernel {
    /// `(n, nm)` for a finite quotient with at most two invariant factors,
    /// padding with ones.
    pub fn two_factor_type(&self) -> Option<(u64, u64)> {
        if self.free_rank != 0 || self.factors.len() > 2 {
            return None;
        }
        let mut f: Vec<u64> = self.factors.iter().map(|x| x.to_u64()).collect::<Option<_>>()?;
        while f.len() < 2 {
            f.insert(0, 1);
        }
        Some((f[0], f[1]))
    }

    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.factors.iter().fold(BigInt::one(), |acc, x| acc * x))
    }
}

pub fn cokernel_invariants(a: &IntMatrix) -> Cokernel {
    let snf = smith_normal_form(a);
    Cokernel {
        factors: snf.invariant_factors().into_iter().filter(|d| !d.is_one()).collect(),
        free_rank: a.rows - snf.rank,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HomologyError {
    #[error("boundary matrices have incompatible shapes")]
    Shape,
    #[error("boundary of a boundary is not zero")]
    ChainCondition,
    #[error("chain is not a cycle")]
    NotACycle,
    #[error("chain map does not commute with the boundary")]
    NotAChainMap,
}

/// `C_2 --d2--> C_1 --d1--> C_0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    d1: IntMatrix,
    d2: IntMatrix,
}

impl ChainComplex {
    pub fn new(d1: IntMatrix, d2: IntMatrix) -> Result<Self, HomologyError> {
        if d1.cols != d2.rows {
            return Err(HomologyError::Shape);
        }
        if !d1.mul(&d2).is_zero() {
            return Err(HomologyError::ChainCondition);
        }
        Ok(ChainComplex { d1, d2 })
    }

    pub fn d1(&self) -> &IntMatrix {
        &self.d1
    }

    pub fn d2(&self) -> &IntMatrix {
        &self.d2
    }

    /// Cell counts in dimensions 0, 1, 2.
    pub fn counts(&self) -> [usize; 3] {
        [self.d1.rows, self.d1.cols, self.d2.cols]
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Homology {
    pub betti: [usize; 3],
    pub torsion: [Vec<BigInt>; 3],
}

pub fn cellular_homology(c: &ChainComplex) -> Homology {
    let [c0, c1, c2] = c.counts();
    let s1 = smith_normal_form(&c.d1);
    let s2 = smith_normal_form(&c.d2);
    let torsion = |s: &SnfResult| -> Vec<BigInt> { s.invariant_factors().into_iter().filter(|d| !d.is_one()).collect() };
    Homology {
        betti: [c0 - s1.rank, c1 - s1.rank - s2.rank, c2 - s2.rank],
        torsion: [torsion(&s1), torsion(&s2), Vec::new()],
    }
}

/// A basis of the free part of `H_1` and the coordinate map onto it.
#[derive(Debug, Clone)]
pub struct H1Basis {
    /// columns `rank1..` of `V1`: a basis of the cycles
    v1_inv: IntMatrix,
    rank1: usize,
    p: IntMatrix,
    rank2: usize,
    cycles: Vec<Vec<BigInt>>,
    d1: IntMatrix,
}

impl H1Basis {
    pub fn new(c: &ChainComplex) -> Self {
        let s1 = smith_normal_form(&c.d1);
        let rank1 = s1.rank;
        let n1 = c.d1.cols;
        let k = n1 - rank1;
        // boundaries in cycle coordinates
        let coords = s1.v_inv.mul(&c.d2);
        let mut x = IntMatrix::zeros(k, c.d2.cols);
        for i in 0..k {
            for j in 0..c.d2.cols {
                x.set(i, j, coords.get(rank1 + i, j).clone());
            }
        }
        let s2 = smith_normal_form(&x);
        let rank2 = s2.rank;
        let cycles = (rank2..k)
            .map(|col| {
                // z = Z * P^{-1}[:, col], Z = V1[:, rank1..]
                let pcol = s2.u_inv.column(col);
                (0..n1)
                    .map(|e| (0..k).fold(BigInt::zero(), |acc, i| acc + s1.v.get(e, rank1 + i) * &pcol[i]))
                    .collect()
            })
            .collect();
        H1Basis { v1_inv: s1.v_inv, rank1, p: s2.u, rank2, cycles, d1: c.d1.clone() }
    }

    pub fn rank(&self) -> usize {
        self.cycles.len()
    }

    /// Representative cycles of the free generators.
    pub fn cycles(&self) -> &[Vec<BigInt>] {
        &self.cycles
    }

    /// Free coordinates of the homology class of a 1-cycle.
    pub fn coordinates(&self, z: &[BigInt]) -> Result<Vec<BigInt>, HomologyError> {
        if !self.d1.mul_vec(z).iter().all(Zero::is_zero) {
            return Err(HomologyError::NotACycle);
        }
        let c = self.v1_inv.mul_vec(z);
        let w: Vec<BigInt> = c[self.rank1..].to_vec();
        let y = self.p.mul_vec(&w);
        Ok(y[self.rank2..].to_vec())
    }

    /// Matrix of a chain map on `C_1` acting on the free part of `H_1`.
    pub fn action(&self, map: impl Fn(&[BigInt]) -> Vec<BigInt>) -> Result<IntMatrix, HomologyError> {
        let r = self.rank();
        let mut m = IntMatrix::zeros(r, r);
        for (j, z) in self.cycles.iter().enumerate() {
            let col = self.coordinates(&map(z))?;
            for (i, x) in col.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }
}

/// Action of a cellular automorphism on `H_1` of the partition, in the
/// basis of [`H1Basis::new`] for the partition's chain complex.
pub fn h1_action(p: &CellPartition, a: &CellAutomorphism) -> Result<IntMatrix, HomologyError> {
    H1Basis::new(p.chain_complex()).action(|z| a.push_one_chain(z))
}

/// Renders a matrix as `diag(a,b,...)` when it is diagonal.
pub fn render_diagonal(d: &IntMatrix) -> String {
    use core::fmt::Write;
    let mut s = String::from("diag(");
    for i in 0..d.rows.min(d.cols) {
        if i > 0 {
            s.push(',');
        }
        let _ = write!(s, "{}", d.get(i, i));
    }
    s.push(')');
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    fn check_snf(a: &IntMatrix) -> SnfResult {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.mul(&s.u_inv).is_identity());
        assert!(s.v.mul(&s.v_inv).is_identity());
        assert_eq!(s.u.determinant().abs(), BigInt::one());
        assert_eq!(s.v.determinant().abs(), BigInt::one());
        for i in 0..a.rows {
            for j in 0..a.cols {
                if i != j || i >= s.rank {
                    assert!(s.d.get(i, j).is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        assert!(f.iter().all(|x| x.is_positive()));
        assert!(f.windows(2).all(|w| w[1].is_multiple_of(&w[0])));
        s
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check_snf(&IntMatrix::identity(2)).d, IntMatrix::diagonal(&[1, 1]));
        assert_eq!(check_snf(&IntMatrix::diagonal(&[2, 6])).d, IntMatrix::diagonal(&[2, 6]));
        assert_eq!(check_snf(&IntMatrix::from_rows(&[&[2, 2], &[0, 4]])).d, IntMatrix::diagonal(&[2, 4]));
        assert_eq!(check_snf(&IntMatrix::diagonal(&[6, 4])).d, IntMatrix::diagonal(&[2, 12]));
        let s = check_snf(&IntMatrix::from_rows(&[&[0, 0, 0], &[0, 3, 0]]));
        assert_eq!(s.rank, 1);
        check_snf(&IntMatrix::zeros(0, 3));
    }

    #[test]
    fn cokernel_examples() {
        assert_eq!(cokernel_invariants(&IntMatrix::diagonal(&[1, 1])).factors, Vec::<BigInt>::new());
        let c = cokernel_invariants(&IntMatrix::diagonal(&[2, 6]));
        assert_eq!(c.factors, ints(&[2, 6]));
        assert_eq!(c.two_factor_type(), Some((2, 6)));
        // Z^2 / <(2,1), (0,2)>: generated by e1 of order 4
        let c = cokernel_invariants(&IntMatrix::from_rows(&[&[2, 0], &[1, 2]]));
        assert_eq!(c.factors, ints(&[4]));
        assert_eq!(c.two_factor_type(), Some((1, 4)));
        let c = cokernel_invariants(&IntMatrix::from_rows(&[&[2], &[0]]));
        assert_eq!(c.free_rank, 1);
        assert_eq!(c.two_factor_type(), None);
    }

    #[test]
    fn determinant_matches_cofactor_expansion() {
        let m = IntMatrix::from_rows(&[&[2, -1, 0], &[1, 3, 4], &[0, 5, -2]]);
        // 2(3*-2 - 4*5) - (-1)(1*-2 - 0) + 0 = -52 - 2
        assert_eq!(m.determinant(), BigInt::from(-54));
        assert_eq!(IntMatrix::from_rows(&[&[0, 1], &[1, 0]]).determinant(), BigInt::from(-1));
        assert_eq!(IntMatrix::from_rows(&[&[1, 2], &[2, 4]]).determinant(), BigInt::zero());
    }

    /// Tetrahedron boundary as a simplicial chain complex.
    fn tetrahedron_complex() -> ChainComplex {
        let edges = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let faces = [[0, 1, 2], [0, 1, 3], [0, 2, 3], [1, 2, 3]];
        let mut d1 = IntMatrix::zeros(4, 6);
        for (e, &(a, b)) in edges.iter().enumerate() {
            d1.add_at(a, e, -1);
            d1.add_at(b, e, 1);
        }
        let mut d2 = IntMatrix::zeros(6, 4);
        for (f, face) in faces.iter().enumerate() {
            for (k, sign) in [(0, 1), (1, -1), (2, 1)] {
                let mut rest = face.to_vec();
                rest.remove(2 - k);
                let e = edges.iter().position(|&(a, b)| a == rest[0] && b == rest[1]).unwrap();
                d2.add_at(e, f, sign);
            }
        }
        ChainComplex::new(d1, d2).unwrap()
    }

    /// One vertex, edges a, b, one face with boundary a b a b^-1.
    fn klein_bottle() -> ChainComplex {
        ChainComplex::new(IntMatrix::zeros(1, 2), IntMatrix::from_rows(&[&[2], &[0]])).unwrap()
    }

    /// One vertex, edges a, b, one face with boundary a b a^-1 b^-1.
    fn torus() -> ChainComplex {
        ChainComplex::new(IntMatrix::zeros(1, 2), IntMatrix::zeros(2, 1)).unwrap()
    }

    #[test]
    fn homology_of_fixtures() {
        let h = cellular_homology(&tetrahedron_complex());
        assert_eq!(h.betti, [1, 0, 1]);
        assert!(h.torsion.iter().all(Vec::is_empty));
        let h = cellular_homology(&klein_bottle());
        assert_eq!(h.betti, [1, 1, 0]);
        assert_eq!(h.torsion[1], ints(&[2]));
        let h = cellular_homology(&torus());
        assert_eq!(h.betti, [1, 2, 1]);
    }

    #[test]
    fn chain_condition_is_checked() {
        let d1 = IntMatrix::from_rows(&[&[-1], &[1]]);
        let d2 = IntMatrix::from_rows(&[&[1]]);
        assert_eq!(ChainComplex::new(d1, d2), Err(HomologyError::ChainCondition));
    }

    #[test]
    fn h1_action_on_the_one_vertex_torus() {
        let b = H1Basis::new(&torus());
        assert_eq!(b.rank(), 2);
        let id = b.action(|z| z.to_vec()).unwrap();
        assert!(id.is_identity());
        // swapping a and b reverses orientation
        let swap = b.action(|z| vec![z[1].clone(), z[0].clone()]).unwrap();
        assert_eq!(swap.determinant(), BigInt::from(-1));
        // a -> a + b is a Dehn twist
        let twist = b.action(|z| vec![z[0].clone(), &z[0] + &z[1]]).unwrap();
        assert_eq!(twist.determinant(), BigInt::one());
        assert!(!twist.is_identity());
    }

    #[test]
    fn coordinates_reject_non_cycles() {
        let c = ChainComplex::new(IntMatrix::from_rows(&[&[-1, 0], &[1, 0]]), IntMatrix::zeros(2, 0)).unwrap();
        let b = H1Basis::new(&c);
        assert_eq!(b.coordinates(&ints(&[1, 0])), Err(HomologyError::NotACycle));
        assert_eq!(b.rank(), 1);
    }

    proptest! {
        #[test]
        fn snf_invariants_hold(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let a = IntMatrix::from_i64(rows, cols, &seed[..rows * cols]);
            check_snf(&a);
        }

        #[test]
        fn snf_is_deterministic(seed in proptest::collection::vec(-20i64..21, 9)) {
            let a = IntMatrix::from_i64(3, 3, &seed);
            prop_assert_eq!(smith_normal_form(&a), smith_normal_form(&a));
        }
    }
}
