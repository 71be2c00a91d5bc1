//! Free, level-preserving, orientation-preserving, homologically trivial
//! automorphisms of a cell partition, the `Z_n x Z_nm` structure of the group
//! they form, and the `D_ijk` indexing of the 2-cells.
//!
//! An automorphism of the embedded graph `V` is a bijection `phi` of darts
//! with `phi(alpha d) = alpha(phi d)` and `phi(sigma d) = sigma^e(phi d)`,
//! where `e = +1` for orientation-preserving maps and `-1` otherwise. Since
//! `V` is connected, the image of one dart determines `phi`, so trying every
//! image of a fixed seed dart finds them all.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::homology::{cokernel_invariants, H1Basis, HomologyError, IntMatrix};
use crate::special::CellPartition;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SymmetryError {
    #[error("symmetry set is not closed under composition")]
    NotClosed,
    #[error("symmetry group is not abelian")]
    NonAbelian,
    #[error("symmetry group has invariant factors {0:?}; at most two expected")]
    TooManyFactors(Vec<u64>),
    #[error("two group elements act identically on the 2-cells")]
    NotFaithful,
    #[error("orbit of 2-cell {0} has the wrong size")]
    UnequalOrbits(usize),
    #[error("empty element list")]
    Empty,
    #[error("automorphism does not commute with the boundary maps")]
    NotAChainMap,
    #[error(transparent)]
    Homology(#[from] HomologyError),
}

/// A cellular automorphism together with the dart map it comes from.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CellAutomorphism {
    pub darts: Vec<usize>,
    pub zero: Vec<usize>,
    /// Image 1-cell and whether its orientation is kept (+1) or reversed.
    pub one: Vec<(usize, i8)>,
    pub two: Vec<usize>,
    /// +1 when the surface orientation is preserved.
    pub orientation: i8,
}

impl CellAutomorphism {
    pub fn identity(p: &CellPartition) -> Self {
        let [z, o, t] = p.counts();
        CellAutomorphism {
            darts: (0..2 * o).collect(),
            zero: (0..z).collect(),
            one: (0..o).map(|a| (a, 1)).collect(),
            two: (0..t).collect(),
            orientation: 1,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.darts.iter().enumerate().all(|(i, &d)| i == d)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &CellAutomorphism) -> CellAutomorphism {
        CellAutomorphism {
            darts: other.darts.iter().map(|&d| self.darts[d]).collect(),
            zero: other.zero.iter().map(|&z| self.zero[z]).collect(),
            one: other.one.iter().map(|&(a, s)| (self.one[a].0, s * self.one[a].1)).collect(),
            two: other.two.iter().map(|&c| self.two[c]).collect(),
            orientation: self.orientation * other.orientation,
        }
    }

    pub fn inverse(&self) -> CellAutomorphism {
        let inv = |perm: &[usize]| {
            let mut out = alloc::vec![0; perm.len()];
            for (i, &j) in perm.iter().enumerate() {
                out[j] = i;
            }
            out
        };
        let mut one = alloc::vec![(0, 1); self.one.len()];
        for (a, &(b, s)) in self.one.iter().enumerate() {
            one[b] = (a, s);
        }
        CellAutomorphism {
            darts: inv(&self.darts),
            zero: inv(&self.zero),
            one,
            two: inv(&self.two),
            orientation: self.orientation,
        }
    }

    /// Image of a 1-chain.
    pub fn push_one_chain(&self, z: &[BigInt]) -> Vec<BigInt> {
        let mut out = alloc::vec![BigInt::zero(); z.len()];
        for (a, &(b, s)) in self.one.iter().enumerate() {
            out[b] += &z[a] * BigInt::from(s);
        }
        out
    }

    /// Whether some cell of some dimension is mapped to itself. A 1-cell
    /// mapped onto itself with reversed orientation counts as fixed.
    pub fn fixes_a_cell(&self) -> bool {
        self.zero.iter().enumerate().any(|(i, &j)| i == j)
            || self.one.iter().enumerate().any(|(i, &(j, _))| i == j)
            || self.two.iter().enumerate().any(|(i, &j)| i == j)
    }

    /// The map on cells commutes with both boundary matrices, with 2-cells
    /// carrying the orientation sign.
    pub fn is_chain_map(&self, p: &CellPartition) -> bool {
        let c = p.chain_complex();
        let (d1, d2) = (c.d1(), c.d2());
        for (a, &(b, s)) in self.one.iter().enumerate() {
            for z in 0..d1.rows() {
                // (phi0 d1)(a) at phi0(z) equals s * d1(b) at phi0(z)
                if d1.get(self.zero[z], b) * BigInt::from(s) != *d1.get(z, a) {
                    return false;
                }
            }
        }
        for (cell, &img) in self.two.iter().enumerate() {
            for (a, &(b, s)) in self.one.iter().enumerate() {
                if d2.get(b, img) * BigInt::from(s) != d2.get(a, cell) * BigInt::from(self.orientation) {
                    return false;
                }
            }
        }
        true
    }
}

/// Extends `seed -> image` to a dart map, if the rotation system allows.
fn propagate(p: &CellPartition, seed: usize, image: usize, orientation: i8) -> Option<Vec<usize>> {
    let nd = p.dart_count();
    let mut map: Vec<Option<usize>> = alloc::vec![None; nd];
    map[seed] = Some(image);
    let mut stack = alloc::vec![seed];
    let fwd = |d: usize| if orientation > 0 { p.sigma(d) } else { p.sigma_inv(d) };
    let back = |d: usize| if orientation > 0 { p.sigma_inv(d) } else { p.sigma(d) };
    while let Some(d) = stack.pop() {
        let x = map[d].unwrap();
        for (dd, xx) in [(p.alpha(d), p.alpha(x)), (p.sigma(d), fwd(x)), (p.sigma_inv(d), back(x))] {
            match map[dd] {
                Some(y) if y != xx => return None,
                Some(_) => {}
                None => {
                    map[dd] = Some(xx);
                    stack.push(dd);
                }
            }
        }
    }
    let map: Vec<usize> = map.into_iter().collect::<Option<_>>()?;
    let distinct: BTreeSet<usize> = map.iter().copied().collect();
    (distinct.len() == nd).then_some(map)
}

/// Cell maps induced by a dart map, or `None` when they are not
/// well-defined bijections or do not preserve the level data.
fn induce(p: &CellPartition, darts: Vec<usize>, orientation: i8) -> Option<CellAutomorphism> {
    let [nz, no, nt] = p.counts();
    let mut zero = alloc::vec![usize::MAX; nz];
    let mut two = alloc::vec![usize::MAX; nt];
    for (d, &x) in darts.iter().enumerate() {
        let z = p.dart_origin(d);
        let zx = p.dart_origin(x);
        if zero[z] != usize::MAX && zero[z] != zx {
            return None;
        }
        zero[z] = zx;
        // the face on the left goes to the face on the left, or on the
        // right when orientation is reversed
        let f = p.face_of_dart(d);
        let fx = if orientation > 0 { p.face_of_dart(x) } else { p.face_of_dart(p.alpha(x)) };
        if two[f] != usize::MAX && two[f] != fx {
            return None;
        }
        two[f] = fx;
    }
    let one: Vec<(usize, i8)> = (0..no).map(|a| (darts[2 * a] / 2, if darts[2 * a].is_multiple_of(2) { 1 } else { -1 })).collect();
    let is_perm = |v: &[usize]| v.iter().copied().collect::<BTreeSet<_>>().len() == v.len() && !v.contains(&usize::MAX);
    if !is_perm(&zero) || !is_perm(&two) {
        return None;
    }
    let zc = p.zero_cells();
    let tc = p.two_cells();
    if (0..nz).any(|z| zc[z].class != zc[zero[z]].class) || (0..nt).any(|c| tc[c].label != tc[two[c]].label) {
        return None;
    }
    Some(CellAutomorphism { darts, zero, one, two, orientation })
}

fn seed_dart(p: &CellPartition) -> usize {
    let (a, s) = p.two_cells()[0].boundary[0];
    2 * a + (s < 0) as usize
}

/// Every level-preserving cellular automorphism, in either orientation,
/// identity first, then ordered by the action on 2-cells.
pub fn enumerate_cell_automorphisms(p: &CellPartition) -> Result<Vec<CellAutomorphism>, SymmetryError> {
    let seed = seed_dart(p);
    let mut found: BTreeMap<(Vec<usize>, Vec<usize>), CellAutomorphism> = BTreeMap::new();
    for orientation in [1i8, -1] {
        for image in 0..p.dart_count() {
            let Some(darts) = propagate(p, seed, image, orientation) else { continue };
            let Some(a) = induce(p, darts, orientation) else { continue };
            if !a.is_chain_map(p) {
                return Err(SymmetryError::NotAChainMap);
            }
            found.insert((a.two.clone(), a.darts.clone()), a);
        }
    }
    Ok(found.into_values().collect())
}

/// How many candidates each filter removed.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Census {
    pub candidates: usize,
    pub orientation_reversing: usize,
    pub homologically_nontrivial: usize,
    pub not_free: usize,
    pub kept: usize,
}

/// The free, orientation-preserving, homologically trivial automorphisms
/// among the level-preserving ones, with a census of what was filtered.
pub fn enumerate_symmetries_with_census(p: &CellPartition) -> Result<(Vec<CellAutomorphism>, Census), SymmetryError> {
    let all = enumerate_cell_automorphisms(p)?;
    let basis = H1Basis::new(p.chain_complex());
    let mut census = Census { candidates: all.len(), ..Census::default() };
    let mut kept = Vec::new();
    for a in all {
        if a.orientation < 0 {
            census.orientation_reversing += 1;
            continue;
        }
        if !basis.action(|z| a.push_one_chain(z))?.is_identity() {
            census.homologically_nontrivial += 1;
            continue;
        }
        if !a.is_identity() && a.fixes_a_cell() {
            census.not_free += 1;
            continue;
        }
        kept.push(a);
    }
    census.kept = kept.len();
    let set: BTreeSet<&Vec<usize>> = kept.iter().map(|a| &a.darts).collect();
    for a in &kept {
        if !set.contains(&a.inverse().darts) || kept.iter().any(|b| !set.contains(&a.compose(b).darts)) {
            return Err(SymmetryError::NotClosed);
        }
    }
    Ok((kept, census))
}

pub fn enumerate_symmetries(p: &CellPartition) -> Result<Vec<CellAutomorphism>, SymmetryError> {
    enumerate_symmetries_with_census(p).map(|(v, _)| v)
}

/// A finite abelian group of automorphisms in the form `Z_n x Z_nm`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetryGroup {
    elements: Vec<CellAutomorphism>,
    table: Vec<Vec<usize>>,
    orders: Vec<usize>,
    n: u64,
    m: u64,
    l: usize,
    mm: usize,
    /// `exponents[x] = (a, b)` with `elements[x] = L^a M^b`.
    exponents: Vec<(u64, u64)>,
}

impl SymmetryGroup {
    pub fn elements(&self) -> &[CellAutomorphism] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }

    /// Invariant factors `(n, nm)`.
    pub fn invariant_factors(&self) -> (u64, u64) {
        (self.n, self.n * self.m)
    }

    /// Index of the generator `L` of order `n`.
    pub fn l(&self) -> usize {
        self.l
    }

    /// Index of the generator `M` of order `nm`.
    pub fn mgen(&self) -> usize {
        self.mm
    }

    /// `elements[x] ∘ elements[y]`.
    pub fn product(&self, x: usize, y: usize) -> usize {
        self.table[x][y]
    }

    pub fn element_order(&self, x: usize) -> usize {
        self.orders[x]
    }

    pub fn exponents(&self, x: usize) -> (u64, u64) {
        self.exponents[x]
    }

    /// Index of `L^a M^b`.
    pub fn element(&self, a: u64, b: u64) -> usize {
        let (a, b) = (a % self.n, b % (self.n * self.m));
        self.exponents.iter().position(|&e| e == (a, b)).unwrap()
    }
}

fn power(table: &[Vec<usize>], x: usize, k: u64) -> usize {
    (0..k).fold(0, |acc, _| table[x][acc])
}

/// Checks the group axioms on the given automorphisms and finds `n`, `m`
/// and generators `L`, `M`.
pub fn group_structure(elems: &[CellAutomorphism]) -> Result<SymmetryGroup, SymmetryError> {
    let mut elements = elems.to_vec();
    elements.sort_by(|a, b| (&a.two, &a.darts).cmp(&(&b.two, &b.darts)));
    elements.dedup();
    if elements.is_empty() {
        return Err(SymmetryError::Empty);
    }
    if !elements[0].is_identity() {
        elements.sort_by_key(|a| !a.is_identity());
        if !elements[0].is_identity() {
            return Err(SymmetryError::NotClosed);
        }
    }
    let index: BTreeMap<&Vec<usize>, usize> = elements.iter().enumerate().map(|(i, a)| (&a.darts, i)).collect();
    let twos: BTreeSet<&Vec<usize>> = elements.iter().map(|a| &a.two).collect();
    if twos.len() != elements.len() {
        return Err(SymmetryError::NotFaithful);
    }
    let k = elements.len();
    let mut table = alloc::vec![alloc::vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            table[i][j] = *index.get(&elements[i].compose(&elements[j]).darts).ok_or(SymmetryError::NotClosed)?;
        }
    }
    for i in 0..k {
        for j in 0..i {
            if table[i][j] != table[j][i] {
                return Err(SymmetryError::NonAbelian);
            }
        }
    }
    let orders: Vec<usize> = (0..k)
        .map(|x| {
            let mut y = x;
            let mut o = 1;
            while y != 0 {
                y = table[x][y];
                o += 1;
            }
            o
        })
        .collect();

    // greedy generating set
    let mut gens: Vec<usize> = Vec::new();
    let mut span: BTreeSet<usize> = BTreeSet::from([0]);
    for x in 0..k {
        if span.contains(&x) {
            continue;
        }
        gens.push(x);
        let mut frontier: Vec<usize> = span.iter().copied().collect();
        while let Some(y) = frontier.pop() {
            for &gx in &gens {
                let z = table[gx][y];
                if span.insert(z) {
                    frontier.push(z);
                }
            }
        }
    }

    // relations: ord_i e_i, plus differences of box vectors with equal images
    let mut relations: Vec<Vec<i64>> = Vec::new();
    for (i, &gx) in gens.iter().enumerate() {
        let mut r = alloc::vec![0i64; gens.len()];
        r[i] = orders[gx] as i64;
        relations.push(r);
    }
    let mut first_seen: BTreeMap<usize, Vec<i64>> = BTreeMap::new();
    let mut coords = alloc::vec![0i64; gens.len()];
    loop {
        let img = gens.iter().zip(&coords).fold(0, |acc, (&gx, &c)| table[power(&table, gx, c as u64)][acc]);
        match first_seen.get(&img) {
            Some(prev) => relations.push(coords.iter().zip(prev).map(|(a, b)| a - b).collect()),
            None => {
                first_seen.insert(img, coords.clone());
            }
        }
        // odometer over the box
        let mut i = 0;
        while i < gens.len() {
            coords[i] += 1;
            if coords[i] < orders[gens[i]] as i64 {
                break;
            }
            coords[i] = 0;
            i += 1;
        }
        if i == gens.len() {
            break;
        }
    }
    let mut rel = IntMatrix::zeros(gens.len(), relations.len());
    for (j, r) in relations.iter().enumerate() {
        for (i, &x) in r.iter().enumerate() {
            rel.set(i, j, BigInt::from(x));
        }
    }
    let factors: Vec<u64> = cokernel_invariants(&rel).factors.iter().map(|x| x.to_u64().unwrap()).collect();
    let (n, nm) = match factors.as_slice() {
        [] => (1, 1),
        [d] => (1, *d),
        [d1, d2] => (*d1, *d2),
        _ => return Err(SymmetryError::TooManyFactors(factors)),
    };

    // lexicographically first (L, M) with distinct L^a M^b
    let mut choice = None;
    'search: for l in (0..k).filter(|&x| orders[x] as u64 == n) {
        for mm in (0..k).filter(|&x| orders[x] as u64 == nm) {
            let mut exps = alloc::vec![None; k];
            let mut ok = true;
            for a in 0..n {
                for b in 0..nm {
                    let x = table[power(&table, l, a)][power(&table, mm, b)];
                    if exps[x].replace((a, b)).is_some() {
                        ok = false;
                    }
                }
            }
            if ok && exps.iter().all(Option::is_some) {
                choice = Some((l, mm, exps.into_iter().map(Option::unwrap).collect::<Vec<_>>()));
                break 'search;
            }
        }
    }
    let (l, mm, exponents) = choice.ok_or(SymmetryError::NotClosed)?;
    Ok(SymmetryGroup { elements, table, orders, n, m: nm / n, l, mm, exponents })
}

/// `D_ijk = M^k L^j D_i00`, with representatives `D_i00` the lowest cell of
/// each orbit.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrbitTable {
    pub r: usize,
    pub n: u64,
    pub nm: u64,
    /// `index[cell] = [i, j, k]` with `i` counted from 1.
    pub index: Vec<[u64; 3]>,
    /// Representative 2-cell of each orbit.
    pub representatives: Vec<usize>,
}

impl OrbitTable {
    /// The cell `D_ijk`, `i` counted from 1.
    pub fn cell(&self, i: usize, j: u64, k: u64) -> Option<usize> {
        let key = [i as u64, j % self.n, k % self.nm];
        self.index.iter().position(|x| *x == key)
    }
}

pub fn index_orbits(g: &SymmetryGroup, p: &CellPartition) -> Result<OrbitTable, SymmetryError> {
    let nt = p.two_cells().len();
    let (n, nm) = g.invariant_factors();
    let mut index: Vec<Option<[u64; 3]>> = alloc::vec![None; nt];
    let mut representatives = Vec::new();
    for c in 0..nt {
        if index[c].is_some() {
            continue;
        }
        representatives.push(c);
        let i = representatives.len() as u64;
        for j in 0..n {
            for k in 0..nm {
                let x = g.element(j, k);
                let img = g.elements()[x].two[c];
                if index[img].replace([i, j, k]).is_some() {
                    return Err(SymmetryError::UnequalOrbits(c));
                }
            }
        }
    }
    let index: Vec<[u64; 3]> = index.into_iter().collect::<Option<_>>().ok_or(SymmetryError::UnequalOrbits(0))?;
    let r = representatives.len();
    if r as u64 * n * nm != nt as u64 {
        return Err(SymmetryError::UnequalOrbits(0));
    }
    // equivariance: L^a M^b D_ijk = D_{i, j+a, k+b}
    let table = OrbitTable { r, n, nm, index, representatives };
    for a in 0..n {
        for b in 0..nm {
            let x = &g.elements()[g.element(a, b)];
            for c in 0..nt {
                let [i, j, k] = table.index[c];
                if table.index[x.two[c]] != [i, (j + a) % n, (k + b) % nm] {
                    return Err(SymmetryError::UnequalOrbits(c));
                }
            }
        }
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::homology::h1_action;
    use crate::reeb::compute_reeb;
    use crate::special::{build_partition, find_special_vertex};
    use crate::surface::fixtures::*;
    use crate::surface::ClosedSurface;

    fn partition(p: i64, q: i64) -> CellPartition {
        let s = ClosedSurface::new(cos_field(16, p, q, 1.0)).unwrap();
        let g = compute_reeb(&s).unwrap();
        let v = find_special_vertex(&s, &g).unwrap();
        build_partition(&s, &g, v).unwrap()
    }

    /// Oracle: every permutation of the 2-cells that preserves labels and
    /// sends cells sharing a 1-cell to cells sharing a 1-cell the same way,
    /// enumerated by brute force, must contain the 2-cell action of every
    /// symmetry found.
    fn label_preserving_two_cell_perms(p: &CellPartition) -> BTreeSet<Vec<usize>> {
        let t = p.two_cells().len();
        let mut adj: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for oc in p.one_cells() {
            *adj.entry((oc.upper, oc.lower)).or_default() += 1;
        }
        let mut out = BTreeSet::new();
        let mut perm: Vec<usize> = (0..t).collect();
        permutations(&mut perm, 0, &mut |pm| {
            let labels = (0..t).all(|c| p.two_cells()[c].label == p.two_cells()[pm[c]].label);
            let adjacency = adj.iter().all(|(&(u, l), &cnt)| adj.get(&(pm[u], pm[l])) == Some(&cnt));
            if labels && adjacency {
                out.insert(pm.to_vec());
            }
        });
        out
    }

    fn permutations(v: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
        if k == v.len() {
            f(v);
            return;
        }
        for i in k..v.len() {
            v.swap(k, i);
            permutations(v, k + 1, f);
            v.swap(k, i);
        }
    }

    fn check(p: &CellPartition, order: usize, n: u64, m: u64, r: usize) -> SymmetryGroup {
        let syms = enumerate_symmetries(p).unwrap();
        assert_eq!(syms.len(), order);
        let oracle = label_preserving_two_cell_perms(p);
        for a in &syms {
            assert!(oracle.contains(&a.two));
            assert!(h1_action(p, a).unwrap().is_identity());
            assert!(a.is_chain_map(p));
        }
        let g = group_structure(&syms).unwrap();
        assert_eq!((g.n(), g.m()), (n, m));
        assert!(g.elements()[0].is_identity());
        assert_eq!(g.element_order(g.l()) as u64, n);
        assert_eq!(g.element_order(g.mgen()) as u64, n * m);
        let [z, o, t] = p.counts();
        for c in [z, o, t] {
            assert_eq!(c % order, 0);
        }
        assert_eq!((z / order) as i64 - (o / order) as i64 + (t / order) as i64, 0);
        let table = index_orbits(&g, p).unwrap();
        assert_eq!(table.r, r);
        assert_eq!(table.r as u64 * n * n * m, t as u64);
        g
    }

    #[test]
    fn cos_cos_has_only_the_identity() {
        let p = partition(1, 1);
        let g = check(&p, 1, 1, 1, 2);
        assert_eq!(index_orbits(&g, &p).unwrap().index, alloc::vec![[1, 0, 0], [2, 0, 0]]);
    }

    #[test]
    fn z2_field_has_a_half_translation() {
        let p = partition(2, 1);
        let g = check(&p, 2, 1, 2, 2);
        assert!(g.elements()[g.l()].is_identity());
        let t = index_orbits(&g, &p).unwrap();
        for i in 1..=2 {
            let c0 = t.cell(i, 0, 0).unwrap();
            let c1 = t.cell(i, 0, 1).unwrap();
            assert_eq!(g.elements()[g.mgen()].two[c0], c1);
        }
    }

    #[test]
    fn z2xz2_field_has_two_half_translations() {
        let p = partition(2, 2);
        let g = check(&p, 4, 2, 1, 2);
        let t = index_orbits(&g, &p).unwrap();
        assert_eq!(t.representatives.len(), 2);
    }

    #[test]
    fn orientation_reversing_maps_act_with_determinant_minus_one() {
        let p = partition(1, 1);
        let all = enumerate_cell_automorphisms(&p).unwrap();
        let reflections: Vec<_> = all.iter().filter(|a| a.orientation < 0).collect();
        assert!(!reflections.is_empty());
        for a in reflections {
            assert_eq!(h1_action(&p, a).unwrap().determinant(), BigInt::from(-1));
        }
    }

    #[test]
    fn h1_action_is_functorial() {
        let p = partition(2, 1);
        let all = enumerate_cell_automorphisms(&p).unwrap();
        for a in &all {
            for b in &all {
                let ab = h1_action(&p, &a.compose(b)).unwrap();
                assert_eq!(ab, h1_action(&p, a).unwrap().mul(&h1_action(&p, b).unwrap()));
            }
        }
    }

    #[test]
    fn candidate_set_is_a_group() {
        for (a, b) in [(1, 1), (2, 1), (2, 2)] {
            let p = partition(a, b);
            let all = enumerate_cell_automorphisms(&p).unwrap();
            let set: BTreeSet<&Vec<usize>> = all.iter().map(|x| &x.darts).collect();
            for x in &all {
                assert!(set.contains(&x.inverse().darts));
                assert!(x.compose(&x.inverse()).is_identity());
                for y in &all {
                    assert!(set.contains(&x.compose(y).darts));
                }
            }
        }
    }

    #[test]
    fn trivial_group_structure() {
        let p = partition(1, 1);
        let g = group_structure(&[CellAutomorphism::identity(&p)]).unwrap();
        assert_eq!((g.n(), g.m(), g.order()), (1, 1, 1));
        assert_eq!(group_structure(&[]), Err(SymmetryError::Empty));
    }

    #[test]
    fn non_abelian_set_is_rejected() {
        // all level-preserving maps of the cos + cos partition in both
        // orientations form a dihedral-type group
        let p = partition(2, 2);
        let all = enumerate_cell_automorphisms(&p).unwrap();
        let res = group_structure(&all);
        assert!(matches!(res, Err(SymmetryError::NonAbelian) | Err(SymmetryError::TooManyFactors(_))));
    }
}
