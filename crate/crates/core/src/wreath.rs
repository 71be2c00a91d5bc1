//! Wreath products `G wr[Z_n x Z_m] Z^2 = Map(Z_n x Z_m, G) ⋊ Z^2` with
//! `Z^2` acting on maps by grid shifts.
//!
//! Elements are pairs `(alpha, k)` of an `n x m` grid of base-group
//! elements and an unreduced shift `k` in `Z^2`, multiplied by
//! `(alpha, k)(beta, l) = (alpha * beta^k, k + l)`, where
//! `beta^k(i, j) = beta(i + k1 mod n, j + k2 mod m)`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Debug;

/// A group given by its operations.
pub trait Group {
    type Elem: Clone + Eq + Ord + Debug;

    fn identity(&self) -> Self::Elem;
    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn inverse(&self, a: &Self::Elem) -> Self::Elem;
    fn contains(&self, a: &Self::Elem) -> bool;

    /// All elements, for finite groups.
    fn elements(&self) -> Option<Vec<Self::Elem>> {
        None
    }

    fn order(&self) -> Option<u64> {
        self.elements().map(|e| e.len() as u64)
    }

    fn render(&self, a: &Self::Elem) -> String {
        format!("{a:?}")
    }
}

/// `Z_k` written additively on `0..k`. `Cyclic(1)` is the trivial group.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Cyclic(pub u64);

impl Group for Cyclic {
    type Elem = u64;

    fn identity(&self) -> u64 {
        0
    }

    fn op(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.0
    }

    fn inverse(&self, a: &u64) -> u64 {
        (self.0 - a % self.0) % self.0
    }

    fn contains(&self, a: &u64) -> bool {
        *a < self.0
    }

    fn elements(&self) -> Option<Vec<u64>> {
        Some((0..self.0).collect())
    }

    fn order(&self) -> Option<u64> {
        Some(self.0)
    }

    fn render(&self, a: &u64) -> String {
        format!("{a}")
    }
}

/// Direct product of finitely many groups of one type.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Product<G>(pub Vec<G>);

impl<G: Group> Group for Product<G> {
    type Elem = Vec<G::Elem>;

    fn identity(&self) -> Self::Elem {
        self.0.iter().map(G::identity).collect()
    }

    fn op(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.0.iter().zip(a.iter().zip(b)).map(|(g, (x, y))| g.op(x, y)).collect()
    }

    fn inverse(&self, a: &Self::Elem) -> Self::Elem {
        self.0.iter().zip(a).map(|(g, x)| g.inverse(x)).collect()
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.len() == self.0.len() && self.0.iter().zip(a).all(|(g, x)| g.contains(x))
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let mut out: Vec<Self::Elem> = alloc::vec![Vec::new()];
        for g in &self.0 {
            let es = g.elements()?;
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    es.iter().map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e.clone());
                        p
                    })
                })
                .collect();
        }
        Some(out)
    }

    fn order(&self) -> Option<u64> {
        self.0.iter().try_fold(1u64, |acc, g| g.order().and_then(|o| acc.checked_mul(o)))
    }

    fn render(&self, a: &Self::Elem) -> String {
        let parts: Vec<String> = self.0.iter().zip(a).map(|(g, x)| g.render(x)).collect();
        format!("<{}>", parts.join(","))
    }
}

/// How a shift reindexes a grid: `result(i, j) = alpha(source(i, j, k))`.
pub trait ShiftAction {
    fn source(&self, n: usize, m: usize, i: usize, j: usize, k: (i64, i64)) -> (usize, usize);
}

/// The grid translation `(i + k1 mod n, j + k2 mod m)`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Translation;

impl ShiftAction for Translation {
    fn source(&self, n: usize, m: usize, i: usize, j: usize, k: (i64, i64)) -> (usize, usize) {
        ((i as i64 + k.0).rem_euclid(n as i64) as usize, (j as i64 + k.1).rem_euclid(m as i64) as usize)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WreathError {
    #[error("grid has {got} entries, expected {expected}")]
    GridSize { expected: usize, got: usize },
    #[error("grid entry {0} is not an element of the base group")]
    NotInBase(usize),
    #[error("family entry ({i},{j},{k}) is missing")]
    MissingFamily { i: usize, j: u64, k: u64 },
    #[error("grid dimensions must be positive")]
    EmptyGrid,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WreathElement<E> {
    /// Row-major `n x m` grid.
    pub grid: Vec<E>,
    pub shift: (i64, i64),
}

#[derive(Debug, Clone)]
pub struct WreathProduct<G, S = Translation> {
    base: G,
    n: usize,
    m: usize,
    action: S,
}

impl<G: Group> WreathProduct<G, Translation> {
    pub fn new(base: G, n: usize, m: usize) -> Result<Self, WreathError> {
        Self::with_action(base, n, m, Translation)
    }
}

impl<G: Group, S: ShiftAction> WreathProduct<G, S> {
    pub fn with_action(base: G, n: usize, m: usize, action: S) -> Result<Self, WreathError> {
        if n == 0 || m == 0 {
            return Err(WreathError::EmptyGrid);
        }
        Ok(WreathProduct { base, n, m, action })
    }

    pub fn base(&self) -> &G {
        &self.base
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.m)
    }

    fn check_grid(&self, grid: &[G::Elem]) -> Result<(), WreathError> {
        if grid.len() != self.n * self.m {
            return Err(WreathError::GridSize { expected: self.n * self.m, got: grid.len() });
        }
        match grid.iter().position(|x| !self.base.contains(x)) {
            Some(p) => Err(WreathError::NotInBase(p)),
            None => Ok(()),
        }
    }

    pub fn element(&self, grid: Vec<G::Elem>, shift: (i64, i64)) -> Result<WreathElement<G::Elem>, WreathError> {
        self.check_grid(&grid)?;
        Ok(WreathElement { grid, shift })
    }

    pub fn identity(&self) -> WreathElement<G::Elem> {
        WreathElement { grid: alloc::vec![self.base.identity(); self.n * self.m], shift: (0, 0) }
    }

    /// `alpha^k`.
    pub fn shift_action(&self, alpha: &[G::Elem], k: (i64, i64)) -> Result<Vec<G::Elem>, WreathError> {
        self.check_grid(alpha)?;
        Ok(self.shift_unchecked(alpha, k))
    }

    fn shift_unchecked(&self, alpha: &[G::Elem], k: (i64, i64)) -> Vec<G::Elem> {
        let mut out = Vec::with_capacity(alpha.len());
        for i in 0..self.n {
            for j in 0..self.m {
                let (si, sj) = self.action.source(self.n, self.m, i, j, k);
                out.push(alpha[si * self.m + sj].clone());
            }
        }
        out
    }

    fn pointwise(&self, a: &[G::Elem], b: &[G::Elem]) -> Vec<G::Elem> {
        a.iter().zip(b).map(|(x, y)| self.base.op(x, y)).collect()
    }

    pub fn multiply(
        &self,
        x: &WreathElement<G::Elem>,
        y: &WreathElement<G::Elem>,
    ) -> Result<WreathElement<G::Elem>, WreathError> {
        self.check_grid(&x.grid)?;
        self.check_grid(&y.grid)?;
        let shifted = self.shift_unchecked(&y.grid, x.shift);
        Ok(WreathElement {
            grid: self.pointwise(&x.grid, &shifted),
            shift: (x.shift.0 + y.shift.0, x.shift.1 + y.shift.1),
        })
    }

    /// `((alpha^-1)^(-k), -k)`.
    pub fn inverse(&self, x: &WreathElement<G::Elem>) -> Result<WreathElement<G::Elem>, WreathError> {
        self.check_grid(&x.grid)?;
        let inv: Vec<G::Elem> = x.grid.iter().map(|e| self.base.inverse(e)).collect();
        let k = (-x.shift.0, -x.shift.1);
        Ok(WreathElement { grid: self.shift_unchecked(&inv, k), shift: k })
    }

    /// The inclusion `alpha -> (alpha, (0, 0))`.
    pub fn sigma(&self, alpha: Vec<G::Elem>) -> Result<WreathElement<G::Elem>, WreathError> {
        self.element(alpha, (0, 0))
    }

    /// The projection onto `Z^2`.
    pub fn proj(&self, x: &WreathElement<G::Elem>) -> (i64, i64) {
        x.shift
    }

    /// `|Map(Z_n x Z_m, G)|`, if finite and representable.
    pub fn map_count(&self) -> Option<u64> {
        let o = self.base.order()?;
        o.checked_pow(u32::try_from(self.n * self.m).ok()?)
    }

    /// Every grid, for finite base groups with at most `limit` grids.
    pub fn all_maps(&self, limit: u64) -> Option<Vec<Vec<G::Elem>>> {
        if self.map_count()? > limit {
            return None;
        }
        let es = self.base.elements()?;
        let mut out: Vec<Vec<G::Elem>> = alloc::vec![Vec::new()];
        for _ in 0..self.n * self.m {
            out = out
                .into_iter()
                .flat_map(|prefix| {
                    es.iter().map(move |e| {
                        let mut p = prefix.clone();
                        p.push(e.clone());
                        p
                    })
                })
                .collect();
        }
        Some(out)
    }

    /// `(grid; (k1,k2))` with the grid row-major.
    pub fn render(&self, x: &WreathElement<G::Elem>) -> String {
        let rows: Vec<String> = (0..self.n)
            .map(|i| {
                let row: Vec<String> = (0..self.m).map(|j| self.base.render(&x.grid[i * self.m + j])).collect();
                format!("[{}]", row.join(","))
            })
            .collect();
        format!("([{}]; ({},{}))", rows.join(","), x.shift.0, x.shift.1)
    }
}

/// Reindexes a family `h_ijk`, `i` in `1..=r`, `(j, k)` in `Z_n x Z_nm`,
/// into a map `Z_n x Z_nm -> prod_i S_i00` by transporting each entry to
/// its orbit representative: `tau(h)(j, k) = (transport(i, j, k, h_ijk))_i`.
/// The grid is row-major in `(j, k)`.
pub fn tau_reindex<E: Clone>(
    n: u64,
    nm: u64,
    r: usize,
    family: impl Fn(usize, u64, u64) -> Option<E>,
    transport: impl Fn(usize, u64, u64, &E) -> E,
) -> Result<Vec<Vec<E>>, WreathError> {
    let mut grid = Vec::with_capacity((n * nm) as usize);
    for j in 0..n {
        for k in 0..nm {
            let mut tuple = Vec::with_capacity(r);
            for i in 1..=r {
                let h = family(i, j, k).ok_or(WreathError::MissingFamily { i, j, k })?;
                tuple.push(transport(i, j, k, &h));
            }
            grid.push(tuple);
        }
    }
    Ok(grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use proptest::prelude::*;

    /// A reflection that is not an action of `Z^2`.
    struct Reflect;
    impl ShiftAction for Reflect {
        fn source(&self, n: usize, m: usize, i: usize, j: usize, k: (i64, i64)) -> (usize, usize) {
            ((k.0 - i as i64).rem_euclid(n as i64) as usize, (k.1 - j as i64).rem_euclid(m as i64) as usize)
        }
    }

    #[test]
    fn shift_examples() {
        let w = WreathProduct::new(Cyclic(5), 2, 3).unwrap();
        let a = vec![1, 2, 3, 4, 0, 1];
        assert_eq!(w.shift_action(&a, (0, 0)).unwrap(), a);
        assert_eq!(w.shift_action(&a, (2, 3)).unwrap(), a);
        assert_eq!(w.shift_action(&a, (1, 1)).unwrap(), vec![0, 1, 4, 2, 3, 1]);
        assert_eq!(w.shift_action(&a, (-1, -2)).unwrap(), w.shift_action(&a, (1, 1)).unwrap());
        assert_eq!(w.shift_action(&[1, 2], (0, 0)), Err(WreathError::GridSize { expected: 6, got: 2 }));
    }

    #[test]
    fn multiply_example() {
        let w = WreathProduct::new(Cyclic(2), 1, 2).unwrap();
        let x = w.element(vec![1, 0], (0, 1)).unwrap();
        let y = w.element(vec![1, 1], (0, 1)).unwrap();
        assert_eq!(w.multiply(&x, &y).unwrap(), WreathElement { grid: vec![0, 1], shift: (0, 2) });
        assert_eq!(w.render(&w.multiply(&x, &y).unwrap()), "([[0,1]]; (0,2))");
        assert_eq!(w.multiply(&x, &w.identity()).unwrap(), x);
        assert_eq!(w.multiply(&x, &w.inverse(&x).unwrap()).unwrap(), w.identity());
        assert_eq!(w.element(vec![2, 0], (0, 0)), Err(WreathError::NotInBase(0)));
    }

    #[test]
    fn projection_and_inclusion() {
        let w = WreathProduct::new(Cyclic(3), 2, 2).unwrap();
        let a = vec![1, 2, 0, 1];
        assert_eq!(w.proj(&w.sigma(a.clone()).unwrap()), (0, 0));
        assert_eq!(w.proj(&w.element(a.clone(), (2, -3)).unwrap()), (2, -3));
        assert_eq!(w.map_count(), Some(81));
        assert_eq!(w.all_maps(100).unwrap().len(), 81);
    }

    #[test]
    fn product_groups() {
        let g = Product(vec![Cyclic(2), Cyclic(3)]);
        assert_eq!(g.order(), Some(6));
        assert_eq!(g.elements().unwrap().len(), 6);
        assert_eq!(g.op(&vec![1, 2], &vec![1, 2]), vec![0, 1]);
        assert_eq!(g.inverse(&vec![1, 2]), vec![1, 1]);
        assert_eq!(g.render(&vec![1, 2]), "<1,2>");
        assert_eq!(Cyclic(1).elements().unwrap(), vec![0]);
    }

    #[test]
    fn axioms_exhaustive_z2_on_one_by_two() {
        let w = WreathProduct::new(Cyclic(2), 1, 2).unwrap();
        let mut elems = Vec::new();
        for g in w.all_maps(16).unwrap() {
            for a in -2..=2 {
                for b in -2..=2 {
                    elems.push(w.element(g.clone(), (a, b)).unwrap());
                }
            }
        }
        let e = w.identity();
        for x in &elems {
            assert_eq!(w.multiply(x, &e).unwrap(), *x);
            assert_eq!(w.multiply(&e, x).unwrap(), *x);
            let xi = w.inverse(x).unwrap();
            assert_eq!(w.multiply(x, &xi).unwrap(), e);
            assert_eq!(w.multiply(&xi, x).unwrap(), e);
        }
        for x in elems.iter().step_by(3) {
            for y in &elems {
                let xy = w.multiply(x, y).unwrap();
                for z in elems.iter().step_by(7) {
                    assert_eq!(w.multiply(&xy, z).unwrap(), w.multiply(x, &w.multiply(y, z).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn reflection_breaks_the_axioms() {
        // on a grid of width 2 a reflection is also a translation, so use 3
        let w = WreathProduct::with_action(Cyclic(3), 1, 3, Reflect).unwrap();
        let x = w.element(vec![0, 0, 0], (0, 1)).unwrap();
        let y = x.clone();
        let z = w.element(vec![1, 2, 0], (0, 0)).unwrap();
        let left = w.multiply(&w.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = w.multiply(&x, &w.multiply(&y, &z).unwrap()).unwrap();
        assert_ne!(left, right);
    }

    #[test]
    fn tau_over_all_nine_families() {
        let base = Product(vec![Cyclic(3)]);
        let w = WreathProduct::new(base.clone(), 1, 2).unwrap();
        let z3 = Cyclic(3);
        let families: Vec<[u64; 2]> = (0..3).flat_map(|a| (0..3).map(move |b| [a, b])).collect();
        let tau = |h: &[u64; 2]| tau_reindex(1, 2, 1, |_, _, k| Some(h[k as usize]), |_, _, _, x| *x).unwrap();
        assert_eq!(tau(&[1, 2]), vec![vec![1], vec![2]]);
        let images: alloc::collections::BTreeSet<_> = families.iter().map(tau).collect();
        assert_eq!(images.len(), 9);
        for h in &families {
            for g in &families {
                let hg = [z3.op(&h[0], &g[0]), z3.op(&h[1], &g[1])];
                let prod = w.multiply(&w.sigma(tau(h)).unwrap(), &w.sigma(tau(g)).unwrap()).unwrap();
                assert_eq!(prod.grid, tau(&hg));
            }
        }
        assert_eq!(
            tau_reindex(1, 2, 1, |_, _, k| (k == 0).then_some(0u64), |_, _, _, x| *x),
            Err(WreathError::MissingFamily { i: 1, j: 0, k: 1 })
        );
    }

    #[test]
    fn tau_with_trivial_grid_is_the_identity() {
        let grid = tau_reindex(1, 1, 3, |i, _, _| Some(i as u64), |_, _, _, x| *x).unwrap();
        assert_eq!(grid, vec![vec![1, 2, 3]]);
    }

    fn element_strategy() -> impl Strategy<Value = WreathElement<u64>> {
        (proptest::collection::vec(0u64..3, 8), -5i64..6, -5i64..6).prop_map(|(grid, a, b)| WreathElement { grid, shift: (a, b) })
    }

    proptest! {
        #[test]
        fn axioms_sampled_z3_on_two_by_four(x in element_strategy(), y in element_strategy(), z in element_strategy()) {
            let w = WreathProduct::new(Cyclic(3), 2, 4).unwrap();
            let xy = w.multiply(&x, &y).unwrap();
            prop_assert_eq!(w.multiply(&xy, &z).unwrap(), w.multiply(&x, &w.multiply(&y, &z).unwrap()).unwrap());
            prop_assert_eq!(w.multiply(&x, &w.inverse(&x).unwrap()).unwrap(), w.identity());
            prop_assert_eq!(w.proj(&xy), (x.shift.0 + y.shift.0, x.shift.1 + y.shift.1));
        }
    }
}
