use alloc::vec::Vec;

/// Disjoint sets with path halving and union by size.
#[derive(Debug, Clone)]
pub(crate) struct Dsu {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl Dsu {
    pub(crate) fn new(n: usize) -> Self {
        Dsu { parent: (0..n).collect(), size: alloc::vec![1; n] }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut a, mut b) = (self.find(a), self.find(b));
        if a == b {
            return false;
        }
        if self.size[a] < self.size[b] {
            core::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        true
    }

    /// Dense labels `0..k` for the classes of the selected members, numbered
    /// in order of first appearance.
    pub(crate) fn labels(&mut self, members: impl Iterator<Item = usize>, n: usize) -> (Vec<Option<usize>>, usize) {
        let mut root_label: Vec<Option<usize>> = alloc::vec![None; self.parent.len()];
        let mut out = alloc::vec![None; n];
        let mut next = 0;
        for x in members {
            let r = self.find(x);
            let label = *root_label[r].get_or_insert_with(|| {
                next += 1;
                next - 1
            });
            out[x] = Some(label);
        }
        (out, next)
    }
}
