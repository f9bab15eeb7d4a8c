//! Disjoint-set forest over `0..n`, reset cheaply between states.

#[derive(Clone, Debug)]
pub(crate) struct UnionFind {
    parent: Vec<u16>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        debug_assert!(n <= u16::MAX as usize);
        Self {
            parent: (0..n as u16).collect(),
        }
    }

    pub fn copy_from(&mut self, other: &UnionFind) {
        self.parent.copy_from_slice(&other.parent);
    }

    pub fn find(&mut self, mut x: u16) -> u16 {
        while self.parent[x as usize] != x {
            let gp = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = gp;
            x = gp;
        }
        x
    }

    /// Returns `true` if `a` and `b` were in different sets.
    pub fn union(&mut self, a: u16, b: u16) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}
