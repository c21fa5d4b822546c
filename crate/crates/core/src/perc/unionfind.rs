//! Disjoint-set forest with union by size and path compression.

/// Union-find over vertex ids `0..n`.
///
/// Merges are deterministic: the larger component's root wins, and on equal
/// sizes the smaller root id wins. Together with deterministic edge order
/// this pins cluster roots independent of platform.
pub struct DisjointSets {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl DisjointSets {
    pub fn new(n: u32) -> Self {
        DisjointSets {
            parent: (0..n).collect(),
            size: vec![1; n as usize],
        }
    }

    /// Root of x's set, compressing the path along the way.
    pub fn find(&mut self, x: u32) -> u32 {
        let mut root = x;
        while self.parent[root as usize] != root {
            root = self.parent[root as usize];
        }
        let mut cur = x;
        while self.parent[cur as usize] != root {
            let next = self.parent[cur as usize];
            self.parent[cur as usize] = root;
            cur = next;
        }
        root
    }

    /// Merges the sets containing a and b. Returns the surviving root if the
    /// sets were distinct, None if they already coincided.
    pub fn union(&mut self, a: u32, b: u32) -> Option<u32> {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra == rb {
            return None;
        }
        let (win, lose) = match self.size[ra as usize].cmp(&self.size[rb as usize]) {
            std::cmp::Ordering::Greater => (ra, rb),
            std::cmp::Ordering::Less => (rb, ra),
            std::cmp::Ordering::Equal => (ra.min(rb), ra.max(rb)),
        };
        self.parent[lose as usize] = win;
        self.size[win as usize] += self.size[lose as usize];
        Some(win)
    }

    /// Size of the set containing x.
    pub fn size_of(&mut self, x: u32) -> u32 {
        let r = self.find(x);
        self.size[r as usize]
    }

    /// Size stored at a root. Only meaningful when r is currently a root.
    pub fn root_size(&self, r: u32) -> u32 {
        self.size[r as usize]
    }

    pub fn is_root(&self, r: u32) -> bool {
        self.parent[r as usize] == r
    }
}
