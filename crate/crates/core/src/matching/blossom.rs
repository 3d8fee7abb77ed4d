//! Edmonds' blossom algorithm for maximum-cardinality matching, O(n^3).
//!
//! Vertices are `1..=n`; index 0 of every array is unused. Roots are tried
//! in ascending order and neighbours are scanned in ascending order, so the
//! output is a pure function of the adjacency lists.

const NONE: usize = usize::MAX;

struct Search<'a> {
    adj: &'a [Vec<usize>],
    mate: Vec<usize>,
    parent: Vec<usize>,
    base: Vec<usize>,
    used: Vec<bool>,
    in_blossom: Vec<bool>,
    queue: std::collections::VecDeque<usize>,
}

impl Search<'_> {
    fn lca(&self, mut a: usize, mut b: usize) -> usize {
        let mut seen = vec![false; self.adj.len()];
        loop {
            a = self.base[a];
            seen[a] = true;
            if self.mate[a] == NONE {
                break;
            }
            a = self.parent[self.mate[a]];
        }
        loop {
            b = self.base[b];
            if seen[b] {
                return b;
            }
            b = self.parent[self.mate[b]];
        }
    }

    fn mark_path(&mut self, mut v: usize, b: usize, mut child: usize) {
        while self.base[v] != b {
            self.in_blossom[self.base[v]] = true;
            self.in_blossom[self.base[self.mate[v]]] = true;
            self.parent[v] = child;
            child = self.mate[v];
            v = self.parent[self.mate[v]];
        }
    }

    /// Grows an alternating tree from `root`; returns the free vertex that
    /// ends an augmenting path, if any.
    fn find_path(&mut self, root: usize) -> Option<usize> {
        let n = self.adj.len();
        self.used.iter_mut().for_each(|u| *u = false);
        self.parent.iter_mut().for_each(|p| *p = NONE);
        for (i, b) in self.base.iter_mut().enumerate() {
            *b = i;
        }
        self.used[root] = true;
        self.queue.clear();
        self.queue.push_back(root);
        while let Some(v) = self.queue.pop_front() {
            for &to in &self.adj[v] {
                if self.base[v] == self.base[to] || self.mate[v] == to {
                    continue;
                }
                if to == root || (self.mate[to] != NONE && self.parent[self.mate[to]] != NONE) {
                    let cur = self.lca(v, to);
                    self.in_blossom.iter_mut().for_each(|x| *x = false);
                    self.mark_path(v, cur, to);
                    self.mark_path(to, cur, v);
                    for i in 0..n {
                        if self.in_blossom[self.base[i]] {
                            self.base[i] = cur;
                            if !self.used[i] {
                                self.used[i] = true;
                                self.queue.push_back(i);
                            }
                        }
                    }
                } else if self.parent[to] == NONE {
                    self.parent[to] = v;
                    if self.mate[to] == NONE {
                        return Some(to);
                    }
                    let m = self.mate[to];
                    self.used[m] = true;
                    self.queue.push_back(m);
                }
            }
        }
        None
    }
}

/// `adj` is indexed by 1-based vertex (entry 0 empty). Returns `mate[v]`.
pub(crate) fn maximum_cardinality(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let len = adj.len();
    let mut s = Search {
        adj,
        mate: vec![NONE; len],
        parent: vec![NONE; len],
        base: (0..len).collect(),
        used: vec![false; len],
        in_blossom: vec![false; len],
        queue: Default::default(),
    };
    for root in 1..len {
        if s.mate[root] != NONE {
            continue;
        }
        if let Some(mut v) = s.find_path(root) {
            while v != NONE {
                let pv = s.parent[v];
                let next = s.mate[pv];
                s.mate[v] = pv;
                s.mate[pv] = v;
                v = next;
            }
        }
    }
    s.mate.into_iter().map(|m| (m != NONE).then_some(m)).collect()
}
