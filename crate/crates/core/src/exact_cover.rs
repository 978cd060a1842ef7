//! Dancing-links exact cover (Knuth's Algorithm X).
//!
//! Items are `0..n`; every option is a set of items. A solution is a set of
//! options covering each item exactly once. Branching always picks the item
//! with the fewest remaining options, ties broken by the lowest index, so the
//! order in which solutions are reported is deterministic.

/// Outcome of a search run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    pub solutions: usize,
    /// False when the node budget ran out or the visitor asked to stop.
    pub complete: bool,
}

#[derive(Clone, Debug)]
pub struct ExactCover {
    n_items: usize,
    // Node arrays. Nodes 0..=n_items are the header (0 is the root).
    left: Vec<usize>,
    right: Vec<usize>,
    up: Vec<usize>,
    down: Vec<usize>,
    col: Vec<usize>,
    row: Vec<usize>,
    size: Vec<usize>,
    n_options: usize,
}

impl ExactCover {
    pub fn new(n_items: usize) -> ExactCover {
        let h = n_items + 1;
        let mut ec = ExactCover {
            n_items,
            left: Vec::with_capacity(h),
            right: Vec::with_capacity(h),
            up: Vec::with_capacity(h),
            down: Vec::with_capacity(h),
            col: Vec::with_capacity(h),
            row: Vec::with_capacity(h),
            size: vec![0; h],
            n_options: 0,
        };
        for i in 0..h {
            ec.left.push(if i == 0 { n_items } else { i - 1 });
            ec.right.push(if i == n_items { 0 } else { i + 1 });
            ec.up.push(i);
            ec.down.push(i);
            ec.col.push(i);
            ec.row.push(usize::MAX);
        }
        ec
    }

    pub fn item_count(&self) -> usize {
        self.n_items
    }

    pub fn option_count(&self) -> usize {
        self.n_options
    }

    /// Adds an option and returns its index. Items must be distinct.
    pub fn add_option(&mut self, items: &[usize]) -> usize {
        let r = self.n_options;
        self.n_options += 1;
        let first = self.left.len();
        for (k, &it) in items.iter().enumerate() {
            assert!(it < self.n_items, "item {it} out of range");
            let c = it + 1;
            let x = self.left.len();
            let (l, rr) = if k == 0 { (x, x) } else { (x - 1, first) };
            self.left.push(l);
            self.right.push(rr);
            if k > 0 {
                self.right[x - 1] = x;
                self.left[first] = x;
            }
            self.up.push(self.up[c]);
            self.down.push(c);
            let u = self.up[c];
            self.down[u] = x;
            self.up[c] = x;
            self.col.push(c);
            self.row.push(r);
            self.size[c] += 1;
        }
        r
    }

    fn cover(&mut self, c: usize) {
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = r;
        self.left[r] = l;
        let mut i = self.down[c];
        while i != c {
            let mut j = self.right[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = d;
                self.up[d] = u;
                self.size[self.col[j]] -= 1;
                j = self.right[j];
            }
            i = self.down[i];
        }
    }

    fn uncover(&mut self, c: usize) {
        let mut i = self.up[c];
        while i != c {
            let mut j = self.left[i];
            while j != i {
                let (u, d) = (self.up[j], self.down[j]);
                self.down[u] = j;
                self.up[d] = j;
                self.size[self.col[j]] += 1;
                j = self.left[j];
            }
            i = self.up[i];
        }
        let (l, r) = (self.left[c], self.right[c]);
        self.right[l] = c;
        self.left[r] = c;
    }

    /// Runs the search. `visit` receives each solution as a sorted list of
    /// option indices and returns `false` to stop. A `budget` of 0 means
    /// unlimited.
    pub fn solve<F>(&mut self, budget: u64, mut visit: F) -> SearchStats
    where
        F: FnMut(&[usize]) -> bool,
    {
        let mut stats = SearchStats { nodes: 0, solutions: 0, complete: true };
        let mut partial = Vec::new();
        let mut scratch = Vec::new();
        self.search(budget, &mut partial, &mut scratch, &mut stats, &mut visit);
        stats
    }

    fn search<F>(
        &mut self,
        budget: u64,
        partial: &mut Vec<usize>,
        scratch: &mut Vec<usize>,
        stats: &mut SearchStats,
        visit: &mut F,
    ) -> bool
    where
        F: FnMut(&[usize]) -> bool,
    {
        stats.nodes += 1;
        if budget != 0 && stats.nodes > budget {
            stats.complete = false;
            return false;
        }
        if self.right[0] == 0 {
            stats.solutions += 1;
            scratch.clear();
            scratch.extend(partial.iter().map(|&x| self.row[x]));
            scratch.sort_unstable();
            if !visit(scratch) {
                stats.complete = false;
                return false;
            }
            return true;
        }
        let mut c = self.right[0];
        let mut best = self.size[c];
        let mut j = self.right[c];
        while j != 0 && best > 0 {
            if self.size[j] < best {
                best = self.size[j];
                c = j;
            }
            j = self.right[j];
        }
        if best == 0 {
            return true;
        }
        self.cover(c);
        let mut r = self.down[c];
        let mut go_on = true;
        while r != c {
            partial.push(r);
            let mut j = self.right[r];
            while j != r {
                self.cover(self.col[j]);
                j = self.right[j];
            }
            go_on = self.search(budget, partial, scratch, stats, visit);
            let mut j = self.left[r];
            while j != r {
                self.uncover(self.col[j]);
                j = self.left[j];
            }
            partial.pop();
            if !go_on {
                break;
            }
            r = self.down[r];
        }
        self.uncover(c);
        go_on
    }
}
