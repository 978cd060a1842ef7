//! Automorphisms, canonical forms and isomorphisms of designs by partition
//! refinement and individualization.
//!
//! A design is viewed as the bipartite incidence graph on points and blocks.
//! Colourings are refined with neighbour-colour multisets until stable; the
//! search tree individualizes one vertex of the first smallest non-trivial
//! point cell at a time. Leaves are compared by their trace (a hash of every
//! refinement step) and then by the relabelled block list. Automorphisms
//! found on the way prune the tree through orbits of the pointwise
//! stabilizer of the current prefix, and a leaf equivalent to the first leaf
//! sends the search back to the level where the two paths split.

use std::cmp::Ordering;

use crate::design::Design;
use crate::perm::{Perm, StabChain, UnionFind};
use crate::{Error, Result};

/// Default bound on the number of points.
pub const MAX_POINTS: usize = 100;

#[derive(Clone, Copy, Debug)]
pub struct IsoOptions {
    pub max_points: usize,
    /// Search-tree node budget; 0 means unlimited.
    pub node_budget: u64,
}

impl Default for IsoOptions {
    fn default() -> Self {
        IsoOptions { max_points: MAX_POINTS, node_budget: 0 }
    }
}

/// Incidence graph in compressed adjacency form. Vertices `0..v` are the
/// points, `v..v+b` the blocks.
struct Graph {
    v: usize,
    n: usize,
    start: Vec<usize>,
    adj: Vec<u32>,
    /// For linear spaces: `join[x * v + y]` is the vertex of the block
    /// through points `x != y`, `meet[i * b + j]` the common point of blocks
    /// `i != j` or `u32::MAX`.
    join: Option<Vec<u32>>,
    meet: Option<Vec<u32>>,
}

impl Graph {
    fn new(d: &Design) -> Graph {
        let v = d.v;
        let n = v + d.blocks.len();
        let mut lists: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, b) in d.blocks.iter().enumerate() {
            for &x in b {
                lists[x as usize].push((v + i) as u32);
                lists[v + i].push(x);
            }
        }
        let mut start = Vec::with_capacity(n + 1);
        let mut adj = Vec::new();
        for l in &lists {
            start.push(adj.len());
            adj.extend_from_slice(l);
        }
        start.push(adj.len());
        let mut g = Graph { v, n, start, adj, join: None, meet: None };
        if let Ok(mut join) = d.pair_table() {
            if join.iter().enumerate().all(|(i, &b)| b != u32::MAX || i / v == i % v) {
                join.iter_mut().for_each(|b| *b = b.wrapping_add(v as u32));
                let nb = n - v;
                let mut meet = vec![u32::MAX; nb * nb];
                for x in 0..v {
                    let ls = g.neighbours(x);
                    for &i in ls {
                        for &j in ls {
                            if i != j {
                                meet[(i as usize - v) * nb + (j as usize - v)] = x as u32;
                            }
                        }
                    }
                }
                g.join = Some(join);
                g.meet = Some(meet);
            }
        }
        g
    }

    fn neighbours(&self, x: usize) -> &[u32] {
        &self.adj[self.start[x]..self.start[x + 1]]
    }
}

fn mix(h: u64, x: u64) -> u64 {
    (h ^ x).wrapping_mul(0x100_0000_01b3).rotate_left(23) ^ 0x9e37_79b9_7f4a_7c15
}

/// An ordered partition of the vertices. `lab` lists the vertices cell by
/// cell; a vertex's colour is the position where its cell starts, which is
/// independent of vertex names.
#[derive(Clone, Debug)]
struct Partition {
    lab: Vec<u32>,
    /// Position of each vertex in `lab`.
    pos: Vec<u32>,
    cell: Vec<u32>,
    /// `end[s]` is one past the last position of the cell starting at `s`.
    end: Vec<u32>,
}

impl Partition {
    /// Cells from arbitrary labels, in increasing label order.
    fn from_colors(colors: &[u32]) -> (Partition, Vec<u32>) {
        let n = colors.len();
        let mut lab: Vec<u32> = (0..n as u32).collect();
        lab.sort_by_key(|&x| (colors[x as usize], x));
        let mut pos = vec![0u32; n];
        let mut cell = vec![0u32; n];
        let mut end = vec![0u32; n];
        let mut starts = Vec::new();
        let mut s = 0;
        for i in 0..n {
            if i > 0 && colors[lab[i] as usize] != colors[lab[i - 1] as usize] {
                end[s] = i as u32;
                starts.push(s as u32);
                s = i;
            }
            cell[lab[i] as usize] = s as u32;
            pos[lab[i] as usize] = i as u32;
        }
        if n > 0 {
            end[s] = n as u32;
            starts.push(s as u32);
        }
        (Partition { lab, pos, cell, end }, starts)
    }

    #[cfg(test)]
    fn cell_starts(&self) -> Vec<u32> {
        let mut out = Vec::new();
        let mut s = 0;
        while s < self.lab.len() {
            out.push(s as u32);
            s = self.end[s] as usize;
        }
        out
    }

    fn swap(&mut self, i: usize, j: usize) {
        self.lab.swap(i, j);
        self.pos[self.lab[i] as usize] = i as u32;
        self.pos[self.lab[j] as usize] = j as u32;
    }

    /// Splits `w` off its cell, in front; returns the start of `{w}`.
    fn individualize(&mut self, w: u32) -> u32 {
        let c = self.cell[w as usize] as usize;
        let e = self.end[c] as usize;
        self.swap(c, self.pos[w as usize] as usize);
        self.end[c] = c as u32 + 1;
        self.end[c + 1] = e as u32;
        for i in c + 1..e {
            self.cell[self.lab[i] as usize] = c as u32 + 1;
        }
        c as u32
    }
}

/// Scratch space for [`refine`].
#[derive(Default)]
struct Scratch {
    count: Vec<u32>,
    touched: Vec<(u32, u32)>,
    queued: Vec<bool>,
    frags: Vec<(usize, usize)>,
}

/// Refines to the coarsest equitable partition below `part`, splitting by
/// neighbour counts in one splitter cell at a time (smallest start first).
/// Only the touched vertices of a cell move, untouched ones keep the front.
/// Returns a trace value that depends only on the labelled structure.
fn refine(g: &Graph, part: &mut Partition, splitters: &[u32], sc: &mut Scratch) -> u64 {
    let n = g.n;
    sc.count.resize(n, 0);
    sc.queued.clear();
    sc.queued.resize(n, false);
    let mut queue = std::collections::BTreeSet::new();
    for &s in splitters {
        queue.insert(s);
        sc.queued[s as usize] = true;
    }
    let mut trace = 0x51_7cc1_b727_220a_u64;
    while let Some(s) = queue.pop_first() {
        sc.queued[s as usize] = false;
        trace = mix(trace, s as u64);
        sc.touched.clear();
        let e = part.end[s as usize];
        for i in s..e {
            let w = part.lab[i as usize] as usize;
            for &y in g.neighbours(w) {
                if sc.count[y as usize] == 0 {
                    sc.touched.push((part.cell[y as usize], y));
                }
                sc.count[y as usize] += 1;
            }
        }
        sc.touched.sort_unstable();
        let mut ti = 0;
        while ti < sc.touched.len() {
            let c = sc.touched[ti].0 as usize;
            let mut tj = ti;
            while tj < sc.touched.len() && sc.touched[tj].0 as usize == c {
                tj += 1;
            }
            let ce = part.end[c] as usize;
            let k = tj - ti;
            // move the touched vertices to the back of the cell
            for j in 0..k {
                let y = sc.touched[ti + j].1;
                part.swap(part.pos[y as usize] as usize, ce - 1 - j);
            }
            let t = ce - k;
            let count = &sc.count;
            part.lab[t..ce].sort_unstable_by_key(|&x| (count[x as usize], x));
            for i in t..ce {
                part.pos[part.lab[i] as usize] = i as u32;
            }
            sc.frags.clear();
            if t > c {
                sc.frags.push((c, t));
            }
            let mut a = t;
            for i in t + 1..=ce {
                if i == ce || count[part.lab[i] as usize] != count[part.lab[a] as usize] {
                    sc.frags.push((a, i));
                    a = i;
                }
            }
            for &(a, b) in &sc.frags {
                let cnt = if a < t { 0 } else { count[part.lab[a] as usize] as u64 };
                trace = mix(trace, (a as u64) << 40 | (b as u64) << 20 | cnt);
            }
            ti = tj;
            if sc.frags.len() == 1 {
                continue;
            }
            let was_queued = sc.queued[c];
            let largest = sc
                .frags
                .iter()
                .enumerate()
                .max_by_key(|&(i, &(a, b))| (b - a, std::cmp::Reverse(i)))
                .map(|(i, _)| i)
                .unwrap();
            for (i, &(a, b)) in sc.frags.iter().enumerate() {
                part.end[a] = b as u32;
                for j in a..b {
                    part.cell[part.lab[j] as usize] = a as u32;
                }
                if (was_queued || i != largest) && !sc.queued[a] {
                    sc.queued[a] = true;
                    queue.insert(a as u32);
                }
            }
        }
        for &(_, y) in &sc.touched {
            sc.count[y as usize] = 0;
        }
    }
    trace
}

/// First smallest non-singleton cell within `range`.
fn smallest_cell(part: &Partition, range: std::ops::Range<usize>) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut s = range.start;
    while s < range.end {
        let e = part.end[s] as usize;
        if e - s > 1 && best.is_none_or(|(bs, be)| e - s < be - bs) {
            best = Some((s, e));
        }
        s = e;
    }
    best
}

/// Splits the target point cell by counting quadrilaterals at each point:
/// two blocks through `z`, and two further blocks joining them that meet off
/// both. Every count is weighted by the colours involved. Equitable
/// refinement cannot see these on linear spaces, where a few fixed points
/// leave every count determined by the parameters. Returns the trace
/// contribution and the new cell starts, or `None` if nothing split.
fn split_by_quadrilaterals(g: &Graph, part: &mut Partition, sc: &mut Scratch) -> Option<(u64, Vec<u32>)> {
    let (join, meet) = (g.join.as_ref()?, g.meet.as_ref()?);
    let v = g.v;
    let nb = g.n - v;
    let (s, e) = smallest_cell(part, 0..v)?;
    let col = |x: usize| part.cell[x] as u64;
    let mut keyed: Vec<(u64, u32)> = part.lab[s..e]
        .iter()
        .map(|&z| {
            let lines = g.neighbours(z as usize);
            let mut h = 0u64;
            for (i, &l1) in lines.iter().enumerate() {
                for &l2 in &lines[i + 1..] {
                    let tag = col(l1 as usize) + col(l2 as usize);
                    for &a in g.neighbours(l1 as usize) {
                        for &b in g.neighbours(l2 as usize) {
                            if a == z || b == z {
                                continue;
                            }
                            let m1 = join[a as usize * v + b as usize] as usize;
                            for &a2 in g.neighbours(l1 as usize) {
                                for &b2 in g.neighbours(l2 as usize) {
                                    if a2 == z || b2 == z || a2 == a || b2 == b {
                                        continue;
                                    }
                                    let m2 = join[a2 as usize * v + b2 as usize] as usize;
                                    let c = meet[(m1 - v) * nb + (m2 - v)];
                                    if c != u32::MAX {
                                        h = h.wrapping_add(mix(mix(tag, col(c as usize)), col(m1) + col(m2)));
                                    }
                                }
                            }
                        }
                    }
                }
            }
            (h, z)
        })
        .collect();
    keyed.sort_unstable();
    if keyed[0].0 == keyed[keyed.len() - 1].0 {
        return None;
    }
    let mut trace = 0u64;
    let mut splitters = Vec::new();
    sc.frags.clear();
    let mut a = s;
    for i in s..e {
        part.lab[i] = keyed[i - s].1;
        part.pos[keyed[i - s].1 as usize] = i as u32;
        if i > s && keyed[i - s].0 != keyed[i - s - 1].0 {
            sc.frags.push((a, i));
            a = i;
        }
    }
    sc.frags.push((a, e));
    for &(a, b) in &sc.frags {
        part.end[a] = b as u32;
        for j in a..b {
            part.cell[part.lab[j] as usize] = a as u32;
        }
        trace = mix(mix(trace, (a as u64) << 32 | b as u64), keyed[a - s].0);
        splitters.push(a as u32);
    }
    Some((trace, splitters))
}

/// Equitable refinement followed by pair-invariant splits until stable.
fn refine_full(g: &Graph, part: &mut Partition, splitters: &[u32], sc: &mut Scratch) -> u64 {
    let mut t = refine(g, part, splitters, sc);
    while let Some((h, sp)) = split_by_quadrilaterals(g, part, sc) {
        t = mix(t, h);
        t = mix(t, refine(g, part, &sp, sc));
    }
    t
}

/// Dense ranks of arbitrary labels, points before blocks.
fn initial_colors(g: &Graph, point_labels: &[u32], block_labels: &[u32]) -> Vec<u32> {
    let keys: Vec<(u32, u32)> = (0..g.n)
        .map(|x| if x < g.v { (0, point_labels[x]) } else { (1, block_labels[x - g.v]) })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_unstable();
    sorted.dedup();
    keys.iter().map(|k| sorted.binary_search(k).unwrap() as u32).collect()
}

struct Leaf {
    traces: Vec<u64>,
    prefix: Vec<u32>,
    /// Vertex -> canonical label.
    lab: Vec<u32>,
    cert: Vec<Vec<u32>>,
}

struct Search<'a> {
    g: &'a Graph,
    d: &'a Design,
    first: Option<Leaf>,
    best: Option<Leaf>,
    autos: Vec<Perm>,
    /// Group generated by `autos`.
    group: StabChain,
    nodes: u64,
    budget: u64,
    exhausted: bool,
    scratch: Scratch,
}

impl Search<'_> {
    fn certificate(&self, lab: &[u32]) -> Vec<Vec<u32>> {
        let mut blocks: Vec<Vec<u32>> = self
            .d
            .blocks
            .iter()
            .map(|b| {
                let mut nb: Vec<u32> = b.iter().map(|&x| lab[x as usize]).collect();
                nb.sort_unstable();
                nb
            })
            .collect();
        blocks.sort();
        blocks
    }

    /// Point permutation sending `from`'s labelling onto `to`'s.
    fn automorphism(&self, from: &[u32], to: &[u32]) -> Perm {
        let v = self.g.v;
        let mut inv = vec![0u32; v];
        for x in 0..v {
            inv[from[x] as usize] = x as u32;
        }
        Perm::from_vec((0..v).map(|x| inv[to[x] as usize]).collect())
    }

    fn add_auto(&mut self, p: Perm) {
        if p.is_identity() || self.group.contains(&p) {
            return;
        }
        debug_assert!(self.d.is_automorphism(p.as_slice()));
        self.autos.push(p);
        self.group = StabChain::new(self.g.v, &self.autos);
    }

    /// First smallest non-singleton cell, point cells before block cells.
    fn target_cell(&self, part: &Partition) -> Option<Vec<u32>> {
        let (s, e) = smallest_cell(part, 0..self.g.v).or_else(|| smallest_cell(part, self.g.v..self.g.n))?;
        let mut cell = part.lab[s..e].to_vec();
        cell.sort_unstable();
        Some(cell)
    }

    /// Explores the subtree; returns a level to jump back to.
    fn dfs(&mut self, part: Partition, traces: &mut Vec<u64>, prefix: &mut Vec<u32>) -> Option<usize> {
        self.nodes += 1;
        if self.budget != 0 && self.nodes > self.budget {
            self.exhausted = true;
            return Some(0);
        }
        let Some(cell) = self.target_cell(&part) else {
            return self.leaf(part.cell, traces, prefix);
        };
        let depth = prefix.len();
        let mut explored: Vec<u32> = Vec::new();
        for &w in &cell {
            if !explored.is_empty() && self.pruned_by_orbit(prefix, &explored, w) {
                continue;
            }
            let mut c = part.clone();
            let s = c.individualize(w);
            let t = refine_full(self.g, &mut c, &[s], &mut self.scratch);
            traces.push(t);
            prefix.push(w);
            let keep = self.keep(traces);
            let back = if keep { self.dfs(c, traces, prefix) } else { None };
            traces.pop();
            prefix.pop();
            explored.push(w);
            if let Some(level) = back {
                if level < depth || self.exhausted {
                    return Some(level);
                }
            }
        }
        None
    }

    fn keep(&self, traces: &[u64]) -> bool {
        let k = traces.len();
        let Some(first) = &self.first else { return true };
        if first.traces.len() >= k && first.traces[..k] == *traces {
            return true;
        }
        let best = self.best.as_ref().unwrap();
        let bk = k.min(best.traces.len());
        traces[..bk] <= best.traces[..bk]
    }

    fn pruned_by_orbit(&self, prefix: &[u32], explored: &[u32], w: u32) -> bool {
        let v = self.g.v;
        let fixing: Vec<&Perm> =
            self.autos.iter().filter(|p| prefix.iter().all(|&x| (x as usize) >= v || p.apply(x) == x)).collect();
        if fixing.is_empty() {
            return false;
        }
        if w as usize >= v {
            return false;
        }
        let mut uf = UnionFind::new(v);
        for p in &fixing {
            for x in 0..v as u32 {
                uf.union(x, p.apply(x));
            }
        }
        let rw = uf.find(w);
        explored.iter().any(|&e| (e as usize) < v && uf.find(e) == rw)
    }

    fn leaf(&mut self, colors: Vec<u32>, traces: &[u64], prefix: &[u32]) -> Option<usize> {
        let cert = self.certificate(&colors);
        let leaf = Leaf { traces: traces.to_vec(), prefix: prefix.to_vec(), lab: colors, cert };
        let Some(first) = &self.first else {
            self.best = Some(Leaf { traces: leaf.traces.clone(), prefix: leaf.prefix.clone(), lab: leaf.lab.clone(), cert: leaf.cert.clone() });
            self.first = Some(leaf);
            return None;
        };
        if first.traces == leaf.traces && first.cert == leaf.cert {
            let p = self.automorphism(&first.lab[..self.g.v], &leaf.lab[..self.g.v]);
            let split = first.prefix.iter().zip(&leaf.prefix).take_while(|(a, b)| a == b).count();
            self.add_auto(p);
            return Some(split);
        }
        let best = self.best.as_ref().unwrap();
        match (leaf.traces.as_slice(), &leaf.cert).cmp(&(best.traces.as_slice(), &best.cert)) {
            Ordering::Equal => {
                let p = self.automorphism(&best.lab[..self.g.v], &leaf.lab[..self.g.v]);
                self.add_auto(p);
            }
            Ordering::Less => self.best = Some(leaf),
            Ordering::Greater => {}
        }
        None
    }
}

/// Output of a full search.
#[derive(Clone, Debug)]
pub struct SearchResult {
    /// Automorphism generators as point permutations.
    pub generators: Vec<Perm>,
    pub order: u128,
    /// Canonical labelling of the points: point -> label.
    pub labelling: Vec<u32>,
    /// The relabelled block list, sorted.
    pub canonical: Vec<Vec<u32>>,
    pub nodes: u64,
}

/// Runs the search with optional initial point and block labels. Labels
/// only have to be consistent; their numeric order fixes cell order.
pub fn search(d: &Design, point_labels: Option<&[u32]>, block_labels: Option<&[u32]>, opts: IsoOptions) -> Result<SearchResult> {
    if d.v > opts.max_points {
        return Err(Error::TooLarge(format!("{} points exceed the limit of {}", d.v, opts.max_points)));
    }
    let g = Graph::new(d);
    let zeros_p = vec![0u32; d.v];
    let zeros_b = vec![0u32; d.blocks.len()];
    let colors = initial_colors(&g, point_labels.unwrap_or(&zeros_p), block_labels.unwrap_or(&zeros_b));
    let (mut part, starts) = Partition::from_colors(&colors);
    let mut s = Search {
        g: &g,
        d,
        first: None,
        best: None,
        autos: Vec::new(),
        group: StabChain::new(d.v, &[]),
        nodes: 0,
        budget: opts.node_budget,
        exhausted: false,
        scratch: Scratch::default(),
    };
    let t = refine_full(&g, &mut part, &starts, &mut s.scratch);
    let mut traces = vec![t];
    let mut prefix = Vec::new();
    s.dfs(part, &mut traces, &mut prefix);
    if s.exhausted {
        return Err(Error::Timeout { budget: opts.node_budget, found: s.autos.len() });
    }
    let best = s.best.take().expect("a leaf is always reached");
    let generators = s.autos;
    let order = s.group.order();
    Ok(SearchResult {
        generators,
        order,
        labelling: best.lab[..d.v].to_vec(),
        canonical: best.cert,
        nodes: s.nodes,
    })
}

/// Generators and order of the full automorphism group.
pub fn automorphisms(d: &Design) -> Result<SearchResult> {
    search(d, None, None, IsoOptions::default())
}

/// The canonical form of a design as a sorted block list.
pub fn canonical_form(d: &Design) -> Result<Design> {
    let r = automorphisms(d)?;
    Ok(Design { v: d.v, blocks: r.canonical })
}

/// An isomorphism `d1 -> d2` as a point map, if one exists.
pub fn isomorphism(d1: &Design, d2: &Design) -> Result<Option<Perm>> {
    if d1.v != d2.v || d1.blocks.len() != d2.blocks.len() {
        return Ok(None);
    }
    let r1 = automorphisms(d1)?;
    let r2 = automorphisms(d2)?;
    if r1.canonical != r2.canonical {
        return Ok(None);
    }
    let mut inv2 = vec![0u32; d2.v];
    for (x, &l) in r2.labelling.iter().enumerate() {
        inv2[l as usize] = x as u32;
    }
    let map = Perm::from_vec(r1.labelling.iter().map(|&l| inv2[l as usize]).collect());
    debug_assert_eq!(d1.relabel(&map), d2.canonical_order());
    Ok(Some(map))
}

pub fn isomorphic(d1: &Design, d2: &Design) -> Result<bool> {
    Ok(isomorphism(d1, d2)?.is_some())
}

/// True if every automorphism maps block `b` onto itself.
pub fn block_fixed(d: &Design, b: usize, gens: &[Perm]) -> bool {
    let blk = &d.blocks[b];
    gens.iter().all(|p| {
        let mut img: Vec<u32> = blk.iter().map(|&x| p.apply(x)).collect();
        img.sort_unstable();
        img == *blk
    })
}

/// Whether the full automorphism group fixes block `b` setwise.
pub fn block_stabilizer_check(d: &Design, b: usize) -> Result<bool> {
    Ok(block_fixed(d, b, &automorphisms(d)?.generators))
}

/// Automorphisms fixing `c` and every block through it, as generators and
/// order.
pub fn translation_group(d: &Design, c: u32) -> Result<SearchResult> {
    let mut pl = vec![0u32; d.v];
    pl[c as usize] = 1;
    let mut bl = vec![0u32; d.blocks.len()];
    let mut k = 1;
    for (i, b) in d.blocks.iter().enumerate() {
        if b.binary_search(&c).is_ok() {
            bl[i] = k;
            k += 1;
        }
    }
    search(d, Some(&pl), Some(&bl), IsoOptions::default())
}
