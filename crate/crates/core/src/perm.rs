//! Permutations and permutation groups.
//!
//! Permutations act on the right and compose left to right:
//! `a.then(&b)` maps `x` to `b[a[x]]`.

use std::collections::{HashMap, HashSet};

/// A permutation of `0..n` stored as its image list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<u32>);

impl Perm {
    pub fn identity(n: usize) -> Perm {
        Perm((0..n as u32).collect())
    }

    pub fn from_vec(v: Vec<u32>) -> Perm {
        debug_assert!(is_permutation(&v));
        Perm(v)
    }

    /// Checks that `v` is a permutation before wrapping it.
    pub fn try_from_vec(v: Vec<u32>) -> Option<Perm> {
        is_permutation(&v).then_some(Perm(v))
    }

    pub fn degree(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    #[inline]
    pub fn apply(&self, x: u32) -> u32 {
        self.0[x as usize]
    }

    /// `self` then `other`.
    pub fn then(&self, other: &Perm) -> Perm {
        Perm(self.0.iter().map(|&x| other.0[x as usize]).collect())
    }

    pub fn inverse(&self) -> Perm {
        let mut out = vec![0; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            out[x as usize] = i as u32;
        }
        Perm(out)
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &x)| i as u32 == x)
    }

    pub fn fixed_points(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().enumerate().filter(|(i, &x)| *i as u32 == x).map(|(_, &x)| x)
    }

    pub fn cycle_lengths(&self) -> Vec<usize> {
        let mut seen = vec![false; self.0.len()];
        let mut out = Vec::new();
        for s in 0..self.0.len() {
            if seen[s] {
                continue;
            }
            let mut len = 0;
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                x = self.0[x] as usize;
                len += 1;
            }
            out.push(len);
        }
        out
    }

    pub fn order(&self) -> usize {
        self.cycle_lengths().into_iter().fold(1, lcm)
    }

    pub fn commutes_with(&self, other: &Perm) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| self.0[b as usize] == other.0[a as usize])
    }

    /// Restriction to the points `0..k`, which must be an invariant set.
    pub fn restrict(&self, k: usize) -> Perm {
        Perm(self.0[..k].to_vec())
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    let (mut x, mut y) = (a, b);
    while y != 0 {
        (x, y) = (y, x % y);
    }
    a / x * b
}

pub fn is_permutation(v: &[u32]) -> bool {
    let mut seen = vec![false; v.len()];
    v.iter().all(|&x| (x as usize) < v.len() && !std::mem::replace(&mut seen[x as usize], true))
}

/// All elements of the group generated by `gens`, in breadth-first order
/// starting from the identity. Returns `None` if the group exceeds `limit`.
pub fn enumerate(degree: usize, gens: &[Perm], limit: usize) -> Option<Vec<Perm>> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::new();
    seen.insert(id.clone());
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = out[i].then(g);
            if !seen.contains(&y) {
                if out.len() >= limit {
                    return None;
                }
                seen.insert(y.clone());
                out.push(y);
            }
        }
        i += 1;
    }
    Some(out)
}

/// Orbits of the group generated by `gens` on `0..degree`, each sorted,
/// listed by least element.
pub fn orbits(degree: usize, gens: &[Perm]) -> Vec<Vec<u32>> {
    let mut uf = UnionFind::new(degree);
    for g in gens {
        for x in 0..degree as u32 {
            uf.union(x, g.apply(x));
        }
    }
    let mut groups: HashMap<u32, Vec<u32>> = HashMap::new();
    for x in 0..degree as u32 {
        groups.entry(uf.find(x)).or_default().push(x);
    }
    let mut out: Vec<Vec<u32>> = groups.into_values().collect();
    out.sort();
    out
}

/// Disjoint-set forest over `0..n`; the representative is the least element.
#[derive(Clone, Debug)]
pub struct UnionFind {
    parent: Vec<u32>,
}

impl UnionFind {
    pub fn new(n: usize) -> UnionFind {
        UnionFind { parent: (0..n as u32).collect() }
    }

    pub fn find(&mut self, x: u32) -> u32 {
        let mut r = x;
        while self.parent[r as usize] != r {
            r = self.parent[r as usize];
        }
        let mut y = x;
        while self.parent[y as usize] != r {
            let next = self.parent[y as usize];
            self.parent[y as usize] = r;
            y = next;
        }
        r
    }

    pub fn union(&mut self, a: u32, b: u32) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        true
    }
}

struct Level {
    point: u32,
    gens: Vec<Perm>,
    orbit: Vec<u32>,
    /// `transversal[x]` maps `point` to `x`.
    transversal: HashMap<u32, Perm>,
    done_orbit: usize,
    done_gens: usize,
}

/// A base and strong generating set built by the deterministic
/// Schreier-Sims algorithm.
pub struct StabChain {
    degree: usize,
    levels: Vec<Level>,
}

impl StabChain {
    pub fn new(degree: usize, gens: &[Perm]) -> StabChain {
        let mut sc = StabChain { degree, levels: Vec::new() };
        for g in gens {
            sc.extend(g.clone(), 0);
        }
        sc
    }

    /// Builds a chain whose base starts with `prefix`.
    pub fn with_base(degree: usize, gens: &[Perm], prefix: &[u32]) -> StabChain {
        let mut sc = StabChain { degree, levels: Vec::new() };
        for &b in prefix {
            sc.push_level(b);
        }
        for g in gens {
            sc.extend(g.clone(), 0);
        }
        sc
    }

    fn push_level(&mut self, point: u32) {
        let mut transversal = HashMap::new();
        transversal.insert(point, Perm::identity(self.degree));
        self.levels.push(Level { point, gens: Vec::new(), orbit: vec![point], transversal, done_orbit: 0, done_gens: 0 });
    }

    pub fn base(&self) -> Vec<u32> {
        self.levels.iter().map(|l| l.point).collect()
    }

    pub fn orbit_lengths(&self) -> Vec<usize> {
        self.levels.iter().map(|l| l.orbit.len()).collect()
    }

    pub fn order(&self) -> u128 {
        self.levels.iter().map(|l| l.orbit.len() as u128).product()
    }

    /// Strong generators of the whole group.
    pub fn generators(&self) -> Vec<Perm> {
        self.levels.first().map(|l| l.gens.clone()).unwrap_or_default()
    }

    /// Sifts `g` from `start`; returns the residue and the level where it
    /// left the chain (`levels.len()` if it went through).
    fn strip(&self, mut g: Perm, start: usize) -> (Perm, usize) {
        for (l, level) in self.levels.iter().enumerate().skip(start) {
            let x = g.apply(level.point);
            match level.transversal.get(&x) {
                Some(u) => g = g.then(&u.inverse()),
                None => return (g, l),
            }
        }
        let n = self.levels.len();
        (g, n)
    }

    pub fn contains(&self, g: &Perm) -> bool {
        let (h, j) = self.strip(g.clone(), 0);
        j == self.levels.len() && h.is_identity()
    }

    fn extend(&mut self, g: Perm, level: usize) {
        let (h, j) = self.strip(g, level);
        if j == self.levels.len() {
            if h.is_identity() {
                return;
            }
            let moved = (0..self.degree as u32).find(|&x| h.apply(x) != x).unwrap();
            self.push_level(moved);
        }
        for l in level..=j {
            self.levels[l].gens.push(h.clone());
        }
        for l in (level..=j).rev() {
            self.close_level(l);
        }
    }

    fn close_level(&mut self, l: usize) {
        // grow the orbit with all generators
        let mut i = 0;
        while i < self.levels[l].orbit.len() {
            let x = self.levels[l].orbit[i];
            let ux = self.levels[l].transversal[&x].clone();
            let ngens = self.levels[l].gens.len();
            for k in 0..ngens {
                let lev = &mut self.levels[l];
                let y = lev.gens[k].apply(x);
                if let std::collections::hash_map::Entry::Vacant(e) = lev.transversal.entry(y) {
                    e.insert(ux.then(&lev.gens[k]));
                    lev.orbit.push(y);
                }
            }
            i += 1;
        }
        // sift the Schreier generators not tested yet
        loop {
            let lev = &self.levels[l];
            let (old_orbit, old_gens) = (lev.done_orbit, lev.done_gens);
            let (n_orbit, n_gens) = (lev.orbit.len(), lev.gens.len());
            if old_orbit == n_orbit && old_gens == n_gens {
                break;
            }
            let mut pending = Vec::new();
            for oi in 0..n_orbit {
                for k in 0..n_gens {
                    if oi < old_orbit && k < old_gens {
                        continue;
                    }
                    let x = lev.orbit[oi];
                    let s = &lev.gens[k];
                    let y = s.apply(x);
                    let sg = lev.transversal[&x].then(s).then(&lev.transversal[&y].inverse());
                    if !sg.is_identity() {
                        pending.push(sg);
                    }
                }
            }
            self.levels[l].done_orbit = n_orbit;
            self.levels[l].done_gens = n_gens;
            for sg in pending {
                self.extend(sg, l + 1);
            }
        }
    }
}

/// Order of the group generated by `gens`.
pub fn group_order(degree: usize, gens: &[Perm]) -> u128 {
    StabChain::new(degree, gens).order()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize, c: &[u32]) -> Perm {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for i in 0..c.len() {
            v[c[i] as usize] = c[(i + 1) % c.len()];
        }
        Perm::from_vec(v)
    }

    #[test]
    fn compose_and_invert() {
        let a = cycle(4, &[0, 1, 2]);
        let b = cycle(4, &[2, 3]);
        let ab = a.then(&b);
        for x in 0..4 {
            assert_eq!(ab.apply(x), b.apply(a.apply(x)));
        }
        assert!(ab.then(&ab.inverse()).is_identity());
        assert_eq!(a.order(), 3);
        assert_eq!(ab.order(), 4);
    }

    #[test]
    fn symmetric_group_orders() {
        for n in 3..9usize {
            let gens = [cycle(n, &(0..n as u32).collect::<Vec<_>>()), cycle(n, &[0, 1])];
            let fact: u128 = (1..=n as u128).product();
            assert_eq!(group_order(n, &gens), fact);
            if n <= 6 {
                assert_eq!(enumerate(n, &gens, 1000).unwrap().len() as u128, fact);
            }
        }
    }

    #[test]
    fn chain_membership() {
        // A_5 on 5 points
        let gens = [cycle(5, &[0, 1, 2]), cycle(5, &[0, 1, 2, 3, 4])];
        let sc = StabChain::new(5, &gens);
        assert_eq!(sc.order(), 60);
        assert!(sc.contains(&cycle(5, &[1, 3, 4])));
        assert!(!sc.contains(&cycle(5, &[0, 1])));
    }

    #[test]
    fn mathieu_m11_order() {
        // M11 = <(1,2,...,11), (3,7,11,8)(4,10,5,6)>, 0-based
        let a = cycle(11, &(0..11).collect::<Vec<_>>());
        let mut b = cycle(11, &[2, 6, 10, 7]);
        b = b.then(&cycle(11, &[3, 9, 4, 5]));
        assert_eq!(group_order(11, &[a, b]), 7920);
    }

    #[test]
    fn orbits_by_union_find() {
        let g = cycle(6, &[0, 2, 4]);
        assert_eq!(orbits(6, &[g]), vec![vec![0, 2, 4], vec![1], vec![3], vec![5]]);
    }

    #[test]
    fn prefixed_base() {
        let gens = [cycle(6, &[0, 1, 2, 3, 4, 5]), cycle(6, &[0, 1])];
        let sc = StabChain::with_base(6, &gens, &[5, 4]);
        assert_eq!(&sc.base()[..2], &[5, 4]);
        assert_eq!(sc.order(), 720);
    }
}
