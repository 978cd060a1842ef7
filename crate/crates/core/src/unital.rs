//! Affine unitals built on SL(2,q) from a subgroup `S` of order `q+1` and a
//! family of difference-like sets.
//!
//! Blocks are the right cosets `S g`, the short blocks (right cosets of the
//! Sylow p-subgroups) and the translates `D g` of each set in the family.
//! Two points `x, y` are joined by a block of the family whose quotient set
//! contains `x y^{-1}`, so the unital laws reduce to a partition condition
//! on SL(2,q) minus the identity.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::Arc;

use crate::ar::{ArElem, ArGroup, Semilinear};
use crate::design::Design;
use crate::grp::{Geometry, GroupTable, Subgroup};
use crate::perm::UnionFind;
use crate::{Error, Point, Result};

/// The quotient set `{x y^{-1} : x != y in d}` as a sorted list with
/// repetitions kept.
pub fn quotients(g: &GroupTable, d: &[Point]) -> Vec<Point> {
    let mut out = Vec::with_capacity(d.len() * d.len());
    for &x in d {
        for &y in d {
            if x != y {
                out.push(g.mul(x, g.inv(y)));
            }
        }
    }
    out.sort_unstable();
    out
}

/// True if `d` has `q+1` elements, contains the identity and all its
/// quotients are distinct.
pub fn verify_q(g: &GroupTable, d: &[Point]) -> Result<bool> {
    let k = g.q() as usize + 1;
    if d.len() != k {
        return Err(Error::BadBlockSize { expected: k, got: d.len() });
    }
    if !d.contains(&g.one()) {
        return Ok(false);
    }
    let mut qs = quotients(g, d);
    qs.dedup();
    Ok(qs.len() == k * (k - 1))
}

/// True if `S`, the Sylow subgroups and the quotient sets of the family
/// partition the non-identity elements.
pub fn verify_p(geo: &Geometry, s: &Subgroup, d_sets: &[Vec<Point>]) -> bool {
    let g = &geo.g;
    let mut hit = vec![0u32; g.order()];
    for &x in &s.members {
        hit[x as usize] += 1;
    }
    for t in &geo.sb.sylows {
        for &x in &t.members {
            hit[x as usize] += 1;
        }
    }
    for d in d_sets {
        for x in quotients(g, d) {
            hit[x as usize] += 1;
        }
    }
    let one = g.one() as usize;
    hit.iter().enumerate().all(|(x, &h)| if x == one { true } else { h == 1 })
}

/// The representative of `{d c^{-1} : c in d}` that is least as a sorted
/// list. All of these give the same block family.
pub fn canonical_d(g: &GroupTable, d: &[Point]) -> Vec<Point> {
    d.iter()
        .map(|&c| {
            let ci = g.inv(c);
            let mut v: Vec<Point> = d.iter().map(|&x| g.mul(x, ci)).collect();
            v.sort_unstable();
            v
        })
        .min()
        .expect("nonempty set")
}

/// An affine unital on the points of SL(2,q).
#[derive(Clone, Debug)]
pub struct AffineUnital {
    geo: Arc<Geometry>,
    pub s: Subgroup,
    /// Canonical representatives, sorted.
    pub d_sets: Vec<Vec<Point>>,
}

impl AffineUnital {
    /// Checks the quotient and partition conditions, builds the blocks and
    /// verifies the affine unital laws.
    pub fn new(geo: Arc<Geometry>, s: Subgroup, d_sets: Vec<Vec<Point>>) -> Result<AffineUnital> {
        let q = geo.q() as usize;
        if s.order() != q + 1 {
            return Err(Error::BadBlockSize { expected: q + 1, got: s.order() });
        }
        for d in &d_sets {
            if !verify_q(&geo.g, d)? {
                return Err(Error::AxiomViolation { axiom: "Q", witness: format!("{d:?}") });
            }
        }
        if !verify_p(&geo, &s, &d_sets) {
            return Err(Error::AxiomViolation { axiom: "P", witness: format!("{} sets", d_sets.len()) });
        }
        let mut d_sets: Vec<Vec<Point>> = d_sets.iter().map(|d| canonical_d(&geo.g, d)).collect();
        d_sets.sort();
        let u = AffineUnital { geo, s, d_sets };
        u.verify_axioms()?;
        Ok(u)
    }

    pub fn geometry(&self) -> &Geometry {
        &self.geo
    }

    pub fn geometry_arc(&self) -> Arc<Geometry> {
        Arc::clone(&self.geo)
    }

    pub fn q(&self) -> u32 {
        self.geo.q()
    }

    pub fn point_count(&self) -> usize {
        self.geo.n()
    }

    /// The blocks of size `q+1`, sorted.
    pub fn long_blocks(&self) -> Vec<Vec<Point>> {
        let g = &self.geo.g;
        let mut set = BTreeSet::new();
        for base in std::iter::once(&self.s.members).chain(self.d_sets.iter()) {
            for h in g.points() {
                let mut b: Vec<Point> = base.iter().map(|&x| g.mul(x, h)).collect();
                b.sort_unstable();
                set.insert(b);
            }
        }
        set.into_iter().collect()
    }

    /// All blocks, long and short, sorted.
    pub fn design(&self) -> Design {
        let mut blocks = self.long_blocks();
        blocks.extend(self.geo.sb.blocks.iter().map(|b| b.points.clone()));
        blocks.sort();
        Design { v: self.point_count(), blocks }
    }

    /// Checks point count, block sizes, blocks per point and unique joining
    /// blocks, reporting the first violation.
    pub fn verify_axioms(&self) -> Result<()> {
        let q = self.q() as usize;
        let d = self.design();
        let violation = |axiom: &'static str, witness: String| Err(Error::AxiomViolation { axiom, witness });
        if d.v != q * q * q - q {
            return violation("AU1", format!("{} points", d.v));
        }
        if let Some(b) = d.blocks.iter().find(|b| b.len() != q && b.len() != q + 1) {
            return violation("AU2", format!("block {b:?}"));
        }
        let pb = d.point_blocks();
        if let Some(x) = (0..d.v).find(|&x| pb[x].len() != q * q) {
            return violation("AU3", format!("point {x} on {} blocks", pb[x].len()));
        }
        let table = match d.pair_table() {
            Ok(t) => t,
            Err((x, y)) => return violation("AU4", format!("points {x},{y} on two blocks")),
        };
        for x in 0..d.v {
            for y in x + 1..d.v {
                if table[x * d.v + y] == u32::MAX {
                    return violation("AU4", format!("points {x},{y} on no block"));
                }
            }
        }
        Ok(())
    }

    /// Image of the family under a semilinear map, canonicalized.
    fn family_image(&self, perm: &[Point]) -> Vec<Vec<Point>> {
        let g = &self.geo.g;
        let mut out: Vec<Vec<Point>> = self
            .d_sets
            .iter()
            .map(|d| canonical_d(g, &d.iter().map(|&x| perm[x as usize]).collect::<Vec<_>>()))
            .collect();
        out.sort();
        out
    }

    /// Semilinear maps preserving the block set. Together with the right
    /// multiplications they form the automorphisms inside the semilinear
    /// group.
    pub fn aut_semilinear(&self, ar: &ArGroup) -> Vec<Semilinear> {
        let mut out = Vec::new();
        for (i, &semi) in ar.semilinear().iter().enumerate() {
            let perm = ar.semilinear_perm(i);
            if self.s.members.iter().all(|&x| self.s.contains(perm[x as usize])) && self.family_image(perm) == self.d_sets {
                out.push(semi);
            }
        }
        out
    }

    /// All automorphisms of the form `alpha * rho_h`.
    pub fn aut_affine(&self, ar: &ArGroup) -> Result<Vec<ArElem>> {
        if self.q() > 5 {
            return Err(Error::TooLarge(format!("q = {} exceeds 5", self.q())));
        }
        let mut out = Vec::new();
        for semi in self.aut_semilinear(ar) {
            for h in self.geo.g.points() {
                out.push(ArElem { semi, rmul: h });
            }
        }
        Ok(out)
    }
}

/// The points outside the identity, `S` and the Sylow subgroups.
pub fn residual(geo: &Geometry, s: &Subgroup) -> Vec<Point> {
    let mut mask = vec![true; geo.n()];
    mask[geo.g.one() as usize] = false;
    for &x in &s.members {
        mask[x as usize] = false;
    }
    for t in &geo.sb.sylows {
        for &x in &t.members {
            mask[x as usize] = false;
        }
    }
    (0..geo.n() as Point).filter(|&x| mask[x as usize]).collect()
}

/// All canonical sets `D` whose quotients are distinct and avoid `S` and
/// the Sylow subgroups.
pub fn candidate_d_sets(geo: &Geometry, s: &Subgroup, budget: u64) -> Result<Vec<Vec<Point>>> {
    let g = &geo.g;
    let q = geo.q() as usize;
    let res = residual(geo, s);
    let mut allowed = vec![false; geo.n()];
    for &x in &res {
        allowed[x as usize] = true;
    }
    let mut used = vec![false; geo.n()];
    let mut cur: Vec<Point> = Vec::with_capacity(q);
    let mut out = Vec::new();
    let mut nodes = 0u64;

    #[allow(clippy::too_many_arguments)]
    fn rec(
        g: &GroupTable,
        res: &[Point],
        start: usize,
        q: usize,
        allowed: &[bool],
        used: &mut [bool],
        cur: &mut Vec<Point>,
        out: &mut Vec<Vec<Point>>,
        nodes: &mut u64,
        budget: u64,
    ) -> bool {
        *nodes += 1;
        if budget != 0 && *nodes > budget {
            return false;
        }
        if cur.len() == q {
            let mut d = cur.clone();
            d.push(g.one());
            d.sort_unstable();
            if canonical_d(g, &d) == d {
                out.push(d);
            }
            return true;
        }
        for i in start..res.len() {
            let z = res[i];
            if used[z as usize] {
                continue;
            }
            let zi = g.inv(z);
            let mut fresh = vec![z, zi];
            for &y in cur.iter() {
                let yi = g.inv(y);
                fresh.push(g.mul(z, yi));
                fresh.push(g.mul(y, zi));
            }
            let mut ok = true;
            let mut k = 0;
            while k < fresh.len() {
                let x = fresh[k] as usize;
                if !allowed[x] || used[x] {
                    ok = false;
                    break;
                }
                used[x] = true;
                k += 1;
            }
            if ok {
                cur.push(z);
                let go = rec(g, res, i + 1, q, allowed, used, cur, out, nodes, budget);
                cur.pop();
                if !go {
                    for &x in &fresh[..k] {
                        used[x as usize] = false;
                    }
                    return false;
                }
            }
            for &x in &fresh[..k] {
                used[x as usize] = false;
            }
        }
        true
    }

    let done = rec(g, &res, 0, q, &allowed, &mut used, &mut cur, &mut out, &mut nodes, budget);
    if !done {
        return Err(Error::Timeout { budget, found: out.len() });
    }
    out.sort();
    Ok(out)
}

/// Every family of `q-2` canonical sets satisfying the quotient and
/// partition conditions for the given `S`, sorted.
///
/// The least uncovered residual element `x` is a quotient `a b^{-1}` of
/// exactly one set of a family, and the translate by `b^{-1}` contains both
/// the identity and `x`. Building each set from that pair reaches every
/// family exactly once.
pub fn search_d_sets(geo: &Geometry, s: &Subgroup, budget: u64) -> Result<Vec<Vec<Vec<Point>>>> {
    let mut st = FamilySearch::new(geo, s, budget);
    if !st.family() {
        return Err(Error::Timeout { budget, found: st.out.len() });
    }
    let mut out = st.out;
    if geo.q() == 2 && out.is_empty() {
        out.push(Vec::new());
    }
    out.sort();
    Ok(out)
}

const NONE: u32 = u32::MAX;

/// Backtracking state over residual indices. `quot[i * r + j]` is the index
/// of `res[i] res[j]^{-1}`, or `NONE` when that element is not residual.
struct FamilySearch<'a> {
    g: &'a GroupTable,
    res: Vec<Point>,
    quot: Vec<u32>,
    inv: Vec<u32>,
    k: usize,
    free: Vec<bool>,
    family: Vec<Vec<u32>>,
    out: Vec<Vec<Vec<Point>>>,
    nodes: u64,
    budget: u64,
}

impl<'a> FamilySearch<'a> {
    fn new(geo: &'a Geometry, s: &Subgroup, budget: u64) -> Self {
        let g = &geo.g;
        let res = residual(geo, s);
        let r = res.len();
        let mut index = vec![NONE; geo.n()];
        for (i, &x) in res.iter().enumerate() {
            index[x as usize] = i as u32;
        }
        let inv: Vec<u32> = res.iter().map(|&x| index[g.inv(x) as usize]).collect();
        let mut quot = vec![NONE; r * r];
        for (i, &x) in res.iter().enumerate() {
            for (j, &y) in res.iter().enumerate() {
                if i != j {
                    quot[i * r + j] = index[g.mul(x, g.inv(y)) as usize];
                }
            }
        }
        FamilySearch { g, res, quot, inv, k: geo.q() as usize + 1, free: vec![true; r], family: Vec::new(), out: Vec::new(), nodes: 0, budget }
    }

    /// Claims the quotients added by `z` to the set `{1} + d`. Returns how
    /// many were written to `buf`, or `None` if one is taken or repeated.
    fn claim(&mut self, d: &[u32], z: u32, buf: &mut [u32]) -> Option<usize> {
        let r = self.res.len();
        let mut n = 0;
        buf[n] = z;
        buf[n + 1] = self.inv[z as usize];
        n += 2;
        for &y in d {
            buf[n] = self.quot[z as usize * r + y as usize];
            buf[n + 1] = self.quot[y as usize * r + z as usize];
            n += 2;
        }
        for i in 0..n {
            let x = buf[i];
            if x == NONE || !self.free[x as usize] {
                for &y in &buf[..i] {
                    self.free[y as usize] = true;
                }
                return None;
            }
            self.free[x as usize] = false;
        }
        Some(n)
    }

    fn release(&mut self, fresh: &[u32]) {
        for &x in fresh {
            self.free[x as usize] = true;
        }
    }

    fn tick(&mut self) -> bool {
        self.nodes += 1;
        self.budget == 0 || self.nodes <= self.budget
    }

    fn family(&mut self) -> bool {
        if !self.tick() {
            return false;
        }
        let Some(x) = self.free.iter().position(|&f| f) else {
            let one = self.g.one();
            let mut fam: Vec<Vec<Point>> = self
                .family
                .iter()
                .map(|d| {
                    let mut pts: Vec<Point> = d.iter().map(|&i| self.res[i as usize]).collect();
                    pts.push(one);
                    canonical_d(self.g, &pts)
                })
                .collect();
            fam.sort();
            self.out.push(fam);
            return true;
        };
        let mut buf = [0u32; 2];
        let Some(n) = self.claim(&[], x as u32, &mut buf) else { return true };
        let mut d = vec![x as u32];
        let cands = self.viable(&d, (x as u32 + 1..self.res.len() as u32).collect());
        let go = self.extend(&mut d, &cands);
        self.release(&buf[..n]);
        go
    }

    /// Keeps the candidates that are free and whose quotients with the set
    /// `{1} + d` are free.
    fn viable(&self, d: &[u32], cands: Vec<u32>) -> Vec<u32> {
        let r = self.res.len();
        let ok = |x: u32| x != NONE && self.free[x as usize];
        cands
            .into_iter()
            .filter(|&w| {
                ok(w) && ok(self.inv[w as usize]) && d.iter().all(|&y| ok(self.quot[w as usize * r + y as usize]) && ok(self.quot[y as usize * r + w as usize]))
            })
            .collect()
    }

    fn extend(&mut self, d: &mut Vec<u32>, cands: &[u32]) -> bool {
        if d.len() + 1 == self.k {
            self.family.push(d.clone());
            let go = self.family();
            self.family.pop();
            return go;
        }
        if !self.tick() {
            return false;
        }
        let need = self.k - 1 - d.len();
        let mut buf = vec![0u32; 2 * self.k];
        for (i, &z) in cands.iter().enumerate() {
            if cands.len() - i < need {
                break;
            }
            if let Some(n) = self.claim(d, z, &mut buf) {
                d.push(z);
                let next = self.viable(d, cands[i + 1..].to_vec());
                let go = next.len() + 1 < need || self.extend(d, &next);
                d.pop();
                self.release(&buf[..n]);
                if !go {
                    return false;
                }
            }
        }
        true
    }
}

/// Solutions grouped by the action of semilinear maps fixing `S`. Returns
/// one list of solution indices per orbit, ordered by least member.
pub fn solution_orbits(geo: &Geometry, ar: &ArGroup, s: &Subgroup, sols: &[Vec<Vec<Point>>]) -> Vec<Vec<usize>> {
    let g = &geo.g;
    let index: HashMap<&Vec<Vec<Point>>, usize> = sols.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let mut uf = UnionFind::new(sols.len());
    for i in 0..ar.semilinear_order() {
        let perm = ar.semilinear_perm(i);
        if !s.members.iter().all(|&x| s.contains(perm[x as usize])) {
            continue;
        }
        for (k, sol) in sols.iter().enumerate() {
            let mut img: Vec<Vec<Point>> = sol
                .iter()
                .map(|d| canonical_d(g, &d.iter().map(|&x| perm[x as usize]).collect::<Vec<_>>()))
                .collect();
            img.sort();
            if let Some(&j) = index.get(&img) {
                uf.union(k as u32, j as u32);
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..sols.len() {
        groups.entry(uf.find(i as u32)).or_default().push(i);
    }
    groups.into_values().collect()
}

/// One isomorphism type of affine unitals with a fixed `S`.
#[derive(Clone, Debug)]
pub struct UnitalType {
    pub unital: AffineUnital,
    /// Number of search solutions of this type.
    pub solutions: usize,
    /// Order of the automorphism group inside the semilinear group.
    pub aut_order: usize,
}

/// Searches all families for `S` and returns one representative per type,
/// sorted by decreasing automorphism group order (the classical type, with
/// the largest group, comes first).
pub fn classify(geo: Arc<Geometry>, ar: &ArGroup, s: &Subgroup, budget: u64) -> Result<Vec<UnitalType>> {
    let sols = search_d_sets(&geo, s, budget)?;
    let orbits = solution_orbits(&geo, ar, s, &sols);
    let mut out = Vec::new();
    for orb in orbits {
        let u = AffineUnital::new(Arc::clone(&geo), s.clone(), sols[orb[0]].clone())?;
        let aut_order = u.aut_semilinear(ar).len() * geo.n();
        out.push(UnitalType { unital: u, solutions: orb.len(), aut_order });
    }
    out.sort_by(|a, b| b.aut_order.cmp(&a.aut_order).then_with(|| a.unital.d_sets.cmp(&b.unital.d_sets)));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(q: u32) -> Arc<Geometry> {
        Arc::new(Geometry::of_order(q).unwrap())
    }

    #[test]
    fn quotient_condition() {
        let g = geo(4);
        let t = &g.sb.sylows[0].members;
        // A Sylow subgroup has only q-1 distinct quotients.
        let mut s = t.clone();
        s.push(g.sb.sylows[1].members[1]);
        s.sort_unstable();
        assert!(!verify_q(&g.g, &s).unwrap());
        assert!(matches!(verify_q(&g.g, t), Err(Error::BadBlockSize { .. })));
        let mut qs = quotients(&g.g, t);
        qs.dedup();
        assert_eq!(qs.len(), 3);
    }

    #[test]
    fn order_two_needs_no_family() {
        let g = geo(2);
        let s = g.g.cyclic_s();
        assert!(verify_p(&g, &s, &[]));
        let u = AffineUnital::new(g, s, vec![]).unwrap();
        assert_eq!(u.point_count(), 6);
    }

    #[test]
    fn partition_sizes_order_four() {
        let g = geo(4);
        let s = g.g.cyclic_s();
        assert_eq!(residual(&g, &s).len(), 40);
        let sols = search_d_sets(&g, &s, 0).unwrap();
        assert!(!sols.is_empty());
        for sol in &sols {
            assert_eq!(sol.len(), 2);
            assert!(verify_p(&g, &s, sol));
            for d in sol {
                assert_eq!(quotients(&g.g, d).len(), 20);
            }
        }
        // Overlapping quotient sets break the partition.
        let d = sols[0][0].clone();
        assert!(!verify_p(&g, &s, &[d.clone(), d]));
    }

    #[test]
    fn affine_laws_hold_on_every_solution() {
        for q in [3, 4] {
            let g = geo(q);
            let s = g.g.cyclic_s();
            for sol in search_d_sets(&g, &s, 0).unwrap() {
                let u = AffineUnital::new(Arc::clone(&g), s.clone(), sol).unwrap();
                let d = u.design();
                let q = q as usize;
                assert_eq!(d.blocks.len(), q * q * (q * q - q + 1) - 1);
                assert!(d.blocks.iter().all(|b| b.len() == q || b.len() == q + 1));
            }
        }
    }

    #[test]
    fn two_types_of_order_four() {
        let g = geo(4);
        let ar = ArGroup::new(&g.g);
        let s = g.g.cyclic_s();
        let types = classify(Arc::clone(&g), &ar, &s, 0).unwrap();
        let orders: Vec<usize> = types.iter().map(|t| t.aut_order).collect();
        assert_eq!(orders, vec![1200, 240]);
    }

    #[test]
    fn one_type_of_order_three() {
        let g = geo(3);
        let ar = ArGroup::new(&g.g);
        let s = g.g.cyclic_s();
        let types = classify(Arc::clone(&g), &ar, &s, 0).unwrap();
        assert_eq!(types.len(), 1);
    }

    #[test]
    fn automorphisms_match_brute_force() {
        let g = geo(3);
        let ar = ArGroup::new(&g.g);
        let s = g.g.cyclic_s();
        let sol = search_d_sets(&g, &s, 0).unwrap().remove(0);
        let u = AffineUnital::new(Arc::clone(&g), s, sol).unwrap();
        let d = u.design();
        let brute = ar.filter(&g.g, |perm| d.is_automorphism(perm));
        let mut fast = u.aut_affine(&ar).unwrap();
        let mut brute = brute;
        fast.sort();
        brute.sort();
        assert_eq!(fast, brute);
        // Right multiplications are always automorphisms.
        assert!(g.g.points().all(|h| fast.contains(&ArElem::rho(&g.g, h))));
    }
}
