//! Parallelisms on the short blocks: the standard families, verification,
//! exhaustive enumeration and the action of the semilinear group.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::ar::{ArElem, ArGroup};
use crate::exact_cover::ExactCover;
use crate::grp::{GroupElem, Geometry, Side};
use crate::perm::{Perm, StabChain};
use crate::{BlockId, Error, Point, Result};

/// A partition of the short blocks into `q+1` classes.
///
/// Classes are numbered by their least block id and each class lists its
/// blocks in ascending order, so equal partitions compare equal.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Parallelism {
    class_of: Vec<u32>,
    count: u32,
}

/// The named constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ParallelismKind {
    /// Right cosets of each Sylow subgroup.
    Flat,
    /// Left cosets of each Sylow subgroup.
    Natural,
    /// The square-entry construction for odd `q`.
    Odd,
    /// Its twin with the two halves swapped.
    OddPrime,
    /// The subfield construction for square `q`.
    Square,
    /// Pointwise inverse of [`ParallelismKind::Square`].
    SquareInverse,
}

impl ParallelismKind {
    pub const ALL: [ParallelismKind; 6] = [
        ParallelismKind::Flat,
        ParallelismKind::Natural,
        ParallelismKind::Odd,
        ParallelismKind::OddPrime,
        ParallelismKind::Square,
        ParallelismKind::SquareInverse,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ParallelismKind::Flat => "flat",
            ParallelismKind::Natural => "natural",
            ParallelismKind::Odd => "odd",
            ParallelismKind::OddPrime => "odd-prime",
            ParallelismKind::Square => "sq",
            ParallelismKind::SquareInverse => "sq-inv",
        }
    }

    pub fn build(self, geo: &Geometry) -> Result<Parallelism> {
        match self {
            ParallelismKind::Flat => Ok(Parallelism::flat(geo)),
            ParallelismKind::Natural => Ok(Parallelism::natural(geo)),
            ParallelismKind::Odd => Parallelism::odd(geo, false),
            ParallelismKind::OddPrime => Parallelism::odd(geo, true),
            ParallelismKind::Square => Parallelism::square(geo),
            ParallelismKind::SquareInverse => Ok(Parallelism::square(geo)?.inverted(geo)),
        }
    }
}

impl fmt::Display for ParallelismKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ParallelismKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ParallelismKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::BadMode(s.to_string()))
    }
}

/// Which entries count for the set of "good" matrices.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OmegaMode {
    /// Lower-left entry is a square (zero included).
    Odd,
    /// Lower-left entry lies in the index-2 subfield.
    Square,
}

impl Parallelism {
    /// Canonicalizes an arbitrary class labelling.
    pub fn from_labels(labels: &[u32]) -> Parallelism {
        let mut remap: HashMap<u32, u32> = HashMap::new();
        let class_of = labels
            .iter()
            .map(|&c| {
                let k = remap.len() as u32;
                *remap.entry(c).or_insert(k)
            })
            .collect();
        Parallelism { class_of, count: remap.len() as u32 }
    }

    /// Builds a parallelism from explicit classes after checking that they
    /// partition the block universe and satisfy the parallelism laws.
    pub fn from_classes(geo: &Geometry, classes: &[Vec<BlockId>]) -> Result<Parallelism> {
        let rep = verify_classes(geo, classes);
        if let Some(w) = rep.witness {
            return Err(Error::InvalidParallelism(w));
        }
        let mut labels = vec![0u32; geo.block_count()];
        for (i, c) in classes.iter().enumerate() {
            for &b in c {
                labels[b as usize] = i as u32;
            }
        }
        Ok(Parallelism::from_labels(&labels))
    }

    fn from_families<F>(geo: &Geometry, side: F) -> Parallelism
    where
        F: Fn(BlockId) -> u32,
    {
        let labels: Vec<u32> = (0..geo.block_count() as BlockId).map(side).collect();
        Parallelism::from_labels(&labels)
    }

    /// Classes are the right cosets of one Sylow subgroup each.
    pub fn flat(geo: &Geometry) -> Parallelism {
        Parallelism::from_families(geo, |b| geo.sb.block(b).right)
    }

    /// Classes are the left cosets of one Sylow subgroup each.
    pub fn natural(geo: &Geometry) -> Parallelism {
        Parallelism::from_families(geo, |b| geo.sb.block(b).left)
    }

    /// The spread made of `T0 g` for `g` in `omega` and `g T0` otherwise.
    fn seed_class(geo: &Geometry, omega: &[bool], swap: bool) -> Vec<BlockId> {
        let set: BTreeSet<BlockId> = geo
            .g
            .points()
            .map(|x| {
                let side = if omega[x as usize] != swap { Side::Right } else { Side::Left };
                geo.sb.coset(0, x, side)
            })
            .collect();
        set.into_iter().collect()
    }

    /// Orbit of one class under point maps, as a parallelism.
    fn from_seed<I>(geo: &Geometry, seed: &[BlockId], maps: I) -> Result<Parallelism>
    where
        I: Iterator<Item = Vec<Point>>,
    {
        let mut classes = BTreeSet::new();
        for perm in maps {
            let mut img: Vec<BlockId> = seed.iter().map(|&b| geo.sb.image_fast(&geo.g, b, &perm)).collect();
            img.sort_unstable();
            classes.insert(img);
        }
        let classes: Vec<Vec<BlockId>> = classes.into_iter().collect();
        Parallelism::from_classes(geo, &classes)
    }

    /// The conjugation-orbit construction for odd `q`; `primed` swaps the
    /// roles of the set of good matrices and its complement.
    pub fn odd(geo: &Geometry, primed: bool) -> Result<Parallelism> {
        let q = geo.q();
        if q.is_multiple_of(2) {
            return Err(Error::EvenOrder(q));
        }
        let omega = omega_mask(geo, OmegaMode::Odd)?;
        let seed = Parallelism::seed_class(geo, &omega, primed);
        let g = &geo.g;
        Parallelism::from_seed(geo, &seed, g.points().map(|h| g.points().map(|x| g.conj(x, h)).collect()))
    }

    /// The construction for square `q` using the twisted action
    /// `x -> h^{-1} x bar(h)`.
    pub fn square(geo: &Geometry) -> Result<Parallelism> {
        let omega = omega_mask(geo, OmegaMode::Square)?;
        let seed = Parallelism::seed_class(geo, &omega, false);
        let g = &geo.g;
        let maps: Result<Vec<Vec<Point>>> =
            g.points().map(|h| g.points().map(|x| g.theta_apply(h, x)).collect()).collect();
        Parallelism::from_seed(geo, &seed, maps?.into_iter())
    }

    pub fn q_plus_one(&self) -> usize {
        self.count as usize
    }

    pub fn class_count(&self) -> usize {
        self.q_plus_one()
    }

    /// Class index of a block.
    pub fn class_of(&self, b: BlockId) -> u32 {
        self.class_of[b as usize]
    }

    pub fn labels(&self) -> &[u32] {
        &self.class_of
    }

    pub fn classes(&self) -> Vec<Vec<BlockId>> {
        let mut out = vec![Vec::new(); self.q_plus_one()];
        for (b, &c) in self.class_of.iter().enumerate() {
            out[c as usize].push(b as BlockId);
        }
        out
    }

    /// Class containing the Sylow subgroup with the given id.
    pub fn class_of_sylow(&self, geo: &Geometry, sylow: u32) -> u32 {
        self.class_of(geo.sb.sylow_block(sylow, &geo.g))
    }

    /// Image under a permutation of the block universe.
    pub fn apply_block_perm(&self, bperm: &[BlockId]) -> Parallelism {
        let mut labels = vec![0u32; self.class_of.len()];
        for (b, &c) in self.class_of.iter().enumerate() {
            labels[bperm[b] as usize] = c;
        }
        Parallelism::from_labels(&labels)
    }

    /// Image under a point permutation that preserves the short blocks.
    pub fn image(&self, geo: &Geometry, perm: &[Point]) -> Parallelism {
        let bperm: Vec<BlockId> =
            (0..geo.block_count() as BlockId).map(|b| geo.sb.image_fast(&geo.g, b, perm)).collect();
        self.apply_block_perm(&bperm)
    }

    pub fn apply(&self, geo: &Geometry, t: &ArElem) -> Parallelism {
        self.image(geo, &t.point_perm(&geo.g))
    }

    /// Image under pointwise inversion of the group.
    pub fn inverted(&self, geo: &Geometry) -> Parallelism {
        let g = &geo.g;
        let perm: Vec<Point> = g.points().map(|x| g.inv(x)).collect();
        self.image(geo, &perm)
    }

    /// True if the point map sends every class onto a class.
    pub fn preserved_by<F>(&self, geo: &Geometry, map: F) -> bool
    where
        F: Fn(Point) -> Point,
    {
        let mut cmap = vec![u32::MAX; self.q_plus_one()];
        for (b, blk) in geo.sb.blocks.iter().enumerate() {
            let x = map(blk.points[0]);
            let y = map(blk.points[1]);
            let Some(img) = geo.sb.block_through(&geo.g, x, y) else {
                return false;
            };
            let c = self.class_of[b] as usize;
            let d = self.class_of[img as usize];
            if cmap[c] == u32::MAX {
                cmap[c] = d;
            } else if cmap[c] != d {
                return false;
            }
        }
        true
    }
}

/// Membership mask of the good matrices.
pub fn omega_mask(geo: &Geometry, mode: OmegaMode) -> Result<Vec<bool>> {
    let f = geo.g.field();
    geo.g
        .elems()
        .iter()
        .map(|m| {
            let c = m.lower_left();
            match mode {
                OmegaMode::Odd => {
                    if f.order().is_multiple_of(2) {
                        Err(Error::BadMode("odd mode needs odd order".into()))
                    } else {
                        Ok(f.is_square(c))
                    }
                }
                OmegaMode::Square => f.in_subfield(c).map_err(|_| Error::BadMode("square mode needs square order".into())),
            }
        })
        .collect()
}

/// The good matrices as a sorted point list.
pub fn omega(geo: &Geometry, mode: OmegaMode) -> Result<Vec<Point>> {
    Ok(omega_mask(geo, mode)?
        .into_iter()
        .enumerate()
        .filter(|&(_, m)| m)
        .map(|(i, _)| i as Point)
        .collect())
}

/// Outcome of [`verify_classes`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParallelismReport {
    pub ok: bool,
    pub witness: Option<String>,
}

impl fmt::Display for ParallelismReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => f.write_str("ok"),
            Some(w) => write!(f, "violation: {w}"),
        }
    }
}

/// Checks class count, class sizes, disjointness inside each class and that
/// every short block is used exactly once.
pub fn verify_classes(geo: &Geometry, classes: &[Vec<BlockId>]) -> ParallelismReport {
    let fail = |w: String| ParallelismReport { ok: false, witness: Some(w) };
    let q = geo.q() as usize;
    let nb = geo.block_count();
    if classes.len() != q + 1 {
        return fail(format!("{} classes, expected {}", classes.len(), q + 1));
    }
    let mut used = vec![u32::MAX; nb];
    let mut owner = vec![u32::MAX; geo.n()];
    for (ci, c) in classes.iter().enumerate() {
        if c.len() != q * q - 1 {
            return fail(format!("class {ci} has {} blocks, expected {}", c.len(), q * q - 1));
        }
        for &b in c {
            if b as usize >= nb {
                return fail(format!("class {ci} contains unknown block {b}"));
            }
            if used[b as usize] != u32::MAX {
                return fail(format!("block {b} lies in classes {} and {ci}", used[b as usize]));
            }
            used[b as usize] = ci as u32;
            for &x in &geo.sb.block(b).points {
                let o = owner[x as usize];
                if o != u32::MAX && used[o as usize] == ci as u32 {
                    return fail(format!("blocks {o} and {b} of class {ci} meet in point {x}"));
                }
                owner[x as usize] = b;
            }
        }
    }
    if let Some(b) = used.iter().position(|&u| u == u32::MAX) {
        return fail(format!("block {b} is in no class"));
    }
    ParallelismReport { ok: true, witness: None }
}

pub fn verify_parallelism(geo: &Geometry, p: &Parallelism) -> ParallelismReport {
    if p.class_of.len() != geo.block_count() {
        return ParallelismReport { ok: false, witness: Some("wrong number of blocks".into()) };
    }
    verify_classes(geo, &p.classes())
}

/// All spreads: sets of pairwise disjoint short blocks covering every point.
pub fn spreads(geo: &Geometry, budget: u64) -> Result<Vec<Vec<BlockId>>> {
    let mut ec = ExactCover::new(geo.n());
    for b in &geo.sb.blocks {
        let items: Vec<usize> = b.points.iter().map(|&x| x as usize).collect();
        ec.add_option(&items);
    }
    let mut out = Vec::new();
    let st = ec.solve(budget, |s| {
        out.push(s.iter().map(|&b| b as BlockId).collect());
        true
    });
    if !st.complete {
        return Err(Error::Timeout { budget, found: out.len() });
    }
    out.sort();
    Ok(out)
}

/// Every parallelism on the short blocks, sorted. Runs an exact cover over
/// points to find the spreads and a second one over blocks to combine them.
/// A `budget` of 0 disables the node limit.
pub fn enumerate_parallelisms(geo: &Geometry, budget: u64) -> Result<Vec<Parallelism>> {
    let spreads = spreads(geo, budget)?;
    let mut ec = ExactCover::new(geo.block_count());
    for s in &spreads {
        let items: Vec<usize> = s.iter().map(|&b| b as usize).collect();
        ec.add_option(&items);
    }
    let mut out = Vec::new();
    let mut labels = vec![0u32; geo.block_count()];
    let st = ec.solve(budget, |sol| {
        for (i, &si) in sol.iter().enumerate() {
            for &b in &spreads[si] {
                labels[b as usize] = i as u32;
            }
        }
        out.push(Parallelism::from_labels(&labels));
        true
    });
    if !st.complete {
        return Err(Error::Timeout { budget, found: out.len() });
    }
    out.sort();
    out.dedup();
    Ok(out)
}

/// Elements of the full semilinear-times-right-multiplication group
/// stabilizing `p`, by exhaustive filtering with early rejection.
pub fn stabilizer(geo: &Geometry, ar: &ArGroup, p: &Parallelism) -> Vec<ArElem> {
    let g = &geo.g;
    ar.semilinear()
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, &semi)| {
            let sp = ar.semilinear_perm(i);
            g.points()
                .filter(move |&h| p.preserved_by(geo, |x| g.mul(sp[x as usize], h)))
                .map(move |h| ArElem { semi, rmul: h })
        })
        .collect()
}

/// Elements of `elems` stabilizing `p`.
pub fn stabilizer_in(geo: &Geometry, elems: &[ArElem], p: &Parallelism) -> Vec<ArElem> {
    elems
        .iter()
        .filter(|t| {
            let perm = t.point_perm(&geo.g);
            p.preserved_by(geo, |x| perm[x as usize])
        })
        .copied()
        .collect()
}

/// A generating set of the semilinear-times-right-multiplication group:
/// conjugations generating PGL(2,q), the Frobenius map, and right
/// multiplications by both unitriangular subgroups.
pub fn ar_generators(geo: &Geometry) -> Vec<ArElem> {
    let g = &geo.g;
    let f = g.field();
    let one = f.from_int(1);
    let zero = f.from_int(0);
    let w = f.generator();
    let mats = [
        GroupElem::from_entries([w, zero, zero, one]),
        GroupElem::from_entries([one, one, zero, one]),
        GroupElem::from_entries([zero, one, one, zero]),
    ];
    let mut gens: Vec<ArElem> = mats.iter().map(|m| ArElem::gamma(g, m)).collect();
    if f.e() > 1 {
        gens.push(ArElem::phi(g, 1));
    }
    for x in f.nonzero() {
        for m in [GroupElem::from_entries([one, x, zero, one]), GroupElem::from_entries([one, zero, x, one])] {
            gens.push(ArElem::rho(g, g.index_of(&m).expect("unitriangular")));
        }
    }
    gens
}

/// The orbit of `p` under the group generated by the given point maps.
pub fn orbit_of(geo: &Geometry, p: &Parallelism, gens: &[Vec<Point>], limit: usize) -> Option<Vec<Parallelism>> {
    let bperms: Vec<Vec<BlockId>> = gens
        .iter()
        .map(|perm| (0..geo.block_count() as BlockId).map(|b| geo.sb.image_fast(&geo.g, b, perm)).collect())
        .collect();
    let mut seen: HashSet<Parallelism> = HashSet::new();
    seen.insert(p.clone());
    let mut queue = vec![p.clone()];
    let mut i = 0;
    while i < queue.len() {
        for bp in &bperms {
            let img = queue[i].apply_block_perm(bp);
            if seen.insert(img.clone()) {
                if queue.len() >= limit {
                    return None;
                }
                queue.push(img);
            }
        }
        i += 1;
    }
    queue.sort();
    Some(queue)
}

/// Stabilizer order by orbit counting: `#group / #orbit`.
pub fn stabilizer_order_by_orbit(geo: &Geometry, p: &Parallelism) -> u128 {
    let gens: Vec<Vec<Point>> = ar_generators(geo).iter().map(|t| t.point_perm(&geo.g)).collect();
    let perms: Vec<Perm> = gens.iter().cloned().map(Perm::from_vec).collect();
    let total = StabChain::new(geo.n(), &perms).order();
    let orbit = orbit_of(geo, p, &gens, usize::MAX).expect("no limit");
    total / orbit.len() as u128
}

/// Generators of the group built from the twisted maps, the Frobenius map
/// and right multiplication by `-1`, for square `q`.
pub fn twisted_generators(geo: &Geometry) -> Result<Vec<ArElem>> {
    let g = &geo.g;
    let f = g.field();
    let one = f.from_int(1);
    let zero = f.from_int(0);
    let mut gens = Vec::new();
    for x in f.nonzero() {
        for m in [GroupElem::from_entries([one, x, zero, one]), GroupElem::from_entries([one, zero, x, one])] {
            gens.push(ArElem::theta(g, g.index_of(&m).expect("unitriangular"))?);
        }
    }
    gens.push(ArElem::phi(g, 1));
    gens.push(ArElem::rho(g, g.minus_one()));
    Ok(gens)
}

/// Orbits of a list of parallelisms under a group given by its elements.
/// Returns, for each orbit, the indices of its members in ascending order;
/// orbits are listed by their least member.
pub fn orbits(geo: &Geometry, paras: &[Parallelism], group: &[ArElem]) -> Vec<Vec<usize>> {
    let index: HashMap<&Parallelism, usize> = paras.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let mut uf = crate::perm::UnionFind::new(paras.len());
    for t in group {
        let perm = t.point_perm(&geo.g);
        let bperm: Vec<BlockId> = (0..geo.block_count() as BlockId).map(|b| geo.sb.image_fast(&geo.g, b, &perm)).collect();
        for (i, p) in paras.iter().enumerate() {
            let img = p.apply_block_perm(&bperm);
            if let Some(&j) = index.get(&img) {
                uf.union(i as u32, j as u32);
            }
        }
    }
    let mut groups: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for i in 0..paras.len() {
        groups.entry(uf.find(i as u32)).or_default().push(i);
    }
    groups.into_values().collect()
}

/// Coset types inside one class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassCensus {
    pub class: u32,
    /// Sylow id with the most right cosets in the class.
    pub right_sylow: u32,
    pub right_count: usize,
    /// Sylow id with the most left cosets among the other blocks.
    pub left_sylow: Option<u32>,
    /// Right cosets of `right_sylow` that are also left cosets of `left_sylow`.
    pub both_count: usize,
    /// Blocks that are left cosets of `left_sylow` but not right cosets of
    /// `right_sylow`.
    pub pure_left_count: usize,
    /// Blocks fitting neither description.
    pub other_count: usize,
}

/// Per-class census of right and left coset types.
pub fn class_census(geo: &Geometry, p: &Parallelism) -> Vec<ClassCensus> {
    let mut out = Vec::new();
    for (ci, c) in p.classes().into_iter().enumerate() {
        let mut rc: BTreeMap<u32, usize> = BTreeMap::new();
        for &b in &c {
            *rc.entry(geo.sb.block(b).right).or_default() += 1;
        }
        let (&rs, &rcount) = rc.iter().max_by_key(|&(s, n)| (*n, std::cmp::Reverse(*s))).expect("nonempty class");
        let mut lc: BTreeMap<u32, usize> = BTreeMap::new();
        for &b in &c {
            let blk = geo.sb.block(b);
            if blk.right != rs {
                *lc.entry(blk.left).or_default() += 1;
            }
        }
        let ls = lc.iter().max_by_key(|&(s, n)| (*n, std::cmp::Reverse(*s))).map(|(&s, _)| s);
        let mut both = 0;
        let mut pure_left = 0;
        let mut other = 0;
        for &b in &c {
            let blk = geo.sb.block(b);
            let is_left = Some(blk.left) == ls;
            if blk.right == rs {
                if is_left {
                    both += 1;
                }
            } else if is_left {
                pure_left += 1;
            } else {
                other += 1;
            }
        }
        out.push(ClassCensus {
            class: ci as u32,
            right_sylow: rs,
            right_count: rcount,
            left_sylow: ls,
            both_count: both,
            pure_left_count: pure_left,
            other_count: other,
        });
    }
    out
}

/// Sylow id of the entrywise conjugate of a Sylow subgroup.
pub fn bar_sylow(geo: &Geometry, sylow: u32) -> Result<u32> {
    let t = &geo.sb.sylows[sylow as usize];
    let x = t.members.iter().copied().find(|&x| x != geo.g.one()).expect("nontrivial");
    let xb = geo.g.bar_point(x)?;
    Ok(geo.sb.sylow_of(xb).expect("bar maps p-elements to p-elements"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn geo(q: u32) -> Geometry {
        Geometry::of_order(q).unwrap()
    }

    #[test]
    fn flat_and_natural_are_parallelisms() {
        for q in [2, 3, 4, 5, 7, 8, 9] {
            let g = geo(q);
            let f = Parallelism::flat(&g);
            let n = Parallelism::natural(&g);
            assert!(verify_parallelism(&g, &f).ok, "flat q={q}");
            assert!(verify_parallelism(&g, &n).ok, "natural q={q}");
            assert_eq!(f.class_count(), q as usize + 1);
            assert_ne!(f, n);
            // The Sylow subgroups themselves land one per class in both.
            let cl: BTreeSet<u32> = (0..=q).map(|s| f.class_of_sylow(&g, s)).collect();
            assert_eq!(cl.len(), q as usize + 1);
            let cl: BTreeSet<u32> = (0..=q).map(|s| n.class_of_sylow(&g, s)).collect();
            assert_eq!(cl.len(), q as usize + 1);
        }
    }

    #[test]
    fn inverting_flat_gives_natural() {
        for q in [2, 3, 4] {
            let g = geo(q);
            assert_eq!(Parallelism::flat(&g).inverted(&g), Parallelism::natural(&g));
        }
    }

    #[test]
    fn omega_sizes() {
        let g = geo(3);
        let om = omega(&g, OmegaMode::Odd).unwrap();
        assert_eq!(om.len(), 15);
        assert!(om.contains(&g.g.one()));
        let nt = g.g.normalizer(&g.g.t0());
        assert!(nt.members.iter().all(|x| om.contains(x)));
        assert!(omega(&geo(4), OmegaMode::Odd).is_err());
        assert!(omega(&geo(3), OmegaMode::Square).is_err());
        // Both unions of left and right cosets of T0.
        let g = geo(5);
        let mask = omega_mask(&g, OmegaMode::Odd).unwrap();
        for x in g.g.points() {
            for &t in &g.sb.sylows[0].members {
                assert_eq!(mask[x as usize], mask[g.g.mul(t, x) as usize]);
                assert_eq!(mask[x as usize], mask[g.g.mul(x, t) as usize]);
            }
        }
    }

    #[test]
    fn odd_constructions() {
        for q in [3, 5, 7] {
            let g = geo(q);
            let p = Parallelism::odd(&g, false).unwrap();
            let pp = Parallelism::odd(&g, true).unwrap();
            assert!(verify_parallelism(&g, &p).ok);
            assert!(verify_parallelism(&g, &pp).ok);
            assert_ne!(p, Parallelism::flat(&g));
            assert_ne!(p, Parallelism::natural(&g));
            // Conjugation by diag(1, v) with v a non-square swaps the two.
            let f = g.g.field();
            let v = f.nonzero().find(|&v| !f.is_square(v)).unwrap();
            let d = GroupElem::from_entries([f.from_int(1), f.from_int(0), f.from_int(0), v]);
            assert_eq!(p.apply(&g, &ArElem::gamma(&g.g, &d)), pp);
        }
        assert!(matches!(Parallelism::odd(&geo(4), false), Err(Error::EvenOrder(4))));
    }

    #[test]
    fn square_construction_order_four() {
        let g = geo(4);
        let p = Parallelism::square(&g).unwrap();
        assert!(verify_parallelism(&g, &p).ok);
        assert_eq!(p.class_count(), 5);
        let inv = p.inverted(&g);
        assert!(verify_parallelism(&g, &inv).ok);
        assert_ne!(p, inv);
        for c in class_census(&g, &p) {
            assert_eq!((c.right_count, c.both_count, c.pure_left_count, c.other_count), (7, 3, 8, 0));
            assert_eq!(c.left_sylow, Some(bar_sylow(&g, c.right_sylow).unwrap()));
        }
    }

    #[test]
    fn corrupted_class_is_witnessed() {
        let g = geo(3);
        let mut classes = Parallelism::flat(&g).classes();
        let b = classes[0].pop().unwrap();
        let c = classes[1].pop().unwrap();
        classes[0].push(c);
        classes[1].push(b);
        let r = verify_classes(&g, &classes);
        assert!(!r.ok);
        assert!(r.witness.unwrap().contains("meet"));
    }

    #[test]
    fn small_enumerations_contain_known_families() {
        let g = geo(2);
        let all = enumerate_parallelisms(&g, 0).unwrap();
        assert!(all.contains(&Parallelism::flat(&g)));
        assert!(all.contains(&Parallelism::natural(&g)));
        let g = geo(3);
        let all = enumerate_parallelisms(&g, 0).unwrap();
        for k in [ParallelismKind::Flat, ParallelismKind::Natural, ParallelismKind::Odd, ParallelismKind::OddPrime] {
            assert!(all.contains(&k.build(&g).unwrap()), "{k}");
        }
        for p in &all {
            assert!(verify_parallelism(&g, p).ok);
        }
    }

    #[test]
    fn generators_span_the_whole_group() {
        for q in [3, 4] {
            let g = geo(q);
            let ar = ArGroup::new(&g.g);
            let perms: Vec<Perm> = ar_generators(&g).iter().map(|t| t.to_perm(&g.g)).collect();
            assert_eq!(StabChain::new(g.n(), &perms).order(), ar.order() as u128);
        }
    }

    #[test]
    fn flat_and_natural_are_invariant() {
        let g = geo(3);
        let ar = ArGroup::new(&g.g);
        assert_eq!(stabilizer(&g, &ar, &Parallelism::flat(&g)).len(), ar.order());
        assert_eq!(stabilizer(&g, &ar, &Parallelism::natural(&g)).len(), ar.order());
    }

    #[test]
    fn stabilizer_paths_agree() {
        let g = geo(3);
        let ar = ArGroup::new(&g.g);
        let p = Parallelism::odd(&g, false).unwrap();
        let st = stabilizer(&g, &ar, &p);
        assert_eq!(st.len(), 24);
        assert_eq!(stabilizer_order_by_orbit(&g, &p), 24);
        let minus = ArElem::rho(&g.g, g.g.minus_one());
        // q = 3 is 3 mod 4, so right multiplication by -1 swaps the twins.
        assert_eq!(p.apply(&g, &minus), Parallelism::odd(&g, true).unwrap());
    }

    #[test]
    fn images_stay_parallelisms() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand::rngs::StdRng::seed_from_u64(11);
        let g = geo(5);
        let ar = ArGroup::new(&g.g);
        let p = Parallelism::odd(&g, false).unwrap();
        let elems: Vec<ArElem> = ar.elements().collect();
        for _ in 0..20 {
            let t = elems[rng.gen_range(0..elems.len())];
            assert!(verify_parallelism(&g, &p.apply(&g, &t)).ok);
        }
    }
}
