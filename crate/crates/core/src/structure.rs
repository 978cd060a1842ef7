//! Structure fingerprints of small permutation groups.
//!
//! Groups are compared by invariants rather than by isomorphism type names:
//! order, commutativity, center and derived subgroup orders, exponent and the
//! element-order multiset. Product decompositions such as `C4 ⋉ D5` are
//! confirmed by exhibiting a normal subgroup and a complement with the
//! expected fingerprints.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use crate::perm::{self, Perm};

/// Invariants used in place of an isomorphism type name.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fingerprint {
    pub order: usize,
    pub abelian: bool,
    pub center_order: usize,
    pub derived_order: usize,
    pub exponent: usize,
    /// element order -> number of elements of that order
    pub element_orders: BTreeMap<usize, usize>,
}

impl fmt::Display for Fingerprint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.element_orders.iter().map(|(o, c)| format!("{o}:{c}")).collect();
        write!(
            f,
            "order={} abelian={} center={} derived={} exponent={} orders=[{}]",
            self.order,
            self.abelian,
            self.center_order,
            self.derived_order,
            self.exponent,
            orders.join(" ")
        )
    }
}

/// A finite group given by its Cayley table; element 0 is the identity.
#[derive(Clone, Debug)]
pub struct SmallGroup {
    n: usize,
    table: Vec<u32>,
    inv: Vec<u32>,
    elems: Vec<Perm>,
}

impl SmallGroup {
    /// Enumerates the group generated by `gens`; `None` above `limit` elements.
    pub fn from_generators(degree: usize, gens: &[Perm], limit: usize) -> Option<SmallGroup> {
        let elems = perm::enumerate(degree, gens, limit)?;
        Some(SmallGroup::from_elements(elems))
    }

    /// Builds the Cayley table of a list of permutations closed under
    /// composition, with the identity first.
    pub fn from_elements(elems: Vec<Perm>) -> SmallGroup {
        let n = elems.len();
        let mut elems = elems;
        if let Some(i) = elems.iter().position(|g| g.is_identity()) {
            elems.swap(0, i);
        }
        let index: HashMap<&Perm, u32> = elems.iter().enumerate().map(|(i, g)| (g, i as u32)).collect();
        let mut table = Vec::with_capacity(n * n);
        for a in &elems {
            for b in &elems {
                table.push(*index.get(&a.then(b)).expect("element list is closed"));
            }
        }
        let mut inv = vec![0; n];
        for a in 0..n {
            for b in 0..n {
                if table[a * n + b] == 0 {
                    inv[a] = b as u32;
                }
            }
        }
        SmallGroup { n, table, inv, elems }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> &[Perm] {
        &self.elems
    }

    #[inline]
    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.table[a as usize * self.n + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn element_order(&self, a: u32) -> usize {
        let mut k = 1;
        let mut x = a;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Closure of a set of element indices, as a sorted index list.
    pub fn generate(&self, gens: &[u32]) -> Vec<u32> {
        let mut seen = vec![false; self.n];
        seen[0] = true;
        let mut out = vec![0u32];
        let mut i = 0;
        while i < out.len() {
            for &g in gens {
                let y = self.mul(out[i], g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        out.sort_unstable();
        out
    }

    /// A small generating set, chosen greedily in element order.
    pub fn generating_set(&self) -> Vec<u32> {
        let mut gens = Vec::new();
        let mut span = vec![0u32];
        for a in 1..self.n as u32 {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.generate(&gens);
                if span.len() == self.n {
                    break;
                }
            }
        }
        gens
    }

    pub fn center(&self) -> Vec<u32> {
        let gens = self.generating_set();
        (0..self.n as u32)
            .filter(|&z| gens.iter().all(|&g| self.mul(z, g) == self.mul(g, z)))
            .collect()
    }

    fn commutator(&self, a: u32, b: u32) -> u32 {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Normal closure of a set inside the whole group.
    pub fn normal_closure(&self, seed: &[u32]) -> Vec<u32> {
        let gens = self.generating_set();
        let mut sub = self.generate(seed);
        loop {
            let mut extra = Vec::new();
            for &x in &sub {
                for &g in &gens {
                    let c = self.mul(self.mul(self.inv(g), x), g);
                    if sub.binary_search(&c).is_err() {
                        extra.push(c);
                    }
                }
            }
            if extra.is_empty() {
                return sub;
            }
            let mut all = sub.clone();
            all.extend(extra);
            sub = self.generate(&all);
        }
    }

    pub fn derived_subgroup(&self) -> Vec<u32> {
        let gens = self.generating_set();
        let mut comms = Vec::new();
        for &a in &gens {
            for &b in &gens {
                comms.push(self.commutator(a, b));
            }
        }
        self.normal_closure(&comms)
    }

    pub fn is_normal(&self, sub: &[u32]) -> bool {
        let gens = self.generating_set();
        sub.iter().all(|&x| {
            gens.iter().all(|&g| sub.binary_search(&self.mul(self.mul(self.inv(g), x), g)).is_ok())
        })
    }

    /// The subgroup given by sorted indices, as its own [`SmallGroup`].
    pub fn subgroup(&self, members: &[u32]) -> SmallGroup {
        SmallGroup::from_elements(members.iter().map(|&i| self.elems[i as usize].clone()).collect())
    }

    pub fn fingerprint(&self) -> Fingerprint {
        let mut element_orders = BTreeMap::new();
        let mut exponent = 1;
        for a in 0..self.n as u32 {
            let o = self.element_order(a);
            exponent = perm::lcm(exponent, o);
            *element_orders.entry(o).or_insert(0) += 1;
        }
        let gens = self.generating_set();
        let abelian = gens.iter().all(|&a| gens.iter().all(|&b| self.mul(a, b) == self.mul(b, a)));
        Fingerprint {
            order: self.n,
            abelian,
            center_order: self.center().len(),
            derived_order: self.derived_subgroup().len(),
            exponent,
            element_orders,
        }
    }

    /// All subgroups generated by at most two elements whose order is
    /// `order`, as sorted index lists.
    pub fn subgroups_of_order(&self, order: usize) -> Vec<Vec<u32>> {
        if !self.n.is_multiple_of(order) {
            return Vec::new();
        }
        let cand: Vec<u32> = (0..self.n as u32).filter(|&a| order.is_multiple_of(self.element_order(a))).collect();
        let mut found: std::collections::BTreeSet<Vec<u32>> = std::collections::BTreeSet::new();
        let mut covered_cyclic = std::collections::HashSet::new();
        for (i, &a) in cand.iter().enumerate() {
            let ca = self.generate(&[a]);
            if ca.len() == order {
                found.insert(ca.clone());
            }
            if !covered_cyclic.insert(ca.clone()) {
                continue;
            }
            for &b in &cand[i + 1..] {
                if ca.binary_search(&b).is_ok() {
                    continue;
                }
                let s = self.generate(&[a, b]);
                if s.len() == order {
                    found.insert(s);
                }
            }
        }
        found.into_iter().collect()
    }

    /// Looks for a normal subgroup `N` with fingerprint `normal` and a
    /// subgroup `H` with fingerprint `complement` such that `N ∩ H = 1` and
    /// `|N||H| = |G|`. Returns the pair when found.
    pub fn split_extension(&self, normal: &Fingerprint, complement: &Fingerprint) -> Option<(Vec<u32>, Vec<u32>)> {
        self.split_where(normal, complement, |_| true)
    }

    /// True if the group splits as a direct product with the given factors.
    pub fn is_direct_product(&self, a: &Fingerprint, b: &Fingerprint) -> bool {
        self.split_where(a, b, |h| self.is_normal(h)).is_some()
    }

    /// Like [`SmallGroup::split_extension`] but demands that the complement
    /// is not normal, so the product is not direct.
    pub fn is_nondirect_split(&self, normal: &Fingerprint, complement: &Fingerprint) -> bool {
        self.split_where(normal, complement, |h| !self.is_normal(h)).is_some()
    }

    fn split_where<F>(&self, normal: &Fingerprint, complement: &Fingerprint, keep: F) -> Option<(Vec<u32>, Vec<u32>)>
    where
        F: Fn(&[u32]) -> bool,
    {
        if normal.order * complement.order != self.n {
            return None;
        }
        let normals: Vec<Vec<u32>> = self
            .subgroups_of_order(normal.order)
            .into_iter()
            .filter(|s| self.is_normal(s) && self.subgroup(s).fingerprint() == *normal)
            .collect();
        if normals.is_empty() {
            return None;
        }
        let comps: Vec<Vec<u32>> = self
            .subgroups_of_order(complement.order)
            .into_iter()
            .filter(|s| keep(s) && self.subgroup(s).fingerprint() == *complement)
            .collect();
        for nsub in &normals {
            for h in &comps {
                if h.iter().filter(|x| nsub.binary_search(x).is_ok()).count() == 1 {
                    return Some((nsub.clone(), h.clone()));
                }
            }
        }
        None
    }
}

/// Concrete reference groups as permutation groups.
pub mod reference {
    use super::*;

    fn cycle_perm(n: usize, c: &[u32]) -> Perm {
        let mut v: Vec<u32> = (0..n as u32).collect();
        for i in 0..c.len() {
            v[c[i] as usize] = c[(i + 1) % c.len()];
        }
        Perm::from_vec(v)
    }

    pub fn cyclic(n: usize) -> SmallGroup {
        let g = cycle_perm(n, &(0..n as u32).collect::<Vec<_>>());
        SmallGroup::from_generators(n, &[g], n).unwrap()
    }

    /// Dihedral group of order `2n`.
    pub fn dihedral(n: usize) -> SmallGroup {
        let r = cycle_perm(n, &(0..n as u32).collect::<Vec<_>>());
        let s = Perm::from_vec((0..n as u32).map(|i| (n as u32 - i) % n as u32).collect());
        SmallGroup::from_generators(n, &[r, s], 2 * n).unwrap()
    }

    pub fn alternating4() -> SmallGroup {
        SmallGroup::from_generators(4, &[cycle_perm(4, &[0, 1, 2]), cycle_perm(4, &[1, 2, 3])], 12).unwrap()
    }

    pub fn symmetric4() -> SmallGroup {
        SmallGroup::from_generators(4, &[cycle_perm(4, &[0, 1, 2, 3]), cycle_perm(4, &[0, 1])], 24).unwrap()
    }

    pub fn alternating5() -> SmallGroup {
        SmallGroup::from_generators(5, &[cycle_perm(5, &[0, 1, 2]), cycle_perm(5, &[0, 1, 2, 3, 4])], 60).unwrap()
    }

    /// The Frobenius group `C5 ⋊ C4` of affine maps of GF(5).
    pub fn frobenius20() -> SmallGroup {
        let t = cycle_perm(5, &[0, 1, 2, 3, 4]);
        let m = Perm::from_vec((0..5u32).map(|x| 2 * x % 5).collect());
        SmallGroup::from_generators(5, &[t, m], 20).unwrap()
    }

    /// Direct product on the disjoint union of the two point sets.
    pub fn direct_product(a: &SmallGroup, b: &SmallGroup) -> SmallGroup {
        let da = a.elements()[0].degree();
        let db = b.elements()[0].degree();
        let lift = |g: &Perm, off: u32, own: usize| {
            let mut v: Vec<u32> = (0..(da + db) as u32).collect();
            for i in 0..own {
                v[i + off as usize] = g.apply(i as u32) + off;
            }
            Perm::from_vec(v)
        };
        let mut gens: Vec<Perm> = a.generating_set().iter().map(|&i| lift(&a.elements()[i as usize], 0, da)).collect();
        gens.extend(b.generating_set().iter().map(|&i| lift(&b.elements()[i as usize], da as u32, db)));
        SmallGroup::from_generators(da + db, &gens, a.order() * b.order()).unwrap()
    }
}
