//! Classification of the unitals built on SL(2,q) for small `q`.
//!
//! At order 4 there are two affine types, the classical one (largest
//! automorphism group) and one other. Parallelisms are grouped into orbits
//! under either automorphism group; representatives of the non-invariant
//! orbits are labelled `pi1`..`pi7` as follows:
//!
//! * `pi7` and `pi6` are the orbits of the subfield parallelism and of its
//!   pointwise inverse;
//! * every remaining orbit of the classical group that splits into two orbits
//!   of the other group gives a pair, the longer of the two orbits taking the
//!   lower label, pairs ordered by decreasing orbit length (`pi1, pi2` then
//!   `pi3, pi4`);
//! * the one orbit left over is `pi5`.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::ar::{ArElem, ArGroup};
use crate::closure::close;
use crate::design::Design;
use crate::grp::Geometry;
use crate::iso;
use crate::para::{enumerate_parallelisms, orbits, Parallelism};
use crate::structure::{reference, Fingerprint, SmallGroup};
use crate::trans::{all_translations, summarize, TranslationSummary};
use crate::unital::{classify, AffineUnital};
use crate::{Error, Result};

/// Which affine unital of order 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum AffineKind {
    Classical,
    Other,
}

impl fmt::Display for AffineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AffineKind::Classical => "H",
            AffineKind::Other => "E",
        })
    }
}

/// Group structures that occur among the closures of order 4.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Structure {
    C4,
    D5,
    A4,
    /// `C5 ⋊ C4`.
    C5SdC4,
    /// `C4 ⋉ D5`.
    C4SdD5,
    /// `C4 ⋉ A4`.
    C4SdA4,
    /// `C4 ⋉ (A4 × C5)`.
    C4SdA4xC5,
}

impl Structure {
    pub const ALL: [Structure; 7] = [
        Structure::C4,
        Structure::D5,
        Structure::A4,
        Structure::C5SdC4,
        Structure::C4SdD5,
        Structure::C4SdA4,
        Structure::C4SdA4xC5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Structure::C4 => "C4",
            Structure::D5 => "D5",
            Structure::A4 => "A4",
            Structure::C5SdC4 => "C5:C4",
            Structure::C4SdD5 => "C4:D5",
            Structure::C4SdA4 => "C4:A4",
            Structure::C4SdA4xC5 => "C4:(A4xC5)",
        }
    }

    /// Whether `g` has this structure: equal fingerprint for the named
    /// groups, a non-direct split with the named normal subgroup and a cyclic
    /// complement of order 4 for the semidirect products.
    pub fn matches(self, g: &SmallGroup) -> bool {
        let c4 = reference::cyclic(4).fingerprint();
        match self {
            Structure::C4 => g.fingerprint() == c4,
            Structure::D5 => g.fingerprint() == reference::dihedral(5).fingerprint(),
            Structure::A4 => g.fingerprint() == reference::alternating4().fingerprint(),
            Structure::C5SdC4 => g.is_nondirect_split(&reference::cyclic(5).fingerprint(), &c4),
            Structure::C4SdD5 => g.is_nondirect_split(&reference::dihedral(5).fingerprint(), &c4),
            Structure::C4SdA4 => g.is_nondirect_split(&reference::alternating4().fingerprint(), &c4),
            Structure::C4SdA4xC5 => {
                let n = reference::direct_product(&reference::alternating4(), &reference::cyclic(5));
                g.is_nondirect_split(&n.fingerprint(), &c4)
            }
        }
    }

    pub fn identify(g: &SmallGroup) -> Option<Structure> {
        Structure::ALL.into_iter().find(|s| s.matches(g))
    }
}

/// Everything known about order 4: both affine types, all parallelisms and
/// their orbits.
pub struct OrderFour {
    pub geo: Arc<Geometry>,
    pub ar: ArGroup,
    pub classical: AffineUnital,
    pub other: AffineUnital,
    pub aut: [Vec<ArElem>; 2],
    pub parallelisms: Vec<Parallelism>,
    /// Orbits under the classical and the other automorphism group.
    pub orbits: [Vec<Vec<usize>>; 2],
    /// Index into `parallelisms` of the representatives of `pi1`..`pi7`.
    pub labels: [usize; 7],
}

impl OrderFour {
    pub fn compute(budget: u64) -> Result<OrderFour> {
        let geo = Arc::new(Geometry::of_order(4)?);
        let ar = ArGroup::new(&geo.g);
        let s = geo.g.cyclic_s();
        let mut types = classify(Arc::clone(&geo), &ar, &s, budget)?;
        if types.len() != 2 {
            return Err(Error::Unexpected(format!("{} affine types at order 4", types.len())));
        }
        let other = types.pop().unwrap().unital;
        let classical = types.pop().unwrap().unital;
        let aut = [classical.aut_affine(&ar)?, other.aut_affine(&ar)?];
        let parallelisms = enumerate_parallelisms(&geo, budget)?;
        let orbs = [orbits(&geo, &parallelisms, &aut[0]), orbits(&geo, &parallelisms, &aut[1])];
        let labels = label_orbits(&geo, &parallelisms, &orbs)?;
        Ok(OrderFour { geo, ar, classical, other, aut, parallelisms, orbits: orbs, labels })
    }

    pub fn unital(&self, kind: AffineKind) -> &AffineUnital {
        match kind {
            AffineKind::Classical => &self.classical,
            AffineKind::Other => &self.other,
        }
    }

    /// Orbit lengths under the given automorphism group, decreasing.
    pub fn orbit_lengths(&self, kind: AffineKind) -> Vec<usize> {
        let mut l: Vec<usize> = self.orbits[kind as usize].iter().map(|o| o.len()).collect();
        l.sort_unstable_by(|a, b| b.cmp(a));
        l
    }

    /// Representative of `pi_i`, `i` in `1..=7`.
    pub fn pi(&self, i: usize) -> &Parallelism {
        &self.parallelisms[self.labels[i - 1]]
    }

    /// The parallelism with a given name: `flat`, `natural` or `pi1`..`pi7`.
    pub fn named(&self, name: &str) -> Option<Parallelism> {
        match name {
            "flat" => Some(Parallelism::flat(&self.geo)),
            "natural" => Some(Parallelism::natural(&self.geo)),
            _ => {
                let i: usize = name.strip_prefix("pi")?.parse().ok()?;
                (1..=7).contains(&i).then(|| self.pi(i).clone())
            }
        }
    }

    pub fn closure(&self, kind: AffineKind, p: &Parallelism) -> Result<Design> {
        close(self.unital(kind), p)
    }

    /// The twelve sporadic closures, classical ones first.
    pub fn leonids(&self) -> Vec<(AffineKind, usize)> {
        let mut out: Vec<(AffineKind, usize)> = [2, 4, 5, 6, 7].iter().map(|&i| (AffineKind::Classical, i)).collect();
        out.extend((1..=7).map(|i| (AffineKind::Other, i)));
        out
    }
}

/// Orbit index of every parallelism.
fn orbit_index(orbs: &[Vec<usize>], n: usize) -> Vec<usize> {
    let mut idx = vec![0; n];
    for (k, o) in orbs.iter().enumerate() {
        for &i in o {
            idx[i] = k;
        }
    }
    idx
}

fn label_orbits(geo: &Geometry, paras: &[Parallelism], orbs: &[Vec<Vec<usize>>; 2]) -> Result<[usize; 7]> {
    let find = |p: &Parallelism| paras.iter().position(|x| x == p).ok_or_else(|| Error::Unexpected("named parallelism not enumerated".into()));
    let sq = Parallelism::square(geo)?;
    let sq_pos = find(&sq)?;
    let sq_inv_pos = find(&sq.inverted(geo))?;
    let in_h = orbit_index(&orbs[0], paras.len());
    let in_e = orbit_index(&orbs[1], paras.len());
    let mut labels = [usize::MAX; 7];
    labels[6] = orbs[1][in_e[sq_pos]][0];
    labels[5] = orbs[1][in_e[sq_inv_pos]][0];
    // group the remaining orbits of the other group by classical orbit
    let mut by_h: HashMap<usize, Vec<usize>> = HashMap::new();
    for (k, o) in orbs[1].iter().enumerate() {
        if o.len() > 1 && k != in_e[sq_pos] && k != in_e[sq_inv_pos] {
            by_h.entry(in_h[o[0]]).or_default().push(k);
        }
    }
    let mut pairs: Vec<(usize, Vec<usize>)> = by_h.into_iter().collect();
    pairs.sort_by_key(|(h, _)| (std::cmp::Reverse(orbs[0][*h].len()), *h));
    let (split, single): (Vec<_>, Vec<_>) = pairs.into_iter().partition(|(_, ks)| ks.len() == 2);
    if split.len() != 2 || single.len() != 1 || single[0].1.len() != 1 {
        return Err(Error::Unexpected("orbit pattern of order 4 parallelisms".into()));
    }
    for (j, (_, ks)) in split.iter().enumerate() {
        let mut ks = ks.clone();
        ks.sort_by_key(|&k| (std::cmp::Reverse(orbs[1][k].len()), k));
        labels[2 * j] = orbs[1][ks[0]][0];
        labels[2 * j + 1] = orbs[1][ks[1]][0];
    }
    labels[4] = orbs[1][single[0].1[0]][0];
    Ok(labels)
}

/// One sporadic closure with its automorphism group.
#[derive(Clone, Debug)]
pub struct ClosureRow {
    pub kind: AffineKind,
    pub label: usize,
    pub order: u128,
    pub fingerprint: Fingerprint,
    pub structure: Option<Structure>,
    /// The block of new points is fixed by every automorphism.
    pub infinity_fixed: bool,
}

impl ClosureRow {
    pub fn name(&self) -> String {
        format!("{}^pi{}", self.kind, self.label)
    }
}

/// Automorphism groups of the twelve sporadic closures.
pub fn sporadic_table(d4: &OrderFour) -> Result<Vec<ClosureRow>> {
    d4.leonids()
        .into_par_iter()
        .map(|(kind, label)| {
            let d = d4.closure(kind, d4.pi(label))?;
            let r = iso::automorphisms(&d)?;
            let g = SmallGroup::from_generators(d.v, &r.generators, 100_000)
                .ok_or_else(|| Error::TooLarge(format!("group of order {}", r.order)))?;
            Ok(ClosureRow {
                kind,
                label,
                order: r.order,
                fingerprint: g.fingerprint(),
                structure: Structure::identify(&g),
                infinity_fixed: iso::block_fixed(&d, crate::closure::infinity_block(&d), &r.generators),
            })
        })
        .collect()
}

/// Closures of both affine types under `flat`, `natural` and `pi1`..`pi7`,
/// grouped into isomorphism classes by canonical form. Each class lists the
/// names of its members.
pub fn isomorphism_types(d4: &OrderFour) -> Result<Vec<Vec<String>>> {
    let names: Vec<String> = ["flat", "natural"].iter().map(|s| s.to_string()).chain((1..=7).map(|i| format!("pi{i}"))).collect();
    let jobs: Vec<(AffineKind, &String)> =
        [AffineKind::Classical, AffineKind::Other].into_iter().flat_map(|k| names.iter().map(move |n| (k, n))).collect();
    let forms: Vec<(String, Design)> = jobs
        .into_par_iter()
        .map(|(kind, n)| {
            let d = d4.closure(kind, &d4.named(n).expect("known name"))?;
            Ok((format!("{kind}^{n}"), iso::canonical_form(&d)?))
        })
        .collect::<Result<_>>()?;
    let mut classes: Vec<(Design, Vec<String>)> = Vec::new();
    for (name, c) in forms {
        match classes.iter_mut().find(|(k, _)| k.blocks == c.blocks) {
            Some((_, members)) => members.push(name),
            None => classes.push((c, vec![name])),
        }
    }
    Ok(classes.into_iter().map(|(_, m)| m).collect())
}

/// Translations of each sporadic closure.
pub fn sporadic_translations(d4: &OrderFour) -> Result<Vec<(AffineKind, usize, TranslationSummary)>> {
    let base = d4.geo.n() as u32;
    d4.leonids()
        .into_par_iter()
        .map(|(kind, label)| {
            let d = d4.closure(kind, d4.pi(label))?;
            let reports = all_translations(&d, Some(base))?;
            Ok((kind, label, summarize(&reports, 4)))
        })
        .collect()
}

/// Result of classifying parallelisms up to automorphisms of the affine
/// unital, for orders with a single affine type.
#[derive(Clone, Debug)]
pub struct SmallOrderReport {
    pub q: u32,
    pub affine_types: usize,
    pub parallelisms: usize,
    pub orbit_lengths: Vec<usize>,
    /// Orbit index of each named parallelism that exists at this order.
    pub named: Vec<(&'static str, usize)>,
}

impl SmallOrderReport {
    /// Every orbit contains one of the named parallelisms.
    pub fn only_named(&self) -> bool {
        (0..self.orbit_lengths.len()).all(|k| self.named.iter().any(|&(_, o)| o == k))
    }
}

pub fn small_order(q: u32, budget: u64) -> Result<SmallOrderReport> {
    let geo = Arc::new(Geometry::of_order(q)?);
    let ar = ArGroup::new(&geo.g);
    let s = geo.g.cyclic_s();
    let types = classify(Arc::clone(&geo), &ar, &s, budget)?;
    let u = &types[0].unital;
    let aut = u.aut_affine(&ar)?;
    let paras = enumerate_parallelisms(&geo, budget)?;
    let orbs = orbits(&geo, &paras, &aut);
    let idx = orbit_index(&orbs, paras.len());
    let mut named = Vec::new();
    let mut candidates = vec![("flat", Parallelism::flat(&geo)), ("natural", Parallelism::natural(&geo))];
    if q % 2 == 1 {
        candidates.push(("odd", Parallelism::odd(&geo, false)?));
        candidates.push(("odd-prime", Parallelism::odd(&geo, true)?));
    }
    for (name, p) in candidates {
        if let Some(i) = paras.iter().position(|x| *x == p) {
            named.push((name, idx[i]));
        }
    }
    Ok(SmallOrderReport {
        q,
        affine_types: types.len(),
        parallelisms: paras.len(),
        orbit_lengths: orbs.iter().map(|o| o.len()).collect(),
        named,
    })
}
