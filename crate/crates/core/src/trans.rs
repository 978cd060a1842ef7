//! Translations of closed unitals.
//!
//! A translation with center `c` is an automorphism fixing `c` and every
//! block through `c`. For centers on the block of new points two routes are
//! available: an algebraic one that filters the semilinear-times-right
//! group, and the generic design search of [`crate::iso`].

use crate::ar::{ArElem, ArGroup};
use crate::closure::close;
use crate::design::Design;
use crate::grp::{Geometry, GroupElem};
use crate::iso;
use crate::para::Parallelism;
use crate::perm::Perm;
use crate::structure::{Fingerprint, SmallGroup};
use crate::unital::AffineUnital;
use crate::{BlockId, Error, Point, Result};

/// The translation group at one center.
#[derive(Clone, Debug)]
pub struct TranslationReport {
    /// Center as a point of the closed design.
    pub center: u32,
    /// Sylow label of the center when it is a new point.
    pub sylow: Option<u32>,
    /// All elements, identity included, as permutations of the design points.
    pub elements: Vec<Perm>,
    pub fingerprint: Fingerprint,
    /// Every non-identity element is fixed-point-free off the center.
    pub semiregular: bool,
}

impl TranslationReport {
    fn new(center: u32, sylow: Option<u32>, mut elements: Vec<Perm>) -> TranslationReport {
        elements.sort();
        elements.dedup();
        let semiregular =
            elements.iter().filter(|p| !p.is_identity()).all(|p| p.fixed_points().all(|x| x == center));
        let fingerprint = SmallGroup::from_elements(elements.clone()).fingerprint();
        TranslationReport { center, sylow, elements, fingerprint, semiregular }
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn nontrivial(&self) -> usize {
        self.elements.len() - 1
    }

    /// Whether the group is transitive on each block through the center,
    /// which for a unital of order `n` means order `n`.
    pub fn is_translation_center(&self, n: usize) -> bool {
        self.order() == n
    }
}

/// Elements fixing every block of `class` setwise.
pub fn fixing_set(geo: &Geometry, ar: &ArGroup, class: &[BlockId]) -> Result<Vec<ArElem>> {
    if ar.order() > 2_000_000 {
        return Err(Error::TooLarge(format!("group of order {}", ar.order())));
    }
    let g = &geo.g;
    let blocks: Vec<&[Point]> = class.iter().map(|&b| geo.sb.block(b).points.as_slice()).collect();
    Ok(ar.filter(g, |perm| blocks.iter().all(|blk| blk.iter().all(|&x| blk.binary_search(&perm[x as usize]).is_ok()))))
}

/// Extends a map of the affine points preserving `p` by its action on the
/// new points of the closure.
fn extend_to_closure(geo: &Geometry, p: &Parallelism, perm: &[Point]) -> Perm {
    let n = geo.n() as u32;
    let q = geo.q();
    let mut label = vec![0u32; q as usize + 1];
    for s in 0..=q {
        label[p.class_of_sylow(geo, s) as usize] = n + s;
    }
    let mut out = perm.to_vec();
    out.resize((n + q + 1) as usize, 0);
    for s in 0..=q {
        let b = geo.sb.sylow_block(s, &geo.g);
        let img = geo.sb.image_fast(&geo.g, b, perm);
        out[(n + s) as usize] = label[p.class_of(img) as usize];
    }
    Perm::from_vec(out)
}

/// Translations of the closure of `u` along `p` with center the new point of
/// Sylow subgroup `sylow`. Uses the automorphisms of `u` stabilizing `p` and
/// fixing its class; for `q = 2` the design search is used instead.
pub fn translations_at_infinity(u: &AffineUnital, ar: &ArGroup, p: &Parallelism, sylow: u32) -> Result<TranslationReport> {
    let geo = u.geometry();
    let center = geo.n() as u32 + sylow;
    if geo.q() < 3 {
        let d = close(u, p)?;
        let r = iso::translation_group(&d, center)?;
        let elements = crate::perm::enumerate(d.v, &r.generators, usize::MAX).expect("no limit");
        return Ok(TranslationReport::new(center, Some(sylow), elements));
    }
    let class_id = p.class_of_sylow(geo, sylow);
    let class: Vec<BlockId> = (0..geo.block_count() as BlockId).filter(|&b| p.class_of(b) == class_id).collect();
    let semis = u.aut_semilinear(ar);
    let g = &geo.g;
    let elements = fixing_set(geo, ar, &class)?
        .into_iter()
        .filter(|t| semis.contains(&t.semi))
        .map(|t| t.point_perm(g))
        .filter(|perm| p.preserved_by(geo, |x| perm[x as usize]))
        .map(|perm| extend_to_closure(geo, p, &perm))
        .collect();
    Ok(TranslationReport::new(center, Some(sylow), elements))
}

/// Translation groups at every point of `d` that admits a non-trivial
/// translation. `sylow_base` is the index of the first new point of a
/// closure, used to label centers at infinity.
///
/// Small automorphism groups are enumerated once and filtered per point;
/// larger ones are searched point by point with the blocks through the
/// point individually coloured.
pub fn all_translations(d: &Design, sylow_base: Option<u32>) -> Result<Vec<TranslationReport>> {
    const ENUMERATE_LIMIT: usize = 20_000;
    let label = |c: u32| sylow_base.and_then(|b| c.checked_sub(b));
    let aut = iso::automorphisms(d)?;
    let mut out = Vec::new();
    if aut.order <= ENUMERATE_LIMIT as u128 {
        let elems = crate::perm::enumerate(d.v, &aut.generators, ENUMERATE_LIMIT).expect("order checked");
        let pb = d.point_blocks();
        for c in 0..d.v as u32 {
            let fixing: Vec<Perm> = elems
                .iter()
                .filter(|e| {
                    e.apply(c) == c
                        && pb[c as usize].iter().all(|&b| d.blocks[b as usize].iter().all(|&x| d.blocks[b as usize].binary_search(&e.apply(x)).is_ok()))
                })
                .cloned()
                .collect();
            if fixing.len() > 1 {
                out.push(TranslationReport::new(c, label(c), fixing));
            }
        }
        return Ok(out);
    }
    for c in 0..d.v as u32 {
        let r = iso::translation_group(d, c)?;
        if r.order <= 1 {
            continue;
        }
        let elements = crate::perm::enumerate(d.v, &r.generators, usize::MAX).expect("no limit");
        out.push(TranslationReport::new(c, label(c), elements));
    }
    Ok(out)
}

/// Summary over a list of reports.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TranslationSummary {
    /// Non-trivial translations over all centers.
    pub nontrivial: usize,
    pub centers: Vec<u32>,
    /// Centers whose group has the full order.
    pub translation_centers: Vec<u32>,
    /// Fingerprint of the group generated by all translations.
    pub generated: Option<Fingerprint>,
}

pub fn summarize(reports: &[TranslationReport], n: usize) -> TranslationSummary {
    let nontrivial = reports.iter().map(|r| r.nontrivial()).sum();
    let centers = reports.iter().filter(|r| r.nontrivial() > 0).map(|r| r.center).collect();
    let translation_centers = reports.iter().filter(|r| r.is_translation_center(n)).map(|r| r.center).collect();
    let gens: Vec<Perm> = reports.iter().flat_map(|r| r.elements.iter().filter(|p| !p.is_identity()).cloned()).collect();
    let generated = gens
        .first()
        .map(|p| p.degree())
        .and_then(|deg| SmallGroup::from_generators(deg, &gens, 100_000))
        .map(|g| g.fingerprint());
    TranslationSummary { nontrivial, centers, translation_centers, generated }
}

/// Checks that the maps fixing every coset `T g` with `g` normalizing the
/// first Sylow subgroup `T`, plus one coset `T f` with `f` lower
/// unitriangular, are exactly the left multiplications by `T`.
pub fn lemma_transt_check(geo: &Geometry, ar: &ArGroup) -> Result<bool> {
    let g = &geo.g;
    let f = g.field();
    let t = &geo.sb.sylows[0];
    let mut class: Vec<BlockId> = g.normalizer(t).members.iter().map(|&x| geo.sb.right_coset(0, x)).collect();
    let low = GroupElem::from_entries([f.from_int(1), f.from_int(0), f.from_int(1), f.from_int(1)]);
    class.push(geo.sb.right_coset(0, g.index_of(&low).expect("unitriangular")));
    class.sort_unstable();
    class.dedup();
    let mut found: Vec<Vec<Point>> = fixing_set(geo, ar, &class)?.iter().map(|t| t.point_perm(g)).collect();
    let mut expected: Vec<Vec<Point>> = t.members.iter().map(|&x| ArElem::left_mul(g, x).point_perm(g)).collect();
    found.sort();
    expected.sort();
    Ok(found == expected)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unital::classify;
    use std::sync::Arc;

    fn classical(q: u32) -> (AffineUnital, ArGroup) {
        let geo = Arc::new(Geometry::of_order(q).unwrap());
        let ar = ArGroup::new(&geo.g);
        let s = geo.g.cyclic_s();
        let u = classify(geo, &ar, &s, 0).unwrap().remove(0).unital;
        (u, ar)
    }

    #[test]
    fn flat_class_fixers_are_left_multiplications() {
        let (u, ar) = classical(4);
        let geo = u.geometry();
        let p = Parallelism::flat(geo);
        let c = p.class_of_sylow(geo, 0);
        let class: Vec<BlockId> = (0..geo.block_count() as BlockId).filter(|&b| p.class_of(b) == c).collect();
        let fs = fixing_set(geo, &ar, &class).unwrap();
        assert_eq!(fs.len(), 4);
        for t in &fs {
            let x = t.apply(&geo.g, geo.g.one());
            assert!(geo.sb.sylows[0].contains(x));
            assert_eq!(t.point_perm(&geo.g), ArElem::left_mul(&geo.g, x).point_perm(&geo.g));
        }
    }

    #[test]
    fn natural_gives_translation_centers() {
        for q in [3, 4] {
            let (u, ar) = classical(q);
            let p = Parallelism::natural(u.geometry());
            let d = close(&u, &p).unwrap();
            for s in 0..=q {
                let r = translations_at_infinity(&u, &ar, &p, s).unwrap();
                assert!(r.is_translation_center(q as usize));
                assert!(r.semiregular);
                assert!(r.elements.iter().all(|e| d.is_automorphism(e.as_slice())));
            }
        }
    }

    #[test]
    fn flat_translations_at_four_are_left_involutions() {
        let (u, ar) = classical(4);
        let geo = u.geometry();
        let g = &geo.g;
        let p = Parallelism::flat(geo);
        let ns = g.normalizer(&u.s);
        let mut reports = Vec::new();
        for s in 0..=4 {
            let r = translations_at_infinity(&u, &ar, &p, s).unwrap();
            assert_eq!(r.order(), 2);
            let t = r.elements.iter().find(|e| !e.is_identity()).unwrap();
            let x = t.apply(g.one());
            assert!(ns.contains(x) && geo.sb.sylows[s as usize].contains(x) && g.element_order(x) == 2);
            assert_eq!(&t.as_slice()[..geo.n()], ArElem::left_mul(g, x).point_perm(g).as_slice());
            reports.push(r);
        }
        let sum = summarize(&reports, 4);
        assert_eq!(sum.nontrivial, 5);
        let fp = sum.generated.unwrap();
        assert_eq!(fp, crate::structure::reference::dihedral(5).fingerprint());
    }

    #[test]
    fn both_routes_agree_at_three() {
        let (u, ar) = classical(3);
        for p in [Parallelism::flat(u.geometry()), Parallelism::natural(u.geometry())] {
            let d = close(&u, &p).unwrap();
            let base = u.geometry().n() as u32;
            let all = all_translations(&d, Some(base)).unwrap();
            for s in 0..=3u32 {
                let a = translations_at_infinity(&u, &ar, &p, s).unwrap();
                let b = all.iter().find(|r| r.center == base + s);
                assert_eq!(a.order(), b.map_or(1, |r| r.order()));
            }
        }
    }

    #[test]
    fn transt_lemma() {
        for q in [3, 4] {
            let geo = Geometry::of_order(q).unwrap();
            let ar = ArGroup::new(&geo.g);
            assert!(lemma_transt_check(&geo, &ar).unwrap());
        }
    }
}
