use std::sync::Arc;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use unital_core::classify::{AffineKind, OrderFour};
use unital_core::exact_cover::ExactCover;
use unital_core::grp::Geometry;
use unital_core::para::{enumerate_parallelisms, verify_parallelism};
use unital_core::perm::{self, StabChain};
use unital_core::unital::classify;
use unital_core::{close, iso, verify_design, ArElem, ArGroup, Design, FieldElem, FieldSpec, Parallelism, Perm, Semilinear};

fn field_strategy() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(vec![2u32, 3, 4, 5, 7, 8, 9, 16, 25, 27, 49]).prop_map(|q| FieldSpec::of_order(q).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn field_laws(f in field_strategy(), a in 0u32..64, b in 0u32..64, c in 0u32..64) {
        let q = f.order();
        let (a, b, c) = (FieldElem(a % q), FieldElem(b % q), FieldElem(c % q));
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if !b.is_zero() {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
        // Frobenius is additive and multiplicative.
        prop_assert_eq!(f.frobenius(f.add(a, b), 1), f.add(f.frobenius(a, 1), f.frobenius(b, 1)));
        prop_assert_eq!(f.frobenius(f.mul(a, b), 1), f.mul(f.frobenius(a, 1), f.frobenius(b, 1)));
    }

    #[test]
    fn stab_chain_order_matches_enumeration(seeds in prop::collection::vec(any::<u64>(), 1..3), degree in 3usize..8) {
        let gens: Vec<Perm> = seeds
            .iter()
            .map(|&s| {
                let mut v: Vec<u32> = (0..degree as u32).collect();
                v.shuffle(&mut rand::rngs::StdRng::seed_from_u64(s));
                Perm::from_vec(v)
            })
            .collect();
        let all = perm::enumerate(degree, &gens, 10_000).unwrap();
        prop_assert_eq!(StabChain::new(degree, &gens).order(), all.len() as u128);
    }

    #[test]
    fn exact_cover_matches_brute_force(rows in prop::collection::vec(prop::collection::btree_set(0usize..6, 1..4), 1..10)) {
        let rows: Vec<Vec<usize>> = rows.into_iter().map(|r| r.into_iter().collect()).collect();
        let mut brute = 0;
        for mask in 0u32..(1 << rows.len()) {
            let mut hit = [0; 6];
            for (i, r) in rows.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    for &x in r {
                        hit[x] += 1;
                    }
                }
            }
            if hit.iter().all(|&h| h == 1) {
                brute += 1;
            }
        }
        let mut ec = ExactCover::new(6);
        for r in &rows {
            ec.add_option(r);
        }
        let stats = ec.solve(0, |_| true);
        prop_assert!(stats.complete);
        prop_assert_eq!(stats.solutions, brute);
    }

    #[test]
    fn images_of_parallelisms_are_parallelisms(q in prop::sample::select(vec![3u32, 4, 5]), pick in any::<u64>(), h in any::<u32>()) {
        let geo = Geometry::of_order(q).unwrap();
        let ar = ArGroup::new(&geo.g);
        let semi: Semilinear = ar.semilinear()[pick as usize % ar.semilinear_order()];
        let t = ArElem { semi, rmul: h % geo.n() as u32 };
        for p in [Parallelism::flat(&geo), Parallelism::natural(&geo)] {
            prop_assert!(verify_parallelism(&geo, &p.apply(&geo, &t)).ok);
        }
    }
}

fn relabel_randomly(d: &Design, rng: &mut rand::rngs::StdRng) -> Design {
    let mut v: Vec<u32> = (0..d.v as u32).collect();
    v.shuffle(rng);
    d.relabel(&Perm::from_vec(v))
}

#[test]
fn canonical_forms_survive_relabelling() {
    let geo = Arc::new(Geometry::of_order(3).unwrap());
    let ar = ArGroup::new(&geo.g);
    let u = classify(Arc::clone(&geo), &ar, &geo.g.cyclic_s(), 0).unwrap().remove(0).unital;
    let mut designs = vec![close(&u, &Parallelism::flat(&geo)).unwrap(), close(&u, &Parallelism::natural(&geo)).unwrap()];
    let d4 = OrderFour::compute(0).unwrap();
    designs.push(d4.closure(AffineKind::Other, d4.pi(3)).unwrap());
    let mut rng = rand::rngs::StdRng::seed_from_u64(17);
    for d in &designs {
        let c = iso::canonical_form(d).unwrap();
        for _ in 0..100 {
            let e = relabel_randomly(d, &mut rng);
            assert_eq!(iso::canonical_form(&e).unwrap(), c);
        }
        let e = relabel_randomly(d, &mut rng);
        let map = iso::isomorphism(d, &e).unwrap().unwrap();
        assert_eq!(d.relabel(&map), e.canonical_order());
    }
}

#[test]
fn every_closure_of_order_four_is_a_unital() {
    let d4 = OrderFour::compute(0).unwrap();
    assert_eq!(d4.parallelisms, enumerate_parallelisms(&d4.geo, 0).unwrap());
    for p in &d4.parallelisms {
        for kind in [AffineKind::Classical, AffineKind::Other] {
            let d = d4.closure(kind, p).unwrap();
            let r = verify_design(&d, 4);
            assert!(r.ok, "{kind}: {r}");
        }
    }
}

#[test]
fn equivalent_parallelisms_give_isomorphic_closures() {
    let d4 = OrderFour::compute(0).unwrap();
    let pick = |i: usize| d4.aut[1][i * 37 % d4.aut[1].len()];
    for label in 1..=7 {
        let p = d4.pi(label);
        let d = d4.closure(AffineKind::Other, p).unwrap();
        let q = p.apply(&d4.geo, &pick(label));
        let e = d4.closure(AffineKind::Other, &q).unwrap();
        assert!(iso::isomorphic(&d, &e).unwrap(), "pi{label}");
    }
}

#[test]
fn affine_automorphisms_agree_with_search() {
    for q in [3u32, 4] {
        let geo = Arc::new(Geometry::of_order(q).unwrap());
        let ar = ArGroup::new(&geo.g);
        for t in classify(Arc::clone(&geo), &ar, &geo.g.cyclic_s(), 0).unwrap() {
            let aff = t.unital.aut_affine(&ar).unwrap();
            let d = t.unital.design();
            let r = iso::automorphisms(&d).unwrap();
            assert_eq!(r.order, aff.len() as u128, "q={q}");
            let chain = StabChain::new(d.v, &r.generators);
            assert!(aff.iter().all(|x| chain.contains(&x.to_perm(&geo.g))));
        }
    }
}
