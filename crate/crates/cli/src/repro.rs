//! One-shot reproduction of the order 4 classification with PASS/FAIL lines.

use clap::{Args, ValueEnum};
use unital_core::classify::{
    isomorphism_types, small_order, sporadic_table, sporadic_translations, AffineKind, OrderFour,
};
use unital_core::grp::Geometry;
use unital_core::para::enumerate_parallelisms;

use crate::{Failure, Outcome};

#[derive(Clone, Copy, ValueEnum)]
pub enum Target {
    Table1,
    Table2,
    Leonids,
    Counts,
}

#[derive(Args)]
pub struct ReproArgs {
    #[arg(value_enum)]
    target: Target,
    /// Order for `counts`.
    #[arg(long, default_value_t = 4)]
    q: u32,
    /// Node budget for the searches; 0 means unlimited.
    #[arg(long, default_value_t = 0)]
    budget: u64,
}

/// Orbit lengths on the parallelisms of order 4, descending.
pub const TABLE1_CLASSICAL: [usize; 7] = [60, 60, 30, 25, 5, 1, 1];
pub const TABLE1_OTHER: [usize; 9] = [60, 60, 24, 20, 6, 5, 5, 1, 1];

/// Automorphism group orders and structures of the sporadic closures in
/// the order of `OrderFour::leonids`.
pub const TABLE2: [(u128, &str); 12] = [
    (40, "C4:D5"),
    (48, "C4:A4"),
    (240, "C4:(A4xC5)"),
    (20, "C5:C4"),
    (20, "C5:C4"),
    (10, "D5"),
    (40, "C4:D5"),
    (12, "A4"),
    (48, "C4:A4"),
    (48, "C4:A4"),
    (4, "C4"),
    (4, "C4"),
];

/// Nontrivial translation counts with center on the block of new points.
fn expected_translations(kind: AffineKind, label: usize) -> Option<usize> {
    match (kind, label) {
        (_, 2) => Some(1),
        (AffineKind::Classical, 4 | 5) | (AffineKind::Other, 3..=5) => Some(3),
        _ => None,
    }
}

struct Tally(bool);

impl Tally {
    fn line(&mut self, label: &str, got: impl std::fmt::Display, ok: bool) {
        println!("{label}: {got} {}", if ok { "PASS" } else { "FAIL" });
        self.0 &= ok;
    }

    fn finish(self) -> Outcome {
        if self.0 {
            Ok(())
        } else {
            Err(Failure::Verify("FAIL".into()))
        }
    }
}

fn list<T: std::fmt::Display>(xs: &[T]) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

fn table1(d4: &OrderFour, t: &mut Tally) {
    let h = d4.orbit_lengths(AffineKind::Classical);
    let e = d4.orbit_lengths(AffineKind::Other);
    t.line("orbits H", list(&h), h == TABLE1_CLASSICAL);
    t.line("orbits E", list(&e), e == TABLE1_OTHER);
}

fn table2(d4: &OrderFour, t: &mut Tally) -> Outcome {
    let rows = sporadic_table(d4)?;
    for (r, &(order, name)) in rows.iter().zip(TABLE2.iter()) {
        let got = r.structure.map_or("?", |s| s.name());
        t.line(&r.name(), format!("order={} structure={got}", r.order), r.order == order && got == name);
        t.line(&format!("{} [inf] fixed", r.name()), r.infinity_fixed, r.infinity_fixed);
    }
    Ok(())
}

fn leonids(d4: &OrderFour, t: &mut Tally) -> Outcome {
    let types = isomorphism_types(d4)?;
    for c in &types {
        println!("  {}", c.join(" = "));
    }
    t.line("isomorphism types", types.len(), types.len() == 16);
    for (kind, label, s) in sporadic_translations(d4)? {
        let name = format!("{kind}^pi{label} translations");
        let gen = s.generated.as_ref().map_or("trivial".to_string(), |f| format!("order {}", f.order));
        let got = format!("{} centers={:?} generated={gen}", s.nontrivial, s.centers);
        match expected_translations(kind, label) {
            None => println!("{name}: {got} (reported)"),
            Some(1) => t.line(&name, got, s.nontrivial == 1 && s.generated.as_ref().is_some_and(|f| f.order == 2)),
            Some(n) => {
                let klein = s.generated.as_ref().is_some_and(|f| f.order == 4 && f.abelian && f.exponent == 2);
                t.line(&name, got, s.nontrivial == n && s.centers.len() == 1 && klein);
            }
        }
    }
    Ok(())
}

fn counts(q: u32, budget: u64, t: &mut Tally) -> Outcome {
    if q == 4 {
        let geo = Geometry::of_order(4)?;
        let n = enumerate_parallelisms(&geo, budget)?.len();
        t.line("parallelisms", n, n == 182);
        return Ok(());
    }
    let r = small_order(q, budget)?;
    println!("parallelisms: {}", r.parallelisms);
    println!("orbit lengths: {}", list(&r.orbit_lengths));
    for (name, orbit) in &r.named {
        println!("  {name} in orbit {orbit}");
    }
    t.line("affine types", r.affine_types, r.affine_types == 1);
    if q % 2 == 1 {
        t.line("classes all named", r.orbit_lengths.len(), r.only_named());
    }
    Ok(())
}

pub fn run(args: &ReproArgs) -> Outcome {
    let mut t = Tally(true);
    match args.target {
        Target::Counts => counts(args.q, args.budget, &mut t)?,
        target => {
            let d4 = OrderFour::compute(args.budget)?;
            match target {
                Target::Table1 => table1(&d4, &mut t),
                Target::Table2 => table2(&d4, &mut t)?,
                Target::Leonids => leonids(&d4, &mut t)?,
                Target::Counts => unreachable!(),
            }
        }
    }
    t.finish()
}
