//! Shared inputs for the benchmarks.

use std::sync::Arc;

use unital_core::grp::Geometry;
use unital_core::unital::classify;
use unital_core::{close, ArGroup, Design, Parallelism};

/// Closure of the classical affine unital of order `q` under the natural
/// parallelism.
pub fn natural_closure(q: u32) -> Design {
    let geo = Arc::new(Geometry::of_order(q).expect("supported order"));
    let ar = ArGroup::new(&geo.g);
    let types = classify(Arc::clone(&geo), &ar, &geo.g.cyclic_s(), 0).expect("search completes");
    close(&types[0].unital, &Parallelism::natural(&geo)).expect("valid parallelism")
}
