//! Completing an affine unital to a unital with a parallelism.
//!
//! Every parallel class gets a new point that is added to all of its short
//! blocks; the new points together form one more block. The new point of the
//! class containing the Sylow subgroup `P` is numbered `n + P`, where `n` is
//! the number of affine points, so the block of new points is always last in
//! the sorted block list.

use crate::design::{Design, DesignReport};
use crate::para::{verify_parallelism, Parallelism};
use crate::unital::AffineUnital;
use crate::{Error, Result};

/// The closure of `u` along `p`.
pub fn close(u: &AffineUnital, p: &Parallelism) -> Result<Design> {
    let geo = u.geometry();
    let rep = verify_parallelism(geo, p);
    if let Some(w) = rep.witness {
        return Err(Error::InvalidParallelism(w));
    }
    let n = geo.n() as u32;
    let q = geo.q();
    // class index -> label of its new point
    let mut label = vec![u32::MAX; q as usize + 1];
    for s in 0..=q {
        label[p.class_of_sylow(geo, s) as usize] = n + s;
    }
    let mut blocks = u.long_blocks();
    for (b, blk) in geo.sb.blocks.iter().enumerate() {
        let mut pts = blk.points.clone();
        pts.push(label[p.class_of(b as u32) as usize]);
        blocks.push(pts);
    }
    blocks.sort();
    blocks.push((n..=n + q).collect());
    Ok(Design { v: (n + q + 1) as usize, blocks })
}

/// Checks the 2-(n³+1, n+1, 1) laws.
pub fn verify_design(d: &Design, n: usize) -> DesignReport {
    d.verify_unital(n)
}

/// Index of the block of new points in a closure.
pub fn infinity_block(d: &Design) -> usize {
    d.blocks.len() - 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grp::Geometry;
    use crate::unital::search_d_sets;
    use std::sync::Arc;

    fn unital(q: u32) -> AffineUnital {
        let g = Arc::new(Geometry::of_order(q).unwrap());
        let s = g.g.cyclic_s();
        let sol = search_d_sets(&g, &s, 0).unwrap().remove(0);
        AffineUnital::new(g, s, sol).unwrap()
    }

    #[test]
    fn closure_sizes() {
        for (q, v, b) in [(3, 28, 63), (4, 65, 208)] {
            let u = unital(q);
            for p in [Parallelism::flat(u.geometry()), Parallelism::natural(u.geometry())] {
                let d = close(&u, &p).unwrap();
                assert_eq!((d.v, d.blocks.len()), (v, b));
                assert!(verify_design(&d, q as usize).ok);
                assert_eq!(d.blocks[infinity_block(&d)], ((v - q as usize - 1) as u32..v as u32).collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn broken_closure_fails() {
        let u = unital(3);
        let mut d = close(&u, &Parallelism::flat(u.geometry())).unwrap();
        d.blocks.remove(0);
        assert!(!verify_design(&d, 3).ok);
    }

    #[test]
    fn sylow_labels() {
        let u = unital(3);
        let geo = u.geometry();
        let d = close(&u, &Parallelism::natural(geo)).unwrap();
        let n = geo.n() as u32;
        for s in 0..=3u32 {
            let mut blk = geo.sb.block(geo.sb.sylow_block(s, &geo.g)).points.clone();
            blk.push(n + s);
            assert!(d.blocks.contains(&blk));
        }
    }
}
