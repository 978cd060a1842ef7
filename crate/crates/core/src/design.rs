//! Finite incidence structures given by block lists.

use std::fmt;

use crate::perm::Perm;

/// Points `0..v` and a list of blocks, each a sorted point list.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Design {
    pub v: usize,
    pub blocks: Vec<Vec<u32>>,
}

/// Result of checking a block list against the 2-(n³+1, n+1, 1) laws.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DesignReport {
    pub v: usize,
    pub b: usize,
    pub ok: bool,
    /// First violation found, in a human readable form.
    pub witness: Option<String>,
}

impl fmt::Display for DesignReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.witness {
            None => write!(f, "ok: v={} b={}", self.v, self.b),
            Some(w) => write!(f, "violation: {w}"),
        }
    }
}

impl Design {
    /// Builds a design, sorting the points inside each block.
    pub fn new(v: usize, blocks: Vec<Vec<u32>>) -> Design {
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Design { v, blocks }
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    /// Same design with the block list sorted lexicographically.
    pub fn canonical_order(&self) -> Design {
        let mut blocks = self.blocks.clone();
        blocks.sort();
        Design { v: self.v, blocks }
    }

    /// Blocks through each point.
    pub fn point_blocks(&self) -> Vec<Vec<u32>> {
        let mut out = vec![Vec::new(); self.v];
        for (i, b) in self.blocks.iter().enumerate() {
            for &x in b {
                out[x as usize].push(i as u32);
            }
        }
        out
    }

    /// Index of the unique block through each pair, `u32::MAX` when the pair
    /// is on no block. Pairs on two or more blocks are reported as an error.
    pub fn pair_table(&self) -> Result<Vec<u32>, (u32, u32)> {
        let v = self.v;
        let mut t = vec![u32::MAX; v * v];
        for (i, b) in self.blocks.iter().enumerate() {
            for (k, &x) in b.iter().enumerate() {
                for &y in &b[k + 1..] {
                    let s = x as usize * v + y as usize;
                    if t[s] != u32::MAX {
                        return Err((x, y));
                    }
                    t[s] = i as u32;
                    t[y as usize * v + x as usize] = i as u32;
                }
            }
        }
        Ok(t)
    }

    /// Image of the design under a point permutation, blocks in canonical
    /// order.
    pub fn relabel(&self, perm: &Perm) -> Design {
        let blocks = self
            .blocks
            .iter()
            .map(|b| b.iter().map(|&x| perm.apply(x)).collect())
            .collect();
        Design::new(self.v, blocks).canonical_order()
    }

    /// True if the permutation maps the block set onto itself.
    pub fn is_automorphism(&self, perm: &[u32]) -> bool {
        let mut sorted = self.blocks.clone();
        sorted.sort();
        let mut buf = Vec::new();
        self.blocks.iter().all(|b| {
            buf.clear();
            buf.extend(b.iter().map(|&x| perm[x as usize]));
            buf.sort_unstable();
            sorted.binary_search(&buf).is_ok()
        })
    }

    /// Checks the 2-(n³+1, n+1, 1) laws exhaustively.
    pub fn verify_unital(&self, n: usize) -> DesignReport {
        let mut rep = DesignReport { v: self.v, b: self.blocks.len(), ok: false, witness: None };
        let v = n * n * n + 1;
        let b = n * n * (n * n - n + 1);
        if self.v != v {
            rep.witness = Some(format!("point count {} != {v}", self.v));
            return rep;
        }
        if self.blocks.len() != b {
            rep.witness = Some(format!("block count {} != {b}", self.blocks.len()));
            return rep;
        }
        for (i, blk) in self.blocks.iter().enumerate() {
            if blk.len() != n + 1 {
                rep.witness = Some(format!("block {i} has {} points", blk.len()));
                return rep;
            }
            if blk.windows(2).any(|w| w[0] >= w[1]) || blk.iter().any(|&x| x as usize >= self.v) {
                rep.witness = Some(format!("block {i} is not a set of points"));
                return rep;
            }
        }
        let table = match self.pair_table() {
            Ok(t) => t,
            Err((x, y)) => {
                rep.witness = Some(format!("points {x},{y} lie on two blocks"));
                return rep;
            }
        };
        for x in 0..v {
            for y in x + 1..v {
                if table[x * v + y] == u32::MAX {
                    rep.witness = Some(format!("points {x},{y} lie on no block"));
                    return rep;
                }
            }
        }
        rep.ok = true;
        rep
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// The affine plane of order 3 is the unital of order 2.
    fn ag23() -> Design {
        let mut blocks = Vec::new();
        let pt = |x: u32, y: u32| x * 3 + y;
        for a in 0..3 {
            // vertical lines
            blocks.push((0..3).map(|y| pt(a, y)).collect());
            // lines y = m x + a
            for m in 0..3 {
                blocks.push((0..3).map(|x| pt(x, (m * x + a) % 3)).collect());
            }
        }
        Design::new(9, blocks)
    }

    #[test]
    fn affine_plane_is_order_two_unital() {
        let d = ag23();
        assert!(d.verify_unital(2).ok);
    }

    #[test]
    fn removing_a_block_is_detected() {
        let mut d = ag23();
        d.blocks.pop();
        let r = d.verify_unital(2);
        assert!(!r.ok);
        assert!(r.witness.unwrap().contains("block count"));
    }

    #[test]
    fn duplicate_pair_is_witnessed() {
        let mut d = ag23();
        d.blocks[0] = d.blocks[1].clone();
        let r = d.verify_unital(2);
        assert!(!r.ok);
        assert!(r.witness.unwrap().contains("two blocks"));
    }

    #[test]
    fn relabel_and_automorphism() {
        let d = ag23();
        let shift = Perm::from_vec((0..9).map(|p| (p / 3) * 3 + (p % 3 + 1) % 3).collect());
        assert!(d.is_automorphism(shift.as_slice()));
        assert_eq!(d.relabel(&shift), d.canonical_order());
        let swap = Perm::from_vec(vec![1, 0, 2, 3, 4, 5, 6, 7, 8]);
        assert!(!d.is_automorphism(swap.as_slice()));
    }
}
