//! SL(2,q) as a dense point set, its Sylow p-subgroups and their cosets.

use std::collections::BTreeSet;
use std::fmt;

use crate::gf::{FieldElem, FieldSpec};
use crate::{BlockId, Error, Point, Result};

/// Upper bound on `#SL(2,q)` handled by [`GroupTable`].
pub const MAX_GROUP_ORDER: usize = 100_000;

const MUL_TABLE_LIMIT: usize = 1500;

const NONE: u32 = u32::MAX;

/// A 2x2 matrix `(a b / c d)` over a finite field.
///
/// Elements of SL(2,q) have determinant 1; the same type carries the
/// GL(2,q) matrices that act by conjugation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GroupElem {
    pub a: FieldElem,
    pub b: FieldElem,
    pub c: FieldElem,
    pub d: FieldElem,
}

impl GroupElem {
    pub fn new(a: u32, b: u32, c: u32, d: u32) -> GroupElem {
        GroupElem { a: FieldElem(a), b: FieldElem(b), c: FieldElem(c), d: FieldElem(d) }
    }

    pub fn identity() -> GroupElem {
        GroupElem::new(1, 0, 0, 1)
    }

    pub fn entries(&self) -> [FieldElem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn from_entries(e: [FieldElem; 4]) -> GroupElem {
        GroupElem { a: e[0], b: e[1], c: e[2], d: e[3] }
    }

    pub fn det(&self, f: &FieldSpec) -> FieldElem {
        f.sub(f.mul(self.a, self.d), f.mul(self.b, self.c))
    }

    pub fn mul(&self, other: &GroupElem, f: &FieldSpec) -> GroupElem {
        GroupElem {
            a: f.add(f.mul(self.a, other.a), f.mul(self.b, other.c)),
            b: f.add(f.mul(self.a, other.b), f.mul(self.b, other.d)),
            c: f.add(f.mul(self.c, other.a), f.mul(self.d, other.c)),
            d: f.add(f.mul(self.c, other.b), f.mul(self.d, other.d)),
        }
    }

    /// The adjugate, which is the inverse up to the factor `det`.
    pub fn adj(&self, f: &FieldSpec) -> GroupElem {
        GroupElem { a: self.d, b: f.neg(self.b), c: f.neg(self.c), d: self.a }
    }

    pub fn inverse(&self, f: &FieldSpec) -> Result<GroupElem> {
        let di = f.inv(self.det(f))?;
        Ok(self.adj(f).scale(di, f))
    }

    pub fn scale(&self, s: FieldElem, f: &FieldSpec) -> GroupElem {
        GroupElem::from_entries(self.entries().map(|x| f.mul(x, s)))
    }

    pub fn frobenius(&self, l: u32, f: &FieldSpec) -> GroupElem {
        GroupElem::from_entries(self.entries().map(|x| f.frobenius(x, l)))
    }

    /// Entrywise `x -> x^sqrt(q)`.
    pub fn bar(&self, f: &FieldSpec) -> Result<GroupElem> {
        let e = self.entries();
        Ok(GroupElem::from_entries([f.bar(e[0])?, f.bar(e[1])?, f.bar(e[2])?, f.bar(e[3])?]))
    }

    /// `m^{-1} x m` for an invertible `m`; computed with the adjugate, which
    /// gives the same result since scalars cancel.
    pub fn conjugate_by(&self, m: &GroupElem, f: &FieldSpec) -> Result<GroupElem> {
        let det = m.det(f);
        let di = f.inv(det)?;
        Ok(m.adj(f).mul(self, f).mul(m, f).scale(di, f))
    }

    /// The lower-left entry, `(0,1) g (1,0)^T`.
    pub fn lower_left(&self) -> FieldElem {
        self.c
    }
}

impl fmt::Display for GroupElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} / {} {})", self.a, self.b, self.c, self.d)
    }
}

/// Which side a coset is taken on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `Tg`
    Right,
    /// `gT`
    Left,
}

/// A subgroup given by its sorted member list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subgroup {
    pub members: Vec<Point>,
}

impl Subgroup {
    pub fn new(mut members: Vec<Point>) -> Subgroup {
        members.sort_unstable();
        members.dedup();
        Subgroup { members }
    }

    pub fn order(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, x: Point) -> bool {
        self.members.binary_search(&x).is_ok()
    }
}

/// SL(2,q) with every element indexed.
pub struct GroupTable {
    field: FieldSpec,
    elems: Vec<GroupElem>,
    lookup: Vec<u32>,
    one: Point,
    inv: Vec<Point>,
    mul: Option<Vec<Point>>,
}

impl fmt::Debug for GroupTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SL(2,{})", self.field.order())
    }
}

impl GroupTable {
    /// Enumerates SL(2,q) in ascending `(a,b,c,d)` code order.
    pub fn new(field: FieldSpec) -> Result<GroupTable> {
        let q = field.order() as usize;
        let n = q * q * q - q;
        if n > MAX_GROUP_ORDER {
            return Err(Error::TooLarge(format!("#SL(2,{q}) = {n} exceeds {MAX_GROUP_ORDER}")));
        }
        let mut elems = Vec::with_capacity(n);
        let mut lookup = vec![NONE; q * q * q * q];
        for a in 0..q as u32 {
            for b in 0..q as u32 {
                for c in 0..q as u32 {
                    for d in 0..q as u32 {
                        let m = GroupElem::new(a, b, c, d);
                        if m.det(&field) == FieldElem::ONE {
                            lookup[Self::code(q, &m)] = elems.len() as u32;
                            elems.push(m);
                        }
                    }
                }
            }
        }
        debug_assert_eq!(elems.len(), n);
        let one = lookup[Self::code(q, &GroupElem::identity())];
        let inv = elems
            .iter()
            .map(|m| lookup[Self::code(q, &m.adj(&field))])
            .collect();
        let mut g = GroupTable { field, elems, lookup, one, inv, mul: None };
        if n <= MUL_TABLE_LIMIT {
            let mut t = Vec::with_capacity(n * n);
            for x in 0..n {
                for y in 0..n {
                    t.push(g.mul_slow(x as Point, y as Point));
                }
            }
            g.mul = Some(t);
        }
        Ok(g)
    }

    pub fn of_order(q: u32) -> Result<GroupTable> {
        GroupTable::new(FieldSpec::of_order(q)?)
    }

    fn code(q: usize, m: &GroupElem) -> usize {
        ((m.a.0 as usize * q + m.b.0 as usize) * q + m.c.0 as usize) * q + m.d.0 as usize
    }

    fn mul_slow(&self, x: Point, y: Point) -> Point {
        let m = self.elems[x as usize].mul(&self.elems[y as usize], &self.field);
        self.lookup[Self::code(self.q() as usize, &m)]
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    pub fn q(&self) -> u32 {
        self.field.order()
    }

    pub fn order(&self) -> usize {
        self.elems.len()
    }

    pub fn one(&self) -> Point {
        self.one
    }

    pub fn elems(&self) -> &[GroupElem] {
        &self.elems
    }

    pub fn elem(&self, x: Point) -> GroupElem {
        self.elems[x as usize]
    }

    pub fn index_of(&self, m: &GroupElem) -> Option<Point> {
        let q = self.q() as usize;
        if m.entries().iter().any(|x| x.0 as usize >= q) {
            return None;
        }
        let i = self.lookup[Self::code(q, m)];
        (i != NONE).then_some(i)
    }

    pub fn points(&self) -> impl Iterator<Item = Point> {
        0..self.elems.len() as Point
    }

    pub fn mul(&self, x: Point, y: Point) -> Point {
        match &self.mul {
            Some(t) => t[x as usize * self.elems.len() + y as usize],
            None => self.mul_slow(x, y),
        }
    }

    pub fn inv(&self, x: Point) -> Point {
        self.inv[x as usize]
    }

    /// `h^{-1} x h`.
    pub fn conj(&self, x: Point, h: Point) -> Point {
        self.mul(self.mul(self.inv(h), x), h)
    }

    /// `-1` as a group element.
    pub fn minus_one(&self) -> Point {
        let f = &self.field;
        let m1 = f.neg(FieldElem::ONE);
        self.index_of(&GroupElem { a: m1, b: FieldElem::ZERO, c: FieldElem::ZERO, d: m1 })
            .expect("-1 has determinant 1")
    }

    pub fn element_order(&self, x: Point) -> usize {
        let mut k = 1;
        let mut cur = x;
        while cur != self.one {
            cur = self.mul(cur, x);
            k += 1;
        }
        k
    }

    /// The upper unitriangular Sylow subgroup `T_0`.
    pub fn t0(&self) -> Subgroup {
        let members = self
            .field
            .elements()
            .map(|x| self.index_of(&GroupElem { a: FieldElem::ONE, b: x, c: FieldElem::ZERO, d: FieldElem::ONE }).unwrap())
            .collect();
        Subgroup::new(members)
    }

    /// The `q+1` Sylow p-subgroups: `T_0` first, then its other conjugates in
    /// ascending member-list order.
    pub fn sylow_subgroups(&self) -> Vec<Subgroup> {
        let t0 = self.t0();
        let mut rest = BTreeSet::new();
        for h in self.points() {
            let c = Subgroup::new(t0.members.iter().map(|&t| self.conj(t, h)).collect());
            if c != t0 {
                rest.insert(c);
            }
        }
        let mut out = vec![t0];
        out.extend(rest);
        out
    }

    /// Normalizer of `t` in SL(2,q), by brute force.
    pub fn normalizer(&self, t: &Subgroup) -> Subgroup {
        Subgroup::new(
            self.points()
                .filter(|&h| t.members.iter().all(|&x| t.contains(self.conj(x, h))))
                .collect(),
        )
    }

    /// Projective classes of GL(2,q) normalizing `t`, each normalized so its
    /// first nonzero entry is 1.
    pub fn normalizer_pgl(&self, t: &Subgroup) -> Vec<GroupElem> {
        let f = &self.field;
        crate::ar::pgl_elements(f)
            .into_iter()
            .filter(|a| {
                t.members.iter().all(|&x| {
                    let y = self.elem(x).conjugate_by(a, f).unwrap();
                    self.index_of(&y).is_some_and(|i| t.contains(i))
                })
            })
            .collect()
    }

    /// Closes a set of elements under multiplication.
    pub fn generate(&self, gens: &[Point]) -> Subgroup {
        let mut seen = vec![false; self.order()];
        let mut out = vec![self.one];
        seen[self.one as usize] = true;
        let mut i = 0;
        while i < out.len() {
            let x = out[i];
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    out.push(y);
                }
            }
            i += 1;
        }
        Subgroup::new(out)
    }

    /// The canonical cyclic subgroup of order `q+1`: powers of the first
    /// element of that order in enumeration order.
    pub fn cyclic_s(&self) -> Subgroup {
        let k = self.q() as usize + 1;
        let g = self
            .points()
            .find(|&x| self.element_order(x) == k)
            .expect("SL(2,q) has elements of order q+1");
        self.generate(&[g])
    }

    /// All subgroups of order `q+1` that meet every Sylow p-subgroup
    /// trivially, up to equality; found among subgroups generated by at most
    /// two elements.
    pub fn subgroups_of_order_q_plus_1(&self) -> Vec<Subgroup> {
        let k = self.q() as usize + 1;
        let cand: Vec<Point> = self
            .points()
            .filter(|&x| k.is_multiple_of(self.element_order(x)) && x != self.one)
            .collect();
        let mut found = BTreeSet::new();
        for (i, &x) in cand.iter().enumerate() {
            let s = self.generate(&[x]);
            if s.order() == k {
                found.insert(s);
                continue;
            }
            for &y in &cand[i + 1..] {
                let s = self.generate(&[x, y]);
                if s.order() == k {
                    found.insert(s);
                }
            }
        }
        found.into_iter().collect()
    }

    /// The twisted action `x -> h^{-1} x bar(h)` on SL(2,q) for square `q`.
    pub fn theta_apply(&self, h: Point, x: Point) -> Result<Point> {
        let f = &self.field;
        let hb = self.elem(h).bar(f)?;
        let hb = self.index_of(&hb).expect("bar preserves the determinant 1");
        Ok(self.mul(self.mul(self.inv(h), x), hb))
    }

    /// Entrywise `bar` on a point.
    pub fn bar_point(&self, x: Point) -> Result<Point> {
        let m = self.elem(x).bar(&self.field)?;
        Ok(self.index_of(&m).expect("bar preserves the determinant 1"))
    }
}

/// A coset of a Sylow p-subgroup, identified by its sorted point set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ShortBlock {
    pub points: Vec<Point>,
    /// Sylow id `P` with `points = P g`.
    pub right: u32,
    /// Sylow id `Q` with `points = g Q`.
    pub left: u32,
}

/// The universe of short blocks: all right cosets of all Sylow p-subgroups,
/// sorted by point set.
pub struct ShortBlocks {
    pub sylows: Vec<Subgroup>,
    pub blocks: Vec<ShortBlock>,
    sylow_of: Vec<u32>,
    right_coset: Vec<BlockId>,
    left_coset: Vec<BlockId>,
    n: usize,
}

impl fmt::Debug for ShortBlocks {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ShortBlocks({} blocks)", self.blocks.len())
    }
}

impl ShortBlocks {
    pub fn new(g: &GroupTable) -> ShortBlocks {
        let sylows = g.sylow_subgroups();
        let n = g.order();
        let mut sylow_of = vec![NONE; n];
        for (i, s) in sylows.iter().enumerate() {
            for &x in &s.members {
                if x != g.one() {
                    sylow_of[x as usize] = i as u32;
                }
            }
        }
        let mut sets = BTreeSet::new();
        for s in &sylows {
            for x in g.points() {
                let mut pts: Vec<Point> = s.members.iter().map(|&t| g.mul(t, x)).collect();
                pts.sort_unstable();
                sets.insert(pts);
            }
        }
        let mut blocks = Vec::with_capacity(sets.len());
        for pts in sets {
            let x0 = pts[0];
            let x1 = pts[1];
            let right = sylow_of[g.mul(x1, g.inv(x0)) as usize];
            let left = sylow_of[g.mul(g.inv(x0), x1) as usize];
            blocks.push(ShortBlock { points: pts, right, left });
        }
        let ns = sylows.len();
        let mut right_coset = vec![NONE; ns * n];
        let mut left_coset = vec![NONE; ns * n];
        for (id, b) in blocks.iter().enumerate() {
            for &x in &b.points {
                right_coset[b.right as usize * n + x as usize] = id as BlockId;
                left_coset[b.left as usize * n + x as usize] = id as BlockId;
            }
        }
        ShortBlocks { sylows, blocks, sylow_of, right_coset, left_coset, n }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn block(&self, id: BlockId) -> &ShortBlock {
        &self.blocks[id as usize]
    }

    /// Sylow id of a nonidentity p-element.
    pub fn sylow_of(&self, x: Point) -> Option<u32> {
        let s = self.sylow_of[x as usize];
        (s != NONE).then_some(s)
    }

    /// The block `P x`.
    pub fn right_coset(&self, sylow: u32, x: Point) -> BlockId {
        self.right_coset[sylow as usize * self.n + x as usize]
    }

    /// The block `x P`.
    pub fn left_coset(&self, sylow: u32, x: Point) -> BlockId {
        self.left_coset[sylow as usize * self.n + x as usize]
    }

    /// The coset of `sylow` through `x` on the given side.
    pub fn coset(&self, sylow: u32, x: Point, side: Side) -> BlockId {
        match side {
            Side::Right => self.right_coset(sylow, x),
            Side::Left => self.left_coset(sylow, x),
        }
    }

    /// The short block through two distinct points, if any.
    pub fn block_through(&self, g: &GroupTable, x: Point, y: Point) -> Option<BlockId> {
        if x == y {
            return None;
        }
        let s = self.sylow_of(g.mul(y, g.inv(x)))?;
        Some(self.right_coset(s, x))
    }

    /// Looks up a sorted point set.
    pub fn find(&self, g: &GroupTable, points: &[Point]) -> Option<BlockId> {
        if points.len() < 2 {
            return None;
        }
        let id = self.block_through(g, points[0], points[1])?;
        (self.blocks[id as usize].points == points).then_some(id)
    }

    /// Image of a block under a point permutation, or `None` if the image is
    /// not a short block.
    pub fn image(&self, g: &GroupTable, id: BlockId, perm: &[Point]) -> Option<BlockId> {
        let pts = &self.blocks[id as usize].points;
        let x = perm[pts[0] as usize];
        let y = perm[pts[1] as usize];
        let b = self.block_through(g, x, y)?;
        let target = &self.blocks[b as usize].points;
        pts[2..]
            .iter()
            .all(|&z| target.binary_search(&perm[z as usize]).is_ok())
            .then_some(b)
    }

    /// Image of a block when the permutation is known to preserve the
    /// universe; only two points are mapped.
    pub fn image_fast(&self, g: &GroupTable, id: BlockId, perm: &[Point]) -> BlockId {
        let pts = &self.blocks[id as usize].points;
        self.block_through(g, perm[pts[0] as usize], perm[pts[1] as usize])
            .expect("permutation preserves short blocks")
    }

    /// Block permutation induced by a point permutation.
    pub fn block_perm(&self, g: &GroupTable, perm: &[Point]) -> Option<Vec<BlockId>> {
        (0..self.len() as BlockId).map(|b| self.image(g, b, perm)).collect()
    }

    /// The blocks through the identity: the Sylow subgroups themselves.
    pub fn sylow_block(&self, sylow: u32, g: &GroupTable) -> BlockId {
        self.right_coset(sylow, g.one())
    }
}

/// SL(2,q) together with its universe of short blocks.
#[derive(Debug)]
pub struct Geometry {
    pub g: GroupTable,
    pub sb: ShortBlocks,
}

impl Geometry {
    pub fn new(g: GroupTable) -> Geometry {
        let sb = ShortBlocks::new(&g);
        Geometry { g, sb }
    }

    pub fn of_order(q: u32) -> Result<Geometry> {
        Ok(Geometry::new(GroupTable::of_order(q)?))
    }

    pub fn q(&self) -> u32 {
        self.g.q()
    }

    /// Number of points, `q^3 - q`.
    pub fn n(&self) -> usize {
        self.g.order()
    }

    pub fn block_count(&self) -> usize {
        self.sb.len()
    }
}

/// The coset of `t` by `g` on the given side, as a sorted point set.
pub fn coset(g: &GroupTable, t: &Subgroup, x: Point, side: Side) -> Vec<Point> {
    let mut pts: Vec<Point> = t
        .members
        .iter()
        .map(|&s| match side {
            Side::Right => g.mul(s, x),
            Side::Left => g.mul(x, s),
        })
        .collect();
    pts.sort_unstable();
    pts
}
