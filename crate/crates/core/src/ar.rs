//! The group of semilinear automorphisms of SL(2,q) combined with right
//! multiplications.
//!
//! All actions are on the right. An element `(a, l, h)` maps a point `x` to
//! `frob^l(a^{-1} x a) * h`: the semilinear part acts first, then the right
//! multiplication. Composition is left to right, so
//! `apply(compose(s, t), x) == apply(t, apply(s, x))`.

use std::fmt;

use crate::gf::{FieldElem, FieldSpec};
use crate::grp::{GroupElem, GroupTable, ShortBlocks};
use crate::perm::Perm;
use crate::{BlockId, Point, Result};

/// Scales `m` so that its first nonzero entry (scan order a, b, c, d) is 1.
pub fn normalize_projective(m: &GroupElem, f: &FieldSpec) -> GroupElem {
    let first = m.entries().into_iter().find(|x| !x.is_zero()).expect("invertible matrix");
    m.scale(f.inv(first).expect("nonzero"), f)
}

/// Normalized representatives of PGL(2,q), in ascending order.
pub fn pgl_elements(f: &FieldSpec) -> Vec<GroupElem> {
    let q = f.order();
    let mut out = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                for d in 0..q {
                    let m = GroupElem::new(a, b, c, d);
                    let first = m.entries().into_iter().find(|x| !x.is_zero());
                    if first == Some(FieldElem::ONE) && !m.det(f).is_zero() {
                        out.push(m);
                    }
                }
            }
        }
    }
    out
}

/// An element of PGammaL(2,q) acting on SL(2,q): conjugation by a projective
/// matrix class followed by a Frobenius power.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Semilinear {
    pub mat: GroupElem,
    pub frob: u32,
}

impl Semilinear {
    pub fn identity() -> Semilinear {
        Semilinear { mat: GroupElem::identity(), frob: 0 }
    }

    pub fn new(mat: GroupElem, frob: u32, f: &FieldSpec) -> Semilinear {
        Semilinear { mat: normalize_projective(&mat, f), frob: frob % f.e() }
    }

    /// Image of a matrix (any determinant) under this map.
    pub fn apply_mat(&self, x: &GroupElem, f: &FieldSpec) -> GroupElem {
        x.conjugate_by(&self.mat, f).expect("invertible").frobenius(self.frob, f)
    }

    pub fn apply(&self, g: &GroupTable, x: Point) -> Point {
        let m = self.apply_mat(&g.elem(x), g.field());
        g.index_of(&m).expect("automorphism of SL(2,q)")
    }

    /// `self` then `other`.
    pub fn compose(&self, other: &Semilinear, f: &FieldSpec) -> Semilinear {
        let e = f.e();
        let b = other.mat.frobenius((e - self.frob) % e, f);
        Semilinear::new(self.mat.mul(&b, f), self.frob + other.frob, f)
    }

    pub fn inverse(&self, f: &FieldSpec) -> Semilinear {
        let e = f.e();
        let ai = self.mat.inverse(f).expect("invertible");
        Semilinear::new(ai.frobenius(self.frob, f), (e - self.frob) % e, f)
    }

    pub fn point_perm(&self, g: &GroupTable) -> Vec<Point> {
        g.points().map(|x| self.apply(g, x)).collect()
    }
}

/// An element `alpha * rho_h` of the semilinear group times right
/// multiplications.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ArElem {
    pub semi: Semilinear,
    /// The right multiplication factor `h`, as a point.
    pub rmul: Point,
}

impl fmt::Display for ArElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "gamma{} phi^{} rho[{}]", self.semi.mat, self.semi.frob, self.rmul)
    }
}

impl ArElem {
    pub fn identity(g: &GroupTable) -> ArElem {
        ArElem { semi: Semilinear::identity(), rmul: g.one() }
    }

    /// Conjugation by an invertible matrix.
    pub fn gamma(g: &GroupTable, a: &GroupElem) -> ArElem {
        ArElem { semi: Semilinear::new(*a, 0, g.field()), rmul: g.one() }
    }

    /// Right multiplication by `h`.
    pub fn rho(_g: &GroupTable, h: Point) -> ArElem {
        ArElem { semi: Semilinear::identity(), rmul: h }
    }

    /// Entrywise Frobenius power.
    pub fn phi(g: &GroupTable, l: u32) -> ArElem {
        ArElem { semi: Semilinear::new(GroupElem::identity(), l, g.field()), rmul: g.one() }
    }

    /// Left multiplication by `x`, i.e. `gamma_{x^{-1}} rho_x`.
    pub fn left_mul(g: &GroupTable, x: Point) -> ArElem {
        ArElem::gamma(g, &g.elem(g.inv(x))).compose(g, &ArElem::rho(g, x))
    }

    /// The twisted map `x -> h^{-1} x bar(h)` as `gamma_h rho_{h^{-1} bar(h)}`.
    pub fn theta(g: &GroupTable, h: Point) -> Result<ArElem> {
        let hb = g.bar_point(h)?;
        let r = g.mul(g.inv(h), hb);
        Ok(ArElem::gamma(g, &g.elem(h)).compose(g, &ArElem::rho(g, r)))
    }

    pub fn apply(&self, g: &GroupTable, x: Point) -> Point {
        g.mul(self.semi.apply(g, x), self.rmul)
    }

    /// `self` then `other`.
    pub fn compose(&self, g: &GroupTable, other: &ArElem) -> ArElem {
        let f = g.field();
        let semi = self.semi.compose(&other.semi, f);
        let h = other.semi.apply(g, self.rmul);
        ArElem { semi, rmul: g.mul(h, other.rmul) }
    }

    pub fn inverse(&self, g: &GroupTable) -> ArElem {
        let si = self.semi.inverse(g.field());
        ArElem { semi: si, rmul: si.apply(g, g.inv(self.rmul)) }
    }

    pub fn is_identity(&self, g: &GroupTable) -> bool {
        *self == ArElem::identity(g)
    }

    pub fn point_perm(&self, g: &GroupTable) -> Vec<Point> {
        g.points().map(|x| self.apply(g, x)).collect()
    }

    pub fn to_perm(&self, g: &GroupTable) -> Perm {
        Perm::from_vec(self.point_perm(g))
    }

    pub fn apply_block(&self, g: &GroupTable, sb: &ShortBlocks, b: BlockId) -> BlockId {
        sb.image_fast(g, b, &self.point_perm(g))
    }
}

/// The full group of [`ArElem`]s for one SL(2,q), with cached point
/// permutations of the semilinear parts.
pub struct ArGroup {
    semis: Vec<Semilinear>,
    perms: Vec<Vec<Point>>,
    n: usize,
}

impl fmt::Debug for ArGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ArGroup({} x {})", self.semis.len(), self.n)
    }
}

impl ArGroup {
    pub fn new(g: &GroupTable) -> ArGroup {
        let f = g.field();
        let mut semis = Vec::new();
        for m in pgl_elements(f) {
            for l in 0..f.e() {
                semis.push(Semilinear { mat: m, frob: l });
            }
        }
        let perms = semis.iter().map(|s| s.point_perm(g)).collect();
        ArGroup { semis, perms, n: g.order() }
    }

    /// `#PGammaL(2,q)`.
    pub fn semilinear_order(&self) -> usize {
        self.semis.len()
    }

    pub fn order(&self) -> usize {
        self.semis.len() * self.n
    }

    pub fn semilinear(&self) -> &[Semilinear] {
        &self.semis
    }

    pub fn semilinear_perm(&self, i: usize) -> &[Point] {
        &self.perms[i]
    }

    pub fn semilinear_index(&self, s: &Semilinear) -> Option<usize> {
        self.semis.binary_search(s).ok()
    }

    /// All elements, semilinear part outermost.
    pub fn elements(&self) -> impl Iterator<Item = ArElem> + '_ {
        self.semis
            .iter()
            .flat_map(move |&semi| (0..self.n as Point).map(move |h| ArElem { semi, rmul: h }))
    }

    /// Point permutation of `alpha_i * rho_h`, written into `out`.
    pub fn perm_into(&self, g: &GroupTable, i: usize, h: Point, out: &mut Vec<Point>) {
        out.clear();
        out.extend(self.perms[i].iter().map(|&y| g.mul(y, h)));
    }

    pub fn point_perm(&self, g: &GroupTable, t: &ArElem) -> Vec<Point> {
        let i = self.semilinear_index(&t.semi).expect("normalized element");
        let mut out = Vec::with_capacity(self.n);
        self.perm_into(g, i, t.rmul, &mut out);
        out
    }

    /// Elements whose point permutation satisfies `keep`; the predicate sees
    /// the permutation of `alpha_i rho_h`.
    pub fn filter<F>(&self, g: &GroupTable, mut keep: F) -> Vec<ArElem>
    where
        F: FnMut(&[Point]) -> bool,
    {
        let mut out = Vec::new();
        let mut buf = Vec::with_capacity(self.n);
        for (i, &semi) in self.semis.iter().enumerate() {
            for h in 0..self.n as Point {
                self.perm_into(g, i, h, &mut buf);
                if keep(&buf) {
                    out.push(ArElem { semi, rmul: h });
                }
            }
        }
        out
    }
}
