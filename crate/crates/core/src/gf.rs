//! Finite fields GF(p^e) with a fixed primitive modulus.
//!
//! Elements are stored as base-`p` integer codes of their coefficient
//! tuples `(c_0, ..., c_{e-1})`, so code order is a total order used by every
//! canonical form in the crate. Multiplication goes through discrete-log
//! tables relative to the class of `x`, which is a generator because the
//! modulus is primitive.

use std::fmt;

use crate::{Error, Result};

/// Largest supported field order.
pub const MAX_ORDER: u32 = 1 << 16;

const ADD_TABLE_LIMIT: u32 = 1024;

/// An element of a finite field, encoded as a base-`p` coefficient code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElem(pub u32);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    pub fn code(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// The field GF(p^e) together with its arithmetic tables.
#[derive(Clone)]
pub struct FieldSpec {
    p: u32,
    e: u32,
    q: u32,
    /// Low coefficients `c_0..c_{e-1}` of the monic modulus.
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add: Option<Vec<u32>>,
    square: Vec<bool>,
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldSpec {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` into `(p, e)` if it is a prime power.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let mut e = 0;
    let mut r = q;
    while r.is_multiple_of(p) {
        r /= p;
        e += 1;
    }
    (r == 1).then_some((p, e))
}

fn digits(code: u32, p: u32, e: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(e as usize);
    let mut c = code;
    for _ in 0..e {
        out.push(c % p);
        c /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

/// Multiplies the element with code `code` by `x` modulo the monic modulus.
fn times_x(code: u32, p: u32, e: u32, modulus: &[u32]) -> u32 {
    let mut d = digits(code, p, e);
    let top = d[e as usize - 1];
    for i in (1..e as usize).rev() {
        d[i] = d[i - 1];
    }
    d[0] = 0;
    // x^e = -(c_0 + c_1 x + ... + c_{e-1} x^{e-1})
    for (i, &c) in modulus.iter().enumerate() {
        d[i] = (d[i] + (p - c) * top) % p;
    }
    undigits(&d, p)
}

/// Order of the class of `x` modulo the modulus, or `None` if it never
/// returns to 1 within `q - 1` steps (non-invertible, so reducible).
fn order_of_x(p: u32, e: u32, modulus: &[u32]) -> Option<u32> {
    let q = p.pow(e);
    let x = if e == 1 { (p - modulus[0]) % p } else { p };
    let mut cur = x;
    for k in 1..q {
        if cur == 1 {
            return Some(k);
        }
        cur = times_x(cur, p, e, modulus);
        if cur == 0 {
            return None;
        }
    }
    None
}

/// Polynomial remainder over GF(p); coefficients low-degree-first.
fn poly_rem(mut a: Vec<u32>, b: &[u32], p: u32) -> Vec<u32> {
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while a.len() > db {
        let top = *a.last().unwrap();
        if top != 0 {
            let f = top * lead_inv % p;
            let shift = a.len() - 1 - db;
            for (i, &c) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + (p - f * c % p)) % p;
            }
        }
        a.pop();
    }
    a
}

fn mod_inv(a: u32, p: u32) -> u32 {
    (1..p).find(|&b| a * b % p == 1).expect("nonzero residue mod prime")
}

/// Trial division of `x^e + c_{e-1} x^{e-1} + ... + c_0` by every monic
/// polynomial of degree `1..=e/2`.
pub fn is_irreducible(p: u32, modulus: &[u32]) -> bool {
    let e = modulus.len();
    let mut f: Vec<u32> = modulus.to_vec();
    f.push(1);
    for deg in 1..=e / 2 {
        for low in 0..p.pow(deg as u32) {
            let mut g = digits(low, p, deg as u32);
            g.push(1);
            if poly_rem(f.clone(), &g, p).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

impl FieldSpec {
    /// Builds GF(p^e) with the lexicographically least primitive modulus
    /// (coefficients compared low-degree-first).
    pub fn new(p: u32, e: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if e == 0 {
            return Err(Error::TooLarge(format!("extension degree must be positive, got {e}")));
        }
        let q = (p as u64).checked_pow(e).filter(|&q| q <= MAX_ORDER as u64);
        let Some(q) = q else {
            return Err(Error::TooLarge(format!("field order {p}^{e} exceeds {MAX_ORDER}")));
        };
        let q = q as u32;
        // c_0 is the most significant digit of the lexicographic scan.
        let modulus = (0..q)
            .map(|n| {
                let mut d = digits(n, p, e);
                d.reverse();
                d
            })
            .find(|m| m[0] != 0 && order_of_x(p, e, m) == Some(q - 1))
            .expect("a primitive polynomial exists for every degree");
        debug_assert!(is_irreducible(p, &modulus));
        Ok(Self::with_modulus(p, e, modulus))
    }

    /// Builds GF(q) for a prime power `q`.
    pub fn of_order(q: u32) -> Result<FieldSpec> {
        match prime_power(q) {
            Some((p, e)) => FieldSpec::new(p, e),
            None => Err(Error::NotPrime(q)),
        }
    }

    fn with_modulus(p: u32, e: u32, modulus: Vec<u32>) -> FieldSpec {
        let q = p.pow(e);
        let mut exp = vec![0u32; q as usize];
        let mut log = vec![0u32; q as usize];
        let x = if e == 1 { (p - modulus[0]) % p } else { p };
        let mut cur = 1u32;
        for k in 0..q - 1 {
            exp[k as usize] = cur;
            log[cur as usize] = k;
            cur = if e == 1 { cur * x % p } else { times_x(cur, p, e, &modulus) };
        }
        exp[q as usize - 1] = 1;
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                let da = digits(a, p, e);
                for b in 0..q {
                    let db = digits(b, p, e);
                    let s: Vec<u32> = da.iter().zip(&db).map(|(x, y)| (x + y) % p).collect();
                    t[(a * q + b) as usize] = undigits(&s, p);
                }
            }
            t
        });
        let mut square = vec![false; q as usize];
        square[0] = true;
        for k in 1..q {
            let sq = if p == 2 { true } else { log[k as usize].is_multiple_of(2) };
            square[k as usize] = sq;
        }
        FieldSpec { p, e, q, modulus, exp, log, add, square }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Low coefficients `c_0..c_{e-1}` of the monic modulus.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// Human-readable modulus, highest degree first.
    pub fn modulus_string(&self) -> String {
        let mut terms = vec![if self.e == 1 { "x".to_string() } else { format!("x^{}", self.e) }];
        for i in (0..self.e as usize).rev() {
            let c = self.modulus[i];
            if c == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{i}"),
            };
            terms.push(match (c, mono.is_empty()) {
                (1, false) => mono,
                (_, true) => c.to_string(),
                _ => format!("{c}{mono}"),
            });
        }
        terms.join(" + ")
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElem> {
        (0..self.q).map(FieldElem)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = FieldElem> {
        (1..self.q).map(FieldElem)
    }

    /// The generator of the multiplicative group (the class of `x`).
    pub fn generator(&self) -> FieldElem {
        FieldElem(self.exp[1 % (self.q as usize - 1).max(1)])
    }

    /// Embeds an integer through the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.add {
            Some(t) => FieldElem(t[(a.0 * self.q + b.0) as usize]),
            None => {
                let (mut x, mut y, mut out, mut place) = (a.0, b.0, 0, 1);
                for _ in 0..self.e {
                    out += ((x % self.p + y % self.p) % self.p) * place;
                    x /= self.p;
                    y /= self.p;
                    place *= self.p;
                }
                FieldElem(out)
            }
        }
    }

    pub fn neg(&self, a: FieldElem) -> FieldElem {
        let (mut x, mut out, mut place) = (a.0, 0, 1);
        for _ in 0..self.e {
            out += ((self.p - x % self.p) % self.p) * place;
            x /= self.p;
            place *= self.p;
        }
        FieldElem(out)
    }

    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if a.0 == 0 || b.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = self.q - 1;
        let k = (self.log[a.0 as usize] + self.log[b.0 as usize]) % n;
        FieldElem(self.exp[k as usize])
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(FieldElem(self.exp[((n - self.log[a.0 as usize]) % n) as usize]))
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElem, k: u64) -> FieldElem {
        if k == 0 {
            return FieldElem::ONE;
        }
        if a.0 == 0 {
            return FieldElem::ZERO;
        }
        let n = (self.q - 1) as u64;
        FieldElem(self.exp[((self.log[a.0 as usize] as u64 * (k % n)) % n) as usize])
    }

    /// Discrete logarithm to the base of [`FieldSpec::generator`].
    pub fn log(&self, a: FieldElem) -> Option<u32> {
        (a.0 != 0).then(|| self.log[a.0 as usize])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: FieldElem) -> Option<u32> {
        let l = self.log(a)?;
        let n = self.q - 1;
        Some(n / gcd(n, l))
    }

    /// `a^(p^l)`; the exponent is taken modulo `e`.
    pub fn frobenius(&self, a: FieldElem, l: u32) -> FieldElem {
        let l = l % self.e;
        self.pow(a, (self.p as u64).pow(l))
    }

    pub fn is_square(&self, a: FieldElem) -> bool {
        self.square[a.0 as usize]
    }

    /// True iff the field has a subfield of index 2.
    pub fn has_half_subfield(&self) -> bool {
        self.e.is_multiple_of(2)
    }

    /// Order of the index-2 subfield.
    pub fn half_order(&self) -> Result<u32> {
        if !self.has_half_subfield() {
            return Err(Error::NotSquareOrder(self.q));
        }
        Ok(self.p.pow(self.e / 2))
    }

    /// The involutory automorphism `a -> a^sqrt(q)` fixing the index-2 subfield.
    pub fn bar(&self, a: FieldElem) -> Result<FieldElem> {
        if !self.has_half_subfield() {
            return Err(Error::NotSquareOrder(self.q));
        }
        Ok(self.frobenius(a, self.e / 2))
    }

    pub fn in_subfield(&self, a: FieldElem) -> Result<bool> {
        Ok(self.bar(a)? == a)
    }

    /// `a * bar(a)`, which lies in the index-2 subfield.
    pub fn norm(&self, a: FieldElem) -> Result<FieldElem> {
        Ok(self.mul(a, self.bar(a)?))
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Checks by brute force that every `x` in GF(q^2)^x whose norm
/// `x * bar(x)` is a nonzero square `c^2` of the subfield is itself a square.
pub fn lemma_fqqq_check(field: &FieldSpec) -> Result<bool> {
    let sub: Vec<FieldElem> = field
        .nonzero()
        .filter(|&c| field.in_subfield(c).unwrap_or(false))
        .collect();
    if !field.has_half_subfield() {
        return Err(Error::NotSquareOrder(field.order()));
    }
    for x in field.nonzero() {
        let n = field.norm(x)?;
        for &c in &sub {
            if field.mul(c, c) == n && !field.is_square(x) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
