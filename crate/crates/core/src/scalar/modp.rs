//! Word-sized prime fields and homomorphic images of the scalar tower.
//!
//! An [`Image`] maps Q(ζ_M)[y, w] (and fractions whose denominators survive)
//! into F_p with p ≡ 1 (mod M), sending ζ_M to a primitive M-th root of unity
//! and y, w to fixed residues. A nonzero image certifies a nonzero preimage;
//! rank computed in the image is a lower bound on the exact rank.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::field::{Field, Rational};

use super::bipoly::BiPoly;
use super::cyclo::CycloNumber;
use super::fscalar::FieldScalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Fp {
    pub v: u64,
    pub p: u64,
}

#[inline]
pub fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub fn powmod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

impl Fp {
    pub fn new(v: u64, p: u64) -> Self {
        Fp { v: v % p, p }
    }
}

impl Field for Fp {
    fn zero_like(&self) -> Self {
        Fp { v: 0, p: self.p }
    }
    fn one_like(&self) -> Self {
        Fp { v: 1, p: self.p }
    }
    fn is_zero(&self) -> bool {
        self.v == 0
    }
    fn add(&self, rhs: &Self) -> Self {
        let s = self.v + rhs.v;
        Fp { v: if s >= self.p { s - self.p } else { s }, p: self.p }
    }
    fn sub(&self, rhs: &Self) -> Self {
        Fp { v: if self.v >= rhs.v { self.v - rhs.v } else { self.v + self.p - rhs.v }, p: self.p }
    }
    fn mul(&self, rhs: &Self) -> Self {
        Fp { v: mulmod(self.v, rhs.v, self.p), p: self.p }
    }
    fn neg(&self) -> Self {
        Fp { v: if self.v == 0 { 0 } else { self.p - self.v }, p: self.p }
    }
    fn inv(&self) -> Option<Self> {
        if self.v == 0 {
            None
        } else {
            Some(Fp { v: powmod(self.v, self.p - 2, self.p), p: self.p })
        }
    }
    fn from_rational(&self, q: &Rational) -> Self {
        Fp { v: rational_mod(q, self.p).expect("denominator divisible by the modulus"), p: self.p }
    }
}

fn bigint_mod(x: &BigInt, p: u64) -> u64 {
    let r = (x.abs() % BigInt::from(p)).to_u64().unwrap();
    if x.is_negative() && r != 0 {
        p - r
    } else {
        r
    }
}

/// q mod p, or `None` if p divides the denominator.
pub fn rational_mod(q: &Rational, p: u64) -> Option<u64> {
    let n = bigint_mod(q.numer(), p);
    let d = bigint_mod(q.denom(), p);
    if d == 0 {
        return None;
    }
    Some(mulmod(n, powmod(d, p - 2, p), p))
}

/// A ring homomorphism Q(ζ_M)[y, w] → F_p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Image {
    pub p: u64,
    pub m: u64,
    /// image of ζ_M
    pub root: u64,
    pub y: u64,
    pub w: u64,
}

impl Image {
    /// The `attempt`-th image for cyclotomic index `m`; deterministic.
    pub fn nth(m: u64, attempt: u64) -> Image {
        let top = (1u64 << 62) / m;
        let mut k = top - attempt * 7919;
        let p = loop {
            let cand = k * m + 1;
            if is_prime_u64(cand) {
                break cand;
            }
            k -= 1;
        };
        let root = primitive_root_of_order(m, p);
        let mut rng = ChaCha8Rng::seed_from_u64(0x6e63_7261_6e6b ^ (m << 20) ^ attempt);
        let y = rng.gen_range(2..p - 1);
        let w = rng.gen_range(2..p - 1);
        Image { p, m, root, y, w }
    }

    pub fn fp(&self, v: u64) -> Fp {
        Fp::new(v, self.p)
    }

    pub fn zero(&self) -> Fp {
        self.fp(0)
    }

    pub fn one(&self) -> Fp {
        self.fp(1)
    }

    pub fn rational(&self, q: &Rational) -> Option<Fp> {
        rational_mod(q, self.p).map(|v| self.fp(v))
    }

    /// Image of ζ_N^k for N | M.
    pub fn root_power(&self, n: u64, k: i64) -> Fp {
        assert!(self.m.is_multiple_of(n), "index {n} does not divide {}", self.m);
        let e = (k.rem_euclid(n as i64) as u64) * (self.m / n);
        self.fp(powmod(self.root, e, self.p))
    }

    pub fn cyclo(&self, c: &CycloNumber) -> Option<Fp> {
        let z = self.root_power(c.index(), 1);
        let mut acc = self.zero();
        let mut pw = self.one();
        for q in c.coeffs() {
            acc = acc.add(&self.rational(q)?.mul(&pw));
            pw = pw.mul(&z);
        }
        Some(acc)
    }

    pub fn poly(&self, f: &BiPoly) -> Option<Fp> {
        let mut acc = self.zero();
        for ((dy, dw), c) in f.terms() {
            let t = self
                .cyclo(c)?
                .mul(&self.fp(powmod(self.y, *dy as u64, self.p)))
                .mul(&self.fp(powmod(self.w, *dw as u64, self.p)));
            acc = acc.add(&t);
        }
        Some(acc)
    }

    pub fn scalar(&self, a: &FieldScalar) -> Option<Fp> {
        let d = self.poly(a.den())?;
        self.poly(a.num())?.div(&d)
    }
}

/// An element of exact multiplicative order m in F_p, p ≡ 1 (mod m).
pub fn primitive_root_of_order(m: u64, p: u64) -> u64 {
    assert_eq!((p - 1) % m, 0);
    let qs = prime_factors(m);
    for g in 2..p {
        let h = powmod(g, (p - 1) / m, p);
        if qs.iter().all(|&q| powmod(h, m / q, p) != 1) {
            return h;
        }
    }
    unreachable!("F_p^* is cyclic")
}
