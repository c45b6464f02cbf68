//! Elements of the cyclotomic field Q(ζ_N), stored in the power basis
//! 1, u, …, u^{φ(N)−1} and reduced eagerly modulo Φ_N.

use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;



use crate::error::{Error, Result};
use crate::field::{qone, qzero, Field, Rational};

thread_local! {
    static PHI_CACHE: RefCell<HashMap<u64, Rc<Vec<i64>>>> = RefCell::new(HashMap::new());
}

/// Integer coefficients of the N-th cyclotomic polynomial, lowest degree first.
pub fn cyclotomic_poly(n: u64) -> Rc<Vec<i64>> {
    assert!(n >= 1, "cyclotomic index must be positive");
    if let Some(p) = PHI_CACHE.with(|c| c.borrow().get(&n).cloned()) {
        return p;
    }
    // (x^n - 1) / prod_{d | n, d < n} Φ_d
    let mut num: Vec<i128> = vec![0; n as usize + 1];
    num[0] = -1;
    num[n as usize] = 1;
    for d in 1..n {
        if n.is_multiple_of(d) {
            let den: Vec<i128> = cyclotomic_poly(d).iter().map(|&c| c as i128).collect();
            num = int_exact_div(&num, &den);
        }
    }
    let out: Rc<Vec<i64>> = Rc::new(num.into_iter().map(|c| c as i64).collect());
    PHI_CACHE.with(|c| c.borrow_mut().insert(n, out.clone()));
    out
}

fn int_exact_div(num: &[i128], den: &[i128]) -> Vec<i128> {
    // den is monic
    let mut rem = num.to_vec();
    let dd = den.len() - 1;
    let qn = rem.len() - 1 - dd;
    let mut q = vec![0i128; qn + 1];
    for k in (0..=qn).rev() {
        let c = rem[k + dd];
        q[k] = c;
        for (i, &dc) in den.iter().enumerate() {
            rem[k + i] -= c * dc;
        }
    }
    debug_assert!(rem.iter().all(|&c| c == 0));
    q
}

/// Euler's totient.
pub fn totient(n: u64) -> usize {
    cyclotomic_poly(n).len() - 1
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num_integer::Integer::gcd(&a, &b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    num_integer::Integer::lcm(&a, &b)
}

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CycloNumber {
    index: u64,
    coeffs: Vec<Rational>,
}

impl CycloNumber {
    /// Builds `Σ coeffs[i]·ζ_N^i` for a coefficient list of any length.
    pub fn new(index: u64, coeffs: Vec<Rational>) -> Self {
        let mut out = CycloNumber { index, coeffs };
        out.reduce();
        out
    }

    pub fn zero(index: u64) -> Self {
        CycloNumber { index, coeffs: vec![qzero(); totient(index)] }
    }

    pub fn from_rational(index: u64, q: Rational) -> Self {
        let mut out = Self::zero(index);
        out.coeffs[0] = q;
        out
    }

    pub fn one(index: u64) -> Self {
        Self::from_rational(index, qone())
    }

    /// ζ_N^k for any integer k.
    pub fn root_power(index: u64, k: i64) -> Self {
        let e = k.rem_euclid(index as i64) as usize;
        let mut c = vec![qzero(); e + 1];
        c[e] = qone();
        Self::new(index, c)
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    fn reduce(&mut self) {
        let phi = cyclotomic_poly(self.index);
        let deg = phi.len() - 1;
        let n = self.index as usize;
        // fold with u^N = 1 first, then reduce modulo Φ_N
        if self.coeffs.len() > n {
            let extra: Vec<Rational> = self.coeffs.drain(n..).collect();
            for (i, c) in extra.into_iter().enumerate() {
                let t = &self.coeffs[i % n] + c;
                self.coeffs[i % n] = t;
            }
        }
        while self.coeffs.len() > deg {
            let top = self.coeffs.pop().unwrap();
            if top.is_zero() {
                continue;
            }
            let shift = self.coeffs.len() - deg;
            for (i, &pc) in phi.iter().take(deg).enumerate() {
                if pc != 0 {
                    let t = &self.coeffs[shift + i] - &top * Rational::from_integer(pc.into());
                    self.coeffs[shift + i] = t;
                }
            }
        }
        self.coeffs.resize(deg, qzero());
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.index, other.index, "cyclotomic index mismatch");
    }

    pub fn is_rational(&self) -> bool {
        self.coeffs.iter().skip(1).all(|c| c.is_zero())
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        if self.is_rational() {
            self.coeffs.first()
        } else {
            None
        }
    }

    pub fn scale(&self, q: &Rational) -> Self {
        CycloNumber { index: self.index, coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    /// Multiplies by ζ_N^k.
    pub fn mul_root_power(&self, k: i64) -> Self {
        let n = self.index as i64;
        let e = k.rem_euclid(n) as usize;
        let mut c = vec![qzero(); self.coeffs.len() + e];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i + e] = x.clone();
        }
        Self::new(self.index, c)
    }

    /// Re-expresses the element in Q(ζ_M) using ζ_N = ζ_M^{M/N}.
    pub fn embed(&self, m: u64) -> Result<Self> {
        if m == 0 || !m.is_multiple_of(self.index) {
            return Err(Error::BadEmbedding { from: self.index, to: m });
        }
        let step = (m / self.index) as usize;
        let mut c = vec![qzero(); (self.coeffs.len().max(1) - 1) * step + 1];
        for (i, x) in self.coeffs.iter().enumerate() {
            c[i * step] = x.clone();
        }
        Ok(Self::new(m, c))
    }

    /// Inverse of [`embed`](Self::embed): recovers the element of Q(ζ_N),
    /// `N | index`, if the value lies in that subfield.
    pub fn restrict(&self, n: u64) -> Option<Self> {
        if n == 0 || !self.index.is_multiple_of(n) {
            return None;
        }
        if n == self.index {
            return Some(self.clone());
        }
        let phi_n = totient(n);
        let phi_m = self.coeffs.len();
        // columns: images of u^i, i < φ(n)
        let cols: Vec<CycloNumber> = (0..phi_n)
            .map(|i| CycloNumber::root_power(n, i as i64).embed(self.index).unwrap())
            .collect();
        let mut a: Vec<Vec<Rational>> = (0..phi_m)
            .map(|r| {
                let mut row: Vec<Rational> = cols.iter().map(|c| c.coeffs[r].clone()).collect();
                row.push(self.coeffs[r].clone());
                row
            })
            .collect();
        let sol = solve_dense(&mut a, phi_n)?;
        Some(CycloNumber { index: n, coeffs: sol })
    }

    /// The smallest index `n | self.index` whose field contains the element.
    pub fn minimal_index(&self) -> u64 {
        let m = self.index;
        let mut best = m;
        for n in 1..=m {
            if m.is_multiple_of(n) && n < best && self.restrict(n).is_some() {
                best = n;
                break;
            }
        }
        best
    }
}

/// Gauss-Jordan on an augmented rational system with `nvars` unknowns.
fn solve_dense(a: &mut [Vec<Rational>], nvars: usize) -> Option<Vec<Rational>> {
    let rows = a.len();
    let mut piv_cols = Vec::new();
    let mut r = 0;
    for c in 0..nvars {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in 0..=nvars {
                    let t = &a[i][j] - &f * &a[r][j];
                    a[i][j] = t;
                }
            }
        }
        piv_cols.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| !row[nvars].is_zero()) {
        return None;
    }
    let mut sol = vec![qzero(); nvars];
    for (i, &c) in piv_cols.iter().enumerate() {
        sol[c] = a[i][nvars].clone();
    }
    Some(sol)
}

// dense univariate helpers over Q for the inverse
fn trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn poly_divrem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let lb = b[db].recip();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![qzero(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap() * &lb;
        for (i, bc) in b.iter().enumerate() {
            let t = &r[k + i] - &c * bc;
            r[k + i] = t;
        }
        q[k] = c;
        r.pop();
        trim(&mut r);
    }
    (q, r)
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![qzero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let t = &out[i + j] + x * y;
            out[i + j] = t;
        }
    }
    out
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    let mut out: Vec<Rational> = (0..n)
        .map(|i| {
            let x = a.get(i).cloned().unwrap_or_else(qzero);
            let y = b.get(i).cloned().unwrap_or_else(qzero);
            x - y
        })
        .collect();
    trim(&mut out);
    out
}

impl Field for CycloNumber {
    fn zero_like(&self) -> Self {
        Self::zero(self.index)
    }
    fn one_like(&self) -> Self {
        Self::one(self.index)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
    fn add(&self, rhs: &Self) -> Self {
        self.check(rhs);
        CycloNumber {
            index: self.index,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.check(rhs);
        CycloNumber {
            index: self.index,
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.check(rhs);
        if self.coeffs.len() == 1 {
            return CycloNumber { index: self.index, coeffs: vec![&self.coeffs[0] * &rhs.coeffs[0]] };
        }
        if let Some(q) = self.as_rational() {
            return rhs.scale(q);
        }
        if let Some(q) = rhs.as_rational() {
            return self.scale(q);
        }
        Self::new(self.index, poly_mul(&self.coeffs, &rhs.coeffs))
    }
    fn neg(&self) -> Self {
        CycloNumber { index: self.index, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
    fn inv(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        if let Some(q) = self.as_rational() {
            return Some(Self::from_rational(self.index, q.recip()));
        }
        // extended Euclid: s·a + t·Φ = g (a nonzero constant)
        let phi: Vec<Rational> =
            cyclotomic_poly(self.index).iter().map(|&c| Rational::from_integer(c.into())).collect();
        let mut r0 = phi;
        let mut r1 = self.coeffs.clone();
        trim(&mut r1);
        let mut s0: Vec<Rational> = vec![];
        let mut s1: Vec<Rational> = vec![qone()];
        while r1.len() > 1 {
            let (q, r) = poly_divrem(&r0, &r1);
            let s2 = poly_sub(&s0, &poly_mul(&q, &s1));
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant since Φ_N is irreducible
        let c = r1[0].recip();
        let coeffs = s1.iter().map(|x| x * &c).collect();
        Some(Self::new(self.index, coeffs))
    }
    fn from_rational(&self, q: &Rational) -> Self {
        Self::from_rational(self.index, q.clone())
    }
}
