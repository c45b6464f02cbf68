//! Bivariate polynomials in y, w over Q(ζ_N), with exact division and gcd.

use std::collections::BTreeMap;

use crate::field::{Field, Rational};

use super::cyclo::CycloNumber;

/// Sparse bivariate polynomial; keys are `(deg_y, deg_w)`, no zero coefficients
/// are stored. Terms are ordered lexicographically with y first, and the
/// largest key is the leading term.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BiPoly {
    index: u64,
    terms: BTreeMap<(u32, u32), CycloNumber>,
}

type UPoly = Vec<CycloNumber>;

impl BiPoly {
    pub fn zero(index: u64) -> Self {
        BiPoly { index, terms: BTreeMap::new() }
    }

    pub fn constant(c: CycloNumber) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn one(index: u64) -> Self {
        Self::constant(CycloNumber::one(index))
    }

    pub fn monomial(dy: u32, dw: u32, c: CycloNumber) -> Self {
        let index = c.index();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((dy, dw), c);
        }
        BiPoly { index, terms }
    }

    pub fn y(index: u64) -> Self {
        Self::monomial(1, 0, CycloNumber::one(index))
    }

    pub fn w(index: u64) -> Self {
        Self::monomial(0, 1, CycloNumber::one(index))
    }

    pub fn from_terms(index: u64, terms: impl IntoIterator<Item = ((u32, u32), CycloNumber)>) -> Self {
        let mut out = Self::zero(index);
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    pub fn index(&self) -> u64 {
        self.index
    }

    pub fn terms(&self) -> &BTreeMap<(u32, u32), CycloNumber> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&k| k == (0, 0))
    }

    pub fn constant_term(&self) -> CycloNumber {
        self.terms.get(&(0, 0)).cloned().unwrap_or_else(|| CycloNumber::zero(self.index))
    }

    pub fn leading(&self) -> Option<(&(u32, u32), &CycloNumber)> {
        self.terms.iter().next_back()
    }

    pub fn deg_y(&self) -> u32 {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    pub fn deg_w(&self) -> u32 {
        self.terms.keys().map(|k| k.1).max().unwrap_or(0)
    }

    fn add_term(&mut self, k: (u32, u32), c: &CycloNumber) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&k) {
            Some(v) => {
                *v = v.add(c);
                if v.is_zero() {
                    self.terms.remove(&k);
                }
            }
            None => {
                self.terms.insert(k, c.clone());
            }
        }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.index, rhs.index, "cyclotomic index mismatch");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(*k, c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiPoly { index: self.index, terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.index, rhs.index, "cyclotomic index mismatch");
        let mut out = Self::zero(self.index);
        for (ka, a) in &self.terms {
            for (kb, b) in &rhs.terms {
                out.add_term((ka.0 + kb.0, ka.1 + kb.1), &a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, c: &CycloNumber) -> Self {
        if c.is_zero() {
            return Self::zero(self.index);
        }
        BiPoly { index: self.index, terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect() }
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.scale(&CycloNumber::from_rational(self.index, q.clone()))
    }

    /// Re-expresses all coefficients in Q(ζ_M).
    pub fn embed(&self, m: u64) -> crate::Result<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(*k, c.embed(m)?);
        }
        Ok(BiPoly { index: m, terms })
    }

    pub fn restrict(&self, n: u64) -> Option<Self> {
        let mut terms = BTreeMap::new();
        for (k, c) in &self.terms {
            terms.insert(*k, c.restrict(n)?);
        }
        Some(BiPoly { index: n, terms })
    }

    /// Substitutes y ← ζ_N^e · y.
    pub fn twist_y(&self, e: i64) -> Self {
        BiPoly {
            index: self.index,
            terms: self.terms.iter().map(|(k, c)| (*k, c.mul_root_power(e * k.0 as i64))).collect(),
        }
    }

    /// Evaluates at y = y0, w = w0 in Q(ζ_N).
    pub fn eval(&self, y0: &CycloNumber, w0: &CycloNumber) -> CycloNumber {
        let mut acc = CycloNumber::zero(self.index);
        for ((dy, dw), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..*dy {
                t = t.mul(y0);
            }
            for _ in 0..*dw {
                t = t.mul(w0);
            }
            acc = acc.add(&t);
        }
        acc
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some((_, c)) => self.scale(&c.inv().expect("nonzero")),
            None => self.clone(),
        }
    }

    /// Exact quotient `self / rhs`, or `None` when `rhs` does not divide `self`.
    pub fn exact_div(&self, rhs: &Self) -> Option<Self> {
        let (&(gy, gw), gc) = rhs.leading()?;
        let ginv = gc.inv().unwrap();
        let mut rem = self.clone();
        let mut quot = Self::zero(self.index);
        while let Some((&(ry, rw), rc)) = rem.leading() {
            if ry < gy || rw < gw {
                return None;
            }
            let t = Self::monomial(ry - gy, rw - gw, rc.mul(&ginv));
            rem = rem.sub(&t.mul(rhs));
            quot = quot.add(&t);
        }
        Some(quot)
    }

    fn to_ycoeffs(&self) -> Vec<UPoly> {
        let mut out: Vec<UPoly> = vec![Vec::new(); self.deg_y() as usize + 1];
        for ((dy, dw), c) in &self.terms {
            let u = &mut out[*dy as usize];
            if u.len() <= *dw as usize {
                u.resize(*dw as usize + 1, CycloNumber::zero(self.index));
            }
            u[*dw as usize] = c.clone();
        }
        out
    }

    fn from_ycoeffs(index: u64, ys: &[UPoly]) -> Self {
        let mut out = Self::zero(index);
        for (dy, u) in ys.iter().enumerate() {
            for (dw, c) in u.iter().enumerate() {
                out.add_term((dy as u32, dw as u32), c);
            }
        }
        out
    }

    /// Greatest common divisor in Q(ζ_N)[y, w], monic under the term order;
    /// `gcd(0, 0) = 0`.
    pub fn gcd(&self, rhs: &Self) -> Self {
        assert_eq!(self.index, rhs.index, "cyclotomic index mismatch");
        if self.is_zero() {
            return rhs.monic();
        }
        if rhs.is_zero() {
            return self.monic();
        }
        if self.is_constant() || rhs.is_constant() {
            return Self::one(self.index);
        }
        let index = self.index;
        let mut a = self.to_ycoeffs();
        let mut b = rhs.to_ycoeffs();
        let ca = content(&a);
        let cb = content(&b);
        let c = u_gcd(&ca, &cb);
        let lift = |g: &[UPoly]| Self::from_ycoeffs(index, &g.iter().map(|u| u_mul(u, &c)).collect::<Vec<_>>()).monic();
        if a.len() == 1 || b.len() == 1 {
            return lift(&[vec![CycloNumber::one(index)]]);
        }
        a = a.iter().map(|u| u_exact_div(u, &ca)).collect();
        b = b.iter().map(|u| u_exact_div(u, &cb)).collect();
        lift(&interpolated_gcd(index, &a, &b))
    }
}

/// Gcd of two primitive polynomials in y over Q(ζ_N)[w]: univariate gcds at
/// integer points w0, scaled by the gcd of the leading coefficients,
/// interpolated in w and checked by exact division.
fn interpolated_gcd(index: u64, a: &[UPoly], b: &[UPoly]) -> Vec<UPoly> {
    let z = CycloNumber::zero(index);
    let (la, lb) = (a.last().unwrap(), b.last().unwrap());
    let gamma = u_gcd(la, lb);
    let bound = gamma.len() + a.iter().chain(b.iter()).map(Vec::len).max().unwrap_or(1);
    let (pa, pb) = (BiPoly::from_ycoeffs(index, a), BiPoly::from_ycoeffs(index, b));
    let mut best: Option<usize> = None;
    let mut xs: Vec<CycloNumber> = Vec::new();
    let mut images: Vec<UPoly> = Vec::new();
    for k in 1..=(8 * bound as i64 + 64) {
        let x = z.from_int(if k % 2 == 1 { (k + 1) / 2 } else { -k / 2 });
        if u_eval(la, &x).is_zero() || u_eval(lb, &x).is_zero() {
            continue;
        }
        let sa: UPoly = a.iter().map(|u| u_eval(u, &x)).collect();
        let sb: UPoly = b.iter().map(|u| u_eval(u, &x)).collect();
        let g = u_gcd(&sa, &sb);
        if g.len() == 1 {
            return vec![vec![CycloNumber::one(index)]];
        }
        match best {
            Some(d) if g.len() > d => continue,
            Some(d) if g.len() == d => {}
            _ => {
                best = Some(g.len());
                xs.clear();
                images.clear();
            }
        }
        let gx = u_eval(&gamma, &x);
        images.push(g.iter().map(|c| c.mul(&gx)).collect());
        xs.push(x);
        if xs.len() >= bound {
            let cand: Vec<UPoly> = (0..best.unwrap())
                .map(|i| interpolate(&xs, &images.iter().map(|im| im[i].clone()).collect::<Vec<_>>()))
                .collect();
            let cand = primitive(&cand);
            let gp = BiPoly::from_ycoeffs(index, &cand);
            if pa.exact_div(&gp).is_some() && pb.exact_div(&gp).is_some() {
                return cand;
            }
        }
    }
    unreachable!("finitely many specializations are unlucky")
}

/// Newton interpolation through `(xs[i], ys[i])`.
fn interpolate(xs: &[CycloNumber], ys: &[CycloNumber]) -> UPoly {
    let n = xs.len();
    let mut c = ys.to_vec();
    for j in 1..n {
        for i in (j..n).rev() {
            c[i] = c[i].sub(&c[i - 1]).div(&xs[i].sub(&xs[i - j])).expect("distinct nodes");
        }
    }
    let one = xs[0].one_like();
    let mut p: UPoly = vec![c[n - 1].clone()];
    for i in (0..n - 1).rev() {
        p = u_mul(&p, &vec![xs[i].neg(), one.clone()]);
        if p.is_empty() {
            p.push(c[i].clone());
        } else {
            p[0] = p[0].add(&c[i]);
        }
        u_trim(&mut p);
    }
    p
}

fn u_eval(a: &UPoly, x: &CycloNumber) -> CycloNumber {
    a.iter().rev().fold(x.zero_like(), |acc, c| acc.mul(x).add(c))
}

fn u_trim(p: &mut UPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn u_is_zero(p: &UPoly) -> bool {
    p.iter().all(|c| c.is_zero())
}

fn u_mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let z = a[0].zero_like();
    let mut out = vec![z; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].add(&x.mul(y));
        }
    }
    u_trim(&mut out);
    out
}

fn u_divrem(a: &UPoly, b: &UPoly) -> (UPoly, UPoly) {
    let mut r = a.clone();
    u_trim(&mut r);
    let mut b = b.clone();
    u_trim(&mut b);
    let db = b.len() - 1;
    let linv = b[db].inv().unwrap();
    if r.len() < b.len() {
        return (vec![], r);
    }
    let mut q = vec![b[0].zero_like(); r.len() - db];
    while r.len() >= b.len() {
        let k = r.len() - 1 - db;
        let c = r.last().unwrap().mul(&linv);
        for (i, bc) in b.iter().enumerate() {
            r[k + i] = r[k + i].sub(&c.mul(bc));
        }
        q[k] = c;
        r.pop();
        u_trim(&mut r);
    }
    u_trim(&mut q);
    (q, r)
}

fn u_exact_div(a: &UPoly, b: &UPoly) -> UPoly {
    let (q, r) = u_divrem(a, b);
    debug_assert!(u_is_zero(&r));
    q
}

fn u_monic(a: &UPoly) -> UPoly {
    let mut a = a.clone();
    u_trim(&mut a);
    match a.last() {
        Some(l) => {
            let inv = l.inv().unwrap();
            a.iter().map(|c| c.mul(&inv)).collect()
        }
        None => a,
    }
}

fn u_gcd(a: &UPoly, b: &UPoly) -> UPoly {
    let mut a = a.clone();
    let mut b = b.clone();
    u_trim(&mut a);
    u_trim(&mut b);
    while !b.is_empty() {
        let (_, r) = u_divrem(&a, &b);
        a = b;
        b = r;
    }
    u_monic(&a)
}

fn content(p: &[UPoly]) -> UPoly {
    let mut order: Vec<&UPoly> = p.iter().filter(|u| !u_is_zero(u)).collect();
    order.sort_by_key(|u| u.len());
    let mut g: UPoly = vec![];
    for u in order {
        if !u_is_zero(u) {
            g = u_gcd(&g, u);
            if g.len() == 1 {
                break;
            }
        }
    }
    g
}

fn primitive(p: &[UPoly]) -> Vec<UPoly> {
    let c = content(p);
    let mut out: Vec<UPoly> = p.iter().map(|u| if u_is_zero(u) { vec![] } else { u_exact_div(u, &c) }).collect();
    while out.len() > 1 && u_is_zero(out.last().unwrap()) {
        out.pop();
    }
    // also strip the scalar factor, or pseudo-remainders grow exponentially
    if let Some(lc) = out.last().and_then(|u| u.iter().rev().find(|c| !c.is_zero())).and_then(|c| c.inv()) {
        for u in out.iter_mut() {
            for c in u.iter_mut() {
                *c = c.mul(&lc);
            }
        }
    }
    out
}
