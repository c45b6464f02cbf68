//! The cyclic division algebra of index ℓ over F = Q(ζ_ℓ)(y^ℓ, w), realized
//! inside ℓ×ℓ matrices over K = Q(ζ_ℓ)(y, w).
//!
//! The generator x acts as `X = cir(1, …, 1, w)` and K embeds diagonally as
//! `M(b) = diag(b, σ(b), …, σ^{ℓ-1}(b))` with σ: y ↦ ζ_ℓ·y. The matrices
//! `C_ij = M(y^{j-1})·X^{i-1}` form a K-basis of all ℓ×ℓ matrices.

use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::{inverse, rank, Mat};
use crate::scalar::{lcm_u64, BiPoly, CycloNumber, FieldScalar, Fp, Image};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DivAlgebra {
    ell: usize,
}

/// Result of block elimination: the rank over the algebra and the pivot block
/// rows and columns (0-based), whose block submatrix is invertible.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DRank {
    pub r: usize,
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl DivAlgebra {
    pub fn new(ell: usize) -> Self {
        assert!(ell >= 1, "index must be positive");
        DivAlgebra { ell }
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Cyclotomic index of the base field, N = ℓ.
    pub fn cyclo_index(&self) -> u64 {
        self.ell as u64
    }

    pub fn omega(&self) -> CycloNumber {
        CycloNumber::root_power(self.cyclo_index(), 1)
    }

    fn zero(&self) -> FieldScalar {
        FieldScalar::zero(self.cyclo_index())
    }

    pub fn rep_x(&self) -> Mat<FieldScalar> {
        let n = self.cyclo_index();
        let l = self.ell;
        Mat::from_fn(l, l, &self.zero(), |a, b| {
            if b == (a + 1) % l {
                if a + 1 == l {
                    FieldScalar::w(n)
                } else {
                    FieldScalar::one(n)
                }
            } else {
                FieldScalar::zero(n)
            }
        })
    }

    /// `diag(b, σ(b), …, σ^{ℓ-1}(b))`; `b` is first embedded into a field
    /// containing ζ_ℓ.
    pub fn rep_diag(&self, b: &FieldScalar) -> Mat<FieldScalar> {
        let m = lcm_u64(b.index(), self.cyclo_index());
        let b = b.embed(m).expect("lcm is a multiple");
        let z = FieldScalar::zero(m);
        let diag: Vec<FieldScalar> = (0..self.ell).map(|a| b.galois_shift(a as i64, self.ell as u64)).collect();
        Mat::from_fn(self.ell, self.ell, &z, |i, j| if i == j { diag[i].clone() } else { z.clone() })
    }

    /// Entry of `C_{m+1, j+1}` at `(a, (a+m) mod ℓ)`, the only nonzero entry in
    /// row `a`: `(ζ^a·y)^j`, times w when the circulant wraps.
    pub fn basis_entry(&self, m: usize, j: usize, a: usize) -> FieldScalar {
        let n = self.cyclo_index();
        let c = CycloNumber::root_power(n, (a * j) as i64);
        let dw = u32::from(a + m >= self.ell);
        FieldScalar::from_poly(BiPoly::monomial(j as u32, dw, c))
    }

    /// `C_ij` for 1-based `i, j`.
    pub fn basis_matrix(&self, i: usize, j: usize) -> Mat<FieldScalar> {
        assert!((1..=self.ell).contains(&i) && (1..=self.ell).contains(&j));
        let (m, jj) = (i - 1, j - 1);
        let mut out = Mat::zeros(self.ell, self.ell, &self.zero());
        for a in 0..self.ell {
            out.set(a, (a + m) % self.ell, self.basis_entry(m, jj, a));
        }
        out
    }

    /// Coefficients λ with `A = Σ λ_ij C_ij`, in the order (i, j)
    /// lexicographic, over any field given the images of ζ_ℓ, y and w.
    pub fn express_with<F: Field>(&self, a: &Mat<F>, omega: &F, y: &F, w: &F) -> Result<Vec<F>> {
        let l = self.ell;
        if a.rows() != l || a.cols() != l {
            return Err(Error::Shape(format!("expected a {l}x{l} matrix")));
        }
        let z = a.zero_elem().zero_like();
        let inv_l = z.from_int(l as i64).inv().ok_or(Error::DivisionByZero)?;
        let inv_w = w.inv().ok_or(Error::DivisionByZero)?;
        let inv_y = y.inv().ok_or(Error::DivisionByZero)?;
        let inv_om = omega.inv().ok_or(Error::DivisionByZero)?;
        let om_pows: Vec<F> = pow_table(&inv_om, l);
        let iy_pows: Vec<F> = pow_table(&inv_y, l);
        let mut out = vec![z.clone(); l * l];
        for m in 0..l {
            let col: Vec<F> = (0..l)
                .map(|r| {
                    let v = a.get(r, (r + m) % l);
                    if r + m >= l {
                        v.mul(&inv_w)
                    } else {
                        v.clone()
                    }
                })
                .collect();
            for j in 0..l {
                let mut acc = z.clone();
                for (aa, v) in col.iter().enumerate() {
                    if !v.is_zero() {
                        acc = acc.add(&v.mul(&om_pows[(aa * j) % l]));
                    }
                }
                out[m * l + j] = acc.mul(&inv_l).mul(&iy_pows[j]);
            }
        }
        Ok(out)
    }

    /// [`express_with`](Self::express_with) over K, embedding into the
    /// compositum with Q(ζ_ℓ) when needed.
    pub fn express_in_basis(&self, a: &Mat<FieldScalar>) -> Result<Vec<FieldScalar>> {
        let m = lcm_u64(a.zero_elem().index(), self.cyclo_index());
        let z = FieldScalar::zero(m);
        let a = a.try_map(&z, |x| x.embed(m).ok()).ok_or(Error::BadEmbedding { from: a.zero_elem().index(), to: m })?;
        let omega = FieldScalar::from_cyclo(CycloNumber::root_power(m, (m / self.cyclo_index()) as i64));
        self.express_with(&a, &omega, &FieldScalar::y(m), &FieldScalar::w(m))
    }

    /// The same coordinates in a modular image whose root order is a multiple
    /// of ℓ.
    pub fn express_in_image(&self, a: &Mat<Fp>, img: &Image) -> Result<Vec<Fp>> {
        let omega = img.root_power(self.cyclo_index(), 1);
        self.express_with(a, &omega, &img.fp(img.y), &img.fp(img.w))
    }

    /// `Σ μ_ij C_ij` for rational μ in (i, j) lexicographic order, as an exact
    /// matrix over Q(ζ_ℓ)[y, w].
    pub fn combination(&self, mu: &[Rational]) -> Mat<FieldScalar> {
        let l = self.ell;
        assert_eq!(mu.len(), l * l);
        let n = self.cyclo_index();
        let mut out = Mat::zeros(l, l, &self.zero());
        for m in 0..l {
            for a in 0..l {
                let mut terms = Vec::new();
                for j in 0..l {
                    let q = &mu[m * l + j];
                    if *q.numer() != 0.into() {
                        let c = CycloNumber::root_power(n, (a * j) as i64).scale(q);
                        terms.push(((j as u32, u32::from(a + m >= l)), c));
                    }
                }
                if !terms.is_empty() {
                    out.set(a, (a + m) % l, FieldScalar::from_poly(BiPoly::from_terms(n, terms)));
                }
            }
        }
        out
    }

    /// Whether `a` represents an element of the algebra: its coordinates are
    /// fixed by σ, i.e. lie in F.
    pub fn contains(&self, a: &Mat<FieldScalar>) -> Result<bool> {
        let lam = self.express_in_basis(a)?;
        Ok(lam.iter().all(|x| x.galois_shift(1, self.ell as u64) == *x))
    }

    /// Rank over the algebra of an `sℓ×sℓ` matrix of algebra elements, with
    /// every block checked for membership.
    pub fn d_rank(&self, t: &Mat<FieldScalar>) -> Result<DRank> {
        let l = self.ell;
        if !t.rows().is_multiple_of(l) || !t.cols().is_multiple_of(l) {
            return Err(Error::Shape(format!("{}x{} is not made of {l}x{l} blocks", t.rows(), t.cols())));
        }
        for bi in 0..t.rows() / l {
            for bj in 0..t.cols() / l {
                let b = t.block(bi * l, bj * l, l, l);
                if !self.contains(&b)? {
                    return Err(Error::NotInAlgebra(format!("block ({}, {})", bi + 1, bj + 1)));
                }
            }
        }
        block_rank(t, l)
    }
}

fn pow_table<F: Field>(x: &F, n: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(n);
    let mut p = x.one_like();
    for _ in 0..n {
        out.push(p.clone());
        p = p.mul(x);
    }
    out
}

/// Block Gaussian elimination with `ℓ×ℓ` blocks: pivots are the leftmost
/// invertible blocks, scanning block rows top-down. Fails if a nonzero block
/// is singular or the scalar rank is not `ℓ·r`.
pub fn block_rank<F: Field>(t: &Mat<F>, l: usize) -> Result<DRank> {
    let (nr, nc) = (t.rows() / l, t.cols() / l);
    let mut m = t.clone();
    let mut used = vec![false; nr];
    let (mut rows, mut cols) = (Vec::new(), Vec::new());
    for c in 0..nc {
        let mut piv = None;
        for r in (0..nr).filter(|&r| !used[r]) {
            let b = m.block(r * l, c * l, l, l);
            if b.is_zero() {
                continue;
            }
            match inverse(&b) {
                Some(inv) => {
                    piv = Some((r, inv));
                    break;
                }
                None => return Err(Error::NotInAlgebra(format!("singular nonzero block ({}, {})", r + 1, c + 1))),
            }
        }
        let Some((r, inv)) = piv else { continue };
        used[r] = true;
        rows.push(r);
        cols.push(c);
        let prow = inv.mul(&m.block(r * l, 0, l, m.cols()))?;
        for i in (0..nr).filter(|&i| i != r) {
            let f = m.block(i * l, c * l, l, l);
            if f.is_zero() {
                continue;
            }
            let upd = m.block(i * l, 0, l, m.cols()).sub(&f.mul(&prow)?)?;
            for a in 0..l {
                for j in 0..m.cols() {
                    m.set(i * l + a, j, upd.get(a, j).clone());
                }
            }
        }
    }
    let r = rows.len();
    let scalar = rank(t);
    if scalar != r * l {
        return Err(Error::Invariant(format!("scalar rank {scalar} is not {l}·{r}")));
    }
    rows.sort_unstable();
    cols.sort_unstable();
    Ok(DRank { r, rows, cols })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, rat2};
    use crate::scalar::parse_scalar;

    fn fs(s: &str, n: u64) -> FieldScalar {
        parse_scalar(s, n).unwrap()
    }

    #[test]
    fn generators() {
        let d2 = DivAlgebra::new(2);
        let x = d2.rep_x();
        let w = fs("w", 2);
        let mut expect = Mat::zeros(2, 2, &FieldScalar::zero(2));
        expect.set(0, 1, FieldScalar::one(2));
        expect.set(1, 0, w.clone());
        assert_eq!(x, expect);
        assert_eq!(x.mul(&x).unwrap(), Mat::identity(2, &FieldScalar::zero(2)).scale(&w));
        let my = d2.rep_diag(&FieldScalar::y(2));
        assert_eq!(my.get(1, 1), &fs("-y", 2));
        assert_eq!(x.mul(&my).unwrap(), d2.rep_diag(&fs("-y", 2)).mul(&x).unwrap());

        let d3 = DivAlgebra::new(3);
        let x3 = d3.rep_x();
        assert_eq!(x3.mul(&x3).unwrap().mul(&x3).unwrap(), Mat::identity(3, &FieldScalar::zero(3)).scale(&fs("w", 3)));
        assert_eq!(d3.basis_matrix(1, 1), Mat::identity(3, &FieldScalar::zero(3)));
    }

    #[test]
    fn basis_matrix_matches_definition() {
        for l in 1..=4 {
            let d = DivAlgebra::new(l);
            let x = d.rep_x();
            for i in 1..=l {
                for j in 1..=l {
                    let mut xp = Mat::identity(l, &FieldScalar::zero(l as u64));
                    for _ in 1..i {
                        xp = xp.mul(&x).unwrap();
                    }
                    let yj = FieldScalar::from_poly(BiPoly::monomial((j - 1) as u32, 0, CycloNumber::one(l as u64)));
                    assert_eq!(d.basis_matrix(i, j), d.rep_diag(&yj).mul(&xp).unwrap(), "l={l} i={i} j={j}");
                }
            }
        }
    }

    #[test]
    fn express_examples() {
        let d2 = DivAlgebra::new(2);
        let z = FieldScalar::zero(2);
        let lam = d2.express_in_basis(&Mat::identity(2, &z)).unwrap();
        assert_eq!(lam, vec![FieldScalar::one(2), z.clone(), z.clone(), z.clone()]);
        let mut e11 = Mat::zeros(2, 2, &z);
        e11.set(0, 0, FieldScalar::one(2));
        let lam = d2.express_in_basis(&e11).unwrap();
        assert_eq!(lam, vec![FieldScalar::rational(2, rat2(1, 2)), fs("1/(2*y)", 2), z.clone(), z]);
        let d3 = DivAlgebra::new(3);
        let lam = d3.express_in_basis(&d3.rep_x()).unwrap();
        for (k, v) in lam.iter().enumerate() {
            assert_eq!(v.is_one(), k == 3);
            assert!(k == 3 || v.is_zero());
        }
    }

    #[test]
    fn combination_is_sum_of_basis() {
        let d = DivAlgebra::new(3);
        let mu: Vec<Rational> = (0..9).map(|k| rat((k * 5 % 7) as i64 - 3)).collect();
        let mut expect = Mat::zeros(3, 3, &FieldScalar::zero(3));
        for i in 1..=3 {
            for j in 1..=3 {
                let c = FieldScalar::rational(3, mu[(i - 1) * 3 + j - 1].clone());
                expect = expect.add(&d.basis_matrix(i, j).scale(&c)).unwrap();
            }
        }
        let got = d.combination(&mu);
        assert_eq!(got, expect);
        let back: Vec<Rational> =
            d.express_in_basis(&got).unwrap().iter().map(|x| x.as_cyclo().unwrap().as_rational().unwrap().clone()).collect();
        assert_eq!(back, mu);
    }

    #[test]
    fn d_rank_examples() {
        let l = 2;
        let d = DivAlgebra::new(l);
        let z = FieldScalar::zero(2);
        let i = Mat::identity(l, &z);
        let o = Mat::zeros(l, l, &z);
        let t = Mat::block_assemble(&[vec![i.clone(), o.clone()], vec![o.clone(), o.clone()]]).unwrap();
        assert_eq!(d.d_rank(&t).unwrap(), DRank { r: 1, rows: vec![0], cols: vec![0] });
        let t = Mat::block_assemble(&[vec![d.rep_x(), o.clone()], vec![o.clone(), o.clone()]]).unwrap();
        assert_eq!(d.d_rank(&t).unwrap().r, 1);
        let t = Mat::block_assemble(&[vec![i.clone(), i.clone()], vec![i.clone(), i]]).unwrap();
        assert_eq!(d.d_rank(&t).unwrap().r, 1);
        let mut e11 = o.clone();
        e11.set(0, 0, FieldScalar::one(2));
        let t = Mat::block_assemble(&[vec![e11, o.clone()], vec![o.clone(), o]]).unwrap();
        assert!(matches!(d.d_rank(&t), Err(Error::NotInAlgebra(_))));
    }
}
