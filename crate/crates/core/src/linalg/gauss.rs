use crate::error::{Error, Result};
use crate::field::Field;

use super::Mat;

/// Invertible `u`, `v` and rank `rho` with `u·M·v = diag(I_rho, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PivotForm<F> {
    pub u: Mat<F>,
    pub v: Mat<F>,
    pub rho: usize,
}

pub fn rank<F: Field>(m: &Mat<F>) -> usize {
    F::fast_rank(m).unwrap_or_else(|| gauss_rank(m))
}

/// Rank by Gaussian elimination over the field itself.
pub fn gauss_rank<F: Field>(m: &Mat<F>) -> usize {
    rank_profile(m).0.len()
}

/// Row and column indices of a nonsingular `ρ×ρ` submatrix, `ρ = rank(m)`.
/// Pivots are chosen column by column, first nonzero row from the top.
pub fn rank_profile<F: Field>(m: &Mat<F>) -> (Vec<usize>, Vec<usize>) {
    let mut a = m.clone();
    let mut perm: Vec<usize> = (0..m.rows()).collect();
    let (mut prow, mut pcol) = (Vec::new(), Vec::new());
    let mut r = 0;
    for c in 0..a.cols() {
        if r == a.rows() {
            break;
        }
        let Some(p) = (r..a.rows()).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(r, p);
        perm.swap(r, p);
        let inv = a.get(r, c).inv().unwrap();
        for i in r + 1..a.rows() {
            if a.get(i, c).is_zero() {
                continue;
            }
            let f = a.get(i, c).mul(&inv);
            for j in c..a.cols() {
                let t = a.get(r, j);
                if !t.is_zero() {
                    let v = a.get(i, j).sub(&f.mul(t));
                    a.set(i, j, v);
                }
            }
        }
        prow.push(perm[r]);
        pcol.push(c);
        r += 1;
    }
    let mut rows = prow;
    rows.sort_unstable();
    (rows, pcol)
}

/// Deterministic pivot normal form: pivots are the first nonzero entry of the
/// remaining submatrix in row-major order.
pub fn pivot_form<F: Field>(m: &Mat<F>) -> PivotForm<F> {
    let z = m.zero_elem().zero_like();
    let (nr, nc) = (m.rows(), m.cols());
    let mut w = m.clone();
    let mut u = Mat::identity(nr, &z);
    let mut v = Mat::identity(nc, &z);
    let mut t = 0;
    while t < nr.min(nc) {
        let mut found = None;
        'scan: for i in t..nr {
            for j in t..nc {
                if !w.get(i, j).is_zero() {
                    found = Some((i, j));
                    break 'scan;
                }
            }
        }
        let Some((pi, pj)) = found else { break };
        w.swap_rows(t, pi);
        u.swap_rows(t, pi);
        w.swap_cols(t, pj);
        v.swap_cols(t, pj);
        let inv = w.get(t, t).inv().unwrap();
        for j in 0..nc {
            let x = w.get(t, j).mul(&inv);
            w.set(t, j, x);
        }
        for j in 0..nr {
            let x = u.get(t, j).mul(&inv);
            u.set(t, j, x);
        }
        for i in 0..nr {
            if i == t || w.get(i, t).is_zero() {
                continue;
            }
            let f = w.get(i, t).clone();
            for j in 0..nc {
                let s = w.get(t, j);
                if !s.is_zero() {
                    let x = w.get(i, j).sub(&f.mul(s));
                    w.set(i, j, x);
                }
            }
            for j in 0..nr {
                let s = u.get(t, j);
                if !s.is_zero() {
                    let x = u.get(i, j).sub(&f.mul(s));
                    u.set(i, j, x);
                }
            }
        }
        // column t is now e_t; clear the rest of row t with column operations
        for j in t + 1..nc {
            let f = w.get(t, j).clone();
            if f.is_zero() {
                continue;
            }
            w.set(t, j, z.clone());
            for i in 0..nc {
                let s = v.get(i, t);
                if !s.is_zero() {
                    let x = v.get(i, j).sub(&f.mul(s));
                    v.set(i, j, x);
                }
            }
        }
        t += 1;
    }
    PivotForm { u, v, rho: t }
}

/// One solution of `a·x = b`, or [`Error::Inconsistent`].
pub fn solve<F: Field>(a: &Mat<F>, b: &[F]) -> Result<Vec<F>> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!("rhs has length {}, expected {}", b.len(), a.rows())));
    }
    let n = a.cols();
    let z = a.zero_elem().zero_like();
    let mut aug = Mat::from_fn(a.rows(), n + 1, &z, |i, j| if j < n { a.get(i, j).clone() } else { b[i].clone() });
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..aug.rows()).find(|&i| !aug.get(i, c).is_zero()) else { continue };
        aug.swap_rows(r, p);
        let inv = aug.get(r, c).inv().unwrap();
        for j in c..=n {
            let x = aug.get(r, j).mul(&inv);
            aug.set(r, j, x);
        }
        for i in 0..aug.rows() {
            if i == r || aug.get(i, c).is_zero() {
                continue;
            }
            let f = aug.get(i, c).clone();
            for j in c..=n {
                let s = aug.get(r, j);
                if !s.is_zero() {
                    let x = aug.get(i, j).sub(&f.mul(s));
                    aug.set(i, j, x);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if (r..aug.rows()).any(|i| !aug.get(i, n).is_zero()) {
        return Err(Error::Inconsistent);
    }
    let mut x = vec![z; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = aug.get(i, n).clone();
    }
    Ok(x)
}

pub fn inverse<F: Field>(a: &Mat<F>) -> Option<Mat<F>> {
    if !a.is_square() {
        return None;
    }
    let pf = pivot_form(a);
    if pf.rho != a.rows() {
        return None;
    }
    // u·a·v = I  ⇒  a⁻¹ = v·u
    Some(pf.v.mul(&pf.u).unwrap())
}

pub fn det<F: Field>(a: &Mat<F>) -> F {
    assert!(a.is_square(), "determinant of a non-square matrix");
    let mut m = a.clone();
    let n = m.rows();
    let mut acc = m.zero_elem().one_like();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !m.get(i, c).is_zero()) else {
            return m.zero_elem().zero_like();
        };
        if p != c {
            m.swap_rows(c, p);
            acc = acc.neg();
        }
        let piv = m.get(c, c).clone();
        acc = acc.mul(&piv);
        let inv = piv.inv().unwrap();
        for i in c + 1..n {
            if m.get(i, c).is_zero() {
                continue;
            }
            let f = m.get(i, c).mul(&inv);
            for j in c..n {
                let s = m.get(c, j);
                if !s.is_zero() {
                    let x = m.get(i, j).sub(&f.mul(s));
                    m.set(i, j, x);
                }
            }
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{rat, Rational};
    use crate::scalar::{parse_scalar, FieldScalar};

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), &rat(0)).unwrap()
    }

    fn k(rows: &[&[&str]], n: u64) -> Mat<FieldScalar> {
        Mat::from_rows(
            rows.iter().map(|r| r.iter().map(|s| parse_scalar(s, n).unwrap()).collect()).collect(),
            &FieldScalar::zero(n),
        )
        .unwrap()
    }

    fn diag_i(rho: usize, r: usize, c: usize) -> Mat<Rational> {
        Mat::from_fn(r, c, &rat(0), |i, j| if i == j && i < rho { rat(1) } else { rat(0) })
    }

    #[test]
    fn rank_examples() {
        assert_eq!(rank(&q(&[&[1, 0], &[0, 0]])), 1);
        assert_eq!(rank(&k(&[&["0", "1"], &["w", "0"]], 2)), 2);
        assert_eq!(rank(&k(&[&["y", "1"], &["y^2", "y"]], 1)), 1);
    }

    #[test]
    fn pivot_form_examples() {
        let z = q(&[&[0, 0], &[0, 0]]);
        let pf = pivot_form(&z);
        assert_eq!(pf.rho, 0);
        assert_eq!(pf.u, Mat::identity(2, &rat(0)));
        assert_eq!(pf.v, Mat::identity(2, &rat(0)));
        let i3 = Mat::identity(3, &rat(0));
        let pf = pivot_form(&i3);
        assert_eq!((pf.rho, &pf.u, &pf.v), (3, &i3, &i3));
        let m = q(&[&[0, 2], &[0, 0]]);
        let pf = pivot_form(&m);
        assert_eq!(pf.rho, 1);
        assert_eq!(pf.u.mul(&m).unwrap().mul(&pf.v).unwrap(), diag_i(1, 2, 2));
    }

    #[test]
    fn solve_examples() {
        let n = 1;
        let x = solve(&Mat::identity(2, &FieldScalar::zero(n)), &[FieldScalar::y(n), FieldScalar::w(n)]).unwrap();
        assert_eq!(x, vec![FieldScalar::y(n), FieldScalar::w(n)]);
        assert_eq!(solve(&q(&[&[1, 1], &[1, 1]]), &[rat(1), rat(0)]), Err(Error::Inconsistent));
        assert_eq!(solve(&q(&[&[1, 1], &[0, 1]]), &[rat(3), rat(2)]).unwrap(), vec![rat(1), rat(2)]);
    }

    #[test]
    fn inverse_and_det() {
        let m = q(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        let inv = inverse(&m).unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Mat::identity(3, &rat(0)));
        assert_eq!(det(&m), rat(18));
        assert!(inverse(&q(&[&[1, 2], &[2, 4]])).is_none());
    }

    #[test]
    fn profile_gives_nonsingular_minor() {
        let m = q(&[&[0, 0, 1], &[0, 0, 2], &[1, 1, 0], &[2, 2, 5]]);
        let (r, c) = rank_profile(&m);
        assert_eq!(r.len(), 2);
        assert!(!det(&m.submatrix(&r, &c)).is_zero());
    }
}
