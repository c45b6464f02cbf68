//! Fraction-free elimination over Q(ζ_N)[y, w]. This is how ranks over the
//! rational-function field are computed.

use crate::scalar::{BiPoly, FieldScalar};

use super::Mat;

/// Multiplies every row by the product of its distinct denominators, giving a
/// polynomial matrix of the same rank.
pub fn clear_denominators(m: &Mat<FieldScalar>) -> Mat<BiPoly> {
    let n = m.zero_elem().index();
    let zero = BiPoly::zero(n);
    let mut rows = Vec::with_capacity(m.rows());
    for i in 0..m.rows() {
        let mut l = BiPoly::one(n);
        for x in m.row(i) {
            if !x.den().is_constant() {
                let g = l.gcd(x.den());
                l = l.mul(&x.den().exact_div(&g).unwrap());
            }
        }
        rows.push(
            m.row(i)
                .iter()
                .map(|x| x.num().mul(&l).exact_div(x.den()).expect("denominator divides the row multiplier"))
                .collect(),
        );
    }
    Mat::from_rows(rows, &zero).unwrap()
}

/// Rank by Bareiss elimination; every division is exact.
pub fn bareiss_rank(m: &Mat<BiPoly>) -> usize {
    let mut a = m.clone();
    let (nr, nc) = (a.rows(), a.cols());
    let n = a.zero_elem().index();
    let mut prev = BiPoly::one(n);
    let mut r = 0;
    for c in 0..nc {
        if r == nr {
            break;
        }
        let Some(p) = (r..nr).find(|&i| !a.get(i, c).is_zero()) else { continue };
        a.swap_rows(r, p);
        let piv = a.get(r, c).clone();
        for i in r + 1..nr {
            let f = a.get(i, c).clone();
            for j in c..nc {
                let x = piv.mul(a.get(i, j)).sub(&f.mul(a.get(r, j)));
                let x = x.exact_div(&prev).expect("Bareiss division is exact");
                a.set(i, j, x);
            }
        }
        prev = piv;
        r += 1;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gauss_rank;
    use crate::scalar::parse_scalar;

    #[test]
    fn bareiss_agrees_with_fraction_field() {
        let n = 3;
        let cases: &[&[&[&str]]] = &[
            &[&["y", "1"], &["y^2", "y"]],
            &[&["y", "w", "1/(y+1)"], &["u*y", "1", "w"], &["y + u*y", "w + 1", "w + 1/(y+1)"]],
            &[&["0", "w"], &["w*y - 1", "2"]],
        ];
        for rows in cases {
            let m = Mat::from_rows(
                rows.iter().map(|r| r.iter().map(|s| parse_scalar(s, n).unwrap()).collect()).collect(),
                &FieldScalar::zero(n),
            )
            .unwrap();
            assert_eq!(bareiss_rank(&clear_denominators(&m)), gauss_rank(&m));
        }
    }
}
