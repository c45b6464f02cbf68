#![allow(dead_code)]

use ncrank_core::field::rat;
use ncrank_core::linalg::Mat;
use ncrank_core::pencil::Pencil;
use ncrank_core::Rational;

pub fn q(rows: &[&[i64]]) -> Mat<Rational> {
    Mat::from_rows(rows.iter().map(|r| r.iter().map(|&x| rat(x)).collect()).collect(), &rat(0)).unwrap()
}

pub fn pencil(a0: &[&[i64]], a: &[&[&[i64]]]) -> Pencil {
    Pencil::with_default_vars(q(a0), a.iter().map(|m| q(m)).collect()).unwrap()
}

pub fn skew3() -> Pencil {
    pencil(
        &[&[0, 0, 0], &[0, 0, 0], &[0, 0, 0]],
        &[
            &[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]],
            &[&[0, 0, 1], &[0, 0, 0], &[-1, 0, 0]],
            &[&[0, 0, 0], &[0, 0, 1], &[0, -1, 0]],
        ],
    )
}
