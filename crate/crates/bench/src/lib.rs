//! Fixed inputs shared by the benchmarks in `benches/`.

use ncrank_core::abp::Abp;
use ncrank_core::field::rat;
use ncrank_core::linalg::Mat;
use ncrank_core::oracle::{gen_family, Edges, Family};
use ncrank_core::pencil::{LinearPencil, Pencil};
use ncrank_core::Rational;

pub fn skew(s: usize) -> Pencil {
    gen_family(&Family::Skew { s }, 0).unwrap().pencil
}

pub fn bipartite(s: usize, seed: u64) -> Pencil {
    gen_family(&Family::Bipartite { s, edges: Edges::Random { percent: 50 } }, seed).unwrap().pencil
}

pub fn random(s: usize, n: usize, seed: u64) -> Pencil {
    gen_family(&Family::Random { s, n, lo: -2, hi: 2 }, seed).unwrap().pencil
}

/// Two copies of `(x1 + x2)^k` subtracted in a width-2 ABP, which is
/// identically zero but has every word of length `k` on some path.
pub fn zero_power_difference(k: usize) -> Abp<Rational> {
    let vars = vec!["x1".to_string(), "x2".to_string()];
    let z = rat(0);
    let sum = |r: usize, c: usize| {
        let m = Mat::from_fn(r, c, &z, |i, j| rat((r == 1 || i == j) as i64));
        LinearPencil::new(vars.clone(), Mat::zeros(r, c, &z), vec![m.clone(), m]).unwrap()
    };
    let mut layers = vec![sum(1, 2)];
    layers.extend((1..k).map(|_| sum(2, 2)));
    let last = Mat::from_fn(2, 1, &z, |i, _| rat(if i == 0 { 1 } else { -1 }));
    layers.push(LinearPencil::new(vars.clone(), last, vec![Mat::zeros(2, 1, &z); 2]).unwrap());
    Abp::new(vars, layers).unwrap()
}
