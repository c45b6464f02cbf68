//! Ground truth for tests: brute-force lower bounds, commutative rank, and
//! pencil families whose noncommutative rank is known.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{rat, Field, Rational};
use crate::linalg::{rank, Mat};
use crate::pencil::{MatTuple, Pencil};
use crate::scalar::Fp;

/// 2^61 − 1.
const ORACLE_PRIME: u64 = (1 << 61) - 1;

/// A tuple of integer matrices and the blow-up rank it certifies.
#[derive(Clone, Debug)]
pub struct LowerBound {
    pub r: usize,
    pub tuple: MatTuple<Rational>,
}

fn random_tuple(rng: &mut ChaCha8Rng, n: usize, d: usize, lo: i64, hi: i64) -> MatTuple<Rational> {
    let z = rat(0);
    let mats = (0..n).map(|_| Mat::from_fn(d, d, &z, |_, _| rat(rng.gen_range(lo..=hi)))).collect();
    MatTuple::new(d, mats, &z).unwrap()
}

/// Rank of `T(p)` modulo a fixed prime: a lower bound on the rational rank.
pub fn rank_mod_prime(t: &Pencil, p: &MatTuple<Rational>) -> usize {
    let z = Fp::new(0, ORACLE_PRIME);
    let tp = t.map(&z, |q| z.from_rational(q));
    let pp = p.map(&z, |q| z.from_rational(q));
    rank(&tp.eval(&pp).expect("shapes agree"))
}

/// `max ⌊rank T(p)/d⌋` over `budget` random integer tuples in [−3, 3] for
/// each `d ≤ max_dim`. Each reported value comes with the tuple achieving it.
pub fn brute_lower_bound(t: &Pencil, max_dim: usize, budget: usize, seed: u64) -> LowerBound {
    let s = t.size();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = LowerBound { r: 0, tuple: MatTuple::zeros(t.nvars(), 1, &rat(0)) };
    for d in 1..=max_dim {
        for _ in 0..budget {
            if best.r == s {
                return best;
            }
            let p = random_tuple(&mut rng, t.nvars(), d, -3, 3);
            let r = rank_mod_prime(t, &p) / d;
            if r > best.r {
                best = LowerBound { r, tuple: p };
            }
        }
    }
    best
}

/// Largest rank at three random integer points; equals the commutative rank
/// with overwhelming probability.
pub fn commutative_rank(t: &Pencil, seed: u64) -> usize {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..3)
        .map(|_| {
            let x: Vec<Rational> = (0..t.nvars()).map(|_| rat(rng.gen_range(-1000..=1000))).collect();
            rank(&t.eval_scalars(&x).expect("one value per variable"))
        })
        .max()
        .unwrap_or_else(|| rank(t.constant()))
}

/// Maximum matching size of a bipartite graph on `s + s` vertices, by
/// augmenting paths.
pub fn max_matching(s: usize, edges: &[(usize, usize)]) -> usize {
    let mut adj = vec![Vec::new(); s];
    for &(i, j) in edges {
        adj[i].push(j);
    }
    let mut owner: Vec<Option<usize>> = vec![None; s];
    fn augment(u: usize, adj: &[Vec<usize>], seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for &v in &adj[u] {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if owner[v].is_none_or(|o| augment(o, adj, seen, owner)) {
                owner[v] = Some(u);
                return true;
            }
        }
        false
    }
    (0..s).filter(|&u| augment(u, &adj, &mut vec![false; s], &mut owner)).count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Edges {
    /// `i - i` and `i - i+1 (mod s)`.
    Cycle,
    /// Row 0 joined to every column.
    Star,
    /// Each edge present independently with probability `percent/100`.
    Random { percent: u32 },
    List(Vec<(usize, usize)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    Bipartite { s: usize, edges: Edges },
    Skew { s: usize },
    Factorized { s: usize, r: usize, n: usize },
    Random { s: usize, n: usize, lo: i64, hi: i64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Known {
    Exact(usize),
    AtMost(usize),
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub pencil: Pencil,
    pub known: Option<Known>,
    pub edges: Option<Vec<(usize, usize)>>,
}

fn zeros(r: usize, c: usize) -> Mat<Rational> {
    Mat::zeros(r, c, &rat(0))
}

fn random_mat(rng: &mut ChaCha8Rng, r: usize, c: usize) -> Mat<Rational> {
    Mat::from_fn(r, c, &rat(0), |_, _| rat(rng.gen_range(-3..=3)))
}

pub fn gen_family(family: &Family, seed: u64) -> Result<Generated> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match family {
        Family::Bipartite { s, edges } => {
            let s = *s;
            if s == 0 {
                return Err(Error::Params("bipartite graph needs s ≥ 1".into()));
            }
            let list: Vec<(usize, usize)> = match edges {
                Edges::Cycle => {
                    let mut v: Vec<_> = (0..s).flat_map(|i| [(i, i), (i, (i + 1) % s)]).collect();
                    v.sort_unstable();
                    v.dedup();
                    v
                }
                Edges::Star => (0..s).map(|j| (0, j)).collect(),
                Edges::Random { percent } => (0..s)
                    .flat_map(|i| (0..s).map(move |j| (i, j)))
                    .filter(|_| rng.gen_range(0..100) < *percent)
                    .collect(),
                Edges::List(v) => {
                    if v.iter().any(|&(i, j)| i >= s || j >= s) {
                        return Err(Error::Params("edge endpoint out of range".into()));
                    }
                    v.clone()
                }
            };
            let vars = list.iter().map(|(i, j)| format!("x{}_{}", i + 1, j + 1)).collect();
            let a = list
                .iter()
                .map(|&(i, j)| {
                    let mut m = zeros(s, s);
                    m.set(i, j, rat(1));
                    m
                })
                .collect();
            let known = Some(Known::Exact(max_matching(s, &list)));
            Ok(Generated { pencil: Pencil::new(vars, zeros(s, s), a)?, known, edges: Some(list) })
        }
        Family::Skew { s } => {
            let s = *s;
            let pairs: Vec<(usize, usize)> = (0..s).flat_map(|i| (i + 1..s).map(move |j| (i, j))).collect();
            let a = pairs
                .iter()
                .map(|&(i, j)| {
                    let mut m = zeros(s, s);
                    m.set(i, j, rat(1));
                    m.set(j, i, rat(-1));
                    m
                })
                .collect();
            Ok(Generated { pencil: Pencil::with_default_vars(zeros(s, s), a)?, known: None, edges: None })
        }
        Family::Factorized { s, r, n } => {
            let (s, r, n) = (*s, *r, *n);
            if r > s || n == 0 {
                return Err(Error::Params("factorized family needs r ≤ s and n ≥ 1".into()));
            }
            // T = [P1 | P2(x)] · [Q1(x); Q2] with P1, Q2 constant, so T stays linear
            let (r1, r2) = (r.div_ceil(2), r / 2);
            let p1 = random_mat(&mut rng, s, r1);
            let q2 = random_mat(&mut rng, r2, s);
            let a = (0..n)
                .map(|_| {
                    let q1k = random_mat(&mut rng, r1, s);
                    let p2k = random_mat(&mut rng, s, r2);
                    p1.mul(&q1k).unwrap().add(&p2k.mul(&q2).unwrap()).unwrap()
                })
                .collect();
            Ok(Generated { pencil: Pencil::with_default_vars(zeros(s, s), a)?, known: Some(Known::AtMost(r)), edges: None })
        }
        Family::Random { s, n, lo, hi } => {
            if lo > hi {
                return Err(Error::Params("empty coefficient range".into()));
            }
            let a0 = Mat::from_fn(*s, *s, &rat(0), |_, _| rat(rng.gen_range(*lo..=*hi)));
            let a = (0..*n).map(|_| Mat::from_fn(*s, *s, &rat(0), |_, _| rat(rng.gen_range(*lo..=*hi)))).collect();
            Ok(Generated { pencil: Pencil::with_default_vars(a0, a)?, known: None, edges: None })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matcher_examples() {
        let cycle = gen_family(&Family::Bipartite { s: 3, edges: Edges::Cycle }, 0).unwrap();
        assert_eq!(cycle.known, Some(Known::Exact(3)));
        let star = gen_family(&Family::Bipartite { s: 3, edges: Edges::Star }, 0).unwrap();
        assert_eq!(star.known, Some(Known::Exact(1)));
        assert_eq!(max_matching(3, &[(0, 0), (1, 0), (2, 0)]), 1);
        assert_eq!(max_matching(3, &[(0, 0), (0, 1), (1, 0)]), 2);
    }

    #[test]
    fn oracle_examples() {
        let s = 2;
        let id = Pencil::with_default_vars(Mat::identity(s, &rat(0)), vec![]).unwrap();
        assert_eq!(brute_lower_bound(&id, 1, 5, 1).r, 2);
        assert_eq!(commutative_rank(&id, 1), 2);
        let zero = Pencil::with_default_vars(zeros(2, 2), vec![zeros(2, 2)]).unwrap();
        assert_eq!(brute_lower_bound(&zero, 3, 5, 1).r, 0);
        let skew = gen_family(&Family::Skew { s: 3 }, 0).unwrap().pencil;
        assert_eq!(commutative_rank(&skew, 7), 2);
        assert_eq!(brute_lower_bound(&skew, 1, 50, 7).r, 2);
        assert_eq!(brute_lower_bound(&skew, 2, 50, 7).r, 3);
    }

    #[test]
    fn generation_is_deterministic() {
        let f = Family::Random { s: 2, n: 2, lo: -2, hi: 2 };
        assert_eq!(gen_family(&f, 7).unwrap().pencil, gen_family(&f, 7).unwrap().pencil);
        let g = gen_family(&Family::Factorized { s: 3, r: 2, n: 2 }, 3).unwrap();
        assert_eq!(g.known, Some(Known::AtMost(2)));
    }
}
