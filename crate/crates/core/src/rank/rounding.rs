//! Rounding a high-rank tuple into the division algebra of matching index,
//! and shrinking the dimension of a rounded witness.

use crate::division::{block_rank, DRank, DivAlgebra};
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::{det, rank, rank_profile, Mat};
use crate::pencil::{MatTuple, Pencil};
use crate::scalar::{lcm_u64, FieldScalar, Fp, Image};

use super::witness::{eval_image, pencil_image, tuple_image, Witness, IMAGE_ATTEMPTS};

const MAX_IMAGES: u64 = 16;

/// Outcome of one rounding step at dimension `ell`.
#[derive(Clone, Debug)]
pub struct Rounded {
    pub tuple: MatTuple<FieldScalar>,
    pub r: usize,
    /// Certified rank of `T(tuple)`, a multiple of `ell`.
    pub rank: usize,
    pub drank: DRank,
    /// Size of the minor kept nonzero during the sweep.
    pub minor: usize,
}

impl Rounded {
    pub fn ell(&self) -> usize {
        self.tuple.dim()
    }
}

/// Adds `δ·(A_k ⊗ C)` to `big`, `C` the basis element with circulant shift
/// `m` whose row-`a` entry is `e[a]`.
fn apply(big: &mut Mat<Fp>, ak: &Mat<Fp>, l: usize, m: usize, e: &[Fp], delta: &Fp) {
    for i in 0..ak.rows() {
        for j in 0..ak.cols() {
            let c = ak.get(i, j);
            if c.is_zero() {
                continue;
            }
            let cd = c.mul(delta);
            for (a, ea) in e.iter().enumerate() {
                let (r, s) = (i * l + a, j * l + (a + m) % l);
                let v = big.get(r, s).add(&cd.mul(ea));
                big.set(r, s, v);
            }
        }
    }
}

/// Replaces `p` (dimension ℓ, `rank T(p) > r·ℓ`) by a tuple of rational
/// combinations of the basis `C_ij` of the index-ℓ division algebra whose
/// rank is at least `(r+1)·ℓ`.
///
/// Each `p_k` is written as `Σ λ_kij C_ij`; the coordinates are then fixed one
/// at a time, in (k, i, j) order, to the first `μ ∈ {0, …, K}` keeping a fixed
/// `K×K` minor of `T` nonzero, `K` the rank of `T(p)`. Nonvanishing is
/// checked in modular images, which certifies it exactly.
pub fn round_witness(t: &Pencil, p: &MatTuple<FieldScalar>, r: usize) -> Result<Rounded> {
    let l = p.dim();
    if l == 0 {
        return Err(Error::Params("cannot round a 0-dimensional tuple".into()));
    }
    let alg = DivAlgebra::new(l);
    let midx = lcm_u64(p.zero_elem().index(), l as u64);
    let coords: Vec<(usize, usize, usize)> =
        (0..t.nvars()).flat_map(|k| (0..l).flat_map(move |m| (0..l).map(move |j| (k, m, j)))).collect();
    let mut mu: Vec<i64> = Vec::with_capacity(coords.len());
    let mut minor: Option<(Vec<usize>, Vec<usize>)> = None;
    for attempt in 0..MAX_IMAGES {
        let img = Image::nth(midx, attempt);
        let (Some(pi), Some(ti)) = (tuple_image(p, &img), pencil_image(t, &img)) else { continue };
        let lam: Vec<Vec<Fp>> = pi.mats().iter().map(|a| alg.express_in_image(a, &img)).collect::<Result<_>>()?;
        let e: Vec<Vec<Vec<Fp>>> = (0..l)
            .map(|m| {
                (0..l).map(|j| (0..l).map(|a| img.scalar(&alg.basis_entry(m, j, a)).unwrap()).collect()).collect()
            })
            .collect();
        let mut big = ti.eval(&pi)?;
        for (c, &(k, m, j)) in coords.iter().enumerate().take(mu.len()) {
            let delta = img.zero().from_int(mu[c]).sub(&lam[k][m * l + j]);
            apply(&mut big, ti.coeff(k), l, m, &e[m][j], &delta);
        }
        let (rows, cols) = match &minor {
            Some(mc) => mc.clone(),
            None => {
                let (rows, cols) = rank_profile(&big);
                if rows.len() <= r * l {
                    continue;
                }
                minor = Some((rows.clone(), cols.clone()));
                (rows, cols)
            }
        };
        if det(&big.submatrix(&rows, &cols)).is_zero() {
            continue;
        }
        let kk = rows.len() as i64;
        while mu.len() < coords.len() {
            let (k, m, j) = coords[mu.len()];
            let lc = &lam[k][m * l + j];
            let mut accepted = None;
            for v in 0..=kk {
                let delta = img.zero().from_int(v).sub(lc);
                if delta.is_zero() {
                    accepted = Some(v);
                    break;
                }
                apply(&mut big, ti.coeff(k), l, m, &e[m][j], &delta);
                if !det(&big.submatrix(&rows, &cols)).is_zero() {
                    accepted = Some(v);
                    break;
                }
                apply(&mut big, ti.coeff(k), l, m, &e[m][j], &delta.neg());
            }
            match accepted {
                Some(v) => mu.push(v),
                None => break,
            }
        }
        if mu.len() == coords.len() {
            break;
        }
    }
    let Some((rows, _)) = minor else {
        return Err(Error::Exhausted(format!("no image shows rank above {}", r * l)));
    };
    if mu.len() < coords.len() {
        return Err(Error::Exhausted("rounding sweep ran out of images".into()));
    }
    let mats = (0..t.nvars())
        .map(|k| {
            let coeffs: Vec<Rational> =
                (0..l * l).map(|c| Rational::from_integer(mu[k * l * l + c].into())).collect();
            alg.combination(&coeffs)
        })
        .collect();
    let tuple = MatTuple::new(l, mats, &FieldScalar::zero(l as u64))?;
    let (rk, drank) = certify(t, &tuple, rows.len())?;
    Ok(Rounded { r: rk / l, tuple, rank: rk, drank, minor: rows.len() })
}

/// Image rank of `T(q)` for a tuple over the index-ℓ algebra, with its block
/// rank; the rank must be a multiple of ℓ and at least `floor`.
fn certify(t: &Pencil, q: &MatTuple<FieldScalar>, floor: usize) -> Result<(usize, DRank)> {
    let l = q.dim();
    let mut best: Option<(usize, DRank)> = None;
    for attempt in 0..MAX_IMAGES {
        let img = Image::nth(l as u64, attempt);
        let Some(m) = eval_image(t, q, &img) else { continue };
        let rk = rank(&m);
        if rk % l != 0 || best.as_ref().is_some_and(|b| b.0 >= rk) {
            continue;
        }
        if let Ok(dr) = block_rank(&m, l) {
            best = Some((rk, dr));
        }
        if attempt + 1 >= IMAGE_ATTEMPTS && best.as_ref().is_some_and(|b| b.0 >= floor) {
            break;
        }
    }
    match best {
        Some(b) if b.0 >= floor => Ok(b),
        _ => Err(Error::Invariant(format!("rounded rank is not a multiple of {l} reaching {floor}"))),
    }
}

/// Chops the last row and column of every matrix and re-rounds, while the
/// dimension exceeds `r + 1`. With `shrink`, continues below `r + 1` as long
/// as the chopped tuple still has rank above `(r − 1)(d − 1)`.
pub fn reduce_witness(t: &Pencil, w: Witness, shrink: bool) -> Result<(Witness, Vec<Rounded>)> {
    let mut w = w;
    let mut log = Vec::new();
    while w.dim() > 1 && w.r > 0 {
        let strict = w.dim() > w.r + 1;
        if !strict && !shrink {
            break;
        }
        let chopped = w.tuple.chop();
        let floor = (w.r - 1) * chopped.dim();
        let rk = super::witness::image_rank(t, &chopped, IMAGE_ATTEMPTS);
        if rk <= floor {
            if strict {
                return Err(Error::Invariant(format!(
                    "chopped rank {rk} is not above {floor} at dimension {}",
                    chopped.dim()
                )));
            }
            break;
        }
        let rounded = round_witness(t, &chopped, w.r - 1)?;
        if rounded.r < w.r {
            return Err(Error::Invariant("re-rounding lost rank".into()));
        }
        w = Witness { r: rounded.r, tuple: rounded.tuple.clone() };
        log.push(rounded);
    }
    Ok((w, log))
}
