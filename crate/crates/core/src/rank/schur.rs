//! The decomposition `U·T_d(Z+p)·V = [[I − L, A], [B, C]]` and the zero test
//! of the truncated Schur complement `P̃ = C − B(Σ_{k<rd} L^k)A`.

use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::abp::{Abp, Echelon};
use crate::error::{Error, Result};
use crate::field::{Field, Rational};
use crate::linalg::{pivot_form, rank, Mat};
use crate::pencil::{blowup_var_name, pencil_eval, LinearPencil, MatTuple, Pencil};
use crate::scalar::CycloNumber;

use super::witness::{cyclo_image_rank, Witness};

/// Specialization points `(y, w)` tried, in order, when a witness over K is
/// replaced by a shift over Q(ζ_N).
pub fn specialization_points() -> impl Iterator<Item = (i64, i64)> {
    (2i64..).flat_map(|s| (1..s).map(move |y| (y, s - y)))
}

const MAX_POINTS: usize = 64;

#[derive(Clone, Debug)]
pub struct SchurData {
    pub s: usize,
    pub n: usize,
    pub r: usize,
    pub d: usize,
    /// Where `(y, w)` was specialized to obtain `shift`.
    pub point: (i64, i64),
    pub shift: MatTuple<CycloNumber>,
    pub rho: usize,
    pub u: Mat<CycloNumber>,
    pub v: Mat<CycloNumber>,
    /// `U·T_d(Z+p)·V` over the `n·d²` blow-up variables.
    pub pencil: LinearPencil<CycloNumber>,
}

/// A word with nonzero coefficient in `P̃_ij` (0-based residual indices).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub i: usize,
    pub j: usize,
    pub word: Vec<usize>,
}

/// Record of a zero test that found every `P̃_ij` identically zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transcript {
    pub lines: Vec<String>,
}

impl Transcript {
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for l in &self.lines {
            h.update(l.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PitOutcome {
    Zero(Transcript),
    Nonzero(Hit),
}

fn int(n: u64, k: i64) -> CycloNumber {
    CycloNumber::from_rational(n, Rational::from_integer(k.into()))
}

impl SchurData {
    /// Decomposes at the shift `p` (any tuple with `rank T(p) ≥ r·d`). For
    /// `r = 0` no transformation is applied.
    pub fn new(t: &Pencil, shift: MatTuple<CycloNumber>, r: usize, point: (i64, i64)) -> Result<Self> {
        let (s, n, d) = (t.size(), t.nvars(), shift.dim());
        if shift.len() != n {
            return Err(Error::Shape(format!("shift has {} matrices for {n} variables", shift.len())));
        }
        let z = shift.zero_elem().clone();
        let tp = pencil_eval(t, &shift)?;
        let rd = r * d;
        let (u, v, rho) = if rd == 0 {
            (Mat::identity(s * d, &z), Mat::identity(s * d, &z), rank(&tp))
        } else {
            let pf = pivot_form(&tp);
            if pf.rho < rd {
                return Err(Error::Invariant(format!("shift has rank {} below r·d = {rd}", pf.rho)));
            }
            (pf.u, pf.v, pf.rho)
        };
        let lt = t.lift(&z);
        // U·(A_k ⊗ E_ab)·V = U[:, ·d+a] · A_k · V[·d+b, :]
        let ucols: Vec<Mat<CycloNumber>> =
            (0..d).map(|a| Mat::from_fn(s * d, s, &z, |i, j| u.get(i, j * d + a).clone())).collect();
        let vrows: Vec<Mat<CycloNumber>> =
            (0..d).map(|b| Mat::from_fn(s, s * d, &z, |i, j| v.get(i * d + b, j).clone())).collect();
        let jobs: Vec<(usize, usize, usize)> =
            (0..n).flat_map(|k| (0..d).flat_map(move |a| (0..d).map(move |b| (k, a, b)))).collect();
        let coeffs: Vec<Mat<CycloNumber>> = jobs
            .par_iter()
            .map(|&(k, a, b)| ucols[a].mul(lt.coeff(k)).unwrap().mul(&vrows[b]).unwrap())
            .collect();
        let vars = jobs.iter().map(|&(k, a, b)| blowup_var_name(t.vars(), k, a, b)).collect();
        let a0 = u.mul(&tp)?.mul(&v)?;
        let pencil = LinearPencil::new(vars, a0, coeffs)?;
        Ok(SchurData { s, n, r, d, point, shift, rho, u, v, pencil })
    }

    /// Specializes the witness at the first point keeping `rank ≥ r·d` and
    /// decomposes there.
    pub fn from_witness(t: &Pencil, w: &Witness) -> Result<Self> {
        let n = w.cyclo_index();
        let rd = w.r * w.dim();
        for (y0, w0) in specialization_points().take(MAX_POINTS) {
            let (yc, wc) = (int(n, y0), int(n, w0));
            let Some(p0) = w.tuple.try_map(&CycloNumber::zero(n), |x| x.eval(&yc, &wc)) else { continue };
            if rd > 0 && cyclo_image_rank(t, &p0, 2) < rd {
                continue;
            }
            match SchurData::new(t, p0, w.r, (y0, w0)) {
                Ok(sd) => return Ok(sd),
                Err(Error::Invariant(_)) => continue,
                Err(e) => return Err(e),
            }
        }
        Err(Error::Exhausted("no specialization point keeps the witness rank".into()))
    }

    pub fn rd(&self) -> usize {
        self.r * self.d
    }

    /// Side of the residual block C, `(s − r)·d`.
    pub fn residual(&self) -> usize {
        self.s * self.d - self.rd()
    }

    pub fn nvars(&self) -> usize {
        self.pencil.nvars()
    }

    fn blk(&self, m: &Mat<CycloNumber>, top: bool, left: bool) -> Mat<CycloNumber> {
        let (rd, res) = (self.rd(), self.residual());
        let (r0, nr) = if top { (0, rd) } else { (rd, res) };
        let (c0, nc) = if left { (0, rd) } else { (rd, res) };
        m.block(r0, c0, nr, nc)
    }

    /// Tests every `P̃_ij` at once. The row vectors `B_{z1}[i,:]·L_u` span a
    /// space of dimension at most `r·d`; a breadth-first basis of it, tagged
    /// with words, decides vanishing and yields a shortest nonzero word.
    pub fn test(&self) -> PitOutcome {
        let (rd, res, nz) = (self.rd(), self.residual(), self.nvars());
        let c0 = self.blk(self.pencil.constant(), false, false);
        let mut lines = vec![format!(
            "s={} n={} r={} d={} rho={} point={},{}",
            self.s, self.n, self.r, self.d, self.rho, self.point.0, self.point.1
        )];
        for i in 0..res {
            for j in 0..res {
                if !c0.get(i, j).is_zero() {
                    return PitOutcome::Nonzero(Hit { i, j, word: vec![] });
                }
            }
        }
        for z in 0..nz {
            let c = self.blk(self.pencil.coeff(z), false, false);
            for i in 0..res {
                for j in 0..res {
                    if !c.get(i, j).is_zero() {
                        return PitOutcome::Nonzero(Hit { i, j, word: vec![z] });
                    }
                }
            }
        }
        lines.push("constant and linear parts vanish".into());
        if rd == 0 {
            return PitOutcome::Zero(Transcript { lines });
        }
        let lz: Vec<Mat<CycloNumber>> = (0..nz).map(|z| self.blk(self.pencil.coeff(z), true, true).neg()).collect();
        let az: Vec<Mat<CycloNumber>> = (0..nz).map(|z| self.blk(self.pencil.coeff(z), true, false)).collect();
        let mut ech = Echelon::new();
        let mut basis: Vec<(usize, Vec<usize>, Vec<CycloNumber>)> = Vec::new();
        let mut level = Vec::new();
        for z1 in 0..nz {
            let bz = self.blk(self.pencil.coeff(z1), false, true);
            for i in 0..res {
                let v = bz.row(i).to_vec();
                if ech.insert(&v) {
                    basis.push((i, vec![z1], v));
                    level.push(basis.len() - 1);
                }
            }
        }
        while !level.is_empty() {
            let mut best: Option<Hit> = None;
            for &b in &level {
                let (i, word, v) = &basis[b];
                for (z2, a) in az.iter().enumerate() {
                    let row = Mat::vec_mul(v, a);
                    if let Some(j) = row.iter().position(|x| !x.is_zero()) {
                        let mut w = word.clone();
                        w.push(z2);
                        let cand = Hit { i: *i, j, word: w };
                        if best.as_ref().is_none_or(|h| (&cand.word, cand.i, cand.j) < (&h.word, h.i, h.j)) {
                            best = Some(cand);
                        }
                    }
                }
            }
            if let Some(h) = best {
                return PitOutcome::Nonzero(h);
            }
            for &b in &level {
                lines.push(format!("{}:{:?}", basis[b].0, basis[b].1));
            }
            let mut next = Vec::new();
            for b in level {
                for (z, l) in lz.iter().enumerate() {
                    let v = Mat::vec_mul(&basis[b].2, l);
                    if ech.insert(&v) {
                        let mut w = basis[b].1.clone();
                        w.push(z);
                        basis.push((basis[b].0, w, v));
                        next.push(basis.len() - 1);
                    }
                }
            }
            level = next;
        }
        lines.push(format!("basis dimension {}", basis.len()));
        PitOutcome::Zero(Transcript { lines })
    }

    /// `P̃_ij` as an ABP of width `r·d + 1` with `r·d + 1` layers; the extra
    /// lane carries the already completed part of the sum.
    pub fn truncated_abp(&self, i: usize, j: usize) -> Result<Abp<CycloNumber>> {
        let (rd, res, nz) = (self.rd(), self.residual(), self.nvars());
        if i >= res || j >= res {
            return Err(Error::Params(format!("({i}, {j}) is outside the residual block of size {res}")));
        }
        let vars = self.pencil.vars().to_vec();
        let z = self.shift.zero_elem().clone();
        let (ri, cj) = (rd + i, rd + j);
        type Parts = (Mat<CycloNumber>, Vec<Mat<CycloNumber>>);
        let mats = |f: &dyn Fn(&Mat<CycloNumber>, bool) -> Mat<CycloNumber>| -> Parts {
            (f(self.pencil.constant(), true), (0..nz).map(|k| f(self.pencil.coeff(k), false)).collect())
        };
        if rd == 0 {
            let (a0, a) = mats(&|m, _| Mat::filled(1, 1, m.get(ri, cj), &z));
            return Abp::new(vars.clone(), vec![LinearPencil::new(vars, a0, a)?]);
        }
        let one = z.one_like();
        // first layer [−B_i, C_ij]
        let first = mats(&|m, _| {
            Mat::from_fn(1, rd + 1, &z, |_, c| if c < rd { m.get(ri, c).neg() } else { m.get(ri, cj).clone() })
        });
        // middle [[L, A_j], [0, 1]] with L = I − (top-left block)
        let middle = mats(&|m, is_const| {
            Mat::from_fn(rd + 1, rd + 1, &z, |a, b| match (a < rd, b < rd) {
                (true, true) => {
                    let x = m.get(a, b).neg();
                    if is_const && a == b {
                        x.add(&one)
                    } else {
                        x
                    }
                }
                (true, false) => m.get(a, cj).clone(),
                (false, true) => z.clone(),
                (false, false) => {
                    if is_const {
                        one.clone()
                    } else {
                        z.clone()
                    }
                }
            })
        });
        let last = mats(&|m, is_const| {
            Mat::from_fn(rd + 1, 1, &z, |a, _| {
                if a < rd {
                    m.get(a, cj).clone()
                } else if is_const {
                    one.clone()
                } else {
                    z.clone()
                }
            })
        });
        let mut layers = vec![LinearPencil::new(vars.clone(), first.0, first.1)?];
        for _ in 1..rd {
            layers.push(LinearPencil::new(vars.clone(), middle.0.clone(), middle.1.clone())?);
        }
        layers.push(LinearPencil::new(vars.clone(), last.0, last.1)?);
        Abp::new(vars, layers)
    }
}

/// `P̃_ij` for the given witness, as an ABP over the blow-up variables.
pub fn schur_truncated_abp(t: &Pencil, w: &Witness, i: usize, j: usize) -> Result<Abp<CycloNumber>> {
    SchurData::from_witness(t, w)?.truncated_abp(i, j)
}

/// True iff the witness rank `r` is the noncommutative rank of `t`.
pub fn max_rank_test(t: &Pencil, w: &Witness) -> Result<bool> {
    if w.r >= t.size() {
        return Ok(true);
    }
    Ok(matches!(SchurData::from_witness(t, w)?.test(), PitOutcome::Zero(_)))
}
