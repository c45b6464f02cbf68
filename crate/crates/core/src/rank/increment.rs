use crate::abp::automaton_tuple;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::rank;
use crate::pencil::{pencil_eval, unflatten_blowup, MatTuple, Pencil};
use crate::scalar::CycloNumber;

use super::schur::{Hit, SchurData};
use super::witness::{cyclo_image_rank, IMAGE_ATTEMPTS};

/// A tuple of dimension `d·d′` with `rank T(p′) > r·d·d′`.
#[derive(Clone, Debug)]
pub struct Increment {
    pub tuple: MatTuple<CycloNumber>,
    pub dprime: usize,
    pub t0: i64,
    pub word: Vec<usize>,
}

/// Automaton dimension for a nonzero word of length `len`. The default is the
/// smallest that works, `len + 1`; `wide` selects `max(2rd, rd + 2, 1)`.
pub fn dprime(len: usize, rd: usize, wide: bool) -> usize {
    if wide {
        (2 * rd).max(rd + 2).max(1).max(len + 1)
    } else {
        len + 1
    }
}

/// Substitutes `t·M` for the blow-up variables, `M` the automaton tuple of the
/// hit's word, and scans `t = 1, 2, …` until the rank exceeds `r·d·d′`.
pub fn rank_increment(t: &Pencil, sd: &SchurData, hit: &Hit, wide_dprime: bool) -> Result<Increment> {
    let (r, d) = (sd.r, sd.d);
    let dp = dprime(hit.word.len(), sd.rd(), wide_dprime);
    let z = sd.shift.zero_elem().clone();
    let aut = automaton_tuple(&hit.word, sd.nvars(), dp, &z)?;
    let q = unflatten_blowup(&aut, t.nvars(), d)?;
    let base = sd.shift.tensor_identity(dp, &z);
    let need = r * d * dp;
    let top = (2 * r * d * dp + 1) as i64;
    let at = |tt: i64| q.scale(&z.from_int(tt)).add(&base).expect("same shape");
    for tt in 1..=top {
        let p = at(tt);
        if cyclo_image_rank(t, &p, IMAGE_ATTEMPTS) > need {
            return Ok(Increment { tuple: p, dprime: dp, t0: tt, word: hit.word.clone() });
        }
    }
    for tt in 1..=top {
        let p = at(tt);
        if rank(&pencil_eval(t, &p)?) > need {
            return Ok(Increment { tuple: p, dprime: dp, t0: tt, word: hit.word.clone() });
        }
    }
    Err(Error::Exhausted(format!("no t in 1..={top} raises the rank above {need}")))
}
