use crate::error::{Error, Result};
use crate::pencil::Pencil;
use crate::scalar::FieldScalar;

use super::cert::UpperBound;
use super::increment::rank_increment;
use super::rounding::{reduce_witness, round_witness, Rounded};
use super::schur::{PitOutcome, SchurData};
use super::witness::Witness;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Params {
    /// Use the automaton dimension `max(2rd, rd + 2, 1)` instead of the
    /// shortest that fits the word.
    pub wide_dprime: bool,
    /// Keep shrinking the witness below `r + 1` while rank allows.
    pub shrink: bool,
}

impl Default for Params {
    fn default() -> Self {
        Params { wide_dprime: false, shrink: true }
    }
}

/// One rounding step as seen from outside: dimension, input bound and the
/// certified rank and block rank of the output.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundCheck {
    pub ell: usize,
    pub r_in: usize,
    pub rank: usize,
    pub d_rank: usize,
}

impl RoundCheck {
    fn of(r_in: usize, x: &Rounded) -> Self {
        RoundCheck { ell: x.ell(), r_in, rank: x.rank, d_rank: x.drank.r }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoundInfo {
    /// Witness bound and dimension entering the round.
    pub r: usize,
    pub d: usize,
    pub dprime: usize,
    pub t0: i64,
    /// Dimension of the rounded tuple, the first division algebra index.
    pub ell: usize,
    pub word_len: usize,
    pub r_new: usize,
    pub d_new: usize,
    pub checks: Vec<RoundCheck>,
}

#[derive(Clone, Debug)]
pub struct NcRank {
    pub r: usize,
    pub witness: Witness,
    pub certificate: UpperBound,
    pub rounds: Vec<RoundInfo>,
}

pub fn ncrank(t: &Pencil) -> Result<NcRank> {
    ncrank_with(t, &Params::default(), &mut |_| {})
}

/// Main loop: test maximality, otherwise increase the rank with an automaton
/// substitution, round into a division algebra and reduce the dimension.
pub fn ncrank_with(t: &Pencil, params: &Params, on_round: &mut dyn FnMut(&RoundInfo)) -> Result<NcRank> {
    if t.rows() != t.cols() {
        return Err(Error::Params(format!("pencil is {}x{}, not square", t.rows(), t.cols())));
    }
    let s = t.size();
    let mut w = Witness::initial(t);
    let mut rounds = Vec::new();
    loop {
        let sd = SchurData::from_witness(t, &w)?;
        let hit = match sd.test() {
            PitOutcome::Zero(tr) => {
                let certificate = UpperBound::from_schur(&sd, &tr);
                return Ok(NcRank { r: w.r, witness: w, certificate, rounds });
            }
            PitOutcome::Nonzero(h) => h,
        };
        if rounds.len() >= s {
            return Err(Error::Invariant(format!("more than {s} rounds")));
        }
        let inc = rank_increment(t, &sd, &hit, params.wide_dprime)?;
        let n = inc.tuple.zero_elem().index();
        let p = inc.tuple.map(&FieldScalar::zero(n), |c| FieldScalar::from_cyclo(c.clone()));
        let rounded = round_witness(t, &p, w.r)?;
        if rounded.r <= w.r {
            return Err(Error::Invariant(format!("rounding did not raise the rank above {}", w.r)));
        }
        let mut checks = vec![RoundCheck::of(w.r, &rounded)];
        let next = Witness { r: rounded.r, tuple: rounded.tuple };
        let (next, chops) = reduce_witness(t, next, params.shrink)?;
        let mut r_in = rounded.r;
        for c in &chops {
            checks.push(RoundCheck::of(r_in - 1, c));
            r_in = c.r;
        }
        let info = RoundInfo {
            r: w.r,
            d: w.dim(),
            dprime: inc.dprime,
            t0: inc.t0,
            ell: p.dim(),
            word_len: inc.word.len(),
            r_new: next.r,
            d_new: next.dim(),
            checks,
        };
        on_round(&info);
        rounds.push(info);
        w = next;
    }
}
