use crate::abp::Abp;
use crate::error::Result;
use crate::pencil::{MatTuple, Pencil};
use crate::scalar::CycloNumber;

use super::schur::{PitOutcome, SchurData, Transcript};

/// Evidence that `ncrank(T) ≤ r`: a shift of rank `r·d` at which every
/// truncated Schur entry `P̃_ij` is identically zero.
#[derive(Clone, Debug, PartialEq)]
pub struct UpperBound {
    pub r: usize,
    pub point: (i64, i64),
    pub shift: MatTuple<CycloNumber>,
    /// Residual index pairs, 0-based.
    pub pairs: Vec<(usize, usize)>,
    pub digest: String,
}

impl UpperBound {
    pub fn from_schur(sd: &SchurData, tr: &Transcript) -> Self {
        let res = sd.residual();
        UpperBound {
            r: sd.r,
            point: sd.point,
            shift: sd.shift.clone(),
            pairs: (0..res).flat_map(|i| (0..res).map(move |j| (i, j))).collect(),
            digest: tr.digest(),
        }
    }

    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    /// Recomputes the decomposition at the recorded shift.
    pub fn schur(&self, t: &Pencil) -> Result<SchurData> {
        SchurData::new(t, self.shift.clone(), self.r, self.point)
    }

    /// The residual programs `P̃_ij`, for independent zero testing.
    pub fn residual_abps(&self, t: &Pencil) -> Result<Vec<((usize, usize), Abp<CycloNumber>)>> {
        let sd = self.schur(t)?;
        self.pairs.iter().map(|&(i, j)| Ok(((i, j), sd.truncated_abp(i, j)?))).collect()
    }
}

/// Replays the zero test at the recorded shift and compares the transcript.
pub fn verify_upper_bound(t: &Pencil, c: &UpperBound) -> bool {
    let Ok(sd) = c.schur(t) else { return false };
    if sd.rho != sd.rd() && sd.r < sd.s {
        return false;
    }
    match sd.test() {
        PitOutcome::Zero(tr) => tr.digest() == c.digest && UpperBound::from_schur(&sd, &tr).pairs == c.pairs,
        PitOutcome::Nonzero(_) => false,
    }
}
