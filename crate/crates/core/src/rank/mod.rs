//! The rank algorithm: witnesses, the maximum-rank test, rank increment,
//! rounding into division algebras and dimension control.

mod cert;
mod driver;
mod increment;
mod rounding;
mod schur;
mod witness;

pub use cert::{verify_upper_bound, UpperBound};
pub use driver::{ncrank, ncrank_with, NcRank, Params, RoundCheck, RoundInfo};
pub use increment::{dprime, rank_increment, Increment};
pub use rounding::{reduce_witness, round_witness, Rounded};
pub use schur::{max_rank_test, schur_truncated_abp, specialization_points, Hit, PitOutcome, SchurData, Transcript};
pub use witness::{cyclo_image_rank, entry_stats, exact_rank, image_rank, verify_witness, EntryStats, Witness};
