//! The scalar tower Q ⊂ Q(ζ_N) ⊂ Q(ζ_N)(y, w) and its modular images.

pub mod bipoly;
pub mod cyclo;
pub mod fscalar;
pub mod modp;
pub mod text;

pub use bipoly::BiPoly;
pub use cyclo::{lcm_u64, totient, CycloNumber};
pub use fscalar::FieldScalar;
pub use modp::{Fp, Image};
pub use text::{parse_cyclo, parse_rational, parse_scalar};
