//! Exact computation of the noncommutative rank of linear matrix pencils
//! over the rationals, with witness certificates for the lower bound and
//! identity-testing certificates for the upper bound.

pub mod abp;
pub mod division;
pub mod error;
pub mod field;
pub mod io;
pub mod linalg;
pub mod oracle;
pub mod pencil;
pub mod rank;
pub mod scalar;

pub use error::{Error, Result};
pub use field::{Field, Rational};
