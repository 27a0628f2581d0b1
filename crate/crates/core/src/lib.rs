//! Exact certification of the spectral coefficient inequalities behind a
//! family of Yamabe test functions.

pub mod beta;
pub mod certify;
pub mod error;
pub mod exact;
pub mod oracle;
pub mod spectral;

pub use error::Error;
