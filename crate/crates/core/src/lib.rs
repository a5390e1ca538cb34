//! Combinatorial invariants of Hasse invariants on zip data: root data with
//! a Frobenius, Weyl cosets, the `zeta` endomorphism, Hasse numbers and
//! positivity certificates.

pub mod linalg;
pub mod positivity;
pub mod report;
pub mod root_datum;
pub mod weyl;
pub mod zip;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Linalg(#[from] linalg::LinalgError),
    #[error(transparent)]
    RootDatum(#[from] root_datum::RootDatumError),
    #[error(transparent)]
    Weyl(#[from] weyl::WeylError),
    #[error(transparent)]
    Zip(#[from] zip::ZipError),
    #[error(transparent)]
    Positivity(#[from] positivity::PositivityError),
    #[error(transparent)]
    Config(#[from] report::ConfigError),
}
