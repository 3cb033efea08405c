//! Boolean matrix factorization.
//!
//! Given a binary matrix `X` (with an optional mask `M` of observed
//! entries) and a rank `r`, find binary `W` (m x r) and `H` (r x n)
//! minimizing the number of observed entries where `X` and the Boolean
//! product `min(1, WH)` disagree.

pub mod bitcore;
pub mod dataio;
pub mod boolls;
pub mod combine;
pub mod budget;
pub mod error;
pub mod factorize;
pub mod rng;

pub use bitcore::{bool_product, masked_sq_error, BitVec, BoolMatrix};
pub use budget::Budget;
pub use error::{BmfError, Result};
pub use factorize::Factorization;
