//! Closed-form costs and ratios, numeric optimization over their
//! parameters, and verification of the resulting constants.

pub mod det_lb;
pub mod makespan;
pub mod optimize;
pub mod random;
pub mod uniform;
pub mod verify;

pub use optimize::NumericError;
