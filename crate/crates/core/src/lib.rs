//! Local invariants of rational quadratic forms, certified anisotropic
//! subforms, collar volume bounds, and replayable exclusion arguments for
//! the orientable integral congruence two hyperbolic 4-manifolds.

pub mod census;
pub mod collar;
pub mod equiv;
pub mod error;
pub mod json;
pub mod matrix;
pub mod oracle;
pub mod padic;
pub mod primes;
pub mod qforms;
pub mod subforms;

pub use error::{Error, Result};
pub use padic::{Place, Sign};
