//! Graph-isomorphism laboratory for Erdős–Rényi random graphs.
//!
//! - [`mcis`]: exact maximum common induced subgraph search.
//! - [`sis`]: induced subgraph isomorphism (decision and counting).
//! - [`theory`]: closed-form threshold windows and the `phi(m, n)` sum.
//! - [`experiments`]: seeded, parallel Monte Carlo trials comparing the
//!   solvers against the predicted windows.

mod bits;
mod budget;
mod error;

pub mod dimacs;
pub mod experiments;
pub mod graph;
pub mod mcis;
pub mod rng;
pub mod sis;
pub mod theory;

pub use budget::{SearchBudget, Verdict};
pub use error::{Error, Result};
pub use graph::{gnp_sample, is_induced_isomorphism, rado_prefix, Graph};
pub use rng::Seed;

pub(crate) mod serde_millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        u64::deserialize(d).map(Duration::from_millis)
    }
}
