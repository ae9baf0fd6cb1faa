//! Truncated models of pro-p group constructions.
//!
//! The crate is organised bottom-up:
//!
//! * [`padic`]: residues modulo `p^N` standing in for p-adic integers.
//! * [`ncseries`]: free nilpotent pro-p groups realised as truncated
//!   noncommutative power series (Magnus embedding), with the diagonal
//!   `δ`/`γ` actions.
//! * [`idempotent`]: the non-abelian eigenspace operator `ε_m`, its stable
//!   limit and the recursive `g_m` / `σ_m` towers.
//! * [`freeness`]: derived generator towers `x_{i,j}` and leading-form
//!   freeness checks.
//! * [`freelie`]: the free graded Lie algebra on odd generators `s_3, s_5, …`
//!   in the Lyndon basis.
//! * [`bernoulli`]: Bernoulli residues, irregular pairs, valuation bounds.
//! * [`experiments`]: seeded batch sweeps, evaluated through [`Exec`].

pub mod bernoulli;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod freelie;
pub mod freeness;
pub mod idempotent;
pub mod ncseries;
pub mod padic;

pub use error::{Error, Result};
pub use exec::Exec;
pub use ncseries::{Engine, EngineConfig, GroupElement, LeadingForm, NcSeries, Word};
pub use padic::{PadicInt, Valuation};
