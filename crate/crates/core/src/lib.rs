//! Numerical laboratory for entire functions f(z) = Sum a_n z^n / n! with
//! unimodular coefficient phases (and the order-rho generalization):
//! certified evaluation, argument-principle zero location, growth and
//! indicator diagnostics, pantograph and Hadamard-composition identities.

pub mod coeffs;
pub mod error;
pub mod eval;
pub mod growth;
pub mod hp;
pub mod panto;
pub mod verify;
pub mod zeros;

pub use coeffs::{CoefficientSequence, ModulusKind, ModulusRule, PhaseKind, PhaseRule, SequenceSpec};
pub use error::{Error, Result};
pub use eval::{EvalResult, GridPoint, GridSpec};
pub use hp::{Complex, Float};
pub use growth::{HRef, IndicatorProfile, PitReport, RatioSeries};
pub use panto::{ContourSpec, TrigSum};
pub use verify::{CriterionOutcome, Scale};
pub use zeros::{SectorBox, Zero, ZeroSet};
