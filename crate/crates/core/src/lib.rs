//! Coxeter groups W(k), their Tits representation over Z[2cos π/k],
//! congruence quotients and the hyperbolic surfaces they tessellate.

pub mod coxeter;
pub mod interval;
pub mod numberfield;
pub mod tits;
pub mod congruence;
pub mod quotient;
pub mod surface;
pub mod asymptotics;
pub mod hypgeom;
pub(crate) mod serde_big;
