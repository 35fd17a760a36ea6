//! Exact computations with filtrations of monomial ideals in a polynomial ring
//! localized at its maximal monomial ideal.
//!
//! The crate is organised bottom-up:
//!
//! * [`ring`]: monomial ideals, their lattice arithmetic and finite lengths.
//! * [`valuation`]: weight valuations and certified `ceil(n * a)` for
//!   rational and irrational multipliers.
//! * [`filtration`]: graded families `n -> I_n` and their truncations and
//!   localizations.
//! * [`asymptotics`]: length sequences, epsilon multiplicity estimates and
//!   Samuel-type multiplicities.
//! * [`diagnostics`]: property `A(c)`, analytic spread certificates and a
//!   lattice-rank bound.
//! * [`fixtures`]: named filtrations shared by tests and tools.
//! * [`newton`]: Newton polyhedra, integral closures and comparison of the
//!   integral closures of Rees algebras.

pub mod asymptotics;
pub mod diagnostics;
pub mod error;
pub mod filtration;
pub mod fixtures;
pub mod newton;
pub mod rational;
pub mod ring;
pub mod valuation;

pub use error::{Error, Result};
pub use filtration::{Filtration, FiltrationSpec};
pub use ring::{Exponent, Length, MonomialIdeal, RingContext};
pub use valuation::{ExactScalar, MonomialValuation};
