//! Winning probabilities of local simultaneous state discrimination (LSSD) games.
//!
//! An LSSD game is a non-local game in which a referee draws `(x, a_1, ..., a_m)`
//! from a joint distribution, hands input `a_i` to player `i`, and the players win
//! when every one of them guesses the hidden value `x`. This crate computes and
//! bounds the optimal winning probability for the three standard resource classes:
//!
//! - **classical** — deterministic local guessing functions ([`classical`]),
//! - **no-signalling** — joint conditional output distributions whose marginals
//!   cannot leak the other parties' inputs ([`nosig`], [`polytope`]),
//! - **quantum** — upper-bounded through a moment-matrix semidefinite relaxation
//!   ([`npa`]).
//!
//! The exact layer (linear programming, vertex enumeration, gap certification)
//! runs on arbitrary-precision rationals so that optimality claims are
//! certificates rather than floating-point artifacts. Sweeps and the asymptotic
//! analysis ([`exponent`]) use `f64`.
//!
//! Strategy families built from error-correcting codes and list-decoding schemes
//! live in [`codes`].

pub mod classical;
pub mod codes;
pub mod error;
pub mod exponent;
pub mod game;
pub mod linalg;
pub mod lp;
pub mod nosig;
pub mod npa;
pub mod polytope;
pub mod scalar;

pub use classical::DeterministicStrategy;
pub use error::{Error, Result};
pub use game::{Channel, GameTable};
pub use lp::{LinearProgram, LpSolution, LpStatus, Sense};
pub use nosig::Behavior;
pub use npa::{MomentSdp, MonomialIndex, SdpBound};
pub use polytope::{HRep, VRep};
pub use scalar::{Rational, Scalar};
