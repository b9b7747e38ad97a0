//! Twisted convolution algebras of Orlicz-integrable functions on discrete
//! groups: Young functions, weights, cocycles, and numerical checks of the
//! inequalities that make `(ℓ^Φ(G, ω), ⋆_Ω)` a Banach algebra.

pub mod cocycles;
pub mod error;
pub mod groups;
mod optimize;
pub mod orlicz;
pub mod suite;
pub mod trials;
pub mod twisted;
pub mod weights;
pub mod young;

pub use error::{Error, Result};
pub use groups::{elem, Elem, Group};
pub use weights::Weight;
pub use young::{YoungFunction, YoungPair};
