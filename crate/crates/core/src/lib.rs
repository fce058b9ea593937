//! Exact computation of limit closures of parameter sequences in localized
//! affine rings, together with the structural invariants built from them.

pub mod detmaps;
pub mod groebner;
pub mod hilbert;
pub mod ideal;
pub mod limclose;
pub mod local;
pub mod poly;
pub mod rational;
pub mod structure;

pub use poly::{MonomialOrder, PolyRing, Polynomial, RingRef};
pub use rational::Rational;
