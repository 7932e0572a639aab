//! Spectral algorithms for approximately maximizing |f(x)| over the unit
//! sphere, for homogeneous polynomials f.
//!
//! The library provides:
//!
//! * sparse multi-index polynomials and their SoS-symmetric matrix
//!   representations ([`poly`]),
//! * the multilinear decomposition f = Σ_α x^{2α}·G_{2α}(x), folded
//!   polynomials and quadratic folding ([`decompose`]),
//! * dense eigensolves, Schatten norms and closed-form upper estimates for
//!   multilinear polynomials ([`spectral`]),
//! * deterministic candidate-set rounding algorithms ([`rounding`]),
//! * a projected-gradient brute-force oracle for ‖f‖₂ ([`oracle`]),
//! * the 4-clique moment-matrix certificate on random graphs
//!   ([`lowerbound`]),
//! * the symmetrized Kronecker power machinery and its exact combinatorial
//!   decomposition ([`tetris`]).

pub mod capacity;
pub mod coeff;
pub mod decompose;
pub mod error;
pub mod io;
pub mod lowerbound;
pub mod oracle;
pub mod poly;
pub mod rounding;
pub mod spectral;
pub mod tetris;

pub use capacity::Capacity;
pub use coeff::Coeff;
pub use error::{Error, Result};
pub use poly::{HomogPoly, MultiIndex, SymMatRep};
