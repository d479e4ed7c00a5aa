//! Hybridization thermodynamics of Brownian-oscillator impurities coupled to
//! Gaussian environments.
//!
//! The free energy of hybridization is computed from two spectra: `φ(ω)` on
//! the real axis and `ϑ(ϖ)` on the imaginary (Laplace) axis. Closed forms for
//! the bosonic and fermionic Brownian oscillators live in [`bosonic`] and
//! [`fermionic`]; [`entangle`] rebuilds the spectra from sampled, matrix-valued
//! response data; [`thermo`] turns either into `A`, `U` and `S`.

pub mod bath;
pub mod bosonic;
pub mod entangle;
pub mod error;
pub mod fermionic;
pub mod quad;
pub mod special;
pub mod statfun;
pub mod thermo;

pub use bath::{BathModel, ComplexValue};
pub use bosonic::BosonicBO;
pub use error::{Error, Result};
pub use fermionic::FermionicBO;
pub use statfun::{MatsubaraGrid, Statistics};
pub use thermo::{Side, SpectralProvider, SumConfig, Tail, ThermoPoint};
