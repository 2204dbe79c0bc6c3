//! Integrals over round spheres `S^D`.
//!
//! Closed forms for integrals of cartesian monomials (the Dirichlet integral)
//! and of products of powers of the polar radii `mu_j` of the orthogonal
//! 2-plane decomposition of `R^(D+1)`, evaluated exactly as `q * pi^(m/2)`
//! or in floating point. The rigidly rotating conformal-fluid integral of
//! `gamma^(D+1)` is provided in closed form and as its multinomial series.
//!
//! Every closed form has a brute-force counterpart in [`oracle`]: Monte Carlo
//! over uniformly sampled points and tensor Gauss-Legendre quadrature in
//! nested spherical angles.

pub mod cli;
pub mod error;
pub mod exact_arith;
pub mod fluid;
pub mod integrals;
pub mod oracle;

pub use error::{Error, Result};
pub use exact_arith::{gamma_half, pochhammer, HalfInteger, PiRational};
pub use fluid::{fluid_closed, fluid_series, gamma_factor, FluidClosed, FluidParams, SeriesResult};
pub use integrals::{
    dirichlet_abs, dirichlet_signed, mu_power_integral, reduction_rhs, sphere_volume,
    term_integral, Exponent, ExponentVector, IntegralValue, SphereDim,
};
pub use oracle::{
    mc_integrate, poly_integrate, quad_integrate, sample_uniform, MCConfig, OracleEstimate,
    SpherePoint,
};
