//! Monte Carlo prices and Malliavin-weight Greeks for European and Asian
//! options under an exponential Lévy jump-diffusion.

pub mod accumulator;
pub mod error;
pub mod estimator;
pub mod functionals;
pub mod job;
pub mod model;
pub mod oracles;
pub mod payoffs;
pub mod simulate;
pub mod stream;
pub mod weights;
