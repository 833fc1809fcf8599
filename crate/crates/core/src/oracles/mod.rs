//! Independent reference values: closed-form Black–Scholes, the Merton
//! jump-diffusion series and bump-and-revalue finite differences.

pub mod black_scholes;
pub mod finite_difference;
pub mod merton;

pub use black_scholes::{bs_price, bs_price_and_greeks, BsGreeks};
pub use finite_difference::{fd_greek, BumpParameter, FdSpec};
pub use merton::merton_price;
