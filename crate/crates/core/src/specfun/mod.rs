//! Special functions: gamma, Kummer and Whittaker functions, incomplete gamma,
//! Bessel `J` and `I`, and the Maass-Poincare kernels.

mod bessel;
mod dd;
mod gamma;
mod hyper;
mod incgamma;
mod kernels;
mod quad;
mod whittaker;

pub use bessel::{bessel_i, bessel_i_both_routes, bessel_j, bessel_j_both_routes, BESSEL_SWITCH};
pub use gamma::{gamma, ln_gamma, rgamma};
pub use hyper::{kummer_m, kummer_u};
pub use incgamma::{beta_zagier, inc_gamma_upper, inc_gamma_upper_negative};
pub use kernels::{minus_one_pow, script_m, script_m_generic, script_w, script_w_generic};
pub use quad::integrate_exp_decay;
pub use whittaker::{whittaker_m, whittaker_w};
