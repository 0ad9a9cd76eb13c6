//! Special functions, quadrature and transform inversion.

pub mod inversion;
pub mod quadrature;
pub mod special;

pub use inversion::{cf_to_cdf, DEFAULT_REL_TOL};
pub use quadrature::{
    gauss_laguerre, gauss_legendre, integrate, integrate_semi_infinite, integrate_semi_infinite_scaled, LogGrid,
    QuadValue, Quadrature, QuadratureRule, Tolerance,
};
pub use special::{bessel_k, bessel_k_scaled, gamma_p, gamma_q, ln_gamma, whittaker_w};
