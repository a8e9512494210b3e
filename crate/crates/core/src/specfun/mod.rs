//! Real-argument special functions: Gamma and Bessel J of arbitrary real order.

mod bessel;
pub(crate) mod dd;
mod gamma;

pub(crate) use bessel::bessel_j_unbounded;
pub use bessel::{bessel_j, bessel_j_prime, RealOrder, MAX_ORDER, SERIES_LIMIT};
pub use gamma::gamma;
pub(crate) use gamma::{cos_pi, sin_pi};
