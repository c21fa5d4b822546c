//! The scale calculus: parameter curve, small quantity, and the
//! move-right / move-left scale maps.
//!
//! The move-right map R grows so fast that it overflows f64 for n >= 8, so
//! the predicates that consume it work with log-space identities instead:
//! ln R(n) = (ln n)^9, delta(R(n)) = e^{-3 sqrt(ln ln n)},
//! L(R(n)) = (ln n)^{4.5}.

use crate::error::{invalid, Result};

/// Parameter curve phi(t) = 1 - 2^{-e^t}, a strictly increasing bijection
/// from the reals onto (0,1) with phi(0) = 1/2.
pub fn phi(t: f64) -> f64 {
    -f64::exp_m1(-t.exp() * std::f64::consts::LN_2)
}

/// Inverse of the parameter curve on (0,1).
pub fn phi_inv(p: f64) -> Result<f64> {
    if !(0.0 < p && p < 1.0) {
        return Err(invalid("p", format!("phi_inv needs p in (0,1), got {p}")));
    }
    Ok((-f64::ln_1p(-p) / std::f64::consts::LN_2).ln())
}

/// The small quantity delta(n) = e^{-sqrt(ln ln n)}; needs n > e so the
/// inner logarithm is positive.
pub fn delta_scale(n: f64) -> Result<f64> {
    Ok((-loglog(n)?.sqrt()).exp())
}

/// Move-right map R(n) = e^{(ln n)^9}. Overflows to infinity for n >= 8;
/// use [`ln_r_scale`] when the magnitude matters.
pub fn r_scale(n: f64) -> Result<f64> {
    Ok(ln_r_scale(n)?.exp())
}

/// ln R(n) = (ln n)^9, finite at every feasible scale.
pub fn ln_r_scale(n: f64) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(invalid("n", format!("move-right map needs n >= 1, got {n}")));
    }
    Ok(n.ln().powi(9))
}

/// Move-left map L(n) = (ln n)^{1/2}.
pub fn l_scale(n: f64) -> Result<f64> {
    if !(n >= 1.0) {
        return Err(invalid("n", format!("move-left map needs n >= 1, got {n}")));
    }
    Ok(n.ln().sqrt())
}

/// delta(R(n)) evaluated through the logs: ln ln R(n) = 9 ln ln n, so
/// delta(R(n)) = e^{-3 sqrt(ln ln n)} without ever forming R(n).
pub fn delta_scale_of_r(n: f64) -> Result<f64> {
    Ok((-3.0 * loglog(n)?.sqrt()).exp())
}

/// ln ln n, requiring n > e so the result is positive.
fn loglog(n: f64) -> Result<f64> {
    if !(n > std::f64::consts::E) {
        return Err(invalid("n", format!("scale must exceed e, got {n}")));
    }
    Ok(n.ln().ln())
}
