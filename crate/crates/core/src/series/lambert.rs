use std::f64::consts::E;

use crate::error::{Error, Result};

/// Principal branch `W_0` of the Lambert W function on `[-1/e, 0]`.
///
/// Returns the `w ∈ [-1, 0]` with `w·e^w = x`. Halley iteration started from
/// the branch-point expansion near `-1/e` and from `x` elsewhere.
pub fn lambert_w0(x: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if !x.is_finite() || x > 0.0 || x < branch - 4.0 * f64::EPSILON {
        return Err(Error::Domain(format!("lambert_w0 needs x in [-1/e, 0], got {x}")));
    }
    if x == 0.0 {
        return Ok(0.0);
    }
    let q = (2.0 * (E * x + 1.0)).max(0.0).sqrt();
    if q == 0.0 {
        return Ok(-1.0);
    }
    let mut w = if q < 0.5 {
        -1.0 + q - q * q / 3.0 + 11.0 / 72.0 * q * q * q
    } else {
        // ln(1 + x) tracks W_0 closely on (-0.3, 0].
        x.ln_1p().max(-0.9)
    };
    for _ in 0..64 {
        let ew = w.exp();
        let f = w * ew - x;
        if f == 0.0 {
            break;
        }
        let wp1 = w + 1.0;
        if wp1 == 0.0 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        let done = (next - w).abs() <= 4.0 * f64::EPSILON * (1.0 + next.abs());
        w = next.clamp(-1.0, 0.0);
        if done {
            break;
        }
    }
    Ok(w)
}
