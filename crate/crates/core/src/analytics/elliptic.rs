//! Normalized complete elliptic integral of the first kind.
//!
//! ```text
//!            1  π        du
//! K(k)  =  ─── ∫   ─────────────────   =  1 + k²/4 + 9k⁴/64 + …
//!           π  0   √(1 − k² sin² u)
//! ```
//!
//! This is `(2/π)` times the textbook `K(k)`, so `K(0) = 1`. Evaluated through
//! the arithmetic–geometric mean, `K(k) = 1 / AGM(1, √(1 − k²))`.

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-15;
const AGM_MAX_ITER: usize = 64;

pub fn elliptic_k_norm(k: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&k) {
        return Err(Error::Domain(format!(
            "elliptic modulus must satisfy 0 <= k < 1, got {k}"
        )));
    }
    Ok(1.0 / agm(1.0, (1.0 - k * k).sqrt()))
}

/// Arithmetic–geometric mean of two positive numbers.
pub fn agm(mut a: f64, mut g: f64) -> f64 {
    for _ in 0..AGM_MAX_ITER {
        if (a - g).abs() < AGM_TOL {
            break;
        }
        let next = 0.5 * (a + g);
        g = (a * g).sqrt();
        a = next;
    }
    0.5 * (a + g)
}
