//! Periods and flip times of the target-spin motion.
//!
//! Without anisotropy the target precesses rigidly and every period is
//! `2π/|h|`. With anisotropy the longitudinal coordinate obeys the first
//! integral `ż² = P(z)`, a quartic with a turning point at the starting pole;
//! the period is twice the time between consecutive turning points.

mod elliptic;
mod gauss;

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

pub use elliptic::{agm, elliptic_k_norm};
pub use gauss::GaussLegendre;

use crate::dynamics::CollinearModel;
use crate::error::{Error, Result};
use crate::spin::ControlConfig;

/// Grid resolution of the turning-point search over `[-1, 1]`.
const ROOT_GRID: usize = 10_000;
const ROOT_TOL: f64 = 1e-14;
const GL_NODES: usize = 32;
const GL_PANELS: usize = 16;

/// Precession periods of the target for each control configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodSet {
    pub t00: f64,
    pub t01: f64,
    pub t10: f64,
    pub t11: f64,
}

impl PeriodSet {
    pub fn get(&self, config: ControlConfig) -> f64 {
        match config {
            ControlConfig::C00 => self.t00,
            ControlConfig::C01 => self.t01,
            ControlConfig::C10 => self.t10,
            ControlConfig::C11 => self.t11,
        }
    }
}

/// Rigid-precession periods for `a = 0`, `h_∥ = −2`.
pub fn periods_collinear_a0(h_perp: f64) -> Result<PeriodSet> {
    if !(h_perp.is_finite() && h_perp > 0.0) {
        return Err(Error::Domain(format!("h_perp must be positive, got {h_perp}")));
    }
    let h2 = h_perp * h_perp;
    let t01 = 2.0 * PI / (h2 + 4.0).sqrt();
    Ok(PeriodSet {
        t00: 2.0 * PI / (h2 + 16.0).sqrt(),
        t01,
        t10: t01,
        t11: 2.0 * PI / h_perp,
    })
}

/// Time for a pole-to-pole flip under a transverse drive `h_drive` with anisotropy `a`:
/// `(π / h) · K(a / h)`.
pub fn half_period_flip(h_drive: f64, a: f64) -> Result<f64> {
    if !(h_drive.is_finite() && h_drive > 0.0) {
        return Err(Error::Domain(format!("drive field must be positive, got {h_drive}")));
    }
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::Domain(format!("anisotropy must be non-negative, got {a}")));
    }
    if a >= h_drive {
        return Err(Error::Confinement { h: h_drive, a });
    }
    Ok(PI / h_drive * elliptic_k_norm(a / h_drive)?)
}

/// Quartic `P(z) = Σ cᵢ zⁱ` with `ż² = P(z)` for the collinear model started at a pole.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuarticFirstIntegral {
    /// `c0..c4`
    pub coeffs: [f64; 5],
    pub h_tilde: f64,
    /// `r± = a ± h̃`
    pub r: f64,
    /// `e± = h_⊥² + h̃² − 2a r±`
    pub e: f64,
    pub start_pole: f64,
}

impl QuarticFirstIntegral {
    pub fn eval(&self, z: f64) -> f64 {
        horner(&self.coeffs, z)
    }
}

/// Builds the quartic first integral for `config`, starting from `start_pole = ±1`.
pub fn quartic_first_integral(
    model: &CollinearModel,
    config: ControlConfig,
    start_pole: f64,
) -> Result<QuarticFirstIntegral> {
    let pole = pole_sign(start_pole)?;
    let a = model.a;
    let hp = model.h_perp;
    let ht = model.h_tilde(config);
    let r = a + pole * ht;
    let e = hp * hp + ht * ht - 2.0 * a * r;
    Ok(QuarticFirstIntegral {
        coeffs: [hp * hp - r * r, 2.0 * ht * r, -e, -2.0 * a * ht, -a * a],
        h_tilde: ht,
        r,
        e,
        start_pole: pole,
    })
}

/// Outcome of [`period_numeric`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodInfo {
    pub period: f64,
    /// True when the orbit reaches the opposite pole.
    pub flips: bool,
    /// The turning point opposite the start pole.
    pub turning_point: f64,
}

/// Period of the collinear orbit started at a pole, from `t = ∫ dz / √P(z)`.
///
/// The quartic is deflated by the two turning points `z₀` (start pole) and `z*`
/// so the inverse-square-root endpoint singularities are removed exactly by
/// `z = z_mid + z_half sin u`; the remaining smooth integrand is handled by
/// composite Gauss–Legendre.
pub fn period_numeric(model: &CollinearModel, config: ControlConfig, start_pole: f64) -> Result<PeriodInfo> {
    model.validate()?;
    let q = quartic_first_integral(model, config, start_pole)?;
    let z0 = q.start_pole;
    if model.h_perp == 0.0 {
        return Err(Error::Domain(
            "h_perp = 0 leaves the start pole at equilibrium; no orbit".into(),
        ));
    }

    // P(z) = (z − z0) R(z); R(z0) = P'(z0) = −2 h_⊥² z0 ≠ 0.
    let (cubic, _) = deflate(&q.coeffs, z0);
    let z_star = first_root_from(&cubic, z0)?;
    let flips = (z_star + z0).abs() <= 1e-9;

    // P(z) = (z − z0)(z − z*) Q(z), and Q < 0 strictly between the turning points.
    let (quad, _) = deflate(&cubic, z_star);
    let g = |z: f64| -horner(&quad, z);
    let scale = q.coeffs.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    for zt in [z0, z_star] {
        if g(zt) <= 1e-10 * scale {
            return Err(Error::Separatrix { z: zt });
        }
    }

    let z_mid = 0.5 * (z0 + z_star);
    let z_half = 0.5 * (z0 - z_star).abs();
    let rule = GaussLegendre::new(GL_NODES);
    let half = rule.integrate(
        |u| 1.0 / g(z_mid + z_half * u.sin()).sqrt(),
        -FRAC_PI_2,
        FRAC_PI_2,
        GL_PANELS,
    );
    let period = 2.0 * half;
    if !period.is_finite() {
        return Err(Error::NoRoot(format!(
            "quadrature between turning points {z0} and {z_star} did not converge"
        )));
    }
    Ok(PeriodInfo {
        period,
        flips,
        turning_point: z_star,
    })
}

/// Periods for every configuration, started from `start_pole`.
pub fn periods_numeric(model: &CollinearModel, start_pole: f64) -> Result<PeriodSet> {
    let p = |c| period_numeric(model, c, start_pole).map(|i| i.period);
    Ok(PeriodSet {
        t00: p(ControlConfig::C00)?,
        t01: p(ControlConfig::C01)?,
        t10: p(ControlConfig::C10)?,
        t11: p(ControlConfig::C11)?,
    })
}

fn pole_sign(p: f64) -> Result<f64> {
    if p == 1.0 || p == -1.0 {
        Ok(p)
    } else {
        Err(Error::InvalidArgument(format!("start pole must be +1 or -1, got {p}")))
    }
}

/// Value of `Σ cᵢ zⁱ` (coefficients in ascending order).
fn horner(c: &[f64], z: f64) -> f64 {
    c.iter().rev().fold(0.0, |acc, &ci| acc * z + ci)
}

/// Synthetic division by `(z − root)`: returns ascending quotient coefficients and the remainder.
fn deflate(c: &[f64], root: f64) -> (Vec<f64>, f64) {
    let n = c.len() - 1;
    let mut quot = vec![0.0; n];
    let mut carry = c[n];
    for i in (0..n).rev() {
        quot[i] = carry;
        carry = c[i] + carry * root;
    }
    (quot, carry)
}

/// First root of `r` met when moving from `z0` toward `−z0`, bracketed on a
/// uniform grid and refined by bisection.
fn first_root_from(r: &[f64], z0: f64) -> Result<f64> {
    let f = |z: f64| horner(r, z);
    let f0 = f(z0);
    if f0 == 0.0 {
        return Err(Error::Separatrix { z: z0 });
    }
    let at = |i: usize| z0 - z0 * 2.0 * i as f64 / ROOT_GRID as f64;
    let mut prev = z0;
    for i in 1..=ROOT_GRID {
        let z = at(i);
        let v = f(z);
        if v == 0.0 {
            return Ok(z);
        }
        if v.signum() != f0.signum() {
            return Ok(bisect(&f, prev, z));
        }
        prev = z;
    }
    // The far pole is a root exactly when h̃ = 0; rounding can leave it a hair
    // on the starting side.
    let tail = f(-z0);
    let scale = r.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    if tail.abs() <= 1e-12 * scale.max(1.0) {
        return Ok(-z0);
    }
    Err(Error::NoRoot(format!(
        "no sign change of the deflated first integral on [-1, 1] (start pole {z0}, value at far pole {tail:e})"
    )))
}

fn bisect<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64) -> f64 {
    let f_lo = f(lo);
    for _ in 0..200 {
        if (hi - lo).abs() <= ROOT_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if fm.signum() == f_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}
