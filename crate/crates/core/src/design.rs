//! Gate-time design: commensurability solvers, the collinear parity
//! obstruction, pole stability under damping, and physical-unit estimates.
//!
//! A Toffoli gate at time `t_G` needs the `[11]` configuration to have made
//! an odd number of half turns while every other configuration has made a
//! whole number of turns: `t_G = (2n+1)/2 · T₁₁ = m · T₀₁ = l · T₀₀`.

use std::f64::consts::{FRAC_PI_2, PI};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytics::{elliptic_k_norm, period_numeric};
use crate::dynamics::CollinearModel;
use crate::error::{Error, Result};
use crate::spin::ControlConfig;

/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380649e-23;
/// Bohr magneton, J/T.
pub const MU_B: f64 = 9.2740100783e-24;
/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054571817e-34;

const PHI_BRACKET: (f64, f64) = (0.01, FRAC_PI_2 - 0.01);
const BISECTION_MAX_ITER: usize = 200;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    #[serde(rename = "collinear-a0")]
    CollinearA0,
    #[serde(rename = "collinear-aniso")]
    CollinearAniso,
    #[serde(rename = "noncollinear")]
    NonCollinear,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DesignSolution {
    pub scheme: Scheme,
    pub n: u32,
    pub m: u32,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub l: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub h_perp: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub phi: Option<f64>,
    #[serde(rename = "t_G")]
    pub t_gate: f64,
    pub residual: f64,
}

/// Approximate collinear gate without anisotropy (`h_∥ = −2`).
///
/// `h_⊥` is fixed so that `m` periods of `[01]` fit exactly into `2n+1` half
/// periods of `[11]`; `residual` is how far the matching count of `[00]`
/// periods is from an integer.
pub fn design_collinear_a0(n: u32, m: u32) -> Result<DesignSolution> {
    let odd = 2.0 * n as f64 + 1.0;
    if m == 0 || 2 * m as u64 <= 2 * n as u64 + 1 {
        return Err(Error::Infeasible(format!(
            "collinear a=0 design needs 2m > 2n+1 (n={n}, m={m})"
        )));
    }
    let ratio = 2.0 * m as f64 / odd;
    let h_perp = 2.0 / (ratio * ratio - 1.0).sqrt();
    let t_gate = odd * PI / h_perp;
    let l_real = 0.5 * odd * (1.0 + 16.0 / (h_perp * h_perp)).sqrt();
    let l = l_real.round();
    Ok(DesignSolution {
        scheme: Scheme::CollinearA0,
        n,
        m,
        l: Some(l as u32),
        h_perp: Some(h_perp),
        phi: None,
        t_gate,
        residual: (l_real - l).abs(),
    })
}

/// All feasible `(n, m)` designs up to the bounds, best first (residual, then `m`).
pub fn search_collinear_a0(n_max: u32, m_max: u32) -> Vec<DesignSolution> {
    let mut out: Vec<DesignSolution> = (0..=n_max)
        .into_par_iter()
        .flat_map_iter(|n| (1..=m_max).filter_map(move |m| design_collinear_a0(n, m).ok()))
        .collect();
    out.sort_by(|a, b| {
        a.residual
            .total_cmp(&b.residual)
            .then(a.m.cmp(&b.m))
            .then(a.n.cmp(&b.n))
    });
    out
}

/// Evidence that `16m² − 4l² = 3(2n+1)²` has no integer solutions.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParityCertificate {
    pub bound: u32,
    pub triples_checked: u64,
    pub solutions: Vec<(u32, u32, u32)>,
    /// The left side was divisible by 4 for every triple.
    pub lhs_always_even: bool,
    /// The right side was odd for every triple.
    pub rhs_always_odd: bool,
}

impl ParityCertificate {
    pub fn no_solution(&self) -> bool {
        self.solutions.is_empty()
    }
}

/// Solutions for one `n`, and the parity flags seen while scanning it.
type ScanRow = (Vec<(u32, u32, u32)>, bool, bool);

/// Exhaustive search over `0 ≤ n ≤ bound`, `1 ≤ m, l ≤ bound`.
pub fn parity_obstruction(bound: u32) -> Result<ParityCertificate> {
    if bound == 0 {
        return Err(Error::InvalidArgument("search bound must be at least 1".into()));
    }
    let b = bound as i64;
    let rows: Vec<ScanRow> = (0..=b)
        .into_par_iter()
        .map(|n| {
            let rhs = 3 * (2 * n + 1) * (2 * n + 1);
            let rhs_odd = rhs.rem_euclid(2) == 1;
            let mut sols = Vec::new();
            let mut lhs_even = true;
            for m in 1..=b {
                for l in 1..=b {
                    let lhs = 16 * m * m - 4 * l * l;
                    lhs_even &= lhs.rem_euclid(4) == 0;
                    if lhs == rhs {
                        sols.push((n as u32, m as u32, l as u32));
                    }
                }
            }
            (sols, lhs_even, rhs_odd)
        })
        .collect();
    let mut cert = ParityCertificate {
        bound,
        triples_checked: (b as u64 + 1) * (b as u64) * (b as u64),
        solutions: Vec::new(),
        lhs_always_even: true,
        rhs_always_odd: true,
    };
    for (sols, lhs_even, rhs_odd) in rows {
        cert.solutions.extend(sols);
        cert.lhs_always_even &= lhs_even;
        cert.rhs_always_odd &= rhs_odd;
    }
    Ok(cert)
}

/// Left side minus right side of the non-collinear angle condition
/// `(2n+1)/(4 cos φ) · K(a / 4cos φ) = m · K(a/2)`.
///
/// Returns `+∞` where the `[11]` drive `4 cos φ` no longer exceeds `a`.
pub fn angle_condition_residual(n: u32, m: u32, a: f64, phi: f64) -> Result<f64> {
    let t01_k = elliptic_k_norm(a / 2.0)?;
    let h11 = 4.0 * phi.cos();
    if a >= h11 {
        return Ok(f64::INFINITY);
    }
    let lhs = (2.0 * n as f64 + 1.0) / h11 * elliptic_k_norm(a / h11)?;
    Ok(lhs - m as f64 * t01_k)
}

/// Non-collinear gate: control axes at angle `2φ`, gate time `t_G = m · T₀₁`.
pub fn design_noncollinear(n: u32, m: u32, a: f64) -> Result<DesignSolution> {
    if !(a.is_finite() && a >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "anisotropy must be non-negative, got {a}"
        )));
    }
    if m == 0 || 2 * n as u64 + 1 >= 4 * m as u64 {
        return Err(Error::Infeasible(format!(
            "non-collinear design needs 2n+1 < 4m (n={n}, m={m})"
        )));
    }
    if a == 0.0 {
        let phi = ((2.0 * n as f64 + 1.0) / (4.0 * m as f64)).acos();
        return Ok(DesignSolution {
            scheme: Scheme::NonCollinear,
            n,
            m,
            l: None,
            h_perp: None,
            phi: Some(phi),
            t_gate: m as f64 * PI,
            residual: 0.0,
        });
    }
    if a >= 2.0 {
        return Err(Error::Infeasible(format!(
            "anisotropy a={a} confines the [01]/[10] orbits (needs a < 2)"
        )));
    }

    let f = |phi: f64| angle_condition_residual(n, m, a, phi);
    let (mut lo, mut hi) = PHI_BRACKET;
    let (f_lo, f_hi) = (f(lo)?, f(hi)?);
    if !(f_lo < 0.0 && f_hi > 0.0) {
        return Err(Error::Infeasible(format!(
            "angle condition has no root for phi in ({lo}, {hi}) (n={n}, m={m}, a={a})"
        )));
    }
    for _ in 0..BISECTION_MAX_ITER {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let phi = 0.5 * (lo + hi);
    Ok(DesignSolution {
        scheme: Scheme::NonCollinear,
        n,
        m,
        l: None,
        h_perp: None,
        phi: Some(phi),
        t_gate: m as f64 * PI * elliptic_k_norm(a / 2.0)?,
        residual: hi - lo,
    })
}

/// Scores an anisotropic collinear parameter set at `t_G = (2n+1)/2 · T₁₁`.
///
/// No closed commensurability condition exists here, so the periods of every
/// configuration and start pole come from the quartic first integral and the
/// residual is the largest distance of a required period count from its
/// target: an integer for `[00]`/`[01]`/`[10]`, `(2n+1)/2` for `[11]`.
/// `m` and `l` are the nearest whole counts for the north-pole start.
pub fn design_collinear_aniso(model: &CollinearModel, n: u32) -> Result<DesignSolution> {
    model.validate()?;
    let t11 = period_numeric(model, ControlConfig::C11, 1.0)?;
    if !t11.flips {
        return Err(Error::Infeasible(format!(
            "[11] orbit does not reach the opposite pole (a={}, h_perp={}, h_tilde={})",
            model.a,
            model.h_perp,
            model.h_tilde(ControlConfig::C11)
        )));
    }
    let half_turns = 2.0 * n as f64 + 1.0;
    let t_gate = 0.5 * half_turns * t11.period;
    let mut residual = 0.0f64;
    let mut counts = [0u32; 2];
    for pole in [1.0, -1.0] {
        for (slot, config) in [ControlConfig::C00, ControlConfig::C01].into_iter().enumerate() {
            let ratio = t_gate / period_numeric(model, config, pole)?.period;
            residual = residual.max((ratio - ratio.round()).abs());
            if pole > 0.0 {
                counts[slot] = ratio.round() as u32;
            }
        }
        let ratio11 = t_gate / period_numeric(model, ControlConfig::C11, pole)?.period;
        residual = residual.max((ratio11 - 0.5 * half_turns).abs());
    }
    Ok(DesignSolution {
        scheme: Scheme::CollinearAniso,
        n,
        m: counts[1],
        l: Some(counts[0]),
        h_perp: Some(model.h_perp),
        phi: None,
        t_gate,
        residual,
    })
}

/// Linear stability of one pole with the drive off.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoleStability {
    pub z: f64,
    /// Real parts of the eigenvalues: the zero mode and the damped pair.
    pub real_parts: [f64; 2],
    /// Imaginary part `±(2a + z h̃)` of the damped pair.
    pub frequency: f64,
    pub stable: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StabilityReport {
    pub north: PoleStability,
    pub south: PoleStability,
    /// `2a > |h̃|`.
    pub both_stable: bool,
    /// `a > 2`, which covers every configuration when `h_∥ = −2` (`|h̃| ≤ 4`).
    pub gate_window: bool,
}

/// Eigenvalues of the linearized `(1+η²) ds/dt` at the poles, `h_⊥ = 0`:
/// `0` and `−(2a + z h̃)(η ± i)`.
pub fn pole_stability(a: f64, h_tilde: f64, eta: f64) -> StabilityReport {
    let pole = |z: f64| {
        let rate = 2.0 * a + z * h_tilde;
        PoleStability {
            z,
            real_parts: [0.0, -rate * eta],
            frequency: rate,
            stable: rate > 0.0,
        }
    };
    let north = pole(1.0);
    let south = pole(-1.0);
    StabilityReport {
        north,
        south,
        both_stable: 2.0 * a > h_tilde.abs(),
        gate_window: a > 2.0,
    }
}

/// Order-of-magnitude hardware numbers for the collinear scheme.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PhysicalEstimate {
    pub j_kelvin: f64,
    pub spin: f64,
    pub g_s: f64,
    pub h_par_tesla: f64,
    pub a_min_kelvin: f64,
    /// Anisotropy used for `h_perp_min_tesla`.
    pub a_kelvin: f64,
    pub h_perp_min_tesla: f64,
    pub time_unit_ps: f64,
    pub gate_time_ps: f64,
}

/// Converts a dimensionless gate into physical units, taking `A = 2J`.
pub fn to_physical_units(j_kelvin: f64, spin: f64, g_s: f64, t_gate: f64) -> Result<PhysicalEstimate> {
    to_physical_units_with(j_kelvin, spin, g_s, t_gate, None)
}

/// As [`to_physical_units`], with an explicit anisotropy `A` in kelvin.
pub fn to_physical_units_with(
    j_kelvin: f64,
    spin: f64,
    g_s: f64,
    t_gate: f64,
    a_kelvin: Option<f64>,
) -> Result<PhysicalEstimate> {
    for (name, v) in [("J", j_kelvin), ("S", spin), ("g_s", g_s), ("t_G", t_gate)] {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::InvalidArgument(format!("{name} must be positive, got {v}")));
        }
    }
    let a_min = 2.0 * j_kelvin;
    let a = match a_kelvin {
        Some(v) if !(v.is_finite() && v > 0.0) => {
            return Err(Error::InvalidArgument(format!("A must be positive, got {v}")))
        }
        Some(v) => v,
        None => a_min,
    };
    let j = j_kelvin * K_B;
    let time_unit_ps = HBAR / (j * spin) * 1e12;
    Ok(PhysicalEstimate {
        j_kelvin,
        spin,
        g_s,
        h_par_tesla: 2.0 * j * spin / (g_s * MU_B),
        a_min_kelvin: a_min,
        a_kelvin: a,
        h_perp_min_tesla: a * K_B * spin / (g_s * MU_B),
        time_unit_ps,
        gate_time_ps: t_gate * time_unit_ps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn approximate_design_n0_m5() {
        let d = design_collinear_a0(0, 5).unwrap();
        let h = d.h_perp.unwrap();
        assert!((h - 2.0 / 99f64.sqrt()).abs() < 1e-15);
        assert!((h - 0.20101).abs() < 1e-5);
        assert!((d.residual - 0.0375).abs() < 1e-3, "{}", d.residual);
        assert!((d.t_gate - 15.63).abs() < 1e-2);
        assert_eq!(d.l, Some(10));
    }

    #[test]
    fn smallest_design() {
        let d = design_collinear_a0(0, 1).unwrap();
        assert!((d.h_perp.unwrap() - 2.0 / 3f64.sqrt()).abs() < 1e-14);
        // l_real = √13 / 2
        assert!((d.residual - (2.0 - 13f64.sqrt() / 2.0)).abs() < 1e-14);
        assert!((d.residual - 0.197).abs() < 1e-3);
    }

    #[test]
    fn infeasible_collinear() {
        assert!(matches!(design_collinear_a0(0, 0), Err(Error::Infeasible(_))));
        assert!(matches!(design_collinear_a0(1, 1), Err(Error::Infeasible(_))));
        assert!(design_collinear_a0(1, 2).is_ok());
    }

    #[test]
    fn first_condition_exact() {
        for n in 0..5 {
            for m in (n + 1)..20 {
                let d = design_collinear_a0(n, m).unwrap();
                let h = d.h_perp.unwrap();
                let lhs = (1.0 + 4.0 / (h * h)).sqrt();
                let rhs = 2.0 * m as f64 / (2.0 * n as f64 + 1.0);
                assert!((lhs - rhs).abs() < 1e-12 * rhs);
            }
        }
    }

    #[test]
    fn residual_decreases_with_m() {
        let r: Vec<f64> = (2..=50).map(|m| design_collinear_a0(0, m).unwrap().residual).collect();
        assert!(r.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn search_is_sorted() {
        let all = search_collinear_a0(3, 30);
        assert!(all.windows(2).all(|w| w[0].residual <= w[1].residual));
        assert_eq!(all, search_collinear_a0(3, 30));
    }

    #[test]
    fn parity_small() {
        let c = parity_obstruction(20).unwrap();
        assert!(c.no_solution());
        assert!(c.lhs_always_even && c.rhs_always_odd);
        assert_eq!(c.triples_checked, 21 * 20 * 20);
        assert!(parity_obstruction(0).is_err());
        // (n, m, l) = (0, 1, 2): 16 − 16 = 0 ≠ 3
        assert_ne!(16 - 4 * 4, 3);
    }

    #[test]
    fn noncollinear_simplest() {
        let d = design_noncollinear(1, 1, 0.0).unwrap();
        let phi = d.phi.unwrap();
        assert!((phi.cos() - 0.75).abs() < 1e-15);
        assert!((2.0 * phi / PI - 0.46).abs() < 0.01);
        assert!((2.0 * phi.to_degrees() - 83.0).abs() < 0.5);
        assert!((d.t_gate - PI).abs() < 1e-15);
        assert_eq!(d.residual, 0.0);
    }

    #[test]
    fn noncollinear_anisotropic() {
        let d = design_noncollinear(1, 1, 1.0).unwrap();
        let phi = d.phi.unwrap();
        assert!((phi.cos() - 0.722).abs() < 1e-3, "{}", phi.cos());
        assert!(phi > 0.75f64.acos());
        assert!(angle_condition_residual(1, 1, 1.0, phi).unwrap().abs() < 1e-10);
        assert!(d.residual < 1e-14);
    }

    #[test]
    fn noncollinear_small_a_limit() {
        let d = design_noncollinear(1, 1, 1e-8).unwrap();
        assert!((d.phi.unwrap() - 0.75f64.acos()).abs() < 1e-6);
    }

    #[test]
    fn noncollinear_infeasible() {
        assert!(matches!(design_noncollinear(2, 1, 0.0), Err(Error::Infeasible(_))));
        assert!(matches!(design_noncollinear(1, 1, 2.5), Err(Error::Infeasible(_))));
        assert!(design_noncollinear(1, 1, -1.0).is_err());
    }

    #[test]
    fn aniso_collinear_scoring() {
        let m = CollinearModel::new(2.5, -2.0, 2.7, 0.0).unwrap();
        let d = design_collinear_aniso(&m, 0).unwrap();
        assert!((d.t_gate - crate::analytics::half_period_flip(2.7, 2.5).unwrap()).abs() < 1e-9);
        assert!(d.residual >= 0.0 && d.residual <= 0.5);
        let confined = CollinearModel::new(3.0, -2.0, 2.7, 0.0).unwrap();
        assert!(matches!(
            design_collinear_aniso(&confined, 0),
            Err(Error::Infeasible(_))
        ));
    }

    #[test]
    fn stability_examples() {
        let r = pole_stability(2.5, -4.0, 0.01);
        assert!((r.north.real_parts[1] + 0.01).abs() < 1e-15);
        assert!((r.south.real_parts[1] + 0.09).abs() < 1e-15);
        assert!(r.north.stable && r.south.stable && r.both_stable && r.gate_window);

        let r = pole_stability(1.5, -4.0, 0.01);
        assert!((r.north.real_parts[1] - 0.01).abs() < 1e-15);
        assert!(!r.north.stable && !r.both_stable);

        let r = pole_stability(2.5, -4.0, 0.0);
        assert_eq!(r.north.real_parts[1], 0.0);
        assert_eq!(r.south.real_parts[1], 0.0);
    }

    #[test]
    fn physical_examples() {
        let p = to_physical_units(1.0, 4.0, 2.0, 15.63).unwrap();
        assert!((p.h_par_tesla - 6.0).abs() < 0.1, "{}", p.h_par_tesla);
        assert!((p.time_unit_ps - 1.9).abs() < 0.05, "{}", p.time_unit_ps);
        assert!((p.gate_time_ps - 30.0).abs() < 1.0);
        assert_eq!(p.a_min_kelvin, 2.0);
        assert!((p.h_perp_min_tesla - p.h_par_tesla).abs() < 1e-12);
        let q = to_physical_units_with(1.0, 4.0, 2.0, 15.63, Some(5.0)).unwrap();
        assert!((q.h_perp_min_tesla / p.h_perp_min_tesla - 2.5).abs() < 1e-12);
        assert!(to_physical_units(0.0, 4.0, 2.0, 1.0).is_err());
        assert!(to_physical_units_with(1.0, 4.0, 2.0, 1.0, Some(-1.0)).is_err());
    }

    #[test]
    fn json_omits_absent_fields() {
        let d = design_noncollinear(1, 1, 0.0).unwrap();
        let v: serde_json::Value = serde_json::to_value(d).unwrap();
        let obj = v.as_object().unwrap();
        let mut keys: Vec<&str> = obj.keys().map(String::as_str).collect();
        keys.sort_unstable();
        assert_eq!(keys, ["m", "n", "phi", "residual", "scheme", "t_G"]);
        assert_eq!(obj["scheme"], "noncollinear");
    }
}
