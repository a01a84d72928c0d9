//! Target-spin equations of motion and a fixed-step RK4 integrator.
//!
//! Units: exchange energy `JS² = 1`, time `(JS)⁻¹ = 1`. Control spins are
//! frozen; only the target spin is integrated. Energies follow the convention
//! `h_eff = −∂E/∂s`, so the undamped flow conserves `E` and Gilbert damping
//! lowers it.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::io::{self, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spin::{Axis3, ControlConfig, Spin3, Vec3};

/// Default integration step.
pub const DEFAULT_DT: f64 = 1e-3;

/// Above this many steps the recorded trajectory is decimated.
pub const MAX_SAMPLES: usize = 100_000;

/// Collinear model: Ising exchange to `ẑ`-axis controls, easy-axis anisotropy,
/// a global longitudinal field and a local transverse drive on the target.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CollinearModel {
    pub a: f64,
    pub h_par: f64,
    pub h_perp: f64,
    pub eta: f64,
}

impl CollinearModel {
    pub fn new(a: f64, h_par: f64, h_perp: f64, eta: f64) -> Result<Self> {
        let m = Self { a, h_par, h_perp, eta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        check_finite("h_par", self.h_par)?;
        check_non_negative("a", self.a)?;
        check_non_negative("h_perp", self.h_perp)?;
        check_non_negative("eta", self.eta)
    }

    /// Net longitudinal field `h̃ = h_∥ + s₁ᶻ + s₂ᶻ` seen by the target.
    pub fn h_tilde(&self, config: ControlConfig) -> f64 {
        let (s1, s2) = config.collinear_z();
        self.h_par + s1 + s2
    }
}

/// Non-collinear model: Heisenberg exchange to controls with easy axes
/// `e₁ = (cos φ, sin φ, 0)`, `e₂ = (cos φ, −sin φ, 0)` and compensating field `h = e₁ + e₂`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NonCollinearModel {
    pub phi: f64,
    pub a: f64,
    pub eta: f64,
}

impl NonCollinearModel {
    pub fn new(phi: f64, a: f64, eta: f64) -> Result<Self> {
        let m = Self { phi, a, eta };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.phi > 0.0 && self.phi < FRAC_PI_2) {
            return Err(Error::InvalidArgument(format!(
                "phi must lie in (0, pi/2), got {}",
                self.phi
            )));
        }
        check_non_negative("a", self.a)?;
        check_non_negative("eta", self.eta)
    }

    pub fn e1(&self) -> Axis3 {
        Axis3::in_plane(self.phi)
    }

    pub fn e2(&self) -> Axis3 {
        Axis3::in_plane(-self.phi)
    }

    /// Compensating field `h = e₁ + e₂ = (2 cos φ, 0, 0)`.
    pub fn field(&self) -> Vec3 {
        self.e1().vec() + self.e2().vec()
    }

    /// In-plane drive `s₁ + s₂ + h` for a control configuration.
    pub fn drive(&self, config: ControlConfig) -> Vec3 {
        let (s1, s2) = config.embed(self.e1(), self.e2());
        s1.vec() + s2.vec() + self.field()
    }

    /// Magnitude of the in-plane drive: 0, 2, 2, 4 cos φ for [00], [01], [10], [11].
    pub fn h_tilde(&self, config: ControlConfig) -> f64 {
        self.drive(config).norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "scheme", rename_all = "lowercase")]
pub enum Model {
    Collinear(CollinearModel),
    #[serde(rename = "noncollinear")]
    NonCollinear(NonCollinearModel),
}

impl Model {
    pub fn validate(&self) -> Result<()> {
        match self {
            Model::Collinear(m) => m.validate(),
            Model::NonCollinear(m) => m.validate(),
        }
    }

    pub fn eta(&self) -> f64 {
        match self {
            Model::Collinear(m) => m.eta,
            Model::NonCollinear(m) => m.eta,
        }
    }

    pub fn anisotropy(&self) -> f64 {
        match self {
            Model::Collinear(m) => m.a,
            Model::NonCollinear(m) => m.a,
        }
    }

    pub fn scheme_name(&self) -> &'static str {
        match self {
            Model::Collinear(_) => "collinear",
            Model::NonCollinear(_) => "noncollinear",
        }
    }

    /// Encoding axes of the two control spins.
    pub fn control_axes(&self) -> (Axis3, Axis3) {
        match self {
            Model::Collinear(_) => (Axis3::Z, Axis3::Z),
            Model::NonCollinear(m) => (m.e1(), m.e2()),
        }
    }

    /// Effective field acting on the target.
    ///
    /// With the drive off only the longitudinal part survives: the collinear
    /// model loses `h_⊥`, the non-collinear one loses exchange and field
    /// together and keeps its anisotropy.
    pub fn effective_field(&self, config: ControlConfig, s: Spin3, drive_on: bool) -> Vec3 {
        self.field_at(config, s.vec(), drive_on)
    }

    fn field_at(&self, config: ControlConfig, s: Vec3, drive_on: bool) -> Vec3 {
        match self {
            Model::Collinear(m) => {
                let hx = if drive_on { m.h_perp } else { 0.0 };
                Vec3::new(hx, 0.0, m.h_tilde(config) + 2.0 * m.a * s.z)
            }
            Model::NonCollinear(m) => {
                let aniso = Vec3::new(0.0, 0.0, 2.0 * m.a * s.z);
                if drive_on {
                    m.drive(config) + aniso
                } else {
                    aniso
                }
            }
        }
    }

    /// Energy in units `JS² = 1`, consistent with [`Model::effective_field`].
    pub fn energy(&self, config: ControlConfig, s: Spin3, drive_on: bool) -> f64 {
        match self {
            Model::Collinear(m) => {
                let (s1, s2) = config.collinear_z();
                let hx = if drive_on { m.h_perp } else { 0.0 };
                -((s1 + s2) * s.z()
                    + m.a * (s1 * s1 + s2 * s2 + s.z() * s.z())
                    + m.h_par * (s1 + s2 + s.z())
                    + hx * s.x())
            }
            Model::NonCollinear(m) => {
                let coupling = if drive_on { s.dot(m.drive(config)) } else { 0.0 };
                -(coupling + m.a * s.z() * s.z())
            }
        }
    }

    /// Right-hand side `ds/dt` of the Landau–Lifshitz–Gilbert equation for this model.
    pub fn rhs(&self, config: ControlConfig, s: Spin3, drive_on: bool) -> Vec3 {
        self.rhs_at(config, s.vec(), drive_on)
    }

    /// Same as [`Model::rhs`] for an off-sphere point (RK stages).
    fn rhs_at(&self, config: ControlConfig, s: Vec3, drive_on: bool) -> Vec3 {
        llg_rhs(s, self.field_at(config, s, drive_on), self.eta())
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Model::Collinear(m) => write!(
                f,
                "collinear(a={}, h_par={}, h_perp={}, eta={})",
                m.a, m.h_par, m.h_perp, m.eta
            ),
            Model::NonCollinear(m) => write!(f, "noncollinear(phi={}, a={}, eta={})", m.phi, m.a, m.eta),
        }
    }
}

/// `(1+η²)⁻¹ · s × [h − η (s × h)]`; reduces to `s × h` for `η = 0`.
pub fn llg_rhs(s: Vec3, h: Vec3, eta: f64) -> Vec3 {
    let sxh = s.cross(h);
    if eta == 0.0 {
        return sxh;
    }
    (1.0 / (1.0 + eta * eta)) * s.cross(h - eta * sxh)
}

/// When the drive is removed.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FieldSchedule {
    AlwaysOn,
    /// Drive switched off at `t_off`.
    SwitchOff {
        t_off: f64,
    },
}

impl FieldSchedule {
    pub fn switch_off(t_off: f64) -> Result<Self> {
        check_non_negative("t_off", t_off)?;
        Ok(FieldSchedule::SwitchOff { t_off })
    }

    pub fn always_off() -> Self {
        FieldSchedule::SwitchOff { t_off: 0.0 }
    }

    /// Whether the drive acts on the interval just after `t`.
    pub fn drive_on_after(&self, t: f64) -> bool {
        match *self {
            FieldSchedule::AlwaysOn => true,
            FieldSchedule::SwitchOff { t_off } => t < t_off,
        }
    }

    /// Splits `[0, t_end]` into constant-drive segments; the switch lands on a step boundary.
    fn segments(&self, t_end: f64, dt: f64) -> Result<Vec<Segment>> {
        let (_, h) = plan_steps(t_end, dt)?;
        let t_off = match *self {
            FieldSchedule::SwitchOff { t_off } if t_off > 0.0 && t_off < t_end => t_off,
            _ => {
                let (steps, h) = plan_steps(t_end, dt)?;
                return Ok(vec![Segment {
                    start: 0.0,
                    end: t_end,
                    steps,
                    h,
                    drive_on: self.drive_on_after(0.0),
                }]);
            }
        };
        let (n1, h1) = plan_steps(t_off, h.min(t_off))?;
        let rest = t_end - t_off;
        let (n2, h2) = plan_steps(rest, h.min(rest))?;
        Ok(vec![
            Segment {
                start: 0.0,
                end: t_off,
                steps: n1,
                h: h1,
                drive_on: true,
            },
            Segment {
                start: t_off,
                end: t_end,
                steps: n2,
                h: h2,
                drive_on: false,
            },
        ])
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    start: f64,
    end: f64,
    steps: usize,
    h: f64,
    drive_on: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub s: Spin3,
    pub energy: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Trajectory {
    pub model: Model,
    pub config: ControlConfig,
    /// Step actually used (`t_end / n_steps`, at most the requested `dt`).
    pub dt: f64,
    pub schedule: FieldSchedule,
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn last(&self) -> &Sample {
        self.samples.last().expect("trajectory always holds the initial sample")
    }

    pub fn final_spin(&self) -> Spin3 {
        self.last().s
    }

    /// Largest deviation of the energy from its initial value.
    pub fn max_energy_drift(&self) -> f64 {
        let e0 = self.samples[0].energy;
        self.samples.iter().map(|p| (p.energy - e0).abs()).fold(0.0, f64::max)
    }

    /// Largest deviation of |s| from one over all samples.
    pub fn max_norm_error(&self) -> f64 {
        self.samples
            .iter()
            .map(|p| (p.s.norm() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// First time `s_z` crosses `level`, linearly interpolated between samples.
    pub fn first_crossing_z(&self, level: f64) -> Option<f64> {
        let side0 = self.samples[0].s.z() - level;
        self.samples.windows(2).find_map(|w| {
            let (a, b) = (w[0].s.z() - level, w[1].s.z() - level);
            if b == 0.0 || (b.signum() != side0.signum() && a != b) {
                let frac = a / (a - b);
                Some(w[0].t + frac * (w[1].t - w[0].t))
            } else {
                None
            }
        })
    }

    /// Writes `t,sx,sy,sz,energy` with 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut w: W) -> io::Result<()> {
        w.write_all(b"t,sx,sy,sz,energy\n")?;
        for p in &self.samples {
            writeln!(
                w,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                p.t,
                p.s.x(),
                p.s.y(),
                p.s.z(),
                p.energy
            )?;
        }
        Ok(())
    }
}

/// Step-count plan shared by the integrators: `n` equal steps landing exactly on `t_end`.
fn plan_steps(t_end: f64, dt: f64) -> Result<(usize, f64)> {
    if !(t_end.is_finite() && t_end > 0.0) {
        return Err(Error::InvalidArgument(format!("t_end must be positive, got {t_end}")));
    }
    if !(dt.is_finite() && dt > 0.0 && dt <= t_end) {
        return Err(Error::InvalidArgument(format!("dt must lie in (0, t_end], got {dt}")));
    }
    let n = (t_end / dt - 1e-9).ceil().max(1.0) as usize;
    Ok((n, t_end / n as f64))
}

/// One classical RK4 step followed by projection back onto the sphere.
pub fn rk4_step(model: &Model, config: ControlConfig, s: Spin3, drive_on: bool, dt: f64) -> Option<Spin3> {
    let f = |v: Vec3| model.rhs_at(config, v, drive_on);
    let s0 = s.vec();
    let k1 = f(s0);
    let k2 = f(s0 + (0.5 * dt) * k1);
    let k3 = f(s0 + (0.5 * dt) * k2);
    let k4 = f(s0 + dt * k3);
    let next = s0 + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if !next.is_finite() {
        return None;
    }
    Spin3::renormalize(next)
}

/// Integrates the target spin from `s0` over `[0, t_end]`, recording samples.
///
/// The recording stride defaults to 1, or to the smallest stride that keeps the
/// trajectory at or below [`MAX_SAMPLES`] samples.
pub fn integrate(
    model: &Model,
    config: ControlConfig,
    s0: Spin3,
    schedule: FieldSchedule,
    t_end: f64,
    dt: f64,
) -> Result<Trajectory> {
    integrate_with_stride(model, config, s0, schedule, t_end, dt, None)
}

pub fn integrate_with_stride(
    model: &Model,
    config: ControlConfig,
    s0: Spin3,
    schedule: FieldSchedule,
    t_end: f64,
    dt: f64,
    stride: Option<usize>,
) -> Result<Trajectory> {
    model.validate()?;
    let segments = schedule.segments(t_end, dt)?;
    let n: usize = segments.iter().map(|g| g.steps).sum();
    let stride = match stride {
        Some(0) => return Err(Error::InvalidArgument("stride must be at least 1".into())),
        Some(k) => k,
        None if n < MAX_SAMPLES => 1,
        None => n.div_ceil(MAX_SAMPLES - 2),
    };

    let mut samples = Vec::with_capacity(n / stride + 2);
    samples.push(Sample {
        t: 0.0,
        s: s0,
        energy: model.energy(config, s0, schedule.drive_on_after(0.0)),
    });
    let mut s = s0;
    let mut k = 0;
    for g in &segments {
        for j in 0..g.steps {
            let t = if j + 1 == g.steps {
                g.end
            } else {
                g.start + (j + 1) as f64 * g.h
            };
            s = rk4_step(model, config, s, g.drive_on, g.h).ok_or(Error::NonFinite { t })?;
            k += 1;
            if k % stride == 0 || k == n {
                let energy = model.energy(config, s, schedule.drive_on_after(t));
                samples.push(Sample { t, s, energy });
            }
        }
    }
    let h = segments.iter().map(|g| g.h).fold(0.0, f64::max);
    Ok(Trajectory {
        model: *model,
        config,
        dt: h,
        schedule,
        samples,
    })
}

/// Integrates without recording; returns the final state.
pub fn propagate(
    model: &Model,
    config: ControlConfig,
    s0: Spin3,
    schedule: FieldSchedule,
    t_end: f64,
    dt: f64,
) -> Result<Spin3> {
    model.validate()?;
    let mut s = s0;
    for g in schedule.segments(t_end, dt)? {
        for j in 0..g.steps {
            s = rk4_step(model, config, s, g.drive_on, g.h).ok_or(Error::NonFinite {
                t: g.start + (j + 1) as f64 * g.h,
            })?;
        }
    }
    Ok(s)
}

fn check_finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{name} must be finite, got {v}")))
    }
}

fn check_non_negative(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v >= 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}
