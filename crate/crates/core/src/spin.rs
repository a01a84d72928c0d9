//! Vectors on the unit sphere, bit encoding, and the Toffoli truth table.
//!
//! A bit is stored in the orientation of a classical spin relative to a local
//! easy axis: `1` is aligned with the axis, `0` anti-aligned. The target spin
//! always uses `ẑ`; control spins use `ẑ` in the collinear model and the
//! in-plane axes `e₁`, `e₂` in the non-collinear one.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default projection threshold for reading a bit back from a spin.
pub const DEFAULT_THRESHOLD: f64 = 0.9;

/// Construction accepts inputs this close to unit modulus and renormalizes them.
const UNIT_ACCEPT_TOL: f64 = 1e-6;

/// Rounding slack on projections, so an exactly encoded spin decodes at threshold 1.
const PROJECTION_SLACK: f64 = 1e-12;

/// Plain Cartesian 3-vector (fields, derivatives, intermediate RK stages).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 { x: 0.0, y: 0.0, z: 0.0 };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3 {
            x: self.y * o.z - self.z * o.y,
            y: self.z * o.x - self.x * o.z,
            z: self.x * o.y - self.y * o.x,
        }
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(self * v.x, self * v.y, self * v.z)
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.x, self.y, self.z)
    }
}

/// Unit vector carrying a spin orientation.
///
/// Construction renormalizes inputs within 1e-6 of unit modulus and rejects
/// anything further away, so a `Spin3` always has |s| = 1 to rounding.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(into = "[f64; 3]")]
pub struct Spin3(Vec3);

impl Spin3 {
    pub const NORTH: Spin3 = Spin3(Vec3::new(0.0, 0.0, 1.0));
    pub const SOUTH: Spin3 = Spin3(Vec3::new(0.0, 0.0, -1.0));

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        Self::try_from_vec(Vec3::new(x, y, z))
    }

    pub fn try_from_vec(v: Vec3) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_ACCEPT_TOL {
            return Err(Error::NotUnit { norm });
        }
        Ok(Spin3((1.0 / norm) * v))
    }

    /// Projects an arbitrary non-zero vector back onto the sphere.
    ///
    /// Used by the integrator after each step; unlike [`Spin3::try_from_vec`]
    /// it accepts any finite, non-zero modulus.
    pub(crate) fn renormalize(v: Vec3) -> Option<Self> {
        let norm = v.norm();
        (norm.is_finite() && norm > 0.0).then(|| Spin3((1.0 / norm) * v))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }

    pub fn x(self) -> f64 {
        self.0.x
    }

    pub fn y(self) -> f64 {
        self.0.y
    }

    pub fn z(self) -> f64 {
        self.0.z
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.0.dot(o)
    }

    pub fn norm(self) -> f64 {
        self.0.norm()
    }

    /// Half-turn about x̂: `(x, y, z) → (x, −y, −z)`. Exchanges the two
    /// non-collinear control axes while keeping the precession sense.
    pub fn rotate_x_pi(self) -> Spin3 {
        Spin3(Vec3::new(self.0.x, -self.0.y, -self.0.z))
    }
}

impl From<Spin3> for [f64; 3] {
    fn from(s: Spin3) -> Self {
        s.0.to_array()
    }
}

impl Neg for Spin3 {
    type Output = Spin3;
    fn neg(self) -> Spin3 {
        Spin3(-self.0)
    }
}

impl fmt::Display for Spin3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Unit vector defining a local encoding axis (`ẑ` for targets, `e₁`/`e₂` for tilted controls).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Axis3(Vec3);

impl Axis3 {
    pub const Z: Axis3 = Axis3(Vec3::new(0.0, 0.0, 1.0));

    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let v = Vec3::new(x, y, z);
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnit { norm });
        }
        Ok(Axis3((1.0 / norm) * v))
    }

    /// In-plane axis `(cos φ, sin φ, 0)`.
    pub fn in_plane(phi: f64) -> Self {
        Axis3(Vec3::new(phi.cos(), phi.sin(), 0.0))
    }

    pub fn vec(self) -> Vec3 {
        self.0
    }
}

/// A logical bit value.
pub type Bit = u8;

/// Result of reading a spin back as a bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BitValue {
    Zero,
    One,
    Undecided,
}

impl BitValue {
    pub fn bit(self) -> Option<Bit> {
        match self {
            BitValue::Zero => Some(0),
            BitValue::One => Some(1),
            BitValue::Undecided => None,
        }
    }
}

impl fmt::Display for BitValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BitValue::Zero => f.write_str("0"),
            BitValue::One => f.write_str("1"),
            BitValue::Undecided => f.write_str("?"),
        }
    }
}

/// Logical state of the two control spins, written `[c1 c2]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ControlConfig {
    C00,
    C01,
    C10,
    C11,
}

impl ControlConfig {
    pub const ALL: [ControlConfig; 4] = [Self::C00, Self::C01, Self::C10, Self::C11];

    pub fn from_bits(c1: Bit, c2: Bit) -> Self {
        match (c1 != 0, c2 != 0) {
            (false, false) => Self::C00,
            (false, true) => Self::C01,
            (true, false) => Self::C10,
            (true, true) => Self::C11,
        }
    }

    pub fn bits(self) -> (Bit, Bit) {
        match self {
            Self::C00 => (0, 0),
            Self::C01 => (0, 1),
            Self::C10 => (1, 0),
            Self::C11 => (1, 1),
        }
    }

    /// `(s₁ᶻ, s₂ᶻ)` in the collinear model.
    pub fn collinear_z(self) -> (f64, f64) {
        let (c1, c2) = self.bits();
        (bit_sign(c1), bit_sign(c2))
    }

    /// Control spin vectors `(±e₁, ±e₂)` for arbitrary encoding axes.
    pub fn embed(self, e1: Axis3, e2: Axis3) -> (Spin3, Spin3) {
        let (c1, c2) = self.bits();
        (encode_bit(c1, e1), encode_bit(c2, e2))
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::C00 => "00",
            Self::C01 => "01",
            Self::C10 => "10",
            Self::C11 => "11",
        }
    }
}

impl fmt::Display for ControlConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.label())
    }
}

impl std::str::FromStr for ControlConfig {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim_start_matches('[').trim_end_matches(']') {
            "00" => Ok(Self::C00),
            "01" => Ok(Self::C01),
            "10" => Ok(Self::C10),
            "11" => Ok(Self::C11),
            other => Err(Error::InvalidArgument(format!(
                "control configuration must be one of 00, 01, 10, 11 (got {other:?})"
            ))),
        }
    }
}

fn bit_sign(b: Bit) -> f64 {
    if b != 0 {
        1.0
    } else {
        -1.0
    }
}

/// `+axis` for 1, `−axis` for 0.
pub fn encode_bit(bit: Bit, axis: Axis3) -> Spin3 {
    Spin3(bit_sign(bit) * axis.vec())
}

/// Reads a bit from the projection of `s` on `axis`.
pub fn decode_bit(s: Spin3, axis: Axis3, threshold: f64) -> Result<BitValue> {
    validate_threshold(threshold)?;
    let p = s.dot(axis.vec());
    Ok(if p >= threshold - PROJECTION_SLACK {
        BitValue::One
    } else if p <= -threshold + PROJECTION_SLACK {
        BitValue::Zero
    } else {
        BitValue::Undecided
    })
}

pub fn validate_threshold(threshold: f64) -> Result<()> {
    if threshold > 0.0 && threshold <= 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "decode threshold must lie in (0, 1], got {threshold}"
        )))
    }
}

/// Target output of the Toffoli gate: `t XOR (c1 AND c2)`.
pub fn toffoli_expected(c1: Bit, c2: Bit, t: Bit) -> Bit {
    (t ^ (c1 & c2)) & 1
}

/// The eight input rows `(c1, c2, t)` in lexicographic order.
pub fn truth_table_inputs() -> impl Iterator<Item = (Bit, Bit, Bit)> {
    (0u8..8).map(|i| ((i >> 2) & 1, (i >> 1) & 1, i & 1))
}
