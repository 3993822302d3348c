//! Quaternion arithmetic, the unit group `Sp(1)` and its Lie algebra.
//!
//! Scalar-first convention: `q = w + i x + j y + k z`. The JSON form of a
//! quaternion is the array `[w, x, y, z]`, used by every file format in the
//! crate.

use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Points with `sin α · sin β` below this are on the singular locus of the
/// hyperspherical chart.
pub const CHART_SINGULAR_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 4]> for Quaternion {
    fn from(c: [f64; 4]) -> Self {
        Self::new(c[0], c[1], c[2], c[3])
    }
}

impl From<Quaternion> for [f64; 4] {
    fn from(q: Quaternion) -> Self {
        q.to_array()
    }
}

impl From<f64> for Quaternion {
    fn from(r: f64) -> Self {
        Self::real(r)
    }
}

impl Quaternion {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Self = Self::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Self = Self::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Self = Self::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Self = Self::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Multiplicative inverse, `None` at zero.
    pub fn inverse(self) -> Option<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 {
            None
        } else {
            Some(self.conj() / n2)
        }
    }

    #[inline]
    pub fn imag(self) -> ImQuaternion {
        ImQuaternion::new(self.x, self.y, self.z)
    }

    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Decomposition `q = radius · unit` through `ℍ* ≅ ℝ₊ × Sp(1)`.
    pub fn polar(self) -> Result<(f64, UnitQuaternion)> {
        let r = self.norm();
        if r == 0.0 {
            return Err(Error::PolarAtZero);
        }
        Ok((r, UnitQuaternion(self / r)))
    }

    /// Standard gaussian in each of the four components.
    pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new(
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
            rng.sample(StandardNormal),
        )
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, o: Self) -> Self {
        Self::new(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, o: Self) -> Self {
        Self::new(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, o: Self) {
        *self = *self - o;
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

/// Hamilton product.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self::new(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

/// Element of `Sp(1)`. Always renormalized on construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(into = "[f64; 4]")]
pub struct UnitQuaternion(Quaternion);

impl From<UnitQuaternion> for [f64; 4] {
    fn from(u: UnitQuaternion) -> Self {
        u.0.to_array()
    }
}

impl UnitQuaternion {
    pub const IDENTITY: Self = Self(Quaternion::ONE);

    pub fn new(q: Quaternion) -> Result<Self> {
        let n = q.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::ZeroNorm);
        }
        Ok(Self(q / n))
    }

    #[inline]
    pub fn quaternion(self) -> Quaternion {
        self.0
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Self(self.0.conj())
    }

    /// Haar-distributed sample: a normalized 4-dimensional gaussian.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            if let Ok(u) = Self::new(Quaternion::random_gaussian(rng)) {
                return u;
            }
        }
    }

    /// Inverse of [`ImQuaternion::exp`] on the open ball of radius π.
    pub fn log(self) -> Result<ImQuaternion> {
        let q = self.0;
        let v = q.imag();
        let s = v.norm();
        if s < 1e-12 {
            if q.w < 0.0 {
                return Err(Error::CutLocus);
            }
            return Ok(v);
        }
        let theta = s.atan2(q.w);
        Ok(v * (theta / s))
    }

    /// Hyperspherical angles `(α, β, γ)` with
    /// `w = cos α, x = sin α cos β, y = sin α sin β cos γ, z = sin α sin β sin γ`.
    ///
    /// Fails on the singular locus `sin α · sin β = 0`.
    pub fn hyperspherical_angles(self) -> Result<(f64, f64, f64)> {
        let q = self.0;
        if q.y.hypot(q.z) < CHART_SINGULAR_TOL {
            return Err(Error::ChartSingular);
        }
        Ok(self.angles_unchecked())
    }

    /// Same chart without the singularity check; degenerate angles are set
    /// to zero, so the identity maps to `(0, 0, 0)`.
    pub fn angles_unchecked(self) -> (f64, f64, f64) {
        let q = self.0;
        let yz = q.y.hypot(q.z);
        let alpha = q.x.hypot(yz).atan2(q.w);
        let beta = yz.atan2(q.x);
        let gamma = if yz == 0.0 { 0.0 } else { q.z.atan2(q.y) };
        (alpha, beta, gamma)
    }

    pub fn from_hyperspherical(alpha: f64, beta: f64, gamma: f64) -> Self {
        let (sa, ca) = alpha.sin_cos();
        let (sb, cb) = beta.sin_cos();
        let (sg, cg) = gamma.sin_cos();
        Self(Quaternion::new(ca, sa * cb, sa * sb * cg, sa * sb * sg))
    }
}

impl Mul for UnitQuaternion {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        // renormalize to stop drift under repeated products
        let q = self.0 * o.0;
        Self(q / q.norm())
    }
}

/// Purely imaginary quaternion: the Lie algebra `sp(1) ≅ ℝ³`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ImQuaternion {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl ImQuaternion {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn quaternion(self) -> Quaternion {
        Quaternion::new(0.0, self.x, self.y, self.z)
    }

    #[inline]
    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    /// Commutator `uv − vu`, which equals `2 (u × v)`.
    pub fn bracket(self, o: Self) -> Self {
        let (u, v) = (self.quaternion(), o.quaternion());
        (u * v - v * u).imag()
    }

    /// `exp(v) = cos|v| + (v/|v|) sin|v|`.
    pub fn exp(self) -> UnitQuaternion {
        let t = self.norm();
        if t == 0.0 {
            return UnitQuaternion::IDENTITY;
        }
        let s = t.sin() / t;
        UnitQuaternion(Quaternion::new(t.cos(), self.x * s, self.y * s, self.z * s))
    }
}

impl Mul<f64> for ImQuaternion {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Keeps `γ` inside `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r += 2.0 * PI;
    }
    r
}
