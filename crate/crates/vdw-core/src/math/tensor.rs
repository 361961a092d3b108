//! Stack-allocated 3-vectors and 3×3 tensors over real and complex scalars.
//!
//! These carry every position, dipole vector and dyadic Green's tensor in the
//! crate. The complex variants exist for the angular-spectrum integrands of
//! the plate scattering tensor, whose entries are complex before the angular
//! integration cancels the imaginary parts.

use num_complex::Complex64;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// Real 3-vector.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vector3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vector3 {
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn dot(self, other: Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn cross(self, other: Self) -> Self {
        Self::new(
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        )
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Unit vector along `self`; the zero vector is the caller's problem.
    pub fn unit(self) -> Self {
        self * (1.0 / self.norm())
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn as_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }
}

impl From<[f64; 3]> for Vector3 {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl Add for Vector3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vector3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for Vector3 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for Vector3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        Self::new(self.x * s, self.y * s, self.z * s)
    }
}

/// Real 3×3 tensor, row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Tensor3(pub [[f64; 3]; 3]);

impl Tensor3 {
    pub const ZERO: Self = Self([[0.0; 3]; 3]);

    pub fn identity() -> Self {
        let mut t = Self::ZERO;
        t.0[0][0] = 1.0;
        t.0[1][1] = 1.0;
        t.0[2][2] = 1.0;
        t
    }

    /// Outer product `u v^T`: `dyadic(u, v)[i][j] = u_i v_j`.
    pub fn dyadic(u: Vector3, v: Vector3) -> Self {
        let u = u.as_array();
        let v = v.as_array();
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = u[i] * v[j];
            }
        }
        t
    }

    /// Skew tensor of `v`: `skew(v) · w = v × w`.
    pub fn skew(v: Vector3) -> Self {
        Self([[0.0, -v.z, v.y], [v.z, 0.0, -v.x], [-v.y, v.x, 0.0]])
    }

    pub fn transpose(self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[j][i];
            }
        }
        t
    }

    pub fn trace(self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn mul_vec(self, v: Vector3) -> Vector3 {
        let a = v.as_array();
        let row = |i: usize| self.0[i][0] * a[0] + self.0[i][1] * a[1] + self.0[i][2] * a[2];
        Vector3::new(row(0), row(1), row(2))
    }

    pub fn max_abs(self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.0 {
            for &v in row {
                m = m.max(v.abs());
            }
        }
        m
    }

    pub fn is_finite(self) -> bool {
        self.0.iter().all(|row| row.iter().all(|v| v.is_finite()))
    }
}

impl Add for Tensor3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j] + o.0[i][j];
            }
        }
        t
    }
}

impl AddAssign for Tensor3 {
    fn add_assign(&mut self, o: Self) {
        *self = *self + o;
    }
}

impl Sub for Tensor3 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + o * (-1.0)
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j] * s;
            }
        }
        t
    }
}

impl Mul for Tensor3 {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] =
                    self.0[i][0] * o.0[0][j] + self.0[i][1] * o.0[1][j] + self.0[i][2] * o.0[2][j];
            }
        }
        t
    }
}

/// Complex 3-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CVector3 {
    pub x: Complex64,
    pub y: Complex64,
    pub z: Complex64,
}

impl CVector3 {
    pub const fn new(x: Complex64, y: Complex64, z: Complex64) -> Self {
        Self { x, y, z }
    }

    pub fn from_real(v: Vector3) -> Self {
        Self::new(v.x.into(), v.y.into(), v.z.into())
    }

    /// Unconjugated inner product; the conjugate-symmetric dot is `dot_conj`.
    pub fn dot(self, o: Self) -> Complex64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn dot_conj(self, o: Self) -> Complex64 {
        self.x.conj() * o.x + self.y.conj() * o.y + self.z.conj() * o.z
    }

    pub fn cross(self, o: Self) -> Self {
        Self::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn as_array(self) -> [Complex64; 3] {
        [self.x, self.y, self.z]
    }
}

/// Complex 3×3 tensor, row-major.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CTensor3(pub [[Complex64; 3]; 3]);

impl CTensor3 {
    pub const ZERO: Self = Self([[Complex64::new(0.0, 0.0); 3]; 3]);

    pub fn dyadic(u: CVector3, v: CVector3) -> Self {
        let u = u.as_array();
        let v = v.as_array();
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = u[i] * v[j];
            }
        }
        t
    }

    pub fn re(self) -> Tensor3 {
        let mut t = Tensor3::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j].re;
            }
        }
        t
    }

    pub fn im_max_abs(self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.0 {
            for v in row {
                m = m.max(v.im.abs());
            }
        }
        m
    }

    pub fn max_abs(self) -> f64 {
        let mut m = 0.0f64;
        for row in &self.0 {
            for v in row {
                m = m.max(v.norm());
            }
        }
        m
    }

    pub fn is_finite(self) -> bool {
        self.0
            .iter()
            .all(|row| row.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
    }

    pub fn scale(self, s: Complex64) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j] * s;
            }
        }
        t
    }
}

impl Add for CTensor3 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j] + o.0[i][j];
            }
        }
        t
    }
}

impl Mul<f64> for CTensor3 {
    type Output = Self;
    fn mul(self, s: f64) -> Self {
        let mut t = Self::ZERO;
        for i in 0..3 {
            for j in 0..3 {
                t.0[i][j] = self.0[i][j] * s;
            }
        }
        t
    }
}
