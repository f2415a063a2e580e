//! SU(2) as unit quaternions.
//!
//! The quaternion `a + b i + c j + d k` stands for the matrix
//! `[[a + b i, c + d i], [-c + d i, a - b i]]`, so the trace is `2a` and `i`
//! is the diagonal direction. Spatial axes map to imaginary units as
//! `z -> i`, `x -> j`, `y -> k`, which keeps `x * y = z` right-handed.

use std::f64::consts::PI;
use std::ops::{Mul, Neg};

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for algebraic identities in the group.
pub const ALGEBRA_TOL: f64 = 1e-12;

/// A unit quaternion `(a, b, c, d)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct GroupElement {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl From<[f64; 4]> for GroupElement {
    fn from([a, b, c, d]: [f64; 4]) -> Self {
        GroupElement { a, b, c, d }
    }
}

impl From<GroupElement> for [f64; 4] {
    fn from(g: GroupElement) -> Self {
        g.components()
    }
}

impl GroupElement {
    pub const IDENTITY: GroupElement = GroupElement {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 0.0,
    };

    /// The constant element `j`, which squares to `-1` and conjugates the
    /// diagonal subgroup onto its inverse.
    pub const J: GroupElement = GroupElement {
        a: 0.0,
        b: 0.0,
        c: 1.0,
        d: 0.0,
    };

    /// Normalizes an arbitrary non-zero quaternion.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        GroupElement { a, b, c, d }.renormalized()
    }

    pub fn components(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn norm(self) -> f64 {
        self.components().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn renormalized(self) -> Self {
        let n = self.norm();
        GroupElement {
            a: self.a / n,
            b: self.b / n,
            c: self.c / n,
            d: self.d / n,
        }
    }

    pub fn inverse(self) -> Self {
        GroupElement {
            a: self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }

    pub fn trace(self) -> f64 {
        2.0 * self.a
    }

    /// Vector part `(b, c, d)`.
    pub fn imaginary(self) -> [f64; 3] {
        [self.b, self.c, self.d]
    }

    /// Class coordinate `t = arccos(Tr/2) / pi` in `[0, 1]`.
    pub fn conj_class(self) -> f64 {
        // atan2 of (|v|, a) equals arccos(a) on the unit sphere and stays
        // accurate near the central elements where arccos loses digits.
        let v = self.imaginary();
        let s = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        (s.atan2(self.a) / PI).clamp(0.0, 1.0)
    }

    /// `cos(pi t) + sin(pi t) (axis . units)`, axis given in `(x, y, z)`.
    pub fn from_class_axis(t: f64, axis: [f64; 3]) -> Result<Self> {
        let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
        if (norm - 1.0).abs() > 1e-9 {
            return Err(Error::BadAxis { norm });
        }
        let (s, c) = (PI * t).sin_cos();
        let [x, y, z] = axis;
        Ok(GroupElement::new(c, s * z, s * x, s * y))
    }

    /// `h g h^{-1}`.
    pub fn adjoint(h: Self, g: Self) -> Self {
        h * g * h.inverse()
    }

    pub fn distance(self, other: Self) -> f64 {
        self.components()
            .iter()
            .zip(other.components())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt()
    }

    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        self.distance(other) <= tol
    }

    pub fn is_central(self, tol: f64) -> bool {
        let [b, c, d] = self.imaginary();
        (b * b + c * c + d * d).sqrt() <= tol
    }

    /// Haar-random element: a normalized standard-normal 4-vector.
    pub fn haar<R: Rng + ?Sized>(rng: &mut R) -> Self {
        loop {
            let q: [f64; 4] = std::array::from_fn(|_| rng.sample(StandardNormal));
            let n2: f64 = q.iter().map(|x| x * x).sum();
            if n2 > 1e-300 {
                return GroupElement::from(q).renormalized();
            }
        }
    }

    /// Rotation by `angle` about the unit vector `n`, given in quaternion
    /// coordinates `(i, j, k)`. Conjugation by the result rotates vector parts.
    pub(crate) fn rotation_about(n: [f64; 3], angle: f64) -> Self {
        let (s, c) = (angle / 2.0).sin_cos();
        GroupElement::new(c, s * n[0], s * n[1], s * n[2])
    }
}

impl Mul for GroupElement {
    type Output = GroupElement;

    fn mul(self, rhs: Self) -> Self {
        let (a1, b1, c1, d1) = (self.a, self.b, self.c, self.d);
        let (a2, b2, c2, d2) = (rhs.a, rhs.b, rhs.c, rhs.d);
        GroupElement {
            a: a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            b: a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            c: a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            d: a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        }
        .renormalized()
    }
}

impl Neg for GroupElement {
    type Output = GroupElement;

    fn neg(self) -> Self {
        GroupElement {
            a: -self.a,
            b: -self.b,
            c: -self.c,
            d: -self.d,
        }
    }
}

impl Default for GroupElement {
    fn default() -> Self {
        GroupElement::IDENTITY
    }
}

impl std::iter::Product for GroupElement {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(GroupElement::IDENTITY, |acc, g| acc * g)
    }
}

/// CDF of the class coordinate under Haar measure: density `2 sin^2(pi t)`.
pub fn haar_class_cdf(t: f64) -> f64 {
    t - (2.0 * PI * t).sin() / (2.0 * PI)
}

/// Independent generator for trial `stream` under a root seed.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The 120 elements of the binary icosahedral group, used as a uniform
/// grid on SU(2).
pub fn icosian_grid() -> Vec<GroupElement> {
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let mut out = Vec::with_capacity(120);
    // 8 units.
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut q = [0.0; 4];
            q[i] = s;
            out.push(GroupElement::from(q));
        }
    }
    // 16 of the form (+-1/2, +-1/2, +-1/2, +-1/2).
    for mask in 0..16u32 {
        let q: [f64; 4] = std::array::from_fn(|i| if mask >> i & 1 == 1 { -0.5 } else { 0.5 });
        out.push(GroupElement::from(q));
    }
    // 96 even permutations of (0, +-1/2, +-phi/2, +-1/(2 phi)).
    let even_perms: [[usize; 4]; 12] = [
        [0, 1, 2, 3],
        [0, 2, 3, 1],
        [0, 3, 1, 2],
        [1, 0, 3, 2],
        [1, 2, 0, 3],
        [1, 3, 2, 0],
        [2, 0, 1, 3],
        [2, 1, 3, 0],
        [2, 3, 0, 1],
        [3, 0, 2, 1],
        [3, 1, 0, 2],
        [3, 2, 1, 0],
    ];
    let base = [0.0, 0.5, phi / 2.0, 1.0 / (2.0 * phi)];
    for perm in even_perms {
        for mask in 0..8u32 {
            let signed = [
                base[0],
                if mask & 1 == 1 { -base[1] } else { base[1] },
                if mask & 2 == 2 { -base[2] } else { base[2] },
                if mask & 4 == 4 { -base[3] } else { base[3] },
            ];
            let mut q = [0.0; 4];
            for (slot, &src) in perm.iter().enumerate() {
                q[slot] = signed[src];
            }
            out.push(GroupElement::from(q));
        }
    }
    out
}
