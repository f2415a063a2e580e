//! Points of the unitary Schottky space `SU(2)^g / conjugation`, and the
//! trinion representation built from three class coordinates.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::polytope::trinion_membership;
use crate::su2::GroupElement;

/// Below this vector-part norm a generator is treated as central.
const CENTRAL_TOL: f64 = 1e-7;
/// Below this sine of the angle between axes two generators are treated as commuting.
const COMMUTING_TOL: f64 = 1e-7;
/// Word length of the fingerprint used when the canonical slice is not unique.
const FALLBACK_WORD_LENGTH: usize = 3;

/// A g-tuple of group elements standing for its simultaneous conjugacy class.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchottkyClass {
    pub generators: Vec<GroupElement>,
    /// Set when the tuple is already in the canonical slice.
    #[serde(default)]
    pub canonical: bool,
}

fn norm3(v: [f64; 3]) -> f64 {
    (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt()
}

fn cross(u: [f64; 3], v: [f64; 3]) -> [f64; 3] {
    [
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    ]
}

fn dot(u: [f64; 3], v: [f64; 3]) -> f64 {
    u[0] * v[0] + u[1] * v[1] + u[2] * v[2]
}

fn unit(v: [f64; 3]) -> [f64; 3] {
    let n = norm3(v);
    [v[0] / n, v[1] / n, v[2] / n]
}

/// Quaternion conjugating unit vector `from` onto unit vector `to`.
fn rotation_onto(from: [f64; 3], to: [f64; 3]) -> GroupElement {
    let c = dot(from, to);
    if c < -1.0 + 1e-15 {
        // Antipodal: half turn about any perpendicular axis.
        let trial = if from[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let axis = unit(cross(from, trial));
        return GroupElement::new(0.0, axis[0], axis[1], axis[2]);
    }
    let w = cross(from, to);
    GroupElement::new(1.0 + c, w[0], w[1], w[2])
}

impl SchottkyClass {
    pub fn new(generators: Vec<GroupElement>) -> Self {
        SchottkyClass {
            generators,
            canonical: false,
        }
    }

    pub fn genus(&self) -> usize {
        self.generators.len()
    }

    pub fn trivial(genus: usize) -> Self {
        SchottkyClass::new(vec![GroupElement::IDENTITY; genus])
    }

    /// Simultaneous conjugation by `h`.
    pub fn conjugated(&self, h: GroupElement) -> Self {
        SchottkyClass::new(
            self.generators
                .iter()
                .map(|&g| GroupElement::adjoint(h, g))
                .collect(),
        )
    }

    /// True when the canonical slice does not pin the class down: some
    /// generator is central, or all generators commute.
    pub fn is_degenerate(&self) -> bool {
        let axes: Vec<[f64; 3]> = self.generators.iter().map(|g| g.imaginary()).collect();
        if axes.iter().any(|&v| norm3(v) <= CENTRAL_TOL) {
            return true;
        }
        let first = unit(axes[0]);
        axes.iter()
            .all(|&v| norm3(cross(first, unit(v))) <= COMMUTING_TOL)
    }

    /// Conjugates so the first non-central generator points along the
    /// diagonal (`i`) axis, then rotates about that axis so the next
    /// generator not commuting with it lies in the `(i, j)` half-plane with
    /// positive `j` component. Central generators are skipped; fully
    /// central tuples are returned unchanged.
    pub fn canonicalize(&self) -> SchottkyClass {
        let gens = &self.generators;
        let Some(first) = gens.iter().position(|g| !g.is_central(CENTRAL_TOL)) else {
            return SchottkyClass {
                generators: gens.clone(),
                canonical: true,
            };
        };
        let diag = [1.0, 0.0, 0.0];
        let h1 = rotation_onto(unit(gens[first].imaginary()), diag);
        let mut out: Vec<GroupElement> =
            gens.iter().map(|&g| GroupElement::adjoint(h1, g)).collect();
        let second = out.iter().skip(first + 1).position(|g| {
            let [_, c, d] = g.imaginary();
            (c * c + d * d).sqrt() > COMMUTING_TOL * norm3(g.imaginary()).max(CENTRAL_TOL)
                && !g.is_central(CENTRAL_TOL)
        });
        if let Some(offset) = second {
            let [_, c, d] = out[first + 1 + offset].imaginary();
            // Rotate the (j, k) plane by -atan2(d, c) about i.
            let h2 = GroupElement::rotation_about(diag, -d.atan2(c));
            out = out.iter().map(|&g| GroupElement::adjoint(h2, g)).collect();
        }
        SchottkyClass {
            generators: out,
            canonical: true,
        }
    }

    /// Traces of the Lyndon words in the generators of length at most
    /// `max_len`, ordered by length and then lexicographically. Lyndon words
    /// pick one representative per cyclic class of primitive positive words.
    pub fn trace_fingerprint(&self, max_len: usize) -> Vec<f64> {
        lyndon_words(self.genus(), max_len)
            .iter()
            .map(|word| {
                word.iter()
                    .map(|&i| self.generators[i])
                    .product::<GroupElement>()
                    .trace()
            })
            .collect()
    }

    /// Distance between classes: Euclidean distance of canonical forms for
    /// generic tuples, fingerprint distance when either tuple is degenerate.
    pub fn class_distance(&self, other: &SchottkyClass) -> Result<f64> {
        if self.genus() != other.genus() {
            return Err(Error::GenusMismatch(self.genus(), other.genus()));
        }
        if self.genus() == 0 {
            return Ok(0.0);
        }
        if self.is_degenerate() || other.is_degenerate() {
            let (a, b) = (
                self.trace_fingerprint(FALLBACK_WORD_LENGTH),
                other.trace_fingerprint(FALLBACK_WORD_LENGTH),
            );
            return Ok(euclid(&a, &b));
        }
        let (a, b) = (self.canonicalize(), other.canonicalize());
        let flat = |c: &SchottkyClass| -> Vec<f64> {
            c.generators.iter().flat_map(|g| g.components()).collect()
        };
        Ok(euclid(&flat(&a), &flat(&b)))
    }
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Lyndon words over `k` letters up to length `n`, in shortlex order.
pub fn lyndon_words(k: usize, n: usize) -> Vec<Vec<usize>> {
    let mut words = Vec::new();
    if k == 0 || n == 0 {
        return words;
    }
    // Duval's generation algorithm.
    let mut w: Vec<usize> = vec![0];
    loop {
        words.push(w.clone());
        let m = w.len();
        while w.len() < n {
            let c = w[w.len() - m];
            w.push(c);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    words
}

/// Boundary monodromies `(A, B, C)` of a trinion with `A B C = 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrinionRep {
    pub a: GroupElement,
    pub b: GroupElement,
    pub c: GroupElement,
}

impl TrinionRep {
    pub fn as_array(&self) -> [GroupElement; 3] {
        [self.a, self.b, self.c]
    }

    pub fn classes(&self) -> [f64; 3] {
        self.as_array().map(|g| g.conj_class())
    }

    /// Distance of `A B C` from the identity.
    pub fn relation_defect(&self) -> f64 {
        (self.a * self.b * self.c).distance(GroupElement::IDENTITY)
    }
}

/// Deterministic trinion representative with class coordinates
/// `(t1, t2, t3)`: `A` along the diagonal axis, `B` in the `(z, x)` plane at
/// the angle fixed by the trace of `A B`, and `C = (A B)^{-1}`.
pub fn trinion_rep(t1: f64, t2: f64, t3: f64) -> Result<TrinionRep> {
    if !trinion_membership(t1, t2, t3)? {
        return Err(Error::OutsideTetrahedron(t1, t2, t3));
    }
    let z = [0.0, 0.0, 1.0];
    let a = GroupElement::from_class_axis(t1, z)?;
    let (s1, c1) = (PI * t1).sin_cos();
    let (s2, c2) = (PI * t2).sin_cos();
    let c3 = (PI * t3).cos();
    let denom = s1 * s2;
    let cos_psi = if denom.abs() < 1e-300 {
        1.0
    } else {
        ((c1 * c2 - c3) / denom).clamp(-1.0, 1.0)
    };
    let sin_psi = (1.0 - cos_psi * cos_psi).max(0.0).sqrt();
    let b = GroupElement::from_class_axis(t2, [sin_psi, 0.0, cos_psi])?;
    let c = (a * b).inverse();
    Ok(TrinionRep { a, b, c })
}
