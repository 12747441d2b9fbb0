//! Dense complex linear algebra for one- and two-qubit objects.
//!
//! Everything a two-dimensional resource system needs and nothing more:
//! 2x2 / 4x4 complex matrices, state vectors, Kronecker products, the Bell
//! state, Bloch-angle parameterizations of unitaries and projective
//! measurement bases, and the joint Born rule on the Bell state.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Wrap an angle into `[0, limit)`, guarding the `rem_euclid` edge case
/// where a tiny negative input rounds up to `limit` itself.
fn wrap_angle(a: f64, limit: f64) -> f64 {
    let mut w = a.rem_euclid(limit);
    if w >= limit {
        w = 0.0;
    }
    w
}

/// 2x2 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2(pub [[Complex64; 2]; 2]);

/// 4x4 complex matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat4(pub [[Complex64; 4]; 4]);

/// Two-component complex state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec2(pub [Complex64; 2]);

/// Four-component complex state vector.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Vec4(pub [Complex64; 4]);

impl Mat2 {
    pub fn identity() -> Self {
        Mat2([[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]])
    }

    pub fn not_gate() -> Self {
        Mat2([[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]])
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        let mut out = [[c(0.0, 0.0); 2]; 2];
        for (i, row) in out.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.0[i][0] * rhs.0[0][j] + self.0[i][1] * rhs.0[1][j];
            }
        }
        Mat2(out)
    }

    pub fn mul_vec(&self, v: &Vec2) -> Vec2 {
        Vec2([
            self.0[0][0] * v.0[0] + self.0[0][1] * v.0[1],
            self.0[1][0] * v.0[0] + self.0[1][1] * v.0[1],
        ])
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2([[self.0[0][0], self.0[1][0]], [self.0[0][1], self.0[1][1]]])
    }

    pub fn conj(&self) -> Mat2 {
        let mut out = self.0;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e = e.conj();
            }
        }
        Mat2(out)
    }

    pub fn adjoint(&self) -> Mat2 {
        self.transpose().conj()
    }

    pub fn scale(&self, z: Complex64) -> Mat2 {
        let mut out = self.0;
        for row in out.iter_mut() {
            for e in row.iter_mut() {
                *e *= z;
            }
        }
        Mat2(out)
    }

    pub fn column(&self, j: usize) -> Vec2 {
        Vec2([self.0[0][j], self.0[1][j]])
    }

    /// Max-norm distance from the identity of `self† self`.
    pub fn unitarity_defect(&self) -> f64 {
        let gram = self.adjoint().mul(self);
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                worst = worst.max((gram.0[i][j] - expect).norm());
            }
        }
        worst
    }
}

impl Mat4 {
    pub fn identity() -> Self {
        let mut out = [[c(0.0, 0.0); 4]; 4];
        for (i, row) in out.iter_mut().enumerate() {
            row[i] = c(1.0, 0.0);
        }
        Mat4(out)
    }

    pub fn mul_vec(&self, v: &Vec4) -> Vec4 {
        let mut out = [c(0.0, 0.0); 4];
        for (i, o) in out.iter_mut().enumerate() {
            for k in 0..4 {
                *o += self.0[i][k] * v.0[k];
            }
        }
        Vec4(out)
    }

    pub fn unitarity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..4 {
            for j in 0..4 {
                let mut acc = c(0.0, 0.0);
                for k in 0..4 {
                    acc += self.0[k][i].conj() * self.0[k][j];
                }
                let expect = if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) };
                worst = worst.max((acc - expect).norm());
            }
        }
        worst
    }
}

impl Vec2 {
    pub fn ket0() -> Self {
        Vec2([c(1.0, 0.0), c(0.0, 0.0)])
    }

    pub fn ket1() -> Self {
        Vec2([c(0.0, 0.0), c(1.0, 0.0)])
    }

    pub fn inner(&self, rhs: &Vec2) -> Complex64 {
        self.0[0].conj() * rhs.0[0] + self.0[1].conj() * rhs.0[1]
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }
}

impl Vec4 {
    pub fn inner(&self, rhs: &Vec4) -> Complex64 {
        self.0
            .iter()
            .zip(rhs.0.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn norm(&self) -> f64 {
        self.inner(self).re.sqrt()
    }
}

/// Kronecker product of two 2x2 matrices.
pub fn kron(a: &Mat2, b: &Mat2) -> Mat4 {
    let mut out = [[c(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[2 * i + k][2 * j + l] = a.0[i][j] * b.0[k][l];
                }
            }
        }
    }
    Mat4(out)
}

/// Kronecker product of two 2-vectors.
pub fn kron_vec(a: &Vec2, b: &Vec2) -> Vec4 {
    Vec4([
        a.0[0] * b.0[0],
        a.0[0] * b.0[1],
        a.0[1] * b.0[0],
        a.0[1] * b.0[1],
    ])
}

/// The maximally entangled two-qubit state (|00> + |11>)/sqrt(2).
pub fn bell_state() -> Vec4 {
    Vec4([c(SQRT_HALF, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(SQRT_HALF, 0.0)])
}

/// Three-angle chart for a single-qubit unitary, complete up to global phase:
///
/// ```text
/// U(theta, phi, lam) = [ cos(theta/2)              -e^{i lam} sin(theta/2)        ]
///                      [ e^{i phi} sin(theta/2)     e^{i (phi+lam)} cos(theta/2)  ]
/// ```
///
/// Construction folds arbitrary real angles into the canonical ranges
/// `theta in [0, pi]`, `phi, lam in [0, 2pi)`; the folding changes the
/// realized matrix by at most a global phase, so no observable probability
/// moves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QubitUnitaryParams {
    pub theta: f64,
    pub phi: f64,
    pub lam: f64,
}

impl QubitUnitaryParams {
    pub fn new(theta: f64, phi: f64, lam: f64) -> Self {
        // Fold theta into (-pi, pi], then lift a negative theta with the
        // exact identity U(-t, p, l) = U(t, p+pi, l+pi).
        let mut t = wrap_angle(theta, TAU);
        let mut p = phi;
        let mut l = lam;
        if t > PI {
            t -= TAU;
        }
        if t < 0.0 {
            t = -t;
            p += PI;
            l += PI;
        }
        QubitUnitaryParams {
            theta: t,
            phi: wrap_angle(p, TAU),
            lam: wrap_angle(l, TAU),
        }
    }

    pub fn identity() -> Self {
        QubitUnitaryParams::new(0.0, 0.0, 0.0)
    }

    /// Parameters realizing the NOT gate (up to global phase).
    pub fn not_gate() -> Self {
        QubitUnitaryParams::new(PI, 0.0, PI)
    }
}

/// Realize the 2x2 unitary for the given angles.
pub fn realize_unitary(p: &QubitUnitaryParams) -> Mat2 {
    let (ct, st) = ((p.theta / 2.0).cos(), (p.theta / 2.0).sin());
    let eip = c(p.phi.cos(), p.phi.sin());
    let eil = c(p.lam.cos(), p.lam.sin());
    Mat2([
        [c(ct, 0.0), -eil * st],
        [eip * st, eip * eil * ct],
    ])
}

/// Bloch angles of a projective single-qubit measurement basis:
///
/// ```text
/// |0_i> = cos(theta/2) |0> + e^{i phi} sin(theta/2) |1>
/// |1_i> = sin(theta/2) |0> - e^{i phi} cos(theta/2) |1>
/// ```
///
/// the two antipodal Bloch vectors at `(theta, phi)`. Angles are folded
/// into `theta in [0, pi]`, `phi in [0, 2pi)` on construction; folding
/// leaves both projectors untouched.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeasurementBasisParams {
    pub theta: f64,
    pub phi: f64,
}

impl MeasurementBasisParams {
    pub fn new(theta: f64, phi: f64) -> Self {
        // theta -> [0, 2pi); (pi, 2pi) reflects onto [0, pi) via
        // (2pi - t, phi + pi), which flips |0_i> by a global sign only.
        let mut t = wrap_angle(theta, TAU);
        let mut p = phi;
        if t > PI {
            t = TAU - t;
            p += PI;
        }
        MeasurementBasisParams {
            theta: t,
            phi: wrap_angle(p, TAU),
        }
    }

    pub fn computational() -> Self {
        MeasurementBasisParams::new(0.0, 0.0)
    }

    /// The two orthonormal basis vectors, outcome 0 first.
    pub fn basis_vectors(&self) -> (Vec2, Vec2) {
        let (ct, st) = ((self.theta / 2.0).cos(), (self.theta / 2.0).sin());
        let eip = c(self.phi.cos(), self.phi.sin());
        (
            Vec2([c(ct, 0.0), eip * st]),
            Vec2([c(st, 0.0), -(eip * ct)]),
        )
    }
}

/// Extract Bloch angles for the measurement basis whose outcome-0 projector
/// is |v><v|. The companion outcome-1 projector is determined by
/// orthogonality, so probabilities are preserved exactly.
pub fn basis_params_from_vector(v: &Vec2) -> MeasurementBasisParams {
    let a = v.0[0];
    let b = v.0[1];
    let theta = 2.0 * b.norm().atan2(a.norm());
    let phi = if a.norm() < 1e-15 || b.norm() < 1e-15 {
        0.0
    } else {
        b.arg() - a.arg()
    };
    MeasurementBasisParams::new(theta, phi)
}

/// Angles-plus-phase decomposition of a 2x2 unitary: returns params with
/// `realize_unitary(params)` equal to the input up to a global phase.
pub fn unitary_params_from_matrix(m: &Mat2) -> QubitUnitaryParams {
    let w00 = m.0[0][0];
    let w01 = m.0[0][1];
    let w10 = m.0[1][0];
    let w11 = m.0[1][1];
    let theta = 2.0 * w10.norm().atan2(w00.norm());
    if w10.norm() < 1e-12 {
        // Diagonal: phases live in phi + lam.
        let rel = (w11 * w00.conj()).arg();
        return QubitUnitaryParams::new(theta, rel, 0.0);
    }
    if w00.norm() < 1e-12 {
        // Anti-diagonal.
        return QubitUnitaryParams::new(theta, w10.arg(), (-w01).arg());
    }
    let alpha = w00.arg();
    QubitUnitaryParams::new(theta, w10.arg() - alpha, (-w01).arg() - alpha)
}

/// Joint outcome distribution of two local projective measurements on the
/// Bell state: `out[a][b]` is the probability of outcomes `(a, b)`.
pub fn born_joint(alice: &MeasurementBasisParams, bob: &MeasurementBasisParams) -> [[f64; 2]; 2] {
    let (a0, a1) = alice.basis_vectors();
    let (b0, b1) = bob.basis_vectors();
    born_joint_vectors(&a0, &a1, &b0, &b1)
}

/// Same as [`born_joint`], on explicit basis vectors.
pub fn born_joint_vectors(a0: &Vec2, a1: &Vec2, b0: &Vec2, b1: &Vec2) -> [[f64; 2]; 2] {
    let amp = |x: &Vec2, y: &Vec2| -> Complex64 {
        // <x y | phi+> = (conj(x0) conj(y0) + conj(x1) conj(y1)) / sqrt(2)
        (x.0[0].conj() * y.0[0].conj() + x.0[1].conj() * y.0[1].conj()) * SQRT_HALF
    };
    let p = |z: Complex64| z.norm_sqr();
    [
        [p(amp(a0, b0)), p(amp(a0, b1))],
        [p(amp(a1, b0)), p(amp(a1, b1))],
    ]
}
