//! Lie algebroids of the line groupoid `Z` and of its unit-scale slice.
//!
//! The algebroid of `Z` is `TSⁿ ⊕ ℝ` with elements `(p, v̇, ṡ)`; it is
//! trivialized by `(p, v̇ + ṡp) ∈ Sⁿ × ℝⁿ⁺¹`, under which the frame `X̃_i`
//! becomes the constant basis `e_i`. The algebroid of the slice is `TSⁿ`
//! with the redundant frame `Ỹ_i = P_p(e_i)`.
//!
//! Indices are zero-based: index `n` is the distinguished direction `e_{n+1}`.

pub mod fields;
pub mod poisson;

use crate::error::GeometryError;
use crate::linalg::{tangent_part, unit, Vector};

#[derive(Clone, Debug, PartialEq)]
pub struct AlgebroidVector {
    pub p: Vector,
    pub vdot: Vector,
    pub sdot: f64,
}

impl AlgebroidVector {
    pub fn new(p: Vector, vdot: Vector, sdot: f64, tol: f64) -> Result<Self, GeometryError> {
        check_tangent(&p, &vdot, tol)?;
        Ok(Self { p, vdot, sdot })
    }

    /// `v̇ + ṡp`.
    pub fn trivialize(&self) -> Vector {
        &self.vdot + &self.p * self.sdot
    }

    pub fn from_trivialization(p: &Vector, w: &Vector) -> Self {
        Self { p: p.clone(), vdot: tangent_part(p, w), sdot: p.dot(w) }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.vdot - &other.vdot).amax().max((self.sdot - other.sdot).abs())
    }
}

/// Covector `ψ + ρ` on `T_pSⁿ ⊕ ℝ`.
#[derive(Clone, Debug, PartialEq)]
pub struct DualCovector {
    pub p: Vector,
    pub psi: Vector,
    pub rho: f64,
}

impl DualCovector {
    pub fn new(p: Vector, psi: Vector, rho: f64, tol: f64) -> Result<Self, GeometryError> {
        check_tangent(&p, &psi, tol)?;
        Ok(Self { p, psi, rho })
    }

    pub fn pair(&self, a: &AlgebroidVector) -> f64 {
        self.psi.dot(&a.vdot) + self.rho * a.sdot
    }
}

fn check_tangent(p: &Vector, w: &Vector, tol: f64) -> Result<(), GeometryError> {
    if p.len() != w.len() {
        return Err(GeometryError::DimensionMismatch { expected: p.len(), got: w.len() });
    }
    let norm = (p.norm() - 1.0).abs();
    if norm > tol {
        return Err(GeometryError::InvariantViolation { what: "unit base point", residual: norm, tolerance: tol });
    }
    let tangency = p.dot(w).abs();
    if tangency > tol * w.norm().max(1.0) {
        return Err(GeometryError::InvariantViolation { what: "tangency", residual: tangency, tolerance: tol });
    }
    Ok(())
}

/// `X̃_i(p) = (p, e_i − pⁱp, pⁱ)`.
pub fn basis_section_lz(i: usize, p: &Vector) -> AlgebroidVector {
    AlgebroidVector::from_trivialization(p, &unit(p.len(), i))
}

/// Coefficients of `[X̃_i, X̃_j]` in the frame `X̃`.
pub fn bracket_lz_coefficients(i: usize, j: usize, p: &Vector) -> Vector {
    let n = p.len() - 1;
    let mut c = Vector::zeros(n + 1);
    if i == j {
        return c;
    }
    if i == n {
        return -bracket_lz_coefficients(j, i, p);
    }
    if j < n {
        c[i] += 2.0 * p[j];
        c[j] -= 2.0 * p[i];
        return c;
    }
    c[i] += 2.0 * p[n] - 1.0;
    c[n] -= 2.0 * p[i];
    c + p * (2.0 * p[i])
}

pub fn bracket_lz(i: usize, j: usize, p: &Vector) -> AlgebroidVector {
    AlgebroidVector::from_trivialization(p, &bracket_lz_coefficients(i, j, p))
}

/// Bracket of the constant sections `e_i`, `e_j` of `Sⁿ × ℝⁿ⁺¹`.
pub fn constant_section_bracket(i: usize, j: usize, p: &Vector) -> Vector {
    let n = p.len() - 1;
    if i == j {
        return Vector::zeros(n + 1);
    }
    if i == n {
        return -constant_section_bracket(j, i, p);
    }
    let (ei, ej) = (unit(n + 1, i), unit(n + 1, j));
    let mut out = (&ei * p[j] - &ej * p[i]) * 2.0;
    if j == n {
        // (I − 2P_p) e_i
        out += &ei - tangent_part(p, &ei) * 2.0;
    }
    out
}

/// `(α − 1)v̇ + ṡ(e_{n+1} − αp)`.
pub fn anchor_lz(a: &AlgebroidVector) -> Vector {
    let n = a.p.len() - 1;
    let alpha = a.p[n];
    &a.vdot * (alpha - 1.0) + (unit(n + 1, n) - &a.p * alpha) * a.sdot
}

/// `P_p(pⁱe_{n+1} + p^{n+1}e_i − e_i)`.
pub fn anchor_lz_basis(i: usize, p: &Vector) -> Vector {
    let n = p.len() - 1;
    let w = unit(n + 1, n) * p[i] + unit(n + 1, i) * (p[n] - 1.0);
    tangent_part(p, &w)
}

/// `Ỹ_i(p) = P_p(e_i)`.
pub fn basis_section_ls(i: usize, p: &Vector) -> Vector {
    tangent_part(p, &unit(p.len(), i))
}

/// Coefficients of `[Ỹ_i, Ỹ_j]` in the frame `Ỹ`.
pub fn bracket_ls_coefficients(i: usize, j: usize, p: &Vector) -> Vector {
    let n = p.len() - 1;
    let delta = |k: usize| if k == n { 1.0 } else { 0.0 };
    let mut c = Vector::zeros(n + 1);
    c[i] += p[j] - delta(j);
    c[j] -= p[i] - delta(i);
    c
}

pub fn bracket_ls(i: usize, j: usize, p: &Vector) -> Vector {
    tangent_part(p, &bracket_ls_coefficients(i, j, p))
}

/// `(p^{n+1} − 1) v`.
pub fn anchor_ls(p: &Vector, v: &Vector) -> Vector {
    v * (p[p.len() - 1] - 1.0)
}

/// A frame of an algebroid over `Sⁿ` given by structure functions.
pub trait FrameAlgebroid {
    /// Number of frame elements.
    fn frame_len(&self, p: &Vector) -> usize {
        p.len()
    }
    fn structure(&self, i: usize, j: usize, p: &Vector) -> Vector;
    fn anchor(&self, i: usize, p: &Vector) -> Vector;
    /// The section with the given coefficients as a vector in a fixed ambient space.
    fn evaluate(&self, coefficients: &Vector, p: &Vector) -> Vector;
}

/// The frame `X̃_i` of the algebroid of `Z`, evaluated in the trivialization.
#[derive(Clone, Copy, Debug, Default)]
pub struct LineAlgebroid;

/// The frame `Ỹ_i` of the algebroid of the slice, evaluated in `ℝⁿ⁺¹`.
#[derive(Clone, Copy, Debug, Default)]
pub struct SliceAlgebroid;

impl FrameAlgebroid for LineAlgebroid {
    fn structure(&self, i: usize, j: usize, p: &Vector) -> Vector {
        bracket_lz_coefficients(i, j, p)
    }
    fn anchor(&self, i: usize, p: &Vector) -> Vector {
        anchor_lz_basis(i, p)
    }
    fn evaluate(&self, coefficients: &Vector, _p: &Vector) -> Vector {
        coefficients.clone()
    }
}

impl FrameAlgebroid for SliceAlgebroid {
    fn structure(&self, i: usize, j: usize, p: &Vector) -> Vector {
        bracket_ls_coefficients(i, j, p)
    }
    fn anchor(&self, i: usize, p: &Vector) -> Vector {
        anchor_ls(p, &basis_section_ls(i, p))
    }
    fn evaluate(&self, coefficients: &Vector, p: &Vector) -> Vector {
        tangent_part(p, coefficients)
    }
}

/// Step for differentiating structure functions. They are polynomials of
/// degree at most two in `p`, on which central differences are exact.
const POLY_STEP: f64 = 1e-2;

/// Cyclic sum `[[X_i, X_j], X_k] + …` expanded with the Leibniz rule.
pub fn jacobiator<A: FrameAlgebroid>(alg: &A, i: usize, j: usize, k: usize, p: &Vector) -> Vector {
    let m = alg.frame_len(p);
    let mut total = Vector::zeros(m);
    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
        let cab = alg.structure(a, b, p);
        for l in 0..m {
            if cab[l] != 0.0 {
                total += alg.structure(l, c, p) * cab[l];
            }
        }
        let dir = alg.anchor(c, p);
        let deriv = (alg.structure(a, b, &(p + &dir * POLY_STEP)) - alg.structure(a, b, &(p - &dir * POLY_STEP)))
            / (2.0 * POLY_STEP);
        total -= deriv;
    }
    alg.evaluate(&total, p)
}

/// Largest Jacobiator over all index triples.
pub fn max_jacobiator<A: FrameAlgebroid>(alg: &A, p: &Vector) -> f64 {
    let m = alg.frame_len(p);
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                worst = worst.max(jacobiator(alg, i, j, k, p).amax());
            }
        }
    }
    worst
}

/// Largest `|[X_i, X_j] + [X_j, X_i]|` over all pairs.
pub fn max_antisymmetry<A: FrameAlgebroid>(alg: &A, p: &Vector) -> f64 {
    let m = alg.frame_len(p);
    let mut worst: f64 = 0.0;
    for i in 0..m {
        for j in 0..m {
            let s = alg.structure(i, j, p) + alg.structure(j, i, p);
            worst = worst.max(alg.evaluate(&s, p).amax());
        }
    }
    worst
}

/// `ρ(Σ cₐ Xₐ)`.
pub fn anchor_of_combination<A: FrameAlgebroid>(alg: &A, coefficients: &Vector, p: &Vector) -> Vector {
    let mut out = Vector::zeros(p.len());
    for (a, &c) in coefficients.iter().enumerate() {
        if c != 0.0 {
            out += alg.anchor(a, p) * c;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::random_unit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sections_at_p0_and_pole() {
        let n = 3;
        let p0 = unit(n + 1, n);
        for i in 0..=n {
            let x = basis_section_lz(i, &p0);
            let expected = if i == n { Vector::zeros(n + 1) } else { unit(n + 1, i) };
            assert_eq!(x.vdot, expected);
            assert_eq!(x.sdot, if i == n { 1.0 } else { 0.0 });
            assert!(anchor_lz(&x).amax() < 1e-15);
        }
        let e1 = unit(n + 1, 0);
        let x = basis_section_lz(0, &e1);
        assert!(x.vdot.amax() < 1e-15 && (x.sdot - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trivialization_sends_frame_to_standard_basis() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let p = random_unit(&mut rng, 4);
        for i in 0..4 {
            let x = basis_section_lz(i, &p);
            assert!(x.p.dot(&x.vdot).abs() < 1e-15);
            assert!((x.trivialize() - unit(4, i)).amax() < 1e-15);
        }
    }

    #[test]
    fn bracket_with_last_at_p0() {
        let n = 3;
        let p0 = unit(n + 1, n);
        for i in 0..n {
            assert!(bracket_lz(i, n, &p0).distance(&basis_section_lz(i, &p0)) < 1e-15);
        }
    }

    #[test]
    fn constant_section_form_agrees() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = random_unit(&mut rng, 4);
        for i in 0..4 {
            for j in 0..4 {
                assert!((constant_section_bracket(i, j, &p) - bracket_lz_coefficients(i, j, &p)).amax() < 1e-14);
            }
        }
    }

    #[test]
    fn anchor_forms_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let p = random_unit(&mut rng, 4);
        for i in 0..4 {
            assert!((anchor_lz(&basis_section_lz(i, &p)) - anchor_lz_basis(i, &p)).amax() < 1e-15);
        }
        let v = crate::linalg::random_tangent(&mut rng, &p, 1.0);
        let a = AlgebroidVector { p: p.clone(), vdot: v.clone(), sdot: 0.0 };
        assert!((anchor_lz(&a) - &v * (p[3] - 1.0)).amax() < 1e-15);
    }

    #[test]
    fn slice_brackets_vanish_at_p0() {
        let p0 = unit(4, 3);
        for i in 0..4 {
            for j in 0..4 {
                assert!(bracket_ls(i, j, &p0).amax() < 1e-15);
            }
        }
        let south = -unit(4, 3);
        let v = unit(4, 1);
        assert_eq!(anchor_ls(&south, &v), &v * -2.0);
        assert!(anchor_ls(&p0, &v).amax() == 0.0);
    }

    #[test]
    fn jacobi_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for d in 3..6 {
            let p = random_unit(&mut rng, d);
            assert!(max_jacobiator(&LineAlgebroid, &p) < 1e-9);
            assert!(max_jacobiator(&SliceAlgebroid, &p) < 1e-9);
            assert!(max_antisymmetry(&LineAlgebroid, &p) == 0.0);
            assert!(max_antisymmetry(&SliceAlgebroid, &p) == 0.0);
        }
    }
}
