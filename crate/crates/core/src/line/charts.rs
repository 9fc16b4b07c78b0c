//! Stereographic chart from `p₀` and the hemisphere chart `(u, u̇, s)` around it.

use crate::error::GeometryError;
use crate::linalg::Vector;

use super::ZPoint;

/// Smallest admissible `1 − α` for the stereographic chart.
pub const CHART_EPSILON: f64 = 1e-6;

/// Stereographic coordinates `(x, ẋ, s)` on `T(Sⁿ ∖ {p₀}) × ℝ₊`, `x = u/(1−α)`.
#[derive(Clone, Debug, PartialEq)]
pub struct StereoPoint {
    pub x: Vector,
    pub xdot: Vector,
    pub s: f64,
}

impl StereoPoint {
    pub fn new(x: Vector, xdot: Vector, s: f64) -> Result<Self, GeometryError> {
        if x.len() != xdot.len() {
            return Err(GeometryError::DimensionMismatch { expected: x.len(), got: xdot.len() });
        }
        if !(s > 0.0) {
            return Err(GeometryError::NonPositiveS(s));
        }
        Ok(Self { x, xdot, s })
    }

    pub fn to_z(&self) -> ZPoint {
        let (x, xd) = (&self.x, &self.xdot);
        let q = 1.0 + x.norm_squared();
        let xx = x.dot(xd);
        let p = (x * (2.0 / q)).push((x.norm_squared() - 1.0) / q);
        let mu = x * (-4.0 * xx / (q * q)) + xd * (2.0 / q);
        ZPoint { p, v: mu.push(4.0 * xx / (q * q)), s: self.s }
    }

    pub fn from_z(z: &ZPoint, eps: f64) -> Result<Self, GeometryError> {
        let one_minus_alpha = 1.0 - z.alpha();
        if one_minus_alpha < eps {
            return Err(GeometryError::ChartSingularity { one_minus_alpha });
        }
        let u = z.u();
        let x = &u / one_minus_alpha;
        let xdot = u * (z.r() / (one_minus_alpha * one_minus_alpha)) + z.mu() / one_minus_alpha;
        Ok(Self { x, xdot, s: z.s })
    }

    /// Base point of the source: `s x − 2ẋ/(1+|x|²)`.
    pub fn source_x(&self) -> Vector {
        &self.x * self.s - &self.xdot * (2.0 / (1.0 + self.x.norm_squared()))
    }

    pub fn inverse(&self) -> Self {
        let q = 1.0 + self.x.norm_squared();
        let xt = self.source_x();
        let xdot = &self.xdot * (-(1.0 + xt.norm_squared()) / (q * self.s));
        Self { x: xt, xdot, s: 1.0 / self.s }
    }

    pub fn composability_gap(&self, other: &Self) -> f64 {
        (self.source_x() - &other.x).amax()
    }

    /// `(x₁, s₂ẋ₁ + ẋ₂(1+|x₁|²)/(1+|x₂|²), s₁s₂)`.
    pub fn multiply(&self, other: &Self, tol: f64) -> Result<Self, GeometryError> {
        let mismatch = self.composability_gap(other);
        if mismatch > tol * (1.0 + other.x.amax()) {
            return Err(GeometryError::NotComposable { mismatch });
        }
        let ratio = (1.0 + self.x.norm_squared()) / (1.0 + other.x.norm_squared());
        Ok(Self { x: self.x.clone(), xdot: &self.xdot * other.s + &other.xdot * ratio, s: self.s * other.s })
    }
}

/// Hemisphere coordinates `(u, u̇, s)` with `p = (u; α(u))`, `α = √(1−|u|²)`.
#[derive(Clone, Debug, PartialEq)]
pub struct UChartPoint {
    pub u: Vector,
    pub udot: Vector,
    pub s: f64,
}

impl UChartPoint {
    pub fn new(u: Vector, udot: Vector, s: f64) -> Result<Self, GeometryError> {
        if u.len() != udot.len() {
            return Err(GeometryError::DimensionMismatch { expected: u.len(), got: udot.len() });
        }
        if !(s > 0.0) {
            return Err(GeometryError::NonPositiveS(s));
        }
        let norm = u.norm();
        if norm >= 1.0 {
            return Err(GeometryError::OutsideChart { what: "|u|", value: norm });
        }
        Ok(Self { u, udot, s })
    }

    pub fn alpha(&self) -> f64 {
        alpha(&self.u)
    }

    pub fn to_z(&self) -> ZPoint {
        let a = self.alpha();
        let p = self.u.clone().push(a);
        let v = self.udot.clone().push(-self.u.dot(&self.udot) / a);
        ZPoint { p, v, s: self.s }
    }

    /// Requires `α > eps`.
    pub fn from_z(z: &ZPoint, eps: f64) -> Result<Self, GeometryError> {
        if z.alpha() <= eps {
            return Err(GeometryError::OutsideChart { what: "alpha", value: z.alpha() });
        }
        Ok(Self { u: z.u(), udot: z.mu(), s: z.s })
    }

    /// `s + uᵗu̇/α`.
    pub fn t(&self) -> f64 {
        self.s + self.u.dot(&self.udot) / self.alpha()
    }

    /// `A(u, u̇, s) = t²(1+α) − 2t uᵗu̇ + (1−α)(|u̇|² − 1)`.
    pub fn a_value(&self) -> f64 {
        let a = self.alpha();
        let t = self.t();
        t * t * (1.0 + a) - 2.0 * t * self.u.dot(&self.udot) + (1.0 - a) * (self.udot.norm_squared() - 1.0)
    }

    /// `k = t u − (1−α) u̇`.
    pub fn k(&self) -> Vector {
        &self.u * self.t() - &self.udot * (1.0 - self.alpha())
    }

    /// The source lies in the open upper hemisphere.
    pub fn source_in_chart(&self) -> bool {
        self.a_value() > 0.0
    }

    /// `|k| > 1 − α`, equivalent to `A > 0` when `u ≠ 0`.
    pub fn unsquared_predicate(&self) -> bool {
        self.k().norm() > 1.0 - self.alpha()
    }

    /// `ũ = 2k / (A + 2(1−α))`.
    pub fn source_u(&self) -> Result<Vector, GeometryError> {
        let big_a = self.a_value();
        if big_a <= 0.0 {
            return Err(GeometryError::OutsideChart { what: "A", value: big_a });
        }
        Ok(self.k() * (2.0 / (big_a + 2.0 * (1.0 - self.alpha()))))
    }

    pub fn source(&self) -> Result<Self, GeometryError> {
        let u = self.source_u()?;
        let d = u.len();
        Ok(Self { u, udot: Vector::zeros(d), s: 1.0 })
    }

    /// Velocity `u̇` with prescribed source `ũ`, for fixed `(u, s)` with `u, ũ ≠ 0`.
    pub fn udot_for_source(u: &Vector, s: f64, source_u: &Vector) -> Vector {
        let a = alpha(u);
        let at = alpha(source_u);
        let coeff = u.dot(source_u) / (1.0 - at) - a * s;
        u * (coeff / (1.0 - a)) - source_u / (1.0 - at)
    }

    /// Product with `(ũ, u̇₂, s₂)` where `ũ` is the source of `self`.
    pub fn multiply(&self, udot2: &Vector, s2: f64) -> Result<Self, GeometryError> {
        let big_a = self.a_value();
        if big_a <= 0.0 {
            return Err(GeometryError::OutsideChart { what: "A", value: big_a });
        }
        let (u1, ud1) = (&self.u, &self.udot);
        let a1 = self.alpha();
        let t1 = self.t();
        let (u1_ud2, ud1_ud2) = (u1.dot(udot2), ud1.dot(udot2));
        let scale = s2 + 2.0 * (t1 * u1_ud2 - (1.0 - a1) * ud1_ud2) / big_a;
        let along_u = -((t1 * t1 + ud1.norm_squared() - 1.0) * u1_ud2 + 2.0 * a1 * self.s * ud1_ud2) / big_a;
        let udot = u1 * along_u + ud1 * scale + udot2;
        Ok(Self { u: u1.clone(), udot, s: self.s * s2 })
    }
}

pub fn alpha(u: &Vector) -> f64 {
    (1.0 - u.norm_squared()).max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::line::{random_z, z_inverse, z_multiply, z_source};
    use crate::linalg::random_vector;
    use crate::lorentz::Tolerances;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn south_pole_is_origin() {
        let z = StereoPoint { x: Vector::zeros(2), xdot: Vector::zeros(2), s: 1.0 }.to_z();
        assert_eq!(z.p, Vector::from_vec(vec![0.0, 0.0, -1.0]));
    }

    #[test]
    fn stereo_round_trip_and_tangency() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..50 {
            let q = StereoPoint { x: random_vector(&mut rng, 3, 1.0), xdot: random_vector(&mut rng, 3, 1.0), s: 1.5 };
            let z = q.to_z();
            assert!(z.p.dot(&z.v).abs() < 1e-14);
            let back = StereoPoint::from_z(&z, CHART_EPSILON).unwrap();
            assert!((back.x - &q.x).amax() < 1e-12 && (back.xdot - &q.xdot).amax() < 1e-12);
        }
    }

    #[test]
    fn stereo_rejects_p0() {
        let z = crate::line::ZPoint::p0_unit(2);
        assert!(matches!(StereoPoint::from_z(&z, CHART_EPSILON), Err(GeometryError::ChartSingularity { .. })));
    }

    #[test]
    fn stereo_inverse_and_product_match_global() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let tol = Tolerances::default();
        for _ in 0..30 {
            let z1 = random_z(&mut rng, 3, 1.0);
            let q1 = StereoPoint::from_z(&z1, CHART_EPSILON).unwrap();
            assert!(q1.inverse().to_z().distance(&z_inverse(&z1)) < 1e-10);
            let z2 = crate::line::random_composable(&mut rng, &z1, 1.0);
            let q2 = StereoPoint::from_z(&z2, CHART_EPSILON).unwrap();
            let prod = q1.multiply(&q2, 1e-8).unwrap().to_z();
            assert!(prod.distance(&z_multiply(&z1, &z2, &tol).unwrap()) < 1e-9);
        }
    }

    fn random_u_point(rng: &mut ChaCha8Rng, n: usize) -> UChartPoint {
        loop {
            let u = random_vector(rng, n, 0.4);
            let udot = random_vector(rng, n, 0.4);
            let s = rng.random_range(-0.5..0.5f64).exp();
            if let Ok(p) = UChartPoint::new(u, udot, s) {
                if p.alpha() > 0.3 && p.source_u().is_ok_and(|t| alpha(&t) > 0.3) {
                    return p;
                }
            }
        }
    }

    #[test]
    fn u_chart_source_and_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..50 {
            let q = random_u_point(&mut rng, 3);
            let ut = q.source_u().unwrap();
            let global = z_source(&q.to_z());
            assert!((global.u() - &ut).amax() < 1e-10);
            let a = q.alpha();
            let big_a = q.a_value();
            assert!(((1.0 - alpha(&ut)) - 2.0 * (1.0 - a) / (big_a + 2.0 * (1.0 - a))).abs() < 1e-12);
            assert!((&ut / (1.0 - alpha(&ut)) - q.k() / (1.0 - a)).amax() < 1e-9);
            assert!((q.k().norm_squared() - (1.0 - a) * (big_a + 1.0 - a)).abs() < 1e-12);
            assert_eq!(q.source_in_chart(), q.unsquared_predicate());
            let back = UChartPoint::udot_for_source(&q.u, q.s, &ut);
            assert!((back - &q.udot).amax() < 1e-8);
        }
    }

    #[test]
    fn u_chart_product_matches_global() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let tol = Tolerances::default();
        for _ in 0..50 {
            let q1 = random_u_point(&mut rng, 3);
            let q2 = UChartPoint::new(q1.source_u().unwrap(), random_vector(&mut rng, 3, 0.4), 0.8).unwrap();
            let prod = q1.multiply(&q2.udot, q2.s).unwrap();
            let global = z_multiply(&q1.to_z(), &q2.to_z(), &tol).unwrap();
            assert!(prod.to_z().distance(&global) < 1e-9, "{}", prod.to_z().distance(&global));
        }
    }

    #[test]
    fn u_chart_product_at_origin() {
        let q1 = UChartPoint::new(Vector::zeros(2), Vector::from_vec(vec![0.2, 0.1]), 1.3).unwrap();
        let ud2 = Vector::from_vec(vec![-0.4, 0.5]);
        let prod = q1.multiply(&ud2, 0.7).unwrap();
        assert!((prod.udot - (&q1.udot * 0.7 + &ud2)).amax() < 1e-15);
    }
}
