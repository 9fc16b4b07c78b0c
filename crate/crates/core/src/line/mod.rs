//! The quotient `Z = G / B₀` of the groupoid over `B` by the right action of
//! `B₀ = SO(n)`, realized as `TSⁿ × ℝ₊`. A point is `(p, v, s)` with `p` a
//! unit vector of `ℝⁿ⁺¹`, `v ⊥ p` and `s > 0`; `v = (μ; r)` splits off the
//! last coordinate. The charts in [`charts`] are views of this form.

mod charts;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::linalg::{complete_frame, random_tangent, random_unit, unit, FrameCompletion, Matrix, Vector};
use crate::lorentz::{
    embed_b, embed_c, gb_multiply, iwasawa_bc, iwasawa_cb, BoostC, LorentzElement,
    RotationB, Tolerances,
};

pub use charts::{StereoPoint, UChartPoint, CHART_EPSILON};

/// Point `(p, v, s)` of `TSⁿ × ℝ₊`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ZPointJson", into = "ZPointJson")]
pub struct ZPoint {
    pub p: Vector,
    pub v: Vector,
    pub s: f64,
}

#[derive(Serialize, Deserialize)]
struct ZPointJson {
    p: Vec<f64>,
    v: Vec<f64>,
    s: f64,
}

impl From<ZPoint> for ZPointJson {
    fn from(z: ZPoint) -> Self {
        Self { p: z.p.iter().copied().collect(), v: z.v.iter().copied().collect(), s: z.s }
    }
}

impl TryFrom<ZPointJson> for ZPoint {
    type Error = GeometryError;

    fn try_from(j: ZPointJson) -> Result<Self, Self::Error> {
        ZPoint::new(Vector::from_vec(j.p), Vector::from_vec(j.v), j.s, 1e-9)
    }
}

impl ZPoint {
    pub fn new(p: Vector, v: Vector, s: f64, tol: f64) -> Result<Self, GeometryError> {
        let z = Self { p, v, s };
        z.validate(tol)?;
        Ok(z)
    }

    pub fn validate(&self, tol: f64) -> Result<(), GeometryError> {
        if self.p.len() < 2 || self.v.len() != self.p.len() {
            return Err(GeometryError::DimensionMismatch { expected: self.p.len().max(2), got: self.v.len() });
        }
        if !(self.s > 0.0) || !self.s.is_finite() {
            return Err(GeometryError::NonPositiveS(self.s));
        }
        let norm = (self.p.norm() - 1.0).abs();
        if norm > tol {
            return Err(GeometryError::InvariantViolation { what: "unit base point", residual: norm, tolerance: tol });
        }
        let tangency = self.p.dot(&self.v).abs();
        if tangency > tol * self.v.norm().max(1.0) {
            return Err(GeometryError::InvariantViolation { what: "tangency p·v = 0", residual: tangency, tolerance: tol });
        }
        Ok(())
    }

    /// Unit `(p, 0, 1)`.
    pub fn unit(p: Vector) -> Self {
        let d = p.len();
        Self { p, v: Vector::zeros(d), s: 1.0 }
    }

    /// Unit over the distinguished point `p₀ = e_{n+1}`.
    pub fn p0_unit(n: usize) -> Self {
        Self::unit(unit(n + 1, n))
    }

    pub fn n(&self) -> usize {
        self.p.len() - 1
    }

    pub fn u(&self) -> Vector {
        self.p.rows(0, self.n()).into_owned()
    }

    pub fn alpha(&self) -> f64 {
        self.p[self.n()]
    }

    pub fn mu(&self) -> Vector {
        self.v.rows(0, self.n()).into_owned()
    }

    pub fn r(&self) -> f64 {
        self.v[self.n()]
    }

    pub fn is_over_p0(&self, tol: f64) -> bool {
        1.0 - self.alpha() <= tol
    }

    /// `(bp, bv, s)`.
    pub fn rotate(&self, b: &RotationB) -> Self {
        Self { p: b.matrix() * &self.p, v: b.matrix() * &self.v, s: self.s }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.p - &other.p).amax().max((&self.v - &other.v).amax()).max((self.s - other.s).abs())
    }
}

/// Both evaluations of the projection: `(Λy; wᵗy)` and `b·(y; 0)`.
pub fn project_z_routes(g: &LorentzElement, tol: &Tolerances) -> Result<(ZPoint, ZPoint), GeometryError> {
    let (b, c) = iwasawa_bc(g, tol)?;
    let p = b.last_column();
    let blocks = {
        let mut v = b.lambda() * &c.y;
        v = v.push(b.w().dot(&c.y));
        v
    };
    let matrix_route = b.matrix() * c.y.push(0.0);
    Ok((ZPoint { p: p.clone(), v: blocks, s: c.s }, ZPoint { p, v: matrix_route, s: c.s }))
}

/// `π_Z(g)`, checking that both routes agree.
pub fn project_z(g: &LorentzElement, tol: &Tolerances) -> Result<ZPoint, GeometryError> {
    let (a, b) = project_z_routes(g, tol)?;
    let gap = a.distance(&b);
    if gap > tol.recon * a.v.norm().max(1.0) {
        return Err(GeometryError::InvariantViolation { what: "agreement of the projection routes", residual: gap, tolerance: tol.recon });
    }
    Ok(a)
}

/// Section of `π_Z` through the deterministic Householder frame at `p`.
pub fn lift_z(z: &ZPoint) -> LorentzElement {
    lift_z_with(z, FrameCompletion::Householder)
}

pub fn lift_z_with(z: &ZPoint, completion: FrameCompletion) -> LorentzElement {
    let frame = RotationB::from_matrix_unchecked(complete_frame(&z.p, completion));
    lift_z_with_frame(z, &frame)
}

/// Lift through any rotation whose last column is `p`.
pub fn lift_z_with_frame(z: &ZPoint, frame: &RotationB) -> LorentzElement {
    let n = z.n();
    let y = (frame.matrix().transpose() * &z.v).rows(0, n).into_owned();
    embed_b(frame).mul(&embed_c(&BoostC { s: z.s, y }))
}

/// Householder frame at `p` followed by a random element of `B₀`.
pub fn random_frame<R: Rng + ?Sized>(rng: &mut R, p: &Vector) -> RotationB {
    let n = p.len() - 1;
    let b0 = RotationB::from_b0(&crate::linalg::random_rotation(rng, n));
    RotationB::from_matrix_unchecked(complete_frame(p, FrameCompletion::Householder)).mul(&b0)
}

/// Closed-form inverse `(p₁, v₁, 1/s)`.
pub fn z_inverse(z: &ZPoint) -> ZPoint {
    let (u, a, mu, r, s) = (z.u(), z.alpha(), z.mu(), z.r(), z.s);
    let vv = z.v.norm_squared();
    let m = ((1.0 - a) * (vv + 1.0) + (1.0 + a) * s * s - 2.0 * r * s) / (2.0 * s * s);
    let ms2 = m * s * s;
    let ms3 = ms2 * s;
    let u1 = (&u * (s - r) - &mu * (1.0 - a)) / ms2;
    let a1 = 1.0 - (1.0 - a) / ms2;
    let r1 = ((1.0 - a) * vv - r * s) / ms3;
    let mu1 = &u * (-((2.0 * s - r) * vv + r * (1.0 - s * s)) / (2.0 * ms3)) + &mu * (r1 - 1.0 / s);
    ZPoint { p: u1.push(a1), v: mu1.push(r1), s: 1.0 / s }
}

/// `π_Z(s_B(lift_z(z)))`.
pub fn z_inverse_lift_route(z: &ZPoint, tol: &Tolerances) -> Result<ZPoint, GeometryError> {
    project_z(&crate::lorentz::gb_inverse(&lift_z(z), tol)?, tol)
}

pub fn z_target(z: &ZPoint) -> ZPoint {
    ZPoint::unit(z.p.clone())
}

pub fn z_source(z: &ZPoint) -> ZPoint {
    z_target(&z_inverse(z))
}

/// Product through lifts: `π_Z(g₁ · g₂Λ)` with `Λ = b_L(g₂)⁻¹ b_R(g₁) ∈ B₀`.
pub fn z_multiply(z1: &ZPoint, z2: &ZPoint, tol: &Tolerances) -> Result<ZPoint, GeometryError> {
    z_multiply_lifted(&lift_z(z1), &lift_z(z2), z1, z2, tol)
}

/// Same product with caller-chosen frames for both lifts.
pub fn z_multiply_with_frames(
    z1: &ZPoint,
    z2: &ZPoint,
    frame1: &RotationB,
    frame2: &RotationB,
    tol: &Tolerances,
) -> Result<ZPoint, GeometryError> {
    z_multiply_lifted(&lift_z_with_frame(z1, frame1), &lift_z_with_frame(z2, frame2), z1, z2, tol)
}

fn z_multiply_lifted(
    g1: &LorentzElement,
    g2: &LorentzElement,
    z1: &ZPoint,
    z2: &ZPoint,
    tol: &Tolerances,
) -> Result<ZPoint, GeometryError> {
    let mismatch = (z_source(z1).p - &z2.p).amax();
    if mismatch > tol.matching {
        return Err(GeometryError::NotComposable { mismatch });
    }
    let (_, b_right1) = iwasawa_cb(g1, tol)?;
    let (b_left2, _) = iwasawa_bc(g2, tol)?;
    let lambda = b_left2.inverse().mul(&b_right1);
    let deviation = lambda.b0_deviation();
    if deviation > tol.matching {
        return Err(GeometryError::B0MatchFailure { deviation });
    }
    let product = gb_multiply(g1, &g2.mul(&embed_b(&lambda)), tol)?;
    project_z(&product, tol)
}

/// `c_L` of any lift, in closed form.
pub fn c_tilde_l(z: &ZPoint) -> BoostC {
    let (u, a, mu, r, s) = (z.u(), z.alpha(), z.mu(), z.r(), z.s);
    let q = (s * s - 1.0 - z.v.norm_squared()) / (2.0 * s);
    BoostC { s: s - r + (a - 1.0) * q, y: mu - u * q }
}

pub fn c_tilde_l_lift_route(z: &ZPoint, frame: &RotationB, tol: &Tolerances) -> Result<BoostC, GeometryError> {
    Ok(iwasawa_cb(&lift_z_with_frame(z, frame), tol)?.0)
}

/// Residual of `((g, z₁); z₂) ∈ δ_Z`: `b = g c̃_L(z₁)⁻¹` must lie in `B` and
/// send `z₁` to `z₂`.
pub fn delta_z_mismatch(g: &LorentzElement, z1: &ZPoint, z2: &ZPoint) -> f64 {
    let b = g.mul(&embed_c(&c_tilde_l(z1).inverse()));
    let m = b.matrix();
    let d = m.nrows();
    let border = m.row(0).columns(1, d - 1).amax().max(m.column(0).rows(1, d - 1).amax()).max((m[(0, 0)] - 1.0).abs());
    let rot = RotationB::from_matrix_unchecked(m.view((1, 1), (d - 1, d - 1)).into_owned());
    border.max(z1.rotate(&rot).distance(z2))
}

pub fn delta_z_membership(g: &LorentzElement, z1: &ZPoint, z2: &ZPoint, tol: &Tolerances) -> bool {
    delta_z_mismatch(g, z1, z2) <= tol.matching
}

/// Member `((b c̃_L(z), z); bz)` of `δ_Z`.
pub fn delta_z_member(b: &RotationB, z: &ZPoint) -> (LorentzElement, ZPoint) {
    (embed_b(b).mul(&embed_c(&c_tilde_l(z))), z.rotate(b))
}

/// `(x₀, x₀(s−1)(1+|x₀|²)/2, s)` in the stereographic chart.
pub fn isotropy_element(x0: &Vector, s: f64) -> ZPoint {
    let xdot = x0 * ((s - 1.0) * (1.0 + x0.norm_squared()) / 2.0);
    StereoPoint { x: x0.clone(), xdot, s }.to_z()
}

/// Element `(p₀, (μ; 0), s)` of the isotropy group over `p₀`.
pub fn f0_element(mu: &Vector, s: f64) -> ZPoint {
    let n = mu.len();
    ZPoint { p: unit(n + 1, n), v: mu.push(0.0), s }
}

/// `(s₁s₂, s₂μ₁ + μ₂)`.
pub fn f0_multiply(z1: &ZPoint, z2: &ZPoint) -> ZPoint {
    f0_element(&(z1.mu() * z2.s + z2.mu()), z1.s * z2.s)
}

pub fn f0_to_boost(z: &ZPoint) -> BoostC {
    BoostC { s: z.s, y: z.mu() }
}

fn check_slice(z: &ZPoint, tol: f64) -> Result<(), GeometryError> {
    if (z.s - 1.0).abs() > tol {
        return Err(GeometryError::SliceViolation(z.s));
    }
    Ok(())
}

/// Restriction of the operations to `s = 1`.
pub mod slice {
    use super::*;

    pub fn inverse(z: &ZPoint, tol: &Tolerances) -> Result<ZPoint, GeometryError> {
        check_slice(z, tol.matching)?;
        Ok(z_inverse(z))
    }

    pub fn multiply(z1: &ZPoint, z2: &ZPoint, tol: &Tolerances) -> Result<ZPoint, GeometryError> {
        check_slice(z1, tol.matching)?;
        check_slice(z2, tol.matching)?;
        z_multiply(z1, z2, tol)
    }

    /// Stereographic inverse at `s = 1`: `(x − 2ẋ/(1+|x|²), −(1+|x̃|²)/(1+|x|²) ẋ)`.
    pub fn inverse_stereo(x: &Vector, xdot: &Vector) -> (Vector, Vector) {
        let q = 1.0 + x.norm_squared();
        let xt = x - xdot * (2.0 / q);
        let xdt = xdot * (-(1.0 + xt.norm_squared()) / q);
        (xt, xdt)
    }

    /// Pair-groupoid coordinates `(x, e_R(x, ẋ))` of a slice point.
    pub fn pair_coordinates(z: &ZPoint, tol: &Tolerances) -> Result<(Vector, Vector), GeometryError> {
        check_slice(z, tol.matching)?;
        let q = StereoPoint::from_z(z, CHART_EPSILON)?;
        let src = q.source_x();
        Ok((q.x, src))
    }

    /// Slice point with target `x` and source `y`.
    pub fn from_pair(x: &Vector, y: &Vector) -> ZPoint {
        let xdot = (x - y) * ((1.0 + x.norm_squared()) / 2.0);
        StereoPoint { x: x.clone(), xdot, s: 1.0 }.to_z()
    }
}

/// Random point with Householder-uniform base point, tangent vector of size
/// `sigma` and `log s ~ U[-1, 1]`.
pub fn random_z<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> ZPoint {
    let p = random_unit(rng, n + 1);
    let v = random_tangent(rng, &p, sigma);
    let s = rng.random_range(-1.0..1.0f64).exp();
    ZPoint { p, v, s }
}

/// Random point whose target is `p`.
pub fn random_z_at<R: Rng + ?Sized>(rng: &mut R, p: &Vector, sigma: f64) -> ZPoint {
    let v = random_tangent(rng, p, sigma);
    let s = rng.random_range(-1.0..1.0f64).exp();
    ZPoint { p: p.clone(), v, s }
}

/// Random point composable on the right of `z`.
pub fn random_composable<R: Rng + ?Sized>(rng: &mut R, z: &ZPoint, sigma: f64) -> ZPoint {
    random_z_at(rng, &z_source(z).p, sigma)
}

/// `Λ₁ = b₁⁻¹ b₂` for two frames at the same point.
pub fn frame_change(frame1: &RotationB, frame2: &RotationB) -> RotationB {
    frame1.inverse().mul(frame2)
}

pub fn frame_matrix(z: &ZPoint, completion: FrameCompletion) -> Matrix {
    complete_frame(&z.p, completion)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lorentz::{b0_right_action, gb_inverse, random_lorentz, random_rotation_b};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(5)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn identity_projects_to_p0_unit() {
        let z = project_z(&LorentzElement::identity(3), &tol()).unwrap();
        assert_eq!(z, ZPoint::p0_unit(3));
    }

    #[test]
    fn rotations_project_to_units() {
        let mut rng = rng();
        let b = random_rotation_b(&mut rng, 3);
        let z = project_z(&embed_b(&b), &tol()).unwrap();
        assert!(z.v.amax() < 1e-12 && (z.s - 1.0).abs() < 1e-12);
        assert!((z.p - b.last_column()).amax() < 1e-12);
    }

    #[test]
    fn projection_is_b0_invariant() {
        let mut rng = rng();
        for n in 2..5 {
            let g = random_lorentz(&mut rng, n, 1.0);
            let l = crate::linalg::random_rotation(&mut rng, n);
            let a = project_z(&g, &tol()).unwrap();
            let b = project_z(&b0_right_action(&g, &l), &tol()).unwrap();
            assert!(a.distance(&b) < 1e-10);
        }
    }

    #[test]
    fn lift_round_trip() {
        let mut rng = rng();
        for n in 2..5 {
            for _ in 0..20 {
                let z = random_z(&mut rng, n, 1.0);
                for c in [FrameCompletion::Householder, FrameCompletion::GramSchmidt] {
                    let back = project_z(&lift_z_with(&z, c), &tol()).unwrap();
                    assert!(back.distance(&z) < 1e-12, "{}", back.distance(&z));
                }
            }
        }
    }

    #[test]
    fn lifts_differ_by_b0() {
        let mut rng = rng();
        let z = random_z(&mut rng, 3, 1.0);
        let f1 = RotationB::from_matrix_unchecked(frame_matrix(&z, FrameCompletion::Householder));
        let f2 = RotationB::from_matrix_unchecked(frame_matrix(&z, FrameCompletion::GramSchmidt));
        let l = frame_change(&f1, &f2);
        assert!(l.b0_deviation() < 1e-12);
        let g1 = lift_z_with_frame(&z, &f1);
        let g2 = lift_z_with_frame(&z, &f2);
        assert!(b0_right_action(&g1, &l.lambda()).distance(&g2) < 1e-12);
    }

    #[test]
    fn inverse_over_p0() {
        let mu = Vector::from_vec(vec![0.3, -1.2]);
        let z = f0_element(&mu, 2.5);
        let zi = z_inverse(&z);
        assert!(zi.distance(&f0_element(&(-&mu / 2.5), 0.4)) < 1e-14);
    }

    #[test]
    fn inverse_matches_lift_route_and_is_involutive() {
        let mut rng = rng();
        for n in 2..5 {
            for _ in 0..50 {
                let z = random_z(&mut rng, n, 1.5);
                let a = z_inverse(&z);
                let b = z_inverse_lift_route(&z, &tol()).unwrap();
                assert!(a.distance(&b) < 1e-10, "{}", a.distance(&b));
                assert!(z_inverse(&a).distance(&z) < 1e-10);
                a.validate(1e-10).unwrap();
            }
        }
        let u = ZPoint::unit(random_unit(&mut rng, 4));
        assert!(z_inverse(&u).distance(&u) < 1e-15);
    }

    #[test]
    fn units_and_unit_laws() {
        let mut rng = rng();
        let z = random_z(&mut rng, 3, 1.0);
        let right = z_multiply(&z, &z_source(&z), &tol()).unwrap();
        let left = z_multiply(&z_target(&z), &z, &tol()).unwrap();
        assert!(right.distance(&z) < 1e-10);
        assert!(left.distance(&z) < 1e-10);
        let e = z_multiply(&z, &z_inverse(&z), &tol()).unwrap();
        assert!(e.distance(&z_target(&z)) < 1e-10);
    }

    #[test]
    fn f0_law() {
        let a = f0_element(&Vector::from_vec(vec![0.5, 1.0, -0.2]), 1.7);
        let b = f0_element(&Vector::from_vec(vec![-0.1, 0.3, 2.0]), 0.6);
        let lifted = z_multiply(&a, &b, &tol()).unwrap();
        assert!(lifted.distance(&f0_multiply(&a, &b)) < 1e-12);
        let c = f0_to_boost(&a).compose(&f0_to_boost(&b));
        assert!(c.distance(&f0_to_boost(&f0_multiply(&a, &b))) < 1e-15);
    }

    #[test]
    fn multiplication_is_associative_and_lift_independent() {
        let mut rng = rng();
        for n in 2..5 {
            for _ in 0..30 {
                let z1 = random_z(&mut rng, n, 1.0);
                let z2 = random_composable(&mut rng, &z1, 1.0);
                let z3 = random_composable(&mut rng, &z2, 1.0);
                let a = z_multiply(&z_multiply(&z1, &z2, &tol()).unwrap(), &z3, &tol()).unwrap();
                let b = z_multiply(&z1, &z_multiply(&z2, &z3, &tol()).unwrap(), &tol()).unwrap();
                assert!(a.distance(&b) < 1e-9, "{}", a.distance(&b));
                let f1 = random_frame(&mut rng, &z1.p);
                let f2 = random_frame(&mut rng, &z2.p);
                let c = z_multiply_with_frames(&z1, &z2, &f1, &f2, &tol()).unwrap();
                assert!(c.distance(&z_multiply(&z1, &z2, &tol()).unwrap()) < 1e-9);
            }
        }
    }

    #[test]
    fn non_composable_pairs_are_rejected() {
        let mut rng = rng();
        let z1 = random_z(&mut rng, 3, 1.0);
        let z2 = random_z(&mut rng, 3, 1.0);
        assert!(matches!(z_multiply(&z1, &z2, &tol()), Err(GeometryError::NotComposable { .. })));
    }

    #[test]
    fn c_tilde_matches_iwasawa() {
        let mut rng = rng();
        for _ in 0..30 {
            let z = random_z(&mut rng, 3, 1.0);
            let a = c_tilde_l(&z);
            let f = random_frame(&mut rng, &z.p);
            let h = RotationB::from_matrix_unchecked(frame_matrix(&z, FrameCompletion::Householder));
            assert!(a.distance(&c_tilde_l_lift_route(&z, &f, &tol()).unwrap()) < 1e-10);
            assert!(a.distance(&c_tilde_l_lift_route(&z, &h, &tol()).unwrap()) < 1e-10);
        }
        let e = c_tilde_l(&ZPoint::unit(random_unit(&mut rng, 4)));
        assert!(e.distance(&BoostC::identity(3)) < 1e-15);
    }

    #[test]
    fn delta_z_membership_and_inverse_law() {
        let mut rng = rng();
        for _ in 0..20 {
            let z = random_z(&mut rng, 3, 1.0);
            let b = random_rotation_b(&mut rng, 3);
            let (g, w) = delta_z_member(&b, &z);
            assert!(delta_z_membership(&g, &z, &w, &tol()));
            let gi = gb_inverse(&g, &tol()).unwrap();
            assert!(delta_z_membership(&gi, &z_inverse(&z), &z_inverse(&w), &tol()));
            let mut bad = w.clone();
            bad.s *= 1.01;
            assert!(!delta_z_membership(&g, &z, &bad, &tol()));
        }
    }

    #[test]
    fn delta_z_is_multiplicative_and_coassociative() {
        let mut rng = rng();
        let t = tol();
        for _ in 0..20 {
            let z1 = random_z(&mut rng, 3, 1.0);
            let z2 = random_composable(&mut rng, &z1, 1.0);
            let b1 = random_rotation_b(&mut rng, 3);
            let (g1, w1) = delta_z_member(&b1, &z1);
            let b2 = crate::lorentz::gb_source(&g1, &t).unwrap();
            let (g2, w2) = delta_z_member(&b2, &z2);
            let g = gb_multiply(&g1, &g2, &t).unwrap();
            let z = z_multiply(&z1, &z2, &t).unwrap();
            let w = z_multiply(&w1, &w2, &t).unwrap();
            assert!(delta_z_mismatch(&g, &z, &w) < 1e-9);

            let w = random_z(&mut rng, 3, 1.0);
            let b = random_rotation_b(&mut rng, 3);
            let b_prime = random_rotation_b(&mut rng, 3);
            let z = w.rotate(&b.inverse());
            let z_prime = z.rotate(&b_prime.inverse());
            let (g, _) = delta_z_member(&b, &z);
            let (g_prime, _) = delta_z_member(&b_prime, &z_prime);
            let (h, w_again) = delta_z_member(&b.mul(&b_prime), &z_prime);
            assert!(w_again.distance(&w) < 1e-12);
            let m = crate::lorentz::delta_b_mismatch(&h, &g, &g_prime, &t).unwrap();
            assert!(m < 1e-9, "{m}");
        }
    }

    #[test]
    fn isotropy_elements_fix_their_point() {
        let x0 = Vector::from_vec(vec![0.4, -0.7]);
        let a = isotropy_element(&x0, 2.0);
        let b = isotropy_element(&x0, 0.3);
        let unit = isotropy_element(&x0, 1.0);
        assert!(z_source(&a).distance(&z_target(&a)) < 1e-12);
        assert!(unit.v.amax() < 1e-15);
        let ab = z_multiply(&a, &b, &tol()).unwrap();
        assert!(ab.distance(&isotropy_element(&x0, 0.6)) < 1e-10);
        assert!(z_inverse(&a).distance(&isotropy_element(&x0, 0.5)) < 1e-12);
    }

    #[test]
    fn slice_is_a_pair_groupoid() {
        let mut rng = rng();
        let x = crate::linalg::random_vector(&mut rng, 3, 1.0);
        let y = crate::linalg::random_vector(&mut rng, 3, 1.0);
        let w = crate::linalg::random_vector(&mut rng, 3, 1.0);
        let a = slice::from_pair(&x, &y);
        let b = slice::from_pair(&y, &w);
        let ab = slice::multiply(&a, &b, &tol()).unwrap();
        let (t, s) = slice::pair_coordinates(&ab, &tol()).unwrap();
        assert!((t - &x).amax() < 1e-9 && (s - &w).amax() < 1e-9);
        let off = ZPoint { s: 2.0, ..a.clone() };
        assert!(matches!(slice::inverse(&off, &tol()), Err(GeometryError::SliceViolation(_))));
    }

    #[test]
    fn json_round_trip() {
        let mut rng = rng();
        let z = random_z(&mut rng, 2, 1.0);
        let text = serde_json::to_string(&z).unwrap();
        assert!(text.starts_with("{\"p\":["));
        let back: ZPoint = serde_json::from_str(&text).unwrap();
        assert_eq!(back, z);
        assert!(serde_json::from_str::<ZPoint>("{\"p\":[1,1,0],\"v\":[0,0,0],\"s\":1}").is_err());
    }
}
