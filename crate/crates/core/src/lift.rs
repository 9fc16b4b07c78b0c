//! Oriented lines in Euclidean space, the Euclidean group acting on them and
//! on the sphere bundle, and the base map `β` of the cotangent lift of the
//! comultiplication `δ_Z`, in closed form and from its defining annihilator
//! condition.
//!
//! Euclidean space is `t^⊥ ≅ ℝⁿ⁺¹` inside Minkowski space `ℝ^{1,n+1}` with
//! `t = e₀` and `p₀ = s = e_{n+1}`. The dual of the boost algebra is
//! identified with `t^⊥` through `z ↦ k(M_{tz})`, where `k` is the trace form
//! `k(X, Y) = tr(XY)/2`. A cotangent direction `(ψ, ρ)` at a unit pairs with a
//! tangent `(ṗ, v̇, ṡ)` of `Z` as `ψ·v̇ − ρṡ`: the scale direction `∂_s` of
//! `Z` corresponds to `M_{st} = −M_{ts}`.

use rand::Rng;

use crate::error::GeometryError;
use crate::linalg::{
    complete_frame, numerical_rank, random_rotation, random_tangent, random_unit, random_vector, tangent_part,
    FrameCompletion, Matrix, Vector,
};
use crate::line::{c_tilde_l, ZPoint};
use crate::lorentz::{embed_b, embed_c, RotationB};

/// Central step for the numerical cotangent lift and the derivative of `c̃_L`.
pub const LIFT_STEP: f64 = 1e-6;

/// The oriented line through `p + v` with direction `p`, `v ⊥ p`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrientedLine {
    pub p: Vector,
    pub v: Vector,
}

impl OrientedLine {
    /// Line `{m + λp}`.
    pub fn through(p: &Vector, m: &Vector) -> Self {
        Self { p: p.clone(), v: tangent_part(p, m) }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.p - &other.p).amax().max((&self.v - &other.v).amax())
    }
}

/// `(z, b)` in `ℝⁿ⁺¹ ⋊ SO(n+1)` with product `(z₁ + b₁z₂, b₁b₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct EuclideanMotion {
    pub z: Vector,
    pub b: Matrix,
}

impl EuclideanMotion {
    pub fn new(z: Vector, b: Matrix, tol: f64) -> Result<Self, GeometryError> {
        RotationB::new(b.clone(), tol)?;
        if z.len() != b.nrows() {
            return Err(GeometryError::DimensionMismatch { expected: b.nrows(), got: z.len() });
        }
        Ok(Self { z, b })
    }

    pub fn identity(dim: usize) -> Self {
        Self { z: Vector::zeros(dim), b: Matrix::identity(dim, dim) }
    }

    pub fn translation(z: Vector) -> Self {
        let d = z.len();
        Self { z, b: Matrix::identity(d, d) }
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { z: &self.z + &self.b * &other.z, b: &self.b * &other.b }
    }

    pub fn inverse(&self) -> Self {
        let bt = self.b.transpose();
        Self { z: -(&bt * &self.z), b: bt }
    }

    /// Action on `Sⁿ × ℝⁿ⁺¹`: `(bp, z + bw)`.
    pub fn apply_to_point(&self, p: &Vector, w: &Vector) -> (Vector, Vector) {
        (&self.b * p, &self.z + &self.b * w)
    }
}

/// `(bp, z + bv − (z·bp) bp)`.
pub fn line_action(g: &EuclideanMotion, l: &OrientedLine) -> OrientedLine {
    let bp = &g.b * &l.p;
    let v = &g.z + &g.b * &l.v;
    OrientedLine { v: tangent_part(&bp, &v), p: bp }
}

/// Point `(p; v, ṡp)` of `TSⁿ ⊕ N`.
#[derive(Clone, Debug, PartialEq)]
pub struct SphereBundlePoint {
    pub p: Vector,
    pub v: Vector,
    pub sdot: f64,
}

impl SphereBundlePoint {
    /// From `(p, w) ∈ Sⁿ × ℝⁿ⁺¹`.
    pub fn from_trivial(p: &Vector, w: &Vector) -> Self {
        Self { p: p.clone(), v: tangent_part(p, w), sdot: p.dot(w) }
    }

    /// `(p, v + ṡp)`.
    pub fn to_trivial(&self) -> (Vector, Vector) {
        (self.p.clone(), &self.v + &self.p * self.sdot)
    }

    pub fn line(&self) -> OrientedLine {
        OrientedLine { p: self.p.clone(), v: self.v.clone() }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.p - &other.p).amax().max((&self.v - &other.v).amax()).max((self.sdot - other.sdot).abs())
    }
}

/// `(bp; z + bv − (z·bp)bp, (ṡ + z·bp) bp)`.
pub fn sphere_bundle_action(g: &EuclideanMotion, x: &SphereBundlePoint) -> SphereBundlePoint {
    let bp = &g.b * &x.p;
    let v = tangent_part(&bp, &(&g.z + &g.b * &x.v));
    SphereBundlePoint { sdot: x.sdot + g.z.dot(&bp), v, p: bp }
}

/// Covector `(ψ, ρ)` at the unit `(p, 0, 1)` annihilating the units.
#[derive(Clone, Debug, PartialEq)]
pub struct LiftedCovector {
    pub p: Vector,
    pub psi: Vector,
    pub sdot_dual: f64,
}

impl LiftedCovector {
    pub fn new(p: Vector, psi: Vector, sdot_dual: f64, tol: f64) -> Result<Self, GeometryError> {
        let tangency = p.dot(&psi).abs();
        if tangency > tol * psi.norm().max(1.0) {
            return Err(GeometryError::InvariantViolation { what: "covector tangency", residual: tangency, tolerance: tol });
        }
        Ok(Self { p, psi, sdot_dual })
    }

    /// `ψ·v̇ − ρṡ`.
    pub fn pair(&self, vdot: &Vector, sdot: f64) -> f64 {
        self.psi.dot(vdot) - self.sdot_dual * sdot
    }

    /// The sphere-bundle point `(p; ψ, ρp)`.
    pub fn to_sphere_bundle(&self) -> SphereBundlePoint {
        SphereBundlePoint { p: self.p.clone(), v: self.psi.clone(), sdot: self.sdot_dual }
    }

    pub fn from_sphere_bundle(x: &SphereBundlePoint) -> Self {
        Self { p: x.p.clone(), psi: x.v.clone(), sdot_dual: x.sdot }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.p - &other.p).amax().max((&self.psi - &other.psi).amax()).max((self.sdot_dual - other.sdot_dual).abs())
    }
}

/// Derivative of `c̃_L` at `(p, 0, 1)` along `(v̇, ṡ)`:
/// `(−ṙ + αṡ, μ̇ − ṡu)` in the coordinates `(s, y)` of the boost group.
pub fn f_p(p: &Vector, vdot: &Vector, sdot: f64) -> (f64, Vector) {
    let n = p.len() - 1;
    let u = p.rows(0, n);
    let mu_dot = vdot.rows(0, n);
    (-vdot[n] + p[n] * sdot, (mu_dot - u * sdot).into_owned())
}

/// Same derivative by central differences of `c̃_L` along `t ↦ (p, tv̇, 1 + tṡ)`.
pub fn f_p_numeric(p: &Vector, vdot: &Vector, sdot: f64, h: f64) -> (f64, Vector) {
    let at = |t: f64| c_tilde_l(&ZPoint { p: p.clone(), v: vdot * t, s: 1.0 + sdot * t });
    let (plus, minus) = (at(h), at(-h));
    ((plus.s - minus.s) / (2.0 * h), (plus.y - minus.y) / (2.0 * h))
}

/// `F*_p(k(M_{tz})) = (p, z − (z·p)p, z·p)`.
pub fn f_p_star(p: &Vector, z: &Vector) -> LiftedCovector {
    LiftedCovector { p: p.clone(), psi: tangent_part(p, z), sdot_dual: z.dot(p) }
}

/// `M_{xy} = x ⊗ η(y) − y ⊗ η(x)` on Minkowski space.
pub fn minkowski_bivector(x: &Vector, y: &Vector) -> Matrix {
    let eta = crate::linalg::minkowski(x.len());
    x * (&eta * y).transpose() - y * (&eta * x).transpose()
}

/// `k(X, Y) = tr(XY)/2`, so `k(M_{xy}, M_{zw}) = η(x,w)η(y,z) − η(x,z)η(y,w)`.
pub fn k_form(x: &Matrix, y: &Matrix) -> f64 {
    (x * y).trace() / 2.0
}

/// `t^⊥ ∋ z ↦ (0; z)`.
pub fn embed_spatial(z: &Vector) -> Vector {
    let mut out = Vector::zeros(z.len() + 1);
    out.rows_mut(1, z.len()).copy_from(z);
    out
}

/// `M_{tz}`, the boost-dual element paired through `k`.
pub fn boost_dual(z: &Vector) -> Matrix {
    minkowski_bivector(&crate::linalg::unit(z.len() + 1, 0), &embed_spatial(z))
}

/// `F*_p` computed by transposing `F_p` under the `k` pairing, with `F_p`
/// taken by finite differences.
pub fn f_p_star_numeric(p: &Vector, z: &Vector, h: f64) -> LiftedCovector {
    transpose_of(p, z, |p, v, s| f_p_numeric(p, v, s, h))
}

/// `F*_p` as the transpose of the closed-form `F_p`.
pub fn f_p_star_transpose(p: &Vector, z: &Vector) -> LiftedCovector {
    transpose_of(p, z, f_p)
}

fn transpose_of<F>(p: &Vector, z: &Vector, derivative: F) -> LiftedCovector
where
    F: Fn(&Vector, &Vector, f64) -> (f64, Vector),
{
    let d = p.len();
    let n = d - 1;
    let phi = boost_dual(z);
    let frame = complete_frame(p, FrameCompletion::Householder);
    let boost_tangent = |s_coeff: f64, y: &Vector| {
        // ∂_s = M_{st}, ∂_{y_k} = M_{f e_k}
        let t = crate::linalg::unit(d + 1, 0);
        let s = crate::linalg::unit(d + 1, d);
        let f = &t - &s;
        minkowski_bivector(&s, &t) * s_coeff + minkowski_bivector(&f, &embed_spatial(&y.clone().push(0.0)))
    };
    let mut psi = Vector::zeros(d);
    for k in 0..n {
        let dir = frame.column(k).into_owned();
        let (a, y) = derivative(p, &dir, 0.0);
        psi += &dir * k_form(&phi, &boost_tangent(a, &y));
    }
    let (a, y) = derivative(p, &Vector::zeros(d), 1.0);
    LiftedCovector { p: p.clone(), psi, sdot_dual: -k_form(&phi, &boost_tangent(a, &y)) }
}

/// `β((z, b), (p, ψ, ρ)) = (bp, bψ + P_{bp}z, ρ + z·bp)`.
pub fn beta_closed(g: &EuclideanMotion, c: &LiftedCovector) -> LiftedCovector {
    let bp = &g.b * &c.p;
    let psi = &g.b * &c.psi + tangent_part(&bp, &g.z);
    LiftedCovector { sdot_dual: c.sdot_dual + g.z.dot(&bp), psi, p: bp }
}

/// Result of the least-squares cotangent lift.
#[derive(Clone, Debug)]
pub struct BetaNumeric {
    pub covector: LiftedCovector,
    pub residual: f64,
    pub rank: usize,
}

/// Second-order terms added to every test curve; the first-order data and
/// hence the solution must not depend on them.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Reparametrization {
    pub curvature: f64,
}

/// `β` from its definition: for a spanning family of curves
/// `(b(t) c̃_L(z(t)), z(t); b(t) z(t))` in the graph of `δ_Z`, solve
/// `⟨ψ̃_{bp}, V_{bp}⟩ = ⟨φ, Ẋ b⁻¹⟩ + ⟨ψ̃_p, V_p⟩` for `ψ̃_{bp}`.
pub fn beta_numeric(
    g: &EuclideanMotion,
    c: &LiftedCovector,
    reparam: Reparametrization,
    tol: f64,
) -> Result<BetaNumeric, GeometryError> {
    let d = c.p.len();
    let n = d - 1;
    let p = &c.p;
    let b = &g.b;
    let bp = b * p;
    let phi = boost_dual(&g.z);
    let b_inv = embed_b(&RotationB::from_matrix_unchecked(b.transpose()));
    let out_frame = complete_frame(&bp, FrameCompletion::Householder);
    let in_frame = complete_frame(p, FrameCompletion::Householder);
    let kappa = reparam.curvature;
    let h = LIFT_STEP;

    enum Dir {
        Rotation(usize, usize),
        Base(usize),
        Fiber(usize),
        Scale,
    }
    let mut dirs = Vec::new();
    for a in 0..d {
        for e in a + 1..d {
            dirs.push(Dir::Rotation(a, e));
        }
    }
    dirs.extend((0..n).map(Dir::Base));
    dirs.extend((0..n).map(Dir::Fiber));
    dirs.push(Dir::Scale);

    let mut rows = Matrix::zeros(dirs.len(), n + 1);
    let mut rhs = Vector::zeros(dirs.len());
    for (row, dir) in dirs.iter().enumerate() {
        let curve = |t: f64| -> (Matrix, Matrix, ZPoint) {
            let mut bt = b.clone();
            let mut pt = p.clone();
            let mut vt = Vector::zeros(d);
            let mut st = 1.0;
            match *dir {
                Dir::Rotation(a, e) => bt = b * plane_rotation(d, a, e, t + kappa * t * t),
                Dir::Base(k) => {
                    let w = in_frame.column(k) * t + in_frame.column((k + 1) % n) * (kappa * t * t);
                    pt = (p + w).normalize();
                }
                Dir::Fiber(k) => vt = in_frame.column(k) * t + in_frame.column((k + 1) % n) * (kappa * t * t),
                Dir::Scale => st = 1.0 + t + kappa * t * t,
            }
            if kappa != 0.0 && !matches!(dir, Dir::Base(_)) {
                // drift of the base point at second order
                pt = (p + in_frame.column(0) * (kappa * t * t)).normalize();
                vt = tangent_part(&pt, &vt);
            }
            let z = ZPoint { p: pt, v: vt, s: st };
            let rot = RotationB::from_matrix_unchecked(bt.clone());
            let gamma = embed_b(&rot).mul(&embed_c(&c_tilde_l(&z))).into_matrix();
            (bt, gamma, z)
        };
        let (b1, g1, z1) = curve(h);
        let (b0, g0, z0) = curve(-h);
        let x_dot = (g1 - g0) / (2.0 * h);
        let v_in = (&z1.v - &z0.v) / (2.0 * h);
        let s_in = (z1.s - z0.s) / (2.0 * h);
        let v_out = (&b1 * &z1.v - &b0 * &z0.v) / (2.0 * h);
        let lhs_value = k_form(&phi, &(x_dot * b_inv.matrix())) + c.pair(&v_in, s_in);
        for k in 0..n {
            rows[(row, k)] = out_frame.column(k).dot(&v_out);
        }
        rows[(row, n)] = -s_in;
        rhs[row] = lhs_value;
    }
    let rank = numerical_rank(&rows, 1e-8);
    if rank < n + 1 {
        return Err(GeometryError::IllConditioned { rank, required: n + 1 });
    }
    let svd = rows.clone().svd(true, true);
    let sol = svd.solve(&rhs, 1e-12).map_err(|_| GeometryError::IllConditioned { rank, required: n + 1 })?;
    let residual = (&rows * &sol - &rhs).amax();
    let scale = rhs.amax().max(1.0);
    if residual > tol * scale {
        return Err(GeometryError::LargeResidual { residual, tolerance: tol });
    }
    let psi = out_frame.columns(0, n) * sol.rows(0, n);
    Ok(BetaNumeric { covector: LiftedCovector { p: bp, psi, sdot_dual: sol[n] }, residual, rank })
}

/// Rotation by angle `θ` in the `(a, e)` plane, `exp(θ(E_ae − E_ea))`.
fn plane_rotation(d: usize, a: usize, e: usize, theta: f64) -> Matrix {
    let mut m = Matrix::identity(d, d);
    let (c, s) = (theta.cos(), theta.sin());
    m[(a, a)] = c;
    m[(e, e)] = c;
    m[(a, e)] = -s;
    m[(e, a)] = s;
    m
}

/// `β` on covectors with no scale component, the layer of the slice.
pub fn s_tilde_restriction_lift(g: &EuclideanMotion, c: &LiftedCovector, tol: f64) -> Result<LiftedCovector, GeometryError> {
    if c.sdot_dual.abs() > tol {
        return Err(GeometryError::InvariantViolation { what: "vanishing scale component", residual: c.sdot_dual.abs(), tolerance: tol });
    }
    let full = beta_closed(g, c);
    Ok(LiftedCovector { sdot_dual: 0.0, ..full })
}

pub fn random_motion<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> EuclideanMotion {
    EuclideanMotion { z: random_vector(rng, dim, scale), b: random_rotation(rng, dim) }
}

pub fn random_covector<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> LiftedCovector {
    let p = random_unit(rng, dim);
    let psi = random_tangent(rng, &p, scale);
    let sdot_dual = scale * rng.sample::<f64, _>(rand_distr::StandardNormal);
    LiftedCovector { p, psi, sdot_dual }
}

pub fn random_line<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> OrientedLine {
    let p = random_unit(rng, dim);
    let v = random_tangent(rng, &p, scale);
    OrientedLine { p, v }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::unit;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(17)
    }

    #[test]
    fn line_action_basics() {
        let mut rng = rng();
        let l = random_line(&mut rng, 4, 1.0);
        assert!(line_action(&EuclideanMotion::identity(4), &l).distance(&l) < 1e-15);
        let along = EuclideanMotion::translation(&l.p * 2.5);
        assert!(line_action(&along, &l).distance(&l) < 1e-14);
        let g1 = random_motion(&mut rng, 4, 1.0);
        let g2 = random_motion(&mut rng, 4, 1.0);
        let a = line_action(&g1.compose(&g2), &l);
        let b = line_action(&g1, &line_action(&g2, &l));
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn line_action_is_well_defined_on_classes() {
        let mut rng = rng();
        let p = random_unit(&mut rng, 3);
        let m = random_vector(&mut rng, 3, 1.0);
        let g = random_motion(&mut rng, 3, 1.0);
        let a = line_action(&g, &OrientedLine::through(&p, &m));
        let b = line_action(&g, &OrientedLine::through(&p, &(&m + &p * 3.7)));
        assert!(a.distance(&b) < 1e-14);
        let (q, w) = g.apply_to_point(&p, &m);
        assert!(OrientedLine::through(&q, &w).distance(&a) < 1e-14);
    }

    #[test]
    fn sphere_bundle_action_basics() {
        let mut rng = rng();
        let x = SphereBundlePoint::from_trivial(&random_unit(&mut rng, 4), &random_vector(&mut rng, 4, 1.0));
        let (p, w) = x.to_trivial();
        assert!(SphereBundlePoint::from_trivial(&p, &w).distance(&x) < 1e-15);
        let z = random_vector(&mut rng, 4, 1.0);
        let moved = sphere_bundle_action(&EuclideanMotion::translation(z.clone()), &x);
        assert!((moved.p - &x.p).amax() < 1e-15);
        assert!((moved.sdot - x.sdot - z.dot(&x.p)).abs() < 1e-14);
        let g1 = random_motion(&mut rng, 4, 1.0);
        let g2 = random_motion(&mut rng, 4, 1.0);
        let a = sphere_bundle_action(&g1.compose(&g2), &x);
        let b = sphere_bundle_action(&g1, &sphere_bundle_action(&g2, &x));
        assert!(a.distance(&b) < 1e-12);
        assert!(a.line().distance(&line_action(&g1.compose(&g2), &x.line())) < 1e-12);
    }

    #[test]
    fn f_p_formula() {
        let p0 = unit(4, 3);
        let (a, y) = f_p(&p0, &Vector::zeros(4), 1.0);
        assert_eq!((a, y), (1.0, Vector::zeros(3)));
        let mut rng = rng();
        for _ in 0..20 {
            let p = random_unit(&mut rng, 4);
            let vdot = random_tangent(&mut rng, &p, 1.0);
            let sdot = 0.7;
            let (a, y) = f_p(&p, &vdot, sdot);
            let (an, yn) = f_p_numeric(&p, &vdot, sdot, LIFT_STEP);
            let scale = a.abs().max(y.amax());
            assert!((a - an).abs().max((y - yn).amax()) < 1e-6 * scale);
        }
    }

    #[test]
    fn k_form_values() {
        let mut rng = rng();
        let z = random_vector(&mut rng, 4, 1.0);
        let w = random_vector(&mut rng, 3, 1.0);
        let t = unit(5, 0);
        let s = unit(5, 4);
        let phi = boost_dual(&z);
        assert!((k_form(&phi, &minkowski_bivector(&t, &s)) - z[3]).abs() < 1e-14);
        let f = &t - &s;
        assert!((k_form(&phi, &minkowski_bivector(&f, &embed_spatial(&w.clone().push(0.0)))) - z.rows(0, 3).dot(&w)).abs() < 1e-14);
    }

    #[test]
    fn f_p_star_matches_transpose() {
        let mut rng = rng();
        let p = random_unit(&mut rng, 4);
        assert!(f_p_star(&p, &p).distance(&LiftedCovector { p: p.clone(), psi: Vector::zeros(4), sdot_dual: 1.0 }) < 1e-15);
        for _ in 0..10 {
            let p = random_unit(&mut rng, 4);
            let z = random_vector(&mut rng, 4, 1.0);
            let a = f_p_star(&p, &z);
            let b = f_p_star_numeric(&p, &z, LIFT_STEP);
            assert!(a.distance(&b) < 1e-8, "{}", a.distance(&b));
        }
    }

    #[test]
    fn beta_closed_is_the_sphere_bundle_action() {
        let mut rng = rng();
        for d in 3..6 {
            let g = random_motion(&mut rng, d, 1.0);
            let c = random_covector(&mut rng, d, 1.0);
            let via = LiftedCovector::from_sphere_bundle(&sphere_bundle_action(&g, &c.to_sphere_bundle()));
            assert!(beta_closed(&g, &c).distance(&via) < 1e-12);
            let h = random_motion(&mut rng, d, 1.0);
            let a = beta_closed(&g.compose(&h), &c);
            let b = beta_closed(&g, &beta_closed(&h, &c));
            assert!(a.distance(&b) < 1e-12);
        }
    }

    #[test]
    fn beta_numeric_matches_closed_form() {
        let mut rng = rng();
        for d in 3..6 {
            for _ in 0..5 {
                let g = random_motion(&mut rng, d, 1.0);
                let c = random_covector(&mut rng, d, 1.0);
                let num = beta_numeric(&g, &c, Reparametrization::default(), 1e-6).unwrap();
                assert!(num.covector.distance(&beta_closed(&g, &c)) < 1e-6, "{}", num.covector.distance(&beta_closed(&g, &c)));
                let bent = beta_numeric(&g, &c, Reparametrization { curvature: 0.8 }, 1e-6).unwrap();
                assert!(bent.covector.distance(&num.covector) < 1e-6);
            }
        }
        let id = EuclideanMotion::identity(3);
        let zero = LiftedCovector { p: unit(3, 1), psi: Vector::zeros(3), sdot_dual: 0.0 };
        let num = beta_numeric(&id, &zero, Reparametrization::default(), 1e-6).unwrap();
        assert!(num.covector.psi.amax() < 1e-12 && num.covector.sdot_dual.abs() < 1e-12 && num.residual < 1e-12);
    }

    #[test]
    fn slice_layer_reproduces_line_action() {
        let mut rng = rng();
        let g = random_motion(&mut rng, 4, 1.0);
        let mut c = random_covector(&mut rng, 4, 1.0);
        c.sdot_dual = 0.0;
        let lifted = s_tilde_restriction_lift(&g, &c, 1e-12).unwrap();
        let line = line_action(&g, &OrientedLine { p: c.p.clone(), v: c.psi.clone() });
        assert!((lifted.p - line.p).amax() < 1e-12 && (lifted.psi - line.v).amax() < 1e-12);
        let along = EuclideanMotion::translation(&c.p * 1.3);
        let fixed = s_tilde_restriction_lift(&along, &c, 1e-12).unwrap();
        assert!((fixed.psi - &c.psi).amax() < 1e-14);
        c.sdot_dual = 1.0;
        assert!(s_tilde_restriction_lift(&g, &c, 1e-12).is_err());
    }
}
