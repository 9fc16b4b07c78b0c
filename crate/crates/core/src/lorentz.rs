//! `SO₀(1, n+1)` as `(n+2) × (n+2)` matrices, its rotation subgroup
//! `B ≅ SO(n+1)`, the boost subgroup `C ≅ ℝ₊ ⋉ ℝⁿ`, both orders of the
//! Iwasawa factorization and the groupoid over `B` on the whole group.
//!
//! Index 0 is the time direction and index `n+1` the distinguished space
//! direction, so `diag(1, R)` embeds a rotation and `η = diag(1, -1, …, -1)`.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::linalg::{extend_with_one, minkowski, orthogonality_residual, random_rotation, Matrix, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Orthogonality and Lorentz-invariance residuals.
    pub orth: f64,
    /// Agreement of two evaluation routes of the same matrix.
    pub recon: f64,
    /// Composability of groupoid elements.
    pub matching: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { orth: 1e-10, recon: 1e-10, matching: 1e-8 }
    }
}

/// Element of `SO₀(1, n+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct LorentzElement {
    matrix: Matrix,
}

impl LorentzElement {
    /// Validates `gᵀηg = η`, `det g = 1` and `g₀₀ ≥ 1`.
    pub fn new(matrix: Matrix, tol: f64) -> Result<Self, GeometryError> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 3 {
            return Err(GeometryError::DimensionMismatch { expected: matrix.nrows().max(3), got: matrix.ncols() });
        }
        let g = Self { matrix };
        let scale = g.matrix.norm().max(1.0);
        let res = g.lorentz_residual();
        if res > tol * scale * scale {
            return Err(GeometryError::InvariantViolation { what: "metric preservation gᵀηg = η", residual: res, tolerance: tol });
        }
        let det = g.matrix.determinant();
        if (det - 1.0).abs() > tol * scale.powi(g.matrix.nrows() as i32) {
            return Err(GeometryError::InvariantViolation { what: "unit determinant", residual: (det - 1.0).abs(), tolerance: tol });
        }
        if g.matrix[(0, 0)] < 1.0 - tol * scale {
            return Err(GeometryError::NotInConnectedComponent(g.matrix[(0, 0)]));
        }
        Ok(g)
    }

    pub fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Matrix::identity(n + 2, n + 2) }
    }

    /// Sphere dimension `n`.
    pub fn n(&self) -> usize {
        self.matrix.nrows() - 2
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> Matrix {
        self.matrix
    }

    pub fn lorentz_residual(&self) -> f64 {
        let eta = minkowski(self.matrix.nrows());
        (self.matrix.transpose() * &eta * &self.matrix - eta).norm()
    }

    /// `η gᵀ η`.
    pub fn inverse(&self) -> Self {
        let eta = minkowski(self.matrix.nrows());
        Self { matrix: &eta * self.matrix.transpose() * &eta }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }

    /// Frobenius distance.
    pub fn distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }
}

/// Element of `SO(n+1)` written in blocks `[[Λ, u], [wᵗ, α]]`.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationB {
    matrix: Matrix,
}

impl RotationB {
    pub fn new(matrix: Matrix, tol: f64) -> Result<Self, GeometryError> {
        let b = Self { matrix };
        b.check_invariants(tol)?;
        Ok(b)
    }

    pub fn from_matrix_unchecked(matrix: Matrix) -> Self {
        Self { matrix }
    }

    pub fn from_parts(lambda: &Matrix, u: &Vector, w: &Vector, alpha: f64, tol: f64) -> Result<Self, GeometryError> {
        let n = lambda.nrows();
        let mut m = Matrix::zeros(n + 1, n + 1);
        m.view_mut((0, 0), (n, n)).copy_from(lambda);
        m.view_mut((0, n), (n, 1)).copy_from(u);
        m.view_mut((n, 0), (1, n)).copy_from(&w.transpose());
        m[(n, n)] = alpha;
        Self::new(m, tol)
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: Matrix::identity(n + 1, n + 1) }
    }

    /// Element of the stabilizer `B₀ ≅ SO(n)` of the last basis vector.
    pub fn from_b0(lambda1: &Matrix) -> Self {
        Self { matrix: extend_with_one(lambda1) }
    }

    pub fn n(&self) -> usize {
        self.matrix.nrows() - 1
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    pub fn lambda(&self) -> Matrix {
        let n = self.n();
        self.matrix.view((0, 0), (n, n)).into_owned()
    }

    pub fn u(&self) -> Vector {
        let n = self.n();
        self.matrix.view((0, n), (n, 1)).column(0).into_owned()
    }

    pub fn w(&self) -> Vector {
        let n = self.n();
        self.matrix.view((n, 0), (1, n)).transpose().column(0).into_owned()
    }

    pub fn alpha(&self) -> f64 {
        let n = self.n();
        self.matrix[(n, n)]
    }

    /// Last column `(u; α)`, the image of the distinguished direction.
    pub fn last_column(&self) -> Vector {
        self.matrix.column(self.n()).into_owned()
    }

    /// Largest residual among the block identities of an orthogonal matrix.
    pub fn invariant_residual(&self) -> f64 {
        let (l, u, w, a) = (self.lambda(), self.u(), self.w(), self.alpha());
        let n = self.n();
        let id = Matrix::identity(n, n);
        [
            (&l * l.transpose() + &u * u.transpose() - &id).norm(),
            (&l * &w + &u * a).norm(),
            (l.transpose() * &l + &w * w.transpose() - &id).norm(),
            (l.transpose() * &u + &w * a).norm(),
            (u.norm_squared() + a * a - 1.0).abs(),
            (w.norm_squared() + a * a - 1.0).abs(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn check_invariants(&self, tol: f64) -> Result<(), GeometryError> {
        if self.matrix.nrows() != self.matrix.ncols() || self.matrix.nrows() < 2 {
            return Err(GeometryError::DimensionMismatch { expected: self.matrix.nrows(), got: self.matrix.ncols() });
        }
        let res = self.invariant_residual().max(orthogonality_residual(&self.matrix));
        if res > tol {
            return Err(GeometryError::InvariantViolation { what: "rotation block identities", residual: res, tolerance: tol });
        }
        let det = self.matrix.determinant();
        if (det - 1.0).abs() > tol {
            return Err(GeometryError::InvariantViolation { what: "unit determinant", residual: (det - 1.0).abs(), tolerance: tol });
        }
        Ok(())
    }

    pub fn inverse(&self) -> Self {
        Self { matrix: self.matrix.transpose() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self { matrix: &self.matrix * &other.matrix }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix).norm()
    }

    /// Deviation from the block form `diag(Λ₁, 1)`.
    pub fn b0_deviation(&self) -> f64 {
        (self.alpha() - 1.0).abs().max(self.u().amax()).max(self.w().amax())
    }
}

/// Element `(s, y)` of `C`, with product `(s₁, y₁)(s₂, y₂) = (s₁s₂, s₂y₁ + y₂)`.
#[derive(Clone, Debug, PartialEq)]
pub struct BoostC {
    pub s: f64,
    pub y: Vector,
}

impl BoostC {
    pub fn new(s: f64, y: Vector) -> Result<Self, GeometryError> {
        if !(s > 0.0) || !s.is_finite() {
            return Err(GeometryError::NonPositiveS(s));
        }
        Ok(Self { s, y })
    }

    pub fn identity(n: usize) -> Self {
        Self { s: 1.0, y: Vector::zeros(n) }
    }

    pub fn n(&self) -> usize {
        self.y.len()
    }

    pub fn compose(&self, other: &Self) -> Self {
        Self { s: self.s * other.s, y: &self.y * other.s + &other.y }
    }

    pub fn inverse(&self) -> Self {
        Self { s: 1.0 / self.s, y: -&self.y / self.s }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self.s - other.s).abs().max((&self.y - &other.y).amax())
    }
}

pub fn embed_b(b: &RotationB) -> LorentzElement {
    LorentzElement { matrix: extend_front(b.matrix()) }
}

fn extend_front(m: &Matrix) -> Matrix {
    let d = m.nrows() + 1;
    let mut out = Matrix::identity(d, d);
    out.view_mut((1, 1), (d - 1, d - 1)).copy_from(m);
    out
}

pub fn embed_c(c: &BoostC) -> LorentzElement {
    let n = c.n();
    let (s, y) = (c.s, &c.y);
    let y2 = y.norm_squared();
    let mut m = Matrix::identity(n + 2, n + 2);
    m[(0, 0)] = (s * s + 1.0 + y2) / (2.0 * s);
    m[(0, n + 1)] = (s * s - 1.0 + y2) / (2.0 * s);
    m[(n + 1, 0)] = (s * s - 1.0 - y2) / (2.0 * s);
    m[(n + 1, n + 1)] = (s * s + 1.0 - y2) / (2.0 * s);
    for k in 0..n {
        m[(0, k + 1)] = -y[k] / s;
        m[(n + 1, k + 1)] = y[k] / s;
        m[(k + 1, 0)] = -y[k];
        m[(k + 1, n + 1)] = -y[k];
    }
    LorentzElement { matrix: m }
}

/// `g = c · b` with `c ∈ C`, `b ∈ B`. The boost is read off the first column.
///
/// The rotation block is assembled in light-cone coordinates `x₀ ± x_{n+1}`,
/// where `c⁻¹` acts on the `+` and transverse parts with entries of size `‖g‖`
/// rather than `‖g‖²`.
pub fn iwasawa_cb(g: &LorentzElement, tol: &Tolerances) -> Result<(BoostC, RotationB), GeometryError> {
    let n = g.n();
    let m = g.matrix();
    let s = m[(0, 0)] + m[(n + 1, 0)];
    if !(s > 0.0) {
        return Err(GeometryError::NotInConnectedComponent(s));
    }
    let y = Vector::from_fn(n, |k, _| -m[(k + 1, 0)]);
    let c = BoostC { s, y };
    let c_inv = embed_c(&c.inverse());
    let rest = c_inv.matrix() * m;
    let d = n + 2;
    let border = rest.row(0).columns(1, d - 1).amax().max(rest.column(0).rows(1, d - 1).amax());
    // rounding in `c⁻¹ g` grows with both factors, plus any drift the input
    // already carries off the group
    let c_norm = c_inv.matrix().norm();
    let bound = tol.orth * (c_norm * m.norm()).max(1.0) + c_norm * g.lorentz_residual() / m.norm();
    if border > bound || (rest[(0, 0)] - 1.0).abs() > bound {
        return Err(GeometryError::InvariantViolation { what: "rotation factor block form", residual: border, tolerance: bound });
    }
    let block = Matrix::from_fn(n + 1, n + 1, |k, j| {
        let plus = (m[(0, j + 1)] + m[(n + 1, j + 1)]) / s;
        if k < n {
            m[(k + 1, j + 1)] + c.y[k] * plus
        } else {
            plus
        }
    });
    let b = RotationB::new(block, bound)?;
    Ok((c, b))
}

/// `g = b · c`, factored through `g⁻¹ = c₁ b₁`.
pub fn iwasawa_bc(g: &LorentzElement, tol: &Tolerances) -> Result<(RotationB, BoostC), GeometryError> {
    let (c1, b1) = iwasawa_cb(&g.inverse(), tol)?;
    Ok((b1.inverse(), c1.inverse()))
}

/// All four factors of `g = b_L c_R = c_L b_R`.
#[derive(Clone, Debug)]
pub struct Factorization {
    pub b_left: RotationB,
    pub c_right: BoostC,
    pub c_left: BoostC,
    pub b_right: RotationB,
}

pub fn factorize(g: &LorentzElement, tol: &Tolerances) -> Result<Factorization, GeometryError> {
    let (b_left, c_right) = iwasawa_bc(g, tol)?;
    let (c_left, b_right) = iwasawa_cb(g, tol)?;
    Ok(Factorization { b_left, c_right, c_left, b_right })
}

/// Target unit `b_L(g)`.
pub fn gb_target(g: &LorentzElement, tol: &Tolerances) -> Result<RotationB, GeometryError> {
    Ok(iwasawa_bc(g, tol)?.0)
}

/// Source unit `b_R(g)`.
pub fn gb_source(g: &LorentzElement, tol: &Tolerances) -> Result<RotationB, GeometryError> {
    Ok(iwasawa_cb(g, tol)?.1)
}

/// Product `c_L(g₁) g₂` and the second evaluation `g₁ c_R(g₂)`.
pub fn gb_multiply_routes(
    g1: &LorentzElement,
    g2: &LorentzElement,
    tol: &Tolerances,
) -> Result<(LorentzElement, LorentzElement), GeometryError> {
    let (c_left1, b_right1) = iwasawa_cb(g1, tol)?;
    let (b_left2, c_right2) = iwasawa_bc(g2, tol)?;
    let mismatch = b_right1.distance(&b_left2);
    let d = (g1.n() + 2) as f64;
    if mismatch > tol.matching * (g1.matrix().norm() * g2.matrix().norm() / d).max(1.0) {
        return Err(GeometryError::NotComposable { mismatch });
    }
    Ok((embed_c(&c_left1).mul(g2), g1.mul(&embed_c(&c_right2))))
}

pub fn gb_multiply(g1: &LorentzElement, g2: &LorentzElement, tol: &Tolerances) -> Result<LorentzElement, GeometryError> {
    let (a, b) = gb_multiply_routes(g1, g2, tol)?;
    let gap = a.distance(&b);
    // the boost read off one factor carries that factor's conditioning
    let (n1, n2) = (g1.matrix().norm(), g2.matrix().norm());
    let scale = (n1 * n2 * n1.max(n2) / (g1.n() + 2) as f64).max(1.0);
    if gap > tol.recon * scale {
        return Err(GeometryError::InvariantViolation { what: "agreement of the two product routes", residual: gap, tolerance: tol.recon });
    }
    Ok(a)
}

/// `b_R c_R⁻¹`.
pub fn gb_inverse(g: &LorentzElement, tol: &Tolerances) -> Result<LorentzElement, GeometryError> {
    let (_, b_right) = iwasawa_cb(g, tol)?;
    let (_, c_right) = iwasawa_bc(g, tol)?;
    Ok(embed_b(&b_right).mul(&embed_c(&c_right.inverse())))
}

/// `c_L⁻¹ b_L`.
pub fn gb_inverse_left_route(g: &LorentzElement, tol: &Tolerances) -> Result<LorentzElement, GeometryError> {
    let (c_left, _) = iwasawa_cb(g, tol)?;
    let (b_left, _) = iwasawa_bc(g, tol)?;
    Ok(embed_c(&c_left.inverse()).mul(&embed_b(&b_left)))
}

/// `g · diag(1, Λ₁, 1)` for `Λ₁ ∈ SO(n)`.
pub fn b0_right_action(g: &LorentzElement, lambda1: &Matrix) -> LorentzElement {
    g.mul(&embed_b(&RotationB::from_b0(lambda1)))
}

/// The same action on factors: `(ΛΛ₁, u, Λ₁ᵗw, α; s, Λ₁ᵗy)`.
pub fn b0_right_action_factors(
    g: &LorentzElement,
    lambda1: &Matrix,
    tol: &Tolerances,
) -> Result<(RotationB, BoostC), GeometryError> {
    let (b, c) = iwasawa_bc(g, tol)?;
    let lambda = b.lambda() * lambda1;
    let w = lambda1.transpose() * b.w();
    let b1 = RotationB::from_parts(&lambda, &b.u(), &w, b.alpha(), tol.orth.max(1e-9))?;
    Ok((b1, BoostC { s: c.s, y: lambda1.transpose() * &c.y }))
}

/// `‖diag(Λ,1)·(s, y) − (s, Λy)·diag(Λ,1)‖`.
pub fn b0_commutation_residual(lambda1: &Matrix, c: &BoostC) -> f64 {
    let b = embed_b(&RotationB::from_b0(lambda1));
    let left = b.mul(&embed_c(c));
    let right = embed_c(&BoostC { s: c.s, y: lambda1 * &c.y }).mul(&b);
    left.distance(&right)
}

/// Fiber point `(g b₂⁻¹, c_R(g b₂⁻¹) b₂)` of `δ_B` over `g`.
pub fn delta_b_fiber(
    g: &LorentzElement,
    b2: &RotationB,
    tol: &Tolerances,
) -> Result<(LorentzElement, LorentzElement), GeometryError> {
    let g1 = g.mul(&embed_b(&b2.inverse()));
    let (_, c_right) = iwasawa_bc(&g1, tol)?;
    let g2 = embed_c(&c_right).mul(&embed_b(b2));
    Ok((g1, g2))
}

/// Membership of `((g₁, g₂), g)` in the graph of `δ_B`: `c_R(g₁) = c_L(g₂)`
/// and `g = b_L(g₁) g₂`. Returns the larger of the two mismatches.
pub fn delta_b_mismatch(
    g: &LorentzElement,
    g1: &LorentzElement,
    g2: &LorentzElement,
    tol: &Tolerances,
) -> Result<f64, GeometryError> {
    let (b_left1, c_right1) = iwasawa_bc(g1, tol)?;
    let (c_left2, _) = iwasawa_cb(g2, tol)?;
    let recombined = embed_b(&b_left1).mul(g2);
    Ok(c_right1.distance(&c_left2).max(recombined.distance(g)))
}

pub fn delta_b_contains(
    g: &LorentzElement,
    g1: &LorentzElement,
    g2: &LorentzElement,
    tol: &Tolerances,
) -> Result<bool, GeometryError> {
    Ok(delta_b_mismatch(g, g1, g2, tol)? <= tol.matching)
}

/// Random boost with `log s ~ U[-2, 2]` and Gaussian `y` of size `sigma`.
pub fn random_boost<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> BoostC {
    let s = rng.random_range(-2.0..2.0f64).exp();
    let y = Vector::from_fn(n, |_, _| sigma * rng.sample::<f64, _>(StandardNormal));
    BoostC { s, y }
}

pub fn random_rotation_b<R: Rng + ?Sized>(rng: &mut R, n: usize) -> RotationB {
    RotationB::from_matrix_unchecked(random_rotation(rng, n + 1))
}

/// `embed_b(b) · embed_c(c)` for random factors.
pub fn random_lorentz<R: Rng + ?Sized>(rng: &mut R, n: usize, sigma: f64) -> LorentzElement {
    embed_b(&random_rotation_b(rng, n)).mul(&embed_c(&random_boost(rng, n, sigma)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    #[test]
    fn identity_factors_trivially() {
        let t = Tolerances::default();
        let (c, b) = iwasawa_cb(&LorentzElement::identity(3), &t).unwrap();
        assert_eq!(c, BoostC::identity(3));
        assert!(b.distance(&RotationB::identity(3)) < 1e-15);
        assert_eq!(embed_c(&BoostC::identity(2)).matrix(), &Matrix::identity(4, 4));
    }

    #[test]
    fn boost_embedding_is_a_homomorphism() {
        let mut r = rng();
        for n in 2..5 {
            let a = random_boost(&mut r, n, 1.0);
            let b = random_boost(&mut r, n, 1.0);
            let lhs = embed_c(&a.compose(&b));
            let rhs = embed_c(&a).mul(&embed_c(&b));
            assert!(lhs.distance(&rhs) < 1e-10 * lhs.matrix().norm());
            let id = embed_c(&a).mul(&embed_c(&a.inverse()));
            assert!(id.distance(&LorentzElement::identity(n)) < 1e-10 * embed_c(&a).matrix().norm().powi(2));
            assert!(embed_c(&a).lorentz_residual() < 1e-9);
        }
    }

    #[test]
    fn factorizations_reconstruct() {
        let mut r = rng();
        let t = Tolerances::default();
        for n in 2..6 {
            let b = random_rotation_b(&mut r, n);
            let c = random_boost(&mut r, n, 1.0);
            let g = embed_c(&c).mul(&embed_b(&b));
            let (c1, b1) = iwasawa_cb(&g, &t).unwrap();
            assert!(c1.distance(&c) < 1e-10 && b1.distance(&b) < 1e-10);
            let h = embed_b(&b).mul(&embed_c(&c));
            let (b2, c2) = iwasawa_bc(&h, &t).unwrap();
            assert!(c2.distance(&c) < 1e-10 && b2.distance(&b) < 1e-10);
        }
    }

    #[test]
    fn non_lorentz_matrix_rejected() {
        let mut m = Matrix::identity(4, 4);
        m[(0, 1)] = 0.5;
        assert!(LorentzElement::new(m, 1e-10).is_err());
        let mut p = Matrix::identity(4, 4);
        p[(0, 0)] = -1.0;
        p[(1, 1)] = -1.0;
        assert!(matches!(LorentzElement::new(p, 1e-10), Err(GeometryError::NotInConnectedComponent(_))));
    }

    #[test]
    fn negative_scale_rejected() {
        assert!(matches!(BoostC::new(-1.0, Vector::zeros(2)), Err(GeometryError::NonPositiveS(_))));
    }

    #[test]
    fn inverse_routes_agree_and_swap_units() {
        let mut r = rng();
        let t = Tolerances::default();
        let g = random_lorentz(&mut r, 3, 1.0);
        let a = gb_inverse(&g, &t).unwrap();
        let b = gb_inverse_left_route(&g, &t).unwrap();
        assert!(a.distance(&b) < 1e-10);
        assert!(gb_target(&a, &t).unwrap().distance(&gb_source(&g, &t).unwrap()) < 1e-10);
        assert!(gb_inverse(&a, &t).unwrap().distance(&g) < 1e-9);
    }

    #[test]
    fn mismatched_product_is_rejected() {
        let mut r = rng();
        let t = Tolerances::default();
        let g1 = random_lorentz(&mut r, 2, 1.0);
        let g2 = random_lorentz(&mut r, 2, 1.0);
        assert!(matches!(gb_multiply(&g1, &g2, &t), Err(GeometryError::NotComposable { .. })));
    }
}
