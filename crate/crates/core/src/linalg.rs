//! Small dense linear algebra helpers over `nalgebra` dynamic matrices.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

pub type Vector = DVector<f64>;
pub type Matrix = DMatrix<f64>;

/// How an orthonormal frame is completed from a prescribed last column.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum FrameCompletion {
    /// Reflection sending `e_{n+1}` to `±p`, fixed up to determinant one.
    #[default]
    Householder,
    /// Gram–Schmidt on the standard basis after `p`.
    GramSchmidt,
}

pub fn unit(dim: usize, i: usize) -> Vector {
    let mut v = Vector::zeros(dim);
    v[i] = 1.0;
    v
}

/// `diag(1, -1, …, -1)` of size `dim`.
pub fn minkowski(dim: usize) -> Matrix {
    let mut m = -Matrix::identity(dim, dim);
    m[(0, 0)] = 1.0;
    m
}

/// Rotation in `SO(dim)` whose last column is the unit vector `p`.
pub fn complete_frame(p: &Vector, completion: FrameCompletion) -> Matrix {
    match completion {
        FrameCompletion::Householder => householder_frame(p),
        FrameCompletion::GramSchmidt => gram_schmidt_frame(p),
    }
}

fn householder_frame(p: &Vector) -> Matrix {
    let d = p.len();
    let e = unit(d, d - 1);
    let (w, flip) = if p[d - 1] >= 0.0 { (p + &e, d - 1) } else { (&e - p, 0) };
    let h = Matrix::identity(d, d) - (&w * w.transpose()) * (2.0 / w.norm_squared());
    let mut r = h;
    r.column_mut(flip).neg_mut();
    r
}

fn gram_schmidt_frame(p: &Vector) -> Matrix {
    let d = p.len();
    let mut basis: Vec<Vector> = vec![p.clone()];
    for i in 0..d {
        let mut v = unit(d, i);
        for b in &basis {
            v -= b * b.dot(&v);
        }
        let nv = v.norm();
        if nv > 1e-6 && basis.len() < d {
            basis.push(v / nv);
        }
    }
    let mut r = Matrix::zeros(d, d);
    for (k, b) in basis.iter().skip(1).enumerate() {
        r.set_column(k, b);
    }
    r.set_column(d - 1, p);
    if r.determinant() < 0.0 {
        r.column_mut(0).neg_mut();
    }
    r
}

/// `w - (w·p) p`.
pub fn tangent_part(p: &Vector, w: &Vector) -> Vector {
    w - p * p.dot(w)
}

/// Frobenius norm of `MᵀM - I`.
pub fn orthogonality_residual(m: &Matrix) -> f64 {
    (m.transpose() * m - Matrix::identity(m.ncols(), m.ncols())).norm()
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> Vector {
    Vector::from_fn(dim, |_, _| scale * rng.sample::<f64, _>(StandardNormal))
}

pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Vector {
    loop {
        let v = random_vector(rng, dim, 1.0);
        let n = v.norm();
        if n > 1e-3 {
            return v / n;
        }
    }
}

/// Random tangent vector at `p` with Gaussian components of size `scale`.
pub fn random_tangent<R: Rng + ?Sized>(rng: &mut R, p: &Vector, scale: f64) -> Vector {
    tangent_part(p, &random_vector(rng, p.len(), scale))
}

/// Random element of `SO(dim)` from the QR factorization of a Gaussian matrix.
pub fn random_rotation<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> Matrix {
    let g = Matrix::from_fn(dim, dim, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = (qr.q(), qr.r());
    for i in 0..dim {
        if r[(i, i)] < 0.0 {
            q.column_mut(i).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    q
}

/// `E_ij - E_ji`.
pub fn rotation_generator(dim: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(dim, dim);
    m[(i, j)] = 1.0;
    m[(j, i)] = -1.0;
    m
}

/// Block-diagonal `diag(a, 1)`.
pub fn extend_with_one(a: &Matrix) -> Matrix {
    let d = a.nrows() + 1;
    let mut m = Matrix::identity(d, d);
    m.view_mut((0, 0), (d - 1, d - 1)).copy_from(a);
    m
}

/// Numerical rank with singular values below `rel * σ_max` treated as zero.
pub fn numerical_rank(m: &Matrix, rel: f64) -> usize {
    let sv = m.clone().singular_values();
    let max = sv.iter().cloned().fold(0.0, f64::max);
    if max <= f64::MIN_POSITIVE {
        return 0;
    }
    sv.iter().filter(|&&s| s > rel * max).count()
}

pub fn max_abs(v: &Vector) -> f64 {
    v.amax()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn frames_are_rotations_with_prescribed_last_column() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for d in 2..6 {
            for _ in 0..50 {
                let mut p = random_unit(&mut rng, d);
                if rng.random_bool(0.1) {
                    p = -unit(d, d - 1);
                }
                for c in [FrameCompletion::Householder, FrameCompletion::GramSchmidt] {
                    let r = complete_frame(&p, c);
                    assert!(orthogonality_residual(&r) < 1e-12);
                    assert!((r.determinant() - 1.0).abs() < 1e-12);
                    assert!((r.column(d - 1) - &p).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn householder_frame_at_north_pole_is_identity() {
        let r = complete_frame(&unit(4, 3), FrameCompletion::Householder);
        assert!((r - Matrix::identity(4, 4)).norm() < 1e-15);
    }

    #[test]
    fn random_rotations_are_special_orthogonal() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 1..6 {
            let q = random_rotation(&mut rng, d);
            assert!(orthogonality_residual(&q) < 1e-12);
            assert!((q.determinant() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn rank_of_zero_matrix_is_zero() {
        assert_eq!(numerical_rank(&Matrix::zeros(3, 3), 1e-8), 0);
        assert_eq!(numerical_rank(&Matrix::identity(3, 3), 1e-8), 3);
    }
}
