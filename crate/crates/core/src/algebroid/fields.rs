//! Vector fields on the stereographic patch of `Z` and of the slice, used as
//! independent oracles for the closed-form brackets and anchors.
//!
//! A point of the patch of `Z` is the coordinate vector `(x, ẋ, s) ∈ ℝ²ⁿ⁺¹`;
//! on the slice it is `(x, ẋ) ∈ ℝ²ⁿ`. Fields tangent to the target fibers
//! have vanishing `x` components. `x̃ = s x − 2ẋ/(1+|x|²)` is the source.

use crate::fd;
use crate::linalg::{unit, Vector};

use super::{basis_section_lz, basis_section_ls, FrameAlgebroid};

pub fn split_z(q: &Vector) -> (Vector, Vector, f64) {
    let n = (q.len() - 1) / 2;
    (q.rows(0, n).into_owned(), q.rows(n, n).into_owned(), q[2 * n])
}

pub fn split_slice(q: &Vector) -> (Vector, Vector) {
    let n = q.len() / 2;
    (q.rows(0, n).into_owned(), q.rows(n, n).into_owned())
}

pub fn z_coordinates(x: &Vector, xdot: &Vector, s: f64) -> Vector {
    let n = x.len();
    let mut q = Vector::zeros(2 * n + 1);
    q.rows_mut(0, n).copy_from(x);
    q.rows_mut(n, n).copy_from(xdot);
    q[2 * n] = s;
    q
}

pub fn slice_coordinates(x: &Vector, xdot: &Vector) -> Vector {
    let n = x.len();
    let mut q = Vector::zeros(2 * n);
    q.rows_mut(0, n).copy_from(x);
    q.rows_mut(n, n).copy_from(xdot);
    q
}

fn fiber_z(dxdot: &Vector, ds: f64) -> Vector {
    z_coordinates(&Vector::zeros(dxdot.len()), dxdot, ds)
}

fn fiber_slice(dxdot: &Vector) -> Vector {
    slice_coordinates(&Vector::zeros(dxdot.len()), dxdot)
}

pub fn source_z(q: &Vector) -> Vector {
    let (x, xd, s) = split_z(q);
    &x * s - xd * (2.0 / (1.0 + x.norm_squared()))
}

pub fn source_slice(q: &Vector) -> Vector {
    let (x, xd) = split_slice(q);
    &x - xd * (2.0 / (1.0 + x.norm_squared()))
}

/// `p(x) = (2x, |x|² − 1)/(1+|x|²)`.
pub fn stereo_base_point(x: &Vector) -> Vector {
    let q = 1.0 + x.norm_squared();
    (x * (2.0 / q)).push((x.norm_squared() - 1.0) / q)
}

/// Differential of `p ↦ u/(1−α)` applied to a tangent vector `w` at `p`.
pub fn stereo_differential(p: &Vector, w: &Vector) -> Vector {
    let n = p.len() - 1;
    let (u, a) = (p.rows(0, n), p[n]);
    (w.rows(0, n) / (1.0 - a) + u * (w[n] / ((1.0 - a) * (1.0 - a)))).into_owned()
}

/// Right-invariant frame `X^l_i` tangent to the target fibers.
pub fn frame_l(i: usize, q: &Vector) -> Vector {
    let (x, xd, s) = split_z(q);
    let n = x.len();
    if i == n {
        return fiber_z(&xd, s);
    }
    let t = source_z(q);
    fiber_z(&(unit(n, i) * ((1.0 + x.norm_squared()) / (1.0 + t.norm_squared()))), 0.0)
}

/// Extension of `X̃_i` from the units.
pub fn left_invariant_lz(i: usize, q: &Vector) -> Vector {
    let (x, xd, s) = split_z(q);
    let n = x.len();
    let t = source_z(q);
    let qt = 1.0 + t.norm_squared();
    let qx = 1.0 + x.norm_squared();
    let euler = fiber_z(&xd, s);
    let along_t = fiber_z(&t, 0.0);
    if i == n {
        return euler * ((t.norm_squared() - 1.0) / qt) + along_t * (qx / qt);
    }
    euler * (2.0 * t[i] / qt) - along_t * (qx / qt * t[i]) + fiber_z(&unit(n, i), 0.0) * (qx / 2.0)
}

/// Extension of `Ỹ_i` from the units of the slice.
pub fn left_invariant_ls(i: usize, q: &Vector) -> Vector {
    let (x, _) = split_slice(q);
    let n = x.len();
    let t = source_slice(q);
    let qt = 1.0 + t.norm_squared();
    let qx = 1.0 + x.norm_squared();
    let along_t = fiber_slice(&t) * (qx / qt);
    if i == n {
        return along_t;
    }
    fiber_slice(&unit(n, i)) * (qx / 2.0) - along_t * t[i]
}

/// `X̃_i` at the unit over `x`, pushed through the chart.
pub fn section_in_chart_lz(i: usize, x: &Vector) -> Vector {
    let p = stereo_base_point(x);
    let sec = basis_section_lz(i, &p);
    fiber_z(&stereo_differential(&p, &sec.vdot), sec.sdot)
}

pub fn section_in_chart_ls(i: usize, x: &Vector) -> Vector {
    let p = stereo_base_point(x);
    fiber_slice(&stereo_differential(&p, &basis_section_ls(i, &p)))
}

fn antisymmetric<F>(i: usize, j: usize, n: usize, q: &Vector, f: F) -> Vector
where
    F: Fn(usize, usize, &Vector) -> Vector,
{
    if i == j {
        Vector::zeros(q.len())
    } else if i == n {
        -f(j, i, q)
    } else {
        f(i, j, q)
    }
}

/// `[X^l_i, X^l_j]` in closed form.
pub fn frame_l_bracket(i: usize, j: usize, q: &Vector) -> Vector {
    let n = (q.len() - 1) / 2;
    antisymmetric(i, j, n, q, |i, j, q| {
        let t = source_z(q);
        let qt = 1.0 + t.norm_squared();
        if j == n {
            frame_l(i, q) * (3.0 - 2.0 / qt)
        } else {
            (frame_l(j, q) * t[i] - frame_l(i, q) * t[j]) * (4.0 / (qt * qt))
        }
    })
}

/// `[X̃_i, X̃_j]` in closed form in the chart.
pub fn tilde_bracket(i: usize, j: usize, q: &Vector) -> Vector {
    let n = (q.len() - 1) / 2;
    antisymmetric(i, j, n, q, |i, j, q| {
        let t = source_z(q);
        let t2 = t.norm_squared();
        let qt = 1.0 + t2;
        if j == n {
            let mut rest = left_invariant_lz(n, q);
            for k in 0..n {
                rest -= left_invariant_lz(k, q) * t[k];
            }
            left_invariant_lz(i, q) * ((t2 - 3.0) / qt) - rest * (8.0 * t[i] / (qt * qt))
        } else {
            (left_invariant_lz(i, q) * t[j] - left_invariant_lz(j, q) * t[i]) * (4.0 / qt)
        }
    })
}

/// `[Ỹ_i, Ỹ_j]` in closed form in the chart.
pub fn slice_field_bracket(i: usize, j: usize, q: &Vector) -> Vector {
    let n = q.len() / 2;
    antisymmetric(i, j, n, q, |i, j, q| {
        let t = source_slice(q);
        let qt = 1.0 + t.norm_squared();
        if j == n {
            (left_invariant_ls(i, q) + left_invariant_ls(n, q) * t[i]) * (-2.0 / qt)
        } else {
            (left_invariant_ls(i, q) * t[j] - left_invariant_ls(j, q) * t[i]) * (2.0 / qt)
        }
    })
}

/// `X̃_i` rebuilt from the frame `X^l`.
pub fn tilde_from_frame_l(i: usize, q: &Vector) -> Vector {
    let n = (q.len() - 1) / 2;
    let t = source_z(q);
    let t2 = t.norm_squared();
    let qt = 1.0 + t2;
    let mut weighted = Vector::zeros(q.len());
    for k in 0..n {
        weighted += frame_l(k, q) * t[k];
    }
    if i == n {
        return weighted + frame_l(n, q) * ((t2 - 1.0) / qt);
    }
    -weighted * t[i] + frame_l(i, q) * (qt / 2.0) + frame_l(n, q) * (2.0 * t[i] / qt)
}

/// `X^l_i` rebuilt from the frame `X̃`.
pub fn frame_l_from_tilde(i: usize, q: &Vector) -> Vector {
    let n = (q.len() - 1) / 2;
    let t = source_z(q);
    let t2 = t.norm_squared();
    let qt = 1.0 + t2;
    let mut weighted = Vector::zeros(q.len());
    for k in 0..n {
        weighted += left_invariant_lz(k, q) * t[k];
    }
    if i == n {
        return left_invariant_lz(n, q) * ((t2 - 1.0) / qt) + weighted * (2.0 / qt);
    }
    (left_invariant_lz(i, q) + (left_invariant_lz(n, q) - weighted) * (2.0 * t[i] / qt)) * (2.0 / qt)
}

/// Largest residual of the two frame changes over all indices.
pub fn frame_change_residual(q: &Vector) -> f64 {
    let n = (q.len() - 1) / 2;
    (0..=n)
        .map(|i| {
            let a = (tilde_from_frame_l(i, q) - left_invariant_lz(i, q)).amax();
            let b = (frame_l_from_tilde(i, q) - frame_l(i, q)).amax();
            a.max(b)
        })
        .fold(0.0, f64::max)
}

/// `d/dt γ·ξ(t)` at `t = 0` where `ξ` leaves the unit over the source of `γ`
/// with velocity `field(unit)`.
pub fn transported_lz<F>(field: F, q: &Vector, h: f64) -> Vector
where
    F: Fn(&Vector) -> Vector,
{
    let (x, xd, s) = split_z(q);
    let n = x.len();
    let t = source_z(q);
    let at_unit = field(&z_coordinates(&t, &Vector::zeros(n), 1.0));
    let (_, dxd, ds) = split_z(&at_unit);
    let ratio = (1.0 + x.norm_squared()) / (1.0 + t.norm_squared());
    let product = |tau: f64| {
        let s2 = 1.0 + tau * ds;
        z_coordinates(&x, &(&xd * s2 + &dxd * (tau * ratio)), s * s2)
    };
    (product(h) - product(-h)) / (2.0 * h)
}

/// `ρ(X_i)` pushed to the stereographic chart of the base.
pub fn anchor_field<A: FrameAlgebroid>(alg: &A, i: usize, x: &Vector) -> Vector {
    let p = stereo_base_point(x);
    stereo_differential(&p, &alg.anchor(i, &p))
}

/// `ρ([X_i, X_j])` pushed to the chart.
pub fn anchor_of_bracket<A: FrameAlgebroid>(alg: &A, i: usize, j: usize, x: &Vector) -> Vector {
    let p = stereo_base_point(x);
    stereo_differential(&p, &super::anchor_of_combination(alg, &alg.structure(i, j, &p), &p))
}

/// Scaled error between `ρ([X_i, X_j])` and the commutator of the anchored fields.
pub fn anchor_homomorphism_error<A: FrameAlgebroid>(alg: &A, i: usize, j: usize, x: &Vector) -> f64 {
    let fd = fd::commutator(|y| anchor_field(alg, i, y), |y| anchor_field(alg, j, y), x, fd::STEP);
    fd::scaled_error(&fd, &anchor_of_bracket(alg, i, j, x))
}

/// Scaled error of `[X̃_i, fX̃_j] = f[X̃_i, X̃_j] + (ρ(X̃_i)f)X̃_j` at the unit
/// over `x`, with `f` extended to `Z` through the source map.
pub fn leibniz_error<F>(i: usize, j: usize, x: &Vector, f: F) -> f64
where
    F: Fn(&Vector) -> f64,
{
    let n = x.len();
    let p = stereo_base_point(x);
    let q = z_coordinates(x, &Vector::zeros(n), 1.0);
    let fd = fd::commutator(|y| left_invariant_lz(i, y), |y| left_invariant_lz(j, y) * f(&source_z(y)), &q, fd::STEP);
    let coefficients = super::bracket_lz_coefficients(i, j, &p);
    let bracket = coefficients
        .iter()
        .enumerate()
        .fold(Vector::zeros(q.len()), |acc, (k, &c)| acc + section_in_chart_lz(k, x) * c);
    let derivative = fd::directional_scalar(&f, x, &anchor_field(&super::LineAlgebroid, i, x), fd::STEP);
    let expected = bracket * f(x) + section_in_chart_lz(j, x) * derivative;
    fd::scaled_error(&fd, &expected)
}

/// Slice anchor on chart vectors: `−2/(1+|x|²)`.
pub fn anchor_ls_stereo(x: &Vector, dx: &Vector) -> Vector {
    dx * (-2.0 / (1.0 + x.norm_squared()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebroid::{bracket_lz_coefficients, bracket_ls_coefficients, LineAlgebroid, SliceAlgebroid};
    use crate::linalg::random_vector;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn combination_lz(c: &Vector, x: &Vector) -> Vector {
        c.iter().enumerate().fold(Vector::zeros(2 * x.len() + 1), |acc, (k, &ck)| acc + section_in_chart_lz(k, x) * ck)
    }

    fn combination_ls(c: &Vector, x: &Vector) -> Vector {
        c.iter().enumerate().fold(Vector::zeros(2 * x.len()), |acc, (k, &ck)| acc + section_in_chart_ls(k, x) * ck)
    }

    #[test]
    fn fields_restrict_to_sections() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let x = random_vector(&mut rng, 3, 0.8);
        let q = z_coordinates(&x, &Vector::zeros(3), 1.0);
        let qs = slice_coordinates(&x, &Vector::zeros(3));
        for i in 0..4 {
            assert!((left_invariant_lz(i, &q) - section_in_chart_lz(i, &x)).amax() < 1e-12);
            assert!((left_invariant_ls(i, &qs) - section_in_chart_ls(i, &x)).amax() < 1e-12);
        }
    }

    #[test]
    fn closed_brackets_match_commutators_at_units() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let n = 3;
        let x = random_vector(&mut rng, n, 0.8);
        let p = stereo_base_point(&x);
        let q = z_coordinates(&x, &Vector::zeros(n), 1.0);
        let qs = slice_coordinates(&x, &Vector::zeros(n));
        for i in 0..=n {
            for j in 0..=n {
                let c = fd::commutator(|y| left_invariant_lz(i, y), |y| left_invariant_lz(j, y), &q, fd::STEP);
                let expected = combination_lz(&bracket_lz_coefficients(i, j, &p), &x);
                assert!(fd::close(&c, &expected, fd::REL_TOL, fd::ABS_FLOOR), "{i} {j}");
                let c = fd::commutator(|y| left_invariant_ls(i, y), |y| left_invariant_ls(j, y), &qs, fd::STEP);
                let expected = combination_ls(&bracket_ls_coefficients(i, j, &p), &x);
                assert!(fd::close(&c, &expected, fd::REL_TOL, fd::ABS_FLOOR), "{i} {j}");
            }
        }
    }

    #[test]
    fn chart_brackets_match_commutators_everywhere() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 3;
        let x = random_vector(&mut rng, n, 0.7);
        let xd = random_vector(&mut rng, n, 0.5);
        let q = z_coordinates(&x, &xd, rng.random_range(0.6..1.6));
        let qs = slice_coordinates(&x, &xd);
        for i in 0..=n {
            for j in 0..=n {
                let c = fd::commutator(|y| frame_l(i, y), |y| frame_l(j, y), &q, fd::STEP);
                assert!(fd::close(&c, &frame_l_bracket(i, j, &q), fd::REL_TOL, fd::ABS_FLOOR));
                let c = fd::commutator(|y| left_invariant_lz(i, y), |y| left_invariant_lz(j, y), &q, fd::STEP);
                assert!(fd::close(&c, &tilde_bracket(i, j, &q), fd::REL_TOL, fd::ABS_FLOOR));
                let c = fd::commutator(|y| left_invariant_ls(i, y), |y| left_invariant_ls(j, y), &qs, fd::STEP);
                assert!(fd::close(&c, &slice_field_bracket(i, j, &qs), fd::REL_TOL, fd::ABS_FLOOR));
            }
        }
    }

    #[test]
    fn frame_changes_and_values_at_p0_direction() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let q = z_coordinates(&random_vector(&mut rng, 3, 1.0), &random_vector(&mut rng, 3, 1.0), 1.3);
        assert!(frame_change_residual(&q) < 1e-10);
    }

    #[test]
    fn fields_are_invariant_under_translation() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let q = z_coordinates(&random_vector(&mut rng, 3, 0.7), &random_vector(&mut rng, 3, 0.5), 0.8);
        for i in 0..4 {
            let t = transported_lz(|y| left_invariant_lz(i, y), &q, fd::STEP);
            assert!(fd::close(&t, &left_invariant_lz(i, &q), fd::REL_TOL, fd::ABS_FLOOR));
            let t = transported_lz(|y| frame_l(i, y), &q, fd::STEP);
            assert!(fd::close(&t, &frame_l(i, &q), fd::REL_TOL, fd::ABS_FLOOR));
        }
    }

    #[test]
    fn anchors_are_homomorphisms() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let x = random_vector(&mut rng, 3, 0.8);
        for i in 0..4 {
            for j in 0..4 {
                assert!(anchor_homomorphism_error(&LineAlgebroid, i, j, &x) < fd::REL_TOL);
                assert!(anchor_homomorphism_error(&SliceAlgebroid, i, j, &x) < fd::REL_TOL);
            }
        }
    }

    #[test]
    fn leibniz_rule() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let x = random_vector(&mut rng, 3, 0.8);
        let f = |y: &Vector| 1.0 + y[0] * y[0] - 0.5 * y[1] * y[2] + 0.3 * y[0];
        for (i, j) in [(0, 1), (0, 3), (2, 3), (3, 1)] {
            assert!(leibniz_error(i, j, &x, f) < fd::REL_TOL);
        }
    }

    #[test]
    fn slice_anchor_in_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let x = random_vector(&mut rng, 3, 0.8);
        let p = stereo_base_point(&x);
        let w = crate::linalg::random_tangent(&mut rng, &p, 1.0);
        let intrinsic = stereo_differential(&p, &crate::algebroid::anchor_ls(&p, &w));
        let chart = anchor_ls_stereo(&x, &stereo_differential(&p, &w));
        assert!((intrinsic - chart).amax() < 1e-12);
    }

    #[test]
    fn anchor_is_tangent_map_of_source() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let x = random_vector(&mut rng, 3, 0.8);
        let q = z_coordinates(&x, &Vector::zeros(3), 1.0);
        for i in 0..4 {
            let d = left_invariant_lz(i, &q);
            let moved = fd::directional(source_z, &q, &d, fd::STEP);
            assert!(fd::close(&moved, &anchor_field(&LineAlgebroid, i, &x), fd::REL_TOL, fd::ABS_FLOOR));
        }
    }
}
