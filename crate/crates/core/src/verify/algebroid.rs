//! Closed-form brackets and anchors against finite-difference commutators of
//! the invariant vector fields in the stereographic chart.

use rand::Rng;
use serde_json::json;

use super::{vec_json, CheckDef, Ctx, Outcome, Suite, Threshold, Tracker};
use crate::algebroid::fields::{
    anchor_field, anchor_homomorphism_error, anchor_ls_stereo, frame_change_residual, frame_l, frame_l_bracket,
    left_invariant_ls, left_invariant_lz, leibniz_error, section_in_chart_ls, section_in_chart_lz, slice_coordinates,
    slice_field_bracket, source_z, stereo_base_point, stereo_differential, tilde_bracket, transported_lz,
    z_coordinates,
};
use crate::algebroid::{
    anchor_ls, anchor_lz, anchor_lz_basis, basis_section_ls, basis_section_lz, bracket_ls, bracket_ls_coefficients,
    bracket_lz, bracket_lz_coefficients, constant_section_bracket, max_antisymmetry, max_jacobiator,
    AlgebroidVector, LineAlgebroid, SliceAlgebroid,
};
use crate::fd;
use crate::linalg::{random_tangent, random_unit, random_vector, unit, Vector};

pub(super) fn checks() -> Vec<CheckDef> {
    let named = |name, anchor, tol, run| CheckDef { name, suite: Suite::Algebroid, anchor, threshold: Threshold::Named(tol), run };
    vec![
        named("algebroid-line-bracket-commutator", "closed line bracket matches commutators of invariant fields at units", "fd-relative", line_bracket_fd),
        named("algebroid-slice-bracket-commutator", "closed slice bracket matches commutators of invariant fields at units", "fd-relative", slice_bracket_fd),
        named("algebroid-chart-bracket-commutator", "chart brackets of the invariant frames match commutators off the units", "fd-relative", chart_brackets_fd),
        named("algebroid-closed-jacobi", "cyclic Jacobi sum of the closed brackets vanishes", "closed-jacobi", closed_jacobi),
        named("algebroid-bracket-identities", "brackets are antisymmetric and the constant-section form agrees", "bracket-identities", bracket_identities),
        named("algebroid-anchor-homomorphism", "anchor of a bracket is the commutator of anchors", "fd-relative", anchor_homomorphism),
        named("algebroid-leibniz", "bracket with a function multiple obeys the Leibniz rule", "fd-relative", leibniz),
        named("algebroid-frame-change", "the two invariant frames are related by the stated change of frame", "frame-identity", frame_change),
        named("algebroid-vanishing-at-p0", "anchors and slice brackets vanish over the distinguished point", "p0-vanishing", vanishing_at_p0),
        named("algebroid-left-invariance", "invariant fields are preserved by translation", "fd-relative", left_invariance),
        named("algebroid-anchor-forms", "basis and coordinate forms of the anchors agree", "bracket-identities", anchor_forms),
        named("algebroid-anchor-is-source-derivative", "the anchor is the derivative of the source map at units", "fd-relative", anchor_source_derivative),
    ]
}

fn combination_lz(c: &Vector, x: &Vector) -> Vector {
    c.iter().enumerate().fold(Vector::zeros(2 * x.len() + 1), |acc, (k, &ck)| acc + section_in_chart_lz(k, x) * ck)
}

fn combination_ls(c: &Vector, x: &Vector) -> Vector {
    c.iter().enumerate().fold(Vector::zeros(2 * x.len()), |acc, (k, &ck)| acc + section_in_chart_ls(k, x) * ck)
}

fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..=n).flat_map(move |i| (0..=n).map(move |j| (i, j)))
}

fn line_bracket_fd(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.8);
        let p = stereo_base_point(&x);
        let q = z_coordinates(&x, &Vector::zeros(n), 1.0);
        for (i, j) in pairs(n) {
            let c = fd::commutator(|y| left_invariant_lz(i, y), |y| left_invariant_lz(j, y), &q, fd::STEP);
            let expected = combination_lz(&bracket_lz_coefficients(i, j, &p), &x);
            t.record(fd::scaled_error(&c, &expected), || json!({ "x": vec_json(&x), "i": i, "j": j }));
        }
    }
    t.finish()
}

fn slice_bracket_fd(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.8);
        let p = stereo_base_point(&x);
        let q = slice_coordinates(&x, &Vector::zeros(n));
        for (i, j) in pairs(n) {
            let c = fd::commutator(|y| left_invariant_ls(i, y), |y| left_invariant_ls(j, y), &q, fd::STEP);
            let expected = combination_ls(&bracket_ls_coefficients(i, j, &p), &x);
            t.record(fd::scaled_error(&c, &expected), || json!({ "x": vec_json(&x), "i": i, "j": j }));
        }
    }
    t.finish()
}

fn chart_brackets_fd(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.7);
        let xd = random_vector(&mut ctx.rng, n, 0.5);
        let s = ctx.rng.random_range(0.6..1.6);
        let q = z_coordinates(&x, &xd, s);
        let qs = slice_coordinates(&x, &xd);
        for (i, j) in pairs(n) {
            let a = fd::commutator(|y| frame_l(i, y), |y| frame_l(j, y), &q, fd::STEP);
            let b = fd::commutator(|y| left_invariant_lz(i, y), |y| left_invariant_lz(j, y), &q, fd::STEP);
            let c = fd::commutator(|y| left_invariant_ls(i, y), |y| left_invariant_ls(j, y), &qs, fd::STEP);
            let worst = fd::scaled_error(&a, &frame_l_bracket(i, j, &q))
                .max(fd::scaled_error(&b, &tilde_bracket(i, j, &q)))
                .max(fd::scaled_error(&c, &slice_field_bracket(i, j, &qs)));
            t.record(worst, || json!({ "x": vec_json(&x), "xdot": vec_json(&xd), "s": s, "i": i, "j": j }));
        }
    }
    t.finish()
}

fn closed_jacobi(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.heavy_samples() {
        let p = random_unit(&mut ctx.rng, ctx.n + 1);
        let worst = max_jacobiator(&LineAlgebroid, &p).max(max_jacobiator(&SliceAlgebroid, &p));
        t.record(worst, || json!({ "p": vec_json(&p) }));
    }
    t.finish()
}

fn bracket_identities(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let p = random_unit(&mut ctx.rng, n + 1);
        let mut worst = max_antisymmetry(&LineAlgebroid, &p).max(max_antisymmetry(&SliceAlgebroid, &p));
        for (i, j) in pairs(n) {
            worst = worst.max((constant_section_bracket(i, j, &p) - bracket_lz_coefficients(i, j, &p)).amax());
        }
        for i in 0..n {
            // [X̃_i, X̃_last] at p₀ is X̃_i
            let p0 = unit(n + 1, n);
            worst = worst.max(bracket_lz(i, n, &p0).distance(&basis_section_lz(i, &p0)));
        }
        t.record(worst, || json!({ "p": vec_json(&p) }));
    }
    t.finish()
}

fn anchor_homomorphism(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.8);
        for (i, j) in pairs(n) {
            let worst = anchor_homomorphism_error(&LineAlgebroid, i, j, &x).max(anchor_homomorphism_error(&SliceAlgebroid, i, j, &x));
            t.record(worst, || json!({ "x": vec_json(&x), "i": i, "j": j }));
        }
    }
    t.finish()
}

/// Random quadratic `c + aᵗy + yᵗBy` on the chart.
fn random_quadratic(ctx: &mut Ctx) -> (f64, Vector, Vector) {
    let n = ctx.n;
    let c = ctx.rng.random_range(0.5..1.5);
    let a = random_vector(&mut ctx.rng, n, 0.5);
    let b = random_vector(&mut ctx.rng, n * n, 0.5);
    (c, a, b)
}

fn leibniz(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.8);
        let (c, a, b) = random_quadratic(ctx);
        let f = |y: &Vector| {
            let mut quad = 0.0;
            for k in 0..n {
                for l in 0..n {
                    quad += b[k * n + l] * y[k] * y[l];
                }
            }
            c + a.dot(y) + quad
        };
        for (i, j) in pairs(n) {
            t.record(leibniz_error(i, j, &x, f), || json!({ "x": vec_json(&x), "i": i, "j": j, "c": c, "a": vec_json(&a), "b": vec_json(&b) }));
        }
    }
    t.finish()
}

fn frame_change(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let x = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let xd = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let s = ctx.rng.random_range(-1.0..1.0f64).exp();
        let q = z_coordinates(&x, &xd, s);
        let scale = (0..=ctx.n).map(|i| left_invariant_lz(i, &q).amax().max(frame_l(i, &q).amax())).fold(1.0, f64::max);
        t.record(frame_change_residual(&q) / scale, || json!({ "x": vec_json(&x), "xdot": vec_json(&xd), "s": s }));
    }
    t.finish()
}

/// Over `p₀` every anchor vanishes and so does every slice bracket; the same
/// holds at base points rotated about the distinguished axis.
fn vanishing_at_p0(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    let p0 = unit(n + 1, n);
    for _ in 0..ctx.capped(100) {
        let v = random_tangent(&mut ctx.rng, &p0, 1.0);
        let sdot = ctx.rng.random_range(-1.0..1.0);
        let mut worst = anchor_ls(&p0, &v).amax();
        worst = worst.max(anchor_lz(&AlgebroidVector { p: p0.clone(), vdot: v.clone(), sdot }).amax());
        for i in 0..=n {
            worst = worst.max(anchor_lz_basis(i, &p0).amax());
            worst = worst.max(anchor_ls(&p0, &basis_section_ls(i, &p0)).amax());
            for j in 0..=n {
                worst = worst.max(bracket_ls(i, j, &p0).amax());
            }
        }
        t.record(worst, || json!({ "v": vec_json(&v), "sdot": sdot }));
    }
    t.finish()
}

fn left_invariance(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.7);
        let xd = random_vector(&mut ctx.rng, n, 0.5);
        let s = ctx.rng.random_range(0.6..1.6);
        let q = z_coordinates(&x, &xd, s);
        for i in 0..=n {
            let a = transported_lz(|y| left_invariant_lz(i, y), &q, fd::STEP);
            let b = transported_lz(|y| frame_l(i, y), &q, fd::STEP);
            let worst = fd::scaled_error(&a, &left_invariant_lz(i, &q))
                .max(fd::scaled_error(&b, &frame_l(i, &q)));
            t.record(worst, || json!({ "x": vec_json(&x), "xdot": vec_json(&xd), "s": s, "i": i }));
        }
    }
    t.finish()
}

fn anchor_forms(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.samples {
        let x = random_vector(&mut ctx.rng, n, 0.8);
        let p = stereo_base_point(&x);
        let w = random_tangent(&mut ctx.rng, &p, 1.0);
        let mut worst: f64 = 0.0;
        for i in 0..=n {
            worst = worst.max((anchor_lz(&basis_section_lz(i, &p)) - anchor_lz_basis(i, &p)).amax());
        }
        let vdot_only = AlgebroidVector { p: p.clone(), vdot: w.clone(), sdot: 0.0 };
        worst = worst.max((anchor_lz(&vdot_only) - &w * (p[n] - 1.0)).amax());
        let intrinsic = stereo_differential(&p, &anchor_ls(&p, &w));
        let chart = anchor_ls_stereo(&x, &stereo_differential(&p, &w));
        worst = worst.max((intrinsic - &chart).amax() / chart.amax().max(1.0));
        t.record(worst, || json!({ "x": vec_json(&x), "w": vec_json(&w) }));
    }
    t.finish()
}

fn anchor_source_derivative(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.heavy_samples() {
        let x = random_vector(&mut ctx.rng, n, 0.8);
        let q = z_coordinates(&x, &Vector::zeros(n), 1.0);
        for i in 0..=n {
            let d = left_invariant_lz(i, &q);
            let moved = fd::directional(source_z, &q, &d, fd::STEP);
            t.record(fd::scaled_error(&moved, &anchor_field(&LineAlgebroid, i, &x)), || json!({ "x": vec_json(&x), "i": i }));
        }
    }
    t.finish()
}
