//! The base map of the lifted comultiplication against the Euclidean action
//! on oriented lines and on the sphere bundle.

use rand::Rng;
use serde_json::{json, Value};

use super::{mat_json, vec_json, CheckDef, Ctx, Outcome, Suite, Threshold, Tracker};
use crate::lift::{
    beta_closed, beta_numeric, boost_dual, f_p, f_p_numeric, f_p_star, f_p_star_transpose, line_action,
    random_covector, random_line, random_motion, s_tilde_restriction_lift, sphere_bundle_action, EuclideanMotion,
    LiftedCovector, OrientedLine, Reparametrization, LIFT_STEP,
};
use crate::linalg::{random_tangent, random_unit, random_vector};
use crate::line::{
    delta_z_member, delta_z_membership, delta_z_mismatch, random_composable, random_z, z_inverse, z_multiply, ZPoint,
};
use crate::lorentz::{delta_b_mismatch, embed_b, gb_inverse, gb_multiply, gb_source, random_rotation_b};

pub(super) fn checks() -> Vec<CheckDef> {
    let named = |name, anchor, tol, run| CheckDef { name, suite: Suite::Semiclassical, anchor, threshold: Threshold::Named(tol), run };
    let exact = |name, anchor, run| CheckDef { name, suite: Suite::Semiclassical, anchor, threshold: Threshold::Exact, run };
    vec![
        named("semiclassical-sphere-bundle-action", "closed base map equals the Euclidean action on the sphere bundle", "semiclassical", sphere_bundle),
        named("semiclassical-base-map-numeric", "base map from the annihilator condition equals the closed form", "beta-numeric", beta_from_definition),
        named("semiclassical-base-map-reparametrized", "base map does not depend on second-order terms of the test curves", "beta-numeric", beta_reparametrized),
        named("semiclassical-line-action", "on covectors without scale part the base map is the action on lines", "semiclassical", line_restriction),
        named("semiclassical-action-laws", "base map and both Euclidean actions are group actions", "semiclassical", action_laws),
        named("semiclassical-line-well-defined", "line action does not depend on the point chosen on the line", "semiclassical", line_well_defined),
        named("semiclassical-boost-derivative", "closed derivative of the left boost part matches finite differences", "derivative", boost_derivative),
        named("semiclassical-adjoint", "closed dual map is the transpose of the derivative under the trace form", "adjoint", adjoint),
        named("semiclassical-rotation-conjugation", "rotations conjugate boost generators by rotating the translation", "semiclassical", rotation_conjugation),
        exact("semiclassical-comultiplication-morphism", "unit, inverse, product and coassociativity samples of the comultiplication", comultiplication_morphism),
    ]
}

fn motion_json(g: &EuclideanMotion) -> Value {
    json!({ "z": vec_json(&g.z), "b": mat_json(&g.b) })
}

fn covector_json(c: &LiftedCovector) -> Value {
    json!({ "p": vec_json(&c.p), "psi": vec_json(&c.psi), "sdot_dual": c.sdot_dual })
}

fn covector_rel(a: &LiftedCovector, b: &LiftedCovector) -> f64 {
    a.distance(b) / b.psi.amax().max(b.sdot_dual.abs()).max(1.0)
}

fn line_rel(a: &OrientedLine, b: &OrientedLine) -> f64 {
    a.distance(b) / b.v.amax().max(1.0)
}

fn sphere_bundle(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.samples {
        let g = random_motion(&mut ctx.rng, d, 1.0);
        let c = random_covector(&mut ctx.rng, d, 1.0);
        let closed = beta_closed(&g, &c);
        let action = LiftedCovector::from_sphere_bundle(&sphere_bundle_action(&g, &c.to_sphere_bundle()));
        t.record(covector_rel(&closed, &action), || json!({ "g": motion_json(&g), "c": covector_json(&c) }));
    }
    t.finish()
}

fn beta_from_definition(ctx: &mut Ctx) -> Outcome {
    beta_against_closed(ctx, false)
}

fn beta_reparametrized(ctx: &mut Ctx) -> Outcome {
    beta_against_closed(ctx, true)
}

fn beta_against_closed(ctx: &mut Ctx, curved: bool) -> Outcome {
    let tol = ctx.tol.get("beta-numeric");
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.heavy_samples() {
        let g = random_motion(&mut ctx.rng, d, 1.0);
        let c = random_covector(&mut ctx.rng, d, 1.0);
        let curvature = if curved { ctx.rng.random_range(-1.0..1.0) } else { 0.0 };
        let r = beta_numeric(&g, &c, Reparametrization { curvature }, tol).map(|b| covector_rel(&b.covector, &beta_closed(&g, &c)));
        t.outcome(r, || json!({ "g": motion_json(&g), "c": covector_json(&c), "curvature": curvature }));
    }
    t.finish()
}

fn line_restriction(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.samples {
        let g = random_motion(&mut ctx.rng, d, 1.0);
        let l = random_line(&mut ctx.rng, d, 1.0);
        let c = LiftedCovector { p: l.p.clone(), psi: l.v.clone(), sdot_dual: 0.0 };
        let r = s_tilde_restriction_lift(&g, &c, 0.0).map(|lifted| {
            let image = OrientedLine { p: lifted.p, v: lifted.psi };
            line_rel(&image, &line_action(&g, &l))
        });
        t.outcome(r, || json!({ "g": motion_json(&g), "p": vec_json(&l.p), "v": vec_json(&l.v) }));
    }
    t.finish()
}

fn action_laws(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.samples {
        let g1 = random_motion(&mut ctx.rng, d, 1.0);
        let g2 = random_motion(&mut ctx.rng, d, 1.0);
        let c = random_covector(&mut ctx.rng, d, 1.0);
        let l = random_line(&mut ctx.rng, d, 1.0);
        let g12 = g1.compose(&g2);
        let beta = covector_rel(&beta_closed(&g12, &c), &beta_closed(&g1, &beta_closed(&g2, &c)));
        let unit = covector_rel(&beta_closed(&EuclideanMotion::identity(d), &c), &c);
        let lines = line_rel(&line_action(&g12, &l), &line_action(&g1, &line_action(&g2, &l)));
        let x = c.to_sphere_bundle();
        let bundle = sphere_bundle_action(&g12, &x).distance(&sphere_bundle_action(&g1, &sphere_bundle_action(&g2, &x)))
            / x.v.amax().max(x.sdot.abs()).max(1.0);
        let inverse = covector_rel(&beta_closed(&g1.inverse(), &beta_closed(&g1, &c)), &c);
        t.record(beta.max(unit).max(lines).max(bundle).max(inverse), || {
            json!({ "g1": motion_json(&g1), "g2": motion_json(&g2), "c": covector_json(&c) })
        });
    }
    t.finish()
}

fn line_well_defined(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.samples {
        let g = random_motion(&mut ctx.rng, d, 1.0);
        let p = random_unit(&mut ctx.rng, d);
        let m = random_vector(&mut ctx.rng, d, 1.0);
        let slide = ctx.rng.random_range(-3.0..3.0);
        let a = OrientedLine::through(&p, &m);
        let b = OrientedLine::through(&p, &(&m + &p * slide));
        let moved = OrientedLine::through(&(&g.b * &p), &(&g.z + &g.b * &m));
        let residual = line_rel(&a, &b).max(line_rel(&line_action(&g, &a), &moved));
        t.record(residual, || json!({ "g": motion_json(&g), "p": vec_json(&p), "m": vec_json(&m), "slide": slide }));
    }
    t.finish()
}

fn boost_derivative(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.samples {
        let p = random_unit(&mut ctx.rng, d);
        let vdot = random_tangent(&mut ctx.rng, &p, 1.0);
        let sdot = ctx.rng.random_range(-1.0..1.0);
        let (a, y) = f_p(&p, &vdot, sdot);
        let (an, yn) = f_p_numeric(&p, &vdot, sdot, LIFT_STEP);
        let residual = (a - an).abs().max((y - yn).amax());
        t.record(residual, || json!({ "p": vec_json(&p), "vdot": vec_json(&vdot), "sdot": sdot }));
    }
    t.finish()
}

fn adjoint(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let d = ctx.n + 1;
    for _ in 0..ctx.samples {
        let p = random_unit(&mut ctx.rng, d);
        let z = random_vector(&mut ctx.rng, d, 1.0);
        let residual = covector_rel(&f_p_star(&p, &z), &f_p_star_transpose(&p, &z));
        t.record(residual, || json!({ "p": vec_json(&p), "z": vec_json(&z) }));
    }
    t.finish()
}

fn rotation_conjugation(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.samples {
        let b = random_rotation_b(&mut ctx.rng, n);
        let z = random_vector(&mut ctx.rng, n + 1, 1.0);
        let eb = embed_b(&b);
        let conjugated = eb.matrix() * boost_dual(&z) * eb.inverse().matrix();
        let expected = boost_dual(&(b.matrix() * &z));
        t.record((conjugated - &expected).amax() / expected.amax().max(1.0), || json!({ "b": mat_json(b.matrix()), "z": vec_json(&z) }));
    }
    t.finish()
}

/// Sample-level morphism identities, each a membership test:
/// units go to `B × units`, inverses to inverses, composable members
/// multiply to a member, and the two iterated comultiplications share the
/// constructed point.
fn comultiplication_morphism(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    let n = ctx.n;
    for _ in 0..ctx.samples {
        let z1 = random_z(&mut ctx.rng, n, 1.0);
        let z2 = random_composable(&mut ctx.rng, &z1, 1.0);
        let b1 = random_rotation_b(&mut ctx.rng, n);
        let b_prime = random_rotation_b(&mut ctx.rng, n);
        let unit_p = random_unit(&mut ctx.rng, n + 1);
        let ok = (|| -> Result<bool, crate::error::GeometryError> {
            let unit = ZPoint::unit(unit_p.clone());
            let (gu, wu) = delta_z_member(&b1, &unit);
            let unit_law = gu.distance(&embed_b(&b1)) <= tol.matching && wu.v.amax() <= tol.matching && (wu.s - 1.0).abs() <= tol.matching;

            let (g1, w1) = delta_z_member(&b1, &z1);
            let inverse_law = delta_z_membership(&gb_inverse(&g1, &tol)?, &z_inverse(&z1), &z_inverse(&w1), &tol);

            let b2 = gb_source(&g1, &tol)?;
            let (g2, w2) = delta_z_member(&b2, &z2);
            let g = gb_multiply(&g1, &g2, &tol)?;
            let z = z_multiply(&z1, &z2, &tol)?;
            let w = z_multiply(&w1, &w2, &tol)?;
            let product_law = delta_z_mismatch(&g, &z, &w) <= tol.matching * w.v.amax().max(1.0);

            let target = w1.clone();
            let za = target.rotate(&b1.inverse());
            let zb = za.rotate(&b_prime.inverse());
            let (ga, _) = delta_z_member(&b1, &za);
            let (gb, _) = delta_z_member(&b_prime, &zb);
            let (h, again) = delta_z_member(&b1.mul(&b_prime), &zb);
            let coassociative = again.distance(&target) <= tol.matching && delta_b_mismatch(&h, &ga, &gb, &tol)? <= tol.matching;
            Ok(unit_law && inverse_law && product_law && coassociative)
        })();
        let witness = || json!({ "z1": serde_json::to_value(&z1).unwrap_or(Value::Null), "b": mat_json(b1.matrix()) });
        match ok {
            Ok(v) => t.tally(v, witness),
            Err(e) => {
                let message = e.to_string();
                t.tally(false, || json!({ "error": message, "input": witness() }))
            }
        }
    }
    t.finish_count()
}
