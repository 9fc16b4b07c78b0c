//! The line groupoid `TSⁿ × ℝ₊`: lift-route operations against closed forms
//! and chart formulas.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{mat_json, vec_json, CheckDef, Ctx, Outcome, Suite, Threshold, Tracker};
use crate::error::GeometryError;
use crate::linalg::{random_rotation, random_unit, random_vector, unit, FrameCompletion, Vector};
use crate::line::{
    c_tilde_l, c_tilde_l_lift_route, delta_z_member, delta_z_membership, f0_element, f0_multiply, f0_to_boost,
    isotropy_element, lift_z, lift_z_with_frame, project_z, project_z_routes, random_composable, random_frame,
    random_z, slice, z_inverse, z_inverse_lift_route, z_multiply, z_multiply_with_frames, z_source, z_target,
    StereoPoint, UChartPoint, ZPoint, CHART_EPSILON,
};
use crate::lorentz::{b0_right_action, embed_b, random_lorentz, random_rotation_b, RotationB};

pub(super) fn checks() -> Vec<CheckDef> {
    let named = |name, anchor, tol, run| CheckDef { name, suite: Suite::Groupoid, anchor, threshold: Threshold::Named(tol), run };
    let exact = |name, anchor, run| CheckDef { name, suite: Suite::Groupoid, anchor, threshold: Threshold::Exact, run };
    vec![
        named("groupoid-projection-routes", "both projection routes agree and are invariant under the block rotations", "recon", projection_routes),
        named("groupoid-lift-round-trip", "projecting a lift through any frame returns the point", "recon", lift_round_trip),
        named("groupoid-inverse-routes", "closed-form inverse matches the lift route and is an involution", "recon", inverse_routes),
        named("groupoid-inverse-over-p0", "over the distinguished point the inverse is (p0, -v/s, 1/s)", "z-axioms", inverse_over_p0),
        named("groupoid-associativity", "product is associative on composable triples", "z-axioms", associativity),
        named("groupoid-unit-laws", "units act trivially and products keep the outer units", "z-axioms", unit_laws),
        named("groupoid-inverse-laws", "an element times its inverse is its target unit", "z-axioms", inverse_laws),
        named("groupoid-lift-independence", "product does not depend on the frames used for the lifts", "z-axioms", lift_independence),
        named("groupoid-three-route-product", "lift, stereographic and hemisphere products agree on chart overlaps", "z-axioms", three_routes),
        named("groupoid-isotropy-group-law", "isotropy over p0 multiplies as the boost group", "z-axioms", f0_law),
        named("groupoid-isotropy-lines", "stereographic isotropy family fixes its point and multiplies in s", "z-axioms", isotropy),
        named("groupoid-hemisphere-source-identities", "source base point identities in the hemisphere chart", "z-axioms", hemisphere_identities),
        exact("groupoid-hemisphere-domain-predicate", "squared and unsquared source domain predicates agree", domain_predicate),
        named("groupoid-source-formulas", "chart source formulas match the global source", "z-axioms", source_formulas),
        exact("groupoid-orbit-structure", "the fiber over p0 is closed under source and target", orbit_structure),
        named("groupoid-boost-part-routes", "closed-form left boost matches factoring any lift", "recon", boost_part_routes),
        named("groupoid-slice-pair-groupoid", "the unit-scale slice is the pair groupoid in stereographic coordinates", "z-axioms", slice_pair),
        exact("groupoid-delta-membership", "constructed members are accepted and perturbed ones rejected", delta_membership),
    ]
}

fn zj(z: &ZPoint) -> Value {
    serde_json::to_value(z).unwrap_or(Value::Null)
}

/// Distance relative to the size of `b`.
fn zrel(a: &ZPoint, b: &ZPoint) -> f64 {
    a.distance(b) / b.v.amax().max(b.s).max(1.0)
}

fn hemisphere_alpha(u: &Vector) -> f64 {
    (1.0 - u.norm_squared()).max(0.0).sqrt()
}

/// Hemisphere point with `α > 0.3`, source `α̃ > 0.3`, and `|u|, |ũ| ≥ min_u`.
pub(super) fn random_u_point(rng: &mut ChaCha8Rng, n: usize, min_u: f64) -> UChartPoint {
    loop {
        let u = random_vector(rng, n, 0.4);
        let udot = random_vector(rng, n, 0.4);
        let s = rng.random_range(-0.5..0.5f64).exp();
        let Ok(q) = UChartPoint::new(u, udot, s) else { continue };
        if q.alpha() <= 0.3 || q.u.norm() < min_u {
            continue;
        }
        if q.source_u().is_ok_and(|t| hemisphere_alpha(&t) > 0.3 && t.norm() >= min_u) {
            return q;
        }
    }
}

fn projection_routes(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let l1 = random_rotation(&mut ctx.rng, ctx.n);
        let b = random_rotation_b(&mut ctx.rng, ctx.n);
        let r = (|| -> Result<f64, GeometryError> {
            let (a, c) = project_z_routes(&g, &tol)?;
            let invariance = zrel(&project_z(&b0_right_action(&g, &l1), &tol)?, &a);
            let rotation = project_z(&embed_b(&b), &tol)?.distance(&ZPoint::unit(b.last_column()));
            Ok(zrel(&a, &c).max(invariance).max(rotation))
        })();
        t.outcome(r, || json!({ "g": mat_json(g.matrix()) }));
    }
    t.finish()
}

fn lift_round_trip(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z = random_z(&mut ctx.rng, ctx.n, 1.0);
        let frame = random_frame(&mut ctx.rng, &z.p);
        let r = (|| -> Result<f64, GeometryError> {
            let a = zrel(&project_z(&lift_z(&z), &tol)?, &z);
            let b = zrel(&project_z(&lift_z_with_frame(&z, &frame), &tol)?, &z);
            let householder = RotationB::from_matrix_unchecked(crate::line::frame_matrix(&z, FrameCompletion::Householder));
            let block = crate::line::frame_change(&householder, &frame).b0_deviation();
            Ok(a.max(b).max(block))
        })();
        t.outcome(r, || zj(&z));
    }
    t.finish()
}

fn inverse_routes(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z = random_z(&mut ctx.rng, ctx.n, 1.0);
        let r = z_inverse_lift_route(&z, &tol).map(|lifted| {
            let zi = z_inverse(&z);
            zrel(&zi, &lifted).max(zrel(&z_inverse(&zi), &z))
        });
        t.outcome(r, || zj(&z));
    }
    t.finish()
}

fn inverse_over_p0(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let mu = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let s = ctx.rng.random_range(-1.0..1.0f64).exp();
        let z = f0_element(&mu, s);
        let expected = ZPoint { p: z.p.clone(), v: -&z.v / s, s: 1.0 / s };
        t.record(zrel(&z_inverse(&z), &expected), || zj(&z));
    }
    t.finish()
}

fn associativity(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z1 = random_z(&mut ctx.rng, ctx.n, 1.0);
        let z2 = random_composable(&mut ctx.rng, &z1, 1.0);
        let z3 = random_composable(&mut ctx.rng, &z2, 1.0);
        let r = (|| -> Result<f64, GeometryError> {
            let left = z_multiply(&z_multiply(&z1, &z2, &tol)?, &z3, &tol)?;
            let right = z_multiply(&z1, &z_multiply(&z2, &z3, &tol)?, &tol)?;
            Ok(zrel(&left, &right))
        })();
        t.outcome(r, || json!({ "z1": zj(&z1), "z2": zj(&z2), "z3": zj(&z3) }));
    }
    t.finish()
}

fn unit_laws(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z1 = random_z(&mut ctx.rng, ctx.n, 1.0);
        let z2 = random_composable(&mut ctx.rng, &z1, 1.0);
        let r = (|| -> Result<f64, GeometryError> {
            let left = zrel(&z_multiply(&z_target(&z1), &z1, &tol)?, &z1);
            let right = zrel(&z_multiply(&z1, &z_source(&z1), &tol)?, &z1);
            let product = z_multiply(&z1, &z2, &tol)?;
            let ends = z_target(&product).distance(&z_target(&z1)).max(z_source(&product).distance(&z_source(&z2)));
            let scale = (product.s - z1.s * z2.s).abs() / (z1.s * z2.s);
            Ok(left.max(right).max(ends).max(scale))
        })();
        t.outcome(r, || json!({ "z1": zj(&z1), "z2": zj(&z2) }));
    }
    t.finish()
}

fn inverse_laws(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z = random_z(&mut ctx.rng, ctx.n, 1.0);
        let r = (|| -> Result<f64, GeometryError> {
            let zi = z_inverse(&z);
            let a = z_multiply(&z, &zi, &tol)?.distance(&z_target(&z));
            let b = z_multiply(&zi, &z, &tol)?.distance(&z_source(&z));
            Ok(a.max(b))
        })();
        t.outcome(r, || zj(&z));
    }
    t.finish()
}

fn lift_independence(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z1 = random_z(&mut ctx.rng, ctx.n, 1.0);
        let z2 = random_composable(&mut ctx.rng, &z1, 1.0);
        let f1 = random_frame(&mut ctx.rng, &z1.p);
        let f2 = random_frame(&mut ctx.rng, &z2.p);
        let r = (|| -> Result<f64, GeometryError> {
            let a = z_multiply(&z1, &z2, &tol)?;
            let b = z_multiply_with_frames(&z1, &z2, &f1, &f2, &tol)?;
            Ok(zrel(&b, &a))
        })();
        t.outcome(r, || json!({ "z1": zj(&z1), "z2": zj(&z2) }));
    }
    t.finish()
}

fn three_routes(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let q1 = random_u_point(&mut ctx.rng, ctx.n, 0.2);
        let udot2 = random_vector(&mut ctx.rng, ctx.n, 0.4);
        let s2 = ctx.rng.random_range(-0.5..0.5f64).exp();
        let r = (|| -> Result<f64, GeometryError> {
            let q2 = UChartPoint::new(q1.source_u()?, udot2.clone(), s2)?;
            let (z1, z2) = (q1.to_z(), q2.to_z());
            let lifted = z_multiply(&z1, &z2, &tol)?;
            let stereo = StereoPoint::from_z(&z1, CHART_EPSILON)?
                .multiply(&StereoPoint::from_z(&z2, CHART_EPSILON)?, tol.matching)?
                .to_z();
            let hemisphere = q1.multiply(&q2.udot, q2.s)?.to_z();
            Ok(zrel(&stereo, &lifted).max(zrel(&hemisphere, &lifted)).max(zrel(&hemisphere, &stereo)))
        })();
        t.outcome(r, || json!({ "u": vec_json(&q1.u), "udot": vec_json(&q1.udot), "s": q1.s, "udot2": vec_json(&udot2), "s2": s2 }));
    }
    t.finish()
}

fn f0_law(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let a = f0_element(&random_vector(&mut ctx.rng, ctx.n, 1.0), ctx.rng.random_range(-1.0..1.0f64).exp());
        let b = f0_element(&random_vector(&mut ctx.rng, ctx.n, 1.0), ctx.rng.random_range(-1.0..1.0f64).exp());
        let r = z_multiply(&a, &b, &tol).map(|lifted| {
            let closed = f0_multiply(&a, &b);
            let boost = f0_to_boost(&closed).distance(&f0_to_boost(&a).compose(&f0_to_boost(&b)));
            zrel(&lifted, &closed).max(boost)
        });
        t.outcome(r, || json!({ "z1": zj(&a), "z2": zj(&b) }));
    }
    t.finish()
}

fn isotropy(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let x0 = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let s1 = ctx.rng.random_range(-1.0..1.0f64).exp();
        let s2 = ctx.rng.random_range(-1.0..1.0f64).exp();
        let r = (|| -> Result<f64, GeometryError> {
            let a = isotropy_element(&x0, s1);
            let b = isotropy_element(&x0, s2);
            let base = ZPoint::unit(a.p.clone());
            let fixed = z_source(&a).distance(&base).max(z_target(&a).distance(&base));
            let unit = isotropy_element(&x0, 1.0).distance(&base);
            let product = zrel(&z_multiply(&a, &b, &tol)?, &isotropy_element(&x0, s1 * s2));
            let inverse = zrel(&z_inverse(&a), &isotropy_element(&x0, 1.0 / s1));
            Ok(fixed.max(unit).max(product).max(inverse))
        })();
        t.outcome(r, || json!({ "x0": vec_json(&x0), "s1": s1, "s2": s2 }));
    }
    t.finish()
}

fn hemisphere_identities(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let q = random_u_point(&mut ctx.rng, ctx.n, 0.0);
        let r = q.source_u().map(|ut| {
            let a = q.alpha();
            let big_a = q.a_value();
            let at = hemisphere_alpha(&ut);
            let first = ((1.0 - at) - 2.0 * (1.0 - a) / (big_a + 2.0 * (1.0 - a))).abs();
            let second = if q.u.norm() > 1e-3 { (&ut / (1.0 - at) - q.k() / (1.0 - a)).amax() * (1.0 - a) } else { 0.0 };
            first.max(second)
        });
        t.outcome(r, || json!({ "u": vec_json(&q.u), "udot": vec_json(&q.udot), "s": q.s }));
    }
    t.finish()
}

/// Counts disagreements between `A > 0`, `|k| > 1 − α` and the global
/// source lying in the open upper hemisphere, skipping samples within
/// rounding distance of the boundary.
fn domain_predicate(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    let mut taken = 0;
    while taken < ctx.samples {
        let u = random_vector(&mut ctx.rng, ctx.n, 0.6);
        let udot = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let s = ctx.rng.random_range(-1.0..1.0f64).exp();
        let Ok(q) = UChartPoint::new(u, udot, s) else { continue };
        let global = z_source(&q.to_z()).alpha();
        if q.u.norm() < 1e-6 || q.a_value().abs() < 1e-9 || global.abs() < 1e-9 {
            continue;
        }
        taken += 1;
        let squared = q.source_in_chart();
        let ok = squared == q.unsquared_predicate() && squared == (global > 0.0);
        t.tally(ok, || json!({ "u": vec_json(&q.u), "udot": vec_json(&q.udot), "s": q.s, "A": q.a_value() }));
    }
    t.finish_count()
}

fn source_formulas(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for i in 0..ctx.samples {
        let r = if i % 2 == 0 {
            let z = random_z(&mut ctx.rng, ctx.n, 1.0);
            StereoPoint::from_z(&z, CHART_EPSILON).and_then(|q| {
                let global = StereoPoint::from_z(&z_source(&z), CHART_EPSILON)?;
                Ok((q.source_x() - &global.x).amax() / global.x.amax().max(1.0))
            })
        } else {
            let q = random_u_point(&mut ctx.rng, ctx.n, 0.0);
            q.source_u().map(|ut| (z_source(&q.to_z()).u() - ut).amax())
        };
        t.outcome(r, || json!({ "sample": i }));
    }
    t.finish()
}

fn orbit_structure(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for i in 0..ctx.samples {
        let z = if i % 2 == 0 {
            f0_element(&random_vector(&mut ctx.rng, ctx.n, 1.0), ctx.rng.random_range(-1.0..1.0f64).exp())
        } else {
            random_z(&mut ctx.rng, ctx.n, 1.0)
        };
        let over = z.alpha() == 1.0;
        let source = z_source(&z);
        let ok = if over { 1.0 - source.alpha() <= 1e-12 && z_target(&z).alpha() == 1.0 } else { source.alpha() < 1.0 };
        t.tally(ok, || zj(&z));
    }
    t.finish_count()
}

fn boost_part_routes(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let z = random_z(&mut ctx.rng, ctx.n, 1.0);
        let frame = random_frame(&mut ctx.rng, &z.p);
        let householder = RotationB::from_matrix_unchecked(crate::line::frame_matrix(&z, FrameCompletion::Householder));
        let r = (|| -> Result<f64, GeometryError> {
            let closed = c_tilde_l(&z);
            let scale = closed.s.max(closed.y.amax()).max(1.0);
            let a = closed.distance(&c_tilde_l_lift_route(&z, &householder, &tol)?);
            let b = closed.distance(&c_tilde_l_lift_route(&z, &frame, &tol)?);
            let unit = c_tilde_l(&z_target(&z)).distance(&crate::lorentz::BoostC::identity(ctx.n));
            Ok((a.max(b) / scale).max(unit))
        })();
        t.outcome(r, || zj(&z));
    }
    t.finish()
}

fn slice_pair(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let x = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let y = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let w = random_vector(&mut ctx.rng, ctx.n, 1.0);
        let r = (|| -> Result<f64, GeometryError> {
            let xy = slice::from_pair(&x, &y);
            let yw = slice::from_pair(&y, &w);
            let product = zrel(&slice::multiply(&xy, &yw, &tol)?, &slice::from_pair(&x, &w));
            let inverse = zrel(&slice::inverse(&xy, &tol)?, &slice::from_pair(&y, &x));
            let (px, py) = slice::pair_coordinates(&xy, &tol)?;
            let coords = (px - &x).amax().max((py - &y).amax()) / x.amax().max(y.amax()).max(1.0);
            let q = StereoPoint::from_z(&xy, CHART_EPSILON)?;
            let (xt, xdt) = slice::inverse_stereo(&q.x, &q.xdot);
            let qi = q.inverse();
            let stereo = (xt - &qi.x).amax().max((xdt - &qi.xdot).amax()) / qi.xdot.amax().max(1.0);
            Ok(product.max(inverse).max(coords).max(stereo))
        })();
        t.outcome(r, || json!({ "x": vec_json(&x), "y": vec_json(&y), "w": vec_json(&w) }));
    }
    t.finish()
}

fn delta_membership(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for i in 0..ctx.samples {
        let z = if i % 10 == 0 { ZPoint::unit(random_unit(&mut ctx.rng, ctx.n + 1)) } else { random_z(&mut ctx.rng, ctx.n, 1.0) };
        let b = random_rotation_b(&mut ctx.rng, ctx.n);
        let (g, w) = delta_z_member(&b, &z);
        let mut bad = w.clone();
        bad.s *= 1.01;
        let mut moved = w.clone();
        moved.v += &(unit(ctx.n + 1, 0) * 1e-3);
        let accepted = delta_z_membership(&g, &z, &w, &tol);
        let rejected = !delta_z_membership(&g, &z, &bad, &tol) && !delta_z_membership(&g, &z, &moved, &tol);
        t.tally(accepted && rejected, || json!({ "z": zj(&z), "b": mat_json(b.matrix()) }));
    }
    t.finish_count()
}
