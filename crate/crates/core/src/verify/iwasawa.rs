//! Factorization of Lorentz matrices and the groupoid over the rotations.

use serde_json::json;

use super::{mat_json, CheckDef, Ctx, Outcome, Suite, Threshold, Tracker};
use crate::error::GeometryError;
use crate::linalg::random_rotation;
use crate::lorentz::{
    b0_commutation_residual, b0_right_action, b0_right_action_factors, delta_b_fiber, delta_b_mismatch, embed_b,
    embed_c, factorize, gb_inverse, gb_inverse_left_route, gb_multiply, gb_multiply_routes, gb_source, gb_target,
    iwasawa_bc, iwasawa_cb, random_boost, random_lorentz, random_rotation_b, LorentzElement, RotationB,
};

pub(super) fn checks() -> Vec<CheckDef> {
    let named = |name, anchor, tol, run| CheckDef { name, suite: Suite::Iwasawa, anchor, threshold: Threshold::Named(tol), run };
    vec![
        named("iwasawa-factorization-reconstruction", "both factorization orders reconstruct g", "factorization", reconstruction),
        named("iwasawa-factor-round-trip", "factoring a product of known factors recovers them", "recon", round_trip),
        named("iwasawa-factor-invariants", "rotation factors satisfy the block orthogonality relations", "orth", factor_invariants),
        named("iwasawa-gb-unit-laws", "units of the rotation groupoid act trivially", "gb-axioms", unit_laws),
        named("iwasawa-gb-inverse-laws", "inverse is an involution swapping source and target", "gb-axioms", inverse_laws),
        named("iwasawa-gb-associativity", "groupoid product is associative and both routes agree", "gb-axioms", associativity),
        named("iwasawa-b0-right-action", "the block rotation action in coordinates matches the matrix product", "recon", b0_action),
        named("iwasawa-b0-commutation", "block rotations commute through boosts by rotating the translation", "recon", b0_commutation),
        named("iwasawa-normalizer-translations", "translations by block rotations are groupoid automorphisms", "gb-axioms", normalizer_translations),
        named("iwasawa-delta-fiber", "fiber points of the comultiplication recombine to g", "matching", delta_fiber),
        named("iwasawa-delta-coassociativity", "iterated fiber points lie on both sides of coassociativity", "matching", delta_coassociativity),
    ]
}

/// `‖a − b‖_F / max(1, ‖b‖_F)`.
fn rel(a: &LorentzElement, b: &LorentzElement) -> f64 {
    a.distance(b) / b.matrix().norm().max(1.0)
}

fn worst(t: &mut Tracker, g: &LorentzElement, r: Result<f64, GeometryError>) {
    t.outcome(r, || json!({ "g": mat_json(g.matrix()) }));
}

fn reconstruction(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let r = factorize(&g, &tol).map(|f| {
            let cb = embed_c(&f.c_left).mul(&embed_b(&f.b_right));
            let bc = embed_b(&f.b_left).mul(&embed_c(&f.c_right));
            rel(&cb, &g).max(rel(&bc, &g))
        });
        worst(&mut t, &g, r);
    }
    t.finish()
}

fn round_trip(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let b = random_rotation_b(&mut ctx.rng, ctx.n);
        let c = random_boost(&mut ctx.rng, ctx.n, 1.0);
        let cb = embed_c(&c).mul(&embed_b(&b));
        let bc = embed_b(&b).mul(&embed_c(&c));
        let r = iwasawa_cb(&cb, &tol).and_then(|(c1, b1)| {
            let (b2, c2) = iwasawa_bc(&bc, &tol)?;
            let scale = c.y.amax().max(c.s).max(1.0);
            Ok((c1.distance(&c) / scale).max(b1.distance(&b)).max(c2.distance(&c) / scale).max(b2.distance(&b)))
        });
        worst(&mut t, &cb, r);
    }
    t.finish()
}

fn factor_invariants(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let r = factorize(&g, &tol).map(|f| {
            let scale = g.matrix().norm().max(1.0);
            f.b_left
                .invariant_residual()
                .max(f.b_right.invariant_residual())
                .max(g.lorentz_residual() / (scale * scale))
        });
        worst(&mut t, &g, r);
    }
    t.finish()
}

fn unit_laws(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let b = random_rotation_b(&mut ctx.rng, ctx.n);
        let r = (|| {
            let right = embed_b(&gb_source(&g, &tol)?);
            let left = embed_b(&gb_target(&g, &tol)?);
            let eb = embed_b(&b);
            let unit_target = gb_target(&eb, &tol)?.distance(&b).max(gb_source(&eb, &tol)?.distance(&b));
            Ok(rel(&gb_multiply(&g, &right, &tol)?, &g).max(rel(&gb_multiply(&left, &g, &tol)?, &g)).max(unit_target))
        })();
        worst(&mut t, &g, r);
    }
    t.finish()
}

fn inverse_laws(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let r = (|| {
            let gi = gb_inverse(&g, &tol)?;
            let routes = rel(&gi, &gb_inverse_left_route(&g, &tol)?);
            let involution = rel(&gb_inverse(&gi, &tol)?, &g);
            let swap = gb_source(&gi, &tol)?.distance(&gb_target(&g, &tol)?).max(gb_target(&gi, &tol)?.distance(&gb_source(&g, &tol)?));
            // the products land on a unit, so compare against the operand sizes
            let operands = (gi.matrix().norm() * g.matrix().norm()).max(1.0);
            let left = gb_multiply(&gi, &g, &tol)?.distance(&embed_b(&gb_source(&g, &tol)?)) / operands;
            let right = gb_multiply(&g, &gi, &tol)?.distance(&embed_b(&gb_target(&g, &tol)?)) / operands;
            Ok(routes.max(involution).max(swap).max(left).max(right))
        })();
        worst(&mut t, &g, r);
    }
    t.finish()
}

/// `g₂` with `b_L(g₂) = b_R(g₁)`, built by construction.
fn composable_after(ctx: &mut Ctx, g1: &LorentzElement) -> Result<LorentzElement, GeometryError> {
    let tol = ctx.geometry();
    let b = gb_source(g1, &tol)?;
    Ok(embed_b(&b).mul(&embed_c(&random_boost(&mut ctx.rng, ctx.n, 1.0))))
}

fn associativity(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g1 = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let r = (|| {
            let g2 = composable_after(ctx, &g1)?;
            let g3 = composable_after(ctx, &g2)?;
            let a = gb_multiply(&gb_multiply(&g1, &g2, &tol)?, &g3, &tol)?;
            let b = gb_multiply(&g1, &gb_multiply(&g2, &g3, &tol)?, &tol)?;
            let (r1, r2) = gb_multiply_routes(&g1, &g2, &tol)?;
            Ok(rel(&a, &b).max(rel(&r1, &r2)))
        })();
        worst(&mut t, &g1, r);
    }
    t.finish()
}

fn b0_action(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let l1 = random_rotation(&mut ctx.rng, ctx.n);
        let r = b0_right_action_factors(&g, &l1, &tol).map(|(b, c)| {
            let formula = embed_b(&b).mul(&embed_c(&c));
            rel(&formula, &b0_right_action(&g, &l1))
        });
        worst(&mut t, &g, r);
    }
    t.finish()
}

fn b0_commutation(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let l1 = random_rotation(&mut ctx.rng, ctx.n);
        let c = random_boost(&mut ctx.rng, ctx.n, 1.0);
        let scale = embed_c(&c).matrix().norm();
        t.record(b0_commutation_residual(&l1, &c) / scale, || json!({ "lambda1": mat_json(&l1), "s": c.s }));
    }
    t.finish()
}

/// Left and right translations by `a₀ ∈ B₀` commute with the inverse,
/// preserve products, and the comultiplication is right equivariant.
fn normalizer_translations(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g1 = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let a0 = embed_b(&RotationB::from_b0(&random_rotation(&mut ctx.rng, ctx.n)));
        let b2 = random_rotation_b(&mut ctx.rng, ctx.n);
        let r = (|| {
            let g2 = composable_after(ctx, &g1)?;
            let inv_left = rel(&gb_inverse(&a0.mul(&g1), &tol)?, &a0.mul(&gb_inverse(&g1, &tol)?));
            let inv_right = rel(&gb_inverse(&g1.mul(&a0), &tol)?, &gb_inverse(&g1, &tol)?.mul(&a0));
            let product = gb_multiply(&g1, &g2, &tol)?;
            let left = rel(&gb_multiply(&a0.mul(&g1), &a0.mul(&g2), &tol)?, &a0.mul(&product));
            let right = rel(&gb_multiply(&g1.mul(&a0), &g2.mul(&a0), &tol)?, &product.mul(&a0));
            let (f1, f2) = delta_b_fiber(&g1, &b2, &tol)?;
            let equivariant = delta_b_mismatch(&g1.mul(&a0), &f1, &f2.mul(&a0), &tol)?;
            Ok(inv_left.max(inv_right).max(left).max(right).max(equivariant / g1.matrix().norm()))
        })();
        worst(&mut t, &g1, r);
    }
    t.finish()
}

fn delta_fiber(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for i in 0..ctx.samples {
        // every tenth sample splits a rotation at the identity
        let (g, b2) = if i % 10 == 0 {
            (embed_b(&random_rotation_b(&mut ctx.rng, ctx.n)), RotationB::identity(ctx.n))
        } else {
            (random_lorentz(&mut ctx.rng, ctx.n, 1.0), random_rotation_b(&mut ctx.rng, ctx.n))
        };
        let r = (|| {
            let (g1, g2) = delta_b_fiber(&g, &b2, &tol)?;
            let mut m = delta_b_mismatch(&g, &g1, &g2, &tol)? / g.matrix().norm();
            if i % 10 == 0 {
                // a rotation splits into a pair of rotations
                let (c1, _) = iwasawa_cb(&g1, &tol)?;
                let (c2, _) = iwasawa_cb(&g2, &tol)?;
                m = m.max(c1.distance(&crate::lorentz::BoostC::identity(ctx.n)));
                m = m.max(c2.distance(&crate::lorentz::BoostC::identity(ctx.n)));
            }
            Ok(m)
        })();
        worst(&mut t, &g, r);
    }
    t.finish()
}

/// Split `g` into `(g₁, g₂)` and then `g₂` into `(g₂₁, g₂₂)`; with
/// `h = b_L(g₁) g₂₁` the point `((g₁, g₂₁), g₂₂)` must lie in both iterates.
fn delta_coassociativity(ctx: &mut Ctx) -> Outcome {
    let tol = ctx.geometry();
    let mut t = Tracker::new();
    for _ in 0..ctx.samples {
        let g = random_lorentz(&mut ctx.rng, ctx.n, 1.0);
        let b2 = random_rotation_b(&mut ctx.rng, ctx.n);
        let b3 = random_rotation_b(&mut ctx.rng, ctx.n);
        let r = (|| {
            let (g1, g2) = delta_b_fiber(&g, &b2, &tol)?;
            let (g21, g22) = delta_b_fiber(&g2, &b3, &tol)?;
            let right_side = delta_b_mismatch(&g2, &g21, &g22, &tol)?;
            let h = embed_b(&gb_target(&g1, &tol)?).mul(&g21);
            let left_outer = delta_b_mismatch(&g, &h, &g22, &tol)?;
            let left_inner = delta_b_mismatch(&h, &g1, &g21, &tol)?;
            Ok(right_side.max(left_outer).max(left_inner) / g.matrix().norm())
        })();
        worst(&mut t, &g, r);
    }
    t.finish()
}
