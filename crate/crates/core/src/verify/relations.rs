//! Exact checks on finite relations, finite groupoids and their quotients.

use std::collections::BTreeSet;

use rand::Rng;
use serde_json::json;

use super::{CheckDef, Ctx, Outcome, Suite, Threshold, Tracker};
use crate::relation::generators::{
    block_rotation, close_for_compatibility, equivariant_closure, kernel_relation, orbit_relation, pair_with_free_action,
    random_associated_bundle, random_partition, random_relation,
};
use crate::relation::{
    check_unit_fixing_condition, generate_tis_groupoid, is_monomorphism, is_relational_morphism, perm_from_cycles,
    quotient_by_automorphisms, AutomorphismAction, FiniteGroup, FiniteGroupoid, FiniteRelation, Id, RelationError,
    TisInstance,
};

pub(super) fn checks() -> Vec<CheckDef> {
    let exact = |name, anchor, run| CheckDef { name, suite: Suite::Relations, anchor, threshold: Threshold::Exact, run };
    vec![
        exact("relations-transpose-laws", "transpose is an involution and reverses composition", transpose_laws),
        exact("relations-equivalence-tests-agree", "relational and elementwise equivalence tests agree", equivalence_tests),
        exact("relations-projection-identities", "a projection composed with its transpose is the identity on classes", projection_identities),
        exact("relations-compatible-relation-descends", "compatible relations descend to the class projection", compatible_descends),
        exact("relations-equivariant-relation-commutes", "equivariant relations commute with orbit relations", equivariant_commutes),
        exact("relations-unit-fixing-variants-agree", "the four fixed-unit conditions agree", unit_fixing_variants),
        exact("relations-quotient-of-free-actions", "quotient by a unit-fixing action is a groupoid with a monic lift", quotient_free_actions),
        exact("relations-trivial-action-quotient-is-copy", "quotient by the trivial action reproduces the groupoid", trivial_quotient),
        exact("relations-s3-conjugation-quotient-rejected", "conjugation on S3 gives a multivalued orbit product", s3_conjugation_rejected),
        exact("relations-identity-is-monomorphism", "the identity relation is a monic groupoid morphism", identity_morphism),
        exact("relations-double-group-delta-units-inverse", "comultiplication sends units to unit pairs and commutes with inverses", delta_units_inverse),
        exact("relations-double-group-delta-multiplicative", "comultiplication is multiplicative with equality for double groups", delta_multiplicative),
        exact("relations-non-double-group-delta-inclusion-strict", "multiplicativity is a strict inclusion off double groups", delta_strict_inclusion),
        exact("relations-delta-coassociative", "comultiplication is coassociative", delta_coassociative),
        exact("relations-normalizer-translations", "translations by the normalizing part are automorphisms commuting with the comultiplication", normalizer_translations),
        exact("relations-z-delta-graph", "the quotient coaction graph equals the composed relation", z_delta_graph),
        exact("relations-z-delta-coassociative", "the quotient coaction is coassociative", z_delta_coassociative),
        exact("relations-z-delta-morphism-identities", "the quotient coaction respects units, inverses and products", z_delta_morphism),
    ]
}

fn set(k: usize) -> BTreeSet<Id> {
    (0..k as Id).collect()
}

fn rel_json(r: &FiniteRelation<Id, Id>) -> serde_json::Value {
    json!({ "source": r.source(), "target": r.target(), "graph": r.graph() })
}

fn transpose_laws(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(200) {
        let (kx, ky, kz) = (ctx.rng.random_range(1..=5), ctx.rng.random_range(1..=5), ctx.rng.random_range(1..=5));
        let density = ctx.rng.random_range(0.1..0.9);
        let r = random_relation(&mut ctx.rng, &set(kx), &set(ky), density);
        let q = random_relation(&mut ctx.rng, &set(ky), &set(kz), density);
        let involution = r.transpose().transpose() == r;
        let composed = r.then(&q).expect("matching sets").transpose();
        let reversed = q.transpose().then(&r.transpose()).expect("matching sets");
        t.tally(involution && composed == reversed, || json!({ "r": rel_json(&r), "q": rel_json(&q) }));
    }
    t.finish_count()
}

fn all_relations(k: usize) -> impl Iterator<Item = FiniteRelation<Id, Id>> {
    let pairs: Vec<(Id, Id)> = (0..k as Id).flat_map(|y| (0..k as Id).map(move |x| (y, x))).collect();
    (0u32..1 << pairs.len()).map(move |mask| {
        let graph = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, p)| *p);
        FiniteRelation::new(set(k), set(k), graph).expect("pairs drawn from the set")
    })
}

fn equivalence_tests(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for k in 1..=3 {
        for r in all_relations(k) {
            t.tally(r.is_equivalence() == r.is_equivalence_elementwise(), || rel_json(&r));
        }
    }
    for _ in 0..ctx.capped(200) {
        let k = ctx.rng.random_range(4..=6);
        // half of the samples are equivalences by construction
        let r = if ctx.rng.random_bool(0.5) {
            kernel_relation(&random_partition(&mut ctx.rng, &set(k)))
        } else {
            let density = ctx.rng.random_range(0.3..1.0);
            random_relation(&mut ctx.rng, &set(k), &set(k), density)
        };
        t.tally(r.is_equivalence() == r.is_equivalence_elementwise(), || rel_json(&r));
    }
    t.finish_count()
}

fn projection_identities(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(200) {
        let k = ctx.rng.random_range(1..=7);
        let pi = random_partition(&mut ctx.rng, &set(k));
        let pit = pi.transpose();
        let ok = pit.then(&pi).expect("sets match") == FiniteRelation::identity(pi.target().clone())
            && pi.then(&pit).and_then(|h| h.then(&pi)).expect("sets match") == pi
            && kernel_relation(&pi).is_equivalence();
        t.tally(ok, || rel_json(&pi));
    }
    let (elements, maps) = block_rotation(3, 4);
    let orbits = orbit_relation(&elements, &maps);
    t.tally(orbits.is_equivalence() && orbits.is_equivalence_elementwise(), || rel_json(&orbits));
    t.finish_count()
}

/// `h_Y k πᵀ = k πᵀ` whenever `h_Y k ⊆ k h_X`.
fn compatible_descends(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(200) {
        let (kx, ky) = (ctx.rng.random_range(1..=6), ctx.rng.random_range(1..=6));
        let pi_x = random_partition(&mut ctx.rng, &set(kx));
        let h_x = kernel_relation(&pi_x);
        let h_y = kernel_relation(&random_partition(&mut ctx.rng, &set(ky)));
        let density = ctx.rng.random_range(0.05..0.5);
        let k0 = random_relation(&mut ctx.rng, &set(kx), &set(ky), density);
        let k = close_for_compatibility(&mut ctx.rng, &k0, &h_x, &h_y);
        let base = pi_x.transpose().then(&k).expect("sets match");
        let ok = base.then(&h_y).expect("sets match") == base;
        t.tally(ok, || json!({ "k": rel_json(&k), "h_x": rel_json(&h_x), "h_y": rel_json(&h_y) }));
    }
    t.finish_count()
}

/// `k h_X = h_Y k` for `k` equivariant between two actions of the same cyclic group.
fn equivariant_commutes(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(200) {
        let h = ctx.rng.random_range(1..=4);
        let (ox, oy) = (ctx.rng.random_range(1..=3), ctx.rng.random_range(1..=3));
        let (x, phi) = block_rotation(ox, h);
        let (y, psi) = block_rotation(oy, h);
        let density = ctx.rng.random_range(0.02..0.3);
        let k = equivariant_closure(&random_relation(&mut ctx.rng, &x, &y, density), &phi, &psi);
        let h_x = orbit_relation(&x, &phi);
        let h_y = orbit_relation(&y, &psi);
        let ok = h_x.then(&k).expect("sets match") == k.then(&h_y).expect("sets match");
        t.tally(ok, || json!({ "k": rel_json(&k), "group_order": h }));
    }
    t.finish_count()
}

/// A random groupoid with an action: associated bundles and pair groupoids
/// with free actions, plus the conjugation action on S3 and trivial actions.
fn random_action(ctx: &mut Ctx) -> (FiniteGroupoid, AutomorphismAction, &'static str) {
    match ctx.rng.random_range(0..4) {
        0 => {
            let b = random_associated_bundle(&mut ctx.rng);
            (b.groupoid, b.action, "associated bundle")
        }
        1 => {
            let (g, a) = pair_with_free_action(ctx.rng.random_range(1..=3), ctx.rng.random_range(1..=3));
            (g, a, "pair groupoid")
        }
        2 => {
            let b = random_associated_bundle(&mut ctx.rng);
            let a = AutomorphismAction::trivial(&b.groupoid);
            (b.groupoid, a, "trivial action")
        }
        _ => {
            let (g, a) = AutomorphismAction::inner(&FiniteGroup::symmetric(3));
            (g, a, "conjugation")
        }
    }
}

fn unit_fixing_variants(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(200) {
        let (g, a, kind) = random_action(ctx);
        let c = check_unit_fixing_condition(&g, &a);
        t.tally(c.consistent(), || json!({ "kind": kind, "conditions": c }));
    }
    t.finish_count()
}

fn quotient_free_actions(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for i in 0..ctx.capped(100) {
        let (g, a, kind) = if i % 2 == 0 {
            let b = random_associated_bundle(&mut ctx.rng);
            (b.groupoid, b.action, "associated bundle")
        } else {
            let (g, a) = pair_with_free_action(ctx.rng.random_range(1..=3), ctx.rng.random_range(1..=3));
            (g, a, "pair groupoid")
        };
        let hypothesis = check_unit_fixing_condition(&g, &a).both_fibers;
        let verdict = quotient_by_automorphisms(&g, &a).map(|q| {
            let morphism = q.transpose_is_morphism(&g).map(|m| m.holds()).unwrap_or(false);
            q.axioms.all_hold() && q.lifting.hold() && morphism && q.transpose_is_monomorphism(&g)
        });
        t.tally(hypothesis && matches!(verdict, Ok(true)), || {
            json!({ "kind": kind, "size": g.len(), "hypothesis": hypothesis, "result": format!("{verdict:?}") })
        });
    }
    t.finish_count()
}

fn trivial_quotient(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(50) {
        let b = random_associated_bundle(&mut ctx.rng);
        let a = AutomorphismAction::trivial(&b.groupoid);
        let same = quotient_by_automorphisms(&b.groupoid, &a).map(|q| q.groupoid == b.groupoid);
        t.tally(matches!(same, Ok(true)), || json!({ "size": b.groupoid.len() }));
    }
    t.finish_count()
}

fn s3_conjugation_rejected(_: &mut Ctx) -> Outcome {
    let s3 = FiniteGroup::symmetric(3);
    let (g, a) = AutomorphismAction::inner(&s3);
    let mut t = Tracker::new();
    let conditions = check_unit_fixing_condition(&g, &a);
    t.tally(conditions.as_tuple() == (false, false, false, false), || json!({ "conditions": conditions }));
    match quotient_by_automorphisms(&g, &a) {
        Err(RelationError::InverseProductNotUnit(w)) => {
            let [out, x, y] = w.triple;
            let concrete = s3.mul(x, y) == out
                && w.orbit_members.contains(&x)
                && w.inverse_orbit_members.contains(&y)
                && w.product_orbit_members.contains(&out)
                && !g.units().contains(&out);
            t.tally(concrete, || json!({ "witness": *w }));
        }
        other => t.tally(false, || json!({ "unexpected": format!("{:?}", other.map(|q| q.groupoid.len())) })),
    }
    t.finish_count()
}

fn identity_morphism(ctx: &mut Ctx) -> Outcome {
    let mut t = Tracker::new();
    for _ in 0..ctx.capped(50) {
        let b = random_associated_bundle(&mut ctx.rng);
        let id = FiniteRelation::identity(b.groupoid.elements().clone());
        let ok = is_relational_morphism(&id, &b.groupoid, &b.groupoid).unwrap_or(false)
            && is_monomorphism(&id, &b.groupoid, &b.groupoid);
        t.tally(ok, || json!({ "size": b.groupoid.len() }));
    }
    t.finish_count()
}

/// Double groups: S3 = ⟨(12)⟩⟨(123)⟩, the same with the factors swapped, and
/// S4 = S3·⟨(1234)⟩.
fn double_groups() -> Vec<(&'static str, TisInstance)> {
    let s3 = FiniteGroup::symmetric(3);
    let s4 = FiniteGroup::symmetric(4);
    let gen = |g: &FiniteGroup, degree: usize, cycles: &[&[&[usize]]]| {
        let ids: Vec<Id> = cycles.iter().map(|c| g.id_of(&perm_from_cycles(degree, c)).expect("valid permutation")).collect();
        g.subgroup_generated(&ids)
    };
    let t12 = gen(&s3, 3, &[&[&[1, 2]]]);
    let c123 = gen(&s3, 3, &[&[&[1, 2, 3]]]);
    let s3_in_s4 = gen(&s4, 4, &[&[&[1, 2]], &[&[1, 2, 3]]]);
    let c1234 = gen(&s4, 4, &[&[&[1, 2, 3, 4]]]);
    vec![
        ("S3 = <(12)><(123)>", generate_tis_groupoid(&s3, &t12, &c123).expect("trivial intersection")),
        ("S3 = <(123)><(12)>", generate_tis_groupoid(&s3, &c123, &t12).expect("trivial intersection")),
        ("S4 = S3<(1234)>", generate_tis_groupoid(&s4, &s3_in_s4, &c1234).expect("trivial intersection")),
    ]
}

fn non_double_group() -> TisInstance {
    let s3 = FiniteGroup::symmetric(3);
    let a = s3.subgroup_generated(&[s3.id_of(&perm_from_cycles(3, &[&[1, 2]])).expect("valid")]);
    let c = s3.subgroup_generated(&[s3.id_of(&perm_from_cycles(3, &[&[1, 3]])).expect("valid")]);
    generate_tis_groupoid(&s3, &a, &c).expect("trivial intersection")
}

fn per_instance(check: impl Fn(&TisInstance) -> Result<bool, RelationError>) -> Outcome {
    let mut t = Tracker::new();
    for (label, tis) in double_groups() {
        let verdict = tis.is_double_group() && tis.over_a.check_axioms().all_hold();
        let result = check(&tis);
        t.tally(verdict && matches!(result, Ok(true)), || json!({ "instance": label, "result": format!("{result:?}") }));
    }
    t.finish_count()
}

fn delta_units_inverse(_: &mut Ctx) -> Outcome {
    per_instance(|tis| {
        let d = tis.delta_compatibility()?;
        Ok(d.units_to_unit_pairs && d.inverse.is_empty())
    })
}

fn delta_multiplicative(_: &mut Ctx) -> Outcome {
    per_instance(|tis| Ok(tis.delta_multiplicativity()?.is_empty()))
}

fn delta_strict_inclusion(_: &mut Ctx) -> Outcome {
    let tis = non_double_group();
    let mut t = Tracker::new();
    let d = tis.delta_multiplicativity();
    let ok = !tis.is_double_group() && matches!(&d, Ok(d) if d.left_contains_right() && !d.is_empty());
    t.tally(ok, || json!({ "gamma": tis.gamma, "difference": format!("{d:?}") }));
    t.finish_count()
}

fn delta_coassociative(_: &mut Ctx) -> Outcome {
    let mut out = per_instance(|tis| Ok(tis.delta_coassociativity()?.is_empty()));
    let tis = non_double_group();
    if !matches!(tis.delta_coassociativity(), Ok(d) if d.is_empty()) {
        out.max_residual += 1.0;
        out.witness.get_or_insert(json!({ "instance": "S3 = <(12)>, <(13)>" }));
    }
    out.samples += 1;
    out
}

fn normalizer_translations(_: &mut Ctx) -> Outcome {
    per_instance(|tis| Ok(tis.normalizer_checks()?.hold()))
}

fn z_delta_graph(_: &mut Ctx) -> Outcome {
    per_instance(|tis| {
        let z = tis.z_quotient()?;
        Ok(z.delta_z_by_composition(tis)? == z.delta_z && z.projection_identity(tis)?.is_empty())
    })
}

fn z_delta_coassociative(_: &mut Ctx) -> Outcome {
    per_instance(|tis| Ok(tis.z_quotient()?.coassociativity(tis)?.is_empty()))
}

fn z_delta_morphism(_: &mut Ctx) -> Outcome {
    per_instance(|tis| {
        let ids = tis.z_quotient()?.morphism_identities(tis)?;
        Ok(ids.units && ids.inverse.is_empty() && ids.multiplication.is_empty())
    })
}
