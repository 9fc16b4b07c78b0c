//! Random and structured instances: group bundles with free actions, random
//! relations and partitions, equivariant relations.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use super::finite::FiniteRelation;
use super::groupoid::FiniteGroupoid;
use super::quotient::AutomorphismAction;
use super::{FiniteGroup, Id};

/// Group bundle `X × V ⇉ X` with `X = {0..orbits·h}` carrying a free right
/// action of `ℤ/h` and fiber `ℤ/m`. Group element `k` acts by
/// `(x, v) ↦ (x·k, λ^{-k} v)` where `λ^h ≡ 1 (mod m)`.
#[derive(Clone, Debug)]
pub struct AssociatedBundle {
    pub groupoid: FiniteGroupoid,
    pub action: AutomorphismAction,
    pub base_points: usize,
    pub fiber_order: usize,
}

pub fn associated_bundle(orbits: usize, h: usize, m: usize, lambda: usize) -> AssociatedBundle {
    assert!(h >= 1 && m >= 1 && orbits >= 1);
    assert_eq!(pow_mod(lambda, h, m), 1 % m, "λ must have order dividing h modulo m");
    let nx = orbits * h;
    let id = |x: usize, v: usize| (x * m + v) as Id;
    let elements: BTreeSet<Id> = (0..nx * m).map(|i| i as Id).collect();
    let units: BTreeSet<Id> = (0..nx).map(|x| id(x, 0)).collect();
    let inv: BTreeMap<Id, Id> = (0..nx)
        .flat_map(|x| (0..m).map(move |v| (x, v)))
        .map(|(x, v)| (id(x, v), id(x, (m - v) % m)))
        .collect();
    let mut mult = Vec::new();
    for x in 0..nx {
        for v in 0..m {
            for w in 0..m {
                mult.push((id(x, (v + w) % m), id(x, v), id(x, w)));
            }
        }
    }
    let groupoid = FiniteGroupoid::new(elements, units, inv, mult).expect("bundle is well formed");
    // point x = orbit·h + j; right action of k sends j to j + k
    let translate = |x: usize, k: usize| (x / h) * h + (x % h + k) % h;
    let lambda_inv = pow_mod(lambda, h - 1, m);
    let maps = (0..h)
        .map(|k| {
            let scale = pow_mod(lambda_inv, k, m);
            (0..nx)
                .flat_map(|x| (0..m).map(move |v| (x, v)))
                .map(|(x, v)| (id(x, v), id(translate(x, k), (scale * v) % m)))
                .collect()
        })
        .collect();
    let action = AutomorphismAction::new(&groupoid, FiniteGroup::cyclic(h), maps)
        .expect("free translation with a module twist acts by automorphisms");
    AssociatedBundle { groupoid, action, base_points: nx, fiber_order: m }
}

fn pow_mod(base: usize, exp: usize, m: usize) -> usize {
    let mut out = 1 % m;
    for _ in 0..exp {
        out = out * base % m;
    }
    out
}

/// Random associated bundle with a nontrivial twist when one exists.
pub fn random_associated_bundle<R: Rng + ?Sized>(rng: &mut R) -> AssociatedBundle {
    let orbits = rng.random_range(1..=3);
    let h = rng.random_range(1..=3);
    let m = rng.random_range(2..=5);
    let lambdas: Vec<usize> = (1..m).filter(|&l| gcd(l, m) == 1 && pow_mod(l, h, m) == 1).collect();
    let lambda = lambdas[rng.random_range(0..lambdas.len())];
    associated_bundle(orbits, h, m, lambda)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Pair groupoid on `orbits·h` points with `ℤ/h` acting freely and diagonally.
pub fn pair_with_free_action(orbits: usize, h: usize) -> (FiniteGroupoid, AutomorphismAction) {
    let k = orbits * h;
    let groupoid = FiniteGroupoid::pair(k);
    let translate = |x: usize, s: usize| (x / h) * h + (x % h + s) % h;
    let maps = (0..h)
        .map(|s| {
            (0..k)
                .flat_map(|i| (0..k).map(move |j| (i, j)))
                .map(|(i, j)| ((i * k + j) as Id, (translate(i, s) * k + translate(j, s)) as Id))
                .collect()
        })
        .collect();
    let action = AutomorphismAction::new(&groupoid, FiniteGroup::cyclic(h), maps)
        .expect("diagonal translation acts by automorphisms");
    (groupoid, action)
}

pub fn random_relation<R: Rng + ?Sized>(
    rng: &mut R,
    source: &BTreeSet<Id>,
    target: &BTreeSet<Id>,
    density: f64,
) -> FiniteRelation<Id, Id> {
    let graph: Vec<(Id, Id)> = target
        .iter()
        .flat_map(|&y| source.iter().map(move |&x| (y, x)))
        .filter(|_| rng.random_bool(density))
        .collect();
    FiniteRelation::new(source.clone(), target.clone(), graph).expect("pairs drawn from the sets")
}

/// Random surjection onto class labels, returned as the projection relation.
pub fn random_partition<R: Rng + ?Sized>(rng: &mut R, set: &BTreeSet<Id>) -> FiniteRelation<Id, Id> {
    let classes = rng.random_range(1..=set.len().max(1));
    let labels: BTreeMap<Id, Id> = set.iter().map(|&x| (x, rng.random_range(0..classes) as Id)).collect();
    let target: BTreeSet<Id> = labels.values().copied().collect();
    FiniteRelation::from_fn(set.clone(), target, |x| labels[x]).expect("labels form the target")
}

/// Equivalence relation `πᵀπ` of a projection.
pub fn kernel_relation(pi: &FiniteRelation<Id, Id>) -> FiniteRelation<Id, Id> {
    pi.then(&pi.transpose()).expect("projection composes with its transpose")
}

/// Enlarges `k` until `h_Y k ⊆ k h_X`, adding for each missing pair a pair
/// through a random member of the class instead of the original element.
pub fn close_for_compatibility<R: Rng + ?Sized>(
    rng: &mut R,
    k: &FiniteRelation<Id, Id>,
    h_x: &FiniteRelation<Id, Id>,
    h_y: &FiniteRelation<Id, Id>,
) -> FiniteRelation<Id, Id> {
    let mut k = k.clone();
    loop {
        let lhs = k.then(h_y).expect("k lands in Y");
        let rhs = h_x.then(&k).expect("h_X acts on X");
        let missing: Vec<(Id, Id)> = lhs.graph().difference(rhs.graph()).copied().collect();
        if missing.is_empty() {
            return k;
        }
        let mut graph = k.graph().clone();
        for (y, x) in missing {
            let class: Vec<Id> = h_x.graph().iter().filter(|(_, b)| *b == x).map(|(a, _)| *a).collect();
            let pick = class[rng.random_range(0..class.len())];
            graph.insert((y, pick));
        }
        k = FiniteRelation::new(k.source().clone(), k.target().clone(), graph).expect("same sets");
    }
}

/// A cyclic group `ℤ/h` acting on `{0..orbits·h}` by rotating within blocks.
pub fn block_rotation(orbits: usize, h: usize) -> (BTreeSet<Id>, Vec<BTreeMap<Id, Id>>) {
    let n = orbits * h;
    let set = (0..n as Id).collect();
    let maps = (0..h)
        .map(|s| (0..n).map(|x| (x as Id, ((x / h) * h + (x % h + s) % h) as Id)).collect())
        .collect();
    (set, maps)
}

/// `∪_g ψ_g k φ_g⁻¹` for actions given by maps indexed by the same cyclic group.
pub fn equivariant_closure(
    k: &FiniteRelation<Id, Id>,
    phi: &[BTreeMap<Id, Id>],
    psi: &[BTreeMap<Id, Id>],
) -> FiniteRelation<Id, Id> {
    let mut graph = BTreeSet::new();
    for (p, q) in phi.iter().zip(psi) {
        for (y, x) in k.graph() {
            graph.insert((q[y], p[x]));
        }
    }
    FiniteRelation::new(k.source().clone(), k.target().clone(), graph).expect("maps stay inside the sets")
}

/// Orbit relation of a family of maps.
pub fn orbit_relation(set: &BTreeSet<Id>, maps: &[BTreeMap<Id, Id>]) -> FiniteRelation<Id, Id> {
    let graph: Vec<(Id, Id)> = set.iter().flat_map(|&x| maps.iter().map(move |m| (m[&x], x))).collect();
    FiniteRelation::new(set.clone(), set.clone(), graph).expect("maps stay inside the set")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::relation::quotient::{check_unit_fixing_condition, quotient_by_automorphisms};

    #[test]
    fn bundle_quotient_is_a_bundle_over_the_orbits() {
        let b = associated_bundle(2, 2, 3, 2);
        assert!(b.groupoid.check_axioms().all_hold());
        assert!(check_unit_fixing_condition(&b.groupoid, &b.action).both_fibers);
        let q = quotient_by_automorphisms(&b.groupoid, &b.action).unwrap();
        assert_eq!(q.groupoid.units().len(), 2);
        assert_eq!(q.groupoid.len(), 6);
        for &u in q.groupoid.units() {
            assert_eq!(q.groupoid.left_fiber(u).len(), 3);
        }
    }

    #[test]
    fn free_pair_action_quotient() {
        let (g, a) = pair_with_free_action(2, 3);
        let q = quotient_by_automorphisms(&g, &a).unwrap();
        assert_eq!(q.groupoid.len(), 36 / 3);
        assert!(q.transpose_is_monomorphism(&g));
    }
}
