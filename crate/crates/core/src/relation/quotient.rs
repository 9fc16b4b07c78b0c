//! Quotient of a finite groupoid by a group acting through automorphisms.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::finite::FiniteRelation;
use super::groupoid::{check_morphism, is_monomorphism, AxiomReport, FiniteGroupoid, GroupoidAxiom, MorphismCheck};
use super::{FiniteGroup, Id, RelationError};

/// A finite group acting on a groupoid. `maps[g]` is the automorphism of group element `g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AutomorphismAction {
    group: FiniteGroup,
    maps: Vec<BTreeMap<Id, Id>>,
}

/// On-disk form: `{"group_table":[[..]..],"action":[[g, γ, φ_g(γ)],..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct ActionJson {
    pub group_table: Vec<Vec<Id>>,
    pub action: Vec<[Id; 3]>,
}

impl AutomorphismAction {
    /// Validates that every map is an automorphism and that the maps compose
    /// like the group.
    pub fn new(
        groupoid: &FiniteGroupoid,
        group: FiniteGroup,
        maps: Vec<BTreeMap<Id, Id>>,
    ) -> Result<Self, RelationError> {
        if maps.len() != group.order() {
            return Err(RelationError::ActionNotByAutomorphisms {
                element: 0,
                reason: format!("{} maps given for a group of order {}", maps.len(), group.order()),
            });
        }
        let fail = |g: usize, reason: String| RelationError::ActionNotByAutomorphisms { element: g as Id, reason };
        for (g, map) in maps.iter().enumerate() {
            let keys: BTreeSet<Id> = map.keys().copied().collect();
            let values: BTreeSet<Id> = map.values().copied().collect();
            if &keys != groupoid.elements() || &values != groupoid.elements() {
                return Err(fail(g, "map is not a bijection of the elements".into()));
            }
            let units: BTreeSet<Id> = groupoid.units().iter().map(|u| map[u]).collect();
            if &units != groupoid.units() {
                return Err(fail(g, "units are not preserved".into()));
            }
            if let Some(x) = groupoid
                .elements()
                .iter()
                .find(|&&x| map[&groupoid.inv(x)] != groupoid.inv(map[&x]))
            {
                return Err(fail(g, format!("does not commute with the inverse at {x}")));
            }
            let image: BTreeSet<(Id, (Id, Id))> = groupoid
                .mult()
                .graph()
                .iter()
                .map(|(out, (a, b))| (map[out], (map[a], map[b])))
                .collect();
            if &image != groupoid.mult().graph() {
                return Err(fail(g, "does not preserve the multiplication".into()));
            }
        }
        for g in 0..group.order() {
            for h in 0..group.order() {
                let gh = group.mul(g as Id, h as Id) as usize;
                if let Some(x) = groupoid
                    .elements()
                    .iter()
                    .find(|x| maps[g][&maps[h][x]] != maps[gh][x])
                {
                    return Err(fail(g, format!("composition with {h} differs from the product map at {x}")));
                }
            }
        }
        Ok(Self { group, maps })
    }

    pub fn from_json(groupoid: &FiniteGroupoid, json: &ActionJson) -> Result<Self, RelationError> {
        let group = FiniteGroup::from_table(json.group_table.clone())?;
        let mut maps = vec![BTreeMap::new(); group.order()];
        for &[g, x, y] in &json.action {
            let slot = maps.get_mut(g as usize).ok_or_else(|| RelationError::ActionNotByAutomorphisms {
                element: g,
                reason: "group element out of range".into(),
            })?;
            slot.insert(x, y);
        }
        Self::new(groupoid, group, maps)
    }

    pub fn from_json_str(groupoid: &FiniteGroupoid, text: &str) -> Result<Self, RelationError> {
        let json: ActionJson = serde_json::from_str(text)?;
        Self::from_json(groupoid, &json)
    }

    pub fn to_json(&self) -> ActionJson {
        ActionJson {
            group_table: self.group.table().to_vec(),
            action: self
                .maps
                .iter()
                .enumerate()
                .flat_map(|(g, m)| m.iter().map(move |(x, y)| [g as Id, *x, *y]))
                .collect(),
        }
    }

    /// The action of the trivial group.
    pub fn trivial(groupoid: &FiniteGroupoid) -> Self {
        let identity = groupoid.elements().iter().map(|&x| (x, x)).collect();
        Self {
            group: FiniteGroup::from_table(vec![vec![0]]).expect("trivial group"),
            maps: vec![identity],
        }
    }

    /// Conjugation action of a group on itself viewed as a one-unit groupoid.
    pub fn inner(group: &FiniteGroup) -> (FiniteGroupoid, Self) {
        let groupoid = FiniteGroupoid::from_group(group);
        let maps = (0..group.order() as Id)
            .map(|g| {
                group
                    .elements()
                    .into_iter()
                    .map(|x| (x, group.mul(group.mul(g, x), group.inv(g))))
                    .collect()
            })
            .collect();
        let action = Self::new(&groupoid, group.clone(), maps).expect("conjugation acts by automorphisms");
        (groupoid, action)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn apply(&self, g: Id, x: Id) -> Id {
        self.maps[g as usize][&x]
    }

    pub fn orbit(&self, x: Id) -> BTreeSet<Id> {
        self.maps.iter().map(|m| m[&x]).collect()
    }

    pub fn stabilizer(&self, x: Id) -> BTreeSet<Id> {
        (0..self.maps.len() as Id).filter(|&g| self.apply(g, x) == x).collect()
    }

    /// Orbit relation `{(φ(x), x)}`.
    pub fn orbit_relation(&self, groupoid: &FiniteGroupoid) -> FiniteRelation<Id, Id> {
        let graph: Vec<(Id, Id)> = groupoid
            .elements()
            .iter()
            .flat_map(|&x| self.maps.iter().map(move |m| (m[&x], x)))
            .collect();
        FiniteRelation::new(groupoid.elements().clone(), groupoid.elements().clone(), graph)
            .expect("orbit relation stays inside the elements")
    }
}

/// The four equivalent forms of the fixed-unit condition.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct UnitFixingConditions {
    /// A map fixing a unit fixes its left and right fibers.
    pub both_fibers: bool,
    pub left_fibers: bool,
    pub right_fibers: bool,
    /// Elements in one transitive component share their stabilizer.
    pub equal_stabilizers: bool,
}

impl UnitFixingConditions {
    pub fn as_tuple(&self) -> (bool, bool, bool, bool) {
        (self.both_fibers, self.left_fibers, self.right_fibers, self.equal_stabilizers)
    }

    pub fn consistent(&self) -> bool {
        let t = self.as_tuple();
        t.0 == t.1 && t.1 == t.2 && t.2 == t.3
    }
}

pub fn check_unit_fixing_condition(groupoid: &FiniteGroupoid, action: &AutomorphismAction) -> UnitFixingConditions {
    let fixes_fibers = |left: bool, right: bool| {
        (0..action.group.order() as Id).all(|g| {
            groupoid
                .units()
                .iter()
                .filter(|&&e| action.apply(g, e) == e)
                .all(|&e| {
                    let mut fiber = BTreeSet::new();
                    if left {
                        fiber.extend(groupoid.left_fiber(e));
                    }
                    if right {
                        fiber.extend(groupoid.right_fiber(e));
                    }
                    fiber.iter().all(|&x| action.apply(g, x) == x)
                })
        })
    };
    let components = groupoid.transitive_components();
    let mut stabilizers: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
    let mut equal_stabilizers = true;
    for (&x, &c) in &components {
        let stab = action.stabilizer(x);
        match stabilizers.get(&c) {
            Some(existing) if *existing != stab => equal_stabilizers = false,
            Some(_) => {}
            None => {
                stabilizers.insert(c, stab);
            }
        }
    }
    UnitFixingConditions {
        both_fibers: fixes_fibers(true, true),
        left_fibers: fixes_fibers(true, false),
        right_fibers: fixes_fibers(false, true),
        equal_stabilizers,
    }
}

/// Evidence that the quotient product of an orbit with its inverse orbit
/// leaves the units.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InverseProductWitness {
    /// Orbit label (smallest member) of the offending orbit.
    pub orbit: Id,
    pub inverse_orbit: Id,
    pub product_orbit: Id,
    pub orbit_members: Vec<Id>,
    pub inverse_orbit_members: Vec<Id>,
    pub product_orbit_members: Vec<Id>,
    /// Concrete `(product, left, right)` triple of the original groupoid.
    pub triple: [Id; 3],
}

/// Orbit groupoid together with its projection.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub groupoid: FiniteGroupoid,
    /// Projection onto orbits; each orbit is labelled by its smallest member.
    pub projection: FiniteRelation<Id, Id>,
    pub orbits: BTreeMap<Id, BTreeSet<Id>>,
    pub axioms: AxiomReport,
    pub lifting: LiftingIdentities,
}

/// The identities saying that the transposed projection is a morphism into
/// the original groupoid.
#[derive(Clone, Debug)]
pub struct LiftingIdentities {
    pub units: bool,
    pub inverse: bool,
    pub multiplication: bool,
}

impl LiftingIdentities {
    pub fn hold(&self) -> bool {
        self.units && self.inverse && self.multiplication
    }
}

impl Quotient {
    /// Transpose of the projection, a relation from orbits to elements.
    pub fn section_relation(&self) -> FiniteRelation<Id, Id> {
        self.projection.transpose()
    }

    pub fn transpose_is_morphism(&self, original: &FiniteGroupoid) -> Result<MorphismCheck, RelationError> {
        check_morphism(&self.section_relation(), &self.groupoid, original)
    }

    pub fn transpose_is_monomorphism(&self, original: &FiniteGroupoid) -> bool {
        is_monomorphism(&self.section_relation(), &self.groupoid, original)
    }
}

/// Builds the orbit groupoid with units `π(E)`, inverse `π s πᵀ` and
/// multiplication `π m (πᵀ × πᵀ)`, then verifies it.
pub fn quotient_by_automorphisms(
    groupoid: &FiniteGroupoid,
    action: &AutomorphismAction,
) -> Result<Quotient, RelationError> {
    let label: BTreeMap<Id, Id> = groupoid
        .elements()
        .iter()
        .map(|&x| (x, *action.orbit(x).first().expect("orbit contains x")))
        .collect();
    let mut orbits: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
    for (&x, &l) in &label {
        orbits.entry(l).or_default().insert(x);
    }
    let labels: BTreeSet<Id> = orbits.keys().copied().collect();
    let projection = FiniteRelation::from_fn(groupoid.elements().clone(), labels.clone(), |x| label[x])?;

    let units: BTreeSet<Id> = groupoid.units().iter().map(|u| label[u]).collect();
    let mut inv: BTreeMap<Id, Id> = BTreeMap::new();
    for &x in groupoid.elements() {
        let (lx, li) = (label[&x], label[&groupoid.inv(x)]);
        if let Some(prev) = inv.insert(lx, li) {
            if prev != li {
                return Err(RelationError::ActionNotByAutomorphisms {
                    element: x,
                    reason: "inverse does not descend to orbits".into(),
                });
            }
        }
    }
    let mult: BTreeSet<(Id, Id, Id)> = groupoid
        .mult()
        .graph()
        .iter()
        .map(|(out, (a, b))| (label[out], label[a], label[b]))
        .collect();
    let quotient = FiniteGroupoid::new(labels, units, inv, mult)?;

    for (&o, members) in &orbits {
        let io = quotient.inv(o);
        let products = quotient.products(io, o);
        if let Some(&bad) = products.iter().find(|p| !quotient.units().contains(p)) {
            let triple = groupoid
                .mult()
                .graph()
                .iter()
                .find(|(out, (a, b))| label[out] == bad && label[a] == io && label[b] == o)
                .map(|(out, (a, b))| [*out, *a, *b])
                .expect("quotient product comes from an original product");
            return Err(RelationError::InverseProductNotUnit(Box::new(InverseProductWitness {
                orbit: o,
                inverse_orbit: io,
                product_orbit: bad,
                orbit_members: members.iter().copied().collect(),
                inverse_orbit_members: orbits[&io].iter().copied().collect(),
                product_orbit_members: orbits[&bad].iter().copied().collect(),
                triple,
            })));
        }
    }

    let axioms = quotient.check_axioms();
    if let Some(failure) = axioms.first_failure() {
        return Err(RelationError::QuotientAxiomFailure {
            axiom: failure.axiom.name(),
            detail: failure.witness.as_ref().map(|w| w.detail.clone()).unwrap_or_default(),
        });
    }
    debug_assert!(axioms.get(GroupoidAxiom::InverseProductIsUnit).holds);

    let section = projection.transpose();
    let check = check_morphism(&section, &quotient, groupoid)?;
    let lifting = LiftingIdentities {
        units: check.units_image,
        inverse: check.inverse.is_empty(),
        multiplication: check.multiplication.is_empty(),
    };
    Ok(Quotient { groupoid: quotient, projection, orbits, axioms, lifting })
}

#[cfg(test)]
mod tests {
    use super::super::group::perm_from_cycles;
    use super::*;

    #[test]
    fn trivial_action_gives_a_copy() {
        let g = FiniteGroupoid::pair(3);
        let a = AutomorphismAction::trivial(&g);
        assert_eq!(check_unit_fixing_condition(&g, &a).as_tuple(), (true, true, true, true));
        let q = quotient_by_automorphisms(&g, &a).unwrap();
        assert_eq!(q.groupoid, g);
        assert!(q.lifting.hold());
        assert!(q.transpose_is_monomorphism(&g));
    }

    #[test]
    fn inner_action_on_s3_fails_every_variant() {
        let s3 = FiniteGroup::symmetric(3);
        let (g, a) = AutomorphismAction::inner(&s3);
        let c = check_unit_fixing_condition(&g, &a);
        assert_eq!(c.as_tuple(), (false, false, false, false));
        let t12 = s3.id_of(&perm_from_cycles(3, &[&[1, 2]])).unwrap();
        let t13 = s3.id_of(&perm_from_cycles(3, &[&[1, 3]])).unwrap();
        assert_eq!(a.apply(t12, s3.identity()), s3.identity());
        assert_ne!(a.apply(t12, t13), t13);
    }

    #[test]
    fn inner_action_on_s3_quotient_is_rejected() {
        let s3 = FiniteGroup::symmetric(3);
        let (g, a) = AutomorphismAction::inner(&s3);
        let err = quotient_by_automorphisms(&g, &a).unwrap_err();
        let RelationError::InverseProductNotUnit(w) = err else {
            panic!("unexpected error {err:?}");
        };
        assert_eq!(w.orbit_members.len(), 3);
        assert_eq!(w.product_orbit_members.len(), 2);
        let [out, x, y] = w.triple;
        assert_eq!(s3.mul(x, y), out);
    }

    #[test]
    fn invalid_action_is_rejected() {
        let g = FiniteGroupoid::pair(2);
        let group = FiniteGroup::cyclic(2);
        // swapping a unit with a non-unit cannot be an automorphism
        let swap: BTreeMap<Id, Id> = [(0, 1), (1, 0), (2, 2), (3, 3)].into_iter().collect();
        let id: BTreeMap<Id, Id> = (0..4).map(|x| (x, x)).collect();
        let err = AutomorphismAction::new(&g, group, vec![id, swap]).unwrap_err();
        assert!(matches!(err, RelationError::ActionNotByAutomorphisms { .. }));
    }

    #[test]
    fn action_json_round_trip() {
        let s3 = FiniteGroup::symmetric(3);
        let (g, a) = AutomorphismAction::inner(&s3);
        let text = serde_json::to_string(&a.to_json()).unwrap();
        assert_eq!(AutomorphismAction::from_json_str(&g, &text).unwrap().to_json(), a.to_json());
    }
}
