//! Finite groupoids presented by their multiplication relation, axiom checks
//! and morphisms in the category whose arrows are relations.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IteratorRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::finite::{cartesian, reassociate, FiniteRelation, GraphDifference};
use super::{Id, RelationError};

/// Above this many elements the associativity check samples composable
/// triples instead of comparing full relations.
pub const EXHAUSTIVE_LIMIT: usize = 60;
const SAMPLED_TRIPLES: usize = 20_000;
const SAMPLING_SEED: u64 = 0x5eed;

pub type Pair = (Id, Id);

/// Groupoid with a multiplication relation `Γ × Γ ⇸ Γ`, an inverse map and a unit set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroupoid {
    elements: BTreeSet<Id>,
    units: BTreeSet<Id>,
    inv: BTreeMap<Id, Id>,
    mult: FiniteRelation<Pair, Id>,
    table: BTreeMap<Pair, BTreeSet<Id>>,
}

/// On-disk form: `{"elements":[..],"units":[..],"inv":{"id":id},"mult":[[out,in1,in2],..]}`.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
pub struct GroupoidJson {
    pub elements: Vec<Id>,
    pub units: Vec<Id>,
    pub inv: BTreeMap<Id, Id>,
    pub mult: Vec<[Id; 3]>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GroupoidAxiom {
    Associativity,
    UnitLaw,
    InverseInvolution,
    InverseReversesProducts,
    InverseProductIsUnit,
}

impl GroupoidAxiom {
    pub const ALL: [GroupoidAxiom; 5] = [
        GroupoidAxiom::Associativity,
        GroupoidAxiom::UnitLaw,
        GroupoidAxiom::InverseInvolution,
        GroupoidAxiom::InverseReversesProducts,
        GroupoidAxiom::InverseProductIsUnit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GroupoidAxiom::Associativity => "associativity",
            GroupoidAxiom::UnitLaw => "unit-law",
            GroupoidAxiom::InverseInvolution => "inverse-involution",
            GroupoidAxiom::InverseReversesProducts => "inverse-reverses-products",
            GroupoidAxiom::InverseProductIsUnit => "inverse-product-is-unit",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomWitness {
    /// Element ids involved, in the order described by `detail`.
    pub ids: Vec<Id>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: GroupoidAxiom,
    pub holds: bool,
    pub exhaustive: bool,
    pub witness: Option<AxiomWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AxiomReport {
    pub checks: Vec<AxiomCheck>,
}

impl AxiomReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn get(&self, axiom: GroupoidAxiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("report covers every axiom")
    }

    pub fn first_failure(&self) -> Option<&AxiomCheck> {
        self.checks.iter().find(|c| !c.holds)
    }
}

fn check(axiom: GroupoidAxiom, witness: Option<AxiomWitness>, exhaustive: bool) -> AxiomCheck {
    AxiomCheck { axiom, holds: witness.is_none(), exhaustive, witness }
}

impl FiniteGroupoid {
    /// Builds a groupoid presentation. Only well-formedness is checked here;
    /// the groupoid axioms are checked by [`FiniteGroupoid::check_axioms`].
    pub fn new(
        elements: BTreeSet<Id>,
        units: BTreeSet<Id>,
        inv: BTreeMap<Id, Id>,
        mult: impl IntoIterator<Item = (Id, Id, Id)>,
    ) -> Result<Self, RelationError> {
        if !units.is_subset(&elements) {
            return Err(RelationError::Malformed("units are not a subset of the elements".into()));
        }
        let inv_keys: BTreeSet<Id> = inv.keys().copied().collect();
        if inv_keys != elements {
            return Err(RelationError::Malformed("inverse is not defined on every element".into()));
        }
        if let Some((k, v)) = inv.iter().find(|(_, v)| !elements.contains(v)) {
            return Err(RelationError::Malformed(format!("inverse of {k} is unknown element {v}")));
        }
        let source = cartesian(&elements, &elements);
        let mult = FiniteRelation::new(
            source,
            elements.clone(),
            mult.into_iter().map(|(out, a, b)| (out, (a, b))),
        )?;
        let mut table: BTreeMap<Pair, BTreeSet<Id>> = BTreeMap::new();
        for (out, pair) in mult.graph() {
            table.entry(*pair).or_default().insert(*out);
        }
        Ok(Self { elements, units, inv, mult, table })
    }

    pub fn from_json(json: &GroupoidJson) -> Result<Self, RelationError> {
        Self::new(
            json.elements.iter().copied().collect(),
            json.units.iter().copied().collect(),
            json.inv.clone(),
            json.mult.iter().map(|t| (t[0], t[1], t[2])),
        )
    }

    pub fn from_json_str(text: &str) -> Result<Self, RelationError> {
        let json: GroupoidJson = serde_json::from_str(text)?;
        Self::from_json(&json)
    }

    pub fn to_json(&self) -> GroupoidJson {
        GroupoidJson {
            elements: self.elements.iter().copied().collect(),
            units: self.units.iter().copied().collect(),
            inv: self.inv.clone(),
            mult: self.mult.graph().iter().map(|(out, (a, b))| [*out, *a, *b]).collect(),
        }
    }

    /// A group as a groupoid with a single unit.
    pub fn from_group(group: &super::FiniteGroup) -> Self {
        let elements = group.elements();
        let units = BTreeSet::from([group.identity()]);
        let inv = elements.iter().map(|&a| (a, group.inv(a))).collect();
        let mult: Vec<(Id, Id, Id)> = elements
            .iter()
            .flat_map(|&a| elements.iter().map(move |&b| (a, b)))
            .map(|(a, b)| (group.mul(a, b), a, b))
            .collect();
        Self::new(elements, units, inv, mult).expect("group table is well formed")
    }

    /// Pair groupoid on `k` points; element `(i, j)` has id `i * k + j`,
    /// target `i` and source `j`.
    pub fn pair(k: usize) -> Self {
        let id = |i: usize, j: usize| (i * k + j) as Id;
        let elements = (0..k * k).map(|x| x as Id).collect();
        let units = (0..k).map(|i| id(i, i)).collect();
        let inv = (0..k)
            .flat_map(|i| (0..k).map(move |j| (i, j)))
            .map(|(i, j)| (id(i, j), id(j, i)))
            .collect();
        let mut mult = Vec::new();
        for i in 0..k {
            for j in 0..k {
                for l in 0..k {
                    mult.push((id(i, l), id(i, j), id(j, l)));
                }
            }
        }
        Self::new(elements, units, inv, mult).expect("pair groupoid is well formed")
    }

    pub fn elements(&self) -> &BTreeSet<Id> {
        &self.elements
    }

    pub fn units(&self) -> &BTreeSet<Id> {
        &self.units
    }

    pub fn inv_map(&self) -> &BTreeMap<Id, Id> {
        &self.inv
    }

    pub fn inv(&self, g: Id) -> Id {
        self.inv[&g]
    }

    pub fn mult(&self) -> &FiniteRelation<Pair, Id> {
        &self.mult
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// All products of `a` and `b` (at most one in a genuine groupoid).
    pub fn products(&self, a: Id, b: Id) -> BTreeSet<Id> {
        self.table.get(&(a, b)).cloned().unwrap_or_default()
    }

    pub fn product(&self, a: Id, b: Id) -> Option<Id> {
        match self.table.get(&(a, b)) {
            Some(p) if p.len() == 1 => p.first().copied(),
            _ => None,
        }
    }

    /// Target unit `γγ⁻¹`.
    pub fn target_unit(&self, g: Id) -> Option<Id> {
        self.product(g, self.inv(g))
    }

    /// Source unit `γ⁻¹γ`.
    pub fn source_unit(&self, g: Id) -> Option<Id> {
        self.product(self.inv(g), g)
    }

    pub fn inv_relation(&self) -> FiniteRelation<Id, Id> {
        FiniteRelation::from_fn(self.elements.clone(), self.elements.clone(), |g| self.inv(*g))
            .expect("inverse is total")
    }

    /// Elements with target unit `e`.
    pub fn left_fiber(&self, e: Id) -> BTreeSet<Id> {
        self.elements
            .iter()
            .copied()
            .filter(|&g| self.target_unit(g) == Some(e))
            .collect()
    }

    /// Elements with source unit `e`.
    pub fn right_fiber(&self, e: Id) -> BTreeSet<Id> {
        self.elements
            .iter()
            .copied()
            .filter(|&g| self.source_unit(g) == Some(e))
            .collect()
    }

    /// Connected component label of each element: the smallest unit reachable
    /// from its target unit through arrows.
    pub fn transitive_components(&self) -> BTreeMap<Id, Id> {
        let mut parent: BTreeMap<Id, Id> = self.units.iter().map(|&u| (u, u)).collect();
        fn find(parent: &mut BTreeMap<Id, Id>, x: Id) -> Id {
            let p = parent[&x];
            if p == x {
                return x;
            }
            let r = find(parent, p);
            parent.insert(x, r);
            r
        }
        for &g in &self.elements {
            if let (Some(t), Some(s)) = (self.target_unit(g), self.source_unit(g)) {
                let (rt, rs) = (find(&mut parent, t), find(&mut parent, s));
                if rt != rs {
                    parent.insert(rt.max(rs), rt.min(rs));
                }
            }
        }
        let mut out = BTreeMap::new();
        for &g in &self.elements {
            if let Some(t) = self.target_unit(g) {
                out.insert(g, find(&mut parent, t));
            }
        }
        out
    }

    pub fn check_axioms(&self) -> AxiomReport {
        let exhaustive = self.len() <= EXHAUSTIVE_LIMIT;
        let assoc = if exhaustive {
            self.associativity_exhaustive()
        } else {
            self.associativity_sampled()
        };
        AxiomReport {
            checks: vec![
                check(GroupoidAxiom::Associativity, assoc, exhaustive),
                check(GroupoidAxiom::UnitLaw, self.unit_law_witness(), true),
                check(GroupoidAxiom::InverseInvolution, self.involution_witness(), true),
                check(GroupoidAxiom::InverseReversesProducts, self.antihomomorphism_witness(), true),
                check(GroupoidAxiom::InverseProductIsUnit, self.inverse_product_witness(), true),
            ],
        }
    }

    /// `m(m × id)` against `m(id × m)` after reassociating the source.
    fn associativity_exhaustive(&self) -> Option<AxiomWitness> {
        let id = FiniteRelation::identity(self.elements.clone());
        let left = self.mult.product(&id).then(&self.mult).ok()?;
        let right_raw = id.product(&self.mult).then(&self.mult).ok()?;
        let assoc = reassociate(&self.elements, &self.elements, &self.elements);
        let right = assoc.transpose().then(&right_raw).ok()?;
        let diff = left.difference(&right);
        let (out, ((a, b), c)) = diff.only_left.first().or(diff.only_right.first())?;
        let side = if diff.only_left.is_empty() { "(ab)c misses" } else { "a(bc) misses" };
        Some(AxiomWitness {
            ids: vec![*a, *b, *c, *out],
            detail: format!("{side} product {out} of ({a}, {b}, {c})"),
        })
    }

    fn associativity_sampled(&self) -> Option<AxiomWitness> {
        let mut by_left: BTreeMap<Id, Vec<(Id, Id)>> = BTreeMap::new();
        for (out, (a, b)) in self.mult.graph() {
            by_left.entry(*a).or_default().push((*b, *out));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(SAMPLING_SEED);
        for _ in 0..SAMPLED_TRIPLES {
            let (ab, (a, b)) = self.mult.graph().iter().choose(&mut rng)?;
            let Some(&(c, _)) = by_left.get(b).and_then(|v| v.iter().choose(&mut rng)) else {
                continue;
            };
            let left: BTreeSet<Id> = self.products(*ab, c);
            let right: BTreeSet<Id> = self
                .products(*b, c)
                .into_iter()
                .flat_map(|bc| self.products(*a, bc))
                .collect();
            if left != right {
                return Some(AxiomWitness {
                    ids: vec![*a, *b, c],
                    detail: format!("(ab)c = {left:?} but a(bc) = {right:?}"),
                });
            }
        }
        None
    }

    /// `m(E × id) = m(id × E) = id` with `E` viewed as a relation from a point.
    fn unit_law_witness(&self) -> Option<AxiomWitness> {
        let mut left: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
        let mut right: BTreeMap<Id, BTreeSet<Id>> = BTreeMap::new();
        for (out, (a, b)) in self.mult.graph() {
            if self.units.contains(a) {
                left.entry(*b).or_default().insert(*out);
            }
            if self.units.contains(b) {
                right.entry(*a).or_default().insert(*out);
            }
        }
        for &g in &self.elements {
            for (side, map) in [("left", &left), ("right", &right)] {
                let got = map.get(&g).cloned().unwrap_or_default();
                if got != BTreeSet::from([g]) {
                    return Some(AxiomWitness {
                        ids: vec![g],
                        detail: format!("{side} unit products of {g} are {got:?}"),
                    });
                }
            }
        }
        None
    }

    fn involution_witness(&self) -> Option<AxiomWitness> {
        self.elements.iter().find(|&&g| self.inv(self.inv(g)) != g).map(|&g| AxiomWitness {
            ids: vec![g, self.inv(g)],
            detail: format!("inverse of inverse of {g} is {}", self.inv(self.inv(g))),
        })
    }

    /// `s m = m (s × s) ~`.
    fn antihomomorphism_witness(&self) -> Option<AxiomWitness> {
        let left: BTreeSet<(Id, Pair)> = self
            .mult
            .graph()
            .iter()
            .map(|(out, pair)| (self.inv(*out), *pair))
            .collect();
        let right: BTreeSet<(Id, Pair)> = self
            .mult
            .graph()
            .iter()
            .map(|(out, (a, b))| (*out, (self.inv(*b), self.inv(*a))))
            .collect();
        let (out, (a, b)) = left.symmetric_difference(&right).next()?;
        Some(AxiomWitness {
            ids: vec![*a, *b, *out],
            detail: format!("inverse of products of ({a}, {b}) and reversed product of inverses disagree at {out}"),
        })
    }

    /// Every `γ⁻¹γ` product set is non-empty and made of units.
    fn inverse_product_witness(&self) -> Option<AxiomWitness> {
        for &g in &self.elements {
            let s = self.inv(g);
            let prods = self.products(s, g);
            if prods.is_empty() {
                return Some(AxiomWitness {
                    ids: vec![s, g],
                    detail: format!("no product of inverse {s} with {g}"),
                });
            }
            if let Some(bad) = prods.iter().find(|p| !self.units.contains(p)) {
                return Some(AxiomWitness {
                    ids: vec![s, g, *bad],
                    detail: format!("product of inverse {s} with {g} contains non-unit {bad}"),
                });
            }
        }
        None
    }
}

/// Outcome of the three morphism identities for a relation `h : Γ₁ ⇸ Γ₂`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MorphismCheck {
    pub multiplication: GraphDifference<Pair, Id>,
    pub inverse: GraphDifference<Id, Id>,
    pub units_image: bool,
}

impl MorphismCheck {
    pub fn holds(&self) -> bool {
        self.multiplication.is_empty() && self.inverse.is_empty() && self.units_image
    }
}

/// Checks `h m₁ = m₂ (h × h)`, `h s₁ = s₂ h` and `h(E₁) = E₂`.
pub fn check_morphism(
    h: &FiniteRelation<Id, Id>,
    g1: &FiniteGroupoid,
    g2: &FiniteGroupoid,
) -> Result<MorphismCheck, RelationError> {
    if h.source() != g1.elements() || h.target() != g2.elements() {
        return Err(RelationError::SetMismatch {
            context: "morphism relation must go from the first groupoid's elements to the second's",
        });
    }
    let hm = g1.mult().then(h)?;
    let mh = h.product(h).then(g2.mult())?;
    let hs = g1.inv_relation().then(h)?;
    let sh = h.then(&g2.inv_relation())?;
    Ok(MorphismCheck {
        multiplication: hm.difference(&mh),
        inverse: hs.difference(&sh),
        units_image: &h.image(g1.units()) == g2.units(),
    })
}

pub fn is_relational_morphism(
    h: &FiniteRelation<Id, Id>,
    g1: &FiniteGroupoid,
    g2: &FiniteGroupoid,
) -> Result<bool, RelationError> {
    Ok(check_morphism(h, g1, g2)?.holds())
}

/// `{γ₁ : every element related to γ₁ is a unit}`.
pub fn kernel(h: &FiniteRelation<Id, Id>, g2: &FiniteGroupoid) -> BTreeSet<Id> {
    h.source()
        .iter()
        .copied()
        .filter(|x| {
            h.graph()
                .iter()
                .filter(|(_, x2)| x2 == x)
                .all(|(y, _)| g2.units().contains(y))
        })
        .collect()
}

/// A morphism is a monomorphism exactly when its kernel is the unit set.
pub fn is_monomorphism(h: &FiniteRelation<Id, Id>, g1: &FiniteGroupoid, g2: &FiniteGroupoid) -> bool {
    &kernel(h, g2) == g1.units()
}

#[cfg(test)]
mod tests {
    use super::super::FiniteGroup;
    use super::*;

    #[test]
    fn pair_groupoid_satisfies_axioms() {
        let g = FiniteGroupoid::pair(3);
        assert!(g.check_axioms().all_hold());
        assert_eq!(g.target_unit(1), Some(0));
        assert_eq!(g.source_unit(1), Some(4));
    }

    #[test]
    fn group_as_groupoid_satisfies_axioms() {
        let g = FiniteGroupoid::from_group(&FiniteGroup::symmetric(3));
        let report = g.check_axioms();
        assert!(report.all_hold(), "{report:?}");
        assert_eq!(g.units().len(), 1);
    }

    #[test]
    fn broken_inverse_is_reported() {
        let mut json = FiniteGroupoid::pair(2).to_json();
        json.inv.insert(1, 1);
        let g = FiniteGroupoid::from_json(&json).unwrap();
        let report = g.check_axioms();
        assert!(!report.get(GroupoidAxiom::InverseReversesProducts).holds);
        assert!(!report.get(GroupoidAxiom::InverseProductIsUnit).holds);
        assert!(report.get(GroupoidAxiom::InverseProductIsUnit).witness.is_some());
    }

    #[test]
    fn json_round_trip() {
        let g = FiniteGroupoid::pair(2);
        let text = serde_json::to_string(&g.to_json()).unwrap();
        assert_eq!(FiniteGroupoid::from_json_str(&text).unwrap(), g);
    }

    #[test]
    fn identity_is_a_monomorphism() {
        let g = FiniteGroupoid::pair(2);
        let id = FiniteRelation::identity(g.elements().clone());
        assert!(is_relational_morphism(&id, &g, &g).unwrap());
        assert!(is_monomorphism(&id, &g, &g));
    }

    #[test]
    fn collapsing_isotropy_is_not_a_monomorphism() {
        let z2 = FiniteGroupoid::from_group(&FiniteGroup::cyclic(2));
        let trivial = FiniteGroupoid::from_group(&FiniteGroup::cyclic(1));
        let h = FiniteRelation::from_fn(z2.elements().clone(), trivial.elements().clone(), |_| 0).unwrap();
        assert!(is_relational_morphism(&h, &z2, &trivial).unwrap());
        assert!(!is_monomorphism(&h, &z2, &trivial));
    }

    #[test]
    fn large_groupoid_uses_sampling() {
        let g = FiniteGroupoid::pair(8);
        let report = g.check_axioms();
        assert!(report.all_hold());
        assert!(!report.get(GroupoidAxiom::Associativity).exhaustive);
    }
}
