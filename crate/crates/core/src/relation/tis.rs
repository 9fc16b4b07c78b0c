//! Groupoids built from a pair of trivially intersecting subgroups, the
//! comultiplication-like relation `δ` and its descent to the quotient by the
//! normalizing part of `A`.

use std::collections::{BTreeMap, BTreeSet};

use super::finite::{cartesian, reassociate, shuffle_middle, FiniteRelation, GraphDifference};
use super::groupoid::{check_morphism, FiniteGroupoid, MorphismCheck};
use super::quotient::{quotient_by_automorphisms, AutomorphismAction, Quotient};
use super::{FiniteGroup, Id, RelationError};

/// The two factorizations `g = a_L c_R = c_L a_R` of a decomposable element.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Factors {
    pub a_left: Id,
    pub c_right: Id,
    pub c_left: Id,
    pub a_right: Id,
}

/// A group with subgroups `A`, `C`, `A ∩ C = {e}`, and the groupoids over
/// `A` and over `C` on the decomposable elements `AC ∩ CA`.
#[derive(Clone, Debug)]
pub struct TisInstance {
    pub group: FiniteGroup,
    pub a: BTreeSet<Id>,
    pub c: BTreeSet<Id>,
    pub gamma: BTreeSet<Id>,
    pub factors: BTreeMap<Id, Factors>,
    /// Groupoid over `A`.
    pub over_a: FiniteGroupoid,
    /// Groupoid over `C`.
    pub over_c: FiniteGroupoid,
    /// Transpose of the multiplication of the groupoid over `C`, `Γ ⇸ Γ × Γ`.
    pub delta: FiniteRelation<Id, (Id, Id)>,
}

pub fn generate_tis_groupoid(
    group: &FiniteGroup,
    a: &BTreeSet<Id>,
    c: &BTreeSet<Id>,
) -> Result<TisInstance, RelationError> {
    if !group.is_subgroup(a) || !group.is_subgroup(c) {
        return Err(RelationError::InvalidGroup("A and C must be subgroups".into()));
    }
    let common: Vec<Id> = a.intersection(c).copied().filter(|&x| x != group.identity()).collect();
    if let Some(&x) = common.first() {
        return Err(RelationError::NonTrivialIntersection { element: x });
    }
    let mut ac: BTreeMap<Id, (Id, Id)> = BTreeMap::new();
    let mut ca: BTreeMap<Id, (Id, Id)> = BTreeMap::new();
    for &x in a {
        for &y in c {
            ac.insert(group.mul(x, y), (x, y));
            ca.insert(group.mul(y, x), (y, x));
        }
    }
    let gamma: BTreeSet<Id> = ac.keys().filter(|g| ca.contains_key(g)).copied().collect();
    let factors: BTreeMap<Id, Factors> = gamma
        .iter()
        .map(|&g| {
            let (a_left, c_right) = ac[&g];
            let (c_left, a_right) = ca[&g];
            (g, Factors { a_left, c_right, c_left, a_right })
        })
        .collect();

    let over_a = {
        let inv = gamma
            .iter()
            .map(|&g| {
                let f = factors[&g];
                (g, group.mul(group.inv(f.c_left), f.a_left))
            })
            .collect();
        let mut mult = Vec::new();
        for &g1 in &gamma {
            for &g2 in &gamma {
                if factors[&g1].a_right == factors[&g2].a_left {
                    mult.push((group.mul(g1, factors[&g2].c_right), g1, g2));
                }
            }
        }
        FiniteGroupoid::new(gamma.clone(), a.clone(), inv, mult)?
    };
    let over_c = {
        let inv = gamma
            .iter()
            .map(|&g| {
                let f = factors[&g];
                (g, group.mul(group.inv(f.a_left), f.c_left))
            })
            .collect();
        let mut mult = Vec::new();
        for &g1 in &gamma {
            for &g2 in &gamma {
                if factors[&g1].c_right == factors[&g2].c_left {
                    mult.push((group.mul(factors[&g1].a_left, g2), g1, g2));
                }
            }
        }
        FiniteGroupoid::new(gamma.clone(), c.clone(), inv, mult)?
    };
    let delta = over_c.mult().transpose();
    Ok(TisInstance {
        group: group.clone(),
        a: a.clone(),
        c: c.clone(),
        gamma,
        factors,
        over_a,
        over_c,
        delta,
    })
}

/// Results of the unit and inverse compatibility of `δ`.
#[derive(Clone, Debug)]
pub struct DeltaCompatibility {
    pub units_to_unit_pairs: bool,
    pub inverse: GraphDifference<Id, (Id, Id)>,
}

/// Results for the normalizing part `A₀ = A ∩ N(C)`.
#[derive(Clone, Debug)]
pub struct NormalizerChecks {
    pub a0: BTreeSet<Id>,
    pub translations_preserve_gamma: bool,
    pub left_translations: Vec<(Id, MorphismCheck)>,
    pub right_translations: Vec<(Id, MorphismCheck)>,
    pub delta_right_equivariant: Vec<(Id, GraphDifference<Id, (Id, Id)>)>,
}

impl NormalizerChecks {
    pub fn hold(&self) -> bool {
        self.translations_preserve_gamma
            && self.left_translations.iter().all(|(_, c)| c.holds())
            && self.right_translations.iter().all(|(_, c)| c.holds())
            && self.delta_right_equivariant.iter().all(|(_, d)| d.is_empty())
    }
}

impl TisInstance {
    /// `AC = G`.
    pub fn is_double_group(&self) -> bool {
        self.gamma.len() == self.group.order()
    }

    pub fn a0(&self) -> BTreeSet<Id> {
        let n = self.group.normalizer(&self.c);
        self.a.intersection(&n).copied().collect()
    }

    pub fn left_translation(&self, a: Id) -> Result<FiniteRelation<Id, Id>, RelationError> {
        FiniteRelation::from_fn(self.gamma.clone(), self.gamma.clone(), |g| self.group.mul(a, *g))
    }

    pub fn right_translation(&self, a: Id) -> Result<FiniteRelation<Id, Id>, RelationError> {
        FiniteRelation::from_fn(self.gamma.clone(), self.gamma.clone(), |g| self.group.mul(*g, a))
    }

    /// `δ(A) = A × A` and `δ s_A = (s_A × s_A) δ`.
    pub fn delta_compatibility(&self) -> Result<DeltaCompatibility, RelationError> {
        let s = self.over_a.inv_relation();
        let left = s.then(&self.delta)?;
        let right = self.delta.then(&s.product(&s))?;
        Ok(DeltaCompatibility {
            units_to_unit_pairs: self.delta.image(&self.a) == cartesian(&self.a, &self.a),
            inverse: left.difference(&right),
        })
    }

    /// `δ m_A` against `(m_A × m_A)(id × flip × id)(δ × δ)`. The left side
    /// always contains the right side; equality holds for double groups.
    pub fn delta_multiplicativity(&self) -> Result<GraphDifference<(Id, Id), (Id, Id)>, RelationError> {
        let m = self.over_a.mult();
        let left = m.then(&self.delta)?;
        let g = &self.gamma;
        let right = self
            .delta
            .product(&self.delta)
            .then(&shuffle_middle(g, g, g, g))?
            .then(&m.product(m))?;
        Ok(left.difference(&right))
    }

    /// `(id × δ) δ = (δ × id) δ` up to reassociation.
    pub fn delta_coassociativity(&self) -> Result<GraphDifference<Id, ((Id, Id), Id)>, RelationError> {
        let id = FiniteRelation::identity(self.gamma.clone());
        let g = &self.gamma;
        let left = self.delta.then(&self.delta.product(&id))?;
        let right = self
            .delta
            .then(&id.product(&self.delta))?
            .then(&reassociate(g, g, g))?;
        Ok(left.difference(&right))
    }

    pub fn normalizer_checks(&self) -> Result<NormalizerChecks, RelationError> {
        let a0 = self.a0();
        let translations_preserve_gamma = a0.iter().all(|&a| {
            self.gamma.iter().all(|&g| {
                self.gamma.contains(&self.group.mul(a, g)) && self.gamma.contains(&self.group.mul(g, a))
            })
        });
        let id = FiniteRelation::identity(self.gamma.clone());
        let mut left_translations = Vec::new();
        let mut right_translations = Vec::new();
        let mut delta_right_equivariant = Vec::new();
        for &a in &a0 {
            let l = self.left_translation(a)?;
            let r = self.right_translation(a)?;
            left_translations.push((a, check_morphism(&l, &self.over_a, &self.over_a)?));
            right_translations.push((a, check_morphism(&r, &self.over_a, &self.over_a)?));
            let lhs = r.then(&self.delta)?;
            let rhs = self.delta.then(&id.product(&r))?;
            delta_right_equivariant.push((a, lhs.difference(&rhs)));
        }
        Ok(NormalizerChecks {
            a0,
            translations_preserve_gamma,
            left_translations,
            right_translations,
            delta_right_equivariant,
        })
    }

    /// The action of `A₀` on `Γ` by right translations, `a ↦ R_{a⁻¹}`.
    pub fn a0_action(&self) -> Result<AutomorphismAction, RelationError> {
        let (group, members) = self.group.subgroup(&self.a0())?;
        let maps = members
            .iter()
            .map(|&a| {
                let ai = self.group.inv(a);
                self.gamma.iter().map(|&g| (g, self.group.mul(g, ai))).collect()
            })
            .collect();
        AutomorphismAction::new(&self.over_a, group, maps)
    }

    pub fn z_quotient(&self) -> Result<ZQuotient, RelationError> {
        let action = self.a0_action()?;
        let quotient = quotient_by_automorphisms(&self.over_a, &action)?;
        let pi = &quotient.projection;
        let delta_z = FiniteRelation::new(
            quotient.groupoid.elements().clone(),
            cartesian(&self.gamma, quotient.groupoid.elements()),
            self.delta.graph().iter().map(|((g1, g2), g)| {
                (
                    (*g1, pi.apply(g2).expect("projection is a map")),
                    pi.apply(g).expect("projection is a map"),
                )
            }),
        )?;
        Ok(ZQuotient { quotient, delta_z })
    }
}

/// The quotient `Γ/A₀` with the relation `δ_Z : Z ⇸ Γ × Z`.
#[derive(Clone, Debug)]
pub struct ZQuotient {
    pub quotient: Quotient,
    /// Built from the graph: `{((γ₁, π γ₂), π γ)}` over the graph of `δ`.
    pub delta_z: FiniteRelation<Id, (Id, Id)>,
}

/// Unit, inverse and multiplication identities of `δ_Z`.
#[derive(Clone, Debug)]
pub struct DeltaZIdentities {
    pub units: bool,
    pub inverse: GraphDifference<Id, (Id, Id)>,
    pub multiplication: GraphDifference<(Id, Id), (Id, Id)>,
}

impl ZQuotient {
    pub fn z_elements(&self) -> &BTreeSet<Id> {
        self.quotient.groupoid.elements()
    }

    /// `(id × π) δ πᵀ` computed by composing relations.
    pub fn delta_z_by_composition(&self, tis: &TisInstance) -> Result<FiniteRelation<Id, (Id, Id)>, RelationError> {
        let pi = &self.quotient.projection;
        let id = FiniteRelation::identity(tis.gamma.clone());
        pi.transpose().then(&tis.delta)?.then(&id.product(pi))
    }

    /// `(id × πᵀπ) δ πᵀ = δ πᵀ`.
    pub fn projection_identity(&self, tis: &TisInstance) -> Result<GraphDifference<Id, (Id, Id)>, RelationError> {
        let pi = &self.quotient.projection;
        let pit = pi.transpose();
        let h = pi.then(&pit)?;
        let id = FiniteRelation::identity(tis.gamma.clone());
        let base = pit.then(&tis.delta)?;
        Ok(base.then(&id.product(&h))?.difference(&base))
    }

    /// `(δ × id) δ_Z = (id × δ_Z) δ_Z` up to reassociation.
    pub fn coassociativity(&self, tis: &TisInstance) -> Result<GraphDifference<Id, ((Id, Id), Id)>, RelationError> {
        let id_z = FiniteRelation::identity(self.z_elements().clone());
        let id_g = FiniteRelation::identity(tis.gamma.clone());
        let left = self.delta_z.then(&tis.delta.product(&id_z))?;
        let right = self
            .delta_z
            .then(&id_g.product(&self.delta_z))?
            .then(&reassociate(&tis.gamma, &tis.gamma, self.z_elements()))?;
        Ok(left.difference(&right))
    }

    /// `δ_Z(E_Z) = A × E_Z`, `δ_Z s_Z = (s_A × s_Z) δ_Z` and
    /// `δ_Z m_Z ⊇ (m_A × m_Z)(id × flip × id)(δ_Z × δ_Z)`.
    pub fn morphism_identities(&self, tis: &TisInstance) -> Result<DeltaZIdentities, RelationError> {
        let z = &self.quotient.groupoid;
        let units = self.delta_z.image(z.units()) == cartesian(&tis.a, z.units());
        let s_a = tis.over_a.inv_relation();
        let s_z = z.inv_relation();
        let inv_left = s_z.then(&self.delta_z)?;
        let inv_right = self.delta_z.then(&s_a.product(&s_z))?;
        let mult_left = z.mult().then(&self.delta_z)?;
        let mult_right = self
            .delta_z
            .product(&self.delta_z)
            .then(&shuffle_middle(&tis.gamma, z.elements(), &tis.gamma, z.elements()))?
            .then(&tis.over_a.mult().product(z.mult()))?;
        Ok(DeltaZIdentities {
            units,
            inverse: inv_left.difference(&inv_right),
            multiplication: mult_left.difference(&mult_right),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::super::group::perm_from_cycles;
    use super::*;

    fn s3_instance(c_cycle: &[usize]) -> TisInstance {
        let g = FiniteGroup::symmetric(3);
        let a = g.subgroup_generated(&[g.id_of(&perm_from_cycles(3, &[&[1, 2]])).unwrap()]);
        let c = g.subgroup_generated(&[g.id_of(&perm_from_cycles(3, &[c_cycle])).unwrap()]);
        generate_tis_groupoid(&g, &a, &c).unwrap()
    }

    #[test]
    fn group_over_itself() {
        let g = FiniteGroup::symmetric(3);
        let t = generate_tis_groupoid(&g, &g.elements(), &BTreeSet::from([g.identity()])).unwrap();
        assert_eq!(t.over_a.units(), &g.elements());
        assert!(t.over_a.check_axioms().all_hold());
    }

    #[test]
    fn overlapping_subgroups_rejected() {
        let g = FiniteGroup::symmetric(3);
        let a = g.elements();
        let err = generate_tis_groupoid(&g, &a, &a).unwrap_err();
        assert!(matches!(err, RelationError::NonTrivialIntersection { .. }));
    }

    #[test]
    fn double_group_has_six_elements_over_a() {
        let t = s3_instance(&[1, 2, 3]);
        assert!(t.is_double_group());
        assert_eq!(t.gamma.len(), 6);
        assert!(t.over_a.check_axioms().all_hold());
        assert!(t.over_c.check_axioms().all_hold());
        assert!(t.delta_multiplicativity().unwrap().is_empty());
    }

    #[test]
    fn non_double_group_inclusion_is_strict() {
        let t = s3_instance(&[1, 3]);
        assert!(!t.is_double_group());
        assert_eq!(t.gamma.len(), 3);
        let d = t.delta_multiplicativity().unwrap();
        assert!(d.left_contains_right());
        assert!(!d.is_empty());
    }
}
