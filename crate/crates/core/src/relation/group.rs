//! Small permutation groups with a precomputed multiplication table.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{Id, RelationError};

/// A permutation of `0..k`, stored as its image list. Composition `a * b`
/// applies `b` first.
pub type Perm = Vec<usize>;

pub fn perm_compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&i| a[i]).collect()
}

pub fn perm_inverse(a: &[usize]) -> Perm {
    let mut inv = vec![0; a.len()];
    for (i, &j) in a.iter().enumerate() {
        inv[j] = i;
    }
    inv
}

/// Permutation from disjoint cycles written with 1-based points, e.g. `[[1, 2, 3]]`.
pub fn perm_from_cycles(degree: usize, cycles: &[&[usize]]) -> Perm {
    let mut p: Perm = (0..degree).collect();
    for cycle in cycles {
        for (k, &a) in cycle.iter().enumerate() {
            let b = cycle[(k + 1) % cycle.len()];
            p[a - 1] = b - 1;
        }
    }
    p
}

/// Finite group given by a Cayley table over ids `0..order`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteGroup {
    table: Vec<Vec<Id>>,
    identity: Id,
    inverses: Vec<Id>,
    perms: Option<Vec<Perm>>,
}

impl FiniteGroup {
    /// Group from a Cayley table; `table[a][b]` is the id of `a * b`.
    pub fn from_table(table: Vec<Vec<Id>>) -> Result<Self, RelationError> {
        let order = table.len();
        if order == 0 || table.iter().any(|row| row.len() != order) {
            return Err(RelationError::InvalidGroup("table is not square".into()));
        }
        if table.iter().flatten().any(|&c| c as usize >= order) {
            return Err(RelationError::InvalidGroup("entry out of range".into()));
        }
        let identity = (0..order)
            .find(|&e| (0..order).all(|a| table[e][a] as usize == a && table[a][e] as usize == a))
            .ok_or_else(|| RelationError::InvalidGroup("no identity".into()))? as Id;
        let mut inverses = Vec::with_capacity(order);
        for a in 0..order {
            let inv = (0..order)
                .find(|&b| table[a][b] == identity && table[b][a] == identity)
                .ok_or_else(|| RelationError::InvalidGroup(format!("element {a} has no inverse")))?;
            inverses.push(inv as Id);
        }
        for a in 0..order {
            for b in 0..order {
                for c in 0..order {
                    let left = table[table[a][b] as usize][c];
                    let right = table[a][table[b][c] as usize];
                    if left != right {
                        return Err(RelationError::InvalidGroup(format!(
                            "not associative at ({a}, {b}, {c})"
                        )));
                    }
                }
            }
        }
        Ok(Self { table, identity, inverses, perms: None })
    }

    /// Closure of a set of permutations. Element ids follow breadth-first
    /// discovery from the identity, so the identity has id 0.
    pub fn generated_by(degree: usize, generators: &[Perm]) -> Self {
        let id: Perm = (0..degree).collect();
        let mut elements = vec![id.clone()];
        let mut index: BTreeMap<Perm, usize> = BTreeMap::new();
        index.insert(id, 0);
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            for g in generators {
                let next = perm_compose(&elements[i], g);
                if !index.contains_key(&next) {
                    index.insert(next.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(next);
                }
            }
        }
        let order = elements.len();
        let table: Vec<Vec<Id>> = (0..order)
            .map(|a| {
                (0..order)
                    .map(|b| index[&perm_compose(&elements[a], &elements[b])] as Id)
                    .collect()
            })
            .collect();
        let inverses = (0..order).map(|a| index[&perm_inverse(&elements[a])] as Id).collect();
        Self { table, identity: 0, inverses, perms: Some(elements) }
    }

    pub fn symmetric(k: usize) -> Self {
        let mut gens = vec![perm_from_cycles(k, &[&[1, 2]])];
        if k > 2 {
            let cycle: Vec<usize> = (1..=k).collect();
            gens.push(perm_from_cycles(k, &[&cycle]));
        }
        Self::generated_by(k, &gens)
    }

    pub fn cyclic(m: usize) -> Self {
        let cycle: Vec<usize> = (1..=m).collect();
        Self::generated_by(m, &[perm_from_cycles(m, &[&cycle])])
    }

    pub fn order(&self) -> usize {
        self.table.len()
    }

    pub fn identity(&self) -> Id {
        self.identity
    }

    pub fn mul(&self, a: Id, b: Id) -> Id {
        self.table[a as usize][b as usize]
    }

    pub fn inv(&self, a: Id) -> Id {
        self.inverses[a as usize]
    }

    pub fn table(&self) -> &[Vec<Id>] {
        &self.table
    }

    pub fn elements(&self) -> BTreeSet<Id> {
        (0..self.order() as Id).collect()
    }

    pub fn perm(&self, a: Id) -> Option<&Perm> {
        self.perms.as_ref().map(|p| &p[a as usize])
    }

    /// Id of a permutation, if the group was built from permutations.
    pub fn id_of(&self, perm: &[usize]) -> Option<Id> {
        self.perms
            .as_ref()?
            .iter()
            .position(|p| p.as_slice() == perm)
            .map(|i| i as Id)
    }

    pub fn subgroup_generated(&self, generators: &[Id]) -> BTreeSet<Id> {
        let mut set = BTreeSet::from([self.identity]);
        let mut queue: VecDeque<Id> = VecDeque::from([self.identity]);
        while let Some(a) = queue.pop_front() {
            for &g in generators {
                let b = self.mul(a, g);
                if set.insert(b) {
                    queue.push_back(b);
                }
            }
        }
        set
    }

    /// A subgroup as a group of its own, with the ids of `self` listed in
    /// the order of the new ids.
    pub fn subgroup(&self, set: &BTreeSet<Id>) -> Result<(FiniteGroup, Vec<Id>), RelationError> {
        if !self.is_subgroup(set) {
            return Err(RelationError::InvalidGroup("set is not a subgroup".into()));
        }
        let members: Vec<Id> = set.iter().copied().collect();
        let pos: BTreeMap<Id, Id> = members.iter().enumerate().map(|(i, &g)| (g, i as Id)).collect();
        let table = members
            .iter()
            .map(|&a| members.iter().map(|&b| pos[&self.mul(a, b)]).collect())
            .collect();
        Ok((FiniteGroup::from_table(table)?, members))
    }

    pub fn is_subgroup(&self, set: &BTreeSet<Id>) -> bool {
        set.contains(&self.identity)
            && set.iter().all(|&a| set.contains(&self.inv(a)))
            && set.iter().all(|&a| set.iter().all(|&b| set.contains(&self.mul(a, b))))
    }

    /// `{g : g S g⁻¹ = S}`.
    pub fn normalizer(&self, set: &BTreeSet<Id>) -> BTreeSet<Id> {
        self.elements()
            .into_iter()
            .filter(|&g| {
                let conj: BTreeSet<Id> = set.iter().map(|&a| self.mul(self.mul(g, a), self.inv(g))).collect();
                &conj == set
            })
            .collect()
    }

    /// `a * S`.
    pub fn left_coset(&self, a: Id, set: &BTreeSet<Id>) -> BTreeSet<Id> {
        set.iter().map(|&s| self.mul(a, s)).collect()
    }

    /// `S * a`.
    pub fn right_coset(&self, set: &BTreeSet<Id>, a: Id) -> BTreeSet<Id> {
        set.iter().map(|&s| self.mul(s, a)).collect()
    }
}
