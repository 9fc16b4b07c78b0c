//! Relations between finite sets, stored as graphs of `(target, source)` pairs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Debug;

use super::RelationError;

/// A relation `h : X ⇸ Y`. The graph lists pairs `(y, x)`, matching the
/// convention that `y` is related to `x` when `(y, x)` belongs to the graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteRelation<X: Ord, Y: Ord> {
    source: BTreeSet<X>,
    target: BTreeSet<Y>,
    graph: BTreeSet<(Y, X)>,
}

/// Difference between two relations with the same source and target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphDifference<X, Y> {
    pub only_left: Vec<(Y, X)>,
    pub only_right: Vec<(Y, X)>,
}

impl<X, Y> GraphDifference<X, Y> {
    pub fn is_empty(&self) -> bool {
        self.only_left.is_empty() && self.only_right.is_empty()
    }

    /// True when every pair of the right-hand relation is in the left-hand one.
    pub fn left_contains_right(&self) -> bool {
        self.only_right.is_empty()
    }
}

impl<X: Ord + Clone + Debug, Y: Ord + Clone + Debug> FiniteRelation<X, Y> {
    pub fn new(
        source: BTreeSet<X>,
        target: BTreeSet<Y>,
        graph: impl IntoIterator<Item = (Y, X)>,
    ) -> Result<Self, RelationError> {
        let graph: BTreeSet<(Y, X)> = graph.into_iter().collect();
        if let Some((y, x)) = graph
            .iter()
            .find(|(y, x)| !source.contains(x) || !target.contains(y))
        {
            return Err(RelationError::PairOutOfRange {
                left: format!("{y:?}"),
                right: format!("{x:?}"),
            });
        }
        Ok(Self { source, target, graph })
    }

    pub fn empty(source: BTreeSet<X>, target: BTreeSet<Y>) -> Self {
        Self { source, target, graph: BTreeSet::new() }
    }

    /// Graph of a map `f : X → Y`.
    pub fn from_fn(
        source: BTreeSet<X>,
        target: BTreeSet<Y>,
        f: impl Fn(&X) -> Y,
    ) -> Result<Self, RelationError> {
        let graph: Vec<(Y, X)> = source.iter().map(|x| (f(x), x.clone())).collect();
        Self::new(source, target, graph)
    }

    /// Graph of a partial map; `None` leaves the element outside the domain.
    pub fn from_partial_fn(
        source: BTreeSet<X>,
        target: BTreeSet<Y>,
        f: impl Fn(&X) -> Option<Y>,
    ) -> Result<Self, RelationError> {
        let graph: Vec<(Y, X)> = source
            .iter()
            .filter_map(|x| f(x).map(|y| (y, x.clone())))
            .collect();
        Self::new(source, target, graph)
    }

    pub fn source(&self) -> &BTreeSet<X> {
        &self.source
    }

    pub fn target(&self) -> &BTreeSet<Y> {
        &self.target
    }

    pub fn graph(&self) -> &BTreeSet<(Y, X)> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    pub fn contains(&self, y: &Y, x: &X) -> bool {
        self.graph.contains(&(y.clone(), x.clone()))
    }

    /// `{(x, y) : (y, x) ∈ h}`.
    pub fn transpose(&self) -> FiniteRelation<Y, X> {
        FiniteRelation {
            source: self.target.clone(),
            target: self.source.clone(),
            graph: self.graph.iter().map(|(y, x)| (x.clone(), y.clone())).collect(),
        }
    }

    /// `q ∘ self` for `self : X ⇸ Y` and `q : Y ⇸ Z`.
    pub fn then<Z: Ord + Clone + Debug>(
        &self,
        q: &FiniteRelation<Y, Z>,
    ) -> Result<FiniteRelation<X, Z>, RelationError> {
        if self.target != q.source {
            return Err(RelationError::SetMismatch {
                context: "composition: target of the first relation differs from source of the second",
            });
        }
        let mut by_source: BTreeMap<&Y, Vec<&Z>> = BTreeMap::new();
        for (z, y) in &q.graph {
            by_source.entry(y).or_default().push(z);
        }
        let mut graph = BTreeSet::new();
        for (y, x) in &self.graph {
            if let Some(zs) = by_source.get(y) {
                for z in zs {
                    graph.insert(((*z).clone(), x.clone()));
                }
            }
        }
        Ok(FiniteRelation {
            source: self.source.clone(),
            target: q.target.clone(),
            graph,
        })
    }

    /// Cartesian product `self × other : X × X' ⇸ Y × Y'`.
    pub fn product<X2: Ord + Clone + Debug, Y2: Ord + Clone + Debug>(
        &self,
        other: &FiniteRelation<X2, Y2>,
    ) -> FiniteRelation<(X, X2), (Y, Y2)> {
        let source = cartesian(&self.source, &other.source);
        let target = cartesian(&self.target, &other.target);
        let mut graph = BTreeSet::new();
        for (y1, x1) in &self.graph {
            for (y2, x2) in &other.graph {
                graph.insert(((y1.clone(), y2.clone()), (x1.clone(), x2.clone())));
            }
        }
        FiniteRelation { source, target, graph }
    }

    /// `{y : (y, x) ∈ h for some x ∈ set}`.
    pub fn image(&self, set: &BTreeSet<X>) -> BTreeSet<Y> {
        self.graph
            .iter()
            .filter(|(_, x)| set.contains(x))
            .map(|(y, _)| y.clone())
            .collect()
    }

    /// Elements of the source related to something.
    pub fn domain(&self) -> BTreeSet<X> {
        self.graph.iter().map(|(_, x)| x.clone()).collect()
    }

    pub fn range(&self) -> BTreeSet<Y> {
        self.graph.iter().map(|(y, _)| y.clone()).collect()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        self.graph.is_subset(&other.graph)
    }

    pub fn union(&self, other: &Self) -> Result<Self, RelationError> {
        self.same_sets(other)?;
        Ok(Self {
            source: self.source.clone(),
            target: self.target.clone(),
            graph: self.graph.union(&other.graph).cloned().collect(),
        })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self, RelationError> {
        self.same_sets(other)?;
        Ok(Self {
            source: self.source.clone(),
            target: self.target.clone(),
            graph: self.graph.intersection(&other.graph).cloned().collect(),
        })
    }

    /// Pairs present in exactly one of the two graphs.
    pub fn difference(&self, other: &Self) -> GraphDifference<X, Y> {
        GraphDifference {
            only_left: self.graph.difference(&other.graph).cloned().collect(),
            only_right: other.graph.difference(&self.graph).cloned().collect(),
        }
    }

    /// True when every element of the source is related to exactly one element.
    pub fn is_map(&self) -> bool {
        let mut counts: BTreeMap<&X, usize> = BTreeMap::new();
        for (_, x) in &self.graph {
            *counts.entry(x).or_default() += 1;
        }
        counts.len() == self.source.len() && counts.values().all(|&c| c == 1)
    }

    /// Value of a relation that is single valued at `x`.
    pub fn apply(&self, x: &X) -> Option<Y> {
        let mut it = self.graph.iter().filter(|(_, x2)| x2 == x);
        let first = it.next()?;
        if it.next().is_some() {
            return None;
        }
        Some(first.0.clone())
    }

    /// Relabel the source through a bijection.
    pub fn map_source<X2: Ord + Clone + Debug>(
        &self,
        source: BTreeSet<X2>,
        f: impl Fn(&X) -> X2,
    ) -> Result<FiniteRelation<X2, Y>, RelationError> {
        FiniteRelation::new(
            source,
            self.target.clone(),
            self.graph.iter().map(|(y, x)| (y.clone(), f(x))),
        )
    }

    /// Relabel the target through a bijection.
    pub fn map_target<Y2: Ord + Clone + Debug>(
        &self,
        target: BTreeSet<Y2>,
        f: impl Fn(&Y) -> Y2,
    ) -> Result<FiniteRelation<X, Y2>, RelationError> {
        FiniteRelation::new(
            self.source.clone(),
            target,
            self.graph.iter().map(|(y, x)| (f(y), x.clone())),
        )
    }

    fn same_sets(&self, other: &Self) -> Result<(), RelationError> {
        if self.source != other.source || self.target != other.target {
            return Err(RelationError::SetMismatch {
                context: "relations have different source or target",
            });
        }
        Ok(())
    }
}

impl<X: Ord + Clone + Debug> FiniteRelation<X, X> {
    pub fn identity(set: BTreeSet<X>) -> Self {
        let graph = set.iter().map(|x| (x.clone(), x.clone())).collect();
        Self { source: set.clone(), target: set, graph }
    }

    /// Equivalence relation test in relational form: `D(h) = X` and `h = hᵀh`.
    pub fn is_equivalence(&self) -> bool {
        if self.domain() != self.source {
            return false;
        }
        match self.then(&self.transpose()) {
            Ok(composed) => composed.graph == self.graph,
            Err(_) => false,
        }
    }

    /// Equivalence relation test from reflexivity, symmetry and transitivity.
    pub fn is_equivalence_elementwise(&self) -> bool {
        let reflexive = self.source.iter().all(|x| self.contains(x, x));
        let symmetric = self.graph.iter().all(|(y, x)| self.contains(x, y));
        let transitive = self.graph.iter().all(|(b, a)| {
            self.graph
                .iter()
                .filter(|(_, b2)| b2 == b)
                .all(|(c, _)| self.contains(c, a))
        });
        reflexive && symmetric && transitive
    }
}

pub fn cartesian<A: Ord + Clone, B: Ord + Clone>(a: &BTreeSet<A>, b: &BTreeSet<B>) -> BTreeSet<(A, B)> {
    let mut out = BTreeSet::new();
    for x in a {
        for y in b {
            out.insert((x.clone(), y.clone()));
        }
    }
    out
}

/// `rel_compose(r, q) = q ∘ r`.
pub fn compose<X, Y, Z>(
    r: &FiniteRelation<X, Y>,
    q: &FiniteRelation<Y, Z>,
) -> Result<FiniteRelation<X, Z>, RelationError>
where
    X: Ord + Clone + Debug,
    Y: Ord + Clone + Debug,
    Z: Ord + Clone + Debug,
{
    r.then(q)
}

/// `X × (Y × Z) → (X × Y) × Z`.
pub fn reassociate<X, Y, Z>(
    x: &BTreeSet<X>,
    y: &BTreeSet<Y>,
    z: &BTreeSet<Z>,
) -> FiniteRelation<(X, (Y, Z)), ((X, Y), Z)>
where
    X: Ord + Clone + Debug,
    Y: Ord + Clone + Debug,
    Z: Ord + Clone + Debug,
{
    let source = cartesian(x, &cartesian(y, z));
    let target = cartesian(&cartesian(x, y), z);
    let graph = source
        .iter()
        .map(|(a, (b, c))| (((a.clone(), b.clone()), c.clone()), (a.clone(), (b.clone(), c.clone()))))
        .collect();
    FiniteRelation { source, target, graph }
}

/// `X × Y → Y × X`.
pub fn flip<X, Y>(x: &BTreeSet<X>, y: &BTreeSet<Y>) -> FiniteRelation<(X, Y), (Y, X)>
where
    X: Ord + Clone + Debug,
    Y: Ord + Clone + Debug,
{
    let source = cartesian(x, y);
    let target = cartesian(y, x);
    let graph = source
        .iter()
        .map(|(a, b)| ((b.clone(), a.clone()), (a.clone(), b.clone())))
        .collect();
    FiniteRelation { source, target, graph }
}

/// `(A × B) × (C × D) → (A × C) × (B × D)`.
pub fn shuffle_middle<A, B, C, D>(
    a: &BTreeSet<A>,
    b: &BTreeSet<B>,
    c: &BTreeSet<C>,
    d: &BTreeSet<D>,
) -> FiniteRelation<((A, B), (C, D)), ((A, C), (B, D))>
where
    A: Ord + Clone + Debug,
    B: Ord + Clone + Debug,
    C: Ord + Clone + Debug,
    D: Ord + Clone + Debug,
{
    let source = cartesian(&cartesian(a, b), &cartesian(c, d));
    let target = cartesian(&cartesian(a, c), &cartesian(b, d));
    let graph = source
        .iter()
        .map(|((x, y), (z, w))| (((x.clone(), z.clone()), (y.clone(), w.clone())), ((x.clone(), y.clone()), (z.clone(), w.clone()))))
        .collect();
    FiniteRelation { source, target, graph }
}

/// Diagonal map `X → X × X`.
pub fn diagonal<X: Ord + Clone + Debug>(x: &BTreeSet<X>) -> FiniteRelation<X, (X, X)> {
    let graph = x.iter().map(|a| ((a.clone(), a.clone()), a.clone())).collect();
    FiniteRelation { source: x.clone(), target: cartesian(x, x), graph }
}
