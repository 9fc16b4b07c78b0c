//! Exact relation calculus on finite sets and finite groupoids.

mod finite;
pub mod generators;
mod group;
mod groupoid;
mod quotient;
mod tis;

use thiserror::Error;

pub use finite::{cartesian, compose, diagonal, flip, reassociate, shuffle_middle, FiniteRelation, GraphDifference};
pub use group::{perm_compose, perm_from_cycles, perm_inverse, FiniteGroup, Perm};
pub use groupoid::{
    check_morphism, is_monomorphism, is_relational_morphism, kernel, AxiomCheck, AxiomReport, AxiomWitness,
    FiniteGroupoid, GroupoidAxiom, GroupoidJson, MorphismCheck, EXHAUSTIVE_LIMIT,
};
pub use quotient::{
    check_unit_fixing_condition, quotient_by_automorphisms, ActionJson, AutomorphismAction, InverseProductWitness,
    LiftingIdentities, Quotient, UnitFixingConditions,
};
pub use tis::{generate_tis_groupoid, DeltaCompatibility, DeltaZIdentities, Factors, NormalizerChecks, TisInstance, ZQuotient};

/// Element identifier of a finite set.
pub type Id = u32;

#[derive(Debug, Error)]
pub enum RelationError {
    #[error("set mismatch: {context}")]
    SetMismatch { context: &'static str },
    #[error("pair ({left}, {right}) lies outside target × source")]
    PairOutOfRange { left: String, right: String },
    #[error("malformed groupoid: {0}")]
    Malformed(String),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("subgroups intersect nontrivially at element {element}")]
    NonTrivialIntersection { element: Id },
    #[error("action of group element {element} is not by automorphisms: {reason}")]
    ActionNotByAutomorphisms { element: Id, reason: String },
    #[error(
        "orbit {} times its inverse orbit {} meets the non-unit orbit {}",
        .0.orbit, .0.inverse_orbit, .0.product_orbit
    )]
    InverseProductNotUnit(Box<InverseProductWitness>),
    #[error("quotient fails {axiom}: {detail}")]
    QuotientAxiomFailure { axiom: &'static str, detail: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
