//! The `quotient` and `decompose` commands as library functions.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::error::GeometryError;
use crate::linalg::Matrix;
use crate::lorentz::{embed_b, embed_c, iwasawa_bc, iwasawa_cb, BoostC, LorentzElement, Tolerances};
use crate::relation::{
    quotient_by_automorphisms, AutomorphismAction, FiniteGroupoid, GroupoidJson, Id, InverseProductWitness,
    RelationError,
};

#[derive(Debug, Error)]
pub enum CommandError {
    #[error("invalid input: {0}")]
    Relation(#[from] RelationError),
    #[error("invalid matrix: {0}")]
    Geometry(#[from] GeometryError),
    #[error("malformed matrix JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("matrix rows have unequal lengths")]
    RaggedMatrix,
}

/// Result of the quotient command. A violation of the unit-fixing hypothesis
/// is a regular outcome carrying its witness.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum QuotientOutcome {
    Quotient {
        groupoid: GroupoidJson,
        /// Orbit label to its members.
        orbits: BTreeMap<Id, Vec<Id>>,
        transpose_is_morphism: bool,
        transpose_is_monomorphism: bool,
    },
    Violation {
        kind: &'static str,
        message: String,
        witness: InverseProductWitness,
    },
}

impl QuotientOutcome {
    pub fn is_violation(&self) -> bool {
        matches!(self, QuotientOutcome::Violation { .. })
    }
}

/// Quotient of the groupoid in `groupoid_text` by the action in `action_text`,
/// both in the finite-groupoid JSON formats.
pub fn quotient_command(groupoid_text: &str, action_text: &str) -> Result<QuotientOutcome, CommandError> {
    let groupoid = FiniteGroupoid::from_json_str(groupoid_text)?;
    let action = AutomorphismAction::from_json_str(&groupoid, action_text)?;
    match quotient_by_automorphisms(&groupoid, &action) {
        Ok(q) => Ok(QuotientOutcome::Quotient {
            groupoid: q.groupoid.to_json(),
            orbits: q.orbits.iter().map(|(&k, v)| (k, v.iter().copied().collect())).collect(),
            transpose_is_morphism: q.transpose_is_morphism(&groupoid)?.holds(),
            transpose_is_monomorphism: q.transpose_is_monomorphism(&groupoid),
        }),
        Err(RelationError::InverseProductNotUnit(witness)) => Ok(QuotientOutcome::Violation {
            kind: "inverse-product-not-unit",
            message: RelationError::InverseProductNotUnit(witness.clone()).to_string(),
            witness: *witness,
        }),
        Err(e) => Err(e.into()),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoostJson {
    pub s: f64,
    pub y: Vec<f64>,
}

impl From<&BoostC> for BoostJson {
    fn from(c: &BoostC) -> Self {
        Self { s: c.s, y: c.y.iter().copied().collect() }
    }
}

/// Both factorizations of a Lorentz matrix with their reconstruction residuals.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub n: usize,
    /// `g = b · c`.
    pub rotation_left: Vec<Vec<f64>>,
    pub boost_right: BoostJson,
    /// `g = c · b`.
    pub boost_left: BoostJson,
    pub rotation_right: Vec<Vec<f64>>,
    /// `‖g − bc‖_F / max(1, ‖g‖_F)`.
    pub residual_bc: f64,
    pub residual_cb: f64,
}

pub(crate) fn rows(m: &Matrix) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

/// Factors the row-major matrix in `matrix_text`.
pub fn decompose_command(matrix_text: &str, tol: &Tolerances) -> Result<Decomposition, CommandError> {
    let raw: Vec<Vec<f64>> = serde_json::from_str(matrix_text)?;
    let d = raw.len();
    if raw.iter().any(|r| r.len() != d) {
        return Err(CommandError::RaggedMatrix);
    }
    let g = LorentzElement::new(Matrix::from_fn(d, d, |i, j| raw[i][j]), tol.orth)?;
    let (b_left, c_right) = iwasawa_bc(&g, tol)?;
    let (c_left, b_right) = iwasawa_cb(&g, tol)?;
    let scale = g.matrix().norm().max(1.0);
    let residual = |x: &LorentzElement| x.distance(&g) / scale;
    Ok(Decomposition {
        n: g.n(),
        rotation_left: rows(b_left.matrix()),
        boost_right: (&c_right).into(),
        boost_left: (&c_left).into(),
        rotation_right: rows(b_right.matrix()),
        residual_bc: residual(&embed_b(&b_left).mul(&embed_c(&c_right))),
        residual_cb: residual(&embed_c(&c_left).mul(&embed_b(&b_right))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::fixtures;

    #[test]
    fn trivial_action_reproduces_input() {
        let out = quotient_command(fixtures::S3_GROUPOID, fixtures::TRIVIAL_ACTION).unwrap();
        let QuotientOutcome::Quotient { groupoid, orbits, transpose_is_morphism, transpose_is_monomorphism } = out else {
            panic!("expected a quotient");
        };
        let input: GroupoidJson = serde_json::from_str(fixtures::S3_GROUPOID).unwrap();
        assert_eq!(groupoid.elements, input.elements);
        assert_eq!(groupoid.mult.len(), input.mult.len());
        assert!(orbits.values().all(|m| m.len() == 1));
        assert!(transpose_is_morphism && transpose_is_monomorphism);
    }

    #[test]
    fn s3_conjugation_reports_witness() {
        let out = quotient_command(fixtures::S3_GROUPOID, fixtures::S3_INNER_ACTION).unwrap();
        assert!(out.is_violation());
        let json = serde_json::to_value(&out).unwrap();
        assert_eq!(json["status"], "violation");
        assert_eq!(json["witness"]["triple"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn bundle_quotient_has_two_units() {
        let out = quotient_command(fixtures::BUNDLE_GROUPOID, fixtures::BUNDLE_ACTION).unwrap();
        let QuotientOutcome::Quotient { groupoid, .. } = out else { panic!("expected a quotient") };
        assert_eq!(groupoid.units.len(), 2);
    }

    #[test]
    fn decompose_identity_and_fixture() {
        let tol = Tolerances::default();
        let id = decompose_command("[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]", &tol).unwrap();
        assert_eq!(id.residual_bc, 0.0);
        assert_eq!(id.boost_left.s, 1.0);
        let d = decompose_command(fixtures::LORENTZ_MATRIX, &tol).unwrap();
        assert!(d.residual_bc < 1e-12 && d.residual_cb < 1e-12);
    }

    #[test]
    fn decompose_rejects_non_lorentz() {
        let err = decompose_command("[[2,0,0],[0,1,0],[0,0,1]]", &Tolerances::default()).unwrap_err();
        assert!(err.to_string().contains("metric preservation"), "{err}");
        assert!(matches!(decompose_command("[[1,0],[0]]", &Tolerances::default()), Err(CommandError::RaggedMatrix)));
    }
}
