//! Sample inputs for the CLI commands.

/// The symmetric group on three letters as a one-object groupoid.
pub const S3_GROUPOID: &str = include_str!("../../fixtures/s3_groupoid.json");
/// Conjugation action of S3 on itself.
pub const S3_INNER_ACTION: &str = include_str!("../../fixtures/s3_inner_action.json");
/// Trivial action on the S3 groupoid.
pub const TRIVIAL_ACTION: &str = include_str!("../../fixtures/trivial_action.json");
/// Twisted associated bundle groupoid with two base orbits.
pub const BUNDLE_GROUPOID: &str = include_str!("../../fixtures/bundle_groupoid.json");
pub const BUNDLE_ACTION: &str = include_str!("../../fixtures/bundle_action.json");
/// A random element of SO0(1,4).
pub const LORENTZ_MATRIX: &str = include_str!("../../fixtures/lorentz_matrix.json");
