//! Default numerical thresholds. The CLI can override them per run.

/// Identities that hold to rounding: representation, Egorov, eigen-residuals.
pub const IDENTITY: f64 = 1e-9;
/// Products of several dense operators accumulate more error.
pub const HOMOMORPHISM: f64 = 1e-8;
/// Weyl-transform roundtrips.
pub const ROUNDTRIP: f64 = 1e-10;
/// Fast versus naive oscillator transform.
pub const FOT: f64 = 1e-8;
/// Gram-matrix deviation of an exported basis.
pub const GRAM: f64 = 1e-8;
/// Rank cutoff when extracting a basis from a projector image. Projector
/// columns are images of unit vectors, so this is relative to norm one.
pub const RANK: f64 = 1e-8;
