//! Exact computations with vector bundles on curves up to A¹-concordance.
//!
//! - [`bundle`]: splitting types on the projective line and their cohomology.
//! - [`transition`]: Laurent transition matrices, extension families, and splitting
//!   types recovered by section counting.
//! - [`concordance`]: canonical forms, the concordance decision, and replayable
//!   certificates ([`certificate`]).
//! - [`chow`]: Chow rings of projective bundles, graded isomorphisms and the
//!   weak-equivalence criteria.
//! - [`pic_group`]: finitely generated abelian groups standing in for Picard groups.
//! - [`cli`]: the `a1conc` command line.

pub mod bundle;
pub mod certificate;
pub mod chow;
pub mod cli;
pub mod concordance;
pub mod error;
pub mod laurent;
pub mod linalg;
pub mod parse;
pub mod pic_group;
pub mod transition;

pub use bundle::{ext1_dim, SplitBundle};
pub use certificate::{ConcordanceCertificate, Move};
pub use chow::{GradedIsoWitness, ProjBundleRing};
pub use concordance::{canonical_form, concordant, generate_certificate, verify_certificate, BundleClass};
pub use laurent::{LaurentMatrix, LaurentPoly};
pub use pic_group::{PicElement, PicGroup};
pub use transition::{build_extension, family, splitting_type, ExtClass};
