//! Colourful Carathéodory setups: instances, hypothesis checks, the face
//! enumeration solver, the covering-scheme objects and the lemma checks.

pub mod covering;
pub mod lemmas;
pub mod solve;
pub mod variant;

pub use covering::{
    build_z, build_z_for, colorful_transversals, covering_check, covering_check_for, meshulam_check_for,
    transversal_to_selection, CoverReport, CoveringZ, MeshulamReport,
};
pub use lemmas::{global_rows, lemma_suite, subset_rows, LemmaRow, SuiteOptions};
pub use solve::{solve, verify_certificate};
pub use variant::{check_hypotheses, Certificate, HypothesisReport, Instance, Variant, VariantTag};
