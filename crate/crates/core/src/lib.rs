//! Forward-chaining expert-system engine and maternal-care consultation.
//!
//! - [`kb`]: symptoms, disease records, validation, the bundled knowledge base
//! - [`dsl`]: the textual knowledge-base language (parser and printer)
//! - [`engine`]: working memory and saturation to a fixpoint
//! - [`diagnosis`]: disease consultation and ranked symptom consultation

pub mod diagnosis;
pub mod dsl;
pub mod engine;
pub mod ident;
pub mod kb;
pub mod rule;

pub use diagnosis::{
    compile_disease_rules, consult_by_disease, rank, score, ConsultationResult, DiagnosisError,
    DiseaseGuidance, Query, ScoreMap, Suggestion,
};
pub use dsl::{parse_kb, parse_premise, render_kb, ParseError};
pub use engine::{
    eval_premise, run_to_fixpoint, saturate, step, FiringRecord, Saturation, WorkingMemory,
};
pub use ident::{DiseaseId, Ident, InvalidIdent, SymptomId};
pub use kb::{default_kb, DiseaseRecord, KnowledgeBase, Symptom, UnknownId, Violation};
pub use rule::{Fact, PremiseExpr, Rule};
