//! Consultation by disease and by symptoms.
//!
//! Disease consultation compiles two productions per disease,
//! `disease(d) => has_treatment(d)` and `disease(d) => has_untreated(d)`,
//! saturates a fresh working memory seeded with the requested diseases and
//! reads the stored texts keyed by the marker facts that were derived.
//!
//! Symptom consultation scores each disease by the number of query symptoms
//! in its row of the incidence matrix, keeps diseases with at least one
//! match, ranks them by descending score then ascending id, and attaches the
//! disease-consultation payload to every suggestion.

use std::cmp::Reverse;
use std::collections::HashSet;

use indexmap::IndexMap;
use serde::Serialize;
use thiserror::Error;

use crate::engine::{saturate, FiringRecord, WorkingMemory};
use crate::ident::{DiseaseId, Ident, SymptomId};
use crate::kb::{KnowledgeBase, DISEASE_PREDICATE};
use crate::rule::{Fact, PremiseExpr, Rule};

pub const TREATMENT_MARKER: &str = "has_treatment";
pub const UNTREATED_MARKER: &str = "has_untreated";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiagnosisError {
    #[error("unknown disease id(s): {}", .0.join(", "))]
    UnknownDiseases(Vec<String>),
    #[error("unknown symptom id(s): {}", .0.join(", "))]
    UnknownSymptoms(Vec<String>),
    #[error("at least one disease id is required")]
    EmptyRequest,
}

impl DiagnosisError {
    /// Ids the request named that the knowledge base does not declare.
    pub fn offending_ids(&self) -> &[String] {
        match self {
            DiagnosisError::UnknownDiseases(ids) | DiagnosisError::UnknownSymptoms(ids) => ids,
            DiagnosisError::EmptyRequest => &[],
        }
    }
}

/// A set of symptoms posed by the user, in first-mention order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Query {
    symptoms: Vec<SymptomId>,
}

impl Query {
    pub fn new(ids: impl IntoIterator<Item = SymptomId>) -> Self {
        let mut seen = HashSet::new();
        Self {
            symptoms: ids.into_iter().filter(|s| seen.insert(s.clone())).collect(),
        }
    }

    /// Builds a query from raw tokens, naming every token `kb` does not declare.
    pub fn resolve<S: AsRef<str>>(kb: &KnowledgeBase, ids: &[S]) -> Result<Self, DiagnosisError> {
        let unknown = unknown_tokens(ids, |s| kb.symptom(s).is_some());
        if !unknown.is_empty() {
            return Err(DiagnosisError::UnknownSymptoms(unknown));
        }
        Ok(Self::new(ids.iter().map(|s| {
            kb.symptom(s.as_ref()).expect("checked above").id.clone()
        })))
    }

    pub fn symptoms(&self) -> &[SymptomId] {
        &self.symptoms
    }

    pub fn len(&self) -> usize {
        self.symptoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symptoms.is_empty()
    }

    pub fn contains(&self, s: &SymptomId) -> bool {
        self.symptoms.contains(s)
    }

    fn check(&self, kb: &KnowledgeBase) -> Result<(), DiagnosisError> {
        let unknown = unknown_tokens(&self.symptoms, |s| kb.symptom(s).is_some());
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(DiagnosisError::UnknownSymptoms(unknown))
        }
    }
}

fn unknown_tokens<S: AsRef<str>>(ids: &[S], declared: impl Fn(&str) -> bool) -> Vec<String> {
    let mut unknown: Vec<String> = Vec::new();
    for id in ids {
        let id = id.as_ref();
        if !declared(id) && !unknown.iter().any(|u| u == id) {
            unknown.push(id.to_owned());
        }
    }
    unknown
}

/// Care and untreated-consequence texts retrieved for one disease.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiseaseGuidance {
    pub disease_id: DiseaseId,
    pub display_name: String,
    pub care_treatment: String,
    pub if_untreated: String,
}

/// Per-disease match counts, in disease declaration order. Zero scores are kept.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ScoreMap(IndexMap<DiseaseId, usize>);

impl ScoreMap {
    pub fn get(&self, d: &str) -> Option<usize> {
        self.0.get(d).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&DiseaseId, usize)> {
        self.0.iter().map(|(d, &s)| (d, s))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Suggestion {
    #[serde(rename = "disease_id")]
    pub disease: DiseaseId,
    pub display_name: String,
    pub score: usize,
    /// Query symptoms in the disease's row, in the disease's symptom order.
    #[serde(rename = "matched_symptom_ids")]
    pub matched: Vec<SymptomId>,
    pub care_treatment: String,
    pub if_untreated: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConsultationResult {
    /// Descending score, ties by ascending disease id.
    pub suggestions: Vec<Suggestion>,
    #[serde(skip)]
    pub query: Query,
}

impl ConsultationResult {
    /// The highest-scoring suggestion, if any disease matched.
    pub fn top(&self) -> Option<&Suggestion> {
        self.suggestions.first()
    }
}

fn ident(s: String) -> Ident {
    Ident::new(s).expect("compiled rule names are identifiers")
}

pub fn treatment_rule_name(d: &DiseaseId) -> String {
    format!("{TREATMENT_MARKER}_{d}")
}

pub fn untreated_rule_name(d: &DiseaseId) -> String {
    format!("{UNTREATED_MARKER}_{d}")
}

fn marker(predicate: &str, d: &DiseaseId) -> Fact {
    Fact::unary(predicate, d.as_str()).expect("disease ids are identifiers")
}

/// Two retrieval productions per disease, in disease declaration order.
pub fn compile_disease_rules(kb: &KnowledgeBase) -> Vec<Rule> {
    let mut rules = Vec::with_capacity(kb.diseases.len() * 2);
    for d in &kb.diseases {
        let premise = PremiseExpr::Atom(marker(DISEASE_PREDICATE, &d.id));
        rules.push(Rule::new(
            ident(treatment_rule_name(&d.id)),
            premise.clone(),
            vec![marker(TREATMENT_MARKER, &d.id)],
        ));
        rules.push(Rule::new(
            ident(untreated_rule_name(&d.id)),
            premise,
            vec![marker(UNTREATED_MARKER, &d.id)],
        ));
    }
    rules
}

/// The rule list a consultation runs: authored rules, then compiled ones.
pub fn consultation_rules(kb: &KnowledgeBase) -> Vec<Rule> {
    let mut rules = kb.rules.clone();
    rules.extend(compile_disease_rules(kb));
    rules
}

/// Disease consultation together with the firings that produced it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TracedGuidance {
    pub results: Vec<DiseaseGuidance>,
    pub firings: Vec<FiringRecord>,
}

/// Retrieves care/treatment and untreated-consequence texts for `diseases`.
///
/// Results follow request order with duplicates collapsed. Diseases derived
/// by authored rules, if any, follow in derivation order.
pub fn consult_by_disease<S: AsRef<str>>(
    kb: &KnowledgeBase,
    diseases: &[S],
) -> Result<Vec<DiseaseGuidance>, DiagnosisError> {
    trace_consult_by_disease(kb, diseases).map(|t| t.results)
}

pub fn trace_consult_by_disease<S: AsRef<str>>(
    kb: &KnowledgeBase,
    diseases: &[S],
) -> Result<TracedGuidance, DiagnosisError> {
    if diseases.is_empty() {
        return Err(DiagnosisError::EmptyRequest);
    }
    let unknown = unknown_tokens(diseases, |d| kb.disease(d).is_some());
    if !unknown.is_empty() {
        return Err(DiagnosisError::UnknownDiseases(unknown));
    }
    let requested: Vec<&DiseaseId> = diseases
        .iter()
        .map(|d| &kb.disease(d.as_ref()).expect("checked above").id)
        .collect();
    let wm: WorkingMemory = requested
        .iter()
        .map(|d| marker(DISEASE_PREDICATE, d))
        .collect();
    Ok(retrieve(kb, &requested, wm))
}

fn retrieve(kb: &KnowledgeBase, requested: &[&DiseaseId], wm: WorkingMemory) -> TracedGuidance {
    let sat = saturate(&consultation_rules(kb), wm);
    let memory = &sat.memory;

    let derived = memory
        .iter()
        .filter_map(|f| f.unary_arg(TREATMENT_MARKER))
        .filter_map(|id| kb.disease(id.as_str()).map(|d| &d.id));
    let mut seen = HashSet::new();
    let results = requested
        .iter()
        .copied()
        .chain(derived)
        .filter(|d| seen.insert(*d))
        .filter(|d| {
            memory.contains(&marker(TREATMENT_MARKER, d))
                && memory.contains(&marker(UNTREATED_MARKER, d))
        })
        .map(|d| {
            let record = kb.disease(d.as_str()).expect("declared");
            DiseaseGuidance {
                disease_id: record.id.clone(),
                display_name: record.display_name.clone(),
                care_treatment: record.care_treatment.clone(),
                if_untreated: record.if_untreated.clone(),
            }
        })
        .collect();
    TracedGuidance {
        results,
        firings: sat.firings,
    }
}

/// Number of query symptoms each disease lists.
pub fn score(kb: &KnowledgeBase, q: &Query) -> Result<ScoreMap, DiagnosisError> {
    q.check(kb)?;
    Ok(ScoreMap(
        kb.diseases
            .iter()
            .map(|d| {
                (
                    d.id.clone(),
                    d.symptoms.iter().filter(|s| q.contains(s)).count(),
                )
            })
            .collect(),
    ))
}

/// Ranked suggestions for `q`, each carrying its disease-consultation payload.
pub fn rank(kb: &KnowledgeBase, q: &Query) -> Result<ConsultationResult, DiagnosisError> {
    let scores = score(kb, q)?;
    let mut ranked: Vec<(&DiseaseId, usize)> = scores.iter().filter(|&(_, s)| s >= 1).collect();
    ranked.sort_by(|a, b| (Reverse(a.1), a.0).cmp(&(Reverse(b.1), b.0)));

    let ids: Vec<&DiseaseId> = ranked.iter().map(|(d, _)| *d).collect();
    let wm: WorkingMemory = ids.iter().map(|d| marker(DISEASE_PREDICATE, d)).collect();
    let guidance = if ids.is_empty() {
        Vec::new()
    } else {
        retrieve(kb, &ids, wm).results
    };

    let suggestions = ranked
        .into_iter()
        .map(|(id, score)| {
            let record = kb
                .disease(id.as_str())
                .expect("scored diseases are declared");
            let payload = guidance
                .iter()
                .find(|g| &g.disease_id == id)
                .expect("every suggested disease derives both markers");
            Suggestion {
                disease: id.clone(),
                display_name: record.display_name.clone(),
                score,
                matched: record
                    .symptoms
                    .iter()
                    .filter(|s| q.contains(s))
                    .cloned()
                    .collect(),
                care_treatment: payload.care_treatment.clone(),
                if_untreated: payload.if_untreated.clone(),
            }
        })
        .collect();
    Ok(ConsultationResult {
        suggestions,
        query: q.clone(),
    })
}
