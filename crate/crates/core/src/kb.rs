//! Symptoms, disease records and the knowledge base that holds them.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::diagnosis::{treatment_rule_name, untreated_rule_name};
use crate::ident::{DiseaseId, SymptomId};
use crate::rule::{Fact, Rule};

/// Source text of the bundled maternal-care knowledge base.
pub const DEFAULT_KB_SOURCE: &str = include_str!("../data/maternal_care.kb");

/// Predicate naming a declared symptom inside rule facts, e.g. `symptom(cough)`.
pub const SYMPTOM_PREDICATE: &str = "symptom";
/// Predicate naming a declared disease inside rule facts, e.g. `disease(tb)`.
pub const DISEASE_PREDICATE: &str = "disease";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Symptom {
    pub id: SymptomId,
    pub display_name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DiseaseRecord {
    pub id: DiseaseId,
    pub display_name: String,
    /// Characteristic symptoms in declaration order.
    pub symptoms: Vec<SymptomId>,
    pub care_treatment: String,
    pub if_untreated: String,
}

impl DiseaseRecord {
    pub fn has_symptom(&self, s: &SymptomId) -> bool {
        self.symptoms.contains(s)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct KnowledgeBase {
    pub symptoms: Vec<Symptom>,
    pub diseases: Vec<DiseaseRecord>,
    pub rules: Vec<Rule>,
}

/// Which text field of a declaration a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TextField {
    DisplayName,
    CareTreatment,
    IfUntreated,
}

impl fmt::Display for TextField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TextField::DisplayName => "display name",
            TextField::CareTreatment => "treatment text",
            TextField::IfUntreated => "if-untreated text",
        })
    }
}

/// A broken knowledge-base invariant, naming the offending id.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    #[error("duplicate symptom id `{id}`")]
    DuplicateSymptom { id: String },
    #[error("duplicate disease id `{id}`")]
    DuplicateDisease { id: String },
    #[error("duplicate rule name `{id}`")]
    DuplicateRule { id: String },
    #[error("disease `{disease}` references undeclared symptom `{id}`")]
    UndeclaredSymptom { disease: String, id: String },
    #[error("disease `{disease}` lists symptom `{id}` more than once")]
    RepeatedDiseaseSymptom { disease: String, id: String },
    #[error("disease `{id}` has no symptoms")]
    NoSymptoms { id: String },
    #[error("`{id}` has an empty {field}")]
    EmptyText { id: String, field: TextField },
    #[error("`{id}` has a line break in its {field}")]
    MultilineText { id: String, field: TextField },
    #[error("rule `{rule}` references undeclared {predicate} `{id}`")]
    RuleUndeclaredId {
        rule: String,
        predicate: String,
        id: String,
    },
    #[error("rule name `{id}` is reserved for a compiled disease rule")]
    ReservedRuleName { id: String },
    #[error("rule `{id}` has an AND/OR node with fewer than two operands")]
    MalformedPremise { id: String },
    #[error("rule `{id}` has no conclusion")]
    EmptyConclusion { id: String },
    #[error("rule `{id}` concludes its own sole premise")]
    SelfLoop { id: String },
}

impl Violation {
    /// The id the violation is about.
    pub fn offending_id(&self) -> &str {
        match self {
            Violation::DuplicateSymptom { id }
            | Violation::DuplicateDisease { id }
            | Violation::DuplicateRule { id }
            | Violation::UndeclaredSymptom { id, .. }
            | Violation::RepeatedDiseaseSymptom { id, .. }
            | Violation::NoSymptoms { id }
            | Violation::EmptyText { id, .. }
            | Violation::MultilineText { id, .. }
            | Violation::RuleUndeclaredId { id, .. }
            | Violation::ReservedRuleName { id }
            | Violation::MalformedPremise { id }
            | Violation::EmptyConclusion { id }
            | Violation::SelfLoop { id } => id,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum UnknownId {
    #[error("unknown disease `{0}`")]
    Disease(DiseaseId),
    #[error("unknown symptom `{0}`")]
    Symptom(SymptomId),
}

impl KnowledgeBase {
    pub fn new(symptoms: Vec<Symptom>, diseases: Vec<DiseaseRecord>, rules: Vec<Rule>) -> Self {
        Self {
            symptoms,
            diseases,
            rules,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.symptoms.is_empty() && self.diseases.is_empty() && self.rules.is_empty()
    }

    pub fn symptom(&self, id: &str) -> Option<&Symptom> {
        self.symptoms.iter().find(|s| s.id.as_str() == id)
    }

    pub fn disease(&self, id: &str) -> Option<&DiseaseRecord> {
        self.diseases.iter().find(|d| d.id.as_str() == id)
    }

    /// Checks every structural invariant; an empty list means the KB is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();

        let mut seen = HashSet::new();
        for s in &self.symptoms {
            if !seen.insert(s.id.as_str()) {
                out.push(Violation::DuplicateSymptom {
                    id: s.id.to_string(),
                });
            }
            check_text(
                &mut out,
                s.id.as_str(),
                TextField::DisplayName,
                &s.display_name,
            );
        }
        let declared_symptoms = seen;

        let mut seen = HashSet::new();
        for d in &self.diseases {
            let id = d.id.as_str();
            if !seen.insert(id) {
                out.push(Violation::DuplicateDisease { id: id.to_owned() });
            }
            check_text(&mut out, id, TextField::DisplayName, &d.display_name);
            if d.symptoms.is_empty() {
                out.push(Violation::NoSymptoms { id: id.to_owned() });
            }
            let mut listed = HashSet::new();
            for s in &d.symptoms {
                if !declared_symptoms.contains(s.as_str()) {
                    out.push(Violation::UndeclaredSymptom {
                        disease: id.to_owned(),
                        id: s.to_string(),
                    });
                }
                if !listed.insert(s) {
                    out.push(Violation::RepeatedDiseaseSymptom {
                        disease: id.to_owned(),
                        id: s.to_string(),
                    });
                }
            }
            check_text(&mut out, id, TextField::CareTreatment, &d.care_treatment);
            check_text(&mut out, id, TextField::IfUntreated, &d.if_untreated);
        }
        let declared_diseases = seen;

        let reserved: HashSet<String> = self
            .diseases
            .iter()
            .flat_map(|d| [treatment_rule_name(&d.id), untreated_rule_name(&d.id)])
            .collect();
        let mut seen = HashSet::new();
        for r in &self.rules {
            let name = r.name.as_str();
            if !seen.insert(name) {
                out.push(Violation::DuplicateRule {
                    id: name.to_owned(),
                });
            }
            if reserved.contains(name) {
                out.push(Violation::ReservedRuleName {
                    id: name.to_owned(),
                });
            }
            if !r.premise.is_well_formed() {
                out.push(Violation::MalformedPremise {
                    id: name.to_owned(),
                });
            }
            if r.conclusion.is_empty() {
                out.push(Violation::EmptyConclusion {
                    id: name.to_owned(),
                });
            }
            if r.is_self_loop() {
                out.push(Violation::SelfLoop {
                    id: name.to_owned(),
                });
            }
            for fact in r.premise.atoms().into_iter().chain(&r.conclusion) {
                check_fact_ref(&mut out, name, fact, &declared_symptoms, &declared_diseases);
            }
        }
        out
    }

    /// 1 when `d` lists `s` among its symptoms, 0 otherwise.
    pub fn incidence(&self, d: &DiseaseId, s: &SymptomId) -> Result<u8, UnknownId> {
        let disease = self
            .disease(d.as_str())
            .ok_or_else(|| UnknownId::Disease(d.clone()))?;
        if self.symptom(s.as_str()).is_none() {
            return Err(UnknownId::Symptom(s.clone()));
        }
        Ok(u8::from(disease.has_symptom(s)))
    }

    /// The full disease × symptom incidence matrix, rows and columns in declaration order.
    pub fn incidence_matrix(&self) -> Vec<Vec<u8>> {
        self.diseases
            .iter()
            .map(|d| {
                self.symptoms
                    .iter()
                    .map(|s| u8::from(d.has_symptom(&s.id)))
                    .collect()
            })
            .collect()
    }
}

fn check_text(out: &mut Vec<Violation>, id: &str, field: TextField, text: &str) {
    if text.trim().is_empty() {
        out.push(Violation::EmptyText {
            id: id.to_owned(),
            field,
        });
    } else if text.contains(['\n', '\r']) {
        out.push(Violation::MultilineText {
            id: id.to_owned(),
            field,
        });
    }
}

fn check_fact_ref(
    out: &mut Vec<Violation>,
    rule: &str,
    fact: &Fact,
    symptoms: &HashSet<&str>,
    diseases: &HashSet<&str>,
) {
    let (predicate, arg, known) = if let Some(arg) = fact.unary_arg(SYMPTOM_PREDICATE) {
        (SYMPTOM_PREDICATE, arg, symptoms.contains(arg.as_str()))
    } else if let Some(arg) = fact.unary_arg(DISEASE_PREDICATE) {
        (DISEASE_PREDICATE, arg, diseases.contains(arg.as_str()))
    } else {
        return;
    };
    if known {
        return;
    }
    let v = Violation::RuleUndeclaredId {
        rule: rule.to_owned(),
        predicate: predicate.to_owned(),
        id: arg.to_string(),
    };
    if !out.contains(&v) {
        out.push(v);
    }
}

/// The bundled maternal-care knowledge base.
pub fn default_kb() -> KnowledgeBase {
    crate::dsl::parse_kb(DEFAULT_KB_SOURCE).expect("bundled knowledge base parses")
}
