//! Random instance generators and brute-force oracles shared by the
//! property suites and the acceptance suite.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};

use mates_core::{
    DiseaseId, DiseaseRecord, Fact, Ident, KnowledgeBase, PremiseExpr, Rule, Symptom, SymptomId,
};
use rand::seq::SliceRandom;
use rand::Rng;

const TEXT_POOL: &[char] = &[
    'a', 'b', 'E', 'z', ' ', ' ', '"', '\\', '#', ':', ',', '(', ')', '/', '-', '.', 'é', 'ß',
    '中', '1', '\t',
];

pub fn random_ident(rng: &mut impl Rng, prefix: &str) -> String {
    let len = rng.gen_range(0..6);
    let tail: String = (0..len)
        .map(|_| *b"abcxyz019_".choose(rng).unwrap() as char)
        .collect();
    format!("{prefix}{tail}")
}

/// Nonempty single-line text that exercises quoting and escaping.
pub fn random_text(rng: &mut impl Rng) -> String {
    let len = rng.gen_range(0..24);
    let mut s = String::from(*["A", "x", "Ü", "9"].choose(rng).unwrap());
    s.extend((0..len).map(|_| *TEXT_POOL.choose(rng).unwrap()));
    s
}

fn unique_idents(rng: &mut impl Rng, prefix: &str, n: usize) -> Vec<String> {
    let mut seen = HashSet::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let id = random_ident(rng, prefix);
        if seen.insert(id.clone()) {
            out.push(id);
        }
    }
    out
}

pub struct KbShape {
    pub max_diseases: usize,
    pub max_symptoms: usize,
    pub max_rules: usize,
}

/// A knowledge base that passes validation. Incidence density is drawn per KB.
pub fn random_kb(rng: &mut impl Rng, shape: &KbShape) -> KnowledgeBase {
    let n_symptoms = rng.gen_range(1..=shape.max_symptoms);
    let n_diseases = rng.gen_range(0..=shape.max_diseases);
    let density: f64 = rng.gen_range(0.05..0.6);

    let symptoms: Vec<Symptom> = unique_idents(rng, "s", n_symptoms)
        .into_iter()
        .map(|id| Symptom {
            id: SymptomId::new(id).unwrap(),
            display_name: random_text(rng),
        })
        .collect();

    let diseases: Vec<DiseaseRecord> = unique_idents(rng, "d", n_diseases)
        .into_iter()
        .map(|id| {
            let mut row: Vec<SymptomId> = symptoms
                .iter()
                .filter(|_| rng.gen_bool(density))
                .map(|s| s.id.clone())
                .collect();
            if row.is_empty() {
                row.push(symptoms.choose(rng).unwrap().id.clone());
            }
            row.shuffle(rng);
            DiseaseRecord {
                id: DiseaseId::new(id).unwrap(),
                display_name: random_text(rng),
                symptoms: row,
                care_treatment: random_text(rng),
                if_untreated: random_text(rng),
            }
        })
        .collect();

    let mut kb = KnowledgeBase::new(symptoms, diseases, Vec::new());
    let n_rules = rng.gen_range(0..=shape.max_rules);
    let names = unique_idents(rng, "r", n_rules);
    for name in names {
        loop {
            let rule = Rule::new(
                Ident::new(name.clone()).unwrap(),
                random_premise(rng, &kb, 3),
                (0..rng.gen_range(1..=3))
                    .map(|_| random_kb_fact(rng, &kb))
                    .collect(),
            );
            if !rule.is_self_loop() {
                kb.rules.push(rule);
                break;
            }
        }
    }
    kb
}

fn random_kb_fact(rng: &mut impl Rng, kb: &KnowledgeBase) -> Fact {
    match rng.gen_range(0..4) {
        0 if !kb.diseases.is_empty() => {
            Fact::unary("disease", kb.diseases.choose(rng).unwrap().id.as_str()).unwrap()
        }
        0 | 1 => Fact::unary("symptom", kb.symptoms.choose(rng).unwrap().id.as_str()).unwrap(),
        2 => Fact::parse_parts(&random_ident(rng, "p"), &[]).unwrap(),
        _ => {
            let args: Vec<String> = (0..rng.gen_range(1..=3))
                .map(|_| random_ident(rng, "v"))
                .collect();
            let args: Vec<&str> = args.iter().map(String::as_str).collect();
            Fact::parse_parts(&random_ident(rng, "q"), &args).unwrap()
        }
    }
}

fn random_premise(rng: &mut impl Rng, kb: &KnowledgeBase, depth: usize) -> PremiseExpr {
    if depth == 0 || rng.gen_bool(0.4) {
        return PremiseExpr::Atom(random_kb_fact(rng, kb));
    }
    let children = (0..rng.gen_range(2..=3))
        .map(|_| random_premise(rng, kb, depth - 1))
        .collect();
    if rng.gen_bool(0.5) {
        PremiseExpr::And(children)
    } else {
        PremiseExpr::Or(children)
    }
}

/// Random subset of the declared symptoms, possibly empty.
pub fn random_query(rng: &mut impl Rng, kb: &KnowledgeBase) -> Vec<String> {
    let p: f64 = rng.gen_range(0.0..0.5);
    let mut q: Vec<String> = kb
        .symptoms
        .iter()
        .filter(|_| rng.gen_bool(p))
        .map(|s| s.id.to_string())
        .collect();
    q.shuffle(rng);
    q
}

/// Positive propositional rules over facts `f0() .. f{n-1}()` and a seed set.
pub fn random_rule_set(
    rng: &mut impl Rng,
    max_rules: usize,
    max_facts: usize,
) -> (Vec<Rule>, Vec<Fact>) {
    let n_facts = rng.gen_range(1..=max_facts);
    let fact = |i: usize| Fact::parse_parts(&format!("f{i}"), &[]).unwrap();
    let n_rules = rng.gen_range(0..=max_rules);
    let rules = (0..n_rules)
        .map(|i| {
            let premise = random_prop_premise(rng, n_facts, 3, &fact);
            let conclusion = (0..rng.gen_range(1..=3))
                .map(|_| fact(rng.gen_range(0..n_facts)))
                .collect();
            Rule::new(Ident::new(format!("r{i}")).unwrap(), premise, conclusion)
        })
        .collect();
    let seed = (0..rng.gen_range(0..=n_facts.min(8)))
        .map(|_| fact(rng.gen_range(0..n_facts)))
        .collect();
    (rules, seed)
}

fn random_prop_premise(
    rng: &mut impl Rng,
    n_facts: usize,
    depth: usize,
    fact: &impl Fn(usize) -> Fact,
) -> PremiseExpr {
    if depth == 0 || rng.gen_bool(0.45) {
        return PremiseExpr::Atom(fact(rng.gen_range(0..n_facts)));
    }
    let children = (0..rng.gen_range(2..=3))
        .map(|_| random_prop_premise(rng, n_facts, depth - 1, fact))
        .collect();
    if rng.gen_bool(0.6) {
        PremiseExpr::And(children)
    } else {
        PremiseExpr::Or(children)
    }
}

// ---------------------------------------------------------------------------
// Oracles. None of these call into the engine or diagnosis modules.

/// Match count per disease by a double loop over the incidence matrix.
pub fn oracle_scores(kb: &KnowledgeBase, query: &[String]) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for d in &kb.diseases {
        let mut total = 0;
        for s in &kb.symptoms {
            let has = d.symptoms.iter().any(|x| x.as_str() == s.id.as_str());
            let asked = query.iter().any(|q| q == s.id.as_str());
            if has && asked {
                total += 1;
            }
        }
        out.push((d.id.to_string(), total));
    }
    out
}

/// Nonzero oracle scores, descending, ties by ascending id.
pub fn oracle_rank(kb: &KnowledgeBase, query: &[String]) -> Vec<(String, usize)> {
    let mut ranked: Vec<(String, usize)> = oracle_scores(kb, query)
        .into_iter()
        .filter(|(_, s)| *s > 0)
        .collect();
    ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    ranked
}

fn holds(expr: &PremiseExpr, facts: &BTreeSet<Fact>) -> bool {
    match expr {
        PremiseExpr::Atom(f) => facts.contains(f),
        PremiseExpr::And(cs) => cs.iter().all(|c| holds(c, facts)),
        PremiseExpr::Or(cs) => cs.iter().any(|c| holds(c, facts)),
    }
}

/// Least fixpoint by naive iteration: apply every rule until nothing changes.
pub fn oracle_fixpoint(rules: &[Rule], seed: &[Fact]) -> BTreeSet<Fact> {
    let mut facts: BTreeSet<Fact> = seed.iter().cloned().collect();
    loop {
        let before = facts.len();
        for r in rules {
            if holds(&r.premise, &facts) {
                facts.extend(r.conclusion.iter().cloned());
            }
        }
        if facts.len() == before {
            return facts;
        }
    }
}
