//! Forward-chaining inference over propositional rules.
//!
//! Each cycle evaluates every rule that has not fired yet against the
//! working memory as it stood at the start of the cycle, in declaration
//! order. A rule whose premise holds fires once and is never reconsidered.
//! Saturation stops at the first cycle that adds no fact.

use std::collections::HashSet;

use indexmap::IndexSet;
use serde::Serialize;

use crate::rule::{Fact, PremiseExpr, Rule};

/// Duplicate-free set of ground facts. Iteration follows insertion order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct WorkingMemory {
    facts: IndexSet<Fact>,
}

impl WorkingMemory {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds `fact`, returning true iff it was not already present.
    pub fn assert_fact(&mut self, fact: Fact) -> bool {
        self.facts.insert(fact)
    }

    pub fn contains(&self, fact: &Fact) -> bool {
        self.facts.contains(fact)
    }

    pub fn len(&self) -> usize {
        self.facts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.facts.is_empty()
    }

    /// Facts in insertion order.
    pub fn iter(&self) -> impl Iterator<Item = &Fact> {
        self.facts.iter()
    }

    /// True when both memories hold the same facts, regardless of order.
    pub fn same_facts(&self, other: &WorkingMemory) -> bool {
        self.len() == other.len() && self.iter().all(|f| other.contains(f))
    }
}

impl FromIterator<Fact> for WorkingMemory {
    fn from_iter<I: IntoIterator<Item = Fact>>(iter: I) -> Self {
        Self {
            facts: iter.into_iter().collect(),
        }
    }
}

impl Extend<Fact> for WorkingMemory {
    fn extend<I: IntoIterator<Item = Fact>>(&mut self, iter: I) {
        self.facts.extend(iter);
    }
}

/// One productive rule firing.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiringRecord {
    /// 1-based cycle number.
    pub cycle: usize,
    pub rule_name: String,
    /// Only the facts this firing newly added.
    pub asserted: Vec<Fact>,
}

pub fn eval_premise(expr: &PremiseExpr, wm: &WorkingMemory) -> bool {
    match expr {
        PremiseExpr::Atom(f) => wm.contains(f),
        PremiseExpr::And(children) => children.iter().all(|c| eval_premise(c, wm)),
        PremiseExpr::Or(children) => children.iter().any(|c| eval_premise(c, wm)),
    }
}

/// Runs one match-fire cycle.
///
/// Rules named in `fired` are skipped; every rule that fires is added to it.
/// Returns the productive firings in declaration order.
pub fn step(
    rules: &[Rule],
    wm: &mut WorkingMemory,
    fired: &mut HashSet<String>,
    cycle: usize,
) -> Vec<FiringRecord> {
    // Match against the memory as it was when the cycle started.
    let enabled: Vec<&Rule> = rules
        .iter()
        .filter(|r| !fired.contains(r.name.as_str()) && eval_premise(&r.premise, wm))
        .collect();

    let mut records = Vec::new();
    for rule in enabled {
        fired.insert(rule.name.to_string());
        let asserted: Vec<Fact> = rule
            .conclusion
            .iter()
            .filter(|f| wm.assert_fact((*f).clone()))
            .cloned()
            .collect();
        if !asserted.is_empty() {
            records.push(FiringRecord {
                cycle,
                rule_name: rule.name.to_string(),
                asserted,
            });
        }
    }
    records
}

/// Result of saturating a working memory.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Saturation {
    pub memory: WorkingMemory,
    pub firings: Vec<FiringRecord>,
    /// True when the last cycle run added nothing.
    pub converged: bool,
    /// Number of cycles executed, including the final unproductive one.
    pub cycles: usize,
}

/// Cycle budget that always suffices: every rule fires at most once, so at
/// most `rules.len()` cycles can be productive.
pub fn default_max_cycles(rules: &[Rule]) -> usize {
    rules.len() + 1
}

/// Repeats [`step`] until a cycle adds no fact or `max_cycles` cycles have run.
pub fn run_to_fixpoint(rules: &[Rule], mut wm: WorkingMemory, max_cycles: usize) -> Saturation {
    assert!(max_cycles >= 1, "max_cycles must be at least 1");
    let mut fired = HashSet::new();
    let mut firings = Vec::new();
    let mut cycles = 0;
    let mut converged = false;
    while cycles < max_cycles {
        cycles += 1;
        let records = step(rules, &mut wm, &mut fired, cycles);
        if records.is_empty() {
            converged = true;
            break;
        }
        firings.extend(records);
    }
    Saturation {
        memory: wm,
        firings,
        converged,
        cycles,
    }
}

/// Saturates with the default cycle budget.
pub fn saturate(rules: &[Rule], wm: WorkingMemory) -> Saturation {
    run_to_fixpoint(rules, wm, default_max_cycles(rules))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse_kb;

    fn f(p: &str) -> Fact {
        Fact::parse_parts(p, &[]).unwrap()
    }

    fn sym(id: &str) -> Fact {
        Fact::unary("symptom", id).unwrap()
    }

    fn rules(text: &str) -> Vec<Rule> {
        parse_kb(text).unwrap().rules
    }

    #[test]
    fn assert_is_duplicate_free() {
        let mut wm = WorkingMemory::new();
        assert!(wm.assert_fact(sym("cough")));
        assert_eq!(wm.len(), 1);
        assert!(!wm.assert_fact(sym("cough")));
        assert_eq!(wm.len(), 1);
        assert!(wm.assert_fact(sym("fever")));
        assert_eq!(wm.len(), 2);
    }

    #[test]
    fn premise_evaluation() {
        let and = crate::dsl::parse_premise("symptom(cough) AND symptom(fever)").unwrap();
        let or = crate::dsl::parse_premise("symptom(cough) OR symptom(jaundice)").unwrap();
        let both: WorkingMemory = [sym("cough"), sym("fever")].into_iter().collect();
        let cough: WorkingMemory = [sym("cough")].into_iter().collect();
        let jaundice: WorkingMemory = [sym("jaundice")].into_iter().collect();
        assert!(eval_premise(&and, &both));
        assert!(!eval_premise(&and, &cough));
        assert!(eval_premise(&or, &jaundice));
        assert!(!eval_premise(&or, &WorkingMemory::new()));
    }

    #[test]
    fn step_fires_enabled_rule() {
        let rs = rules("RULE resp: IF symptom(cough) THEN flag(respiratory)");
        let mut wm: WorkingMemory = [sym("cough")].into_iter().collect();
        let mut fired = HashSet::new();
        let records = step(&rs, &mut wm, &mut fired, 1);
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].rule_name, "resp");
        assert_eq!(
            records[0].asserted,
            vec![Fact::unary("flag", "respiratory").unwrap()]
        );
        assert!(wm.contains(&Fact::unary("flag", "respiratory").unwrap()));

        let mut empty = WorkingMemory::new();
        assert!(step(&rs, &mut empty, &mut HashSet::new(), 1).is_empty());
        assert!(empty.is_empty());
    }

    #[test]
    fn step_matches_against_cycle_start() {
        // `second` is declared first but only becomes enabled by `first`.
        let rs = rules("RULE second: IF b() THEN c()\nRULE first: IF a() THEN b()");
        let mut wm: WorkingMemory = [f("a")].into_iter().collect();
        let mut fired = HashSet::new();

        let c1 = step(&rs, &mut wm, &mut fired, 1);
        assert_eq!(c1.len(), 1);
        assert_eq!(c1[0].rule_name, "first");
        assert!(!wm.contains(&f("c")));

        let c2 = step(&rs, &mut wm, &mut fired, 2);
        assert_eq!(c2.len(), 1);
        assert_eq!((c2[0].cycle, c2[0].rule_name.as_str()), (2, "second"));

        assert!(step(&rs, &mut wm, &mut fired, 3).is_empty());
        assert_eq!(
            wm.iter().cloned().collect::<Vec<_>>(),
            vec![f("a"), f("b"), f("c")]
        );
    }

    #[test]
    fn unproductive_firing_is_not_recorded() {
        let rs = rules("RULE again: IF a() THEN a() AND b()\nRULE noop: IF a() THEN b()");
        let mut wm: WorkingMemory = [f("a")].into_iter().collect();
        let mut fired = HashSet::new();
        let records = step(&rs, &mut wm, &mut fired, 1);
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].asserted, vec![f("b")]);
        assert!(fired.contains("noop"));
    }

    #[test]
    fn empty_rule_set_converges_in_one_cycle() {
        let wm: WorkingMemory = [f("x")].into_iter().collect();
        let sat = run_to_fixpoint(&[], wm.clone(), 1);
        assert!(sat.converged);
        assert_eq!(sat.cycles, 1);
        assert_eq!(sat.memory, wm);
    }

    #[test]
    fn chain_of_five() {
        let k = 5;
        let text: String = (1..=k)
            .map(|i| format!("RULE r{i}: IF f{}() THEN f{i}()\n", i - 1))
            .collect();
        let rs = rules(&text);
        let sat = saturate(&rs, [f("f0")].into_iter().collect());
        assert!(sat.converged);
        assert_eq!(sat.firings.len(), k);
        assert_eq!(sat.cycles, k + 1);
        let expected: WorkingMemory = (0..=k).map(|i| f(&format!("f{i}"))).collect();
        assert!(sat.memory.same_facts(&expected));

        let short = run_to_fixpoint(&rs, [f("f0")].into_iter().collect(), 3);
        assert!(!short.converged);
        assert_eq!(short.cycles, 3);
        assert_eq!(short.memory.len(), 4);
    }

    #[test]
    fn saturation_is_idempotent() {
        let rs = rules("RULE r1: IF a() OR b() THEN c()\nRULE r2: IF c() AND a() THEN d() AND e()");
        let first = saturate(&rs, [f("a")].into_iter().collect());
        let again = saturate(&rs, first.memory.clone());
        assert!(again.firings.is_empty());
        assert_eq!(again.memory, first.memory);
    }

    #[test]
    #[should_panic(expected = "max_cycles")]
    fn zero_cycle_budget_is_rejected() {
        run_to_fixpoint(&[], WorkingMemory::new(), 0);
    }
}
