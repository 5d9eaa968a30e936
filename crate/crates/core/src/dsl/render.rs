use std::fmt::Write;

use crate::kb::KnowledgeBase;

/// Prints `kb` in canonical form: one declaration per line, symptoms, then
/// diseases, then rules, each in declaration order.
pub fn render_kb(kb: &KnowledgeBase) -> String {
    let mut out = String::new();
    for s in &kb.symptoms {
        writeln!(out, "SYMPTOM {} {}", s.id, quote(&s.display_name)).unwrap();
    }
    for d in &kb.diseases {
        let symptoms: Vec<&str> = d.symptoms.iter().map(|s| s.as_str()).collect();
        writeln!(
            out,
            "DISEASE {} {} SYMPTOMS: {} TREATMENT: {} IF_UNTREATED: {}",
            d.id,
            quote(&d.display_name),
            symptoms.join(", "),
            quote(&d.care_treatment),
            quote(&d.if_untreated)
        )
        .unwrap();
    }
    for r in &kb.rules {
        writeln!(out, "{r}").unwrap();
    }
    out
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        if matches!(c, '"' | '\\') {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
    out
}
