//! Pass/fail reports shared by `verify` and `demo-paper`.

use abvar_core::lemmas::Claim;
use serde_json::{json, Map, Value};

#[derive(Clone, Debug)]
pub struct Case {
    pub label: String,
    pub seed: Option<u64>,
    pub claims: Vec<Claim>,
}

impl Case {
    pub fn pass(&self) -> bool {
        self.claims.iter().all(|c| c.pass)
    }
}

pub fn claim(name: &str, pass: bool, witnesses: &[(&str, String)]) -> Claim {
    Claim { claim: name.into(), pass, witnesses: witnesses.iter().map(|(k, v)| (k.to_string(), v.clone())).collect() }
}

pub fn claim_value(c: &Claim) -> Value {
    let w: Map<String, Value> = c.witnesses.iter().map(|(k, v)| (k.clone(), Value::String(v.clone()))).collect();
    json!({ "claim": c.claim, "pass": c.pass, "witnesses": w })
}

pub fn case_value(c: &Case) -> Value {
    json!({
        "label": c.label,
        "seed": c.seed,
        "pass": c.pass(),
        "claims": c.claims.iter().map(claim_value).collect::<Vec<_>>(),
    })
}

/// Claim names in first-seen order with pass counts.
pub fn tally(cases: &[Case]) -> Vec<(String, usize, usize)> {
    let mut out: Vec<(String, usize, usize)> = Vec::new();
    for c in cases.iter().flat_map(|c| &c.claims) {
        let i = match out.iter().position(|(n, _, _)| *n == c.claim) {
            Some(i) => i,
            None => {
                out.push((c.claim.clone(), 0, 0));
                out.len() - 1
            }
        };
        out[i].1 += c.pass as usize;
        out[i].2 += 1;
    }
    out
}

pub fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn render_cases(check: &str, cases: &[Case]) -> String {
    let mut s = format!("{check}: {} case(s)\n", cases.len());
    for (name, ok, total) in tally(cases) {
        s.push_str(&format!("  {} {name} [{ok}/{total}]\n", verdict(ok == total)));
    }
    if let Some(bad) = cases.iter().find(|c| !c.pass()) {
        s.push_str(&format!("  first failure: {}\n", bad.label));
        for c in bad.claims.iter().filter(|c| !c.pass) {
            s.push_str(&format!("    {}\n", c.claim));
            for (k, v) in &c.witnesses {
                s.push_str(&format!("      {k} = {v}\n"));
            }
        }
    } else if let [only] = cases {
        for c in &only.claims {
            for (k, v) in &c.witnesses {
                s.push_str(&format!("    {k} = {v}\n"));
            }
        }
    }
    s.push_str(&format!("result: {}\n", verdict(cases.iter().all(Case::pass))));
    s
}

pub fn cases_value(check: &str, cases: &[Case]) -> Value {
    let summary: Vec<Value> = tally(cases).into_iter().map(|(n, ok, total)| json!({ "claim": n, "passed": ok, "total": total })).collect();
    json!({
        "check": check,
        "pass": cases.iter().all(Case::pass),
        "summary": summary,
        "cases": cases.iter().map(case_value).collect::<Vec<_>>(),
    })
}
