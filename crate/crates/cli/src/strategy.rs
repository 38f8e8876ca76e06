//! Tab-separated strategy files: `key<TAB>action<TAB>probability`, sorted by
//! key and then action, probabilities to 12 significant digits.

use std::collections::BTreeMap;

use pubcfr_core::Policy;

use crate::CliError;

/// Probabilities are written in scientific notation so that every value,
/// however small, carries exactly 12 significant digits.
pub fn format_probability(p: f64) -> String {
    format!("{p:.11e}")
}

pub fn write_strategy(policy: &Policy) -> String {
    let mut out = String::new();
    for (key, actions, probs) in policy.iter() {
        let mut rows: Vec<(&String, f64)> = actions.iter().zip(probs.iter().copied()).collect();
        rows.sort_by(|a, b| a.0.cmp(b.0));
        for (action, p) in rows {
            out.push_str(&format!("{key}\t{action}\t{}\n", format_probability(p)));
        }
    }
    out
}

pub fn read_strategy(text: &str) -> Result<Policy, CliError> {
    let mut grouped: BTreeMap<String, (Vec<String>, Vec<f64>)> = BTreeMap::new();
    let mut last: Option<(String, String)> = None;
    for (n, line) in text.lines().enumerate() {
        let bad = |what: &str| CliError::Invalid(format!("strategy line {}: {what}", n + 1));
        let fields: Vec<&str> = line.split('\t').collect();
        let [key, action, prob] = fields[..] else {
            return Err(bad("expected three tab-separated fields"));
        };
        let p: f64 = prob.parse().map_err(|_| bad("probability is not a number"))?;
        if !(0.0..=1.0).contains(&p) {
            return Err(bad("probability outside [0, 1]"));
        }
        let here = (key.to_string(), action.to_string());
        if last.as_ref().is_some_and(|prev| *prev >= here) {
            return Err(bad("lines are not sorted by key and action"));
        }
        let entry = grouped.entry(here.0.clone()).or_default();
        entry.0.push(here.1.clone());
        entry.1.push(p);
        last = Some(here);
    }
    let mut policy = Policy::new();
    for (key, (actions, probs)) in grouped {
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(CliError::Invalid(format!("probabilities of {key} sum to {total}")));
        }
        policy.insert(key, actions, probs);
    }
    Ok(policy)
}
