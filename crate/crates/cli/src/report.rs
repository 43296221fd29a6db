//! Machine-readable report documents and their text renderings.
//!
//! Field order in the structs is the key order of the JSON output.

use std::fmt::Write as _;

use beew::fit::FitReport;
use beew::gof::{KsResult, KsTarget, LrtResult};
use beew::FamilyId;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Parameter {
    pub name: String,
    pub estimate: f64,
    pub se: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterValue {
    pub name: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Criteria {
    pub k: usize,
    pub aic: f64,
    pub aicc: f64,
    pub bic: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsEntry {
    pub target: String,
    pub statistic: f64,
    pub p_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LrtEntry {
    pub base: String,
    pub full: String,
    pub statistic: f64,
    pub df: u32,
    pub p_value: f64,
    /// The full fit collapsed onto the base model; the chi-square reference
    /// may not apply.
    pub boundary: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmSummary {
    pub iterations: usize,
    pub converged: bool,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub initial_loglik: f64,
    pub final_loglik: f64,
    /// Observed log-likelihood after every iteration, starting value first.
    pub trace: Vec<f64>,
}

/// Result of fitting or assessing one model on one dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub command: String,
    pub model: String,
    pub model_name: String,
    pub data: Option<String>,
    pub n: usize,
    pub ties: usize,
    pub tie_eps: f64,
    pub rescale: f64,
    pub parameters: Vec<Parameter>,
    pub loglik: f64,
    pub criteria: Option<Criteria>,
    pub ks: Vec<KsEntry>,
    pub lrt: Option<LrtEntry>,
    pub em: Option<EmSummary>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompareDocument {
    pub command: String,
    pub base: ReportDocument,
    pub full: ReportDocument,
    pub lrt: LrtEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationDocument {
    pub command: String,
    pub model: String,
    pub model_name: String,
    pub parameters: Vec<ParameterValue>,
    pub n: usize,
    pub seed: u64,
    pub rng: String,
    pub ties: usize,
    pub out: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalDocument {
    pub command: String,
    pub model: String,
    pub model_name: String,
    pub parameters: Vec<ParameterValue>,
    pub x1: f64,
    pub x2: f64,
    pub what: String,
    pub given: Option<String>,
    pub value: f64,
    /// `x1<x2`, `x1>x2` or `diagonal`.
    pub region: String,
    /// `density`, `line-density`, `probability`, `hazard`,
    /// `line-hazard` or `atom`.
    pub kind: String,
}

pub fn parameters(names: &[&str], values: &[f64], se: Option<&[f64]>) -> Vec<Parameter> {
    names
        .iter()
        .zip(values)
        .enumerate()
        .map(|(i, (name, &estimate))| Parameter {
            name: name.to_string(),
            estimate,
            se: se.map(|s| s[i]),
        })
        .collect()
}

pub fn parameter_values(names: &[&str], values: &[f64]) -> Vec<ParameterValue> {
    names
        .iter()
        .zip(values)
        .map(|(name, &value)| ParameterValue {
            name: name.to_string(),
            value,
        })
        .collect()
}

pub fn ks_entries(ks: &[(KsTarget, KsResult); 3]) -> Vec<KsEntry> {
    ks.iter()
        .map(|(t, r)| KsEntry {
            target: t.as_str().to_string(),
            statistic: r.statistic,
            p_value: r.p_value,
        })
        .collect()
}

pub fn lrt_entry(base: FamilyId, full: FamilyId, r: &LrtResult) -> LrtEntry {
    LrtEntry {
        base: base.as_str().to_string(),
        full: full.as_str().to_string(),
        statistic: r.statistic,
        df: r.df,
        p_value: r.p_value,
        boundary: r.boundary,
    }
}

pub fn em_summary(r: &FitReport, max_iter: usize, rel_tol: f64) -> EmSummary {
    EmSummary {
        iterations: r.iterations,
        converged: r.converged,
        max_iter,
        rel_tol,
        initial_loglik: r.trace.first().copied().unwrap_or(r.loglik),
        final_loglik: r.loglik,
        trace: r.trace.clone(),
    }
}

/// Canonical JSON text of a document, newline-terminated.
pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents hold finite numbers");
    s.push('\n');
    s
}

fn num(v: f64) -> String {
    if v == 0.0 || (1e-3..1e5).contains(&v.abs()) {
        format!("{v:.4}")
    } else {
        format!("{v:.4e}")
    }
}

/// Table rows (label, value) for one report, in the layout of a published
/// results table: estimates with standard errors, fit statistics, K-S and
/// LRT.
fn rows(doc: &ReportDocument) -> Vec<(String, String)> {
    let mut rows = Vec::new();
    for p in &doc.parameters {
        rows.push((p.name.clone(), num(p.estimate)));
        rows.push((
            "  (s.e.)".into(),
            p.se.map_or_else(|| "---".into(), |s| format!("({})", num(s))),
        ));
    }
    rows.push(("-log(l)".into(), format!("{:.3}", -doc.loglik)));
    if let Some(c) = &doc.criteria {
        rows.push(("AIC".into(), format!("{:.3}", c.aic)));
        rows.push(("AICC".into(), format!("{:.3}", c.aicc)));
        rows.push(("BIC".into(), format!("{:.3}", c.bic)));
    }
    for k in &doc.ks {
        rows.push((format!("K-S ({})", k.target), format!("{:.4}", k.statistic)));
        rows.push(("  (p-value)".into(), format!("({:.4})", k.p_value)));
    }
    if let Some(l) = &doc.lrt {
        rows.push(("LRT".into(), format!("{:.3}", l.statistic)));
        rows.push(("  (p-value)".into(), format!("({:.4})", l.p_value)));
    }
    rows
}

fn render(headers: &[String], columns: &[Vec<(String, String)>]) -> String {
    // Union of labels in first-seen order; parameters differ between models.
    let mut labels: Vec<String> = Vec::new();
    let mut last_param = String::new();
    let mut keyed: Vec<Vec<(String, String)>> = Vec::new();
    for col in columns {
        let mut k = Vec::new();
        for (label, value) in col {
            let key = if label.starts_with("  ") {
                format!("{last_param}/{label}")
            } else {
                last_param = label.clone();
                label.clone()
            };
            if !labels.contains(&key) {
                labels.push(key.clone());
            }
            k.push((key, value.clone()));
        }
        keyed.push(k);
    }
    let display = |key: &str| {
        key.rsplit_once('/')
            .map_or(key.to_string(), |(_, l)| l.to_string())
    };
    let label_width = labels
        .iter()
        .map(|l| display(l).chars().count())
        .max()
        .unwrap_or(0)
        .max(9);
    let cell = |col: &Vec<(String, String)>, key: &str| {
        col.iter()
            .find(|(k, _)| k == key)
            .map_or("---".to_string(), |(_, v)| v.clone())
    };
    let widths: Vec<usize> = headers
        .iter()
        .zip(&keyed)
        .map(|(h, col)| {
            col.iter()
                .map(|(_, v)| v.len())
                .chain([h.len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = String::new();
    write!(out, "{:<label_width$}", "Statistic").unwrap();
    for (h, w) in headers.iter().zip(&widths) {
        write!(out, "  {h:>w$}").unwrap();
    }
    out.push('\n');
    for key in &labels {
        write!(out, "{:<label_width$}", display(key)).unwrap();
        for (col, w) in keyed.iter().zip(&widths) {
            write!(out, "  {:>w$}", cell(col, key)).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn report_table(doc: &ReportDocument) -> String {
    let mut out = render(std::slice::from_ref(&doc.model_name), &[rows(doc)]);
    if let Some(em) = &doc.em {
        writeln!(
            out,
            "EM: {} iteration(s), {}",
            em.iterations,
            if em.converged {
                "converged"
            } else {
                "NOT converged"
            }
        )
        .unwrap();
    }
    for note in &doc.notes {
        writeln!(out, "note: {note}").unwrap();
    }
    out
}

pub fn compare_table(doc: &CompareDocument) -> String {
    let mut out = render(
        &[doc.base.model_name.clone(), doc.full.model_name.clone()],
        &[rows(&doc.base), rows(&doc.full)],
    );
    if doc.lrt.boundary {
        writeln!(
            out,
            "note: LRT statistic is zero; the full fit sits on the base model"
        )
        .unwrap();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_doc() -> ReportDocument {
        ReportDocument {
            command: "fit".into(),
            model: "exp".into(),
            model_name: "BGE".into(),
            data: Some("data.csv".into()),
            n: 37,
            ties: 5,
            tie_eps: 1e-9,
            rescale: 1.0,
            parameters: parameters(
                &["alpha1", "lambda"],
                &[1.4452, 0.039],
                Some(&[0.416, 0.0056]),
            ),
            loglik: -296.901,
            criteria: Some(Criteria {
                k: 4,
                aic: 601.802,
                aicc: 603.052,
                bic: 608.245,
            }),
            ks: vec![KsEntry {
                target: "x1".into(),
                statistic: 0.1034,
                p_value: 0.824,
            }],
            lrt: None,
            em: Some(EmSummary {
                iterations: 3,
                converged: true,
                max_iter: 2000,
                rel_tol: 1e-8,
                initial_loglik: -300.0,
                final_loglik: -296.901,
                trace: vec![-300.0, -297.0, -296.901],
            }),
            notes: vec![],
        }
    }

    #[test]
    fn json_round_trips_and_keeps_key_order() {
        let doc = sample_doc();
        let text = to_json(&doc);
        let back: ReportDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(back, doc);
        assert_eq!(to_json(&back), text);
        let order: Vec<usize> = [
            "\"command\"",
            "\"model\"",
            "\"parameters\"",
            "\"loglik\"",
            "\"em\"",
        ]
        .iter()
        .map(|k| text.find(k).unwrap())
        .collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn table_lists_estimates_and_criteria() {
        let t = report_table(&sample_doc());
        assert!(t.contains("BGE"));
        assert!(t.contains("(0.4160)"));
        assert!(t.contains("601.802"));
        assert!(t.contains("converged"));
    }
}
