// Copyright 2026 The sdslab Authors
// SPDX-License-Identifier: Apache-2.0

//! JSON forms of audit, metric, bound and decomposition results.
//!
//! Values are exact fraction strings and profiles use the single-line text
//! form. Voters are numbered from 1.

use serde_json::{json, Value};

use crate::axioms::{AxiomReport, AxiomVerdict, Scope, Violation, Witness};
use crate::metrics::{BoundCheck, BoundOutcome, MetricsReport, TheoremBoundsReport};
use crate::rational::Rational;
use crate::transforms::{Decomposition, InfeasibilityCertificate};

fn fractions(values: &[Rational]) -> Value {
    Value::Array(values.iter().map(|v| Value::String(v.to_string())).collect())
}

pub fn scope_json(scope: &Scope) -> Value {
    json!({
        "m": scope.m,
        "n": scope.n,
        "mode": scope.mode.as_str(),
        "blocks": scope.blocks,
        "evaluations": u64::try_from(scope.evaluations).unwrap_or(u64::MAX),
    })
}

pub fn witness_json(witness: &Witness) -> Value {
    let mut out = json!({
        "profile": witness.profile.to_compact_string(),
        "before": witness.before,
        "after": witness.after,
    });
    let details = match &witness.violation {
        Violation::Manipulation { voter, deviation, cutoff } => json!({
            "kind": "manipulation",
            "voter": voter + 1,
            "truth": witness.profile.voter(*voter).to_string(),
            "deviation": deviation.to_string(),
            "cutoff": cutoff.label(),
        }),
        Violation::Perversity { voter, raised, lowered } => json!({
            "kind": "perversity",
            "voter": voter + 1,
            "raised": raised.label(),
            "lowered": lowered.label(),
        }),
        Violation::NonLocalized { voter, raised, lowered, affected } => json!({
            "kind": "non-localized",
            "voter": voter + 1,
            "raised": raised.label(),
            "lowered": lowered.label(),
            "affected": affected.label(),
        }),
        Violation::Anonymity { voters: (i, j) } => json!({ "kind": "anonymity", "voters": [i + 1, j + 1] }),
        Violation::Neutrality { alternatives: (x, y) } => {
            json!({ "kind": "neutrality", "alternatives": [x.label(), y.label()] })
        }
    };
    let map = out.as_object_mut().expect("object");
    map.extend(details.as_object().expect("object").clone());
    if let Ok(modified) = witness.modified_profile() {
        map.insert("modified_profile".into(), Value::String(modified.to_compact_string()));
    }
    out
}

fn verdict_json(verdict: &AxiomVerdict) -> Value {
    let mut out = json!({ "axiom": verdict.axiom.as_str(), "holds": verdict.holds() });
    let map = out.as_object_mut().expect("object");
    if let Some(w) = &verdict.witness {
        map.insert("witness".into(), witness_json(w));
    }
    if let Some(w) = &verdict.canonical {
        map.insert("canonical_witness".into(), witness_json(w));
    }
    out
}

pub fn axiom_report_json(report: &AxiomReport) -> Value {
    json!({
        "rule": report.rule,
        "scope": scope_json(&report.scope),
        "all_hold": report.all_hold(),
        "verdicts": report.verdicts.iter().map(verdict_json).collect::<Vec<_>>(),
    })
}

pub fn metrics_report_json(report: &MetricsReport) -> Value {
    let mut out = json!({ "rule": report.rule, "scope": scope_json(&report.scope) });
    let map = out.as_object_mut().expect("object");
    if let Some(sp) = report.strategyproof {
        map.insert("strategyproof".into(), Value::Bool(sp));
    }
    if let Some(a) = &report.alpha {
        map.insert(
            "alpha".into(),
            json!({
                "value": a.value.to_string(),
                "profile": a.profile.to_compact_string(),
                "condorcet_winner": a.winner.label(),
            }),
        );
    }
    if let Some(b) = &report.beta {
        let mut beta = json!({ "value": b.value.to_string(), "vacuous": b.vacuous });
        if let Some((profile, x, y)) = &b.witness {
            let m = beta.as_object_mut().expect("object");
            m.insert("profile".into(), Value::String(profile.to_compact_string()));
            m.insert("dominated".into(), Value::String(x.label()));
            m.insert("dominator".into(), Value::String(y.label()));
        }
        map.insert("beta".into(), beta);
    }
    if let Some(g) = &report.gamma {
        let voters: Vec<Value> = g
            .witnesses
            .iter()
            .zip(&g.per_voter)
            .map(|(w, v)| {
                json!({
                    "voter": w.voter + 1,
                    "gamma": v.to_string(),
                    "profile": w.profile.to_compact_string(),
                    "top": w.top.label(),
                    "second": w.second.label(),
                })
            })
            .collect();
        map.insert("gamma".into(), json!({ "value": g.value.to_string(), "per_voter": voters }));
    }
    out
}

fn bound_json(check: &BoundCheck) -> Value {
    let (status, tight, reason) = match &check.outcome {
        BoundOutcome::Holds { tight } => ("holds", Some(*tight), None),
        BoundOutcome::Violated => ("violated", None, None),
        BoundOutcome::Skipped(reason) => ("skipped", None, Some(reason.clone())),
    };
    let mut out = json!({ "name": check.name, "inequality": check.inequality, "status": status });
    let map = out.as_object_mut().expect("object");
    if let Some(l) = &check.lhs {
        map.insert("lhs".into(), Value::String(l.to_string()));
    }
    if let Some(r) = &check.rhs {
        map.insert("rhs".into(), Value::String(r.to_string()));
    }
    if let Some(t) = tight {
        map.insert("tight".into(), Value::Bool(t));
    }
    if let Some(r) = reason {
        map.insert("reason".into(), Value::String(r));
    }
    out
}

pub fn bounds_report_json(report: &TheoremBoundsReport) -> Value {
    json!({
        "rule": report.rule,
        "m": report.m,
        "n": report.n,
        "bounds": report.checks().iter().map(|c| bound_json(c)).collect::<Vec<_>>(),
    })
}

pub fn decomposition_json(decomposition: &Decomposition) -> Value {
    match decomposition {
        Decomposition::Feasible(d) => json!({
            "lambda": d.lambda.to_string(),
            "point": d.point.as_deref().map(fractions),
            "supporting": d.supporting.as_deref().map(fractions),
            "unique": d.unique,
            "lambda_range": [d.lambda_range.0.to_string(), d.lambda_range.1.to_string()],
            "kernel_dimension": d.kernel_dimension,
        }),
        Decomposition::Infeasible(InfeasibilityCertificate::Equation { profile, alternative }) => json!({
            "feasible": false,
            "certificate": {
                "kind": "equation",
                "profile": profile.to_compact_string(),
                "alternative": alternative.label(),
            },
        }),
        Decomposition::Infeasible(InfeasibilityCertificate::Inequalities { violated }) => json!({
            "feasible": false,
            "certificate": { "kind": "inequalities", "violated": violated },
        }),
    }
}
