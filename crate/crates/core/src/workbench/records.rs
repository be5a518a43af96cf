//! Line-delimited JSON records. Keys are sorted and rationals are strings, so equal inputs
//! give byte-identical files.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Value};

use crate::error::Result;
use crate::lab::{AuditStatus, AuditVerdict, Certificate, Deviation, NashReport, RatioValue};
use crate::model::{ItemSet, OutcomeDistribution, ReportProfile};

#[derive(Debug, Default)]
pub struct Records {
    lines: Vec<Value>,
}

impl Records {
    pub fn push(&mut self, record: Value) {
        self.lines.push(record);
    }

    pub fn lines(&self) -> &[Value] {
        &self.lines
    }

    pub fn write_to(&self, mut out: impl Write) -> Result<()> {
        for line in &self.lines {
            writeln!(out, "{line}")?;
        }
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut buf = Vec::new();
        self.write_to(&mut buf)?;
        std::fs::write(path, buf)?;
        Ok(())
    }
}

pub fn set_json(set: &ItemSet) -> Value {
    json!(set.ids())
}

pub fn distribution_json(dist: &OutcomeDistribution) -> Value {
    Value::Array(
        dist.atoms()
            .iter()
            .map(|(s, p)| json!({ "set": set_json(s), "p": p.to_string() }))
            .collect(),
    )
}

pub fn profile_json(profile: &ReportProfile) -> Value {
    Value::Array(profile.0.iter().map(set_json).collect())
}

pub fn ratio_json(ratio: &RatioValue) -> Value {
    json!(ratio.to_string())
}

pub fn deviation_json(dev: &Deviation) -> Value {
    match dev {
        Deviation::Report(set) => Value::Array(
            set.iter()
                .map(|it| {
                    json!({
                        "id": it.id(),
                        "value": it.value().to_string(),
                        "size": it.size().to_string(),
                    })
                })
                .collect(),
        ),
        Deviation::Size(s) => json!({ "size": s.to_string() }),
    }
}

pub fn audit_json(mechanism: &str, verdict: &AuditVerdict) -> Value {
    let mut rec = json!({
        "record": "audit",
        "mechanism": mechanism,
        "complete": verdict.complete,
        "deviations_checked": verdict.deviations_checked,
    });
    match &verdict.status {
        AuditStatus::NoViolationFound => rec["status"] = json!("no-violation-found"),
        AuditStatus::Violation(w) => {
            rec["status"] = json!("violation");
            rec["witness"] = json!({
                "agent": w.agent,
                "deviation": deviation_json(&w.deviation),
                "truthful_utility": w.truthful_utility.to_string(),
                "deviating_utility": w.deviating_utility.to_string(),
                "gain": w.gain.to_string(),
            });
        }
    }
    rec
}

pub fn nash_json(mechanism: &str, report: &NashReport) -> Value {
    json!({
        "record": "nash",
        "mechanism": mechanism,
        "profiles_checked": report.profiles_checked,
        "complete": report.complete,
        "opt_welfare": report.opt_welfare.to_string(),
        "worst_ratio": report.worst_ratio.as_ref().map(RatioValue::to_string),
        "equilibria": report.equilibria.iter().map(|e| json!({
            "profile": profile_json(&e.profile),
            "welfare": e.welfare.to_string(),
            "ratio": ratio_json(&e.ratio),
        })).collect::<Vec<_>>(),
    })
}

pub fn certificate_json(cert: &Certificate) -> Value {
    let params: serde_json::Map<String, Value> = cert
        .params
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v.to_string())))
        .collect();
    let bounds: serde_json::Map<String, Value> = cert
        .bounds
        .iter()
        .map(|(k, v)| (k.to_string(), json!(v.to_string())))
        .collect();
    json!({
        "record": "certificate",
        "family": cert.family.name(),
        "params": params,
        "bounds": bounds,
        "verdict": if cert.verdict.is_infeasible() { "infeasible" } else { "feasible" },
        "margin": cert.verdict.margin().map(ToString::to_string),
    })
}
