use std::cmp::Ordering;

use plcrf_core::analytic::{evaluate, AnalyticConfig, Metric, MetricKind};
use plcrf_core::channel::Protocol;
use plcrf_core::montecarlo::{estimate_joint, JointEstimates};
use serde::Serialize;

use crate::scenario::{PointModel, Scenario, Variant};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub gamma_bar_db: f64,
    pub protocol: Protocol,
    pub metric: Metric,
    pub variant: Variant,
    pub family_param_name: Option<&'static str>,
    pub family_param_value: Option<f64>,
    pub value: Option<f64>,
    pub std_error: Option<f64>,
    pub error: Option<String>,
}

impl Row {
    fn sort_key(&self, other: &Self) -> Ordering {
        let fam = |r: &Self| r.family_param_value.unwrap_or(f64::NEG_INFINITY);
        fam(self)
            .total_cmp(&fam(other))
            .then(self.gamma_bar_db.total_cmp(&other.gamma_bar_db))
            .then(self.protocol.cmp(&other.protocol))
            .then(self.metric.cmp(&other.metric))
            .then(self.variant.cmp(&other.variant))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SweepResult {
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn failures(&self) -> impl Iterator<Item = &Row> {
        self.rows.iter().filter(|r| r.error.is_some())
    }

    /// Value of the unique row matching the key, if it evaluated.
    pub fn get(
        &self,
        gamma_bar_db: f64,
        protocol: Protocol,
        metric: Metric,
        variant: Variant,
        family_value: Option<f64>,
    ) -> Option<&Row> {
        self.rows.iter().find(|r| {
            r.gamma_bar_db == gamma_bar_db
                && r.protocol == protocol
                && r.metric == metric
                && r.variant == variant
                && r.family_param_value == family_value
        })
    }
}

fn analytic_kind(v: Variant) -> Option<MetricKind> {
    match v {
        Variant::Exact => Some(MetricKind::Exact),
        Variant::Asymptotic => Some(MetricKind::Asymptotic),
        Variant::UpperBound => Some(MetricKind::UpperBound),
        Variant::MonteCarlo => None,
    }
}

/// Whether a closed form exists for this combination.
pub fn is_available(protocol: Protocol, metric: Metric, variant: Variant) -> bool {
    match variant {
        Variant::Exact | Variant::MonteCarlo => true,
        Variant::Asymptotic => protocol == Protocol::Df && metric != Metric::Acc,
        Variant::UpperBound => metric == Metric::Acc,
    }
}

/// Evaluates every (grid point, family value, protocol, metric, variant)
/// combination that has a definition. Failures are kept as rows with an
/// error message; the sweep never aborts.
pub fn run_sweep(scenario: &Scenario, cfg: &AnalyticConfig) -> SweepResult {
    let mut rows = Vec::new();
    if scenario.metrics.is_empty() || scenario.variants.is_empty() {
        return SweepResult { rows };
    }
    let family_name = scenario.family.as_ref().map(|f| f.param.as_str());
    let want_mc = scenario.variants.contains(&Variant::MonteCarlo);
    for fv in scenario.family_values() {
        for g_db in scenario.sweep.points() {
            let base = |protocol, metric, variant| Row {
                gamma_bar_db: g_db,
                protocol,
                metric,
                variant,
                family_param_name: family_name,
                family_param_value: fv,
                value: None,
                std_error: None,
                error: None,
            };
            let model = scenario.point(g_db, fv);
            let mc = match (&model, want_mc) {
                (Ok(m), true) => Some(estimate_joint(&m.plc, &m.rf, m.c, m.gamma_th, &scenario.mc).map_err(|e| e.to_string())),
                _ => None,
            };
            for &protocol in &scenario.relay.protocols {
                for &metric in &scenario.metrics {
                    for &variant in &scenario.variants {
                        if !is_available(protocol, metric, variant) {
                            continue;
                        }
                        let mut row = base(protocol, metric, variant);
                        match &model {
                            Err(e) => row.error = Some(e.to_string()),
                            Ok(m) => fill(&mut row, m, mc.as_ref(), cfg),
                        }
                        rows.push(row);
                    }
                }
            }
        }
    }
    rows.sort_by(Row::sort_key);
    SweepResult { rows }
}

fn fill(row: &mut Row, m: &PointModel, mc: Option<&Result<JointEstimates, String>>, cfg: &AnalyticConfig) {
    match analytic_kind(row.variant) {
        Some(kind) => match evaluate(row.metric, kind, row.protocol, &m.plc, &m.rf, m.c, m.gamma_th, cfg) {
            Ok(v) if v.value.is_finite() => row.value = Some(v.value),
            Ok(v) => row.error = Some(format!("non-finite result {}", v.value)),
            Err(e) => row.error = Some(e.to_string()),
        },
        None => match mc {
            Some(Ok(j)) => {
                let link = j.link(row.protocol);
                let est = match row.metric {
                    Metric::Op => link.op,
                    Metric::Ber => link.ber,
                    Metric::Acc => link.acc,
                };
                row.value = Some(est.mean);
                row.std_error = Some(est.std_error);
            }
            Some(Err(e)) => row.error = Some(e.clone()),
            None => row.error = Some("Monte Carlo run missing".into()),
        },
    }
}
