//! Closed-form performance metrics for decode-and-forward and fixed-gain
//! amplify-and-forward relaying.
//!
//! The amplify-and-forward expressions and the decode-and-forward capacity use
//! the finite Bessel-series form of the Rician law at the order stored in
//! [`RfParams::trunc_k`]. Every term is built in log form and accumulated with
//! compensated summation.

mod af;
mod coefficients;
mod df;

use serde::{Deserialize, Serialize};

pub use af::{acc_af, acc_af_upper, af_snr_cdf, af_snr_pdf, ber_af, mean_af, op_af};
pub use coefficients::{ComponentCoefficients, TruncationCoefficients};
pub use df::{
    acc_df, acc_df_terms, acc_df_upper, ber_df, ber_df_asymptotic, hop_ber_plc, hop_ber_rf, hop_ber_rf_elementary,
    mean_df, op_df, op_df_asymptotic, DfCapacityTerms,
};

use crate::channel::{PlcParams, Protocol, RfParams, RicianLaw};
use crate::error::{Error, Result};
use crate::specfun::{meijer_g_log, MeijerGSpec, Precision};
use crate::sum::Neumaier;

/// Numerical settings for the closed forms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnalyticConfig {
    pub univariate: Precision,
    pub bivariate: Precision,
    /// Rician CDF used by the decode-and-forward outage probability.
    pub df_rician: RicianLaw,
}

impl Default for AnalyticConfig {
    fn default() -> Self {
        Self {
            univariate: Precision::univariate(),
            bivariate: Precision::bivariate(),
            df_rician: RicianLaw::Exact,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Op,
    Ber,
    Acc,
}

impl Metric {
    pub fn as_str(self) -> &'static str {
        match self {
            Metric::Op => "op",
            Metric::Ber => "ber",
            Metric::Acc => "acc",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MetricKind {
    Exact,
    Asymptotic,
    UpperBound,
}

impl MetricKind {
    pub fn as_str(self) -> &'static str {
        match self {
            MetricKind::Exact => "exact",
            MetricKind::Asymptotic => "asymptotic",
            MetricKind::UpperBound => "upper_bound",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricValue {
    pub value: f64,
    pub kind: MetricKind,
    pub metric: Metric,
    pub protocol: Protocol,
}

/// Evaluates one metric. Asymptotic forms exist for decode-and-forward outage
/// and error rate only; upper bounds for capacity only.
#[allow(clippy::too_many_arguments)]
pub fn evaluate(
    metric: Metric,
    kind: MetricKind,
    protocol: Protocol,
    plc: &PlcParams,
    rf: &RfParams,
    c_const: f64,
    gamma_th: f64,
    cfg: &AnalyticConfig,
) -> Result<MetricValue> {
    use Metric::*;
    use MetricKind::*;
    let value = match (protocol, metric, kind) {
        (Protocol::Df, Op, Exact) => op_df(plc, rf, gamma_th, cfg)?,
        (Protocol::Df, Op, Asymptotic) => op_df_asymptotic(plc, rf, gamma_th)?,
        (Protocol::Df, Ber, Exact) => ber_df(plc, rf, cfg)?,
        (Protocol::Df, Ber, Asymptotic) => ber_df_asymptotic(plc, rf)?,
        (Protocol::Df, Acc, Exact) => acc_df(plc, rf, cfg)?,
        (Protocol::Df, Acc, UpperBound) => acc_df_upper(plc, rf, cfg)?,
        (Protocol::Af, Op, Exact) => op_af(plc, rf, c_const, gamma_th, cfg)?,
        (Protocol::Af, Ber, Exact) => ber_af(plc, rf, c_const, cfg)?,
        (Protocol::Af, Acc, Exact) => acc_af(plc, rf, c_const, cfg)?,
        (Protocol::Af, Acc, UpperBound) => acc_af_upper(plc, rf, c_const, cfg)?,
        _ => {
            return Err(Error::InvalidParameter(format!(
                "no {} form of {} for {}",
                kind.as_str(),
                metric.as_str(),
                protocol.as_str()
            )))
        }
    };
    Ok(MetricValue {
        value,
        kind,
        metric,
        protocol,
    })
}

/// ln G^{m,n}_{p,q}; the sign is required to be positive.
pub(crate) fn ln_meijer(m: usize, n: usize, a: &[f64], b: &[f64], x: f64, prec: &Precision) -> Result<f64> {
    let spec = MeijerGSpec::new(m, n, a.to_vec(), b.to_vec(), x)?;
    let g = meijer_g_log(&spec, prec)?;
    if g.sign <= 0.0 {
        return Err(Error::NonConvergent {
            what: "meijer_g",
            diagnostics: format!("expected a positive value for G^{{{m},{n}}} at x = {x}, got sign {}", g.sign),
        });
    }
    Ok(g.ln_abs)
}

/// Maps `f` over `items`, in parallel when the `parallel` feature is on.
/// Output order always follows input order.
pub(crate) fn par_try_map<T, U, F>(items: Vec<T>, f: F) -> Result<Vec<U>>
where
    T: Send,
    U: Send,
    F: Fn(T) -> Result<U> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        items.into_par_iter().map(f).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        items.into_iter().map(f).collect()
    }
}

/// Sum of e^{t} over log-magnitude terms with signs.
pub(crate) fn sum_exp(terms: impl IntoIterator<Item = (f64, f64)>) -> f64 {
    let mut acc = Neumaier::new();
    for (sign, ln) in terms {
        acc.add(sign * ln.exp());
    }
    acc.total()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::db_to_linear;

    #[test]
    fn evaluate_rejects_missing_forms() {
        let plc = PlcParams::from_mean_snr(10.0, 8, 8, 0.2, 5.0, 0.23).unwrap();
        let rf = RfParams::with_default_order(db_to_linear(6.0), 10.0, 10.0).unwrap();
        let cfg = AnalyticConfig::default();
        let r = evaluate(Metric::Op, MetricKind::UpperBound, Protocol::Df, &plc, &rf, 1.2, 1.0, &cfg);
        assert!(r.is_err());
        let r = evaluate(Metric::Ber, MetricKind::Asymptotic, Protocol::Af, &plc, &rf, 1.2, 1.0, &cfg);
        assert!(r.is_err());
        let v = evaluate(Metric::Op, MetricKind::Exact, Protocol::Df, &plc, &rf, 1.2, 1.0, &cfg).unwrap();
        assert_eq!(v.metric, Metric::Op);
        assert!(v.value > 0.0 && v.value < 1.0);
    }
}
