//! Scenario files: one JSON document, SNR-like quantities in dB under `_db`
//! keys. Conversion to linear units happens only in [`Scenario::point`].

use std::fmt;

use plcrf_core::analytic::Metric;
use plcrf_core::channel::{db_to_linear, PlcParams, Protocol, RfParams};
use plcrf_core::montecarlo::McConfig;
use serde::{Deserialize, Serialize};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PlcSection {
    pub m1: u32,
    pub m2: u32,
    pub p_i: f64,
    pub eta: f64,
    pub sigma_sr: f64,
    /// Ω₂/Ω₁; `None` means 1/(1+η).
    pub omega2_ratio: Option<f64>,
}

impl Default for PlcSection {
    fn default() -> Self {
        Self {
            m1: 8,
            m2: 8,
            p_i: 0.2,
            eta: 5.0,
            sigma_sr: 0.23,
            omega2_ratio: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RfSection {
    pub k_db: f64,
    /// Bessel-series truncation order; `None` picks one from the sweep range.
    pub trunc_k: Option<u32>,
}

impl Default for RfSection {
    fn default() -> Self {
        Self {
            k_db: 6.0,
            trunc_k: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RelaySection {
    pub protocols: Vec<Protocol>,
    /// Fixed-gain constant C.
    pub c: f64,
}

impl Default for RelaySection {
    fn default() -> Self {
        Self {
            protocols: vec![Protocol::Df, Protocol::Af],
            c: 1.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepRange {
    pub gamma_bar_db_start: f64,
    pub gamma_bar_db_stop: f64,
    pub gamma_bar_db_step: f64,
}

impl Default for SweepRange {
    fn default() -> Self {
        Self {
            gamma_bar_db_start: 0.0,
            gamma_bar_db_stop: 40.0,
            gamma_bar_db_step: 5.0,
        }
    }
}

impl SweepRange {
    pub fn new(start: f64, stop: f64, step: f64) -> Self {
        Self {
            gamma_bar_db_start: start,
            gamma_bar_db_stop: stop,
            gamma_bar_db_step: step,
        }
    }

    /// Grid points start, start + step, ... up to stop inclusive.
    pub fn points(&self) -> Vec<f64> {
        let n = ((self.gamma_bar_db_stop - self.gamma_bar_db_start) / self.gamma_bar_db_step + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| self.gamma_bar_db_start + i as f64 * self.gamma_bar_db_step)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    Exact,
    Asymptotic,
    UpperBound,
    MonteCarlo,
}

impl Variant {
    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Exact => "exact",
            Variant::Asymptotic => "asymptotic",
            Variant::UpperBound => "upper_bound",
            Variant::MonteCarlo => "monte_carlo",
        }
    }
}

/// Parameter varied across the curves of a figure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyParam {
    KDb,
    PI,
    Eta,
    GammaThDb,
    C,
}

impl FamilyParam {
    pub fn as_str(self) -> &'static str {
        match self {
            FamilyParam::KDb => "K_db",
            FamilyParam::PI => "P_i",
            FamilyParam::Eta => "eta",
            FamilyParam::GammaThDb => "gamma_th_db",
            FamilyParam::C => "C",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "k" | "k_db" => Some(FamilyParam::KDb),
            "p_i" | "pi" => Some(FamilyParam::PI),
            "eta" => Some(FamilyParam::Eta),
            "gamma_th" | "gamma_th_db" => Some(FamilyParam::GammaThDb),
            "c" => Some(FamilyParam::C),
            _ => None,
        }
    }
}

impl fmt::Display for FamilyParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Family {
    pub param: FamilyParam,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Scenario {
    pub plc: PlcSection,
    pub rf: RfSection,
    pub relay: RelaySection,
    pub gamma_th_db: f64,
    pub sweep: SweepRange,
    pub metrics: Vec<Metric>,
    pub variants: Vec<Variant>,
    pub family: Option<Family>,
    pub mc: McConfig,
}

impl Default for Scenario {
    fn default() -> Self {
        Self {
            plc: PlcSection::default(),
            rf: RfSection::default(),
            relay: RelaySection::default(),
            gamma_th_db: 0.0,
            sweep: SweepRange::default(),
            metrics: vec![Metric::Op, Metric::Ber, Metric::Acc],
            variants: vec![Variant::Exact, Variant::Asymptotic, Variant::UpperBound, Variant::MonteCarlo],
            family: None,
            mc: McConfig::default(),
        }
    }
}

/// Model parameters at one grid point, in linear units.
#[derive(Debug, Clone, PartialEq)]
pub struct PointModel {
    pub plc: PlcParams,
    pub rf: RfParams,
    pub c: f64,
    pub gamma_th: f64,
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::Usage(format!("scenario: {e}")))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let r = &self.sweep;
        let finite = r.gamma_bar_db_start.is_finite() && r.gamma_bar_db_stop.is_finite();
        if r.gamma_bar_db_step.is_nan() || r.gamma_bar_db_step <= 0.0 || !finite || r.gamma_bar_db_start > r.gamma_bar_db_stop {
            return Err(CliError::Usage(format!(
                "sweep needs step > 0 and start <= stop (got {}, {}, {})",
                r.gamma_bar_db_start, r.gamma_bar_db_stop, r.gamma_bar_db_step
            )));
        }
        if self.relay.protocols.is_empty() {
            return Err(CliError::Usage("relay.protocols is empty".into()));
        }
        if let Some(f) = &self.family {
            if f.values.is_empty() {
                return Err(CliError::Usage(format!("family {} has no values", f.param)));
            }
        }
        self.mc.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        // Surface parameter errors before any work starts.
        for v in self.family_values() {
            self.point(r.gamma_bar_db_start, v).map_err(|e| CliError::Usage(e.to_string()))?;
        }
        Ok(())
    }

    /// Family values, or a single `None` when no family is configured.
    pub fn family_values(&self) -> Vec<Option<f64>> {
        match &self.family {
            Some(f) => f.values.iter().copied().map(Some).collect(),
            None => vec![None],
        }
    }

    /// Linear-unit model at mean SNR `gamma_bar_db` with the family parameter
    /// (if any) set to `family_value`.
    pub fn point(&self, gamma_bar_db: f64, family_value: Option<f64>) -> plcrf_core::Result<PointModel> {
        let mut plc_s = self.plc.clone();
        let mut k_db = self.rf.k_db;
        let mut c = self.relay.c;
        let mut th_db = self.gamma_th_db;
        if let (Some(f), Some(v)) = (&self.family, family_value) {
            match f.param {
                FamilyParam::KDb => k_db = v,
                FamilyParam::PI => plc_s.p_i = v,
                FamilyParam::Eta => plc_s.eta = v,
                FamilyParam::GammaThDb => th_db = v,
                FamilyParam::C => c = v,
            }
        }
        let g = db_to_linear(gamma_bar_db);
        let mut plc = PlcParams::from_mean_snr(g, plc_s.m1, plc_s.m2, plc_s.p_i, plc_s.eta, plc_s.sigma_sr)?;
        if let Some(ratio) = plc_s.omega2_ratio {
            plc.omega2 = plc.omega1 * ratio;
            plc.validate()?;
        }
        let k = db_to_linear(k_db);
        let rf = match self.rf.trunc_k {
            Some(order) => RfParams::new(k, g, order)?,
            None => RfParams::with_default_order(k, g, 1e3 * g)?,
        };
        Ok(PointModel {
            plc,
            rf,
            c,
            gamma_th: db_to_linear(th_db),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip() {
        let s = Scenario::default();
        assert_eq!(Scenario::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn k_factor_converted_once() {
        let m = Scenario::default().point(10.0, None).unwrap();
        assert_eq!(m.rf.k_factor, 10f64.powf(0.6));
        assert_eq!(m.gamma_th, 1.0);
        assert_eq!(m.plc.omega1, 10.0);
    }

    #[test]
    fn family_overrides_one_parameter() {
        let s = Scenario {
            family: Some(Family {
                param: FamilyParam::PI,
                values: vec![0.05],
            }),
            ..Scenario::default()
        };
        let m = s.point(0.0, Some(0.05)).unwrap();
        assert_eq!(m.plc.p_i, 0.05);
        assert_eq!(m.rf.k_factor, 10f64.powf(0.6));
    }

    #[test]
    fn partial_documents_take_defaults() {
        let s = Scenario::from_json(r#"{"rf": {"k_db": 2.0}, "metrics": ["op"]}"#).unwrap();
        assert_eq!(s.rf.k_db, 2.0);
        assert_eq!(s.plc, PlcSection::default());
        assert_eq!(s.metrics, vec![Metric::Op]);
    }

    #[test]
    fn rejects_bad_sweep_and_unknown_keys() {
        let bad = r#"{"sweep": {"gamma_bar_db_start": 10, "gamma_bar_db_stop": 0, "gamma_bar_db_step": 5}}"#;
        assert!(matches!(Scenario::from_json(bad), Err(CliError::Usage(_))));
        assert!(Scenario::from_json(r#"{"gamma_bar": 3}"#).is_err());
        let bad = r#"{"plc": {"p_i": 1.5}}"#;
        assert!(Scenario::from_json(bad).is_err());
    }

    #[test]
    fn grid_includes_stop() {
        assert_eq!(SweepRange::new(0.0, 30.0, 10.0).points(), vec![0.0, 10.0, 20.0, 30.0]);
        assert_eq!(SweepRange::new(5.0, 5.0, 1.0).points(), vec![5.0]);
    }
}
