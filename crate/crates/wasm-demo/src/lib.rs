//! Browser bindings: outage and error-rate curves over mean SNR, and the
//! density of the relayed end-to-end SNR.

use plcrf_core::analytic::{af_snr_pdf, ber_af, ber_df, op_af, op_df, AnalyticConfig};
use plcrf_core::channel::{db_to_linear, PlcParams, RfParams};
use wasm_bindgen::prelude::*;

const M: u32 = 8;
const SIGMA_SR: f64 = 0.23;
const MAX_POINTS: usize = 512;

/// Link parameters shared by both hops; SNR-like values in dB.
#[wasm_bindgen]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    k_db: f64,
    p_i: f64,
    eta: f64,
    c: f64,
    gamma_th_db: f64,
}

#[wasm_bindgen]
impl Link {
    #[wasm_bindgen(constructor)]
    pub fn new(k_db: f64, p_i: f64, eta: f64, c: f64, gamma_th_db: f64) -> Link {
        Link {
            k_db,
            p_i,
            eta,
            c,
            gamma_th_db,
        }
    }

    /// Outage probability at each mean SNR in `gamma_bar_db`.
    pub fn outage(&self, protocol: &str, gamma_bar_db: &[f64]) -> Result<Vec<f64>, JsError> {
        self.outage_curve(protocol, gamma_bar_db).map_err(|e| JsError::new(&e))
    }

    /// Average BER (DBPSK) at each mean SNR in `gamma_bar_db`.
    pub fn ber(&self, protocol: &str, gamma_bar_db: &[f64]) -> Result<Vec<f64>, JsError> {
        self.ber_curve(protocol, gamma_bar_db).map_err(|e| JsError::new(&e))
    }

    /// Density of the amplify-and-forward end-to-end SNR at the points `gamma`
    /// (linear), for mean SNR `gamma_bar_db`.
    #[wasm_bindgen(js_name = afDensity)]
    pub fn af_density(&self, gamma_bar_db: f64, gamma: &[f64]) -> Result<Vec<f64>, JsError> {
        self.af_density_curve(gamma_bar_db, gamma).map_err(|e| JsError::new(&e))
    }
}

#[derive(Clone, Copy)]
enum Relay {
    Df,
    Af,
}

fn relay(name: &str) -> Result<Relay, String> {
    match name.to_ascii_lowercase().as_str() {
        "df" => Ok(Relay::Df),
        "af" => Ok(Relay::Af),
        other => Err(format!("unknown protocol {other:?}; use \"df\" or \"af\"")),
    }
}

fn check_len(n: usize) -> Result<(), String> {
    if n > MAX_POINTS {
        return Err(format!("at most {MAX_POINTS} points per call (got {n})"));
    }
    Ok(())
}

impl Link {
    fn model(&self, gamma_bar_db: f64) -> Result<(PlcParams, RfParams), String> {
        let g = db_to_linear(gamma_bar_db);
        let plc = PlcParams::from_mean_snr(g, M, M, self.p_i, self.eta, SIGMA_SR).map_err(|e| e.to_string())?;
        let rf = RfParams::with_default_order(db_to_linear(self.k_db), g, 1e3 * g).map_err(|e| e.to_string())?;
        Ok((plc, rf))
    }

    pub fn outage_curve(&self, protocol: &str, gamma_bar_db: &[f64]) -> Result<Vec<f64>, String> {
        let relay = relay(protocol)?;
        check_len(gamma_bar_db.len())?;
        let cfg = AnalyticConfig::default();
        let th = db_to_linear(self.gamma_th_db);
        gamma_bar_db
            .iter()
            .map(|&g| {
                let (plc, rf) = self.model(g)?;
                match relay {
                    Relay::Df => op_df(&plc, &rf, th, &cfg),
                    Relay::Af => op_af(&plc, &rf, self.c, th, &cfg),
                }
                .map_err(|e| e.to_string())
            })
            .collect()
    }

    pub fn ber_curve(&self, protocol: &str, gamma_bar_db: &[f64]) -> Result<Vec<f64>, String> {
        let relay = relay(protocol)?;
        check_len(gamma_bar_db.len())?;
        let cfg = AnalyticConfig::default();
        gamma_bar_db
            .iter()
            .map(|&g| {
                let (plc, rf) = self.model(g)?;
                match relay {
                    Relay::Df => ber_df(&plc, &rf, &cfg),
                    Relay::Af => ber_af(&plc, &rf, self.c, &cfg),
                }
                .map_err(|e| e.to_string())
            })
            .collect()
    }

    pub fn af_density_curve(&self, gamma_bar_db: f64, gamma: &[f64]) -> Result<Vec<f64>, String> {
        check_len(gamma.len())?;
        let cfg = AnalyticConfig::default();
        let (plc, rf) = self.model(gamma_bar_db)?;
        gamma
            .iter()
            .map(|&x| af_snr_pdf(&plc, &rf, self.c, x, &cfg).map_err(|e| e.to_string()))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn link() -> Link {
        Link::new(6.0, 0.2, 5.0, 1.2, 0.0)
    }

    #[test]
    fn outage_falls_with_snr() {
        for p in ["df", "AF"] {
            let v = link().outage_curve(p, &[0.0, 10.0, 20.0]).unwrap();
            assert!(v[0] > v[1] && v[1] > v[2], "{p}: {v:?}");
        }
    }

    #[test]
    fn ber_is_a_probability() {
        let v = link().ber_curve("af", &[5.0, 25.0]).unwrap();
        assert!(v.iter().all(|&b| b > 0.0 && b < 0.5));
    }

    #[test]
    fn density_is_nonnegative() {
        let v = link().af_density_curve(10.0, &[0.1, 1.0, 10.0, 50.0]).unwrap();
        assert!(v.iter().all(|&d| d >= 0.0));
        assert!(v[1] > v[3]);
    }

    #[test]
    fn bad_inputs_are_errors() {
        assert!(link().outage_curve("xf", &[0.0]).is_err());
        assert!(Link::new(6.0, 1.5, 5.0, 1.2, 0.0).outage_curve("df", &[0.0]).is_err());
        assert!(link().ber_curve("df", &vec![10.0; MAX_POINTS + 1]).is_err());
    }
}
