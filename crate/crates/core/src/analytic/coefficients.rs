use crate::channel::{MixtureComponent, PlcParams, RfParams, RicianSeries};
use crate::specfun::lgamma;

/// Mixture component with the auxiliary sequences of the min-SNR capacity and
/// mean expressions, all in log form.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentCoefficients {
    pub component: MixtureComponent,
    /// ln (β + α)^{−(m+r)}.
    pub ln_w: Vec<f64>,
    /// Upper parameters {1 − m − r, 1, 1}.
    pub varsigma: Vec<[f64; 3]>,
}

/// Coefficients shared by every closed form for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct TruncationCoefficients {
    pub series: RicianSeries,
    /// ln Θ_r = r ln α − ln r!.
    pub ln_theta: Vec<f64>,
    pub components: Vec<ComponentCoefficients>,
}

impl TruncationCoefficients {
    pub fn new(plc: &PlcParams, rf: &RfParams) -> Self {
        let series = RicianSeries::new(rf);
        let alpha = series.alpha;
        let l_max = series.l_max();
        let ln_theta = (0..=l_max)
            .map(|r| r as f64 * alpha.ln() - lgamma(r as f64 + 1.0))
            .collect();
        let components = plc
            .components()
            .into_iter()
            .filter(|c| c.weight > 0.0)
            .map(|c| {
                let m = c.mf();
                let ln_sum = (c.beta() + alpha).ln();
                ComponentCoefficients {
                    component: c,
                    ln_w: (0..=l_max).map(|r| -(m + r as f64) * ln_sum).collect(),
                    varsigma: (0..=l_max).map(|r| [1.0 - m - r as f64, 1.0, 1.0]).collect(),
                }
            })
            .collect();
        Self {
            series,
            ln_theta,
            components,
        }
    }

    pub fn alpha(&self) -> f64 {
        self.series.alpha
    }

    pub fn k_factor(&self) -> f64 {
        self.series.k_factor
    }

    pub fn l_max(&self) -> usize {
        self.series.l_max()
    }

    /// ln B_l.
    pub fn ln_b(&self, l: usize) -> f64 {
        self.series.ln_b[l]
    }
}
