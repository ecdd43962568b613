//! Monte Carlo simulation of both hops.
//!
//! Samples are drawn in fixed chunks of 2^16, chunk `i` from its own ChaCha8
//! stream `i` under the configured seed, and the per-chunk sums are reduced in
//! chunk order. Results are therefore bit-identical for any worker count.
//! Error rates use the conditional DBPSK error ½e^{−γ} per sample rather than
//! simulated bit flips.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma, LogNormal, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::channel::{PlcParams, Protocol, RelayConfig, RfParams};
use crate::error::{Error, Result};

pub const CHUNK_SIZE: u64 = 1 << 16;

/// How the power-line SNR is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlcMode {
    /// Two-component Gamma mixture.
    #[default]
    GammaMixture,
    /// Log-normal amplitude with a Bernoulli impulsive-noise state.
    GenerativeLn,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    pub n_samples: u64,
    pub seed: u64,
    pub plc_mode: PlcMode,
    pub workers: usize,
}

impl Default for McConfig {
    fn default() -> Self {
        Self {
            n_samples: 10_000_000,
            seed: 0x5eed_2024,
            plc_mode: PlcMode::GammaMixture,
            workers: 1,
        }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_samples < 2 || self.workers == 0 {
            return Err(Error::InvalidParameter(
                "Monte Carlo needs at least two samples and one worker".into(),
            ));
        }
        Ok(())
    }
}

/// Sample mean with its standard error sample_std/√n.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub mean: f64,
    pub std_error: f64,
    pub n: u64,
}

impl Estimate {
    /// Whether `value` lies within `k` standard errors of the mean.
    pub fn covers(&self, value: f64, k: f64) -> bool {
        (value - self.mean).abs() <= k * self.std_error
    }
}

/// Running moments of one chunk, combined in a fixed order.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, other: Self) -> Self {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Self {
            n,
            mean: self.mean + d * nb / n as f64,
            m2: self.m2 + other.m2 + d * d * na * nb / n as f64,
        }
    }

    fn estimate(self) -> Estimate {
        let var = if self.n > 1 { self.m2 / (self.n - 1) as f64 } else { 0.0 };
        Estimate {
            mean: self.mean,
            std_error: (var / self.n as f64).sqrt(),
            n: self.n,
        }
    }
}

/// Draws one power-line SNR.
pub fn sample_gamma_sr<R: Rng + ?Sized>(plc: &PlcParams, mode: PlcMode, rng: &mut R) -> f64 {
    let impulsive = plc.p_i > 0.0 && rng.random::<f64>() < plc.p_i;
    match mode {
        PlcMode::GammaMixture => {
            let (m, omega) = if impulsive {
                (plc.m2 as f64, plc.omega2)
            } else {
                (plc.m1 as f64, plc.omega1)
            };
            Gamma::new(m, omega / m).expect("validated shape and scale").sample(rng)
        }
        PlcMode::GenerativeLn => {
            let h: f64 = LogNormal::new(plc.mu_sr, plc.sigma_sr)
                .expect("validated sigma")
                .sample(rng);
            let gbar = if impulsive { plc.gamma_bar_sr2() } else { plc.gamma_bar_sr1 };
            gbar * h * h
        }
    }
}

/// Draws one Rician SNR γ̄|h|² with h = √(K/(K+1)) + √(1/(K+1))·CN(0, 1).
pub fn sample_gamma_rd<R: Rng + ?Sized>(rf: &RfParams, rng: &mut R) -> f64 {
    let k = rf.k_factor;
    let los = (k / (k + 1.0)).sqrt();
    let s = (0.5 / (k + 1.0)).sqrt();
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    let re = los + s * x;
    let im = s * y;
    rf.gamma_bar_rd * (re * re + im * im)
}

/// Outage, error rate and capacity estimates of one protocol.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkEstimates {
    pub op: Estimate,
    pub ber: Estimate,
    pub acc: Estimate,
}

/// Estimates for both protocols from one shared set of hop samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JointEstimates {
    pub df: LinkEstimates,
    pub af: LinkEstimates,
}

impl JointEstimates {
    pub fn link(&self, protocol: Protocol) -> &LinkEstimates {
        match protocol {
            Protocol::Df => &self.df,
            Protocol::Af => &self.af,
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct ChunkMoments([Moments; 6]);

impl ChunkMoments {
    fn merge(self, other: Self) -> Self {
        let mut out = self;
        for (a, b) in out.0.iter_mut().zip(other.0) {
            *a = a.merge(b);
        }
        out
    }
}

fn dbpsk(g: f64) -> f64 {
    0.5 * (-g).exp()
}

fn half_log2(g: f64) -> f64 {
    0.5 * g.ln_1p() / std::f64::consts::LN_2
}

fn run_chunk(plc: &PlcParams, rf: &RfParams, c: f64, gamma_th: f64, mc: &McConfig, chunk: u64) -> ChunkMoments {
    let mut rng = ChaCha8Rng::seed_from_u64(mc.seed);
    rng.set_stream(chunk);
    let n = CHUNK_SIZE.min(mc.n_samples - chunk * CHUNK_SIZE);
    let mut acc = ChunkMoments::default();
    for _ in 0..n {
        let g_sr = sample_gamma_sr(plc, mc.plc_mode, &mut rng);
        let g_rd = sample_gamma_rd(rf, &mut rng);
        let g_df = g_sr.min(g_rd);
        let g_af = g_sr * g_rd / (c + g_rd);
        let (e1, e2) = (dbpsk(g_sr), dbpsk(g_rd));
        acc.0[0].push(f64::from(u8::from(g_df < gamma_th)));
        acc.0[1].push(e1 + e2 - 2.0 * e1 * e2);
        acc.0[2].push(half_log2(g_df));
        acc.0[3].push(f64::from(u8::from(g_af < gamma_th)));
        acc.0[4].push(dbpsk(g_af));
        acc.0[5].push(half_log2(g_af));
    }
    acc
}

fn map_chunks<F>(n_chunks: u64, workers: usize, f: F) -> Vec<ChunkMoments>
where
    F: Fn(u64) -> ChunkMoments + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if workers > 1 {
            use rayon::prelude::*;
            if let Ok(pool) = rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
                return pool.install(|| (0..n_chunks).into_par_iter().map(&f).collect());
            }
        }
    }
    let _ = workers;
    (0..n_chunks).map(f).collect()
}

/// Simulates both protocols at once. `c_const` is the fixed-gain constant of
/// the amplify-and-forward link.
pub fn estimate_joint(
    plc: &PlcParams,
    rf: &RfParams,
    c_const: f64,
    gamma_th: f64,
    mc: &McConfig,
) -> Result<JointEstimates> {
    mc.validate()?;
    plc.validate()?;
    rf.validate()?;
    if !(c_const > 0.0) || !(gamma_th >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "need C > 0 and a non-negative threshold (C = {c_const}, threshold = {gamma_th})"
        )));
    }
    let n_chunks = mc.n_samples.div_ceil(CHUNK_SIZE);
    let total = map_chunks(n_chunks, mc.workers, |i| run_chunk(plc, rf, c_const, gamma_th, mc, i))
        .into_iter()
        .fold(ChunkMoments::default(), ChunkMoments::merge);
    let e = total.0.map(Moments::estimate);
    Ok(JointEstimates {
        df: LinkEstimates {
            op: e[0],
            ber: e[1],
            acc: e[2],
        },
        af: LinkEstimates {
            op: e[3],
            ber: e[4],
            acc: e[5],
        },
    })
}

fn relay_constant(relay: &RelayConfig) -> f64 {
    match relay.protocol {
        Protocol::Df => 1.0,
        Protocol::Af => relay.c_const,
    }
}

pub fn estimate_link(
    plc: &PlcParams,
    rf: &RfParams,
    relay: &RelayConfig,
    gamma_th: f64,
    mc: &McConfig,
) -> Result<LinkEstimates> {
    Ok(*estimate_joint(plc, rf, relay_constant(relay), gamma_th, mc)?.link(relay.protocol))
}

/// Outage probability: mean of the indicator that the end-to-end SNR is below
/// the threshold.
pub fn estimate_op(plc: &PlcParams, rf: &RfParams, relay: &RelayConfig, gamma_th: f64, mc: &McConfig) -> Result<Estimate> {
    Ok(estimate_link(plc, rf, relay, gamma_th, mc)?.op)
}

/// Average DBPSK bit error rate.
pub fn estimate_ber(plc: &PlcParams, rf: &RfParams, relay: &RelayConfig, mc: &McConfig) -> Result<Estimate> {
    Ok(estimate_link(plc, rf, relay, 0.0, mc)?.ber)
}

/// Ergodic capacity E[½ log₂(1 + γ)].
pub fn estimate_acc(plc: &PlcParams, rf: &RfParams, relay: &RelayConfig, mc: &McConfig) -> Result<Estimate> {
    Ok(estimate_link(plc, rf, relay, 0.0, mc)?.acc)
}

/// Draws `n` samples of one hop from stream 0 under `seed`.
pub fn hop_samples<F>(n: usize, seed: u64, mut draw: F) -> Vec<f64>
where
    F: FnMut(&mut ChaCha8Rng) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| draw(&mut rng)).collect()
}

/// Kolmogorov–Smirnov distance between the empirical distribution of
/// `samples` and `cdf`.
pub fn ks_distance<F>(samples: &mut [f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> Result<f64>,
{
    samples.sort_by(f64::total_cmp);
    let n = samples.len() as f64;
    let mut d: f64 = 0.0;
    for (i, &x) in samples.iter().enumerate() {
        let f = cdf(x)?;
        d = d.max(f - i as f64 / n).max((i + 1) as f64 / n - f);
    }
    Ok(d)
}
