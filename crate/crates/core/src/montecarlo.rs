//! Trial-level protocol simulator for all nine schemes.
//!
//! Trial `t` draws from a ChaCha8 stream keyed by `(seed, t)`, so results do
//! not depend on how trials are split across threads. Non-AN links are drawn
//! first; AN antennas come last in antenna order, so adding antennas leaves
//! every earlier draw of the trial untouched.

use crate::error::{Error, Result};
use crate::exact::WirsSubset;
use crate::network::{resolve, LinkMeans, NetworkConfig, SchemeId};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Metric {
    Sop,
    Ip,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::Sop => "SOP",
            Metric::Ip => "IP",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// Relay phase whenever the WIRS is non-empty.
    #[default]
    PaperFaithful,
    /// Relay phase only when the direct link alone cannot carry `R`.
    StrictIr,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paper_faithful" => Ok(Mode::PaperFaithful),
            "strict-ir" | "strict_ir" => Ok(Mode::StrictIr),
            _ => Err(Error::Config(format!("unknown mode '{s}' (expected paper or strict-ir)"))),
        }
    }
}

/// One draw of every link. SNRs at D and at the relays already include the
/// AN in their denominators; relay-to-D and relay-to-E values are at the
/// nominal relay power `P'/2`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ChannelSample {
    pub psi_sd: f64,
    pub psi_se: f64,
    pub psi_sm: Vec<f64>,
    pub psi_md: Vec<f64>,
    pub psi_me: Vec<f64>,
    pub an_to_d: f64,
    pub an_to_m: Vec<f64>,
    pub wirs: WirsSubset,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub p_hat: f64,
    pub trials: u64,
    pub std_err: f64,
    pub seed: u64,
}

impl Estimate {
    pub fn new(events: u64, trials: u64, seed: u64) -> Self {
        let p_hat = events as f64 / trials as f64;
        Self { p_hat, trials, std_err: (p_hat * (1.0 - p_hat) / trials as f64).sqrt(), seed }
    }

    /// Binomial standard error under a hypothesised probability `p`.
    pub fn std_err_at(&self, p: f64) -> f64 {
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }
}

fn trial_rng(base: &ChaCha8Rng, trial: u64) -> ChaCha8Rng {
    let mut r = base.clone();
    r.set_stream(trial);
    r
}

pub fn sample_channel_into<R: Rng>(means: &LinkMeans, varrho: f64, rng: &mut R, out: &mut ChannelSample) {
    let relays = out.psi_sm.len();
    let mut e = || rng.sample::<f64, _>(Exp1);
    out.psi_sd = means.sigma_sd * e();
    out.psi_se = means.sigma_se * e();
    for r in 0..relays {
        out.psi_sm[r] = means.sigma_sm * e();
        out.psi_md[r] = means.sigma_md * e();
        out.psi_me[r] = means.sigma_me * e();
    }
    out.an_to_d = 0.0;
    out.an_to_m.iter_mut().for_each(|a| *a = 0.0);
    for (sid, slm) in means.sigma_id.iter().zip(&means.sigma_lm) {
        out.an_to_d += sid * e();
        for a in out.an_to_m.iter_mut() {
            *a += slm * e();
        }
    }
    let d = 1.0 + out.an_to_d;
    out.psi_sd /= d;
    out.psi_md.iter_mut().for_each(|x| *x /= d);
    let mut mask = 0u64;
    for r in 0..relays {
        out.psi_sm[r] /= 1.0 + out.an_to_m[r];
        if out.psi_sm[r] > varrho {
            mask |= 1 << r;
        }
    }
    out.wirs = WirsSubset { mask };
}

fn empty_sample(m: usize) -> ChannelSample {
    ChannelSample {
        psi_sm: vec![0.0; m],
        psi_md: vec![0.0; m],
        psi_me: vec![0.0; m],
        an_to_m: vec![0.0; m],
        ..Default::default()
    }
}

/// Draws one sample of `m` relays.
pub fn sample_channel<R: Rng>(means: &LinkMeans, m: u32, rate_r: f64, rng: &mut R) -> ChannelSample {
    let mut s = empty_sample(m as usize);
    sample_channel_into(means, 4f64.powf(rate_r) - 1.0, rng, &mut s);
    s
}

/// Sample drawn for trial `trial` of a run seeded with `seed`.
pub fn sample_trial(cfg: &NetworkConfig, seed: u64, trial: u64) -> Result<ChannelSample> {
    let means = resolve(cfg)?;
    let mut rng = trial_rng(&ChaCha8Rng::seed_from_u64(seed), trial);
    Ok(sample_channel(&means, cfg.m, cfg.rate_r, &mut rng))
}

/// Combined SNRs `(at D, at E)` of a two-slot scheme, or `None` for DT,
/// DSO and DMO (which do not combine a single selected path).
pub fn combiner_snrs(scheme: SchemeId, s: &ChannelSample) -> Option<(f64, f64)> {
    let members = || (0..s.psi_md.len()).filter(|r| s.wirs.mask >> r & 1 == 1);
    let k = s.wirs.cardinality();
    let split = crate::network::LinkMeans::relay_scale(scheme, k);
    let argmax = |v: &[f64]| members().max_by(|&a, &b| v[a].total_cmp(&v[b]));
    let argmin = |v: &[f64]| members().min_by(|&a, &b| v[a].total_cmp(&v[b]));
    match scheme {
        SchemeId::DMC => argmax(&s.psi_md).map(|r| (s.psi_md[r] + s.psi_sd, s.psi_me[r] + s.psi_se)),
        SchemeId::DSC => argmax(&s.psi_md).map(|r| (s.psi_md[r].max(s.psi_sd), s.psi_me[r].max(s.psi_se))),
        SchemeId::DMM => argmin(&s.psi_me).map(|r| (s.psi_md[r] + s.psi_sd, s.psi_me[r] + s.psi_se)),
        SchemeId::DSM => argmin(&s.psi_me).map(|r| (s.psi_md[r].max(s.psi_sd), s.psi_me[r].max(s.psi_se))),
        SchemeId::DMA => (k > 0).then(|| {
            let d: f64 = members().map(|r| split * s.psi_md[r]).sum();
            let e: f64 = members().map(|r| split * s.psi_me[r]).sum();
            (d + s.psi_sd, e + s.psi_se)
        }),
        SchemeId::DSA => (k > 0).then(|| {
            let d = members().map(|r| split * s.psi_md[r]).fold(s.psi_sd, f64::max);
            let e = members().map(|r| split * s.psi_me[r]).fold(s.psi_se, f64::max);
            (d, e)
        }),
        SchemeId::DT | SchemeId::DSO | SchemeId::DMO => None,
    }
}

/// Relay maximising `(1+Ψ_md)/(1+Ψ_me)`.
fn optimal_relay(s: &ChannelSample) -> Option<usize> {
    let ratio = |r: usize| (1.0 + s.psi_md[r]) / (1.0 + s.psi_me[r]);
    (0..s.psi_md.len())
        .filter(|r| s.wirs.mask >> r & 1 == 1)
        .max_by(|&a, &b| ratio(a).total_cmp(&ratio(b)))
}

fn uses_relays(scheme: SchemeId, s: &ChannelSample, rate_r: f64, mode: Mode) -> bool {
    if scheme == SchemeId::DT || s.wirs.mask == 0 {
        return false;
    }
    match mode {
        Mode::PaperFaithful => true,
        Mode::StrictIr => (1.0 + s.psi_sd).log2() < rate_r,
    }
}

/// Secrecy rate of `scheme` on this sample (DT rates when the WIRS is empty).
pub fn secrecy_rate(scheme: SchemeId, s: &ChannelSample, rate_r: f64) -> f64 {
    rates(scheme, s, rate_r, Mode::PaperFaithful).0
}

/// Eavesdropper rate of `scheme` on this sample.
pub fn eaves_rate(scheme: SchemeId, s: &ChannelSample, rate_r: f64) -> f64 {
    rates(scheme, s, rate_r, Mode::PaperFaithful).1
}

fn rates(scheme: SchemeId, s: &ChannelSample, rate_r: f64, mode: Mode) -> (f64, f64) {
    if !uses_relays(scheme, s, rate_r, mode) {
        let ce = (1.0 + s.psi_se).log2();
        return (((1.0 + s.psi_sd).log2() - ce).max(0.0), ce);
    }
    let half_log = |x: f64| 0.5 * x.log2();
    match scheme {
        SchemeId::DSO | SchemeId::DMO => {
            let r = optimal_relay(s).expect("non-empty WIRS");
            let ra = (1.0 + s.psi_sd) / (1.0 + s.psi_se);
            let rb = (1.0 + s.psi_md[r]) / (1.0 + s.psi_me[r]);
            if scheme == SchemeId::DSO {
                (half_log(ra.max(rb)).max(0.0), half_log(1.0 + s.psi_me[r].max(s.psi_se)))
            } else {
                (half_log(ra + rb).max(0.0), half_log(1.0 + s.psi_me[r] + s.psi_se))
            }
        }
        _ => {
            let (d, e) = combiner_snrs(scheme, s).expect("non-empty WIRS");
            ((half_log(1.0 + d) - half_log(1.0 + e)).max(0.0), half_log(1.0 + e))
        }
    }
}

/// Exact event tests, done on SNR ratios rather than logs.
fn events(scheme: SchemeId, s: &ChannelSample, rate_r: f64, mode: Mode) -> (bool, bool) {
    let q1 = 2f64.powf(rate_r);
    if !uses_relays(scheme, s, rate_r, mode) {
        let sop = 1.0 + s.psi_sd < q1 * (1.0 + s.psi_se);
        return (sop, s.psi_se > q1 - 1.0);
    }
    let q = q1 * q1;
    match scheme {
        SchemeId::DSO | SchemeId::DMO => {
            let r = optimal_relay(s).expect("non-empty WIRS");
            let ra = (1.0 + s.psi_sd) / (1.0 + s.psi_se);
            let rb = (1.0 + s.psi_md[r]) / (1.0 + s.psi_me[r]);
            if scheme == SchemeId::DSO {
                (ra.max(rb) < q, s.psi_me[r].max(s.psi_se) > q - 1.0)
            } else {
                (ra + rb < q, s.psi_me[r] + s.psi_se > q - 1.0)
            }
        }
        _ => {
            let (d, e) = combiner_snrs(scheme, s).expect("non-empty WIRS");
            (1.0 + d < q * (1.0 + e), e > q - 1.0)
        }
    }
}

const SCHEMES: usize = SchemeId::ALL.len();

fn scheme_index(s: SchemeId) -> usize {
    SchemeId::ALL.iter().position(|&x| x == s).expect("listed scheme")
}

/// Event counts for every scheme, overall and per WIRS cardinality.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tally {
    pub trials: u64,
    pub seed: u64,
    /// `[scheme][metric]` with metric 0 = SOP, 1 = IP.
    pub events: Vec<[u64; 2]>,
    /// Trials observed with each cardinality 0..=M.
    pub accepted: Vec<u64>,
    /// `[k][scheme][metric]`.
    pub conditional: Vec<Vec<[u64; 2]>>,
}

impl Tally {
    fn zero(m: usize, seed: u64) -> Self {
        Self {
            trials: 0,
            seed,
            events: vec![[0; 2]; SCHEMES],
            accepted: vec![0; m + 1],
            conditional: vec![vec![[0; 2]; SCHEMES]; m + 1],
        }
    }

    fn merge(mut self, other: Tally) -> Self {
        self.trials += other.trials;
        for (a, b) in self.events.iter_mut().zip(&other.events) {
            a[0] += b[0];
            a[1] += b[1];
        }
        for (a, b) in self.accepted.iter_mut().zip(&other.accepted) {
            *a += b;
        }
        for (ka, kb) in self.conditional.iter_mut().zip(&other.conditional) {
            for (a, b) in ka.iter_mut().zip(kb) {
                a[0] += b[0];
                a[1] += b[1];
            }
        }
        self
    }

    fn metric_index(metric: Metric) -> usize {
        match metric {
            Metric::Sop => 0,
            Metric::Ip => 1,
        }
    }

    pub fn estimate(&self, metric: Metric, scheme: SchemeId) -> Estimate {
        let c = self.events[scheme_index(scheme)][Self::metric_index(metric)];
        Estimate::new(c, self.trials, self.seed)
    }

    /// Estimate given `|F| = k`; starves below 1000 accepted trials.
    pub fn conditional_estimate(&self, metric: Metric, scheme: SchemeId, k: u32) -> Result<Estimate> {
        let k = k as usize;
        let accepted = self.accepted.get(k).copied().unwrap_or(0);
        if accepted < MIN_ACCEPTED {
            return Err(Error::Starvation { accepted, required: MIN_ACCEPTED });
        }
        let c = self.conditional[k][scheme_index(scheme)][Self::metric_index(metric)];
        Ok(Estimate::new(c, accepted, self.seed))
    }
}

pub const MIN_ACCEPTED: u64 = 1000;
const CHUNK: u64 = 4096;

/// Runs `trials` trials and counts SOP and IP events for every scheme.
pub fn simulate(cfg: &NetworkConfig, trials: u64, seed: u64, mode: Mode) -> Result<Tally> {
    if trials == 0 {
        return Err(Error::Config("trials must be at least 1".into()));
    }
    let means = resolve(cfg)?;
    let m = cfg.m as usize;
    if m > 63 {
        return Err(Error::Config("at most 63 relays are supported by the simulator".into()));
    }
    let varrho = 4f64.powf(cfg.rate_r) - 1.0;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let chunks = trials.div_ceil(CHUNK);
    let tally = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut t = Tally::zero(m, seed);
            let mut s = empty_sample(m);
            for trial in c * CHUNK..((c + 1) * CHUNK).min(trials) {
                let mut rng = trial_rng(&base, trial);
                sample_channel_into(&means, varrho, &mut rng, &mut s);
                let k = s.wirs.cardinality() as usize;
                t.trials += 1;
                t.accepted[k] += 1;
                for (i, &scheme) in SchemeId::ALL.iter().enumerate() {
                    let (sop, ip) = events(scheme, &s, cfg.rate_r, mode);
                    let hits = [sop as u64, ip as u64];
                    for j in 0..2 {
                        t.events[i][j] += hits[j];
                        t.conditional[k][i][j] += hits[j];
                    }
                }
            }
            t
        })
        .reduce(|| Tally::zero(m, seed), Tally::merge);
    Ok(tally)
}

pub fn estimate(metric: Metric, scheme: SchemeId, cfg: &NetworkConfig, trials: u64, seed: u64, mode: Mode) -> Result<Estimate> {
    Ok(simulate(cfg, trials, seed, mode)?.estimate(metric, scheme))
}

/// Estimate conditioned on `|F| = k` by rejection: `trials` draws are made
/// and only those with the requested cardinality count.
pub fn conditional_estimate(
    metric: Metric,
    scheme: SchemeId,
    cfg: &NetworkConfig,
    k: u32,
    trials: u64,
    seed: u64,
) -> Result<Estimate> {
    if k > cfg.m {
        return Err(Error::Starvation { accepted: 0, required: MIN_ACCEPTED });
    }
    simulate(cfg, trials, seed, Mode::PaperFaithful)?.conditional_estimate(metric, scheme, k)
}

/// Up to `count` combiner SNR pairs `(at D, at E)` of `scheme` from trials
/// whose WIRS has `k` members, scanning at most `max_trials` trials.
pub fn conditioned_snrs(
    scheme: SchemeId,
    cfg: &NetworkConfig,
    k: u32,
    count: usize,
    max_trials: u64,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let means = resolve(cfg)?;
    let varrho = 4f64.powf(cfg.rate_r) - 1.0;
    let base = ChaCha8Rng::seed_from_u64(seed);
    let mut s = empty_sample(cfg.m as usize);
    let mut out = Vec::with_capacity(count);
    for trial in 0..max_trials {
        if out.len() == count {
            break;
        }
        let mut rng = trial_rng(&base, trial);
        sample_channel_into(&means, varrho, &mut rng, &mut s);
        if s.wirs.cardinality() == k {
            if let Some(p) = combiner_snrs(scheme, &s) {
                out.push(p);
            }
        }
    }
    if (out.len() as u64) < MIN_ACCEPTED.min(count as u64) {
        return Err(Error::Starvation { accepted: out.len() as u64, required: MIN_ACCEPTED });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hand_sample() -> ChannelSample {
        ChannelSample {
            psi_sd: 1.0,
            psi_se: 0.5,
            psi_sm: vec![5.0, 5.0],
            psi_md: vec![3.0, 2.0],
            psi_me: vec![0.2, 1.0],
            an_to_d: 0.0,
            an_to_m: vec![0.0, 0.0],
            wirs: WirsSubset { mask: 0b11 },
        }
    }

    #[test]
    fn dmc_hand_arithmetic() {
        let s = hand_sample();
        // relay 0 has the stronger destination link: D = 3 + 1, E = 0.2 + 0.5
        let want = 0.5 * (5.0f64 / 1.7).log2();
        assert!((secrecy_rate(SchemeId::DMC, &s, 0.5) - want).abs() < 1e-15);
        assert!((eaves_rate(SchemeId::DMC, &s, 0.5) - 0.5 * 1.7f64.log2()).abs() < 1e-15);
    }

    #[test]
    fn dt_equal_links_give_zero() {
        let mut s = hand_sample();
        s.psi_se = s.psi_sd;
        assert_eq!(secrecy_rate(SchemeId::DT, &s, 0.5), 0.0);
    }

    #[test]
    fn dmo_dominates_dso_and_mrc_dominates_sc() {
        let cfg = NetworkConfig::default();
        let means = resolve(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..2000 {
            let s = sample_channel(&means, cfg.m, cfg.rate_r, &mut rng);
            assert!(secrecy_rate(SchemeId::DMO, &s, 0.5) >= secrecy_rate(SchemeId::DSO, &s, 0.5));
            if let (Some(m), Some(c)) = (combiner_snrs(SchemeId::DMC, &s), combiner_snrs(SchemeId::DSC, &s)) {
                assert!(m.0 >= c.0 && m.1 >= c.1);
            }
        }
    }

    #[test]
    fn no_an_means_zero_interference() {
        let cfg = NetworkConfig { n: 0, ..Default::default() };
        let s = sample_trial(&cfg, 1, 0).unwrap();
        assert_eq!(s.an_to_d, 0.0);
    }

    #[test]
    fn sample_mean_of_direct_link() {
        let cfg = NetworkConfig { n: 0, ..Default::default() };
        let means = resolve(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 1_000_000;
        let mean: f64 = (0..n).map(|_| sample_channel(&means, 4, 0.5, &mut rng).psi_sd).sum::<f64>() / n as f64;
        assert!((mean / means.sigma_sd - 1.0).abs() < 0.005);
    }

    #[test]
    fn zero_trials_and_impossible_cardinality() {
        let cfg = NetworkConfig::default();
        assert!(estimate(Metric::Sop, SchemeId::DT, &cfg, 0, 1, Mode::PaperFaithful).is_err());
        let e = conditional_estimate(Metric::Sop, SchemeId::DMC, &cfg, cfg.m + 1, 1000, 1).unwrap_err();
        assert_eq!(e.exit_code(), 4);
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = NetworkConfig::default();
        let a = simulate(&cfg, 10_000, 42, Mode::PaperFaithful).unwrap();
        let b = simulate(&cfg, 10_000, 42, Mode::PaperFaithful).unwrap();
        assert_eq!(a, b);
        assert_eq!(sample_trial(&cfg, 9, 17).unwrap(), sample_trial(&cfg, 9, 17).unwrap());
    }
}
