//! Scenario description, resolved link means and the scheme taxonomy.

use crate::error::Error;
use serde::Deserialize;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SchemeId {
    DT,
    DMC,
    DSC,
    DMM,
    DSM,
    DMO,
    DSO,
    DMA,
    DSA,
}

impl SchemeId {
    pub const ALL: [SchemeId; 9] = [
        SchemeId::DT,
        SchemeId::DMC,
        SchemeId::DSC,
        SchemeId::DMM,
        SchemeId::DSM,
        SchemeId::DMO,
        SchemeId::DSO,
        SchemeId::DMA,
        SchemeId::DSA,
    ];

    /// Relay schemes with a closed-form conditional SOP and IP.
    pub const CLOSED_FORM: [SchemeId; 6] = [
        SchemeId::DMC,
        SchemeId::DSC,
        SchemeId::DMM,
        SchemeId::DSM,
        SchemeId::DMA,
        SchemeId::DSA,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SchemeId::DT => "DT",
            SchemeId::DMC => "DMC",
            SchemeId::DSC => "DSC",
            SchemeId::DMM => "DMM",
            SchemeId::DSM => "DSM",
            SchemeId::DMO => "DMO",
            SchemeId::DSO => "DSO",
            SchemeId::DMA => "DMA",
            SchemeId::DSA => "DSA",
        }
    }

    pub fn has_closed_form(self) -> bool {
        !matches!(self, SchemeId::DMO | SchemeId::DSO)
    }

    /// DSA and DMA split the relay power budget over every member of the WIRS.
    pub fn splits_relay_power(self) -> bool {
        matches!(self, SchemeId::DMA | SchemeId::DSA)
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SchemeId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        SchemeId::ALL
            .iter()
            .copied()
            .find(|id| id.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Config(format!("unknown scheme '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NetworkConfig {
    #[serde(rename = "M")]
    pub m: u32,
    #[serde(rename = "N")]
    pub n: u32,
    pub rate_r: f64,
    #[serde(alias = "anchor_snr_db")]
    pub snr_anchor_db: f64,
    pub eps: f64,
    pub eps_hat: f64,
    pub eps_tilde: f64,
    pub mer_db: f64,
    pub an_base: f64,
    pub an_spread: f64,
    pub total_power: f64,
    /// Pins σ̄_se (dB) instead of tying it to the anchor through `mer_db`.
    pub eve_snr_db: Option<f64>,
}

impl Default for NetworkConfig {
    fn default() -> Self {
        Self {
            m: 4,
            n: 5,
            rate_r: 0.5,
            snr_anchor_db: 10.0,
            eps: 1.01,
            eps_hat: 1.03,
            eps_tilde: 0.9,
            mer_db: 11.0,
            an_base: 1.0,
            an_spread: 1.05,
            total_power: 1.0,
            eve_snr_db: None,
        }
    }
}

impl NetworkConfig {
    pub fn validate(&self) -> Result<(), Error> {
        let positive = [
            ("rate_r", self.rate_r),
            ("eps", self.eps),
            ("eps_hat", self.eps_hat),
            ("eps_tilde", self.eps_tilde),
            ("an_base", self.an_base),
            ("an_spread", self.an_spread),
            ("total_power", self.total_power),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be a positive finite number, got {v}")));
            }
        }
        if self.m < 1 {
            return Err(Error::Config("M must be at least 1".into()));
        }
        if !self.snr_anchor_db.is_finite() || !self.mer_db.is_finite() {
            return Err(Error::Config("snr_anchor_db and mer_db must be finite".into()));
        }
        if let Some(e) = self.eve_snr_db {
            if !e.is_finite() {
                return Err(Error::Config("eve_snr_db must be finite".into()));
            }
        }
        if self.n >= 2 && self.an_spread == 1.0 {
            return Err(Error::Config(
                "an_spread = 1 with N ≥ 2 gives coincident AN means; pick a spread ≠ 1".into(),
            ));
        }
        Ok(())
    }

    pub fn with_anchor(&self, db: f64) -> Self {
        Self { snr_anchor_db: db, ..self.clone() }
    }

    /// Freezes the eavesdropper links at their current resolved level.
    pub fn pin_eavesdropper(&self) -> Self {
        let se = self.eve_snr_db.unwrap_or(self.snr_anchor_db - self.mer_db);
        Self { eve_snr_db: Some(se), ..self.clone() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LinkMeans {
    pub sigma_sd: f64,
    pub sigma_sm: f64,
    pub sigma_md: f64,
    pub sigma_se: f64,
    pub sigma_me: f64,
    pub sigma_id: Vec<f64>,
    pub sigma_lm: Vec<f64>,
}

impl LinkMeans {
    /// Relay-side means under a relay power `P'/(K+1)` instead of `P'/2`.
    pub fn relay_scale(scheme: SchemeId, cardinality: u32) -> f64 {
        if scheme.splits_relay_power() {
            2.0 / (cardinality as f64 + 1.0)
        } else {
            1.0
        }
    }
}

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn resolve(config: &NetworkConfig) -> Result<LinkMeans, Error> {
    config.validate()?;
    let sigma_sd = db_to_linear(config.snr_anchor_db);
    let sigma_md = sigma_sd / config.eps;
    let sigma_sm = config.eps_hat * sigma_md;
    let sigma_se = match config.eve_snr_db {
        Some(db) => db_to_linear(db),
        None => sigma_sd / db_to_linear(config.mer_db),
    };
    let sigma_me = sigma_se / config.eps_tilde;
    let an: Vec<f64> = (0..config.n)
        .map(|i| config.an_base * config.an_spread.powi(i as i32))
        .collect();
    Ok(LinkMeans { sigma_sd, sigma_sm, sigma_md, sigma_se, sigma_me, sigma_id: an.clone(), sigma_lm: an })
}

/// Partial-fraction weights π_i = Π_{j≠i} σ_i/(σ_i − σ_j) of a sum of
/// independent exponentials with means `sigma`.
pub fn hypoexponential_weights(sigma: &[f64]) -> Result<Vec<f64>, Error> {
    let mut out = Vec::with_capacity(sigma.len());
    for (i, &si) in sigma.iter().enumerate() {
        let mut w = 1.0;
        for (j, &sj) in sigma.iter().enumerate() {
            if i == j {
                continue;
            }
            let den = si - sj;
            if den.abs() <= 1e-9 * si.abs().max(sj.abs()) {
                return Err(Error::Singularity(format!("coincident means {si} and {sj}")));
            }
            w *= si / den;
        }
        out.push(w);
    }
    Ok(out)
}

fn checked_ratio(num: f64, den: f64, what: &str) -> Result<f64, Error> {
    let scale = num.abs().max(den.abs()).max(f64::MIN_POSITIVE);
    if den.abs() <= 1e-9 * scale {
        return Err(Error::Singularity(format!("{what}: vanishing denominator")));
    }
    Ok(num / den)
}

/// Scalar and vector constants shared by the closed forms.
#[derive(Debug, Clone, PartialEq)]
pub struct DerivedConstants {
    pub rate_r: f64,
    pub delta: f64,
    pub varrho: f64,
    pub kappa_sd: Vec<f64>,
    pub pi_sd: Vec<f64>,
    pub kappa_s: Vec<f64>,
    pub pi_s: Vec<f64>,
    pub sigma_me: f64,
    pub sigma_se: f64,
    /// ρ = σ̄_me/(σ̄_me − σ̄_se)
    pub rho: f64,
    /// λ = σ̄_se/(σ̄_me − σ̄_se)
    pub lambda: f64,
    /// IP of maximal-ratio combining at E: Σ r̃(l)·exp(−t̃(l)ϱ).
    pub r_tilde: [f64; 5],
    pub t_tilde: [f64; 5],
    /// IP of selection combining at E: Σ r(l)·exp(−b(l)ϱ).
    pub r: [f64; 3],
    pub b: [f64; 3],
    /// density of max{Ψ_me, Ψ_se}: Σ a(l)·exp(−b(l)w)
    pub a: [f64; 3],
    /// density of Ψ_me + Ψ_se: Σ h(l)·exp(−g(l)w)
    pub h: [f64; 2],
    pub g: [f64; 2],
}

impl DerivedConstants {
    /// Density of min_K Ψ_me + Ψ_se: Σ h̃(l)·exp(−g̃(l)w).
    pub fn h_g_tilde(&self, k: u32) -> Result<([f64; 2], [f64; 2]), Error> {
        let k = k as f64;
        let c = checked_ratio(k, k * self.sigma_se - self.sigma_me, "h̃")?;
        Ok(([c, -c], [1.0 / self.sigma_se, k / self.sigma_me]))
    }

    /// b̃ and ã: IP exponents and density weights of max{min_K Ψ_me, Ψ_se}.
    pub fn b_a_tilde(&self, k: u32) -> ([f64; 3], [f64; 3]) {
        let k = k as f64;
        let (me, se) = (self.sigma_me, self.sigma_se);
        ([k / me, 1.0 / se, 1.0 / se + k / me], [k / me, 1.0 / se, -(1.0 / se + k / me)])
    }

    /// c̃ and c of the density of max{max_K Ψ_me, Ψ_se} for the m₁-th
    /// binomial term; `sigma_me` is the (power-scaled) relay mean.
    pub fn c_tilde_c(m1: u32, sigma_me: f64, sigma_se: f64) -> ([f64; 4], [f64; 4]) {
        let m = m1 as f64 / sigma_me;
        let varpi = m + 1.0 / sigma_se;
        ([m, -m, -1.0 / sigma_se, 1.0 / sigma_se], [m, varpi, varpi, 1.0 / sigma_se])
    }

    /// ζ = 1/σ̄_se − 1/σ̄_me
    pub fn zeta(sigma_me: f64, sigma_se: f64) -> f64 {
        1.0 / sigma_se - 1.0 / sigma_me
    }
}

pub fn derive_constants(means: &LinkMeans, rate_r: f64) -> Result<DerivedConstants, Error> {
    if !(rate_r > 0.0) {
        return Err(Error::Config(format!("rate must be positive, got {rate_r}")));
    }
    let delta = 2f64.powf(rate_r) - 1.0;
    let varrho = 2f64.powf(2.0 * rate_r) - 1.0;
    let pi_sd = hypoexponential_weights(&means.sigma_id)?;
    let pi_s = hypoexponential_weights(&means.sigma_lm)?;
    let kappa_sd = means.sigma_id.iter().map(|s| means.sigma_sd / s).collect();
    let kappa_s = means.sigma_lm.iter().map(|s| means.sigma_sm / s).collect();
    let (me, se) = (means.sigma_me, means.sigma_se);
    let rho = checked_ratio(me, me - se, "ρ")?;
    let lambda = checked_ratio(se, me - se, "λ")?;
    let inv = checked_ratio(1.0, me - se, "h")?;
    Ok(DerivedConstants {
        rate_r,
        delta,
        varrho,
        kappa_sd,
        pi_sd,
        kappa_s,
        pi_s,
        sigma_me: me,
        sigma_se: se,
        rho,
        lambda,
        r_tilde: [1.0, -rho, rho, lambda, -lambda],
        t_tilde: [0.0, 0.0, 1.0 / me, 0.0, 1.0 / se],
        r: [1.0, 1.0, -1.0],
        b: [1.0 / me, 1.0 / se, 1.0 / se + 1.0 / me],
        a: [1.0 / me, 1.0 / se, -(1.0 / se + 1.0 / me)],
        h: [inv, -inv],
        g: [1.0 / me, 1.0 / se],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve() {
        let cfg = NetworkConfig::default();
        let m = resolve(&cfg).unwrap();
        assert!(((m.sigma_sd / m.sigma_md) - 1.01).abs() < 1e-12);
        assert!(((m.sigma_sm / m.sigma_md) - 1.03).abs() < 1e-12);
        assert!(((m.sigma_se / m.sigma_me) - 0.9).abs() < 1e-12);
        assert_eq!(m.sigma_id.len(), 5);
    }

    #[test]
    fn mer_ties_eavesdropper() {
        let cfg = NetworkConfig { mer_db: 11.0, snr_anchor_db: 20.0, ..Default::default() };
        let m = resolve(&cfg).unwrap();
        assert!((m.sigma_se - 100.0 / 10f64.powf(1.1)).abs() < 1e-12);
    }

    #[test]
    fn no_an() {
        let m = resolve(&NetworkConfig { n: 0, ..Default::default() }).unwrap();
        assert!(m.sigma_id.is_empty() && m.sigma_lm.is_empty());
    }

    #[test]
    fn anchor_scaling() {
        let a = resolve(&NetworkConfig::default()).unwrap();
        let b = resolve(&NetworkConfig::default().with_anchor(20.0)).unwrap();
        for (x, y) in [(a.sigma_sd, b.sigma_sd), (a.sigma_md, b.sigma_md), (a.sigma_sm, b.sigma_sm), (a.sigma_se, b.sigma_se)] {
            assert!((y / x - 10.0).abs() < 1e-12);
        }
        assert_eq!(a.sigma_id, b.sigma_id);
    }

    #[test]
    fn rejects_flat_spread() {
        assert!(resolve(&NetworkConfig { an_spread: 1.0, ..Default::default() }).is_err());
        assert!(resolve(&NetworkConfig { an_spread: 1.0, n: 1, ..Default::default() }).is_ok());
    }

    #[test]
    fn constants() {
        let m = resolve(&NetworkConfig { n: 3, ..Default::default() }).unwrap();
        let d = derive_constants(&m, 1.0).unwrap();
        assert_eq!((d.delta, d.varrho), (1.0, 3.0));
        assert!((d.pi_sd.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let mut m2 = m.clone();
        m2.sigma_me = m2.sigma_se;
        assert!(matches!(derive_constants(&m2, 0.5), Err(Error::Singularity(_))));
    }

    #[test]
    fn scheme_parse() {
        assert_eq!("dmc".parse::<SchemeId>().unwrap(), SchemeId::DMC);
        assert!("xyz".parse::<SchemeId>().is_err());
    }
}
