//! Exact intercept and secrecy outage probabilities.
//!
//! Every conditional SOP has the shape `P(S_X < (1+Z)(α + βW))`, where `S_X`
//! is the AN-free legitimate combiner output, `Z` the AN power seen at D and
//! `W` the eavesdropper SNR. The complement of `S_X` and the density of `W`
//! are exponential polynomials; integrating the complement against `Z`
//! (hypoexponential) and then against `W` leaves one Tricomi `U` per term.

use crate::error::{Error, Result};
use crate::exppoly::{ExpPoly, Law};
use crate::network::{derive_constants, resolve, DerivedConstants, LinkMeans, NetworkConfig, SchemeId};
use crate::series;
use crate::special::{binomial, factorial, tricomi_u};

/// Outage threshold `(1+Z)(α + βW)` on the AN-free combiner output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Threshold {
    pub alpha: f64,
    pub beta: f64,
}

/// AN power at a receiver: Σ_i Exp(σ_i), with partial-fraction weights.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnField {
    pub sigma: Vec<f64>,
    pub pi: Vec<f64>,
}

impl AnField {
    pub fn is_empty(&self) -> bool {
        self.sigma.is_empty()
    }

    /// `E[e^{-sZ}]`
    pub fn laplace(&self, s: f64) -> f64 {
        self.sigma.iter().map(|si| 1.0 / (1.0 + s * si)).product()
    }

    /// `E[(1+Z)^n]` for n = 0..=n_max.
    pub fn shifted_moments(&self, n_max: usize) -> Vec<f64> {
        let mut z = vec![0.0; n_max + 1];
        z[0] = 1.0;
        for &s in &self.sigma {
            z = crate::exppoly::sum_moments(&z, &Law::Exp(s).moments(n_max));
        }
        crate::exppoly::sum_moments(&z, &vec![1.0; n_max + 1])
    }
}

/// A configuration resolved once and shared by all evaluations.
#[derive(Debug, Clone)]
pub struct Model {
    pub cfg: NetworkConfig,
    pub means: LinkMeans,
    pub consts: DerivedConstants,
    pub an_d: AnField,
    pub an_relay: AnField,
}

impl Model {
    pub fn new(cfg: &NetworkConfig) -> Result<Self> {
        let means = resolve(cfg)?;
        let consts = derive_constants(&means, cfg.rate_r)?;
        let an_d = AnField { sigma: means.sigma_id.clone(), pi: consts.pi_sd.clone() };
        let an_relay = AnField { sigma: means.sigma_lm.clone(), pi: consts.pi_s.clone() };
        Ok(Self { cfg: cfg.clone(), means, consts, an_d, an_relay })
    }

    pub fn m(&self) -> u32 {
        self.cfg.m
    }

    /// AN-free combiner output at D for `scheme` with a WIRS of size `k`.
    pub fn legit_law(&self, scheme: SchemeId, k: u32) -> Result<Law> {
        let m = &self.means;
        let md = m.sigma_md * LinkMeans::relay_scale(scheme, k);
        Ok(match scheme {
            SchemeId::DT => Law::Exp(m.sigma_sd),
            SchemeId::DMC => Law::MaxIid(k, md).plus_exp(m.sigma_sd),
            SchemeId::DSC => Law::MaxIid(k, md).max(Law::Exp(m.sigma_sd)),
            SchemeId::DMM => Law::Exp(md).plus_exp(m.sigma_sd),
            SchemeId::DSM => Law::Exp(md).max(Law::Exp(m.sigma_sd)),
            SchemeId::DMA => Law::Erlang(k, md).plus_exp(m.sigma_sd),
            SchemeId::DSA => Law::MaxIid(k, md).max(Law::Exp(m.sigma_sd)),
            SchemeId::DMO | SchemeId::DSO => return Err(no_closed_form(scheme)),
        })
    }

    /// Eavesdropper SNR for `scheme` with a WIRS of size `k`.
    pub fn eve_law(&self, scheme: SchemeId, k: u32) -> Result<Law> {
        let m = &self.means;
        let me = m.sigma_me * LinkMeans::relay_scale(scheme, k);
        Ok(match scheme {
            SchemeId::DT => Law::Exp(m.sigma_se),
            SchemeId::DMC => Law::Exp(me).plus_exp(m.sigma_se),
            SchemeId::DSC => Law::Exp(me).max(Law::Exp(m.sigma_se)),
            SchemeId::DMM => Law::Exp(me / k as f64).plus_exp(m.sigma_se),
            SchemeId::DSM => Law::Exp(me / k as f64).max(Law::Exp(m.sigma_se)),
            SchemeId::DMA => Law::Erlang(k, me).plus_exp(m.sigma_se),
            SchemeId::DSA => Law::MaxIid(k, me).max(Law::Exp(m.sigma_se)),
            SchemeId::DMO | SchemeId::DSO => return Err(no_closed_form(scheme)),
        })
    }

    pub fn threshold(&self, scheme: SchemeId) -> Threshold {
        let c = &self.consts;
        match scheme {
            SchemeId::DT => Threshold { alpha: c.delta, beta: c.delta + 1.0 },
            _ => Threshold { alpha: c.varrho, beta: c.varrho + 1.0 },
        }
    }

    /// Eavesdropper SNR above which it decodes.
    pub fn intercept_level(&self, scheme: SchemeId) -> f64 {
        match scheme {
            SchemeId::DT => self.consts.delta,
            _ => self.consts.varrho,
        }
    }

    /// `Pr(Ψ_sm < ϱ)`: a single relay fails to decode the source.
    pub fn relay_failure(&self) -> f64 {
        let s = self.consts.varrho / self.means.sigma_sm;
        -(-s - self.an_relay.sigma.iter().map(|l| (s * l).ln_1p()).sum::<f64>()).exp_m1()
    }

    /// `Pr(|F| = k)` for k = 0..=M.
    pub fn cardinality_distribution(&self) -> Vec<f64> {
        let m = self.m();
        let e = self.relay_failure();
        (0..=m)
            .map(|k| binomial(m, k) * (1.0 - e).powi(k as i32) * e.powi((m - k) as i32))
            .collect()
    }

    pub fn sop_conditional(&self, scheme: SchemeId, k: u32) -> Result<f64> {
        let scheme = if k == 0 { SchemeId::DT } else { scheme };
        let legit = self.legit_law(scheme, k)?;
        let eve = self.eve_law(scheme, k)?;
        outage(&legit, &eve, self.threshold(scheme), &self.an_d)
    }

    pub fn ip_conditional(&self, scheme: SchemeId, k: u32) -> Result<f64> {
        if k == 0 || scheme == SchemeId::DT {
            return Ok((-self.consts.delta / self.means.sigma_se).exp());
        }
        let eve = self.eve_law(scheme, k)?;
        let p = eve.complement()?.eval(self.intercept_level(scheme));
        Ok(p.clamp(0.0, 1.0))
    }

    pub fn sop_total(&self, scheme: SchemeId) -> Result<f64> {
        if scheme == SchemeId::DT {
            return self.sop_conditional(scheme, 0);
        }
        let pr = self.cardinality_distribution();
        let mut total = 0.0;
        for (k, p) in pr.iter().enumerate() {
            if *p > 0.0 {
                total += p * self.sop_conditional(scheme, k as u32)?;
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }

    pub fn ip_total(&self, scheme: SchemeId) -> Result<f64> {
        if scheme == SchemeId::DT {
            return self.ip_conditional(scheme, 0);
        }
        let pr = self.cardinality_distribution();
        let mut total = 0.0;
        for (k, p) in pr.iter().enumerate() {
            if *p > 0.0 {
                total += p * self.ip_conditional(scheme, k as u32)?;
            }
        }
        Ok(total.clamp(0.0, 1.0))
    }
}

fn no_closed_form(scheme: SchemeId) -> Error {
    Error::Unsupported(format!("{scheme} has no closed form; use the simulator"))
}

/// Result of the closed-form outage integral with its rounding scale.
#[derive(Debug, Clone, Copy)]
pub struct ClosedForm {
    pub value: f64,
    /// Σ of absolute contributions; the value is only good to ~1e-16 of this.
    pub abs_sum: f64,
}

impl ClosedForm {
    pub fn rel_error_bound(&self) -> f64 {
        let terms = 1e-15 * self.abs_sum.max(1.0);
        terms / self.value.abs().max(f64::MIN_POSITIVE)
    }
}

/// `E_Z[G((1+Z)u)]` for an exponential polynomial `G`.
///
/// Tilting by `e^{-sZ}` keeps each AN antenna exponential with mean
/// `σ_i/(1+sσ_i)`, so `E[(1+Z)^k e^{-sZ}] = L(s)·E[(1+Z̃)^k]` with only
/// positive terms. Returns the value and the sum of absolute contributions.
pub fn an_average(g: &ExpPoly, an: &AnField, u: f64) -> (f64, f64) {
    let mut val = 0.0;
    let mut abs = 0.0;
    for t in &g.terms {
        let s = t.rate * u;
        let base = t.coef * u.powi(t.power as i32) * (-s).exp();
        let c = if an.is_empty() {
            base
        } else {
            let tilted = AnField {
                sigma: an.sigma.iter().map(|si| si / (1.0 + s * si)).collect(),
                pi: Vec::new(),
            };
            base * an.laplace(s) * tilted.shifted_moments(t.power as usize)[t.power as usize]
        };
        val += c;
        abs += c.abs();
    }
    (val, abs)
}

/// CDF of `S_X/(1+Z)` at `gamma`.
pub fn cdf_with_an(legit: &Law, an: &AnField, gamma: f64) -> Result<f64> {
    if gamma <= 0.0 {
        return Ok(0.0);
    }
    let (v, _) = an_average(&legit.complement()?, an, gamma);
    Ok((1.0 - v).clamp(0.0, 1.0))
}

/// Arguments `(a, b, x)` of every Tricomi `U` the closed form evaluates.
pub fn hypergeometric_arguments(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> Result<Vec<(i32, i32, f64)>> {
    let mut out = Vec::new();
    closed_form_impl(legit, eve, thr, an, &mut |a, b, x| {
        out.push((a, b, x));
        tricomi_u(a, b, x).map_err(Error::from)
    })?;
    Ok(out)
}

/// `P(S_X < (1+Z)(α + βW))` by term-wise integration.
pub fn outage_closed_form(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> Result<ClosedForm> {
    closed_form_impl(legit, eve, thr, an, &mut |a, b, x| tricomi_u(a, b, x).map_err(Error::from))
}

fn closed_form_impl(
    legit: &Law,
    eve: &Law,
    thr: Threshold,
    an: &AnField,
    u_fn: &mut dyn FnMut(i32, i32, f64) -> Result<f64>,
) -> Result<ClosedForm> {
    let g = legit.complement()?;
    let f = eve.density()?;
    let (alpha, beta) = (thr.alpha, thr.beta);
    let mut sum = 0.0;
    let mut abs = 0.0;
    for gt in &g.terms {
        let (c, k, a) = (gt.coef, gt.power, gt.rate);
        let pre = c * (-a * alpha).exp();
        for ft in &f.terms {
            let (d, n, b) = (ft.coef, ft.power, ft.rate);
            let lam = b + a * beta;
            if an.is_empty() {
                // ∫ w^n e^{-bw} (α+βw)^k e^{-a(α+βw)} dw
                let mut acc = 0.0;
                for m in 0..=k {
                    acc += binomial(k, m)
                        * alpha.powi((k - m) as i32)
                        * beta.powi(m as i32)
                        * factorial(n + m)
                        / lam.powi((n + m + 1) as i32);
                }
                let v = pre * d * acc;
                sum += v;
                abs += v.abs();
                continue;
            }
            for (pi, si) in an.pi.iter().zip(&an.sigma) {
                let q = 1.0 / (a * si);
                let cc = (alpha + q) / beta;
                let x = lam * cc;
                let mut acc = 0.0;
                for j in 0..=k {
                    let p = j as i32 + 1;
                    let mut inner = 0.0;
                    for m in 0..=k {
                        let big_a = (n + m + 1) as i32;
                        let u = u_fn(big_a, big_a + 1 - p, x)?;
                        inner += binomial(k, m)
                            * alpha.powi((k - m) as i32)
                            * beta.powi(m as i32)
                            * factorial(n + m)
                            * cc.powi(big_a - p)
                            * u;
                    }
                    acc += inner / (factorial(k - j) * (a * beta).powi(p));
                }
                let v = pre * d * pi / si * factorial(k) * acc;
                sum += v;
                abs += v.abs();
            }
        }
    }
    Ok(ClosedForm { value: 1.0 - sum, abs_sum: abs.max(1.0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Route {
    ClosedForm,
    Series,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OutageValue {
    pub value: f64,
    pub route: Route,
    /// Estimated relative error of `value`.
    pub rel_err: f64,
}

/// `P(S_X < (1+Z)(α + βW))` as `∫ f_W(w) E_Z[F((1+Z)(α+βw))] dw` by
/// adaptive quadrature over `w`.
pub fn outage_quadrature(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> Result<OutageValue> {
    let g = legit.complement()?;
    let f = eve.density()?;
    let integrand = |w: f64| {
        let (v, _) = an_average(&g, an, thr.alpha + thr.beta * w);
        f.eval(w) * (1.0 - v)
    };
    // split at the eavesdropper scale so both the bulk and the tail are seen
    let knee = 4.0 * eve.mean();
    // 1 − E_Z[G] carries absolute rounding near 1e-16 per unit of eavesdropper mass
    let floor = 1e-14;
    let head = crate::quad::integrate(integrand, 0.0, knee, 1e-10, floor, 4000)
        .ok_or_else(|| Error::Singularity("outage quadrature did not converge".into()))?;
    let tail = crate::quad::integrate_to_infinity(integrand, knee, 1e-10, (head.value.abs() * 1e-12).max(floor), 4000)
        .ok_or_else(|| Error::Singularity("outage quadrature did not converge".into()))?;
    let value = head.value + tail.value;
    // rounding in 1 − E_Z[G]: sample the cancellation scale at the eavesdropper mean
    let (_, abs) = an_average(&g, an, thr.alpha + thr.beta * eve.mean());
    let rel_err = ((head.abs_err + tail.abs_err) + 1e-15 * abs.max(1.0)) / value.abs().max(f64::MIN_POSITIVE);
    Ok(OutageValue { value: value.clamp(0.0, 1.0), route: Route::Quadrature, rel_err })
}

/// Exact outage, choosing among the closed form, the high-SNR series and
/// quadrature by their error estimates.
pub fn outage_detailed(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> Result<OutageValue> {
    let closed = outage_closed_form(legit, eve, thr, an);
    if let Ok(c) = &closed {
        if c.rel_error_bound() < 1e-6 {
            return Ok(OutageValue { value: c.value.clamp(0.0, 1.0), route: Route::ClosedForm, rel_err: c.rel_error_bound() });
        }
    }
    if let Some(s) = series::outage_series(legit, eve, thr, an) {
        return Ok(OutageValue { value: s.value.max(0.0), route: Route::Series, rel_err: s.tail });
    }
    outage_quadrature(legit, eve, thr, an)
}

pub fn outage(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> Result<f64> {
    outage_detailed(legit, eve, thr, an).map(|o| o.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct WirsSubset {
    pub mask: u64,
}

impl WirsSubset {
    pub fn cardinality(&self) -> u32 {
        self.mask.count_ones()
    }
}

pub fn wirs_probability(cfg: &NetworkConfig, subset: WirsSubset) -> Result<f64> {
    let model = Model::new(cfg)?;
    if cfg.m < 64 && subset.mask >> cfg.m != 0 {
        return Err(Error::Config(format!("subset mask {:#x} exceeds M = {}", subset.mask, cfg.m)));
    }
    let e = model.relay_failure();
    let k = subset.cardinality() as i32;
    Ok((1.0 - e).powi(k) * e.powi(cfg.m as i32 - k))
}

pub fn ip_direct(cfg: &NetworkConfig) -> Result<f64> {
    Model::new(cfg)?.ip_conditional(SchemeId::DT, 0)
}

pub fn sop_direct(cfg: &NetworkConfig) -> Result<f64> {
    Model::new(cfg)?.sop_conditional(SchemeId::DT, 0)
}

fn check_conditional(scheme: SchemeId, cfg: &NetworkConfig, k: u32) -> Result<()> {
    if !scheme.has_closed_form() {
        return Err(no_closed_form(scheme));
    }
    if scheme != SchemeId::DT && (k < 1 || k > cfg.m) {
        return Err(Error::Config(format!("WIRS size {k} outside 1..={}", cfg.m)));
    }
    Ok(())
}

pub fn sop_exact(scheme: SchemeId, cfg: &NetworkConfig, k: u32) -> Result<f64> {
    check_conditional(scheme, cfg, k)?;
    Model::new(cfg)?.sop_conditional(scheme, k)
}

pub fn ip_exact(scheme: SchemeId, cfg: &NetworkConfig, k: u32) -> Result<f64> {
    check_conditional(scheme, cfg, k)?;
    Model::new(cfg)?.ip_conditional(scheme, k)
}

pub fn sop_total(scheme: SchemeId, cfg: &NetworkConfig) -> Result<f64> {
    if !scheme.has_closed_form() {
        return Err(no_closed_form(scheme));
    }
    Model::new(cfg)?.sop_total(scheme)
}

pub fn ip_total(scheme: SchemeId, cfg: &NetworkConfig) -> Result<f64> {
    if !scheme.has_closed_form() {
        return Err(no_closed_form(scheme));
    }
    Model::new(cfg)?.ip_total(scheme)
}

/// Distribution functions used on the way to the closed forms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistributionKind {
    /// CDF of `max_{m∈F} Ψ_md + Ψ_sd`.
    MrcConventional,
    /// CDF of `Ψ_{m*d} + Ψ_sd` with the relay picked on the eavesdropper side.
    MrcMinimum,
    /// PDF of `max{max_{m∈F} Ψ'_me, Ψ_se}` under the split relay power.
    SelectionAllEavesdropperPdf,
    /// CDF of `Σ_{m∈F} Ψ'_md + Ψ_sd` under the split relay power.
    MrcAll,
    /// CDF of `Ψ_sd`.
    Direct,
    /// CDF of `max_{m∈F} Ψ_md`.
    MaxRelay,
}

pub fn distribution_value(kind: DistributionKind, cfg: &NetworkConfig, k: u32, gamma: f64) -> Result<f64> {
    if gamma < 0.0 {
        return Err(Error::Config(format!("distribution argument must be ≥ 0, got {gamma}")));
    }
    let model = Model::new(cfg)?;
    let md = model.means.sigma_md;
    let legit = match kind {
        DistributionKind::MrcConventional => model.legit_law(SchemeId::DMC, k)?,
        DistributionKind::MrcMinimum => model.legit_law(SchemeId::DMM, k)?,
        DistributionKind::MrcAll => model.legit_law(SchemeId::DMA, k)?,
        DistributionKind::Direct => Law::Exp(model.means.sigma_sd),
        DistributionKind::MaxRelay => Law::MaxIid(k, md),
        DistributionKind::SelectionAllEavesdropperPdf => {
            return Ok(model.eve_law(SchemeId::DSA, k)?.density()?.eval(gamma).max(0.0));
        }
    };
    cdf_with_an(&legit, &model.an_d, gamma)
}
