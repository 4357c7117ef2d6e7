//! Finite sums `Σ c·t^k·e^{-a t}` and the distribution laws built from them.
//!
//! Every legitimate and eavesdropper SNR in the closed forms is a sum or a
//! maximum of independent exponentials, so its CDF, complement and density
//! all live in this class and stay closed under the operations needed here.

use crate::error::{Error, Result};
use crate::special::{binomial, factorial};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coef: f64,
    pub power: u32,
    pub rate: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExpPoly {
    pub terms: Vec<Term>,
}

impl ExpPoly {
    pub fn constant(c: f64) -> Self {
        Self::term(c, 0, 0.0)
    }

    pub fn term(coef: f64, power: u32, rate: f64) -> Self {
        Self { terms: vec![Term { coef, power, rate }] }
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.terms.iter().map(|x| x.coef * t.powi(x.power as i32) * (-x.rate * t).exp()).sum()
    }

    /// Σ |terms|, a scale for the rounding error of [`eval`](Self::eval).
    pub fn eval_abs(&self, t: f64) -> f64 {
        self.terms.iter().map(|x| (x.coef * t.powi(x.power as i32) * (-x.rate * t).exp()).abs()).sum()
    }

    pub fn scale(mut self, c: f64) -> Self {
        for t in &mut self.terms {
            t.coef *= c;
        }
        self
    }

    pub fn add(mut self, other: &ExpPoly) -> Self {
        self.terms.extend_from_slice(&other.terms);
        self.simplify()
    }

    pub fn sub(self, other: &ExpPoly) -> Self {
        self.add(&other.clone().scale(-1.0))
    }

    pub fn mul(&self, other: &ExpPoly) -> Self {
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for a in &self.terms {
            for b in &other.terms {
                terms.push(Term { coef: a.coef * b.coef, power: a.power + b.power, rate: a.rate + b.rate });
            }
        }
        ExpPoly { terms }.simplify()
    }

    pub fn powi(&self, k: u32) -> Self {
        (0..k).fold(ExpPoly::constant(1.0), |acc, _| acc.mul(self))
    }

    pub fn derivative(&self) -> Self {
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.power > 0 {
                terms.push(Term { coef: t.coef * t.power as f64, power: t.power - 1, rate: t.rate });
            }
            if t.rate != 0.0 {
                terms.push(Term { coef: -t.coef * t.rate, power: t.power, rate: t.rate });
            }
        }
        ExpPoly { terms }.simplify()
    }

    /// `∫_t^∞ f(x) dx` as a function of `t`.
    pub fn tail_integral(&self) -> Result<Self> {
        let mut terms = Vec::new();
        for t in &self.terms {
            if !(t.rate > 0.0) {
                return Err(Error::Singularity("tail integral of a non-decaying term".into()));
            }
            // k!/a^{k+1} e^{-at} Σ_{i≤k} (at)^i/i!
            let k = t.power;
            for i in 0..=k {
                let c = t.coef * factorial(k) / (factorial(i) * t.rate.powi((k + 1 - i) as i32));
                terms.push(Term { coef: c, power: i, rate: t.rate });
            }
        }
        Ok(ExpPoly { terms }.simplify())
    }

    /// Density of `X + V` where `X` has density `self` and `V ~ Exp(mean)`.
    pub fn convolve_exp(&self, mean: f64) -> Result<Self> {
        let mu = 1.0 / mean;
        let mut terms = Vec::new();
        for t in &self.terms {
            let d = t.rate - mu;
            let p = t.power;
            let c = t.coef * mu;
            if d.abs() <= 1e-9 * t.rate.max(mu) {
                if d != 0.0 {
                    return Err(Error::Singularity(format!(
                        "convolution of nearly equal rates {} and {}",
                        t.rate, mu
                    )));
                }
                terms.push(Term { coef: c / (p + 1) as f64, power: p + 1, rate: mu });
                continue;
            }
            // c e^{-μw} ∫_0^w x^p e^{-dx} dx
            let lead = c * factorial(p) / d.powi(p as i32 + 1);
            terms.push(Term { coef: lead, power: 0, rate: mu });
            for i in 0..=p {
                terms.push(Term { coef: -lead * d.powi(i as i32) / factorial(i), power: i, rate: t.rate });
            }
        }
        Ok(ExpPoly { terms }.simplify())
    }

    pub fn simplify(self) -> Self {
        let mut out: Vec<Term> = Vec::with_capacity(self.terms.len());
        for t in self.terms {
            if t.coef == 0.0 {
                continue;
            }
            match out.iter_mut().find(|o| {
                o.power == t.power && (o.rate - t.rate).abs() <= 1e-14 * o.rate.abs().max(t.rate.abs())
            }) {
                Some(o) => o.coef += t.coef,
                None => out.push(t),
            }
        }
        out.retain(|t| t.coef != 0.0);
        ExpPoly { terms: out }
    }

    /// Moments `E[X^n]`, n = 0..=n_max, of a density given as `self`.
    pub fn density_moments(&self, n_max: usize) -> Vec<f64> {
        (0..=n_max)
            .map(|n| {
                self.terms
                    .iter()
                    .map(|t| t.coef * factorial(n as u32 + t.power) / t.rate.powi((n as u32 + t.power + 1) as i32))
                    .sum()
            })
            .collect()
    }
}

/// A non-negative random variable assembled from independent exponentials.
#[derive(Debug, Clone, PartialEq)]
pub enum Law {
    Exp(f64),
    /// Maximum of `k` i.i.d. exponentials with the given mean.
    MaxIid(u32, f64),
    /// Sum of `k` i.i.d. exponentials.
    Erlang(u32, f64),
    /// `X + V` with `V ~ Exp(mean)` independent of `X`.
    PlusExp(Box<Law>, f64),
    Max(Box<Law>, Box<Law>),
}

impl Law {
    pub fn plus_exp(self, mean: f64) -> Law {
        Law::PlusExp(Box::new(self), mean)
    }

    pub fn max(self, other: Law) -> Law {
        Law::Max(Box::new(self), Box::new(other))
    }

    /// Same law with every mean multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Law {
        match self {
            Law::Exp(s) => Law::Exp(s * c),
            Law::MaxIid(k, s) => Law::MaxIid(*k, s * c),
            Law::Erlang(k, s) => Law::Erlang(*k, s * c),
            Law::PlusExp(a, s) => Law::PlusExp(Box::new(a.scaled(c)), s * c),
            Law::Max(a, b) => Law::Max(Box::new(a.scaled(c)), Box::new(b.scaled(c))),
        }
    }

    pub fn min_mean(&self) -> f64 {
        match self {
            Law::Exp(s) | Law::MaxIid(_, s) | Law::Erlang(_, s) => *s,
            Law::PlusExp(a, s) => a.min_mean().min(*s),
            Law::Max(a, b) => a.min_mean().min(b.min_mean()),
        }
    }

    /// Exponent `D` of the small-argument behaviour `F(t) ~ c·t^D`.
    pub fn order(&self) -> u32 {
        match self {
            Law::Exp(_) => 1,
            Law::MaxIid(k, _) | Law::Erlang(k, _) => *k,
            Law::PlusExp(a, _) => a.order() + 1,
            Law::Max(a, b) => a.order() + b.order(),
        }
    }

    pub fn mean(&self) -> f64 {
        self.moments(1)[1]
    }

    pub fn cdf(&self) -> Result<ExpPoly> {
        Ok(match self {
            Law::Exp(s) => ExpPoly::constant(1.0).sub(&ExpPoly::term(1.0, 0, 1.0 / s)),
            Law::MaxIid(k, s) => Law::Exp(*s).cdf()?.powi(*k),
            Law::Erlang(..) | Law::PlusExp(..) => ExpPoly::constant(1.0).sub(&self.density()?.tail_integral()?),
            Law::Max(a, b) => a.cdf()?.mul(&b.cdf()?),
        })
    }

    pub fn complement(&self) -> Result<ExpPoly> {
        Ok(match self {
            Law::Erlang(..) | Law::PlusExp(..) => self.density()?.tail_integral()?,
            _ => ExpPoly::constant(1.0).sub(&self.cdf()?),
        })
    }

    pub fn density(&self) -> Result<ExpPoly> {
        Ok(match self {
            Law::Exp(s) => ExpPoly::term(1.0 / s, 0, 1.0 / s),
            Law::Erlang(k, s) => {
                ExpPoly::term(1.0 / (s.powi(*k as i32) * factorial(k - 1)), k - 1, 1.0 / s)
            }
            Law::PlusExp(a, s) => a.density()?.convolve_exp(*s)?,
            Law::MaxIid(..) | Law::Max(..) => self.cdf()?.derivative(),
        })
    }

    /// `E[X^n]` for n = 0..=n_max.
    pub fn moments(&self, n_max: usize) -> Vec<f64> {
        match self {
            Law::Exp(s) => (0..=n_max).map(|n| factorial(n as u32) * s.powi(n as i32)).collect(),
            Law::Erlang(k, s) => {
                let mut out = vec![1.0; n_max + 1];
                for n in 1..=n_max {
                    out[n] = out[n - 1] * s * (*k as f64 + n as f64 - 1.0);
                }
                out
            }
            Law::MaxIid(k, s) => (0..=n_max)
                .map(|n| {
                    if n == 0 {
                        return 1.0;
                    }
                    (1..=*k)
                        .map(|m| {
                            let sign = if m % 2 == 1 { 1.0 } else { -1.0 };
                            sign * binomial(*k, m) * factorial(n as u32) * (s / m as f64).powi(n as i32)
                        })
                        .sum()
                })
                .collect(),
            Law::PlusExp(a, s) => sum_moments(&a.moments(n_max), &Law::Exp(*s).moments(n_max)),
            Law::Max(..) => {
                // E[X^n] = n ∫ x^{n-1} P(X > x) dx
                let tail = self.complement().expect("maximum of exponentials has a closed complement");
                (0..=n_max)
                    .map(|n| {
                        if n == 0 {
                            return 1.0;
                        }
                        let n = n as u32;
                        n as f64
                            * tail
                                .terms
                                .iter()
                                .map(|t| t.coef * factorial(n - 1 + t.power) / t.rate.powi((n + t.power) as i32))
                                .sum::<f64>()
                    })
                    .collect()
            }
        }
    }

    /// Maclaurin coefficients of the CDF, `F(t) = Σ_{n ≤ n_max} f_n t^n`.
    pub fn cdf_series(&self, n_max: usize) -> Vec<f64> {
        match self {
            Law::Exp(s) => exp_cdf_series(*s, n_max),
            Law::MaxIid(k, s) => {
                let base = exp_cdf_series(*s, n_max);
                (0..*k).fold(unit_series(n_max), |acc, _| series_mul(&acc, &base))
            }
            Law::Erlang(k, s) => {
                // integrate t^{k-1} e^{-t/s} / (s^k (k-1)!)
                let mut out = vec![0.0; n_max + 1];
                let k = *k as usize;
                let norm = 1.0 / (s.powi(k as i32) * factorial(k as u32 - 1));
                let mut c = norm;
                for j in 0..=n_max {
                    let deg = k + j;
                    if deg > n_max {
                        break;
                    }
                    out[deg] = c / deg as f64;
                    c *= -1.0 / (s * (j + 1) as f64);
                }
                out
            }
            Law::PlusExp(a, s) => {
                let fa = a.cdf_series(n_max);
                // density of V: (1/s) Σ (-t/s)^k / k!
                let mut out = vec![0.0; n_max + 1];
                for (j, &aj) in fa.iter().enumerate() {
                    if aj == 0.0 {
                        continue;
                    }
                    let mut vk = 1.0 / s;
                    for k in 0..=n_max {
                        let deg = j + k + 1;
                        if deg > n_max {
                            break;
                        }
                        // ∫_0^t (t-x)^j x^k dx = t^{j+k+1} j! k! / (j+k+1)!
                        out[deg] += aj * vk * factorial(j as u32) * factorial(k as u32) / factorial(deg as u32);
                        vk *= -1.0 / (s * (k + 1) as f64);
                    }
                }
                out
            }
            Law::Max(a, b) => series_mul(&a.cdf_series(n_max), &b.cdf_series(n_max)),
        }
    }
}

fn unit_series(n_max: usize) -> Vec<f64> {
    let mut v = vec![0.0; n_max + 1];
    v[0] = 1.0;
    v
}

fn exp_cdf_series(s: f64, n_max: usize) -> Vec<f64> {
    let mut out = vec![0.0; n_max + 1];
    let mut c = 1.0;
    for (n, o) in out.iter_mut().enumerate().skip(1) {
        c *= -1.0 / (s * n as f64);
        *o = -c;
    }
    out
}

pub fn series_mul(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len().min(b.len());
    let mut out = vec![0.0; n];
    for i in 0..n {
        if a[i] == 0.0 {
            continue;
        }
        for j in 0..n - i {
            out[i + j] += a[i] * b[j];
        }
    }
    out
}

/// Moments of `X + Y` for independent `X`, `Y` from their moment sequences.
pub fn sum_moments(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len().min(y.len());
    (0..n)
        .map(|k| (0..=k).map(|j| binomial(k as u32, j as u32) * x[j] * y[k - j]).sum())
        .collect()
}
