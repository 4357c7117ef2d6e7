//! High-SNR evaluation of `P(S_X < T)` with `T = (1+Z)(α + βW)`.
//!
//! With `F(t) = Σ f_n t^n` the Maclaurin series of the combiner CDF,
//! `P = Σ f_n E[(1+Z)^n] E[(α+βW)^n]`. The moments grow factorially so the
//! sum is asymptotic rather than convergent; it is cut at its smallest term,
//! which is far below double precision whenever the legitimate means dwarf
//! the threshold scale. Its first term is the leading-order asymptote.

use crate::exact::{AnField, Threshold};
use crate::exppoly::Law;
use crate::special::binomial;

const N_MAX: usize = 80;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesValue {
    pub value: f64,
    pub leading: f64,
    pub order: u32,
    pub terms: usize,
    /// Magnitude of the first omitted term relative to the value.
    pub tail: f64,
}

fn threshold_moments(eve: &Law, thr: Threshold, scale: f64, n_max: usize) -> Vec<f64> {
    let w = eve.scaled(1.0 / scale).moments(n_max);
    let a = thr.alpha / scale;
    (0..=n_max)
        .map(|n| {
            (0..=n)
                .map(|k| binomial(n as u32, k as u32) * a.powi((n - k) as i32) * thr.beta.powi(k as i32) * w[k])
                .sum()
        })
        .collect()
}

pub fn outage_series(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> Option<SeriesValue> {
    let scale = legit.min_mean();
    let f = legit.scaled(1.0 / scale).cdf_series(N_MAX);
    let z = an.shifted_moments(N_MAX);
    let u = threshold_moments(eve, thr, scale, N_MAX);
    let d = legit.order() as usize;
    let mut sum: f64 = 0.0;
    let mut prev = f64::INFINITY;
    let mut leading = 0.0;
    for n in d..=N_MAX {
        let term = f[n] * z[n] * u[n];
        if !term.is_finite() {
            return None;
        }
        if n == d {
            leading = term;
        }
        let mag = term.abs();
        if mag <= 1e-17 * sum.abs() {
            return Some(SeriesValue { value: sum, leading, order: d as u32, terms: n - d, tail: mag / sum.abs() });
        }
        if n > d + 2 && mag > prev {
            // past the smallest term of the asymptotic series
            let tail = prev / sum.abs();
            return (tail < 1e-10).then_some(SeriesValue { value: sum, leading, order: d as u32, terms: n - d, tail });
        }
        prev = mag;
        sum += term;
    }
    None
}

/// Leading-order value `f_D E[(1+Z)^D] E[(α+βW)^D]` and its order `D`.
pub fn leading_term(legit: &Law, eve: &Law, thr: Threshold, an: &AnField) -> (f64, u32) {
    let d = legit.order() as usize;
    let scale = legit.min_mean();
    let f = legit.scaled(1.0 / scale).cdf_series(d);
    let z = an.shifted_moments(d);
    let u = threshold_moments(eve, thr, scale, d);
    (f[d] * z[d] * u[d], d as u32)
}
