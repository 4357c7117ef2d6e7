//! Sweeps, figure presets, diversity measurement and the CSV/SVG writers.

use crate::asymptotic::{coding_gain, diversity_order, sop_asymptotic_total};
use crate::error::{Error, Result};
use crate::exact::Model;
use crate::montecarlo::{simulate, Estimate, Metric, Mode, Tally};
use crate::network::{NetworkConfig, SchemeId};
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

pub const CSV_HEADER: &str = "scheme,metric,x_name,x_value,analytic,asymptotic,mc_estimate,std_err,trials,seed,status";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepVariable {
    AnchorSnrDb,
    M,
    N,
    IpTarget,
}

impl SweepVariable {
    pub fn name(self) -> &'static str {
        match self {
            SweepVariable::AnchorSnrDb => "anchor_snr_db",
            SweepVariable::M => "M",
            SweepVariable::N => "N",
            SweepVariable::IpTarget => "ip_target",
        }
    }
}

impl FromStr for SweepVariable {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "anchor_snr_db" | "snr" => Ok(SweepVariable::AnchorSnrDb),
            "M" | "m" => Ok(SweepVariable::M),
            "N" | "n" => Ok(SweepVariable::N),
            "ip_target" | "ip" => Ok(SweepVariable::IpTarget),
            _ => Err(Error::Config(format!("unknown sweep variable '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MetricSel {
    Sop,
    Ip,
    Both,
}

impl MetricSel {
    pub fn metrics(self) -> &'static [Metric] {
        match self {
            MetricSel::Sop => &[Metric::Sop],
            MetricSel::Ip => &[Metric::Ip],
            MetricSel::Both => &[Metric::Sop, Metric::Ip],
        }
    }
}

impl FromStr for MetricSel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sop" => Ok(MetricSel::Sop),
            "ip" => Ok(MetricSel::Ip),
            "both" => Ok(MetricSel::Both),
            _ => Err(Error::Config(format!("unknown metric '{s}' (sop, ip or both)"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    pub grid: Vec<f64>,
    pub schemes: Vec<SchemeId>,
    pub metric: MetricSel,
    /// Zero skips the simulator.
    pub trials: u64,
    pub seed: u64,
    pub mode: Mode,
}

impl SweepSpec {
    pub fn validate(&self) -> Result<()> {
        if self.schemes.is_empty() {
            return Err(Error::Config("scheme list is empty".into()));
        }
        if self.grid.is_empty() {
            return Err(Error::Config("sweep grid is empty".into()));
        }
        let up = self.grid.windows(2).all(|w| w[0] < w[1]);
        let down = self.grid.windows(2).all(|w| w[0] > w[1]);
        if !(up || down) || self.grid.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("sweep grid must be finite and strictly monotone".into()));
        }
        match self.variable {
            SweepVariable::M | SweepVariable::N => {
                let min = if self.variable == SweepVariable::M { 1.0 } else { 0.0 };
                if self.grid.iter().any(|&x| x.fract() != 0.0 || x < min) {
                    return Err(Error::Config(format!("{} grid must hold integers ≥ {min}", self.variable.name())));
                }
            }
            SweepVariable::IpTarget => {
                if self.grid.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
                    return Err(Error::Config("intercept targets must lie in (0, 1)".into()));
                }
            }
            SweepVariable::AnchorSnrDb => {}
        }
        Ok(())
    }
}

/// One CSV row.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub scheme: String,
    pub metric: String,
    pub x_name: String,
    pub x_value: f64,
    pub analytic: Option<f64>,
    pub asymptotic: Option<f64>,
    pub mc: Option<Estimate>,
    pub status: String,
}

fn status_of(e: &Error) -> String {
    let kind = match e {
        Error::Config(_) => "config",
        Error::Singularity(_) | Error::Special(_) => "singularity",
        Error::Starvation { .. } => "starvation",
        Error::Unsupported(_) => "unsupported",
        Error::Io(_) => "io",
    };
    format!("error:{kind}")
}

fn apply(variable: SweepVariable, cfg: &NetworkConfig, x: f64) -> NetworkConfig {
    match variable {
        SweepVariable::AnchorSnrDb => cfg.with_anchor(x),
        SweepVariable::M => NetworkConfig { m: x as u32, ..cfg.clone() },
        SweepVariable::N => NetworkConfig { n: x as u32, ..cfg.clone() },
        SweepVariable::IpTarget => cfg.clone(),
    }
}

fn analytic_value(metric: Metric, scheme: SchemeId, model: &Model) -> Result<Option<f64>> {
    if !scheme.has_closed_form() {
        return Ok(None);
    }
    match metric {
        Metric::Sop => model.sop_total(scheme).map(Some),
        Metric::Ip => model.ip_total(scheme).map(Some),
    }
}

fn point_rows(
    cfg: &NetworkConfig,
    spec: &SweepSpec,
    x_name: &str,
    x_value: f64,
    tally: Option<&Tally>,
    rows: &mut Vec<Row>,
) {
    let model = Model::new(cfg);
    for &scheme in &spec.schemes {
        for &metric in spec.metric.metrics() {
            let mut row = Row {
                scheme: scheme.name().to_string(),
                metric: metric.name().to_string(),
                x_name: x_name.to_string(),
                x_value,
                analytic: None,
                asymptotic: None,
                mc: tally.map(|t| t.estimate(metric, scheme)),
                status: "ok".to_string(),
            };
            let result = model.as_ref().map_err(clone_error).and_then(|m| {
                row.analytic = analytic_value(metric, scheme, m)?;
                if metric == Metric::Sop {
                    row.asymptotic = Some(sop_asymptotic_total(scheme, cfg)?.0);
                }
                Ok(())
            });
            if let Err(e) = result {
                row.status = status_of(&e);
            }
            rows.push(row);
        }
    }
}

fn clone_error(e: &Error) -> Error {
    match e {
        Error::Config(s) => Error::Config(s.clone()),
        Error::Singularity(s) => Error::Singularity(s.clone()),
        Error::Special(s) => Error::Singularity(s.to_string()),
        Error::Starvation { accepted, required } => Error::Starvation { accepted: *accepted, required: *required },
        Error::Unsupported(s) => Error::Unsupported(s.clone()),
        Error::Io(e) => Error::Config(e.to_string()),
    }
}

/// Runs a sweep; per-point failures land in the status column.
pub fn run_sweep(spec: &SweepSpec, cfg_base: &NetworkConfig) -> Result<Vec<Row>> {
    spec.validate()?;
    cfg_base.validate()?;
    if spec.variable == SweepVariable::IpTarget {
        let mut rows = Vec::new();
        for &scheme in &spec.schemes {
            rows.extend(sop_vs_ip_curve(scheme, cfg_base, &spec.grid, spec.trials, spec.seed, spec.mode)?);
        }
        return Ok(rows);
    }
    let mut rows = Vec::new();
    for &x in &spec.grid {
        let cfg = apply(spec.variable, cfg_base, x);
        let tally = if spec.trials > 0 {
            match simulate(&cfg, spec.trials, spec.seed, spec.mode) {
                Ok(t) => Some(t),
                Err(e) => {
                    let mut failed = Vec::new();
                    point_rows(&cfg, spec, spec.variable.name(), x, None, &mut failed);
                    failed.iter_mut().for_each(|r| r.status = status_of(&e));
                    rows.extend(failed);
                    continue;
                }
            }
        } else {
            None
        };
        point_rows(&cfg, spec, spec.variable.name(), x, tally.as_ref(), &mut rows);
    }
    Ok(rows)
}

const RATE_LO: f64 = 1e-3;
const RATE_HI: f64 = 20.0;

fn bisect_rate(target: f64, tol: f64, mut ip: impl FnMut(f64) -> Result<f64>) -> Result<f64> {
    let (lo_ip, hi_ip) = (ip(RATE_LO)?, ip(RATE_HI)?);
    if !(target <= lo_ip && target >= hi_ip) {
        return Err(Error::Config(format!(
            "intercept target {target} unreachable for rates in [{RATE_LO}, {RATE_HI}] (range {hi_ip:.3e}..{lo_ip:.3e})"
        )));
    }
    let (mut lo, mut hi) = (RATE_LO, RATE_HI);
    while hi - lo > tol * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if ip(mid)? > target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Rate `R` at which the total IP of `scheme` equals `target`. DSO and DMO
/// have no closed form, so their IP comes from the simulator with common
/// random numbers, which keeps it monotone in `R`.
pub fn solve_rate_for_ip(scheme: SchemeId, cfg: &NetworkConfig, target: f64, trials: u64, seed: u64, mode: Mode) -> Result<f64> {
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::Config(format!("intercept target {target} outside (0, 1)")));
    }
    let at = |r: f64| NetworkConfig { rate_r: r, ..cfg.clone() };
    if scheme.has_closed_form() || scheme == SchemeId::DT {
        return bisect_rate(target, 1e-12, |r| Model::new(&at(r))?.ip_total(scheme));
    }
    if trials == 0 {
        return Err(Error::Unsupported(format!("{scheme} needs simulation trials to solve for an IP target")));
    }
    // the simulated IP is a step function, so refining far below 1e-4 buys nothing
    bisect_rate(target, 1e-4, |r| Ok(simulate(&at(r), trials, seed, mode)?.estimate(Metric::Ip, scheme).p_hat))
}

/// SOP at the rate achieving each intercept target.
pub fn sop_vs_ip_curve(
    scheme: SchemeId,
    cfg: &NetworkConfig,
    ip_grid: &[f64],
    trials: u64,
    seed: u64,
    mode: Mode,
) -> Result<Vec<Row>> {
    if ip_grid.iter().any(|&x| !(x > 0.0 && x < 1.0)) {
        return Err(Error::Config("intercept targets must lie in (0, 1)".into()));
    }
    let mut rows = Vec::new();
    for &target in ip_grid {
        let mut row = Row {
            scheme: scheme.name().to_string(),
            metric: Metric::Sop.name().to_string(),
            x_name: SweepVariable::IpTarget.name().to_string(),
            x_value: target,
            analytic: None,
            asymptotic: None,
            mc: None,
            status: "ok".to_string(),
        };
        let result = solve_rate_for_ip(scheme, cfg, target, trials, seed, mode).and_then(|r| {
            let at = NetworkConfig { rate_r: r, ..cfg.clone() };
            row.analytic = analytic_value(Metric::Sop, scheme, &Model::new(&at)?)?;
            if trials > 0 {
                row.mc = Some(simulate(&at, trials, seed, mode)?.estimate(Metric::Sop, scheme));
            }
            Ok(())
        });
        if let Err(e) = result {
            row.status = status_of(&e);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Least-squares slope of `log10 y` against `x`.
pub fn log_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let ly: Vec<f64> = y.iter().map(|v| v.log10()).collect();
    let mx = x.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiversityMeasurement {
    /// Negated slope of `log10 SOP` against `log10 σ̄_sd`.
    pub order: f64,
    pub points: Vec<(f64, f64)>,
    /// Cardinality contributing most at the top of the window.
    pub dominant_k: u32,
}

/// Measures the high-SNR slope of the exact total SOP over `window` (dB).
/// The eavesdropper is pinned at its level for the configured anchor, so
/// only the legitimate links move.
pub fn measure_diversity_slope(scheme: SchemeId, cfg: &NetworkConfig, window: (f64, f64)) -> Result<DiversityMeasurement> {
    let (lo, hi) = window;
    if !(40.0..=70.0).contains(&lo) || !(40.0..=70.0).contains(&hi) || hi <= lo {
        return Err(Error::Config(format!("diversity window {lo}..{hi} dB must lie within [40, 70] dB")));
    }
    if !scheme.has_closed_form() && scheme != SchemeId::DT {
        return Err(Error::Unsupported(format!("{scheme} has no closed form; use measure_diversity_slope_mc")));
    }
    let base = cfg.pin_eavesdropper();
    let anchors: Vec<f64> = (0..9).map(|i| lo + (hi - lo) * i as f64 / 8.0).collect();
    let mut points = Vec::new();
    for &a in &anchors {
        let p = Model::new(&base.with_anchor(a))?.sop_total(scheme)?;
        if p < 1e-300 {
            return Err(Error::Singularity(format!("SOP underflows at {a} dB; shrink the window")));
        }
        points.push((a, p));
    }
    let x: Vec<f64> = anchors.iter().map(|a| a / 10.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    let top = Model::new(&base.with_anchor(hi))?;
    let pr = top.cardinality_distribution();
    let mut dominant_k = 0;
    let mut best = f64::NEG_INFINITY;
    for (k, w) in pr.iter().enumerate() {
        let c = w * top.sop_conditional(scheme, k as u32)?;
        if c > best {
            best = c;
            dominant_k = k as u32;
        }
    }
    Ok(DiversityMeasurement { order: -log_slope(&x, &y), points, dominant_k })
}

/// Simulated slope over `anchors` (dB) with the eavesdropper pinned.
pub fn measure_diversity_slope_mc(
    scheme: SchemeId,
    cfg: &NetworkConfig,
    anchors: &[f64],
    trials: u64,
    seed: u64,
) -> Result<DiversityMeasurement> {
    if anchors.len() < 2 {
        return Err(Error::Config("need at least two anchors".into()));
    }
    let base = cfg.pin_eavesdropper();
    let mut points = Vec::new();
    for &a in anchors {
        let e = simulate(&base.with_anchor(a), trials, seed, Mode::PaperFaithful)?.estimate(Metric::Sop, scheme);
        if e.p_hat == 0.0 {
            return Err(Error::Starvation { accepted: 0, required: 1 });
        }
        points.push((a, e.p_hat));
    }
    let x: Vec<f64> = anchors.iter().map(|a| a / 10.0).collect();
    let y: Vec<f64> = points.iter().map(|p| p.1).collect();
    Ok(DiversityMeasurement { order: -log_slope(&x, &y), points, dominant_k: cfg.m })
}

/// Rows reporting the measured order, the tabulated order and the coding gain.
pub fn diversity_rows(schemes: &[SchemeId], cfg: &NetworkConfig, window: (f64, f64)) -> Vec<Row> {
    let mut rows = Vec::new();
    for &scheme in schemes {
        let mut row = Row {
            scheme: scheme.name().to_string(),
            metric: "diversity".to_string(),
            x_name: "window_hi_db".to_string(),
            x_value: window.1,
            analytic: None,
            asymptotic: Some(diversity_order(scheme, cfg.m, cfg.m) as f64),
            mc: None,
            status: "ok".to_string(),
        };
        match measure_diversity_slope(scheme, cfg, window) {
            Ok(d) => {
                row.analytic = Some(d.order);
                row.status = format!("ok:dominant_k={}", d.dominant_k);
            }
            Err(e) => row.status = status_of(&e),
        }
        rows.push(row);
        let mut gain = Row {
            scheme: scheme.name().to_string(),
            metric: "coding_gain".to_string(),
            x_name: "anchor_snr_db".to_string(),
            x_value: cfg.snr_anchor_db,
            analytic: None,
            asymptotic: None,
            mc: None,
            status: "ok".to_string(),
        };
        match coding_gain(scheme, &cfg.pin_eavesdropper()) {
            Ok(c) => gain.asymptotic = Some(c),
            Err(e) => gain.status = status_of(&e),
        }
        rows.push(gain);
    }
    rows
}

fn num(v: Option<f64>) -> String {
    v.map(|x| format!("{x:e}")).unwrap_or_default()
}

pub fn to_csv(rows: &[Row]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let (p, se, n, seed) = match &r.mc {
            Some(e) => (num(Some(e.p_hat)), num(Some(e.std_err)), e.trials.to_string(), e.seed.to_string()),
            None => Default::default(),
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{}",
            r.scheme,
            r.metric,
            r.x_name,
            num(Some(r.x_value)),
            num(r.analytic),
            num(r.asymptotic),
            p,
            se,
            n,
            seed,
            r.status
        );
    }
    out
}

/// Log-scale line plot of the rows' best value (analytic, else simulated).
pub fn plot_svg(rows: &[Row], title: &str) -> String {
    let (w, h, pad) = (640.0, 420.0, 60.0);
    let value = |r: &Row| r.analytic.or(r.mc.map(|e| e.p_hat)).filter(|v| *v > 0.0);
    let pts: Vec<(&Row, f64)> = rows.iter().filter_map(|r| value(r).map(|v| (r, v))).collect();
    let mut svg = format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{w}\" height=\"{h}\">\n<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"14\">{title}</text>\n",
        w / 2.0
    );
    if pts.is_empty() {
        svg.push_str("</svg>\n");
        return svg;
    }
    let xmin = pts.iter().map(|p| p.0.x_value).fold(f64::INFINITY, f64::min);
    let xmax = pts.iter().map(|p| p.0.x_value).fold(f64::NEG_INFINITY, f64::max);
    let ymin = pts.iter().map(|p| p.1.log10()).fold(f64::INFINITY, f64::min).floor();
    let ymax = pts.iter().map(|p| p.1.log10()).fold(f64::NEG_INFINITY, f64::max).ceil().max(ymin + 1.0);
    let sx = |x: f64| pad + (x - xmin) / (xmax - xmin).max(1e-12) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y.log10() - ymin) / (ymax - ymin) * (h - 2.0 * pad);
    let _ = writeln!(
        svg,
        "<rect x=\"{pad}\" y=\"{pad}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>",
        w - 2.0 * pad,
        h - 2.0 * pad
    );
    for d in (ymin as i32)..=(ymax as i32) {
        let y = sy(10f64.powi(d));
        let _ = writeln!(svg, "<text x=\"{}\" y=\"{y:.1}\" font-size=\"10\" text-anchor=\"end\">1e{d}</text>", pad - 4.0);
    }
    let _ = writeln!(
        svg,
        "<text x=\"{}\" y=\"{}\" font-size=\"11\" text-anchor=\"middle\">{} ({xmin} to {xmax})</text>",
        w / 2.0,
        h - 20.0,
        pts[0].0.x_name
    );
    let palette = ["#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];
    let mut series: Vec<(String, Vec<(f64, f64)>)> = Vec::new();
    for (r, v) in &pts {
        let key = format!("{} {}", r.scheme, r.metric);
        match series.iter_mut().find(|s| s.0 == key) {
            Some(s) => s.1.push((r.x_value, *v)),
            None => series.push((key, vec![(r.x_value, *v)])),
        }
    }
    for (i, (name, p)) in series.iter().enumerate() {
        let colour = palette[i % palette.len()];
        let line: Vec<String> = p.iter().map(|(x, y)| format!("{:.1},{:.1}", sx(*x), sy(*y))).collect();
        let _ = writeln!(svg, "<polyline fill=\"none\" stroke=\"{colour}\" points=\"{}\"/>", line.join(" "));
        let _ = writeln!(
            svg,
            "<text x=\"{}\" y=\"{}\" font-size=\"10\" fill=\"{colour}\">{name}</text>",
            w - pad + 4.0,
            pad + 12.0 * i as f64
        );
    }
    svg.push_str("</svg>\n");
    svg
}

/// Reads a flat TOML scenario; unknown keys are rejected.
pub fn load_config(path: &Path) -> Result<NetworkConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<NetworkConfig> {
    let cfg: NetworkConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Preset sweep and scenario for figure 3, 4, 5 or 6.
pub fn figure_preset(figure: u32, trials: u64, seed: u64, mode: Mode) -> Result<(SweepSpec, NetworkConfig)> {
    let base = NetworkConfig::default();
    let spec = |variable, grid: Vec<f64>, schemes: Vec<SchemeId>| SweepSpec {
        variable,
        grid,
        schemes,
        metric: MetricSel::Sop,
        trials,
        seed,
        mode,
    };
    let relay_six = vec![SchemeId::DMC, SchemeId::DSM, SchemeId::DSA, SchemeId::DMM, SchemeId::DMA, SchemeId::DSC];
    Ok(match figure {
        3 => (spec(SweepVariable::AnchorSnrDb, (0..=8).map(|i| 5.0 * i as f64).collect(), SchemeId::ALL.to_vec()), base),
        4 => (
            spec(
                SweepVariable::IpTarget,
                vec![0.05, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6],
                vec![SchemeId::DT, SchemeId::DMC, SchemeId::DSC, SchemeId::DMM, SchemeId::DSM, SchemeId::DMA, SchemeId::DSA],
            ),
            base,
        ),
        5 => (spec(SweepVariable::M, (1..=8).map(f64::from).collect(), relay_six), base),
        6 => (
            spec(SweepVariable::N, (0..=8).map(f64::from).collect(), SchemeId::ALL.to_vec()),
            NetworkConfig { snr_anchor_db: 30.0, mer_db: -3.0, ..base },
        ),
        _ => return Err(Error::Config(format!("no preset for figure {figure} (3, 4, 5 or 6)"))),
    })
}

/// Runs a figure preset. Figure 3 also carries a DT curve without AN,
/// labelled `DT_N0`.
pub fn run_figure(figure: u32, trials: u64, seed: u64, mode: Mode) -> Result<Vec<Row>> {
    let (spec, cfg) = figure_preset(figure, trials, seed, mode)?;
    let mut rows = run_sweep(&spec, &cfg)?;
    if figure == 3 {
        let no_an = SweepSpec { schemes: vec![SchemeId::DT], ..spec };
        let mut extra = run_sweep(&no_an, &NetworkConfig { n: 0, ..cfg })?;
        extra.iter_mut().for_each(|r| r.scheme = "DT_N0".to_string());
        rows.extend(extra);
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

/// Quick internal consistency checks over the default scenario.
pub fn selfcheck(trials: u64, seed: u64) -> Result<Vec<Check>> {
    use crate::special::{scaled_e1, tricomi_u, tricomi_u_oracle, EvalPolicy};
    let mut checks = Vec::new();
    let mut push = |name: &str, pass: bool, detail: String| checks.push(Check { name: name.into(), pass, detail });

    let policy = EvalPolicy::default();
    let mut worst: f64 = 0.0;
    for (a, b, x) in [(1, 1, 0.5), (2, -3, 1.7), (4, 6, 0.3), (3, 0, 12.0), (6, 2, 40.0)] {
        let u = tricomi_u(a, b, x)?;
        let o = tricomi_u_oracle(a, b, x, &policy)?;
        worst = worst.max(((u - o) / o).abs());
    }
    push("tricomi_u matches quadrature", worst < 1e-8, format!("max rel err {worst:.2e}"));
    let e = (tricomi_u(1, 1, 2.0)? - scaled_e1(2.0)?).abs() / scaled_e1(2.0)?;
    push("U(1,1,x) = e^x E1(x)", e < 1e-10, format!("rel err {e:.2e}"));

    let cfg = NetworkConfig::default();
    let model = Model::new(&cfg)?;
    let sum: f64 = model.cardinality_distribution().iter().sum();
    push("WIRS probabilities sum to one", (sum - 1.0).abs() < 1e-12, format!("sum {sum:.15}"));

    let tally = simulate(&cfg, trials.max(1), seed, Mode::PaperFaithful)?;
    for scheme in [SchemeId::DT, SchemeId::DMC, SchemeId::DSC, SchemeId::DMM, SchemeId::DSM, SchemeId::DMA, SchemeId::DSA] {
        for metric in [Metric::Sop, Metric::Ip] {
            let exact = analytic_value(metric, scheme, &model)?.expect("closed form");
            let est = tally.estimate(metric, scheme);
            let z = (est.p_hat - exact) / est.std_err_at(exact);
            push(
                &format!("{scheme} {} exact vs simulation", metric.name()),
                z.abs() <= 4.0,
                format!("exact {exact:.5} mc {:.5} z {z:.2}", est.p_hat),
            );
        }
    }

    let pinned = NetworkConfig { snr_anchor_db: 50.0, eve_snr_db: Some(-1.0), ..cfg };
    let high = Model::new(&pinned)?;
    for scheme in SchemeId::CLOSED_FORM {
        let r = sop_asymptotic_total(scheme, &pinned)?.0 / high.sop_total(scheme)?;
        push(&format!("{scheme} asymptote at 50 dB"), (0.9..=1.1).contains(&r), format!("ratio {r:.4}"));
    }
    Ok(checks)
}
