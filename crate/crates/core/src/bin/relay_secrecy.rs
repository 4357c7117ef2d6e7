use clap::{Parser, Subcommand};
use relay_secrecy::experiments::{
    diversity_rows, load_config, plot_svg, run_figure, run_sweep, selfcheck, to_csv, MetricSel, SweepSpec, SweepVariable,
};
use relay_secrecy::montecarlo::{simulate, Metric, Mode};
use relay_secrecy::network::{NetworkConfig, SchemeId};
use relay_secrecy::{Error, Result};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "relay-secrecy", version, about = "Secrecy outage and intercept probabilities of relay selection schemes")]
struct Cli {
    /// TOML scenario file
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Comma-separated schemes (default: all)
    #[arg(long, global = true, value_delimiter = ',')]
    scheme: Vec<String>,
    #[arg(long, global = true, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, global = true, default_value_t = 1)]
    seed: u64,
    /// paper or strict-ir
    #[arg(long, global = true, default_value = "paper")]
    mode: String,
    /// CSV output path (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Also write an SVG plot next to the CSV
    #[arg(long, global = true)]
    plot: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and asymptotic values at the configured anchor
    Analytic {
        #[arg(long, default_value = "both")]
        metric: String,
    },
    /// Simulation next to the exact values; `--cardinality` conditions on |F|
    Simulate {
        #[arg(long, default_value = "both")]
        metric: String,
        #[arg(long)]
        cardinality: Option<u32>,
    },
    /// Sweep one variable over a grid
    Sweep {
        /// anchor_snr_db, M, N or ip_target
        #[arg(long, default_value = "anchor_snr_db")]
        var: String,
        /// start:stop:step or a comma-separated list
        #[arg(long, default_value = "0:30:5")]
        grid: String,
        #[arg(long, default_value = "sop")]
        metric: String,
    },
    /// Reproduce figure 3, 4, 5 or 6
    Figure { number: u32 },
    /// Measured diversity order and coding gain
    Diversity {
        #[arg(long, default_value_t = 45.0)]
        from_db: f64,
        #[arg(long, default_value_t = 65.0)]
        to_db: f64,
    },
    /// Quick consistency checks
    Selfcheck,
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse grid '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() == 3 {
        let v: Vec<f64> = parts.iter().map(|p| p.trim().parse::<f64>()).collect::<std::result::Result<_, _>>().map_err(|_| bad())?;
        let (start, stop, step) = (v[0], v[1], v[2]);
        if !(step > 0.0) || stop < start {
            return Err(bad());
        }
        let n = ((stop - start) / step + 1e-9).floor() as usize;
        return Ok((0..=n).map(|i| start + step * i as f64).collect());
    }
    s.split(',').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect()
}

fn schemes(cli: &Cli) -> Result<Vec<SchemeId>> {
    if cli.scheme.is_empty() {
        return Ok(SchemeId::ALL.to_vec());
    }
    cli.scheme.iter().map(|s| s.parse()).collect()
}

fn emit(cli: &Cli, csv: &str, rows: &[relay_secrecy::experiments::Row], title: &str) -> Result<()> {
    match &cli.out {
        Some(path) => {
            std::fs::write(path, csv)?;
            if cli.plot {
                std::fs::write(path.with_extension("svg"), plot_svg(rows, title))?;
            }
        }
        None => {
            if cli.plot {
                return Err(Error::Config("--plot needs --out".into()));
            }
            print!("{csv}");
        }
    }
    Ok(())
}

/// Runs the command; `Ok(false)` means some self-check failed.
fn run(cli: &Cli) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => load_config(p)?,
        None => NetworkConfig::default(),
    };
    let mode: Mode = cli.mode.parse()?;
    let single = |metric: &str, trials: u64| -> Result<SweepSpec> {
        Ok(SweepSpec {
            variable: SweepVariable::AnchorSnrDb,
            grid: vec![cfg.snr_anchor_db],
            schemes: schemes(cli)?,
            metric: metric.parse()?,
            trials,
            seed: cli.seed,
            mode,
        })
    };
    if matches!(cli.command, Command::Simulate { .. }) && cli.trials == 0 {
        return Err(Error::Config("simulate needs --trials ≥ 1".into()));
    }
    match &cli.command {
        Command::Analytic { metric } => {
            let rows = run_sweep(&single(metric, 0)?, &cfg)?;
            if let Some(r) = rows.iter().find(|r| r.status != "ok") {
                let what = format!("{} {}: {}", r.scheme, r.metric, r.status);
                return Err(match r.status.as_str() {
                    "error:singularity" => Error::Singularity(what),
                    "error:starvation" => Error::Starvation { accepted: 0, required: 1 },
                    _ => Error::Config(what),
                });
            }
            emit(cli, &to_csv(&rows), &rows, "analytic")?;
        }
        Command::Simulate { metric, cardinality: None } => {
            let rows = run_sweep(&single(metric, cli.trials)?, &cfg)?;
            emit(cli, &to_csv(&rows), &rows, "simulation")?;
        }
        Command::Simulate { metric, cardinality: Some(k) } => {
            let sel: MetricSel = metric.parse()?;
            let tally = simulate(&cfg, cli.trials, cli.seed, mode)?;
            let model = relay_secrecy::exact::Model::new(&cfg)?;
            let mut rows = Vec::new();
            for scheme in schemes(cli)? {
                for &m in sel.metrics() {
                    let est = tally.conditional_estimate(m, scheme, *k)?;
                    let analytic = match (scheme.has_closed_form() || scheme == SchemeId::DT, m) {
                        (false, _) => None,
                        (true, Metric::Sop) => Some(model.sop_conditional(scheme, *k)?),
                        (true, Metric::Ip) => Some(model.ip_conditional(scheme, *k)?),
                    };
                    rows.push(relay_secrecy::experiments::Row {
                        scheme: scheme.name().into(),
                        metric: m.name().into(),
                        x_name: "cardinality".into(),
                        x_value: *k as f64,
                        analytic,
                        asymptotic: None,
                        mc: Some(est),
                        status: "ok".into(),
                    });
                }
            }
            emit(cli, &to_csv(&rows), &rows, "conditional simulation")?;
        }
        Command::Sweep { var, grid, metric } => {
            let spec = SweepSpec {
                variable: var.parse()?,
                grid: parse_grid(grid)?,
                schemes: schemes(cli)?,
                metric: metric.parse()?,
                trials: cli.trials,
                seed: cli.seed,
                mode,
            };
            let rows = run_sweep(&spec, &cfg)?;
            emit(cli, &to_csv(&rows), &rows, &format!("SOP vs {var}"))?;
        }
        Command::Figure { number } => {
            let rows = run_figure(*number, cli.trials, cli.seed, mode)?;
            emit(cli, &to_csv(&rows), &rows, &format!("Figure {number}"))?;
        }
        Command::Diversity { from_db, to_db } => {
            let rows = diversity_rows(&schemes(cli)?, &cfg, (*from_db, *to_db));
            emit(cli, &to_csv(&rows), &rows, "diversity")?;
        }
        Command::Selfcheck => {
            let checks = selfcheck(cli.trials, cli.seed)?;
            let mut failed = 0;
            for c in &checks {
                println!("{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail);
                failed += usize::from(!c.pass);
            }
            eprintln!("{failed} of {} checks failed", checks.len());
            return Ok(failed == 0);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
