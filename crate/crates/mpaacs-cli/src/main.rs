//! Command-line surface: emits figure-ready CSV or JSON for photon
//! statistics, Wigner functions, and amplifier metrics, and runs the
//! library's verification suite. All output is deterministic: identical
//! flags produce identical bytes.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use mpaacs::metrics::{squeezing_threshold, sweep, SweepQuantity};
use mpaacs::state::{density_matrix, fock_coefficients, pnd};
use mpaacs::wigner::{linspace, marginal_x, section_y0, wigner_grid, PhaseSpaceGrid, YWindow};
use mpaacs::{Error, MpaacsParams};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "mpaacs",
    version,
    about = "Photon statistics, Wigner functions, and amplifier metrics of multi-photon-added amplified coherent states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct StateArgs {
    /// Seed coherent amplitude magnitude |alpha|
    #[arg(long, default_value_t = 0.0)]
    alpha_mag: f64,

    /// Seed phase in radians
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    alpha_phase: f64,

    /// Amplifier gain g (at least 1)
    #[arg(long, default_value_t = 1.0)]
    gain: f64,

    /// Number of added photons m
    #[arg(long, default_value_t = 0)]
    m: u32,

    /// Truncation tolerance, strictly inside (0, 1)
    #[arg(long, env = "MPAACS_TOLERANCE", default_value_t = 1e-12)]
    tolerance: f64,
}

impl StateArgs {
    fn params(&self) -> Result<MpaacsParams, CliError> {
        MpaacsParams::from_polar(self.alpha_mag, self.alpha_phase, self.gain, self.m)
            .map_err(classify)
    }

    fn meta(&self) -> Vec<(&'static str, Cell)> {
        vec![
            ("alpha_mag", Cell::Float(self.alpha_mag)),
            ("alpha_phase", Cell::Float(self.alpha_phase)),
            ("gain", Cell::Float(self.gain)),
            ("m", Cell::Int(u64::from(self.m))),
            ("tolerance", Cell::Float(self.tolerance)),
        ]
    }
}

#[derive(Args)]
struct OutputArgs {
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write to this file instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Copy, Clone, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum Quantity {
    /// Effective gain
    #[value(name = "g_eff")]
    GEff,
    /// Position-quadrature variance
    #[value(name = "var_x")]
    VarX,
    /// Equivalent input noise
    #[value(name = "n_eq")]
    NEq,
}

impl Quantity {
    fn to_sweep(self) -> SweepQuantity {
        match self {
            Quantity::GEff => SweepQuantity::EffectiveGain,
            Quantity::VarX => SweepQuantity::VarX,
            Quantity::NEq => SweepQuantity::EquivalentInputNoise,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Photon number distribution rows (k, p_k)
    Pnd {
        #[command(flatten)]
        state: StateArgs,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Density matrix magnitude rows (k, l, |rho_kl|)
    Dme {
        #[command(flatten)]
        state: StateArgs,
        /// Largest Fock index to emit (defaults to the truncation cutoff)
        #[arg(long)]
        max_index: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Wigner samples (x, y, w) over a phase-space grid, x-major
    Wigner {
        #[command(flatten)]
        state: StateArgs,
        /// Lower x bound (defaults to a window sized for the state)
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        /// Upper x bound
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Lower y bound
        #[arg(long, allow_negative_numbers = true)]
        y_min: Option<f64>,
        /// Upper y bound
        #[arg(long, allow_negative_numbers = true)]
        y_max: Option<f64>,
        /// Samples along x
        #[arg(long)]
        nx: Option<usize>,
        /// Samples along y
        #[arg(long)]
        ny: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Wigner values (x, w) along the x axis at y = 0
    Section {
        #[command(flatten)]
        state: StateArgs,
        /// Lower x bound (defaults to a window sized for the state)
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        /// Upper x bound
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Number of samples
        #[arg(long, default_value_t = 201)]
        count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Position-quadrature marginal density rows (x, p_x)
    Marginal {
        #[command(flatten)]
        state: StateArgs,
        /// Lower x bound (defaults to a window sized for the state)
        #[arg(long, allow_negative_numbers = true)]
        x_min: Option<f64>,
        /// Upper x bound
        #[arg(long, allow_negative_numbers = true)]
        x_max: Option<f64>,
        /// Number of samples
        #[arg(long, default_value_t = 201)]
        count: usize,
        /// Lower edge of the inner y integration window
        #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
        y_min: f64,
        /// Upper edge of the inner y integration window
        #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
        y_max: f64,
        /// Trapezoid panels for the inner y integral
        #[arg(long, default_value_t = 400)]
        panels: usize,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Amplifier metric rows (alpha_mag, value) over a seed-magnitude range
    Sweep {
        /// Quantity to tabulate
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Amplifier gain g (at least 1)
        #[arg(long, default_value_t = 1.0)]
        gain: f64,
        /// Number of added photons m
        #[arg(long, default_value_t = 0)]
        m: u32,
        /// Lower end of the |alpha| range
        #[arg(long, allow_negative_numbers = true)]
        alpha_lo: f64,
        /// Upper end of the |alpha| range
        #[arg(long, allow_negative_numbers = true)]
        alpha_hi: f64,
        /// Number of samples
        #[arg(long)]
        count: usize,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Squeezing onset u* = g |alpha| for m added photons
    Threshold {
        /// Number of added photons m (1 through 8)
        #[arg(long)]
        m: u32,
        #[command(flatten)]
        output: OutputArgs,
    },

    /// Run the verification suite and list each check by its stable ID
    Verify,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

/// Sorts library errors into flag-validation failures (exit 2, message names
/// the flag) and runtime failures (exit 1).
fn classify(err: Error) -> CliError {
    match err {
        Error::GainBelowUnity(g) => CliError::Usage(format!("--gain must be at least 1 (got {g})")),
        Error::NonFiniteAlpha => CliError::Usage(
            "--alpha-mag must be finite and nonnegative and --alpha-phase finite".to_string(),
        ),
        Error::ToleranceOutOfRange(t) => CliError::Usage(format!(
            "--tolerance must lie strictly between 0 and 1 (got {t:e})"
        )),
        Error::ThresholdOrderOutOfRange(m) => {
            CliError::Usage(format!("--m must lie in 1..=8 for threshold (got {m})"))
        }
        Error::InvalidGrid(message) => CliError::Usage(format!(
            "{message}: check --x-min/--x-max/--y-min/--y-max/--nx/--ny"
        )),
        Error::MarginalWindowClips { y_min, y_max, clipped } => CliError::Usage(format!(
            "--y-min/--y-max window [{y_min}, {y_max}] clips an estimated {clipped:.3e} of the marginal integrand; widen it"
        )),
        Error::NonPositiveSweepStart { quantity, lo } => CliError::Usage(format!(
            "--alpha-lo must be strictly positive for {quantity} sweeps (got {lo})"
        )),
        Error::InvertedSweepRange { lo, hi } => CliError::Usage(format!(
            "--alpha-lo ({lo}) must not exceed --alpha-hi ({hi})"
        )),
        Error::EmptySweep => CliError::Usage("--count must be at least 1".to_string()),
        other => CliError::Runtime(other.to_string()),
    }
}

/// One table value. CSV rendering uses the shortest round-trip float form so
/// output is byte-stable and reloads losslessly.
#[derive(Clone)]
enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(v) => v.clone(),
        }
    }

    fn json(&self) -> serde_json::Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Float(v) => json!(v),
            Cell::Text(v) => json!(v),
        }
    }
}

struct Table {
    command: &'static str,
    columns: &'static [&'static str],
    meta: Vec<(&'static str, Cell)>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => {
                let meta: Vec<String> =
                    self.meta.iter().map(|(k, v)| format!("{k}={}", v.csv())).collect();
                let mut text = format!(
                    "# {} columns={} {}\n",
                    self.command,
                    self.columns.join(","),
                    meta.join(" ")
                );
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::csv).collect();
                    text.push_str(&cells.join(","));
                    text.push('\n');
                }
                text
            }
            Format::Json => {
                let mut meta = serde_json::Map::new();
                meta.insert("command".to_string(), json!(self.command));
                meta.insert("columns".to_string(), json!(self.columns));
                for (key, value) in &self.meta {
                    meta.insert((*key).to_string(), value.json());
                }
                let rows: Vec<serde_json::Value> = self
                    .rows
                    .iter()
                    .map(|row| serde_json::Value::Array(row.iter().map(Cell::json).collect()))
                    .collect();
                let mut text = json!({ "meta": meta, "rows": rows }).to_string();
                text.push('\n');
                text
            }
        }
    }
}

fn float_row(values: &[f64]) -> Vec<Cell> {
    values.iter().map(|&v| Cell::Float(v)).collect()
}

fn run(command: Command) -> Result<(String, OutputArgs, bool), CliError> {
    match command {
        Command::Pnd { state, output } => {
            let params = state.params()?;
            let vector = fock_coefficients(&params, state.tolerance).map_err(classify)?;
            let rows = pnd(&vector)
                .into_iter()
                .map(|(k, p)| vec![Cell::Int(k as u64), Cell::Float(p)])
                .collect();
            let table = Table {
                command: "pnd",
                columns: &["k", "p_k"],
                meta: state.meta(),
                rows,
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Dme { state, max_index, output } => {
            let params = state.params()?;
            let vector = fock_coefficients(&params, state.tolerance).map_err(classify)?;
            let rho = density_matrix(&vector);
            let top = max_index.unwrap_or(rho.dim() - 1).min(rho.dim() - 1);
            let mut rows = Vec::with_capacity((top + 1) * (top + 1));
            for k in 0..=top {
                for l in 0..=top {
                    rows.push(vec![
                        Cell::Int(k as u64),
                        Cell::Int(l as u64),
                        Cell::Float(rho.get(k, l).norm()),
                    ]);
                }
            }
            let mut meta = state.meta();
            meta.push(("max_index", Cell::Int(top as u64)));
            let table = Table {
                command: "dme",
                columns: &["k", "l", "abs_rho_kl"],
                meta,
                rows,
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Wigner { state, x_min, x_max, y_min, y_max, nx, ny, output } => {
            let params = state.params()?;
            let base = PhaseSpaceGrid::default_for(&params);
            let grid = PhaseSpaceGrid::new(
                x_min.unwrap_or_else(|| base.x_min()),
                x_max.unwrap_or_else(|| base.x_max()),
                y_min.unwrap_or_else(|| base.y_min()),
                y_max.unwrap_or_else(|| base.y_max()),
                nx.unwrap_or_else(|| base.nx()),
                ny.unwrap_or_else(|| base.ny()),
            )
            .map_err(classify)?;
            let field = wigner_grid(&params, &grid).map_err(classify)?;
            let mut rows = Vec::with_capacity(grid.nx() * grid.ny());
            for i in 0..grid.nx() {
                for j in 0..grid.ny() {
                    rows.push(float_row(&[grid.x(i), grid.y(j), field.value(i, j)]));
                }
            }
            let mut meta = state.meta();
            meta.push(("x_min", Cell::Float(grid.x_min())));
            meta.push(("x_max", Cell::Float(grid.x_max())));
            meta.push(("y_min", Cell::Float(grid.y_min())));
            meta.push(("y_max", Cell::Float(grid.y_max())));
            meta.push(("nx", Cell::Int(grid.nx() as u64)));
            meta.push(("ny", Cell::Int(grid.ny() as u64)));
            let table = Table {
                command: "wigner",
                columns: &["x", "y", "w"],
                meta,
                rows,
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Section { state, x_min, x_max, count, output } => {
            let params = state.params()?;
            let base = PhaseSpaceGrid::default_for(&params);
            let lo = x_min.unwrap_or_else(|| base.x_min());
            let hi = x_max.unwrap_or_else(|| base.x_max());
            validate_axis(lo, hi, count)?;
            let xs = linspace(lo, hi, count);
            let rows = section_y0(&params, &xs)
                .into_iter()
                .map(|(x, w)| float_row(&[x, w]))
                .collect();
            let mut meta = state.meta();
            meta.push(("x_min", Cell::Float(lo)));
            meta.push(("x_max", Cell::Float(hi)));
            meta.push(("count", Cell::Int(count as u64)));
            let table = Table {
                command: "section",
                columns: &["x", "w"],
                meta,
                rows,
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Marginal {
            state,
            x_min,
            x_max,
            count,
            y_min,
            y_max,
            panels,
            output,
        } => {
            let params = state.params()?;
            let base = PhaseSpaceGrid::default_for(&params);
            let lo = x_min.unwrap_or_else(|| base.x_min());
            let hi = x_max.unwrap_or_else(|| base.x_max());
            validate_axis(lo, hi, count)?;
            let xs = linspace(lo, hi, count);
            let window = YWindow { y_min, y_max, panels };
            let rows = marginal_x(&params, &xs, window)
                .map_err(classify)?
                .into_iter()
                .map(|(x, p)| float_row(&[x, p]))
                .collect();
            let mut meta = state.meta();
            meta.push(("x_min", Cell::Float(lo)));
            meta.push(("x_max", Cell::Float(hi)));
            meta.push(("count", Cell::Int(count as u64)));
            meta.push(("y_min", Cell::Float(y_min)));
            meta.push(("y_max", Cell::Float(y_max)));
            meta.push(("panels", Cell::Int(panels as u64)));
            let table = Table {
                command: "marginal",
                columns: &["x", "p_x"],
                meta,
                rows,
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Sweep { quantity, gain, m, alpha_lo, alpha_hi, count, output } => {
            let sweep_quantity = quantity.to_sweep();
            let label = sweep_quantity.label();
            let rows = sweep(sweep_quantity, (alpha_lo, alpha_hi, count), gain, m)
                .map_err(classify)?
                .into_iter()
                .map(|(mag, value)| float_row(&[mag, value]))
                .collect();
            let meta = vec![
                ("quantity", Cell::Text(label.to_string())),
                ("gain", Cell::Float(gain)),
                ("m", Cell::Int(u64::from(m))),
                ("alpha_lo", Cell::Float(alpha_lo)),
                ("alpha_hi", Cell::Float(alpha_hi)),
                ("count", Cell::Int(count as u64)),
            ];
            let columns: &'static [&'static str] = match sweep_quantity {
                SweepQuantity::EffectiveGain => &["alpha_mag", "g_eff"],
                SweepQuantity::VarX => &["alpha_mag", "var_x"],
                SweepQuantity::EquivalentInputNoise => &["alpha_mag", "n_eq"],
            };
            let table = Table {
                command: "sweep",
                columns,
                meta,
                rows,
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Threshold { m, output } => {
            let u_star = squeezing_threshold(m).map_err(classify)?;
            let table = Table {
                command: "threshold",
                columns: &["m", "u_star"],
                meta: vec![("m", Cell::Int(u64::from(m)))],
                rows: vec![vec![Cell::Int(u64::from(m)), Cell::Float(u_star)]],
            };
            Ok((table.render(output.format), output, false))
        }

        Command::Verify => {
            let reports = mpaacs::verify::run_all();
            let mut text = String::new();
            let mut failed = 0usize;
            for report in &reports {
                let status = if report.passed { "ok  " } else { "FAIL" };
                text.push_str(&format!("{status} {} :: {}\n", report.id, report.detail));
            }
            for report in &reports {
                if !report.passed {
                    failed += 1;
                }
            }
            text.push_str(&format!(
                "{} checks, {} passed, {} failed\n",
                reports.len(),
                reports.len() - failed,
                failed
            ));
            let output = OutputArgs { format: Format::Csv, out: None };
            Ok((text, output, failed > 0))
        }
    }
}

fn validate_axis(lo: f64, hi: f64, count: usize) -> Result<(), CliError> {
    if !lo.is_finite() || !hi.is_finite() || lo > hi {
        return Err(CliError::Usage(format!(
            "--x-min ({lo}) and --x-max ({hi}) must be finite with --x-min <= --x-max"
        )));
    }
    if count == 0 {
        return Err(CliError::Usage("--count must be at least 1".to_string()));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok((text, output, failing)) => {
            if let Some(path) = output.out {
                if let Err(err) = std::fs::write(&path, &text) {
                    eprintln!("error: cannot write {}: {err}", path.display());
                    return ExitCode::from(1);
                }
            } else {
                print!("{text}");
            }
            if failing {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            }
        }
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}
