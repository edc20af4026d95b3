//! Command-line surface of the `qfrac` binary.
//!
//! Every command renders its whole output to a `String` first, so the binary
//! only has to decide between stdout and `--out`.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::circuits::{circuit_unitary, export_qasm, Circuit};
use crate::error::{Error, Result};
use crate::fractional::{
    build_qfrin_circuit_with, build_qfru_circuit, extract_data_block, fractional_operator, shih_coefficients,
    FractionalSpec, Realization,
};
use crate::linalg::{matmul, max_norm_diff, ComplexMatrix, StateVector, DEFAULT_TOL};
use crate::simulator::{ancilla_restoration_probability, run, Trace};
use crate::transforms::{cst4_sector, transform_power, verify_order, BaseTransform, Selector, TransformId};

#[derive(Debug, Parser)]
#[command(name = "qfrac", version, about = "Fractional powers of dyadic-order quantum transforms")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a base transform, its fractional power, or a circuit unitary.
    Dump(DumpArgs),
    /// Run a verification suite and write a CSV report.
    Verify(VerifyArgs),
    /// Tabulate the interpolation curve over a range of α.
    Sweep(CommonArgs),
    /// Write the fractional circuit as OpenQASM 3 text.
    Export(ExportArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformArg {
    Fourier,
    Hartley,
    Cst1,
    Cst4,
}

impl From<TransformArg> for TransformId {
    fn from(t: TransformArg) -> Self {
        match t {
            TransformArg::Fourier => TransformId::Fourier,
            TransformArg::Hartley => TransformId::Hartley,
            TransformArg::Cst1 => TransformId::Cst1,
            TransformArg::Cst4 => TransformId::Cst4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    MatrixText,
    Csv,
    CircuitText,
    StateText,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Additivity,
    Unitarity,
    Equivalence,
    Restoration,
    Order,
    Coefficients,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SelectorArg {
    Cos,
    Sin,
}

#[derive(Debug, Clone, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum)]
    pub transform: TransformArg,
    /// Data qubits (fourier, hartley); for cst1/cst4 the register is `n + 1` qubits.
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Size exponent `N = 2^n` (cst1, cst4).
    #[arg(long = "n")]
    pub n: Option<usize>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "alpha_range")]
    pub alpha: Option<f64>,
    /// `START,END,STEP`, END exclusive.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha_range: Option<String>,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Emit every amplitude in state dumps.
    #[arg(long)]
    pub full: bool,
}

#[derive(Debug, Clone, Args)]
pub struct DumpArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Dump the full unitary of the fractional circuit instead of an operator.
    #[arg(long)]
    pub circuit: bool,
    /// Extract the cosine or sine sector of a cst4 operator.
    #[arg(long = "cst4-selector", alias = "cct4-selector", value_enum)]
    pub cst4_selector: Option<SelectorArg>,
    /// Basis index of the data input for `--format state-text` (random state if absent).
    #[arg(long)]
    pub input: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    #[arg(long, value_enum)]
    pub suite: Suite,
}

#[derive(Debug, Clone, Args)]
pub struct ExportArgs {
    #[command(flatten)]
    pub common: CommonArgs,
    /// Use the single-ancilla involution circuit.
    #[arg(long)]
    pub qfrin: bool,
    /// Force matrix-gate powers even when a gate-level base circuit exists.
    #[arg(long)]
    pub dense: bool,
}

/// Validated view of the common flags.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub transform: TransformId,
    pub size: usize,
    pub alphas: AlphaSelection,
    pub tolerance: f64,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub full: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum AlphaSelection {
    Default,
    Single(f64),
    Range { start: f64, stop: f64, step: f64 },
}

impl AlphaSelection {
    /// The sampled values; a range is `start + k·step` for every point below `stop`.
    pub fn values(&self, default: &[f64]) -> Vec<f64> {
        match *self {
            AlphaSelection::Default => default.to_vec(),
            AlphaSelection::Single(a) => vec![a],
            AlphaSelection::Range { start, stop, step } => {
                let count = ((stop - start) / step - 1e-9).ceil().max(0.0) as usize;
                (0..count).map(|k| start + k as f64 * step).collect()
            }
        }
    }
}

fn parse_range(s: &str) -> Result<AlphaSelection> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| Error::Domain(format!("bad --alpha-range `{s}`: {e}")))?;
    let [start, stop, step] = parts[..] else {
        return Err(Error::Domain(format!("--alpha-range needs START,END,STEP, got `{s}`")));
    };
    if !step.is_finite() || step <= 0.0 || !start.is_finite() || !stop.is_finite() {
        return Err(Error::Domain("--alpha-range step must be positive and all bounds finite".into()));
    }
    Ok(AlphaSelection::Range { start, stop, step })
}

impl RunConfig {
    pub fn from_args(a: &CommonArgs) -> Result<Self> {
        let transform = TransformId::from(a.transform);
        let size = match transform {
            TransformId::Fourier | TransformId::Hartley => a.qubits.or(a.n),
            TransformId::Cst1 | TransformId::Cst4 => a.n.or(a.qubits.map(|q| q.saturating_sub(1))),
        }
        .ok_or_else(|| Error::Domain(format!("{transform} needs --qubits or --n")))?;
        if !(a.tol > 0.0 && a.tol <= 1e-2) {
            return Err(Error::Domain(format!("--tol {} outside (0, 1e-2]", a.tol)));
        }
        let alphas = match (&a.alpha, &a.alpha_range) {
            (Some(x), _) if !x.is_finite() => return Err(Error::Domain("--alpha must be finite".into())),
            (Some(x), _) => AlphaSelection::Single(*x),
            (None, Some(r)) => parse_range(r)?,
            (None, None) => AlphaSelection::Default,
        };
        Ok(Self {
            transform,
            size,
            alphas,
            tolerance: a.tol,
            seed: a.seed,
            out: a.out.clone(),
            format: a.format,
            full: a.full,
        })
    }

    pub fn base(&self) -> Result<BaseTransform> {
        self.transform.build(self.size)
    }
}

/// Rendered command output plus the overall verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub text: String,
    pub success: bool,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, success: true }
    }
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Dump(a) => cmd_dump(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Sweep(a) => cmd_sweep(&RunConfig::from_args(a)?),
        Command::Export(a) => cmd_export(a),
    }
}

/// Where the output of `cli` should go.
pub fn output_path(cli: &Cli) -> Option<&PathBuf> {
    match &cli.command {
        Command::Dump(a) => a.common.out.as_ref(),
        Command::Verify(a) => a.common.out.as_ref(),
        Command::Sweep(a) => a.out.as_ref(),
        Command::Export(a) => a.common.out.as_ref(),
    }
}

fn single_alpha(cfg: &RunConfig, fallback: f64) -> Result<f64> {
    match cfg.alphas {
        AlphaSelection::Single(a) => Ok(a),
        AlphaSelection::Default => Ok(fallback),
        AlphaSelection::Range { .. } => Err(Error::Domain("this command takes --alpha, not --alpha-range".into())),
    }
}

fn preferred_realization(base: &BaseTransform, force_dense: bool) -> Realization {
    if base.circuit.is_some() && !force_dense {
        Realization::GateLevel
    } else {
        Realization::Dense
    }
}

pub fn cmd_dump(a: &DumpArgs) -> Result<Outcome> {
    let cfg = RunConfig::from_args(&a.common)?;
    let base = cfg.base()?;
    let format = cfg.format.unwrap_or(Format::MatrixText);
    match format {
        Format::MatrixText => {
            let mut m = if a.circuit {
                let spec = FractionalSpec::new(base, single_alpha(&cfg, 0.0)?)?;
                circuit_unitary(&build_qfru_circuit(&spec)?)?
            } else {
                match cfg.alphas {
                    AlphaSelection::Default => base.dense.clone(),
                    _ => fractional_operator(&base.dense, base.order_exponent, single_alpha(&cfg, 0.0)?)?,
                }
            };
            if let Some(sel) = a.cst4_selector {
                if cfg.transform != TransformId::Cst4 || a.circuit {
                    return Err(Error::Domain("--cst4-selector applies to cst4 operators only".into()));
                }
                let sel = match sel {
                    SelectorArg::Cos => Selector::Cos,
                    SelectorArg::Sin => Selector::Sin,
                };
                m = cst4_sector(&m, sel)?;
            }
            Ok(Outcome::ok(m.to_text()))
        }
        Format::StateText => {
            let spec = FractionalSpec::new(base, single_alpha(&cfg, 0.0)?)?;
            let circuit = build_qfru_circuit(&spec)?;
            let data = match a.input {
                Some(idx) => StateVector::basis(spec.data_qubits, idx)?,
                None => StateVector::random(spec.data_qubits, &mut ChaCha8Rng::seed_from_u64(cfg.seed))?,
            };
            let input = StateVector::zero(spec.control_qubits())?.tensor(&data)?;
            let (out, _) = run(&circuit, &input, &Trace::Off)?;
            Ok(Outcome::ok(out.to_text(cfg.full)))
        }
        Format::CircuitText => {
            let realization = preferred_realization(&base, false);
            let spec = FractionalSpec::new(base, single_alpha(&cfg, 0.0)?)?.with_realization(realization)?;
            Ok(Outcome::ok(export_qasm(&build_qfru_circuit(&spec)?)?))
        }
        Format::Csv => Err(Error::Domain("dump writes matrix-text, state-text or circuit-text".into())),
    }
}

pub fn cmd_export(a: &ExportArgs) -> Result<Outcome> {
    let cfg = RunConfig::from_args(&a.common)?;
    let base = cfg.base()?;
    let alpha = single_alpha(&cfg, 0.0)?;
    let realization = preferred_realization(&base, a.dense);
    let circuit: Circuit = if a.qfrin {
        build_qfrin_circuit_with(&base, alpha, realization)?
    } else {
        build_qfru_circuit(&FractionalSpec::new(base, alpha)?.with_realization(realization)?)?
    };
    Ok(Outcome::ok(export_qasm(&circuit)?))
}

/// One verification row.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub suite: &'static str,
    pub case_id: String,
    pub alpha: Option<f64>,
    pub beta: Option<f64>,
    pub deviation: f64,
    pub tolerance: f64,
}

impl ReportRow {
    pub fn pass(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

pub const REPORT_COLUMNS: &str = "suite,case_id,alpha,beta,deviation,tolerance,pass";

fn opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v}")).unwrap_or_default()
}

pub fn render_report(header: &str, rows: &[ReportRow]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# {header}");
    let _ = writeln!(out, "{REPORT_COLUMNS}");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{:.6e},{:e},{}",
            r.suite,
            r.case_id,
            opt(r.alpha),
            opt(r.beta),
            r.deviation,
            r.tolerance,
            r.pass()
        );
    }
    out
}

const EQUIVALENCE_ALPHAS: [f64; 6] = [0.0, 0.25, 0.5, 1.0, 1.7, 3.0];
/// Residue bound for the root-of-unity eigen check.
pub const EIGEN_RESIDUE_TOL: f64 = 1e-6;

fn suite_name(s: Suite) -> &'static str {
    match s {
        Suite::Additivity => "additivity",
        Suite::Unitarity => "unitarity",
        Suite::Equivalence => "equivalence",
        Suite::Restoration => "restoration",
        Suite::Order => "order",
        Suite::Coefficients => "coefficients",
    }
}

/// Runs one suite; failures become rows, only setup errors propagate.
pub fn verify_rows(cfg: &RunConfig, suite: Suite) -> Result<Vec<ReportRow>> {
    let base = cfg.base()?;
    let order = base.order();
    let name = suite_name(suite);
    let tol = cfg.tolerance;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let frac = |alpha: f64| fractional_operator(&base.dense, base.order_exponent, alpha);
    let row = |case_id: String, alpha: Option<f64>, beta: Option<f64>, deviation: f64, tolerance: f64| ReportRow {
        suite: name,
        case_id,
        alpha,
        beta,
        deviation,
        tolerance,
    };
    let mut rows = Vec::new();
    match suite {
        Suite::Additivity => {
            let pairs: Vec<(f64, f64)> = match cfg.alphas {
                AlphaSelection::Default => {
                    (0..25).map(|_| (rng.gen_range(0.0..order as f64), rng.gen_range(0.0..order as f64))).collect()
                }
                ref sel => sel.values(&[]).into_iter().map(|a| (a, rng.gen_range(0.0..order as f64))).collect(),
            };
            for (i, (a, b)) in pairs.into_iter().enumerate() {
                let lhs = matmul(&frac(a)?, &frac(b)?)?;
                let dev = max_norm_diff(&lhs, &frac(a + b)?)?;
                rows.push(row(format!("pair-{i}"), Some(a), Some(b), dev, tol));
            }
        }
        Suite::Unitarity => {
            let default: Vec<f64> = (0..order * 10).map(|k| k as f64 * 0.1).collect();
            for (i, a) in cfg.alphas.values(&default).into_iter().enumerate() {
                rows.push(row(format!("alpha-{i}"), Some(a), None, frac(a)?.unitarity_deviation(), tol));
            }
        }
        Suite::Equivalence => {
            let mut realizations = vec![Realization::Dense];
            if base.circuit.is_some() {
                realizations.push(Realization::GateLevel);
            }
            for a in cfg.alphas.values(&EQUIVALENCE_ALPHAS) {
                for &r in &realizations {
                    let spec = FractionalSpec::new(base.clone(), a)?.with_realization(r)?;
                    let full = circuit_unitary(&build_qfru_circuit(&spec)?)?;
                    let db = extract_data_block(&full, spec.control_qubits(), spec.data_qubits)?;
                    let dev = max_norm_diff(&db.block, &frac(a)?)?.max(db.leakage);
                    let tag = match r {
                        Realization::Dense => "dense",
                        Realization::GateLevel => "gates",
                    };
                    rows.push(row(tag.to_string(), Some(a), None, dev, tol));
                }
            }
        }
        Suite::Restoration => {
            for a in cfg.alphas.values(&EQUIVALENCE_ALPHAS) {
                let spec = FractionalSpec::new(base.clone(), a)?;
                let data = StateVector::random(spec.data_qubits, &mut rng)?;
                let input = StateVector::zero(spec.ancillas)?.tensor(&data)?;
                let (out, _) = run(&build_qfru_circuit(&spec)?, &input, &Trace::Off)?;
                let p = ancilla_restoration_probability(&out, spec.ancillas)?;
                let expected = StateVector::new(frac(a)?.apply(data.amplitudes())?)?;
                let got = StateVector::new(out.amplitudes()[..data.amplitudes().len()].to_vec())?;
                let dev = (1.0 - p).abs().max(got.max_diff(&expected)?);
                rows.push(row("random-input".to_string(), Some(a), None, dev, tol));
            }
        }
        Suite::Order => match verify_order(&base, 6) {
            Ok(rep) => rows.push(row(
                format!("order_exponent={}", rep.exponent),
                None,
                None,
                rep.eigen_residue.max(rep.power_deviation),
                EIGEN_RESIDUE_TOL,
            )),
            Err(e) => {
                rows.push(row(format!("error: {e}").replace(',', ";"), None, None, f64::INFINITY, EIGEN_RESIDUE_TOL))
            }
        },
        Suite::Coefficients => {
            let alphas = match cfg.alphas {
                AlphaSelection::Default => {
                    (0..100).map(|_| rng.gen_range(-2.0 * order as f64..2.0 * order as f64)).collect()
                }
                ref sel => sel.values(&[]),
            };
            for (i, a) in alphas.into_iter().enumerate() {
                let c = shih_coefficients(order, a)?;
                let dev = (c.sum() - 1.0).norm().max((c.norm_sqr() - 1.0).abs());
                rows.push(row(format!("N={order}-{i}"), Some(a), None, dev, tol));
            }
        }
    }
    Ok(rows)
}

pub fn cmd_verify(a: &VerifyArgs) -> Result<Outcome> {
    let cfg = RunConfig::from_args(&a.common)?;
    let rows = verify_rows(&cfg, a.suite)?;
    let header = format!(
        "suite={} transform={} size={} seed={} tol={:e}",
        suite_name(a.suite),
        cfg.transform,
        cfg.size,
        cfg.seed,
        cfg.tolerance
    );
    let success = rows.iter().all(ReportRow::pass);
    Ok(Outcome { text: render_report(&header, &rows), success })
}

pub const SWEEP_COLUMNS: &str =
    "alpha,coeff_norm_sq,unitarity_deviation,nearest_power,distance_to_nearest_power,distance_to_identity,distance_to_base";

/// One point of the interpolation curve.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub alpha: f64,
    pub coeff_norm_sq: f64,
    pub unitarity_deviation: f64,
    pub nearest_power: i64,
    pub distance_to_nearest_power: f64,
    pub distance_to_identity: f64,
    pub distance_to_base: f64,
}

pub fn sweep_rows(base: &BaseTransform, alphas: &[f64]) -> Result<Vec<SweepRow>> {
    let order = base.order();
    let identity = ComplexMatrix::identity(base.dim());
    let mut rows: Vec<SweepRow> = alphas
        .par_iter()
        .map(|&alpha| {
            let m = fractional_operator(&base.dense, base.order_exponent, alpha)?;
            let nearest = alpha.round() as i64;
            Ok(SweepRow {
                alpha,
                coeff_norm_sq: shih_coefficients(order, alpha)?.norm_sqr(),
                unitarity_deviation: m.unitarity_deviation(),
                nearest_power: nearest,
                distance_to_nearest_power: max_norm_diff(&m, &transform_power(base, nearest)?)?,
                distance_to_identity: max_norm_diff(&m, &identity)?,
                distance_to_base: max_norm_diff(&m, &base.dense)?,
            })
        })
        .collect::<Result<_>>()?;
    rows.sort_by(|a, b| a.alpha.total_cmp(&b.alpha));
    Ok(rows)
}

pub fn cmd_sweep(cfg: &RunConfig) -> Result<Outcome> {
    let base = cfg.base()?;
    let default: Vec<f64> = (0..base.order() * 10).map(|k| k as f64 * 0.1).collect();
    let rows = sweep_rows(&base, &cfg.alphas.values(&default))?;
    let mut out = String::new();
    let _ = writeln!(out, "{SWEEP_COLUMNS}");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:.17e},{:.6e},{},{:.6e},{:.6e},{:.6e}",
            r.alpha,
            r.coeff_norm_sq,
            r.unitarity_deviation,
            r.nearest_power,
            r.distance_to_nearest_power,
            r.distance_to_identity,
            r.distance_to_base
        );
    }
    Ok(Outcome::ok(out))
}
