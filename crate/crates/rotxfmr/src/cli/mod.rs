//! Command-line front end: `rotxfmr <analyze|bode|sweep|gain>`.
//!
//! Exit codes: 0 success, 2 input/validation error, 3 tolerance failure.
//! CSV tables go to files named by `--out <prefix>`; a summary always goes
//! to stdout.

pub mod config;
pub mod output;

use crate::analysis::{
    airgap_sweep, compare_reference, ComparisonReport, GainStudy, SweepScale, SweepSpec,
};
use crate::circuits::{
    adjusted_ratio, bode_sample, exact_ratio, from_mec, log_grid, to_model_ii, to_model_iii,
    CircuitModel, CouplingParams, IntegratedLeakageParams, LoadImpedance,
};
use crate::geometry::WindingSpec;
use clap::{Parser, Subcommand, ValueEnum};
use config::LoadedConfig;
use output::{fmt_f64, read_reference_csv, CsvTable, OutputBundle};
use std::path::PathBuf;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_TOLERANCE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rotxfmr", version, about = "Axial rotary-transformer analytical modeling")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full reluctance breakdown, inductances, and transformer ratios.
    Analyze {
        /// JSON run configuration.
        #[arg(long)]
        config: PathBuf,
        /// Output file prefix; tables are written as <prefix>_<name>.csv.
        #[arg(long)]
        out: Option<String>,
    },
    /// Voltage-gain frequency response (magnitude/phase CSV per curve).
    Bode {
        #[arg(long)]
        config: PathBuf,
        /// Circuit model to sample.
        #[arg(long, value_enum, default_value_t = ModelArg::Iii)]
        model: ModelArg,
        /// Load: none | R=<ohms> | RL=<ohms>,<henries> | RLS=<ohms>,<henries>.
        /// RL is a parallel R∥L (resolver-style); RLS is a series R+L.
        #[arg(long, default_value = "R=10")]
        load: String,
        #[arg(long, default_value_t = 10.0)]
        f_min: f64,
        #[arg(long, default_value_t = 1.0e6)]
        f_max: f64,
        #[arg(long, default_value_t = 200)]
        n_points: usize,
        /// Transformer ratio used by the integrated-leakage model.
        #[arg(long, value_enum, default_value_t = RatioModeArg::Exact)]
        ratio_mode: RatioModeArg,
        #[arg(long)]
        out: Option<String>,
    },
    /// Airgap sweep of inductances and adjusted ratio, with optional
    /// reference comparison.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// Smallest airgap, in the config's declared units.
        #[arg(long)]
        g_min: f64,
        /// Largest airgap, in the config's declared units.
        #[arg(long)]
        g_max: f64,
        #[arg(long, default_value_t = 19)]
        n_points: usize,
        #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
        scale: ScaleArg,
        /// Reference CSV (first column g_m, further columns compared).
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Maximum allowed relative error against the reference.
        #[arg(long, default_value_t = 0.10)]
        tolerance: f64,
        #[arg(long)]
        out: Option<String>,
    },
    /// Stator/rotor voltage prediction at one operating point.
    Gain {
        #[arg(long)]
        config: PathBuf,
        /// Airgap, in the config's declared units.
        #[arg(long)]
        airgap: f64,
        /// Load: none | R=<ohms> | RL=<ohms>,<henries> | RLS=<ohms>,<henries>.
        #[arg(long, default_value = "none")]
        load: String,
        /// Excitation voltage magnitude (V).
        #[arg(long, default_value_t = 2.5)]
        v_exc: f64,
        /// Excitation frequency (Hz).
        #[arg(long, default_value_t = 4000.0)]
        f_exc: f64,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelArg {
    I,
    Ii,
    Iii,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum RatioModeArg {
    Exact,
    Turns,
    Adjusted,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ScaleArg {
    Linear,
    Log,
}

#[derive(Debug)]
enum CmdError {
    Input(String),
    Io(String),
}

impl From<std::io::Error> for CmdError {
    fn from(e: std::io::Error) -> Self {
        CmdError::Io(e.to_string())
    }
}

struct CommandOutcome {
    bundle: OutputBundle,
    exit: i32,
}

/// Parses arguments from the process environment and runs; returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    run_cli(cli)
}

pub fn run_cli(cli: Cli) -> i32 {
    let (outcome, out) = match dispatch(cli) {
        Ok(pair) => pair,
        Err(CmdError::Input(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
        Err(CmdError::Io(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    };
    if let Some(prefix) = out {
        match outcome.bundle.write_files(&prefix) {
            Ok(paths) => {
                for p in paths {
                    println!("wrote {}", p.display());
                }
            }
            Err(e) => {
                eprintln!("error: cannot write output: {e}");
                return EXIT_INPUT;
            }
        }
    }
    print!("{}", outcome.bundle.summary);
    outcome.exit
}

fn dispatch(cli: Cli) -> Result<(CommandOutcome, Option<String>), CmdError> {
    match cli.command {
        Command::Analyze { config, out } => {
            let loaded = load(&config)?;
            Ok((cmd_analyze(&loaded)?, out))
        }
        Command::Bode { config, model, load: load_spec, f_min, f_max, n_points, ratio_mode, out } => {
            let loaded = load(&config)?;
            let load_imp = parse_load_spec(&load_spec).map_err(CmdError::Input)?;
            Ok((cmd_bode(&loaded, model, &load_imp, f_min, f_max, n_points, ratio_mode)?, out))
        }
        Command::Sweep {
            config,
            g_min,
            g_max,
            n_points,
            scale,
            reference,
            tolerance,
            out,
        } => {
            let loaded = load(&config)?;
            Ok((cmd_sweep(&loaded, g_min, g_max, n_points, scale, reference.as_deref(), tolerance)?, out))
        }
        Command::Gain { config, airgap, load: load_spec, v_exc, f_exc, out } => {
            let loaded = load(&config)?;
            let load_imp = parse_load_spec(&load_spec).map_err(CmdError::Input)?;
            Ok((cmd_gain(&loaded, airgap, &load_imp, v_exc, f_exc)?, out))
        }
    }
}

fn load(path: &std::path::Path) -> Result<LoadedConfig, CmdError> {
    LoadedConfig::from_path(path).map_err(CmdError::Input)
}

/// Load grammar: none | R=<ohms> | RL=<ohms>,<henries> | RLS=<ohms>,<henries>.
///
/// `RL` builds a parallel R∥L, the usual equivalent of a resolver
/// excitation winding; `RLS` builds a series R+L.
pub fn parse_load_spec(spec: &str) -> Result<LoadImpedance, String> {
    let spec = spec.trim();
    if spec.eq_ignore_ascii_case("none") {
        return Ok(LoadImpedance::OpenCircuit);
    }
    let parse_pair = |body: &str| -> Result<(f64, f64), String> {
        let mut it = body.split(',');
        let r = it
            .next()
            .ok_or_else(|| format!("malformed load spec '{spec}'"))?
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("malformed load spec '{spec}': {e}"))?;
        let l = it
            .next()
            .ok_or_else(|| format!("load spec '{spec}' needs <ohms>,<henries>"))?
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("malformed load spec '{spec}': {e}"))?;
        if it.next().is_some() {
            return Err(format!("load spec '{spec}' has trailing fields"));
        }
        if r < 0.0 || l < 0.0 {
            return Err(format!("load spec '{spec}' must be nonnegative"));
        }
        Ok((r, l))
    };
    if let Some(body) = spec.strip_prefix("RLS=") {
        let (r, l) = parse_pair(body)?;
        return Ok(LoadImpedance::SeriesRl { r, l });
    }
    if let Some(body) = spec.strip_prefix("RL=") {
        let (r, l) = parse_pair(body)?;
        return Ok(LoadImpedance::ParallelRl { r, l });
    }
    if let Some(body) = spec.strip_prefix("R=") {
        let r = body
            .trim()
            .parse::<f64>()
            .map_err(|e| format!("malformed load spec '{spec}': {e}"))?;
        if r < 0.0 {
            return Err(format!("load resistance in '{spec}' must be nonnegative"));
        }
        return Ok(LoadImpedance::Resistive { r });
    }
    Err(format!("unrecognized load spec '{spec}' (expected none | R= | RL= | RLS=)"))
}

fn describe_load(load: &LoadImpedance) -> String {
    match *load {
        LoadImpedance::OpenCircuit => "open circuit".to_string(),
        LoadImpedance::Resistive { r } => format!("resistive {r} ohm"),
        LoadImpedance::SeriesRl { r, l } => format!("series {r} ohm + {l} H"),
        LoadImpedance::ParallelRl { r, l } => format!("parallel {r} ohm || {l} H"),
    }
}

fn source_line(command: &str, hash: &str) -> String {
    format!("rotxfmr {command}, config sha256:{hash}, v{}", env!("CARGO_PKG_VERSION"))
}

fn cmd_analyze(loaded: &LoadedConfig) -> Result<CommandOutcome, CmdError> {
    let geom = loaded.geometry().map_err(CmdError::Input)?;
    let material = loaded.material().map_err(CmdError::Input)?;
    let winding = loaded.winding().map_err(CmdError::Input)?;
    let derived = geom.derived().map_err(|e| CmdError::Input(e.to_string()))?;
    let point = crate::analysis::evaluate_point(&geom, &material, &winding)
        .map_err(|e| CmdError::Input(e.to_string()))?;

    let params = from_mec(point.l_m, point.l_l, &winding, winding.turn_ratio())
        .map_err(|e| CmdError::Input(e.to_string()))?;
    let coupling = params.to_coupling().map_err(|e| CmdError::Input(e.to_string()))?;
    let k = crate::circuits::coupling_coefficient(&coupling);
    let n_exact = exact_ratio(&coupling);

    let mut table = CsvTable::new(
        "analyze",
        source_line("analyze", &loaded.hash),
        &["quantity", "value", "unit"],
    );
    let b = &point.breakdown;
    let rows: Vec<(&str, f64, &str)> = vec![
        ("h", derived.h, "m"),
        ("r_f_o", derived.r_f_o, "m"),
        ("r_f_i", derived.r_f_i, "m"),
        ("R_ys", b.core.r_ys, "1/H"),
        ("R_yr", b.core.r_yr, "1/H"),
        ("R_ts1", b.core.r_ts1, "1/H"),
        ("R_tr1", b.core.r_tr1, "1/H"),
        ("R_cs1", b.core.r_cs1, "1/H"),
        ("R_cr1", b.core.r_cr1, "1/H"),
        ("R_ts2", b.core.r_ts2, "1/H"),
        ("R_tr2", b.core.r_tr2, "1/H"),
        ("R_cs2", b.core.r_cs2, "1/H"),
        ("R_cr2", b.core.r_cr2, "1/H"),
        ("R_g1", b.gap.r_g1, "1/H"),
        ("R_go1", b.gap.r_go1, "1/H"),
        ("R_gi1", b.gap.r_gi1, "1/H"),
        ("R_geq1", b.gap.r_geq1, "1/H"),
        ("R_g2", b.gap.r_g2, "1/H"),
        ("R_go2", b.gap.r_go2, "1/H"),
        ("R_gi2", b.gap.r_gi2, "1/H"),
        ("R_geq2", b.gap.r_geq2, "1/H"),
        ("R_m", b.r_m, "1/H"),
        ("gap_share", point.gap_share, "-"),
        ("l_m", point.l_m, "H"),
        ("l_l", point.l_l, "H"),
        ("k", k, "-"),
        ("n_exact", n_exact, "-"),
        ("n_adjusted", point.n_adjusted, "-"),
        ("n_turn", winding.turn_ratio(), "-"),
    ];
    for (name, value, unit) in rows {
        table.push_row(vec![name.to_string(), fmt_f64(value), unit.to_string()]);
    }

    let summary = format!(
        "analyze: R_m = {:.6e} 1/H (gap share {:.4})\n  l_m = {:.6e} H, l_l = {:.6e} H, k = {:.4}\n  n_exact = {:.4}, n_adjusted = {:.4}, turn ratio = {:.4}\n",
        b.r_m,
        point.gap_share,
        point.l_m,
        point.l_l,
        k,
        n_exact,
        point.n_adjusted,
        winding.turn_ratio(),
    );

    Ok(CommandOutcome { bundle: OutputBundle { tables: vec![table], summary }, exit: EXIT_OK })
}

/// Integrated-leakage parameter sets used by the bode ratio modes.
struct RatioVariants {
    exact: IntegratedLeakageParams,
    turns: Option<IntegratedLeakageParams>,
    adjusted: Option<IntegratedLeakageParams>,
}

fn base_coupling(loaded: &LoadedConfig) -> Result<CouplingParams, CmdError> {
    if let Some(p) = loaded.circuit().map_err(CmdError::Input)? {
        return Ok(p);
    }
    let geom = loaded.geometry().map_err(|e| {
        CmdError::Input(format!("config needs either a circuit section or geometry: {e}"))
    })?;
    let material = loaded.material().map_err(CmdError::Input)?;
    let winding = loaded.winding().map_err(CmdError::Input)?;
    let point = crate::analysis::evaluate_point(&geom, &material, &winding)
        .map_err(|e| CmdError::Input(e.to_string()))?;
    from_mec(point.l_m, point.l_l, &winding, winding.turn_ratio())
        .and_then(|p| p.to_coupling())
        .map_err(|e| CmdError::Input(e.to_string()))
}

fn ratio_variants(
    loaded: &LoadedConfig,
    coupling: &CouplingParams,
    need_turn_ratio: bool,
) -> Result<RatioVariants, CmdError> {
    let exact = to_model_iii(coupling).map_err(|e| CmdError::Input(e.to_string()))?;
    if !need_turn_ratio {
        return Ok(RatioVariants { exact, turns: None, adjusted: None });
    }
    let winding = loaded
        .winding()
        .map_err(|e| CmdError::Input(format!("ratio modes other than exact need a winding: {e}")))?;
    let tr = winding.turn_ratio();
    let turns = IntegratedLeakageParams { n: tr, ..exact };
    let adjusted = IntegratedLeakageParams {
        n: adjusted_ratio(exact.l_m, exact.l_l, tr),
        ..exact
    };
    Ok(RatioVariants { exact, turns: Some(turns), adjusted: Some(adjusted) })
}

fn cmd_bode(
    loaded: &LoadedConfig,
    model: ModelArg,
    load: &LoadImpedance,
    f_min: f64,
    f_max: f64,
    n_points: usize,
    ratio_mode: RatioModeArg,
) -> Result<CommandOutcome, CmdError> {
    if !(f_min > 0.0) || !(f_min < f_max) || n_points == 0 {
        return Err(CmdError::Input(format!(
            "invalid frequency range: f_min = {f_min}, f_max = {f_max}, n_points = {n_points}"
        )));
    }
    if model != ModelArg::Iii && ratio_mode != RatioModeArg::Exact {
        return Err(CmdError::Input(
            "--ratio-mode applies to the integrated-leakage model (--model iii)".into(),
        ));
    }

    let coupling = base_coupling(loaded)?;
    let need_tr = ratio_mode != RatioModeArg::Exact;
    let variants = ratio_variants(loaded, &coupling, need_tr)?;

    let mut curves: Vec<(&str, CircuitModel)> = Vec::new();
    match (model, ratio_mode) {
        (ModelArg::I, _) => curves.push(("model_i", CircuitModel::Coupling(coupling))),
        (ModelArg::Ii, _) => {
            curves.push(("model_ii", CircuitModel::SplitLeakage(to_model_ii(&coupling))))
        }
        (ModelArg::Iii, RatioModeArg::Exact) => {
            curves.push(("model_iii", CircuitModel::IntegratedLeakage(variants.exact)))
        }
        (ModelArg::Iii, RatioModeArg::Turns) => curves
            .push(("ratio_turns", CircuitModel::IntegratedLeakage(variants.turns.unwrap()))),
        (ModelArg::Iii, RatioModeArg::Adjusted) => curves.push((
            "ratio_adjusted",
            CircuitModel::IntegratedLeakage(variants.adjusted.unwrap()),
        )),
        (ModelArg::Iii, RatioModeArg::All) => {
            curves.push(("ratio_exact", CircuitModel::IntegratedLeakage(variants.exact)));
            curves
                .push(("ratio_turns", CircuitModel::IntegratedLeakage(variants.turns.unwrap())));
            curves.push((
                "ratio_adjusted",
                CircuitModel::IntegratedLeakage(variants.adjusted.unwrap()),
            ));
        }
        (ModelArg::All, _) => {
            curves.push(("model_i", CircuitModel::Coupling(coupling)));
            curves.push(("model_ii", CircuitModel::SplitLeakage(to_model_ii(&coupling))));
            curves.push(("model_iii", CircuitModel::IntegratedLeakage(variants.exact)));
        }
    }

    let grid = log_grid(f_min, f_max, n_points);
    let mut tables = Vec::new();
    let mut responses = Vec::new();
    for (name, circuit) in &curves {
        let resp =
            bode_sample(circuit, load, &grid).map_err(|e| CmdError::Input(e.to_string()))?;
        let mut table = CsvTable::new(
            &format!("bode_{name}"),
            source_line("bode", &loaded.hash),
            &["freq_hz", "mag_db", "phase_deg"],
        );
        let mags = resp.magnitude_db();
        let phases = resp.phase_deg();
        for i in 0..resp.freqs.len() {
            table.push_row(vec![fmt_f64(resp.freqs[i]), fmt_f64(mags[i]), fmt_f64(phases[i])]);
        }
        for &i in &resp.flagged {
            table.trailing_comments.push(format!("singular at freq_hz = {}", resp.freqs[i]));
        }
        tables.push(table);
        responses.push(resp);
    }

    let mut summary = format!(
        "bode: {} curve(s), {} points in [{} Hz, {} Hz], load = {}\n",
        curves.len(),
        n_points,
        f_min,
        f_max,
        describe_load(load),
    );
    if responses.len() > 1 {
        let mut max_dev = 0.0_f64;
        for other in &responses[1..] {
            for (a, b) in responses[0].gains.iter().zip(&other.gains) {
                let dev = (a - b).norm() / a.norm().max(f64::MIN_POSITIVE);
                max_dev = max_dev.max(dev);
            }
        }
        if model == ModelArg::All {
            summary.push_str(&format!("  max relative deviation between models: {max_dev:.3e}\n"));
        }
        if ratio_mode == RatioModeArg::All {
            let flat = |r: &crate::circuits::FrequencyResponse| 20.0 * r.gains[0].norm().log10();
            let gap_turns = flat(&responses[0]) - flat(&responses[1]);
            let gap_adj = flat(&responses[2]) - flat(&responses[1]);
            summary.push_str(&format!(
                "  flat-band gap exact vs turns: {gap_turns:.3} dB; adjusted vs turns: {gap_adj:.3} dB\n",
            ));
        }
    }

    Ok(CommandOutcome { bundle: OutputBundle { tables, summary }, exit: EXIT_OK })
}

const SWEEP_COLUMNS: [&str; 4] = ["l_m_H", "l_l_H", "n_adjusted", "gap_share"];

fn cmd_sweep(
    loaded: &LoadedConfig,
    g_min: f64,
    g_max: f64,
    n_points: usize,
    scale: ScaleArg,
    reference: Option<&std::path::Path>,
    tolerance: f64,
) -> Result<CommandOutcome, CmdError> {
    if g_min > g_max {
        return Err(CmdError::Input(format!("g_min = {g_min} exceeds g_max = {g_max}")));
    }
    let geometry = loaded.geometry().map_err(CmdError::Input)?;
    let material = loaded.material().map_err(CmdError::Input)?;
    let winding = loaded.winding().map_err(CmdError::Input)?;
    let k = loaded.config.units.to_meters();
    let spec = SweepSpec {
        g_min: k * g_min,
        g_max: k * g_max,
        n_points,
        scale: match scale {
            ScaleArg::Linear => SweepScale::Linear,
            ScaleArg::Log => SweepScale::Logarithmic,
        },
        geometry,
        material,
        winding,
    };
    let result = airgap_sweep(&spec).map_err(|e| CmdError::Input(e.to_string()))?;

    // Optional reference comparison: model samples interpolated onto the
    // reference abscissas, one report per reference column.
    let mut reports: Vec<ComparisonReport> = Vec::new();
    if let Some(path) = reference {
        let datasets = read_reference_csv(path).map_err(CmdError::Input)?;
        if datasets.is_empty() {
            return Err(CmdError::Input("reference file holds no data columns".into()));
        }
        for dataset in &datasets {
            if !SWEEP_COLUMNS.contains(&dataset.label.as_str()) {
                return Err(CmdError::Input(format!(
                    "reference column '{}' is not a sweep quantity (expected one of {:?})",
                    dataset.label, SWEEP_COLUMNS
                )));
            }
            let model_points: Vec<(f64, f64)> = result
                .valid_rows()
                .map(|(g, p)| {
                    let v = match dataset.label.as_str() {
                        "l_m_H" => p.l_m,
                        "l_l_H" => p.l_l,
                        "n_adjusted" => p.n_adjusted,
                        _ => p.gap_share,
                    };
                    (g, v)
                })
                .collect();
            let report =
                compare_reference(&model_points, &dataset.label, dataset, tolerance)
                    .map_err(|e| CmdError::Input(e.to_string()))?;
            reports.push(report);
        }
    }

    let mut header: Vec<String> =
        ["g_m", "l_m_H", "l_l_H", "n_adjusted", "gap_share"].iter().map(|s| s.to_string()).collect();
    for report in &reports {
        header.push(format!("err_{}", report.label));
    }
    let header_refs: Vec<&str> = header.iter().map(String::as_str).collect();
    let mut table =
        CsvTable::new("sweep", source_line("sweep", &loaded.hash), &header_refs);

    let matches_x = |x: f64, g: f64| (x - g).abs() <= 1e-9 * x.abs().max(g.abs());
    for row in &result.rows {
        match &row.outcome {
            Ok(p) => {
                let mut fields = vec![
                    fmt_f64(row.g),
                    fmt_f64(p.l_m),
                    fmt_f64(p.l_l),
                    fmt_f64(p.n_adjusted),
                    fmt_f64(p.gap_share),
                ];
                for report in &reports {
                    let err = report
                        .per_point
                        .iter()
                        .find(|(x, ..)| matches_x(*x, row.g))
                        .map(|(_, _, _, rel)| fmt_f64(*rel))
                        .unwrap_or_default();
                    fields.push(err);
                }
                table.push_row(fields);
            }
            Err(reason) => {
                table
                    .trailing_comments
                    .push(format!("skipped g_m = {}: {}", fmt_f64(row.g), reason));
            }
        }
    }

    let mut summary = format!(
        "sweep: {} point(s) over [{} m, {} m], {} skipped\n",
        result.rows.len(),
        fmt_f64(spec.g_min),
        fmt_f64(spec.g_max),
        result.skipped(),
    );
    let mut failed = false;
    for report in &reports {
        summary.push_str(&format!(
            "  {}: max rel err {:.4e}, mean {:.4e}, tolerance {:.4e} -> {}\n",
            report.label,
            report.max_rel_err,
            report.mean_rel_err,
            report.threshold,
            if report.pass { "pass" } else { "FAIL" },
        ));
        failed |= !report.pass;
    }

    Ok(CommandOutcome {
        bundle: OutputBundle { tables: vec![table], summary },
        exit: if failed { EXIT_TOLERANCE } else { EXIT_OK },
    })
}

fn cmd_gain(
    loaded: &LoadedConfig,
    airgap: f64,
    load: &LoadImpedance,
    v_exc: f64,
    f_exc: f64,
) -> Result<CommandOutcome, CmdError> {
    if !(f_exc > 0.0) {
        return Err(CmdError::Input(format!("excitation frequency must be positive, got {f_exc}")));
    }
    if v_exc < 0.0 {
        return Err(CmdError::Input(format!("excitation voltage must be nonnegative, got {v_exc}")));
    }
    let geometry = loaded.geometry().map_err(CmdError::Input)?;
    let material = loaded.material().map_err(CmdError::Input)?;
    let winding = loaded.winding().map_err(CmdError::Input)?;
    let airgap_m = loaded.config.units.to_meters() * airgap;

    let study = GainStudy { v_exc, f_exc, load: *load, airgap: airgap_m };
    let (voltages, params) =
        crate::analysis::voltage_gain_from_geometry(&study, &geometry, &material, &winding)
            .map_err(|e| CmdError::Input(e.to_string()))?;

    let mut table =
        CsvTable::new("gain", source_line("gain", &loaded.hash), &["quantity", "value", "unit"]);
    for (name, value, unit) in [
        ("airgap", airgap_m, "m"),
        ("f_exc", f_exc, "Hz"),
        ("v_exc", v_exc, "V"),
        ("v_stator", voltages.stator, "V"),
        ("v_rotor", voltages.rotor, "V"),
        ("l_m", params.l_m, "H"),
        ("l_l", params.l_l, "H"),
        ("n_adjusted", params.n, "-"),
    ] {
        table.push_row(vec![name.to_string(), fmt_f64(value), unit.to_string()]);
    }

    // Winding-resistance sensitivity: the published designs omit such
    // values, so show how much they would matter.
    let mut sens = CsvTable::new(
        "gain_sensitivity",
        source_line("gain", &loaded.hash),
        &["r_winding_ohm", "v_rotor_V"],
    );
    let mut sens_lines = String::new();
    for r in [0.0, 0.5, 1.0, 2.0] {
        let w = WindingSpec { r_s: r, r_r: r, ..winding };
        let (v, _) =
            crate::analysis::voltage_gain_from_geometry(&study, &geometry, &material, &w)
                .map_err(|e| CmdError::Input(e.to_string()))?;
        sens.push_row(vec![fmt_f64(r), fmt_f64(v.rotor)]);
        sens_lines.push_str(&format!("  r_s = r_r = {r} ohm -> v_rotor = {:.4} V\n", v.rotor));
    }

    let summary = format!(
        "gain: airgap {} m, load = {}, {} V @ {} Hz\n  v_rotor = {:.4} V (n_adjusted = {:.4}, l_m = {:.4e} H, l_l = {:.4e} H)\nsensitivity:\n{}",
        fmt_f64(airgap_m),
        describe_load(load),
        v_exc,
        f_exc,
        voltages.rotor,
        params.n,
        params.l_m,
        params.l_l,
        sens_lines,
    );

    Ok(CommandOutcome {
        bundle: OutputBundle { tables: vec![table, sens], summary },
        exit: EXIT_OK,
    })
}
