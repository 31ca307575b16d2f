//! Command dispatch: validate the parsed config, call into the library, and
//! emit the result document plus table.

use std::path::Path;

use nalgebra::DVector;

use modecool::chain::{chain_synthesize_plan, quadrature_basis_change};
use modecool::resonance::{audit_point, uniform_amplitudes, ResonanceSearch};
use modecool::{
    chain_modes, cooled_state_report, cooling_rates, covariance_from_map, fidelity_pure,
    frequency_planner, enumerate_resonances, symplectic_spectrum, synthesize_plan,
    transform_target, DriveMode, Error as LibError, GaussianMap64, HardwareSpec64,
    ModulationPlan64, ThermalSpec64,
};

use crate::config::{ConfigError, JobConfig};
use crate::output::{write_result, write_table, Cell, ResultDoc};

/// Failure classification for exit codes.
pub enum RunError {
    /// Exit 1: malformed config, schema violation, or I/O trouble.
    Config(String),
    /// Exit 2: the job is well-formed but physically infeasible.
    Domain(LibError),
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Config(e.0)
    }
}

impl From<std::io::Error> for RunError {
    fn from(e: std::io::Error) -> Self {
        RunError::Config(format!("i/o error: {e}"))
    }
}

/// Domain infeasibilities exit 2; anything else is treated as a config-level
/// problem (exit 1).
fn classify(e: LibError) -> RunError {
    match e {
        LibError::SynthesisInfeasible { .. }
        | LibError::AmplitudeOverflow { .. }
        | LibError::DegenerateDispersion { .. }
        | LibError::NoUniqueSteadyState { .. }
        | LibError::CorrectionBreakdown { .. }
        | LibError::ComplexityRefusal { .. } => RunError::Domain(e),
        other => RunError::Config(other.to_string()),
    }
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => 1,
            RunError::Domain(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            RunError::Config(_) => "config",
            RunError::Domain(e) => match e {
                LibError::SynthesisInfeasible { .. } => "synthesis-infeasible",
                LibError::AmplitudeOverflow { .. } => "amplitude-overflow",
                LibError::DegenerateDispersion { .. } => "degenerate-dispersion",
                LibError::NoUniqueSteadyState { .. } => "no-unique-steady-state",
                LibError::CorrectionBreakdown { .. } => "correction-breakdown",
                LibError::ComplexityRefusal { .. } => "complexity-refusal",
                _ => "domain",
            },
        }
    }

    pub fn message(&self) -> String {
        match self {
            RunError::Config(m) => m.clone(),
            RunError::Domain(e) => e.to_string(),
        }
    }
}

fn hardware(config: &JobConfig, enforce_layout: bool) -> Result<HardwareSpec64, RunError> {
    let hw_config = config
        .hardware
        .as_ref()
        .ok_or_else(|| RunError::Config("hardware: section required for this command".into()))?;
    let hw = hw_config.build()?;
    if enforce_layout {
        let report = hw.validate(hw_config.dispersive_threshold());
        if let Some((a, b)) = report.degenerate_pairs.first() {
            return Err(RunError::Config(format!(
                "hardware: degenerate frequencies {a} and {b}"
            )));
        }
        if let Some(&(j, l)) = report.dispersive_violations.first() {
            return Err(RunError::Config(format!(
                "hardware.g[{}][{}]: dispersive ratio {} below threshold {}",
                j + 1,
                l + 1,
                report.min_dispersive_ratio,
                hw_config.dispersive_threshold()
            )));
        }
    }
    Ok(hw)
}

fn target(config: &JobConfig) -> Result<GaussianMap64, RunError> {
    config
        .target
        .as_ref()
        .ok_or_else(|| RunError::Config("target: section required for this command".into()))?
        .build("target")
        .map_err(Into::into)
}

fn plan_for(config: &JobConfig, hw: &HardwareSpec64) -> Result<(GaussianMap64, ModulationPlan64), RunError> {
    let map = target(config)?;
    let eta_pivot = config.numerics.eta_pivot(map.n_modes())?;
    let mode = config.numerics.drive_mode()?;
    let plan = synthesize_plan(&map, hw, &eta_pivot, mode).map_err(classify)?;
    Ok((map, plan))
}

fn plan_rows(plan: &ModulationPlan64) -> Vec<Vec<Cell>> {
    let n = plan.n_modes;
    let mut rows = Vec::with_capacity(n * 2 * n);
    for j in 0..n {
        for m in 0..2 * n {
            rows.push(vec![
                Cell::Int((j + 1) as i64),
                Cell::Int((m + 1) as i64),
                Cell::Real(plan.omega[(j, m)]),
                Cell::Real(plan.eta[(j, m)]),
                Cell::Real(plan.phi[(j, m)]),
                Cell::Real(plan.gbar[j]),
            ]);
        }
    }
    rows
}

pub fn execute(
    command: &str,
    config: &JobConfig,
    out_dir: &Path,
    force_order: bool,
) -> Result<(), RunError> {
    if let Some(declared) = &config.command {
        if declared != command {
            return Err(RunError::Config(format!(
                "command: config declares {declared:?} but {command:?} was invoked"
            )));
        }
    }
    match command {
        "build-state" => build_state(config, out_dir),
        "synthesize" => synthesize(config, out_dir),
        "resonances" => resonances(config, out_dir, force_order),
        "audit" => audit(config, out_dir),
        "chain" => chain(config, out_dir),
        "plan" => plan(config, out_dir),
        "cool" => cool(config, out_dir),
        "fidelity" => fidelity(config, out_dir),
        other => Err(RunError::Config(format!("unknown command {other:?}"))),
    }
}

fn build_state(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let map = target(config)?;
    let n = map.n_modes();
    let validation = map.validate(map.default_tolerance());
    let v = covariance_from_map(&map, &ThermalSpec64::vacuum(n)).map_err(classify)?;
    let spectrum = symplectic_spectrum(&v);

    let mut doc = ResultDoc::new();
    doc.int("n_modes", n as i64);
    doc.boolean("map_valid", validation.pass);
    doc.real("map_symmetry_violation", validation.symmetry_violation);
    doc.real(
        "map_normalization_violation",
        validation.normalization_violation,
    );
    doc.real_list("symplectic_spectrum", spectrum.iter().copied());
    doc.real("physicality_eigenvalue", v.physicality_eigenvalue());
    write_result(out, "build-state", config, &doc)?;

    let mut rows = Vec::new();
    for r in 0..2 * n {
        for c in 0..2 * n {
            rows.push(vec![
                Cell::Int((r + 1) as i64),
                Cell::Int((c + 1) as i64),
                Cell::Real(v.matrix()[(r, c)]),
            ]);
        }
    }
    write_table(out, "build-state", config, &["row", "col", "V"], &rows)?;
    Ok(())
}

fn synthesize(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let hw = hardware(config, true)?;
    let (_, plan) = plan_for(config, &hw)?;
    let coop_threshold = config.numerics.cooperativity_threshold.unwrap_or(10.0);
    let rates = cooling_rates(&plan, &hw, coop_threshold).map_err(classify)?;

    let mut doc = ResultDoc::new();
    doc.int("n_modes", plan.n_modes as i64);
    doc.text(
        "drive_mode",
        match plan.mode {
            DriveMode::Cooling => "cooling",
            DriveMode::Lasing => "lasing",
        },
    );
    doc.real("eta_max", plan.eta_max());
    doc.real_list("gbar", plan.gbar.iter().copied());
    doc.real_list("cooling_rates", rates.rates.iter().copied());
    doc.real_list("cooperativities", rates.cooperativities.iter().copied());
    doc.int_list(
        "low_cooperativity_qubits",
        rates.flagged.iter().map(|&j| (j + 1) as i64),
    );
    doc.int_list(
        "saturated_tones",
        plan.saturation_warnings
            .iter()
            .map(|&(j, m)| (j * 2 * plan.n_modes + m) as i64),
    );
    write_result(out, "synthesize", config, &doc)?;
    write_table(
        out,
        "synthesize",
        config,
        &["j", "m", "Omega", "eta", "phi", "gbar"],
        &plan_rows(&plan),
    )?;
    Ok(())
}

fn resonances(config: &JobConfig, out: &Path, force_order: bool) -> Result<(), RunError> {
    let hw = hardware(config, false)?;
    let n = hw.n_modes();
    let eta = match (&config.target, &config.numerics.uniform_eta) {
        (Some(_), None) => plan_for(config, &hw)?.1.eta,
        (None, Some(e)) => uniform_amplitudes(n, *e),
        (None, None) => {
            return Err(RunError::Config(
                "resonances: provide a target or numerics.uniform_eta for the Bessel weights"
                    .into(),
            ))
        }
        (Some(_), Some(_)) => {
            return Err(RunError::Config(
                "resonances: target and numerics.uniform_eta are mutually exclusive".into(),
            ))
        }
    };
    let mut search = ResonanceSearch::new(
        config.numerics.max_order.unwrap_or(3),
        config.numerics.near_threshold.unwrap_or(0.0),
    )
    .with_force(force_order);
    if let Some(margin) = config.numerics.dispersive_margin {
        search.dispersive_margin = margin;
    }
    let report = enumerate_resonances(&hw, &eta, &search).map_err(classify)?;

    let mut doc = ResultDoc::new();
    doc.int("n_modes", n as i64);
    doc.int("max_order", report.max_order as i64);
    doc.real("exact_tolerance", report.exact_tolerance);
    doc.int("entry_count", report.entries.len() as i64);
    for order in 1..=report.max_order {
        doc.int(
            &format!("exact_count_order_{order}"),
            report.count_exact_at_order(order) as i64,
        );
    }
    doc.int(
        "dangerous_count",
        report.entries.iter().filter(|e| e.dangerous).count() as i64,
    );
    write_result(out, "resonances", config, &doc)?;

    let rows: Vec<Vec<Cell>> = report
        .entries
        .iter()
        .map(|e| {
            let joined = e
                .indices
                .n
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(";");
            vec![
                Cell::Int((e.qubit + 1) as i64),
                Cell::Int((e.mode + 1) as i64),
                Cell::Text(e.channel.label().to_string()),
                Cell::Text(joined),
                Cell::Int(e.indices.order() as i64),
                Cell::Real(e.nu),
                Cell::Real(e.weight),
            ]
        })
        .collect();
    write_table(
        out,
        "resonances",
        config,
        &["j", "l", "channel", "n_vector", "order", "nu", "weight"],
        &rows,
    )?;
    Ok(())
}

fn audit(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let hw = hardware(config, true)?;
    let target_cfg = config
        .target
        .as_ref()
        .ok_or_else(|| RunError::Config("target: section required for audit".into()))?;
    let base = target_cfg.ghz_spec("target")?;
    let eta1 = config
        .numerics
        .eta1
        .ok_or_else(|| RunError::Config("numerics.eta1: required for audit".into()))?;

    // sweep points: explicit squeezing grid, or the target's own (r1, r2)
    let mut points: Vec<(f64, f64, f64)> = Vec::new(); // (fraction, r1, r2)
    match &config.numerics.squeezing_grid {
        Some(grid) => {
            for &s in grid {
                if !(0.0..1.0).contains(&s) {
                    return Err(RunError::Config(format!(
                        "numerics.squeezing_grid: fraction {s} outside [0, 1)"
                    )));
                }
                let r = -0.5 * (1.0 - s).ln();
                points.push((s, r, r));
            }
        }
        None => {
            let fraction = 1.0 - (-2.0 * base.r1).exp();
            points.push((fraction, base.r1, base.r2));
        }
    }

    let mut rows = Vec::new();
    let mut last = None;
    for &(fraction, r1, r2) in &points {
        let spec = modecool::GhzSpec64::new(base.n_modes, r1, r2)
            .map_err(|e| RunError::Config(format!("target: {e}")))?;
        let point = audit_point(&spec, &hw, eta1).map_err(classify)?;
        rows.push(vec![
            Cell::Real(fraction),
            Cell::Real(r1),
            Cell::Real(point.eta_max),
            Cell::Real(point.fidelity),
            Cell::Real(point.gtilde_deviation),
        ]);
        last = Some(point);
    }

    let mut doc = ResultDoc::new();
    doc.int("n_modes", base.n_modes as i64);
    doc.real("eta1", eta1);
    doc.int("points", rows.len() as i64);
    if let Some(point) = last {
        doc.real("fidelity_last", point.fidelity);
        doc.real("gtilde_over_gbar_maxdev_last", point.gtilde_deviation);
        doc.real("covariance_residual_last", point.covariance_residual);
    }
    write_result(out, "audit", config, &doc)?;
    write_table(
        out,
        "audit",
        config,
        &[
            "squeezing_fraction",
            "r",
            "eta_max",
            "fidelity",
            "gtilde_over_gbar_maxdev",
        ],
        &rows,
    )?;
    Ok(())
}

fn chain(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let chain_cfg = config
        .chain
        .as_ref()
        .ok_or_else(|| RunError::Config("chain: section required for this command".into()))?;
    let spec = chain_cfg.build()?;
    let basis = chain_modes(&spec).map_err(classify)?;

    let mut doc = ResultDoc::new();
    doc.int("n_modes", spec.n_modes as i64);
    doc.text(
        "topology",
        match spec.topology {
            modecool::Topology::Open => "open",
            modecool::Topology::Closed => "closed",
        },
    );
    doc.int_list("mode_labels", basis.labels.iter().copied());
    doc.real_list("normal_mode_frequencies", basis.frequencies.iter().copied());

    if config.target.is_some() {
        let map = target(config)?;
        let transformed = transform_target(&map, &basis).map_err(classify)?;
        let validation = transformed.validate(1e-11);
        doc.boolean("transformed_valid", validation.pass);
        doc.real(
            "transformed_symmetry_violation",
            validation.symmetry_violation,
        );
        doc.real(
            "transformed_normalization_violation",
            validation.normalization_violation,
        );
        // lab-frame covariance recovered through the basis change
        let v_chain =
            covariance_from_map(&transformed, &ThermalSpec64::vacuum(spec.n_modes))
                .map_err(classify)?;
        let v_lab =
            covariance_from_map(&map, &ThermalSpec64::vacuum(spec.n_modes)).map_err(classify)?;
        let p = quadrature_basis_change(&basis);
        let pulled = &p * v_chain.matrix() * p.transpose();
        let dev = (pulled - v_lab.matrix()).abs().max();
        doc.real("lab_frame_covariance_residual", dev);

        let hw = config
            .hardware
            .as_ref()
            .ok_or_else(|| RunError::Config("hardware: epsilon needed for chain synthesis".into()))?;
        let epsilon = DVector::from_vec(hw.epsilon.clone());
        let eta_pivot = config.numerics.eta_pivot(spec.n_modes)?;
        let plan =
            chain_synthesize_plan(&spec, &map, &epsilon, &eta_pivot).map_err(classify)?;
        doc.real("eta_max", plan.eta_max());
        doc.real_list("gbar", plan.gbar.iter().copied());
        write_result(out, "chain", config, &doc)?;
        write_table(
            out,
            "chain",
            config,
            &["j", "m", "Omega", "eta", "phi", "gbar"],
            &plan_rows(&plan),
        )?;
    } else {
        write_result(out, "chain", config, &doc)?;
        let rows: Vec<Vec<Cell>> = basis
            .labels
            .iter()
            .zip(basis.frequencies.iter())
            .map(|(&k, &f)| vec![Cell::Int(k), Cell::Real(f)])
            .collect();
        write_table(out, "chain", config, &["k", "Delta_k"], &rows)?;
    }
    Ok(())
}

fn plan(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let planner_cfg = config
        .planner
        .as_ref()
        .ok_or_else(|| RunError::Config("planner: section required for this command".into()))?;
    let (topology, params) = planner_cfg.build()?;
    let report = frequency_planner(topology, &params).map_err(classify)?;

    let mut doc = ResultDoc::new();
    doc.text("topology", &planner_cfg.topology);
    match report.max_feasible {
        Some(n) => doc.int("max_feasible_n", n as i64),
        None => doc.int("max_feasible_n", 0),
    }
    write_result(out, "plan", config, &doc)?;

    let rows: Vec<Vec<Cell>> = report
        .rows
        .iter()
        .map(|r| {
            vec![
                Cell::Int(r.n_modes as i64),
                Cell::Real(r.j_required.unwrap_or(0.0)),
                Cell::Real(r.exact_gap.unwrap_or(0.0)),
                Cell::Real(r.omega_max),
                Cell::Real(r.eps_n),
                Cell::Real(r.margin_over_g),
                Cell::Int(i64::from(r.feasible)),
            ]
        })
        .collect();
    write_table(
        out,
        "plan",
        config,
        &[
            "N",
            "J_required",
            "exact_gap",
            "omega_max",
            "eps_N",
            "margin_over_g",
            "feasible",
        ],
        &rows,
    )?;
    Ok(())
}

fn cool(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let hw = hardware(config, true)?;
    let (map, plan) = plan_for(config, &hw)?;
    let kappa_override = config
        .numerics
        .kappa_override
        .as_ref()
        .map(|v| DVector::from_vec(v.clone()));
    let report =
        cooled_state_report(&plan, &map, &hw, kappa_override.as_ref()).map_err(classify)?;
    let coop_threshold = config.numerics.cooperativity_threshold.unwrap_or(10.0);
    let rates = cooling_rates(&plan, &hw, coop_threshold).map_err(classify)?;

    let mut doc = ResultDoc::new();
    doc.int("n_modes", plan.n_modes as i64);
    doc.real("fidelity", report.fidelity);
    doc.real("lyapunov_residual", report.residual);
    doc.real_list("occupations", report.occupations.iter().copied());
    doc.real_list("cooling_rates", report.rates.iter().copied());
    doc.real_list("cooperativities", rates.cooperativities.iter().copied());
    write_result(out, "cool", config, &doc)?;

    let rows: Vec<Vec<Cell>> = (0..plan.n_modes)
        .map(|j| {
            vec![
                Cell::Int((j + 1) as i64),
                Cell::Real(report.occupations[j]),
                Cell::Real(report.rates[j]),
                Cell::Real(rates.cooperativities[j]),
            ]
        })
        .collect();
    write_table(
        out,
        "cool",
        config,
        &["j", "occupation", "cooling_rate", "cooperativity"],
        &rows,
    )?;
    Ok(())
}

fn fidelity(config: &JobConfig, out: &Path) -> Result<(), RunError> {
    let first = target(config)?;
    let second = config
        .target2
        .as_ref()
        .ok_or_else(|| RunError::Config("target2: section required for fidelity".into()))?
        .build("target2")?;
    let n = first.n_modes();
    let v1 = covariance_from_map(&first, &ThermalSpec64::vacuum(n)).map_err(classify)?;
    let v2 =
        covariance_from_map(&second, &ThermalSpec64::vacuum(second.n_modes())).map_err(classify)?;
    let f = fidelity_pure(&v1, &v2).map_err(classify)?;

    let mut doc = ResultDoc::new();
    doc.int("n_modes", n as i64);
    doc.real("fidelity", f);
    write_result(out, "fidelity", config, &doc)?;
    write_table(
        out,
        "fidelity",
        config,
        &["fidelity"],
        &[vec![Cell::Real(f)]],
    )?;
    Ok(())
}
