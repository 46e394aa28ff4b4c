//! Command implementations behind the `deltaspec` binary: configuration
//! parsing, dispatch onto the solver library, and the JSON result
//! envelope. Kept as a library so integration tests can drive the
//! commands directly.

use std::time::Instant;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use deltaspec::extensions::{is_nonnegative_3d, is_self_adjoint, krein_pair, SELF_ADJOINT_TOL};
use deltaspec::matrixkernel::op_norm;
use deltaspec::scattering::scattering_matrix;
use deltaspec::spectral::{
    bound_states, essential_spectrum, gerschgorin_check, kappa_minus, ScanOptions,
};
use deltaspec::weyl::weyl_matrix;
use deltaspec::{BoundaryPair, Dimension, Error as CoreError, PointConfiguration};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_STRICT_WARNING: i32 = 3;
pub const EXIT_SPECTRUM_HIT: i32 = 4;

/// Failure with the process exit code it maps to.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_CONFIG,
            message: message.into(),
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.message)
    }
}

impl std::error::Error for CliError {}

fn core_err(e: CoreError) -> CliError {
    let code = match e {
        CoreError::SpectrumHit(_) => EXIT_SPECTRUM_HIT,
        CoreError::DuplicateCenters(..)
        | CoreError::InvalidCoordinate { .. }
        | CoreError::WrongPointLength { .. }
        | CoreError::NoPoints
        | CoreError::CouplingLength { .. }
        | CoreError::SizeMismatch(_)
        | CoreError::IndexOutOfRange(..)
        | CoreError::NotSelfAdjoint { .. }
        | CoreError::KappaUnsupported2d
        | CoreError::NonnegativeAxis(_)
        | CoreError::NonpositiveEnergy(_)
        | CoreError::ZeroArgument
        | CoreError::SingularPoint(_)
        | CoreError::DiagonalPoint => EXIT_CONFIG,
        _ => 1,
    };
    CliError {
        code,
        message: e.to_string(),
    }
}

/// One complex number as a [re, im] pair.
pub type ComplexPair = [f64; 2];
/// Complex matrix as rows of [re, im] pairs.
pub type ComplexRows = Vec<Vec<ComplexPair>>;

/// The coupling (boundary-condition) section of a job file.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum Coupling {
    Alpha {
        alpha: Vec<f64>,
    },
    Cd {
        #[serde(alias = "C")]
        c: ComplexRows,
        #[serde(alias = "D")]
        d: ComplexRows,
    },
    Krein,
    Friedrichs,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct ScanConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
}

fn default_multiplicity() -> usize {
    1
}

/// A job file: geometry plus coupling plus optional scan controls.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JobConfig {
    pub dimension: u8,
    pub points: Vec<Vec<f64>>,
    #[serde(default = "default_multiplicity")]
    pub n: usize,
    pub coupling: Coupling,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scan: Option<ScanConfig>,
}

impl JobConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text)
            .map_err(|e| CliError::config(format!("invalid config: {e}")))
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::config(format!("cannot read config {}: {e}", path.display()))
        })?;
        Self::parse(&text)
    }

    pub fn dimension(&self) -> Result<Dimension, CliError> {
        match self.dimension {
            2 => Ok(Dimension::Two),
            3 => Ok(Dimension::Three),
            other => Err(CliError::config(format!(
                "dimension: must be 2 or 3, got {other}"
            ))),
        }
    }

    pub fn configuration(&self) -> Result<PointConfiguration, CliError> {
        let dim = self.dimension()?;
        let cfg = PointConfiguration::new(dim, self.points.clone(), self.n).map_err(|e| {
            CliError::config(format!("points: {e}"))
        })?;
        cfg.validate()
            .map_err(|e| CliError::config(format!("points: {e}")))?;
        Ok(cfg)
    }

    pub fn boundary_pair(&self, cfg: &PointConfiguration) -> Result<BoundaryPair, CliError> {
        match &self.coupling {
            Coupling::Alpha { alpha } => {
                if alpha.len() != cfg.num_points() {
                    return Err(CliError::config(format!(
                        "coupling.alpha: has {} entries, configuration has {} centers",
                        alpha.len(),
                        cfg.num_points()
                    )));
                }
                BoundaryPair::diagonal_alpha(alpha, cfg.multiplicity())
                    .map_err(|e| CliError::config(format!("coupling.alpha: {e}")))
            }
            Coupling::Cd { c, d } => {
                let size = cfg.boundary_dim();
                let cm = parse_matrix(c, size, "coupling.c")?;
                let dm = parse_matrix(d, size, "coupling.d")?;
                BoundaryPair::general(cm, dm)
                    .map_err(|e| CliError::config(format!("coupling: {e}")))
            }
            Coupling::Krein => krein_pair(cfg).map_err(core_err),
            Coupling::Friedrichs => Ok(BoundaryPair::friedrichs(cfg.boundary_dim())),
        }
    }

    pub fn scan_options(&self, s_max: Option<f64>, grid: Option<usize>) -> ScanOptions {
        let mut opts = ScanOptions::default();
        if let Some(sc) = &self.scan {
            if sc.s_max.is_some() {
                opts.s_max = sc.s_max;
            }
            if let Some(g) = sc.grid {
                opts.grid = g;
            }
            if let Some(t) = sc.tol {
                opts.tol = t;
            }
        }
        if s_max.is_some() {
            opts.s_max = s_max;
        }
        if let Some(g) = grid {
            opts.grid = g;
        }
        opts
    }
}

fn parse_matrix(
    rows: &ComplexRows,
    size: usize,
    path: &str,
) -> Result<DMatrix<Complex64>, CliError> {
    if rows.len() != size {
        return Err(CliError::config(format!(
            "{path}: has {} rows, expected {size}",
            rows.len()
        )));
    }
    let mut m = DMatrix::zeros(size, size);
    for (i, row) in rows.iter().enumerate() {
        if row.len() != size {
            return Err(CliError::config(format!(
                "{path}[{i}]: has {} entries, expected {size}",
                row.len()
            )));
        }
        for (j, &[re, im]) in row.iter().enumerate() {
            m[(i, j)] = Complex64::new(re, im);
        }
    }
    Ok(m)
}

fn pair_json(v: Complex64) -> Value {
    json!([v.re, v.im])
}

fn matrix_json(m: &DMatrix<Complex64>) -> Value {
    let rows: Vec<Value> = (0..m.nrows())
        .map(|i| Value::Array((0..m.ncols()).map(|j| pair_json(m[(i, j)])).collect()))
        .collect();
    Value::Array(rows)
}

/// The fixed output wrapper; `results` is the command-specific payload
/// and is deterministic given config and tolerances.
#[derive(Debug, Serialize)]
pub struct ResultEnvelope {
    pub command: String,
    pub config: JobConfig,
    pub results: Value,
    pub warnings: Vec<String>,
    pub version: String,
    pub wall_time_ms: f64,
}

fn envelope(
    command: &str,
    config: &JobConfig,
    results: Value,
    warnings: Vec<String>,
    started: Instant,
) -> ResultEnvelope {
    ResultEnvelope {
        command: command.to_string(),
        config: config.clone(),
        results,
        warnings,
        version: env!("CARGO_PKG_VERSION").to_string(),
        wall_time_ms: started.elapsed().as_secs_f64() * 1e3,
    }
}

/// Self-adjointness and nonnegativity report.
pub fn cmd_check(config: &JobConfig) -> Result<ResultEnvelope, CliError> {
    let started = Instant::now();
    let cfg = config.configuration()?;
    let pair = config.boundary_pair(&cfg)?;
    let report = is_self_adjoint(&pair, SELF_ADJOINT_TOL).map_err(core_err)?;
    let mut warnings = Vec::new();
    let nonnegative: Value = if !report.self_adjoint {
        Value::Null
    } else {
        match cfg.dim() {
            Dimension::Three => {
                json!(is_nonnegative_3d(&pair, &cfg).map_err(core_err)?)
            }
            Dimension::Two => {
                // H₀ is the unique nonnegative extension at m = 1; for
                // m > 1 deciding nonnegativity needs the reduced pair.
                let d_zero = pair.d().iter().all(|v| v.norm_sqr() == 0.0);
                if d_zero {
                    json!(true)
                } else if cfg.num_points() == 1 {
                    json!(false)
                } else {
                    warnings.push(
                        "2D nonnegativity for m > 1 requires the reduced hyperplane pair; not decided here"
                            .into(),
                    );
                    Value::Null
                }
            }
        }
    };
    let results = json!({
        "self_adjoint": report.self_adjoint,
        "defect_cdstar": report.defect_cdstar,
        "regularity_gap": report.regularity_gap,
        "nonnegative": nonnegative,
        "notes": report.notes,
    });
    Ok(envelope("check", config, results, warnings, started))
}

/// Bound states, essential spectrum, and (3D) the κ₋ count.
pub fn cmd_spectrum(
    config: &JobConfig,
    s_max: Option<f64>,
    grid: Option<usize>,
) -> Result<ResultEnvelope, CliError> {
    let started = Instant::now();
    let cfg = config.configuration()?;
    let pair = config.boundary_pair(&cfg)?;
    let opts = config.scan_options(s_max, grid);
    let scan = bound_states(&pair, &cfg, &opts).map_err(core_err)?;
    let ess = essential_spectrum(&cfg);
    let kappa: Value = if cfg.dim() == Dimension::Three {
        json!(kappa_minus(&pair, &cfg).map_err(core_err)?)
    } else {
        Value::Null
    };
    let states: Vec<Value> = scan
        .states
        .iter()
        .map(|s| {
            json!({
                "z": s.z,
                "s": s.s,
                "multiplicity": s.multiplicity,
                "residual": s.refinement_residual,
                "coefficients": matrix_json(&s.coefficients),
            })
        })
        .collect();
    let results = json!({
        "essential_spectrum": [ess.lower, Value::Null],
        "max_negative": ess.max_negative_eigenvalues,
        "kappa_minus": kappa,
        "bound_states": states,
        "total_multiplicity": scan.total_multiplicity(),
        "method": if scan.best_effort { "sigma_min_scan" } else { "branch_tracking" },
        "best_effort": scan.best_effort,
    });
    Ok(envelope("spectrum", config, results, scan.warnings, started))
}

/// Per-energy scattering matrices; resonance energies are reported in
/// place rather than failing the run.
pub fn cmd_scattering(
    config: &JobConfig,
    energies: &[f64],
) -> Result<ResultEnvelope, CliError> {
    let started = Instant::now();
    if energies.is_empty() {
        return Err(CliError::config("energies: at least one energy required"));
    }
    let cfg = config.configuration()?;
    let pair = config.boundary_pair(&cfg)?;
    let mut warnings = Vec::new();
    let mut rows = Vec::new();
    for &x in energies {
        if x <= 0.0 {
            return Err(CliError::config(format!(
                "energies: must be strictly positive, got {x}"
            )));
        }
        match scattering_matrix(&pair, &cfg, x) {
            Ok(res) => rows.push(json!({
                "x": x,
                "rank": res.rank,
                "unitarity_defect": res.unitarity_defect,
                "s_matrix": matrix_json(&res.s_matrix),
                "basis": matrix_json(&res.basis),
            })),
            Err(CoreError::Resonance(_)) => {
                warnings.push(format!("resonance energy at x = {x}"));
                rows.push(json!({ "x": x, "resonance": true }));
            }
            Err(e) => return Err(core_err(e)),
        }
    }
    let results = json!({ "energies": rows });
    Ok(envelope("scattering", config, results, warnings, started))
}

/// Krein resolvent kernel values over a list of point pairs.
pub fn cmd_resolvent(
    config: &JobConfig,
    z: Complex64,
    pairs: &[PointPair],
) -> Result<ResultEnvelope, CliError> {
    let started = Instant::now();
    if pairs.is_empty() {
        return Err(CliError::config(
            "points: at least one evaluation pair required",
        ));
    }
    let cfg = config.configuration()?;
    let pair = config.boundary_pair(&cfg)?;
    let mut rows = Vec::new();
    for (x, xp) in pairs {
        if x.len() != cfg.dim().coords() || xp.len() != cfg.dim().coords() {
            return Err(CliError::config(format!(
                "points: evaluation points need {} coordinates",
                cfg.dim().coords()
            )));
        }
        let kernel =
            deltaspec::resolvent::resolvent_kernel(&pair, &cfg, z, x, xp).map_err(core_err)?;
        rows.push(json!({
            "x": x,
            "x_prime": xp,
            "kernel": matrix_json(&kernel),
        }));
    }
    let results = json!({ "z": [z.re, z.im], "values": rows });
    Ok(envelope("resolvent", config, results, Vec::new(), started))
}

/// Gerschgorin sufficient-condition report; indices are 1-based on the
/// command line and in the payload.
pub fn cmd_gerschgorin(
    config: &JobConfig,
    k_one_based: &[usize],
) -> Result<ResultEnvelope, CliError> {
    let started = Instant::now();
    let cfg = config.configuration()?;
    let alpha = match &config.coupling {
        Coupling::Alpha { alpha } => alpha.clone(),
        _ => {
            return Err(CliError::config(
                "coupling: the Gerschgorin check applies to the diagonal (alpha) family",
            ))
        }
    };
    if k_one_based.contains(&0) {
        return Err(CliError::config("k: indices are 1-based"));
    }
    let k0: Vec<usize> = k_one_based.iter().map(|&k| k - 1).collect();
    let report = gerschgorin_check(&alpha, &cfg, &k0).map_err(core_err)?;
    let results = json!({
        "k_set": report.k_set.iter().map(|&k| k + 1).collect::<Vec<_>>(),
        "m_prime": report.m_prime,
        "lower_bound_holds": report.lower_bound_holds,
        "exact": report.exact,
    });
    Ok(envelope("gerschgorin", config, results, Vec::new(), started))
}

/// What `cmd_weyl` should produce.
pub enum WeylRequest {
    At(Complex64),
    Table { s_min: f64, s_max: f64, steps: usize },
}

/// M(z) at one point, or a table of M(−s²) over an s-grid.
pub fn cmd_weyl(config: &JobConfig, request: &WeylRequest) -> Result<ResultEnvelope, CliError> {
    let started = Instant::now();
    let cfg = config.configuration()?;
    let results = match request {
        WeylRequest::At(z) => {
            let ev = weyl_matrix(&cfg, *z).map_err(core_err)?;
            json!({
                "z": [z.re, z.im],
                "block": matrix_json(&ev.block),
                "multiplicity": cfg.multiplicity(),
                "norm": op_norm(&ev.full),
            })
        }
        WeylRequest::Table { s_min, s_max, steps } => {
            if !(*s_min > 0.0 && s_max > s_min) || *steps < 2 {
                return Err(CliError::config(
                    "table: needs 0 < s_min < s_max and at least 2 steps",
                ));
            }
            let mut s_col = Vec::with_capacity(*steps);
            let mut entries = Vec::with_capacity(*steps);
            for i in 0..*steps {
                let s = s_min + (s_max - s_min) * i as f64 / (*steps as f64 - 1.0);
                let ev = weyl_matrix(&cfg, Complex64::new(-s * s, 0.0)).map_err(core_err)?;
                s_col.push(json!(s));
                entries.push(matrix_json(&ev.block));
            }
            json!({ "s": s_col, "entries": entries })
        }
    };
    Ok(envelope("weyl", config, results, Vec::new(), started))
}

/// CSV for the weyl table payload: one row per s, columns are the
/// re/im parts of each block entry in row-major order.
pub fn weyl_table_csv(results: &Value) -> Option<String> {
    let s = results.get("s")?.as_array()?;
    let entries = results.get("entries")?.as_array()?;
    let first = entries.first()?.as_array()?;
    let m = first.len();
    let mut out = String::from("s");
    for j in 0..m {
        for k in 0..m {
            out.push_str(&format!(",m{j}{k}_re,m{j}{k}_im"));
        }
    }
    out.push('\n');
    for (si, row) in s.iter().zip(entries) {
        out.push_str(&format!("{}", si.as_f64()?));
        for r in row.as_array()? {
            for e in r.as_array()? {
                let p = e.as_array()?;
                out.push_str(&format!(",{},{}", p[0].as_f64()?, p[1].as_f64()?));
            }
        }
        out.push('\n');
    }
    Some(out)
}

/// CSV for the resolvent payload: one row per evaluation pair.
pub fn resolvent_csv(results: &Value) -> Option<String> {
    let values = results.get("values")?.as_array()?;
    let mut out = String::from("x,x_prime,entry_row,entry_col,re,im\n");
    for v in values {
        let x = v.get("x")?.as_array()?;
        let xp = v.get("x_prime")?.as_array()?;
        let fmt_pt = |p: &[Value]| {
            p.iter()
                .map(|c| c.as_f64().unwrap_or(f64::NAN).to_string())
                .collect::<Vec<_>>()
                .join(";")
        };
        let kernel = v.get("kernel")?.as_array()?;
        for (i, row) in kernel.iter().enumerate() {
            for (j, e) in row.as_array()?.iter().enumerate() {
                let p = e.as_array()?;
                out.push_str(&format!(
                    "{},{},{},{},{},{}\n",
                    fmt_pt(x),
                    fmt_pt(xp),
                    i,
                    j,
                    p[0].as_f64()?,
                    p[1].as_f64()?
                ));
            }
        }
    }
    Some(out)
}

/// Parses "re,im" into a complex number.
pub fn parse_complex(text: &str) -> Result<Complex64, CliError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 2 {
        return Err(CliError::config(format!(
            "expected complex number as re,im — got '{text}'"
        )));
    }
    let re: f64 = parts[0]
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("bad real part '{}'", parts[0])))?;
    let im: f64 = parts[1]
        .trim()
        .parse()
        .map_err(|_| CliError::config(format!("bad imaginary part '{}'", parts[1])))?;
    Ok(Complex64::new(re, im))
}

/// Parses a comma-separated list of f64.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .map(|p| {
            p.trim()
                .parse()
                .map_err(|_| CliError::config(format!("bad number '{p}'")))
        })
        .collect()
}

/// An evaluation pair (x, x') for the resolvent kernel.
pub type PointPair = (Vec<f64>, Vec<f64>);

/// Parses the resolvent points file: a JSON array of [x, x'] pairs.
pub fn parse_points_file(path: &std::path::Path) -> Result<Vec<PointPair>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::config(format!("cannot read points {}: {e}", path.display())))?;
    let raw: Vec<[Vec<f64>; 2]> = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("invalid points file: {e}")))?;
    Ok(raw.into_iter().map(|[a, b]| (a, b)).collect())
}

/// Re-serializes the envelope; used by the determinism tests.
pub fn payload_string(env: &ResultEnvelope) -> String {
    serde_json::to_string(&env.results).expect("payload serializes")
}
