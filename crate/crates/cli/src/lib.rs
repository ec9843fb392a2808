//! Command-line front end: configuration resolution and the five commands.
//!
//! Settings are layered. The reference design (with `--reference`) is the
//! base, a config file overrides it and explicit flags override both.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use cyl_unwrap::angles::{forming_parameters, DesignInputs, FormingParameters};
use cyl_unwrap::export::{export_csv_points, export_dxf, export_json, export_svg};
use cyl_unwrap::forming::{form_model, FormedModel};
use cyl_unwrap::mesh::{build_mesh, export_mesh, Mesh, MeshFormat, MeshOptions};
use cyl_unwrap::pattern::{build_flat_pattern_with, FlatPattern, PatternOptions};
use cyl_unwrap::verify::{verify, ToleranceSet, VerificationReport};
use cyl_unwrap::{curves::DEFAULT_SAMPLES, Error};
use serde::{Deserialize, Serialize};

/// Environment variable naming the default output directory.
pub const OUT_ENV: &str = "CYL_UNWRAP_OUT";

#[derive(Debug, Parser)]
#[command(
    name = "cyl-unwrap",
    version,
    about = "Flat patterns for intersecting cylindrical surfaces"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub overrides: Overrides,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Print every forming parameter as a table followed by JSON.
    Angles,
    /// Write the flat pattern in the selected formats.
    Pattern,
    /// Roll and bend the pattern and write the 3D mesh.
    Form,
    /// Form the model and check it against the orthogonal planes.
    Verify,
    /// Run a family of designs varying θ or ω.
    Sweep,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternFormat {
    Svg,
    Dxf,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeshKind {
    Obj,
    Stl,
}

impl From<MeshKind> for MeshFormat {
    fn from(k: MeshKind) -> Self {
        match k {
            MeshKind::Obj => MeshFormat::Obj,
            MeshKind::Stl => MeshFormat::Stl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepVar {
    Theta,
    Omega,
}

/// Flags shared by every subcommand. All lengths are mm, all angles degrees.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Start from the worked reference design.
    #[arg(long, global = true)]
    pub reference: bool,
    /// Config file of `key = value` lines.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub r: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    #[arg(long = "arc-angle", global = true)]
    pub arc_angle: Option<f64>,
    #[arg(long = "flat-top", global = true)]
    pub flat_top: Option<f64>,
    /// Overall axial width.
    #[arg(long = "X", global = true)]
    pub width: Option<f64>,
    /// Axial distance from the outer edge to the apex.
    #[arg(long = "I", global = true)]
    pub apex_distance: Option<f64>,
    /// Output directory [default: $CYL_UNWRAP_OUT, else the current directory].
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Pattern formats, comma separated.
    #[arg(long, global = true, value_delimiter = ',')]
    pub formats: Option<Vec<PatternFormat>>,
    #[arg(long = "mesh-format", global = true)]
    pub mesh_format: Option<MeshKind>,
    #[arg(long = "tol-seam", global = true)]
    pub tol_seam: Option<f64>,
    #[arg(long = "tol-plane", global = true)]
    pub tol_plane: Option<f64>,
    /// Normal-deviation tolerance, degrees.
    #[arg(long = "tol-normal", global = true)]
    pub tol_normal: Option<f64>,
    /// Points per sampled pattern edge.
    #[arg(long, global = true)]
    pub samples: Option<usize>,
    #[arg(long, global = true)]
    pub vary: Option<SweepVar>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub from: Option<f64>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub to: Option<f64>,
    #[arg(long, global = true)]
    pub step: Option<f64>,
}

/// Contents of a config file. Keys mirror the long flag names with `-`
/// replaced by `_`.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub r: Option<f64>,
    pub theta: Option<f64>,
    pub omega: Option<f64>,
    pub gamma: Option<f64>,
    pub arc_angle: Option<f64>,
    pub flat_top: Option<f64>,
    #[serde(rename = "X")]
    pub width: Option<f64>,
    #[serde(rename = "I")]
    pub apex_distance: Option<f64>,
    pub out: Option<PathBuf>,
    /// Comma-separated list, as for `--formats`.
    pub formats: Option<String>,
    pub mesh_format: Option<MeshKind>,
    pub tol_seam: Option<f64>,
    pub tol_plane: Option<f64>,
    pub tol_normal: Option<f64>,
    pub samples: Option<usize>,
    pub vary: Option<SweepVar>,
    pub from: Option<f64>,
    pub to: Option<f64>,
    pub step: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Outputs {
    pub pattern_formats: BTreeSet<PatternFormat>,
    pub mesh_format: MeshKind,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub vary: SweepVar,
    pub from: f64,
    pub to: f64,
    pub step: f64,
}

impl SweepSpec {
    /// Values `from, from + step, …` up to `to`, which is included when it
    /// lies on the grid.
    pub fn values(&self) -> Vec<f64> {
        let n = ((self.to - self.from) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|i| self.from + self.step * i as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub inputs: DesignInputs,
    pub outputs: Outputs,
    pub sweep: Option<SweepSpec>,
    pub tolerances: ToleranceSet,
    pub sampling_n: usize,
}

/// A failure mapped to its process exit status.
#[derive(Debug)]
pub enum CliError {
    /// Exit 2.
    Input(String),
    /// Exit 3.
    Verification(String),
    /// Exit 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Verification(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Verification(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io { .. } => CliError::Io(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn read_config_file(path: &Path) -> CliResult<ConfigFile> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    toml::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn parse_formats(list: &str) -> CliResult<Vec<PatternFormat>> {
    list.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| PatternFormat::from_str(s, true).map_err(|_| CliError::Input(format!("unknown pattern format `{s}`"))))
        .collect()
}

impl RunConfig {
    /// Layers the reference design, the config file, the flags and the
    /// environment into a validated configuration.
    pub fn resolve(o: &Overrides, env_out: Option<PathBuf>) -> CliResult<Self> {
        let file = match &o.config {
            Some(p) => read_config_file(p)?,
            None => ConfigFile::default(),
        };
        let base = o.reference.then(DesignInputs::reference);
        let pick = |name: &'static str, flag: Option<f64>, cfg: Option<f64>, reference: Option<f64>| {
            flag.or(cfg).or(reference).ok_or_else(|| {
                CliError::Input(format!(
                    "missing `{name}` (give --{name}, a config file or --reference)"
                ))
            })
        };
        let b = |f: fn(&DesignInputs) -> f64| base.as_ref().map(f);
        let inputs = DesignInputs {
            r: pick("r", o.r, file.r, b(|d| d.r))?,
            theta: pick("theta", o.theta, file.theta, b(|d| d.theta))?,
            omega: pick("omega", o.omega, file.omega, b(|d| d.omega))?,
            gamma: pick("gamma", o.gamma, file.gamma, b(|d| d.gamma))?,
            arc_angle: pick("arc-angle", o.arc_angle, file.arc_angle, b(|d| d.arc_angle))?,
            flat_top_height: pick("flat-top", o.flat_top, file.flat_top, b(|d| d.flat_top_height))?,
            width: pick("X", o.width, file.width, b(|d| d.width))?,
            apex_distance: pick("I", o.apex_distance, file.apex_distance, b(|d| d.apex_distance))?,
        };
        inputs.validate()?;

        let formats = match (&o.formats, &file.formats) {
            (Some(f), _) => f.clone(),
            (None, Some(s)) => parse_formats(s)?,
            (None, None) => vec![
                PatternFormat::Svg,
                PatternFormat::Dxf,
                PatternFormat::Json,
                PatternFormat::Csv,
            ],
        };
        if formats.is_empty() {
            return Err(CliError::Input("`formats` is empty".into()));
        }
        let outputs = Outputs {
            pattern_formats: formats.into_iter().collect(),
            mesh_format: o.mesh_format.or(file.mesh_format).unwrap_or(MeshKind::Obj),
            out_dir: o
                .out
                .clone()
                .or(file.out)
                .or(env_out)
                .unwrap_or_else(|| PathBuf::from(".")),
        };

        let defaults = ToleranceSet::for_inputs(&inputs);
        let tolerances = ToleranceSet {
            seam: o.tol_seam.or(file.tol_seam).unwrap_or(defaults.seam),
            plane: o.tol_plane.or(file.tol_plane).unwrap_or(defaults.plane),
            normal_deg: o.tol_normal.or(file.tol_normal).unwrap_or(defaults.normal_deg),
        };
        for (name, v) in [
            ("tol-seam", tolerances.seam),
            ("tol-plane", tolerances.plane),
            ("tol-normal", tolerances.normal_deg),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(CliError::Input(format!("`{name}` must be positive, got {v}")));
            }
        }

        let sampling_n = o.samples.or(file.samples).unwrap_or(DEFAULT_SAMPLES);
        if sampling_n < 8 {
            return Err(CliError::Input(format!(
                "`samples` must be at least 8, got {sampling_n}"
            )));
        }

        let vary = o.vary.or(file.vary);
        let range = (o.from.or(file.from), o.to.or(file.to), o.step.or(file.step));
        let sweep = match (vary, range) {
            (None, (None, None, None)) => None,
            (Some(vary), (Some(from), Some(to), Some(step))) => {
                if !(step.is_finite() && step > 0.0) {
                    return Err(CliError::Input(format!("`step` must be positive, got {step}")));
                }
                if from.is_nan() || to.is_nan() || from > to {
                    return Err(CliError::Input(format!("`from` ({from}) exceeds `to` ({to})")));
                }
                Some(SweepSpec { vary, from, to, step })
            }
            _ => {
                return Err(CliError::Input(
                    "a sweep needs all of `vary`, `from`, `to` and `step`".into(),
                ))
            }
        };

        Ok(RunConfig {
            inputs,
            outputs,
            sweep,
            tolerances,
            sampling_n,
        })
    }

    fn pattern_options(&self, allow_overlap: bool) -> PatternOptions {
        PatternOptions {
            samples: self.sampling_n,
            allow_overlap,
            ..Default::default()
        }
    }

    fn out_dir(&self) -> CliResult<&Path> {
        let dir = &self.outputs.out_dir;
        fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
        Ok(dir)
    }
}

/// Published worked-example values, shown beside the computed ones when
/// the inputs are the reference design.
const REFERENCE_VALUES: &[(&str, f64)] = &[
    ("lambda", 144.0723),
    ("delta", 35.9277),
    ("sigma", 34.2656),
    ("alpha_int", -69.2656),
    ("beta_int", -54.0723),
    ("rho_end", 35.9277),
    ("phi_end", 20.7344),
    ("nu_bot", -70.7090),
    ("psi_bot", -40.3815),
    ("mirror_slope", 0.3032),
    ("mu", 16.8685),
    ("tau", 167.4627),
    ("kappa", 12.5373),
    ("trim_angle", 0.3801),
    ("A", 2657.80),
    ("c", 1193.55),
    ("d", -456.13),
    ("B", 1649.68),
    ("x_end", 2217.16),
    ("C", 2993.24),
];

/// `name = value` rows for every forming parameter, six decimals.
pub fn angles_table(fp: &FormingParameters, show_reference: bool) -> String {
    let rows: [(&str, Option<f64>); 24] = [
        ("lambda", Some(fp.lambda)),
        ("delta", Some(fp.delta)),
        ("sigma", Some(fp.sigma)),
        ("alpha_int", Some(fp.alpha_int)),
        ("beta_int", Some(fp.beta_int)),
        ("rho_end", Some(fp.rho_end)),
        ("phi_end", Some(fp.phi_end)),
        ("nu_bot", Some(fp.nu_bot)),
        ("psi_bot", Some(fp.psi_bot)),
        ("chi", Some(fp.chi)),
        ("wing_elevation", Some(fp.wing_elevation)),
        ("mirror_slope", Some(fp.mirror_slope)),
        ("mu", Some(fp.mu)),
        ("tau", Some(fp.tau)),
        ("kappa", Some(fp.kappa)),
        ("bend_sense", Some(fp.bend_sense)),
        ("trim_angle", Some(fp.trim_angle)),
        ("A", Some(fp.offset_a)),
        ("c", Some(fp.wing_width)),
        ("d", Some(fp.end_zero_offset)),
        ("B", Some(fp.offset_b)),
        ("x_end", Some(fp.x_end)),
        ("y_end", Some(fp.y_end)),
        ("C", fp.offset_c),
    ];
    let mut s = String::new();
    for (name, value) in &rows {
        let reference = REFERENCE_VALUES.iter().find(|(n, _)| n == name).map(|(_, v)| *v);
        let _ = match (value, reference) {
            (Some(v), Some(rv)) if show_reference => writeln!(s, "{name} = {v:.6}    (reference {rv})"),
            (Some(v), _) => writeln!(s, "{name} = {v:.6}"),
            (None, _) => writeln!(
                s,
                "{name} = undefined (level wing: the bottom cut is a straight ruling)"
            ),
        };
    }
    s
}

pub fn cmd_angles(cfg: &RunConfig) -> CliResult<String> {
    let fp = forming_parameters(&cfg.inputs)?;
    let json = serde_json::to_string_pretty(&fp).map_err(|e| CliError::Input(e.to_string()))?;
    Ok(format!(
        "{}\n{json}\n",
        angles_table(&fp, cfg.inputs == DesignInputs::reference())
    ))
}

fn write_pattern(
    p: &FlatPattern,
    dir: &Path,
    stem: &str,
    formats: &BTreeSet<PatternFormat>,
) -> CliResult<Vec<PathBuf>> {
    let mut written = Vec::new();
    for f in formats {
        let path = dir.join(format!("{stem}.{}", format!("{f:?}").to_lowercase()));
        match f {
            PatternFormat::Svg => export_svg(p, &path)?,
            PatternFormat::Dxf => export_dxf(p, &path)?,
            PatternFormat::Json => export_json(p, &path)?,
            PatternFormat::Csv => export_csv_points(p, &path)?,
        }
        written.push(path);
    }
    Ok(written)
}

fn listing(paths: &[PathBuf]) -> String {
    paths.iter().map(|p| format!("wrote {}\n", p.display())).collect()
}

pub fn cmd_pattern(cfg: &RunConfig) -> CliResult<String> {
    let p = build_flat_pattern_with(&cfg.inputs, &cfg.pattern_options(false))?;
    let written = write_pattern(&p, cfg.out_dir()?, "pattern", &cfg.outputs.pattern_formats)?;
    Ok(listing(&written))
}

/// Pattern and formed model. A self-overlapping blank is accepted with a
/// warning so that the 3D result can still be inspected.
fn formed(inputs: &DesignInputs, cfg: &RunConfig) -> CliResult<(FormedModel, Option<String>)> {
    let p = build_flat_pattern_with(inputs, &cfg.pattern_options(true))?;
    let warning = p.overlap.clone();
    Ok((form_model(&p)?, warning))
}

fn warn(w: &Option<String>) {
    if let Some(w) = w {
        eprintln!("warning: the flat blank overlaps itself ({w}); it cannot be cut from one sheet");
    }
}

fn write_mesh(mesh: &Mesh, dir: &Path, stem: &str, kind: MeshKind) -> CliResult<PathBuf> {
    let format = MeshFormat::from(kind);
    let path = dir.join(format!("{stem}.{}", format.extension()));
    export_mesh(mesh, &path, format)?;
    Ok(path)
}

pub fn cmd_form(cfg: &RunConfig) -> CliResult<String> {
    let (m, warning) = formed(&cfg.inputs, cfg)?;
    warn(&warning);
    let mesh = build_mesh(&m, &MeshOptions::default())?;
    let path = write_mesh(&mesh, cfg.out_dir()?, "model", cfg.outputs.mesh_format)?;
    Ok(listing(&[path]))
}

pub fn report_text(rep: &VerificationReport) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        "seam_gap_max = {:.3e} mm (tolerance {:.3e})",
        rep.seam_gap_max, rep.tolerances.seam
    );
    let _ = writeln!(s, "seam_gap_rms = {:.3e} mm", rep.seam_gap_rms);
    for p in &rep.planarity {
        let _ = writeln!(
            s,
            "{} vs {:?} plane: max {:.3e} mm, rms {:.3e} mm, normal {:.3e} deg{}",
            p.edge,
            p.plane,
            p.max_distance,
            p.rms_distance,
            p.normal_deviation,
            if p.control { " (control)" } else { "" }
        );
    }
    let _ = writeln!(s, "wing_axis_deviation = {:.3e} deg", rep.wing_axis_deviation);
    let _ = writeln!(s, "axis_skew = {:.3e} mm", rep.axis_skew);
    let _ = writeln!(s, "result: {}", if rep.pass { "PASS" } else { "FAIL" });
    s
}

/// Verification report text. `Err(Verification)` carries the same text when
/// the model is out of tolerance.
pub fn cmd_verify(cfg: &RunConfig) -> CliResult<String> {
    let (m, warning) = formed(&cfg.inputs, cfg)?;
    warn(&warning);
    let rep = verify(&m, &cfg.tolerances);
    let path = cfg.out_dir()?.join("verify.json");
    let json = serde_json::to_string_pretty(&rep).map_err(|e| CliError::Input(e.to_string()))?;
    fs::write(&path, format!("{json}\n")).map_err(|e| io_err(&path, e))?;
    let text = format!("{}wrote {}\n", report_text(&rep), path.display());
    if rep.pass {
        Ok(text)
    } else {
        Err(CliError::Verification(text))
    }
}

/// One row of `summary.csv`. Geometry columns are empty for an instance
/// whose inputs are not buildable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub theta: f64,
    pub omega: f64,
    pub lambda: Option<f64>,
    pub delta: Option<f64>,
    pub sigma: Option<f64>,
    pub mu: Option<f64>,
    pub kappa: Option<f64>,
    pub trim: Option<f64>,
    #[serde(rename = "A")]
    pub a: Option<f64>,
    #[serde(rename = "B")]
    pub b: Option<f64>,
    #[serde(rename = "C")]
    pub c: Option<f64>,
    pub seam_gap_max: Option<f64>,
    pub planarity_max: Option<f64>,
    pub pass: bool,
}

fn fmt_value(v: f64) -> String {
    let s = format!("{v}");
    if s == "-0" {
        "0".into()
    } else {
        s
    }
}

/// Stem of the per-instance files, e.g. `theta30_omega-10`.
pub fn instance_stem(theta: f64, omega: f64) -> String {
    format!("theta{}_omega{}", fmt_value(theta), fmt_value(omega))
}

struct Instance {
    row: SummaryRow,
    mesh: Option<Mesh>,
}

fn run_instance(cfg: &RunConfig, inputs: &DesignInputs, dir: &Path, log: &mut String) -> CliResult<Instance> {
    let stem = instance_stem(inputs.theta, inputs.omega);
    let mut row = SummaryRow {
        theta: inputs.theta,
        omega: inputs.omega,
        lambda: None,
        delta: None,
        sigma: None,
        mu: None,
        kappa: None,
        trim: None,
        a: None,
        b: None,
        c: None,
        seam_gap_max: None,
        planarity_max: None,
        pass: false,
    };
    let built = inputs
        .validate()
        .and_then(|()| build_flat_pattern_with(inputs, &cfg.pattern_options(true)))
        .and_then(|p| form_model(&p).map(|m| (p, m)));
    let (pattern, model) = match built {
        Ok(pm) => pm,
        Err(e @ Error::Io { .. }) => return Err(e.into()),
        Err(e) => {
            let _ = writeln!(log, "{stem}: skipped ({e})");
            return Ok(Instance { row, mesh: None });
        }
    };
    if let Some(w) = &pattern.overlap {
        let _ = writeln!(log, "{stem}: warning: the flat blank overlaps itself ({w})");
    }
    let fp = &pattern.forming_parameters;
    let rep = verify(&model, &cfg.tolerances);
    row.lambda = Some(fp.lambda);
    row.delta = Some(fp.delta);
    row.sigma = Some(fp.sigma);
    row.mu = Some(fp.mu);
    row.kappa = Some(fp.kappa);
    row.trim = Some(fp.trim_angle);
    row.a = Some(fp.offset_a);
    row.b = Some(fp.offset_b);
    row.c = fp.offset_c;
    row.seam_gap_max = Some(rep.seam_gap_max);
    row.planarity_max = Some(rep.planarity_max());
    row.pass = rep.pass;

    let written = write_pattern(&pattern, dir, &format!("pattern_{stem}"), &cfg.outputs.pattern_formats)?;
    let mesh = build_mesh(&model, &MeshOptions::default())?;
    let mesh_path = write_mesh(&mesh, dir, &format!("model_{stem}"), cfg.outputs.mesh_format)?;
    log.push_str(&listing(&written));
    log.push_str(&listing(&[mesh_path]));
    let _ = writeln!(log, "{stem}: {}", if rep.pass { "PASS" } else { "FAIL" });
    Ok(Instance { row, mesh: Some(mesh) })
}

/// Runs every sweep instance, then writes the overlay mesh and
/// `summary.csv`. Instances run concurrently; their outputs are collected in
/// sweep order so the files do not depend on scheduling.
pub fn cmd_sweep(cfg: &RunConfig) -> CliResult<String> {
    let spec = cfg
        .sweep
        .ok_or_else(|| CliError::Input("sweep needs --vary, --from, --to and --step".into()))?;
    let dir = cfg.out_dir()?;
    let designs: Vec<DesignInputs> = spec
        .values()
        .into_iter()
        .map(|v| match spec.vary {
            SweepVar::Theta => DesignInputs { theta: v, ..cfg.inputs },
            SweepVar::Omega => DesignInputs { omega: v, ..cfg.inputs },
        })
        .collect();

    let results: Vec<CliResult<(Instance, String)>> = std::thread::scope(|s| {
        let handles: Vec<_> = designs
            .iter()
            .map(|d| {
                s.spawn(move || {
                    let mut log = String::new();
                    run_instance(cfg, d, dir, &mut log).map(|i| (i, log))
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("sweep worker panicked"))
            .collect()
    });

    let mut out = String::new();
    let mut overlay = Mesh::default();
    let mut rows = Vec::new();
    for r in results {
        let (inst, log) = r?;
        out.push_str(&log);
        if let Some(mesh) = inst.mesh {
            overlay.append(mesh, &instance_stem(inst.row.theta, inst.row.omega));
        }
        rows.push(inst.row);
    }
    if !overlay.groups.is_empty() {
        let path = write_mesh(&overlay, dir, "overlay", cfg.outputs.mesh_format)?;
        out.push_str(&listing(&[path]));
    }

    let summary = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&summary).map_err(|e| CliError::Io(format!("{}: {e}", summary.display())))?;
    for row in &rows {
        w.serialize(row)
            .map_err(|e| CliError::Io(format!("{}: {e}", summary.display())))?;
    }
    w.flush().map_err(|e| io_err(&summary, e))?;
    out.push_str(&listing(&[summary]));

    let passed = rows.iter().filter(|r| r.pass).count();
    let _ = writeln!(out, "{passed} of {} instances pass", rows.len());
    if passed == rows.len() {
        Ok(out)
    } else {
        Err(CliError::Verification(out))
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> CliResult<String> {
    match command {
        Command::Angles => cmd_angles(cfg),
        Command::Pattern => cmd_pattern(cfg),
        Command::Form => cmd_form(cfg),
        Command::Verify => cmd_verify(cfg),
        Command::Sweep => cmd_sweep(cfg),
    }
}
