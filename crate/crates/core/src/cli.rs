//! The `darksector` command-line tool.

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use tempfile::NamedTempFile;

use crate::circle_map::{decompose, Decomposition, MapError, MapParams, DEFAULT_EPS_B, DEFAULT_SEEDS};
use crate::dark_sector::{build_sector, select_dark_arc, verify_darkness, DarkArc};
use crate::exact_angle::{RationalTurn, DEFAULT_MAX_GROUP_ORDER};
use crate::render::{render_svg, Overlays, TraceOverlay};
use crate::report::{to_json, CensusDoc, DecompositionDoc, ParamsDoc, SectorDoc, SectorsDoc, TraceDoc};
use crate::scene::{load_scene, EnclosingCircle, Scene, SceneDocument, DEFAULT_CIRCLE_MARGIN};
use crate::tracer::{Tracer, DEFAULT_BOUNCE_CAP};
use crate::unfolding::{build_surface, census, cone_cycles, euler_check};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_INVALID_SCENE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_NO_SECTOR: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Check a scene for overlapping mirrors and other defects.
    Validate,
    /// Follow one ray from the source.
    Trace,
    /// Decompose the direction circle into constant-itinerary arcs.
    Map,
    /// Find and verify unlit sectors.
    Sectors,
    /// Count zeros, poles and genus of the unfolded surface.
    Unfold,
    /// Draw a scene, or a saved sectors report.
    Render,
}

#[derive(Debug, Clone, Parser)]
#[command(
    name = "darksector",
    version,
    about = "Illumination analysis for two-sided mirror scenes"
)]
pub struct RunConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// Scene file (JSON).
    #[arg(long)]
    pub scene: Option<PathBuf>,
    /// Initial sample directions for the circle map.
    #[arg(long, default_value_t = DEFAULT_SEEDS)]
    pub seeds: usize,
    /// Random points checked per dark sector.
    #[arg(long, default_value_t = 1000)]
    pub samples: usize,
    /// Boundary bracket width (radians).
    #[arg(long = "eps-b", default_value_t = DEFAULT_EPS_B)]
    pub eps_b: f64,
    /// Maximum number of reflections per ray.
    #[arg(long, default_value_t = DEFAULT_BOUNCE_CAP)]
    pub cap: usize,
    /// Seed for verification sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Radius of K relative to the farthest scene point from its centre.
    #[arg(long, default_value_t = DEFAULT_CIRCLE_MARGIN)]
    pub margin: f64,
    #[arg(long = "max-group-order", default_value_t = DEFAULT_MAX_GROUP_ORDER)]
    pub max_group_order: usize,
    /// Emission direction for `trace` (radians).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "theta_pi")]
    pub theta: Option<f64>,
    /// Emission direction for `trace` as a multiple of π, e.g. `3/2`.
    #[arg(long = "theta-pi", allow_hyphen_values = true)]
    pub theta_pi: Option<String>,
    /// Saved sectors report to draw (`render`).
    #[arg(long)]
    pub report: Option<PathBuf>,
    /// Report destination; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// SVG destination.
    #[arg(long)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Parse(String),
    Invalid(Vec<u8>),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Parse(_) => EXIT_PARSE,
            Failure::Invalid(_) => EXIT_INVALID_SCENE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match RunConfig::try_parse_from(args) {
        Ok(config) => run(&config),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_PARSE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(config: &RunConfig) -> i32 {
    match execute(config) {
        Ok(code) => code,
        Err(f) => {
            match &f {
                Failure::Usage(m) | Failure::Parse(m) | Failure::Internal(m) => eprintln!("error: {m}"),
                Failure::Invalid(report) => {
                    eprintln!("error: invalid scene");
                    let _ = std::io::stderr().write_all(report);
                }
            }
            f.code()
        }
    }
}

fn execute(config: &RunConfig) -> Result<i32, Failure> {
    if !(config.margin > 1.0 && config.margin.is_finite()) {
        return Err(Failure::Usage(format!("--margin must exceed 1, got {}", config.margin)));
    }
    match config.command {
        Command::Validate => {
            let scene = read_scene(config)?;
            let report = scene.validate();
            emit(config.out.as_deref(), &to_json(&report))?;
            Ok(if report.valid { EXIT_OK } else { EXIT_INVALID_SCENE })
        }
        Command::Trace => {
            let scene = valid_scene(config)?;
            let theta = emission_direction(config)?;
            if config.cap == 0 {
                return Err(Failure::Usage("--cap must be at least 1".into()));
            }
            let tr = Tracer::new(&scene).trace(theta, config.cap);
            emit(config.out.as_deref(), &to_json(&TraceDoc::new(&tr, config.cap)))?;
            if let Some(path) = &config.svg {
                let circle = circle_for(&scene, config);
                let overlays = Overlays {
                    circle: Some(circle),
                    traces: vec![TraceOverlay::from_trace(&tr, Some(0), &circle)],
                    sectors: vec![],
                };
                emit(Some(path), render_svg(&scene, &overlays).as_bytes())?;
            }
            Ok(EXIT_OK)
        }
        Command::Map => {
            let scene = valid_scene(config)?;
            let d = decomposition(&scene, config)?;
            emit(
                config.out.as_deref(),
                &to_json(&DecompositionDoc::new(&d, params_doc(config))),
            )?;
            Ok(EXIT_OK)
        }
        Command::Sectors => {
            let scene = valid_scene(config)?;
            let d = decomposition(&scene, config)?;
            let doc = sectors_doc(&scene, &d, config)?;
            emit(config.out.as_deref(), &to_json(&doc))?;
            if let Some(path) = &config.svg {
                emit(Some(path), sectors_svg(&scene, &d.circle, &doc, config.cap).as_bytes())?;
            }
            Ok(if doc.certified { EXIT_OK } else { EXIT_NO_SECTOR })
        }
        Command::Unfold => {
            let scene = valid_scene(config)?;
            let s = build_surface(&scene, config.max_group_order).map_err(|e| Failure::Internal(e.to_string()))?;
            let cycles = cone_cycles(&s);
            let c = census(&s, &cycles).map_err(|e| Failure::Internal(e.to_string()))?;
            let chi = euler_check(&s, &c).map_err(|e| Failure::Internal(e.to_string()))?;
            emit(config.out.as_deref(), &to_json(&CensusDoc::new(&s, &c, chi)))?;
            Ok(EXIT_OK)
        }
        Command::Render => {
            let svg = if let Some(path) = &config.report {
                let bytes = std::fs::read(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
                let doc: SectorsDoc =
                    serde_json::from_slice(&bytes).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
                let scene: Scene = doc.scene.clone().into();
                sectors_svg(&scene, &doc.decomposition.circle, &doc, doc.decomposition.params.cap)
            } else {
                let scene = valid_scene(config)?;
                let circle = circle_for(&scene, config);
                let mut overlays = Overlays {
                    circle: Some(circle),
                    ..Overlays::default()
                };
                if config.theta.is_some() || config.theta_pi.is_some() {
                    let tr = Tracer::new(&scene).trace(emission_direction(config)?, config.cap.max(1));
                    overlays.traces.push(TraceOverlay::from_trace(&tr, Some(0), &circle));
                }
                render_svg(&scene, &overlays)
            };
            emit(config.svg.as_deref().or(config.out.as_deref()), svg.as_bytes())?;
            Ok(EXIT_OK)
        }
    }
}

fn read_scene(config: &RunConfig) -> Result<Scene, Failure> {
    let path = config
        .scene
        .as_ref()
        .ok_or_else(|| Failure::Usage("--scene is required".into()))?;
    let bytes = std::fs::read(path).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))?;
    load_scene(&bytes).map_err(|e| Failure::Parse(format!("{}: {e}", path.display())))
}

fn valid_scene(config: &RunConfig) -> Result<Scene, Failure> {
    let scene = read_scene(config)?;
    let report = scene.validate();
    if report.valid {
        Ok(scene)
    } else {
        Err(Failure::Invalid(to_json(&report)))
    }
}

fn emission_direction(config: &RunConfig) -> Result<f64, Failure> {
    match (&config.theta, &config.theta_pi) {
        (Some(t), _) if t.is_finite() => Ok(*t),
        (Some(t), _) => Err(Failure::Usage(format!("--theta must be finite, got {t}"))),
        (None, Some(text)) => RationalTurn::parse(text)
            .map(|r| r.radians())
            .map_err(|e| Failure::Usage(format!("--theta-pi: {e}"))),
        (None, None) => Err(Failure::Usage("trace needs --theta or --theta-pi".into())),
    }
}

fn circle_for(scene: &Scene, config: &RunConfig) -> EnclosingCircle {
    scene.enclosing_circle_with_margin(config.margin)
}

fn params_doc(config: &RunConfig) -> ParamsDoc {
    ParamsDoc {
        seeds: config.seeds,
        eps_b: config.eps_b,
        cap: config.cap,
        samples: config.samples,
        seed: config.seed,
        margin: config.margin,
        max_group_order: config.max_group_order,
    }
}

fn decomposition(scene: &Scene, config: &RunConfig) -> Result<Decomposition, Failure> {
    let params = MapParams {
        seeds: config.seeds,
        eps_b: config.eps_b,
        cap: config.cap,
    };
    decompose(scene, &circle_for(scene, config), params).map_err(|e| match e {
        MapError::InvalidParams(_) => Failure::Usage(e.to_string()),
        _ => Failure::Internal(e.to_string()),
    })
}

fn sectors_doc(scene: &Scene, d: &Decomposition, config: &RunConfig) -> Result<SectorsDoc, Failure> {
    let unlit = d.unlit_arcs();
    let mut sectors = Vec::with_capacity(unlit.len());
    for (i, arc) in unlit.iter().enumerate() {
        let dark = DarkArc::from_unlit(*arc, i);
        let s = build_sector(&dark, &d.circle).map_err(|e| Failure::Internal(e.to_string()))?;
        let check = verify_darkness(&s, scene, d, config.samples, config.seed);
        sectors.push(SectorDoc::new(&dark, &s, check));
    }
    let selected = select_dark_arc(&unlit).map(|a| a.unlit_index);
    let certified = selected.is_some_and(|i| sectors[i].verification.passed());
    let note = match selected {
        None => "no sector certified: every escape direction is an exit direction at this resolution".to_string(),
        Some(_) if !certified => "no sector certified: verification of the selected sector failed".to_string(),
        Some(_) => "selected sector verified".to_string(),
    };
    Ok(SectorsDoc {
        scene: SceneDocument::try_from(scene).map_err(|e| Failure::Internal(e.to_string()))?,
        decomposition: DecompositionDoc::new(d, params_doc(config)),
        selected,
        sectors,
        certified,
        note,
    })
}

/// Scene, one trace per component midpoint, and every sector that passed verification.
fn sectors_svg(scene: &Scene, circle: &EnclosingCircle, doc: &SectorsDoc, cap: usize) -> String {
    let tracer = Tracer::new(scene);
    let traces = doc
        .decomposition
        .components
        .iter()
        .enumerate()
        .map(|(i, c)| TraceOverlay::from_trace(&tracer.trace(c.arc.arc().midpoint(), cap), Some(i), circle))
        .collect();
    let sectors = doc
        .sectors
        .iter()
        .filter(|s| s.verification.passed())
        .map(|s| s.sector(*circle))
        .collect();
    render_svg(
        scene,
        &Overlays {
            circle: Some(*circle),
            traces,
            sectors,
        },
    )
}

/// Writes atomically to a regular file at `path` (temp file + rename), or to stdout.
fn emit(path: Option<&Path>, bytes: &[u8]) -> Result<(), Failure> {
    let Some(path) = path else {
        let mut out = std::io::stdout().lock();
        return out
            .write_all(bytes)
            .and_then(|_| out.flush())
            .map_err(|e| Failure::Internal(format!("stdout: {e}")));
    };
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let fail = |e: std::io::Error| Failure::Internal(format!("{}: {e}", path.display()));
    // devices and pipes are written in place; renaming over them would replace them
    if std::fs::metadata(path).is_ok_and(|m| !m.is_file()) {
        return std::fs::write(path, bytes).map_err(fail);
    }
    let mut tmp = NamedTempFile::new_in(dir).map_err(fail)?;
    tmp.write_all(bytes).map_err(fail)?;
    tmp.persist(path).map_err(|e| fail(e.error))?;
    Ok(())
}
