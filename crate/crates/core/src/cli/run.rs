use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::atom::AtomParams;
use crate::cli::config::{
    ExperimentConfig, Figure3Config, FringeOutput, FringesConfig, PatternConfig, PlanConfig,
    RamseyConfig, Route, Split1dConfig, Split2dConfig,
};
use crate::error::{Error, Result};
use crate::fringes::{
    contrast, delta_grid, extract_spacing, ramsey_scan, synthesize, write_pattern_csv,
    write_pattern_pgm, write_pattern_sidecar, write_ramsey_csv, FringePattern, FringeSource,
};
use crate::interferometer::{
    ladder_trace, ramsey_prefix, run_plan_1d_adiabatic, run_plan_2d, run_plan_raman_1d,
    write_stage_csv, Geometry, PlanResult,
};
use crate::patterngen::{gear_silhouette, roundtrip, TargetPattern};
use crate::pgm::{decode_pgm, quantize, write_pgm16};
use crate::quantum::{Axis, EngineOptions};

/// Files written by one run, in write order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Manifest {
    pub plan: String,
    /// First 12 hex digits of the SHA-256 of the resolved config.
    pub hash: String,
    pub artifacts: Vec<PathBuf>,
    pub provenance: PathBuf,
    pub warnings: Vec<String>,
}

/// Everything a plan produces before anything touches the disk.
#[derive(Default)]
struct Outputs {
    files: Vec<(String, Vec<u8>)>,
    summary: serde_json::Map<String, Value>,
    warnings: Vec<String>,
}

impl Outputs {
    fn file(&mut self, suffix: &str, bytes: Vec<u8>) {
        self.files.push((suffix.to_string(), bytes));
    }

    fn put(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(
            key.to_string(),
            serde_json::to_value(value).unwrap_or(Value::Null),
        );
    }
}

struct Ctx<'a> {
    atom: &'a AtomParams,
    engine: &'a EngineOptions,
    geometry: &'a Geometry,
    base_dir: &'a Path,
}

fn csv_rows<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<Vec<u8>> {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Error::Encoding(e.to_string()))?;
    }
    w.into_inner().map_err(|e| Error::Encoding(e.to_string()))
}

pub fn config_hash(cfg: &ExperimentConfig) -> Result<String> {
    let bytes = serde_json::to_vec(cfg).map_err(|e| Error::Encoding(e.to_string()))?;
    let digest = Sha256::digest(&bytes);
    Ok(digest.iter().take(6).map(|b| format!("{b:02x}")).collect())
}

/// Reads, validates and runs the config at `config_path`, writing artifacts to `out_dir`.
pub fn run(config_path: &Path, out_dir: &Path, strict: bool) -> Result<Manifest> {
    let text = std::fs::read_to_string(config_path).map_err(|e| Error::io(config_path, e))?;
    let cfg = ExperimentConfig::from_json(&text)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    run_config(&cfg, base, out_dir, strict)
}

/// Runs an already parsed config; relative input paths resolve against `base_dir`.
pub fn run_config(
    cfg: &ExperimentConfig,
    base_dir: &Path,
    out_dir: &Path,
    strict: bool,
) -> Result<Manifest> {
    let started = Instant::now();
    cfg.validate()?;
    let engine = cfg.engine.options()?;
    let hash = config_hash(cfg)?;
    let ctx = Ctx {
        atom: &cfg.atom,
        engine: &engine,
        geometry: &cfg.geometry,
        base_dir,
    };
    let out = match &cfg.plan {
        PlanConfig::Figure3(c) => figure3(c, &ctx)?,
        PlanConfig::Split1d(c) => split1d(c, &ctx)?,
        PlanConfig::Ramsey(c) => ramsey(c, &ctx)?,
        PlanConfig::Split2d(c) => split2d(c, &ctx)?,
        PlanConfig::Fringes(c) => fringes(c, &ctx)?,
        PlanConfig::Pattern(c) => pattern(c, &ctx)?,
    };
    if strict && !out.warnings.is_empty() {
        return Err(Error::StrictWarnings(out.warnings));
    }
    std::fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;
    let kind = cfg.plan.kind();
    let mut artifacts = Vec::new();
    for (suffix, bytes) in &out.files {
        let path = out_dir.join(format!("{kind}-{hash}{suffix}"));
        std::fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
        artifacts.push(path);
    }
    let provenance = out_dir.join(format!("{kind}-{hash}.provenance.json"));
    let names: Vec<String> = artifacts
        .iter()
        .filter_map(|p| p.file_name().map(|n| n.to_string_lossy().into_owned()))
        .collect();
    let doc = json!({
        "tool": env!("CARGO_PKG_NAME"),
        "version": env!("CARGO_PKG_VERSION"),
        "plan": kind,
        "config_sha256_prefix": hash,
        "config": cfg,
        "wall_time_s": started.elapsed().as_secs_f64(),
        "artifacts": names,
        "warnings": out.warnings,
        "summary": Value::Object(out.summary),
    });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::Encoding(e.to_string()))?;
    std::fs::write(&provenance, text + "\n").map_err(|e| Error::io(&provenance, e))?;
    Ok(Manifest {
        plan: kind.to_string(),
        hash,
        artifacts,
        provenance,
        warnings: out.warnings,
    })
}

fn figure3(c: &Figure3Config, ctx: &Ctx) -> Result<Outputs> {
    let mut out = Outputs::default();
    let pulses = c.pulses.time_scaled(c.time_scale);
    let adiabaticity = pulses.adiabaticity();
    if adiabaticity > crate::pulses::ADIABATICITY_LIMIT {
        out.warnings.push(format!(
            "adiabaticity parameter {adiabaticity:.4} exceeds 0.1"
        ));
    }
    let trace = ladder_trace(
        c.n_pairs,
        c.samples_per_pair,
        &pulses,
        &c.raman,
        ctx.atom,
        ctx.engine,
    )?;

    #[derive(Serialize)]
    struct TraceRow {
        time_ns: f64,
        mean_nz: f64,
        population: f64,
        excited: f64,
        boundary: u8,
    }
    out.file(
        "-trace.csv",
        csv_rows(trace.samples.iter().map(|s| TraceRow {
            time_ns: s.time * 1e9,
            mean_nz: s.mean_nz,
            population: s.population,
            excited: s.excited,
            boundary: u8::from(s.boundary),
        }))?,
    );

    #[derive(Serialize)]
    struct PairRow {
        pair: usize,
        level: &'static str,
        n_z: i32,
        population: f64,
        fidelity: f64,
    }
    let fid = trace.pair_fidelities();
    out.file(
        "-pairs.csv",
        csv_rows(trace.boundaries.iter().map(|b| PairRow {
            pair: b.pair,
            level: b.state.level.label(),
            n_z: b.state.nz,
            population: b.population,
            fidelity: if b.pair == 0 { 1.0 } else { fid[b.pair - 1] },
        }))?,
    );
    let momenta = trace.boundary_momenta();
    out.put("final_mean_nz", momenta.last().copied());
    out.put("deflected_population", trace.deflected);
    out.put("undeflected_population", trace.undeflected);
    out.put("steps", trace.steps_taken());
    out.put("monotone", trace.monotone(-1));
    out.put("adiabaticity", adiabaticity);
    out.put("min_pair_fidelity", fid.iter().copied().fold(1.0, f64::min));
    out.put("largest_basis", trace.basis);
    Ok(out)
}

fn plan_outputs(out: &mut Outputs, result: &PlanResult) -> Result<()> {
    let mut buf = Vec::new();
    write_stage_csv(&result.log, &mut buf)?;
    out.file("-stages.csv", buf);
    out.warnings.extend(result.warnings.iter().cloned());
    out.put("arms", &result.arms);
    out.put("untracked", result.untracked);
    out.put("closure_mismatch_m", result.closure_mismatch);
    out.put("end_time_s", result.end_time);
    out.put("largest_basis", result.report.largest_basis);
    Ok(())
}

fn spacing_summary(
    pattern: &FringePattern,
    axis: Axis,
    dn: Option<i32>,
    atom: &AtomParams,
) -> Result<Value> {
    extract_spacing(pattern, axis).map(|s| {
        let mut v = json!({
            "period_nm": s.period * 1e9,
            "bin_nm": s.bin_width * 1e9,
            "peak_to_background": s.peak_to_background,
        });
        if let Some(dn) = dn.filter(|d| *d != 0) {
            v["delta_n"] = json!(dn);
            v["exact_nm"] = json!(atom.lattice_wavelength() / dn.abs() as f64 * 1e9);
            v["nominal_nm"] = json!(atom.nominal_wavelength_m / dn.abs() as f64 * 1e9);
        }
        v
    })
}

fn momentum_span(sources: &[FringeSource], axis: Axis) -> i32 {
    let n = |s: &FringeSource| if axis == Axis::Z { s.nz } else { s.nx };
    let lo = sources.iter().map(n).min().unwrap_or(0);
    let hi = sources.iter().map(n).max().unwrap_or(0);
    hi - lo
}

fn pattern_outputs(
    out: &mut Outputs,
    sources: &[FringeSource],
    spec: &FringeOutput,
    atom: &AtomParams,
    require_fringe: bool,
) -> Result<()> {
    let pattern = synthesize(sources, &spec.grid, atom, spec.envelope)?;
    if pattern.is_plane() {
        let mut img = Vec::new();
        write_pattern_pgm(&pattern, &mut img)?;
        out.file("-pattern.pgm", img);
        let mut side = Vec::new();
        write_pattern_sidecar(&pattern, &mut side)?;
        out.file("-pattern.txt", side);
    } else {
        let mut buf = Vec::new();
        write_pattern_csv(&pattern, &mut buf)?;
        out.file("-pattern.csv", buf);
    }
    let mut results: Vec<_> = pattern
        .axes
        .iter()
        .map(|&axis| {
            let span = Some(momentum_span(sources, axis));
            (axis, spacing_summary(&pattern, axis, span, atom))
        })
        .collect();
    if require_fringe && results.iter().all(|(_, r)| r.is_err()) {
        return Err(results.remove(0).1.unwrap_err());
    }
    let mut spacing = serde_json::Map::new();
    for (axis, result) in results {
        let value = result.unwrap_or_else(|e| {
            out.warnings
                .push(format!("no fringe spacing along {axis}: {e}"));
            json!({ "error": e.to_string() })
        });
        spacing.insert(axis.to_string(), value);
    }
    out.put("spacing", spacing);
    out.put("contrast", contrast(&pattern));
    Ok(())
}

fn split1d(c: &Split1dConfig, ctx: &Ctx) -> Result<Outputs> {
    let mut out = Outputs::default();
    let result = match c.route {
        Route::Adiabatic => {
            run_plan_1d_adiabatic(&c.adiabatic, ctx.atom, ctx.engine, ctx.geometry)?
        }
        Route::Raman => run_plan_raman_1d(&c.raman, ctx.atom, ctx.engine, ctx.geometry)?,
    };
    plan_outputs(&mut out, &result)?;
    let sources = FringeSource::from_tracks(&result.arms);
    pattern_outputs(&mut out, &sources, &c.fringes, ctx.atom, false)?;
    Ok(out)
}

fn split2d(c: &Split2dConfig, ctx: &Ctx) -> Result<Outputs> {
    let mut out = Outputs::default();
    let result = run_plan_2d(&c.interferometer, ctx.atom, ctx.engine, ctx.geometry)?;
    plan_outputs(&mut out, &result)?;
    let sources = FringeSource::from_tracks(&result.arms);
    pattern_outputs(&mut out, &sources, &c.fringes, ctx.atom, false)?;
    Ok(out)
}

fn ramsey(c: &RamseyConfig, ctx: &Ctx) -> Result<Outputs> {
    let mut out = Outputs::default();
    let prefix = ramsey_prefix(&c.interferometer, ctx.atom, ctx.engine, ctx.geometry)?;
    out.warnings
        .extend(prefix.interferometer().warnings().iter().cloned());
    let deltas = delta_grid(c.scan.lo_hz, c.scan.hi_hz, c.scan.points)?;
    let scan = ramsey_scan(&prefix, &deltas)?;
    let mut buf = Vec::new();
    write_ramsey_csv(&scan, &mut buf)?;
    out.file("-scan.csv", buf);
    out.put("tau_s", scan.tau);
    out.put("period_hz", scan.period_hz);
    out.put("central_minimum_hz", scan.central_minimum_hz);
    out.put("central_width_hz", scan.central_width_hz);
    out.put("width_scale_hz", scan.width_scale_hz);
    out.put("population_c_at_zero", prefix.population_c(0.0)?);
    Ok(out)
}

fn fringes(c: &FringesConfig, ctx: &Ctx) -> Result<Outputs> {
    let mut out = Outputs::default();
    pattern_outputs(&mut out, &c.sources, &c.output, ctx.atom, true)?;
    Ok(out)
}

fn pattern(c: &PatternConfig, ctx: &Ctx) -> Result<Outputs> {
    let mut out = Outputs::default();
    let image = match &c.input {
        Some(p) => {
            let path = ctx.base_dir.join(p);
            let bytes = std::fs::read(&path).map_err(|e| Error::io(&path, e))?;
            decode_pgm(&bytes)?
        }
        None => gear_silhouette(c.gear.size, c.gear.teeth),
    };
    let target = TargetPattern::from_unit(&image, c.pitch_m)?;
    let (recovered, report) = roundtrip(&target, c.magnification)?;
    let mut img = Vec::new();
    write_pgm16(&quantize(&recovered, -1.0, 1.0)?, &mut img)?;
    out.file("-recovered.pgm", img);
    out.file("-error.csv", csv_rows([&report])?);
    out.put("roundtrip", &report);
    Ok(out)
}
