//! Subcommand implementations.

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use charter_analysis::{analyze_traced, AnalysisTrace, PieMethod};
use charter_core::{ChartTable, ChartType, Raster};
use charter_eval::{ablation_report, evaluate, Condition, EvalItem, EvalReport, RuntimeStats};
use charter_oracle::{simulate_detector, simulate_ocr, DetectorOutput, NoiseConfig, OcrOutput};
use charter_synth::{generate, GeneratedChart};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{sha256_hex, Format, Settings};
use crate::dataset::*;
use crate::overlay::draw_overlay;
use crate::{CliError, Outcome, RunLog};

fn io_err(path: &Path, e: impl std::fmt::Display) -> String {
    format!("{}: {e}", path.display())
}

fn write_bytes(path: &Path, bytes: &[u8]) -> Result<(), String> {
    std::fs::write(path, bytes).map_err(|e| io_err(path, e))
}

fn outcome(failures: &[Failure]) -> Outcome {
    if failures.is_empty() {
        Outcome::Complete
    } else {
        Outcome::Partial
    }
}

fn log_failures(log: &RunLog, failures: &[Failure]) {
    for f in failures {
        log.line(&format!("failed {} [{}]: {}", f.id, f.kind, f.message));
    }
}

pub fn generate_cmd(s: &Settings) -> Result<Outcome, CliError> {
    let seed = s.require_seed()?;
    let out = s.require_out()?.to_path_buf();
    prepare_out_dir(&out)?;
    std::fs::create_dir_all(out.join("charts")).map_err(|e| CliError::Io(io_err(&out, e)))?;
    let log = RunLog::open(&out)?;
    let hash = s.hash("generate", &[]);
    log.line(&format!("generate: {} charts per type {:?}, seed {seed}, config {hash}", s.count, s.types));
    let started = Instant::now();

    let jobs: Vec<(ChartType, u64)> =
        s.types.iter().flat_map(|&t| (0..s.count as u64).map(move |k| (t, seed + k))).collect();
    let results: Vec<Result<ChartEntry, Failure>> = jobs
        .par_iter()
        .map(|&(t, sd)| {
            let id = chart_id(t, sd);
            let fail = |kind: &str, message: String| Failure { id: id.clone(), kind: kind.into(), message };
            let chart = generate(sd, t, &s.synth).map_err(|e| fail("generate", e.to_string()))?;
            let png = chart.raster.encode_png().map_err(|e| fail("io", e.to_string()))?;
            let gt = chart.truth.to_json().map_err(|e| fail("io", e.to_string()))?;
            let (image, gt_rel) = (format!("charts/{id}.png"), format!("charts/{id}.gt.json"));
            write_bytes(&out.join(&image), &png).map_err(|e| fail("io", e))?;
            write_bytes(&out.join(&gt_rel), gt.as_bytes()).map_err(|e| fail("io", e))?;
            Ok(ChartEntry { id, chart_type: Some(t), seed: Some(sd), image, gt: Some(gt_rel), det: None, ocr: None })
        })
        .collect();
    let (mut charts, mut failures) = (Vec::new(), Vec::new());
    for r in results {
        match r {
            Ok(c) => charts.push(c),
            Err(f) => failures.push(f),
        }
    }
    let manifest = DatasetManifest { schema_version: MANIFEST_SCHEMA_VERSION, config_hash: hash, charts, failures };
    write_json(&out.join(MANIFEST), &manifest)?;
    log_failures(&log, &manifest.failures);
    log.line(&format!("generate: {} written, {} failed in {:.3}s", manifest.charts.len(), manifest.failures.len(), started.elapsed().as_secs_f64()));
    Ok(outcome(&manifest.failures))
}

fn simulate_chart(ds: &Dataset, entry: &ChartEntry, noise: &NoiseConfig) -> Result<(DetectorOutput, OcrOutput), Failure> {
    let fail = |kind: &str, message: String| Failure { id: entry.id.clone(), kind: kind.into(), message };
    let seed = entry.seed.ok_or_else(|| fail("input", "no seed in manifest".into()))?;
    let gt = ds.truth(entry).map_err(|e| fail("input", e))?;
    let det = simulate_detector(&gt, noise, seed).map_err(|e| fail("oracle", e.to_string()))?;
    let ocr = simulate_ocr(&gt, noise, seed).map_err(|e| fail("oracle", e.to_string()))?;
    Ok((det, ocr))
}

pub fn simulate_cmd(s: &Settings, data: &Path) -> Result<Outcome, CliError> {
    let ds = Dataset::open(data)?;
    let out = s.out.clone().unwrap_or_else(|| data.join("oracle"));
    prepare_out_dir(&out)?;
    let log = RunLog::open(&out)?;
    let hash = s.hash("simulate", &[ds.hash.clone()]);
    log.line(&format!("simulate: {} charts, noise {}, config {hash}", ds.manifest.charts.len(), s.noise_name));
    let results: Vec<Result<String, Failure>> = ds
        .manifest
        .charts
        .par_iter()
        .map(|entry| {
            let (det, ocr) = simulate_chart(&ds, entry, &s.noise)?;
            let fail = |message: String| Failure { id: entry.id.clone(), kind: "io".into(), message };
            det.write(&out.join(format!("{}.det.json", entry.id))).map_err(|e| fail(e.to_string()))?;
            let text = ocr.to_json().map_err(|e| fail(e.to_string()))?;
            write_bytes(&out.join(format!("{}.ocr.json", entry.id)), text.as_bytes()).map_err(fail)?;
            Ok(entry.id.clone())
        })
        .collect();
    let (charts, failures): (Vec<_>, Vec<_>) = results.into_iter().partition(Result::is_ok);
    let manifest = OracleManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        config_hash: hash,
        dataset_hash: ds.hash.clone(),
        noise: s.noise,
        charts: charts.into_iter().map(Result::unwrap).collect(),
        failures: failures.into_iter().map(|r| r.unwrap_err()).collect(),
    };
    write_json(&out.join(MANIFEST), &manifest)?;
    log_failures(&log, &manifest.failures);
    Ok(outcome(&manifest.failures))
}

/// Where `extract` gets detector and OCR outputs from.
pub enum Source {
    Oracle(String, NoiseConfig),
    Files(PathBuf),
}

fn load_chart(ds: &Dataset, entry: &ChartEntry, source: &Source) -> Result<(Raster, DetectorOutput, OcrOutput), Failure> {
    let fail = |kind: &str, message: String| Failure { id: entry.id.clone(), kind: kind.into(), message };
    let raster = ds.raster(entry).map_err(|e| fail("input", e))?;
    let (det, ocr) = match source {
        Source::Oracle(_, noise) => simulate_chart(ds, entry, noise)?,
        Source::Files(dir) => {
            let det_path = entry.det.as_ref().map_or_else(|| dir.join(format!("{}.det.json", entry.id)), |p| ds.path(p));
            let ocr_path = entry.ocr.as_ref().map_or_else(|| dir.join(format!("{}.ocr.json", entry.id)), |p| ds.path(p));
            let det = DetectorOutput::read(&det_path).map_err(|e| fail("input", io_err(&det_path, e)))?;
            let text = std::fs::read_to_string(&ocr_path).map_err(|e| fail("input", io_err(&ocr_path, e)))?;
            let ocr = OcrOutput::from_json(&text).map_err(|e| fail("input", io_err(&ocr_path, e)))?;
            (det, ocr)
        }
    };
    Ok((raster, det, ocr))
}

pub fn extract_cmd(s: &Settings, data: &Path, source: Source) -> Result<Outcome, CliError> {
    let ds = Dataset::open(data)?;
    let out = s.require_out()?.to_path_buf();
    prepare_out_dir(&out)?;
    let log = RunLog::open(&out)?;
    let source_tag = match &source {
        Source::Oracle(name, noise) => format!("oracle {name} {}", serde_json::to_string(noise).unwrap_or_default()),
        Source::Files(dir) => format!("files {}", dir.display()),
    };
    let hash = s.hash("extract", &[ds.hash.clone(), source_tag.clone()]);
    log.line(&format!("extract: {} charts, {source_tag}, config {hash}", ds.manifest.charts.len()));
    let started = Instant::now();

    let results: Vec<Result<String, Failure>> = ds
        .manifest
        .charts
        .par_iter()
        .map(|entry| {
            let (raster, det, ocr) = load_chart(&ds, entry, &source)?;
            let fail = |kind: &str, message: String| Failure { id: entry.id.clone(), kind: kind.into(), message };
            let (table, trace) = analyze_traced(&det, &ocr.tokens, &raster, &s.analysis, PieMethod::Heatmaps)
                .map_err(|e| fail(e.kind(), e.to_string()))?;
            let table_json = table.to_json().map_err(|e| fail("io", e.to_string()))?;
            let trace_json = serde_json::to_string_pretty(&trace).map_err(|e| fail("io", e.to_string()))? + "\n";
            write_bytes(&out.join(format!("{}.table.json", entry.id)), table_json.as_bytes()).map_err(|e| fail("io", e))?;
            write_bytes(&out.join(format!("{}.trace.json", entry.id)), trace_json.as_bytes()).map_err(|e| fail("io", e))?;
            Ok(entry.id.clone())
        })
        .collect();
    let (tables, failures): (Vec<_>, Vec<_>) = results.into_iter().partition(Result::is_ok);
    let failures: Vec<Failure> = failures.into_iter().map(|r| r.unwrap_err()).collect();
    write_json(&out.join("failures.json"), &failures)?;
    let manifest = PredictionManifest {
        schema_version: MANIFEST_SCHEMA_VERSION,
        config_hash: hash,
        dataset_hash: ds.hash.clone(),
        oracle: match &source {
            Source::Oracle(name, _) => Some(name.clone()),
            Source::Files(_) => None,
        },
        tables: tables.into_iter().map(Result::unwrap).collect(),
        failures,
    };
    write_json(&out.join(MANIFEST), &manifest)?;
    log_failures(&log, &manifest.failures);
    let secs = started.elapsed().as_secs_f64();
    log.line(&format!("extract: {} tables, {} failures in {secs:.3}s", manifest.tables.len(), manifest.failures.len()));
    Ok(outcome(&manifest.failures))
}

/// Opens predictions and checks they were extracted from `ds`.
fn open_predictions(ds: &Dataset, pred: &Path) -> Result<(PredictionManifest, String), CliError> {
    let path = pred.join(MANIFEST);
    let bytes = std::fs::read(&path).map_err(|e| CliError::Input(io_err(&path, e)))?;
    let m: PredictionManifest = serde_json::from_slice(&bytes).map_err(|e| CliError::Input(io_err(&path, e)))?;
    if m.dataset_hash != ds.hash {
        return Err(CliError::Mismatch(format!(
            "{} was extracted from dataset {} but {} has hash {}",
            pred.display(),
            m.dataset_hash,
            ds.dir.display(),
            ds.hash
        )));
    }
    if let Some(id) = m.tables.iter().find(|id| !ds.manifest.charts.iter().any(|c| &c.id == *id)) {
        return Err(CliError::Mismatch(format!("prediction {id} is not in the dataset")));
    }
    Ok((m, sha256_hex(&bytes)))
}

#[derive(Debug, Serialize, Deserialize)]
pub struct EvalBundle {
    pub schema_version: u32,
    pub config_hash: String,
    pub dataset_hash: String,
    pub predictions_hash: String,
    pub reports: Vec<EvalReport>,
}

fn render_reports(reports: &[EvalReport], format: Format, json: impl FnOnce() -> Result<String, CliError>) -> Result<String, CliError> {
    Ok(match format {
        Format::Json => json()?,
        Format::Csv => {
            let mut out = String::new();
            for (k, r) in reports.iter().enumerate() {
                let csv = r.to_csv();
                let body = if k == 0 { csv.as_str() } else { csv.split_once('\n').map_or("", |(_, b)| b) };
                out.push_str(body);
            }
            out
        }
        Format::Md => reports.iter().map(EvalReport::to_markdown).collect::<Vec<_>>().join("\n"),
    })
}

pub fn evaluate_cmd(s: &Settings, data: &Path, pred: &Path) -> Result<Outcome, CliError> {
    let ds = Dataset::open(data)?;
    let (pm, pred_hash) = open_predictions(&ds, pred)?;
    let out = s.out.clone().unwrap_or_else(|| pred.to_path_buf());
    prepare_out_dir(&out)?;
    let log = RunLog::open(&out)?;
    let hash = s.hash("evaluate", &[ds.hash.clone(), pred_hash.clone()]);
    log.line(&format!("evaluate: {} tables, config {hash}", pm.tables.len()));
    let started = Instant::now();

    let mut loaded: Vec<(String, ChartTable, Option<ChartTable>)> = Vec::new();
    for entry in &ds.manifest.charts {
        let Ok(truth) = ds.truth(entry) else { continue };
        let table = if pm.tables.contains(&entry.id) {
            let path = pred.join(format!("{}.table.json", entry.id));
            let text = std::fs::read_to_string(&path).map_err(|e| CliError::Input(io_err(&path, e)))?;
            Some(ChartTable::from_json(&text).map_err(|e| CliError::Input(io_err(&path, e)))?)
        } else {
            None
        };
        loaded.push((entry.id.clone(), truth.table, table));
    }
    if loaded.is_empty() {
        return Err(CliError::Input(format!("{} has no charts with ground truth", data.display())));
    }
    let conditions = Condition::defaults(&s.taus);
    let mut reports = Vec::new();
    for t in ChartType::ALL {
        let items: Vec<EvalItem> = loaded
            .iter()
            .filter(|(_, gt, _)| gt.chart_type == t)
            .map(|(id, gt, p)| EvalItem { id, gt, pred: p.as_ref() })
            .collect();
        if items.is_empty() {
            continue;
        }
        let mut r = evaluate(t, &items, &s.epsilons, &conditions).map_err(|e| CliError::Input(e.to_string()))?;
        r.runtime = Some(RuntimeStats { charts: items.len(), total_seconds: started.elapsed().as_secs_f64() });
        reports.push(r);
    }
    let bundle = EvalBundle {
        schema_version: charter_eval::REPORT_SCHEMA_VERSION,
        config_hash: hash,
        dataset_hash: ds.hash.clone(),
        predictions_hash: pred_hash,
        reports,
    };
    let text = render_reports(&bundle.reports, s.format, || {
        Ok(serde_json::to_string_pretty(&bundle).map_err(|e| CliError::Io(e.to_string()))? + "\n")
    })?;
    let path = out.join(format!("report.{}", s.format.extension()));
    std::fs::write(&path, &text).map_err(|e| CliError::Io(io_err(&path, e)))?;
    let _ = std::io::stdout().write_all(text.as_bytes());
    for r in &bundle.reports {
        log.line(&format!("evaluate: {} {} charts", r.chart_type, r.charts));
    }
    log.line(&format!("evaluate: done in {:.3}s", started.elapsed().as_secs_f64()));
    Ok(Outcome::Complete)
}

pub fn ablate_cmd(s: &Settings) -> Result<Outcome, CliError> {
    let seed = s.require_seed()?;
    let out = s.require_out()?.to_path_buf();
    prepare_out_dir(&out)?;
    let log = RunLog::open(&out)?;
    let hash = s.hash("ablate", &[]);
    log.line(&format!("ablate: {} pies, seed {seed}, noise {}, config {hash}", s.count, s.noise_name));
    let started = Instant::now();
    let results: Vec<Result<GeneratedChart, Failure>> = (0..s.count as u64)
        .into_par_iter()
        .map(|k| {
            generate(seed + k, ChartType::Pie, &s.synth).map_err(|e| Failure {
                id: chart_id(ChartType::Pie, seed + k),
                kind: "generate".into(),
                message: e.to_string(),
            })
        })
        .collect();
    let (charts, failures): (Vec<_>, Vec<_>) = results.into_iter().partition(Result::is_ok);
    let charts: Vec<GeneratedChart> = charts.into_iter().map(Result::unwrap).collect();
    let failures: Vec<Failure> = failures.into_iter().map(|r| r.unwrap_err()).collect();
    let report = ablation_report(&charts, &s.noise, &s.epsilons, &s.analysis).map_err(|e| CliError::Input(e.to_string()))?;
    let text = match s.format {
        Format::Json => report.to_json().map_err(|e| CliError::Io(e.to_string()))?,
        Format::Csv => report.to_csv(),
        Format::Md => report.to_markdown(),
    };
    let path = out.join(format!("ablation.{}", s.format.extension()));
    std::fs::write(&path, &text).map_err(|e| CliError::Io(io_err(&path, e)))?;
    let _ = std::io::stdout().write_all(text.as_bytes());
    log_failures(&log, &failures);
    log.line(&format!("ablate: done in {:.3}s", started.elapsed().as_secs_f64()));
    Ok(outcome(&failures))
}

pub fn overlay_cmd(s: &Settings, data: &Path, pred: &Path, ids: Option<&[String]>) -> Result<Outcome, CliError> {
    let ds = Dataset::open(data)?;
    let (pm, _) = open_predictions(&ds, pred)?;
    let out = s.out.clone().unwrap_or_else(|| pred.join("overlays"));
    prepare_out_dir(&out)?;
    let log = RunLog::open(&out)?;
    if let Some(missing) = ids.and_then(|ids| ids.iter().find(|id| !pm.tables.contains(id))) {
        return Err(CliError::Usage(format!("no prediction for {missing}")));
    }
    let wanted: Vec<&String> = pm.tables.iter().filter(|id| ids.map_or(true, |ids| ids.contains(id))).collect();
    log.line(&format!("overlay: {} charts", wanted.len()));
    let failures: Vec<Failure> = wanted
        .par_iter()
        .filter_map(|id| {
            let fail = |message: String| Failure { id: id.to_string(), kind: "overlay".into(), message };
            let run = || -> Result<(), Failure> {
                let entry = ds.manifest.charts.iter().find(|c| &c.id == *id).expect("checked against manifest");
                let raster = ds.raster(entry).map_err(fail)?;
                let path = pred.join(format!("{id}.trace.json"));
                let text = std::fs::read_to_string(&path).map_err(|e| fail(io_err(&path, e)))?;
                let trace: AnalysisTrace = serde_json::from_str(&text).map_err(|e| fail(io_err(&path, e)))?;
                let png = draw_overlay(&raster, &trace).encode_png().map_err(|e| fail(e.to_string()))?;
                write_bytes(&out.join(format!("{id}.overlay.png")), &png).map_err(fail)
            };
            run().err()
        })
        .collect();
    log_failures(&log, &failures);
    Ok(outcome(&failures))
}
