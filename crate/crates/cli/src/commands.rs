use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use grainsort::eval::{
    cross_validate_with, kfold_split, render_table, write_report_csv, CvReport, EchoLearner, MethodSummary, Provenance, SvmLearner,
};
use grainsort::features::{extract_all, write_features_csv, FeatureParams, MethodTag};
use grainsort::radar::{generate_dataset, read_dataset, write_dataset, AScan, RadarParams, SurfaceClass};
use grainsort::svm::{train_multiclass, KernelSpec};

use crate::artifacts::{self, Manifest, ModelFile, Summary, MODEL_FORMAT};
use crate::config::ExperimentConfig;
use crate::error::CliError;

const N_CLASSES: usize = SurfaceClass::ALL.len();

fn simulate_scans(cfg: &ExperimentConfig, snr_db: Option<f64>) -> Result<Vec<AScan<f64>>, CliError> {
    Ok(generate_dataset(&cfg.radar, &cfg.dataset_spec(snr_db))?)
}

fn load_scans(path: &Path) -> Result<(RadarParams<f64>, Vec<AScan<f64>>), CliError> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    read_dataset(BufReader::new(file)).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

fn labels_of(scans: &[AScan<f64>]) -> Vec<usize> {
    scans.iter().map(|a| a.label.id()).collect()
}

fn features_of(scans: &[AScan<f64>], method: MethodTag, params: &FeatureParams) -> Result<Vec<Vec<f64>>, CliError> {
    Ok(extract_all(scans, method, params)?.into_iter().map(|v| v.values).collect())
}

pub fn simulate(cfg: &ExperimentConfig, snr_db: Option<f64>) -> Result<PathBuf, CliError> {
    let hash = cfg.hash();
    let scans = simulate_scans(cfg, snr_db)?;
    let mut bytes = Vec::new();
    write_dataset(&mut bytes, &cfg.radar, &scans)?;
    let path = cfg.out_dir.join("dataset.gsrd");
    artifacts::write_with_manifest(&path, &bytes, artifacts::manifest_for(cfg, &hash, snr_db))?;
    eprintln!("wrote {} records to {}", scans.len(), path.display());
    Ok(path)
}

/// Provenance and feature settings come from `cfg` when given, else from the
/// dataset's manifest sidecar.
pub fn extract(cfg: Option<&ExperimentConfig>, input: &Path, method: MethodTag, out_dir: &Path) -> Result<PathBuf, CliError> {
    let (_, scans) = load_scans(input)?;
    let mut manifest = match cfg {
        Some(cfg) => {
            let mut m = artifacts::manifest_for(cfg, &cfg.hash(), scans.first().and_then(|a| a.meta.snr_db));
            m.features = Some(cfg.features);
            m
        }
        None => {
            let side = artifacts::manifest_path(input);
            if !side.exists() {
                return Err(CliError::Config(format!("no --config given and no manifest at {}", side.display())));
            }
            artifacts::read_json::<Manifest>(&side)?
        }
    };
    let params = manifest.features.unwrap_or_default();
    let vectors = extract_all(&scans, method, &params)?;
    let mut bytes = Vec::new();
    write_features_csv(&mut bytes, &labels_of(&scans), &vectors).map_err(|e| CliError::Data(e.to_string()))?;
    manifest.method = Some(method);
    manifest.features = Some(params);
    let path = out_dir.join(format!("features_{}.csv", artifacts::method_slug(method)));
    artifacts::write_with_manifest(&path, &bytes, manifest)?;
    eprintln!("wrote {} x {} features to {}", vectors.len(), params.dim(method), path.display());
    Ok(path)
}

pub fn train(cfg: &ExperimentConfig, input: Option<&Path>, method: MethodTag) -> Result<PathBuf, CliError> {
    let (radar, scans) = match input {
        Some(p) => load_scans(p)?,
        None => (cfg.radar, simulate_scans(cfg, cfg.snr_db[0])?),
    };
    let x = features_of(&scans, method, &cfg.features)?;
    let mut model = train_multiclass(&x, &labels_of(&scans), N_CLASSES, &cfg.kernel, &cfg.smo)?;
    model.method = Some(method);
    let file = ModelFile {
        format: MODEL_FORMAT.to_string(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        method,
        radar,
        features: cfg.features,
        model,
    };
    let path = cfg.out_dir.join(format!("model_{}.json", artifacts::method_slug(method)));
    artifacts::write_json(&path, &file)?;
    eprintln!("trained {} on {} records, wrote {}", method, scans.len(), path.display());
    Ok(path)
}

pub fn load_model(path: &Path) -> Result<ModelFile, CliError> {
    let file: ModelFile = artifacts::read_json(path)?;
    if file.format != MODEL_FORMAT {
        return Err(CliError::Data(format!("{}: unsupported model format {:?}", path.display(), file.format)));
    }
    Ok(file)
}

pub fn predict(model_path: &Path, input: &Path, out_dir: &Path) -> Result<PathBuf, CliError> {
    let file = load_model(model_path)?;
    let (radar, scans) = load_scans(input)?;
    if radar.n_freq != file.radar.n_freq {
        return Err(CliError::Data(format!(
            "dimension mismatch: model expects {} frequency samples, dataset has {}",
            file.radar.n_freq, radar.n_freq
        )));
    }
    if radar != file.radar {
        return Err(CliError::Data(format!("frequency grid mismatch: model {:?}, dataset {:?}", file.radar, radar)));
    }
    let x = features_of(&scans, file.method, &file.features)?;
    let pred = file.model.predict_all(&x)?;
    let mut out = csv_writer();
    out.write_record(["config_hash", "seed", "index", "label", "predicted", "predicted_class"]).map_err(csv_err)?;
    let mut correct = 0;
    for (i, (a, &p)) in scans.iter().zip(&pred).enumerate() {
        correct += usize::from(a.label.id() == p);
        let name = SurfaceClass::from_id(p).map_or("?", SurfaceClass::name);
        out.write_record([&file.config_hash, &file.seed.to_string(), &i.to_string(), &a.label.id().to_string(), &p.to_string(), name])
            .map_err(csv_err)?;
    }
    let path = out_dir.join("predictions.csv");
    artifacts::write_file(&path, &out.into_inner().map_err(|e| CliError::Data(e.to_string()))?)?;
    println!("accuracy {:.4} ({correct}/{})", correct as f64 / scans.len().max(1) as f64, scans.len());
    Ok(path)
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Data(e.to_string())
}

pub struct EvaluateOptions {
    pub echo: bool,
    pub grid: bool,
}

fn row_label(method: MethodTag, echo: bool) -> String {
    if echo { format!("{method}+ECHO") } else { format!("{method}+SVM") }
}

fn evaluate_method(
    cfg: &ExperimentConfig,
    x: &[Vec<f64>],
    labels: &[usize],
    method: MethodTag,
    opts: &EvaluateOptions,
) -> Result<(CvReport<f64>, KernelSpec<f64>), CliError> {
    let plan = kfold_split(labels, cfg.folds, cfg.seed)?;
    if opts.echo {
        return Ok((cross_validate_with(x, labels, N_CLASSES, &plan, &EchoLearner)?, cfg.kernel));
    }
    let candidates = if opts.grid { cfg.kernel_grid.kernels(cfg.kernel.kind) } else { vec![cfg.kernel] };
    let mut best: Option<(CvReport<f64>, KernelSpec<f64>)> = None;
    for kernel in candidates {
        let learner = SvmLearner { kernel, opts: cfg.smo, method: Some(method) };
        let report = cross_validate_with(x, labels, N_CLASSES, &plan, &learner)?;
        if best.as_ref().is_none_or(|(b, _)| report.mean.acc > b.mean.acc) {
            best = Some((report, kernel));
        }
    }
    Ok(best.expect("at least one kernel candidate"))
}

pub fn evaluate(cfg: &ExperimentConfig, opts: &EvaluateOptions) -> Result<Summary, CliError> {
    let hash = cfg.hash();
    let mut rows = Vec::new();
    let mut kernels = Vec::new();
    for &snr in &cfg.snr_db {
        let scans = simulate_scans(cfg, snr)?;
        let labels = labels_of(&scans);
        for &method in &cfg.methods {
            let x = features_of(&scans, method, &cfg.features)?;
            let (report, kernel) = evaluate_method(cfg, &x, &labels, method, opts)?;
            eprintln!("{method} at {}: ACC {:.4}", snr.map_or_else(|| "clean".to_string(), |s| format!("{s} dB")), report.mean.acc);
            rows.push(MethodSummary { method: row_label(method, opts.echo), snr_db: snr, report });
            kernels.push(kernel);
        }
    }
    let summary = Summary { config_hash: hash, seed: cfg.seed, config: cfg.clone(), rows, kernels };
    write_reports(&summary, &cfg.out_dir)?;
    artifacts::write_json(&cfg.out_dir.join("summary.json"), &summary)?;
    Ok(summary)
}

/// Writes `report.csv` and `report.txt` and prints the table.
pub fn write_reports(summary: &Summary, out_dir: &Path) -> Result<(), CliError> {
    let prov: Provenance = summary.provenance();
    let mut bytes = Vec::new();
    write_report_csv(&mut bytes, &summary.rows, &prov)?;
    artifacts::write_file(&out_dir.join("report.csv"), &bytes)?;
    let table = render_table(&summary.rows, &prov);
    artifacts::write_file(&out_dir.join("report.txt"), table.as_bytes())?;
    print!("{table}");
    Ok(())
}

pub fn report(input: &Path, out_dir: &Path) -> Result<(), CliError> {
    let summary: Summary = artifacts::read_json(input)?;
    write_reports(&summary, out_dir)
}
