//! The benchmark harness: scene loop, disparity output files, reports.

use std::path::{Path, PathBuf};
use std::time::Instant;

use crate::error::{Error, Result};
use crate::eval::{
    bad_pixel_rate, emit_csv, joint_valid_count, pearson_correlation, resize_gt_nearest,
    summarize, EvalResult,
};
use crate::imaging::{resize, to_grayscale, GrayImage};
use crate::ingest::{discover_dataset, load_image, load_pfm, write_pfm, SceneEntry, SkippedDir};
use crate::matching::{estimate, CostFn, DisparityMap, Method};

mod config;

pub use config::RunConfig;

/// Default cost-function assignment when not running the full cross
/// product: SAD and MSE drive the window-matching methods; the descriptor
/// and aggregated methods take no cost function.
fn default_costfns(method: Method) -> &'static [CostFn] {
    match method {
        Method::Bm | Method::Bmdp => &[CostFn::Sad, CostFn::Mse],
        _ => &[],
    }
}

/// Expands the configured methods and cost functions into the executable
/// (method, costfn) list plus one report line per skipped combination.
pub fn combinations(cfg: &RunConfig) -> (Vec<(Method, Option<CostFn>)>, Vec<String>) {
    let mut combos = Vec::new();
    let mut skipped = Vec::new();
    for method in Method::ALL {
        if !cfg.methods.contains(&method) {
            continue;
        }
        if method.ignores_costfn() {
            combos.push((method, None));
            if cfg.costfns.len() > 1 || cfg.all {
                skipped.push(format!("note: {method} takes no cost function; running it once"));
            }
            continue;
        }
        for costfn in CostFn::ALL {
            if !cfg.costfns.contains(&costfn) {
                continue;
            }
            if cfg.all || default_costfns(method).contains(&costfn) {
                combos.push((method, Some(costfn)));
            } else {
                skipped.push(format!(
                    "skip: {method}+{costfn} not in the default assignment (pass --all to run it)"
                ));
            }
        }
    }
    (combos, skipped)
}

/// Everything a benchmark run produced.
#[derive(Debug)]
pub struct BenchReport {
    pub results: Vec<EvalResult>,
    /// Scene directories skipped at discovery time.
    pub skipped_dirs: Vec<SkippedDir>,
    /// Combination-level report lines.
    pub skipped_combos: Vec<String>,
    /// Scenes that failed to load or evaluate: (scene_id, error).
    pub failures: Vec<(String, String)>,
    pub csv_path: PathBuf,
    pub summary_path: PathBuf,
    pub summary_text: String,
}

fn preprocess(path: &Path, scale: f64) -> Result<GrayImage> {
    let raw = load_image(path)?;
    let gray = to_grayscale(&raw)?;
    resize(&gray, scale)
}

fn disparity_base_name(method: Method, costfn: Option<CostFn>) -> String {
    match costfn {
        Some(c) => format!("{method}_{c}"),
        None => method.to_string(),
    }
}

fn run_scene(
    cfg: &RunConfig,
    scene: &SceneEntry,
    combos: &[(Method, Option<CostFn>)],
    results: &mut Vec<EvalResult>,
) -> Result<()> {
    let left = preprocess(&scene.left_path, cfg.scale)?;
    let right = preprocess(&scene.right_path, cfg.scale)?;
    if left.width() != right.width() || left.height() != right.height() {
        return Err(Error::dims(
            format!("{}x{}", left.width(), left.height()),
            format!("{}x{}", right.width(), right.height()),
        ));
    }
    let gt_full = load_pfm(&scene.gt_path)?;
    let gt = resize_gt_nearest(&gt_full, left.width(), left.height());

    let scene_dir = cfg.output_dir.join(&scene.scene_id);
    std::fs::create_dir_all(&scene_dir).map_err(|e| Error::io(&scene_dir, e))?;

    for &(method, costfn) in combos {
        let start = Instant::now();
        let dm = estimate(
            method,
            costfn.unwrap_or(CostFn::Sad),
            &left,
            &right,
            scene.ndisp,
            cfg.scale,
            &cfg.params,
        )?;
        let runtime_ms = start.elapsed().as_secs_f64() * 1e3;

        let correlation = pearson_correlation(&dm, &gt)?;
        let bad2 = bad_pixel_rate(&dm, &gt, 2.0)?;
        let bad5 = bad_pixel_rate(&dm, &gt, 5.0)?;
        let valid_pixel_count = joint_valid_count(&dm, &gt)?;
        results.push(EvalResult {
            scene_id: scene.scene_id.clone(),
            method,
            costfn,
            correlation,
            bad2,
            bad5,
            runtime_ms,
            valid_pixel_count,
        });

        let base = scene_dir.join(disparity_base_name(method, costfn));
        write_disparity(&dm, &base)?;
    }
    Ok(())
}

/// Runs the configured benchmark: discover scenes, preprocess, estimate,
/// score, and write disparity maps, a CSV report, and a summary table.
///
/// A scene that fails to load is reported and does not abort the run.
pub fn run_benchmark(cfg: &RunConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let discovery = discover_dataset(&cfg.dataset_root, &cfg.naming)?;
    let (combos, skipped_combos) = combinations(cfg);
    std::fs::create_dir_all(&cfg.output_dir).map_err(|e| Error::io(&cfg.output_dir, e))?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let mut results = Vec::new();
    let mut failures = Vec::new();
    pool.install(|| {
        for scene in &discovery.scenes {
            if let Err(e) = run_scene(cfg, scene, &combos, &mut results) {
                failures.push((scene.scene_id.clone(), e.to_string()));
            }
        }
    });

    let csv_path = cfg.output_dir.join("results.csv");
    emit_csv(&results, &csv_path)?;

    let summary_text = match summarize(&results) {
        Ok(table) => table.render(),
        Err(_) => String::from("(no results)\n"),
    };
    let summary_path = cfg.output_dir.join("summary.txt");
    std::fs::write(&summary_path, &summary_text).map_err(|e| Error::io(&summary_path, e))?;

    Ok(BenchReport {
        results,
        skipped_dirs: discovery.skipped,
        skipped_combos,
        failures,
        csv_path,
        summary_path,
        summary_text,
    })
}

/// Fixed scale factor between disparity values and 16-bit PGM samples.
const PGM_DISPARITY_SCALE: f64 = 256.0;

/// Writes `<base>.pgm` (16-bit P5, sample = round(256 * d), INVALID -> 0)
/// and `<base>.pfm` (little-endian float, INVALID -> +inf).
pub fn write_disparity(dm: &DisparityMap, base_path: &Path) -> Result<(PathBuf, PathBuf)> {
    let pgm_path = base_path.with_extension("pgm");
    let pfm_path = base_path.with_extension("pfm");

    let mut bytes = format!("P5\n{} {}\n65535\n", dm.width, dm.height).into_bytes();
    for (v, ok) in dm.values.iter().zip(&dm.valid) {
        let sample = if *ok {
            (v * PGM_DISPARITY_SCALE).round().clamp(0.0, 65535.0) as u16
        } else {
            0
        };
        bytes.extend_from_slice(&sample.to_be_bytes());
    }
    std::fs::write(&pgm_path, bytes).map_err(|e| Error::io(&pgm_path, e))?;

    let values: Vec<f64> = dm
        .values
        .iter()
        .zip(&dm.valid)
        .map(|(v, ok)| if *ok { *v } else { f64::INFINITY })
        .collect();
    write_pfm(dm.width, dm.height, &values, &pfm_path)?;
    Ok((pgm_path, pfm_path))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_matrix_follows_the_assignment() {
        let cfg = RunConfig { dataset_root: PathBuf::from("/x"), ..Default::default() };
        let (combos, skipped) = combinations(&cfg);
        assert_eq!(
            combos,
            vec![
                (Method::Bm, Some(CostFn::Sad)),
                (Method::Bm, Some(CostFn::Mse)),
                (Method::Bmdp, Some(CostFn::Sad)),
                (Method::Bmdp, Some(CostFn::Mse)),
                (Method::Gf, None),
                (Method::Hog, None),
                (Method::Dwac, None),
            ]
        );
        // BP x {SAD, MSE, NCC} and BM/BMDP x NCC are skipped by default.
        assert_eq!(skipped.iter().filter(|s| s.starts_with("skip:")).count(), 5);
    }

    #[test]
    fn all_flag_runs_cross_product() {
        let cfg = RunConfig { dataset_root: PathBuf::from("/x"), all: true, ..Default::default() };
        let (combos, _) = combinations(&cfg);
        // 3 window methods x 3 costfns + 3 agnostic methods.
        assert_eq!(combos.len(), 12);
        assert!(combos.contains(&(Method::Bp, Some(CostFn::Ncc))));
    }

    #[test]
    fn costfn_subset_filters_combinations() {
        let cfg = RunConfig {
            dataset_root: PathBuf::from("/x"),
            methods: vec![Method::Gf],
            costfns: vec![CostFn::Sad, CostFn::Mse],
            ..Default::default()
        };
        let (combos, skipped) = combinations(&cfg);
        assert_eq!(combos, vec![(Method::Gf, None)]);
        assert!(skipped.iter().any(|s| s.contains("takes no cost function")));
    }

    #[test]
    fn disparity_files_encode_the_fixed_contract() {
        let tmp = tempfile::tempdir().unwrap();
        let dm = DisparityMap {
            width: 2,
            height: 1,
            values: vec![3.0, f64::NAN],
            valid: vec![true, false],
        };
        let base = tmp.path().join("disp");
        let (pgm, pfm) = write_disparity(&dm, &base).unwrap();

        let bytes = std::fs::read(&pgm).unwrap();
        let header = b"P5\n2 1\n65535\n";
        assert!(bytes.starts_with(header));
        let raster = &bytes[header.len()..];
        // 3.0 -> 768 big-endian; INVALID -> 0.
        assert_eq!(raster, &[0x03, 0x00, 0x00, 0x00]);

        let gt = load_pfm(&pfm).unwrap();
        assert_eq!(gt.disparities[0], 3.0);
        assert!(!gt.valid[1]);
        assert!(gt.disparities[1].is_infinite());
    }

    #[test]
    fn pgm_samples_clamp_at_16_bits() {
        let tmp = tempfile::tempdir().unwrap();
        let dm = DisparityMap {
            width: 1,
            height: 1,
            values: vec![300.0], // 300 * 256 = 76800 > 65535
            valid: vec![true],
        };
        let (pgm, _) = write_disparity(&dm, &tmp.path().join("big")).unwrap();
        let bytes = std::fs::read(pgm).unwrap();
        assert_eq!(&bytes[bytes.len() - 2..], &[0xFF, 0xFF]);
    }
}
