//! Reproducible Monte Carlo experiments over random projection matrices.
//!
//! Reproducibility scheme: every sample index gets its own RNG stream from
//! a shared seed, so reports are byte-identical for a fixed config at any
//! thread count; aggregation folds samples in index order.

use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::dimension::{
    counting_profile, fit_dimension, mass_profile, top_half, ScaleGrid,
};
use crate::error::{contract, Result};
use crate::generators::GeneratorSpec;
use crate::lattice::{product, LatticeSet, DEFAULT_SIZE_CAP};
use crate::projection::{project, ProjectionMatrix};

/// Seed used by randomized entry points when the caller supplies none.
pub const DEFAULT_SEED: u64 = 0x6c61_7464_696d;
/// Default tolerance, in dimension units, for summary fractions.
pub const DEFAULT_TOLERANCE: f64 = 0.07;
/// Default sampling box for matrix entries.
pub const DEFAULT_ENTRY_BOX: (f64, f64) = (-2.0, 2.0);
/// A delta-experiment fraction exceeding this multiple of delta is flagged
/// as super-linear.
pub const SUPERLINEAR_FACTOR: f64 = 5.0;

/// The RNG for one sample: a fixed seed selects the generator, the sample
/// index selects its stream.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Where an experiment's base set comes from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SetSource {
    Generator { spec: GeneratorSpec },
    File { path: String },
    Product { factors: Vec<SetSource> },
}

impl SetSource {
    pub fn materialize(&self) -> Result<LatticeSet> {
        match self {
            SetSource::Generator { spec } => spec.build(),
            SetSource::File { path } => crate::io::read_path(Path::new(path)),
            SetSource::Product { factors } => {
                if factors.is_empty() {
                    return Err(contract("product source needs at least one factor"));
                }
                let mut sets = factors.iter().map(|f| f.materialize());
                let first = sets.next().expect("non-empty")?;
                sets.try_fold(first, |acc, s| product(&acc, &s?, DEFAULT_SIZE_CAP))
            }
        }
    }
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

fn default_entry_box() -> (f64, f64) {
    DEFAULT_ENTRY_BOX
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub source: SetSource,
    /// Ambient dimension; must match the materialized source.
    pub d: usize,
    /// Range dimension of sampled projections.
    pub k: usize,
    pub sample_count: u64,
    #[serde(default = "default_entry_box")]
    pub entry_box: (f64, f64),
    /// Scales for profiles of projected sets; per-sample dyadic grids when
    /// absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scales: Option<ScaleGrid>,
    /// Entry index window for slope fits; the top half when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fit_window: Option<(usize, usize)>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
}

impl ExperimentConfig {
    fn validate(&self) -> Result<()> {
        if self.k < 1 || self.k >= self.d {
            return Err(contract(format!(
                "need 1 <= k < d, got k={}, d={}",
                self.k, self.d
            )));
        }
        if self.sample_count < 1 {
            return Err(contract("sample_count must be at least 1"));
        }
        let (lo, hi) = self.entry_box;
        if !(lo.is_finite() && hi.is_finite() && lo < hi) {
            return Err(contract(format!("degenerate entry box [{lo}, {hi}]")));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(contract("tolerance must be finite and >= 0"));
        }
        Ok(())
    }

    fn window_for(&self, scale_count: usize) -> Result<std::ops::Range<usize>> {
        match self.fit_window {
            Some((a, b)) => {
                if a >= b || b > scale_count {
                    return Err(contract(format!(
                        "fit window {a}..{b} outside {scale_count} scales"
                    )));
                }
                Ok(a..b)
            }
            None => Ok(top_half(scale_count)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSample {
    pub matrix: Vec<f64>,
    pub image_size: u64,
    pub counting_slope: f64,
    pub mass_slope: f64,
    /// Mass-profile counts of the projected set, one per scale.
    pub mass_counts: Vec<u64>,
    /// True when the projected set was too small for a slope fit; slopes
    /// are reported as 0 then.
    pub degenerate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McSummary {
    pub sample_count: u64,
    pub seed: u64,
    pub target: f64,
    pub tolerance: f64,
    pub median_counting: f64,
    pub median_mass: f64,
    /// Fraction of samples with |mass slope - target| <= tolerance.
    pub fraction_within: f64,
    /// Fraction of samples with mass slope >= target - tolerance.
    pub fraction_at_least: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McReport {
    pub config: ExperimentConfig,
    pub target: f64,
    pub per_sample: Vec<McSample>,
    pub summary: McSummary,
}

impl McReport {
    /// Canonical serialized form used for determinism comparisons.
    pub fn to_json_bytes(&self) -> Result<Vec<u8>> {
        let mut bytes = serde_json::to_vec_pretty(self)
            .map_err(|e| crate::error::Error::Format(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
    }
}

fn draw_matrix(cfg: &ExperimentConfig, index: u64) -> Result<ProjectionMatrix> {
    let mut rng = sample_rng(cfg.seed, index);
    let (lo, hi) = cfg.entry_box;
    let entries: Vec<f64> = (0..cfg.k * (cfg.d - cfg.k))
        .map(|_| lo + (hi - lo) * rng.gen::<f64>())
        .collect();
    ProjectionMatrix::new(cfg.k, cfg.d, entries)
}

fn measure_sample(cfg: &ExperimentConfig, set: &LatticeSet, index: u64) -> Result<McSample> {
    let m = draw_matrix(cfg, index)?;
    let projected = project(set, &m)?;
    let image_size = projected.len() as u64;
    let grid = match &cfg.scales {
        Some(g) => Some(g.clone()),
        None => match projected.enclosing_side() {
            Some(side) if side >= 2 => Some(ScaleGrid::dyadic_for_set(&projected)?),
            _ => None,
        },
    };
    let Some(grid) = grid else {
        return Ok(McSample {
            matrix: m.entries().to_vec(),
            image_size,
            counting_slope: 0.0,
            mass_slope: 0.0,
            mass_counts: vec![image_size],
            degenerate: true,
        });
    };
    let counting = counting_profile(&projected, &grid)?;
    let mass = mass_profile(&projected, &grid)?;
    let window = cfg.window_for(grid.len())?;
    let counting_fit = fit_dimension(&counting, window.clone());
    let mass_fit = fit_dimension(&mass, window);
    let degenerate = counting_fit.is_err() || mass_fit.is_err();
    Ok(McSample {
        matrix: m.entries().to_vec(),
        image_size,
        counting_slope: counting_fit.map(|e| e.slope).unwrap_or(0.0),
        mass_slope: mass_fit.map(|e| e.slope).unwrap_or(0.0),
        mass_counts: mass.entries.iter().map(|e| e.count).collect(),
        degenerate,
    })
}

/// Samples projection matrices, records dimension estimates of each floored
/// image, and summarizes how the mass slopes sit against the target.
pub fn run_projection_experiment(cfg: &ExperimentConfig, target: f64) -> Result<McReport> {
    cfg.validate()?;
    if !target.is_finite() {
        return Err(contract("target must be finite"));
    }
    let set = cfg.source.materialize()?;
    if set.is_empty() {
        return Err(contract("source set is empty"));
    }
    if set.dim() != cfg.d {
        return Err(contract(format!(
            "source set is {}-d but config says d={}",
            set.dim(),
            cfg.d
        )));
    }
    let per_sample: Vec<McSample> = (0..cfg.sample_count)
        .into_par_iter()
        .map(|i| measure_sample(cfg, &set, i))
        .collect::<Result<_>>()?;
    let mass_slopes: Vec<f64> = per_sample.iter().map(|s| s.mass_slope).collect();
    let counting_slopes: Vec<f64> = per_sample.iter().map(|s| s.counting_slope).collect();
    let n = per_sample.len() as f64;
    let within = mass_slopes
        .iter()
        .filter(|&&s| (s - target).abs() <= cfg.tolerance)
        .count() as f64;
    let at_least = mass_slopes
        .iter()
        .filter(|&&s| s >= target - cfg.tolerance)
        .count() as f64;
    let summary = McSummary {
        sample_count: cfg.sample_count,
        seed: cfg.seed,
        target,
        tolerance: cfg.tolerance,
        median_counting: median(&counting_slopes),
        median_mass: median(&mass_slopes),
        fraction_within: within / n,
        fraction_at_least: at_least / n,
    };
    Ok(McReport { config: cfg.clone(), target, per_sample, summary })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub alpha: f64,
    pub k: usize,
    pub sample_count: u64,
    pub seed: u64,
    /// |E| / side^max(0, alpha - k): image sizes are compared against
    /// delta times this.
    pub norm: f64,
    pub deltas: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub fractions: Vec<f64>,
    pub fit_slope: f64,
    pub fit_intercept: f64,
    pub superlinear: bool,
}

impl DeltaReport {
    pub fn to_json_bytes(&self) -> Result<Vec<u8>> {
        let mut bytes = serde_json::to_vec_pretty(self)
            .map_err(|e| crate::error::Error::Format(e.to_string()))?;
        bytes.push(b'\n');
        Ok(bytes)
    }
}

/// For each delta, the fraction of sampled projections whose image size
/// falls below delta * |E| / side^max(0, alpha - k), where side is the
/// enclosing cube side of E. Linear growth in delta is the expected
/// behavior; fractions growing past SUPERLINEAR_FACTOR times delta raise
/// the superlinear flag. The config's source, scales, fit window, and
/// tolerance are not consulted.
pub fn run_delta_experiment(
    set: &LatticeSet,
    alpha: f64,
    delta_grid: &[f64],
    cfg: &ExperimentConfig,
) -> Result<DeltaReport> {
    cfg.validate()?;
    if set.is_empty() {
        return Err(contract("source set is empty"));
    }
    if set.dim() != cfg.d {
        return Err(contract(format!(
            "set is {}-d but config says d={}",
            set.dim(),
            cfg.d
        )));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(contract(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if alpha == cfg.k as f64 {
        return Err(contract("alpha equal to k is excluded"));
    }
    if delta_grid.is_empty() || delta_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(contract("delta grid must be non-empty and strictly increasing"));
    }
    if delta_grid.iter().any(|&d| !(d >= 0.0 && d.is_finite())) {
        return Err(contract("deltas must be finite and >= 0"));
    }
    let side = set.enclosing_side().expect("non-empty") as f64;
    let norm = set.len() as f64 / side.powf((alpha - cfg.k as f64).max(0.0));
    let sizes: Vec<u64> = (0..cfg.sample_count)
        .into_par_iter()
        .map(|i| {
            let m = draw_matrix(cfg, i)?;
            Ok(project(set, &m)?.len() as u64)
        })
        .collect::<Result<_>>()?;
    let n = sizes.len() as f64;
    let thresholds: Vec<f64> = delta_grid.iter().map(|&d| d * norm).collect();
    let fractions: Vec<f64> = thresholds
        .iter()
        .map(|&t| sizes.iter().filter(|&&s| (s as f64) < t).count() as f64 / n)
        .collect();
    let (fit_slope, fit_intercept) = linear_fit(delta_grid, &fractions);
    let superlinear = delta_grid
        .iter()
        .zip(&fractions)
        .any(|(&d, &f)| d > 0.0 && f > SUPERLINEAR_FACTOR * d);
    Ok(DeltaReport {
        alpha,
        k: cfg.k,
        sample_count: cfg.sample_count,
        seed: cfg.seed,
        norm,
        deltas: delta_grid.to_vec(),
        thresholds,
        fractions,
        fit_slope,
        fit_intercept,
        superlinear,
    })
}

fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let sx: f64 = xs.iter().sum();
    let sy: f64 = ys.iter().sum();
    let sxx: f64 = xs.iter().map(|x| x * x).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0.0 {
        return (0.0, sy / n);
    }
    let slope = (n * sxy - sx * sy) / denom;
    (slope, (sy - slope * sx) / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny_config(sample_count: u64) -> ExperimentConfig {
        ExperimentConfig {
            source: SetSource::Product {
                factors: vec![
                    SetSource::Generator {
                        spec: GeneratorSpec::Polynomial {
                            coeffs: vec!["0".into(), "0".into(), "1".into()],
                            n_lo: 0,
                            n_hi: 30,
                        },
                    },
                    SetSource::Generator {
                        spec: GeneratorSpec::Polynomial {
                            coeffs: vec!["0".into(), "0".into(), "0".into(), "1".into()],
                            n_lo: 0,
                            n_hi: 10,
                        },
                    },
                ],
            },
            d: 2,
            k: 1,
            sample_count,
            entry_box: DEFAULT_ENTRY_BOX,
            scales: None,
            fit_window: None,
            seed: DEFAULT_SEED,
            tolerance: DEFAULT_TOLERANCE,
        }
    }

    #[test]
    fn sample_rng_streams_are_stable() {
        let mut a = sample_rng(1, 0);
        let mut b = sample_rng(1, 1);
        let mut a2 = sample_rng(1, 0);
        let va: f64 = a.gen();
        let vb: f64 = b.gen();
        let va2: f64 = a2.gen();
        assert_eq!(va, va2);
        assert_ne!(va, vb);
    }

    #[test]
    fn config_validation() {
        let mut cfg = tiny_config(0);
        assert!(run_projection_experiment(&cfg, 0.5).is_err());
        cfg.sample_count = 1;
        cfg.k = 2;
        assert!(run_projection_experiment(&cfg, 0.5).is_err());
        cfg.k = 1;
        cfg.entry_box = (1.0, 1.0);
        assert!(run_projection_experiment(&cfg, 0.5).is_err());
    }

    #[test]
    fn projection_experiment_is_deterministic() {
        let cfg = tiny_config(6);
        let a = run_projection_experiment(&cfg, 5.0 / 6.0).unwrap();
        let b = run_projection_experiment(&cfg, 5.0 / 6.0).unwrap();
        assert_eq!(a.to_json_bytes().unwrap(), b.to_json_bytes().unwrap());
        assert_eq!(a.per_sample.len(), 6);
        let recount = a
            .per_sample
            .iter()
            .filter(|s| (s.mass_slope - a.target).abs() <= cfg.tolerance)
            .count() as f64
            / 6.0;
        assert_eq!(recount, a.summary.fraction_within);
    }

    #[test]
    fn delta_experiment_basics() {
        let set = SetSource::Product {
            factors: vec![
                SetSource::Generator {
                    spec: GeneratorSpec::Polynomial {
                        coeffs: vec!["0".into(), "1".into()],
                        n_lo: 0,
                        n_hi: 40,
                    },
                },
                SetSource::Generator {
                    spec: GeneratorSpec::Polynomial {
                        coeffs: vec!["0".into(), "1".into()],
                        n_lo: 0,
                        n_hi: 40,
                    },
                },
            ],
        }
        .materialize()
        .unwrap();
        let cfg = tiny_config(50);
        let report = run_delta_experiment(&set, 1.3, &[0.0, 0.1, 0.3, 1.0], &cfg).unwrap();
        assert_eq!(report.fractions[0], 0.0);
        assert!(report.fractions.windows(2).all(|w| w[0] <= w[1]));
        assert!(report.fractions.iter().all(|&f| f <= 1.0));

        assert!(run_delta_experiment(&set, 1.0, &[0.1], &cfg).is_err());
        assert!(run_delta_experiment(&set, 1.3, &[], &cfg).is_err());
        assert!(run_delta_experiment(&set, 1.3, &[0.2, 0.1], &cfg).is_err());
    }

    #[test]
    fn degenerate_projection_is_flagged() {
        // A single point projects to a single point at any matrix.
        let cfg = ExperimentConfig {
            source: SetSource::Product {
                factors: vec![
                    SetSource::Generator {
                        spec: GeneratorSpec::Polynomial {
                            coeffs: vec!["7".into(), "1".into()],
                            n_lo: 0,
                            n_hi: 1,
                        },
                    },
                    SetSource::Generator {
                        spec: GeneratorSpec::Polynomial {
                            coeffs: vec!["3".into(), "1".into()],
                            n_lo: 0,
                            n_hi: 1,
                        },
                    },
                ],
            },
            d: 2,
            k: 1,
            sample_count: 3,
            entry_box: DEFAULT_ENTRY_BOX,
            scales: None,
            fit_window: None,
            seed: 9,
            tolerance: DEFAULT_TOLERANCE,
        };
        let report = run_projection_experiment(&cfg, 0.0).unwrap();
        assert!(report.per_sample.iter().all(|s| s.degenerate));
        assert!(report.per_sample.iter().all(|s| s.image_size == 1));
        assert_eq!(report.summary.median_mass, 0.0);
    }

    #[test]
    fn config_round_trips_through_json() {
        let cfg = tiny_config(4);
        let text = serde_json::to_string(&cfg).unwrap();
        let back: ExperimentConfig = serde_json::from_str(&text).unwrap();
        assert_eq!(cfg, back);
        // Defaults fill in when omitted.
        let minimal = r#"{
            "source": {"kind": "file", "path": "x.jsonl"},
            "d": 2, "k": 1, "sample_count": 5
        }"#;
        let cfg: ExperimentConfig = serde_json::from_str(minimal).unwrap();
        assert_eq!(cfg.seed, DEFAULT_SEED);
        assert_eq!(cfg.tolerance, DEFAULT_TOLERANCE);
        assert_eq!(cfg.entry_box, DEFAULT_ENTRY_BOX);
    }
}
