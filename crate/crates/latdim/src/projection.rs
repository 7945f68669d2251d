//! Oblique projections of lattice sets, dilation sumsets, additive-energy
//! statistics of floored images, and an empirical transversality probe.
//!
//! A k-by-(d-k) matrix M sends z = (x, y) to x + M y; the floored image
//! lives in the k-dimensional lattice. All floors are taken on binary64
//! sums, so coordinates beyond 2^52 lose exactness; evaluations landing
//! within BOUNDARY_EPS of an integer are counted as boundary ties and
//! surfaced as diagnostics rather than resolved specially.

use serde::{Deserialize, Serialize};

use crate::error::{contract, range, resource, Result};
use crate::lattice::{floor_to_i64, LatticeSet, DEFAULT_SIZE_CAP};
use crate::montecarlo::sample_rng;
use rand::Rng;

/// Half-width of the interval around integers flagged as boundary ties.
pub const BOUNDARY_EPS: f64 = 1.0 / 1099511627776.0; // 2^-40

fn floor_coord(v: f64) -> Result<i64> {
    floor_to_i64(v).ok_or_else(|| range(format!("floor of {v} leaves the signed 64-bit range")))
}

/// Dense k-by-(d-k) real matrix parameterizing an oblique projection from
/// dimension d onto the first k coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectionMatrix {
    k: usize,
    d: usize,
    entries: Vec<f64>,
}

impl ProjectionMatrix {
    /// Entries are row-major, k rows of d-k columns.
    pub fn new(k: usize, d: usize, entries: Vec<f64>) -> Result<Self> {
        if k < 1 || k >= d {
            return Err(contract(format!("need 1 <= k < d, got k={k}, d={d}")));
        }
        if entries.len() != k * (d - k) {
            return Err(contract(format!(
                "matrix needs {} entries for k={k}, d={d}, got {}",
                k * (d - k),
                entries.len()
            )));
        }
        if entries.iter().any(|e| !e.is_finite()) {
            return Err(contract("matrix entries must be finite"));
        }
        Ok(Self { k, d, entries })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn entry(&self, row: usize, col: usize) -> f64 {
        self.entries[row * (self.d - self.k) + col]
    }

    /// Real image of a point before flooring.
    fn apply(&self, z: &[i64]) -> Vec<f64> {
        let cols = self.d - self.k;
        (0..self.k)
            .map(|i| {
                let mut v = z[i] as f64;
                for j in 0..cols {
                    v += self.entries[i * cols + j] * z[self.k + j] as f64;
                }
                v
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjectionDiagnostics {
    /// Coordinate evaluations that landed within BOUNDARY_EPS of an integer.
    pub boundary_ties: u64,
}

/// Floored oblique projection, deduplicated.
pub fn project(set: &LatticeSet, m: &ProjectionMatrix) -> Result<LatticeSet> {
    project_detailed(set, m).map(|(s, _)| s)
}

pub fn project_detailed(
    set: &LatticeSet,
    m: &ProjectionMatrix,
) -> Result<(LatticeSet, ProjectionDiagnostics)> {
    let (rows, diag) = floored_images(set, m)?;
    Ok((LatticeSet::from_points(m.k(), rows)?, diag))
}

/// Floored image of every point, with multiplicity, in input order.
fn floored_images(
    set: &LatticeSet,
    m: &ProjectionMatrix,
) -> Result<(Vec<Vec<i64>>, ProjectionDiagnostics)> {
    if set.dim() != m.d() {
        return Err(contract(format!(
            "set is {}-d but matrix expects d={}",
            set.dim(),
            m.d()
        )));
    }
    let mut ties = 0u64;
    let mut rows = Vec::with_capacity(set.len());
    for p in set.points() {
        let reals = m.apply(p);
        let mut row = Vec::with_capacity(m.k());
        for v in reals {
            if (v - v.round()).abs() <= BOUNDARY_EPS {
                ties += 1;
            }
            row.push(floor_coord(v)?);
        }
        rows.push(row);
    }
    Ok((rows, ProjectionDiagnostics { boundary_ties: ties }))
}

/// Floored dilation sumset of one-dimensional sets: all values
/// floor(sum_i lambda_i a_i) with a_i ranging over the i-th set. The cap
/// bounds the number of enumerated combinations (an upper bound on the
/// output size); sums are exact while every partial sum stays below 2^53
/// in absolute value.
pub fn sumset(sets: &[LatticeSet], lambdas: &[f64], cap: u64) -> Result<LatticeSet> {
    if sets.is_empty() || sets.len() != lambdas.len() {
        return Err(contract(format!(
            "need equally many sets and lambdas, at least one; got {} and {}",
            sets.len(),
            lambdas.len()
        )));
    }
    if let Some(s) = sets.iter().find(|s| s.dim() != 1) {
        return Err(contract(format!("sumset factors must be 1-d, got {}-d", s.dim())));
    }
    if lambdas.iter().any(|l| !l.is_finite()) {
        return Err(contract("lambdas must be finite"));
    }
    let combos = sets
        .iter()
        .map(|s| s.len() as u128)
        .product::<u128>();
    if combos > cap as u128 {
        return Err(resource(format!(
            "sumset would enumerate {combos} combinations, cap is {cap}"
        )));
    }
    let mut out = Vec::with_capacity(combos as usize);
    fn rec(
        sets: &[LatticeSet],
        lambdas: &[f64],
        idx: usize,
        acc: f64,
        out: &mut Vec<i64>,
    ) -> Result<()> {
        if idx == sets.len() {
            out.push(floor_coord(acc)?);
            return Ok(());
        }
        for &a in sets[idx].values() {
            rec(sets, lambdas, idx + 1, acc + lambdas[idx] * a as f64, out)?;
        }
        Ok(())
    }
    rec(sets, lambdas, 0, 0.0, &mut out)?;
    Ok(LatticeSet::from_values(out))
}

/// Default cap for sumset enumeration.
pub const DEFAULT_SUMSET_CAP: u64 = DEFAULT_SIZE_CAP;

/// Exact integer statistics of a floored projection: the image size, the
/// representation counts R(y) = |{z in E : floor(P z) = y}| listed in
/// image order, and the collision energy S = sum R(y)^2.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnergyReport {
    pub image_size: u64,
    pub energy: u128,
    pub rep_counts: Vec<u64>,
}

/// Invariants: sum of rep_counts = |E|; energy >= |E| with equality iff all
/// images are distinct; image_size * energy >= |E|^2 (Cauchy-Schwarz).
pub fn additive_energy(set: &LatticeSet, m: &ProjectionMatrix) -> Result<EnergyReport> {
    let (mut rows, _) = floored_images(set, m)?;
    rows.sort_unstable();
    let mut rep_counts = Vec::new();
    let mut i = 0usize;
    while i < rows.len() {
        let mut j = i + 1;
        while j < rows.len() && rows[j] == rows[i] {
            j += 1;
        }
        rep_counts.push((j - i) as u64);
        i = j;
    }
    let energy: u128 = rep_counts.iter().map(|&c| c as u128 * c as u128).sum();
    debug_assert_eq!(rep_counts.iter().sum::<u64>() as usize, set.len());
    Ok(EnergyReport { image_size: rep_counts.len() as u64, energy, rep_counts })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TransversalityEstimate {
    pub probability: f64,
    pub std_error: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Monte Carlo estimate of the probability, over matrices with entries
/// uniform in the box, that two points share a floored image. Entries are
/// drawn row-major, one RNG stream per sample index, so results are
/// reproducible for a fixed seed at any parallelism.
pub fn empirical_transversality(
    z: &[i64],
    z_prime: &[i64],
    k: usize,
    entry_box: (f64, f64),
    n_samples: u64,
    seed: u64,
) -> Result<TransversalityEstimate> {
    let d = z.len();
    if d != z_prime.len() || d < 2 {
        return Err(contract("points must share a dimension of at least 2"));
    }
    if z == z_prime {
        return Err(contract("points must differ"));
    }
    if k < 1 || k >= d {
        return Err(contract(format!("need 1 <= k < d, got k={k}, d={d}")));
    }
    let (lo, hi) = entry_box;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(contract(format!("degenerate entry box [{lo}, {hi}]")));
    }
    if n_samples < 1 {
        return Err(contract("need at least one sample"));
    }
    let cols = d - k;
    let mut hits = 0u64;
    let mut entries = vec![0.0f64; k * cols];
    for s in 0..n_samples {
        let mut rng = sample_rng(seed, s);
        for e in entries.iter_mut() {
            *e = lo + (hi - lo) * rng.gen::<f64>();
        }
        let mut equal = true;
        for i in 0..k {
            let mut a = z[i] as f64;
            let mut b = z_prime[i] as f64;
            for j in 0..cols {
                let m = entries[i * cols + j];
                a += m * z[k + j] as f64;
                b += m * z_prime[k + j] as f64;
            }
            if floor_coord(a)? != floor_coord(b)? {
                equal = false;
                break;
            }
        }
        if equal {
            hits += 1;
        }
    }
    let p = hits as f64 / n_samples as f64;
    let std_error = (p * (1.0 - p) / n_samples as f64).sqrt();
    Ok(TransversalityEstimate { probability: p, std_error, hits, samples: n_samples })
}
