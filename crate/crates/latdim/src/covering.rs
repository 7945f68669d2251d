//! Covering costs: the minimum of sum (side_i/side)^alpha over covers of a
//! point set by integer cubes whose sides are capped at a fraction r of the
//! host cube, and a covering-dimension estimator built on those costs.
//!
//! Dimension 1 is solved exactly by dynamic programming; higher dimensions
//! get a feasible upper bound from dyadic bottom-up merging.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::dimension::{counting_profile, ScaleGrid};
use crate::error::{contract, Result};
use crate::lattice::{Cube, LatticeSet};

/// Default "cost has vanished" threshold for the dimension estimator.
pub const DEFAULT_TAU: f64 = 0.05;
/// Default decreasing ratio caps probed by the estimator.
pub const DEFAULT_RATIOS: [f64; 3] = [0.25, 0.0625, 0.015625];
/// Tightening the ratio cap may grow the cost by this factor before an
/// alpha stops counting as stable.
const TREND_SLACK: f64 = 1.10;
/// How many of the largest admissible scales must look stable.
const QUALIFY_SCALES: usize = 2;

/// A cover of a point set by integer cubes, with its cost.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CoverSolution {
    pub cubes: Vec<Cube>,
    /// Sum over cubes of (side_i / host_side)^alpha.
    pub cost: f64,
    pub alpha: f64,
    pub ratio_cap: f64,
}

/// Validates shared preconditions and returns the largest admissible cube
/// side, floor(r * host_side).
fn admissible_side(points: &LatticeSet, host: &Cube, alpha: f64, r: f64) -> Result<i64> {
    if points.dim() != host.dim() {
        return Err(contract(format!(
            "points are {}-d, host cube is {}-d",
            points.dim(),
            host.dim()
        )));
    }
    if !(alpha >= 0.0 && alpha.is_finite()) {
        return Err(contract(format!("alpha must be finite and >= 0, got {alpha}")));
    }
    if !(r > 0.0 && r <= 1.0) {
        return Err(contract(format!("ratio cap must lie in (0, 1], got {r}")));
    }
    if let Some(p) = points.points().find(|p| !host.contains(p)) {
        return Err(contract(format!("point {p:?} lies outside the host cube")));
    }
    let max_side = ((r * host.side() as f64).floor() as i64).min(host.side());
    if max_side < 1 {
        return Err(contract(format!(
            "no admissible cover: ratio {r} times side {} is below 1",
            host.side()
        )));
    }
    Ok(max_side)
}

/// Exact minimum cover cost in dimension 1 over integer intervals with
/// lengths in [1, floor(r * side)]. Dynamic programming over sorted points;
/// every interval may start at the first point it covers.
pub fn optimal_cover_1d(points: &LatticeSet, host: &Cube, alpha: f64, r: f64) -> Result<CoverSolution> {
    let max_side = admissible_side(points, host, alpha, r)?;
    let vals = points.values();
    let n = vals.len();
    if n == 0 {
        return Ok(CoverSolution { cubes: vec![], cost: 0.0, alpha, ratio_cap: r });
    }
    let sidef = host.side() as f64;
    // Tabulate (len/side)^alpha when the reachable lengths are dense enough
    // to pay off; otherwise evaluate per transition.
    let span = vals[n - 1] - vals[0] + 1;
    let table_cap = span.min(max_side);
    let table: Option<Vec<f64>> = if table_cap <= 4 * n as i64 + 1 {
        Some((0..=table_cap).map(|l| (l as f64 / sidef).powf(alpha)).collect())
    } else {
        None
    };
    let cost_of = |len: i64| -> f64 {
        match &table {
            Some(t) => t[len as usize],
            None => (len as f64 / sidef).powf(alpha),
        }
    };
    // dp[i] = min cost covering vals[i..]; interval from vals[i] to just
    // past vals[j-1] leads to state j.
    let mut dp = vec![0.0f64; n + 1];
    let mut choice = vec![0usize; n + 1];
    for i in (0..n).rev() {
        let mut best = f64::INFINITY;
        let mut best_j = i + 1;
        for j in i + 1..=n {
            let len = vals[j - 1] - vals[i] + 1;
            if len > max_side {
                break;
            }
            let c = cost_of(len) + dp[j];
            if c < best {
                best = c;
                best_j = j;
            }
        }
        dp[i] = best;
        choice[i] = best_j;
    }
    let mut cubes = Vec::new();
    let mut i = 0usize;
    while i < n {
        let j = choice[i];
        cubes.push(Cube::new(vec![vals[i]], vals[j - 1] - vals[i] + 1)?);
        i = j;
    }
    Ok(CoverSolution { cubes, cost: dp[0], alpha, ratio_cap: r })
}

/// Feasible cover in any dimension: start from occupied unit cells of the
/// host's dyadic partition and merge a block whenever the merged cube costs
/// no more than its children. The cost is an upper bound on the optimum.
pub fn greedy_cover_nd(points: &LatticeSet, host: &Cube, alpha: f64, r: f64) -> Result<CoverSolution> {
    let max_side = admissible_side(points, host, alpha, r)?;
    if points.is_empty() {
        return Ok(CoverSolution { cubes: vec![], cost: 0.0, alpha, ratio_cap: r });
    }
    let sidef = host.side() as f64;
    let unit_cost = (1.0 / sidef).powf(alpha);
    // Keys are block offsets from the host base in units of the block side.
    let mut level: BTreeMap<Vec<i64>, (f64, Vec<Cube>)> = BTreeMap::new();
    for p in points.points() {
        let key: Vec<i64> = p.iter().zip(host.base()).map(|(&c, &b)| c - b).collect();
        let cube = Cube::new(p.to_vec(), 1).expect("unit side");
        level.entry(key).or_insert((unit_cost, vec![cube]));
    }
    let mut block = 1i64;
    while block <= max_side / 2 {
        block *= 2;
        let merged_cost = (block as f64 / sidef).powf(alpha);
        let mut next: BTreeMap<Vec<i64>, (f64, Vec<Cube>)> = BTreeMap::new();
        for (key, (cost, cubes)) in level {
            let parent: Vec<i64> = key.iter().map(|&o| o >> 1).collect();
            let slot = next.entry(parent).or_insert((0.0, Vec::new()));
            slot.0 += cost;
            slot.1.extend(cubes);
        }
        for (key, slot) in next.iter_mut() {
            if merged_cost <= slot.0 {
                let base: Vec<i64> = key
                    .iter()
                    .zip(host.base())
                    .map(|(&k, &b)| b + k * block)
                    .collect();
                slot.0 = merged_cost;
                slot.1 = vec![Cube::new(base, block).expect("side >= 1")];
            }
        }
        level = next;
    }
    let cost = level.values().map(|(c, _)| c).sum();
    let mut cubes: Vec<Cube> = level.into_values().flat_map(|(_, c)| c).collect();
    cubes.sort_by(|a, b| a.base().cmp(b.base()).then(a.side().cmp(&b.side())));
    Ok(CoverSolution { cubes, cost, alpha, ratio_cap: r })
}

/// One evaluated cell of the estimator's cost table.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovDimRow {
    pub alpha: f64,
    pub side: i64,
    pub ratio: f64,
    pub cost: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CovDimReport {
    pub estimate: f64,
    /// False when the alpha grid failed to bracket the transition: either
    /// its smallest alpha already qualified (estimate clamped to 0) or none
    /// qualified (estimate clamped to the largest alpha).
    pub bracketed: bool,
    pub tau: f64,
    pub rows: Vec<CovDimRow>,
}

/// Estimates the covering dimension: the smallest alpha whose cover cost at
/// the largest scales stays stable as the ratio cap tightens (the finite
/// trace of a vanishing limit measure), or already sits below tau.
///
/// Costs come from the witness cubes of the counting profile: exact 1-d
/// optima, dyadic upper bounds beyond. Qualification looks at the largest
/// QUALIFY_SCALES scales that admit at least one ratio; the cost at the
/// smallest admissible ratio must stay within TREND_SLACK of the cost at
/// the largest, or fall below tau. A rising trend means the measure at this
/// alpha diverges as the cap tightens, so alpha is below the dimension.
pub fn covering_dimension_estimate(
    set: &LatticeSet,
    grid: &ScaleGrid,
    ratios: &[f64],
    alphas: &[f64],
    tau: f64,
) -> Result<CovDimReport> {
    if ratios.is_empty() || ratios.windows(2).any(|w| w[0] <= w[1]) {
        return Err(contract("ratio sequence must be non-empty and strictly decreasing"));
    }
    if ratios.iter().any(|&r| !(r > 0.0 && r <= 1.0)) {
        return Err(contract("ratios must lie in (0, 1]"));
    }
    if alphas.is_empty() || alphas.windows(2).any(|w| w[0] >= w[1]) {
        return Err(contract("alpha grid must be non-empty and strictly increasing"));
    }
    if alphas.iter().any(|&a| !(a >= 0.0 && a.is_finite())) {
        return Err(contract("alphas must be finite and >= 0"));
    }
    if !(tau > 0.0) {
        return Err(contract(format!("tau must be positive, got {tau}")));
    }
    let profile = counting_profile(set, grid)?;
    // Witness point sets per scale, largest first.
    let mut stages: Vec<(i64, LatticeSet, Cube)> = Vec::new();
    for entry in profile.entries.iter().rev() {
        let inside: Vec<Vec<i64>> = set
            .points()
            .filter(|p| entry.witness.contains(p))
            .map(|p| p.to_vec())
            .collect();
        let pts = LatticeSet::from_points(set.dim(), inside)?;
        stages.push((entry.side, pts, entry.witness.clone()));
    }
    let admissible = |r: f64, side: i64| (r * side as f64).floor() >= 1.0;
    if !stages
        .iter()
        .any(|(side, _, _)| ratios.iter().any(|&r| admissible(r, *side)))
    {
        return Err(contract("no scale in the grid admits any of the ratios"));
    }
    let mut rows = Vec::new();
    // costs[alpha][stage] = per-ratio costs, in the given ratio order.
    let mut costs: Vec<Vec<Vec<f64>>> = Vec::with_capacity(alphas.len());
    for &alpha in alphas {
        let mut per_stage = Vec::with_capacity(stages.len());
        for (side, pts, witness) in &stages {
            let mut per_ratio = Vec::new();
            for &r in ratios {
                if !admissible(r, *side) {
                    continue;
                }
                let sol = if set.dim() == 1 {
                    optimal_cover_1d(pts, witness, alpha, r)?
                } else {
                    greedy_cover_nd(pts, witness, alpha, r)?
                };
                rows.push(CovDimRow { alpha, side: *side, ratio: r, cost: sol.cost });
                per_ratio.push(sol.cost);
            }
            per_stage.push(per_ratio);
        }
        costs.push(per_stage);
    }
    let qualifies = |per_stage: &[Vec<f64>]| -> bool {
        per_stage
            .iter()
            .filter(|c| !c.is_empty())
            .take(QUALIFY_SCALES)
            .all(|c| {
                let first = c[0];
                let last = *c.last().expect("non-empty");
                last <= TREND_SLACK * first + 1e-9 || last < tau
            })
    };
    let mut estimate = None;
    for (i, per_stage) in costs.iter().enumerate() {
        if qualifies(per_stage) {
            estimate = Some(i);
            break;
        }
    }
    let (estimate, bracketed) = match estimate {
        Some(0) => (0.0, false),
        Some(i) => (alphas[i], true),
        None => (*alphas.last().expect("non-empty"), false),
    };
    Ok(CovDimReport { estimate, bracketed, tau, rows })
}
