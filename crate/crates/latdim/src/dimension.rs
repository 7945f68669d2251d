//! Scale profiles (extremal point counts per cube side), dimension slopes
//! fitted from them, measure suprema, and regular-subset extraction.
//!
//! The counting profile maximizes |A ∩ C| over all cubes of each side; the
//! maximization only needs cubes whose lower face per axis touches a point
//! coordinate, since any maximizing cube slides to such a position without
//! losing points.

use serde::{Deserialize, Serialize};

use crate::error::{contract, resource, Result};
use crate::lattice::{count_in_cube, CenteredCube, Cube, LatticeSet};

/// Counting profiles in three and more dimensions switch from exact anchor
/// enumeration to a sampled lower bound above this set size.
pub const ND_EXACT_LIMIT: usize = 400;
/// Anchor budget for the sampled fallback.
pub const ND_FALLBACK_ANCHORS: usize = 1024;

/// Strictly increasing cube sides to probe.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleGrid {
    sides: Vec<i64>,
}

impl ScaleGrid {
    pub fn new(sides: Vec<i64>) -> Result<Self> {
        if sides.is_empty() {
            return Err(contract("scale grid must be non-empty"));
        }
        if sides[0] < 1 {
            return Err(contract("scale grid sides must be positive"));
        }
        if sides.windows(2).any(|w| w[0] >= w[1]) {
            return Err(contract("scale grid sides must be strictly increasing"));
        }
        Ok(Self { sides })
    }

    /// Sides 2^j_lo ..= 2^j_hi.
    pub fn dyadic(j_lo: u32, j_hi: u32) -> Result<Self> {
        if j_lo > j_hi || j_hi > 62 {
            return Err(contract(format!("bad dyadic exponent range {j_lo}..{j_hi}")));
        }
        Self::new((j_lo..=j_hi).map(|j| 1i64 << j).collect())
    }

    /// Default grid for a set: dyadic sides 2^1..2^J with 2^J not exceeding
    /// the side of the smallest cube enclosing the set.
    pub fn dyadic_for_set(set: &LatticeSet) -> Result<Self> {
        let side = set
            .enclosing_side()
            .ok_or_else(|| contract("empty set has no natural scale grid"))?;
        if side < 2 {
            return Err(contract("set spans a single cell; no dyadic grid fits"));
        }
        let j_hi = 63 - (side as u64).leading_zeros(); // floor log2
        Self::dyadic(1, j_hi)
    }

    /// Accepts `pow2:LO..HI` (inclusive dyadic exponents) or a comma list of
    /// explicit sides like `1,2,4,8`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        if let Some(range) = text.strip_prefix("pow2:") {
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| contract(format!("expected pow2:LO..HI, got {text:?}")))?;
            let lo: u32 = lo
                .trim()
                .parse()
                .map_err(|e| contract(format!("bad exponent {lo:?}: {e}")))?;
            let hi: u32 = hi
                .trim()
                .parse()
                .map_err(|e| contract(format!("bad exponent {hi:?}: {e}")))?;
            return Self::dyadic(lo, hi);
        }
        let sides = text
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| contract(format!("bad side {t:?}: {e}")))
            })
            .collect::<Result<Vec<i64>>>()?;
        Self::new(sides)
    }

    pub fn sides(&self) -> &[i64] {
        &self.sides
    }

    pub fn len(&self) -> usize {
        self.sides.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileKind {
    Counting,
    Mass,
}

/// One probed scale: for counting profiles `side` is the cube side and the
/// witness attains the maximal count; for mass profiles `side` is the
/// half-side of the centered cube and the witness is that cube.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProfileEntry {
    pub side: i64,
    pub count: u64,
    pub witness: Cube,
}

/// Extremal counts across a scale grid. `exact` is false when a sampled
/// fallback produced lower bounds instead of true maxima.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaleProfile {
    pub kind: ProfileKind,
    pub dim: usize,
    pub entries: Vec<ProfileEntry>,
    pub exact: bool,
}

/// Least-squares dimension estimate over a window of profile scales.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DimensionEstimate {
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit.
    pub residual: f64,
    /// Half-open index range of entries used.
    pub window: (usize, usize),
    /// log count / log side per entry; None where the ratio is undefined
    /// (side 1 or count 0).
    pub per_scale: Vec<Option<f64>>,
}

/// Maximal point count per cube side, with witnesses.
pub fn counting_profile(set: &LatticeSet, grid: &ScaleGrid) -> Result<ScaleProfile> {
    if set.is_empty() {
        return Err(contract("counting profile of the empty set"));
    }
    let d = set.dim();
    let mut exact = true;
    let mut entries = Vec::with_capacity(grid.len());
    for &side in grid.sides() {
        let (count, witness) = match d {
            1 => max_window_1d(set, side),
            2 => max_window_2d(set, side),
            _ => {
                if set.len() <= ND_EXACT_LIMIT {
                    max_window_nd(set, side)
                } else {
                    exact = false;
                    max_window_sampled(set, side)?
                }
            }
        };
        entries.push(ProfileEntry { side, count, witness });
    }
    debug_assert!(entries.windows(2).all(|w| w[0].count <= w[1].count));
    Ok(ScaleProfile { kind: ProfileKind::Counting, dim: d, entries, exact })
}

/// Point count of centered cubes [-l, l)^d; the grid holds half-sides.
pub fn mass_profile(set: &LatticeSet, grid: &ScaleGrid) -> Result<ScaleProfile> {
    if set.is_empty() {
        return Err(contract("mass profile of the empty set"));
    }
    let d = set.dim();
    // Smallest half-side whose centered cube holds the point.
    let mut thresholds: Vec<i128> = set
        .points()
        .map(|p| {
            p.iter()
                .map(|&c| if c < 0 { -(c as i128) } else { c as i128 + 1 })
                .max()
                .expect("dim >= 1")
        })
        .collect();
    thresholds.sort_unstable();
    let mut entries = Vec::with_capacity(grid.len());
    for &half in grid.sides() {
        let witness = CenteredCube::new(half)?.to_cube(d);
        let count = thresholds.partition_point(|&t| t <= half as i128) as u64;
        entries.push(ProfileEntry { side: half, count, witness });
    }
    Ok(ScaleProfile { kind: ProfileKind::Mass, dim: d, entries, exact: true })
}

/// Max count over windows [v, v+side) anchored at points; first maximizer.
fn max_window_1d(set: &LatticeSet, side: i64) -> (u64, Cube) {
    let vals = set.values();
    let n = vals.len();
    let mut best = (0u64, 0usize);
    let mut j = 0usize;
    for i in 0..n {
        if j < i {
            j = i;
        }
        while j < n && (vals[j] as i128) < vals[i] as i128 + side as i128 {
            j += 1;
        }
        let count = (j - i) as u64;
        if count > best.0 {
            best = (count, i);
        }
    }
    (best.0, Cube::new(vec![vals[best.1]], side).expect("side >= 1"))
}

/// Max-with-leftmost-index segment tree under lazy range adds.
struct MaxTree {
    n: usize,
    max: Vec<i64>,
    idx: Vec<u32>,
    lazy: Vec<i64>,
}

impl MaxTree {
    fn new(n: usize) -> Self {
        let size = 4 * n.max(1);
        let mut t = Self { n, max: vec![0; size], idx: vec![0; size], lazy: vec![0; size] };
        t.build(1, 0, n);
        t
    }

    fn build(&mut self, node: usize, l: usize, r: usize) {
        if r - l == 1 {
            self.idx[node] = l as u32;
            return;
        }
        let m = (l + r) / 2;
        self.build(2 * node, l, m);
        self.build(2 * node + 1, m, r);
        self.pull(node);
    }

    fn pull(&mut self, node: usize) {
        let (a, b) = (2 * node, 2 * node + 1);
        if self.max[a] >= self.max[b] {
            self.max[node] = self.max[a];
            self.idx[node] = self.idx[a];
        } else {
            self.max[node] = self.max[b];
            self.idx[node] = self.idx[b];
        }
    }

    fn add(&mut self, lo: usize, hi: usize, delta: i64) {
        if lo < hi {
            self.add_rec(1, 0, self.n, lo, hi, delta);
        }
    }

    fn add_rec(&mut self, node: usize, l: usize, r: usize, lo: usize, hi: usize, delta: i64) {
        if hi <= l || r <= lo {
            return;
        }
        if lo <= l && r <= hi {
            self.max[node] += delta;
            self.lazy[node] += delta;
            return;
        }
        let m = (l + r) / 2;
        self.add_rec(2 * node, l, m, lo, hi, delta);
        self.add_rec(2 * node + 1, m, r, lo, hi, delta);
        let off = self.lazy[node];
        self.pull(node);
        self.max[node] += off;
    }

    fn top(&self) -> (i64, usize) {
        (self.max[1], self.idx[1] as usize)
    }
}

/// Sweep over x anchors with a segment tree over y anchors.
fn max_window_2d(set: &LatticeSet, side: i64) -> (u64, Cube) {
    let n = set.len();
    let mut ys: Vec<i64> = set.points().map(|p| p[1]).collect();
    ys.sort_unstable();
    ys.dedup();
    let mut tree = MaxTree::new(ys.len());
    // Anchors y with y <= py < y + side, i.e. y in [py - side + 1, py].
    let anchor_range = |py: i64| {
        let lo = ys.partition_point(|&y| (y as i128) < py as i128 - side as i128 + 1);
        let hi = ys.partition_point(|&y| y <= py);
        (lo, hi)
    };
    let mut best: Option<(u64, i64, i64)> = None;
    let mut enter = 0usize;
    let mut leave = 0usize;
    let mut i = 0usize;
    while i < n {
        let x = set.point(i)[0];
        // Skip repeated x anchors.
        while i + 1 < n && set.point(i + 1)[0] == x {
            i += 1;
        }
        while leave < n && set.point(leave)[0] < x {
            let (lo, hi) = anchor_range(set.point(leave)[1]);
            tree.add(lo, hi, -1);
            leave += 1;
        }
        while enter < n && (set.point(enter)[0] as i128) < x as i128 + side as i128 {
            let (lo, hi) = anchor_range(set.point(enter)[1]);
            tree.add(lo, hi, 1);
            enter += 1;
        }
        let (count, yidx) = tree.top();
        if count > 0 && best.map_or(true, |b| count as u64 > b.0) {
            best = Some((count as u64, x, ys[yidx]));
        }
        i += 1;
    }
    let (count, bx, by) = best.expect("non-empty set has a best window");
    (count, Cube::new(vec![bx, by], side).expect("side >= 1"))
}

/// Exact recursive anchor enumeration for d >= 3 (any d, used as an oracle
/// for the specialized paths in tests). First maximizer in lex base order.
fn max_window_nd(set: &LatticeSet, side: i64) -> (u64, Cube) {
    fn rec(
        set: &LatticeSet,
        side: i64,
        axis: usize,
        pts: &[u32],
        prefix: &mut Vec<i64>,
        best: &mut (u64, Vec<i64>),
    ) {
        if pts.len() as u64 <= best.0 {
            return; // cannot strictly beat the incumbent
        }
        if axis == set.dim() {
            best.0 = pts.len() as u64;
            best.1 = prefix.clone();
            return;
        }
        let mut coords: Vec<i64> = pts.iter().map(|&i| set.point(i as usize)[axis]).collect();
        coords.sort_unstable();
        coords.dedup();
        for c in coords {
            let sub: Vec<u32> = pts
                .iter()
                .copied()
                .filter(|&i| {
                    let v = set.point(i as usize)[axis] as i128;
                    v >= c as i128 && v < c as i128 + side as i128
                })
                .collect();
            prefix.push(c);
            rec(set, side, axis + 1, &sub, prefix, best);
            prefix.pop();
        }
    }
    let all: Vec<u32> = (0..set.len() as u32).collect();
    let mut best = (0u64, vec![]);
    rec(set, side, 0, &all, &mut Vec::new(), &mut best);
    (best.0, Cube::new(best.1, side).expect("side >= 1"))
}

/// Sampled lower bound: up to ND_FALLBACK_ANCHORS evenly strided points act
/// as cube bases.
fn max_window_sampled(set: &LatticeSet, side: i64) -> Result<(u64, Cube)> {
    let n = set.len();
    let stride = (n + ND_FALLBACK_ANCHORS - 1) / ND_FALLBACK_ANCHORS;
    let mut best = (0u64, 0usize);
    for i in (0..n).step_by(stride.max(1)) {
        let cube = Cube::new(set.point(i).to_vec(), side)?;
        let count = count_in_cube(set, &cube)?;
        if count > best.0 {
            best = (count, i);
        }
    }
    Ok((best.0, Cube::new(set.point(best.1).to_vec(), side)?))
}

/// Least-squares slope of log count against log side over the window.
/// Entries with count 0 cannot contribute and are skipped.
pub fn fit_dimension(profile: &ScaleProfile, window: std::ops::Range<usize>) -> Result<DimensionEstimate> {
    let m = profile.entries.len();
    if window.start >= window.end || window.end > m {
        return Err(contract(format!(
            "window {}..{} outside profile of {} scales",
            window.start, window.end, m
        )));
    }
    let pts: Vec<(f64, f64)> = profile.entries[window.clone()]
        .iter()
        .filter(|e| e.count >= 1)
        .map(|e| ((e.side as f64).ln(), (e.count as f64).ln()))
        .collect();
    if pts.len() < 2 || pts.first().map(|p| p.0) == pts.last().map(|p| p.0) {
        return Err(contract(
            "degenerate window: need at least two scales with non-zero counts",
        ));
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    let intercept = (sy - slope * sx) / n;
    let residual = (pts
        .iter()
        .map(|p| {
            let r = p.1 - (slope * p.0 + intercept);
            r * r
        })
        .sum::<f64>()
        / n)
        .sqrt();
    let per_scale = profile
        .entries
        .iter()
        .map(|e| {
            if e.side > 1 && e.count >= 1 {
                Some((e.count as f64).ln() / (e.side as f64).ln())
            } else {
                None
            }
        })
        .collect();
    debug_assert!(slope >= -1e-9 && slope <= profile.dim as f64 + 0.1);
    Ok(DimensionEstimate {
        slope,
        intercept,
        residual,
        window: (window.start, window.end),
        per_scale,
    })
}

/// Default fitting window: the larger half of the grid.
pub fn top_half(scale_count: usize) -> std::ops::Range<usize> {
    if scale_count < 2 {
        return 0..scale_count;
    }
    (scale_count / 2).min(scale_count - 2)..scale_count
}

/// Finite surrogate of the alpha-measure: max count/side^alpha over the
/// profile. For mass profiles the recorded half-side is the denominator,
/// which differs from the full-side convention by the constant 2^alpha and
/// leaves fitted slopes unchanged.
pub fn measure_sup(profile: &ScaleProfile, alpha: f64) -> f64 {
    assert!(alpha >= 0.0, "alpha must be non-negative");
    profile
        .entries
        .iter()
        .map(|e| e.count as f64 / (e.side as f64).powf(alpha))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Size caps for the exact cube supremum; the enumeration is quadratic in
/// one dimension and anchor-exponential beyond.
fn sup_size_cap(dim: usize) -> usize {
    match dim {
        1 => 20_000,
        2 => 256,
        _ => 64,
    }
}

/// Exact sup over integer cubes with side 1..=max_side of count/side^alpha,
/// with the attaining cube (smallest side, then lexicographically smallest
/// base, among maximizers).
pub fn sup_over_cubes(set: &LatticeSet, alpha: f64, max_side: i64) -> Result<(f64, Cube)> {
    if set.is_empty() {
        return Err(contract("cube supremum of the empty set"));
    }
    if max_side < 1 {
        return Err(contract("max side must be >= 1"));
    }
    let cap = sup_size_cap(set.dim());
    if set.len() > cap {
        return Err(resource(format!(
            "exact cube supremum over {} points exceeds the {}-d cap {}",
            set.len(),
            set.dim(),
            cap
        )));
    }
    let mut best: Option<(f64, i64, Vec<i64>)> = None;
    let mut consider = |value: f64, side: i64, base: &[i64]| {
        let better = match &best {
            None => true,
            Some((bv, bs, bb)) => {
                value > *bv || (value == *bv && (side, base) < (*bs, bb.as_slice()))
            }
        };
        if better {
            best = Some((value, side, base.to_vec()));
        }
    };
    if set.dim() == 1 {
        let vals = set.values();
        for i in 0..vals.len() {
            for j in i..vals.len() {
                let span = vals[j] as i128 - vals[i] as i128 + 1;
                if span > max_side as i128 {
                    break;
                }
                let count = (j - i + 1) as f64;
                let side = span as i64;
                consider(count / (side as f64).powf(alpha), side, &[vals[i]]);
            }
        }
    } else {
        // Anchored bases from per-axis coordinate combinations; for each
        // base the candidate sides are the per-point covering thresholds.
        let d = set.dim();
        let mut axes: Vec<Vec<i64>> = vec![Vec::new(); d];
        for p in set.points() {
            for (a, &c) in p.iter().enumerate() {
                axes[a].push(c);
            }
        }
        for ax in &mut axes {
            ax.sort_unstable();
            ax.dedup();
        }
        let mut base = vec![0i64; d];
        let mut stack = vec![0usize; d];
        let mut axis = 0usize;
        loop {
            if axis == d {
                let mut thresholds: Vec<i64> = Vec::new();
                'pts: for p in set.points() {
                    let mut need = 1i64;
                    for (a, &c) in p.iter().enumerate() {
                        let off = c as i128 - base[a] as i128;
                        if off < 0 || off >= max_side as i128 {
                            continue 'pts;
                        }
                        need = need.max(off as i64 + 1);
                    }
                    thresholds.push(need);
                }
                thresholds.sort_unstable();
                for (k, &t) in thresholds.iter().enumerate() {
                    if k + 1 < thresholds.len() && thresholds[k + 1] == t {
                        continue; // count at side t is the last index of the run
                    }
                    consider((k + 1) as f64 / (t as f64).powf(alpha), t, &base);
                }
                axis -= 1;
                stack[axis] += 1;
                continue;
            }
            if stack[axis] >= axes[axis].len() {
                stack[axis] = 0;
                if axis == 0 {
                    break;
                }
                axis -= 1;
                stack[axis] += 1;
                continue;
            }
            base[axis] = axes[axis][stack[axis]];
            axis += 1;
        }
    }
    let (value, side, base) = best.ok_or_else(|| contract("no cube fits within max side"))?;
    Ok((value, Cube::new(base, side)?))
}

/// A subset with its witness cube and the supremum both bracketed by the
/// extraction: 2^d <= sup < 2^d + 1, attained at the cube.
#[derive(Clone, Debug)]
pub struct RegularSubset {
    pub subset: LatticeSet,
    pub cube: Cube,
    pub sup_value: f64,
    /// Lower bound used for the partition piece sides; the returned cube
    /// side always exceeds it.
    pub sub_side: i64,
}

/// Thins E inside its cube until the cube supremum of count/side^alpha
/// lands in [2^d, 2^d + 1), returning the thinned points inside the
/// attaining cube. Requires S = |E|/side^alpha >= 6^d; the returned cube
/// side strictly exceeds S^(1/d)/6.
///
/// Deterministic choices: the partition keeps the lexicographically
/// smallest point per occupied piece, and each round removes the
/// lexicographically largest point of the current attaining cube.
pub fn extract_regular_subset(
    set: &LatticeSet,
    cube: &Cube,
    alpha: f64,
) -> Result<RegularSubset> {
    let d = set.dim();
    if cube.dim() != d {
        return Err(contract("set and cube dimensions differ"));
    }
    if !(alpha > 0.0) {
        return Err(contract(format!("alpha must be positive, got {alpha}")));
    }
    if set.is_empty() {
        return Err(contract("cannot extract from the empty set"));
    }
    if let Some(p) = set.points().find(|p| !cube.contains(p)) {
        return Err(contract(format!("point {p:?} lies outside the host cube")));
    }
    let s = cube.side();
    let big_s = set.len() as f64 / (s as f64).powf(alpha);
    let six_d = 6f64.powi(d as i32);
    if big_s < six_d {
        return Err(contract(format!(
            "density S = |E|/side^alpha = {big_s:.6} is below the required {six_d}"
        )));
    }
    let ell = (big_s.powf(1.0 / d as f64) / 6.0).floor().max(1.0) as i64;
    let q = s / ell; // pieces per axis; q >= 6 since ell <= side/6
    let boundaries: Vec<i128> = (0..=q)
        .map(|t| t as i128 * s as i128 / q as i128)
        .collect();
    let piece_of = |off: i128| -> u64 {
        (boundaries.partition_point(|&b| b <= off) - 1) as u64
    };
    // One point per occupied piece; the first point seen in lex scan order
    // is the lex-smallest of its piece.
    let mut seen = std::collections::HashSet::new();
    let mut rows: Vec<Vec<i64>> = Vec::new();
    for p in set.points() {
        let key: Vec<u64> = p
            .iter()
            .zip(cube.base())
            .map(|(&c, &b)| piece_of(c as i128 - b as i128))
            .collect();
        if seen.insert(key) {
            rows.push(p.to_vec());
        }
    }
    let threshold = (1u64 << d) as f64 + 1.0;
    loop {
        let current = LatticeSet::from_points(d, rows.clone())?;
        let (value, witness) = sup_over_cubes(&current, alpha, s)?;
        if value < threshold {
            let inside: Vec<Vec<i64>> = rows
                .iter()
                .filter(|p| witness.contains(p))
                .cloned()
                .collect();
            let subset = LatticeSet::from_points(d, inside)?
                .with_provenance(format!("regular_subset(alpha={alpha})"));
            return Ok(RegularSubset { subset, cube: witness, sup_value: value, sub_side: ell });
        }
        let victim = rows
            .iter()
            .enumerate()
            .filter(|(_, p)| witness.contains(p))
            .max_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .expect("attaining cube holds at least one point");
        rows.remove(victim);
    }
}
