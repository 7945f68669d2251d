//! Finite integer point sets, cubes, and the primitives every estimator
//! shares: flooring, counting, affine images, Cartesian products.
//!
//! All types are immutable after construction and cheap to share across
//! threads; every operation returns a new value. Point storage is a flat
//! row-major `Vec<i64>` so million-point sets stay compact.

use serde::{Deserialize, Serialize};

use crate::error::{contract, range, resource, Error, Result};

/// Default cap on materialized cardinalities (products, sumsets).
pub const DEFAULT_SIZE_CAP: u64 = 100_000_000;

/// A single lattice point. Used at API boundaries; bulk storage lives in
/// [`LatticeSet`].
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct LatticePoint {
    coords: Vec<i64>,
}

impl LatticePoint {
    pub fn new(coords: Vec<i64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(contract("lattice point needs dimension >= 1"));
        }
        Ok(Self { coords })
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[i64] {
        &self.coords
    }
}

impl From<LatticePoint> for Vec<i64> {
    fn from(p: LatticePoint) -> Self {
        p.coords
    }
}

/// A deduplicated, lexicographically sorted finite subset of Z^d with a
/// free-form provenance tag describing how it was made.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LatticeSet {
    dim: usize,
    coords: Vec<i64>,
    provenance: String,
}

impl LatticeSet {
    /// Canonical constructor: validates dimensions, sorts, deduplicates.
    pub fn from_points<I>(dim: usize, points: I) -> Result<Self>
    where
        I: IntoIterator<Item = Vec<i64>>,
    {
        if dim == 0 {
            return Err(contract("set dimension must be >= 1"));
        }
        let mut rows: Vec<Vec<i64>> = Vec::new();
        for p in points {
            if p.len() != dim {
                return Err(contract(format!(
                    "point {:?} has dimension {}, set has {}",
                    p,
                    p.len(),
                    dim
                )));
            }
            rows.push(p);
        }
        rows.sort_unstable();
        rows.dedup();
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for r in &rows {
            coords.extend_from_slice(r);
        }
        Ok(Self {
            dim,
            coords,
            provenance: String::new(),
        })
    }

    /// One-dimensional convenience constructor.
    pub fn from_values(values: Vec<i64>) -> Self {
        let mut v = values;
        v.sort_unstable();
        v.dedup();
        Self {
            dim: 1,
            coords: v,
            provenance: String::new(),
        }
    }

    /// Takes flat row-major storage that is already sorted and deduplicated.
    /// Verifies the invariant in O(n) and refuses otherwise; generators whose
    /// enumeration order is provably sorted use this to skip re-sorting.
    pub fn from_sorted_flat(dim: usize, coords: Vec<i64>) -> Result<Self> {
        if dim == 0 {
            return Err(contract("set dimension must be >= 1"));
        }
        if coords.len() % dim != 0 {
            return Err(contract(format!(
                "flat storage length {} is not a multiple of dimension {}",
                coords.len(),
                dim
            )));
        }
        let n = coords.len() / dim;
        for i in 1..n {
            let a = &coords[(i - 1) * dim..i * dim];
            let b = &coords[i * dim..(i + 1) * dim];
            if a >= b {
                return Err(contract(format!(
                    "flat storage not strictly sorted at row {i}: {a:?} >= {b:?}"
                )));
            }
        }
        Ok(Self {
            dim,
            coords,
            provenance: String::new(),
        })
    }

    pub fn with_provenance(mut self, tag: impl Into<String>) -> Self {
        self.provenance = tag.into();
        self
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn point(&self, i: usize) -> &[i64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Sorted coordinate slice for one-dimensional sets.
    pub fn values(&self) -> &[i64] {
        assert_eq!(self.dim, 1, "values() is defined for 1-d sets only");
        &self.coords
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        if point.len() != self.dim || self.is_empty() {
            return false;
        }
        let n = self.len();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.point(mid) < point {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo < n && self.point(lo) == point
    }

    /// Per-axis (min, max) bounds; None for the empty set.
    pub fn bounds(&self) -> Option<Vec<(i64, i64)>> {
        if self.is_empty() {
            return None;
        }
        let mut b: Vec<(i64, i64)> = vec![(i64::MAX, i64::MIN); self.dim];
        for p in self.points() {
            for (a, &c) in p.iter().enumerate() {
                b[a].0 = b[a].0.min(c);
                b[a].1 = b[a].1.max(c);
            }
        }
        Some(b)
    }

    /// Side of the smallest integer cube containing the set (max axis spread
    /// plus one); None for the empty set.
    pub fn enclosing_side(&self) -> Option<i64> {
        self.bounds().map(|b| {
            b.iter()
                .map(|(lo, hi)| hi.saturating_sub(*lo).saturating_add(1))
                .max()
                .unwrap_or(1)
        })
    }
}

/// Half-open axis-aligned cube Π_i [base_i, base_i + side).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cube {
    base: Vec<i64>,
    side: i64,
}

impl Cube {
    pub fn new(base: Vec<i64>, side: i64) -> Result<Self> {
        if base.is_empty() {
            return Err(contract("cube needs dimension >= 1"));
        }
        if side < 1 {
            return Err(contract(format!("cube side must be >= 1, got {side}")));
        }
        Ok(Self { base, side })
    }

    pub fn dim(&self) -> usize {
        self.base.len()
    }

    pub fn base(&self) -> &[i64] {
        &self.base
    }

    pub fn side(&self) -> i64 {
        self.side
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        if point.len() != self.dim() {
            return false;
        }
        point.iter().zip(&self.base).all(|(&c, &b)| {
            let off = c as i128 - b as i128;
            off >= 0 && off < self.side as i128
        })
    }

    pub fn translate(&self, shift: &[i64]) -> Result<Cube> {
        if shift.len() != self.dim() {
            return Err(contract("shift dimension mismatch"));
        }
        let base = self
            .base
            .iter()
            .zip(shift)
            .map(|(&b, &z)| b.checked_add(z).ok_or_else(|| range("cube translation overflows")))
            .collect::<Result<Vec<i64>>>()?;
        Ok(Cube { base, side: self.side })
    }
}

/// The origin-symmetric cube [−ℓ, ℓ)^d, given by its half-side ℓ.
/// The ambient dimension comes from whatever set it is probed against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CenteredCube {
    half_side: i64,
}

impl CenteredCube {
    pub fn new(half_side: i64) -> Result<Self> {
        if half_side < 1 {
            return Err(contract(format!("half-side must be >= 1, got {half_side}")));
        }
        if half_side > (1i64 << 61) {
            return Err(range("half-side too large: full side must stay within i64"));
        }
        Ok(Self { half_side })
    }

    pub fn half_side(&self) -> i64 {
        self.half_side
    }

    pub fn side(&self) -> i64 {
        2 * self.half_side
    }

    pub fn contains(&self, point: &[i64]) -> bool {
        point.iter().all(|&c| -self.half_side <= c && c < self.half_side)
    }

    /// The same region as an explicit cube in dimension d.
    pub fn to_cube(&self, dim: usize) -> Cube {
        Cube {
            base: vec![-self.half_side; dim],
            side: self.side(),
        }
    }
}

/// Coordinate-wise floor of real tuples, deduplicated and sorted.
pub fn floor_set(reals: &[Vec<f64>]) -> Result<LatticeSet> {
    let dim = match reals.first() {
        Some(p) if !p.is_empty() => p.len(),
        Some(_) => return Err(contract("points need dimension >= 1")),
        None => return Err(contract("floor_set needs at least one point to fix the dimension")),
    };
    let mut rows = Vec::with_capacity(reals.len());
    for p in reals {
        if p.len() != dim {
            return Err(contract(format!("mixed dimensions: {} vs {}", p.len(), dim)));
        }
        let mut q = Vec::with_capacity(dim);
        for &x in p {
            q.push(floor_to_i64(x).ok_or_else(|| {
                range(format!("cannot floor {x:?} (point {p:?}) into signed 64-bit range"))
            })?);
        }
        rows.push(q);
    }
    Ok(LatticeSet::from_points(dim, rows)?.with_provenance("floor_set"))
}

/// Floor of a finite f64 if it fits in i64.
pub(crate) fn floor_to_i64(x: f64) -> Option<i64> {
    if !x.is_finite() {
        return None;
    }
    let f = x.floor();
    // i64::MAX as f64 rounds up to 2^63, hence the strict upper comparison.
    if f >= i64::MIN as f64 && f < i64::MAX as f64 {
        Some(f as i64)
    } else {
        None
    }
}

/// Exact number of points of the set inside the half-open cube.
pub fn count_in_cube(set: &LatticeSet, cube: &Cube) -> Result<u64> {
    if set.dim() != cube.dim() {
        return Err(contract(format!(
            "dimension mismatch: set is {}-d, cube is {}-d",
            set.dim(),
            cube.dim()
        )));
    }
    // Rows are lex-sorted, so the first coordinate delimits a contiguous range.
    let lo = set.partition_point_first_coord(cube.base()[0]);
    let hi_coord = cube.base()[0] as i128 + cube.side() as i128;
    let mut n = 0u64;
    for i in lo..set.len() {
        let p = set.point(i);
        if (p[0] as i128) >= hi_coord {
            break;
        }
        if cube.contains(p) {
            n += 1;
        }
    }
    Ok(n)
}

impl LatticeSet {
    /// Index of the first row whose first coordinate is >= c.
    fn partition_point_first_coord(&self, c: i64) -> usize {
        let n = self.len();
        let mut lo = 0usize;
        let mut hi = n;
        while lo < hi {
            let mid = (lo + hi) / 2;
            if self.point(mid)[0] < c {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }
}

/// {c·a + z : a ∈ set} with checked arithmetic. Positive scale keeps the
/// lexicographic order, so cardinality is preserved.
pub fn affine_map(set: &LatticeSet, scale: i64, shift: &[i64]) -> Result<LatticeSet> {
    if scale < 1 {
        return Err(contract(format!("scale must be a positive integer, got {scale}")));
    }
    if shift.len() != set.dim() {
        return Err(contract("shift dimension mismatch"));
    }
    let mut coords = Vec::with_capacity(set.coords.len());
    for p in set.points() {
        for (a, &c) in p.iter().enumerate() {
            let v = c
                .checked_mul(scale)
                .and_then(|t| t.checked_add(shift[a]))
                .ok_or_else(|| range(format!("affine image of {p:?} overflows i64")))?;
            coords.push(v);
        }
    }
    let out = LatticeSet::from_sorted_flat(set.dim(), coords)
        .map_err(|e| Error::Contract(format!("affine image lost sortedness: {e}")))?;
    Ok(out.with_provenance(set.provenance.clone()))
}

/// Cartesian product. Cardinality |a|·|b| is checked against the cap before
/// any allocation happens.
pub fn product(a: &LatticeSet, b: &LatticeSet, cap: u64) -> Result<LatticeSet> {
    let total = a.len() as u128 * b.len() as u128;
    if total > cap as u128 {
        return Err(resource(format!(
            "product cardinality {} exceeds cap {}",
            total, cap
        )));
    }
    let dim = a.dim() + b.dim();
    let mut coords = Vec::with_capacity((total as usize) * dim);
    for p in a.points() {
        for q in b.points() {
            coords.extend_from_slice(p);
            coords.extend_from_slice(q);
        }
    }
    // Outer-major iteration over two sorted factors yields lex-sorted rows.
    debug_assert!(LatticeSet::from_sorted_flat(dim, coords.clone()).is_ok());
    Ok(LatticeSet {
        dim,
        coords,
        provenance: format!("product({}, {})", a.provenance, b.provenance),
    })
}
