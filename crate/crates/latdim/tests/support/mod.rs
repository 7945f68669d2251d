//! Brute-force oracles for the integration tests.
//!
//! Everything here is written independently of the library: naive enumeration
//! over plain slices, no shared helpers, so a bug in the library cannot hide
//! behind the same bug in its oracle.

#![allow(dead_code)]

/// Max point count over ALL integer-based cubes of the given side, by direct
/// enumeration of every base in the bounding range. Points are d-tuples.
pub fn brute_max_count(points: &[Vec<i64>], side: i64) -> u64 {
    assert!(side >= 1);
    if points.is_empty() {
        return 0;
    }
    let d = points[0].len();
    let mut lo = vec![i64::MAX; d];
    let mut hi = vec![i64::MIN; d];
    for p in points {
        for (a, &c) in p.iter().enumerate() {
            lo[a] = lo[a].min(c);
            hi[a] = hi[a].max(c);
        }
    }
    // Candidate bases: every integer position whose cube can touch a point.
    let mut best = 0u64;
    let mut base = vec![0i64; d];
    fn rec(
        axis: usize,
        d: usize,
        lo: &[i64],
        hi: &[i64],
        side: i64,
        base: &mut Vec<i64>,
        points: &[Vec<i64>],
        best: &mut u64,
    ) {
        if axis == d {
            let mut n = 0u64;
            'pt: for p in points {
                for a in 0..d {
                    let off = p[a] as i128 - base[a] as i128;
                    if off < 0 || off >= side as i128 {
                        continue 'pt;
                    }
                }
                n += 1;
            }
            if n > *best {
                *best = n;
            }
            return;
        }
        let mut b = lo[axis] - side + 1;
        while b <= hi[axis] {
            base[axis] = b;
            rec(axis + 1, d, lo, hi, side, base, points, best);
            b += 1;
        }
    }
    rec(0, d, &lo, &hi, side, &mut base, points, &mut best);
    best
}

/// sup over all integer cubes (side in 1..=max_side, every base) of
/// count / side^alpha, for a 1-d point list. Counting is done with a prefix
/// sum over the coordinate range, which is assumed small in tests.
/// Returns (sup, side, base) of the first maximizer in (side, base) scan order.
pub fn brute_sup_1d(values: &[i64], max_side: i64, alpha: f64) -> (f64, i64, i64) {
    assert!(!values.is_empty());
    let lo = *values.iter().min().unwrap();
    let hi = *values.iter().max().unwrap();
    let span = (hi - lo + 1) as usize;
    let mut present = vec![0u64; span + 1];
    for &v in values {
        present[(v - lo) as usize] = 1;
    }
    // prefix[i] = number of points with coordinate < lo + i
    let mut prefix = vec![0u64; span + 1];
    for i in 0..span {
        prefix[i + 1] = prefix[i] + present[i];
    }
    let count = |base: i64, side: i64| -> u64 {
        let a = (base - lo).clamp(0, span as i64) as usize;
        let b = (base + side - lo).clamp(0, span as i64) as usize;
        if b <= a {
            0
        } else {
            prefix[b] - prefix[a]
        }
    };
    let mut best = (f64::NEG_INFINITY, 0i64, 0i64);
    for side in 1..=max_side {
        let denom = (side as f64).powf(alpha);
        for base in (lo - side + 1)..=hi {
            let c = count(base, side);
            if c == 0 {
                continue;
            }
            let val = c as f64 / denom;
            if val > best.0 {
                best = (val, side, base);
            }
        }
    }
    best
}

/// Exhaustive minimum cover cost for 1-d points inside the host interval
/// [host_base, host_base + host_side): every cover made of integer intervals
/// of length 1..=max_len, each starting at the first currently uncovered
/// point (any optimal cover can be shifted right into this form without
/// uncovering anything). Costs accumulate as term + rest so the float
/// rounding order matches a suffix-first evaluation.
/// Branches whose partial cost already exceeds the best known are pruned;
/// pruning never removes a potential optimum since costs are nonnegative.
pub fn brute_min_cover_1d(points: &[i64], host_side: i64, alpha: f64, max_len: i64) -> f64 {
    assert!(max_len >= 1);
    let mut pts: Vec<i64> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return 0.0;
    }
    let denom = host_side as f64;
    // A valid cover always exists: all unit intervals.
    let unit = (1.0 / denom).powf(alpha);
    let mut best = unit * pts.len() as f64 + 1e-9;
    fn rec(
        pts: &[i64],
        i: usize,
        partial: f64,
        denom: f64,
        alpha: f64,
        max_len: i64,
        best: &mut f64,
    ) {
        if i >= pts.len() {
            if partial < *best {
                *best = partial;
            }
            return;
        }
        if partial >= *best {
            return;
        }
        for len in 1..=max_len {
            let cost = (len as f64 / denom).powf(alpha);
            // next uncovered index
            let mut j = i;
            while j < pts.len() && pts[j] < pts[i] + len {
                j += 1;
            }
            rec(pts, j, partial + cost, denom, alpha, max_len, best);
        }
    }
    rec(&pts, 0, 0.0, denom, alpha, max_len, &mut best);
    best
}

/// Exhaustive minimum cover cost in 2-d for tiny instances: recursion over the
/// first uncovered point, trying every square (side 1..=max_len, every base
/// position containing that point).
pub fn brute_min_cover_2d(points: &[(i64, i64)], host_side: i64, alpha: f64, max_len: i64) -> f64 {
    let mut pts: Vec<(i64, i64)> = points.to_vec();
    pts.sort_unstable();
    pts.dedup();
    if pts.is_empty() {
        return 0.0;
    }
    let denom = host_side as f64;
    let mut best = f64::INFINITY;
    fn rec(
        pts: &[(i64, i64)],
        covered: &mut Vec<bool>,
        partial: f64,
        denom: f64,
        alpha: f64,
        max_len: i64,
        best: &mut f64,
    ) {
        if partial >= *best {
            return;
        }
        let first = match covered.iter().position(|c| !c) {
            None => {
                *best = partial;
                return;
            }
            Some(i) => i,
        };
        let (px, py) = pts[first];
        for side in 1..=max_len {
            let cost = (side as f64 / denom).powf(alpha);
            for bx in (px - side + 1)..=px {
                for by in (py - side + 1)..=py {
                    let mut newly = Vec::new();
                    for (i, &(qx, qy)) in pts.iter().enumerate() {
                        if !covered[i]
                            && qx >= bx
                            && qx < bx + side
                            && qy >= by
                            && qy < by + side
                        {
                            covered[i] = true;
                            newly.push(i);
                        }
                    }
                    rec(pts, covered, partial + cost, denom, alpha, max_len, best);
                    for i in newly {
                        covered[i] = false;
                    }
                }
            }
        }
    }
    let mut covered = vec![false; pts.len()];
    rec(&pts, &mut covered, 0.0, denom, alpha, max_len, &mut best);
    best
}

/// Additive energy by ordered-pair enumeration: floors each point through
/// x + M y itself, then counts coinciding images quadratically.
/// Returns (image_size, energy).
pub fn brute_energy(points: &[Vec<i64>], k: usize, m: &[f64]) -> (u64, u128) {
    let n = points.len();
    assert!(n > 0);
    let d = points[0].len();
    let cols = d - k;
    let image = |p: &Vec<i64>| -> Vec<i64> {
        (0..k)
            .map(|i| {
                let mut v = p[i] as f64;
                for j in 0..cols {
                    v += m[i * cols + j] * p[k + j] as f64;
                }
                v.floor() as i64
            })
            .collect::<Vec<i64>>()
    };
    let images: Vec<Vec<i64>> = points.iter().map(image).collect();
    let mut energy: u128 = 0;
    for a in &images {
        for b in &images {
            if a == b {
                energy += 1;
            }
        }
    }
    let mut distinct = images.clone();
    distinct.sort();
    distinct.dedup();
    (distinct.len() as u64, energy)
}

/// All subsets of `universe` with size ≤ max_size, as index-free value lists.
pub fn subsets_up_to(universe: &[i64], max_size: usize) -> Vec<Vec<i64>> {
    let n = universe.len();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << n) {
        if (mask.count_ones() as usize) <= max_size {
            let mut s = Vec::new();
            for (i, &v) in universe.iter().enumerate() {
                if mask & (1 << i) != 0 {
                    s.push(v);
                }
            }
            out.push(s);
        }
    }
    out
}

/// Least-squares slope of y against x. Panics on fewer than two points.
pub fn ls_slope(xs: &[f64], ys: &[f64]) -> f64 {
    assert!(xs.len() == ys.len() && xs.len() >= 2);
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (x, y) in xs.iter().zip(ys) {
        num += (x - mx) * (y - my);
        den += (x - mx) * (x - mx);
    }
    num / den
}

/// Deterministic xorshift for oracle-side randomized inputs; independent of
/// the library's ChaCha streams.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn next(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next() >> 11) as f64 / (1u64 << 53) as f64
    }
}
