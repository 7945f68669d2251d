//! Example families with known closed-form dimensions: polynomial images,
//! fractional powers, geometric sequences, primes, digit-restricted Cantor
//! sets, and generalized IP sets. These are the ground truths the estimators
//! are tested against, so every value path is exact integer or rational
//! arithmetic; floating point appears only in eigenvalues and closed forms.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{contract, range, resource, Error, Result};
use crate::lattice::{LatticeSet, DEFAULT_SIZE_CAP};

/// Hard cap on transition-matrix base; the validation pass is quadratic in it.
pub const MAX_MATRIX_BASE: u32 = 512;
/// Iteration budget for the geometric generator (slow ratios near 1).
pub const GEOMETRIC_MAX_TERMS: u64 = 100_000;
/// Cardinality cap for generalized IP sets, above the default set cap because
/// the family needs 10^8..10^9 points before its dimension stabilizes.
pub const IP_SIZE_CAP: u64 = 1 << 32;
/// Relative tolerance for the spectral-radius power iteration.
pub const PF_TOL: f64 = 1e-12;
/// Iteration budget for the spectral-radius power iteration.
pub const PF_MAX_ITERS: u32 = 100_000;

/// Parses "p/q" or a plain integer into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    s.trim()
        .parse::<BigRational>()
        .map_err(|e| Error::Format(format!("bad rational {s:?}: {e}")))
}

/// Digit-transition matrix for base-b expansions together with the set of
/// digits allowed in the least significant position. Construction insists on
/// a cycle reachable from the start digits, so admissible strings of every
/// length exist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrix {
    base: u32,
    bits: Vec<bool>,
    start: Vec<u32>,
}

impl TransitionMatrix {
    /// Builds from explicit 0/1 rows; `start` defaults to all digits.
    pub fn new(base: u32, rows: &[Vec<u8>], start: Option<Vec<u32>>) -> Result<Self> {
        if base < 1 {
            return Err(contract("matrix base must be >= 1"));
        }
        if base > MAX_MATRIX_BASE {
            return Err(resource(format!("matrix base {base} exceeds cap {MAX_MATRIX_BASE}")));
        }
        let b = base as usize;
        if rows.len() != b || rows.iter().any(|r| r.len() != b) {
            return Err(contract(format!("expected a {b}x{b} matrix")));
        }
        let mut bits = Vec::with_capacity(b * b);
        for row in rows {
            for &e in row {
                match e {
                    0 => bits.push(false),
                    1 => bits.push(true),
                    _ => return Err(contract(format!("matrix entries must be 0 or 1, got {e}"))),
                }
            }
        }
        let start = normalize_digits(base, start.unwrap_or_else(|| (0..base).collect()))?;
        let tm = Self { base, bits, start };
        tm.check_cycle()?;
        Ok(tm)
    }

    /// Fully connected matrix on all digits of the base.
    pub fn full(base: u32) -> Result<Self> {
        let digits: Vec<u32> = (0..base).collect();
        Self::on_digits(base, &digits)
    }

    /// Fully connected matrix on a digit subset; start digits = the subset.
    pub fn on_digits(base: u32, digits: &[u32]) -> Result<Self> {
        if base < 1 {
            return Err(contract("matrix base must be >= 1"));
        }
        if base > MAX_MATRIX_BASE {
            return Err(resource(format!("matrix base {base} exceeds cap {MAX_MATRIX_BASE}")));
        }
        let digits = normalize_digits(base, digits.to_vec())?;
        let b = base as usize;
        let mut bits = vec![false; b * b];
        for &i in &digits {
            for &j in &digits {
                bits[i as usize * b + j as usize] = true;
            }
        }
        let tm = Self { base, bits, start: digits };
        tm.check_cycle()?;
        Ok(tm)
    }

    /// Removes the digit transition `from -> to`. Fails if no admissible
    /// cycle survives.
    pub fn forbid(mut self, from: u32, to: u32) -> Result<Self> {
        if from >= self.base || to >= self.base {
            return Err(contract(format!(
                "digit pair ({from},{to}) outside base {}",
                self.base
            )));
        }
        self.bits[from as usize * self.base as usize + to as usize] = false;
        self.check_cycle()?;
        Ok(self)
    }

    /// Replaces the start-digit set. Fails if no admissible cycle is
    /// reachable from it.
    pub fn with_start(mut self, start: Vec<u32>) -> Result<Self> {
        self.start = normalize_digits(self.base, start)?;
        self.check_cycle()?;
        Ok(self)
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn start_digits(&self) -> &[u32] {
        &self.start
    }

    pub fn entry(&self, from: u32, to: u32) -> bool {
        self.bits[from as usize * self.base as usize + to as usize]
    }

    /// Digits reachable from the start set (start digits included).
    fn reachable(&self) -> Vec<bool> {
        let b = self.base as usize;
        let mut seen = vec![false; b];
        let mut stack: Vec<usize> = self.start.iter().map(|&d| d as usize).collect();
        for &d in &self.start {
            seen[d as usize] = true;
        }
        while let Some(i) = stack.pop() {
            for j in 0..b {
                if self.bits[i * b + j] && !seen[j] {
                    seen[j] = true;
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Requires a cycle inside the reachable digit set: peel digits with no
    /// outgoing edge until a fixpoint; a nonempty remainder is a cycle.
    fn check_cycle(&self) -> Result<()> {
        let b = self.base as usize;
        let mut alive = self.reachable();
        loop {
            let mut removed = false;
            for i in 0..b {
                if !alive[i] {
                    continue;
                }
                let has_out = (0..b).any(|j| alive[j] && self.bits[i * b + j]);
                if !has_out {
                    alive[i] = false;
                    removed = true;
                }
            }
            if !removed {
                break;
            }
        }
        if alive.iter().any(|&a| a) {
            Ok(())
        } else {
            Err(contract(
                "no digit cycle is reachable from the start digits; \
                 admissible strings of every length must exist",
            ))
        }
    }
}

fn normalize_digits(base: u32, mut digits: Vec<u32>) -> Result<Vec<u32>> {
    digits.sort_unstable();
    digits.dedup();
    if digits.is_empty() {
        return Err(contract("digit set must be non-empty"));
    }
    if let Some(&d) = digits.iter().find(|&&d| d >= base) {
        return Err(contract(format!("digit {d} outside base {base}")));
    }
    Ok(digits)
}

/// Level counts (k_n) and generators (d_n) of a generalized IP set. The
/// growth condition d_{n+1} > sum_{i<=n} k_i d_i is checked eagerly over the
/// whole provided prefix; it guarantees distinct digit vectors give distinct
/// sums.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IpSpec {
    k_seq: Vec<u64>,
    d_seq: Vec<i64>,
}

impl IpSpec {
    pub fn new(k_seq: Vec<u64>, d_seq: Vec<i64>) -> Result<Self> {
        if k_seq.is_empty() || k_seq.len() != d_seq.len() {
            return Err(contract(format!(
                "need equally many level counts and generators, got {} and {}",
                k_seq.len(),
                d_seq.len()
            )));
        }
        if let Some(i) = k_seq.iter().position(|&k| k == 0) {
            return Err(contract(format!("level count k_{} must be positive", i + 1)));
        }
        if let Some(i) = d_seq.iter().position(|&d| d <= 0) {
            return Err(contract(format!("generator d_{} must be positive", i + 1)));
        }
        let mut partial: u128 = 0;
        for n in 0..k_seq.len() {
            if n > 0 && (d_seq[n] as u128) <= partial {
                return Err(contract(format!(
                    "growth condition fails at index {}: d_{} = {} but sum of k_i d_i so far is {}",
                    n + 1,
                    n + 1,
                    d_seq[n],
                    partial
                )));
            }
            partial = partial
                .checked_add(k_seq[n] as u128 * d_seq[n] as u128)
                .ok_or_else(|| range("k_i d_i partial sums overflow"))?;
        }
        Ok(Self { k_seq, d_seq })
    }

    pub fn len(&self) -> usize {
        self.k_seq.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn k_seq(&self) -> &[u64] {
        &self.k_seq
    }

    pub fn d_seq(&self) -> &[i64] {
        &self.d_seq
    }
}

/// {floor f(n) : n_lo <= n < n_hi} for a rational polynomial f, evaluated
/// exactly. `coeffs[i]` is the coefficient of x^i.
pub fn polynomial_image(coeffs: &[BigRational], n_lo: i64, n_hi: i64) -> Result<LatticeSet> {
    let degree = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
    if degree < 1 {
        return Err(contract("polynomial degree must be >= 1"));
    }
    if n_lo >= n_hi {
        return Err(contract(format!("empty evaluation range [{n_lo}, {n_hi})")));
    }
    let count = (n_hi as i128 - n_lo as i128) as u128;
    if count > DEFAULT_SIZE_CAP as u128 {
        return Err(resource(format!("{count} evaluations exceed cap {DEFAULT_SIZE_CAP}")));
    }
    let mut values = Vec::with_capacity(count as usize);
    for n in n_lo..n_hi {
        let x = BigRational::from_integer(BigInt::from(n));
        let mut acc = BigRational::zero();
        for c in coeffs.iter().rev() {
            acc = acc * &x + c;
        }
        let floored = acc.floor().to_integer();
        let v = floored.to_i64().ok_or_else(|| {
            range(format!("floor f({n}) = {floored} leaves the signed 64-bit range"))
        })?;
        values.push(v);
    }
    Ok(LatticeSet::from_values(values)
        .with_provenance(format!("polynomial_image(deg={degree}, n in [{n_lo},{n_hi}))")))
}

/// {floor n^beta : 1 <= n < n_hi} via exact integer roots: for beta = p/q,
/// floor n^{p/q} = floor (n^p)^{1/q}.
pub fn power_sequence(beta: &BigRational, n_hi: i64) -> Result<LatticeSet> {
    if !beta.is_positive() {
        return Err(contract(format!("exponent must be positive, got {beta}")));
    }
    if n_hi < 1 {
        return Err(contract("n_hi must be >= 1"));
    }
    let p = beta
        .numer()
        .to_u32()
        .ok_or_else(|| range(format!("exponent numerator {} too large", beta.numer())))?;
    let q = beta
        .denom()
        .to_u32()
        .ok_or_else(|| range(format!("exponent denominator {} too large", beta.denom())))?;
    if n_hi as u128 > DEFAULT_SIZE_CAP as u128 {
        return Err(resource(format!("{n_hi} evaluations exceed cap {DEFAULT_SIZE_CAP}")));
    }
    let mut values = Vec::with_capacity((n_hi - 1).max(0) as usize);
    for n in 1..n_hi {
        let root = BigInt::from(n).pow(p).nth_root(q);
        let v = root.to_i64().ok_or_else(|| {
            range(format!("floor {n}^({beta}) = {root} leaves the signed 64-bit range"))
        })?;
        values.push(v);
    }
    Ok(LatticeSet::from_values(values)
        .with_provenance(format!("power_sequence(beta={beta}, n in [1,{n_hi}))")))
}

/// {floor r^n : n >= 1, r^n <= limit} for rational r > 1, powers kept exact.
pub fn geometric(r: &BigRational, limit: i64) -> Result<LatticeSet> {
    if *r <= BigRational::one() {
        return Err(contract(format!("ratio must exceed 1, got {r}")));
    }
    let bound = BigRational::from_integer(BigInt::from(limit));
    let mut values = Vec::new();
    let mut cur = r.clone();
    let mut terms = 0u64;
    while cur <= bound {
        terms += 1;
        if terms > GEOMETRIC_MAX_TERMS {
            return Err(resource(format!(
                "geometric sequence exceeds {GEOMETRIC_MAX_TERMS} terms below {limit}; \
                 the ratio is too close to 1"
            )));
        }
        let floored = cur.floor().to_integer();
        values.push(floored.to_i64().expect("floor r^n <= limit fits i64"));
        cur *= r;
    }
    Ok(LatticeSet::from_values(values)
        .with_provenance(format!("geometric(r={r}, limit={limit})")))
}

/// All primes below `limit`, by a bit-packed sieve.
pub fn primes(limit: u64) -> Result<LatticeSet> {
    if limit < 2 {
        return Err(contract("prime sieve needs limit >= 2"));
    }
    if limit > 1 << 31 {
        return Err(resource(format!("sieve limit {limit} exceeds cap {}", 1u64 << 31)));
    }
    let n = limit as usize;
    let mut composite = vec![0u64; n / 64 + 1];
    let is_set = |w: &[u64], i: usize| w[i / 64] >> (i % 64) & 1 == 1;
    let mut p = 2usize;
    while p * p < n {
        if !is_set(&composite, p) {
            let mut m = p * p;
            while m < n {
                composite[m / 64] |= 1 << (m % 64);
                m += p;
            }
        }
        p += 1;
    }
    let values: Vec<i64> = (2..n).filter(|&i| !is_set(&composite, i)).map(|i| i as i64).collect();
    Ok(LatticeSet::from_values(values).with_provenance(format!("primes(limit={limit})")))
}

/// Values d_0 b^0 + ... + d_{n-1} b^{n-1} over admissible digit strings of
/// length 1..=depth: d_0 a start digit, every consecutive pair an allowed
/// transition. Digit d_0 is the least significant.
pub fn integer_cantor(tm: &TransitionMatrix, depth: u32) -> Result<LatticeSet> {
    if depth < 1 {
        return Err(contract("depth must be >= 1"));
    }
    let b = tm.base();
    if b < 2 {
        return Err(contract("digit expansion needs base >= 2"));
    }
    let mut top = 1i128;
    for _ in 0..depth {
        top = top
            .checked_mul(b as i128)
            .filter(|&v| v <= i64::MAX as i128)
            .ok_or_else(|| range(format!("b^depth = {b}^{depth} leaves the signed 64-bit range")))?;
    }
    // String-count precheck so huge enumerations fail before allocating.
    let bu = b as usize;
    let mut counts = vec![0u128; bu];
    for &d in tm.start_digits() {
        counts[d as usize] = 1;
    }
    let mut total: u128 = counts.iter().sum();
    for _ in 1..depth {
        let mut next = vec![0u128; bu];
        for (i, &c) in counts.iter().enumerate() {
            if c == 0 {
                continue;
            }
            for (j, slot) in next.iter_mut().enumerate() {
                if tm.entry(i as u32, j as u32) {
                    *slot = slot.saturating_add(c);
                }
            }
        }
        counts = next;
        total = total.saturating_add(counts.iter().sum::<u128>());
        if total > DEFAULT_SIZE_CAP as u128 {
            return Err(resource(format!(
                "about {total} digit strings at depth {depth} exceed cap {DEFAULT_SIZE_CAP}"
            )));
        }
    }
    let powers: Vec<i64> = (0..depth).map(|i| (b as i128).pow(i) as i64).collect();
    let mut values = Vec::with_capacity(total as usize);
    fn extend(
        tm: &TransitionMatrix,
        powers: &[i64],
        depth: u32,
        level: u32,
        last: u32,
        value: i64,
        out: &mut Vec<i64>,
    ) {
        out.push(value);
        if level == depth {
            return;
        }
        for j in 0..tm.base() {
            if tm.entry(last, j) {
                extend(tm, powers, depth, level + 1, j, value + j as i64 * powers[level as usize], out);
            }
        }
    }
    for &d0 in tm.start_digits() {
        extend(tm, &powers, depth, 1, d0, d0 as i64, &mut values);
    }
    Ok(LatticeSet::from_values(values)
        .with_provenance(format!("integer_cantor(base={b}, depth={depth})")))
}

/// {sum x_i d_i : 1 <= n <= depth, 0 <= x_i < k_i}. The growth condition
/// makes every digit vector produce a distinct value and makes the
/// most-significant-level-first enumeration emit values in sorted order, so
/// no sort pass is needed.
pub fn generalized_ip(spec: &IpSpec, depth: usize) -> Result<LatticeSet> {
    if depth < 1 || depth > spec.len() {
        return Err(contract(format!(
            "depth {depth} outside the provided prefix length {}",
            spec.len()
        )));
    }
    let ks = &spec.k_seq()[..depth];
    let ds = &spec.d_seq()[..depth];
    let mut card: u128 = 1;
    for &k in ks {
        card = card
            .checked_mul(k as u128)
            .ok_or_else(|| resource("IP cardinality overflows"))?;
        if card > IP_SIZE_CAP as u128 {
            return Err(resource(format!("IP cardinality {card} exceeds cap {IP_SIZE_CAP}")));
        }
    }
    let max_value: i128 = ks
        .iter()
        .zip(ds)
        .map(|(&k, &d)| (k as i128 - 1) * d as i128)
        .sum();
    if max_value > i64::MAX as i128 {
        return Err(range(format!("largest sum {max_value} leaves the signed 64-bit range")));
    }
    // Sums with fewer than `depth` levels equal depth-level sums whose top
    // digits are zero, so enumerating the full product covers the union.
    let mut values = Vec::with_capacity(card as usize);
    fn emit(ks: &[u64], ds: &[i64], level: usize, acc: i64, out: &mut Vec<i64>) {
        if level == 0 {
            out.push(acc);
            return;
        }
        let i = level - 1;
        for x in 0..ks[i] {
            emit(ks, ds, i, acc + x as i64 * ds[i], out);
        }
    }
    emit(ks, ds, depth, 0, &mut values);
    let set = LatticeSet::from_sorted_flat(1, values)
        .map_err(|e| Error::Contract(format!("IP enumeration lost sortedness: {e}")))?;
    Ok(set.with_provenance(format!("generalized_ip(depth={depth})")))
}

/// Spectral radius of the transition matrix restricted to digits reachable
/// from the start set, by power iteration on M + I (the shift separates the
/// dominant eigenvalue from rotated ones of equal modulus).
pub fn perron_frobenius(tm: &TransitionMatrix) -> Result<f64> {
    let reach = tm.reachable();
    let idx: Vec<u32> = (0..tm.base()).filter(|&i| reach[i as usize]).collect();
    let n = idx.len();
    let mut v = vec![1.0 / n as f64; n];
    let mut prev = f64::NAN;
    let mut stable = 0u32;
    for it in 1..=PF_MAX_ITERS {
        let mut w = v.clone(); // the +I term
        for (a, &i) in idx.iter().enumerate() {
            for (bb, &j) in idx.iter().enumerate() {
                if tm.entry(i, j) {
                    w[bb] += v[a];
                }
            }
        }
        let lambda: f64 = w.iter().sum();
        for x in &mut w {
            *x /= lambda;
        }
        v = w;
        if (lambda - prev).abs() <= PF_TOL * lambda.max(1.0) {
            stable += 1;
            if stable >= 3 {
                return Ok(lambda - 1.0);
            }
        } else {
            stable = 0;
        }
        if it == PF_MAX_ITERS {
            return Err(Error::Numeric(format!(
                "spectral radius iteration did not converge in {PF_MAX_ITERS} steps; \
                 last estimates {prev} and {lambda}"
            )));
        }
        prev = lambda;
    }
    unreachable!("loop returns or errors")
}

/// Serializable description of one generated set; what the CLI echoes into
/// provenance headers and what experiment configs embed.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorSpec {
    /// floor f(n) for a rational polynomial; coefficients low order first,
    /// written as rational strings like "1/2".
    Polynomial { coeffs: Vec<String>, n_lo: i64, n_hi: i64 },
    /// floor n^beta for rational beta > 0.
    Power { beta: String, n_hi: i64 },
    /// floor r^n for rational r > 1 up to a limit.
    Geometric { ratio: String, limit: i64 },
    /// Primes below the limit.
    Primes { limit: u64 },
    /// Digit-restricted base-b expansion values. Either explicit 0/1 `rows`
    /// or a fully connected `digits` subset (default: all digits) thinned by
    /// `forbid` pairs; `start` is the allowed least-significant digits.
    Cantor {
        base: u32,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        rows: Option<Vec<Vec<u8>>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        digits: Option<Vec<u32>>,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        forbid: Vec<(u32, u32)>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        start: Option<Vec<u32>>,
        depth: u32,
    },
    /// Generalized IP sums over the given level counts and generators.
    Ip { ks: Vec<u64>, ds: Vec<i64>, depth: usize },
}

impl GeneratorSpec {
    /// Materializes the set; provenance is the spec itself as JSON.
    pub fn build(&self) -> Result<LatticeSet> {
        let tag = serde_json::to_string(self).expect("spec serializes");
        let set = match self {
            GeneratorSpec::Polynomial { coeffs, n_lo, n_hi } => {
                let coeffs = parse_rationals(coeffs)?;
                polynomial_image(&coeffs, *n_lo, *n_hi)?
            }
            GeneratorSpec::Power { beta, n_hi } => power_sequence(&parse_rational(beta)?, *n_hi)?,
            GeneratorSpec::Geometric { ratio, limit } => geometric(&parse_rational(ratio)?, *limit)?,
            GeneratorSpec::Primes { limit } => primes(*limit)?,
            GeneratorSpec::Cantor { depth, .. } => integer_cantor(&self.matrix()?, *depth)?,
            GeneratorSpec::Ip { ks, ds, depth } => {
                generalized_ip(&IpSpec::new(ks.clone(), ds.clone())?, *depth)?
            }
        };
        Ok(set.with_provenance(tag))
    }

    /// The transition matrix of a Cantor spec.
    fn matrix(&self) -> Result<TransitionMatrix> {
        let GeneratorSpec::Cantor { base, rows, digits, forbid, start, .. } = self else {
            return Err(contract("not a digit-expansion spec"));
        };
        let mut tm = match (rows, digits) {
            (Some(rows), _) => TransitionMatrix::new(*base, rows, start.clone())?,
            (None, Some(digits)) => TransitionMatrix::on_digits(*base, digits)?,
            (None, None) => TransitionMatrix::full(*base)?,
        };
        if rows.is_none() {
            for &(from, to) in forbid {
                tm = tm.forbid(from, to)?;
            }
            if let Some(start) = start {
                tm = tm.with_start(start.clone())?;
            }
        }
        Ok(tm)
    }
}

fn parse_rationals(strs: &[String]) -> Result<Vec<BigRational>> {
    strs.iter().map(|s| parse_rational(s)).collect()
}

/// Closed-form dimension of a generated family: 1/deg for polynomial images,
/// min(1/beta, 1) for powers, 0 for geometric, 1 for primes,
/// log lambda / log b for digit expansions, and for IP sets the largest
/// prefix value of log(k_1...k_n)/log(k_n d_n).
pub fn expected_dimension(spec: &GeneratorSpec) -> Result<f64> {
    match spec {
        GeneratorSpec::Polynomial { coeffs, .. } => {
            let coeffs = parse_rationals(coeffs)?;
            let degree = coeffs.iter().rposition(|c| !c.is_zero()).unwrap_or(0);
            if degree < 1 {
                return Err(contract("polynomial degree must be >= 1"));
            }
            Ok(1.0 / degree as f64)
        }
        GeneratorSpec::Power { beta, .. } => {
            let beta = parse_rational(beta)?;
            if !beta.is_positive() {
                return Err(contract("exponent must be positive"));
            }
            let inv = beta.denom().to_f64().unwrap_or(f64::INFINITY)
                / beta.numer().to_f64().unwrap_or(f64::INFINITY);
            Ok(inv.min(1.0))
        }
        GeneratorSpec::Geometric { .. } => Ok(0.0),
        GeneratorSpec::Primes { .. } => Ok(1.0),
        GeneratorSpec::Cantor { base, .. } => {
            if *base < 2 {
                return Err(contract("digit expansion needs base >= 2"));
            }
            let lambda = perron_frobenius(&spec.matrix()?)?;
            Ok(lambda.ln() / (*base as f64).ln())
        }
        GeneratorSpec::Ip { ks, ds, .. } => {
            IpSpec::new(ks.clone(), ds.clone())?;
            let mut log_count = 0.0f64;
            let mut best: Option<f64> = None;
            for (&k, &d) in ks.iter().zip(ds) {
                log_count += (k as f64).ln();
                let denom = (k as f64 * d as f64).ln();
                if denom > 0.0 {
                    let v = log_count / denom;
                    best = Some(best.map_or(v, |b: f64| b.max(v)));
                }
            }
            best.ok_or_else(|| contract("every level of the IP spec is degenerate"))
        }
    }
}
