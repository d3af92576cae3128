//! Code-level verification: Hermitian self-duality, weight distributions,
//! minimum distance and the α coefficient of the extremal weight
//! enumerators.
//!
//! Weights are always measured on the quaternary image (see
//! [`QuaternaryImage`]), so over GF(4)+uGF(4) they are Lee weights.

use std::fmt;

use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::generator::GeneratorMatrix;
use crate::graymap::QuaternaryImage;
use crate::packed::{PackedF4, MAX_LEN};
use crate::ring::{HermitianRing, F4};

/// Default exhaustive budget: `4^14` messages.
pub const DEFAULT_BUDGET: u128 = 1 << 28;
/// Budget under `--extended`: `4^16` messages.
pub const EXTENDED_BUDGET: u128 = 1 << 32;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodeError {
    #[error("generator matrix is not in standard form (I | X)")]
    NotStandardForm,
    #[error("exhaustive enumeration of 4^{k} messages exceeds the budget of {budget}")]
    BudgetExceeded { k: usize, budget: u128 },
    #[error("no weight enumerator is known for length {0}; pass the target weight explicitly")]
    UnknownEnumeratorLength(usize),
    #[error("code length {0} exceeds the packed limit of 64")]
    TooLong(usize),
    #[error("generator rows are dependent: {rows} rows, rank {rank}")]
    RankDeficient { rows: usize, rank: usize },
    #[error("the code has no nonzero codewords")]
    Empty,
}

/// True iff the standard-form generator defines a Hermitian self-dual code:
/// length `2k` and all rows pairwise (and self-) orthogonal. A free code
/// of rank `n/2` that is self-orthogonal is self-dual.
pub fn verify_hermitian_self_dual<R: HermitianRing>(g: &GeneratorMatrix<R>) -> Result<bool, CodeError> {
    if !g.is_standard_form() {
        return Err(CodeError::NotStandardForm);
    }
    Ok(g.n() == 2 * g.k() && g.rows_self_orthogonal())
}

#[derive(Clone, PartialEq, Eq)]
pub struct WeightDistribution {
    length: usize,
    counts: Vec<u64>,
    cutoff: Option<usize>,
}

impl WeightDistribution {
    fn new(length: usize, mut counts: Vec<u64>, cutoff: Option<usize>) -> Self {
        let cutoff = cutoff.filter(|&c| c < length);
        counts.resize(length + 1, 0);
        if let Some(c) = cutoff {
            counts[c + 1..].fill(0);
        }
        WeightDistribution { length, counts, cutoff }
    }

    pub fn length(&self) -> usize {
        self.length
    }

    /// `A_w`. Zero above the cutoff of a truncated distribution.
    pub fn count(&self, w: usize) -> u64 {
        self.counts.get(w).copied().unwrap_or(0)
    }

    pub fn cutoff(&self) -> Option<usize> {
        self.cutoff
    }

    pub fn is_complete(&self) -> bool {
        self.cutoff.is_none()
    }

    pub fn total(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128).sum()
    }

    /// `(w, A_w)` for every `A_w > 0`, ascending.
    pub fn iter(&self) -> impl Iterator<Item = (usize, u64)> + '_ {
        self.counts.iter().copied().enumerate().filter(|&(_, c)| c > 0)
    }

    pub fn min_nonzero_weight(&self) -> Option<usize> {
        self.iter().map(|(w, _)| w).find(|&w| w > 0)
    }

    pub fn nonzero_weights_even(&self) -> bool {
        self.iter().all(|(w, _)| w % 2 == 0)
    }
}

impl fmt::Display for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (w, c) in self.iter() {
            if !first {
                writeln!(f)?;
            }
            first = false;
            write!(f, "{w}:{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for WeightDistribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pairs: Vec<String> = self.iter().map(|(w, c)| format!("{w}:{c}")).collect();
        write!(f, "WeightDistribution(n={}, cutoff={:?}, {})", self.length, self.cutoff, pairs.join(" "))
    }
}

/// A full-rank GF(4) code with bit-sliced rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PackedCode {
    len: usize,
    rows: Vec<PackedF4>,
}

impl PackedCode {
    pub fn from_rows(len: usize, rows: &[Vec<F4>]) -> Result<Self, CodeError> {
        if len > MAX_LEN {
            return Err(CodeError::TooLong(len));
        }
        let rows: Vec<PackedF4> = rows.iter().map(|r| PackedF4::from_slice(r)).collect();
        let order: Vec<usize> = (0..len).collect();
        let (_, pivots) = reduce(&rows, &order);
        if pivots.len() < rows.len() {
            return Err(CodeError::RankDeficient {
                rows: rows.len(),
                rank: pivots.len(),
            });
        }
        Ok(PackedCode { len, rows })
    }

    /// The quaternary image of the code generated by `g`.
    pub fn image_of<R: QuaternaryImage>(g: &GeneratorMatrix<R>) -> Result<Self, CodeError> {
        let rows = R::image_rows(g);
        let len = rows.first().map_or(0, Vec::len);
        Self::from_rows(len, &rows)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Dimension over GF(4).
    pub fn k(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[PackedF4] {
        &self.rows
    }
}

fn f4_inv(x: F4) -> F4 {
    x.inv().expect("nonzero")
}

/// Gauss-Jordan elimination visiting columns in `order`. Returns the reduced
/// rows, reordered so row `i` has its pivot at `pivots[i]` (a unit there and
/// zero in every other pivot column), followed by any zero rows.
fn reduce(rows: &[PackedF4], order: &[usize]) -> (Vec<PackedF4>, Vec<usize>) {
    let mut rows = rows.to_vec();
    let mut pivots = Vec::new();
    for &col in order {
        let r0 = pivots.len();
        if r0 == rows.len() {
            break;
        }
        let Some(p) = (r0..rows.len()).find(|&r| !rows[r].get(col).is_zero()) else {
            continue;
        };
        rows.swap(r0, p);
        let pivot = rows[r0].scale(f4_inv(rows[r0].get(col)));
        rows[r0] = pivot;
        for (r, row) in rows.iter_mut().enumerate() {
            if r != r0 {
                let c = row.get(col);
                if !c.is_zero() {
                    *row += pivot.scale(c);
                }
            }
        }
        pivots.push(col);
    }
    (rows, pivots)
}

/// Exhaustive weight distribution of the quaternary image of `g`.
pub fn weight_distribution_exhaustive<R: QuaternaryImage>(
    g: &GeneratorMatrix<R>,
    cutoff: Option<usize>,
    budget: u128,
) -> Result<WeightDistribution, CodeError> {
    enumerate_exhaustive(&PackedCode::image_of(g)?, cutoff, budget, None)
}

fn messages(k: usize) -> Option<u128> {
    (2 * k < 128).then(|| 1u128 << (2 * k))
}

/// Walk all `4^k` messages. The top `prefix_digits` message symbols are
/// fixed per partition; inside a partition the remaining symbols follow a
/// modular 4-ary Gray code, so each step adds one scaled row. The result
/// does not depend on `prefix_digits`.
pub fn enumerate_exhaustive(
    code: &PackedCode,
    cutoff: Option<usize>,
    budget: u128,
    prefix_digits: Option<usize>,
) -> Result<WeightDistribution, CodeError> {
    let k = code.k();
    match messages(k) {
        Some(m) if m <= budget => {}
        _ => return Err(CodeError::BudgetExceeded { k, budget }),
    }
    let t = prefix_digits.unwrap_or(4).min(k);
    let low = k - t;
    let rows = code.rows();
    // Cyclic order 0 → 1 → ω → ω² → 0: the step from position v adds
    // 1·row for even v and ω²·row for odd v.
    let steps: Vec<[PackedF4; 2]> = rows[..low]
        .iter()
        .map(|&r| [r, r.times_omega().times_omega()])
        .collect();
    let len = code.len();
    let counts = (0..1u64 << (2 * t))
        .into_par_iter()
        .map(|prefix| {
            let mut acc = PackedF4::ZERO;
            for (i, &r) in rows[low..].iter().enumerate() {
                acc += r.scale(F4::from_index(((prefix >> (2 * i)) & 3) as u8));
            }
            let mut counts = vec![0u64; len + 1];
            counts[acc.weight() as usize] += 1;
            let mut state = vec![0u8; low];
            let total = 1u64 << (2 * low);
            for i in 1..total {
                let p = (i.trailing_zeros() / 2) as usize;
                let v = state[p];
                acc += steps[p][(v & 1) as usize];
                state[p] = (v + 1) & 3;
                counts[acc.weight() as usize] += 1;
            }
            counts
        })
        .reduce(
            || vec![0u64; len + 1],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(WeightDistribution::new(len, counts, cutoff))
}

/// One information set: a generator that is systematic on `mask`, and the
/// number of its columns not used by any earlier set.
#[derive(Clone, Debug)]
pub struct InfoSet {
    pub rows: Vec<PackedF4>,
    pub mask: u64,
    pub fresh: usize,
}

/// Greedy information sets: each elimination prefers columns not covered by
/// earlier sets, lowest index first, then falls back to covered columns.
/// Stops once no uncovered column adds rank.
pub fn information_sets(code: &PackedCode) -> Vec<InfoSet> {
    let len = code.len();
    let mut used = 0u64;
    let mut sets = Vec::new();
    loop {
        let fresh_cols: Vec<usize> = (0..len).filter(|&c| used >> c & 1 == 0).collect();
        if fresh_cols.is_empty() {
            break;
        }
        let mut order = fresh_cols.clone();
        order.extend((0..len).filter(|&c| used >> c & 1 == 1));
        let (rows, pivots) = reduce(code.rows(), &order);
        let fresh = pivots.iter().filter(|&&c| used >> c & 1 == 0).count();
        if fresh == 0 {
            break;
        }
        let mask = pivots.iter().fold(0u64, |m, &c| m | 1 << c);
        used |= mask;
        sets.push(InfoSet { rows, mask, fresh });
    }
    sets
}

/// Lower bound on the weight of any codeword not produced by messages of
/// weight `≤ r` in sets `0..=j` and `≤ r-1` in the later sets.
fn bz_lower_bound(sets: &[InfoSet], k: usize, r: usize, j: usize) -> usize {
    sets.iter()
        .enumerate()
        .map(|(i, s)| {
            let level = if i <= j { r + 1 } else { r };
            (level + s.fresh).saturating_sub(k)
        })
        .sum()
}

/// Visit `c·Σ` over all messages of weight exactly `r` whose first nonzero
/// coefficient is 1 (one representative per scalar class). Runs the
/// top-level row choices in parallel and folds per-task results.
fn fold_level<T, F, M>(rows: &[PackedF4], r: usize, init: T, visit: F, merge: M) -> T
where
    T: Clone + Send + Sync,
    F: Fn(&mut T, PackedF4) + Sync,
    M: Fn(T, T) -> T + Sync + Send,
{
    let k = rows.len();
    if r == 0 || r > k {
        return init;
    }
    let mults: Vec<[PackedF4; 3]> = rows
        .iter()
        .map(|&x| {
            let w = x.times_omega();
            [x, w, w.times_omega()]
        })
        .collect();
    (0..=k - r)
        .into_par_iter()
        .map(|i0| {
            let mut acc = init.clone();
            dfs(&mults, i0 + 1, r - 1, rows[i0], &mut |v| visit(&mut acc, v));
            acc
        })
        .reduce(|| init.clone(), &merge)
}

fn dfs<F: FnMut(PackedF4)>(mults: &[[PackedF4; 3]], start: usize, left: usize, acc: PackedF4, f: &mut F) {
    if left == 0 {
        f(acc);
        return;
    }
    for i in start..=mults.len() - left {
        for &m in &mults[i] {
            dfs(mults, i + 1, left - 1, acc + m, f);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DistanceBounds {
    pub lower: usize,
    pub upper: usize,
}

impl DistanceBounds {
    pub fn exact(&self) -> Option<usize> {
        (self.lower >= self.upper).then_some(self.upper)
    }
}

/// Brouwer–Zimmermann style bound-and-enumerate. With `reject_below = Some(t)`
/// it returns as soon as a codeword lighter than `t` is seen.
pub fn info_set_distance(code: &PackedCode, reject_below: Option<usize>) -> Result<DistanceBounds, CodeError> {
    let k = code.k();
    if k == 0 {
        return Err(CodeError::Empty);
    }
    let sets = information_sets(code);
    let mut upper = usize::MAX;
    for r in 1..=k {
        for (j, s) in sets.iter().enumerate() {
            let lightest = fold_level(
                &s.rows,
                r,
                usize::MAX,
                |m, v| *m = (*m).min(v.weight() as usize),
                |a, b| a.min(b),
            );
            upper = upper.min(lightest);
            if reject_below.is_some_and(|t| upper < t) {
                return Ok(DistanceBounds { lower: 0, upper });
            }
            let lower = if r == k { upper } else { bz_lower_bound(&sets, k, r, j) };
            if lower >= upper {
                return Ok(DistanceBounds { lower: upper, upper });
            }
        }
    }
    unreachable!("all messages of the first set are enumerated at r = k")
}

/// `A_w` for `w ≤ cutoff`, found through information sets rather than
/// exhaustive enumeration.
///
/// `R` is the least level at which the Brouwer–Zimmermann bound exceeds
/// `cutoff`; every codeword of weight `≤ cutoff` then has a message of
/// weight `≤ R` in some set. A codeword met in set `j` is counted only if
/// it is not reachable within `R` in an earlier set, which is decided from
/// its weight on that set's columns.
pub fn truncated_distribution_info_set(code: &PackedCode, cutoff: usize) -> Result<WeightDistribution, CodeError> {
    let k = code.k();
    let len = code.len();
    if k == 0 {
        return Err(CodeError::Empty);
    }
    let sets = information_sets(code);
    let level = (1..k).find(|&r| bz_lower_bound(&sets, k, r, sets.len() - 1) > cutoff);
    // Without such a level, the first set alone enumerates the whole code.
    let (level, active) = match level {
        Some(r) => (r, sets.len()),
        None => (k, 1),
    };
    let mut counts = vec![0u64; len + 1];
    counts[0] = 1;
    for j in 0..active {
        let earlier: Vec<u64> = sets[..j].iter().map(|s| s.mask).collect();
        for r in 1..=level {
            let part = fold_level(
                &sets[j].rows,
                r,
                vec![0u64; cutoff + 1],
                |c, v| {
                    let w = v.weight() as usize;
                    if w <= cutoff {
                        let s = v.support();
                        if earlier.iter().all(|&m| (s & m).count_ones() as usize > level) {
                            c[w] += 3;
                        }
                    }
                },
                |mut a, b| {
                    for (x, y) in a.iter_mut().zip(b) {
                        *x += y;
                    }
                    a
                },
            );
            for (w, c) in part.into_iter().enumerate() {
                counts[w] += c;
            }
        }
    }
    Ok(WeightDistribution::new(len, counts, Some(cutoff)))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Exhaustive,
    InfoSet,
}

/// Minimum nonzero weight of the quaternary image of `g`.
pub fn min_distance<R: QuaternaryImage>(g: &GeneratorMatrix<R>, method: Method) -> Result<usize, CodeError> {
    min_distance_packed(&PackedCode::image_of(g)?, method, DEFAULT_BUDGET)
}

pub fn min_distance_packed(code: &PackedCode, method: Method, budget: u128) -> Result<usize, CodeError> {
    match method {
        Method::Exhaustive => enumerate_exhaustive(code, None, budget, None)?
            .min_nonzero_weight()
            .ok_or(CodeError::Empty),
        Method::InfoSet => Ok(info_set_distance(code, None)?.upper),
    }
}

/// `(w*, c0, c1)`: the α term sits at weight `w*` and the next coefficient
/// is `A_{w*+2} = c0 - c1·α`.
pub fn enumerator_identity(length: usize) -> Option<(usize, u64, u64)> {
    match length {
        26 => Some((8, 10725, 5)),
        32 => Some((10, 67704, 7)),
        36 => Some((12, 771120, 12)),
        38 => Some((12, 430236, 9)),
        40 => Some((12, 232560, 6)),
        _ => None,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AlphaMethod {
    /// Exhaustive within the budget, otherwise information sets.
    Auto,
    Exhaustive,
    InfoSet,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphaReport {
    pub weight: usize,
    pub alpha: u64,
    /// `A_{weight+2}`.
    pub next: u64,
    /// Whether `A_{w*+2} = c0 - c1·α` holds, when the length has a known
    /// enumerator.
    pub identity_holds: Option<bool>,
    pub distribution: WeightDistribution,
}

/// α = `A_{w*}` of the quaternary image, computed by truncated enumeration at
/// `w* + 2`.
pub fn alpha_of<R: QuaternaryImage>(
    g: &GeneratorMatrix<R>,
    weight: Option<usize>,
    method: AlphaMethod,
    budget: u128,
) -> Result<AlphaReport, CodeError> {
    alpha_of_packed(&PackedCode::image_of(g)?, weight, method, budget)
}

pub fn alpha_of_packed(
    code: &PackedCode,
    weight: Option<usize>,
    method: AlphaMethod,
    budget: u128,
) -> Result<AlphaReport, CodeError> {
    let identity = enumerator_identity(code.len());
    let w = match (weight, identity) {
        (Some(w), _) => w,
        (None, Some((w, _, _))) => w,
        (None, None) => return Err(CodeError::UnknownEnumeratorLength(code.len())),
    };
    let within_budget = messages(code.k()).is_some_and(|m| m <= budget);
    let dist = match method {
        AlphaMethod::Exhaustive => enumerate_exhaustive(code, Some(w + 2), budget, None)?,
        AlphaMethod::Auto if within_budget => enumerate_exhaustive(code, Some(w + 2), budget, None)?,
        _ => truncated_distribution_info_set(code, w + 2)?,
    };
    let alpha = dist.count(w);
    let next = dist.count(w + 2);
    let identity_holds = identity
        .filter(|&(iw, _, _)| iw == w)
        .map(|(_, c0, c1)| c0.checked_sub(c1 * alpha) == Some(next));
    Ok(AlphaReport {
        weight: w,
        alpha,
        next,
        identity_holds,
        distribution: dist,
    })
}

/// `2⌊n/6⌋ + 2`.
pub fn distance_bound(n: usize) -> usize {
    2 * (n / 6) + 2
}
