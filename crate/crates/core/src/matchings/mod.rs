//! Pair matchings of trace cycles and their exact tuple counts.
//!
//! The normalized moment `M_k` expands as a sum over index cycles
//! `(i_1, ..., i_k)` of `E[b_{psi(i_1,i_2)} ... b_{psi(i_k,i_1)}]`. A pair
//! matching (configuration) partitions the `k = 2m` edges of the cycle into
//! `m` pairs that share a link value.

mod enumerate;
pub mod formulas;

pub use enumerate::{
    adjacent_region_counts, configuration_census, configuration_contribution,
    exact_expected_moment, ConfigurationCensus, ConfigurationReport, OffsetFilter,
    ENUMERATION_LIMIT,
};
pub use formulas::{
    adjacent_lower_value, conjectured_moment, dpt_adjacent_contribution, dpt_adjacent_sum,
    fourth_moment_limit, lower_bound_moment, upper_bound_moment,
};

use serde::{Deserialize, Serialize};

use crate::ensemble::LinkFunction;
use crate::error::{Error, Result};

/// Largest `m` accepted by [`enumerate_pair_matchings`].
pub const MAX_PAIRS: usize = 6;

/// `r!!`, with `0!! = (-1)!! = 1`.
pub fn double_factorial(r: i64) -> u128 {
    let mut acc: u128 = 1;
    let mut x = r;
    while x > 1 {
        acc *= x as u128;
        x -= 2;
    }
    acc
}

/// A perfect matching of the positions `1..=2m` into unordered pairs.
///
/// Pairs are stored as `(a, b)` with `a < b`, sorted by `a`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<(usize, usize)>", into = "Vec<(usize, usize)>")]
pub struct PairMatching {
    pairs: Vec<(usize, usize)>,
}

impl PairMatching {
    pub fn new(pairs: Vec<(usize, usize)>) -> Result<Self> {
        let mut pairs: Vec<(usize, usize)> = pairs
            .into_iter()
            .map(|(a, b)| if a < b { (a, b) } else { (b, a) })
            .collect();
        pairs.sort_unstable();
        let size = 2 * pairs.len();
        let mut seen = vec![false; size + 1];
        for &(a, b) in &pairs {
            for x in [a, b] {
                if x == 0 || x > size || seen[x] {
                    return Err(Error::InvalidArgument(format!(
                        "pairs {pairs:?} do not cover 1..={size} exactly once"
                    )));
                }
                seen[x] = true;
            }
        }
        Ok(Self { pairs })
    }

    /// The fully adjacent matching `(1,2)(3,4)...(2m-1,2m)`.
    pub fn adjacent(m: usize) -> Self {
        Self {
            pairs: (0..m).map(|j| (2 * j + 1, 2 * j + 2)).collect(),
        }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    /// Number of pairs.
    pub fn m(&self) -> usize {
        self.pairs.len()
    }

    pub fn size(&self) -> usize {
        2 * self.pairs.len()
    }

    /// Zero-based partner table: `partner[t]` is the edge paired with edge `t`.
    pub fn partners(&self) -> Vec<usize> {
        let mut out = vec![0; self.size()];
        for &(a, b) in &self.pairs {
            out[a - 1] = b - 1;
            out[b - 1] = a - 1;
        }
        out
    }

    /// True when every pair joins cyclically consecutive positions.
    pub fn is_fully_adjacent(&self) -> bool {
        let size = self.size();
        self.pairs
            .iter()
            .all(|&(a, b)| b == a + 1 || (a == 1 && b == size))
    }

    /// Compact label such as `(1,2)(3,4)`.
    pub fn label(&self) -> String {
        self.pairs
            .iter()
            .map(|(a, b)| format!("({a},{b})"))
            .collect()
    }
}

impl TryFrom<Vec<(usize, usize)>> for PairMatching {
    type Error = Error;
    fn try_from(pairs: Vec<(usize, usize)>) -> Result<Self> {
        Self::new(pairs)
    }
}

impl From<PairMatching> for Vec<(usize, usize)> {
    fn from(m: PairMatching) -> Self {
        m.pairs
    }
}

/// All `(2m-1)!!` matchings of `size = 2m` positions, smallest unpaired
/// position first, partners in increasing order.
pub fn enumerate_pair_matchings(size: usize) -> Result<Vec<PairMatching>> {
    if !size.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!(
            "cannot match {size} positions in pairs"
        )));
    }
    if size / 2 > MAX_PAIRS {
        return Err(Error::Guard {
            what: format!("enumerating matchings of {size} positions"),
            cost: double_factorial(size as i64 - 1) as f64,
            limit: double_factorial(2 * MAX_PAIRS as i64 - 1) as f64,
        });
    }
    let mut out = Vec::new();
    let mut used = vec![false; size + 1];
    let mut current = Vec::with_capacity(size / 2);
    fill_matchings(size, &mut used, &mut current, &mut out);
    Ok(out)
}

fn fill_matchings(
    size: usize,
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    out: &mut Vec<PairMatching>,
) {
    let Some(first) = (1..=size).find(|&x| !used[x]) else {
        out.push(PairMatching {
            pairs: current.clone(),
        });
        return;
    };
    used[first] = true;
    for second in first + 1..=size {
        if used[second] {
            continue;
        }
        used[second] = true;
        current.push((first, second));
        fill_matchings(size, used, current, out);
        current.pop();
        used[second] = false;
    }
    used[first] = false;
}

/// Constants `C` for which a diagonal with signed offset `delta` can be
/// matched with the negative-sign relation `delta' = -delta + C`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConstantSet {
    pub delta: i64,
    pub constants: Vec<i64>,
}

impl ConstantSet {
    pub fn contains(&self, c: i64) -> bool {
        self.constants.binary_search(&c).is_ok()
    }
}

/// Enumerates every signed offset `delta'` in `[-(N-1), N-1]` carrying the
/// same entry as `delta` and returns the sorted set of `delta' + delta`.
pub fn constant_set(delta: i64, dim: usize, degree: u32) -> Result<ConstantSet> {
    let link = LinkFunction::new(degree, dim)?;
    let reach = dim as i64 - 1;
    if delta.abs() > reach {
        return Err(Error::InvalidArgument(format!(
            "offset {delta} exceeds N - 1 = {reach}"
        )));
    }
    let target = link.offset_index(delta);
    let mut constants: Vec<i64> = (-reach..=reach)
        .filter(|&d| link.offset_index(d) == target)
        .map(|d| d + delta)
        .collect();
    constants.sort_unstable();
    constants.dedup();
    Ok(ConstantSet { delta, constants })
}

/// Sign of the relation between two equal-link diagonals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairSign {
    /// `delta_q = -delta_l + C`
    Negative,
    /// `delta_q = +delta_l + C`
    Positive,
}

/// Resolves the sign of the relation between signed offsets `a` and `b`
/// that share a link value.
///
/// Equal link values arise in exactly two ways: `|b| = |a| + jP` (same
/// residue mod `P`) or `|b| = -|a| + jP - 1` (mirrored residue). Breaking the
/// absolute values gives `b = s * a + C` with `s = sgn(a) sgn(b)` in the
/// first case and `s = -sgn(a) sgn(b)` in the second. A zero offset admits
/// either sign and is classified negative.
pub fn pair_sign(link: &LinkFunction, a: i64, b: i64) -> PairSign {
    if a == 0 || b == 0 {
        return PairSign::Negative;
    }
    let p = link.period() as u64;
    let same_residue = a.unsigned_abs() % p == b.unsigned_abs() % p;
    let same_direction = (a > 0) == (b > 0);
    if same_residue != same_direction {
        PairSign::Negative
    } else {
        PairSign::Positive
    }
}
