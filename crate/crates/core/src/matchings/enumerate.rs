//! Exhaustive enumeration of index cycles.
//!
//! Every count here is an exact integer; parallel partial results are merged
//! by integer addition so totals never depend on the thread schedule.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{enumerate_pair_matchings, pair_sign, PairMatching, PairSign};
use crate::ensemble::{EntryDistribution, LinkFunction};
use crate::error::{Error, Result};

/// Maximum number of leaf tuples an unpruned enumeration may visit.
pub const ENUMERATION_LIMIT: f64 = 1e9;

/// Per-matching enumerations with at most two pairs may run up to this `N`.
const SMALL_MOMENT_MAX_DIM: usize = 96;

/// Longest cycle accepted (multiplicity signatures are packed into bytes).
const MAX_CYCLE: u32 = 24;

fn guard(dim: usize, k: u32, what: impl Into<String>) -> Result<()> {
    let cost = (dim as f64).powi(k as i32);
    if cost > ENUMERATION_LIMIT {
        return Err(Error::Guard {
            what: what.into(),
            cost,
            limit: ENUMERATION_LIMIT,
        });
    }
    Ok(())
}

/// Sorted multiplicities of the values in `vals` (descending).
fn multiplicities(vals: &[u32], scratch: &mut Vec<u32>, out: &mut Vec<u8>) {
    scratch.clear();
    scratch.extend_from_slice(vals);
    scratch.sort_unstable();
    out.clear();
    let mut run = 1u8;
    for w in scratch.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            out.push(run);
            run = 1;
        }
    }
    if !scratch.is_empty() {
        out.push(run);
    }
    out.sort_unstable_by(|a, b| b.cmp(a));
}

type Signatures = BTreeMap<Vec<u8>, u64>;

fn merge_signatures(mut a: Signatures, b: Signatures) -> Signatures {
    for (k, v) in b {
        *a.entry(k).or_insert(0) += v;
    }
    a
}

fn weigh(signatures: &Signatures, distribution: EntryDistribution) -> f64 {
    signatures
        .iter()
        .map(|(sig, &count)| {
            count as f64
                * sig
                    .iter()
                    .map(|&r| distribution.moment(u32::from(r)))
                    .product::<f64>()
        })
        .sum()
}

/// Visits every cycle `(i_0, ..., i_{k-1})` with fixed `i_0`, handing the
/// edge link values to `leaf`.
fn walk_cycles(
    table: &[u32],
    dim: usize,
    k: usize,
    first: usize,
    leaf: &mut dyn FnMut(&[usize], &[u32]),
) {
    let mut idx = vec![0usize; k];
    let mut vals = vec![0u32; k];
    idx[0] = first;
    fn rec(
        t: usize,
        table: &[u32],
        dim: usize,
        idx: &mut [usize],
        vals: &mut [u32],
        leaf: &mut dyn FnMut(&[usize], &[u32]),
    ) {
        let k = idx.len();
        if t == k {
            vals[k - 1] = table[idx[k - 1] * dim + idx[0]];
            leaf(idx, vals);
            return;
        }
        let row = idx[t - 1] * dim;
        for j in 0..dim {
            idx[t] = j;
            vals[t - 1] = table[row + j];
            rec(t + 1, table, dim, idx, vals, leaf);
        }
    }
    rec(1, table, dim, &mut idx, &mut vals, leaf);
}

/// Exact ensemble average `E[M_k]` for `N x N` matrices of degree `n`,
/// summing `prod_l E[b^{r_l}]` over all `N^k` index cycles.
pub fn exact_expected_moment(
    dim: usize,
    degree: u32,
    k: u32,
    distribution: EntryDistribution,
) -> Result<f64> {
    let link = LinkFunction::new(degree, dim)?;
    guard(dim, k, format!("exact moment k={k} at N={dim}"))?;
    if k > MAX_CYCLE {
        return Err(Error::InvalidArgument(format!(
            "moment order {k} exceeds {MAX_CYCLE}"
        )));
    }
    if k == 0 {
        return Ok(1.0);
    }
    let table = link.table();
    let ku = k as usize;
    let vanishing: Vec<bool> = (0..=k).map(|r| distribution.moment(r) == 0.0).collect();
    let signatures = (0..dim)
        .into_par_iter()
        .map(|first| {
            let mut local = Signatures::new();
            let mut scratch = Vec::with_capacity(ku);
            let mut sig = Vec::with_capacity(ku);
            walk_cycles(&table, dim, ku, first, &mut |_, vals| {
                multiplicities(vals, &mut scratch, &mut sig);
                if sig.iter().any(|&r| vanishing[r as usize]) {
                    return;
                }
                match local.get_mut(sig.as_slice()) {
                    Some(c) => *c += 1,
                    None => {
                        local.insert(sig.clone(), 1);
                    }
                }
            });
            local
        })
        .reduce(Signatures::new, merge_signatures);
    let total = weigh(&signatures, distribution);
    // adding 0.0 turns a negative zero from cancelled odd terms into +0
    Ok(total / (dim as f64).powf(f64::from(k) / 2.0 + 1.0) + 0.0)
}

/// Restricts the first pair of a matching, which must join two
/// cyclically adjacent edges `(i_a, i_{a+1})`, `(i_{a+1}, i_{a+2})`, to tuples
/// with `i_{a+2} - i_a = offset`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OffsetFilter {
    pub offset: i64,
}

impl OffsetFilter {
    /// `k = i + c N / 2^n`: the shift stays on one side of the main diagonal.
    pub fn no_cross(c: i64, link: &LinkFunction) -> Self {
        Self {
            offset: c * link.period() as i64,
        }
    }

    /// `k = i + c N / 2^n - 1`: the shift crosses the main diagonal.
    pub fn cross(c: i64, link: &LinkFunction) -> Self {
        Self {
            offset: c * link.period() as i64 - 1,
        }
    }

    /// Whether the first pair of `matching` is adjacent, as filters require.
    pub fn applies_to(matching: &PairMatching) -> bool {
        Self::anchors(matching).is_ok()
    }

    /// Zero-based vertex positions `(from, to)` constrained by the filter.
    fn anchors(matching: &PairMatching) -> Result<(usize, usize)> {
        let size = matching.size();
        let (a, b) = *matching
            .pairs()
            .first()
            .ok_or_else(|| Error::InvalidArgument("empty matching".into()))?;
        if size >= 4 && b == a + 1 {
            Ok((a - 1, (a + 1) % size))
        } else if size >= 4 && a == 1 && b == size {
            Ok((size - 1, 1))
        } else {
            Err(Error::InvalidArgument(format!(
                "offset filter needs an adjacent first pair, got ({a},{b})"
            )))
        }
    }
}

/// Tuple census of one matching.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigurationReport {
    pub matching: PairMatching,
    /// Tuples whose link values agree within each pair and differ across pairs.
    pub count: u64,
    /// `count / N^(m+1)`.
    pub contribution: f64,
    /// Counted tuples with at least one positive-sign pair relation.
    pub positive_sign_count: u64,
    /// Counted tuples whose pair relations are all negative-sign.
    pub negative_sign_count: u64,
    /// `negative_sign_count / N^(m+1)`.
    pub main_term: f64,
    #[serde(rename = "N")]
    pub dim: usize,
    #[serde(rename = "n")]
    pub degree: u32,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub offset_filter: Option<OffsetFilter>,
}

impl ConfigurationReport {
    fn new(
        matching: PairMatching,
        dim: usize,
        degree: u32,
        counts: [u64; 3],
        offset_filter: Option<OffsetFilter>,
    ) -> Self {
        let m = matching.m();
        let norm = (dim as f64).powi(m as i32 + 1);
        let [count, negative, positive] = counts;
        Self {
            matching,
            count,
            contribution: count as f64 / norm,
            positive_sign_count: positive,
            negative_sign_count: negative,
            main_term: negative as f64 / norm,
            dim,
            degree,
            m,
            offset_filter,
        }
    }

    /// `positive_sign_count / N^(m+1)`.
    pub fn positive_fraction(&self) -> f64 {
        self.positive_sign_count as f64 / (self.dim as f64).powi(self.m as i32 + 1)
    }
}

fn all_negative(link: &LinkFunction, idx: &[usize], pairs: &[(usize, usize)]) -> bool {
    let k = idx.len();
    let offset = |t: usize| idx[t] as i64 - idx[(t + 1) % k] as i64;
    pairs
        .iter()
        .all(|&(a, b)| pair_sign(link, offset(a - 1), offset(b - 1)) == PairSign::Negative)
}

/// Exact census of one matching by pruned enumeration: only tuples whose
/// paired edges share a link value are generated.
pub fn configuration_contribution(
    dim: usize,
    degree: u32,
    matching: &PairMatching,
    offset_filter: Option<OffsetFilter>,
) -> Result<ConfigurationReport> {
    let link = LinkFunction::new(degree, dim)?;
    let m = matching.m();
    let k = matching.size();
    if m == 0 {
        return Err(Error::InvalidArgument("empty matching".into()));
    }
    if !(m <= 2 && dim <= SMALL_MOMENT_MAX_DIM) {
        guard(
            dim,
            k as u32,
            format!("configuration census 2m={k} at N={dim}"),
        )?;
    }
    let anchors = offset_filter
        .map(|_| OffsetFilter::anchors(matching))
        .transpose()?;

    let table = link.table();
    let values = link.num_entries();
    // neighbors[(i * values + l)] = all j with link(i, j) = l
    let mut starts = vec![0usize; dim * values + 1];
    for i in 0..dim {
        for j in 0..dim {
            starts[i * values + table[i * dim + j] as usize + 1] += 1;
        }
    }
    for s in 1..starts.len() {
        starts[s] += starts[s - 1];
    }
    let mut neighbors = vec![0u32; dim * dim];
    let mut fill = starts.clone();
    for i in 0..dim {
        for j in 0..dim {
            let slot = &mut fill[i * values + table[i * dim + j] as usize];
            neighbors[*slot] = j as u32;
            *slot += 1;
        }
    }

    let partners = matching.partners();
    let pairs = matching.pairs();
    let ctx = Census {
        link: &link,
        dim,
        values,
        table: &table,
        starts: &starts,
        neighbors: &neighbors,
        partners: &partners,
        pairs,
        anchors,
        offset: offset_filter.map(|f| f.offset),
    };
    let counts = (0..dim)
        .into_par_iter()
        .map(|first| {
            let mut idx = vec![0usize; k];
            let mut vals = vec![0u32; k];
            idx[0] = first;
            let mut acc = [0u64; 3];
            ctx.rec(1, &mut idx, &mut vals, &mut acc);
            acc
        })
        .reduce(|| [0; 3], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2]]);
    Ok(ConfigurationReport::new(
        matching.clone(),
        dim,
        degree,
        counts,
        offset_filter,
    ))
}

struct Census<'a> {
    link: &'a LinkFunction,
    dim: usize,
    values: usize,
    table: &'a [u32],
    starts: &'a [usize],
    neighbors: &'a [u32],
    partners: &'a [usize],
    pairs: &'a [(usize, usize)],
    anchors: Option<(usize, usize)>,
    offset: Option<i64>,
}

impl Census<'_> {
    /// Chooses `idx[t]`, which fixes edge `t - 1` (and the closing edge when
    /// `t = k - 1`).
    fn rec(&self, t: usize, idx: &mut [usize], vals: &mut [u32], acc: &mut [u64; 3]) {
        let edge = t - 1;
        let partner = self.partners[edge];
        let prev = idx[t - 1];
        if partner < edge {
            let bucket = prev * self.values + vals[partner] as usize;
            for &j in &self.neighbors[self.starts[bucket]..self.starts[bucket + 1]] {
                idx[t] = j as usize;
                vals[edge] = vals[partner];
                self.advance(t, idx, vals, acc);
            }
        } else {
            for j in 0..self.dim {
                let v = self.table[prev * self.dim + j];
                // a new pair must not reuse a value held by an earlier pair
                if vals[..edge].contains(&v) {
                    continue;
                }
                idx[t] = j;
                vals[edge] = v;
                self.advance(t, idx, vals, acc);
            }
        }
    }

    fn advance(&self, t: usize, idx: &mut [usize], vals: &mut [u32], acc: &mut [u64; 3]) {
        let k = idx.len();
        if t + 1 < k {
            self.rec(t + 1, idx, vals, acc);
            return;
        }
        let closing = self.table[idx[k - 1] * self.dim + idx[0]];
        if closing != vals[self.partners[k - 1]] {
            return;
        }
        vals[k - 1] = closing;
        if let (Some((from, to)), Some(offset)) = (self.anchors, self.offset) {
            if idx[to] as i64 - idx[from] as i64 != offset {
                return;
            }
        }
        acc[0] += 1;
        if all_negative(self.link, idx, self.pairs) {
            acc[1] += 1;
        } else {
            acc[2] += 1;
        }
    }
}

/// Single-pass classification of all `N^(2m)` cycles: a report per matching
/// plus the residual from tuples not matched in pairs.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfigurationCensus {
    pub reports: Vec<ConfigurationReport>,
    /// Tuple counts by descending multiplicity signature, for tuples that are
    /// not an exact pair matching.
    pub residual_signatures: Vec<(Vec<u8>, u64)>,
    /// Residual tuples weighted by the entry-law moments, divided by `N^(m+1)`.
    pub residual: f64,
}

impl ConfigurationCensus {
    /// Pair-exact contributions plus the weighted residual; equals the exact
    /// expected moment when the entry law has unit variance.
    pub fn total(&self) -> f64 {
        self.reports.iter().map(|r| r.contribution).sum::<f64>() + self.residual
    }
}

pub fn configuration_census(
    dim: usize,
    degree: u32,
    size: usize,
    distribution: EntryDistribution,
) -> Result<ConfigurationCensus> {
    let link = LinkFunction::new(degree, dim)?;
    let matchings = enumerate_pair_matchings(size)?;
    guard(
        dim,
        size as u32,
        format!("configuration census 2m={size} at N={dim}"),
    )?;
    if size == 0 {
        return Err(Error::InvalidArgument("empty cycle".into()));
    }
    let key =
        |partners: &[usize]| -> u64 { partners.iter().fold(0u64, |acc, &p| acc * 16 + p as u64) };
    let lookup: HashMap<u64, usize> = matchings
        .iter()
        .enumerate()
        .map(|(i, m)| (key(&m.partners()), i))
        .collect();
    let table = link.table();
    let nm = matchings.len();

    struct Partial {
        counts: Vec<[u64; 3]>,
        residual: Signatures,
    }
    let partial = (0..dim)
        .into_par_iter()
        .map(|first| {
            let mut out = Partial {
                counts: vec![[0; 3]; nm],
                residual: Signatures::new(),
            };
            let mut partners = vec![usize::MAX; size];
            let mut scratch = Vec::with_capacity(size);
            let mut sig = Vec::with_capacity(size);
            walk_cycles(&table, dim, size, first, &mut |idx, vals| {
                let mut paired = true;
                partners.fill(usize::MAX);
                'outer: for s in 0..size {
                    if partners[s] != usize::MAX {
                        continue;
                    }
                    let mut found = usize::MAX;
                    for t in s + 1..size {
                        if vals[t] == vals[s] {
                            if found != usize::MAX {
                                paired = false;
                                break 'outer;
                            }
                            found = t;
                        }
                    }
                    if found == usize::MAX {
                        paired = false;
                        break;
                    }
                    partners[s] = found;
                    partners[found] = s;
                }
                if paired {
                    let which = lookup[&key(&partners)];
                    let pairs = matchings[which].pairs();
                    let slot = &mut out.counts[which];
                    slot[0] += 1;
                    if all_negative(&link, idx, pairs) {
                        slot[1] += 1;
                    } else {
                        slot[2] += 1;
                    }
                } else {
                    multiplicities(vals, &mut scratch, &mut sig);
                    *out.residual.entry(sig.clone()).or_insert(0) += 1;
                }
            });
            out
        })
        .reduce(
            || Partial {
                counts: vec![[0; 3]; nm],
                residual: Signatures::new(),
            },
            |mut a, b| {
                for (x, y) in a.counts.iter_mut().zip(&b.counts) {
                    for i in 0..3 {
                        x[i] += y[i];
                    }
                }
                a.residual = merge_signatures(a.residual, b.residual);
                a
            },
        );

    let m = size / 2;
    let norm = (dim as f64).powi(m as i32 + 1);
    let residual = weigh(&partial.residual, distribution) / norm;
    let reports = matchings
        .into_iter()
        .zip(partial.counts)
        .map(|(matching, counts)| ConfigurationReport::new(matching, dim, degree, counts, None))
        .collect();
    Ok(ConfigurationCensus {
        reports,
        residual_signatures: partial.residual.into_iter().collect(),
        residual,
    })
}

/// Fourth-moment adjacent-matching tuples `a_ij = a_jk`, `a_kl = a_li` with
/// `k = i + cN/2^n` (no diagonal crossing) and `k = i + cN/2^n - 1` (crossing).
pub fn adjacent_region_counts(dim: usize, degree: u32, c: i64) -> Result<(u64, u64)> {
    let link = LinkFunction::new(degree, dim)?;
    let palindromes = 1i64 << degree;
    if !(0..palindromes).contains(&c) {
        return Err(Error::InvalidArgument(format!(
            "c = {c} outside 0..={}",
            palindromes - 1
        )));
    }
    let adjacent = PairMatching::adjacent(2);
    let no_cross = configuration_contribution(
        dim,
        degree,
        &adjacent,
        Some(OffsetFilter::no_cross(c, &link)),
    )?;
    let cross =
        configuration_contribution(dim, degree, &adjacent, Some(OffsetFilter::cross(c, &link)))?;
    Ok((no_cross.count, cross.count))
}
