//! Gelfand–Zetlin patterns for covariant `u(m|n)` modules.
//!
//! A pattern stores rows `r, r−1, …, 1` top first; entry `μ_{is}` lives at
//! `rows[r − s][i − 1]`. Labels `i ≤ m` are the fermionic (even) ones.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::symfunc::{hook_partitions, Partition};
use crate::Exec;

/// The individual admissibility predicates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Condition {
    /// `μ_{jr} ≥ μ_{j+1,r}` for `j ≠ m`.
    TopOrdering,
    /// `μ_{mr} ≥ #{i > m : μ_{ir} > 0}`.
    TopHook,
    /// `μ_{is} − μ_{i,s−1} ∈ {0,1}` for `i ≤ m < s`.
    ThetaRange,
    /// `μ_{ms} ≥ #{m < i ≤ s : μ_{is} > 0}` for `m < s ≤ r`.
    RowHook,
    /// `μ_{m,m+1} = 0` forces `θ_{mm} = 0`.
    ThetaBoundary,
    /// `μ_{is} ≥ μ_{i+1,s}` for `i < m < s < r`.
    FermionOrdering,
    /// Interlacing of consecutive rows inside each block.
    Betweenness,
    /// Every entry is a nonnegative integer.
    Nonnegative,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Condition::TopOrdering => "top-ordering",
            Condition::TopHook => "top-hook",
            Condition::ThetaRange => "theta-range",
            Condition::RowHook => "row-hook",
            Condition::ThetaBoundary => "theta-boundary",
            Condition::FermionOrdering => "fermion-ordering",
            Condition::Betweenness => "betweenness",
            Condition::Nonnegative => "nonnegative",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GzError {
    #[error("m + n must be at least 1")]
    EmptyRank,
    #[error("rows must have lengths {r}, {r}-1, …, 1")]
    Shape { r: usize },
    #[error("pattern violates {0:?}")]
    Invalid(Vec<Condition>),
    #[error("top row {0:?} is not admissible")]
    InvalidTop(Vec<i64>),
    #[error("label {k} out of range 1..={r}")]
    IndexOutOfRange { k: usize, r: usize },
    #[error("bad pattern json: {0}")]
    Json(String),
}

fn hook_count(values: &[i64]) -> i64 {
    values.iter().filter(|&&v| v > 0).count() as i64
}

/// The fixed top row `μ_{1r} … μ_{rr}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TopRow {
    pub m: usize,
    pub n: usize,
    values: Vec<i64>,
}

impl TopRow {
    pub fn new(m: usize, n: usize, values: Vec<i64>) -> Result<Self, GzError> {
        if m + n == 0 {
            return Err(GzError::EmptyRank);
        }
        if values.len() != m + n {
            return Err(GzError::Shape { r: m + n });
        }
        let top = TopRow { m, n, values };
        if top.violations().is_empty() {
            Ok(top)
        } else {
            Err(GzError::InvalidTop(top.values))
        }
    }

    pub fn zero(m: usize, n: usize) -> Self {
        TopRow {
            m,
            n,
            values: vec![0; m + n],
        }
    }

    pub fn r(&self) -> usize {
        self.m + self.n
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    /// `μ_{kr}`, 1-based; zero outside `1..=r`.
    pub fn get(&self, k: usize) -> i64 {
        if k == 0 {
            return 0;
        }
        self.values.get(k - 1).copied().unwrap_or(0)
    }

    /// `|λ| = Σ μ_{ir}`.
    pub fn level(&self) -> usize {
        self.values.iter().sum::<i64>().max(0) as usize
    }

    fn violations(&self) -> Vec<Condition> {
        let (m, r) = (self.m, self.r());
        let mut out = Vec::new();
        if self.values.iter().any(|&v| v < 0) {
            out.push(Condition::Nonnegative);
        }
        if (1..r).any(|j| j != m && self.get(j) < self.get(j + 1)) {
            out.push(Condition::TopOrdering);
        }
        if m >= 1 && self.get(m) < hook_count(&self.values[m..]) {
            out.push(Condition::TopHook);
        }
        out
    }

    /// Top row of the covariant module labelled by `λ`; `None` outside the hook.
    pub fn from_partition(m: usize, n: usize, lambda: &Partition) -> Option<Self> {
        if m + n == 0 || !lambda.in_hook(m, n) {
            return None;
        }
        let conj = lambda.conjugate();
        let mut values: Vec<i64> = (1..=m).map(|i| lambda.part(i) as i64).collect();
        values.extend((1..=n).map(|i| conj.part(i).saturating_sub(m) as i64));
        Some(TopRow { m, n, values })
    }

    /// `λ = (μ_{1r}, …, μ_{mr})` followed by the conjugate of the bosonic part.
    pub fn to_partition(&self) -> Partition {
        let fermi: Vec<usize> = self.values[..self.m].iter().map(|&v| v as usize).collect();
        let bose = Partition::new(self.values[self.m..].iter().map(|&v| v as usize).collect())
            .expect("bosonic labels are ordered");
        let mut parts = fermi;
        parts.extend_from_slice(bose.conjugate().parts());
        Partition::new(parts).expect("hook condition keeps the parts decreasing")
    }
}

impl fmt::Display for TopRow {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.values)
    }
}

/// `μ_{kr} + 1`, if the result is still admissible.
pub fn raise_top_row(top: &TopRow, k: usize) -> Option<TopRow> {
    shift_top_row(top, k, 1)
}

/// `μ_{kr} − 1`, if the result is still admissible.
pub fn lower_top_row(top: &TopRow, k: usize) -> Option<TopRow> {
    shift_top_row(top, k, -1)
}

fn shift_top_row(top: &TopRow, k: usize, by: i64) -> Option<TopRow> {
    if k == 0 || k > top.r() {
        return None;
    }
    let mut values = top.values.clone();
    values[k - 1] += by;
    TopRow::new(top.m, top.n, values).ok()
}

/// Top rows of all hook partitions of weight `level`, optionally with `λ_1 ≤ p`.
pub fn top_rows_for_level(m: usize, n: usize, p: usize, level: usize, cap: bool) -> Vec<TopRow> {
    crate::symfunc::partitions(level)
        .into_iter()
        .filter(|l| !cap || l.part(1) <= p)
        .filter_map(|l| TopRow::from_partition(m, n, &l))
        .collect()
}

/// Twice the `h_k` eigenvalues.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DoubledWeight(pub Vec<i64>);

impl DoubledWeight {
    /// `[−p, …, −p | p, …, p] + 2·content`.
    pub fn from_content(m: usize, p: usize, content: &[i64]) -> Self {
        DoubledWeight(
            content
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    if k < m {
                        2 * c - p as i64
                    } else {
                        2 * c + p as i64
                    }
                })
                .collect(),
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GzPattern {
    pub m: usize,
    pub n: usize,
    rows: Vec<Vec<i64>>,
}

impl Serialize for GzPattern {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.rows.serialize(s)
    }
}

impl GzPattern {
    /// Checks only the triangular shape.
    pub fn from_rows(m: usize, n: usize, rows: Vec<Vec<i64>>) -> Result<Self, GzError> {
        let r = m + n;
        if r == 0 {
            return Err(GzError::EmptyRank);
        }
        if rows.len() != r || rows.iter().enumerate().any(|(t, row)| row.len() != r - t) {
            return Err(GzError::Shape { r });
        }
        Ok(GzPattern { m, n, rows })
    }

    /// Parses the JSON array-of-rows form.
    pub fn from_json(m: usize, n: usize, text: &str) -> Result<Self, GzError> {
        let rows: Vec<Vec<i64>> =
            serde_json::from_str(text).map_err(|e| GzError::Json(e.to_string()))?;
        Self::from_rows(m, n, rows)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.rows).expect("plain integers")
    }

    /// The lowest-weight pattern.
    pub fn vacuum(m: usize, n: usize) -> Self {
        let r = m + n;
        GzPattern {
            m,
            n,
            rows: (0..r).map(|t| vec![0; r - t]).collect(),
        }
    }

    pub fn r(&self) -> usize {
        self.m + self.n
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.rows
    }

    /// `μ_{is}`, 1-based, `1 ≤ i ≤ s ≤ r`.
    pub fn mu(&self, i: usize, s: usize) -> i64 {
        self.rows[self.r() - s][i - 1]
    }

    pub fn top(&self) -> TopRow {
        TopRow {
            m: self.m,
            n: self.n,
            values: self.rows[0].clone(),
        }
    }

    /// Row `s` as a slice `μ_{1s} … μ_{ss}`.
    pub fn row(&self, s: usize) -> &[i64] {
        &self.rows[self.r() - s]
    }

    /// `θ_{i,s−1} = μ_{is} − μ_{i,s−1}`.
    pub fn theta(&self, i: usize, s: usize) -> i64 {
        self.mu(i, s) - self.mu(i, s - 1)
    }

    /// Every failed predicate, each checked independently.
    pub fn violations(&self) -> Vec<Condition> {
        let (m, r) = (self.m, self.r());
        let mut out = Vec::new();
        let mut fail = |c: Condition, bad: bool| {
            if bad && !out.contains(&c) {
                out.push(c);
            }
        };

        fail(
            Condition::Nonnegative,
            self.rows.iter().flatten().any(|&v| v < 0),
        );
        fail(
            Condition::TopOrdering,
            (1..r).any(|j| j != m && self.mu(j, r) < self.mu(j + 1, r)),
        );
        fail(
            Condition::TopHook,
            m >= 1 && self.mu(m, r) < hook_count(&self.row(r)[m..]),
        );
        for s in (m + 1).max(2)..=r {
            for i in 1..=m.min(s - 1) {
                let t = self.theta(i, s);
                fail(Condition::ThetaRange, !(0..=1).contains(&t));
            }
        }
        if m >= 1 {
            for s in m + 1..=r {
                fail(
                    Condition::RowHook,
                    self.mu(m, s) < hook_count(&self.row(s)[m..]),
                );
            }
            if r > m {
                fail(
                    Condition::ThetaBoundary,
                    self.mu(m, m + 1) == 0 && self.theta(m, m + 1) != 0,
                );
            }
        }
        for s in m + 1..r {
            for i in 1..m {
                fail(
                    Condition::FermionOrdering,
                    self.mu(i, s) < self.mu(i + 1, s),
                );
            }
        }
        for j in 1..r {
            let block = j != m;
            if !block {
                continue;
            }
            let lo = if j < m { 1 } else { m + 1 };
            for i in lo..=j {
                let between =
                    self.mu(i, j + 1) >= self.mu(i, j) && self.mu(i, j) >= self.mu(i + 1, j + 1);
                fail(Condition::Betweenness, !between);
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.violations().is_empty()
    }

    /// `Σ_{j≤k} μ_{jk} − Σ_{j≤k−1} μ_{j,k−1}` for each `k`.
    pub fn content(&self) -> Vec<i64> {
        let sums: Vec<i64> = (0..=self.r())
            .map(|s| if s == 0 { 0 } else { self.row(s).iter().sum() })
            .collect();
        (1..=self.r()).map(|k| sums[k] - sums[k - 1]).collect()
    }

    /// Same content, as a monomial exponent (negative entries cannot occur in valid patterns).
    pub fn exponents(&self) -> Vec<u32> {
        self.content()
            .into_iter()
            .map(|c| c.max(0) as u32)
            .collect()
    }
}

impl fmt::Display for GzPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

/// Boolean check with per-condition diagnostics.
pub fn validate_pattern(pat: &GzPattern) -> Result<(), GzError> {
    let v = pat.violations();
    if v.is_empty() {
        Ok(())
    } else {
        Err(GzError::Invalid(v))
    }
}

pub fn pattern_weight(pat: &GzPattern, p: usize) -> Result<DoubledWeight, GzError> {
    validate_pattern(pat)?;
    Ok(DoubledWeight::from_content(pat.m, p, &pat.content()))
}

/// All admissible patterns with the given top row, in lexicographic order.
pub fn fillings(top: &TopRow) -> Result<Vec<GzPattern>, GzError> {
    if !top.violations().is_empty() {
        return Err(GzError::InvalidTop(top.values.clone()));
    }
    let (m, r) = (top.m, top.r());
    let mut rows = vec![top.values.clone()];
    let mut out = Vec::new();

    fn next_row(m: usize, above: &[i64], i: usize, cur: &mut Vec<i64>, acc: &mut Vec<Vec<i64>>) {
        let s = above.len();
        if i == s - 1 {
            acc.push(cur.clone());
            return;
        }
        let (lo, hi) = if s > m && i < m {
            (above[i] - 1, above[i])
        } else {
            (above[i + 1], above[i])
        };
        for v in lo.max(0)..=hi {
            cur.push(v);
            next_row(m, above, i + 1, cur, acc);
            cur.pop();
        }
    }

    fn rec(m: usize, n: usize, r: usize, rows: &mut Vec<Vec<i64>>, out: &mut Vec<GzPattern>) {
        if rows.len() == r {
            let pat = GzPattern {
                m,
                n,
                rows: rows.clone(),
            };
            if pat.is_valid() {
                out.push(pat);
            }
            return;
        }
        let mut candidates = Vec::new();
        next_row(
            m,
            rows.last().expect("nonempty"),
            0,
            &mut Vec::new(),
            &mut candidates,
        );
        for c in candidates {
            rows.push(c);
            rec(m, n, r, rows, out);
            rows.pop();
        }
    }

    rec(m, top.n, r, &mut rows, &mut out);
    out.sort();
    Ok(out)
}

/// Patterns whose top rows have `level` boxes (with `μ_{1r} ≤ p` when `cap`),
/// grouped by content vector. Fillings are computed per top row in parallel.
pub fn patterns_by_content(
    m: usize,
    n: usize,
    p: usize,
    level: usize,
    cap: bool,
    exec: Exec,
) -> BTreeMap<Vec<u32>, Vec<GzPattern>> {
    let tops = top_rows_for_level(m, n, p, level, cap);
    let mut out: BTreeMap<Vec<u32>, Vec<GzPattern>> = BTreeMap::new();
    for pats in exec.map(&tops, |t| {
        fillings(t).expect("enumerated tops are admissible")
    }) {
        for pat in pats {
            out.entry(pat.exponents()).or_default().push(pat);
        }
    }
    out
}

/// Number of patterns at each level `0..=max_level`.
pub fn level_dimensions(
    m: usize,
    n: usize,
    p: usize,
    max_level: usize,
    cap: bool,
    exec: Exec,
) -> Vec<usize> {
    let tops: Vec<TopRow> = hook_partitions(m, n, max_level, cap.then_some(p))
        .iter()
        .filter_map(|l| TopRow::from_partition(m, n, l))
        .collect();
    let counts = exec.map(&tops, |t| (t.level(), fillings(t).map_or(0, |f| f.len())));
    let mut out = vec![0; max_level + 1];
    for (lvl, c) in counts {
        out[lvl] += c;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfunc::super_schur;

    fn top(m: usize, n: usize, v: &[i64]) -> TopRow {
        TopRow::new(m, n, v.to_vec()).unwrap()
    }

    fn pat11(t: [i64; 2], bottom: i64) -> GzPattern {
        GzPattern::from_rows(1, 1, vec![t.to_vec(), vec![bottom]]).unwrap()
    }

    #[test]
    fn validation_examples() {
        for (m, n) in [(1, 1), (2, 1), (0, 2), (2, 0), (2, 2)] {
            assert!(GzPattern::vacuum(m, n).is_valid());
        }
        assert!(pat11([0, 1], 0).violations().contains(&Condition::TopHook));
        assert!(pat11([1, 1], 1).is_valid());
        assert_eq!(
            validate_pattern(&pat11([1, 0], 2)),
            Err(GzError::Invalid(vec![Condition::ThetaRange]))
        );
        assert!(matches!(
            GzPattern::from_rows(1, 1, vec![vec![0, 0]]),
            Err(GzError::Shape { r: 2 })
        ));
    }

    #[test]
    fn conditions_are_reported_separately() {
        // μ_{12} = 0 with θ_{11} = 1 breaks the boundary rule and the θ range at once.
        let v = pat11([0, 0], -1).violations();
        assert!(v.contains(&Condition::Nonnegative));
        assert!(v.contains(&Condition::ThetaBoundary));
        assert!(!v.contains(&Condition::TopHook));
    }

    #[test]
    fn weight_examples() {
        assert_eq!(
            pattern_weight(&GzPattern::vacuum(1, 1), 2).unwrap(),
            DoubledWeight(vec![-2, 2])
        );
        assert_eq!(
            pattern_weight(&pat11([1, 0], 1), 2).unwrap(),
            DoubledWeight(vec![0, 2])
        );
        assert_eq!(
            pattern_weight(&pat11([1, 0], 0), 2).unwrap(),
            DoubledWeight(vec![-2, 4])
        );
        assert!(pattern_weight(&pat11([0, 1], 0), 2).is_err());
    }

    #[test]
    fn top_row_examples() {
        let rows = top_rows_for_level(1, 1, 1, 2, false);
        assert_eq!(rows, vec![top(1, 1, &[2, 0]), top(1, 1, &[1, 1])]);
        assert_eq!(
            top_rows_for_level(1, 1, 1, 2, true),
            vec![top(1, 1, &[1, 1])]
        );
        assert_eq!(
            top_rows_for_level(2, 2, 3, 0, true),
            vec![TopRow::zero(2, 2)]
        );
        for l in crate::symfunc::hook_partitions(2, 2, 7, None) {
            assert_eq!(TopRow::from_partition(2, 2, &l).unwrap().to_partition(), l);
        }
    }

    #[test]
    fn filling_examples() {
        assert_eq!(fillings(&top(1, 1, &[1, 0])).unwrap().len(), 2);
        assert_eq!(fillings(&top(1, 1, &[1, 1])).unwrap().len(), 2);
        assert_eq!(fillings(&TopRow::zero(2, 2)).unwrap().len(), 1);
        assert!(fillings(&TopRow {
            m: 1,
            n: 1,
            values: vec![0, 1]
        })
        .is_err());
    }

    #[test]
    fn raise_examples() {
        let z = TopRow::zero(1, 1);
        assert_eq!(raise_top_row(&z, 1), Some(top(1, 1, &[1, 0])));
        assert_eq!(raise_top_row(&z, 2), None);
        assert_eq!(
            raise_top_row(&top(1, 1, &[1, 0]), 2),
            Some(top(1, 1, &[1, 1]))
        );
        assert_eq!(
            lower_top_row(&top(1, 1, &[1, 1]), 2),
            Some(top(1, 1, &[1, 0]))
        );
    }

    #[test]
    fn counts_and_weights_match_super_schur() {
        for (m, n) in [(1, 1), (2, 1), (1, 2), (2, 2), (0, 2), (2, 0), (3, 1)] {
            for lambda in hook_partitions(m, n, 5, None) {
                let t = TopRow::from_partition(m, n, &lambda).unwrap();
                let mut got: BTreeMap<Vec<u32>, i64> = BTreeMap::new();
                for pat in fillings(&t).unwrap() {
                    *got.entry(pat.exponents()).or_default() += 1;
                }
                let want: BTreeMap<Vec<u32>, i64> = super_schur(&lambda, m, n, lambda.weight())
                    .coeffs()
                    .clone()
                    .into_iter()
                    .collect();
                assert_eq!(got, want, "m={m} n={n} λ={lambda}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let p = pat11([1, 1], 1);
        assert_eq!(p.to_json(), "[[1,1],[1]]");
        assert_eq!(GzPattern::from_json(1, 1, &p.to_json()).unwrap(), p);
    }
}
