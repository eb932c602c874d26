//! Closed-form reduced matrix elements `G_k` and the diagonal recurrence.
//!
//! `G_k(μ)` is the reduced matrix element of `c^+` that raises `μ_{kr}` by
//! one. Its square is rational; it is assembled as explicit numerator and
//! denominator factor lists so that formally vanishing pairs can be
//! cancelled before division.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gz::{fillings, lower_top_row, raise_top_row, top_rows_for_level, TopRow};
use crate::{q_int, Exec, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RedmatError {
    #[error("uncancelled zero denominator for top {top:?}, k = {k}, p = {p} under {variant}")]
    ZeroDenominator {
        top: Vec<i64>,
        k: usize,
        p: usize,
        variant: ParsingVariant,
    },
    #[error("label {k} out of range 1..={r}")]
    IndexOutOfRange { k: usize, r: usize },
    #[error("negative square {value} for top {top:?}, k = {k}")]
    NegativeSquare {
        top: Vec<i64>,
        k: usize,
        value: String,
    },
    #[error("row {row:?} is not an admissible second row under {top:?}")]
    InvalidTheta { top: Vec<i64>, row: Vec<i64> },
    #[error("the recurrence needs at least one bosonic label (n ≥ 1)")]
    NoBosons,
    #[error("need at least two p samples, got {0}")]
    TooFewSamples(usize),
    #[error("no parsing variant survives: {0:?}")]
    NoSurvivor(Vec<VariantStats>),
    #[error("several parsing variants survive: {0:?}")]
    MultipleSurvivors(Vec<VariantStats>),
    #[error("unknown parsing variant {0:?}")]
    UnknownVariant(String),
}

/// `E_j = 1` iff `j` is even; `O_j = 1 − E_j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Parity {
    E,
    O,
}

pub fn parity_indicator(kind: Parity, j: i64) -> i64 {
    let even = i64::from(j.rem_euclid(2) == 0);
    match kind {
        Parity::E => even,
        Parity::O => 1 - even,
    }
}

/// How a factor written `𝓔_a(X) + 1` is read.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Reading {
    /// `indicator(a)·X + 1`.
    Mult,
    /// `indicator(a + X) + 1`.
    Arg,
}

/// Which top-row entry enters the fourth line of the bosonic formula.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Line4 {
    /// `μ_{m+k,r}`, the label being raised.
    BosonLabel,
    /// `μ_{kr}` as typeset.
    Literal,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ZeroPolicy {
    /// Zero numerator and denominator factors cancel pairwise.
    CancelPairs,
    /// No cancellation; `0/0` evaluates to zero.
    NoCancel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ParsingVariant {
    pub reading: Reading,
    pub line4: Line4,
    pub policy: ZeroPolicy,
}

impl ParsingVariant {
    pub const CANONICAL: ParsingVariant = ParsingVariant {
        reading: Reading::Mult,
        line4: Line4::BosonLabel,
        policy: ZeroPolicy::CancelPairs,
    };

    pub fn all() -> Vec<ParsingVariant> {
        let mut out = Vec::new();
        for reading in [Reading::Mult, Reading::Arg] {
            for line4 in [Line4::BosonLabel, Line4::Literal] {
                for policy in [ZeroPolicy::CancelPairs, ZeroPolicy::NoCancel] {
                    out.push(ParsingVariant {
                        reading,
                        line4,
                        policy,
                    });
                }
            }
        }
        out
    }

    /// Distinct candidates for rank `m`. The fourth-line product is empty
    /// when `m < 2`, so both of its readings are the same function there
    /// and only one is kept.
    pub fn candidates(m: usize) -> Vec<ParsingVariant> {
        Self::all()
            .into_iter()
            .filter(|v| m >= 2 || v.line4 == Line4::BosonLabel)
            .collect()
    }
}

impl fmt::Display for ParsingVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = match self.reading {
            Reading::Mult => "mult",
            Reading::Arg => "arg",
        };
        let l = match self.line4 {
            Line4::BosonLabel => "boson",
            Line4::Literal => "literal",
        };
        let c = match self.policy {
            ZeroPolicy::CancelPairs => "cancel",
            ZeroPolicy::NoCancel => "nocancel",
        };
        write!(f, "{r}:{l}:{c}")
    }
}

impl FromStr for ParsingVariant {
    type Err = RedmatError;

    /// `reading:line4:policy`, e.g. `mult:boson:cancel`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || RedmatError::UnknownVariant(s.to_string());
        let parts: Vec<&str> = s.split(':').collect();
        let [r, l, c] = parts.as_slice() else {
            return Err(bad());
        };
        let reading = match *r {
            "mult" => Reading::Mult,
            "arg" => Reading::Arg,
            _ => return Err(bad()),
        };
        let line4 = match *l {
            "boson" => Line4::BosonLabel,
            "literal" => Line4::Literal,
            _ => return Err(bad()),
        };
        let policy = match *c {
            "cancel" => ZeroPolicy::CancelPairs,
            "nocancel" => ZeroPolicy::NoCancel,
            _ => return Err(bad()),
        };
        Ok(ParsingVariant {
            reading,
            line4,
            policy,
        })
    }
}

/// Integer factors of a rational product, with an overall sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactorList {
    pub sign: i64,
    pub num: Vec<i64>,
    pub den: Vec<i64>,
}

impl FactorList {
    fn new() -> Self {
        FactorList {
            sign: 1,
            num: Vec::new(),
            den: Vec::new(),
        }
    }

    /// `None` signals a zero denominator that the policy could not absorb.
    pub fn evaluate(&self, policy: ZeroPolicy) -> Option<Q> {
        let mut num = self.num.clone();
        let mut den = self.den.clone();
        if policy == ZeroPolicy::CancelPairs {
            let zn: Vec<usize> = (0..num.len()).filter(|&i| num[i] == 0).collect();
            let zd: Vec<usize> = (0..den.len()).filter(|&i| den[i] == 0).collect();
            for (&a, &b) in zn.iter().zip(&zd) {
                num[a] = 1;
                den[b] = 1;
            }
        }
        if den.contains(&0) {
            return num.contains(&0).then(Q::zero);
        }
        let mut v = q_int(self.sign);
        for x in num {
            v *= q_int(x);
        }
        for x in den {
            v /= q_int(x);
        }
        Some(v)
    }
}

fn special(variant: ParsingVariant, kind: Parity, a: i64, x: i64) -> i64 {
    match variant.reading {
        Reading::Mult => parity_indicator(kind, a) * x + 1,
        Reading::Arg => parity_indicator(kind, a + x) + 1,
    }
}

/// Factor lists of `G_k(μ)²` exactly as printed, without any admissibility test.
pub fn gk_factors(top: &TopRow, k: usize, p: usize, variant: ParsingVariant) -> FactorList {
    let (m, n) = (top.m as i64, top.n as i64);
    let mu = |i: i64| top.get(i as usize);
    let p = p as i64;
    let k = k as i64;
    let mut f = FactorList::new();
    let s = |kind, a, x| special(variant, kind, a, x);

    if k <= m {
        let mk = mu(k);
        let (kind, bose_parity) = if k % 2 == 0 {
            (Parity::E, Parity::E)
        } else {
            (Parity::O, Parity::O)
        };
        if k % 2 == 1 {
            f.num.push(p - mk + k - 1);
        } else {
            f.sign = -1;
        }
        f.num.push(s(kind, m, mk + m - n - k));
        for j in (1..=m).filter(|&j| j != k) {
            f.num.push(mk - mu(j) - k + j);
        }
        if k % 2 == 0 {
            for j in (1..=m / 2).filter(|&j| j != k / 2) {
                let d = mk - mu(2 * j) - k + 2 * j;
                f.den.push(d);
                f.den.push(d + 1);
            }
        } else {
            for j in (1..=(m + 1) / 2).filter(|&j| j != (k + 1) / 2) {
                let d = mk - mu(2 * j - 1) - k + 2 * j - 1;
                f.den.push(d);
                f.den.push(d + 1);
            }
        }
        for j in 1..=n {
            let b = mu(m + j);
            let d = mk + b + m - j - k + 2;
            f.num.push(d);
            f.den.push(d - parity_indicator(bose_parity, m + b));
        }
    } else {
        let kk = k - m;
        let a = mu(k);
        f.num.push(s(Parity::O, a, a - kk + n));
        f.num.push(s(Parity::E, m + a, p + a + m - kk));
        for j in 1..=m / 2 {
            f.num
                .push(s(Parity::E, m + a, mu(2 * j) + a - 2 * j - kk + m + 1));
        }
        for j in 1..=(m + 1) / 2 {
            f.den
                .push(s(Parity::E, m + a, mu(2 * j - 1) + a - 2 * j - kk + m + 1));
        }
        for j in 1..=(m + 1) / 2 {
            f.num
                .push(s(Parity::O, m + a, mu(2 * j - 1) + a - 2 * j - kk + m + 2));
        }
        let other = match variant.line4 {
            Line4::BosonLabel => a,
            Line4::Literal => mu(kk),
        };
        for j in 1..=m / 2 {
            f.den
                .push(s(Parity::O, m + a, mu(2 * j) + other - 2 * j - kk + m));
        }
        for j in (1..=n).filter(|&j| j != kk) {
            let d = mu(m + j) - a;
            f.num.push(d - j + kk);
            f.den.push(d - j + kk - parity_indicator(Parity::O, d));
        }
    }
    f
}

/// `G_k(μ)²` as printed, even when raising `μ_{kr}` leaves the admissible set.
pub fn gk_squared_raw(
    top: &TopRow,
    k: usize,
    p: usize,
    variant: ParsingVariant,
) -> Result<Q, RedmatError> {
    if k == 0 || k > top.r() {
        return Err(RedmatError::IndexOutOfRange { k, r: top.r() });
    }
    gk_factors(top, k, p, variant)
        .evaluate(variant.policy)
        .ok_or_else(|| RedmatError::ZeroDenominator {
            top: top.values().to_vec(),
            k,
            p,
            variant,
        })
}

/// `G_k(μ)²`; zero when the raised row is inadmissible.
pub fn gk_squared(
    top: &TopRow,
    k: usize,
    p: usize,
    variant: ParsingVariant,
) -> Result<Q, RedmatError> {
    if k == 0 || k > top.r() {
        return Err(RedmatError::IndexOutOfRange { k, r: top.r() });
    }
    if raise_top_row(top, k).is_none() {
        return Ok(Q::zero());
    }
    gk_squared_raw(top, k, p, variant)
}

/// Exact `s·√q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedSqrt {
    sign: i8,
    radicand: Q,
}

impl SignedSqrt {
    pub fn new(sign: i8, radicand: Q) -> Option<Self> {
        if radicand.is_negative() || !(-1..=1).contains(&sign) {
            return None;
        }
        let sign = if radicand.is_zero() { 0 } else { sign };
        if sign == 0 && !radicand.is_zero() {
            return None;
        }
        Some(SignedSqrt { sign, radicand })
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn radicand(&self) -> &Q {
        &self.radicand
    }

    /// The square `s²·q`, i.e. the radicand.
    pub fn square(&self) -> Q {
        self.radicand.clone()
    }
}

impl fmt::Display for SignedSqrt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            1 => write!(f, "sqrt({})", self.radicand),
            _ => write!(f, "-sqrt({})", self.radicand),
        }
    }
}

/// `G_k(μ)` with its sign: `+1` on fermionic labels and
/// `(−1)^{μ_{k+1,r} + … + μ_{rr}}` on bosonic ones.
pub fn gk(
    top: &TopRow,
    k: usize,
    p: usize,
    variant: ParsingVariant,
) -> Result<SignedSqrt, RedmatError> {
    let sq = gk_squared(top, k, p, variant)?;
    let sign = if k <= top.m {
        1
    } else {
        let tail: i64 = top.values()[k..].iter().sum();
        if tail % 2 == 0 {
            1
        } else {
            -1
        }
    };
    SignedSqrt::new(sign, sq.clone()).ok_or_else(|| RedmatError::NegativeSquare {
        top: top.values().to_vec(),
        k,
        value: sq.to_string(),
    })
}

/// A choice of row `r−1` under a fixed top row.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ThetaConfig {
    top: TopRow,
    row: Vec<i64>,
}

impl ThetaConfig {
    /// Checks the admissibility conditions that involve the two top rows only.
    pub fn new(top: TopRow, row: Vec<i64>) -> Result<Self, RedmatError> {
        let (m, r) = (top.m, top.r());
        if top.n == 0 {
            return Err(RedmatError::NoBosons);
        }
        let bad = |top: &TopRow, row: &[i64]| RedmatError::InvalidTheta {
            top: top.values().to_vec(),
            row: row.to_vec(),
        };
        if row.len() != r - 1 || row.iter().any(|&v| v < 0) {
            return Err(bad(&top, &row));
        }
        let nu = |i: usize| row[i - 1];
        let mut ok = (1..=m).all(|i| (0..=1).contains(&(top.get(i) - nu(i))));
        if r - 1 > m {
            if m >= 1 {
                ok &= nu(m) >= row[m..].iter().filter(|&&v| v > 0).count() as i64;
            }
            ok &= (1..m).all(|i| nu(i) >= nu(i + 1));
            ok &= (m + 1..r).all(|i| top.get(i) >= nu(i) && nu(i) >= top.get(i + 1));
        } else if m >= 1 && top.get(m) == 0 {
            ok &= top.get(m) == nu(m);
        }
        if ok {
            Ok(ThetaConfig { top, row })
        } else {
            Err(bad(&top, &row))
        }
    }

    pub fn top(&self) -> &TopRow {
        &self.top
    }

    /// `μ_{1,r−1} … μ_{r−1,r−1}`.
    pub fn row(&self) -> &[i64] {
        &self.row
    }

    /// `θ_{i,r−1}` for `i = 1..m`.
    pub fn thetas(&self) -> Vec<i64> {
        (1..=self.top.m)
            .map(|i| self.top.get(i) - self.row[i - 1])
            .collect()
    }
}

/// Distinct second rows of the fillings of `top`.
pub fn theta_configs(top: &TopRow) -> Vec<ThetaConfig> {
    if top.n == 0 {
        return Vec::new();
    }
    let rows: BTreeSet<Vec<i64>> = fillings(top)
        .map(|f| {
            f.into_iter()
                .map(|p| p.rows().get(1).cloned().unwrap_or_default())
                .collect()
        })
        .unwrap_or_default();
    rows.into_iter()
        .map(|row| ThetaConfig {
            top: top.clone(),
            row,
        })
        .collect()
}

/// The two halves of the diagonal recurrence and its right-hand side.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Id2Parts {
    /// Terms through `G(μ)`, the `⟨c_r^- c_r^+⟩` part.
    pub raise: Q,
    /// Terms through `G(μ_{−})`, the `⟨c_r^+ c_r^-⟩` part.
    pub lower: Q,
    /// `p + 2(Σ μ_{ir} − Σ μ_{i,r−1})`.
    pub rhs: Q,
}

impl Id2Parts {
    pub fn residual(&self) -> Q {
        &self.raise + &self.lower - &self.rhs
    }
}

fn coefficient(
    top: &TopRow,
    k: usize,
    p: usize,
    variant: ParsingVariant,
    f: FactorList,
) -> Result<Q, RedmatError> {
    f.evaluate(ZeroPolicy::CancelPairs)
        .ok_or_else(|| RedmatError::ZeroDenominator {
            top: top.values().to_vec(),
            k,
            p,
            variant,
        })
}

/// Evaluates both sides of the diagonal recurrence at `(top, θ)`.
///
/// Terms whose lowered top row is inadmissible, or whose `G²` vanishes, are
/// dropped before their coefficient is formed.
pub fn id2_parts(
    theta: &ThetaConfig,
    p: usize,
    variant: ParsingVariant,
) -> Result<Id2Parts, RedmatError> {
    let top = &theta.top;
    let (m, r) = (top.m, top.r());
    let mu = |i: usize| top.get(i);
    let nu = |i: usize| theta.row[i - 1];
    let m_ = m as i64;
    let mut raise = Q::zero();
    let mut lower = Q::zero();

    let lowered = |k: usize| lower_top_row(top, k);

    for i in 1..=m {
        let th = mu(i) - nu(i);
        let shifted = th == 1;
        let sh = -i64::from(shifted);
        let g2 = if shifted {
            match lowered(i) {
                Some(t) => gk_squared(&t, i, p, variant)?,
                None => continue,
            }
        } else {
            gk_squared(top, i, p, variant)?
        };
        if g2.is_zero() {
            continue;
        }
        let ii = i as i64;
        let mut f = FactorList::new();
        for j in (1..=m).filter(|&j| j != i) {
            let jj = j as i64;
            f.num.push(mu(i) - mu(j) - ii + jj + 1 + sh);
            f.den.push(mu(i) - nu(j) - ii + jj + sh);
        }
        for s in m + 1..r {
            f.num.push(mu(i) + nu(s) + 2 * m_ - ii - s as i64 + 1 + sh);
        }
        for s in m + 1..=r {
            f.den.push(mu(i) + mu(s) + 2 * m_ - ii - s as i64 + 2 + sh);
        }
        let term = coefficient(top, i, p, variant, f)? * g2;
        if shifted {
            lower += term;
        } else {
            raise += term;
        }
    }

    for q in m + 1..=r {
        let qq = q as i64;
        for shifted in [false, true] {
            let sh = -i64::from(shifted);
            let g2 = if shifted {
                match lowered(q) {
                    Some(t) => gk_squared(&t, q, p, variant)?,
                    None => continue,
                }
            } else {
                gk_squared(top, q, p, variant)?
            };
            if g2.is_zero() {
                continue;
            }
            let mut f = FactorList::new();
            for j in 1..=m {
                let jj = j as i64;
                f.num.push(mu(j) + mu(q) + 2 * m_ - jj - qq + 1 + sh);
                f.den.push(nu(j) + mu(q) + 2 * m_ - jj - qq + 2 + sh);
            }
            for s in m + 1..r {
                f.num.push(mu(q) - nu(s) - qq + s as i64 + 1 + sh);
            }
            for s in (m + 1..=r).filter(|&s| s != q) {
                f.den.push(mu(q) - mu(s) - qq + s as i64 + sh);
            }
            let term = coefficient(top, q, p, variant, f)? * g2;
            if shifted {
                lower += term;
            } else {
                raise += term;
            }
        }
    }

    let top_sum: i64 = top.values().iter().sum();
    let row_sum: i64 = theta.row.iter().sum();
    Ok(Id2Parts {
        raise,
        lower,
        rhs: q_int(p as i64 + 2 * (top_sum - row_sum)),
    })
}

pub fn id2_residual(
    theta: &ThetaConfig,
    p: usize,
    variant: ParsingVariant,
) -> Result<Q, RedmatError> {
    Ok(id2_parts(theta, p, variant)?.residual())
}

/// Top rows with `level ≤ level_max` inside `V(p)` (`λ_1 ≤ p`).
pub fn capped_tops(m: usize, n: usize, p: usize, level_max: usize) -> Vec<TopRow> {
    (0..=level_max)
        .flat_map(|l| top_rows_for_level(m, n, p, l, true))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Id2Failure {
    pub p: usize,
    pub top: Vec<i64>,
    pub row: Vec<i64>,
    /// Residual as a rational string, or the error text.
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Id2Report {
    pub checked: usize,
    pub failures: Vec<Id2Failure>,
    pub zero_denominators: usize,
}

impl Id2Report {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates the recurrence on every `(p, top, θ)` with `λ_1 ≤ p`, `|λ| ≤ level_max`.
pub fn id2_sweep(
    m: usize,
    n: usize,
    ps: &[usize],
    level_max: usize,
    variant: ParsingVariant,
    exec: Exec,
) -> Id2Report {
    let mut configs = Vec::new();
    for &p in ps {
        for top in capped_tops(m, n, p, level_max) {
            for th in theta_configs(&top) {
                configs.push((p, th));
            }
        }
    }
    let results = exec.map(&configs, |(p, th)| id2_residual(th, *p, variant));
    let mut report = Id2Report {
        checked: configs.len(),
        ..Default::default()
    };
    for ((p, th), res) in configs.iter().zip(results) {
        let p = *p;
        let detail = match res {
            Ok(v) if v.is_zero() => continue,
            Ok(v) => v.to_string(),
            Err(e) => {
                report.zero_denominators +=
                    usize::from(matches!(e, RedmatError::ZeroDenominator { .. }));
                e.to_string()
            }
        };
        report.failures.push(Id2Failure {
            p,
            top: th.top.values().to_vec(),
            row: th.row.clone(),
            detail,
        });
    }
    report
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantStats {
    pub variant: String,
    pub checked: usize,
    pub failures: usize,
    pub zero_denominators: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantSelection {
    pub chosen: String,
    #[serde(skip)]
    pub variant: ParsingVariant,
    pub stats: Vec<VariantStats>,
}

/// Runs the recurrence for every candidate reading and returns the unique survivor.
pub fn select_parsing_variant(
    m: usize,
    n: usize,
    p_samples: &[usize],
    level_max: usize,
    exec: Exec,
) -> Result<VariantSelection, RedmatError> {
    if p_samples.len() < 2 {
        return Err(RedmatError::TooFewSamples(p_samples.len()));
    }
    if n == 0 {
        return Err(RedmatError::NoBosons);
    }
    let mut stats = Vec::new();
    let mut survivors = Vec::new();
    for v in ParsingVariant::candidates(m) {
        let rep = id2_sweep(m, n, p_samples, level_max, v, exec);
        if rep.ok() {
            survivors.push(v);
        }
        stats.push(VariantStats {
            variant: v.to_string(),
            checked: rep.checked,
            failures: rep.failures.len(),
            zero_denominators: rep.zero_denominators,
        });
    }
    match survivors.as_slice() {
        [v] => Ok(VariantSelection {
            chosen: v.to_string(),
            variant: *v,
            stats,
        }),
        [] => Err(RedmatError::NoSurvivor(stats)),
        _ => Err(RedmatError::MultipleSurvivors(stats)),
    }
}

/// One row of a `G_k` table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GkRecord {
    pub top: TopRow,
    pub k: usize,
    pub p: usize,
    pub value: SignedSqrt,
}

/// `G_k` for all capped top rows up to `level_max` and all `k`.
pub fn gk_table(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    variant: ParsingVariant,
    exec: Exec,
) -> Result<Vec<GkRecord>, RedmatError> {
    let tops = capped_tops(m, n, p, level_max);
    exec.map(&tops, |t| {
        (1..=t.r())
            .map(|k| {
                gk(t, k, p, variant).map(|value| GkRecord {
                    top: t.clone(),
                    k,
                    p,
                    value,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })
    .into_iter()
    .collect::<Result<Vec<Vec<_>>, _>>()
    .map(|v| v.into_iter().flatten().collect())
}

/// Behaviour of the printed expression outside the admissible set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RaisingStats {
    pub evaluated: usize,
    /// Admissible raisings with a negative square (would break unitarity).
    pub negative: usize,
    /// Inadmissible raisings where the printed expression is nonzero.
    pub nonzero_inadmissible: usize,
    pub zero_denominators: usize,
    /// Tops with `λ_1 = p` whose first label still has nonzero `G_1²`.
    pub cut_violations: usize,
}

pub fn raising_stats(
    m: usize,
    n: usize,
    ps: &[usize],
    level_max: usize,
    variant: ParsingVariant,
) -> RaisingStats {
    let mut s = RaisingStats::default();
    for &p in ps {
        for top in capped_tops(m, n, p, level_max) {
            for k in 1..=top.r() {
                let admissible = raise_top_row(&top, k).is_some();
                match gk_squared_raw(&top, k, p, variant) {
                    Err(_) => s.zero_denominators += 1,
                    Ok(v) => {
                        s.evaluated += 1;
                        if admissible && v.is_negative() {
                            s.negative += 1;
                        }
                        if !admissible && !v.is_zero() {
                            s.nonzero_inadmissible += 1;
                        }
                        if m >= 1 && k == 1 && top.get(1) == p as i64 && !v.is_zero() {
                            s.cut_violations += 1;
                        }
                    }
                }
            }
        }
    }
    s
}
