//! Matrix realization of `osp(2m+1|2n)` and its para-generators.
//!
//! Rows and columns are 1-based in every public interface, matching the
//! elementary matrices `e_{ij}`. Indices `1..=2m+1` are even, indices
//! `2m+2..=2m+2n+1` are odd.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{self, Expander};
use crate::{q_int, Dims, Q};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OspError {
    #[error("generator index {index} outside 1..={r}")]
    IndexOutOfRange { index: usize, r: usize },
    #[error("matrix sizes differ ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("matrix is not parity-homogeneous")]
    Inhomogeneous,
    #[error("cannot add matrices with odd and even powers of sqrt(2)")]
    IrrationalSum,
    #[error("value carries an odd power of sqrt(2) and is not rational")]
    NotRational,
    #[error("bracket {0} does not re-expand in the basis")]
    Inconsistent(String),
    #[error("malformed matrix dump: {0}")]
    Dump(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }

    pub const BOTH: [Sign; 2] = [Sign::Plus, Sign::Minus];
}

/// The para-generator `c_j^{sign}`, `j` 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GeneratorId {
    pub index: usize,
    pub sign: Sign,
}

impl GeneratorId {
    pub fn new(index: usize, sign: Sign) -> Self {
        GeneratorId { index, sign }
    }

    pub fn plus(index: usize) -> Self {
        Self::new(index, Sign::Plus)
    }

    pub fn minus(index: usize) -> Self {
        Self::new(index, Sign::Minus)
    }

    pub fn is_odd(&self, dims: Dims) -> bool {
        dims.is_odd(self.index)
    }
}

impl fmt::Display for GeneratorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.sign {
            Sign::Plus => '+',
            Sign::Minus => '-',
        };
        write!(f, "c{}{}", self.index, s)
    }
}

/// A parity-homogeneous matrix `sqrt(2)^sqrt2 * entries`.
#[derive(Clone, Debug)]
pub struct SuperMatrix {
    dims: Dims,
    entries: Vec<Q>,
    sqrt2: u32,
    odd: bool,
}

impl SuperMatrix {
    pub fn zero(dims: Dims, odd: bool) -> Self {
        let s = dims.size();
        SuperMatrix {
            dims,
            entries: vec![Q::zero(); s * s],
            sqrt2: 0,
            odd,
        }
    }

    /// Builds `sqrt(2)^sqrt2 * sum coeff * e_{row,col}` from 1-based triplets.
    pub fn from_triplets(
        dims: Dims,
        triplets: &[(usize, usize, Q)],
        sqrt2: u32,
    ) -> Result<Self, OspError> {
        let s = dims.size();
        let mut entries = vec![Q::zero(); s * s];
        let mut parity = None;
        for (row, col, v) in triplets {
            if *row == 0 || *col == 0 || *row > s || *col > s {
                return Err(OspError::SizeMismatch(s, (*row).max(*col)));
            }
            if v.is_zero() {
                continue;
            }
            let p = index_odd(dims, *row) != index_odd(dims, *col);
            match parity {
                None => parity = Some(p),
                Some(q) if q != p => return Err(OspError::Inhomogeneous),
                _ => {}
            }
            entries[(row - 1) * s + (col - 1)] += v.clone();
        }
        let mut out = SuperMatrix {
            dims,
            entries,
            sqrt2,
            odd: parity.unwrap_or(false),
        };
        out.normalize();
        Ok(out)
    }

    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn is_odd(&self) -> bool {
        self.odd
    }

    pub fn sqrt2_power(&self) -> u32 {
        self.sqrt2
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Entry `(row, col)` (1-based) of the rational part.
    pub fn get(&self, row: usize, col: usize) -> &Q {
        let s = self.dims.size();
        &self.entries[(row - 1) * s + (col - 1)]
    }

    pub fn rational_part(&self) -> &[Q] {
        &self.entries
    }

    /// The entries as plain rationals; fails for an odd power of `sqrt(2)`.
    pub fn to_rational(&self) -> Result<Vec<Q>, OspError> {
        if self.is_zero() {
            return Ok(self.entries.clone());
        }
        if self.sqrt2 % 2 == 1 {
            return Err(OspError::NotRational);
        }
        Ok(self.entries.clone())
    }

    fn normalize(&mut self) {
        if self.is_zero() {
            self.sqrt2 = 0;
            return;
        }
        if self.sqrt2 >= 2 {
            let factor = Q::from_integer(BigInt::one() << (self.sqrt2 / 2));
            for e in self.entries.iter_mut() {
                *e *= &factor;
            }
            self.sqrt2 %= 2;
        }
    }

    pub fn scale(&self, c: &Q) -> Self {
        let mut out = self.clone();
        for e in out.entries.iter_mut() {
            *e *= c;
        }
        out.normalize();
        out
    }

    pub fn add(&self, other: &Self) -> Result<Self, OspError> {
        self.check_size(other)?;
        if other.is_zero() {
            return Ok(self.clone());
        }
        if self.is_zero() {
            return Ok(other.clone());
        }
        if self.odd != other.odd {
            return Err(OspError::Inhomogeneous);
        }
        if self.sqrt2 != other.sqrt2 {
            return Err(OspError::IrrationalSum);
        }
        let mut out = self.clone();
        for (a, b) in out.entries.iter_mut().zip(&other.entries) {
            *a += b;
        }
        out.normalize();
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, OspError> {
        self.add(&other.scale(&q_int(-1)))
    }

    fn check_size(&self, other: &Self) -> Result<(), OspError> {
        if self.dims != other.dims {
            return Err(OspError::SizeMismatch(self.dims.size(), other.dims.size()));
        }
        Ok(())
    }

    fn product(&self, other: &Self) -> SuperMatrix {
        let s = self.dims.size();
        let mut entries = vec![Q::zero(); s * s];
        for i in 0..s {
            for k in 0..s {
                let a = &self.entries[i * s + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..s {
                    let b = &other.entries[k * s + j];
                    if !b.is_zero() {
                        entries[i * s + j] += a * b;
                    }
                }
            }
        }
        let mut out = SuperMatrix {
            dims: self.dims,
            entries,
            sqrt2: self.sqrt2 + other.sqrt2,
            odd: self.odd ^ other.odd,
        };
        out.normalize();
        out
    }

    /// Nonzero entries as 1-based `(row, col, value)` of the rational part.
    pub fn nonzero(&self) -> Vec<(usize, usize, Q)> {
        let s = self.dims.size();
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i / s + 1, i % s + 1, v.clone()))
            .collect()
    }
}

impl PartialEq for SuperMatrix {
    fn eq(&self, other: &Self) -> bool {
        if self.dims != other.dims {
            return false;
        }
        match (self.is_zero(), other.is_zero()) {
            (true, true) => true,
            (false, false) => {
                self.sqrt2 == other.sqrt2 && self.odd == other.odd && self.entries == other.entries
            }
            _ => false,
        }
    }
}

fn index_odd(dims: Dims, i: usize) -> bool {
    i > 2 * dims.m + 1
}

/// `⟦a, b⟧ = ab − (−1)^{|a||b|} ba`.
pub fn superbracket(a: &SuperMatrix, b: &SuperMatrix) -> Result<SuperMatrix, OspError> {
    a.check_size(b)?;
    let ab = a.product(b);
    let ba = b.product(a);
    let sign = if a.odd && b.odd { 1 } else { -1 };
    let mut out = ab;
    for (x, y) in out.entries.iter_mut().zip(&ba.entries) {
        if sign == 1 {
            *x += y;
        } else {
            *x -= y;
        }
    }
    out.normalize();
    Ok(out)
}

/// The para-generator `c_j^±` as a matrix carrying one factor of `sqrt(2)`.
pub fn make_generator(id: GeneratorId, dims: Dims) -> Result<SuperMatrix, OspError> {
    let (m, n) = (dims.m, dims.n);
    let j = id.index;
    if j == 0 || j > dims.r() {
        return Err(OspError::IndexOutOfRange {
            index: j,
            r: dims.r(),
        });
    }
    let one = Q::one;
    let neg = || -Q::one();
    let mid = 2 * m + 1;
    let t: Vec<(usize, usize, Q)> = if j <= m {
        match id.sign {
            Sign::Plus => vec![(j, mid, one()), (mid, j + m, neg())],
            Sign::Minus => vec![(mid, j, one()), (j + m, mid, neg())],
        }
    } else {
        let b = j - m;
        match id.sign {
            Sign::Plus => vec![(mid, mid + n + b, one()), (mid + b, mid, one())],
            Sign::Minus => vec![(mid, mid + b, one()), (mid + n + b, mid, neg())],
        }
    };
    SuperMatrix::from_triplets(dims, &t, 1)
}

/// Cartan element `h_k` (1-based).
pub fn cartan(k: usize, dims: Dims) -> Result<SuperMatrix, OspError> {
    let m = dims.m;
    if k == 0 || k > dims.r() {
        return Err(OspError::IndexOutOfRange {
            index: k,
            r: dims.r(),
        });
    }
    let t = if k <= m {
        vec![(k, k, Q::one()), (k + m, k + m, -Q::one())]
    } else {
        let j = k - m;
        let a = 2 * m + 1 + j;
        vec![(a, a, Q::one()), (a + dims.n, a + dims.n, -Q::one())]
    };
    SuperMatrix::from_triplets(dims, &t, 0)
}

fn generators(dims: Dims) -> BTreeMap<GeneratorId, SuperMatrix> {
    (1..=dims.r())
        .flat_map(|j| Sign::BOTH.map(|s| GeneratorId::new(j, s)))
        .map(|g| (g, make_generator(g, dims).expect("index in range")))
        .collect()
}

/// One instance of a relation that failed to hold exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationFailure {
    pub relation: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub checked: usize,
    pub failures: Vec<RelationFailure>,
}

impl RelationReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Right-hand side of the triple relation for `⟦⟦c_j^ξ, c_k^η⟧, c_l^ε⟧`.
fn triple_rhs(
    dims: Dims,
    gens: &BTreeMap<GeneratorId, SuperMatrix>,
    a: GeneratorId,
    b: GeneratorId,
    c: GeneratorId,
) -> SuperMatrix {
    let deg = |g: GeneratorId| dims.is_odd(g.index) as u32;
    let eps = c.sign.value();
    let eps_l = if deg(c) == 1 { eps } else { 1 };
    let mut out = SuperMatrix::zero(dims, deg(a) ^ deg(b) ^ deg(c) == 1);
    if a.index == c.index && c.sign == a.sign.flip() {
        let sign = if deg(b) * deg(c) == 1 { -1 } else { 1 };
        let coeff = q_int(-2 * eps_l * sign);
        out = out.add(&gens[&b].scale(&coeff)).expect("same class");
    }
    if b.index == c.index && c.sign == b.sign.flip() {
        let coeff = q_int(2 * eps_l);
        out = out.add(&gens[&a].scale(&coeff)).expect("same class");
    }
    out
}

/// Checks every triple relation `⟦⟦c_j^ξ, c_k^η⟧, c_l^ε⟧ = …` in the matrix
/// realization.
pub fn verify_triple_relations(dims: Dims) -> RelationReport {
    let gens = generators(dims);
    let ids: Vec<GeneratorId> = gens.keys().copied().collect();
    let mut checked = 0;
    let mut failures = Vec::new();
    for &a in &ids {
        for &b in &ids {
            let ab = superbracket(&gens[&a], &gens[&b]).expect("same size");
            for &c in &ids {
                checked += 1;
                let lhs = superbracket(&ab, &gens[&c]).expect("same size");
                let rhs = triple_rhs(dims, &gens, a, b, c);
                if lhs != rhs {
                    failures.push(RelationFailure {
                        relation: format!("[[{a},{b}],{c}]"),
                    });
                }
            }
        }
    }
    RelationReport { checked, failures }
}

/// Checks the parafermion relations on `c_1..c_m` and the paraboson
/// relations on `c_{m+1}..c_{m+n}`.
pub fn verify_para_relations(dims: Dims) -> RelationReport {
    let gens = generators(dims);
    let mut checked = 0;
    let mut failures = Vec::new();
    let sectors: [(std::ops::RangeInclusive<usize>, bool); 2] =
        [(1..=dims.m, false), (dims.m + 1..=dims.r(), true)];
    for (range, boson) in sectors {
        let ids: Vec<GeneratorId> = range
            .flat_map(|j| Sign::BOTH.map(|s| GeneratorId::new(j, s)))
            .collect();
        for &a in &ids {
            for &b in &ids {
                let ab = superbracket(&gens[&a], &gens[&b]).expect("same size");
                for &c in &ids {
                    checked += 1;
                    let lhs = superbracket(&ab, &gens[&c]).expect("same size");
                    let (xi, eta, eps) = (a.sign.value(), b.sign.value(), c.sign.value());
                    let mut rhs = SuperMatrix::zero(dims, boson);
                    if boson {
                        if a.index == c.index {
                            rhs = rhs.add(&gens[&b].scale(&q_int(eps - xi))).unwrap();
                        }
                        if b.index == c.index {
                            rhs = rhs.add(&gens[&a].scale(&q_int(eps - eta))).unwrap();
                        }
                    } else {
                        let half = |d: i64| Q::new((d * d).into(), 2.into());
                        if b.index == c.index {
                            rhs = rhs.add(&gens[&a].scale(&half(eps - eta))).unwrap();
                        }
                        if a.index == c.index {
                            rhs = rhs.add(&gens[&b].scale(&-half(eps - xi))).unwrap();
                        }
                    }
                    if lhs != rhs {
                        let (open, close) = if boson { ('{', '}') } else { ('[', ']') };
                        failures.push(RelationFailure {
                            relation: format!("[{open}{a},{b}{close},{c}]"),
                        });
                    }
                }
            }
        }
    }
    RelationReport { checked, failures }
}

/// Label of an algebra basis element.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum BasisLabel {
    /// A single para-generator.
    Gen(GeneratorId),
    /// The bracket `⟦first, second⟧`.
    Pair(GeneratorId, GeneratorId),
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Gen(g) => write!(f, "{g}"),
            BasisLabel::Pair(a, b) => write!(f, "[{a},{b}]"),
        }
    }
}

/// Sparse linear combination of basis elements, sorted by index.
pub type Element = Vec<(usize, Q)>;

/// A basis of `osp(2m+1|2n)` made of the para-generators and their
/// independent brackets, together with the full bracket table.
#[derive(Clone, Debug)]
pub struct AlgebraBasis {
    dims: Dims,
    labels: Vec<BasisLabel>,
    matrices: Vec<SuperMatrix>,
    index: BTreeMap<BasisLabel, usize>,
    table: Vec<Vec<Element>>,
}

fn canonical_labels(dims: Dims) -> Vec<BasisLabel> {
    let r = dims.r();
    let mut labels = Vec::new();
    for j in 1..=r {
        labels.push(BasisLabel::Gen(GeneratorId::plus(j)));
    }
    for j in 1..=r {
        labels.push(BasisLabel::Gen(GeneratorId::minus(j)));
    }
    for sign in Sign::BOTH {
        for j in 1..=r {
            for k in j..=r {
                if j == k && !dims.is_odd(j) {
                    continue;
                }
                labels.push(BasisLabel::Pair(
                    GeneratorId::new(j, sign),
                    GeneratorId::new(k, sign),
                ));
            }
        }
    }
    for j in 1..=r {
        for k in 1..=r {
            labels.push(BasisLabel::Pair(
                GeneratorId::plus(j),
                GeneratorId::minus(k),
            ));
        }
    }
    labels
}

/// Builds the algebra basis and its bracket table, checking that every
/// bracket of two basis elements re-expands exactly.
pub fn structure_constants(dims: Dims) -> Result<AlgebraBasis, OspError> {
    let gens = generators(dims);
    let labels = canonical_labels(dims);
    let matrices: Vec<SuperMatrix> = labels
        .iter()
        .map(|l| match l {
            BasisLabel::Gen(g) => Ok(gens[g].clone()),
            BasisLabel::Pair(a, b) => superbracket(&gens[a], &gens[b]),
        })
        .collect::<Result<_, _>>()?;

    // Generators carry sqrt(2)^1, brackets sqrt(2)^0; each class is
    // expanded separately so every coefficient stays rational.
    let classes: [Vec<usize>; 2] = [
        (0..labels.len())
            .filter(|&i| matrices[i].sqrt2 == 0)
            .collect(),
        (0..labels.len())
            .filter(|&i| matrices[i].sqrt2 == 1)
            .collect(),
    ];
    let expanders: Vec<Expander> = classes
        .iter()
        .map(|cls| {
            let vecs: Vec<Vec<Q>> = cls.iter().map(|&i| matrices[i].entries.clone()).collect();
            Expander::new(&vecs).ok_or_else(|| OspError::Inconsistent("basis is dependent".into()))
        })
        .collect::<Result<_, _>>()?;

    let mut table = vec![vec![Vec::new(); labels.len()]; labels.len()];
    for a in 0..labels.len() {
        for b in 0..labels.len() {
            let br = superbracket(&matrices[a], &matrices[b])?;
            if br.is_zero() {
                continue;
            }
            let cls = br.sqrt2 as usize;
            let coeffs = expanders[cls]
                .expand(&br.entries)
                .ok_or_else(|| OspError::Inconsistent(format!("[{}, {}]", labels[a], labels[b])))?;
            table[a][b] = classes[cls]
                .iter()
                .zip(coeffs)
                .filter(|(_, c)| !c.is_zero())
                .map(|(&i, c)| (i, c))
                .collect();
            table[a][b].sort_by_key(|(i, _)| *i);
        }
    }
    let index = labels.iter().enumerate().map(|(i, l)| (*l, i)).collect();
    Ok(AlgebraBasis {
        dims,
        labels,
        matrices,
        index,
        table,
    })
}

impl AlgebraBasis {
    pub fn dims(&self) -> Dims {
        self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> BasisLabel {
        self.labels[i]
    }

    pub fn matrix(&self, i: usize) -> &SuperMatrix {
        &self.matrices[i]
    }

    pub fn index_of(&self, label: BasisLabel) -> Option<usize> {
        self.index.get(&label).copied()
    }

    /// Index of the generator `c_j^±`.
    pub fn generator(&self, g: GeneratorId) -> usize {
        self.index[&BasisLabel::Gen(g)]
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.matrices[i].odd
    }

    /// Bracket of two basis elements as a combination of basis elements.
    pub fn bracket(&self, a: usize, b: usize) -> &Element {
        &self.table[a][b]
    }

    /// `⟦c_j^ξ, c_k^η⟧` expanded in the basis.
    pub fn bracket_of(&self, a: GeneratorId, b: GeneratorId) -> &Element {
        self.bracket(self.generator(a), self.generator(b))
    }

    /// `h_k = ½ ⟦c_k^+, c_k^-⟧`.
    pub fn cartan(&self, k: usize) -> Element {
        let i = self.index[&BasisLabel::Pair(GeneratorId::plus(k), GeneratorId::minus(k))];
        vec![(i, Q::new(1.into(), 2.into()))]
    }

    /// Matrix of a linear combination; combinations mixing sqrt(2) classes
    /// are rejected.
    pub fn element_matrix(&self, e: &Element) -> Result<SuperMatrix, OspError> {
        let mut acc: Option<SuperMatrix> = None;
        for (i, c) in e {
            let term = self.matrices[*i].scale(c);
            acc = Some(match acc {
                None => term,
                Some(a) => a.add(&term)?,
            });
        }
        Ok(acc.unwrap_or_else(|| SuperMatrix::zero(self.dims, false)))
    }

    /// Bracket of two combinations using the structure constants.
    pub fn bracket_elements(&self, x: &Element, y: &Element) -> Element {
        let mut acc: BTreeMap<usize, Q> = BTreeMap::new();
        for (a, ca) in x {
            for (b, cb) in y {
                for (k, ck) in &self.table[*a][*b] {
                    *acc.entry(*k).or_insert_with(Q::zero) += ca * cb * ck;
                }
            }
        }
        acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
    }

    /// Indices of the `(m+n)²` elements `⟦c_j^+, c_k^-⟧`.
    pub fn umn_indices(&self) -> Vec<usize> {
        let r = self.dims.r();
        (1..=r)
            .flat_map(|j| (1..=r).map(move |k| (j, k)))
            .map(|(j, k)| {
                self.index[&BasisLabel::Pair(GeneratorId::plus(j), GeneratorId::minus(k))]
            })
            .collect()
    }

    /// True iff every bracket of two `u(m|n)` elements stays in `u(m|n)`.
    pub fn umn_closed(&self) -> bool {
        let sub = self.umn_indices();
        sub.iter().all(|&a| {
            sub.iter()
                .all(|&b| self.table[a][b].iter().all(|(k, _)| sub.contains(k)))
        })
    }

    /// Checks `⟦a,b⟧ = −(−1)^{|a||b|} ⟦b,a⟧` on the whole table.
    pub fn is_antisupersymmetric(&self) -> bool {
        (0..self.len()).all(|a| {
            (0..self.len()).all(|b| {
                let s = if self.is_odd(a) && self.is_odd(b) {
                    1
                } else {
                    -1
                };
                let flipped: Element = self.table[b][a]
                    .iter()
                    .map(|(k, c)| (*k, c * q_int(s)))
                    .collect();
                self.table[a][b] == flipped
            })
        })
    }

    /// Number of even and odd basis elements.
    pub fn graded_dimension(&self) -> (usize, usize) {
        let odd = (0..self.len()).filter(|&i| self.is_odd(i)).count();
        (self.len() - odd, odd)
    }
}

/// `dim so(2m+1) + dim sp(2n)`.
pub fn even_dimension(dims: Dims) -> usize {
    dims.m * (2 * dims.m + 1) + dims.n * (2 * dims.n + 1)
}

/// Rank of the span of the even-subalgebra spanning set built from the
/// generators: `[c_i, c_k]`, `c_l` (`i,k,l ≤ m`) and `{c_{m+j}, c_{m+s}}`.
pub fn even_subalgebra_rank(dims: Dims) -> usize {
    let gens = generators(dims);
    let mut vecs: Vec<Vec<Q>> = Vec::new();
    let fermions: Vec<GeneratorId> = gens.keys().filter(|g| g.index <= dims.m).copied().collect();
    let bosons: Vec<GeneratorId> = gens.keys().filter(|g| g.index > dims.m).copied().collect();
    // Generators carry sqrt(2); rescaling by a nonzero constant keeps the rank.
    for g in &fermions {
        vecs.push(gens[g].entries.clone());
    }
    for set in [&fermions, &bosons] {
        for a in set.iter() {
            for b in set.iter() {
                vecs.push(superbracket(&gens[a], &gens[b]).unwrap().entries);
            }
        }
    }
    linalg::rank(&vecs)
}

/// Rank of the span of the `(m+n)²` elements `⟦c_j^+, c_k^-⟧`.
pub fn umn_rank(dims: Dims) -> usize {
    let gens = generators(dims);
    let r = dims.r();
    let vecs: Vec<Vec<Q>> = (1..=r)
        .flat_map(|j| (1..=r).map(move |k| (j, k)))
        .map(|(j, k)| {
            superbracket(&gens[&GeneratorId::plus(j)], &gens[&GeneratorId::minus(k)])
                .unwrap()
                .entries
        })
        .collect();
    linalg::rank(&vecs)
}

/// A root as coefficients on `(ε_1..ε_m, δ_1..δ_n)`.
pub type Root = Vec<i64>;

/// The root vectors listed for the realization, with their roots.
pub fn root_vectors(dims: Dims) -> Vec<(Root, SuperMatrix)> {
    let (m, n) = (dims.m, dims.n);
    let r = dims.r();
    let mid = 2 * m + 1;
    let eps = |j: usize, s: i64| {
        let mut v = vec![0; r];
        v[j - 1] += s;
        v
    };
    let del = |j: usize, s: i64| eps(m + j, s);
    let add = |a: Root, b: Root| a.iter().zip(&b).map(|(x, y)| x + y).collect::<Root>();
    let mk = |t: Vec<(usize, usize, i64)>| {
        let t: Vec<(usize, usize, Q)> = t.into_iter().map(|(a, b, c)| (a, b, q_int(c))).collect();
        SuperMatrix::from_triplets(dims, &t, 0).expect("homogeneous root vector")
    };
    let mut out = Vec::new();
    for j in 1..=m {
        for k in 1..=m {
            if j != k {
                out.push((
                    add(eps(j, 1), eps(k, -1)),
                    mk(vec![(j, k, 1), (k + m, j + m, -1)]),
                ));
            }
            if j < k {
                out.push((
                    add(eps(j, 1), eps(k, 1)),
                    mk(vec![(j, k + m, 1), (k, j + m, -1)]),
                ));
                out.push((
                    add(eps(j, -1), eps(k, -1)),
                    mk(vec![(j + m, k, 1), (k + m, j, -1)]),
                ));
            }
        }
        out.push((eps(j, 1), mk(vec![(j, mid, 1), (mid, j + m, -1)])));
        out.push((eps(j, -1), mk(vec![(j + m, mid, 1), (mid, j, -1)])));
    }
    for j in 1..=n {
        for k in 1..=n {
            if j != k {
                out.push((
                    add(del(j, 1), del(k, -1)),
                    mk(vec![(mid + j, mid + k, 1), (n + mid + k, n + mid + j, -1)]),
                ));
            }
            if j <= k {
                out.push((
                    add(del(j, 1), del(k, 1)),
                    mk(vec![(mid + j, mid + k + n, 1), (mid + k, mid + j + n, 1)]),
                ));
                out.push((
                    add(del(j, -1), del(k, -1)),
                    mk(vec![(mid + n + j, mid + k, 1), (mid + n + k, mid + j, 1)]),
                ));
            }
        }
    }
    for j in 1..=m {
        for k in 1..=n {
            out.push((
                add(eps(j, 1), del(k, -1)),
                mk(vec![(j, mid + k, 1), (mid + n + k, j + m, -1)]),
            ));
            out.push((
                add(eps(j, -1), del(k, -1)),
                mk(vec![(m + j, mid + k, 1), (mid + n + k, j, -1)]),
            ));
            out.push((
                add(eps(j, 1), del(k, 1)),
                mk(vec![(j, mid + n + k, 1), (mid + k, m + j, 1)]),
            ));
            out.push((
                add(eps(j, -1), del(k, 1)),
                mk(vec![(m + j, mid + n + k, 1), (mid + k, j, 1)]),
            ));
        }
    }
    for k in 1..=n {
        out.push((
            del(k, -1),
            mk(vec![(mid, mid + k, 1), (mid + n + k, mid, -1)]),
        ));
        out.push((
            del(k, 1),
            mk(vec![(mid, mid + n + k, 1), (mid + k, mid, 1)]),
        ));
    }
    out
}

/// One triplet record of the matrix dump format.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripletRecord {
    pub element: String,
    pub row: usize,
    pub col: usize,
    pub numerator: i64,
    pub denominator: i64,
    pub sqrt2_power: u32,
}

fn to_i64(x: &BigInt) -> Result<i64, OspError> {
    x.to_i64()
        .ok_or_else(|| OspError::Dump(format!("{x} does not fit in 64 bits")))
}

/// Sparse triplet records for a named matrix.
pub fn matrix_records(name: &str, mat: &SuperMatrix) -> Result<Vec<TripletRecord>, OspError> {
    mat.nonzero()
        .into_iter()
        .map(|(row, col, v)| {
            Ok(TripletRecord {
                element: name.to_string(),
                row,
                col,
                numerator: to_i64(v.numer())?,
                denominator: to_i64(v.denom())?,
                sqrt2_power: mat.sqrt2,
            })
        })
        .collect()
}

/// JSON-lines dump of every basis matrix.
pub fn dump_basis_jsonl(basis: &AlgebraBasis) -> Result<String, OspError> {
    let mut out = String::new();
    for (label, mat) in basis.labels.iter().zip(&basis.matrices) {
        for rec in matrix_records(&label.to_string(), mat)? {
            out.push_str(&serde_json::to_string(&rec).expect("plain record"));
            out.push('\n');
        }
    }
    Ok(out)
}

type Triplets = Vec<(usize, usize, Q)>;

/// Parses a JSON-lines dump back into named matrices, in first-seen order.
pub fn parse_jsonl(dims: Dims, text: &str) -> Result<Vec<(String, SuperMatrix)>, OspError> {
    let mut order: Vec<String> = Vec::new();
    let mut groups: BTreeMap<String, (u32, Triplets)> = BTreeMap::new();
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let rec: TripletRecord =
            serde_json::from_str(line).map_err(|e| OspError::Dump(e.to_string()))?;
        if rec.denominator == 0 {
            return Err(OspError::Dump("zero denominator".into()));
        }
        let entry = groups.entry(rec.element.clone()).or_insert_with(|| {
            order.push(rec.element.clone());
            (rec.sqrt2_power, Vec::new())
        });
        if entry.0 != rec.sqrt2_power {
            return Err(OspError::Dump(format!(
                "mixed sqrt2 powers in {}",
                rec.element
            )));
        }
        entry.1.push((
            rec.row,
            rec.col,
            Q::new(rec.numerator.into(), rec.denominator.into()),
        ));
    }
    order
        .into_iter()
        .map(|name| {
            let (s, t) = &groups[&name];
            Ok((name.clone(), SuperMatrix::from_triplets(dims, t, *s)?))
        })
        .collect()
}

/// Weight of a root vector read off from the Cartan action; `None` if the
/// matrix is not an eigenvector.
pub fn cartan_weight(mat: &SuperMatrix) -> Option<Root> {
    let dims = mat.dims;
    (1..=dims.r())
        .map(|k| {
            let h = cartan(k, dims).ok()?;
            let br = superbracket(&h, mat).ok()?;
            // Find the scalar λ with br = λ·mat.
            let (row, col, v) = mat.nonzero().into_iter().next()?;
            let lambda = br.get(row, col).clone() / v;
            if br != mat.scale(&lambda) {
                return None;
            }
            if !lambda.is_integer() {
                return None;
            }
            to_i64(&lambda.to_integer()).ok()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(m: usize, n: usize) -> Dims {
        Dims::new(m, n).unwrap()
    }

    fn triplets(v: &[(usize, usize, i64)]) -> Vec<(usize, usize, Q)> {
        v.iter().map(|&(a, b, c)| (a, b, q_int(c))).collect()
    }

    #[test]
    fn generator_shapes() {
        let dims = d(1, 1);
        let c1 = make_generator(GeneratorId::plus(1), dims).unwrap();
        let want =
            SuperMatrix::from_triplets(dims, &triplets(&[(1, 3, 1), (3, 2, -1)]), 1).unwrap();
        assert_eq!(c1, want);
        assert!(!c1.is_odd());
        assert_eq!(c1.sqrt2_power(), 1);

        let c2 = make_generator(GeneratorId::plus(2), dims).unwrap();
        let want = SuperMatrix::from_triplets(dims, &triplets(&[(3, 5, 1), (4, 3, 1)]), 1).unwrap();
        assert_eq!(c2, want);
        assert!(c2.is_odd());

        assert_eq!(
            make_generator(GeneratorId::plus(0), dims),
            Err(OspError::IndexOutOfRange { index: 0, r: 2 })
        );
        assert!(make_generator(GeneratorId::minus(3), dims).is_err());
    }

    #[test]
    fn cartan_brackets() {
        let dims = d(1, 1);
        let g = |j, s| make_generator(GeneratorId::new(j, s), dims).unwrap();
        let h1 = cartan(1, dims).unwrap();
        let h2 = cartan(2, dims).unwrap();
        let b = superbracket(&g(1, Sign::Minus), &g(1, Sign::Plus)).unwrap();
        assert_eq!(b, h1.scale(&q_int(-2)));
        let b = superbracket(&g(2, Sign::Minus), &g(2, Sign::Plus)).unwrap();
        assert_eq!(b, h2.scale(&q_int(2)));
        let b = superbracket(&h1, &h1).unwrap();
        assert!(b.is_zero());
        assert_eq!(
            superbracket(&h1, &g(1, Sign::Plus)).unwrap(),
            g(1, Sign::Plus)
        );
    }

    #[test]
    fn inhomogeneous_and_irrational_inputs_are_rejected() {
        let dims = d(1, 1);
        let bad = SuperMatrix::from_triplets(dims, &triplets(&[(1, 1, 1), (1, 4, 1)]), 0);
        assert_eq!(bad.unwrap_err(), OspError::Inhomogeneous);
        let c = make_generator(GeneratorId::plus(1), dims).unwrap();
        let h = cartan(1, dims).unwrap();
        assert_eq!(c.add(&h).unwrap_err(), OspError::IrrationalSum);
        assert_eq!(c.to_rational().unwrap_err(), OspError::NotRational);
        let other = SuperMatrix::zero(d(2, 1), false);
        assert!(matches!(
            superbracket(&c, &other),
            Err(OspError::SizeMismatch(..))
        ));
    }

    #[test]
    fn triple_relations_hold_for_small_ranks() {
        let rep = verify_triple_relations(d(1, 1));
        assert_eq!(rep.checked, 64);
        assert!(rep.ok(), "{:?}", rep.failures);
        assert!(verify_triple_relations(d(2, 2)).ok());
    }

    #[test]
    fn single_triple_relation_instance() {
        for m in 1..=3 {
            let dims = d(m, 1);
            let g = |s| make_generator(GeneratorId::new(1, s), dims).unwrap();
            let inner = superbracket(&g(Sign::Plus), &g(Sign::Minus)).unwrap();
            let lhs = superbracket(&inner, &g(Sign::Plus)).unwrap();
            assert_eq!(lhs, g(Sign::Plus).scale(&q_int(2)));
        }
    }

    #[test]
    fn para_relations_per_sector() {
        let rep = verify_para_relations(d(2, 0));
        assert!(rep.ok() && rep.checked == 64);
        let rep = verify_para_relations(d(0, 2));
        assert!(rep.ok() && rep.checked == 64);

        let dims = d(0, 1);
        let b = |s| make_generator(GeneratorId::new(1, s), dims).unwrap();
        let bb = superbracket(&b(Sign::Plus), &b(Sign::Plus)).unwrap();
        let lhs = superbracket(&bb, &b(Sign::Minus)).unwrap();
        assert_eq!(lhs, b(Sign::Plus).scale(&q_int(-4)));
    }

    #[test]
    fn basis_for_osp_3_2() {
        let basis = structure_constants(d(1, 1)).unwrap();
        assert_eq!(basis.len(), 12);
        assert_eq!(basis.umn_indices().len(), 4);
        assert_eq!(umn_rank(d(1, 1)), 4);
        assert!(basis.umn_closed());
        assert!(basis.is_antisupersymmetric());
        let h1 = basis.cartan(1);
        let c1 = vec![(basis.generator(GeneratorId::plus(1)), Q::one())];
        assert_eq!(basis.bracket_elements(&h1, &c1), c1);
    }

    #[test]
    fn dump_round_trip() {
        let dims = d(1, 1);
        let basis = structure_constants(dims).unwrap();
        let text = dump_basis_jsonl(&basis).unwrap();
        let parsed = parse_jsonl(dims, &text).unwrap();
        assert_eq!(parsed.len(), basis.len());
        for ((name, mat), label) in parsed.iter().zip(basis.labels()) {
            assert_eq!(name, &label.to_string());
            assert_eq!(mat, basis.matrix(basis.index_of(*label).unwrap()));
        }
        let first = text.lines().next().unwrap();
        let v: serde_json::Value = serde_json::from_str(first).unwrap();
        assert_eq!(v["row"], 1);
        assert_eq!(v["col"], 3);
        assert_eq!(v["sqrt2_power"], 1);
    }
}
