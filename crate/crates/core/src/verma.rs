//! The induced module on PBW monomials and its contravariant form.
//!
//! The module is spanned by ordered monomials in the raising part
//! `{c_j^+} ∪ {⟦c_j^+, c_k^+⟧ : j < k}` applied to the vacuum. Algebra
//! elements act by straightening through the monomial with the bracket
//! table of [`crate::osp`]; the form is computed by peeling factors off the
//! left argument with the anti-automorphism `ω` (`c^± ↦ c^∓`, order reversed).

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::rc::Rc;

use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::gz::{patterns_by_content, DoubledWeight, GzPattern};
use crate::linalg::{nullspace, solve, symmetric_rank_psd};
use crate::osp::{
    structure_constants, AlgebraBasis, BasisLabel, Element, GeneratorId, OspError, Sign,
};
use crate::redmat::{id2_parts, ParsingVariant, ThetaConfig};
use crate::symfunc::lowest_weight_doubled;
use crate::{q_int, Dims, Exec, Q};

#[derive(Debug, Error)]
pub enum VermaError {
    #[error(transparent)]
    Osp(#[from] OspError),
    #[error("m + n must be at least 1")]
    EmptyRank,
    #[error("unknown algebra element {0}")]
    UnknownElement(usize),
    #[error("this check needs at least one bosonic label (n ≥ 1)")]
    NoBosons,
}

/// Global order of the raising factors inside a monomial.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum FactorOrder {
    /// Single generators by index, then brackets lexicographically.
    #[default]
    SinglesFirst,
    /// Brackets lexicographically, then single generators.
    BracketsFirst,
}

/// Factor ids (positions in the module's raising list), nondecreasing.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbwMonomial(Vec<u8>);

impl PbwMonomial {
    pub fn vacuum() -> Self {
        PbwMonomial(Vec::new())
    }

    pub fn factors(&self) -> &[u8] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }
}

/// Sparse combination of monomials applied to the vacuum.
pub type ModuleVector = BTreeMap<PbwMonomial, Q>;

fn add_into(acc: &mut ModuleVector, v: &ModuleVector, c: &Q) {
    if c.is_zero() {
        return;
    }
    for (mono, x) in v {
        let slot = acc.entry(mono.clone()).or_insert_with(Q::zero);
        *slot += x * c;
        if slot.is_zero() {
            acc.remove(mono);
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Kind {
    Raising(u8),
    /// `{b_j^+, b_j^+} = 2 (b_j^+)²`; carries the factor id of `b_j^+`.
    BosonSquare(u8),
    Other,
}

/// The induced module `V̄(p)` for a fixed `(m, n, p)`.
#[derive(Clone, Debug)]
pub struct VermaModule {
    basis: AlgebraBasis,
    p: Q,
    order: FactorOrder,
    /// Factor id → algebra index.
    factors: Vec<usize>,
    /// Factor id → content vector.
    content: Vec<Vec<u32>>,
    /// Factor id → grading.
    odd: Vec<bool>,
    /// Factor id → is a bracket.
    is_pair: Vec<bool>,
    kind: Vec<Kind>,
    omega: Vec<Element>,
    vacuum: Vec<Option<Q>>,
}

impl VermaModule {
    pub fn new(dims: Dims, p: Q, order: FactorOrder) -> Result<Self, VermaError> {
        let basis = structure_constants(dims)?;
        let r = dims.r();
        let singles: Vec<BasisLabel> = (1..=r)
            .map(|j| BasisLabel::Gen(GeneratorId::plus(j)))
            .collect();
        let pairs: Vec<BasisLabel> = (1..=r)
            .flat_map(|j| {
                (j + 1..=r)
                    .map(move |k| BasisLabel::Pair(GeneratorId::plus(j), GeneratorId::plus(k)))
            })
            .collect();
        let labels: Vec<BasisLabel> = match order {
            FactorOrder::SinglesFirst => singles.into_iter().chain(pairs).collect(),
            FactorOrder::BracketsFirst => pairs.into_iter().chain(singles).collect(),
        };
        let factors: Vec<usize> = labels
            .iter()
            .map(|l| basis.index_of(*l).expect("raising label"))
            .collect();
        let content = labels
            .iter()
            .map(|l| {
                let mut c = vec![0u32; r];
                match l {
                    BasisLabel::Gen(g) => c[g.index - 1] += 1,
                    BasisLabel::Pair(a, b) => {
                        c[a.index - 1] += 1;
                        c[b.index - 1] += 1;
                    }
                }
                c
            })
            .collect();
        let odd = factors.iter().map(|&i| basis.is_odd(i)).collect();
        let is_pair = labels
            .iter()
            .map(|l| matches!(l, BasisLabel::Pair(..)))
            .collect();

        let fid_of = |idx: usize| factors.iter().position(|&f| f == idx).map(|f| f as u8);
        let mut kind = vec![Kind::Other; basis.len()];
        let mut omega = Vec::with_capacity(basis.len());
        let mut vacuum = vec![None; basis.len()];
        for (i, label) in basis.labels().iter().enumerate() {
            if let Some(f) = fid_of(i) {
                kind[i] = Kind::Raising(f);
            }
            let flip = |g: GeneratorId| GeneratorId::new(g.index, g.sign.flip());
            omega.push(match label {
                BasisLabel::Gen(g) => vec![(basis.generator(flip(*g)), Q::one())],
                BasisLabel::Pair(a, b) => basis.bracket_of(flip(*b), flip(*a)).clone(),
            });
            match label {
                BasisLabel::Pair(a, b)
                    if a.sign == Sign::Plus && b.sign == Sign::Plus && a.index == b.index =>
                {
                    kind[i] =
                        Kind::BosonSquare(fid_of(basis.generator(*a)).expect("single factor"));
                }
                BasisLabel::Gen(g) if g.sign == Sign::Minus => vacuum[i] = Some(Q::zero()),
                BasisLabel::Pair(a, b) if a.sign == Sign::Minus && b.sign == Sign::Minus => {
                    vacuum[i] = Some(Q::zero())
                }
                BasisLabel::Pair(a, b) if a.sign != b.sign => {
                    vacuum[i] = Some(if a.index != b.index {
                        Q::zero()
                    } else if dims.is_odd(a.index) {
                        p.clone()
                    } else {
                        -p.clone()
                    });
                }
                _ => {}
            }
        }
        Ok(VermaModule {
            basis,
            p,
            order,
            factors,
            content,
            odd,
            is_pair,
            kind,
            omega,
            vacuum,
        })
    }

    pub fn dims(&self) -> Dims {
        self.basis.dims()
    }

    pub fn p(&self) -> &Q {
        &self.p
    }

    pub fn order(&self) -> FactorOrder {
        self.order
    }

    pub fn algebra(&self) -> &AlgebraBasis {
        &self.basis
    }

    /// Content (exponent above the lowest weight) of a monomial.
    pub fn content(&self, mono: &PbwMonomial) -> Vec<u32> {
        let mut c = vec![0u32; self.dims().r()];
        for &f in &mono.0 {
            for (a, b) in c.iter_mut().zip(&self.content[f as usize]) {
                *a += b;
            }
        }
        c
    }

    pub fn level(&self, mono: &PbwMonomial) -> usize {
        self.content(mono).iter().sum::<u32>() as usize
    }

    pub fn doubled_weight(&self, mono: &PbwMonomial) -> DoubledWeight {
        let dims = self.dims();
        let p = self.p.to_integer().try_into().unwrap_or(0i64);
        let base = lowest_weight_doubled(dims.m, dims.n, p as usize);
        DoubledWeight(
            base.iter()
                .zip(self.content(mono))
                .map(|(b, c)| b + 2 * c as i64)
                .collect(),
        )
    }

    /// Single-generator exponents `k_j` and bracket exponents `k_{jk}`.
    pub fn exponents(&self, mono: &PbwMonomial) -> (Vec<u32>, BTreeMap<(usize, usize), u32>) {
        let mut singles = vec![0u32; self.dims().r()];
        let mut pairs = BTreeMap::new();
        for &f in &mono.0 {
            match self.basis.label(self.factors[f as usize]) {
                BasisLabel::Gen(g) => singles[g.index - 1] += 1,
                BasisLabel::Pair(a, b) => *pairs.entry((a.index, b.index)).or_insert(0) += 1,
            }
        }
        (singles, pairs)
    }

    pub fn describe(&self, mono: &PbwMonomial) -> String {
        if mono.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = mono
            .0
            .iter()
            .map(|&f| self.basis.label(self.factors[f as usize]).to_string())
            .collect();
        parts.join(" ")
    }

    /// All monomials of the given level, in canonical order.
    pub fn pbw_basis(&self, level: usize) -> Vec<PbwMonomial> {
        fn rec(
            module: &VermaModule,
            from: usize,
            budget: usize,
            cur: &mut Vec<u8>,
            out: &mut Vec<PbwMonomial>,
        ) {
            if budget == 0 {
                out.push(PbwMonomial(cur.clone()));
                return;
            }
            for f in from..module.factors.len() {
                let deg = if module.is_pair[f] { 2 } else { 1 };
                if deg > budget {
                    continue;
                }
                let single_use = module.is_pair[f] && module.odd[f];
                cur.push(f as u8);
                let next = if single_use { f + 1 } else { f };
                rec(module, next, budget - deg, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(self, 0, level, &mut Vec::new(), &mut out);
        out.sort();
        out
    }

    /// Monomials of levels `0..=level_max` grouped by content.
    pub fn weight_spaces(&self, level_max: usize) -> BTreeMap<Vec<u32>, Vec<PbwMonomial>> {
        let mut out: BTreeMap<Vec<u32>, Vec<PbwMonomial>> = BTreeMap::new();
        for level in 0..=level_max {
            for mono in self.pbw_basis(level) {
                out.entry(self.content(&mono)).or_default().push(mono);
            }
        }
        out
    }

    /// `ω(x)` as a combination of algebra basis elements.
    pub fn omega(&self, x: usize) -> &Element {
        &self.omega[x]
    }

    pub fn actor(&self) -> Actor<'_> {
        Actor {
            module: self,
            act_memo: HashMap::new(),
            pair_memo: HashMap::new(),
        }
    }
}

/// Memoizing evaluator for the action and the form. Not shared between threads.
pub struct Actor<'a> {
    module: &'a VermaModule,
    act_memo: HashMap<(usize, PbwMonomial), Rc<ModuleVector>>,
    pair_memo: HashMap<(PbwMonomial, PbwMonomial), Q>,
}

impl Actor<'_> {
    pub fn module(&self) -> &VermaModule {
        self.module
    }

    fn on_vacuum(&mut self, x: usize) -> ModuleVector {
        let md = self.module;
        let mut out = ModuleVector::new();
        match md.kind[x] {
            Kind::Raising(f) => {
                out.insert(PbwMonomial(vec![f]), Q::one());
            }
            Kind::BosonSquare(f) => {
                out.insert(PbwMonomial(vec![f, f]), q_int(2));
            }
            Kind::Other => {
                let c = md.vacuum[x].clone().unwrap_or_else(Q::zero);
                if !c.is_zero() {
                    out.insert(PbwMonomial::vacuum(), c);
                }
            }
        }
        out
    }

    /// `x · mono|0⟩` for an algebra basis index `x`.
    pub fn act(&mut self, x: usize, mono: &PbwMonomial) -> Rc<ModuleVector> {
        let key = (x, mono.clone());
        if let Some(v) = self.act_memo.get(&key) {
            return v.clone();
        }
        let v = Rc::new(self.act_uncached(x, mono));
        self.act_memo.insert(key, v.clone());
        v
    }

    fn act_uncached(&mut self, x: usize, mono: &PbwMonomial) -> ModuleVector {
        let md = self.module;
        if mono.0.is_empty() {
            return self.on_vacuum(x);
        }
        if let Kind::BosonSquare(f) = md.kind[x] {
            let b = md.factors[f as usize];
            let once = self.act(b, mono);
            let twice = self.act_vec(b, &once);
            let mut out = ModuleVector::new();
            add_into(&mut out, &twice, &q_int(2));
            return out;
        }
        let y1 = mono.0[0];
        let rest = PbwMonomial(mono.0[1..].to_vec());
        let y = md.factors[y1 as usize];
        if let Kind::Raising(f) = md.kind[x] {
            let x_odd_pair = md.is_pair[f as usize] && md.odd[f as usize];
            if f < y1 || (f == y1 && !x_odd_pair) {
                let mut factors = Vec::with_capacity(mono.0.len() + 1);
                factors.push(f);
                factors.extend_from_slice(&mono.0);
                let mut out = ModuleVector::new();
                out.insert(PbwMonomial(factors), Q::one());
                return out;
            }
            if f == y1 {
                // x x = ½ ⟦x, x⟧ for odd x.
                let br = md.basis.bracket(x, x).clone();
                let v = self.act_element(&br, mono);
                let mut out = ModuleVector::new();
                add_into(&mut out, &v, &Q::new(1.into(), 2.into()));
                return out;
            }
        }
        let sign = if md.basis.is_odd(x) && md.basis.is_odd(y) {
            -1
        } else {
            1
        };
        let mut out = ModuleVector::new();
        let moved = self.act(x, &rest);
        let through = self.act_vec(y, &moved);
        add_into(&mut out, &through, &q_int(sign));
        let br = md.basis.bracket(x, y).clone();
        for (z, c) in &br {
            let v = self.act(*z, &rest);
            add_into(&mut out, &v, c);
        }
        out
    }

    pub fn act_vec(&mut self, x: usize, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::new();
        for (mono, c) in v {
            let w = self.act(x, mono);
            add_into(&mut out, &w, c);
        }
        out
    }

    /// Action of a linear combination of algebra elements on a monomial.
    pub fn act_element(&mut self, e: &Element, mono: &PbwMonomial) -> ModuleVector {
        let mut out = ModuleVector::new();
        for (x, c) in e {
            let w = self.act(*x, mono);
            add_into(&mut out, &w, c);
        }
        out
    }

    pub fn act_element_vec(&mut self, e: &Element, v: &ModuleVector) -> ModuleVector {
        let mut out = ModuleVector::new();
        for (mono, c) in v {
            let w = self.act_element(e, mono);
            add_into(&mut out, &w, c);
        }
        out
    }

    /// `⟨a|0⟩, b|0⟩⟩`.
    pub fn pair(&mut self, a: &PbwMonomial, b: &PbwMonomial) -> Q {
        if a.0.is_empty() || b.0.is_empty() {
            return if a.0.is_empty() && b.0.is_empty() {
                Q::one()
            } else {
                Q::zero()
            };
        }
        if self.module.content(a) != self.module.content(b) {
            return Q::zero();
        }
        let key = (a.clone(), b.clone());
        if let Some(v) = self.pair_memo.get(&key) {
            return v.clone();
        }
        let y = self.module.factors[a.0[0] as usize];
        let rest = PbwMonomial(a.0[1..].to_vec());
        let om = self.module.omega[y].clone();
        let lowered = self.act_element(&om, b);
        let mut total = Q::zero();
        for (mono, c) in &lowered {
            total += c * self.pair(&rest, mono);
        }
        self.pair_memo.insert(key, total.clone());
        total
    }

    /// The form on arbitrary vectors.
    pub fn inner(&mut self, u: &ModuleVector, v: &ModuleVector) -> Q {
        let mut total = Q::zero();
        for (a, ca) in u {
            for (b, cb) in v {
                let g = self.pair(a, b);
                if !g.is_zero() {
                    total += ca * cb * g;
                }
            }
        }
        total
    }

    pub fn gram_matrix(&mut self, basis: &[PbwMonomial]) -> Vec<Vec<Q>> {
        let n = basis.len();
        let mut g = vec![vec![Q::zero(); n]; n];
        for i in 0..n {
            for j in i..n {
                let v = self.pair(&basis[i], &basis[j]);
                g[j][i] = v.clone();
                g[i][j] = v;
            }
        }
        g
    }

    /// `max |⟨a,b⟩ − ⟨b,a⟩|` is zero: checks symmetry of the form on a basis.
    pub fn is_symmetric_on(&mut self, basis: &[PbwMonomial]) -> bool {
        basis
            .iter()
            .all(|a| basis.iter().all(|b| self.pair(a, b) == self.pair(b, a)))
    }
}

/// Gram data of one weight space.
#[derive(Clone, Debug)]
pub struct GramBlock {
    pub content: Vec<u32>,
    pub weight: DoubledWeight,
    pub basis: Vec<PbwMonomial>,
    pub matrix: Vec<Vec<Q>>,
    pub rank: usize,
    pub psd: bool,
    /// Basis positions spanning the quotient.
    pub pivots: Vec<usize>,
    pub radical: Vec<ModuleVector>,
}

impl GramBlock {
    pub fn level(&self) -> usize {
        self.content.iter().sum::<u32>() as usize
    }

    pub fn size(&self) -> usize {
        self.basis.len()
    }
}

fn to_vector(basis: &[PbwMonomial], coeffs: &[Q]) -> ModuleVector {
    basis
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(m, c)| (m.clone(), c.clone()))
        .collect()
}

pub fn gram_block(module: &VermaModule, content: &[u32], basis: Vec<PbwMonomial>) -> GramBlock {
    let mut actor = module.actor();
    let matrix = actor.gram_matrix(&basis);
    let elim = symmetric_rank_psd(&matrix);
    let radical = nullspace(&matrix, basis.len())
        .iter()
        .map(|v| to_vector(&basis, v))
        .collect();
    let weight = basis
        .first()
        .map(|b| module.doubled_weight(b))
        .unwrap_or_else(|| DoubledWeight(Vec::new()));
    GramBlock {
        content: content.to_vec(),
        weight,
        matrix,
        rank: elim.rank,
        psd: elim.psd,
        pivots: elim.pivots,
        basis,
        radical,
    }
}

/// All Gram blocks up to `level_max`, one parallel task per weight.
pub fn gram_blocks(module: &VermaModule, level_max: usize, exec: Exec) -> Vec<GramBlock> {
    let spaces: Vec<(Vec<u32>, Vec<PbwMonomial>)> =
        module.weight_spaces(level_max).into_iter().collect();
    exec.map(&spaces, |(c, b)| gram_block(module, c, b.clone()))
}

/// Weight multiplicities of `V(p)`: content → Gram rank.
pub fn irreducible_dims(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    exec: Exec,
) -> Result<BTreeMap<Vec<u32>, usize>, VermaError> {
    let dims = Dims::new(m, n).ok_or(VermaError::EmptyRank)?;
    let module = VermaModule::new(dims, q_int(p as i64), FactorOrder::default())?;
    Ok(gram_blocks(&module, level_max, exec)
        .into_iter()
        .map(|b| (b.content, b.rank))
        .collect())
}

/// Orthogonal basis (Gram–Schmidt over the pivot subset) with squared norms.
fn orthogonal_basis(block: &GramBlock) -> Vec<(Vec<Q>, Q)> {
    let s = &block.pivots;
    let g = |a: &[Q], b: &[Q]| -> Q {
        let mut t = Q::zero();
        for (i, ai) in a.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                if !bj.is_zero() {
                    t += ai * bj * &block.matrix[s[i]][s[j]];
                }
            }
        }
        t
    };
    let mut out: Vec<(Vec<Q>, Q)> = Vec::new();
    for i in 0..s.len() {
        let mut v = vec![Q::zero(); s.len()];
        v[i] = Q::one();
        for (u, nu) in &out {
            let c = g(&v, u) / nu;
            for (vk, uk) in v.iter_mut().zip(u) {
                *vk -= &c * uk;
            }
        }
        let nv = g(&v, &v);
        out.push((v, nv));
    }
    out
}

fn embed(block: &GramBlock, coeffs: &[Q]) -> ModuleVector {
    block
        .pivots
        .iter()
        .zip(coeffs)
        .filter(|(_, c)| !c.is_zero())
        .map(|(&i, c)| (block.basis[i].clone(), c.clone()))
        .collect()
}

/// Per-weight outcome of the diagonal check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalEntry {
    pub content: Vec<u32>,
    /// Sorted `(‖c_r^+ v‖² + ‖c_r^- v‖²)/‖v‖²` over the orthogonal basis.
    pub observed: Vec<String>,
    /// Sorted `p + 2(Σ μ_{jr} − Σ μ_{j,r−1})` over the GZ labels.
    pub expected: Vec<String>,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagonalReport {
    pub entries: Vec<DiagonalEntry>,
}

impl DiagonalReport {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(|e| e.matches)
    }
}

fn gz_by_content(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    cap: bool,
    exec: Exec,
) -> BTreeMap<Vec<u32>, Vec<GzPattern>> {
    let mut out = BTreeMap::new();
    for level in 0..=level_max {
        out.extend(patterns_by_content(m, n, p, level, cap, exec));
    }
    out
}

fn generator_index(module: &VermaModule, j: usize, sign: Sign) -> usize {
    module.algebra().generator(GeneratorId::new(j, sign))
}

/// `⟨v|{c_r^-, c_r^+}|v⟩/⟨v|v⟩` on an orthogonal basis of every weight space,
/// against the GZ prediction.
pub fn diagonal_check(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    exec: Exec,
) -> Result<DiagonalReport, VermaError> {
    if n == 0 {
        return Err(VermaError::NoBosons);
    }
    let dims = Dims::new(m, n).ok_or(VermaError::EmptyRank)?;
    let module = VermaModule::new(dims, q_int(p as i64), FactorOrder::default())?;
    let blocks = gram_blocks(&module, level_max, exec);
    let gz = gz_by_content(m, n, p, level_max, true, exec);
    let r = dims.r();
    let up = generator_index(&module, r, Sign::Plus);
    let down = generator_index(&module, r, Sign::Minus);
    let entries = exec.map(&blocks, |block| {
        let mut actor = module.actor();
        let mut observed: Vec<Q> = orthogonal_basis(block)
            .into_iter()
            .map(|(coeffs, norm)| {
                let v = embed(block, &coeffs);
                let a = actor.act_vec(up, &v);
                let b = actor.act_vec(down, &v);
                (actor.inner(&a, &a) + actor.inner(&b, &b)) / norm
            })
            .collect();
        let mut expected: Vec<Q> = gz
            .get(&block.content)
            .map(|pats| {
                pats.iter()
                    .map(|pat| {
                        let top: i64 = pat.row(r).iter().sum();
                        let below: i64 = pat.row(r - 1).iter().sum();
                        q_int(p as i64 + 2 * (top - below))
                    })
                    .collect()
            })
            .unwrap_or_default();
        observed.sort();
        expected.sort();
        DiagonalEntry {
            content: block.content.clone(),
            matches: observed == expected,
            observed: observed.iter().map(|q| q.to_string()).collect(),
            expected: expected.iter().map(|q| q.to_string()).collect(),
        }
    });
    Ok(DiagonalReport { entries })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutEntry {
    pub content: Vec<u32>,
    pub block_size: usize,
    pub rank: usize,
    /// GZ patterns with `λ_1 ≤ p`.
    pub capped: usize,
    /// All hook GZ patterns.
    pub uncapped: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CutReport {
    pub entries: Vec<CutEntry>,
    /// Ranks equal capped counts and block sizes equal uncapped counts everywhere.
    pub ranks_match: bool,
    /// Some weight where the cut removes patterns (requires `level_max > p`).
    pub witness: Option<Vec<u32>>,
    /// No radical at all in range.
    pub verma_irreducible: bool,
}

impl CutReport {
    pub fn verdict(&self) -> &'static str {
        if self.ranks_match && (self.witness.is_some() || self.verma_irreducible) {
            "match"
        } else {
            "mismatch"
        }
    }
}

/// Compares Gram ranks with capped and uncapped GZ counts per weight.
pub fn radical_cut_check(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    exec: Exec,
) -> Result<CutReport, VermaError> {
    let dims = Dims::new(m, n).ok_or(VermaError::EmptyRank)?;
    let module = VermaModule::new(dims, q_int(p as i64), FactorOrder::default())?;
    let blocks = gram_blocks(&module, level_max, exec);
    let capped = gz_by_content(m, n, p, level_max, true, exec);
    let uncapped = gz_by_content(m, n, p, level_max, false, exec);
    let entries: Vec<CutEntry> = blocks
        .iter()
        .map(|b| CutEntry {
            content: b.content.clone(),
            block_size: b.size(),
            rank: b.rank,
            capped: capped.get(&b.content).map_or(0, Vec::len),
            uncapped: uncapped.get(&b.content).map_or(0, Vec::len),
        })
        .collect();
    let ranks_match = entries
        .iter()
        .all(|e| e.rank == e.capped && e.block_size == e.uncapped)
        && capped
            .keys()
            .chain(uncapped.keys())
            .all(|c| entries.iter().any(|e| &e.content == c));
    let witness = entries
        .iter()
        .find(|e| e.uncapped > e.capped)
        .map(|e| e.content.clone());
    let verma_irreducible = entries.iter().all(|e| e.rank == e.block_size);
    Ok(CutReport {
        entries,
        ranks_match,
        witness,
        verma_irreducible,
    })
}

/// Traces of `c_r^- c_r^+` and `c_r^+ c_r^-` on one weight space of `V(p)`,
/// from the form and from the closed-form reduced matrix elements.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionEntry {
    pub content: Vec<u32>,
    pub dim: usize,
    pub raise_gram: String,
    pub raise_closed: String,
    pub lower_gram: String,
    pub lower_closed: String,
    pub matches: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitionReport {
    pub entries: Vec<TransitionEntry>,
}

impl TransitionReport {
    pub fn ok(&self) -> bool {
        self.entries.iter().all(|e| e.matches)
    }
}

/// `tr(G_S^{-1} A_S)` with `A_ij = ⟨x e_i, x e_j⟩`.
fn trace_through(actor: &mut Actor<'_>, block: &GramBlock, x: usize) -> Q {
    let s = &block.pivots;
    let images: Vec<ModuleVector> = s
        .iter()
        .map(|&i| {
            let mono = block.basis[i].clone();
            (*actor.act(x, &mono)).clone()
        })
        .collect();
    let gs: Vec<Vec<Q>> = s
        .iter()
        .map(|&i| s.iter().map(|&j| block.matrix[i][j].clone()).collect())
        .collect();
    let mut trace = Q::zero();
    for j in 0..s.len() {
        let col: Vec<Q> = (0..s.len())
            .map(|i| actor.inner(&images[i], &images[j]))
            .collect();
        let sol = solve(&gs, &col).expect("pivot block is nonsingular");
        trace += &sol[j];
    }
    trace
}

/// Ties the form to the reduced matrix elements: per weight, the trace of
/// `c_r^- c_r^+` (resp. `c_r^+ c_r^-`) over `V(p)` equals the sum of the
/// raising (resp. lowering) parts of the recurrence over the GZ labels.
pub fn transition_check(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    variant: ParsingVariant,
    exec: Exec,
) -> Result<TransitionReport, VermaError> {
    if n == 0 {
        return Err(VermaError::NoBosons);
    }
    let dims = Dims::new(m, n).ok_or(VermaError::EmptyRank)?;
    let module = VermaModule::new(dims, q_int(p as i64), FactorOrder::default())?;
    let blocks = gram_blocks(&module, level_max, exec);
    let gz = gz_by_content(m, n, p, level_max, true, exec);
    let r = dims.r();
    let up = generator_index(&module, r, Sign::Plus);
    let down = generator_index(&module, r, Sign::Minus);
    let entries = exec.map(&blocks, |block| {
        let mut actor = module.actor();
        let raise_gram = trace_through(&mut actor, block, up);
        let lower_gram = trace_through(&mut actor, block, down);
        let mut raise_closed = Q::zero();
        let mut lower_closed = Q::zero();
        let mut closed_ok = true;
        for pat in gz.get(&block.content).map(Vec::as_slice).unwrap_or(&[]) {
            let th = ThetaConfig::new(pat.top(), pat.row(r - 1).to_vec());
            match th.and_then(|t| id2_parts(&t, p, variant)) {
                Ok(parts) => {
                    raise_closed += parts.raise;
                    lower_closed += parts.lower;
                }
                Err(_) => closed_ok = false,
            }
        }
        TransitionEntry {
            content: block.content.clone(),
            dim: block.rank,
            matches: closed_ok && raise_gram == raise_closed && lower_gram == lower_closed,
            raise_gram: raise_gram.to_string(),
            raise_closed: raise_closed.to_string(),
            lower_gram: lower_gram.to_string(),
            lower_closed: lower_closed.to_string(),
        }
    });
    Ok(TransitionReport { entries })
}

/// `⟨x u, v⟩ − ⟨u, ω(x) v⟩` for a basis element `x`.
pub fn contravariance_defect(
    actor: &mut Actor<'_>,
    x: usize,
    u: &ModuleVector,
    v: &ModuleVector,
) -> Q {
    let xu = actor.act_vec(x, u);
    let om = actor.module().omega(x).clone();
    let wv = actor.act_element_vec(&om, v);
    actor.inner(&xu, v) - actor.inner(u, &wv)
}

/// Ranks computed under both factor orders agree weight by weight.
pub fn rank_stability(
    m: usize,
    n: usize,
    p: usize,
    level_max: usize,
    exec: Exec,
) -> Result<bool, VermaError> {
    let dims = Dims::new(m, n).ok_or(VermaError::EmptyRank)?;
    let ranks = |order| -> Result<BTreeMap<Vec<u32>, usize>, VermaError> {
        let module = VermaModule::new(dims, q_int(p as i64), order)?;
        Ok(gram_blocks(&module, level_max, exec)
            .into_iter()
            .map(|b| (b.content, b.rank))
            .collect())
    };
    Ok(ranks(FactorOrder::SinglesFirst)? == ranks(FactorOrder::BracketsFirst)?)
}

impl fmt::Display for GramBlock {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "content={:?} size={} rank={} psd={}",
            self.content,
            self.size(),
            self.rank,
            self.psd
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(m: usize, n: usize, p: i64) -> VermaModule {
        VermaModule::new(Dims::new(m, n).unwrap(), q_int(p), FactorOrder::default()).unwrap()
    }

    fn mono(f: &[u8]) -> PbwMonomial {
        PbwMonomial(f.to_vec())
    }

    #[test]
    fn pbw_shapes() {
        let md = module(1, 1, 2);
        assert_eq!(md.pbw_basis(0), vec![PbwMonomial::vacuum()]);
        assert_eq!(md.pbw_basis(1).len(), 2);
        let l2 = md.pbw_basis(2);
        assert_eq!(l2.len(), 4);
        let names: Vec<String> = l2.iter().map(|b| md.describe(b)).collect();
        assert!(names.contains(&"[c1+,c2+]".to_string()), "{names:?}");
        // The mixed bracket is odd and appears at most once.
        assert!(md
            .pbw_basis(4)
            .iter()
            .all(|b| b.factors().iter().filter(|&&f| f == 2).count() <= 1));
    }

    #[test]
    fn vacuum_actions() {
        for p in 1..4 {
            let md = module(1, 1, p);
            let mut a = md.actor();
            let c1m = generator_index(&md, 1, Sign::Minus);
            let v = a.act(c1m, &mono(&[0]));
            assert_eq!(*v, ModuleVector::from([(PbwMonomial::vacuum(), q_int(p))]));
            let v = a.act(c1m, &mono(&[0, 0]));
            let want: ModuleVector = [(mono(&[0]), q_int(2 * p - 2))]
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .collect();
            assert_eq!(*v, want);
            let h2 = md.algebra().cartan(2);
            let v = a.act_element(&h2, &PbwMonomial::vacuum());
            assert_eq!(
                v,
                ModuleVector::from([(PbwMonomial::vacuum(), Q::new(p.into(), 2.into()))])
            );
        }
    }

    #[test]
    fn small_gram_blocks() {
        for (m, n) in [(1, 1), (2, 1), (0, 2)] {
            let md = module(m, n, 3);
            let blocks = gram_blocks(&md, 1, Exec::Sequential);
            for b in &blocks {
                if b.level() == 0 {
                    assert_eq!(b.matrix, vec![vec![Q::one()]]);
                } else {
                    assert_eq!(b.matrix, vec![vec![q_int(3)]]);
                }
            }
        }
        let md = module(1, 1, 1);
        let mut a = md.actor();
        assert!(a.pair(&mono(&[0, 0]), &mono(&[0, 0])).is_zero());
        let md = module(1, 1, 3);
        let mut a = md.actor();
        assert_eq!(a.pair(&mono(&[0, 0]), &mono(&[0, 0])), q_int(12));
    }

    #[test]
    fn form_is_symmetric_and_contravariant() {
        let md = module(1, 2, 2);
        let mut a = md.actor();
        for level in 0..=3 {
            assert!(a.is_symmetric_on(&md.pbw_basis(level)));
        }
        let u: ModuleVector = md
            .pbw_basis(2)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (b, q_int(i as i64 + 1)))
            .collect();
        let v: ModuleVector = md
            .pbw_basis(3)
            .into_iter()
            .enumerate()
            .map(|(i, b)| (b, q_int(2 - i as i64)))
            .collect();
        for j in 1..=3 {
            let x = generator_index(&md, j, Sign::Plus);
            assert!(contravariance_defect(&mut a, x, &u, &v).is_zero());
            let y = generator_index(&md, j, Sign::Minus);
            assert!(contravariance_defect(&mut a, y, &v, &u).is_zero());
        }
    }

    #[test]
    fn ranks_match_characters_small() {
        use crate::symfunc::char_vp;
        for (m, n, p) in [(1, 1, 1), (1, 1, 2)] {
            let dims = irreducible_dims(m, n, p, 3, Exec::Sequential).unwrap();
            let ch = char_vp(m, n, p, 3, Exec::Sequential);
            for (c, rank) in &dims {
                assert_eq!(*rank as i64, ch.multiplicity(c), "{m} {n} {p} {c:?}");
            }
        }
    }

    #[test]
    fn diagonal_and_transition_small() {
        assert!(diagonal_check(1, 1, 2, 2, Exec::Sequential).unwrap().ok());
        let t = transition_check(1, 1, 2, 2, ParsingVariant::CANONICAL, Exec::Sequential).unwrap();
        assert!(t.ok(), "{t:?}");
        assert!(matches!(
            diagonal_check(1, 0, 2, 2, Exec::Sequential),
            Err(VermaError::NoBosons)
        ));
    }

    #[test]
    fn cut_small() {
        let r = radical_cut_check(1, 1, 1, 2, Exec::Sequential).unwrap();
        assert_eq!(r.verdict(), "match");
        assert!(r.witness.is_some());
        let r = radical_cut_check(1, 1, 3, 2, Exec::Sequential).unwrap();
        assert!(r.verma_irreducible);
        assert_eq!(r.verdict(), "match");
    }

    #[test]
    fn factor_orders_agree() {
        assert!(rank_stability(1, 1, 1, 3, Exec::Sequential).unwrap());
        assert!(rank_stability(2, 1, 1, 2, Exec::Sequential).unwrap());
    }
}
