//! Exact-arithmetic engine for the lowest-weight representations `V(p)` of the
//! orthosymplectic Lie superalgebra `osp(2m+1|2n)`, i.e. the Fock spaces of `m`
//! parafermions and `n` parabosons of order `p` with relative parafermion
//! relations.
//!
//! The crate is organised around five layers:
//!
//! - [`osp`]: the matrix realization, the `2m+2n` para-generators and the
//!   structure constants of the algebra.
//! - [`gz`]: Gelfand–Zetlin patterns for covariant `u(m|n)` modules.
//! - [`redmat`]: closed-form reduced matrix elements `G_k` and the diagonal
//!   recurrence they satisfy.
//! - [`symfunc`]: partitions, supersymmetric Schur polynomials and truncated
//!   characters.
//! - [`verma`]: an independent oracle built on PBW monomials and the
//!   contravariant form of the induced module.
//!
//! All arithmetic is exact; square roots only ever appear as `(sign, radicand)`
//! pairs or as powers of `sqrt(2)` attached to matrices.

pub mod exec;
pub mod gz;
pub mod linalg;
pub mod osp;
pub mod redmat;
pub mod symfunc;
pub mod verma;

pub use exec::Exec;
pub use num_rational::BigRational as Q;

/// Rank data `(m, n)` of `osp(2m+1|2n)`.
#[derive(
    Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize,
)]
pub struct Dims {
    pub m: usize,
    pub n: usize,
}

impl Dims {
    pub fn new(m: usize, n: usize) -> Option<Self> {
        (m + n >= 1).then_some(Dims { m, n })
    }

    /// Number of para-generator pairs, `m + n`.
    pub fn r(&self) -> usize {
        self.m + self.n
    }

    /// Size of the defining matrices, `2m + 2n + 1`.
    pub fn size(&self) -> usize {
        2 * self.m + 2 * self.n + 1
    }

    /// Grading of generator `j` (1-based): fermionic labels are even.
    pub fn is_odd(&self, j: usize) -> bool {
        j > self.m
    }
}

pub(crate) fn q_int(v: i64) -> Q {
    Q::from_integer(v.into())
}
