//! Exact linear algebra over `Q` and fraction-free integer elimination.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::Q;

/// Outcome of symmetric fraction-free elimination with diagonal pivoting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricElimination {
    pub rank: usize,
    /// True iff the matrix is positive semidefinite.
    pub psd: bool,
    /// Indices whose principal submatrix is nonsingular, in pivot order.
    /// Only meaningful when `psd` holds.
    pub pivots: Vec<usize>,
}

fn clear_denominators(mat: &[Vec<Q>]) -> Vec<Vec<BigInt>> {
    let mut lcm = BigInt::one();
    for row in mat {
        for x in row {
            lcm = lcm.lcm(x.denom());
        }
    }
    mat.iter()
        .map(|row| row.iter().map(|x| x.numer() * (&lcm / x.denom())).collect())
        .collect()
}

/// Rank and positive-semidefiniteness of a symmetric rational matrix.
///
/// Runs Bareiss elimination choosing only positive diagonal pivots. After
/// `k` steps the remaining diagonal entries are principal minors of order
/// `k + 1`, so a negative diagonal, or a vanishing diagonal with a nonzero
/// off-diagonal partner, certifies that the form is indefinite.
pub fn symmetric_rank_psd(mat: &[Vec<Q>]) -> SymmetricElimination {
    let n = mat.len();
    let mut a = clear_denominators(mat);
    let mut active: Vec<usize> = (0..n).collect();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut psd = true;

    loop {
        if active.iter().any(|&i| a[i][i].is_negative()) {
            psd = false;
            break;
        }
        let Some(pos) = active.iter().position(|&i| a[i][i].is_positive()) else {
            let nonzero = active
                .iter()
                .any(|&i| active.iter().any(|&j| !a[i][j].is_zero()));
            if nonzero {
                psd = false;
            }
            break;
        };
        let k = active.remove(pos);
        pivots.push(k);
        let pivot = a[k][k].clone();
        for &i in &active {
            for &j in &active {
                let v = (&pivot * &a[i][j] - &a[i][k] * &a[k][j]) / &prev;
                a[i][j] = v;
            }
        }
        prev = pivot;
    }

    if psd {
        SymmetricElimination {
            rank: pivots.len(),
            psd,
            pivots,
        }
    } else {
        SymmetricElimination {
            rank: rank(mat),
            psd,
            pivots: Vec::new(),
        }
    }
}

/// Reduced row echelon form; returns the pivot columns.
pub fn rref(mat: &mut [Vec<Q>]) -> Vec<usize> {
    let rows = mat.len();
    let cols = mat.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !mat[i][c].is_zero()) else {
            continue;
        };
        mat.swap(r, p);
        let inv = mat[r][c].recip();
        for x in mat[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i != r && !mat[i][c].is_zero() {
                let f = mat[i][c].clone();
                let (src, dst) = if i < r {
                    let (lo, hi) = mat.split_at_mut(r);
                    (&hi[0], &mut lo[i])
                } else {
                    let (lo, hi) = mat.split_at_mut(i);
                    (&lo[r], &mut hi[0])
                };
                for (d, s) in dst.iter_mut().zip(src.iter()) {
                    if !s.is_zero() {
                        *d -= &f * s;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(mat: &[Vec<Q>]) -> usize {
    let mut m = mat.to_vec();
    rref(&mut m).len()
}

/// Basis of the right kernel `{x : mat * x = 0}`.
pub fn nullspace(mat: &[Vec<Q>], cols: usize) -> Vec<Vec<Q>> {
    let mut m = mat.to_vec();
    let pivots = rref(&mut m);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[row][f].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` for square nonsingular `a`; `None` if singular.
pub fn solve(a: &[Vec<Q>], b: &[Q]) -> Option<Vec<Q>> {
    let n = a.len();
    let mut aug: Vec<Vec<Q>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug);
    if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
        return None;
    }
    Some(aug.into_iter().map(|mut r| r.pop().unwrap()).collect())
}

/// Expands vectors exactly in a fixed linearly independent family.
#[derive(Clone, Debug)]
pub struct Expander {
    dim: usize,
    len: usize,
    /// Row operations taking the basis matrix to echelon form.
    transform: Vec<Vec<Q>>,
    pivots: Vec<usize>,
}

impl Expander {
    /// `basis[i]` is the i-th vector; all must share the same length.
    /// Returns `None` when the family is linearly dependent.
    pub fn new(basis: &[Vec<Q>]) -> Option<Self> {
        let len = basis.len();
        let dim = basis.first().map_or(0, Vec::len);
        let mut aug: Vec<Vec<Q>> = (0..dim)
            .map(|row| {
                let mut r: Vec<Q> = basis.iter().map(|v| v[row].clone()).collect();
                r.extend((0..dim).map(|c| if c == row { Q::one() } else { Q::zero() }));
                r
            })
            .collect();
        // Pivot only on the basis columns.
        let mut pivots = Vec::new();
        for (r, c) in (0..len).enumerate() {
            let p = (r..dim).find(|&i| !aug[i][c].is_zero())?;
            aug.swap(r, p);
            let inv = aug[r][c].recip();
            for x in aug[r].iter_mut() {
                *x *= &inv;
            }
            let pivot_row = aug[r].clone();
            for (i, row) in aug.iter_mut().enumerate() {
                if i != r && !row[c].is_zero() {
                    let f = row[c].clone();
                    for (d, s) in row.iter_mut().zip(&pivot_row) {
                        if !s.is_zero() {
                            *d -= &f * s;
                        }
                    }
                }
            }
            pivots.push(c);
        }
        let transform = aug.into_iter().map(|row| row[len..].to_vec()).collect();
        Some(Expander {
            dim,
            len,
            transform,
            pivots,
        })
    }

    /// Coefficients `c` with `sum c_i basis[i] = v`, or `None` if `v` is
    /// outside the span.
    pub fn expand(&self, v: &[Q]) -> Option<Vec<Q>> {
        assert_eq!(v.len(), self.dim);
        let w: Vec<Q> = self
            .transform
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Q::zero(), |acc, x| acc + x)
            })
            .collect();
        if w[self.len..].iter().any(|x| !x.is_zero()) {
            return None;
        }
        let mut out = vec![Q::zero(); self.len];
        for (row, &c) in self.pivots.iter().enumerate() {
            out[c] = w[row].clone();
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::q_int;

    fn m(rows: &[&[i64]]) -> Vec<Vec<Q>> {
        rows.iter()
            .map(|r| r.iter().map(|&x| q_int(x)).collect())
            .collect()
    }

    #[test]
    fn psd_and_rank_of_small_forms() {
        let e = symmetric_rank_psd(&m(&[&[2, 1], &[1, 2]]));
        assert_eq!((e.rank, e.psd), (2, true));

        let e = symmetric_rank_psd(&m(&[&[1, 1], &[1, 1]]));
        assert_eq!((e.rank, e.psd), (1, true));

        let e = symmetric_rank_psd(&m(&[&[1, 2], &[2, 1]]));
        assert_eq!((e.rank, e.psd), (2, false));

        let e = symmetric_rank_psd(&m(&[&[0, 1], &[1, 0]]));
        assert_eq!((e.rank, e.psd), (2, false));

        let e = symmetric_rank_psd(&m(&[&[0, 0], &[0, 3]]));
        assert_eq!((e.rank, e.psd, e.pivots.clone()), (1, true, vec![1]));

        let e = symmetric_rank_psd(&m(&[&[1, 0], &[0, -1]]));
        assert!(!e.psd);
    }

    #[test]
    fn rational_entries_are_cleared() {
        let half = Q::new(1.into(), 2.into());
        let mat = vec![vec![half.clone(), half.clone()], vec![half.clone(), half]];
        let e = symmetric_rank_psd(&mat);
        assert_eq!((e.rank, e.psd), (1, true));
    }

    #[test]
    fn nullspace_spans_kernel() {
        let a = m(&[&[1, 2, 3], &[2, 4, 6]]);
        let ker = nullspace(&a, 3);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &a {
                let s: Q = row.iter().zip(v).map(|(x, y)| x * y).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn expander_round_trips_and_rejects() {
        let basis = m(&[&[1, 0, 1], &[0, 1, 1]]);
        let ex = Expander::new(&basis).unwrap();
        let v = m(&[&[2, 3, 5]]).pop().unwrap();
        assert_eq!(ex.expand(&v).unwrap(), vec![q_int(2), q_int(3)]);
        let bad = m(&[&[1, 1, 0]]).pop().unwrap();
        assert!(ex.expand(&bad).is_none());
        assert!(Expander::new(&m(&[&[1, 1], &[2, 2]])).is_none());
    }

    #[test]
    fn solve_square_system() {
        let a = m(&[&[2, 1], &[1, 3]]);
        let x = solve(&a, &[q_int(3), q_int(5)]).unwrap();
        assert_eq!(
            x,
            vec![Q::new(4.into(), 5.into()), Q::new(7.into(), 5.into())]
        );
        assert!(solve(&m(&[&[1, 2], &[2, 4]]), &[q_int(1), q_int(2)]).is_none());
    }
}
