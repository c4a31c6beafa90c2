//! Smith normal form over the integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{RingSpec, Scalar};

/// `u * m * v = d` with `u`, `v` unimodular and `d` diagonal, the nonzero
/// diagonal entries positive and each dividing the next.
#[derive(Debug, Clone)]
pub struct Snf {
    pub u: Matrix,
    pub u_inv: Matrix,
    pub d: Matrix,
    pub v: Matrix,
    pub v_inv: Matrix,
    pub rank: usize,
}

impl Snf {
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank)
            .map(|i| self.d[(i, i)].to_bigint().expect("integer"))
            .collect()
    }

    /// Invariant factors different from 1.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors()
            .into_iter()
            .filter(|f| !f.is_one())
            .collect()
    }
}

type Grid = Vec<Vec<BigInt>>;

struct Work {
    a: Grid,
    u: Grid,
    u_inv: Grid,
    v: Grid,
    v_inv: Grid,
}

fn ident(n: usize) -> Grid {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

impl Work {
    // row_i += c * row_j
    fn row_add(&mut self, i: usize, j: usize, c: &BigInt) {
        for g in [&mut self.a, &mut self.u] {
            let src = g[j].clone();
            for (x, s) in g[i].iter_mut().zip(&src) {
                *x += c * s;
            }
        }
        // u_inv <- u_inv * E^{-1}: col_j -= c * col_i
        for row in self.u_inv.iter_mut() {
            let t = c * &row[i];
            row[j] -= t;
        }
    }

    fn row_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        self.u.swap(i, j);
        for row in self.u_inv.iter_mut() {
            row.swap(i, j);
        }
    }

    fn row_neg(&mut self, i: usize) {
        for g in [&mut self.a, &mut self.u] {
            for x in g[i].iter_mut() {
                *x = -&*x;
            }
        }
        for row in self.u_inv.iter_mut() {
            row[i] = -&row[i];
        }
    }

    // col_i += c * col_j
    fn col_add(&mut self, i: usize, j: usize, c: &BigInt) {
        for g in [&mut self.a, &mut self.v] {
            for row in g.iter_mut() {
                let t = c * &row[j];
                row[i] += t;
            }
        }
        // v_inv <- E^{-1} * v_inv: row_j -= c * row_i
        let src = self.v_inv[i].clone();
        for (x, s) in self.v_inv[j].iter_mut().zip(&src) {
            *x -= c * s;
        }
    }

    fn col_swap(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for g in [&mut self.a, &mut self.v] {
            for row in g.iter_mut() {
                row.swap(i, j);
            }
        }
        self.v_inv.swap(i, j);
    }
}

pub fn smith_normal_form(m: &Matrix) -> Result<Snf> {
    if m.ring() != RingSpec::Integers {
        return Err(Error::RingMismatch(m.ring(), RingSpec::Integers));
    }
    let (rows, cols) = (m.rows(), m.cols());
    let a: Grid = (0..rows)
        .map(|i| (0..cols).map(|j| m[(i, j)].to_bigint().expect("integer")).collect())
        .collect();
    let mut w = Work {
        a,
        u: ident(rows),
        u_inv: ident(rows),
        v: ident(cols),
        v_inv: ident(cols),
    };

    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !w.a[i][j].is_zero()
                    && best.is_none_or(|(bi, bj)| w.a[i][j].abs() < w.a[bi][bj].abs())
                {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        w.row_swap(t, pi);
        w.col_swap(t, pj);

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if !w.a[i][t].is_zero() {
                    let q = w.a[i][t].div_floor(&w.a[t][t]);
                    w.row_add(i, t, &-q);
                    if !w.a[i][t].is_zero() {
                        clean = false;
                    }
                }
            }
            for j in t + 1..cols {
                if !w.a[t][j].is_zero() {
                    let q = w.a[t][j].div_floor(&w.a[t][t]);
                    w.col_add(j, t, &-q);
                    if !w.a[t][j].is_zero() {
                        clean = false;
                    }
                }
            }
            if !clean {
                // a remainder is smaller than the pivot: move it in and retry
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.row_swap(t, best.0);
                w.col_swap(t, best.1);
                continue;
            }
            let pivot = w.a[t][t].clone();
            let offender = (t + 1..rows).find(|&i| {
                (t + 1..cols).any(|j| !(&w.a[i][j] % &pivot).is_zero())
            });
            match offender {
                Some(i) => w.row_add(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.row_neg(t);
        }
        t += 1;
    }

    let to_matrix = |g: &Grid, r: usize, c: usize| {
        let mut out = Matrix::zeros(RingSpec::Integers, r, c);
        for i in 0..r {
            for j in 0..c {
                out[(i, j)] = Scalar::Integer(g[i][j].clone());
            }
        }
        out
    };
    Ok(Snf {
        u: to_matrix(&w.u, rows, rows),
        u_inv: to_matrix(&w.u_inv, rows, rows),
        d: to_matrix(&w.a, rows, cols),
        v: to_matrix(&w.v, cols, cols),
        v_inv: to_matrix(&w.v_inv, cols, cols),
        rank: t,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn z() -> RingSpec {
        RingSpec::Integers
    }

    fn check(m: &Matrix) -> Snf {
        let s = smith_normal_form(m).unwrap();
        assert_eq!(s.u.mul(m).mul(&s.v), s.d);
        assert_eq!(s.u.mul(&s.u_inv), Matrix::identity(z(), m.rows()));
        assert_eq!(s.v.mul(&s.v_inv), Matrix::identity(z(), m.cols()));
        assert!(s.u.determinant().is_unit());
        assert!(s.v.determinant().is_unit());
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!((&w[1] % &w[0]).is_zero(), "divisibility chain {f:?}");
        }
        for i in s.rank..m.rows().min(m.cols()) {
            assert!(s.d[(i, i)].is_zero());
        }
        s
    }

    #[test]
    fn one_by_one() {
        let s = check(&Matrix::from_i64(z(), &[&[2]]));
        assert_eq!(s.d, Matrix::from_i64(z(), &[&[2]]));
    }

    #[test]
    fn already_normal() {
        let m = Matrix::from_i64(z(), &[&[1, 0], &[0, 0]]);
        assert_eq!(check(&m).d, m);
    }

    #[test]
    fn two_by_two() {
        // gcd of entries is 2, |det| = 8, so diag(2, 4)
        let s = check(&Matrix::from_i64(z(), &[&[2, 4], &[6, 8]]));
        assert_eq!(s.d, Matrix::from_i64(z(), &[&[2, 0], &[0, 4]]));
    }

    #[test]
    fn rejects_other_rings() {
        assert!(smith_normal_form(&Matrix::identity(RingSpec::Rationals, 2)).is_err());
    }

    proptest! {
        #[test]
        fn random_matrices(rows in 1usize..5, cols in 1usize..5, seed in proptest::collection::vec(-9i64..10, 16)) {
            let mut m = Matrix::zeros(z(), rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m[(i, j)] = z().from_i64(seed[i * 4 + j]);
                }
            }
            let s = check(&m);
            prop_assert_eq!(s.rank, m.rank());
        }
    }
}
