//! Dense exact matrices and the elimination routines everything else uses.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::scalars::{RingSpec, Scalar};
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix {
    ring: RingSpec,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub reduced: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(ring: RingSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            ring,
            rows,
            cols,
            data: vec![ring.zero(); rows * cols],
        }
    }

    pub fn identity(ring: RingSpec, n: usize) -> Self {
        let mut m = Self::zeros(ring, n, n);
        for i in 0..n {
            m[(i, i)] = ring.one();
        }
        m
    }

    pub fn from_i64(ring: RingSpec, rows: &[&[i64]]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let mut m = Self::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged rows");
            for (j, v) in row.iter().enumerate() {
                m[(i, j)] = ring.from_i64(*v);
            }
        }
        m
    }

    pub fn from_rows(ring: RingSpec, rows: Vec<Vec<Scalar>>, cols: usize) -> Result<Self> {
        let mut m = Self::zeros(ring, rows.len(), cols);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "row {i} has {} entries, expected {cols}",
                    row.len()
                )));
            }
            for (j, v) in row.into_iter().enumerate() {
                if v.ring() != ring {
                    return Err(Error::RingMismatch(v.ring(), ring));
                }
                m[(i, j)] = v;
            }
        }
        Ok(m)
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(ring: RingSpec, rows: usize, columns: &[Vec<Scalar>]) -> Self {
        let mut m = Self::zeros(ring, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows);
            for (i, v) in col.iter().enumerate() {
                m[(i, j)] = v.clone();
            }
        }
        m
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.ring, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.cols, other.rows, "matrix product shape");
        assert_eq!(self.ring, other.ring, "matrix product ring");
        let mut out = Matrix::zeros(self.ring, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        let prod = a * b;
                        out[(i, j)] = &out[(i, j)] + &prod;
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        (0..self.rows)
            .map(|i| {
                let mut acc = self.ring.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, f: impl Fn(&Scalar, &Scalar) -> Scalar) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape");
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> Matrix {
        Matrix {
            ring: self.ring,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }

    pub fn neg(&self) -> Matrix {
        self.scale(&self.ring.from_i64(-1))
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.ring, self.rows, cols.len());
        for (jj, &j) in cols.iter().enumerate() {
            for i in 0..self.rows {
                m[(i, jj)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.ring, rows.len(), self.cols);
        for (ii, &i) in rows.iter().enumerate() {
            for j in 0..self.cols {
                m[(ii, j)] = self[(i, j)].clone();
            }
        }
        m
    }

    pub fn hstack(ring: RingSpec, rows: usize, blocks: &[&Matrix]) -> Matrix {
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut m = Matrix::zeros(ring, rows, cols);
        let mut off = 0;
        for b in blocks {
            assert_eq!(b.rows, rows, "hstack rows");
            for i in 0..rows {
                for j in 0..b.cols {
                    m[(i, off + j)] = b[(i, j)].clone();
                }
            }
            off += b.cols;
        }
        m
    }

    /// Re-reads the entries in another ring. Integers and rationals convert
    /// freely when the entries are integral; anything else must already
    /// match.
    pub fn to_ring(&self, ring: RingSpec) -> Result<Matrix> {
        if ring == self.ring {
            return Ok(self.clone());
        }
        let data = self
            .data
            .iter()
            .map(|v| match (v, ring) {
                (Scalar::Integer(z), RingSpec::Rationals) => {
                    Ok(Scalar::Rational(BigRational::from_integer(z.clone())))
                }
                (Scalar::Integer(z), RingSpec::PrimeField(_)) => Ok(ring.from_bigint(z)),
                (Scalar::Rational(q), RingSpec::Integers) if q.is_integer() => {
                    Ok(Scalar::Integer(q.to_integer()))
                }
                _ => Err(Error::RingMismatch(self.ring, ring)),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix {
            ring,
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    /// Gauss-Jordan elimination over a field. Pivots are chosen column by
    /// column from left to right, taking the first row (lowest index) with a
    /// nonzero entry.
    pub fn echelon(&self) -> Echelon {
        assert!(self.ring.is_field(), "echelon form needs a field");
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inverse().expect("nonzero field element");
            for j in c..m.cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..m.cols {
                        if !m[(r, j)].is_zero() {
                            let t = &f * &m[(r, j)];
                            m[(i, j)] = &m[(i, j)] - &t;
                        }
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Echelon { reduced: m, pivots }
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        match self.ring {
            RingSpec::Integers => self
                .to_ring(RingSpec::Rationals)
                .expect("integers embed in rationals")
                .rank(),
            _ => self.echelon().pivots.len(),
        }
    }

    /// Basis of the null space over a field, one vector per free column, in
    /// increasing order of the free column.
    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let ech = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !ech.pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![self.ring.zero(); self.cols];
                v[f] = self.ring.one();
                for (r, &p) in ech.pivots.iter().enumerate() {
                    v[p] = -&ech.reduced[(r, f)];
                }
                v
            })
            .collect()
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch("inverse of a non-square matrix".into()));
        }
        if self.ring == RingSpec::Integers {
            let q = self.to_ring(RingSpec::Rationals)?.inverse()?;
            return q
                .to_ring(RingSpec::Integers)
                .map_err(|_| Error::NotInvertible("integer matrix with non-unit determinant".into()));
        }
        let n = self.rows;
        let aug = Matrix::hstack(self.ring, n, &[self, &Matrix::identity(self.ring, n)]);
        let ech = aug.echelon();
        if ech.pivots.len() < n || (n > 0 && ech.pivots[n - 1] != n - 1) {
            return Err(Error::NotInvertible("singular matrix".into()));
        }
        let cols: Vec<usize> = (n..2 * n).collect();
        Ok(ech.reduced.select_columns(&cols))
    }

    pub fn determinant(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        if self.ring == RingSpec::Integers {
            let d = self.to_ring(RingSpec::Rationals).unwrap().determinant();
            return match d {
                Scalar::Rational(q) => Scalar::Integer(q.to_integer()),
                _ => unreachable!(),
            };
        }
        let mut m = self.clone();
        let mut det = self.ring.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m[(i, c)].is_zero()) else {
                return self.ring.zero();
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            det = &det * &m[(c, c)];
            let inv = m[(c, c)].inverse().unwrap();
            for i in c + 1..m.rows {
                if !m[(i, c)].is_zero() {
                    let f = &m[(i, c)] * &inv;
                    for j in c..m.cols {
                        let t = &f * &m[(c, j)];
                        m[(i, j)] = &m[(i, j)] - &t;
                    }
                }
            }
        }
        det
    }
}

/// Finds `x` with `m * x = b`, or `None` when `b` is not in the image.
///
/// Over a field the solution comes from Gauss-Jordan elimination with the
/// lowest-index pivot rule and every free variable set to zero, so the
/// answer is reproducible. Over the integers solvability is decided through
/// the Smith normal form and the same zero convention applies to the free
/// coordinates of the diagonalised system.
pub fn solve_exact(m: &Matrix, b: &[Scalar]) -> Option<Vec<Scalar>> {
    assert_eq!(m.rows, b.len(), "right-hand side length");
    let ring = m.ring;
    match ring {
        RingSpec::Integers => {
            let snf = smith_normal_form(m).expect("integer matrix");
            let ub = snf.u.mul_vec(b);
            let mut y = vec![ring.zero(); m.cols];
            for (i, ubi) in ub.iter().enumerate() {
                let z = ubi.to_bigint().expect("integer");
                if i < snf.rank {
                    let d = snf.d[(i, i)].to_bigint().expect("integer");
                    if &z % &d != BigInt::from(0) {
                        return None;
                    }
                    y[i] = Scalar::Integer(z / d);
                } else if z != BigInt::from(0) {
                    return None;
                }
            }
            Some(snf.v.mul_vec(&y))
        }
        _ => {
            let col = Matrix::from_columns(ring, m.rows, &[b.to_vec()]);
            let aug = Matrix::hstack(ring, m.rows, &[m, &col]);
            let ech = aug.echelon();
            if ech.pivots.last() == Some(&m.cols) {
                return None;
            }
            let mut x = vec![ring.zero(); m.cols];
            for (r, &p) in ech.pivots.iter().enumerate() {
                x[p] = ech.reduced[(r, m.cols)].clone();
            }
            Some(x)
        }
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;

    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(|s| s.to_string()).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f2() -> RingSpec {
        RingSpec::PrimeField(2)
    }

    #[test]
    fn identity_solves_anything() {
        let q = RingSpec::Rationals;
        let b = vec![q.from_i64(3), q.parse_scalar("-2/7").unwrap()];
        assert_eq!(solve_exact(&Matrix::identity(q, 2), &b), Some(b.clone()));
    }

    #[test]
    fn integer_unsolvable() {
        let z = RingSpec::Integers;
        let m = Matrix::from_i64(z, &[&[2]]);
        assert_eq!(solve_exact(&m, &[z.one()]), None);
        assert_eq!(solve_exact(&m, &[z.from_i64(4)]), Some(vec![z.from_i64(2)]));
    }

    #[test]
    fn pivot_rule_over_f2() {
        // candidates (1,0) and (0,1) both work; free variable x1 is zeroed
        let m = Matrix::from_i64(f2(), &[&[1, 1]]);
        let x = solve_exact(&m, &[f2().one()]).unwrap();
        assert_eq!(x, vec![f2().one(), f2().zero()]);
    }

    #[test]
    fn kernel_and_rank() {
        let q = RingSpec::Rationals;
        let m = Matrix::from_i64(q, &[&[1, 2, 3], &[2, 4, 6]]);
        assert_eq!(m.rank(), 1);
        let k = m.kernel_basis();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn integer_inverse_needs_unimodular() {
        let z = RingSpec::Integers;
        let u = Matrix::from_i64(z, &[&[2, 1], &[1, 1]]);
        let inv = u.inverse().unwrap();
        assert_eq!(u.mul(&inv), Matrix::identity(z, 2));
        assert!(Matrix::from_i64(z, &[&[2, 0], &[0, 1]]).inverse().is_err());
        assert_eq!(u.determinant(), z.one());
    }
}
