use std::collections::BTreeMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::RingSpec;

/// A free graded module of finite total rank.
///
/// Basis elements carry a global index; indices are sorted by degree, so
/// within one degree they form a contiguous range.
#[derive(Debug, Clone)]
pub struct GradedModule {
    ring: RingSpec,
    dims: BTreeMap<i64, usize>,
    offsets: BTreeMap<i64, usize>,
    degrees: Vec<i64>,
}

impl PartialEq for GradedModule {
    fn eq(&self, other: &Self) -> bool {
        self.ring == other.ring && self.dims == other.dims
    }
}

impl Eq for GradedModule {}

impl GradedModule {
    pub fn new(ring: RingSpec, dims: impl IntoIterator<Item = (i64, usize)>) -> Self {
        let mut merged = BTreeMap::new();
        for (deg, rank) in dims {
            if rank > 0 {
                *merged.entry(deg).or_insert(0) += rank;
            }
        }
        let mut offsets = BTreeMap::new();
        let mut degrees = Vec::new();
        for (&deg, &rank) in &merged {
            offsets.insert(deg, degrees.len());
            degrees.extend(std::iter::repeat_n(deg, rank));
        }
        GradedModule {
            ring,
            dims: merged,
            offsets,
            degrees,
        }
    }

    pub fn zero(ring: RingSpec) -> Self {
        Self::new(ring, [])
    }

    pub fn ring(&self) -> RingSpec {
        self.ring
    }

    pub fn total_rank(&self) -> usize {
        self.degrees.len()
    }

    pub fn dim(&self, degree: i64) -> usize {
        self.dims.get(&degree).copied().unwrap_or(0)
    }

    /// `(degree, rank)` for every nonzero piece, in increasing degree.
    pub fn dims(&self) -> impl Iterator<Item = (i64, usize)> + '_ {
        self.dims.iter().map(|(&d, &r)| (d, r))
    }

    pub fn support(&self) -> Option<(i64, i64)> {
        Some((*self.dims.keys().next()?, *self.dims.keys().next_back()?))
    }

    pub fn degree_of(&self, index: usize) -> i64 {
        self.degrees[index]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    /// Global indices of the basis in `degree`.
    pub fn basis(&self, degree: i64) -> std::ops::Range<usize> {
        match self.offsets.get(&degree) {
            Some(&o) => o..o + self.dims[&degree],
            None => 0..0,
        }
    }

    pub fn global(&self, degree: i64, local: usize) -> usize {
        assert!(local < self.dim(degree), "basis element out of range");
        self.offsets[&degree] + local
    }

    pub fn local(&self, index: usize) -> (i64, usize) {
        let d = self.degrees[index];
        (d, index - self.offsets[&d])
    }

    /// The same basis with every degree raised by `shift`.
    pub fn shifted(&self, shift: i64) -> GradedModule {
        GradedModule::new(self.ring, self.dims.iter().map(|(&d, &r)| (d + shift, r)))
    }

    pub fn suspend(&self) -> GradedModule {
        self.shifted(1)
    }

    pub fn is_suspension_of(&self, other: &GradedModule) -> bool {
        *self == other.suspend()
    }
}

/// A graded module with a differential of degree -1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DgModule {
    module: Arc<GradedModule>,
    // d[n]: C_n -> C_{n-1}, rows = dim C_{n-1}, cols = dim C_n
    d: BTreeMap<i64, Matrix>,
}

impl DgModule {
    /// Builds a dgmodule from per-degree blocks `n -> (d_n: C_n -> C_{n-1})`
    /// and checks `d o d = 0`.
    pub fn new(module: GradedModule, blocks: impl IntoIterator<Item = (i64, Matrix)>) -> Result<Self> {
        let module = Arc::new(module);
        let mut d = BTreeMap::new();
        let mut seen = std::collections::BTreeSet::new();
        for (n, m) in blocks {
            if m.ring() != module.ring() {
                return Err(Error::RingMismatch(m.ring(), module.ring()));
            }
            if m.rows() != module.dim(n - 1) || m.cols() != module.dim(n) {
                return Err(Error::DimensionMismatch(format!(
                    "differential block in degree {n} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    module.dim(n - 1),
                    module.dim(n)
                )));
            }
            if !seen.insert(n) {
                return Err(Error::DimensionMismatch(format!("duplicate block in degree {n}")));
            }
            // zero blocks are implicit so that equality does not depend on them
            if !m.is_zero() {
                d.insert(n, m);
            }
        }
        let c = DgModule { module, d };
        for (&n, dn) in &c.d {
            if let Some(prev) = c.d.get(&(n - 1)) {
                if !prev.mul(dn).is_zero() {
                    return Err(Error::NotADifferential(n));
                }
            }
        }
        Ok(c)
    }

    pub fn with_zero_differential(module: GradedModule) -> Self {
        DgModule {
            module: Arc::new(module),
            d: BTreeMap::new(),
        }
    }

    pub fn module(&self) -> &GradedModule {
        &self.module
    }

    pub fn module_arc(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn ring(&self) -> RingSpec {
        self.module.ring()
    }

    /// `d_n: C_n -> C_{n-1}`, zero outside the stored blocks.
    pub fn d_block(&self, n: i64) -> Matrix {
        self.d.get(&n).cloned().unwrap_or_else(|| {
            Matrix::zeros(self.ring(), self.module.dim(n - 1), self.module.dim(n))
        })
    }

    pub fn blocks(&self) -> impl Iterator<Item = (i64, &Matrix)> {
        self.d.iter().map(|(&n, m)| (n, m))
    }

    pub fn has_zero_differential(&self) -> bool {
        self.d.values().all(Matrix::is_zero)
    }

    /// The differential on the whole basis as one square matrix.
    pub fn differential_matrix(&self) -> Matrix {
        let n = self.module.total_rank();
        let mut m = Matrix::zeros(self.ring(), n, n);
        for (&deg, block) in &self.d {
            let src = self.module.basis(deg);
            let tgt = self.module.basis(deg - 1);
            for (i, row) in tgt.clone().enumerate() {
                for (j, col) in src.clone().enumerate() {
                    m[(row, col)] = block[(i, j)].clone();
                }
            }
        }
        m
    }

    /// Checks `d o d = 0` in every degree.
    pub fn check_square_zero(&self) -> Result<()> {
        for (&n, dn) in &self.d {
            if let Some(prev) = self.d.get(&(n - 1)) {
                if !prev.mul(dn).is_zero() {
                    return Err(Error::NotADifferential(n));
                }
            }
        }
        Ok(())
    }

    pub fn direct_sum(&self, other: &DgModule) -> Result<DgModule> {
        if self.ring() != other.ring() {
            return Err(Error::RingMismatch(self.ring(), other.ring()));
        }
        let module = GradedModule::new(
            self.ring(),
            self.module.dims().chain(other.module.dims()),
        );
        let mut blocks = Vec::new();
        for (n, _) in module.dims() {
            let (a, b) = (self.d_block(n), other.d_block(n));
            let mut m = Matrix::zeros(self.ring(), a.rows() + b.rows(), a.cols() + b.cols());
            for i in 0..a.rows() {
                for j in 0..a.cols() {
                    m[(i, j)] = a[(i, j)].clone();
                }
            }
            for i in 0..b.rows() {
                for j in 0..b.cols() {
                    m[(a.rows() + i, a.cols() + j)] = b[(i, j)].clone();
                }
            }
            blocks.push((n, m));
        }
        DgModule::new(module, blocks)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn indexing() {
        let m = GradedModule::new(RingSpec::Rationals, [(1, 2), (-1, 1), (0, 0)]);
        assert_eq!(m.total_rank(), 3);
        assert_eq!(m.degrees(), &[-1, 1, 1]);
        assert_eq!(m.basis(1), 1..3);
        assert_eq!(m.local(2), (1, 1));
        assert_eq!(m.global(1, 1), 2);
        assert_eq!(m.dim(5), 0);
        assert_eq!(m.support(), Some((-1, 1)));
        assert!(m.suspend().is_suspension_of(&m));
        assert!(!m.is_suspension_of(&m));
    }

    #[test]
    fn rejects_non_differential() {
        let q = RingSpec::Rationals;
        let m = GradedModule::new(q, [(0, 1), (1, 1), (2, 1)]);
        let one = Matrix::from_i64(q, &[&[1]]);
        assert_eq!(
            DgModule::new(m, [(1, one.clone()), (2, one)]),
            Err(Error::NotADifferential(2))
        );
    }

    #[test]
    fn rejects_bad_shape() {
        let q = RingSpec::Rationals;
        let m = GradedModule::new(q, [(0, 1), (1, 2)]);
        assert!(DgModule::new(m, [(1, Matrix::from_i64(q, &[&[1]]))]).is_err());
    }
}
