use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::complexes::graded::{DgModule, GradedModule};
use crate::complexes::map::{GradedMap, TensorProduct};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{RingSpec, Scalar};

/// `(output basis index, input basis indices)`.
pub type TermKey = (usize, Vec<usize>);

/// An element of `End^n_i(V) = Hom_i(V^{(x) n}, V)`: a multilinear map of
/// arity `n` raising degree by `i`, stored as sparse coefficients on basis
/// tuples.
///
/// Terms are kept sorted by `(output, inputs)`; since basis indices are
/// sorted by degree this is the order `(output degree, output index, input
/// tuple)`. Zero coefficients are never stored, so structural equality is
/// equality of maps.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiMap {
    module: Arc<GradedModule>,
    arity: usize,
    degree: i64,
    terms: BTreeMap<TermKey, Scalar>,
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiMap(arity {}, degree {}) {{", self.arity, self.degree)?;
        for ((o, ins), c) in &self.terms {
            write!(f, " {c}*[{o} <- {ins:?}]")?;
        }
        write!(f, " }}")
    }
}

impl MultiMap {
    pub fn zero(module: Arc<GradedModule>, arity: usize, degree: i64) -> Self {
        assert!(arity >= 1, "arity must be at least 1");
        MultiMap {
            module,
            arity,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// Builds a map from explicit terms; duplicates are summed, and every
    /// term must satisfy `|out| = sum |inputs| + degree`.
    pub fn from_terms(
        module: Arc<GradedModule>,
        arity: usize,
        degree: i64,
        terms: impl IntoIterator<Item = (TermKey, Scalar)>,
    ) -> Result<Self> {
        if arity == 0 {
            return Err(Error::ArityOutOfRange { place: 0, arity });
        }
        let mut m = MultiMap::zero(module, arity, degree);
        let n = m.module.total_rank();
        for ((out, inputs), c) in terms {
            if c.ring() != m.module.ring() {
                return Err(Error::RingMismatch(c.ring(), m.module.ring()));
            }
            if inputs.len() != arity {
                return Err(Error::DimensionMismatch(format!(
                    "term has {} inputs, map has arity {arity}",
                    inputs.len()
                )));
            }
            if out >= n || inputs.iter().any(|&x| x >= n) {
                return Err(Error::DimensionMismatch("basis index out of range".into()));
            }
            let expected = inputs.iter().map(|&x| m.module.degree_of(x)).sum::<i64>() + degree;
            if m.module.degree_of(out) != expected && !c.is_zero() {
                return Err(Error::DegreeViolation(format!(
                    "output {out} of degree {} but inputs {inputs:?} give {expected}",
                    m.module.degree_of(out)
                )));
            }
            m.add_term((out, inputs), c);
        }
        Ok(m)
    }

    pub fn identity(module: Arc<GradedModule>) -> Self {
        let one = module.ring().one();
        let terms: BTreeMap<TermKey, Scalar> = (0..module.total_rank())
            .map(|i| ((i, vec![i]), one.clone()))
            .collect();
        MultiMap {
            module,
            arity: 1,
            degree: 0,
            terms,
        }
    }

    /// The arity-one map with the given matrix (rows = outputs).
    pub fn from_matrix(module: Arc<GradedModule>, degree: i64, m: &Matrix) -> Result<Self> {
        let mut terms = Vec::new();
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                if !m[(i, j)].is_zero() {
                    terms.push(((i, vec![j]), m[(i, j)].clone()));
                }
            }
        }
        MultiMap::from_terms(module, 1, degree, terms)
    }

    pub fn to_matrix(&self) -> Matrix {
        assert_eq!(self.arity, 1, "only arity-one maps are matrices");
        let n = self.module.total_rank();
        let mut m = Matrix::zeros(self.ring(), n, n);
        for ((o, ins), c) in &self.terms {
            m[(*o, ins[0])] = c.clone();
        }
        m
    }

    pub(crate) fn add_term(&mut self, key: TermKey, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn ring(&self) -> RingSpec {
        self.module.ring()
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    /// `degree + arity - 1`.
    pub fn weight(&self) -> i64 {
        self.degree + self.arity as i64 - 1
    }

    pub fn terms(&self) -> impl Iterator<Item = (&TermKey, &Scalar)> {
        self.terms.iter()
    }

    pub fn nnz(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, out: usize, inputs: &[usize]) -> Scalar {
        self.terms
            .get(&(out, inputs.to_vec()))
            .cloned()
            .unwrap_or_else(|| self.ring().zero())
    }

    /// Evaluates on a tuple of basis elements, returning coordinates in `V`.
    pub fn apply(&self, inputs: &[usize]) -> Vec<Scalar> {
        assert_eq!(inputs.len(), self.arity, "wrong number of inputs");
        let mut v = vec![self.ring().zero(); self.module.total_rank()];
        for ((o, ins), c) in &self.terms {
            if ins == inputs {
                v[*o] = c.clone();
            }
        }
        v
    }

    fn same_space(&self, other: &MultiMap) -> Result<()> {
        if self.module.ring() != other.module.ring() {
            return Err(Error::RingMismatch(self.ring(), other.ring()));
        }
        if !Arc::ptr_eq(&self.module, &other.module) && *self.module != *other.module {
            return Err(Error::ModuleMismatch);
        }
        Ok(())
    }

    fn same_shape(&self, other: &MultiMap) -> Result<()> {
        self.same_space(other)?;
        if self.arity != other.arity || self.degree != other.degree {
            return Err(Error::DegreeViolation(format!(
                "cannot combine End^{}_{} with End^{}_{}",
                self.arity, self.degree, other.arity, other.degree
            )));
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.same_shape(other)?;
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn checked_sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.checked_add(&other.neg())
    }

    pub fn neg(&self) -> MultiMap {
        MultiMap {
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
            ..self.clone()
        }
    }

    pub fn scale(&self, s: &Scalar) -> MultiMap {
        let mut out = MultiMap::zero(self.module.clone(), self.arity, self.degree);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    /// Multiplies by `(-1)^exponent`.
    pub fn signed(&self, exponent: i64) -> MultiMap {
        if exponent.rem_euclid(2) == 0 {
            self.clone()
        } else {
            self.neg()
        }
    }

    /// Partial composition `f o_k g = f(id^{k-1} (x) g (x) id^{n-k})`, with
    /// `1 <= k <= arity(f)`. On basis tuples the Koszul rule contributes
    /// `(-1)^{|g| (|x_1| + ... + |x_{k-1}|)}`.
    pub fn compose_at(&self, k: usize, g: &MultiMap) -> Result<MultiMap> {
        if k == 0 || k > self.arity {
            return Err(Error::ArityOutOfRange {
                place: k,
                arity: self.arity,
            });
        }
        self.same_space(g)?;
        let slot = k - 1;
        let mut by_slot: HashMap<usize, Vec<(&TermKey, &Scalar)>> = HashMap::new();
        for (key, c) in &self.terms {
            by_slot.entry(key.1[slot]).or_default().push((key, c));
        }
        let g_odd = g.degree.rem_euclid(2) == 1;
        let mut out = MultiMap::zero(
            self.module.clone(),
            self.arity + g.arity - 1,
            self.degree + g.degree,
        );
        for ((g_out, g_in), gc) in &g.terms {
            let Some(fs) = by_slot.get(g_out) else {
                continue;
            };
            for ((f_out, f_in), fc) in fs {
                let mut inputs = Vec::with_capacity(out.arity);
                inputs.extend_from_slice(&f_in[..slot]);
                inputs.extend_from_slice(g_in);
                inputs.extend_from_slice(&f_in[slot + 1..]);
                let mut c = *fc * gc;
                if g_odd {
                    let before: i64 = f_in[..slot].iter().map(|&x| self.module.degree_of(x)).sum();
                    c = c.signed(before);
                }
                out.add_term((*f_out, inputs), c);
            }
        }
        Ok(out)
    }

    /// `out o f o (in (x) ... (x) in)` for degree-zero linear maps, moving a
    /// map on one module to another one. `out_map` sends this map's module
    /// to `target`; `in_map` sends `target` to this map's module.
    pub fn transport(
        &self,
        target: Arc<GradedModule>,
        out_map: &Matrix,
        in_map: &Matrix,
    ) -> Result<MultiMap> {
        let n_old = self.module.total_rank();
        let n_new = target.total_rank();
        if out_map.rows() != n_new
            || out_map.cols() != n_old
            || in_map.rows() != n_old
            || in_map.cols() != n_new
        {
            return Err(Error::DimensionMismatch("transport maps".into()));
        }
        let preimages: Vec<Vec<(usize, Scalar)>> = (0..n_old)
            .map(|h| {
                (0..n_new)
                    .filter(|&c| !in_map[(h, c)].is_zero())
                    .map(|c| (c, in_map[(h, c)].clone()))
                    .collect()
            })
            .collect();
        let images: Vec<Vec<(usize, Scalar)>> = (0..n_old)
            .map(|o| {
                (0..n_new)
                    .filter(|&c| !out_map[(c, o)].is_zero())
                    .map(|c| (c, out_map[(c, o)].clone()))
                    .collect()
            })
            .collect();
        let mut out = MultiMap::zero(target, self.arity, self.degree);
        for ((o, ins), coef) in &self.terms {
            let mut partial: Vec<(Vec<usize>, Scalar)> = vec![(Vec::new(), coef.clone())];
            for &h in ins {
                let mut next = Vec::new();
                for (tuple, c) in &partial {
                    for (x, a) in &preimages[h] {
                        let mut t = tuple.clone();
                        t.push(*x);
                        next.push((t, c * a));
                    }
                }
                partial = next;
                if partial.is_empty() {
                    break;
                }
            }
            for (tuple, c) in partial {
                for (o2, b) in &images[*o] {
                    out.add_term((*o2, tuple.clone()), &c * b);
                }
            }
        }
        // validate degrees on the result
        for (o, ins) in out.terms.keys() {
            let s: i64 = ins.iter().map(|&x| out.module.degree_of(x)).sum();
            if out.module.degree_of(*o) != s + out.degree {
                return Err(Error::DegreeViolation("transport along non-homogeneous maps".into()));
            }
        }
        Ok(out)
    }

    /// Coordinates with respect to `basis` (as produced by [`endo_basis`]).
    pub fn coordinates(&self, index: &HashMap<TermKey, usize>, len: usize) -> Vec<Scalar> {
        let mut v = vec![self.ring().zero(); len];
        for (k, c) in &self.terms {
            let i = *index.get(k).expect("term outside the chosen basis");
            v[i] = c.clone();
        }
        v
    }

    pub fn from_coordinates(
        module: Arc<GradedModule>,
        arity: usize,
        degree: i64,
        basis: &[TermKey],
        coords: &[Scalar],
    ) -> MultiMap {
        let mut m = MultiMap::zero(module, arity, degree);
        for (k, c) in basis.iter().zip(coords) {
            m.add_term(k.clone(), c.clone());
        }
        m
    }
}

/// The differential of a dgmodule as an arity-one map of degree -1.
pub fn differential_multimap(c: &DgModule) -> MultiMap {
    MultiMap::from_matrix(c.module_arc().clone(), -1, &c.differential_matrix())
        .expect("differential has degree -1")
}

/// Differential of `Hom(V^{(x) n}, V)`:
/// `df = d o_1 f - (-1)^i sum_k f o_k d`.
pub fn hom_differential(f: &MultiMap, d: &MultiMap) -> Result<MultiMap> {
    let mut out = d.compose_at(1, f)?;
    let sign = f.ring().sign(f.degree() + 1);
    for k in 1..=f.arity() {
        let t = f.compose_at(k, d)?;
        out = out.checked_add(&t.scale(&sign))?;
    }
    Ok(out)
}

/// Reads a map `C^{(x) n} -> C` given on an explicit tensor power as a
/// multilinear map on `C`.
pub fn multimap_from_graded(tp: &TensorProduct, f: &GradedMap, module: Arc<GradedModule>) -> Result<MultiMap> {
    let arity = tp.factors.first().map_or(1, |t| t.len());
    let m = f.matrix();
    let mut terms = Vec::new();
    for (col, tuple) in tp.factors.iter().enumerate() {
        for row in 0..m.rows() {
            if !m[(row, col)].is_zero() {
                terms.push(((row, tuple.clone()), m[(row, col)].clone()));
            }
        }
    }
    MultiMap::from_terms(module, arity, f.degree(), terms)
}

/// The inverse of [`multimap_from_graded`].
pub fn graded_from_multimap(tp: &TensorProduct, f: &MultiMap, target: &DgModule) -> Result<GradedMap> {
    let index = tp.index_of();
    let mut m = Matrix::zeros(f.ring(), target.module().total_rank(), tp.factors.len());
    for ((o, ins), c) in f.terms() {
        let col = *index
            .get(ins)
            .ok_or_else(|| Error::DimensionMismatch("tuple outside the tensor power".into()))?;
        m[(*o, col)] = c.clone();
    }
    GradedMap::new(tp.complex.clone(), target.clone(), f.degree(), m)
}

/// Input tuples of length `arity` whose degrees sum to `total`.
pub fn tuples_of_degree(module: &GradedModule, arity: usize, total: i64) -> Vec<Vec<usize>> {
    let Some((lo, hi)) = module.support() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(arity);
    fn rec(
        m: &GradedModule,
        arity: usize,
        remaining: i64,
        lo: i64,
        hi: i64,
        current: &mut Vec<usize>,
        out: &mut Vec<Vec<usize>>,
    ) {
        let left = (arity - current.len()) as i64;
        if left == 0 {
            if remaining == 0 {
                out.push(current.clone());
            }
            return;
        }
        if remaining < lo * left || remaining > hi * left {
            return;
        }
        for x in 0..m.total_rank() {
            current.push(x);
            rec(m, arity, remaining - m.degree_of(x), lo, hi, current, out);
            current.pop();
        }
    }
    rec(module, arity, total, lo, hi, &mut current, &mut out);
    out
}

/// All basis elements `(out, inputs)` of `End^arity_degree(V)` in canonical
/// order.
pub fn endo_basis(module: &GradedModule, arity: usize, degree: i64) -> Vec<TermKey> {
    let mut out = Vec::new();
    for o in 0..module.total_rank() {
        for t in tuples_of_degree(module, arity, module.degree_of(o) - degree) {
            out.push((o, t));
        }
    }
    out
}

pub fn basis_index(basis: &[TermKey]) -> HashMap<TermKey, usize> {
    basis.iter().enumerate().map(|(i, k)| (k.clone(), i)).collect()
}

/// The matrix of a linear operator `End^n_i(V) -> End^m_j(V)` in the
/// canonical bases of [`endo_basis`].
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    pub matrix: Matrix,
    pub source: Vec<TermKey>,
    pub target: Vec<TermKey>,
    pub source_bidegree: (usize, i64),
    pub target_bidegree: (usize, i64),
}

impl OperatorMatrix {
    pub fn build(
        module: &Arc<GradedModule>,
        source_bidegree: (usize, i64),
        target_bidegree: (usize, i64),
        op: impl Fn(&MultiMap) -> Result<MultiMap>,
    ) -> Result<Self> {
        let ring = module.ring();
        let source = endo_basis(module, source_bidegree.0, source_bidegree.1);
        let target = endo_basis(module, target_bidegree.0, target_bidegree.1);
        let index = basis_index(&target);
        let mut columns = Vec::with_capacity(source.len());
        for key in &source {
            let e = MultiMap::from_terms(module.clone(), source_bidegree.0, source_bidegree.1, [(key.clone(), ring.one())])?;
            let image = op(&e)?;
            if (image.arity(), image.degree()) != target_bidegree {
                return Err(Error::DegreeViolation(format!(
                    "operator sent bidegree {source_bidegree:?} to ({}, {})",
                    image.arity(),
                    image.degree()
                )));
            }
            columns.push(image.coordinates(&index, target.len()));
        }
        let matrix = Matrix::from_columns(ring, target.len(), &columns);
        Ok(OperatorMatrix { matrix, source, target, source_bidegree, target_bidegree })
    }

    pub fn source_coordinates(&self, f: &MultiMap) -> Vec<Scalar> {
        f.coordinates(&basis_index(&self.source), self.source.len())
    }

    pub fn target_coordinates(&self, f: &MultiMap) -> Vec<Scalar> {
        f.coordinates(&basis_index(&self.target), self.target.len())
    }

    pub fn source_element(&self, module: &Arc<GradedModule>, coords: &[Scalar]) -> MultiMap {
        let (n, i) = self.source_bidegree;
        MultiMap::from_coordinates(module.clone(), n, i, &self.source, coords)
    }

    pub fn target_element(&self, module: &Arc<GradedModule>, coords: &[Scalar]) -> MultiMap {
        let (n, i) = self.target_bidegree;
        MultiMap::from_coordinates(module.clone(), n, i, &self.target, coords)
    }

    /// Some `x` with `op(x) = y`, by [`solve_exact`](crate::matrix::solve_exact).
    pub fn solve(&self, module: &Arc<GradedModule>, y: &MultiMap) -> Option<MultiMap> {
        let b = self.target_coordinates(y);
        crate::matrix::solve_exact(&self.matrix, &b).map(|x| self.source_element(module, &x))
    }
}

impl std::ops::Add for &MultiMap {
    type Output = MultiMap;
    fn add(self, rhs: &MultiMap) -> MultiMap {
        self.checked_add(rhs).expect("adding incompatible multimaps")
    }
}

impl std::ops::Sub for &MultiMap {
    type Output = MultiMap;
    fn sub(self, rhs: &MultiMap) -> MultiMap {
        self.checked_sub(rhs).expect("subtracting incompatible multimaps")
    }
}
