use std::collections::HashMap;

use crate::complexes::graded::{DgModule, GradedModule};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::Scalar;

/// A homogeneous map `C -> D` of some degree, stored as one matrix over the
/// full bases. Entries joining basis elements whose degrees do not differ by
/// `degree` are always zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedMap {
    source: DgModule,
    target: DgModule,
    degree: i64,
    matrix: Matrix,
}

impl GradedMap {
    pub fn new(source: DgModule, target: DgModule, degree: i64, matrix: Matrix) -> Result<Self> {
        if source.ring() != target.ring() {
            return Err(Error::RingMismatch(source.ring(), target.ring()));
        }
        if matrix.ring() != source.ring() {
            return Err(Error::RingMismatch(matrix.ring(), source.ring()));
        }
        let (s, t) = (source.module(), target.module());
        if matrix.rows() != t.total_rank() || matrix.cols() != s.total_rank() {
            return Err(Error::DimensionMismatch("graded map matrix shape".into()));
        }
        for i in 0..matrix.rows() {
            for j in 0..matrix.cols() {
                if !matrix[(i, j)].is_zero() && t.degree_of(i) != s.degree_of(j) + degree {
                    return Err(Error::DegreeViolation(format!(
                        "entry ({i},{j}) of a degree {degree} map"
                    )));
                }
            }
        }
        Ok(GradedMap {
            source,
            target,
            degree,
            matrix,
        })
    }

    pub fn zero(source: DgModule, target: DgModule, degree: i64) -> Self {
        let m = Matrix::zeros(
            source.ring(),
            target.module().total_rank(),
            source.module().total_rank(),
        );
        GradedMap {
            source,
            target,
            degree,
            matrix: m,
        }
    }

    pub fn identity(c: &DgModule) -> Self {
        let n = c.module().total_rank();
        GradedMap {
            source: c.clone(),
            target: c.clone(),
            degree: 0,
            matrix: Matrix::identity(c.ring(), n),
        }
    }

    pub fn source(&self) -> &DgModule {
        &self.source
    }

    pub fn target(&self) -> &DgModule {
        &self.target
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The block `C_n -> D_{n + degree}`.
    pub fn block(&self, n: i64) -> Matrix {
        let rows: Vec<usize> = self.target.module().basis(n + self.degree).collect();
        let cols: Vec<usize> = self.source.module().basis(n).collect();
        self.matrix.select_rows(&rows).select_columns(&cols)
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.mul_vec(v)
    }

    pub fn is_zero(&self) -> bool {
        self.matrix.is_zero()
    }

    /// `self o other`.
    pub fn compose(&self, other: &GradedMap) -> Result<GradedMap> {
        if other.target != self.source {
            return Err(Error::ModuleMismatch);
        }
        Ok(GradedMap {
            source: other.source.clone(),
            target: self.target.clone(),
            degree: self.degree + other.degree,
            matrix: self.matrix.mul(&other.matrix),
        })
    }

    fn same_shape(&self, other: &GradedMap) -> Result<()> {
        if self.source != other.source || self.target != other.target {
            return Err(Error::ModuleMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeViolation("adding maps of different degrees".into()));
        }
        Ok(())
    }

    pub fn add(&self, other: &GradedMap) -> Result<GradedMap> {
        self.same_shape(other)?;
        Ok(GradedMap {
            matrix: self.matrix.add(&other.matrix),
            ..self.clone()
        })
    }

    pub fn sub(&self, other: &GradedMap) -> Result<GradedMap> {
        self.same_shape(other)?;
        Ok(GradedMap {
            matrix: self.matrix.sub(&other.matrix),
            ..self.clone()
        })
    }

    pub fn scale(&self, c: &Scalar) -> GradedMap {
        GradedMap {
            matrix: self.matrix.scale(c),
            ..self.clone()
        }
    }

    /// `(df)(c) = d_D(f(c)) - (-1)^i f(d_C c)`.
    pub fn hom_differential(&self) -> GradedMap {
        let dd = self.target.differential_matrix();
        let dc = self.source.differential_matrix();
        let left = dd.mul(&self.matrix);
        let right = self.matrix.mul(&dc).scale(&self.source.ring().sign(self.degree));
        GradedMap {
            source: self.source.clone(),
            target: self.target.clone(),
            degree: self.degree - 1,
            matrix: left.sub(&right),
        }
    }

    pub fn is_chain_map(&self) -> bool {
        self.hom_differential().is_zero()
    }
}

/// Builds a dgmodule from a differential given on the full basis.
pub fn dg_from_full_matrix(module: GradedModule, full: &Matrix) -> Result<DgModule> {
    let mut blocks = Vec::new();
    for (n, _) in module.dims() {
        let rows: Vec<usize> = module.basis(n - 1).collect();
        let cols: Vec<usize> = module.basis(n).collect();
        if rows.is_empty() {
            continue;
        }
        blocks.push((n, full.select_rows(&rows).select_columns(&cols)));
    }
    for i in 0..full.rows() {
        for j in 0..full.cols() {
            if !full[(i, j)].is_zero() && module.degree_of(i) != module.degree_of(j) - 1 {
                return Err(Error::DegreeViolation("differential must have degree -1".into()));
            }
        }
    }
    DgModule::new(module, blocks)
}

/// A tensor product together with the factor indices of each basis element.
#[derive(Debug, Clone)]
pub struct TensorProduct {
    pub complex: DgModule,
    pub factors: Vec<Vec<usize>>,
}

impl TensorProduct {
    pub fn index_of(&self) -> HashMap<Vec<usize>, usize> {
        self.factors
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect()
    }
}

fn tensor_of_lists(
    left: &DgModule,
    left_factors: &[Vec<usize>],
    right: &DgModule,
) -> Result<TensorProduct> {
    if left.ring() != right.ring() {
        return Err(Error::RingMismatch(left.ring(), right.ring()));
    }
    let ring = left.ring();
    let (lm, rm) = (left.module(), right.module());
    // basis ordered by total degree, then left index, then right index
    let mut pairs: Vec<(i64, usize, usize)> = Vec::new();
    for a in 0..lm.total_rank() {
        for b in 0..rm.total_rank() {
            pairs.push((lm.degree_of(a) + rm.degree_of(b), a, b));
        }
    }
    pairs.sort();
    let module = GradedModule::new(ring, pairs.iter().map(|&(d, _, _)| (d, 1)));
    let index: HashMap<(usize, usize), usize> = pairs
        .iter()
        .enumerate()
        .map(|(i, &(_, a, b))| ((a, b), i))
        .collect();
    let dl = left.differential_matrix();
    let dr = right.differential_matrix();
    let n = pairs.len();
    let mut full = Matrix::zeros(ring, n, n);
    for (col, &(_, a, b)) in pairs.iter().enumerate() {
        for a2 in 0..lm.total_rank() {
            let c = &dl[(a2, a)];
            if !c.is_zero() {
                let row = index[&(a2, b)];
                full[(row, col)] = &full[(row, col)] + c;
            }
        }
        let sign = ring.sign(lm.degree_of(a));
        for b2 in 0..rm.total_rank() {
            let c = &dr[(b2, b)];
            if !c.is_zero() {
                let row = index[&(a, b2)];
                full[(row, col)] = &full[(row, col)] + &(c * &sign);
            }
        }
    }
    let complex = dg_from_full_matrix(module, &full)?;
    let factors = pairs
        .iter()
        .map(|&(_, a, b)| {
            let mut f = left_factors[a].clone();
            f.push(b);
            f
        })
        .collect();
    Ok(TensorProduct { complex, factors })
}

/// `C (x) D` with `d(c (x) e) = dc (x) e + (-1)^{|c|} c (x) de`.
pub fn tensor(c: &DgModule, d: &DgModule) -> Result<TensorProduct> {
    let singles: Vec<Vec<usize>> = (0..c.module().total_rank()).map(|i| vec![i]).collect();
    tensor_of_lists(c, &singles, d)
}

/// `C^{(x) n}` for `n >= 1`, built as `(C^{(x) n-1}) (x) C`.
pub fn tensor_power(c: &DgModule, n: usize) -> Result<TensorProduct> {
    assert!(n >= 1, "tensor power needs n >= 1");
    let mut acc = TensorProduct {
        complex: c.clone(),
        factors: (0..c.module().total_rank()).map(|i| vec![i]).collect(),
    };
    for _ in 1..n {
        acc = tensor_of_lists(&acc.complex, &acc.factors, c)?;
    }
    Ok(acc)
}

/// `(sC)_i = C_{i-1}` with differential `d(sc) = -s(dc)`.
pub fn suspend(c: &DgModule) -> DgModule {
    let module = c.module().suspend();
    let blocks: Vec<(i64, Matrix)> = c.blocks().map(|(n, m)| (n + 1, m.neg())).collect();
    DgModule::new(module, blocks).expect("suspension of a dgmodule")
}

/// The suspension map `s: C -> sC` of degree +1.
pub fn suspension_map(c: &DgModule) -> GradedMap {
    let sc = suspend(c);
    let n = c.module().total_rank();
    GradedMap::new(c.clone(), sc, 1, Matrix::identity(c.ring(), n)).expect("suspension map")
}

/// The desuspension `s^{-1}: sC -> C` of degree -1.
pub fn desuspension_map(c: &DgModule) -> GradedMap {
    let sc = suspend(c);
    let n = c.module().total_rank();
    GradedMap::new(sc, c.clone(), -1, Matrix::identity(c.ring(), n)).expect("desuspension map")
}

/// `(f (x) g)(x (x) y) = (-1)^{|x| |g|} f(x) (x) g(y)`.
pub fn koszul_tensor_of_maps(f: &GradedMap, g: &GradedMap) -> Result<GradedMap> {
    if f.source().ring() != g.source().ring() {
        return Err(Error::RingMismatch(f.source().ring(), g.source().ring()));
    }
    let ring = f.source().ring();
    let src = tensor(f.source(), g.source())?;
    let tgt = tensor(f.target(), g.target())?;
    let tgt_index = tgt.index_of();
    let n_src = src.factors.len();
    let mut m = Matrix::zeros(ring, tgt.factors.len(), n_src);
    let (fm, gm) = (f.matrix(), g.matrix());
    for (col, fac) in src.factors.iter().enumerate() {
        let (x, y) = (fac[0], fac[1]);
        let sign = ring.sign(f.source().module().degree_of(x) * g.degree());
        for fx in 0..fm.rows() {
            let a = &fm[(fx, x)];
            if a.is_zero() {
                continue;
            }
            for gy in 0..gm.rows() {
                let b = &gm[(gy, y)];
                if b.is_zero() {
                    continue;
                }
                let row = tgt_index[&vec![fx, gy]];
                m[(row, col)] = &m[(row, col)] + &(&(a * b) * &sign);
            }
        }
    }
    GradedMap::new(src.complex, tgt.complex, f.degree() + g.degree(), m)
}

/// `Hom(C, D)` as a dgmodule: degree `i` has one basis element `E_{t,c}`
/// (sending `c` to `t`) for each pair with `|t| = |c| + i`.
#[derive(Debug, Clone)]
pub struct HomComplex {
    pub complex: DgModule,
    /// `(source index, target index)` for each basis element.
    pub entries: Vec<(usize, usize)>,
    pub source: DgModule,
    pub target: DgModule,
}

impl HomComplex {
    pub fn to_vector(&self, f: &GradedMap) -> Result<Vec<Scalar>> {
        if f.source() != &self.source || f.target() != &self.target {
            return Err(Error::ModuleMismatch);
        }
        let m = self.complex.module();
        Ok(self
            .entries
            .iter()
            .enumerate()
            .map(|(k, &(c, t))| {
                if m.degree_of(k) == f.degree() {
                    f.matrix()[(t, c)].clone()
                } else {
                    m.ring().zero()
                }
            })
            .collect())
    }

    /// The degree-`degree` map whose coordinates (over the basis of that
    /// degree only) are `coords`.
    pub fn from_coordinates(&self, degree: i64, coords: &[Scalar]) -> GradedMap {
        let m = self.complex.module();
        let range = m.basis(degree);
        assert_eq!(range.len(), coords.len(), "coordinate count");
        let mut mat = Matrix::zeros(
            m.ring(),
            self.target.module().total_rank(),
            self.source.module().total_rank(),
        );
        for (k, v) in range.zip(coords) {
            let (c, t) = self.entries[k];
            mat[(t, c)] = v.clone();
        }
        GradedMap::new(self.source.clone(), self.target.clone(), degree, mat)
            .expect("coordinates respect the degree")
    }

    pub fn coordinates(&self, f: &GradedMap) -> Result<Vec<Scalar>> {
        let v = self.to_vector(f)?;
        Ok(self
            .complex
            .module()
            .basis(f.degree())
            .map(|k| v[k].clone())
            .collect())
    }
}

pub fn hom_complex(c: &DgModule, d: &DgModule) -> Result<HomComplex> {
    if c.ring() != d.ring() {
        return Err(Error::RingMismatch(c.ring(), d.ring()));
    }
    let ring = c.ring();
    let (cm, dm) = (c.module(), d.module());
    let mut entries: Vec<(i64, usize, usize)> = Vec::new();
    for src in 0..cm.total_rank() {
        for tgt in 0..dm.total_rank() {
            entries.push((dm.degree_of(tgt) - cm.degree_of(src), src, tgt));
        }
    }
    entries.sort();
    let module = GradedModule::new(ring, entries.iter().map(|&(i, _, _)| (i, 1)));
    let index: HashMap<(usize, usize), usize> = entries
        .iter()
        .enumerate()
        .map(|(k, &(_, s, t))| ((s, t), k))
        .collect();
    let dc = c.differential_matrix();
    let dd = d.differential_matrix();
    let n = entries.len();
    let mut full = Matrix::zeros(ring, n, n);
    for (col, &(i, src, tgt)) in entries.iter().enumerate() {
        // d_D o E_{t,c}
        for t2 in 0..dm.total_rank() {
            let a = &dd[(t2, tgt)];
            if !a.is_zero() {
                let row = index[&(src, t2)];
                full[(row, col)] = &full[(row, col)] + a;
            }
        }
        // -(-1)^i E_{t,c} o d_C
        let sign = ring.sign(i + 1);
        for c2 in 0..cm.total_rank() {
            let a = &dc[(src, c2)];
            if !a.is_zero() {
                let row = index[&(c2, tgt)];
                full[(row, col)] = &full[(row, col)] + &(a * &sign);
            }
        }
    }
    Ok(HomComplex {
        complex: dg_from_full_matrix(module, &full)?,
        entries: entries.iter().map(|&(_, s, t)| (s, t)).collect(),
        source: c.clone(),
        target: d.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::RingSpec;

    fn q() -> RingSpec {
        RingSpec::Rationals
    }

    /// e1 (degree 1) -> e0 (degree 0), d e1 = e0
    fn interval() -> DgModule {
        DgModule::new(
            GradedModule::new(q(), [(0, 1), (1, 1)]),
            [(1, Matrix::from_i64(q(), &[&[1]]))],
        )
        .unwrap()
    }

    fn point() -> DgModule {
        DgModule::with_zero_differential(GradedModule::new(q(), [(0, 1)]))
    }

    #[test]
    fn tensor_of_points() {
        let t = tensor(&point(), &point()).unwrap();
        assert_eq!(t.complex.module().total_rank(), 1);
        assert_eq!(t.complex.module().dim(0), 1);
        assert!(t.complex.has_zero_differential());
    }

    #[test]
    fn tensor_sign() {
        let c = interval();
        let t = tensor(&c, &c).unwrap();
        let idx = t.index_of();
        let d = t.complex.differential_matrix();
        // basis: e0 = 0, e1 = 1
        let e11 = idx[&vec![1, 1]];
        assert_eq!(d[(idx[&vec![0, 1]], e11)], q().one());
        assert_eq!(d[(idx[&vec![1, 0]], e11)], q().from_i64(-1));
        assert!(d.mul(&d).is_zero());
    }

    #[test]
    fn suspension_shifts_and_negates() {
        let p = point();
        let sp = suspend(&p);
        assert_eq!(sp.module().dim(1), 1);
        let c = interval();
        let ssc = suspend(&suspend(&c));
        assert_eq!(ssc.d_block(3), c.d_block(1));
        assert_eq!(suspend(&c).d_block(2), c.d_block(1).neg());
    }

    #[test]
    fn hom_ranks_of_interval() {
        let c = interval();
        let h = hom_complex(&c, &c).unwrap();
        let m = h.complex.module();
        assert_eq!((m.dim(-1), m.dim(0), m.dim(1)), (1, 2, 1));
        h.complex.check_square_zero().unwrap();
    }

    #[test]
    fn hom_of_points() {
        let h = hom_complex(&point(), &point()).unwrap();
        assert_eq!(h.complex.module().total_rank(), 1);
        assert_eq!(h.complex.module().dim(0), 1);
        assert!(h.complex.has_zero_differential());
    }

    #[test]
    fn hom_differential_agrees_with_complex() {
        let c = interval().direct_sum(&point()).unwrap();
        let h = hom_complex(&c, &c).unwrap();
        let dh = h.complex.differential_matrix();
        for k in 0..h.entries.len() {
            let deg = h.complex.module().degree_of(k);
            let mut coords = vec![q().zero(); h.complex.module().dim(deg)];
            coords[k - h.complex.module().basis(deg).start] = q().one();
            let f = h.from_coordinates(deg, &coords);
            let df = f.hom_differential();
            let mut e = vec![q().zero(); h.entries.len()];
            e[k] = q().one();
            assert_eq!(h.to_vector(&df).unwrap(), dh.mul_vec(&e));
        }
    }

    #[test]
    fn chain_maps_are_cycles() {
        let c = interval().direct_sum(&point()).unwrap();
        let id = GradedMap::identity(&c);
        assert!(id.is_chain_map());
        // kills e0 only: not a chain map
        let mut m = Matrix::identity(q(), 3);
        m[(0, 0)] = q().zero();
        let f = GradedMap::new(c.clone(), c, 0, m).unwrap();
        assert!(!f.is_chain_map());
    }

    #[test]
    fn koszul_constant_of_suspensions() {
        let c = interval().direct_sum(&point()).unwrap();
        let s = suspension_map(&c);
        let si = desuspension_map(&c);
        let mut s_pow = s.clone();
        let mut si_pow = si.clone();
        for n in 1..=5usize {
            if n > 1 {
                s_pow = koszul_tensor_of_maps(&s_pow, &s).unwrap();
                si_pow = koszul_tensor_of_maps(&si_pow, &si).unwrap();
            }
            let comp = si_pow.compose(&s_pow).unwrap();
            let expected = ((n * (n - 1) / 2) % 2) as i64;
            let id = Matrix::identity(q(), comp.matrix().rows()).scale(&q().sign(expected));
            assert_eq!(comp.matrix(), &id, "n = {n}");
        }
    }

    #[test]
    fn interchange_law() {
        let c = interval().direct_sum(&point()).unwrap();
        let ring = q();
        // odd maps of degree 1 and -1, an even map of degree 0
        let mut up = Matrix::zeros(ring, 3, 3);
        up[(2, 0)] = ring.from_i64(2);
        up[(2, 1)] = ring.from_i64(3);
        let up = GradedMap::new(c.clone(), c.clone(), 1, up).unwrap();
        let mut down = Matrix::zeros(ring, 3, 3);
        down[(0, 2)] = ring.from_i64(5);
        down[(1, 2)] = ring.from_i64(-1);
        let down = GradedMap::new(c.clone(), c.clone(), -1, down).unwrap();
        let mut flat = Matrix::identity(ring, 3);
        flat[(1, 0)] = ring.from_i64(7);
        let flat = GradedMap::new(c.clone(), c.clone(), 0, flat).unwrap();
        let maps = [up, down, flat];
        for f in &maps {
            for g in &maps {
                for f2 in &maps {
                    for g2 in &maps {
                        let lhs = koszul_tensor_of_maps(f, g)
                            .unwrap()
                            .compose(&koszul_tensor_of_maps(f2, g2).unwrap())
                            .unwrap();
                        let rhs = koszul_tensor_of_maps(
                            &f.compose(f2).unwrap(),
                            &g.compose(g2).unwrap(),
                        )
                        .unwrap()
                        .scale(&ring.sign(g.degree() * f2.degree()));
                        assert_eq!(lhs.matrix(), rhs.matrix());
                    }
                }
            }
        }
    }

    #[test]
    fn leibniz_rule() {
        let c = interval().direct_sum(&point()).unwrap();
        let ring = q();
        let mut a = Matrix::zeros(ring, 3, 3);
        a[(2, 0)] = ring.from_i64(2);
        a[(2, 1)] = ring.one();
        let f = GradedMap::new(c.clone(), c.clone(), 1, a).unwrap();
        let mut b = Matrix::identity(ring, 3);
        b[(0, 1)] = ring.from_i64(3);
        let g = GradedMap::new(c.clone(), c.clone(), 0, b).unwrap();
        for (x, y) in [(&f, &g), (&g, &f), (&f, &f), (&g, &g)] {
            let lhs = x.compose(y).unwrap().hom_differential();
            let rhs = x
                .hom_differential()
                .compose(y)
                .unwrap()
                .add(&x.compose(&y.hom_differential()).unwrap().scale(&ring.sign(x.degree())))
                .unwrap();
            assert_eq!(lhs.matrix(), rhs.matrix());
        }
    }
}
