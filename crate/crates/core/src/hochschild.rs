//! The bigraded Hochschild cochain complex `End^n_i(B)` of an associative
//! graded algebra with differential `d = [mu, -]`, and its cohomology.
//!
//! `d` raises arity by one and preserves the internal degree. Cochains of
//! arity 0 are not part of the complex.

use std::sync::Arc;

use num_bigint::BigInt;

use crate::ainfty::{ArStructure, GradedAlgebra};
use crate::complexes::{DgModule, GradedModule, MultiMap, OperatorMatrix};
use crate::error::{Error, Result};
use crate::homology::{check_assumption_a, homology};
use crate::prelie::{bracket, prelie_differential};

pub const DEFAULT_MAX_ARITY: usize = 8;

#[derive(Debug, Clone)]
pub struct HochschildComplex {
    algebra: GradedAlgebra,
    max_arity: usize,
}

/// `HH^n_i` at one bidegree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyData {
    pub n: usize,
    pub i: i64,
    /// Rank of `End^n_i`.
    pub cochains: usize,
    pub cocycles: usize,
    pub coboundaries: usize,
    /// Rank of the free part of `HH^n_i`.
    pub rank: usize,
    /// Invariant factors of the torsion part (integers only).
    pub torsion: Vec<BigInt>,
    /// Cocycles whose classes form a basis of the free part. Empty when the
    /// complex does not split around this bidegree (integers with torsion).
    pub representatives: Vec<MultiMap>,
}

impl HochschildComplex {
    pub fn new(algebra: GradedAlgebra) -> Self {
        Self::with_max_arity(algebra, DEFAULT_MAX_ARITY)
    }

    pub fn with_max_arity(algebra: GradedAlgebra, max_arity: usize) -> Self {
        HochschildComplex { algebra, max_arity }
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        self.algebra.module()
    }

    pub fn max_arity(&self) -> usize {
        self.max_arity
    }

    fn check_bounds(&self, n: usize) -> Result<()> {
        if n == 0 || n > self.max_arity {
            return Err(Error::ArityOutOfRange { place: n, arity: self.max_arity });
        }
        Ok(())
    }

    /// `d f = [mu, f] = mu o f - (-1)^{|f|} f o mu`.
    pub fn d(&self, f: &MultiMap) -> Result<MultiMap> {
        if **f.module() != **self.module() {
            return Err(Error::ModuleMismatch);
        }
        bracket(self.algebra.product(), f)
    }

    /// The matrix of `d: End^n_i -> End^{n+1}_i`.
    pub fn d_matrix(&self, n: usize, i: i64) -> Result<OperatorMatrix> {
        OperatorMatrix::build(self.module(), (n, i), (n + 1, i), |f| self.d(f))
    }

    /// The three-term piece `End^{n-1}_i -> End^n_i -> End^{n+1}_i` as a
    /// dgmodule, arity `k` placed in degree `-k`.
    fn window(&self, n: usize, i: i64) -> Result<(DgModule, OperatorMatrix)> {
        let ring = self.module().ring();
        let here = self.d_matrix(n, i)?;
        let below = if n > 1 { Some(self.d_matrix(n - 1, i)?) } else { None };
        let mut dims = vec![(-(n as i64), here.source.len()), (-(n as i64) - 1, here.target.len())];
        let mut blocks = vec![(-(n as i64), here.matrix.clone())];
        if let Some(b) = &below {
            dims.push((-(n as i64) + 1, b.source.len()));
            blocks.push((-(n as i64) + 1, b.matrix.clone()));
        }
        let module = GradedModule::new(ring, dims);
        let complex = DgModule::new(module, blocks).map_err(|_| Error::NotAssociative)?;
        Ok((complex, here))
    }

    /// `HH^n_i` by kernel modulo image at `(n, i)`.
    pub fn hh(&self, n: usize, i: i64) -> Result<CohomologyData> {
        self.check_bounds(n)?;
        let (complex, here) = self.window(n, i)?;
        let deg = -(n as i64);
        let data = homology(&complex);
        let level = data.degree(deg).cloned();
        let (cocycles, coboundaries, rank, torsion) = match level {
            Some(l) => (l.cycles, l.boundaries, l.homology, l.torsion),
            None => (0, 0, 0, Vec::new()),
        };
        let representatives = match check_assumption_a(&complex) {
            Ok(split) => {
                let sigma = split.sigma();
                let h = split.homology_module();
                let cols = h.basis(deg);
                let rows = complex.module().basis(deg);
                cols.map(|c| {
                    let coords: Vec<_> = rows.clone().map(|r| sigma[(r, c)].clone()).collect();
                    here.source_element(self.module(), &coords)
                })
                .collect()
            }
            Err(_) => Vec::new(),
        };
        Ok(CohomologyData {
            n,
            i,
            cochains: here.source.len(),
            cocycles,
            coboundaries,
            rank,
            torsion,
            representatives,
        })
    }

    /// For a cocycle `c`, some `u` with `du = c` (or `None` if the class of
    /// `c` is nonzero).
    pub fn is_coboundary(&self, c: &MultiMap) -> Result<Option<MultiMap>> {
        if !self.d(c)?.is_zero() {
            return Err(Error::NotACocycle);
        }
        let (n, i) = (c.arity(), c.degree());
        if n <= 1 {
            return Ok(c.is_zero().then(|| MultiMap::zero(self.module().clone(), 1, i)));
        }
        let op = self.d_matrix(n - 1, i)?;
        Ok(op.solve(self.module(), c))
    }
}

/// `d f` for a single map, with `mu` checked for associativity.
pub fn hochschild_d(mu: &MultiMap, f: &MultiMap) -> Result<MultiMap> {
    HochschildComplex::new(GradedAlgebra::new(mu.clone())?).d(f)
}

/// Independent rank oracle: `HH^n_i` over a field from dense matrix ranks,
/// `dim End^n_i - rank d_n - rank d_{n-1}`.
pub fn hh_rank_by_matrix_ranks(hc: &HochschildComplex, n: usize, i: i64) -> Result<usize> {
    let here = hc.d_matrix(n, i)?;
    let below_rank = if n > 1 { hc.d_matrix(n - 1, i)?.matrix.rank() } else { 0 };
    Ok(here.source.len() - here.matrix.rank() - below_rank)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnticommuteReport {
    pub checked: usize,
    /// Indices of the sampled maps where `dd + dd` fails.
    pub failures: Vec<usize>,
}

impl AnticommuteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks `partial d(f) + d partial(f) = 0` with `d = [m_2, -]` on `End(A)`
/// and `partial = [m_1, -]`, for an A_2-structure (no associativity needed).
pub fn check_anticommute(s: &ArStructure, samples: &[MultiMap]) -> Result<AnticommuteReport> {
    if s.r() < 2 {
        return Err(Error::InvalidArStructure("an A_2-structure is required".into()));
    }
    let s = s.convert(crate::ainfty::Convention::Circle)?;
    if !s.truncated(2)?.check_ar()?.passed() {
        return Err(Error::InvalidArStructure("m_2 is not a chain map".into()));
    }
    let (m1, m2) = (s.map(1), s.map(2));
    let mut failures = Vec::new();
    for (idx, f) in samples.iter().enumerate() {
        let a = prelie_differential(&bracket(m2, f)?, m1)?;
        let b = bracket(m2, &prelie_differential(f, m1)?)?;
        if !a.checked_add(&b)?.is_zero() {
            failures.push(idx);
        }
    }
    Ok(AnticommuteReport { checked: samples.len(), failures })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ainfty::strict_structure;
    use crate::complexes::endo_basis;
    use crate::prelie::circle;
    use crate::generate::{a3_fixture, random_element, random_multimap, rng};
    use crate::scalars::RingSpec;

    fn rank_one(ring: RingSpec) -> HochschildComplex {
        let m = Arc::new(GradedModule::new(ring, [(0, 1)]));
        let mu = MultiMap::from_terms(m, 2, 0, [((0, vec![0, 0]), ring.one())]).unwrap();
        HochschildComplex::new(GradedAlgebra::new(mu).unwrap())
    }

    #[test]
    fn rank_one_alternates() {
        for ring in [RingSpec::Rationals, RingSpec::prime_field(2).unwrap(), RingSpec::Integers] {
            let hc = rank_one(ring);
            for n in 1..=7 {
                let e = MultiMap::from_terms(hc.module().clone(), n, 0, [((0, vec![0; n]), ring.one())]).unwrap();
                let de = hc.d(&e).unwrap();
                let expected = if n % 2 == 1 {
                    MultiMap::from_terms(hc.module().clone(), n + 1, 0, [((0, vec![0; n + 1]), ring.one())]).unwrap()
                } else {
                    MultiMap::zero(hc.module().clone(), n + 1, 0)
                };
                assert_eq!(de, expected, "n = {n}");
                let h = hc.hh(n, 0).unwrap();
                assert_eq!((h.rank, h.torsion.len()), (0, 0), "n = {n}");
            }
        }
    }

    #[test]
    fn differential_of_identity() {
        let mut r = rng(2);
        let m = Arc::new(GradedModule::new(RingSpec::Rationals, [(0, 2), (1, 1)]));
        let mu = MultiMap::from_terms(
            m.clone(),
            2,
            0,
            [((0, vec![0, 0]), RingSpec::Rationals.one()), ((2, vec![0, 2]), RingSpec::Rationals.one())],
        )
        .unwrap();
        let hc = HochschildComplex::new(GradedAlgebra::new(mu.clone()).unwrap());
        let id = MultiMap::identity(m.clone());
        // mu o id = 2 mu and id o mu = mu, so [mu, id] = mu
        assert_eq!(circle(&mu, &id).unwrap(), mu.scale(&RingSpec::Rationals.from_i64(2)));
        assert_eq!(circle(&id, &mu).unwrap(), mu);
        assert_eq!(hc.d(&id).unwrap(), mu);
        for _ in 0..20 {
            let f = random_element(&mut r, &m);
            assert!(hc.d(&hc.d(&f).unwrap()).unwrap().is_zero());
        }
    }

    #[test]
    fn d_squared_vanishes() {
        for ring in [RingSpec::Rationals, RingSpec::prime_field(2).unwrap()] {
            let mut r = rng(31);
            let mut done = 0;
            while done < 100 {
                let s = a3_fixture(&mut r, ring, 4).unwrap();
                let alg = s.homology_algebra().unwrap();
                let hc = HochschildComplex::new(alg);
                for _ in 0..10 {
                    let f = random_element(&mut r, hc.module());
                    assert!(hc.d(&hc.d(&f).unwrap()).unwrap().is_zero());
                    done += 1;
                }
            }
        }
    }

    #[test]
    fn zero_product_has_no_differential() {
        let q = RingSpec::Rationals;
        let m = Arc::new(GradedModule::new(q, [(0, 1), (1, 1)]));
        let hc = HochschildComplex::new(GradedAlgebra::new(MultiMap::zero(m.clone(), 2, 0)).unwrap());
        for n in 1..=3 {
            for i in -2..=2 {
                let h = hc.hh(n, i).unwrap();
                assert_eq!(h.rank, endo_basis(&m, n, i).len());
                assert_eq!(h.representatives.len(), h.rank);
            }
        }
        let c = MultiMap::from_terms(m, 2, 0, [((1, vec![0, 1]), q.one())]).unwrap();
        assert_eq!(hc.is_coboundary(&c).unwrap(), None);
    }

    #[test]
    fn coboundaries_are_found() {
        for ring in [RingSpec::Rationals, RingSpec::prime_field(3).unwrap(), RingSpec::Integers] {
            let mut r = rng(12);
            for _ in 0..10 {
                let s = a3_fixture(&mut r, ring, 4).unwrap();
                let hc = HochschildComplex::new(s.homology_algebra().unwrap());
                let zero = MultiMap::zero(hc.module().clone(), 2, 0);
                assert!(hc.is_coboundary(&zero).unwrap().unwrap().is_zero());
                let v = random_multimap(&mut r, hc.module(), 2, 0, 3);
                let c = hc.d(&v).unwrap();
                let u = hc.is_coboundary(&c).unwrap().unwrap();
                assert_eq!(hc.d(&u).unwrap(), c);
                if !c.is_zero() {
                    let bad = c.checked_add(&MultiMap::from_terms(hc.module().clone(), 3, 0, [(c.terms().next().unwrap().0.clone(), ring.one())]).unwrap()).unwrap();
                    if !hc.d(&bad).unwrap().is_zero() {
                        assert!(matches!(hc.is_coboundary(&bad), Err(Error::NotACocycle)));
                    }
                }
            }
        }
    }

    #[test]
    fn ranks_match_oracle() {
        for ring in [RingSpec::Rationals, RingSpec::prime_field(2).unwrap()] {
            let mut r = rng(40);
            for _ in 0..6 {
                let s = a3_fixture(&mut r, ring, 4).unwrap();
                let hc = HochschildComplex::new(s.homology_algebra().unwrap());
                for n in 1..=4 {
                    for i in -2..=2 {
                        let h = hc.hh(n, i).unwrap();
                        assert_eq!(h.rank, hh_rank_by_matrix_ranks(&hc, n, i).unwrap());
                        assert_eq!(h.representatives.len(), h.rank);
                        for rep in &h.representatives {
                            assert!(hc.d(rep).unwrap().is_zero());
                            assert!(hc.is_coboundary(rep).unwrap().is_none());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn anticommutation() {
        for ring in [RingSpec::Rationals, RingSpec::prime_field(2).unwrap()] {
            let mut r = rng(6);
            let s = a3_fixture(&mut r, ring, 5).unwrap();
            let samples: Vec<_> = (0..100).map(|_| random_element(&mut r, s.complex().module_arc())).collect();
            assert!(check_anticommute(&s, &samples).unwrap().passed());
        }
        // zero differential
        let q = RingSpec::Rationals;
        let c = DgModule::with_zero_differential(GradedModule::new(q, [(0, 2)]));
        let s = strict_structure(c.clone(), MultiMap::zero(c.module_arc().clone(), 2, 0), 2).unwrap();
        let f = MultiMap::identity(c.module_arc().clone());
        assert!(check_anticommute(&s, &[f]).unwrap().passed());
    }

    #[test]
    fn non_associative_rejected() {
        let q = RingSpec::Rationals;
        let m = Arc::new(GradedModule::new(q, [(0, 2)]));
        let mu = MultiMap::from_terms(m.clone(), 2, 0, [((1, vec![0, 0]), q.one()), ((0, vec![1, 1]), q.one())]).unwrap();
        assert!(matches!(hochschild_d(&mu, &MultiMap::identity(m)), Err(Error::NotAssociative)));
    }
}
