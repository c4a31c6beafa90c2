//! Seeded random data for property checks and fixture searches.
//!
//! Everything is driven by a `ChaCha8Rng`, so a seed determines the output
//! on every platform.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::ainfty::{ArStructure, Convention, GradedAlgebra};
use crate::complexes::{endo_basis, hom_differential, DgModule, GradedModule, MultiMap, OperatorMatrix};
use crate::error::{Error, Result};
use crate::hochschild::HochschildComplex;
use crate::homology::MultiHom;
use crate::obstruction::{exhaustive_non_membership, extend_to_ainfty, Extension};
use crate::matrix::Matrix;
use crate::prelie::circle;
use crate::scalars::{RingSpec, Scalar};

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A nonzero scalar with small numerator and denominator.
pub fn random_scalar(rng: &mut Rng64, ring: RingSpec) -> Scalar {
    match ring {
        RingSpec::PrimeField(p) => ring.from_i64(rng.gen_range(1..p) as i64),
        RingSpec::Integers => {
            let v = rng.gen_range(1..=3i64);
            ring.from_i64(if rng.gen_bool(0.5) { v } else { -v })
        }
        RingSpec::Rationals => {
            let mut v = rng.gen_range(-3..=3i64);
            if v == 0 {
                v = 1;
            }
            let d = rng.gen_range(1..=2i64);
            ring.parse_scalar(&format!("{v}/{d}")).expect("valid fraction")
        }
    }
}

/// A graded module of total rank `1..=max_rank` with degrees in `-1..=1`.
pub fn random_module(rng: &mut Rng64, ring: RingSpec, max_rank: usize) -> GradedModule {
    let rank = rng.gen_range(1..=max_rank);
    GradedModule::new(ring, (0..rank).map(|_| (rng.gen_range(-1..=1i64), 1)))
}

/// A map in `End^arity_degree` with at most `max_terms` nonzero terms.
pub fn random_multimap(
    rng: &mut Rng64,
    module: &Arc<GradedModule>,
    arity: usize,
    degree: i64,
    max_terms: usize,
) -> MultiMap {
    let basis = endo_basis(module, arity, degree);
    let ring = module.ring();
    let count = if basis.is_empty() {
        0
    } else {
        rng.gen_range(1..=max_terms.min(basis.len()))
    };
    let chosen: Vec<_> = basis.choose_multiple(rng, count).cloned().collect();
    let terms = chosen.into_iter().map(|k| (k, random_scalar(rng, ring)));
    MultiMap::from_terms(module.clone(), arity, degree, terms).expect("basis terms")
}

/// A sparse element with arity at most 3, degree in `-2..=2` and at most
/// four terms. Bidegrees with an empty basis are avoided when possible.
pub fn random_element(rng: &mut Rng64, module: &Arc<GradedModule>) -> MultiMap {
    random_element_where(rng, module, |_, _| true)
}

/// Like [`random_element`] but restricted to bidegrees accepted by `keep`
/// (called with arity and degree).
pub fn random_element_where(
    rng: &mut Rng64,
    module: &Arc<GradedModule>,
    keep: impl Fn(usize, i64) -> bool,
) -> MultiMap {
    let mut fallback = None;
    for _ in 0..64 {
        let arity = rng.gen_range(1..=3usize);
        let degree = rng.gen_range(-2..=2i64);
        if !keep(arity, degree) {
            continue;
        }
        let f = random_multimap(rng, module, arity, degree, 4);
        if !f.is_zero() {
            return f;
        }
        fallback.get_or_insert(f);
    }
    fallback.unwrap_or_else(|| {
        // every accepted bidegree keeps weight parity when the degree moves by 2
        let (arity, degree) = (1..=3usize)
            .flat_map(|a| (-2..=2i64).map(move |d| (a, d)))
            .find(|&(a, d)| keep(a, d))
            .expect("some bidegree is accepted");
        MultiMap::zero(module.clone(), arity, degree)
    })
}

/// A unimodular `n x n` matrix `L U` with unit triangular factors and
/// entries in `{-1, 0, 1}`.
pub fn random_unimodular(rng: &mut Rng64, ring: RingSpec, n: usize) -> Matrix {
    let mut l = Matrix::identity(ring, n);
    let mut u = Matrix::identity(ring, n);
    for i in 0..n {
        for j in 0..i {
            l[(i, j)] = ring.from_i64(rng.gen_range(-1..=1));
            u[(j, i)] = ring.from_i64(rng.gen_range(-1..=1));
        }
    }
    l.mul(&u)
}

/// A complex with degrees in `-1..=1` satisfying assumption (A) over any
/// ring; see [`random_split_complex_in`].
pub fn random_split_complex(rng: &mut Rng64, ring: RingSpec, max_rank: usize) -> DgModule {
    random_split_complex_in(rng, ring, max_rank, -1, 1)
}

/// A complex with degrees in `lo..=hi` satisfying assumption (A) over any
/// ring: a sum of homology classes and contractible pairs `x -> y`, in a
/// random unimodular basis per degree. Total rank is between 1 and
/// `max_rank`.
pub fn random_split_complex_in(rng: &mut Rng64, ring: RingSpec, max_rank: usize, lo: i64, hi: i64) -> DgModule {
    assert!(lo <= hi, "empty degree window");
    let width = (hi - lo + 1) as usize;
    let total = rng.gen_range(1..=max_rank.max(1));
    let mut homology = vec![0usize; width];
    // pairs[k] joins degree lo + k + 1 to degree lo + k
    let mut pairs = vec![0usize; width - 1];
    let mut used = 0;
    while used < total {
        if width > 1 && used + 2 <= total && rng.gen_bool(0.5) {
            pairs[rng.gen_range(0..width - 1)] += 1;
            used += 2;
        } else {
            homology[rng.gen_range(0..width)] += 1;
            used += 1;
        }
    }
    // each degree is laid out as [homology | targets of pairs below | sources of pairs above]
    let dims: Vec<usize> = (0..width)
        .map(|k| homology[k] + if k + 1 < width { pairs[k] } else { 0 } + if k > 0 { pairs[k - 1] } else { 0 })
        .collect();
    let module = GradedModule::new(ring, (0..width).map(|k| (lo + k as i64, dims[k])));
    let changes: Vec<Matrix> = dims.iter().map(|&n| random_unimodular(rng, ring, n)).collect();
    let mut blocks = Vec::new();
    for (k, &p) in pairs.iter().enumerate() {
        let mut d = Matrix::zeros(ring, dims[k], dims[k + 1]);
        let target_offset = homology[k];
        let source_offset = homology[k + 1] + if k + 2 < width { pairs[k + 1] } else { 0 };
        for t in 0..p {
            d[(target_offset + t, source_offset + t)] = ring.one();
        }
        let inv = changes[k + 1].inverse().expect("unimodular");
        blocks.push((lo + k as i64 + 1, changes[k].mul(&d).mul(&inv)));
    }
    DgModule::new(module, blocks).expect("d squares to zero")
}

/// A random associative product on `module`, or zero if none is found in a
/// few hundred sparse attempts.
pub fn random_associative_product(rng: &mut Rng64, module: &Arc<GradedModule>) -> GradedAlgebra {
    for _ in 0..300 {
        let mu = random_multimap(rng, module, 2, 0, 3);
        if mu.is_zero() {
            continue;
        }
        if let Ok(alg) = GradedAlgebra::new(mu) {
            return alg;
        }
    }
    GradedAlgebra::new(MultiMap::zero(module.clone(), 2, 0)).expect("zero product")
}

/// Some `m_3` with `dm_3 = -(m_2 o m_2)`, plus a random cycle.
pub fn solve_for_m3(rng: &mut Rng64, mh: &MultiHom, m2: &MultiMap) -> Result<MultiMap> {
    let module = mh.module().clone();
    let m1 = mh.differential().clone();
    let op = OperatorMatrix::build(&module, (3, 1), (3, 0), |f| hom_differential(f, &m1))?;
    let rhs = circle(m2, m2)?.neg();
    let base = op
        .solve(&module, &rhs)
        .ok_or_else(|| Error::Internal("m_2 o m_2 is not a boundary".into()))?;
    let u = random_multimap(rng, mh.homology_module(), 3, 1, 2);
    let w = random_multimap(rng, &module, 3, 2, 2);
    base.checked_add(&mh.lift(&u)?)?.checked_add(&hom_differential(&w, &m1)?)
}

/// An A_3-structure in the circle convention on a random split complex:
/// `m_2` lifts a random associative product on homology and is perturbed
/// by a boundary, `m_3` solves relation 3 exactly.
pub fn a3_fixture(rng: &mut Rng64, ring: RingSpec, max_rank: usize) -> Result<ArStructure> {
    let complex = random_split_complex(rng, ring, max_rank);
    let mh = MultiHom::new(&complex)?;
    let alg = random_associative_product(rng, mh.homology_module());
    let v = random_multimap(rng, complex.module_arc(), 2, 1, 2);
    let m2 = mh
        .lift(alg.product())?
        .checked_add(&hom_differential(&v, mh.differential())?)?;
    let m3 = solve_for_m3(rng, &mh, &m2)?;
    ArStructure::from_higher(complex, Convention::Circle, vec![m2, m3])
}

/// An A_3-structure over `F_2` whose extension stops at a nonzero class,
/// with the class certified non-exact by exhaustive enumeration.
#[derive(Debug, Clone)]
pub struct BlockingFixture {
    pub structure: ArStructure,
    pub blocked_at: usize,
    pub certificate: MultiMap,
    pub seed: u64,
    pub attempts: usize,
}

/// Random search over `F_2` complexes of total rank at most 4 with degrees
/// in `-2..=2`. A candidate is kept only if [`extend_to_ainfty`] up to
/// arity `max_arity` is blocked and the class is shown not to be a
/// coboundary by enumerating the whole image of `d`.
pub fn search_blocking_fixture(seed: u64, max_attempts: usize, max_arity: usize) -> Result<Option<BlockingFixture>> {
    let f2 = RingSpec::prime_field(2)?;
    let mut r = rng(seed);
    for attempt in 1..=max_attempts {
        let complex = random_split_complex_in(&mut r, f2, 4, -2, 2);
        let mh = MultiHom::new(&complex)?;
        let alg = random_associative_product(&mut r, mh.homology_module());
        if alg.product().is_zero() {
            continue;
        }
        let hc = HochschildComplex::new(alg.clone());
        let hh = hc.hh(3, 1)?;
        if hh.rank == 0 {
            continue;
        }
        let v = random_multimap(&mut r, complex.module_arc(), 2, 1, 2);
        let m2 = mh.lift(alg.product())?.checked_add(&hom_differential(&v, mh.differential())?)?;
        let mut m3 = solve_for_m3(&mut r, &mh, &m2)?;
        for rep in &hh.representatives {
            if r.gen_bool(0.7) {
                m3 = m3.checked_add(&mh.lift(rep)?)?;
            }
        }
        let s = ArStructure::from_higher(complex, Convention::Circle, vec![m2, m3])?;
        if let Extension::Blocked { report, reached } = extend_to_ainfty(&s, max_arity)? {
            let hc = HochschildComplex::new(reached.homology_algebra()?);
            if exhaustive_non_membership(&hc, &report.class)? == Some(true) {
                return Ok(Some(BlockingFixture {
                    structure: s,
                    blocked_at: report.r,
                    certificate: report.class.clone(),
                    seed,
                    attempts: attempt,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_reproducible() {
        let q = RingSpec::Rationals;
        let m = Arc::new(GradedModule::new(q, [(0, 2), (1, 1)]));
        let a: Vec<MultiMap> = {
            let mut r = rng(7);
            (0..5).map(|_| random_element(&mut r, &m)).collect()
        };
        let b: Vec<MultiMap> = {
            let mut r = rng(7);
            (0..5).map(|_| random_element(&mut r, &m)).collect()
        };
        assert_eq!(a, b);
    }

    #[test]
    fn split_complexes_split() {
        for ring in [RingSpec::Rationals, RingSpec::Integers, RingSpec::prime_field(2).unwrap()] {
            let mut r = rng(3);
            for _ in 0..20 {
                let c = random_split_complex(&mut r, ring, 6);
                assert!(c.module().total_rank() <= 6);
                assert!(crate::homology::satisfies_assumption_a(&c));
            }
        }
    }

    #[test]
    fn a3_fixtures_are_valid() {
        for ring in [RingSpec::Rationals, RingSpec::Integers, RingSpec::prime_field(2).unwrap()] {
            let mut r = rng(17);
            for _ in 0..5 {
                let s = a3_fixture(&mut r, ring, 5).unwrap();
                assert_eq!(s.r(), 3);
                assert!(s.check_ar().unwrap().passed());
            }
        }
    }

    #[test]
    fn odd_weight_filter() {
        let f2 = RingSpec::prime_field(2).unwrap();
        let m = Arc::new(GradedModule::new(f2, [(0, 1), (1, 1)]));
        let mut r = rng(1);
        for _ in 0..20 {
            let g = random_element_where(&mut r, &m, |a, d| (a as i64 + d - 1).rem_euclid(2) == 1);
            assert_eq!(g.weight().rem_euclid(2), 1);
        }
    }
}
