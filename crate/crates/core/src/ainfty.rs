//! A_r- and A_infinity-structures on a dgmodule.
//!
//! Three sign conventions are supported. `Circle` is the internal one:
//! maps `m_i` of degree `i - 2` on `A` with `sum_{i+j=n+1} m_i o m_j = 0`.
//! `Suspended` stores `d_i = Theta^{-1}(m_i)` of degree -1 on `sA` with
//! `sum d_i * d_j = 0`. `Stasheff` stores `m~_i = (-1)^{i(i-1)/2} m_i`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::complexes::{differential_multimap, DgModule, GradedModule, MultiMap};
use crate::error::{Error, Result};
use crate::homology::{check_assumption_a, MultiHom};
use crate::prelie::{circle, star, theta, theta_inv};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Convention {
    Circle,
    Suspended,
    Stasheff,
}

impl Convention {
    pub const ALL: [Convention; 3] = [Convention::Circle, Convention::Suspended, Convention::Stasheff];

    pub fn name(self) -> &'static str {
        match self {
            Convention::Circle => "circle",
            Convention::Suspended => "suspended",
            Convention::Stasheff => "stasheff",
        }
    }
}

impl fmt::Display for Convention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Convention {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Convention::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| Error::InvalidArStructure(format!("unknown convention `{s}`")))
    }
}

fn stasheff_exponent(i: usize) -> i64 {
    (i * (i - 1) / 2) as i64
}

/// An associative graded algebra: `mu` of arity 2 and degree 0 with
/// `mu o mu = 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    product: MultiMap,
}

impl GradedAlgebra {
    pub fn new(product: MultiMap) -> Result<Self> {
        if product.arity() != 2 || product.degree() != 0 {
            return Err(Error::DegreeViolation(format!(
                "a product has arity 2 and degree 0, got arity {} and degree {}",
                product.arity(),
                product.degree()
            )));
        }
        if !circle(&product, &product)?.is_zero() {
            return Err(Error::NotAssociative);
        }
        Ok(GradedAlgebra { product })
    }

    pub fn product(&self) -> &MultiMap {
        &self.product
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        self.product.module()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationDefect {
    pub n: usize,
    pub value: MultiMap,
}

impl RelationDefect {
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArReport {
    pub r: usize,
    pub convention: Convention,
    /// Whether relation `n` holds, for `n = 1..=r`.
    pub relations: Vec<bool>,
    pub first_failure: Option<RelationDefect>,
}

impl ArReport {
    pub fn passed(&self) -> bool {
        self.first_failure.is_none()
    }
}

/// Maps `m_1, ..., m_r` on a dgmodule `A` in one of the conventions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ArStructure {
    complex: DgModule,
    convention: Convention,
    maps: Vec<MultiMap>,
}

impl ArStructure {
    /// Validates arities, degrees and modules, and that `m_1` is the
    /// differential of `complex` (transported to the convention). The
    /// relations themselves are checked by [`ArStructure::check_ar`].
    pub fn new(complex: DgModule, convention: Convention, maps: Vec<MultiMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::InvalidArStructure("at least m_1 is required".into()));
        }
        let suspended = Arc::new(complex.module().suspend());
        for (idx, m) in maps.iter().enumerate() {
            let i = idx + 1;
            let (module, degree) = match convention {
                Convention::Suspended => (&suspended, -1),
                _ => (complex.module_arc(), i as i64 - 2),
            };
            if m.arity() != i {
                return Err(Error::InvalidArStructure(format!("m_{i} has arity {}", m.arity())));
            }
            if m.degree() != degree {
                return Err(Error::InvalidArStructure(format!(
                    "m_{i} has degree {}, expected {degree}",
                    m.degree()
                )));
            }
            if **m.module() != **module {
                return Err(Error::InvalidArStructure(format!("m_{i} lives on another module")));
            }
        }
        let expected = Self::first_map(&complex, convention)?;
        if maps[0] != expected {
            return Err(Error::InvalidArStructure("m_1 differs from the differential".into()));
        }
        Ok(ArStructure { complex, convention, maps })
    }

    /// Builds the structure from `m_2, ..., m_r`, taking `m_1` from the
    /// differential.
    pub fn from_higher(complex: DgModule, convention: Convention, higher: Vec<MultiMap>) -> Result<Self> {
        let mut maps = vec![Self::first_map(&complex, convention)?];
        maps.extend(higher);
        Self::new(complex, convention, maps)
    }

    fn first_map(complex: &DgModule, convention: Convention) -> Result<MultiMap> {
        let d = differential_multimap(complex);
        match convention {
            Convention::Suspended => theta_inv(&d),
            _ => Ok(d),
        }
    }

    pub fn complex(&self) -> &DgModule {
        &self.complex
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn r(&self) -> usize {
        self.maps.len()
    }

    /// `m_i` for `1 <= i <= r`.
    pub fn map(&self, i: usize) -> &MultiMap {
        &self.maps[i - 1]
    }

    pub fn maps(&self) -> &[MultiMap] {
        &self.maps
    }

    /// The module the maps act on: `A`, or `sA` for the suspended convention.
    pub fn carrier(&self) -> Arc<GradedModule> {
        match self.convention {
            Convention::Suspended => Arc::new(self.complex.module().suspend()),
            _ => self.complex.module_arc().clone(),
        }
    }

    /// Defect of relation `n`, computed from the `m_i` with `i <= min(n, r)`.
    /// It has arity `n` and degree `n - 3` (degree -2 on `sA` for the
    /// suspended convention).
    pub fn relation_defect(&self, n: usize) -> Result<RelationDefect> {
        if n == 0 {
            return Err(Error::InvalidArStructure("relations are indexed from 1".into()));
        }
        let degree = match self.convention {
            Convention::Suspended => -2,
            _ => n as i64 - 3,
        };
        let mut value = MultiMap::zero(self.carrier(), n, degree);
        for i in 1..=n.min(self.r()) {
            let j = n + 1 - i;
            if j > self.r() {
                continue;
            }
            let (mi, mj) = (self.map(i), self.map(j));
            let term = match self.convention {
                Convention::Circle => circle(mi, mj)?,
                Convention::Suspended => star(mi, mj)?,
                Convention::Stasheff => {
                    let mut acc = MultiMap::zero(self.carrier(), n, degree);
                    for k in 1..=i {
                        let e = (k * (j - 1)) as i64;
                        acc = acc.checked_add(&mi.compose_at(k, mj)?.signed(e))?;
                    }
                    acc.signed((j * n) as i64)
                }
            };
            value = value.checked_add(&term)?;
        }
        Ok(RelationDefect { n, value })
    }

    pub fn check_ar(&self) -> Result<ArReport> {
        self.check_up_to(self.r())
    }

    /// Checks relations `1..=n`; relations past `r` read the missing maps as
    /// zero.
    pub fn check_up_to(&self, n: usize) -> Result<ArReport> {
        let mut relations = Vec::with_capacity(n);
        let mut first_failure = None;
        for k in 1..=n {
            let defect = self.relation_defect(k)?;
            relations.push(defect.is_zero());
            if first_failure.is_none() && !defect.is_zero() {
                first_failure = Some(defect);
            }
        }
        Ok(ArReport { r: n, convention: self.convention, relations, first_failure })
    }

    fn circle_maps(&self) -> Result<Vec<MultiMap>> {
        let v = self.complex.module_arc();
        self.maps
            .iter()
            .enumerate()
            .map(|(idx, m)| match self.convention {
                Convention::Circle => Ok(m.clone()),
                Convention::Stasheff => Ok(m.signed(stasheff_exponent(idx + 1))),
                Convention::Suspended => theta(m, v),
            })
            .collect()
    }

    /// The same structure in another convention. The relation defects of
    /// source and target vanish for the same `n`; a mismatch is reported as
    /// an internal error.
    pub fn convert(&self, target: Convention) -> Result<ArStructure> {
        let maps = self
            .circle_maps()?
            .into_iter()
            .enumerate()
            .map(|(idx, m)| match target {
                Convention::Circle => Ok(m),
                Convention::Stasheff => Ok(m.signed(stasheff_exponent(idx + 1))),
                Convention::Suspended => theta_inv(&m),
            })
            .collect::<Result<Vec<_>>>()?;
        let out = ArStructure::new(self.complex.clone(), target, maps)?;
        if self.check_ar()?.relations != out.check_ar()?.relations {
            return Err(Error::Internal(format!(
                "conversion {} -> {} changed which relations hold",
                self.convention, target
            )));
        }
        Ok(out)
    }

    /// The first `r` maps.
    pub fn truncated(&self, r: usize) -> Result<ArStructure> {
        if r == 0 || r > self.r() {
            return Err(Error::InvalidArStructure(format!("cannot truncate A_{} to A_{r}", self.r())));
        }
        Ok(ArStructure { maps: self.maps[..r].to_vec(), ..self.clone() })
    }

    /// Appends zero maps up to arity `r`.
    pub fn extended_by_zero(&self, r: usize) -> ArStructure {
        let mut out = self.clone();
        let module = self.carrier();
        for i in self.r() + 1..=r {
            let degree = match self.convention {
                Convention::Suspended => -1,
                _ => i as i64 - 2,
            };
            out.maps.push(MultiMap::zero(module.clone(), i, degree));
        }
        out
    }

    /// The algebra `(H(A), mu)` induced by `m_2`. Fails with
    /// `NotAssociative` for an A_2-structure whose induced product is not
    /// associative; for `r >= 3` associativity is guaranteed.
    pub fn homology_algebra(&self) -> Result<GradedAlgebra> {
        if self.r() < 2 {
            return Err(Error::InvalidArStructure("an A_2-structure is required".into()));
        }
        check_assumption_a(&self.complex)?;
        let circle_maps = self.circle_maps()?;
        let mh = MultiHom::new(&self.complex)?;
        let product = mh.class(&circle_maps[1])?;
        match GradedAlgebra::new(product) {
            Err(Error::NotAssociative) if self.r() >= 3 => {
                Err(Error::Internal("induced product of an A_3-structure is not associative".into()))
            }
            other => other,
        }
    }
}

/// A strictly associative dga seen as an A_r-structure with `m_i = 0` for
/// `i >= 3`, in the circle convention.
pub fn strict_structure(complex: DgModule, m2: MultiMap, r: usize) -> Result<ArStructure> {
    let s = ArStructure::from_higher(complex, Convention::Circle, vec![m2])?;
    Ok(s.extended_by_zero(r.max(2)))
}
