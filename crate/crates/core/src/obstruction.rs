//! Obstructions to extending A_r-structures.
//!
//! For an A_r-structure (`r >= 3`) on a dgmodule `A` with `Z(A)` and `H(A)`
//! free, the cocycle `O_{r+1} = sum_{i+j=r+2, i,j>1} m_i o m_j` induces a
//! Hochschild cocycle on `H(A)` of bidegree `(r+1, r-2)`. When it is a
//! coboundary `du`, replacing `m_r` by `m_r - m'_r` for a cycle `m'_r`
//! inducing `u` and solving for `m_{r+1}` gives an A_{r+1}-structure.

use crate::ainfty::{ArStructure, Convention};
use crate::complexes::{hom_differential, MultiMap};
use crate::error::{Error, Result};
use crate::hochschild::HochschildComplex;
use crate::homology::MultiHom;
use crate::prelie::{bracket, circle};
use crate::scalars::RingSpec;

/// Largest image rank enumerated by [`exhaustive_non_membership`].
pub const MAX_EXHAUSTIVE_RANK: usize = 26;

fn validated(s: &ArStructure, r: usize) -> Result<ArStructure> {
    if r < 3 {
        return Err(Error::RTooSmall(r));
    }
    if s.r() < r {
        return Err(Error::InvalidArStructure(format!("an A_{r}-structure is required, got A_{}", s.r())));
    }
    let s = s.convert(Convention::Circle)?.truncated(r)?;
    let report = s.check_ar()?;
    if let Some(defect) = report.first_failure {
        return Err(Error::InvalidArStructure(format!("relation {} fails", defect.n)));
    }
    Ok(s)
}

fn cocycle_of(s: &ArStructure, r: usize) -> Result<MultiMap> {
    let mut o = MultiMap::zero(s.complex().module_arc().clone(), r + 1, r as i64 - 2);
    for i in 2..=r {
        let j = r + 2 - i;
        if j >= 2 && j <= r {
            o = o.checked_add(&circle(s.map(i), s.map(j))?)?;
        }
    }
    Ok(o)
}

/// `O_{r+1}` for an A_r-structure. Fails with an internal error if
/// `dO_{r+1} != 0`, which the theory rules out.
pub fn obstruction_cocycle(s: &ArStructure, r: usize) -> Result<MultiMap> {
    let s = validated(s, r)?;
    let o = cocycle_of(&s, r)?;
    if !hom_differential(&o, s.map(1))?.is_zero() {
        return Err(Error::Internal(format!("O_{} is not a cycle", r + 1)));
    }
    Ok(o)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionClass {
    pub cocycle: MultiMap,
    /// The induced map on `H(A)`.
    pub class: MultiMap,
    /// `d` of the class, which must vanish.
    pub class_closed: bool,
    /// Some `u` on `H(A)` with `du` equal to the class, if one exists.
    pub coboundary: Option<MultiMap>,
}

impl ObstructionClass {
    pub fn is_zero(&self) -> bool {
        self.coboundary.is_some()
    }
}

fn class_of(s: &ArStructure, r: usize, mh: &MultiHom) -> Result<(ObstructionClass, HochschildComplex)> {
    let cocycle = obstruction_cocycle(s, r)?;
    let class = mh.class(&cocycle)?;
    let algebra = s.homology_algebra()?;
    let hc = HochschildComplex::with_max_arity(algebra, r + 1);
    let class_closed = hc.d(&class)?.is_zero();
    if !class_closed {
        return Err(Error::Internal(format!("the class of O_{} is not a Hochschild cocycle", r + 1)));
    }
    let coboundary = hc.is_coboundary(&class)?;
    Ok((ObstructionClass { cocycle, class, class_closed, coboundary }, hc))
}

/// The Hochschild class of `O_{r+1}` in `HH^{r+1}_{r-2}(H(A))` and whether
/// it vanishes.
pub fn obstruction_class(s: &ArStructure, r: usize) -> Result<ObstructionClass> {
    let mh = MultiHom::new(s.complex())?;
    Ok(class_of(s, r, &mh)?.0)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionReport {
    pub r: usize,
    pub cocycle: MultiMap,
    pub cocycle_closed: bool,
    pub class: MultiMap,
    pub class_closed: bool,
    pub class_zero: bool,
    pub u: Option<MultiMap>,
    pub m_prime: Option<MultiMap>,
    pub m_next: Option<MultiMap>,
    /// The A_{r+1}-structure `{m_1, ..., m_{r-1}, m_r - m'_r, m_{r+1}}`.
    pub structure: Option<ArStructure>,
}

impl ObstructionReport {
    /// The class itself when it does not vanish.
    pub fn certificate(&self) -> Option<&MultiMap> {
        (!self.class_zero).then_some(&self.class)
    }
}

/// One step: from an A_r-structure to an A_{r+1}-structure agreeing in
/// arities `<= r - 1`, or a report carrying the nonzero class.
pub fn lift_once(s: &ArStructure, r: usize) -> Result<ObstructionReport> {
    let mh = MultiHom::new(s.complex())?;
    let s = validated(s, r)?;
    let (oc, _) = class_of(&s, r, &mh)?;
    let mut report = ObstructionReport {
        r,
        cocycle: oc.cocycle.clone(),
        cocycle_closed: true,
        class: oc.class.clone(),
        class_closed: oc.class_closed,
        class_zero: oc.coboundary.is_some(),
        u: oc.coboundary.clone(),
        m_prime: None,
        m_next: None,
        structure: None,
    };
    let Some(u) = oc.coboundary else {
        return Ok(report);
    };
    let m_prime = mh.lift(&u)?;
    let (m2, mr) = (s.map(2), s.map(r));
    // d m_{r+1} = [m_2, m'_r - m_r] - sum_{i+j=r+2, i,j>2} m_i o m_j
    let mut rhs = bracket(m2, &m_prime.checked_sub(mr)?)?;
    for i in 3..r {
        let j = r + 2 - i;
        if j >= 3 {
            rhs = rhs.checked_sub(&circle(s.map(i), s.map(j))?)?;
        }
    }
    let m_next = mh.boundary(&rhs).map_err(|e| match e {
        Error::NonzeroInducedMap | Error::NotAChainMap => {
            Error::Internal(format!("no m_{} although the class vanishes", r + 1))
        }
        other => other,
    })?;
    let mut maps: Vec<MultiMap> = s.maps()[..r - 1].to_vec();
    maps.push(mr.checked_sub(&m_prime)?);
    maps.push(m_next.clone());
    let lifted = ArStructure::new(s.complex().clone(), Convention::Circle, maps)?;
    if !lifted.check_ar()?.passed() {
        return Err(Error::Internal(format!("the lifted structure is not A_{}", r + 1)));
    }
    report.m_prime = Some(m_prime);
    report.m_next = Some(m_next);
    report.structure = Some(lifted);
    Ok(report)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Extension {
    Complete(ArStructure),
    /// The first nonzero class, with the last structure reached.
    Blocked { report: Box<ObstructionReport>, reached: ArStructure },
}

/// Repeated [`lift_once`] from an A_3-structure (or higher) up to arity
/// `max_arity`.
pub fn extend_to_ainfty(s: &ArStructure, max_arity: usize) -> Result<Extension> {
    if s.r() < 3 {
        return Err(Error::RTooSmall(s.r()));
    }
    let start = s.r().min(max_arity);
    let mut current = validated(s, s.r())?.truncated(start)?;
    for r in start..max_arity {
        let report = lift_once(&current, r)?;
        match report.structure.clone() {
            Some(next) => current = next,
            None => return Ok(Extension::Blocked { report: Box::new(report), reached: current }),
        }
    }
    Ok(Extension::Complete(current))
}

/// Decides by enumerating the whole image of `d` over `F_2` that the
/// cocycle `c` is not a coboundary. Returns `None` when the image has rank
/// above [`MAX_EXHAUSTIVE_RANK`].
pub fn exhaustive_non_membership(hc: &HochschildComplex, c: &MultiMap) -> Result<Option<bool>> {
    if hc.module().ring() != RingSpec::prime_field(2)? {
        return Err(Error::RingMismatch(hc.module().ring(), RingSpec::prime_field(2)?));
    }
    if !hc.d(c)?.is_zero() {
        return Err(Error::NotACocycle);
    }
    let (n, i) = (c.arity(), c.degree());
    if n <= 1 {
        return Ok(Some(!c.is_zero()));
    }
    let op = hc.d_matrix(n - 1, i)?;
    let pivots = op.matrix.echelon().pivots;
    if pivots.len() > MAX_EXHAUSTIVE_RANK {
        return Ok(None);
    }
    let words = op.target.len().div_ceil(64);
    let pack = |v: &[crate::scalars::Scalar]| -> Vec<u64> {
        let mut bits = vec![0u64; words];
        for (k, x) in v.iter().enumerate() {
            if !x.is_zero() {
                bits[k / 64] |= 1 << (k % 64);
            }
        }
        bits
    };
    let columns: Vec<Vec<u64>> = pivots.iter().map(|&p| pack(&op.matrix.column(p))).collect();
    let target = pack(&op.target_coordinates(c));
    // Gray code walk through all 2^k combinations of the spanning columns
    let mut acc = vec![0u64; words];
    if acc == target {
        return Ok(Some(false));
    }
    for step in 1u64..(1u64 << columns.len()) {
        let flip = step.trailing_zeros() as usize;
        for (a, b) in acc.iter_mut().zip(&columns[flip]) {
            *a ^= b;
        }
        if acc == target {
            return Ok(Some(false));
        }
    }
    Ok(Some(true))
}
