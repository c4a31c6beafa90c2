//! Cycles, boundaries and homology with explicit splittings, and the
//! comparison between `H(Hom(C, D))` and `Hom(H(C), H(D))`.
//!
//! A complex satisfies assumption (A) when `0 -> Z -> C -> B -> 0` and
//! `0 -> B -> Z -> H -> 0` both split. A [`Splitting`] records the choice
//! as the decomposition `C_n = sigma(H_n) + B_n + tau(B_{n-1})`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::complexes::{
    endo_basis, graded_from_multimap, hom_complex, hom_differential, multimap_from_graded,
    tensor_power, differential_multimap, DgModule, GradedMap, GradedModule, MultiMap,
};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::scalars::{RingSpec, Scalar};
use crate::snf::smith_normal_form;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DegreeHomology {
    pub degree: i64,
    pub rank: usize,
    pub cycles: usize,
    pub boundaries: usize,
    /// Rank of the free part of `H_n`.
    pub homology: usize,
    /// Invariant factors of the torsion of `H_n` (integers only).
    pub torsion: Vec<BigInt>,
}

#[derive(Debug, Clone)]
pub struct HomologyData {
    complex: DgModule,
    degrees: Vec<DegreeHomology>,
    cycle_bases: BTreeMap<i64, Matrix>,
    boundary_bases: BTreeMap<i64, Matrix>,
}

impl HomologyData {
    pub fn complex(&self) -> &DgModule {
        &self.complex
    }

    pub fn degrees(&self) -> &[DegreeHomology] {
        &self.degrees
    }

    pub fn degree(&self, n: i64) -> Option<&DegreeHomology> {
        self.degrees.iter().find(|d| d.degree == n)
    }

    pub fn homology_rank(&self, n: i64) -> usize {
        self.degree(n).map_or(0, |d| d.homology)
    }

    pub fn has_torsion(&self) -> bool {
        self.degrees.iter().any(|d| !d.torsion.is_empty())
    }

    /// Columns form a basis of `Z_n`.
    pub fn cycle_basis(&self, n: i64) -> Option<&Matrix> {
        self.cycle_bases.get(&n)
    }

    /// Columns form a basis of `B_n`.
    pub fn boundary_basis(&self, n: i64) -> Option<&Matrix> {
        self.boundary_bases.get(&n)
    }
}

/// What elimination of `d_n: C_n -> C_{n-1}` yields.
struct DiffData {
    /// `C_n x z_n`.
    cycles: Matrix,
    /// `C_{n-1} x b_{n-1}`.
    boundaries: Matrix,
    /// `C_n x b_{n-1}`, with `d * preimages = boundaries`.
    preimages: Matrix,
    /// Coordinates of a cycle in `cycles` (integers only): `z_n x C_n`.
    cycle_coords: Option<Matrix>,
    invariant_factors: Vec<BigInt>,
}

fn diff_data(c: &DgModule, n: i64) -> DiffData {
    let ring = c.ring();
    let d = c.d_block(n);
    let cols = d.cols();
    if ring == RingSpec::Integers {
        let snf = smith_normal_form(&d).expect("integer differential");
        let k = snf.rank;
        let dv = d.mul(&snf.v);
        let lead: Vec<usize> = (0..k).collect();
        let rest: Vec<usize> = (k..cols).collect();
        DiffData {
            cycles: snf.v.select_columns(&rest),
            boundaries: dv.select_columns(&lead),
            preimages: snf.v.select_columns(&lead),
            cycle_coords: Some(snf.v_inv.select_rows(&rest)),
            invariant_factors: snf.invariant_factors(),
        }
    } else {
        let ech = d.echelon();
        let kernel = d.kernel_basis();
        let mut preimages = Matrix::zeros(ring, cols, ech.pivots.len());
        for (j, &p) in ech.pivots.iter().enumerate() {
            preimages[(p, j)] = ring.one();
        }
        DiffData {
            cycles: Matrix::from_columns(ring, cols, &kernel),
            boundaries: d.select_columns(&ech.pivots),
            preimages,
            cycle_coords: None,
            invariant_factors: vec![BigInt::one(); ech.pivots.len()],
        }
    }
}

fn degree_range(c: &DgModule) -> Vec<i64> {
    match c.module().support() {
        Some((lo, hi)) => (lo..=hi).collect(),
        None => Vec::new(),
    }
}

/// Ranks of cycles, boundaries and homology in every degree; over the
/// integers the torsion invariant factors are listed as well.
pub fn homology(c: &DgModule) -> HomologyData {
    let mut degrees = Vec::new();
    let mut cycle_bases = BTreeMap::new();
    let mut boundary_bases = BTreeMap::new();
    for n in degree_range(c) {
        let here = diff_data(c, n);
        let above = diff_data(c, n + 1);
        let z = here.cycles.cols();
        let b = above.boundaries.cols();
        degrees.push(DegreeHomology {
            degree: n,
            rank: c.module().dim(n),
            cycles: z,
            boundaries: b,
            homology: z - b,
            torsion: above
                .invariant_factors
                .iter()
                .filter(|f| !f.abs().is_one())
                .cloned()
                .collect(),
        });
        cycle_bases.insert(n, here.cycles);
        boundary_bases.insert(n, above.boundaries);
    }
    HomologyData {
        complex: c.clone(),
        degrees,
        cycle_bases,
        boundary_bases,
    }
}

/// A choice of splittings realising assumption (A), stored both per degree
/// and as full matrices on the global bases of `C` and `H(C)`.
#[derive(Debug, Clone)]
pub struct Splitting {
    complex: DgModule,
    homology: DgModule,
    sigma: Matrix,
    pi: Matrix,
    homotopy: Matrix,
    tau: BTreeMap<i64, Matrix>,
    boundaries: BTreeMap<i64, Matrix>,
    decomposition: BTreeMap<i64, Matrix>,
}

impl Splitting {
    pub fn complex(&self) -> &DgModule {
        &self.complex
    }

    /// `H(C)` as a dgmodule with zero differential.
    pub fn homology(&self) -> &DgModule {
        &self.homology
    }

    pub fn homology_module(&self) -> &Arc<GradedModule> {
        self.homology.module_arc()
    }

    /// `sigma: H(C) -> Z(C)`, as a `|C| x |H|` matrix.
    pub fn sigma(&self) -> &Matrix {
        &self.sigma
    }

    /// The projection `C -> H(C)` killing `B + tau(B)`.
    pub fn pi(&self) -> &Matrix {
        &self.pi
    }

    /// `K = tau o (B-component)`, of degree +1, with `dK + Kd = 1 - sigma pi`.
    pub fn homotopy(&self) -> &Matrix {
        &self.homotopy
    }

    /// `sigma o pi`.
    pub fn projection(&self) -> Matrix {
        self.sigma.mul(&self.pi)
    }

    /// `tau: B_{n-1} -> C_n` on the chosen basis of `B_{n-1}`.
    pub fn tau(&self, n: i64) -> Option<&Matrix> {
        self.tau.get(&n)
    }

    pub fn boundary_basis(&self, n: i64) -> Option<&Matrix> {
        self.boundaries.get(&n)
    }

    /// `[sigma | B_n | tau(B_{n-1})]`, an invertible `C_n x C_n` matrix.
    pub fn decomposition(&self, n: i64) -> Option<&Matrix> {
        self.decomposition.get(&n)
    }

    pub fn sigma_map(&self) -> GradedMap {
        GradedMap::new(self.homology.clone(), self.complex.clone(), 0, self.sigma.clone())
            .expect("sigma has degree 0")
    }

    pub fn pi_map(&self) -> GradedMap {
        GradedMap::new(self.complex.clone(), self.homology.clone(), 0, self.pi.clone())
            .expect("pi has degree 0")
    }

    pub fn homotopy_map(&self) -> GradedMap {
        GradedMap::new(self.complex.clone(), self.complex.clone(), 1, self.homotopy.clone())
            .expect("homotopy has degree 1")
    }
}

fn torsion_strings(f: &[BigInt]) -> Vec<String> {
    f.iter().map(|x| x.to_string()).collect()
}

/// Computes a splitting, or reports the first degree where the homology
/// has torsion (only possible over the integers).
pub fn check_assumption_a(c: &DgModule) -> Result<Splitting> {
    let ring = c.ring();
    let module = c.module();
    let degrees = degree_range(c);
    let data: BTreeMap<i64, DiffData> = degrees
        .iter()
        .chain(degrees.last().map(|n| n + 1).iter())
        .map(|&n| (n, diff_data(c, n)))
        .collect();

    let mut sigmas = BTreeMap::new();
    let mut h_dims = Vec::new();
    for &n in &degrees {
        let above = &data[&(n + 1)];
        let here = &data[&n];
        let bad: Vec<BigInt> = above
            .invariant_factors
            .iter()
            .filter(|f| !f.abs().is_one())
            .cloned()
            .collect();
        if !bad.is_empty() {
            return Err(Error::AssumptionAViolated {
                degree: n,
                factors: torsion_strings(&bad),
            });
        }
        let b = &above.boundaries;
        let z = &here.cycles;
        let sigma = match &here.cycle_coords {
            Some(coords) => {
                let m = coords.mul(b);
                let snf = smith_normal_form(&m)?;
                let bad: Vec<BigInt> = snf.torsion();
                if !bad.is_empty() {
                    return Err(Error::AssumptionAViolated {
                        degree: n,
                        factors: torsion_strings(&bad),
                    });
                }
                let rest: Vec<usize> = (snf.rank..m.rows()).collect();
                z.mul(&snf.u_inv.select_columns(&rest))
            }
            None => {
                let both = Matrix::hstack(ring, module.dim(n), &[b, z]);
                let ech = both.echelon();
                let chosen: Vec<usize> = ech
                    .pivots
                    .iter()
                    .filter(|&&p| p >= b.cols())
                    .map(|&p| p - b.cols())
                    .collect();
                z.select_columns(&chosen)
            }
        };
        h_dims.push((n, sigma.cols()));
        sigmas.insert(n, sigma);
    }

    let h_module = GradedModule::new(ring, h_dims.iter().copied());
    let total = module.total_rank();
    let h_total = h_module.total_rank();
    let mut sigma_full = Matrix::zeros(ring, total, h_total);
    let mut pi_full = Matrix::zeros(ring, h_total, total);
    let mut homotopy = Matrix::zeros(ring, total, total);
    let mut taus = BTreeMap::new();
    let mut boundaries = BTreeMap::new();
    let mut decomposition = BTreeMap::new();
    let mut b_coords: BTreeMap<i64, Matrix> = BTreeMap::new();

    for &n in &degrees {
        let sigma = &sigmas[&n];
        let b = &data[&(n + 1)].boundaries;
        let tau = &data[&n].preimages;
        let dim = module.dim(n);
        let p = Matrix::hstack(ring, dim, &[sigma, b, tau]);
        if p.cols() != dim {
            return Err(Error::Internal(format!("decomposition in degree {n} is not square")));
        }
        let p_inv = p
            .inverse()
            .map_err(|_| Error::Internal(format!("decomposition in degree {n} is singular")))?;
        let (h, nb) = (sigma.cols(), b.cols());
        let rows = module.basis(n);
        let hrows = h_module.basis(n);
        for (li, gi) in rows.clone().enumerate() {
            for (lj, gj) in hrows.clone().enumerate() {
                sigma_full[(gi, gj)] = sigma[(li, lj)].clone();
                pi_full[(gj, gi)] = p_inv[(lj, li)].clone();
            }
        }
        let yrows: Vec<usize> = (h..h + nb).collect();
        b_coords.insert(n, p_inv.select_rows(&yrows));
        taus.insert(n, tau.clone());
        boundaries.insert(n, b.clone());
        decomposition.insert(n, p);
    }
    // K on C_n is tau_{n+1} applied to the B_n-coordinates
    for &n in &degrees {
        let Some(tau_up) = taus.get(&(n + 1)) else {
            continue;
        };
        let k = tau_up.mul(&b_coords[&n]);
        for (li, gi) in module.basis(n + 1).enumerate() {
            for (lj, gj) in module.basis(n).enumerate() {
                homotopy[(gi, gj)] = k[(li, lj)].clone();
            }
        }
    }
    Ok(Splitting {
        complex: c.clone(),
        homology: DgModule::with_zero_differential(h_module),
        sigma: sigma_full,
        pi: pi_full,
        homotopy,
        tau: taus,
        boundaries,
        decomposition,
    })
}

pub fn satisfies_assumption_a(c: &DgModule) -> bool {
    check_assumption_a(c).is_ok()
}

fn check_endpoints(f: &GradedMap, sc: &Splitting, sd: &Splitting) -> Result<()> {
    if f.source() != sc.complex() || f.target() != sd.complex() {
        return Err(Error::ModuleMismatch);
    }
    Ok(())
}

/// `fbar([c]) = [f(c)]` for a chain map `f` (a cycle of the Hom complex).
pub fn induced_map(f: &GradedMap, sc: &Splitting, sd: &Splitting) -> Result<GradedMap> {
    check_endpoints(f, sc, sd)?;
    if !f.is_chain_map() {
        return Err(Error::NotAChainMap);
    }
    let m = sd.pi().mul(f.matrix()).mul(sc.sigma());
    GradedMap::new(sc.homology().clone(), sd.homology().clone(), f.degree(), m)
}

/// A cycle `f = sigma_D g pi_C` with `fbar = g`.
pub fn lift_cycle_map(g: &GradedMap, sc: &Splitting, sd: &Splitting) -> Result<GradedMap> {
    if g.source() != sc.homology() || g.target() != sd.homology() {
        return Err(Error::ModuleMismatch);
    }
    let m = sd.sigma().mul(g.matrix()).mul(sc.pi());
    let f = GradedMap::new(sc.complex().clone(), sd.complex().clone(), g.degree(), m)?;
    if !f.is_chain_map() || induced_map(&f, sc, sd)?.matrix() != g.matrix() {
        return Err(Error::Internal("lifted map does not induce the given map".into()));
    }
    Ok(f)
}

/// For a cycle `f` of degree `i` inducing zero on homology, returns `u` of
/// degree `i + 1` with `du = f`:
/// `u(sigma h + y + tau z) = (-1)^i f(tau y) + tau_D f(sigma h)`.
pub fn write_as_boundary(f: &GradedMap, sc: &Splitting, sd: &Splitting) -> Result<GradedMap> {
    let fbar = induced_map(f, sc, sd)?;
    if !fbar.is_zero() {
        return Err(Error::NonzeroInducedMap);
    }
    let ring = f.matrix().ring();
    let first = f.matrix().mul(sc.homotopy()).scale(&ring.sign(f.degree()));
    let second = sd.homotopy().mul(f.matrix()).mul(&sc.projection());
    let u = GradedMap::new(
        sc.complex().clone(),
        sd.complex().clone(),
        f.degree() + 1,
        first.add(&second),
    )?;
    if u.hom_differential().matrix() != f.matrix() {
        return Err(Error::Internal("constructed preimage has the wrong boundary".into()));
    }
    Ok(u)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomIsoDegree {
    pub degree: i64,
    pub homology_of_hom: usize,
    pub hom_of_homology: usize,
    /// The class map and the lift are mutually inverse in this degree.
    pub bijective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomIsoReport {
    pub degrees: Vec<HomIsoDegree>,
}

impl HomIsoReport {
    pub fn holds(&self) -> bool {
        self.degrees
            .iter()
            .all(|d| d.bijective && d.homology_of_hom == d.hom_of_homology)
    }
}

fn is_identity(m: &Matrix) -> bool {
    m.rows() == m.cols() && *m == Matrix::identity(m.ring(), m.rows())
}

fn iso_degree(degree: i64, forward: &Matrix, backward: &Matrix, lhs: usize, rhs: usize) -> HomIsoDegree {
    let bijective = lhs == rhs
        && (lhs == 0 || (is_identity(&forward.mul(backward)) && is_identity(&backward.mul(forward))));
    HomIsoDegree {
        degree,
        homology_of_hom: lhs,
        hom_of_homology: rhs,
        bijective,
    }
}

fn degree_block(v: &Matrix, rows: std::ops::Range<usize>, col: usize) -> Vec<Scalar> {
    rows.map(|r| v[(r, col)].clone()).collect()
}

/// Compares `H(Hom(C, D))` with `Hom(H(C), H(D))` degree by degree: ranks
/// are computed independently on both sides, and the class map built from
/// [`induced_map`] is checked to be inverse to the one built from
/// [`lift_cycle_map`].
pub fn hom_homology_iso(c: &DgModule, d: &DgModule) -> Result<HomIsoReport> {
    let sc = check_assumption_a(c)?;
    let sd = check_assumption_a(d)?;
    let hc = hom_complex(c, d)?;
    let hh = hom_complex(sc.homology(), sd.homology())?;
    let shom = check_assumption_a(&hc.complex)?;
    let ring = c.ring();

    let mut degrees: Vec<i64> = hc
        .complex
        .module()
        .dims()
        .chain(hh.complex.module().dims())
        .map(|(i, _)| i)
        .collect();
    degrees.sort_unstable();
    degrees.dedup();

    let mut out = Vec::new();
    for i in degrees {
        let lhs = shom.homology_module().dim(i);
        let rhs = hh.complex.module().dim(i);
        let hrange = shom.homology_module().basis(i);
        let mut fwd_cols = Vec::new();
        for j in hrange.clone() {
            let coords = degree_block(shom.sigma(), hc.complex.module().basis(i), j);
            let rep = hc.from_coordinates(i, &coords);
            let bar = induced_map(&rep, &sc, &sd)?;
            fwd_cols.push(hh.coordinates(&bar)?);
        }
        let forward = Matrix::from_columns(ring, rhs, &fwd_cols);
        let mut back_cols = Vec::new();
        for j in 0..rhs {
            let mut e = vec![ring.zero(); rhs];
            e[j] = ring.one();
            let g = hh.from_coordinates(i, &e);
            let f = lift_cycle_map(&g, &sc, &sd)?;
            let v = hc.to_vector(&f)?;
            let class = shom.pi().mul_vec(&v);
            back_cols.push(hrange.clone().map(|k| class[k].clone()).collect());
        }
        let backward = Matrix::from_columns(ring, lhs, &back_cols);
        out.push(iso_degree(i, &forward, &backward, lhs, rhs));
    }
    Ok(HomIsoReport { degrees: out })
}

/// The correspondence between cycles of `Hom(C^{(x) n}, C)` and
/// `Hom(H(C)^{(x) n}, H(C))` for a complex with free cycles and homology.
///
/// Currying identifies `Hom(C^{(x) n}, C)` with `Hom(C, Hom(C^{(x) n-1}, C))`
/// as complexes, and applying the one-variable construction at each level
/// gives, after unrolling the recursion,
///
/// * class: `fbar = pi f sigma^{(x) n}`,
/// * lift: `f = sigma u pi^{(x) n}`,
/// * boundary: `u = K f P^{(x) n} + (-1)^i sum_k f (P^{(x) k-1} (x) K (x) 1^{(x) n-k})`,
///
/// where `P = sigma pi` and `K` is the splitting homotopy.
#[derive(Debug, Clone)]
pub struct MultiHom {
    splitting: Splitting,
    module: Arc<GradedModule>,
    differential: MultiMap,
    projection: MultiMap,
    homotopy: MultiMap,
}

impl MultiHom {
    pub fn new(c: &DgModule) -> Result<Self> {
        let splitting = check_assumption_a(c).map_err(|e| match e {
            Error::AssumptionAViolated { degree, .. } => Error::ProjectivityViolated { degree },
            other => other,
        })?;
        let module = c.module_arc().clone();
        let projection = MultiMap::from_matrix(module.clone(), 0, &splitting.projection())?;
        let homotopy = MultiMap::from_matrix(module.clone(), 1, splitting.homotopy())?;
        Ok(MultiHom {
            differential: differential_multimap(c),
            splitting,
            module,
            projection,
            homotopy,
        })
    }

    pub fn splitting(&self) -> &Splitting {
        &self.splitting
    }

    pub fn module(&self) -> &Arc<GradedModule> {
        &self.module
    }

    pub fn homology_module(&self) -> &Arc<GradedModule> {
        self.splitting.homology_module()
    }

    /// The differential `m_1` of `C` as an arity-one map.
    pub fn differential(&self) -> &MultiMap {
        &self.differential
    }

    fn on_module(&self, f: &MultiMap) -> Result<()> {
        if **f.module() != *self.module {
            return Err(Error::ModuleMismatch);
        }
        Ok(())
    }

    pub fn is_cycle(&self, f: &MultiMap) -> Result<bool> {
        Ok(hom_differential(f, &self.differential)?.is_zero())
    }

    /// The map induced on homology by a cycle.
    pub fn class(&self, f: &MultiMap) -> Result<MultiMap> {
        self.on_module(f)?;
        if !self.is_cycle(f)? {
            return Err(Error::NotAChainMap);
        }
        Ok(self.class_unchecked(f))
    }

    pub(crate) fn class_unchecked(&self, f: &MultiMap) -> MultiMap {
        f.transport(
            self.homology_module().clone(),
            self.splitting.pi(),
            self.splitting.sigma(),
        )
        .expect("pi and sigma have degree 0")
    }

    /// A cycle on `C` inducing `u`.
    pub fn lift(&self, u: &MultiMap) -> Result<MultiMap> {
        if **u.module() != **self.homology_module() {
            return Err(Error::ModuleMismatch);
        }
        u.transport(self.module.clone(), self.splitting.sigma(), self.splitting.pi())
    }

    /// For a cycle `f` inducing zero, some `u` with `du = f`.
    pub fn boundary(&self, f: &MultiMap) -> Result<MultiMap> {
        let bar = self.class(f)?;
        if !bar.is_zero() {
            return Err(Error::NonzeroInducedMap);
        }
        Ok(self.boundary_unchecked(f))
    }

    pub(crate) fn boundary_unchecked(&self, f: &MultiMap) -> MultiMap {
        let n = f.arity();
        let ring = f.ring();
        let id = Matrix::identity(ring, self.module.total_rank());
        let fp = f
            .transport(self.module.clone(), &id, &self.splitting.projection())
            .expect("projection has degree 0");
        let mut u = self.homotopy.compose_at(1, &fp).expect("same module");
        let sign = ring.sign(f.degree());
        let mut prefix = f.clone();
        for k in 1..=n {
            let term = prefix.compose_at(k, &self.homotopy).expect("valid slot");
            u = &u + &term.scale(&sign);
            if k < n {
                prefix = prefix.compose_at(k, &self.projection).expect("valid slot");
            }
        }
        u
    }
}

/// Checks the multi-hom correspondence in arity `n` against a brute-force
/// computation of `H(Hom(C^{(x) n}, C))` on the explicit tensor power.
pub fn multi_hom_iso(c: &DgModule, n: usize) -> Result<HomIsoReport> {
    let mh = MultiHom::new(c)?;
    let ring = c.ring();
    let tp = tensor_power(c, n)?;
    let hc = hom_complex(&tp.complex, c)?;
    let shom = check_assumption_a(&hc.complex)?;
    let h = mh.homology_module().clone();

    let mut degrees: Vec<i64> = hc.complex.module().dims().map(|(i, _)| i).collect();
    if let Some((lo, hi)) = h.support() {
        let n = n as i64;
        degrees.extend(lo - n * hi..=hi - n * lo);
    }
    degrees.sort_unstable();
    degrees.dedup();

    let mut out = Vec::new();
    for i in degrees {
        let basis = endo_basis(&h, n, i);
        let index = crate::complexes::basis_index(&basis);
        let lhs = shom.homology_module().dim(i);
        let rhs = basis.len();
        let hrange = shom.homology_module().basis(i);
        let mut fwd_cols = Vec::new();
        for j in hrange.clone() {
            let coords = degree_block(shom.sigma(), hc.complex.module().basis(i), j);
            let rep = hc.from_coordinates(i, &coords);
            let f = multimap_from_graded(&tp, &rep, mh.module().clone())?;
            fwd_cols.push(mh.class(&f)?.coordinates(&index, rhs));
        }
        let forward = Matrix::from_columns(ring, rhs, &fwd_cols);
        let mut back_cols = Vec::new();
        for key in &basis {
            let u = MultiMap::from_terms(h.clone(), n, i, [(key.clone(), ring.one())])?;
            let f = mh.lift(&u)?;
            let g = graded_from_multimap(&tp, &f, c)?;
            let class = shom.pi().mul_vec(&hc.to_vector(&g)?);
            back_cols.push(hrange.clone().map(|k| class[k].clone()).collect());
        }
        let backward = Matrix::from_columns(ring, lhs, &back_cols);
        out.push(iso_degree(i, &forward, &backward, lhs, rhs));
    }
    Ok(HomIsoReport { degrees: out })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> RingSpec {
        RingSpec::Rationals
    }

    fn interval(ring: RingSpec, scale: i64) -> DgModule {
        DgModule::new(
            GradedModule::new(ring, [(0, 1), (1, 1)]),
            [(1, Matrix::from_i64(ring, &[&[scale]]))],
        )
        .unwrap()
    }

    fn point(ring: RingSpec) -> DgModule {
        DgModule::with_zero_differential(GradedModule::new(ring, [(0, 1)]))
    }

    fn check_splitting(s: &Splitting) {
        let c = s.complex();
        let ring = c.ring();
        let d = c.differential_matrix();
        let k = s.homotopy();
        let n = c.module().total_rank();
        let lhs = d.mul(k).add(&k.mul(&d));
        let rhs = Matrix::identity(ring, n).sub(&s.projection());
        assert_eq!(lhs, rhs, "dK + Kd = 1 - sigma pi");
        let h = s.homology_module().total_rank();
        assert_eq!(s.pi().mul(s.sigma()), Matrix::identity(ring, h));
        assert!(d.mul(s.sigma()).is_zero());
        assert!(s.pi().mul(&d).is_zero());
        for (deg, _) in c.module().dims() {
            let p = s.decomposition(deg).unwrap();
            assert!(p.inverse().is_ok());
            if let Some(t) = s.tau(deg) {
                let b = c.d_block(deg).mul(t);
                let basis = s.boundary_basis(deg - 1);
                if t.cols() > 0 {
                    assert_eq!(&b, basis.unwrap());
                }
            }
        }
    }

    #[test]
    fn zero_differential_homology_is_everything() {
        let c = DgModule::with_zero_differential(GradedModule::new(q(), [(0, 2), (1, 1)]));
        let h = homology(&c);
        assert_eq!(h.homology_rank(0), 2);
        assert_eq!(h.homology_rank(1), 1);
        let s = check_assumption_a(&c).unwrap();
        assert_eq!(s.sigma(), &Matrix::identity(q(), 3));
        check_splitting(&s);
    }

    #[test]
    fn acyclic_interval() {
        let h = homology(&interval(q(), 1));
        assert!(h.degrees().iter().all(|d| d.homology == 0));
        check_splitting(&check_assumption_a(&interval(q(), 1)).unwrap());
    }

    #[test]
    fn integer_torsion_is_detected() {
        let z = RingSpec::Integers;
        let c = interval(z, 2);
        let h = homology(&c);
        assert_eq!(h.degree(0).unwrap().torsion, vec![BigInt::from(2)]);
        assert_eq!(h.homology_rank(0), 0);
        assert_eq!(h.homology_rank(1), 0);
        assert!(matches!(
            check_assumption_a(&c),
            Err(Error::AssumptionAViolated { degree: 0, .. })
        ));
        assert!(matches!(MultiHom::new(&c), Err(Error::ProjectivityViolated { degree: 0 })));
    }

    #[test]
    fn integer_free_complex_splits() {
        let z = RingSpec::Integers;
        // e2 -> e1 (x1) plus a free summand in degree 1
        let c = DgModule::new(
            GradedModule::new(z, [(0, 2), (1, 2)]),
            [(1, Matrix::from_i64(z, &[&[1, 0], &[3, 0]]))],
        )
        .unwrap();
        let s = check_assumption_a(&c).unwrap();
        check_splitting(&s);
        assert_eq!(s.homology_module().total_rank(), 2);
        let f2 = RingSpec::prime_field(2).unwrap();
        let c2 = DgModule::new(
            GradedModule::new(f2, [(0, 2), (1, 2)]),
            [(1, Matrix::from_i64(f2, &[&[1, 1], &[1, 1]]))],
        )
        .unwrap();
        check_splitting(&check_assumption_a(&c2).unwrap());
    }

    #[test]
    fn induced_identity_and_boundaries() {
        let c = interval(q(), 1).direct_sum(&point(q())).unwrap();
        let s = check_assumption_a(&c).unwrap();
        let id = GradedMap::identity(&c);
        let bar = induced_map(&id, &s, &s).unwrap();
        assert_eq!(bar.matrix(), &Matrix::identity(q(), 1));
        // d of a degree-1 map induces zero
        let mut m = Matrix::zeros(q(), 3, 3);
        m[(2, 0)] = q().from_i64(4);
        let v = GradedMap::new(c.clone(), c.clone(), 1, m).unwrap();
        let dv = v.hom_differential();
        assert!(induced_map(&dv, &s, &s).unwrap().is_zero());
        let u = write_as_boundary(&dv, &s, &s).unwrap();
        assert_eq!(u.hom_differential().matrix(), dv.matrix());
        assert!(matches!(induced_map(&v, &s, &s), Err(Error::NotAChainMap)));
        assert!(matches!(write_as_boundary(&id, &s, &s), Err(Error::NonzeroInducedMap)));
    }

    #[test]
    fn boundary_of_identity_on_interval() {
        let c = interval(q(), 1);
        let s = check_assumption_a(&c).unwrap();
        let u = write_as_boundary(&GradedMap::identity(&c), &s, &s).unwrap();
        // u(e0) = e1, u(e1) = 0
        assert_eq!(u.matrix(), &Matrix::from_i64(q(), &[&[0, 0], &[1, 0]]));
    }

    #[test]
    fn lift_scales_homology() {
        let c = interval(q(), 1)
            .direct_sum(&DgModule::with_zero_differential(GradedModule::new(q(), [(0, 1), (1, 1)])))
            .unwrap();
        let s = check_assumption_a(&c).unwrap();
        let three = Matrix::identity(q(), 2).scale(&q().from_i64(3));
        let g = GradedMap::new(s.homology().clone(), s.homology().clone(), 0, three).unwrap();
        let f = lift_cycle_map(&g, &s, &s).unwrap();
        assert_eq!(f.matrix(), &s.projection().scale(&q().from_i64(3)));
        let zero = GradedMap::zero(s.homology().clone(), s.homology().clone(), 0);
        assert!(lift_cycle_map(&zero, &s, &s).unwrap().is_zero());
    }

    #[test]
    fn hom_iso_small_cases() {
        let p = point(q());
        let r = hom_homology_iso(&p, &p).unwrap();
        assert!(r.holds());
        assert_eq!(r.degrees[0].homology_of_hom, 1);
        let i = interval(q(), 1);
        let r = hom_homology_iso(&i, &i).unwrap();
        assert!(r.holds());
        assert!(r.degrees.iter().all(|d| d.homology_of_hom == 0));
    }

    #[test]
    fn multi_hom_small_cases() {
        let c = interval(q(), 1).direct_sum(&point(q())).unwrap();
        for n in 1..=2 {
            let r = multi_hom_iso(&c, n).unwrap();
            assert!(r.holds(), "{r:?}");
        }
        let r = multi_hom_iso(&point(q()), 3).unwrap();
        assert!(r.holds());
        assert_eq!(r.degrees.iter().map(|d| d.hom_of_homology).sum::<usize>(), 1);
    }

    #[test]
    fn multi_boundary_inverts_differential() {
        let f2 = RingSpec::prime_field(2).unwrap();
        for ring in [q(), f2, RingSpec::Integers] {
            let c = interval(ring, 1)
                .direct_sum(&DgModule::with_zero_differential(GradedModule::new(ring, [(1, 1)])))
                .unwrap();
            let mh = MultiHom::new(&c).unwrap();
            let module = c.module_arc().clone();
            // v in End^2_1, f = dv
            let v = MultiMap::from_terms(
                module.clone(),
                2,
                1,
                [
                    ((1, vec![0, 0]), ring.one()),
                    ((2, vec![0, 0]), ring.from_i64(-1)),
                ],
            )
            .unwrap();
            let f = hom_differential(&v, mh.differential()).unwrap();
            assert!(!f.is_zero());
            let u = mh.boundary(&f).unwrap();
            assert_eq!(hom_differential(&u, mh.differential()).unwrap(), f);
        }
    }
}
