//! Graded and weight graded pre-Lie systems, the Gerstenhaber products
//! `star` and `circle`, their brackets, and the suspension isomorphism
//! `Theta: End(sV) -> End(V)`.
//!
//! For `x` of arity `n` and degree `i` the weight is `|x| = i + n - 1`.
//! `star` and the brace `{-,-}` are graded by degree; `circle` and the
//! bracket `[-,-]` are graded by weight.

use std::fmt;
use std::sync::Arc;

use crate::complexes::{desuspension_map, koszul_tensor_of_maps, suspension_map, DgModule, GradedMap, GradedModule, MultiMap};
use crate::matrix::Matrix;
use crate::error::{Error, Result};

fn parity(e: i64) -> i64 {
    e.rem_euclid(2)
}

/// Which grading the second defining relation of a system uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Grading {
    Degree,
    Weight,
}

/// A bigraded family with partial compositions `f o_k g`.
pub trait PreLieSystem {
    type Elem: Clone + PartialEq + fmt::Debug;

    fn grading(&self) -> Grading;
    fn arity(&self, x: &Self::Elem) -> usize;
    fn degree(&self, x: &Self::Elem) -> i64;
    fn compose(&self, f: &Self::Elem, k: usize, g: &Self::Elem) -> Result<Self::Elem>;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem>;
    /// `(-1)^exponent * a`.
    fn signed(&self, a: &Self::Elem, exponent: i64) -> Self::Elem;

    fn weight(&self, x: &Self::Elem) -> i64 {
        self.degree(x) + self.arity(x) as i64 - 1
    }

    /// The grading used for Koszul-type signs in this system.
    fn grade(&self, x: &Self::Elem) -> i64 {
        match self.grading() {
            Grading::Degree => self.degree(x),
            Grading::Weight => self.weight(x),
        }
    }
}

/// `End(V)` with the insertion maps: a graded pre-Lie system.
#[derive(Debug, Clone, Copy, Default)]
pub struct EndSystem;

impl PreLieSystem for EndSystem {
    type Elem = MultiMap;

    fn grading(&self) -> Grading {
        Grading::Degree
    }

    fn arity(&self, x: &MultiMap) -> usize {
        x.arity()
    }

    fn degree(&self, x: &MultiMap) -> i64 {
        x.degree()
    }

    fn compose(&self, f: &MultiMap, k: usize, g: &MultiMap) -> Result<MultiMap> {
        f.compose_at(k, g)
    }

    fn add(&self, a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
        a.checked_add(b)
    }

    fn signed(&self, a: &MultiMap, exponent: i64) -> MultiMap {
        a.signed(exponent)
    }
}

/// Exponent of the sign relating the two kinds of systems:
/// `f o_k g = (-1)^e f *_k g` with `e = (j + m - 1)(n - 1) + (m - 1)(k - 1)`,
/// for `f` of arity `n` and `g` of arity `m` and degree `j`.
pub fn conversion_exponent(n: usize, m: usize, j: i64, k: usize) -> i64 {
    let (n, m, k) = (n as i64, m as i64, k as i64);
    (j + m - 1) * (n - 1) + (m - 1) * (k - 1)
}

/// The same compositions multiplied by the conversion sign. Wrapping a
/// graded system gives a weight graded one and vice versa; the sign only
/// depends on arities and degrees, so wrapping twice is the identity.
#[derive(Debug, Clone, Copy)]
pub struct Regraded<S> {
    pub inner: S,
}

pub fn convert_graded_to_weight<S: PreLieSystem>(inner: S) -> Regraded<S> {
    assert_eq!(inner.grading(), Grading::Degree, "input must be graded by degree");
    Regraded { inner }
}

pub fn convert_weight_to_graded<S: PreLieSystem>(inner: S) -> Regraded<S> {
    assert_eq!(inner.grading(), Grading::Weight, "input must be graded by weight");
    Regraded { inner }
}

impl<S: PreLieSystem> PreLieSystem for Regraded<S> {
    type Elem = S::Elem;

    fn grading(&self) -> Grading {
        match self.inner.grading() {
            Grading::Degree => Grading::Weight,
            Grading::Weight => Grading::Degree,
        }
    }

    fn arity(&self, x: &Self::Elem) -> usize {
        self.inner.arity(x)
    }

    fn degree(&self, x: &Self::Elem) -> i64 {
        self.inner.degree(x)
    }

    fn compose(&self, f: &Self::Elem, k: usize, g: &Self::Elem) -> Result<Self::Elem> {
        let c = self.inner.compose(f, k, g)?;
        let e = conversion_exponent(self.arity(f), self.arity(g), self.degree(g), k);
        Ok(self.inner.signed(&c, e))
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Result<Self::Elem> {
        self.inner.add(a, b)
    }

    fn signed(&self, a: &Self::Elem, exponent: i64) -> Self::Elem {
        self.inner.signed(a, exponent)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    /// 1 for sequential composition, 2 for parallel composition.
    pub relation: u8,
    pub triple: usize,
    pub u: usize,
    pub v: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SystemReport {
    pub checked: usize,
    pub violations: Vec<Violation>,
}

impl SystemReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn check_relations<S: PreLieSystem>(sys: &S, triples: &[(S::Elem, S::Elem, S::Elem)]) -> Result<SystemReport> {
    let mut report = SystemReport::default();
    for (t, (f, g, h)) in triples.iter().enumerate() {
        let (n, m) = (sys.arity(f), sys.arity(g));
        for u in 1..=n {
            for v in 1..=m {
                let lhs = sys.compose(f, u, &sys.compose(g, v, h)?)?;
                let rhs = sys.compose(&sys.compose(f, u, g)?, v + u - 1, h)?;
                report.checked += 1;
                if lhs != rhs {
                    report.violations.push(Violation { relation: 1, triple: t, u, v });
                }
            }
        }
        let sign = sys.grade(g) * sys.grade(h);
        for u in 1..=n {
            for v in u + 1..=n {
                let lhs = sys.compose(&sys.compose(f, u, g)?, v + m - 1, h)?;
                let rhs = sys.signed(&sys.compose(&sys.compose(f, v, h)?, u, g)?, sign);
                report.checked += 1;
                if lhs != rhs {
                    report.violations.push(Violation { relation: 2, triple: t, u, v });
                }
            }
        }
    }
    Ok(report)
}

/// Checks both relations of a graded pre-Lie system on the given triples;
/// the parallel relation carries `(-1)^{jl}`.
pub fn check_graded_system<S: PreLieSystem>(
    sys: &S,
    triples: &[(S::Elem, S::Elem, S::Elem)],
) -> Result<SystemReport> {
    if sys.grading() != Grading::Degree {
        return Err(Error::WrongConvention("degree graded"));
    }
    check_relations(sys, triples)
}

/// As [`check_graded_system`] with the sign `(-1)^{|g||h|}` of weights.
pub fn check_weight_system<S: PreLieSystem>(
    sys: &S,
    triples: &[(S::Elem, S::Elem, S::Elem)],
) -> Result<SystemReport> {
    if sys.grading() != Grading::Weight {
        return Err(Error::WrongConvention("weight graded"));
    }
    check_relations(sys, triples)
}

/// `sum_k f o_k g` in the given system.
pub fn gerstenhaber_product<S: PreLieSystem>(sys: &S, f: &S::Elem, g: &S::Elem) -> Result<S::Elem> {
    let mut acc = sys.compose(f, 1, g)?;
    for k in 2..=sys.arity(f) {
        acc = sys.add(&acc, &sys.compose(f, k, g)?)?;
    }
    Ok(acc)
}

/// `a b - (-1)^{|a||b|} b a` for the system's product and grading.
pub fn commutator<S: PreLieSystem>(sys: &S, a: &S::Elem, b: &S::Elem) -> Result<S::Elem> {
    let ab = gerstenhaber_product(sys, a, b)?;
    let ba = gerstenhaber_product(sys, b, a)?;
    sys.add(&ab, &sys.signed(&ba, sys.grade(a) * sys.grade(b) + 1))
}

/// `f * g = sum_k f o_k g`.
pub fn star(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    gerstenhaber_product(&EndSystem, f, g)
}

/// `f o g = (-1)^{|g|(n-1)} sum_k (-1)^{(m-1)(k-1)} f o_k g`.
pub fn circle(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    let n = f.arity() as i64;
    let m = g.arity() as i64;
    let mut acc = MultiMap::zero(f.module().clone(), f.arity() + g.arity() - 1, f.degree() + g.degree());
    for k in 1..=f.arity() {
        let t = f.compose_at(k, g)?;
        acc = acc.checked_add(&t.signed((m - 1) * (k as i64 - 1)))?;
    }
    Ok(acc.signed(g.weight() * (n - 1)))
}

/// `{f, g} = f * g - (-1)^{ij} g * f`.
pub fn brace(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    commutator(&EndSystem, f, g)
}

/// `[f, g] = f o g - (-1)^{|f||g|} g o f`.
pub fn bracket(f: &MultiMap, g: &MultiMap) -> Result<MultiMap> {
    let fg = circle(f, g)?;
    let gf = circle(g, f)?;
    fg.checked_add(&gf.signed(f.weight() * g.weight() + 1))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OddSquareReport {
    /// `(f g) g = f (g g)`.
    pub square_associates: bool,
    /// `[f, g g] = -[g, [g, f]]`.
    pub double_bracket: bool,
    /// `[f, g g] = -[g g, f]`.
    pub antisymmetry: bool,
}

impl OddSquareReport {
    pub fn holds(&self) -> bool {
        self.square_associates && self.double_bracket && self.antisymmetry
    }
}

fn odd_square(
    f: &MultiMap,
    g: &MultiMap,
    prod: fn(&MultiMap, &MultiMap) -> Result<MultiMap>,
    br: fn(&MultiMap, &MultiMap) -> Result<MultiMap>,
) -> Result<OddSquareReport> {
    let gg = prod(g, g)?;
    let lhs = prod(&prod(f, g)?, g)?;
    let rhs = prod(f, &gg)?;
    let f_gg = br(f, &gg)?;
    let g_g_f = br(g, &br(g, f)?)?;
    let gg_f = br(&gg, f)?;
    Ok(OddSquareReport {
        square_associates: lhs == rhs,
        double_bracket: f_gg == g_g_f.neg(),
        antisymmetry: f_gg == gg_f.neg(),
    })
}

/// The identities for an element `g` of odd weight, with `circle` and
/// `[-,-]`. Nothing is divided by two.
pub fn odd_square_identities(f: &MultiMap, g: &MultiMap) -> Result<OddSquareReport> {
    if parity(g.weight()) == 0 {
        return Err(Error::EvenWeight(g.weight()));
    }
    odd_square(f, g, circle, bracket)
}

/// The same identities for `g` of odd degree, with `star` and `{-,-}`.
pub fn odd_square_identities_degree(f: &MultiMap, g: &MultiMap) -> Result<OddSquareReport> {
    if parity(g.degree()) == 0 {
        return Err(Error::EvenDegree(g.degree()));
    }
    odd_square(f, g, star, brace)
}

/// `(a b) c - a (b c) = e_{b,c} ((a c) b - a (c b))`, the associator being
/// graded symmetric in its last two arguments.
type Product = fn(&MultiMap, &MultiMap) -> Result<MultiMap>;
type GradeFn = fn(&MultiMap) -> i64;

pub fn pre_lie_identity_holds(
    a: &MultiMap,
    b: &MultiMap,
    c: &MultiMap,
    grading: Grading,
) -> Result<bool> {
    let (prod, grade): (Product, GradeFn) = match grading {
        Grading::Degree => (star, |x| x.degree()),
        Grading::Weight => (circle, |x| x.weight()),
    };
    let assoc = |x: &MultiMap, y: &MultiMap, z: &MultiMap| -> Result<MultiMap> {
        prod(&prod(x, y)?, z)?.checked_sub(&prod(x, &prod(y, z)?)?)
    };
    Ok(assoc(a, b, c)? == assoc(a, c, b)?.signed(grade(b) * grade(c)))
}

/// Graded Jacobi: `e_{a,c}[a,[b,c]] + e_{b,a}[b,[c,a]] + e_{c,b}[c,[a,b]] = 0`.
pub fn jacobi_holds(a: &MultiMap, b: &MultiMap, c: &MultiMap, grading: Grading) -> Result<bool> {
    let (br, grade): (Product, GradeFn) = match grading {
        Grading::Degree => (brace, |x| x.degree()),
        Grading::Weight => (bracket, |x| x.weight()),
    };
    let t1 = br(a, &br(b, c)?)?.signed(grade(a) * grade(c));
    let t2 = br(b, &br(c, a)?)?.signed(grade(b) * grade(a));
    let t3 = br(c, &br(a, b)?)?.signed(grade(c) * grade(b));
    Ok(t1.checked_add(&t2)?.checked_add(&t3)?.is_zero())
}

/// Graded antisymmetry `[c, d] = -e_{c,d} [d, c]`.
pub fn antisymmetry_holds(c: &MultiMap, d: &MultiMap, grading: Grading) -> Result<bool> {
    let (br, grade): (Product, GradeFn) = match grading {
        Grading::Degree => (brace, |x| x.degree()),
        Grading::Weight => (bracket, |x| x.weight()),
    };
    Ok(br(c, d)? == br(d, c)?.signed(grade(c) * grade(d) + 1))
}

/// Koszul sign of `s^{(x) n}` on `x_1 (x) ... (x) x_n`: `sum_l (n - l) |x_l|`.
fn suspension_exponent(module: &GradedModule, inputs: &[usize], shift: i64) -> i64 {
    let n = inputs.len() as i64;
    inputs
        .iter()
        .enumerate()
        .map(|(l, &x)| (n - 1 - l as i64) * (module.degree_of(x) + shift))
        .sum()
}

/// `Theta(F)` for `F` in `End^n_i(sV)`: the map in `End^n_{i+n-1}(V)` with
/// `s Theta(F) (s^{-1})^{(x) n} = F`, that is
/// `Theta(F) = (-1)^{n(n-1)/2} s^{-1} F s^{(x) n}`.
pub fn theta(f: &MultiMap, v: &Arc<GradedModule>) -> Result<MultiMap> {
    if !f.module().is_suspension_of(v) {
        return Err(Error::SourceNotASuspension);
    }
    let n = f.arity() as i64;
    let base = n * (n - 1) / 2;
    let terms = f.terms().map(|((o, ins), c)| {
        let e = base + suspension_exponent(v, ins, 0);
        ((*o, ins.clone()), c.clone().signed(e))
    });
    MultiMap::from_terms(v.clone(), f.arity(), f.degree() + n - 1, terms)
}

/// The inverse of [`theta`]: `Theta^{-1}(f) = s f (s^{-1})^{(x) n}` on `sV`.
pub fn theta_inv(f: &MultiMap) -> Result<MultiMap> {
    let v = f.module();
    let sv = Arc::new(v.suspend());
    let n = f.arity() as i64;
    let terms = f.terms().map(|((o, ins), c)| {
        let e = suspension_exponent(v, ins, 1);
        ((*o, ins.clone()), c.clone().signed(e))
    });
    MultiMap::from_terms(sv, f.arity(), f.degree() - n + 1, terms)
}

fn tensor_power_of_map(f: &GradedMap, n: usize) -> Result<GradedMap> {
    let mut acc = f.clone();
    for _ in 1..n {
        acc = koszul_tensor_of_maps(&acc, f)?;
    }
    Ok(acc)
}

/// Whether `(s^{-1})^{(x) n} s^{(x) n} = (-1)^{n(n-1)/2} id` on `C^{(x) n}`,
/// computed with Koszul signs on the explicit tensor powers.
pub fn koszul_suspension_constant(c: &DgModule, n: usize) -> Result<bool> {
    let up = tensor_power_of_map(&suspension_map(c), n)?;
    let down = tensor_power_of_map(&desuspension_map(c), n)?;
    let both = down.compose(&up)?;
    let ring = c.ring();
    let e = (n * (n - 1) / 2) as i64;
    let expected = Matrix::identity(ring, both.matrix().rows()).scale(&ring.sign(e));
    Ok(*both.matrix() == expected)
}

/// `df = {m_1, f}`; also equal to `[m_1, f]`.
pub fn prelie_differential(f: &MultiMap, m1: &MultiMap) -> Result<MultiMap> {
    if m1.arity() != 1 || m1.degree() != -1 {
        return Err(Error::DegreeViolation("m_1 must have arity 1 and degree -1".into()));
    }
    let sq = m1.compose_at(1, m1)?;
    if let Some(((o, _), _)) = sq.terms().next() {
        return Err(Error::NotADifferential(m1.module().degree_of(*o) + 2));
    }
    brace(m1, f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::{differential_multimap, hom_differential};
    use crate::generate::{random_element, random_element_where, random_module, rng};
    use crate::scalars::RingSpec;

    fn f2() -> RingSpec {
        RingSpec::prime_field(2).unwrap()
    }

    fn rank_one(ring: RingSpec) -> (Arc<GradedModule>, MultiMap) {
        let m = Arc::new(GradedModule::new(ring, [(0, 1)]));
        let mu = MultiMap::from_terms(m.clone(), 2, 0, [((0, vec![0, 0]), ring.one())]).unwrap();
        (m, mu)
    }

    #[test]
    fn star_on_rank_one() {
        let (_, mu) = rank_one(RingSpec::Rationals);
        assert_eq!(star(&mu, &mu).unwrap().apply(&[0, 0, 0]), vec![RingSpec::Rationals.from_i64(2)]);
        let (_, mu) = rank_one(f2());
        assert!(star(&mu, &mu).unwrap().is_zero());
        let id = MultiMap::identity(mu.module().clone());
        assert_eq!(star(&id, &mu).unwrap(), mu);
    }

    #[test]
    fn circle_square_measures_associativity() {
        let (_, mu) = rank_one(RingSpec::Rationals);
        let expected = mu
            .compose_at(2, &mu)
            .unwrap()
            .checked_sub(&mu.compose_at(1, &mu).unwrap())
            .unwrap();
        assert_eq!(circle(&mu, &mu).unwrap(), expected);
        assert!(circle(&mu, &mu).unwrap().is_zero());
    }

    #[test]
    fn conversion_signs() {
        assert_eq!(conversion_exponent(1, 3, 2, 1).rem_euclid(2), 0);
        assert_eq!(conversion_exponent(2, 2, 0, 2).rem_euclid(2), 0);
        assert_eq!(conversion_exponent(2, 2, 0, 1).rem_euclid(2), 1);
    }

    #[test]
    fn graded_and_weight_relations() {
        for ring in [RingSpec::Rationals, f2()] {
            let mut r = rng(11);
            let module = Arc::new(random_module(&mut r, ring, 3));
            let triples: Vec<_> = (0..30)
                .map(|_| {
                    (
                        random_element(&mut r, &module),
                        random_element(&mut r, &module),
                        random_element(&mut r, &module),
                    )
                })
                .collect();
            assert!(check_graded_system(&EndSystem, &triples).unwrap().passed());
            let w = convert_graded_to_weight(EndSystem);
            assert!(check_weight_system(&w, &triples).unwrap().passed());
            // star in the weight system is the signed circle product
            for (f, g, _) in &triples {
                assert_eq!(gerstenhaber_product(&w, f, g).unwrap(), circle(f, g).unwrap());
            }
            // back again
            let back = convert_weight_to_graded(w);
            for (f, g, _) in &triples {
                for k in 1..=f.arity() {
                    assert_eq!(back.compose(f, k, g).unwrap(), f.compose_at(k, g).unwrap());
                }
            }
        }
    }

    struct Corrupted;

    impl PreLieSystem for Corrupted {
        type Elem = MultiMap;
        fn grading(&self) -> Grading {
            Grading::Degree
        }
        fn arity(&self, x: &MultiMap) -> usize {
            x.arity()
        }
        fn degree(&self, x: &MultiMap) -> i64 {
            x.degree()
        }
        fn compose(&self, f: &MultiMap, k: usize, g: &MultiMap) -> Result<MultiMap> {
            let c = f.compose_at(k, g)?;
            Ok(if k == 2 { c.neg() } else { c })
        }
        fn add(&self, a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
            a.checked_add(b)
        }
        fn signed(&self, a: &MultiMap, e: i64) -> MultiMap {
            a.signed(e)
        }
    }

    #[test]
    fn corrupted_sign_is_caught() {
        let q = RingSpec::Rationals;
        let (_, mu) = rank_one(q);
        let triples = vec![(mu.clone(), mu.clone(), mu.clone())];
        let report = check_graded_system(&Corrupted, &triples).unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn lie_identities() {
        for ring in [RingSpec::Rationals, f2(), RingSpec::prime_field(3).unwrap()] {
            let mut r = rng(5);
            let module = Arc::new(random_module(&mut r, ring, 3));
            for _ in 0..25 {
                let a = random_element(&mut r, &module);
                let b = random_element(&mut r, &module);
                let c = random_element(&mut r, &module);
                for grading in [Grading::Degree, Grading::Weight] {
                    assert!(pre_lie_identity_holds(&a, &b, &c, grading).unwrap());
                    assert!(jacobi_holds(&a, &b, &c, grading).unwrap());
                    assert!(antisymmetry_holds(&a, &b, grading).unwrap());
                }
            }
        }
    }

    #[test]
    fn self_brackets() {
        let q = RingSpec::Rationals;
        let m = Arc::new(GradedModule::new(q, [(0, 1), (1, 1)]));
        // weight 0: [f, f] vanishes
        let f = MultiMap::from_terms(m.clone(), 2, -1, [((0, vec![0, 1]), q.one())]).unwrap();
        assert_eq!(f.weight(), 0);
        assert!(!circle(&f, &f).unwrap().is_zero());
        assert!(bracket(&f, &f).unwrap().is_zero());
        // weight 1: [g, g] = 2 g o g
        let g = MultiMap::from_terms(m, 2, 0, [((1, vec![0, 1]), q.one()), ((1, vec![1, 0]), q.one())]).unwrap();
        let two = q.from_i64(2);
        assert!(!circle(&g, &g).unwrap().is_zero());
        assert_eq!(bracket(&g, &g).unwrap(), circle(&g, &g).unwrap().scale(&two));
    }

    #[test]
    fn odd_squares_over_f2() {
        let mut r = rng(3);
        let module = Arc::new(GradedModule::new(f2(), [(0, 1), (1, 1)]));
        for _ in 0..40 {
            let f = random_element(&mut r, &module);
            let g = random_element_where(&mut r, &module, |a, d| (a as i64 + d - 1).rem_euclid(2) == 1);
            assert!(odd_square_identities(&f, &g).unwrap().holds());
            let g = random_element_where(&mut r, &module, |_, d| d.rem_euclid(2) == 1);
            assert!(odd_square_identities_degree(&f, &g).unwrap().holds());
        }
        let (_, mu) = rank_one(f2());
        let id = MultiMap::identity(mu.module().clone());
        assert!(matches!(odd_square_identities(&mu, &id), Err(Error::EvenWeight(0))));
    }

    #[test]
    fn theta_properties() {
        for ring in [RingSpec::Rationals, f2()] {
            let mut r = rng(9);
            let v = Arc::new(GradedModule::new(ring, [(0, 1), (1, 1)]));
            let sv = Arc::new(v.suspend());
            for _ in 0..40 {
                let f = random_element(&mut r, &sv);
                let g = random_element(&mut r, &sv);
                let tf = theta(&f, &v).unwrap();
                assert_eq!(tf.degree(), f.degree() + f.arity() as i64 - 1);
                assert_eq!(theta_inv(&tf).unwrap(), f);
                let lhs = circle(&tf, &theta(&g, &v).unwrap()).unwrap();
                let rhs = theta(&star(&f, &g).unwrap(), &v).unwrap();
                assert_eq!(lhs, rhs);
            }
            let f = random_element(&mut r, &v);
            assert!(matches!(theta(&f, &v), Err(Error::SourceNotASuspension)));
        }
    }

    #[test]
    fn koszul_constant() {
        for ring in [RingSpec::Rationals, RingSpec::prime_field(3).unwrap()] {
            let c = DgModule::with_zero_differential(GradedModule::new(ring, [(0, 1), (1, 1)]));
            for n in 1..=5 {
                assert!(koszul_suspension_constant(&c, n).unwrap(), "n = {n}");
            }
        }
    }

    #[test]
    fn differential_agrees_with_hom_complex() {
        let q = RingSpec::Rationals;
        let c = DgModule::new(
            GradedModule::new(q, [(0, 2), (1, 1)]),
            [(1, Matrix::from_i64(q, &[&[1], &[0]]))],
        )
        .unwrap();
        let m1 = differential_multimap(&c);
        let module = c.module_arc().clone();
        let mut r = rng(2);
        for _ in 0..30 {
            let f = random_element(&mut r, &module);
            let g = random_element(&mut r, &module);
            let df = prelie_differential(&f, &m1).unwrap();
            assert_eq!(df, hom_differential(&f, &m1).unwrap());
            assert_eq!(df, bracket(&m1, &f).unwrap());
            assert!(prelie_differential(&df, &m1).unwrap().is_zero());
            let dg = prelie_differential(&g, &m1).unwrap();
            // derivation rules
            let lhs = prelie_differential(&star(&f, &g).unwrap(), &m1).unwrap();
            let rhs = star(&df, &g).unwrap().checked_add(&star(&f, &dg).unwrap().signed(f.degree())).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = prelie_differential(&circle(&f, &g).unwrap(), &m1).unwrap();
            let rhs = circle(&df, &g).unwrap().checked_add(&circle(&f, &dg).unwrap().signed(f.weight())).unwrap();
            assert_eq!(lhs, rhs);
            let lhs = prelie_differential(&bracket(&f, &g).unwrap(), &m1).unwrap();
            let rhs = bracket(&df, &g).unwrap().checked_add(&bracket(&f, &dg).unwrap().signed(f.weight())).unwrap();
            assert_eq!(lhs, rhs);
        }
        // a non-differential is refused
        let chain = Arc::new(GradedModule::new(q, [(-1, 1), (0, 1), (1, 1)]));
        let bad = MultiMap::from_terms(chain.clone(), 1, -1, [((0, vec![1]), q.one()), ((1, vec![2]), q.one())]).unwrap();
        let f = MultiMap::identity(chain);
        assert!(matches!(prelie_differential(&f, &bad), Err(Error::NotADifferential(1))));
    }
}
