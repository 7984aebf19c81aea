//! Generator and relation search for `PSL2(O_d)`.
//!
//! The generating set at height `h` consists of one canonical matrix
//! `Mat(a/c)` per cusp `a/c` in the fundamental domain with
//! `norm(c) <= 1/h^2`, plus the two parabolic translations `T_1` and
//! `T_omega` kept separately. Relations come in two shapes: one inversion
//! relation `A T_r C T_t = 1` per generator, and one triple relation
//! `B^-1 T_{-s} A T_r C T_t = 1` per triple overlap
//! `A(V) and (T_s B)(V) and V`. Every relation is verified as an exact
//! matrix identity before it is kept.

use crate::geometry::{self, QOmega};
use crate::ring::{
    self, exact_div, floor_div, inverse_mod, lattice_points_in_disc, norm_form_rat, rat_floor,
    residue_reps, QuadInt, Rational, RingParams,
};
use num::traits::{One, Signed, Zero};
use num::BigInt;
use rayon::prelude::*;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EnumError {
    #[error("cusp denominator must be nonzero")]
    ZeroDenominator,
    #[error("cusp numerator and denominator are not coprime")]
    NotCoprime,
    #[error("matrix determinant must be 1")]
    BadDeterminant,
    #[error("element fixes infinity (c = 0); handle it as a translation")]
    FixesInfinity,
    #[error("denominator norm {0} exceeds the generating-set horizon {1}")]
    BeyondHorizon(BigInt, BigInt),
    #[error("cusp {0} is not in the generating set")]
    MissingCusp(String),
    #[error(transparent)]
    Ring(#[from] ring::RingError),
}

/// A cusp `a/c` in reduced canonical form: `c` sign-canonical, `a` the
/// residue representative with `a/c` in the fundamental domain, and
/// `gcd(a, c) = 1`. Equality of cusps is equality of reduced pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cusp {
    a: QuadInt,
    c: QuadInt,
}

impl fmt::Display for Cusp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})/({})", self.a, self.c)
    }
}

impl Cusp {
    pub fn new(a: QuadInt, c: QuadInt) -> Result<Self, EnumError> {
        if c.is_zero() {
            return Err(EnumError::ZeroDenominator);
        }
        let (a, c) = if c.is_canonical_positive() {
            (a, c)
        } else {
            (-&a, -&c)
        };
        let (_, a) = floor_div(&a, &c)?;
        if inverse_mod(&a, &c)?.is_none() {
            return Err(EnumError::NotCoprime);
        }
        Ok(Cusp { a, c })
    }

    /// Already-reduced constructor for internal enumeration loops, where
    /// `a` comes straight from the residue system of a sign-canonical `c`.
    fn from_reduced(a: QuadInt, c: QuadInt) -> Self {
        debug_assert!(c.is_canonical_positive());
        debug_assert!({
            let (q, _) = floor_div(&a, &c).unwrap();
            q.is_zero()
        });
        Cusp { a, c }
    }

    pub fn numerator(&self) -> &QuadInt {
        &self.a
    }

    pub fn denominator(&self) -> &QuadInt {
        &self.c
    }

    /// Exact coordinates of `a/c` in the `{1, omega}` basis.
    pub fn point(&self) -> QOmega {
        let norm = Rational::from(self.c.norm());
        let ac = &self.a * &self.c.conj();
        QOmega::new(
            Rational::from(ac.x().clone()) / &norm,
            Rational::from(ac.y().clone()) / &norm,
        )
    }
}

/// An element of `PSL2(O_d)`: a determinant-one matrix stored with a
/// canonical global sign (the first nonzero of `(c, a)` satisfies `y > 0`,
/// or `y = 0, x > 0`), so that equality of values is equality in the
/// projective group.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GroupElement {
    a: QuadInt,
    b: QuadInt,
    c: QuadInt,
    d: QuadInt,
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl GroupElement {
    pub fn new(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Result<Self, EnumError> {
        let det = &(&a * &d) - &(&b * &c);
        if !det.is_one() {
            return Err(EnumError::BadDeterminant);
        }
        Ok(Self::normalize(a, b, c, d))
    }

    fn normalize(a: QuadInt, b: QuadInt, c: QuadInt, d: QuadInt) -> Self {
        let pivot = if !c.is_zero() { &c } else { &a };
        if pivot.is_zero() || pivot.is_canonical_positive() {
            GroupElement { a, b, c, d }
        } else {
            GroupElement {
                a: -&a,
                b: -&b,
                c: -&c,
                d: -&d,
            }
        }
    }

    pub fn identity(params: RingParams) -> Self {
        GroupElement {
            a: params.one(),
            b: params.zero(),
            c: params.zero(),
            d: params.one(),
        }
    }

    /// The translation `T_s = [[1, s], [0, 1]]`.
    pub fn t_shift(s: &QuadInt) -> Self {
        let params = s.params();
        GroupElement {
            a: params.one(),
            b: s.clone(),
            c: params.zero(),
            d: params.one(),
        }
    }

    pub fn params(&self) -> RingParams {
        self.a.params()
    }

    pub fn a(&self) -> &QuadInt {
        &self.a
    }

    pub fn b(&self) -> &QuadInt {
        &self.b
    }

    pub fn c(&self) -> &QuadInt {
        &self.c
    }

    pub fn d(&self) -> &QuadInt {
        &self.d
    }

    pub fn det(&self) -> QuadInt {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn mul(&self, rhs: &GroupElement) -> GroupElement {
        GroupElement::normalize(
            &(&self.a * &rhs.a) + &(&self.b * &rhs.c),
            &(&self.a * &rhs.b) + &(&self.b * &rhs.d),
            &(&self.c * &rhs.a) + &(&self.d * &rhs.c),
            &(&self.c * &rhs.b) + &(&self.d * &rhs.d),
        )
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement::normalize(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    /// Identity test in the projective group (`= ±I` before normalization).
    pub fn is_identity(&self) -> bool {
        self.a.is_one() && self.d.is_one() && self.b.is_zero() && self.c.is_zero()
    }

    /// The cusp `a/c` this element sends infinity to; errors when `c = 0`.
    pub fn cusp(&self) -> Result<Cusp, EnumError> {
        if self.c.is_zero() {
            return Err(EnumError::FixesInfinity);
        }
        Cusp::new(self.a.clone(), self.c.clone())
    }
}

/// The canonical matrix `Mat(a/c) = [[a, b0], [c, d0]]` for a cusp:
/// `d0` is the canonical residue with `a*d0 = 1 (mod c)` and
/// `b0 = (a*d0 - 1)/c`. Deterministic by construction.
pub fn mat_of_cusp(cusp: &Cusp) -> GroupElement {
    let a = cusp.numerator();
    let c = cusp.denominator();
    let d0 = inverse_mod(a, c)
        .expect("nonzero denominator")
        .expect("cusp is coprime by construction");
    let one = a.params().one();
    let b0 = exact_div(&(&(a * &d0) - &one), c).expect("a*d0 = 1 (mod c)");
    GroupElement::new(a.clone(), b0, c.clone(), d0).expect("determinant 1 by construction")
}

/// The generating set at height `h`: one matrix per cusp with
/// `norm(c) <= floor(1/h^2)`, in a deterministic order (denominators by
/// `(norm, x, y)`, numerators by `(x, y)`), with a positional index.
#[derive(Debug, Clone)]
pub struct GenSet {
    params: RingParams,
    h: Rational,
    norm_bound: BigInt,
    cusps: Vec<Cusp>,
    mats: Vec<GroupElement>,
    index: HashMap<Cusp, usize>,
}

impl GenSet {
    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn height(&self) -> &Rational {
        &self.h
    }

    /// The denominator-norm search horizon `floor(1/h^2)`.
    pub fn depth_horizon(&self) -> &BigInt {
        &self.norm_bound
    }

    pub fn len(&self) -> usize {
        self.cusps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cusps.is_empty()
    }

    pub fn cusp(&self, i: usize) -> &Cusp {
        &self.cusps[i]
    }

    pub fn mat(&self, i: usize) -> &GroupElement {
        &self.mats[i]
    }

    pub fn position(&self, cusp: &Cusp) -> Option<usize> {
        self.index.get(cusp).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Cusp, &GroupElement)> {
        self.cusps.iter().zip(self.mats.iter())
    }

    /// Largest denominator norm actually attained (0 for an empty set).
    pub fn max_denominator_norm(&self) -> BigInt {
        self.cusps
            .iter()
            .map(|c| c.denominator().norm())
            .max()
            .unwrap_or_else(BigInt::zero)
    }

    /// The parabolic translation `T_1`.
    pub fn t1(&self) -> GroupElement {
        GroupElement::t_shift(&self.params.one())
    }

    /// The parabolic translation `T_omega`.
    pub fn t_omega(&self) -> GroupElement {
        GroupElement::t_shift(&self.params.omega())
    }

    /// The intersection discs of all generators at this height, paired
    /// with the generator index they belong to. Generators whose ball only
    /// touches the horosphere (`norm(c) = 1/h^2`) contribute no disc.
    pub fn circles(&self) -> Vec<(usize, geometry::Circle)> {
        self.cusps
            .iter()
            .enumerate()
            .filter_map(|(i, cusp)| geometry::circ(cusp, &self.h).map(|c| (i, c)))
            .collect()
    }
}

/// `floor(1/h^2)`: the inclusive bound on denominator norms at height `h`.
pub fn depth_horizon(h: &Rational) -> BigInt {
    assert!(h.is_positive(), "height must be positive");
    let inv_sq = Rational::one() / (h * h);
    rat_floor(&inv_sq)
}

/// All generators at height `h`: `Mat(a/c)` for every cusp `a/c` in the
/// fundamental domain with `gcd(a, c) = 1` and `norm(c) <= 1/h^2`.
pub fn find_generators(params: RingParams, h: &Rational) -> GenSet {
    assert!(
        params.has_trivial_units(),
        "generator enumeration requires trivial units"
    );
    let norm_bound = depth_horizon(h);
    let denominators = ring::enumerate_norm_le(params, &norm_bound);

    let mut cusps = Vec::new();
    let mut mats = Vec::new();
    let mut index = HashMap::new();
    for c in denominators {
        for a in residue_reps(&c).expect("nonzero denominator").iter() {
            if inverse_mod(a, &c).unwrap().is_none() {
                continue;
            }
            let cusp = Cusp::from_reduced(a.clone(), c.clone());
            let mat = mat_of_cusp(&cusp);
            index.insert(cusp.clone(), cusps.len());
            cusps.push(cusp);
            mats.push(mat);
        }
    }
    GenSet {
        params,
        h: h.clone(),
        norm_bound,
        cusps,
        mats,
        index,
    }
}

/// A rational upper bound for the squared shift horizon
/// `(1/(|c|h) + |1 + omega|)^2`: translates `T_s` with `norm(s)` beyond
/// this bound cannot make `(T_s B)(V)` meet `Mat(a/c)(V)`. The two square
/// roots are over-approximated, which only widens the search.
pub fn tang_bound_sq(c: &QuadInt, h: &Rational) -> Rational {
    assert!(!c.is_zero() && h.is_positive());
    let params = c.params();
    let norm = Rational::from(c.norm());
    let opo = Rational::from(BigInt::from(params.one_plus_omega_norm()));
    let inv = Rational::one() / (&norm * h * h);
    let cross = ring::sqrt_upper_bound(&(&inv * &opo), 12);
    &inv + &opo + Rational::from(BigInt::from(2)) * cross
}

/// A factorization `sigma = T_r * gens[index] * T_t`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub r: QuadInt,
    pub index: usize,
    pub t: QuadInt,
}

/// Writes `sigma = T_r g T_t` with `g` in the generating set: `r` is the
/// quotient of `a` by `c`, `g` the generator at the reduced cusp, and
/// `T_t = g^-1 T_{-r} sigma`. The factorization is verified exactly.
pub fn decompose(sigma: &GroupElement, gens: &GenSet) -> Result<Decomposition, EnumError> {
    if sigma.c().is_zero() {
        return Err(EnumError::FixesInfinity);
    }
    let c_norm = sigma.c().norm();
    if &c_norm > gens.depth_horizon() {
        return Err(EnumError::BeyondHorizon(
            c_norm,
            gens.depth_horizon().clone(),
        ));
    }
    // stored elements keep c sign-canonical, so entries line up with the
    // generator's entries exactly
    debug_assert!(sigma.c().is_canonical_positive());
    let (r, a_reduced) = floor_div(sigma.a(), sigma.c())?;
    let cusp = Cusp::from_reduced(a_reduced, sigma.c().clone());
    let index = gens
        .position(&cusp)
        .ok_or_else(|| EnumError::MissingCusp(cusp.to_string()))?;
    let g = gens.mat(index);
    // g^-1 T_{-r} sigma is upper unitriangular; read off its corner
    let t = &(g.d() * &(sigma.b() - &(&r * sigma.d()))) - &(g.b() * sigma.d());

    let rebuilt = GroupElement::t_shift(&r)
        .mul(g)
        .mul(&GroupElement::t_shift(&t));
    assert_eq!(
        &rebuilt, sigma,
        "decomposition must reproduce the element exactly"
    );
    Ok(Decomposition { r, index, t })
}

/// A verified relation among the generators; substituting matrices yields
/// the identity of `PSL2(O_d)` exactly.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RawRelation {
    /// `A T_r C T_t = 1`, from `A(V) and V` (the inversion of `A`).
    Inversion {
        a: usize,
        r: QuadInt,
        c: usize,
        t: QuadInt,
    },
    /// `B^-1 T_{-s} A T_r C T_t = 1`, from `A(V) and (T_s B)(V) and V`.
    Triple {
        a: usize,
        s: QuadInt,
        b: usize,
        r: QuadInt,
        c: usize,
        t: QuadInt,
    },
}

impl RawRelation {
    /// The relator evaluated as a matrix product.
    pub fn matrix_product(&self, gens: &GenSet) -> GroupElement {
        match self {
            RawRelation::Inversion { a, r, c, t } => gens
                .mat(*a)
                .mul(&GroupElement::t_shift(r))
                .mul(gens.mat(*c))
                .mul(&GroupElement::t_shift(t)),
            RawRelation::Triple { a, s, b, r, c, t } => gens
                .mat(*b)
                .inverse()
                .mul(&GroupElement::t_shift(&-s))
                .mul(gens.mat(*a))
                .mul(&GroupElement::t_shift(r))
                .mul(gens.mat(*c))
                .mul(&GroupElement::t_shift(t)),
        }
    }

    pub fn is_valid(&self, gens: &GenSet) -> bool {
        self.matrix_product(gens).is_identity()
    }
}

/// All relations at this height: one inversion relation per generator and
/// one triple relation per overlap `A(V) and (T_s B)(V) and V`. The shift
/// search is pruned per pair: `s` must place the basepoint of `T_s B`
/// within `sqrt(4 r_A r_B)` of `A`'s basepoint for the balls to meet,
/// which stays within the `tang_bound_sq` horizon. Each relation is
/// checked as a matrix identity when it is created.
pub fn find_relations(gens: &GenSet) -> Vec<RawRelation> {
    let params = gens.params();
    let h = gens.height().clone();
    let h_sq = &h * &h;
    let count = gens.len();

    let points: Vec<QOmega> = (0..count).map(|i| gens.cusp(i).point()).collect();
    let norms: Vec<Rational> = (0..count)
        .map(|i| Rational::from(gens.cusp(i).denominator().norm()))
        .collect();
    let radii: Vec<Rational> = norms
        .iter()
        .map(|n| Rational::one() / (Rational::from(BigInt::from(2)) * &h * n))
        .collect();

    let per_a: Vec<Vec<RawRelation>> = (0..count)
        .into_par_iter()
        .map(|a_idx| {
            let mut out = Vec::new();
            let a_mat = gens.mat(a_idx);
            let a_inv = a_mat.inverse();

            // inversion relation: A^-1 = T_r C T_t
            let dec = decompose(&a_inv, gens).expect("inverse of a generator decomposes");
            let rel = RawRelation::Inversion {
                a: a_idx,
                r: dec.r,
                c: dec.index,
                t: dec.t,
            };
            assert!(rel.is_valid(gens), "inversion relation failed verification");
            out.push(rel);

            for b_idx in 0..count {
                // balls meet iff norm(p_A - p_B - s) <= 4 r_A r_B
                let reach = Rational::one() / (&h_sq * &norms[a_idx] * &norms[b_idx]);
                let du = &points[a_idx].u - &points[b_idx].u;
                let dv = &points[a_idx].v - &points[b_idx].v;
                for s in lattice_points_in_disc(params, &du, &dv, &reach) {
                    if a_idx == b_idx && s.is_zero() {
                        continue;
                    }
                    let dist_sq = norm_form_rat(
                        params,
                        &(&du - &Rational::from(s.x().clone())),
                        &(&dv - &Rational::from(s.y().clone())),
                    );
                    let (rmax, rmin) = if radii[a_idx] >= radii[b_idx] {
                        (&radii[a_idx], &radii[b_idx])
                    } else {
                        (&radii[b_idx], &radii[a_idx])
                    };
                    if !geometry::apex_reaches(rmax, rmin, &dist_sq, &h) {
                        continue;
                    }
                    let sigma = a_inv.mul(&GroupElement::t_shift(&s)).mul(gens.mat(b_idx));
                    let dec = decompose(&sigma, gens)
                        .expect("triple overlap implies the product decomposes");
                    let rel = RawRelation::Triple {
                        a: a_idx,
                        s: s.clone(),
                        b: b_idx,
                        r: dec.r,
                        c: dec.index,
                        t: dec.t,
                    };
                    assert!(rel.is_valid(gens), "triple relation failed verification");
                    out.push(rel);
                }
            }
            out
        })
        .collect();

    per_a.into_iter().flatten().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::rational;

    fn params(d: i64) -> RingParams {
        RingParams::new(d).unwrap()
    }

    fn qi(p: RingParams, x: i64, y: i64) -> QuadInt {
        QuadInt::new(p, x, y)
    }

    #[test]
    fn cusp_reduction() {
        let p = params(-2);
        // a/1 reduces to 0/1 for any a
        let c = Cusp::new(qi(p, 5, -3), qi(p, 1, 0)).unwrap();
        assert_eq!(c, Cusp::new(qi(p, 0, 0), qi(p, 1, 0)).unwrap());
        // reduction is idempotent and sign-canonical
        let c1 = Cusp::new(qi(p, 1, 0), qi(p, 1, 1)).unwrap();
        let c2 = Cusp::new(qi(p, -1, 0), qi(p, -1, -1)).unwrap();
        assert_eq!(c1, c2);
        let again = Cusp::new(c1.numerator().clone(), c1.denominator().clone()).unwrap();
        assert_eq!(c1, again);
        // non-coprime pairs are rejected
        assert_eq!(
            Cusp::new(qi(p, 0, 1), qi(p, 2, 0)),
            Err(EnumError::NotCoprime)
        );
        assert_eq!(
            Cusp::new(qi(p, 1, 0), qi(p, 0, 0)),
            Err(EnumError::ZeroDenominator)
        );
    }

    #[test]
    fn mat_of_cusp_examples() {
        let p = params(-7);
        let origin = Cusp::new(qi(p, 0, 0), qi(p, 1, 0)).unwrap();
        let m = mat_of_cusp(&origin);
        // [[0, -1], [1, 0]], the standard inversion up to projective sign
        assert!(m.a().is_zero());
        assert_eq!(m.b(), &qi(p, -1, 0));
        assert!(m.c().is_one());
        assert!(m.d().is_zero());

        // determinant 1 over a spread of coprime pairs
        for (ax, ay, cx, cy) in [(1, 0, 1, 1), (0, 1, 2, 1), (3, 2, 4, 1), (1, 1, 5, 2)] {
            if let Ok(cusp) = Cusp::new(qi(p, ax, ay), qi(p, cx, cy)) {
                let m = mat_of_cusp(&cusp);
                assert!(m.det().is_one());
                assert_eq!(m.cusp().unwrap(), cusp);
            }
        }
    }

    #[test]
    fn group_element_basics() {
        let p = params(-11);
        let id = GroupElement::identity(p);
        assert!(id.is_identity());
        // -I normalizes to I
        let neg = GroupElement::new(qi(p, -1, 0), qi(p, 0, 0), qi(p, 0, 0), qi(p, -1, 0)).unwrap();
        assert!(neg.is_identity());

        let b = mat_of_cusp(&Cusp::new(qi(p, 0, 0), qi(p, 1, 0)).unwrap());
        assert!(b.mul(&b.inverse()).is_identity());
        assert!(!b.is_identity());
        // B^2 = -I = I in PSL2
        assert!(b.mul(&b).is_identity());

        let det_zero = GroupElement::new(qi(p, 1, 0), qi(p, 0, 0), qi(p, 0, 0), qi(p, 0, 0));
        assert_eq!(det_zero, Err(EnumError::BadDeterminant));
    }

    #[test]
    fn depth_horizon_values() {
        assert_eq!(depth_horizon(&rational(1, 2)), BigInt::from(4));
        assert_eq!(depth_horizon(&rational(169, 1000)), BigInt::from(35));
        assert_eq!(depth_horizon(&rational(982, 10000)), BigInt::from(103));
    }

    #[test]
    fn generators_above_height_one_vanish() {
        let gens = find_generators(params(-2), &rational(3, 2));
        assert!(gens.is_empty());
    }

    #[test]
    fn generator_counts_small_d() {
        // raw generator counts (cusp matrices + 2 translations) match the
        // known values 10, 10, 18, 34
        for (d, h, expect) in [
            (-2, rational(1, 2), 8),
            (-7, rational(1, 2), 8),
            (-11, rational(422, 1000), 16),
            (-19, rational(3218, 10000), 32),
        ] {
            let gens = find_generators(params(d), &h);
            assert_eq!(gens.len(), expect, "d = {d}");
        }
    }

    #[test]
    fn generator_determinism() {
        let a = find_generators(params(-11), &rational(422, 1000));
        let b = find_generators(params(-11), &rational(422, 1000));
        let pairs_a: Vec<_> = a.iter().map(|(c, m)| (c.clone(), m.clone())).collect();
        let pairs_b: Vec<_> = b.iter().map(|(c, m)| (c.clone(), m.clone())).collect();
        assert_eq!(pairs_a, pairs_b);
        for (cusp, _) in a.iter() {
            assert_eq!(a.cusp(a.position(cusp).unwrap()), cusp);
        }
    }

    #[test]
    fn tang_bound_examples() {
        let p = params(-2);
        // norm(c)=1, h=1/2: (2 + sqrt(3))^2 = 7 + 4 sqrt(3) ~ 13.928
        let bound = tang_bound_sq(&p.one(), &rational(1, 2));
        assert!(bound >= rational(13_928, 1000));
        assert!(bound <= rational(13_930, 1000));
        // h = 1: (1 + sqrt(3))^2 ~ 7.464
        let bound1 = tang_bound_sq(&p.one(), &rational(1, 1));
        assert!(bound1 >= rational(7_464, 1000));
        // monotone: larger denominator norm gives a smaller bound
        let bound2 = tang_bound_sq(&qi(p, 0, 1), &rational(1, 2));
        assert!(bound2 < bound);
    }

    #[test]
    fn decompose_round_trips() {
        let p = params(-2);
        let h = rational(1, 2);
        let gens = find_generators(p, &h);

        // T_s Mat(0/1) T_u returns (s, index of 0/1, u)
        let origin = Cusp::new(qi(p, 0, 0), qi(p, 1, 0)).unwrap();
        let idx = gens.position(&origin).unwrap();
        for (sx, sy, ux, uy) in [(0, 0, 0, 0), (2, -1, 3, 1), (-4, 2, 0, -5)] {
            let s = qi(p, sx, sy);
            let u = qi(p, ux, uy);
            let sigma = GroupElement::t_shift(&s)
                .mul(gens.mat(idx))
                .mul(&GroupElement::t_shift(&u));
            let dec = decompose(&sigma, &gens).unwrap();
            assert_eq!(dec, Decomposition { r: s, index: idx, t: u });
        }

        // a generator decomposes as (0, itself, 0)
        for i in 0..gens.len() {
            let dec = decompose(gens.mat(i), &gens).unwrap();
            assert!(dec.r.is_zero() && dec.t.is_zero() && dec.index == i);
        }

        // inverses of generators decompose with a verified identity
        for i in 0..gens.len() {
            let inv = gens.mat(i).inverse();
            let dec = decompose(&inv, &gens).unwrap();
            let rebuilt = GroupElement::t_shift(&dec.r)
                .mul(gens.mat(dec.index))
                .mul(&GroupElement::t_shift(&dec.t));
            assert_eq!(rebuilt, inv);
        }

        // c = 0 is the caller's branch
        let t1 = GroupElement::t_shift(&p.one());
        assert_eq!(decompose(&t1, &gens), Err(EnumError::FixesInfinity));
    }

    #[test]
    fn relations_verify_small() {
        let p = params(-2);
        let gens = find_generators(p, &rational(1, 2));
        let rels = find_relations(&gens);
        assert!(!rels.is_empty());
        for rel in &rels {
            assert!(rel.is_valid(&gens));
        }
        // one inversion relation per generator
        let inversions = rels
            .iter()
            .filter(|r| matches!(r, RawRelation::Inversion { .. }))
            .count();
        assert_eq!(inversions, gens.len());

        // pairwise balls of every triple actually intersect
        let h = gens.height();
        for rel in &rels {
            if let RawRelation::Triple { a, s, b, .. } = rel {
                let ra = Rational::one()
                    / (rational(2, 1) * h * Rational::from(gens.cusp(*a).denominator().norm()));
                let rb = Rational::one()
                    / (rational(2, 1) * h * Rational::from(gens.cusp(*b).denominator().norm()));
                let pa = gens.cusp(*a).point();
                let pb = gens.cusp(*b).point();
                let dist_sq = norm_form_rat(
                    p,
                    &(&(&pa.u - &pb.u) - &Rational::from(s.x().clone())),
                    &(&(&pa.v - &pb.v) - &Rational::from(s.y().clone())),
                );
                assert!(geometry::spheres_intersect(&ra, &rb, &dist_sq).intersects());
            }
        }
    }

    #[test]
    fn triple_search_matches_exhaustive_tang_scan() {
        // brute force over twice the tang radius finds exactly the same
        // triples as the per-pair pruned search
        for d in [-2i64, -7] {
            let p = params(d);
            let h = rational(1, 2);
            let gens = find_generators(p, &h);
            let fast: std::collections::HashSet<(usize, QuadInt, usize)> = find_relations(&gens)
                .into_iter()
                .filter_map(|rel| match rel {
                    RawRelation::Triple { a, s, b, .. } => Some((a, s, b)),
                    _ => None,
                })
                .collect();

            let mut slow = std::collections::HashSet::new();
            for a_idx in 0..gens.len() {
                let tang = tang_bound_sq(gens.cusp(a_idx).denominator(), &h);
                let wide = rational(4, 1) * &tang; // (2 * Tang)^2
                let bound = rat_floor(&wide);
                let mut shifts = vec![p.zero()];
                for s in ring::enumerate_norm_le(p, &bound) {
                    shifts.push(s.clone());
                    shifts.push(-&s);
                }
                for b_idx in 0..gens.len() {
                    for s in &shifts {
                        if a_idx == b_idx && s.is_zero() {
                            continue;
                        }
                        let pa = gens.cusp(a_idx).point();
                        let pb = gens.cusp(b_idx).point();
                        let dist_sq = norm_form_rat(
                            p,
                            &(&(&pa.u - &pb.u) - &Rational::from(s.x().clone())),
                            &(&(&pa.v - &pb.v) - &Rational::from(s.y().clone())),
                        );
                        let na = Rational::from(gens.cusp(a_idx).denominator().norm());
                        let nb = Rational::from(gens.cusp(b_idx).denominator().norm());
                        let ra = Rational::one() / (rational(2, 1) * &h * na);
                        let rb = Rational::one() / (rational(2, 1) * &h * nb);
                        let (rmax, rmin) = if ra >= rb { (&ra, &rb) } else { (&rb, &ra) };
                        if geometry::apex_reaches(rmax, rmin, &dist_sq, &h) {
                            slow.insert((a_idx, s.clone(), b_idx));
                        }
                    }
                }
            }
            assert_eq!(fast, slow, "d = {d}");
        }
    }
}
