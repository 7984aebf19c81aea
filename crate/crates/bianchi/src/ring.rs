//! Exact arithmetic in the imaginary quadratic orders `Z[omega]`.
//!
//! For a negative square-free `d`, the ring of integers of `Q(sqrt(d))` is
//! `Z[omega]` with `omega = sqrt(d)` when `d = 2, 3 (mod 4)` and
//! `omega = (1 + sqrt(d))/2` when `d = 1 (mod 4)`. Writing
//! `t = omega + conj(omega)` and `n = omega * conj(omega)`, every element is
//! an integer pair `x + y*omega`, multiplication uses
//! `omega^2 = t*omega - n`, and `norm(x + y*omega) = x^2 + t*x*y + n*y^2`.
//!
//! All coordinates are arbitrary-precision integers: nothing here can
//! overflow, and every comparison made elsewhere in the crate reduces to
//! exact integer or rational arithmetic on these values.

use num::bigint::BigInt;
use num::integer::Integer;
use num::rational::BigRational;
use num::traits::{One, Signed, Zero};
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};
use thiserror::Error;

/// Exact rational scalar used for heights, radii and squared distances.
pub type Rational = BigRational;

/// The seven discriminants the enumeration pipeline accepts: class number
/// one and no units beyond `±1`.
pub const PIPELINE_D: [i64; 7] = [-2, -7, -11, -19, -43, -67, -163];

/// All nine class-number-one discriminants. `d = -1` and `d = -3` have
/// extra units (`i`, resp. a sixth root of unity), so the pipeline rejects
/// them, but matrix arithmetic and word verification remain valid.
pub const CLASS_NUMBER_ONE_D: [i64; 9] = [-1, -2, -3, -7, -11, -19, -43, -67, -163];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("unsupported discriminant d = {0}; expected one of -1,-2,-3,-7,-11,-19,-43,-67,-163")]
    UnsupportedD(i64),
    #[error("d = {0} rejected: O_{0} has non-trivial units, which the enumeration pipeline cannot handle")]
    NonTrivialUnits(i64),
    #[error("division by zero in O_d")]
    DivisionByZero,
}

/// The data defining one ring `Z[omega]`: the discriminant `d` together
/// with the trace `t = omega + conj(omega)` and norm `n = omega*conj(omega)`
/// of `omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RingParams {
    d: i64,
    t: i64,
    n: i64,
}

impl RingParams {
    /// Ring parameters for a pipeline-supported `d` (units are exactly `±1`).
    pub fn new(d: i64) -> Result<Self, RingError> {
        if d == -1 || d == -3 {
            return Err(RingError::NonTrivialUnits(d));
        }
        if !PIPELINE_D.contains(&d) {
            return Err(RingError::UnsupportedD(d));
        }
        Ok(Self::raw(d))
    }

    /// Ring parameters for any class-number-one `d`, including `-1` and `-3`.
    ///
    /// Matrix products and relator evaluation are exact for these two rings
    /// as well; only the horoball enumeration requires trivial units, which
    /// is why [`RingParams::new`] rejects them.
    pub fn for_verification(d: i64) -> Result<Self, RingError> {
        if !CLASS_NUMBER_ONE_D.contains(&d) {
            return Err(RingError::UnsupportedD(d));
        }
        Ok(Self::raw(d))
    }

    fn raw(d: i64) -> Self {
        let t = if d.rem_euclid(4) == 1 { 1 } else { 0 };
        let n = if t == 1 { (1 - d) / 4 } else { -d };
        RingParams { d, t, n }
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    /// `omega + conj(omega)`: 0 when `d = 2,3 (mod 4)`, 1 when `d = 1 (mod 4)`.
    pub fn t(&self) -> i64 {
        self.t
    }

    /// `omega * conj(omega)`: `-d`, resp. `(1 - d)/4`.
    pub fn n(&self) -> i64 {
        self.n
    }

    /// True exactly when the unit group is `{±1}` (all pipeline rings).
    pub fn has_trivial_units(&self) -> bool {
        self.n > 1
    }

    /// `4n - t^2 = -disc > 0`; the norm form is
    /// `((2x + ty)^2 + (4n - t^2) y^2) / 4`.
    pub fn form_discriminant(&self) -> i64 {
        4 * self.n - self.t * self.t
    }

    /// `norm(1 + omega) = 1 + t + n`, the squared diameter of the
    /// fundamental parallelogram of `C / O_d`.
    pub fn one_plus_omega_norm(&self) -> i64 {
        1 + self.t + self.n
    }

    pub fn zero(&self) -> QuadInt {
        QuadInt::new(*self, 0, 0)
    }

    pub fn one(&self) -> QuadInt {
        QuadInt::new(*self, 1, 0)
    }

    pub fn omega(&self) -> QuadInt {
        QuadInt::new(*self, 0, 1)
    }
}

/// An element `x + y*omega` of `O_d`, with exact integer coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct QuadInt {
    x: BigInt,
    y: BigInt,
    params: RingParams,
}

impl fmt::Debug for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}w | d={})", self.x, self.y, self.params.d)
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.y.is_zero() {
            return write!(f, "{}", self.x);
        }
        if self.x.is_zero() {
            if self.y.is_one() {
                return write!(f, "w");
            }
            return write!(f, "{}w", self.y);
        }
        if self.y.is_positive() {
            if self.y.is_one() {
                write!(f, "{}+w", self.x)
            } else {
                write!(f, "{}+{}w", self.x, self.y)
            }
        } else if self.y == BigInt::from(-1) {
            write!(f, "{}-w", self.x)
        } else {
            write!(f, "{}{}w", self.x, self.y)
        }
    }
}

impl QuadInt {
    pub fn new(params: RingParams, x: impl Into<BigInt>, y: impl Into<BigInt>) -> Self {
        QuadInt {
            x: x.into(),
            y: y.into(),
            params,
        }
    }

    pub fn from_int(params: RingParams, x: impl Into<BigInt>) -> Self {
        Self::new(params, x, 0)
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    pub fn x(&self) -> &BigInt {
        &self.x
    }

    pub fn y(&self) -> &BigInt {
        &self.y
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.y.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.x.is_one() && self.y.is_zero()
    }

    /// `x^2 + t*x*y + n*y^2 = |x + y*omega|^2`; non-negative, zero only at 0.
    pub fn norm(&self) -> BigInt {
        let t = BigInt::from(self.params.t);
        let n = BigInt::from(self.params.n);
        &self.x * &self.x + t * &self.x * &self.y + n * &self.y * &self.y
    }

    /// Complex conjugate: `conj(x + y*omega) = (x + t*y) - y*omega`.
    pub fn conj(&self) -> QuadInt {
        QuadInt {
            x: &self.x + BigInt::from(self.params.t) * &self.y,
            y: -&self.y,
            params: self.params,
        }
    }

    /// Sign-canonical representative of `{v, -v}`: `y > 0`, or `y = 0, x > 0`.
    pub fn is_canonical_positive(&self) -> bool {
        self.y.is_positive() || (self.y.is_zero() && self.x.is_positive())
    }

    pub fn canonical_sign(&self) -> QuadInt {
        if self.is_zero() || self.is_canonical_positive() {
            self.clone()
        } else {
            -self
        }
    }

    fn assert_same_ring(&self, other: &QuadInt) {
        assert_eq!(
            self.params, other.params,
            "mixed O_d arithmetic: d = {} vs d = {}",
            self.params.d, other.params.d
        );
    }
}

impl Add for &QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &QuadInt) -> QuadInt {
        self.assert_same_ring(rhs);
        QuadInt {
            x: &self.x + &rhs.x,
            y: &self.y + &rhs.y,
            params: self.params,
        }
    }
}

impl Sub for &QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &QuadInt) -> QuadInt {
        self.assert_same_ring(rhs);
        QuadInt {
            x: &self.x - &rhs.x,
            y: &self.y - &rhs.y,
            params: self.params,
        }
    }
}

impl Mul for &QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &QuadInt) -> QuadInt {
        self.assert_same_ring(rhs);
        // (x1 + y1 w)(x2 + y2 w) with w^2 = t w - n.
        let t = BigInt::from(self.params.t);
        let n = BigInt::from(self.params.n);
        let yy = &self.y * &rhs.y;
        QuadInt {
            x: &self.x * &rhs.x - n * &yy,
            y: &self.x * &rhs.y + &self.y * &rhs.x + t * &yy,
            params: self.params,
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt {
            x: -&self.x,
            y: -&self.y,
            params: self.params,
        }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        &self + &rhs
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        &self - &rhs
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        &self * &rhs
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// Coordinates of `a * conj(c)`, so that `a/c = (e1 + e2*omega) / norm(c)`.
fn times_conj(a: &QuadInt, c: &QuadInt) -> (BigInt, BigInt) {
    a.assert_same_ring(c);
    let t = BigInt::from(a.params.t);
    let n = BigInt::from(a.params.n);
    let e1 = a.x() * c.x() + &t * a.x() * c.y() + &n * a.y() * c.y();
    let e2 = c.x() * a.y() - a.x() * c.y();
    (e1, e2)
}

/// Division with remainder in the fundamental domain: `a = q*c + r` with
/// `r/c = u + v*omega`, `0 <= u, v < 1`.
///
/// Writing `a * conj(c) / norm(c) = x' + y'*omega`, the quotient is
/// `q = floor(x') + floor(y')*omega` and `r = a - q*c`.
pub fn floor_div(a: &QuadInt, c: &QuadInt) -> Result<(QuadInt, QuadInt), RingError> {
    if c.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    let norm = c.norm();
    let (e1, e2) = times_conj(a, c);
    let qx = e1.div_floor(&norm);
    let qy = e2.div_floor(&norm);
    let q = QuadInt::new(a.params, qx, qy);
    let r = a - &(&q * c);
    Ok((q, r))
}

/// True when `c` divides `a` exactly.
pub fn divides(c: &QuadInt, a: &QuadInt) -> bool {
    match floor_div(a, c) {
        Ok((_, r)) => r.is_zero(),
        Err(_) => false,
    }
}

/// `a / c` when the division is exact.
pub fn exact_div(a: &QuadInt, c: &QuadInt) -> Option<QuadInt> {
    let (q, r) = floor_div(a, c).ok()?;
    r.is_zero().then_some(q)
}

/// True when `a` and `b` are congruent modulo `c`.
pub fn congruent(a: &QuadInt, b: &QuadInt, c: &QuadInt) -> bool {
    divides(c, &(a - b))
}

type ResidueKey = (i64, BigInt, BigInt);

fn residue_cache() -> &'static Mutex<HashMap<ResidueKey, Arc<Vec<QuadInt>>>> {
    static CACHE: OnceLock<Mutex<HashMap<ResidueKey, Arc<Vec<QuadInt>>>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// The complete set of residue representatives `{a : a/c in D}` for
/// `O_d / c O_d`, where `D = {u + v*omega : 0 <= u, v < 1}`.
///
/// Exactly `norm(c)` representatives, sorted by `(x, y)`. Results are
/// memoized per denominator; the cache is shared across threads.
pub fn residue_reps(c: &QuadInt) -> Result<Arc<Vec<QuadInt>>, RingError> {
    if c.is_zero() {
        return Err(RingError::DivisionByZero);
    }
    let key = (c.params.d, c.x.clone(), c.y.clone());
    if let Some(hit) = residue_cache().lock().unwrap().get(&key) {
        return Ok(Arc::clone(hit));
    }

    let norm = c.norm();
    let t = BigInt::from(c.params.t);
    let n = BigInt::from(c.params.n);
    // a/c in D means a lies in the parallelogram c*D; scan its integer
    // bounding box and keep points with both coordinates of a*conj(c)
    // in [0, norm).
    let x_corners = [
        BigInt::zero(),
        c.x.clone(),
        -&n * &c.y,
        &c.x - &n * &c.y,
    ];
    let y_corners = [
        BigInt::zero(),
        c.y.clone(),
        &c.x + &t * &c.y,
        &c.y + &c.x + &t * &c.y,
    ];
    let x_min = x_corners.iter().min().unwrap().clone();
    let x_max = x_corners.iter().max().unwrap().clone();
    let y_min = y_corners.iter().min().unwrap().clone();
    let y_max = y_corners.iter().max().unwrap().clone();

    let mut reps = Vec::new();
    let mut ax = x_min.clone();
    while ax <= x_max {
        let mut ay = y_min.clone();
        while ay <= y_max {
            let a = QuadInt::new(c.params, ax.clone(), ay.clone());
            let (e1, e2) = times_conj(&a, c);
            if !e1.is_negative() && e1 < norm && !e2.is_negative() && e2 < norm {
                reps.push(a);
            }
            ay += 1;
        }
        ax += 1;
    }
    assert_eq!(
        BigInt::from(reps.len()),
        norm,
        "residue system for {c:?} has wrong cardinality"
    );
    reps.sort_by(|p, q| (&p.x, &p.y).cmp(&(&q.x, &q.y)));
    let reps = Arc::new(reps);
    residue_cache()
        .lock()
        .unwrap()
        .insert(key, Arc::clone(&reps));
    Ok(reps)
}

/// The canonical residue `d0` with `a * d0 = 1 (mod c)`, or `None` when `a`
/// and `c` share a factor. Solvability of this congruence is what
/// "coprime" means throughout the crate; the search is an exhaustive scan
/// of the `norm(c)` residues, which stays cheap at pipeline depths.
pub fn inverse_mod(a: &QuadInt, c: &QuadInt) -> Result<Option<QuadInt>, RingError> {
    let reps = residue_reps(c)?;
    let one = c.params.one();
    for r in reps.iter() {
        let prod = a * r;
        if divides(c, &(&prod - &one)) {
            return Ok(Some(r.clone()));
        }
    }
    Ok(None)
}

/// All nonzero `c` with `norm(c) <= bound`, one per `{c, -c}` pair
/// (the representative with `y > 0`, or `y = 0, x > 0`), sorted by
/// `(norm, x, y)`.
pub fn enumerate_norm_le(params: RingParams, bound: &BigInt) -> Vec<QuadInt> {
    let mut out = Vec::new();
    if bound.is_negative() {
        return out;
    }
    let four_bound = BigInt::from(4) * bound;
    let disc = BigInt::from(params.form_discriminant());
    let t = BigInt::from(params.t);

    // y = 0, x > 0: norms are x^2.
    let x_max = bound.sqrt();
    let mut x = BigInt::one();
    while x <= x_max {
        out.push(QuadInt::new(params, x.clone(), 0));
        x += 1;
    }

    // y > 0: (2x + ty)^2 <= 4*bound - (4n - t^2) y^2.
    let y_max = four_bound.div_floor(&disc).sqrt();
    let mut y = BigInt::one();
    while y <= y_max {
        let m = &four_bound - &disc * &y * &y;
        debug_assert!(!m.is_negative());
        let s = m.sqrt();
        let lo = (-&s - &t * &y).div_ceil(&BigInt::from(2));
        let hi = (&s - &t * &y).div_floor(&BigInt::from(2));
        let mut x = lo;
        while x <= hi {
            let v = QuadInt::new(params, x.clone(), y.clone());
            debug_assert!(v.norm() <= *bound);
            out.push(v);
            x += 1;
        }
        y += 1;
    }

    out.sort_by(|p, q| (p.norm(), &p.x, &p.y).cmp(&(q.norm(), &q.x, &q.y)));
    out
}

/// All `s in O_d` with `norm(s - center) <= radius_sq`, for a rational
/// center `(cu, cv)` in the `{1, omega}` basis. Ascending `(y, x)` order.
pub fn lattice_points_in_disc(
    params: RingParams,
    cu: &Rational,
    cv: &Rational,
    radius_sq: &Rational,
) -> Vec<QuadInt> {
    let mut out = Vec::new();
    if radius_sq.is_negative() {
        return out;
    }
    let disc = Rational::from(BigInt::from(params.form_discriminant()));
    let t_half = Rational::new(BigInt::from(params.t), BigInt::from(2));
    let quarter_disc = &disc / Rational::from(BigInt::from(4));

    // (sv - cv)^2 * (4n - t^2)/4 <= radius_sq bounds the omega coordinate.
    let ev = sqrt_upper_bound(&(radius_sq / &quarter_disc), 12);
    let sv_lo = rat_ceil(&(cv - &ev));
    let sv_hi = rat_floor(&(cv + &ev));
    let mut sv = sv_lo;
    while sv <= sv_hi {
        let dv = Rational::from(sv.clone()) - cv;
        let m = radius_sq - &(&quarter_disc * &dv * &dv);
        if !m.is_negative() {
            // (su - cu + t*dv/2)^2 <= m.
            let center = cu - &(&t_half * &dv);
            let eu = sqrt_upper_bound(&m, 12);
            let su_lo = rat_ceil(&(&center - &eu));
            let su_hi = rat_floor(&(&center + &eu));
            let mut su = su_lo;
            while su <= su_hi {
                let du = Rational::from(su.clone()) - cu;
                if norm_form_rat(params, &du, &dv) <= *radius_sq {
                    out.push(QuadInt::new(params, su.clone(), sv.clone()));
                }
                su += 1;
            }
        }
        sv += 1;
    }
    out
}

/// The norm form `u^2 + t*u*v + n*v^2` on rational coordinates: the exact
/// squared Euclidean distance from 0 of the complex number `u + v*omega`.
pub fn norm_form_rat(params: RingParams, u: &Rational, v: &Rational) -> Rational {
    let t = Rational::from(BigInt::from(params.t));
    let n = Rational::from(BigInt::from(params.n));
    u * u + t * u * v + n * v * v
}

/// Shorthand rational constructor.
pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

pub fn rat_floor(r: &Rational) -> BigInt {
    r.floor().to_integer()
}

pub fn rat_ceil(r: &Rational) -> BigInt {
    r.ceil().to_integer()
}

/// Largest integer `m >= 0` with `m^2 <= x` (requires `x >= 0`).
pub fn floor_sqrt_rat(x: &Rational) -> BigInt {
    assert!(!x.is_negative(), "floor_sqrt_rat of negative value");
    let mut m = rat_floor(x).sqrt();
    while Rational::from(&m * &m) > *x {
        m -= 1;
    }
    loop {
        let next = &m + 1;
        if Rational::from(&next * &next) <= *x {
            m = next;
        } else {
            break;
        }
    }
    m
}

/// A rational upper bound on `sqrt(x)` accurate to `10^-digits`.
pub fn sqrt_upper_bound(x: &Rational, digits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt_upper_bound of negative value");
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Rational::from(&scale * &scale);
    let root = floor_sqrt_rat(&scaled) + 1;
    Rational::new(root, scale)
}

/// A rational lower bound on `sqrt(x)` accurate to `10^-digits`.
pub fn sqrt_lower_bound(x: &Rational, digits: u32) -> Rational {
    assert!(!x.is_negative(), "sqrt_lower_bound of negative value");
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = x * Rational::from(&scale * &scale);
    let root = floor_sqrt_rat(&scaled);
    Rational::new(root, scale)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn params(d: i64) -> RingParams {
        RingParams::new(d).unwrap()
    }

    /// f64 complex model of `x + y*omega`, for cross-checking the exact ops.
    fn to_complex(v: &QuadInt) -> (f64, f64) {
        let d = v.params().d() as f64;
        let (wr, wi) = if v.params().t() == 1 {
            (0.5, (-d).sqrt() / 2.0)
        } else {
            (0.0, (-d).sqrt())
        };
        let x = v.x().to_string().parse::<f64>().unwrap();
        let y = v.y().to_string().parse::<f64>().unwrap();
        (x + y * wr, y * wi)
    }

    #[test]
    fn ring_params_cases() {
        let p = params(-2);
        assert_eq!((p.t(), p.n()), (0, 2));
        let p = params(-7);
        assert_eq!((p.t(), p.n()), (1, 2));
        let p = params(-163);
        assert_eq!((p.t(), p.n()), (1, 41));
        for d in PIPELINE_D {
            let p = params(d);
            assert!(p.has_trivial_units());
            // omega's trace and norm agree with the complex model.
            let omega = p.omega();
            let (re, im) = to_complex(&omega);
            assert!((2.0 * re - p.t() as f64).abs() < 1e-9);
            assert!((re * re + im * im - p.n() as f64).abs() < 1e-9);
        }
    }

    #[test]
    fn ring_params_rejects() {
        assert_eq!(RingParams::new(-1), Err(RingError::NonTrivialUnits(-1)));
        assert_eq!(RingParams::new(-3), Err(RingError::NonTrivialUnits(-3)));
        assert_eq!(RingParams::new(-5), Err(RingError::UnsupportedD(-5)));
        assert_eq!(RingParams::new(2), Err(RingError::UnsupportedD(2)));
        assert!(RingParams::for_verification(-1).is_ok());
        assert!(RingParams::for_verification(-3).is_ok());
        assert!(RingParams::for_verification(-6).is_err());
    }

    #[test]
    fn omega_squared() {
        // w^2 = w - 2 for d = -7.
        let p = params(-7);
        let w = p.omega();
        assert_eq!(&w * &w, QuadInt::new(p, -2, 1));
        // identity
        let a = QuadInt::new(p, 3, -4);
        assert_eq!(&a * &p.one(), a);
    }

    #[test]
    fn norm_and_conj() {
        let p = params(-43);
        let a = QuadInt::new(p, 1, 1);
        assert_eq!(a.norm(), BigInt::from(13));
        assert_eq!(p.zero().norm(), BigInt::zero());
        let b = QuadInt::new(p, -5, 7);
        assert_eq!(b.conj().conj(), b);
        // norm = a * conj(a), with zero omega part
        let prod = &b * &b.conj();
        assert_eq!(prod.x(), &b.norm());
        assert!(prod.y().is_zero());
    }

    #[test]
    fn floor_div_examples() {
        let p = params(-2);
        let a = QuadInt::from_int(p, 3);
        let c = QuadInt::new(p, 1, 1);
        let (q, r) = floor_div(&a, &c).unwrap();
        assert_eq!(q, QuadInt::new(p, 1, -1));
        assert!(r.is_zero());

        let any = QuadInt::new(p, 4, -7);
        let (q, r) = floor_div(&p.zero(), &any).unwrap();
        assert!(q.is_zero() && r.is_zero());
        let (q, r) = floor_div(&any, &any).unwrap();
        assert!(q.is_one() && r.is_zero());

        assert_eq!(
            floor_div(&a, &p.zero()),
            Err(RingError::DivisionByZero)
        );
    }

    #[test]
    fn residue_reps_examples() {
        let p = params(-2);
        let one = p.one();
        assert_eq!(residue_reps(&one).unwrap().len(), 1);

        let two = QuadInt::from_int(p, 2);
        let reps = residue_reps(&two).unwrap();
        assert_eq!(reps.len(), 4);
        // one representative per class of {0, 1, w, 1+w}
        for probe in [
            p.zero(),
            p.one(),
            p.omega(),
            &p.one() + &p.omega(),
        ] {
            let hits = reps
                .iter()
                .filter(|r| congruent(r, &probe, &two))
                .count();
            assert_eq!(hits, 1);
        }

        let c = QuadInt::new(p, 1, 1);
        assert_eq!(residue_reps(&c).unwrap().len(), 3);
    }

    #[test]
    fn inverse_mod_examples() {
        let p7 = params(-7);
        let two = QuadInt::from_int(p7, 2);
        // w | 2 in O_-7 since norm(w) = 2, so no inverse.
        assert_eq!(inverse_mod(&p7.omega(), &two).unwrap(), None);

        let p2 = params(-2);
        let two2 = QuadInt::from_int(p2, 2);
        let a = &p2.one() + &p2.omega();
        let inv = inverse_mod(&a, &two2).unwrap().expect("1+w coprime to 2");
        assert!(congruent(&(&a * &inv), &p2.one(), &two2));

        // a = 1 gives the canonical representative of 1.
        let c = QuadInt::new(p2, 1, 2);
        let inv = inverse_mod(&p2.one(), &c).unwrap().unwrap();
        assert!(congruent(&inv, &p2.one(), &c));
        assert!(residue_reps(&c).unwrap().contains(&inv));
    }

    #[test]
    fn enumerate_examples() {
        let p7 = params(-7);
        assert!(enumerate_norm_le(p7, &BigInt::zero()).is_empty());
        let list = enumerate_norm_le(p7, &BigInt::from(2));
        let display: Vec<String> = list.iter().map(|v| v.to_string()).collect();
        assert_eq!(display, vec!["1", "-1+w", "w"]);

        let p2 = params(-2);
        let list = enumerate_norm_le(p2, &BigInt::from(4));
        let norms: Vec<i64> = list
            .iter()
            .map(|v| i64::try_from(&v.norm()).unwrap())
            .collect();
        assert_eq!(norms, vec![1, 2, 3, 3, 4]);
        for v in &list {
            assert!(v.is_canonical_positive());
        }
    }

    #[test]
    fn lattice_points_in_disc_small() {
        let p = params(-2);
        // disc of squared radius 2 about 0: 0, ±1, ±w
        let pts = lattice_points_in_disc(p, &rational(0, 1), &rational(0, 1), &rational(2, 1));
        assert_eq!(pts.len(), 5);
        for s in &pts {
            assert!(s.norm() <= BigInt::from(2));
        }
    }

    #[test]
    fn sqrt_helpers() {
        let x = rational(2, 1);
        let lo = sqrt_lower_bound(&x, 12);
        let hi = sqrt_upper_bound(&x, 12);
        assert!(&lo * &lo <= x && x <= &hi * &hi);
        assert!(&hi - &lo <= rational(1, 100_000_000_000));
        assert_eq!(floor_sqrt_rat(&rational(8, 2)), BigInt::from(2));
        assert_eq!(floor_sqrt_rat(&rational(7, 2)), BigInt::from(1));
    }

    #[test]
    #[should_panic(expected = "mixed O_d arithmetic")]
    fn mixed_rings_panic() {
        let a = params(-2).one();
        let b = params(-7).one();
        let _ = &a + &b;
    }

    fn quadint_strategy(d: i64) -> impl Strategy<Value = QuadInt> {
        (-40i64..=40, -40i64..=40).prop_map(move |(x, y)| QuadInt::new(params(d), x, y))
    }

    fn any_pipeline_d() -> impl Strategy<Value = i64> {
        proptest::sample::select(PIPELINE_D.to_vec())
    }

    proptest! {
        #[test]
        fn norm_is_multiplicative(d in any_pipeline_d(), xy in (-30i64..=30, -30i64..=30, -30i64..=30, -30i64..=30)) {
            let p = params(d);
            let a = QuadInt::new(p, xy.0, xy.1);
            let b = QuadInt::new(p, xy.2, xy.3);
            prop_assert_eq!((&a * &b).norm(), a.norm() * b.norm());
        }

        #[test]
        fn mul_matches_complex_model(d in any_pipeline_d(), xy in (-20i64..=20, -20i64..=20, -20i64..=20, -20i64..=20)) {
            let p = params(d);
            let a = QuadInt::new(p, xy.0, xy.1);
            let b = QuadInt::new(p, xy.2, xy.3);
            let exact = to_complex(&(&a * &b));
            let (ar, ai) = to_complex(&a);
            let (br, bi) = to_complex(&b);
            let float = (ar * br - ai * bi, ar * bi + ai * br);
            prop_assert!((exact.0 - float.0).abs() < 1e-6);
            prop_assert!((exact.1 - float.1).abs() < 1e-6);
        }

        #[test]
        fn floor_div_lands_in_domain(d in any_pipeline_d(), a in (-40i64..=40, -40i64..=40), c in (-40i64..=40, -40i64..=40)) {
            let p = params(d);
            let a = QuadInt::new(p, a.0, a.1);
            let c = QuadInt::new(p, c.0, c.1);
            prop_assume!(!c.is_zero());
            let (q, r) = floor_div(&a, &c).unwrap();
            prop_assert_eq!(&(&q * &c) + &r, a);
            // r/c = u + v*omega with 0 <= u, v < 1
            let norm = c.norm();
            let (e1, e2) = super::times_conj(&r, &c);
            prop_assert!(!e1.is_negative() && e1 < norm);
            prop_assert!(!e2.is_negative() && e2 < norm);
        }

        #[test]
        fn residues_partition(d in any_pipeline_d(), c in (-7i64..=7, -7i64..=7), probe in (-40i64..=40, -40i64..=40)) {
            let p = params(d);
            let c = QuadInt::new(p, c.0, c.1);
            prop_assume!(!c.is_zero());
            let reps = residue_reps(&c).unwrap();
            prop_assert_eq!(BigInt::from(reps.len()), c.norm());
            let probe = QuadInt::new(p, probe.0, probe.1);
            let hits = reps.iter().filter(|r| congruent(r, &probe, &c)).count();
            prop_assert_eq!(hits, 1);
        }

        #[test]
        fn enumerate_matches_naive_scan(d in any_pipeline_d(), bound in 0i64..=200) {
            let p = params(d);
            let bound = BigInt::from(bound);
            let fast = enumerate_norm_le(p, &bound);
            let mut naive = Vec::new();
            for x in -200i64..=200 {
                for y in 0i64..=200 {
                    if y == 0 && x <= 0 {
                        continue;
                    }
                    let v = QuadInt::new(p, x, y);
                    if v.norm() <= bound {
                        naive.push(v);
                    }
                }
            }
            naive.sort_by(|a, b| (a.norm(), a.x().clone(), a.y().clone()).cmp(&(b.norm(), b.x().clone(), b.y().clone())));
            prop_assert_eq!(fast, naive);
        }
    }
}
