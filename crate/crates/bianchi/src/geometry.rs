//! Exact horoball geometry in the upper half-space model.
//!
//! Points of hyperbolic 3-space are pairs `(z, lambda)` with `z` complex
//! and `lambda > 0`. The main horoball is `V = {lambda >= h}`. An element
//! of `PSL2(O_d)` with nonzero lower-left entry `c` sends `V` to a
//! Euclidean ball tangent to the boundary plane at the cusp `a/c`, of
//! diameter `1/(h*norm(c))`; the ball cuts the horosphere `lambda = h` in
//! a disc of squared radius `1/norm(c) - h^2`.
//!
//! Every predicate here is decided in exact rational arithmetic. Complex
//! numbers in `Q(omega)` are kept as coordinate pairs in the basis
//! `{1, omega}`, where the squared modulus is the norm form
//! `u^2 + t*u*v + n*v^2`. Comparisons involving one square root go through
//! [`sign_with_sqrt`], which isolates and squares with explicit sign
//! analysis.

use crate::enumeration::{Cusp, EnumError, GroupElement};
use crate::ring::{norm_form_rat, QuadInt, Rational, RingParams};
use num::traits::{One, Signed, Zero};
use num::BigInt;
use std::cmp::Ordering;
use std::ops::{Add, Neg, Sub};

/// An element of `Q(omega)` as exact coordinates `u + v*omega`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QOmega {
    pub u: Rational,
    pub v: Rational,
}

impl QOmega {
    pub fn new(u: Rational, v: Rational) -> Self {
        QOmega { u, v }
    }

    pub fn zero() -> Self {
        QOmega {
            u: Rational::zero(),
            v: Rational::zero(),
        }
    }

    pub fn from_quadint(q: &QuadInt) -> Self {
        QOmega {
            u: Rational::from(q.x().clone()),
            v: Rational::from(q.y().clone()),
        }
    }

    /// Squared complex modulus `|u + v*omega|^2`, an exact rational.
    pub fn norm_sq(&self, params: RingParams) -> Rational {
        norm_form_rat(params, &self.u, &self.v)
    }

    /// Complex product in the `{1, omega}` basis, using `w^2 = t*w - n`.
    pub fn mul(&self, rhs: &QOmega, params: RingParams) -> QOmega {
        let t = Rational::from(BigInt::from(params.t()));
        let n = Rational::from(BigInt::from(params.n()));
        let vv = &self.v * &rhs.v;
        QOmega {
            u: &self.u * &rhs.u - &n * &vv,
            v: &self.u * &rhs.v + &self.v * &rhs.u + &t * &vv,
        }
    }

    /// Complex conjugate `(u + t*v) - v*omega`.
    pub fn conj(&self, params: RingParams) -> QOmega {
        let t = Rational::from(BigInt::from(params.t()));
        QOmega {
            u: &self.u + &t * &self.v,
            v: -&self.v,
        }
    }

    pub fn scale(&self, f: &Rational) -> QOmega {
        QOmega {
            u: &self.u * f,
            v: &self.v * f,
        }
    }
}

impl Add for &QOmega {
    type Output = QOmega;
    fn add(self, rhs: &QOmega) -> QOmega {
        QOmega {
            u: &self.u + &rhs.u,
            v: &self.v + &rhs.v,
        }
    }
}

impl Sub for &QOmega {
    type Output = QOmega;
    fn sub(self, rhs: &QOmega) -> QOmega {
        QOmega {
            u: &self.u - &rhs.u,
            v: &self.v - &rhs.v,
        }
    }
}

impl Neg for &QOmega {
    type Output = QOmega;
    fn neg(self) -> QOmega {
        QOmega {
            u: -&self.u,
            v: -&self.v,
        }
    }
}

/// A point `(z, lambda)` of the upper half-space with `z in Q(omega)` and
/// rational `lambda > 0`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Point3 {
    pub z: QOmega,
    pub lambda: Rational,
}

impl Point3 {
    pub fn new(z: QOmega, lambda: Rational) -> Self {
        assert!(lambda.is_positive(), "points must have lambda > 0");
        Point3 { z, lambda }
    }
}

/// A horoball: either the half-space `{lambda > h}` based at infinity, or
/// a Euclidean ball tangent to the boundary plane at a cusp.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Horoball {
    Infinity { height: Rational },
    Finite { basepoint: Cusp, diameter: Rational },
}

/// The disc a horoball image cuts on the horosphere `lambda = h`:
/// center at the cusp, squared radius `1/norm(c) - h^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Circle {
    pub center: QOmega,
    pub radius_sq: Rational,
}

impl Circle {
    pub fn new(center: QOmega, radius_sq: Rational) -> Self {
        assert!(radius_sq.is_positive(), "circles must have positive radius");
        Circle { center, radius_sq }
    }

    /// Closed-disc membership, exact.
    pub fn contains(&self, params: RingParams, p: &QOmega) -> bool {
        (p - &self.center).norm_sq(params) <= self.radius_sq
    }

    pub fn translate(&self, shift: &QOmega) -> Circle {
        Circle {
            center: &self.center + shift,
            radius_sq: self.radius_sq.clone(),
        }
    }
}

/// How two spheres tangent to the same plane meet.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BallContact {
    Disjoint,
    Tangent,
    Overlapping,
}

impl BallContact {
    /// Closed-ball convention: tangency counts as intersecting.
    pub fn intersects(self) -> bool {
        !matches!(self, BallContact::Disjoint)
    }
}

/// The image of `V = {lambda >= h}` under `sigma`: a ball based at the
/// cusp `a/c` with Euclidean diameter `1/(h*norm(c))`. Errors when
/// `c = 0`, i.e. `sigma` fixes infinity and the caller must treat it as a
/// translation.
pub fn horoball_image(sigma: &GroupElement, h: &Rational) -> Result<Horoball, EnumError> {
    assert!(h.is_positive(), "horoball height must be positive");
    if sigma.c().is_zero() {
        return Err(EnumError::FixesInfinity);
    }
    let basepoint = sigma.cusp()?;
    let diameter = Rational::one() / (h * Rational::from(sigma.c().norm()));
    Ok(Horoball::Finite {
        basepoint,
        diameter,
    })
}

/// The disc `sigma(V)` cuts on the horosphere at height `h`, for `sigma`
/// based at `cusp`: squared radius `1/norm(c) - h^2`, or `None` when the
/// ball does not reach above the horosphere (`norm(c) >= 1/h^2`).
pub fn circ(cusp: &Cusp, h: &Rational) -> Option<Circle> {
    assert!(h.is_positive(), "horoball height must be positive");
    let radius_sq = Rational::one() / Rational::from(cusp.denominator().norm()) - h * h;
    if radius_sq.is_positive() {
        Some(Circle {
            center: cusp.point(),
            radius_sq,
        })
    } else {
        None
    }
}

/// Whether two spheres of radii `r`, `s` tangent to the boundary plane at
/// basepoints a squared distance `dist_sq` apart intersect:
/// `dist_sq <= 4*s*r`, tangency at equality.
pub fn spheres_intersect(r: &Rational, s: &Rational, dist_sq: &Rational) -> BallContact {
    assert!(r.is_positive() && s.is_positive());
    assert!(!dist_sq.is_negative());
    let four_sr = Rational::from(BigInt::from(4)) * r * s;
    match dist_sq.cmp(&four_sr) {
        Ordering::Greater => BallContact::Disjoint,
        Ordering::Equal => BallContact::Tangent,
        Ordering::Less => BallContact::Overlapping,
    }
}

/// Whether the highest point of the intersection of two closed balls
/// tangent to the boundary plane reaches height `h`.
///
/// With `r >= s` (the arguments are swapped if not), the apex height is
/// `2s` when `dist_sq <= 4s(r - s)` (the smaller apex lies inside the
/// bigger ball, covering the nested case `dist_sq = 0`), and otherwise
/// `((s + r) + sqrt(4sr - d^2)) * d^2 / (2 (d^2 + (s - r)^2))`. The
/// comparison with `h` is decided exactly by isolating the square root.
pub fn apex_reaches(r: &Rational, s: &Rational, dist_sq: &Rational, h: &Rational) -> bool {
    assert!(r.is_positive() && s.is_positive() && h.is_positive());
    assert!(!dist_sq.is_negative());
    let (r, s) = if r >= s { (r, s) } else { (s, r) };
    let four = Rational::from(BigInt::from(4));
    let two = Rational::from(BigInt::from(2));
    let four_sr = &four * s * r;
    if *dist_sq > four_sr {
        return false;
    }
    if *dist_sq <= &four * s * &(r - s) {
        return &two * s >= *h;
    }
    // apex >= h  <=>  d^2 * sqrt(4sr - d^2) >= 2h(d^2 + (s-r)^2) - (s+r) d^2
    let k = &four_sr - dist_sq;
    let sr_diff = s - r;
    let rhs = &two * h * &(dist_sq + &(&sr_diff * &sr_diff)) - &(&(s + r) * dist_sq);
    sign_with_sqrt(&-&rhs, dist_sq, &k) != Ordering::Less
}

/// The sign of `p + q*sqrt(k)` for rationals with `k >= 0`, by explicit
/// case analysis: no floating point.
pub fn sign_with_sqrt(p: &Rational, q: &Rational, k: &Rational) -> Ordering {
    assert!(!k.is_negative(), "sign_with_sqrt needs k >= 0");
    if q.is_zero() || k.is_zero() {
        return p.cmp(&Rational::zero());
    }
    if q.is_positive() {
        if !p.is_negative() {
            Ordering::Greater
        } else {
            // p < 0: p + q*sqrt(k) >= 0  <=>  q^2 k >= p^2
            (q * q * k).cmp(&(p * p))
        }
    } else {
        sign_with_sqrt(&-p, &-q, k).reverse()
    }
}

/// The isometry of the upper half-space induced by a determinant-one
/// matrix: with `w = c*z + d`,
///
/// ```text
/// sigma(z, lambda) = ( ((a*z + b)*conj(w) + a*conj(c)*lambda^2) / den,
///                      lambda / den ),          den = |w|^2 + lambda^2 |c|^2
/// ```
///
/// This is the standard extension of the Mobius action `z -> (az+b)/(cz+d)`
/// along vertical geodesics; translations `T_s` move `(z, lambda)` to
/// `(z + s, lambda)` and the cusp-zero inversion fixes `(0, 1)`, which the
/// tests check against the horoball predictions.
pub fn mobius_apply(sigma: &GroupElement, p: &Point3) -> Point3 {
    let params = sigma.params();
    let a = QOmega::from_quadint(sigma.a());
    let b = QOmega::from_quadint(sigma.b());
    let c = QOmega::from_quadint(sigma.c());
    let d = QOmega::from_quadint(sigma.d());
    let lambda_sq = &p.lambda * &p.lambda;

    let w = &c.mul(&p.z, params) + &d;
    let den = w.norm_sq(params) + &lambda_sq * Rational::from(sigma.c().norm());
    assert!(den.is_positive());

    let num = &(&a.mul(&p.z, params) + &b).mul(&w.conj(params), params)
        + &a.mul(&c.conj(params), params).scale(&lambda_sq);
    let inv_den = Rational::one() / den;
    Point3 {
        z: num.scale(&inv_den),
        lambda: &p.lambda * &inv_den,
    }
}

/// The exact argument of `arccosh` in the hyperbolic distance formula:
/// `1 + (|z1 - z2|^2 + (lambda1 - lambda2)^2) / (2 lambda1 lambda2)`.
/// `arccosh` is monotone, so distance comparisons use this value directly.
pub fn hyperbolic_distance_arg(params: RingParams, p: &Point3, q: &Point3) -> Rational {
    let dz = (&p.z - &q.z).norm_sq(params);
    let dl = &p.lambda - &q.lambda;
    let two = Rational::from(BigInt::from(2));
    Rational::one() + (dz + &dl * &dl) / (two * &p.lambda * &q.lambda)
}
