//! The algebraic Mukai lattice of a K3 surface with `Pic = Z·H`, `H² = 2d`.
//!
//! A class is a triple `(r, c, s)` standing for `(r, c·H, s)`. Components are
//! rational so that functionals such as `(0, H/k, 1 - n)` can be written down;
//! [`MukaiClass::is_integral`] separates genuine Mukai vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::{common_denominator, Rat};

/// A K3 surface of Picard rank one, recorded only through `d = H²/2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceData {
    d: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SurfaceData {
    pub fn new(d: i64) -> Result<Self> {
        if d < 1 {
            return Err(Error::InvalidSurface(d));
        }
        Ok(SurfaceData { d, label: None })
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn d_rat(&self) -> Rat {
        Rat::from_int(self.d)
    }

    /// `H² = 2d`.
    pub fn h_squared(&self) -> Rat {
        Rat::from_int(2 * self.d)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MukaiClass {
    pub r: Rat,
    pub c: Rat,
    pub s: Rat,
}

impl MukaiClass {
    pub fn new(r: impl Into<Rat>, c: impl Into<Rat>, s: impl Into<Rat>) -> Self {
        MukaiClass {
            r: r.into(),
            c: c.into(),
            s: s.into(),
        }
    }

    pub fn zero() -> Self {
        MukaiClass::new(0, 0, 0)
    }

    /// `(1, 0, 1 - n)`, the class of an ideal sheaf of `n` points.
    pub fn ideal_sheaf(n: i64) -> Self {
        MukaiClass::new(1, 0, 1 - n)
    }

    /// `(0, 0, 1)`, the class of a skyscraper sheaf.
    pub fn point() -> Self {
        MukaiClass::new(0, 0, 1)
    }

    /// `v(O(mH)) = (1, m, d·m² + 1)`.
    pub fn line_bundle(m: i64, x: &SurfaceData) -> Self {
        MukaiClass::new(1, m, x.d() * m * m + 1)
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.c.is_zero() && self.s.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.r.is_integer() && self.c.is_integer() && self.s.is_integer()
    }

    /// `2d·c² - 2·r·s`.
    pub fn square(&self, x: &SurfaceData) -> Rat {
        mukai_pairing(self, self, x)
    }

    pub fn scale(&self, k: &Rat) -> Self {
        MukaiClass {
            r: &self.r * k,
            c: &self.c * k,
            s: &self.s * k,
        }
    }

    pub fn components(&self) -> [&Rat; 3] {
        [&self.r, &self.c, &self.s]
    }

    /// True when `self = λ·other` or `other = λ·self` for some rational λ.
    pub fn is_proportional_to(&self, other: &MukaiClass) -> bool {
        let a = self.components();
        let b = other.components();
        (0..3).all(|i| (i + 1..3).all(|j| a[i] * b[j] == a[j] * b[i]))
    }

    /// Gcd of the absolute values of the nonzero components of an integral class.
    fn content(&self) -> BigInt {
        self.components()
            .iter()
            .filter(|q| !q.is_zero())
            .fold(BigInt::zero(), |g, q| g.gcd(&q.numer().abs()))
    }

    /// Primitive integral generator of the ray `R_{>0}·self`.
    ///
    /// Denominators are cleared first, so rational classes are accepted.
    pub fn primitive(&self) -> Result<MukaiClass> {
        if self.is_zero() {
            return Err(Error::ZeroVector);
        }
        let denom = Rat::from_bigint(common_denominator(self.components()));
        let cleared = self.scale(&denom);
        let g = Rat::from_bigint(cleared.content());
        Ok(cleared.scale(&g.recip()))
    }

    /// Whether an integral class is primitive. Rational classes never are.
    pub fn is_primitive(&self) -> bool {
        self.is_integral() && !self.is_zero() && self.content().is_one()
    }

    /// True when both classes span the same open ray.
    pub fn same_ray(&self, other: &MukaiClass) -> bool {
        match (self.primitive(), other.primitive()) {
            (Ok(a), Ok(b)) => a == b,
            _ => false,
        }
    }
}

impl fmt::Display for MukaiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r, self.c, self.s)
    }
}

impl fmt::Debug for MukaiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &MukaiClass {
    type Output = MukaiClass;
    fn add(self, rhs: &MukaiClass) -> MukaiClass {
        MukaiClass {
            r: &self.r + &rhs.r,
            c: &self.c + &rhs.c,
            s: &self.s + &rhs.s,
        }
    }
}

impl Add for MukaiClass {
    type Output = MukaiClass;
    fn add(self, rhs: MukaiClass) -> MukaiClass {
        &self + &rhs
    }
}

impl Sub for &MukaiClass {
    type Output = MukaiClass;
    fn sub(self, rhs: &MukaiClass) -> MukaiClass {
        MukaiClass {
            r: &self.r - &rhs.r,
            c: &self.c - &rhs.c,
            s: &self.s - &rhs.s,
        }
    }
}

impl Sub for MukaiClass {
    type Output = MukaiClass;
    fn sub(self, rhs: MukaiClass) -> MukaiClass {
        &self - &rhs
    }
}

impl Neg for &MukaiClass {
    type Output = MukaiClass;
    fn neg(self) -> MukaiClass {
        MukaiClass {
            r: -&self.r,
            c: -&self.c,
            s: -&self.s,
        }
    }
}

impl Neg for MukaiClass {
    type Output = MukaiClass;
    fn neg(self) -> MukaiClass {
        -&self
    }
}

impl Mul<&MukaiClass> for &Rat {
    type Output = MukaiClass;
    fn mul(self, rhs: &MukaiClass) -> MukaiClass {
        rhs.scale(self)
    }
}

/// `(v, w) = 2d·c·c' - r·s' - r'·s`.
pub fn mukai_pairing(v: &MukaiClass, w: &MukaiClass, x: &SurfaceData) -> Rat {
    x.h_squared() * &v.c * &w.c - &v.r * &w.s - &w.r * &v.s
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassKind {
    Spherical,
    Isotropic,
    PositiveSquare,
    NegativeSquareOther,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub kind: ClassKind,
    /// Positivity in Yoshioka's sense. In Picard rank one "c effective"
    /// reads `c > 0`.
    pub positive_vector: bool,
}

pub fn classify(v: &MukaiClass, x: &SurfaceData) -> Result<Classification> {
    if v.is_zero() {
        return Err(Error::ZeroClass);
    }
    let sq = v.square(x);
    let minus_two = Rat::from_int(-2);
    let kind = if sq == minus_two {
        ClassKind::Spherical
    } else if sq.is_zero() {
        ClassKind::Isotropic
    } else if sq.is_positive() {
        ClassKind::PositiveSquare
    } else {
        ClassKind::NegativeSquareOther
    };
    let sign_ok = v.r.is_positive()
        || (v.r.is_zero() && v.c.is_positive() && !v.s.is_zero())
        || (v.r.is_zero() && v.c.is_zero() && v.s.is_positive());
    let positive_vector = sign_ok && sq >= minus_two && v.is_primitive();
    Ok(Classification {
        kind,
        positive_vector,
    })
}

/// Numerical action of `- ⊗ O(mH)`, i.e. multiplication by `exp(mH)`.
pub fn tensor_line_bundle(v: &MukaiClass, m: i64, x: &SurfaceData) -> MukaiClass {
    let m = Rat::from_int(m);
    let two_d = x.h_squared();
    MukaiClass {
        r: v.r.clone(),
        c: &v.c + &v.r * &m,
        s: &v.s + &two_d * &m * &v.c + &v.r * x.d_rat() * m.square(),
    }
}

/// Action of the spherical twist along an object of class `xi` on K-theory:
/// `x ↦ x + (x, ξ)·ξ`.
pub fn spherical_reflect(xi: &MukaiClass, x: &MukaiClass, surface: &SurfaceData) -> Result<MukaiClass> {
    let sq = xi.square(surface);
    if sq != Rat::from_int(-2) {
        return Err(Error::NotSpherical(xi.to_string(), sq.to_string()));
    }
    let k = mukai_pairing(x, xi, surface);
    Ok(x + &xi.scale(&k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surf(d: i64) -> SurfaceData {
        SurfaceData::new(d).unwrap()
    }

    #[test]
    fn pairing_examples() {
        let x2 = surf(2);
        let h = MukaiClass::new(0, -1, 0);
        assert_eq!(mukai_pairing(&h, &h, &x2), Rat::from_int(4));
        for d in 1..6 {
            let v = MukaiClass::new(1, 0, -4);
            assert_eq!(mukai_pairing(&v, &v, &surf(d)), Rat::from_int(8));
            let a = MukaiClass::new(1, 0, 0);
            let b = MukaiClass::new(0, 0, 1);
            assert_eq!(mukai_pairing(&a, &b, &surf(d)), Rat::from_int(-1));
        }
    }

    #[test]
    fn rejects_bad_surface() {
        assert_eq!(SurfaceData::new(0), Err(Error::InvalidSurface(0)));
    }

    #[test]
    fn classify_examples() {
        let x = surf(3);
        let k = classify(&MukaiClass::new(1, 0, 1), &x).unwrap();
        assert_eq!(k.kind, ClassKind::Spherical);
        assert!(k.positive_vector);
        let k = classify(&MukaiClass::point(), &x).unwrap();
        assert_eq!(k.kind, ClassKind::Isotropic);
        assert!(k.positive_vector);
        let k = classify(&MukaiClass::new(1, 0, -4), &x).unwrap();
        assert_eq!(k.kind, ClassKind::PositiveSquare);
        assert_eq!(classify(&MukaiClass::zero(), &x), Err(Error::ZeroClass));
    }

    #[test]
    fn positivity_cases() {
        let x = surf(1);
        let pos = |v: MukaiClass| classify(&v, &x).unwrap().positive_vector;
        // rank zero needs c > 0 and s != 0
        assert!(pos(MukaiClass::new(0, 1, -1)));
        assert!(!pos(MukaiClass::new(0, 1, 0)));
        assert!(!pos(MukaiClass::new(0, -1, 1)));
        assert!(!pos(MukaiClass::new(0, 0, -1)));
        assert!(!pos(MukaiClass::new(-1, 0, 0)));
        // not primitive
        assert!(!pos(MukaiClass::new(2, 0, -2)));
        // square below -2
        assert!(!pos(MukaiClass::new(1, 0, 3)));
        // not integral
        assert!(!pos(MukaiClass::new(Rat::new(1, 2), 0, 0)));
    }

    #[test]
    fn tensor_examples() {
        let x1 = surf(1);
        let v = MukaiClass::new(1, 0, 1);
        assert_eq!(tensor_line_bundle(&v, -1, &x1), MukaiClass::new(1, -1, 2));
        assert_eq!(tensor_line_bundle(&v, 0, &x1), v);
        let p = MukaiClass::point();
        assert_eq!(tensor_line_bundle(&p, 5, &surf(2)), p);
        // O ⊗ O(mH) = O(mH)
        for m in -3..4 {
            assert_eq!(tensor_line_bundle(&v, m, &x1), MukaiClass::line_bundle(m, &x1));
        }
    }

    #[test]
    fn reflection_examples() {
        let x1 = surf(1);
        let xi = MukaiClass::new(1, 0, 1);
        let t = MukaiClass::new(0, 1, -2);
        let f = spherical_reflect(&xi, &t, &x1).unwrap();
        assert_eq!(f, MukaiClass::new(2, 1, 0));
        assert_eq!(spherical_reflect(&xi, &xi, &x1).unwrap(), -&xi);
        assert_eq!(spherical_reflect(&xi, &f, &x1).unwrap(), t);
        assert!(matches!(
            spherical_reflect(&MukaiClass::new(1, 0, 0), &t, &x1),
            Err(Error::NotSpherical(..))
        ));
    }

    #[test]
    fn primitive_representatives() {
        let v = MukaiClass::new(Rat::new(7, 2), Rat::new(-49, 8), 14);
        assert_eq!(v.primitive().unwrap(), MukaiClass::new(4, -7, 16));
        assert_eq!(
            MukaiClass::new(0, -6, 0).primitive().unwrap(),
            MukaiClass::new(0, -1, 0)
        );
        assert_eq!(MukaiClass::zero().primitive(), Err(Error::ZeroVector));
        assert!(MukaiClass::new(2, -4, -2).same_ray(&MukaiClass::new(1, -2, -1)));
        assert!(!MukaiClass::new(2, -4, -2).same_ray(&MukaiClass::new(-1, 2, 1)));
    }

    #[test]
    fn proportionality() {
        let v = MukaiClass::new(1, 0, -4);
        assert!(v.is_proportional_to(&v.scale(&Rat::from_int(3))));
        assert!(v.is_proportional_to(&MukaiClass::zero()));
        assert!(!v.is_proportional_to(&MukaiClass::new(1, -1, 3)));
    }
}
