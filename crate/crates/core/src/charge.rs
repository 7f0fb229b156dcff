//! Central charges `Z_{ω,β}(v) = (exp(β + iω), v)` on the slice `ω = tH`, `β = bH`.
//!
//! Points of the slice are stored as `(b, T)` with `T = t²`. The real part of
//! a charge is polynomial in `T`; the imaginary part is `t` times a rational,
//! so every phase comparison reduces to the sign of a rational.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{MukaiClass, SurfaceData};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct StabilityPoint {
    b: Rat,
    #[serde(rename = "T")]
    t_sq: Rat,
}

impl StabilityPoint {
    pub fn new(b: Rat, t_sq: Rat) -> Result<Self> {
        if !t_sq.is_positive() {
            return Err(Error::NonPositiveT(t_sq.to_string()));
        }
        Ok(StabilityPoint { b, t_sq })
    }

    pub fn b(&self) -> &Rat {
        &self.b
    }

    /// `T = t²`.
    pub fn t_sq(&self) -> &Rat {
        &self.t_sq
    }
}

/// `Z = re + i·t·im_over_t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChargeValue {
    pub re: Rat,
    pub im_over_t: Rat,
}

impl ChargeValue {
    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im_over_t.is_zero()
    }

    /// Moves the value into the closed upper half-plane by negating it when
    /// the imaginary part is negative. Returns whether it was negated.
    pub fn normalize(&mut self) -> bool {
        if self.im_over_t.is_negative() {
            self.re = -&self.re;
            self.im_over_t = -&self.im_over_t;
            true
        } else {
            false
        }
    }
}

/// `e^{-bH}·v = (r, c - r·b, s - 2d·b·c + r·d·b²)`.
pub fn twisted(v: &MukaiClass, b: &Rat, x: &SurfaceData) -> MukaiClass {
    let d = x.d_rat();
    MukaiClass {
        r: v.r.clone(),
        c: &v.c - &v.r * b,
        s: &v.s - Rat::from_int(2) * &d * b * &v.c + &v.r * &d * b.square(),
    }
}

/// `Im Z / t = 2d·(c - r·b)`; independent of `T`.
pub fn im_over_t(v: &MukaiClass, b: &Rat, x: &SurfaceData) -> Rat {
    x.h_squared() * (&v.c - &v.r * b)
}

/// `Re Z = 2d·b·c - s - r·d·(b² - T)`. Valid for any `T`, including the
/// boundary value `T = 0` used by limit computations.
pub fn re_charge(v: &MukaiClass, b: &Rat, t_sq: &Rat, x: &SurfaceData) -> Rat {
    x.h_squared() * b * &v.c - &v.s - &v.r * x.d_rat() * (b.square() - t_sq)
}

pub fn central_charge(v: &MukaiClass, p: &StabilityPoint, x: &SurfaceData) -> ChargeValue {
    ChargeValue {
        re: re_charge(v, &p.b, &p.t_sq, x),
        im_over_t: im_over_t(v, &p.b, x),
    }
}

/// Phase of a normalized nonzero charge on the real axis: 0 on the positive
/// side, 1 on the negative side.
fn real_axis_phase(z: &ChargeValue) -> u8 {
    if z.re.is_positive() {
        0
    } else {
        1
    }
}

/// Compares the phase of `Z(w)` against the phase of `Z(v)`.
///
/// Both charges are first moved into the closed upper half-plane. Phases then
/// lie in `[0, 1]`, a charge on the positive real axis sitting at phase 0 as
/// the limit of charges just above it. A class with `Z(w) = 0` is aligned
/// with everything and compares `Equal`, consistent with the wall equation.
pub fn phase_compare(
    v: &MukaiClass,
    w: &MukaiClass,
    p: &StabilityPoint,
    x: &SurfaceData,
) -> Result<Ordering> {
    let mut zv = central_charge(v, p, x);
    if zv.is_zero() {
        return Err(Error::ZeroCharge(v.to_string()));
    }
    let mut zw = central_charge(w, p, x);
    if zw.is_zero() {
        return Ok(Ordering::Equal);
    }
    zv.normalize();
    zw.normalize();
    if zv.im_over_t.is_zero() && zw.im_over_t.is_zero() {
        return Ok(real_axis_phase(&zw).cmp(&real_axis_phase(&zv)));
    }
    // Im(conj(Z(v))·Z(w)) / t; positive means w is counterclockwise of v.
    let cross = &zv.re * &zw.im_over_t - &zv.im_over_t * &zw.re;
    Ok(cross.signum().cmp(&0))
}

/// Slope and discrepancy at `β = bH`, with the slope divided by `t`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SlopeData {
    pub mu_hat: Rat,
    pub delta: Rat,
}

/// `mu_hat = 2d(c - rb)/r` and `delta = -s_β/r + 1 + d(c - rb)²/r²`.
///
/// The discrepancy does not depend on `T`.
pub fn slope_and_discrepancy(v: &MukaiClass, b: &Rat, x: &SurfaceData) -> Result<SlopeData> {
    if !v.r.is_positive() {
        return Err(Error::NonPositiveRank(v.to_string()));
    }
    let tw = twisted(v, b, x);
    let mu_hat = x.h_squared() * &tw.c / &v.r;
    let delta = -(&tw.s / &v.r) + Rat::one() + x.d_rat() * tw.c.square() / v.r.square();
    Ok(SlopeData { mu_hat, delta })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeometricTest {
    pub geometric: bool,
    /// Positive-rank spherical class with `Z ∈ R_{≤0}` when the test fails.
    pub witness: Option<MukaiClass>,
}

/// Tests whether `Z_{tH,bH}(F) ∉ R_{≤0}` for every spherical sheaf `F`.
///
/// A spherical class with vanishing imaginary part at `b = p/q` is forced to be
/// `±(q, p, (dp² + 1)/q)`; it exists iff `q | dp² + 1`, and the positive-rank
/// one has `Re Z = qdT - 1/q`, which is `≤ 0` iff `T ≤ 1/(dq²)`.
pub fn is_geometric(p: &StabilityPoint, x: &SurfaceData) -> GeometricTest {
    let num = p.b.numer().clone();
    let den = p.b.denom().clone();
    let d = num_bigint::BigInt::from(x.d());
    let top = &d * &num * &num + 1;
    if (&top % &den) != num_bigint::BigInt::from(0) {
        return GeometricTest {
            geometric: true,
            witness: None,
        };
    }
    let threshold = Rat::from_big(1.into(), &d * &den * &den);
    if p.t_sq <= threshold {
        let witness = MukaiClass {
            r: Rat::from_bigint(den.clone()),
            c: Rat::from_bigint(num),
            s: Rat::from_bigint(top / den),
        };
        GeometricTest {
            geometric: false,
            witness: Some(witness),
        }
    } else {
        GeometricTest {
            geometric: true,
            witness: None,
        }
    }
}
