//! Divisor classes on moduli spaces from stability data.
//!
//! A stability condition `σ` gives a class `w_σ ∈ v^⊥` whose image under the
//! Mukai homomorphism `θ_v` is nef on the moduli space `M_σ(v)`. With
//! `Z = x + i·t·y` for the half-plane-normalized `v`,
//!
//! ```text
//! w_raw = y·(1, b, d(b² - T)) - x·(0, 1, 2db)
//! ```
//!
//! is orthogonal to `v`, satisfies `w_raw² = 2d(x² + T·y²) > 0`, and `w_σ` is
//! its primitive integral representative. For `v = (1, 0, 1 - n)` the target
//! is `NS(Hilbⁿ X) = Z·H̃ ⊕ Z·B` with `H̃² = 2d`, `B² = 2 - 2n`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::charge::{central_charge, StabilityPoint};
use crate::error::{Error, Result};
use crate::lattice::{mukai_pairing, MukaiClass, SurfaceData};
use crate::rational::Rat;
use crate::walls::{spherical_solver, Constraint};

/// A class `w` together with the class `v` it is orthogonal to.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrthogonalClass {
    pub class: MukaiClass,
    pub host: MukaiClass,
}

impl OrthogonalClass {
    pub fn new(class: MukaiClass, host: MukaiClass, x: &SurfaceData) -> Result<Self> {
        if !mukai_pairing(&class, &host, x).is_zero() {
            return Err(Error::NotOrthogonal(class.to_string(), host.to_string()));
        }
        Ok(OrthogonalClass { class, host })
    }
}

/// Unscaled `w_raw` at `(b, T)`. `T = 0` is allowed so the limit formulas can
/// be checked as polynomial identities.
pub fn w_raw(v: &MukaiClass, b: &Rat, t_sq: &Rat, x: &SurfaceData) -> Result<MukaiClass> {
    let d = x.d_rat();
    let mut z = crate::charge::ChargeValue {
        re: crate::charge::re_charge(v, b, t_sq, x),
        im_over_t: crate::charge::im_over_t(v, b, x),
    };
    if z.is_zero() {
        return Err(Error::ZeroCharge(v.to_string()));
    }
    z.normalize();
    let e_re = MukaiClass::new(Rat::one(), b.clone(), &d * (b.square() - t_sq));
    let e_im = MukaiClass::new(Rat::zero(), Rat::one(), Rat::from_int(2) * &d * b);
    Ok(&e_re.scale(&z.im_over_t) - &e_im.scale(&z.re))
}

/// The primitive integral class on the ray of `w_raw`.
pub fn w_sigma(v: &MukaiClass, p: &StabilityPoint, x: &SurfaceData) -> Result<OrthogonalClass> {
    if central_charge(v, p, x).is_zero() {
        return Err(Error::ZeroCharge(v.to_string()));
    }
    let raw = w_raw(v, p.b(), p.t_sq(), x)?;
    OrthogonalClass::new(raw.primitive()?, v.clone(), x)
}

/// `t → 0` limit of `w_σ` along `β = bH`:
/// `(2d(c - rb), 2d(c - rb)b + s - 2dbc + rdb², 2dbs - 2d²cb²)`.
pub fn w_limit_zero(v: &MukaiClass, b: &Rat, x: &SurfaceData) -> Result<OrthogonalClass> {
    let d = x.d_rat();
    let two_d = x.h_squared();
    let c_beta = &v.c - &v.r * b;
    let raw = MukaiClass::new(
        &two_d * &c_beta,
        &two_d * &c_beta * b + &v.s - &two_d * b * &v.c + &v.r * &d * b.square(),
        &two_d * b * &v.s - &two_d * &d * &v.c * b.square(),
    );
    OrthogonalClass::new(raw.primitive()?, v.clone(), x)
}

/// `t → ∞` limit: `(0, -rd, -2d²c)`, independent of `b`.
pub fn w_limit_infinity(v: &MukaiClass, x: &SurfaceData) -> Result<OrthogonalClass> {
    let d = x.d_rat();
    let raw = MukaiClass::new(Rat::zero(), -(&v.r * &d), -(Rat::from_int(2) * d.square() * &v.c));
    OrthogonalClass::new(raw.primitive()?, v.clone(), x)
}

/// `x·H̃ + y·B` on `Hilbⁿ X`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HilbDivisor {
    pub x: Rat,
    pub y: Rat,
    pub n: i64,
}

impl HilbDivisor {
    pub fn new(x: impl Into<Rat>, y: impl Into<Rat>, n: i64) -> Self {
        HilbDivisor {
            x: x.into(),
            y: y.into(),
            n,
        }
    }

    pub fn h_tilde(n: i64) -> Self {
        HilbDivisor::new(1, 0, n)
    }

    pub fn b_class(n: i64) -> Self {
        HilbDivisor::new(0, 1, n)
    }

    /// Whether both divisors span the same ray (positive multiples).
    pub fn same_ray(&self, other: &HilbDivisor) -> bool {
        let cross = &self.x * &other.y - &self.y * &other.x;
        let dot = &self.x * &other.x + &self.y * &other.y;
        self.n == other.n && cross.is_zero() && dot.is_positive()
    }

    /// Always-explicit form, e.g. `1/1 H~ - 4/7 B`.
    pub fn to_fraction_string(&self) -> String {
        let sign = if self.y.is_negative() { '-' } else { '+' };
        format!(
            "{} H~ {sign} {} B",
            self.x.to_fraction_string(),
            self.y.abs().to_fraction_string()
        )
    }
}

impl fmt::Display for HilbDivisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn term(coeff: &Rat, name: &str) -> String {
            if coeff.abs() == Rat::one() {
                name.to_string()
            } else {
                format!("{} {name}", coeff.abs())
            }
        }
        match (self.x.is_zero(), self.y.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => {
                let neg = if self.x.is_negative() { "-" } else { "" };
                write!(f, "{neg}{}", term(&self.x, "H~"))
            }
            (true, false) => {
                let neg = if self.y.is_negative() { "-" } else { "" };
                write!(f, "{neg}{}", term(&self.y, "B"))
            }
            (false, false) => {
                let neg = if self.x.is_negative() { "-" } else { "" };
                let op = if self.y.is_negative() { '-' } else { '+' };
                write!(f, "{neg}{} {op} {}", term(&self.x, "H~"), term(&self.y, "B"))
            }
        }
    }
}

/// `θ_v(w)` for `v = (1, 0, 1 - n)`, using `θ(0, -H, 0) = H̃` and
/// `θ(1, 0, n - 1) = -B`.
pub fn theta_hilb(w: &OrthogonalClass, n: i64) -> Result<HilbDivisor> {
    let ideal = MukaiClass::ideal_sheaf(n);
    if w.host != ideal && w.host != -&ideal {
        return Err(Error::NotOrthogonal(
            w.class.to_string(),
            format!("{} (host is not {ideal})", w.host),
        ));
    }
    let c = &w.class;
    if c.s != &c.r * (n - 1) {
        return Err(Error::NotOrthogonal(c.to_string(), ideal.to_string()));
    }
    Ok(HilbDivisor::new(-&c.c, -&c.r, n))
}

/// Beauville–Bogomolov square `2d·x² - (2n - 2)·y²`.
pub fn bb_square(div: &HilbDivisor, x: &SurfaceData) -> Rat {
    x.h_squared() * div.x.square() - Rat::from_int(2 * div.n - 2) * div.y.square()
}

/// `p·h + q·b`, where `h` is a curve class dual to `H̃` up to `2d` and `b` is
/// the class of a fibre of the exceptional divisor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveClass {
    pub p: Rat,
    pub q: Rat,
}

impl CurveClass {
    pub fn new(p: impl Into<Rat>, q: impl Into<Rat>) -> Self {
        CurveClass {
            p: p.into(),
            q: q.into(),
        }
    }

    /// Square in the dual lattice: `h² = 2d`, `b² = -1/(2n - 2)`.
    pub fn self_pairing(&self, x: &SurfaceData, n: i64) -> Rat {
        x.h_squared() * self.p.square() - self.q.square() / Rat::from_int(2 * n - 2)
    }
}

impl fmt::Display for CurveClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let op = if self.q.is_negative() { '-' } else { '+' };
        write!(f, "{} h {op} {} b", self.p, self.q.abs())
    }
}

/// `h·H̃ = 2d`, `b·B = 1`, mixed terms vanish.
pub fn curve_divisor_pairing(curve: &CurveClass, div: &HilbDivisor, x: &SurfaceData) -> Rat {
    x.h_squared() * &curve.p * &div.x + &curve.q * &div.y
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbNefCone {
    pub generators: [HilbDivisor; 2],
    pub extremal_curve: CurveClass,
    pub curve_square: Rat,
}

/// Nef cone of `Hilbⁿ X`: spanned by `H̃` and `H̃ - 2d/(d+n)·B`, the second ray
/// contracting `R = h + (d+n)b`. Requires `2n ≥ d + 3`.
pub fn hilb_nef_cone(x: &SurfaceData, n: i64) -> Result<HilbNefCone> {
    let d = x.d();
    if n < 2 || 2 * n < d + 3 {
        return Err(Error::HypothesisFailed(format!(
            "n = {n}, d = {d}: the nef cone is only known here for n ≥ (d+3)/2, \
             the Brill–Noether condition under which the O(-H) wall is the \
             boundary of the Gieseker chamber"
        )));
    }
    let second = HilbDivisor::new(1, -Rat::new(2 * d, d + n), n);
    let curve = CurveClass::new(1, d + n);
    debug_assert!(curve_divisor_pairing(&curve, &second, x).is_zero());
    Ok(HilbNefCone {
        curve_square: curve.self_pairing(x, n),
        generators: [HilbDivisor::h_tilde(n), second],
        extremal_curve: curve,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeKind {
    Nef,
    Movable,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeResult {
    pub kind: ConeKind,
    pub generators: Vec<HilbDivisor>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LagrangianData {
    pub k: i64,
    pub h: i64,
    /// `h·H̃ - k·B`, of Beauville–Bogomolov square zero.
    pub square_zero_ray: HilbDivisor,
    /// `θ(w_limit_zero(v, -h/k))`, which lies on the square-zero ray.
    pub limit_divisor: HilbDivisor,
    pub cone_result: Option<ConeResult>,
}

fn integer_sqrt(n: i64) -> Option<i64> {
    let r = Rat::from_int(n).sqrt_exact()?;
    r.to_i64()
}

/// Looks for coprime `(k, h)` with `d·h² = k²(n - 1)`.
///
/// When `h = 1` and `k ≥ 2` the nef cone is `⟨H̃, H̃ - kB⟩`. When `h = 2` and `k`
/// is odd with `k ≥ 3`, the movable cone is `⟨H̃, 2H̃ - kB⟩` provided no
/// spherical class obstructs it, which is re-checked here for this instance.
pub fn lagrangian_check(x: &SurfaceData, n: i64) -> Result<Option<LagrangianData>> {
    if n < 2 {
        return Err(Error::InvalidInput(format!("n = {n} must be at least 2")));
    }
    let ratio = Rat::new(x.d(), n - 1);
    let (Some(a), Some(b)) = (ratio.numer().try_into().ok(), ratio.denom().try_into().ok()) else {
        return Ok(None);
    };
    let (Some(k), Some(h)) = (integer_sqrt(a), integer_sqrt(b)) else {
        return Ok(None);
    };

    let v = MukaiClass::ideal_sheaf(n);
    let square_zero_ray = HilbDivisor::new(h, -k, n);
    debug_assert!(bb_square(&square_zero_ray, x).is_zero());
    let limit = w_limit_zero(&v, &Rat::new(-h, k), x)?;
    let limit_divisor = theta_hilb(&limit, n)?;

    let cone_result = match (h, k) {
        (1, k) if k >= 2 => Some(ConeResult {
            kind: ConeKind::Nef,
            generators: vec![HilbDivisor::h_tilde(n), HilbDivisor::new(1, -k, n)],
        }),
        (2, k) if k % 2 == 1 && k >= 3 => {
            let constraints = [
                Constraint::new(MukaiClass::new(0, Rat::new(1, k), 1 - n), Rat::new(n - 1, 2)),
                Constraint::new(v.clone(), -1),
            ];
            spherical_solver(&constraints, x)?.is_empty().then(|| ConeResult {
                kind: ConeKind::Movable,
                generators: vec![HilbDivisor::h_tilde(n), HilbDivisor::new(2, -k, n)],
            })
        }
        _ => None,
    };
    Ok(Some(LagrangianData {
        k,
        h,
        square_zero_ray,
        limit_divisor,
        cone_result,
    }))
}
