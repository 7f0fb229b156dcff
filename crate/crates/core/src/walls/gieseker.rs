//! Explicit lower bound on `T` above which every `β`-twisted Gieseker stable
//! sheaf of class `v` is Bridgeland stable.

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::charge::slope_and_discrepancy;
use crate::error::{Error, Result};
use crate::lattice::{MukaiClass, SurfaceData};
use crate::rational::Rat;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GiesekerBoundReport {
    /// `{w : 0 < r(w) ≤ r(v), w² ≥ -2, 0 < μ(w) < μ(v), δ(w) < δ(v)}`, sorted.
    #[serde(rename = "Dv")]
    pub dv: Vec<MukaiClass>,
    pub mu_hat: Rat,
    pub delta: Rat,
    pub mu_max_hat: Rat,
    /// `μ^max / (μ - μ^max)`.
    pub ratio: Rat,
    /// Stability of Gieseker-stable sheaves is guaranteed for `T > T_bound`.
    #[serde(rename = "T_bound")]
    pub t_bound: Rat,
}

fn small(q: num_bigint::BigInt) -> Result<i64> {
    q.to_i64()
        .ok_or_else(|| Error::InvalidInput("D_v search box exceeds 64-bit range".into()))
}

pub fn gieseker_bound(v: &MukaiClass, b: &Rat, x: &SurfaceData) -> Result<GiesekerBoundReport> {
    if !v.is_integral() {
        return Err(Error::InvalidInput(format!("{v} is not an integral class")));
    }
    let sv = slope_and_discrepancy(v, b, x)?;
    if !sv.mu_hat.is_positive() {
        return Err(Error::NonPositiveSlope(v.to_string()));
    }
    let d = x.d_rat();
    let two_d = x.h_squared();
    let rank = small(v.r.floor())?;
    // c_β(v)/r(v), the upper slope limit in units of 2d
    let slope = (&v.c - &v.r * b) / &v.r;

    let mut dv = Vec::new();
    for rw in 1..=rank {
        let rw_q = Rat::from_int(rw);
        // r'b < c' < r'b + r'·slope
        let lo = &rw_q * b;
        let hi = &lo + &rw_q * &slope;
        let c_min = small(lo.floor())? + 1;
        let c_max = small(hi.ceil())? - 1;
        for cw in c_min..=c_max {
            let cw_q = Rat::from_int(cw);
            let c_beta = &cw_q - &rw_q * b;
            // w² ≥ -2
            let s_max = small(((&d * cw_q.square() + 1) / &rw_q).floor())?;
            // δ(w) < δ(v)
            let s_floor = &two_d * b * &cw_q - &rw_q * &d * b.square()
                + &rw_q * (Rat::one() - &sv.delta)
                + &d * c_beta.square() / &rw_q;
            let s_min = small(s_floor.floor())? + 1;
            for sw in s_min..=s_max {
                let w = MukaiClass::new(rw, cw, sw);
                let sw_data = slope_and_discrepancy(&w, b, x)?;
                debug_assert!(sw_data.delta < sv.delta);
                debug_assert!(sw_data.mu_hat.is_positive() && sw_data.mu_hat < sv.mu_hat);
                dv.push(w);
            }
        }
    }
    dv.sort();

    let fallback = &v.r / (&v.r + 1) * &sv.mu_hat;
    let mu_max_hat = dv
        .iter()
        .map(|w| slope_and_discrepancy(w, b, x).map(|s| s.mu_hat))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(fallback, Rat::max);
    let ratio = &mu_max_hat / (&sv.mu_hat - &mu_max_hat);
    let t_bound = (Rat::from_int(2) + Rat::from_int(2) * &ratio * &sv.delta) / &two_d;
    Ok(GiesekerBoundReport {
        dv,
        mu_hat: sv.mu_hat,
        delta: sv.delta,
        mu_max_hat,
        ratio,
        t_bound,
    })
}
