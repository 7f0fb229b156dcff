//! Numerical walls for a fixed class `v` in the `(b, t)` upper half-plane.
//!
//! Writing `Z = re + i·t·im`, the classes `v` and `w` align exactly where
//! `re(v)·im(w) - im(v)·re(w) = 0`. Expanded in `(b, T)` this is
//!
//! ```text
//! d·Δ'·(b² + T) + (s_v·r_w - s_w·r_v)·b + (s_w·c_v - s_v·c_w) = 0,   Δ' = r_v·c_w - r_w·c_v
//! ```
//!
//! so a wall is a semicircle centred on the `b`-axis when `Δ' ≠ 0` and a
//! vertical line otherwise. Vertical walls only ever sit where `Im Z(v) = 0`.

mod flags;
mod gieseker;
mod interval;
mod spherical;

use std::collections::BTreeMap;

use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::charge::{im_over_t, re_charge};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::lattice::{mukai_pairing, MukaiClass, SurfaceData};
use crate::rational::Rat;

pub use flags::{classify_wall, WallFlags};
pub use gieseker::{gieseker_bound, GiesekerBoundReport};
pub use interval::{RatInterval, Region};
pub use spherical::{spherical_solver, Constraint};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum WallGeometry {
    Semicircle {
        #[serde(rename = "center")]
        center_b: Rat,
        radius_sq: Rat,
    },
    VerticalLine {
        b: Rat,
    },
}

impl WallGeometry {
    /// `T` where the wall meets the vertical line at `b`, if it does.
    pub fn t_sq_at(&self, b: &Rat) -> Option<Rat> {
        match self {
            WallGeometry::Semicircle { center_b, radius_sq } => {
                let t_sq = radius_sq - (b - center_b).square();
                t_sq.is_positive().then_some(t_sq)
            }
            WallGeometry::VerticalLine { .. } => None,
        }
    }

    /// Whether `(b, T)` lies on the wall.
    pub fn contains(&self, b: &Rat, t_sq: &Rat) -> bool {
        match self {
            WallGeometry::Semicircle { center_b, radius_sq } => {
                &((b - center_b).square() + t_sq) == radius_sq
            }
            WallGeometry::VerticalLine { b: wb } => wb == b,
        }
    }
}

/// Geometry of the locus where `Z(v)` and `Z(w)` are aligned.
///
/// Returns `None` when the locus misses the upper half-plane.
pub fn wall_of_pair(v: &MukaiClass, w: &MukaiClass, x: &SurfaceData) -> Result<Option<WallGeometry>> {
    if v.is_proportional_to(w) {
        return Err(Error::ProportionalClasses(v.to_string(), w.to_string()));
    }
    let delta = &v.c * &w.r - &v.r * &w.c;
    let d = x.d_rat();
    if !delta.is_zero() {
        let center_b = -(&v.r * &w.s - &w.r * &v.s) / (Rat::from_int(2) * &d * &delta);
        let radius_sq = center_b.square() - (&w.c * &v.s - &v.c * &w.s) / (&d * &delta);
        Ok(radius_sq
            .is_positive()
            .then_some(WallGeometry::Semicircle { center_b, radius_sq }))
    } else {
        let denom = &v.r * &w.s - &w.r * &v.s;
        if denom.is_zero() {
            return Ok(None);
        }
        let b = (&v.c * &w.s - &w.c * &v.s) / denom;
        Ok(Some(WallGeometry::VerticalLine { b }))
    }
}

/// One decomposition `v = w + (v - w)` along a wall.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Destabilizer {
    pub class: MukaiClass,
    pub complement: MukaiClass,
    /// `(w, v - w)`.
    pub pairing: Rat,
    /// `w² + (v - w)² ≤ v² - 2`. Only meaningful when both factors are stable
    /// and distinct, so it is reported rather than used as a filter.
    pub mukai_inequality: bool,
}

impl Destabilizer {
    pub fn new(v: &MukaiClass, w: &MukaiClass, x: &SurfaceData) -> Self {
        let complement = v - w;
        let pairing = mukai_pairing(w, &complement, x);
        let mukai_inequality = w.square(x) + complement.square(x) <= v.square(x) - 2;
        Destabilizer {
            class: w.clone(),
            complement,
            pairing,
            mukai_inequality,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub geometry: WallGeometry,
    pub destabilizers: Vec<Destabilizer>,
}

impl Wall {
    /// The wall of a single pair, if it reaches the upper half-plane.
    pub fn from_pair(v: &MukaiClass, w: &MukaiClass, x: &SurfaceData) -> Result<Option<Wall>> {
        Ok(wall_of_pair(v, w, x)?.map(|geometry| Wall {
            geometry,
            destabilizers: vec![Destabilizer::new(v, w, x)],
        }))
    }

    pub fn has_destabilizer(&self, w: &MukaiClass) -> bool {
        self.destabilizers
            .iter()
            .any(|dz| &dz.class == w || &dz.complement == w)
    }
}

/// Default rank bound `2·|r(v)| + 4` for destabilizer searches.
pub fn default_rank_bound(v: &MukaiClass) -> u32 {
    let r = v.r.abs().ceil().to_u32().unwrap_or(u32::MAX / 4);
    2 * r + 4
}

fn to_i64(q: num_bigint::BigInt) -> Result<i64> {
    q.to_i64()
        .ok_or_else(|| Error::InvalidInput("search box exceeds 64-bit range".into()))
}

/// Sign of `Im Z(v)` on the interior of the `b`-range; `v` multiplied by that
/// sign is the class whose subobjects are searched.
fn oriented_target(v: &MukaiClass, b_range: &RatInterval, x: &SurfaceData) -> Result<MukaiClass> {
    let at = |b: &Rat| im_over_t(v, b, x);
    if b_range.is_point() {
        let im = at(&b_range.lo);
        if im.is_zero() {
            return Err(Error::DegeneratePath(v.to_string()));
        }
        return Ok(if im.is_negative() { -v } else { v.clone() });
    }
    let (lo, hi) = (at(&b_range.lo), at(&b_range.hi));
    if lo.signum() * hi.signum() < 0 {
        return Err(Error::InvalidInput(format!(
            "Im Z({v}) changes sign inside the b-range {b_range}; split the region at b = c/r"
        )));
    }
    let mid = at(&b_range.midpoint());
    Ok(if mid.is_negative() { -v } else { v.clone() })
}

/// The set of `b` where `0 ≤ Im w ≤ Im v`, intersected with `b_range`.
fn sandwich_range(
    v: &MukaiClass,
    w: &MukaiClass,
    b_range: &RatInterval,
) -> RatInterval {
    // a - k·b ≥ 0 for (a, k) = (c_w, r_w) and (c_v - c_w, r_v - r_w)
    let mut range = b_range.clone();
    for (a, k) in [
        (w.c.clone(), w.r.clone()),
        (&v.c - &w.c, &v.r - &w.r),
    ] {
        if k.is_zero() {
            if a.is_negative() {
                return RatInterval::closed(Rat::one(), Rat::zero());
            }
        } else if k.is_positive() {
            range = range.at_most(a / k);
        } else {
            range = range.at_least(a / k);
        }
    }
    range
}

/// Whether the wall of `(v, w)` passes through `region` at a point with
/// `0 ≤ Im Z(w) ≤ Im Z(v)`. `v` must already be oriented.
fn wall_meets_region(
    geometry: &WallGeometry,
    v: &MukaiClass,
    w: &MukaiClass,
    region: &Region,
) -> bool {
    let bs = sandwich_range(v, w, &region.b);
    if bs.is_empty() {
        return false;
    }
    match geometry {
        WallGeometry::VerticalLine { b } => bs.contains(b),
        WallGeometry::Semicircle { center_b, radius_sq } => {
            // T = R² - (b - b0)² ∈ T-range  ⟺  (b - b0)² ∈ [R² - T_hi, R² - T_lo]
            let target = RatInterval {
                lo: radius_sq - &region.t_sq.hi,
                hi: radius_sq - &region.t_sq.lo,
                lo_open: region.t_sq.hi_open,
                hi_open: region.t_sq.lo_open,
            };
            !bs.squared_distance_image(center_b).intersect(&target).is_empty()
        }
    }
}

/// Candidate `(geometry, destabilizer)` pairs with first component rank `r'`.
fn candidates_of_rank(
    rw: i64,
    v: &MukaiClass,
    region: &Region,
    x: &SurfaceData,
) -> Result<Vec<(WallGeometry, Destabilizer)>> {
    let d = x.d_rat();
    let two_d = x.h_squared();
    let rw_q = Rat::from_int(rw);
    let (blo, bhi) = (&region.b.lo, &region.b.hi);

    // 0 ≤ c' - r'b and c' ≤ c_v - (r_v - r')b for some b in range.
    let c_lo = (&rw_q * blo).min(&rw_q * bhi);
    let rest = &v.r - &rw_q;
    let c_hi = (&v.c - &rest * blo).max(&v.c - &rest * bhi);
    let c_min = to_i64(c_lo.ceil())?;
    let c_max = to_i64(c_hi.floor())?;

    // On the wall s' = 2d·b·c' - r'd(b² - T) - λ·Re Z(v) with λ ∈ [0, 1].
    let b_abs = region.b.max_abs();
    let t_max = region.t_sq.hi.clone();
    let quad = b_abs.square() + &t_max;
    let re_bound = &two_d * &b_abs * v.c.abs() + v.s.abs() + v.r.abs() * &d * &quad;

    let mut out = Vec::new();
    for cw in c_min..=c_max {
        let cw_q = Rat::from_int(cw);
        let s_bound = &two_d * &b_abs * cw_q.abs() + rw_q.abs() * &d * &quad + &re_bound;
        let mut s_min = to_i64(-s_bound.ceil())?;
        let mut s_max = to_i64(s_bound.ceil())?;
        // w² ≥ -2
        let own = &d * cw_q.square() + 1;
        if rw > 0 {
            s_max = s_max.min(to_i64((&own / &rw_q).floor())?);
        } else if rw < 0 {
            s_min = s_min.max(to_i64((&own / &rw_q).ceil())?);
        }
        // (v - w)² ≥ -2:  (r_v - r')(s_v - s') ≤ d(c_v - c')² + 1
        let other = &d * (&v.c - &cw_q).square() + 1;
        if rest.is_positive() {
            s_min = s_min.max(to_i64((&v.s - &other / &rest).ceil())?);
        } else if rest.is_negative() {
            s_max = s_max.min(to_i64((&v.s - &other / &rest).floor())?);
        }
        for sw in s_min..=s_max {
            let w = MukaiClass::new(rw, cw, sw);
            if w.is_zero() || v.is_proportional_to(&w) {
                continue;
            }
            let minus_two = Rat::from_int(-2);
            if w.square(x) < minus_two || (v - &w).square(x) < minus_two {
                continue;
            }
            let Some(geometry) = wall_of_pair(v, &w, x)? else {
                continue;
            };
            if wall_meets_region(&geometry, v, &w, region) {
                out.push((geometry, Destabilizer::new(v, &w, x)));
            }
        }
    }
    Ok(out)
}

/// Every numerical wall for `v` through `region` whose destabilizer has
/// `|r(w)| ≤ rank_bound`, using the default execution mode.
pub fn potential_destabilizers(
    v: &MukaiClass,
    region: &Region,
    rank_bound: u32,
    x: &SurfaceData,
) -> Result<Vec<Wall>> {
    potential_destabilizers_with(v, region, rank_bound, x, Execution::default())
}

/// Enumerates integral `w` with `|r(w)| ≤ rank_bound`, `w² ≥ -2`,
/// `(v - w)² ≥ -2`, whose wall meets `region` at a point with
/// `0 ≤ Im Z(w) ≤ Im Z(v)` (after orienting `v` into the upper half-plane).
///
/// Walls are grouped by geometry and sorted by `(center, radius²)`, vertical
/// lines last; destabilizers within a wall are sorted lexicographically.
/// The search is split by rank and the merge is order-independent, so both
/// execution modes give identical output.
pub fn potential_destabilizers_with(
    v: &MukaiClass,
    region: &Region,
    rank_bound: u32,
    x: &SurfaceData,
    exec: Execution,
) -> Result<Vec<Wall>> {
    region.validate()?;
    if !v.is_integral() {
        return Err(Error::InvalidInput(format!("{v} is not an integral class")));
    }
    if v.r.is_zero() && v.c.is_zero() {
        // Z(v) is a constant real number: no phase can cross it.
        return Ok(Vec::new());
    }
    let target = oriented_target(v, &region.b, x)?;
    let bound = i64::from(rank_bound);
    let ranks: Vec<i64> = (-bound..=bound).collect();
    let per_rank = exec.map(ranks, |rw| candidates_of_rank(rw, &target, region, x));

    let mut grouped: BTreeMap<WallGeometry, Vec<Destabilizer>> = BTreeMap::new();
    for batch in per_rank {
        for (geometry, dz) in batch? {
            grouped.entry(geometry).or_default().push(dz);
        }
    }
    Ok(grouped
        .into_iter()
        .map(|(geometry, mut destabilizers)| {
            destabilizers.sort();
            Wall {
                geometry,
                destabilizers,
            }
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathCrossing {
    #[serde(rename = "T")]
    pub t_sq: Rat,
    pub wall: Wall,
}

pub fn walls_on_vertical_path(
    v: &MukaiClass,
    b: &Rat,
    t_range: &RatInterval,
    rank_bound: u32,
    x: &SurfaceData,
) -> Result<Vec<PathCrossing>> {
    walls_on_vertical_path_with(v, b, t_range, rank_bound, x, Execution::default())
}

/// Wall crossings along `β = bH`, ordered by decreasing `T`.
pub fn walls_on_vertical_path_with(
    v: &MukaiClass,
    b: &Rat,
    t_range: &RatInterval,
    rank_bound: u32,
    x: &SurfaceData,
    exec: Execution,
) -> Result<Vec<PathCrossing>> {
    if im_over_t(v, b, x).is_zero() {
        return Err(Error::DegeneratePath(v.to_string()));
    }
    let region = Region::new(RatInterval::point(b.clone()), t_range.clone())?;
    let walls = potential_destabilizers_with(v, &region, rank_bound, x, exec)?;
    let mut crossings: Vec<PathCrossing> = walls
        .into_iter()
        .filter_map(|wall| {
            // Vertical walls sit where Im Z(v) = 0, which this path avoids.
            let t_sq = wall.geometry.t_sq_at(b)?;
            Some(PathCrossing { t_sq, wall })
        })
        .collect();
    crossings.sort_by(|a, b| b.t_sq.cmp(&a.t_sq).then_with(|| a.wall.geometry.cmp(&b.wall.geometry)));
    Ok(crossings)
}

/// `Re Z(v)·Im Z(w) - Im Z(v)·Re Z(w)`, divided by `t`.
pub fn alignment(v: &MukaiClass, w: &MukaiClass, b: &Rat, t_sq: &Rat, x: &SurfaceData) -> Rat {
    re_charge(v, b, t_sq, x) * im_over_t(w, b, x) - im_over_t(v, b, x) * re_charge(w, b, t_sq, x)
}

#[cfg(test)]
mod tests;
