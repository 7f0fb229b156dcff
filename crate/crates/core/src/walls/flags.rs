//! Numerical annotations on a wall. These are hints drawn from the pairing
//! data of each decomposition, not classifications of the wall-crossing.
//!
//! In Picard rank one there are no `(-2)`-curves (`2dc² = -2` has no
//! solution), so boundary walls of the geometric chamber are never of type
//! `(C_k)` and no flag for them exists.

use serde::{Deserialize, Serialize};

use super::{wall_of_pair, Wall, WallGeometry};
use crate::error::{Error, Result};
use crate::lattice::{MukaiClass, SurfaceData};
use crate::rational::Rat;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallFlags {
    pub has_spherical_destabilizer: bool,
    pub has_isotropic_destabilizer: bool,
    /// Some decomposition has `(w, v - w) = 1` with a spherical factor.
    pub pairing_one_with_spherical: bool,
    /// Some decomposition has `(w, v - w) ≥ 2`.
    pub pairing_at_least_two: bool,
    /// The vertical wall `b = 0` for `v = (1, 0, 1 - n)`.
    pub hilbert_chow: bool,
    /// The `O(-H)` wall for `v = (1, 0, 1 - n)` with `n ≤ d + 1`, where every
    /// ideal sheaf is destabilized.
    pub totally_semistable_hint: bool,
}

pub fn classify_wall(
    v: &MukaiClass,
    wall: &Wall,
    x: &SurfaceData,
    hilb_context: Option<(i64, i64)>,
) -> Result<WallFlags> {
    if let Some((d, _)) = hilb_context {
        if d != x.d() {
            return Err(Error::InvalidInput(format!(
                "Hilbert context has d = {d} but the surface has d = {}",
                x.d()
            )));
        }
    }
    let minus_two = Rat::from_int(-2);
    let mut flags = WallFlags::default();
    for dz in &wall.destabilizers {
        if &(&dz.class + &dz.complement) != v && &(&dz.class + &dz.complement) != &-v {
            return Err(Error::ForeignWall(
                v.to_string(),
                format!("{} + {} is not ±v", dz.class, dz.complement),
            ));
        }
        if wall_of_pair(v, &dz.class, x)?.as_ref() != Some(&wall.geometry) {
            return Err(Error::ForeignWall(
                v.to_string(),
                format!("{} does not lie on {:?}", dz.class, wall.geometry),
            ));
        }
        let squares = [dz.class.square(x), dz.complement.square(x)];
        let spherical = squares.contains(&minus_two);
        flags.has_spherical_destabilizer |= spherical;
        flags.has_isotropic_destabilizer |= squares.iter().any(Rat::is_zero);
        flags.pairing_one_with_spherical |= spherical && dz.pairing == Rat::one();
        flags.pairing_at_least_two |= dz.pairing >= Rat::from_int(2);
    }

    if let Some((d, n)) = hilb_context {
        let ideal = MukaiClass::ideal_sheaf(n);
        if v == &ideal || v == &-&ideal {
            flags.hilbert_chow = wall.geometry == WallGeometry::VerticalLine { b: Rat::zero() };
            let o_minus_h = MukaiClass::line_bundle(-1, x);
            flags.totally_semistable_hint =
                (wall.has_destabilizer(&o_minus_h) || wall.has_destabilizer(&-&o_minus_h))
                    && n <= d + 1;
        }
    }
    Ok(flags)
}
