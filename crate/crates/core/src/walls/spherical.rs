//! Integral spherical classes subject to linear pairing constraints.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{MukaiClass, SurfaceData};
use crate::rational::Rat;

/// `(functional, ξ) = value`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Constraint {
    pub functional: MukaiClass,
    pub value: Rat,
}

impl Constraint {
    pub fn new(functional: MukaiClass, value: impl Into<Rat>) -> Self {
        Constraint {
            functional,
            value: value.into(),
        }
    }
}

/// Reduced row echelon form of an augmented system; returns pivot columns,
/// or `None` if the system is inconsistent.
fn rref(rows: &mut [[Rat; 4]]) -> Option<Vec<usize>> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..3 {
        let Some(p) = (row..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(row, p);
        let inv = rows[row][col].recip();
        for k in 0..4 {
            rows[row][k] = &rows[row][k] * &inv;
        }
        for i in 0..rows.len() {
            if i != row && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for k in 0..4 {
                    let delta = &f * &rows[row][k];
                    rows[i][k] -= &delta;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    let consistent = rows[row..].iter().all(|r| r[3].is_zero());
    consistent.then_some(pivots)
}

fn to_class(v: [Rat; 3]) -> MukaiClass {
    let [r, c, s] = v;
    MukaiClass { r, c, s }
}

/// All integral `ξ` with `(u_i, ξ) = a_i` for every constraint and `ξ² = -2`.
///
/// The linear conditions cut out a point or a line; on a line
/// `ξ = ξ₀ + α·k` the spherical condition is a quadratic in `α` solved over
/// the rationals, and integral solutions are kept. An empty result certifies
/// that no such class exists.
pub fn spherical_solver(constraints: &[Constraint], x: &SurfaceData) -> Result<Vec<MukaiClass>> {
    let two_d = x.h_squared();
    // (u, ξ) = 2d·c_u·c - r_u·s - s_u·r, as a row over (r, c, s | value)
    let mut rows: Vec<[Rat; 4]> = constraints
        .iter()
        .map(|k| {
            let u = &k.functional;
            [-&u.s, &two_d * &u.c, -&u.r, k.value.clone()]
        })
        .collect();
    let Some(pivots) = rref(&mut rows) else {
        return Ok(Vec::new());
    };
    let free: Vec<usize> = (0..3).filter(|c| !pivots.contains(c)).collect();
    if free.len() >= 2 {
        return Err(Error::UnderdeterminedSystem(free.len()));
    }

    let particular = {
        let mut p = [Rat::zero(), Rat::zero(), Rat::zero()];
        for (i, &col) in pivots.iter().enumerate() {
            p[col] = rows[i][3].clone();
        }
        to_class(p)
    };
    let minus_two = Rat::from_int(-2);

    let mut found = Vec::new();
    if free.is_empty() {
        if particular.square(x) == minus_two && particular.is_integral() {
            found.push(particular);
        }
        return Ok(found);
    }

    let f = free[0];
    let direction = {
        let mut k = [Rat::zero(), Rat::zero(), Rat::zero()];
        k[f] = Rat::one();
        for (i, &col) in pivots.iter().enumerate() {
            k[col] = -&rows[i][f];
        }
        to_class(k)
    };

    // (ξ₀ + αk)² = -2  ⟺  k²·α² + 2(ξ₀, k)·α + (ξ₀² + 2) = 0
    let a = direction.square(x);
    let b = Rat::from_int(2) * crate::lattice::mukai_pairing(&particular, &direction, x);
    let c = particular.square(x) + 2;
    let alphas: Vec<Rat> = if a.is_zero() {
        if b.is_zero() {
            if c.is_zero() {
                return Err(Error::UnboundedSolutions);
            }
            Vec::new()
        } else {
            vec![-c / b]
        }
    } else {
        let disc = b.square() - Rat::from_int(4) * &a * &c;
        match disc.sqrt_exact() {
            Some(root) => {
                let two_a = Rat::from_int(2) * &a;
                vec![(-&b + &root) / &two_a, (-&b - &root) / &two_a]
            }
            None => Vec::new(),
        }
    };
    for alpha in alphas {
        let xi = &particular + &direction.scale(&alpha);
        debug_assert_eq!(xi.square(x), minus_two);
        if xi.is_integral() && !found.contains(&xi) {
            found.push(xi);
        }
    }
    found.sort();
    Ok(found)
}
