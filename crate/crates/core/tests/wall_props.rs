use std::collections::BTreeSet;

use k3walls_core::charge::{im_over_t, StabilityPoint};
use k3walls_core::walls::{potential_destabilizers_with, walls_on_vertical_path};
use k3walls_core::{
    gieseker_bound, phase_compare, potential_destabilizers, slope_and_discrepancy,
    spherical_solver, wall_of_pair, Constraint, Execution, MukaiClass, Rat, RatInterval, Region,
    SurfaceData, WallGeometry,
};
use proptest::prelude::*;

fn integral() -> impl Strategy<Value = MukaiClass> {
    (-5i64..=5, -6i64..=6, -12i64..=12).prop_map(|(r, c, s)| MukaiClass::new(r, c, s))
}

fn iv(s: &str) -> RatInterval {
    s.parse().unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn sampled_wall_points_have_equal_phase(
        d in 1i64..=6, v in integral(), w in integral(), k in 1i64..=15
    ) {
        prop_assume!(!v.is_zero() && !w.is_zero() && !v.is_proportional_to(&w));
        let x = SurfaceData::new(d).unwrap();
        let Some(WallGeometry::Semicircle { center_b, radius_sq }) = wall_of_pair(&v, &w, &x).unwrap() else {
            return Ok(());
        };
        // rational points of the arc: b = center + u, T = R² - u²
        let u = Rat::new(k, 16);
        let t_sq = &radius_sq - u.square();
        prop_assume!(t_sq.is_positive());
        let p = StabilityPoint::new(&center_b + &u, t_sq).unwrap();
        prop_assert_eq!(phase_compare(&v, &w, &p, &x).unwrap(), std::cmp::Ordering::Equal);
    }

    #[test]
    fn wall_depends_only_on_the_decomposition(
        d in 1i64..=6, v in integral(), w in integral(), p in 1i64..=5, q in 1i64..=5
    ) {
        prop_assume!(!v.is_zero() && !w.is_zero() && !v.is_proportional_to(&w));
        let x = SurfaceData::new(d).unwrap();
        let g = wall_of_pair(&v, &w, &x).unwrap();
        prop_assert_eq!(&wall_of_pair(&v, &(&v - &w), &x).unwrap(), &g);
        prop_assert_eq!(&wall_of_pair(&v, &w.scale(&Rat::new(p, q)), &x).unwrap(), &g);
    }
}

fn geometries(walls: &[k3walls_core::Wall]) -> BTreeSet<WallGeometry> {
    walls.iter().map(|w| w.geometry.clone()).collect()
}

/// Around the line `b = -1` the wall set is already complete at rank 3.
#[test]
fn fixture_walls_are_stable_under_rank_bound() {
    for d in 1..=4 {
        for n in 2..=7 {
            let x = SurfaceData::new(d).unwrap();
            let v = MukaiClass::ideal_sheaf(n);
            for b_range in ["[-1,-1]", "[-9/8,-7/8]"] {
                let region = Region::new(iv(b_range), iv("(0,2]")).unwrap();
                let low = potential_destabilizers(&v, &region, 3, &x).unwrap();
                let high = potential_destabilizers(&v, &region, 6, &x).unwrap();
                assert_eq!(geometries(&low), geometries(&high), "d={d} n={n} b in {b_range}");
            }
        }
    }
}

/// Wider regions reach towards `b = 0`, where walls of higher-rank
/// destabilizers accumulate; the rank bound is then a genuine truncation.
#[test]
fn wide_regions_gain_higher_rank_walls() {
    let x = SurfaceData::new(1).unwrap();
    let v = MukaiClass::ideal_sheaf(3);
    let region = Region::new(iv("[-3/2,-1/2]"), iv("(0,2]")).unwrap();
    let low = potential_destabilizers(&v, &region, 3, &x).unwrap();
    let high = potential_destabilizers(&v, &region, 6, &x).unwrap();
    let rank_five = MukaiClass::new(5, -7, 10);
    assert!(!low.iter().any(|w| w.has_destabilizer(&rank_five)));
    let wall = high.iter().find(|w| w.has_destabilizer(&rank_five)).unwrap();
    assert_eq!(
        wall.geometry,
        WallGeometry::Semicircle { center_b: "-10/7".parse().unwrap(), radius_sq: "2/49".parse().unwrap() }
    );
}

#[test]
fn execution_modes_agree() {
    let x = SurfaceData::new(3).unwrap();
    let v = MukaiClass::new(2, -1, 3);
    let region = Region::new(iv("[-2,-1]"), iv("(0,3]")).unwrap();
    let seq = potential_destabilizers_with(&v, &region, 6, &x, Execution::Sequential).unwrap();
    let par = potential_destabilizers_with(&v, &region, 6, &x, Execution::Parallel).unwrap();
    assert_eq!(seq, par);
}

#[test]
fn gieseker_bound_dominates_walls_on_fixture_lines() {
    let b = Rat::from_int(-1);
    for d in 1..=3 {
        let x = SurfaceData::new(d).unwrap();
        for n in [3, 5, 7] {
            let v = MukaiClass::ideal_sheaf(n);
            let bound = gieseker_bound(&v, &b, &x).unwrap().t_bound;
            assert_eq!(bound, Rat::new(n + 1, d));
            let range = RatInterval::open_closed(Rat::zero(), &bound * 3);
            let crossings = walls_on_vertical_path(&v, &b, &range, 6, &x).unwrap();
            assert!(!crossings.is_empty());
            for c in crossings {
                assert!(c.t_sq <= bound, "d={d} n={n}: wall at T={} above {bound}", c.t_sq);
            }
        }
    }
}

#[test]
fn obstruction_family_has_no_spherical_solution() {
    let mut instances = 0;
    for k in (1..=9).step_by(2) {
        for n in 5..=21i64 {
            if (k * k * (n - 1)) % 4 != 0 {
                continue;
            }
            let x = SurfaceData::new(k * k * (n - 1) / 4).unwrap();
            let cons = [
                Constraint::new(MukaiClass::new(0, Rat::new(1, k), 1 - n), Rat::new(n - 1, 2)),
                Constraint::new(MukaiClass::ideal_sheaf(n), -1),
            ];
            assert_eq!(spherical_solver(&cons, &x).unwrap(), vec![], "k={k} n={n}");
            instances += 1;
        }
    }
    // n ≡ 1 mod 4 for each of the five odd k
    assert_eq!(instances, 25);
}

fn floor_i64(q: &Rat) -> i64 {
    Rat::from_bigint(q.floor()).to_i64().unwrap()
}

fn ceil_i64(q: &Rat) -> i64 {
    Rat::from_bigint(q.ceil()).to_i64().unwrap()
}

/// `D_v` by scanning a generous box and testing every defining condition.
fn dv_brute_force(v: &MukaiClass, b: &Rat, x: &SurfaceData) -> Vec<MukaiClass> {
    let sv = slope_and_discrepancy(v, b, x).unwrap();
    let r = v.r.to_i64().unwrap();
    let c_box = 4 * r * ceil_i64(&(v.c.abs() + (&v.r * b).abs() + 1));
    let d = x.d_rat();
    let mut out = Vec::new();
    for rw in 1..=r {
        for cw in -c_box..=c_box {
            let rq = Rat::from_int(rw);
            let cq = Rat::from_int(cw);
            // s ≤ (dc² + 1)/r from the square, s ≥ ... from δ(w) < δ(v)
            let s_hi = floor_i64(&((&d * cq.square() + 1) / &rq));
            let c_beta = &cq - &rq * b;
            let s_lo = floor_i64(
                &(Rat::from_int(2) * &d * b * &cq - &rq * &d * b.square()
                    + &rq * (Rat::one() - &sv.delta)
                    + &d * c_beta.square() / &rq),
            ) - 2;
            for sw in s_lo..=s_hi {
                let w = MukaiClass::new(rw, cw, sw);
                if w.square(x) < Rat::from_int(-2) {
                    continue;
                }
                let sw_data = slope_and_discrepancy(&w, b, x).unwrap();
                if sw_data.mu_hat.is_positive() && sw_data.mu_hat < sv.mu_hat && sw_data.delta < sv.delta {
                    out.push(w);
                }
            }
        }
    }
    out.sort();
    out
}

#[test]
fn dv_agrees_with_box_scan() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(0x5eed);
    let bs = ["0", "-1", "1/2", "-1/3", "1/4"];
    let mut cases = 0;
    while cases < 50 {
        let d = rng.random_range(1..=3);
        let x = SurfaceData::new(d).unwrap();
        let b: Rat = bs[rng.random_range(0..bs.len())].parse().unwrap();
        let r = rng.random_range(1..=3i64);
        let c = rng.random_range(-3..=4i64);
        let s = rng.random_range(-6..=6i64);
        let v = MukaiClass::new(r, c, s);
        if !im_over_t(&v, &b, &x).is_positive() {
            continue;
        }
        let report = gieseker_bound(&v, &b, &x).unwrap();
        assert_eq!(report.dv, dv_brute_force(&v, &b, &x), "v={v} b={b} d={d}");
        cases += 1;
    }
}
