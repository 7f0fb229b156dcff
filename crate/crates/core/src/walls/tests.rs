use super::*;
use crate::charge::{phase_compare, StabilityPoint};

fn surf(d: i64) -> SurfaceData {
    SurfaceData::new(d).unwrap()
}

fn iv(s: &str) -> RatInterval {
    s.parse().unwrap()
}

fn q(s: &str) -> Rat {
    s.parse().unwrap()
}

#[test]
fn first_wall_for_ideal_sheaves() {
    let x = surf(2);
    let g = wall_of_pair(&MukaiClass::new(1, 0, -4), &MukaiClass::new(1, -1, 3), &x)
        .unwrap()
        .unwrap();
    assert_eq!(
        g,
        WallGeometry::Semicircle {
            center_b: q("-7/4"),
            radius_sq: q("17/16")
        }
    );
    assert_eq!(g.t_sq_at(&Rat::from_int(-1)), Some(q("1/2")));
}

#[test]
fn point_class_gives_vertical_wall_at_zero() {
    for d in 1..6 {
        for n in 2..=10 {
            let x = surf(d);
            let g = wall_of_pair(&MukaiClass::ideal_sheaf(n), &MukaiClass::point(), &x).unwrap();
            assert_eq!(g, Some(WallGeometry::VerticalLine { b: Rat::zero() }));
        }
    }
}

#[test]
fn proportional_classes_are_rejected() {
    let v = MukaiClass::new(2, 1, -3);
    assert!(matches!(
        wall_of_pair(&v, &v.scale(&Rat::from_int(3)), &surf(1)),
        Err(Error::ProportionalClasses(..))
    ));
}

#[test]
fn walls_missing_the_upper_half_plane() {
    // Δ = 0 with vanishing denominator: v, w both with r = 0 and c = 0 parts aligned
    let x = surf(1);
    assert_eq!(
        wall_of_pair(&MukaiClass::new(0, 1, 0), &MukaiClass::new(0, 2, 1), &x).unwrap(),
        None
    );
    // a circle of non-positive radius²
    let v = MukaiClass::new(1, 0, 0);
    let w = MukaiClass::new(0, 1, 0);
    // center 0, radius² = -(0 - 0)/(dΔ) = 0
    assert_eq!(wall_of_pair(&v, &w, &x).unwrap(), None);
}

/// Bisection on `t` for the float alignment function on the line `b`.
fn float_crossing(v: &MukaiClass, w: &MukaiClass, b: f64, d: f64) -> Option<f64> {
    let f = |t: f64| {
        let parts = |m: &MukaiClass| {
            let (r, c, s) = (m.r.to_f64(), m.c.to_f64(), m.s.to_f64());
            let re = 2.0 * d * b * c - s - r * d * (b * b - t * t);
            let im = 2.0 * d * (c - r * b) * t;
            (re, im)
        };
        let (rv, iv) = parts(v);
        let (rw, iw) = parts(w);
        rv * iw - iv * rw
    };
    let (mut lo, mut hi) = (1e-9, 50.0);
    if f(lo).signum() == f(hi).signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo).signum() == f(mid).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[test]
fn semicircles_match_float_root_finding() {
    let x = surf(2);
    let v = MukaiClass::new(1, 0, -4);
    let mut checked = 0;
    for r in -3..=3 {
        for c in -4..=4 {
            for s in -6..=6 {
                let w = MukaiClass::new(r, c, s);
                if w.is_zero() || v.is_proportional_to(&w) {
                    continue;
                }
                let Some(g @ WallGeometry::Semicircle { .. }) = wall_of_pair(&v, &w, &x).unwrap()
                else {
                    continue;
                };
                for b in ["-1", "-3/2", "-1/3"] {
                    let b = q(b);
                    if im_over_t(&v, &b, &x).is_zero() {
                        continue;
                    }
                    let exact = g.t_sq_at(&b).map(|t| t.to_f64().sqrt());
                    let float = float_crossing(&v, &w, b.to_f64(), 2.0);
                    match (exact, float) {
                        (Some(e), Some(f)) => {
                            assert!((e - f).abs() < 1e-6, "{w} at b={b}: {e} vs {f}");
                            checked += 1;
                        }
                        (None, None) => {}
                        // crossings at the edge of, or outside, the bisection window
                        (e, f) => assert!(
                            e.map_or(true, |e| e > 49.0 || e < 1e-6)
                                && f.map_or(true, |f| f > 49.0 || f < 1e-6),
                            "{w} at b={b}: {e:?} vs {f:?}"
                        ),
                    }
                }
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn wall_points_are_phase_aligned() {
    let x = surf(3);
    let v = MukaiClass::new(2, -1, 4);
    let w = MukaiClass::new(1, -1, 2);
    let Some(WallGeometry::Semicircle { center_b, radius_sq }) = wall_of_pair(&v, &w, &x).unwrap()
    else {
        panic!("expected a semicircle");
    };
    for k in 1..8 {
        let b = &center_b + q(&format!("{k}/17")) - q("1/4");
        let t_sq = &radius_sq - (&b - &center_b).square();
        if !t_sq.is_positive() {
            continue;
        }
        let p = StabilityPoint::new(b, t_sq).unwrap();
        assert_eq!(phase_compare(&v, &w, &p, &x).unwrap(), std::cmp::Ordering::Equal);
    }
}

#[test]
fn fixture_region_contains_the_line_bundle_wall_on_top() {
    let x = surf(2);
    let v = MukaiClass::new(1, 0, -4);
    let region = Region::new(iv("[-3/2,-1/2]"), iv("(0,2]")).unwrap();
    let walls = potential_destabilizers(&v, &region, 3, &x).unwrap();
    let o_minus_h = MukaiClass::new(1, -1, 3);
    assert!(walls.iter().any(|w| w.has_destabilizer(&o_minus_h)));
    let half = q("1/2");
    let b = Rat::from_int(-1);
    let im_v = im_over_t(&v, &b, &x);
    for wall in &walls {
        // only walls whose destabilizer is a subobject on the line b = -1 itself
        let relevant = wall.destabilizers.iter().any(|dz| {
            let im_w = im_over_t(&dz.class, &b, &x);
            !im_w.is_negative() && im_w <= im_v
        });
        if let (true, Some(t)) = (relevant, wall.geometry.t_sq_at(&b)) {
            assert!(t <= half, "{:?} meets b = -1 at T = {t}", wall.geometry);
        }
        for dz in &wall.destabilizers {
            assert_eq!(wall_of_pair(&v, &dz.class, &x).unwrap().as_ref(), Some(&wall.geometry));
            assert!(dz.class.square(&x) >= Rat::from_int(-2));
            assert!(dz.complement.square(&x) >= Rat::from_int(-2));
        }
    }
}

/// Direct scan of the box `|r'| ≤ 4`, `|c'| ≤ 20`, with `s'` running over the
/// range allowed by the two square conditions, in plain integer arithmetic.
///
/// For each candidate the wall equation is solved for `T` at 65 evenly spaced
/// `b` in the region, and the wall is kept if some sample lands in the
/// `T`-range with `0 ≤ Im w ≤ Im v`. Vertical walls are tested at their own `b`.
fn brute_force_walls(v: [i64; 3], region: &Region, d: i64) -> Vec<WallGeometry> {
    let (b_lo, b_hi, t_lo, t_hi) = (&region.b.lo, &region.b.hi, &region.t_sq.lo, &region.t_sq.hi);
    assert!(!region.b.lo_open && !region.b.hi_open && !region.t_sq.hi_open);
    let as_frac = |x: &Rat| (x.numer().to_i64().unwrap() as i128, x.denom().to_i64().unwrap() as i128);
    let [rv, cv, sv] = v.map(i128::from);
    let d128 = i128::from(d);
    let steps = 64i128;
    let (bl_n, bl_d) = as_frac(b_lo);
    let (bh_n, bh_d) = as_frac(b_hi);
    // sample b_k = N_k / D on a common denominator
    let den = bl_d * bh_d * steps;
    let samples: Vec<i128> = (0..=steps)
        .map(|k| bl_n * bh_d * steps + k * (bh_n * bl_d - bl_n * bh_d))
        .collect();
    let (tl_n, tl_d) = as_frac(t_lo);
    let (th_n, th_d) = as_frac(t_hi);
    let x = surf(d);
    let vc = MukaiClass::new(v[0], v[1], v[2]);
    let mut found = std::collections::BTreeSet::new();
    for rw in -4i128..=4 {
        for cw in -20i128..=20 {
            let rest = rv - rw;
            let (mut lo, mut hi) = (-400i128, 400i128);
            // 2d·c² - 2r·s ≥ -2 for w and for v - w
            let own = d128 * cw * cw + 1;
            if rw > 0 {
                hi = hi.min(own.div_euclid(rw));
            } else if rw < 0 {
                lo = lo.max(-(own.div_euclid(-rw)));
            }
            let other = d128 * (cv - cw) * (cv - cw) + 1;
            if rest > 0 {
                lo = lo.max(sv - other.div_euclid(rest));
            } else if rest < 0 {
                hi = hi.min(sv + other.div_euclid(-rest));
            }
            for sw in lo..=hi {
                if (rw, cw, sw) == (0, 0, 0)
                    || (rv * cw == rw * cv && rv * sw == rw * sv && cv * sw == cw * sv)
                {
                    continue;
                }
                let delta = rv * cw - rw * cv;
                let lin = sv * rw - sw * rv;
                let cst = sw * cv - sv * cw;
                let sandwich = |n: i128| {
                    let (iw, ivv) = (cw * den - rw * n, cv * den - rv * n);
                    0 <= iw && iw <= ivv
                };
                let hit = if delta == 0 {
                    // vertical line b = -cst/lin
                    lin != 0 && {
                        let (bn, bd) = if lin > 0 { (-cst, lin) } else { (cst, -lin) };
                        let inside = bn * bl_d >= bl_n * bd && bn * bh_d <= bh_n * bd;
                        inside && {
                            let (iw, ivv) = (cw * bd - rw * bn, cv * bd - rv * bn);
                            0 <= iw && iw <= ivv
                        }
                    }
                } else {
                    samples.iter().any(|&n| {
                        // T = -(dΔ n² + lin·n·D + cst·D²) / (dΔ D²)
                        let mut num = -(d128 * delta * n * n + lin * n * den + cst * den * den);
                        let mut dd = d128 * delta * den * den;
                        if dd < 0 {
                            num = -num;
                            dd = -dd;
                        }
                        let above = if region.t_sq.lo_open {
                            num * tl_d > tl_n * dd
                        } else {
                            num * tl_d >= tl_n * dd
                        };
                        above && num * th_d <= th_n * dd && sandwich(n)
                    })
                };
                if hit {
                    let w = MukaiClass::new(rw as i64, cw as i64, sw as i64);
                    if let Some(g) = wall_of_pair(&vc, &w, &x).unwrap() {
                        found.insert(g);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

#[test]
fn large_volume_region_is_wall_free() {
    let x = surf(1);
    let v = MukaiClass::new(2, 1, 0);
    let region = Region::new(iv("[-1/4,1/4]"), iv("[4,8]")).unwrap();
    assert!(potential_destabilizers(&v, &region, 4, &x).unwrap().is_empty());
    assert!(brute_force_walls([2, 1, 0], &region, 1).is_empty());
}

#[test]
fn enumeration_covers_brute_force_on_a_lower_region() {
    let x = surf(1);
    let v = MukaiClass::new(2, 1, 0);
    let region = Region::new(iv("[-1/4,1/4]"), iv("(0,2]")).unwrap();
    let walls: Vec<WallGeometry> = potential_destabilizers(&v, &region, 4, &x)
        .unwrap()
        .into_iter()
        .map(|w| w.geometry)
        .collect();
    let oracle = brute_force_walls([2, 1, 0], &region, 1);
    assert!(!oracle.is_empty());
    for g in oracle {
        assert!(walls.contains(&g), "missing {g:?}");
    }
}

#[test]
fn point_class_has_no_destabilizers() {
    let region = Region::new(iv("[1/3,1/2]"), iv("[1,2]")).unwrap();
    assert!(potential_destabilizers(&MukaiClass::point(), &region, 4, &surf(1))
        .unwrap()
        .is_empty());
}

#[test]
fn region_errors() {
    let x = surf(1);
    let v = MukaiClass::new(1, 0, -1);
    assert!(matches!(
        Region::new(iv("[1,0]"), iv("(0,1]")),
        Err(Error::EmptyRegion(_))
    ));
    // Im Z(v) vanishes at b = 0, an interior point of [-1,1]
    let region = Region::new(iv("[-1,1]"), iv("(0,1]")).unwrap();
    assert!(potential_destabilizers(&v, &region, 2, &x).is_err());
    // but an endpoint is allowed
    let region = Region::new(iv("[-1,0]"), iv("(0,1]")).unwrap();
    assert!(potential_destabilizers(&v, &region, 2, &x).is_ok());
}

#[test]
fn vertical_path_through_first_wall() {
    let x = surf(2);
    let v = MukaiClass::new(1, 0, -4);
    let crossings = walls_on_vertical_path(&v, &Rat::from_int(-1), &iv("(0,2]"), 3, &x).unwrap();
    assert_eq!(crossings[0].t_sq, q("1/2"));
    assert!(crossings[0].wall.has_destabilizer(&MukaiClass::new(1, -1, 3)));
    for pair in crossings.windows(2) {
        assert!(pair[0].t_sq >= pair[1].t_sq);
    }
    for c in &crossings {
        assert!(c.wall.geometry.contains(&Rat::from_int(-1), &c.t_sq));
    }
}

#[test]
fn vertical_path_on_degenerate_line() {
    let x = surf(1);
    assert!(matches!(
        walls_on_vertical_path(&MukaiClass::ideal_sheaf(2), &Rat::zero(), &iv("(0,4]"), 3, &x),
        Err(Error::DegeneratePath(_))
    ));
}

#[test]
fn vertical_path_is_stable_under_rank_bound() {
    let x = surf(9);
    let v = MukaiClass::ideal_sheaf(5);
    let b = q("-2/3");
    let low = walls_on_vertical_path(&v, &b, &iv("(0,4]"), 5, &x).unwrap();
    let high = walls_on_vertical_path(&v, &b, &iv("(0,4]"), 8, &x).unwrap();
    assert!(!low.is_empty());
    let ts = |cs: &[PathCrossing]| cs.iter().map(|c| c.t_sq.clone()).collect::<Vec<_>>();
    assert_eq!(ts(&low), ts(&high));
}

#[test]
fn sequential_and_parallel_agree() {
    let x = surf(2);
    let v = MukaiClass::new(1, 0, -4);
    let region = Region::new(iv("[-3/2,-1/2]"), iv("(0,2]")).unwrap();
    let a = potential_destabilizers_with(&v, &region, 3, &x, Execution::Sequential).unwrap();
    let b = potential_destabilizers_with(&v, &region, 3, &x, Execution::Parallel).unwrap();
    assert_eq!(a, b);
}
