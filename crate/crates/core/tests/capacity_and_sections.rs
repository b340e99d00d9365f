use std::f64::consts::PI;

use sphsplit::geometry::{GreatCircle, SphericalCap, UnitVec};
use sphsplit::process::{replicate_runs, ProcessConfig};
use sphsplit::stats::{
    capacity_mc, capacity_single, capacity_two_caps, correlation, half_circle_mean, intersect_with_circle, mean_se,
    poisson_gof, CapacitySpec,
};

fn cap(colatitude: f64, longitude: f64, radius: f64) -> SphericalCap {
    SphericalCap::new(UnitVec::from_spherical(colatitude, longitude), radius).unwrap()
}

#[test]
fn single_cap_avoidance_is_exponential_in_its_hitting_measure() {
    let cases = [
        (cap(PI / 4.0, 0.0, PI / 6.0), 2.0),
        (cap(PI / 3.0, 1.0, 0.2), 1.0),
        (cap(2.5, -2.0, 0.4), 3.0),
    ];
    for (k, (c, t)) in cases.into_iter().enumerate() {
        let spec = CapacitySpec::single(c).unwrap();
        let e = capacity_mc(&spec, t, 40_000, 200 + k as u64, None).unwrap();
        let want = capacity_single(&c, t);
        assert!((e.mean - want).abs() <= 3.0 * e.se, "case {k}: {e:?} vs {want}");
    }
}

#[test]
fn two_cap_formula_matches_simulation() {
    let configs = [
        (vec![cap(PI / 4.0, 0.0, PI / 12.0), cap(PI / 4.0, PI / 2.0, PI / 12.0)], 1.0),
        (vec![cap(1.0, 0.0, 0.3), cap(1.2, 2.5, 0.2)], 0.5),
        (vec![cap(2.0, 0.0, 0.25), cap(2.6, 0.5, 0.15)], 2.0),
    ];
    for (k, (caps, t)) in configs.into_iter().enumerate() {
        let spec = CapacitySpec::new(caps).unwrap();
        let exact = capacity_two_caps(&spec, t).unwrap();
        let e = capacity_mc(&spec, t, 40_000, 210 + k as u64, None).unwrap();
        assert!((e.mean - exact.value).abs() <= 3.0 * e.se, "config {k}: {e:?} vs {exact:?}");
    }
}

#[test]
fn meridian_section_is_poisson_on_each_half() {
    let t = 1.0;
    let g = GreatCircle::from_normal(UnitVec::new(0.6, 0.8, 0.0).unwrap());
    let runs = replicate_runs(&ProcessConfig::new(t, 220).unwrap(), 10_000, None).unwrap();
    let (mut up, mut down) = (Vec::new(), Vec::new());
    for r in &runs {
        let x = intersect_with_circle(&r.tessellation, &g).unwrap();
        up.push(x.upper.len() as u64);
        down.push(x.lower.len() as u64);
    }
    for counts in [&up, &down] {
        let f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
        let (m, se) = mean_se(&f).unwrap();
        assert!((m - half_circle_mean(t)).abs() <= 3.0 * se, "{m} ± {se}");
        assert!(poisson_gof(counts, half_circle_mean(t)).unwrap().p_value > 0.01);
    }
    let f = |v: &[u64]| v.iter().map(|&c| c as f64).collect::<Vec<_>>();
    let (r, se) = correlation(&f(&up), &f(&down)).unwrap();
    assert!(r.abs() <= 3.0 * se, "{r} ± {se}");
}

#[test]
fn tilted_section_is_poisson_too() {
    let t = 2.0;
    let g = GreatCircle::from_normal(UnitVec::new(0.3, -0.5, 0.8).unwrap());
    let runs = replicate_runs(&ProcessConfig::new(t, 221).unwrap(), 10_000, None).unwrap();
    let up: Vec<u64> = runs
        .iter()
        .map(|r| intersect_with_circle(&r.tessellation, &g).unwrap().upper.len() as u64)
        .collect();
    assert!(poisson_gof(&up, half_circle_mean(t)).unwrap().p_value > 0.01);
}
