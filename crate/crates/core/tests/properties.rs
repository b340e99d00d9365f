use std::f64::consts::PI;

use proptest::prelude::*;
use rand::SeedableRng;
use sphsplit::geometry::{
    cap_intersection_area, side_of, tau_hull, tau_separating, GreatCircle, Side, SphericalCap, UnitVec,
};
use sphsplit::process::{replicate, run, run_from, ProcessConfig, SimRng};
use sphsplit::stats::constant_adjacency_violations;
use sphsplit::tessellation::{validate, write_geometry, Class, Tessellation, CLASSES};

fn unit() -> impl Strategy<Value = UnitVec> {
    (-1.0f64..1.0, 0.0f64..2.0 * PI).prop_map(|(z, phi)| {
        let r = (1.0 - z * z).sqrt();
        UnitVec::new(r * phi.cos(), r * phi.sin(), z).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn every_realization_is_valid(seed in any::<u64>(), t in 0.0f64..2.5) {
        let r = run(&ProcessConfig::new(t, seed).unwrap()).unwrap();
        prop_assert_eq!(validate(&r.tessellation), Vec::<String>::new());
        let s = r.tessellation.summarize();
        prop_assert_eq!(s.segments, r.jumps);
        prop_assert!(constant_adjacency_violations(&s).is_empty());
        for x in CLASSES {
            for y in CLASSES {
                prop_assert_eq!(s.incidences.get(x, y), s.incidences.get(y, x));
            }
            // sides on a common carrier can nest, so only they exceed their count
            if x == Class::Side {
                prop_assert!(s.incidences.get(x, x) >= s.count(x));
            } else {
                prop_assert_eq!(s.incidences.get(x, x), s.count(x));
            }
        }
    }

    #[test]
    fn continuing_a_run_keeps_it_valid(seed in any::<u64>(), t1 in 0.0f64..1.0, dt in 0.0f64..1.0) {
        let first = run(&ProcessConfig::new(t1, seed).unwrap()).unwrap();
        let mut rng = SimRng::seed_from_u64(seed ^ 1);
        let second = run_from(first.tessellation.clone(), &ProcessConfig::new(t1 + dt, 0).unwrap(), &mut rng).unwrap();
        prop_assert!(validate(&second.tessellation).is_empty());
        prop_assert!(second.tessellation.summarize().cells >= first.tessellation.summarize().cells);
        prop_assert_eq!(second.tessellation.time(), t1 + dt);
    }

    #[test]
    fn any_hitting_circle_splits_a_hemisphere(u in unit()) {
        prop_assume!(u.z().abs() < 1.0 - 1e-9);
        let mut t = Tessellation::initial();
        let upper = t.live_cells().find(|&c| t.cells()[c].hemisphere > 0).unwrap();
        let g = GreatCircle::from_normal(u);
        let out = t.split(upper, &g).unwrap();
        prop_assert!(validate(&t).is_empty());
        let s = t.summarize();
        prop_assert_eq!((s.cells, s.edges, s.vertices, s.sides), (3, 3, 2, 5));
        let [plus, minus] = out.daughters;
        prop_assert!((t.cell_area(plus) + t.cell_area(minus) - 0.5).abs() < 1e-12);
        for v in t.cell_vertices(plus).chain(t.cell_vertices(minus)) {
            prop_assert_eq!(side_of(&g, t.vertices()[v].pos), Side::On);
        }
    }

    #[test]
    fn cap_lens_area_is_symmetric_and_bounded(a in unit(), b in unit(), r1 in 0.05f64..3.0, r2 in 0.05f64..3.0) {
        let x = cap_intersection_area(a, r1, b, r2);
        let y = cap_intersection_area(b, r2, a, r1);
        prop_assert!((x - y).abs() < 1e-12);
        let area = |r: f64| (1.0 - r.cos()) / 2.0;
        prop_assert!(x >= -1e-12);
        prop_assert!(x <= area(r1).min(area(r2)) + 1e-12);
    }

    #[test]
    fn hull_measure_brackets(
        th1 in 0.2f64..1.2, ph1 in 0.0f64..6.28, r1 in 0.02f64..0.3,
        th2 in 0.2f64..1.2, ph2 in 0.0f64..6.28, r2 in 0.02f64..0.3,
    ) {
        let c1 = SphericalCap::new(UnitVec::from_spherical(th1, ph1), r1).unwrap();
        let c2 = SphericalCap::new(UnitVec::from_spherical(th2, ph2), r2).unwrap();
        prop_assume!(c1.gap(&c2) > 1e-6 && c1.shares_open_hemisphere(&c2));
        // circles hitting the hull hit a cap or separate them, so
        // max(τ₁, τ₂) + τ_sep ≤ τ_h ≤ τ₁ + τ₂ + τ_sep
        let (t1, t2) = (c1.hitting_measure(), c2.hitting_measure());
        let sep = tau_separating(&c1, &c2).unwrap();
        let h = tau_hull(&c1, &c2).unwrap();
        prop_assert!(sep >= 0.0);
        prop_assert!(h >= t1.max(t2) + sep - 1e-12);
        prop_assert!(h <= t1 + t2 + sep + 1e-12);
    }

    #[test]
    fn export_has_one_line_per_edge(seed in any::<u64>()) {
        let r = run(&ProcessConfig::new(1.0, seed).unwrap()).unwrap();
        let mut buf = Vec::new();
        write_geometry(&r.tessellation, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let records: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
        prop_assert_eq!(records.len(), r.tessellation.live_edges().count());
        for l in records {
            prop_assert_eq!(l.split(',').count(), 13);
        }
    }
}

#[test]
fn output_does_not_depend_on_thread_count() {
    let config = ProcessConfig::new(1.5, 77).unwrap();
    let a = replicate(&config, 200, Some(1)).unwrap();
    let b = replicate(&config, 200, Some(4)).unwrap();
    assert_eq!(a, b);
}
