//! Avoidance probabilities `1 − T_{Y_t}(C) = P(Y_t ∩ C = ∅)` for unions of
//! disjoint caps in one open hemisphere.

use serde::Serialize;

use super::StatsError;
use crate::geometry::{tau_hull, tau_separating, McEstimate, SphericalCap};
use crate::process::{replicate_with, run_from, ProcessConfig};
use crate::tessellation::Tessellation;

/// One or more pairwise disjoint caps inside the same open hemisphere.
#[derive(Clone, Debug, PartialEq)]
pub struct CapacitySpec {
    caps: Vec<SphericalCap>,
}

impl CapacitySpec {
    pub fn new(caps: Vec<SphericalCap>) -> Result<Self, StatsError> {
        if caps.is_empty() {
            return Err(StatsError::NoCaps);
        }
        let mut side = None;
        for (i, c) in caps.iter().enumerate() {
            let h = c.open_hemisphere().ok_or(StatsError::CapMeetsEquator(i))?;
            if *side.get_or_insert(h) != h {
                return Err(StatsError::CapsInDifferentHemispheres);
            }
            for (j, d) in caps[..i].iter().enumerate() {
                if c.gap(d) <= 0.0 {
                    return Err(StatsError::CapsOverlap(j, i));
                }
            }
        }
        Ok(CapacitySpec { caps })
    }

    pub fn single(cap: SphericalCap) -> Result<Self, StatsError> {
        Self::new(vec![cap])
    }

    pub fn caps(&self) -> &[SphericalCap] {
        &self.caps
    }
}

/// Whether no edge of `t` (including the unsubdivided equator) meets any cap.
pub fn misses(t: &Tessellation, spec: &CapacitySpec) -> bool {
    t.live_edges()
        .all(|e| spec.caps.iter().all(|c| !c.meets_arc(&t.edges()[e].arc)))
}

/// Fraction of `reps` realizations at time `t` that avoid every cap.
pub fn capacity_mc(
    spec: &CapacitySpec,
    t: f64,
    reps: usize,
    seed: u64,
    jobs: Option<usize>,
) -> Result<McEstimate, StatsError> {
    let config = ProcessConfig::new(t, seed)?;
    let hits = replicate_with(seed, reps, jobs, |_, rng| {
        run_from(Tessellation::initial(), &config, rng).map(|r| f64::from(u8::from(misses(&r.tessellation, spec))))
    })?;
    McEstimate::from_samples(hits).ok_or(StatsError::TooFewReplications { need: 1, got: 0 })
}

/// `e^{−t τ([C])} = e^{−t sin θ}` for a single cap.
pub fn capacity_single(cap: &SphericalCap, t: f64) -> f64 {
    (-t * cap.hitting_measure()).exp()
}

/// The ingredients of the two-cap formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TwoCapTerms {
    pub tau_1: f64,
    pub tau_2: f64,
    pub tau_separating: f64,
    pub tau_hull: f64,
    pub value: f64,
}

/// Avoidance probability of two caps:
///
/// ```text
/// e^{−tτ_h} + τ_sep ∫₀ᵗ e^{−sτ_h} e^{−(t−s)(τ₁+τ₂)} ds
/// ```
///
/// where `τ_h = τ([conv(C₁ ∪ C₂)])`: either no circle hits the hull up to
/// time `t`, or the first one separates the caps at time `s` and each cap
/// then evolves in its own cell.
pub fn capacity_two_caps(spec: &CapacitySpec, t: f64) -> Result<TwoCapTerms, StatsError> {
    let [c1, c2] = spec.caps() else {
        return Err(StatsError::NotTwoCaps(spec.caps().len()));
    };
    if !(t >= 0.0 && t.is_finite()) {
        return Err(StatsError::InvalidTime(t));
    }
    let (tau_1, tau_2) = (c1.hitting_measure(), c2.hitting_measure());
    let tau_sep = tau_separating(c1, c2)?;
    let tau_h = tau_hull(c1, c2)?;
    let delta = tau_h - tau_1 - tau_2;
    // ∫₀ᵗ e^{−sΔ} ds, continuous through Δ = 0
    let integral = if (delta * t).abs() < 1e-12 {
        t
    } else {
        -(-delta * t).exp_m1() / delta
    };
    let value = (-t * tau_h).exp() + tau_sep * (-t * (tau_1 + tau_2)).exp() * integral;
    Ok(TwoCapTerms {
        tau_1,
        tau_2,
        tau_separating: tau_sep,
        tau_hull: tau_h,
        value,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::UnitVec;
    use std::f64::consts::PI;

    fn cap(theta: f64, phi: f64, r: f64) -> SphericalCap {
        SphericalCap::new(UnitVec::from_spherical(theta, phi), r).unwrap()
    }

    #[test]
    fn spec_validation() {
        assert_eq!(CapacitySpec::new(vec![]), Err(StatsError::NoCaps));
        assert_eq!(CapacitySpec::single(cap(PI / 2.0, 0.0, 0.2)), Err(StatsError::CapMeetsEquator(0)));
        assert_eq!(
            CapacitySpec::new(vec![cap(0.5, 0.0, 0.2), cap(2.5, 0.0, 0.2)]),
            Err(StatsError::CapsInDifferentHemispheres)
        );
        assert_eq!(
            CapacitySpec::new(vec![cap(0.5, 0.0, 0.2), cap(0.5, 0.1, 0.2)]),
            Err(StatsError::CapsOverlap(0, 1))
        );
    }

    #[test]
    fn initial_tessellation_misses_caps_off_the_equator() {
        let spec = CapacitySpec::single(cap(PI / 4.0, 0.0, PI / 6.0)).unwrap();
        assert!(misses(&Tessellation::initial(), &spec));
        let e = capacity_mc(&spec, 0.0, 20, 1, None).unwrap();
        assert_eq!(e.mean, 1.0);
    }

    #[test]
    fn two_cap_limits() {
        let spec = CapacitySpec::new(vec![cap(PI / 4.0, 0.0, PI / 12.0), cap(PI / 4.0, PI / 2.0, PI / 12.0)]).unwrap();
        assert_eq!(capacity_two_caps(&spec, 0.0).unwrap().value, 1.0);
        let one = CapacitySpec::single(cap(PI / 4.0, 0.0, 0.3)).unwrap();
        assert_eq!(capacity_two_caps(&one, 1.0), Err(StatsError::NotTwoCaps(1)));
        // nearly touching caps: no separating circles, value is e^{−tτ_h}
        let th = 0.2;
        let touching = CapacitySpec::new(vec![cap(0.5, 0.0, th), cap(0.5 + 2.0 * th + 1e-9, 0.0, th)]).unwrap();
        let r = capacity_two_caps(&touching, 1.5).unwrap();
        assert!(r.tau_separating < 1e-6);
        assert!((r.value - (-1.5 * r.tau_hull).exp()).abs() < 1e-5);
    }

    #[test]
    fn two_cap_value_between_bounds() {
        // avoiding both is at least as likely as no circle touching the hull,
        // and at most as likely as avoiding either cap alone
        let spec = CapacitySpec::new(vec![cap(PI / 4.0, 0.0, 0.1), cap(PI / 4.0, PI, 0.1)]).unwrap();
        for t in [0.5, 1.0, 3.0] {
            let r = capacity_two_caps(&spec, t).unwrap();
            assert!(r.value >= (-t * r.tau_hull).exp());
            assert!(r.value <= (-t * r.tau_1.max(r.tau_2)).exp());
        }
    }
}
