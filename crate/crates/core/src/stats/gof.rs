use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF, Discrete, DiscreteCDF, Poisson};

use super::StatsError;

/// Smallest sample accepted by [`poisson_gof`].
pub const MIN_GOF_SAMPLE: usize = 100;

/// Minimum expected count per pooled bin.
const MIN_EXPECTED: f64 = 5.0;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GofResult {
    pub statistic: f64,
    pub df: usize,
    pub p_value: f64,
}

/// Pearson chi-square test of `counts` against Poisson(`mean`) with the mean
/// given, not fitted. Adjacent bins are pooled until each expects at least
/// five observations; the last bin collects the whole right tail.
pub fn poisson_gof(counts: &[u64], mean: f64) -> Result<GofResult, StatsError> {
    let n = counts.len();
    if n < MIN_GOF_SAMPLE {
        return Err(StatsError::InsufficientSample { need: MIN_GOF_SAMPLE, got: n });
    }
    if !(mean > 0.0 && mean.is_finite()) {
        return Err(StatsError::InvalidMean(mean));
    }
    let law = Poisson::new(mean).expect("positive mean");
    let max = *counts.iter().max().expect("nonempty") as usize;
    let mut observed = vec![0u64; max + 1];
    for &c in counts {
        observed[c as usize] += 1;
    }
    let nf = n as f64;
    // (expected, observed) per pooled bin
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut e, mut o) = (0.0, 0.0);
    let mut k = 0u64;
    loop {
        e += nf * law.pmf(k);
        o += observed.get(k as usize).copied().unwrap_or(0) as f64;
        let tail = nf * law.sf(k);
        if tail < MIN_EXPECTED {
            let rest: u64 = observed.iter().skip(k as usize + 1).sum();
            bins.push((e + tail, o + rest as f64));
            break;
        }
        if e >= MIN_EXPECTED {
            bins.push((e, o));
            e = 0.0;
            o = 0.0;
        }
        k += 1;
    }
    while bins.len() > 1 && bins[bins.len() - 1].0 < MIN_EXPECTED {
        let last = bins.pop().expect("nonempty");
        let prev = bins.last_mut().expect("nonempty");
        prev.0 += last.0;
        prev.1 += last.1;
    }
    if bins.len() < 2 {
        return Err(StatsError::TooFewBins);
    }
    let statistic: f64 = bins.iter().map(|(e, o)| (o - e) * (o - e) / e).sum();
    let df = bins.len() - 1;
    let p_value = ChiSquared::new(df as f64).expect("df ≥ 1").sf(statistic);
    Ok(GofResult { statistic, df, p_value })
}
