//! Random-set IM for the normal location model `Y = θ + U`, `U ~ N(0, 1)`.
//!
//! The vacuous-prior IM uses the random interval
//! `𝕋_y = [y − |U*|, y + |U*|]` with `U* ~ N(0, 1)`. A prior random set with
//! finitely many nested focal intervals is combined with it by Dempster's
//! rule:
//!
//! ```text
//! Π̲_y(H) = P{∅ ≠ 𝕋_y ∩ T ⊆ H} / P{𝕋_y ∩ T ≠ ∅}
//! Π̄_y(H) = P{𝕋_y ∩ T ∩ H ≠ ∅} / P{𝕋_y ∩ T ≠ ∅}
//! ```
//!
//! Bounds are available by Monte Carlo for any finite union of intervals and
//! in closed form for half-lines `(−∞, θ]`.

use rand::Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::normal::{half_normal_cdf, half_normal_sf};
use crate::rng::SeedStreams;

/// Closed interval `[lo, hi]`; either end may be infinite.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo > hi || lo == f64::INFINITY || hi == f64::NEG_INFINITY {
            return Err(Error::InvalidArgument(format!("[{lo}, {hi}] is not a non-empty interval")));
        }
        Ok(Self { lo, hi })
    }

    pub const REAL_LINE: Interval = Interval { lo: f64::NEG_INFINITY, hi: f64::INFINITY };

    pub fn is_real_line(&self) -> bool {
        *self == Self::REAL_LINE
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Interval { lo, hi })
    }
}

/// A hypothesis: a finite union of closed intervals, kept merged and sorted.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn new(mut parts: Vec<Interval>) -> Self {
        parts.sort_by(|a, b| a.lo.total_cmp(&b.lo));
        let mut merged: Vec<Interval> = Vec::with_capacity(parts.len());
        for part in parts {
            match merged.last_mut() {
                Some(last) if part.lo <= last.hi => last.hi = last.hi.max(part.hi),
                _ => merged.push(part),
            }
        }
        Self { parts: merged }
    }

    pub fn real_line() -> Self {
        Self { parts: vec![Interval::REAL_LINE] }
    }

    /// `(−∞, θ]`.
    pub fn at_most(theta: f64) -> Self {
        Self { parts: vec![Interval { lo: f64::NEG_INFINITY, hi: theta }] }
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    /// Components are disjoint, so containment must happen within one of them.
    pub fn contains_interval(&self, other: &Interval) -> bool {
        self.parts.iter().any(|p| p.contains_interval(other))
    }

    pub fn meets(&self, other: &Interval) -> bool {
        self.parts.iter().any(|p| p.intersect(other).is_some())
    }

    pub fn is_subset_of(&self, other: &IntervalSet) -> bool {
        self.parts.iter().all(|p| other.contains_interval(p))
    }

    pub fn intersect_interval(&self, other: &Interval) -> IntervalSet {
        IntervalSet { parts: self.parts.iter().filter_map(|p| p.intersect(other)).collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FocalInterval {
    pub interval: Interval,
    pub mass: f64,
}

/// Prior random set on the real line with finitely many nested focal intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct IntervalPrior {
    /// Innermost first.
    focal: Vec<FocalInterval>,
}

impl IntervalPrior {
    pub fn new(mut focal: Vec<FocalInterval>) -> Result<Self> {
        if focal.is_empty() {
            return Err(Error::InvalidIntervalPrior("no focal intervals".into()));
        }
        if let Some(f) = focal.iter().find(|f| !(f.mass > 0.0 && f.mass.is_finite())) {
            return Err(Error::InvalidIntervalPrior(format!("mass {} must be positive", f.mass)));
        }
        let total: f64 = focal.iter().map(|f| f.mass).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidIntervalPrior(format!("masses sum to {total}, expected 1")));
        }
        // A nested chain sorted by upper end, then by descending lower end, runs innermost first.
        focal.sort_by(|a, b| {
            a.interval.hi.total_cmp(&b.interval.hi).then(b.interval.lo.total_cmp(&a.interval.lo))
        });
        for pair in focal.windows(2) {
            if pair[0].interval == pair[1].interval {
                return Err(Error::InvalidIntervalPrior("focal intervals must be distinct".into()));
            }
            if !pair[1].interval.contains_interval(&pair[0].interval) {
                return Err(Error::InvalidIntervalPrior(format!(
                    "focal intervals [{}, {}] and [{}, {}] are not nested",
                    pair[0].interval.lo, pair[0].interval.hi, pair[1].interval.lo, pair[1].interval.hi
                )));
            }
        }
        Ok(Self { focal })
    }

    pub fn vacuous() -> Self {
        Self { focal: vec![FocalInterval { interval: Interval::REAL_LINE, mass: 1.0 }] }
    }

    /// Mass `mass` on `(−∞, bound]`, the rest on the real line.
    pub fn at_most(bound: f64, mass: f64) -> Result<Self> {
        Self::new(vec![
            FocalInterval { interval: Interval::new(f64::NEG_INFINITY, bound)?, mass },
            FocalInterval { interval: Interval::REAL_LINE, mass: 1.0 - mass },
        ])
    }

    pub fn focal(&self) -> &[FocalInterval] {
        &self.focal
    }

    pub fn is_vacuous(&self) -> bool {
        self.focal.len() == 1 && self.focal[0].interval.is_real_line()
    }

    pub fn lower_probability(&self, hypothesis: &IntervalSet) -> f64 {
        self.focal.iter().filter(|f| hypothesis.contains_interval(&f.interval)).map(|f| f.mass).sum()
    }

    pub fn upper_probability(&self, hypothesis: &IntervalSet) -> f64 {
        self.focal.iter().filter(|f| hypothesis.meets(&f.interval)).map(|f| f.mass).sum()
    }

    fn pick(&self, u: f64) -> usize {
        let mut acc = 0.0;
        for (i, f) in self.focal.iter().enumerate() {
            acc += f.mass;
            if u < acc {
                return i;
            }
        }
        self.focal.len() - 1
    }
}

/// `Π̲_y((−∞, θ]) = P(y + |U*| ≤ θ)`.
pub fn vacuous_lower_cdf(y: f64, theta: f64) -> f64 {
    half_normal_cdf(theta - y)
}

/// `Π̄_y((−∞, θ]) = P(y − |U*| ≤ θ)`.
pub fn vacuous_upper_cdf(y: f64, theta: f64) -> f64 {
    half_normal_sf(y - theta)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { samples: 100_000, seed: crate::rng::DEFAULT_SEED }
    }
}

/// The Dempster-combined IM: vacuous-prior random interval plus a prior random set.
#[derive(Clone, Debug, PartialEq)]
pub struct CombinedIm {
    pub prior: IntervalPrior,
    pub mc: McConfig,
}

impl CombinedIm {
    pub fn new(prior: IntervalPrior, mc: McConfig) -> Result<Self> {
        if mc.samples == 0 {
            return Err(Error::InvalidArgument("Monte Carlo sample count must be at least 1".into()));
        }
        Ok(Self { prior, mc })
    }

    /// One `(|U*|, focal index)` pair per sample, each from its own substream.
    pub fn draws(&self) -> Vec<(f64, usize)> {
        let streams = SeedStreams::new(self.mc.seed);
        (0..self.mc.samples as u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = streams.substream(i);
                let u: f64 = rng.sample(StandardNormal);
                (u.abs(), self.prior.pick(rng.random::<f64>()))
            })
            .collect()
    }

    /// Monte Carlo bounds for several hypotheses from one shared set of draws.
    pub fn bounds_mc_many(&self, y: f64, hypotheses: &[IntervalSet]) -> Result<Vec<McEstimate>> {
        let draws = self.draws();
        let realized: Vec<Option<Interval>> = draws
            .iter()
            .map(|&(r, k)| Interval { lo: y - r, hi: y + r }.intersect(&self.prior.focal[k].interval))
            .collect();
        let accepted = realized.iter().filter(|r| r.is_some()).count();
        if accepted == 0 {
            return Err(Error::ConflictAtData { y });
        }
        Ok(hypotheses
            .iter()
            .map(|h| {
                let (inside, hit) = realized.iter().flatten().fold((0usize, 0usize), |(inside, hit), c| {
                    (inside + usize::from(h.contains_interval(c)), hit + usize::from(h.meets(c)))
                });
                McEstimate::from_counts(inside, hit, accepted, self.mc.samples)
            })
            .collect())
    }
}

/// Ratio estimates for the combined bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McEstimate {
    pub lower: f64,
    pub upper: f64,
    /// Larger of the two standard errors.
    pub std_error: f64,
    pub lower_std_error: f64,
    pub upper_std_error: f64,
    /// Samples with a non-empty combined focal set.
    pub accepted: usize,
    pub samples: usize,
}

impl McEstimate {
    fn from_counts(inside: usize, hit: usize, accepted: usize, samples: usize) -> Self {
        let lower = inside as f64 / accepted as f64;
        let upper = hit as f64 / accepted as f64;
        let lower_std_error = ratio_std_error(inside, accepted);
        let upper_std_error = ratio_std_error(hit, accepted);
        Self {
            lower,
            upper,
            std_error: lower_std_error.max(upper_std_error),
            lower_std_error,
            upper_std_error,
            accepted,
            samples,
        }
    }
}

/// Delta-method standard error of a ratio of nested indicator means, which
/// reduces to `sqrt(R(1 − R) / D)` with `D` the accepted count. `R` is
/// smoothed to `(k + 1) / (D + 2)` so a ratio estimated at exactly 0 or 1
/// keeps a non-zero error.
fn ratio_std_error(count: usize, accepted: usize) -> f64 {
    let r = (count as f64 + 1.0) / (accepted as f64 + 2.0);
    (r * (1.0 - r) / accepted as f64).sqrt()
}

/// Monte Carlo estimate of `(Π̲_y(H), Π̄_y(H))` for the combined IM.
pub fn combined_bounds_mc(im: &CombinedIm, y: f64, hypothesis: &IntervalSet) -> Result<McEstimate> {
    Ok(im.bounds_mc_many(y, std::slice::from_ref(hypothesis))?[0])
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CdfBounds {
    pub lower: f64,
    pub upper: f64,
}

/// Closed-form `(Π̲_y((−∞, θ]), Π̄_y((−∞, θ]))` for the combined IM.
///
/// With `R = |U*|` and focal interval `[a, b]`, the intersection
/// `[max(y − R, a), min(y + R, b)]` is non-empty iff `R ≥ r₀ = max(y − b, a − y)`.
/// It meets `(−∞, θ]` iff additionally `a ≤ θ` and `R ≥ y − θ`, and lies
/// inside it iff `b ≤ θ` or `R ≤ θ − y`. Each event is a range of `R`, whose
/// probability comes from `P(R ≤ r) = 2Φ(r) − 1`.
pub fn combined_cdf_analytic(prior: &IntervalPrior, y: f64, theta: f64) -> Result<CdfBounds> {
    if !y.is_finite() || theta.is_nan() {
        return Err(Error::InvalidArgument(format!("unsupported evaluation point y = {y}, θ = {theta}")));
    }
    let mut denominator = 0.0;
    let mut lower = 0.0;
    let mut upper = 0.0;
    for f in &prior.focal {
        let Interval { lo: a, hi: b } = f.interval;
        let r0 = (y - b).max(a - y);
        denominator += f.mass * half_normal_sf(r0);
        if a <= theta {
            upper += f.mass * half_normal_sf(r0.max(y - theta));
        }
        if b <= theta {
            lower += f.mass * half_normal_sf(r0);
        } else {
            let start = r0.max(0.0);
            if theta - y > start {
                lower += f.mass * (half_normal_cdf(theta - y) - half_normal_cdf(start));
            }
        }
    }
    if denominator <= 0.0 {
        return Err(Error::ConflictAtData { y });
    }
    Ok(CdfBounds { lower: (lower / denominator).min(1.0), upper: (upper / denominator).min(1.0) })
}

/// Interval between the `(1 − level)/2` quantile of the upper distribution
/// function and the `1 − (1 − level)/2` quantile of the lower one.
pub fn credible_interval(prior: &IntervalPrior, y: f64, level: f64) -> Result<(f64, f64)> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::InvalidArgument(format!("level {level} outside (0, 1)")));
    }
    let tail = (1.0 - level) / 2.0;
    let lo = quantile(|t| combined_cdf_analytic(prior, y, t).map(|b| b.upper), y, tail)?;
    let hi = quantile(|t| combined_cdf_analytic(prior, y, t).map(|b| b.lower), y, 1.0 - tail)?;
    Ok((lo, hi))
}

/// `inf{θ : cdf(θ) ≥ p}` by bisection to 1e-8, for a non-decreasing `cdf`
/// rising from 0 to 1.
fn quantile(cdf: impl Fn(f64) -> Result<f64>, centre: f64, p: f64) -> Result<f64> {
    let mut step = 1.0;
    let mut lo = centre - step;
    while cdf(lo)? >= p {
        step *= 2.0;
        lo = centre - step;
    }
    step = 1.0;
    let mut hi = centre + step;
    while cdf(hi)? < p {
        step *= 2.0;
        hi = centre + step;
    }
    while hi - lo > 1e-8 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid)? >= p {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// One row of the lower/upper distribution-function curves on `(−∞, θ]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurveRow {
    pub theta: f64,
    pub lower_vacuous: f64,
    pub upper_vacuous: f64,
    pub lower_combined: f64,
    pub upper_combined: f64,
}

/// `points` equally spaced values from `lo` to `hi`; a single point sits at `lo`.
pub fn theta_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if points == 0 || !lo.is_finite() || !hi.is_finite() || (points > 1 && lo >= hi) {
        return Err(Error::InvalidArgument(format!("cannot place {points} grid points on [{lo}, {hi}]")));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let step = (hi - lo) / (points - 1) as f64;
    Ok((0..points).map(|k| if k + 1 == points { hi } else { lo + step * k as f64 }).collect())
}

/// Curves with the combined columns in closed form.
pub fn cdf_curve(prior: &IntervalPrior, y: f64, thetas: &[f64]) -> Result<Vec<CurveRow>> {
    thetas
        .iter()
        .map(|&theta| {
            let combined = combined_cdf_analytic(prior, y, theta)?;
            Ok(CurveRow {
                theta,
                lower_vacuous: vacuous_lower_cdf(y, theta),
                upper_vacuous: vacuous_upper_cdf(y, theta),
                lower_combined: combined.lower,
                upper_combined: combined.upper,
            })
        })
        .collect()
}

/// Curves with the combined columns estimated from one shared set of draws.
pub fn cdf_curve_mc(im: &CombinedIm, y: f64, thetas: &[f64]) -> Result<Vec<CurveRow>> {
    let hypotheses: Vec<IntervalSet> = thetas.iter().map(|&t| IntervalSet::at_most(t)).collect();
    let estimates = im.bounds_mc_many(y, &hypotheses)?;
    Ok(thetas
        .iter()
        .zip(estimates)
        .map(|(&theta, e)| CurveRow {
            theta,
            lower_vacuous: vacuous_lower_cdf(y, theta),
            upper_vacuous: vacuous_upper_cdf(y, theta),
            lower_combined: e.lower,
            upper_combined: e.upper,
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normal::normal_cdf;

    fn normal_mean_prior() -> IntervalPrior {
        IntervalPrior::at_most(7.0, 0.9).unwrap()
    }

    #[test]
    fn vacuous_cdf_examples() {
        assert_eq!(vacuous_lower_cdf(5.0, 5.0), 0.0);
        assert!((vacuous_lower_cdf(0.0, 1.96) - 0.9500).abs() < 1e-4);
        assert_eq!(vacuous_lower_cdf(0.0, f64::INFINITY), 1.0);
        assert_eq!(vacuous_upper_cdf(5.0, 5.0), 1.0);
        assert!((vacuous_upper_cdf(1.96, 0.0) - 0.0500).abs() < 1e-4);
        assert_eq!(vacuous_upper_cdf(0.0, f64::NEG_INFINITY), 0.0);
        for i in -40..40 {
            let t = i as f64 / 10.0;
            assert!(vacuous_lower_cdf(0.3, t) <= vacuous_upper_cdf(0.3, t));
        }
    }

    #[test]
    fn prior_validation() {
        let real = Interval::REAL_LINE;
        let left = Interval::new(f64::NEG_INFINITY, 7.0).unwrap();
        let right = Interval::new(8.0, f64::INFINITY).unwrap();
        assert!(Interval::new(3.0, 2.0).is_err());
        assert!(IntervalPrior::new(vec![]).is_err());
        assert!(IntervalPrior::new(vec![
            FocalInterval { interval: left, mass: 0.5 },
            FocalInterval { interval: right, mass: 0.5 },
        ])
        .is_err());
        assert!(IntervalPrior::new(vec![
            FocalInterval { interval: left, mass: 0.5 },
            FocalInterval { interval: real, mass: 0.4 },
        ])
        .is_err());
        let p = IntervalPrior::new(vec![
            FocalInterval { interval: real, mass: 0.1 },
            FocalInterval { interval: left, mass: 0.9 },
        ])
        .unwrap();
        let q = normal_mean_prior();
        for (a, b) in p.focal().iter().zip(q.focal()) {
            assert_eq!(a.interval, b.interval);
            assert!((a.mass - b.mass).abs() < 1e-15);
        }
        assert_eq!(p.focal()[0].interval, left);
        assert!((p.lower_probability(&IntervalSet::at_most(7.0)) - 0.9).abs() < 1e-15);
        assert_eq!(p.upper_probability(&IntervalSet::at_most(7.0)), 1.0);
    }

    #[test]
    fn interval_set_logic() {
        let h = IntervalSet::new(vec![
            Interval::new(0.0, 1.0).unwrap(),
            Interval::new(0.5, 2.0).unwrap(),
            Interval::new(3.0, 4.0).unwrap(),
        ]);
        assert_eq!(h.parts().len(), 2);
        assert!(h.contains_interval(&Interval::new(0.2, 1.8).unwrap()));
        assert!(!h.contains_interval(&Interval::new(1.5, 3.5).unwrap()));
        assert!(h.meets(&Interval::new(2.5, 3.0).unwrap()));
        assert!(!h.meets(&Interval::new(2.1, 2.9).unwrap()));
        assert!(IntervalSet::at_most(1.0).is_subset_of(&IntervalSet::at_most(2.0)));
    }

    #[test]
    fn analytic_reduces_to_vacuous() {
        let vac = IntervalPrior::vacuous();
        for y in [-1.0, 0.0, 5.0, 9.0] {
            for i in -50..=50 {
                let t = y + i as f64 / 10.0;
                let b = combined_cdf_analytic(&vac, y, t).unwrap();
                assert!((b.lower - vacuous_lower_cdf(y, t)).abs() < 1e-15);
                assert!((b.upper - vacuous_upper_cdf(y, t)).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn analytic_denominator_examples() {
        // y = 5: the data interval always meets (−∞, 7], so no conflict.
        let p = normal_mean_prior();
        let b = combined_cdf_analytic(&p, 5.0, 100.0).unwrap();
        assert_eq!(b.lower, 1.0);
        // y = 9, θ = 7: denominator 1 − 0.9 (2Φ(2) − 1).
        let denom = 1.0 - 0.9 * (2.0 * normal_cdf(2.0) - 1.0);
        let upper_num = 0.9 * half_normal_sf(2.0) + 0.1 * half_normal_sf(2.0);
        let lower_num = 0.9 * half_normal_sf(2.0);
        let b = combined_cdf_analytic(&p, 9.0, 7.0).unwrap();
        assert!((b.upper - upper_num / denom).abs() < 1e-14);
        assert!((b.lower - lower_num / denom).abs() < 1e-14);
    }

    #[test]
    fn analytic_is_monotone_and_ordered() {
        let p = normal_mean_prior();
        for y in [5.0, 6.5, 7.5, 9.0] {
            let mut prev = CdfBounds { lower: 0.0, upper: 0.0 };
            for i in 0..=1400 {
                let t = i as f64 / 100.0;
                let b = combined_cdf_analytic(&p, y, t).unwrap();
                assert!(b.lower <= b.upper + 1e-15);
                assert!(b.lower >= prev.lower - 1e-15 && b.upper >= prev.upper - 1e-15);
                prev = b;
            }
        }
    }

    #[test]
    fn mc_full_space_and_vacuous() {
        let im = CombinedIm::new(IntervalPrior::vacuous(), McConfig { samples: 20_000, seed: 3 }).unwrap();
        let full = combined_bounds_mc(&im, 2.0, &IntervalSet::real_line()).unwrap();
        assert_eq!((full.lower, full.upper), (1.0, 1.0));
        let hyps: Vec<_> = (-20..=20).map(|i| IntervalSet::at_most(2.0 + i as f64 / 10.0)).collect();
        let est = im.bounds_mc_many(2.0, &hyps).unwrap();
        for (i, e) in est.iter().enumerate() {
            let t = 2.0 + (i as f64 - 20.0) / 10.0;
            assert!((e.lower - vacuous_lower_cdf(2.0, t)).abs() <= 3.0 * e.lower_std_error);
            assert!((e.upper - vacuous_upper_cdf(2.0, t)).abs() <= 3.0 * e.upper_std_error);
        }
        assert!(CombinedIm::new(IntervalPrior::vacuous(), McConfig { samples: 0, seed: 1 }).is_err());
    }

    #[test]
    fn mc_is_deterministic_across_thread_counts() {
        let im = CombinedIm::new(normal_mean_prior(), McConfig { samples: 5_000, seed: 11 }).unwrap();
        let h = IntervalSet::at_most(6.0);
        let a = combined_bounds_mc(&im, 7.5, &h).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| combined_bounds_mc(&im, 7.5, &h).unwrap());
        assert_eq!(a, b);
    }

    #[test]
    fn complete_conflict_is_reported() {
        // Prior sure that Θ ∈ [0, 1]; a single draw far away conflicts.
        let prior = IntervalPrior::new(vec![FocalInterval { interval: Interval::new(0.0, 1.0).unwrap(), mass: 1.0 }])
            .unwrap();
        let im = CombinedIm::new(prior.clone(), McConfig { samples: 1, seed: 1 }).unwrap();
        assert!(matches!(
            combined_bounds_mc(&im, 1e6, &IntervalSet::at_most(0.5)),
            Err(Error::ConflictAtData { .. })
        ));
        assert!(matches!(combined_cdf_analytic(&prior, 1e6, 0.5), Err(Error::ConflictAtData { .. })));
    }

    #[test]
    fn credible_interval_vacuous_length() {
        // Quantiles of 2Φ(θ − y) and 2Φ(θ − y) − 1 at 0.025 and 0.975 sit at
        // y ∓ Φ⁻¹(0.9875) = y ∓ 2.241402727604947.
        let (lo, hi) = credible_interval(&IntervalPrior::vacuous(), 3.0, 0.95).unwrap();
        assert!((lo - (3.0 - 2.241_402_727_604_947)).abs() < 1e-7);
        assert!((hi - (3.0 + 2.241_402_727_604_947)).abs() < 1e-7);
        assert!(credible_interval(&IntervalPrior::vacuous(), 3.0, 1.0).is_err());
    }

    #[test]
    fn credible_interval_combined_values() {
        let p = normal_mean_prior();
        for (y, expected) in [(5.0, 4.241_402_727_6), (7.5, 3.792_508_949_2), (9.0, 5.023_537_113_6)] {
            let (lo, hi) = credible_interval(&p, y, 0.95).unwrap();
            assert!(lo <= hi);
            assert!((hi - lo - expected).abs() < 1e-6, "y = {y}: {}", hi - lo);
        }
    }

    #[test]
    fn combined_upper_dominates_rescaled_vacuous() {
        // Upper bound on (−∞, θ] ∩ (−∞, 7] against the vacuous upper bound times the prior plausibility.
        let p = normal_mean_prior();
        for y in [4.0, 5.0, 6.5, 7.5, 9.0, 11.0] {
            for i in 0..=60 {
                let t = 3.0 + i as f64 / 6.0;
                let h = IntervalSet::at_most(t);
                let meet = t.min(7.0);
                let lhs = combined_cdf_analytic(&p, y, meet).unwrap().upper;
                let rhs = vacuous_upper_cdf(y, meet) * p.upper_probability(&h);
                assert!(lhs >= rhs - 1e-12, "y = {y}, θ = {t}: {lhs} < {rhs}");
            }
        }
    }

    #[test]
    fn upper_bound_is_monotone_in_hypothesis() {
        let im = CombinedIm::new(normal_mean_prior(), McConfig { samples: 4_000, seed: 5 }).unwrap();
        let small = IntervalSet::new(vec![Interval::new(5.0, 6.0).unwrap()]);
        let large = IntervalSet::new(vec![Interval::new(4.5, 6.5).unwrap(), Interval::new(8.0, 9.0).unwrap()]);
        assert!(small.is_subset_of(&large));
        for y in [5.0, 7.5, 9.0] {
            let est = im.bounds_mc_many(y, &[small.clone(), large.clone()]).unwrap();
            assert!(est[0].upper <= est[1].upper);
            assert!(est[0].lower <= est[1].lower);
        }
    }

    #[test]
    fn grid_and_curves() {
        assert_eq!(theta_grid(1.0, 1.0, 1).unwrap(), vec![1.0]);
        assert!(theta_grid(1.0, 0.0, 3).is_err());
        let g = theta_grid(-1.0, 1.0, 5).unwrap();
        assert_eq!(g, vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
        let rows = cdf_curve(&IntervalPrior::vacuous(), 0.0, &g).unwrap();
        assert!(rows.iter().all(|r| r.lower_vacuous == r.lower_combined && r.upper_vacuous == r.upper_combined));
        let im = CombinedIm::new(normal_mean_prior(), McConfig { samples: 2_000, seed: 2 }).unwrap();
        let mc = cdf_curve_mc(&im, 9.0, &g).unwrap();
        assert!(mc.windows(2).all(|w| w[0].upper_combined <= w[1].upper_combined));
    }
}
