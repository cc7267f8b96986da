//! Auditors for finite IMs: invulnerability, validity (general and
//! vacuous-prior forms), strong validity, no sure loss, and a search for
//! false-confidence witnesses.
//!
//! Every property quantifies over all real thresholds, but the indicator
//! `1{Π̲_y(H) > β}` only changes when `β` crosses an attained value. The
//! critical points (attained values, `0`, `1`, midpoints, optional grid) cut
//! `[0, 1]` into cells `[lo, hi)` on which the accepted event is constant.
//! Within a cell the scrutinizer's payoff falls and the validity margin grows
//! as `β` rises, so each cell is scored at its limit `β → hi⁻`. Verdicts and
//! margins are therefore suprema, unchanged by adding grid points. Comparisons
//! against stored table values are exact.
//!
//! Strong validity asks whether `Π̲_y(H) > 1 − α` for *some* `H ∌ θ`. Since
//! `H ↦ Π̲_y(H)` is monotone and every such `H` is contained in `𝕋 ∖ {θ}`,
//! the event reduces to the single check `Π̲_y(𝕋 ∖ {θ}) > 1 − α`.

use std::fmt;

use crate::credal::{joint_lower_prevision, joint_upper_prevision, CredalModel, JointGamble, Likelihood};
use crate::error::{Error, Result};
use crate::frame::Subset;
use crate::im_table::IMTable;
use crate::mass::MassFunction;
use crate::scalar::{max_of, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    Invulnerability,
    Validity,
    VacuousValidity,
    StrongValidity,
    NoSureLoss,
}

impl Property {
    pub const ALL: [Property; 5] = [
        Property::Invulnerability,
        Property::Validity,
        Property::VacuousValidity,
        Property::StrongValidity,
        Property::NoSureLoss,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Invulnerability => "invulnerability",
            Property::Validity => "validity",
            Property::VacuousValidity => "vacuous-validity",
            Property::StrongValidity => "strong-validity",
            Property::NoSureLoss => "no-sure-loss",
        }
    }

    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuditConfig {
    /// Numerical slack on every verdict comparison.
    pub slack: f64,
    /// Minimum margin for a false-confidence witness.
    pub witness_margin: f64,
    /// Extra uniform grid points `k / (n + 1)` added to every threshold set.
    pub extra_grid_points: usize,
}

impl Default for AuditConfig {
    fn default() -> Self {
        Self { slack: 1e-10, witness_margin: 1e-8, extra_grid_points: 0 }
    }
}

/// A concrete violation.
#[derive(Clone, Debug, PartialEq)]
pub struct Witness<S: Scalar = f64> {
    pub property: Property,
    /// Absent for strong validity, whose event ranges over all hypotheses.
    pub hypothesis: Option<Subset>,
    /// Parameter value at which a vacuous-prior violation occurs.
    pub theta: Option<usize>,
    /// `β` for invulnerability, `α` for the validity family, absent for no sure loss.
    /// For threshold properties this is the cell boundary the violation
    /// approaches; the event itself holds strictly inside the cell.
    pub threshold: Option<S>,
    /// A threshold inside the cell (same parametrization) where the violation
    /// is realized with at least half of `margin`.
    pub realized: Option<S>,
    pub achieved: S,
    pub bound: S,
    /// How far `achieved` is on the wrong side of `bound`.
    pub margin: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuditReport<S: Scalar = f64> {
    pub property: Property,
    /// Worst violation per hypothesis, ordered by hypothesis mask.
    pub witnesses: Vec<Witness<S>>,
    pub thresholds_examined: usize,
}

impl<S: Scalar> AuditReport<S> {
    pub fn passed(&self) -> bool {
        self.witnesses.is_empty()
    }

    /// Largest-margin witness; ties go to the smallest hypothesis mask.
    pub fn worst(&self) -> Option<&Witness<S>> {
        self.witnesses.iter().fold(None, |best: Option<&Witness<S>>, w| match best {
            Some(b) if b.margin >= w.margin => Some(b),
            _ => Some(w),
        })
    }
}

/// Sorted, de-duplicated thresholds: the given values, `0`, `1`, midpoints
/// between neighbours, and `extra` uniform grid points.
pub(crate) fn critical_thresholds<S: Scalar>(values: impl IntoIterator<Item = S>, extra: usize) -> Vec<S> {
    let mut points: Vec<S> = values.into_iter().collect();
    points.push(S::zero());
    points.push(S::one());
    sort_dedup(&mut points);
    let mids: Vec<S> = points
        .windows(2)
        .map(|w| (w[0].clone() + w[1].clone()) * S::half())
        .collect();
    points.extend(mids);
    if extra > 0 {
        let denom = S::from_usize(extra + 1).expect("grid size fits the scalar");
        points.extend((1..=extra).map(|k| S::from_usize(k).expect("grid index fits") / denom.clone()));
    }
    sort_dedup(&mut points);
    points
}

/// Consecutive critical points `(lo, hi)`.
fn cells<S: Scalar>(points: &[S]) -> impl Iterator<Item = (&S, &S)> {
    points.windows(2).map(|w| (&w[0], &w[1]))
}

/// `max(lo, hi − margin / 2)`: inside `[lo, hi)` and close enough to `hi`
/// that a unit-slope payoff keeps half the limiting margin.
fn realized_beta<S: Scalar>(lo: &S, hi: &S, margin: &S) -> S {
    let r = hi.clone() - margin.clone() * S::half();
    if r < *lo {
        lo.clone()
    } else {
        r
    }
}

fn sort_dedup<S: Scalar>(points: &mut Vec<S>) {
    points.sort_by(|a, b| a.partial_cmp(b).expect("thresholds are finite"));
    points.dedup();
}

fn check_frames<S: Scalar>(model: &CredalModel<S>, im: &IMTable<S>) -> Result<()> {
    model.data_frame().ensure_same(im.data_frame(), "IM data frame differs from the model")?;
    model.param_frame().ensure_same(im.param_frame(), "IM parameter frame differs from the model")
}

/// Data points where `Π̲_y(H) > β`, as a mask.
fn active_mask<S: Scalar>(im: &IMTable<S>, bits: u64, beta: &S) -> u64 {
    (0..im.data_frame().len())
        .filter(|&y| im.lower_bits(y, bits) > beta)
        .fold(0u64, |mask, y| mask | (1 << y))
}

fn hypothesis_values<S: Scalar>(im: &IMTable<S>, bits: u64) -> Vec<S> {
    (0..im.data_frame().len()).map(|y| im.lower_bits(y, bits).clone()).collect()
}

/// The scrutinizer's gamble `f^{H,β}(y,θ) = (1(θ∈H) − β) · 1{Π̲_y(H) > β}`:
/// the statistician's payoff from paying `β` for `1(θ ∈ H)` whenever the IM
/// prices `H` above `β`.
pub fn scrutinizer_gamble<S: Scalar>(im: &IMTable<S>, hypothesis: &Subset, beta: &S) -> Result<JointGamble<S>> {
    im.param_frame().ensure_same(hypothesis.frame(), "scrutinizer hypothesis")?;
    masked_gamble(im, hypothesis, active_mask(im, hypothesis.bits(), beta), beta)
}

/// `(1(θ∈H) − β) · 1{y ∈ active}`.
fn masked_gamble<S: Scalar>(im: &IMTable<S>, hypothesis: &Subset, active: u64, beta: &S) -> Result<JointGamble<S>> {
    JointGamble::from_fn(im.data_frame(), im.param_frame(), |y, theta| {
        if active & (1 << y) == 0 {
            S::zero()
        } else if hypothesis.contains(theta) {
            S::one() - beta.clone()
        } else {
            -beta.clone()
        }
    })
}

/// `lim_{β → hi⁻} P̲(f^{H,β})` for the cell `[lo, hi)`.
pub(crate) fn cell_limit_payoff<S: Scalar>(
    model: &CredalModel<S>,
    im: &IMTable<S>,
    hypothesis: &Subset,
    lo: &S,
    hi: &S,
) -> Result<S> {
    let active = active_mask(im, hypothesis.bits(), lo);
    joint_lower_prevision(model, &masked_gamble(im, hypothesis, active, hi)?)
}

/// Invulnerability: `P̲_{Y,Θ}(f^{H,β}) ≥ 0` for all `H` and `β`.
pub fn audit_invulnerability<S: Scalar>(
    model: &CredalModel<S>,
    im: &IMTable<S>,
    config: &AuditConfig,
) -> Result<AuditReport<S>> {
    check_frames(model, im)?;
    let slack = S::from_f64_lossy(config.slack);
    let mut witnesses = Vec::new();
    let mut examined = 0;
    for hypothesis in im.param_frame().power_set() {
        let mut worst: Option<Witness<S>> = None;
        let points = critical_thresholds(hypothesis_values(im, hypothesis.bits()), config.extra_grid_points);
        for (lo, hi) in cells(&points) {
            examined += 1;
            let lower = cell_limit_payoff(model, im, &hypothesis, lo, hi)?;
            let margin = -lower.clone();
            if margin > slack && worst.as_ref().is_none_or(|w| margin > w.margin) {
                worst = Some(Witness {
                    property: Property::Invulnerability,
                    hypothesis: Some(hypothesis.clone()),
                    theta: None,
                    threshold: Some(hi.clone()),
                    realized: Some(realized_beta(lo, hi, &margin)),
                    achieved: lower,
                    bound: S::zero(),
                    margin,
                });
            }
        }
        witnesses.extend(worst);
    }
    Ok(AuditReport { property: Property::Invulnerability, witnesses, thresholds_examined: examined })
}

/// Validity: `P̄_{Y,Θ}{Π̲_Y(H) > 1 − α, Θ ∉ H} ≤ α` for all `H` and `α`.
///
/// Thresholds are enumerated as `β = 1 − α` so the event compares stored
/// values against `β` directly.
pub fn audit_validity<S: Scalar>(model: &CredalModel<S>, im: &IMTable<S>, config: &AuditConfig) -> Result<AuditReport<S>> {
    check_frames(model, im)?;
    let slack = S::from_f64_lossy(config.slack);
    let lik = model.likelihood();
    let n = im.param_frame().len();
    let mut witnesses = Vec::new();
    let mut examined = 0;
    for hypothesis in im.param_frame().power_set() {
        let bits = hypothesis.bits();
        let mut worst: Option<Witness<S>> = None;
        let points = critical_thresholds(hypothesis_values(im, bits), config.extra_grid_points);
        for (lo, hi) in cells(&points) {
            examined += 1;
            let alpha = S::one() - hi.clone();
            let active = active_mask(im, bits, lo);
            let error_rates: Vec<S> = (0..n)
                .map(|theta| if hypothesis.contains(theta) { S::zero() } else { lik.event_probability(theta, active) })
                .collect();
            let upper = model.prior().choquet(&error_rates, max_of);
            let margin = upper.clone() - alpha.clone();
            if margin > slack && worst.as_ref().is_none_or(|w| margin > w.margin) {
                worst = Some(Witness {
                    property: Property::Validity,
                    hypothesis: Some(hypothesis.clone()),
                    theta: None,
                    threshold: Some(alpha.clone()),
                    realized: Some(S::one() - realized_beta(lo, hi, &margin)),
                    achieved: upper,
                    bound: alpha,
                    margin,
                });
            }
        }
        witnesses.extend(worst);
    }
    Ok(AuditReport { property: Property::Validity, witnesses, thresholds_examined: examined })
}

/// Vacuous-prior validity: `sup_{θ∉H} P_{Y|θ}{Π̲_Y(H) > 1 − α} ≤ α`.
pub fn audit_validity_vacuous<S: Scalar>(
    likelihood: &Likelihood<S>,
    im: &IMTable<S>,
    config: &AuditConfig,
) -> Result<AuditReport<S>> {
    likelihood.data_frame().ensure_same(im.data_frame(), "IM data frame differs from the likelihood")?;
    likelihood.param_frame().ensure_same(im.param_frame(), "IM parameter frame differs from the likelihood")?;
    let slack = S::from_f64_lossy(config.slack);
    let mut witnesses = Vec::new();
    let mut examined = 0;
    for hypothesis in im.param_frame().power_set() {
        let mut worst = None;
        examined += scan_vacuous(likelihood, im, &hypothesis, config, &slack, Property::VacuousValidity, &mut worst);
        witnesses.extend(worst);
    }
    Ok(AuditReport { property: Property::VacuousValidity, witnesses, thresholds_examined: examined })
}

/// Scans the thresholds of one hypothesis for `P_θ{Π̲_Y(H) > 1 − α} − α > floor`
/// with `θ ∉ H`, keeping the first maximal violation.
fn scan_vacuous<S: Scalar>(
    likelihood: &Likelihood<S>,
    im: &IMTable<S>,
    hypothesis: &Subset,
    config: &AuditConfig,
    floor: &S,
    property: Property,
    worst: &mut Option<Witness<S>>,
) -> usize {
    let bits = hypothesis.bits();
    let points = critical_thresholds(hypothesis_values(im, bits), config.extra_grid_points);
    let examined = points.len() - 1;
    for (lo, hi) in cells(&points) {
        let alpha = S::one() - hi.clone();
        let active = active_mask(im, bits, lo);
        for theta in (0..im.param_frame().len()).filter(|t| !hypothesis.contains(*t)) {
            let rate = likelihood.event_probability(theta, active);
            let margin = rate.clone() - alpha.clone();
            if margin > *floor && worst.as_ref().is_none_or(|w| margin > w.margin) {
                *worst = Some(Witness {
                    property,
                    hypothesis: Some(hypothesis.clone()),
                    theta: Some(theta),
                    threshold: Some(alpha.clone()),
                    realized: Some(S::one() - realized_beta(lo, hi, &margin)),
                    achieved: rate,
                    bound: alpha.clone(),
                    margin,
                });
            }
        }
    }
    examined
}

/// Strong validity: `P̄_{Y,Θ}{Π̲_Y(H) > 1 − α for some H ∌ Θ} ≤ α` for all `α`.
pub fn audit_strong_validity<S: Scalar>(
    model: &CredalModel<S>,
    im: &IMTable<S>,
    config: &AuditConfig,
) -> Result<AuditReport<S>> {
    check_frames(model, im)?;
    let slack = S::from_f64_lossy(config.slack);
    let lik = model.likelihood();
    let n = im.param_frame().len();
    let full = im.param_frame().full_bits();
    let n_data = im.data_frame().len();
    // lower[y][θ] = Π̲_y(𝕋 ∖ {θ})
    let lower: Vec<Vec<S>> = (0..n_data)
        .map(|y| (0..n).map(|t| im.lower_bits(y, full & !(1 << t)).clone()).collect())
        .collect();
    let thresholds = critical_thresholds(lower.iter().flatten().cloned(), config.extra_grid_points);
    let mut worst: Option<Witness<S>> = None;
    for (lo, hi) in cells(&thresholds) {
        let alpha = S::one() - hi.clone();
        let rates: Vec<S> = (0..n)
            .map(|theta| {
                let active = (0..n_data).filter(|&y| lower[y][theta] > *lo).fold(0u64, |m, y| m | (1 << y));
                lik.event_probability(theta, active)
            })
            .collect();
        let upper = model.prior().choquet(&rates, max_of);
        let margin = upper.clone() - alpha.clone();
        if margin > slack && worst.as_ref().is_none_or(|w| margin > w.margin) {
            worst = Some(Witness {
                property: Property::StrongValidity,
                hypothesis: None,
                theta: None,
                threshold: Some(alpha.clone()),
                realized: Some(S::one() - realized_beta(lo, hi, &margin)),
                achieved: upper,
                bound: alpha,
                margin,
            });
        }
    }
    Ok(AuditReport {
        property: Property::StrongValidity,
        witnesses: worst.into_iter().collect(),
        thresholds_examined: thresholds.len() - 1,
    })
}

/// No sure loss: `inf_y Π̲_y(H) ≤ P̄_Θ(H)` for all `H`. A witness's margin is
/// the scrutinizer's riskless profit from buying `1(Θ ∈ H)` at the prior upper
/// price and selling it back at the posterior lower price.
pub fn audit_no_sure_loss<S: Scalar>(
    prior: &MassFunction<S>,
    im: &IMTable<S>,
    config: &AuditConfig,
) -> Result<AuditReport<S>> {
    prior.frame().ensure_same(im.param_frame(), "IM parameter frame differs from the prior")?;
    let slack = S::from_f64_lossy(config.slack);
    let mut witnesses = Vec::new();
    let mut examined = 0;
    for hypothesis in im.param_frame().power_set() {
        examined += 1;
        let bits = hypothesis.bits();
        let inf = hypothesis_values(im, bits)
            .into_iter()
            .reduce(crate::scalar::min_of)
            .expect("data frames are non-empty");
        let upper = prior.plausibility_bits(bits);
        let margin = inf.clone() - upper.clone();
        if margin > slack {
            witnesses.push(Witness {
                property: Property::NoSureLoss,
                hypothesis: Some(hypothesis),
                theta: None,
                threshold: None,
                realized: None,
                achieved: inf,
                bound: upper,
                margin,
            });
        }
    }
    Ok(AuditReport { property: Property::NoSureLoss, witnesses, thresholds_examined: examined })
}

/// Largest violation of vacuous-prior validity with margin above
/// `config.witness_margin`: a false hypothesis the IM tends to believe.
/// Ties resolve to the smallest `(H, β, θ)` in scan order.
pub fn false_confidence_search<S: Scalar>(
    likelihood: &Likelihood<S>,
    im: &IMTable<S>,
    config: &AuditConfig,
) -> Result<Option<Witness<S>>> {
    likelihood.data_frame().ensure_same(im.data_frame(), "IM data frame differs from the likelihood")?;
    likelihood.param_frame().ensure_same(im.param_frame(), "IM parameter frame differs from the likelihood")?;
    let floor = S::from_f64_lossy(config.witness_margin);
    let mut worst = None;
    for hypothesis in im.param_frame().power_set() {
        let mut local = None;
        scan_vacuous(likelihood, im, &hypothesis, config, &floor, Property::VacuousValidity, &mut local);
        if let Some(w) = local {
            if worst.as_ref().is_none_or(|b: &Witness<S>| w.margin > b.margin) {
                worst = Some(w);
            }
        }
    }
    Ok(worst)
}

/// The scrutinizer's gamble at `β = 1 − α` together with the dominating gamble
/// `f̌(y,θ) = α − 1{Π̲_y(H) > 1 − α, θ ∉ H}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CheckGambles<S: Scalar = f64> {
    pub gamble: JointGamble<S>,
    pub check: JointGamble<S>,
}

/// Builds both gambles. The active payoff of `f` is written as `α − 1(θ ∉ H)`
/// so `f ≤ f̌` holds exactly, and `P̲(f̌) = α − P̄{Π̲_Y(H) > 1 − α, Θ ∉ H}`.
pub fn build_check_gamble<S: Scalar>(im: &IMTable<S>, hypothesis: &Subset, alpha: &S) -> Result<CheckGambles<S>> {
    im.param_frame().ensure_same(hypothesis.frame(), "check-gamble hypothesis")?;
    if *alpha < S::zero() || *alpha > S::one() {
        return Err(Error::InvalidArgument(format!("alpha {alpha} outside [0, 1]")));
    }
    let beta = S::one() - alpha.clone();
    let active = active_mask(im, hypothesis.bits(), &beta);
    let is_active = |y: usize| active & (1 << y) != 0;
    let gamble = JointGamble::from_fn(im.data_frame(), im.param_frame(), |y, theta| {
        if !is_active(y) {
            S::zero()
        } else if hypothesis.contains(theta) {
            alpha.clone()
        } else {
            alpha.clone() - S::one()
        }
    })?;
    let check = JointGamble::from_fn(im.data_frame(), im.param_frame(), |y, theta| {
        if is_active(y) && !hypothesis.contains(theta) {
            alpha.clone() - S::one()
        } else {
            alpha.clone()
        }
    })?;
    Ok(CheckGambles { gamble, check })
}

/// `P̄_{Y,Θ}{Π̲_Y(H) > 1 − α, Θ ∉ H}` through the generic joint-prevision path.
pub fn validity_error_probability<S: Scalar>(
    model: &CredalModel<S>,
    im: &IMTable<S>,
    hypothesis: &Subset,
    alpha: &S,
) -> Result<S> {
    let beta = S::one() - alpha.clone();
    let active = active_mask(im, hypothesis.bits(), &beta);
    let event = JointGamble::from_fn(im.data_frame(), im.param_frame(), |y, theta| {
        if active & (1 << y) != 0 && !hypothesis.contains(theta) {
            S::one()
        } else {
            S::zero()
        }
    })?;
    joint_upper_prevision(model, &event)
}

/// Runs the selected audits in order.
pub fn audit<S: Scalar>(
    model: &CredalModel<S>,
    im: &IMTable<S>,
    properties: &[Property],
    config: &AuditConfig,
) -> Result<Vec<AuditReport<S>>> {
    properties
        .iter()
        .map(|p| match p {
            Property::Invulnerability => audit_invulnerability(model, im, config),
            Property::Validity => audit_validity(model, im, config),
            Property::VacuousValidity => audit_validity_vacuous(model.likelihood(), im, config),
            Property::StrongValidity => audit_strong_validity(model, im, config),
            Property::NoSureLoss => audit_no_sure_loss(model.prior(), im, config),
        })
        .collect()
}
