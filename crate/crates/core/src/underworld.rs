//! Betting simulations: a die bettor, a wager on the bettor's ruin, and the
//! side-bet game between a statistician and a scrutinizer.
//!
//! Odds convention: "odds `k:1` against `E`" means the policy holder gains one
//! stake if `E` fails and loses `k` stakes if `E` occurs, so the book is fair
//! exactly when `P(E) = 1 / (k + 1)`.

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::audit::{cell_limit_payoff, critical_thresholds, scrutinizer_gamble};
use crate::credal::{joint_lower_prevision, CredalModel};
use crate::error::{Error, Result};
use crate::frame::Subset;
use crate::im_table::IMTable;
use crate::rng::SeedStreams;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Die {
    pub ace_probability: f64,
    pub weight: f64,
}

/// A box of dice; one is drawn with probability proportional to its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct DieBox {
    dice: Vec<Die>,
}

impl DieBox {
    pub fn new(dice: Vec<Die>) -> Result<Self> {
        if dice.is_empty() {
            return Err(Error::InvalidSimulation("die box is empty".into()));
        }
        for d in &dice {
            if !(0.0..=1.0).contains(&d.ace_probability) {
                return Err(Error::InvalidSimulation(format!("ace probability {} outside [0, 1]", d.ace_probability)));
            }
            if !(d.weight >= 0.0 && d.weight.is_finite()) {
                return Err(Error::InvalidSimulation(format!("selection weight {} must be non-negative", d.weight)));
            }
        }
        let total: f64 = dice.iter().map(|d| d.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSimulation(format!("selection weights sum to {total}, expected 1")));
        }
        Ok(Self { dice })
    }

    /// A box holding a single kind of die.
    pub fn single(ace_probability: f64) -> Result<Self> {
        Self::new(vec![Die { ace_probability, weight: 1.0 }])
    }

    pub fn dice(&self) -> &[Die] {
        &self.dice
    }

    fn sampler(&self) -> WeightedIndex<f64> {
        WeightedIndex::new(self.dice.iter().map(|d| d.weight)).expect("weights validated")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BetPolicy {
    pub odds_against: f64,
    pub stake: f64,
    pub initial_capital: f64,
}

impl BetPolicy {
    pub fn new(odds_against: f64, stake: f64) -> Result<Self> {
        let policy = Self { odds_against, stake, initial_capital: 0.0 };
        policy.validate()?;
        Ok(policy)
    }

    pub fn with_initial_capital(mut self, capital: f64) -> Self {
        self.initial_capital = capital;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.odds_against > 0.0 && self.odds_against.is_finite()) {
            return Err(Error::InvalidSimulation(format!("odds {} must be positive", self.odds_against)));
        }
        if !(self.stake > 0.0 && self.stake.is_finite()) {
            return Err(Error::InvalidSimulation(format!("stake {} must be positive", self.stake)));
        }
        if !self.initial_capital.is_finite() {
            return Err(Error::InvalidSimulation("initial capital must be finite".into()));
        }
        Ok(())
    }

    /// Expected gain per round when the event bet against has probability `p`.
    pub fn expected_drift(&self, p: f64) -> f64 {
        (1.0 - p) * self.stake - p * self.odds_against * self.stake
    }
}

impl Default for BetPolicy {
    fn default() -> Self {
        Self { odds_against: 4.0, stake: 1.0, initial_capital: 0.0 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CapitalTrajectory {
    pub initial_capital: f64,
    /// Capital after each round.
    pub capital: Vec<f64>,
    /// First round (1-based) ending with strictly negative capital.
    pub ruin_round: Option<usize>,
}

impl CapitalTrajectory {
    fn from_increments(initial_capital: f64, increments: impl IntoIterator<Item = f64>) -> Self {
        let mut current = initial_capital;
        let mut ruin_round = None;
        let capital = increments
            .into_iter()
            .enumerate()
            .map(|(i, step)| {
                current += step;
                if current < 0.0 && ruin_round.is_none() {
                    ruin_round = Some(i + 1);
                }
                current
            })
            .collect();
        Self { initial_capital, capital, ruin_round }
    }

    pub fn rounds(&self) -> usize {
        self.capital.len()
    }

    pub fn final_capital(&self) -> f64 {
        self.capital.last().copied().unwrap_or(self.initial_capital)
    }

    pub fn increments(&self) -> impl Iterator<Item = f64> + '_ {
        std::iter::once(self.initial_capital)
            .chain(self.capital.iter().copied())
            .zip(self.capital.iter().copied())
            .map(|(before, after)| after - before)
    }

    /// Sample mean and standard error of the per-round increments.
    pub fn drift(&self) -> MeanEstimate {
        MeanEstimate::from_samples(self.increments())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeanEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub count: usize,
}

impl MeanEstimate {
    /// Welford accumulation in input order.
    pub fn from_samples(samples: impl IntoIterator<Item = f64>) -> Self {
        let (mut count, mut mean, mut m2) = (0usize, 0.0, 0.0);
        for x in samples {
            count += 1;
            let delta = x - mean;
            mean += delta / count as f64;
            m2 += delta * (x - mean);
        }
        let std_error = if count > 1 { (m2 / (count - 1) as f64 / count as f64).sqrt() } else { 0.0 };
        Self { mean: if count == 0 { 0.0 } else { mean }, std_error, count }
    }
}

/// Agent 1 takes a bet against an Ace every round.
pub fn simulate_agent1(p_ace: f64, policy: &BetPolicy, rounds: usize, seed: u64) -> Result<CapitalTrajectory> {
    if !(0.0..=1.0).contains(&p_ace) {
        return Err(Error::InvalidSimulation(format!("ace probability {p_ace} outside [0, 1]")));
    }
    policy.validate()?;
    let mut rng = SeedStreams::new(seed).substream(0);
    Ok(agent1_path(p_ace, policy, rounds, &mut rng))
}

fn agent1_path(p_ace: f64, policy: &BetPolicy, rounds: usize, rng: &mut ChaCha8Rng) -> CapitalTrajectory {
    let win = policy.stake;
    let loss = -policy.odds_against * policy.stake;
    CapitalTrajectory::from_increments(
        policy.initial_capital,
        (0..rounds).map(|_| if rng.random::<f64>() < p_ace { loss } else { win }),
    )
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WagerEstimate {
    /// Estimated probability that Agent 1 is ruined by the horizon.
    pub ruin_probability: f64,
    pub std_error: f64,
    pub replications: usize,
    pub horizon: usize,
    /// Agent 2's odds against ruin.
    pub wager_odds: f64,
    /// Ruin probability above `1 / (1 + wager_odds)`.
    pub favorable: bool,
}

/// Agent 2 offers odds `wager_odds:1` against Agent 1 being ruined by `horizon`.
/// Each replication draws a die from the box and runs Agent 1's bets.
pub fn simulate_agent2_wager(
    dice: &DieBox,
    policy: &BetPolicy,
    horizon: usize,
    replications: usize,
    wager_odds: f64,
    seed: u64,
) -> Result<WagerEstimate> {
    if replications == 0 {
        return Err(Error::InvalidSimulation("at least one replication is required".into()));
    }
    if !(wager_odds > 0.0 && wager_odds.is_finite()) {
        return Err(Error::InvalidSimulation(format!("wager odds {wager_odds} must be positive")));
    }
    policy.validate()?;
    let streams = SeedStreams::new(seed);
    let sampler = dice.sampler();
    let ruined: usize = (0..replications as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = streams.substream(r);
            let die = dice.dice[sampler.sample(&mut rng)];
            usize::from(agent1_path(die.ace_probability, policy, horizon, &mut rng).ruin_round.is_some())
        })
        .sum();
    let p = ruined as f64 / replications as f64;
    Ok(WagerEstimate {
        ruin_probability: p,
        std_error: (p * (1.0 - p) / replications as f64).sqrt(),
        replications,
        horizon,
        wager_odds,
        favorable: p > 1.0 / (1.0 + wager_odds),
    })
}

/// How the true parameter is produced each round.
#[derive(Clone, Debug, PartialEq)]
pub enum ParameterSource {
    Fixed(usize),
    /// Drawn each round from a distribution on the parameter frame, e.g. a prior vertex.
    Distribution(Vec<f64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Strategy {
    /// Plays the `(H, β)` minimizing the joint lower prevision of `f^{H,β}` over
    /// all hypotheses and critical thresholds.
    Exhaustive,
    /// Plays a fixed `(H, β)`, e.g. from a false-confidence witness.
    Witness { hypothesis: Subset, beta: f64 },
    /// Uniform `H` and uniform `β ∈ [0, 1)` each round.
    Random,
    Abstain,
}

impl Strategy {
    pub fn name(&self) -> &'static str {
        match self {
            Strategy::Exhaustive => "exhaustive",
            Strategy::Witness { .. } => "witness",
            Strategy::Random => "random",
            Strategy::Abstain => "abstain",
        }
    }
}

#[derive(Clone, Debug)]
pub struct SideBetGameConfig<'a> {
    pub model: &'a CredalModel<f64>,
    pub im: &'a IMTable<f64>,
    pub parameter: ParameterSource,
    pub strategy: Strategy,
    pub rounds: usize,
    pub seed: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GambleRecord {
    /// 1-based round number.
    pub round: usize,
    pub y: usize,
    pub theta: usize,
    pub hypothesis: Subset,
    pub beta: f64,
    /// Statistician's payoff `1(θ ∈ H) − β`.
    pub payoff: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SideBetOutcome {
    /// Mean statistician payoff per round, abstentions counting as 0.
    pub per_round: MeanEstimate,
    /// Mean over accepted gambles only; `None` if none were accepted.
    pub per_accepted: Option<MeanEstimate>,
    pub trajectory: CapitalTrajectory,
    pub log: Vec<GambleRecord>,
    /// The fixed `(H, β)` played, for exhaustive and witness strategies.
    pub played: Option<(Subset, f64)>,
    /// Model-implied mean payoff per round of the fixed `(H, β)` under the
    /// parameter source.
    pub expected_payoff: Option<f64>,
}

/// Chooses the exhaustive scrutinizer's `(H, β)`; ties go to the first in scan order.
pub fn exhaustive_choice(model: &CredalModel<f64>, im: &IMTable<f64>) -> Result<(Subset, f64, f64)> {
    let mut best: Option<(Subset, f64, f64)> = None;
    for hypothesis in im.param_frame().power_set() {
        let values = (0..im.data_frame().len()).map(|y| *im.lower_bits(y, hypothesis.bits()));
        let points = critical_thresholds(values, 0);
        for (lo, hi) in points.iter().zip(&points[1..]) {
            // The cell's infimum is the limit β → hi⁻; probe a playable β near it.
            let mut candidates = vec![*lo];
            let limit = cell_limit_payoff(model, im, &hypothesis, lo, hi)?;
            if limit < 0.0 {
                candidates.push((hi + limit / 2.0).max(*lo));
            }
            for beta in candidates {
                let lower = joint_lower_prevision(model, &scrutinizer_gamble(im, &hypothesis, &beta)?)?;
                if best.as_ref().is_none_or(|b| lower < b.2) {
                    best = Some((hypothesis.clone(), beta, lower));
                }
            }
        }
    }
    Ok(best.expect("the power set is non-empty"))
}

pub fn simulate_sidebet_game(config: &SideBetGameConfig<'_>) -> Result<SideBetOutcome> {
    let model = config.model;
    let im = config.im;
    let param = model.param_frame();
    model.data_frame().ensure_same(im.data_frame(), "side-bet IM data frame")?;
    param.ensure_same(im.param_frame(), "side-bet IM parameter frame")?;
    if config.rounds == 0 {
        return Err(Error::InvalidSimulation("at least one round is required".into()));
    }
    let weights = match &config.parameter {
        ParameterSource::Fixed(theta) => {
            if *theta >= param.len() {
                return Err(Error::InvalidSimulation(format!("parameter index {theta} outside the frame")));
            }
            (0..param.len()).map(|t| if t == *theta { 1.0 } else { 0.0 }).collect()
        }
        ParameterSource::Distribution(p) => {
            let total: f64 = p.iter().sum();
            if p.len() != param.len() || p.iter().any(|v| v.is_nan() || *v < 0.0) || (total - 1.0).abs() > 1e-9 {
                return Err(Error::InvalidSimulation("parameter distribution must be a probability vector on the frame".into()));
            }
            p.clone()
        }
    };
    let played = match &config.strategy {
        Strategy::Exhaustive => {
            let (h, beta, _) = exhaustive_choice(model, im)?;
            Some((h, beta))
        }
        Strategy::Witness { hypothesis, beta } => {
            param.ensure_same(hypothesis.frame(), "witness hypothesis")?;
            if !(0.0..=1.0).contains(beta) {
                return Err(Error::InvalidSimulation(format!("witness threshold {beta} outside [0, 1]")));
            }
            Some((hypothesis.clone(), *beta))
        }
        Strategy::Random | Strategy::Abstain => None,
    };
    let expected_payoff = played.as_ref().map(|(h, beta)| {
        let likelihood = model.likelihood();
        (0..param.len())
            .map(|theta| {
                let gain = if h.contains(theta) { 1.0 } else { 0.0 } - beta;
                let active: f64 = (0..im.data_frame().len())
                    .filter(|&y| *im.lower_bits(y, h.bits()) > *beta)
                    .map(|y| likelihood.probability(y, theta))
                    .sum();
                if active == 0.0 { 0.0 } else { weights[theta] * gain * active }
            })
            .sum()
    });

    let theta_sampler = WeightedIndex::new(&weights).expect("validated weights");
    let data_samplers: Vec<WeightedIndex<f64>> = (0..param.len())
        .map(|t| WeightedIndex::new(model.likelihood().row(t)).expect("likelihood rows are distributions"))
        .collect();
    let streams = SeedStreams::new(config.seed);
    let subsets = 1u64 << param.len();
    let rounds: Vec<Option<GambleRecord>> = (0..config.rounds)
        .into_par_iter()
        .map(|i| {
            let mut rng = streams.substream(i as u64);
            let theta = theta_sampler.sample(&mut rng);
            let y = data_samplers[theta].sample(&mut rng);
            let (bits, beta) = match (&config.strategy, &played) {
                (Strategy::Abstain, _) => return None,
                (Strategy::Random, _) => (rng.random_range(0..subsets), rng.random::<f64>()),
                (_, Some((h, beta))) => (h.bits(), *beta),
                (_, None) => unreachable!("fixed strategies carry a choice"),
            };
            if *im.lower_bits(y, bits) <= beta {
                return None;
            }
            let hypothesis = param.subset_from_bits(bits).expect("bits within the frame");
            let payoff = if hypothesis.contains(theta) { 1.0 - beta } else { -beta };
            Some(GambleRecord { round: i + 1, y, theta, hypothesis, beta, payoff })
        })
        .collect();

    let payoffs: Vec<f64> = rounds.iter().map(|r| r.as_ref().map_or(0.0, |g| g.payoff)).collect();
    let log: Vec<GambleRecord> = rounds.into_iter().flatten().collect();
    let per_accepted = (!log.is_empty()).then(|| MeanEstimate::from_samples(log.iter().map(|g| g.payoff)));
    Ok(SideBetOutcome {
        per_round: MeanEstimate::from_samples(payoffs.iter().copied()),
        per_accepted,
        trajectory: CapitalTrajectory::from_increments(0.0, payoffs),
        log,
        played,
        expected_payoff,
    })
}
