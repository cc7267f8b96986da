//! Joint models built from a precise likelihood and a belief-function prior,
//! their Choquet previsions, prior credal-set vertices and the generalized
//! Bayes IM.

use crate::error::{Error, Result};
use crate::frame::{Frame, Gamble, Subset};
use crate::im_table::{check_subset_cap, IMTable, DEFAULT_SUBSET_CAP};
use crate::mass::MassFunction;
use crate::scalar::{max_of, min_of, Scalar};

/// Default cap on the number of prior vertices enumerated.
pub const DEFAULT_VERTEX_CAP: u128 = 1_000_000;

/// Sampling distributions `L(y | θ)`: one probability vector over the data
/// frame for each parameter value.
#[derive(Clone, Debug, PartialEq)]
pub struct Likelihood<S: Scalar = f64> {
    data_frame: Frame,
    param_frame: Frame,
    /// `table[θ][y]`.
    table: Vec<Vec<S>>,
}

impl<S: Scalar> Likelihood<S> {
    /// `rows[θ]` is the distribution of `Y` given `θ`.
    pub fn new(data_frame: &Frame, param_frame: &Frame, rows: Vec<Vec<S>>) -> Result<Self> {
        if rows.len() != param_frame.len() {
            return Err(Error::InvalidLikelihood(format!(
                "{} rows for {} parameter values",
                rows.len(),
                param_frame.len()
            )));
        }
        for (theta, row) in rows.iter().enumerate() {
            let label = param_frame.label(theta);
            if row.len() != data_frame.len() {
                return Err(Error::InvalidLikelihood(format!(
                    "row {label} has {} entries for {} data points",
                    row.len(),
                    data_frame.len()
                )));
            }
            if row.iter().any(|p| !p.is_finite_value() || *p < S::zero()) {
                return Err(Error::InvalidLikelihood(format!("row {label} has a negative or non-finite entry")));
            }
            let total = row.iter().fold(S::zero(), |acc, p| acc + p.clone());
            if (total.clone() - S::one()).abs() > S::mass_tolerance() {
                return Err(Error::InvalidLikelihood(format!("row {label} sums to {total}, expected 1")));
            }
        }
        Ok(Self { data_frame: data_frame.clone(), param_frame: param_frame.clone(), table: rows })
    }

    pub fn data_frame(&self) -> &Frame {
        &self.data_frame
    }

    pub fn param_frame(&self) -> &Frame {
        &self.param_frame
    }

    pub fn probability(&self, y: usize, theta: usize) -> &S {
        &self.table[theta][y]
    }

    pub fn row(&self, theta: usize) -> &[S] {
        &self.table[theta]
    }

    /// `P_{Y|θ}(A)` for a set of data indices given as a mask.
    pub fn event_probability(&self, theta: usize, data_bits: u64) -> S {
        self.table[theta]
            .iter()
            .enumerate()
            .filter(|(y, _)| data_bits & (1 << y) != 0)
            .fold(S::zero(), |acc, (_, p)| acc + p.clone())
    }
}

/// Precise likelihood with a belief-function prior on the parameter frame.
#[derive(Clone, Debug, PartialEq)]
pub struct CredalModel<S: Scalar = f64> {
    likelihood: Likelihood<S>,
    prior: MassFunction<S>,
}

impl<S: Scalar> CredalModel<S> {
    pub fn new(likelihood: Likelihood<S>, prior: MassFunction<S>) -> Result<Self> {
        likelihood.param_frame.ensure_same(prior.frame(), "prior frame differs from the likelihood's parameter frame")?;
        Ok(Self { likelihood, prior })
    }

    pub fn likelihood(&self) -> &Likelihood<S> {
        &self.likelihood
    }

    pub fn prior(&self) -> &MassFunction<S> {
        &self.prior
    }

    pub fn data_frame(&self) -> &Frame {
        &self.likelihood.data_frame
    }

    pub fn param_frame(&self) -> &Frame {
        &self.likelihood.param_frame
    }

    /// Same likelihood, vacuous prior.
    pub fn with_vacuous_prior(&self) -> Self {
        Self { likelihood: self.likelihood.clone(), prior: MassFunction::vacuous(self.param_frame()) }
    }

    /// `θ ↦ Σ_y L(y|θ) f(y, θ)`.
    pub(crate) fn conditional_expectations(&self, gamble: &JointGamble<S>) -> Vec<S> {
        (0..self.param_frame().len())
            .map(|theta| {
                self.likelihood.table[theta]
                    .iter()
                    .enumerate()
                    .fold(S::zero(), |acc, (y, p)| acc + p.clone() * gamble.value(y, theta).clone())
            })
            .collect()
    }

    fn check_gamble(&self, gamble: &JointGamble<S>) -> Result<()> {
        self.data_frame().ensure_same(&gamble.data_frame, "joint gamble data frame")?;
        self.param_frame().ensure_same(&gamble.param_frame, "joint gamble parameter frame")
    }
}

/// A gamble on `𝕐 × 𝕋`.
#[derive(Clone, Debug, PartialEq)]
pub struct JointGamble<S: Scalar = f64> {
    data_frame: Frame,
    param_frame: Frame,
    /// `values[y * |𝕋| + θ]`.
    values: Vec<S>,
}

impl<S: Scalar> JointGamble<S> {
    pub fn from_fn(data_frame: &Frame, param_frame: &Frame, mut f: impl FnMut(usize, usize) -> S) -> Result<Self> {
        let mut values = Vec::with_capacity(data_frame.len() * param_frame.len());
        for y in 0..data_frame.len() {
            for theta in 0..param_frame.len() {
                let v = f(y, theta);
                if !v.is_finite_value() {
                    return Err(Error::InvalidGamble(format!("non-finite payoff at ({y}, {theta})")));
                }
                values.push(v);
            }
        }
        Ok(Self { data_frame: data_frame.clone(), param_frame: param_frame.clone(), values })
    }

    pub fn constant(data_frame: &Frame, param_frame: &Frame, value: S) -> Self {
        Self {
            data_frame: data_frame.clone(),
            param_frame: param_frame.clone(),
            values: vec![value; data_frame.len() * param_frame.len()],
        }
    }

    /// `1(y ∈ A) 1(θ ∈ H)`.
    pub fn rectangle(data_event: &Subset, hypothesis: &Subset) -> Self {
        let (data, param) = (data_event.frame(), hypothesis.frame());
        Self::from_fn(data, param, |y, theta| {
            if data_event.contains(y) && hypothesis.contains(theta) {
                S::one()
            } else {
                S::zero()
            }
        })
        .expect("indicator values are finite")
    }

    pub fn data_frame(&self) -> &Frame {
        &self.data_frame
    }

    pub fn param_frame(&self) -> &Frame {
        &self.param_frame
    }

    pub fn value(&self, y: usize, theta: usize) -> &S {
        &self.values[y * self.param_frame.len() + theta]
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    /// The `y`-slice `θ ↦ f(y, θ)`.
    pub fn slice(&self, y: usize) -> Gamble<S> {
        let n = self.param_frame.len();
        Gamble::new(&self.param_frame, self.values[y * n..(y + 1) * n].to_vec()).expect("stored values are finite")
    }

    pub fn negated(&self) -> Self {
        Self {
            data_frame: self.data_frame.clone(),
            param_frame: self.param_frame.clone(),
            values: self.values.iter().map(|v| -v.clone()).collect(),
        }
    }
}

/// `Σ_T m(T) · min_{θ∈T} Σ_y L(y|θ) f(y,θ)`.
pub fn joint_lower_prevision<S: Scalar>(model: &CredalModel<S>, gamble: &JointGamble<S>) -> Result<S> {
    model.check_gamble(gamble)?;
    Ok(model.prior.choquet(&model.conditional_expectations(gamble), min_of))
}

/// A prior in the credal set attaining [`joint_lower_prevision`]: each focal
/// mass goes to the first member minimizing `Σ_y L(y|θ) f(y,θ)`.
pub fn joint_minimizing_prior<S: Scalar>(model: &CredalModel<S>, gamble: &JointGamble<S>) -> Result<Vec<S>> {
    model.check_gamble(gamble)?;
    let expectations = model.conditional_expectations(gamble);
    let mut probabilities = vec![S::zero(); model.param_frame().len()];
    for (set, mass) in model.prior.focal() {
        let best = set
            .indices()
            .reduce(|a, b| if expectations[b] < expectations[a] { b } else { a })
            .expect("focal sets are non-empty");
        probabilities[best] = probabilities[best].clone() + mass.clone();
    }
    Ok(probabilities)
}

/// `Σ_T m(T) · max_{θ∈T} Σ_y L(y|θ) f(y,θ)`, the conjugate of [`joint_lower_prevision`].
pub fn joint_upper_prevision<S: Scalar>(model: &CredalModel<S>, gamble: &JointGamble<S>) -> Result<S> {
    model.check_gamble(gamble)?;
    Ok(model.prior.choquet(&model.conditional_expectations(gamble), max_of))
}

/// An allocation of each focal mass to one member of its focal set, and the
/// probability vector it induces.
#[derive(Clone, Debug, PartialEq)]
pub struct PriorVertex<S: Scalar = f64> {
    /// `allocation[k]` is the element receiving the mass of the k-th focal set.
    pub allocation: Vec<usize>,
    pub probabilities: Vec<S>,
}

impl<S: Scalar> PriorVertex<S> {
    /// Checks `q(H) ≥ Bel(H)` for every `H`.
    pub fn dominates(&self, prior: &MassFunction<S>) -> bool {
        let full = prior.frame().full_bits();
        (0..=full).all(|bits| {
            let q = self
                .probabilities
                .iter()
                .enumerate()
                .filter(|(i, _)| bits & (1 << i) != 0)
                .fold(S::zero(), |acc, (_, p)| acc + p.clone());
            q >= prior.belief_bits(bits)
        })
    }
}

/// Every focal-mass allocation of `prior`: `Π_T |T|` vectors, a superset of the
/// extreme points of the credal set whose members all dominate the belief function.
pub fn prior_vertices<S: Scalar>(prior: &MassFunction<S>, cap: u128) -> Result<Vec<PriorVertex<S>>> {
    let members: Vec<Vec<usize>> = prior
        .entries()
        .iter()
        .map(|(bits, _)| (0..prior.frame().len()).filter(|i| bits & (1 << i) != 0).collect())
        .collect();
    let mut count: u128 = 1;
    for m in &members {
        count = count.saturating_mul(m.len() as u128);
    }
    if count > cap {
        return Err(Error::CapExceeded { what: "prior vertex (use a coarser prior)", count, cap });
    }
    let n = prior.frame().len();
    let mut vertices = Vec::with_capacity(count as usize);
    let mut choice = vec![0usize; members.len()];
    loop {
        let allocation: Vec<usize> = choice.iter().zip(&members).map(|(&c, m)| m[c]).collect();
        let mut probabilities = vec![S::zero(); n];
        for (&theta, (_, mass)) in allocation.iter().zip(prior.entries()) {
            probabilities[theta] = probabilities[theta].clone() + mass.clone();
        }
        vertices.push(PriorVertex { allocation, probabilities });

        // Odometer increment over the focal sets.
        let mut k = 0;
        loop {
            if k == choice.len() {
                return Ok(vertices);
            }
            choice[k] += 1;
            if choice[k] < members[k].len() {
                break;
            }
            choice[k] = 0;
            k += 1;
        }
    }
}

/// Generalized Bayes updating for a [`CredalModel`], with the prior
/// vertices enumerated once.
#[derive(Clone, Debug)]
pub struct GeneralizedBayes<'a, S: Scalar = f64> {
    model: &'a CredalModel<S>,
    vertices: Vec<PriorVertex<S>>,
}

impl<'a, S: Scalar> GeneralizedBayes<'a, S> {
    pub fn new(model: &'a CredalModel<S>) -> Result<Self> {
        Self::with_vertex_cap(model, DEFAULT_VERTEX_CAP)
    }

    pub fn with_vertex_cap(model: &'a CredalModel<S>, cap: u128) -> Result<Self> {
        Ok(Self { model, vertices: prior_vertices(&model.prior, cap)? })
    }

    pub fn vertices(&self) -> &[PriorVertex<S>] {
        &self.vertices
    }

    /// Joint lower probability of the slice `{y} × 𝕋`.
    pub fn slice_lower_probability(&self, y: usize) -> S {
        let column: Vec<S> = (0..self.model.param_frame().len())
            .map(|theta| self.model.likelihood.probability(y, theta).clone())
            .collect();
        self.model.prior.choquet(&column, min_of)
    }

    /// Lower posterior prevision of `f_y` given `Y = y`.
    ///
    /// When the slice has zero lower probability the result is vacuous,
    /// `min_θ f_y(θ)`. Otherwise it is the smallest posterior expectation
    /// over the prior vertices; a linear-fractional objective over the
    /// credal polytope attains its minimum at one of them.
    pub fn lower(&self, y: usize, gamble: &Gamble<S>) -> Result<S> {
        self.check(y, gamble)?;
        let values = gamble.values();
        if self.slice_lower_probability(y).is_zero() {
            return Ok(values.iter().cloned().reduce(min_of).expect("frames are non-empty"));
        }
        let mut best: Option<S> = None;
        for vertex in &self.vertices {
            let (num, den) = self.weighted(y, vertex, |theta| values[theta].clone());
            if den.is_zero() {
                continue;
            }
            let ratio = num / den;
            best = Some(match best {
                Some(b) => min_of(b, ratio),
                None => ratio,
            });
        }
        Ok(best.unwrap_or_else(|| values.iter().cloned().reduce(min_of).expect("frames are non-empty")))
    }

    /// Conjugate upper posterior prevision, `−lower(−f_y)`.
    pub fn upper(&self, y: usize, gamble: &Gamble<S>) -> Result<S> {
        Ok(-self.lower(y, &gamble.negated())?)
    }

    /// Tabulates `Γ̲_y(H)` for every `y` and every `H ⊆ 𝕋`.
    pub fn im_table(&self) -> Result<IMTable<S>> {
        self.im_table_with_cap(DEFAULT_SUBSET_CAP)
    }

    pub fn im_table_with_cap(&self, subset_cap: usize) -> Result<IMTable<S>> {
        let param = self.model.param_frame();
        check_subset_cap(param, subset_cap)?;
        let n = param.len();
        let full = param.full_bits();
        let rows = (0..self.model.data_frame().len())
            .map(|y| {
                if self.slice_lower_probability(y).is_zero() {
                    return (0..=full).map(|bits| if bits == full { S::one() } else { S::zero() }).collect();
                }
                // Per-vertex posterior weights, then min over vertices for each H.
                let posteriors: Vec<(Vec<S>, S)> = self
                    .vertices
                    .iter()
                    .filter_map(|v| {
                        let weights: Vec<S> = (0..n)
                            .map(|t| v.probabilities[t].clone() * self.model.likelihood.probability(y, t).clone())
                            .collect();
                        let den = weights.iter().fold(S::zero(), |a, w| a + w.clone());
                        (!den.is_zero()).then_some((weights, den))
                    })
                    .collect();
                (0..=full)
                    .map(|bits| {
                        if bits == full {
                            return S::one();
                        }
                        posteriors
                            .iter()
                            .map(|(w, den)| {
                                let num = (0..n)
                                    .filter(|t| bits & (1 << t) != 0)
                                    .fold(S::zero(), |a, t| a + w[t].clone());
                                num / den.clone()
                            })
                            .reduce(min_of)
                            .unwrap_or_else(S::zero)
                    })
                    .collect()
            })
            .collect();
        IMTable::from_rows(self.model.data_frame(), param, rows)
    }

    fn weighted(&self, y: usize, vertex: &PriorVertex<S>, f: impl Fn(usize) -> S) -> (S, S) {
        let mut num = S::zero();
        let mut den = S::zero();
        for (theta, q) in vertex.probabilities.iter().enumerate() {
            if q.is_zero() {
                continue;
            }
            let w = q.clone() * self.model.likelihood.probability(y, theta).clone();
            num = num + w.clone() * f(theta);
            den = den + w;
        }
        (num, den)
    }

    fn check(&self, y: usize, gamble: &Gamble<S>) -> Result<()> {
        if y >= self.model.data_frame().len() {
            return Err(Error::InvalidArgument(format!("data index {y} out of range")));
        }
        self.model.param_frame().ensure_same(gamble.frame(), "posterior gamble")
    }
}

pub fn generalized_bayes_lower<S: Scalar>(model: &CredalModel<S>, y: usize, gamble: &Gamble<S>) -> Result<S> {
    GeneralizedBayes::new(model)?.lower(y, gamble)
}

pub fn generalized_bayes_upper<S: Scalar>(model: &CredalModel<S>, y: usize, gamble: &Gamble<S>) -> Result<S> {
    GeneralizedBayes::new(model)?.upper(y, gamble)
}

pub fn generalized_bayes_im<S: Scalar>(model: &CredalModel<S>) -> Result<IMTable<S>> {
    GeneralizedBayes::new(model)?.im_table()
}

/// Precise Bayes posterior IM for a prior probability vector. Data points with
/// zero marginal probability get a vacuous row.
pub fn bayes_posterior_im<S: Scalar>(likelihood: &Likelihood<S>, prior: &[S]) -> Result<IMTable<S>> {
    let param = likelihood.param_frame();
    if prior.len() != param.len() {
        return Err(Error::InvalidArgument("prior length differs from the parameter frame".into()));
    }
    let total = prior.iter().fold(S::zero(), |a, p| a + p.clone());
    if prior.iter().any(|p| *p < S::zero()) || (total - S::one()).abs() > S::mass_tolerance() {
        return Err(Error::InvalidArgument("prior is not a probability vector".into()));
    }
    let full = param.full_bits();
    let evidence: Vec<S> = (0..likelihood.data_frame().len())
        .map(|y| {
            (0..param.len()).fold(S::zero(), |a, t| a + prior[t].clone() * likelihood.probability(y, t).clone())
        })
        .collect();
    IMTable::from_fn(likelihood.data_frame(), param, |y, h| {
        if h.bits() == full {
            return Ok(S::one());
        }
        if evidence[y].is_zero() {
            return Ok(S::zero());
        }
        let num = h
            .indices()
            .fold(S::zero(), |a, t| a + prior[t].clone() * likelihood.probability(y, t).clone());
        Ok(num / evidence[y].clone())
    })
}
