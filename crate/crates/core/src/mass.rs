//! Mass functions on finite frames: belief, plausibility, Choquet previsions
//! and Dempster's rule of combination.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::frame::{Frame, Gamble, Subset};
use crate::scalar::{max_of, min_of, Scalar};

/// A basic probability assignment with finitely many focal sets.
///
/// Focal sets are non-empty and distinct, masses are strictly positive and
/// sum to one within [`Scalar::mass_tolerance`]. Entries are kept sorted by
/// bit mask so iteration order is deterministic.
#[derive(Clone, Debug, PartialEq)]
pub struct MassFunction<S: Scalar = f64> {
    frame: Frame,
    entries: Vec<(u64, S)>,
}

/// Output of [`dempster_combine`].
#[derive(Clone, Debug, PartialEq)]
pub struct Combination<S: Scalar = f64> {
    pub mass: MassFunction<S>,
    /// Total mass sent to empty intersections before normalization.
    pub conflict: S,
}

impl<S: Scalar> MassFunction<S> {
    /// Validates and builds a mass function. Masses are never rescaled here;
    /// use [`MassFunction::renormalized`] for that.
    pub fn new<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, S)>,
    {
        let mut map = BTreeMap::new();
        for (subset, mass) in entries {
            frame.ensure_same(subset.frame(), "focal set belongs to another frame")?;
            if subset.is_empty() {
                return Err(Error::InvalidMass("the empty set cannot be focal".into()));
            }
            if !mass.is_finite_value() || mass <= S::zero() {
                return Err(Error::InvalidMass(format!("mass of {subset} must be positive, got {mass}")));
            }
            if map.insert(subset.bits(), mass).is_some() {
                return Err(Error::InvalidMass(format!("focal set {subset} listed twice")));
            }
        }
        Self::from_map(frame, map)
    }

    /// Builds a mass function after merging duplicate focal sets and dividing
    /// by the total mass. Zero masses are dropped.
    pub fn renormalized<I>(frame: &Frame, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Subset, S)>,
    {
        let mut map: BTreeMap<u64, S> = BTreeMap::new();
        for (subset, mass) in entries {
            frame.ensure_same(subset.frame(), "focal set belongs to another frame")?;
            if !mass.is_finite_value() || mass < S::zero() {
                return Err(Error::InvalidMass(format!("mass of {subset} must be non-negative, got {mass}")));
            }
            if mass.is_zero() {
                continue;
            }
            if subset.is_empty() {
                return Err(Error::InvalidMass("the empty set cannot be focal".into()));
            }
            let slot = map.entry(subset.bits()).or_insert_with(S::zero);
            *slot = slot.clone() + mass;
        }
        let total = map.values().fold(S::zero(), |acc, m| acc + m.clone());
        if total.is_zero() {
            return Err(Error::InvalidMass("total mass is zero".into()));
        }
        for mass in map.values_mut() {
            *mass = mass.clone() / total.clone();
        }
        Ok(Self { frame: frame.clone(), entries: map.into_iter().collect() })
    }

    fn from_map(frame: &Frame, map: BTreeMap<u64, S>) -> Result<Self> {
        if map.is_empty() {
            return Err(Error::InvalidMass("no focal sets".into()));
        }
        let total = map.values().fold(S::zero(), |acc, m| acc + m.clone());
        if (total.clone() - S::one()).abs() > S::mass_tolerance() {
            return Err(Error::MassSum { sum: total.to_decimal() });
        }
        Ok(Self { frame: frame.clone(), entries: map.into_iter().collect() })
    }

    /// All mass on the full frame.
    pub fn vacuous(frame: &Frame) -> Self {
        Self { frame: frame.clone(), entries: vec![(frame.full_bits(), S::one())] }
    }

    /// All mass on a single element.
    pub fn point(frame: &Frame, index: usize) -> Self {
        Self { frame: frame.clone(), entries: vec![(frame.singleton(index).bits(), S::one())] }
    }

    /// Precise (Bayesian) mass function from a probability vector.
    pub fn bayesian(frame: &Frame, probabilities: Vec<S>) -> Result<Self> {
        if probabilities.len() != frame.len() {
            return Err(Error::InvalidMass("probability vector length differs from frame size".into()));
        }
        let entries: Vec<_> = probabilities
            .into_iter()
            .enumerate()
            .filter(|(_, p)| !p.is_zero())
            .map(|(i, p)| (frame.singleton(i), p))
            .collect();
        Self::new(frame, entries)
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    /// Number of focal sets.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn focal(&self) -> impl Iterator<Item = (Subset, &S)> + '_ {
        self.entries.iter().map(move |(bits, mass)| {
            (self.frame.subset_from_bits(*bits).expect("stored masks fit the frame"), mass)
        })
    }

    pub(crate) fn entries(&self) -> &[(u64, S)] {
        &self.entries
    }

    pub fn mass_of(&self, subset: &Subset) -> S {
        self.entries
            .iter()
            .find(|(bits, _)| *bits == subset.bits())
            .map_or_else(S::zero, |(_, m)| m.clone())
    }

    pub fn is_vacuous(&self) -> bool {
        self.entries.len() == 1 && self.entries[0].0 == self.frame.full_bits()
    }

    /// True when every focal set is a singleton.
    pub fn is_bayesian(&self) -> bool {
        self.entries.iter().all(|(bits, _)| bits.count_ones() == 1)
    }

    /// Mass of focal sets contained in `hypothesis`.
    pub fn belief(&self, hypothesis: &Subset) -> Result<S> {
        self.frame.ensure_same(hypothesis.frame(), "belief")?;
        Ok(self.belief_bits(hypothesis.bits()))
    }

    /// Mass of focal sets meeting `hypothesis`.
    pub fn plausibility(&self, hypothesis: &Subset) -> Result<S> {
        self.frame.ensure_same(hypothesis.frame(), "plausibility")?;
        Ok(self.plausibility_bits(hypothesis.bits()))
    }

    /// Exactly 1 on the full frame; floating sums are capped at 1 elsewhere.
    pub(crate) fn belief_bits(&self, bits: u64) -> S {
        if bits & self.frame.full_bits() == self.frame.full_bits() {
            return S::one();
        }
        let sum = self
            .entries
            .iter()
            .filter(|(focal, _)| focal & !bits == 0)
            .fold(S::zero(), |acc, (_, m)| acc + m.clone());
        min_of(sum, S::one())
    }

    pub(crate) fn plausibility_bits(&self, bits: u64) -> S {
        if bits & self.frame.full_bits() == self.frame.full_bits() {
            return S::one();
        }
        let sum = self
            .entries
            .iter()
            .filter(|(focal, _)| focal & bits != 0)
            .fold(S::zero(), |acc, (_, m)| acc + m.clone());
        min_of(sum, S::one())
    }

    /// Choquet lower prevision `Σ_T m(T) min_{θ∈T} f(θ)`.
    pub fn lower_prevision(&self, gamble: &Gamble<S>) -> Result<S> {
        self.frame.ensure_same(gamble.frame(), "lower prevision")?;
        Ok(self.choquet(gamble.values(), min_of))
    }

    /// Choquet upper prevision `Σ_T m(T) max_{θ∈T} f(θ)`.
    pub fn upper_prevision(&self, gamble: &Gamble<S>) -> Result<S> {
        self.frame.ensure_same(gamble.frame(), "upper prevision")?;
        Ok(self.choquet(gamble.values(), max_of))
    }

    /// `Σ_T m(T) pick_{θ∈T} values[θ]`, with `pick` either min or max.
    pub(crate) fn choquet(&self, values: &[S], pick: fn(S, S) -> S) -> S {
        self.entries.iter().fold(S::zero(), |acc, (bits, mass)| {
            let extreme = (0..values.len())
                .filter(|i| bits & (1 << i) != 0)
                .map(|i| values[i].clone())
                .reduce(pick)
                .expect("focal sets are non-empty");
            acc + mass.clone() * extreme
        })
    }

    /// True iff the focal sets form a chain under inclusion.
    pub fn is_nested(&self) -> bool {
        self.entries.iter().enumerate().all(|(i, (a, _))| {
            self.entries[i + 1..].iter().all(|(b, _)| a & !b == 0 || b & !a == 0)
        })
    }

    /// Combination with another mass function on the same frame; see [`dempster_combine`].
    pub fn combine(&self, other: &Self) -> Result<Combination<S>> {
        dempster_combine(self, other)
    }

    /// Converts every mass to another scalar type.
    pub fn map_scalar<T: Scalar>(&self, convert: impl Fn(&S) -> T) -> Result<MassFunction<T>> {
        let entries = self
            .focal()
            .map(|(subset, mass)| (subset, convert(mass)))
            .collect::<Vec<_>>();
        MassFunction::new(&self.frame, entries)
    }
}

/// Dempster's rule: products of focal masses are assigned to the intersection,
/// the mass landing on the empty set is reported as `conflict`, and the rest is
/// normalized by `1 − conflict`.
///
/// The normalizer is accumulated as the sum of non-conflicting products, which
/// equals `1 − conflict` exactly in rational mode and avoids cancellation in
/// floating point.
pub fn dempster_combine<S: Scalar>(left: &MassFunction<S>, right: &MassFunction<S>) -> Result<Combination<S>> {
    left.frame.ensure_same(&right.frame, "Dempster combination")?;
    let mut combined: BTreeMap<u64, S> = BTreeMap::new();
    let mut conflict = S::zero();
    let mut agreement = S::zero();
    for (a, ma) in &left.entries {
        for (b, mb) in &right.entries {
            let product = ma.clone() * mb.clone();
            let meet = a & b;
            if meet == 0 {
                conflict = conflict + product;
            } else {
                agreement = agreement + product.clone();
                let slot = combined.entry(meet).or_insert_with(S::zero);
                *slot = slot.clone() + product;
            }
        }
    }
    if combined.is_empty() {
        return Err(Error::CompleteConflict);
    }
    let entries = combined
        .into_iter()
        .map(|(bits, m)| (bits, m / agreement.clone()))
        .collect();
    Ok(Combination { mass: MassFunction { frame: left.frame.clone(), entries }, conflict })
}
