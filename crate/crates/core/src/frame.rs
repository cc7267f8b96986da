//! Finite frames, subsets and gambles.

use std::collections::HashSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Largest frame a [`Subset`] can index; subsets are stored as 64-bit masks.
pub const MAX_FRAME_SIZE: usize = 64;

/// Characters that delimit labels in the text formats.
const RESERVED: [char; 7] = ['{', '}', '[', ']', '=', '#', ','];

/// An ordered, finite set of distinct labels. Cloning is cheap.
#[derive(Clone)]
pub struct Frame {
    labels: Arc<[String]>,
}

impl Frame {
    pub fn new<I, L>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = L>,
        L: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::InvalidFrame("a frame needs at least one element".into()));
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::InvalidFrame(format!(
                "{} elements exceeds the maximum of {MAX_FRAME_SIZE}",
                labels.len()
            )));
        }
        let mut seen = HashSet::new();
        for label in &labels {
            if label.is_empty() || label.chars().any(|c| c.is_whitespace() || RESERVED.contains(&c)) {
                return Err(Error::InvalidFrame(format!(
                    "label {label:?} is empty or contains whitespace or one of {{ }} [ ] = # ,"
                )));
            }
            if !seen.insert(label.as_str()) {
                return Err(Error::InvalidFrame(format!("duplicate label {label:?}")));
            }
        }
        Ok(Self { labels: labels.into() })
    }

    /// Frame with labels `prefix0 .. prefix{n-1}`.
    pub fn indexed(prefix: &str, n: usize) -> Result<Self> {
        Self::new((0..n).map(|i| format!("{prefix}{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Bit mask of the full frame.
    pub fn full_bits(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn full(&self) -> Subset {
        Subset { frame: self.clone(), bits: self.full_bits() }
    }

    pub fn empty_set(&self) -> Subset {
        Subset { frame: self.clone(), bits: 0 }
    }

    pub fn singleton(&self, index: usize) -> Subset {
        assert!(index < self.len(), "element index out of range");
        Subset { frame: self.clone(), bits: 1 << index }
    }

    pub fn subset_from_bits(&self, bits: u64) -> Result<Subset> {
        if bits & !self.full_bits() != 0 {
            return Err(Error::InvalidFrame(format!("mask {bits:#x} has bits outside the frame")));
        }
        Ok(Subset { frame: self.clone(), bits })
    }

    pub fn subset_from_indices<I: IntoIterator<Item = usize>>(&self, indices: I) -> Result<Subset> {
        let mut bits = 0u64;
        for index in indices {
            if index >= self.len() {
                return Err(Error::InvalidFrame(format!("element index {index} out of range")));
            }
            bits |= 1 << index;
        }
        Ok(Subset { frame: self.clone(), bits })
    }

    pub fn subset_from_labels<I, L>(&self, labels: I) -> Result<Subset>
    where
        I: IntoIterator<Item = L>,
        L: AsRef<str>,
    {
        let mut bits = 0u64;
        for label in labels {
            let label = label.as_ref();
            let index = self
                .index_of(label)
                .ok_or_else(|| Error::InvalidFrame(format!("unknown label {label:?}")))?;
            bits |= 1 << index;
        }
        Ok(Subset { frame: self.clone(), bits })
    }

    /// Every subset of the frame, ordered by bit mask. Only sensible for small frames.
    pub fn power_set(&self) -> impl Iterator<Item = Subset> + '_ {
        assert!(self.len() < 64, "power set of a 64-element frame");
        (0..=self.full_bits()).map(move |bits| Subset { frame: self.clone(), bits })
    }

    pub(crate) fn ensure_same(&self, other: &Frame, context: &str) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::FrameMismatch(context.to_string()))
        }
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for Frame {}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

/// A subset of a frame, stored as a membership bit mask.
#[derive(Clone, PartialEq, Eq)]
pub struct Subset {
    frame: Frame,
    bits: u64,
}

impl Subset {
    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn contains(&self, index: usize) -> bool {
        index < 64 && self.bits & (1 << index) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.bits == 0
    }

    pub fn is_full(&self) -> bool {
        self.bits == self.frame.full_bits()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones() as usize
    }

    pub fn indices(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.frame.len()).filter(move |&i| self.contains(i))
    }

    pub fn labels(&self) -> Vec<&str> {
        self.indices().map(|i| self.frame.label(i)).collect()
    }

    pub fn complement(&self) -> Subset {
        Subset { frame: self.frame.clone(), bits: !self.bits & self.frame.full_bits() }
    }

    pub fn intersection(&self, other: &Subset) -> Result<Subset> {
        self.frame.ensure_same(&other.frame, "subset intersection")?;
        Ok(Subset { frame: self.frame.clone(), bits: self.bits & other.bits })
    }

    pub fn union(&self, other: &Subset) -> Result<Subset> {
        self.frame.ensure_same(&other.frame, "subset union")?;
        Ok(Subset { frame: self.frame.clone(), bits: self.bits | other.bits })
    }

    pub fn is_subset_of(&self, other: &Subset) -> bool {
        self.frame == other.frame && self.bits & !other.bits == 0
    }

    /// Indicator gamble `1(θ ∈ self)`.
    pub fn indicator<S: Scalar>(&self) -> Gamble<S> {
        let values = (0..self.frame.len())
            .map(|i| if self.contains(i) { S::one() } else { S::zero() })
            .collect();
        Gamble { frame: self.frame.clone(), values }
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.labels().join(" "))
    }
}

/// A real-valued payoff on a frame.
#[derive(Clone, Debug, PartialEq)]
pub struct Gamble<S: Scalar = f64> {
    frame: Frame,
    values: Vec<S>,
}

impl<S: Scalar> Gamble<S> {
    pub fn new(frame: &Frame, values: Vec<S>) -> Result<Self> {
        if values.len() != frame.len() {
            return Err(Error::InvalidGamble(format!(
                "{} values for a frame of size {}",
                values.len(),
                frame.len()
            )));
        }
        if !values.iter().all(Scalar::is_finite_value) {
            return Err(Error::InvalidGamble("non-finite payoff".into()));
        }
        Ok(Self { frame: frame.clone(), values })
    }

    pub fn constant(frame: &Frame, value: S) -> Self {
        Self { frame: frame.clone(), values: vec![value; frame.len()] }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }

    pub fn value(&self, index: usize) -> &S {
        &self.values[index]
    }

    pub fn negated(&self) -> Self {
        Self { frame: self.frame.clone(), values: self.values.iter().map(|v| -v.clone()).collect() }
    }
}
