//! Finite inferential models stored as lower-probability tables.

use crate::error::{Error, Result};
use crate::frame::{Frame, Subset};
use crate::mass::MassFunction;
use crate::scalar::Scalar;

/// Largest parameter frame whose full power set is tabulated.
pub const DEFAULT_SUBSET_CAP: usize = 16;

/// For each data point `y`, the lower probability `Π̲_y(H)` of every
/// hypothesis `H ⊆ 𝕋`. Upper probabilities come from conjugacy,
/// `Π̄_y(H) = 1 − Π̲_y(Hᶜ)`.
///
/// Construction checks, per `y`: `Π̲_y(∅) = 0`, `Π̲_y(𝕋) = 1`, values in
/// `[0, 1]`, monotonicity in `H` (exact comparison) and `Π̲_y ≤ Π̄_y`.
#[derive(Clone, Debug, PartialEq)]
pub struct IMTable<S: Scalar = f64> {
    data_frame: Frame,
    param_frame: Frame,
    /// Row-major: `lower[y * 2^|𝕋| + bits(H)]`.
    lower: Vec<S>,
}

impl<S: Scalar> IMTable<S> {
    /// Tabulates `lower(y, H)` for every data index and every subset of the parameter frame.
    pub fn from_fn<F>(data_frame: &Frame, param_frame: &Frame, mut lower: F) -> Result<Self>
    where
        F: FnMut(usize, &Subset) -> Result<S>,
    {
        check_subset_cap(param_frame, DEFAULT_SUBSET_CAP)?;
        let mut values = Vec::with_capacity(data_frame.len() << param_frame.len());
        for y in 0..data_frame.len() {
            for subset in param_frame.power_set() {
                values.push(lower(y, &subset)?);
            }
        }
        Self::from_flat(data_frame, param_frame, values)
    }

    /// `rows[y][bits]` with one row of `2^|𝕋|` entries per data point.
    pub fn from_rows(data_frame: &Frame, param_frame: &Frame, rows: Vec<Vec<S>>) -> Result<Self> {
        check_subset_cap(param_frame, DEFAULT_SUBSET_CAP)?;
        if rows.len() != data_frame.len() {
            return Err(Error::InvalidTable(format!(
                "{} rows for {} data points",
                rows.len(),
                data_frame.len()
            )));
        }
        let width = 1usize << param_frame.len();
        if let Some((y, row)) = rows.iter().enumerate().find(|(_, r)| r.len() != width) {
            return Err(Error::InvalidTable(format!(
                "row {} has {} entries, expected {width}",
                data_frame.label(y),
                row.len()
            )));
        }
        Self::from_flat(data_frame, param_frame, rows.into_iter().flatten().collect())
    }

    fn from_flat(data_frame: &Frame, param_frame: &Frame, lower: Vec<S>) -> Result<Self> {
        let table = Self { data_frame: data_frame.clone(), param_frame: param_frame.clone(), lower };
        table.validate()?;
        Ok(table)
    }

    fn validate(&self) -> Result<()> {
        let full = self.param_frame.full_bits();
        let n = self.param_frame.len();
        let tol = S::mass_tolerance();
        for y in 0..self.data_frame.len() {
            let label = self.data_frame.label(y);
            let row = self.row(y);
            if !row[0].is_zero() {
                return Err(Error::InvalidTable(format!("lower probability of the empty set at y = {label} is not 0")));
            }
            if !row[full as usize].is_one() {
                return Err(Error::InvalidTable(format!("lower probability of the full frame at y = {label} is not 1")));
            }
            for (bits, value) in row.iter().enumerate() {
                if !value.is_finite_value() || *value < S::zero() || *value > S::one() {
                    return Err(Error::InvalidTable(format!("value {value} at y = {label} outside [0, 1]")));
                }
                for i in 0..n {
                    let bigger = bits | (1 << i);
                    if bigger != bits && row[bigger] < *value {
                        return Err(Error::InvalidTable(format!(
                            "not monotone at y = {label}: mask {bits:#b} exceeds mask {bigger:#b}"
                        )));
                    }
                }
                let complement = !(bits as u64) & full;
                if value.clone() + row[complement as usize].clone() > S::one() + tol.clone() {
                    return Err(Error::InvalidTable(format!(
                        "lower exceeds upper at y = {label}, mask {bits:#b}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Belief functions of one mass function per data point.
    pub fn from_mass_functions(data_frame: &Frame, masses: &[MassFunction<S>]) -> Result<Self> {
        if masses.len() != data_frame.len() {
            return Err(Error::InvalidTable("need one mass function per data point".into()));
        }
        let param_frame = masses[0].frame().clone();
        for mass in masses {
            param_frame.ensure_same(mass.frame(), "IM mass functions")?;
        }
        Self::from_fn(data_frame, &param_frame, |y, subset| Ok(masses[y].belief_bits(subset.bits())))
    }

    /// `Π̲_y(H) = 0` for every proper `H`.
    pub fn vacuous(data_frame: &Frame, param_frame: &Frame) -> Result<Self> {
        let full = param_frame.full_bits();
        Self::from_fn(data_frame, param_frame, |_, subset| {
            Ok(if subset.bits() == full { S::one() } else { S::zero() })
        })
    }

    pub fn data_frame(&self) -> &Frame {
        &self.data_frame
    }

    pub fn param_frame(&self) -> &Frame {
        &self.param_frame
    }

    pub(crate) fn row(&self, y: usize) -> &[S] {
        let width = 1usize << self.param_frame.len();
        &self.lower[y * width..(y + 1) * width]
    }

    pub fn lower(&self, y: usize, hypothesis: &Subset) -> Result<S> {
        self.param_frame.ensure_same(hypothesis.frame(), "IM lower probability")?;
        Ok(self.lower_bits(y, hypothesis.bits()).clone())
    }

    pub fn upper(&self, y: usize, hypothesis: &Subset) -> Result<S> {
        self.param_frame.ensure_same(hypothesis.frame(), "IM upper probability")?;
        Ok(self.upper_bits(y, hypothesis.bits()))
    }

    pub(crate) fn lower_bits(&self, y: usize, bits: u64) -> &S {
        &self.row(y)[bits as usize]
    }

    pub(crate) fn upper_bits(&self, y: usize, bits: u64) -> S {
        let complement = !bits & self.param_frame.full_bits();
        S::one() - self.lower_bits(y, complement).clone()
    }

    /// True when lower and upper probabilities coincide everywhere.
    pub fn is_precise(&self) -> bool {
        let tol = S::mass_tolerance();
        (0..self.data_frame.len()).all(|y| {
            (0..=self.param_frame.full_bits())
                .all(|bits| (self.lower_bits(y, bits).clone() - self.upper_bits(y, bits)).abs() <= tol)
        })
    }

    /// Applies `edit` to every stored value and re-validates the result.
    pub fn try_map(&self, mut edit: impl FnMut(usize, u64, &S) -> S) -> Result<Self> {
        let width = 1usize << self.param_frame.len();
        let lower = self
            .lower
            .iter()
            .enumerate()
            .map(|(i, v)| edit(i / width, (i % width) as u64, v))
            .collect();
        Self::from_flat(&self.data_frame, &self.param_frame, lower)
    }
}

pub(crate) fn check_subset_cap(frame: &Frame, cap: usize) -> Result<()> {
    if frame.len() > cap {
        return Err(Error::CapExceeded {
            what: "parameter frame size for subset enumeration",
            count: frame.len() as u128,
            cap: cap as u128,
        });
    }
    Ok(())
}
