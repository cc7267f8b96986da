//! Consonant vacuous-prior IMs on finite frames and their Dempster combination
//! with a prior mass function.

use crate::credal::Likelihood;
use crate::error::{Error, Result};
use crate::im_table::IMTable;
use crate::mass::{dempster_combine, MassFunction};
use crate::scalar::Scalar;

/// `π_y(θ) = P_θ{L(Y | θ) ≤ L(y | θ)}` for every `θ`.
pub fn plausibility_contour<S: Scalar>(likelihood: &Likelihood<S>, y: usize) -> Vec<S> {
    (0..likelihood.param_frame().len())
        .map(|theta| {
            let row = likelihood.row(theta);
            let at = &row[y];
            row.iter().filter(|p| *p <= at).fold(S::zero(), |acc, p| acc + p.clone())
        })
        .collect()
}

/// Consonant mass function whose plausibility contour is `π_y / max π_y`.
///
/// With distinct contour levels `t₁ > … > t_k > 0`, the focal sets are the
/// level sets `{θ : π_y(θ) ≥ t_j}` carrying mass `(t_j − t_{j+1}) / t₁`.
pub fn consonant_mass<S: Scalar>(likelihood: &Likelihood<S>, y: usize) -> Result<MassFunction<S>> {
    let frame = likelihood.param_frame();
    let contour = plausibility_contour(likelihood, y);
    let mut levels: Vec<S> = contour.iter().filter(|v| **v > S::zero()).cloned().collect();
    levels.sort_by(|a, b| b.partial_cmp(a).expect("contour values are comparable"));
    levels.dedup();
    if levels.is_empty() {
        return Err(Error::InvalidLikelihood(format!(
            "data point {} has zero contour everywhere",
            likelihood.data_frame().label(y)
        )));
    }
    let mut entries = Vec::with_capacity(levels.len());
    for (j, level) in levels.iter().enumerate() {
        let next = levels.get(j + 1).cloned().unwrap_or_else(S::zero);
        let set = frame.subset_from_indices((0..contour.len()).filter(|&t| contour[t] >= *level))?;
        entries.push((set, level.clone() - next));
    }
    MassFunction::renormalized(frame, entries)
}

/// One consonant mass function per data point.
pub fn consonant_vacuous_im<S: Scalar>(likelihood: &Likelihood<S>) -> Result<Vec<MassFunction<S>>> {
    (0..likelihood.data_frame().len()).map(|y| consonant_mass(likelihood, y)).collect()
}

/// IM table of `consonant_mass(y) ⊕ prior` for every data point.
pub fn dempster_im<S: Scalar>(likelihood: &Likelihood<S>, prior: &MassFunction<S>) -> Result<IMTable<S>> {
    likelihood.param_frame().ensure_same(prior.frame(), "prior for Dempster IM")?;
    let combined = consonant_vacuous_im(likelihood)?
        .iter()
        .map(|m| dempster_combine(m, prior).map(|c| c.mass))
        .collect::<Result<Vec<_>>>()?;
    IMTable::from_mass_functions(likelihood.data_frame(), &combined)
}
