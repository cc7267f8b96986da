mod common;

use common::*;
use credal_im::credal::{bayes_posterior_im, generalized_bayes_im, joint_lower_prevision};
use credal_im::{CredalModel, Gamble, GeneralizedBayes, JointGamble, MassFunction, Rational};
use num_traits::Zero;
use proptest::prelude::*;

/// All ways to split `total` units over `parts` members.
fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![total]];
    }
    (0..=total)
        .flat_map(|first| {
            compositions(total - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

/// Priors in the credal set: each focal mass split over its members in steps of 1/`steps`.
fn credal_grid(prior: &MassFunction<Rational>, steps: usize) -> Vec<Vec<Rational>> {
    let n = prior.frame().len();
    let mut grid = vec![vec![Rational::zero(); n]];
    for (set, mass) in prior.focal() {
        let members: Vec<usize> = set.indices().collect();
        let splits = compositions(steps, members.len());
        let mut next = Vec::with_capacity(grid.len() * splits.len());
        for q in &grid {
            for split in &splits {
                let mut p = q.clone();
                for (m, &units) in members.iter().zip(split) {
                    p[*m] += mass * r(units as i64, steps as i64);
                }
                next.push(p);
            }
        }
        grid = next;
    }
    grid
}

/// Minimum posterior expectation over the grid; vacuous when some grid prior gives the slice zero probability.
fn grid_lower(model: &CredalModel<Rational>, y: usize, f: &[Rational]) -> Rational {
    let grid = credal_grid(model.prior(), 3);
    let mut best: Option<Rational> = None;
    for p in &grid {
        let den: Rational = (0..f.len()).map(|t| &p[t] * model.likelihood().probability(y, t)).sum();
        if den.is_zero() {
            return f.iter().min().unwrap().clone();
        }
        let num: Rational = (0..f.len()).map(|t| &p[t] * model.likelihood().probability(y, t) * &f[t]).sum();
        let ratio = num / den;
        best = Some(best.map_or(ratio.clone(), |b| b.min(ratio)));
    }
    best.unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn generalized_bayes_matches_credal_grid(model in model_case(3), seed in prop::collection::vec(-5i64..=5, 4)) {
        let gb = GeneralizedBayes::new(&model).unwrap();
        let n = model.param_frame().len();
        let values: Vec<Rational> = (0..n).map(|t| r(seed[t], 2)).collect();
        let gamble = Gamble::new(model.param_frame(), values.clone()).unwrap();
        let float = float_model(&model);
        let gb_float = GeneralizedBayes::new(&float).unwrap();
        let gamble_float = Gamble::new(float.param_frame(), values.iter().map(to_f64).collect()).unwrap();
        for y in 0..model.data_frame().len() {
            let exact = gb.lower(y, &gamble).unwrap();
            let oracle = grid_lower(&model, y, &values);
            prop_assert_eq!(&exact, &oracle);
            prop_assert!((gb_float.lower(y, &gamble_float).unwrap() - to_f64(&oracle)).abs() <= 1e-9);
            prop_assert!(gb.upper(y, &gamble).unwrap() >= exact);
        }
    }

    #[test]
    fn every_vertex_dominates_the_prior(model in model_case(3)) {
        let gb = GeneralizedBayes::new(&model).unwrap();
        for v in gb.vertices() {
            prop_assert!(v.dominates(model.prior()));
            prop_assert_eq!(v.probabilities.iter().sum::<Rational>(), r(1, 1));
        }
    }

    #[test]
    fn im_table_agrees_with_indicator_previsions(model in model_case(3)) {
        let table = generalized_bayes_im(&model).unwrap();
        let gb = GeneralizedBayes::new(&model).unwrap();
        for y in 0..model.data_frame().len() {
            for h in model.param_frame().power_set() {
                prop_assert_eq!(table.lower(y, &h).unwrap(), gb.lower(y, &h.indicator()).unwrap());
                prop_assert_eq!(table.upper(y, &h).unwrap(), gb.upper(y, &h.indicator()).unwrap());
            }
        }
    }

    #[test]
    fn precise_prior_reduces_to_bayes(model in model_case(1), weights in prop::collection::vec(1i64..=9, 4)) {
        let n = model.param_frame().len();
        let total: i64 = weights[..n].iter().sum();
        let probs: Vec<Rational> = weights[..n].iter().map(|&w| r(w, total)).collect();
        let prior = MassFunction::bayesian(model.param_frame(), probs.clone()).unwrap();
        let precise = CredalModel::new(model.likelihood().clone(), prior).unwrap();
        prop_assert_eq!(generalized_bayes_im(&precise).unwrap(), bayes_posterior_im(model.likelihood(), &probs).unwrap());
    }

    #[test]
    fn joint_lower_prevision_is_superadditive(model in model_case(3), a in prop::collection::vec(-4i64..=4, 16), b in prop::collection::vec(-4i64..=4, 16)) {
        let (data, param) = (model.data_frame(), model.param_frame());
        let f = JointGamble::from_fn(data, param, |y, t| r(a[y * 4 + t], 1)).unwrap();
        let g = JointGamble::from_fn(data, param, |y, t| r(b[y * 4 + t], 1)).unwrap();
        let sum = JointGamble::from_fn(data, param, |y, t| f.value(y, t) + g.value(y, t)).unwrap();
        let lhs = joint_lower_prevision(&model, &sum).unwrap();
        let rhs = joint_lower_prevision(&model, &f).unwrap() + joint_lower_prevision(&model, &g).unwrap();
        prop_assert!(lhs >= rhs);
    }
}

#[test]
fn float_and_exact_agree_on_demo() {
    let text = credal_im::io::DEMO_PARTIAL;
    let exact = credal_im::parse_model::<Rational>(text).unwrap().credal().unwrap();
    let float = credal_im::parse_model::<f64>(text).unwrap().credal().unwrap();
    let te = generalized_bayes_im(&exact).unwrap();
    let tf = generalized_bayes_im(&float).unwrap();
    for y in 0..3 {
        for h in exact.param_frame().power_set() {
            let hf = float.param_frame().subset_from_bits(h.bits()).unwrap();
            assert!((to_f64(&te.lower(y, &h).unwrap()) - tf.lower(y, &hf).unwrap()).abs() < 1e-12);
        }
    }
}
