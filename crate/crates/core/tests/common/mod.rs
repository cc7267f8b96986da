#![allow(dead_code)]

use credal_im::credal::Likelihood;
use credal_im::{CredalModel, Frame, MassFunction, Rational};
use proptest::prelude::*;

pub fn r(p: i64, q: i64) -> Rational {
    Rational::new(p.into(), q.into())
}

pub fn to_f64(x: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    x.to_f64().unwrap()
}

/// Focal masks and integer weights; duplicates are merged on construction.
pub fn raw_mass(n: usize, max_focal: usize) -> impl Strategy<Value = Vec<(u64, i64)>> {
    prop::collection::vec((1u64..(1u64 << n), 1i64..=10), 1..=max_focal)
}

pub fn exact_mass(frame: &Frame, raw: &[(u64, i64)]) -> MassFunction<Rational> {
    let entries = raw.iter().map(|&(bits, w)| (frame.subset_from_bits(bits).unwrap(), r(w, 1)));
    MassFunction::renormalized(frame, entries).unwrap()
}

pub fn float_mass(exact: &MassFunction<Rational>) -> MassFunction<f64> {
    exact.map_scalar(to_f64).unwrap()
}

/// Frame of size 1..=5 with one random mass function.
pub fn mass_case() -> impl Strategy<Value = (Frame, MassFunction<Rational>)> {
    (1usize..=5).prop_flat_map(|n| raw_mass(n, 6).prop_map(move |raw| {
        let frame = Frame::indexed("t", n).unwrap();
        let m = exact_mass(&frame, &raw);
        (frame, m)
    }))
}

/// Frame of size 1..=5 with `k` mass functions on it.
pub fn mass_tuple(k: usize) -> impl Strategy<Value = (Frame, Vec<MassFunction<Rational>>)> {
    (1usize..=5).prop_flat_map(move |n| {
        prop::collection::vec(raw_mass(n, 6), k).prop_map(move |raws| {
            let frame = Frame::indexed("t", n).unwrap();
            let ms = raws.iter().map(|raw| exact_mass(&frame, raw)).collect();
            (frame, ms)
        })
    })
}

/// Row-stochastic integer weights normalized to rationals.
pub fn exact_likelihood(data: &Frame, param: &Frame, raw: &[Vec<i64>]) -> Likelihood<Rational> {
    let rows = raw
        .iter()
        .map(|row| {
            let total: i64 = row.iter().sum();
            row.iter().map(|&w| r(w, total)).collect()
        })
        .collect();
    Likelihood::new(data, param, rows).unwrap()
}

fn raw_rows(ny: usize, nt: usize) -> impl Strategy<Value = Vec<Vec<i64>>> {
    prop::collection::vec(
        prop::collection::vec(0i64..=10, ny).prop_filter("row needs mass", |row| row.iter().sum::<i64>() > 0),
        nt,
    )
}

/// Random credal model with `|𝕐|, |𝕋| ≤ 4` and at most `max_focal` focal sets.
pub fn model_case(max_focal: usize) -> impl Strategy<Value = CredalModel<Rational>> {
    (1usize..=4, 1usize..=4).prop_flat_map(move |(ny, nt)| {
        (raw_rows(ny, nt), raw_mass(nt, max_focal)).prop_map(move |(rows, mass)| {
            let data = Frame::indexed("y", ny).unwrap();
            let param = Frame::indexed("t", nt).unwrap();
            CredalModel::new(exact_likelihood(&data, &param, &rows), exact_mass(&param, &mass)).unwrap()
        })
    })
}

pub fn float_model(exact: &CredalModel<Rational>) -> CredalModel<f64> {
    let l = exact.likelihood();
    let rows = (0..l.param_frame().len()).map(|t| l.row(t).iter().map(to_f64).collect()).collect();
    let likelihood = Likelihood::new(l.data_frame(), l.param_frame(), rows).unwrap();
    CredalModel::new(likelihood, float_mass(exact.prior())).unwrap()
}

/// The three-point model whose precise Bayes IM shows false confidence.
pub fn demo_model() -> CredalModel<f64> {
    credal_im::parse_model::<f64>(credal_im::io::DEMO_VACUOUS).unwrap().credal().unwrap()
}
