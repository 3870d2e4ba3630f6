//! Cross-module invariants: semantic laws of the operators, complexity
//! trend reports, closure under argument extension, and the restriction
//! stability of the mass ranking.

use opgraph::arity::Arity;
use opgraph::basic::BasicFunc;
use opgraph::complexity::{
    behavior_complexity, k_vs_kp_report, value_complexity_table, Horizon, SweepWorld,
};
use opgraph::context::AdmissibleContext;
use opgraph::eval::{denote, BoxTable, DomainBox, Fuel};
use opgraph::graph::Program;
use opgraph::levin::mass_table;
use opgraph::programs;
use opgraph::zipf::{fit_power_law_auto, kendall_tau, rank_frequency, FitMethod};
use std::collections::BTreeMap;

fn leaf(bf: BasicFunc) -> Program {
    Program::leaf(bf).unwrap()
}

#[test]
fn composition_is_semantically_associative() {
    let ctx = AdmissibleContext::bare();
    let fuel = Fuel::with_budget(100_000);
    let cube = DomainBox::cube(1, 20);
    let cases: Vec<(Program, Program, Program)> = vec![
        (leaf(BasicFunc::Suc), leaf(BasicFunc::Suc), leaf(BasicFunc::Suc)),
        (leaf(BasicFunc::Suc), programs::pred_program(), leaf(BasicFunc::Suc)),
        (programs::pred_program(), programs::pred_program(), leaf(BasicFunc::Suc)),
    ];
    for (f, g, h) in cases {
        let left = Program::compose(
            Program::compose(f.clone(), g.clone()).unwrap(),
            h.clone(),
        )
        .unwrap();
        let right = Program::compose(f, Program::compose(g, h).unwrap()).unwrap();
        let lt = denote(&left, &cube, fuel, &ctx).unwrap();
        let rt = denote(&right, &cube, fuel, &ctx).unwrap();
        assert_eq!(lt.defined, rt.defined);
        assert_eq!(lt.undefined, rt.undefined);
    }
}

#[test]
fn tuple_projection_recovers_components() {
    let ctx = AdmissibleContext::bare();
    let fuel = Fuel::with_budget(100_000);
    let cube = DomainBox::cube(1, 15);
    let f1 = leaf(BasicFunc::Suc);
    let f2 = programs::pred_program();
    let tup = Program::tuple(vec![f1.clone(), f2.clone()]).unwrap();
    for (i, part) in [(1u32, &f1), (2u32, &f2)] {
        let projected =
            Program::compose(tup.clone(), leaf(BasicFunc::Proj(2, i))).unwrap();
        let got = denote(&projected, &cube, fuel, &ctx).unwrap();
        let want = denote(part, &cube, fuel, &ctx).unwrap();
        assert_eq!(got.defined, want.defined, "component {i}");
    }
}

#[test]
fn round_value_complexity_dips_below_neighbours() {
    // bits of the minimal code for 2^10 against the windows around it:
    // the numeral vocabulary prices the round id strictly below the
    // majority of its neighbours
    let ctx = AdmissibleContext::with_numerals(4096);
    let world = SweepWorld::prepare(&ctx, Horizon::default());
    let table = value_complexity_table(&world, &ctx, Fuel::with_budget(10_000));
    let target = table.khat(1024).unwrap();
    let mut strictly_above = 0;
    let mut total = 0;
    for x in (1024 - 32)..=(1024 + 32) {
        if x == 1024 {
            continue;
        }
        total += 1;
        if table.khat(x).unwrap().bits_form > target.bits_form {
            strictly_above += 1;
        }
    }
    assert!(
        strictly_above * 2 > total,
        "only {strictly_above}/{total} neighbours are costlier than 2^10"
    );
}

#[test]
fn k_vs_kp_comparison_table_emits() {
    // report-only: the envelope relation holds up to untracked constant
    // factors, so nothing beyond well-formedness is asserted
    let ctx = AdmissibleContext::with_numerals(2048);
    let world = SweepWorld::prepare(&ctx, Horizon::default());
    let table = value_complexity_table(&world, &ctx, Fuel::with_budget(2_000));
    let rows = k_vs_kp_report(&table, 0.1, 2048);
    assert!(rows.len() > 500);
    for row in &rows {
        assert!(row.kp_exp > 0.0 && row.k_upper_envelope > 0.0);
    }
}

#[test]
fn reciprocal_sequences_are_dominated_in_trend() {
    // declared convergent sequence r_l = 1/l²: its order against the
    // prefix-code masses 2^(-bits) is positively rank-correlated
    let ctx = AdmissibleContext::with_numerals(4096);
    let world = SweepWorld::prepare(&ctx, Horizon::default());
    let table = value_complexity_table(&world, &ctx, Fuel::with_budget(2_000));
    let mut pairs = Vec::new();
    for l in 1u64..=256 {
        if let Ok(cv) = table.kphat(l) {
            let r_l = 1.0 / (l as f64 * l as f64);
            pairs.push((r_l, (-(cv.bits_form as f64)).exp2()));
        }
    }
    assert!(pairs.len() >= 200);
    let tau = kendall_tau(&pairs);
    assert!(tau >= 0.0, "domination trend broke: tau = {tau}");
}

#[test]
fn constant_extension_found_with_bounded_extra_bits() {
    // closure under dummy-argument extension, realized by the sweep: the
    // (1,1) constant behavior is found within a few bits of the (0,1)
    // constant witness
    let ctx = AdmissibleContext::bare();
    let world = SweepWorld::prepare(&ctx, Horizon::bits(22));
    let table = value_complexity_table(&world, &ctx, Fuel::with_budget(2_000));
    let fuel = Fuel::with_budget(2_000);
    for x in 2u64..=3 {
        let base_bits = table.khat(x).unwrap().bits_form;
        let target = BoxTable::total(Arity::new(1, 1), DomainBox::cube(1, 8), |_| vec![x]);
        let ext = behavior_complexity(&target, &world, &ctx, fuel).unwrap();
        assert!(
            ext.bits_form <= base_bits + 8,
            "extension of const {x}: {} bits vs base {}",
            ext.bits_form,
            base_bits
        );
    }
}

#[test]
fn mass_ranking_stable_under_even_restriction() {
    // restricting the world to even values and re-ranking moves the
    // fitted exponent by less than 0.3
    let ctx = AdmissibleContext::with_numerals(4096);
    let table = mass_table(&ctx, 28, Fuel::with_budget(10_000));
    let scale = |t: &opgraph::levin::MassTable| -> BTreeMap<String, u64> {
        let exp = t.iter().map(|(_, e)| e.mass.exponent()).max().unwrap();
        t.iter()
            .map(|(&x, e)| (format!("n{x:07}"), u64::try_from(e.mass.numerator_at(exp)).unwrap()))
            .collect()
    };
    let full = rank_frequency(&scale(&table)).unwrap();
    let even = rank_frequency(&scale(&table.restrict(|x| x % 2 == 0))).unwrap();
    let fit_full = fit_power_law_auto(&full, FitMethod::LsLogLog).unwrap();
    let fit_even = fit_power_law_auto(&even, FitMethod::LsLogLog).unwrap();
    let drift = (fit_full.exponent - fit_even.exponent).abs();
    assert!(
        drift <= 0.3,
        "restriction drift {drift:.3}: full {:.3} vs even {:.3}",
        fit_full.exponent,
        fit_even.exponent
    );
}
