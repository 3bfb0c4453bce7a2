//! Property and cross-check suite: independent counting paths, structural
//! facts about covering arrays, and randomized invariants.

use proptest::prelude::*;

use ca_core::bounds::{
    lll_exact_min, lll_upper_elementary, lll_upper_w, slj_exact_min, slj_upper_elementary,
    slj_upper_w, two_stage_exact_min, two_stage_general_elementary, two_stage_general_w,
};
use ca_core::construct::{density_construct, juxtapose, CoverageArray, Interaction};
use ca_core::domain::{derive, log_binomial, log_binomial_tail};
use ca_core::lambert::{lambert_w0, lambert_wm1};
use ca_core::verify::{coverage_report, enumerate_interactions, is_ca_lambda};
use ca_core::CAParams;

/// Interaction-major counting: a second, independent path that never touches
/// the report's rank bookkeeping.
fn count_interaction_major(array: &CoverageArray) -> Vec<(Interaction, u64)> {
    let p = array.params;
    enumerate_interactions(p.t, p.k, p.v)
        .unwrap()
        .map(|interaction| {
            let count = (0..array.rows())
                .filter(|&r| interaction.realized_by(array.row(r)))
                .count() as u64;
            (interaction, count)
        })
        .collect()
}

proptest! {
    #[test]
    fn lambert_round_trip_on_negative_interval(frac in 1e-6f64..0.999_999) {
        let x = -frac / std::f64::consts::E;
        for w in [lambert_w0(x, 1e-12).unwrap(), lambert_wm1(x, 1e-12).unwrap()] {
            let residual = (w * w.exp() - x).abs();
            prop_assert!(residual <= 1e-10 * x.abs().max(1.0));
        }
    }

    #[test]
    fn lambert_principal_on_positive_axis(x in 0.0f64..1e8) {
        let w = lambert_w0(x, 1e-12).unwrap();
        prop_assert!((w * w.exp() - x).abs() <= 1e-10 * x.max(1.0));
    }

    #[test]
    fn binomial_tail_is_a_probability(n in 0u64..400, lambda in 1u32..8, vt in 2u32..64) {
        let p = 1.0 / f64::from(vt.max(4));
        let lt = log_binomial_tail(n, lambda, p).unwrap();
        prop_assert!(lt <= 1e-12, "log tail {lt} must be <= 0");
        prop_assert!(lt.exp() > 0.0);
    }

    #[test]
    fn coverage_paths_agree_on_random_arrays(
        seed in 0u64..5000,
        k in 2usize..5,
        rows in 0usize..12,
        lambda in 1u32..3,
    ) {
        let params = CAParams::new(2, k as u64, 2, lambda).unwrap();
        let array = ca_core::construct::random_array(&params, rows as u64, seed).unwrap();
        let report = coverage_report(&array).unwrap();
        let independent = count_interaction_major(&array);
        let from_report: Vec<(Interaction, u64)> = report.iter_counts().collect();
        prop_assert_eq!(from_report, independent);
        // coverage mass: every row realizes exactly one tuple per column t-set
        let t_sets = (k * (k - 1) / 2) as u128;
        prop_assert_eq!(report.sum_counts(), rows as u128 * t_sets);
    }

    #[test]
    fn text_format_round_trips(seed in 0u64..2000, rows in 0usize..9) {
        let params = CAParams::new(2, 4, 3, 1).unwrap();
        let array = ca_core::construct::random_array(&params, rows as u64, seed).unwrap();
        let mut buf = Vec::new();
        array.write_text(&mut buf).unwrap();
        let back = CoverageArray::read_text(&mut buf.as_slice()).unwrap();
        prop_assert_eq!(array, back);
    }
}

#[test]
fn cauchy_schwarz_chain_holds_numerically() {
    // sum_{i<lambda} C(N,i) p^i (1-p)^{N-i} <= (1-p)^{N-lambda+1} a (e N / lambda)^lambda
    // (the binomial-sum inequality needs N >= lambda)
    for t in [2u32, 3] {
        for v in [2u32, 3] {
            for lambda in 1u32..=5 {
                let params = CAParams::new(t, 10, v, lambda).unwrap();
                let d = derive(&params).unwrap();
                for n in u64::from(lambda)..60 {
                    let lhs = log_binomial_tail(n, lambda, d.p).unwrap();
                    let rhs = (n as f64 - f64::from(lambda) + 1.0) * d.ln_one_minus_p
                        + d.ln_a
                        + f64::from(lambda) * (1.0 + (n as f64 / f64::from(lambda)).ln());
                    assert!(
                        lhs <= rhs + 1e-12,
                        "chain violated at t={t} v={v} lambda={lambda} N={n}"
                    );
                }
            }
        }
    }
}

#[test]
fn log_binomial_matches_u128_arithmetic() {
    for n in 1u64..40 {
        for r in 0..=n {
            let mut exact: u128 = 1;
            for i in 1..=r.min(n - r) {
                exact = exact * u128::from(n - r.min(n - r) + i) / u128::from(i);
            }
            let got = log_binomial(n, r).unwrap();
            let want = (exact as f64).ln();
            assert!(
                (got - want).abs() <= 1e-12 * want.abs().max(1.0),
                "C({n},{r})"
            );
        }
    }
}

#[test]
fn ordering_chain_spot_checks() {
    for (t, k, v, lambda) in [(2u32, 7u64, 2u32, 2u32), (3, 9, 2, 3), (2, 31, 3, 4)] {
        let p = CAParams::new(t, k, v, lambda).unwrap();
        let se = slj_exact_min(&p).unwrap().rows;
        let sw = slj_upper_w(&p).unwrap().rows;
        let sel = slj_upper_elementary(&p).unwrap().rows;
        assert!(se <= sw && sw <= sel);
        let le = lll_exact_min(&p).unwrap().rows;
        let lw = lll_upper_w(&p).unwrap().rows;
        let lel = lll_upper_elementary(&p).unwrap().rows;
        assert!(le <= lw && lw <= lel);
        let te = two_stage_exact_min(&p).unwrap().rows;
        let tw = two_stage_general_w(&p).unwrap().rows;
        let tel = two_stage_general_elementary(&p).unwrap().rows;
        assert!(te <= tw && tw <= tel);
    }
}

#[test]
fn deleting_a_column_and_its_symbol_rows_drops_strength_by_one() {
    // a verified CA_2(N; 3, 4, 2): keep rows with symbol 0 in the last
    // column, drop that column, and the result covers strength 2
    let params = CAParams::new(3, 4, 2, 2).unwrap();
    let base = density_construct(&params, 0).unwrap();
    assert!(is_ca_lambda(&base).unwrap());

    let drop_col = 3usize;
    let kept: Vec<usize> = (0..base.rows())
        .filter(|&r| base.get(r, drop_col) == 0)
        .collect();
    let mut cells = Vec::with_capacity(kept.len() * 3);
    for &r in &kept {
        for c in 0..4 {
            if c != drop_col {
                cells.push(base.get(r, c));
            }
        }
    }
    let reduced_params = CAParams::new(2, 3, 2, 2).unwrap();
    let reduced = CoverageArray::new(reduced_params, kept.len(), cells).unwrap();
    assert!(
        is_ca_lambda(&reduced).unwrap(),
        "strength-2 coverage must survive the projection"
    );
}

#[test]
fn deleting_lambda_minus_one_rows_keeps_single_coverage() {
    let params = CAParams::new(2, 4, 2, 3).unwrap();
    let base = density_construct(&params, 0).unwrap();
    assert!(is_ca_lambda(&base).unwrap());
    // drop the first lambda - 1 = 2 rows
    let mut cells = Vec::new();
    for r in 2..base.rows() {
        cells.extend_from_slice(base.row(r));
    }
    let reduced_params = CAParams::new(2, 4, 2, 1).unwrap();
    let reduced = CoverageArray::new(reduced_params, base.rows() - 2, cells).unwrap();
    assert!(is_ca_lambda(&reduced).unwrap());
}

#[test]
fn naive_two_stage_mean_rows_track_the_bound() {
    // over 100 seeds the mean total row count stays within three standard
    // errors of the analytic objective value (the completion appends
    // lambda - c rows instead of the lambda the analysis charges)
    let params = CAParams::new(2, 5, 2, 2).unwrap();
    let bound = two_stage_exact_min(&params).unwrap();
    let mut totals = Vec::with_capacity(100);
    for seed in 0..100u64 {
        let arr = ca_core::construct::two_stage_naive_construct(&params, seed).unwrap();
        assert!(is_ca_lambda(&arr).unwrap(), "seed {seed}");
        totals.push(arr.rows() as f64);
    }
    let mean = totals.iter().sum::<f64>() / totals.len() as f64;
    let var = totals.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (totals.len() - 1) as f64;
    let se = (var / totals.len() as f64).sqrt();
    assert!(
        mean <= bound.real_bound + 3.0 * se,
        "mean {mean} vs bound {} (se {se})",
        bound.real_bound
    );
}

#[test]
fn coloring_beats_naive_completion_on_average() {
    let params = CAParams::new(2, 8, 2, 2).unwrap();
    let mut naive_sum = 0.0;
    let mut coloring_sum = 0.0;
    for seed in 0..100u64 {
        let naive = ca_core::construct::two_stage_naive_construct(&params, seed).unwrap();
        let colored = ca_core::construct::two_stage_coloring_construct(&params, seed).unwrap();
        assert!(is_ca_lambda(&naive).unwrap());
        assert!(is_ca_lambda(&colored).unwrap());
        naive_sum += naive.rows() as f64;
        coloring_sum += colored.rows() as f64;
    }
    assert!(
        coloring_sum / 100.0 <= naive_sum / 100.0,
        "coloring mean {} vs naive mean {}",
        coloring_sum / 100.0,
        naive_sum / 100.0
    );
}

#[test]
fn expected_edges_match_monte_carlo_on_wider_instances() {
    // smaller-scale companion to the acceptance oracle, on k = 5 and 6
    for (k, lambda, n, trials) in [(5u64, 2u32, 3u64, 20_000u64), (6, 1, 4, 20_000)] {
        let params = CAParams::new(2, k, 2, lambda).unwrap();
        let predicted = ca_core::bounds::coloring_expected_edges(&params, n).unwrap();
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for seed in 0..trials {
            let arr = ca_core::construct::random_array(&params, n, seed).unwrap();
            let edges = ca_core::construct::build_incompatibility_graph(&arr)
                .unwrap()
                .edge_count as f64;
            sum += edges;
            sum_sq += edges * edges;
        }
        let mean = sum / trials as f64;
        let se = ((sum_sq / trials as f64 - mean * mean).max(0.0) / trials as f64).sqrt();
        assert!(
            (mean - predicted).abs() <= 3.0 * se,
            "k={k} lambda={lambda} N={n}: predicted {predicted}, MC {mean} ± {se}"
        );
    }
}

#[test]
fn juxtaposed_factorial_reaches_requested_index() {
    let params = CAParams::new(2, 2, 2, 1).unwrap();
    let base = CoverageArray::new(params, 4, vec![0, 0, 0, 1, 1, 0, 1, 1]).unwrap();
    let stacked = juxtapose(&base, 3).unwrap();
    assert_eq!(stacked.rows(), 12);
    let report = coverage_report(&stacked).unwrap();
    assert!(report.min_coverage >= 3);
}
