use es_core::dist::ProcessSpec;
use es_core::functionals::{es_exact, sigma_es};
use es_core::mc::{
    deviation_curve, deviation_probability, histogram, longrun_sigma_oracle, run_trials,
    run_trials_multi, Executor, ExperimentSpec,
};
use es_core::rng::{derive_seed, split, CounterRng};
use es_core::{CorruptionModel, DistributionSpec, EstimatorConfig, RiskLevel, Sample};
use proptest::prelude::*;

fn lvl(a: f64) -> RiskLevel {
    RiskLevel::new(a).unwrap()
}

fn pareto_spec(estimator: EstimatorConfig, trials: usize, seed: u64) -> ExperimentSpec {
    let dist = DistributionSpec::pareto(1.0, 2.2).unwrap();
    ExperimentSpec {
        process: ProcessSpec::Iid { dist },
        estimator,
        alpha: lvl(0.1),
        sample_sizes: vec![1000],
        delta: 1.0,
        trials,
        master_seed: seed,
        corruption: CorruptionModel::None,
        truth: es_exact(&dist, lvl(0.1)).unwrap(),
    }
}

#[test]
fn trials_follow_the_seed_layout() {
    let mut spec = pareto_spec(EstimatorConfig::PlugIn, 20, 99);
    spec.corruption = CorruptionModel::MaxShiftGaussian {
        k: 3,
        mu: 5.0,
        sigma: 250.0,
    };
    let got = run_trials(&spec, 400, Executor::Sequential).unwrap();
    let dist = DistributionSpec::pareto(1.0, 2.2).unwrap();
    for (t, value) in got.iter().enumerate() {
        let seed = split(99, 400, t as u64);
        let mut data = vec![0.0; 400];
        dist.fill(&mut data, &mut CounterRng::new(seed));
        let sample = Sample::new(data).unwrap();
        let corrupted = es_core::corrupt::apply_corruption(
            &sample,
            &spec.corruption,
            derive_seed(seed, es_core::mc::CORRUPTION_TAG),
        )
        .unwrap();
        assert_eq!(*value, es_core::estim::plugin_es(&corrupted, lvl(0.1)));
    }
}

#[test]
fn seeds_give_consistent_probabilities() {
    let a = run_trials(
        &pareto_spec(EstimatorConfig::PlugIn, 20_000, 1),
        1000,
        Executor::default(),
    )
    .unwrap();
    let b = run_trials(
        &pareto_spec(EstimatorConfig::PlugIn, 20_000, 2),
        1000,
        Executor::default(),
    )
    .unwrap();
    assert_ne!(a, b);
    let truth = pareto_spec(EstimatorConfig::PlugIn, 1, 0).truth;
    let da = deviation_probability(&a, truth, 1.0);
    let db = deviation_probability(&b, truth, 1.0);
    let se = (da.stderr.powi(2) + db.stderr.powi(2)).sqrt();
    assert!((da.p_hat - db.p_hat).abs() < 4.0 * se, "{da:?} {db:?}");
}

#[test]
fn plugin_respects_heavy_tail_lower_bound() {
    // P(plugin - ES >= delta) >= (1/2) (x0 / (alpha (ES + delta)))^lambda N^-(lambda - 1).
    let spec = pareto_spec(EstimatorConfig::PlugIn, 20_000, 5);
    let est = run_trials(&spec, 1000, Executor::default()).unwrap();
    let upper = est.iter().filter(|&&e| e >= spec.truth + 1.0).count() as f64 / est.len() as f64;
    let bound = 0.5 * (1.0 / (0.1 * (spec.truth + 1.0))).powf(2.2) * 1000f64.powf(-1.2);
    assert!(upper >= bound, "{upper} < {bound}");
}

#[test]
fn curve_points_match_direct_runs() {
    let mut spec = pareto_spec(EstimatorConfig::default(), 300, 8);
    spec.sample_sizes = vec![600, 900];
    let curve = deviation_curve(&spec, Executor::default()).unwrap();
    for (point, &n) in curve.points.iter().zip(&spec.sample_sizes) {
        let est = run_trials(&spec, n, Executor::Sequential).unwrap();
        let d = deviation_probability(&est, spec.truth, spec.delta);
        assert_eq!((point.n, point.count, point.p_hat), (n, d.count, d.p_hat));
    }
}

#[test]
fn histogram_conserves_counts() {
    let spec = pareto_spec(EstimatorConfig::PlugIn, 2000, 3);
    let est = run_trials(&spec, 500, Executor::default()).unwrap();
    let h = histogram(&est, 50).unwrap();
    assert_eq!(h.counts.iter().sum::<usize>(), 2000);
    assert_eq!(h.bin_edges.len(), 51);
    assert_eq!((h.min, h.max), (h.bin_edges[0], h.bin_edges[50]));
}

#[test]
fn longrun_matches_two_point_variance() {
    let process = ProcessSpec::Iid {
        dist: DistributionSpec::scaled_bernoulli(0.05, 1.0).unwrap(),
    };
    let r = longrun_sigma_oracle(&process, lvl(0.1), 10_000, 500, 11).unwrap();
    assert!((r.value - 4.75).abs() < 3.0 * r.stderr, "{r:?}");
    let r2 = longrun_sigma_oracle(&process, lvl(0.1), 20_000, 500, 12).unwrap();
    let se = (r.stderr.powi(2) + r2.stderr.powi(2)).sqrt();
    assert!((r.value - r2.value).abs() < 3.0 * se, "{r:?} {r2:?}");
}

#[test]
fn longrun_matches_iid_normal_variance() {
    let dist = DistributionSpec::normal(0.0, 1.0).unwrap();
    let exact = sigma_es(&dist, lvl(0.1), 1e-10).unwrap().value;
    let r = longrun_sigma_oracle(&ProcessSpec::Iid { dist }, lvl(0.1), 10_000, 500, 4).unwrap();
    assert!((r.value - exact).abs() < 3.0 * r.stderr, "{r:?} vs {exact}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn executors_agree(seed in any::<u64>(), workers in 0usize..5, n in 100usize..400) {
        let mut spec = pareto_spec(EstimatorConfig::Truncated { m: 25, beta1: 0.5, beta2: 0.6, gap: 1 }, 64, seed);
        spec.corruption = CorruptionModel::ReplaceLargest { k: 2, value: 50.0 };
        let estimators = [EstimatorConfig::PlugIn, spec.estimator, EstimatorConfig::trimmed_default()];
        let a = run_trials_multi(&spec, &estimators, n, Executor::Sequential).unwrap();
        let b = run_trials_multi(&spec, &estimators, n, Executor::with_workers(workers)).unwrap();
        prop_assert_eq!(a, b);
    }
}
