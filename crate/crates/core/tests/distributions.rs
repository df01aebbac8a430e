use es_core::dist::{ar1_path, DistributionSpec, ProcessSpec};
use proptest::prelude::*;

fn continuous_catalog() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::normal(0.3, 1.7).unwrap(),
        DistributionSpec::student_t(5.0).unwrap(),
        DistributionSpec::student_t(2.2).unwrap(),
        DistributionSpec::logistic(-1.0, 0.5).unwrap(),
        DistributionSpec::lognormal(0.0, 1.0).unwrap(),
        DistributionSpec::pareto(1.0, 2.2).unwrap(),
        DistributionSpec::pareto(2.0, 1.5).unwrap(),
        DistributionSpec::exponential(2.0).unwrap(),
    ]
}

fn atomic_catalog() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::scaled_bernoulli(0.05, 1.0).unwrap(),
        DistributionSpec::scaled_bernoulli(0.3, 4.0).unwrap(),
        DistributionSpec::atom_mix(-0.1, 0.1, 0.02).unwrap(),
        DistributionSpec::atom_mix(-2.0, 0.2, 0.5).unwrap(),
    ]
}

fn mean_and_sd(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

#[test]
fn pareto_sample_mean() {
    // Mean x0 lambda / (lambda - 1) = 2; cross-checked by integrating the
    // quantile function x0 (1 - u)^(-1/lambda) with u = 1 - s^4.
    let spec = DistributionSpec::pareto(1.0, 2.0).unwrap();
    let n = 200_000;
    let h = 1.0 / n as f64;
    let by_quantile: f64 = (0..n)
        .map(|i| {
            let s = (i as f64 + 0.5) * h;
            spec.upper_quantile(s.powi(4)) * 4.0 * s.powi(3) * h
        })
        .sum();
    assert!((by_quantile - 2.0).abs() < 1e-3, "{by_quantile}");

    let xs = spec.sample(1_000_000, 7).unwrap();
    let (mean, sd) = mean_and_sd(&xs);
    assert!((mean - 2.0).abs() < 3.0 * sd / 1000.0, "{mean} +- {sd}");
}

#[test]
fn normal_sample_fraction() {
    let spec = DistributionSpec::normal(0.0, 1.0).unwrap();
    let xs = spec.sample(1_000_000, 7).unwrap();
    let frac = xs.iter().filter(|&&x| x <= 1.28155).count() as f64 / 1e6;
    let p = spec.cdf(1.28155);
    assert!((p - 0.9).abs() < 1e-5);
    assert!(
        (frac - p).abs() < 3.0 * (p * (1.0 - p) / 1e6).sqrt(),
        "{frac}"
    );
}

fn ks_statistic(spec: &DistributionSpec, xs: &mut [f64]) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = spec.cdf(x);
            ((i + 1) as f64 / n - f).max(f - i as f64 / n)
        })
        .fold(0.0, f64::max)
}

#[test]
fn samples_match_cdf() {
    let n = 100_000;
    let threshold = 2.0 / (n as f64).sqrt() * 1.95;
    for spec in continuous_catalog() {
        for seed in 0..5 {
            let mut xs = spec.sample(n, seed).unwrap();
            let d = ks_statistic(&spec, &mut xs);
            assert!(d < threshold, "{spec} seed {seed}: {d}");
        }
    }
}

#[test]
fn atom_masses() {
    let (x0, a, d) = (-0.1, 0.1, 0.02);
    let spec = DistributionSpec::atom_mix(x0, a, d).unwrap();
    let n = 1_000_000;
    let xs = spec.sample(n, 5).unwrap();
    let check = |count: usize, p: f64| {
        let frac = count as f64 / n as f64;
        assert!(
            (frac - p).abs() < 3.0 * (p * (1.0 - p) / n as f64).sqrt(),
            "{frac} vs {p}"
        );
    };
    check(xs.iter().filter(|&&x| x == x0).count(), 1.0 - a - d);
    check(xs.iter().filter(|&&x| x == 0.0).count(), a);
    assert!(xs.iter().all(|&x| (x0..=0.0).contains(&x)));
}

#[test]
fn density_matches_cdf_slope() {
    for spec in continuous_catalog() {
        for i in 0..20 {
            let u = 0.025 + 0.95 * i as f64 / 19.0;
            let t = spec.quantile(u).unwrap();
            let h = 1e-4 * t.abs().max(1.0);
            let fd = (spec.cdf(t + h) - spec.cdf(t - h)) / (2.0 * h);
            let f = spec.density(t).unwrap();
            assert!(
                (fd - f).abs() <= 1e-6 * f.max(1.0),
                "{spec} at {t}: {fd} vs {f}"
            );
        }
    }
    let mix = DistributionSpec::atom_mix(-2.0, 0.2, 0.5).unwrap();
    assert_eq!(mix.density(-1.0).unwrap(), 0.25);
}

#[test]
fn ar1_independent_when_rho_zero() {
    let xs = ar1_path(0.0, 100_000, 3).unwrap();
    let r = lag1(&xs);
    assert!(r.abs() < 3.0 / (xs.len() as f64).sqrt(), "{r}");
}

#[test]
fn ar1_autocorrelation_and_variance() {
    let xs = ar1_path(0.5, 1_000_000, 3).unwrap();
    let n = xs.len() as f64;
    // Var of the lag-1 sample autocorrelation of an AR(1) is about (1 - rho^2)/n.
    let r = lag1(&xs);
    assert!((r - 0.5).abs() < 3.0 * (0.75 / n).sqrt(), "{r}");
    // Var of the sample variance is about 2 (1 + rho^2)/(1 - rho^2) / n.
    let (_, sd) = mean_and_sd(&xs);
    let se = (2.0 * 1.25 / 0.75 / n).sqrt();
    assert!((sd * sd - 1.0).abs() < 3.0 * se, "{}", sd * sd);
    assert!(ar1_path(1.0, 10, 0).is_err());
    assert!(ar1_path(-1.2, 10, 0).is_err());
}

#[test]
fn ar1_process_matches_path() {
    let p = ProcessSpec::Ar1 { rho: 0.5 };
    assert_eq!(p.marginal(), DistributionSpec::normal(0.0, 1.0).unwrap());
    let mut buf = vec![0.0; 50];
    p.fill(&mut buf, &mut es_core::rng::CounterRng::new(9));
    assert_eq!(buf, ar1_path(0.5, 50, 9).unwrap());
}

fn lag1(xs: &[f64]) -> f64 {
    let (mean, sd) = mean_and_sd(xs);
    let cov: f64 = xs
        .windows(2)
        .map(|w| (w[0] - mean) * (w[1] - mean))
        .sum::<f64>()
        / (xs.len() - 1) as f64;
    cov / (sd * sd)
}

proptest! {
    #[test]
    fn quantile_inverts_cdf(u in 1e-9f64..1.0) {
        for spec in continuous_catalog() {
            let t = spec.quantile(u).unwrap();
            let back = spec.cdf(t);
            prop_assert!(back >= u - 1e-12, "{} u={} t={} cdf={}", spec, u, t, back);
            prop_assert!((back - u).abs() <= 1e-12, "{} u={} cdf={}", spec, u, back);
        }
        for spec in atomic_catalog() {
            // Exact on the atoms; the linear pieces round at the last ulp.
            let t = spec.quantile(u).unwrap();
            prop_assert!(spec.cdf(t) >= u - 1e-15, "{} u={}", spec, u);
        }
    }

    #[test]
    fn cdf_is_monotone(a in -50.0f64..50.0, b in -50.0f64..50.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        for spec in continuous_catalog().into_iter().chain(atomic_catalog()) {
            prop_assert!(spec.cdf(lo) <= spec.cdf(hi));
            prop_assert!((spec.cdf(lo) + spec.sf(lo) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sampling_is_reproducible(seed in any::<u64>(), n in 1usize..64) {
        let spec = DistributionSpec::student_t(3.0).unwrap();
        prop_assert_eq!(spec.sample(n, seed).unwrap(), spec.sample(n, seed).unwrap());
    }
}
