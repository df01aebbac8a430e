use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use es_core::functionals::{sigma_es_rel, table1_rows, SIGMA_REL_TOL};
use es_core::mc::{
    deviation_curves, histogram_with_range, longrun_sigma_oracle, run_trials_multi,
    total_variation, DeviationCurve, Executor, ExperimentSpec, HistogramResult,
};
use es_core::report::{curve_csv, curves_svg, histogram_csv, histogram_svg, table1_csv};
use es_core::rng::derive_seed;
use es_core::{CorruptionModel, EstimatorConfig, RiskLevel, Sample};
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::{EstimateArgs, Kind, RunArgs};

const LONGRUN_TAG: u64 = 0x6c6f_6e67_7275_6e21;

/// Corruption used by `corrupt-demo` when the config does not name one.
pub fn default_demo_corruption() -> CorruptionModel {
    CorruptionModel::MaxShiftGaussian {
        k: 3,
        mu: 5.0,
        sigma: 250.0,
    }
}

pub fn read_data(path: &Path) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_data(&text).with_context(|| format!("in {}", path.display()))
}

fn parse_data(text: &str) -> Result<Vec<f64>> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let field = line.trim();
        if field.is_empty() {
            continue;
        }
        let value: f64 = field
            .parse()
            .with_context(|| format!("line {}: cannot parse {field:?} as a number", i + 1))?;
        if !value.is_finite() {
            bail!("line {}: value {field:?} is not finite", i + 1);
        }
        values.push(value);
    }
    if values.is_empty() {
        bail!("no data values");
    }
    Ok(values)
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let alpha = RiskLevel::new(args.alpha)?;
    let config = match args.estimator {
        Kind::Plugin => EstimatorConfig::PlugIn,
        Kind::Truncated => EstimatorConfig::Truncated {
            m: args.m,
            beta1: args.beta1,
            beta2: args.beta2,
            gap: args.gap,
        },
        Kind::MedianOfBlocks => EstimatorConfig::MedianOfBlocks {
            m: args.m,
            gap: args.gap,
        },
        Kind::Trimmed => EstimatorConfig::Trimmed {
            c: args.trim_c,
            exponent: args.trim_exp,
        },
    };
    config.validate()?;
    let sample = Sample::new(read_data(&args.data)?)?;
    let est = config.estimate(&sample, alpha)?;
    let d = args.digits;
    println!("{:.d$}", est.value);
    if let Some((lo, hi)) = est.clamp {
        println!("clamp {lo:.d$} {hi:.d$}");
    }
    Ok(())
}

pub fn table1(alphas: &[f64], out: Option<&Path>) -> Result<()> {
    let csv = table1_csv(&table1_rows(alphas)?);
    match out {
        Some(dir) => {
            fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
            let path = dir.join("table1.csv");
            fs::write(&path, csv).with_context(|| format!("writing {}", path.display()))?;
        }
        None => print!("{csv}"),
    }
    Ok(())
}

struct Run {
    command: &'static str,
    config: RunConfig,
    out: PathBuf,
    executor: Executor,
    svg: bool,
    files: Vec<String>,
    results: Map<String, Value>,
}

impl Run {
    fn prepare(command: &'static str, args: &RunArgs) -> Result<Self> {
        let config = RunConfig::load(&args.config)?;
        let out = args
            .out
            .clone()
            .or_else(|| config.output_dir.clone())
            .unwrap_or_else(|| PathBuf::from("out"));
        fs::create_dir_all(&out).with_context(|| format!("creating {}", out.display()))?;
        let executor = Executor::with_workers(args.workers.unwrap_or(config.workers));
        let svg = args.svg || config.emit_svg;
        Ok(Run {
            command,
            config,
            out,
            executor,
            svg,
            files: Vec::new(),
            results: Map::new(),
        })
    }

    fn write(&mut self, name: String, contents: &str) -> Result<()> {
        let path = self.out.join(&name);
        fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
        log::info!("wrote {}", path.display());
        self.files.push(name);
        Ok(())
    }

    fn title(&self, fallback: &str) -> String {
        self.config
            .title
            .clone()
            .unwrap_or_else(|| fallback.to_string())
    }

    fn histogram_n(&self) -> usize {
        let spec = &self.config.experiment;
        self.config
            .histogram
            .n
            .unwrap_or_else(|| *spec.sample_sizes.last().expect("validated non-empty"))
    }

    fn finish(self) -> Result<()> {
        let spec = &self.config.experiment;
        let labels = self.config.labels();
        let estimators: Vec<Value> = labels
            .iter()
            .zip(&self.config.estimators)
            .map(|(label, e)| json!({"label": label, "config": e}))
            .collect();
        let meta = Metadata {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION"),
            spec_hash: &self.config.spec_hash,
            master_seed: spec.master_seed,
            trials: spec.trials,
            alpha: spec.alpha.value(),
            delta: spec.delta,
            sample_sizes: &spec.sample_sizes,
            truth: spec.truth,
            truth_source: self.config.truth_source.as_str(),
            corruption: &spec.corruption,
            estimators,
            files: &self.files,
            results: &self.results,
        };
        let text = serde_json::to_string_pretty(&meta)? + "\n";
        let path = self.out.join("metadata.json");
        fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        Ok(())
    }
}

#[derive(Serialize)]
struct Metadata<'a> {
    command: &'a str,
    tool_version: &'a str,
    spec_hash: &'a str,
    master_seed: u64,
    trials: usize,
    alpha: f64,
    delta: f64,
    sample_sizes: &'a [usize],
    truth: f64,
    truth_source: &'a str,
    corruption: &'a CorruptionModel,
    estimators: Vec<Value>,
    files: &'a [String],
    results: &'a Map<String, Value>,
}

fn write_curves(run: &mut Run) -> Result<Vec<DeviationCurve>> {
    let spec = run.config.experiment.clone();
    let curves = deviation_curves(&spec, &run.config.estimators, run.executor)?;
    let labels = run.config.labels();
    for (label, curve) in labels.iter().zip(&curves) {
        run.write(format!("curve_{label}.csv"), &curve_csv(curve))?;
        for p in &curve.points {
            println!(
                "{label}\tN={}\tp_hat={}\tstderr={}\tcount={}",
                p.n, p.p_hat, p.stderr, p.count
            );
        }
    }
    if run.svg {
        let series: Vec<(String, &DeviationCurve)> = labels.iter().cloned().zip(&curves).collect();
        let svg = curves_svg(&run.title("Deviation probability"), &series);
        run.write("curves.svg".into(), &svg)?;
    }
    Ok(curves)
}

pub fn curve(args: &RunArgs) -> Result<()> {
    let mut run = Run::prepare("curve", args)?;
    write_curves(&mut run)?;
    run.finish()
}

fn span(columns: &[&[f64]]) -> (f64, f64) {
    columns
        .iter()
        .flat_map(|c| c.iter())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
            (lo.min(x), hi.max(x))
        })
}

fn upper_mass(estimates: &[f64], spec: &ExperimentSpec) -> f64 {
    let beyond = estimates
        .iter()
        .filter(|&&e| e >= spec.truth + spec.delta)
        .count();
    beyond as f64 / estimates.len() as f64
}

fn marks(spec: &ExperimentSpec) -> [f64; 3] {
    [spec.truth - spec.delta, spec.truth, spec.truth + spec.delta]
}

pub fn hist(args: &RunArgs) -> Result<()> {
    let mut run = Run::prepare("hist", args)?;
    let spec = run.config.experiment.clone();
    let n = run.histogram_n();
    let bins = run.config.histogram.bins;
    let columns = run_trials_multi(&spec, &run.config.estimators, n, run.executor)?;
    let refs: Vec<&[f64]> = columns.iter().map(Vec::as_slice).collect();
    let (lo, hi) = span(&refs);
    let mut summary = Map::new();
    for (label, estimates) in run.config.labels().iter().zip(&columns) {
        let h = histogram_with_range(estimates, bins, lo, hi)?;
        run.write(format!("hist_{label}.csv"), &histogram_csv(&h))?;
        if run.svg {
            let svg = histogram_svg(
                &format!("{} ({label}, N={n})", run.title("Estimates")),
                &h,
                &marks(&spec),
            );
            run.write(format!("hist_{label}.svg"), &svg)?;
        }
        let mass = upper_mass(estimates, &spec);
        println!(
            "{label}\tN={n}\tmin={}\tmax={}\tP(estimate >= ES + delta)={mass}",
            h.min, h.max
        );
        summary.insert(
            label.clone(),
            json!({"min": h.min, "max": h.max, "upper_mass": mass}),
        );
    }
    run.results.insert("n".into(), n.into());
    run.results.insert("bins".into(), bins.into());
    run.results.insert("histograms".into(), summary.into());
    run.finish()
}

pub fn corrupt_demo(args: &RunArgs) -> Result<()> {
    let mut run = Run::prepare("corrupt-demo", args)?;
    let corruption = if run.config.corruption_given {
        run.config.experiment.corruption.clone()
    } else {
        default_demo_corruption()
    };
    let clean_spec = run.config.with_corruption(CorruptionModel::None);
    let dirty_spec = run.config.with_corruption(corruption.clone());
    run.config.experiment = dirty_spec.clone();
    let n = run.histogram_n();
    let bins = run.config.histogram.bins;
    let clean = run_trials_multi(&clean_spec, &run.config.estimators, n, run.executor)?;
    let dirty = run_trials_multi(&dirty_spec, &run.config.estimators, n, run.executor)?;
    let mut summary = Map::new();
    for ((label, c), d) in run.config.labels().iter().zip(&clean).zip(&dirty) {
        let (lo, hi) = span(&[c, d]);
        let hc = histogram_with_range(c, bins, lo, hi)?;
        let hd = histogram_with_range(d, bins, lo, hi)?;
        let tv = total_variation(&hc, &hd)?;
        run.write(format!("hist_clean_{label}.csv"), &histogram_csv(&hc))?;
        run.write(format!("hist_corrupted_{label}.csv"), &histogram_csv(&hd))?;
        if run.svg {
            write_hist_svg(&mut run, "clean", label, n, &hc)?;
            write_hist_svg(&mut run, "corrupted", label, n, &hd)?;
        }
        let (mc, md) = (upper_mass(c, &clean_spec), upper_mass(d, &dirty_spec));
        println!("{label}\tN={n}\ttotal_variation={tv}\tupper_mass_clean={mc}\tupper_mass_corrupted={md}");
        summary.insert(
            label.clone(),
            json!({"total_variation": tv, "upper_mass_clean": mc, "upper_mass_corrupted": md}),
        );
    }
    run.results.insert("n".into(), n.into());
    run.results.insert("bins".into(), bins.into());
    run.results.insert("comparison".into(), summary.into());
    run.finish()
}

fn write_hist_svg(
    run: &mut Run,
    which: &str,
    label: &str,
    n: usize,
    h: &HistogramResult,
) -> Result<()> {
    let spec = &run.config.experiment;
    let svg = histogram_svg(
        &format!("{} ({which}, {label}, N={n})", run.title("Estimates")),
        h,
        &marks(spec),
    );
    run.write(format!("hist_{which}_{label}.svg"), &svg)
}

pub fn mixing(args: &RunArgs) -> Result<()> {
    let mut run = Run::prepare("mixing", args)?;
    write_curves(&mut run)?;
    let spec = run.config.experiment.clone();
    let opts = run.config.longrun;
    let seed = derive_seed(spec.master_seed, LONGRUN_TAG);
    let longrun = longrun_sigma_oracle(
        &spec.process,
        spec.alpha,
        opts.block_size,
        opts.blocks,
        seed,
    )?;
    let iid = sigma_es_rel(&spec.process.marginal(), spec.alpha, SIGMA_REL_TOL)?;
    println!(
        "long-run variance {} (stderr {}), i.i.d. value for the marginal {}",
        longrun.value, longrun.stderr, iid.value
    );
    let body = json!({
        "block_size": opts.block_size,
        "blocks": opts.blocks,
        "seed": seed,
        "variance": longrun.value,
        "stderr": longrun.stderr,
        "iid_variance": iid.value,
    });
    run.write(
        "longrun.json".into(),
        &(serde_json::to_string_pretty(&body)? + "\n"),
    )?;
    run.results.insert("longrun".into(), body);
    run.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reports_line_numbers() {
        assert_eq!(
            parse_data("1\n\n 2.5 \n-3e2\n").unwrap(),
            vec![1.0, 2.5, -300.0]
        );
        let err = format!("{:#}", parse_data("1\n2\nabc\n").unwrap_err());
        assert!(err.contains("line 3"), "{err}");
        let err = format!("{:#}", parse_data("1\nNaN\n").unwrap_err());
        assert!(err.contains("line 2"), "{err}");
        assert!(parse_data("\n\n").is_err());
    }
}
