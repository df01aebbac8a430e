//! Expected shortfall estimators.
//!
//! All estimators are built from the plug-in value on some subset of the
//! data. The plug-in integral over the empirical quantile function is
//! evaluated exactly as a weighted sum of the top order statistics: with
//! `k = floor((1 - a) N)`, the statistic `X_(k+1)` carries weight
//! `(k + 1)/N - (1 - a)` and every higher one carries `1/N`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::RiskLevel;

pub const DEFAULT_BLOCK_SIZE: usize = 250;
pub const DEFAULT_BETA1: f64 = 0.5;
pub const DEFAULT_BETA2: f64 = 0.6;
pub const DEFAULT_TRIM_C: f64 = 0.25;
pub const DEFAULT_TRIM_EXP: f64 = 1.0 / 3.0;

/// Quantile levels outside this range are accepted with a warning.
pub const BETA_RANGE: (f64, f64) = (0.35, 0.65);

/// Observations in time order; all values finite, at least one.
#[derive(Debug, Clone, PartialEq)]
pub struct Sample(Vec<f64>);

impl Sample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        check_values(&values)?;
        Ok(Sample(values))
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for Sample {
    type Error = Error;
    fn try_from(values: Vec<f64>) -> Result<Self> {
        Sample::new(values)
    }
}

fn check_values(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::EmptySample);
    }
    match values.iter().position(|v| !v.is_finite()) {
        Some(index) => Err(Error::NonFiniteValue { index }),
        None => Ok(()),
    }
}

/// Plug-in ES of `buf`, reordering it in place. `buf` must be non-empty.
fn plugin_in_place(buf: &mut [f64], alpha: f64) -> f64 {
    let n = buf.len();
    let nf = n as f64;
    let k = (((1.0 - alpha) * nf).floor() as usize).min(n - 1);
    let tail = if k == 0 {
        &mut buf[..]
    } else {
        buf.select_nth_unstable_by(k, f64::total_cmp);
        &mut buf[k..]
    };
    // Sorting the short tail makes the sum independent of input order.
    tail.sort_unstable_by(f64::total_cmp);
    // The weights sum to a, so anchoring at X_(k+1) drops its own term and
    // returns constant data unchanged.
    let anchor = tail[0];
    let excess: f64 = tail[1..].iter().map(|x| x - anchor).sum();
    anchor + excess / (nf * alpha)
}

/// Exact plug-in expected shortfall.
pub fn plugin_es(sample: &Sample, alpha: RiskLevel) -> f64 {
    let mut buf = sample.0.clone();
    plugin_in_place(&mut buf, alpha.value())
}

fn interp_sorted(sorted: &[f64], beta: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let pos = beta * (n - 1) as f64;
    let j = pos.floor() as usize;
    if j >= n - 1 {
        return sorted[n - 1];
    }
    let t = pos - j as f64;
    sorted[j] + (sorted[j + 1] - sorted[j]) * t
}

fn check_beta(field: &'static str, beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::param(
            "interpolated quantile",
            field,
            format!("must lie in [0, 1], got {beta}"),
        ))
    }
}

/// Linear interpolation of the order statistics of `values` at breakpoints
/// `(j - 1)/(n - 1)`, `j = 1..=n`. A single value is returned as is.
pub fn interp_quantile(values: &[f64], beta: f64) -> Result<f64> {
    check_beta("beta", beta)?;
    check_values(values)?;
    let mut sorted = values.to_vec();
    sorted.sort_by(f64::total_cmp);
    Ok(interp_sorted(&sorted, beta))
}

/// Number of complete blocks of size `m` with `gap` skipped observations
/// before each one.
pub fn block_count(n: usize, m: usize, gap: usize) -> usize {
    if m == 0 || n < gap + m {
        0
    } else {
        (n - gap - m) / (m + gap) + 1
    }
}

fn check_blocks(n: usize, m: usize, gap: usize, needed: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::param("block estimator", "m", "must be at least 1"));
    }
    let blocks = block_count(n, m, gap);
    if blocks == 0 {
        return Err(Error::NoCompleteBlock { n, m, gap });
    }
    if blocks < needed {
        return Err(Error::TooFewBlocks {
            n,
            m,
            gap,
            blocks,
            max_m: n.saturating_sub(2 * gap) / 2,
        });
    }
    Ok(blocks)
}

fn blocks_into(
    data: &[f64],
    alpha: f64,
    m: usize,
    gap: usize,
    count: usize,
    scratch: &mut Vec<f64>,
    out: &mut Vec<f64>,
) {
    out.clear();
    for j in 0..count {
        let start = j * (m + gap) + gap;
        scratch.clear();
        scratch.extend_from_slice(&data[start..start + m]);
        out.push(plugin_in_place(scratch, alpha));
    }
}

/// Plug-in estimates of consecutive blocks. Block `j` (1-based) covers
/// indices `(j-1)(m+gap) + gap + 1 ..= (j-1)(m+gap) + gap + m`; the
/// incomplete remainder is dropped.
pub fn block_estimates(
    sample: &Sample,
    alpha: RiskLevel,
    m: usize,
    gap: usize,
) -> Result<Vec<f64>> {
    let count = check_blocks(sample.len(), m, gap, 1)?;
    let mut out = Vec::with_capacity(count);
    blocks_into(
        sample.as_slice(),
        alpha.value(),
        m,
        gap,
        count,
        &mut Vec::with_capacity(m),
        &mut out,
    );
    Ok(out)
}

/// Estimate with the clamp interval when one applies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub clamp: Option<(f64, f64)>,
}

fn warn_beta_range(beta1: f64, beta2: f64) {
    if beta1 < BETA_RANGE.0 || beta2 > BETA_RANGE.1 {
        log::warn!(
            "quantile levels ({beta1}, {beta2}) fall outside [{}, {}]; guarantees do not cover this choice",
            BETA_RANGE.0,
            BETA_RANGE.1
        );
    }
}

fn check_levels(beta1: f64, beta2: f64) -> Result<()> {
    check_beta("beta1", beta1)?;
    check_beta("beta2", beta2)?;
    if beta1 > beta2 {
        return Err(Error::param(
            "truncated estimator",
            "beta1",
            format!("must not exceed beta2 ({beta1} > {beta2})"),
        ));
    }
    Ok(())
}

/// Full-sample plug-in clamped to `[Q(beta1), Q(beta2)]` of the block estimates.
pub fn truncated_es(
    sample: &Sample,
    alpha: RiskLevel,
    m: usize,
    beta1: f64,
    beta2: f64,
    gap: usize,
) -> Result<Estimate> {
    check_levels(beta1, beta2)?;
    warn_beta_range(beta1, beta2);
    let mut ws = Workspace::default();
    truncated_with(
        sample.as_slice(),
        alpha.value(),
        m,
        beta1,
        beta2,
        gap,
        &mut ws,
    )
}

fn truncated_with(
    data: &[f64],
    alpha: f64,
    m: usize,
    beta1: f64,
    beta2: f64,
    gap: usize,
    ws: &mut Workspace,
) -> Result<Estimate> {
    let count = check_blocks(data.len(), m, gap, 2)?;
    blocks_into(data, alpha, m, gap, count, &mut ws.scratch, &mut ws.blocks);
    ws.blocks.sort_unstable_by(f64::total_cmp);
    let lower = interp_sorted(&ws.blocks, beta1);
    let upper = interp_sorted(&ws.blocks, beta2);
    ws.scratch.clear();
    ws.scratch.extend_from_slice(data);
    let plugin = plugin_in_place(&mut ws.scratch, alpha);
    Ok(Estimate {
        value: plugin.max(lower).min(upper),
        clamp: Some((lower, upper)),
    })
}

/// Interpolated median of the block estimates.
pub fn median_of_blocks(sample: &Sample, alpha: RiskLevel, m: usize, gap: usize) -> Result<f64> {
    let mut ws = Workspace::default();
    median_with(sample.as_slice(), alpha.value(), m, gap, &mut ws)
}

fn median_with(data: &[f64], alpha: f64, m: usize, gap: usize, ws: &mut Workspace) -> Result<f64> {
    let count = check_blocks(data.len(), m, gap, 1)?;
    if count == 1 {
        log::warn!("median of blocks computed from a single block");
    }
    blocks_into(data, alpha, m, gap, count, &mut ws.scratch, &mut ws.blocks);
    ws.blocks.sort_unstable_by(f64::total_cmp);
    Ok(interp_sorted(&ws.blocks, 0.5))
}

/// Number of largest points removed by the trimmed estimator.
pub fn trim_count(n: usize, c: f64, exponent: f64) -> usize {
    (c * (n as f64).powf(exponent)).floor() as usize
}

/// Plug-in on the sample with its `floor(c N^exponent)` largest values removed.
pub fn trimmed_es(sample: &Sample, alpha: RiskLevel, c: f64, exponent: f64) -> Result<f64> {
    check_trim(c, exponent)?;
    let mut buf = sample.0.clone();
    trimmed_in_place(&mut buf, alpha.value(), c, exponent)
}

fn check_trim(c: f64, exponent: f64) -> Result<()> {
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::param(
            "trimmed estimator",
            "trim_c",
            format!("must be positive, got {c}"),
        ));
    }
    if !exponent.is_finite() {
        return Err(Error::param(
            "trimmed estimator",
            "trim_exp",
            "must be finite",
        ));
    }
    Ok(())
}

fn trimmed_in_place(buf: &mut [f64], alpha: f64, c: f64, exponent: f64) -> Result<f64> {
    let n = buf.len();
    let k = trim_count(n, c, exponent);
    if k >= n {
        return Err(Error::TrimTooLarge { k, n });
    }
    let keep = n - k;
    if k > 0 {
        buf.select_nth_unstable_by(keep, f64::total_cmp);
    }
    Ok(plugin_in_place(&mut buf[..keep], alpha))
}

/// `ceil(11 / eps^2)`.
pub fn suggested_block_size(eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(
            "block size",
            "eps",
            format!("must lie in (0, 1], got {eps}"),
        ));
    }
    let raw = 11.0 / (eps * eps);
    let nearest = raw.round();
    // Absorb representation error such as 11 / 0.1^2 = 1099.9999999999998.
    let m = if (raw - nearest).abs() <= 1e-9 * raw {
        nearest
    } else {
        raw.ceil()
    };
    Ok(m as usize)
}

/// Reusable buffers for repeated estimation.
#[derive(Debug, Default, Clone)]
pub struct Workspace {
    scratch: Vec<f64>,
    blocks: Vec<f64>,
}

/// Estimator choice and hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "EstimatorJson", into = "EstimatorJson")]
pub enum EstimatorConfig {
    PlugIn,
    Truncated {
        m: usize,
        beta1: f64,
        beta2: f64,
        gap: usize,
    },
    MedianOfBlocks {
        m: usize,
        gap: usize,
    },
    Trimmed {
        c: f64,
        exponent: f64,
    },
}

impl Default for EstimatorConfig {
    fn default() -> Self {
        EstimatorConfig::Truncated {
            m: DEFAULT_BLOCK_SIZE,
            beta1: DEFAULT_BETA1,
            beta2: DEFAULT_BETA2,
            gap: 0,
        }
    }
}

impl EstimatorConfig {
    pub fn trimmed_default() -> Self {
        EstimatorConfig::Trimmed {
            c: DEFAULT_TRIM_C,
            exponent: DEFAULT_TRIM_EXP,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            EstimatorConfig::PlugIn => "plugin",
            EstimatorConfig::Truncated { .. } => "truncated",
            EstimatorConfig::MedianOfBlocks { .. } => "median_of_blocks",
            EstimatorConfig::Trimmed { .. } => "trimmed",
        }
    }

    /// Checks parameters and logs a warning for quantile levels outside
    /// the recommended range.
    pub fn validate(&self) -> Result<()> {
        match *self {
            EstimatorConfig::PlugIn => Ok(()),
            EstimatorConfig::Truncated {
                m, beta1, beta2, ..
            } => {
                if m == 0 {
                    return Err(Error::param(
                        "truncated estimator",
                        "m",
                        "must be at least 1",
                    ));
                }
                check_levels(beta1, beta2)?;
                warn_beta_range(beta1, beta2);
                Ok(())
            }
            EstimatorConfig::MedianOfBlocks { m, .. } => {
                if m == 0 {
                    Err(Error::param("median of blocks", "m", "must be at least 1"))
                } else {
                    Ok(())
                }
            }
            EstimatorConfig::Trimmed { c, exponent } => check_trim(c, exponent),
        }
    }

    pub fn estimate(&self, sample: &Sample, alpha: RiskLevel) -> Result<Estimate> {
        self.validate()?;
        self.estimate_with(sample.as_slice(), alpha, &mut Workspace::default())
    }

    /// Like [`estimate`](Self::estimate) on a raw slice, reusing `ws`.
    /// Skips the configuration warning; call [`validate`](Self::validate) once up front.
    pub fn estimate_with(
        &self,
        data: &[f64],
        alpha: RiskLevel,
        ws: &mut Workspace,
    ) -> Result<Estimate> {
        check_values(data)?;
        let a = alpha.value();
        let plain = |value| Estimate { value, clamp: None };
        match *self {
            EstimatorConfig::PlugIn => {
                ws.scratch.clear();
                ws.scratch.extend_from_slice(data);
                Ok(plain(plugin_in_place(&mut ws.scratch, a)))
            }
            EstimatorConfig::Truncated {
                m,
                beta1,
                beta2,
                gap,
            } => {
                check_levels(beta1, beta2)?;
                truncated_with(data, a, m, beta1, beta2, gap, ws)
            }
            EstimatorConfig::MedianOfBlocks { m, gap } => {
                median_with(data, a, m, gap, ws).map(plain)
            }
            EstimatorConfig::Trimmed { c, exponent } => {
                check_trim(c, exponent)?;
                ws.scratch.clear();
                ws.scratch.extend_from_slice(data);
                trimmed_in_place(&mut ws.scratch, a, c, exponent).map(plain)
            }
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EstimatorJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta1: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    beta2: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gap: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trim_c: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    trim_exp: Option<f64>,
}

impl From<EstimatorConfig> for EstimatorJson {
    fn from(config: EstimatorConfig) -> Self {
        let mut json = EstimatorJson {
            kind: config.kind().to_string(),
            m: None,
            beta1: None,
            beta2: None,
            gap: None,
            trim_c: None,
            trim_exp: None,
        };
        match config {
            EstimatorConfig::PlugIn => {}
            EstimatorConfig::Truncated {
                m,
                beta1,
                beta2,
                gap,
            } => {
                json.m = Some(m);
                json.beta1 = Some(beta1);
                json.beta2 = Some(beta2);
                json.gap = Some(gap);
            }
            EstimatorConfig::MedianOfBlocks { m, gap } => {
                json.m = Some(m);
                json.gap = Some(gap);
            }
            EstimatorConfig::Trimmed { c, exponent } => {
                json.trim_c = Some(c);
                json.trim_exp = Some(exponent);
            }
        }
        json
    }
}

impl TryFrom<EstimatorJson> for EstimatorConfig {
    type Error = Error;
    fn try_from(json: EstimatorJson) -> Result<Self> {
        let config = match json.kind.as_str() {
            "plugin" => EstimatorConfig::PlugIn,
            "truncated" => EstimatorConfig::Truncated {
                m: json.m.unwrap_or(DEFAULT_BLOCK_SIZE),
                beta1: json.beta1.unwrap_or(DEFAULT_BETA1),
                beta2: json.beta2.unwrap_or(DEFAULT_BETA2),
                gap: json.gap.unwrap_or(0),
            },
            "median_of_blocks" => EstimatorConfig::MedianOfBlocks {
                m: json.m.unwrap_or(DEFAULT_BLOCK_SIZE),
                gap: json.gap.unwrap_or(0),
            },
            "trimmed" => EstimatorConfig::Trimmed {
                c: json.trim_c.unwrap_or(DEFAULT_TRIM_C),
                exponent: json.trim_exp.unwrap_or(DEFAULT_TRIM_EXP),
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown estimator kind `{other}` (expected plugin, truncated, median_of_blocks or trimmed)"
                )))
            }
        };
        config.validate()?;
        Ok(config)
    }
}
