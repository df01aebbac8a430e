//! Contamination of samples before estimation.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estim::Sample;
use crate::rng::CounterRng;
use crate::special::std_normal_inv;

/// Denominator of the corruption budget `floor(N eps^2 / 140)`.
pub const BUDGET_DIVISOR: f64 = 140.0;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "CorruptionJson", into = "CorruptionJson")]
pub enum CorruptionModel {
    #[default]
    None,
    /// `X_i <- max(X_i, U_i)` with `U_i ~ N(mu, sigma^2)` for the first `k` indices.
    MaxShiftGaussian { k: usize, mu: f64, sigma: f64 },
    /// Overwrites the `k` largest values (ties broken by lower index).
    ReplaceLargest { k: usize, value: f64 },
    /// Overwrites the given 1-based positions.
    ReplaceIndices {
        indices: BTreeSet<usize>,
        value: f64,
    },
}

impl CorruptionModel {
    pub fn kind(&self) -> &'static str {
        match self {
            CorruptionModel::None => "none",
            CorruptionModel::MaxShiftGaussian { .. } => "max_shift_gaussian",
            CorruptionModel::ReplaceLargest { .. } => "replace_largest",
            CorruptionModel::ReplaceIndices { .. } => "replace_indices",
        }
    }

    /// Maximum number of entries the model can change.
    pub fn k(&self) -> usize {
        match self {
            CorruptionModel::None => 0,
            CorruptionModel::MaxShiftGaussian { k, .. }
            | CorruptionModel::ReplaceLargest { k, .. } => *k,
            CorruptionModel::ReplaceIndices { indices, .. } => indices.len(),
        }
    }

    pub fn is_none(&self) -> bool {
        self.k() == 0
    }

    /// Parameter checks that do not depend on the sample size.
    pub fn validate(&self) -> Result<()> {
        match self {
            CorruptionModel::MaxShiftGaussian { mu, sigma, .. } => {
                if !mu.is_finite() {
                    return Err(Error::param("corruption", "mu", "must be finite"));
                }
                if !(*sigma > 0.0 && sigma.is_finite()) {
                    return Err(Error::param(
                        "corruption",
                        "sigma",
                        format!("must be positive, got {sigma}"),
                    ));
                }
            }
            CorruptionModel::ReplaceLargest { value, .. }
            | CorruptionModel::ReplaceIndices { value, .. } => {
                if !value.is_finite() {
                    return Err(Error::param("corruption", "value", "must be finite"));
                }
            }
            CorruptionModel::None => {}
        }
        if let CorruptionModel::ReplaceIndices { indices, .. } = self {
            if indices.contains(&0) {
                return Err(Error::CorruptionIndex { index: 0, n: 0 });
            }
        }
        Ok(())
    }

    /// Checks that the model fits a sample of size `n`.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if let CorruptionModel::ReplaceIndices { indices, .. } = self {
            if let Some(&index) = indices.iter().find(|&&i| i == 0 || i > n) {
                return Err(Error::CorruptionIndex { index, n });
            }
        }
        let k = self.k();
        if k > n {
            return Err(Error::CorruptionTooLarge { k, n });
        }
        Ok(())
    }

    /// Corrupts `buf` in place; `scratch` holds indices for `ReplaceLargest`.
    pub fn apply_in_place(
        &self,
        buf: &mut [f64],
        seed: u64,
        scratch: &mut Vec<usize>,
    ) -> Result<()> {
        self.validate_for(buf.len())?;
        match self {
            CorruptionModel::None => {}
            CorruptionModel::MaxShiftGaussian { k, mu, sigma } => {
                let mut rng = CounterRng::new(seed);
                for x in &mut buf[..*k] {
                    let u = mu + sigma * std_normal_inv(rng.next_open01());
                    *x = x.max(u);
                }
            }
            CorruptionModel::ReplaceLargest { k, value } => {
                if *k == 0 {
                    return Ok(());
                }
                scratch.clear();
                scratch.extend(0..buf.len());
                let data = &*buf;
                scratch.select_nth_unstable_by(k - 1, |&i, &j| {
                    data[j].total_cmp(&data[i]).then(i.cmp(&j))
                });
                for &i in &scratch[..*k] {
                    buf[i] = *value;
                }
            }
            CorruptionModel::ReplaceIndices { indices, value } => {
                for &i in indices {
                    buf[i - 1] = *value;
                }
            }
        }
        Ok(())
    }
}

/// Returns a corrupted copy of `sample`.
pub fn apply_corruption(sample: &Sample, model: &CorruptionModel, seed: u64) -> Result<Sample> {
    let mut values = sample.as_slice().to_vec();
    model.apply_in_place(&mut values, seed, &mut Vec::new())?;
    Sample::new(values)
}

/// `floor(N eps^2 / 140)`.
pub fn corruption_budget(n: usize, eps: f64) -> Result<usize> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(Error::param(
            "corruption budget",
            "eps",
            format!("must lie in (0, 1], got {eps}"),
        ));
    }
    let raw = n as f64 * eps * eps / BUDGET_DIVISOR;
    let nearest = raw.round();
    let budget = if (raw - nearest).abs() <= 1e-9 * raw.max(1.0) {
        nearest
    } else {
        raw.floor()
    };
    Ok(budget as usize)
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CorruptionJson {
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    mu: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    sigma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    indices: Option<BTreeSet<usize>>,
}

impl From<CorruptionModel> for CorruptionJson {
    fn from(model: CorruptionModel) -> Self {
        let mut json = CorruptionJson {
            kind: model.kind().to_string(),
            k: None,
            mu: None,
            sigma: None,
            value: None,
            indices: None,
        };
        match model {
            CorruptionModel::None => {}
            CorruptionModel::MaxShiftGaussian { k, mu, sigma } => {
                json.k = Some(k);
                json.mu = Some(mu);
                json.sigma = Some(sigma);
            }
            CorruptionModel::ReplaceLargest { k, value } => {
                json.k = Some(k);
                json.value = Some(value);
            }
            CorruptionModel::ReplaceIndices { indices, value } => {
                json.indices = Some(indices);
                json.value = Some(value);
            }
        }
        json
    }
}

fn required<T>(field: &'static str, kind: &str, value: Option<T>) -> Result<T> {
    value.ok_or_else(|| Error::Config(format!("corruption kind `{kind}` requires `{field}`")))
}

impl TryFrom<CorruptionJson> for CorruptionModel {
    type Error = Error;
    fn try_from(json: CorruptionJson) -> Result<Self> {
        let kind = json.kind.as_str();
        let model = match kind {
            "none" => CorruptionModel::None,
            "max_shift_gaussian" => CorruptionModel::MaxShiftGaussian {
                k: required("k", kind, json.k)?,
                mu: required("mu", kind, json.mu)?,
                sigma: required("sigma", kind, json.sigma)?,
            },
            "replace_largest" => CorruptionModel::ReplaceLargest {
                k: required("k", kind, json.k)?,
                value: required("value", kind, json.value)?,
            },
            "replace_indices" => CorruptionModel::ReplaceIndices {
                indices: required("indices", kind, json.indices)?,
                value: required("value", kind, json.value)?,
            },
            other => {
                return Err(Error::Config(format!(
                    "unknown corruption kind `{other}` (expected none, max_shift_gaussian, replace_largest or replace_indices)"
                )))
            }
        };
        model.validate()?;
        Ok(model)
    }
}
