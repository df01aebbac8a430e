//! Loss-distribution catalog and the AR(1) process.
//!
//! Every family exposes its CDF, survival function, generalized inverse
//! (value at risk), density where one exists, and an inverse-transform sampler
//! driven by [`CounterRng`]. Sampling draws `U` uniform on (0, 1) and returns
//! `VaR_{1-U}` through [`DistributionSpec::upper_quantile`], which keeps full
//! relative precision in the upper tail.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::CounterRng;
use crate::special::{
    std_normal_cdf, std_normal_inv, std_normal_pdf, std_normal_sf, student_t_cdf, student_t_pdf,
    student_t_sf, student_t_upper_quantile,
};

/// A loss distribution with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "DistributionJson", into = "DistributionJson")]
pub enum DistributionSpec {
    Normal {
        mu: f64,
        sigma: f64,
    },
    /// Standard Student-t (location 0, scale 1).
    StudentT {
        nu: f64,
    },
    Logistic {
        location: f64,
        scale: f64,
    },
    Lognormal {
        mu: f64,
        sigma: f64,
    },
    /// `P(X <= t) = 1 - (x0 / t)^lambda` for `t >= x0`.
    Pareto {
        x0: f64,
        lambda: f64,
    },
    Exponential {
        rate: f64,
    },
    /// `P(X = 0) = 1 - p`, `P(X = x) = p`.
    ScaledBernoulli {
        p: f64,
        x: f64,
    },
    /// Mass `1 - alpha - delta` at `x0 < 0`, mass `alpha` at 0 and uniform
    /// density `delta / |x0|` on `(x0, 0)`.
    AtomMix {
        x0: f64,
        alpha: f64,
        delta: f64,
    },
}

use DistributionSpec::*;

impl DistributionSpec {
    pub fn normal(mu: f64, sigma: f64) -> Result<Self> {
        Normal { mu, sigma }.validated()
    }
    pub fn student_t(nu: f64) -> Result<Self> {
        StudentT { nu }.validated()
    }
    pub fn logistic(location: f64, scale: f64) -> Result<Self> {
        Logistic { location, scale }.validated()
    }
    pub fn lognormal(mu: f64, sigma: f64) -> Result<Self> {
        Lognormal { mu, sigma }.validated()
    }
    pub fn pareto(x0: f64, lambda: f64) -> Result<Self> {
        Pareto { x0, lambda }.validated()
    }
    pub fn exponential(rate: f64) -> Result<Self> {
        Exponential { rate }.validated()
    }
    pub fn scaled_bernoulli(p: f64, x: f64) -> Result<Self> {
        ScaledBernoulli { p, x }.validated()
    }
    pub fn atom_mix(x0: f64, alpha: f64, delta: f64) -> Result<Self> {
        AtomMix { x0, alpha, delta }.validated()
    }

    fn validated(self) -> Result<Self> {
        self.validate()?;
        Ok(self)
    }

    /// Name used in the JSON form.
    pub fn family(&self) -> &'static str {
        match self {
            Normal { .. } => "normal",
            StudentT { .. } => "student_t",
            Logistic { .. } => "logistic",
            Lognormal { .. } => "lognormal",
            Pareto { .. } => "pareto",
            Exponential { .. } => "exponential",
            ScaledBernoulli { .. } => "scaled_bernoulli",
            AtomMix { .. } => "atom_mix",
        }
    }

    /// Parameters in their JSON order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        match *self {
            Normal { mu, sigma } => vec![("mu", mu), ("sigma", sigma)],
            StudentT { nu } => vec![("nu", nu)],
            Logistic { location, scale } => vec![("location", location), ("scale", scale)],
            Lognormal { mu, sigma } => vec![("mu", mu), ("sigma", sigma)],
            Pareto { x0, lambda } => vec![("x0", x0), ("lambda", lambda)],
            Exponential { rate } => vec![("rate", rate)],
            ScaledBernoulli { p, x } => vec![("p", p), ("x", x)],
            AtomMix { x0, alpha, delta } => vec![("x0", x0), ("alpha", alpha), ("delta", delta)],
        }
    }

    pub fn validate(&self) -> Result<()> {
        let ctx = self.family();
        let finite = |field: &'static str, v: f64| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(ctx, field, "must be finite"))
            }
        };
        let positive = |field: &'static str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::param(ctx, field, format!("must be > 0, got {v}")))
            }
        };
        let probability = |field: &'static str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::param(
                    ctx,
                    field,
                    format!("must lie in [0, 1], got {v}"),
                ))
            }
        };
        match *self {
            Normal { mu, sigma } | Lognormal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)
            }
            StudentT { nu } => positive("nu", nu),
            Logistic { location, scale } => {
                finite("location", location)?;
                positive("scale", scale)
            }
            Pareto { x0, lambda } => {
                positive("x0", x0)?;
                positive("lambda", lambda)
            }
            Exponential { rate } => positive("rate", rate),
            ScaledBernoulli { p, x } => {
                probability("p", p)?;
                positive("x", x)
            }
            AtomMix { x0, alpha, delta } => {
                if !(x0.is_finite() && x0 < 0.0) {
                    return Err(Error::param(ctx, "x0", format!("must be < 0, got {x0}")));
                }
                probability("alpha", alpha)?;
                probability("delta", delta)?;
                if delta <= 0.0 {
                    return Err(Error::param(ctx, "delta", "must be > 0"));
                }
                if alpha + delta >= 1.0 {
                    return Err(Error::param(ctx, "delta", "alpha + delta must be < 1"));
                }
                Ok(())
            }
        }
    }

    /// True when the law has a density everywhere on its support.
    pub fn is_continuous(&self) -> bool {
        !matches!(self, ScaledBernoulli { .. } | AtomMix { .. })
    }

    /// Power-law tail index of the upper tail, if the tail is polynomial.
    pub fn tail_index(&self) -> Option<f64> {
        match *self {
            Pareto { lambda, .. } => Some(lambda),
            StudentT { nu } => Some(nu),
            _ => None,
        }
    }

    /// Points where the CDF has a jump or kink.
    pub fn support_breakpoints(&self) -> Vec<f64> {
        match *self {
            Pareto { x0, .. } => vec![x0],
            Exponential { .. } | Lognormal { .. } => vec![0.0],
            ScaledBernoulli { x, .. } => vec![0.0, x],
            AtomMix { x0, .. } => vec![x0, 0.0],
            _ => Vec::new(),
        }
    }

    /// Upper-tail probabilities `w` where `w -> VaR_{1-w}` jumps or kinks.
    pub fn tail_breakpoints(&self) -> Vec<f64> {
        match *self {
            ScaledBernoulli { p, .. } => vec![p],
            AtomMix { alpha, delta, .. } => vec![alpha, alpha + delta],
            _ => Vec::new(),
        }
    }

    /// Essential infimum of the support, when finite.
    pub fn lower_bound(&self) -> Option<f64> {
        match *self {
            Pareto { x0, .. } => Some(x0),
            Exponential { .. } | Lognormal { .. } => Some(0.0),
            ScaledBernoulli { p, x } => Some(if p >= 1.0 { x } else { 0.0 }),
            AtomMix { x0, .. } => Some(x0),
            _ => None,
        }
    }

    pub fn cdf(&self, t: f64) -> f64 {
        match *self {
            Normal { mu, sigma } => std_normal_cdf((t - mu) / sigma),
            StudentT { nu } => student_t_cdf(nu, t),
            Logistic { location, scale } => 1.0 / (1.0 + (-(t - location) / scale).exp()),
            Lognormal { mu, sigma } => {
                if t <= 0.0 {
                    0.0
                } else {
                    std_normal_cdf((t.ln() - mu) / sigma)
                }
            }
            Exponential { rate } => {
                if t <= 0.0 {
                    0.0
                } else {
                    -(-rate * t).exp_m1()
                }
            }
            _ => 1.0 - self.sf(t),
        }
    }

    /// Survival function `P(X > t)`.
    pub fn sf(&self, t: f64) -> f64 {
        match *self {
            Normal { mu, sigma } => std_normal_sf((t - mu) / sigma),
            StudentT { nu } => student_t_sf(nu, t),
            Logistic { location, scale } => 1.0 / (1.0 + ((t - location) / scale).exp()),
            Lognormal { mu, sigma } => {
                if t <= 0.0 {
                    1.0
                } else {
                    std_normal_sf((t.ln() - mu) / sigma)
                }
            }
            Pareto { x0, lambda } => {
                if t < x0 {
                    1.0
                } else {
                    (x0 / t).powf(lambda)
                }
            }
            Exponential { rate } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (-rate * t).exp()
                }
            }
            ScaledBernoulli { p, x } => {
                if t < 0.0 {
                    1.0
                } else if t < x {
                    p
                } else {
                    0.0
                }
            }
            AtomMix { x0, alpha, delta } => {
                if t < x0 {
                    1.0
                } else if t < 0.0 {
                    alpha + delta * (-t / -x0)
                } else {
                    0.0
                }
            }
        }
    }

    /// Generalized inverse `inf { t : F(t) >= u }` for `u` in `[0, 1]`.
    ///
    /// At `u = 0` the support infimum is returned for families bounded below
    /// and [`Error::UndefinedQuantile`] otherwise. `u = 1` gives the support
    /// supremum, possibly `+inf`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&u) {
            return Err(Error::param(
                self.family(),
                "u",
                format!("level must lie in [0, 1], got {u}"),
            ));
        }
        if u == 0.0 {
            return self.lower_bound().ok_or(Error::UndefinedQuantile {
                family: self.family(),
            });
        }
        Ok(match *self {
            Normal { mu, sigma } => mu + sigma * std_normal_inv(u),
            StudentT { nu } => -student_t_upper_quantile(nu, u),
            Logistic { location, scale } => location + scale * (u.ln() - (-u).ln_1p()),
            Lognormal { mu, sigma } => (mu + sigma * std_normal_inv(u)).exp(),
            Exponential { rate } => -(-u).ln_1p() / rate,
            Pareto { x0, lambda } => x0 * (-(-u).ln_1p() / lambda).exp(),
            _ => self.upper_quantile(1.0 - u),
        })
    }

    /// `VaR_{1-w}`: the quantile at level `1 - w`, evaluated without forming
    /// `1 - w` so that small tail probabilities keep their precision.
    pub fn upper_quantile(&self, w: f64) -> f64 {
        match *self {
            Normal { mu, sigma } => mu - sigma * std_normal_inv(w),
            StudentT { nu } => student_t_upper_quantile(nu, w),
            Logistic { location, scale } => location + scale * ((-w).ln_1p() - w.ln()),
            Lognormal { mu, sigma } => (mu - sigma * std_normal_inv(w)).exp(),
            Exponential { rate } => -w.ln() / rate,
            Pareto { x0, lambda } => x0 * (-w.ln() / lambda).exp(),
            ScaledBernoulli { p, x } => {
                if w < p {
                    x
                } else {
                    0.0
                }
            }
            AtomMix { x0, alpha, delta } => {
                if w <= alpha {
                    0.0
                } else if w < alpha + delta {
                    x0 * (w - alpha) / delta
                } else {
                    x0
                }
            }
        }
    }

    /// Density at `t`; atoms report [`Error::NoDensity`].
    pub fn density(&self, t: f64) -> Result<f64> {
        Ok(match *self {
            Normal { mu, sigma } => std_normal_pdf((t - mu) / sigma) / sigma,
            StudentT { nu } => student_t_pdf(nu, t),
            Logistic { location, scale } => {
                let z = -((t - location) / scale).abs();
                let e = z.exp();
                e / (scale * (1.0 + e) * (1.0 + e))
            }
            Lognormal { mu, sigma } => {
                if t <= 0.0 {
                    0.0
                } else {
                    std_normal_pdf((t.ln() - mu) / sigma) / (sigma * t)
                }
            }
            Pareto { x0, lambda } => {
                if t < x0 {
                    0.0
                } else {
                    lambda / x0 * (x0 / t).powf(lambda + 1.0)
                }
            }
            Exponential { rate } => {
                if t < 0.0 {
                    0.0
                } else {
                    rate * (-rate * t).exp()
                }
            }
            ScaledBernoulli { .. } => {
                return Err(Error::NoDensity {
                    family: self.family(),
                    at: t,
                })
            }
            AtomMix { x0, delta, .. } => {
                if t == x0 || t == 0.0 {
                    return Err(Error::NoDensity {
                        family: self.family(),
                        at: t,
                    });
                }
                if t > x0 && t < 0.0 {
                    delta / -x0
                } else {
                    0.0
                }
            }
        })
    }

    /// `n` i.i.d. draws from the stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: u64) -> Result<Vec<f64>> {
        self.validate()?;
        if n == 0 {
            return Err(Error::param(self.family(), "n", "sample size must be >= 1"));
        }
        let mut out = vec![0.0; n];
        self.fill(&mut out, &mut CounterRng::new(seed));
        Ok(out)
    }

    /// Fills `buf` with draws, advancing `rng` by exactly `buf.len()` outputs.
    pub fn fill(&self, buf: &mut [f64], rng: &mut CounterRng) {
        match *self {
            Pareto { x0, lambda } => {
                let inv = -1.0 / lambda;
                for v in buf.iter_mut() {
                    *v = x0 * (rng.next_open01().ln() * inv).exp();
                }
            }
            Normal { mu, sigma } => {
                for v in buf.iter_mut() {
                    *v = mu - sigma * std_normal_inv(rng.next_open01());
                }
            }
            _ => {
                for v in buf.iter_mut() {
                    *v = self.upper_quantile(rng.next_open01());
                }
            }
        }
    }
}

impl std::fmt::Display for DistributionSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}(", self.family())?;
        for (i, (k, v)) in self.params().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{k}={v}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct DistributionJson {
    family: String,
    params: BTreeMap<String, f64>,
}

impl From<DistributionSpec> for DistributionJson {
    fn from(spec: DistributionSpec) -> Self {
        DistributionJson {
            family: spec.family().to_string(),
            params: spec
                .params()
                .into_iter()
                .map(|(k, v)| (k.to_string(), v))
                .collect(),
        }
    }
}

impl TryFrom<DistributionJson> for DistributionSpec {
    type Error = Error;

    fn try_from(json: DistributionJson) -> Result<Self> {
        let expected: &[&'static str] = match json.family.as_str() {
            "normal" | "lognormal" => &["mu", "sigma"],
            "student_t" => &["nu"],
            "logistic" => &["location", "scale"],
            "pareto" => &["x0", "lambda"],
            "exponential" => &["rate"],
            "scaled_bernoulli" => &["p", "x"],
            "atom_mix" => &["x0", "alpha", "delta"],
            other => {
                return Err(Error::Config(format!(
                    "unknown distribution family `{other}`"
                )))
            }
        };
        if let Some(extra) = json.params.keys().find(|k| !expected.contains(&k.as_str())) {
            return Err(Error::Config(format!(
                "unknown parameter `{extra}` for family `{}`",
                json.family
            )));
        }
        let get = |name: &'static str| {
            json.params.get(name).copied().ok_or_else(|| {
                Error::Config(format!(
                    "missing parameter `{name}` for family `{}`",
                    json.family
                ))
            })
        };
        let spec = match json.family.as_str() {
            "normal" => Normal {
                mu: get("mu")?,
                sigma: get("sigma")?,
            },
            "lognormal" => Lognormal {
                mu: get("mu")?,
                sigma: get("sigma")?,
            },
            "student_t" => StudentT { nu: get("nu")? },
            "logistic" => Logistic {
                location: get("location")?,
                scale: get("scale")?,
            },
            "pareto" => Pareto {
                x0: get("x0")?,
                lambda: get("lambda")?,
            },
            "exponential" => Exponential { rate: get("rate")? },
            "scaled_bernoulli" => ScaledBernoulli {
                p: get("p")?,
                x: get("x")?,
            },
            _ => AtomMix {
                x0: get("x0")?,
                alpha: get("alpha")?,
                delta: get("delta")?,
            },
        };
        spec.validated()
    }
}

/// A data-generating process: i.i.d. draws or a stationary Gaussian AR(1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProcessSpec {
    Iid {
        dist: DistributionSpec,
    },
    /// `X_t = rho X_{t-1} + sqrt(1 - rho^2) Z_t` with standard normal
    /// innovations and a standard normal start.
    Ar1 {
        rho: f64,
    },
}

impl ProcessSpec {
    pub fn validate(&self) -> Result<()> {
        match self {
            ProcessSpec::Iid { dist } => dist.validate(),
            ProcessSpec::Ar1 { rho } => {
                if rho.is_finite() && rho.abs() < 1.0 {
                    Ok(())
                } else {
                    Err(Error::param(
                        "ar1",
                        "rho",
                        format!("|rho| must be < 1, got {rho}"),
                    ))
                }
            }
        }
    }

    /// Marginal law of a single observation.
    pub fn marginal(&self) -> DistributionSpec {
        match *self {
            ProcessSpec::Iid { dist } => dist,
            ProcessSpec::Ar1 { .. } => Normal {
                mu: 0.0,
                sigma: 1.0,
            },
        }
    }

    /// Fills `buf` with one path (or i.i.d. draws) from `rng`.
    pub fn fill(&self, buf: &mut [f64], rng: &mut CounterRng) {
        match *self {
            ProcessSpec::Iid { dist } => dist.fill(buf, rng),
            ProcessSpec::Ar1 { rho } => ar1_fill(rho, buf, rng),
        }
    }
}

fn ar1_fill(rho: f64, buf: &mut [f64], rng: &mut CounterRng) {
    let scale = (1.0 - rho * rho).sqrt();
    let mut prev = 0.0;
    for (i, v) in buf.iter_mut().enumerate() {
        let z = std_normal_inv(rng.next_open01());
        *v = if i == 0 { z } else { rho * prev + scale * z };
        prev = *v;
    }
}

/// Stationary AR(1) path of length `n`.
pub fn ar1_path(rho: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    ProcessSpec::Ar1 { rho }.validate()?;
    if n == 0 {
        return Err(Error::param("ar1", "n", "path length must be >= 1"));
    }
    let mut out = vec![0.0; n];
    ar1_fill(rho, &mut out, &mut CounterRng::new(seed));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn degenerate_bernoulli_sample() {
        let s = DistributionSpec::scaled_bernoulli(1.0, 3.0)
            .unwrap()
            .sample(4, 0)
            .unwrap();
        assert_eq!(s, vec![3.0; 4]);
    }

    #[test]
    fn cdf_examples() {
        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        assert_relative_eq!(p.cdf(2.0), 0.75, epsilon = 1e-15);
        assert_eq!(p.cdf(0.5), 0.0);
        let b = DistributionSpec::scaled_bernoulli(0.05, 1.0).unwrap();
        assert_relative_eq!(b.cdf(0.3), 0.95, epsilon = 1e-15);
        assert_eq!(b.cdf(-0.1), 0.0);
        assert_eq!(b.cdf(1.0), 1.0);
    }

    #[test]
    fn quantile_examples() {
        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        assert_relative_eq!(p.quantile(0.99).unwrap(), 10.0, max_relative = 1e-12);
        let b = DistributionSpec::scaled_bernoulli(0.05, 1.0).unwrap();
        assert_eq!(b.quantile(0.96).unwrap(), 1.0);
        assert_eq!(b.quantile(0.95).unwrap(), 0.0);
        assert_eq!(b.quantile(0.5).unwrap(), 0.0);
        let n = DistributionSpec::normal(0.0, 1.0).unwrap();
        assert_eq!(n.quantile(0.5).unwrap(), 0.0);
    }

    #[test]
    fn quantile_at_zero_and_one() {
        let n = DistributionSpec::normal(0.0, 1.0).unwrap();
        assert!(matches!(
            n.quantile(0.0),
            Err(Error::UndefinedQuantile { .. })
        ));
        assert_eq!(n.quantile(1.0).unwrap(), f64::INFINITY);
        let p = DistributionSpec::pareto(2.0, 3.0).unwrap();
        assert_eq!(p.quantile(0.0).unwrap(), 2.0);
        let b = DistributionSpec::scaled_bernoulli(0.05, 1.0).unwrap();
        assert_eq!(b.quantile(1.0).unwrap(), 1.0);
        assert!(n.quantile(-0.1).is_err());
    }

    #[test]
    fn density_examples() {
        let e = DistributionSpec::exponential(1.0).unwrap();
        assert_eq!(e.density(-1.0).unwrap(), 0.0);
        let p = DistributionSpec::pareto(1.0, 2.0).unwrap();
        assert_relative_eq!(p.density(2.0).unwrap(), 0.25, epsilon = 1e-15);
        let b = DistributionSpec::scaled_bernoulli(0.05, 1.0).unwrap();
        assert!(matches!(b.density(1.0), Err(Error::NoDensity { .. })));
        let a = DistributionSpec::atom_mix(-0.1, 0.1, 0.02).unwrap();
        assert_relative_eq!(a.density(-0.05).unwrap(), 0.2, epsilon = 1e-15);
        assert!(a.density(0.0).is_err());
        assert!(a.density(-0.1).is_err());
    }

    #[test]
    fn atom_mix_quantile_is_continuous_at_kinks() {
        let a = DistributionSpec::atom_mix(-0.1, 0.1, 0.02).unwrap();
        assert_eq!(a.quantile(0.5).unwrap(), -0.1);
        assert_relative_eq!(a.quantile(0.89).unwrap(), -0.05, epsilon = 1e-15);
        assert_eq!(a.quantile(0.9).unwrap(), 0.0);
        assert_eq!(a.quantile(0.95).unwrap(), 0.0);
    }

    #[test]
    fn invalid_parameters_name_the_field() {
        match DistributionSpec::pareto(1.0, -2.0) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "lambda"),
            other => panic!("unexpected {other:?}"),
        }
        match DistributionSpec::atom_mix(-1.0, 0.6, 0.5) {
            Err(Error::InvalidParameter { field, .. }) => assert_eq!(field, "delta"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(DistributionSpec::scaled_bernoulli(1.5, 1.0).is_err());
        assert!(ar1_path(1.0, 10, 0).is_err());
        assert!(ar1_path(-1.2, 10, 0).is_err());
    }

    #[test]
    fn json_round_trip() {
        let spec = DistributionSpec::pareto(1.0, 2.2).unwrap();
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"family":"pareto","params":{"lambda":2.2,"x0":1.0}}"#
        );
        let back: DistributionSpec = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
        let bad: std::result::Result<DistributionSpec, _> =
            serde_json::from_str(r#"{"family":"pareto","params":{"x0":1.0,"lambda":-1}}"#);
        assert!(bad.is_err());
        let unknown: std::result::Result<DistributionSpec, _> =
            serde_json::from_str(r#"{"family":"cauchy","params":{}}"#);
        assert!(unknown.is_err());
    }

    #[test]
    fn sampling_is_deterministic() {
        let spec = DistributionSpec::student_t(5.0).unwrap();
        assert_eq!(spec.sample(100, 11).unwrap(), spec.sample(100, 11).unwrap());
        assert_ne!(spec.sample(100, 11).unwrap(), spec.sample(100, 12).unwrap());
        assert_eq!(ar1_path(0.3, 50, 1).unwrap(), ar1_path(0.3, 50, 1).unwrap());
    }
}
