//! Population functionals: expected shortfall, its asymptotic variance and
//! the local Lipschitz constants of the quantile function.
//!
//! Expected shortfall is available three ways that share no code path beyond
//! the distribution primitives:
//!
//! * [`es_exact`]: closed forms per family;
//! * [`es_by_quadrature`]: `(1/a) * int_{1-a}^1 VaR_u du` in quantile space,
//!   with `u = 1 - a s^k` to flatten the blow-up at `u = 1`;
//! * [`es_by_distortion`]: `int_{-inf}^0 (psi(F) - 1) dt + int_0^inf psi(F) dt`
//!   with `psi(x) = min((1 - x) / a, 1)`, integrated in loss space.
//!
//! The variance `sigma^2_ES = (1/a^2) * int int_{t,s > VaR} F(min(t,s)) - F(t)F(s)`
//! equals `Var((X - VaR_{1-a})_+) / a^2`; [`sigma_es`] integrates that
//! one-dimensional form while [`sigma_es_double_integral`] evaluates the
//! `(u, v)` double integral with the density, as an independent check.

use serde::{Deserialize, Serialize};

use crate::dist::DistributionSpec;
use crate::error::{Error, Result};
use crate::quad::{integrate, integrate_pieces, Integral, Tolerance};
use crate::special::std_normal_inv;

const MAX_INTERVALS: usize = 20_000;
const MAX_POWER: f64 = 64.0;

/// Default absolute tolerance for expected shortfall integrals.
pub const ES_TOL: f64 = 1e-10;
/// Default relative tolerance for the variance functional.
pub const SIGMA_REL_TOL: f64 = 1e-6;

/// Tail level `alpha` in (0, 1/2).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct RiskLevel(f64);

impl RiskLevel {
    pub fn new(alpha: f64) -> Result<Self> {
        if alpha > 0.0 && alpha < 0.5 {
            Ok(RiskLevel(alpha))
        } else {
            Err(Error::param(
                "risk level",
                "alpha",
                format!("must lie in (0, 1/2), got {alpha}"),
            ))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<RiskLevel> for f64 {
    fn from(alpha: RiskLevel) -> f64 {
        alpha.0
    }
}

impl TryFrom<f64> for RiskLevel {
    type Error = Error;
    fn try_from(alpha: f64) -> Result<Self> {
        RiskLevel::new(alpha)
    }
}

/// `sigma^2_ES`, possibly infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VarianceResult {
    pub value: f64,
    pub abs_error_bound: f64,
}

impl VarianceResult {
    pub fn infinite() -> Self {
        Self {
            value: f64::INFINITY,
            abs_error_bound: 0.0,
        }
    }

    pub fn exact(value: f64) -> Self {
        Self {
            value,
            abs_error_bound: 0.0,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// `sigma_ES`.
    pub fn std_dev(&self) -> f64 {
        self.value.sqrt()
    }
}

fn es_is_infinite(spec: &DistributionSpec) -> bool {
    matches!(spec.tail_index(), Some(index) if index <= 1.0)
}

fn variance_is_infinite(spec: &DistributionSpec) -> bool {
    matches!(spec.tail_index(), Some(index) if index <= 2.0)
}

fn infinite_es(spec: &DistributionSpec) -> Error {
    Error::InfiniteEs(spec.to_string())
}

/// Closed-form expected shortfall.
pub fn es_exact(spec: &DistributionSpec, alpha: RiskLevel) -> Result<f64> {
    spec.validate()?;
    if es_is_infinite(spec) {
        return Err(infinite_es(spec));
    }
    let a = alpha.value();
    Ok(match *spec {
        DistributionSpec::Normal { mu, sigma } => {
            let z = -std_normal_inv(a);
            mu + sigma * crate::special::std_normal_pdf(z) / a
        }
        DistributionSpec::StudentT { nu } => {
            let z = crate::special::student_t_upper_quantile(nu, a);
            crate::special::student_t_pdf(nu, z) * (nu + z * z) / ((nu - 1.0) * a)
        }
        DistributionSpec::Logistic { location, scale } => {
            let tail = -(1.0 - a) * (-a).ln_1p() - a * a.ln();
            location + scale * tail / a
        }
        DistributionSpec::Lognormal { mu, sigma } => {
            let z = -std_normal_inv(a);
            (mu + 0.5 * sigma * sigma).exp() * crate::special::std_normal_sf(z - sigma) / a
        }
        DistributionSpec::Exponential { rate } => (1.0 - a.ln()) / rate,
        DistributionSpec::Pareto { x0, lambda } => {
            x0 * lambda / (a.powf(1.0 / lambda) * (lambda - 1.0))
        }
        DistributionSpec::ScaledBernoulli { p, x } => x * (p / a).min(1.0),
        DistributionSpec::AtomMix {
            x0,
            alpha: mass0,
            delta,
        } => {
            // int_0^a VaR_{1-w} dw, piecewise in w
            let mut integral = 0.0;
            if a > mass0 {
                let top = a.min(mass0 + delta);
                integral += x0 / (2.0 * delta) * (top - mass0).powi(2);
            }
            if a > mass0 + delta {
                integral += x0 * (a - mass0 - delta);
            }
            integral / a
        }
    })
}

/// Substitution exponent for `int_0^a g(VaR_{1-w}) dw` with `w = a s^k`,
/// chosen so that a tail `VaR_{1-w} ~ w^(-1/index)` raised to `moment`
/// becomes integrable with a bounded integrand.
fn tail_power(spec: &DistributionSpec, moment: f64) -> f64 {
    if !spec.is_continuous() {
        return 1.0;
    }
    match spec.tail_index() {
        Some(index) if index > moment => (2.0 * index / (index - moment)).clamp(2.0, MAX_POWER),
        Some(_) => MAX_POWER,
        None => 2.0,
    }
}

/// `int_0^a g(VaR_{1-w}) dw` via `w = a s^k`.
fn tail_integral<G: Fn(f64) -> f64>(
    spec: &DistributionSpec,
    alpha: f64,
    moment: f64,
    g: G,
    tol: Tolerance,
) -> Result<Integral> {
    let k = tail_power(spec, moment);
    let mut points = vec![0.0];
    let mut breaks: Vec<f64> = spec
        .tail_breakpoints()
        .into_iter()
        .filter(|&w| w > 0.0 && w < alpha)
        .map(|w| (w / alpha).powf(1.0 / k))
        .collect();
    breaks.sort_by(f64::total_cmp);
    points.extend(breaks);
    points.push(1.0);
    let integrand = |s: f64| {
        let w = alpha * s.powf(k);
        if w == 0.0 {
            return 0.0;
        }
        alpha * k * s.powf(k - 1.0) * g(spec.upper_quantile(w))
    };
    integrate_pieces(integrand, &points, tol, MAX_INTERVALS).map_err(|source| Error::Quadrature {
        context: "quantile-space integral",
        source,
    })
}

/// Expected shortfall by integrating the quantile function over `(1-a, 1)`.
pub fn es_by_quadrature(spec: &DistributionSpec, alpha: RiskLevel, tol: f64) -> Result<f64> {
    spec.validate()?;
    if es_is_infinite(spec) {
        return Err(infinite_es(spec));
    }
    let a = alpha.value();
    let r = tail_integral(spec, a, 1.0, |x| x, Tolerance::abs(tol * a))?;
    Ok(r.value / a)
}

/// Expected shortfall through the distortion representation.
pub fn es_by_distortion(spec: &DistributionSpec, alpha: RiskLevel, tol: f64) -> Result<f64> {
    spec.validate()?;
    if es_is_infinite(spec) {
        return Err(infinite_es(spec));
    }
    let a = alpha.value();
    let psi = |t: f64| (spec.sf(t) / a).min(1.0);
    let var = spec.upper_quantile(a);
    let lower = var.min(0.0);

    let mut points = vec![lower, 0.0, var];
    points.extend(
        spec.support_breakpoints()
            .into_iter()
            .filter(|&t| t > lower),
    );
    points.sort_by(f64::total_cmp);
    points.dedup();
    let upper = *points.last().expect("non-empty");

    let body = integrate_pieces(
        |t| if t < 0.0 { psi(t) - 1.0 } else { psi(t) },
        &points,
        Tolerance::abs(0.5 * tol),
        MAX_INTERVALS,
    )
    .map_err(|source| Error::Quadrature {
        context: "distortion body",
        source,
    })?;

    // [upper, inf) mapped to v in (0, 1] by t = upper + c (v^-k - 1).
    let k = match spec.tail_index() {
        Some(index) => (2.0 / (index - 1.0)).clamp(0.25, MAX_POWER),
        None => 1.0,
    };
    let c = upper.abs().max(1.0);
    let tail = integrate(
        |v: f64| {
            let t = upper + c * (v.powf(-k) - 1.0);
            if !t.is_finite() {
                return 0.0;
            }
            let jacobian = c * k * v.powf(-k - 1.0);
            let value = psi(t) * jacobian;
            if value.is_nan() {
                0.0
            } else {
                value
            }
        },
        0.0,
        1.0,
        Tolerance::abs(0.5 * tol),
        MAX_INTERVALS,
    )
    .map_err(|source| Error::Quadrature {
        context: "distortion tail",
        source,
    })?;
    Ok(body.value + tail.value)
}

/// `sigma^2_ES` with absolute error at most `tol`.
pub fn sigma_es(spec: &DistributionSpec, alpha: RiskLevel, tol: f64) -> Result<VarianceResult> {
    spec.validate()?;
    if variance_is_infinite(spec) {
        return Ok(VarianceResult::infinite());
    }
    let a = alpha.value();
    if let DistributionSpec::ScaledBernoulli { p, x } = *spec {
        let value = if p <= a {
            x * x * (p - p * p) / (a * a)
        } else {
            0.0
        };
        return Ok(VarianceResult::exact(value));
    }
    let var = spec.upper_quantile(a);
    // int (Q - q) dw = a (ES - q); the closed form only sizes the tolerance.
    let scale = es_exact(spec, alpha)
        .map(|es| a * (es - var).abs())
        .unwrap_or(1.0);
    let budget = tol * a * a;
    let first = tail_integral(
        spec,
        a,
        1.0,
        |x| x - var,
        Tolerance::abs(0.25 * budget / (1.0 + 2.0 * scale)),
    )?;
    let second = tail_integral(
        spec,
        a,
        2.0,
        |x| (x - var) * (x - var),
        Tolerance::abs(0.5 * budget),
    )?;
    let value = ((second.value - first.value * first.value) / (a * a)).max(0.0);
    let abs_error_bound = (second.abs_error
        + 2.0 * first.value.abs() * first.abs_error
        + first.abs_error * first.abs_error)
        / (a * a);
    if abs_error_bound > tol {
        return Err(Error::Quadrature {
            context: "variance functional",
            source: crate::quad::QuadError::NotConverged {
                value,
                abs_error: abs_error_bound,
                intervals: 0,
            },
        });
    }
    Ok(VarianceResult {
        value,
        abs_error_bound,
    })
}

/// `sigma^2_ES` to relative accuracy `rel`.
pub fn sigma_es_rel(spec: &DistributionSpec, alpha: RiskLevel, rel: f64) -> Result<VarianceResult> {
    spec.validate()?;
    if variance_is_infinite(spec) {
        return Ok(VarianceResult::infinite());
    }
    let rough = sigma_es(spec, alpha, f64::MAX)?;
    if rough.value == 0.0 {
        return Ok(rough);
    }
    let rough_scale = (rough.value.abs() - rough.abs_error_bound).max(0.5 * rough.value.abs());
    sigma_es(spec, alpha, rel * rough_scale)
}

/// `sigma^2_ES` as `(1/a^2) int int (min(u,v) - uv) / (f(F^-1(u)) f(F^-1(v))) du dv`
/// over `(1-a, 1)^2`, by nested adaptive quadrature. Requires a density.
pub fn sigma_es_double_integral(
    spec: &DistributionSpec,
    alpha: RiskLevel,
    rel: f64,
) -> Result<f64> {
    spec.validate()?;
    if variance_is_infinite(spec) {
        return Ok(f64::INFINITY);
    }
    let a = alpha.value();
    let k = tail_power(spec, 2.0);
    let quantile_slope = |s: f64| -> Result<f64> {
        let w = a * s.powf(k);
        Ok(1.0 / spec.density(spec.upper_quantile(w))?)
    };
    quantile_slope(0.5)?;
    let mut failure = None;
    // u = 1 - a s^k, du = a k s^(k-1) ds; on r < s, min(u,v) - uv = u (1 - v).
    let inner = |s: f64, failure: &mut Option<Error>| -> f64 {
        let r = integrate(
            |r: f64| {
                let w = a * r.powf(k);
                if w == 0.0 {
                    return 0.0;
                }
                let slope = quantile_slope(r).unwrap_or(0.0);
                w * slope * a * k * r.powf(k - 1.0)
            },
            0.0,
            s,
            Tolerance::rel(0.01 * rel),
            MAX_INTERVALS,
        );
        match r {
            Ok(v) => v.value,
            Err(source) => {
                failure.get_or_insert(Error::Quadrature {
                    context: "double integral (inner)",
                    source,
                });
                0.0
            }
        }
    };
    let outer = integrate(
        |s: f64| {
            let w = a * s.powf(k);
            if w == 0.0 {
                return 0.0;
            }
            let slope = quantile_slope(s).unwrap_or(0.0);
            (1.0 - w) * slope * a * k * s.powf(k - 1.0) * inner(s, &mut failure)
        },
        0.0,
        1.0,
        Tolerance::rel(rel),
        MAX_INTERVALS,
    )
    .map_err(|source| Error::Quadrature {
        context: "double integral (outer)",
        source,
    })?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(2.0 * outer.value / (a * a))
}

fn local_lipschitz(spec: &DistributionSpec, level: f64) -> Result<f64> {
    let at = spec.upper_quantile(level);
    let density = spec.density(at)?;
    if density > 0.0 {
        Ok(1.0 / density)
    } else {
        Err(Error::NoDensity {
            family: spec.family(),
            at,
        })
    }
}

/// `D(a) = 1 / f(F^-1(1 - a))`.
pub fn lipschitz_d(spec: &DistributionSpec, alpha: RiskLevel) -> Result<f64> {
    spec.validate()?;
    local_lipschitz(spec, alpha.value())
}

/// `L = max over b in [a/2, 2a] of D(b)`, by a 129-point grid refined around
/// the running maximum.
pub fn lipschitz_l(spec: &DistributionSpec, alpha: RiskLevel) -> Result<f64> {
    spec.validate()?;
    const GRID: usize = 129;
    let a = alpha.value();
    let (mut lo, mut hi) = (0.5 * a, 2.0 * a);
    let mut best = f64::NEG_INFINITY;
    for round in 0..12 {
        let step = (hi - lo) / (GRID - 1) as f64;
        let mut arg = 0;
        let mut round_best = f64::NEG_INFINITY;
        for i in 0..GRID {
            let beta = if i == GRID - 1 {
                hi
            } else {
                lo + step * i as f64
            };
            let d = local_lipschitz(spec, beta)?;
            if d > round_best {
                round_best = d;
                arg = i;
            }
        }
        let converged = round >= 2 && (round_best - best).abs() <= 1e-6 * round_best.abs();
        best = best.max(round_best);
        if converged {
            break;
        }
        let center = lo + step * arg as f64;
        lo = (center - step).max(0.5 * a);
        hi = (center + step).min(2.0 * a);
    }
    Ok(best)
}

/// Families and parameters of the reference table.
pub fn table1_catalog() -> Vec<DistributionSpec> {
    vec![
        DistributionSpec::Normal {
            mu: 0.0,
            sigma: 1.0,
        },
        DistributionSpec::StudentT { nu: 5.0 },
        DistributionSpec::Logistic {
            location: 0.0,
            scale: 1.0,
        },
        DistributionSpec::Lognormal {
            mu: 0.0,
            sigma: 1.0,
        },
        DistributionSpec::Pareto {
            x0: 1.0,
            lambda: 2.0,
        },
        DistributionSpec::Pareto {
            x0: 1.0,
            lambda: 4.0,
        },
        DistributionSpec::Exponential { rate: 1.0 },
    ]
}

/// One `(distribution, alpha)` cell pair of the reference table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table1Row {
    pub spec: DistributionSpec,
    pub alpha: f64,
    pub d: f64,
    pub sigma: VarianceResult,
}

pub fn table1_rows(alphas: &[f64]) -> Result<Vec<Table1Row>> {
    let levels = alphas
        .iter()
        .map(|&a| RiskLevel::new(a))
        .collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(levels.len() * 7);
    for spec in table1_catalog() {
        for &alpha in &levels {
            let d = lipschitz_d(&spec, alpha).map_err(|e| cell_error(&spec, alpha, "D", e))?;
            let sigma = sigma_es_rel(&spec, alpha, SIGMA_REL_TOL)
                .map_err(|e| cell_error(&spec, alpha, "sigma", e))?;
            rows.push(Table1Row {
                spec,
                alpha: alpha.value(),
                d,
                sigma,
            });
        }
    }
    Ok(rows)
}

fn cell_error(spec: &DistributionSpec, alpha: RiskLevel, column: &str, err: Error) -> Error {
    Error::Config(format!(
        "cell {column} for {spec} at alpha={} failed: {err}",
        alpha.value()
    ))
}
