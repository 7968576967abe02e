//! Pass/fail reports for inequalities whose constants are only known to
//! exist: a bound `A ≤ C·B` is probed by the ratio `A/B` along a sweep.

use serde::{Deserialize, Serialize};

/// One measured ratio, tagged by its abscissa (usually the gas parameter
/// `x = ρa³`, sometimes a wavenumber or a box size).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub x: f64,
    pub ratio: f64,
}

/// How a report decides pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    /// Ratios finite and not growing toward small `x`: the least-squares
    /// slope of `log ratio` against `log(1/x)` is at most `tolerance_slope`.
    Trend { tolerance_slope: f64 },
    /// Every ratio finite and at most `limit`.
    Threshold { limit: f64 },
    /// Every ratio finite and inside `[lo, hi]`.
    Band { lo: f64, hi: f64 },
}

impl Default for Criterion {
    fn default() -> Self {
        Criterion::Trend {
            tolerance_slope: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub name: String,
    pub criterion: Criterion,
    pub worst_ratio: f64,
    pub trend: f64,
    pub pass: bool,
    pub samples: Vec<Sample>,
    /// Failures encountered while producing samples; any entry fails the
    /// report.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub errors: Vec<String>,
}

impl BoundReport {
    /// Evaluates the criterion on the given samples.
    pub fn new(name: impl Into<String>, criterion: Criterion, samples: Vec<Sample>) -> Self {
        let worst_ratio = samples
            .iter()
            .map(|s| s.ratio)
            .fold(f64::NEG_INFINITY, |m, r| {
                if r.is_nan() {
                    f64::NAN
                } else {
                    m.max(r)
                }
            });
        let trend = log_trend(&samples);
        let finite = !samples.is_empty() && samples.iter().all(|s| s.ratio.is_finite());
        let pass = finite
            && match criterion {
                Criterion::Trend { tolerance_slope } => trend <= tolerance_slope,
                Criterion::Threshold { limit } => worst_ratio <= limit,
                Criterion::Band { lo, hi } => {
                    samples.iter().all(|s| s.ratio >= lo && s.ratio <= hi)
                }
            };
        Self {
            name: name.into(),
            criterion,
            worst_ratio,
            trend,
            pass,
            samples,
            errors: Vec::new(),
        }
    }

    /// Trend-mode report with the default slope tolerance.
    pub fn bounded(name: impl Into<String>, samples: Vec<Sample>) -> Self {
        Self::new(name, Criterion::default(), samples)
    }

    /// A report that failed to produce its samples.
    pub fn failed(name: impl Into<String>, criterion: Criterion, error: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            criterion,
            worst_ratio: f64::NAN,
            trend: f64::NAN,
            pass: false,
            samples: Vec::new(),
            errors: vec![error.into()],
        }
    }

    /// Attaches errors (failing the report if any).
    pub fn with_errors(mut self, errors: Vec<String>) -> Self {
        if !errors.is_empty() {
            self.pass = false;
        }
        self.errors.extend(errors);
        self
    }
}

/// Least-squares slope of `log ratio` against `log(1/x)` over the samples
/// with positive ratio and abscissa. Zero when fewer than two such samples
/// exist (a single point carries no trend).
pub fn log_trend(samples: &[Sample]) -> f64 {
    let pts: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.ratio > 0.0 && s.x > 0.0 && s.ratio.is_finite())
        .map(|s| (-s.x.ln(), s.ratio.ln()))
        .collect();
    if pts.len() < 2 {
        return 0.0;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return 0.0;
    }
    pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / sxx
}

#[cfg(test)]
mod tests {
    use super::*;

    fn samples(f: impl Fn(f64) -> f64) -> Vec<Sample> {
        [1e-5, 1e-6, 1e-7, 1e-8]
            .iter()
            .map(|&x| Sample { x, ratio: f(x) })
            .collect()
    }

    #[test]
    fn constant_ratio_passes_with_zero_trend() {
        let r = BoundReport::bounded("c", samples(|_| 3.0));
        assert!(r.pass);
        assert!(r.trend.abs() < 1e-12);
        assert_eq!(r.worst_ratio, 3.0);
    }

    #[test]
    fn ratio_growing_toward_small_x_fails() {
        let r = BoundReport::bounded("g", samples(|x| x.powf(-0.2)));
        assert!(!r.pass);
        assert!((r.trend - 0.2).abs() < 1e-12);
        let d = BoundReport::bounded("d", samples(|x| x.powf(0.2)));
        assert!(d.pass);
    }

    #[test]
    fn non_finite_ratio_fails_every_mode() {
        let s = samples(|x| if x < 1e-7 { f64::INFINITY } else { 1.0 });
        assert!(!BoundReport::bounded("t", s.clone()).pass);
        assert!(!BoundReport::new("h", Criterion::Threshold { limit: 10.0 }, s).pass);
    }

    #[test]
    fn band_and_threshold_modes() {
        let s = samples(|_| 2.1);
        assert!(BoundReport::new("b", Criterion::Band { lo: 1.6, hi: 2.4 }, s.clone()).pass);
        assert!(!BoundReport::new("b", Criterion::Band { lo: 1.6, hi: 2.0 }, s.clone()).pass);
        assert!(!BoundReport::new("t", Criterion::Threshold { limit: 1.0 }, s).pass);
    }

    #[test]
    fn errors_fail_the_report_and_round_trip_through_json() {
        let r = BoundReport::bounded("e", samples(|_| 1.0)).with_errors(vec!["boom".into()]);
        assert!(!r.pass);
        let json = serde_json::to_string(&r).unwrap();
        let back: BoundReport = serde_json::from_str(&json).unwrap();
        assert_eq!(back, r);
    }
}
