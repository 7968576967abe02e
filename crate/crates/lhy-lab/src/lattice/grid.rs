//! Composite Gauss–Legendre radial grids with Filon-type oscillatory
//! quadrature.
//!
//! A grid is a sequence of panels `[e_j, e_{j+1}]`, each carrying the nodes
//! of a fixed-order Gauss–Legendre rule. Smooth functions are represented by
//! their samples at the nodes; on every panel the samples define a Legendre
//! interpolant, which makes integrals against `sin(ωx)` / `cos(ωx)` exact up
//! to the interpolation error, independently of how fast the kernel
//! oscillates.

use std::sync::{Arc, OnceLock};

use rayon::prelude::*;

use super::special::{spherical_bessel_sequence, GaussRule};
use super::LatticeError;

/// Default Gauss–Legendre order per panel.
pub const DEFAULT_ORDER: usize = 16;

fn shared_rule(order: usize) -> Arc<GaussRule> {
    static RULE16: OnceLock<Arc<GaussRule>> = OnceLock::new();
    if order == DEFAULT_ORDER {
        RULE16
            .get_or_init(|| Arc::new(GaussRule::new(DEFAULT_ORDER)))
            .clone()
    } else {
        Arc::new(GaussRule::new(order))
    }
}

/// Which oscillatory kernel to integrate against.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Oscillation {
    Sin,
    Cos,
}

/// Description of a radial grid: log-spaced panels plus mandatory
/// breakpoints, refined inside selected bands.
#[derive(Debug, Clone)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    /// Panels per decade of the logarithmic backbone.
    pub panels_per_decade: f64,
    /// Points that must coincide with panel edges (kinks, cutoff edges).
    pub breakpoints: Vec<f64>,
    /// Bands `(lo, hi, n)` in which every panel is split into at least `n`
    /// equal sub-panels.
    pub bands: Vec<(f64, f64, usize)>,
    /// Optional upper bound on the panel width.
    pub max_width: Option<f64>,
    /// Whether the first panel starts at zero instead of `r_min`.
    pub include_origin: bool,
    pub order: usize,
}

impl GridSpec {
    pub fn log(r_min: f64, r_max: f64, panels_per_decade: f64) -> Self {
        Self {
            r_min,
            r_max,
            panels_per_decade,
            breakpoints: Vec::new(),
            bands: Vec::new(),
            max_width: None,
            include_origin: false,
            order: DEFAULT_ORDER,
        }
    }

    pub fn with_breakpoints(mut self, points: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints.extend(points);
        self
    }

    pub fn with_band(mut self, lo: f64, hi: f64, subdivisions: usize) -> Self {
        self.bands.push((lo, hi, subdivisions));
        self
    }

    pub fn with_max_width(mut self, width: f64) -> Self {
        self.max_width = Some(width);
        self
    }

    pub fn with_origin(mut self) -> Self {
        self.include_origin = true;
        self
    }

    pub fn with_order(mut self, order: usize) -> Self {
        self.order = order;
        self
    }

    pub fn build(&self) -> Result<RadialGrid, LatticeError> {
        if !(self.r_min > 0.0 && self.r_max > self.r_min && self.r_max.is_finite()) {
            return Err(LatticeError::InvalidGrid(format!(
                "need 0 < r_min < r_max, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if !(self.panels_per_decade > 0.0) {
            return Err(LatticeError::InvalidGrid(
                "panels per decade must be positive".into(),
            ));
        }
        let decades = (self.r_max / self.r_min).log10();
        let n = (decades * self.panels_per_decade).ceil().max(1.0) as usize;
        let mut edges: Vec<f64> = (0..=n)
            .map(|i| self.r_min * 10f64.powf(decades * i as f64 / n as f64))
            .collect();
        edges[n] = self.r_max;
        for &b in &self.breakpoints {
            if b > self.r_min && b < self.r_max {
                edges.push(b);
            }
        }
        if self.include_origin {
            edges.push(0.0);
        }
        edges.sort_by(f64::total_cmp);
        // Drop edges that (nearly) coincide with a neighbour.
        let mut merged: Vec<f64> = Vec::with_capacity(edges.len());
        for e in edges {
            match merged.last() {
                Some(&last) if (e - last).abs() <= 1e-12 * e.abs().max(last.abs()) => {
                    // Keep breakpoints exact: prefer the requested value.
                    if self.breakpoints.contains(&e) {
                        *merged.last_mut().expect("non-empty") = e;
                    }
                }
                _ => merged.push(e),
            }
        }
        // Remove backbone edges that would leave slivers next to a breakpoint.
        let mut cleaned: Vec<f64> = Vec::with_capacity(merged.len());
        for (i, &e) in merged.iter().enumerate() {
            let is_break =
                self.breakpoints.contains(&e) || i == 0 || i + 1 == merged.len() || e == self.r_min;
            if !is_break {
                let prev = *cleaned.last().expect("first edge kept");
                let next = merged[i + 1];
                let sliver = 0.15 * (next - prev);
                if e - prev < sliver || next - e < sliver {
                    continue;
                }
            }
            cleaned.push(e);
        }
        let mut refined: Vec<f64> = vec![cleaned[0]];
        for w in cleaned.windows(2) {
            let (p, q) = (w[0], w[1]);
            let mut m = 1usize;
            for &(lo, hi, sub) in &self.bands {
                if p >= lo * (1.0 - 1e-12) && q <= hi * (1.0 + 1e-12) {
                    m = m.max(sub);
                }
            }
            if let Some(width) = self.max_width {
                m = m.max(((q - p) / width).ceil() as usize);
            }
            for j in 1..=m {
                refined.push(if j == m {
                    q
                } else {
                    p + (q - p) * j as f64 / m as f64
                });
            }
        }
        RadialGrid::from_edges(refined, self.order)
    }
}

/// A composite Gauss–Legendre grid on `[r_min, r_max]`.
#[derive(Debug, Clone)]
pub struct RadialGrid {
    edges: Vec<f64>,
    rule: Arc<GaussRule>,
    nodes: Vec<f64>,
    line_weights: Vec<f64>,
    weights: Vec<f64>,
}

impl RadialGrid {
    /// Builds a grid from strictly increasing, non-negative panel edges.
    pub fn from_edges(edges: Vec<f64>, order: usize) -> Result<Self, LatticeError> {
        if edges.len() < 2 {
            return Err(LatticeError::InvalidGrid("need at least one panel".into()));
        }
        if edges[0] < 0.0 || edges.iter().any(|e| !e.is_finite()) {
            return Err(LatticeError::InvalidGrid(
                "edges must be finite and non-negative".into(),
            ));
        }
        if edges.windows(2).any(|w| w[1] <= w[0]) {
            return Err(LatticeError::InvalidGrid(
                "edges must be strictly increasing".into(),
            ));
        }
        let rule = shared_rule(order);
        let mut nodes = Vec::with_capacity((edges.len() - 1) * order);
        let mut line_weights = Vec::with_capacity(nodes.capacity());
        for w in edges.windows(2) {
            let c = 0.5 * (w[0] + w[1]);
            let h = 0.5 * (w[1] - w[0]);
            for (t, wt) in rule.nodes.iter().zip(&rule.weights) {
                nodes.push(c + h * t);
                line_weights.push(h * wt);
            }
        }
        let weights = nodes
            .iter()
            .zip(&line_weights)
            .map(|(r, w)| w * r * r)
            .collect();
        Ok(Self {
            edges,
            rule,
            nodes,
            line_weights,
            weights,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    /// Weights for `∫ h(r) r² dr`.
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Weights for `∫ h(r) dr`.
    pub fn line_weights(&self) -> &[f64] {
        &self.line_weights
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn order(&self) -> usize {
        self.rule.order()
    }

    pub fn panels(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn r_min(&self) -> f64 {
        self.edges[0]
    }

    pub fn r_max(&self) -> f64 {
        *self.edges.last().expect("grid has edges")
    }

    /// Samples a function at every node.
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        self.nodes.iter().map(|&r| f(r)).collect()
    }

    /// `∫ h(r) dr` over the grid span.
    pub fn line_integral(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        values
            .iter()
            .zip(&self.line_weights)
            .map(|(v, w)| v * w)
            .sum()
    }

    /// `∫ h(|x|) dx` over the ball of radius `r_max` in three dimensions.
    pub fn volume_integral(&self, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.len());
        4.0 * std::f64::consts::PI
            * values
                .iter()
                .zip(&self.weights)
                .map(|(v, w)| v * w)
                .sum::<f64>()
    }

    /// Smallest spacing between consecutive nodes.
    pub fn min_spacing(&self) -> f64 {
        self.nodes
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(f64::INFINITY, f64::min)
    }

    /// Largest panel width.
    pub fn max_panel_width(&self) -> f64 {
        self.edges
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(0.0, f64::max)
    }

    /// Legendre coefficients of the per-panel interpolants of `values`.
    fn legendre_coefficients(&self, values: &[f64]) -> Vec<Vec<f64>> {
        let n = self.order();
        values
            .chunks(n)
            .map(|chunk| {
                (0..n)
                    .map(|k| {
                        self.rule.projection[k]
                            .iter()
                            .zip(chunk)
                            .map(|(p, v)| p * v)
                            .sum()
                    })
                    .collect()
            })
            .collect()
    }

    /// Filon–Legendre evaluation of `∫ g(x) sin(ωx) dx` (or `cos`) for every
    /// requested frequency, where `g` is given by its samples at the nodes.
    pub fn oscillatory_integrals(
        &self,
        values: &[f64],
        omegas: &[f64],
        kind: Oscillation,
    ) -> Vec<f64> {
        assert_eq!(values.len(), self.len(), "samples must match grid nodes");
        let n = self.order();
        let coeffs = self.legendre_coefficients(values);
        let active: Vec<(f64, f64, &Vec<f64>)> = self
            .edges
            .windows(2)
            .zip(&coeffs)
            .filter(|(_, c)| c.iter().any(|v| *v != 0.0))
            .map(|(w, c)| (0.5 * (w[0] + w[1]), 0.5 * (w[1] - w[0]), c))
            .collect();
        omegas
            .par_iter()
            .map_init(
                || vec![0.0; n],
                |jn, &omega| {
                    let mut total = 0.0;
                    for &(c, h, a) in &active {
                        spherical_bessel_sequence(h * omega, jn);
                        // Σ a_k 2 i^k j_k(hω) split into real / imaginary parts.
                        let mut re = 0.0;
                        let mut im = 0.0;
                        for k in 0..n {
                            let t = 2.0 * a[k] * jn[k];
                            match k % 4 {
                                0 => re += t,
                                1 => im += t,
                                2 => re -= t,
                                _ => im -= t,
                            }
                        }
                        let (s, co) = (c * omega).sin_cos();
                        total += h * match kind {
                            Oscillation::Sin => s * re + co * im,
                            Oscillation::Cos => co * re - s * im,
                        };
                    }
                    total
                },
            )
            .collect()
    }

    /// Interpolates the sampled function at an arbitrary point inside the
    /// grid span (Legendre interpolant of the containing panel).
    pub fn interpolate(&self, values: &[f64], r: f64) -> Option<f64> {
        if r < self.r_min() || r > self.r_max() {
            return None;
        }
        let idx = match self.edges.binary_search_by(|e| e.total_cmp(&r)) {
            Ok(i) => i.min(self.panels() - 1),
            Err(i) => i - 1,
        };
        let n = self.order();
        let chunk = &values[idx * n..(idx + 1) * n];
        let (lo, hi) = (self.edges[idx], self.edges[idx + 1]);
        let t = (2.0 * r - lo - hi) / (hi - lo);
        let p = super::special::legendre_values(n, t);
        let acc = self
            .rule
            .projection
            .iter()
            .zip(&p)
            .map(|(row, pk)| row.iter().zip(chunk).map(|(a, v)| a * v).sum::<f64>() * pk)
            .sum();
        Some(acc)
    }
}
