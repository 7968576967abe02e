//! Special functions and one-dimensional quadrature rules used by the
//! radial transforms: Gauss–Legendre rules, spherical Bessel sequences,
//! the sine/cosine integrals and an adaptive Gauss–Kronrod integrator.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use super::LatticeError;

/// A Gauss–Legendre rule on `[-1, 1]` together with the Legendre
/// projection matrix used by the Filon panels.
#[derive(Debug, Clone)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    /// `projection[n][i] = (2n+1)/2 * w_i * P_n(t_i)`: multiplying samples by
    /// this matrix yields the Legendre coefficients of the interpolant.
    pub projection: Vec<Vec<f64>>,
}

impl GaussRule {
    pub fn new(order: usize) -> Self {
        assert!(order >= 2, "Gauss rule needs at least two nodes");
        let (nodes, weights) = gauss_legendre(order);
        let mut projection = vec![vec![0.0; order]; order];
        for (i, &t) in nodes.iter().enumerate() {
            let p = legendre_values(order, t);
            for n in 0..order {
                projection[n][i] = (2 * n + 1) as f64 / 2.0 * weights[i] * p[n];
            }
        }
        Self {
            nodes,
            weights,
            projection,
        }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }
}

/// Values `P_0(t) .. P_{n-1}(t)` by the three-term recurrence.
pub fn legendre_values(n: usize, t: f64) -> Vec<f64> {
    let mut p = vec![0.0; n];
    p[0] = 1.0;
    if n > 1 {
        p[1] = t;
    }
    for k in 2..n {
        p[k] = ((2 * k - 1) as f64 * t * p[k - 1] - (k - 1) as f64 * p[k - 2]) / k as f64;
    }
    p
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// ascending, computed by Newton iteration on `P_n`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Fills `out[n] = j_n(x)` for `n = 0..out.len()`.
///
/// Small arguments use the power series, large arguments the (stable)
/// upward recurrence and intermediate ones Miller's backward recurrence.
pub fn spherical_bessel_sequence(x: f64, out: &mut [f64]) {
    let n_max = out.len();
    if n_max == 0 {
        return;
    }
    let ax = x.abs();
    if ax < 1.0 {
        let x2 = x * x;
        let mut lead = 1.0;
        for (n, slot) in out.iter_mut().enumerate() {
            if n > 0 {
                lead *= x / (2 * n + 1) as f64;
            }
            let mut term = 1.0;
            let mut sum = 1.0;
            for k in 1..30 {
                term *= -x2 / (2.0 * k as f64 * (2 * n + 2 * k + 1) as f64);
                sum += term;
                if term.abs() < 1e-18 * sum.abs() {
                    break;
                }
            }
            *slot = lead * sum;
        }
        return;
    }
    let (s, c) = x.sin_cos();
    let j0 = s / x;
    let j1 = s / (x * x) - c / x;
    if ax > n_max as f64 {
        out[0] = j0;
        if n_max > 1 {
            out[1] = j1;
        }
        for n in 1..n_max.saturating_sub(1) {
            out[n + 1] = (2 * n + 1) as f64 / x * out[n] - out[n - 1];
        }
        return;
    }
    let start = n_max + 20 + ax as usize;
    let mut f_next = 0.0;
    let mut f = 1e-30;
    let mut buf = vec![0.0; start + 1];
    buf[start] = f;
    for n in (1..=start).rev() {
        let f_prev = (2 * n + 1) as f64 / x * f - f_next;
        f_next = f;
        f = f_prev;
        buf[n - 1] = f;
        if f.abs() > 1e250 {
            for v in buf[n - 1..].iter_mut() {
                *v *= 1e-250;
            }
            f *= 1e-250;
            f_next *= 1e-250;
        }
    }
    let scale = if j0.abs() >= j1.abs() {
        j0 / buf[0]
    } else {
        j1 / buf[1]
    };
    for (n, slot) in out.iter_mut().enumerate() {
        *slot = buf[n] * scale;
    }
}

/// Sine and cosine integrals `(Si(x), Ci(x))` for `x > 0`.
///
/// Power series below `x = 2`, complex continued fraction for `E_1(ix)`
/// above; both accurate to a few ulps.
pub fn sine_cosine_integrals(x: f64) -> (f64, f64) {
    const EULER: f64 = 0.577_215_664_901_532_9;
    assert!(x > 0.0, "sine/cosine integrals require x > 0");
    if x <= 2.0 {
        let mut si = 0.0;
        let mut ci = 0.0;
        let mut term = 1.0;
        for k in 1..60 {
            term *= x / k as f64;
            let contrib = term / k as f64;
            match k % 4 {
                1 => si += contrib,
                2 => ci -= contrib,
                3 => si -= contrib,
                _ => ci += contrib,
            }
            if contrib < 1e-18 {
                break;
            }
        }
        return (si, EULER + x.ln() + ci);
    }
    // Modified Lentz evaluation of E1(ix).
    let tiny = 1e-300;
    let mut b = Complex64::new(1.0, x);
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = Complex64::new(1.0, 0.0) / b;
    let mut h = d;
    for i in 1..200 {
        let a = -((i * i) as f64);
        b += 2.0;
        d = Complex64::new(1.0, 0.0) / (a * d + b);
        c = b + a / c;
        let del = c * d;
        h *= del;
        if (del.re - 1.0).abs() + del.im.abs() < 1e-16 {
            break;
        }
    }
    let (s, co) = x.sin_cos();
    h *= Complex64::new(co, -s);
    (FRAC_PI_2 + h.im, -h.re)
}

/// Result of an adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct Quadrature {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

const GK_XK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const GK_WK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_728_8,
];
const GK_WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> (f64, f64) {
    let c = 0.5 * (lo + hi);
    let h = 0.5 * (hi - lo);
    let fc = f(c);
    let mut kron = fc * GK_WK[7];
    let mut gauss = fc * GK_WG[3];
    for j in 0..7 {
        let dx = h * GK_XK[j];
        let s = f(c - dx) + f(c + dx);
        kron += GK_WK[j] * s;
        if j % 2 == 1 {
            gauss += GK_WG[j / 2] * s;
        }
    }
    (kron * h, ((kron - gauss) * h).abs())
}

/// Globally adaptive Gauss–Kronrod (7/15) integration of `f` over `[lo, hi]`.
///
/// Fails with [`LatticeError::QuadratureNonConvergence`] when the requested
/// tolerance `max(abs_tol, rel_tol*|I|)` is not met within `max_intervals`,
/// or when the integrand produces non-finite values.
pub fn adaptive_integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    abs_tol: f64,
    rel_tol: f64,
    max_intervals: usize,
) -> Result<Quadrature, LatticeError> {
    let mut pieces: Vec<(f64, f64, f64, f64)> = Vec::new();
    let (v, e) = gauss_kronrod_15(&f, lo, hi);
    pieces.push((lo, hi, v, e));
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if !value.is_finite() || !error.is_finite() {
            return Err(LatticeError::QuadratureNonConvergence {
                what: "non-finite integrand".into(),
                value,
                error,
            });
        }
        if error <= abs_tol.max(rel_tol * value.abs()) {
            return Ok(Quadrature {
                value,
                error,
                intervals: pieces.len(),
            });
        }
        if pieces.len() >= max_intervals {
            return Err(LatticeError::QuadratureNonConvergence {
                what: format!("interval budget {max_intervals} exhausted"),
                value,
                error,
            });
        }
        let (idx, _) = pieces
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .3.total_cmp(&b.1 .3))
            .expect("non-empty");
        let (a, b, _, _) = pieces.swap_remove(idx);
        let m = 0.5 * (a + b);
        let (v1, e1) = gauss_kronrod_15(&f, a, m);
        let (v2, e2) = gauss_kronrod_15(&f, m, b);
        pieces.push((a, m, v1, e1));
        pieces.push((m, b, v2, e2));
    }
}
