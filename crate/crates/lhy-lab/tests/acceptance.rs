//! Acceptance checks: one PASS/FAIL line per criterion, with the measured
//! values and the wall time against its budget. Exits non-zero if any
//! reproducible criterion fails.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use lhy_lab::energy::{
    density_sweep, exponent_fit, g_sum_vs_integral, lhy_constant, lhy_integral, SweepColumn,
    SweepPoint, SweepSettings,
};
use lhy_lab::estimates::{run_scattering_suite, scattering_normalisation, verify_all, SweepSpec};
use lhy_lab::fock::{fock_sweep, FockCheckConfig};
use lhy_lab::kernels::PhysicalParams;

/// Reference value of the second-order coefficient used for the `ĉ₂` checks.
const C2_REFERENCE: f64 = 4.8144;
const SWEEP: [f64; 5] = [1e-6, 3e-7, 1e-7, 3e-8, 1e-8];
const COEFFICIENT_SWEEP: [f64; 3] = [1e-6, 1e-7, 1e-8];

struct Line {
    id: u32,
    title: &'static str,
    pass: bool,
    detail: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn within(elapsed: Duration, budget: Duration) -> (bool, String) {
    (
        elapsed <= budget,
        format!("{:.2} s of {} s", elapsed.as_secs_f64(), budget.as_secs()),
    )
}

fn lhy_coefficient() -> Line {
    let ((constant, integral), elapsed) = timed(|| (lhy_constant(), lhy_integral(0.5)));
    let closed = 128.0 / (15.0 * PI.sqrt());
    let exact_integral = 8.0 * 2f64.sqrt() / 15.0;
    let (fast, time) = within(elapsed, Duration::from_secs(1));
    let (pass, detail) = match (constant, integral) {
        (Ok(c), Ok(i)) => {
            let rel = (c - closed).abs() / closed;
            let di = (i - exact_integral).abs();
            (
                rel <= 1e-6 && di <= 1e-8 && fast,
                format!("coefficient {c:.12} (rel. err {rel:.1e} ≤ 1e-6), integral err {di:.1e} ≤ 1e-8, {time}"),
            )
        }
        (c, i) => (
            false,
            format!("evaluation failed: {:?} / {:?}", c.err(), i.err()),
        ),
    };
    Line {
        id: 1,
        title: "second-order constant 128/(15√π)",
        pass,
        detail,
    }
}

fn second_order_coefficient(points: &[SweepPoint], time: &str, fast: bool) -> Line {
    let c2: Vec<f64> = COEFFICIENT_SWEEP
        .iter()
        .filter_map(|x| points.iter().find(|p| p.row.x == *x).map(|p| p.row.c2_hat))
        .collect();
    let errors: Vec<f64> = c2.iter().map(|c| (c - C2_REFERENCE).abs()).collect();
    let complete = c2.len() == COEFFICIENT_SWEEP.len();
    let last_rel = errors.last().map_or(f64::NAN, |e| e / C2_REFERENCE);
    let non_increasing = errors.windows(2).all(|w| w[1] <= w[0]);
    Line {
        id: 2,
        title: "second-order coefficient from the trial state",
        pass: complete && last_rel <= 0.05 && non_increasing && fast,
        detail: format!(
            "ĉ₂ = {:?} at x = {:?}; rel. err at 1e-8 {:.2}% ≤ 5%, errors {:?} non-increasing: {}, {time}",
            c2.iter().map(|c| format!("{c:.4}")).collect::<Vec<_>>(),
            COEFFICIENT_SWEEP,
            100.0 * last_rel,
            errors.iter().map(|e| format!("{e:.3}")).collect::<Vec<_>>(),
            non_increasing
        ),
    }
}

fn energy_gap_exponent(points: &[SweepPoint]) -> Line {
    let rows: Vec<_> = points.iter().map(|p| p.row).collect();
    let (pass, detail) = match exponent_fit(&rows, (SweepColumn::Rho, SweepColumn::EnergyGap)) {
        Ok(fit) => (
            fit.slope >= 2.5,
            format!(
                "slope {:.4} ≥ 2.5 over {} densities (log residual {:.2e})",
                fit.slope, fit.points, fit.residual
            ),
        ),
        Err(e) => (false, format!("fit failed: {e}")),
    };
    Line {
        id: 3,
        title: "exponent of |E_ρ − Ẽ_ρ| in ρ",
        pass,
        detail,
    }
}

fn scattering() -> Line {
    let ells = [10.0, 100.0, 1000.0];
    let (values, elapsed) = timed(|| {
        let v: Result<Vec<f64>, _> = ells
            .iter()
            .map(|&l| scattering_normalisation(1.0, l))
            .collect();
        (v, run_scattering_suite(1.0, &ells))
    });
    let (fast, time) = within(elapsed, Duration::from_secs(1));
    let (pass, detail) = match values {
        (Ok(v), reports) => {
            let max = v.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let min = v.iter().cloned().fold(f64::INFINITY, f64::min);
            let spread = max / min;
            let suite = reports.iter().all(|r| r.pass);
            (
                spread <= 2.0 && min > 0.0 && suite && fast,
                format!(
                    "ratios {:?} at ℓ/a = {ells:?}, spread {spread:.4} ≤ 2, suite {}, {time}",
                    v.iter().map(|r| format!("{r:.4}")).collect::<Vec<_>>(),
                    if suite { "passes" } else { "fails" }
                ),
            )
        }
        (Err(e), _) => (false, format!("evaluation failed: {e}")),
    };
    Line {
        id: 4,
        title: "scattering normalisation of f_ℓ",
        pass,
        detail,
    }
}

fn kernel_estimates() -> Line {
    let (outcome, elapsed) = timed(|| verify_all(&SweepSpec::default()));
    let (fast, time) = within(elapsed, Duration::from_secs(600));
    let failed: Vec<&str> = outcome
        .reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.name.as_str())
        .collect();
    Line {
        id: 5,
        title: "kernel estimate suites on a 3-decade sweep",
        pass: outcome.pass && fast,
        detail: format!(
            "{} reports, failed {:?}, missing {:?}, {time}",
            outcome.reports.len(),
            failed,
            outcome.missing
        ),
    }
}

fn spectral_identities(points: &[SweepPoint]) -> Line {
    let worst = |f: fn(&SweepPoint) -> f64| points.iter().map(f).fold(0.0, f64::max);
    let hyperbolic = worst(|p| p.invariants.hyperbolic);
    let nu_gamma = worst(|p| p.invariants.nu_gamma);
    let zero_mode = worst(|p| p.invariants.sigma_hat_zero);
    let gradient = worst(|p| p.invariants.gradient_identity);
    let pass = points.len() == SWEEP.len()
        && [hyperbolic, nu_gamma, zero_mode, gradient]
            .iter()
            .all(|v| *v <= 1e-10);
    Line {
        id: 6,
        title: "spectral identities on every sweep point",
        pass,
        detail: format!(
            "worst γ̂²−σ̂²−1 {hyperbolic:.1e}, ν̂γ̂−σ̂ {nu_gamma:.1e}, σ̂(0) {zero_mode:.1e}, gradient identity {gradient:.1e} (all ≤ 1e-10)"
        ),
    }
}

fn riemann() -> Line {
    let report = PhysicalParams::from_gas_parameter(1e-10, 1.0, 0.1, 0.15)
        .map_err(|e| e.to_string())
        .and_then(|p| g_sum_vs_integral(&p, 1.3e5).map_err(|e| e.to_string()));
    let (pass, detail) = match report {
        Ok(r) => {
            let ratios: Vec<f64> = r.samples.iter().map(|s| s.ratio).collect();
            let ok = ratios.len() == 3 && ratios.iter().all(|q| (1.6..=2.4).contains(q));
            (
                ok,
                format!(
                    "discrepancy ratios under doubling {:?} within 2 ± 20%",
                    ratios.iter().map(|q| format!("{q:.3}")).collect::<Vec<_>>()
                ),
            )
        }
        Err(e) => (false, format!("comparison failed: {e}")),
    };
    Line {
        id: 7,
        title: "lattice sum versus integral under box doubling",
        pass,
        detail,
    }
}

fn fock() -> Line {
    let config = FockCheckConfig::default();
    let (sweep, elapsed) = timed(|| fock_sweep(&config));
    let (fast, time) = within(elapsed, Duration::from_secs(120));
    let sweep = match sweep {
        Ok(s) => s,
        Err(e) => {
            return Line {
                id: 8,
                title: "operator identities on a toy Fock space",
                pass: false,
                detail: format!("sweep failed: {e}"),
            }
        }
    };
    let top = sweep.reports.iter().find(|r| r.nmax == 10);
    let diagonal = ["jastrow-exchange", "jastrow-pull-through", "jastrow-bound"];
    let worst_diagonal = top.map_or(f64::NAN, |r| {
        r.identities
            .iter()
            .filter(|i| diagonal.contains(&i.name.as_str()))
            .map(|i| i.residual)
            .fold(0.0, f64::max)
    });
    let diagonal_ok = top.is_some_and(|r| {
        diagonal
            .iter()
            .all(|d| r.identities.iter().any(|i| i.name == *d))
    }) && worst_diagonal <= 1e-13;
    let decreasing = [
        "weyl-shift",
        "bogoliubov-action",
        "c-field",
        "annihilation-identity",
    ];
    let monotone_ok = decreasing.iter().all(|d| {
        sweep
            .monotone
            .iter()
            .any(|m| m.name == *d && m.residual_decreasing)
    });
    let coherent_ok = sweep.reports.iter().all(|r| r.coherent.pass);
    let worst_coherent = sweep
        .reports
        .iter()
        .map(|r| (r.coherent.n_expect - r.coherent.expected).abs())
        .fold(0.0, f64::max);
    let sites = config.m_lin.pow(config.dims as u32);
    Line {
        id: 8,
        title: "operator identities on a toy Fock space",
        pass: sites == 4 && diagonal_ok && monotone_ok && coherent_ok && sweep.pass && fast,
        detail: format!(
            "{sites} sites, cutoffs {:?}: diagonal ≤ {worst_diagonal:.1e} (≤ 1e-13) at nmax 10, \
             {decreasing:?} decreasing: {monotone_ok}, coherent |⟨N⟩ − ρ₀|Λ|| ≤ {worst_coherent:.1e} within tail bound: {coherent_ok}, {time}",
            config.nmax
        ),
    }
}

fn main() {
    let start = Instant::now();
    let base =
        PhysicalParams::from_gas_parameter(SWEEP[0], 1.0, 0.1, 0.15).expect("valid parameters");
    let (sweep, sweep_time) = timed(|| density_sweep(&SWEEP, &base, &SweepSettings::default()));
    let (sweep_fast, sweep_budget) = within(sweep_time, Duration::from_secs(300));
    let (points, sweep_errors): (Vec<_>, Vec<_>) = match sweep {
        Ok(rows) => rows.into_iter().partition(Result::is_ok),
        Err(e) => panic!("density sweep rejected its input: {e}"),
    };
    let points: Vec<SweepPoint> = points.into_iter().map(Result::unwrap).collect();
    for e in sweep_errors {
        println!("sweep row failed: {}", e.unwrap_err());
    }

    let lines = [
        lhy_coefficient(),
        second_order_coefficient(&points, &sweep_budget, sweep_fast),
        energy_gap_exponent(&points),
        scattering(),
        kernel_estimates(),
        spectral_identities(&points),
        riemann(),
        fock(),
    ];
    for l in &lines {
        println!(
            "criterion {}: {} — {}: {}",
            l.id,
            if l.pass { "PASS" } else { "FAIL" },
            l.title,
            l.detail
        );
    }
    println!(
        "criterion 9: NOT REPRODUCIBLE — the asymptotic upper bound for all small densities and the moment \
         bounds of the error terms are existence statements; they are represented only by the exponent and \
         property checks above"
    );
    let failed = lines.iter().filter(|l| !l.pass).count();
    println!(
        "acceptance: {} of {} reproducible criteria pass ({:.1} s)",
        lines.len() - failed,
        lines.len(),
        start.elapsed().as_secs_f64()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
