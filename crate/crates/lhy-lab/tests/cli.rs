//! End-to-end runs of the `lhy-lab` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn lhy_lab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lhy-lab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn config(dir: &Path) -> String {
    let path = dir.join("config.json");
    fs::write(&path, "{}").unwrap();
    path.display().to_string()
}

#[test]
fn energy_output_is_reproducible_and_echoes_the_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let out = dir.path().join(run);
        let o = lhy_lab(&[
            "energy",
            "--config",
            &cfg,
            "--out",
            out.to_str().unwrap(),
            "--set",
            "energy.x=1e-6",
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        outputs.push(fs::read_to_string(out.join("energy.json")).unwrap());
    }
    assert_eq!(outputs[0], outputs[1]);
    let v: serde_json::Value = serde_json::from_str(&outputs[0]).unwrap();
    assert_eq!(v["config"]["energy"]["x"].as_f64(), Some(1e-6));
    let b = &v["point"]["breakdown"];
    for key in [
        "t1",
        "t2",
        "t3",
        "t4",
        "t5",
        "t6",
        "t7",
        "total",
        "tilde_terms",
        "tilde_total",
        "lhy_ref",
    ] {
        assert!(!b[key].is_null(), "missing {key}");
    }
}

#[test]
fn sweep_writes_one_row_per_gas_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let out = dir.path().join("out");
    let o = lhy_lab(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        out.to_str().unwrap(),
        "--set",
        "sweep.xs=[1e-6,1e-7,1e-8]",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = fs::read_to_string(out.join("sweep.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "x,rho,rho0,E_rho,tilde_E_rho,lhy_ref,c2_hat");
    assert_eq!(lines.len(), 4);
    assert!(!csv.contains('\r'));
    let c2: Vec<f64> = lines[1..]
        .iter()
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    let errors: Vec<f64> = c2.iter().map(|c| (c - 4.8144).abs()).collect();
    assert!(errors.windows(2).all(|w| w[1] <= w[0]), "{c2:?}");
    let fit: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(out.join("sweep_fit.json")).unwrap()).unwrap();
    assert_eq!(fit["c2_error_nonincreasing"], serde_json::Value::Bool(true));
}

#[test]
fn empty_sweep_is_rejected_with_the_key_name() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let o = lhy_lab(&[
        "sweep",
        "--config",
        &cfg,
        "--out",
        dir.path().to_str().unwrap(),
        "--set",
        "sweep.xs=[]",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep.xs"));
}

#[test]
fn unknown_configuration_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{"physics": {"alpha": 1}}"#).unwrap();
    let o = lhy_lab(&[
        "energy",
        "--config",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("alpha"));
}

#[test]
fn kernels_dump_has_every_kernel_column() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    let out = dir.path().join("k");
    let o = lhy_lab(&["kernels", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let pos = fs::read_to_string(out.join("kernels_position.csv")).unwrap();
    assert_eq!(
        pos.lines().next().unwrap(),
        "r,f_ell,omega_ell,s,sigma_tilde,sigma,gamma_minus_1,one_minus_gamma_inv,nu,theta,z"
    );
    let mom = fs::read_to_string(out.join("kernels_momentum.csv")).unwrap();
    assert_eq!(
        mom.lines().next().unwrap(),
        "k,s_hat,sigma_hat,eta_hat,gamma_hat,nu_hat,g_hat"
    );
    assert!(out.join("kernels.json").exists());
}

#[test]
fn fock_and_verify_pass_on_the_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config(dir.path());
    for command in ["fock", "verify"] {
        let out = dir.path().join(command);
        let o = lhy_lab(&[command, "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{command}: {}",
            String::from_utf8_lossy(&o.stdout)
        );
        let report: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(out.join(format!("{command}.json"))).unwrap())
                .unwrap();
        assert_eq!(report["pass"], serde_json::Value::Bool(true));
    }
}
