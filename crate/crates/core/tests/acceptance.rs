//! Acceptance criteria, one line per criterion. Exits non-zero if any fails.
//!
//! Run alone with `cargo test -p caputo-cd --test acceptance`.

use std::path::Path;
use std::process::Command;
use std::time::Instant;

use caputo_cd::{
    abm_max_rel_error, classical_cd, classical_limit_params, crs_theta, fit_factor, level_at,
    limit_convergence_probe, ml_eval, ml_inverse, sample_trajectory, semigroup_defect,
    surface_sample, verify_eigenproperty, y_composite, EconomySpec, Error, FracOrder, GrowthFactor,
    TimeGrid,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn fo(a: f64) -> FracOrder {
    FracOrder::new(a).unwrap()
}

fn nodes(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| lo + (hi - lo) * i as f64 / (count - 1) as f64)
        .collect()
}

fn c01_cobb_douglas_anchor() -> Outcome {
    let v = classical_cd(1.01, 0.75, 0.25, 100.0, 100.0).map_err(|e| e.to_string())?;
    let err = (v - 101.0).abs();
    let msg = format!("Y = {v}, |Y - 101| = {err:.2e} (tol 1e-9)");
    if err <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c02_ml_degeneration() -> Outcome {
    let mut worst = 0.0f64;
    for x in nodes(0.0, 20.0, 41) {
        let v = ml_eval(FracOrder::ONE, x).map_err(|e| e.to_string())?;
        worst = worst.max(((v - x.exp()) / x.exp()).abs());
    }
    let msg = format!("max rel |E_1(x) - e^x| / e^x = {worst:.2e} over 41 nodes (tol 1e-12)");
    if worst <= 1e-12 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c03_ml_closed_form() -> Outcome {
    let mut worst = 0.0f64;
    for x in nodes(0.0, 5.0, 51) {
        let v = ml_eval(fo(0.5), x).map_err(|e| e.to_string())?;
        let w = (x * x).exp() * libm::erfc(-x);
        worst = worst.max(((v - w) / w).abs());
    }
    let msg =
        format!("max rel |E_0.5(x) - e^(x^2) erfc(-x)| = {worst:.2e} over 51 nodes (tol 1e-9)");
    if worst <= 1e-9 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c04_inversion_roundtrip() -> Outcome {
    let mut checked = 0;
    let mut worst = 0.0f64;
    let mut failures = Vec::new();
    for a in [0.3, 0.5, 0.8, 1.0] {
        let mut overflowed = Vec::new();
        for x in nodes(0.0, 30.0, 61) {
            checked += 1;
            let y = match ml_eval(fo(a), x) {
                Ok(y) => y,
                Err(Error::Overflow(_)) => {
                    overflowed.push(x);
                    continue;
                }
                Err(e) => return Err(format!("alpha={a} x={x}: {e}")),
            };
            let back = ml_inverse(fo(a), y).map_err(|e| e.to_string())?;
            let err = (back - x).abs() / x.max(1.0);
            worst = worst.max(err);
            if err > 1e-8 {
                failures.push(format!("alpha={a} x={x} err={err:.2e}"));
            }
        }
        if !overflowed.is_empty() {
            failures.push(format!(
                "alpha={a}: {} nodes x in [{}, {}] have E_alpha(x) > f64::MAX (ml_eval reports overflow)",
                overflowed.len(),
                overflowed[0],
                overflowed[overflowed.len() - 1]
            ));
        }
    }
    let msg =
        format!("{checked} nodes, max scaled error on representable nodes {worst:.2e} (tol 1e-8)");
    if failures.is_empty() {
        Ok(msg)
    } else {
        Err(format!("{msg}; {}", failures.join("; ")))
    }
}

fn c05_oracle_equivalence() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for a in [0.3, 0.5, 0.8, 1.0] {
        let grid = TimeGrid::uniform(0.0, 1.0, 2000).unwrap();
        let coarse = abm_max_rel_error(1.0, fo(a), 1.0, &grid).map_err(|e| e.to_string())?;
        let fine = abm_max_rel_error(1.0, fo(a), 1.0, &grid.refined().unwrap())
            .map_err(|e| e.to_string())?;
        let ratio = coarse / fine;
        let need = 2f64.powf((1.0 + a).min(2.0)) * 0.7;
        let pass = coarse <= 1e-3 && ratio >= need;
        ok &= pass;
        lines.push(format!(
            "alpha={a}: err={coarse:.2e} (tol 1e-3), halving ratio={ratio:.3} (need >= {need:.3}){}",
            if pass { "" } else { " <- fails" }
        ));
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c06_eigenproperty() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for (a, steps, tol) in [(0.5, 4000, 1e-2), (0.8, 4000, 1e-2), (1.0, 10_000, 1e-4)] {
        let grid = TimeGrid::uniform(0.0, 1.0, steps).unwrap();
        let d = verify_eigenproperty(1.0, fo(a), &grid).map_err(|e| e.to_string())?;
        let pass = if a == 1.0 { d < tol } else { d <= tol };
        ok &= pass;
        lines.push(format!(
            "alpha={a} steps={steps}: defect={d:.2e} (tol {tol:e})"
        ));
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn random_economy(rng: &mut ChaCha8Rng) -> EconomySpec {
    let factor = |rng: &mut ChaCha8Rng| {
        GrowthFactor::from_parts(
            rng.gen_range(0.5..5.0),
            rng.gen_range(0.01..=1.0),
            rng.gen_range(0.3..=1.0),
        )
        .unwrap()
    };
    let (l, k, y) = (factor(rng), factor(rng), factor(rng));
    EconomySpec::new(l, k, y, 0.5).unwrap()
}

fn c07_invariant_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(20_260_101);
    let grid = TimeGrid::uniform(0.0, 5.0, 49).unwrap();
    let mut worst = 0.0f64;
    for _ in 0..5 {
        let base = random_economy(&mut rng);
        let points = surface_sample(&base, &grid).map_err(|e| e.to_string())?;
        for theta in [0.25, 0.5, 0.75] {
            let econ = base.with_theta(theta).unwrap();
            for p in &points {
                let y = y_composite(&econ, p.l, p.k).map_err(|e| e.to_string())?;
                worst = worst.max(((y - p.y) / p.y).abs());
            }
        }
    }
    let msg = format!("5 economies x 3 thetas x 50 nodes: max rel residual {worst:.2e} (tol 1e-8)");
    if worst <= 1e-8 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c08_classical_limit() -> Outcome {
    let econ = EconomySpec::new(
        GrowthFactor::from_parts(1.0, 0.1, 0.5).unwrap(),
        GrowthFactor::from_parts(1.0, 0.3, 0.7).unwrap(),
        GrowthFactor::from_parts(1.0, 0.2, 0.8).unwrap(),
        0.5,
    )
    .unwrap();
    let mut lines = Vec::new();
    let mut ok = true;
    for (l, k) in [(3.0f64, 2.0), (1.5, 10.0), (20.0, 1.2)] {
        // off-trajectory: in the classical limit K(t_L) differs from k
        let t_l = l.ln() / econ.labor.b();
        let k_on = level_at(&econ.capital.with_alpha(FracOrder::ONE), t_l).unwrap();
        if (k_on - k).abs() < 1e-3 * k {
            return Err(format!("pair ({l}, {k}) lies on the trajectory"));
        }
        let errs = limit_convergence_probe(&econ, l, k, &[0.1, 0.01, 0.001, 0.0])
            .map_err(|e| e.to_string())?;
        let pass = errs[0] > errs[1] && errs[1] > errs[2] && errs[3] <= 1e-10;
        ok &= pass;
        lines.push(format!(
            "(L={l}, K={k}): {:.2e} > {:.2e} > {:.2e}, eps=0: {:.1e}",
            errs[0], errs[1], errs[2], errs[3]
        ));
    }
    let msg = lines.join("; ");
    if ok {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c09_crs_identity() -> Outcome {
    let c = crs_theta(0.02, 0.04, 0.03).map_err(|e| e.to_string())?;
    let theta_err = (c.theta - 1.0 / 3.0).abs();
    let unit = |x0: f64, b: f64| GrowthFactor::from_parts(x0, b, 1.0).unwrap();
    let econ = EconomySpec::new(unit(1.5, 0.02), unit(2.0, 0.04), unit(3.0, 0.03), c.theta)
        .map_err(|e| e.to_string())?;
    let p = classical_limit_params(&econ);
    let exp_err = (p.beta_l - 0.5).abs().max((p.beta_k - 0.5).abs());
    let (l, k) = (50.0, 80.0);
    let base = y_composite(&econ, l, k).map_err(|e| e.to_string())?;
    let mut hom = 0.0f64;
    for lambda in [0.5, 2.0, 10.0] {
        let y = y_composite(&econ, lambda * l, lambda * k).map_err(|e| e.to_string())?;
        hom = hom.max(((y - lambda * base) / (lambda * base)).abs());
    }
    let msg = format!(
        "theta*={} (|.-1/3|={theta_err:.1e}), exponents ({}, {}), homogeneity defect {hom:.1e}",
        c.theta, p.beta_l, p.beta_k
    );
    if theta_err <= 1e-12 && exp_err <= 1e-12 && hom <= 1e-10 && c.in_open_interval {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c10_semigroup() -> Outcome {
    let mut worst = 0.0f64;
    for b in [0.1, 0.5, 1.0] {
        for t in [0.5, 1.0, 2.0] {
            for s in [0.5, 1.0, 2.0] {
                let d = semigroup_defect(FracOrder::ONE, b, t, s).map_err(|e| e.to_string())?;
                worst = worst.max(d.abs());
            }
        }
    }
    let frac = semigroup_defect(fo(0.5), 1.0, 1.0, 1.0).map_err(|e| e.to_string())?;
    let msg = format!("alpha=1 max |D| = {worst:.1e} (tol 1e-12); alpha=0.5 D = {frac:.6}");
    if worst <= 1e-12 && frac.abs() > 1e-3 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn c11_calibration() -> Outcome {
    let truth = GrowthFactor::from_parts(1.0, 0.05, 0.85).unwrap();
    let grid = TimeGrid::uniform(0.0, 20.0, 49).unwrap();
    let series = sample_trajectory(&truth, &grid).map_err(|e| e.to_string())?;
    let fit = fit_factor(&series, (0.1, 1.0), (1e-4, 5.0)).map_err(|e| e.to_string())?;
    let a = fit.factor.alpha().value();
    let b = fit.factor.b();
    let msg = format!(
        "alpha_hat={a:.6} (0.85 +- 0.01), b_hat={b:.6} (rel err {:.2e}, tol 2e-2), converged={}",
        (b / 0.05 - 1.0).abs(),
        fit.converged
    );
    if (a - 0.85).abs() <= 0.01 && (b / 0.05 - 1.0).abs() <= 0.02 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn run_cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let out = Command::new(env!("CARGO_BIN_EXE_caputo-cd"))
        .args(args)
        .output()
        .map_err(|e| e.to_string())?;
    if !out.status.success() {
        return Err(format!(
            "{args:?} exited with {:?}: {}",
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        ));
    }
    Ok(out.stdout)
}

fn c12_cli_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = |name: &str| dir.path().join(name).to_string_lossy().into_owned();
    std::fs::write(
        Path::new(&path("econ.json")),
        r#"{
  "labor":   {"x0": 1.0, "b": 0.05, "alpha": 0.85},
  "capital": {"x0": 1.0, "b": 0.05, "alpha": 0.85},
  "output":  {"x0": 1.0, "b": 0.05, "alpha": 0.85},
  "theta": 0.5
}"#,
    )
    .map_err(|e| e.to_string())?;
    let mut csvs = Vec::new();
    let mut fits = Vec::new();
    for run in 0..2 {
        let sim = path(&format!("sim{run}.csv"));
        let fit = path(&format!("fit{run}.json"));
        run_cli(&[
            "simulate",
            "--config",
            &path("econ.json"),
            "--t-end",
            "20",
            "--steps",
            "49",
            "--out",
            &sim,
        ])?;
        run_cli(&["fit", "--input", &sim, "--column", "Y", "--out", &fit])?;
        csvs.push(std::fs::read(&sim).map_err(|e| e.to_string())?);
        fits.push(std::fs::read(&fit).map_err(|e| e.to_string())?);
    }
    let report: serde_json::Value = serde_json::from_slice(&fits[0]).map_err(|e| e.to_string())?;
    let a = report["alpha"].as_f64().ok_or("no alpha")?;
    let b = report["b"].as_f64().ok_or("no b")?;
    let identical = csvs[0] == csvs[1] && fits[0] == fits[1];
    let rows = String::from_utf8_lossy(&csvs[0]).lines().count() - 1;
    let msg = format!(
        "{rows} rows simulated, fit alpha={a:.6} b={b:.6}, repeated runs byte-identical: {identical}"
    );
    if identical && rows == 50 && (a - 0.85).abs() <= 0.01 && (b / 0.05 - 1.0).abs() <= 0.02 {
        Ok(msg)
    } else {
        Err(msg)
    }
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("C01 Cobb-Douglas anchor", c01_cobb_douglas_anchor),
        ("C02 ML degeneration", c02_ml_degeneration),
        ("C03 ML closed-form cross-check", c03_ml_closed_form),
        ("C04 inversion roundtrip", c04_inversion_roundtrip),
        ("C05 ABM oracle equivalence", c05_oracle_equivalence),
        ("C06 eigenproperty", c06_eigenproperty),
        ("C07 invariant collapse", c07_invariant_collapse),
        ("C08 classical limit", c08_classical_limit),
        ("C09 CRS identity", c09_crs_identity),
        ("C10 semigroup violation", c10_semigroup),
        ("C11 calibration roundtrip", c11_calibration),
        ("C12 CLI determinism", c12_cli_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("[PASS] {name} ({secs:.2}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name} ({secs:.2}s): {detail}");
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
