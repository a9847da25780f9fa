//! Acceptance checks. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits non-zero if any fails.

use std::f64::consts::PI;
use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use fermiball::bases::{sample_grid, BasisFamily};
use fermiball::convergence::{
    l2_error, mass_in_ball, polya_balance, schmidt_compare, schmidt_q_star, sine_exterior_bound,
    sup_plateau_deviation, weyl_ratio,
};
use fermiball::domains::{DomainSpec, SymbolSpec};
use fermiball::measures::{
    bathtub_bound, counting, lp_norm_scaled_trace, mu_moment, spectral_moment, spectral_moment_with,
    MomentMethod,
};
use fermiball::specfun::{ball_char_ft, chb_ratio_report, mean_value_kernel};

type Check = Result<String, String>;

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_time(start: Instant, limit: Duration) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t < limit, || format!("took {t:.2?}, limit {limit:?}"))
}

fn phi2() -> SymbolSpec {
    SymbolSpec::power(1, 2.0).unwrap()
}

fn c1_moment_oracle() -> Check {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for m in 1..=50u64 {
        let v = spectral_moment_with(&BasisFamily::DirichletSine, &phi2(), m, MomentMethod::Quadrature)
            .map_err(|e| format!("m={m}: {e}"))?;
        let exact = (m * m) as f64;
        let rel = (v - exact).abs() / exact;
        worst = worst.max(rel);
        ensure(rel <= 1e-6, || format!("m={m}: {v} vs {exact} (rel {rel:.2e})"))?;
    }
    within_time(start, Duration::from_secs(10))?;
    Ok(format!("max rel err {worst:.2e} in {:.2?}", start.elapsed()))
}

fn c2_weyl() -> Check {
    let s = BasisFamily::DirichletSine;
    let mut last = 0.0;
    for n in [100u64, 1000, 10_000] {
        let nf = n as f64;
        let expected = 1.0 / 3.0 + 1.0 / (2.0 * nf) + 1.0 / (6.0 * nf * nf);
        let v = weyl_ratio(&s, 2.0, n).map_err(|e| e.to_string())?;
        ensure((v - expected).abs() <= 1e-4, || format!("N={n}: {v} vs {expected}"))?;
        last = v;
    }
    let dev = (last - 1.0 / 3.0).abs();
    ensure(dev <= 6e-5, || format!("deviation at N=1e4 is {dev:e}"))?;
    Ok(format!("deviation from 1/3 at N=1e4: {dev:.3e}"))
}

fn c3_plateau() -> Check {
    let start = Instant::now();
    let s = BasisFamily::DirichletSine;
    let step = 0.005;
    let dev = sup_plateau_deviation(&s, 500, 0.8, 0.5, step).map_err(|e| e.to_string())?;
    ensure(dev <= 0.02, || format!("plateau deviation {dev}"))?;
    let mut worst_ratio = 0.0f64;
    for n in [1u64, 5, 50, 500] {
        let t = sample_grid(&s, n, -2.0, 2.0, step, true).map_err(|e| e.to_string())?;
        ensure(t.values.iter().all(|v| v.is_finite() && *v >= 0.0 && *v <= 0.5 + 1e-12), || {
            format!("N={n}: values outside [0, 1/2]")
        })?;
        for (k, v) in t.grid.iter().zip(&t.values) {
            if k.abs() >= 1.05 {
                let b = sine_exterior_bound(n, *k);
                worst_ratio = worst_ratio.max(v / b);
                ensure(*v <= b, || format!("N={n}, k={k}: {v} above bound {b}"))?;
            }
        }
        if n == 500 {
            let center = t.values[t.values.len() / 2];
            ensure((center - 0.5).abs() < 1e-3, || format!("F_500(0) = {center}"))?;
        }
    }
    within_time(start, Duration::from_secs(60))?;
    Ok(format!("plateau deviation {dev:.3e}, exterior value/bound at most {worst_ratio:.3}"))
}

fn c4_trace_at_zero() -> Check {
    let s = BasisFamily::DirichletSine;
    let mut out = Vec::new();
    for n in [100u64, 1000] {
        let v = s.trace_1d(n, 0.0).map_err(|e| e.to_string())?;
        let gap = (v - 0.5).abs();
        ensure(gap <= 3.0 / n as f64, || format!("N={n}: F_N(0) = {v}"))?;
        out.push(format!("N={n}: {gap:.2e}"));
    }
    Ok(out.join(", "))
}

fn c5_normalization() -> Check {
    let mut worst = 0.0f64;
    for n in [1u64, 5, 50] {
        let mass = lp_norm_scaled_trace(&BasisFamily::DirichletSine, n, 1.0).map_err(|e| e.to_string())?;
        worst = worst.max((mass - 1.0).abs());
        ensure((mass - 1.0).abs() <= 1e-6, || format!("N={n}: mass {mass}"))?;
    }
    Ok(format!("max |mass - 1| = {worst:.2e}"))
}

fn c6_lp_bounds() -> Check {
    let mut min_gap = f64::INFINITY;
    for n in [1u64, 5, 50] {
        for p in [1.0f64, 2.0, 4.0, 8.0] {
            let v = lp_norm_scaled_trace(&BasisFamily::DirichletSine, n, p).map_err(|e| e.to_string())?;
            let bound = 0.5f64.powf(1.0 - 1.0 / p);
            min_gap = min_gap.min(bound - v);
            ensure(v <= bound + 1e-8, || format!("N={n}, p={p}: {v} > {bound}"))?;
        }
    }
    Ok(format!("smallest bound - norm = {min_gap:.2e}"))
}

fn c7_bathtub() -> Check {
    let domain = DomainSpec::interval(PI).unwrap();
    let b = bathtub_bound(&phi2(), &domain).map_err(|e| e.to_string())?;
    ensure((b.bound_value - 1.0 / 3.0).abs() <= 1e-10, || format!("bound {}", b.bound_value))?;
    for n in 1..=64u64 {
        let mu = mu_moment(&BasisFamily::DirichletSine, &phi2(), n).map_err(|e| e.to_string())?;
        ensure(b.bound_value <= mu, || format!("N={n}: bound {} above moment {mu}", b.bound_value))?;
    }
    Ok(format!("bound {} <= mu_N for N = 1..64", b.bound_value))
}

fn c8_counting() -> Check {
    let c12 = 1.5 * 3f64.sqrt();
    for lambda in [25.0f64, 100.0, 400.0] {
        let r = counting(&BasisFamily::DirichletSine, &phi2(), lambda, 100).map_err(|e| e.to_string())?;
        let expected = lambda.sqrt() as u64;
        ensure(r.certified, || format!("Λ={lambda}: count not certified"))?;
        ensure(r.count == expected, || format!("Λ={lambda}: count {} vs {expected}", r.count))?;
        ensure(r.count as f64 <= r.bound, || format!("Λ={lambda}: bound {} below count", r.bound))?;
        let ratio = r.bound / r.count as f64;
        ensure((ratio - c12).abs() <= 1e-6, || format!("Λ={lambda}: ratio {ratio} vs {c12}"))?;
    }
    Ok(format!("bound/count = {c12:.6} at Λ = 25, 100, 400"))
}

fn c9_mass_in_ball() -> Check {
    let s = BasisFamily::DirichletSine;
    let masses: Vec<f64> = [5u64, 50, 500]
        .iter()
        .map(|&n| mass_in_ball(&s, n).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    ensure(masses.windows(2).all(|w| w[0] < w[1]), || format!("not increasing: {masses:?}"))?;
    ensure(masses[2] >= 0.9, || format!("mass at 500: {}", masses[2]))?;
    let e = l2_error(&s, 500).map_err(|e| e.to_string())?;
    let bound = 2.0 * 0.5 * (1.0 - masses[2]);
    ensure(e.i_n <= bound, || format!("I_500 = {} above {bound}", e.i_n))?;
    Ok(format!("masses {masses:?}, I_500 = {:.3e} <= {bound:.3e}", e.i_n))
}

fn c10_counterexamples() -> Check {
    let haar = BasisFamily::Haar;
    for m in 1..=8u64 {
        let v = spectral_moment(&haar, &phi2(), m).map_err(|e| e.to_string())?;
        ensure(v == f64::INFINITY, || format!("Haar λ_{m} = {v}"))?;
    }
    let mut smallest = f64::INFINITY;
    let mut failures = Vec::new();
    for level in 0..=8u32 {
        let n = 1u64 << level;
        let e = l2_error(&haar, n).map_err(|e| e.to_string())?;
        smallest = smallest.min(e.i_n);
        if !(e.i_n > 0.05) {
            failures.push(format!("N={n}: I_N = {:.6}", e.i_n));
        }
    }
    let expo = sup_plateau_deviation(&BasisFamily::ExponentialCircle, 500, 0.8, 1.0, 0.005)
        .map_err(|e| e.to_string())?;
    ensure(expo <= 0.05, || format!("exponential plateau deviation {expo}"))?;
    ensure(failures.is_empty(), || {
        format!("Haar I_N not above 0.05 ({}); exponential plateau deviation {expo:.3e}", failures.join("; "))
    })?;
    Ok(format!("Haar min I_N {smallest:.4}, exponential plateau deviation {expo:.3e}"))
}

/// `J_0(x) = π^{-1} ∫_0^π cos(x sin t) dt`; the trapezoid rule on the
/// periodic integrand converges geometrically once the point count exceeds `x`.
fn j0_oracle(x: f64) -> f64 {
    let m = 1024;
    let h = PI / m as f64;
    let mut s = 0.5 * (1.0 + (x * PI.sin()).cos());
    for i in 1..m {
        s += (x * (i as f64 * h).sin()).cos();
    }
    s * h / PI
}

fn c11_special_functions() -> Check {
    let mut worst = 0.0f64;
    for i in 1..=2000 {
        let x = 0.05 * i as f64;
        let p2 = mean_value_kernel(2, x).map_err(|e| e.to_string())?;
        let p3 = mean_value_kernel(3, x).map_err(|e| e.to_string())?;
        let e2 = (p2 - j0_oracle(x)).abs();
        let e3 = (p3 - x.sin() / x).abs();
        worst = worst.max(e2).max(e3);
        ensure(e2 <= 1e-12 && e3 <= 1e-12, || format!("x={x}: P2 err {e2:e}, P3 err {e3:e}"))?;
    }
    let h = 1e-3;
    let mut worst_residual = 0.0f64;
    for n in 1..=6u32 {
        for i in 1..=60 {
            let r = 0.5 * i as f64;
            let p = |t: f64| mean_value_kernel(n, t).unwrap();
            let d2 = (p(r + h) - 2.0 * p(r) + p(r - h)) / (h * h);
            let d1 = (p(r + h) - p(r - h)) / (2.0 * h);
            let res = (d2 + (n as f64 - 1.0) / r * d1 + p(r)).abs();
            worst_residual = worst_residual.max(res);
            ensure(res <= 1e-5, || format!("n={n}, r={r}: residual {res:e}"))?;
        }
    }
    for i in 1..=400 {
        let k = 0.05 * i as f64;
        let v = ball_char_ft(1, 1.0, k).map_err(|e| e.to_string())?;
        let expected = (2.0 / PI).sqrt() * k.sin() / k;
        ensure((v - expected).abs() <= 1e-10, || format!("kappa={k}: {v} vs {expected}"))?;
    }
    let mut ratios = Vec::new();
    for n in 1..=3u32 {
        let r = chb_ratio_report(n, 1.0).map_err(|e| e.to_string())?;
        ensure(r.samples > 0 && r.ratio.is_finite(), || format!("n={n}: empty report"))?;
        ratios.push(format!("n={n}: {:.12}", r.ratio));
    }
    Ok(format!(
        "max kernel err {worst:.1e}, max ODE residual {worst_residual:.1e}, ratios [{}]",
        ratios.join(", ")
    ))
}

fn c12_polya() -> Check {
    let mut worst_slack = 0.0f64;
    let mut worst_residual = 0.0f64;
    for m in 1..=20u64 {
        let row = polya_balance(&BasisFamily::DirichletSine, m).map_err(|e| e.to_string())?;
        let residual = row.residual.ok_or("no direct exterior mass")?.abs();
        worst_slack = worst_slack.max(row.slack.abs());
        worst_residual = worst_residual.max(residual);
        ensure(row.slack.abs() <= 1e-10, || format!("m={m}: slack {}", row.slack))?;
        ensure(residual <= 1e-8, || format!("m={m}: balance residual {residual:e}"))?;
    }
    Ok(format!("max |slack| {worst_slack:.1e}, max balance residual {worst_residual:.1e}"))
}

fn c13_kernel() -> Check {
    let gx: Vec<f64> = (0..257).map(|i| PI * i as f64 / 256.0).collect();
    let gy: Vec<f64> = (0..257).map(|i| -PI + 2.0 * PI * i as f64 / 256.0).collect();
    let d: Vec<f64> = [8u64, 32, 128]
        .iter()
        .map(|&n| schmidt_compare(&BasisFamily::DirichletSine, n, &gx, &gy).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    ensure(d[0] > d[1] && d[1] > d[2], || format!("distances not decreasing: {d:?}"))?;
    for x in [0.1, 0.5, 1.0, PI / 2.0, 2.5, 3.0] {
        for y in [0.0, 1e-9, -1e-9] {
            let q = schmidt_q_star(x, y).map_err(|e| e.to_string())?;
            ensure((q - 1.0 / PI).abs() <= 1e-8, || format!("Q*({x}, {y}) = {q}"))?;
        }
    }
    Ok(format!("distances {d:?}"))
}

fn c14_determinism() -> Check {
    let config = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/figure1.toml");
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut outputs = Vec::new();
    for run in ["a", "b"] {
        let prefix = dir.path().join(run);
        let status = Command::new(env!("CARGO_BIN_EXE_fermiball"))
            .arg("run")
            .arg(&config)
            .arg("--output")
            .arg(&prefix)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!("run {run} failed: {}", String::from_utf8_lossy(&status.stderr))
        })?;
        let bytes = std::fs::read(prefix.with_extension("csv")).map_err(|e| e.to_string())?;
        outputs.push(bytes);
    }
    ensure(outputs[0] == outputs[1], || "CSV bytes differ between runs".into())?;
    let header = String::from_utf8_lossy(&outputs[0]).lines().next().unwrap_or("").to_string();
    ensure(header == "k,F_1,F_5,F_50,F_500", || format!("header {header}"))?;
    Ok(format!("{} identical bytes", outputs[0].len()))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 14] = [
        ("1 spectral moments of the sine basis", c1_moment_oracle),
        ("2 Weyl ratio", c2_weyl),
        ("3 trace plateau and exterior decay", c3_plateau),
        ("4 trace at zero", c4_trace_at_zero),
        ("5 normalization", c5_normalization),
        ("6 L^p bounds", c6_lp_bounds),
        ("7 bathtub bound", c7_bathtub),
        ("8 counting bound", c8_counting),
        ("9 mass in the Fermi ball", c9_mass_in_ball),
        ("10 counterexamples", c10_counterexamples),
        ("11 special functions", c11_special_functions),
        ("12 Polya balance", c12_polya),
        ("13 kernel limit", c13_kernel),
        ("14 deterministic CLI output", c14_determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let t = start.elapsed();
        match outcome {
            Ok(detail) => println!("PASS criterion {name} [{t:.2?}]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name} [{t:.2?}]: {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
