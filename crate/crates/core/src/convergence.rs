//! Concentration diagnostics for scaled traces: Weyl-sum ratios, the `L²`
//! distance to the Fermi-ball plateau, mass in the ball, Polya balance,
//! autocorrelations, the Schmidt kernel comparison and the Scheffé example.

use std::f64::consts::{PI, SQRT_2};

use rayon::prelude::*;
use serde::Serialize;

use crate::bases::{box_indices, sample_grid, sine_density, sine_trace, BasisFamily, BoxOrdering};
use crate::domains::{fermi_radius, SymbolSpec};
use crate::error::{Error, Result};
use crate::measures::{indices, mu_moment, scaled_trace_mass, spectral_moment, sum_of_squares};
use crate::quadrature::{integrate_1d_with, integrate_semi_infinite_with, QuadOptions, TailOptions};
use crate::specfun::{ball_char_ft, gamma_half, reduced_bessel_j, unit_ball_volume, BesselOrder};
use crate::sum::CompensatedSum;

const INNER_TOL: f64 = 1e-13;
const OUTER_TOL: f64 = 1e-11;

/// `N^{-(1+p/n)} Σ_{m≤N} λ_m(|ξ|^p)`.
pub fn weyl_ratio(basis: &BasisFamily, p: f64, big_n: u64) -> Result<f64> {
    if big_n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if p == 2.0 && matches!(basis, BasisFamily::DirichletSine) {
        let n = big_n as f64;
        return Ok(sum_of_squares(big_n) as f64 / (n * n * n));
    }
    mu_moment(basis, &SymbolSpec::power(basis.dim(), p)?, big_n)
}

/// `n/(n+p) κ_F^p`, the Weyl limit of [`weyl_ratio`].
pub fn weyl_target(basis: &BasisFamily, p: f64) -> f64 {
    let d = basis.domain();
    let n = d.n as f64;
    n / (n + p) * fermi_radius(&d).kappa_f.powf(p)
}

/// `∫_{-r}^{r} f` for an even `f`, split at `splits`.
fn even_integral(f: &dyn Fn(f64) -> f64, r: f64, splits: &[f64], tol: f64) -> Result<f64> {
    if r <= 0.0 {
        return Ok(0.0);
    }
    let opts = QuadOptions::tolerances(tol, tol).with_splits(splits.to_vec());
    let g = |k: f64| 2.0 * f(k);
    integrate_1d_with(&g, 0.0, r, &opts).require("ball integral")
}

/// `∫_{|k| ≤ r} Π_j f_j(k_j) dk` for even factors, by nested quadrature.
fn product_ball_integral(factors: &[&(dyn Fn(f64) -> f64 + Sync)], splits: &[Vec<f64>], r: f64) -> Result<f64> {
    match factors.len() {
        0 => Ok(1.0),
        1 => even_integral(factors[0], r, &splits[0], INNER_TOL),
        _ => {
            let f0 = factors[0];
            let rest = &factors[1..];
            let rest_splits = &splits[1..];
            let outer = |k: f64| -> f64 {
                let t = (r * r - k * k).max(0.0).sqrt();
                f0(k) * product_ball_integral(rest, rest_splits, t).unwrap_or(f64::NAN)
            };
            let value = even_integral(&outer, r, &splits[0], OUTER_TOL)?;
            if value.is_nan() {
                return Err(Error::Quadrature("nested ball integral".into()));
            }
            Ok(value)
        }
    }
}

fn resonance_splits(count: u64, scale: f64, r: f64) -> Vec<f64> {
    (1..=count).map(|m| m as f64 / scale).filter(|&s| s < r).collect()
}

/// `∫_{|k| ≤ κ_F} G_N(k) dk`.
pub fn mass_in_ball(basis: &BasisFamily, big_n: u64) -> Result<f64> {
    let kappa = fermi_radius(&basis.domain()).kappa_f;
    scaled_trace_ball_mass(basis, big_n, kappa)
}

/// `∫_{|k| ≤ r} G_N(k) dk`.
pub fn scaled_trace_ball_mass(basis: &BasisFamily, big_n: u64, r: f64) -> Result<f64> {
    match basis {
        BasisFamily::DirichletBox { n, ordering } => {
            let m = match ordering {
                BoxOrdering::IndexCube => crate::bases::integer_root(big_n, *n),
                BoxOrdering::EigenSorted => None,
            }
            .ok_or_else(|| Error::Unsupported(format!("ball mass of {} at N = {big_n}", basis.name())))?;
            let scale = m as f64;
            let g = move |x: f64| sine_trace(m, scale * x);
            let factors: Vec<&(dyn Fn(f64) -> f64 + Sync)> = (0..*n).map(|_| &g as _).collect();
            let splits: Vec<Vec<f64>> = (0..*n).map(|_| resonance_splits(m, scale, r)).collect();
            product_ball_integral(&factors, &splits, r)
        }
        _ => scaled_trace_mass(basis, big_n, r),
    }
}

/// Distance of `G_N` to the plateau `h χ_{B_{κF}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct L2Error {
    /// `I_N = ∫ |G_N − h χ_B|²` by direct quadrature.
    pub i_n: f64,
    /// `I_N` from `∫G_N² − 2h·mass + h²|B|`.
    pub via_decomposition: f64,
    /// `h(‖G_N‖₁ + h|B|) − 2h·mass`, which is `2h(1 − mass)` at unit mass.
    pub upper_bound: f64,
    pub mass_in_ball: f64,
    /// `‖G_N‖₁`, exactly `term_count / N`.
    pub total_mass: f64,
}

/// `I_N` for a 1D family by quadrature split at `κ_F` and the resonances.
pub fn l2_error(basis: &BasisFamily, big_n: u64) -> Result<L2Error> {
    if basis.dim() != 1 {
        return Err(Error::Unsupported(format!("L² error on {}", basis.name())));
    }
    let domain = basis.domain();
    let h = domain.density_height();
    let kappa = fermi_radius(&domain).kappa_f;
    let s = basis.scale(big_n);
    let g = |x: f64| basis.scaled_trace_1d(big_n, x).unwrap_or(f64::NAN);
    let mut splits: Vec<f64> = basis.trace_resonances(big_n).iter().map(|r| r / s).collect();
    splits.push(kappa);

    let inside = |x: f64| {
        let d = g(x) - h;
        2.0 * d * d
    };
    let opts = QuadOptions::tolerances(INNER_TOL, 1e-12).with_splits(splits.clone());
    let near = integrate_1d_with(&inside, 0.0, kappa, &opts).require("L² error near part")?;

    let square = |x: f64| {
        let v = g(x);
        2.0 * v * v
    };
    let mut tail_opts = TailOptions::tolerances(INNER_TOL, 1e-11)
        .with_first_window(2.0 * kappa.max(1.0))
        .with_splits(splits.clone());
    if let Some(p) = basis.trace_period() {
        tail_opts = tail_opts.with_period(p / s);
    }
    let q = 2.0 * basis.decay_exponent();
    let far = integrate_1d_with(&square, 0.0, kappa, &opts).require("L² error")?;
    let full = integrate_semi_infinite_with(&square, 0.0, q, &tail_opts)?.require("L² norm")?;
    let exterior = full - far;
    let i_n = near + exterior;

    let mass = mass_in_ball(basis, big_n)?;
    let ball = h * 2.0 * kappa;
    let via_decomposition = full - 2.0 * h * mass + h * ball;
    let total_mass = basis.term_count(big_n) as f64 / big_n as f64;
    let upper_bound = h * (total_mass + ball) - 2.0 * h * mass;
    Ok(L2Error {
        i_n,
        via_decomposition,
        upper_bound,
        mass_in_ball: mass,
        total_mass,
    })
}

/// `4N(2N²+3N+1) / (N⁴π²(k²−1)²)`, valid for `|k| > 1`.
pub fn sine_exterior_bound(big_n: u64, k: f64) -> f64 {
    let n = big_n as f64;
    let d = k * k - 1.0;
    4.0 * n * (2.0 * n * n + 3.0 * n + 1.0) / (n.powi(4) * PI * PI * d * d)
}

/// `max |G_N(k) − target|` over grid points with `|k| ≤ radius`.
pub fn sup_plateau_deviation(basis: &BasisFamily, big_n: u64, radius: f64, target: f64, step: f64) -> Result<f64> {
    let t = sample_grid(basis, big_n, -radius, radius, step, true)?;
    Ok(t.values.iter().map(|v| (v - target).abs()).fold(0.0, f64::max))
}

/// `max G_N(k)` over grid points with `from ≤ |k| ≤ to`.
pub fn sup_exterior_value(basis: &BasisFamily, big_n: u64, from: f64, to: f64, step: f64) -> Result<f64> {
    let t = sample_grid(basis, big_n, -to, to, step, true)?;
    Ok(t.grid
        .iter()
        .zip(&t.values)
        .filter(|(k, _)| k.abs() >= from)
        .map(|(_, v)| *v)
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub big_n: u64,
    pub weyl_ratio: f64,
    pub l2_error: f64,
    pub l2_upper_bound: f64,
    pub mass_in_ball: f64,
    pub sup_plateau_deviation: f64,
    pub sup_exterior_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub basis: String,
    pub kappa_f: f64,
    pub density_height: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// One row per `N`: plateau deviation on `|k| ≤ 0.8κ_F` and exterior values
/// on `1.05κ_F ≤ |k| ≤ 2κ_F`, both on a grid of step `0.005κ_F`.
pub fn convergence_report(basis: &BasisFamily, n_list: &[u64]) -> Result<ConvergenceReport> {
    let domain = basis.domain();
    let h = domain.density_height();
    let kappa = fermi_radius(&domain).kappa_f;
    let step = 0.005 * kappa;
    let rows = n_list
        .par_iter()
        .map(|&n| -> Result<ConvergenceRow> {
            let l2 = l2_error(basis, n)?;
            Ok(ConvergenceRow {
                big_n: n,
                weyl_ratio: weyl_ratio(basis, 2.0, n)?,
                l2_error: l2.i_n,
                l2_upper_bound: l2.upper_bound,
                mass_in_ball: l2.mass_in_ball,
                sup_plateau_deviation: sup_plateau_deviation(basis, n, 0.8 * kappa, h, step)?,
                sup_exterior_value: sup_exterior_value(basis, n, 1.05 * kappa, 2.0 * kappa, step)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceReport {
        basis: basis.name(),
        kappa_f: kappa,
        density_height: h,
        rows,
    })
}

/// Mass balance across the sphere `|k| = √λ_m`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolyaRow {
    pub m: u64,
    pub lambda: f64,
    /// `∫_B F_m`
    pub inside: f64,
    /// `m − ∫_B F_m`
    pub lhs: f64,
    /// `h|B| − ∫_B F_m`
    pub rhs: f64,
    /// `h|B| − m`
    pub slack: f64,
    /// `Σ_{j≤m} ∫_{R^n∖B} |û_j|²` computed directly (1D families).
    pub lhs_direct: Option<f64>,
    /// `lhs_direct + slack − rhs`
    pub residual: Option<f64>,
}

pub fn polya_balance(basis: &BasisFamily, m: u64) -> Result<PolyaRow> {
    let n = basis.dim();
    let square = SymbolSpec::power(n, 2.0)?;
    let lambda = spectral_moment(basis, &square, m)?;
    if !lambda.is_finite() {
        return Err(Error::Divergent(format!("λ_{m}(|ξ|²) is infinite for {}", basis.name())));
    }
    let r = lambda.sqrt();
    let h = basis.domain().density_height();
    let ball = h * unit_ball_volume(n) * r.powi(n as i32);
    let idx = indices(basis, m)?;

    let (inside, lhs_direct) = match basis {
        BasisFamily::DirichletBox { .. } => {
            let terms = idx
                .par_iter()
                .map(|i| -> Result<f64> {
                    let crate::bases::BasisIndex::Multi(ms) = i else {
                        unreachable!()
                    };
                    let fs: Vec<Box<dyn Fn(f64) -> f64 + Sync>> = ms
                        .iter()
                        .map(|&mj| Box::new(move |k: f64| sine_density(mj, k)) as Box<dyn Fn(f64) -> f64 + Sync>)
                        .collect();
                    let refs: Vec<&(dyn Fn(f64) -> f64 + Sync)> = fs.iter().map(|b| b.as_ref()).collect();
                    let splits: Vec<Vec<f64>> = ms.iter().map(|&mj| vec![mj as f64]).collect();
                    product_ball_integral(&refs, &splits, r)
                })
                .collect::<Result<Vec<f64>>>()?;
            (terms.iter().copied().collect::<CompensatedSum>().value(), None)
        }
        _ => {
            let pieces = idx
                .par_iter()
                .map(|i| -> Result<(f64, f64)> {
                    let d = |k: f64| basis.density_of(i, &[k]).unwrap_or(f64::NAN);
                    let pair = |k: f64| d(k) + d(-k);
                    let res = i.resonance();
                    let opts = QuadOptions::tolerances(INNER_TOL, INNER_TOL).with_splits(vec![res]);
                    let inner = integrate_1d_with(&pair, 0.0, r, &opts).require("Polya interior")?;
                    let shifted = |t: f64| pair(r + t);
                    let tail_opts = TailOptions::tolerances(INNER_TOL, 1e-12)
                        .with_first_window((2.0 * res + 8.0).max(2.0 * i.period()))
                        .with_splits(vec![res - r])
                        .with_period(i.period());
                    let outer = integrate_semi_infinite_with(&shifted, 0.0, basis.decay_exponent(), &tail_opts)?
                        .require("Polya exterior")?;
                    Ok((inner, outer))
                })
                .collect::<Result<Vec<_>>>()?;
            let inside = pieces.iter().map(|p| p.0).collect::<CompensatedSum>().value();
            let outside = pieces.iter().map(|p| p.1).collect::<CompensatedSum>().value();
            (inside, Some(outside))
        }
    };
    let lhs = m as f64 - inside;
    let rhs = ball - inside;
    let slack = ball - m as f64;
    Ok(PolyaRow {
        m,
        lambda,
        inside,
        lhs,
        rhs,
        slack,
        lhs_direct,
        residual: lhs_direct.map(|l| l + slack - rhs),
    })
}

/// `√(2/π) sin(mx)` on `[0, π]`, zero outside.
pub fn sine_mode(m: u64, x: f64) -> f64 {
    if (0.0..=PI).contains(&x) {
        (2.0 / PI).sqrt() * (m as f64 * x).sin()
    } else {
        0.0
    }
}

fn require_sine(basis: &BasisFamily, what: &str) -> Result<()> {
    match basis {
        BasisFamily::DirichletSine => Ok(()),
        _ => Err(Error::Unsupported(format!("{what} for {}", basis.name()))),
    }
}

/// `U_m(x) = (2π)^{-1/2} ∫ u_m(x+y) u_m(y) dy` for the Dirichlet sine family.
pub fn autocorrelation(basis: &BasisFamily, m: u64, x: f64) -> Result<f64> {
    require_sine(basis, "autocorrelation")?;
    Ok(sine_autocorrelation(m, x))
}

fn sine_autocorrelation(m: u64, x: f64) -> f64 {
    let lo = 0.0f64.max(-x);
    let hi = PI.min(PI - x);
    if hi <= lo {
        return 0.0;
    }
    let mf = m as f64;
    let f = |y: f64| 2.0 / PI * (mf * (x + y)).sin() * (mf * y).sin();
    let r = integrate_1d_with(&f, lo, hi, &QuadOptions::tolerances(1e-14, 1e-13));
    r.value / (2.0 * PI).sqrt()
}

/// `(2π)^{-1/2} ∫ U_m(x) e^{-ikx} dx`, which equals `|û_m(k)|²`.
pub fn autocorrelation_ft(basis: &BasisFamily, m: u64, k: f64) -> Result<f64> {
    require_sine(basis, "autocorrelation transform")?;
    let f = |x: f64| 2.0 * sine_autocorrelation(m, x) * (k * x).cos();
    let period = if k != 0.0 { PI / k.abs() } else { PI };
    let pieces = ((PI / period).ceil() as usize).max(1);
    let splits: Vec<f64> = (1..pieces).map(|i| PI * i as f64 / pieces as f64).collect();
    let opts = QuadOptions::tolerances(1e-11, 1e-10).with_splits(splits);
    let v = integrate_1d_with(&f, 0.0, PI, &opts).require("autocorrelation transform")?;
    Ok(v / (2.0 * PI).sqrt())
}

/// `Q_N(x, y) = N^{-1} Σ_{m≤N} u_m(x + y/(2N)) u_m(x − y/(2N))` (sine family).
pub fn schmidt_q_n(big_n: u64, x: f64, y: f64) -> f64 {
    let s = y / (2.0 * big_n as f64);
    let (a, b) = (x + s, x - s);
    if !(0.0..=PI).contains(&a) || !(0.0..=PI).contains(&b) {
        return 0.0;
    }
    let mut acc = CompensatedSum::new();
    for m in 1..=big_n {
        let mf = m as f64;
        acc.add((mf * a).sin() * (mf * b).sin());
    }
    2.0 / PI * acc.value() / big_n as f64
}

/// `Q⋆(x, y) = χ_Ω(x) Γ(1+n/2) J_{n/2}(κ_F|y|) / (|Ω| (κ_F|y|/2)^{n/2})`
/// on `Ω = [0, π]`, that is `χ_{[0,π]}(x) sin|y| / (π|y|)`.
pub fn schmidt_q_star(x: f64, y: f64) -> Result<f64> {
    if !(0.0..=PI).contains(&x) {
        return Ok(0.0);
    }
    let n = 1u32;
    let kappa = 1.0;
    let volume = PI;
    let j = reduced_bessel_j(BesselOrder::from_twice(n), kappa * y.abs())?;
    Ok(gamma_half(n + 2) * j / volume)
}

/// Discrete `L²` distance between `Q_N` and `Q⋆` on a tensor grid.
pub fn schmidt_compare(basis: &BasisFamily, big_n: u64, grid_x: &[f64], grid_y: &[f64]) -> Result<f64> {
    if !matches!(basis, BasisFamily::DirichletSine) {
        return Err(Error::Unsupported(format!("kernel comparison for {}", basis.name())));
    }
    if grid_x.len() < 2 || grid_y.len() < 2 {
        return Err(Error::Domain("kernel grids need at least two points".into()));
    }
    let dx = (grid_x[grid_x.len() - 1] - grid_x[0]) / (grid_x.len() - 1) as f64;
    let dy = (grid_y[grid_y.len() - 1] - grid_y[0]) / (grid_y.len() - 1) as f64;
    let rows = grid_x
        .par_iter()
        .map(|&x| -> Result<f64> {
            let mut acc = CompensatedSum::new();
            for &y in grid_y {
                let d = schmidt_q_n(big_n, x, y) - schmidt_q_star(x, y)?;
                acc.add(d * d);
            }
            Ok(acc.value())
        })
        .collect::<Result<Vec<f64>>>()?;
    let total = rows.into_iter().collect::<CompensatedSum>().value();
    Ok((total * dx * dy).sqrt())
}

/// Prefactor relating `Q⋆(x, ·)` to the unitary transform of `χ_{B_{κF}}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KernelPrefactor {
    pub n: u32,
    /// `(2π)^{-n}` as written in front of the kernel limit.
    pub stated: f64,
    /// `Q⋆(x, y) / χ̂_{B_{κF}}(y)` measured at several `y`.
    pub measured: f64,
    /// `(2π)^{-n/2}`
    pub half_power: f64,
    pub max_spread: f64,
}

pub fn kernel_prefactor() -> Result<KernelPrefactor> {
    let ys = [0.0, 0.3, 0.9, 1.7, 2.6];
    let mut ratios = Vec::with_capacity(ys.len());
    for &y in &ys {
        ratios.push(schmidt_q_star(1.0, y)? / ball_char_ft(1, 1.0, y)?);
    }
    let measured = ratios[0];
    let max_spread = ratios.iter().map(|r| (r - measured).abs()).fold(0.0, f64::max);
    Ok(KernelPrefactor {
        n: 1,
        stated: 1.0 / (2.0 * PI),
        measured,
        half_power: (2.0 * PI).powf(-0.5),
        max_spread,
    })
}

/// `f_n(πn x/√2)` with `f_n(x) = 1/(1 + x⁴/n⁴)`.
pub fn scheffe_demo(n: u64, x: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("index must be at least 1".into()));
    }
    let nf = n as f64;
    let t = PI * nf * x / SQRT_2 / nf;
    Ok(1.0 / (1.0 + t.powi(4)))
}

/// `1/(1 + π⁴x⁴/4)`.
pub fn scheffe_limit(x: f64) -> f64 {
    1.0 / (1.0 + PI.powi(4) * x.powi(4) / 4.0)
}

/// `∫ x² f_n(x) dx = n³ π/√2`, by quadrature.
pub fn scheffe_second_moment(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::Domain("index must be at least 1".into()));
    }
    let nf = n as f64;
    let f = |x: f64| {
        let u = x / nf;
        2.0 * x * x / (1.0 + u * u * u * u)
    };
    let opts = TailOptions::tolerances(1e-12, 1e-9).with_first_window(4.0 * nf);
    integrate_semi_infinite_with(&f, 0.0, 2.0, &opts)?.require("second moment")
}

/// Eigenvalue-sorted box index list, exposed for reports.
pub fn sorted_box_eigenvalues(n: u32, count: usize) -> Vec<u64> {
    box_indices(n, BoxOrdering::EigenSorted, count)
        .iter()
        .map(|v| v.iter().map(|m| m * m).sum())
        .collect()
}
