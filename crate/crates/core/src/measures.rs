//! Spectral moments `λ_m(Φ)`, moments of `μ_N`, `ω_Φ(N)`, the counting
//! function and its bound, the bathtub lower bound, `L^p` norms of `G_N`,
//! and tightness diagnostics.

use rayon::prelude::*;
use serde::Serialize;

use crate::bases::{
    box_indices, exponential_density, haar_density, integer_root, sine_density, BasisFamily, BasisIndex,
    BoxOrdering,
};
use crate::domains::{tau_threshold, DomainSpec, SymbolKind, SymbolSpec};
use crate::error::{Error, Result};
use crate::quadrature::{integrate_1d_with, integrate_semi_infinite_with, QuadOptions, TailOptions};
use crate::specfun::unit_ball_volume;
use crate::sum::CompensatedSum;

/// Relative tolerance used for spectral moments and moments of `μ_N`.
pub const MOMENT_REL_TOL: f64 = 1e-6;
const MOMENT_ABS_TOL: f64 = 1e-14;
const NORM_REL_TOL: f64 = 1e-11;
const NORM_ABS_TOL: f64 = 1e-13;
const FINITE_TOL: f64 = 1e-13;

/// `Auto` uses exact closed forms where they exist; `Quadrature` always
/// integrates numerically.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum MomentMethod {
    #[default]
    Auto,
    Quadrature,
}

fn check_dims(basis: &BasisFamily, symbol: &SymbolSpec) -> Result<()> {
    if basis.dim() != symbol.n {
        return Err(Error::Domain(format!(
            "symbol {} lives in dimension {} but basis {} in dimension {}",
            symbol.name(),
            symbol.n,
            basis.name(),
            basis.dim()
        )));
    }
    Ok(())
}

/// Whether `∫ Φ |û_m|²` is infinite for every `m`, judged from the density
/// decay against the symbol growth along an axis.
pub fn moments_diverge(basis: &BasisFamily, symbol: &SymbolSpec) -> bool {
    basis.decay_exponent() - symbol.growth() <= 1.0
}

fn closed_form_moment(symbol: &SymbolSpec, index: &BasisIndex) -> Option<f64> {
    match (&symbol.kind, index) {
        (SymbolKind::Constant { value }, _) => Some(*value),
        (SymbolKind::Power { p }, BasisIndex::Sine(m)) if *p == 2.0 => Some((m * m) as f64),
        (SymbolKind::Power { p }, BasisIndex::Multi(ms)) if *p == 2.0 => {
            Some(ms.iter().map(|m| m * m).sum::<u64>() as f64)
        }
        _ => None,
    }
}

/// `∫_R φ(|k|) |û(k)|² dk` for a 1D index and a radial profile `φ`.
fn weighted_moment_1d<P: Fn(f64) -> f64 + ?Sized>(
    index: &BasisIndex,
    phi: &P,
    decay: f64,
    kinks: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    match *index {
        BasisIndex::Sine(m) => weighted_moment_with(index, &|k| 2.0 * phi(k) * sine_density(m, k), decay, kinks, rel_tol),
        BasisIndex::Haar { level, .. } => {
            weighted_moment_with(index, &|k| 2.0 * phi(k) * haar_density(level, k), decay, kinks, rel_tol)
        }
        BasisIndex::Exponential(n) => weighted_moment_with(
            index,
            &|k| phi(k) * (exponential_density(n, k) + exponential_density(n, -k)),
            decay,
            kinks,
            rel_tol,
        ),
        BasisIndex::Multi(_) => Err(Error::Unsupported("multi-index in a 1D routine".into())),
    }
}

fn weighted_moment_with<F: Fn(f64) -> f64>(
    index: &BasisIndex,
    f: &F,
    decay: f64,
    kinks: &[f64],
    rel_tol: f64,
) -> Result<f64> {
    let period = index.period();
    let mut splits = vec![index.resonance()];
    splits.extend_from_slice(kinks);
    let reach = splits.iter().fold(0.0f64, |a, &b| a.max(b));
    let first = (2.0 * reach + 8.0).max(2.0 * period);
    let opts = TailOptions::tolerances(MOMENT_ABS_TOL, rel_tol)
        .with_first_window(first)
        .with_splits(splits)
        .with_period(period)
        .with_extrapolation();
    let r = integrate_semi_infinite_with(f, 0.0, decay, &opts)?;
    if r.diverged {
        return Ok(f64::INFINITY);
    }
    r.require("spectral moment")
}

fn moment_by_quadrature(basis: &BasisFamily, symbol: &SymbolSpec, index: &BasisIndex) -> Result<f64> {
    let q = basis.decay_exponent() - symbol.growth();
    match index {
        BasisIndex::Multi(ms) => {
            let axis = |m: u64, phi: &dyn Fn(f64) -> f64, decay: f64| {
                weighted_moment_1d(&BasisIndex::Sine(m), phi, decay, &[], MOMENT_REL_TOL)
            };
            match symbol.kind {
                SymbolKind::Power { p } if p == 2.0 => {
                    let mut acc = CompensatedSum::new();
                    for &m in ms {
                        acc.add(axis(m, &|k| k * k, 2.0)?);
                    }
                    Ok(acc.value())
                }
                SymbolKind::Constant { value } => {
                    let mut prod = value;
                    for &m in ms {
                        prod *= axis(m, &|_| 1.0, 4.0)?;
                    }
                    Ok(prod)
                }
                _ => Err(Error::Unsupported(format!(
                    "quadrature of {} against {}",
                    symbol.name(),
                    basis.name()
                ))),
            }
        }
        _ => weighted_moment_1d(index, &|k| symbol.eval_radius(k), q, &symbol.kinks(), MOMENT_REL_TOL),
    }
}

fn moment_of_index(basis: &BasisFamily, symbol: &SymbolSpec, index: &BasisIndex, method: MomentMethod) -> Result<f64> {
    if moments_diverge(basis, symbol) {
        return Ok(f64::INFINITY);
    }
    if method == MomentMethod::Auto {
        if let Some(v) = closed_form_moment(symbol, index) {
            return Ok(v);
        }
    }
    moment_by_quadrature(basis, symbol, index)
}

/// Decoded indices of the first `count` basis functions.
pub fn indices(basis: &BasisFamily, count: u64) -> Result<Vec<BasisIndex>> {
    match basis {
        BasisFamily::DirichletBox { n, ordering } => Ok(box_indices(*n, *ordering, count as usize)
            .into_iter()
            .map(BasisIndex::Multi)
            .collect()),
        _ => (1..=count).map(|m| basis.index(m)).collect(),
    }
}

/// `λ_m(Φ) = ∫ Φ |û_m|²`, `+∞` when the integral diverges.
pub fn spectral_moment(basis: &BasisFamily, symbol: &SymbolSpec, m: u64) -> Result<f64> {
    spectral_moment_with(basis, symbol, m, MomentMethod::Auto)
}

pub fn spectral_moment_with(basis: &BasisFamily, symbol: &SymbolSpec, m: u64, method: MomentMethod) -> Result<f64> {
    check_dims(basis, symbol)?;
    let index = basis.index(m)?;
    moment_of_index(basis, symbol, &index, method)
}

/// `λ_1(Φ), …, λ_{M_max}(Φ)` for one basis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumTable {
    pub basis: BasisFamily,
    pub symbol: String,
    pub method: MomentMethod,
    pub moments: Vec<f64>,
}

impl SpectrumTable {
    pub fn build(basis: &BasisFamily, symbol: &SymbolSpec, m_max: u64, method: MomentMethod) -> Result<Self> {
        check_dims(basis, symbol)?;
        let idx = indices(basis, m_max)?;
        let moments = idx
            .par_iter()
            .map(|i| moment_of_index(basis, symbol, i, method))
            .collect::<Result<Vec<f64>>>()?;
        Ok(SpectrumTable {
            basis: *basis,
            symbol: symbol.name(),
            method,
            moments,
        })
    }

    pub fn any_infinite(&self) -> bool {
        self.moments.iter().any(|v| v.is_infinite())
    }

    /// `Σ_{m ≤ count} λ_m` in ascending order.
    pub fn partial_sum(&self, count: usize) -> f64 {
        let head = &self.moments[..count.min(self.moments.len())];
        if head.iter().any(|v| v.is_infinite()) {
            return f64::INFINITY;
        }
        head.iter().copied().collect::<CompensatedSum>().value()
    }
}

/// Exact `Σ_{m=1}^{N} m²`.
pub fn sum_of_squares(big_n: u64) -> u128 {
    let n = big_n as u128;
    n * (n + 1) * (2 * n + 1) / 6
}

fn moment_sum(basis: &BasisFamily, symbol: &SymbolSpec, big_n: u64, method: MomentMethod) -> Result<f64> {
    let count = basis.term_count(big_n);
    if method == MomentMethod::Auto && matches!(basis, BasisFamily::DirichletSine) {
        if let SymbolKind::Power { p } = symbol.kind {
            if p == 2.0 {
                return Ok(sum_of_squares(count) as f64);
            }
        }
    }
    let table = SpectrumTable::build(basis, symbol, count, method)?;
    Ok(table.partial_sum(count as usize))
}

/// `∫ Φ dμ_N`.
pub fn mu_moment(basis: &BasisFamily, symbol: &SymbolSpec, big_n: u64) -> Result<f64> {
    mu_moment_with(basis, symbol, big_n, MomentMethod::Auto)
}

/// With `Auto` and a homogeneous symbol of degree `p`, uses
/// `∫ Φ dμ_N = N^{-(1+p/n)} Σ λ_m`; otherwise integrates `Φ G_N` directly.
pub fn mu_moment_with(basis: &BasisFamily, symbol: &SymbolSpec, big_n: u64, method: MomentMethod) -> Result<f64> {
    check_dims(basis, symbol)?;
    if big_n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if moments_diverge(basis, symbol) {
        return Ok(f64::INFINITY);
    }
    match (method, symbol.homogeneity()) {
        (MomentMethod::Auto, Some(p)) => {
            let n = basis.dim() as f64;
            let sum = moment_sum(basis, symbol, big_n, MomentMethod::Auto)?;
            Ok(sum / (big_n as f64).powf(1.0 + p / n))
        }
        _ => mu_moment_quadrature(basis, symbol, big_n),
    }
}

fn trace_tail_options(basis: &BasisFamily, big_n: u64, abs_tol: f64, rel_tol: f64, kinks: &[f64]) -> TailOptions {
    let s = basis.scale(big_n);
    let mut splits: Vec<f64> = basis.trace_resonances(big_n).iter().map(|r| r / s).collect();
    splits.extend_from_slice(kinks);
    let reach = kinks.iter().fold(1.0f64, |a, &b| a.max(b));
    let mut opts = TailOptions::tolerances(abs_tol, rel_tol)
        .with_first_window(2.0 * reach + 2.0)
        .with_splits(splits);
    if let Some(p) = basis.trace_period() {
        opts = opts.with_period(p / s);
    }
    opts
}

/// `2 ∫_0^∞ φ(ξ) G_N(ξ)^power dξ` for a 1D family.
fn scaled_trace_integral(
    basis: &BasisFamily,
    big_n: u64,
    phi: &(dyn Fn(f64) -> f64 + Sync),
    growth: f64,
    power: f64,
    kinks: &[f64],
    abs_tol: f64,
    rel_tol: f64,
) -> Result<f64> {
    let one_d = match basis {
        BasisFamily::DirichletBox { .. } => BasisFamily::DirichletSine,
        b => *b,
    };
    let s = one_d.scale(big_n);
    let count = one_d.term_count(big_n);
    let g = |xi: f64| -> f64 {
        let k = s * xi;
        let f = match one_d {
            BasisFamily::DirichletSine => crate::bases::sine_trace(count, k),
            BasisFamily::ExponentialCircle => crate::bases::exponential_trace(big_n, k),
            BasisFamily::Haar => crate::bases::haar_trace(count, k),
            BasisFamily::DirichletBox { .. } => unreachable!(),
        };
        let fp = if power == 1.0 { f } else { f.powf(power) };
        2.0 * phi(xi) * fp
    };
    let q = power * one_d.decay_exponent() - growth;
    let opts = trace_tail_options(&one_d, big_n, abs_tol, rel_tol, kinks);
    let r = integrate_semi_infinite_with(&g, 0.0, q, &opts)?;
    if r.diverged {
        return Ok(f64::INFINITY);
    }
    r.require("scaled trace integral")
}

fn cube_side(basis: &BasisFamily, big_n: u64) -> Result<(u32, u64)> {
    match basis {
        BasisFamily::DirichletBox {
            n,
            ordering: BoxOrdering::IndexCube,
        } => integer_root(big_n, *n).map(|m| (*n, m)).ok_or_else(|| {
            Error::Unsupported(format!("N = {big_n} is not a perfect power for {}", basis.name()))
        }),
        _ => Err(Error::Unsupported(format!("product structure of {}", basis.name()))),
    }
}

fn mu_moment_quadrature(basis: &BasisFamily, symbol: &SymbolSpec, big_n: u64) -> Result<f64> {
    if let BasisFamily::DirichletBox { .. } = basis {
        let (n, m) = cube_side(basis, big_n)?;
        let i0 = scaled_trace_integral(basis, m, &|_| 1.0, 0.0, 1.0, &[], MOMENT_ABS_TOL, MOMENT_REL_TOL)?;
        return match symbol.kind {
            SymbolKind::Power { p } if p == 2.0 => {
                let i2 = scaled_trace_integral(basis, m, &|x| x * x, 2.0, 1.0, &[], MOMENT_ABS_TOL, MOMENT_REL_TOL)?;
                Ok(n as f64 * i2 * i0.powi(n as i32 - 1))
            }
            SymbolKind::Constant { value } => Ok(value * i0.powi(n as i32)),
            _ => Err(Error::Unsupported(format!(
                "quadrature of {} against {}",
                symbol.name(),
                basis.name()
            ))),
        };
    }
    scaled_trace_integral(
        basis,
        big_n,
        &|x| symbol.eval_radius(x),
        symbol.growth(),
        1.0,
        &symbol.kinks(),
        MOMENT_ABS_TOL,
        MOMENT_REL_TOL,
    )
}

/// `ω_Φ(N) = ∫Φ(N^{-1/n}ξ)dν_N / (N ∫Φ dν_N)`.
pub fn omega_phi(basis: &BasisFamily, symbol: &SymbolSpec, big_n: u64) -> Result<f64> {
    omega_phi_with(basis, symbol, big_n, MomentMethod::Auto)
}

pub fn omega_phi_with(basis: &BasisFamily, symbol: &SymbolSpec, big_n: u64, method: MomentMethod) -> Result<f64> {
    check_dims(basis, symbol)?;
    if big_n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if moments_diverge(basis, symbol) {
        return Err(Error::Divergent(format!(
            "moments of {} along {} are infinite",
            symbol.name(),
            basis.name()
        )));
    }
    let n = basis.dim() as f64;
    if let (MomentMethod::Auto, Some(p)) = (method, symbol.homogeneity()) {
        return Ok((big_n as f64).powf(-(1.0 + p / n)));
    }
    if basis.dim() != 1 {
        return Err(Error::Unsupported(format!("ω_Φ by quadrature on {}", basis.name())));
    }
    let s = basis.scale(big_n);
    let idx = indices(basis, basis.term_count(big_n))?;
    let q = basis.decay_exponent() - symbol.growth();
    let kinks = symbol.kinks();
    let scaled_kinks: Vec<f64> = kinks.iter().map(|k| k * s).collect();
    let pairs = idx
        .par_iter()
        .map(|i| -> Result<(f64, f64)> {
            let num = weighted_moment_1d(i, &|k| symbol.eval_radius(k / s), q, &scaled_kinks, MOMENT_REL_TOL)?;
            let den = weighted_moment_1d(i, &|k| symbol.eval_radius(k), q, &kinks, MOMENT_REL_TOL)?;
            Ok((num, den))
        })
        .collect::<Result<Vec<_>>>()?;
    let num: f64 = pairs.iter().map(|p| p.0).collect::<CompensatedSum>().value();
    let den: f64 = pairs.iter().map(|p| p.1).collect::<CompensatedSum>().value();
    if den == 0.0 {
        return Err(Error::Domain("ω_Φ has a zero denominator".into()));
    }
    Ok(num / (big_n as f64 * den))
}

/// `C_{n,p} = (n+p) / (p (n/(n+p))^{n/p})`.
pub fn counting_constant(n: u32, p: f64) -> f64 {
    let n = n as f64;
    (n + p) / (p * (n / (n + p)).powf(n / p))
}

/// Upper bound on the number of `λ_m(Φ) ≤ Λ` and the minimizing `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CountingBound {
    pub bound: f64,
    pub epsilon: f64,
}

const EPS_GRID: usize = 10_000;

/// `(|Ω|/(2π)^n) inf_{0<ε<1} L^n({Φ ≤ Λ/ε}) / (1 − ε)`.
pub fn counting_bound(symbol: &SymbolSpec, domain: &DomainSpec, lambda: f64) -> Result<CountingBound> {
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(Error::Domain(format!("Λ must be finite and non-negative, got {lambda}")));
    }
    let h = domain.density_height();
    if let Some(p) = symbol.homogeneity() {
        let n = symbol.n;
        let bound = counting_constant(n, p) * h * unit_ball_volume(n) * lambda.powf(n as f64 / p);
        return Ok(CountingBound {
            bound,
            epsilon: n as f64 / (n as f64 + p),
        });
    }
    counting_bound_by_search(symbol, domain, lambda)
}

/// Grid search over `ε` with golden-section refinement around the winner.
pub fn counting_bound_by_search(symbol: &SymbolSpec, domain: &DomainSpec, lambda: f64) -> Result<CountingBound> {
    let h = domain.density_height();
    let objective = |e: f64| symbol.level_volume(lambda / e) / (1.0 - e);
    let grid: Vec<f64> = (1..EPS_GRID).map(|i| i as f64 / EPS_GRID as f64).collect();
    let mut best = 0usize;
    let mut best_val = f64::INFINITY;
    for (i, &e) in grid.iter().enumerate() {
        let v = objective(e);
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    if !best_val.is_finite() {
        return Err(Error::InvalidSymbol(format!("{} has unbounded sublevel sets", symbol.name())));
    }
    let mut lo = if best == 0 { 1e-12 } else { grid[best - 1] };
    let mut hi = if best + 1 == grid.len() { 1.0 - 1e-12 } else { grid[best + 1] };
    let golden = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - golden * (hi - lo);
    let mut x2 = lo + golden * (hi - lo);
    let mut f1 = objective(x1);
    let mut f2 = objective(x2);
    for _ in 0..200 {
        if hi - lo < 1e-15 {
            break;
        }
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - golden * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + golden * (hi - lo);
            f2 = objective(x2);
        }
    }
    let (epsilon, value) = [(grid[best], best_val), (x1, f1), (x2, f2)]
        .into_iter()
        .fold((grid[best], best_val), |acc, c| if c.1 < acc.1 { c } else { acc });
    Ok(CountingBound {
        bound: h * value,
        epsilon,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CountResult {
    pub lambda: f64,
    pub count: u64,
    pub bound: f64,
    pub epsilon: f64,
    /// Whether every `λ_m` with `m > M_max` is known to exceed `Λ`; when
    /// false, `count` is only a lower bound.
    pub certified: bool,
}

fn monotone_closed_form(basis: &BasisFamily, symbol: &SymbolSpec) -> bool {
    let square = matches!(symbol.kind, SymbolKind::Power { p } if p == 2.0);
    square
        && matches!(
            basis,
            BasisFamily::DirichletSine
                | BasisFamily::DirichletBox {
                    ordering: BoxOrdering::EigenSorted,
                    ..
                }
        )
}

/// `#{m ≤ M_max : λ_m ≤ Λ}` together with the upper bound.
pub fn counting(basis: &BasisFamily, symbol: &SymbolSpec, lambda: f64, m_max: u64) -> Result<CountResult> {
    let table = SpectrumTable::build(basis, symbol, m_max, MomentMethod::Auto)?;
    counting_from_table(&table, basis, symbol, lambda)
}

pub fn counting_from_table(
    table: &SpectrumTable,
    basis: &BasisFamily,
    symbol: &SymbolSpec,
    lambda: f64,
) -> Result<CountResult> {
    let b = counting_bound(symbol, &basis.domain(), lambda)?;
    let count = table.moments.iter().filter(|&&v| v <= lambda).count() as u64;
    let certified = monotone_closed_form(basis, symbol) && table.moments.last().is_some_and(|&v| v > lambda);
    Ok(CountResult {
        lambda,
        count,
        bound: b.bound,
        epsilon: b.epsilon,
        certified,
    })
}

/// Minimal value of `∫Φ dμ` over densities bounded by `|Ω|/(2π)^n` with
/// unit mass.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathtubResult {
    pub tau: f64,
    pub c0: f64,
    pub bound_value: f64,
    /// `L^n({Φ < τ})`
    pub strict_sublevel_volume: f64,
    /// `L^n({Φ = τ})`
    pub boundary_volume: f64,
    /// `∫_{Φ<τ} Φ dξ`
    pub strict_sublevel_integral: f64,
}

pub fn bathtub_bound(symbol: &SymbolSpec, domain: &DomainSpec) -> Result<BathtubResult> {
    let th = tau_threshold(symbol, domain)?;
    let integral = symbol.sublevel_integral(th.tau)?;
    let h = domain.density_height();
    let bound_value = h * (integral + th.c0 * th.tau * th.boundary_volume);
    Ok(BathtubResult {
        tau: th.tau,
        c0: th.c0,
        bound_value,
        strict_sublevel_volume: th.strict_volume,
        boundary_volume: th.boundary_volume,
        strict_sublevel_integral: integral,
    })
}

/// `n/(n+p) κ_F^p`, the bathtub value for `|ξ|^p`.
pub fn bathtub_power_closed_form(domain: &DomainSpec, p: f64) -> f64 {
    let n = domain.n as f64;
    n / (n + p) * crate::domains::fermi_radius(domain).kappa_f.powf(p)
}

/// `‖G_N‖_p`.
pub fn lp_norm_scaled_trace(basis: &BasisFamily, big_n: u64, p: f64) -> Result<f64> {
    if !(p >= 1.0) || !p.is_finite() {
        return Err(Error::Domain(format!("p must satisfy 1 ≤ p < ∞, got {p}")));
    }
    if big_n == 0 {
        return Err(Error::Domain("N must be at least 1".into()));
    }
    if let BasisFamily::DirichletBox { .. } = basis {
        let (n, m) = cube_side(basis, big_n)?;
        let i = scaled_trace_integral(basis, m, &|_| 1.0, 0.0, p, &[], NORM_ABS_TOL, NORM_REL_TOL)?;
        return Ok(i.powf(n as f64 / p));
    }
    let i = scaled_trace_integral(basis, big_n, &|_| 1.0, 0.0, p, &[], NORM_ABS_TOL, NORM_REL_TOL)?;
    Ok(i.powf(1.0 / p))
}

/// `μ_N([-r, r]) = ∫_{-r}^{r} G_N` for a 1D family.
pub fn scaled_trace_mass(basis: &BasisFamily, big_n: u64, radius: f64) -> Result<f64> {
    if basis.dim() != 1 {
        return Err(Error::Unsupported(format!("ball mass on {}", basis.name())));
    }
    if radius <= 0.0 {
        return Ok(0.0);
    }
    let s = basis.scale(big_n);
    let splits: Vec<f64> = basis.trace_resonances(big_n).iter().map(|r| r / s).collect();
    let g = |xi: f64| 2.0 * basis.scaled_trace_1d(big_n, xi).unwrap_or(f64::NAN);
    let opts = QuadOptions::tolerances(FINITE_TOL, 1e-12).with_splits(splits);
    integrate_1d_with(&g, 0.0, radius, &opts).require("scaled trace mass")
}

/// Radius of the sublevel ball `{Φ ≤ t}` of a radial non-decreasing symbol.
pub fn sublevel_radius(symbol: &SymbolSpec, t: f64) -> f64 {
    let v = symbol.level_volume(t);
    (v / unit_ball_volume(symbol.n)).powf(1.0 / symbol.n as f64)
}

/// `∫_{Φ ≤ t} |û_m|²` for a 1D family.
pub fn sublevel_mass(basis: &BasisFamily, symbol: &SymbolSpec, m: u64, t: f64) -> Result<f64> {
    check_dims(basis, symbol)?;
    if basis.dim() != 1 {
        return Err(Error::Unsupported(format!("sublevel mass on {}", basis.name())));
    }
    let index = basis.index(m)?;
    let r = sublevel_radius(symbol, t);
    if !(r > 0.0) {
        return Ok(0.0);
    }
    let f = |k: f64| {
        basis.density_of(&index, &[k]).unwrap_or(f64::NAN) + basis.density_of(&index, &[-k]).unwrap_or(f64::NAN)
    };
    let splits = vec![index.resonance()];
    let opts = QuadOptions::tolerances(FINITE_TOL, 1e-12).with_splits(splits);
    integrate_1d_with(&f, 0.0, r, &opts).require("sublevel mass")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessCheck {
    pub big_n: u64,
    pub j: f64,
    pub mass: f64,
    pub lower_bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessReport {
    pub basis: String,
    pub symbol: String,
    pub n_values: Vec<u64>,
    pub moments: Vec<f64>,
    /// `max_N ∫Φ dμ_N` over the listed `N`.
    pub sup_moment: f64,
    pub checks: Vec<TightnessCheck>,
    pub verifiable: bool,
    pub note: Option<String>,
}

/// Checks `μ_N({Φ ≤ j}) ≥ 1 − C/j` with `C = max_N ∫Φ dμ_N`.
pub fn tightness_report(basis: &BasisFamily, symbol: &SymbolSpec, n_list: &[u64], j_list: &[f64]) -> Result<TightnessReport> {
    let moments = n_list
        .par_iter()
        .map(|&n| mu_moment(basis, symbol, n))
        .collect::<Result<Vec<f64>>>()?;
    let sup_moment = moments.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut report = TightnessReport {
        basis: basis.name(),
        symbol: symbol.name(),
        n_values: n_list.to_vec(),
        moments,
        sup_moment,
        checks: Vec::new(),
        verifiable: sup_moment.is_finite(),
        note: None,
    };
    if !report.verifiable {
        report.note = Some("tightness criterion not verifiable: infinite moment".into());
        return Ok(report);
    }
    let pairs: Vec<(u64, f64)> = n_list
        .iter()
        .flat_map(|&n| j_list.iter().map(move |&j| (n, j)))
        .collect();
    report.checks = pairs
        .par_iter()
        .map(|&(n, j)| -> Result<TightnessCheck> {
            let mass = scaled_trace_mass(basis, n, sublevel_radius(symbol, j))?;
            let lower_bound = 1.0 - sup_moment / j;
            Ok(TightnessCheck {
                big_n: n,
                j,
                mass,
                lower_bound,
                holds: mass >= lower_bound - 1e-9,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report)
}
