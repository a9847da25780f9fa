//! Domains `Ω` (through their dimension and volume), inf-compact radial
//! symbols `Φ` with exact level-set volumes, the Fermi radius, and the
//! bathtub threshold `τ` with its boundary weight `c₀`.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::specfun::unit_ball_volume;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum DomainFamily {
    Interval { length: f64 },
    Box { side: f64, n: u32 },
    Circle { length: f64 },
    Abstract { volume: f64 },
}

/// An open set of finite measure, described by its dimension and volume.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DomainSpec {
    pub n: u32,
    pub volume: f64,
    pub family: DomainFamily,
}

fn check_positive(what: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{what} must be positive and finite, got {v}")))
    }
}

impl DomainSpec {
    pub fn interval(length: f64) -> Result<Self> {
        check_positive("interval length", length)?;
        Ok(DomainSpec {
            n: 1,
            volume: length,
            family: DomainFamily::Interval { length },
        })
    }

    pub fn cube(side: f64, n: u32) -> Result<Self> {
        check_positive("box side", side)?;
        if n == 0 {
            return Err(Error::Domain("box dimension must be at least 1".into()));
        }
        Ok(DomainSpec {
            n,
            volume: side.powi(n as i32),
            family: DomainFamily::Box { side, n },
        })
    }

    pub fn circle(length: f64) -> Result<Self> {
        check_positive("circle length", length)?;
        Ok(DomainSpec {
            n: 1,
            volume: length,
            family: DomainFamily::Circle { length },
        })
    }

    pub fn abstract_volume(n: u32, volume: f64) -> Result<Self> {
        check_positive("volume", volume)?;
        if n == 0 {
            return Err(Error::Domain("dimension must be at least 1".into()));
        }
        Ok(DomainSpec {
            n,
            volume,
            family: DomainFamily::Abstract { volume },
        })
    }

    /// `|Ω| / (2π)^n`, the uniform bound on every trace density.
    pub fn density_height(&self) -> f64 {
        self.volume / (2.0 * PI).powi(self.n as i32)
    }

    /// `(2π)^n / |Ω|`, the mass budget in the bathtub problem.
    pub fn phase_space_cell(&self) -> f64 {
        1.0 / self.density_height()
    }
}

/// Ball in momentum space carrying unit mass at height `|Ω|/(2π)^n`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FermiBall {
    pub kappa_f: f64,
    pub n: u32,
    pub density_height: f64,
}

impl FermiBall {
    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.n) * self.kappa_f.powi(self.n as i32)
    }

    /// `density_height * |B_{κF}|`, which is 1 up to rounding.
    pub fn mass(&self) -> f64 {
        self.density_height * self.volume()
    }
}

/// `κ_F = 2π / (ω_n |Ω|)^{1/n}`.
pub fn fermi_radius(domain: &DomainSpec) -> FermiBall {
    let n = domain.n;
    let kappa_f = 2.0 * PI / (unit_ball_volume(n) * domain.volume).powf(1.0 / n as f64);
    FermiBall {
        kappa_f,
        n,
        density_height: domain.density_height(),
    }
}

type RadialFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A user-supplied radial symbol `Φ(ξ) = profile(|ξ|)`.
#[derive(Clone)]
pub struct CustomSymbol {
    pub name: String,
    pub profile: RadialFn,
    pub level_volume: RadialFn,
    pub strict_level_volume: RadialFn,
    /// Degree `p` when `Φ(sξ) = s^p Φ(ξ)`.
    pub homogeneity: Option<f64>,
    /// Exponent `g` with `Φ(ξ) = O(|ξ|^g)` at infinity.
    pub growth: f64,
    /// `t ↦ ∫_{Φ<t} Φ dξ`; required unless the profile is non-decreasing.
    pub sublevel_integral: Option<RadialFn>,
    pub non_decreasing: bool,
}

impl fmt::Debug for CustomSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomSymbol")
            .field("name", &self.name)
            .field("homogeneity", &self.homogeneity)
            .field("growth", &self.growth)
            .field("non_decreasing", &self.non_decreasing)
            .finish()
    }
}

#[derive(Debug, Clone)]
pub enum SymbolKind {
    /// `|ξ|^p`
    Power { p: f64 },
    /// `max(|ξ|, floor)`
    Plateau { floor: f64 },
    /// `Φ ≡ value`. Not inf-compact; only meaningful for spectral moments.
    Constant { value: f64 },
    Custom(CustomSymbol),
}

/// A radial symbol on `R^n`.
#[derive(Debug, Clone)]
pub struct SymbolSpec {
    pub n: u32,
    pub kind: SymbolKind,
}

impl SymbolSpec {
    pub fn power(n: u32, p: f64) -> Result<Self> {
        check_positive("power p", p)?;
        Ok(SymbolSpec {
            n,
            kind: SymbolKind::Power { p },
        })
    }

    pub fn plateau(n: u32, floor: f64) -> Result<Self> {
        check_positive("plateau floor", floor)?;
        Ok(SymbolSpec {
            n,
            kind: SymbolKind::Plateau { floor },
        })
    }

    pub fn constant(n: u32, value: f64) -> Result<Self> {
        check_positive("constant value", value)?;
        Ok(SymbolSpec {
            n,
            kind: SymbolKind::Constant { value },
        })
    }

    pub fn custom(n: u32, symbol: CustomSymbol) -> Self {
        SymbolSpec {
            n,
            kind: SymbolKind::Custom(symbol),
        }
    }

    pub fn name(&self) -> String {
        match &self.kind {
            SymbolKind::Power { p } => format!("|xi|^{p}"),
            SymbolKind::Plateau { floor } => format!("max(|xi|,{floor})"),
            SymbolKind::Constant { value } => format!("const({value})"),
            SymbolKind::Custom(c) => c.name.clone(),
        }
    }

    /// `Φ` as a function of `|ξ|`.
    pub fn eval_radius(&self, r: f64) -> f64 {
        let r = r.abs();
        match &self.kind {
            SymbolKind::Power { p } => {
                if *p == 2.0 {
                    r * r
                } else {
                    r.powf(*p)
                }
            }
            SymbolKind::Plateau { floor } => r.max(*floor),
            SymbolKind::Constant { value } => *value,
            SymbolKind::Custom(c) => (c.profile)(r),
        }
    }

    pub fn eval(&self, xi: &[f64]) -> f64 {
        let r = xi.iter().map(|x| x * x).sum::<f64>().sqrt();
        self.eval_radius(r)
    }

    /// `L^n({Φ ≤ t})`.
    pub fn level_volume(&self, t: f64) -> f64 {
        let omega = unit_ball_volume(self.n);
        let n = self.n as f64;
        match &self.kind {
            SymbolKind::Power { p } => {
                if t < 0.0 {
                    0.0
                } else {
                    omega * t.powf(n / p)
                }
            }
            SymbolKind::Plateau { floor } => {
                if t < *floor {
                    0.0
                } else {
                    omega * t.powf(n)
                }
            }
            SymbolKind::Constant { value } => {
                if t < *value {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SymbolKind::Custom(c) => (c.level_volume)(t),
        }
    }

    /// `L^n({Φ < t})`.
    pub fn strict_level_volume(&self, t: f64) -> f64 {
        let omega = unit_ball_volume(self.n);
        let n = self.n as f64;
        match &self.kind {
            SymbolKind::Power { p } => {
                if t <= 0.0 {
                    0.0
                } else {
                    omega * t.powf(n / p)
                }
            }
            SymbolKind::Plateau { floor } => {
                if t <= *floor {
                    0.0
                } else {
                    omega * t.powf(n)
                }
            }
            SymbolKind::Constant { value } => {
                if t <= *value {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            SymbolKind::Custom(c) => (c.strict_level_volume)(t),
        }
    }

    pub fn homogeneity(&self) -> Option<f64> {
        match &self.kind {
            SymbolKind::Power { p } => Some(*p),
            SymbolKind::Custom(c) => c.homogeneity,
            _ => None,
        }
    }

    /// Growth exponent at infinity, used to derive quadrature tail exponents.
    pub fn growth(&self) -> f64 {
        match &self.kind {
            SymbolKind::Power { p } => *p,
            SymbolKind::Plateau { .. } => 1.0,
            SymbolKind::Constant { .. } => 0.0,
            SymbolKind::Custom(c) => c.growth,
        }
    }

    /// Points where the profile is not smooth, useful as quadrature splits.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            SymbolKind::Plateau { floor } => vec![*floor],
            _ => Vec::new(),
        }
    }

    fn non_decreasing(&self) -> bool {
        match &self.kind {
            SymbolKind::Custom(c) => c.non_decreasing,
            _ => true,
        }
    }

    /// `∫_{Φ<t} Φ dξ`.
    pub fn sublevel_integral(&self, t: f64) -> Result<f64> {
        use crate::quadrature::{integrate_1d_with, QuadOptions};

        if let SymbolKind::Custom(c) = &self.kind {
            if let Some(f) = &c.sublevel_integral {
                return Ok(f(t));
            }
        }
        if !self.non_decreasing() {
            return Err(Error::Unsupported(format!(
                "sublevel integral of non-monotone symbol {}",
                self.name()
            )));
        }
        let volume = self.strict_level_volume(t);
        if !volume.is_finite() {
            return Err(Error::InvalidSymbol(format!("{} has an unbounded sublevel set", self.name())));
        }
        let omega = unit_ball_volume(self.n);
        let radius = (volume / omega).powf(1.0 / self.n as f64);
        if radius == 0.0 {
            return Ok(0.0);
        }
        let weight = (self.n - 1) as i32;
        let integrand = |r: f64| self.eval_radius(r) * r.powi(weight);
        let splits = self.kinks();
        let res = integrate_1d_with(
            &integrand,
            0.0,
            radius,
            &QuadOptions::tolerances(1e-14, 1e-13).with_splits(splits),
        );
        let value = res.require("sublevel integral")?;
        Ok(self.n as f64 * omega * value)
    }
}

/// Threshold `τ = sup{t : L^n({Φ<t}) ≤ (2π)^n/|Ω|}` and boundary weight.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Threshold {
    pub tau: f64,
    pub c0: f64,
    /// `L^n({Φ < τ})`
    pub strict_volume: f64,
    /// `L^n({Φ = τ})`, zero when below the atom tolerance.
    pub boundary_volume: f64,
    /// The mass budget `(2π)^n/|Ω|`.
    pub budget: f64,
}

const TAU_TOL: f64 = 1e-12;
const ATOM_REL_TOL: f64 = 1e-8;

/// Solves for `τ` by monotone bisection on the strict level volume.
pub fn tau_threshold(symbol: &SymbolSpec, domain: &DomainSpec) -> Result<Threshold> {
    if symbol.n != domain.n {
        return Err(Error::Domain(format!(
            "symbol dimension {} does not match domain dimension {}",
            symbol.n, domain.n
        )));
    }
    let budget = domain.phase_space_cell();
    let level = |t: f64| -> Result<(f64, f64)> {
        let strict = symbol.strict_level_volume(t);
        let closed = symbol.level_volume(t);
        if !closed.is_finite() || !strict.is_finite() {
            return Err(Error::InvalidSymbol(format!(
                "{} is not inf-compact: level set at {t} has infinite volume",
                symbol.name()
            )));
        }
        if strict > closed * (1.0 + 1e-12) + 1e-300 || strict < 0.0 {
            return Err(Error::InvalidSymbol(format!(
                "{}: strict level volume exceeds level volume at {t}",
                symbol.name()
            )));
        }
        Ok((strict, closed))
    };

    // Bracket: lo satisfies the predicate, hi does not.
    let mut lo = 0.0;
    let (mut lo_strict, mut lo_closed) = level(lo)?;
    if lo_strict > budget {
        return Err(Error::InvalidSymbol(format!("{}: negative values", symbol.name())));
    }
    let mut hi = 1.0;
    let mut last_closed = lo_closed;
    loop {
        let (s, c) = level(hi)?;
        if c + 1e-12 * c.abs() < last_closed {
            return Err(Error::InvalidSymbol(format!("{}: level volume decreases", symbol.name())));
        }
        last_closed = c;
        if s > budget {
            break;
        }
        lo = hi;
        lo_strict = s;
        lo_closed = c;
        hi *= 2.0;
        if hi > 1e300 {
            return Err(Error::InvalidSymbol(format!(
                "{}: level volumes never exceed the budget",
                symbol.name()
            )));
        }
    }
    while hi - lo > TAU_TOL * hi.max(1.0) {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (s, c) = level(mid)?;
        if c + 1e-12 * c.abs() < lo_closed || s + 1e-12 * s.abs() < lo_strict {
            return Err(Error::InvalidSymbol(format!("{}: level volume decreases", symbol.name())));
        }
        if s <= budget {
            lo = mid;
            lo_strict = s;
            lo_closed = c;
        } else {
            hi = mid;
        }
    }

    // An atom at τ is a jump of the level volume that survives refinement.
    let jump = if lo_closed - lo_strict > ATOM_REL_TOL * budget {
        lo_closed - lo_strict
    } else {
        level(hi)?.1 - lo_strict
    };
    let boundary_volume = if jump > ATOM_REL_TOL * budget { jump } else { 0.0 };
    let c0 = if boundary_volume > 0.0 {
        ((budget - lo_strict) / boundary_volume).clamp(0.0, 1.0)
    } else {
        0.0
    };
    Ok(Threshold {
        tau: lo,
        c0,
        strict_volume: lo_strict,
        boundary_volume,
        budget,
    })
}
