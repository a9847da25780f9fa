//! Orthonormal basis families, their momentum densities `|û_m(k)|²`, and
//! partial-sum trace densities `F_N` and `G_N(ξ) = F_N(N^{1/n} ξ)`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;

use crate::domains::DomainSpec;
use crate::error::{Error, Result};
use crate::specfun::sinc;
use crate::sum::CompensatedSum;

pub const MAX_GRID_POINTS: f64 = 1e8;

/// Ordering of multi-indices for the Dirichlet box.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum BoxOrdering {
    /// Shells `max_j m_j = s`, lexicographic inside a shell. The first `M^n`
    /// indices form the cube `{1..M}^n`.
    IndexCube,
    /// Ascending `Σ m_j²`, lexicographic among ties.
    EigenSorted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum BasisFamily {
    /// `√(2/π) sin(mx)` on `[0, π]`.
    DirichletSine,
    /// Products of sines on `[0, π]^n`.
    DirichletBox { n: u32, ordering: BoxOrdering },
    /// `e^{inx}/√(2π)` on `[0, 2π]`, `n ∈ ℤ`.
    ExponentialCircle,
    /// Haar system on `[0, 1]`, level-major.
    Haar,
}

/// Decoded basis index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum BasisIndex {
    Sine(u64),
    Multi(Vec<u64>),
    Exponential(i64),
    /// `level = 0` is the constant function.
    Haar { level: u32, shift: u64 },
}

impl BasisIndex {
    /// Period in `k` of the oscillating numerator of the density.
    pub fn period(&self) -> f64 {
        match self {
            BasisIndex::Sine(_) | BasisIndex::Multi(_) => 2.0,
            BasisIndex::Exponential(_) => 1.0,
            BasisIndex::Haar { level: 0, .. } => 2.0 * PI,
            BasisIndex::Haar { level, .. } => PI * (*level as f64 + 1.0).exp2(),
        }
    }

    /// Location `|k|` of the density peak along the first axis.
    pub fn resonance(&self) -> f64 {
        match self {
            BasisIndex::Sine(m) => *m as f64,
            BasisIndex::Multi(ms) => ms[0] as f64,
            BasisIndex::Exponential(n) => n.unsigned_abs() as f64,
            BasisIndex::Haar { .. } => 0.0,
        }
    }
}

/// 1D sine density, written without cancellation near `|k| = m`.
pub fn sine_density(m: u64, k: f64) -> f64 {
    let m = m as f64;
    let a = k.abs();
    let s = sinc(0.5 * PI * (a - m));
    let r = m / (a + m);
    r * r * s * s
}

/// `sinc²(π(k − n))`.
pub fn exponential_density(n: i64, k: f64) -> f64 {
    let s = sinc(PI * (k - n as f64));
    s * s
}

/// Haar density; it does not depend on the shift inside a level.
pub fn haar_density(level: u32, k: f64) -> f64 {
    if level == 0 {
        let s = sinc(0.5 * k);
        return s * s / (2.0 * PI);
    }
    let a = (-(level as i32 + 1) as f64).exp2();
    let x = a * k;
    let s = sinc(x);
    let t = x.sin();
    (-(level as f64)).exp2() / PI * s * s * t * t
}

/// Sum of the 1D sine densities for `m = 1..=count`, ascending.
pub fn sine_trace(count: u64, k: f64) -> f64 {
    let a = k.abs();
    let half = 0.5 * PI * a;
    let (sh, ch) = half.sin_cos();
    let w_even = sh * sh;
    let w_odd = ch * ch;
    let c = 4.0 / (PI * PI);
    let mut acc = CompensatedSum::new();
    for m in 1..=count {
        let mf = m as f64;
        let d = a - mf;
        if d.abs() < 0.5 {
            acc.add(sine_density(m, a));
        } else {
            let w = if m % 2 == 0 { w_even } else { w_odd };
            let s = a + mf;
            acc.add(c * w * mf * mf / (d * d * s * s));
        }
    }
    acc.value()
}

/// Sum of the exponential densities for `|n| ≤ big_n`, ascending in `n`.
pub fn exponential_trace(big_n: u64, k: f64) -> f64 {
    let s = (PI * k).sin();
    let w = s * s / (PI * PI);
    let big_n = big_n as i64;
    let mut acc = CompensatedSum::new();
    for n in -big_n..=big_n {
        let d = k - n as f64;
        if d.abs() < 0.5 {
            acc.add(exponential_density(n, k));
        } else {
            acc.add(w / (d * d));
        }
    }
    acc.value()
}

/// Sum of the first `count` Haar densities in level-major order.
pub fn haar_trace(count: u64, k: f64) -> f64 {
    if count == 0 {
        return 0.0;
    }
    let mut acc = CompensatedSum::new();
    acc.add(haar_density(0, k));
    let mut level = 1u32;
    let mut done = 1u64;
    while done < count {
        let size = 1u64 << (level - 1);
        let take = size.min(count - done);
        acc.add(take as f64 * haar_density(level, k));
        done += take;
        level += 1;
    }
    acc.value()
}

/// Exact integer `N^{1/n}` when `N` is a perfect power.
pub fn integer_root(big_n: u64, n: u32) -> Option<u64> {
    if n == 1 {
        return Some(big_n);
    }
    let guess = (big_n as f64).powf(1.0 / n as f64).round() as u64;
    (guess.saturating_sub(1)..=guess + 1).find(|&m| m.checked_pow(n) == Some(big_n))
}

fn cube_shell(s: u64, n: u32, out: &mut Vec<Vec<u64>>, limit: usize) {
    let mut idx = vec![1u64; n as usize];
    loop {
        if idx.iter().any(|&v| v == s) {
            out.push(idx.clone());
            if out.len() >= limit {
                return;
            }
        }
        let mut j = n as usize;
        loop {
            if j == 0 {
                return;
            }
            j -= 1;
            if idx[j] < s {
                idx[j] += 1;
                for v in idx.iter_mut().skip(j + 1) {
                    *v = 1;
                }
                break;
            }
        }
    }
}

fn lattice_with_norm_below(n: u32, bound: u64, out: &mut Vec<(u64, Vec<u64>)>) {
    fn rec(n: usize, bound: u64, prefix: &mut Vec<u64>, partial: u64, out: &mut Vec<(u64, Vec<u64>)>) {
        if prefix.len() == n {
            out.push((partial, prefix.clone()));
            return;
        }
        let mut m = 1u64;
        while partial + m * m + (n - prefix.len() - 1) as u64 <= bound {
            prefix.push(m);
            rec(n, bound, prefix, partial + m * m, out);
            prefix.pop();
            m += 1;
        }
    }
    rec(n as usize, bound, &mut Vec::new(), 0, out);
}

/// The first `count` multi-indices of a box basis.
pub fn box_indices(n: u32, ordering: BoxOrdering, count: usize) -> Vec<Vec<u64>> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    match ordering {
        BoxOrdering::IndexCube => {
            let mut s = 1;
            while out.len() < count {
                cube_shell(s, n, &mut out, count);
                s += 1;
            }
        }
        BoxOrdering::EigenSorted => {
            let mut bound = n as u64;
            loop {
                let mut pts = Vec::new();
                lattice_with_norm_below(n, bound, &mut pts);
                if pts.len() >= count {
                    pts.sort();
                    out.extend(pts.into_iter().take(count).map(|(_, v)| v));
                    break;
                }
                bound = bound * 2 + 1;
            }
        }
    }
    out
}

impl BasisFamily {
    pub fn dirichlet_box(n: u32, ordering: BoxOrdering) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("box dimension must be at least 1".into()));
        }
        Ok(BasisFamily::DirichletBox { n, ordering })
    }

    pub fn name(&self) -> String {
        match self {
            BasisFamily::DirichletSine => "sine".into(),
            BasisFamily::DirichletBox { n, ordering } => match ordering {
                BoxOrdering::IndexCube => format!("box{n}"),
                BoxOrdering::EigenSorted => format!("box{n}-sorted"),
            },
            BasisFamily::ExponentialCircle => "exponential".into(),
            BasisFamily::Haar => "haar".into(),
        }
    }

    pub fn dim(&self) -> u32 {
        match self {
            BasisFamily::DirichletBox { n, .. } => *n,
            _ => 1,
        }
    }

    pub fn domain(&self) -> DomainSpec {
        let d = match self {
            BasisFamily::DirichletSine => DomainSpec::interval(PI),
            BasisFamily::DirichletBox { n, .. } => DomainSpec::cube(PI, *n),
            BasisFamily::ExponentialCircle => DomainSpec::circle(2.0 * PI),
            BasisFamily::Haar => DomainSpec::interval(1.0),
        };
        d.expect("built-in domains are valid")
    }

    /// Exponent `d` with `|û_m(k)|² = O(|k|^{-d})` along each axis.
    pub fn decay_exponent(&self) -> f64 {
        match self {
            BasisFamily::DirichletSine | BasisFamily::DirichletBox { .. } => 4.0,
            BasisFamily::ExponentialCircle | BasisFamily::Haar => 2.0,
        }
    }

    /// Period in `k` shared by every term of `F_N`, when there is one.
    pub fn trace_period(&self) -> Option<f64> {
        match self {
            BasisFamily::DirichletSine | BasisFamily::DirichletBox { .. } => Some(2.0),
            BasisFamily::ExponentialCircle => Some(1.0),
            BasisFamily::Haar => None,
        }
    }

    /// Resonances of all terms of `F_N` on `k ≥ 0` (1D families).
    pub fn trace_resonances(&self, big_n: u64) -> Vec<f64> {
        match self {
            BasisFamily::DirichletSine | BasisFamily::ExponentialCircle => (1..=big_n).map(|m| m as f64).collect(),
            _ => Vec::new(),
        }
    }

    /// Number of basis functions in the `N`-th partial trace. The exponential
    /// family sums over `|n| ≤ N`.
    pub fn term_count(&self, big_n: u64) -> u64 {
        match self {
            BasisFamily::ExponentialCircle => 2 * big_n + 1,
            _ => big_n,
        }
    }

    /// Momentum scaling `N^{1/n}` for `G_N`.
    pub fn scale(&self, big_n: u64) -> f64 {
        let n = self.dim();
        match integer_root(big_n, n) {
            Some(m) => m as f64,
            None => (big_n as f64).powf(1.0 / n as f64),
        }
    }

    /// Decodes the linear index `m ≥ 1`.
    pub fn index(&self, m: u64) -> Result<BasisIndex> {
        if m == 0 {
            return Err(Error::UnknownIndex {
                basis: self.name(),
                index: 0,
            });
        }
        Ok(match self {
            BasisFamily::DirichletSine => BasisIndex::Sine(m),
            BasisFamily::DirichletBox { n, ordering } => {
                let all = box_indices(*n, *ordering, m as usize);
                BasisIndex::Multi(all.into_iter().last().expect("non-empty"))
            }
            BasisFamily::ExponentialCircle => {
                let half = (m / 2) as i64;
                BasisIndex::Exponential(if m % 2 == 0 { half } else { -half })
            }
            BasisFamily::Haar => {
                if m == 1 {
                    BasisIndex::Haar { level: 0, shift: 0 }
                } else {
                    let level = 64 - (m - 1).leading_zeros();
                    BasisIndex::Haar {
                        level,
                        shift: m - 1 - (1u64 << (level - 1)),
                    }
                }
            }
        })
    }

    /// `|û(k)|²` for a decoded index.
    pub fn density_of(&self, index: &BasisIndex, k: &[f64]) -> Result<f64> {
        let dim = self.dim() as usize;
        if k.len() != dim {
            return Err(Error::Domain(format!(
                "{} expects momenta of dimension {dim}, got {}",
                self.name(),
                k.len()
            )));
        }
        Ok(match (self, index) {
            (BasisFamily::DirichletSine, BasisIndex::Sine(m)) => sine_density(*m, k[0]),
            (BasisFamily::DirichletBox { .. }, BasisIndex::Multi(ms)) if ms.len() == dim => {
                ms.iter().zip(k).map(|(&m, &kj)| sine_density(m, kj)).product()
            }
            (BasisFamily::ExponentialCircle, BasisIndex::Exponential(n)) => exponential_density(*n, k[0]),
            (BasisFamily::Haar, BasisIndex::Haar { level, .. }) => haar_density(*level, k[0]),
            _ => {
                return Err(Error::Domain(format!(
                    "index {index:?} does not belong to {}",
                    self.name()
                )))
            }
        })
    }

    /// `|û_m(k)|²` for the linear index `m ≥ 1`.
    pub fn density(&self, m: u64, k: &[f64]) -> Result<f64> {
        let index = self.index(m)?;
        self.density_of(&index, k)
    }

    /// 1D convenience for `density`.
    pub fn density_1d(&self, m: u64, k: f64) -> Result<f64> {
        self.density(m, &[k])
    }

    /// `F_N(k)`.
    pub fn trace_partial(&self, big_n: u64, k: &[f64]) -> Result<f64> {
        let dim = self.dim() as usize;
        if k.len() != dim {
            return Err(Error::Domain(format!(
                "{} expects momenta of dimension {dim}, got {}",
                self.name(),
                k.len()
            )));
        }
        Ok(match self {
            BasisFamily::DirichletSine => sine_trace(big_n, k[0]),
            BasisFamily::ExponentialCircle => exponential_trace(big_n, k[0]),
            BasisFamily::Haar => haar_trace(big_n, k[0]),
            BasisFamily::DirichletBox { n, ordering } => {
                let cube = match ordering {
                    BoxOrdering::IndexCube => integer_root(big_n, *n),
                    BoxOrdering::EigenSorted => None,
                };
                match cube {
                    Some(m) => k.iter().map(|&kj| sine_trace(m, kj)).product(),
                    None => {
                        let mut acc = CompensatedSum::new();
                        for ms in box_indices(*n, *ordering, big_n as usize) {
                            acc.add(ms.iter().zip(k).map(|(&m, &kj)| sine_density(m, kj)).product());
                        }
                        acc.value()
                    }
                }
            }
        })
    }

    /// `F_N` of a 1D family.
    pub fn trace_1d(&self, big_n: u64, k: f64) -> Result<f64> {
        self.trace_partial(big_n, &[k])
    }

    /// `G_N(ξ) = F_N(N^{1/n} ξ)`.
    pub fn scaled_trace(&self, big_n: u64, xi: &[f64]) -> Result<f64> {
        let s = self.scale(big_n);
        let k: Vec<f64> = xi.iter().map(|x| s * x).collect();
        self.trace_partial(big_n, &k)
    }

    /// `G_N` of a 1D family.
    pub fn scaled_trace_1d(&self, big_n: u64, xi: f64) -> Result<f64> {
        self.scaled_trace(big_n, &[xi])
    }
}

/// Trace density sampled on a uniform grid along the first axis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceDensity {
    pub basis: String,
    pub big_n: u64,
    pub scaled: bool,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl TraceDensity {
    /// Trapezoid rule over the sampled grid.
    pub fn trapezoid_mass(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for i in 1..self.grid.len() {
            let h = self.grid[i] - self.grid[i - 1];
            acc.add(0.5 * h * (self.values[i] + self.values[i - 1]));
        }
        acc.value()
    }
}

/// Uniform grid `min, min + step, …` up to `max` inclusive (with a relative
/// slack of 1e-9 steps so that `max` is hit when it lies on the grid).
pub fn uniform_grid(min: f64, max: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !min.is_finite() || !max.is_finite() || max < min {
        return Err(Error::Domain(format!("invalid grid [{min}, {max}] step {step}")));
    }
    let span = (max - min) / step;
    let count = (span + 1e-9).floor() + 1.0;
    if count > MAX_GRID_POINTS {
        return Err(Error::GridTooLarge(count));
    }
    Ok((0..count as u64).map(|i| min + i as f64 * step).collect())
}

/// Samples `F_N` (or `G_N` when `scaled`) along the first axis.
pub fn sample_grid(
    basis: &BasisFamily,
    big_n: u64,
    min: f64,
    max: f64,
    step: f64,
    scaled: bool,
) -> Result<TraceDensity> {
    let grid = uniform_grid(min, max, step)?;
    let dim = basis.dim() as usize;
    let values = grid
        .par_iter()
        .map(|&k| {
            let mut point = vec![0.0; dim];
            point[0] = k;
            if scaled {
                basis.scaled_trace(big_n, &point)
            } else {
                basis.trace_partial(big_n, &point)
            }
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(TraceDensity {
        basis: basis.name(),
        big_n,
        scaled,
        grid,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sine_density_textbook(m: u64, k: f64) -> f64 {
        let m = m as f64;
        let sign = if (m as u64) % 2 == 0 { 1.0 } else { -1.0 };
        2.0 / (PI * PI) * m * m * (1.0 - sign * (PI * k).cos()) / (k * k - m * m).powi(2)
    }

    #[test]
    fn sine_density_matches_textbook_form_away_from_resonance() {
        for m in 1..=12u64 {
            for i in 0..400 {
                let k = -20.0 + 0.1 * i as f64 + 0.037;
                if (k.abs() - m as f64).abs() < 0.3 {
                    continue;
                }
                let a = sine_density(m, k);
                let b = sine_density_textbook(m, k);
                assert!((a - b).abs() < 1e-12 * b.max(1e-3), "m={m} k={k}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn sine_density_examples() {
        assert_eq!(sine_density(1, 1.0), 0.25);
        assert!((sine_density(1, 0.0) - 4.0 / (PI * PI)).abs() < 1e-16);
        assert_eq!(sine_density(2, 2.0), 0.25);
        assert!((sine_density(3, -3.0 + 1e-9) - 0.25).abs() < 1e-9);
    }

    #[test]
    fn haar_density_matches_closed_form() {
        for level in 1..=6u32 {
            for i in 1..200 {
                let k = 0.173 * i as f64;
                let closed = (2.0f64).powi(level as i32 + 2) * (k / (2.0f64).powi(level as i32 + 1)).sin().powi(4)
                    / (PI * k * k);
                let v = haar_density(level, k);
                assert!((v - closed).abs() < 1e-13 * closed.max(1e-6));
            }
        }
        assert!((haar_density(0, 0.0) - 1.0 / (2.0 * PI)).abs() < 1e-16);
    }

    #[test]
    fn fast_traces_agree_with_direct_sums() {
        for i in 0..500 {
            let k = -30.0 + 0.1231 * i as f64;
            let direct: f64 = (1..=25).map(|m| sine_density(m, k)).sum();
            assert!((sine_trace(25, k) - direct).abs() < 1e-13);
            let direct: f64 = (-10..=10).map(|n| exponential_density(n, k)).sum();
            assert!((exponential_trace(10, k) - direct).abs() < 1e-13);
            let h = BasisFamily::Haar;
            let direct: f64 = (1..=37).map(|m| h.density_1d(m, k).unwrap()).sum();
            assert!((haar_trace(37, k) - direct).abs() < 1e-13);
        }
    }

    #[test]
    fn index_decoding() {
        let e = BasisFamily::ExponentialCircle;
        let got: Vec<_> = (1..=5).map(|m| e.index(m).unwrap()).collect();
        assert_eq!(
            got,
            vec![
                BasisIndex::Exponential(0),
                BasisIndex::Exponential(1),
                BasisIndex::Exponential(-1),
                BasisIndex::Exponential(2),
                BasisIndex::Exponential(-2)
            ]
        );
        let h = BasisFamily::Haar;
        assert_eq!(h.index(1).unwrap(), BasisIndex::Haar { level: 0, shift: 0 });
        assert_eq!(h.index(2).unwrap(), BasisIndex::Haar { level: 1, shift: 0 });
        assert_eq!(h.index(3).unwrap(), BasisIndex::Haar { level: 2, shift: 0 });
        assert_eq!(h.index(4).unwrap(), BasisIndex::Haar { level: 2, shift: 1 });
        assert_eq!(h.index(5).unwrap(), BasisIndex::Haar { level: 3, shift: 0 });
        assert_eq!(h.index(8).unwrap(), BasisIndex::Haar { level: 3, shift: 3 });
        assert!(matches!(h.index(0), Err(Error::UnknownIndex { .. })));
    }

    #[test]
    fn box_orderings() {
        let cube = box_indices(2, BoxOrdering::IndexCube, 9);
        assert_eq!(cube[0], vec![1, 1]);
        assert_eq!(&cube[1..4], &[vec![1, 2], vec![2, 1], vec![2, 2]]);
        let mut sorted = cube.clone();
        sorted.sort();
        let mut expected: Vec<Vec<u64>> = (1..=3).flat_map(|a| (1..=3).map(move |b| vec![a, b])).collect();
        expected.sort();
        assert_eq!(sorted, expected);

        let eig = box_indices(2, BoxOrdering::EigenSorted, 6);
        assert_eq!(eig, vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2], vec![1, 3], vec![3, 1]]);
        let eig3 = box_indices(3, BoxOrdering::EigenSorted, 200);
        let norms: Vec<u64> = eig3.iter().map(|v| v.iter().map(|m| m * m).sum()).collect();
        assert!(norms.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn box_cube_trace_factorizes() {
        let b = BasisFamily::dirichlet_box(2, BoxOrdering::IndexCube).unwrap();
        for &(k1, k2) in &[(0.3, 1.7), (2.5, -0.4), (4.0, 4.0)] {
            let direct: f64 = box_indices(2, BoxOrdering::IndexCube, 16)
                .iter()
                .map(|v| sine_density(v[0], k1) * sine_density(v[1], k2))
                .sum();
            let fast = b.trace_partial(16, &[k1, k2]).unwrap();
            assert!((direct - fast).abs() < 1e-14);
        }
    }

    #[test]
    fn grid_sizes() {
        let g = sample_grid(&BasisFamily::DirichletSine, 1, -2.0, 2.0, 0.005, false).unwrap();
        assert_eq!(g.grid.len(), 801);
        assert_eq!(*g.grid.last().unwrap(), 2.0);
        assert!(matches!(uniform_grid(0.0, 1e9, 1.0), Err(Error::GridTooLarge(_))));
        assert!(uniform_grid(0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn trace_at_fermi_edge_sine() {
        assert_eq!(BasisFamily::DirichletSine.trace_1d(1, 1.0).unwrap(), 0.25);
    }

    proptest! {
        #[test]
        fn densities_nonnegative_and_bounded(m in 1u64..200, k in -500.0f64..500.0) {
            for basis in [BasisFamily::DirichletSine, BasisFamily::ExponentialCircle, BasisFamily::Haar] {
                let d = basis.density_1d(m, k).unwrap();
                let h = basis.domain().density_height();
                prop_assert!(d >= 0.0);
                prop_assert!(d <= h + 1e-12, "{} m={} k={}: {} > {}", basis.name(), m, k, d, h);
            }
        }

        #[test]
        fn traces_bounded_by_height(big_n in 1u64..300, k in -400.0f64..400.0) {
            for basis in [BasisFamily::DirichletSine, BasisFamily::ExponentialCircle, BasisFamily::Haar] {
                let h = basis.domain().density_height();
                let f = basis.trace_1d(big_n, k).unwrap();
                prop_assert!(f >= 0.0);
                prop_assert!(f <= h + 1e-12, "{} N={} k={}: {} > {}", basis.name(), big_n, k, f, h);
            }
        }

        #[test]
        fn densities_even(m in 1u64..100, k in 0.0f64..100.0) {
            for basis in [BasisFamily::DirichletSine, BasisFamily::Haar] {
                prop_assert_eq!(basis.density_1d(m, k).unwrap(), basis.density_1d(m, -k).unwrap());
            }
        }

        #[test]
        fn box_trace_bounded(m in 1u64..6, k1 in -20.0f64..20.0, k2 in -20.0f64..20.0) {
            let b = BasisFamily::dirichlet_box(2, BoxOrdering::IndexCube).unwrap();
            let f = b.trace_partial(m * m, &[k1, k2]).unwrap();
            prop_assert!(f <= 0.25 + 1e-12);
        }
    }
}
