//! Numerical kernels: composite Gauss-Legendre window quadrature, periodic
//! scalar minimization (grid scan + golden-section refinement), fixed-point
//! root finding by bisection, and full-circle trapezoid averages.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const TWO_PI: f64 = 2.0 * PI;

/// Composite Gauss-Legendre configuration for window integrals.
#[derive(Debug, Clone, Copy)]
pub struct QuadratureConfig {
    pub panels: usize,
    pub points_per_panel: usize,
    pub abs_tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            panels: 64,
            points_per_panel: 16,
            abs_tol: 1e-10,
        }
    }
}

impl QuadratureConfig {
    pub fn validate(&self) -> Result<()> {
        if self.panels < 1 || self.points_per_panel < 2 || !(self.abs_tol > 0.0) {
            return Err(Error::ParameterRange(format!(
                "invalid quadrature config: panels={}, points_per_panel={}, abs_tol={}",
                self.panels, self.points_per_panel, self.abs_tol
            )));
        }
        Ok(())
    }
}

/// Uniform φ₀ scan over one 2π interval.
#[derive(Debug, Clone, Copy)]
pub struct ScanGrid {
    pub n: usize,
    pub origin: f64,
}

impl Default for ScanGrid {
    fn default() -> Self {
        Self { n: 720, origin: -PI }
    }
}

impl ScanGrid {
    pub fn with_n(n: usize) -> Self {
        Self { n, origin: -PI }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n < 8 {
            return Err(Error::ParameterRange(format!(
                "scan grid needs n >= 8, got {}",
                self.n
            )));
        }
        Ok(())
    }

    pub fn step(&self) -> f64 {
        TWO_PI / self.n as f64
    }

    pub fn points(&self) -> impl Iterator<Item = f64> + '_ {
        let (origin, step) = (self.origin, self.step());
        (0..self.n).map(move |i| origin + step * i as f64)
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 2);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // p_n(x) and its derivative
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre integral of a real integrand on [a, b].
pub fn integrate_window(f: impl Fn(f64) -> f64, a: f64, b: f64, cfg: &QuadratureConfig) -> Result<f64> {
    if !(b > a) {
        return Err(Error::ParameterRange(format!(
            "integration interval [{a}, {b}] is empty"
        )));
    }
    cfg.validate()?;
    let (nodes, weights) = gauss_legendre(cfg.points_per_panel);
    let h = (b - a) / cfg.panels as f64;
    let mut total = 0.0;
    for p in 0..cfg.panels {
        let left = a + h * p as f64;
        let mid = left + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            let v = f(mid + half * x);
            if !v.is_finite() {
                return Err(Error::NumericalDomain(format!(
                    "integrand non-finite at φ = {}",
                    mid + half * x
                )));
            }
            total += w * half * v;
        }
    }
    Ok(total)
}

/// Complex-valued variant of [`integrate_window`].
pub fn integrate_window_complex(
    f: impl Fn(f64) -> Complex64,
    a: f64,
    b: f64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if !(b > a) {
        return Err(Error::ParameterRange(format!(
            "integration interval [{a}, {b}] is empty"
        )));
    }
    cfg.validate()?;
    let (nodes, weights) = gauss_legendre(cfg.points_per_panel);
    let h = (b - a) / cfg.panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..cfg.panels {
        let left = a + h * p as f64;
        let mid = left + 0.5 * h;
        let half = 0.5 * h;
        for (x, w) in nodes.iter().zip(&weights) {
            let v = f(mid + half * x);
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NumericalDomain(format!(
                    "integrand non-finite at φ = {}",
                    mid + half * x
                )));
            }
            total += v * (w * half);
        }
    }
    Ok(total)
}

/// Mean of node values over one period; for a 2π-periodic integrand this is
/// the trapezoid rule and is spectrally accurate.
pub fn trapezoid_average(f: impl Fn(f64) -> f64, grid: &ScanGrid) -> f64 {
    let sum: f64 = grid.points().map(f).sum();
    sum / grid.n as f64
}

/// Result of [`minimize_periodic`].
#[derive(Debug, Clone)]
pub struct Minimum {
    /// Global minimum value.
    pub value: f64,
    /// One argmin, in [-π, π).
    pub argmin: f64,
    /// All local minima tied with the global one (relative tolerance
    /// 1e-9·max(1, |value|)), in [-π, π), sorted.
    pub minima: Vec<f64>,
    /// True when the function is constant over the grid (all points tie).
    pub degenerate: bool,
}

/// Degeneracy tolerance for tied minima, relative to the minimum value.
fn tie_tol(g_min: f64) -> f64 {
    1e-9 * g_min.abs().max(1.0)
}

fn check_periodic(g: &impl Fn(f64) -> f64, origin: f64) -> Result<()> {
    let a = g(origin);
    let b = g(origin + TWO_PI);
    if (a - b).abs() > 1e-8 * a.abs().max(1.0) {
        return Err(Error::ContractViolation(format!(
            "function is not 2π-periodic: g({origin}) = {a}, g({origin} + 2π) = {b}"
        )));
    }
    Ok(())
}

/// Golden-section search for the minimum of `f` on `[a, b]`.
fn golden_section(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while (b - a).abs() > tol {
        if f1 < f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 < f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Global minimum of a 2π-periodic function: dense grid scan, golden-section
/// refinement in every bracketing triple, then collection of tied minima.
pub fn minimize_periodic(
    g: impl Fn(f64) -> f64,
    grid: &ScanGrid,
    refine_tol: f64,
) -> Result<Minimum> {
    grid.validate()?;
    check_periodic(&g, grid.origin)?;
    let n = grid.n;
    let step = grid.step();
    let xs: Vec<f64> = grid.points().collect();
    let vs: Vec<f64> = xs.iter().map(|&x| g(x)).collect();

    let v_lo = vs.iter().cloned().fold(f64::INFINITY, f64::min);
    let v_hi = vs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    if v_hi - v_lo <= tie_tol(v_lo) {
        return Ok(Minimum {
            value: v_lo,
            argmin: crate::circle_state::reduce_angle(grid.origin),
            minima: Vec::new(),
            degenerate: true,
        });
    }

    // refine every grid-detected local minimum (cyclic neighbors)
    let mut candidates: Vec<(f64, f64)> = Vec::new();
    for i in 0..n {
        let prev = vs[(i + n - 1) % n];
        let next = vs[(i + 1) % n];
        if vs[i] <= prev && vs[i] <= next {
            let (x, v) = golden_section(&g, xs[i] - step, xs[i] + step, refine_tol);
            candidates.push((x, v));
        }
    }

    let g_min = candidates
        .iter()
        .map(|&(_, v)| v)
        .fold(f64::INFINITY, f64::min);
    let tol = tie_tol(g_min);
    let mut minima: Vec<f64> = candidates
        .iter()
        .filter(|&&(_, v)| v <= g_min + tol)
        .map(|&(x, _)| crate::circle_state::reduce_angle(x))
        .collect();
    minima.sort_by(|a, b| a.partial_cmp(b).unwrap());
    // Adjacent triples around a flat (quartic) minimum can refine to points a
    // few 1e-4 apart: golden section cannot localize beyond ~(ε·scale)^(1/4)
    // there. Distinct tied minima of bounded-harmonic densities are separated
    // by much more, so a 1e-3 merge radius is safe.
    minima.dedup_by(|a, b| {
        let d = (*a - *b).abs();
        d < 1e-3 || (TWO_PI - d) < 1e-3
    });
    let argmin = minima[0];
    Ok(Minimum {
        value: g_min,
        argmin,
        minima,
        degenerate: false,
    })
}

/// Result of [`fixed_points`].
#[derive(Debug, Clone, PartialEq)]
pub enum FixedPoints {
    /// Every grid point satisfies h(φ₀) = φ₀ to 1e-9 (uniform density).
    AllPoints,
    /// Roots of h(φ₀) - φ₀ in [-π, π), sorted.
    Roots(Vec<f64>),
}

/// All solutions of h(φ₀) = φ₀ in one 2π interval, via sign-change
/// bracketing of r(φ₀) = h(φ₀) - φ₀ and bisection to 1e-10.
///
/// Precondition on `h`: h(φ₀ + 2π) = h(φ₀) + 2π, so r itself is 2π-periodic.
pub fn fixed_points(h: impl Fn(f64) -> f64, grid: &ScanGrid) -> Result<FixedPoints> {
    grid.validate()?;
    let n = grid.n;
    let xs: Vec<f64> = grid.points().collect();
    let rs: Vec<f64> = xs.iter().map(|&x| h(x) - x).collect();

    if rs.iter().all(|r| r.abs() < 1e-9) {
        return Ok(FixedPoints::AllPoints);
    }

    let r = |x: f64| h(x) - x;
    let mut roots: Vec<f64> = Vec::new();
    for i in 0..n {
        let j = (i + 1) % n;
        // wrap the last interval onto origin + 2π where r repeats
        let (xa, xb) = (xs[i], if j == 0 { xs[0] + TWO_PI } else { xs[j] });
        let (ra, rb) = (rs[i], rs[j]);
        if ra.abs() < 1e-12 {
            roots.push(xa);
            continue;
        }
        if rb.abs() < 1e-12 {
            continue; // picked up as the left endpoint of the next interval
        }
        if ra.signum() != rb.signum() {
            let (mut a, mut b) = (xa, xb);
            let mut fa = ra;
            while b - a > 1e-10 {
                let mid = 0.5 * (a + b);
                let fm = r(mid);
                if fm == 0.0 {
                    a = mid;
                    b = mid;
                    break;
                }
                if fa.signum() != fm.signum() {
                    b = mid;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            roots.push(0.5 * (a + b));
        }
    }

    let mut roots: Vec<f64> = roots
        .into_iter()
        .map(crate::circle_state::reduce_angle)
        .collect();
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| {
        let d = (*a - *b).abs();
        d < 1e-8 || (TWO_PI - d) < 1e-8
    });
    // first and last may alias mod 2π after reduction
    if roots.len() > 1 {
        let d = TWO_PI - (roots[roots.len() - 1] - roots[0]);
        if d.abs() < 1e-8 {
            roots.pop();
        }
    }
    Ok(FixedPoints::Roots(roots))
}
