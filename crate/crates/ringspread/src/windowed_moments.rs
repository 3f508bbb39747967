//! Window-dependent moments of the angle and exact angular-momentum moments.
//!
//! The density of a truncated Fourier-series state is the trigonometric
//! polynomial p(φ) = (1/2π) Σ_k P_k e^{ikφ} with P_k = Σ_m c̄_m c_{m+k}.
//! Substituting φ = φ₀ + u maps every window moment over [φ₀-π, φ₀+π] to the
//! φ₀-independent integrals J_n(k) = ∫_{-π}^{π} uⁿ e^{iku} du, which obey a
//! stable two-term recurrence in n. That closed-form path carries the
//! published digits; panel quadrature is kept only as a cross-check oracle.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::circle_state::CircleState;
use crate::error::{Error, Result};
use crate::numerics::{integrate_window, integrate_window_complex, QuadratureConfig};

const TWO_PI: f64 = 2.0 * PI;

/// Highest central-moment order supported.
pub const MAX_MOMENT: usize = 8;

/// The moment bundle at one window reference point φ₀.
#[derive(Debug, Clone, Copy)]
pub struct WindowMoments {
    pub phi0: f64,
    /// Mφ(φ₀), in [φ₀-π, φ₀+π].
    pub mean: f64,
    /// Dφ(φ₀) ≥ 0, ≤ π².
    pub variance: f64,
    /// Re G_{l_zφ}(φ₀), the ordinary covariance Δl_zφ(φ₀).
    pub cov_re: f64,
    /// Im G_{l_zφ}(φ₀).
    pub cov_im: f64,
}

/// Per-state precomputation: density harmonics, covariance harmonics and the
/// J_n(k) table. Cheap to build; every windowed quantity is O(k_max) per φ₀.
pub struct WindowEngine {
    kmax: usize,
    /// P_k for k = 0..=kmax (P_{-k} = conj P_k).
    p: Vec<Complex64>,
    /// Q_k = Σ_m (m - ⟨l_z⟩) c̄_m c_{m+k} for k = -kmax..=kmax, offset kmax.
    q: Vec<Complex64>,
    /// J_n(k) for k = 0..=kmax, n = 0..=MAX_MOMENT (J_n(-k) = conj J_n(k)).
    j: Vec<[Complex64; MAX_MOMENT + 1]>,
    lz_mean: f64,
    lz_var: f64,
}

impl WindowEngine {
    pub fn new(state: &CircleState) -> Self {
        let coeffs: Vec<(i64, Complex64)> = state.coeffs().collect();
        let kmax = (state.m_max() - state.m_min()) as usize;

        let (lz_mean, lz_var) = lz_moments(state);

        let mut p = vec![Complex64::new(0.0, 0.0); kmax + 1];
        let mut q = vec![Complex64::new(0.0, 0.0); 2 * kmax + 1];
        for &(m, cm) in &coeffs {
            for &(mp, cmp) in &coeffs {
                let k = mp - m;
                let prod = cm.conj() * cmp;
                if k >= 0 {
                    p[k as usize] += prod;
                }
                q[(k + kmax as i64) as usize] += (m as f64 - lz_mean) * prod;
            }
        }

        let j = j_table(kmax);
        Self {
            kmax,
            p,
            q,
            j,
            lz_mean,
            lz_var,
        }
    }

    pub fn lz_mean(&self) -> f64 {
        self.lz_mean
    }

    pub fn lz_variance(&self) -> f64 {
        self.lz_var
    }

    /// Raw moment S_n(φ₀) = ∫_{-π}^{π} uⁿ p(φ₀+u) du.
    fn raw_u_moment(&self, n: usize, phi0: f64) -> f64 {
        let mut acc = self.p[0] * self.j[0][n];
        for k in 1..=self.kmax {
            let phase = Complex64::from_polar(1.0, k as f64 * phi0);
            acc += 2.0 * (self.p[k] * phase * self.j[k][n]).re;
        }
        acc.re / TWO_PI
    }

    /// Mφ(φ₀) = ∫ φ p(φ) dφ over the window [φ₀-π, φ₀+π].
    pub fn mean_phi(&self, phi0: f64) -> f64 {
        phi0 + self.raw_u_moment(1, phi0)
    }

    /// Dφ(φ₀), the central second moment over the window.
    pub fn variance_phi(&self, phi0: f64) -> f64 {
        let s1 = self.raw_u_moment(1, phi0);
        let s2 = self.raw_u_moment(2, phi0);
        s2 - s1 * s1
    }

    /// n-th central moment over the window, 1 ≤ n ≤ 8.
    pub fn central_moment_phi(&self, n: usize, phi0: f64) -> Result<f64> {
        if !(1..=MAX_MOMENT).contains(&n) {
            return Err(Error::ParameterRange(format!(
                "central moment order must be in 1..={MAX_MOMENT}, got {n}"
            )));
        }
        let s: Vec<f64> = (0..=n).map(|j| self.raw_u_moment(j, phi0)).collect();
        let mu = s[1];
        let mut acc = 0.0;
        for j in 0..=n {
            acc += binomial(n, j) * s[j] * (-mu).powi((n - j) as i32);
        }
        Ok(acc)
    }

    /// (Re G, Im G) of G_{l_zφ}(φ₀) = ⟨(l_z-⟨l_z⟩)ψ|(φ-Mφ(φ₀))ψ⟩ over the window.
    pub fn covariance_lz_phi(&self, phi0: f64) -> (f64, f64) {
        let mean = self.mean_phi(phi0);
        let shift = phi0 - mean;
        let kmax = self.kmax as i64;
        let mut acc = Complex64::new(0.0, 0.0);
        for k in -kmax..=kmax {
            let qk = self.q[(k + kmax) as usize];
            if qk.norm_sqr() == 0.0 {
                continue;
            }
            let (j0, j1) = if k >= 0 {
                (self.j[k as usize][0], self.j[k as usize][1])
            } else {
                (
                    self.j[(-k) as usize][0].conj(),
                    self.j[(-k) as usize][1].conj(),
                )
            };
            let phase = Complex64::from_polar(1.0, k as f64 * phi0);
            acc += qk * phase * (j1 + shift * j0);
        }
        acc /= TWO_PI;
        (acc.re, acc.im)
    }

    /// The full bundle at φ₀.
    pub fn window_moments(&self, phi0: f64) -> WindowMoments {
        let (cov_re, cov_im) = self.covariance_lz_phi(phi0);
        WindowMoments {
            phi0,
            mean: self.mean_phi(phi0),
            variance: self.variance_phi(phi0),
            cov_re,
            cov_im,
        }
    }
}

/// J_n(k) = ∫_{-π}^{π} uⁿ e^{iku} du for k = 0..=kmax, n = 0..=MAX_MOMENT.
///
/// k = 0: 0 for odd n, 2π^{n+1}/(n+1) for even n. k ≥ 1: integration by
/// parts gives J_n = (-1)^k (πⁿ - (-π)ⁿ)/(ik) - (n/(ik)) J_{n-1}, J_0 = 0.
fn j_table(kmax: usize) -> Vec<[Complex64; MAX_MOMENT + 1]> {
    let zero = Complex64::new(0.0, 0.0);
    let mut table = vec![[zero; MAX_MOMENT + 1]; kmax + 1];
    for n in 0..=MAX_MOMENT {
        table[0][n] = if n % 2 == 0 {
            Complex64::new(2.0 * PI.powi(n as i32 + 1) / (n as f64 + 1.0), 0.0)
        } else {
            zero
        };
    }
    for k in 1..=kmax {
        let inv_ik = Complex64::new(0.0, -1.0 / k as f64); // 1/(ik)
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        for n in 1..=MAX_MOMENT {
            let boundary = if n % 2 == 0 {
                zero
            } else {
                Complex64::new(2.0 * PI.powi(n as i32), 0.0)
            };
            table[k][n] = inv_ik * (sign * boundary - n as f64 * table[k][n - 1]);
        }
    }
    table
}

fn binomial(n: usize, k: usize) -> f64 {
    let mut acc = 1.0;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) as f64 / (i + 1) as f64;
    }
    acc
}

/// Mφ(φ₀); see [`WindowEngine::mean_phi`].
pub fn mean_phi(state: &CircleState, phi0: f64) -> f64 {
    WindowEngine::new(state).mean_phi(phi0)
}

/// Dφ(φ₀); see [`WindowEngine::variance_phi`].
pub fn variance_phi(state: &CircleState, phi0: f64) -> f64 {
    WindowEngine::new(state).variance_phi(phi0)
}

/// n-th central window moment.
pub fn central_moment_phi(state: &CircleState, n: usize, phi0: f64) -> Result<f64> {
    WindowEngine::new(state).central_moment_phi(n, phi0)
}

/// (Re G, Im G) at φ₀.
pub fn covariance_lz_phi(state: &CircleState, phi0: f64) -> (f64, f64) {
    WindowEngine::new(state).covariance_lz_phi(phi0)
}

/// Full-circle ⟨e^{ikφ}⟩ = Σ_m c̄_m c_{m-k}; exact coefficient convolution.
pub fn expectation_exp_ikphi(state: &CircleState, k: i64) -> Complex64 {
    state
        .coeffs()
        .map(|(m, c)| c.conj() * state.coeff(m - k))
        .sum()
}

/// Means and variances of cos φ and sin φ, from ⟨e^{ikφ}⟩ at k = 1, 2.
#[derive(Debug, Clone, Copy)]
pub struct TrigMoments {
    pub mean_cos: f64,
    pub mean_sin: f64,
    pub var_cos: f64,
    pub var_sin: f64,
}

pub fn trig_moments(state: &CircleState) -> TrigMoments {
    let e1 = expectation_exp_ikphi(state, 1);
    let e2 = expectation_exp_ikphi(state, 2);
    let mean_cos = e1.re;
    let mean_sin = e1.im;
    let cos_sq = 0.5 * (1.0 + e2.re);
    let sin_sq = 0.5 * (1.0 - e2.re);
    TrigMoments {
        mean_cos,
        mean_sin,
        var_cos: cos_sq - mean_cos * mean_cos,
        var_sin: sin_sq - mean_sin * mean_sin,
    }
}

/// (⟨l_z⟩, Δ²l_z), exact sums over coefficients.
pub fn lz_moments(state: &CircleState) -> (f64, f64) {
    let mut mean = 0.0;
    let mut second = 0.0;
    for (m, c) in state.coeffs() {
        let w = c.norm_sqr();
        mean += m as f64 * w;
        second += (m as f64) * (m as f64) * w;
    }
    (mean, second - mean * mean)
}

/// (⟨e^{2l_z}⟩, ⟨e^{-2l_z}⟩); terms are computed in log space so a tiny
/// coefficient can tame a large exponent.
pub fn exp_2lz_moments(state: &CircleState) -> Result<(f64, f64)> {
    let mut plus = 0.0;
    let mut minus = 0.0;
    for (m, c) in state.coeffs() {
        let w = c.norm_sqr();
        if w == 0.0 {
            continue;
        }
        let ln_w = w.ln();
        let term_plus = (2.0 * m as f64 + ln_w).exp();
        let term_minus = (-2.0 * m as f64 + ln_w).exp();
        if !term_plus.is_finite() || !term_minus.is_finite() {
            return Err(Error::ExpMomentOverflow { m });
        }
        plus += term_plus;
        minus += term_minus;
    }
    if !plus.is_finite() || !minus.is_finite() {
        return Err(Error::NumericalDomain("exp(±2 l_z) sum overflowed".into()));
    }
    Ok((plus, minus))
}

// ---------------------------------------------------------------------------
// Quadrature cross-check path. Independent of the per-harmonic engine: it
// integrates the sampled density directly.

pub fn mean_phi_quad(state: &CircleState, phi0: f64, cfg: &QuadratureConfig) -> Result<f64> {
    integrate_window(|phi| phi * state.density(phi), phi0 - PI, phi0 + PI, cfg)
}

pub fn variance_phi_quad(state: &CircleState, phi0: f64, cfg: &QuadratureConfig) -> Result<f64> {
    let mean = mean_phi_quad(state, phi0, cfg)?;
    integrate_window(
        |phi| (phi - mean) * (phi - mean) * state.density(phi),
        phi0 - PI,
        phi0 + PI,
        cfg,
    )
}

pub fn covariance_lz_phi_quad(
    state: &CircleState,
    phi0: f64,
    cfg: &QuadratureConfig,
) -> Result<(f64, f64)> {
    let (lz_mean, _) = lz_moments(state);
    let mean = mean_phi_quad(state, phi0, cfg)?;
    let g = integrate_window_complex(
        |phi| {
            let psi = state.evaluate(phi);
            let lz_psi = state.evaluate_lz(phi);
            (lz_psi - lz_mean * psi).conj() * (phi - mean) * psi
        },
        phi0 - PI,
        phi0 + PI,
        cfg,
    )?;
    Ok((g.re, g.im))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circle_state::{make_coherent, make_eigenstate, make_trig, Phase};
    use approx::assert_abs_diff_eq;

    #[test]
    fn mean_uniform_is_identity() {
        let s = make_eigenstate(0).unwrap();
        let e = WindowEngine::new(&s);
        for &phi0 in &[-3.0, -0.4, 0.0, 1.9, 3.1] {
            assert_abs_diff_eq!(e.mean_phi(phi0), phi0, epsilon = 1e-13);
        }
    }

    #[test]
    fn mean_psi_s_closed_form() {
        let s = make_trig(1, Phase::Sin).unwrap();
        let e = WindowEngine::new(&s);
        for i in 0..24 {
            let phi0 = -PI + TWO_PI * i as f64 / 24.0;
            assert_abs_diff_eq!(
                e.mean_phi(phi0),
                phi0 - (2.0 * phi0).sin() / 2.0,
                epsilon = 1e-12
            );
        }
        // shifts with the window
        assert_abs_diff_eq!(e.mean_phi(0.7 + TWO_PI), e.mean_phi(0.7) + TWO_PI, epsilon = 1e-11);
    }

    #[test]
    fn mean_psi_s2_closed_form() {
        let s = make_trig(2, Phase::Sin).unwrap();
        let e = WindowEngine::new(&s);
        for i in 0..24 {
            let phi0 = -PI + TWO_PI * i as f64 / 24.0;
            assert_abs_diff_eq!(
                e.mean_phi(phi0),
                phi0 - (4.0 * phi0).sin() / 4.0,
                epsilon = 1e-12
            );
        }
    }

    #[test]
    fn variance_uniform_and_psi_s() {
        let uniform = make_eigenstate(5).unwrap();
        let e = WindowEngine::new(&uniform);
        assert_abs_diff_eq!(e.variance_phi(0.3), PI * PI / 3.0, epsilon = 1e-12);

        let s = make_trig(1, Phase::Sin).unwrap();
        let e = WindowEngine::new(&s);
        assert_abs_diff_eq!(e.variance_phi(0.0), PI * PI / 3.0 - 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(e.variance_phi(PI / 2.0), PI * PI / 3.0 + 0.5, epsilon = 1e-12);
    }

    #[test]
    fn central_moments_uniform() {
        let s = make_eigenstate(0).unwrap();
        let e = WindowEngine::new(&s);
        assert_abs_diff_eq!(e.central_moment_phi(3, 1.1).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            e.central_moment_phi(4, -0.6).unwrap(),
            PI.powi(4) / 5.0,
            epsilon = 1e-11
        );
        assert!(e.central_moment_phi(0, 0.0).is_err());
        assert!(e.central_moment_phi(9, 0.0).is_err());
    }

    #[test]
    fn central_second_equals_variance() {
        let s = make_trig(1, Phase::Sin).unwrap();
        let e = WindowEngine::new(&s);
        assert_abs_diff_eq!(
            e.central_moment_phi(2, 0.7).unwrap(),
            e.variance_phi(0.7),
            epsilon = 1e-12
        );
    }

    #[test]
    fn covariance_uniform_vanishes() {
        let s = make_eigenstate(0).unwrap();
        let e = WindowEngine::new(&s);
        for &phi0 in &[-2.0, 0.0, 1.3] {
            let (re, im) = e.covariance_lz_phi(phi0);
            assert_abs_diff_eq!(re, 0.0, epsilon = 1e-13);
            assert_abs_diff_eq!(im, 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn covariance_real_state_re_vanishes() {
        let s = make_trig(1, Phase::Sin).unwrap();
        let e = WindowEngine::new(&s);
        for i in 0..16 {
            let phi0 = -PI + TWO_PI * i as f64 / 16.0;
            let (re, _) = e.covariance_lz_phi(phi0);
            assert_abs_diff_eq!(re, 0.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn covariance_im_boundary_oracle() {
        // Im G(φ₀) = π p(φ₀+π) - 1/2, by integration by parts on the window
        for s in [
            make_trig(1, Phase::Sin).unwrap(),
            make_trig(2, Phase::Sin).unwrap(),
            make_coherent(0.0, 0.0).unwrap(),
        ] {
            let e = WindowEngine::new(&s);
            for i in 0..12 {
                let phi0 = -PI + TWO_PI * i as f64 / 12.0;
                let (_, im) = e.covariance_lz_phi(phi0);
                assert_abs_diff_eq!(im, PI * s.density(phi0 + PI) - 0.5, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn expectation_examples() {
        let s = make_trig(1, Phase::Sin).unwrap();
        assert!(expectation_exp_ikphi(&s, 1).norm() < 1e-15);
        let e2 = expectation_exp_ikphi(&s, 2);
        assert_abs_diff_eq!(e2.re, -0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(e2.im, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(
            expectation_exp_ikphi(&s, 0).re,
            1.0,
            epsilon = 1e-14
        );
    }

    #[test]
    fn trig_moment_table() {
        let uniform = make_eigenstate(0).unwrap();
        let t = trig_moments(&uniform);
        assert_abs_diff_eq!(t.var_cos, 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(t.var_sin, 0.5, epsilon = 1e-14);

        let c = make_trig(1, Phase::Cos).unwrap();
        let t = trig_moments(&c);
        assert_abs_diff_eq!(t.var_cos, 0.75, epsilon = 1e-14);
        assert_abs_diff_eq!(t.var_sin, 0.25, epsilon = 1e-14);

        let s = make_trig(1, Phase::Sin).unwrap();
        let t = trig_moments(&s);
        assert_abs_diff_eq!(t.var_cos, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(t.var_sin, 0.75, epsilon = 1e-14);
    }

    #[test]
    fn lz_moment_examples() {
        let (mean, var) = lz_moments(&make_eigenstate(3).unwrap());
        assert_eq!((mean, var), (3.0, 0.0));
        let (mean, var) = lz_moments(&make_trig(1, Phase::Sin).unwrap());
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(var, 1.0, epsilon = 1e-14);
        let (mean, var) = lz_moments(&make_coherent(0.0, 0.0).unwrap());
        assert_abs_diff_eq!(mean, 0.0, epsilon = 1e-12);
        assert!(var > 0.0);
    }

    #[test]
    fn exp_2lz_examples() {
        let (plus, minus) = exp_2lz_moments(&make_eigenstate(0).unwrap()).unwrap();
        assert_eq!((plus, minus), (1.0, 1.0));
        let (plus, minus) = exp_2lz_moments(&make_eigenstate(2).unwrap()).unwrap();
        assert_abs_diff_eq!(plus, 4.0f64.exp(), epsilon = 1e-10);
        assert_abs_diff_eq!(minus, (-4.0f64).exp(), epsilon = 1e-18);
        // Cauchy-Schwarz: ⟨e^{2l_z}⟩⟨e^{-2l_z}⟩ ≥ 1
        let (plus, minus) = exp_2lz_moments(&make_coherent(0.0, 0.0).unwrap()).unwrap();
        assert!(plus * minus >= 1.0);
    }

    #[test]
    fn exp_2lz_overflow_names_m() {
        let s = make_eigenstate(400).unwrap();
        match exp_2lz_moments(&s) {
            Err(Error::ExpMomentOverflow { m }) => assert_eq!(m, 400),
            other => panic!("expected overflow, got {other:?}"),
        }
    }

    #[test]
    fn quadrature_path_agrees() {
        let cfg = QuadratureConfig::default();
        for s in [
            make_trig(1, Phase::Sin).unwrap(),
            make_coherent(0.3, 0.8).unwrap(),
        ] {
            let e = WindowEngine::new(&s);
            for &phi0 in &[-1.7, 0.0, 2.2] {
                assert_abs_diff_eq!(
                    e.mean_phi(phi0),
                    mean_phi_quad(&s, phi0, &cfg).unwrap(),
                    epsilon = 1e-9
                );
                assert_abs_diff_eq!(
                    e.variance_phi(phi0),
                    variance_phi_quad(&s, phi0, &cfg).unwrap(),
                    epsilon = 1e-9
                );
                let (re, im) = e.covariance_lz_phi(phi0);
                let (qre, qim) = covariance_lz_phi_quad(&s, phi0, &cfg).unwrap();
                assert_abs_diff_eq!(re, qre, epsilon = 1e-9);
                assert_abs_diff_eq!(im, qim, epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn variance_periodicity_and_bounds() {
        let s = make_coherent(0.0, 0.4).unwrap();
        let e = WindowEngine::new(&s);
        for i in 0..12 {
            let phi0 = -PI + TWO_PI * i as f64 / 12.0;
            let d = e.variance_phi(phi0);
            assert!((0.0..=PI * PI).contains(&d));
            assert_abs_diff_eq!(e.variance_phi(phi0 + TWO_PI), d, epsilon = 1e-10);
            let m = e.mean_phi(phi0);
            assert!(m >= phi0 - PI - 1e-12 && m <= phi0 + PI + 1e-12);
        }
    }
}
