//! States on the circle as truncated Fourier series in the angular-momentum
//! eigenbasis: ψ(φ) = Σ_m c_m e^{imφ}/√(2π).
//!
//! All builders return normalized states. The coherent-state convention is
//! c_m ∝ ξ^{-m} e^{-m²/2} with ξ = e^{l+iθ}, so the density peak sits at
//! φ = θ and ⟨l_z⟩ ≈ -l. Sign conventions differ across the literature;
//! this one satisfies the eigenvalue relation Z ψ = ξ ψ with
//! Z = exp(-l_z + 1/2) U(φ) on the truncated series.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Global cap on |m|; guards memory for pathological inputs.
pub const M_CAP: i64 = 512;

/// Normalization tolerance for accepting externally supplied coefficients.
pub const NORM_TOL: f64 = 1e-12;

/// Dropped tail probability allowed when a builder truncates an infinite series.
pub const TAIL_TOL: f64 = 1e-14;

const TWO_PI: f64 = 2.0 * PI;

/// Reduce an angle to the principal interval [-π, π).
pub fn reduce_angle(phi: f64) -> f64 {
    let r = (phi + PI).rem_euclid(TWO_PI) - PI;
    // rem_euclid can land exactly on 2π for inputs just below -π
    if r >= PI {
        r - TWO_PI
    } else {
        r
    }
}

/// A normalized pure state on the circle, held as coefficients c_m for
/// consecutive m = m_min ..= m_max. Immutable after construction.
#[derive(Debug, Clone, PartialEq)]
pub struct CircleState {
    m_min: i64,
    coeffs: Vec<Complex64>,
    label: Option<String>,
}

impl CircleState {
    /// Build from coefficients that must already be normalized to `NORM_TOL`.
    pub fn new(m_min: i64, coeffs: Vec<Complex64>, label: Option<String>) -> Result<Self> {
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized { norm_sq });
        }
        Self::build(m_min, coeffs, label)
    }

    /// Build from arbitrary coefficients, rescaling to unit norm.
    pub fn normalized(m_min: i64, coeffs: Vec<Complex64>, label: Option<String>) -> Result<Self> {
        let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
        if norm_sq < 1e-24 {
            return Err(Error::DegenerateState(
                "coefficient vector has (near-)zero norm".into(),
            ));
        }
        let inv = 1.0 / norm_sq.sqrt();
        let coeffs = coeffs.into_iter().map(|c| c * inv).collect();
        Self::build(m_min, coeffs, label)
    }

    fn build(mut m_min: i64, mut coeffs: Vec<Complex64>, label: Option<String>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::DegenerateState("empty coefficient vector".into()));
        }
        // trim exactly-zero tails so m_min/m_max are tight
        while coeffs.len() > 1 && coeffs.last().is_some_and(|c| c.norm_sqr() == 0.0) {
            coeffs.pop();
        }
        while coeffs.len() > 1 && coeffs[0].norm_sqr() == 0.0 {
            coeffs.remove(0);
            m_min += 1;
        }
        let m_max = m_min + coeffs.len() as i64 - 1;
        if m_min < -M_CAP || m_max > M_CAP {
            return Err(Error::ParameterRange(format!(
                "m range [{m_min}, {m_max}] exceeds cap |m| <= {M_CAP}"
            )));
        }
        if !coeffs.iter().any(|c| c.norm() > 1e-15) {
            return Err(Error::DegenerateState(
                "all coefficients below modulus 1e-15".into(),
            ));
        }
        Ok(Self {
            m_min,
            coeffs,
            label,
        })
    }

    pub fn m_min(&self) -> i64 {
        self.m_min
    }

    pub fn m_max(&self) -> i64 {
        self.m_min + self.coeffs.len() as i64 - 1
    }

    /// Coefficient c_m; zero outside the stored range.
    pub fn coeff(&self, m: i64) -> Complex64 {
        if m < self.m_min || m > self.m_max() {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(m - self.m_min) as usize]
        }
    }

    /// Iterator over (m, c_m) pairs.
    pub fn coeffs(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .map(move |(i, &c)| (self.m_min + i as i64, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn norm_sq(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// ψ(φ) = Σ c_m e^{imφ}/√(2π), 2π-periodic via angle reduction.
    pub fn evaluate(&self, phi: f64) -> Complex64 {
        let phi = reduce_angle(phi);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.coeffs() {
            acc += c * Complex64::from_polar(1.0, m as f64 * phi);
        }
        acc / TWO_PI.sqrt()
    }

    /// Probability density p(φ) = |ψ(φ)|².
    pub fn density(&self, phi: f64) -> f64 {
        self.evaluate(phi).norm_sqr()
    }

    /// (l̂_z ψ)(φ) = Σ m c_m e^{imφ}/√(2π).
    pub fn evaluate_lz(&self, phi: f64) -> Complex64 {
        let phi = reduce_angle(phi);
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in self.coeffs() {
            acc += c * m as f64 * Complex64::from_polar(1.0, m as f64 * phi);
        }
        acc / TWO_PI.sqrt()
    }

    /// Rotate the density by θ₀: c_m → c_m e^{-imθ₀}, so p(φ) → p(φ - θ₀).
    pub fn rotated(&self, theta0: f64) -> Self {
        let coeffs = self
            .coeffs()
            .map(|(m, c)| c * Complex64::from_polar(1.0, -(m as f64) * theta0))
            .collect();
        Self {
            m_min: self.m_min,
            coeffs,
            label: self.label.clone(),
        }
    }

    /// Drop coefficients with |m| > mmax and renormalize.
    pub fn truncated(&self, mmax: i64) -> Result<Self> {
        let coeffs: Vec<(i64, Complex64)> =
            self.coeffs().filter(|(m, _)| m.abs() <= mmax).collect();
        if coeffs.is_empty() {
            return Err(Error::DegenerateState(format!(
                "truncation to |m| <= {mmax} leaves no coefficients"
            )));
        }
        let m_min = coeffs[0].0;
        Self::normalized(m_min, coeffs.into_iter().map(|(_, c)| c).collect(), self.label.clone())
    }
}

/// Trigonometric-state flavor: ψ ∝ sin(kφ) or cos(kφ).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Phase {
    Sin,
    Cos,
}

/// Angular-momentum eigenstate ψ_m(φ) = e^{imφ}/√(2π); uniform density 1/2π.
pub fn make_eigenstate(m: i64) -> Result<CircleState> {
    if m.abs() > M_CAP {
        return Err(Error::ParameterRange(format!(
            "eigenstate index |{m}| exceeds cap {M_CAP}"
        )));
    }
    CircleState::new(m, vec![Complex64::new(1.0, 0.0)], Some(format!("psi_{m}")))
}

/// ψ(φ) = sin(kφ)/√π or cos(kφ)/√π; two coefficients at m = ±k.
pub fn make_trig(harmonic: i64, phase: Phase) -> Result<CircleState> {
    if harmonic < 1 {
        return Err(Error::ParameterRange(format!(
            "trig harmonic must be >= 1, got {harmonic}"
        )));
    }
    if harmonic > M_CAP {
        return Err(Error::ParameterRange(format!(
            "trig harmonic {harmonic} exceeds cap {M_CAP}"
        )));
    }
    let k = harmonic as usize;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * k + 1];
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let (label, c_plus, c_minus) = match phase {
        // sin(kφ)/√π = (-i c_{+k} + i c_{-k})/√2 in the e^{imφ}/√(2π) basis
        Phase::Sin => (
            format!("psi_s{harmonic}"),
            Complex64::new(0.0, -inv_sqrt2),
            Complex64::new(0.0, inv_sqrt2),
        ),
        Phase::Cos => (
            format!("psi_c{harmonic}"),
            Complex64::new(inv_sqrt2, 0.0),
            Complex64::new(inv_sqrt2, 0.0),
        ),
    };
    coeffs[2 * k] = c_plus;
    coeffs[0] = c_minus;
    let label = match (harmonic, phase) {
        (1, Phase::Sin) => "psi_s".to_string(),
        (1, Phase::Cos) => "psi_c".to_string(),
        _ => label,
    };
    CircleState::new(-(harmonic), coeffs, Some(label))
}

/// Coherent state |ξ⟩ on the circle, ξ = e^{l+iθ}: c_m ∝ ξ^{-m} e^{-m²/2}.
///
/// Truncation keeps the dropped tail probability below `TAIL_TOL`.
pub fn make_coherent(l: f64, theta: f64) -> Result<CircleState> {
    if !l.is_finite() || !theta.is_finite() {
        return Err(Error::ParameterRange("coherent parameters must be finite".into()));
    }
    if l.abs() > 10.0 {
        return Err(Error::ParameterRange(format!(
            "|l| = {} exceeds 10; truncation size would explode",
            l.abs()
        )));
    }
    let (m_min, coeffs) = coherent_coeffs(l, theta)?;
    CircleState::normalized(m_min, coeffs, Some(format!("cs(l={l},theta={theta})")))
}

/// Unnormalized coherent coefficients over a tail-safe m window.
///
/// |c_m|² ∝ e^{-(m+l)²} (up to the constant e^{l²}), a Gaussian centered at
/// m = -l, so a half-width of 7 keeps the relative tail below 1e-16.
fn coherent_coeffs(l: f64, theta: f64) -> Result<(i64, Vec<Complex64>)> {
    let center = (-l).round() as i64;
    let half_width: i64 = 7;
    let m_min = center - half_width;
    let m_max = center + half_width;
    if m_min < -M_CAP || m_max > M_CAP {
        return Err(Error::ParameterRange(format!(
            "coherent m range [{m_min}, {m_max}] exceeds cap {M_CAP}"
        )));
    }
    let coeffs = (m_min..=m_max)
        .map(|m| {
            let mf = m as f64;
            // ξ^{-m} e^{-m²/2} = e^{-ml - m²/2} e^{-imθ}; pull out the
            // m-independent e^{l²/2} so magnitudes stay O(1)
            let mag = (-0.5 * (mf + l) * (mf + l)).exp();
            Complex64::from_polar(mag, -mf * theta)
        })
        .collect();
    Ok((m_min, coeffs))
}

/// Schrödinger cat state |ξ⟩ - |-ξ⟩, normalized; odd-m support only.
pub fn make_cat(l: f64, theta: f64) -> Result<CircleState> {
    if l.abs() > 10.0 {
        return Err(Error::ParameterRange(format!(
            "|l| = {} exceeds 10; truncation size would explode",
            l.abs()
        )));
    }
    let (m_min, coeffs) = coherent_coeffs(l, theta)?;
    // -ξ = e^{l + i(θ+π)} flips the sign of odd-m terms, so the difference
    // doubles odd terms and cancels even ones exactly
    let coeffs: Vec<Complex64> = coeffs
        .into_iter()
        .enumerate()
        .map(|(i, c)| {
            let m = m_min + i as i64;
            if m.rem_euclid(2) == 0 {
                Complex64::new(0.0, 0.0)
            } else {
                2.0 * c
            }
        })
        .collect();
    let norm_sq: f64 = coeffs.iter().map(|c| c.norm_sqr()).sum();
    if norm_sq.sqrt() < 1e-12 {
        return Err(Error::DegenerateState(
            "cat superposition cancels to zero norm".into(),
        ));
    }
    CircleState::normalized(m_min, coeffs, Some(format!("cat(l={l},theta={theta})")))
}

/// Two-peak state ψ(φ) = (offset + sin²φ)²/√N; exact finite series, |m| ≤ 4.
pub fn make_density_poly(offset: f64) -> Result<CircleState> {
    if !(offset > 0.0) {
        return Err(Error::ParameterRange(format!(
            "density_poly offset must be > 0, got {offset}"
        )));
    }
    // (a + sin²φ)² = (A + B cos 2φ)² with A = a + 1/2, B = -1/2
    //             = A² + B²/2 + 2AB cos 2φ + (B²/2) cos 4φ
    let a_term = offset + 0.5;
    let b_term = -0.5;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 9];
    coeffs[4] = Complex64::new(a_term * a_term + b_term * b_term / 2.0, 0.0); // m = 0
    coeffs[2] = Complex64::new(a_term * b_term, 0.0); // m = -2
    coeffs[6] = Complex64::new(a_term * b_term, 0.0); // m = +2
    coeffs[0] = Complex64::new(b_term * b_term / 4.0, 0.0); // m = -4
    coeffs[8] = Complex64::new(b_term * b_term / 4.0, 0.0); // m = +4
    CircleState::normalized(-4, coeffs, Some(format!("psi_s4(offset={offset})")))
}

/// Ingest wavefunction samples on the uniform grid φ_j = -π + 2πj/N
/// via discrete Fourier analysis; the result is normalized.
pub fn make_from_samples(values: &[Complex64]) -> Result<CircleState> {
    let n = values.len();
    if n < 4 {
        return Err(Error::ParameterRange(format!(
            "need at least 4 samples, got {n}"
        )));
    }
    if values.iter().all(|v| v.norm_sqr() == 0.0) {
        return Err(Error::DegenerateState("all samples are zero".into()));
    }
    if n as i64 / 2 > M_CAP {
        return Err(Error::ParameterRange(format!(
            "grid size {n} implies |m| beyond cap {M_CAP}"
        )));
    }
    let m_min = -((n / 2) as i64);
    let m_max = m_min + n as i64 - 1;
    let coeffs: Vec<Complex64> = (m_min..=m_max)
        .map(|m| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, &v) in values.iter().enumerate() {
                let phi_j = -PI + TWO_PI * j as f64 / n as f64;
                acc += v * Complex64::from_polar(1.0, -(m as f64) * phi_j);
            }
            acc * TWO_PI.sqrt() / n as f64
        })
        .collect();
    CircleState::normalized(m_min, coeffs, Some("samples".to_string()))
}

/// Declarative state descriptor, the CLI's file format (JSON).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StateSpec {
    #[serde(flatten)]
    pub kind: StateKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StateKind {
    Eigenstate { m: i64 },
    Trig { harmonic: i64, phase: Phase },
    Coherent { l: f64, theta: f64 },
    Cat { l: f64, theta: f64 },
    DensityPoly { offset: f64 },
    /// Explicit (m, Re c, Im c) triples; m must be distinct.
    Fourier { coeffs: Vec<(i64, f64, f64)> },
    /// Wavefunction samples (Re, Im) on the uniform grid φ_j = -π + 2πj/N.
    Samples { values: Vec<(f64, f64)> },
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("state spec serializes")
    }

    /// Build the state. `normalize` permits rescaling of explicit `fourier`
    /// coefficients whose norm is off; closed-form builders always normalize.
    pub fn build(&self, normalize: bool) -> Result<CircleState> {
        let state = match &self.kind {
            StateKind::Eigenstate { m } => make_eigenstate(*m)?,
            StateKind::Trig { harmonic, phase } => make_trig(*harmonic, *phase)?,
            StateKind::Coherent { l, theta } => make_coherent(*l, *theta)?,
            StateKind::Cat { l, theta } => make_cat(*l, *theta)?,
            StateKind::DensityPoly { offset } => make_density_poly(*offset)?,
            StateKind::Fourier { coeffs } => build_fourier(coeffs, normalize)?,
            StateKind::Samples { values } => {
                let samples: Vec<Complex64> =
                    values.iter().map(|&(re, im)| Complex64::new(re, im)).collect();
                make_from_samples(&samples)?
            }
        };
        let state = match self.truncation {
            Some(t) => state.truncated(t)?,
            None => state,
        };
        Ok(match &self.label {
            Some(l) => state.with_label(l.clone()),
            None => state,
        })
    }
}

fn build_fourier(triples: &[(i64, f64, f64)], normalize: bool) -> Result<CircleState> {
    if triples.is_empty() {
        return Err(Error::Parse("fourier spec has no coefficients".into()));
    }
    let mut ms: Vec<i64> = triples.iter().map(|t| t.0).collect();
    ms.sort_unstable();
    if ms.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::Parse("fourier spec has duplicate m indices".into()));
    }
    let m_min = *ms.first().unwrap();
    let m_max = *ms.last().unwrap();
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (m_max - m_min + 1) as usize];
    for &(m, re, im) in triples {
        coeffs[(m - m_min) as usize] = Complex64::new(re, im);
    }
    if normalize {
        CircleState::normalized(m_min, coeffs, None)
    } else {
        CircleState::new(m_min, coeffs, None)
    }
}

/// Built-in states from the figure catalog.
pub fn catalog() -> Vec<(&'static str, StateSpec)> {
    fn spec(kind: StateKind) -> StateSpec {
        StateSpec {
            kind,
            truncation: None,
            label: None,
        }
    }
    vec![
        ("uniform", spec(StateKind::Eigenstate { m: 0 })),
        (
            "psi_s",
            spec(StateKind::Trig {
                harmonic: 1,
                phase: Phase::Sin,
            }),
        ),
        (
            "psi_c",
            spec(StateKind::Trig {
                harmonic: 1,
                phase: Phase::Cos,
            }),
        ),
        (
            "psi_s2",
            spec(StateKind::Trig {
                harmonic: 2,
                phase: Phase::Sin,
            }),
        ),
        ("psi_s4", spec(StateKind::DensityPoly { offset: 0.2 })),
        ("cs", spec(StateKind::Coherent { l: 0.0, theta: 0.0 })),
        ("cat", spec(StateKind::Cat { l: 0.0, theta: 0.0 })),
    ]
}

/// Look up a catalog state by name.
pub fn catalog_spec(name: &str) -> Option<StateSpec> {
    catalog().into_iter().find(|(n, _)| *n == name).map(|(n, s)| StateSpec {
        label: Some(n.to_string()),
        ..s
    })
}
