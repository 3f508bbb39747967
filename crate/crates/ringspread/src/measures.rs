//! Delocalization measures, packet centers and uncertainty relations.
//!
//! Old measures: the centroid-based tilde measure 1 - |⟨e^{iφ}⟩|², the sin/cos
//! variances, and the logarithmic Kowalski-Rembieliński pair. New measures:
//! the arithmetic mean (a), the global minimum (b) and the packet-center
//! value (c) of the windowed variance Dφ(φ₀).

use crate::circle_state::{reduce_angle, CircleState};
use crate::error::Result;
use crate::numerics::{fixed_points, minimize_periodic, trapezoid_average, FixedPoints, Minimum, ScanGrid};
use crate::windowed_moments::{
    exp_2lz_moments, expectation_exp_ikphi, lz_moments, trig_moments, WindowEngine,
};

/// |⟨U²⟩| below this reports Δ²(φ̂) = +∞.
pub const KR_INFINITY_THRESHOLD: f64 = 1e-15;

/// Packet centers: either every point (uniform density) or an explicit set.
#[derive(Debug, Clone, PartialEq)]
pub enum Centers {
    AllPoints,
    Points(Vec<f64>),
}

/// All scalar measures for one state.
#[derive(Debug, Clone)]
pub struct MeasureReport {
    pub label: Option<String>,
    /// Δ̃²φ = 1 - |⟨e^{iφ}⟩|², in [0, 1].
    pub tilde_sq: f64,
    /// Δ²(φ̂) = -¼ ln|⟨U²⟩|²; +∞ when ⟨U²⟩ vanishes.
    pub kr_phi: f64,
    /// Δ²(l̂_z) = ¼ ln(⟨e^{-2l_z}⟩⟨e^{2l_z}⟩).
    pub kr_lz: f64,
    /// ₐΔ²φ, the mean of Dφ(φ₀).
    pub a_measure: f64,
    /// ᵦΔ²φ, the minimum of Dφ(φ₀).
    pub b_measure: f64,
    pub b_argmins: Vec<f64>,
    pub b_degenerate: bool,
    /// ꞓΔ²φ, Dφ at the selected packet centers.
    pub c_measure: f64,
    /// All fixed points of Mφ(φ₀) = φ₀.
    pub centers: Centers,
    /// The subset of centers achieving the global minimum of Dφ.
    pub selected_centers: Centers,
    pub lz_mean: f64,
    pub lz_variance: f64,
    /// ₐ(Δl_zφ)², the mean of (Re G)².
    pub mean_sq_cov: f64,
    /// ₐ(Im G)², the mean of (Im G)².
    pub mean_sq_img: f64,
}

/// Δ̃²φ = 1 - |⟨e^{iφ}⟩|².
pub fn measure_tilde(state: &CircleState) -> f64 {
    1.0 - expectation_exp_ikphi(state, 1).norm_sqr()
}

/// (Δ²(φ̂), Δ²(l̂_z)) of the logarithmic pair.
pub fn measure_kr(state: &CircleState) -> Result<(f64, f64)> {
    let u2 = expectation_exp_ikphi(state, 2);
    let kr_phi = if u2.norm() < KR_INFINITY_THRESHOLD {
        f64::INFINITY
    } else {
        -0.25 * u2.norm_sqr().ln()
    };
    let (plus, minus) = exp_2lz_moments(state)?;
    let kr_lz = 0.25 * (plus * minus).ln();
    Ok((kr_phi, kr_lz))
}

/// ₐΔ²φ = (1/2π) ∫ Dφ(φ₀) dφ₀, by the trapezoid rule (Dφ is a trigonometric
/// polynomial in φ₀, so this is spectrally accurate).
pub fn measure_a(state: &CircleState, grid: &ScanGrid) -> f64 {
    let engine = WindowEngine::new(state);
    trapezoid_average(|phi0| engine.variance_phi(phi0), grid)
}

/// ᵦΔ²φ, the global minimum of Dφ(φ₀) with all tied argmins.
pub fn measure_b(state: &CircleState, grid: &ScanGrid) -> Result<Minimum> {
    let engine = WindowEngine::new(state);
    minimize_periodic(|phi0| engine.variance_phi(phi0), grid, 1e-12)
}

/// All packet centers, the fixed points of Mφ(φ₀) = φ₀.
pub fn packet_centers(state: &CircleState, grid: &ScanGrid) -> Result<Centers> {
    let engine = WindowEngine::new(state);
    let fp = fixed_points(|phi0| engine.mean_phi(phi0), grid)?;
    Ok(match fp {
        FixedPoints::AllPoints => Centers::AllPoints,
        FixedPoints::Roots(roots) => Centers::Points(roots),
    })
}

/// Whether the centroid angle (when the centroid exists) appears among the
/// given centers; the uniform case trivially passes.
pub fn centroid_among_centers(state: &CircleState, centers: &Centers) -> bool {
    let e1 = expectation_exp_ikphi(state, 1);
    if e1.norm() <= 1e-9 {
        return true;
    }
    let centroid_angle = e1.im.atan2(e1.re);
    match centers {
        Centers::AllPoints => true,
        Centers::Points(points) => points.iter().any(|&c| {
            let d = reduce_angle(c - centroid_angle).abs();
            d < 1e-6
        }),
    }
}

/// ꞓΔ²φ: Dφ evaluated at the packet centers, with the global-minimum rule
/// selecting the center subset. Returns (value, selected subset).
pub fn measure_c(state: &CircleState, grid: &ScanGrid) -> Result<(f64, Centers)> {
    let engine = WindowEngine::new(state);
    let centers = packet_centers(state, grid)?;
    match centers {
        Centers::AllPoints => Ok((engine.variance_phi(grid.origin), Centers::AllPoints)),
        Centers::Points(points) => {
            let values: Vec<f64> = points.iter().map(|&c| engine.variance_phi(c)).collect();
            let min = values.iter().cloned().fold(f64::INFINITY, f64::min);
            let tol = 1e-9 * min.abs().max(1.0);
            let selected: Vec<f64> = points
                .iter()
                .zip(&values)
                .filter(|&(_, &v)| v <= min + tol)
                .map(|(&c, _)| c)
                .collect();
            Ok((min, Centers::Points(selected)))
        }
    }
}

/// Full-circle trapezoid averages of (Re G)² and (Im G)².
pub fn mean_sq_cov(state: &CircleState, grid: &ScanGrid) -> (f64, f64) {
    let engine = WindowEngine::new(state);
    let cov_sq = trapezoid_average(
        |phi0| {
            let (re, _) = engine.covariance_lz_phi(phi0);
            re * re
        },
        grid,
    );
    let img_sq = trapezoid_average(
        |phi0| {
            let (_, im) = engine.covariance_lz_phi(phi0);
            im * im
        },
        grid,
    );
    (cov_sq, img_sq)
}

/// Assemble every measure for one state.
pub fn measure_report(state: &CircleState, grid: &ScanGrid) -> Result<MeasureReport> {
    let (kr_phi, kr_lz) = measure_kr(state)?;
    let (lz_mean, lz_variance) = lz_moments(state);
    let a = measure_a(state, grid);
    let b = measure_b(state, grid)?;
    let centers = packet_centers(state, grid)?;
    let (c, selected) = measure_c(state, grid)?;
    let (cov_sq, img_sq) = mean_sq_cov(state, grid);
    Ok(MeasureReport {
        label: state.label().map(str::to_owned),
        tilde_sq: measure_tilde(state),
        kr_phi,
        kr_lz,
        a_measure: a,
        b_measure: b.value,
        b_argmins: b.minima,
        b_degenerate: b.degenerate,
        c_measure: c,
        centers,
        selected_centers: selected,
        lz_mean,
        lz_variance,
        mean_sq_cov: cov_sq,
        mean_sq_img: img_sq,
    })
}

/// Which inequality a [`RelationReport`] row records.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RelationId {
    NietoSin,
    NietoCos,
    TildeProduct,
    SchrodingerWindow,
    SchrodingerA,
    SchrodingerB,
    KrSum,
    SumA,
    SumB,
    SumC,
}

impl RelationId {
    pub fn name(&self) -> &'static str {
        match self {
            RelationId::NietoSin => "nieto_sin",
            RelationId::NietoCos => "nieto_cos",
            RelationId::TildeProduct => "tilde_product",
            RelationId::SchrodingerWindow => "schrodinger_window",
            RelationId::SchrodingerA => "schrodinger_a",
            RelationId::SchrodingerB => "schrodinger_b",
            RelationId::KrSum => "kr_sum",
            RelationId::SumA => "sum_a",
            RelationId::SumB => "sum_b",
            RelationId::SumC => "sum_c",
        }
    }
}

/// One inequality instance: lhs ≥ rhs, with slack = lhs - rhs.
#[derive(Debug, Clone)]
pub struct RelationReport {
    pub id: RelationId,
    /// Reference point for window-resolved relations.
    pub phi0: Option<f64>,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub satisfied: bool,
}

impl RelationReport {
    fn new(id: RelationId, phi0: Option<f64>, lhs: f64, rhs: f64) -> Self {
        let slack = lhs - rhs;
        Self {
            id,
            phi0,
            lhs,
            rhs,
            slack,
            satisfied: slack >= -1e-9,
        }
    }
}

/// How the sum relation for i = c picks its Im G value when a packet has
/// several selected centers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CenterImgMode {
    /// |Im G| at the first selected center.
    #[default]
    FirstCenter,
    /// Mean of |Im G| over the selected centers.
    MeanOverCenters,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct RelationOptions {
    pub center_img: CenterImgMode,
}

/// Evaluate every uncertainty relation for one state.
pub fn relation_report(
    state: &CircleState,
    grid: &ScanGrid,
    phi0_samples: &[f64],
) -> Result<Vec<RelationReport>> {
    relation_report_with(state, grid, phi0_samples, RelationOptions::default())
}

pub fn relation_report_with(
    state: &CircleState,
    grid: &ScanGrid,
    phi0_samples: &[f64],
    opts: RelationOptions,
) -> Result<Vec<RelationReport>> {
    let engine = WindowEngine::new(state);
    let lz_var = engine.lz_variance();
    let trig = trig_moments(state);
    let tilde = measure_tilde(state);
    let (kr_phi, kr_lz) = measure_kr(state)?;
    let a = measure_a(state, grid);
    let b = measure_b(state, grid)?;
    let (c, selected) = measure_c(state, grid)?;
    let (cov_sq, img_sq) = mean_sq_cov(state, grid);

    let mut rows = Vec::new();

    // sin/cos variance inequalities, in the symmetric cross-paired form
    rows.push(RelationReport::new(
        RelationId::NietoSin,
        None,
        lz_var * trig.var_sin,
        0.25 * trig.mean_cos * trig.mean_cos,
    ));
    rows.push(RelationReport::new(
        RelationId::NietoCos,
        None,
        lz_var * trig.var_cos,
        0.25 * trig.mean_sin * trig.mean_sin,
    ));
    rows.push(RelationReport::new(
        RelationId::TildeProduct,
        None,
        lz_var * tilde,
        0.25 * (trig.mean_cos * trig.mean_cos + trig.mean_sin * trig.mean_sin),
    ));

    // windowed Schrödinger-Robertson relation at each requested φ₀
    for &phi0 in phi0_samples {
        let wm = engine.window_moments(phi0);
        rows.push(RelationReport::new(
            RelationId::SchrodingerWindow,
            Some(phi0),
            wm.variance * lz_var - wm.cov_re * wm.cov_re,
            wm.cov_im * wm.cov_im,
        ));
    }

    rows.push(RelationReport::new(
        RelationId::SchrodingerA,
        None,
        a * lz_var - cov_sq,
        img_sq,
    ));
    // for i = b the covariance terms are taken at the minimizer
    let (b_re, b_im) = engine.covariance_lz_phi(b.argmin);
    rows.push(RelationReport::new(
        RelationId::SchrodingerB,
        Some(b.argmin),
        b.value * lz_var - b_re * b_re,
        b_im * b_im,
    ));

    rows.push(RelationReport::new(
        RelationId::KrSum,
        None,
        kr_lz + kr_phi,
        1.0,
    ));

    // sum relations Δ²l_z + ᵢΔ²φ ≥ 2|ᵢIm G|
    rows.push(RelationReport::new(
        RelationId::SumA,
        None,
        lz_var + a,
        2.0 * img_sq.sqrt(),
    ));
    rows.push(RelationReport::new(
        RelationId::SumB,
        Some(b.argmin),
        lz_var + b.value,
        2.0 * b_im.abs(),
    ));
    let c_img = match &selected {
        Centers::AllPoints => {
            let (_, im) = engine.covariance_lz_phi(grid.origin);
            im.abs()
        }
        Centers::Points(points) => match opts.center_img {
            CenterImgMode::FirstCenter => {
                let (_, im) = engine.covariance_lz_phi(points[0]);
                im.abs()
            }
            CenterImgMode::MeanOverCenters => {
                points
                    .iter()
                    .map(|&p| engine.covariance_lz_phi(p).1.abs())
                    .sum::<f64>()
                    / points.len() as f64
            }
        },
    };
    rows.push(RelationReport::new(
        RelationId::SumC,
        None,
        lz_var + c,
        2.0 * c_img,
    ));

    Ok(rows)
}
