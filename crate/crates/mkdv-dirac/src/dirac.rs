//! Numerical solution of the zero-energy Dirac system and location of the
//! bound transverse momenta.
//!
//! With ψ_B = i φ_B the coupled first-order system
//!
//! ```text
//!   (V - ε) ψ_A - i (ψ_B' + k_y ψ_B) = 0
//!   (V - ε) ψ_B - i (ψ_A' - k_y ψ_A) = 0,        ε = 0,
//! ```
//!
//! becomes real and traceless:
//!
//! ```text
//!   φ_A' =  k_y φ_A + V φ_B
//!   φ_B' = -V φ_A - k_y φ_B.
//! ```
//!
//! Tracelessness makes the Wronskian of two solutions x-independent and the
//! one-period transfer matrix unimodular with a real trace, which is what the
//! shooting determinant and the monodromy analysis respectively exploit.
//!
//! Bound momenta are zeros of the matching determinant W(k_y) formed from the
//! left- and right-decaying solutions; for potentials with a constant
//! pedestal V∞ the decaying channels are the eigenvectors of the asymptotic
//! system matrix, with decay rate λ = √(k_y² − V∞²).

use crate::error::{Error, Result};
use crate::potentials::PotentialSpec;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

const RENORM_EVERY: usize = 50;
const BISECTION_TOL: f64 = 1e-8;
const BOUNDARY_TOL: f64 = 1e-8;

/// Solver knobs with the documented defaults: 2×10⁵ RK4 steps, automatic
/// domain ±25/k_y_min clipped to ±60, matching point at the origin.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct SolverConfig {
    pub domain: Option<(f64, f64)>,
    pub steps: usize,
    pub match_point: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self { domain: None, steps: 200_000, match_point: 0.0 }
    }
}

/// Domain wide enough that the slowest decay e^{-k_y|x|} reaches ~1e-10,
/// clipped to ±60.
pub fn default_domain(ky_min: f64) -> (f64, f64) {
    let half = (25.0 / ky_min.abs().max(1e-6)).min(60.0);
    (-half, half)
}

/// Two-component wavefunction on a position grid. ψ_B carries its intrinsic
/// factor of i relative to the real integration variables.
#[derive(Debug, Clone)]
pub struct SpinorState {
    pub xs: Vec<f64>,
    pub psi_a: Vec<Complex64>,
    pub psi_b: Vec<Complex64>,
    pub ky: f64,
    pub energy: f64,
}

impl SpinorState {
    /// max(|ψ_A|, |ψ_B|) pointwise.
    pub fn magnitude(&self) -> Vec<f64> {
        self.psi_a
            .iter()
            .zip(&self.psi_b)
            .map(|(a, b)| a.norm().max(b.norm()))
            .collect()
    }

    /// Log-magnitude slope fitted over the first decade of growth away from
    /// the given endpoint; a bound state should return ≈ +k_y at the left
    /// end and ≈ -k_y at the right end (zero background).
    pub fn endpoint_log_slope(&self, left: bool) -> f64 {
        let mag = self.magnitude();
        let n = mag.len();
        let idx: Vec<usize> = if left { (0..n).collect() } else { (0..n).rev().collect() };
        let m0 = mag[idx[0]].max(1e-300);
        let mut sel = Vec::new();
        for &i in &idx {
            if mag[i] > 10.0 * m0 {
                break;
            }
            if mag[i] > 0.0 {
                sel.push((self.xs[i], mag[i].ln()));
            }
        }
        if sel.len() < 2 {
            return f64::NAN;
        }
        let n_f = sel.len() as f64;
        let sx: f64 = sel.iter().map(|p| p.0).sum::<f64>() / n_f;
        let sy: f64 = sel.iter().map(|p| p.1).sum::<f64>() / n_f;
        let mut num = 0.0;
        let mut den = 0.0;
        for (x, y) in sel {
            num += (x - sx) * (y - sy);
            den += (x - sx) * (x - sx);
        }
        num / den
    }
}

/// One RK4 propagation of the real system. Records (φ_A, φ_B, log-scale)
/// per node when a recorder is supplied; renormalizes every
/// [`RENORM_EVERY`] steps by a positive factor so directions stay continuous.
fn propagate(
    v: &dyn Fn(f64) -> Result<f64>,
    ky: f64,
    x0: f64,
    x1: f64,
    steps: usize,
    init: [f64; 2],
    mut recorder: Option<&mut Vec<(f64, f64, f64)>>,
) -> Result<([f64; 2], f64)> {
    let h = (x1 - x0) / steps as f64;
    let mut y = init;
    let mut log_scale = 0.0f64;
    let rhs = |x: f64, y: [f64; 2]| -> Result<[f64; 2]> {
        let vx = v(x)?;
        Ok([ky * y[0] + vx * y[1], -vx * y[0] - ky * y[1]])
    };
    if let Some(rec) = recorder.as_deref_mut() {
        rec.push((y[0], y[1], log_scale));
    }
    for i in 0..steps {
        let x = x0 + h * i as f64;
        let k1 = rhs(x, y)?;
        let k2 = rhs(x + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]])?;
        let k3 = rhs(x + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]])?;
        let k4 = rhs(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]])?;
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::IntegrationOverflow(x));
        }
        if (i + 1) % RENORM_EVERY == 0 {
            let scale = y[0].abs().max(y[1].abs());
            if scale > 0.0 {
                y[0] /= scale;
                y[1] /= scale;
                log_scale += scale.ln();
            }
        }
        if let Some(rec) = recorder.as_deref_mut() {
            rec.push((y[0], y[1], log_scale));
        }
    }
    Ok((y, log_scale))
}

/// Decaying-channel initial directions at the two ends. For background V∞
/// the asymptotic matrix [[k, V∞], [-V∞, -k]] has eigenvalues ±λ,
/// λ = √(k² − V∞²); the eigenvector (k+λ, -V∞) grows to the right (decays
/// toward x→-∞) and (V∞, -(k+λ)) decays toward x→+∞.
fn channel_inits(ky: f64, background: f64) -> Result<([f64; 2], [f64; 2])> {
    if ky == 0.0 {
        return Err(Error::InvalidParameter("k_y = 0 is excluded".into()));
    }
    if ky * ky <= background * background {
        return Err(Error::InvalidParameter(format!(
            "no decaying channel: |k_y| = {} must exceed the background |V| = {}",
            ky.abs(),
            background.abs()
        )));
    }
    let lambda = (ky * ky - background * background).sqrt();
    if ky > 0.0 {
        Ok(([ky + lambda, -background], [background, -(ky + lambda)]))
    } else {
        // spin-flip partners of the +|k_y| channels: (φ_A, φ_B) -> (φ_B, -φ_A)
        Ok(([-background, -(ky.abs() + lambda)], [-(ky.abs() + lambda), -background]))
    }
}

fn check_boundary(spec: &PotentialSpec, x: f64) -> Result<()> {
    let deviation = (spec.value_at(x)? - spec.background()).abs();
    if deviation >= BOUNDARY_TOL {
        return Err(Error::DomainTooNarrow { x, deviation });
    }
    Ok(())
}

/// Integrate the zero-energy system from one end of the domain on the
/// decaying channel. The state is scaled to unit max magnitude and stored
/// ascending in x regardless of the integration direction.
pub fn integrate_dirac(
    spec: &PotentialSpec,
    ky: f64,
    from_left: bool,
    domain: (f64, f64),
    steps: usize,
) -> Result<SpinorState> {
    let (x_lo, x_hi) = domain;
    if !(x_lo < x_hi) || steps < 2 {
        return Err(Error::InvalidParameter("need x_lo < x_hi and steps >= 2".into()));
    }
    let (init_l, init_r) = channel_inits(ky, spec.background())?;
    let (x0, x1, init) = if from_left { (x_lo, x_hi, init_l) } else { (x_hi, x_lo, init_r) };
    check_boundary(spec, x0)?;

    let mut rec = Vec::with_capacity(steps + 1);
    let vf = |x: f64| spec.value_at(x);
    propagate(&vf, ky, x0, x1, steps, init, Some(&mut rec))?;

    // peak log-magnitude sets the output normalization
    let peak = rec
        .iter()
        .map(|&(a, b, c)| a.abs().max(b.abs()).max(1e-300).ln() + c)
        .fold(f64::NEG_INFINITY, f64::max);

    let h = (x1 - x0) / steps as f64;
    let mut xs: Vec<f64> = (0..=steps).map(|i| x0 + h * i as f64).collect();
    let mut values = rec;
    if !from_left {
        xs.reverse();
        values.reverse();
    }
    let psi_a = values
        .iter()
        .map(|&(a, _, c)| Complex64::new(a * (c - peak).exp(), 0.0))
        .collect();
    let psi_b = values
        .iter()
        .map(|&(_, b, c)| Complex64::new(0.0, b * (c - peak).exp()))
        .collect();
    Ok(SpinorState { xs, psi_a, psi_b, ky, energy: 0.0 })
}

/// Direction of the decaying solution at the matching point (unit 2-norm;
/// the positive overall scale is dropped).
fn direction_at_match(
    spec: &PotentialSpec,
    ky: f64,
    from_left: bool,
    domain: (f64, f64),
    steps: usize,
    x_match: f64,
) -> Result<[f64; 2]> {
    let (init_l, init_r) = channel_inits(ky, spec.background())?;
    let (x0, init) = if from_left { (domain.0, init_l) } else { (domain.1, init_r) };
    check_boundary(spec, x0)?;
    let vf = |x: f64| spec.value_at(x);
    let (y, _) = propagate(&vf, ky, x0, x_match, steps, init, None)?;
    let norm = (y[0] * y[0] + y[1] * y[1]).sqrt();
    if norm == 0.0 {
        return Err(Error::Evaluation { x: x_match, reason: "vanishing spinor direction".into() });
    }
    Ok([y[0] / norm, y[1] / norm])
}

/// Matching determinant W(k_y) = φ_A^L φ_B^R − φ_B^L φ_A^R at the matching
/// point, both sides normalized there. Continuous in k_y because every
/// rescaling along the way is positive; its sign changes bracket the bound
/// momenta.
pub fn matching_residual(
    spec: &PotentialSpec,
    ky: f64,
    domain: (f64, f64),
    steps: usize,
) -> Result<f64> {
    matching_residual_at(spec, ky, domain, steps, 0.0)
}

fn matching_residual_at(
    spec: &PotentialSpec,
    ky: f64,
    domain: (f64, f64),
    steps: usize,
    x_match: f64,
) -> Result<f64> {
    let half = (steps / 2).max(1);
    let left = direction_at_match(spec, ky, true, domain, half, x_match)?;
    let right = direction_at_match(spec, ky, false, domain, half, x_match)?;
    Ok(left[0] * right[1] - left[1] * right[0])
}

/// A located zero of the matching function, with its bisection half-width.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct FoundMode {
    pub ky: f64,
    pub uncertainty: f64,
}

/// Scan summary for one potential: the matching (or trace) residual per
/// scanned momentum, the bisected zeros, and the comparison against the
/// construction's predictions.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ZeroModeReport {
    pub family: String,
    pub periodic: bool,
    pub ky_grid: Vec<f64>,
    /// W(k_y) for shooting; |tr T(k_y)| − 2 for periodic potentials.
    pub residuals: Vec<f64>,
    pub found_ky: Vec<FoundMode>,
    pub predicted_ky: Vec<f64>,
    /// per prediction: located within tolerance (non-periodic), or inside an
    /// allowed Bloch band (periodic)
    pub matched: Vec<bool>,
    pub match_tolerance: f64,
    pub warnings: Vec<String>,
}

fn bisect<F: FnMut(f64) -> Result<f64>>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    mut f_lo: f64,
) -> Result<FoundMode> {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid)?;
        if f_mid == 0.0 {
            return Ok(FoundMode { ky: mid, uncertainty: 0.5 * (hi - lo) });
        }
        if (f_lo < 0.0) == (f_mid < 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(FoundMode { ky: 0.5 * (lo + hi), uncertainty: 0.5 * (hi - lo) })
}

/// Scan W(k_y) over the range, bracket sign changes and bisect them to 1e-8.
/// Periodic specs delegate to the monodromy analysis: the scanned function
/// becomes |tr T(k_y)| − 2 and the located zeros are band edges.
pub fn find_zero_modes(
    spec: &PotentialSpec,
    ky_range: (f64, f64),
    scan_points: usize,
    config: &SolverConfig,
) -> Result<ZeroModeReport> {
    let (range_lo, range_hi) = ky_range;
    if !(range_lo > 0.0 && range_hi > range_lo) {
        return Err(Error::InvalidParameter(format!(
            "k_y range must be positive and increasing, got ({range_lo}, {range_hi})"
        )));
    }
    if scan_points < 2 {
        return Err(Error::InvalidParameter("need at least 2 scan points".into()));
    }
    let mut warnings = Vec::new();

    if spec.is_periodic() {
        return find_band_edges(spec, ky_range, scan_points, config, warnings);
    }

    // shooting needs |k_y| above the pedestal magnitude
    let bg = spec.background().abs();
    let mut lo = range_lo;
    if lo <= bg {
        lo = bg * (1.0 + 1e-6) + 1e-9;
        warnings.push(format!(
            "scan start raised from {range_lo} to {lo:.6} (no decaying channel below the background |V| = {bg})"
        ));
    }
    let domain = config.domain.unwrap_or_else(|| default_domain(lo));
    let steps = config.steps;

    let n = scan_points;
    let ky_grid: Vec<f64> =
        (0..n).map(|i| lo + (range_hi - lo) * i as f64 / (n - 1) as f64).collect();
    let mut residuals = Vec::with_capacity(n);
    for &k in &ky_grid {
        residuals.push(matching_residual_at(spec, k, domain, steps, config.match_point)?);
    }

    let mut found = Vec::new();
    for i in 0..n - 1 {
        if residuals[i] == 0.0 {
            found.push(FoundMode { ky: ky_grid[i], uncertainty: 0.0 });
        } else if (residuals[i] < 0.0) != (residuals[i + 1] < 0.0) {
            let mode = bisect(
                |k| matching_residual_at(spec, k, domain, steps, config.match_point),
                ky_grid[i],
                ky_grid[i + 1],
                residuals[i],
            )?;
            found.push(mode);
        }
    }
    found.sort_by(|a, b| a.ky.total_cmp(&b.ky));

    let tol = 1e-3;
    let mut matched = Vec::new();
    for &pred in spec.predicted_ky() {
        let hit = found.iter().any(|m| (m.ky - pred).abs() <= tol);
        if !hit && pred >= range_lo && pred <= range_hi {
            warnings.push(format!(
                "predicted k_y = {pred} lies in the scan range but no bracket was found \
                 (scan grid may be too coarse)"
            ));
        }
        matched.push(hit);
    }

    Ok(ZeroModeReport {
        family: spec.to_string(),
        periodic: false,
        ky_grid,
        residuals,
        found_ky: found,
        predicted_ky: spec.predicted_ky().to_vec(),
        matched,
        match_tolerance: tol,
        warnings,
    })
}

fn find_band_edges(
    spec: &PotentialSpec,
    ky_range: (f64, f64),
    scan_points: usize,
    config: &SolverConfig,
    mut warnings: Vec<String>,
) -> Result<ZeroModeReport> {
    let steps = config.steps.clamp(2_000, 40_000);
    let n = scan_points;
    let (lo, hi) = ky_range;
    let ky_grid: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let g = |k: f64| -> Result<f64> { Ok(monodromy_trace(spec, k, steps)?.abs() - 2.0) };
    let mut residuals = Vec::with_capacity(n);
    for &k in &ky_grid {
        residuals.push(g(k)?);
    }
    let mut found = Vec::new();
    for i in 0..n - 1 {
        if (residuals[i] < 0.0) != (residuals[i + 1] < 0.0) {
            found.push(bisect(g, ky_grid[i], ky_grid[i + 1], residuals[i])?);
        }
    }
    found.sort_by(|a, b| a.ky.total_cmp(&b.ky));

    // a prediction counts as matched when it sits in an allowed band
    // (or at an edge, within trace tolerance)
    let tol = 1e-6;
    let mut matched = Vec::new();
    for &pred in spec.predicted_ky() {
        let trace_excess = g(pred)?;
        let allowed = trace_excess <= tol;
        if !allowed {
            warnings.push(format!(
                "predicted k_y = {pred} is in a forbidden region: |tr T| - 2 = {trace_excess:.3e}"
            ));
        }
        matched.push(allowed);
    }

    Ok(ZeroModeReport {
        family: spec.to_string(),
        periodic: true,
        ky_grid,
        residuals,
        found_ky: found,
        predicted_ky: spec.predicted_ky().to_vec(),
        matched,
        match_tolerance: tol,
        warnings,
    })
}

/// Assemble a bound-state wavefunction at a located momentum: integrate from
/// both ends to the matching point and splice the right piece onto the left
/// with the matching scale.
pub fn bound_state(
    spec: &PotentialSpec,
    ky: f64,
    domain: (f64, f64),
    steps: usize,
) -> Result<SpinorState> {
    let half = (steps / 2).max(2);
    let x_match = 0.0;
    let left = integrate_dirac(spec, ky, true, (domain.0, x_match), half)?;
    let right = integrate_dirac(spec, ky, false, (x_match, domain.1), half)?;

    // match on the dominant component at the splice point
    let la = *left.psi_a.last().unwrap();
    let lb = *left.psi_b.last().unwrap();
    let ra = right.psi_a[0];
    let rb = right.psi_b[0];
    let scale = if ra.norm() >= rb.norm() { la / ra } else { lb / rb };

    let mut xs = left.xs.clone();
    let mut psi_a = left.psi_a.clone();
    let mut psi_b = left.psi_b.clone();
    for i in 1..right.xs.len() {
        xs.push(right.xs[i]);
        psi_a.push(right.psi_a[i] * scale);
        psi_b.push(right.psi_b[i] * scale);
    }
    let peak = psi_a
        .iter()
        .zip(&psi_b)
        .map(|(a, b)| a.norm().max(b.norm()))
        .fold(0.0f64, f64::max);
    for v in psi_a.iter_mut().chain(psi_b.iter_mut()) {
        *v /= peak;
    }
    Ok(SpinorState { xs, psi_a, psi_b, ky, energy: 0.0 })
}

/// Apply the decoupled second-order operators [-d²/dx² - V² ∓ iV' + k_y²] to
/// ψ₁,₂ = ψ_A ± ψ_B by finite differences and return the max-abs residual
/// relative to the component magnitude — an independent consistency check on
/// the first-order integration.
pub fn schrodinger_form_check(spec: &PotentialSpec, ky: f64, state: &SpinorState) -> Result<f64> {
    let xs = &state.xs;
    let n = xs.len();
    if n < 5 {
        return Err(Error::InvalidParameter("state grid too small".into()));
    }
    let h = xs[1] - xs[0];
    let vs: Vec<f64> = xs.iter().map(|&x| spec.value_at(x)).collect::<Result<_>>()?;
    let psi1: Vec<Complex64> = state.psi_a.iter().zip(&state.psi_b).map(|(a, b)| a + b).collect();
    let psi2: Vec<Complex64> = state.psi_a.iter().zip(&state.psi_b).map(|(a, b)| a - b).collect();

    let mut worst = 0.0f64;
    for (psi, sign) in [(&psi1, -1.0), (&psi2, 1.0)] {
        let scale = psi.iter().map(|z| z.norm()).fold(0.0f64, f64::max).max(1e-300);
        for i in 1..n - 1 {
            let second = (psi[i - 1] - 2.0 * psi[i] + psi[i + 1]) / (h * h);
            let vprime = (vs[i + 1] - vs[i - 1]) / (2.0 * h);
            let effective = Complex64::new(-vs[i] * vs[i] + ky * ky, sign * vprime);
            let r = -second + effective * psi[i];
            worst = worst.max(r.norm() / scale);
        }
    }
    Ok(worst)
}

/// Difference between the solution at -k_y (with swapped channels) and the
/// component swap of the +k_y solution, after normalization. The system is
/// exactly invariant under k_y → -k_y with ψ_A ↔ ψ_B, so this sits at
/// integration roundoff.
pub fn spin_flip_check(spec: &PotentialSpec, ky: f64) -> Result<f64> {
    if ky == 0.0 {
        return Err(Error::InvalidParameter("k_y = 0 is excluded".into()));
    }
    let domain = default_domain(ky);
    let steps = 40_000;
    let init_plus = [1.0, 0.25];
    // (φ_A, φ_B) -> (φ_B, -φ_A) is the swap map in the real variables
    let init_minus = [init_plus[1], -init_plus[0]];

    let vf = |x: f64| spec.value_at(x);
    let mut rec_plus = Vec::new();
    let mut rec_minus = Vec::new();
    propagate(&vf, ky, domain.0, domain.1, steps, init_plus, Some(&mut rec_plus))?;
    propagate(&vf, -ky, domain.0, domain.1, steps, init_minus, Some(&mut rec_minus))?;

    let mut worst = 0.0f64;
    for (&(pa, pb, pc), &(ma, mb, mc)) in rec_plus.iter().zip(&rec_minus) {
        // renormalization scales agree since max(|φ_B|, |-φ_A|) = max(|φ_A|, |φ_B|)
        let d = ((mb + pa).abs()).max((ma - pb).abs()).max((mc - pc).abs());
        worst = worst.max(d);
    }
    Ok(worst)
}

/// PT condition on the decoupled effective potentials
/// V₁,₂ = -V² ∓ iV' + k_y²: for even V they satisfy V_i(-x) = conj(V_i(x)).
/// Returns the max violation over a symmetric grid of the given half-width;
/// a non-even potential is reported as an error carrying the violation.
pub fn pt_symmetry_check(spec: &PotentialSpec, ky: f64, half_width: f64, n: usize) -> Result<f64> {
    let n = if n % 2 == 0 { n + 1 } else { n };
    let xs = crate::potentials::linspace(-half_width, half_width, n);
    let vs: Vec<f64> = xs.iter().map(|&x| spec.value_at(x)).collect::<Result<_>>()?;
    pt_residual_of_values(&vs, xs[1] - xs[0], ky)
}

/// Value-level PT check used by [`pt_symmetry_check`] and the negative
/// controls; `vs` must sample a symmetric grid.
pub fn pt_residual_of_values(vs: &[f64], h: f64, ky: f64) -> Result<f64> {
    let n = vs.len();
    let scale = vs.iter().fold(0.0f64, |acc, v| acc.max(v.abs())).max(1.0);
    let mut evenness = 0.0f64;
    for i in 0..n {
        evenness = evenness.max((vs[i] - vs[n - 1 - i]).abs());
    }
    if evenness > 1e-10 * scale {
        return Err(Error::NotEven { violation: evenness });
    }
    let mut worst = 0.0f64;
    for i in 1..n - 1 {
        let j = n - 1 - i;
        if j == 0 || j == n - 1 {
            continue;
        }
        let vp_i = (vs[i + 1] - vs[i - 1]) / (2.0 * h);
        let vp_j = (vs[j + 1] - vs[j - 1]) / (2.0 * h);
        for sign in [-1.0, 1.0] {
            let v_here = Complex64::new(-vs[i] * vs[i] + ky * ky, sign * vp_i);
            let v_mirror = Complex64::new(-vs[j] * vs[j] + ky * ky, sign * vp_j);
            worst = worst.max((v_mirror - v_here.conj()).norm());
        }
    }
    Ok(worst)
}

/// Trace of the one-period transfer matrix at momentum k_y. Real by the
/// structure of the real system; |tr T| ≤ 2 marks an allowed Bloch state at
/// ε = 0 and |tr T| = 2 a band edge.
pub fn monodromy_trace(spec: &PotentialSpec, ky: f64, steps: usize) -> Result<f64> {
    let period = spec.period().ok_or(Error::NotPeriodic)?;
    monodromy_trace_of(&|x| spec.value_at(x), ky, 0.0, period, steps)
}

/// Transfer-matrix trace for an arbitrary potential treated as periodic with
/// the given period.
pub fn monodromy_trace_of(
    v: &dyn Fn(f64) -> Result<f64>,
    ky: f64,
    x0: f64,
    period: f64,
    steps: usize,
) -> Result<f64> {
    if !(period > 0.0) {
        return Err(Error::InvalidParameter("period must be positive".into()));
    }
    // two independent columns, no renormalization (the trace needs scales)
    let col0 = propagate_no_renorm(v, ky, x0, x0 + period, steps, [1.0, 0.0])?;
    let col1 = propagate_no_renorm(v, ky, x0, x0 + period, steps, [0.0, 1.0])?;
    Ok(col0[0] + col1[1])
}

fn propagate_no_renorm(
    v: &dyn Fn(f64) -> Result<f64>,
    ky: f64,
    x0: f64,
    x1: f64,
    steps: usize,
    init: [f64; 2],
) -> Result<[f64; 2]> {
    let h = (x1 - x0) / steps as f64;
    let mut y = init;
    let rhs = |x: f64, y: [f64; 2]| -> Result<[f64; 2]> {
        let vx = v(x)?;
        Ok([ky * y[0] + vx * y[1], -vx * y[0] - ky * y[1]])
    };
    for i in 0..steps {
        let x = x0 + h * i as f64;
        let k1 = rhs(x, y)?;
        let k2 = rhs(x + 0.5 * h, [y[0] + 0.5 * h * k1[0], y[1] + 0.5 * h * k1[1]])?;
        let k3 = rhs(x + 0.5 * h, [y[0] + 0.5 * h * k2[0], y[1] + 0.5 * h * k2[1]])?;
        let k4 = rhs(x + h, [y[0] + h * k3[0], y[1] + h * k3[1]])?;
        y = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        if !(y[0].is_finite() && y[1].is_finite()) {
            return Err(Error::IntegrationOverflow(x));
        }
    }
    Ok(y)
}
