//! Electrostatic potential families built from soliton and elliptic solutions
//! of the mKdV and combined KdV–mKdV equations, each carrying the transverse
//! momenta at which the zero-energy Dirac problem is predicted to bind.
//!
//! Units are dimensionless throughout (ħ = v_F = 1), so V(x) ≡ U(x) and the
//! energy parameter ε ≡ E.

use crate::elliptic::{complete_k, jacobi_sncndn, EllipticModulus};
use crate::error::{Error, Result};
use crate::linalg::trace_of_solve;
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Eigenvalue set, norming constants and time for the N-soliton determinant
/// formula. `d0s[n]` is d_n(0); d_n(t) = d_n(0) exp(8 η_n³ t) stays real.
#[derive(Debug, Clone, PartialEq)]
pub struct NSolitonParams {
    etas: Vec<f64>,
    d0s: Vec<f64>,
    t: f64,
}

impl NSolitonParams {
    pub fn new(etas: Vec<f64>, d0s: Vec<f64>, t: f64) -> Result<Self> {
        if etas.is_empty() {
            return Err(Error::InvalidParameter("N-soliton needs N >= 1".into()));
        }
        if etas.len() != d0s.len() {
            return Err(Error::InvalidParameter(format!(
                "got {} eigenvalues but {} norming constants",
                etas.len(),
                d0s.len()
            )));
        }
        for w in etas.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidParameter(format!(
                    "eigenvalues must be strictly increasing, got {} >= {}",
                    w[0], w[1]
                )));
            }
        }
        if etas[0] <= 0.0 || !etas.iter().all(|e| e.is_finite()) {
            return Err(Error::InvalidParameter("eigenvalues must be positive and finite".into()));
        }
        if d0s.iter().any(|d| *d == 0.0 || !d.is_finite()) {
            return Err(Error::InvalidParameter("norming constants must be nonzero and finite".into()));
        }
        if !t.is_finite() {
            return Err(Error::InvalidParameter("time must be finite".into()));
        }
        Ok(Self { etas, d0s, t })
    }

    /// Even, crest-at-origin configuration at t = 0:
    /// d_n(0) = -2 η_n ∏_{m≠n} |(η_n + η_m)/(η_n − η_m)|.
    /// Reproduces -2η sech(2ηx) for N = 1 and -2 sech x for (1/2, 3/2).
    pub fn centered(etas: Vec<f64>) -> Result<Self> {
        let d0s: Vec<f64> = etas
            .iter()
            .map(|&e| {
                let product: f64 = etas
                    .iter()
                    .filter(|&&o| o != e)
                    .map(|&o| ((e + o) / (e - o)).abs())
                    .product();
                -2.0 * e * product
            })
            .collect();
        Self::new(etas, d0s, 0.0)
    }

    pub fn etas(&self) -> &[f64] {
        &self.etas
    }

    pub fn d0s(&self) -> &[f64] {
        &self.d0s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn with_time(&self, t: f64) -> Self {
        Self { etas: self.etas.clone(), d0s: self.d0s.clone(), t }
    }

    fn order(&self) -> usize {
        self.etas.len()
    }

    /// d_n(t) = d_n(0) exp(8 η_n³ t).
    fn d_at_time(&self) -> Vec<f64> {
        self.etas
            .iter()
            .zip(&self.d0s)
            .map(|(&e, &d0)| d0 * (8.0 * e.powi(3) * self.t).exp())
            .collect()
    }

    /// u(x, t) = -2 ∂ₓ arctan[Im det(I+A) / Re det(I+A)] evaluated through
    /// Jacobi's formula as -2 Im tr[(I+A)⁻¹ A′], which is single-valued.
    ///
    /// With ζ_n = iη_n the matrix is I + iB for real B; factoring out the
    /// (positive, real) exponential row scales leaves Im tr unchanged, so
    /// each row is scaled by max(1, e^{2η_n x}) to avoid overflow anywhere.
    pub fn u(&self, x: f64) -> Result<f64> {
        let n = self.order();
        let etas = &self.etas;
        let d = self.d_at_time();
        let mut mat = vec![Complex64::new(0.0, 0.0); n * n];
        let mut der = vec![Complex64::new(0.0, 0.0); n * n];
        for row in 0..n {
            let exponent = 2.0 * etas[row] * x;
            if exponent > 0.0 {
                // row scaled by e^{-2 eta_row x}
                let w_inv = (-exponent).exp();
                for col in 0..n {
                    let g = d[col] / (etas[col] + etas[row]) * w_inv;
                    mat[row * n + col] = Complex64::new(if col == row { 1.0 } else { 0.0 }, g);
                    der[row * n + col] = Complex64::new(0.0, -2.0 * etas[row] * g);
                }
            } else {
                let w = exponent.exp();
                for col in 0..n {
                    let g = d[col] / (etas[col] + etas[row]);
                    mat[row * n + col] = Complex64::new(if col == row { w } else { 0.0 }, g);
                    der[row * n + col] = if col == row {
                        Complex64::new(2.0 * etas[row] * w, 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    };
                }
            }
        }
        let trace = trace_of_solve(&mat, &der, n).ok_or(Error::Evaluation {
            x,
            reason: "determinant of I+A vanished (arctan branch ambiguity)".into(),
        })?;
        Ok(-2.0 * trace.im)
    }
}

/// Two-soliton parameters for the closed three-cosh ratio.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoSolitonParams {
    pub eta1: f64,
    pub eta2: f64,
    pub eps1: f64,
    pub eps2: f64,
}

impl TwoSolitonParams {
    pub fn new(eta1: f64, eta2: f64, eps1: f64, eps2: f64) -> Result<Self> {
        if !(eta1 > 0.0 && eta2 > 0.0 && eta1.is_finite() && eta2.is_finite()) {
            return Err(Error::InvalidParameter("two-soliton eigenvalues must be positive".into()));
        }
        if eta1 == eta2 {
            return Err(Error::InvalidParameter(
                "two-soliton eigenvalues must differ (formula has (eta1-eta2) denominators)".into(),
            ));
        }
        if eta1 > eta2 {
            return Err(Error::InvalidParameter(format!(
                "two-soliton eigenvalues must be ordered eta1 < eta2, got {eta1} > {eta2}"
            )));
        }
        if !(eps1.is_finite() && eps2.is_finite()) {
            return Err(Error::InvalidParameter("eps1, eps2 must be finite".into()));
        }
        Ok(Self { eta1, eta2, eps1, eps2 })
    }

    /// Numerator and denominator of the three-cosh ratio with overall scale
    /// e^{-2(eta1+eta2)|x|} factored out of both, so no exponential ever
    /// overflows. The prefactor 4(η₁+η₂)/(η₁−η₂) multiplies the ratio.
    fn scaled_parts(&self, x: f64) -> (f64, f64) {
        let (e1, e2) = (self.eta1, self.eta2);
        let ax = x.abs();
        let big = 2.0 * (e1 + e2) * ax;
        // cosh(s x) e^{-big}, valid for 0 <= s <= 2(e1+e2)
        let scaled_cosh = |s: f64| 0.5 * ((s * ax - big).exp() + (-s * ax - big).exp());
        let q = (e1 + e2) / (e1 - e2);
        let kappa = 4.0 * e1 * e2 * self.eps1 * self.eps2 / (e1 - e2).powi(2);
        let num = self.eps1 * e1 * scaled_cosh(2.0 * e2) + self.eps2 * e2 * scaled_cosh(2.0 * e1);
        let den = scaled_cosh(2.0 * (e1 + e2)) + kappa * (-big).exp()
            + q * q * scaled_cosh(2.0 * (e1 - e2).abs());
        (4.0 * q * num, den)
    }

    fn value(&self, x: f64) -> Result<f64> {
        let (num, den) = self.scaled_parts(x);
        if den <= 0.0 || !den.is_finite() {
            return Err(Error::Evaluation {
                x,
                reason: format!("two-soliton denominator vanished (scaled value {den:.3e})"),
            });
        }
        Ok(num / den)
    }
}

/// Parameters of the periodic one-gap potential. `a > b >= c >= 0`; the
/// modulus follows m² = (a−b)(a+b+2c)/((a−c)(a+2b+c)) and the sn argument
/// scale is eta = ½√[(a−c)(a+2b+c)], which makes the profile an exact
/// traveling mKdV solution oscillating in [−a, −b]. At b = c the modulus
/// degenerates to 1 and the potential becomes the soliton -a sech(ax).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicOneGapParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    m: f64,
    eta: f64,
}

impl PeriodicOneGapParams {
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return Err(Error::InvalidParameter("one-gap parameters must be finite".into()));
        }
        if !(a > b && b >= c && c >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "one-gap parameters must satisfy a > b >= c >= 0, got ({a}, {b}, {c})"
            )));
        }
        let m_sq = ((a - b) * (a + b + 2.0 * c)) / ((a - c) * (a + 2.0 * b + c));
        if !(0.0..=1.0 + 1e-12).contains(&m_sq) {
            return Err(Error::InvalidParameter(format!(
                "derived modulus squared {m_sq} outside [0, 1]"
            )));
        }
        let eta = 0.5 * ((a - c) * (a + 2.0 * b + c)).sqrt();
        if !(eta > 0.0) {
            return Err(Error::InvalidParameter("derived scale eta must be positive".into()));
        }
        Ok(Self { a, b, c, m: m_sq.min(1.0).sqrt(), eta })
    }

    pub fn modulus(&self) -> f64 {
        self.m
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Momentum of the zero-energy Bloch band edge, (a+c)/2. Coincides with
    /// the soliton bound momentum a/2 in the b = c = 0 limit.
    pub fn band_edge_ky(&self) -> f64 {
        0.5 * (self.a + self.c)
    }

    fn value(&self, x: f64) -> Result<f64> {
        let (a, b, c) = (self.a, self.b, self.c);
        let s = jacobi_sncndn(self.eta * x, self.m).0;
        let s2 = s * s;
        let den = (a - b) * s2 + (a + 2.0 * b + c);
        if den <= 0.0 {
            return Err(Error::Evaluation {
                x,
                reason: format!("one-gap denominator sign change (value {den:.3e})"),
            });
        }
        Ok(((a - b) * (a + b + c) * s2 - a * (a + 2.0 * b + c)) / den)
    }
}

/// Parameters of the elliptic-cosine potential V = -m η cn(ηx, m) with
/// η = √(a/(2m²−1)); requires m > 1/√2 so the scale is real.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeriodicCnParams {
    pub m: f64,
    pub a: f64,
    eta: f64,
}

impl PeriodicCnParams {
    pub fn new(m: EllipticModulus, a: f64) -> Result<Self> {
        let m = m.get();
        if 2.0 * m * m - 1.0 <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "cn potential needs 2m^2 - 1 > 0 (m > 0.7071...), got m = {m}"
            )));
        }
        if !(a > 0.0 && a.is_finite()) {
            return Err(Error::InvalidParameter(format!("cn potential needs a > 0, got {a}")));
        }
        let eta = (a / (2.0 * m * m - 1.0)).sqrt();
        Ok(Self { m, a, eta })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    fn value(&self, x: f64) -> f64 {
        -self.m * self.eta * jacobi_sncndn(self.eta * x, self.m).1
    }
}

/// Combined KdV–mKdV one-soliton parameters. gamma = α/(2√β) and
/// cosθ = α(α² + 4η²β)^{-1/2}; the predicted bound momentum is √(η² + γ²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CombinedParams {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    gamma: f64,
    cos_theta: f64,
    sin_theta: f64,
}

impl CombinedParams {
    pub fn new(alpha: f64, beta: f64, eta: f64) -> Result<Self> {
        if !(beta > 0.0 && beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("combined equation needs beta > 0, got {beta}")));
        }
        if !(eta > 0.0 && eta.is_finite()) {
            return Err(Error::InvalidParameter(format!("combined soliton needs eta > 0, got {eta}")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParameter("alpha must be finite".into()));
        }
        let gamma = alpha / (2.0 * beta.sqrt());
        let cos_theta = alpha / (alpha * alpha + 4.0 * eta * eta * beta).sqrt();
        let sin_theta = (1.0 - cos_theta * cos_theta).sqrt();
        Ok(Self { alpha, beta, eta, gamma, cos_theta, sin_theta })
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn cos_theta(&self) -> f64 {
        self.cos_theta
    }

    pub fn predicted_ky(&self) -> f64 {
        (self.eta * self.eta + self.gamma * self.gamma).sqrt()
    }

    /// The single-well soliton profile -(2η/√β) sinθ / (cosθ + cosh 2ηx).
    /// Its negation is the solitary solution of the combined equation with
    /// the +6αuuₓ sign; the well shape is what the figures display.
    pub fn well_profile(&self, x: f64) -> f64 {
        let denom = self.cos_theta + (2.0 * self.eta * x).cosh();
        if denom.is_infinite() {
            return 0.0;
        }
        -(2.0 * self.eta / self.beta.sqrt()) * self.sin_theta / denom
    }

    /// Solitary solution of u_t + 6αuuₓ + 6βu²uₓ + u_xxx = 0 as a traveling
    /// profile (speed 4η²): the positive bump 4η²(α²+4η²β)^{-1/2}/(cosθ + cosh 2ηξ).
    pub fn gardner_soliton(&self, xi: f64) -> f64 {
        -self.beta.sqrt() * self.well_profile(xi)
    }

    /// Dirac-facing potential √β u(x) − γ: the well on a constant pedestal.
    /// The constant shift moves the asymptotic value to −γ; the bound
    /// momentum sits at √(η² + γ²) with decay rate η.
    fn value(&self, x: f64) -> f64 {
        self.beta.sqrt() * self.well_profile(x) - self.gamma
    }
}

/// The potential family, with family-specific parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    OneSoliton { eta: f64 },
    TwoSoliton(TwoSolitonParams),
    NSoliton(NSolitonParams),
    PeriodicOneGap(PeriodicOneGapParams),
    PeriodicCn(PeriodicCnParams),
    CombinedOneSoliton(CombinedParams),
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::OneSoliton { .. } => "one-soliton",
            Family::TwoSoliton(_) => "two-soliton",
            Family::NSoliton(_) => "n-soliton",
            Family::PeriodicOneGap(_) => "periodic-one-gap",
            Family::PeriodicCn(_) => "periodic-cn",
            Family::CombinedOneSoliton(_) => "combined",
        }
    }
}

/// A named potential family plus its parameters, evaluable at any position,
/// carrying the predicted bound momenta k_y.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialSpec {
    family: Family,
    predicted_ky: Vec<f64>,
    periodic: bool,
    period: Option<f64>,
    /// Asymptotic value of V as |x| -> infinity (0 except for the combined
    /// family, whose pedestal is -gamma). Shooting initialization uses it.
    background: f64,
    negated: bool,
}

/// V(x) = -2η sech(2ηx); one zero-energy bound state at k_y = η.
pub fn one_soliton(eta: f64) -> Result<PotentialSpec> {
    if !(eta > 0.0 && eta.is_finite()) {
        return Err(Error::InvalidParameter(format!("one-soliton needs eta > 0, got {eta}")));
    }
    Ok(PotentialSpec {
        family: Family::OneSoliton { eta },
        predicted_ky: vec![eta],
        periodic: false,
        period: None,
        background: 0.0,
        negated: false,
    })
}

/// The three-cosh ratio with two predicted bound momenta η₁, η₂.
/// Denominator positivity is checked on a coarse grid at construction.
pub fn two_soliton(p: TwoSolitonParams) -> Result<PotentialSpec> {
    // Denominator minimum sits at x = 0, but scan a coarse grid anyway and
    // report the first offending position.
    let x_max = 10.0 / p.eta1.min(p.eta2 - p.eta1).max(1e-3);
    let samples = 512;
    for i in 0..=samples {
        let x = x_max * i as f64 / samples as f64;
        let (_, den) = p.scaled_parts(x);
        if den <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "two-soliton denominator vanishes near x = {x:.6} for eps1*eps2 = {}",
                p.eps1 * p.eps2
            )));
        }
    }
    Ok(PotentialSpec {
        predicted_ky: vec![p.eta1, p.eta2],
        family: Family::TwoSoliton(p),
        periodic: false,
        period: None,
        background: 0.0,
        negated: false,
    })
}

/// N-soliton potential from the determinant formula; N predicted momenta.
pub fn n_soliton(p: NSolitonParams) -> Result<PotentialSpec> {
    Ok(PotentialSpec {
        predicted_ky: p.etas().to_vec(),
        family: Family::NSoliton(p),
        periodic: false,
        period: None,
        background: 0.0,
        negated: false,
    })
}

/// Periodic one-gap potential; period 2K(m)/η (sn² has period 2K). At the
/// b = c degeneration (m = 1) the spec is the non-periodic soliton limit.
pub fn periodic_one_gap(p: PeriodicOneGapParams) -> Result<PotentialSpec> {
    let (periodic, period) = if p.modulus() < 1.0 {
        let k = complete_k(EllipticModulus::new(p.modulus())?)?;
        (true, Some(2.0 * k / p.eta()))
    } else {
        (false, None)
    };
    Ok(PotentialSpec {
        predicted_ky: vec![p.band_edge_ky()],
        family: Family::PeriodicOneGap(p),
        periodic,
        period,
        background: 0.0,
        negated: false,
    })
}

/// Elliptic-cosine potential; period 4K(m)/η. Degenerates to the soliton
/// -η sech(ηx) at m = 1 (non-periodic there).
pub fn periodic_cn(m: EllipticModulus, a: f64) -> Result<PotentialSpec> {
    let p = PeriodicCnParams::new(m, a)?;
    let (periodic, period) = if p.m < 1.0 {
        let k = complete_k(EllipticModulus::new(p.m)?)?;
        (true, Some(4.0 * k / p.eta()))
    } else {
        (false, None)
    };
    Ok(PotentialSpec {
        predicted_ky: vec![p.eta()],
        family: Family::PeriodicCn(p),
        periodic,
        period,
        background: 0.0,
        negated: false,
    })
}

/// Combined KdV-mKdV one-soliton potential with the pedestal −γ; one bound
/// momentum at √(η² + γ²).
pub fn combined_one_soliton(p: CombinedParams) -> Result<PotentialSpec> {
    Ok(PotentialSpec {
        predicted_ky: vec![p.predicted_ky()],
        background: -p.gamma(),
        family: Family::CombinedOneSoliton(p),
        periodic: false,
        period: None,
        negated: false,
    })
}

impl PotentialSpec {
    pub fn family(&self) -> &Family {
        &self.family
    }

    /// Predicted bound momenta, ascending.
    pub fn predicted_ky(&self) -> &[f64] {
        &self.predicted_ky
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn period(&self) -> Option<f64> {
        self.period
    }

    /// Asymptotic V value used to pick the decaying shooting channels.
    pub fn background(&self) -> f64 {
        if self.negated {
            -self.background
        } else {
            self.background
        }
    }

    /// The sign-flipped potential -V. The zero-energy Dirac spectrum is
    /// invariant under this map (the decoupled forms depend on V², V′).
    pub fn negated(&self) -> Self {
        let mut copy = self.clone();
        copy.negated = !copy.negated;
        copy
    }

    pub fn is_negated(&self) -> bool {
        self.negated
    }

    /// V at a single position.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        if !x.is_finite() {
            return Err(Error::Domain(format!("position must be finite, got {x}")));
        }
        let v = match &self.family {
            Family::OneSoliton { eta } => {
                let arg = 2.0 * eta * x;
                -2.0 * eta / arg.cosh()
            }
            Family::TwoSoliton(p) => p.value(x)?,
            Family::NSoliton(p) => p.u(x)?,
            Family::PeriodicOneGap(p) => p.value(x)?,
            Family::PeriodicCn(p) => p.value(x),
            Family::CombinedOneSoliton(p) => p.value(x),
        };
        Ok(if self.negated { -v } else { v })
    }

    /// V on a strictly increasing grid of finite positions; exact formula
    /// evaluation at every node, no interpolation.
    pub fn evaluate(&self, xs: &[f64]) -> Result<Vec<f64>> {
        for w in xs.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::Domain(format!(
                    "grid must be strictly increasing, got {} then {}",
                    w[0], w[1]
                )));
            }
        }
        xs.iter().map(|&x| self.value_at(x)).collect()
    }
}

// --- JSON wire format: {"family": string, "params": object, "t": number} ---

#[derive(Serialize, Deserialize)]
struct SpecWire {
    family: String,
    params: serde_json::Value,
    #[serde(default)]
    t: f64,
}

impl Serialize for PotentialSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde_json::json;
        let (params, t) = match &self.family {
            Family::OneSoliton { eta } => (json!({ "eta": eta }), 0.0),
            Family::TwoSoliton(p) => (
                json!({ "eta1": p.eta1, "eta2": p.eta2, "eps1": p.eps1, "eps2": p.eps2 }),
                0.0,
            ),
            Family::NSoliton(p) => (json!({ "etas": p.etas(), "d0s": p.d0s() }), p.t()),
            Family::PeriodicOneGap(p) => (json!({ "a": p.a, "b": p.b, "c": p.c }), 0.0),
            Family::PeriodicCn(p) => (json!({ "m": p.m, "a": p.a }), 0.0),
            Family::CombinedOneSoliton(p) => {
                (json!({ "alpha": p.alpha, "beta": p.beta, "eta": p.eta }), 0.0)
            }
        };
        SpecWire { family: self.family.name().to_string(), params, t }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for PotentialSpec {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let wire = SpecWire::deserialize(deserializer)?;
        spec_from_wire(&wire).map_err(D::Error::custom)
    }
}

fn field(params: &serde_json::Value, name: &str) -> Result<f64> {
    params
        .get(name)
        .and_then(|v| v.as_f64())
        .ok_or_else(|| Error::InvalidParameter(format!("missing numeric field '{name}'")))
}

fn field_vec(params: &serde_json::Value, name: &str) -> Result<Vec<f64>> {
    params
        .get(name)
        .and_then(|v| v.as_array())
        .map(|a| a.iter().filter_map(|v| v.as_f64()).collect())
        .ok_or_else(|| Error::InvalidParameter(format!("missing numeric array '{name}'")))
}

fn spec_from_wire(wire: &SpecWire) -> Result<PotentialSpec> {
    let p = &wire.params;
    match wire.family.as_str() {
        "one-soliton" => one_soliton(field(p, "eta")?),
        "two-soliton" => two_soliton(TwoSolitonParams::new(
            field(p, "eta1")?,
            field(p, "eta2")?,
            field(p, "eps1")?,
            field(p, "eps2")?,
        )?),
        "n-soliton" => {
            let etas = field_vec(p, "etas")?;
            let d0s = match field_vec(p, "d0s") {
                Ok(v) => v,
                Err(_) => return n_soliton(NSolitonParams::centered(etas)?.with_time(wire.t)),
            };
            n_soliton(NSolitonParams::new(etas, d0s, wire.t)?)
        }
        "periodic-one-gap" => periodic_one_gap(PeriodicOneGapParams::new(
            field(p, "a")?,
            field(p, "b")?,
            field(p, "c")?,
        )?),
        "periodic-cn" => periodic_cn(EllipticModulus::new(field(p, "m")?)?, field(p, "a")?),
        "combined" => combined_one_soliton(CombinedParams::new(
            field(p, "alpha")?,
            field(p, "beta")?,
            field(p, "eta")?,
        )?),
        other => Err(Error::InvalidParameter(format!("unknown potential family '{other}'"))),
    }
}

impl std::fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let sign = if self.negated { "-" } else { "" };
        write!(f, "{}{}", sign, self.family.name())
    }
}

/// Uniformly spaced grid helper used across the crate.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    assert!(n >= 2 && hi > lo);
    let step = (hi - lo) / (n - 1) as f64;
    (0..n).map(|i| lo + step * i as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sech(x: f64) -> f64 {
        1.0 / x.cosh()
    }

    #[test]
    fn one_soliton_values() {
        let spec = one_soliton(0.5).unwrap();
        assert_eq!(spec.value_at(0.0).unwrap(), -1.0, "V(0) = -2*0.5*sech(0)");
        let v = one_soliton(1.0).unwrap().value_at(2.0).unwrap();
        assert!((v + 2.0 * sech(4.0)).abs() < 1e-15, "V(2) = -2 sech 4, got {v}");
        assert_eq!(spec.predicted_ky(), &[0.5]);
        assert!(one_soliton(0.0).is_err());
        assert!(one_soliton(-1.0).is_err());
    }

    #[test]
    fn one_soliton_even_and_decaying() {
        let spec = one_soliton(0.5).unwrap();
        for &x in &[0.3, 1.7, 4.2, 9.9] {
            let (l, r) = (spec.value_at(-x).unwrap(), spec.value_at(x).unwrap());
            assert!((l - r).abs() < 1e-12 * r.abs().max(1.0), "even at {x}");
        }
        assert!(spec.value_at(60.0).unwrap().abs() < 1e-20);
    }

    #[test]
    fn two_soliton_special_is_two_sech() {
        let p = TwoSolitonParams::new(0.5, 1.5, 1.0, 1.0).unwrap();
        let spec = two_soliton(p).unwrap();
        assert!((spec.value_at(0.0).unwrap() + 2.0).abs() < 1e-14, "V(0) = -2");
        for x in linspace(-10.0, 10.0, 2001) {
            let v = spec.value_at(x).unwrap();
            assert!(
                (v + 2.0 * sech(x)).abs() < 1e-10,
                "special case vs -2 sech x at {x}: {v}"
            );
        }
        assert_eq!(spec.predicted_ky(), &[0.5, 1.5]);
    }

    #[test]
    fn two_soliton_rejects_degenerate_and_singular() {
        assert!(TwoSolitonParams::new(1.0, 1.0, 1.0, 1.0).is_err(), "eta1 = eta2");
        assert!(TwoSolitonParams::new(2.0, 1.0, 1.0, 1.0).is_err(), "order");
        // Large opposite-sign eps drives the denominator negative at x = 0.
        let p = TwoSolitonParams::new(0.5, 1.5, 5.0, -5.0).unwrap();
        assert!(two_soliton(p).is_err(), "denominator vanishing must reject");
    }

    #[test]
    fn two_soliton_even_and_finite_everywhere() {
        let p = TwoSolitonParams::new(1.0, 2.0, 0.5, 0.6).unwrap();
        let spec = two_soliton(p).unwrap();
        for &x in &[0.0, 0.4, 1.3, 3.0, 10.0, 40.0, 300.0] {
            let v = spec.value_at(x).unwrap();
            assert!(v.is_finite());
            let w = spec.value_at(-x).unwrap();
            assert!((v - w).abs() < 1e-12 * v.abs().max(1.0), "even at {x}");
        }
        // asymptotic decay at rate 2*eta1
        let v20 = spec.value_at(20.0).unwrap().abs();
        assert!(v20 < (-2.0 * 1.0 * 19.0f64).exp(), "decay e^(-2 eta1 x): {v20:.3e}");
    }

    #[test]
    fn n_soliton_one_matches_closed_form_exactly() {
        for &eta in &[0.3, 0.5, 1.0] {
            let p = NSolitonParams::centered(vec![eta]).unwrap();
            let spec = n_soliton(p).unwrap();
            for x in linspace(-10.0, 10.0, 401) {
                let v = spec.value_at(x).unwrap();
                let closed = -2.0 * eta * sech(2.0 * eta * x);
                assert!(
                    (v - closed).abs() < 1e-12,
                    "N=1 eta={eta} at x={x}: {v} vs {closed}"
                );
            }
        }
    }

    #[test]
    fn n_soliton_two_matches_special_case() {
        let p = NSolitonParams::centered(vec![0.5, 1.5]).unwrap();
        let spec = n_soliton(p).unwrap();
        for x in linspace(-10.0, 10.0, 801) {
            let v = spec.value_at(x).unwrap();
            assert!((v + 2.0 * sech(x)).abs() < 1e-10, "N=2 special at {x}: {v}");
        }
    }

    #[test]
    fn n_soliton_matches_arctan_determinant_route() {
        // Independent oracle: differentiate arctan(Im det(I+A)/Re det(I+A))
        // numerically (branch-unwrapped) and compare with the Jacobi-formula
        // evaluation. A_{mn} = -d_n(t)/(zeta_n+zeta_m) e^{i(zeta_n+zeta_m)x}
        // with zeta_n = i eta_n.
        use num_complex::Complex64 as C64;
        let etas = [0.4, 0.9, 1.3];
        let p = NSolitonParams::centered(etas.to_vec()).unwrap();
        let spec = n_soliton(p.clone()).unwrap();

        let theta = |x: f64| -> f64 {
            let n = etas.len();
            let mut mat = vec![C64::new(0.0, 0.0); n * n];
            for row in 0..n {
                for col in 0..n {
                    let s = etas[row] + etas[col];
                    let a = C64::new(0.0, p.d0s()[col] / s) * (-s * x).exp();
                    mat[row * n + col] = if row == col { C64::new(1.0, 0.0) + a } else { a };
                }
            }
            let d = crate::linalg::det(&mat, n).unwrap();
            d.im.atan2(d.re)
        };

        let dx = 1e-6;
        for &x in &[-3.0, -1.2, -0.4, 0.0, 0.7, 2.1, 4.0] {
            let mut dtheta = theta(x + dx) - theta(x - dx);
            while dtheta > std::f64::consts::PI {
                dtheta -= 2.0 * std::f64::consts::PI;
            }
            while dtheta < -std::f64::consts::PI {
                dtheta += 2.0 * std::f64::consts::PI;
            }
            let u_fd = -2.0 * dtheta / (2.0 * dx);
            let u = spec.value_at(x).unwrap();
            assert!(
                (u - u_fd).abs() < 1e-7,
                "arctan route at x={x}: {u_fd} vs analytic {u}"
            );
        }
    }

    #[test]
    fn n_soliton_even_for_centered_config() {
        let p = NSolitonParams::centered(vec![0.4, 0.9, 1.3]).unwrap();
        let spec = n_soliton(p).unwrap();
        for x in linspace(0.0, 8.0, 101) {
            let (l, r) = (spec.value_at(-x).unwrap(), spec.value_at(x).unwrap());
            assert!((l - r).abs() < 1e-12, "evenness at {x}: {l} vs {r}");
        }
    }

    #[test]
    fn n_soliton_decays_at_infinity() {
        let p = NSolitonParams::centered(vec![0.5, 1.0, 1.5]).unwrap();
        let spec = n_soliton(p).unwrap();
        assert!(spec.value_at(20.0).unwrap().abs() < 1e-6, "u -> 0 as x -> +inf");
        assert!(spec.value_at(-20.0).unwrap().abs() < 1e-6, "u -> 0 as x -> -inf");
        for &x in &[-60.0, -35.0, 35.0, 60.0] {
            assert!(spec.value_at(x).unwrap().is_finite(), "finite far field at {x}");
        }
    }

    #[test]
    fn n_soliton_time_law_keeps_d_real_and_moves_crests() {
        let p = NSolitonParams::new(vec![0.5], vec![-1.0], 0.0).unwrap();
        let spec_later = n_soliton(p.with_time(1.0)).unwrap();
        // crest of a single soliton moves right with speed 4 eta^2 = 1
        let mut best = (0.0, 0.0);
        for x in linspace(-5.0, 5.0, 2001) {
            let v = spec_later.value_at(x).unwrap();
            if v.abs() > best.1 {
                best = (x, v.abs());
            }
        }
        // d(0) = -1 puts the crest at ln(1/(2*0.5))/(2*0.5) = 0 at t=0
        assert!((best.0 - 1.0).abs() < 0.01, "crest at {} after t=1", best.0);
    }

    #[test]
    fn n_soliton_invalid_params() {
        assert!(NSolitonParams::new(vec![], vec![], 0.0).is_err());
        assert!(NSolitonParams::new(vec![0.5, 0.5], vec![1.0, 1.0], 0.0).is_err());
        assert!(NSolitonParams::new(vec![0.5, 0.3], vec![1.0, 1.0], 0.0).is_err());
        assert!(NSolitonParams::new(vec![0.5], vec![0.0], 0.0).is_err());
    }

    #[test]
    fn one_gap_values_and_period() {
        let p = PeriodicOneGapParams::new(3.0, 2.0, 1.0).unwrap();
        assert!((p.modulus() - (7.0f64 / 16.0).sqrt()).abs() < 1e-15, "m = sqrt(7/16)");
        assert!((p.eta() - 2.0).abs() < 1e-15, "eta = 2");
        assert_eq!(p.band_edge_ky(), 2.0);
        let spec = periodic_one_gap(p).unwrap();
        assert!((spec.value_at(0.0).unwrap() + 3.0).abs() < 1e-14, "V(0) = -a");
        assert!(spec.is_periodic());
        let period = spec.period().unwrap();
        // V oscillates within [-a, -b]
        for x in linspace(0.0, period, 257) {
            let v = spec.value_at(x).unwrap();
            assert!((-3.0 - 1e-12..=-2.0 + 1e-12).contains(&v), "range at {x}: {v}");
        }
        for &x in &[0.17, 1.4, 5.3, 11.0] {
            let dv = spec.value_at(x + period).unwrap() - spec.value_at(x).unwrap();
            assert!(dv.abs() < 1e-10, "periodicity at {x}: {dv:.3e}");
        }
    }

    #[test]
    fn one_gap_soliton_limit() {
        let p = PeriodicOneGapParams::new(3.0, 0.0, 0.0).unwrap();
        assert_eq!(p.modulus(), 1.0);
        assert!((p.eta() - 1.5).abs() < 1e-15, "eta -> a/2");
        let spec = periodic_one_gap(p).unwrap();
        assert!(!spec.is_periodic(), "m = 1 limit is the soliton");
        for x in linspace(-8.0, 8.0, 401) {
            let v = spec.value_at(x).unwrap();
            assert!((v + 3.0 * sech(3.0 * x)).abs() < 1e-8, "-a sech(ax) at {x}: {v}");
        }
        assert_eq!(spec.predicted_ky(), &[1.5], "band edge -> a/2");
    }

    #[test]
    fn one_gap_rejects_bad_orderings() {
        assert!(PeriodicOneGapParams::new(1.0, 2.0, 0.5).is_err());
        assert!(PeriodicOneGapParams::new(3.0, 2.0, 2.5).is_err());
        assert!(PeriodicOneGapParams::new(3.0, 2.0, -1.0).is_err());
    }

    #[test]
    fn cn_values_and_period() {
        let m = EllipticModulus::new(0.8).unwrap();
        let p = PeriodicCnParams::new(m, 1.0).unwrap();
        assert!((p.eta() - (1.0f64 / 0.28).sqrt()).abs() < 1e-14, "eta = sqrt(1/0.28)");
        let spec = periodic_cn(m, 1.0).unwrap();
        let eta = p.eta();
        assert!((spec.value_at(0.0).unwrap() + 0.8 * eta).abs() < 1e-14, "V(0) = -m eta");
        let period = spec.period().unwrap();
        for &x in &[0.0, 0.8, 2.9] {
            let dv = spec.value_at(x + period).unwrap() - spec.value_at(x).unwrap();
            assert!(dv.abs() < 1e-10, "periodicity at {x}");
        }
    }

    #[test]
    fn cn_rejects_small_modulus() {
        let m = EllipticModulus::new(0.5).unwrap();
        assert!(PeriodicCnParams::new(m, 1.0).is_err(), "eta imaginary for m <= 1/sqrt(2)");
        let m = EllipticModulus::new(0.9).unwrap();
        assert!(PeriodicCnParams::new(m, -1.0).is_err(), "a must be positive");
    }

    #[test]
    fn cn_hyperbolic_limit_matches_one_soliton() {
        let m = EllipticModulus::new(1.0 - 1e-12).unwrap();
        let a = 1.0;
        let spec = periodic_cn(m, a).unwrap();
        let eta = (a / (2.0 * (1.0 - 1e-12f64).powi(2) - 1.0)).sqrt();
        for x in linspace(-6.0, 6.0, 301) {
            let v = spec.value_at(x).unwrap();
            assert!((v + eta * sech(eta * x)).abs() < 1e-6, "m->1 limit at {x}: {v}");
        }
    }

    #[test]
    fn combined_values() {
        let p = CombinedParams::new(1.0, 1.0, 2.0).unwrap();
        assert!((p.gamma() - 0.5).abs() < 1e-15);
        assert!((p.cos_theta() - 1.0 / 17.0f64.sqrt()).abs() < 1e-15);
        assert!((p.predicted_ky() - 4.25f64.sqrt()).abs() < 1e-15);
        let spec = combined_one_soliton(p).unwrap();
        assert_eq!(spec.background(), -0.5);
        // x = 0 value of the well profile, plus the pedestal
        let st = (1.0 - 1.0 / 17.0f64).sqrt();
        let expected = -4.0 * st / (1.0 / 17.0f64.sqrt() + 1.0) - 0.5;
        assert!((spec.value_at(0.0).unwrap() - expected).abs() < 1e-14);
        // far field reaches the pedestal
        assert!((spec.value_at(50.0).unwrap() + 0.5).abs() < 1e-15);
    }

    #[test]
    fn combined_alpha_zero_reduces_to_one_soliton() {
        let p = CombinedParams::new(0.0, 1.0, 2.0).unwrap();
        let spec = combined_one_soliton(p).unwrap();
        let reference = one_soliton(2.0).unwrap();
        for x in linspace(-5.0, 5.0, 401) {
            let (v, r) = (spec.value_at(x).unwrap(), reference.value_at(x).unwrap());
            assert!((v - r).abs() < 1e-14, "alpha=0 reduction at {x}");
        }
        assert_eq!(spec.predicted_ky(), &[2.0]);
    }

    #[test]
    fn combined_well_value_cross_check() {
        // independent evaluation route for alpha=2, beta=1, eta=2 at x=0
        let p = CombinedParams::new(2.0, 1.0, 2.0).unwrap();
        let ct: f64 = 2.0 / 20.0f64.sqrt();
        let st = (1.0 - ct * ct).sqrt();
        let well_direct = -4.0 * st / (ct + 1.0);
        assert!((p.well_profile(0.0) - well_direct).abs() < 1e-14);
        assert!(p.gardner_soliton(0.0) > 0.0, "gardner soliton is a positive bump");
        assert!(CombinedParams::new(1.0, -1.0, 2.0).is_err(), "beta must be positive");
    }

    #[test]
    fn negation_flips_values_and_background() {
        let spec = combined_one_soliton(CombinedParams::new(1.0, 1.0, 2.0).unwrap()).unwrap();
        let neg = spec.negated();
        for &x in &[0.0, 0.7, 3.0] {
            assert_eq!(spec.value_at(x).unwrap(), -neg.value_at(x).unwrap());
        }
        assert_eq!(neg.background(), 0.5);
        assert_eq!(neg.predicted_ky(), spec.predicted_ky());
    }

    #[test]
    fn evaluate_requires_increasing_grid() {
        let spec = one_soliton(0.5).unwrap();
        assert!(spec.evaluate(&[0.0, 1.0, 0.5]).is_err());
        assert!(spec.evaluate(&[0.0, 0.0]).is_err());
        let vals = spec.evaluate(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(vals.len(), 3);
        assert!((vals[0] - vals[2]).abs() < 1e-15, "even function");
    }

    #[test]
    fn predicted_ky_sorted_positive_nonempty() {
        let specs = vec![
            one_soliton(0.7).unwrap(),
            two_soliton(TwoSolitonParams::new(1.0, 2.0, 0.5, 0.6).unwrap()).unwrap(),
            n_soliton(NSolitonParams::centered(vec![0.4, 0.9, 1.3]).unwrap()).unwrap(),
            periodic_one_gap(PeriodicOneGapParams::new(3.0, 2.0, 1.0).unwrap()).unwrap(),
            periodic_cn(EllipticModulus::new(0.8).unwrap(), 1.0).unwrap(),
            combined_one_soliton(CombinedParams::new(1.0, 1.0, 2.0).unwrap()).unwrap(),
        ];
        for spec in &specs {
            let ky = spec.predicted_ky();
            assert!(!ky.is_empty(), "{spec}: predicted momenta nonempty");
            assert!(ky.iter().all(|&k| k > 0.0), "{spec}: momenta positive");
            assert!(ky.windows(2).all(|w| w[0] < w[1]), "{spec}: momenta ascending");
        }
    }

    #[test]
    fn periodic_specs_satisfy_periodicity_at_random_points() {
        // deterministic splitmix64 stand-in for "1000 random x"
        let mut state: u64 = 0x9e3779b97f4a7c15;
        let mut next = move || {
            state = state.wrapping_add(0x9e3779b97f4a7c15);
            let mut z = state;
            z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
            z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
            (z ^ (z >> 31)) as f64 / u64::MAX as f64
        };
        let specs = vec![
            periodic_one_gap(PeriodicOneGapParams::new(3.0, 2.0, 1.0).unwrap()).unwrap(),
            periodic_cn(EllipticModulus::new(0.8).unwrap(), 1.0).unwrap(),
        ];
        for spec in &specs {
            let period = spec.period().unwrap();
            for _ in 0..1000 {
                let x = (next() - 0.5) * 30.0;
                let dv = spec.value_at(x + period).unwrap() - spec.value_at(x).unwrap();
                assert!(dv.abs() < 1e-10, "{spec} periodicity at {x}: {dv:.3e}");
            }
        }
    }

    #[test]
    fn finite_values_on_wide_grids() {
        let specs = vec![
            one_soliton(0.3).unwrap(),
            two_soliton(TwoSolitonParams::new(0.5, 1.5, 1.0, 1.0).unwrap()).unwrap(),
            n_soliton(NSolitonParams::centered(vec![0.5, 1.5]).unwrap()).unwrap(),
            periodic_one_gap(PeriodicOneGapParams::new(3.5, 2.2, 1.4).unwrap()).unwrap(),
            periodic_cn(EllipticModulus::new(0.9).unwrap(), 2.0).unwrap(),
            combined_one_soliton(CombinedParams::new(2.0, 1.0, 2.0).unwrap()).unwrap(),
        ];
        for spec in &specs {
            for x in linspace(-60.0, 60.0, 481) {
                let v = spec.value_at(x).unwrap();
                assert!(v.is_finite(), "{spec} finite at {x}");
            }
        }
    }

    #[test]
    fn json_round_trip() {
        let specs = vec![
            one_soliton(0.5).unwrap(),
            two_soliton(TwoSolitonParams::new(1.0, 2.0, 0.5, 0.6).unwrap()).unwrap(),
            n_soliton(NSolitonParams::centered(vec![0.4, 0.9, 1.3]).unwrap().with_time(0.25))
                .unwrap(),
            periodic_one_gap(PeriodicOneGapParams::new(3.0, 2.0, 1.0).unwrap()).unwrap(),
            periodic_cn(EllipticModulus::new(0.8).unwrap(), 1.0).unwrap(),
            combined_one_soliton(CombinedParams::new(1.0, 1.0, 2.0).unwrap()).unwrap(),
        ];
        for spec in specs {
            let json = serde_json::to_string(&spec).unwrap();
            let back: PotentialSpec = serde_json::from_str(&json).unwrap();
            assert_eq!(spec, back, "round trip through {json}");
        }
    }

    #[test]
    fn json_wire_format_shape() {
        let spec = one_soliton(0.5).unwrap();
        let v: serde_json::Value = serde_json::to_value(&spec).unwrap();
        assert_eq!(v["family"], "one-soliton");
        assert_eq!(v["params"]["eta"], 0.5);
        assert!(v["t"].is_number());
        let parsed: PotentialSpec =
            serde_json::from_str(r#"{"family":"one-soliton","params":{"eta":0.5}}"#).unwrap();
        assert_eq!(parsed, spec, "t defaults to 0");
    }
}
