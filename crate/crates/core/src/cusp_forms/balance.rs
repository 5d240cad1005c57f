use super::form::{ds_wedge, exterior_derivative, fourier_primitive, slice_inner, CuspForm};
use super::model::CuspModel;
use super::norms::{slab_integral, slab_l2_norm, slice_integral, slice_profile, SliceProfile};
use crate::error::{Error, Result};
use crate::lattice::successive_minima;
use crate::price::{cusp_decay, CuspKind};
use num_traits::ToPrimitive;
use serde::Serialize;
use std::f64::consts::PI;

/// Critical-degree integral inequality on Ω_{R₀,∞}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriticalCheck {
    pub r0: f64,
    /// ∫ e^{s−R₀}|h|².
    pub lhs: f64,
    /// (1 + e^{−R₀}/(2πδ))∫|h|².
    pub rhs: f64,
    pub delta: f64,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BalanceReport {
    pub u: f64,
    /// ∫_{T_u}(1/2 − μ_α)|α|².
    pub boundary: f64,
    /// Bulk integral over Ω_{u,∞} of the identity's right-hand side.
    pub bulk: f64,
    /// |boundary − bulk| / max(|boundary|, |bulk|).
    pub residual: f64,
    pub profile: SliceProfile,
    /// Boundary functional sampled on increasing heights.
    pub functional: Vec<(f64, f64)>,
    pub monotone: bool,
    pub critical: Option<CriticalCheck>,
}

impl BalanceReport {
    pub fn passed(&self, tol: f64) -> bool {
        self.residual < tol && self.monotone && self.critical.is_none_or(|c| c.pass)
    }
}

/// Boundary term ∫_{T_u}(1/2 − μ_α)|α|².
pub fn boundary_functional(model: &CuspModel, f: &CuspForm, u: f64) -> f64 {
    slice_integral(model, f, u, &|a| if a & 1 != 0 { -0.5 } else { 0.5 })
}

/// Bulk term ∫_{Ω_{u,∞}} Σ_A (W/2 − W(A))|α_A|², W the total weight.
///
/// Real cusps: ((n−1)/2 − k + μ_α)|α|². Complex cusps: (n − k + μ_α − μ_{Jα})|α|².
pub fn bulk_functional(model: &CuspModel, f: &CuspForm, u: f64) -> Result<f64> {
    let half = model.total_weight() / 2.0;
    slab_integral(model, f, u, f64::INFINITY, &|a| half - model.mask_weight(a), 0.0)
}

fn require_harmonic_l2(model: &CuspModel, f: &CuspForm) -> Result<()> {
    if !f.is_harmonic() {
        return Err(Error::Precondition("balance identity needs a verified harmonic form".into()));
    }
    match slab_l2_norm(model, f, 0.0, f64::INFINITY) {
        Ok(_) => Ok(()),
        Err(Error::Divergence(m)) => Err(Error::Precondition(format!("form is not L²: {m}"))),
        Err(e) => Err(e),
    }
}

/// First minimum of the dual lattice.
pub fn dual_first_minimum(model: &CuspModel) -> Result<f64> {
    let sm = successive_minima(model.lattice())?;
    sm.delta.to_f64().ok_or_else(|| Error::InvalidLattice("δ not representable".into()))
}

/// ∫_{R₀}^∞ e^{s−R₀}|h|² ≤ (1 + e^{−R₀}/(2πδ))∫_{R₀}^∞|h|².
pub fn critical_inequality(model: &CuspModel, f: &CuspForm, r0: f64) -> Result<CriticalCheck> {
    let delta = dual_first_minimum(model)?;
    let lhs = (-r0).exp() * slab_integral(model, f, r0, f64::INFINITY, &|_| 1.0, 1.0)?;
    let rhs = (1.0 + (-r0).exp() / (2.0 * PI * delta)) * slab_l2_norm(model, f, r0, f64::INFINITY)?;
    let margin = rhs - lhs;
    Ok(CriticalCheck { r0, lhs, rhs, delta, margin, pass: margin >= -1e-9 * rhs.abs() })
}

/// Checks the boundary-versus-bulk identity at height u.
pub fn verify_cusp_balance(model: &CuspModel, f: &CuspForm, u: f64) -> Result<BalanceReport> {
    if !(u >= 0.0 && u.is_finite()) {
        return Err(Error::Domain(format!("balance height must be finite and ≥ 0, got {u}")));
    }
    require_harmonic_l2(model, f)?;
    let boundary = boundary_functional(model, f, u);
    let bulk = bulk_functional(model, f, u)?;
    let scale = boundary.abs().max(bulk.abs());
    let residual = if scale == 0.0 { 0.0 } else { (boundary - bulk).abs() / scale };

    let top = if f.all_closed() { u + 6.0 } else { f.grid().s_max() };
    let steps = 40;
    let functional: Vec<(f64, f64)> = (0..=steps)
        .map(|i| {
            let s = u + (top - u) * i as f64 / steps as f64;
            (s, boundary_functional(model, f, s))
        })
        .collect();
    let peak = functional.iter().map(|x| x.1.abs()).fold(0.0, f64::max);
    let monotone = functional.windows(2).all(|w| w[1].1 <= w[0].1 + 1e-12 * peak);

    let critical = match model.kind() {
        CuspKind::Real if 2 * f.degree() + 1 == model.n() && !f.is_zero() => {
            Some(critical_inequality(model, f, u)?)
        }
        _ => None,
    };
    Ok(BalanceReport { u, boundary, bulk, residual, profile: slice_profile(model, f, u), functional, monotone, critical })
}

/// Slab mass on Ω_{s,∞} against c·e^{−rate·s}·(mass on Ω_{0,∞}).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PriceCheck {
    pub s: f64,
    pub mass: f64,
    pub bound: f64,
    pub margin: f64,
    pub pass: bool,
}

pub fn cusp_price_check(model: &CuspModel, f: &CuspForm, heights: &[f64]) -> Result<Vec<PriceCheck>> {
    require_harmonic_l2(model, f)?;
    let total = slab_l2_norm(model, f, 0.0, f64::INFINITY)?;
    heights
        .iter()
        .map(|&s| {
            let (factor, _) = cusp_decay(model.kind(), model.n(), f.degree(), s)?;
            let mass = slab_l2_norm(model, f, s, f64::INFINITY)?;
            let bound = factor * total;
            let margin = (bound - mass) / total.max(f64::MIN_POSITIVE);
            Ok(PriceCheck { s, mass, bound, margin, pass: margin >= -1e-8 })
        })
        .collect()
}

/// Fourier primitive checks at height R.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PrimitiveCheck {
    /// sup|d b − h| / sup|h| on the grid.
    pub residual: f64,
    pub r: f64,
    /// |∫_{T_R}⟨ds∧b, h⟩|.
    pub boundary: f64,
    /// e^{−R}/(2π|v|_min)·∫_{T_R}|h|².
    pub estimate: f64,
    pub pass: bool,
}

pub fn primitive_check(model: &CuspModel, h: &CuspForm, r: f64) -> Result<PrimitiveCheck> {
    let b = fourier_primitive(model, h)?;
    let db = exterior_derivative(model, &b)?;
    let diff = {
        let mut d = db.clone();
        for m in h.modes() {
            for (&mask, c) in &m.coeffs {
                d.add_term(model, &m.dual_coords, mask, c.scale(num_complex::Complex64::new(-1.0, 0.0)))?;
            }
        }
        d
    };
    let scale = h.sup_norm(model);
    let residual = if scale == 0.0 { 0.0 } else { diff.sup_norm(model) / scale };
    let boundary = slice_inner(model, &ds_wedge(model, &b)?, h, r)?.norm();
    let vmin = h.modes().iter().map(|m| m.frequency_norm()).fold(f64::INFINITY, f64::min);
    let estimate = (-r).exp() / (2.0 * PI * vmin) * slice_integral(model, h, r, &|_| 1.0);
    let pass = residual < 1e-8 && boundary <= estimate * (1.0 + 1e-9);
    Ok(PrimitiveCheck { residual, r, boundary, estimate, pass })
}
