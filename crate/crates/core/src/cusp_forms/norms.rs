use super::algebra::Mask;
use super::form::CuspForm;
use super::model::CuspModel;
use crate::error::{Error, Result};
use crate::quad;

/// ∫_u^K e^{extra·s} ∫_{T_s} Σ_A weight(A)|c_A|²|dx^A|² ds.
///
/// Closed-form coefficients integrate exactly; sampled coefficients use
/// Simpson on grid-aligned stretches, Gauss–Kronrod on the cubic
/// interpolant for partial cells, and the decay tag past the grid.
pub(crate) fn slab_integral(
    model: &CuspModel,
    f: &CuspForm,
    u: f64,
    k: f64,
    weight: &dyn Fn(Mask) -> f64,
    extra: f64,
) -> Result<f64> {
    if !(u < k) || u < 0.0 || u.is_nan() {
        return Err(Error::Domain(format!("slab needs 0 ≤ u < K, got u={u}, K={k}")));
    }
    if let Some(e) = f.weighted_density_expsum(model, weight) {
        return e.shift(extra).integrate_re(u, k);
    }
    let grid = f.grid;
    let s_max = grid.s_max();
    let profile: Vec<f64> = (0..grid.len)
        .map(|i| {
            let s = grid.s(i);
            f.weighted_norm_sq_at(model, i, weight) * model.volume_density(s) * (extra * s).exp()
        })
        .collect();
    let mut total = 0.0;
    if u < s_max {
        total += grid_integral(&profile, &grid, u, k.min(s_max))?;
    }
    if k > s_max {
        let Some(tag) = f.decay else {
            return Err(Error::Divergence(format!(
                "slab reaches past the sampled range [0, {s_max}] and the form has no decay tag"
            )));
        };
        let rate = tag.tail_rate - extra;
        if rate <= 0.0 {
            return Err(Error::Divergence(format!("tail rate {rate} is not positive")));
        }
        let g_end = *profile.last().expect("nonempty grid");
        let start = u.max(s_max);
        let far = if k.is_infinite() { 0.0 } else { (-rate * (k - start)).exp() };
        total += g_end * (-rate * (start - s_max)).exp() * (1.0 - far) / rate;
    }
    Ok(total)
}

fn grid_integral(g: &[f64], grid: &super::coeff::Grid, u: f64, k: f64) -> Result<f64> {
    let h = grid.h;
    let iu = ((u / h) - 1e-9).ceil().max(0.0) as usize;
    let ik = (((k / h) + 1e-9).floor() as usize).min(grid.len - 1);
    let interp = |s: f64| super::coeff::interpolate(g, grid, s);
    let piece = |a: f64, b: f64| -> Result<f64> {
        if b - a <= 1e-12 * h {
            return Ok(0.0);
        }
        Ok(quad::integrate(interp, a, b, 0.0, 1e-13)?.value)
    };
    if iu >= ik {
        return piece(u, k);
    }
    let mid = quad::simpson_uniform(&g[iu..=ik], h);
    Ok(piece(u, grid.s(iu))? + mid + piece(grid.s(ik), k)?)
}

/// ∫_{Ω_{u,K}} |α|² dv.
pub fn slab_l2_norm(model: &CuspModel, f: &CuspForm, u: f64, k: f64) -> Result<f64> {
    slab_integral(model, f, u, k, &|_| 1.0, 0.0)
}

/// ∫_{T_s} Σ_A weight(A)|c_A|²|dx^A|².
pub(crate) fn slice_integral(model: &CuspModel, f: &CuspForm, s: f64, weight: &dyn Fn(Mask) -> f64) -> f64 {
    f.weighted_norm_sq(model, s, weight) * model.volume_density(s)
}

/// Mass ratios on the slice T_s.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SliceProfile {
    pub s: f64,
    /// ∫|ι(∂s)α|² / ∫|α|².
    pub mu_alpha: f64,
    /// Fiber-contraction mass ratio; complex cusps only.
    pub mu_fiber: Option<f64>,
    /// ∫_{T_s}|α|².
    pub mass: f64,
}

pub fn slice_profile(model: &CuspModel, f: &CuspForm, s: f64) -> SliceProfile {
    let mass = slice_integral(model, f, s, &|_| 1.0);
    let ratio = |bit: Mask| {
        if mass == 0.0 {
            0.0
        } else {
            slice_integral(model, f, s, &|a| if a & bit != 0 { 1.0 } else { 0.0 }) / mass
        }
    };
    let mu_fiber = match model.kind() {
        crate::price::CuspKind::Complex => Some(ratio(0b10)),
        crate::price::CuspKind::Real => None,
    };
    SliceProfile { s, mu_alpha: ratio(1), mu_fiber, mass }
}
