use super::algebra::{complement_sign, degree, full_mask, interior_sign, wedge_sign, Mask};
use super::coeff::{Coeff, ExpSum, Grid};
use super::model::CuspModel;
use crate::error::{Error, Result};
use num_complex::Complex64;
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// One Fourier mode e^{2πi⟨v,t⟩}·Σ_A c_A(s) dx^A.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeComponent {
    /// Frequency in dual-lattice coordinates.
    pub dual_coords: Vec<i64>,
    /// Frequency as a Euclidean vector.
    pub frequency: Vec<f64>,
    pub coeffs: BTreeMap<Mask, Coeff>,
}

impl ModeComponent {
    pub fn is_zero_frequency(&self) -> bool {
        self.dual_coords.iter().all(|&c| c == 0)
    }

    pub fn frequency_norm(&self) -> f64 {
        self.frequency.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// Bound on the part of the form beyond the end of its grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayTag {
    /// Upper bound on ∫_{s_max}^∞ ∫_{T_s} |α|².
    pub tail_mass: f64,
    /// Decay rate λ of the tail integrand at s_max.
    pub tail_rate: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CuspForm {
    pub(crate) degree: u32,
    pub(crate) real_dim: u32,
    pub(crate) grid: Grid,
    pub(crate) modes: Vec<ModeComponent>,
    pub(crate) harmonic: bool,
    pub(crate) decay: Option<DecayTag>,
}

impl CuspForm {
    pub fn new(model: &CuspModel, degree: u32, grid: Grid) -> Result<Self> {
        if degree > model.real_dim() {
            return Err(Error::Domain(format!(
                "degree {degree} exceeds the cusp dimension {}",
                model.real_dim()
            )));
        }
        Ok(Self { degree, real_dim: model.real_dim(), grid, modes: Vec::new(), harmonic: false, decay: None })
    }

    /// The zero k-form, harmonic by definition.
    pub fn zero(model: &CuspModel, degree: u32) -> Result<Self> {
        let mut f = Self::new(model, degree, Grid::standard())?;
        f.harmonic = true;
        Ok(f)
    }

    /// Adds c(s)·e^{2πi⟨v,t⟩}dx^A; `mask` bit 0 is ds, bit j is dt^j.
    pub fn add_term(&mut self, model: &CuspModel, dual_coords: &[i64], mask: Mask, coeff: Coeff) -> Result<()> {
        if degree(mask) != self.degree || mask & !full_mask(self.real_dim) != 0 {
            return Err(Error::Domain(format!("multi-index {mask:#b} does not fit a {}-form", self.degree)));
        }
        if let Coeff::Samples(v) = &coeff {
            if v.len() != self.grid.len {
                return Err(Error::Domain(format!("{} samples for a grid of {}", v.len(), self.grid.len)));
            }
            if v.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                return Err(Error::Domain("non-finite coefficient sample".into()));
            }
        }
        let frequency = model.frequency(dual_coords)?;
        self.harmonic = false;
        self.decay = None;
        let grid = self.grid;
        let mode = match self.modes.iter_mut().find(|m| m.dual_coords == dual_coords) {
            Some(m) => m,
            None => {
                self.modes.push(ModeComponent { dual_coords: dual_coords.to_vec(), frequency, coeffs: BTreeMap::new() });
                self.modes.last_mut().expect("just pushed")
            }
        };
        add_into(&mut mode.coeffs, mask, coeff, &grid);
        Ok(())
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn modes(&self) -> &[ModeComponent] {
        &self.modes
    }

    pub fn is_harmonic(&self) -> bool {
        self.harmonic
    }

    pub fn decay(&self) -> Option<DecayTag> {
        self.decay
    }

    pub fn is_zero(&self) -> bool {
        self.modes.iter().all(|m| m.coeffs.values().all(Coeff::is_zero))
    }

    pub fn all_closed(&self) -> bool {
        self.modes.iter().all(|m| m.coeffs.values().all(Coeff::is_closed))
    }

    pub fn scale(&self, z: Complex64) -> Self {
        let mut out = self.clone();
        for m in &mut out.modes {
            for c in m.coeffs.values_mut() {
                *c = c.scale(z);
            }
        }
        if let Some(d) = &mut out.decay {
            d.tail_mass *= z.norm_sqr();
        }
        out
    }

    fn derived(&self, degree: u32) -> Self {
        Self { degree, real_dim: self.real_dim, grid: self.grid, modes: Vec::new(), harmonic: false, decay: None }
    }

    /// Σ_A weight(A)·|c_A(s_i)|²·e^{2W(A)s_i} summed over modes, at grid index `i`.
    pub(crate) fn weighted_norm_sq_at(&self, model: &CuspModel, i: usize, weight: &dyn Fn(Mask) -> f64) -> f64 {
        let s = self.grid.s(i);
        let mut total = 0.0;
        for m in &self.modes {
            for (&a, c) in &m.coeffs {
                let w = weight(a);
                if w != 0.0 {
                    total += w * c.at(&self.grid, i).norm_sqr() * (2.0 * model.mask_weight(a) * s).exp();
                }
            }
        }
        total
    }

    /// Same as `weighted_norm_sq_at` at an arbitrary height.
    pub(crate) fn weighted_norm_sq(&self, model: &CuspModel, s: f64, weight: &dyn Fn(Mask) -> f64) -> f64 {
        let mut total = 0.0;
        for m in &self.modes {
            for (&a, c) in &m.coeffs {
                let w = weight(a);
                if w != 0.0 {
                    total += w * c.eval(&self.grid, s).norm_sqr() * (2.0 * model.mask_weight(a) * s).exp();
                }
            }
        }
        total
    }

    /// Exact Σ_A weight(A)|c_A|²e^{(2W(A)−W)s}·covol for closed-form coefficients.
    pub(crate) fn weighted_density_expsum(&self, model: &CuspModel, weight: &dyn Fn(Mask) -> f64) -> Option<ExpSum> {
        let mut acc = ExpSum::default();
        for m in &self.modes {
            for (&a, c) in &m.coeffs {
                let Coeff::ClosedForm(e) = c else { return None };
                let w = weight(a);
                if w == 0.0 {
                    continue;
                }
                let rate = 2.0 * model.mask_weight(a) - model.total_weight();
                let term = e.norm_sq().shift(rate).scale(Complex64::new(w * model.cross_section_volume(), 0.0));
                acc = acc.add(&term);
            }
        }
        Some(acc)
    }

    /// Pointwise norm |α|(s_i) on the grid, maximized over the grid.
    pub fn sup_norm(&self, model: &CuspModel) -> f64 {
        (0..self.grid.len)
            .map(|i| self.weighted_norm_sq_at(model, i, &|_| 1.0))
            .fold(0.0, f64::max)
            .sqrt()
    }
}

fn add_into(map: &mut BTreeMap<Mask, Coeff>, mask: Mask, coeff: Coeff, grid: &Grid) {
    match map.remove(&mask) {
        Some(old) => {
            let sum = old.add(&coeff, grid);
            if !sum.is_zero() {
                map.insert(mask, sum);
            }
        }
        None => {
            if !coeff.is_zero() {
                map.insert(mask, coeff);
            }
        }
    }
}

/// Exterior derivative. Tangential derivatives multiply by 2πi·v; the
/// s-derivative is exact on closed forms and a five-point stencil on samples.
pub fn exterior_derivative(model: &CuspModel, f: &CuspForm) -> Result<CuspForm> {
    if f.degree >= model.real_dim() {
        return Err(Error::Domain(format!("d of a top-degree ({}) form", f.degree)));
    }
    let mut out = f.derived(f.degree + 1);
    for m in &f.modes {
        let mut coeffs = BTreeMap::new();
        for (&a, c) in &m.coeffs {
            if a & 1 == 0 {
                add_into(&mut coeffs, a | 1, c.derivative(&f.grid), &f.grid);
            }
            for j in 1..model.real_dim() {
                let vj = m.frequency[j as usize - 1];
                if vj == 0.0 {
                    continue;
                }
                if let Some(sign) = wedge_sign(j, a) {
                    let z = Complex64::new(0.0, 2.0 * PI * vj * sign);
                    add_into(&mut coeffs, a | (1 << j), c.scale(z), &f.grid);
                }
            }
        }
        out.modes.push(ModeComponent { coeffs, ..m.clone() });
    }
    Ok(out)
}

/// Hodge star of the cusp metric.
pub fn hodge_star(model: &CuspModel, f: &CuspForm) -> CuspForm {
    let n = model.real_dim();
    let full = full_mask(n);
    let mut out = f.derived(n - f.degree);
    for m in &f.modes {
        let mut coeffs = BTreeMap::new();
        for (&a, c) in &m.coeffs {
            let ac = full & !a;
            let rate = model.mask_weight(a) - model.mask_weight(ac);
            let sign = complement_sign(a, n);
            add_into(&mut coeffs, ac, c.scale(Complex64::new(sign, 0.0)).mul_exp(&f.grid, rate), &f.grid);
        }
        out.modes.push(ModeComponent { coeffs, ..m.clone() });
    }
    out
}

/// Codifferential δ = (−1)^{N(k+1)+1} ⋆d⋆ on k-forms.
pub fn codifferential(model: &CuspModel, f: &CuspForm) -> Result<CuspForm> {
    if f.degree == 0 {
        return Err(Error::Domain("codifferential of a 0-form".into()));
    }
    let n = model.real_dim();
    let sign = if (n * (f.degree + 1) + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    let inner = exterior_derivative(model, &hodge_star(model, f))?;
    Ok(hodge_star(model, &inner).scale(Complex64::new(sign, 0.0)))
}

/// Interior product with the coordinate field ∂_j.
pub fn interior(model: &CuspModel, f: &CuspForm, j: u32) -> Result<CuspForm> {
    if f.degree == 0 {
        return Err(Error::Domain("interior product of a 0-form".into()));
    }
    if j >= model.real_dim() {
        return Err(Error::Domain(format!("coordinate {j} out of range")));
    }
    let mut out = f.derived(f.degree - 1);
    for m in &f.modes {
        let mut coeffs = BTreeMap::new();
        for (&a, c) in &m.coeffs {
            if let Some(sign) = interior_sign(j, a) {
                add_into(&mut coeffs, a & !(1 << j), c.scale(Complex64::new(sign, 0.0)), &f.grid);
            }
        }
        out.modes.push(ModeComponent { coeffs, ..m.clone() });
    }
    Ok(out)
}

/// Relative residuals (sup|dα|/sup|α|, sup|δα|/sup|α|) on the grid.
pub fn harmonic_residuals(model: &CuspModel, f: &CuspForm) -> Result<(f64, f64)> {
    let scale = f.sup_norm(model);
    if scale == 0.0 {
        return Ok((0.0, 0.0));
    }
    let d = if f.degree < model.real_dim() { exterior_derivative(model, f)?.sup_norm(model) } else { 0.0 };
    let delta = if f.degree > 0 { codifferential(model, f)?.sup_norm(model) } else { 0.0 };
    Ok((d / scale, delta / scale))
}

/// Flags `f` harmonic when both residuals are below `tol`.
pub fn certify_harmonic(model: &CuspModel, mut f: CuspForm, tol: f64) -> Result<CuspForm> {
    let (d, delta) = harmonic_residuals(model, &f)?;
    if d < tol && delta < tol {
        f.harmonic = true;
        Ok(f)
    } else {
        Err(Error::Precondition(format!("form is not harmonic: |dα| {d:e}, |δα| {delta:e} (relative)")))
    }
}

/// Fourier primitive b^v = Σ_k v_k/(2πi|v|²)·ι(∂t_k)h^v, mode by mode.
pub fn fourier_primitive(model: &CuspModel, f: &CuspForm) -> Result<CuspForm> {
    if f.degree == 0 {
        return Err(Error::Domain("primitive of a 0-form".into()));
    }
    let mut out = f.derived(f.degree - 1);
    for m in &f.modes {
        if m.is_zero_frequency() {
            return Err(Error::Domain("the zero mode has no Fourier primitive".into()));
        }
        let v2: f64 = m.frequency.iter().map(|x| x * x).sum();
        let mut coeffs = BTreeMap::new();
        for (&a, c) in &m.coeffs {
            for j in 1..model.real_dim() {
                let vj = m.frequency[j as usize - 1];
                if vj == 0.0 {
                    continue;
                }
                if let Some(sign) = interior_sign(j, a) {
                    let z = Complex64::new(0.0, -sign * vj / (2.0 * PI * v2));
                    add_into(&mut coeffs, a & !(1 << j), c.scale(z), &f.grid);
                }
            }
        }
        out.modes.push(ModeComponent { coeffs, ..m.clone() });
    }
    out.decay = f.decay;
    Ok(out)
}

/// ds ∧ f.
pub fn ds_wedge(model: &CuspModel, f: &CuspForm) -> Result<CuspForm> {
    if f.degree >= model.real_dim() {
        return Err(Error::Domain("ds ∧ top-degree form".into()));
    }
    let mut out = f.derived(f.degree + 1);
    for m in &f.modes {
        let mut coeffs = BTreeMap::new();
        for (&a, c) in &m.coeffs {
            if a & 1 == 0 {
                add_into(&mut coeffs, a | 1, c.clone(), &f.grid);
            }
        }
        out.modes.push(ModeComponent { coeffs, ..m.clone() });
    }
    Ok(out)
}

/// ∫_{T_s}⟨x, y⟩ over the cross-section at height s (modes are orthogonal).
pub fn slice_inner(model: &CuspModel, x: &CuspForm, y: &CuspForm, s: f64) -> Result<Complex64> {
    if x.degree != y.degree {
        return Err(Error::Domain("inner product of forms of different degree".into()));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for mx in &x.modes {
        let Some(my) = y.modes.iter().find(|m| m.dual_coords == mx.dual_coords) else { continue };
        for (&a, cx) in &mx.coeffs {
            if let Some(cy) = my.coeffs.get(&a) {
                let w = (2.0 * model.mask_weight(a) * s).exp();
                total += cx.eval(&x.grid, s) * cy.eval(&y.grid, s).conj() * w;
            }
        }
    }
    Ok(total * model.volume_density(s))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::IntegerLattice;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    fn real3() -> CuspModel {
        CuspModel::real(3, IntegerLattice::identity(2)).unwrap()
    }

    #[test]
    fn d_of_constant_is_zero() {
        let m = real3();
        let mut f = CuspForm::new(&m, 0, Grid::standard()).unwrap();
        f.add_term(&m, &[0, 0], 0, Coeff::ClosedForm(ExpSum::constant(c(3.0)))).unwrap();
        assert!(exterior_derivative(&m, &f).unwrap().is_zero());
    }

    #[test]
    fn d_of_radial_exact_one_form_is_zero() {
        let m = real3();
        let mut f = CuspForm::new(&m, 1, Grid::standard()).unwrap();
        f.add_term(&m, &[0, 0], 1, Coeff::ClosedForm(ExpSum::exp(c(1.0), -2.0))).unwrap();
        assert!(exterior_derivative(&m, &f).unwrap().is_zero());
    }

    #[test]
    fn top_degree_d_and_zero_degree_codifferential_are_errors() {
        let m = real3();
        let top = CuspForm::new(&m, 3, Grid::standard()).unwrap();
        assert!(matches!(exterior_derivative(&m, &top), Err(Error::Domain(_))));
        let zero = CuspForm::new(&m, 0, Grid::standard()).unwrap();
        assert!(matches!(codifferential(&m, &zero), Err(Error::Domain(_))));
    }

    #[test]
    fn star_of_one_is_volume_form() {
        let m = real3();
        let mut one = CuspForm::new(&m, 0, Grid::standard()).unwrap();
        one.add_term(&m, &[0, 0], 0, Coeff::ClosedForm(ExpSum::constant(c(1.0)))).unwrap();
        let vol = hodge_star(&m, &one);
        assert_eq!(vol.degree(), 3);
        let coeff = &vol.modes[0].coeffs[&0b111];
        // vol = e^{−2s} ds∧dt1∧dt2
        assert_eq!(*coeff, Coeff::ClosedForm(ExpSum::exp(c(1.0), -2.0)));
        let back = hodge_star(&m, &vol);
        assert_eq!(back.modes[0].coeffs[&0], Coeff::ClosedForm(ExpSum::constant(c(1.0))));
    }

    #[test]
    fn codifferential_of_radial_gradient_is_laplacian() {
        // f = e^{−s²}: δdf = −(f'' − (n−1) f') with volume density e^{−(n−1)s}.
        let m = CuspModel::real(4, IntegerLattice::identity(3)).unwrap();
        let g = Grid::new(4.0, 4000).unwrap();
        let samples: Vec<Complex64> = g.points().map(|s| c((-s * s).exp())).collect();
        let mut f = CuspForm::new(&m, 0, g).unwrap();
        f.add_term(&m, &[0, 0, 0], 0, Coeff::Samples(samples)).unwrap();
        let lap = codifferential(&m, &exterior_derivative(&m, &f).unwrap()).unwrap();
        let coeff = lap.modes[0].coeffs[&0].samples(&g);
        for i in (10..3990).step_by(97) {
            let s = g.s(i);
            let e = (-s * s).exp();
            let fp = -2.0 * s * e;
            let fpp = (4.0 * s * s - 2.0) * e;
            let expect = -(fpp - 3.0 * fp);
            assert!((coeff[i].re - expect).abs() < 1e-7, "s={s}: {} vs {expect}", coeff[i].re);
        }
    }

    #[test]
    fn primitive_needs_nonzero_frequency() {
        let m = real3();
        let mut f = CuspForm::new(&m, 1, Grid::standard()).unwrap();
        f.add_term(&m, &[0, 0], 0b010, Coeff::ClosedForm(ExpSum::constant(c(1.0)))).unwrap();
        assert!(fourier_primitive(&m, &f).is_err());
    }

    #[test]
    fn add_term_validates() {
        let m = real3();
        let mut f = CuspForm::new(&m, 1, Grid::standard()).unwrap();
        assert!(f.add_term(&m, &[0, 0], 0b011, Coeff::ClosedForm(ExpSum::constant(c(1.0)))).is_err());
        assert!(f.add_term(&m, &[0, 0], 0b1000, Coeff::ClosedForm(ExpSum::constant(c(1.0)))).is_err());
        assert!(f.add_term(&m, &[0, 0], 0b010, Coeff::Samples(vec![c(1.0); 3])).is_err());
    }
}
