use crate::error::{Error, Result};
use crate::lattice::{dual_lattice, IntegerLattice};
use crate::price::CuspKind;
use num_rational::BigRational;
use num_traits::{FromPrimitive, ToPrimitive};

/// Model cusp [0,∞) × (cross-section) with metric ds² + Σ_j e^{−2w_j s}dt_j².
///
/// Coordinates: index 0 is s, indices 1..=D are the cross-section
/// coordinates. In the complex model index 1 is the fiber (w = 2) and the
/// remaining 2n−2 are horizontal (w = 1).
#[derive(Debug, Clone)]
pub struct CuspModel {
    kind: CuspKind,
    n: u32,
    lattice: IntegerLattice,
    dual: IntegerLattice,
    weights: Vec<f64>,
    covolume: f64,
}

impl CuspModel {
    /// Real cusp of a hyperbolic n-manifold with a rank n−1 translation lattice.
    pub fn real(n: u32, lattice: IntegerLattice) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("real cusp needs n ≥ 2, got {n}")));
        }
        if lattice.dim() != n as usize - 1 {
            return Err(Error::Domain(format!(
                "real cusp of dimension {n} needs a rank {} lattice, got rank {}",
                n - 1,
                lattice.dim()
            )));
        }
        Self::build(CuspKind::Real, n, lattice, vec![1.0; n as usize - 1])
    }

    /// Complex cusp of complex dimension n: flat circle bundle of the given
    /// fiber length over the torus of a rank 2n−2 horizontal lattice.
    pub fn complex(n: u32, horizontal: &IntegerLattice, fiber_length: f64) -> Result<Self> {
        if n < 2 {
            return Err(Error::Domain(format!("complex cusp needs n ≥ 2, got {n}")));
        }
        if horizontal.dim() != 2 * n as usize - 2 {
            return Err(Error::Domain(format!(
                "complex cusp of dimension {n} needs a rank {} horizontal lattice, got rank {}",
                2 * n - 2,
                horizontal.dim()
            )));
        }
        if !(fiber_length > 0.0 && fiber_length.is_finite()) {
            return Err(Error::Domain(format!("fiber length must be positive, got {fiber_length}")));
        }
        let fiber = BigRational::from_f64(fiber_length)
            .ok_or_else(|| Error::Domain("fiber length not representable".into()))?;
        let d = horizontal.dim() + 1;
        let zero = BigRational::from_integer(0.into());
        let mut rows = vec![vec![zero.clone(); d]];
        rows[0][0] = fiber;
        for r in horizontal.basis() {
            let mut row = vec![zero.clone()];
            row.extend(r.iter().cloned());
            rows.push(row);
        }
        let lattice = IntegerLattice::new(rows)?;
        let mut weights = vec![2.0];
        weights.extend(std::iter::repeat_n(1.0, d - 1));
        Self::build(CuspKind::Complex, n, lattice, weights)
    }

    fn build(kind: CuspKind, n: u32, lattice: IntegerLattice, weights: Vec<f64>) -> Result<Self> {
        let dual = dual_lattice(&lattice)?;
        let covolume = lattice
            .covolume()
            .to_f64()
            .ok_or_else(|| Error::InvalidLattice("covolume not representable".into()))?;
        Ok(Self { kind, n, lattice, dual, weights, covolume })
    }

    pub fn kind(&self) -> CuspKind {
        self.kind
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn lattice(&self) -> &IntegerLattice {
        &self.lattice
    }

    pub fn dual(&self) -> &IntegerLattice {
        &self.dual
    }

    /// Real dimension N of the cusp.
    pub fn real_dim(&self) -> u32 {
        self.weights.len() as u32 + 1
    }

    pub fn cross_dim(&self) -> usize {
        self.weights.len()
    }

    /// Weight of coordinate `j` (0 for s).
    pub fn weight(&self, j: u32) -> f64 {
        if j == 0 {
            0.0
        } else {
            self.weights[j as usize - 1]
        }
    }

    /// Σ of the weights over a mask.
    pub fn mask_weight(&self, m: u32) -> f64 {
        (1..self.real_dim()).filter(|j| m & (1 << j) != 0).map(|j| self.weight(j)).sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// Volume of the cross-section at s = 0.
    pub fn cross_section_volume(&self) -> f64 {
        self.covolume
    }

    /// Volume of the cross-section at height s.
    pub fn volume_density(&self, s: f64) -> f64 {
        self.covolume * (-self.total_weight() * s).exp()
    }

    /// vol(Ω_{u,K}); K may be infinite.
    pub fn slab_volume(&self, u: f64, k: f64) -> f64 {
        let w = self.total_weight();
        let upper = if k.is_infinite() { 0.0 } else { (-w * k).exp() };
        self.covolume * ((-w * u).exp() - upper) / w
    }

    /// Euclidean frequency vector of a dual lattice element given in dual-basis coordinates.
    pub fn frequency(&self, dual_coords: &[i64]) -> Result<Vec<f64>> {
        if dual_coords.len() != self.cross_dim() {
            return Err(Error::Domain(format!(
                "dual vector needs {} coordinates, got {}",
                self.cross_dim(),
                dual_coords.len()
            )));
        }
        Ok(self.dual.vector(dual_coords).iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect())
    }
}
