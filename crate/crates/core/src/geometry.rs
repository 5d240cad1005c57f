//! Geodesic spheres and balls in the rank-one hyperbolic spaces, normalized
//! so that sectional curvature lies in [−4, −1].

use crate::error::{Error, Result};
use crate::quad;
use num_rational::Rational64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Kind {
    R,
    C,
    H,
    O,
}

impl Kind {
    pub const ALL: [Kind; 4] = [Kind::R, Kind::C, Kind::H, Kind::O];

    pub fn dim_k(self) -> u32 {
        match self {
            Kind::R => 1,
            Kind::C => 2,
            Kind::H => 4,
            Kind::O => 8,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::R => "R",
            Kind::C => "C",
            Kind::H => "H",
            Kind::O => "O",
        };
        f.write_str(s)
    }
}

impl FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" => Ok(Kind::R),
            "C" | "c" => Ok(Kind::C),
            "H" | "h" => Ok(Kind::H),
            "O" | "o" => Ok(Kind::O),
            other => Err(Error::Parse(format!("unknown space kind {other:?} (expected R, C, H or O)"))),
        }
    }
}

/// A rank-one hyperbolic space H^n over R, C, H or O.
///
/// The octonionic plane is accepted with either label n = 1 or n = 2; all
/// derived quantities depend only on `dim_k` and `m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RankOneSpace {
    pub kind: Kind,
    pub n: u32,
}

impl RankOneSpace {
    pub fn new(kind: Kind, n: u32) -> Result<Self> {
        let ok = match kind {
            Kind::R | Kind::C | Kind::H => n >= 2,
            Kind::O => n == 1 || n == 2,
        };
        if !ok {
            return Err(Error::Domain(format!("no rank-one space of kind {kind} with n = {n}")));
        }
        Ok(Self { kind, n })
    }

    pub fn dim_k(&self) -> u32 {
        self.kind.dim_k()
    }

    pub fn real_dim(&self) -> u32 {
        match self.kind {
            Kind::R => self.n,
            Kind::C | Kind::H => self.n * self.dim_k(),
            Kind::O => 16,
        }
    }

    /// Dimension of the geodesic spheres.
    pub fn m(&self) -> u32 {
        self.real_dim() - 1
    }

    /// Root multiplicities (m(λ), m(2λ)).
    pub fn root_multiplicities(&self) -> (u32, u32) {
        (self.m() + 1 - self.dim_k(), self.dim_k() - 1)
    }
}

impl fmt::Display for RankOneSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}^{}", self.kind, self.n)
    }
}

/// Shape operator data of the geodesic sphere of radius `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometrySample {
    pub r: f64,
    /// 2coth(2r), the larger eigenvalue.
    pub lambda1: f64,
    /// coth(r).
    pub lambda2: f64,
    pub multiplicity1: u32,
    pub multiplicity2: u32,
    pub mean_curvature: f64,
}

fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_finite() && r > 0.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must be positive and finite, got {r}")))
    }
}

pub fn sphere_shape(space: &RankOneSpace, r: f64) -> Result<GeometrySample> {
    check_radius(r)?;
    let (m_l, m_2l) = space.root_multiplicities();
    let lambda1 = 2.0 * coth(2.0 * r);
    let lambda2 = coth(r);
    Ok(GeometrySample {
        r,
        lambda1,
        lambda2,
        multiplicity1: m_2l,
        multiplicity2: m_l,
        mean_curvature: m_2l as f64 * lambda1 + m_l as f64 * lambda2,
    })
}

/// All m principal curvatures, largest first.
pub fn eigenvalues_descending(space: &RankOneSpace, r: f64) -> Result<Vec<f64>> {
    let s = sphere_shape(space, r)?;
    let mut v = vec![s.lambda1; s.multiplicity1 as usize];
    v.extend(std::iter::repeat_n(s.lambda2, s.multiplicity2 as usize));
    Ok(v)
}

fn check_degree(space: &RankOneSpace, k: u32) -> Result<()> {
    if k >= 1 && k < space.real_dim() {
        Ok(())
    } else {
        Err(Error::Domain(format!("degree k = {k} outside 1..{} for {space}", space.real_dim())))
    }
}

/// 𝓗/2 minus the sum of the k largest principal curvatures, in closed form.
pub fn eigenvalue_gap(space: &RankOneSpace, k: u32, r: f64) -> Result<f64> {
    check_degree(space, k)?;
    check_radius(r)?;
    let m = space.m() as f64;
    let dk = space.dim_k() as f64;
    let kf = k as f64;
    let head = (m / 2.0 - kf) * coth(r);
    Ok(if k < space.dim_k() {
        head + ((dk - 1.0) / 2.0 - kf) * r.tanh()
    } else {
        head - ((dk - 1.0) / 2.0) * r.tanh()
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QCase {
    /// dimK − 1 < k < (realDim − dimK)/2.
    A,
    /// k ≤ dimK − 1.
    B,
    /// Case-B range but the constant is below one.
    Exceptional,
    /// Neither range applies.
    Uncovered,
}

/// Radial lower bound r ↦ 2(n−k−1)coth r + 2tanh 2r for complex spaces, k < n.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexRefined {
    pub n: u32,
    pub k: u32,
}

impl ComplexRefined {
    pub fn eval(&self, r: f64) -> f64 {
        2.0 * (self.n - self.k - 1) as f64 * coth(r) + 2.0 * (2.0 * r).tanh()
    }

    /// The same bound with 2coth 2r in place of 2tanh 2r.
    pub fn eval_strong(&self, r: f64) -> f64 {
        2.0 * (self.n - self.k - 1) as f64 * coth(r) + 2.0 * coth(2.0 * r)
    }

    /// Large-radius limit 2(n − k).
    pub fn limit(&self) -> u32 {
        2 * (self.n - self.k)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QBound {
    pub case: QCase,
    /// The case constant; for exceptional triples the (sub-unit) case-B value.
    pub constant: Option<Rational64>,
    pub refined: Option<ComplexRefined>,
}

impl QBound {
    pub fn is_generic(&self) -> bool {
        matches!(self.case, QCase::A | QCase::B)
    }
}

/// Lower bound for the radial geometric term of the ball Price identity.
pub fn q_lower_bound(space: &RankOneSpace, k: u32) -> Result<QBound> {
    check_degree(space, k)?;
    let d = space.real_dim() as i64;
    let dk = space.dim_k() as i64;
    let ki = k as i64;
    let refined = (space.kind == Kind::C && k < space.n).then_some(ComplexRefined { n: space.n, k });
    let (case, constant) = if ki < dk {
        let c = Rational64::new(d + dk - 2, 2) - 2 * ki;
        if c >= Rational64::from_integer(1) {
            (QCase::B, Some(c))
        } else {
            (QCase::Exceptional, Some(c))
        }
    } else if 2 * ki < d - dk {
        (QCase::A, Some(Rational64::new(d - dk, 2) - ki))
    } else {
        (QCase::Uncovered, None)
    };
    Ok(QBound { case, constant, refined })
}

/// Γ(x) for positive half-integers x.
fn gamma_half_integer(twice: u32) -> f64 {
    let (mut g, mut x) = if twice.is_multiple_of(2) { (1.0, 1.0) } else { (PI.sqrt(), 0.5) };
    let target = twice as f64 / 2.0;
    while x < target {
        g *= x;
        x += 1.0;
    }
    g
}

/// Area of the unit round m-sphere in R^{m+1}.
pub fn sphere_area(m: u32) -> f64 {
    2.0 * PI.powf((m + 1) as f64 / 2.0) / gamma_half_integer(m + 1)
}

/// Radial volume density sinh^{m(λ)+m(2λ)}(t)·cosh^{m(2λ)}(t).
pub fn volume_density(space: &RankOneSpace, t: f64) -> f64 {
    let (m_l, m_2l) = space.root_multiplicities();
    t.sinh().powi((m_l + m_2l) as i32) * t.cosh().powi(m_2l as i32)
}

/// Volume of the geodesic ball of radius r.
pub fn ball_volume(space: &RankOneSpace, r: f64) -> Result<f64> {
    if !(r.is_finite() && r >= 0.0) {
        return Err(Error::Domain(format!("radius must be nonnegative and finite, got {r}")));
    }
    if r == 0.0 {
        return Ok(0.0);
    }
    let q = quad::integrate(|t| volume_density(space, t), 0.0, r, 0.0, 1e-13)?;
    Ok(sphere_area(space.m()) * q.value)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(kind: Kind, n: u32) -> RankOneSpace {
        RankOneSpace::new(kind, n).unwrap()
    }

    #[test]
    fn dimensions() {
        assert_eq!(sp(Kind::R, 5).real_dim(), 5);
        assert_eq!(sp(Kind::C, 3).real_dim(), 6);
        assert_eq!(sp(Kind::H, 2).real_dim(), 8);
        assert_eq!(sp(Kind::O, 1).real_dim(), 16);
        assert_eq!(sp(Kind::O, 2).m(), 15);
        assert_eq!(sp(Kind::H, 3).root_multiplicities(), (8, 3));
        assert_eq!(sp(Kind::R, 4).root_multiplicities(), (3, 0));
        assert!(RankOneSpace::new(Kind::O, 3).is_err());
        assert!(RankOneSpace::new(Kind::C, 1).is_err());
    }

    #[test]
    fn complex_plane_shape() {
        let s = sphere_shape(&sp(Kind::C, 2), 1.0).unwrap();
        assert!((s.lambda1 - 2.074_629_5).abs() < 1e-6);
        assert!((s.lambda2 - 1.313_035_3).abs() < 1e-6);
        assert_eq!((s.multiplicity1, s.multiplicity2), (1, 2));
        let h = 2.0 / 2f64.tanh() + 2.0 / 1f64.tanh();
        assert!((s.mean_curvature - h).abs() < 1e-14);
    }

    #[test]
    fn quaternionic_mean_curvature() {
        let s = sphere_shape(&sp(Kind::H, 2), 0.5).unwrap();
        let h = 6.0 / 1f64.tanh() + 4.0 / 0.5f64.tanh();
        assert!((s.mean_curvature - h).abs() < 1e-13);
        let sum: f64 = eigenvalues_descending(&sp(Kind::H, 2), 0.5).unwrap().iter().sum();
        assert!((sum - h).abs() < 1e-13);
    }

    #[test]
    fn real_space_has_single_eigenvalue() {
        let s = sphere_shape(&sp(Kind::R, 4), 0.7).unwrap();
        assert_eq!((s.multiplicity1, s.multiplicity2), (0, 3));
        assert!((s.mean_curvature - 3.0 / 0.7f64.tanh()).abs() < 1e-14);
    }

    #[test]
    fn mean_curvature_limit() {
        for space in [sp(Kind::R, 6), sp(Kind::C, 3), sp(Kind::H, 2), sp(Kind::O, 1)] {
            let s = sphere_shape(&space, 40.0).unwrap();
            let lim = (space.m() + space.dim_k() - 1) as f64;
            assert!((s.mean_curvature - lim).abs() < 1e-10);
        }
    }

    #[test]
    fn nonpositive_radius_rejected() {
        assert!(sphere_shape(&sp(Kind::C, 2), 0.0).is_err());
        assert!(ball_volume(&sp(Kind::C, 2), -1.0).is_err());
        assert!(eigenvalue_gap(&sp(Kind::C, 2), 4, 1.0).is_err());
        assert!(eigenvalue_gap(&sp(Kind::C, 2), 0, 1.0).is_err());
    }

    #[test]
    fn gap_examples() {
        let g = eigenvalue_gap(&sp(Kind::C, 2), 1, 30.0).unwrap();
        assert!(g.abs() < 1e-12);
        let r = 0.8;
        let g = eigenvalue_gap(&sp(Kind::H, 4), 4, r).unwrap();
        assert!((g - (3.5 / r.tanh() - 1.5 * r.tanh())).abs() < 1e-14);
        assert!((eigenvalue_gap(&sp(Kind::H, 4), 4, 40.0).unwrap() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn q_bound_examples() {
        let q = q_lower_bound(&sp(Kind::H, 4), 4).unwrap();
        assert_eq!((q.case, q.constant), (QCase::A, Some(Rational64::from_integer(2))));
        let q = q_lower_bound(&sp(Kind::C, 3), 1).unwrap();
        assert_eq!((q.case, q.constant), (QCase::B, Some(Rational64::from_integer(1))));
        assert!(q.refined.is_some());
        assert_eq!(q_lower_bound(&sp(Kind::C, 2), 1).unwrap().case, QCase::Exceptional);
        assert_eq!(q_lower_bound(&sp(Kind::H, 2), 3).unwrap().case, QCase::Exceptional);
        assert_eq!(q_lower_bound(&sp(Kind::H, 2), 2).unwrap().case, QCase::B);
        for n in [1, 2] {
            assert_eq!(q_lower_bound(&sp(Kind::O, n), 6).unwrap().case, QCase::Exceptional);
            assert_eq!(q_lower_bound(&sp(Kind::O, n), 7).unwrap().case, QCase::Exceptional);
            assert_eq!(q_lower_bound(&sp(Kind::O, n), 5).unwrap().case, QCase::B);
        }
        assert_eq!(q_lower_bound(&sp(Kind::C, 3), 2).unwrap().case, QCase::Uncovered);
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(1) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(2) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(3) - 2.0 * PI * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 8.0 * PI * PI / 3.0).abs() < 1e-12);
    }

    #[test]
    fn ball_volume_oracles() {
        let v = ball_volume(&sp(Kind::R, 3), 1.0).unwrap();
        let exact = PI * (2f64.sinh() - 2.0);
        assert!((v / exact - 1.0).abs() < 1e-12);
        let v = ball_volume(&sp(Kind::C, 2), 2.0).unwrap();
        let exact = 2.0 * PI * PI * 2f64.sinh().powi(4) / 4.0;
        assert!((v / exact - 1.0).abs() < 1e-12);
        assert_eq!(ball_volume(&sp(Kind::H, 2), 0.0).unwrap(), 0.0);
    }
}
