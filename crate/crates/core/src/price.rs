//! Decay factors for the L² mass of harmonic forms across geodesic balls
//! and cusp slabs.

use crate::error::{Error, Result};
use crate::geometry::{q_lower_bound, QCase, RankOneSpace};
use num_rational::Rational64;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "policy", content = "value")]
pub enum ConstantPolicy {
    Explicit(f64),
    Existential,
}

impl fmt::Display for ConstantPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstantPolicy::Explicit(v) => write!(f, "explicit({v})"),
            ConstantPolicy::Existential => f.write_str("existential"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CuspKind {
    Real,
    Complex,
}

impl std::str::FromStr for CuspKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "real" | "r" => Ok(CuspKind::Real),
            "complex" | "c" => Ok(CuspKind::Complex),
            other => Err(Error::Parse(format!("unknown cusp kind {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DecaySetting {
    BallGeneric,
    BallComplex,
    CuspReal,
    CuspComplex,
}

/// x ↦ constant·exp(−rate·(x − origin)) for x ≥ origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecayFactor {
    pub setting: DecaySetting,
    pub rate: Rational64,
    pub constant: f64,
    pub policy: ConstantPolicy,
    /// Ball settings: exponent magnitude on V_min per unit injectivity radius,
    /// rate/(realDim + dimK − 2).
    pub vmin_exponent: Option<Rational64>,
    pub origin: f64,
}

impl DecayFactor {
    pub fn rate_f64(&self) -> f64 {
        self.rate.to_f64().expect("small rational")
    }

    pub fn evaluate(&self, x: f64) -> Result<f64> {
        if !(x.is_finite() && x >= self.origin) {
            return Err(Error::Domain(format!("decay evaluated at {x}, below origin {}", self.origin)));
        }
        Ok(self.constant * (-self.rate_f64() * (x - self.origin)).exp())
    }
}

/// Ball decay from radius 1 to radius τ for harmonic k-forms.
///
/// Complex spaces use the refined rate 2(n−k) for every 1 ≤ k < n. Other
/// kinds use the boxed generic rates: realDim − dimK − 2k (case A) and
/// realDim + dimK − 4k (case B).
pub fn ball_decay(space: &RankOneSpace, k: u32) -> Result<DecayFactor> {
    let q = q_lower_bound(space, k)?;
    let d = space.real_dim() as i64;
    let dk = space.dim_k() as i64;
    let ki = k as i64;
    let denom = d + dk - 2;
    let (setting, rate) = if let Some(r) = q.refined {
        (DecaySetting::BallComplex, r.limit() as i64)
    } else {
        match q.case {
            QCase::A => (DecaySetting::BallGeneric, d - dk - 2 * ki),
            QCase::B => (DecaySetting::BallGeneric, d + dk - 4 * ki),
            QCase::Exceptional => {
                return Err(Error::Unsupported(format!(
                    "exceptional triple ({}, n={}, k={k}) has no Price decay",
                    space.kind, space.n
                )))
            }
            QCase::Uncovered => {
                return Err(Error::OutOfRange(format!(
                    "k = {k} lies outside both ranges of the Price bound for {space}"
                )))
            }
        }
    };
    Ok(DecayFactor {
        setting,
        rate: Rational64::from_integer(rate),
        constant: 1.0,
        policy: ConstantPolicy::Existential,
        vmin_exponent: Some(Rational64::new(rate, denom)),
        origin: 1.0,
    })
}

/// Generic (non-refined) ball rate, for comparison with the refined one.
pub fn ball_generic_rate(space: &RankOneSpace, k: u32) -> Result<Option<i64>> {
    let q = q_lower_bound(space, k)?;
    let d = space.real_dim() as i64;
    let dk = space.dim_k() as i64;
    let ki = k as i64;
    Ok(match q.case {
        QCase::A => Some(d - dk - 2 * ki),
        QCase::B => Some(d + dk - 4 * ki),
        _ => None,
    })
}

/// Cusp decay rate and constant for k-forms on a real (n−1)-torus cusp or a
/// complex cusp of complex dimension n.
pub fn cusp_decay_factor(kind: CuspKind, n: u32, k: u32) -> Result<DecayFactor> {
    let (n, k) = (n as i64, k as i64);
    match kind {
        CuspKind::Real => {
            if n < 2 || 2 * k >= n - 1 {
                return Err(Error::Domain(format!(
                    "real cusp decay needs k < (n−1)/2, got n={n}, k={k}"
                )));
            }
            let c = Rational64::new(n + 1 - 2 * k, n - 1 - 2 * k);
            Ok(DecayFactor {
                setting: DecaySetting::CuspReal,
                rate: Rational64::from_integer(n - 1 - 2 * k),
                constant: c.to_f64().expect("small rational"),
                policy: ConstantPolicy::Explicit(c.to_f64().expect("small rational")),
                vmin_exponent: None,
                origin: 0.0,
            })
        }
        CuspKind::Complex => {
            if n < 2 || k >= n {
                return Err(Error::Domain(format!("complex cusp decay needs k < n, got n={n}, k={k}")));
            }
            Ok(DecayFactor {
                setting: DecaySetting::CuspComplex,
                rate: Rational64::from_integer(2 * (n - k)),
                constant: 1.0,
                policy: ConstantPolicy::Explicit(1.0),
                vmin_exponent: None,
                origin: 0.0,
            })
        }
    }
}

/// (c·e^{−rate·s}, c).
pub fn cusp_decay(kind: CuspKind, n: u32, k: u32, s: f64) -> Result<(f64, f64)> {
    let f = cusp_decay_factor(kind, n, k)?;
    Ok((f.evaluate(s)?, f.constant))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Kind;

    fn sp(kind: Kind, n: u32) -> RankOneSpace {
        RankOneSpace::new(kind, n).unwrap()
    }

    #[test]
    fn complex_ball_examples() {
        let f = ball_decay(&sp(Kind::C, 3), 1).unwrap();
        assert_eq!(f.setting, DecaySetting::BallComplex);
        assert!((f.evaluate(2.0).unwrap() - (-4f64).exp()).abs() < 1e-16);
        assert_eq!(f.evaluate(1.0).unwrap(), 1.0);
        assert!(f.evaluate(0.5).is_err());
    }

    #[test]
    fn quaternionic_case_a() {
        let f = ball_decay(&sp(Kind::H, 4), 4).unwrap();
        assert_eq!(f.rate, Rational64::from_integer(4));
        assert_eq!(f.vmin_exponent, Some(Rational64::new(2, 9)));
    }

    #[test]
    fn exceptional_and_uncovered() {
        let e = ball_decay(&sp(Kind::H, 2), 3).unwrap_err();
        assert!(matches!(e, Error::Unsupported(ref s) if s.contains("n=2") && s.contains("k=3")));
        assert!(matches!(ball_decay(&sp(Kind::O, 1), 6), Err(Error::Unsupported(_))));
        assert!(matches!(ball_decay(&sp(Kind::R, 5), 2), Err(Error::OutOfRange(_))));
        // The refined complex bound has no exceptional case.
        assert_eq!(ball_decay(&sp(Kind::C, 2), 1).unwrap().rate, Rational64::from_integer(2));
    }

    #[test]
    fn real_ball_rate_matches_cusp_rate() {
        for n in 3..12u32 {
            for k in 1..n {
                if 2 * k + 1 < n {
                    let b = ball_decay(&sp(Kind::R, n), k).unwrap();
                    let c = cusp_decay_factor(CuspKind::Real, n, k).unwrap();
                    assert_eq!(b.rate, c.rate);
                }
            }
        }
    }

    #[test]
    fn cusp_examples() {
        let (f, c) = cusp_decay(CuspKind::Real, 5, 1, 1.0).unwrap();
        assert_eq!(c, 2.0);
        assert!((f - 2.0 * (-2f64).exp()).abs() < 1e-16);
        assert_eq!(cusp_decay(CuspKind::Complex, 3, 1, 0.0).unwrap(), (1.0, 1.0));
        let (f, c) = cusp_decay(CuspKind::Real, 7, 2, 2.0).unwrap();
        assert_eq!(c, 2.0);
        assert!((f - 2.0 * (-4f64).exp()).abs() < 1e-16);
        assert!(cusp_decay(CuspKind::Real, 5, 2, 0.0).is_err());
        assert!(cusp_decay(CuspKind::Complex, 3, 3, 0.0).is_err());
    }
}
