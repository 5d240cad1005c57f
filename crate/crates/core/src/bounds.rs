//! Betti-number bound calculators with exact exponents, peaking utilities
//! and cusp-count bounds.
//!
//! Bounds whose constant is only known to exist are reported with constant 1
//! and [`ConstantPolicy::Existential`].

use crate::error::{Error, Result};
use crate::geometry::{ball_volume, Kind, RankOneSpace};
use crate::lattice::VerifiedHypothesis;
use crate::matrix_coeff::Group;
use crate::price::{ball_decay, ConstantPolicy};
use num_rational::Rational64;
use num_traits::{One, ToPrimitive};
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize, Serializer};
use std::collections::BTreeMap;
use std::f64::consts::PI;

/// Geometric inputs of a bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundInputs {
    pub space: RankOneSpace,
    pub k: u32,
    pub vol: f64,
    pub v_min: f64,
    pub inj_thick: f64,
    #[serde(default)]
    pub cusp_vols: Vec<f64>,
    #[serde(default)]
    pub cusp_lattice_deltas: Vec<f64>,
    /// V_min over the union of the cusp slabs, needed when cusp volume is present.
    #[serde(default)]
    pub v_min_cusps: Option<f64>,
}

impl BoundInputs {
    pub fn new(space: RankOneSpace, k: u32, vol: f64, v_min: f64, inj_thick: f64) -> Self {
        Self { space, k, vol, v_min, inj_thick, cusp_vols: Vec::new(), cusp_lattice_deltas: Vec::new(), v_min_cusps: None }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, x: f64| {
            if x > 0.0 && x.is_finite() {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be positive and finite, got {x}")))
            }
        };
        pos("vol", self.vol)?;
        pos("vMin", self.v_min)?;
        pos("injThick", self.inj_thick)?;
        if self.v_min > self.vol {
            return Err(Error::Domain(format!("vMin = {} exceeds vol = {}", self.v_min, self.vol)));
        }
        for &v in &self.cusp_vols {
            pos("cuspVols entry", v)?;
        }
        for &d in &self.cusp_lattice_deltas {
            pos("cuspLatticeDeltas entry", d)?;
        }
        if let Some(v) = self.v_min_cusps {
            pos("vMinCusps", v)?;
        }
        Ok(())
    }

    pub fn cusp_volume(&self) -> f64 {
        self.cusp_vols.iter().sum()
    }
}

fn serialize_exponents<S: Serializer>(e: &BTreeMap<String, Rational64>, s: S) -> std::result::Result<S::Ok, S::Error> {
    let m: BTreeMap<&str, String> = e.iter().map(|(k, v)| (k.as_str(), v.to_string())).collect();
    m.serialize(s)
}

/// Bound value with exact exponents per input.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct BoundReport {
    pub formula_id: String,
    #[serde(serialize_with = "serialize_exponents")]
    pub exponents: BTreeMap<String, Rational64>,
    pub constant_policy: ConstantPolicy,
    pub value: f64,
}

impl BoundReport {
    fn new(formula_id: &str, exponents: &[(&str, Rational64)], value: f64) -> Self {
        Self {
            formula_id: formula_id.to_string(),
            exponents: exponents.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
            constant_policy: ConstantPolicy::Existential,
            value,
        }
    }

    pub fn exponent(&self, input: &str) -> Option<Rational64> {
        self.exponents.get(input).copied()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

fn pow(x: f64, e: Rational64) -> f64 {
    x.powf(e.to_f64().expect("small rational"))
}

fn require_inj(inj: f64) -> Result<()> {
    if inj >= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("bound requires inj ≥ 1, got {inj}")))
    }
}

/// Betti-number bound b^k ≤ C·Vol·V_min^e for compact quotients.
///
/// Real: e = (2k+1−n)/(n−1) for k < (n−1)/2 and Vol/inj at k = (n−1)/2.
/// Complex: e = (k−n)/n. Quaternionic and octonionic: e = −rate·inj/(d+dimK−2)
/// with the per-τ Price rate; the reported `vMinPerInj` exponent is the
/// coefficient of inj.
pub fn compact_bound(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    require_inj(inputs.inj_thick)?;
    let RankOneSpace { kind, n } = inputs.space;
    let k = inputs.k as i64;
    let ni = n as i64;
    match kind {
        Kind::R => {
            if 2 * k == ni - 1 {
                let v = inputs.vol / inputs.inj_thick;
                return Ok(BoundReport::new(
                    "compact-real-critical",
                    &[("vol", Rational64::one()), ("inj", -Rational64::one())],
                    v,
                ));
            }
            if 2 * k > ni - 1 {
                return Err(Error::OutOfRange(format!("real compact bound needs k ≤ (n−1)/2, got n={n}, k={k}")));
            }
            let e = Rational64::new(2 * k + 1 - ni, ni - 1);
            let v = inputs.vol * pow(inputs.v_min, e);
            Ok(BoundReport::new("compact-real", &[("vol", Rational64::one()), ("vMin", e)], v))
        }
        Kind::C => {
            if k >= ni || k < 1 {
                return Err(Error::OutOfRange(format!("complex compact bound needs 1 ≤ k < n, got n={n}, k={k}")));
            }
            let e = Rational64::new(k - ni, ni);
            let v = inputs.vol * pow(inputs.v_min, e);
            Ok(BoundReport::new("compact-complex", &[("vol", Rational64::one()), ("vMin", e)], v))
        }
        Kind::H | Kind::O => {
            let decay = ball_decay(&inputs.space, inputs.k)?;
            let per_inj = -decay.vmin_exponent.expect("generic rates carry a V_min exponent");
            let v = inputs.vol * inputs.v_min.powf(per_inj.to_f64().expect("small rational") * inputs.inj_thick);
            Ok(BoundReport::new(
                "compact-boxed",
                &[("vol", Rational64::one()), ("vMinPerInj", per_inj)],
                v,
            ))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Setting {
    Compact,
    Cusped,
}

impl std::str::FromStr for Setting {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "compact" => Ok(Setting::Compact),
            "cusped" => Ok(Setting::Cusped),
            other => Err(Error::Parse(format!("unknown setting {other:?} (expected compact or cusped)"))),
        }
    }
}

/// Valid degrees of the congruence bound.
pub fn congruence_degrees(group: Group, n: u32) -> std::ops::Range<u32> {
    match group {
        Group::SU => 1..n,
        Group::SO => 1..n.saturating_sub(1).div_ceil(2),
    }
}

/// Exponent e with b^k ≤ C·Vol^e along principal congruence subgroups.
pub fn congruence_exponent(group: Group, n: u32, k: u32, setting: Setting) -> Result<Rational64> {
    if !congruence_degrees(group, n).contains(&k) {
        return Err(Error::Domain(format!("congruence exponent undefined for {group:?}, n={n}, k={k}")));
    }
    let (n, k) = (n as i64, k as i64);
    Ok(match (group, setting) {
        (Group::SU, Setting::Compact) => Rational64::one() + Rational64::new(2 * k - 2 * n, n * n + 2 * n),
        (Group::SU, Setting::Cusped) => Rational64::one() - Rational64::new(4 * (n - k), (n + 1) * (n + 1) - 1),
        (Group::SO, _) => Rational64::one() - Rational64::new(4 * (n - 1 - 2 * k), n * (n + 1)),
    })
}

/// The second printed form (n²+2k)/(n²+2n) of the compact SU exponent.
pub fn su_compact_exponent_alt(n: u32, k: u32) -> Rational64 {
    let (n, k) = (n as i64, k as i64);
    Rational64::new(n * n + 2 * k, n * n + 2 * n)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CongruenceRow {
    pub group: Group,
    pub setting: Setting,
    pub n: u32,
    pub k: u32,
    #[serde(serialize_with = "serialize_rational")]
    pub exponent: Rational64,
    pub formula_id: String,
}

fn serialize_rational<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&r.to_string())
}

/// Congruence exponents for both groups and settings, 2 ≤ n ≤ n_max, all valid k.
pub fn congruence_table(n_max: u32) -> Vec<CongruenceRow> {
    let mut rows = Vec::new();
    for group in [Group::SO, Group::SU] {
        for setting in [Setting::Compact, Setting::Cusped] {
            for n in 2..=n_max {
                for k in congruence_degrees(group, n) {
                    let exponent = congruence_exponent(group, n, k, setting).expect("valid degree");
                    let formula_id = format!(
                        "congruence-{}-{}",
                        format!("{group:?}").to_lowercase(),
                        format!("{setting:?}").to_lowercase()
                    );
                    rows.push(CongruenceRow { group, setting, n, k, exponent, formula_id });
                }
            }
        }
    }
    rows
}

/// Dimension bound for L² harmonic forms on finite-volume quotients.
///
/// Complex and real below the critical degree: C[Vol·V_min(M₀)^e + Vol(cusps)·V_min(cusp slabs)^e].
/// Real critical degree: C·Vol/inj(M₀).
pub fn cusped_l2_bound(inputs: &BoundInputs) -> Result<BoundReport> {
    inputs.validate()?;
    require_inj(inputs.inj_thick)?;
    let RankOneSpace { kind, n } = inputs.space;
    let (ni, k) = (n as i64, inputs.k as i64);
    let (e, id) = match kind {
        Kind::C => {
            if k < 1 || k >= ni {
                return Err(Error::Domain(format!("complex L² bound needs 1 ≤ k < n, got n={n}, k={k}")));
            }
            (Rational64::new(k - ni, ni), "cusped-complex")
        }
        Kind::R => {
            if 2 * k == ni - 1 {
                return Ok(BoundReport::new(
                    "cusped-real-critical",
                    &[("vol", Rational64::one()), ("inj", -Rational64::one())],
                    inputs.vol / inputs.inj_thick,
                ));
            }
            if 2 * k > ni - 1 {
                return Err(Error::Domain(format!("real L² bound needs k ≤ (n−1)/2, got n={n}, k={k}")));
            }
            (Rational64::new(2 * k + 1 - ni, ni - 1), "cusped-real")
        }
        other => return Err(Error::Unsupported(format!("no cusped L² bound for kind {other}"))),
    };
    let cusp_vol = inputs.cusp_volume();
    let second = if cusp_vol > 0.0 {
        let vm = inputs
            .v_min_cusps
            .ok_or_else(|| Error::Domain("cusp volume given without vMinCusps".into()))?;
        cusp_vol * pow(vm, e)
    } else {
        0.0
    };
    let value = inputs.vol * pow(inputs.v_min, e) + second;
    Ok(BoundReport::new(
        id,
        &[("vol", Rational64::one()), ("vMin", e), ("cuspVol", Rational64::one()), ("vMinCusps", e)],
        value,
    ))
}

/// Slab depth R = ln(2(n+1−2k)/(n−1−2k))/(n−1−2k) past which cusp mass is controlled.
pub fn peaking_threshold(n: u32, k: u32) -> Result<f64> {
    let (n, k) = (n as f64, k as f64);
    let g = n - 1.0 - 2.0 * k;
    if g <= 0.0 {
        return Err(Error::Domain(format!("peaking threshold needs k < (n−1)/2, got n={n}, k={k}")));
    }
    Ok((2.0 * (n + 1.0 - 2.0 * k) / g).ln() / g)
}

/// (3/π²)·Σ_{j=1}^{ν+1} j⁻², strictly increasing with supremum 1/2.
pub fn nu_threshold(nu: u32) -> f64 {
    let partial: f64 = (1..=nu as u64 + 1).rev().map(|j| 1.0 / (j as f64 * j as f64)).sum();
    3.0 / (PI * PI) * partial
}

/// Cusps a with e^{2−ν}/(2πδ_a) < 1/(4(ν+1)²).
pub fn nu_index_set(nu: u32, deltas: &[f64]) -> Vec<bool> {
    let rhs = 1.0 / (4.0 * (nu as f64 + 1.0).powi(2));
    deltas
        .iter()
        .map(|&d| d > 0.0 && (2.0 - nu as f64).exp() / (2.0 * PI * d) < rhs)
        .collect()
}

/// Radius 1/(20(ν+1)²) used by the critical cusp bound.
pub fn critical_radius(nu: u32) -> f64 {
    1.0 / (20.0 * (nu as f64 + 1.0).powi(2))
}

/// e^{−ν}·volSlab·(1+40(ν+1)²)^{n+1}·(λ₁⁻¹/(20(ν+1)²) + e^{−ν}/2)^{n−2}.
///
/// The hypothesis must have been verified at ν and radius `critical_radius(ν)`.
pub fn critical_cusp_bound(nu: u32, vol_slab: f64, hyp: &VerifiedHypothesis) -> Result<f64> {
    if hyp.nu() != nu {
        return Err(Error::Precondition(format!("hypothesis verified for ν = {}, not {nu}", hyp.nu())));
    }
    let r = critical_radius(nu);
    if (hyp.radius() - r).abs() > 1e-12 * r {
        return Err(Error::Precondition(format!(
            "hypothesis verified at radius {}, bound needs {r}",
            hyp.radius()
        )));
    }
    if !(vol_slab > 0.0 && vol_slab.is_finite()) {
        return Err(Error::Domain(format!("slab volume must be positive, got {vol_slab}")));
    }
    let n = hyp.ambient_dim() as i32;
    let nu1 = nu as f64 + 1.0;
    let enu = (-(nu as f64)).exp();
    Ok(enu * vol_slab * (1.0 + 40.0 * nu1 * nu1).powi(n + 1) * (r / hyp.lambda1() + enu / 2.0).powi(n - 2))
}

/// (ν+1)²e^{−(n−2)ν}·volSlab/inj.
pub fn critical_bound_shape(nu: u32, n: u32, vol_slab: f64, inj: f64) -> f64 {
    let nu = nu as f64;
    (nu + 1.0).powi(2) * (-(n as f64 - 2.0) * nu).exp() * vol_slab / inj
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CuspCount {
    pub max_cusps: f64,
    pub ratio: f64,
}

/// Cusps per unit volume ≤ 1/Vol(B_{inj/2}).
pub fn cusp_count_bound(space: &RankOneSpace, inj_thick: f64, vol: f64) -> Result<CuspCount> {
    if !(inj_thick > 0.0 && inj_thick.is_finite()) {
        return Err(Error::Domain(format!("injThick must be positive, got {inj_thick}")));
    }
    let ratio = 1.0 / ball_volume(space, inj_thick / 2.0)?;
    Ok(CuspCount { max_cusps: vol * ratio, ratio })
}

/// Constants of the de Rham bound; `None` means existential (taken as 1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DerhamConstants {
    pub l_n: Option<f64>,
    pub c2: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DerhamReport {
    pub report: BoundReport,
    pub cusp_term: f64,
    pub l2_term: f64,
    /// Smallest inj past which the cusp-count term stays below the L² term.
    pub crossover_inj: Option<f64>,
}

/// b^k ≤ Vol·(L(n)·ratio(inj) + c/inj) in the middle degree of an odd real dimension.
pub fn derham_critical_bound(
    space: &RankOneSpace,
    inj_thick: f64,
    vol: f64,
    constants: DerhamConstants,
) -> Result<DerhamReport> {
    if space.kind != Kind::R || space.n.is_multiple_of(2) {
        return Err(Error::Domain(format!("de Rham critical bound needs real hyperbolic n odd, got {space}")));
    }
    if !(vol > 0.0 && vol.is_finite()) {
        return Err(Error::Domain(format!("vol must be positive, got {vol}")));
    }
    let l = constants.l_n.unwrap_or(1.0);
    let c = constants.c2.unwrap_or(1.0);
    let ratio = cusp_count_bound(space, inj_thick, vol)?.ratio;
    let cusp_term = vol * l * ratio;
    let l2_term = vol * c / inj_thick;
    let mut report = BoundReport::new(
        "derham-critical",
        &[("vol", Rational64::one()), ("inj", -Rational64::one())],
        cusp_term + l2_term,
    );
    if let (Some(l), Some(c)) = (constants.l_n, constants.c2) {
        report.constant_policy = ConstantPolicy::Explicit(l.max(c));
    }
    let excess = |x: f64| -> Result<f64> { Ok(l * cusp_count_bound(space, x, 1.0)?.ratio - c / x) };
    let crossover_inj = crossover(excess)?;
    Ok(DerhamReport { report, cusp_term, l2_term, crossover_inj })
}

fn crossover(g: impl Fn(f64) -> Result<f64>) -> Result<Option<f64>> {
    // g > 0 for small inj, g < 0 for large inj.
    let mut hi = 1e-3;
    if g(hi)? <= 0.0 {
        return Ok(Some(hi));
    }
    while g(hi)? > 0.0 {
        hi *= 2.0;
        if hi > 1e4 {
            return Ok(None);
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid)? > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-12 * hi {
            break;
        }
    }
    Ok(Some(hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct PeakingReport {
    pub b: u32,
    pub trials: u64,
    pub mean: f64,
    pub std_error: f64,
    pub expected: f64,
    pub pass: bool,
}

/// Monte-Carlo average of h₁² over the unit-volume sphere S^{b−1}, against 1/b.
pub fn verify_peaking_identity<R: Rng + ?Sized>(b: u32, trials: u64, rng: &mut R) -> Result<PeakingReport> {
    if b == 0 || trials < 2 {
        return Err(Error::Domain(format!("peaking check needs b ≥ 1 and ≥ 2 trials, got b={b}, trials={trials}")));
    }
    let mut x = vec![0.0f64; b as usize];
    let (mut mean, mut m2) = (0.0, 0.0);
    for t in 1..=trials {
        for xi in x.iter_mut() {
            *xi = rng.sample(StandardNormal);
        }
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let h = x[0] * x[0] / r2;
        let d = h - mean;
        mean += d / t as f64;
        m2 += d * (h - mean);
    }
    let std_error = (m2 / (trials - 1) as f64 / trials as f64).sqrt();
    let expected = 1.0 / b as f64;
    let pass = (mean - expected).abs() <= 3.0 * std_error + 1e-12;
    Ok(PeakingReport { b, trials, mean, std_error, expected, pass })
}
