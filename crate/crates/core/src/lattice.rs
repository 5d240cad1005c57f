//! Full-rank lattices with rational bases: successive minima, duals,
//! transference and ball point counts.
//!
//! Squared norms are compared exactly. A floating-point LLL pass picks a
//! short basis for enumeration; the unimodular change of basis is tracked in
//! integers, so reduction quality never affects exactness.

use crate::error::{Error, Result};
use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::cmp::Ordering;
use std::fmt;

pub const DEFAULT_BUDGET: u64 = 10_000_000;
pub const MAX_DIM: usize = 12;

/// Rows of `basis` are the basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntegerLattice {
    basis: Vec<Vec<BigRational>>,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn determinant(m: &[Vec<BigRational>]) -> BigRational {
    let d = m.len();
    let mut a = m.to_vec();
    let mut det = BigRational::one();
    for c in 0..d {
        let Some(p) = (c..d).find(|&r| !a[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= &a[c][c];
        for r in c + 1..d {
            if a[r][c].is_zero() {
                continue;
            }
            let f = &a[r][c] / &a[c][c];
            for j in c..d {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    det
}

fn inverse(m: &[Vec<BigRational>]) -> Result<Vec<Vec<BigRational>>> {
    let d = m.len();
    let mut a: Vec<Vec<BigRational>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..d).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    for c in 0..d {
        let p = (c..d)
            .find(|&r| !a[r][c].is_zero())
            .ok_or_else(|| Error::InvalidLattice("singular basis".into()))?;
        a.swap(p, c);
        let piv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v /= &piv;
        }
        for r in 0..d {
            if r == c || a[r][c].is_zero() {
                continue;
            }
            let f = a[r][c].clone();
            for j in 0..2 * d {
                let t = &f * &a[c][j];
                a[r][j] -= t;
            }
        }
    }
    Ok(a.into_iter().map(|r| r[d..].to_vec()).collect())
}

impl IntegerLattice {
    pub fn new(basis: Vec<Vec<BigRational>>) -> Result<Self> {
        let d = basis.len();
        if d == 0 || d > MAX_DIM {
            return Err(Error::InvalidLattice(format!("dimension {d} outside 1..={MAX_DIM}")));
        }
        if basis.iter().any(|r| r.len() != d) {
            return Err(Error::InvalidLattice("basis must be square".into()));
        }
        if determinant(&basis).is_zero() {
            return Err(Error::InvalidLattice("singular basis".into()));
        }
        Ok(Self { basis })
    }

    pub fn from_integers(rows: &[Vec<i64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect())
    }

    pub fn identity(d: usize) -> Self {
        Self::diagonal(&vec![q(1); d]).expect("identity is nonsingular")
    }

    pub fn diagonal(entries: &[BigRational]) -> Result<Self> {
        let d = entries.len();
        Self::new(
            (0..d)
                .map(|i| (0..d).map(|j| if i == j { entries[i].clone() } else { q(0) }).collect())
                .collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<BigRational>] {
        &self.basis
    }

    pub fn basis_f64(&self) -> Vec<Vec<f64>> {
        self.basis.iter().map(|r| r.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).collect()).collect()
    }

    pub fn gram(&self) -> Vec<Vec<BigRational>> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| {
                        self.basis[i].iter().zip(&self.basis[j]).fold(q(0), |acc, (a, b)| acc + a * b)
                    })
                    .collect()
            })
            .collect()
    }

    /// Absolute value of det(basis), the covolume.
    pub fn covolume(&self) -> BigRational {
        determinant(&self.basis).abs()
    }

    pub fn scaled(&self, c: &BigRational) -> Result<Self> {
        if c.is_zero() {
            return Err(Error::InvalidLattice("zero scale".into()));
        }
        Self::new(self.basis.iter().map(|r| r.iter().map(|x| x * c).collect()).collect())
    }

    /// The lattice vector Σ x_i b_i.
    pub fn vector(&self, coeffs: &[i64]) -> Vec<BigRational> {
        let d = self.dim();
        (0..d)
            .map(|j| {
                coeffs.iter().zip(&self.basis).fold(q(0), |acc, (&c, row)| acc + &row[j] * q(c))
            })
            .collect()
    }

    pub fn squared_norm(&self, coeffs: &[i64]) -> BigRational {
        self.vector(coeffs).iter().fold(q(0), |acc, x| acc + x * x)
    }

    /// Parses one basis row per line; entries are integers or `p/q`.
    /// Blank lines and lines starting with `#` are ignored.
    pub fn parse(text: &str) -> Result<Self> {
        let mut rows = Vec::new();
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row = line
                .split(|c: char| c.is_whitespace() || c == ',')
                .filter(|s| !s.is_empty())
                .map(|tok| parse_rational(tok).map_err(|e| Error::Parse(format!("line {}: {e}", ln + 1))))
                .collect::<Result<Vec<_>>>()?;
            rows.push(row);
        }
        Self::new(rows)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for row in &self.basis {
            let cells: Vec<String> = row.iter().map(format_rational).collect();
            s.push_str(&cells.join(" "));
            s.push('\n');
        }
        s
    }
}

impl fmt::Display for IntegerLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

pub fn parse_rational(tok: &str) -> Result<BigRational> {
    let bad = || Error::Parse(format!("bad rational entry {tok:?}"));
    match tok.split_once('/') {
        Some((p, d)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, d))
        }
        None => Ok(BigRational::from_integer(tok.trim().parse().map_err(|_| bad())?)),
    }
}

pub fn format_rational(x: &BigRational) -> String {
    if x.denom().is_one() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Inverse-transpose of the basis.
pub fn dual_lattice(l: &IntegerLattice) -> Result<IntegerLattice> {
    let inv = inverse(&l.basis)?;
    let d = l.dim();
    IntegerLattice::new((0..d).map(|i| (0..d).map(|j| inv[j][i].clone()).collect()).collect())
}

/// Integer model of a lattice: vectors are `x·U·M / den` for integer rows
/// `M`, with `reduced = U·M` LLL-reduced.
struct Enumerator {
    d: usize,
    den_sq: BigInt,
    u: Vec<Vec<i128>>,
    gram: Vec<Vec<i128>>,
    mu: Vec<Vec<f64>>,
    bstar: Vec<f64>,
}

fn ck(x: Option<i128>) -> Result<i128> {
    x.ok_or_else(|| Error::InvalidLattice("basis entries too large for exact enumeration".into()))
}

fn gram_schmidt(rows: &[Vec<i128>]) -> (Vec<Vec<f64>>, Vec<f64>) {
    let d = rows.len();
    let b: Vec<Vec<f64>> = rows.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect();
    let mut star: Vec<Vec<f64>> = Vec::with_capacity(d);
    let mut mu = vec![vec![0.0; d]; d];
    let mut bsq = vec![0.0; d];
    for i in 0..d {
        let mut v = b[i].clone();
        for j in 0..i {
            let m = b[i].iter().zip(&star[j]).map(|(a, c)| a * c).sum::<f64>() / bsq[j];
            mu[i][j] = m;
            for (vi, sj) in v.iter_mut().zip(&star[j]) {
                *vi -= m * sj;
            }
        }
        bsq[i] = v.iter().map(|x| x * x).sum();
        star.push(v);
    }
    (mu, bsq)
}

fn lll(rows: &mut [Vec<i128>], u: &mut [Vec<i128>]) -> Result<()> {
    let d = rows.len();
    let mut k = 1;
    let mut guard = 0usize;
    while k < d {
        guard += 1;
        if guard > 200_000 {
            // Reduction is only a speed-up; stop early rather than loop.
            return Ok(());
        }
        for j in (0..k).rev() {
            let (mu, _) = gram_schmidt(rows);
            let r = mu[k][j].round();
            if r != 0.0 {
                let r = r as i128;
                for c in 0..rows[k].len() {
                    rows[k][c] = ck(rows[k][c].checked_sub(ck(r.checked_mul(rows[j][c]))?))?;
                }
                for c in 0..d {
                    u[k][c] = ck(u[k][c].checked_sub(ck(r.checked_mul(u[j][c]))?))?;
                }
            }
        }
        let (mu, bsq) = gram_schmidt(rows);
        if bsq[k] >= (0.99 - mu[k][k - 1] * mu[k][k - 1]) * bsq[k - 1] {
            k += 1;
        } else {
            rows.swap(k, k - 1);
            u.swap(k, k - 1);
            k = (k - 1).max(1);
        }
    }
    Ok(())
}

impl Enumerator {
    fn new(l: &IntegerLattice) -> Result<Self> {
        let d = l.dim();
        let den = l.basis.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let mut rows = Vec::with_capacity(d);
        for row in &l.basis {
            let mut r = Vec::with_capacity(d);
            for x in row {
                let v = (x * BigRational::from_integer(den.clone())).to_integer();
                r.push(ck(v.to_i128().filter(|v| v.abs() < (1i128 << 60)))?);
            }
            rows.push(r);
        }
        let mut u: Vec<Vec<i128>> =
            (0..d).map(|i| (0..d).map(|j| i128::from(i == j)).collect()).collect();
        lll(&mut rows, &mut u)?;
        let mut gram = vec![vec![0i128; d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut s: i128 = 0;
                for c in 0..d {
                    s = ck(s.checked_add(ck(rows[i][c].checked_mul(rows[j][c]))?))?;
                }
                gram[i][j] = s;
            }
        }
        let (mu, bstar) = gram_schmidt(&rows);
        Ok(Self { d, den_sq: &den * &den, u, gram, mu, bstar })
    }

    /// Exact xᵀGx in scaled units for reduced coordinates x.
    fn norm_scaled(&self, x: &[i64]) -> Result<i128> {
        let mut s: i128 = 0;
        for i in 0..self.d {
            if x[i] == 0 {
                continue;
            }
            let mut row: i128 = 0;
            for j in 0..self.d {
                row = ck(row.checked_add(ck(self.gram[i][j].checked_mul(x[j] as i128))?))?;
            }
            s = ck(s.checked_add(ck(row.checked_mul(x[i] as i128))?))?;
        }
        Ok(s)
    }

    fn to_original(&self, x: &[i64]) -> Result<Vec<i64>> {
        (0..self.d)
            .map(|j| {
                let mut s: i128 = 0;
                for i in 0..self.d {
                    s = ck(s.checked_add(ck((x[i] as i128).checked_mul(self.u[i][j]))?))?;
                }
                i64::try_from(s).map_err(|_| Error::InvalidLattice("coordinate overflow".into()))
            })
            .collect()
    }

    /// Visits every reduced coordinate vector whose floating norm is within
    /// `r2` (scaled units), including 0.
    fn enumerate<V: FnMut(&[i64]) -> Result<()>>(&self, r2: f64, budget: u64, visit: &mut V) -> Result<u64> {
        let mut x = vec![0i64; self.d];
        let mut nodes = 0u64;
        self.recurse(self.d, 0.0, r2, &mut x, &mut nodes, budget, visit)?;
        Ok(nodes)
    }

    #[allow(clippy::too_many_arguments)]
    fn recurse<V: FnMut(&[i64]) -> Result<()>>(
        &self,
        level: usize,
        partial: f64,
        r2: f64,
        x: &mut [i64],
        nodes: &mut u64,
        budget: u64,
        visit: &mut V,
    ) -> Result<()> {
        if level == 0 {
            return visit(x);
        }
        let i = level - 1;
        let c: f64 = -(i + 1..self.d).map(|j| x[j] as f64 * self.mu[j][i]).sum::<f64>();
        let rem = (r2 - partial).max(0.0);
        let w = (rem / self.bstar[i]).sqrt();
        let lo = (c - w).ceil() as i64;
        let hi = (c + w).floor() as i64;
        for xi in lo..=hi {
            *nodes += 1;
            if *nodes > budget {
                return Err(Error::BudgetExceeded { budget, detail: String::new() });
            }
            let t = xi as f64 - c;
            let p = partial + t * t * self.bstar[i];
            if p > r2 {
                continue;
            }
            x[i] = xi;
            self.recurse(level - 1, p, r2, x, nodes, budget, visit)?;
        }
        x[i] = 0;
        Ok(())
    }

    fn inflate(r2: f64) -> f64 {
        r2 * (1.0 + 1e-9) + 1e-9
    }
}

/// Lattice vectors with exact squared norm ≤ `norm_sq`, as coordinates in
/// the input basis, sorted by (norm, coordinates); the origin is excluded.
fn short_vectors(l: &IntegerLattice, norm_sq_scaled: i128, budget: u64) -> Result<Vec<(i128, Vec<i64>)>> {
    let e = Enumerator::new(l)?;
    let mut out = Vec::new();
    e.enumerate(Enumerator::inflate(norm_sq_scaled as f64), budget, &mut |x| {
        if x.iter().all(|&c| c == 0) {
            return Ok(());
        }
        let n = e.norm_scaled(x)?;
        if n <= norm_sq_scaled {
            out.push((n, e.to_original(x)?));
        }
        Ok(())
    })?;
    out.sort();
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuccessiveMinima {
    pub minima: Vec<f64>,
    pub minima_sq: Vec<BigRational>,
    /// Coordinates (in the input basis) of vectors realizing the minima.
    pub witnesses: Vec<Vec<i64>>,
    pub delta: f64,
    pub delta_sq: BigRational,
}

impl SuccessiveMinima {
    /// Exact check of δ²·λ_d² ≥ 1.
    pub fn transference_holds(&self) -> bool {
        let last = self.minima_sq.last().expect("nonempty");
        &self.delta_sq * last >= BigRational::one()
    }
}

/// Incremental exact rank test.
struct Span {
    rows: Vec<(usize, Vec<BigRational>)>,
}

impl Span {
    fn try_add(&mut self, v: &[i64]) -> bool {
        let mut w: Vec<BigRational> = v.iter().map(|&x| q(x)).collect();
        for (p, r) in &self.rows {
            if !w[*p].is_zero() {
                let f = w[*p].clone();
                for (a, b) in w.iter_mut().zip(r) {
                    *a -= &f * b;
                }
            }
        }
        match w.iter().position(|x| !x.is_zero()) {
            None => false,
            Some(p) => {
                let piv = w[p].clone();
                for a in w.iter_mut() {
                    *a /= &piv;
                }
                for (_, r) in self.rows.iter_mut() {
                    if !r[p].is_zero() {
                        let f = r[p].clone();
                        for (a, b) in r.iter_mut().zip(&w) {
                            *a -= &f * b;
                        }
                    }
                }
                self.rows.push((p, w));
                true
            }
        }
    }
}

fn scaled_to_rational(n: i128, den_sq: &BigInt) -> BigRational {
    BigRational::new(BigInt::from(n), den_sq.clone())
}

fn rational_sqrt(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN).sqrt()
}

/// Squared first minimum, exactly, and a shortest vector.
pub fn first_minimum(l: &IntegerLattice, budget: u64) -> Result<(BigRational, Vec<i64>)> {
    let e = Enumerator::new(l)?;
    let bound = (0..e.d).map(|i| e.gram[i][i]).min().expect("nonempty");
    let v = short_vectors(l, bound, budget)?;
    let (n, x) = v.into_iter().next().expect("basis vectors lie within the radius");
    Ok((scaled_to_rational(n, &e.den_sq), x))
}

pub fn successive_minima(l: &IntegerLattice) -> Result<SuccessiveMinima> {
    successive_minima_with_budget(l, DEFAULT_BUDGET)
}

pub fn successive_minima_with_budget(l: &IntegerLattice, budget: u64) -> Result<SuccessiveMinima> {
    let e = Enumerator::new(l)?;
    // The d reduced basis vectors are independent, so λ_d is at most the
    // longest of them.
    let bound = (0..e.d).map(|i| e.gram[i][i]).max().expect("nonempty");
    let cands = short_vectors(l, bound, budget)?;
    let mut span = Span { rows: Vec::new() };
    let mut minima_sq = Vec::new();
    let mut witnesses = Vec::new();
    for (n, x) in cands {
        if span.try_add(&x) {
            minima_sq.push(scaled_to_rational(n, &e.den_sq));
            witnesses.push(x);
            if witnesses.len() == e.d {
                break;
            }
        }
    }
    debug_assert_eq!(witnesses.len(), e.d);
    let dual = dual_lattice(l)?;
    let (delta_sq, _) = first_minimum(&dual, budget)?;
    Ok(SuccessiveMinima {
        minima: minima_sq.iter().map(rational_sqrt).collect(),
        minima_sq,
        witnesses,
        delta: rational_sqrt(&delta_sq),
        delta_sq,
    })
}

/// Number of lattice vectors with |v| ≤ r, including the origin.
pub fn count_points_in_ball(l: &IntegerLattice, r: f64, budget: u64) -> Result<u64> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let e = Enumerator::new(l)?;
    let r_exact = BigRational::from_float(r).expect("finite");
    let limit = &r_exact * &r_exact * BigRational::from_integer(e.den_sq.clone());
    let limit_f = limit.to_f64().unwrap_or(f64::INFINITY);
    let mut count = 0u64;
    let res = e.enumerate(Enumerator::inflate(limit_f), budget, &mut |x| {
        let n = e.norm_scaled(x)?;
        let nf = n as f64;
        let inside = if nf < limit_f * (1.0 - 1e-12) {
            true
        } else if nf > limit_f * (1.0 + 1e-12) {
            false
        } else {
            BigRational::from_integer(BigInt::from(n)) <= limit
        };
        if inside {
            count += 1;
        }
        Ok(())
    });
    match res {
        Ok(_) => Ok(count),
        Err(Error::BudgetExceeded { budget, .. }) => Err(Error::BudgetExceeded {
            budget,
            detail: format!("at least {count} points with |v| ≤ {r} were found before the abort"),
        }),
        Err(e) => Err(e),
    }
}

/// Witness that e^{ν+1}R < λ_{n−1} was checked on a concrete lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct VerifiedHypothesis {
    nu: u32,
    r: f64,
    ambient_dim: u32,
    lambda1: f64,
    lambda_top: f64,
}

impl VerifiedHypothesis {
    pub fn nu(&self) -> u32 {
        self.nu
    }
    pub fn radius(&self) -> f64 {
        self.r
    }
    pub fn ambient_dim(&self) -> u32 {
        self.ambient_dim
    }
    pub fn lambda1(&self) -> f64 {
        self.lambda1
    }
    pub fn lambda_top(&self) -> f64 {
        self.lambda_top
    }
}

fn check_ambient(l: &IntegerLattice, ambient_dim: u32) -> Result<()> {
    if ambient_dim as usize != l.dim() + 1 {
        return Err(Error::Domain(format!(
            "a rank-{} lattice is the cross-section of an {}-dimensional cusp, not {ambient_dim}",
            l.dim(),
            l.dim() + 1
        )));
    }
    Ok(())
}

pub fn verify_hypothesis_with(
    min: &SuccessiveMinima,
    nu: u32,
    r: f64,
    ambient_dim: u32,
) -> Result<VerifiedHypothesis> {
    if !(r.is_finite() && r > 0.0) {
        return Err(Error::Domain(format!("radius must be positive, got {r}")));
    }
    let lambda_top = *min.minima.last().expect("nonempty");
    let lhs = ((nu + 1) as f64).exp() * r;
    // Within rounding of equality counts as a failure.
    if lhs.partial_cmp(&(lambda_top * (1.0 - 1e-12))) != Some(Ordering::Less) {
        return Err(Error::HypothesisFailed(format!(
            "e^(ν+1)·R = {lhs} is not below λ_{} = {lambda_top}",
            min.minima.len()
        )));
    }
    Ok(VerifiedHypothesis { nu, r, ambient_dim, lambda1: min.minima[0], lambda_top })
}

pub fn verify_hypothesis(l: &IntegerLattice, nu: u32, r: f64, ambient_dim: u32) -> Result<VerifiedHypothesis> {
    check_ambient(l, ambient_dim)?;
    verify_hypothesis_with(&successive_minima(l)?, nu, r, ambient_dim)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NboundReport {
    pub radius: f64,
    pub count: u64,
    pub bound: f64,
    pub satisfied: bool,
    pub hypothesis: VerifiedHypothesis,
}

/// Packing constant 2^{n−2}.
pub fn nbound_constant(ambient_dim: u32) -> f64 {
    2f64.powi(ambient_dim as i32 - 2)
}

pub fn nbound_check(l: &IntegerLattice, nu: u32, r: f64, ambient_dim: u32, budget: u64) -> Result<NboundReport> {
    check_ambient(l, ambient_dim)?;
    let min = successive_minima_with_budget(l, budget)?;
    let hyp = verify_hypothesis_with(&min, nu, r, ambient_dim)?;
    let radius = (nu as f64).exp() * r;
    let count = count_points_in_ball(l, radius, budget)?;
    let l1 = hyp.lambda1;
    let e = ambient_dim as i32 - 2;
    let bound = nbound_constant(ambient_dim) * l1.powi(-e) * (radius + l1 / 2.0).powi(e);
    Ok(NboundReport { radius, count, bound, satisfied: (count as f64) <= bound, hypothesis: hyp })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ql(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    #[test]
    fn cubic_lattice() {
        let m = successive_minima(&IntegerLattice::identity(3)).unwrap();
        assert_eq!(m.minima, vec![1.0, 1.0, 1.0]);
        assert_eq!(m.delta, 1.0);
        assert!(m.transference_holds());
    }

    #[test]
    fn elongated_diagonal() {
        let l = IntegerLattice::from_integers(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 10]]).unwrap();
        let m = successive_minima(&l).unwrap();
        assert_eq!(m.minima_sq, vec![ql(1, 1), ql(1, 1), ql(100, 1)]);
        assert_eq!(m.delta_sq, ql(1, 100));
        assert_eq!(&m.delta_sq * &m.minima_sq[2], ql(1, 1));
    }

    #[test]
    fn skew_plane_lattice() {
        let l = IntegerLattice::from_integers(&[vec![2, 0], vec![1, 3]]).unwrap();
        let m = successive_minima(&l).unwrap();
        assert_eq!(m.minima_sq, vec![ql(4, 1), ql(10, 1)]);
        assert_eq!(m.delta_sq, ql(1, 9));
        assert!((m.delta * m.minima[1] - 10f64.sqrt() / 3.0).abs() < 1e-15);
        for (w, n) in m.witnesses.iter().zip(&m.minima_sq) {
            assert_eq!(&l.squared_norm(w), n);
        }
    }

    #[test]
    fn lexicographic_witnesses() {
        let m = successive_minima(&IntegerLattice::identity(2)).unwrap();
        assert_eq!(m.witnesses, vec![vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn duals() {
        let l = IntegerLattice::from_integers(&[vec![2, 0], vec![1, 3]]).unwrap();
        let d = dual_lattice(&l).unwrap();
        assert_eq!(d.basis()[0], vec![ql(1, 2), ql(-1, 6)]);
        assert_eq!(d.basis()[1], vec![ql(0, 1), ql(1, 3)]);
        assert_eq!(dual_lattice(&d).unwrap(), l);
        let diag = IntegerLattice::diagonal(&[ql(2, 1), ql(3, 1)]).unwrap();
        assert_eq!(dual_lattice(&diag).unwrap(), IntegerLattice::diagonal(&[ql(1, 2), ql(1, 3)]).unwrap());
        assert_eq!(dual_lattice(&IntegerLattice::identity(4)).unwrap(), IntegerLattice::identity(4));
    }

    #[test]
    fn counts() {
        let z2 = IntegerLattice::identity(2);
        assert_eq!(count_points_in_ball(&z2, 1.0, DEFAULT_BUDGET).unwrap(), 5);
        assert_eq!(count_points_in_ball(&z2, 1.5, DEFAULT_BUDGET).unwrap(), 9);
        let l = IntegerLattice::from_integers(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 10]]).unwrap();
        assert_eq!(count_points_in_ball(&l, 2.0, DEFAULT_BUDGET).unwrap(), 13);
        assert!(count_points_in_ball(&z2, 0.0, DEFAULT_BUDGET).is_err());
    }

    #[test]
    fn budget_is_enforced() {
        let z2 = IntegerLattice::identity(2);
        let e = count_points_in_ball(&z2, 100.0, 50).unwrap_err();
        assert!(matches!(e, Error::BudgetExceeded { budget: 50, .. }));
    }

    #[test]
    fn singular_rejected() {
        assert!(matches!(
            IntegerLattice::from_integers(&[vec![1, 2], vec![2, 4]]),
            Err(Error::InvalidLattice(_))
        ));
    }

    #[test]
    fn text_round_trip() {
        let l = IntegerLattice::parse("# basis\n1/2 -1/6\n0 1/3\n").unwrap();
        assert_eq!(l.to_text(), "1/2 -1/6\n0 1/3\n");
        assert_eq!(IntegerLattice::parse(&l.to_text()).unwrap(), l);
        assert!(IntegerLattice::parse("1 x\n0 1").is_err());
        assert!(IntegerLattice::parse("1 0\n0 1/0").is_err());
    }

    #[test]
    fn nbound_examples() {
        let z2 = IntegerLattice::identity(2);
        assert!(matches!(nbound_check(&z2, 0, 0.5, 3, DEFAULT_BUDGET), Err(Error::HypothesisFailed(_))));
        let r = nbound_check(&z2, 0, 0.3, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.count, 1);
        assert!((r.bound - 1.6).abs() < 1e-12);
        assert!(r.satisfied);
        let r = nbound_check(&z2, 0, 1e-9, 3, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.count, 1);
        assert!(r.bound >= 1.0);
        assert!(nbound_check(&z2, 0, 0.3, 4, DEFAULT_BUDGET).is_err());
    }
}
