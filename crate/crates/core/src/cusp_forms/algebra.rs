//! Sign bookkeeping for coordinate multi-indices stored as bitmasks.
//! Bit 0 is ds; bit j ≥ 1 is dt^j.

pub type Mask = u32;

pub fn degree(m: Mask) -> u32 {
    m.count_ones()
}

fn below(m: Mask, j: u32) -> u32 {
    (m & ((1u32 << j) - 1)).count_ones()
}

/// Sign of dx^j ∧ dx^A relative to dx^{A∪j}; `None` when j ∈ A.
pub fn wedge_sign(j: u32, a: Mask) -> Option<f64> {
    if a & (1 << j) != 0 {
        None
    } else if below(a, j).is_multiple_of(2) {
        Some(1.0)
    } else {
        Some(-1.0)
    }
}

/// Sign of ι(∂_j) dx^A relative to dx^{A∖j}; `None` when j ∉ A.
pub fn interior_sign(j: u32, a: Mask) -> Option<f64> {
    if a & (1 << j) == 0 {
        None
    } else if below(a, j).is_multiple_of(2) {
        Some(1.0)
    } else {
        Some(-1.0)
    }
}

/// Sign ε with e^A ∧ ε·e^{A^c} equal to the volume form e^0 ∧ … ∧ e^{N−1}.
pub fn complement_sign(a: Mask, n: u32) -> f64 {
    let full = full_mask(n);
    let c = full & !a;
    let mut inv = 0;
    for j in 0..n {
        if a & (1 << j) != 0 {
            inv += below(c, j);
        }
    }
    if inv % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

pub fn full_mask(n: u32) -> Mask {
    if n >= 32 {
        u32::MAX
    } else {
        (1u32 << n) - 1
    }
}

/// All masks of the given degree over bits `lo..hi`, in lexicographic order
/// of their sorted index lists.
pub fn subsets(lo: u32, hi: u32, degree: u32) -> Vec<Mask> {
    let mut out = Vec::new();
    fn rec(start: u32, hi: u32, left: u32, acc: Mask, out: &mut Vec<Mask>) {
        if left == 0 {
            out.push(acc);
            return;
        }
        for j in start..hi {
            if hi - j < left {
                break;
            }
            rec(j + 1, hi, left - 1, acc | (1 << j), out);
        }
    }
    rec(lo, hi, degree, 0, &mut out);
    out
}

/// Dense real exterior algebra element over coordinate masks.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ExtVec(pub std::collections::BTreeMap<Mask, f64>);

impl ExtVec {
    pub fn one() -> Self {
        let mut m = std::collections::BTreeMap::new();
        m.insert(0, 1.0);
        Self(m)
    }

    /// (Σ_j a_j dx^j) ∧ self, with `a[j]` the coefficient of bit `offset + j`.
    pub fn wedge_left(&self, a: &[f64], offset: u32) -> Self {
        let mut out = std::collections::BTreeMap::new();
        for (&m, &c) in &self.0 {
            for (j, &aj) in a.iter().enumerate() {
                let bit = offset + j as u32;
                if aj == 0.0 {
                    continue;
                }
                if let Some(s) = wedge_sign(bit, m) {
                    *out.entry(m | (1 << bit)).or_insert(0.0) += s * aj * c;
                }
            }
        }
        out.retain(|_, v: &mut f64| *v != 0.0);
        Self(out)
    }
}
