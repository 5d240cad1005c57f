use super::algebra::Mask;
use super::coeff::{Coeff, Grid};
use super::form::CuspForm;
use super::model::CuspModel;
use crate::error::{Error, Result};
use crate::price::CuspKind;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffDoc {
    /// Coordinate indices, 0 for ds and j for dt^j.
    pub index: Vec<u32>,
    #[serde(flatten)]
    pub coeff: Coeff,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeDoc {
    pub v: Vec<i64>,
    pub coeffs: Vec<CoeffDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FormDoc {
    pub kind: CuspKind,
    pub n: u32,
    pub degree: u32,
    pub modes: Vec<ModeDoc>,
    pub grid: Grid,
}

fn mask_to_index(m: Mask) -> Vec<u32> {
    (0..32).filter(|j| m & (1 << j) != 0).collect()
}

pub fn form_to_doc(model: &CuspModel, f: &CuspForm) -> FormDoc {
    FormDoc {
        kind: model.kind(),
        n: model.n(),
        degree: f.degree(),
        grid: *f.grid(),
        modes: f
            .modes()
            .iter()
            .map(|m| ModeDoc {
                v: m.dual_coords.clone(),
                coeffs: m
                    .coeffs
                    .iter()
                    .map(|(&a, c)| CoeffDoc { index: mask_to_index(a), coeff: c.clone() })
                    .collect(),
            })
            .collect(),
    }
}

/// Rebuilds a form; the harmonic flag is not carried and must be re-certified.
pub fn form_from_doc(model: &CuspModel, doc: &FormDoc) -> Result<CuspForm> {
    if doc.kind != model.kind() || doc.n != model.n() {
        return Err(Error::Domain(format!(
            "document describes a {:?} cusp with n = {}, model is {:?} with n = {}",
            doc.kind,
            doc.n,
            model.kind(),
            model.n()
        )));
    }
    let mut f = CuspForm::new(model, doc.degree, doc.grid)?;
    for m in &doc.modes {
        for c in &m.coeffs {
            let mut mask: Mask = 0;
            for &j in &c.index {
                if j >= model.real_dim() || mask & (1 << j) != 0 {
                    return Err(Error::Parse(format!("bad multi-index {:?}", c.index)));
                }
                mask |= 1 << j;
            }
            f.add_term(model, &m.v, mask, c.coeff.clone())?;
        }
    }
    Ok(f)
}

pub fn form_to_json(model: &CuspModel, f: &CuspForm) -> Result<String> {
    serde_json::to_string_pretty(&form_to_doc(model, f)).map_err(|e| Error::Parse(e.to_string()))
}

pub fn form_from_json(model: &CuspModel, text: &str) -> Result<CuspForm> {
    let doc: FormDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    form_from_doc(model, &doc)
}
