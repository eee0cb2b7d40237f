//! Lefschetz and type decompositions of a form read from JSON.
//!
//! Input: `{"form": <form>, "triple": <triple>}`; the triple is optional and
//! defaults to the standard one.

use std::collections::BTreeMap;
use std::path::Path;

use llab_core::json::{FormJson, TripleJson};
use llab_core::{is_primitive, norm, pq_decompose, primitive_decompose, AlgebraError, Triple};
use serde::{Deserialize, Serialize};

use crate::{write_file, CliError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeInput {
    pub form: FormJson,
    #[serde(default)]
    pub triple: Option<TripleJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOutput {
    pub input: FormJson,
    /// `β_{k−2r}` keyed by `r`.
    pub lefschetz: BTreeMap<usize, FormJson>,
    /// `‖Λβ‖` per level.
    pub primitivity: BTreeMap<usize, f64>,
    /// Components keyed by `"p,q"`.
    pub bidegree: BTreeMap<String, FormJson>,
    pub lefschetz_residual: f64,
    pub bidegree_residual: f64,
}

pub fn decompose(input: &DecomposeInput) -> Result<DecomposeOutput, AlgebraError> {
    let form = input.form.to_form()?;
    let t = match &input.triple {
        Some(t) => t.to_triple()?,
        None => Triple::standard(form.n())?,
    };
    let comps = primitive_decompose(&form, &t)?;
    let bi = pq_decompose(&form, &t)?;
    let mut primitivity = BTreeMap::new();
    for (&r, b) in comps.components() {
        primitivity.insert(r, is_primitive(b, &t, 1e-10)?.lambda_residual);
    }
    Ok(DecomposeOutput {
        input: input.form.clone(),
        lefschetz: comps.components().iter().filter(|(_, b)| !b.is_zero()).map(|(&r, b)| (r, FormJson::from_form(b))).collect(),
        primitivity,
        bidegree: bi
            .components()
            .iter()
            .filter(|(_, c)| !c.is_negligible(1e-14))
            .map(|(&(p, q), c)| (format!("{p},{q}"), FormJson::from_form(c)))
            .collect(),
        lefschetz_residual: norm(&(&comps.reconstruct(&t)? - &form), &t)?,
        bidegree_residual: norm(&(&bi.reconstruct() - &form), &t)?,
    })
}

pub fn decompose_file(input: &Path, output: &Path) -> Result<DecomposeOutput, CliError> {
    let text = std::fs::read_to_string(input).map_err(|source| CliError::Input { path: input.display().to_string(), source })?;
    let parsed: DecomposeInput = serde_json::from_str(&text)?;
    let out = decompose(&parsed)?;
    write_file(output, serde_json::to_string_pretty(&out)?.as_bytes())?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_is_a_lift_of_one() {
        let t = Triple::standard(2).unwrap();
        let input = DecomposeInput { form: FormJson::from_form(&t.omega_form()), triple: None };
        let out = decompose(&input).unwrap();
        assert_eq!(out.lefschetz.keys().copied().collect::<Vec<_>>(), vec![1]);
        assert_eq!(out.lefschetz[&1].coeffs.len(), 1);
        assert!((out.lefschetz[&1].coeffs[0].re - 1.0).abs() < 1e-14);
        assert_eq!(out.bidegree.keys().cloned().collect::<Vec<_>>(), vec!["1,1".to_string()]);
        assert!(out.lefschetz_residual < 1e-12 && out.bidegree_residual < 1e-12);
    }

    #[test]
    fn degree_above_top_is_rejected() {
        let bad = r#"{"form": {"n": 1, "k": 3, "coeffs": []}}"#;
        let parsed: DecomposeInput = serde_json::from_str(bad).unwrap();
        assert!(decompose(&parsed).is_err());
    }
}
