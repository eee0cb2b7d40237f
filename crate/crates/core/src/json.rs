//! JSON interchange for forms and triples.
//!
//! Forms: `{"n": 2, "k": 2, "coeffs": [{"idx": [1, 2], "re": 1.0, "im": 0.0}]}`
//! with one-based indices; absent index sets are zero. Triples carry
//! row-major `omega` and `j` matrices and an optional `g`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::basis::{indices_to_mask, mask_to_indices};
use crate::dense::Mat;
use crate::error::AlgebraError;
use crate::form::KForm;
use crate::triple::CompatibleTriple;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoeffJson {
    pub idx: Vec<usize>,
    pub re: f64,
    pub im: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FormJson {
    pub n: usize,
    pub k: usize,
    pub coeffs: Vec<CoeffJson>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleJson {
    pub n: usize,
    pub omega: Vec<Vec<f64>>,
    pub j: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<Vec<Vec<f64>>>,
}

impl FormJson {
    pub fn from_form(f: &KForm<f64>) -> Self {
        Self {
            n: f.n(),
            k: f.degree(),
            coeffs: f.terms().map(|(m, c)| CoeffJson { idx: mask_to_indices(m), re: c.re, im: c.im }).collect(),
        }
    }

    pub fn to_form(&self) -> Result<KForm<f64>, AlgebraError> {
        if self.n == 0 || self.n > crate::basis::MAX_DIM / 2 {
            return Err(AlgebraError::InvalidDimension(self.n));
        }
        if self.k > 2 * self.n {
            return Err(AlgebraError::DegreeOverflow { degree: self.k, top: 2 * self.n });
        }
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for c in &self.coeffs {
            let mut idx = c.idx.clone();
            idx.sort_unstable();
            if idx != c.idx {
                return Err(AlgebraError::Malformed(format!("index set {:?} is not increasing", c.idx)));
            }
            let mask = indices_to_mask(&idx)
                .filter(|&m| m.count_ones() as usize == self.k && idx.iter().all(|&i| i <= 2 * self.n))
                .ok_or_else(|| AlgebraError::Malformed(format!("index set {:?} is not a {}-subset of 1..={}", c.idx, self.k, 2 * self.n)))?;
            terms.push((mask, Complex::new(c.re, c.im)));
        }
        KForm::from_terms(self.n, self.k, terms)
    }
}

impl TripleJson {
    pub fn from_triple(t: &CompatibleTriple<f64>) -> Self {
        Self { n: t.n(), omega: t.omega().rows(), j: t.j().rows(), g: Some(t.g().rows()) }
    }

    pub fn to_triple(&self) -> Result<CompatibleTriple<f64>, AlgebraError> {
        let square = |name: &str, rows: &Vec<Vec<f64>>| {
            Mat::from_rows(rows.clone())
                .filter(|m| m.dim() == 2 * self.n)
                .ok_or_else(|| AlgebraError::Malformed(format!("{name} must be {0}x{0}", 2 * self.n)))
        };
        let omega = square("omega", &self.omega)?;
        let j = square("j", &self.j)?;
        match &self.g {
            Some(g) => CompatibleTriple::from_matrices(omega, j, square("g", g)?),
            None => CompatibleTriple::from_omega_j(omega, j),
        }
    }
}

pub fn form_to_string(f: &KForm<f64>) -> String {
    serde_json::to_string(&FormJson::from_form(f)).expect("plain data serializes")
}

pub fn form_from_str(s: &str) -> Result<KForm<f64>, AlgebraError> {
    let parsed: FormJson = serde_json::from_str(s).map_err(|e| AlgebraError::Malformed(e.to_string()))?;
    parsed.to_form()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{case_rng, random_form};

    #[test]
    fn form_roundtrip_is_bit_exact() {
        let mut rng = case_rng(3, "json", 0);
        for k in 0..=4 {
            let f = random_form::<f64, _>(&mut rng, 2, k, false);
            let back = form_from_str(&form_to_string(&f)).unwrap();
            assert_eq!(back, f);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(form_from_str(r#"{"n":1,"k":1,"coeffs":[{"idx":[3],"re":1,"im":0}]}"#).is_err());
        assert!(form_from_str(r#"{"n":1,"k":3,"coeffs":[]}"#).is_err());
        assert!(form_from_str(r#"{"n":2,"k":2,"coeffs":[{"idx":[2,1],"re":1,"im":0}]}"#).is_err());
        assert!(form_from_str("{").is_err());
    }

    #[test]
    fn triple_roundtrip() {
        let t = CompatibleTriple::<f64>::standard(2).unwrap();
        let s = serde_json::to_string(&TripleJson::from_triple(&t)).unwrap();
        let back: TripleJson = serde_json::from_str(&s).unwrap();
        assert_eq!(back.to_triple().unwrap().omega(), t.omega());
    }
}
