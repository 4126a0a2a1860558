//! JSON document types for stack configurations.
//!
//! ```json
//! {"c": 1.0, "z_min": -1.0,
//!  "layers": [{"thickness": 2.0,
//!              "material": {"label": "vacuum",
//!                           "eps": {"kind": "constant", "value": [[[1,0],[0,0],[0,0]], ...]},
//!                           "mu":  {"kind": "drude", "plasma_freq": 1.0, "collision_rate": 0.1}}}]}
//! ```
//!
//! Complex matrices are row-major nested arrays of `[re, im]` pairs. Model kinds
//! are `constant` (frequency-independent lossless tensor, response ω·value),
//! `drude` (isotropic) and `herglotz_discrete` (α, β, poles, weights).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::herglotz::{DiscreteHerglotz, HerglotzModel, MaterialSpec};
use crate::linalg::{c, CMatrix};

pub type MatrixDoc = Vec<Vec<[f64; 2]>>;

fn default_c() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StackDoc {
    #[serde(default = "default_c")]
    pub c: f64,
    pub z_min: f64,
    pub layers: Vec<LayerDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LayerDoc {
    pub thickness: f64,
    pub material: MaterialDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MaterialDoc {
    pub label: String,
    pub eps: ModelDoc,
    pub mu: ModelDoc,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelDoc {
    Constant {
        value: MatrixDoc,
    },
    Drude {
        plasma_freq: f64,
        collision_rate: f64,
    },
    HerglotzDiscrete {
        alpha: MatrixDoc,
        beta: MatrixDoc,
        #[serde(default)]
        poles: Vec<f64>,
        #[serde(default)]
        weights: Vec<MatrixDoc>,
    },
}

/// Deserializes `T` from a JSON value, reporting the path of the first offending key.
pub fn from_value<T: serde::de::DeserializeOwned>(value: &serde_json::Value) -> Result<T> {
    serde_path_to_error::deserialize(value.clone()).map_err(|e| {
        let path = e.path().to_string();
        Error::parse(if path.is_empty() { ".".into() } else { path }, e.inner().to_string())
    })
}

pub fn matrix_from_doc(doc: &MatrixDoc, key: &str) -> Result<CMatrix> {
    let nrows = doc.len();
    let ncols = doc.first().map_or(0, Vec::len);
    if nrows == 0 || ncols == 0 {
        return Err(Error::parse(key, "matrix must be nonempty"));
    }
    if let Some(i) = doc.iter().position(|row| row.len() != ncols) {
        return Err(Error::parse(format!("{key}[{i}]"), "ragged matrix row"));
    }
    let m = CMatrix::from_fn(nrows, ncols, |i, j| c(doc[i][j][0], doc[i][j][1]));
    if !crate::linalg::is_finite(&m) {
        return Err(Error::parse(key, "matrix entries must be finite"));
    }
    Ok(m)
}

pub fn matrix_to_doc(m: &CMatrix) -> MatrixDoc {
    m.row_iter()
        .map(|row| row.iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn keyed<T>(key: &str, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Parse { .. } => e,
        other => Error::parse(key, other.to_string()),
    })
}

pub fn model_from_doc(doc: &ModelDoc, key: &str) -> Result<HerglotzModel> {
    match doc {
        ModelDoc::Constant { value } => {
            let key = format!("{key}.value");
            keyed(&key, HerglotzModel::constant(matrix_from_doc(value, &key)?))
        }
        ModelDoc::Drude {
            plasma_freq,
            collision_rate,
        } => {
            if !(*plasma_freq > 0.0) {
                return Err(Error::parse(format!("{key}.plasma_freq"), "must be positive"));
            }
            if !(*collision_rate >= 0.0) {
                return Err(Error::parse(format!("{key}.collision_rate"), "must be nonnegative"));
            }
            keyed(key, HerglotzModel::drude(*plasma_freq, *collision_rate, 3))
        }
        ModelDoc::HerglotzDiscrete {
            alpha,
            beta,
            poles,
            weights,
        } => {
            let alpha = matrix_from_doc(alpha, &format!("{key}.alpha"))?;
            let beta = matrix_from_doc(beta, &format!("{key}.beta"))?;
            let weights = weights
                .iter()
                .enumerate()
                .map(|(k, w)| matrix_from_doc(w, &format!("{key}.weights[{k}]")))
                .collect::<Result<Vec<_>>>()?;
            keyed(
                key,
                DiscreteHerglotz::new(alpha, beta, poles.clone(), weights).map(HerglotzModel::Discrete),
            )
        }
    }
}

pub fn model_to_doc(model: &HerglotzModel) -> ModelDoc {
    match model {
        HerglotzModel::Constant { value } => ModelDoc::Constant {
            value: matrix_to_doc(value),
        },
        HerglotzModel::Drude { drude, .. } => ModelDoc::Drude {
            plasma_freq: drude.plasma_freq,
            collision_rate: drude.collision_rate,
        },
        HerglotzModel::Discrete(m) => ModelDoc::HerglotzDiscrete {
            alpha: matrix_to_doc(m.alpha()),
            beta: matrix_to_doc(m.beta()),
            poles: m.poles().to_vec(),
            weights: m.weights().iter().map(matrix_to_doc).collect(),
        },
    }
}

pub fn material_from_doc(doc: &MaterialDoc, key: &str) -> Result<MaterialSpec> {
    let eps = model_from_doc(&doc.eps, &format!("{key}.eps"))?;
    let mu = model_from_doc(&doc.mu, &format!("{key}.mu"))?;
    keyed(key, MaterialSpec::new(doc.label.clone(), eps, mu))
}

pub fn material_to_doc(mat: &MaterialSpec) -> MaterialDoc {
    MaterialDoc {
        label: mat.label.clone(),
        eps: model_to_doc(mat.eps()),
        mu: model_to_doc(mat.mu()),
    }
}
