//! Catalogue of model families with closed-form `(A, E)` tensors.
//!
//! Parameter structs deserialize from JSON with strict field checking, so a
//! typo in a run configuration fails loudly instead of silently running the
//! wrong model.

mod model1;
mod model2;
mod spin2_2d;
mod xyz_dm;

pub use model1::{model1_density, model1_tensors, Model1Params};
pub use model2::{model2_density, model2_tensors, Model2Params};
pub use spin2_2d::{spin2_2d_model, Spin2TwoDParams};
pub use xyz_dm::{xyz_dm_2d_model, XyzDmParams};

use serde::{Deserialize, Serialize};

use crate::linalg::{hermiticity_error, CMat};

/// A two-site Hamiltonian density: a d²×d² matrix acting on the edge's
/// qudit pair, plus a label for reports.
#[derive(Debug, Clone)]
pub struct LocalTerm {
    pub d: usize,
    pub matrix: CMat,
    pub label: String,
}

impl LocalTerm {
    pub fn new(d: usize, matrix: CMat, label: impl Into<String>) -> Self {
        debug_assert_eq!(matrix.nrows(), d * d);
        debug_assert_eq!(matrix.ncols(), d * d);
        LocalTerm { d, matrix, label: label.into() }
    }

    /// ‖h − h†‖; zero for real parameter choices in every catalogued model.
    pub fn hermiticity_error(&self) -> f64 {
        hermiticity_error(&self.matrix)
    }
}

/// Serialize a complex number as `[re, im]`; accept either `[re, im]` or a
/// bare real number on input.
pub mod complex_pair {
    use num_complex::Complex64;
    use serde::de::Error;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeTuple;
        let mut t = s.serialize_tuple(2)?;
        t.serialize_element(&z.re)?;
        t.serialize_element(&z.im)?;
        t.end()
    }

    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Repr {
        Pair([f64; 2]),
        Real(f64),
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex64, D::Error> {
        match Repr::deserialize(d)? {
            Repr::Pair([re, im]) => Ok(Complex64::new(re, im)),
            Repr::Real(re) => {
                if re.is_finite() {
                    Ok(Complex64::new(re, 0.0))
                } else {
                    Err(D::Error::custom("non-finite parameter"))
                }
            }
        }
    }
}

/// Identifier of a catalogued model family, as used by configs and reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ModelId {
    #[serde(rename = "model1")]
    Model1,
    #[serde(rename = "model2")]
    Model2,
    #[serde(rename = "spin2_2d")]
    Spin2TwoD,
    #[serde(rename = "xyz_dm_2d")]
    XyzDmTwoD,
}

impl std::fmt::Display for ModelId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ModelId::Model1 => "model1",
            ModelId::Model2 => "model2",
            ModelId::Spin2TwoD => "spin2_2d",
            ModelId::XyzDmTwoD => "xyz_dm_2d",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ModelId {
    type Err = crate::DehpError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "model1" => Ok(ModelId::Model1),
            "model2" => Ok(ModelId::Model2),
            "spin2_2d" => Ok(ModelId::Spin2TwoD),
            "xyz_dm_2d" => Ok(ModelId::XyzDmTwoD),
            other => Err(crate::DehpError::ParameterDomain(format!(
                "unknown model '{other}' (expected model1, model2, spin2_2d, xyz_dm_2d)"
            ))),
        }
    }
}
