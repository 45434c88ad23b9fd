use serde::Serialize;

use crate::certificate::Certificate;
use crate::rational::{add, serde_rational, ClassVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NamedCertificate {
    pub name: String,
    pub certificate: Certificate,
}

impl NamedCertificate {
    pub fn new(name: impl Into<String>, certificate: Certificate) -> Self {
        Self {
            name: name.into(),
            certificate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    LinearProgram,
    SupportGrowth,
    BruteForce,
}

/// How much the positive part is claimed to be.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Selection {
    /// `P` dominates every movable class below the input.
    CertifiedMaximum,
    /// `P` maximizes the objective over the decomposition polytope; no
    /// domination claim is made.
    ObjectiveMaximalCandidate,
    /// Surface-type decomposition, unique by negative definiteness.
    NegativeDefiniteSupport,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DecompositionMetadata {
    pub method: Method,
    pub selection: Selection,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub objective: Option<ClassVector>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub objective_value: Option<Rational>,
    /// Vertex set of the optimal face, when an objective was used.
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub optimal_face: Vec<ClassVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub unique_optimum: Option<bool>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl DecompositionMetadata {
    pub fn new(method: Method, selection: Selection) -> Self {
        Self {
            method,
            selection,
            objective: None,
            objective_value: None,
            optimal_face: Vec::new(),
            unique_optimum: None,
            notes: Vec::new(),
        }
    }
}

mod opt_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
        match q {
            Some(q) => serde_rational::serialize(q, s),
            None => s.serialize_none(),
        }
    }
}

/// `input = positive + negative`, with witnesses for the properties of each
/// part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub input: ClassVector,
    pub positive: ClassVector,
    pub negative: ClassVector,
    /// Indices of the basis vectors carrying nonzero negative coefficients
    /// (surface setting) or of the generators used for the negative part.
    pub support: Vec<usize>,
    pub certificates: Vec<NamedCertificate>,
    pub metadata: DecompositionMetadata,
}

impl Decomposition {
    /// Re-checks the sum and every certificate.
    pub fn verify(&self) -> bool {
        add(&self.positive.coords, &self.negative.coords) == self.input.coords
            && self.certificates.iter().all(|c| c.certificate.verify())
    }

    pub fn certificate(&self, name: &str) -> Option<&Certificate> {
        self.certificates
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.certificate)
    }
}
