//! Surface-type decompositions against a Gram matrix.
//!
//! Given vectors `v_1..v_r` with Gram matrix `G` (off-diagonal entries
//! nonnegative) and `c = sum c_i v_i` with `c_i >= 0`, find `N = sum a_j v_j`
//! with `a_j >= 0` such that `P = c - N` pairs nonnegatively with every
//! `v_i`, is orthogonal to the support of `N`, and `G` restricted to that
//! support is negative definite.

use std::collections::BTreeSet;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::{Certificate, SignCondition};
use crate::decomposition::{Decomposition, DecompositionMetadata, Method, NamedCertificate, Selection};
use crate::error::{Error, Result};
use crate::linalg::{mat_vec, principal_submatrix, solve};
use crate::rational::{serde_matrix, sub, ClassVector, Rational};

pub use crate::certificate::is_negative_definite;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairingBasis {
    pub labels: Vec<String>,
    #[serde(with = "serde_matrix")]
    pub gram: Vec<Vec<Rational>>,
}

impl PairingBasis {
    pub fn new(labels: Vec<String>, gram: Vec<Vec<Rational>>) -> Result<Self> {
        let b = Self { labels, gram };
        b.validate()?;
        Ok(b)
    }

    /// Labels `v1..vr`.
    pub fn unlabeled(gram: Vec<Vec<Rational>>) -> Result<Self> {
        let labels = (1..=gram.len()).map(|i| format!("v{i}")).collect();
        Self::new(labels, gram)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let b: PairingBasis = serde_json::from_str(text)?;
        b.validate()?;
        Ok(b)
    }

    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    fn validate(&self) -> Result<()> {
        let r = self.gram.len();
        if self.labels.len() != r {
            return Err(Error::DimensionMismatch {
                expected: r,
                found: self.labels.len(),
            });
        }
        for row in &self.gram {
            if row.len() != r {
                return Err(Error::DimensionMismatch {
                    expected: r,
                    found: row.len(),
                });
            }
        }
        for i in 0..r {
            for j in 0..r {
                if self.gram[i][j] != self.gram[j][i] {
                    return Err(Error::InvalidInput(format!(
                        "Gram matrix is not symmetric at ({}, {})",
                        self.labels[i], self.labels[j]
                    )));
                }
                if i != j && self.gram[i][j].is_negative() {
                    return Err(Error::InvalidInput(format!(
                        "off-diagonal entry ({}, {}) is negative",
                        self.labels[i], self.labels[j]
                    )));
                }
            }
        }
        Ok(())
    }

    fn basis_id(&self) -> String {
        format!("span({})", self.labels.join(","))
    }

    fn check_class(&self, c: &[Rational]) -> Result<()> {
        if c.len() != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank(),
                found: c.len(),
            });
        }
        if let Some(i) = c.iter().position(Signed::is_negative) {
            return Err(Error::InvalidInput(format!(
                "coefficient of {} is negative",
                self.labels[i]
            )));
        }
        Ok(())
    }

    /// Coefficients `a_S` with `<c - sum_S a_j v_j, v_i> = 0` for `i` in `S`,
    /// provided `G_SS` is negative definite.
    fn solve_on(&self, c: &[Rational], support: &[usize]) -> std::result::Result<Vec<Rational>, Error> {
        let sub_gram = principal_submatrix(&self.gram, support);
        if !is_negative_definite(&sub_gram) {
            return Err(Error::OutsideSurfaceRegime {
                reason: "Gram matrix on the support is not negative definite".into(),
                support: support.to_vec(),
                submatrix: sub_gram,
            });
        }
        let gc = mat_vec(&self.gram, c);
        let rhs: Vec<Rational> = support.iter().map(|&i| gc[i].clone()).collect();
        let a = solve(&sub_gram, &rhs, support.len()).expect("negative definite matrices are invertible");
        let mut full = vec![Rational::zero(); self.rank()];
        for (&i, x) in support.iter().zip(a) {
            full[i] = x;
        }
        Ok(full)
    }

    fn build(
        &self,
        c: &[Rational],
        negative: Vec<Rational>,
        method: Method,
        notes: Vec<String>,
    ) -> Decomposition {
        let basis = self.basis_id();
        let positive = sub(c, &negative);
        let support: Vec<usize> = (0..self.rank()).filter(|&i| !negative[i].is_zero()).collect();
        let mut certificates = Vec::new();
        for i in 0..self.rank() {
            let on_support = support.contains(&i);
            certificates.push(NamedCertificate::new(
                if on_support {
                    format!("P.{} = 0", self.labels[i])
                } else {
                    format!("P.{} >= 0", self.labels[i])
                },
                Certificate::Pairing {
                    label: format!("pairing with {}", self.labels[i]),
                    functional: self.gram[i].clone(),
                    point: positive.clone(),
                    condition: if on_support {
                        SignCondition::Zero
                    } else {
                        SignCondition::Nonnegative
                    },
                },
            ));
        }
        let units: Vec<Vec<Rational>> = support
            .iter()
            .map(|&j| {
                let mut e = vec![Rational::zero(); self.rank()];
                e[j] = Rational::from_integer(1.into());
                e
            })
            .collect();
        certificates.push(NamedCertificate::new(
            "negative_coefficients_nonnegative",
            Certificate::NonnegativeCombination {
                target: negative.clone(),
                generators: units,
                coefficients: support.iter().map(|&j| negative[j].clone()).collect(),
            },
        ));
        certificates.push(NamedCertificate::new(
            "support_negative_definite",
            Certificate::NegativeDefinite {
                matrix: principal_submatrix(&self.gram, &support),
            },
        ));
        let mut meta = DecompositionMetadata::new(method, Selection::NegativeDefiniteSupport);
        meta.notes = notes;
        Decomposition {
            input: ClassVector::new(basis.clone(), c.to_vec()),
            positive: ClassVector::new(basis.clone(), positive),
            negative: ClassVector::new(basis, negative),
            support,
            certificates,
            metadata: meta,
        }
    }

    /// Support growth: start from the indices pairing negatively with `c`,
    /// solve the orthogonality system on the support, add every index that
    /// still pairs negatively, repeat.
    pub fn decompose(&self, c: &[Rational]) -> Result<Decomposition> {
        self.check_class(c)?;
        let gc = mat_vec(&self.gram, c);
        let mut support: BTreeSet<usize> = (0..self.rank()).filter(|&i| gc[i].is_negative()).collect();
        let mut history = Vec::new();
        loop {
            let s: Vec<usize> = support.iter().copied().collect();
            history.push(format!("support {{{}}}", self.names(&s)));
            let negative = self.solve_on(c, &s)?;
            if let Some(&j) = s.iter().find(|&&j| negative[j].is_negative()) {
                return Err(Error::OutsideSurfaceRegime {
                    reason: format!("solve gives a negative coefficient for {}", self.labels[j]),
                    support: s.clone(),
                    submatrix: principal_submatrix(&self.gram, &s),
                });
            }
            let gp = mat_vec(&self.gram, &sub(c, &negative));
            let grown: Vec<usize> = (0..self.rank()).filter(|&i| gp[i].is_negative()).collect();
            if grown.iter().all(|i| support.contains(i)) {
                return Ok(self.build(c, negative, Method::SupportGrowth, history));
            }
            support.extend(grown);
        }
    }

    /// Exhaustive oracle over all supports.
    pub fn brute_force(&self, c: &[Rational]) -> Result<Decomposition> {
        self.check_class(c)?;
        let r = self.rank();
        if r > 16 {
            return Err(Error::InvalidInput(format!("brute force limited to 16 vectors, got {r}")));
        }
        let mut found: Vec<Vec<Rational>> = Vec::new();
        for mask in 0u32..(1 << r) {
            let s: Vec<usize> = (0..r).filter(|i| mask & (1 << i) != 0).collect();
            let Ok(negative) = self.solve_on(c, &s) else {
                continue;
            };
            if negative.iter().any(Signed::is_negative) {
                continue;
            }
            let gp = mat_vec(&self.gram, &sub(c, &negative));
            if gp.iter().any(Signed::is_negative) {
                continue;
            }
            if !found.contains(&negative) {
                found.push(negative);
            }
        }
        match found.len() {
            1 => {
                let negative = found.pop().expect("one");
                Ok(self.build(c, negative, Method::BruteForce, vec![format!("{} supports examined", 1u64 << r)]))
            }
            count => Err(Error::OracleAmbiguity { count }),
        }
    }

    fn names(&self, idx: &[usize]) -> String {
        idx.iter().map(|&i| self.labels[i].as_str()).collect::<Vec<_>>().join(",")
    }
}
