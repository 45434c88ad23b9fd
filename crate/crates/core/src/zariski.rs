//! Decompositions over explicit cone data.
//!
//! Given a movable cone `mov` inside a salient pseudo-effective cone `eff`,
//! a class `alpha` in `eff` has the decomposition polytope
//! `S = {beta in mov : alpha - beta in eff}`. A positive part is picked from
//! `S` by maximizing a degree functional; separately, [`preceq_maximum`]
//! decides whether `S` has a maximum for the domination order
//! (`beta <= gamma` iff `gamma - beta in eff`). When it does, that maximum is
//! the positive part for every admissible objective; when it does not, the
//! report carries classes in `S` with no common dominator.

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::cone::{ConeJson, Membership, PolyCone};
use crate::decomposition::{Decomposition, DecompositionMetadata, Method, NamedCertificate, Selection};
use crate::error::{Error, Result};
use crate::lp;
use crate::polytope::{Halfspace, RationalPolytope};
use crate::rational::{dot, serde_vector, sub, ClassVector, Rational};

#[derive(Clone, Debug)]
pub struct ConeGeometry {
    basis: String,
    dim: usize,
    mov: PolyCone,
    eff: PolyCone,
    eff_rays: Vec<ClassVector>,
    degree_functional: Option<ClassVector>,
}

impl ConeGeometry {
    /// Validates `mov ⊆ eff`, salience of `eff`, and strict positivity of the
    /// degree functional on the extremal rays of `eff`.
    pub fn new(mov: PolyCone, eff: PolyCone, degree_functional: Option<ClassVector>) -> Result<Self> {
        if mov.basis() != eff.basis() {
            return Err(Error::BasisMismatch {
                left: mov.basis().to_string(),
                right: eff.basis().to_string(),
            });
        }
        if mov.dim() != eff.dim() {
            return Err(Error::DimensionMismatch {
                expected: eff.dim(),
                found: mov.dim(),
            });
        }
        let mov = mov.dd_convert();
        let eff = eff.dd_convert();
        let eff_rays = eff.extremal_rays()?;
        for g in mov.canonical_generators() {
            let v = ClassVector::new(eff.basis().to_string(), g);
            if !eff.contains_by_inequalities(&v)? {
                return Err(Error::InvalidInput(format!(
                    "movable generator {v} is not pseudo-effective"
                )));
            }
        }
        let geometry = Self {
            basis: eff.basis().to_string(),
            dim: eff.dim(),
            mov,
            eff,
            eff_rays,
            degree_functional: None,
        };
        match degree_functional {
            Some(f) => geometry.with_degree_functional(f),
            None => Ok(geometry),
        }
    }

    pub fn with_degree_functional(mut self, f: ClassVector) -> Result<Self> {
        self.validate_objective(&f)?;
        self.degree_functional = Some(f);
        Ok(self)
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mov(&self) -> &PolyCone {
        &self.mov
    }

    pub fn eff(&self) -> &PolyCone {
        &self.eff
    }

    pub fn eff_rays(&self) -> &[ClassVector] {
        &self.eff_rays
    }

    pub fn degree_functional(&self) -> Option<&ClassVector> {
        self.degree_functional.as_ref()
    }

    pub fn validate_objective(&self, objective: &ClassVector) -> Result<()> {
        if objective.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: objective.dim(),
            });
        }
        for ray in &self.eff_rays {
            if !dot(&objective.coords, &ray.coords).is_positive() {
                return Err(Error::InvalidObjective {
                    ray: ray.coords.clone(),
                });
            }
        }
        Ok(())
    }

    fn class(&self, coords: Vec<Rational>) -> ClassVector {
        ClassVector::new(self.basis.clone(), coords)
    }

    fn check_class(&self, alpha: &ClassVector) -> Result<()> {
        if alpha.basis != self.basis {
            return Err(Error::BasisMismatch {
                left: self.basis.clone(),
                right: alpha.basis.clone(),
            });
        }
        if alpha.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: alpha.dim(),
            });
        }
        Ok(())
    }

    /// `{beta in mov : alpha - beta in eff}` with its vertices enumerated.
    pub fn decomposition_polytope(&self, alpha: &ClassVector) -> Result<RationalPolytope> {
        self.check_class(alpha)?;
        if let Membership::Outside(cert) = self.eff.contains(alpha)? {
            let Certificate::Separation { functional, .. } = cert else {
                unreachable!("outside membership carries a separation");
            };
            return Err(Error::NotPseudoEffective {
                class: alpha.coords.clone(),
                functional,
            });
        }
        let mut rows: Vec<Halfspace> = self
            .mov
            .canonical_inequalities()
            .into_iter()
            .map(|l| Halfspace::new(l, Rational::zero()))
            .collect();
        for l in self.eff.canonical_inequalities() {
            let offset = -dot(&l, &alpha.coords);
            rows.push(Halfspace::new(l.iter().map(|x| -x).collect(), offset));
        }
        RationalPolytope::from_inequalities(self.basis.clone(), self.dim, rows)?.vertex_enumeration()
    }

    /// Positive part by exact maximization of `objective` (default: the
    /// geometry's degree functional) over the decomposition polytope. The
    /// lexicographically smallest vertex of the optimal face is returned as
    /// `P`; the face itself is in the metadata.
    pub fn decompose(&self, alpha: &ClassVector, objective: Option<&ClassVector>) -> Result<Decomposition> {
        let objective = match objective.or(self.degree_functional.as_ref()) {
            Some(o) => o.clone(),
            None => {
                return Err(Error::InvalidInput(
                    "no objective given and the geometry has no degree functional".into(),
                ))
            }
        };
        self.validate_objective(&objective)?;
        let polytope = self.decomposition_polytope(alpha)?;
        let optimum = polytope.maximize_linear(&objective)?;
        let positive = optimum.vertices[0].clone();
        let negative = self.class(sub(&alpha.coords, &positive.coords));

        let report = preceq_maximum(self, &polytope)?;
        let mut meta = match &report.status {
            DirectednessStatus::Maximum(beta) => {
                let mut m = DecompositionMetadata::new(Method::LinearProgram, Selection::CertifiedMaximum);
                // a maximum is the unique optimum of any admissible objective
                debug_assert_eq!(*beta, positive);
                m.notes.push("positive part dominates every movable class below the input".into());
                m
            }
            DirectednessStatus::NoMaximum => {
                let mut m = DecompositionMetadata::new(Method::LinearProgram, Selection::ObjectiveMaximalCandidate);
                m.notes.push(
                    "decomposition polytope has no domination maximum; positive part is objective-maximal only"
                        .into(),
                );
                m
            }
        };
        if !optimum.is_unique() {
            meta.notes.push(
                "optimal face has several vertices; P is its lexicographically smallest vertex by convention"
                    .into(),
            );
        }
        meta.objective = Some(objective);
        meta.objective_value = Some(optimum.value.clone());
        meta.unique_optimum = Some(optimum.is_unique());
        meta.optimal_face = optimum.vertices.clone();

        let mut certificates = vec![
            NamedCertificate::new("positive_movable", self.mov.contains(&positive)?.certificate().clone()),
            NamedCertificate::new("negative_pseudo_effective", self.eff.contains(&negative)?.certificate().clone()),
        ];
        if let DirectednessStatus::Maximum(_) = report.status {
            certificates.extend(report.certificates);
        }
        let support = match self.eff.contains(&negative)? {
            Membership::Inside(Certificate::NonnegativeCombination { coefficients, .. }) => coefficients
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, _)| i)
                .collect(),
            _ => Vec::new(),
        };
        Ok(Decomposition {
            input: alpha.clone(),
            positive,
            negative,
            support,
            certificates,
            metadata: meta,
        })
    }

    /// Whether the negative part lies on the boundary of `eff`. Reported, not
    /// enforced: LP-selected negative parts are not guaranteed to.
    pub fn negative_boundary_check(&self, d: &Decomposition) -> bool {
        self.boundary_facet(&d.negative).is_some() || d.negative.is_zero()
    }

    /// A facet functional of `eff` vanishing on `point`, if any.
    pub fn boundary_facet(&self, point: &ClassVector) -> Option<Vec<Rational>> {
        self.eff
            .facet_frame()
            .rays
            .into_iter()
            .find(|l| dot(l, &point.coords).is_zero())
    }

    /// Farkas certificate that no element of `s` dominates all of `classes`,
    /// or `None` if some element does.
    pub fn no_common_dominator(&self, s: &RationalPolytope, classes: &[ClassVector]) -> Option<Certificate> {
        let mut rows: Vec<Vec<Rational>> = Vec::new();
        let mut offsets: Vec<Rational> = Vec::new();
        for h in s.inequalities() {
            rows.push(h.functional.clone());
            offsets.push(h.offset.clone());
        }
        let eff_ineqs = self.eff.canonical_inequalities();
        for c in classes {
            for l in &eff_ineqs {
                rows.push(l.clone());
                offsets.push(dot(l, &c.coords));
            }
        }
        let multipliers = lp::farkas_certificate(&rows, &offsets, self.dim)?;
        Some(Certificate::Farkas {
            rows,
            offsets,
            multipliers,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", content = "class", rename_all = "snake_case")]
pub enum DirectednessStatus {
    Maximum(ClassVector),
    NoMaximum,
}

/// Why a vertex is not a maximum: another vertex it fails to dominate.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VertexFailure {
    pub vertex: ClassVector,
    pub not_dominated: ClassVector,
    /// Separates `vertex - not_dominated` from `eff`.
    pub separation: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirectednessReport {
    pub status: DirectednessStatus,
    /// For a maximum: `beta - v in eff` for every vertex `v`.
    pub certificates: Vec<NamedCertificate>,
    /// For no maximum: elements of `S` (two when a pair suffices) that have
    /// no common dominator in `S`.
    pub witness: Vec<ClassVector>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness_certificate: Option<Certificate>,
    pub vertex_failures: Vec<VertexFailure>,
}

impl DirectednessReport {
    pub fn verify(&self) -> bool {
        self.certificates.iter().all(|c| c.certificate.verify())
            && self.witness_certificate.as_ref().is_none_or(Certificate::verify)
            && self.vertex_failures.iter().all(|f| f.separation.verify())
    }

    pub fn maximum(&self) -> Option<&ClassVector> {
        match &self.status {
            DirectednessStatus::Maximum(b) => Some(b),
            DirectednessStatus::NoMaximum => None,
        }
    }
}

/// Decides whether the decomposition polytope `s` has a domination maximum.
///
/// A maximum, if it exists, is a vertex (a convex combination dominating
/// each of its own vertices must equal them when `eff` is salient), and a
/// vertex dominating all vertices dominates all of `s` by convexity of `eff`.
pub fn preceq_maximum(g: &ConeGeometry, s: &RationalPolytope) -> Result<DirectednessReport> {
    let vertices = s.vertex_enumeration()?.vertices().unwrap_or_default();
    if vertices.is_empty() {
        return Err(Error::EmptyPolytope);
    }
    let dominates = |a: &ClassVector, b: &ClassVector| -> Result<Membership> {
        g.eff.contains(&g.class(sub(&a.coords, &b.coords)))
    };

    let mut failures = Vec::new();
    for beta in &vertices {
        let mut certs = Vec::new();
        let mut failure = None;
        for v in &vertices {
            match dominates(beta, v)? {
                Membership::Inside(c) => certs.push(NamedCertificate::new(format!("dominates {v}"), c)),
                Membership::Outside(c) => {
                    failure = Some(VertexFailure {
                        vertex: beta.clone(),
                        not_dominated: v.clone(),
                        separation: c,
                    });
                    break;
                }
            }
        }
        match failure {
            None => {
                return Ok(DirectednessReport {
                    status: DirectednessStatus::Maximum(beta.clone()),
                    certificates: certs,
                    witness: Vec::new(),
                    witness_certificate: None,
                    vertex_failures: Vec::new(),
                })
            }
            Some(f) => failures.push(f),
        }
    }

    // Undominated vertices suffice for a witness: enlarging an element of a
    // pair only shrinks its set of common dominators.
    let mut maximal = Vec::new();
    for (i, u) in vertices.iter().enumerate() {
        let mut dominated = false;
        for (j, v) in vertices.iter().enumerate() {
            if i != j && v != u && dominates(v, u)?.is_inside() {
                dominated = true;
                break;
            }
        }
        if !dominated {
            maximal.push(u.clone());
        }
    }
    for i in 0..maximal.len() {
        for j in i + 1..maximal.len() {
            let pair = [maximal[i].clone(), maximal[j].clone()];
            if let Some(cert) = g.no_common_dominator(s, &pair) {
                return Ok(DirectednessReport {
                    status: DirectednessStatus::NoMaximum,
                    certificates: Vec::new(),
                    witness: pair.to_vec(),
                    witness_certificate: Some(cert),
                    vertex_failures: failures,
                });
            }
        }
    }
    let cert = g.no_common_dominator(s, &maximal);
    Ok(DirectednessReport {
        status: DirectednessStatus::NoMaximum,
        certificates: Vec::new(),
        witness: maximal,
        witness_certificate: cert,
        vertex_failures: failures,
    })
}

/// Wire format for `decompose --geometry`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct GeometryJson {
    pub mov: ConeJson,
    pub eff: ConeJson,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_vector")]
    pub degree_functional: Option<Vec<Rational>>,
}

mod opt_vector {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<Vec<Rational>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match v {
            Some(v) => serde_vector::serialize(v, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Rational>>, D::Error> {
        serde_vector::deserialize(d).map(Some)
    }
}

impl GeometryJson {
    pub fn into_geometry(self) -> Result<ConeGeometry> {
        let mov = PolyCone::from_json(&self.mov)?;
        let eff = PolyCone::from_json(&self.eff)?;
        let basis = eff.basis().to_string();
        ConeGeometry::new(mov, eff, self.degree_functional.map(|f| ClassVector::new(basis, f)))
    }

    pub fn from_geometry(g: &ConeGeometry) -> Self {
        Self {
            mov: g.mov.to_json(),
            eff: g.eff.to_json(),
            degree_functional: g.degree_functional.as_ref().map(|f| f.coords.clone()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, ints};

    /// Curves on the Hilbert square of the plane in the (C1, C2) basis.
    fn hilb_curves() -> ConeGeometry {
        let eff = PolyCone::from_generators("c", 2, vec![ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        let mov = PolyCone::from_generators("c", 2, vec![ints(&[1, 1]), ints(&[0, 1])]).unwrap();
        ConeGeometry::new(mov, eff, Some(ClassVector::from_ints("c", &[1, 1]))).unwrap()
    }

    #[test]
    fn curve_class_three_one() {
        let g = hilb_curves();
        let alpha = ClassVector::from_ints("c", &[3, 1]);
        let d = g.decompose(&alpha, None).unwrap();
        assert_eq!(d.positive.coords, ints(&[1, 1]));
        assert_eq!(d.negative.coords, ints(&[2, 0]));
        assert_eq!(d.metadata.selection, Selection::CertifiedMaximum);
        assert!(d.verify());
        assert!(g.negative_boundary_check(&d));
    }

    #[test]
    fn movable_class_is_its_own_positive_part() {
        let g = hilb_curves();
        let alpha = ClassVector::from_ints("c", &[1, 3]);
        let s = g.decomposition_polytope(&alpha).unwrap();
        let report = preceq_maximum(&g, &s).unwrap();
        assert_eq!(report.maximum(), Some(&alpha));
        assert!(report.verify());
        let d = g.decompose(&alpha, None).unwrap();
        assert!(d.negative.is_zero());
    }

    #[test]
    fn zero_class_polytope_is_a_point() {
        let g = hilb_curves();
        let s = g.decomposition_polytope(&ClassVector::zero("c", 2)).unwrap();
        assert_eq!(s.vertices().unwrap(), vec![ClassVector::zero("c", 2)]);
    }

    #[test]
    fn rejects_non_pseudo_effective() {
        let g = hilb_curves();
        match g.decomposition_polytope(&ClassVector::from_ints("c", &[-1, 1])) {
            Err(Error::NotPseudoEffective { functional, class }) => {
                assert!(dot(&functional, &class).is_negative());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_objective_vanishing_on_a_ray() {
        let g = hilb_curves();
        let alpha = ClassVector::from_ints("c", &[3, 1]);
        let bad = ClassVector::from_ints("c", &[0, 1]);
        assert!(matches!(g.decompose(&alpha, Some(&bad)), Err(Error::InvalidObjective { .. })));
        let fine = ClassVector::new("c", vec![frac(1, 3), frac(5, 2)]);
        assert_eq!(g.decompose(&alpha, Some(&fine)).unwrap().positive.coords, ints(&[1, 1]));
    }
}
