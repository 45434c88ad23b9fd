//! Polyhedral cones in a named coordinate space.
//!
//! A [`PolyCone`] carries a generator list (V-representation), an inequality
//! list (H-representation, each row `l` meaning `l . x >= 0`), or both.
//! [`PolyCone::dd_convert`] fills in whichever side is missing and
//! canonicalizes both; the canonical form lists exactly the extremal rays as
//! primitive integer vectors, with any lineality entered as `+l`/`-l` pairs.
//! Equality of cones is equality of canonical forms.

mod dd;

pub use dd::Frame;

use std::borrow::Cow;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::certificate::Certificate;
use crate::error::{Error, Result};
use crate::lp;
use crate::rational::{dot, serde_matrix, ClassVector, Rational};

/// Which representations of a cone can be trusted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Authoritative {
    Generators,
    Inequalities,
    Both,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Canonical {
    primal: Frame,
    dual: Frame,
}

#[derive(Clone, Debug)]
pub struct PolyCone {
    basis: String,
    dim: usize,
    generators: Option<Vec<Vec<Rational>>>,
    inequalities: Option<Vec<Vec<Rational>>>,
    canonical: Option<Box<Canonical>>,
}

/// Result of a membership query. Either variant carries data that
/// re-verifies by direct arithmetic through [`Certificate::verify`].
#[derive(Clone, Debug)]
pub enum Membership {
    Inside(Certificate),
    Outside(Certificate),
}

impl Membership {
    pub fn is_inside(&self) -> bool {
        matches!(self, Membership::Inside(_))
    }

    pub fn certificate(&self) -> &Certificate {
        match self {
            Membership::Inside(c) | Membership::Outside(c) => c,
        }
    }

    /// Coefficients on the cone's generator list when inside.
    pub fn coefficients(&self) -> Option<&[Rational]> {
        match self.certificate() {
            Certificate::NonnegativeCombination { coefficients, .. } => Some(coefficients),
            _ => None,
        }
    }

    pub fn separating_functional(&self) -> Option<&[Rational]> {
        match self.certificate() {
            Certificate::Separation { functional, .. } => Some(functional),
            _ => None,
        }
    }
}

fn check_rows(dim: usize, rows: &[Vec<Rational>]) -> Result<()> {
    for r in rows {
        if r.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: r.len(),
            });
        }
    }
    Ok(())
}

impl PolyCone {
    pub fn from_generators(basis: impl Into<String>, dim: usize, generators: Vec<Vec<Rational>>) -> Result<Self> {
        check_rows(dim, &generators)?;
        Ok(Self {
            basis: basis.into(),
            dim,
            generators: Some(generators),
            inequalities: None,
            canonical: None,
        })
    }

    pub fn from_inequalities(basis: impl Into<String>, dim: usize, inequalities: Vec<Vec<Rational>>) -> Result<Self> {
        check_rows(dim, &inequalities)?;
        Ok(Self {
            basis: basis.into(),
            dim,
            generators: None,
            inequalities: Some(inequalities),
            canonical: None,
        })
    }

    /// Builds from class vectors, which must share a basis.
    pub fn from_classes(basis: impl Into<String>, dim: usize, classes: &[ClassVector]) -> Result<Self> {
        let basis = basis.into();
        for c in classes {
            if c.basis != basis {
                return Err(Error::BasisMismatch {
                    left: basis,
                    right: c.basis.clone(),
                });
            }
        }
        Self::from_generators(basis, dim, classes.iter().map(|c| c.coords.clone()).collect())
    }

    /// Both representations supplied by the caller. They are trusted as
    /// given; [`PolyCone::representations_agree`] cross-checks them.
    pub fn from_both(
        basis: impl Into<String>,
        dim: usize,
        generators: Vec<Vec<Rational>>,
        inequalities: Vec<Vec<Rational>>,
    ) -> Result<Self> {
        check_rows(dim, &generators)?;
        check_rows(dim, &inequalities)?;
        Ok(Self {
            basis: basis.into(),
            dim,
            generators: Some(generators),
            inequalities: Some(inequalities),
            canonical: None,
        })
    }

    pub fn zero(basis: impl Into<String>, dim: usize) -> Self {
        Self::from_generators(basis, dim, Vec::new()).expect("empty generator list")
    }

    pub fn full_space(basis: impl Into<String>, dim: usize) -> Self {
        Self::from_inequalities(basis, dim, Vec::new()).expect("empty inequality list")
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn generators(&self) -> Option<&[Vec<Rational>]> {
        self.generators.as_deref()
    }

    pub fn inequalities(&self) -> Option<&[Vec<Rational>]> {
        self.inequalities.as_deref()
    }

    pub fn authoritative(&self) -> Authoritative {
        match (&self.generators, &self.inequalities) {
            (Some(_), Some(_)) => Authoritative::Both,
            (Some(_), None) => Authoritative::Generators,
            _ => Authoritative::Inequalities,
        }
    }

    pub fn is_canonical(&self) -> bool {
        self.canonical.is_some()
    }

    fn compute_canonical(&self) -> Cow<'_, Canonical> {
        if let Some(c) = &self.canonical {
            return Cow::Borrowed(&**c);
        }
        match (&self.generators, &self.inequalities) {
            (Some(gens), _) => {
                // facets of C are the generators of the dual cone {l : l.g >= 0}
                let dual = dd::halfspaces_to_frame(self.dim, gens);
                let primal = dd::halfspaces_to_frame(self.dim, &dual.generators());
                Cow::Owned(Canonical { primal, dual })
            }
            (None, Some(ineqs)) => {
                let primal = dd::halfspaces_to_frame(self.dim, ineqs);
                let dual = dd::halfspaces_to_frame(self.dim, &primal.generators());
                Cow::Owned(Canonical { primal, dual })
            }
            (None, None) => unreachable!("constructors always set a representation"),
        }
    }

    /// Returns the same cone with both representations present and
    /// canonical.
    pub fn dd_convert(&self) -> PolyCone {
        let canonical = self.compute_canonical().into_owned();
        PolyCone {
            basis: self.basis.clone(),
            dim: self.dim,
            generators: Some(canonical.primal.generators()),
            inequalities: Some(canonical.dual.generators()),
            canonical: Some(Box::new(canonical)),
        }
    }

    /// `{l : l . x >= 0 for all x in C}`, in the same coordinates (the
    /// coordinate dot product is the duality pairing).
    pub fn dual_cone(&self) -> PolyCone {
        let c = self.compute_canonical().into_owned();
        let swapped = Canonical {
            primal: c.dual,
            dual: c.primal,
        };
        PolyCone {
            basis: self.basis.clone(),
            dim: self.dim,
            generators: Some(swapped.primal.generators()),
            inequalities: Some(swapped.dual.generators()),
            canonical: Some(Box::new(swapped)),
        }
    }

    /// Generators and lineality of the cone.
    pub fn frame(&self) -> Frame {
        self.compute_canonical().primal.clone()
    }

    /// Facet normals and the equations of the linear span.
    pub fn facet_frame(&self) -> Frame {
        self.compute_canonical().dual.clone()
    }

    /// The canonical inequality list (facets, plus equations as pairs).
    pub fn canonical_inequalities(&self) -> Vec<Vec<Rational>> {
        self.compute_canonical().dual.generators()
    }

    pub fn canonical_generators(&self) -> Vec<Vec<Rational>> {
        self.compute_canonical().primal.generators()
    }

    pub fn lineality_dim(&self) -> usize {
        self.frame().lineality.len()
    }

    /// Dimension of the linear span.
    pub fn span_dim(&self) -> usize {
        self.dim - self.facet_frame().lineality.len()
    }

    pub fn is_salient(&self) -> bool {
        self.lineality_dim() == 0
    }

    pub fn extremal_rays(&self) -> Result<Vec<ClassVector>> {
        let frame = self.frame();
        if let Some(line) = frame.lineality.first() {
            return Err(Error::NotSalient { line: line.clone() });
        }
        Ok(frame
            .rays
            .into_iter()
            .map(|r| ClassVector::new(self.basis.clone(), r))
            .collect())
    }

    pub fn same_cone(&self, other: &PolyCone) -> bool {
        self.dim == other.dim && self.frame() == other.frame()
    }

    fn check_vector(&self, v: &ClassVector) -> Result<()> {
        if v.basis != self.basis {
            return Err(Error::BasisMismatch {
                left: self.basis.clone(),
                right: v.basis.clone(),
            });
        }
        if v.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: v.dim(),
            });
        }
        Ok(())
    }

    /// Membership with certificate. Inside: nonnegative coefficients on the
    /// canonical generator list. Outside: a functional that is nonnegative on
    /// the cone and negative on `v` (the most violated canonical inequality).
    pub fn contains(&self, v: &ClassVector) -> Result<Membership> {
        self.check_vector(v)?;
        let canonical = self.compute_canonical();
        let gens = canonical.primal.generators();
        let ineqs = canonical.dual.generators();
        let violated = ineqs
            .iter()
            .map(|l| (l, dot(l, &v.coords)))
            .filter(|(_, val)| val.is_negative())
            .min_by(|a, b| a.1.cmp(&b.1));
        if let Some((l, _)) = violated {
            return Ok(Membership::Outside(Certificate::Separation {
                point: v.coords.clone(),
                functional: l.clone(),
                generators: gens,
            }));
        }
        let coefficients = lp::nonnegative_combination(&gens, &v.coords)
            .expect("H-representation and V-representation describe the same cone");
        Ok(Membership::Inside(Certificate::NonnegativeCombination {
            target: v.coords.clone(),
            generators: gens,
            coefficients,
        }))
    }

    /// Membership decided from the generator list alone by an exact LP.
    pub fn contains_by_generators(&self, v: &ClassVector) -> Result<bool> {
        self.check_vector(v)?;
        let gens = match &self.generators {
            Some(g) => g.clone(),
            None => self.canonical_generators(),
        };
        Ok(lp::nonnegative_combination(&gens, &v.coords).is_some())
    }

    /// Membership decided from the inequality list alone.
    pub fn contains_by_inequalities(&self, v: &ClassVector) -> Result<bool> {
        self.check_vector(v)?;
        let ineqs = match &self.inequalities {
            Some(h) => h.clone(),
            None => self.canonical_inequalities(),
        };
        Ok(ineqs.iter().all(|l| !dot(l, &v.coords).is_negative()))
    }

    pub fn contains_cone(&self, other: &PolyCone) -> Result<bool> {
        for g in other.canonical_generators() {
            if !self.contains_by_inequalities(&ClassVector::new(self.basis.clone(), g))? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// When both representations were supplied, checks they describe the
    /// same cone by mutual containment.
    pub fn representations_agree(&self) -> bool {
        let (Some(g), Some(h)) = (&self.generators, &self.inequalities) else {
            return true;
        };
        let gens_in_h = g.iter().all(|x| h.iter().all(|l| !dot(l, x).is_negative()));
        if !gens_in_h {
            return false;
        }
        let from_h = dd::halfspaces_to_frame(self.dim, h);
        from_h
            .generators()
            .iter()
            .all(|x| lp::nonnegative_combination(g, x).is_some())
    }

    /// True when `point` lies on the topological boundary: some canonical
    /// inequality vanishes on it, or the cone is not full dimensional.
    pub fn on_boundary(&self, point: &[Rational]) -> bool {
        let canonical = self.compute_canonical();
        if !canonical.dual.lineality.is_empty() {
            return true;
        }
        canonical.dual.rays.iter().any(|l| dot(l, point).is_zero())
    }

    /// Serializable form.
    pub fn to_json(&self) -> ConeJson {
        ConeJson {
            basis: self.basis.clone(),
            dim: self.dim,
            generators: self.generators.clone(),
            inequalities: self.inequalities.clone(),
        }
    }

    pub fn from_json(json: &ConeJson) -> Result<Self> {
        match (&json.generators, &json.inequalities) {
            (Some(g), Some(h)) => Self::from_both(json.basis.clone(), json.dim, g.clone(), h.clone()),
            (Some(g), None) => Self::from_generators(json.basis.clone(), json.dim, g.clone()),
            (None, Some(h)) => Self::from_inequalities(json.basis.clone(), json.dim, h.clone()),
            (None, None) => Err(Error::InvalidInput(
                "cone needs `generators` or `inequalities`".into(),
            )),
        }
    }
}

impl PartialEq for PolyCone {
    fn eq(&self, other: &Self) -> bool {
        self.basis == other.basis && self.same_cone(other)
    }
}

/// Wire format: `{"basis": ..., "dim": n, "generators": [["p/q", ...]], "inequalities": [...]}`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConeJson {
    pub basis: String,
    pub dim: usize,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    pub generators: Option<Vec<Vec<Rational>>>,
    #[serde(default, skip_serializing_if = "Option::is_none", with = "opt_matrix")]
    pub inequalities: Option<Vec<Vec<Rational>>>,
}

mod opt_matrix {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(m: &Option<Vec<Vec<Rational>>>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match m {
            Some(m) => serde_matrix::serialize(m, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Option<Vec<Vec<Rational>>>, D::Error> {
        serde_matrix::deserialize(d).map(Some)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ints;

    fn cone(gens: &[&[i64]]) -> PolyCone {
        let dim = gens[0].len();
        PolyCone::from_generators("t", dim, gens.iter().map(|g| ints(g)).collect()).unwrap()
    }

    #[test]
    fn orthant_from_inequalities() {
        let c = PolyCone::from_inequalities("t", 2, vec![ints(&[1, 0]), ints(&[0, 1])]).unwrap();
        let conv = c.dd_convert();
        assert_eq!(conv.authoritative(), Authoritative::Both);
        assert_eq!(conv.generators().unwrap(), &[ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn single_ray_is_encoded_with_paired_equalities() {
        let c = cone(&[&[1, 1]]).dd_convert();
        let h = c.inequalities().unwrap();
        assert!(h.contains(&ints(&[1, -1])));
        assert!(h.contains(&ints(&[-1, 1])));
        assert!(h.contains(&ints(&[1, 1])));
        assert!(!c.contains(&ClassVector::from_ints("t", &[1, 0])).unwrap().is_inside());
        assert!(c.contains(&ClassVector::from_ints("t", &[3, 3])).unwrap().is_inside());
        assert!(!c.contains(&ClassVector::from_ints("t", &[-1, -1])).unwrap().is_inside());
    }

    #[test]
    fn dual_of_full_space_is_zero() {
        let full = PolyCone::full_space("t", 2);
        let d = full.dual_cone();
        assert!(d.canonical_generators().is_empty());
        assert!(d.same_cone(&PolyCone::zero("t", 2)));
        assert!(PolyCone::zero("t", 2).dual_cone().same_cone(&full));
    }

    #[test]
    fn salience() {
        assert!(!PolyCone::full_space("t", 3).is_salient());
        assert!(!cone(&[&[1, 0], &[-1, 0], &[0, 1]]).is_salient());
        assert!(cone(&[&[1, 0], &[0, 1]]).is_salient());
        assert!(matches!(
            cone(&[&[1, 0], &[-1, 0], &[0, 1]]).extremal_rays(),
            Err(Error::NotSalient { .. })
        ));
    }

    #[test]
    fn interior_ray_removed() {
        let rays = cone(&[&[1, 0], &[0, 1], &[1, 1]]).extremal_rays().unwrap();
        let coords: Vec<_> = rays.into_iter().map(|r| r.coords).collect();
        assert_eq!(coords, vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn zero_is_in_every_cone() {
        for c in [cone(&[&[1, 2]]), PolyCone::zero("t", 2), PolyCone::full_space("t", 2)] {
            let m = c.contains(&ClassVector::zero("t", 2)).unwrap();
            assert!(m.is_inside());
            assert!(m.certificate().verify());
        }
    }

    #[test]
    fn dimension_errors() {
        assert!(matches!(
            PolyCone::from_generators("t", 2, vec![ints(&[1, 2, 3])]),
            Err(Error::DimensionMismatch { .. })
        ));
        let c = cone(&[&[1, 0]]);
        assert!(c.contains(&ClassVector::from_ints("t", &[1, 0, 0])).is_err());
        assert!(c.contains(&ClassVector::from_ints("u", &[1, 0])).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"basis":"t","dim":2,"generators":[["1","1/2"],[0,1]]}"#;
        let json: ConeJson = serde_json::from_str(text).unwrap();
        let c = PolyCone::from_json(&json).unwrap();
        let rays = c.extremal_rays().unwrap();
        assert_eq!(rays[1].coords, ints(&[2, 1]));
    }
}
