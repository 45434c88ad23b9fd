//! Bounded polyhedra `{x : l_i . x >= c_i}` and exact vertex enumeration.
//!
//! Vertices come from the homogenization `{(x, t) : l_i . x - c_i t >= 0,
//! t >= 0}`: its rays with `t > 0` are the vertices scaled by `t`, rays with
//! `t = 0` (and any lineality) are recession directions.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::cone::PolyCone;
use crate::error::{Error, Result};
use crate::rational::{dot, scale, serde_rational, serde_vector, ClassVector, Rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Halfspace {
    #[serde(with = "serde_vector")]
    pub functional: Vec<Rational>,
    #[serde(with = "serde_rational")]
    pub offset: Rational,
}

impl Halfspace {
    pub fn new(functional: Vec<Rational>, offset: Rational) -> Self {
        Self { functional, offset }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        dot(&self.functional, x) >= self.offset
    }
}

#[derive(Clone, Debug)]
pub struct RationalPolytope {
    basis: String,
    dim: usize,
    inequalities: Vec<Halfspace>,
    vertices: Option<Vec<Vec<Rational>>>,
}

/// Optimum of a linear objective over a polytope together with the whole
/// optimal face (its vertex set).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Optimum {
    pub value: Rational,
    pub vertices: Vec<ClassVector>,
}

impl Optimum {
    pub fn is_unique(&self) -> bool {
        self.vertices.len() == 1
    }
}

impl RationalPolytope {
    pub fn from_inequalities(basis: impl Into<String>, dim: usize, inequalities: Vec<Halfspace>) -> Result<Self> {
        for h in &inequalities {
            if h.functional.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: h.functional.len(),
                });
            }
        }
        Ok(Self {
            basis: basis.into(),
            dim,
            inequalities,
            vertices: None,
        })
    }

    pub fn basis(&self) -> &str {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn inequalities(&self) -> &[Halfspace] {
        &self.inequalities
    }

    pub fn vertices(&self) -> Option<Vec<ClassVector>> {
        self.vertices.as_ref().map(|vs| {
            vs.iter()
                .map(|v| ClassVector::new(self.basis.clone(), v.clone()))
                .collect()
        })
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        self.inequalities.iter().all(|h| h.contains(x))
    }

    /// Exact irredundant vertex list. An infeasible system yields an empty
    /// list; a feasible unbounded one is a domain error carrying a recession
    /// direction.
    pub fn vertex_enumeration(&self) -> Result<RationalPolytope> {
        if self.vertices.is_some() {
            return Ok(self.clone());
        }
        let d = self.dim;
        let mut rows: Vec<Vec<Rational>> = self
            .inequalities
            .iter()
            .map(|h| {
                let mut r = h.functional.clone();
                r.push(-h.offset.clone());
                r
            })
            .collect();
        let mut t_row = vec![Rational::zero(); d + 1];
        t_row[d] = Rational::from_integer(1.into());
        rows.push(t_row);

        let homog = PolyCone::from_inequalities("homogenized", d + 1, rows)?;
        let frame = homog.frame();
        let mut vertices: Vec<Vec<Rational>> = Vec::new();
        let mut recession: Option<Vec<Rational>> = None;
        for r in &frame.rays {
            if r[d].is_positive() {
                let inv = Rational::from_integer(1.into()) / &r[d];
                vertices.push(scale(&inv, &r[..d]));
            } else if recession.is_none() {
                recession = Some(r[..d].to_vec());
            }
        }
        if recession.is_none() {
            recession = frame.lineality.first().map(|l| l[..d].to_vec());
        }
        if let (false, Some(direction)) = (vertices.is_empty(), recession) {
            return Err(Error::Unbounded { direction });
        }
        vertices.sort();
        Ok(RationalPolytope {
            vertices: Some(vertices),
            ..self.clone()
        })
    }

    pub fn is_empty(&self) -> Result<bool> {
        let p = self.vertex_enumeration()?;
        Ok(p.vertices.as_ref().is_none_or(Vec::is_empty))
    }

    /// Maximum of `objective . x` and every vertex attaining it.
    pub fn maximize_linear(&self, objective: &ClassVector) -> Result<Optimum> {
        if objective.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: objective.dim(),
            });
        }
        let p = self.vertex_enumeration()?;
        let vertices = p.vertices.unwrap_or_default();
        let values: Vec<Rational> = vertices.iter().map(|v| dot(&objective.coords, v)).collect();
        let best = values.iter().max().cloned().ok_or(Error::EmptyPolytope)?;
        let optimal = vertices
            .iter()
            .zip(&values)
            .filter(|(_, val)| **val == best)
            .map(|(v, _)| ClassVector::new(self.basis.clone(), v.clone()))
            .collect();
        Ok(Optimum {
            value: best,
            vertices: optimal,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ints};

    fn triangle() -> RationalPolytope {
        RationalPolytope::from_inequalities(
            "t",
            2,
            vec![
                Halfspace::new(ints(&[1, 0]), int(0)),
                Halfspace::new(ints(&[0, 1]), int(0)),
                Halfspace::new(ints(&[-1, -1]), int(-1)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn triangle_vertices() {
        let v = triangle().vertex_enumeration().unwrap().vertices().unwrap();
        let coords: Vec<_> = v.into_iter().map(|c| c.coords).collect();
        assert_eq!(coords, vec![ints(&[0, 0]), ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn optimum_with_tie() {
        let opt = triangle()
            .maximize_linear(&ClassVector::from_ints("t", &[1, 1]))
            .unwrap();
        assert_eq!(opt.value, int(1));
        assert_eq!(opt.vertices.len(), 2);
        let opt = triangle()
            .maximize_linear(&ClassVector::from_ints("t", &[1, 0]))
            .unwrap();
        assert!(opt.is_unique());
        assert_eq!(opt.vertices[0].coords, ints(&[1, 0]));
    }

    #[test]
    fn infeasible_is_empty() {
        let p = RationalPolytope::from_inequalities(
            "t",
            1,
            vec![Halfspace::new(ints(&[1]), int(1)), Halfspace::new(ints(&[-1]), int(0))],
        )
        .unwrap();
        assert!(p.is_empty().unwrap());
        assert!(matches!(
            p.maximize_linear(&ClassVector::from_ints("t", &[1])),
            Err(Error::EmptyPolytope)
        ));
    }

    #[test]
    fn unbounded_reports_direction() {
        let p = RationalPolytope::from_inequalities("t", 2, vec![Halfspace::new(ints(&[1, 0]), int(0))]).unwrap();
        match p.vertex_enumeration() {
            Err(Error::Unbounded { direction }) => assert!(!crate::rational::is_zero_vec(&direction)),
            other => panic!("expected unbounded, got {other:?}"),
        }
    }
}
