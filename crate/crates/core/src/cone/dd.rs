//! Double description: incremental conversion from inequalities to
//! generators.
//!
//! The cone `{x : a_i . x >= 0}` is built one halfspace at a time starting
//! from the whole space. The running state is a lineality basis `L` and a
//! list of rays `R` whose nonnegative hull, plus `L`, is the current cone.
//! Every processed row vanishes on `L`. When a new row is not orthogonal to
//! `L`, one lineality vector is promoted to a ray and the rest of the state is
//! projected onto the row's kernel. Otherwise rays are split by sign, and each
//! adjacent (positive, negative) pair contributes one new ray on the
//! hyperplane. Adjacency is decided by the rank of the common tight rows.

use num_traits::{Signed, Zero};

use crate::linalg::{rank, rref};
use crate::rational::{dot, is_zero_vec, primitive, primitive_unoriented, zeros, Rational};

/// Generators of a cone: a lineality basis plus rays of the pointed part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    pub lineality: Vec<Vec<Rational>>,
    pub rays: Vec<Vec<Rational>>,
}

impl Frame {
    /// Generator list with each lineality vector entered as `+l` and `-l`.
    pub fn generators(&self) -> Vec<Vec<Rational>> {
        let mut out = self.rays.clone();
        for l in &self.lineality {
            out.push(l.clone());
            out.push(l.iter().map(|x| -x).collect());
        }
        out
    }
}

pub fn halfspaces_to_frame(dim: usize, rows: &[Vec<Rational>]) -> Frame {
    let mut lineality: Vec<Vec<Rational>> = (0..dim)
        .map(|i| {
            let mut e = zeros(dim);
            e[i] = Rational::from_integer(1.into());
            e
        })
        .collect();
    let mut rays: Vec<Vec<Rational>> = Vec::new();
    let mut processed: Vec<Vec<Rational>> = Vec::new();

    for a in rows {
        if is_zero_vec(a) {
            continue;
        }
        if let Some(j) = lineality.iter().position(|l| !dot(a, l).is_zero()) {
            let mut l0 = lineality.swap_remove(j);
            if dot(a, &l0).is_negative() {
                l0 = l0.iter().map(|x| -x).collect();
            }
            let a_l0 = dot(a, &l0);
            let project = |v: &Vec<Rational>| -> Vec<Rational> {
                let t = dot(a, v) / &a_l0;
                if t.is_zero() {
                    return v.clone();
                }
                v.iter().zip(&l0).map(|(x, y)| x - &t * y).collect()
            };
            lineality = lineality.iter().map(|l| primitive_unoriented(&project(l))).collect();
            rays = rays.iter().map(|r| primitive(&project(r))).collect();
            rays.push(primitive(&l0));
            processed.push(a.clone());
            continue;
        }

        let signs: Vec<Rational> = rays.iter().map(|r| dot(a, r)).collect();
        let target_rank = dim as isize - lineality.len() as isize - 2;
        let tight: Vec<Vec<bool>> = rays
            .iter()
            .map(|r| processed.iter().map(|p| dot(p, r).is_zero()).collect())
            .collect();

        let mut next: Vec<Vec<Rational>> = Vec::new();
        for (r, s) in rays.iter().zip(&signs) {
            if !s.is_negative() {
                next.push(r.clone());
            }
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_positive()).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| signs[i].is_negative()).collect();
        for &p in &pos {
            for &n in &neg {
                let common: Vec<Vec<Rational>> = processed
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| tight[p][k] && tight[n][k])
                    .map(|(_, row)| row.clone())
                    .collect();
                if target_rank < 0 || (common.len() as isize) < target_rank {
                    continue;
                }
                if rank(&common, dim) as isize != target_rank {
                    continue;
                }
                let sp = &signs[p];
                let sn = &signs[n];
                let v: Vec<Rational> = rays[n]
                    .iter()
                    .zip(&rays[p])
                    .map(|(xn, xp)| sp * xn - sn * xp)
                    .collect();
                next.push(primitive(&v));
            }
        }
        rays = next;
        processed.push(a.clone());
    }

    canonical_frame(dim, lineality, rays)
}

/// Unique representation: lineality in reduced echelon form, rays projected
/// onto the orthogonal complement of the lineality space, primitive, deduped
/// and sorted.
pub fn canonical_frame(dim: usize, lineality: Vec<Vec<Rational>>, rays: Vec<Vec<Rational>>) -> Frame {
    let (lin, _) = rref(&lineality, dim);
    let lin: Vec<Vec<Rational>> = lin.iter().map(|l| primitive_unoriented(l)).collect();
    let mut out: Vec<Vec<Rational>> = rays
        .iter()
        .map(|r| primitive(&project_off(r, &lin)))
        .filter(|r| !is_zero_vec(r))
        .collect();
    out.sort();
    out.dedup();
    Frame {
        lineality: lin,
        rays: out,
    }
}

/// Orthogonal projection of `v` onto the complement of `span(basis)`.
fn project_off(v: &[Rational], basis: &[Vec<Rational>]) -> Vec<Rational> {
    if basis.is_empty() {
        return v.to_vec();
    }
    let k = basis.len();
    let gram: Vec<Vec<Rational>> = basis
        .iter()
        .map(|a| basis.iter().map(|b| dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rational> = basis.iter().map(|b| dot(b, v)).collect();
    let coeffs = crate::linalg::solve(&gram, &rhs, k).expect("lineality basis is independent");
    let mut out = v.to_vec();
    for (c, b) in coeffs.iter().zip(basis) {
        for (o, x) in out.iter_mut().zip(b) {
            *o -= c * x;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ints;

    #[test]
    fn orthant() {
        let f = halfspaces_to_frame(2, &[ints(&[1, 0]), ints(&[0, 1])]);
        assert!(f.lineality.is_empty());
        assert_eq!(f.rays, vec![ints(&[0, 1]), ints(&[1, 0])]);
    }

    #[test]
    fn no_rows_is_whole_space() {
        let f = halfspaces_to_frame(3, &[]);
        assert_eq!(f.lineality.len(), 3);
        assert!(f.rays.is_empty());
    }

    #[test]
    fn halfplane_has_a_line() {
        let f = halfspaces_to_frame(2, &[ints(&[1, 1])]);
        assert_eq!(f.lineality, vec![ints(&[1, -1])]);
        assert_eq!(f.rays, vec![ints(&[1, 1])]);
    }

    #[test]
    fn contradictory_rows_give_zero_cone() {
        let f = halfspaces_to_frame(2, &[ints(&[1, 0]), ints(&[-1, 0]), ints(&[0, 1]), ints(&[0, -1])]);
        assert!(f.lineality.is_empty());
        assert!(f.rays.is_empty());
    }

    #[test]
    fn square_pyramid() {
        // cone over a square: four facets, four rays
        let rows = vec![ints(&[1, 0, 1]), ints(&[-1, 0, 1]), ints(&[0, 1, 1]), ints(&[0, -1, 1])];
        let f = halfspaces_to_frame(3, &rows);
        assert_eq!(f.rays.len(), 4);
        for r in &f.rays {
            assert_eq!(r[2], crate::rational::int(1));
        }
    }
}
