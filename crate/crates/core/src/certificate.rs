//! Self-contained witnesses. Each certificate stores all the data needed to
//! re-check it, and [`Certificate::verify`] does so with exact arithmetic and
//! nothing else.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::linalg::{determinant, principal_submatrix};
use crate::rational::{combine, dot, serde_matrix, serde_rational, serde_vector, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SignCondition {
    Positive,
    Nonnegative,
    Zero,
    Negative,
}

impl SignCondition {
    pub fn holds(self, value: &Rational) -> bool {
        match self {
            SignCondition::Positive => value.is_positive(),
            SignCondition::Nonnegative => !value.is_negative(),
            SignCondition::Zero => value.is_zero(),
            SignCondition::Negative => value.is_negative(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// `target = sum coefficients[i] * generators[i]`, all coefficients >= 0.
    NonnegativeCombination {
        #[serde(with = "serde_vector")]
        target: Vec<Rational>,
        #[serde(with = "serde_matrix")]
        generators: Vec<Vec<Rational>>,
        #[serde(with = "serde_vector")]
        coefficients: Vec<Rational>,
    },
    /// `functional >= 0` on every generator and `functional . point < 0`.
    Separation {
        #[serde(with = "serde_vector")]
        point: Vec<Rational>,
        #[serde(with = "serde_vector")]
        functional: Vec<Rational>,
        #[serde(with = "serde_matrix")]
        generators: Vec<Vec<Rational>>,
    },
    /// `multipliers >= 0`, `sum y_i rows[i] = 0`, `sum y_i offsets[i] > 0`:
    /// the system `rows[i] . x >= offsets[i]` has no solution.
    Farkas {
        #[serde(with = "serde_matrix")]
        rows: Vec<Vec<Rational>>,
        #[serde(with = "serde_vector")]
        offsets: Vec<Rational>,
        #[serde(with = "serde_vector")]
        multipliers: Vec<Rational>,
    },
    /// Two exactly computed vectors that must coincide.
    Identity {
        label: String,
        #[serde(with = "serde_vector")]
        lhs: Vec<Rational>,
        #[serde(with = "serde_vector")]
        rhs: Vec<Rational>,
    },
    /// `functional . point` has the stated sign.
    Pairing {
        label: String,
        #[serde(with = "serde_vector")]
        functional: Vec<Rational>,
        #[serde(with = "serde_vector")]
        point: Vec<Rational>,
        condition: SignCondition,
    },
    /// A scalar with a stated sign, for values computed elsewhere.
    Sign {
        label: String,
        #[serde(with = "serde_rational")]
        value: Rational,
        condition: SignCondition,
    },
    /// Leading principal minors alternate in sign starting negative.
    NegativeDefinite {
        #[serde(with = "serde_matrix")]
        matrix: Vec<Vec<Rational>>,
    },
}

impl Certificate {
    pub fn verify(&self) -> bool {
        match self {
            Certificate::NonnegativeCombination {
                target,
                generators,
                coefficients,
            } => {
                coefficients.len() == generators.len()
                    && coefficients.iter().all(|c| !c.is_negative())
                    && combine(coefficients, generators, target.len()) == *target
            }
            Certificate::Separation {
                point,
                functional,
                generators,
            } => {
                generators.iter().all(|g| !dot(functional, g).is_negative())
                    && dot(functional, point).is_negative()
            }
            Certificate::Farkas {
                rows,
                offsets,
                multipliers,
            } => {
                if multipliers.len() != rows.len() || multipliers.iter().any(Signed::is_negative) {
                    return false;
                }
                let dim = rows.first().map_or(0, Vec::len);
                let lhs = combine(multipliers, rows, dim);
                let rhs = dot(multipliers, offsets);
                lhs.iter().all(Zero::is_zero) && rhs.is_positive()
            }
            Certificate::Identity { lhs, rhs, .. } => lhs == rhs,
            Certificate::Pairing {
                functional,
                point,
                condition,
                ..
            } => functional.len() == point.len() && condition.holds(&dot(functional, point)),
            Certificate::Sign { value, condition, .. } => condition.holds(value),
            Certificate::NegativeDefinite { matrix } => is_negative_definite(matrix),
        }
    }
}

/// Sylvester's criterion for `-matrix`: `(-1)^m det(M_m) > 0` for every
/// leading principal minor `M_m`. The empty matrix counts as negative
/// definite.
pub fn is_negative_definite(matrix: &[Vec<Rational>]) -> bool {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return false;
    }
    let symmetric = (0..n).all(|i| (0..i).all(|j| matrix[i][j] == matrix[j][i]));
    if !symmetric {
        return false;
    }
    (1..=n).all(|m| {
        let idx: Vec<usize> = (0..m).collect();
        let det = determinant(&principal_submatrix(matrix, &idx));
        if m % 2 == 0 {
            det.is_positive()
        } else {
            det.is_negative()
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ints;

    #[test]
    fn negative_definite_examples() {
        assert!(is_negative_definite(&[ints(&[-2, 1]), ints(&[1, -2])]));
        assert!(!is_negative_definite(&[ints(&[-2, 3]), ints(&[3, -2])]));
        assert!(!is_negative_definite(&[ints(&[1])]));
        assert!(is_negative_definite(&[]));
    }

    #[test]
    fn tampered_certificates_fail() {
        let good = Certificate::NonnegativeCombination {
            target: ints(&[2, 1]),
            generators: vec![ints(&[1, 0]), ints(&[0, 1])],
            coefficients: ints(&[2, 1]),
        };
        assert!(good.verify());
        let other_generators = Certificate::NonnegativeCombination {
            target: ints(&[2, 1]),
            generators: vec![ints(&[1, 0]), ints(&[1, 1])],
            coefficients: ints(&[1, 1]),
        };
        assert!(other_generators.verify());
        let negative = Certificate::NonnegativeCombination {
            target: ints(&[0, 1]),
            generators: vec![ints(&[1, 0]), ints(&[1, 1])],
            coefficients: ints(&[-1, 1]),
        };
        assert!(!negative.verify());
    }
}
