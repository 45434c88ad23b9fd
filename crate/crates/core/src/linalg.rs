//! Dense exact linear algebra over the rationals. Matrices are row-major
//! `Vec<Vec<Rational>>`; sizes in this crate stay in the tens.

use num_traits::{One, Zero};

use crate::rational::{primitive_unoriented, zeros, Rational};

pub type Matrix = Vec<Vec<Rational>>;

/// Reduced row echelon form. Returns the reduced matrix (zero rows dropped)
/// and the pivot column of each remaining row.
pub fn rref(rows: &[Vec<Rational>], ncols: usize) -> (Matrix, Vec<usize>) {
    let mut m: Matrix = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m.len() {
            break;
        }
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = Rational::one() / &m[r][c];
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                *x -= &f * p;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vec<Rational>], ncols: usize) -> usize {
    rref(rows, ncols).1.len()
}

/// Basis of `{x : rows * x = 0}`, one primitive integer vector per free column.
pub fn nullspace(rows: &[Vec<Rational>], ncols: usize) -> Matrix {
    let (m, pivots) = rref(rows, ncols);
    let mut basis = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = zeros(ncols);
        v[free] = Rational::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        basis.push(primitive_unoriented(&v));
    }
    basis
}

/// Some solution of `a * x = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &[Vec<Rational>], b: &[Rational], ncols: usize) -> Option<Vec<Rational>> {
    let augmented: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let (m, pivots) = rref(&augmented, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = zeros(ncols);
    for (row, &pc) in m.iter().zip(&pivots) {
        x[pc] = row[ncols].clone();
    }
    Some(x)
}

/// Coordinates of `v` with respect to the rows of `basis` (`v = sum c_i basis_i`).
pub fn coordinates(basis: &[Vec<Rational>], v: &[Rational]) -> Option<Vec<Rational>> {
    let n = basis.len();
    let dim = v.len();
    let cols: Matrix = (0..dim)
        .map(|j| basis.iter().map(|row| row[j].clone()).collect())
        .collect();
    solve(&cols, v, n)
}

pub fn determinant(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a: Matrix = m.to_vec();
    let mut det = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        let pivot = a[c][c].clone();
        det *= &pivot;
        for i in c + 1..n {
            if a[i][c].is_zero() {
                continue;
            }
            let f = &a[i][c] / &pivot;
            let (top, rest) = a.split_at_mut(i);
            for (x, y) in rest[0][c..n].iter_mut().zip(&top[c][c..n]) {
                *x -= &f * y;
            }
        }
    }
    det
}

pub fn transpose(m: &[Vec<Rational>], ncols: usize) -> Matrix {
    (0..ncols)
        .map(|j| m.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_vec(m: &[Vec<Rational>], v: &[Rational]) -> Vec<Rational> {
    m.iter().map(|row| crate::rational::dot(row, v)).collect()
}

/// Principal submatrix on the given index set.
pub fn principal_submatrix(m: &[Vec<Rational>], idx: &[usize]) -> Matrix {
    idx.iter()
        .map(|&i| idx.iter().map(|&j| m[i][j].clone()).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int, ints};

    #[test]
    fn rank_and_nullspace() {
        let rows = vec![ints(&[1, 2, 3]), ints(&[2, 4, 6]), ints(&[0, 1, 1])];
        assert_eq!(rank(&rows, 3), 2);
        let ns = nullspace(&rows, 3);
        assert_eq!(ns, vec![ints(&[1, 1, -1])]);
    }

    #[test]
    fn solve_and_determinant() {
        let a = vec![ints(&[2, 1]), ints(&[1, 3])];
        let x = solve(&a, &ints(&[3, 5]), 2).unwrap();
        assert_eq!(x, vec![frac(4, 5), frac(7, 5)]);
        assert_eq!(determinant(&a), int(5));
        assert!(solve(&[ints(&[1, 1]), ints(&[1, 1])], &ints(&[0, 1]), 2).is_none());
        assert_eq!(determinant(&[ints(&[0, 1]), ints(&[1, 0])]), int(-1));
    }

    #[test]
    fn coordinates_in_basis() {
        let basis = vec![ints(&[1, 1]), ints(&[0, 1])];
        assert_eq!(coordinates(&basis, &ints(&[3, 1])).unwrap(), ints(&[3, -2]));
    }
}
