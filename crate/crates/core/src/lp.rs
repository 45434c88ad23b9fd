//! Exact phase-one simplex. The only question this crate asks of linear
//! programming is feasibility of `sum_j x_j * columns[j] = target, x >= 0`;
//! cone membership and Farkas certificates both reduce to it.

use num_traits::{Signed, Zero};

use crate::rational::{zeros, Rational};

/// Returns nonnegative coefficients `x` with `sum x_j * columns[j] == target`,
/// or `None` if no such combination exists. Bland's rule keeps the pivoting
/// finite on degenerate inputs.
pub fn nonnegative_combination(columns: &[Vec<Rational>], target: &[Rational]) -> Option<Vec<Rational>> {
    let m = target.len();
    let n = columns.len();
    if m == 0 {
        return Some(zeros(n));
    }
    let width = n + m + 1;
    // rows 0..m are constraints, row m is the phase-one cost row
    let mut t: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for i in 0..m {
        let flip = target[i].is_negative();
        let mut row = zeros(width);
        for (j, col) in columns.iter().enumerate() {
            row[j] = if flip { -col[i].clone() } else { col[i].clone() };
        }
        row[n + i] = Rational::from_integer(1.into());
        row[width - 1] = if flip { -target[i].clone() } else { target[i].clone() };
        t.push(row);
    }
    let mut cost = zeros(width);
    for row in &t {
        for j in 0..n {
            cost[j] -= &row[j];
        }
        cost[width - 1] -= &row[width - 1];
    }
    t.push(cost);
    let mut basis: Vec<usize> = (n..n + m).collect();

    while let Some(enter) = (0..n + m).find(|&j| t[m][j].is_negative()) {
        let mut leave: Option<usize> = None;
        let mut best: Option<Rational> = None;
        for i in 0..m {
            if !t[i][enter].is_positive() {
                continue;
            }
            let ratio = &t[i][width - 1] / &t[i][enter];
            let better = match &best {
                None => true,
                Some(b) => ratio < *b || (ratio == *b && basis[i] < basis[leave.unwrap()]),
            };
            if better {
                best = Some(ratio);
                leave = Some(i);
            }
        }
        // Phase one is bounded below by zero, so an entering column always
        // has a positive entry.
        let r = leave?;
        pivot(&mut t, r, enter);
        basis[r] = enter;
    }

    if !t[m][width - 1].is_zero() {
        return None;
    }
    let mut x = zeros(n);
    for (i, &b) in basis.iter().enumerate() {
        if b < n {
            x[b] = t[i][width - 1].clone();
        }
    }
    Some(x)
}

fn pivot(t: &mut [Vec<Rational>], r: usize, c: usize) {
    let p = t[r][c].clone();
    for x in t[r].iter_mut() {
        *x /= &p;
    }
    let pivot_row = t[r].clone();
    for (i, row) in t.iter_mut().enumerate() {
        if i == r || row[c].is_zero() {
            continue;
        }
        let f = row[c].clone();
        for (x, pv) in row.iter_mut().zip(&pivot_row) {
            if !pv.is_zero() {
                *x -= &f * pv;
            }
        }
    }
}

/// Farkas certificate for infeasibility of `{x : rows[i] . x >= offsets[i]}`:
/// multipliers `y >= 0` with `sum y_i rows[i] = 0` and `sum y_i offsets[i] = 1`.
pub fn farkas_certificate(rows: &[Vec<Rational>], offsets: &[Rational], dim: usize) -> Option<Vec<Rational>> {
    let columns: Vec<Vec<Rational>> = rows
        .iter()
        .zip(offsets)
        .map(|(row, c)| {
            let mut col = row.clone();
            col.push(c.clone());
            col
        })
        .collect();
    let mut target = zeros(dim);
    target.push(Rational::from_integer(1.into()));
    nonnegative_combination(&columns, &target)
}
