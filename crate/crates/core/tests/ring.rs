mod common;

use common::q;
use cyclecones::fixtures::load;
use cyclecones::rational::Rational;
use cyclecones::ring::{RingPresentation, Value};
use proptest::prelude::*;

fn p2() -> RingPresentation {
    load("p2-hilb2").unwrap().ring().unwrap().clone()
}

fn linear(a: i64, b: i64) -> String {
    format!("(({a})*D1 + ({b})*D2)")
}

fn quadratic(c: &[i64]) -> String {
    format!("(({})*D1^2 + ({})*D1*D2 + ({})*D2^2)", c[0], c[1], c[2])
}

/// Degrees of `D1^i D2^(4-i)` for i = 0..4, from `D1^3 = 0`,
/// `D2^3 = 3 D1 D2^2 - 6 D1^2 D2` and `D1^2 D2^2 = 1`:
/// `D1 D2^3 = 3 D1^2 D2^2 - 6 D1^3 D2 = 3` and
/// `D2^4 = 3 D1 D2^3 - 6 D1^2 D2^2 = 3`.
const TOP: [i64; 5] = [3, 3, 1, 0, 0];

/// Degree of a product of linear forms `(a_k D1 + b_k D2)`, by expanding
/// the binary polynomial by hand.
fn oracle_degree(forms: &[(i64, i64)]) -> Rational {
    let mut poly = vec![q(1)];
    for &(a, b) in forms {
        let mut next = vec![q(0); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] += c * q(a);
            next[i] += c * q(b);
        }
        poly = next;
    }
    poly.iter().zip(TOP).map(|(c, t)| c * q(t)).sum()
}

#[test]
fn top_values_match_hand_expansion() {
    let r = p2();
    for (i, t) in TOP.iter().enumerate() {
        let text = format!("D1^{i}*D2^{}", 4 - i).replace("D1^0*", "").replace("*D2^0", "");
        let v = r.eval(&text).unwrap();
        assert_eq!(top(&r, &v), q(*t), "{text}");
    }
}

fn top(r: &RingPresentation, v: &Value) -> Rational {
    r.top_intersection(std::slice::from_ref(v)).unwrap()
}

fn coeff() -> impl Strategy<Value = i64> {
    -4i64..=4
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn products_of_divisors_match_oracle(f in prop::collection::vec((coeff(), coeff()), 4)) {
        let r = p2();
        let text = f.iter().map(|&(a, b)| linear(a, b)).collect::<Vec<_>>().join("*");
        let v = r.eval(&text).unwrap();
        prop_assert_eq!(top(&r, &v), oracle_degree(&f));
    }

    #[test]
    fn multiplication_is_commutative_and_associative(
        a in (coeff(), coeff()), b in (coeff(), coeff()), c in prop::collection::vec(coeff(), 3)
    ) {
        let r = p2();
        let x = r.eval(&linear(a.0, a.1)).unwrap();
        let y = r.eval(&linear(b.0, b.1)).unwrap();
        let z = r.eval(&quadratic(&c)).unwrap();
        prop_assert_eq!(r.multiply(&x, &y).unwrap(), r.multiply(&y, &x).unwrap());
        prop_assert_eq!(r.multiply(&x, &z).unwrap(), r.multiply(&z, &x).unwrap());
        let left = r.multiply(&r.multiply(&x, &y).unwrap(), &z).unwrap();
        let right = r.multiply(&x, &r.multiply(&y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }

    #[test]
    fn pairing_is_bilinear_and_symmetric(
        s in prop::collection::vec(coeff(), 3), t in prop::collection::vec(coeff(), 3),
        w in prop::collection::vec(coeff(), 3), k in coeff()
    ) {
        let r = p2();
        let (x, y, z) = (quadratic(&s), quadratic(&t), quadratic(&w));
        let p = |a: &str, b: &str| r.pair(&r.eval(a).unwrap(), &r.eval(b).unwrap()).unwrap();
        prop_assert_eq!(p(&format!("{x} + ({k})*{y}"), &z), p(&x, &z) + q(k) * p(&y, &z));
        prop_assert_eq!(p(&x, &y), p(&y, &x));
    }

    #[test]
    fn evaluation_matches_repeated_multiplication(a in (coeff(), coeff()), n in 1u32..=4) {
        let r = p2();
        let base = linear(a.0, a.1);
        let power = r.eval(&format!("{base}^{n}")).unwrap();
        let mut acc = r.eval(&base).unwrap();
        for _ in 1..n {
            acc = r.multiply(&acc, &r.eval(&base).unwrap()).unwrap();
        }
        prop_assert_eq!(power, acc);
    }
}

#[test]
fn surface_gram_is_symmetric() {
    let r = p2();
    let labels = r.basis_labels("surfaces").unwrap().to_vec();
    let vals: Vec<Value> = labels.iter().map(|l| r.eval(l).unwrap()).collect();
    let m = r.pairing_matrix(&vals, &vals).unwrap();
    for i in 0..m.len() {
        for j in 0..m.len() {
            assert_eq!(m[i][j], m[j][i]);
        }
    }
}
