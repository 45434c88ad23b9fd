use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::rational::{format_rational, Rational};

/// Exponent vector over the generators of a presentation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(ngens: usize) -> Self {
        Monomial(vec![0; ngens])
    }

    pub fn generator(ngens: usize, i: usize) -> Self {
        let mut e = vec![0; ngens];
        e[i] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, assuming `self` divides `other`.
    pub fn quotient(&self, other: &Monomial) -> Monomial {
        Monomial(other.0.iter().zip(&self.0).map(|(a, b)| a - b).collect())
    }

    /// All monomials of the given degree, first generator's exponent
    /// descending.
    pub fn all_of_degree(ngens: usize, degree: usize) -> Vec<Monomial> {
        fn go(ngens: usize, left: usize, prefix: &mut Vec<u32>, out: &mut Vec<Monomial>) {
            if prefix.len() + 1 == ngens {
                prefix.push(left as u32);
                out.push(Monomial(prefix.clone()));
                prefix.pop();
                return;
            }
            for e in (0..=left).rev() {
                prefix.push(e as u32);
                go(ngens, left - e, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        if ngens == 0 {
            if degree == 0 {
                out.push(Monomial(Vec::new()));
            }
            return out;
        }
        go(ngens, degree, &mut Vec::new(), &mut out);
        out
    }

    pub fn display(&self, names: &[String]) -> String {
        let parts: Vec<String> = self
            .0
            .iter()
            .zip(names)
            .filter(|(e, _)| **e > 0)
            .map(|(e, n)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// Descending in the first generator's exponent, then the next, and so on,
/// so that sorted maps list `D1^2, D1*D2, D2^2` in that order.
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        other.0.cmp(&self.0)
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse homogeneous polynomial; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Poly(pub BTreeMap<Monomial, Rational>);

impl Poly {
    pub fn zero() -> Self {
        Poly(BTreeMap::new())
    }

    pub fn monomial(m: Monomial) -> Self {
        Poly::term(m, Rational::one())
    }

    pub fn term(m: Monomial, c: Rational) -> Self {
        let mut p = Poly::zero();
        p.add_term(m, c);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, m: Monomial, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.0.entry(m.clone()).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, s: &Rational) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.0 {
            out.add_term(m.clone(), c * s);
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Poly {
        Poly(self.0.iter().map(|(k, c)| (k.mul(m), c.clone())).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        let mut out = Poly::zero();
        for (a, x) in &self.0 {
            for (b, y) in &other.0 {
                out.add_term(a.mul(b), x * y);
            }
        }
        out
    }

    pub fn coefficient(&self, m: &Monomial) -> Rational {
        self.0.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (m, c)) in self.0.iter().enumerate() {
            let neg = c < &Rational::zero();
            let abs = if neg { -c } else { c.clone() };
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mono = m.display(names);
            if abs.is_one() {
                out.push_str(&mono);
            } else if mono == "1" {
                out.push_str(&format_rational(&abs));
            } else {
                out.push_str(&format!("{}*{}", format_rational(&abs), mono));
            }
        }
        out
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (1..=self.0.len()).map(|i| format!("x{i}")).collect();
        f.write_str(&self.display(&names))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn degree_listing_order() {
        let names = vec!["D1".to_string(), "D2".to_string()];
        let shown: Vec<String> = Monomial::all_of_degree(2, 2).iter().map(|m| m.display(&names)).collect();
        assert_eq!(shown, ["D1^2", "D1*D2", "D2^2"]);
        let mut sorted = Monomial::all_of_degree(2, 3);
        sorted.reverse();
        sorted.sort();
        assert_eq!(sorted, Monomial::all_of_degree(2, 3));
    }

    #[test]
    fn poly_arithmetic_cancels() {
        let x = Poly::monomial(Monomial(vec![1, 0]));
        let y = Poly::monomial(Monomial(vec![0, 1]));
        let s = x.add(&y);
        let d = x.add(&y.scale(&int(-1)));
        let prod = s.mul(&d);
        assert_eq!(prod.coefficient(&Monomial(vec![1, 1])), int(0));
        assert_eq!(prod.0.len(), 2);
        let names = vec!["a".to_string(), "b".to_string()];
        assert_eq!(prod.display(&names), "a^2 - b^2");
    }
}
