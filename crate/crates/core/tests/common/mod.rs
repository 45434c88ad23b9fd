//! Random instance generators and brute-force oracles shared by the
//! integration suites. The oracles use their own elimination code and never
//! call into the crate's cone, LP or decomposition machinery.

#![allow(dead_code)]

use cyclecones::cone::PolyCone;
use cyclecones::negdef::PairingBasis;
use cyclecones::projbundle::{BundleClass2D, HNProfile};
use cyclecones::rational::{int, ClassVector, Rational};
use cyclecones::zariski::ConeGeometry;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn q(n: i64) -> Rational {
    int(n)
}

pub fn random_vec(r: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> Vec<Rational> {
    (0..dim).map(|_| q(r.gen_range(lo..=hi))).collect()
}

pub fn nonzero_vec(r: &mut impl Rng, dim: usize, lo: i64, hi: i64) -> Vec<Rational> {
    loop {
        let v = random_vec(r, dim, lo, hi);
        if v.iter().any(|x| !x.is_zero()) {
            return v;
        }
    }
}

pub fn lin(coeffs: &[Rational], rows: &[Vec<Rational>], dim: usize) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); dim];
    for (c, row) in coeffs.iter().zip(rows) {
        for (o, x) in out.iter_mut().zip(row) {
            *o += c * x;
        }
    }
    out
}

pub fn dotp(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Reduced row echelon form; returns the nonzero rows and pivot columns.
pub fn echelon(rows: &[Vec<Rational>], ncols: usize) -> (Vec<Vec<Rational>>, Vec<usize>) {
    let mut m: Vec<Vec<Rational>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let t = &f * &m[r][j];
                    m[i][j] -= t;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank_of(rows: &[Vec<Rational>], ncols: usize) -> usize {
    echelon(rows, ncols).1.len()
}

/// Basis of `{x : rows . x = 0}`.
pub fn kernel(rows: &[Vec<Rational>], ncols: usize) -> Vec<Vec<Rational>> {
    let (m, pivots) = echelon(rows, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); ncols];
            x[f] = Rational::one();
            for (row, &p) in m.iter().zip(&pivots) {
                x[p] = -row[f].clone();
            }
            x
        })
        .collect()
}

/// Integer vector with coprime entries on the same ray.
pub fn prim(v: &[Rational]) -> Vec<Rational> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(lcm.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rational::from_integer(x / &g)).collect()
}

pub fn sorted(mut rows: Vec<Vec<Rational>>) -> Vec<Vec<Rational>> {
    rows.sort();
    rows.dedup();
    rows
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Caratheodory membership: `v` is in the cone iff it is a nonnegative
/// combination of some linearly independent subset of the generators.
pub fn oracle_in_cone(gens: &[Vec<Rational>], v: &[Rational]) -> bool {
    let dim = v.len();
    if v.iter().all(Zero::is_zero) {
        return true;
    }
    for k in 1..=dim.min(gens.len()) {
        for s in subsets(gens.len(), k) {
            let cols: Vec<&Vec<Rational>> = s.iter().map(|&i| &gens[i]).collect();
            // rows of the augmented system [g_s1 .. g_sk | v]
            let aug: Vec<Vec<Rational>> = (0..dim)
                .map(|r| cols.iter().map(|c| c[r].clone()).chain([v[r].clone()]).collect())
                .collect();
            let (m, pivots) = echelon(&aug, k + 1);
            if pivots.len() != k || pivots.contains(&k) {
                continue;
            }
            if m.iter().all(|row| !row[k].is_negative()) {
                return true;
            }
        }
    }
    false
}

/// Facet normals of a full-dimensional cone: primitive normals of rank
/// `d - 1` generator subsets that are nonnegative on every generator.
pub fn oracle_facets(gens: &[Vec<Rational>], dim: usize) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for s in subsets(gens.len(), dim - 1) {
        let rows: Vec<Vec<Rational>> = s.iter().map(|&i| gens[i].clone()).collect();
        if rank_of(&rows, dim) != dim - 1 {
            continue;
        }
        let n = kernel(&rows, dim).remove(0);
        for sign in [Rational::one(), -Rational::one()] {
            let l: Vec<Rational> = n.iter().map(|x| x * &sign).collect();
            if gens.iter().all(|g| !dotp(&l, g).is_negative()) && gens.iter().any(|g| dotp(&l, g).is_positive()) {
                out.push(prim(&l));
            }
        }
    }
    sorted(out)
}

/// Extremal rays of a pointed cone: generators that are not nonnegative
/// combinations of the generators off their ray.
pub fn oracle_extremal(gens: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let mut out = Vec::new();
    for g in gens {
        if g.iter().all(Zero::is_zero) {
            continue;
        }
        let pg = prim(g);
        let others: Vec<Vec<Rational>> = gens.iter().filter(|h| prim(h) != pg).cloned().collect();
        if !oracle_in_cone(&others, g) {
            out.push(pg);
        }
    }
    sorted(out)
}

/// Generators of a full-dimensional pointed cone: vectors in `[-3,3]^dim`
/// with positive coordinate sum, so the all-ones functional is positive on
/// the cone.
pub fn pointed_generators(r: &mut impl Rng, dim: usize, count: usize) -> Vec<Vec<Rational>> {
    loop {
        let mut gens = Vec::new();
        while gens.len() < count {
            let v = random_vec(r, dim, -3, 3);
            if v.iter().sum::<Rational>().is_positive() {
                gens.push(v);
            }
        }
        if rank_of(&gens, dim) == dim {
            return gens;
        }
    }
}

pub fn nonneg_coeffs(r: &mut impl Rng, n: usize, hi: i64) -> Vec<Rational> {
    (0..n).map(|_| q(r.gen_range(0..=hi))).collect()
}

pub struct RandomGeometry {
    pub geometry: ConeGeometry,
    pub eff_gens: Vec<Vec<Rational>>,
    pub mov_gens: Vec<Vec<Rational>>,
    pub eff_facets: Vec<Vec<Rational>>,
}

/// `eff` pointed and full-dimensional, `mov` generated by nonnegative
/// combinations of the `eff` generators, degree functional all ones.
pub fn random_geometry(r: &mut impl Rng, basis: &str) -> RandomGeometry {
    let dim = r.gen_range(2..=4);
    let count = r.gen_range(dim..=dim + 2);
    let eff_gens = pointed_generators(r, dim, count);
    let mut mov_gens = Vec::new();
    while mov_gens.len() < dim || rank_of(&mov_gens, dim) < dim {
        let c = nonneg_coeffs(r, eff_gens.len(), 2);
        let v = lin(&c, &eff_gens, dim);
        if v.iter().any(|x| !x.is_zero()) {
            mov_gens.push(v);
        }
    }
    let eff = PolyCone::from_generators(basis, dim, eff_gens.clone()).unwrap();
    let mov = PolyCone::from_generators(basis, dim, mov_gens.clone()).unwrap();
    let ones = ClassVector::new(basis, vec![q(1); dim]);
    let geometry = ConeGeometry::new(mov, eff, Some(ones)).unwrap();
    let eff_facets = oracle_facets(&eff_gens, dim);
    RandomGeometry {
        geometry,
        eff_gens,
        mov_gens,
        eff_facets,
    }
}

/// HN data with at most four pieces, piece ranks at most 5, degrees in
/// `[-10, 10]` and total rank at least 2.
pub fn random_profile(r: &mut impl Rng) -> HNProfile {
    loop {
        let s = r.gen_range(1..=4);
        let mut pairs: Vec<(u32, i64)> = (0..s).map(|_| (r.gen_range(1..=5), r.gen_range(-10..=10))).collect();
        pairs.sort_by(|a, b| (Rational::new(a.1.into(), a.0.into())).cmp(&Rational::new(b.1.into(), b.0.into())));
        if let Ok(h) = HNProfile::from_pairs(&pairs) {
            if h.rank() >= 2 {
                return h;
            }
        }
    }
}

/// A pseudo-effective class `a (1, eps_k) + b (0, 1)` with `a, b` in
/// `0..=6` (not both zero) divided by a random denominator.
pub fn random_effective(r: &mut impl Rng, h: &HNProfile, k: usize) -> BundleClass2D {
    let eps = h.epsilon(k).unwrap();
    loop {
        let (a, b) = (r.gen_range(0..=6), r.gen_range(0..=6));
        if a == 0 && b == 0 {
            continue;
        }
        let den = q(r.gen_range(1..=3));
        return BundleClass2D::new(k, q(a) / &den, (q(a) * &eps + q(b)) / den);
    }
}

/// Symmetric Gram matrix with nonnegative off-diagonal entries and a
/// nonnegative class.
pub fn random_pairing(r: &mut impl Rng) -> (PairingBasis, Vec<Rational>) {
    let n = r.gen_range(1..=5);
    let mut gram = vec![vec![Rational::zero(); n]; n];
    for i in 0..n {
        gram[i][i] = q(r.gen_range(-4..=2));
        for j in i + 1..n {
            let x = if r.gen_bool(0.5) { q(r.gen_range(0..=2)) } else { Rational::zero() };
            gram[i][j] = x.clone();
            gram[j][i] = x;
        }
    }
    let c = nonneg_coeffs(r, n, 4);
    (PairingBasis::unlabeled(gram).unwrap(), c)
}

/// Leading principal minors alternate in sign starting negative.
pub fn oracle_negative_definite(m: &[Vec<Rational>]) -> bool {
    (1..=m.len()).all(|k| {
        let sub: Vec<Vec<Rational>> = m[..k].iter().map(|row| row[..k].to_vec()).collect();
        let d = det(&sub);
        if k % 2 == 1 {
            d.is_negative()
        } else {
            d.is_positive()
        }
    })
}

pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    let mut a = m.to_vec();
    let mut d = Rational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&i| !a[i][c].is_zero()) else {
            return Rational::zero();
        };
        if p != c {
            a.swap(p, c);
            d = -d;
        }
        d *= &a[c][c];
        for i in c + 1..n {
            let f = &a[i][c] / &a[c][c];
            for j in c..n {
                let t = &f * &a[c][j];
                a[i][j] -= t;
            }
        }
    }
    d
}

/// All negative parts satisfying the surface-type conditions, by trying
/// every support and solving `G_SS a = (G c)_S` with this module's own
/// elimination.
pub fn oracle_negative_parts(gram: &[Vec<Rational>], c: &[Rational]) -> Vec<Vec<Rational>> {
    let n = gram.len();
    let gc: Vec<Rational> = gram.iter().map(|row| dotp(row, c)).collect();
    let mut found = Vec::new();
    for mask in 0u32..(1 << n) {
        let s: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        let sub: Vec<Vec<Rational>> = s.iter().map(|&i| s.iter().map(|&j| gram[i][j].clone()).collect()).collect();
        if !s.is_empty() && !oracle_negative_definite(&sub) {
            continue;
        }
        let aug: Vec<Vec<Rational>> = s
            .iter()
            .enumerate()
            .map(|(r, &i)| sub[r].iter().cloned().chain([gc[i].clone()]).collect())
            .collect();
        let (m, _) = echelon(&aug, s.len() + 1);
        let mut a = vec![Rational::zero(); n];
        for (r, &i) in s.iter().enumerate() {
            a[i] = m[r][s.len()].clone();
        }
        if a.iter().any(Signed::is_negative) {
            continue;
        }
        let p: Vec<Rational> = c.iter().zip(&a).map(|(x, y)| x - y).collect();
        if gram.iter().any(|row| dotp(row, &p).is_negative()) {
            continue;
        }
        if !found.contains(&a) {
            found.push(a);
        }
    }
    found
}
