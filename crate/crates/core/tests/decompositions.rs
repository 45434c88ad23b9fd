mod common;

use common::*;
use cyclecones::decomposition::Selection;
use cyclecones::error::Error;
use cyclecones::rational::{ClassVector, Rational};
use cyclecones::zariski::{preceq_maximum, ConeGeometry, DirectednessStatus};
use num_traits::Zero;
use rand::Rng;

#[test]
fn closed_form_matches_cone_program() {
    let mut r = rng(21);
    for n in 0..500 {
        let h = random_profile(&mut r);
        let k = r.gen_range(1..h.rank());
        let alpha = random_effective(&mut r, &h, k);
        let closed = h.zariski_decompose(&alpha).unwrap();
        let class = alpha.to_class(&h);
        let g = h.geometry(k).unwrap();
        let lp = g.decompose(&class, None).unwrap();
        assert_eq!(closed.positive, lp.positive, "instance {n}: {h} k={k} {class}");
        assert_eq!(closed.negative, lp.negative, "instance {n}");
        assert_eq!(lp.metadata.selection, Selection::CertifiedMaximum, "instance {n}");
        let s = g.decomposition_polytope(&class).unwrap();
        let report = preceq_maximum(&g, &s).unwrap();
        assert!(report.verify(), "instance {n}");
        assert_eq!(report.maximum(), Some(&closed.positive), "instance {n}");
        assert!(closed.verify() && lp.verify(), "instance {n}");
    }
}

#[test]
fn negdef_matches_oracles() {
    let mut r = rng(22);
    let mut nontrivial = 0;
    for n in 0..200 {
        let (basis, c) = random_pairing(&mut r);
        let fast = basis.decompose(&c).unwrap();
        let slow = match basis.brute_force(&c) {
            Ok(d) => d,
            Err(Error::OracleAmbiguity { count }) => panic!("instance {n}: {count} valid decompositions"),
            Err(e) => panic!("instance {n}: {e}"),
        };
        assert_eq!(fast.positive, slow.positive, "instance {n}: {basis:?} {c:?}");
        assert_eq!(fast.negative, slow.negative, "instance {n}");
        let parts = oracle_negative_parts(&basis.gram, &c);
        assert_eq!(parts, vec![fast.negative.coords.clone()], "instance {n}");
        assert!(fast.verify(), "instance {n}");
        nontrivial += (!fast.negative.is_zero() && !fast.positive.is_zero()) as usize;
    }
    assert!(nontrivial >= 20, "only {nontrivial} instances with both parts nonzero");
}

#[test]
fn single_negative_vector_is_its_own_negative_part() {
    for d in 1..=5 {
        let b = cyclecones::negdef::PairingBasis::unlabeled(vec![vec![q(-d)]]).unwrap();
        for c in 1..=3 {
            let out = b.decompose(&[q(c)]).unwrap();
            assert!(out.positive.is_zero());
            assert_eq!(out.negative.coords, vec![q(c)]);
        }
    }
}

/// Objectives strictly positive on the rays of `eff`: a positive multiple
/// of the all-ones functional plus a nonnegative mix of facet normals.
fn objectives(r: &mut impl Rng, basis: &str, dim: usize, facets: &[Vec<Rational>]) -> Vec<ClassVector> {
    (0..10)
        .map(|_| {
            let mut o: Vec<Rational> = vec![q(r.gen_range(1..=3)); dim];
            let mix = lin(&nonneg_coeffs(r, facets.len(), 3), facets, dim);
            for (x, y) in o.iter_mut().zip(mix) {
                *x += y;
            }
            ClassVector::new(basis, o)
        })
        .collect()
}

fn check_independence(g: &ConeGeometry, alpha: &ClassVector, objectives: &[ClassVector]) -> bool {
    let base = g.decompose(alpha, None).unwrap();
    if base.metadata.selection != Selection::CertifiedMaximum {
        return false;
    }
    for o in objectives {
        let d = g.decompose(alpha, Some(o)).unwrap();
        assert_eq!(d.positive, base.positive, "objective {o} on {alpha}");
        assert!(d.verify());
    }
    true
}

#[test]
fn objective_independence_when_maximum_is_certified() {
    let mut r = rng(23);
    let mut certified = 0;
    for _ in 0..25 {
        let rg = random_geometry(&mut r, "random");
        let dim = rg.geometry.dim();
        let alpha = ClassVector::new("random", lin(&nonneg_coeffs(&mut r, rg.eff_gens.len(), 3), &rg.eff_gens, dim));
        let objs = objectives(&mut r, "random", dim, &rg.eff_facets);
        certified += check_independence(&rg.geometry, &alpha, &objs) as usize;
    }
    for _ in 0..25 {
        let h = random_profile(&mut r);
        let k = r.gen_range(1..h.rank());
        let g = h.geometry(k).unwrap();
        let eps = h.epsilon(k).unwrap();
        let objs: Vec<ClassVector> = (0..10)
            .map(|_| {
                let v = q(r.gen_range(1..=5));
                let u = -(&v * &eps) + q(r.gen_range(1..=5));
                ClassVector::new(h.basis_id(k), vec![u, v])
            })
            .collect();
        let alpha = random_effective(&mut r, &h, k).to_class(&h);
        assert!(check_independence(&g, &alpha, &objs));
        certified += 1;
    }
    assert!(certified >= 30, "only {certified} certified instances");
}

#[test]
fn movable_classes_have_no_negative_part() {
    let mut r = rng(24);
    for _ in 0..50 {
        let rg = random_geometry(&mut r, "random");
        let dim = rg.geometry.dim();
        let alpha = ClassVector::new("random", lin(&nonneg_coeffs(&mut r, rg.mov_gens.len(), 3), &rg.mov_gens, dim));
        let d = rg.geometry.decompose(&alpha, None).unwrap();
        assert!(d.negative.is_zero(), "{alpha}: N = {}", d.negative);
        assert_eq!(d.positive, alpha);
    }
    for _ in 0..50 {
        let h = random_profile(&mut r);
        let k = r.gen_range(1..h.rank());
        let sigma = h.sigma(k).unwrap();
        let (a, b) = (q(r.gen_range(0..=5)), q(r.gen_range(0..=5)));
        let alpha = cyclecones::projbundle::BundleClass2D::new(k, a.clone(), &a * &sigma + b);
        let d = h.zariski_decompose(&alpha).unwrap();
        assert!(d.negative.coords.iter().all(Zero::is_zero));
        assert!(h.geometry(k).unwrap().decompose(&alpha.to_class(&h), None).unwrap().negative.is_zero());
    }
}

#[test]
fn non_pseudo_effective_input_is_rejected_with_a_functional() {
    let mut r = rng(25);
    let rg = random_geometry(&mut r, "random");
    let dim = rg.geometry.dim();
    let minus: Vec<Rational> = rg.eff_gens[0].iter().map(|x| -x).collect();
    match rg.geometry.decompose(&ClassVector::new("random", minus.clone()), None) {
        Err(Error::NotPseudoEffective { functional, .. }) => {
            assert!(dotp(&functional, &minus) < Rational::zero());
            assert!(rg.eff_gens.iter().all(|g| dotp(&functional, g) >= Rational::zero()));
        }
        other => panic!("expected rejection in dim {dim}, got {other:?}"),
    }
}

#[test]
fn maximum_when_reported_dominates_every_vertex() {
    let mut r = rng(26);
    let mut seen = [0usize; 2];
    for _ in 0..40 {
        let rg = random_geometry(&mut r, "random");
        let g = &rg.geometry;
        let dim = g.dim();
        let alpha = ClassVector::new("random", lin(&nonneg_coeffs(&mut r, rg.eff_gens.len(), 2), &rg.eff_gens, dim));
        let s = g.decomposition_polytope(&alpha).unwrap();
        let report = preceq_maximum(g, &s).unwrap();
        assert!(report.verify());
        match &report.status {
            DirectednessStatus::Maximum(m) => {
                seen[0] += 1;
                for v in s.vertices().unwrap() {
                    let diff: Vec<Rational> = m.coords.iter().zip(&v.coords).map(|(x, y)| x - y).collect();
                    assert!(oracle_in_cone(&rg.eff_gens, &diff), "vertex {v} not below {m}");
                }
            }
            DirectednessStatus::NoMaximum => seen[1] += 1,
        }
    }
    assert!(seen[0] > 0, "no instance had a maximum");
}

#[test]
fn bundle_cone_coincidences() {
    let mut r = rng(33);
    let mut nef_eff_mismatch = 0;
    for _ in 0..300 {
        let h = random_profile(&mut r);
        for k in 1..h.rank() {
            let f = h.cone_coincidence(k).unwrap();
            assert_eq!(f.mov_eq_eff, f.mov_eq_eff_criterion, "{h:?} k={k}");
            if k > 1 {
                assert_eq!(f.nef_eq_mov, f.nef_mov_criterion, "{h:?} k={k}");
                if f.nef_eq_eff != f.nef_mov_criterion {
                    nef_eff_mismatch += 1;
                }
            }
            assert!(!f.nef_eq_eff || f.nef_eq_mov);
        }
    }
    // the two-segment condition tracks nef = mov, not nef = eff
    assert!(nef_eff_mismatch > 0);
}
