//! Cycle cones on a projective bundle `P(E)` over a smooth curve, computed
//! from the Harder-Narasimhan data of `E`.
//!
//! Classes of dimension `k` are written `x xi^(n-k) + y xi^(n-k-1) f` and
//! stored as the pair `(x, y)`, where `xi = c1(O(1))` and `f` is a fiber.
//! The slope polygon runs from `(0, -d)` to `(n, 0)` through segments of
//! length `r_i` and slope `mu_i`; `epsilon_k` is its height over `k`.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::certificate::{Certificate, SignCondition};
use crate::cone::PolyCone;
use crate::decomposition::{Decomposition, DecompositionMetadata, Method, NamedCertificate, Selection};
use crate::error::{Error, Result};
use crate::rational::{int, serde_rational, serde_vector, ClassVector, Rational};
use crate::zariski::ConeGeometry;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct HNPiece {
    pub rank: u32,
    pub degree: i64,
}

impl HNPiece {
    pub fn slope(&self) -> Rational {
        Rational::new(self.degree.into(), self.rank.into())
    }
}

/// Ranks and degrees of the Harder-Narasimhan quotients, in order of
/// strictly increasing slope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HNProfile {
    pieces: Vec<HNPiece>,
}

impl HNProfile {
    pub fn new(pieces: Vec<HNPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::InvalidInput("a profile needs at least one piece".into()));
        }
        if let Some(p) = pieces.iter().find(|p| p.rank == 0) {
            return Err(Error::InvalidInput(format!("piece of degree {} has rank 0", p.degree)));
        }
        for w in pieces.windows(2) {
            if w[0].slope() >= w[1].slope() {
                return Err(Error::InvalidInput(format!(
                    "slopes must increase strictly: {}/{} then {}/{}",
                    w[0].degree, w[0].rank, w[1].degree, w[1].rank
                )));
            }
        }
        Ok(Self { pieces })
    }

    pub fn from_pairs(pairs: &[(u32, i64)]) -> Result<Self> {
        Self::new(pairs.iter().map(|&(rank, degree)| HNPiece { rank, degree }).collect())
    }

    /// Parses `"r:d,r:d,..."`.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pieces = Vec::new();
        for part in text.split(',') {
            let part = part.trim();
            let (r, d) = part
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `rank:degree`, found `{part}`")))?;
            let rank = r
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank `{r}` in `{part}`")))?;
            let degree = d
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad degree `{d}` in `{part}`")))?;
            pieces.push(HNPiece { rank, degree });
        }
        Self::new(pieces)
    }

    pub fn pieces(&self) -> &[HNPiece] {
        &self.pieces
    }

    pub fn rank(&self) -> usize {
        self.pieces.iter().map(|p| p.rank as usize).sum()
    }

    pub fn degree(&self) -> i64 {
        self.pieces.iter().map(|p| p.degree).sum()
    }

    pub fn slopes(&self) -> Vec<Rational> {
        self.pieces.iter().map(HNPiece::slope).collect()
    }

    fn top_slope(&self) -> Rational {
        self.pieces.last().expect("nonempty").slope()
    }

    fn check_range(&self, k: usize, lo: usize, hi: usize) -> Result<()> {
        if k < lo || k > hi {
            return Err(Error::InvalidInput(format!(
                "k = {k} outside {lo}..={hi} for a bundle of rank {}",
                self.rank()
            )));
        }
        Ok(())
    }

    /// Vertices of the slope polygon.
    pub fn breakpoints(&self) -> Vec<(usize, Rational)> {
        let mut x = 0;
        let mut y = int(-self.degree());
        let mut out = vec![(x, y.clone())];
        for p in &self.pieces {
            x += p.rank as usize;
            y += int(p.degree);
            out.push((x, y.clone()));
        }
        out
    }

    pub fn epsilon(&self, k: usize) -> Result<Rational> {
        self.check_range(k, 0, self.rank())?;
        let mut x = 0;
        let mut y = int(-self.degree());
        for p in &self.pieces {
            let r = p.rank as usize;
            if k <= x + r {
                return Ok(y + p.slope() * int((k - x) as i64));
            }
            x += r;
            y += int(p.degree);
        }
        Ok(y)
    }

    pub fn nu(&self, k: usize) -> Result<Rational> {
        self.check_range(k, 1, self.rank() - 1)?;
        Ok(int(-self.degree()) - self.epsilon(self.rank() - k)?)
    }

    pub fn sigma(&self, k: usize) -> Result<Rational> {
        self.check_range(k, 1, self.rank() - 1)?;
        Ok(self.epsilon(k - 1)? + self.top_slope())
    }

    pub fn basis_id(&self, k: usize) -> String {
        format!("P({self}):N_{k}")
    }

    fn two_ray_cone(&self, k: usize, c: Rational) -> PolyCone {
        PolyCone::from_generators(self.basis_id(k), 2, vec![vec![int(1), c], vec![int(0), int(1)]])
            .expect("two-dimensional generators")
            .dd_convert()
    }

    pub fn cones(&self, k: usize) -> Result<BundleCones> {
        let (e, n, s) = (self.epsilon(k)?, self.nu(k)?, self.sigma(k)?);
        Ok(BundleCones {
            eff: self.two_ray_cone(k, e),
            nef: self.two_ray_cone(k, n),
            mov: self.two_ray_cone(k, s),
        })
    }

    /// The 2D cone data as a decomposition geometry, with degree functional
    /// given by pairing against the nef class `(1, nu_(n-k) + 1)` of the
    /// complementary dimension.
    pub fn geometry(&self, k: usize) -> Result<ConeGeometry> {
        let cones = self.cones(k)?;
        let functional = self.degree_functional(k)?;
        ConeGeometry::new(cones.mov, cones.eff, Some(functional))
    }

    pub fn degree_functional(&self, k: usize) -> Result<ClassVector> {
        let n = self.rank();
        self.check_range(k, 1, n - 1)?;
        let partner = BundleClass2D::new(n - k, int(1), self.nu(n - k)? + int(1));
        // (x, y) . (1, c) = x d + x c + y
        Ok(ClassVector::new(
            self.basis_id(k),
            vec![int(self.degree()) + &partner.y, int(1)],
        ))
    }

    /// Intersection `(x, y) . (x', y') = x x' d + x y' + x' y` of classes of
    /// complementary dimension.
    pub fn pair_classes(&self, a: &BundleClass2D, b: &BundleClass2D) -> Result<Rational> {
        if a.k + b.k != self.rank() {
            return Err(Error::DimensionMismatch {
                expected: self.rank() - a.k,
                found: b.k,
            });
        }
        Ok(&a.x * &b.x * int(self.degree()) + &a.x * &b.y + &b.x * &a.y)
    }

    /// `(p xi + q f) . (x xi^(n-k) + y xi^(n-k-1) f)` as a class of dimension
    /// `k - 1`.
    pub fn divisor_product(&self, p: &Rational, q: &Rational, a: &BundleClass2D) -> Result<BundleClass2D> {
        self.check_range(a.k, 1, self.rank())?;
        let k = a.k - 1;
        if k == 0 {
            // xi^n = d, xi^(n-1) f = 1
            let degree = p * &a.x * int(self.degree()) + p * &a.y + q * &a.x;
            return Ok(BundleClass2D::new(0, degree, Rational::zero()));
        }
        Ok(BundleClass2D::new(k, p * &a.x, p * &a.y + q * &a.x))
    }

    /// Writes `alpha = a (1, epsilon_k) + b (0, 1)`.
    pub fn eff_coordinates(&self, alpha: &BundleClass2D) -> Result<(Rational, Rational)> {
        let e = self.epsilon(alpha.k)?;
        let a = alpha.x.clone();
        let b = &alpha.y - &a * e;
        Ok((a, b))
    }

    pub fn zariski_decompose(&self, alpha: &BundleClass2D) -> Result<Decomposition> {
        let k = alpha.k;
        self.check_range(k, 1, self.rank() - 1)?;
        let cones = self.cones(k)?;
        let input = alpha.to_class(self);
        let (eps, sig) = (self.epsilon(k)?, self.sigma(k)?);
        let (a, b) = self.eff_coordinates(alpha)?;
        if a.is_negative() || b.is_negative() {
            let functional = if a.is_negative() {
                vec![int(1), int(0)]
            } else {
                vec![-eps.clone(), int(1)]
            };
            return Err(Error::NotPseudoEffective {
                class: input.coords,
                functional,
            });
        }
        let gap = &sig - &eps;
        let (positive, negative) = if b >= &a * &gap {
            (input.clone(), ClassVector::zero(self.basis_id(k), 2))
        } else {
            let p = &b / &gap;
            let n = (&a * &gap - &b) / &gap;
            (
                ClassVector::new(self.basis_id(k), vec![p.clone(), p * &sig]),
                ClassVector::new(self.basis_id(k), vec![n.clone(), n * &eps]),
            )
        };
        let mut meta = DecompositionMetadata::new(Method::ClosedForm, Selection::CertifiedMaximum);
        meta.notes.push(format!(
            "eff coordinates a = {}, b = {}; sigma_k - epsilon_k = {}",
            crate::rational::format_rational(&a),
            crate::rational::format_rational(&b),
            crate::rational::format_rational(&gap)
        ));
        let certificates = vec![
            NamedCertificate::new("positive_movable", cones.mov.contains(&positive)?.certificate().clone()),
            NamedCertificate::new(
                "negative_pseudo_effective",
                cones.eff.contains(&negative)?.certificate().clone(),
            ),
            NamedCertificate::new(
                "negative_on_eff_boundary_ray",
                Certificate::Pairing {
                    label: "(-epsilon_k, 1) vanishes on N".into(),
                    functional: vec![-eps.clone(), int(1)],
                    point: negative.coords.clone(),
                    condition: SignCondition::Zero,
                },
            ),
        ];
        let support = if negative.is_zero() { vec![] } else { vec![0] };
        Ok(Decomposition {
            input,
            positive,
            negative,
            support,
            certificates,
            metadata: meta,
        })
    }

    /// Which of the three cones coincide at `k`, from the computed cones,
    /// next to the two closed-form criteria.
    pub fn cone_coincidence(&self, k: usize) -> Result<CoincidenceFlags> {
        let c = self.cones(k)?;
        let n = self.rank();
        let s = self.pieces.len();
        let r_s = self.pieces[s - 1].rank as usize;
        Ok(CoincidenceFlags {
            k,
            mov_eq_eff: c.mov.same_cone(&c.eff),
            nef_eq_eff: c.nef.same_cone(&c.eff),
            nef_eq_mov: c.nef.same_cone(&c.mov),
            mov_eq_eff_criterion: n - r_s < k,
            semistable: s == 1,
            nef_mov_criterion: s == 1 || (s == 2 && self.pieces[1].rank == 1),
        })
    }

    pub fn table(&self) -> Result<ProfileTable> {
        let n = self.rank();
        let mut rows = Vec::new();
        for k in 0..=n {
            let inner = k >= 1 && k < n;
            rows.push(TableRow {
                k,
                epsilon: self.epsilon(k)?,
                nu: if inner { Some(self.nu(k)?) } else { None },
                sigma: if inner { Some(self.sigma(k)?) } else { None },
            });
        }
        Ok(ProfileTable {
            profile: self.to_string(),
            rank: n,
            degree: self.degree(),
            slopes: self.slopes(),
            breakpoints: self
                .breakpoints()
                .into_iter()
                .map(|(x, y)| Breakpoint { x, y })
                .collect(),
            rows,
        })
    }
}

impl fmt::Display for HNProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.pieces.iter().map(|p| format!("{}:{}", p.rank, p.degree)).collect();
        f.write_str(&parts.join(","))
    }
}

/// `x xi^(n-k) + y xi^(n-k-1) f`, a class of dimension `k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BundleClass2D {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub x: Rational,
    #[serde(with = "serde_rational")]
    pub y: Rational,
}

impl BundleClass2D {
    pub fn new(k: usize, x: Rational, y: Rational) -> Self {
        Self { k, x, y }
    }

    pub fn from_ints(k: usize, x: i64, y: i64) -> Self {
        Self::new(k, int(x), int(y))
    }

    pub fn to_class(&self, h: &HNProfile) -> ClassVector {
        ClassVector::new(h.basis_id(self.k), vec![self.x.clone(), self.y.clone()])
    }

    pub fn from_class(k: usize, v: &ClassVector) -> Result<Self> {
        if v.dim() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                found: v.dim(),
            });
        }
        Ok(Self::new(k, v.coords[0].clone(), v.coords[1].clone()))
    }
}

#[derive(Clone, Debug)]
pub struct BundleCones {
    pub eff: PolyCone,
    pub nef: PolyCone,
    pub mov: PolyCone,
}

impl BundleCones {
    /// `nef ⊆ mov ⊆ eff`.
    pub fn nested(&self) -> bool {
        self.eff.contains_cone(&self.mov).unwrap_or(false) && self.mov.contains_cone(&self.nef).unwrap_or(false)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoincidenceFlags {
    pub k: usize,
    pub mov_eq_eff: bool,
    pub nef_eq_eff: bool,
    pub nef_eq_mov: bool,
    /// `n - r_s < k`.
    pub mov_eq_eff_criterion: bool,
    pub semistable: bool,
    /// `s = 1`, or `s = 2` with `r_2 = 1`.
    pub nef_mov_criterion: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Breakpoint {
    pub x: usize,
    #[serde(with = "serde_rational")]
    pub y: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub k: usize,
    #[serde(with = "serde_rational")]
    pub epsilon: Rational,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub nu: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub sigma: Option<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProfileTable {
    pub profile: String,
    pub rank: usize,
    pub degree: i64,
    #[serde(with = "serde_vector")]
    pub slopes: Vec<Rational>,
    pub breakpoints: Vec<Breakpoint>,
    pub rows: Vec<TableRow>,
}

mod opt_rational {
    use super::*;
    use serde::Serializer;

    pub fn serialize<S: Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => serde_rational::serialize(q, s),
            None => s.serialize_none(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, ints};

    fn sample() -> HNProfile {
        HNProfile::parse("2:0,2:2").unwrap()
    }

    #[test]
    fn polygon_constants() {
        let h = sample();
        let eps: Vec<Rational> = (0..=4).map(|k| h.epsilon(k).unwrap()).collect();
        assert_eq!(eps, ints(&[-2, -2, -2, -1, 0]));
        assert_eq!(h.nu(2).unwrap(), int(0));
        assert_eq!(h.nu(3).unwrap(), int(0));
        assert_eq!(h.sigma(2).unwrap(), int(-1));
        assert_eq!(h.sigma(3).unwrap(), int(-1));
        assert_eq!(h.sigma(1).unwrap(), h.nu(1).unwrap());
        assert!(h.epsilon(5).is_err());
        assert!(h.nu(0).is_err());
        assert!(h.sigma(4).is_err());
    }

    #[test]
    fn semistable_single_segment() {
        let h = HNProfile::parse("3:2").unwrap();
        for k in 0..=3 {
            assert_eq!(h.epsilon(k).unwrap(), int(-2) + frac(2 * k as i64, 3));
        }
        for k in 1..3 {
            let f = h.cone_coincidence(k).unwrap();
            assert!(f.mov_eq_eff && f.nef_eq_eff && f.nef_eq_mov);
        }
    }

    #[test]
    fn rejects_bad_profiles() {
        assert!(HNProfile::parse("2:2,2:0").is_err());
        assert!(HNProfile::parse("1:1,2:2").is_err());
        assert!(HNProfile::parse("0:1").is_err());
        assert!(matches!(HNProfile::parse("2-0"), Err(Error::Parse(_))));
        assert!(matches!(HNProfile::parse("2:x"), Err(Error::Parse(_))));
        assert!(HNProfile::parse(" 1:-2 , 1:0,2:2").is_ok());
    }

    #[test]
    fn movable_not_nef_example() {
        let h = sample();
        let c = h.cones(2).unwrap();
        let v = BundleClass2D::from_ints(2, 1, -1).to_class(&h);
        assert!(c.mov.contains(&v).unwrap().is_inside());
        assert!(!c.nef.contains(&v).unwrap().is_inside());
        assert!(c.nested());
    }

    #[test]
    fn closed_form_decompositions() {
        let h = sample();
        let d = h.zariski_decompose(&BundleClass2D::from_ints(2, 2, -3)).unwrap();
        assert_eq!(d.positive.coords, ints(&[1, -1]));
        assert_eq!(d.negative.coords, ints(&[1, -2]));
        assert!(d.verify());

        let d = h.zariski_decompose(&BundleClass2D::from_ints(2, 1, -2)).unwrap();
        assert!(d.positive.is_zero());
        assert_eq!(d.negative.coords, ints(&[1, -2]));

        let d = h.zariski_decompose(&BundleClass2D::from_ints(2, 1, 5)).unwrap();
        assert!(d.negative.is_zero());

        assert!(matches!(
            h.zariski_decompose(&BundleClass2D::from_ints(2, 1, -3)),
            Err(Error::NotPseudoEffective { .. })
        ));
    }

    #[test]
    fn pairings() {
        let h = HNProfile::parse("1:-2,1:0,2:2").unwrap();
        let z = BundleClass2D::from_ints(2, 1, -1);
        assert_eq!(h.pair_classes(&z, &z).unwrap(), int(-2));
        assert_eq!(h.sigma(2).unwrap(), int(-1));
        let f = BundleClass2D::from_ints(1, 0, 1);
        let xi = BundleClass2D::from_ints(3, 1, 0);
        assert_eq!(h.pair_classes(&f, &xi).unwrap(), int(1));
        let f3 = BundleClass2D::from_ints(3, 0, 1);
        assert_eq!(h.pair_classes(&f, &f3).unwrap(), int(0));
        assert!(matches!(h.pair_classes(&z, &f), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn degree_functional_is_one_on_both_rays() {
        let h = HNProfile::parse("1:-3,2:1,1:4").unwrap();
        for k in 1..h.rank() {
            let g = h.geometry(k).unwrap();
            for r in g.eff_rays() {
                let v = crate::rational::dot(&g.degree_functional().unwrap().coords, &r.coords);
                assert!(v.is_positive());
            }
        }
    }

    #[test]
    fn coincidence_at_k3() {
        let h = sample();
        let f = h.cone_coincidence(3).unwrap();
        assert!(f.mov_eq_eff && f.mov_eq_eff_criterion);
        let f = h.cone_coincidence(2).unwrap();
        assert!(!f.mov_eq_eff && !f.mov_eq_eff_criterion);
    }
}
