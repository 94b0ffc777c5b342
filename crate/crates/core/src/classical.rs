//! Hermite, Laguerre and Jacobi: operators, polynomials, and the catalog of
//! quasi-rational seed functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diffop::SecondOrderOp;
use crate::error::{Error, Result};
use crate::exact::rat::{self, int, rat, Rat};
use crate::exact::{Interval, Poly, RatFunc};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase")]
pub enum Family {
    Hermite,
    Laguerre {
        #[serde(with = "rat::serde_rat")]
        alpha: Rat,
    },
    Jacobi {
        #[serde(with = "rat::serde_rat")]
        alpha: Rat,
        #[serde(with = "rat::serde_rat")]
        beta: Rat,
    },
}

impl Family {
    pub fn laguerre(alpha: Rat) -> Self {
        Family::Laguerre { alpha }
    }

    pub fn jacobi(alpha: Rat, beta: Rat) -> Self {
        Family::Jacobi { alpha, beta }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Family::Hermite => "hermite",
            Family::Laguerre { .. } => "laguerre",
            Family::Jacobi { .. } => "jacobi",
        }
    }

    /// Eigenvalue of the degree-`n` classical polynomial.
    pub fn eigenvalue(&self, n: usize) -> Rat {
        let n = int(n as i64);
        match self {
            Family::Hermite => -int(2) * n,
            Family::Laguerre { .. } => -n,
            Family::Jacobi { alpha, beta } => -(&n * (&n + alpha + beta + int(1))),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Hermite => write!(f, "Hermite"),
            Family::Laguerre { alpha } => write!(f, "Laguerre({})", rat::to_string(alpha)),
            Family::Jacobi { alpha, beta } => {
                write!(f, "Jacobi({}, {})", rat::to_string(alpha), rat::to_string(beta))
            }
        }
    }
}

pub fn bochner_operator(f: &Family) -> SecondOrderOp {
    let (p, q) = match f {
        Family::Hermite => (Poly::one(), Poly::from_ints(&[0, -2])),
        Family::Laguerre { alpha } => (Poly::z(), Poly::new(vec![alpha + int(1), int(-1)])),
        Family::Jacobi { alpha, beta } => (
            Poly::from_ints(&[1, 0, -1]),
            Poly::new(vec![beta - alpha, -(alpha + beta + int(2))]),
        ),
    };
    SecondOrderOp::from_polys(p, q, Poly::zero()).expect("nonzero p")
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalPoly {
    pub poly: Poly,
    /// Degree fell below the index (possible only for Jacobi).
    pub degenerate: bool,
}

pub fn hermite(n: usize) -> Poly {
    let two_z = Poly::from_ints(&[0, 2]);
    let (mut a, mut b) = (Poly::one(), two_z.clone());
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let next = &(&two_z * &b) - &a.scale(&int(2 * k as i64));
        a = b;
        b = next;
    }
    b
}

/// `Ĥ_n(z) = i^{-n} H_n(i z)`.
pub fn pseudo_hermite(n: usize) -> Poly {
    let two_z = Poly::from_ints(&[0, 2]);
    let (mut a, mut b) = (Poly::one(), two_z.clone());
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let next = &(&two_z * &b) + &a.scale(&int(2 * k as i64));
        a = b;
        b = next;
    }
    b
}

pub fn laguerre(alpha: &Rat, n: usize) -> Poly {
    let (mut a, mut b) = (Poly::one(), Poly::new(vec![alpha + int(1), int(-1)]));
    if n == 0 {
        return a;
    }
    for k in 1..n {
        let kk = int(k as i64);
        let lin = Poly::new(vec![int(2) * &kk + int(1) + alpha, int(-1)]);
        let next = (&(&lin * &b) - &a.scale(&(&kk + alpha))).scale(&(rat::one() / (kk + int(1))));
        a = b;
        b = next;
    }
    b
}

/// Explicit finite sum; unlike the three-term recurrence it has no division
/// that fails at degenerate parameters.
pub fn jacobi(alpha: &Rat, beta: &Rat, n: usize) -> Poly {
    let half = rat(1, 2);
    let zm = Poly::new(vec![-half.clone(), half.clone()]);
    let zp = Poly::new(vec![half.clone(), half]);
    let nn = int(n as i64);
    (0..=n)
        .map(|k| {
            let c = rat::binomial(&(&nn + alpha), n - k) * rat::binomial(&(&nn + beta), k);
            (&zm.pow(k) * &zp.pow(n - k)).scale(&c)
        })
        .fold(Poly::zero(), |a, b| &a + &b)
}

pub fn classical_poly(f: &Family, n: usize) -> ClassicalPoly {
    let poly = match f {
        Family::Hermite => hermite(n),
        Family::Laguerre { alpha } => laguerre(alpha, n),
        Family::Jacobi { alpha, beta } => jacobi(alpha, beta, n),
    };
    let degenerate = poly.degree() != Some(n);
    ClassicalPoly { poly, degenerate }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SeedKind {
    #[serde(rename = "polynomial")]
    Polynomial,
    #[serde(rename = "pseudo")]
    Pseudo,
    I,
    II,
    III,
    IV,
}

impl SeedKind {
    fn valid_for(self, f: &Family) -> bool {
        use SeedKind::*;
        match f {
            Family::Hermite => matches!(self, Polynomial | Pseudo),
            _ => matches!(self, I | II | III | IV),
        }
    }
}

impl fmt::Display for SeedKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SeedKind::Polynomial => "polynomial",
            SeedKind::Pseudo => "pseudo",
            SeedKind::I => "I",
            SeedKind::II => "II",
            SeedKind::III => "III",
            SeedKind::IV => "IV",
        };
        f.write_str(s)
    }
}

/// Quasi-rational eigenfunction `phi = (prefactor) * poly_part`, stored via
/// its log-derivative `w = poly_part'/poly_part + g`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Seed {
    pub family: Family,
    pub kind: SeedKind,
    pub index: usize,
    pub w: RatFunc,
    pub lambda0: Rat,
    pub poly_part: Poly,
    /// Log-derivative of the non-polynomial prefactor.
    pub g: RatFunc,
}

impl Seed {
    /// Builds a seed from explicit data, deriving `lambda0` from the Ricatti
    /// residual against `t`.
    pub fn from_parts(
        family: Family,
        kind: SeedKind,
        index: usize,
        poly_part: Poly,
        g: RatFunc,
        t: &SecondOrderOp,
    ) -> Result<Self> {
        if poly_part.is_zero() {
            return Err(Error::InvalidSeed(format!("{family} {kind} n={index}: polynomial part vanishes")));
        }
        let w = &RatFunc::from_poly(poly_part.clone()).log_derivative()? + &g;
        let res = t.ricatti_residual(&w);
        let lambda0 = res
            .as_constant()
            .ok_or_else(|| Error::InvalidSeed(format!("{family} {kind} n={index}: residual {res}")))?;
        Ok(Seed { family, kind, index, w, lambda0, poly_part, g })
    }
}

pub fn seed(f: &Family, kind: SeedKind, n: usize) -> Result<Seed> {
    if !kind.valid_for(f) {
        return Err(Error::InvalidSeed(format!("kind {kind} not defined for {f}")));
    }
    let t = bochner_operator(f);
    let minus_z = |p: Poly| p.reflect();
    let (poly_part, g) = match (f, kind) {
        (Family::Hermite, SeedKind::Polynomial) => (hermite(n), RatFunc::zero()),
        (Family::Hermite, SeedKind::Pseudo) => (pseudo_hermite(n), RatFunc::from_poly(Poly::from_ints(&[0, 2]))),
        (Family::Laguerre { alpha }, k) => {
            let z_pow = || RatFunc::new(Poly::constant(-alpha.clone()), Poly::z()).expect("z");
            match k {
                SeedKind::I => (laguerre(alpha, n), RatFunc::zero()),
                SeedKind::II => (laguerre(&-alpha.clone(), n), z_pow()),
                SeedKind::III => (minus_z(laguerre(alpha, n)), RatFunc::one()),
                _ => (minus_z(laguerre(&-alpha.clone(), n)), &RatFunc::one() + &z_pow()),
            }
        }
        (Family::Jacobi { alpha, beta }, k) => {
            // (1-z)^{-alpha} and (1+z)^{-beta}
            let ga = RatFunc::new(Poly::constant(alpha.clone()), Poly::from_ints(&[1, -1])).expect("nonzero");
            let gb = RatFunc::new(Poly::constant(-beta.clone()), Poly::from_ints(&[1, 1])).expect("nonzero");
            match k {
                SeedKind::I => (jacobi(alpha, beta, n), RatFunc::zero()),
                SeedKind::II => (jacobi(&-alpha.clone(), beta, n), ga),
                SeedKind::III => (jacobi(alpha, &-beta.clone(), n), gb),
                _ => (jacobi(&-alpha.clone(), &-beta.clone(), n), &ga + &gb),
            }
        }
        _ => unreachable!("kind validated"),
    };
    Seed::from_parts(f.clone(), kind, n, poly_part, g, &t)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassicalWeight {
    pub family: Family,
    pub interval: Interval,
}

pub fn classical_weight(f: &Family) -> ClassicalWeight {
    let interval = match f {
        Family::Hermite => Interval::real_line(),
        Family::Laguerre { .. } => Interval::half_line(),
        Family::Jacobi { .. } => Interval::open(int(-1), int(1)),
    };
    ClassicalWeight { family: f.clone(), interval }
}

/// Seed reference as it appears in chain JSON: `{"kind": "III", "n": 2}`,
/// optionally with a family (object form or flattened).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeedSpec {
    #[serde(skip_serializing_if = "Option::is_none", flatten)]
    pub family: Option<Family>,
    pub kind: SeedKind,
    pub n: usize,
}

impl SeedSpec {
    pub fn resolve(&self, base: &Family) -> Result<Seed> {
        let f = self.family.as_ref().unwrap_or(base);
        seed(f, self.kind, self.n)
    }
}

impl<'de> Deserialize<'de> for SeedSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(d)?;
        let kind: SeedKind = serde_json::from_value(v.get("kind").cloned().ok_or_else(|| D::Error::missing_field("kind"))?)
            .map_err(D::Error::custom)?;
        let n = v
            .get("n")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| D::Error::missing_field("n"))? as usize;
        let family = match v.get("family") {
            None | Some(serde_json::Value::Null) => None,
            Some(obj @ serde_json::Value::Object(_)) => {
                Some(serde_json::from_value(obj.clone()).map_err(D::Error::custom)?)
            }
            Some(serde_json::Value::String(_)) => Some(serde_json::from_value(v.clone()).map_err(D::Error::custom)?),
            Some(other) => return Err(D::Error::custom(format!("bad family {other}"))),
        };
        Ok(SeedSpec { family, kind, n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // The usual form carries (n-m)!/n!; any other constant fails here.
    #[test]
    fn negative_integer_laguerre() {
        let fact = |k: usize| (1..=k).fold(int(1), |a, i| a * int(i as i64));
        for m in 1..=4usize {
            let mi = int(m as i64);
            let zm = Poly::monomial(if m % 2 == 0 { int(1) } else { int(-1) }, m);
            for n in m..=m + 5 {
                let lhs = laguerre(&-mi.clone(), n);
                let rhs = (&zm * &laguerre(&mi, n - m)).scale(&(fact(n - m) / fact(n)));
                assert_eq!(lhs, rhs, "m = {m}, n = {n}");
            }
            let zpow = RatFunc::from_poly(Poly::monomial(int(1), m));
            let conj = bochner_operator(&Family::laguerre(mi.clone())).gauge_conjugate(&zpow).unwrap();
            assert_eq!(conj, bochner_operator(&Family::laguerre(-mi.clone())).plus_const(&mi));
        }
    }

    #[test]
    fn operators() {
        let l = bochner_operator(&Family::laguerre(rat(1, 2)));
        assert_eq!(l.q, RatFunc::from_poly(Poly::new(vec![rat(3, 2), int(-1)])));
        let j = bochner_operator(&Family::jacobi(int(0), int(-4)));
        assert_eq!(j.q, RatFunc::from_poly(Poly::from_ints(&[-4, 2])));
        assert!(j.is_bochner());
    }

    #[test]
    fn example_laguerre_values() {
        let a = rat(-7, 4);
        assert_eq!(laguerre(&a, 0), Poly::one());
        assert_eq!(laguerre(&a, 1), Poly::new(vec![rat(-3, 4), int(-1)]));
        let expect = (&Poly::linear_root(&rat(-3, 4)) * &Poly::linear_root(&rat(1, 4))).scale(&rat(1, 2));
        assert_eq!(laguerre(&a, 2).reflect(), expect);
    }

    #[test]
    fn jacobi_degenerates() {
        let f = Family::jacobi(int(0), int(-4));
        let c = classical_poly(&f, 3);
        assert!(c.degenerate);
        assert_eq!(c.poly.degree(), Some(0));
        assert!(!classical_poly(&f, 4).degenerate);
    }

    #[test]
    fn seeds_examples() {
        let f = Family::laguerre(int(3));
        let s = seed(&f, SeedKind::I, 0).unwrap();
        assert_eq!((s.w.clone(), s.lambda0.clone()), (RatFunc::zero(), int(0)));
        let s = seed(&f, SeedKind::III, 0).unwrap();
        assert_eq!((s.w.clone(), s.lambda0.clone()), (RatFunc::one(), int(4)));
        let s = seed(&Family::Hermite, SeedKind::Polynomial, 2).unwrap();
        assert_eq!(s.lambda0, int(-4));
        assert!(seed(&Family::Hermite, SeedKind::III, 1).is_err());
    }

    #[test]
    fn seed_spec_forms() {
        let a: SeedSpec = serde_json::from_str(r#"{"kind":"III","n":2}"#).unwrap();
        assert_eq!(a.family, None);
        let b: SeedSpec = serde_json::from_str(r#"{"family":"laguerre","alpha":"-7/4","kind":"I","n":1}"#).unwrap();
        assert_eq!(b.family, Some(Family::laguerre(rat(-7, 4))));
        let c: SeedSpec =
            serde_json::from_str(r#"{"family":{"family":"hermite"},"kind":"pseudo","n":2}"#).unwrap();
        assert_eq!(c.family, Some(Family::Hermite));
    }
}
