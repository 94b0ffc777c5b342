//! Canonical rational functions `num/den` over `Rat`.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::Zero;
use std::collections::BTreeMap;

use super::poly::{forward_owned, Poly};
use super::rat::{self, Rat};
use crate::error::{Error, Result};

/// `num/den` with `gcd(num, den) = 1` and `den` monic. Zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (n, d) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lc = d.leading();
        let inv = rat::one() / &lc;
        Ok(RatFunc { num: n.scale(&inv), den: d.scale(&inv) })
    }

    pub fn zero() -> Self {
        RatFunc { num: Poly::zero(), den: Poly::one() }
    }

    pub fn one() -> Self {
        Self::from_poly(Poly::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn z() -> Self {
        Self::from_poly(Poly::z())
    }

    pub fn from_poly(p: Poly) -> Self {
        RatFunc { num: p, den: Poly::one() }
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_poly(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_poly(&self) -> Option<&Poly> {
        self.is_poly().then_some(&self.num)
    }

    pub fn to_poly(&self) -> Result<Poly> {
        self.as_poly()
            .cloned()
            .ok_or_else(|| Error::NotPolynomial(self.den.to_string()))
    }

    /// Constant value, if the function is constant.
    pub fn as_constant(&self) -> Option<Rat> {
        (self.is_poly() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `deg num - deg den`; `None` for zero.
    pub fn degree(&self) -> Option<i64> {
        self.num
            .degree()
            .map(|n| n as i64 - self.den.degree().unwrap() as i64)
    }

    pub fn inv(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn derivative(&self) -> Self {
        let n = &(&self.num.derivative() * &self.den) - &(&self.num * &self.den.derivative());
        RatFunc::new(n, &self.den * &self.den).expect("nonzero denominator")
    }

    /// `f'/f`.
    pub fn log_derivative(&self) -> Result<Self> {
        &self.derivative() / self
    }

    pub fn scale(&self, c: &Rat) -> Self {
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
            .renormalized()
    }

    fn renormalized(self) -> Self {
        if self.num.is_zero() {
            Self::zero()
        } else {
            self
        }
    }

    pub fn pow(&self, e: i64) -> Result<Self> {
        let b = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs() as usize;
        Ok(RatFunc { num: b.num.pow(k), den: b.den.pow(k) })
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        let d = self.den.eval(x);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.num.eval(x) / d)
    }

    /// Valuation at `zeta`: multiplicity in `num` minus multiplicity in `den`.
    pub fn order_at(&self, zeta: &Rat) -> Result<i64> {
        if self.is_zero() {
            return Err(Error::OrderOfZero);
        }
        Ok(self.num.root_multiplicity(zeta) as i64 - self.den.root_multiplicity(zeta) as i64)
    }

    /// Laurent coefficients of `(z - zeta)^k`, `k_min <= k <= k_max`.
    pub fn laurent_coeffs(&self, zeta: &Rat, k_min: i64, k_max: i64) -> Result<BTreeMap<i64, Rat>> {
        if k_min > k_max {
            return Err(Error::Input(format!("empty Laurent range [{k_min}, {k_max}]")));
        }
        let mut out: BTreeMap<i64, Rat> = (k_min..=k_max).map(|k| (k, rat::zero())).collect();
        if self.is_zero() {
            return Ok(out);
        }
        // f = t^{a-b} N(t)/D(t) with N(0), D(0) nonzero, t = z - zeta.
        let (n, a) = self.num.strip_root(zeta);
        let (d, b) = self.den.strip_root(zeta);
        let shift = a as i64 - b as i64;
        if k_max < shift {
            return Ok(out);
        }
        let len = (k_max - shift + 1) as usize;
        let series = series_div(&n.taylor_shift(zeta), &d.taylor_shift(zeta), len);
        for (i, c) in series.into_iter().enumerate() {
            let k = shift + i as i64;
            if k >= k_min {
                out.insert(k, c);
            }
        }
        Ok(out)
    }

    /// Laurent coefficient list starting at `k_min`, length `len`.
    pub fn laurent_vec(&self, zeta: &Rat, k_min: i64, len: usize) -> Result<Vec<Rat>> {
        if len == 0 {
            return Ok(vec![]);
        }
        Ok(self
            .laurent_coeffs(zeta, k_min, k_min + len as i64 - 1)?
            .into_values()
            .collect())
    }

    /// Polynomial part and proper remainder: `self = q + r/den`.
    pub fn split_proper(&self) -> (Poly, Poly) {
        self.num.div_rem(&self.den).expect("nonzero denominator")
    }

    /// `f(a z + b)`.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Result<Self> {
        RatFunc::new(self.num.compose_affine(a, b), self.den.compose_affine(a, b))
    }
}

/// First `len` coefficients of the power series `n / d`, `d(0) != 0`.
pub fn series_div(n: &Poly, d: &Poly, len: usize) -> Vec<Rat> {
    let d0 = d.coeff(0);
    let mut out: Vec<Rat> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = n.coeff(k);
        for j in 1..=k.min(d.coeffs().len().saturating_sub(1)) {
            acc -= d.coeff(j) * &out[k - j];
        }
        out.push(acc / &d0);
    }
    out
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Poly> for RatFunc {
    fn from(p: Poly) -> Self {
        RatFunc::from_poly(p)
    }
}

impl From<Rat> for RatFunc {
    fn from(c: Rat) -> Self {
        RatFunc::constant(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_poly() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, o: &RatFunc) -> RatFunc {
        if self.den == o.den {
            return RatFunc::new(&self.num + &o.num, self.den.clone()).expect("nonzero");
        }
        let n = &(&self.num * &o.den) + &(&o.num * &self.den);
        RatFunc::new(n, &self.den * &o.den).expect("nonzero")
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, o: &RatFunc) -> RatFunc {
        self + &(-o)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &RatFunc) -> RatFunc {
        if self.is_zero() || o.is_zero() {
            return RatFunc::zero();
        }
        RatFunc::new(&self.num * &o.num, &self.den * &o.den).expect("nonzero")
    }
}

impl Div for &RatFunc {
    type Output = Result<RatFunc>;
    fn div(self, o: &RatFunc) -> Result<RatFunc> {
        Ok(self * &o.inv()?)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

forward_owned!(RatFunc, Add add, Sub sub, Mul mul);

impl Mul<&Poly> for &RatFunc {
    type Output = RatFunc;
    fn mul(self, o: &Poly) -> RatFunc {
        self * &RatFunc::from_poly(o.clone())
    }
}

impl Zero for RatFunc {
    fn zero() -> Self {
        RatFunc::zero()
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl std::iter::Sum for RatFunc {
    fn sum<I: Iterator<Item = RatFunc>>(it: I) -> RatFunc {
        it.fold(RatFunc::zero(), |a, b| &a + &b)
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("RatFunc", 2)?;
        st.serialize_field("num", &self.num)?;
        st.serialize_field("den", &self.den)?;
        st.end()
    }
}

impl<'de> serde::Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(serde::Deserialize)]
        struct Raw {
            num: Poly,
            #[serde(default = "Poly::one")]
            den: Poly,
        }
        let r = Raw::deserialize(d)?;
        RatFunc::new(r.num, r.den).map_err(serde::de::Error::custom)
    }
}
