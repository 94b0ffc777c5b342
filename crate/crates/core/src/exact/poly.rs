//! Dense univariate polynomials over `Rat`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::rat::{self, int, Rat};
use crate::error::{Error, Result};

/// Dense polynomial, `coeffs[i]` is the coefficient of `z^i`.
///
/// The highest stored coefficient is nonzero; the zero polynomial has no
/// coefficients and degree `None` (standing for minus infinity).
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Rat>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rat>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { coeffs: vec![] }
    }

    pub fn one() -> Self {
        Self::constant(rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self::new(vec![c])
    }

    /// The monomial `z`.
    pub fn z() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn monomial(c: Rat, k: usize) -> Self {
        let mut v = vec![rat::zero(); k + 1];
        v[k] = c;
        Self::new(v)
    }

    /// `z - a`.
    pub fn linear_root(a: &Rat) -> Self {
        Self::new(vec![-a.clone(), rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Rat> {
        self.coeffs
    }

    /// Coefficient of `z^k`, zero beyond the degree.
    pub fn coeff(&self, k: usize) -> Rat {
        self.coeffs.get(k).cloned().unwrap_or_else(rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial (degree minus infinity).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree as a signed integer with `i64::MIN` standing for minus infinity.
    pub fn degree_i64(&self) -> i64 {
        self.degree().map_or(i64::MIN, |d| d as i64)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Rat {
        self.coeffs.last().cloned().unwrap_or_else(rat::zero)
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Poly { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let lc = self.leading();
        self.scale(&(rat::one() / lc))
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        self.coeffs
            .iter()
            .rev()
            .fold(rat::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * int(k as i64))
                .collect(),
        )
    }

    pub fn nth_derivative(&self, n: usize) -> Self {
        (0..n).fold(self.clone(), |p, _| p.derivative())
    }

    /// Antiderivative with zero constant term.
    pub fn integral(&self) -> Self {
        let mut v = vec![rat::zero()];
        v.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c / int(k as i64 + 1)),
        );
        Self::new(v)
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }

    /// `p(a z + b)`.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Self {
        let lin = Self::new(vec![b.clone(), a.clone()]);
        self.coeffs
            .iter()
            .rev()
            .fold(Self::zero(), |acc, c| &(&acc * &lin) + &Self::constant(c.clone()))
    }

    /// Coefficients of `p` in powers of `(z - zeta)`.
    pub fn taylor_shift(&self, zeta: &Rat) -> Self {
        // Repeated synthetic division.
        let mut c = self.coeffs.clone();
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * zeta;
                c[j] += t;
            }
        }
        Self::new(c)
    }

    /// Multiplicity of `zeta` as a root (0 if not a root). Panics on zero.
    pub fn root_multiplicity(&self, zeta: &Rat) -> usize {
        assert!(!self.is_zero(), "multiplicity in the zero polynomial");
        let t = self.taylor_shift(zeta);
        t.coeffs.iter().take_while(|c| c.is_zero()).count()
    }

    pub fn div_rem(&self, d: &Poly) -> Result<(Poly, Poly)> {
        let dd = d.degree().ok_or(Error::DivisionByZero)?;
        let Some(nd) = self.degree() else {
            return Ok((Poly::zero(), Poly::zero()));
        };
        if nd < dd {
            return Ok((Poly::zero(), self.clone()));
        }
        let lc_inv = rat::one() / d.leading();
        let mut r = self.coeffs.clone();
        let mut q = vec![rat::zero(); nd - dd + 1];
        for k in (0..=nd - dd).rev() {
            let c = &r[k + dd] * &lc_inv;
            if !c.is_zero() {
                for (i, di) in d.coeffs.iter().enumerate() {
                    let t = &c * di;
                    r[k + i] -= t;
                }
            }
            q[k] = c;
        }
        r.truncate(dd);
        Ok((Poly::new(q), Poly::new(r)))
    }

    pub fn rem(&self, d: &Poly) -> Result<Poly> {
        Ok(self.div_rem(d)?.1)
    }

    /// Exact quotient; errors if the remainder is nonzero.
    pub fn div_exact(&self, d: &Poly) -> Result<Poly> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::Identity(format!("{d} does not divide {self}")));
        }
        Ok(q)
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).map(|r| r.is_zero()).unwrap_or(false)
    }

    /// Monic GCD; `gcd(0, 0) = 0`.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut a, mut b) = (a.clone(), b.clone());
        while !b.is_zero() {
            let r = a.rem(&b).expect("nonzero divisor");
            a = b;
            b = r.primitive_sign_preserving();
        }
        a.monic()
    }

    pub fn lcm(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() || b.is_zero() {
            return Poly::zero();
        }
        let g = Poly::gcd(a, b);
        (a * &b.div_exact(&g).expect("gcd divides")).monic()
    }

    /// Rescales by a positive rational so the coefficients are coprime
    /// integers. The sign of every coefficient is kept.
    pub fn primitive_sign_preserving(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        use num_integer::Integer;
        let mut l = num_bigint::BigInt::one();
        for c in &self.coeffs {
            l = l.lcm(c.denom());
        }
        let mut g = num_bigint::BigInt::zero();
        for c in &self.coeffs {
            let v = (c * Rat::from_integer(l.clone())).to_integer();
            g = g.gcd(&v);
        }
        let factor = Rat::new(l, g.abs());
        self.scale(&factor)
    }

    /// Resultant via the Euclidean algorithm over the field.
    pub fn resultant(a: &Poly, b: &Poly) -> Rat {
        let (Some(mut da), Some(mut db)) = (a.degree(), b.degree()) else {
            return rat::zero();
        };
        let (mut a, mut b) = (a.clone(), b.clone());
        let mut acc = rat::one();
        loop {
            if db == 0 {
                return acc * num_traits::pow(b.leading(), da);
            }
            let r = a.rem(&b).expect("nonzero");
            let Some(dr) = r.degree() else {
                return rat::zero();
            };
            // res(a, b) = (-1)^{da db} lc(b)^{da - dr} res(b, r)
            if da * db % 2 == 1 {
                acc = -acc;
            }
            acc *= num_traits::pow(b.leading(), da - dr);
            a = b;
            b = r;
            da = db;
            db = dr;
        }
    }

    /// `(-1)^{d(d-1)/2} res(p, p') / lc(p)`.
    pub fn discriminant(&self) -> Result<Rat> {
        let d = match self.degree() {
            Some(d) if d >= 1 => d,
            _ => return Err(Error::ConstantPolynomial),
        };
        let res = Poly::resultant(self, &self.derivative());
        let sign = if (d * (d - 1) / 2) % 2 == 1 { -rat::one() } else { rat::one() };
        Ok(sign * res / self.leading())
    }

    /// Square-free decomposition (Yun). Returns the leading constant and the
    /// monic, pairwise coprime, square-free factors with multiplicities.
    pub fn squarefree_factor(&self) -> Result<(Rat, Vec<(Poly, usize)>)> {
        if self.is_zero() {
            return Err(Error::ZeroInput);
        }
        let lc = self.leading();
        let f = self.monic();
        let mut out = Vec::new();
        if f.is_constant() {
            return Ok((lc, out));
        }
        let fp = f.derivative();
        let a0 = Poly::gcd(&f, &fp);
        let mut b = f.div_exact(&a0)?;
        let mut c = fp.div_exact(&a0)?;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        loop {
            let a = Poly::gcd(&b, &d);
            if !a.is_constant() {
                out.push((a.clone(), i));
            }
            b = b.div_exact(&a)?;
            if b.is_constant() {
                break;
            }
            c = d.div_exact(&a)?;
            d = &c - &b.derivative();
            i += 1;
        }
        Ok((lc, out))
    }

    /// `p / gcd(p, p')`, made monic.
    pub fn squarefree_part(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.div_exact(&Poly::gcd(self, &self.derivative()))
            .expect("gcd divides")
            .monic()
    }

    /// Rational roots with multiplicities, found by the rational root test on
    /// the linear square-free factors. Irrational roots are ignored.
    pub fn rational_roots(&self) -> Vec<(Rat, usize)> {
        let Ok((_, factors)) = self.squarefree_factor() else {
            return vec![];
        };
        let mut out = Vec::new();
        for (f, m) in factors {
            for r in rational_roots_squarefree(&f) {
                out.push((r, m));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Expands `prod (z - r_i)`.
    pub fn from_roots(roots: &[Rat]) -> Poly {
        roots
            .iter()
            .fold(Poly::one(), |acc, r| &acc * &Poly::linear_root(r))
    }

    /// `p(-z)`.
    pub fn reflect(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() })
                .collect(),
        )
    }

    /// Divides out every factor `(z - zeta)`; returns the cofactor and count.
    pub fn strip_root(&self, zeta: &Rat) -> (Poly, usize) {
        let m = self.root_multiplicity(zeta);
        let lin = Poly::linear_root(zeta);
        let mut p = self.clone();
        for _ in 0..m {
            p = p.div_exact(&lin).expect("root divides");
        }
        (p, m)
    }
}

fn rational_roots_squarefree(f: &Poly) -> Vec<Rat> {
    use num_bigint::BigInt;
    use num_integer::Integer;
    let Some(d) = f.degree() else { return vec![] };
    if d == 0 {
        return vec![];
    }
    if d == 1 {
        return vec![-f.coeff(0) / f.coeff(1)];
    }
    // Integer-coefficient primitive form.
    let g = f.primitive_sign_preserving();
    let mut roots = Vec::new();
    let mut g = g;
    if g.coeff(0).is_zero() {
        roots.push(rat::zero());
        g = g.div_exact(&Poly::z()).expect("z divides");
        g = g.primitive_sign_preserving();
    }
    if g.is_constant() {
        return roots;
    }
    let a0 = g.coeff(0).to_integer().abs();
    let an = g.leading().to_integer().abs();
    let divisors = |n: &BigInt| -> Vec<BigInt> {
        let mut v = Vec::new();
        let mut k = BigInt::one();
        // Low-degree inputs only; trial division is adequate.
        while &k * &k <= *n {
            if n.is_multiple_of(&k) {
                v.push(k.clone());
                v.push(n / &k);
            }
            k += 1;
        }
        v.sort();
        v.dedup();
        v
    };
    for p in divisors(&a0) {
        for q in divisors(&an) {
            for s in [1, -1] {
                let r = Rat::new(&p * BigInt::from(s), q.clone());
                if g.eval(&r).is_zero() && !roots.contains(&r) {
                    roots.push(r);
                }
            }
        }
    }
    roots
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let cs = rat::to_string(&a);
            let cs = if cs.contains('/') { format!("({cs})") } else { cs };
            match (k, a.is_one()) {
                (0, _) => write!(f, "{cs}")?,
                (1, true) => write!(f, "z")?,
                (1, false) => write!(f, "{cs}*z")?,
                (_, true) => write!(f, "z^{k}")?,
                (_, false) => write!(f, "{cs}*z^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - o.coeff(k)).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![rat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                v[i + j] += a * b;
            }
        }
        Poly::new(v)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

macro_rules! forward_owned {
    ($t:ty, $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { (&self).$m(&o) }
        }
        impl $tr<&$t> for $t {
            type Output = $t;
            fn $m(self, o: &$t) -> $t { (&self).$m(o) }
        }
        impl $tr<$t> for &$t {
            type Output = $t;
            fn $m(self, o: $t) -> $t { self.$m(&o) }
        }
    )*};
}
pub(crate) use forward_owned;

forward_owned!(Poly, Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl serde::Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(self.coeffs.len()))?;
        for c in &self.coeffs {
            seq.serialize_element(&rat::to_string(c))?;
        }
        seq.end()
    }
}

impl<'de> serde::Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<serde_json::Value>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(rat::from_json)
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}
