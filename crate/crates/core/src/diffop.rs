//! Linear differential operators with rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::rat::{self, int, Rat};
use crate::exact::{Poly, RatFunc};

/// `sum a_j D^j`, coefficients ascending. Trailing zero coefficients are
/// dropped, so the zero operator has no coefficients.
#[derive(Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct DiffOp {
    #[serde(deserialize_with = "de_coeffs")]
    coeffs: Vec<RatFunc>,
}

fn de_coeffs<'de, D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Vec<RatFunc>, D::Error> {
    let mut v = Vec::<RatFunc>::deserialize(d)?;
    while v.last().is_some_and(RatFunc::is_zero) {
        v.pop();
    }
    Ok(v)
}

impl DiffOp {
    pub fn new(mut coeffs: Vec<RatFunc>) -> Self {
        while coeffs.last().is_some_and(RatFunc::is_zero) {
            coeffs.pop();
        }
        DiffOp { coeffs }
    }

    pub fn zero() -> Self {
        DiffOp { coeffs: vec![] }
    }

    pub fn identity() -> Self {
        Self::mul_by(RatFunc::one())
    }

    /// Multiplication operator `f`.
    pub fn mul_by(f: RatFunc) -> Self {
        Self::new(vec![f])
    }

    /// `D`.
    pub fn d() -> Self {
        Self::new(vec![RatFunc::zero(), RatFunc::one()])
    }

    pub fn coeffs(&self) -> &[RatFunc] {
        &self.coeffs
    }

    pub fn coeff(&self, j: usize) -> RatFunc {
        self.coeffs.get(j).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Order, `None` for the zero operator.
    pub fn order(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let mut out = RatFunc::zero();
        let mut g = f.clone();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                g = g.derivative();
            }
            if !a.is_zero() {
                out = &out + &(a * &g);
            }
        }
        out
    }

    pub fn apply_poly(&self, y: &Poly) -> RatFunc {
        self.apply(&RatFunc::from_poly(y.clone()))
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &DiffOp) -> DiffOp {
        if self.is_zero() || other.is_zero() {
            return DiffOp::zero();
        }
        let n = self.coeffs.len() + other.coeffs.len() - 1;
        let mut out = vec![RatFunc::zero(); n];
        // (a D^i)(b D^j) = a sum_k C(i,k) b^(k) D^(i-k+j)
        for (j, b) in other.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let mut derivs = vec![b.clone()];
            for _ in 1..self.coeffs.len() {
                let next = derivs.last().unwrap().derivative();
                derivs.push(next);
            }
            for (i, a) in self.coeffs.iter().enumerate() {
                if a.is_zero() {
                    continue;
                }
                for (k, bk) in derivs.iter().enumerate().take(i + 1) {
                    if bk.is_zero() {
                        continue;
                    }
                    let c = rat::binomial(&int(i as i64), k);
                    out[i - k + j] = &out[i - k + j] + &(a * bk).scale(&c);
                }
            }
        }
        DiffOp::new(out)
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let n = self.coeffs.len().max(o.coeffs.len());
        DiffOp::new((0..n).map(|j| &self.coeff(j) + &o.coeff(j)).collect())
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.scale(&-rat::one()))
    }

    pub fn scale(&self, c: &Rat) -> DiffOp {
        DiffOp::new(self.coeffs.iter().map(|a| a.scale(c)).collect())
    }

    /// Left multiplication `f ∘ self`.
    pub fn left_mul(&self, f: &RatFunc) -> DiffOp {
        DiffOp::new(self.coeffs.iter().map(|a| a * f).collect())
    }

    /// `self + c`.
    pub fn plus_const(&self, c: &Rat) -> DiffOp {
        self.add(&DiffOp::mul_by(RatFunc::constant(c.clone())))
    }

    /// `max_j (deg a_j - j)`.
    pub fn op_degree(&self) -> Result<i64> {
        self.coeffs
            .iter()
            .enumerate()
            .filter_map(|(j, a)| a.degree().map(|d| d - j as i64))
            .max()
            .ok_or(Error::ZeroOperator)
    }

    /// `sigma(n) = sum_j c_j n(n-1)...(n-j+1)` with `c_j` the coefficient of
    /// `z^{j+k}` at infinity in `a_j`.
    pub fn symbol_poly(&self) -> Result<Poly> {
        let k = self.op_degree()?;
        let n = Poly::z();
        let mut sigma = Poly::zero();
        let mut falling = Poly::one();
        for (j, a) in self.coeffs.iter().enumerate() {
            if j > 0 {
                falling = &falling * &(&n - &Poly::constant(int(j as i64 - 1)));
            }
            if a.degree() == Some(k + j as i64) {
                let c = a.num().leading();
                sigma = &sigma + &falling.scale(&c);
            }
        }
        Ok(sigma)
    }

    /// True when every coefficient is a polynomial.
    pub fn has_poly_coeffs(&self) -> bool {
        self.coeffs.iter().all(RatFunc::is_poly)
    }

    /// Substitution `z -> a z + b` with `D -> D / a`.
    pub fn compose_affine(&self, a: &Rat, b: &Rat) -> Result<DiffOp> {
        let inv = rat::one() / a;
        let mut out = Vec::new();
        let mut f = rat::one();
        for c in &self.coeffs {
            out.push(c.compose_affine(a, b)?.scale(&f));
            f *= &inv;
        }
        Ok(DiffOp::new(out))
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, a)| !a.is_zero())
            .map(|(j, a)| match j {
                0 => format!("[{a}]"),
                1 => format!("[{a}]D"),
                _ => format!("[{a}]D^{j}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl fmt::Debug for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DiffOp({self})")
    }
}

/// `T = p D^2 + q D + r` with `p != 0`.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SecondOrderOp {
    pub p: RatFunc,
    pub q: RatFunc,
    pub r: RatFunc,
}

impl SecondOrderOp {
    pub fn new(p: RatFunc, q: RatFunc, r: RatFunc) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::Input("second-order coefficient p is zero".into()));
        }
        Ok(SecondOrderOp { p, q, r })
    }

    /// Polynomial coefficients given as integer arrays, for fixtures.
    pub fn from_polys(p: Poly, q: Poly, r: Poly) -> Result<Self> {
        Self::new(p.into(), q.into(), r.into())
    }

    pub fn to_diffop(&self) -> DiffOp {
        DiffOp::new(vec![self.r.clone(), self.q.clone(), self.p.clone()])
    }

    pub fn from_diffop(l: &DiffOp) -> Result<Self> {
        if l.order() != Some(2) {
            return Err(Error::Input(format!("operator {l} is not of order 2")));
        }
        Self::new(l.coeff(2), l.coeff(1), l.coeff(0))
    }

    pub fn apply(&self, f: &RatFunc) -> RatFunc {
        let d1 = f.derivative();
        let d2 = d1.derivative();
        &(&(&self.p * &d2) + &(&self.q * &d1)) + &(&self.r * f)
    }

    pub fn apply_poly(&self, y: &Poly) -> RatFunc {
        self.apply(&RatFunc::from_poly(y.clone()))
    }

    pub fn plus_const(&self, c: &Rat) -> Self {
        SecondOrderOp {
            p: self.p.clone(),
            q: self.q.clone(),
            r: &self.r + &RatFunc::constant(c.clone()),
        }
    }

    pub fn op_degree(&self) -> Result<i64> {
        self.to_diffop().op_degree()
    }

    pub fn symbol_poly(&self) -> Result<Poly> {
        self.to_diffop().symbol_poly()
    }

    /// `sigma T sigma^{-1}`.
    pub fn gauge_conjugate(&self, sigma: &RatFunc) -> Result<Self> {
        if sigma.is_zero() {
            return Err(Error::Input("gauge factor is zero".into()));
        }
        let l1 = sigma.log_derivative()?;
        let l2 = (&sigma.derivative().derivative() / sigma)?;
        let two = int(2);
        let qh = &self.q - &(&l1 * &self.p).scale(&two);
        let rh = &(&self.r - &(&l1 * &qh)) - &(&l2 * &self.p);
        Self::new(self.p.clone(), qh, rh)
    }

    /// True iff p, q, r are polynomials and the operator degree is 0.
    pub fn is_bochner(&self) -> bool {
        self.p.is_poly()
            && self.q.is_poly()
            && self.r.is_poly()
            && self.op_degree().ok() == Some(0)
    }

    /// Ricatti residual `p(w' + w^2) + q w + r`.
    pub fn ricatti_residual(&self, w: &RatFunc) -> RatFunc {
        let a = &w.derivative() + &(w * w);
        &(&(&self.p * &a) + &(&self.q * w)) + &self.r
    }

    pub fn local_expansion(&self, zeta: &Rat, depth: i64) -> Result<LocalExpansion> {
        let ord = |f: &RatFunc, shift: i64| -> Result<Option<i64>> {
            if f.is_zero() {
                Ok(None)
            } else {
                Ok(Some(f.order_at(zeta)? - shift))
            }
        };
        let d = [ord(&self.p, 2)?, ord(&self.q, 1)?, ord(&self.r, 0)?]
            .into_iter()
            .flatten()
            .min()
            .expect("p is nonzero");
        if depth < d {
            return Err(Error::Input(format!("depth {depth} below leading order {d}")));
        }
        let lc = |f: &RatFunc, lo: i64, hi: i64| -> Result<BTreeMap<i64, Rat>> {
            f.laurent_coeffs(zeta, lo, hi)
        };
        let pc = lc(&self.p, d + 2, depth + 2)?;
        let qc = lc(&self.q, d + 1, depth + 1)?;
        let rc = lc(&self.r, d, depth)?;
        let terms = (d..=depth)
            .map(|j| {
                (
                    j,
                    LocalTerm {
                        p: pc[&(j + 2)].clone(),
                        q: qc[&(j + 1)].clone(),
                        r: rc[&j].clone(),
                    },
                )
            })
            .collect();
        Ok(LocalExpansion { zeta: zeta.clone(), d, terms })
    }
}

impl fmt::Display for SecondOrderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]D^2 + [{}]D + [{}]", self.p, self.q, self.r)
    }
}

impl fmt::Debug for SecondOrderOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SecondOrderOp({self})")
    }
}

/// `b (D - w)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FirstOrderOp {
    pub b: RatFunc,
    pub w: RatFunc,
}

impl FirstOrderOp {
    pub fn new(b: RatFunc, w: RatFunc) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::Input("first-order coefficient b is zero".into()));
        }
        Ok(FirstOrderOp { b, w })
    }

    pub fn to_diffop(&self) -> DiffOp {
        DiffOp::new(vec![-(&self.b * &self.w), self.b.clone()])
    }
}

/// One homogeneous piece `T_j = p_{j+2} t^{j+2} D^2 + q_{j+1} t^{j+1} D + r_j t^j`,
/// `t = z - zeta`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalTerm {
    pub p: Rat,
    pub q: Rat,
    pub r: Rat,
}

impl LocalTerm {
    pub fn is_zero(&self) -> bool {
        self.p.is_zero() && self.q.is_zero() && self.r.is_zero()
    }

    /// Action on `t^s`: the coefficient of `t^{s+j}`.
    pub fn on_power(&self, s: &Rat) -> Rat {
        &self.p * s * (s - rat::one()) + &self.q * s + &self.r
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalExpansion {
    pub zeta: Rat,
    pub d: i64,
    pub terms: BTreeMap<i64, LocalTerm>,
}

impl LocalExpansion {
    pub fn term(&self, j: i64) -> LocalTerm {
        self.terms.get(&j).cloned().unwrap_or(LocalTerm {
            p: rat::zero(),
            q: rat::zero(),
            r: rat::zero(),
        })
    }

    pub fn leading(&self) -> LocalTerm {
        self.term(self.d)
    }
}
