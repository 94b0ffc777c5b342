//! Rational Darboux transformations and factorization chains.

use serde::{Deserialize, Serialize};

use crate::classical::{bochner_operator, Family, Seed, SeedSpec};
use crate::diffop::{DiffOp, FirstOrderOp, SecondOrderOp};
use crate::error::{Error, Result};
use crate::exact::linalg;
use crate::exact::rat::{self, int, Rat};
use crate::exact::{Poly, RatFunc};

/// Log-derivative `w` of a quasi-rational eigenfunction with eigenvalue `lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuasiRational {
    pub w: RatFunc,
    pub lambda: Rat,
}

impl From<&Seed> for QuasiRational {
    fn from(s: &Seed) -> Self {
        QuasiRational { w: s.w.clone(), lambda: s.lambda0.clone() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub a: FirstOrderOp,
    pub b: FirstOrderOp,
    pub lambda0: Rat,
}

fn check_eigen(t: &SecondOrderOp, phi: &QuasiRational) -> Result<()> {
    let res = t.ricatti_residual(&phi.w);
    match res.as_constant() {
        Some(c) if c == phi.lambda => Ok(()),
        _ => Err(Error::NotEigenfunction(format!("{res} (expected {})", rat::to_string(&phi.lambda)))),
    }
}

/// `T = B A + lambda0` with `A = b(D - w)`, `B = (p/b)(D - ŵ)`.
pub fn factorize(t: &SecondOrderOp, phi: &QuasiRational, b: &RatFunc) -> Result<Factorization> {
    if b.is_zero() {
        return Err(Error::Input("gauge factor b is zero".into()));
    }
    check_eigen(t, phi)?;
    let what = &(&(-&phi.w) - &(&t.q / &t.p)?) + &b.log_derivative()?;
    let a = FirstOrderOp::new(b.clone(), phi.w.clone())?;
    let bb = FirstOrderOp::new((&t.p / b)?, what)?;
    Ok(Factorization { a, b: bb, lambda0: phi.lambda.clone() })
}

impl Factorization {
    /// `B A + lambda0`.
    pub fn source(&self) -> DiffOp {
        self.b.to_diffop().compose(&self.a.to_diffop()).plus_const(&self.lambda0)
    }

    /// `A B + lambda0`.
    pub fn partner(&self) -> Result<SecondOrderOp> {
        SecondOrderOp::from_diffop(&self.a.to_diffop().compose(&self.b.to_diffop()).plus_const(&self.lambda0))
    }
}

/// Partner operator and its weight multiplier `p/b^2`.
pub fn partner(t: &SecondOrderOp, phi: &QuasiRational, b: &RatFunc) -> Result<(SecondOrderOp, RatFunc)> {
    let f = factorize(t, phi, b)?;
    let that = f.partner()?;
    let mult = (&t.p / &(b * b))?;
    Ok((that, mult))
}

/// Partner from the closed coefficient laws, without composing operators.
pub fn partner_by_laws(t: &SecondOrderOp, phi: &QuasiRational, b: &RatFunc) -> Result<SecondOrderOp> {
    check_eigen(t, phi)?;
    let (p, q, r, w) = (&t.p, &t.q, &t.r, &phi.w);
    let lb = b.log_derivative()?;
    let pp = p.derivative();
    let qh = &(q + &pp) - &(&lb * p).scale(&int(2));
    let b2 = (&b.derivative().derivative() / b)?;
    let inner = &(&(&lb * &lb).scale(&int(2)) - &b2) + &w.derivative().scale(&int(2));
    let rh = &(&(&(r + &q.derivative()) + &(w * &pp)) - &(&lb * &(q + &pp))) + &(&inner * p);
    SecondOrderOp::new(p.clone(), qh, rh)
}

/// Monic denominator of `w`: the least polynomial `b` for which `b(D - w)`
/// maps polynomials to polynomials.
pub fn default_gauge(phi: &QuasiRational) -> RatFunc {
    RatFunc::from_poly(phi.w.den().clone())
}

/// Log-derivative of `A[phi2]` for `A = b(D - w_a)`.
pub fn transport(b: &RatFunc, w_a: &RatFunc, phi2: &QuasiRational) -> Result<Option<QuasiRational>> {
    let diff = &phi2.w - w_a;
    if diff.is_zero() {
        return Ok(None);
    }
    let w = &(&b.log_derivative()? + &phi2.w) + &diff.log_derivative()?;
    Ok(Some(QuasiRational { w, lambda: phi2.lambda.clone() }))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StepSpec {
    pub seed: SeedSpec,
    #[serde(default = "Gauge::auto")]
    pub b: Gauge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Gauge {
    Auto,
    Explicit(RatFunc),
}

impl Gauge {
    fn auto() -> Self {
        Gauge::Auto
    }
}

impl Serialize for Gauge {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Gauge::Auto => s.serialize_str("auto"),
            Gauge::Explicit(f) => f.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Gauge {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        match &v {
            serde_json::Value::String(s) if s == "auto" => Ok(Gauge::Auto),
            _ => serde_json::from_value(v).map(Gauge::Explicit).map_err(serde::de::Error::custom),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DarbouxChain {
    pub base: Family,
    pub steps: Vec<StepSpec>,
}

impl DarbouxChain {
    pub fn new(base: Family, seeds: &[SeedSpec]) -> Self {
        DarbouxChain {
            base,
            steps: seeds.iter().map(|s| StepSpec { seed: s.clone(), b: Gauge::Auto }).collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightStep {
    pub b: RatFunc,
    pub p: RatFunc,
    /// `p / b^2`.
    pub multiplier: RatFunc,
}

#[derive(Clone, Debug)]
pub struct ChainResult {
    pub operators: Vec<SecondOrderOp>,
    pub intertwiner: DiffOp,
    pub weights_log: Vec<WeightStep>,
    pub lambdas: Vec<Rat>,
}

impl ChainResult {
    pub fn final_operator(&self) -> &SecondOrderOp {
        self.operators.last().expect("base operator present")
    }

    /// Product of the per-step weight multipliers.
    pub fn weight_multiplier(&self) -> RatFunc {
        self.weights_log
            .iter()
            .fold(RatFunc::one(), |acc, s| &acc * &s.multiplier)
    }
}

pub fn run_chain(chain: &DarbouxChain) -> Result<ChainResult> {
    let t0 = bochner_operator(&chain.base);
    let mut seeds: Vec<QuasiRational> = chain
        .steps
        .iter()
        .enumerate()
        .map(|(i, s)| {
            s.seed
                .resolve(&chain.base)
                .map(|sd| QuasiRational::from(&sd))
                .map_err(|e| Error::ChainStep { step: i, reason: e.to_string() })
        })
        .collect::<Result<_>>()?;
    for i in 0..seeds.len() {
        for j in 0..i {
            if seeds[i].w == seeds[j].w {
                return Err(Error::DependentSeeds(j, i));
            }
        }
    }
    let mut ops = vec![t0];
    let mut l = DiffOp::identity();
    let mut log = Vec::new();
    let mut lambdas = Vec::new();
    for i in 0..seeds.len() {
        let t = ops.last().unwrap().clone();
        let phi = seeds[i].clone();
        let b = match &chain.steps[i].b {
            Gauge::Auto => default_gauge(&phi),
            Gauge::Explicit(b) => b.clone(),
        };
        let wrap = |e: Error| Error::ChainStep { step: i, reason: e.to_string() };
        let f = factorize(&t, &phi, &b).map_err(wrap)?;
        let that = f.partner().map_err(wrap)?;
        l = f.a.to_diffop().compose(&l);
        log.push(WeightStep {
            b: b.clone(),
            p: t.p.clone(),
            multiplier: (&t.p / &(&b * &b)).map_err(wrap)?,
        });
        lambdas.push(phi.lambda.clone());
        for later in seeds.iter_mut().skip(i + 1) {
            *later = transport(&b, &phi.w, later)
                .map_err(wrap)?
                .ok_or(Error::DegenerateSeed(i + 1))?;
        }
        ops.push(that);
    }
    let res = ChainResult { operators: ops, intertwiner: l, weights_log: log, lambdas };
    if !verify_intertwining(res.final_operator(), &res.intertwiner, &res.operators[0]) {
        return Err(Error::Identity("chain intertwiner fails T̂L = LT".into()));
    }
    Ok(res)
}

pub fn verify_intertwining(that: &SecondOrderOp, l: &DiffOp, t: &SecondOrderOp) -> bool {
    that.to_diffop().compose(l).sub(&l.compose(&t.to_diffop())).is_zero()
}

/// Search options for [`find_intertwiner`].
#[derive(Clone, Debug)]
pub struct IntertwinerSearch {
    pub max_order: usize,
    /// Largest operator degree tried.
    pub max_degree: i64,
}

impl Default for IntertwinerSearch {
    fn default() -> Self {
        IntertwinerSearch { max_order: 3, max_degree: 4 }
    }
}

/// Minimal-order `L` with polynomial coefficients and `T L = L T_B`.
/// Within an order, the smallest operator degree is taken. Returns `None`
/// when nothing exists inside the search box.
pub fn find_intertwiner(t: &SecondOrderOp, tb: &SecondOrderOp, opts: &IntertwinerSearch) -> Option<DiffOp> {
    let max_order = opts.max_order.min(8);
    let td = t.to_diffop();
    let tbd = tb.to_diffop();
    for order in 0..=max_order {
        for k in -(order as i64)..=opts.max_degree {
            // Unknowns: coefficient of z^m in a_j, 0 <= m <= j + k.
            let mut basis: Vec<(usize, usize)> = Vec::new();
            for j in 0..=order {
                let top = j as i64 + k;
                if top < 0 {
                    continue;
                }
                for m in 0..=top as usize {
                    basis.push((j, m));
                }
            }
            if basis.is_empty() {
                continue;
            }
            // Image of each unknown under L -> T L - L T_B.
            let images: Vec<DiffOp> = basis
                .iter()
                .map(|&(j, m)| {
                    let mut c = vec![RatFunc::zero(); j + 1];
                    c[j] = RatFunc::from_poly(Poly::monomial(rat::one(), m));
                    let e = DiffOp::new(c);
                    td.compose(&e).sub(&e.compose(&tbd))
                })
                .collect();
            let n_out = images.iter().map(|d| d.coeffs().len()).max().unwrap_or(0);
            let mut rows: linalg::Matrix = Vec::new();
            for i in 0..n_out {
                let coeffs: Vec<RatFunc> = images.iter().map(|d| d.coeff(i)).collect();
                let den = coeffs
                    .iter()
                    .fold(Poly::one(), |acc, c| Poly::lcm(&acc, c.den()));
                let nums: Vec<Poly> = coeffs
                    .iter()
                    .map(|c| {
                        (c * &den)
                            .to_poly()
                            .expect("common denominator clears")
                    })
                    .collect();
                let top = nums.iter().filter_map(Poly::degree).max();
                if let Some(top) = top {
                    for m in 0..=top {
                        rows.push(nums.iter().map(|p| p.coeff(m)).collect());
                    }
                }
            }
            let kernel = linalg::nullspace(&rows, basis.len());
            // Prefer a kernel vector with nonzero top coefficient.
            let pick = kernel.iter().find(|v| {
                basis
                    .iter()
                    .zip(v.iter())
                    .any(|(&(j, _), c)| j == order && !num_traits::Zero::is_zero(c))
            });
            if let Some(v) = pick {
                let mut c = vec![Poly::zero(); order + 1];
                for (&(j, m), x) in basis.iter().zip(v) {
                    c[j] = &c[j] + &Poly::monomial(x.clone(), m);
                }
                return Some(DiffOp::new(c.into_iter().map(RatFunc::from_poly).collect()));
            }
        }
    }
    None
}

/// `L1 = c L2` for some nonzero constant `c`.
pub fn proportional(l1: &DiffOp, l2: &DiffOp) -> bool {
    if l1.order() != l2.order() || l1.is_zero() {
        return false;
    }
    let top = l1.order().unwrap();
    let Ok(ratio) = &l1.coeff(top) / &l2.coeff(top) else {
        return false;
    };
    let Some(c) = ratio.as_constant() else {
        return false;
    };
    l1.sub(&l2.scale(&c)).is_zero()
}
