//! Weights, symmetric form, regularity and high-precision orthogonality.

use std::io::Write;

use num_traits::{Signed, Zero};
use rug::ops::Pow;
use rug::Float;
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize};

use crate::classical::Family;
use crate::darboux::ChainResult;
use crate::diffop::SecondOrderOp;
use crate::error::{Error, Result};
use crate::exact::rat::{self, int, rat, Rat};
use crate::exact::{sturm_count, Interval, Poly, RatFunc};
use crate::numeric::quad::{self, Domain, Node, QuadSettings};
use crate::numeric::{float_str, rat_to_float};
use crate::spectral::ExceptionalSystem;
use crate::structure::NaturalForm;

/// `x = scale * z + shift`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AffineMap {
    #[serde(with = "rat::serde_rat")]
    pub scale: Rat,
    #[serde(with = "rat::serde_rat")]
    pub shift: Rat,
}

impl AffineMap {
    pub fn identity() -> Self {
        AffineMap { scale: rat::one(), shift: rat::zero() }
    }

    /// `z` in terms of `x`.
    pub fn inverse_poly(&self) -> Poly {
        let a = rat::one() / &self.scale;
        Poly::new(vec![-(&self.shift * &a), a])
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type")]
pub enum WeightType {
    HermiteType { map: AffineMap },
    LaguerreType { map: AffineMap },
    JacobiType { map: AffineMap },
    Rejected { reason: String },
}

/// Affine class of the leading coefficient `p`.
pub fn classify_weight_type(t: &SecondOrderOp) -> WeightType {
    let Ok(p) = t.p.to_poly() else {
        return WeightType::Rejected { reason: "p is not a polynomial".into() };
    };
    classify_p(&p)
}

fn classify_p(p: &Poly) -> WeightType {
    match p.degree() {
        Some(0) => WeightType::HermiteType { map: AffineMap::identity() },
        Some(1) => {
            let z0 = -(p.coeff(0) / p.coeff(1));
            WeightType::LaguerreType { map: AffineMap { scale: rat::one(), shift: -z0 } }
        }
        Some(2) => {
            let roots = p.rational_roots();
            let disc = p.coeff(1) * p.coeff(1) - int(4) * p.coeff(0) * p.coeff(2);
            if disc.is_zero() {
                WeightType::Rejected { reason: "p is a square (z^2 type): no finite moments".into() }
            } else if disc.is_negative() {
                WeightType::Rejected {
                    reason: "p has no real roots (1+z^2 type): exp(a arctan z)(1+z^2)^b weights fail the moment conditions"
                        .into(),
                }
            } else if roots.len() == 2 {
                let (z1, z2) = (roots[0].0.clone(), roots[1].0.clone());
                let w = &z2 - &z1;
                let scale = int(2) / &w;
                let shift = -(&z1 + &z2) / &w;
                WeightType::JacobiType { map: AffineMap { scale, shift } }
            } else {
                WeightType::Rejected { reason: "real irrational roots of p are not supported".into() }
            }
        }
        _ => WeightType::Rejected { reason: format!("deg p = {} not in 0..=2", p.degree_i64()) },
    }
}

/// The classical factor of a weight, with exact rational data.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "form", rename_all = "lowercase")]
pub enum Density {
    /// `exp(a2 z^2 + a1 z)`
    Gaussian {
        #[serde(with = "rat::serde_rat")]
        a2: Rat,
        #[serde(with = "rat::serde_rat")]
        a1: Rat,
    },
    /// `|z - z0|^exponent exp(rate z)` on the side of `z0` given by `upward`.
    Gamma {
        #[serde(with = "rat::serde_rat")]
        z0: Rat,
        #[serde(with = "rat::serde_rat")]
        exponent: Rat,
        #[serde(with = "rat::serde_rat")]
        rate: Rat,
        upward: bool,
    },
    /// `(z - z1)^e1 (z2 - z)^e2` on `(z1, z2)`.
    Beta {
        #[serde(with = "rat::serde_rat")]
        z1: Rat,
        #[serde(with = "rat::serde_rat")]
        z2: Rat,
        #[serde(with = "rat::serde_rat")]
        e1: Rat,
        #[serde(with = "rat::serde_rat")]
        e2: Rat,
    },
}

/// `W = density * extra / η^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightDescriptor {
    pub density: Density,
    pub eta: Poly,
    pub interval: Interval,
    pub extra: RatFunc,
    /// Leading coefficient of the operator, for `P = p W`.
    pub p: Poly,
}

impl WeightDescriptor {
    /// The classical family whose weight equals `density`, if the data are
    /// already in standard position.
    pub fn family(&self) -> Option<Family> {
        match &self.density {
            Density::Gaussian { a2, a1 } if *a2 == int(-1) && a1.is_zero() => Some(Family::Hermite),
            Density::Gamma { z0, exponent, rate, upward: true } if z0.is_zero() && *rate == int(-1) => {
                Some(Family::laguerre(exponent.clone()))
            }
            Density::Beta { z1, z2, e1, e2 } if *z1 == int(-1) && *z2 == int(1) => {
                Some(Family::jacobi(e2.clone(), e1.clone()))
            }
            _ => None,
        }
    }

    pub fn domain(&self, prec: u32) -> Domain {
        let f = |r: &Rat| rat_to_float(r, prec);
        match &self.density {
            Density::Gaussian { .. } => Domain::Real,
            Density::Gamma { z0, upward: true, .. } => Domain::Above(f(z0)),
            Density::Gamma { z0, upward: false, .. } => Domain::Below(f(z0)),
            Density::Beta { z1, z2, .. } => Domain::Finite(f(z1), f(z2)),
        }
    }

    /// `W` at a quadrature node; endpoint distances are taken from the node
    /// when present.
    pub fn eval_node(&self, n: &Node, prec: u32) -> Float {
        let x = &n.x;
        let fl = |r: &Rat| rat_to_float(r, prec);
        let pow = |base: Float, e: &Rat| -> Float {
            if e.is_zero() {
                Float::with_val(prec, 1)
            } else {
                base.pow(fl(e))
            }
        };
        let dens = match &self.density {
            Density::Gaussian { a2, a1 } => {
                let v = Float::with_val(prec, x * x) * fl(a2) + Float::with_val(prec, x * fl(a1));
                v.exp()
            }
            Density::Gamma { z0, exponent, rate, upward } => {
                let d = if *upward {
                    n.from_lo.clone().unwrap_or_else(|| Float::with_val(prec, x - fl(z0)))
                } else {
                    n.to_hi.clone().unwrap_or_else(|| Float::with_val(prec, fl(z0) - x))
                };
                pow(d, exponent) * Float::with_val(prec, x * fl(rate)).exp()
            }
            Density::Beta { z1, z2, e1, e2 } => {
                let d1 = n.from_lo.clone().unwrap_or_else(|| Float::with_val(prec, x - fl(z1)));
                let d2 = n.to_hi.clone().unwrap_or_else(|| Float::with_val(prec, fl(z2) - x));
                pow(d1, e1) * pow(d2, e2)
            }
        };
        let eta = eval_poly(&self.eta, x, prec);
        let extra = eval_ratfunc(&self.extra, x, prec);
        dens * extra / Float::with_val(prec, eta.square_ref())
    }

    pub fn eval(&self, x: &Float, prec: u32) -> Float {
        self.eval_node(&Node { x: x.clone(), from_lo: None, to_hi: None }, prec)
    }
}

pub fn eval_poly(p: &Poly, x: &Float, prec: u32) -> Float {
    let mut acc = Float::with_val(prec, 0);
    for c in p.coeffs().iter().rev() {
        acc *= x;
        acc += rat_to_float(c, prec);
    }
    acc
}

pub fn eval_ratfunc(f: &RatFunc, x: &Float, prec: u32) -> Float {
    eval_poly(f.num(), x, prec) / eval_poly(f.den(), x, prec)
}

/// `W = exp(∫ s/p) / (√p η^2)` read off the natural data.
pub fn weight_of(t: &SecondOrderOp, nf: &NaturalForm) -> Result<WeightDescriptor> {
    let kind = classify_weight_type(t);
    if let WeightType::Rejected { reason } = &kind {
        return Err(Error::NoWeight(reason.clone()));
    }
    let p = &nf.p;
    let s = &nf.s;
    let half = rat(1, 2);
    let (density, interval) = match p.degree() {
        Some(0) => {
            let c = p.coeff(0);
            let a2 = s.coeff(1) / (int(2) * &c);
            let a1 = s.coeff(0) / &c;
            (Density::Gaussian { a2, a1 }, Interval::real_line())
        }
        Some(1) => {
            let a = p.coeff(1);
            let z0 = -(p.coeff(0) / &a);
            let rate = s.coeff(1) / &a;
            let exponent = s.eval(&z0) / &a - &half;
            let upward = match rate.signum() {
                r if r.is_negative() => true,
                r if r.is_positive() => false,
                _ => return Err(Error::NoWeight("no exponential decay on either side of the root of p".into())),
            };
            let interval = if upward { Interval::from(z0.clone(), false) } else {
                Interval::new(None, Some(z0.clone()), false, false)?
            };
            (Density::Gamma { z0, exponent, rate, upward }, interval)
        }
        Some(2) => {
            let roots = p.rational_roots();
            let (z1, z2) = (roots[0].0.clone(), roots[1].0.clone());
            let a = p.coeff(2);
            let e1 = s.eval(&z1) / (&a * (&z1 - &z2)) - &half;
            let e2 = s.eval(&z2) / (&a * (&z2 - &z1)) - &half;
            (Density::Beta { z1: z1.clone(), z2: z2.clone(), e1, e2 }, Interval::open(z1, z2))
        }
        _ => unreachable!("classified above"),
    };
    Ok(WeightDescriptor { density, eta: nf.eta.clone(), interval, extra: RatFunc::one(), p: p.clone() })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegularityVerdict {
    pub regular: bool,
    pub failures: Vec<String>,
}

pub fn regularity_check(w: &WeightDescriptor) -> RegularityVerdict {
    let mut failures = vec![];
    let closed = w.interval.closure();
    let n = sturm_count(&w.eta, &closed);
    if n > 0 {
        failures.push(format!("eta has {n} root(s) in {closed}"));
    }
    let m1 = int(-1);
    match &w.density {
        Density::Gaussian { a2, .. } => {
            if !a2.is_negative() {
                failures.push("Gaussian factor does not decay".into());
            }
        }
        Density::Gamma { exponent, .. } => {
            if *exponent <= m1 {
                failures.push(format!("endpoint exponent {} <= -1", rat::to_string(exponent)));
            }
        }
        Density::Beta { e1, e2, .. } => {
            for e in [e1, e2] {
                if *e <= m1 {
                    failures.push(format!("endpoint exponent {} <= -1", rat::to_string(e)));
                }
            }
        }
    }
    if w.extra != RatFunc::one() {
        let zeros = sturm_count(w.extra.num(), &w.interval) + sturm_count(w.extra.den(), &w.interval);
        let probe = interior_point(&w.interval);
        let positive = w.extra.eval(&probe).map(|v| v.is_positive()).unwrap_or(false);
        if zeros > 0 || !positive {
            failures.push("extra rational factor is not positive on the interval".into());
        }
    }
    RegularityVerdict { regular: failures.is_empty(), failures }
}

fn interior_point(i: &Interval) -> Rat {
    match (&i.lo, &i.hi) {
        (Some(a), Some(b)) => (a + b) / int(2),
        (Some(a), None) => a + int(1),
        (None, Some(b)) => b - int(1),
        (None, None) => rat::zero(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadConfig {
    pub precision_bits: u32,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { precision_bits: 256, rel_tol: 1e-50, max_subdivisions: 14 }
    }
}

impl QuadConfig {
    fn settings(&self) -> Result<QuadSettings> {
        if self.precision_bits < 64 {
            return Err(Error::Input("precision_bits must be >= 64".into()));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::Input("rel_tol must be positive".into()));
        }
        Ok(QuadSettings { prec: self.precision_bits, rel_tol: self.rel_tol, max_levels: self.max_subdivisions })
    }
}

#[derive(Clone, Debug)]
pub struct GramReport {
    pub degrees: Vec<usize>,
    pub precision_bits: u32,
    pub matrix: Vec<Vec<Float>>,
    /// Largest `|G_ij| / sqrt(G_ii G_jj)`, `i != j`.
    pub max_offdiag: Float,
}

impl GramReport {
    pub fn diagonal_positive(&self) -> bool {
        (0..self.degrees.len()).all(|i| self.matrix[i][i].is_sign_positive() && !self.matrix[i][i].is_zero())
    }
}

pub fn decimal(f: &Float) -> String {
    f.to_string_radix(10, Some(40))
}

impl Serialize for GramReport {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut entries = vec![];
        for (i, di) in self.degrees.iter().enumerate() {
            for (j, dj) in self.degrees.iter().enumerate() {
                entries.push([di.to_string(), dj.to_string(), decimal(&self.matrix[i][j])]);
            }
        }
        let mut m = s.serialize_map(Some(4))?;
        m.serialize_entry("degrees", &self.degrees)?;
        m.serialize_entry("precision_bits", &self.precision_bits)?;
        m.serialize_entry("max_offdiag", &float_str(&self.max_offdiag))?;
        m.serialize_entry("entries", &entries)?;
        m.end()
    }
}

fn ensure_pole_free(w: &WeightDescriptor) -> Result<()> {
    let n = sturm_count(&w.eta, &w.interval.closure());
    if n > 0 {
        return Err(Error::Quadrature(format!("eta vanishes {n} time(s) on the closed interval")));
    }
    Ok(())
}

/// `∫_I W y_i y_j` for the eigenpolynomials of the requested degrees.
pub fn gram_matrix(sys: &ExceptionalSystem, w: &WeightDescriptor, degrees: &[usize], cfg: &QuadConfig) -> Result<GramReport> {
    let verdict = regularity_check(w);
    if !verdict.regular {
        return Err(Error::NoWeight(verdict.failures.join("; ")));
    }
    ensure_pole_free(w)?;
    let polys: Vec<&Poly> = degrees
        .iter()
        .map(|k| {
            sys.eigenpairs
                .get(k)
                .map(|e| &e.y)
                .ok_or_else(|| Error::Input(format!("no eigenpolynomial of degree {k}")))
        })
        .collect::<Result<_>>()?;
    let st = cfg.settings()?;
    let prec = st.prec;
    let n = polys.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect();
    let dom = w.domain(prec);
    let (vals, _) = quad::integrate(&dom, pairs.len(), &st, |node| {
        let wx = w.eval_node(node, prec);
        let ys: Vec<Float> = polys.iter().map(|p| eval_poly(p, &node.x, prec)).collect();
        pairs
            .iter()
            .map(|&(i, j)| Float::with_val(prec, &ys[i] * &ys[j]) * &wx)
            .collect()
    })?;
    let mut matrix = vec![vec![Float::with_val(prec, 0); n]; n];
    for (v, &(i, j)) in vals.into_iter().zip(&pairs) {
        matrix[i][j] = v.clone();
        matrix[j][i] = v;
    }
    let mut max_offdiag = Float::with_val(prec, 0);
    for i in 0..n {
        for j in 0..n {
            if i != j {
                let norm = Float::with_val(prec, &matrix[i][i] * &matrix[j][j]).sqrt();
                let r = Float::with_val(prec, matrix[i][j].abs_ref()) / norm;
                if r > max_offdiag {
                    max_offdiag = r;
                }
            }
        }
    }
    Ok(GramReport { degrees: degrees.to_vec(), precision_bits: prec, matrix, max_offdiag })
}

/// `∫_a^b (T[f] g - T[g] f) W - [P (f' g - f g')]_a^b` with `P = p W`.
pub fn symmetry_residual(
    t: &SecondOrderOp,
    w: &WeightDescriptor,
    f: &Poly,
    g: &Poly,
    a: &Rat,
    b: &Rat,
    cfg: &QuadConfig,
) -> Result<Float> {
    if !(w.interval.contains(a) && w.interval.contains(b)) || a >= b {
        return Err(Error::Input(format!("[{a}, {b}] is not inside {}", w.interval)));
    }
    let st = cfg.settings()?;
    let prec = st.prec;
    let tf = t.apply_poly(f);
    let tg = t.apply_poly(g);
    let fl = |r: &Rat| rat_to_float(r, prec);
    let dom = Domain::Finite(fl(a), fl(b));
    let (v, _) = quad::integrate(&dom, 1, &st, |node| {
        let x = &node.x;
        let lhs = eval_ratfunc(&tf, x, prec) * eval_poly(g, x, prec) - eval_ratfunc(&tg, x, prec) * eval_poly(f, x, prec);
        vec![lhs * w.eval(x, prec)]
    })?;
    let (df, dg) = (f.derivative(), g.derivative());
    let boundary = |z: &Rat| -> Float {
        let x = fl(z);
        let pw = eval_poly(&w.p, &x, prec) * w.eval(&x, prec);
        let wr = eval_poly(&df, &x, prec) * eval_poly(g, &x, prec) - eval_poly(f, &x, prec) * eval_poly(&dg, &x, prec);
        pw * wr
    };
    Ok(Float::with_val(prec, &v[0] - boundary(b)) + boundary(a))
}

/// `(log W)'` of an operator: `q/p - p'/p`.
fn log_weight_derivative(t: &SecondOrderOp) -> Result<RatFunc> {
    Ok(&(&t.q / &t.p)? - &t.p.log_derivative()?)
}

/// `F` with `F'/F = g`, when `g` is the log-derivative of a rational function.
pub fn rational_antilog(g: &RatFunc) -> Option<RatFunc> {
    if g.is_zero() {
        return Some(RatFunc::one());
    }
    let (a, b) = (g.num(), g.den());
    if a.degree_i64() >= b.degree_i64() {
        return None;
    }
    let db = b.derivative();
    let bound = 64i64;
    let mut f = RatFunc::one();
    let mut total = 0;
    for n in -bound..=bound {
        if n == 0 {
            continue;
        }
        let h = Poly::gcd(b, &(a - &db.scale(&int(n))));
        if let Some(d) = h.degree().filter(|d| *d > 0) {
            total += d;
            f = &f * &RatFunc::from_poly(h).pow(n).ok()?;
        }
    }
    (total == b.degree().unwrap_or(0) && f.log_derivative().ok()? == *g).then_some(f)
}

/// Outcome of matching the chain's weight multiplier against `χ / η^2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightRatio {
    /// `χ'/χ = k / p`.
    #[serde(with = "rat::serde_rat")]
    pub k: Rat,
    /// Product of the per-step multipliers.
    pub multiplier: RatFunc,
    /// `W_final / W_natural`, from the gauge between the two operators.
    pub gauge_factor: RatFunc,
    /// `χ` up to a constant, when it is rational.
    pub chi: Option<RatFunc>,
}

/// Checks that the composed multiplier equals `χ / η^2` up to the gauge
/// between the chain's final operator and `nf`, with `χ'/χ = k/p`.
pub fn weight_ratio_check(chain: &ChainResult, nf: &NaturalForm) -> Result<WeightRatio> {
    let base = &chain.operators[0];
    let fin = chain.final_operator();
    let m = chain.weight_multiplier();
    let drift = &(&log_weight_derivative(fin)? - &log_weight_derivative(base)?) - &m.log_derivative()?;
    if !drift.is_zero() {
        return Err(Error::Identity(format!("multiplier log-derivative residual {drift}")));
    }
    let nat = nf.operator();
    let gamma = &log_weight_derivative(fin)? - &log_weight_derivative(&nat)?;
    let gauge = rational_antilog(&gamma)
        .ok_or_else(|| Error::Identity(format!("final operator is not a rational gauge of the natural one: {gamma}")))?;
    let eta2 = RatFunc::from_poly(nf.eta.clone()).pow(2)?;
    let r = (&(&m * &eta2) / &gauge)?;
    let k_rf = &r.log_derivative()? * &RatFunc::from_poly(nf.p.clone());
    let k = k_rf
        .as_constant()
        .ok_or_else(|| Error::Identity(format!("p (log chi)' = {k_rf} is not constant")))?;
    let chi = rational_antilog(&(&RatFunc::constant(k.clone()) / &RatFunc::from_poly(nf.p.clone()))?);
    Ok(WeightRatio { k, multiplier: m, gauge_factor: gauge, chi })
}

/// Writes `z,W(z)` rows for the grid points inside the interval.
pub fn write_weight_csv<W: Write>(w: &WeightDescriptor, grid: &[Rat], prec: u32, out: W) -> Result<()> {
    let mut wr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
    let io = |e: csv::Error| Error::Input(e.to_string());
    wr.write_record(["z", "W(z)"]).map_err(io)?;
    for z in grid.iter().filter(|z| w.interval.contains(z)) {
        let v = w.eval(&rat_to_float(z, prec), prec);
        wr.write_record([rat::to_string(z), decimal(&v)]).map_err(io)?;
    }
    wr.flush().map_err(|e| Error::Input(e.to_string()))?;
    Ok(())
}
