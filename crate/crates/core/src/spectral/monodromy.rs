//! Trivial-monodromy certificates at the poles of an operator.

use std::collections::BTreeMap;

use num_traits::Zero;
use rug::{Complex, Float};
use serde::Serialize;

use super::frobenius::frobenius_solutions;
use crate::diffop::SecondOrderOp;
use crate::error::{Error, Result};
use crate::exact::rat::{self, Rat};
use crate::exact::{Poly, RatFunc};
use crate::numeric::{self, cabs, complex_str, float_str, poly_to_complex, rat_to_float, roots::complex_roots};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NumericConfig {
    pub precision_bits: u32,
    pub pass_below: f64,
    pub fail_above: f64,
}

impl Default for NumericConfig {
    fn default() -> Self {
        NumericConfig { precision_bits: 256, pass_below: 1e-40, fail_above: 1e-10 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Numeric,
}

/// Ordered from best to worst so that `max` aggregates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// `p(ζ) = 0`: not a primary pole.
    Skipped,
    Pass,
    Inconclusive,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyEntry {
    pub zeta: String,
    pub nu: usize,
    pub method: Method,
    pub verdict: Verdict,
    /// Largest obstruction over the sampled eigenvalues.
    pub obstruction: Option<String>,
    pub indicial_roots: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonodromyReport {
    pub precision_bits: u32,
    pub lambdas: Vec<String>,
    pub entries: Vec<MonodromyEntry>,
}

impl MonodromyReport {
    pub fn verdict(&self) -> Verdict {
        self.entries.iter().map(|e| e.verdict).max().unwrap_or(Verdict::Pass).max(Verdict::Pass)
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }
}

pub fn default_depth(nu: usize) -> usize {
    2 * (2 * nu + 1) + 10
}

fn exact_entry(t: &SecondOrderOp, zeta: &Rat, nu: usize, depth: usize, lambdas: &[Rat]) -> MonodromyEntry {
    let mut entry = MonodromyEntry {
        zeta: rat::to_string(zeta),
        nu,
        method: Method::Exact,
        verdict: Verdict::Pass,
        obstruction: None,
        indicial_roots: vec![],
        note: None,
    };
    let mut worst: Option<Rat> = None;
    for lambda in lambdas {
        match frobenius_solutions(t, zeta, lambda, depth) {
            Ok(r) => {
                entry.indicial_roots = r.indicial_roots.iter().map(rat::to_string).collect();
                if let Some(o) = r.obstruction {
                    entry.verdict = Verdict::Fail;
                    if worst.as_ref().is_none_or(|w| rat::abs(&o) > rat::abs(w)) {
                        worst = Some(o);
                    }
                }
            }
            Err(e) => {
                entry.verdict = Verdict::Fail;
                entry.note = Some(e.to_string());
            }
        }
    }
    entry.obstruction = worst.map(|o| rat::to_string(&o));
    entry
}

/// Laurent coefficients of a rational function at a complex point, keyed by
/// exponent, for exponents `< ord + len`.
fn complex_laurent(f: &RatFunc, zeta: &Complex, len: usize, prec: u32) -> Option<BTreeMap<i64, Complex>> {
    if f.is_zero() {
        return None;
    }
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let strip = |p: &Poly| -> (usize, Vec<Complex>) {
        let c = numeric::taylor_shift(&poly_to_complex(p, prec), zeta);
        let scale = c.iter().map(cabs).fold(Float::with_val(prec, 0), |a, b| a.max(&b));
        let v = c.iter().position(|x| cabs(x) > Float::with_val(prec, &scale * &eps)).unwrap_or(0);
        (v, c[v..].to_vec())
    };
    let (vn, n) = strip(f.num());
    let (vd, d) = strip(f.den());
    let ord = vn as i64 - vd as i64;
    let s = numeric::series_div(&n, &d, len);
    Some(s.into_iter().enumerate().map(|(i, c)| (ord + i as i64, c)).collect())
}

struct NumLocal {
    p: Option<BTreeMap<i64, Complex>>,
    q: Option<BTreeMap<i64, Complex>>,
    r: Option<BTreeMap<i64, Complex>>,
    d: i64,
    prec: u32,
}

impl NumLocal {
    fn get(m: &Option<BTreeMap<i64, Complex>>, k: i64, prec: u32) -> Complex {
        m.as_ref()
            .and_then(|m| m.get(&k).cloned())
            .unwrap_or_else(|| Complex::with_val(prec, 0))
    }

    /// `F_j(s) = p_{j+2} s(s-1) + q_{j+1} s + r_j - λ δ_{j0}`.
    fn f(&self, j: i64, s: &Complex, lambda: &Complex) -> Complex {
        let prec = self.prec;
        let p = Self::get(&self.p, j + 2, prec);
        let q = Self::get(&self.q, j + 1, prec);
        let mut v = Self::get(&self.r, j, prec);
        let s1 = Complex::with_val(prec, s - 1u32);
        v += Complex::with_val(prec, &p * s) * s1;
        v += Complex::with_val(prec, &q * s);
        if j == 0 {
            v -= lambda;
        }
        v
    }
}

fn first_key(m: &Option<BTreeMap<i64, Complex>>) -> Option<i64> {
    m.as_ref().and_then(|m| m.keys().next().copied())
}

fn round_int(c: &Complex, tol: &Float) -> Option<i64> {
    let re = c.real().clone().round();
    let err = Complex::with_val(c.prec().0, c - &re);
    (cabs(&err) < *tol).then(|| re.to_f64() as i64)
}

fn numeric_entry(
    t: &SecondOrderOp,
    zeta: &Complex,
    nu: usize,
    depth: usize,
    lambdas: &[Rat],
    cfg: &NumericConfig,
) -> MonodromyEntry {
    let prec = cfg.precision_bits;
    let mut entry = MonodromyEntry {
        zeta: complex_str(zeta),
        nu,
        method: Method::Numeric,
        verdict: Verdict::Pass,
        obstruction: None,
        indicial_roots: vec![],
        note: None,
    };
    let tiny = Float::with_val(prec, Float::i_exp(1, -(prec as i32) / 2));
    let pz = numeric::eval(&poly_to_complex(t.p.num(), prec), zeta);
    if cabs(&pz) < tiny {
        entry.verdict = Verdict::Skipped;
        return entry;
    }
    let len = depth + 4;
    let mut loc = NumLocal {
        p: complex_laurent(&t.p, zeta, len, prec),
        q: complex_laurent(&t.q, zeta, len, prec),
        r: complex_laurent(&t.r, zeta, len, prec),
        d: 0,
        prec,
    };
    let d = [first_key(&loc.p).map(|k| k - 2), first_key(&loc.q).map(|k| k - 1), first_key(&loc.r)]
        .into_iter()
        .flatten()
        .min()
        .unwrap_or(0);
    if d != first_key(&loc.p).unwrap_or(0) - 2 {
        entry.verdict = Verdict::Fail;
        entry.note = Some(Error::NotRegularSingular(entry.zeta.clone()).to_string());
        return entry;
    }
    loc.d = d;
    let pass = Float::with_val(prec, cfg.pass_below);
    let fail = Float::with_val(prec, cfg.fail_above);
    let mut worst = Float::with_val(prec, 0);
    for lambda in lambdas {
        let lam = Complex::with_val(prec, (rat_to_float(lambda, prec), 0));
        // Indicial polynomial A s^2 + B s + C.
        let zero = Complex::with_val(prec, 0);
        let one = Complex::with_val(prec, 1);
        let c = loc.f(d, &zero, &lam);
        let a_plus_b = Complex::with_val(prec, loc.f(d, &one, &lam) - &c);
        let a = NumLocal::get(&loc.p, d + 2, prec);
        let b = Complex::with_val(prec, &a_plus_b - &a);
        let disc = Complex::with_val(prec, &b * &b) - Complex::with_val(prec, 4 * Complex::with_val(prec, &a * &c));
        let sq = disc.sqrt();
        let two_a = Complex::with_val(prec, &a * 2u32);
        let r1 = Complex::with_val(prec, (-b.clone() + &sq) / &two_a);
        let r2 = Complex::with_val(prec, (-b - &sq) / &two_a);
        let tol = Float::with_val(prec, 1e-30);
        let (Some(m1), Some(m2)) = (round_int(&r1, &tol), round_int(&r2, &tol)) else {
            entry.verdict = Verdict::Fail;
            entry.note = Some("non-integer local exponents".into());
            entry.indicial_roots = vec![complex_str(&r1), complex_str(&r2)];
            return entry;
        };
        let (hi, lo) = (m1.max(m2), m1.min(m2));
        entry.indicial_roots = vec![hi.to_string(), lo.to_string()];
        if hi == lo {
            entry.verdict = Verdict::Fail;
            entry.note = Some("repeated local exponent".into());
            return entry;
        }
        // Lower-root series up to the resonance.
        let n0 = (hi - lo) as usize;
        let mut coeffs = vec![one.clone()];
        let mut obstruction = Float::with_val(prec, 0);
        for n in 1..=n0.max(depth.saturating_sub(1)) {
            let mut s = Complex::with_val(prec, 0);
            for (k, ak) in coeffs.iter().enumerate() {
                let arg = Complex::with_val(prec, (lo + k as i64, 0));
                s += Complex::with_val(prec, ak * loc.f(d + (n - k) as i64, &arg, &lam));
            }
            if n == n0 {
                obstruction = cabs(&s);
                coeffs.push(Complex::with_val(prec, 0));
            } else {
                let arg = Complex::with_val(prec, (lo + n as i64, 0));
                coeffs.push(-s / loc.f(d, &arg, &lam));
            }
        }
        if obstruction > worst {
            worst = obstruction;
        }
    }
    entry.verdict = if worst < pass {
        Verdict::Pass
    } else if worst > fail {
        Verdict::Fail
    } else {
        entry.note = Some("inconclusive, raise precision".into());
        Verdict::Inconclusive
    };
    entry.obstruction = Some(float_str(&worst));
    entry
}

/// Checks every root `ζ` of `eta` with `p(ζ) != 0`: rational roots exactly,
/// the others numerically. `depth = None` uses `default_depth(ν)`.
pub fn trivial_monodromy_certificate(
    t: &SecondOrderOp,
    eta: &Poly,
    depth: Option<usize>,
    lambdas: &[Rat],
    cfg: &NumericConfig,
) -> Result<MonodromyReport> {
    let mut entries = vec![];
    if eta.degree().unwrap_or(0) > 0 {
        let (_, factors) = eta.squarefree_factor()?;
        for (f, nu) in factors {
            let depth = depth.unwrap_or_else(|| default_depth(nu));
            let mut rest = f.clone();
            for (z, _) in f.rational_roots() {
                rest = rest.div_exact(&Poly::linear_root(&z))?;
                if t.p.num().eval(&z).is_zero() {
                    entries.push(MonodromyEntry {
                        zeta: rat::to_string(&z),
                        nu,
                        method: Method::Exact,
                        verdict: Verdict::Skipped,
                        obstruction: None,
                        indicial_roots: vec![],
                        note: None,
                    });
                } else {
                    entries.push(exact_entry(t, &z, nu, depth, lambdas));
                }
            }
            for z in complex_roots(&rest, cfg.precision_bits) {
                entries.push(numeric_entry(t, &z, nu, depth, lambdas, cfg));
            }
        }
    }
    Ok(MonodromyReport {
        precision_bits: cfg.precision_bits,
        lambdas: lambdas.iter().map(rat::to_string).collect(),
        entries,
    })
}
