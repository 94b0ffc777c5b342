use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use serde::ser::SerializeMap;
use serde::Serialize;

use crate::diffop::SecondOrderOp;
use crate::error::Result;
use crate::exact::linalg;
use crate::exact::rat::{self, Rat};
use crate::exact::{Poly, RatFunc};
use crate::structure::NaturalForm;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EigenPair {
    pub k: usize,
    pub lambda: Rat,
    pub y: Poly,
}

/// Coefficient vectors of `(T - λ) z^m`, `m <= k`, with the denominators
/// cleared by a common factor. Returns one row per power of `z`.
fn shifted_system(t: &SecondOrderOp, lambda: &Rat, k: usize) -> linalg::Matrix {
    let shifted = t.plus_const(&-lambda.clone());
    let imgs: Vec<RatFunc> = (0..=k).map(|m| shifted.apply_poly(&Poly::monomial(rat::one(), m))).collect();
    let den = imgs.iter().fold(Poly::one(), |a, f| Poly::lcm(&a, f.den()));
    let nums: Vec<Poly> = imgs
        .iter()
        .map(|f| (f * &den).to_poly().expect("common denominator"))
        .collect();
    let top = nums.iter().filter_map(Poly::degree).max().unwrap_or(0);
    (0..=top).map(|i| nums.iter().map(|p| p.coeff(i)).collect()).collect()
}

/// Removes from `v` its component in `span(others)` (standard inner product).
fn orthogonalize(v: &[Rat], others: &[Vec<Rat>]) -> Vec<Rat> {
    if others.is_empty() {
        return v.to_vec();
    }
    let gram: linalg::Matrix = others
        .iter()
        .map(|a| others.iter().map(|b| linalg::dot(a, b)).collect())
        .collect();
    let rhs: Vec<Rat> = others.iter().map(|a| linalg::dot(a, v)).collect();
    let x = linalg::solve(&gram, &rhs, others.len()).expect("independent vectors");
    let mut out = v.to_vec();
    for (xi, a) in x.iter().zip(others) {
        for (o, ai) in out.iter_mut().zip(a) {
            *o -= xi * ai;
        }
    }
    out
}

/// Vector in `span(basis)` with `v[k] = 1`, orthogonal to the part of the
/// span with `v[k] = 0`. `None` if every vector has `v[k] = 0`.
pub(crate) fn pick_with_top(basis: &[Vec<Rat>], k: usize) -> Option<Vec<Rat>> {
    let pos = basis.iter().position(|v| !v[k].is_zero())?;
    let lead = basis[pos].clone();
    let inv = rat::one() / &lead[k];
    let lead: Vec<Rat> = lead.iter().map(|x| x * &inv).collect();
    let lower: Vec<Vec<Rat>> = basis
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != pos)
        .map(|(_, v)| {
            let c = &v[k];
            v.iter().zip(&lead).map(|(a, b)| a - c * b).collect()
        })
        .collect();
    // `lower` spans the vectors with zero k-th entry.
    let mut reduced = lower.clone();
    let piv = linalg::rref(&mut reduced);
    reduced.truncate(piv.len());
    Some(orthogonalize(&lead, &reduced))
}

/// Eigenpolynomials of every degree `k <= n` for which one exists, with
/// `λ_k = σ(k)` from the symbol.
pub fn eigenpairs(t: &SecondOrderOp, n: usize) -> Result<BTreeMap<usize, EigenPair>> {
    let sigma = t.symbol_poly()?;
    let mut out = BTreeMap::new();
    for k in 0..=n {
        let lambda = sigma.eval(&rat::int(k as i64));
        let m = shifted_system(t, &lambda, k);
        let kernel = linalg::nullspace(&m, k + 1);
        if let Some(v) = pick_with_top(&kernel, k) {
            out.insert(k, EigenPair { k, lambda, y: Poly::new(v) });
        }
    }
    Ok(out)
}

/// Operator with its natural data and polynomial eigenfunctions up to a bound.
#[derive(Clone, Debug)]
pub struct ExceptionalSystem {
    pub t: SecondOrderOp,
    pub nf: Option<NaturalForm>,
    pub bound: usize,
    pub exceptional_degrees: BTreeSet<usize>,
    pub eigenpairs: BTreeMap<usize, EigenPair>,
}

impl ExceptionalSystem {
    pub fn build(t: &SecondOrderOp, nf: Option<NaturalForm>, n: usize) -> Result<Self> {
        let eigenpairs = eigenpairs(t, n)?;
        let exceptional_degrees = (0..=n).filter(|k| !eigenpairs.contains_key(k)).collect();
        Ok(ExceptionalSystem { t: t.clone(), nf, bound: n, exceptional_degrees, eigenpairs })
    }

    pub fn eigenpolys(&self) -> Vec<Poly> {
        self.eigenpairs.values().map(|e| e.y.clone()).collect()
    }

    pub fn eta(&self) -> Poly {
        self.nf.as_ref().map_or_else(Poly::one, |nf| nf.eta.clone())
    }

    pub fn s(&self) -> Option<&Poly> {
        self.nf.as_ref().map(|nf| &nf.s)
    }
}

impl Serialize for ExceptionalSystem {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Eig<'a>(&'a BTreeMap<usize, EigenPair>);
        impl Serialize for Eig<'_> {
            fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut m = s.serialize_map(Some(self.0.len()))?;
                for (k, e) in self.0 {
                    m.serialize_entry(&k.to_string(), &e.y)?;
                }
                m.end()
            }
        }
        let mut m = s.serialize_map(None)?;
        m.serialize_entry("operator", &self.t)?;
        m.serialize_entry("eta", &self.eta())?;
        m.serialize_entry("s", &self.s())?;
        if let Some(nf) = &self.nf {
            m.serialize_entry("p", &nf.p)?;
        }
        m.serialize_entry("bound", &self.bound)?;
        m.serialize_entry("exceptional_degrees", &self.exceptional_degrees)?;
        m.serialize_entry("eigenpolys", &Eig(&self.eigenpairs))?;
        m.end()
    }
}
