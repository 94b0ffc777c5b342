//! Natural and reduced gauges, invariant polynomial subspaces, order
//! sequences and codimension bookkeeping.

use std::collections::BTreeSet;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::diffop::SecondOrderOp;
use crate::error::{Error, Result};
use crate::exact::linalg;
use crate::exact::rat::{self, int, rat, Rat};
use crate::exact::{Poly, RatFunc};

/// `T = p D^2 + (p'/2 + s - 2p η'/η) D + p η''/η + (p'/2 - s) η'/η`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NaturalForm {
    pub p: Poly,
    pub s: Poly,
    pub eta: Poly,
}

impl NaturalForm {
    pub fn new(p: Poly, s: Poly, eta: Poly) -> Result<Self> {
        if p.is_zero() || eta.is_zero() {
            return Err(Error::ZeroInput);
        }
        if p.degree_i64() > 2 || s.degree_i64() > 1 {
            return Err(Error::Input("natural form needs deg p <= 2, deg s <= 1".into()));
        }
        Ok(NaturalForm { p, s, eta: eta.monic() })
    }

    pub fn operator(&self) -> SecondOrderOp {
        let (q, r) = natural_qr(&self.p, &self.s, &RatFunc::from_poly(self.eta.clone()));
        SecondOrderOp::new(self.p.clone().into(), q, r).expect("p nonzero")
    }

    /// `2pη'y' - (pη'' + p'η'/2 - sη')y`.
    pub fn divisibility_form(&self, y: &Poly) -> Poly {
        let e1 = self.eta.derivative();
        let e2 = e1.derivative();
        let half = rat(1, 2);
        let c = &(&(&self.p * &e2) + &(&self.p.derivative() * &e1).scale(&half)) - &(&self.s * &e1);
        &(&(&self.p * &e1) * &y.derivative()).scale(&int(2)) - &(&c * y)
    }

    /// True iff `η` divides the divisibility form of `y`.
    pub fn in_subspace(&self, y: &Poly) -> bool {
        self.eta.divides(&self.divisibility_form(y))
    }
}

/// `q, r` of the natural form for rational `η` (used with gauge factors too).
fn natural_qr(p: &Poly, s: &Poly, eta: &RatFunc) -> (RatFunc, RatFunc) {
    let p = RatFunc::from_poly(p.clone());
    let s = RatFunc::from_poly(s.clone());
    let h = eta.log_derivative().expect("eta nonzero");
    let half_pp = p.derivative().scale(&rat(1, 2));
    let q = &(&half_pp + &s) - &(&p * &h).scale(&int(2));
    let e2 = (&eta.derivative().derivative() / eta).expect("eta nonzero");
    let r = &(&p * &e2) + &(&(&half_pp - &s) * &h);
    (q, r)
}

/// `2p(μ''/μ - (μ'/μ)^2) + p'μ'/μ`.
fn mu_terms(p: &Poly, mu: &Poly) -> RatFunc {
    let m = RatFunc::from_poly(mu.clone()).log_derivative().expect("mu nonzero");
    let p = RatFunc::from_poly(p.clone());
    &(&p * &m.derivative()).scale(&int(2)) + &(&p.derivative() * &m)
}

fn p_poly(t: &SecondOrderOp) -> Result<Poly> {
    let p = t.p.to_poly()?;
    if p.degree_i64() > 2 {
        return Err(Error::NotNatural(format!("deg p = {} > 2", p.degree_i64())));
    }
    Ok(p)
}

pub fn verify_natural(t: &SecondOrderOp, eta: &Poly) -> Result<NaturalForm> {
    if eta.is_zero() {
        return Err(Error::ZeroInput);
    }
    let p = p_poly(t)?;
    let eta_rf = RatFunc::from_poly(eta.clone());
    let h = eta_rf.log_derivative()?;
    let pr = RatFunc::from_poly(p.clone());
    let s = &(&t.q - &pr.derivative().scale(&rat(1, 2))) + &(&pr * &h).scale(&int(2));
    let s = s
        .as_poly()
        .filter(|s| s.degree_i64() <= 1)
        .cloned()
        .ok_or_else(|| Error::NotNatural(format!("s = {s}")))?;
    let nf = NaturalForm::new(p, s, eta.clone())?;
    let (_, r) = natural_qr(&nf.p, &nf.s, &eta_rf);
    let diff = &t.r - &r;
    if !diff.is_zero() {
        return Err(Error::NaturalR(diff.to_string()));
    }
    Ok(nf)
}

/// Finds monic `η` (deg <= `max_deg`) and `s` in P1 with
/// `q = p'/2 + s - 2pη'/η`.
///
/// Each root of `η` is a simple pole of `q` with residue `-2 p(ζ) ν`, so the
/// multiplicity classes are `gcd(d, N + 2ν p d')` where `N/d` is the proper
/// part of `q`.
pub fn infer_eta(t: &SecondOrderOp, max_deg: usize) -> Option<(Poly, Poly)> {
    let p = p_poly(t).ok()?;
    let d = t.q.den().clone();
    if !d.is_constant() && Poly::gcd(&d, &d.derivative()).degree() != Some(0) {
        return None;
    }
    let (_, n) = t.q.split_proper();
    let dd = d.derivative();
    let mut eta = Poly::one();
    let mut found = 0;
    let target = d.degree().unwrap_or(0);
    let mut nu = 1;
    while found < target && nu <= max_deg {
        let cand = &n + &(&p * &dd).scale(&int(2 * nu as i64));
        let g = Poly::gcd(&d, &cand);
        if let Some(k) = g.degree().filter(|&k| k > 0) {
            eta = &eta * &g.pow(nu);
            found += k;
        }
        nu += 1;
    }
    if found != target || eta.degree_i64() > max_deg as i64 {
        return None;
    }
    let pr = RatFunc::from_poly(p.clone());
    let h = RatFunc::from_poly(eta.clone()).log_derivative().ok()?;
    let s = &(&t.q - &pr.derivative().scale(&rat(1, 2))) + &(&pr * &h).scale(&int(2));
    let s = s.as_poly().filter(|s| s.degree_i64() <= 1)?.clone();
    Some((eta.monic(), s))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReducedForm {
    pub p: Poly,
    pub s: Poly,
    pub eta: Poly,
    pub mu: Poly,
    pub c: Rat,
}

impl ReducedForm {
    pub fn operator(&self) -> SecondOrderOp {
        let (q, r) = natural_qr(&self.p, &self.s, &RatFunc::from_poly(self.eta.clone()));
        let r = &(&r + &mu_terms(&self.p, &self.mu)) + &RatFunc::constant(self.c.clone());
        SecondOrderOp::new(self.p.clone().into(), q, r).expect("p nonzero")
    }
}

/// `prod f_i^{ν_i(ν_i-1)/2}` over the square-free decomposition of `η`.
pub fn mu_of(eta: &Poly) -> Result<Poly> {
    let (_, fs) = eta.squarefree_factor()?;
    Ok(fs
        .iter()
        .fold(Poly::one(), |acc, (f, nu)| &acc * &f.pow(nu * (nu - 1) / 2)))
}

pub fn reduced_form_check(t: &SecondOrderOp, max_deg: usize) -> Result<ReducedForm> {
    let (eta, s) = infer_eta(t, max_deg)
        .ok_or_else(|| Error::NotReduced("first-order coefficient has no natural η".into()))?;
    let p = t.p.to_poly()?;
    let mu = mu_of(&eta)?;
    let (_, r0) = natural_qr(&p, &s, &RatFunc::from_poly(eta.clone()));
    let resid = &(&t.r - &r0) - &mu_terms(&p, &mu);
    let c = resid
        .as_constant()
        .ok_or_else(|| Error::NotReduced(resid.to_string()))?;
    Ok(ReducedForm { p, s, eta, mu, c })
}

/// `μ T μ^{-1} - c` for a reduced operator; the result is natural with
/// `η μ`. The constant `c` is returned alongside.
pub fn gauge_to_natural(t_red: &SecondOrderOp, max_deg: usize) -> Result<(SecondOrderOp, NaturalForm, Rat)> {
    let rf = reduced_form_check(t_red, max_deg)?;
    let t = t_red
        .gauge_conjugate(&RatFunc::from_poly(rf.mu.clone()))?
        .plus_const(&-rf.c.clone());
    let nf = verify_natural(&t, &(&rf.eta * &rf.mu))?;
    Ok((t, nf, rf.c))
}

/// GCD of eigenpolynomials, taken in the given order until it has not
/// changed for `window` consecutive inputs.
pub fn stable_gcd(eigenpolys: &[Poly], window: usize) -> Poly {
    let mut g = Poly::zero();
    let mut same = 0;
    for y in eigenpolys {
        let next = Poly::gcd(&g, y);
        if next == g {
            same += 1;
            if same >= window {
                break;
            }
        } else {
            same = 0;
            g = next;
        }
    }
    if g.is_zero() {
        Poly::one()
    } else {
        g
    }
}

/// `σ = gcd(eigenpolys)` and `σ^{-1} T σ`.
pub fn to_reduced(t: &SecondOrderOp, eigenpolys: &[Poly], window: usize) -> Result<(Poly, SecondOrderOp)> {
    if eigenpolys.is_empty() {
        return Err(Error::Input("no eigenpolynomials supplied".into()));
    }
    let sigma = stable_gcd(eigenpolys, window);
    let t_red = t.gauge_conjugate(&RatFunc::from_poly(sigma.clone()).inv()?)?;
    Ok((sigma, t_red))
}

/// Degree-echelon basis of `U ∩ P_N`: distinct degrees, monic leading terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubspaceBasis {
    pub n: usize,
    pub basis: Vec<Poly>,
}

impl SubspaceBasis {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn codim(&self) -> usize {
        self.n + 1 - self.basis.len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.basis.iter().filter_map(Poly::degree).collect()
    }

    /// Degrees in `[0, N]` not realized.
    pub fn missing_degrees(&self) -> Vec<usize> {
        let have: BTreeSet<usize> = self.degrees().into_iter().collect();
        (0..=self.n).filter(|k| !have.contains(k)).collect()
    }

    /// Builds the basis from kernel vectors in monomial coordinates.
    fn from_kernel(n: usize, kernel: Vec<Vec<Rat>>) -> Self {
        if kernel.is_empty() {
            return SubspaceBasis { n, basis: vec![] };
        }
        // Reverse columns so pivots pick the highest degree first.
        let mut m: linalg::Matrix = kernel.into_iter().map(|v| v.into_iter().rev().collect()).collect();
        let piv = linalg::rref(&mut m);
        let mut basis: Vec<Poly> = m
            .into_iter()
            .take(piv.len())
            .map(|row| Poly::new(row.into_iter().rev().collect()))
            .collect();
        basis.sort_by_key(|p| p.degree());
        SubspaceBasis { n, basis }
    }

    /// Coordinates of `y` in the basis, if it lies in the span.
    pub fn coordinates(&self, y: &Poly) -> Option<Vec<Rat>> {
        let mut rest = y.clone();
        let mut coords = vec![rat::zero(); self.basis.len()];
        for (i, b) in self.basis.iter().enumerate().rev() {
            let d = b.degree().expect("nonzero basis");
            let c = rest.coeff(d);
            if !c.is_zero() {
                rest = &rest - &b.scale(&c);
                coords[i] = c;
            }
        }
        rest.is_zero().then_some(coords)
    }

    pub fn contains(&self, y: &Poly) -> bool {
        y.degree_i64() <= self.n as i64 && self.coordinates(y).is_some()
    }
}

fn monomial_matrix_from<F: Fn(&Poly) -> Vec<Rat>>(n: usize, rows_per: usize, f: F) -> linalg::Matrix {
    let cols: Vec<Vec<Rat>> = (0..=n).map(|m| f(&Poly::monomial(rat::one(), m))).collect();
    (0..rows_per)
        .map(|i| cols.iter().map(|c| c[i].clone()).collect())
        .collect()
}

/// Joint kernel of the divisibility functionals on `P_N`.
pub fn subspace_basis(nf: &NaturalForm, n: usize) -> SubspaceBasis {
    let k = nf.eta.degree().unwrap_or(0);
    if k == 0 {
        let basis = (0..=n).map(|m| Poly::monomial(rat::one(), m)).collect();
        return SubspaceBasis { n, basis };
    }
    let rows = monomial_matrix_from(n, k, |y| {
        let r = nf.divisibility_form(y).rem(&nf.eta).expect("eta nonzero");
        (0..k).map(|i| r.coeff(i)).collect()
    });
    SubspaceBasis::from_kernel(n, linalg::nullspace(&rows, n + 1))
}

/// Largest subspace `V ⊂ P_N` with `T V ⊂ V`, by fixed-point iteration.
/// Works for any operator with rational coefficients, natural or not.
pub fn invariant_subspace(t: &SecondOrderOp, n: usize) -> SubspaceBasis {
    let cols = n + 1;
    let images: Vec<RatFunc> = (0..=n).map(|m| t.apply_poly(&Poly::monomial(rat::one(), m))).collect();
    let den = images.iter().fold(Poly::one(), |a, f| Poly::lcm(&a, f.den()));
    let mut quos = Vec::with_capacity(cols);
    let mut rems = Vec::with_capacity(cols);
    for f in &images {
        let num = (f * &den).to_poly().expect("common denominator");
        let (q, r) = num.div_rem(&den).expect("den nonzero");
        quos.push(q);
        rems.push(r);
    }
    // Polynomiality of T y, and deg T y <= N.
    let dd = den.degree().unwrap_or(0);
    let top = quos.iter().filter_map(Poly::degree).max().unwrap_or(0).max(n);
    let mut base_rows: linalg::Matrix = (0..dd)
        .map(|i| rems.iter().map(|r| r.coeff(i)).collect())
        .collect();
    for i in n + 1..=top {
        base_rows.push(quos.iter().map(|q| q.coeff(i)).collect());
    }
    let mut constraints = base_rows.clone();
    let mut r = linalg::rank(&constraints);
    loop {
        // T y must also satisfy the current constraints.
        let mut next = base_rows.clone();
        next.extend(constraints.iter().cloned());
        for row in &constraints {
            next.push(
                (0..cols)
                    .map(|j| (0..cols).map(|i| &row[i] * quos[j].coeff(i)).sum())
                    .collect(),
            );
        }
        let mut reduced = next;
        let piv = linalg::rref(&mut reduced);
        reduced.truncate(piv.len());
        let nr = piv.len();
        constraints = reduced;
        if nr == r {
            break;
        }
        r = nr;
    }
    SubspaceBasis::from_kernel(n, linalg::nullspace(&constraints, cols))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrderSequence {
    /// Realized vanishing orders `<= cutoff`.
    pub orders: Vec<usize>,
    /// Number of gaps below `cutoff`.
    pub nu: usize,
    pub conclusive: bool,
}

impl OrderSequence {
    /// `{0, 2, ..., 2ν} ∪ [2ν+1, cutoff]` exactly.
    pub fn has_reduced_shape(&self, cutoff: usize) -> bool {
        let nu = self.nu;
        let expect: Vec<usize> = (0..=cutoff).filter(|&k| k > 2 * nu || k % 2 == 0).collect();
        self.orders == expect
    }
}

/// Orders of vanishing at `zeta` realized by the basis span.
pub fn order_sequence(basis: &SubspaceBasis, zeta: &Rat, cutoff: usize) -> OrderSequence {
    let n = basis.n;
    let mut m: linalg::Matrix = basis
        .basis
        .iter()
        .map(|y| {
            let t = y.taylor_shift(zeta);
            (0..=n).map(|i| t.coeff(i)).collect()
        })
        .collect();
    let piv = linalg::rref(&mut m);
    let orders: Vec<usize> = piv.into_iter().filter(|&o| o <= cutoff).collect();
    let nu = cutoff + 1 - orders.len();
    let codim = basis.codim();
    let conclusive = cutoff + codim <= n && cutoff >= 2 * codim;
    OrderSequence { orders, nu, conclusive }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PoleGap {
    pub zeta: PoleLocation,
    pub nu: usize,
    pub order_prefix: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PoleLocation {
    Rational(#[serde(with = "rat::serde_rat")] Rat),
    Factor { factor: Poly },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GapData {
    pub codim: usize,
    pub eta_degree: usize,
    pub poles: Vec<PoleGap>,
}

/// Codimension of the basis versus `deg η` and the per-pole gap counts.
pub fn codimension_report(eta: &Poly, basis: &SubspaceBasis) -> Result<GapData> {
    let deg = eta.degree().ok_or(Error::ZeroInput)?;
    if basis.n < 2 * deg + 2 {
        return Err(Error::Input(format!("cutoff {} below stabilization margin {}", basis.n, 2 * deg + 2)));
    }
    let codim = basis.codim();
    let mut poles = Vec::new();
    let mut total = 0;
    let (_, factors) = eta.squarefree_factor()?;
    let cutoff = basis.n - codim;
    for (f, mult) in &factors {
        let fd = f.degree().unwrap();
        let roots = f.rational_roots();
        for (zeta, _) in &roots {
            let os = order_sequence(basis, zeta, cutoff);
            if os.nu != *mult {
                return Err(Error::Identity(format!(
                    "gap count {} at {} differs from multiplicity {mult} in η",
                    os.nu,
                    rat::to_string(zeta)
                )));
            }
            total += os.nu;
            poles.push(PoleGap { zeta: PoleLocation::Rational(zeta.clone()), nu: os.nu, order_prefix: os.orders });
        }
        let rest = fd - roots.len();
        if rest > 0 {
            let irr = roots
                .iter()
                .fold(f.clone(), |acc, (z, _)| acc.div_exact(&Poly::linear_root(z)).expect("root divides"));
            total += rest * mult;
            poles.push(PoleGap { zeta: PoleLocation::Factor { factor: irr }, nu: rest * mult, order_prefix: vec![] });
        }
    }
    if codim != deg {
        return Err(Error::Identity(format!("codimension {codim} differs from deg η = {deg}")));
    }
    if total != deg {
        return Err(Error::Identity(format!("pole multiplicities sum to {total}, deg η = {deg}")));
    }
    Ok(GapData { codim, eta_degree: deg, poles })
}

/// `η | f'`; when true, also checks `f 𝓤 ⊂ 𝓤` on the basis.
pub fn stabilizer_check(f: &Poly, nf: &NaturalForm, basis: &SubspaceBasis) -> Result<bool> {
    if !nf.eta.divides(&f.derivative()) {
        return Ok(false);
    }
    for y in &basis.basis {
        let fy = f * y;
        if fy.degree_i64() <= basis.n as i64 && !nf.in_subspace(&fy) {
            return Err(Error::Identity(format!("multiplication by {f} leaves the subspace at {y}")));
        }
    }
    Ok(true)
}
