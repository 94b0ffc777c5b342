//! Frobenius series at rational points.

use num_traits::Zero;

use crate::diffop::{LocalExpansion, SecondOrderOp};
use crate::error::{Error, Result};
use crate::exact::rat::{self, Rat};
use crate::exact::Poly;

/// `y = Σ a_j (z - ζ)^{m + j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusSolution {
    pub zeta: Rat,
    pub indicial_root: Rat,
    pub coefficients: Vec<Rat>,
    pub lambda: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusReport {
    /// Larger root first.
    pub indicial_roots: [Rat; 2],
    pub solutions: Vec<FrobeniusSolution>,
    /// Value forcing a logarithm in the second solution, if any.
    pub obstruction: Option<Rat>,
}

impl FrobeniusReport {
    pub fn log_free(&self) -> bool {
        self.obstruction.is_none() && self.solutions.len() == 2
    }
}

/// `F_j(s)` for the local pieces of `T - λ`.
struct Recursion<'a> {
    le: &'a LocalExpansion,
    lambda: &'a Rat,
}

impl Recursion<'_> {
    fn f(&self, j: i64, s: &Rat) -> Rat {
        let mut v = self.le.term(j).on_power(s);
        if j == 0 {
            v -= self.lambda;
        }
        v
    }

    /// `Σ_{k<n} a_k F_{d+n-k}(m+k)`.
    fn sum(&self, a: &[Rat], m: &Rat, n: usize) -> Rat {
        let d = self.le.d;
        (0..n)
            .filter(|&k| !a[k].is_zero())
            .map(|k| &a[k] * self.f(d + (n - k) as i64, &(m + rat::int(k as i64))))
            .sum()
    }
}

fn indicial_poly(le: &LocalExpansion, lambda: &Rat) -> Poly {
    let t = le.leading();
    let r = if le.d == 0 { &t.r - lambda } else { t.r.clone() };
    // p s(s-1) + q s + r
    Poly::new(vec![r, &t.q - &t.p, t.p.clone()])
}

/// Two Frobenius series of `T y = λ y` at `zeta` to `depth` terms, or the
/// obstruction at the resonant index.
pub fn frobenius_solutions(t: &SecondOrderOp, zeta: &Rat, lambda: &Rat, depth: usize) -> Result<FrobeniusReport> {
    let ordp = t.p.order_at(zeta)?;
    // Enough local terms for `depth` coefficients.
    let probe = t.local_expansion(zeta, 0.max(ordp - 2))?;
    let d = probe.d;
    if d != ordp - 2 {
        return Err(Error::NotRegularSingular(rat::to_string(zeta)));
    }
    let le = t.local_expansion(zeta, d + depth as i64 + 1)?;
    let ind = indicial_poly(&le, lambda);
    let roots = ind.rational_roots();
    let mut rs: Vec<Rat> = roots.iter().flat_map(|(r, m)| std::iter::repeat_n(r.clone(), *m)).collect();
    if rs.len() != 2 {
        return Err(Error::Input(format!(
            "indicial polynomial {ind} at {} has irrational roots",
            rat::to_string(zeta)
        )));
    }
    rs.sort();
    let (lo, hi) = (rs[0].clone(), rs[1].clone());
    let rec = Recursion { le: &le, lambda };
    let series = |m: &Rat| -> (Vec<Rat>, Option<Rat>) {
        let mut a = vec![rat::one()];
        let mut obstruction = None;
        for n in 1..depth {
            let s = rec.sum(&a, m, n);
            let fd = rec.f(d, &(m + rat::int(n as i64)));
            if fd.is_zero() {
                if !s.is_zero() && obstruction.is_none() {
                    obstruction = Some(s);
                }
                a.push(rat::zero());
            } else {
                a.push(-s / fd);
            }
        }
        (a, obstruction)
    };
    let mk = |m: &Rat, a: Vec<Rat>| FrobeniusSolution {
        zeta: zeta.clone(),
        indicial_root: m.clone(),
        coefficients: a,
        lambda: lambda.clone(),
    };
    let (a_hi, _) = series(&hi);
    let mut solutions = vec![mk(&hi, a_hi)];
    let obstruction = if lo == hi {
        // Repeated root: the second solution always has a logarithm.
        Some(rat::one())
    } else {
        let (a_lo, obs) = series(&lo);
        if obs.is_none() {
            solutions.push(mk(&lo, a_lo));
        }
        obs
    };
    Ok(FrobeniusReport { indicial_roots: [hi, lo], solutions, obstruction })
}

/// Residual of the recursion at every computed index; zero when the
/// coefficients are consistent.
pub fn recursion_residuals(t: &SecondOrderOp, sol: &FrobeniusSolution) -> Result<Vec<Rat>> {
    let depth = sol.coefficients.len();
    let ordp = t.p.order_at(&sol.zeta)?;
    let le = t.local_expansion(&sol.zeta, ordp - 2 + depth as i64 + 1)?;
    let rec = Recursion { le: &le, lambda: &sol.lambda };
    let m = &sol.indicial_root;
    Ok((0..depth)
        .map(|n| {
            &sol.coefficients[n] * rec.f(le.d, &(m + rat::int(n as i64))) + rec.sum(&sol.coefficients, m, n)
        })
        .collect())
}
