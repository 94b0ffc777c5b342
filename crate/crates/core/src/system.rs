//! From an operator with polynomial eigenfunctions to its natural gauge.

use serde::Serialize;

use crate::darboux::{run_chain, ChainResult, DarbouxChain};
use crate::diffop::SecondOrderOp;
use crate::error::Result;
use crate::exact::rat::{self, Rat};
use crate::exact::{Poly, RatFunc};
use crate::spectral::{eigenpairs, ExceptionalSystem};
use crate::structure::{
    codimension_report, gauge_to_natural, invariant_subspace, reduced_form_check, subspace_basis, to_reduced, GapData, NaturalForm,
    SubspaceBasis,
};

pub const GCD_WINDOW: usize = 5;

/// Gauge data linking an operator `T` to its natural form:
/// `T_nat = factor T factor^{-1} - shift`, so `y_nat = factor y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Naturalized {
    pub operator: SecondOrderOp,
    pub nf: NaturalForm,
    /// Common factor of the eigenpolynomials that was divided out.
    pub sigma: Poly,
    pub mu: Poly,
    pub factor: RatFunc,
    #[serde(with = "rat::serde_rat")]
    pub shift: Rat,
}

/// Eigenpolynomials up to degree `n` fix the reduced gauge; the reduced
/// operator is then conjugated to the natural one.
pub fn naturalize(t: &SecondOrderOp, n: usize, max_eta_degree: usize) -> Result<Naturalized> {
    let pairs = eigenpairs(t, n)?;
    let ys: Vec<Poly> = pairs.values().map(|e| e.y.clone()).collect();
    let (sigma, t_red) = to_reduced(t, &ys, GCD_WINDOW)?;
    let mu = reduced_form_check(&t_red, max_eta_degree)?.mu;
    let (operator, nf, shift) = gauge_to_natural(&t_red, max_eta_degree)?;
    let factor = (&RatFunc::from_poly(mu.clone()) / &RatFunc::from_poly(sigma.clone()))?;
    Ok(Naturalized { operator, nf, sigma, mu, factor, shift })
}

/// The invariant subspace of a natural operator: the divisibility kernel when
/// its codimension is `deg η`, otherwise the general fixed-point iteration.
pub fn natural_subspace(nf: &NaturalForm, n: usize) -> SubspaceBasis {
    let b = subspace_basis(nf, n);
    if b.codim() == nf.eta.degree().unwrap_or(0) {
        b
    } else {
        invariant_subspace(&nf.operator(), n)
    }
}

/// Everything the construct command reports about a chain.
#[derive(Clone, Debug)]
pub struct ConstructedSystem {
    pub chain: ChainResult,
    pub natural: Naturalized,
    pub system: ExceptionalSystem,
    pub basis: SubspaceBasis,
    pub gaps: Result<GapData>,
}

pub fn construct(chain: &DarbouxChain, n: usize, max_eta_degree: usize) -> Result<ConstructedSystem> {
    let res = run_chain(chain)?;
    let probe = n.max(2 * max_eta_degree + 2);
    let natural = naturalize(res.final_operator(), probe, max_eta_degree)?;
    let system = ExceptionalSystem::build(&natural.operator, Some(natural.nf.clone()), n)?;
    let margin = 2 * natural.nf.eta.degree().unwrap_or(0) + 2;
    let basis = natural_subspace(&natural.nf, n.max(margin));
    let gaps = codimension_report(&natural.nf.eta, &basis);
    Ok(ConstructedSystem { chain: res, natural, system, basis, gaps })
}
