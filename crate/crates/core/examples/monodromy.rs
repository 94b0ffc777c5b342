//! Trivial-monodromy certificates: exact at a rational pole, numeric at a
//! complex pair, and a perturbation that breaks it.

use xop::classical::{bochner_operator, Family, SeedKind, SeedSpec};
use xop::darboux::DarbouxChain;
use xop::diffop::SecondOrderOp;
use xop::exact::rat::{int, rat, Rat};
use xop::exact::{Poly, RatFunc};
use xop::spectral::{trivial_monodromy_certificate, NumericConfig};
use xop::system::construct;

fn show(label: &str, t: &SecondOrderOp, eta: &Poly, lambdas: &[Rat]) -> xop::Result<()> {
    let rep = trivial_monodromy_certificate(t, eta, None, lambdas, &NumericConfig::default())?;
    println!("{label}: {:?}", rep.verdict());
    for e in &rep.entries {
        println!("  {}", serde_json::to_string(e).expect("entry serializes"));
    }
    Ok(())
}

fn main() -> xop::Result<()> {
    let chain = DarbouxChain::new(Family::laguerre(rat(1, 2)), &[SeedSpec { family: None, kind: SeedKind::III, n: 1 }]);
    let c = construct(&chain, 8, 6)?;
    let lambdas: Vec<Rat> = (0..3).map(|k| int(-k)).collect();
    show("X1 Laguerre", &c.natural.operator, &c.natural.nf.eta, &lambdas)?;

    let sq = Poly::from_ints(&[1, 0, 1]);
    let h = bochner_operator(&Family::Hermite).gauge_conjugate(&RatFunc::from_poly(sq.clone()))?;
    let lambdas: Vec<Rat> = (0..3).map(|k| int(4 - 2 * k)).collect();
    show("Hermite conjugated by 1+z^2", &h, &sq, &lambdas)?;

    let bump = RatFunc::new(Poly::one(), sq.clone())?;
    let bent = SecondOrderOp::new(h.p.clone(), h.q.clone(), &h.r + &bump)?;
    show("perturbed", &bent, &sq, &lambdas)
}
