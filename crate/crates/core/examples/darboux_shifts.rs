//! A single rational Darboux step by hand, then the same through a chain.

use xop::classical::{bochner_operator, seed, Family, SeedKind};
use xop::darboux::{factorize, partner_by_laws, run_chain, verify_intertwining, DarbouxChain, QuasiRational};
use xop::exact::rat::{self, rat};
use xop::exact::RatFunc;

fn main() -> xop::Result<()> {
    let family = Family::laguerre(rat(1, 2));
    let t = bochner_operator(&family);
    let phi = seed(&family, SeedKind::III, 1)?;
    let q = QuasiRational::from(&phi);
    println!("T       = {t}");
    println!("seed w  = {}   lambda0 = {}", q.w, rat::to_string(&q.lambda));

    let f = factorize(&t, &q, &RatFunc::one())?;
    let partner = f.partner()?;
    println!("partner = {partner}");
    // The same partner from the closed-form transformation laws.
    assert_eq!(partner, partner_by_laws(&t, &q, &RatFunc::one())?);
    assert!(verify_intertwining(&partner, &f.a.to_diffop(), &t));

    let chain = DarbouxChain::new(family, &[xop::classical::SeedSpec { family: None, kind: SeedKind::III, n: 1 }]);
    let res = run_chain(&chain)?;
    println!("chain intertwiner order {:?}", res.intertwiner.order());
    println!("weight multiplier {}", res.weight_multiplier());
    Ok(())
}
