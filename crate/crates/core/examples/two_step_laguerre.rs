//! Two-step Laguerre chain with a type I and a type III seed at alpha = -3/2.
//!
//! Prints the natural data, the exceptional degrees and the first
//! eigenpolynomials.
//!
//!     cargo run --example two_step_laguerre [alpha]

use xop::classical::{Family, SeedKind, SeedSpec};
use xop::darboux::DarbouxChain;
use xop::exact::rat;
use xop::system::construct;

fn main() -> xop::Result<()> {
    let alpha = rat::parse(&std::env::args().nth(1).unwrap_or_else(|| "-3/2".into()))?;
    let seeds = [
        SeedSpec { family: None, kind: SeedKind::I, n: 1 },
        SeedSpec { family: None, kind: SeedKind::III, n: 2 },
    ];
    let chain = DarbouxChain::new(Family::laguerre(alpha), &seeds);
    let c = construct(&chain, 8, 6)?;
    let nf = &c.natural.nf;
    println!("eta = {}", nf.eta);
    println!("s   = {}", nf.s);
    println!("exceptional degrees: {:?}", c.system.exceptional_degrees);
    if let Ok(g) = &c.gaps {
        println!("codimension {} (deg eta = {})", g.codim, g.eta_degree);
    }
    for e in c.system.eigenpairs.values() {
        println!("  k = {:>2}  lambda = {:>4}  y = {}", e.k, rat::to_string(&e.lambda), e.y);
    }
    Ok(())
}
