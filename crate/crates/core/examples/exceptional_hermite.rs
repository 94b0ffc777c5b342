//! Exceptional Hermite polynomials from two state-deleting seeds, compared
//! with the Wronskians they come from.

use xop::classical::{Family, SeedKind, SeedSpec};
use xop::darboux::DarbouxChain;
use xop::spectral::wronskian_family;
use xop::system::construct;

fn main() -> xop::Result<()> {
    let specs = [
        SeedSpec { family: None, kind: SeedKind::Polynomial, n: 1 },
        SeedSpec { family: None, kind: SeedKind::Polynomial, n: 2 },
    ];
    let chain = DarbouxChain::new(Family::Hermite, &specs);
    let c = construct(&chain, 8, 6)?;
    println!("eta = {}", c.natural.nf.eta);
    println!("missing degrees {:?}", c.system.exceptional_degrees);

    let seeds = specs.iter().map(|s| s.resolve(&Family::Hermite)).collect::<xop::Result<Vec<_>>>()?;
    let fam = wronskian_family(&Family::Hermite, &seeds, 10)?;
    for (d, e) in &c.system.eigenpairs {
        let w = fam.polys.get(d).map(|w| w.to_string()).unwrap_or_else(|| "-".into());
        println!("  deg {d}: {}\n          Wr = {w}", e.y);
    }
    Ok(())
}
