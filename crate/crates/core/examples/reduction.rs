//! Natural and reduced gauges when eta has a repeated root.
//!
//! At alpha = -7/4 the two-step Laguerre chain gives eta = (z + 3/4)^3. The
//! reduced gauge divides the eigenpolynomials by mu = z + 3/4.

use xop::classical::{Family, SeedKind, SeedSpec};
use xop::darboux::DarbouxChain;
use xop::exact::rat::{self, rat};
use xop::spectral::frobenius_solutions;
use xop::structure::{reduced_form_check, to_reduced};
use xop::system::{construct, GCD_WINDOW};

fn main() -> xop::Result<()> {
    let seeds = [
        SeedSpec { family: None, kind: SeedKind::I, n: 1 },
        SeedSpec { family: None, kind: SeedKind::III, n: 2 },
    ];
    let c = construct(&DarbouxChain::new(Family::laguerre(rat(-7, 4)), &seeds), 12, 6)?;
    let nat = c.natural.nf.operator();
    println!("natural eta = {}", c.natural.nf.eta);
    println!("natural T   = {nat}");

    let (sigma, t_red) = to_reduced(&nat, &c.system.eigenpolys(), GCD_WINDOW)?;
    let red = reduced_form_check(&t_red, 6)?;
    println!("common factor sigma = {sigma}");
    println!("reduced T = {t_red}");
    println!("reduced eta = {}, mu = {}, c = {}", red.eta, red.mu, rat::to_string(&red.c));

    let zeta = rat(-3, 4);
    for (name, t) in [("natural", &nat), ("reduced", &t_red)] {
        let f = frobenius_solutions(t, &zeta, &rat(0, 1), 20)?;
        let roots: Vec<String> = f.indicial_roots.iter().map(rat::to_string).collect();
        println!("{name:>8}: indicial roots at -3/4 {roots:?}, log-free {}", f.log_free());
    }
    Ok(())
}
