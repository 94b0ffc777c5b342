//! A polynomial operator with a Jordan block, next to a semi-simple
//! exceptional one.

use xop::classical::{bochner_operator, Family, SeedKind, SeedSpec};
use xop::darboux::DarbouxChain;
use xop::exact::rat::{self, int, rat};
use xop::spectral::semisimplicity_check;
use xop::structure::invariant_subspace;
use xop::system::construct;

fn main() -> xop::Result<()> {
    let t = bochner_operator(&Family::jacobi(int(0), int(-4)));
    let v = semisimplicity_check(&t, &invariant_subspace(&t, 6))?;
    println!("Jacobi(0,-4): semisimple = {}", v.semisimple);
    for d in &v.defects {
        println!(
            "  lambda {}: algebraic {} geometric {}, witness {} with T[w] = {}",
            rat::to_string(&d.lambda),
            d.algebraic,
            d.geometric,
            d.witness,
            t.apply_poly(&d.witness)
        );
    }

    let chain = DarbouxChain::new(Family::laguerre(rat(1, 2)), &[SeedSpec { family: None, kind: SeedKind::III, n: 1 }]);
    let c = construct(&chain, 8, 6)?;
    let v = semisimplicity_check(&c.natural.operator, &c.basis)?;
    println!("X1 Laguerre: semisimple = {} on a {}-dimensional truncation", v.semisimple, v.dim);
    Ok(())
}
