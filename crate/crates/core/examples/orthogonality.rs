//! Weight, regularity and Gram matrix of the two-step Laguerre family.
//! Inside -2 < alpha < -1 the weight is regular; at alpha = -1/2 eta has a
//! root on the half-line.

use xop::classical::{Family, SeedKind, SeedSpec};
use xop::darboux::DarbouxChain;
use xop::exact::rat::{rat, Rat};
use xop::quadform::{decimal, gram_matrix, regularity_check, weight_of, QuadConfig};
use xop::system::construct;

fn chain(alpha: Rat) -> DarbouxChain {
    let seeds = [
        SeedSpec { family: None, kind: SeedKind::I, n: 1 },
        SeedSpec { family: None, kind: SeedKind::III, n: 2 },
    ];
    DarbouxChain::new(Family::laguerre(alpha), &seeds)
}

fn main() -> xop::Result<()> {
    for alpha in [rat(-3, 2), rat(-1, 2)] {
        let c = construct(&chain(alpha.clone()), 6, 6)?;
        let w = weight_of(&c.natural.operator, &c.natural.nf)?;
        let v = regularity_check(&w);
        println!("alpha = {alpha}: regular = {}  {:?}", v.regular, v.failures);
        if !v.regular {
            continue;
        }
        let degrees: Vec<usize> = c.system.eigenpairs.keys().copied().take(4).collect();
        let g = gram_matrix(&c.system, &w, &degrees, &QuadConfig::default())?;
        for (i, row) in g.matrix.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(|x| format!("{:.12e}", x.to_f64())).collect();
            println!("  {:>2}: {}", degrees[i], cells.join("  "));
        }
        println!("  largest normalized off-diagonal {}", decimal(&g.max_offdiag));
    }
    Ok(())
}
