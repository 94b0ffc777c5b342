//! Complex roots of rational polynomials by simultaneous iteration.

use rug::ops::Pow;
use rug::{Complex, Float};

use super::{cabs, eval, poly_to_complex};
use crate::exact::Poly;

/// All roots of a squarefree `p`, to roughly `prec` bits.
pub fn complex_roots(p: &Poly, prec: u32) -> Vec<Complex> {
    let Some(n) = p.degree() else { return vec![] };
    if n == 0 {
        return vec![];
    }
    let work = prec + 32;
    let mut c = poly_to_complex(&p.monic(), work);
    // Cauchy bound for the starting circle.
    let bound = c[..n].iter().map(cabs).fold(Float::with_val(work, 0), |a, b| a.max(&b)) + 1u32;
    let seed = Complex::with_val(work, (0.4, 0.9));
    let mut z: Vec<Complex> = (0..n)
        .map(|k| Complex::with_val(work, seed.clone().pow(k as u32) * &bound))
        .collect();
    c.truncate(n + 1);
    let tol = Float::with_val(work, Float::i_exp(1, -(prec as i32)));
    for _ in 0..2000 {
        let mut worst = Float::with_val(work, 0);
        for i in 0..n {
            let mut den = Complex::with_val(work, 1);
            for j in 0..n {
                if i != j {
                    den *= Complex::with_val(work, &z[i] - &z[j]);
                }
            }
            let step = eval(&c, &z[i]) / den;
            let size = cabs(&step) / (cabs(&z[i]) + 1u32);
            if size > worst {
                worst = size;
            }
            z[i] -= step;
        }
        if worst < tol {
            break;
        }
    }
    for r in &mut z {
        r.set_prec(prec);
    }
    // Quantized keys keep the order stable under rounding noise.
    let key = |x: &Float| -> rug::Integer {
        Float::with_val(prec, x * Float::with_val(prec, Float::i_exp(1, 64)))
            .round()
            .to_integer()
            .unwrap()
    };
    z.sort_by_key(|a| (key(a.real()), key(a.imag())));
    z
}
