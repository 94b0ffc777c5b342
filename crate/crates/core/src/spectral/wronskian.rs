use std::collections::BTreeMap;

use crate::classical::{classical_poly, Family, Seed};
use crate::error::{Error, Result};
use crate::exact::{Poly, RatFunc};

/// `η` and the Wronskian polynomials indexed by their degree.
#[derive(Clone, Debug)]
pub struct WronskianFamily {
    pub eta: Poly,
    pub polys: BTreeMap<usize, Poly>,
    /// Classical index used for each degree.
    pub source_index: BTreeMap<usize, usize>,
}

/// A function `exp(∫g) P` as its polynomial part and prefactor log-derivative.
struct QuasiPoly {
    poly: Poly,
    g: RatFunc,
}

fn det(mut m: Vec<Vec<RatFunc>>) -> RatFunc {
    let n = m.len();
    let mut acc = RatFunc::one();
    for c in 0..n {
        let Some(piv) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return RatFunc::zero();
        };
        if piv != c {
            m.swap(piv, c);
            acc = -acc;
        }
        let pv = m[c][c].clone();
        acc = &acc * &pv;
        let inv = pv.inv().expect("nonzero pivot");
        for r in c + 1..n {
            if m[r][c].is_zero() {
                continue;
            }
            let f = &m[r][c] * &inv;
            for k in c..n {
                let t = &f * &m[c][k];
                m[r][k] = &m[r][k] - &t;
            }
        }
    }
    acc
}

/// Wronskian with the product of prefactors divided out. Row `i` holds
/// `exp(-∫g_i) f_i^{(j)}`, computed by `Q_{j+1} = Q_j' + g_i Q_j`.
fn stripped_wronskian(fs: &[QuasiPoly]) -> RatFunc {
    let n = fs.len();
    let rows = fs
        .iter()
        .map(|f| {
            let mut row = vec![RatFunc::from_poly(f.poly.clone())];
            for _ in 1..n {
                let q = row.last().unwrap();
                row.push(&q.derivative() + &(&f.g * q));
            }
            row
        })
        .collect();
    det(rows)
}

fn seed_qp(s: &Seed) -> QuasiPoly {
    QuasiPoly { poly: s.poly_part.clone(), g: s.g.clone() }
}

fn seeds_eta(seeds: &[Seed]) -> Result<Poly> {
    for i in 0..seeds.len() {
        for j in 0..i {
            let pair = [seed_qp(&seeds[j]), seed_qp(&seeds[i])];
            if stripped_wronskian(&pair).is_zero() {
                return Err(Error::DependentSeeds(j, i));
            }
        }
    }
    let w = stripped_wronskian(&seeds.iter().map(seed_qp).collect::<Vec<_>>());
    if w.is_zero() {
        return Err(Error::Identity("seed Wronskian vanishes".into()));
    }
    Ok(w.num().clone())
}

/// `Wr[y_k, φ_1, ..., φ_m]` with prefactors stripped; zero when `y_k`
/// is dependent on the seeds.
pub fn wronskian_poly(base: &Family, seeds: &[Seed], k: usize) -> Poly {
    let mut fs = vec![QuasiPoly { poly: classical_poly(base, k).poly, g: RatFunc::zero() }];
    fs.extend(seeds.iter().map(seed_qp));
    stripped_wronskian(&fs).num().clone()
}

/// `η = Wr[φ_1..φ_m]` and the Wronskians of classical polynomials of index
/// `0..=max_index` against the seeds, keyed by resulting degree.
pub fn wronskian_family(base: &Family, seeds: &[Seed], max_index: usize) -> Result<WronskianFamily> {
    let eta = if seeds.is_empty() { Poly::one() } else { seeds_eta(seeds)? };
    let mut polys = BTreeMap::new();
    let mut source_index = BTreeMap::new();
    for k in 0..=max_index {
        let y = wronskian_poly(base, seeds, k);
        if let Some(d) = y.degree() {
            polys.entry(d).or_insert_with(|| {
                source_index.insert(d, k);
                y
            });
        }
    }
    Ok(WronskianFamily { eta, polys, source_index })
}
