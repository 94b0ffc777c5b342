use num_traits::Zero;
use serde::Serialize;

use crate::diffop::SecondOrderOp;
use crate::error::{Error, Result};
use crate::exact::linalg;
use crate::exact::rat::{self, Rat};
use crate::exact::Poly;
use crate::structure::SubspaceBasis;

/// Eigenvalue whose geometric multiplicity falls short.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Defect {
    #[serde(with = "rat::serde_rat")]
    pub lambda: Rat,
    pub algebraic: usize,
    pub geometric: usize,
    /// Generalized eigenvector, monic.
    pub witness: Poly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SemisimplicityVerdict {
    pub semisimple: bool,
    /// Dimension of the truncation the matrix was built on.
    pub dim: usize,
    pub defects: Vec<Defect>,
}

/// Matrix of `T` on the members of `basis` whose image stays in `P_N`.
fn truncated_matrix(t: &SecondOrderOp, basis: &SubspaceBasis) -> Result<(usize, linalg::Matrix)> {
    let mut cols = vec![];
    for b in &basis.basis {
        let img = t.apply_poly(b).to_poly().map_err(|_| Error::NotInvariant(format!("T[{b}] is not a polynomial")))?;
        if img.degree_i64() > basis.n as i64 {
            break;
        }
        let c = basis
            .coordinates(&img)
            .ok_or_else(|| Error::NotInvariant(format!("T[{b}] leaves the span")))?;
        cols.push(c);
    }
    let m = cols.len();
    // Images of the first `m` members must stay among them.
    if cols.iter().any(|c| c[m..].iter().any(|x| !x.is_zero())) {
        return Err(Error::NotInvariant("truncation is not invariant".into()));
    }
    let mat = (0..m).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    Ok((m, mat))
}

fn kernel(m: &linalg::Matrix, n: usize) -> Vec<Vec<Rat>> {
    linalg::nullspace(m, n)
}

/// Compares algebraic and geometric multiplicities of `T` on the invariant
/// truncation spanned by `basis`.
pub fn semisimplicity_check(t: &SecondOrderOp, basis: &SubspaceBasis) -> Result<SemisimplicityVerdict> {
    let (m, mat) = truncated_matrix(t, basis)?;
    // Degree-echelon basis and degree-nonincreasing T give an upper
    // triangular matrix.
    for (i, row) in mat.iter().enumerate() {
        if row[..i].iter().any(|x| !x.is_zero()) {
            return Err(Error::NotInvariant("operator raises degree on the subspace".into()));
        }
    }
    let mut values: Vec<Rat> = (0..m).map(|i| mat[i][i].clone()).collect();
    values.sort();
    values.dedup();
    let mut defects = vec![];
    for lambda in values {
        let algebraic = (0..m).filter(|&i| mat[i][i] == lambda).count();
        let a = linalg::shift(&mat, &lambda);
        let k1 = kernel(&a, m);
        if k1.len() == algebraic {
            continue;
        }
        let a2 = linalg::mat_mul(&a, &a);
        let k2 = kernel(&a2, m);
        // A vector of ker(A^2) with no component along ker(A).
        let witness = k2
            .iter()
            .find(|v| !linalg::mat_vec(&a, v).iter().all(Zero::is_zero))
            .map(|_| {
                let mut rows = k1.clone();
                let top = linalg::rref(&mut rows).len();
                rows.truncate(top);
                let comb = pick_outside(&k2, &rows);
                let y = comb
                    .iter()
                    .zip(&basis.basis)
                    .fold(Poly::zero(), |acc, (c, b)| &acc + &b.scale(c));
                y.monic()
            })
            .expect("defective eigenvalue has a generalized eigenvector");
        defects.push(Defect { lambda, algebraic, geometric: k1.len(), witness });
    }
    Ok(SemisimplicityVerdict { semisimple: defects.is_empty(), dim: m, defects })
}

/// Some vector of `span(k2)` orthogonal to `span(k1)`, nonzero.
fn pick_outside(k2: &[Vec<Rat>], k1: &[Vec<Rat>]) -> Vec<Rat> {
    for v in k2 {
        let mut rows = k1.to_vec();
        let rhs: Vec<Rat> = rows.iter().map(|a| linalg::dot(a, v)).collect();
        let gram: linalg::Matrix = rows.iter().map(|a| k1.iter().map(|b| linalg::dot(a, b)).collect()).collect();
        let x = if rows.is_empty() { vec![] } else { linalg::solve(&gram, &rhs, rows.len()).expect("independent") };
        let mut out = v.clone();
        for (xi, a) in x.iter().zip(rows.iter_mut()) {
            for (o, ai) in out.iter_mut().zip(a.iter()) {
                *o -= xi * ai;
            }
        }
        if out.iter().any(|x| !x.is_zero()) {
            return out;
        }
    }
    unreachable!("ker(A^2) strictly contains ker(A)")
}
