//! Double-exponential quadrature in arbitrary precision, vector valued.

use rug::float::Constant;
use rug::Float;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub enum Domain {
    Finite(Float, Float),
    /// `(a, ∞)`
    Above(Float),
    /// `(-∞, b)`
    Below(Float),
    Real,
}

/// Abscissa plus exact distances to finite endpoints, so that endpoint
/// singularities are evaluated without cancellation.
#[derive(Clone, Debug)]
pub struct Node {
    pub x: Float,
    pub from_lo: Option<Float>,
    pub to_hi: Option<Float>,
}

#[derive(Clone, Debug)]
pub struct QuadSettings {
    pub prec: u32,
    pub rel_tol: f64,
    pub max_levels: usize,
}

const T_CAP: f64 = 10.0;

/// Node and Jacobian weight at parameter `t`.
fn node(dom: &Domain, t: &Float, prec: u32) -> (Node, Float) {
    let half_pi = Float::with_val(prec, Constant::Pi) / 2u32;
    let u = Float::with_val(prec, t.sinh_ref()) * &half_pi;
    let dudt = Float::with_val(prec, t.cosh_ref()) * &half_pi;
    match dom {
        Domain::Finite(a, b) => {
            let h = Float::with_val(prec, b - a) / 2u32;
            // 1 + tanh u = 2 / (1 + e^{-2u}), 1 - tanh u = 2 / (1 + e^{2u}).
            let e = Float::with_val(prec, &u * 2u32).exp();
            let lo = Float::with_val(prec, &h * 2u32) / (Float::with_val(prec, e.recip_ref()) + 1u32);
            let hi = Float::with_val(prec, &h * 2u32) / (e + 1u32);
            let x = Float::with_val(prec, a + &lo);
            let c = Float::with_val(prec, u.cosh_ref());
            let w = h * dudt / Float::with_val(prec, &c * &c);
            (Node { x, from_lo: Some(lo), to_hi: Some(hi) }, w)
        }
        Domain::Above(a) => {
            let d = u.exp();
            let w = Float::with_val(prec, &d * &dudt);
            (Node { x: Float::with_val(prec, a + &d), from_lo: Some(d), to_hi: None }, w)
        }
        Domain::Below(b) => {
            let d = u.exp();
            let w = Float::with_val(prec, &d * &dudt);
            (Node { x: Float::with_val(prec, b - &d), from_lo: None, to_hi: Some(d) }, w)
        }
        Domain::Real => {
            let x = Float::with_val(prec, u.sinh_ref());
            let w = Float::with_val(prec, u.cosh_ref()) * dudt;
            (Node { x, from_lo: None, to_hi: None }, w)
        }
    }
}

fn max_abs(v: &[Float], prec: u32) -> Float {
    v.iter()
        .map(|x| Float::with_val(prec, x.abs_ref()))
        .fold(Float::with_val(prec, 0), |a, b| a.max(&b))
}

/// `∫ f` over `dom` for a vector-valued integrand of length `dim`.
/// Returns the estimate and the last level-to-level change.
pub fn integrate<F>(dom: &Domain, dim: usize, s: &QuadSettings, mut f: F) -> Result<(Vec<Float>, Float)>
where
    F: FnMut(&Node) -> Vec<Float>,
{
    let prec = s.prec;
    let eps = Float::with_val(prec, Float::i_exp(1, -(prec as i32)));
    let mut sum = vec![Float::with_val(prec, 0); dim];
    let mut peak = Float::with_val(prec, 0);
    let mut prev: Option<Vec<Float>> = None;
    let mut last_change = Float::with_val(prec, 0);
    for level in 0..=s.max_levels {
        let h = Float::with_val(prec, Float::i_exp(1, -(level as i32)));
        // Level 0 visits every integer; later levels only the new odd points.
        let (start, step) = if level == 0 { (0i64, 1i64) } else { (1, 2) };
        for dir in [1i64, -1] {
            let mut k = if level == 0 && dir == -1 { 1 } else { start };
            let mut quiet = 0;
            loop {
                let t = Float::with_val(prec, &h * (dir * k));
                if t.to_f64().abs() > T_CAP {
                    break;
                }
                let (nd, w) = node(dom, &t, prec);
                let vals = f(&nd);
                let term: Vec<Float> = vals.into_iter().map(|v| v * &w).collect();
                let size = max_abs(&term, prec);
                if size.is_nan() {
                    return Err(Error::Quadrature(format!("integrand not finite near x = {}", nd.x.to_f64())));
                }
                if size > peak {
                    peak = size.clone();
                }
                for (a, b) in sum.iter_mut().zip(&term) {
                    *a += b;
                }
                if size <= Float::with_val(prec, &peak * &eps) {
                    quiet += 1;
                    if quiet >= 3 {
                        break;
                    }
                } else {
                    quiet = 0;
                }
                k += step;
            }
        }
        let est: Vec<Float> = sum.iter().map(|x| Float::with_val(prec, x * &h)).collect();
        if let Some(p) = &prev {
            let diff: Vec<Float> = est.iter().zip(p).map(|(a, b)| Float::with_val(prec, a - b)).collect();
            last_change = max_abs(&diff, prec);
            // Integrals that cancel to zero are judged against term size.
            let scale = max_abs(&est, prec).max(&Float::with_val(prec, &peak * &h));
            if level >= 3 && last_change <= scale * s.rel_tol {
                return Ok((est, last_change));
            }
        }
        prev = Some(est);
    }
    Err(Error::Quadrature(format!(
        "no convergence after {} levels; last change {}",
        s.max_levels,
        super::float_str(&last_change)
    )))
}
