//! Real root counting with Sturm sequences.

use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::interval::Interval;
use super::poly::Poly;
use super::rat::Rat;

/// Sturm chain `p, p', -rem(..), ...`, each term rescaled by a positive
/// constant to primitive integer form so coefficients stay small.
pub fn sturm_chain(p: &Poly) -> Vec<Poly> {
    let mut chain = vec![p.primitive_sign_preserving()];
    let d = p.derivative();
    if d.is_zero() {
        return chain;
    }
    chain.push(d.primitive_sign_preserving());
    loop {
        let n = chain.len();
        let r = chain[n - 2].rem(&chain[n - 1]).expect("nonzero");
        if r.is_zero() {
            break;
        }
        chain.push((-r).primitive_sign_preserving());
    }
    chain
}

fn sign(x: &Rat) -> i8 {
    match x.cmp(&Rat::zero()) {
        Ordering::Less => -1,
        Ordering::Equal => 0,
        Ordering::Greater => 1,
    }
}

fn sign_at_infinity(p: &Poly, positive: bool) -> i8 {
    let s = sign(&p.leading());
    let odd = p.degree().unwrap_or(0) % 2 == 1;
    if !positive && odd {
        -s
    } else {
        s
    }
}

fn variations(signs: impl Iterator<Item = i8>) -> usize {
    let mut last = 0i8;
    let mut v = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            v += 1;
        }
        last = s;
    }
    v
}

fn variations_at(chain: &[Poly], x: Option<&Rat>, positive: bool) -> usize {
    match x {
        Some(x) => variations(chain.iter().map(|q| sign(&q.eval(x)))),
        None => variations(chain.iter().map(|q| sign_at_infinity(q, positive))),
    }
}

/// Number of distinct real roots of `p` in `interval`. Panics on zero `p`.
pub fn sturm_count(p: &Poly, interval: &Interval) -> usize {
    assert!(!p.is_zero(), "sturm_count of the zero polynomial");
    let mut f = p.squarefree_part();
    let mut endpoint_roots = 0;
    for (end, closed) in [(&interval.lo, interval.lo_closed), (&interval.hi, interval.hi_closed)] {
        if let Some(a) = end {
            let (g, m) = f.strip_root(a);
            if m > 0 {
                f = g;
                if closed {
                    endpoint_roots += 1;
                }
            }
        }
    }
    if f.is_constant() {
        return endpoint_roots;
    }
    let chain = sturm_chain(&f);
    let va = variations_at(&chain, interval.lo.as_ref(), false);
    let vb = variations_at(&chain, interval.hi.as_ref(), true);
    va - vb + endpoint_roots
}

/// Disjoint rational intervals `(a, b]`, each containing exactly one real
/// root of `p`, refined until width `< tol`.
pub fn isolate_real_roots(p: &Poly, tol: &Rat) -> Vec<(Rat, Rat)> {
    let f = p.squarefree_part();
    if f.is_constant() {
        return vec![];
    }
    // Cauchy bound.
    let lc = f.leading().abs();
    let bound = f
        .coeffs()
        .iter()
        .map(|c| c.abs() / &lc)
        .fold(Rat::zero(), |a, b| if b > a { b } else { a })
        + Rat::from_integer(1.into());
    let chain = sturm_chain(&f);
    let count = |a: &Rat, b: &Rat| {
        variations_at(&chain, Some(a), false) - variations_at(&chain, Some(b), true)
    };
    let mut out = Vec::new();
    let mut stack = vec![(-bound.clone(), bound)];
    while let Some((a, b)) = stack.pop() {
        let n = count(&a, &b);
        if n == 0 {
            continue;
        }
        if n == 1 && &b - &a < *tol {
            out.push((a, b));
            continue;
        }
        let m = (&a + &b) / Rat::from_integer(2.into());
        stack.push((m.clone(), b));
        stack.push((a, m));
    }
    out.sort();
    out
}
