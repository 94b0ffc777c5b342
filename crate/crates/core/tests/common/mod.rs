//! Shared fixtures and independent oracles for the integration tests.
#![allow(dead_code)]

pub mod props;

use xop::darboux::DarbouxChain;
use xop::exact::rat::{int, rat, Rat};
use xop::exact::Poly;

/// Regular chains used across the suites: name, JSON, chain length.
pub const CORPUS: &[(&str, &str)] = &[
    ("hermite-pseudo2", r#"{"base":{"family":"hermite"},"steps":[{"seed":{"kind":"pseudo","n":2}}]}"#),
    (
        "hermite-krein-adler-1-2",
        r#"{"base":{"family":"hermite"},"steps":[{"seed":{"kind":"polynomial","n":1}},{"seed":{"kind":"polynomial","n":2}}]}"#,
    ),
    (
        "hermite-three-step",
        r#"{"base":{"family":"hermite"},"steps":[{"seed":{"kind":"polynomial","n":1}},{"seed":{"kind":"polynomial","n":2}},{"seed":{"kind":"pseudo","n":2}}]}"#,
    ),
    (
        "laguerre-two-step",
        r#"{"base":{"family":"laguerre","alpha":"-3/2"},"steps":[{"seed":{"kind":"I","n":1}},{"seed":{"kind":"III","n":2}}]}"#,
    ),
    ("laguerre-x1", r#"{"base":{"family":"laguerre","alpha":"1/2"},"steps":[{"seed":{"kind":"III","n":1}}]}"#),
    (
        "laguerre-three-step",
        r#"{"base":{"family":"laguerre","alpha":"1/2"},"steps":[{"seed":{"kind":"III","n":1}},{"seed":{"kind":"III","n":2}},{"seed":{"kind":"III","n":3}}]}"#,
    ),
    (
        "jacobi-x1-ii",
        r#"{"base":{"family":"jacobi","alpha":"7/2","beta":"1/2"},"steps":[{"seed":{"kind":"II","n":1}}]}"#,
    ),
    (
        "jacobi-x1-iii",
        r#"{"base":{"family":"jacobi","alpha":"5/2","beta":"3/2"},"steps":[{"seed":{"kind":"III","n":1}}]}"#,
    ),
];

pub fn chain(json: &str) -> DarbouxChain {
    serde_json::from_str(json).expect("corpus chain parses")
}

pub fn example_chain(alpha: &str) -> String {
    format!(
        r#"{{"base":{{"family":"laguerre","alpha":"{alpha}"}},"steps":[{{"seed":{{"kind":"I","n":1}}}},{{"seed":{{"kind":"III","n":2}}}}]}}"#
    )
}

/// `binom(x, k)` for rational `x`.
fn binom(x: &Rat, k: usize) -> Rat {
    (0..k).fold(int(1), |acc, i| acc * (x - int(i as i64)) / int(i as i64 + 1))
}

fn fact(k: usize) -> Rat {
    (1..=k).fold(int(1), |a, i| a * int(i as i64))
}

/// `L_n^{(a)}(z) = Σ binom(n+a, n-k) (-z)^k / k!`; zero for negative `n`.
pub fn lag(a: &Rat, n: i64) -> Poly {
    if n < 0 {
        return Poly::zero();
    }
    let n = n as usize;
    let top = int(n as i64) + a;
    let c = (0..=n)
        .map(|k| {
            let sign = if k % 2 == 0 { int(1) } else { int(-1) };
            binom(&top, n - k) * sign / fact(k)
        })
        .collect();
    Poly::new(c)
}

/// `p(-z)`.
pub fn neg(p: &Poly) -> Poly {
    Poly::new(p.coeffs().iter().enumerate().map(|(i, c)| if i % 2 == 0 { c.clone() } else { -c.clone() }).collect())
}

/// Physicists' Hermite by the three-term recurrence.
pub fn herm(n: usize) -> Poly {
    let z2 = Poly::from_ints(&[0, 2]);
    let mut v = vec![Poly::one(), z2.clone()];
    for k in 1..n {
        let next = &(&z2 * &v[k]) - &v[k - 1].scale(&int(2 * k as i64));
        v.push(next);
    }
    v.truncate(n + 1);
    v.swap_remove(n)
}

/// Jacobi by the Rodrigues-type explicit sum in `(z-1)/2`, `(z+1)/2`.
pub fn jac(a: &Rat, b: &Rat, n: usize) -> Poly {
    let zm = Poly::new(vec![rat(-1, 2), rat(1, 2)]);
    let zp = Poly::new(vec![rat(1, 2), rat(1, 2)]);
    let nn = int(n as i64);
    let mut acc = Poly::zero();
    for s in 0..=n {
        let c = binom(&(&nn + a), n - s) * binom(&(&nn + b), s);
        acc = &acc + &(&zm.pow(s) * &zp.pow(n - s)).scale(&c);
    }
    acc
}

fn det3(m: [[Poly; 3]; 3]) -> Poly {
    let t = |a: &Poly, b: &Poly, c: &Poly| &(a * b) * c;
    let plus = &(&t(&m[0][0], &m[1][1], &m[2][2]) + &t(&m[0][1], &m[1][2], &m[2][0])) + &t(&m[0][2], &m[1][0], &m[2][1]);
    let minus = &(&t(&m[0][2], &m[1][1], &m[2][0]) + &t(&m[0][0], &m[1][2], &m[2][1])) + &t(&m[0][1], &m[1][0], &m[2][2]);
    &plus - &minus
}

/// Determinant form of the two-step Laguerre polynomials.
pub fn duran(a: &Rat, n: i64) -> Poly {
    let a1 = a + int(1);
    let a2 = a + int(2);
    det3([
        [lag(a, n - 2), -lag(&a1, n - 3), lag(&a2, n - 4)],
        [lag(a, 1), -lag(&a1, 0), Poly::zero()],
        [neg(&lag(a, 2)), neg(&lag(&a1, 2)), neg(&lag(&a2, 2))],
    ])
}

/// The closed-form cubic denominator of the two-step family.
pub fn eta_closed(a: &Rat) -> Poly {
    let a4 = a + int(4);
    let a1 = a + int(1);
    let a2 = a + int(2);
    Poly::new(vec![-(&a1 * &a2 * &a4), -(&a4 * &a1), a4.clone(), int(1)]).scale(&rat(-1, 2))
}

pub fn disc_closed(a: &Rat) -> Rat {
    let a4 = a + int(4);
    let b = int(4) * a + int(7);
    rat(1, 8) * (a + int(1)) * &a4 * &a4 * &b * &b
}

pub fn d(p: &Poly) -> Poly {
    p.derivative()
}

/// `η y'' - 2η' y' + η'' y`.
fn bracket(eta: &Poly, y: &Poly) -> Poly {
    &(&(eta * &d(&d(y))) - &(&d(eta) * &d(y)).scale(&int(2))) + &(&d(&d(eta)) * y)
}

/// Residual of the two-step Laguerre bilinear equation.
pub fn ngde(a: &Rat, eta: &Poly, y: &Poly, n: i64) -> Poly {
    let z = Poly::z();
    let s = Poly::new(vec![a + rat(5, 2), int(-1)]);
    let t1 = &z * &bracket(eta, y);
    let t2 = (&(eta * &d(y)) + &(&d(eta) * y)).scale(&rat(1, 2));
    let t3 = &s * &(&(eta * &d(y)) - &(&d(eta) * y));
    let t4 = (eta * y).scale(&int(n - 3));
    &(&(&t1 + &t2) + &t3) + &t4
}

pub fn xhermite(eta: &Poly, y: &Poly, k: i64, m: i64) -> Poly {
    let z2 = Poly::from_ints(&[0, -2]);
    &(&bracket(eta, y) + &(&z2 * &(&(eta * &d(y)) - &(&d(eta) * y)))) + &(eta * y).scale(&int(2 * (k - m)))
}

pub fn xlaguerre(a: &Rat, eta: &Poly, y: &Poly, k: i64, m: i64) -> Poly {
    let z = Poly::z();
    let c1 = Poly::new(vec![a + int(1), int(-1)]);
    let c2 = Poly::new(vec![-a.clone(), int(1)]);
    let parts = [&z * &bracket(eta, y), &(&c1 * eta) * &d(y), &(&c2 * &d(eta)) * y, (eta * y).scale(&int(k - m))];
    parts.iter().fold(Poly::zero(), |acc, p| &acc + p)
}

pub fn xjacobi(a: &Rat, b: &Rat, eta: &Poly, y: &Poly, k: i64, m: i64) -> Poly {
    let p = Poly::from_ints(&[1, 0, -1]);
    let c1 = Poly::new(vec![b - a, -(int(2) + a + b)]);
    let c2 = Poly::new(vec![a - b, a + b]);
    let km = int(k - m);
    let ev = &km * &(a + b + int(1) + &km);
    let parts = [&p * &bracket(eta, y), &(&c1 * eta) * &d(y), &(&c2 * &d(eta)) * y, (eta * y).scale(&ev)];
    parts.iter().fold(Poly::zero(), |acc, p| &acc + p)
}

/// True when `a = c b` for some nonzero rational `c`.
pub fn proportional(a: &Poly, b: &Poly) -> bool {
    match (a.degree(), b.degree()) {
        (Some(da), Some(db)) if da == db => a.scale(&(b.leading() / a.leading())) == *b,
        _ => false,
    }
}
