//! Multiprecision helpers: complex roots, local series, quadrature.

pub mod quad;
pub mod roots;

use rug::{Complex, Float};

use crate::exact::{Poly, Rat};

pub fn rat_to_float(r: &Rat, prec: u32) -> Float {
    let q: rug::Rational = r.to_string().parse().expect("rational literal");
    Float::with_val(prec, q)
}

pub fn poly_to_complex(p: &Poly, prec: u32) -> Vec<Complex> {
    p.coeffs()
        .iter()
        .map(|c| Complex::with_val(prec, (rat_to_float(c, prec), 0)))
        .collect()
}

pub fn cabs(c: &Complex) -> Float {
    Float::with_val(c.prec().0, c.abs_ref())
}

/// Short decimal rendering, e.g. `1.25e-41`.
pub fn float_str(f: &Float) -> String {
    f.to_string_radix(10, Some(6))
}

pub fn complex_str(c: &Complex) -> String {
    let (re, im) = (c.real(), c.imag());
    let sign = if im.is_sign_negative() { "-" } else { "+" };
    format!("{}{}{}i", re.to_string_radix(10, Some(20)), sign, Float::with_val(im.prec(), im.abs_ref()).to_string_radix(10, Some(20)))
}

/// Horner evaluation.
pub fn eval(c: &[Complex], z: &Complex) -> Complex {
    let prec = z.prec().0;
    let mut acc = Complex::with_val(prec, 0);
    for a in c.iter().rev() {
        acc *= z;
        acc += a;
    }
    acc
}

/// Taylor coefficients of `p(ζ + t)`.
pub fn taylor_shift(c: &[Complex], zeta: &Complex) -> Vec<Complex> {
    let mut a = c.to_vec();
    let n = a.len();
    for i in 0..n {
        for j in (i..n.saturating_sub(1)).rev() {
            let t = Complex::with_val(zeta.prec().0, &a[j + 1] * zeta);
            a[j] += t;
        }
    }
    a
}

/// First `len` coefficients of `n / d` as power series, `d[0] != 0`.
pub fn series_div(n: &[Complex], d: &[Complex], len: usize) -> Vec<Complex> {
    let prec = d[0].prec().0;
    let zero = Complex::with_val(prec, 0);
    let mut out: Vec<Complex> = Vec::with_capacity(len);
    for k in 0..len {
        let mut acc = n.get(k).cloned().unwrap_or_else(|| zero.clone());
        for j in 1..=k.min(d.len().saturating_sub(1)) {
            acc -= Complex::with_val(prec, &d[j] * &out[k - j]);
        }
        acc /= &d[0];
        out.push(acc);
    }
    out
}
