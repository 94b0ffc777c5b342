//! Randomized properties. Each runs a deterministic proptest runner for the
//! requested number of cases, so the acceptance binary and the
//! `properties` test target share one definition.

use std::fmt::Debug;

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rug::Float;

use xop::classical::{bochner_operator, classical_poly, seed, Family, SeedKind};
use xop::darboux::{factorize, partner, partner_by_laws, QuasiRational};
use xop::diffop::{DiffOp, SecondOrderOp};
use xop::exact::rat::{int, rat, Rat};
use xop::exact::{sturm_count, Interval, Poly, RatFunc};
use xop::numeric::roots::complex_roots;
use xop::structure::{infer_eta, verify_natural, NaturalForm, ReducedForm};

pub type PropResult = Result<(), String>;

/// Function name, default case count, runner.
pub type Property = (&'static str, u32, fn(u32) -> PropResult);

pub const ALL: &[Property] = &[
    ("ratfunc_canonical", 40, ratfunc_canonical),
    ("field_axioms", 40, field_axioms),
    ("squarefree_round_trip", 30, squarefree_round_trip),
    ("sturm_vs_numeric", 100, sturm_vs_numeric),
    ("order_additivity", 40, order_additivity),
    ("apply_compose", 30, apply_compose),
    ("symbol_multiplicative", 40, symbol_multiplicative),
    ("gauge_group_action", 30, gauge_group_action),
    ("local_expansion_reconstruction", 30, local_expansion_reconstruction),
    ("seed_residuals", 10, seed_residuals),
    ("classical_recurrences", 10, classical_recurrences),
    ("factorization_identities", 30, factorization_identities),
    ("laws_vs_composition", 30, laws_vs_composition),
    ("natural_round_trip", 30, natural_round_trip),
    ("gauge_covariance", 20, gauge_covariance),
];

fn run<S>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> PropResult
where
    S: Strategy,
    S::Value: Debug,
{
    let config = Config { cases, failure_persistence: None, max_global_rejects: 100_000, ..Config::default() };
    let mut runner = TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha));
    runner.run(&strategy, test).map_err(|e| e.to_string())
}

fn q() -> impl Strategy<Value = Rat> + Clone {
    (-12i64..=12, 1i64..=6).prop_map(|(n, d)| rat(n, d))
}

fn nz_q() -> impl Strategy<Value = Rat> + Clone {
    q().prop_filter("nonzero", |r| *r != int(0))
}

fn poly(max_deg: usize) -> impl Strategy<Value = Poly> + Clone {
    prop::collection::vec(q(), 1..=max_deg + 1).prop_map(Poly::new)
}

fn nz_poly(max_deg: usize) -> impl Strategy<Value = Poly> + Clone {
    poly(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn ratfunc() -> impl Strategy<Value = RatFunc> + Clone {
    (poly(3), nz_poly(2)).prop_map(|(n, d)| RatFunc::new(n, d).expect("nonzero den"))
}

fn nz_ratfunc() -> impl Strategy<Value = RatFunc> + Clone {
    ratfunc().prop_filter("nonzero", |f| !f.is_zero())
}

fn canonical(f: &RatFunc) -> bool {
    Poly::gcd(f.num(), f.den()).degree() == Some(0) && f.den().leading() == int(1)
}

pub fn ratfunc_canonical(cases: u32) -> PropResult {
    run(cases, (ratfunc(), nz_ratfunc()), |(a, b)| {
        let quotient = (&a / &b).map_err(|e| TestCaseError::fail(e.to_string()))?;
        for f in [&a + &b, &a - &b, &a * &b, quotient, a.derivative()] {
            prop_assert!(canonical(&f), "not canonical: {f}");
        }
        Ok(())
    })
}

pub fn field_axioms(cases: u32) -> PropResult {
    run(cases, (q(), q(), nz_q(), ratfunc(), ratfunc(), nz_ratfunc()), |(x, y, z, a, b, c)| {
        prop_assert_eq!((&x + &y) + &z, &x + (&y + &z));
        prop_assert_eq!(&x * (&y + &z), &x * &y + &x * &z);
        prop_assert_eq!(&z * (int(1) / &z), int(1));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&c * &c.inv().unwrap(), RatFunc::one());
        prop_assert_eq!(&(&a - &b) + &b, a);
        Ok(())
    })
}

pub fn squarefree_round_trip(cases: u32) -> PropResult {
    run(cases, (nz_poly(2), nz_poly(2), nz_poly(1), nz_q()), |(f1, f2, f3, c)| {
        let p = (&(&f1 * &f2.pow(2)) * &f3.pow(3)).scale(&c);
        let (lc, parts) = p.squarefree_factor().map_err(|e| TestCaseError::fail(e.to_string()))?;
        let back = parts.iter().fold(Poly::constant(lc), |acc, (f, m)| &acc * &f.pow(*m));
        prop_assert_eq!(back, p.clone());
        for (i, (f, _)) in parts.iter().enumerate() {
            prop_assert_eq!(Poly::gcd(f, &f.derivative()).degree(), Some(0));
            for (g, _) in &parts[i + 1..] {
                prop_assert_eq!(Poly::gcd(f, g).degree(), Some(0));
            }
        }
        Ok(())
    })
}

pub fn sturm_vs_numeric(cases: u32) -> PropResult {
    let coeffs = prop::collection::vec(-6i64..=6, 2..=9);
    run(cases, (coeffs, -4i64..=0, 1i64..=4, 1i64..=3), |(c, a, b, den)| {
        let p = Poly::from_ints(&c);
        prop_assume!(p.degree().unwrap_or(0) >= 1);
        let f = p.squarefree_part();
        let lo = rat(2 * a - 1, 2 * den);
        let hi = rat(2 * b + 1, 2 * den);
        let prec = 512;
        let eps = Float::with_val(prec, Float::i_exp(1, -200));
        let margin = Float::with_val(prec, Float::i_exp(1, -60));
        let (flo, fhi) = (xop::numeric::rat_to_float(&lo, prec), xop::numeric::rat_to_float(&hi, prec));
        let mut count = 0;
        for r in complex_roots(&f, prec) {
            if Float::with_val(prec, r.imag().abs_ref()) > eps {
                continue;
            }
            let x = r.real();
            let near = |e: &Float| Float::with_val(prec, x - e).abs() < margin;
            prop_assume!(!near(&flo) && !near(&fhi));
            if *x > flo && *x < fhi {
                count += 1;
            }
        }
        prop_assert_eq!(sturm_count(&p, &Interval::open(lo, hi)), count);
        Ok(())
    })
}

pub fn order_additivity(cases: u32) -> PropResult {
    let zetas = prop::sample::select(vec![rat(0, 1), rat(1, 1), rat(-3, 4), rat(2, 3)]);
    let pow = |k: usize, z: &Rat| Poly::linear_root(z).pow(k);
    run(cases, (nz_ratfunc(), nz_ratfunc(), zetas, 0usize..3, 0usize..3), |(f, g, z, i, j)| {
        let f = &f * &RatFunc::from_poly(pow(i, &z));
        let g = (&g / &RatFunc::from_poly(pow(j, &z))).unwrap();
        let lhs = (&f * &g).order_at(&z).unwrap();
        prop_assert_eq!(lhs, f.order_at(&z).unwrap() + g.order_at(&z).unwrap());
        Ok(())
    })
}

fn diffop(order: usize) -> impl Strategy<Value = DiffOp> + Clone {
    prop::collection::vec(ratfunc(), 1..=order + 1).prop_map(DiffOp::new)
}

pub fn apply_compose(cases: u32) -> PropResult {
    run(cases, (diffop(2), diffop(2), ratfunc()), |(l1, l2, f)| {
        prop_assert_eq!(l1.compose(&l2).apply(&f), l1.apply(&l2.apply(&f)));
        Ok(())
    })
}

/// `Σ c_j z^{j+k} D^j`, which maps `z^n` to `σ(n) z^{n+k}`.
fn homogeneous(k: i64, c: &[Rat]) -> DiffOp {
    let z = RatFunc::z();
    let coeffs = c
        .iter()
        .enumerate()
        .map(|(j, cj)| {
            z.pow(j as i64 + k).unwrap().scale(cj)
        })
        .collect();
    DiffOp::new(coeffs)
}

pub fn symbol_multiplicative(cases: u32) -> PropResult {
    let part = (-1i64..=1, prop::collection::vec(q(), 1..=3));
    run(cases, (part.clone(), part), |((k1, c1), (k2, c2))| {
        let (l1, l2) = (homogeneous(k1, &c1), homogeneous(k2, &c2));
        prop_assume!(!l1.is_zero() && !l2.is_zero());
        let (s1, s2) = (l1.symbol_poly().unwrap(), l2.symbol_poly().unwrap());
        let expect = &s1.compose_affine(&int(1), &int(k2)) * &s2;
        let comp = l1.compose(&l2);
        if expect.is_zero() {
            prop_assert!(comp.is_zero() || comp.op_degree().unwrap() < k1 + k2);
        } else {
            prop_assert_eq!(comp.op_degree().unwrap(), k1 + k2);
            prop_assert_eq!(comp.symbol_poly().unwrap(), expect);
        }
        Ok(())
    })
}

fn second_order() -> impl Strategy<Value = SecondOrderOp> + Clone {
    (nz_poly(2), poly(2), poly(2)).prop_map(|(p, q, r)| SecondOrderOp::from_polys(p, q, r).unwrap())
}

pub fn gauge_group_action(cases: u32) -> PropResult {
    run(cases, (second_order(), nz_ratfunc(), nz_ratfunc()), |(t, s1, s2)| {
        let twice = t.gauge_conjugate(&s1).unwrap().gauge_conjugate(&s2).unwrap();
        prop_assert_eq!(twice, t.gauge_conjugate(&(&s2 * &s1)).unwrap());
        // Conjugation agrees with composing σ ∘ T ∘ σ^{-1}.
        let direct = DiffOp::mul_by(s1.clone())
            .compose(&t.to_diffop())
            .compose(&DiffOp::mul_by(s1.inv().unwrap()));
        prop_assert_eq!(t.gauge_conjugate(&s1).unwrap().to_diffop(), direct);
        Ok(())
    })
}

/// `Σ_{k=lo}^{hi} c_k (z - ζ)^k`.
fn laurent_sum(zeta: &Rat, coeffs: impl Iterator<Item = (i64, Rat)>) -> RatFunc {
    let t = RatFunc::from_poly(Poly::linear_root(zeta));
    coeffs.fold(RatFunc::zero(), |acc, (k, c)| &acc + &t.pow(k).unwrap().scale(&c))
}

pub fn local_expansion_reconstruction(cases: u32) -> PropResult {
    let zetas = prop::sample::select(vec![rat(0, 1), rat(-1, 1), rat(1, 2)]);
    let op = (nz_ratfunc(), ratfunc(), ratfunc())
        .prop_filter_map("valid", |(p, q, r)| SecondOrderOp::new(p, q, r).ok());
    run(cases, (op, zetas, 0i64..6), |(t, z, extra)| {
        let depth = {
            let probe = t.local_expansion(&z, 100).unwrap();
            probe.d + extra
        };
        let le = t.local_expansion(&z, depth).unwrap();
        let d = le.d;
        let pieces = [(&t.p, 2i64), (&t.q, 1), (&t.r, 0)];
        for (f, shift) in pieces {
            let partial = laurent_sum(
                &z,
                (d..=depth).map(|j| {
                    let term = le.term(j);
                    let c = match shift {
                        2 => term.p,
                        1 => term.q,
                        _ => term.r,
                    };
                    (j + shift, c)
                }),
            );
            let rest = f - &partial;
            if !rest.is_zero() {
                prop_assert!(rest.order_at(&z).unwrap() > depth + shift);
            }
        }
        Ok(())
    })
}

fn family() -> impl Strategy<Value = Family> + Clone {
    prop_oneof![
        Just(Family::Hermite),
        q().prop_map(Family::laguerre),
        (q(), q()).prop_map(|(a, b)| Family::jacobi(a, b)),
    ]
}

const KINDS: [SeedKind; 6] =
    [SeedKind::Polynomial, SeedKind::Pseudo, SeedKind::I, SeedKind::II, SeedKind::III, SeedKind::IV];

pub fn seed_residuals(cases: u32) -> PropResult {
    run(cases, (q(), q()), |(a, b)| {
        for f in [Family::Hermite, Family::laguerre(a.clone()), Family::jacobi(a.clone(), b.clone())] {
            let t = bochner_operator(&f);
            for kind in KINDS {
                for n in 0..4 {
                    let Ok(s) = seed(&f, kind, n) else { continue };
                    let res = t.ricatti_residual(&s.w);
                    prop_assert_eq!(res.as_constant(), Some(s.lambda0.clone()), "{} {} {}", f, kind, n);
                }
            }
        }
        Ok(())
    })
}

pub fn classical_recurrences(cases: u32) -> PropResult {
    run(cases, (q(), q()), |(a, b)| {
        let z = Poly::z();
        let two = int(2);
        for f in [Family::Hermite, Family::laguerre(a.clone()), Family::jacobi(a.clone(), b.clone())] {
            let t = bochner_operator(&f);
            let y: Vec<Poly> = (0..=12).map(|n| classical_poly(&f, n).poly).collect();
            for n in 0..=12usize {
                let img = t.apply_poly(&y[n]);
                prop_assert_eq!(img, RatFunc::from_poly(y[n].scale(&f.eigenvalue(n))));
            }
            for n in 1..12usize {
                let nn = int(n as i64);
                let (lhs, rhs) = match &f {
                    Family::Hermite => {
                        (y[n + 1].clone(), &(&z.scale(&two) * &y[n]) - &y[n - 1].scale(&(&two * &nn)))
                    }
                    Family::Laguerre { alpha } => {
                        let lin = Poly::new(vec![&two * &nn + int(1) + alpha, int(-1)]);
                        (y[n + 1].scale(&(&nn + int(1))), &(&lin * &y[n]) - &y[n - 1].scale(&(&nn + alpha)))
                    }
                    Family::Jacobi { alpha, beta } => {
                        let s = &two * &nn + alpha + beta;
                        let c0 = &two * (&nn + int(1)) * (&nn + alpha + beta + int(1)) * &s;
                        let lin = Poly::new(vec![alpha * alpha - beta * beta, (&s + int(2)) * &s]);
                        let c2 = &two * (&nn + alpha) * (&nn + beta) * (&s + int(2));
                        (y[n + 1].scale(&c0), &(&lin * &y[n]).scale(&(&s + int(1))) - &y[n - 1].scale(&c2))
                    }
                };
                prop_assert_eq!(lhs, rhs, "{} n={}", f, n);
            }
        }
        Ok(())
    })
}

fn step() -> impl Strategy<Value = (SecondOrderOp, QuasiRational, RatFunc)> {
    (family(), prop::sample::select(KINDS.to_vec()), 0usize..4, nz_poly(2)).prop_filter_map(
        "valid seed",
        |(f, kind, n, b)| {
            let s = seed(&f, kind, n).ok()?;
            Some((bochner_operator(&f), QuasiRational::from(&s), RatFunc::from_poly(b)))
        },
    )
}

pub fn factorization_identities(cases: u32) -> PropResult {
    run(cases, step(), |(t, phi, b)| {
        let f = factorize(&t, &phi, &b).unwrap();
        let (a_op, b_op) = (f.a.to_diffop(), f.b.to_diffop());
        prop_assert_eq!(b_op.compose(&a_op).plus_const(&phi.lambda), t.to_diffop());
        let (that, _) = partner(&t, &phi, &b).unwrap();
        prop_assert_eq!(a_op.compose(&b_op).plus_const(&phi.lambda), that.to_diffop());
        // Intertwining: Â A = A T.
        prop_assert_eq!(that.to_diffop().compose(&a_op), a_op.compose(&t.to_diffop()));
        Ok(())
    })
}

pub fn laws_vs_composition(cases: u32) -> PropResult {
    run(cases, step(), |(t, phi, b)| {
        let (that, _) = partner(&t, &phi, &b).unwrap();
        prop_assert_eq!(partner_by_laws(&t, &phi, &b).unwrap(), that);
        Ok(())
    })
}

fn natural_data() -> impl Strategy<Value = (Poly, Poly, Poly)> {
    let p = prop_oneof![
        Just(Poly::one()),
        Just(Poly::z()),
        Just(Poly::from_ints(&[1, 0, -1])),
        nz_poly(2),
    ];
    (p, poly(1), nz_poly(3))
}

pub fn natural_round_trip(cases: u32) -> PropResult {
    run(cases, natural_data(), |(p, s, eta)| {
        let nf = NaturalForm::new(p, s, eta.clone()).unwrap();
        let t = nf.operator();
        prop_assert_eq!(verify_natural(&t, &eta).unwrap(), nf.clone());
        // A factor of η shared with p can be absorbed into s.
        if Poly::gcd(&nf.p, &eta).degree() != Some(0) {
            return Ok(());
        }
        let (e2, s2) = infer_eta(&t, 6).expect("η recovered");
        prop_assert!(super::proportional(&e2, &eta));
        prop_assert_eq!(s2, nf.s);
        Ok(())
    })
}

/// `η̃ = ση`, `μ̃ = σ^{-1}μ` under `T -> σTσ^{-1}`; `μ = σμ₀` keeps both
/// sides polynomial.
pub fn gauge_covariance(cases: u32) -> PropResult {
    run(cases, (natural_data(), nz_poly(2), nz_poly(1)), |((p, s, eta), sigma, mu0)| {
        prop_assume!(sigma.degree().unwrap_or(0) >= 1);
        let form = |eta: Poly, mu: Poly| ReducedForm { p: p.clone(), s: s.clone(), eta, mu, c: int(0) }.operator();
        let t = form(eta.clone(), &sigma * &mu0);
        let conj = t.gauge_conjugate(&RatFunc::from_poly(sigma.clone())).unwrap();
        prop_assert_eq!(conj, form(&sigma * &eta, mu0.clone()));
        if mu0.degree() == Some(0) {
            // Constant μ₀: the conjugate is natural for ση.
            let nf = verify_natural(&t.gauge_conjugate(&RatFunc::from_poly(sigma.clone())).unwrap(), &(&sigma * &eta));
            prop_assert!(nf.is_ok());
        }
        Ok(())
    })
}

pub fn cases(name: &str) -> u32 {
    ALL.iter().find(|(n, _, _)| *n == name).expect("registered property").1
}
