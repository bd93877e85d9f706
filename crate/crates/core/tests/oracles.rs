//! Checks against formulas the crate does not implement: the Jacobi triple
//! product series, plain q-Pochhammer products and the Frenkel-Turaev sum.

use std::f64::consts::PI;

use ellipsum_core::pochhammer::{epoch, FactorialArg};
use ellipsum_core::theta::theta_eval;
use ellipsum_core::{Complex, Nome, RefinedBase, Residual};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex {
    Complex::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..2.0 * PI))
}

/// `Σ (-1)^n p^{n(n-1)/2} x^n / (p;p)_∞`
fn theta_series(x: Complex, p: Complex) -> Complex {
    let mut sum = c(0.0, 0.0);
    for n in -80_i64..=80 {
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        sum += p.powi((n * (n - 1) / 2) as i32) * x.powi(n as i32) * sign;
    }
    let mut pp = c(1.0, 0.0);
    let mut pk = p;
    while pk.norm() > 1e-20 {
        pp *= c(1.0, 0.0) - pk;
        pk *= p;
    }
    sum / pp
}

#[test]
fn theta_matches_triple_product_series() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..500 {
        let p = point(&mut rng, 0.05, 0.6);
        let x = point(&mut rng, 0.6, 1.4);
        let got = theta_eval(x, &Nome::new(p).unwrap()).unwrap();
        let want = theta_series(x, p);
        assert!(
            (got - want).norm() <= 1e-12 * want.norm().max(1e-3),
            "{got} vs {want}"
        );
    }
}

#[test]
fn trigonometric_factorial_is_q_pochhammer() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let q = point(&mut rng, 0.6, 0.95);
        let a = point(&mut rng, 0.5, 1.5);
        let base = RefinedBase::plain(q, Nome::new(c(0.0, 0.0)).unwrap()).unwrap();
        let k = rng.random_range(-6_i64..=6);
        let direct = if k >= 0 {
            (0..k)
                .map(|j| c(1.0, 0.0) - a * q.powi(j as i32))
                .product::<Complex>()
        } else {
            (1..=-k)
                .map(|j| c(1.0, 0.0) - a * q.powi(-(j as i32)))
                .product::<Complex>()
                .inv()
        };
        let got = epoch(FactorialArg::in_q(a, k, &base).unwrap(), &base).unwrap();
        assert!(
            (got - direct).norm() <= 1e-12 * direct.norm(),
            "k={k}: {got} vs {direct}"
        );
    }
}

fn poch(args: &[Complex], k: i64, base: &RefinedBase) -> Complex {
    args.iter()
        .map(|&a| epoch(FactorialArg::in_q(a, k, base).unwrap(), base).unwrap())
        .product()
}

/// Terminating very-well-poised 10V9 summation with `bcde = a^2 q^{n+1}`.
fn frenkel_turaev(rng: &mut ChaCha8Rng, n: i64, p: Complex) -> Residual {
    let nome = Nome::new(p).unwrap();
    let q = point(rng, 0.7, 0.9);
    let base = RefinedBase::plain(q, nome).unwrap();
    let (a, b, cc, d) = (
        point(rng, 0.6, 1.4),
        point(rng, 0.6, 1.4),
        point(rng, 0.6, 1.4),
        point(rng, 0.6, 1.4),
    );
    let e = a * a * q.powi(n as i32 + 1) / (b * cc * d);
    let qn = q.powi(-(n as i32));
    let mut terms = Vec::new();
    for k in 0..=n {
        let wp =
            theta_eval(a * q.powi(2 * k as i32), &nome).unwrap() / theta_eval(a, &nome).unwrap();
        let num = poch(&[a, b, cc, d, e, qn], k, &base);
        let den = poch(
            &[
                q,
                a * q / b,
                a * q / cc,
                a * q / d,
                a * q / e,
                a * q.powi(n as i32 + 1),
            ],
            k,
            &base,
        );
        terms.push(wp * num / den * q.powi(k as i32));
    }
    let rhs = poch(
        &[a * q, a * q / (b * cc), a * q / (b * d), a * q / (cc * d)],
        n,
        &base,
    ) / poch(
        &[a * q / b, a * q / cc, a * q / d, a * q / (b * cc * d)],
        n,
        &base,
    );
    terms.push(-rhs);
    Residual::from_terms(terms)
}

#[test]
fn frenkel_turaev_sum_holds() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for trial in 0..200 {
        let n = trial % 6;
        let p = if trial % 3 == 0 {
            c(0.0, 0.0)
        } else {
            point(&mut rng, 0.05, 0.5)
        };
        let r = frenkel_turaev(&mut rng, n, p);
        assert!(r.relative < 1e-10, "n={n} p={p}: {}", r.relative);
    }
}

proptest! {
    #[test]
    fn theta_is_symmetric_under_x_to_p_over_x(
        pr in 0.0..0.7_f64, pa in 0.0..(2.0 * PI),
        xr in 0.5..1.5_f64, xa in 0.0..(2.0 * PI),
    ) {
        let p = Complex::from_polar(pr, pa);
        let x = Complex::from_polar(xr, xa);
        let nome = Nome::new(p).unwrap();
        let lhs = theta_eval(x, &nome).unwrap();
        let rhs = theta_eval(p / x, &nome).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-12 * lhs.norm().max(rhs.norm()).max(1e-6));
    }

    #[test]
    fn factorial_splits_at_any_point(
        ar in 0.5..1.5_f64, aa in 0.0..(2.0 * PI),
        qr in 0.6..0.95_f64, qa in 0.0..(2.0 * PI),
        pr in 0.0..0.5_f64,
        j in 0_i64..5, k in 0_i64..5,
    ) {
        let a = Complex::from_polar(ar, aa);
        let q = Complex::from_polar(qr, qa);
        let base = RefinedBase::plain(q, Nome::new(c(pr, 0.0)).unwrap()).unwrap();
        let f = |a: Complex, k: i64| epoch(FactorialArg::in_q(a, k, &base).unwrap(), &base).unwrap();
        let whole = f(a, j + k);
        let parts = f(a, j) * f(a * q.powi(j as i32), k);
        prop_assert!((whole - parts).norm() <= 1e-12 * whole.norm().max(1e-12));
    }
}
