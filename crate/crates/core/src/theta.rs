//! The modified theta function `θ(x;p) = Π_{j≥0} (1 - x p^j)(1 - p^{j+1}/x)`.

use crate::error::{Error, Result};
use crate::residual::Residual;
use crate::Complex;

pub const DEFAULT_EPSILON: f64 = 1e-18;
pub const DEFAULT_MAX_TERMS: usize = 2048;
pub const DEFAULT_GUARD: f64 = 0.9;
pub const DEFAULT_DELTA: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationPolicy {
    /// Upper bound on how far each omitted factor may differ from 1.
    pub epsilon: f64,
    pub max_terms: usize,
}

impl TruncationPolicy {
    pub fn new(epsilon: f64, max_terms: usize) -> Result<Self> {
        if !(epsilon > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "truncation epsilon must be positive, got {epsilon}"
            )));
        }
        if max_terms == 0 {
            return Err(Error::InvalidParameter(
                "max_terms must be at least 1".into(),
            ));
        }
        Ok(TruncationPolicy { epsilon, max_terms })
    }
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            epsilon: DEFAULT_EPSILON,
            max_terms: DEFAULT_MAX_TERMS,
        }
    }
}

/// The elliptic nome `p` together with the evaluation policy.
///
/// `delta` is the zero-proximity threshold used whenever a theta value ends
/// up in a denominator: an argument `x` with `|x/p^k - 1| < delta` for some
/// integer `k` is rejected with [`Error::DivisionByZeroTheta`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Nome {
    p: Complex,
    policy: TruncationPolicy,
    guard: f64,
    delta: f64,
}

impl Nome {
    pub fn new(p: Complex) -> Result<Self> {
        Self::with_guard(p, DEFAULT_GUARD)
    }

    pub fn real(p: f64) -> Result<Self> {
        Self::new(Complex::new(p, 0.0))
    }

    pub fn with_guard(p: Complex, guard: f64) -> Result<Self> {
        if !(guard > 0.0 && guard < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "nome guard must lie in (0, 1), got {guard}"
            )));
        }
        let modulus = p.norm();
        if !(modulus <= guard) {
            return Err(Error::NomeOutOfRange { modulus, guard });
        }
        Ok(Nome {
            p,
            policy: TruncationPolicy::default(),
            guard,
            delta: DEFAULT_DELTA,
        })
    }

    pub fn with_policy(mut self, policy: TruncationPolicy) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_delta(mut self, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "zero-proximity delta must be positive, got {delta}"
            )));
        }
        self.delta = delta;
        Ok(self)
    }

    pub fn p(&self) -> Complex {
        self.p
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn guard(&self) -> f64 {
        self.guard
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn is_trigonometric(&self) -> bool {
        self.p == Complex::new(0.0, 0.0)
    }

    /// θ(x; p).
    pub fn theta(&self, x: Complex) -> Result<Complex> {
        theta_eval(x, self)
    }

    /// θ(x) for a value that is about to be divided by; rejects arguments
    /// within `delta` of the zero set.
    pub fn theta_den(&self, x: Complex) -> Result<Complex> {
        if zero_distance(x, self) < self.delta {
            return Err(Error::DivisionByZeroTheta {
                arg: x,
                delta: self.delta,
            });
        }
        theta_eval(x, self)
    }

    /// θ(x_1)…θ(x_n).
    pub fn theta_multi(&self, xs: &[Complex]) -> Result<Complex> {
        theta_multi(xs, self)
    }

    /// θ(x_1)…θ(x_n) with every factor checked as a denominator.
    pub fn theta_multi_den(&self, xs: &[Complex]) -> Result<Complex> {
        xs.iter().try_fold(Complex::new(1.0, 0.0), |acc, &x| {
            Ok(acc * self.theta_den(x)?)
        })
    }
}

/// θ(x; p), truncated once every omitted factor is within `epsilon` of 1.
pub fn theta_eval(x: Complex, nome: &Nome) -> Result<Complex> {
    if x.re == 0.0 && x.im == 0.0 {
        return Err(Error::ZeroArgument);
    }
    let modulus = nome.p.norm();
    if modulus > nome.guard {
        return Err(Error::NomeOutOfRange {
            modulus,
            guard: nome.guard,
        });
    }
    let one = Complex::new(1.0, 0.0);
    if modulus == 0.0 {
        return Ok(one - x);
    }

    let reach = x.norm().max(x.norm().recip()).max(1.0);
    let TruncationPolicy { epsilon, max_terms } = nome.policy;

    let mut product = one;
    // p^j and |p|^{j+1}
    let mut pj = one;
    let mut tail = modulus;
    for _ in 0..max_terms {
        let pj1 = pj * nome.p;
        // Divide rather than multiply by 1/x so that x = p^{j+1} gives an exact zero.
        product *= (one - x * pj) * (one - pj1 / x);
        if tail * reach < epsilon {
            return Ok(product);
        }
        pj = pj1;
        tail *= modulus;
    }
    Err(Error::TruncationFailure { max_terms })
}

pub fn theta_multi(xs: &[Complex], nome: &Nome) -> Result<Complex> {
    xs.iter().try_fold(Complex::new(1.0, 0.0), |acc, &x| {
        Ok(acc * theta_eval(x, nome)?)
    })
}

/// Relative distance from `x` to the zero set `{p^k : k ∈ ℤ}` of θ(·; p),
/// i.e. `min_k |x/p^k - 1|`. For `p = 0` the zero set is `{1}`.
pub fn zero_distance(x: Complex, nome: &Nome) -> f64 {
    let one = Complex::new(1.0, 0.0);
    let modulus = nome.p.norm();
    if modulus == 0.0 {
        return (x - one).norm();
    }
    let x_mod = x.norm();
    if x_mod == 0.0 {
        return 0.0;
    }
    let centre = (x_mod.ln() / modulus.ln()).round();
    if !centre.is_finite() || centre.abs() > i32::MAX as f64 / 2.0 {
        return f64::INFINITY;
    }
    let centre = centre as i32;
    (centre - 1..=centre + 1)
        .map(|k| (x * nome.p.powi(-k) - one).norm())
        .fold(f64::INFINITY, f64::min)
}

/// Residual of `θ(x) = -x θ(1/x)`.
pub fn residual_inversion(x: Complex, nome: &Nome) -> Result<Residual> {
    let lhs = theta_eval(x, nome)?;
    let rhs = x * theta_eval(x.inv(), nome)?;
    Ok(Residual::from_terms([lhs, rhs]))
}

/// Residual of the addition formula
/// `θ(xy,x/y,uv,u/v) - θ(xv,x/v,uy,u/y) = (u/y) θ(yv,y/v,xu,x/u)`.
pub fn residual_addition(
    x: Complex,
    y: Complex,
    u: Complex,
    v: Complex,
    nome: &Nome,
) -> Result<Residual> {
    if [x, y, u, v].iter().any(|z| z.re == 0.0 && z.im == 0.0) {
        return Err(Error::ZeroArgument);
    }
    let first = theta_multi(&[x * y, x / y, u * v, u / v], nome)?;
    let second = theta_multi(&[x * v, x / v, u * y, u / y], nome)?;
    let third = u / y * theta_multi(&[y * v, y / v, x * u, x / u], nome)?;
    Ok(Residual::from_terms([first, -second, -third]))
}

/// Residual of the quasi-periodicity `θ(px) = -θ(x)/x`, written as
/// `x θ(px) + θ(x) = 0`.
pub fn residual_quasiperiod(x: Complex, nome: &Nome) -> Result<Residual> {
    if nome.is_trigonometric() {
        return Err(Error::InvalidParameter(
            "quasi-periodicity needs a nonzero nome".into(),
        ));
    }
    let shifted = x * theta_eval(nome.p * x, nome)?;
    let plain = theta_eval(x, nome)?;
    Ok(Residual::from_terms([shifted, plain]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c64;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    /// Fixed-length partial product, independent of the truncation rule.
    fn long_product(x: Complex, p: Complex, terms: usize) -> Complex {
        let one = c64(1.0, 0.0);
        (0..terms).fold(one, |acc, j| {
            let pj = p.powi(j as i32);
            acc * (one - x * pj) * (one - pj * p / x)
        })
    }

    #[test]
    fn trigonometric_case_is_one_minus_x() {
        let nome = Nome::real(0.0).unwrap();
        assert_eq!(nome.theta(c64(2.0, 0.0)).unwrap(), c64(-1.0, 0.0));
        let x = c64(0.3, -1.7);
        assert_eq!(nome.theta(x).unwrap(), c64(1.0, 0.0) - x);
    }

    #[test]
    fn theta_vanishes_at_one() {
        let nome = Nome::real(0.3).unwrap();
        assert_eq!(nome.theta(c64(1.0, 0.0)).unwrap(), c64(0.0, 0.0));
    }

    #[test]
    fn matches_long_product() {
        let nome = Nome::real(0.1).unwrap();
        let got = nome.theta(c64(0.5, 0.0)).unwrap();
        let want = long_product(c64(0.5, 0.0), c64(0.1, 0.0), 100);
        assert!((got - want).norm() < 1e-14, "{got} vs {want}");
    }

    #[test]
    fn matches_long_product_complex_nome() {
        let p = c64(0.5, 0.4);
        let nome = Nome::new(p).unwrap();
        let x = c64(-1.3, 0.7);
        let got = nome.theta(x).unwrap();
        let want = long_product(x, p, 400);
        assert!((got - want).norm() < 1e-13 * want.norm());
    }

    #[test]
    fn zero_argument_rejected() {
        let nome = Nome::real(0.2).unwrap();
        assert_eq!(nome.theta(c64(0.0, 0.0)), Err(Error::ZeroArgument));
    }

    #[test]
    fn nome_guard() {
        assert!(matches!(
            Nome::real(0.95),
            Err(Error::NomeOutOfRange { .. })
        ));
        assert!(Nome::with_guard(c64(0.95, 0.0), 0.97).is_ok());
    }

    #[test]
    fn truncation_failure_when_capped() {
        let policy = TruncationPolicy::new(1e-18, 3).unwrap();
        let nome = Nome::real(0.8).unwrap().with_policy(policy);
        assert_eq!(
            nome.theta(c64(0.5, 0.0)),
            Err(Error::TruncationFailure { max_terms: 3 })
        );
    }

    #[test]
    fn multi_products() {
        let nome = Nome::real(0.2).unwrap();
        assert_eq!(nome.theta_multi(&[]).unwrap(), c64(1.0, 0.0));
        let trig = Nome::real(0.0).unwrap();
        assert_eq!(trig.theta_multi(&[c64(2.0, 0.0)]).unwrap(), c64(-1.0, 0.0));
        let nome = Nome::real(0.3).unwrap();
        let x = c64(0.7, 0.2);
        let got = nome.theta_multi(&[x, x.inv()]).unwrap();
        let want = nome.theta(x).unwrap() * nome.theta(x.inv()).unwrap();
        assert!((got - want).norm() < 1e-14);
    }

    #[test]
    fn inversion_examples() {
        let r = residual_inversion(c64(-1.0, 0.0), &Nome::real(0.4).unwrap()).unwrap();
        assert!(r.relative < 1e-13);
        let x = Complex::from_polar(0.8, PI / 5.0);
        let r = residual_inversion(x, &Nome::real(0.5).unwrap()).unwrap();
        assert!(r.relative < 1e-12);
        let r = residual_inversion(c64(2.0, 3.0), &Nome::real(0.0).unwrap()).unwrap();
        assert_eq!(r.relative, 0.0);
    }

    #[test]
    fn addition_examples() {
        let nome = Nome::real(0.5).unwrap();
        let (x, y, u) = (c64(0.4, 1.1), c64(-0.9, 0.3), c64(1.2, -0.5));
        let r = residual_addition(x, y, u, y, &nome).unwrap();
        assert!(r.relative < 1e-13);

        let trig = Nome::real(0.0).unwrap();
        let r = residual_addition(
            c64(2.0, 0.0),
            c64(3.0, 0.0),
            c64(5.0, 0.0),
            c64(7.0, 0.0),
            &trig,
        )
        .unwrap();
        assert!(r.relative < 1e-15, "{r:?}");
    }

    #[test]
    fn quasiperiod_examples() {
        let nome = Nome::real(0.3).unwrap();
        let r = residual_quasiperiod(c64(1.0, 0.0), &nome).unwrap();
        assert_eq!(r.relative, 0.0);
        let r = residual_quasiperiod(c64(0.6, 0.1), &nome).unwrap();
        assert!(r.relative < 1e-12);
        let r = residual_quasiperiod(c64(-2.0, 0.0), &Nome::real(0.5).unwrap()).unwrap();
        assert!(r.relative < 1e-12);
    }

    #[test]
    fn zero_distance_detects_powers_of_p() {
        let nome = Nome::real(0.4).unwrap();
        assert!(zero_distance(c64(0.4_f64.powi(3), 0.0), &nome) < 1e-15);
        assert!(zero_distance(c64(0.4_f64.powi(-2), 0.0), &nome) < 1e-15);
        assert!(zero_distance(c64(0.0, 1.0), &nome) > 0.5);
        assert!(matches!(
            nome.theta_den(c64(1.0 + 1e-9, 0.0)),
            Err(Error::DivisionByZeroTheta { .. })
        ));
    }

    fn annulus_point() -> impl Strategy<Value = Complex> {
        (0.3f64..2.0, 0.0..2.0 * PI).prop_map(|(r, t)| Complex::from_polar(r, t))
    }

    proptest! {
        #[test]
        fn inversion_and_quasiperiod_hold(x in annulus_point(), p in 0.05f64..0.7) {
            let nome = Nome::real(p).unwrap();
            prop_assume!(zero_distance(x, &nome) > 1e-3);
            prop_assert!(residual_inversion(x, &nome).unwrap().relative < 1e-12);
            prop_assert!(residual_quasiperiod(x, &nome).unwrap().relative < 1e-12);
        }

        #[test]
        fn conjugate_symmetry_for_real_nome(x in annulus_point(), p in 0.0f64..0.7) {
            let nome = Nome::real(p).unwrap();
            let a = nome.theta(x.conj()).unwrap();
            let b = nome.theta(x).unwrap().conj();
            prop_assert!((a - b).norm() <= 1e-14 * b.norm().max(1.0));
        }

        #[test]
        fn addition_holds(
            x in annulus_point(), y in annulus_point(),
            u in annulus_point(), v in annulus_point(),
        ) {
            let nome = Nome::real(0.5).unwrap();
            prop_assert!(residual_addition(x, y, u, v, &nome).unwrap().relative < 1e-12);
        }
    }
}
