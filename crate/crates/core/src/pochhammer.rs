//! Elliptic shifted factorials `(a;q)_k = θ(a)θ(aq)…θ(aq^{k-1})` over a
//! refined base.
//!
//! Identities mix the bases `q` and `q^{1/y}` for several integers `y`. All of
//! them are expressed as integer powers of one primitive base `q*` with
//! `q = q*^Y`, so `q^{t/y} = q*^{tY/y}` whenever `y | Y` and no complex root
//! is ever taken.

use crate::error::{Error, Result};
use crate::residual::Residual;
use crate::theta::Nome;
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RefinedBase {
    q_star: Complex,
    units: u32,
    nome: Nome,
}

impl RefinedBase {
    /// `q = q_star^units`.
    pub fn new(q_star: Complex, units: u32, nome: Nome) -> Result<Self> {
        if q_star.norm() == 0.0 || !q_star.is_finite() {
            return Err(Error::InvalidParameter(
                "primitive base must be finite and nonzero".into(),
            ));
        }
        if units == 0 {
            return Err(Error::InvalidParameter("Y must be at least 1".into()));
        }
        Ok(RefinedBase {
            q_star,
            units,
            nome,
        })
    }

    /// Base with `Y = 1`, i.e. `q_star = q`.
    pub fn plain(q: Complex, nome: Nome) -> Result<Self> {
        Self::new(q, 1, nome)
    }

    pub fn q_star(&self) -> Complex {
        self.q_star
    }

    /// The exponent `Y` with `q = q_star^Y`.
    pub fn units(&self) -> u32 {
        self.units
    }

    pub fn nome(&self) -> &Nome {
        &self.nome
    }

    pub fn q(&self) -> Complex {
        self.pow(self.units as i64)
    }

    /// `q_star^n`.
    pub fn pow(&self, n: i64) -> Complex {
        let n = i32::try_from(n).expect("refined-base exponent out of i32 range");
        self.q_star.powi(n)
    }

    /// `q^k`.
    pub fn q_pow(&self, k: i64) -> Complex {
        self.pow(k * self.units as i64)
    }

    /// Number of `q_star` units in `q^{1/y}`. Fails unless `y` divides `Y`.
    pub fn step(&self, y: u32) -> Result<i64> {
        if y == 0 || !self.units.is_multiple_of(y) {
            return Err(Error::InvalidParameter(format!(
                "y = {y} does not divide Y = {}",
                self.units
            )));
        }
        Ok((self.units / y) as i64)
    }

    /// The same `q_star` and nome with `Y` multiplied by `factor`, so the new
    /// `q` is the old `q^factor`.
    pub fn coarsened(&self, factor: u32) -> Result<Self> {
        Self::new(self.q_star, self.units * factor, self.nome)
    }

    /// `(a; q_star^step)_k` for `k ≥ 0`; no zero check.
    pub fn poch(&self, a: Complex, step: i64, k: i64) -> Result<Complex> {
        debug_assert!(k >= 0);
        let mut acc = Complex::new(1.0, 0.0);
        for t in 0..k {
            acc *= self.nome.theta(a * self.pow(step * t))?;
        }
        Ok(acc)
    }

    /// `(a; q_star^step)_k` for `k ≥ 0` where the result is a denominator:
    /// every factor is checked against the zero set.
    pub fn poch_den(&self, a: Complex, step: i64, k: i64) -> Result<Complex> {
        debug_assert!(k >= 0);
        let mut acc = Complex::new(1.0, 0.0);
        for t in 0..k {
            acc *= self.nome.theta_den(a * self.pow(step * t))?;
        }
        Ok(acc)
    }

    /// `θ(a q_star^{n})`.
    pub fn theta_at(&self, a: Complex, n: i64) -> Result<Complex> {
        self.nome.theta(a * self.pow(n))
    }
}

/// Argument of a single elliptic shifted factorial `(a; q_star^step)_k`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FactorialArg {
    pub a: Complex,
    /// Exponent of `q_star` giving the factorial's base.
    pub step: i64,
    /// Length; negative lengths use `(a;q)_{-n} = 1/(a q^{-n}; q)_n`.
    pub k: i64,
}

impl FactorialArg {
    pub fn new(a: Complex, step: i64, k: i64) -> Result<Self> {
        if a.norm() == 0.0 {
            return Err(Error::ZeroArgument);
        }
        if step < 1 {
            return Err(Error::InvalidParameter(format!(
                "factorial step must be positive, got {step}"
            )));
        }
        Ok(FactorialArg { a, step, k })
    }

    /// `(a; q)_k` for the base's own `q`.
    pub fn in_q(a: Complex, k: i64, base: &RefinedBase) -> Result<Self> {
        Self::new(a, base.units() as i64, k)
    }
}

pub fn epoch(arg: FactorialArg, base: &RefinedBase) -> Result<Complex> {
    let FactorialArg { a, step, k } = arg;
    if a.norm() == 0.0 {
        return Err(Error::ZeroArgument);
    }
    if k >= 0 {
        base.poch(a, step, k)
    } else {
        let start = a * base.pow(step * k);
        Ok(base.poch_den(start, step, -k)?.inv())
    }
}

pub fn epoch_multi(args: &[FactorialArg], base: &RefinedBase) -> Result<Complex> {
    args.iter().try_fold(Complex::new(1.0, 0.0), |acc, &arg| {
        Ok(acc * epoch(arg, base)?)
    })
}

/// Residual of
/// `(a;q)_{n-k}/(b;q)_{n-k} = (b/a)^k (a;q)_n (q^{1-n}/b;q)_k / [(b;q)_n (q^{1-n}/a;q)_k]`.
pub fn residual_epdi(
    a: Complex,
    b: Complex,
    n: u32,
    k: u32,
    base: &RefinedBase,
) -> Result<Residual> {
    if k > n {
        return Err(Error::InvalidParameter(format!(
            "need k ≤ n, got k={k}, n={n}"
        )));
    }
    let s = base.units() as i64;
    let (n, k) = (n as i64, k as i64);
    let shift = base.q_pow(1 - n);
    let lhs = base.poch(a, s, n - k)? / base.poch_den(b, s, n - k)?;
    let rhs = (b / a).powi(k as i32) * base.poch(a, s, n)? * base.poch(shift / b, s, k)?
        / (base.poch_den(b, s, n)? * base.poch_den(shift / a, s, k)?);
    Ok(Residual::of_difference(&[lhs], &[rhs]))
}

/// Residual of `(a;q)_n/(b;q)_n = (a/b)^n (q^{1-n}/a;q)_n/(q^{1-n}/b;q)_n`.
pub fn residual_epi(a: Complex, b: Complex, n: u32, base: &RefinedBase) -> Result<Residual> {
    let s = base.units() as i64;
    let n = n as i64;
    let shift = base.q_pow(1 - n);
    let lhs = base.poch(a, s, n)? / base.poch_den(b, s, n)?;
    let rhs =
        (a / b).powi(n as i32) * base.poch(shift / a, s, n)? / base.poch_den(shift / b, s, n)?;
    Ok(Residual::of_difference(&[lhs], &[rhs]))
}

/// Residual of `(x;q)_{sk} = (x, xq, …, xq^{s-1}; q^s)_k`.
pub fn residual_xsk(x: Complex, s: u32, k: u32, base: &RefinedBase) -> Result<Residual> {
    if s == 0 {
        return Err(Error::InvalidParameter("s must be positive".into()));
    }
    let unit = base.units() as i64;
    let lhs = base.poch(x, unit, s as i64 * k as i64)?;
    let mut rhs = Complex::new(1.0, 0.0);
    for u in 0..s as i64 {
        rhs *= base.poch(x * base.q_pow(u), unit * s as i64, k as i64)?;
    }
    Ok(Residual::of_difference(&[lhs], &[rhs]))
}
