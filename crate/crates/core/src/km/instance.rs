use crate::error::{Error, Result};
use crate::pochhammer::RefinedBase;
use crate::Complex;

use super::balance::{check_balance, BalanceProblem, FreeParam};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum KmMode {
    /// Multiterm transformation from the `dpf` sum: `|l| + s = |m| + 2`.
    Kmt,
    /// Its analogue from the Tannery–Molk sum: `|l| + s = |m|` plus the
    /// product constraint.
    Atr,
}

/// Parameters of the multiterm identities: `s` geometric progressions
/// `a_i, a_i q, …, a_i q^{l_i}` and `r` progressions
/// `b_j, b_j q^{1/y_j}, …, b_j q^{(m_j-1)/y_j}`.
#[derive(Debug, Clone, PartialEq)]
pub struct KmInstance {
    pub a: Vec<Complex>,
    pub b: Vec<Complex>,
    pub l: Vec<u32>,
    pub m: Vec<u32>,
    pub y: Vec<u32>,
    pub base: RefinedBase,
    pub mode: KmMode,
}

impl KmInstance {
    pub fn s(&self) -> usize {
        self.a.len()
    }

    pub fn r(&self) -> usize {
        self.b.len()
    }

    /// Arity, structural balance, divisibility of `Y`, and (in atr mode)
    /// the product constraint.
    pub fn validate(&self) -> Result<()> {
        if self.a.is_empty() || self.a.len() != self.l.len() {
            return Err(Error::BadArity(format!(
                "need s ≥ 1 with one l per a, got {} a and {} l",
                self.a.len(),
                self.l.len()
            )));
        }
        if self.b.len() != self.m.len() || self.b.len() != self.y.len() {
            return Err(Error::BadArity(format!(
                "b, m, y must have equal length, got {}, {}, {}",
                self.b.len(),
                self.m.len(),
                self.y.len()
            )));
        }
        if self.a.iter().chain(&self.b).any(|x| x.norm() == 0.0) {
            return Err(Error::ZeroArgument);
        }
        for &y in &self.y {
            self.base.step(y)?;
        }
        let lhs = self.l.iter().map(|&x| x as i64).sum::<i64>() + self.s() as i64;
        let m = self.m.iter().map(|&x| x as i64).sum::<i64>();
        let rhs = match self.mode {
            KmMode::Kmt => m + 2,
            KmMode::Atr => m,
        };
        if lhs != rhs {
            return Err(Error::ConstraintViolated(format!(
                "|l| + s = {lhs} but the {:?} balance needs {rhs}",
                self.mode
            )));
        }
        if self.mode == KmMode::Atr {
            let problem = BalanceProblem::Apc {
                a: self.a.clone(),
                b: self.b.clone(),
                l: self.l.clone(),
                m: self.m.clone(),
                y: self.y.clone(),
                free: FreeParam::A(0),
            };
            check_balance(&problem, self.a[0], &self.base)?;
        }
        Ok(())
    }
}

/// Parameters of the two-row corollaries. `a = alpha²`, so a square root of
/// `a` is always available without a branch choice.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoTermInstance {
    pub alpha: Complex,
    pub b: Complex,
    pub n: u32,
    pub big_l: u32,
    pub c: Vec<Complex>,
    pub m: Vec<u32>,
    pub y: Vec<u32>,
    pub base: RefinedBase,
}

impl TwoTermInstance {
    pub fn a(&self) -> Complex {
        self.alpha * self.alpha
    }

    pub fn m_total(&self) -> i64 {
        self.m.iter().map(|&x| x as i64).sum()
    }

    /// Arity, nonzero parameters, divisibility of `Y` and `|m| = expected`.
    pub(crate) fn check_shape(&self, expected: i64) -> Result<()> {
        if self.c.len() != self.m.len() || self.c.len() != self.y.len() {
            return Err(Error::BadArity(format!(
                "c, m, y must have equal length, got {}, {}, {}",
                self.c.len(),
                self.m.len(),
                self.y.len()
            )));
        }
        if self.alpha.norm() == 0.0
            || self.b.norm() == 0.0
            || self.c.iter().any(|x| x.norm() == 0.0)
        {
            return Err(Error::ZeroArgument);
        }
        for &y in &self.y {
            self.base.step(y)?;
        }
        if self.m_total() != expected {
            return Err(Error::ConstraintViolated(format!(
                "|m| = {} but {expected} is required",
                self.m_total()
            )));
        }
        Ok(())
    }
}

/// Parameters of the bibasic sum with step `s`.
#[derive(Debug, Clone, PartialEq)]
pub struct WbbInstance {
    pub a: Complex,
    pub b: Complex,
    pub c: Complex,
    pub s: u32,
    pub n: u32,
    pub base: RefinedBase,
}

impl WbbInstance {
    pub(crate) fn check(&self) -> Result<()> {
        if self.s == 0 {
            return Err(Error::InvalidParameter("step s must be positive".into()));
        }
        if [self.a, self.b, self.c].iter().any(|x| x.norm() == 0.0) {
            return Err(Error::ZeroArgument);
        }
        Ok(())
    }
}
