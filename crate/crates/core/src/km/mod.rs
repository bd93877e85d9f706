//! Karlsson–Minton-type summations and transformations.
//!
//! All of them come from substituting geometric progressions into one of the
//! two elliptic partial-fraction identities (the `dpf` sum of
//! [`gustafson_terms`](crate::inversion::gustafson_terms) and the
//! Tannery–Molk sum). Parameters are passed in a [`RefinedBase`] so every
//! `q^{t/y}` is an exact integer power of `q_star`.

mod atr;
mod balance;
mod exotic;
mod induction;
mod instance;
mod kmt;
mod sums;

pub use atr::{atr_apf_terms, atr_residual, atr_terms};
pub use balance::{
    check_balance, solve_balance, BalanceProblem, BalanceSolution, FreeParam, BALANCE_TOL,
};
pub use exotic::{akms_b, akms_residual, akms_sides, akmt_residual, akmt_sides};
pub use induction::{bracket_residual, induction_step, theta_split_residual, InductionStep};
pub use instance::{KmInstance, KmMode, TwoTermInstance, WbbInstance};
pub use kmt::{kmt_dpf_terms, kmt_residual, kmt_terms, kmt_unit_y};
pub use sums::{
    kmsi_residual, kmsi_sides, mbkms_residual, mbkms_sides, trc_residual, trc_sides, wbb_residual,
    wbb_sides, wbb_via_kmsi, wbb_via_mbkms,
};

use crate::error::Result;
use crate::pochhammer::RefinedBase;
use crate::residual::Residual;
use crate::Complex;

/// Both sides of a summation or transformation, term by term.
#[derive(Debug, Clone, PartialEq)]
pub struct Sides {
    pub lhs: Vec<Complex>,
    pub rhs: Vec<Complex>,
}

impl Sides {
    pub fn residual(&self) -> Residual {
        Residual::of_difference(&self.lhs, &self.rhs)
    }

    pub fn lhs_total(&self) -> Complex {
        self.lhs.iter().sum()
    }

    pub fn rhs_total(&self) -> Complex {
        self.rhs.iter().sum()
    }

    /// Worst cancellation-aware residual of `self.lhs - other.lhs` and
    /// `self.rhs - other.rhs`, every term flattened.
    pub fn discrepancy(&self, other: &Sides) -> Residual {
        Residual::of_difference(&self.lhs, &other.lhs)
            .worst(Residual::of_difference(&self.rhs, &other.rhs))
    }

    /// Largest relative gap between the two left totals and the two right
    /// totals.
    pub fn agreement(&self, other: &Sides) -> f64 {
        let gap = |x: Complex, y: Complex| {
            let scale = x.norm().max(y.norm());
            if scale == 0.0 {
                0.0
            } else {
                (x - y).norm() / scale
            }
        };
        gap(self.lhs_total(), other.lhs_total()).max(gap(self.rhs_total(), other.rhs_total()))
    }
}

/// Largest relative gap between two term lists of equal length, measured
/// pairwise; `INFINITY` if the lengths differ.
pub fn termwise_gap(x: &[Complex], y: &[Complex]) -> f64 {
    if x.len() != y.len() {
        return f64::INFINITY;
    }
    x.iter()
        .zip(y)
        .map(|(a, b)| {
            let scale = a.norm().max(b.norm());
            if scale == 0.0 {
                0.0
            } else {
                (a - b).norm() / scale
            }
        })
        .fold(0.0, f64::max)
}

/// Running product of theta values and elliptic shifted factorials.
/// Denominator factors are checked against the zero set.
struct Prod<'a> {
    base: &'a RefinedBase,
    acc: Complex,
}

impl<'a> Prod<'a> {
    fn new(base: &'a RefinedBase) -> Self {
        Prod {
            base,
            acc: Complex::new(1.0, 0.0),
        }
    }

    fn times(&mut self, x: Complex) -> &mut Self {
        self.acc *= x;
        self
    }

    /// `× (a; q_star^step)_k`
    fn num(&mut self, a: Complex, step: i64, k: i64) -> Result<&mut Self> {
        self.acc *= self.base.poch(a, step, k)?;
        Ok(self)
    }

    /// `÷ (a; q_star^step)_k`
    fn den(&mut self, a: Complex, step: i64, k: i64) -> Result<&mut Self> {
        self.acc /= self.base.poch_den(a, step, k)?;
        Ok(self)
    }

    fn theta(&mut self, x: Complex) -> Result<&mut Self> {
        self.acc *= self.base.nome().theta(x)?;
        Ok(self)
    }

    fn theta_den(&mut self, x: Complex) -> Result<&mut Self> {
        self.acc /= self.base.nome().theta_den(x)?;
        Ok(self)
    }

    fn value(&self) -> Complex {
        self.acc
    }
}

fn binom2(n: i64) -> i64 {
    n * (n - 1) / 2
}
