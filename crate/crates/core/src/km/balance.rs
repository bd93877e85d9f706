//! Multiplicative constraints among the parameters, all of the form
//! `x^e = R` for one free parameter `x`. Powers of `q` are assembled in
//! `q_star` units, so `q^{binom(m,2)/y}` contributes `(Y/y)·binom(m,2)`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::pochhammer::RefinedBase;
use crate::Complex;

use super::binom2;

/// Relative tolerance for a supplied value to count as satisfying a
/// constraint.
pub const BALANCE_TOL: f64 = 1e-12;

/// Which parameter of the product constraint is solved for.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreeParam {
    A(usize),
    B(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub enum BalanceProblem {
    /// `q^{Σ binom(l_i+1,2)} Π a_i^{l_i+1} = q^{Σ binom(m_j,2)/y_j} Π b_j^{m_j}`.
    /// The entry of `a` or `b` named by `free` is ignored.
    Apc {
        a: Vec<Complex>,
        b: Vec<Complex>,
        l: Vec<u32>,
        m: Vec<u32>,
        y: Vec<u32>,
        free: FreeParam,
    },
    /// `q^{binom(L+1,2)} b^{L+1} = q^{binom(N+1,2) + Σ binom(m_j,2)/y_j} Π c_j^{m_j}`.
    Npc {
        n: u32,
        big_l: u32,
        c: Vec<Complex>,
        m: Vec<u32>,
        y: Vec<u32>,
    },
    /// `b = q^{binom(N+1,2) + Σ binom(m_j,2)/y_j} Π c_j^{m_j}`.
    AkmsB {
        n: u32,
        c: Vec<Complex>,
        m: Vec<u32>,
        y: Vec<u32>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BalanceSolution {
    pub principal: Complex,
    /// All `e` solutions of `x^e = R`, principal first.
    pub roots: Vec<Complex>,
}

fn same_len(names: &str, lens: &[usize]) -> Result<()> {
    if lens.windows(2).any(|w| w[0] != w[1]) {
        return Err(Error::BadArity(format!(
            "{names} must have equal length, got {lens:?}"
        )));
    }
    Ok(())
}

/// `Σ (Y/y_j) binom(m_j, 2)` and `Π_{j≠skip} c_j^{m_j}`.
fn progression_part(
    c: &[Complex],
    m: &[u32],
    y: &[u32],
    skip: Option<usize>,
    base: &RefinedBase,
) -> Result<(i64, Complex)> {
    same_len("c, m, y", &[c.len(), m.len(), y.len()])?;
    let mut units = 0;
    let mut prod = Complex::new(1.0, 0.0);
    for (j, ((&cj, &mj), &yj)) in c.iter().zip(m).zip(y).enumerate() {
        units += base.step(yj)? * binom2(mj as i64);
        if skip != Some(j) {
            prod *= cj.powi(mj as i32);
        }
    }
    Ok((units, prod))
}

/// `(e, R)` with the constraint reading `x^e = R`.
fn power_form(problem: &BalanceProblem, base: &RefinedBase) -> Result<(u32, Complex)> {
    let big_y = base.units() as i64;
    match problem {
        BalanceProblem::Apc {
            a,
            b,
            l,
            m,
            y,
            free,
        } => {
            same_len("a, l", &[a.len(), l.len()])?;
            let skip = match *free {
                FreeParam::B(j) => Some(j),
                FreeParam::A(_) => None,
            };
            let (b_units, b_prod) = progression_part(b, m, y, skip, base)?;
            let mut a_units = 0;
            let mut a_prod = Complex::new(1.0, 0.0);
            for (i, (&ai, &li)) in a.iter().zip(l).enumerate() {
                a_units += big_y * binom2(li as i64 + 1);
                if *free != FreeParam::A(i) {
                    a_prod *= ai.powi(li as i32 + 1);
                }
            }
            match *free {
                FreeParam::A(i) => {
                    let li = *l
                        .get(i)
                        .ok_or_else(|| Error::BadArity(format!("free a-index {i} out of range")))?;
                    Ok((li + 1, base.pow(b_units - a_units) * b_prod / a_prod))
                }
                FreeParam::B(j) => {
                    let mj = *m
                        .get(j)
                        .ok_or_else(|| Error::BadArity(format!("free b-index {j} out of range")))?;
                    Ok((mj, base.pow(a_units - b_units) * a_prod / b_prod))
                }
            }
        }
        BalanceProblem::Npc { n, big_l, c, m, y } => {
            let (units, prod) = progression_part(c, m, y, None, base)?;
            let exponent = big_y * (binom2(*n as i64 + 1) - binom2(*big_l as i64 + 1)) + units;
            Ok((big_l + 1, base.pow(exponent) * prod))
        }
        BalanceProblem::AkmsB { n, c, m, y } => {
            let (units, prod) = progression_part(c, m, y, None, base)?;
            Ok((1, base.pow(big_y * binom2(*n as i64 + 1) + units) * prod))
        }
    }
}

/// Solve for the free parameter.
pub fn solve_balance(problem: &BalanceProblem, base: &RefinedBase) -> Result<BalanceSolution> {
    let (e, rhs) = power_form(problem, base)?;
    if e == 0 {
        return Err(Error::DegenerateConstraint(
            "the free parameter does not appear in the constraint".into(),
        ));
    }
    if e == 1 {
        return Ok(BalanceSolution {
            principal: rhs,
            roots: vec![rhs],
        });
    }
    let principal = Complex::from_polar(rhs.norm().powf(1.0 / e as f64), rhs.arg() / e as f64);
    let roots = (0..e)
        .map(|t| principal * Complex::from_polar(1.0, 2.0 * PI * t as f64 / e as f64))
        .collect();
    Ok(BalanceSolution { principal, roots })
}

/// Relative mismatch of `value` in the constraint; `ConstraintViolated` if
/// it exceeds [`BALANCE_TOL`].
pub fn check_balance(problem: &BalanceProblem, value: Complex, base: &RefinedBase) -> Result<f64> {
    let (e, rhs) = power_form(problem, base)?;
    let lhs = value.powi(e as i32);
    let scale = lhs.norm().max(rhs.norm());
    let mismatch = if scale == 0.0 {
        0.0
    } else {
        (lhs - rhs).norm() / scale
    };
    if !(mismatch <= BALANCE_TOL) {
        return Err(Error::ConstraintViolated(format!(
            "balancing constraint off by relative {mismatch:e}"
        )));
    }
    Ok(mismatch)
}
