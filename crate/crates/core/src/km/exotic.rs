//! Identities from the Tannery–Molk sum with two rows. They are not
//! well-poised and the summand carries no factor `q^k`.

use crate::error::{Error, Result};
use crate::pochhammer::RefinedBase;
use crate::residual::Residual;
use crate::Complex;

use super::balance::{check_balance, solve_balance, BalanceProblem};
use super::instance::TwoTermInstance;
use super::{Prod, Sides};

/// `Π_j (x_j q^{m_j/y_j}; q^{1/y_j})_{y_j k} / (x_j; q^{1/y_j})_{y_j k}`
fn shifted_ratio(x: &[Complex], m: &[u32], y: &[u32], k: i64, t: &mut Prod) -> Result<()> {
    for ((&xj, &mj), &yj) in x.iter().zip(m).zip(y) {
        let sj = t.base.step(yj)?;
        let len = yj as i64 * k;
        t.num(xj * t.base.pow(sj * mj as i64), sj, len)?
            .den(xj, sj, len)?;
    }
    Ok(())
}

/// Both sides of the two-row transformation with `|m| = N + L + 2`, valid
/// when `b` satisfies the `npc` constraint. Any of its `L + 1` roots works.
pub fn akmt_sides(inst: &TwoTermInstance) -> Result<Sides> {
    let (n, big_l) = (inst.n as i64, inst.big_l as i64);
    inst.check_shape(n + big_l + 2)?;
    let problem = BalanceProblem::Npc {
        n: inst.n,
        big_l: inst.big_l,
        c: inst.c.clone(),
        m: inst.m.clone(),
        y: inst.y.clone(),
    };
    check_balance(&problem, inst.b, &inst.base)?;

    let (b, base) = (inst.b, &inst.base);
    let big_y = base.units() as i64;
    let q = base.q();

    let mut lhs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let mut t = Prod::new(base);
        t.num(base.q_pow(-n), big_y, k)?
            .num(b, big_y, k)?
            .den(q, big_y, k)?
            .den(b * base.q_pow(big_l + 1), big_y, k)?;
        shifted_ratio(&inst.c, &inst.m, &inst.y, k, &mut t)?;
        lhs.push(t.value());
    }

    let mut pre = Prod::new(base);
    pre.times(b.powi(inst.n as i32 + 1))
        .num(q, big_y, n)?
        .num(b * q, big_y, big_l)?
        .den(b * q, big_y, n)?
        .den(q, big_y, big_l)?;
    for ((&cj, &mj), &yj) in inst.c.iter().zip(&inst.m).zip(&inst.y) {
        let sj = base.step(yj)?;
        pre.num(cj / b, sj, mj as i64)?.den(cj, sj, mj as i64)?;
    }
    let pre = pre.value();

    let mut rhs = Vec::with_capacity(big_l as usize + 1);
    for k in 0..=big_l {
        let mut t = Prod::new(base);
        t.num(base.q_pow(-big_l), big_y, k)?
            .num(b, big_y, k)?
            .den(q, big_y, k)?
            .den(b * base.q_pow(n + 1), big_y, k)?;
        for ((&cj, &mj), &yj) in inst.c.iter().zip(&inst.m).zip(&inst.y) {
            let sj = base.step(yj)?;
            let len = yj as i64 * k;
            t.num(b * base.pow(sj) / cj, sj, len)?.den(
                b * base.pow(sj * (1 - mj as i64)) / cj,
                sj,
                len,
            )?;
        }
        rhs.push(pre * t.value());
    }
    Ok(Sides { lhs, rhs })
}

pub fn akmt_residual(inst: &TwoTermInstance) -> Result<Residual> {
    Ok(akmt_sides(inst)?.residual())
}

/// The `b` forced by the summation's constraint.
pub fn akms_b(n: u32, c: &[Complex], m: &[u32], y: &[u32], base: &RefinedBase) -> Result<Complex> {
    let problem = BalanceProblem::AkmsB {
        n,
        c: c.to_vec(),
        m: m.to_vec(),
        y: y.to_vec(),
    };
    Ok(solve_balance(&problem, base)?.principal)
}

/// Both sides of
///
/// ```text
/// Σ_{k=0}^N (q^{-N}, b; q)_k / (q, bq; q)_k Π_j (c_j q^{m_j/y_j}; q^{1/y_j})_{y_j k} / (c_j; q^{1/y_j})_{y_j k}
///   = b^{N+1} (q; q)_N / (bq; q)_N Π_j (c_j/b; q^{1/y_j})_{m_j} / (c_j; q^{1/y_j})_{m_j}
/// ```
///
/// with `|m| = N + 2` and `b` computed from the constraint.
pub fn akms_sides(
    n: u32,
    c: &[Complex],
    m: &[u32],
    y: &[u32],
    base: &RefinedBase,
) -> Result<Sides> {
    if c.len() != m.len() || c.len() != y.len() {
        return Err(Error::BadArity(format!(
            "c, m, y must have equal length, got {}, {}, {}",
            c.len(),
            m.len(),
            y.len()
        )));
    }
    if c.iter().any(|x| x.norm() == 0.0) {
        return Err(Error::ZeroArgument);
    }
    let total: i64 = m.iter().map(|&x| x as i64).sum();
    if total != n as i64 + 2 {
        return Err(Error::ConstraintViolated(format!(
            "|m| = {total} but N + 2 = {}",
            n + 2
        )));
    }
    let b = akms_b(n, c, m, y, base)?;
    let big_y = base.units() as i64;
    let q = base.q();
    let n = n as i64;
    let lhs = (0..=n)
        .map(|k| {
            let mut t = Prod::new(base);
            t.num(base.q_pow(-n), big_y, k)?
                .num(b, big_y, k)?
                .den(q, big_y, k)?
                .den(b * q, big_y, k)?;
            shifted_ratio(c, m, y, k, &mut t)?;
            Ok(t.value())
        })
        .collect::<Result<Vec<_>>>()?;
    let mut r = Prod::new(base);
    r.times(b.powi(n as i32 + 1))
        .num(q, big_y, n)?
        .den(b * q, big_y, n)?;
    for ((&cj, &mj), &yj) in c.iter().zip(m).zip(y) {
        let sj = base.step(yj)?;
        r.num(cj / b, sj, mj as i64)?.den(cj, sj, mj as i64)?;
    }
    Ok(Sides {
        lhs,
        rhs: vec![r.value()],
    })
}

pub fn akms_residual(
    n: u32,
    c: &[Complex],
    m: &[u32],
    y: &[u32],
    base: &RefinedBase,
) -> Result<Residual> {
    Ok(akms_sides(n, c, m, y, base)?.residual())
}
