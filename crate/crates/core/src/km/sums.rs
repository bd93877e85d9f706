//! The two-row specialisations: the general summation `kmsi`, the bibasic
//! sum `wbb`, the transformation `trc` and its `L = 0` case `mbkms`.

use crate::error::{Error, Result};
use crate::pochhammer::RefinedBase;
use crate::residual::Residual;
use crate::Complex;

use super::instance::{TwoTermInstance, WbbInstance};
use super::{Prod, Sides};

fn total(m: &[u32]) -> i64 {
    m.iter().map(|&x| x as i64).sum()
}

/// Both sides of
///
/// ```text
/// Σ_{k=0}^N θ(aq^{2k})/θ(a) (a, q^{-N}, b, a/b)_k / (q, aq^{N+1}, aq/b, bq)_k q^k
///     Π_j (c_j q^{m_j}, aq/c_j)_k / (aq^{1-m_j}/c_j, c_j)_k
///   = (aq, q)_N / (bq, aq/b)_N Π_j (c_j/b, c_j b/a)_{m_j} / (c_j, c_j/a)_{m_j}
/// ```
///
/// with `|m| = N`, everything in base `q`.
pub fn kmsi_sides(
    a: Complex,
    b: Complex,
    c: &[Complex],
    m: &[u32],
    n: u32,
    base: &RefinedBase,
) -> Result<Sides> {
    if c.len() != m.len() {
        return Err(Error::BadArity(format!("{} c but {} m", c.len(), m.len())));
    }
    if total(m) != n as i64 {
        return Err(Error::ConstraintViolated(format!(
            "|m| = {} but N = {n}",
            total(m)
        )));
    }
    if a.norm() == 0.0 || b.norm() == 0.0 || c.iter().any(|x| x.norm() == 0.0) {
        return Err(Error::ZeroArgument);
    }
    let big_y = base.units() as i64;
    let n = n as i64;
    let q = base.q();
    let mut lhs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let mut t = Prod::new(base);
        t.theta(a * base.q_pow(2 * k))?
            .theta_den(a)?
            .num(a, big_y, k)?
            .num(base.q_pow(-n), big_y, k)?
            .num(b, big_y, k)?
            .num(a / b, big_y, k)?
            .den(q, big_y, k)?
            .den(a * base.q_pow(n + 1), big_y, k)?
            .den(a * q / b, big_y, k)?
            .den(b * q, big_y, k)?
            .times(base.q_pow(k));
        for (&cj, &mj) in c.iter().zip(m) {
            let mj = mj as i64;
            t.num(cj * base.q_pow(mj), big_y, k)?
                .num(a * q / cj, big_y, k)?
                .den(a * base.q_pow(1 - mj) / cj, big_y, k)?
                .den(cj, big_y, k)?;
        }
        lhs.push(t.value());
    }
    let mut r = Prod::new(base);
    r.num(a * q, big_y, n)?
        .num(q, big_y, n)?
        .den(b * q, big_y, n)?
        .den(a * q / b, big_y, n)?;
    for (&cj, &mj) in c.iter().zip(m) {
        let mj = mj as i64;
        r.num(cj / b, big_y, mj)?
            .num(cj * b / a, big_y, mj)?
            .den(cj, big_y, mj)?
            .den(cj / a, big_y, mj)?;
    }
    Ok(Sides {
        lhs,
        rhs: vec![r.value()],
    })
}

pub fn kmsi_residual(
    a: Complex,
    b: Complex,
    c: &[Complex],
    m: &[u32],
    n: u32,
    base: &RefinedBase,
) -> Result<Residual> {
    Ok(kmsi_sides(a, b, c, m, n, base)?.residual())
}

/// Terms of the well-poised series on the left of the transformation:
///
/// ```text
/// θ(aq^{2k})/θ(a) (a, q^{-N}, b, aq^{-L}/b; q)_k / (q, aq^{N+1}, aq/b, bq^{L+1}; q)_k q^k
///     Π_j (c_j q^{m_j/y_j}, aq^{1/y_j}/c_j; q^{1/y_j})_{y_j k}
///       / (aq^{(1-m_j)/y_j}/c_j, c_j; q^{1/y_j})_{y_j k}
/// ```
#[allow(clippy::too_many_arguments)]
fn series_terms(
    a: Complex,
    b: Complex,
    n: i64,
    big_l: i64,
    c: &[Complex],
    m: &[u32],
    y: &[u32],
    base: &RefinedBase,
) -> Result<Vec<Complex>> {
    let big_y = base.units() as i64;
    let q = base.q();
    let steps = y
        .iter()
        .map(|&y| base.step(y))
        .collect::<Result<Vec<_>>>()?;
    (0..=n)
        .map(|k| {
            let mut t = Prod::new(base);
            t.theta(a * base.q_pow(2 * k))?
                .theta_den(a)?
                .num(a, big_y, k)?
                .num(base.q_pow(-n), big_y, k)?
                .num(b, big_y, k)?
                .num(a * base.q_pow(-big_l) / b, big_y, k)?
                .den(q, big_y, k)?
                .den(a * base.q_pow(n + 1), big_y, k)?
                .den(a * q / b, big_y, k)?
                .den(b * base.q_pow(big_l + 1), big_y, k)?
                .times(base.q_pow(k));
            for (j, &cj) in c.iter().enumerate() {
                let (mj, sj, len) = (m[j] as i64, steps[j], y[j] as i64 * k);
                t.num(cj * base.pow(sj * mj), sj, len)?
                    .num(a * base.pow(sj) / cj, sj, len)?
                    .den(a * base.pow(sj * (1 - mj)) / cj, sj, len)?
                    .den(cj, sj, len)?;
            }
            Ok(t.value())
        })
        .collect()
}

/// `Π_j (c_j/b, c_j b/a; q^{1/y_j})_{m_j} / (c_j, c_j/a; q^{1/y_j})_{m_j}`
fn c_ratio(
    a: Complex,
    b: Complex,
    c: &[Complex],
    m: &[u32],
    y: &[u32],
    base: &RefinedBase,
) -> Result<Complex> {
    let mut r = Prod::new(base);
    for ((&cj, &mj), &yj) in c.iter().zip(m).zip(y) {
        let (mj, sj) = (mj as i64, base.step(yj)?);
        r.num(cj / b, sj, mj)?
            .num(cj * b / a, sj, mj)?
            .den(cj, sj, mj)?
            .den(cj / a, sj, mj)?;
    }
    Ok(r.value())
}

/// Both sides of the two-row transformation with `|m| = L + N`. The right
/// side is the prefactor times each term of the dual series in
/// `(b²/a, b, L, N, b c_j/a)`.
pub fn trc_sides(inst: &TwoTermInstance) -> Result<Sides> {
    let (n, big_l) = (inst.n as i64, inst.big_l as i64);
    inst.check_shape(n + big_l)?;
    let (a, b, base) = (inst.a(), inst.b, &inst.base);
    let big_y = base.units() as i64;
    let q = base.q();
    let lhs = series_terms(a, b, n, big_l, &inst.c, &inst.m, &inst.y, base)?;

    let mut pre = Prod::new(base);
    pre.num(a * q, big_y, n)?
        .num(q, big_y, n)?
        .den(b * q, big_y, n)?
        .den(a * q / b, big_y, n)?
        .num(b * q, big_y, big_l)?
        .num(b * q / a, big_y, big_l)?
        .den(b * b * q / a, big_y, big_l)?
        .den(q, big_y, big_l)?
        .times(c_ratio(a, b, &inst.c, &inst.m, &inst.y, base)?);
    let pre = pre.value();

    let dual_c: Vec<Complex> = inst.c.iter().map(|&cj| b * cj / a).collect();
    let rhs = series_terms(b * b / a, b, big_l, n, &dual_c, &inst.m, &inst.y, base)?
        .into_iter()
        .map(|t| pre * t)
        .collect();
    Ok(Sides { lhs, rhs })
}

pub fn trc_residual(inst: &TwoTermInstance) -> Result<Residual> {
    Ok(trc_sides(inst)?.residual())
}

#[allow(clippy::too_many_arguments)]
fn mbkms_sides_raw(
    a: Complex,
    b: Complex,
    n: u32,
    c: &[Complex],
    m: &[u32],
    y: &[u32],
    base: &RefinedBase,
) -> Result<Sides> {
    let n = n as i64;
    let big_y = base.units() as i64;
    let q = base.q();
    let lhs = series_terms(a, b, n, 0, c, m, y, base)?;
    let mut r = Prod::new(base);
    r.num(a * q, big_y, n)?
        .num(q, big_y, n)?
        .den(b * q, big_y, n)?
        .den(a * q / b, big_y, n)?
        .times(c_ratio(a, b, c, m, y, base)?);
    Ok(Sides {
        lhs,
        rhs: vec![r.value()],
    })
}

/// Both sides of the summation obtained from [`trc_sides`] at `L = 0`;
/// requires `|m| = N`.
pub fn mbkms_sides(inst: &TwoTermInstance) -> Result<Sides> {
    if inst.big_l != 0 {
        return Err(Error::InvalidParameter(format!(
            "the summation needs L = 0, got L = {}",
            inst.big_l
        )));
    }
    inst.check_shape(inst.n as i64)?;
    mbkms_sides_raw(
        inst.a(),
        inst.b,
        inst.n,
        &inst.c,
        &inst.m,
        &inst.y,
        &inst.base,
    )
}

pub fn mbkms_residual(inst: &TwoTermInstance) -> Result<Residual> {
    Ok(mbkms_sides(inst)?.residual())
}

/// Both sides of
///
/// ```text
/// Σ_{k=0}^N θ(aq^{2ks})/θ(a) (a, q^{-Ns}, b, a/b; q^s)_k / (q^s, aq^{(N+1)s}, aq^s/b, bq^s; q^s)_k
///     (cq^N, aq/c; q)_{sk} / (aq^{1-N}/c, c; q)_{sk} q^{sk}
///   = (aq^s, q^s; q^s)_N / (bq^s, aq^s/b; q^s)_N (c/b, bc/a; q)_N / (c, c/a; q)_N
/// ```
pub fn wbb_sides(inst: &WbbInstance) -> Result<Sides> {
    inst.check()?;
    let (a, b, c, base) = (inst.a, inst.b, inst.c, &inst.base);
    let (s, n) = (inst.s as i64, inst.n as i64);
    let big_y = base.units() as i64;
    let big_s = big_y * s;
    let q = base.q();
    let qs = base.q_pow(s);
    let mut lhs = Vec::with_capacity(n as usize + 1);
    for k in 0..=n {
        let mut t = Prod::new(base);
        t.theta(a * base.q_pow(2 * k * s))?
            .theta_den(a)?
            .num(a, big_s, k)?
            .num(base.q_pow(-n * s), big_s, k)?
            .num(b, big_s, k)?
            .num(a / b, big_s, k)?
            .den(qs, big_s, k)?
            .den(a * base.q_pow((n + 1) * s), big_s, k)?
            .den(a * qs / b, big_s, k)?
            .den(b * qs, big_s, k)?
            .num(c * base.q_pow(n), big_y, s * k)?
            .num(a * q / c, big_y, s * k)?
            .den(a * base.q_pow(1 - n) / c, big_y, s * k)?
            .den(c, big_y, s * k)?
            .times(base.q_pow(s * k));
        lhs.push(t.value());
    }
    let mut r = Prod::new(base);
    r.num(a * qs, big_s, n)?
        .num(qs, big_s, n)?
        .den(b * qs, big_s, n)?
        .den(a * qs / b, big_s, n)?
        .num(c / b, big_y, n)?
        .num(b * c / a, big_y, n)?
        .den(c, big_y, n)?
        .den(c / a, big_y, n)?;
    Ok(Sides {
        lhs,
        rhs: vec![r.value()],
    })
}

pub fn wbb_residual(inst: &WbbInstance) -> Result<Residual> {
    Ok(wbb_sides(inst)?.residual())
}

/// The bibasic sum as the one-progression summation in base `q^s` with
/// `y = s`, `m = N`.
pub fn wbb_via_mbkms(inst: &WbbInstance) -> Result<Sides> {
    inst.check()?;
    let coarse = inst.base.coarsened(inst.s)?;
    mbkms_sides_raw(
        inst.a,
        inst.b,
        inst.n,
        &[inst.c],
        &[inst.n],
        &[inst.s],
        &coarse,
    )
}

/// The bibasic sum as the base-`q^s` summation with the progression
/// `c, cq, …, cq^{N-1}` split by residue mod `s`: `c_u = c q^u` with
/// `m_u = ⌈(N-u)/s⌉`.
pub fn wbb_via_kmsi(inst: &WbbInstance) -> Result<Sides> {
    inst.check()?;
    let coarse = inst.base.coarsened(inst.s)?;
    let (mut c, mut m) = (Vec::new(), Vec::new());
    for u in 0..inst.s.min(inst.n) {
        c.push(inst.c * inst.base.q_pow(u as i64));
        m.push((inst.n - u).div_ceil(inst.s));
    }
    kmsi_sides(inst.a, inst.b, &c, &m, inst.n, &coarse)
}
