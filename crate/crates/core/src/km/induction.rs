//! Induction on `N` for the general summation: the step from `N` to `N + 1`
//! splits the `N + 1` sum into two sums of length `N`, each evaluated in
//! closed form, and recombines them with the addition formula.

use crate::error::{Error, Result};
use crate::pochhammer::RefinedBase;
use crate::residual::{Residual, TermSum};
use crate::Complex;

use super::instance::TwoTermInstance;
use super::sums::kmsi_sides;
use super::Prod;

/// Index of the progression the step is split along: the last one with
/// `m_j ≥ 1`.
fn split_index(m: &[u32]) -> Result<usize> {
    m.iter()
        .rposition(|&mj| mj >= 1)
        .ok_or_else(|| Error::InvalidParameter("need some m_j ≥ 1".into()))
}

/// Residual of the theta identity used to multiply each term by one:
///
/// ```text
/// θ(aq^{k+N+1}, q^{k-N-1}, c_r q^{m_r-1}, aq^{1-m_r}/c_r)
///   - q^{-N-1} θ(aq^k, q^k, c_r q^{m_r+N}, aq^{2-m_r+N}/c_r)
///   - θ(aq^{N+1}, q^{-N-1}, c_r q^{m_r+k-1}, aq^{1-m_r+k}/c_r) = 0
/// ```
///
/// with `r` the last progression having `m_r ≥ 1`.
pub fn theta_split_residual(inst: &TwoTermInstance, k: i64) -> Result<Residual> {
    if inst.c.len() != inst.m.len() {
        return Err(Error::BadArity(format!(
            "{} c but {} m",
            inst.c.len(),
            inst.m.len()
        )));
    }
    let r = split_index(&inst.m)?;
    let (a, cr, mr) = (inst.a(), inst.c[r], inst.m[r] as i64);
    let n = inst.n as i64;
    let base = &inst.base;
    let nome = base.nome();
    let qp = |e: i64| base.q_pow(e);
    let first = nome.theta_multi(&[
        a * qp(k + n + 1),
        qp(k - n - 1),
        cr * qp(mr - 1),
        a * qp(1 - mr) / cr,
    ])?;
    let second = qp(-n - 1)
        * nome.theta_multi(&[a * qp(k), qp(k), cr * qp(mr + n), a * qp(2 - mr + n) / cr])?;
    let third = nome.theta_multi(&[
        a * qp(n + 1),
        qp(-n - 1),
        cr * qp(mr + k - 1),
        a * qp(1 - mr + k) / cr,
    ])?;
    Ok(Residual::from_terms([first, -second, -third]))
}

/// Residual of the bracket simplification
///
/// ```text
/// 1 - θ(b, a/b, c_r q^{N+m_r}, aq^{N+2-m_r}/c_r) / θ(bq^{N+1}, aq^{N+1}/b, c_r q^{m_r-1}, aq^{1-m_r}/c_r)
///   = θ(q^{N+1}, aq^{N+1}, q^{m_r-1}c_r/b, q^{m_r-1}c_r b/a)
///     / θ(bq^{N+1}, aq^{N+1}/b, q^{m_r-1}c_r, q^{m_r-1}c_r/a)
/// ```
pub fn bracket_residual(
    a: Complex,
    b: Complex,
    cr: Complex,
    mr: u32,
    n: u32,
    base: &RefinedBase,
) -> Result<Residual> {
    let (lhs, displayed) = bracket_forms(a, b, cr, mr as i64, n as i64, base)?;
    Ok(Residual::from_terms([
        Complex::new(1.0, 0.0),
        -lhs,
        -displayed,
    ]))
}

/// `(ratio, displayed)` with the bracket equal to `1 - ratio = displayed`.
fn bracket_forms(
    a: Complex,
    b: Complex,
    cr: Complex,
    mr: i64,
    n: i64,
    base: &RefinedBase,
) -> Result<(Complex, Complex)> {
    let qp = |e: i64| base.q_pow(e);
    let mut ratio = Prod::new(base);
    ratio
        .theta(b)?
        .theta(a / b)?
        .theta(cr * qp(n + mr))?
        .theta(a * qp(n + 2 - mr) / cr)?;
    let mut displayed = Prod::new(base);
    displayed
        .theta(qp(n + 1))?
        .theta(a * qp(n + 1))?
        .theta(qp(mr - 1) * cr / b)?
        .theta(qp(mr - 1) * cr * b / a)?;
    let mut den = Prod::new(base);
    den.theta_den(b * qp(n + 1))?
        .theta_den(a * qp(n + 1) / b)?
        .theta_den(cr * qp(mr - 1))?
        .theta_den(a * qp(1 - mr) / cr)?;
    let mut den2 = Prod::new(base);
    den2.theta_den(b * qp(n + 1))?
        .theta_den(a * qp(n + 1) / b)?
        .theta_den(qp(mr - 1) * cr)?
        .theta_den(qp(mr - 1) * cr / a)?;
    Ok((
        ratio.value() * den.value(),
        displayed.value() * den2.value(),
    ))
}

/// The step from `N` to `N + 1`, evaluated four ways.
#[derive(Debug, Clone, PartialEq)]
pub struct InductionStep {
    /// The `N + 1` sum term by term.
    pub direct: Vec<Complex>,
    /// The two length-`N` sums, term by term, the second already multiplied
    /// by its prefactor.
    pub split: Vec<Complex>,
    /// The two length-`N` sums replaced by their closed forms.
    pub hypothesis: [Complex; 2],
    /// The closed form after the bracket simplification.
    pub bracket: Complex,
    /// The closed form at `N + 1` read off directly.
    pub closed: Complex,
    /// Worst disagreement between `direct` and each of the other routes.
    pub residual: Residual,
}

/// The induction step for an instance with `L = 0`, unit steps and
/// `|m| = N + 1` (here `N` is `inst.n`, the length the hypothesis is
/// applied at).
pub fn induction_step(inst: &TwoTermInstance) -> Result<InductionStep> {
    if inst.big_l != 0 || inst.y.iter().any(|&y| y != 1) {
        return Err(Error::InvalidParameter(
            "the induction step needs L = 0 and every y_j = 1".into(),
        ));
    }
    let n = inst.n;
    inst.check_shape(n as i64 + 1)?;
    let r = split_index(&inst.m)?;
    let (a, b, base) = (inst.a(), inst.b, &inst.base);
    let q = base.q();
    let qp = |e: i64| base.q_pow(e);
    let (cr, mr) = (inst.c[r], inst.m[r] as i64);
    let ni = n as i64;

    let target = kmsi_sides(a, b, &inst.c, &inst.m, n + 1, base)?;

    let mut m1 = inst.m.clone();
    m1[r] -= 1;
    let first = kmsi_sides(a, b, &inst.c, &m1, n, base)?;
    let shifted_c: Vec<Complex> = inst.c.iter().map(|&cj| cj * q).collect();
    let second = kmsi_sides(a * q * q, b * q, &shifted_c, &m1, n, base)?;

    let mut pre = Prod::new(base);
    pre.times(-qp(-ni))
        .theta(a * q)?
        .theta(a * q * q)?
        .theta(b)?
        .theta(a / b)?
        .theta(cr * qp(mr + ni))?
        .theta(a * q / cr)?
        .theta(a * qp(2 - mr + ni) / cr)?
        .theta_den(a * q / b)?
        .theta_den(b * q)?
        .theta_den(a * qp(ni + 1))?
        .theta_den(a * qp(ni + 2))?
        .theta_den(a * qp(1 - mr) / cr)?
        .theta_den(a * qp(2 - mr) / cr)?
        .theta_den(cr)?;
    for (j, (&cj, &mj)) in inst.c.iter().zip(&inst.m).enumerate() {
        if j != r {
            pre.theta(cj * qp(mj as i64))?
                .theta(a * q / cj)?
                .theta_den(a * qp(1 - mj as i64) / cj)?
                .theta_den(cj)?;
        }
    }
    let pre = pre.value();

    let split: Vec<Complex> = first
        .lhs
        .iter()
        .copied()
        .chain(second.lhs.iter().map(|t| pre * t))
        .collect();
    let hypothesis = [first.rhs_total(), pre * second.rhs_total()];
    let (_, displayed) = bracket_forms(a, b, cr, mr, ni, base)?;
    let bracket = first.rhs_total() * displayed;
    let closed = target.rhs_total();

    let against = |other: &[Complex]| {
        let mut acc = TermSum::new();
        acc.extend(target.lhs.iter().copied());
        acc.extend(other.iter().map(|t| -t));
        acc.residual()
    };
    let residual = against(&split)
        .worst(against(&hypothesis))
        .worst(against(&[bracket]))
        .worst(against(&[closed]));

    Ok(InductionStep {
        direct: target.lhs,
        split,
        hypothesis,
        bracket,
        closed,
        residual,
    })
}
