use crate::error::{Error, Result};
use crate::inversion::tannery_molk_terms;
use crate::residual::Residual;
use crate::Complex;

use super::instance::{KmInstance, KmMode};
use super::Prod;

fn require_atr(inst: &KmInstance) -> Result<()> {
    if inst.mode != KmMode::Atr {
        return Err(Error::InvalidParameter(format!(
            "instance is in {:?} mode, expected Atr",
            inst.mode
        )));
    }
    inst.validate()
}

/// The `(i, k)` terms of the Tannery–Molk analogue of the multiterm
/// transformation. Same layout as [`kmt_terms`](super::kmt_terms), with the
/// `a_i q^k` factor and every factor built from a product of parameters
/// removed.
pub fn atr_terms(inst: &KmInstance) -> Result<Vec<Complex>> {
    require_atr(inst)?;
    let base = &inst.base;
    let big_y = base.units() as i64;
    let q = base.q();
    let steps = inst
        .y
        .iter()
        .map(|&y| base.step(y))
        .collect::<Result<Vec<_>>>()?;
    let mut terms = Vec::new();
    for (i, &ai) in inst.a.iter().enumerate() {
        let li = inst.l[i] as i64;
        let mut outer = Prod::new(base);
        for (j, &bj) in inst.b.iter().enumerate() {
            let (mj, sj) = (inst.m[j] as i64, steps[j]);
            outer.num(ai * base.pow(sj * (1 - mj)) / bj, sj, mj)?;
        }
        outer.den(base.q_pow(-li), big_y, li)?;
        for (j, &aj) in inst.a.iter().enumerate() {
            if j != i {
                let lj = inst.l[j] as i64;
                outer.den(ai * base.q_pow(-lj) / aj, big_y, lj + 1)?;
            }
        }
        let outer = outer.value();

        for k in 0..=li {
            let mut inner = Prod::new(base);
            for (j, &aj) in inst.a.iter().enumerate() {
                let lj = inst.l[j] as i64;
                inner
                    .num(ai * base.q_pow(-lj) / aj, big_y, k)?
                    .den(ai * q / aj, big_y, k)?;
            }
            for (j, &bj) in inst.b.iter().enumerate() {
                let (mj, sj, len) = (inst.m[j] as i64, steps[j], inst.y[j] as i64 * k);
                inner.num(ai * base.pow(sj) / bj, sj, len)?.den(
                    ai * base.pow(sj * (1 - mj)) / bj,
                    sj,
                    len,
                )?;
            }
            terms.push(outer * inner.value());
        }
    }
    Ok(terms)
}

pub fn atr_residual(inst: &KmInstance) -> Result<Residual> {
    Ok(Residual::from_terms(atr_terms(inst)?))
}

/// The Tannery–Molk sum with the geometric progressions substituted;
/// termwise equal to [`atr_terms`].
pub fn atr_apf_terms(inst: &KmInstance) -> Result<Vec<Complex>> {
    require_atr(inst)?;
    let base = &inst.base;
    let a = inst
        .a
        .iter()
        .zip(&inst.l)
        .flat_map(|(&ai, &li)| (0..=li as i64).map(move |t| ai * base.q_pow(t)))
        .collect::<Vec<_>>();
    let mut b = Vec::new();
    for ((&bj, &mj), &yj) in inst.b.iter().zip(&inst.m).zip(&inst.y) {
        let sj = base.step(yj)?;
        b.extend((0..mj as i64).map(|t| bj * base.pow(sj * t)));
    }
    tannery_molk_terms(&a, &b, base.nome())
}
