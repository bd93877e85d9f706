use crate::error::{Error, Result};
use crate::inversion::gustafson_terms;
use crate::residual::Residual;
use crate::Complex;

use super::instance::{KmInstance, KmMode};
use super::Prod;

fn require_mode(inst: &KmInstance, mode: KmMode) -> Result<()> {
    if inst.mode != mode {
        return Err(Error::InvalidParameter(format!(
            "instance is in {:?} mode, expected {mode:?}",
            inst.mode
        )));
    }
    inst.validate()
}

/// The `(i, k)` terms of the multiterm transformation, row by row: outer
/// prefactor of row `i` times the `k`-th inner summand, `0 ≤ k ≤ l_i`.
pub fn kmt_terms(inst: &KmInstance) -> Result<Vec<Complex>> {
    require_mode(inst, KmMode::Kmt)?;
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
        outer.times(ai);
        for (j, &bj) in inst.b.iter().enumerate() {
            let (mj, sj) = (inst.m[j] as i64, steps[j]);
            outer
                .num(ai * bj, sj, mj)?
                .num(ai * base.pow(sj * (1 - mj)) / bj, sj, mj)?;
        }
        outer
            .den(ai * ai * q, big_y, li)?
            .den(base.q_pow(-li), big_y, li)?;
        for (j, &aj) in inst.a.iter().enumerate() {
            if j != i {
                let lj = inst.l[j] as i64;
                outer
                    .den(ai * aj, big_y, lj + 1)?
                    .den(ai * base.q_pow(-lj) / aj, big_y, lj + 1)?;
            }
        }
        let outer = outer.value();

        for k in 0..=li {
            let mut inner = Prod::new(base);
            inner
                .theta(ai * ai * base.q_pow(2 * k))?
                .theta_den(ai * ai)?
                .times(base.q_pow(k));
            for (j, &aj) in inst.a.iter().enumerate() {
                let lj = inst.l[j] as i64;
                inner
                    .num(ai * aj, big_y, k)?
                    .num(ai * base.q_pow(-lj) / aj, big_y, k)?
                    .den(ai * q / aj, big_y, k)?
                    .den(ai * aj * base.q_pow(lj + 1), big_y, k)?;
            }
            for (j, &bj) in inst.b.iter().enumerate() {
                let (mj, sj, len) = (inst.m[j] as i64, steps[j], inst.y[j] as i64 * k);
                inner
                    .num(ai * bj * base.pow(sj * mj), sj, len)?
                    .num(ai * base.pow(sj) / bj, sj, len)?
                    .den(ai * base.pow(sj * (1 - mj)) / bj, sj, len)?
                    .den(ai * bj, sj, len)?;
            }
            terms.push(outer * inner.value());
        }
    }
    Ok(terms)
}

pub fn kmt_residual(inst: &KmInstance) -> Result<Residual> {
    Ok(Residual::from_terms(kmt_terms(inst)?))
}

/// The same sum as the `dpf` identity with `a_i q^t` (`0 ≤ t ≤ l_i`) and
/// `b_j q^{t/y_j}` (`0 ≤ t < m_j`) substituted; termwise equal to
/// [`kmt_terms`].
pub fn kmt_dpf_terms(inst: &KmInstance) -> Result<Vec<Complex>> {
    require_mode(inst, KmMode::Kmt)?;
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
    gustafson_terms(&a, &b, base.nome())
}

/// Rewrite with every `y_j = 1`: the progression `b_j q^{t/y_j}` splits by
/// `t mod y_j` into `min(y_j, m_j)` progressions in base `q`.
pub fn kmt_unit_y(inst: &KmInstance) -> Result<KmInstance> {
    let base = &inst.base;
    let (mut b, mut m) = (Vec::new(), Vec::new());
    for ((&bj, &mj), &yj) in inst.b.iter().zip(&inst.m).zip(&inst.y) {
        let sj = base.step(yj)?;
        for u in 0..yj.min(mj) {
            b.push(bj * base.pow(sj * u as i64));
            m.push((mj - u).div_ceil(yj));
        }
    }
    let y = vec![1; b.len()];
    Ok(KmInstance {
        b,
        m,
        y,
        ..inst.clone()
    })
}
