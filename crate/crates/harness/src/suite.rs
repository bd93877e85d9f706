use std::time::{Duration, Instant};

use ellipsum_core::inversion::{
    g_entry, gustafson_residual, gustafson_terms, mipf_as_gustafson, mipf_residual, mipf_terms,
    orthogonality_residual, tannery_molk_residual,
};
use ellipsum_core::km::{
    akms_residual, akms_sides, akmt_residual, akmt_sides, atr_apf_terms, atr_residual, atr_terms,
    bracket_residual, induction_step, kmsi_residual, kmt_dpf_terms, kmt_residual, kmt_terms,
    kmt_unit_y, mbkms_residual, mbkms_sides, solve_balance, termwise_gap, theta_split_residual,
    trc_residual, trc_sides, wbb_residual, wbb_sides, wbb_via_mbkms, BalanceProblem,
    TwoTermInstance,
};
use ellipsum_core::operator::{
    dual_eq_residual, functional_eq_residual, normalizer, reconstruction_residual, v_star_h_parts,
    OperatorContext,
};
use ellipsum_core::pochhammer::{residual_epdi, residual_epi, residual_xsk};
use ellipsum_core::theta::{residual_addition, residual_inversion, residual_quasiperiod};
use ellipsum_core::{
    Complex, Error, LaurentWindow, MatrixWindow, Orthogonality, Residual, Result, SequencePair,
};

use crate::config::{SamplerConfig, Shape};
use crate::identity::Identity;
use crate::sampler::{resolve_shape, sample_evaluated, Instance, ParamValue, Params};
use crate::HarnessError;

/// Outcome of one `(identity, trial)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialReport {
    pub identity: Identity,
    pub trial: u32,
    /// `None` when no instance could be sampled.
    pub shape: Option<Shape>,
    pub params: Vec<(&'static str, ParamValue)>,
    /// Relative residual; NaN when evaluation failed.
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub error: Option<String>,
    pub wall_time: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub seed: u64,
    pub trials: u32,
    pub tolerance: f64,
    pub identities: Vec<Identity>,
    /// Ordered by identity, then trial.
    pub reports: Vec<TrialReport>,
}

impl SuiteReport {
    /// 0 when every trial passes, 2 when some trial could not be sampled or
    /// evaluated, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.reports.iter().any(|r| r.error.is_some()) {
            2
        } else if self.reports.iter().any(|r| !r.pass) {
            1
        } else {
            0
        }
    }

    pub fn all_pass(&self) -> bool {
        self.reports.iter().all(|r| r.pass)
    }

    /// Largest residual per identity, in report order.
    pub fn max_residuals(&self) -> Vec<(Identity, f64)> {
        let mut out: Vec<(Identity, f64)> = Vec::new();
        for r in &self.reports {
            match out.last_mut() {
                Some((id, worst)) if *id == r.identity => *worst = worse(*worst, r.residual),
                _ => out.push((r.identity, r.residual)),
            }
        }
        out
    }
}

/// The larger of two residuals, with NaN counting as the largest.
pub fn worse(x: f64, y: f64) -> f64 {
    if x.is_nan() || y.is_nan() {
        f64::NAN
    } else {
        x.max(y)
    }
}

/// `reconstruct_g` at `(k, l)` as its two operator terms over the
/// normalizer.
fn reconstruction_terms(ctx: &OperatorContext, k: i64, l: i64) -> Result<[Complex; 2]> {
    let (a, c) = v_star_h_parts(ctx, k)?;
    let norm = normalizer(ctx, k)?;
    let part = |w: &LaurentWindow| {
        w.coeff(-l)
            .map(|x| x / norm)
            .ok_or_else(|| Error::InsufficientWindow(format!("z^{} of V*h_{k}", -l)))
    };
    Ok([part(&a)?, part(&c)?])
}

/// Worst of the functional and dual equations over every column, and of
/// `reconstruct_g` against both the closed form and a second pair of
/// multipliers.
fn operator_residual(first: &OperatorContext, second: &OperatorContext) -> Result<f64> {
    let seq = first.seq();
    let (lo, hi) = (seq.lo(), seq.hi());
    let mut worst = 0.0_f64;
    for k in lo..=hi {
        worst = worse(worst, functional_eq_residual(first, k)?.relative);
        worst = worse(worst, dual_eq_residual(first, k)?.relative);
        for l in lo..=k {
            let want = g_entry(seq, k, l)?;
            worst = worse(worst, reconstruction_residual(first, k, l, want)?.relative);
            let [x1, x2] = reconstruction_terms(first, k, l)?;
            let [y1, y2] = reconstruction_terms(second, k, l)?;
            worst = worse(worst, Residual::from_terms([x1, -x2, -y1, y2]).relative);
        }
    }
    Ok(worst)
}

/// Largest gap between the numerical inverse of the f-window and the
/// g-window, entry by entry, each measured against the first-order
/// perturbation bound `(|G| |F| |G|)_rc` of that entry.
fn inverse_deviation(seq: &SequencePair) -> Result<f64> {
    let (lo, hi) = (seq.lo(), seq.hi());
    let f = MatrixWindow::f_window(seq, lo, hi)?;
    let g = MatrixWindow::g_window(seq, lo, hi)?;
    let x = f.inverse()?;
    let mut worst = 0.0_f64;
    for r in lo..=hi {
        for c in lo..=r {
            let mut bound = 0.0;
            for m in c..=r {
                for n in c..=m {
                    bound += g.get(r, m).norm() * f.get(m, n).norm() * g.get(n, c).norm();
                }
            }
            worst = worse(worst, (x.get(r, c) - g.get(r, c)).norm() / bound);
        }
    }
    Ok(worst)
}

fn akmt_roots_residual(inst: &TwoTermInstance) -> Result<f64> {
    let problem = BalanceProblem::Npc {
        n: inst.n,
        big_l: inst.big_l,
        c: inst.c.clone(),
        m: inst.m.clone(),
        y: inst.y.clone(),
    };
    let mut worst = 0.0_f64;
    for b in solve_balance(&problem, &inst.base)?.roots {
        let root = TwoTermInstance { b, ..inst.clone() };
        worst = worse(worst, akmt_residual(&root)?.relative);
    }
    Ok(worst)
}

fn mismatch(identity: Identity) -> Error {
    Error::InvalidParameter(format!("parameters do not fit {identity}"))
}

/// Relative residual of one instance. For the cross-route identities this is
/// the disagreement between the two routes.
pub fn evaluate(inst: &Instance) -> Result<f64> {
    use Identity::*;
    let shape = &inst.shape;
    let id = inst.identity;
    let n = shape.n.unwrap_or(0);
    let r = match (&inst.params, id) {
        (Params::Theta { x, nome, .. }, ThetaInversion) => residual_inversion(*x, nome)?.relative,
        (Params::Theta { x, nome, .. }, ThetaQuasiperiod) => {
            residual_quasiperiod(*x, nome)?.relative
        }
        (Params::Theta { x, y, u, v, nome }, ThetaAddition) => {
            residual_addition(*x, *y, *u, *v, nome)?.relative
        }
        (Params::Pochhammer { a, b, base }, Epdi) => {
            residual_epdi(*a, *b, n, shape.k.unwrap_or(0), base)?.relative
        }
        (Params::Pochhammer { a, b, base }, Epi) => residual_epi(*a, *b, n, base)?.relative,
        (Params::Pochhammer { a, base, .. }, Xsk) => {
            residual_xsk(*a, shape.s.unwrap_or(1), shape.k.unwrap_or(0), base)?.relative
        }
        (Params::Window(seq), Wmi) => {
            orthogonality_residual(seq, seq.lo(), seq.hi(), Orthogonality::Wmi)?.relative
        }
        (Params::Window(seq), Pmi) => {
            orthogonality_residual(seq, seq.lo(), seq.hi(), Orthogonality::Pmi)?.relative
        }
        (Params::Window(seq), GInverse) => inverse_deviation(seq)?,
        (Params::Window(seq), Mipf) => mipf_residual(seq, seq.lo(), seq.hi())?.relative,
        (Params::Window(seq), MipfRelabel) => {
            let (lo, hi) = (seq.lo(), seq.hi());
            let (a, b, ratio) = mipf_as_gustafson(seq, lo, hi)?;
            let relabeled: Vec<Complex> = gustafson_terms(&a, &b, seq.nome())?
                .into_iter()
                .map(|t| ratio * t)
                .collect();
            termwise_gap(&mipf_terms(seq, lo, hi)?, &relabeled)
        }
        (Params::Operator { first, second }, Operator) => operator_residual(first, second)?,
        (Params::Lists { a, b, nome }, Dpf) => gustafson_residual(a, b, nome)?.relative,
        (Params::Lists { a, b, nome }, Apf) => tannery_molk_residual(a, b, nome)?.relative,
        (Params::Km(k), Kmt) => kmt_residual(k)?.relative,
        (Params::Km(k), KmtDpf) => termwise_gap(&kmt_terms(k)?, &kmt_dpf_terms(k)?),
        (Params::Km(k), KmtUnitY) => {
            let unit = kmt_unit_y(k)?;
            worse(
                termwise_gap(&kmt_terms(k)?, &kmt_terms(&unit)?),
                kmt_residual(&unit)?.relative,
            )
        }
        (Params::Km(k), Atr) => atr_residual(k)?.relative,
        (Params::Km(k), AtrApf) => termwise_gap(&atr_terms(k)?, &atr_apf_terms(k)?),
        (Params::TwoTerm(t), Kmsi) => kmsi_residual(t.a(), t.b, &t.c, &t.m, t.n, &t.base)?.relative,
        (Params::Wbb(w), Wbb) => wbb_residual(w)?.relative,
        (Params::Wbb(w), WbbMbkms) => wbb_sides(w)?.discrepancy(&wbb_via_mbkms(w)?).relative,
        (Params::TwoTerm(t), Trc) => trc_residual(t)?.relative,
        (Params::TwoTerm(t), TrcMbkms) => trc_sides(t)?.discrepancy(&mbkms_sides(t)?).relative,
        (Params::TwoTerm(t), Mbkms) => mbkms_residual(t)?.relative,
        (Params::TwoTerm(t), Akmt) => akmt_residual(t)?.relative,
        (Params::TwoTerm(t), AkmtRoots) => akmt_roots_residual(t)?,
        (Params::TwoTerm(t), Akms) => akms_residual(t.n, &t.c, &t.m, &t.y, &t.base)?.relative,
        (Params::TwoTerm(t), AkmtAkms) => {
            akmt_sides(t)?
                .discrepancy(&akms_sides(t.n, &t.c, &t.m, &t.y, &t.base)?)
                .relative
        }
        (Params::TwoTerm(t), ThetaSplit) => {
            let mut worst = 0.0_f64;
            for k in 0..=t.n as i64 + 1 {
                worst = worse(worst, theta_split_residual(t, k)?.relative);
            }
            worst
        }
        (Params::TwoTerm(t), Bracket) => {
            bracket_residual(t.a(), t.b, t.c[0], t.m[0], t.n, &t.base)?.relative
        }
        (Params::TwoTerm(t), Induction) => induction_step(t)?.residual.relative,
        _ => return Err(mismatch(id)),
    };
    Ok(r)
}

/// Up-front check that every explicit shape names a known identity and is
/// structurally admissible.
pub fn check_shapes(cfg: &SamplerConfig) -> std::result::Result<(), HarnessError> {
    for spec in &cfg.shapes {
        let id: Identity = spec.identity.parse()?;
        resolve_shape(id, &spec.shape)?;
    }
    Ok(())
}

fn run_trial(cfg: &SamplerConfig, identity: Identity, trial: u32, tolerance: f64) -> TrialReport {
    let start = Instant::now();
    let outcome = sample_evaluated(cfg, identity, trial);
    let wall_time = start.elapsed();
    match outcome {
        Ok((inst, residual)) => TrialReport {
            identity,
            trial,
            params: inst.param_fields(),
            shape: Some(inst.shape),
            residual,
            tolerance,
            pass: residual < tolerance,
            error: None,
            wall_time,
        },
        Err(e) => TrialReport {
            identity,
            trial,
            shape: None,
            params: Vec::new(),
            residual: f64::NAN,
            tolerance,
            pass: false,
            error: Some(e.to_string()),
            wall_time,
        },
    }
}

/// Runs `cfg.trials` trials of every identity. Shape errors abort the run;
/// sampling and evaluation errors become failed trials.
pub fn run_suite(
    cfg: &SamplerConfig,
    identities: &[Identity],
    tolerance: f64,
) -> std::result::Result<SuiteReport, HarnessError> {
    check_shapes(cfg)?;
    let mut ids = identities.to_vec();
    ids.sort();
    ids.dedup();
    let jobs: Vec<(Identity, u32)> = ids
        .iter()
        .flat_map(|&id| (0..cfg.trials).map(move |t| (id, t)))
        .collect();
    let workers = std::thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(jobs.len().max(1));
    let chunk = jobs.len().div_ceil(workers).max(1);
    let reports = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .chunks(chunk)
            .map(|part| {
                scope.spawn(move || {
                    part.iter()
                        .map(|&(id, t)| run_trial(cfg, id, t, tolerance))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("trial worker panicked"))
            .collect()
    });
    Ok(SuiteReport {
        seed: cfg.seed,
        trials: cfg.trials,
        tolerance,
        identities: ids,
        reports,
    })
}
