use std::f64::consts::PI;

use ellipsum_core::inversion::SequencePair;
use ellipsum_core::km::{
    akms_b, solve_balance, BalanceProblem, FreeParam, KmInstance, KmMode, TwoTermInstance,
    WbbInstance,
};
use ellipsum_core::operator::OperatorContext;
use ellipsum_core::theta::zero_distance;
use ellipsum_core::{Complex, Error, Nome, RefinedBase};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::{SamplerConfig, Shape, ShapeBounds};
use crate::identity::Identity;
use crate::suite::evaluate;
use crate::HarnessError;

/// A sampled instance of one identity.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub identity: Identity,
    pub trial: u32,
    pub shape: Shape,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Params {
    Theta {
        x: Complex,
        y: Complex,
        u: Complex,
        v: Complex,
        nome: Nome,
    },
    Pochhammer {
        a: Complex,
        b: Complex,
        base: RefinedBase,
    },
    Window(SequencePair),
    Operator {
        first: OperatorContext,
        second: OperatorContext,
    },
    Lists {
        a: Vec<Complex>,
        b: Vec<Complex>,
        nome: Nome,
    },
    Km(KmInstance),
    TwoTerm(TwoTermInstance),
    Wbb(WbbInstance),
}

/// One reported parameter value.
#[derive(Debug, Clone, PartialEq)]
pub enum ParamValue {
    Int(i64),
    Scalar(Complex),
    List(Vec<Complex>),
}

fn window_lists(seq: &SequencePair) -> (Vec<Complex>, Vec<Complex>) {
    let a = (seq.lo()..=seq.hi())
        .map(|j| seq.a(j).expect("inside window"))
        .collect();
    let c = (seq.lo()..=seq.hi())
        .map(|j| seq.c(j).expect("inside window"))
        .collect();
    (a, c)
}

impl Instance {
    pub fn nome(&self) -> Nome {
        match &self.params {
            Params::Theta { nome, .. } | Params::Lists { nome, .. } => *nome,
            Params::Pochhammer { base, .. } => *base.nome(),
            Params::Window(seq) => *seq.nome(),
            Params::Operator { first, .. } => *first.seq().nome(),
            Params::Km(inst) => *inst.base.nome(),
            Params::TwoTerm(inst) => *inst.base.nome(),
            Params::Wbb(inst) => *inst.base.nome(),
        }
    }

    fn base(&self) -> Option<&RefinedBase> {
        match &self.params {
            Params::Pochhammer { base, .. } => Some(base),
            Params::Km(inst) => Some(&inst.base),
            Params::TwoTerm(inst) => Some(&inst.base),
            Params::Wbb(inst) => Some(&inst.base),
            _ => None,
        }
    }

    /// Parameter values in a fixed order, `p` first.
    pub fn param_fields(&self) -> Vec<(&'static str, ParamValue)> {
        use ParamValue::*;
        let mut out = vec![("p", Scalar(self.nome().p()))];
        if let Some(base) = self.base() {
            out.push(("q_star", Scalar(base.q_star())));
            out.push(("Y", Int(base.units() as i64)));
        }
        match &self.params {
            Params::Theta { x, y, u, v, .. } => {
                out.push(("x", Scalar(*x)));
                if self.identity == Identity::ThetaAddition {
                    out.extend([("y", Scalar(*y)), ("u", Scalar(*u)), ("v", Scalar(*v))]);
                }
            }
            Params::Pochhammer { a, b, .. } => {
                out.push(("a", Scalar(*a)));
                if self.identity != Identity::Xsk {
                    out.push(("b", Scalar(*b)));
                }
            }
            Params::Window(seq) => {
                let (a, c) = window_lists(seq);
                out.extend([("lo", Int(seq.lo())), ("a", List(a)), ("c", List(c))]);
            }
            Params::Operator { first, second } => {
                let (a, c) = window_lists(first.seq());
                out.extend([
                    ("lo", Int(first.seq().lo())),
                    ("a", List(a)),
                    ("c", List(c)),
                    ("u", Scalar(first.u())),
                    ("v", Scalar(first.v())),
                    ("u2", Scalar(second.u())),
                    ("v2", Scalar(second.v())),
                ]);
            }
            Params::Lists { a, b, .. } => {
                out.extend([("a", List(a.clone())), ("b", List(b.clone()))]);
            }
            Params::Km(inst) => {
                out.extend([("a", List(inst.a.clone())), ("b", List(inst.b.clone()))]);
            }
            Params::TwoTerm(inst) => {
                out.extend([
                    ("alpha", Scalar(inst.alpha)),
                    ("b", Scalar(inst.b)),
                    ("c", List(inst.c.clone())),
                ]);
            }
            Params::Wbb(inst) => {
                out.extend([
                    ("a", Scalar(inst.a)),
                    ("b", Scalar(inst.b)),
                    ("c", Scalar(inst.c)),
                ]);
            }
        }
        out
    }
}

fn fnv1a(text: &str) -> u64 {
    text.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3)
    })
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

/// Generator for one `(seed, identity, trial)`: the key picks the ChaCha
/// key, the trial picks the stream.
pub fn trial_rng(seed: u64, identity: Identity, trial: u32) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(splitmix64(seed ^ fnv1a(identity.name())));
    rng.set_stream(trial as u64);
    rng
}

fn bad_shape(identity: Identity, reason: impl Into<String>) -> HarnessError {
    HarnessError::BadShape {
        identity: identity.name().to_string(),
        reason: reason.into(),
    }
}

fn total(v: &[u32]) -> u32 {
    v.iter().sum()
}

fn gcd(a: u32, b: u32) -> u32 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn lcm(v: &[u32]) -> u32 {
    v.iter().fold(1, |acc, &x| acc / gcd(acc, x) * x)
}

/// Splits `sum` into `parts` entries of at most `cap` each.
fn split(rng: &mut ChaCha8Rng, sum: u32, parts: u32, cap: u32) -> Option<Vec<u32>> {
    if sum > parts * cap {
        return None;
    }
    let mut out = vec![0; parts as usize];
    for _ in 0..sum {
        let open: Vec<usize> = (0..out.len()).filter(|&j| out[j] < cap).collect();
        out[open[rng.random_range(0..open.len())]] += 1;
    }
    Some(out)
}

fn steps(rng: &mut ChaCha8Rng, parts: usize, y_max: u32) -> Vec<u32> {
    (0..parts).map(|_| rng.random_range(1..=y_max)).collect()
}

/// Draws a shape within `bounds` satisfying the identity's structural
/// constraint.
fn draw_shape(identity: Identity, b: &ShapeBounds, rng: &mut ChaCha8Rng) -> Shape {
    use Identity::*;
    let mut shape = Shape::default();
    // shapes tied to two-row sums: |m| = n + extra
    let two_row =
        |rng: &mut ChaCha8Rng, shape: &mut Shape, big_l: u32, extra: u32, unit_y: bool| loop {
            let r = rng.random_range(1..=b.r_max);
            let n = rng.random_range(0..=b.n_max);
            if let Some(m) = split(rng, n + extra, r, b.m_max) {
                shape.n = Some(n);
                shape.y = Some(if unit_y {
                    vec![1; m.len()]
                } else {
                    steps(rng, m.len(), b.y_max)
                });
                shape.m = Some(m);
                if big_l > 0 || matches!(identity, Trc | Akmt | AkmtRoots) {
                    shape.big_l = Some(big_l);
                }
                return;
            }
        };
    match identity {
        ThetaInversion | ThetaQuasiperiod | ThetaAddition => {}
        Epdi => {
            let n = rng.random_range(0..=b.n_max);
            shape.n = Some(n);
            shape.k = Some(rng.random_range(0..=n));
        }
        Epi => shape.n = Some(rng.random_range(0..=b.n_max)),
        Xsk => {
            shape.s = Some(rng.random_range(1..=b.s_max));
            shape.k = Some(rng.random_range(0..=b.n_max));
        }
        Wmi | Pmi => shape.size = Some(rng.random_range(1..=b.window_max)),
        GInverse | Mipf | MipfRelabel | Operator => {
            shape.size = Some(rng.random_range(2..=b.window_max))
        }
        Dpf => shape.n = Some(rng.random_range(2..=b.terms_max)),
        Apf => shape.n = Some(rng.random_range(1..=b.terms_max)),
        Kmt | KmtDpf | KmtUnitY | Atr | AtrApf => loop {
            let s = rng.random_range(1..=b.s_max);
            let r = rng.random_range(1..=b.r_max);
            let l: Vec<u32> = (0..s).map(|_| rng.random_range(0..=b.l_max)).collect();
            let want = total(&l) as i64 + s as i64
                - if matches!(identity, Atr | AtrApf) {
                    0
                } else {
                    2
                };
            if want < 0 {
                continue;
            }
            if let Some(m) = split(rng, want as u32, r, b.m_max) {
                shape.y = Some(steps(rng, m.len(), b.y_max));
                shape.l = Some(l);
                shape.m = Some(m);
                break;
            }
        },
        Kmsi => {
            two_row(rng, &mut shape, 0, 0, true);
            shape.y = None;
        }
        Wbb | WbbMbkms => {
            shape.s = Some(rng.random_range(1..=b.s_max));
            shape.n = Some(rng.random_range(0..=b.n_max));
        }
        Trc => {
            let big_l = rng.random_range(0..=b.big_l_max);
            two_row(rng, &mut shape, big_l, big_l, false);
        }
        TrcMbkms | Mbkms => two_row(rng, &mut shape, 0, 0, false),
        Akmt | AkmtRoots => {
            let big_l = rng.random_range(0..=b.big_l_max);
            two_row(rng, &mut shape, big_l, big_l + 2, false);
        }
        Akms | AkmtAkms => two_row(rng, &mut shape, 0, 2, false),
        ThetaSplit | Induction => {
            two_row(rng, &mut shape, 0, 1, true);
            shape.y = None;
        }
        Bracket => {
            shape.n = Some(rng.random_range(0..=b.n_max));
            shape.m = Some(vec![rng.random_range(1..=b.m_max)]);
        }
    }
    shape
}

/// Checks an explicit shape against the identity's structural constraint and
/// fills in defaults (`y` all ones, `L = 0`).
pub fn resolve_shape(identity: Identity, shape: &Shape) -> Result<Shape, HarnessError> {
    use Identity::*;
    let bad = |reason: &str| Err(bad_shape(identity, reason));
    let need = |v: Option<u32>, name: &str| {
        v.ok_or_else(|| bad_shape(identity, format!("missing {name}")))
    };
    let need_list = |v: &Option<Vec<u32>>, name: &str| {
        v.clone()
            .ok_or_else(|| bad_shape(identity, format!("missing {name}")))
    };
    let mut out = shape.clone();
    let with_y = |out: &mut Shape, m: &[u32]| -> Result<(), HarnessError> {
        let y = out.y.clone().unwrap_or_else(|| vec![1; m.len()]);
        if y.len() != m.len() {
            return Err(bad_shape(
                identity,
                format!("{} y for {} m", y.len(), m.len()),
            ));
        }
        if y.contains(&0) {
            return Err(bad_shape(identity, "every y_j must be positive"));
        }
        out.y = Some(y);
        Ok(())
    };
    match identity {
        ThetaInversion | ThetaQuasiperiod | ThetaAddition => {}
        Epdi => {
            if need(shape.k, "k")? > need(shape.n, "n")? {
                return bad("need k ≤ n");
            }
        }
        Epi => {
            need(shape.n, "n")?;
        }
        Xsk => {
            if need(shape.s, "s")? == 0 {
                return bad("need s ≥ 1");
            }
            need(shape.k, "k")?;
        }
        Wmi | Pmi => {
            if need(shape.size, "size")? == 0 {
                return bad("need size ≥ 1");
            }
        }
        GInverse | Mipf | MipfRelabel | Operator => {
            if need(shape.size, "size")? < 2 {
                return bad("need size ≥ 2");
            }
        }
        Dpf => {
            if need(shape.n, "n")? < 2 {
                return bad("need n ≥ 2");
            }
        }
        Apf => {
            if need(shape.n, "n")? < 1 {
                return bad("need n ≥ 1");
            }
        }
        Kmt | KmtDpf | KmtUnitY | Atr | AtrApf => {
            let l = need_list(&shape.l, "l")?;
            let m = need_list(&shape.m, "m")?;
            if l.is_empty() {
                return bad("need s ≥ 1");
            }
            with_y(&mut out, &m)?;
            let lhs = total(&l) + l.len() as u32;
            let rhs = total(&m)
                + if matches!(identity, Atr | AtrApf) {
                    0
                } else {
                    2
                };
            if lhs != rhs {
                return Err(bad_shape(
                    identity,
                    format!("|l| + s = {lhs} but the balance needs {rhs}"),
                ));
            }
        }
        Kmsi => {
            let n = need(shape.n, "n")?;
            let m = need_list(&shape.m, "m")?;
            if shape.y.is_some() {
                return bad("kmsi has no y");
            }
            if total(&m) != n {
                return Err(bad_shape(
                    identity,
                    format!("|m| = {} but N = {n}", total(&m)),
                ));
            }
        }
        Wbb | WbbMbkms => {
            if need(shape.s, "s")? == 0 {
                return bad("need s ≥ 1");
            }
            need(shape.n, "n")?;
        }
        Trc | TrcMbkms | Mbkms | Akmt | AkmtRoots | Akms | AkmtAkms => {
            let n = need(shape.n, "n")?;
            let m = need_list(&shape.m, "m")?;
            with_y(&mut out, &m)?;
            let big_l = shape.big_l.unwrap_or(0);
            let fixed_l = matches!(identity, TrcMbkms | Mbkms | Akms | AkmtAkms);
            if fixed_l && big_l != 0 {
                return bad("this identity has L = 0");
            }
            if matches!(identity, Trc | Akmt | AkmtRoots) {
                out.big_l = Some(big_l);
            }
            let extra = if matches!(identity, Akmt | AkmtRoots | Akms | AkmtAkms) {
                2
            } else {
                0
            };
            if total(&m) != n + big_l + extra {
                return Err(bad_shape(
                    identity,
                    format!(
                        "|m| = {} but the identity needs {}",
                        total(&m),
                        n + big_l + extra
                    ),
                ));
            }
        }
        ThetaSplit | Induction => {
            let n = need(shape.n, "n")?;
            let m = need_list(&shape.m, "m")?;
            if shape.y.is_some() {
                return bad("unit steps only");
            }
            if total(&m) != n + 1 {
                return Err(bad_shape(
                    identity,
                    format!("|m| = {} but N + 1 = {}", total(&m), n + 1),
                ));
            }
        }
        Bracket => {
            need(shape.n, "n")?;
            let m = need_list(&shape.m, "m")?;
            if m.len() != 1 || m[0] == 0 {
                return bad("need a single m_r ≥ 1");
            }
        }
    }
    Ok(out)
}

struct Draw<'a> {
    cfg: &'a SamplerConfig,
    rng: &'a mut ChaCha8Rng,
}

impl Draw<'_> {
    fn point(&mut self) -> Complex {
        let [lo, hi] = self.cfg.annulus;
        Complex::from_polar(
            self.rng.random_range(lo..=hi),
            self.rng.random_range(0.0..2.0 * PI),
        )
    }

    fn points(&mut self, n: usize) -> Vec<Complex> {
        (0..n).map(|_| self.point()).collect()
    }

    /// Base with `q = q_star^units`, `|q|` drawn from the q-annulus.
    fn base(&mut self, units: u32, nome: Nome) -> Result<RefinedBase, Error> {
        let [lo, hi] = self.cfg.q_annulus;
        let modulus: f64 = self.rng.random_range(lo..=hi);
        let q_star = Complex::from_polar(
            modulus.powf(1.0 / units as f64),
            self.rng.random_range(0.0..2.0 * PI),
        );
        RefinedBase::new(q_star, units, nome)
    }

    fn window(&mut self, size: u32, nome: Nome) -> Result<SequencePair, Error> {
        let lo = self.rng.random_range(-2..=2);
        let a = self.points(size as usize);
        let c = self.points(size as usize);
        SequencePair::new(lo, a, c, nome)
    }

    fn two_term(&mut self, shape: &Shape, nome: Nome) -> Result<TwoTermInstance, Error> {
        let m = shape.m.clone().unwrap_or_default();
        let y = shape.y.clone().unwrap_or_else(|| vec![1; m.len()]);
        let base = self.base(lcm(&y), nome)?;
        Ok(TwoTermInstance {
            alpha: self.point(),
            b: self.point(),
            n: shape.n.unwrap_or(0),
            big_l: shape.big_l.unwrap_or(0),
            c: self.points(m.len()),
            m,
            y,
            base,
        })
    }
}

/// Whether some `a_i q^t` sits on the theta zero set relative to some
/// `b_j q^{u/y_j}`.
fn progressions_meet(
    a: &[Complex],
    l: &[u32],
    b: &[Complex],
    m: &[u32],
    y: &[u32],
    base: &RefinedBase,
) -> bool {
    let nome = base.nome();
    let mut bs = Vec::new();
    for ((&bj, &mj), &yj) in b.iter().zip(m).zip(y) {
        let sj = base.step(yj).unwrap_or(base.units() as i64);
        bs.extend((0..mj as i64).map(|u| bj * base.pow(sj * u)));
    }
    a.iter().zip(l).any(|(&ai, &li)| {
        (0..=li as i64).any(|t| {
            let x = ai * base.q_pow(t);
            bs.iter()
                .any(|&bj| zero_distance(x / bj, nome) < nome.delta())
        })
    })
}

/// `None` when the draw is degenerate and should be redrawn.
fn draw_params(
    identity: Identity,
    shape: &Shape,
    nome: Nome,
    d: &mut Draw<'_>,
) -> Result<Option<Params>, Error> {
    use Identity::*;
    Ok(Some(match identity {
        ThetaInversion | ThetaQuasiperiod | ThetaAddition => Params::Theta {
            x: d.point(),
            y: d.point(),
            u: d.point(),
            v: d.point(),
            nome,
        },
        Epdi | Epi | Xsk => Params::Pochhammer {
            a: d.point(),
            b: d.point(),
            base: d.base(1, nome)?,
        },
        Wmi | Pmi | GInverse | Mipf | MipfRelabel => {
            Params::Window(d.window(shape.size.unwrap_or(1), nome)?)
        }
        Operator => {
            let seq = d.window(shape.size.unwrap_or(2), nome)?;
            let (u, v) = (d.point(), d.point());
            let (u2, v2) = (d.point(), d.point());
            Params::Operator {
                first: OperatorContext::new(seq.clone(), u, v)?,
                second: OperatorContext::new(seq, u2, v2)?,
            }
        }
        Dpf => {
            let n = shape.n.unwrap_or(2) as usize;
            Params::Lists {
                a: d.points(n),
                b: d.points(n - 2),
                nome,
            }
        }
        Apf => {
            let n = shape.n.unwrap_or(1) as usize;
            let a = d.points(n);
            let mut b = d.points(n - 1);
            b.push(ellipsum_core::inversion::solve_tannery_molk_last(&a, &b)?);
            Params::Lists { a, b, nome }
        }
        Kmt | KmtDpf | KmtUnitY | Atr | AtrApf => {
            let l = shape.l.clone().unwrap_or_default();
            let m = shape.m.clone().unwrap_or_default();
            let y = shape.y.clone().unwrap_or_else(|| vec![1; m.len()]);
            let base = d.base(lcm(&y), nome)?;
            let mut a = d.points(l.len());
            let b = d.points(m.len());
            let atr = matches!(identity, Atr | AtrApf);
            if atr {
                let problem = BalanceProblem::Apc {
                    a: a.clone(),
                    b: b.clone(),
                    l: l.clone(),
                    m: m.clone(),
                    y: y.clone(),
                    free: FreeParam::A(0),
                };
                // a root that lines an a-point up with a b-point makes every
                // term vanish identically; prefer one that does not
                let roots = solve_balance(&problem, &base)?.roots;
                let usable = roots.into_iter().find(|&root| {
                    a[0] = root;
                    !progressions_meet(&a, &l, &b, &m, &y, &base)
                });
                if usable.is_none() {
                    return Ok(None);
                }
            }
            Params::Km(KmInstance {
                a,
                b,
                l,
                m,
                y,
                base,
                mode: if atr { KmMode::Atr } else { KmMode::Kmt },
            })
        }
        Wbb | WbbMbkms => Params::Wbb(WbbInstance {
            a: d.point(),
            b: d.point(),
            c: d.point(),
            s: shape.s.unwrap_or(1),
            n: shape.n.unwrap_or(0),
            base: d.base(1, nome)?,
        }),
        Akmt | AkmtRoots => {
            let mut inst = d.two_term(shape, nome)?;
            let problem = BalanceProblem::Npc {
                n: inst.n,
                big_l: inst.big_l,
                c: inst.c.clone(),
                m: inst.m.clone(),
                y: inst.y.clone(),
            };
            inst.b = solve_balance(&problem, &inst.base)?.principal;
            Params::TwoTerm(inst)
        }
        Akms | AkmtAkms => {
            let mut inst = d.two_term(shape, nome)?;
            inst.b = akms_b(inst.n, &inst.c, &inst.m, &inst.y, &inst.base)?;
            Params::TwoTerm(inst)
        }
        Kmsi | Trc | TrcMbkms | Mbkms | ThetaSplit | Induction | Bracket => {
            Params::TwoTerm(d.two_term(shape, nome)?)
        }
    }))
}

/// Errors that mean "this draw landed too close to a singularity; try
/// another".
fn is_rejection(e: &Error) -> bool {
    matches!(
        e,
        Error::DivisionByZeroTheta { .. } | Error::DegenerateSpectrum { .. } | Error::ZeroArgument
    )
}

/// The nome for a trial. Quasi-periodicity has no content at `p = 0`, so
/// that identity moves on to the next nonzero `p` in the list.
fn trial_nome(cfg: &SamplerConfig, identity: Identity, trial: u32) -> Result<Nome, HarnessError> {
    if identity != Identity::ThetaQuasiperiod {
        return cfg.nome(trial);
    }
    let len = cfg.p_values.len() as u32;
    for step in 0..len {
        let nome = cfg.nome(trial.wrapping_add(step) % len)?;
        if !nome.is_trigonometric() {
            return Ok(nome);
        }
    }
    Err(bad_shape(
        identity,
        "quasi-periodicity needs some p ≠ 0 in p_values",
    ))
}

/// Samples an admissible instance and evaluates it, returning the instance
/// with its residual.
pub(crate) fn sample_evaluated(
    cfg: &SamplerConfig,
    identity: Identity,
    trial: u32,
) -> Result<(Instance, f64), HarnessError> {
    let nome = trial_nome(cfg, identity, trial)?;
    let fixed = cfg.shapes_for(identity.name());
    let fixed = if fixed.is_empty() {
        None
    } else {
        Some(resolve_shape(
            identity,
            fixed[trial as usize % fixed.len()],
        )?)
    };
    let mut rng = trial_rng(cfg.seed, identity, trial);
    for _ in 0..cfg.retry_cap {
        let shape = match &fixed {
            Some(shape) => shape.clone(),
            None => draw_shape(identity, &cfg.bounds, &mut rng),
        };
        let mut d = Draw { cfg, rng: &mut rng };
        let params = match draw_params(identity, &shape, nome, &mut d) {
            Ok(Some(params)) => params,
            Ok(None) => continue,
            Err(e) if is_rejection(&e) => continue,
            Err(e) => return Err(e.into()),
        };
        let inst = Instance {
            identity,
            trial,
            shape,
            params,
        };
        match evaluate(&inst) {
            Ok(residual) => return Ok((inst, residual)),
            Err(e) if is_rejection(&e) => continue,
            Err(e) => return Err(e.into()),
        }
    }
    Err(HarnessError::Unsampleable {
        identity: identity.name().to_string(),
        trial,
        attempts: cfg.retry_cap,
    })
}

/// Deterministic admissible instance for `(seed, identity, trial)`.
pub fn sample_instance(
    cfg: &SamplerConfig,
    identity: Identity,
    trial: u32,
) -> Result<Instance, HarnessError> {
    sample_evaluated(cfg, identity, trial).map(|(inst, _)| inst)
}
