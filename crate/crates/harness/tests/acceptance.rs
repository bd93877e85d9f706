//! Acceptance suite. Runs every criterion at its stated tolerance and prints
//! one PASS/FAIL line per criterion; exits non-zero if any line is FAIL.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ellipsum::suite::worse;
use ellipsum::{
    emit_report, run_suite, sample_instance, Format, Identity, Params, SamplerConfig, SuiteReport,
};
use ellipsum_core::inversion::g_entry;
use ellipsum_core::operator::{
    dual_eq_residual, functional_eq_residual, normalizer, reconstruct_g, reconstruction_residual,
    v_star_h_parts, OperatorContext,
};
use ellipsum_core::{Complex, MatrixWindow, Residual};

const SEED: u64 = 20_261_016;

/// Nomes with moduli 0, 0.1, 0.5 and 0.7 at several phases.
const THETA_NOMES: &str = "[[0.0, 0.0], [0.1, 0.0], [0.0, 0.5], [-0.35, 0.6062177826491071], \
                           [0.0, -0.1], [-0.5, 0.0], [0.7, 0.0]]";

/// Nomes with modulus at most 0.5.
const NOMES: &str = "[[0.0, 0.0], [0.1, 0.0], [0.3, 0.2], [-0.5, 0.0], [0.0, 0.45], [0.2, -0.4]]";

fn config(trials: u32, p_values: &str, extra: &str) -> SamplerConfig {
    let text = format!("seed = {SEED}\ntrials = {trials}\np_values = {p_values}\n{extra}");
    SamplerConfig::from_toml(&text).expect("acceptance config")
}

fn run(cfg: &SamplerConfig, ids: &[Identity], tolerance: f64) -> (SuiteReport, Duration) {
    let start = Instant::now();
    let report = run_suite(cfg, ids, tolerance).expect("suite runs");
    (report, start.elapsed())
}

struct Line {
    pass: bool,
    text: String,
}

impl Line {
    fn new() -> Self {
        Line {
            pass: true,
            text: String::new(),
        }
    }

    fn note(&mut self, text: String) {
        if !self.text.is_empty() {
            self.text.push_str("; ");
        }
        self.text.push_str(&text);
    }

    /// Records `label: value < bound`.
    fn bound(&mut self, label: &str, value: f64, bound: f64) {
        let ok = value < bound;
        self.pass &= ok;
        self.note(format!(
            "{label} {value:.3e} {} {bound:.0e}",
            if ok { "<" } else { ">=" }
        ));
    }

    fn time(&mut self, took: Duration, limit: Duration) {
        let ok = took < limit;
        self.pass &= ok;
        self.note(format!(
            "{:.2} s {} {} s",
            took.as_secs_f64(),
            if ok { "<" } else { ">=" },
            limit.as_secs()
        ));
    }

    /// Every trial of every identity in `report` is below its tolerance.
    fn suite(&mut self, report: &SuiteReport) {
        for (id, worst) in report.max_residuals() {
            self.bound(id.name(), worst, report.tolerance);
        }
        let failed = report.reports.iter().filter(|r| !r.pass).count();
        if failed > 0 {
            self.pass = false;
            self.note(format!("{failed} failing trials"));
        }
    }
}

fn theta_suite() -> Line {
    let cfg = config(10_000, THETA_NOMES, "");
    let ids = [
        Identity::ThetaInversion,
        Identity::ThetaQuasiperiod,
        Identity::ThetaAddition,
    ];
    let (report, took) = run(&cfg, &ids, 1e-12);
    let mut line = Line::new();
    line.suite(&report);
    line.time(took, Duration::from_secs(10));
    line
}

fn window(inst: &ellipsum::Instance) -> &ellipsum_core::SequencePair {
    match &inst.params {
        Params::Window(seq) => seq,
        other => panic!("expected a window, got {other:?}"),
    }
}

fn matrix_inversion() -> Line {
    let cfg = config(200, NOMES, "");
    let ids = [Identity::Wmi, Identity::Pmi, Identity::GInverse];
    let (report, took) = run(&cfg, &ids, 1e-9);
    let mut line = Line::new();
    line.suite(&report);
    line.time(took, Duration::from_secs(30));
    let sizes: BTreeSet<u32> = report
        .reports
        .iter()
        .filter_map(|r| r.shape.as_ref()?.size)
        .collect();
    line.note(format!("window sizes {sizes:?}"));
    // entrywise relative gap without the conditioning, for reference only
    let mut plain = 0.0_f64;
    for t in 0..cfg.trials {
        let inst = sample_instance(&cfg, Identity::GInverse, t).expect("sampled");
        let seq = window(&inst);
        let f = MatrixWindow::f_window(seq, seq.lo(), seq.hi()).unwrap();
        let g = MatrixWindow::g_window(seq, seq.lo(), seq.hi()).unwrap();
        plain = plain.max(f.inverse().unwrap().max_relative_deviation(&g));
    }
    line.note(format!("unconditioned g-inverse gap {plain:.1e} (info)"));
    line
}

fn partial_fractions() -> Line {
    let cfg = config(500, NOMES, "[bounds]\nn_max = 6\n");
    let (report, _) = run(&cfg, &[Identity::Dpf, Identity::Apf, Identity::Mipf], 1e-10);
    let mut line = Line::new();
    line.suite(&report);
    let (relabel, _) = run(&cfg, &[Identity::MipfRelabel], 1e-11);
    line.suite(&relabel);
    line
}

fn split_terms(ctx: &OperatorContext, k: i64, l: i64) -> [Complex; 2] {
    let (a, c) = v_star_h_parts(ctx, k).unwrap();
    let norm = normalizer(ctx, k).unwrap();
    [a.coeff(-l).unwrap() / norm, c.coeff(-l).unwrap() / norm]
}

fn operator_method() -> Line {
    let cfg = config(100, NOMES, "");
    let (mut equations, mut reconstruct, mut independence, mut plain) = (0.0, 0.0, 0.0, 0.0_f64);
    for t in 0..cfg.trials {
        let inst = sample_instance(&cfg, Identity::Operator, t).expect("sampled");
        let Params::Operator { first, second } = &inst.params else {
            panic!("expected an operator context");
        };
        let seq = first.seq();
        for k in seq.lo()..=seq.hi() {
            equations = worse(
                equations,
                functional_eq_residual(first, k).unwrap().relative,
            );
            equations = worse(equations, dual_eq_residual(first, k).unwrap().relative);
            let direct = reconstruct_g(first, k, seq.lo()..=k).unwrap();
            for (l, got) in direct {
                let want = g_entry(seq, k, l).unwrap();
                let r = reconstruction_residual(first, k, l, want).unwrap().relative;
                reconstruct = worse(reconstruct, r);
                plain = plain.max((got - want).norm() / want.norm());
                let [x1, x2] = split_terms(first, k, l);
                let [y1, y2] = split_terms(second, k, l);
                let r = Residual::from_terms([x1, -x2, -y1, y2]).relative;
                independence = worse(independence, r);
            }
        }
    }
    let mut line = Line::new();
    line.bound("functional/dual", equations, 1e-10);
    line.bound("reconstruct vs g", reconstruct, 1e-9);
    line.bound("(u,v) independence", independence, 1e-9);
    line.note(format!("unconditioned reconstruct gap {plain:.1e} (info)"));
    line
}

fn km_suite() -> Line {
    let cfg = config(500, NOMES, "");
    let ids = [
        Identity::Kmt,
        Identity::Kmsi,
        Identity::Wbb,
        Identity::Trc,
        Identity::Mbkms,
        Identity::Atr,
        Identity::Akmt,
        Identity::Akms,
    ];
    let (report, took) = run(&cfg, &ids, 1e-8);
    let mut line = Line::new();
    line.suite(&report);
    line.time(took, Duration::from_secs(120));
    line
}

fn cross_routes() -> Line {
    let cfg = config(500, NOMES, "");
    let mut line = Line::new();
    let (wbb, _) = run(&cfg, &[Identity::WbbMbkms], 1e-9);
    line.suite(&wbb);
    let (exact, _) = run(&cfg, &[Identity::TrcMbkms, Identity::AkmtAkms], 1e-11);
    line.suite(&exact);
    let (roots, _) = run(&cfg, &[Identity::AkmtRoots], 1e-8);
    line.suite(&roots);
    line
}

fn induction_chain() -> Line {
    let cfg = config(500, NOMES, "");
    let mut line = Line::new();
    let (split, _) = run(&cfg, &[Identity::ThetaSplit], 1e-11);
    line.suite(&split);
    let (induction, _) = run(&cfg, &[Identity::Induction], 1e-8);
    line.suite(&induction);
    let chains: BTreeSet<u32> = induction
        .reports
        .iter()
        .filter_map(|r| r.shape.as_ref()?.n)
        .collect();
    let complete = (0..=5).all(|n| chains.contains(&n));
    line.pass &= complete;
    line.note(format!("N covered {chains:?}"));
    line
}

fn trigonometric_limit() -> Line {
    let cfg = config(200, "[[0.0, 0.0]]", "");
    // quasi-periodicity shifts by p itself and has no p = 0 content
    let ids: Vec<Identity> = Identity::ALL
        .iter()
        .copied()
        .filter(|&id| id != Identity::ThetaQuasiperiod)
        .collect();
    let (report, _) = run(&cfg, &ids, 1e-11);
    let mut line = Line::new();
    let worst = report
        .max_residuals()
        .into_iter()
        .fold(0.0, |w, (_, r)| worse(w, r));
    line.bound(&format!("{} identities", ids.len()), worst, 1e-11);
    let failed: Vec<&str> = report
        .reports
        .iter()
        .filter(|r| !r.pass)
        .map(|r| r.identity.name())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if !failed.is_empty() {
        line.pass = false;
        line.note(format!("failing {failed:?}"));
    }
    line
}

fn determinism() -> Line {
    let cfg = config(12, NOMES, "");
    let once = || emit_report(&run(&cfg, Identity::ALL, 1e-8).0, Format::Structured);
    let (a, b) = (once(), once());
    let mut line = Line::new();
    line.pass = a == b && !a.is_empty();
    line.note(format!("{} bytes, identical: {}", a.len(), a == b));
    let mut other = cfg.clone();
    other.seed += 1;
    let c = emit_report(&run(&other, Identity::ALL, 1e-8).0, Format::Structured);
    line.pass &= c != a;
    line.note(format!("another seed differs: {}", c != a));
    line
}

type Criterion = (&'static str, fn() -> Line);

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("theta identities", theta_suite),
        ("matrix inversion", matrix_inversion),
        ("partial fractions", partial_fractions),
        ("operator method", operator_method),
        ("Karlsson-Minton suite", km_suite),
        ("cross-route checks", cross_routes),
        ("theta split and induction", induction_chain),
        ("p = 0 regression", trigonometric_limit),
        ("determinism", determinism),
    ];
    let mut all = true;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let line = check();
        all &= line.pass;
        println!(
            "criterion {} {name}: {} ({})",
            i + 1,
            if line.pass { "PASS" } else { "FAIL" },
            line.text
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
