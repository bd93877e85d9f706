//! The `solve-balance` command: read a constraint from TOML, solve it for
//! its free parameter.

use ellipsum_core::km::{solve_balance, BalanceProblem, FreeParam};
use ellipsum_core::{Complex, Nome, RefinedBase};
use serde::Deserialize;

use crate::report::complex_json;
use crate::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum BalanceMode {
    Apc,
    Npc,
    AkmsB,
}

impl BalanceMode {
    fn name(self) -> &'static str {
        match self {
            BalanceMode::Apc => "apc",
            BalanceMode::Npc => "npc",
            BalanceMode::AkmsB => "akms-b",
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct BalanceParams {
    q_star: [f64; 2],
    #[serde(default = "one", rename = "Y")]
    units: u32,
    #[serde(default)]
    p: [f64; 2],
    #[serde(default)]
    a: Vec<[f64; 2]>,
    #[serde(default)]
    b: Vec<[f64; 2]>,
    #[serde(default)]
    c: Vec<[f64; 2]>,
    #[serde(default)]
    l: Vec<u32>,
    #[serde(default)]
    m: Vec<u32>,
    y: Option<Vec<u32>>,
    #[serde(default)]
    n: u32,
    #[serde(default, rename = "L")]
    big_l: u32,
    /// `"a<i>"` or `"b<j>"`; apc only.
    free: Option<String>,
}

fn one() -> u32 {
    1
}

fn complexes(v: &[[f64; 2]]) -> Vec<Complex> {
    v.iter().map(|&[re, im]| Complex::new(re, im)).collect()
}

fn parse_free(text: &str) -> Result<FreeParam, HarnessError> {
    let bad = || HarnessError::Config(format!("free must look like a0 or b1, got {text:?}"));
    let (kind, index) = text.split_at_checked(1).ok_or_else(bad)?;
    let index: usize = index.parse().map_err(|_| bad())?;
    match kind {
        "a" => Ok(FreeParam::A(index)),
        "b" => Ok(FreeParam::B(index)),
        _ => Err(bad()),
    }
}

/// Solves the constraint described by `text` and returns one JSON line with
/// the exponent, the principal solution and every root.
pub fn solve_from_toml(mode: BalanceMode, text: &str) -> Result<String, HarnessError> {
    let params: BalanceParams =
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
    let nome = Nome::new(Complex::new(params.p[0], params.p[1]))?;
    let q_star = Complex::new(params.q_star[0], params.q_star[1]);
    let base = RefinedBase::new(q_star, params.units, nome)?;
    let y = params.y.clone().unwrap_or_else(|| vec![1; params.m.len()]);
    let problem = match mode {
        BalanceMode::Apc => BalanceProblem::Apc {
            a: complexes(&params.a),
            b: complexes(&params.b),
            l: params.l.clone(),
            m: params.m.clone(),
            y,
            free: parse_free(params.free.as_deref().unwrap_or("a0"))?,
        },
        BalanceMode::Npc => BalanceProblem::Npc {
            n: params.n,
            big_l: params.big_l,
            c: complexes(&params.c),
            m: params.m.clone(),
            y,
        },
        BalanceMode::AkmsB => BalanceProblem::AkmsB {
            n: params.n,
            c: complexes(&params.c),
            m: params.m.clone(),
            y,
        },
    };
    let sol = solve_balance(&problem, &base)?;
    let roots: Vec<String> = sol.roots.iter().map(|&z| complex_json(z)).collect();
    Ok(format!(
        "{{\"mode\":\"{}\",\"exponent\":{},\"principal\":{},\"roots\":[{}]}}",
        mode.name(),
        sol.roots.len(),
        complex_json(sol.principal),
        roots.join(",")
    ))
}
