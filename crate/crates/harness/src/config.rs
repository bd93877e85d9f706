use std::fmt;
use std::path::Path;

use ellipsum_core::{Complex, Nome};
use serde::Deserialize;

use crate::HarnessError;

fn default_annulus() -> [f64; 2] {
    [0.5, 1.5]
}

fn default_q_annulus() -> [f64; 2] {
    [0.8, 0.95]
}

fn default_delta() -> f64 {
    1e-6
}

fn default_retry_cap() -> u32 {
    100
}

/// Sampling parameters for a verification run.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SamplerConfig {
    pub seed: u64,
    pub trials: u32,
    /// Elliptic nomes as `[re, im]`; trial `t` uses entry `t mod len`.
    pub p_values: Vec<[f64; 2]>,
    /// Modulus range of the sampled parameters.
    #[serde(default = "default_annulus")]
    pub annulus: [f64; 2],
    /// Modulus range of the base `q`.
    #[serde(default = "default_q_annulus")]
    pub q_annulus: [f64; 2],
    #[serde(default = "default_delta")]
    pub delta: f64,
    #[serde(default = "default_retry_cap")]
    pub retry_cap: u32,
    #[serde(default)]
    pub bounds: ShapeBounds,
    /// Fixed shapes. An identity with entries here cycles through them
    /// instead of drawing shapes from `bounds`.
    #[serde(default)]
    pub shapes: Vec<ShapeSpec>,
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ShapeBounds {
    pub s_max: u32,
    pub r_max: u32,
    pub l_max: u32,
    pub m_max: u32,
    pub y_max: u32,
    pub n_max: u32,
    #[serde(rename = "L_max")]
    pub big_l_max: u32,
    pub window_max: u32,
    pub terms_max: u32,
}

impl Default for ShapeBounds {
    fn default() -> Self {
        ShapeBounds {
            s_max: 3,
            r_max: 3,
            l_max: 3,
            m_max: 4,
            y_max: 3,
            n_max: 5,
            big_l_max: 3,
            window_max: 8,
            terms_max: 6,
        }
    }
}

/// Integer shape of an instance. Which fields matter depends on the
/// identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, Deserialize)]
pub struct Shape {
    pub size: Option<u32>,
    pub n: Option<u32>,
    #[serde(rename = "L")]
    pub big_l: Option<u32>,
    pub s: Option<u32>,
    pub k: Option<u32>,
    pub l: Option<Vec<u32>>,
    pub m: Option<Vec<u32>>,
    pub y: Option<Vec<u32>>,
}

impl Shape {
    /// `(name, value)` pairs of the fields that are set, in a fixed order.
    pub fn fields(&self) -> Vec<(&'static str, ShapeValue<'_>)> {
        let mut out = Vec::new();
        let scalars = [
            ("size", self.size),
            ("n", self.n),
            ("L", self.big_l),
            ("s", self.s),
            ("k", self.k),
        ];
        for (name, v) in scalars {
            if let Some(v) = v {
                out.push((name, ShapeValue::Int(v)));
            }
        }
        let lists = [("l", &self.l), ("m", &self.m), ("y", &self.y)];
        for (name, v) in lists {
            if let Some(v) = v {
                out.push((name, ShapeValue::List(v)));
            }
        }
        out
    }
}

pub enum ShapeValue<'a> {
    Int(u32),
    List(&'a [u32]),
}

impl fmt::Display for ShapeValue<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShapeValue::Int(v) => write!(f, "{v}"),
            ShapeValue::List(v) => {
                write!(f, "[")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "]")
            }
        }
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fields = self.fields();
        if fields.is_empty() {
            return write!(f, "-");
        }
        for (i, (name, value)) in fields.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{name}={value}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct ShapeSpec {
    pub identity: String,
    #[serde(flatten)]
    pub shape: Shape,
}

impl SamplerConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: SamplerConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        let bad = |msg: String| Err(HarnessError::Config(msg));
        if self.trials == 0 {
            return bad("trials must be positive".into());
        }
        if self.p_values.is_empty() {
            return bad("p_values must not be empty".into());
        }
        for p in &self.p_values {
            Nome::new(Complex::new(p[0], p[1])).map_err(|e| HarnessError::Config(e.to_string()))?;
        }
        let [r_min, r_max] = self.annulus;
        if !(r_min > 0.0 && r_min < r_max && r_max.is_finite()) {
            return bad(format!(
                "annulus needs 0 < r_min < r_max, got {:?}",
                self.annulus
            ));
        }
        let [q_min, q_max] = self.q_annulus;
        if !(q_min > 0.0 && q_min < q_max && q_max < 1.0) {
            return bad(format!(
                "q_annulus needs 0 < lo < hi < 1, got {:?}",
                self.q_annulus
            ));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad(format!("delta must lie in (0, 1), got {}", self.delta));
        }
        if self.retry_cap == 0 {
            return bad("retry_cap must be positive".into());
        }
        let b = &self.bounds;
        if b.s_max == 0
            || b.r_max == 0
            || b.m_max == 0
            || b.y_max == 0
            || b.window_max < 2
            || b.terms_max < 2
        {
            return bad(
                "s_max, r_max, m_max, y_max must be positive; window_max and terms_max at least 2"
                    .into(),
            );
        }
        Ok(())
    }

    /// Nome for trial `t`.
    pub fn nome(&self, trial: u32) -> Result<Nome, HarnessError> {
        let [re, im] = self.p_values[trial as usize % self.p_values.len()];
        Nome::new(Complex::new(re, im))
            .and_then(|n| n.with_delta(self.delta))
            .map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn shapes_for(&self, identity: &str) -> Vec<&Shape> {
        self.shapes
            .iter()
            .filter(|s| s.identity == identity)
            .map(|s| &s.shape)
            .collect()
    }
}
