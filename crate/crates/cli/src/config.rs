//! TOML run configuration.

use anyhow::{bail, ensure, Context, Result};
use psturm::sequences::{
    Alphabet, CircleMapSpec, CodingTriple, Convergent, GrowthRule, SequenceSpec, SparseSpec, ToeplitzSpec,
};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spec: SpecConfig,
    #[serde(default)]
    pub analysis: AnalysisConfig,
    #[serde(default)]
    pub output: OutputConfig,
}

/// Exactly one generator kind.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpecConfig {
    CircleMap(CircleMapConfig),
    Toeplitz(ToeplitzConfig),
    Sparse(SparseConfig),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CircleMapConfig {
    /// `[p, q]` for `α = p/q`.
    pub alpha: [i64; 2],
    pub beta: [i64; 2],
    #[serde(default = "zero_fraction")]
    pub theta: [i64; 2],
    #[serde(default = "one")]
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleConfig {
    pub pattern: String,
    pub period: usize,
    #[serde(default)]
    pub offset: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToeplitzConfig {
    pub letters: String,
    pub values: Vec<f64>,
    /// Simple cycle with alternating letters. Excludes `prefix` and `tail`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub periods: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub prefix: Option<TripleConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<Vec<TripleConfig>>,
    #[serde(default)]
    pub cycle_from: usize,
    /// Letter filling the last hole, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extension: Option<char>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule")]
pub enum GrowthConfig {
    Explicit { positions: Vec<i64> },
    Geometric { scale: i64, base: i64, #[serde(default)] offset: i64 },
    FactorialGaps { first: i64, #[serde(default)] shift: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SparseConfig {
    pub growth: GrowthConfig,
    pub barrier: f64,
    /// `'0'` or `'v'` for sites `<= 0`.
    #[serde(default = "zero_char")]
    pub left_fill: char,
}

/// Subcommand parameters. Command-line flags override these.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AnalysisConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub len: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub window: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beam: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energy: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_min: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub e_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub energies: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub origins: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_steps: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nondecay_n: Option<usize>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default)]
    pub format: Format,
    /// Standard output when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub path: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

fn zero_fraction() -> [i64; 2] {
    [0, 1]
}

fn one() -> f64 {
    1.0
}

fn zero_char() -> char {
    '0'
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).context("malformed config")?;
        Ok(cfg)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn emit(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }
}

fn triple(alphabet: &Alphabet, t: &TripleConfig) -> Result<CodingTriple> {
    Ok(CodingTriple::new(alphabet.parse(&t.pattern)?, t.period, t.offset)?)
}

impl SpecConfig {
    pub fn build(&self) -> Result<SequenceSpec> {
        Ok(match self {
            SpecConfig::CircleMap(c) => {
                let alpha = Convergent::new(c.alpha[0], c.alpha[1])?;
                SequenceSpec::CircleMap(CircleMapSpec::new(
                    alpha,
                    (c.beta[0], c.beta[1]),
                    (c.theta[0], c.theta[1]),
                    c.lambda,
                )?)
            }
            SpecConfig::Toeplitz(c) => {
                let alphabet = Alphabet::new(c.letters.chars().collect(), c.values.clone())?;
                let ext = c.extension.map(|l| alphabet.symbol(l)).transpose()?;
                let spec = match (&c.periods, &c.prefix, &c.tail) {
                    (Some(p), None, None) => {
                        ensure!(c.cycle_from == 0, "cycle_from applies only to an explicit tail");
                        ToeplitzSpec::simple_cycle(alphabet, p, ext)?
                    }
                    (None, prefix, Some(tail)) => {
                        let prefix = match prefix {
                            Some(p) => triple(&alphabet, p)?,
                            None => CodingTriple::identity(),
                        };
                        let tail = tail.iter().map(|t| triple(&alphabet, t)).collect::<Result<Vec<_>>>()?;
                        ToeplitzSpec::new(alphabet, prefix, tail, c.cycle_from, ext)?
                    }
                    _ => bail!("toeplitz spec needs either `periods` or `tail` (with optional `prefix`), not both"),
                };
                SequenceSpec::Toeplitz(spec)
            }
            SpecConfig::Sparse(c) => {
                let rule = match &c.growth {
                    GrowthConfig::Explicit { positions } => GrowthRule::Explicit(positions.clone()),
                    GrowthConfig::Geometric { scale, base, offset } => {
                        GrowthRule::Geometric { scale: *scale, base: *base, offset: *offset }
                    }
                    GrowthConfig::FactorialGaps { first, shift } => {
                        GrowthRule::FactorialGaps { first: *first, shift: *shift }
                    }
                };
                let fill = match c.left_fill {
                    '0' => SparseSpec::ZERO,
                    'v' => SparseSpec::BARRIER,
                    other => bail!("left_fill must be '0' or 'v', got {other:?}"),
                };
                SequenceSpec::Sparse(SparseSpec::new(rule, c.barrier, fill)?)
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SIMPLE3: &str = include_str!("../configs/simple3.toml");
    const FIB: &str = include_str!("../configs/fib.toml");
    const SPARSE: &str = include_str!("../configs/sparse.toml");

    #[test]
    fn shipped_configs_round_trip() {
        for text in [SIMPLE3, FIB, SPARSE] {
            let cfg = RunConfig::parse(text).unwrap();
            let again = RunConfig::parse(&cfg.emit().unwrap()).unwrap();
            assert_eq!(cfg, again);
            cfg.spec.build().unwrap();
        }
    }

    #[test]
    fn two_spec_kinds_are_rejected() {
        let text = format!("{SIMPLE3}\n[spec.sparse]\nbarrier = 2.0\ngrowth = {{ rule = \"explicit\", positions = [1, 5] }}\n");
        assert!(RunConfig::parse(&text).is_err());
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = format!("{SIMPLE3}\n[analysis]\nlevle = 3\n");
        assert!(RunConfig::parse(&text).is_err());
    }
}
