//! JSON problem configuration: space, symbol, norm, and task parameters.
//!
//! Schema version 1. Complex entries may be written as a bare number, an
//! `[re, im]` pair, or a DSL expression string (constant expressions for
//! `constant`/`table` symbols, expressions in `x` for `expr` symbols).

use num_complex::Complex64;
use serde::{Deserialize, Deserializer};

use crate::expr::{self, Expression};
use crate::matrix::ComplexMatrix;
use crate::measure::{MeasureSpace, SpaceRef, WeightRule};
use crate::space::{NormSpec, VectorFunction, YoungFunction};
use crate::symbol::{SymbolFunction, SymbolTail, TailEnvelope};
use crate::{Error, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub version: u32,
    pub space: SpaceConfig,
    pub symbol: SymbolConfig,
    #[serde(default = "default_norm")]
    pub norm: NormConfig,
    #[serde(default)]
    pub task: TaskConfig,
}

fn default_norm() -> NormConfig {
    NormConfig::Lp { p: PValue(2.0) }
}

impl ProblemConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ProblemConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        if config.version != 1 {
            return Err(Error::Config(format!(
                "unsupported config version {} (expected 1)",
                config.version
            )));
        }
        Ok(config)
    }

    pub fn build_space(&self) -> Result<SpaceRef> {
        self.space.build()
    }

    pub fn build_symbol(&self, space: &SpaceRef) -> Result<SymbolFunction> {
        self.symbol.build(space)
    }

    pub fn build_norm(&self) -> Result<NormSpec> {
        let ns = self.norm.build()?;
        ns.validate()?;
        Ok(ns)
    }

    /// Initial value for the Cauchy problem.
    pub fn build_initial(&self, space: &SpaceRef, dim: usize) -> Result<VectorFunction> {
        match &self.task.initial {
            InitialConfig::Ones => Ok(VectorFunction::ones(space.clone(), dim)),
            InitialConfig::Values(values) => {
                let parsed: Result<Vec<Complex64>> =
                    values.iter().map(|e| e.constant_value()).collect();
                VectorFunction::new(space.clone(), dim, parsed?)
            }
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum SpaceConfig {
    Finite {
        atoms: Vec<f64>,
        weights: Vec<f64>,
        #[serde(default)]
        nonatomic: bool,
    },
    Sequence {
        truncation: usize,
        weight_rule: WeightRuleConfig,
        #[serde(default)]
        nonatomic: bool,
    },
}

impl SpaceConfig {
    fn build(&self) -> Result<SpaceRef> {
        match self {
            SpaceConfig::Finite {
                atoms,
                weights,
                nonatomic,
            } => MeasureSpace::finite(atoms.clone(), weights.clone(), *nonatomic),
            SpaceConfig::Sequence {
                truncation,
                weight_rule,
                nonatomic,
            } => MeasureSpace::sequence(weight_rule.build(), *truncation, *nonatomic),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum WeightRuleConfig {
    Geometric { first: f64, ratio: f64 },
    InversePower { coeff: f64, power: f64 },
}

impl WeightRuleConfig {
    fn build(&self) -> WeightRule {
        match *self {
            WeightRuleConfig::Geometric { first, ratio } => WeightRule::Geometric { first, ratio },
            WeightRuleConfig::InversePower { coeff, power } => {
                WeightRule::InversePower { coeff, power }
            }
        }
    }
}

/// One matrix entry: number, `[re, im]` pair, or expression text.
#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EntryConfig {
    Real(f64),
    Pair([f64; 2]),
    Text(String),
}

impl EntryConfig {
    fn expression(&self) -> Result<Expression> {
        match self {
            EntryConfig::Real(v) => Ok(Expression::Literal(Complex64::new(*v, 0.0))),
            EntryConfig::Pair([re, im]) => Ok(Expression::Literal(Complex64::new(*re, *im))),
            EntryConfig::Text(text) => expr::parse(text),
        }
    }

    /// Entry as a constant complex value; expressions must not involve `x`.
    fn constant_value(&self) -> Result<Complex64> {
        let e = self.expression()?;
        if depends_on_x(&e) {
            return Err(Error::Config(
                "constant entry must not reference the coordinate x".into(),
            ));
        }
        Ok(e.eval(0.0))
    }
}

fn depends_on_x(e: &Expression) -> bool {
    match e {
        Expression::Variable => true,
        Expression::Literal(_) => false,
        Expression::Neg(inner) | Expression::Call(_, inner) => depends_on_x(inner),
        Expression::Binary(_, lhs, rhs) => depends_on_x(lhs) || depends_on_x(rhs),
    }
}

#[derive(Debug, Clone, Deserialize)]
pub struct SymbolConfig {
    pub n: usize,
    #[serde(flatten)]
    pub body: SymbolBodyConfig,
    #[serde(default)]
    pub tail: Option<TailConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SymbolBodyConfig {
    /// One N×N matrix, row-major rows.
    Constant { matrix: Vec<Vec<EntryConfig>> },
    /// One N×N matrix per atom.
    Table { matrices: Vec<Vec<Vec<EntryConfig>>> },
    /// N×N expression strings in `x`.
    Expr { entries: Vec<Vec<String>> },
}

impl SymbolConfig {
    fn build(&self, space: &SpaceRef) -> Result<SymbolFunction> {
        let n = self.n;
        let symbol = match &self.body {
            SymbolBodyConfig::Constant { matrix } => {
                let m = parse_matrix(n, matrix)?;
                SymbolFunction::constant(space.clone(), m)?
            }
            SymbolBodyConfig::Table { matrices } => {
                let values: Result<Vec<ComplexMatrix>> =
                    matrices.iter().map(|rows| parse_matrix(n, rows)).collect();
                SymbolFunction::table(space.clone(), values?)?
            }
            SymbolBodyConfig::Expr { entries } => {
                if entries.len() != n || entries.iter().any(|row| row.len() != n) {
                    return Err(Error::Config(format!(
                        "symbol.entries must be an {n}×{n} grid"
                    )));
                }
                let mut parsed = Vec::with_capacity(n * n);
                for row in entries {
                    for text in row {
                        parsed.push(expr::parse(text)?);
                    }
                }
                SymbolFunction::from_exprs(space.clone(), n, parsed)?
            }
        };
        Ok(match &self.tail {
            Some(tail) => symbol.with_tail(tail.build()),
            None => symbol,
        })
    }
}

fn parse_matrix(n: usize, rows: &[Vec<EntryConfig>]) -> Result<ComplexMatrix> {
    if rows.len() != n || rows.iter().any(|row| row.len() != n) {
        return Err(Error::Config(format!("symbol.matrix must be {n}×{n}")));
    }
    let mut entries = Vec::with_capacity(n * n);
    for row in rows {
        for entry in row {
            entries.push(entry.constant_value()?);
        }
    }
    Ok(ComplexMatrix::from_rows(n, &entries))
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailConfig {
    pub envelope: EnvelopeConfig,
    pub spectral_bound: f64,
    #[serde(default)]
    pub support: bool,
    #[serde(default)]
    pub norm_floor: f64,
}

impl TailConfig {
    fn build(&self) -> SymbolTail {
        SymbolTail {
            norm_envelope: self.envelope.build(),
            spectral_bound: self.spectral_bound,
            support: self.support,
            norm_floor: self.norm_floor,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum EnvelopeConfig {
    Power { coeff: f64, exponent: f64 },
    /// The string "unbounded".
    Keyword(String),
}

impl EnvelopeConfig {
    fn build(&self) -> TailEnvelope {
        match self {
            EnvelopeConfig::Power { coeff, exponent } => TailEnvelope::Power {
                coeff: *coeff,
                exponent: *exponent,
            },
            EnvelopeConfig::Keyword(_) => TailEnvelope::Unbounded,
        }
    }
}

/// `p`/`q` values that may be the string `"inf"`.
#[derive(Debug, Clone, Copy)]
pub struct PValue(pub f64);

impl<'de> Deserialize<'de> for PValue {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(f64),
            Text(String),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Number(v) => Ok(PValue(v)),
            Raw::Text(s) if s == "inf" || s == "infinity" => Ok(PValue(f64::INFINITY)),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "expected a number or \"inf\", got \"{s}\""
            ))),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum NormConfig {
    Lp { p: PValue },
    Orlicz { phi: String, p: Option<PValue> },
    Lorentz { p: PValue, q: PValue },
}

impl NormConfig {
    fn build(&self) -> Result<NormSpec> {
        Ok(match self {
            NormConfig::Lp { p } => NormSpec::Lp { p: p.0 },
            NormConfig::Orlicz { phi, p } => {
                let p = p.map(|v| v.0).unwrap_or(2.0);
                let phi = match phi.as_str() {
                    "tp" => YoungFunction::Power { p },
                    "tp_log" => YoungFunction::PowerLog { p },
                    "t2_ratio" => YoungFunction::RatioQuadratic,
                    other => {
                        return Err(Error::Config(format!(
                            "unknown Young function id `{other}` (expected tp, tp_log, t2_ratio)"
                        )))
                    }
                };
                NormSpec::Orlicz { phi }
            }
            NormConfig::Lorentz { p, q } => NormSpec::Lorentz { p: p.0, q: q.0 },
        })
    }
}

/// Initial value: the string `"ones"` or an explicit flattened value list.
#[derive(Debug, Clone, Default)]
pub enum InitialConfig {
    #[default]
    Ones,
    Values(Vec<EntryConfig>),
}

impl<'de> Deserialize<'de> for InitialConfig {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Text(String),
            Values(Vec<EntryConfig>),
        }
        match Raw::deserialize(deserializer)? {
            Raw::Text(s) if s == "ones" => Ok(InitialConfig::Ones),
            Raw::Text(s) => Err(serde::de::Error::custom(format!(
                "expected \"ones\" or a value array, got \"{s}\""
            ))),
            Raw::Values(v) => Ok(InitialConfig::Values(v)),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TaskConfig {
    #[serde(default = "default_t_grid")]
    pub t_grid: Vec<f64>,
    #[serde(default = "default_lambda")]
    pub lambda: ComplexConfig,
    /// Integration degree; defaults to `2N + 1` when absent.
    #[serde(default)]
    pub m: Option<u32>,
    #[serde(default)]
    pub t_max: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub initial: InitialConfig,
}

impl Default for TaskConfig {
    fn default() -> Self {
        TaskConfig {
            t_grid: default_t_grid(),
            lambda: default_lambda(),
            m: None,
            t_max: None,
            tol: default_tol(),
            trials: default_trials(),
            seed: 0,
            initial: InitialConfig::Ones,
        }
    }
}

fn default_t_grid() -> Vec<f64> {
    vec![0.0, 1.0]
}

fn default_lambda() -> ComplexConfig {
    ComplexConfig { re: 3.0, im: 0.0 }
}

fn default_tol() -> f64 {
    crate::operator::DEFAULT_TOL
}

fn default_trials() -> usize {
    50
}

#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexConfig {
    pub re: f64,
    #[serde(default)]
    pub im: f64,
}

impl ComplexConfig {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_finite_config_builds() {
        let text = r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0, 2.0], "weights": [0.5, 0.5]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[2.0]]},
            "norm": {"type": "lp", "p": 2}
        }"#;
        let config = ProblemConfig::from_json(text).unwrap();
        let space = config.build_space().unwrap();
        assert_eq!(space.atom_count(), 2);
        let symbol = config.build_symbol(&space).unwrap();
        assert_eq!(symbol.eval_at(0).unwrap()[(0, 0)].re, 2.0);
        assert_eq!(config.build_norm().unwrap(), NormSpec::lp(2.0));
    }

    #[test]
    fn entry_forms_are_equivalent() {
        let text = r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [0.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 2,
                       "matrix": [[1.5, [0.0, 1.0]], ["2+3*i", "exp(0)"]]}
        }"#;
        let config = ProblemConfig::from_json(text).unwrap();
        let space = config.build_space().unwrap();
        let m = config.build_symbol(&space).unwrap().eval_at(0).unwrap();
        assert_eq!(m[(0, 0)], Complex64::new(1.5, 0.0));
        assert_eq!(m[(0, 1)], Complex64::new(0.0, 1.0));
        assert_eq!(m[(1, 0)], Complex64::new(2.0, 3.0));
        assert_eq!(m[(1, 1)], Complex64::new(1.0, 0.0));
    }

    #[test]
    fn expr_symbol_and_inf_norms() {
        let text = r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0, 2.0, 3.0], "weights": [0.3, 0.3, 0.4]},
            "symbol": {"kind": "expr", "n": 1, "entries": [["x^2"]]},
            "norm": {"type": "lp", "p": "inf"}
        }"#;
        let config = ProblemConfig::from_json(text).unwrap();
        let space = config.build_space().unwrap();
        let symbol = config.build_symbol(&space).unwrap();
        assert_eq!(symbol.eval_at(2).unwrap()[(0, 0)].re, 9.0);
        assert_eq!(config.build_norm().unwrap(), NormSpec::lp(f64::INFINITY));
    }

    #[test]
    fn sequence_space_with_tail() {
        let text = r#"{
            "version": 1,
            "space": {"mode": "sequence", "truncation": 16,
                      "weight_rule": {"type": "geometric", "first": 0.5, "ratio": 0.5}},
            "symbol": {"kind": "expr", "n": 1, "entries": [["1/x"]],
                       "tail": {"envelope": {"coeff": 1.0, "exponent": -1.0},
                                "spectral_bound": 0.0, "support": true}}
        }"#;
        let config = ProblemConfig::from_json(text).unwrap();
        let space = config.build_space().unwrap();
        assert_eq!(space.atom_count(), 16);
        let symbol = config.build_symbol(&space).unwrap();
        assert!(symbol.tail().is_some());
    }

    #[test]
    fn unbounded_envelope_keyword() {
        let text = r#"{
            "version": 1,
            "space": {"mode": "sequence", "truncation": 8,
                      "weight_rule": {"type": "inverse_power", "coeff": 1.0, "power": 2.0}},
            "symbol": {"kind": "expr", "n": 1, "entries": [["x"]],
                       "tail": {"envelope": "unbounded", "spectral_bound": 1e308,
                                "support": true, "norm_floor": 1.0}}
        }"#;
        let config = ProblemConfig::from_json(text).unwrap();
        let space = config.build_space().unwrap();
        let symbol = config.build_symbol(&space).unwrap();
        assert_eq!(
            symbol.tail().unwrap().norm_envelope,
            TailEnvelope::Unbounded
        );
    }

    #[test]
    fn malformed_config_names_the_problem() {
        let missing = r#"{"version": 1, "space": {"mode": "finite", "atoms": [1.0]}}"#;
        match ProblemConfig::from_json(missing) {
            Err(Error::Config(message)) => assert!(message.contains("weights")),
            other => panic!("expected config error, got {other:?}"),
        }

        let bad_version = r#"{
            "version": 7,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[1.0]]}
        }"#;
        match ProblemConfig::from_json(bad_version) {
            Err(Error::Config(message)) => assert!(message.contains("version")),
            other => panic!("expected config error, got {other:?}"),
        }

        let bad_phi = r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [[1.0]]},
            "norm": {"type": "orlicz", "phi": "bogus"}
        }"#;
        let config = ProblemConfig::from_json(bad_phi).unwrap();
        match config.build_norm() {
            Err(Error::Config(message)) => assert!(message.contains("bogus")),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn constant_entries_reject_coordinate_use() {
        let text = r#"{
            "version": 1,
            "space": {"mode": "finite", "atoms": [1.0], "weights": [1.0]},
            "symbol": {"kind": "constant", "n": 1, "matrix": [["x+1"]]}
        }"#;
        let config = ProblemConfig::from_json(text).unwrap();
        let space = config.build_space().unwrap();
        assert!(config.build_symbol(&space).is_err());
    }
}
