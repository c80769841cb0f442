//! Matrix-valued symbol functions `u : Ω → M_N(C)`.
//!
//! A symbol is a constant matrix, a per-atom table, or an N×N matrix of DSL
//! expressions in the coordinate `x`. Sequence-mode symbols may carry a
//! [`SymbolTail`] describing certified behavior past the truncation; the
//! analyzers that reason about the untruncated tail require it.

use num_complex::Complex64;

use crate::expr::Expression;
use crate::matrix::ComplexMatrix;
use crate::measure::{SpaceRef, same_space};
use crate::{Error, Result};

/// Dimension cap for symbol values; keeps every per-atom computation dense
/// and cheap.
pub const MAX_SYMBOL_DIM: usize = 8;

/// Monotone envelope for `‖u(a_k)‖` past the truncation index.
///
/// The envelope is a certified upper bound treated as sharp in the limit:
/// deciding compactness and closure needs the limiting size of the tail, not
/// just a one-sided bound, so constructors should pick the tightest form that
/// holds.
#[derive(Debug, Clone, PartialEq)]
pub enum TailEnvelope {
    /// `‖u(a_k)‖ ≤ coeff · k^exponent`; decays for negative exponents, is
    /// flat for zero, and grows without bound for positive ones.
    Power { coeff: f64, exponent: f64 },
    /// No finite envelope exists.
    Unbounded,
}

impl TailEnvelope {
    /// Supremum of the envelope over `k > after`.
    pub fn sup_after(&self, after: usize) -> f64 {
        match *self {
            TailEnvelope::Power { coeff, exponent } => {
                if exponent > 0.0 {
                    f64::INFINITY
                } else {
                    coeff * ((after + 1) as f64).powf(exponent)
                }
            }
            TailEnvelope::Unbounded => f64::INFINITY,
        }
    }

    /// Limit of the envelope as `k → ∞`.
    pub fn limit(&self) -> f64 {
        match *self {
            TailEnvelope::Power { coeff, exponent } => {
                if exponent < 0.0 {
                    0.0
                } else if exponent == 0.0 {
                    coeff
                } else {
                    f64::INFINITY
                }
            }
            TailEnvelope::Unbounded => f64::INFINITY,
        }
    }

    /// Whether `{k : envelope(k) ≥ eps}` is a finite set.
    pub fn level_set_is_finite(&self, eps: f64) -> bool {
        self.limit() < eps
    }
}

/// Certified tail data for a sequence-mode symbol.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolTail {
    /// Envelope for `‖u(a_k)‖`, `k` past the truncation.
    pub norm_envelope: TailEnvelope,
    /// Upper bound for the spectral bound `s(u(a_k))` on the tail.
    pub spectral_bound: f64,
    /// Whether `u` is nonzero on infinitely many tail atoms.
    pub support: bool,
    /// Certified lower bound for `|u(a_k)|` over the tail support (scalar
    /// analyzers); 0 when no positive bound is known.
    pub norm_floor: f64,
}

impl SymbolTail {
    /// Tail of a symbol that vanishes identically past the truncation.
    pub fn zero() -> Self {
        SymbolTail {
            norm_envelope: TailEnvelope::Power {
                coeff: 0.0,
                exponent: 0.0,
            },
            spectral_bound: 0.0,
            support: false,
            norm_floor: 0.0,
        }
    }
}

#[derive(Debug, Clone)]
pub enum SymbolBody {
    Constant(ComplexMatrix),
    Table(Vec<ComplexMatrix>),
    /// Row-major N×N expressions in the atom coordinate.
    ExprMatrix(Vec<Expression>),
}

/// Measurable symbol `u` over a space, identified with its values on
/// positive-weight atoms.
#[derive(Debug, Clone)]
pub struct SymbolFunction {
    space: SpaceRef,
    dim: usize,
    body: SymbolBody,
    tail: Option<SymbolTail>,
}

impl SymbolFunction {
    pub fn constant(space: SpaceRef, value: ComplexMatrix) -> Result<Self> {
        check_dim(value.dim())?;
        Ok(SymbolFunction {
            dim: value.dim(),
            space,
            body: SymbolBody::Constant(value),
            tail: None,
        })
    }

    pub fn identity(space: SpaceRef, dim: usize) -> Result<Self> {
        Self::constant(space, ComplexMatrix::identity(dim))
    }

    pub fn table(space: SpaceRef, values: Vec<ComplexMatrix>) -> Result<Self> {
        if values.len() != space.atom_count() {
            return Err(Error::DimensionMismatch(format!(
                "table has {} entries for {} atoms",
                values.len(),
                space.atom_count()
            )));
        }
        let dim = values.first().map_or(0, ComplexMatrix::dim);
        check_dim(dim)?;
        if values.iter().any(|m| m.dim() != dim) {
            return Err(Error::DimensionMismatch(
                "table entries must share one dimension".into(),
            ));
        }
        Ok(SymbolFunction {
            space,
            dim,
            body: SymbolBody::Table(values),
            tail: None,
        })
    }

    /// Symbol from row-major N×N expressions.
    pub fn from_exprs(space: SpaceRef, dim: usize, entries: Vec<Expression>) -> Result<Self> {
        check_dim(dim)?;
        if entries.len() != dim * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} expressions, got {}",
                dim * dim,
                entries.len()
            )));
        }
        Ok(SymbolFunction {
            space,
            dim,
            body: SymbolBody::ExprMatrix(entries),
            tail: None,
        })
    }

    /// Tabulate `f(atom index)` over the space.
    pub fn tabulate(space: SpaceRef, f: impl Fn(usize) -> ComplexMatrix) -> Result<Self> {
        let values: Vec<ComplexMatrix> = (0..space.atom_count()).map(f).collect();
        Self::table(space, values)
    }

    pub fn with_tail(mut self, tail: SymbolTail) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn body(&self) -> &SymbolBody {
        &self.body
    }

    pub fn tail(&self) -> Option<&SymbolTail> {
        self.tail.as_ref()
    }

    /// Tail data, required: errors when a sequence-mode symbol lacks it.
    /// Finite-mode symbols get an implicit zero tail.
    pub fn tail_required(&self) -> Result<SymbolTail> {
        if self.space.is_finite_mode() {
            return Ok(self.tail.clone().unwrap_or_else(SymbolTail::zero));
        }
        self.tail.clone().ok_or(Error::MissingTailEnvelope)
    }

    pub fn same_space_as(&self, other: &SpaceRef) -> bool {
        same_space(&self.space, other)
    }

    /// `u(x_i)` as an N×N matrix; errors when any entry is non-finite.
    pub fn eval_at(&self, atom: usize) -> Result<ComplexMatrix> {
        let value = match &self.body {
            SymbolBody::Constant(m) => m.clone(),
            SymbolBody::Table(values) => values[atom].clone(),
            SymbolBody::ExprMatrix(entries) => {
                let x = self.space.coordinate(atom);
                let data: Vec<Complex64> = entries.iter().map(|e| e.eval(x)).collect();
                ComplexMatrix::from_rows(self.dim, &data)
            }
        };
        if !value.is_finite() {
            return Err(Error::NonFinite { atom });
        }
        Ok(value)
    }

    /// Evaluate at every atom (including zero-weight ones).
    pub fn eval_all(&self) -> Result<Vec<ComplexMatrix>> {
        (0..self.space.atom_count()).map(|i| self.eval_at(i)).collect()
    }

    /// Check that the symbol is finite on every positive-weight atom.
    pub fn validate(&self) -> Result<()> {
        for atom in self.space.positive_atoms() {
            self.eval_at(atom)?;
        }
        Ok(())
    }

    /// Same symbol on the `factor`-fold refinement of its space. Table
    /// entries are copied to every child of their parent atom.
    pub fn refined(&self, factor: usize) -> Result<Self> {
        let refined_space = self.space.refine(factor)?;
        let body = match &self.body {
            SymbolBody::Constant(m) => SymbolBody::Constant(m.clone()),
            SymbolBody::ExprMatrix(entries) => SymbolBody::ExprMatrix(entries.clone()),
            SymbolBody::Table(values) => {
                let mut children = Vec::with_capacity(values.len() * factor);
                for v in values {
                    for _ in 0..factor {
                        children.push(v.clone());
                    }
                }
                SymbolBody::Table(children)
            }
        };
        Ok(SymbolFunction {
            space: refined_space,
            dim: self.dim,
            body,
            tail: self.tail.clone(),
        })
    }

    /// Pointwise `k`-fold product `u^k` as a table symbol.
    pub fn power(&self, k: u32) -> Result<Self> {
        let values: Result<Vec<ComplexMatrix>> = (0..self.space.atom_count())
            .map(|i| self.eval_at(i).map(|m| m.powi(k)))
            .collect();
        let mut sym = Self::table(self.space.clone(), values?)?;
        sym.tail = self.tail.clone();
        Ok(sym)
    }
}

fn check_dim(dim: usize) -> Result<()> {
    if dim == 0 || dim > MAX_SYMBOL_DIM {
        return Err(Error::DimensionMismatch(format!(
            "symbol dimension {dim} outside 1..={MAX_SYMBOL_DIM}"
        )));
    }
    Ok(())
}
