//! Weighted-atom model of a σ-finite measure space.
//!
//! Finite mode is an explicit list of atoms. Sequence mode models a countable
//! space truncated at index `K`, carrying a closed-form weight rule whose
//! tail mass past the truncation is certified by a finite bound. Atoms carry
//! a single real coordinate `x`, which the expression DSL consumes; zero
//! weights are permitted and every analyzer ignores those atoms ("a.e." means
//! "on every atom of positive weight").

use std::sync::Arc;

use crate::{Error, Result};

/// Shared handle to a measure space; all functions and symbols hold one.
pub type SpaceRef = Arc<MeasureSpace>;

/// Closed-form weight rule for sequence-mode atoms (1-based index `k`).
#[derive(Debug, Clone, PartialEq)]
pub enum WeightRule {
    /// `w_k = first · ratio^(k-1)` with `0 < ratio < 1`.
    Geometric { first: f64, ratio: f64 },
    /// `w_k = coeff · k^(-power)` with `power > 1`.
    InversePower { coeff: f64, power: f64 },
}

impl WeightRule {
    pub fn weight(&self, k: usize) -> f64 {
        match *self {
            WeightRule::Geometric { first, ratio } => first * ratio.powi(k as i32 - 1),
            WeightRule::InversePower { coeff, power } => coeff * (k as f64).powf(-power),
        }
    }

    /// Certified upper bound on `Σ_{k > after} w_k`.
    pub fn tail_mass(&self, after: usize) -> f64 {
        match *self {
            WeightRule::Geometric { first, ratio } => {
                first * ratio.powi(after as i32) / (1.0 - ratio)
            }
            // integral comparison: Σ_{k>K} k^-p ≤ ∫_K^∞ t^-p dt
            WeightRule::InversePower { coeff, power } => {
                coeff * (after as f64).powf(1.0 - power) / (power - 1.0)
            }
        }
    }

    fn validate(&self) -> Result<()> {
        match *self {
            WeightRule::Geometric { first, ratio } => {
                if !(first > 0.0 && first.is_finite()) || !(ratio > 0.0 && ratio < 1.0) {
                    return Err(Error::Config(
                        "geometric weight rule needs first > 0 and 0 < ratio < 1".into(),
                    ));
                }
            }
            WeightRule::InversePower { coeff, power } => {
                if !(coeff > 0.0 && coeff.is_finite()) || !(power > 1.0) {
                    return Err(Error::Config(
                        "inverse-power weight rule needs coeff > 0 and power > 1".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SpaceMode {
    Finite,
    Sequence {
        rule: WeightRule,
        truncation: usize,
        tail_mass: f64,
    },
}

/// Discretized measure space: ordered atoms with coordinates and weights.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasureSpace {
    coordinates: Vec<f64>,
    weights: Vec<f64>,
    nonatomic: bool,
    mode: SpaceMode,
}

impl MeasureSpace {
    /// Finite space from explicit coordinates and weights.
    ///
    /// `nonatomic` marks the space as a refinement-approximation of a
    /// non-atomic space, which is a hypothesis of the Fredholm analyzer.
    pub fn finite(coordinates: Vec<f64>, weights: Vec<f64>, nonatomic: bool) -> Result<SpaceRef> {
        if coordinates.is_empty() {
            return Err(Error::Config("finite space needs at least one atom".into()));
        }
        if coordinates.len() != weights.len() {
            return Err(Error::Config(format!(
                "{} coordinates but {} weights",
                coordinates.len(),
                weights.len()
            )));
        }
        if coordinates.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("atom coordinates must be finite".into()));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::Config("weights must be finite and nonnegative".into()));
        }
        Ok(Arc::new(MeasureSpace {
            coordinates,
            weights,
            nonatomic,
            mode: SpaceMode::Finite,
        }))
    }

    /// Finite space with unit total mass split evenly over `n` atoms at
    /// coordinates `1..=n`.
    pub fn uniform(n: usize, nonatomic: bool) -> SpaceRef {
        let coordinates: Vec<f64> = (1..=n).map(|k| k as f64).collect();
        let weights = vec![1.0 / n as f64; n];
        Self::finite(coordinates, weights, nonatomic).expect("uniform space is valid")
    }

    /// Sequence-mode space truncated at index `truncation`; atom `k` sits at
    /// coordinate `x = k` with weight `rule.weight(k)`.
    pub fn sequence(rule: WeightRule, truncation: usize, nonatomic: bool) -> Result<SpaceRef> {
        rule.validate()?;
        if truncation == 0 {
            return Err(Error::Config("truncation index must be at least 1".into()));
        }
        let coordinates: Vec<f64> = (1..=truncation).map(|k| k as f64).collect();
        let weights: Vec<f64> = (1..=truncation).map(|k| rule.weight(k)).collect();
        let tail_mass = rule.tail_mass(truncation);
        if !tail_mass.is_finite() || tail_mass < 0.0 {
            return Err(Error::Config("tail mass bound must be finite".into()));
        }
        Ok(Arc::new(MeasureSpace {
            coordinates,
            weights,
            nonatomic,
            mode: SpaceMode::Sequence {
                rule,
                truncation,
                tail_mass,
            },
        }))
    }

    pub fn atom_count(&self) -> usize {
        self.coordinates.len()
    }

    pub fn coordinate(&self, atom: usize) -> f64 {
        self.coordinates[atom]
    }

    pub fn weight(&self, atom: usize) -> f64 {
        self.weights[atom]
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn nonatomic_flag(&self) -> bool {
        self.nonatomic
    }

    pub fn mode(&self) -> &SpaceMode {
        &self.mode
    }

    pub fn is_finite_mode(&self) -> bool {
        matches!(self.mode, SpaceMode::Finite)
    }

    /// Certified bound on the measure past the truncation (0 in finite mode).
    pub fn tail_mass(&self) -> f64 {
        match &self.mode {
            SpaceMode::Finite => 0.0,
            SpaceMode::Sequence { tail_mass, .. } => *tail_mass,
        }
    }

    /// Total measure of the modeled space: explicit atoms plus the certified
    /// tail bound in sequence mode.
    pub fn total_measure(&self) -> f64 {
        self.weights.iter().sum::<f64>() + self.tail_mass()
    }

    /// Indices of atoms with positive weight.
    pub fn positive_atoms(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.atom_count()).filter(|&i| self.weights[i] > 0.0)
    }

    /// Split every atom into `factor` children of equal weight at the parent
    /// coordinate. Total measure is preserved exactly.
    pub fn refine(self: &Arc<Self>, factor: usize) -> Result<SpaceRef> {
        if !self.is_finite_mode() {
            return Err(Error::SequenceModeUnsupported);
        }
        if factor == 0 {
            return Err(Error::Config("refinement factor must be positive".into()));
        }
        if factor == 1 {
            return Ok(Arc::clone(self));
        }
        let mut coordinates = Vec::with_capacity(self.atom_count() * factor);
        let mut weights = Vec::with_capacity(self.atom_count() * factor);
        for i in 0..self.atom_count() {
            let child_weight = self.weights[i] / factor as f64;
            for _ in 0..factor {
                coordinates.push(self.coordinates[i]);
                weights.push(child_weight);
            }
        }
        Ok(Arc::new(MeasureSpace {
            coordinates,
            weights,
            nonatomic: self.nonatomic,
            mode: SpaceMode::Finite,
        }))
    }

    pub fn full_set(self: &Arc<Self>) -> MeasurableSet {
        MeasurableSet {
            space: Arc::clone(self),
            mask: vec![true; self.atom_count()],
            tail_all: !self.is_finite_mode(),
        }
    }

    pub fn empty_set(self: &Arc<Self>) -> MeasurableSet {
        MeasurableSet {
            space: Arc::clone(self),
            mask: vec![false; self.atom_count()],
            tail_all: false,
        }
    }

    pub fn singleton(self: &Arc<Self>, atom: usize) -> Result<MeasurableSet> {
        let mut mask = vec![false; self.atom_count()];
        *mask
            .get_mut(atom)
            .ok_or_else(|| Error::Config(format!("atom index {atom} out of range")))? = true;
        Ok(MeasurableSet {
            space: Arc::clone(self),
            mask,
            tail_all: false,
        })
    }

    pub fn set_from_mask(self: &Arc<Self>, mask: Vec<bool>) -> Result<MeasurableSet> {
        if mask.len() != self.atom_count() {
            return Err(Error::Config(format!(
                "mask length {} does not match atom count {}",
                mask.len(),
                self.atom_count()
            )));
        }
        Ok(MeasurableSet {
            space: Arc::clone(self),
            mask,
            tail_all: false,
        })
    }
}

/// Two handles refer to the same space when they are literally shared or
/// structurally equal.
pub fn same_space(a: &SpaceRef, b: &SpaceRef) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Measurable subset: membership mask over the explicit atoms, plus a flag
/// for sequence-mode sets that extend over the whole truncated tail.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurableSet {
    space: SpaceRef,
    mask: Vec<bool>,
    tail_all: bool,
}

impl MeasurableSet {
    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn mask(&self) -> &[bool] {
        &self.mask
    }

    pub fn contains(&self, atom: usize) -> bool {
        self.mask[atom]
    }

    pub fn includes_tail(&self) -> bool {
        self.tail_all
    }

    /// Extend a sequence-mode set over the entire tail past the truncation.
    pub fn with_tail(mut self) -> Self {
        self.tail_all = !self.space.is_finite_mode();
        self
    }

    /// μ(E): sum of member weights; tail sets add the certified tail bound.
    pub fn measure(&self) -> f64 {
        let explicit: f64 = self
            .mask
            .iter()
            .zip(self.space.weights())
            .filter(|(m, _)| **m)
            .map(|(_, w)| w)
            .sum();
        if self.tail_all {
            explicit + self.space.tail_mass()
        } else {
            explicit
        }
    }

    pub fn is_subset_of(&self, other: &MeasurableSet) -> bool {
        same_space(&self.space, &other.space)
            && self
                .mask
                .iter()
                .zip(&other.mask)
                .all(|(a, b)| !*a || *b)
            && (!self.tail_all || other.tail_all)
    }
}

/// μ(E) as a free function, matching the surrounding vocabulary.
pub fn measure_of(set: &MeasurableSet) -> f64 {
    set.measure()
}
