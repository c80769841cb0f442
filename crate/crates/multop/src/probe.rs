//! Seeded generators for probe functions and random test symbols. Every
//! randomized sweep in the crate draws from a ChaCha stream so results are
//! reproducible from a single `u64` seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::matrix::ComplexMatrix;
use crate::measure::SpaceRef;
use crate::space::VectorFunction;
use crate::symbol::SymbolFunction;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_complex(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_matrix(rng: &mut ChaCha8Rng, dim: usize) -> ComplexMatrix {
    let entries: Vec<Complex64> = (0..dim * dim).map(|_| random_complex(rng)).collect();
    ComplexMatrix::from_rows(dim, &entries)
}

pub fn random_vector_function(
    rng: &mut ChaCha8Rng,
    space: &SpaceRef,
    dim: usize,
) -> VectorFunction {
    let values: Vec<Complex64> = (0..space.atom_count() * dim)
        .map(|_| random_complex(rng))
        .collect();
    VectorFunction::new(space.clone(), dim, values).expect("generated function is well-formed")
}

/// Random tabulated symbol with `‖u‖_∞` scaled into `(0.3, 1.0] · norm_cap`.
pub fn random_symbol(
    rng: &mut ChaCha8Rng,
    space: &SpaceRef,
    dim: usize,
    norm_cap: f64,
) -> SymbolFunction {
    let mut values: Vec<ComplexMatrix> = (0..space.atom_count())
        .map(|_| random_matrix(rng, dim))
        .collect();
    let sup = values
        .iter()
        .map(ComplexMatrix::sup_induced_norm)
        .fold(0.0, f64::max);
    let target = norm_cap * rng.gen_range(0.3..=1.0);
    if sup > 0.0 {
        let scale = Complex64::new(target / sup, 0.0);
        for v in values.iter_mut() {
            *v = v.scale(scale);
        }
    }
    SymbolFunction::table(space.clone(), values).expect("generated symbol is well-formed")
}

/// Random scalar symbol whose values are drawn from `{0} ∪ [lo, hi]`,
/// with `zero_probability` mass on exact zeros.
pub fn random_scalar_with_zeros(
    rng: &mut ChaCha8Rng,
    space: &SpaceRef,
    zero_probability: f64,
    lo: f64,
    hi: f64,
) -> SymbolFunction {
    let values: Vec<ComplexMatrix> = (0..space.atom_count())
        .map(|_| {
            let v = if rng.gen_bool(zero_probability) {
                Complex64::new(0.0, 0.0)
            } else {
                let magnitude = rng.gen_range(lo..=hi);
                let phase: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
                Complex64::new(magnitude * phase.cos(), magnitude * phase.sin())
            };
            ComplexMatrix::from_rows(1, &[v])
        })
        .collect();
    SymbolFunction::table(space.clone(), values).expect("generated symbol is well-formed")
}
