//! Brute-force ground truth: the discretized operator as one dense
//! block-diagonal matrix, with norm and spectrum recomputed independently of
//! the analytic formulas.
//!
//! The eigenvalue path deliberately runs the full dense QR reduction without
//! exploiting the block structure, so agreement with the per-atom spectrum is
//! a genuine two-path check.

use num_complex::Complex64;

use crate::matrix::ComplexMatrix;
use crate::measure::SpaceRef;
use crate::par;
use crate::probe;
use crate::space::{NormSpec, VectorFunction};
use crate::symbol::SymbolFunction;
use crate::{Error, Result};

/// Dimension cap for the dense eigenvalue path.
pub const MAX_DENSE_DIM: usize = 512;

/// Dense assembled operator with block-diagonal structure.
#[derive(Debug, Clone)]
pub struct DenseOperator {
    matrix: ComplexMatrix,
    space: SpaceRef,
    block: usize,
}

impl DenseOperator {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn block_size(&self) -> usize {
        self.block
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    /// Apply through the dense matrix on the stacked coordinate vector.
    pub fn apply(&self, f: &VectorFunction) -> Result<VectorFunction> {
        if f.values().len() != self.dim() || f.dim() != self.block {
            return Err(Error::DimensionMismatch(
                "function shape does not match the assembled operator".into(),
            ));
        }
        let out = self.matrix.mul_vec(f.values());
        VectorFunction::new(self.space.clone(), self.block, out)
    }
}

/// Assemble `M_u` as a dense block-diagonal matrix (finite mode only).
pub fn assemble_dense(u: &SymbolFunction) -> Result<DenseOperator> {
    let space = u.space().clone();
    if !space.is_finite_mode() {
        return Err(Error::SequenceModeUnsupported);
    }
    let atoms = space.atom_count();
    let dim = u.dim();
    let total = atoms * dim;
    let mut matrix = ComplexMatrix::zeros(total);
    for atom in 0..atoms {
        let block = u.eval_at(atom)?;
        for i in 0..dim {
            for j in 0..dim {
                matrix[(atom * dim + i, atom * dim + j)] = block[(i, j)];
            }
        }
    }
    Ok(DenseOperator {
        matrix,
        space,
        block: dim,
    })
}

/// Probe estimate of `‖M_u‖_{X→X}`: the best ratio `‖Df‖_X / ‖f‖_X` over
/// `trials` random functions plus one aligned indicator probe per atom.
///
/// The indicator probe at atom `i` uses the conjugate-phase vector of the
/// block's maximal row, which attains `‖u(x_i)‖` exactly, so the estimate
/// meets the analytic essential sup to rounding.
pub fn operator_norm_estimate(
    d: &DenseOperator,
    ns: &NormSpec,
    trials: usize,
    seed: u64,
) -> Result<f64> {
    let space = d.space().clone();
    let dim = d.block_size();
    let mut rng = probe::rng(seed ^ 0x0e57);
    let mut probes: Vec<VectorFunction> = (0..trials)
        .map(|_| probe::random_vector_function(&mut rng, &space, dim))
        .collect();

    for atom in space.positive_atoms() {
        // aligned sign-pattern probe for the block's maximal row
        let base = atom * dim;
        let mut best_row = 0;
        let mut best_sum = -1.0;
        for r in 0..dim {
            let sum: f64 = (0..dim)
                .map(|cc| d.matrix[(base + r, base + cc)].norm())
                .sum();
            if sum > best_sum {
                best_sum = sum;
                best_row = r;
            }
        }
        let z: Vec<Complex64> = (0..dim)
            .map(|cc| {
                let entry = d.matrix[(base + best_row, base + cc)];
                if entry.norm() == 0.0 {
                    Complex64::new(1.0, 0.0)
                } else {
                    entry.conj() / entry.norm()
                }
            })
            .collect();
        probes.push(space.singleton(atom)?.indicator(&z));
    }

    // ratios are deterministic per probe; evaluate in parallel, reduce after
    let ratios: Vec<Result<f64>> = par::map_indexed(probes.len(), |k| {
        let f = &probes[k];
        let denom = ns.norm(f);
        if denom == 0.0 {
            return Ok(0.0);
        }
        let image = d.apply(f)?;
        Ok(ns.norm(&image) / denom)
    });
    let mut best: f64 = 0.0;
    for r in ratios {
        best = best.max(r?);
    }
    Ok(best)
}

/// All `n·N` eigenvalues through the dense QR path.
pub fn dense_eigenvalues(d: &DenseOperator) -> Result<Vec<Complex64>> {
    if d.dim() > MAX_DENSE_DIM {
        return Err(Error::Config(format!(
            "dense eigenvalue path capped at dimension {MAX_DENSE_DIM}, got {}",
            d.dim()
        )));
    }
    Ok(d.matrix.eigenvalues()?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::hausdorff_distance;
    use crate::measure::MeasureSpace;
    use crate::operator;
    use crate::space::YoungFunction;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn assemble_identity_symbol() {
        let space = MeasureSpace::uniform(3, false);
        let u = SymbolFunction::identity(space, 2).unwrap();
        let d = assemble_dense(&u).unwrap();
        assert_eq!(d.matrix(), &ComplexMatrix::identity(6));
    }

    #[test]
    fn assemble_constant_blocks() {
        let space = MeasureSpace::uniform(2, false);
        let block = ComplexMatrix::from_rows(2, &[c(1.0, 2.0), c(0.0, -1.0), c(3.0, 0.0), c(0.5, 0.5)]);
        let u = SymbolFunction::constant(space, block.clone()).unwrap();
        let d = assemble_dense(&u).unwrap();
        for atom in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    assert_eq!(d.matrix()[(atom * 2 + i, atom * 2 + j)], block[(i, j)]);
                }
            }
        }
        // off-block entries exactly zero
        assert_eq!(d.matrix()[(0, 2)], c(0.0, 0.0));
        assert_eq!(d.matrix()[(3, 1)], c(0.0, 0.0));
    }

    #[test]
    fn dense_apply_matches_pointwise_apply_exactly() {
        let mut rng = probe::rng(71);
        let space = MeasureSpace::uniform(5, false);
        let u = probe::random_symbol(&mut rng, &space, 3, 2.0);
        let d = assemble_dense(&u).unwrap();
        for _ in 0..10 {
            let f = probe::random_vector_function(&mut rng, &space, 3);
            let via_dense = d.apply(&f).unwrap();
            let via_blocks = operator::apply(&u, &f).unwrap();
            assert_eq!(via_dense.values(), via_blocks.values());
        }
    }

    #[test]
    fn norm_estimate_examples() {
        let space = MeasureSpace::uniform(3, false);
        let specs = [
            NormSpec::lp(1.0),
            NormSpec::lp(2.0),
            NormSpec::lp(f64::INFINITY),
            NormSpec::Orlicz {
                phi: YoungFunction::PowerLog { p: 2.0 },
            },
            NormSpec::Lorentz { p: 2.0, q: 1.0 },
        ];
        let id = assemble_dense(&SymbolFunction::identity(space.clone(), 2).unwrap()).unwrap();
        let zero = assemble_dense(
            &SymbolFunction::constant(space.clone(), ComplexMatrix::zeros(2)).unwrap(),
        )
        .unwrap();
        for ns in &specs {
            let est = operator_norm_estimate(&id, ns, 10, 3).unwrap();
            assert!((est - 1.0).abs() <= 1e-9, "{}: {est}", ns.label());
            assert_eq!(operator_norm_estimate(&zero, ns, 10, 3).unwrap(), 0.0);
        }

        // max block norm 7 is attained by the aligned indicator probe
        let blocks = vec![
            ComplexMatrix::from_real_rows(2, &[3.0, 4.0, 0.0, 1.0]),
            ComplexMatrix::from_real_rows(2, &[1.0, 0.0, 0.0, 1.0]),
            ComplexMatrix::from_real_rows(2, &[0.0, 2.0, -1.0, 1.0]),
        ];
        let u = SymbolFunction::table(space, blocks).unwrap();
        let d = assemble_dense(&u).unwrap();
        for ns in &specs {
            let est = operator_norm_estimate(&d, ns, 5, 9).unwrap();
            assert!(
                (est - 7.0).abs() <= 1e-9,
                "{}: estimate {est}",
                ns.label()
            );
        }
    }

    #[test]
    fn dense_spectrum_equals_union_of_block_spectra() {
        let mut rng = probe::rng(73);
        let space = MeasureSpace::uniform(8, false);
        let u = probe::random_symbol(&mut rng, &space, 3, 1.5);
        let d = assemble_dense(&u).unwrap();
        let dense = dense_eigenvalues(&d).unwrap();
        let analytic = operator::spectrum(&u).unwrap();
        // dense path keeps multiplicity; compare as sets
        assert!(hausdorff_distance(&dense, &analytic.points) <= 1e-8);
    }

    #[test]
    fn dense_path_rejects_oversized_operators() {
        let space = MeasureSpace::uniform(80, false);
        let u = SymbolFunction::identity(space, 7).unwrap();
        let d = assemble_dense(&u).unwrap();
        assert!(dense_eigenvalues(&d).is_err());
    }
}
