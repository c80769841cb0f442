//! The C^N-valued Banach function space over a discretized measure space:
//! vector functions, the three norm families, axiom verification, and
//! absolute-continuity checks.
//!
//! The pointwise norm on `C^N` is the sup norm everywhere. A vector function
//! therefore reduces, for norm purposes, to the scalar profile
//! `m_i = ‖f(x_i)‖_sup` against the atom weights.

use num_complex::Complex64;
use rand::Rng;

use crate::measure::{MeasurableSet, SpaceRef, same_space};
use crate::{Error, Result};

/// Relative width target for the Luxemburg norm bisection.
const LUXEMBURG_REL_WIDTH: f64 = 1e-12;

/// C^N-valued function on a space: per-atom vectors, atom-major.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorFunction {
    space: SpaceRef,
    dim: usize,
    values: Vec<Complex64>,
}

impl VectorFunction {
    pub fn new(space: SpaceRef, dim: usize, values: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::DimensionMismatch("dimension must be positive".into()));
        }
        if values.len() != space.atom_count() * dim {
            return Err(Error::DimensionMismatch(format!(
                "expected {} values, got {}",
                space.atom_count() * dim,
                values.len()
            )));
        }
        Ok(VectorFunction { space, dim, values })
    }

    pub fn zero(space: SpaceRef, dim: usize) -> Self {
        let len = space.atom_count() * dim;
        VectorFunction {
            space,
            dim,
            values: vec![Complex64::new(0.0, 0.0); len],
        }
    }

    /// Constant function equal to `z` at every atom.
    pub fn constant(space: SpaceRef, z: &[Complex64]) -> Self {
        let mut values = Vec::with_capacity(space.atom_count() * z.len());
        for _ in 0..space.atom_count() {
            values.extend_from_slice(z);
        }
        VectorFunction {
            space,
            dim: z.len(),
            values,
        }
    }

    /// Constant function `(1, …, 1)`.
    pub fn ones(space: SpaceRef, dim: usize) -> Self {
        Self::constant(space, &vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn space(&self) -> &SpaceRef {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn value(&self, atom: usize) -> &[Complex64] {
        &self.values[atom * self.dim..(atom + 1) * self.dim]
    }

    /// `‖f(x_i)‖_sup`.
    pub fn pointwise_sup(&self, atom: usize) -> f64 {
        self.value(atom).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scale(&self, c: Complex64) -> Self {
        VectorFunction {
            space: self.space.clone(),
            dim: self.dim,
            values: self.values.iter().map(|&z| z * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(same_space(&self.space, &other.space) && self.dim == other.dim);
        VectorFunction {
            space: self.space.clone(),
            dim: self.dim,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    /// `f · 1_E`.
    pub fn restrict(&self, set: &MeasurableSet) -> Self {
        let mut values = self.values.clone();
        for atom in 0..self.space.atom_count() {
            if !set.contains(atom) {
                for j in 0..self.dim {
                    values[atom * self.dim + j] = Complex64::new(0.0, 0.0);
                }
            }
        }
        VectorFunction {
            space: self.space.clone(),
            dim: self.dim,
            values,
        }
    }

    /// Largest pointwise sup over positive-weight atoms.
    pub fn sup_over_positive_atoms(&self) -> f64 {
        self.space
            .positive_atoms()
            .map(|i| self.pointwise_sup(i))
            .fold(0.0, f64::max)
    }
}

impl MeasurableSet {
    /// `1_E · z`: equal to `z` on member atoms, zero elsewhere.
    pub fn indicator(&self, z: &[Complex64]) -> VectorFunction {
        let space = self.space().clone();
        let dim = z.len();
        let mut values = vec![Complex64::new(0.0, 0.0); space.atom_count() * dim];
        for atom in 0..space.atom_count() {
            if self.contains(atom) {
                values[atom * dim..(atom + 1) * dim].copy_from_slice(z);
            }
        }
        VectorFunction { space, dim, values }
    }
}

/// Built-in Δ₂ Young functions for the Orlicz (Luxemburg) norm, plus one
/// deliberately broken fixture used to exercise axiom verification.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungFunction {
    /// `Φ(t) = t^p`, `p ≥ 1`.
    Power { p: f64 },
    /// `Φ(t) = t^p · log(1 + t)`, `p ≥ 1`.
    PowerLog { p: f64 },
    /// `Φ(t) = t²/(1+t) + t²`.
    RatioQuadratic,
    /// Piecewise fixture that is neither convex nor increasing. Not a Young
    /// function; exists so the axiom verifier has something to catch.
    NonMonotoneFixture,
}

impl YoungFunction {
    pub fn eval(&self, t: f64) -> f64 {
        match self {
            YoungFunction::Power { p } => t.powf(*p),
            YoungFunction::PowerLog { p } => t.powf(*p) * (1.0 + t).ln(),
            YoungFunction::RatioQuadratic => t * t / (1.0 + t) + t * t,
            YoungFunction::NonMonotoneFixture => {
                if t <= 1.0 {
                    t
                } else if t <= 1.8 {
                    1.0 - 1.1875 * (t - 1.0)
                } else {
                    t - 1.75
                }
            }
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            YoungFunction::Power { .. } => "tp",
            YoungFunction::PowerLog { .. } => "tp_log",
            YoungFunction::RatioQuadratic => "t2_ratio",
            YoungFunction::NonMonotoneFixture => "non_monotone_fixture",
        }
    }

    /// Grid check of the Young-function shape: `Φ(0) = 0`, nondecreasing,
    /// and midpoint-convex on a log-spaced grid.
    pub fn shape_ok(&self) -> bool {
        if self.eval(0.0) != 0.0 {
            return false;
        }
        let grid: Vec<f64> = (0..200).map(|k| 1e-3 * 1.1f64.powi(k)).collect();
        for w in grid.windows(2) {
            if self.eval(w[1]) < self.eval(w[0]) - 1e-14 {
                return false;
            }
            let mid = 0.5 * (w[0] + w[1]);
            if self.eval(mid) > 0.5 * (self.eval(w[0]) + self.eval(w[1])) + 1e-12 {
                return false;
            }
        }
        true
    }
}

/// A Banach function norm: `L^p`, Orlicz (Luxemburg), or Lorentz `L^{p,q}`.
#[derive(Debug, Clone, PartialEq)]
pub enum NormSpec {
    /// `p ∈ [1, ∞]`; use `f64::INFINITY` for the essential sup norm.
    Lp { p: f64 },
    Orlicz { phi: YoungFunction },
    /// `p ∈ (0, ∞)`, `q ∈ (0, ∞]`.
    Lorentz { p: f64, q: f64 },
}

impl NormSpec {
    pub fn lp(p: f64) -> Self {
        NormSpec::Lp { p }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            NormSpec::Lp { p } => {
                if !(*p >= 1.0) {
                    return Err(Error::Config(format!("Lp requires p ≥ 1, got {p}")));
                }
            }
            NormSpec::Orlicz { phi } => {
                if let YoungFunction::Power { p } | YoungFunction::PowerLog { p } = phi {
                    if !(*p >= 1.0) || !p.is_finite() {
                        return Err(Error::Config(format!("Orlicz phi needs p ≥ 1, got {p}")));
                    }
                }
                if !phi.shape_ok() {
                    return Err(Error::Config(format!(
                        "Young function `{}` fails the shape check",
                        phi.id()
                    )));
                }
            }
            NormSpec::Lorentz { p, q } => {
                if !(*p > 0.0 && p.is_finite()) || !(*q > 0.0) {
                    return Err(Error::Config(format!(
                        "Lorentz requires p ∈ (0,∞), q ∈ (0,∞], got ({p},{q})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Whether the norm is absolutely continuous (`‖f·1_{E_n}‖ → 0` along
    /// shrinking null sequences). `L^∞` and `L^{p,∞}` are not.
    pub fn has_absolutely_continuous_norm(&self) -> bool {
        match self {
            NormSpec::Lp { p } => p.is_finite(),
            NormSpec::Orlicz { .. } => true, // built-in Φ all satisfy Δ₂
            NormSpec::Lorentz { q, .. } => q.is_finite(),
        }
    }

    pub fn label(&self) -> String {
        match self {
            NormSpec::Lp { p } if p.is_infinite() => "Linf".into(),
            NormSpec::Lp { p } => format!("L{p}"),
            NormSpec::Orlicz { phi } => format!("Orlicz[{}]", phi.id()),
            NormSpec::Lorentz { p, q } => format!("Lorentz({p},{q})"),
        }
    }

    /// `‖f‖_X`. Sequence-mode functions are measured on their truncated head.
    pub fn norm(&self, f: &VectorFunction) -> f64 {
        match self {
            NormSpec::Lp { p } => lp_norm(f, *p),
            NormSpec::Orlicz { phi } => luxemburg_norm(f, phi),
            NormSpec::Lorentz { p, q } => lorentz_norm(&rearrangement_steps(f), *p, *q),
        }
    }
}

fn lp_norm(f: &VectorFunction, p: f64) -> f64 {
    let space = f.space();
    if p.is_infinite() {
        return f.sup_over_positive_atoms();
    }
    let sum: f64 = space
        .positive_atoms()
        .map(|i| space.weight(i) * f.pointwise_sup(i).powf(p))
        .sum();
    sum.powf(1.0 / p)
}

/// Luxemburg norm `inf { k > 0 : Σ w_i Φ(m_i / k) ≤ 1 }` by exponential
/// bracketing plus bisection.
fn luxemburg_norm(f: &VectorFunction, phi: &YoungFunction) -> f64 {
    let space = f.space();
    let profile: Vec<(f64, f64)> = space
        .positive_atoms()
        .map(|i| (space.weight(i), f.pointwise_sup(i)))
        .filter(|(_, m)| *m > 0.0)
        .collect();
    if profile.is_empty() {
        return 0.0;
    }
    let modular = |k: f64| -> f64 { profile.iter().map(|&(w, m)| w * phi.eval(m / k)).sum() };

    let mut hi = profile.iter().map(|&(_, m)| m).fold(0.0, f64::max);
    // grow until the modular drops to 1 or below
    let mut grow_steps = 0;
    while modular(hi) > 1.0 {
        hi *= 2.0;
        grow_steps += 1;
        if grow_steps > 600 {
            return f64::INFINITY;
        }
    }
    let mut lo = hi;
    let mut shrink_steps = 0;
    while modular(lo) <= 1.0 {
        lo *= 0.5;
        shrink_steps += 1;
        if shrink_steps > 2400 {
            return 0.0;
        }
    }
    // bisect [lo, hi] with modular(lo) > 1 ≥ modular(hi)
    while (hi - lo) > LUXEMBURG_REL_WIDTH * hi {
        let mid = 0.5 * (lo + hi);
        if modular(mid) <= 1.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// One step of a decreasing rearrangement: the function value and the measure
/// of the interval it occupies.
pub type Step = (f64, f64);

fn rearrangement_steps(f: &VectorFunction) -> Vec<Step> {
    let space = f.space();
    let mut steps: Vec<Step> = space
        .positive_atoms()
        .map(|i| (f.pointwise_sup(i), space.weight(i)))
        .collect();
    steps.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    steps
}

/// Decreasing rearrangement of `‖f‖_sup` as (value, width) steps, widths
/// summing to the total measure of the positive-weight atoms.
pub fn decreasing_rearrangement(f: &VectorFunction) -> Result<Vec<Step>> {
    if !f.space().is_finite_mode() {
        return Err(Error::SequenceModeUnsupported);
    }
    Ok(rearrangement_steps(f))
}

/// `‖f‖_{p,q}` from rearrangement steps: the step-function form of
/// `( ∫ (t^{1/p} f*(t))^q dt/t )^{1/q}`, with the sup form at `q = ∞`.
fn lorentz_norm(steps: &[Step], p: f64, q: f64) -> f64 {
    let mut cumulative = 0.0;
    if q.is_infinite() {
        let mut best: f64 = 0.0;
        for &(value, width) in steps {
            cumulative += width;
            best = best.max(value * cumulative.powf(1.0 / p));
        }
        return best;
    }
    let mut sum = 0.0;
    for &(value, width) in steps {
        if width == 0.0 {
            continue;
        }
        let a = cumulative;
        cumulative += width;
        let b = cumulative;
        // ∫_a^b t^{q/p - 1} dt = (p/q) (b^{q/p} − a^{q/p})
        sum += value.powf(q) * (p / q) * (b.powf(q / p) - a.powf(q / p));
    }
    sum.powf(1.0 / q)
}

/// Outcome of the function-norm axiom verification on sampled data.
#[derive(Debug, Clone)]
pub struct AxiomReport {
    /// Dominated pairs with `‖f‖ > ‖g‖ + 1e-12` (axiom i); must be zero.
    pub monotonicity_violations: usize,
    pub monotonicity_samples: usize,
    /// Increasing truncations converge upward to the full norm (axiom ii).
    pub fatou_ok: bool,
    pub fatou_worst_gap: f64,
    /// Per sampled set: (μ(E), best constant with ∫_E ‖f‖ dμ ≤ C_E ‖f‖_X).
    pub embedding_constants: Vec<(f64, f64)>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.monotonicity_violations == 0
            && self.fatou_ok
            && self.embedding_constants.iter().all(|(_, c)| c.is_finite())
    }
}

/// Sample-based verification of the three function-norm axioms.
pub fn verify_axioms(
    ns: &NormSpec,
    space: &SpaceRef,
    sample_count: usize,
    seed: u64,
) -> AxiomReport {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xa1107);
    let dim = 2;
    let n = space.atom_count();

    let random_fn = |rng: &mut rand_chacha::ChaCha8Rng| -> VectorFunction {
        let values: Vec<Complex64> = (0..n * dim)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        VectorFunction::new(space.clone(), dim, values).expect("sampled function is well-formed")
    };

    // axiom (i): dominated pairs f ≤ g pointwise, both as an all-atom shrink
    // and as a single-atom shrink (the sharper probe)
    let mut violations = 0;
    let mut monotonicity_samples = 0;
    for _ in 0..sample_count {
        let g = random_fn(&mut rng);
        let norm_g = ns.norm(&g);
        let mut shrunk = g.values().to_vec();
        for atom in 0..n {
            let c: f64 = rng.gen_range(0.0..1.0);
            for j in 0..dim {
                shrunk[atom * dim + j] *= c;
            }
        }
        let f = VectorFunction::new(space.clone(), dim, shrunk).unwrap();
        monotonicity_samples += 1;
        if ns.norm(&f) > norm_g + 1e-12 {
            violations += 1;
        }

        let atom = rng.gen_range(0..n);
        let c: f64 = rng.gen_range(0.0..1.0);
        let mut single = g.values().to_vec();
        for j in 0..dim {
            single[atom * dim + j] *= c;
        }
        let f = VectorFunction::new(space.clone(), dim, single).unwrap();
        monotonicity_samples += 1;
        if ns.norm(&f) > norm_g + 1e-12 {
            violations += 1;
        }
    }

    // axiom (ii): componentwise-nonnegative f, truncations growing to Ω
    let mut fatou_ok = true;
    let mut fatou_worst: f64 = 0.0;
    for _ in 0..sample_count.min(16) {
        let values: Vec<Complex64> = (0..n * dim)
            .map(|_| Complex64::new(rng.gen_range(0.0..1.0), 0.0))
            .collect();
        let f = VectorFunction::new(space.clone(), dim, values).unwrap();
        let full = ns.norm(&f);
        let mut previous = 0.0;
        for cut in 1..=n {
            let mask: Vec<bool> = (0..n).map(|i| i < cut).collect();
            let set = space.set_from_mask(mask).unwrap();
            let truncated = ns.norm(&f.restrict(&set));
            if truncated < previous - 1e-12 {
                fatou_ok = false;
            }
            previous = truncated;
        }
        let gap = (full - previous).abs();
        fatou_worst = fatou_worst.max(gap);
        if gap > 1e-10 {
            fatou_ok = false;
        }
    }

    // axiom (iii): measured best constant per sampled set
    let mut embedding = Vec::new();
    let mut sets = vec![space.full_set()];
    for _ in 0..3 {
        let mask: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
        sets.push(space.set_from_mask(mask).unwrap());
    }
    for set in sets {
        let mut best: f64 = 0.0;
        for _ in 0..sample_count {
            let f = random_fn(&mut rng);
            let norm = ns.norm(&f);
            if norm == 0.0 {
                continue;
            }
            let integral: f64 = (0..n)
                .filter(|&i| set.contains(i) && space.weight(i) > 0.0)
                .map(|i| space.weight(i) * f.pointwise_sup(i))
                .sum();
            best = best.max(integral / norm);
        }
        embedding.push((set.measure(), best));
    }

    AxiomReport {
        monotonicity_violations: violations,
        monotonicity_samples,
        fatou_ok,
        fatou_worst_gap: fatou_worst,
        embedding_constants: embedding,
    }
}

/// Norm decay of `f · 1_{E_n}` along a nested shrinking family: returns the
/// norm sequence and whether it decreases below 1e-10.
///
/// The family must be nested with an (approximately) null intersection; the
/// final set may keep measure up to `1e-12 ·` total as the truncation of an
/// infinite chain.
pub fn absolute_continuity_check(
    f: &VectorFunction,
    sets: &[MeasurableSet],
    ns: &NormSpec,
) -> Result<(bool, Vec<f64>)> {
    for pair in sets.windows(2) {
        if !pair[1].is_subset_of(&pair[0]) {
            return Err(Error::SetsNotNested);
        }
    }
    if let Some(last) = sets.last() {
        let total = f.space().total_measure();
        if last.measure() > 1e-12 * total.max(1.0) {
            return Err(Error::Hypothesis(
                "intersection of the shrinking sets has non-null measure".into(),
            ));
        }
    }
    let norms: Vec<f64> = sets.iter().map(|set| ns.norm(&f.restrict(set))).collect();
    let vanishes = norms.last().map_or(true, |&v| v < 1e-10);
    Ok((vanishes, norms))
}

/// Sampled lower bound for the associate norm `‖f‖_{X'}`: the best pairing
/// `|Σ w_i ⟨f_i, g_i⟩| / ‖g‖_X` over random probes `g`.
pub fn associate_norm_lower_bound(
    f: &VectorFunction,
    ns: &NormSpec,
    trials: usize,
    seed: u64,
) -> f64 {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed ^ 0xd0a1);
    let space = f.space();
    let dim = f.dim();
    let n = space.atom_count();
    let mut best: f64 = 0.0;
    let mut probes: Vec<Vec<Complex64>> = (0..trials)
        .map(|_| {
            (0..n * dim)
                .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    // dual-aligned probe: phases of conj(f), sharp for the L^p pairing
    probes.push(f.values().iter().map(|z| z.conj()).collect());
    for values in probes {
        let g = match VectorFunction::new(space.clone(), dim, values) {
            Ok(g) => g,
            Err(_) => continue,
        };
        let gnorm = ns.norm(&g);
        if gnorm == 0.0 {
            continue;
        }
        let pairing: Complex64 = (0..n)
            .filter(|&i| space.weight(i) > 0.0)
            .map(|i| {
                let fi = f.value(i);
                let gi = g.value(i);
                let dot: Complex64 = fi.iter().zip(gi).map(|(a, b)| a * b).sum();
                dot * space.weight(i)
            })
            .sum();
        best = best.max(pairing.norm() / gnorm);
    }
    best
}
