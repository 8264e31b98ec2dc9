//! Eigenvalue and eigenvector computation in both algebras.
//!
//! Max-plus side: power iteration with periodicity detection recovers the
//! unique eigenvalue of a strongly connected matrix together with an
//! eigenvector assembled from the periodic tail, and the trace formula gives
//! the maximum cycle mean as an independent route to the same number. The
//! Kleene star closes a matrix over all path lengths when no cycle has
//! positive weight.
//!
//! Conventional side: power iteration with 1-norm renormalization, run from
//! two different starts so that periodic or disconnected support is reported
//! as the absence of a dominant eigenvalue instead of silently returning one
//! of several limits.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::graph::PrecedenceGraph;
use crate::real::RealMatrix;
use crate::reference::SplitMix64;
use crate::tropical::{ShapeError, TropicalMatrix, TropicalScalar, TropicalVector};

/// Agreement tolerance for the periodicity test on iterate differences.
const PERIOD_TOL: f64 = 1e-9;

/// Why conventional power iteration failed to produce a dominant pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DominanceFailure {
    /// Update norm never fell below tolerance; the iteration cycles.
    NoConvergence,
    /// Two different starts converged to different limits.
    StartDependentLimit,
    /// An iterate collapsed to the zero vector.
    ZeroIterate,
}

impl fmt::Display for DominanceFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DominanceFailure::NoConvergence => write!(f, "iteration does not converge"),
            DominanceFailure::StartDependentLimit => {
                write!(f, "limit depends on the starting vector")
            }
            DominanceFailure::ZeroIterate => write!(f, "iteration collapsed to the zero vector"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum SpectralError {
    Shape(ShapeError),
    /// The computation requires a strongly connected matrix.
    Reducible,
    /// The starting vector must have every entry finite.
    IrregularStart,
    /// Periodicity was not detected within the iteration cap.
    NoTermination { iterations: usize },
    /// Star closure requested for a matrix with a positive-weight cycle.
    PositiveCycle { vertex: usize },
    /// Conventional entries must be nonnegative for trust semantics.
    NegativeEntry { row: usize, col: usize },
    NoDominantEigenvalue { reason: DominanceFailure },
}

impl fmt::Display for SpectralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SpectralError::Shape(e) => write!(f, "{e}"),
            SpectralError::Reducible => write!(f, "matrix is not strongly connected"),
            SpectralError::IrregularStart => {
                write!(f, "starting vector must be finite in every entry")
            }
            SpectralError::NoTermination { iterations } => {
                write!(f, "no periodic tail within {iterations} iterations")
            }
            SpectralError::PositiveCycle { vertex } => {
                write!(f, "positive-weight cycle through vertex {vertex}; star diverges")
            }
            SpectralError::NegativeEntry { row, col } => {
                write!(f, "negative entry at ({row}, {col})")
            }
            SpectralError::NoDominantEigenvalue { reason } => {
                write!(f, "no dominant eigenvalue: {reason}")
            }
        }
    }
}

impl core::error::Error for SpectralError {}

impl From<ShapeError> for SpectralError {
    fn from(e: ShapeError) -> SpectralError {
        SpectralError::Shape(e)
    }
}

/// Result of max-plus power iteration on a strongly connected matrix.
///
/// `vector` satisfies M ⊗ v = λ ⊗ v for the iterated matrix M. The indices
/// locate the periodic tail of the iteration that produced it: iterates
/// `tail_start..iterations` repeat forever, shifted by λ per step on
/// average, and `cyclicity` is the tail period.
#[derive(Clone, Debug)]
pub struct MaxPlusEigenPair {
    pub value: f64,
    pub vector: TropicalVector,
    pub tail_start: usize,
    pub iterations: usize,
    pub cyclicity: usize,
}

impl MaxPlusEigenPair {
    /// Offset η of the linear growth regime: along the iteration that
    /// produced this pair, iterate k approaches kλ ⊗ η (exactly, entrywise,
    /// once the tail period is 1; as the periodic upper envelope otherwise).
    pub fn asymptotic_offset(&self) -> TropicalVector {
        let anchor = (self.tail_start + self.cyclicity - 1) as f64;
        self.vector.otimes_scalar(TropicalScalar::finite(-self.value * anchor))
    }
}

/// Finds the first iterate that equals an earlier one up to a constant
/// shift on finite entries. Patterns of ε entries must match exactly.
fn shift_between(later: &TropicalVector, earlier: &TropicalVector) -> Option<f64> {
    let mut shift = None;
    for (a, b) in later.iter().zip(earlier.iter()) {
        match (a.is_finite(), b.is_finite()) {
            (true, true) => {
                let d = a.raw() - b.raw();
                match shift {
                    None => shift = Some(d),
                    Some(c) if (d - c).abs() <= PERIOD_TOL => {}
                    Some(_) => return None,
                }
            }
            (false, false) => {}
            _ => return None,
        }
    }
    // A pair of all-ε iterates carries no growth information; treat the
    // shift as zero. Finite starts on strongly connected matrices never
    // reach this.
    Some(shift.unwrap_or(0.0))
}

struct PeriodicTail {
    iterates: Vec<TropicalVector>,
    tail_start: usize,
    iterations: usize,
    shift: f64,
}

/// Iterates v ← M ⊗ v until some iterate repeats an earlier one up to a
/// constant shift, comparing against every stored iterate. Capped at
/// n³ + 100 steps.
fn iterate_until_periodic(
    m: &TropicalMatrix,
    start: &TropicalVector,
) -> Result<PeriodicTail, SpectralError> {
    let n = m.rows();
    let cap = n * n * n + 100;
    let mut iterates = vec![start.clone()];
    for p in 1..=cap {
        let next = m.mat_vec(&iterates[p - 1])?;
        for q in 0..p {
            if let Some(shift) = shift_between(&next, &iterates[q]) {
                iterates.push(next);
                return Ok(PeriodicTail { iterates, tail_start: q, iterations: p, shift });
            }
        }
        iterates.push(next);
    }
    Err(SpectralError::NoTermination { iterations: cap })
}

/// Power iteration on M itself, without transposition or a connectivity
/// check. Callers must pass a matrix whose iteration becomes periodic
/// (strongly connected matrices always do) and a fully finite start.
pub(crate) fn max_power_raw(
    m: &TropicalMatrix,
    start: &TropicalVector,
) -> Result<MaxPlusEigenPair, SpectralError> {
    if !m.is_square() || m.rows() != start.len() {
        return Err(SpectralError::Shape(ShapeError {
            op: "max_power",
            lhs: (m.rows(), m.cols()),
            rhs: (start.len(), 1),
        }));
    }
    if start.iter().any(|s| s.is_epsilon()) {
        return Err(SpectralError::IrregularStart);
    }
    let tail = iterate_until_periodic(m, start)?;
    let gamma = tail.iterations - tail.tail_start;
    let lambda = tail.shift / gamma as f64;
    // v = ⊕_{i=1..γ} λ^{⊗(γ-i)} ⊗ v_{q+i-1}: one representative per phase of
    // the tail, aligned to a common step so their ⊕ is an eigenvector.
    let mut v = TropicalVector::epsilon(start.len());
    for i in 1..=gamma {
        let align = TropicalScalar::finite(lambda * (gamma - i) as f64);
        v = v.oplus(&tail.iterates[tail.tail_start + i - 1].otimes_scalar(align));
    }
    Ok(MaxPlusEigenPair {
        value: lambda,
        vector: v,
        tail_start: tail.tail_start,
        iterations: tail.iterations,
        cyclicity: gamma,
    })
}

/// Max-plus eigenpair of a strongly connected matrix `c`, iterating its
/// transpose from `r`: the returned vector satisfies Cᵀ ⊗ v = λ ⊗ v, the
/// fixed direction of trust propagation t ← Cᵀ ⊗ t.
///
/// `r` must be finite in every entry. Reducible input is rejected; use
/// [`crate::trust::maxtrust`] for matrices with unreachable parts.
pub fn max_power(
    c: &TropicalMatrix,
    r: &TropicalVector,
) -> Result<MaxPlusEigenPair, SpectralError> {
    if !c.is_square() {
        return Err(SpectralError::Shape(ShapeError {
            op: "max_power",
            lhs: (c.rows(), c.cols()),
            rhs: (c.cols(), c.cols()),
        }));
    }
    if !PrecedenceGraph::of_tropical(c)?.is_irreducible() {
        return Err(SpectralError::Reducible);
    }
    max_power_raw(&c.transpose(), r)
}

/// Maximum cycle mean via traces of successive powers:
/// λ = ⊕_{k=1..n} trace(A^⊗k) / k. For a strongly connected matrix this is
/// its unique eigenvalue; ε means the support is acyclic.
pub fn eigenvalue_by_traces(a: &TropicalMatrix) -> Result<TropicalScalar, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::Shape(ShapeError {
            op: "eigenvalue_by_traces",
            lhs: (a.rows(), a.cols()),
            rhs: (a.cols(), a.cols()),
        }));
    }
    let n = a.rows();
    let mut best = TropicalScalar::EPSILON;
    let mut power = a.clone();
    for k in 1..=n {
        if k > 1 {
            power = power.mat_mul(a)?;
        }
        let t = power.trace();
        if t.is_finite() {
            best = best.oplus(TropicalScalar::finite(t.raw() / k as f64));
        }
    }
    Ok(best)
}

/// Maximum cycle mean by dynamic programming over walk lengths, run per
/// strongly connected component. Same value as `eigenvalue_by_traces` but
/// in O(component size × edges) with no sensitivity to near-tied cycle
/// means, which makes it the right tool inside iterative pipelines.
/// Returns ε when the matrix has no cycle at all.
pub fn max_cycle_mean(a: &TropicalMatrix) -> Result<TropicalScalar, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::Shape(ShapeError {
            op: "max_cycle_mean",
            lhs: (a.rows(), a.cols()),
            rhs: (a.cols(), a.cols()),
        }));
    }
    let graph = PrecedenceGraph::of_tropical(a).map_err(SpectralError::Shape)?;
    let mut best = TropicalScalar::EPSILON;
    for comp in graph.strongly_connected_components() {
        if comp.len() == 1 {
            let v = comp[0];
            best = best.oplus(a.get(v, v));
            continue;
        }
        // Edges of the component, in component-local indices.
        let mut local = alloc::collections::BTreeMap::new();
        for (idx, &v) in comp.iter().enumerate() {
            local.insert(v, idx);
        }
        let mut edges = Vec::new();
        for (ui, &u) in comp.iter().enumerate() {
            for &v in graph.neighbors(u) {
                if let Some(&vi) = local.get(&v) {
                    edges.push((ui, vi, a.get(u, v).raw()));
                }
            }
        }
        // walk[k][v]: max weight over k-edge walks from comp[0] to v. Every
        // cycle mean of the component is (walk[n][v] - walk[k][v])/(n - k)
        // for the right v and k; maximizing over v after minimizing over k
        // yields exactly the maximum.
        let m = comp.len();
        let mut walk = vec![vec![f64::NEG_INFINITY; m]; m + 1];
        walk[0][0] = 0.0;
        for k in 1..=m {
            for &(u, v, w) in &edges {
                if walk[k - 1][u] > f64::NEG_INFINITY {
                    let cand = walk[k - 1][u] + w;
                    if cand > walk[k][v] {
                        walk[k][v] = cand;
                    }
                }
            }
        }
        let mut comp_best = f64::NEG_INFINITY;
        for v in 0..m {
            if walk[m][v] == f64::NEG_INFINITY {
                continue;
            }
            let mut v_mean = f64::INFINITY;
            for k in 0..m {
                if walk[k][v] > f64::NEG_INFINITY {
                    let mean = (walk[m][v] - walk[k][v]) / (m - k) as f64;
                    if mean < v_mean {
                        v_mean = mean;
                    }
                }
            }
            if v_mean > comp_best {
                comp_best = v_mean;
            }
        }
        // A strongly connected component with 2+ vertices always carries a
        // cycle through comp[0].
        best = best.oplus(TropicalScalar::finite(comp_best));
    }
    Ok(best)
}

/// Tolerance separating float noise on the diagonal of the closure from a
/// genuinely positive cycle.
const STAR_TOL: f64 = 1e-7;

/// Kleene star A* = E ⊕ A ⊕ A² ⊕ …, the all-pairs best path weights closed
/// with the identity. Finite exactly when no cycle has positive weight;
/// computed by longest-path relaxation over intermediate vertices.
pub fn kleene_star(a: &TropicalMatrix) -> Result<TropicalMatrix, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::Shape(ShapeError {
            op: "kleene_star",
            lhs: (a.rows(), a.cols()),
            rhs: (a.cols(), a.cols()),
        }));
    }
    let n = a.rows();
    let mut d = a.clone();
    for k in 0..n {
        for i in 0..n {
            let dik = d.get(i, k);
            if !dik.is_finite() {
                continue;
            }
            for j in 0..n {
                let through = dik.otimes(d.get(k, j));
                d.set(i, j, d.get(i, j).oplus(through));
            }
        }
    }
    for i in 0..n {
        let dii = d.get(i, i);
        if dii.is_finite() && dii.raw() > STAR_TOL {
            return Err(SpectralError::PositiveCycle { vertex: i });
        }
        d.set(i, i, dii.oplus(TropicalScalar::IDENTITY));
    }
    Ok(d)
}

/// Dominant eigenpair of Aᵀ found by conventional power iteration.
#[derive(Clone, Debug)]
pub struct ConventionalEigenPair {
    /// Rayleigh quotient estimate of the dominant eigenvalue.
    pub value: f64,
    /// Limit vector, nonnegative and normalized to 1-norm 1.
    pub vector: Vec<f64>,
    pub iterations: usize,
}

/// Knobs for [`dominant_eigenpair_conventional`].
#[derive(Clone, Copy, Debug)]
pub struct PowerIterationConfig {
    /// Stop when the 1-norm of the iterate update falls below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Blend weight s for the lazy update (1-s)·Aᵀt + s·t. Zero is the
    /// plain iteration; 0.5 suppresses oscillation on periodic support.
    pub damping: f64,
    /// Run a second, differently seeded start and fail when the two limits
    /// disagree. Disable only where a deterministic answer matters more
    /// than detecting that the matrix has no single dominant direction.
    pub verify_start_independence: bool,
}

impl Default for PowerIterationConfig {
    fn default() -> PowerIterationConfig {
        PowerIterationConfig {
            tolerance: 1e-12,
            max_iterations: 5000,
            damping: 0.0,
            verify_start_independence: true,
        }
    }
}

impl PowerIterationConfig {
    /// Lazy variant that always settles on periodic support, at the cost of
    /// accepting a start-dependent limit when the support is disconnected.
    pub fn lazy() -> PowerIterationConfig {
        PowerIterationConfig {
            tolerance: 1e-10,
            max_iterations: 5000,
            damping: 0.5,
            verify_start_independence: false,
        }
    }
}

fn power_run(
    a: &RealMatrix,
    start: Vec<f64>,
    cfg: &PowerIterationConfig,
) -> Result<ConventionalEigenPair, SpectralError> {
    let s = cfg.damping;
    let mut t = start;
    for k in 1..=cfg.max_iterations {
        let mut next = a.transpose_mat_vec(&t).expect("square by construction");
        if s != 0.0 {
            for (y, &x) in next.iter_mut().zip(t.iter()) {
                *y = (1.0 - s) * *y + s * x;
            }
        }
        let norm: f64 = next.iter().map(|v| v.abs()).sum();
        if norm < 1e-300 {
            return Err(SpectralError::NoDominantEigenvalue {
                reason: DominanceFailure::ZeroIterate,
            });
        }
        for v in &mut next {
            *v /= norm;
        }
        let delta: f64 = next.iter().zip(t.iter()).map(|(a, b)| (a - b).abs()).sum();
        t = next;
        if delta < cfg.tolerance {
            let image = a.transpose_mat_vec(&t).expect("square by construction");
            let num: f64 = image.iter().zip(t.iter()).map(|(y, x)| y * x).sum();
            let den: f64 = t.iter().map(|x| x * x).sum();
            return Ok(ConventionalEigenPair { value: num / den, vector: t, iterations: k });
        }
    }
    Err(SpectralError::NoDominantEigenvalue { reason: DominanceFailure::NoConvergence })
}

/// Dominant eigenpair of Aᵀ (the fixed direction of t ← Aᵀt) by power
/// iteration with 1-norm renormalization.
///
/// Entries must be nonnegative. By default the iteration runs from the
/// uniform vector and from a fixed scrambled positive vector; disagreement
/// of the two limits, oscillation, or collapse to zero is reported as
/// [`SpectralError::NoDominantEigenvalue`] rather than picking one answer.
pub fn dominant_eigenpair_conventional(
    a: &RealMatrix,
    cfg: &PowerIterationConfig,
) -> Result<ConventionalEigenPair, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::Shape(ShapeError {
            op: "dominant_eigenpair",
            lhs: (a.rows(), a.cols()),
            rhs: (a.cols(), a.cols()),
        }));
    }
    let n = a.rows();
    if n == 0 {
        return Err(SpectralError::Shape(ShapeError {
            op: "dominant_eigenpair",
            lhs: (0, 0),
            rhs: (1, 1),
        }));
    }
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j) < 0.0 {
                return Err(SpectralError::NegativeEntry { row: i, col: j });
            }
        }
    }

    let uniform = vec![1.0 / n as f64; n];
    let primary = power_run(a, uniform, cfg)?;
    if cfg.verify_start_independence {
        // Positive scrambled start: breaks any symmetry the uniform start
        // happens to share with the matrix.
        let mut rng = SplitMix64::new(0x5EED_0F_1A57);
        let mut alt: Vec<f64> = (0..n).map(|_| 0.25 + rng.next_f64()).collect();
        let norm: f64 = alt.iter().sum();
        for v in &mut alt {
            *v /= norm;
        }
        let secondary = power_run(a, alt, cfg)?;
        let gap = primary
            .vector
            .iter()
            .zip(secondary.vector.iter())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0f64, f64::max);
        if gap > 1e-6 || (primary.value - secondary.value).abs() > 1e-6 {
            return Err(SpectralError::NoDominantEigenvalue {
                reason: DominanceFailure::StartDependentLimit,
            });
        }
    }
    Ok(primary)
}

/// Structural facts about a conventional matrix that decide which trust
/// computations are well posed on it.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixClass {
    pub nonnegative: bool,
    pub positive: bool,
    /// Rows sum to 1 within 1e-9, entries nonnegative.
    pub row_stochastic: bool,
    /// Nonzero support is strongly connected.
    pub irreducible: bool,
}

pub fn classify_matrix(a: &RealMatrix) -> Result<MatrixClass, SpectralError> {
    if !a.is_square() {
        return Err(SpectralError::Shape(ShapeError {
            op: "classify_matrix",
            lhs: (a.rows(), a.cols()),
            rhs: (a.cols(), a.cols()),
        }));
    }
    let n = a.rows();
    let mut nonnegative = true;
    let mut positive = n > 0;
    let mut row_stochastic = n > 0;
    for i in 0..n {
        let mut sum = 0.0;
        for j in 0..n {
            let v = a.get(i, j);
            nonnegative &= v >= 0.0;
            positive &= v > 0.0;
            sum += v;
        }
        row_stochastic &= (sum - 1.0).abs() <= 1e-9;
    }
    row_stochastic &= nonnegative;
    let irreducible = PrecedenceGraph::of_real(a)?.is_irreducible();
    Ok(MatrixClass { nonnegative, positive, row_stochastic, irreducible })
}

#[cfg(test)]
mod tests {
    use super::*;

    const NEG: f64 = f64::NEG_INFINITY;

    fn two_cycle() -> TropicalMatrix {
        TropicalMatrix::from_rows(&[vec![NEG, 1.0], vec![2.0, NEG]])
    }

    #[test]
    fn iteration_finds_the_cycle_mean_on_a_two_cycle() {
        // Iterating the transpose [[ε,2],[1,ε]] from (0,0) walks
        // (2,1), (3,3); (3,3) = 3 ⊗ (0,0), so λ = 3/2 with period 2 and no
        // transient. v = 1.5 ⊗ (0,0) ⊕ (2,1) = (2, 1.5).
        let pair = max_power(&two_cycle(), &TropicalVector::finite(&[0.0, 0.0])).unwrap();
        assert!((pair.value - 1.5).abs() < 1e-12);
        assert_eq!(pair.tail_start, 0);
        assert_eq!(pair.iterations, 2);
        assert_eq!(pair.cyclicity, 2);
        assert!((pair.vector.get(0).raw() - 2.0).abs() < 1e-12);
        assert!((pair.vector.get(1).raw() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn constructed_vector_is_an_eigenvector() {
        let c = two_cycle();
        let pair = max_power(&c, &TropicalVector::finite(&[0.0, 0.0])).unwrap();
        let image = c.transpose().mat_vec(&pair.vector).unwrap();
        let scaled = pair.vector.otimes_scalar(TropicalScalar::finite(pair.value));
        for i in 0..2 {
            assert!((image.get(i).raw() - scaled.get(i).raw()).abs() < 1e-12);
        }
    }

    #[test]
    fn offset_anchors_the_growth_regime() {
        // Anchor step is q + γ - 1 = 1, so η = v ⊗ (-λ) = (0.5, 0).
        let pair = max_power(&two_cycle(), &TropicalVector::finite(&[0.0, 0.0])).unwrap();
        let eta = pair.asymptotic_offset();
        assert!((eta.get(0).raw() - 0.5).abs() < 1e-12);
        assert!((eta.get(1).raw() - 0.0).abs() < 1e-12);
    }

    #[test]
    fn trace_formula_matches_the_iteration() {
        let lambda = eigenvalue_by_traces(&two_cycle()).unwrap();
        assert!((lambda.raw() - 1.5).abs() < 1e-12);
    }

    #[test]
    fn trace_formula_reports_acyclic_support_as_epsilon() {
        let a = TropicalMatrix::from_rows(&[vec![NEG, 1.0], vec![NEG, NEG]]);
        assert!(eigenvalue_by_traces(&a).unwrap().is_epsilon());
    }

    #[test]
    fn self_loop_beats_the_two_cycle() {
        let a = TropicalMatrix::from_rows(&[vec![2.0, 1.0], vec![2.0, NEG]]);
        let pair = max_power(&a, &TropicalVector::finite(&[0.0, 0.0])).unwrap();
        assert!((pair.value - 2.0).abs() < 1e-12);
        assert!((eigenvalue_by_traces(&a).unwrap().raw() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn walk_recurrence_matches_the_trace_formula() {
        assert!((max_cycle_mean(&two_cycle()).unwrap().raw() - 1.5).abs() < 1e-12);
        let with_loop = TropicalMatrix::from_rows(&[vec![2.0, 1.0], vec![2.0, NEG]]);
        assert!((max_cycle_mean(&with_loop).unwrap().raw() - 2.0).abs() < 1e-12);
        let mut rng = SplitMix64::new(0xCAB1E);
        for _ in 0..60 {
            let n = 1 + (rng.next_u64() % 6) as usize;
            let a = TropicalMatrix::from_fn(n, n, |_, _| {
                if rng.next_u64() % 3 == 0 {
                    TropicalScalar::EPSILON
                } else {
                    TropicalScalar::finite(rng.next_f64() * 4.0 - 2.0)
                }
            });
            let by_walks = max_cycle_mean(&a).unwrap();
            let by_traces = eigenvalue_by_traces(&a).unwrap();
            assert_eq!(by_walks.is_epsilon(), by_traces.is_epsilon());
            if by_walks.is_finite() {
                assert!((by_walks.raw() - by_traces.raw()).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn walk_recurrence_reports_acyclic_support_as_epsilon() {
        let a = TropicalMatrix::from_rows(&[vec![NEG, 1.0], vec![NEG, NEG]]);
        assert!(max_cycle_mean(&a).unwrap().is_epsilon());
    }

    #[test]
    fn near_tied_cycle_means_are_resolved_exactly() {
        // Two disjoint 2-cycles whose means differ by 1e-7; iteration-based
        // detection would need ~1e7 steps to separate them.
        let a = TropicalMatrix::from_rows(&[
            vec![NEG, 1.0, NEG, NEG],
            vec![1.0, NEG, NEG, NEG],
            vec![NEG, NEG, NEG, 1.0 + 1e-7],
            vec![NEG, NEG, 1.0 + 1e-7, NEG],
        ]);
        let lambda = max_cycle_mean(&a).unwrap().raw();
        assert!((lambda - (1.0 + 1e-7)).abs() < 1e-12);
    }

    #[test]
    fn reducible_input_is_rejected() {
        let a = TropicalMatrix::from_rows(&[vec![1.0, 2.0], vec![NEG, 3.0]]);
        let err = max_power(&a, &TropicalVector::finite(&[0.0, 0.0])).unwrap_err();
        assert_eq!(err, SpectralError::Reducible);
    }

    #[test]
    fn start_with_epsilon_entries_is_rejected() {
        let mut r = TropicalVector::finite(&[0.0, 0.0]);
        r.set(1, TropicalScalar::EPSILON);
        let err = max_power(&two_cycle(), &r).unwrap_err();
        assert_eq!(err, SpectralError::IrregularStart);
    }

    #[test]
    fn star_of_nonpositive_cycles_is_finite() {
        let a = TropicalMatrix::from_rows(&[vec![NEG, -1.0], vec![-2.0, NEG]]);
        let star = kleene_star(&a).unwrap();
        assert_eq!(star.get(0, 0).raw(), 0.0);
        assert_eq!(star.get(0, 1).raw(), -1.0);
        assert_eq!(star.get(1, 0).raw(), -2.0);
        assert_eq!(star.get(1, 1).raw(), 0.0);
    }

    #[test]
    fn star_rejects_positive_cycles() {
        let a = TropicalMatrix::from_rows(&[vec![NEG, 2.0], vec![-1.0, NEG]]);
        assert!(matches!(kleene_star(&a), Err(SpectralError::PositiveCycle { .. })));
    }

    #[test]
    fn dominant_pair_of_a_positive_stochastic_matrix() {
        let a = RealMatrix::from_rows(&[vec![0.6, 0.4], vec![0.2, 0.8]]);
        let pair = dominant_eigenpair_conventional(&a, &PowerIterationConfig::default()).unwrap();
        assert!((pair.value - 1.0).abs() < 1e-9);
        // Stationary direction of this chain is (1/3, 2/3).
        assert!((pair.vector[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((pair.vector[1] - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn plain_iteration_fails_on_a_swap_matrix() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let err =
            dominant_eigenpair_conventional(&a, &PowerIterationConfig::default()).unwrap_err();
        assert!(matches!(err, SpectralError::NoDominantEigenvalue { .. }));
    }

    #[test]
    fn lazy_iteration_settles_on_the_swap_matrix() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let pair = dominant_eigenpair_conventional(&a, &PowerIterationConfig::lazy()).unwrap();
        assert!((pair.value - 1.0).abs() < 1e-8);
        assert!((pair.vector[0] - 0.5).abs() < 1e-8);
    }

    #[test]
    fn two_start_check_catches_a_periodic_tail_block() {
        // Row-stochastic, but vertex 0 only feeds the swap pair {1, 2}:
        // from a start with unequal weight on 1 and 2 the iteration
        // oscillates forever, so no dominant pair is reported.
        let a = RealMatrix::from_rows(&[
            vec![0.0, 0.5, 0.5],
            vec![0.0, 0.0, 1.0],
            vec![0.0, 1.0, 0.0],
        ]);
        let err =
            dominant_eigenpair_conventional(&a, &PowerIterationConfig::default()).unwrap_err();
        assert!(matches!(err, SpectralError::NoDominantEigenvalue { .. }));
    }

    #[test]
    fn classification_flags_match_the_definitions() {
        let a = RealMatrix::from_rows(&[vec![0.6, 0.4], vec![0.2, 0.8]]);
        let class = classify_matrix(&a).unwrap();
        assert!(class.nonnegative && class.positive && class.row_stochastic);
        assert!(class.irreducible);

        let b = RealMatrix::from_rows(&[vec![1.0, 0.0], vec![0.3, 0.7]]);
        let class = classify_matrix(&b).unwrap();
        assert!(class.nonnegative && !class.positive && class.row_stochastic);
        assert!(!class.irreducible);
    }
}
