//! Trust propagation over an agent network in both algebras.
//!
//! Agents score each other; [`normalize_local_trust`] turns raw scores into
//! a conventional row-stochastic matrix and its max-plus counterpart. Global
//! trust is the fixed direction of t ← Cᵀ t: [`eigentrust`] computes it by
//! renormalized power iteration, and [`maxtrust`] computes the max-plus
//! analogue for arbitrary (also reducible) matrices: Cᵀ is decomposed into
//! strongly connected blocks, each block's eigenvalue comes from power
//! iteration, growth rates ξ propagate backwards along the couplings, and
//! offsets anchor the long-run regime t(k) = kξ ⊗ η.
//!
//! [`recurrence_oracle`] runs the defining recurrence step by step with no
//! structural shortcuts; tests use it as the arbiter for the closed forms.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Range;

use crate::graph::{normal_form, NormalForm};
use crate::real::RealMatrix;
use crate::spectral::{max_cycle_mean, max_power_raw, SpectralError};
use crate::tropical::{ShapeError, TropicalMatrix, TropicalScalar, TropicalVector};

#[derive(Clone, Debug, PartialEq)]
pub enum TrustError {
    Shape(ShapeError),
    Spectral(SpectralError),
    /// Trust inputs must be nonnegative.
    NegativeEntry { row: usize, col: usize },
    /// Power iteration did not meet the stop tolerance; `last` is the most
    /// recent iterate, usable as a degraded answer where one is required.
    NonConvergence { iterations: usize, delta: f64, last: Vec<f64> },
    /// An iterate collapsed to the zero vector.
    ZeroIterate { iterations: usize },
    /// These agents receive no endorsements, directly or transitively, so
    /// their trust decays to ε and has no growth rate.
    UnreachableAgents { agents: Vec<usize> },
    /// The starting vector must be finite in every entry.
    IrregularStart,
    Empty,
}

impl fmt::Display for TrustError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TrustError::Shape(e) => write!(f, "{e}"),
            TrustError::Spectral(e) => write!(f, "{e}"),
            TrustError::NegativeEntry { row, col } => {
                write!(f, "negative trust entry at ({row}, {col})")
            }
            TrustError::NonConvergence { iterations, delta, .. } => {
                write!(f, "no convergence after {iterations} iterations (residual {delta:e})")
            }
            TrustError::ZeroIterate { iterations } => {
                write!(f, "iterate collapsed to zero after {iterations} iterations")
            }
            TrustError::UnreachableAgents { agents } => {
                write!(f, "agents {agents:?} receive no endorsements; trust undefined")
            }
            TrustError::IrregularStart => {
                write!(f, "starting vector must be finite in every entry")
            }
            TrustError::Empty => write!(f, "empty network"),
        }
    }
}

impl core::error::Error for TrustError {}

impl From<ShapeError> for TrustError {
    fn from(e: ShapeError) -> TrustError {
        TrustError::Shape(e)
    }
}

impl From<SpectralError> for TrustError {
    fn from(e: SpectralError) -> TrustError {
        TrustError::Spectral(e)
    }
}

/// Accumulated integer satisfaction scores between agents, with the pairs
/// that have actually interacted marked as known.
#[derive(Clone, Debug)]
pub struct InteractionLedger {
    n: usize,
    scores: Vec<i64>,
    known: Vec<bool>,
}

impl InteractionLedger {
    pub fn new(n: usize) -> InteractionLedger {
        InteractionLedger { n, scores: vec![0; n * n], known: vec![false; n * n] }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Adds `delta` to i's score of j (satisfactory minus unsatisfactory
    /// interactions) and marks the pair as known.
    pub fn record(&mut self, i: usize, j: usize, delta: i64) {
        let idx = i * self.n + j;
        self.scores[idx] += delta;
        self.known[idx] = true;
    }

    pub fn set_score(&mut self, i: usize, j: usize, score: i64) {
        let idx = i * self.n + j;
        self.scores[idx] = score;
        self.known[idx] = true;
    }

    pub fn score(&self, i: usize, j: usize) -> Option<i64> {
        let idx = i * self.n + j;
        self.known[idx].then(|| self.scores[idx])
    }
}

/// A local trust matrix in both algebras, built from the same observations.
#[derive(Clone, Debug)]
pub struct TrustMatrix {
    /// Row-stochastic: entry (i, j) is i's normalized trust in j. Rows with
    /// no positive score fall back to uniform.
    pub conventional: RealMatrix,
    /// Max-plus image: positive normalized trust stays finite, absence of
    /// positive trust is ε.
    pub tropical: TropicalMatrix,
}

impl TrustMatrix {
    pub fn dim(&self) -> usize {
        self.conventional.rows()
    }

    /// Builds both matrices from broadcast opinion values: `None` means i
    /// reported nothing about j. Known values must be nonnegative and stay
    /// finite in the max-plus matrix even when zero; only missing reports
    /// become ε. Conventional rows are normalized by their known sum, with
    /// all-missing or all-zero rows falling back to uniform.
    pub fn from_broadcasts(values: &[Vec<Option<f64>>]) -> Result<TrustMatrix, TrustError> {
        let n = values.len();
        if n == 0 {
            return Err(TrustError::Empty);
        }
        for (i, row) in values.iter().enumerate() {
            if row.len() != n {
                return Err(TrustError::Shape(ShapeError {
                    op: "from_broadcasts",
                    lhs: (n, row.len()),
                    rhs: (n, n),
                }));
            }
            for (j, v) in row.iter().enumerate() {
                if let Some(x) = v {
                    assert!(x.is_finite(), "broadcast values must be finite");
                    if *x < 0.0 {
                        return Err(TrustError::NegativeEntry { row: i, col: j });
                    }
                }
            }
        }
        let mut conventional = RealMatrix::zeros(n, n);
        let mut tropical = TropicalMatrix::epsilon(n, n);
        for (i, row) in values.iter().enumerate() {
            let sum: f64 = row.iter().flatten().sum();
            for (j, v) in row.iter().enumerate() {
                if let Some(x) = v {
                    tropical.set(i, j, TropicalScalar::finite(*x));
                }
                let c = match v {
                    Some(x) if sum > 0.0 => x / sum,
                    _ => 0.0,
                };
                conventional.set(i, j, c);
            }
            if sum <= 0.0 {
                for j in 0..n {
                    conventional.set(i, j, 1.0 / n as f64);
                }
            }
        }
        Ok(TrustMatrix { conventional, tropical })
    }
}

/// Normalizes raw satisfaction scores into local trust: entry (i, j) is
/// max(s_ij, 0) divided by i's total positive score. Known pairs keep
/// their value in the max-plus matrix even at zero (distrust); unknown
/// pairs are ε (no information). Rows without any positive score become
/// uniform conventionally and all-ε tropically.
pub fn normalize_local_trust(ledger: &InteractionLedger) -> TrustMatrix {
    let n = ledger.len();
    let mut conventional = RealMatrix::zeros(n, n);
    let mut tropical = TropicalMatrix::epsilon(n, n);
    for i in 0..n {
        let clipped: Vec<f64> =
            (0..n).map(|j| ledger.score(i, j).map_or(0.0, |s| s.max(0) as f64)).collect();
        let sum: f64 = clipped.iter().sum();
        if sum > 0.0 {
            for (j, &c) in clipped.iter().enumerate() {
                let v = c / sum;
                conventional.set(i, j, v);
                if ledger.score(i, j).is_some() {
                    tropical.set(i, j, TropicalScalar::finite(v));
                }
            }
        } else {
            for j in 0..n {
                conventional.set(i, j, 1.0 / n as f64);
            }
        }
    }
    TrustMatrix { conventional, tropical }
}

/// Global trust values with a deterministic ranking. `None` marks agents
/// whose max-plus trust is ε (no endorsements reach them).
#[derive(Clone, Debug, PartialEq)]
pub struct TrustVector {
    pub values: Vec<Option<f64>>,
}

impl TrustVector {
    pub fn conventional(values: &[f64]) -> TrustVector {
        TrustVector { values: values.iter().map(|&v| Some(v)).collect() }
    }

    pub fn max_plus(values: &TropicalVector) -> TrustVector {
        TrustVector {
            values: values.iter().map(|v| v.is_finite().then(|| v.raw())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Agent ids ordered by decreasing trust; ties break towards the lower
    /// id and agents without a value sort last.
    pub fn ranking(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.values.len()).collect();
        ids.sort_unstable_by(|&a, &b| match (self.values[a], self.values[b]) {
            (Some(x), Some(y)) => y.partial_cmp(&x).expect("finite trust").then(a.cmp(&b)),
            (Some(_), None) => core::cmp::Ordering::Less,
            (None, Some(_)) => core::cmp::Ordering::Greater,
            (None, None) => a.cmp(&b),
        });
        ids
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EigentrustConfig {
    /// Stop once the 1-norm of the iterate update falls below this.
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for EigentrustConfig {
    fn default() -> EigentrustConfig {
        EigentrustConfig { epsilon: 1e-6, max_iterations: 10_000 }
    }
}

#[derive(Clone, Debug)]
pub struct EigentrustResult {
    /// Global trust, nonnegative with 1-norm 1.
    pub trust: Vec<f64>,
    pub iterations: usize,
    /// Final update norm, below the configured epsilon.
    pub delta: f64,
}

/// Conventional global trust: iterates t ← Cᵀ t with 1-norm renormalization
/// from `start` (uniform when `None`) until the update norm drops below the
/// configured epsilon.
pub fn eigentrust(
    c: &RealMatrix,
    start: Option<&[f64]>,
    cfg: &EigentrustConfig,
) -> Result<EigentrustResult, TrustError> {
    if !c.is_square() {
        return Err(TrustError::Shape(ShapeError {
            op: "eigentrust",
            lhs: (c.rows(), c.cols()),
            rhs: (c.cols(), c.cols()),
        }));
    }
    let n = c.rows();
    if n == 0 {
        return Err(TrustError::Empty);
    }
    for i in 0..n {
        for j in 0..n {
            if c.get(i, j) < 0.0 {
                return Err(TrustError::NegativeEntry { row: i, col: j });
            }
        }
    }
    let mut t: Vec<f64> = match start {
        Some(s) => {
            if s.len() != n {
                return Err(TrustError::Shape(ShapeError {
                    op: "eigentrust",
                    lhs: (s.len(), 1),
                    rhs: (n, 1),
                }));
            }
            let sum: f64 = s.iter().sum();
            if !(sum > 0.0) || s.iter().any(|&v| v < 0.0) {
                return Err(TrustError::IrregularStart);
            }
            s.iter().map(|&v| v / sum).collect()
        }
        None => vec![1.0 / n as f64; n],
    };
    let mut delta = f64::INFINITY;
    for k in 1..=cfg.max_iterations {
        let mut next = c.transpose_mat_vec(&t).expect("square by construction");
        let norm: f64 = next.iter().sum();
        if norm < 1e-300 {
            return Err(TrustError::ZeroIterate { iterations: k });
        }
        for v in &mut next {
            *v /= norm;
        }
        delta = next.iter().zip(t.iter()).map(|(a, b)| (a - b).abs()).sum();
        t = next;
        if delta < cfg.epsilon {
            return Ok(EigentrustResult { trust: t, iterations: k, delta });
        }
    }
    Err(TrustError::NonConvergence { iterations: cfg.max_iterations, delta, last: t })
}

/// Runs the defining max-plus recurrence t(k+1) = D ⊗ t(k) from t(0) = w
/// and returns all iterates t(0)..t(steps). No structure is exploited; this
/// is the ground truth the closed-form solver is measured against.
pub fn recurrence_oracle(
    d: &TropicalMatrix,
    w: &TropicalVector,
    steps: usize,
) -> Result<Vec<TropicalVector>, ShapeError> {
    if !d.is_square() || d.rows() != w.len() {
        return Err(ShapeError {
            op: "recurrence_oracle",
            lhs: (d.rows(), d.cols()),
            rhs: (w.len(), 1),
        });
    }
    let mut iterates = Vec::with_capacity(steps + 1);
    iterates.push(w.clone());
    for _ in 0..steps {
        iterates.push(d.mat_vec(iterates.last().expect("nonempty"))?);
    }
    Ok(iterates)
}

/// Per-block growth rates ξ of the recurrence t(k+1) = D′ ⊗ t(k) on a
/// matrix in block upper triangular form: each block grows at the largest
/// eigenvalue among its own and those of the blocks it draws from,
/// ξ_i = λ_i ⊕ ⊕_{j ∈ H_i} ξ_j with H_i the coupled later blocks.
///
/// Errors when some block ends up with ξ = ε: those agents receive no
/// endorsements from any cycle and their trust has no growth rate.
pub fn growth_rates(
    nf: &NormalForm,
    lambdas: &[TropicalScalar],
) -> Result<Vec<TropicalScalar>, TrustError> {
    let blocks = nf.blocks();
    assert_eq!(blocks.len(), lambdas.len(), "one eigenvalue per block");
    let m = blocks.len();
    let mut xis = vec![TropicalScalar::EPSILON; m];
    for i in (0..m).rev() {
        let mut xi = lambdas[i];
        for j in i + 1..m {
            if nf.permuted().block_is_coupled(blocks[i].clone(), blocks[j].clone()) {
                xi = xi.oplus(xis[j]);
            }
        }
        if xi.is_epsilon() {
            let mut agents: Vec<usize> =
                blocks[i].clone().map(|pos| nf.permutation()[pos]).collect();
            agents.sort_unstable();
            return Err(TrustError::UnreachableAgents { agents });
        }
        xis[i] = xi;
    }
    Ok(xis)
}

/// How [`maxtrust`] turns the block solutions into per-agent offsets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AssemblyMode {
    /// Exact long-run values: the recurrence is iterated until every entry
    /// provably tracks its structural growth rate over two consecutive
    /// periods, then offsets are anchored at a regime iterate whose phase
    /// matches the horizon. Cross-block transients (a fast block briefly
    /// boosted by a slower neighbour) are captured exactly this way.
    Asymptotic,
    /// One-shot combination of block eigenvectors with a single coupling
    /// application, optionally weighted by λ_j^⊗(block index). Kept for
    /// comparison; its offsets are not calibrated across blocks.
    OneStep { index_shift: bool },
}

#[derive(Clone, Copy, Debug)]
pub struct MaxTrustConfig {
    /// Step count T at which trust is reported: t = η ⊗ ξ^⊗T.
    pub horizon: usize,
    pub assembly: AssemblyMode,
}

impl Default for MaxTrustConfig {
    fn default() -> MaxTrustConfig {
        MaxTrustConfig { horizon: 100, assembly: AssemblyMode::Asymptotic }
    }
}

/// Where the iteration entered its periodic regime.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RegimeAnchor {
    /// First step from which every entry grows by exactly its ξ per period.
    pub entry: usize,
    /// Period of the regime.
    pub period: usize,
}

/// Solution of the max-plus trust recurrence, reported in the original
/// agent indexing. Per-agent values satisfy t_u = η_u ⊗ ξ_u^⊗T.
#[derive(Clone, Debug)]
pub struct MaxTrustSolution {
    /// Trust at the horizon.
    pub trust: TropicalVector,
    /// Per-agent growth rate ξ, always finite.
    pub growth: TropicalVector,
    /// Per-agent offset η, anchored so that η ⊗ ξ^⊗T equals the true
    /// iterate at the horizon (and at every later step congruent to it
    /// modulo the regime period).
    pub offsets: TropicalVector,
    pub horizon: usize,
    /// Block structure of Cᵀ: `permutation[new] = old` and `blocks` are
    /// ranges of the permuted indexing.
    pub permutation: Vec<usize>,
    pub blocks: Vec<Range<usize>>,
    pub block_eigenvalues: Vec<TropicalScalar>,
    pub block_growth: Vec<TropicalScalar>,
    /// Regime detection data; `None` under [`AssemblyMode::OneStep`] or
    /// when no periodic regime was confirmed before the horizon (the
    /// horizon values are exact iterates in that case).
    pub regime: Option<RegimeAnchor>,
}

impl MaxTrustSolution {
    pub fn trust_vector(&self) -> TrustVector {
        TrustVector::max_plus(&self.trust)
    }
}

/// Iterates t ← D′ ⊗ t from wp, watching for regime entry: t(p) − t(p − s)
/// equal to s·ξ entrywise (tolerance 1e-9) for two consecutive windows,
/// with ξ the structural per-entry growth rate. On detection, offsets are
/// anchored at the regime iterate sharing the horizon's phase and the tail
/// is extrapolated; otherwise iteration simply reaches the horizon and
/// anchors there. Either way the horizon values are exact iterates.
fn anchored_regime(
    dp: &TropicalMatrix,
    wp: &TropicalVector,
    xi: &[f64],
    horizon: usize,
) -> Result<(TropicalVector, TropicalVector, Option<RegimeAnchor>), TrustError> {
    let n = dp.rows();
    // Periods are block cyclicities and their small multiples; larger ones
    // fall through to the exact horizon anchor.
    let period_cap = n + 16;
    let window_ok = |later: &TropicalVector, earlier: &TropicalVector, s: usize| {
        (0..n).all(|e| {
            let (x, y) = (later.get(e), earlier.get(e));
            x.is_finite()
                && y.is_finite()
                && ((x.raw() - y.raw()) - s as f64 * xi[e]).abs() <= 1e-9
        })
    };

    let mut iterates = vec![wp.clone()];
    // Candidate (entry, period) awaiting confirmation at entry + 2·period.
    let mut pending: Option<RegimeAnchor> = None;
    let mut found: Option<RegimeAnchor> = None;
    loop {
        let p = iterates.len() - 1;
        if let Some(c) = pending {
            if p == c.entry + 2 * c.period {
                if window_ok(&iterates[p], &iterates[p - c.period], c.period) {
                    found = Some(c);
                    break;
                }
                pending = None;
            }
        }
        if pending.is_none() && p >= 1 && p <= horizon {
            for s in 1..=p.min(period_cap) {
                if window_ok(&iterates[p], &iterates[p - s], s) {
                    pending = Some(RegimeAnchor { entry: p - s, period: s });
                    break;
                }
            }
        }
        if pending.is_none() && p >= horizon {
            break;
        }
        iterates.push(dp.mat_vec(&iterates[p])?);
    }

    let anchor = match found {
        Some(r) if horizon > r.entry => r.entry + (horizon - r.entry) % r.period,
        _ => horizon,
    };
    let mut offsets = TropicalVector::epsilon(n);
    let mut trust = TropicalVector::epsilon(n);
    for e in 0..n {
        let at_anchor = iterates[anchor].get(e).raw();
        offsets.set(e, TropicalScalar::finite(at_anchor - anchor as f64 * xi[e]));
        trust.set(e, TropicalScalar::finite(at_anchor + (horizon - anchor) as f64 * xi[e]));
    }
    Ok((offsets, trust, found))
}

/// Max-plus global trust for an arbitrary trust matrix `c`, following the
/// recurrence t(k+1) = Cᵀ ⊗ t(k) from `w`.
///
/// Cᵀ is brought to block upper triangular form; every strongly connected
/// block gets its eigenvalue by power iteration, growth rates propagate
/// backwards along the couplings, and offsets are assembled per
/// [`AssemblyMode`]. `w` must be finite in every entry.
pub fn maxtrust(
    c: &TropicalMatrix,
    w: &TropicalVector,
    cfg: &MaxTrustConfig,
) -> Result<MaxTrustSolution, TrustError> {
    if !c.is_square() || c.rows() != w.len() {
        return Err(TrustError::Shape(ShapeError {
            op: "maxtrust",
            lhs: (c.rows(), c.cols()),
            rhs: (w.len(), 1),
        }));
    }
    let n = c.rows();
    if n == 0 {
        return Err(TrustError::Empty);
    }
    if !w.is_regular() {
        return Err(TrustError::IrregularStart);
    }

    let d = c.transpose();
    let nf = normal_form(&d)?;
    let dp = nf.permuted();
    let wp = nf.permute_vector(w);
    let blocks = nf.blocks().to_vec();
    let m = blocks.len();

    // Block eigenvalues by the walk recurrence: exact in one pass, immune
    // to the near-tied cycle means that stall periodicity detection.
    let mut lambdas = Vec::with_capacity(m);
    for r in &blocks {
        let sub = dp.submatrix(r.clone(), r.clone());
        lambdas.push(max_cycle_mean(&sub)?);
    }

    let xis = growth_rates(&nf, &lambdas)?;

    let (offsets_p, trust_p, regime) = match cfg.assembly {
        AssemblyMode::Asymptotic => {
            let mut xi_entry = vec![0.0; n];
            for (i, r) in blocks.iter().enumerate() {
                for u in r.clone() {
                    xi_entry[u] = xis[i].raw();
                }
            }
            anchored_regime(dp, &wp, &xi_entry, cfg.horizon)?
        }
        AssemblyMode::OneStep { index_shift } => {
            // Per-block offsets back to front, so later (drawn-from) blocks
            // are ready when their couplings are applied. Block eigenvectors
            // come from the periodic tail of the block-restricted
            // trajectory started at the matching segment of w.
            let mut etas: Vec<TropicalVector> = vec![TropicalVector::epsilon(0); m];
            for i in (0..m).rev() {
                let r = blocks[i].clone();
                let sub = dp.submatrix(r.clone(), r.clone());
                let mut v = if r.len() == 1 && sub.get(0, 0).is_epsilon() {
                    TropicalVector::epsilon(1)
                } else {
                    let seg = TropicalVector::from_entries(
                        r.map(|u| wp.get(u)).collect::<Vec<_>>(),
                    );
                    max_power_raw(&sub, &seg)?.vector
                };
                for j in i + 1..m {
                    if dp.block_is_coupled(blocks[i].clone(), blocks[j].clone()) {
                        let coupling = dp.submatrix(blocks[i].clone(), blocks[j].clone());
                        let mut contrib = coupling.mat_vec(&etas[j])?;
                        if index_shift {
                            contrib = contrib.otimes_scalar(lambdas[j].otimes_pow(j));
                        }
                        v = v.oplus(&contrib);
                    }
                }
                etas[i] = v;
            }
            let mut offsets = TropicalVector::epsilon(n);
            let mut trust = TropicalVector::epsilon(n);
            for (i, r) in blocks.iter().enumerate() {
                let scale = xis[i].otimes_pow(cfg.horizon);
                for (local, u) in r.clone().enumerate() {
                    let eta = etas[i].get(local);
                    offsets.set(u, eta);
                    trust.set(u, eta.otimes(scale));
                }
            }
            (offsets, trust, None)
        }
    };

    let mut growth_p = TropicalVector::epsilon(n);
    for (i, r) in blocks.iter().enumerate() {
        for u in r.clone() {
            growth_p.set(u, xis[i]);
        }
    }

    Ok(MaxTrustSolution {
        trust: nf.unpermute_vector(&trust_p),
        growth: nf.unpermute_vector(&growth_p),
        offsets: nf.unpermute_vector(&offsets_p),
        horizon: cfg.horizon,
        permutation: nf.permutation().to_vec(),
        blocks,
        block_eigenvalues: lambdas,
        block_growth: xis,
        regime,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tropical::TropicalMatrix;

    const NEG: f64 = f64::NEG_INFINITY;

    #[test]
    fn scores_normalize_to_a_stochastic_row() {
        let mut ledger = InteractionLedger::new(3);
        ledger.set_score(0, 0, 3);
        ledger.set_score(0, 1, -1);
        ledger.set_score(0, 2, 2);
        let tm = normalize_local_trust(&ledger);
        assert_eq!(tm.conventional.row(0), &[0.6, 0.0, 0.4]);
        assert_eq!(tm.tropical.get(0, 0).raw(), 0.6);
        // Known pair with a negative balance: distrust is a finite zero,
        // distinct from the ε of never having interacted.
        assert_eq!(tm.tropical.get(0, 1).raw(), 0.0);
        assert_eq!(tm.tropical.get(0, 2).raw(), 0.4);
        assert!(tm.tropical.get(1, 0).is_epsilon());
    }

    #[test]
    fn rows_without_positive_scores_fall_back_to_uniform() {
        let mut ledger = InteractionLedger::new(2);
        ledger.set_score(1, 0, -4);
        let tm = normalize_local_trust(&ledger);
        for i in 0..2 {
            assert_eq!(tm.conventional.row(i), &[0.5, 0.5]);
            assert!(tm.tropical.get(i, 0).is_epsilon());
            assert!(tm.tropical.get(i, 1).is_epsilon());
        }
    }

    #[test]
    fn broadcast_zeros_stay_finite_in_the_tropical_matrix() {
        let values = vec![
            vec![None, Some(0.0)],
            vec![Some(0.4), None],
        ];
        let tm = TrustMatrix::from_broadcasts(&values).unwrap();
        assert_eq!(tm.tropical.get(0, 1).raw(), 0.0);
        assert!(tm.tropical.get(0, 0).is_epsilon());
        // Known-zero row normalizes to uniform conventionally.
        assert_eq!(tm.conventional.row(0), &[0.5, 0.5]);
        assert_eq!(tm.conventional.row(1), &[1.0, 0.0]);
    }

    #[test]
    fn eigentrust_finds_the_stationary_direction() {
        let c = RealMatrix::from_rows(&[vec![0.6, 0.4], vec![0.2, 0.8]]);
        let cfg = EigentrustConfig { epsilon: 1e-12, max_iterations: 10_000 };
        let out = eigentrust(&c, None, &cfg).unwrap();
        assert!((out.trust[0] - 1.0 / 3.0).abs() < 1e-9);
        assert!((out.trust[1] - 2.0 / 3.0).abs() < 1e-9);
        assert!(out.delta < 1e-12);
    }

    #[test]
    fn eigentrust_reports_oscillation_with_the_last_iterate() {
        let c = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]);
        let start = [0.75, 0.25];
        let cfg = EigentrustConfig { epsilon: 1e-9, max_iterations: 64 };
        match eigentrust(&c, Some(&start), &cfg) {
            Err(TrustError::NonConvergence { iterations, delta, last }) => {
                assert_eq!(iterations, 64);
                assert!(delta > 0.9);
                assert_eq!(last.len(), 2);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn oracle_iterates_match_hand_computation() {
        let d = TropicalMatrix::from_rows(&[vec![NEG, 2.0], vec![1.0, NEG]]);
        let w = TropicalVector::finite(&[0.0, 0.0]);
        let ts = recurrence_oracle(&d, &w, 2).unwrap();
        assert_eq!(ts[1].get(0).raw(), 2.0);
        assert_eq!(ts[1].get(1).raw(), 1.0);
        assert_eq!(ts[2].get(0).raw(), 3.0);
        assert_eq!(ts[2].get(1).raw(), 3.0);
    }

    fn chain_matrix() -> TropicalMatrix {
        // Self-loops 0.1, 0.8, 1.0; agent 0 endorses 1, agent 1 endorses 2.
        TropicalMatrix::from_rows(&[
            vec![0.1, 0.7, NEG],
            vec![NEG, 0.8, 0.4],
            vec![NEG, NEG, 1.0],
        ])
    }

    #[test]
    fn chain_growth_follows_the_strongest_reachable_loop() {
        let sol =
            maxtrust(&chain_matrix(), &TropicalVector::finite(&[0.0; 3]), &Default::default())
                .unwrap();
        let xi: Vec<f64> = sol.growth.iter().map(|v| v.raw()).collect();
        assert!((xi[0] - 0.1).abs() < 1e-12);
        assert!((xi[1] - 0.8).abs() < 1e-12);
        assert!((xi[2] - 1.0).abs() < 1e-12);
        assert!((sol.trust.get(2).raw() - 100.0).abs() < 1e-9);
        assert!((sol.trust.get(1).raw() - 80.0).abs() < 1e-9);
        assert!((sol.trust.get(0).raw() - 10.0).abs() < 1e-9);
        assert_eq!(sol.trust_vector().ranking(), vec![2, 1, 0]);
        assert!(sol.regime.is_some());
    }

    #[test]
    fn inherited_rate_carries_the_transfer_offset() {
        // Agent 0 holds a 0.9 self-loop and endorses 1 at weight 0; agent 1
        // rides agent 0's growth one step behind.
        let c = TropicalMatrix::from_rows(&[vec![0.9, 0.0], vec![NEG, NEG]]);
        let w = TropicalVector::from_entries(vec![
            TropicalScalar::finite(0.5),
            TropicalScalar::finite(0.0),
        ]);
        let cfg = MaxTrustConfig { horizon: 10, assembly: AssemblyMode::Asymptotic };
        let sol = maxtrust(&c, &w, &cfg).unwrap();
        assert!((sol.growth.get(0).raw() - 0.9).abs() < 1e-12);
        assert!((sol.growth.get(1).raw() - 0.9).abs() < 1e-12);
        assert!((sol.offsets.get(0).raw() - 0.5).abs() < 1e-12);
        assert!((sol.offsets.get(1).raw() - (-0.4)).abs() < 1e-12);

        let oracle = recurrence_oracle(&c.transpose(), &w, 10).unwrap();
        for u in 0..2 {
            assert!((sol.trust.get(u).raw() - oracle[10].get(u).raw()).abs() < 1e-9);
        }
    }

    #[test]
    fn slow_input_transients_still_anchor_exactly() {
        // Agent 1 grows at 0.8 on its own; agent 0 endorses it with a large
        // head start (w_0 = 3) but only grows at 0.2, so the early input
        // dominates for a while and then hands over. The anchored offset
        // must reflect the boosted handover, not just agent 1's own start.
        let c = TropicalMatrix::from_rows(&[vec![0.2, 0.0], vec![NEG, 0.8]]);
        let w = TropicalVector::from_entries(vec![
            TropicalScalar::finite(3.0),
            TropicalScalar::finite(0.0),
        ]);
        let cfg = MaxTrustConfig { horizon: 40, assembly: AssemblyMode::Asymptotic };
        let sol = maxtrust(&c, &w, &cfg).unwrap();
        let oracle = recurrence_oracle(&c.transpose(), &w, 40).unwrap();
        for u in 0..2 {
            assert!(
                (sol.trust.get(u).raw() - oracle[40].get(u).raw()).abs() < 1e-9,
                "agent {u}: closed {} vs iterated {}",
                sol.trust.get(u).raw(),
                oracle[40].get(u).raw()
            );
        }
        // The boost shows up as an offset above agent 1's own seed.
        assert!(sol.offsets.get(1).raw() > 0.0);
    }

    #[test]
    fn agents_nobody_endorses_are_reported() {
        let c = TropicalMatrix::from_rows(&[vec![NEG, 0.0], vec![NEG, NEG]]);
        let err = maxtrust(&c, &TropicalVector::finite(&[0.0, 0.0]), &Default::default())
            .unwrap_err();
        assert_eq!(err, TrustError::UnreachableAgents { agents: vec![0] });
    }

    #[test]
    fn one_step_assembly_keeps_the_growth_rates() {
        let cfg = MaxTrustConfig {
            horizon: 100,
            assembly: AssemblyMode::OneStep { index_shift: true },
        };
        let sol = maxtrust(&chain_matrix(), &TropicalVector::finite(&[0.0; 3]), &cfg).unwrap();
        let xi: Vec<f64> = sol.growth.iter().map(|v| v.raw()).collect();
        assert!((xi[0] - 0.1).abs() < 1e-12);
        assert!((xi[1] - 0.8).abs() < 1e-12);
        assert!((xi[2] - 1.0).abs() < 1e-12);
        assert!(sol.regime.is_none());
    }

    #[test]
    fn ranking_puts_unreachable_agents_last_and_breaks_ties_by_id() {
        let tv = TrustVector { values: vec![Some(0.5), None, Some(0.7), Some(0.5)] };
        assert_eq!(tv.ranking(), vec![2, 0, 3, 1]);
    }
}
