//! Router-network simulation comparing the two trust algorithms.
//!
//! A world is a set of routers on a tree, torus or random topology. Honest
//! routers broadcast their direct trust; malicious ones broadcast a flat
//! zero or a value decaying from 0.5. Each timestep runs a fixed number of
//! interaction rounds in which every router nudges its trust in its most
//! trusted neighbour up or down by a small delta depending on that
//! neighbour's honesty, then both global trust algorithms score the whole
//! network from the broadcast matrix. A run's quality samples are the
//! per-timestep Euclidean distances between each algorithm's probability
//! vector and the dominant eigenvector of the end-of-run matrix.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use maxtrust_core::spectral::{
    dominant_eigenpair_conventional, PowerIterationConfig, SpectralError,
};
use maxtrust_core::tropical::{TropicalMatrix, TropicalVector};
use maxtrust_core::trust::{
    eigentrust, maxtrust, EigentrustConfig, MaxTrustConfig, TrustError, TrustMatrix, TrustVector,
};
use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Topology {
    Tree,
    Torus,
    Random,
}

impl Topology {
    pub const ALL: [Topology; 3] = [Topology::Tree, Topology::Torus, Topology::Random];

    pub fn label(self) -> &'static str {
        match self {
            Topology::Tree => "tree",
            Topology::Torus => "torus",
            Topology::Random => "random",
        }
    }
}

impl FromStr for Topology {
    type Err = String;

    fn from_str(s: &str) -> Result<Topology, String> {
        match s {
            "tree" => Ok(Topology::Tree),
            "torus" => Ok(Topology::Torus),
            "random" => Ok(Topology::Random),
            other => Err(format!("unknown topology '{other}', expected tree, torus or random")),
        }
    }
}

/// The three evaluation scenarios: a static network, growth with half of
/// each new batch malicious, and growth with each newcomer independently
/// malicious with probability 1/3. Initial routers are always honest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Scenario {
    Static,
    GrowthHalfMalicious,
    GrowthThirdMalicious,
}

impl Scenario {
    pub const ALL: [Scenario; 3] =
        [Scenario::Static, Scenario::GrowthHalfMalicious, Scenario::GrowthThirdMalicious];

    pub fn number(self) -> u8 {
        match self {
            Scenario::Static => 1,
            Scenario::GrowthHalfMalicious => 2,
            Scenario::GrowthThirdMalicious => 3,
        }
    }

    pub fn grows(self) -> bool {
        self != Scenario::Static
    }
}

impl FromStr for Scenario {
    type Err = String;

    fn from_str(s: &str) -> Result<Scenario, String> {
        match s {
            "1" => Ok(Scenario::Static),
            "2" => Ok(Scenario::GrowthHalfMalicious),
            "3" => Ok(Scenario::GrowthThirdMalicious),
            other => Err(format!("unknown scenario '{other}', expected 1, 2 or 3")),
        }
    }
}

/// Protocol constants; defaults are the evaluation protocol.
#[derive(Clone, Copy, Debug)]
pub struct SimConfig {
    pub steps: usize,
    pub interactions_per_step: usize,
    /// Trust nudge per interaction, sign by partner honesty.
    pub trust_delta: f64,
    /// Chance that an increase is miscategorised into a decrease.
    pub miscategorisation: f64,
    /// Growing scenarios add routers before every `growth_interval`-th step.
    pub growth_interval: usize,
    pub growth_min: usize,
    pub growth_max: usize,
    /// Decay-mode malicious routers broadcast 0.5 * decay_factor^k after k
    /// interactions.
    pub decay_factor: f64,
    /// Chance that a new malicious router lies with a flat zero rather
    /// than the decaying value.
    pub zero_mode_probability: f64,
    pub eigentrust_epsilon: f64,
    /// Oscillating power iterations stop here and keep the last iterate.
    pub eigentrust_max_iterations: usize,
    /// Step count at which max-plus trust is reported.
    pub horizon: usize,
}

impl Default for SimConfig {
    fn default() -> SimConfig {
        SimConfig {
            steps: 100,
            interactions_per_step: 10,
            trust_delta: 0.0001,
            miscategorisation: 0.0025,
            growth_interval: 5,
            growth_min: 2,
            growth_max: 6,
            decay_factor: 0.99,
            zero_mode_probability: 0.5,
            eigentrust_epsilon: 1e-6,
            eigentrust_max_iterations: 250,
            horizon: 100,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MaliciousMode {
    AlwaysZero,
    Decay,
}

#[derive(Clone, Debug)]
pub struct Router {
    pub malicious: Option<MaliciousMode>,
    /// Direct trust toward known partners, in [0, 1]. Absence means no
    /// information, which is weaker than an explicit zero.
    trust: BTreeMap<usize, f64>,
    /// Interactions participated in; drives the decay broadcast.
    interactions: u64,
}

impl Router {
    fn new(malicious: Option<MaliciousMode>) -> Router {
        Router { malicious, trust: BTreeMap::new(), interactions: 0 }
    }

    pub fn direct_trust(&self, partner: usize) -> Option<f64> {
        self.trust.get(&partner).copied()
    }
}

#[derive(Clone, Debug)]
pub struct World {
    pub topology: Topology,
    pub scenario: Scenario,
    routers: Vec<Router>,
    /// Sorted neighbour lists; symmetric.
    adjacency: Vec<Vec<usize>>,
}

/// Complete binary tree filled in level order: node v hangs under
/// (v - 1) / 2.
fn tree_adjacency(n: usize) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for v in 1..n {
        let p = (v - 1) / 2;
        adj[v].push(p);
        adj[p].push(v);
    }
    for l in &mut adj {
        l.sort_unstable();
    }
    adj
}

/// Most-square grid factorization with both sides at least 2.
fn torus_dims(n: usize) -> Option<(usize, usize)> {
    let mut best = None;
    let mut a = 2;
    while a * a <= n {
        if n % a == 0 {
            best = Some((a, n / a));
        }
        a += 1;
    }
    best
}

/// Wraparound grid adjacency; duplicate links from dimensions of size 2
/// collapse to simple edges.
fn torus_adjacency(n: usize) -> Vec<Vec<usize>> {
    let (rows, cols) = torus_dims(n).expect("torus size must factor");
    let at = |r: usize, c: usize| r * cols + c;
    let mut adj = vec![Vec::new(); n];
    for r in 0..rows {
        for c in 0..cols {
            let v = at(r, c);
            let mut nb = vec![
                at((r + 1) % rows, c),
                at((r + rows - 1) % rows, c),
                at(r, (c + 1) % cols),
                at(r, (c + cols - 1) % cols),
            ];
            nb.sort_unstable();
            nb.dedup();
            nb.retain(|&u| u != v);
            adj[v] = nb;
        }
    }
    adj
}

fn add_edge(adjacency: &mut [Vec<usize>], a: usize, b: usize) {
    if !adjacency[a].contains(&b) {
        adjacency[a].push(b);
        adjacency[a].sort_unstable();
        adjacency[b].push(a);
        adjacency[b].sort_unstable();
    }
}

#[derive(Clone, Debug)]
pub enum SimError {
    Trust(TrustError),
    Spectral(SpectralError),
}

impl fmt::Display for SimError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SimError::Trust(e) => write!(f, "trust computation failed: {e}"),
            SimError::Spectral(e) => write!(f, "reference eigenvector failed: {e}"),
        }
    }
}

impl std::error::Error for SimError {}

impl From<TrustError> for SimError {
    fn from(e: TrustError) -> SimError {
        SimError::Trust(e)
    }
}

impl From<SpectralError> for SimError {
    fn from(e: SpectralError) -> SimError {
        SimError::Spectral(e)
    }
}

impl World {
    /// Fresh 4-router world; initial routers are honest and impute a
    /// uniform random trust level to each neighbour.
    pub fn new(
        topology: Topology,
        scenario: Scenario,
        rng: &mut impl Rng,
    ) -> World {
        let n = 4;
        let adjacency = match topology {
            Topology::Tree => tree_adjacency(n),
            Topology::Torus => torus_adjacency(n),
            Topology::Random => {
                let mut pairs = Vec::new();
                for a in 0..n {
                    for b in a + 1..n {
                        pairs.push((a, b));
                    }
                }
                pairs.shuffle(rng);
                let mut adj = vec![Vec::new(); n];
                for &(a, b) in pairs.iter().take(4) {
                    add_edge(&mut adj, a, b);
                }
                adj
            }
        };
        let mut world =
            World { topology, scenario, routers: (0..n).map(|_| Router::new(None)).collect(), adjacency };
        for r in 0..n {
            world.impute_neighbours(r, rng);
        }
        world
    }

    pub fn len(&self) -> usize {
        self.routers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.routers.is_empty()
    }

    pub fn router(&self, id: usize) -> &Router {
        &self.routers[id]
    }

    pub fn neighbours(&self, id: usize) -> &[usize] {
        &self.adjacency[id]
    }

    /// Directed link count (each undirected edge counts twice).
    pub fn directed_links(&self) -> usize {
        self.adjacency.iter().map(|l| l.len()).sum()
    }

    fn impute_neighbours(&mut self, id: usize, rng: &mut impl Rng) {
        for n in self.adjacency[id].clone() {
            let level = rng.gen::<f64>();
            self.routers[id].trust.insert(n, level);
        }
    }

    /// Adds a batch of routers preserving the topology. Batch size is
    /// uniform in growth_min..=growth_max; a torus batch is topped up
    /// until the total factors into a grid. Maliciousness per scenario:
    /// half the batch (rounded down) or independently with chance 1/3.
    pub fn grow(&mut self, cfg: &SimConfig, rng: &mut impl Rng) {
        assert!(self.scenario.grows(), "static scenario never grows");
        let old = self.routers.len();
        let mut batch = rng.gen_range(cfg.growth_min..=cfg.growth_max);
        if self.topology == Topology::Torus {
            while torus_dims(old + batch).is_none() {
                batch += 1;
            }
        }
        let total = old + batch;

        let mut malicious = vec![false; batch];
        match self.scenario {
            Scenario::Static => unreachable!(),
            Scenario::GrowthHalfMalicious => {
                let mut idx: Vec<usize> = (0..batch).collect();
                idx.shuffle(rng);
                for &i in idx.iter().take(batch / 2) {
                    malicious[i] = true;
                }
            }
            Scenario::GrowthThirdMalicious => {
                for m in &mut malicious {
                    *m = rng.gen_bool(1.0 / 3.0);
                }
            }
        }
        for &m in &malicious {
            let mode = if m {
                if rng.gen_bool(cfg.zero_mode_probability) {
                    Some(MaliciousMode::AlwaysZero)
                } else {
                    Some(MaliciousMode::Decay)
                }
            } else {
                None
            };
            self.routers.push(Router::new(mode));
        }

        match self.topology {
            Topology::Tree => {
                self.adjacency = tree_adjacency(total);
            }
            Topology::Torus => {
                self.adjacency = torus_adjacency(total);
            }
            Topology::Random => {
                self.adjacency.resize(total, Vec::new());
                for v in old..total {
                    // Two links to distinct existing routers.
                    let a = rng.gen_range(0..v);
                    let mut b = rng.gen_range(0..v - 1);
                    if b >= a {
                        b += 1;
                    }
                    add_edge(&mut self.adjacency, v, a);
                    add_edge(&mut self.adjacency, v, b);
                }
            }
        }

        // Only the newcomers impute trust; incumbents stay ignorant of new
        // neighbours until the newcomers' broadcasts carry information.
        for v in old..total {
            self.impute_neighbours(v, rng);
        }
    }

    /// The current neighbour with the highest direct trust; ties break to
    /// the lowest id, routers with no known neighbour skip their turn.
    pub fn most_trusted_neighbour(&self, id: usize) -> Option<usize> {
        let mut best: Option<(usize, f64)> = None;
        for &n in &self.adjacency[id] {
            if let Some(v) = self.routers[id].trust.get(&n) {
                if best.map_or(true, |(_, bv)| *v > bv) {
                    best = Some((n, *v));
                }
            }
        }
        best.map(|(n, _)| n)
    }

    /// One timestep: every router, in id order, interacts with its most
    /// trusted neighbour once per round. Trust moves up for an honest
    /// partner and down for a malicious one, with a small chance that an
    /// increase is miscategorised; values clamp to [0, 1].
    pub fn step(&mut self, cfg: &SimConfig, rng: &mut impl Rng) {
        for _ in 0..cfg.interactions_per_step {
            for r in 0..self.routers.len() {
                let Some(p) = self.most_trusted_neighbour(r) else { continue };
                let mut up = self.routers[p].malicious.is_none();
                if up && rng.gen_bool(cfg.miscategorisation) {
                    up = false;
                }
                let delta = if up { cfg.trust_delta } else { -cfg.trust_delta };
                let entry = self.routers[r].trust.get_mut(&p).expect("partner is known");
                *entry = (*entry + delta).clamp(0.0, 1.0);
                self.routers[r].interactions += 1;
                self.routers[p].interactions += 1;
            }
        }
    }

    /// Broadcast opinion grid: honest routers report their direct trust,
    /// malicious ones report the lie over the same known set. `None` is no
    /// information.
    pub fn broadcasts(&self, cfg: &SimConfig) -> Vec<Vec<Option<f64>>> {
        let n = self.routers.len();
        let mut grid = vec![vec![None; n]; n];
        for (i, r) in self.routers.iter().enumerate() {
            let lie = match r.malicious {
                None => None,
                Some(MaliciousMode::AlwaysZero) => Some(0.0),
                Some(MaliciousMode::Decay) => {
                    Some(0.5 * cfg.decay_factor.powf(r.interactions as f64))
                }
            };
            for (&j, &true_value) in &r.trust {
                grid[i][j] = Some(lie.unwrap_or(true_value));
            }
        }
        grid
    }

    /// Checks the structural topology invariants; used by tests and after
    /// growth in debug builds.
    pub fn topology_is_valid(&self) -> bool {
        let n = self.routers.len();
        let symmetric = (0..n).all(|v| {
            self.adjacency[v].iter().all(|&u| {
                u != v && u < n && self.adjacency[u].contains(&v)
            })
        });
        let sorted_simple = (0..n).all(|v| {
            self.adjacency[v].windows(2).all(|w| w[0] < w[1])
        });
        let shape = match self.topology {
            Topology::Tree => self.adjacency == tree_adjacency(n),
            Topology::Torus => self.adjacency == torus_adjacency(n),
            Topology::Random => true,
        };
        symmetric && sorted_simple && shape
    }
}

/// Per-run outcome: one distance sample per timestep per algorithm, plus
/// the end-of-run matrix for replay and inspection.
#[derive(Clone, Debug)]
pub struct RunRecord {
    pub eigentrust_distances: Vec<f64>,
    pub maxtrust_distances: Vec<f64>,
    pub final_matrix: TrustMatrix,
    /// RNG stream of this run under the experiment's master seed.
    pub stream: u64,
}

/// Agents whose column stays all-ε even transitively receive no trust and
/// are dropped before the max-plus computation; `keep` marks survivors.
fn transitively_endorsed(c: &TropicalMatrix) -> Vec<bool> {
    let n = c.rows();
    let mut keep = vec![true; n];
    loop {
        let mut changed = false;
        for j in 0..n {
            if keep[j] && !(0..n).any(|i| keep[i] && !c.get(i, j).is_epsilon()) {
                keep[j] = false;
                changed = true;
            }
        }
        if !changed {
            return keep;
        }
    }
}

/// Max-plus global trust over the endorsed sub-network, padded back with
/// `None` for dropped agents. The score is the algorithm's output: the
/// trust vector at the configured horizon.
pub fn max_plus_scores(
    tropical: &TropicalMatrix,
    cfg: &MaxTrustConfig,
) -> Result<TrustVector, TrustError> {
    let n = tropical.rows();
    let keep = transitively_endorsed(tropical);
    let kept: Vec<usize> = (0..n).filter(|&u| keep[u]).collect();
    if kept.is_empty() {
        return Ok(TrustVector { values: vec![None; n] });
    }
    let sub = TropicalMatrix::from_fn(kept.len(), kept.len(), |i, j| {
        tropical.get(kept[i], kept[j])
    });
    let w = TropicalVector::finite(&vec![0.0; kept.len()]);
    let sol = maxtrust(&sub, &w, cfg)?;
    let mut values = vec![None; n];
    for (local, &u) in kept.iter().enumerate() {
        values[u] = sol.trust_vector().values[local];
    }
    Ok(TrustVector { values })
}

/// Probability vector of length `n`: exponential of the finite values
/// after subtracting their maximum, zero for `None`, then 1-norm
/// normalization. Shift invariant, so the ⊗-scaling freedom of max-plus
/// eigenvectors does not move the result.
pub fn to_probability(values: &[Option<f64>], n: usize) -> Vec<f64> {
    let mut out = vec![0.0; n];
    let max = values.iter().flatten().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    if !max.is_finite() {
        return out;
    }
    for (i, v) in values.iter().enumerate() {
        if let Some(x) = v {
            out[i] = (x - max).exp();
        }
    }
    let sum: f64 = out.iter().sum();
    for v in &mut out {
        *v /= sum;
    }
    out
}

pub fn euclidean_distance(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "padded vectors must align");
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt()
}

/// Reference direction: damped power iteration on the end-of-run matrix.
/// Damping sidesteps the oscillation of bipartite-ish networks that plain
/// iteration cannot rank at all.
fn reference_vector(m: &maxtrust_core::real::RealMatrix) -> Result<Vec<f64>, SpectralError> {
    let cfg = PowerIterationConfig {
        tolerance: 1e-10,
        max_iterations: 50_000,
        damping: 0.5,
        verify_start_independence: false,
    };
    Ok(dominant_eigenpair_conventional(m, &cfg)?.vector)
}

/// One full simulation run. The world trajectory is
/// algorithm-independent, so both algorithms are scored on the same
/// broadcasts; distances are measured against the end-of-run reference.
pub fn run_simulation(
    topology: Topology,
    scenario: Scenario,
    cfg: &SimConfig,
    rng: &mut impl Rng,
    stream: u64,
) -> Result<RunRecord, SimError> {
    let mut world = World::new(topology, scenario, rng);
    let et_cfg = EigentrustConfig {
        epsilon: cfg.eigentrust_epsilon,
        max_iterations: cfg.eigentrust_max_iterations,
    };
    let mt_cfg = MaxTrustConfig { horizon: cfg.horizon, ..Default::default() };

    let mut et_vectors: Vec<Vec<f64>> = Vec::with_capacity(cfg.steps);
    let mut mt_vectors: Vec<Vec<Option<f64>>> = Vec::with_capacity(cfg.steps);
    let mut last_matrix: Option<TrustMatrix> = None;
    for t in 1..=cfg.steps {
        if scenario.grows() && t > 1 && (t - 1) % cfg.growth_interval == 0 {
            world.grow(cfg, rng);
            debug_assert!(world.topology_is_valid());
        }
        world.step(cfg, rng);
        let tm = TrustMatrix::from_broadcasts(&world.broadcasts(cfg))?;

        // A fresh random start each timestep, as the algorithm admits an
        // arbitrary initial vector. On periodic support the iteration then
        // keeps an oscillating component whose size depends on the start,
        // which is the convergence weakness under study.
        let mut start: Vec<f64> = (0..world.len()).map(|_| rng.gen::<f64>()).collect();
        let total: f64 = start.iter().sum();
        for s in &mut start {
            *s /= total;
        }
        let et = match eigentrust(&tm.conventional, Some(&start), &et_cfg) {
            Ok(r) => r.trust,
            // Oscillation is expected on weakly connected worlds; the last
            // iterate is the algorithm's answer there.
            Err(TrustError::NonConvergence { last, .. }) => last,
            Err(e) => return Err(e.into()),
        };
        et_vectors.push(et);
        mt_vectors.push(max_plus_scores(&tm.tropical, &mt_cfg)?.values);
        last_matrix = Some(tm);
    }

    let final_matrix = last_matrix.expect("at least one step");
    let reference = reference_vector(&final_matrix.conventional)?;
    let n = reference.len();

    let eigentrust_distances = et_vectors
        .iter()
        .map(|v| {
            let mut padded = v.clone();
            padded.resize(n, 0.0);
            euclidean_distance(&padded, &reference)
        })
        .collect();
    let maxtrust_distances = mt_vectors
        .iter()
        .map(|v| {
            let mut padded = v.clone();
            padded.resize(n, None);
            euclidean_distance(&to_probability(&padded, n), &reference)
        })
        .collect();

    Ok(RunRecord { eigentrust_distances, maxtrust_distances, final_matrix, stream })
}
