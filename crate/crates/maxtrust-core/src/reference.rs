//! Brute-force reference implementations and deterministic test instance
//! generators.
//!
//! Everything here trades speed for obviousness and stays independent of the
//! production code paths: cycles are enumerated one by one, reducibility is
//! decided by trying every permutation, components come from pairwise
//! reachability, and stationary vectors from Gaussian elimination. The test
//! suites compare the fast implementations against these.

use alloc::vec;
use alloc::vec::Vec;

use crate::graph::PrecedenceGraph;
use crate::real::RealMatrix;
use crate::tropical::{TropicalMatrix, TropicalScalar};

/// SplitMix64: tiny deterministic generator for test instances.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Uniform in [lo, hi).
    pub fn range_f64(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform in 0..bound (bound > 0).
    pub fn below(&mut self, bound: usize) -> usize {
        ((self.next_u64() as u128 * bound as u128) >> 64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }

    /// Fisher-Yates shuffle.
    pub fn shuffle<T>(&mut self, xs: &mut [T]) {
        for i in (1..xs.len()).rev() {
            let j = self.below(i + 1);
            xs.swap(i, j);
        }
    }
}

/// Maximum cycle mean over all elementary cycles, by direct enumeration.
/// Returns `None` for an acyclic support. Exponential in n; intended for
/// n up to about 8.
pub fn max_mean_cycle_brute(a: &TropicalMatrix) -> Option<f64> {
    assert!(a.is_square(), "cycle means need a square matrix");
    let n = a.rows();
    let mut best: Option<f64> = None;
    let mut on_path = vec![false; n];
    for start in 0..n {
        on_path[start] = true;
        explore_cycles(a, start, start, 0.0, 1, &mut on_path, &mut best);
        on_path[start] = false;
    }
    best
}

fn explore_cycles(
    a: &TropicalMatrix,
    start: usize,
    v: usize,
    weight: f64,
    len: usize,
    on_path: &mut [bool],
    best: &mut Option<f64>,
) {
    let n = a.rows();
    for w in 0..n {
        let arc = a.get(v, w);
        if !arc.is_finite() {
            continue;
        }
        if w == start {
            let mean = (weight + arc.raw()) / len as f64;
            *best = Some(best.map_or(mean, |b| b.max(mean)));
        } else if w > start && !on_path[w] {
            // Restricting to vertices above `start` visits each elementary
            // cycle exactly once, from its smallest vertex.
            on_path[w] = true;
            explore_cycles(a, start, w, weight + arc.raw(), len + 1, on_path, best);
            on_path[w] = false;
        }
    }
}

/// All permutations of 0..n in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut chosen = Vec::with_capacity(n);
    build_permutations(n, &mut chosen, &mut used, &mut current, &mut out);
    out
}

fn build_permutations(
    n: usize,
    chosen: &mut Vec<usize>,
    used: &mut [bool],
    scratch: &mut [usize],
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == n {
        out.push(chosen.clone());
        return;
    }
    for v in 0..n {
        if !used[v] {
            used[v] = true;
            chosen.push(v);
            build_permutations(n, chosen, used, scratch, out);
            chosen.pop();
            used[v] = false;
        }
    }
}

/// Reducibility by definition: a matrix is reducible when some symmetric
/// permutation puts it in block upper triangular form with two nonempty
/// diagonal blocks. For n = 1 the convention matches the production check:
/// a lone vertex is irreducible exactly when it carries a self-loop.
pub fn is_irreducible_by_permutations(a: &TropicalMatrix) -> bool {
    assert!(a.is_square());
    let n = a.rows();
    if n == 0 {
        return false;
    }
    if n == 1 {
        return a.get(0, 0).is_finite();
    }
    for perm in permutations(n) {
        for split in 1..n {
            // Lower-left block of P A P^T: rows split.., cols ..split.
            let mut all_eps = true;
            'scan: for i in split..n {
                for j in 0..split {
                    if a.get(perm[i], perm[j]).is_finite() {
                        all_eps = false;
                        break 'scan;
                    }
                }
            }
            if all_eps {
                return false;
            }
        }
    }
    true
}

/// Strongly connected components as mutual-reachability classes, computed
/// by per-vertex DFS. Canonical order: each class sorted, classes sorted by
/// smallest member.
pub fn scc_by_reachability(g: &PrecedenceGraph) -> Vec<Vec<usize>> {
    let n = g.len();
    let mut reach = vec![vec![false; n]; n];
    for s in 0..n {
        let mut stack = vec![s];
        reach[s][s] = true;
        while let Some(v) = stack.pop() {
            for &w in g.neighbors(v) {
                if !reach[s][w] {
                    reach[s][w] = true;
                    stack.push(w);
                }
            }
        }
    }
    let mut assigned = vec![false; n];
    let mut classes = Vec::new();
    for i in 0..n {
        if assigned[i] {
            continue;
        }
        let mut class = Vec::new();
        for j in i..n {
            if !assigned[j] && reach[i][j] && reach[j][i] {
                assigned[j] = true;
                class.push(j);
            }
        }
        classes.push(class);
    }
    classes
}

/// Solves pi C = pi with sum(pi) = 1 by Gaussian elimination with partial
/// pivoting. `None` when the system is singular beyond the normalization.
pub fn stationary_by_linear_solve(c: &RealMatrix) -> Option<Vec<f64>> {
    assert!(c.is_square());
    let n = c.rows();
    if n == 0 {
        return None;
    }
    // Rows 0..n-1: (C^T - I) pi = 0; last row replaced by sum(pi) = 1.
    let mut m = vec![vec![0.0f64; n + 1]; n];
    for i in 0..n.saturating_sub(1) {
        for j in 0..n {
            m[i][j] = c.get(j, i) - if i == j { 1.0 } else { 0.0 };
        }
    }
    for j in 0..n {
        m[n - 1][j] = 1.0;
    }
    m[n - 1][n] = 1.0;

    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&a, &b| m[a][col].abs().partial_cmp(&m[b][col].abs()).expect("finite"))
            .expect("nonempty");
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..n {
            if row != col {
                let factor = m[row][col] / m[col][col];
                for k in col..=n {
                    let sub = factor * m[col][k];
                    m[row][k] -= sub;
                }
            }
        }
    }
    Some((0..n).map(|i| m[i][n] / m[i][i]).collect())
}

/// Random strongly connected max-plus matrix: a Hamiltonian cycle through a
/// shuffled vertex order plus density-controlled extra arcs, weights uniform
/// in [lo, hi). The cycle guarantees irreducibility by construction.
pub fn random_irreducible_tropical(
    rng: &mut SplitMix64,
    n: usize,
    lo: f64,
    hi: f64,
    density: f64,
) -> TropicalMatrix {
    assert!(n >= 1);
    let mut a = TropicalMatrix::epsilon(n, n);
    let mut order: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut order);
    for i in 0..n {
        let from = order[i];
        let to = order[(i + 1) % n];
        a.set(from, to, TropicalScalar::finite(rng.range_f64(lo, hi)));
    }
    for i in 0..n {
        for j in 0..n {
            if a.get(i, j).is_epsilon() && rng.chance(density) {
                a.set(i, j, TropicalScalar::finite(rng.range_f64(lo, hi)));
            }
        }
    }
    a
}

/// Random reducible max-plus matrix with known component structure: every
/// block is strongly connected, couplings only run forward along a hidden
/// block order, and a random symmetric permutation scrambles the result.
pub fn random_reducible_tropical(
    rng: &mut SplitMix64,
    block_sizes: &[usize],
    lo: f64,
    hi: f64,
    coupling_density: f64,
) -> TropicalMatrix {
    let n: usize = block_sizes.iter().sum();
    assert!(n >= 1);
    let mut a = TropicalMatrix::epsilon(n, n);
    let mut starts = Vec::with_capacity(block_sizes.len());
    let mut acc = 0;
    for &s in block_sizes {
        starts.push(acc);
        acc += s;
    }
    for (b, &size) in block_sizes.iter().enumerate() {
        let s0 = starts[b];
        // Strongly connected block: cycle through its vertices. Size 1 gets
        // a self-loop only sometimes, so 1x1 ε blocks occur too.
        if size == 1 {
            if rng.chance(0.6) {
                a.set(s0, s0, TropicalScalar::finite(rng.range_f64(lo, hi)));
            }
        } else {
            for k in 0..size {
                a.set(s0 + k, s0 + (k + 1) % size, TropicalScalar::finite(rng.range_f64(lo, hi)));
            }
            for i in 0..size {
                for j in 0..size {
                    if i != j && a.get(s0 + i, s0 + j).is_epsilon() && rng.chance(0.3) {
                        a.set(s0 + i, s0 + j, TropicalScalar::finite(rng.range_f64(lo, hi)));
                    }
                }
            }
        }
        // Forward couplings into later blocks.
        for later in b + 1..block_sizes.len() {
            for i in 0..size {
                for j in 0..block_sizes[later] {
                    if rng.chance(coupling_density) {
                        a.set(
                            s0 + i,
                            starts[later] + j,
                            TropicalScalar::finite(rng.range_f64(lo, hi)),
                        );
                    }
                }
            }
        }
    }
    // Hide the construction order behind a random relabeling.
    let mut relabel: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut relabel);
    TropicalMatrix::from_fn(n, n, |i, j| a.get(relabel[i], relabel[j]))
}

/// Random layered trust matrix tuned for checking the reducible solver
/// against plain iteration: 2 to 4 hidden blocks (at most 10 agents), each
/// strongly connected with exactly one dominant anchor self-loop. Anchors
/// are drawn without replacement from values at least 0.15 apart and all
/// other weights stay in [0, 0.3), so every block has a unique critical
/// loop (tail period 1), block eigenvalues are well separated, and
/// trajectories settle within a few dozen steps.
pub fn random_anchored_trust(rng: &mut SplitMix64) -> TropicalMatrix {
    let m = 2 + rng.below(3);
    let mut sizes: Vec<usize> = (0..m).map(|_| 1 + rng.below(3)).collect();
    while sizes.iter().sum::<usize>() > 10 {
        let b = rng.below(m);
        if sizes[b] > 1 {
            sizes[b] -= 1;
        }
    }
    let n: usize = sizes.iter().sum();
    let mut starts = Vec::with_capacity(m);
    let mut acc = 0;
    for &s in &sizes {
        starts.push(acc);
        acc += s;
    }
    let mut anchors = [0.5, 0.65, 0.8, 0.95];
    rng.shuffle(&mut anchors);

    let mut a = TropicalMatrix::epsilon(n, n);
    let small = |rng: &mut SplitMix64| TropicalScalar::finite(rng.range_f64(0.0, 0.3));
    for b in 0..m {
        let s0 = starts[b];
        let size = sizes[b];
        for k in 0..size {
            if size > 1 {
                a.set(s0 + k, s0 + (k + 1) % size, small(rng));
            }
        }
        for i in 0..size {
            for j in 0..size {
                if i != j && a.get(s0 + i, s0 + j).is_epsilon() && rng.chance(0.3) {
                    a.set(s0 + i, s0 + j, small(rng));
                }
            }
        }
        let loop_vertex = s0 + rng.below(size);
        a.set(loop_vertex, loop_vertex, TropicalScalar::finite(anchors[b]));
        for later in b + 1..m {
            if rng.chance(0.6) {
                let i = s0 + rng.below(size);
                let j = starts[later] + rng.below(sizes[later]);
                a.set(i, j, small(rng));
                for ii in 0..size {
                    for jj in 0..sizes[later] {
                        if rng.chance(0.2) {
                            a.set(s0 + ii, starts[later] + jj, small(rng));
                        }
                    }
                }
            }
        }
    }
    let mut relabel: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut relabel);
    TropicalMatrix::from_fn(n, n, |i, j| a.get(relabel[i], relabel[j]))
}

/// Random row-stochastic matrix with strictly positive entries.
pub fn random_stochastic_positive(rng: &mut SplitMix64, n: usize) -> RealMatrix {
    let mut m = RealMatrix::zeros(n, n);
    for i in 0..n {
        let mut row: Vec<f64> = (0..n).map(|_| 0.05 + rng.next_f64()).collect();
        let sum: f64 = row.iter().sum();
        for v in &mut row {
            *v /= sum;
        }
        for (j, &v) in row.iter().enumerate() {
            m.set(i, j, v);
        }
    }
    m
}
