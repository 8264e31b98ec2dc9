//! Precedence graphs, strong connectivity and block triangular normal form.
//!
//! The precedence graph of a square matrix has an arc (i, j) exactly where
//! entry (i, j) differs from the algebra's zero (ε in max-plus, 0.0 in the
//! conventional algebra). A matrix is irreducible when that graph is strongly
//! connected; a reducible matrix can be symmetrically permuted so that its
//! strongly connected components appear as irreducible diagonal blocks in
//! block upper triangular order.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Range;

use crate::real::RealMatrix;
use crate::tropical::{ShapeError, TropicalMatrix, TropicalVector};

/// Adjacency-list view of a square matrix's support.
#[derive(Clone, Debug)]
pub struct PrecedenceGraph {
    n: usize,
    adj: Vec<Vec<usize>>,
}

impl PrecedenceGraph {
    /// Arcs where the entry is not ε.
    pub fn of_tropical(a: &TropicalMatrix) -> Result<PrecedenceGraph, ShapeError> {
        if !a.is_square() {
            return Err(ShapeError { op: "precedence_graph", lhs: (a.rows(), a.cols()), rhs: (a.cols(), a.cols()) });
        }
        let n = a.rows();
        let adj = (0..n)
            .map(|i| (0..n).filter(|&j| a.get(i, j).is_finite()).collect())
            .collect();
        Ok(PrecedenceGraph { n, adj })
    }

    /// Arcs where the entry is not 0.0.
    pub fn of_real(a: &RealMatrix) -> Result<PrecedenceGraph, ShapeError> {
        if !a.is_square() {
            return Err(ShapeError { op: "precedence_graph", lhs: (a.rows(), a.cols()), rhs: (a.cols(), a.cols()) });
        }
        let n = a.rows();
        let adj = (0..n)
            .map(|i| (0..n).filter(|&j| a.get(i, j) != 0.0).collect())
            .collect();
        Ok(PrecedenceGraph { n, adj })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adj[i]
    }

    pub fn has_arc(&self, i: usize, j: usize) -> bool {
        self.adj[i].contains(&j)
    }

    /// Strongly connected components in Tarjan's discovery order. Each
    /// component's vertex list is sorted ascending.
    pub fn strongly_connected_components(&self) -> Vec<Vec<usize>> {
        let mut state = TarjanState {
            next_index: 0,
            stack: Vec::new(),
            on_stack: vec![false; self.n],
            index: vec![usize::MAX; self.n],
            low: vec![0; self.n],
            components: Vec::new(),
        };
        for v in 0..self.n {
            if state.index[v] == usize::MAX {
                state.visit(v, &self.adj);
            }
        }
        for comp in &mut state.components {
            comp.sort_unstable();
        }
        state.components
    }

    /// True when the graph is strongly connected. A single vertex counts
    /// only with a self-loop: the 1x1 ε matrix is treated as reducible
    /// (degenerate), while a 1x1 finite entry is a legitimate cycle.
    pub fn is_irreducible(&self) -> bool {
        match self.n {
            0 => false,
            1 => self.has_arc(0, 0),
            _ => self.strongly_connected_components().len() == 1,
        }
    }
}

struct TarjanState {
    next_index: usize,
    stack: Vec<usize>,
    on_stack: Vec<bool>,
    index: Vec<usize>,
    low: Vec<usize>,
    components: Vec<Vec<usize>>,
}

impl TarjanState {
    fn visit(&mut self, v: usize, adj: &[Vec<usize>]) {
        self.index[v] = self.next_index;
        self.low[v] = self.next_index;
        self.next_index += 1;
        self.stack.push(v);
        self.on_stack[v] = true;

        for &w in &adj[v] {
            if self.index[w] == usize::MAX {
                self.visit(w, adj);
                self.low[v] = self.low[v].min(self.low[w]);
            } else if self.on_stack[w] {
                self.low[v] = self.low[v].min(self.index[w]);
            }
        }

        if self.low[v] == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack underflow");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.components.push(comp);
        }
    }
}

/// Block upper triangular normal form of a square max-plus matrix.
///
/// `permutation[new] = old`: entry (i, j) of `permuted` is entry
/// (permutation[i], permutation[j]) of the original. `blocks` partitions
/// `0..n` in permuted coordinates; every entry below the diagonal blocks
/// is ε, and each diagonal block is irreducible or a 1x1 (possibly ε)
/// scalar.
#[derive(Clone, Debug)]
pub struct NormalForm {
    permutation: Vec<usize>,
    blocks: Vec<Range<usize>>,
    permuted: TropicalMatrix,
}

impl NormalForm {
    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn permuted(&self) -> &TropicalMatrix {
        &self.permuted
    }

    pub fn dim(&self) -> usize {
        self.permutation.len()
    }

    /// Index of the block containing the given permuted position.
    pub fn block_containing(&self, new_pos: usize) -> usize {
        self.blocks
            .iter()
            .position(|r| r.contains(&new_pos))
            .expect("position out of range")
    }

    /// Carries a vector from original into permuted coordinates.
    pub fn permute_vector(&self, v: &TropicalVector) -> TropicalVector {
        assert_eq!(v.len(), self.dim(), "vector length mismatch");
        let mut out = TropicalVector::epsilon(self.dim());
        for (new, &old) in self.permutation.iter().enumerate() {
            out.set(new, v.get(old));
        }
        out
    }

    /// Carries a vector from permuted back into original coordinates.
    pub fn unpermute_vector(&self, v: &TropicalVector) -> TropicalVector {
        assert_eq!(v.len(), self.dim(), "vector length mismatch");
        let mut out = TropicalVector::epsilon(self.dim());
        for (new, &old) in self.permutation.iter().enumerate() {
            out.set(old, v.get(new));
        }
        out
    }

    /// Applies the inverse permutation to `permuted`, recovering the
    /// original matrix exactly.
    pub fn reconstruct(&self) -> TropicalMatrix {
        let n = self.dim();
        TropicalMatrix::from_fn(n, n, |i, j| {
            let pi = self.permutation.iter().position(|&o| o == i).expect("bijection");
            let pj = self.permutation.iter().position(|&o| o == j).expect("bijection");
            self.permuted.get(pi, pj)
        })
    }
}

/// Computes the normal form of a square max-plus matrix.
///
/// Components are ordered so that every arc points from an earlier block to
/// a later one (sources of the condensation first), which makes the permuted
/// matrix block upper triangular. Among ready components the one holding the
/// smallest original index goes first, and inside a block the original
/// relative order is kept, so the result is deterministic.
pub fn normal_form(a: &TropicalMatrix) -> Result<NormalForm, ShapeError> {
    let graph = PrecedenceGraph::of_tropical(a)?;
    let n = graph.len();
    let comps = graph.strongly_connected_components();
    let q = comps.len();

    let mut comp_of = vec![0usize; n];
    for (c, comp) in comps.iter().enumerate() {
        for &v in comp {
            comp_of[v] = c;
        }
    }

    // Condensation in-degrees, counting each ordered component pair once.
    let mut seen = vec![false; q * q];
    let mut out_arcs: Vec<Vec<usize>> = vec![Vec::new(); q];
    let mut in_degree = vec![0usize; q];
    for v in 0..n {
        for &w in graph.neighbors(v) {
            let (cv, cw) = (comp_of[v], comp_of[w]);
            if cv != cw && !seen[cv * q + cw] {
                seen[cv * q + cw] = true;
                out_arcs[cv].push(cw);
                in_degree[cw] += 1;
            }
        }
    }

    // Kahn's algorithm; ties resolved by the smallest original index of the
    // component, so equal inputs always produce the same permutation.
    let mut order = Vec::with_capacity(q);
    let mut ready: Vec<usize> = (0..q).filter(|&c| in_degree[c] == 0).collect();
    while !ready.is_empty() {
        let pick = ready
            .iter()
            .copied()
            .min_by_key(|&c| comps[c][0])
            .expect("nonempty ready set");
        ready.retain(|&c| c != pick);
        order.push(pick);
        for &succ in &out_arcs[pick] {
            in_degree[succ] -= 1;
            if in_degree[succ] == 0 {
                ready.push(succ);
            }
        }
    }
    debug_assert_eq!(order.len(), q, "condensation must be acyclic");

    let mut permutation = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(q);
    for &c in &order {
        let start = permutation.len();
        permutation.extend_from_slice(&comps[c]);
        blocks.push(start..permutation.len());
    }

    let permuted = TropicalMatrix::from_fn(n, n, |i, j| a.get(permutation[i], permutation[j]));

    if cfg!(debug_assertions) {
        for (bi, rb) in blocks.iter().enumerate() {
            for cb in blocks.iter().take(bi) {
                debug_assert!(
                    !permuted.block_is_coupled(rb.clone(), cb.clone()),
                    "block ({bi}) leaks below the diagonal"
                );
            }
        }
    }

    Ok(NormalForm { permutation, blocks, permuted })
}
