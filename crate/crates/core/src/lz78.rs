//! LZ78 factorization on the suffix tree.
//!
//! The LZ78 trie is a prefix-closed set of substrings of the text, so it can
//! be drawn onto the suffix tree: each edge `e` carries a counter `n_e` of
//! trie nodes placed on it. A factor is found by walking from the root
//! towards the leaf of its starting suffix until the first edge with
//! `n_e < |c(e)|`; the end node of that edge is the factor's witness.

use crate::audit::{SpaceCategory, SpaceReport};
use crate::bitvec::{BitVector, PackedArray, RankSelect};
use crate::epsilon::Epsilon;
use crate::error::{range, Error, Result};
use crate::sst::{index_text, NodeMarkingVector, SuccinctSuffixTree};
use crate::suffix::{
    cell_width, invert_in_place, A1Phase, ResidentSa, RmqIndex, SaAccess, SuffixWorkspace,
    TextBuffer,
};
use crate::Factor;

/// Per-edge trie counters `n_e` with edge lengths, split by the bound
/// `min(|c(e)|, h(u))` into small edges (packed narrow fields, length
/// capped at `Δ+1`) and `Δ`-edges (full-width fields).
#[derive(Clone, Debug)]
pub struct EdgeCounters {
    delta: usize,
    large_nodes: NodeMarkingVector,
    small: PackedArray,
    large: PackedArray,
}

/// Per-node quantities of the counter bound, kept for audits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EdgeBound {
    pub edge_len: usize,
    pub h_parent: usize,
    pub h: usize,
    pub leaves: usize,
    pub str_depth: usize,
}

/// Pre-order walk over all non-root nodes with the `h` recurrence.
fn walk_edges(
    tree: &SuccinctSuffixTree,
    rmq: &RmqIndex,
    sa: &dyn SaAccess,
    mut visit: impl FnMut(usize, EdgeBound),
) {
    let n = tree.leaf_count();
    // (h, string depth) of the ancestors of the current node, by depth
    let mut stack: Vec<(usize, usize)> = vec![(n, 0)];
    for v in 2..=tree.node_count() {
        stack.truncate(tree.depth(v));
        let (h_parent, parent_depth) = *stack.last().unwrap();
        let str_depth = tree.str_depth(v, rmq, sa);
        let edge_len = str_depth - parent_depth;
        let leaves = tree.subtree_leaf_count(v);
        let h = h_parent.min(leaves).saturating_sub(edge_len);
        stack.push((h, str_depth));
        visit(
            v,
            EdgeBound {
                edge_len,
                h_parent,
                h,
                leaves,
                str_depth,
            },
        );
    }
}

/// Builds the counters while the suffix array is resident in `A_1`.
pub fn build_edge_counters(
    ws: &SuffixWorkspace,
    tree: &SuccinctSuffixTree,
    rmq: &RmqIndex,
    eps: Epsilon,
) -> Result<EdgeCounters> {
    build_counters(ws, tree, rmq, eps, None)
}

fn build_counters(
    ws: &SuffixWorkspace,
    tree: &SuccinctSuffixTree,
    rmq: &RmqIndex,
    eps: Epsilon,
    mut record: Option<&mut Vec<EdgeBound>>,
) -> Result<EdgeCounters> {
    ws.expect_a1(A1Phase::SuffixArray)?;
    let sa = ResidentSa::new(ws)?;
    let n = ws.n();
    let delta = eps.delta(n);
    let nodes = tree.node_count();
    let mut marks = BitVector::zeros(nodes);
    walk_edges(tree, rmq, &sa, |v, b| {
        if b.edge_len.min(b.h_parent) > delta {
            marks.set(v, true);
        }
    });
    let large_nodes = NodeMarkingVector::new(marks);
    let large_count = large_nodes.count();
    let small_count = nodes - 1 - large_count;
    let mut small = PackedArray::new(2 * small_count, PackedArray::width_for(delta as u64 + 1));
    let mut large = PackedArray::new(2 * large_count, cell_width(n));
    if let Some(rec) = record.as_deref_mut() {
        rec.clear();
        rec.resize(nodes + 1, EdgeBound::default());
    }
    walk_edges(tree, rmq, &sa, |v, b| {
        match large_nodes.nrank(v) {
            Some(r) => large.set(2 * r, b.edge_len as u64),
            None => {
                let k = large_nodes.unmarked_rank(v).unwrap() - 1;
                small.set(2 * k, b.edge_len.min(delta + 1) as u64);
            }
        }
        if let Some(rec) = record.as_deref_mut() {
            rec[v] = b;
        }
    });
    Ok(EdgeCounters {
        delta,
        large_nodes,
        small,
        large,
    })
}

impl EdgeCounters {
    pub fn delta(&self) -> usize {
        self.delta
    }

    /// Number of `Δ`-edges.
    pub fn large_count(&self) -> usize {
        self.large_nodes.count()
    }

    pub fn is_large(&self, v: usize) -> bool {
        self.large_nodes.contains(v)
    }

    /// Cell index of the `n_e` field for the edge entering `v`.
    #[inline]
    fn slot(&self, v: usize) -> (bool, usize) {
        match self.large_nodes.nrank(v) {
            Some(r) => (true, 2 * r - 1),
            None => (false, 2 * (self.large_nodes.unmarked_rank(v).unwrap() - 1) - 1),
        }
    }

    /// `(n_e, stored |c(e)|)` for the edge entering `v`; the length of a
    /// small edge is capped at `Δ+1`.
    #[inline]
    pub fn get(&self, v: usize) -> (usize, usize) {
        let (big, i) = self.slot(v);
        let t = if big { &self.large } else { &self.small };
        (t.get(i) as usize, t.get(i + 1) as usize)
    }

    /// `n_e` for the edge entering `v`.
    pub fn count(&self, v: usize) -> usize {
        self.get(v).0
    }

    fn increment(&mut self, v: usize) -> Result<usize> {
        let (big, i) = self.slot(v);
        let t = if big { &mut self.large } else { &mut self.small };
        let c = t.get(i) + 1;
        if !big && c > self.delta as u64 {
            return Err(Error::Invariant(format!(
                "counter of small edge into {v} exceeds Δ = {}",
                self.delta
            )));
        }
        t.set(i, c);
        Ok(c as usize)
    }

    pub fn small_bits(&self) -> usize {
        self.small.bits()
    }

    pub fn large_bits(&self) -> usize {
        self.large.bits()
    }

    pub fn marker_bits(&self) -> usize {
        self.large_nodes.bits()
    }
}

/// Witnesses as written to `A_1`: the node's rank within its class
/// (internal nodes or leaves) plus one bit per factor telling the class.
#[derive(Clone, Debug)]
pub struct WitnessTable {
    leaf_flags: BitVector,
    z: usize,
}

impl WitnessTable {
    pub fn z(&self) -> usize {
        self.z
    }

    /// Witness of factor `x` as a pre-order number.
    pub fn witness(&self, ws: &SuffixWorkspace, tree: &SuccinctSuffixTree, x: usize) -> usize {
        let r = ws.a1().get(x) as usize;
        if self.leaf_flags.get(x) {
            tree.leaf_select_at(r)
        } else {
            tree.internal_select(r).expect("stored internal rank")
        }
    }

    pub fn witnesses(&self, ws: &SuffixWorkspace, tree: &SuccinctSuffixTree) -> Vec<usize> {
        (1..=self.z).map(|x| self.witness(ws, tree, x)).collect()
    }

    pub fn bits(&self) -> usize {
        self.leaf_flags.bits()
    }
}

/// Computes every factor's witness into `A_1[1..z]` and marks factor starts.
pub fn compute_witnesses(
    ws: &mut SuffixWorkspace,
    tree: &SuccinctSuffixTree,
    rmq: &RmqIndex,
    counters: &mut EdgeCounters,
) -> Result<(WitnessTable, BitVector)> {
    ws.expect_a1(A1Phase::InverseSuffixArray)?;
    let n = ws.n();
    let mut b_f = BitVector::zeros(n);
    let mut leaf_flags = BitVector::new();
    let a1 = ws.a1_mut();
    let mut j = 1;
    let mut x = 0;
    while j <= n {
        x += 1;
        let leaf = tree.leaf_select_at(a1.get(j) as usize);
        let d = tree.depth(leaf);
        let mut found = None;
        for k in 1..=d {
            let v = tree.level_anc_of(leaf, d - k);
            let (ne, len) = counters.get(v);
            if ne < len {
                found = Some((v, k));
                break;
            }
        }
        let (w, k) = found.ok_or_else(|| {
            Error::Invariant(format!("walk for position {j} found no open edge"))
        })?;
        let ne = counters.increment(w)?;
        let u = if k == 1 { 1 } else { tree.level_anc_of(leaf, d - k + 1) };
        let len = tree.internal_str_depth(u, rmq)? + ne;
        let is_leaf = tree.is_leaf(w);
        let class_rank = if is_leaf {
            tree.leaf_rank(w)?
        } else {
            tree.internal_rank(w)?
        };
        if x > j {
            return Err(Error::Invariant(format!("witness {x} overtakes ISA cell {j}")));
        }
        a1.set(x, class_rank as u64);
        leaf_flags.push(is_leaf);
        b_f.set(j, true);
        j += len;
    }
    if j != n + 1 {
        return Err(Error::Invariant(format!("factors overrun the text ({j} > {})", n + 1)));
    }
    ws.set_a1_phase(A1Phase::Witnesses);
    Ok((WitnessTable { leaf_flags, z: x }, b_f))
}

/// Marks the witnesses that later factors can refer to: those seen twice,
/// and non-root parents of first-seen witnesses.
pub fn collect_vxi(
    ws: &SuffixWorkspace,
    witnesses: &WitnessTable,
    tree: &SuccinctSuffixTree,
) -> Result<NodeMarkingVector> {
    ws.expect_a1(A1Phase::Witnesses)?;
    let nodes = tree.node_count();
    let mut seen = BitVector::zeros(nodes);
    let mut vxi = BitVector::zeros(nodes);
    for x in 1..=witnesses.z {
        let v = witnesses.witness(ws, tree, x);
        if seen.get(v) {
            vxi.set(v, true);
        } else {
            seen.set(v, true);
            let p = tree.parent_of(v);
            if p != 1 {
                vxi.set(p, true);
            }
        }
    }
    Ok(NodeMarkingVector::new(vxi))
}

/// Replaces `W` in `A_1[1..z]` by referred indices, using
/// `A_1[z+1..z+|V_Ξ|]` for the most recent factor at each `V_Ξ` node.
pub fn match_refs(
    ws: &mut SuffixWorkspace,
    witnesses: &WitnessTable,
    vxi: &NodeMarkingVector,
    tree: &SuccinctSuffixTree,
) -> Result<()> {
    ws.expect_a1(A1Phase::Witnesses)?;
    let n = ws.n();
    let z = witnesses.z;
    if vxi.count() > n - z {
        return Err(Error::Invariant(format!(
            "|V_Ξ| = {} exceeds the {} free cells",
            vxi.count(),
            n - z
        )));
    }
    for i in z + 1..=z + vxi.count() {
        ws.a1_mut().set(i, 0);
    }
    for x in 1..=z {
        let v = witnesses.witness(ws, tree, x);
        let a1 = ws.a1_mut();
        let slot = vxi.nrank(v).map(|r| z + r);
        let last = slot.map_or(0, |s| a1.get(s));
        let referred = if last == 0 {
            let p = tree.parent_of(v);
            if p == 1 {
                0
            } else {
                let s = vxi
                    .nrank(p)
                    .ok_or_else(|| Error::Invariant(format!("parent {p} of witness {v} not in V_Ξ")))?;
                match a1.get(z + s) {
                    0 => {
                        return Err(Error::Invariant(format!(
                            "factor {x} refers to an empty slot of node {p}"
                        )))
                    }
                    y => y,
                }
            }
        } else {
            last
        };
        if let Some(s) = slot {
            a1.set(s, x as u64);
        }
        a1.set(x, referred);
    }
    ws.set_a1_phase(A1Phase::ReferredIndices);
    Ok(())
}

/// An LZ78 factorization with constant-time factor access.
#[derive(Clone, Debug)]
pub struct Lz78Factorization {
    b_f: RankSelect,
    refs: PackedArray,
}

impl Lz78Factorization {
    pub fn n(&self) -> usize {
        self.b_f.len()
    }

    pub fn z(&self) -> usize {
        self.refs.len()
    }

    pub fn factor_starts(&self) -> &BitVector {
        self.b_f.bit_vector()
    }

    pub fn bounds(&self, x: usize) -> Result<(usize, usize)> {
        let z = self.z();
        if x == 0 || x > z {
            return Err(range(x, z));
        }
        let start = self.b_f.select1_at(x);
        let end = if x == z {
            self.n() + 1
        } else {
            self.b_f.select1_at(x + 1)
        };
        Ok((start, end - start))
    }

    /// Referred factor index of `x`, 0 for a free letter.
    pub fn referred_index(&self, x: usize) -> Result<usize> {
        self.bounds(x)?;
        Ok(self.refs.get(x) as usize)
    }

    pub fn factor(&self, x: usize, text: &TextBuffer) -> Result<Factor> {
        let (start, len) = self.bounds(x)?;
        let y = self.refs.get(x) as usize;
        Ok(Factor {
            start,
            len,
            reference: (y > 0).then_some(y),
            literal: Some(text.get(start + len - 1)),
        })
    }

    pub fn factors(&self, text: &TextBuffer) -> Vec<Factor> {
        (1..=self.z()).map(|x| self.factor(x, text).unwrap()).collect()
    }

    pub fn bits(&self) -> usize {
        self.b_f.total_bits() + self.refs.bits()
    }

    /// Redirects the last referencing factor, for negative controls.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        if let Some(x) = (1..=self.z()).rev().find(|&x| self.refs.get(x) > 0) {
            self.refs.set(x, 0);
        }
    }
}

/// Outcome of the LZ78 bound checks.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Lz78Audit {
    /// Internal nodes of the LZ78 trie.
    pub z_i: usize,
    pub z_plus_zi_ok: bool,
    /// Edges whose final counter exceeds `min(|c(e)|, h(u))`.
    pub counter_violations: usize,
    /// Explicit trie nodes whose trie height exceeds `l(v) − |c(e)|`.
    pub height_violations: usize,
    pub height_checked: usize,
    /// `(n/Δ)(1 + ln(n/Δ))`.
    pub large_edge_bound: f64,
    /// Large edges that end in a leaf.
    pub large_leaf_edges: usize,
    pub large_edges_ok: bool,
}

impl Lz78Audit {
    pub fn passed(&self) -> bool {
        self.z_plus_zi_ok && self.counter_violations == 0 && self.height_violations == 0 && self.large_edges_ok
    }
}

#[derive(Clone, Debug, Default)]
pub struct Lz78Trace {
    pub n: usize,
    pub node_count: usize,
    pub delta: usize,
    pub large_edges: usize,
    /// Witnesses as pre-order numbers.
    pub witnesses: Vec<usize>,
    /// `V_Ξ` as pre-order numbers.
    pub vxi: Vec<usize>,
    pub audit: Lz78Audit,
    pub space: SpaceReport,
}

pub fn factorize_lz78(text: &TextBuffer, eps: Epsilon) -> Result<Lz78Factorization> {
    run(text, eps, false).map(|(f, _)| f)
}

/// Factorizes and audits the counter and space bounds.
pub fn factorize_lz78_traced(text: &TextBuffer, eps: Epsilon) -> Result<(Lz78Factorization, Lz78Trace)> {
    run(text, eps, true)
}

fn run(text: &TextBuffer, eps: Epsilon, trace: bool) -> Result<(Lz78Factorization, Lz78Trace)> {
    use SpaceCategory::*;

    if text.is_empty() {
        return Err(Error::InvalidInput("empty text".into()));
    }
    let n = text.len();
    let mut space = SpaceReport::new(n, eps);
    let mut ws = SuffixWorkspace::new(n, eps);
    let (tree, rmq) = index_text(text, &mut ws)?;
    space.add("text", Text, text.bits());
    space.add("A_1", Arena, ws.a1().bits());
    space.add("A_2", Arena, ws.a2().bits());
    space.add("DFUDS", BitVectors, tree.dfuds_bits());
    space.add("leaf markers", BitVectors, tree.leaf_marker_bits());
    space.add("tree search directories", Navigation, tree.navigation_bits());
    space.add("LCP", Lcp, rmq.lcp().bits());
    space.add("RMQ directory", Lcp, rmq.directory_bits());

    if n == 1 {
        // the tree is a lone root; the sentinel is a free letter
        let fact = Lz78Factorization {
            b_f: RankSelect::new(BitVector::from_iter([true])),
            refs: PackedArray::new(1, 1),
        };
        let trace = Lz78Trace {
            n,
            node_count: 1,
            delta: eps.delta(n),
            witnesses: vec![1],
            audit: Lz78Audit {
                z_plus_zi_ok: true,
                large_edges_ok: true,
                large_edge_bound: 1.0,
                ..Default::default()
            },
            space,
            ..Default::default()
        };
        return Ok((fact, trace));
    }

    let mut bounds = Vec::new();
    let mut counters = build_counters(&ws, &tree, &rmq, eps, trace.then_some(&mut bounds))?;
    space.add("M_VΔ", BitVectors, counters.marker_bits());
    space.add("small edge counters", Counters, counters.small_bits());
    space.add("Δ-edge counters", Counters, counters.large_bits());
    space.add("inversion visited", BitVectors, invert_in_place(&mut ws)?);

    let (witnesses, b_f) = compute_witnesses(&mut ws, &tree, &rmq, &mut counters)?;
    let z = witnesses.z();
    space.add("B_f", BitVectors, RankSelect::new(b_f.clone()).total_bits());
    space.add("witness class flags", BitVectors, witnesses.bits());
    let w = if trace {
        witnesses.witnesses(&ws, &tree)
    } else {
        Vec::new()
    };
    let vxi = collect_vxi(&ws, &witnesses, &tree)?;
    space.add("witness seen marks", BitVectors, tree.node_count());
    space.add("M_VΞ", BitVectors, vxi.bits());
    match_refs(&mut ws, &witnesses, &vxi, &tree)?;

    let mut refs = PackedArray::new(z, ws.a1().width());
    for x in 1..=z {
        refs.set(x, ws.a1().get(x));
    }
    let fact = Lz78Factorization {
        b_f: RankSelect::new(b_f),
        refs,
    };
    let mut out = Lz78Trace {
        n,
        node_count: tree.node_count(),
        delta: counters.delta(),
        large_edges: counters.large_count(),
        ..Default::default()
    };
    if trace {
        out.audit = audit(&fact, &counters, &bounds, &w);
        out.vxi = vxi.members();
        out.witnesses = w;
    }
    out.space = space;
    Ok((fact, out))
}

fn audit(fact: &Lz78Factorization, counters: &EdgeCounters, bounds: &[EdgeBound], w: &[usize]) -> Lz78Audit {
    let n = fact.n();
    let z = fact.z();
    let refs: Vec<usize> = (1..=z).map(|x| fact.refs.get(x) as usize).collect();
    let mut internal = vec![false; z + 1];
    let mut height = vec![0usize; z + 1];
    for x in (1..=z).rev() {
        let y = refs[x - 1];
        internal[y] = true;
        height[y] = height[y].max(height[x] + 1);
    }
    let z_i = internal[1..].iter().filter(|&&b| b).count();

    let (mut counter_violations, mut large_leaf_edges) = (0, 0);
    for (v, b) in bounds.iter().enumerate().skip(2) {
        if counters.count(v) > b.edge_len.min(b.h_parent) {
            counter_violations += 1;
        }
        if b.leaves == 1 && counters.is_large(v) {
            large_leaf_edges += 1;
        }
    }
    let (mut height_violations, mut height_checked) = (0, 0);
    for x in 1..=z {
        let v = w[x - 1];
        let (_, len) = fact.bounds(x).unwrap();
        let b = bounds[v];
        if len == b.str_depth {
            height_checked += 1;
            if height[x] + b.edge_len > b.leaves {
                height_violations += 1;
            }
        }
    }
    let delta = counters.delta() as f64;
    let ratio = n as f64 / delta;
    let large_edge_bound = ratio * (1.0 + ratio.ln());
    Lz78Audit {
        z_i,
        z_plus_zi_ok: z + z_i <= n,
        counter_violations,
        height_violations,
        height_checked,
        large_edge_bound,
        large_leaf_edges,
        large_edges_ok: counters.large_count() as f64 <= large_edge_bound,
    }
}
