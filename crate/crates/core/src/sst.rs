//! Suffix-tree topology in DFUDS form.
//!
//! Nodes are identified by pre-order number `1..=|V|`, which is also the
//! order of their descriptions in the DFUDS sequence. A node of degree `d`
//! is written as `d` open parentheses followed by one close parenthesis,
//! after a leading open parenthesis for the whole sequence. Children are
//! ordered lexicographically, sentinel first, so the `i`-th leaf in
//! pre-order is the suffix `SA[i]`.
//!
//! Navigation uses forward/backward excess searches over a min tree of
//! block minima; level ancestors use the same search over the node-depth
//! sequence.

use std::fmt::Write as _;

use crate::bitvec::{BitVector, PackedArray, RankSelect};
use crate::error::{range, Error, Result};
use crate::suffix::{
    build_lcp, build_suffix_array, LcpArray, ResidentSa, RmqIndex, SaAccess, SuffixWorkspace,
    TextBuffer,
};

const MIN_BLOCK: usize = 64;

/// Block minima of an integer sequence `val(0..len)` arranged as a complete
/// binary tree, answering "nearest position to the left/right whose value
/// is at most `target`".
#[derive(Clone, Debug)]
pub(crate) struct MinTree {
    len: usize,
    leaves: usize,
    tree: Vec<i32>,
}

impl MinTree {
    pub(crate) fn build(len: usize, val: impl Fn(usize) -> i64) -> Self {
        let blocks = len.div_ceil(MIN_BLOCK).max(1);
        let leaves = blocks.next_power_of_two();
        let mut tree = vec![i32::MAX; 2 * leaves];
        for b in 0..blocks {
            let hi = ((b + 1) * MIN_BLOCK).min(len);
            let m = (b * MIN_BLOCK..hi).map(&val).min().unwrap_or(i64::MAX);
            tree[leaves + b] = m.clamp(i32::MIN.into(), i32::MAX.into()) as i32;
        }
        for v in (1..leaves).rev() {
            tree[v] = tree[2 * v].min(tree[2 * v + 1]);
        }
        MinTree { len, leaves, tree }
    }

    /// Smallest `j > i` with `val(j) <= target`.
    #[cfg(test)]
    pub(crate) fn forward(&self, i: usize, target: i64, val: impl Fn(usize) -> i64) -> Option<usize> {
        let b = i / MIN_BLOCK;
        let end = ((b + 1) * MIN_BLOCK).min(self.len);
        if let Some(j) = (i + 1..end).find(|&j| val(j) <= target) {
            return Some(j);
        }
        let (lo, hi) = self.block_span(self.next_block(b, target)?);
        (lo..hi).find(|&j| val(j) <= target)
    }

    /// Largest `j < i` with `val(j) <= target`.
    pub(crate) fn backward(&self, i: usize, target: i64, val: impl Fn(usize) -> i64) -> Option<usize> {
        let b = i / MIN_BLOCK;
        if let Some(j) = (b * MIN_BLOCK..i).rev().find(|&j| val(j) <= target) {
            return Some(j);
        }
        let (lo, hi) = self.block_span(self.prev_block(b, target)?);
        (lo..hi).rev().find(|&j| val(j) <= target)
    }

    #[inline]
    fn block_span(&self, b: usize) -> (usize, usize) {
        (b * MIN_BLOCK, ((b + 1) * MIN_BLOCK).min(self.len))
    }

    /// First block after `b` whose minimum is at most `target`.
    fn next_block(&self, b: usize, target: i64) -> Option<usize> {
        let mut v = b + self.leaves;
        loop {
            if v == 1 {
                return None;
            }
            if v.is_multiple_of(2) && i64::from(self.tree[v + 1]) <= target {
                v += 1;
                break;
            }
            v /= 2;
        }
        while v < self.leaves {
            v = if i64::from(self.tree[2 * v]) <= target { 2 * v } else { 2 * v + 1 };
        }
        Some(v - self.leaves)
    }

    /// Last block before `b` whose minimum is at most `target`.
    fn prev_block(&self, b: usize, target: i64) -> Option<usize> {
        let mut v = b + self.leaves;
        loop {
            if v == 1 {
                return None;
            }
            if v % 2 == 1 && i64::from(self.tree[v - 1]) <= target {
                v -= 1;
                break;
            }
            v /= 2;
        }
        while v < self.leaves {
            v = if i64::from(self.tree[2 * v + 1]) <= target { 2 * v + 1 } else { 2 * v };
        }
        Some(v - self.leaves)
    }

    pub(crate) fn bits(&self) -> usize {
        self.tree.len() * 32
    }
}

/// Subset of nodes with dense ranks in pre-order.
#[derive(Clone, Debug)]
pub struct NodeMarkingVector {
    marks: RankSelect,
}

impl NodeMarkingVector {
    pub fn new(marks: BitVector) -> Self {
        NodeMarkingVector {
            marks: RankSelect::new(marks),
        }
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.marks.get(v)
    }

    /// Rank of a marked node among marked nodes; `None` for unmarked nodes.
    #[inline]
    pub fn nrank(&self, v: usize) -> Option<usize> {
        self.contains(v).then(|| self.marks.rank1_at(v))
    }

    /// Rank of an unmarked node among unmarked nodes.
    #[inline]
    pub fn unmarked_rank(&self, v: usize) -> Option<usize> {
        (!self.contains(v)).then(|| self.marks.rank0_at(v))
    }

    /// The `k`-th marked node.
    pub fn select(&self, k: usize) -> Result<usize> {
        self.marks.select1(k)
    }

    pub fn count(&self) -> usize {
        self.marks.count_ones()
    }

    pub fn members(&self) -> Vec<usize> {
        (1..=self.count()).map(|k| self.marks.select1_at(k)).collect()
    }

    pub fn bits(&self) -> usize {
        self.marks.total_bits()
    }
}

/// Suffix-tree topology with pre-order node identity.
#[derive(Clone, Debug)]
pub struct SuccinctSuffixTree {
    dfuds: RankSelect,
    excess: MinTree,
    leaves: RankSelect,
    depth: PackedArray,
    depth_index: MinTree,
    n: usize,
}

/// Builds the DFUDS topology from suffix-array access and the LCP array.
///
/// Internal nodes are the LCP intervals, found bottom-up with a stack; they
/// are put in pre-order by bucketing on left boundary (shallower first),
/// with the leaf of that rank last.
pub fn build_tree(sa: &dyn SaAccess, lcp: &LcpArray) -> Result<SuccinctSuffixTree> {
    let n = lcp.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty text".into()));
    }
    if n == 1 {
        return Ok(SuccinctSuffixTree::from_degrees(n, &[0]));
    }

    struct Open {
        ell: usize,
        lb: usize,
        deg: usize,
    }
    // (left boundary, string depth, degree) in post-order
    let mut internals: Vec<(u32, u32, u32)> = Vec::with_capacity(n);
    let mut stack = vec![Open { ell: 0, lb: 1, deg: 0 }];
    for i in 1..=n {
        let a = if i >= 2 { lcp.get(i) } else { 0 };
        let b = if i < n { lcp.get(i + 1) } else { 0 };
        if stack.last().unwrap().ell != a {
            return Err(Error::Construction(format!("LCP walk broken at rank {i}")));
        }
        let leaf_depth = n + 1 - sa.sa(i);
        if leaf_depth <= a.max(b) {
            return Err(Error::Construction(format!(
                "suffix {} (rank {i}) is shorter than its LCP with a neighbor",
                sa.sa(i)
            )));
        }
        if b > a {
            stack.push(Open { ell: b, lb: i, deg: 0 });
        }
        stack.last_mut().unwrap().deg += 1;
        while stack.last().unwrap().ell > b {
            let node = stack.pop().unwrap();
            internals.push((node.lb as u32, node.ell as u32, node.deg as u32));
            let top = stack.last_mut().unwrap();
            if top.ell >= b {
                top.deg += 1;
            } else {
                let lb = node.lb;
                stack.push(Open { ell: b, lb, deg: 1 });
            }
        }
    }
    let root = stack.pop().unwrap();
    debug_assert!(stack.is_empty());
    internals.push((root.lb as u32, root.ell as u32, root.deg as u32));
    if let Some(&(lb, ell, _)) = internals.iter().find(|&&(_, _, d)| d < 2) {
        return Err(Error::Construction(format!(
            "unary internal node at rank {lb}, depth {ell}"
        )));
    }

    // bucket internal nodes by left boundary, shallowest first
    let mut offsets = vec![0u32; n + 2];
    for &(lb, _, _) in &internals {
        offsets[lb as usize + 1] += 1;
    }
    for i in 1..offsets.len() {
        offsets[i] += offsets[i - 1];
    }
    let mut ordered = vec![0u32; internals.len()];
    let mut fill = offsets.clone();
    for &(lb, _, deg) in internals.iter().rev() {
        ordered[fill[lb as usize] as usize] = deg;
        fill[lb as usize] += 1;
    }
    let mut degrees = Vec::with_capacity(n + internals.len());
    for lb in 1..=n {
        let (lo, hi) = (offsets[lb] as usize, offsets[lb + 1] as usize);
        degrees.extend_from_slice(&ordered[lo..hi]);
        degrees.push(0);
    }
    Ok(SuccinctSuffixTree::from_degrees(n, &degrees))
}

/// Builds the suffix array into `A_1`, then the LCP array, its RMQ index
/// and the tree. The suffix array stays resident.
pub fn index_text(
    text: &TextBuffer,
    ws: &mut SuffixWorkspace,
) -> Result<(SuccinctSuffixTree, RmqIndex)> {
    build_suffix_array(text, ws)?;
    let sa = ResidentSa::new(ws)?;
    let lcp = build_lcp(text, &sa);
    let tree = build_tree(&sa, &lcp)?;
    Ok((tree, RmqIndex::new(lcp)))
}

impl SuccinctSuffixTree {
    /// Assembles the structure from node degrees listed in pre-order.
    fn from_degrees(n: usize, degrees: &[u32]) -> Self {
        let nodes = degrees.len();
        let mut dfuds = BitVector::with_capacity(2 * nodes);
        let mut leaves = BitVector::with_capacity(nodes);
        let mut depth = PackedArray::new(nodes, PackedArray::width_for(n as u64));
        let mut pending: Vec<u32> = Vec::new();
        dfuds.push(true);
        for (k, &d) in degrees.iter().enumerate() {
            for _ in 0..d {
                dfuds.push(true);
            }
            dfuds.push(false);
            leaves.push(d == 0);
            while pending.last() == Some(&0) {
                pending.pop();
            }
            depth.set(k + 1, pending.len() as u64);
            if let Some(top) = pending.last_mut() {
                *top -= 1;
            }
            if d > 0 {
                pending.push(d);
            }
        }
        let dfuds = RankSelect::new(dfuds);
        let excess = MinTree::build(2 * nodes + 1, |p| excess_at(&dfuds, p));
        let depth_index = MinTree::build(nodes, |k| depth.get(k + 1) as i64);
        SuccinctSuffixTree {
            dfuds,
            excess,
            leaves: RankSelect::new(leaves),
            depth,
            depth_index,
            n,
        }
    }

    pub fn root(&self) -> usize {
        1
    }

    pub fn node_count(&self) -> usize {
        self.leaves.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.n
    }

    /// The DFUDS parenthesis sequence, `1` for an open parenthesis.
    pub fn dfuds(&self) -> &BitVector {
        self.dfuds.bit_vector()
    }

    fn check_node(&self, v: usize) -> Result<()> {
        if v == 0 || v > self.node_count() {
            Err(range(v, self.node_count()))
        } else {
            Ok(())
        }
    }

    #[inline]
    pub fn is_leaf(&self, v: usize) -> bool {
        self.leaves.get(v)
    }

    #[inline]
    fn excess(&self, p: usize) -> i64 {
        excess_at(&self.dfuds, p)
    }

    #[inline]
    fn step(&self, p: usize) -> i64 {
        if self.dfuds.get(p) {
            1
        } else {
            -1
        }
    }

    /// Smallest `j > i` with excess at most `target`, stepping bit by bit
    /// inside blocks.
    fn excess_forward(&self, i: usize, target: i64) -> Option<usize> {
        let len = self.excess.len;
        let mut e = self.excess(i);
        let end = ((i / MIN_BLOCK + 1) * MIN_BLOCK).min(len);
        for j in i + 1..end {
            e += self.step(j);
            if e <= target {
                return Some(j);
            }
        }
        let (lo, hi) = self.excess.block_span(self.excess.next_block(i / MIN_BLOCK, target)?);
        let mut e = self.excess(lo);
        if e <= target {
            return Some(lo);
        }
        for j in lo + 1..hi {
            e += self.step(j);
            if e <= target {
                return Some(j);
            }
        }
        None
    }

    /// Largest `j < i` with excess at most `target`.
    fn excess_backward(&self, i: usize, target: i64) -> Option<usize> {
        let mut e = self.excess(i);
        let lo = i / MIN_BLOCK * MIN_BLOCK;
        for j in (lo..i).rev() {
            e -= self.step(j + 1);
            if e <= target {
                return Some(j);
            }
        }
        let (lo, hi) = self.excess.block_span(self.excess.prev_block(i / MIN_BLOCK, target)?);
        let mut e = self.excess(hi - 1);
        if e <= target {
            return Some(hi - 1);
        }
        for j in (lo..hi - 1).rev() {
            e -= self.step(j + 1);
            if e <= target {
                return Some(j);
            }
        }
        None
    }

    /// Position of the first symbol of `v`'s description.
    #[inline]
    fn start(&self, v: usize) -> usize {
        if v == 1 {
            2
        } else {
            self.dfuds.select0_at(v - 1) + 1
        }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.dfuds.select0_at(v) - self.start(v)
    }

    pub fn parent(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        if v == 1 {
            return Err(Error::Domain("parent of the root".into()));
        }
        Ok(self.parent_of(v))
    }

    #[inline]
    pub(crate) fn parent_of(&self, v: usize) -> usize {
        debug_assert!(v > 1);
        let q = self.start(v) - 1;
        let j = self
            .excess_backward(q, self.excess(q))
            .expect("balanced DFUDS");
        self.dfuds.rank0_at(j) + 1
    }

    /// Number of nodes in the subtree of `v`, `v` included.
    pub fn subtree_size(&self, v: usize) -> usize {
        let x = self.start(v);
        let target = self.excess(x - 1) - 1;
        let e = self
            .excess_forward(x - 1, target)
            .expect("balanced DFUDS");
        (e + 2 - x) / 2
    }

    /// Leaf ranks `[lb, rb]` below `v`.
    pub fn leaf_range(&self, v: usize) -> (usize, usize) {
        let last = v + self.subtree_size(v) - 1;
        (self.leaves.rank1_at(v - 1) + 1, self.leaves.rank1_at(last))
    }

    /// `l(v)`, the number of leaves below `v`.
    pub fn subtree_leaf_count(&self, v: usize) -> usize {
        let (lb, rb) = self.leaf_range(v);
        rb + 1 - lb
    }

    #[inline]
    pub fn depth(&self, v: usize) -> usize {
        self.depth.get(v) as usize
    }

    /// The ancestor `i` edges above `v`.
    pub fn level_anc(&self, v: usize, i: usize) -> Result<usize> {
        self.check_node(v)?;
        let d = self.depth(v);
        if i > d {
            return Err(range(i, d));
        }
        Ok(self.level_anc_of(v, i))
    }

    #[inline]
    pub(crate) fn level_anc_of(&self, v: usize, i: usize) -> usize {
        if i == 0 {
            return v;
        }
        let target = (self.depth(v) - i) as i64;
        let k = self
            .depth_index
            .backward(v - 1, target, |k| self.depth.get(k + 1) as i64)
            .expect("root has depth 0");
        k + 1
    }

    /// Node of the leaf with lexicographic rank `i`.
    pub fn leaf_select(&self, i: usize) -> Result<usize> {
        if i == 0 || i > self.n {
            return Err(range(i, self.n));
        }
        Ok(self.leaves.select1_at(i))
    }

    #[inline]
    pub(crate) fn leaf_select_at(&self, i: usize) -> usize {
        self.leaves.select1_at(i)
    }

    /// Lexicographic rank of leaf `v`.
    pub fn leaf_rank(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        if !self.is_leaf(v) {
            return Err(Error::Domain(format!("leaf rank of internal node {v}")));
        }
        Ok(self.leaves.rank1_at(v))
    }

    /// Rank of internal node `v` among internal nodes in pre-order.
    pub fn internal_rank(&self, v: usize) -> Result<usize> {
        self.check_node(v)?;
        if self.is_leaf(v) {
            return Err(Error::Domain(format!("internal rank of leaf {v}")));
        }
        Ok(self.leaves.rank0_at(v))
    }

    /// The `k`-th internal node in pre-order.
    pub fn internal_select(&self, k: usize) -> Result<usize> {
        self.leaves.select0(k)
    }

    /// Suffix position stored at leaf `v`.
    pub fn leaf_label(&self, v: usize, sa: &dyn SaAccess) -> Result<usize> {
        Ok(sa.sa(self.leaf_rank(v)?))
    }

    /// String depth of `v`. Leaves need suffix-array access; internal nodes
    /// are answered from the LCP minimum over their leaf interval.
    pub fn str_depth(&self, v: usize, rmq: &RmqIndex, sa: &dyn SaAccess) -> usize {
        if v == 1 {
            return 0;
        }
        if self.is_leaf(v) {
            return self.n + 1 - sa.sa(self.leaves.rank1_at(v));
        }
        let (lb, rb) = self.leaf_range(v);
        rmq.min_value(lb + 1, rb)
    }

    /// String depth of the root or an internal node, without suffix-array
    /// access.
    pub fn internal_str_depth(&self, v: usize, rmq: &RmqIndex) -> Result<usize> {
        self.check_node(v)?;
        if v == 1 {
            return Ok(0);
        }
        if self.is_leaf(v) {
            return Err(Error::Domain(format!("SA-free string depth of leaf {v}")));
        }
        let (lb, rb) = self.leaf_range(v);
        Ok(rmq.min_value(lb + 1, rb))
    }

    /// `|c(e)|` for the edge entering `v`.
    pub fn edge_label_length(&self, v: usize, rmq: &RmqIndex, sa: &dyn SaAccess) -> Result<usize> {
        let p = self.parent(v)?;
        Ok(self.str_depth(v, rmq, sa) - self.str_depth(p, rmq, sa))
    }

    /// Children of `v` in order.
    pub fn children(&self, v: usize) -> Vec<usize> {
        let d = self.degree(v);
        let mut out = Vec::with_capacity(d);
        let mut c = v + 1;
        for _ in 0..d {
            out.push(c);
            c += self.subtree_size(c);
        }
        out
    }

    /// Indented dump, one node per line: pre-order, `|c(e)|`, string depth
    /// and, for leaves, the suffix label.
    pub fn to_indented_text(&self, rmq: &RmqIndex, sa: &dyn SaAccess) -> String {
        let mut out = String::new();
        for v in 1..=self.node_count() {
            let sd = self.str_depth(v, rmq, sa);
            let edge = if v == 1 {
                0
            } else {
                sd - self.str_depth(self.parent_of(v), rmq, sa)
            };
            let _ = write!(out, "{}{v} |c|={edge} depth={sd}", "  ".repeat(self.depth(v)));
            if self.is_leaf(v) {
                let _ = write!(out, " leaf={}", sa.sa(self.leaves.rank1_at(v)));
            }
            out.push('\n');
        }
        out
    }

    /// Edge list `parent -> child [len=|c(e)|]`, DOT-compatible.
    pub fn to_edge_list(&self, rmq: &RmqIndex, sa: &dyn SaAccess) -> String {
        let mut out = String::from("digraph suffix_tree {\n");
        for v in 2..=self.node_count() {
            let p = self.parent_of(v);
            let len = self.str_depth(v, rmq, sa) - self.str_depth(p, rmq, sa);
            let _ = writeln!(out, "  {p} -> {v} [len={len}];");
        }
        out.push_str("}\n");
        out
    }

    /// Bits of the parenthesis sequence and its rank/select directory.
    pub fn dfuds_bits(&self) -> usize {
        self.dfuds.total_bits()
    }

    /// Bits of the leaf-marking vector and its directory.
    pub fn leaf_marker_bits(&self) -> usize {
        self.leaves.total_bits()
    }

    /// Bits of the search directories and depth sequence.
    pub fn navigation_bits(&self) -> usize {
        self.excess.bits() + self.depth.bits() + self.depth_index.bits()
    }
}

#[inline]
fn excess_at(dfuds: &RankSelect, p: usize) -> i64 {
    2 * dfuds.rank1_at(p) as i64 - p as i64
}
