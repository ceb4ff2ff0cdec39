//! LZ77 factorization by leaf-to-top traversals in three rounds.
//!
//! Traversal `j` starts at the leaf of suffix `j` and climbs, marking nodes,
//! until it reaches a node that is already marked. At a factor position the
//! node where it stops is the referred node of the factor (or the root, for
//! a free letter). The first round computes factor boundaries, the second
//! counts referred-node events per traversal into `B_D`, the third writes
//! those events into `A_1` as `D`, and a final matching scan turns them
//! into referred positions.

use crate::bitvec::{BitVector, PackedArray, RankSelect};
use crate::epsilon::Epsilon;
use crate::error::{range, Error, Result};
use crate::sst::{index_text, NodeMarkingVector, SuccinctSuffixTree};
use crate::suffix::{
    build_inverse_access, invert_in_place, A1Phase, A2Phase, RmqIndex, SaAccess, SuffixWorkspace,
    TextBuffer,
};
use crate::Factor;

/// Marked nodes during a round of traversals, and the referred nodes `V_r`.
#[derive(Clone, Debug)]
pub struct TraversalState {
    marked: BitVector,
    referred: NodeMarkingVector,
}

impl TraversalState {
    pub fn marked(&self) -> &BitVector {
        &self.marked
    }

    pub fn referred(&self) -> &NodeMarkingVector {
        &self.referred
    }

    fn reset(&mut self) {
        self.marked.clear_all();
        self.marked.set(1, true);
    }
}

/// Output of the first round.
#[derive(Clone, Debug)]
pub struct Round1 {
    pub b_f: BitVector,
    pub b_r: BitVector,
    pub state: TraversalState,
    pub parent_steps: usize,
    pub d_bound: DBoundCounts,
}

/// The quantities of the `|D| ≤ n` argument.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct DBoundCounts {
    /// Free letters.
    pub z_f: usize,
    /// Referencing factors of length 1.
    pub z_r1: usize,
    /// Referencing factors longer than 1.
    pub z_r_long: usize,
    /// Referred nodes of string depth 1.
    pub v_r1: usize,
    /// Referred nodes of string depth above 1.
    pub v_r_long: usize,
    pub classic: bool,
}

impl DBoundCounts {
    pub fn z_r(&self) -> usize {
        self.z_r1 + self.z_r_long
    }

    pub fn v_r(&self) -> usize {
        self.v_r1 + self.v_r_long
    }

    /// Checks every inequality of the argument for a text of length `n`.
    ///
    /// With fresh characters a depth-1 referred node may stand for a
    /// symbol first seen as a fresh character, so `|V_r^1| ≤ z_f` can fail;
    /// there every referencing factor has length at least 2 and each
    /// referred node is referred to at least once, which suffices.
    pub fn holds(&self, n: usize) -> bool {
        if self.classic {
            self.z_r1 == 0
                && self.v_r() <= self.z_r()
                && self.z_f + 2 * self.z_r() <= n
        } else {
            self.v_r1 <= self.z_f
                && self.v_r_long <= self.z_r_long
                && self.v_r() + self.z_r() <= self.z_f + self.z_r1 + 2 * self.z_r_long
                && self.z_f + self.z_r1 + 2 * self.z_r_long <= n
        }
    }
}

/// Parent of the leaf with rank `i`, where a traversal's marking walk
/// begins, and the number of steps taken. A leaf is entered once per round
/// and can never be a stopping node, so its mark is not stored.
#[inline]
fn above_leaf(tree: &SuccinctSuffixTree, i: usize) -> (usize, usize) {
    let leaf = tree.leaf_select_at(i);
    if leaf == 1 {
        (1, 0)
    } else {
        (tree.parent_of(leaf), 1)
    }
}

/// First round: factor boundaries, `B_r` and the referred nodes.
///
/// Expects the inverse suffix array in `A_1`; `sa` serves suffix-array
/// values for string depths.
pub fn round1(
    ws: &SuffixWorkspace,
    tree: &SuccinctSuffixTree,
    rmq: &RmqIndex,
    sa: &dyn SaAccess,
    classic: bool,
) -> Result<Round1> {
    ws.expect_a1(A1Phase::InverseSuffixArray)?;
    let n = ws.n();
    let isa = ws.a1();
    let nodes = tree.node_count();
    let mut marked = BitVector::zeros(nodes);
    marked.set(1, true);
    let mut referred = BitVector::zeros(nodes);
    let mut b_f = BitVector::zeros(n);
    let mut b_r = BitVector::new();
    let mut d_bound = DBoundCounts {
        classic,
        ..Default::default()
    };
    let mut steps = 0;
    let mut next = 1;
    for j in 1..=n {
        let (mut v, s) = above_leaf(tree, isa.get(j) as usize);
        steps += s;
        while !marked.get(v) {
            marked.set(v, true);
            v = tree.parent_of(v);
            steps += 1;
        }
        if j != next {
            continue;
        }
        b_f.set(j, true);
        if v == 1 {
            b_r.push(false);
            d_bound.z_f += 1;
            next += 1;
            continue;
        }
        let depth = tree.str_depth(v, rmq, sa);
        let len = if classic { depth + 1 } else { depth };
        b_r.push(true);
        if len == 1 {
            d_bound.z_r1 += 1;
        } else {
            d_bound.z_r_long += 1;
        }
        if !referred.get(v) {
            referred.set(v, true);
            if depth == 1 {
                d_bound.v_r1 += 1;
            } else {
                d_bound.v_r_long += 1;
            }
        }
        next += len;
    }
    if next != n + 1 {
        return Err(Error::Invariant(format!("factors cover {} of {n} symbols", next - 1)));
    }
    Ok(Round1 {
        b_f,
        b_r,
        state: TraversalState {
            marked,
            referred: NodeMarkingVector::new(referred),
        },
        parent_steps: steps,
        d_bound,
    })
}

/// Second round: one `0` per referred-node event, then a `1`, for every
/// traversal. Returns `B_D` and the parent steps taken.
pub fn round2(
    ws: &SuffixWorkspace,
    tree: &SuccinctSuffixTree,
    state: &mut TraversalState,
    b_f: &BitVector,
) -> Result<(BitVector, usize)> {
    ws.expect_a1(A1Phase::InverseSuffixArray)?;
    let n = ws.n();
    let isa = ws.a1();
    state.reset();
    let mut b_d = BitVector::with_capacity(n + 2 * state.referred.count());
    let mut steps = 0;
    for j in 1..=n {
        let (mut v, s) = above_leaf(tree, isa.get(j) as usize);
        steps += s;
        while !state.marked.get(v) {
            state.marked.set(v, true);
            if state.referred.contains(v) {
                b_d.push(false);
            }
            v = tree.parent_of(v);
            steps += 1;
        }
        if b_f.get(j) && v != 1 {
            b_d.push(false);
        }
        b_d.push(true);
    }
    Ok((b_d, steps))
}

/// Walks `B_D` block by block, yielding `(j, zeros in block j)`.
fn blocks(b_d: &BitVector) -> impl Iterator<Item = (usize, usize)> + '_ {
    let mut j = 0;
    let mut zeros = 0;
    b_d.iter().filter_map(move |bit| {
        if bit {
            j += 1;
            let out = (j, zeros);
            zeros = 0;
            Some(out)
        } else {
            zeros += 1;
            None
        }
    })
}

/// Keeps `ISA[j]` only for traversals with at least one `B_D` event and
/// packs the survivors against the right end of `A_1`. Returns their count.
pub fn sparsify_isa(ws: &mut SuffixWorkspace, b_d: &BitVector) -> Result<usize> {
    ws.expect_a1(A1Phase::InverseSuffixArray)?;
    let n = ws.n();
    let a1 = ws.a1_mut();
    let mut write = n;
    let mut j = n;
    let mut zeros = 0;
    let mut seen_one = false;
    // right to left: a block is closed by its 1, so zeros follow it here
    for i in (1..=b_d.len()).rev() {
        if b_d.get(i) {
            if seen_one {
                if zeros > 0 {
                    a1.set(write, a1.get(j));
                    write -= 1;
                }
                j -= 1;
            }
            seen_one = true;
            zeros = 0;
        } else {
            zeros += 1;
        }
    }
    if zeros > 0 {
        a1.set(write, a1.get(j));
        write -= 1;
    }
    ws.set_a1_phase(A1Phase::SparseIsa);
    Ok(n - write)
}

/// Third round: replays only the surviving traversals and writes `D`
/// (ranks of referred nodes among `V_r`) from the left of `A_1`. Returns
/// `|D|` and the parent steps taken.
pub fn round3(
    ws: &mut SuffixWorkspace,
    tree: &SuccinctSuffixTree,
    state: &mut TraversalState,
    b_d: &BitVector,
    b_f: &BitVector,
    survivors: usize,
) -> Result<(usize, usize)> {
    ws.expect_a1(A1Phase::SparseIsa)?;
    let n = ws.n();
    state.reset();
    let a1 = ws.a1_mut();
    let mut read = n - survivors + 1;
    let mut write = 1;
    let mut steps = 0;
    let overtake = |write: usize, read: usize| {
        Error::Invariant(format!("D cell {write} would overwrite unread ISA cell {read}"))
    };
    for (j, zeros) in blocks(b_d) {
        if zeros == 0 {
            continue;
        }
        let first = write;
        let (mut v, s) = above_leaf(tree, a1.get(read) as usize);
        steps += s;
        read += 1;
        while !state.marked.get(v) {
            state.marked.set(v, true);
            if let Some(r) = state.referred.nrank(v) {
                if write >= read {
                    return Err(overtake(write, read));
                }
                a1.set(write, r as u64);
                write += 1;
            }
            v = tree.parent_of(v);
            steps += 1;
        }
        if b_f.get(j) && v != 1 {
            let r = state
                .referred
                .nrank(v)
                .ok_or_else(|| Error::Invariant(format!("traversal {j} stopped at unreferred node {v}")))?;
            if write >= read {
                return Err(overtake(write, read));
            }
            a1.set(write, r as u64);
            write += 1;
        }
        if write - first != zeros {
            return Err(Error::Invariant(format!(
                "traversal {j} wrote {} entries, B_D expects {zeros}",
                write - first
            )));
        }
    }
    ws.set_a1_phase(A1Phase::DArray);
    Ok((write - 1, steps))
}

/// Resolves referred entries of `D` into referred positions, in passes of
/// `|A_2|` referred nodes each, then packs them to the left of `A_1`.
/// Returns the number of referencing factors and the number of passes.
pub fn match_referred(
    ws: &mut SuffixWorkspace,
    b_d: &BitVector,
    referred_nodes: usize,
    d_len: usize,
) -> Result<(usize, usize)> {
    ws.expect_a1(A1Phase::DArray)?;
    ws.expect_a2(A2Phase::Free)?;
    ws.set_a2_phase(A2Phase::Matching);
    let (a1, a2) = ws.arenas_mut();
    let chunk = a2.len();
    let passes = referred_nodes.div_ceil(chunk);
    let mut resolved = BitVector::zeros(d_len);
    for pass in 0..passes {
        let lo = pass * chunk + 1;
        let hi = ((pass + 1) * chunk).min(referred_nodes);
        a2.fill(0);
        let mut i = 0;
        for (k, zeros) in blocks(b_d) {
            for _ in 0..zeros {
                i += 1;
                if resolved.get(i) {
                    continue;
                }
                let t = a1.get(i) as usize;
                if t < lo || t > hi {
                    continue;
                }
                let slot = t - lo + 1;
                match a2.get(slot) {
                    0 => a2.set(slot, k as u64),
                    pos => {
                        a1.set(i, pos);
                        resolved.set(i, true);
                    }
                }
            }
        }
    }
    let mut z_r = 0;
    for i in 1..=d_len {
        if resolved.get(i) {
            z_r += 1;
            a1.set(z_r, a1.get(i));
        }
    }
    ws.set_a2_phase(A2Phase::Free);
    ws.set_a1_phase(A1Phase::ReferredPositions);
    Ok((z_r, passes))
}

/// An LZ77 factorization with constant-time factor access.
#[derive(Clone, Debug)]
pub struct Lz77Factorization {
    b_f: RankSelect,
    b_r: RankSelect,
    refs: PackedArray,
    classic: bool,
}

impl Lz77Factorization {
    pub fn n(&self) -> usize {
        self.b_f.len()
    }

    pub fn z(&self) -> usize {
        self.b_f.count_ones()
    }

    /// Number of referencing factors.
    pub fn z_r(&self) -> usize {
        self.b_r.count_ones()
    }

    pub fn classic(&self) -> bool {
        self.classic
    }

    pub fn factor_starts(&self) -> &BitVector {
        self.b_f.bit_vector()
    }

    pub fn referencing(&self) -> &BitVector {
        self.b_r.bit_vector()
    }

    /// Start and length of factor `x`.
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

    /// Referred position of factor `x`, `None` for a free letter.
    pub fn referred_position(&self, x: usize) -> Result<Option<usize>> {
        self.bounds(x)?;
        Ok(self
            .b_r
            .get(x)
            .then(|| self.refs.get(self.b_r.rank1_at(x)) as usize))
    }

    pub fn factor(&self, x: usize, text: &TextBuffer) -> Result<Factor> {
        let (start, len) = self.bounds(x)?;
        let reference = self.referred_position(x)?;
        let literal = match (reference, self.classic) {
            (None, _) => Some(text.get(start)),
            (Some(_), true) => Some(text.get(start + len - 1)),
            (Some(_), false) => None,
        };
        Ok(Factor {
            start,
            len,
            reference,
            literal,
        })
    }

    pub fn factors(&self, text: &TextBuffer) -> Vec<Factor> {
        (1..=self.z()).map(|x| self.factor(x, text).unwrap()).collect()
    }

    /// Bits of `B_f`, `B_r` and the referred positions.
    pub fn bits(&self) -> usize {
        self.b_f.total_bits() + self.b_r.total_bits() + self.refs.bits()
    }

    /// Shifts the first referred position by one, for negative controls.
    #[doc(hidden)]
    pub fn inject_fault(&mut self) {
        if !self.refs.is_empty() {
            let v = self.refs.get(1);
            self.refs.set(1, if v > 1 { v - 1 } else { v + 1 });
        }
    }
}

/// Counters and intermediate values recorded while factorizing.
#[derive(Clone, Debug, Default)]
pub struct Lz77Trace {
    pub n: usize,
    pub node_count: usize,
    pub parent_steps: [usize; 3],
    pub referred_nodes: usize,
    pub z_r: usize,
    pub d_len: usize,
    pub survivors: usize,
    pub passes: usize,
    pub d_bound: DBoundCounts,
    pub b_d: BitVector,
    /// `D` as pre-order numbers.
    pub d: Vec<usize>,
    /// Survivors of the sparsified inverse suffix array, left to right.
    pub sparse_isa: Vec<usize>,
    pub space: crate::audit::SpaceReport,
}

/// LZ77 factorization of `text` (sentinel included), in the non-classic
/// form by default or the classic form with fresh characters.
pub fn factorize_lz77(text: &TextBuffer, eps: Epsilon, classic: bool) -> Result<Lz77Factorization> {
    factorize_lz77_traced(text, eps, classic).map(|(f, _)| f)
}

pub fn factorize_lz77_traced(
    text: &TextBuffer,
    eps: Epsilon,
    classic: bool,
) -> Result<(Lz77Factorization, Lz77Trace)> {
    use crate::audit::{SpaceCategory::*, SpaceReport};

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
    space.add("inversion visited", BitVectors, invert_in_place(&mut ws)?);

    let sampled = build_inverse_access(&mut ws)?;
    space.add("inverse sample markers", BitVectors, sampled.marker_bits());
    let r1 = {
        let sa = sampled.access(&ws)?;
        round1(&ws, &tree, &rmq, &sa, classic)?
    };
    drop(sampled);
    ws.set_a2_phase(A2Phase::Free);
    let Round1 {
        b_f,
        b_r,
        mut state,
        parent_steps: steps1,
        d_bound,
    } = r1;
    space.add("B_f", BitVectors, RankSelect::new(b_f.clone()).total_bits());
    space.add("B_r", BitVectors, RankSelect::new(b_r.clone()).total_bits());
    space.add("node marks", BitVectors, state.marked.bits());
    space.add("M_Vr", BitVectors, state.referred.bits());

    let (b_d, steps2) = round2(&ws, &tree, &mut state, &b_f)?;
    space.add("B_D", BitVectors, b_d.bits());
    let survivors = sparsify_isa(&mut ws, &b_d)?;
    let sparse_isa = (n - survivors + 1..=n).map(|i| ws.a1().get(i) as usize).collect();
    let (d_len, steps3) = round3(&mut ws, &tree, &mut state, &b_d, &b_f, survivors)?;
    let d = (1..=d_len)
        .map(|i| state.referred.select(ws.a1().get(i) as usize))
        .collect::<Result<Vec<_>>>()?;
    let referred_nodes = state.referred.count();
    if d_len != referred_nodes + d_bound.z_r() {
        return Err(Error::Invariant(format!(
            "|D| = {d_len} but |V_r| + z_r = {}",
            referred_nodes + d_bound.z_r()
        )));
    }
    let (z_r, passes) = match_referred(&mut ws, &b_d, referred_nodes, d_len)?;
    space.add("resolved-entry vector", BitVectors, d_len);
    if z_r != b_r.count_ones() {
        return Err(Error::Invariant(format!(
            "{z_r} referred entries for {} referencing factors",
            b_r.count_ones()
        )));
    }

    let a1 = ws.a1();
    let mut refs = PackedArray::new(z_r, a1.width());
    for x in 1..=z_r {
        refs.set(x, a1.get(x));
    }
    let fact = Lz77Factorization {
        b_f: RankSelect::new(b_f),
        b_r: RankSelect::new(b_r),
        refs,
        classic,
    };
    let trace = Lz77Trace {
        n,
        node_count: tree.node_count(),
        parent_steps: [steps1, steps2, steps3],
        referred_nodes,
        z_r,
        d_len,
        survivors,
        passes,
        d_bound,
        b_d,
        d,
        sparse_isa,
        space,
    };
    Ok((fact, trace))
}
