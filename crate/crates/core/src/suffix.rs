//! Text buffer, the two-arena workspace, suffix array construction,
//! in-place inversion, sampled inverse access, LCP and RMQ.

use std::fmt;

use crate::bitvec::{BitVector, PackedArray, RankSelect};
use crate::epsilon::Epsilon;
use crate::error::{range, state, Error, Result};

/// Read-only input text over an integer alphabet, terminated by a unique
/// sentinel.
///
/// Symbol `0` is the sentinel; user symbols are stored shifted by one so
/// that the sentinel compares strictly smallest.
#[derive(Clone, PartialEq, Eq)]
pub struct TextBuffer {
    symbols: Vec<u32>,
    sigma: usize,
}

impl TextBuffer {
    /// Byte input; the sentinel is appended.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut symbols: Vec<u32> = bytes.iter().map(|&b| b as u32 + 1).collect();
        symbols.push(0);
        let sigma = bytes.iter().max().map_or(1, |&m| m as usize + 2);
        TextBuffer { symbols, sigma }
    }

    /// Integer-alphabet input; the sentinel is appended.
    pub fn from_symbols(input: &[u32]) -> Result<Self> {
        if input.contains(&u32::MAX) {
            return Err(Error::InvalidInput(
                "symbol 0xFFFFFFFF is reserved".into(),
            ));
        }
        let mut symbols: Vec<u32> = input.iter().map(|&s| s + 1).collect();
        symbols.push(0);
        let sigma = input.iter().max().map_or(1, |&m| m as usize + 2);
        Ok(TextBuffer { symbols, sigma })
    }

    /// Internal symbols that already carry the sentinel as their last entry.
    pub fn with_sentinel(symbols: Vec<u32>) -> Result<Self> {
        match symbols.split_last() {
            None => return Err(Error::InvalidInput("empty text".into())),
            Some((&last, rest)) => {
                if last != 0 || rest.contains(&0) {
                    return Err(Error::InvalidInput(
                        "the text must end in a unique sentinel 0".into(),
                    ));
                }
            }
        }
        let sigma = *symbols.iter().max().unwrap() as usize + 1;
        Ok(TextBuffer { symbols, sigma })
    }

    /// Length `n` including the sentinel.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Alphabet bound: every symbol is `< sigma`.
    pub fn sigma(&self) -> usize {
        self.sigma
    }

    /// Symbol at 1-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> u32 {
        self.symbols[i - 1]
    }

    /// 0-based view of all symbols, sentinel included.
    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// Symbols without the sentinel, mapped back to input values.
    pub fn original(&self) -> impl Iterator<Item = u32> + '_ {
        self.symbols[..self.len() - 1].iter().map(|&s| s - 1)
    }

    pub fn bits(&self) -> usize {
        self.len() * PackedArray::width_for(self.sigma as u64 - 1) as usize
    }
}

impl fmt::Display for TextBuffer {
    /// Renders byte-range symbols as characters and the sentinel as `$`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &s in &self.symbols {
            match s {
                0 => f.write_str("$")?,
                1..=256 => write!(f, "{}", char::from((s - 1) as u8))?,
                _ => write!(f, "<{}>", s - 1)?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TextBuffer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TextBuffer({self})")
    }
}

/// What the main arena currently holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum A1Phase {
    Empty,
    SuffixArray,
    InverseSuffixArray,
    SparseIsa,
    DArray,
    ReferredPositions,
    Witnesses,
    ReferredIndices,
}

/// What the helper arena currently holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum A2Phase {
    Free,
    SampledInverse,
    Matching,
}

/// The arenas `A_1` (n cells) and `A_2` (⌊εn⌋ cells), each cell
/// `⌈lg(n+1)⌉` bits wide. Both are allocated once; algorithms reinterpret
/// their contents phase by phase.
#[derive(Clone, Debug)]
pub struct SuffixWorkspace {
    a1: PackedArray,
    a2: PackedArray,
    epsilon: Epsilon,
    a1_phase: A1Phase,
    a2_phase: A2Phase,
}

impl SuffixWorkspace {
    pub fn new(n: usize, epsilon: Epsilon) -> Self {
        let width = cell_width(n);
        // a zero-cell helper arena is unusable; tiny inputs get one cell
        let a2_cells = epsilon.floor_times(n).max(1);
        SuffixWorkspace {
            a1: PackedArray::new(n, width),
            a2: PackedArray::new(a2_cells, width),
            epsilon,
            a1_phase: A1Phase::Empty,
            a2_phase: A2Phase::Free,
        }
    }

    pub fn n(&self) -> usize {
        self.a1.len()
    }

    pub fn epsilon(&self) -> Epsilon {
        self.epsilon
    }

    pub fn a1(&self) -> &PackedArray {
        &self.a1
    }

    pub fn a2(&self) -> &PackedArray {
        &self.a2
    }

    pub fn a1_phase(&self) -> A1Phase {
        self.a1_phase
    }

    pub fn a2_phase(&self) -> A2Phase {
        self.a2_phase
    }

    pub(crate) fn a1_mut(&mut self) -> &mut PackedArray {
        &mut self.a1
    }

    pub(crate) fn arenas_mut(&mut self) -> (&mut PackedArray, &mut PackedArray) {
        (&mut self.a1, &mut self.a2)
    }

    pub(crate) fn set_a1_phase(&mut self, p: A1Phase) {
        self.a1_phase = p;
    }

    pub(crate) fn set_a2_phase(&mut self, p: A2Phase) {
        self.a2_phase = p;
    }

    pub(crate) fn expect_a1(&self, p: A1Phase) -> Result<()> {
        if self.a1_phase == p {
            Ok(())
        } else {
            Err(state(format!("A1 {p:?}"), format!("A1 {:?}", self.a1_phase)))
        }
    }

    pub(crate) fn expect_a2(&self, p: A2Phase) -> Result<()> {
        if self.a2_phase == p {
            Ok(())
        } else {
            Err(state(format!("A2 {p:?}"), format!("A2 {:?}", self.a2_phase)))
        }
    }

    /// Bits occupied by `A_1` plus `A_2`.
    pub fn arena_bits(&self) -> usize {
        self.a1.bits() + self.a2.bits()
    }

}

/// `⌈lg(n+1)⌉`, the width of one arena cell.
pub fn cell_width(n: usize) -> u32 {
    PackedArray::width_for(n as u64)
}

/// Random access to suffix array values (1-based ranks and positions).
pub trait SaAccess {
    fn sa(&self, i: usize) -> usize;
}

/// Direct view of a suffix array resident in `A_1`.
pub struct ResidentSa<'a>(&'a PackedArray);

impl<'a> ResidentSa<'a> {
    pub fn new(ws: &'a SuffixWorkspace) -> Result<Self> {
        ws.expect_a1(A1Phase::SuffixArray)?;
        Ok(ResidentSa(&ws.a1))
    }
}

impl SaAccess for ResidentSa<'_> {
    #[inline]
    fn sa(&self, i: usize) -> usize {
        self.0.get(i) as usize
    }
}

impl SaAccess for [usize] {
    fn sa(&self, i: usize) -> usize {
        self[i - 1]
    }
}

impl SaAccess for Vec<usize> {
    fn sa(&self, i: usize) -> usize {
        self[i - 1]
    }
}

/// Fills `A_1` with the suffix array of `text`.
pub fn build_suffix_array(text: &TextBuffer, ws: &mut SuffixWorkspace) -> Result<()> {
    if ws.n() != text.len() {
        return Err(Error::InvalidInput(format!(
            "workspace sized for {} but text has {} symbols",
            ws.n(),
            text.len()
        )));
    }
    ws.expect_a1(A1Phase::Empty)?;
    let s = text.symbols();
    if s.last() != Some(&0) || s[..s.len() - 1].contains(&0) {
        return Err(Error::InvalidInput("sentinel violated".into()));
    }
    let (compact, sigma) = compact_alphabet(s, text.sigma());
    let mut sa = vec![0u32; s.len()];
    sais(compact.as_deref().unwrap_or(s), sigma, &mut sa);
    for (i, &p) in sa.iter().enumerate() {
        ws.a1.set(i + 1, p as u64 + 1);
    }
    ws.a1_phase = A1Phase::SuffixArray;
    Ok(())
}

/// Ranks the alphabet down to `0..σ'` when it is much larger than the text.
fn compact_alphabet(s: &[u32], sigma: usize) -> (Option<Vec<u32>>, usize) {
    if sigma <= s.len() + 1 {
        return (None, sigma);
    }
    let mut distinct = s.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    let mapped = s
        .iter()
        .map(|c| distinct.binary_search(c).unwrap() as u32)
        .collect();
    (Some(mapped), distinct.len())
}

const EMPTY: u32 = u32::MAX;

/// Suffix array by induced sorting. `s` must end in a unique 0 and every
/// symbol must be `< k`. Positions in `sa` are 0-based.
fn sais(s: &[u32], k: usize, sa: &mut [u32]) {
    let n = s.len();
    debug_assert_eq!(sa.len(), n);
    if n == 1 {
        sa[0] = 0;
        return;
    }
    // S-type flags; the sentinel is S-type
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut counts = vec![0u32; k];
    for &c in s {
        counts[c as usize] += 1;
    }
    let heads = |counts: &[u32]| {
        let mut acc = 0u32;
        counts
            .iter()
            .map(|&c| {
                let h = acc;
                acc += c;
                h
            })
            .collect::<Vec<u32>>()
    };
    let tails = |counts: &[u32]| {
        let mut acc = 0u32;
        counts
            .iter()
            .map(|&c| {
                acc += c;
                acc
            })
            .collect::<Vec<u32>>()
    };

    let induce = |sa: &mut [u32]| {
        let mut h = heads(&counts);
        for i in 0..n {
            let j = sa[i];
            if j != EMPTY && j > 0 && !stype[j as usize - 1] {
                let c = s[j as usize - 1] as usize;
                sa[h[c] as usize] = j - 1;
                h[c] += 1;
            }
        }
        let mut t = tails(&counts);
        for i in (0..n).rev() {
            let j = sa[i];
            if j != EMPTY && j > 0 && stype[j as usize - 1] {
                let c = s[j as usize - 1] as usize;
                t[c] -= 1;
                sa[t[c] as usize] = j - 1;
            }
        }
    };

    // sort LMS substrings
    sa.fill(EMPTY);
    let mut t = tails(&counts);
    for i in 1..n {
        if is_lms(i) {
            let c = s[i] as usize;
            t[c] -= 1;
            sa[t[c] as usize] = i as u32;
        }
    }
    induce(sa);

    let mut m = 0;
    for i in 0..n {
        if is_lms(sa[i] as usize) {
            sa[m] = sa[i];
            m += 1;
        }
    }

    // name LMS substrings
    let lms_equal = |a: usize, b: usize| -> bool {
        if a == n - 1 || b == n - 1 {
            return a == b;
        }
        let mut d = 0;
        loop {
            if s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
                return false;
            }
            if d > 0 && (is_lms(a + d) || is_lms(b + d)) {
                return is_lms(a + d) && is_lms(b + d);
            }
            d += 1;
        }
    };
    sa[m..].fill(EMPTY);
    let mut names = 0u32;
    let mut prev: Option<usize> = None;
    for i in 0..m {
        let pos = sa[i] as usize;
        if prev.is_none_or(|p| !lms_equal(p, pos)) {
            names += 1;
            prev = Some(pos);
        }
        sa[m + pos / 2] = names - 1;
    }
    let mut j = n;
    for i in (m..n).rev() {
        if sa[i] != EMPTY {
            j -= 1;
            sa[j] = sa[i];
        }
    }

    // sort the reduced string
    {
        let (head, tail) = sa.split_at_mut(n - m);
        let reduced = &tail[..];
        let sa1 = &mut head[..m];
        if (names as usize) < m {
            let copy = reduced.to_vec();
            sais(&copy, names as usize, sa1);
        } else {
            for (i, &c) in reduced.iter().enumerate() {
                sa1[c as usize] = i as u32;
            }
        }
    }
    // map reduced ranks back to LMS positions
    let mut j = n - m;
    for i in 1..n {
        if is_lms(i) {
            sa[j] = i as u32;
            j += 1;
        }
    }
    for i in 0..m {
        sa[i] = sa[n - m + sa[i] as usize];
    }
    sa[m..].fill(EMPTY);

    let mut t = tails(&counts);
    for i in (0..m).rev() {
        let p = sa[i];
        sa[i] = EMPTY;
        let c = s[p as usize] as usize;
        t[c] -= 1;
        sa[t[c] as usize] = p;
    }
    induce(sa);
}

/// Overwrites the suffix array in `A_1` with its inverse, using only an
/// `n`-bit visited vector beside the arena. Returns the bits of scratch
/// space used.
pub fn invert_in_place(ws: &mut SuffixWorkspace) -> Result<usize> {
    ws.expect_a1(A1Phase::SuffixArray)?;
    let n = ws.n();
    let a = &mut ws.a1;
    let mut visited = BitVector::zeros(n);
    for start in 1..=n {
        if visited.get(start) {
            continue;
        }
        let mut prev = start as u64;
        let mut cur = a.get(start) as usize;
        while cur != start {
            let next = a.get(cur) as usize;
            a.set(cur, prev);
            visited.set(cur, true);
            prev = cur as u64;
            cur = next;
        }
        a.set(start, prev);
        visited.set(start, true);
    }
    ws.a1_phase = A1Phase::InverseSuffixArray;
    Ok(visited.bits())
}

/// Samples of the inverse permutation of the array resident in `A_1`,
/// stored in `A_2`.
///
/// Along every cycle of length `L` of the resident permutation, `⌊L/t⌋`
/// evenly spaced elements are sampled (`t = ⌈1/ε⌉`); each sample stores the
/// previous sample on its cycle. Recovering a predecessor walks forward to
/// the next sample, jumps back one sample and walks forward again, which
/// costs fewer than `2t` steps.
#[derive(Clone, Debug)]
pub struct SampledInverse {
    sampled: RankSelect,
    stride: usize,
    samples: usize,
}

/// Stores the inverse-access samples in `A_2`.
pub fn build_inverse_access(ws: &mut SuffixWorkspace) -> Result<SampledInverse> {
    ws.expect_a1(A1Phase::InverseSuffixArray)?;
    ws.expect_a2(A2Phase::Free)?;
    let n = ws.n();
    let stride = ws.epsilon.inverse_ceil();
    let (a1, a2) = ws.arenas_mut();
    let mut visited = BitVector::zeros(n);
    let mut sampled = BitVector::zeros(n);
    // first pass: choose sample positions per cycle
    for start in 1..=n {
        if visited.get(start) {
            continue;
        }
        let mut len = 0;
        let mut x = start;
        loop {
            visited.set(x, true);
            len += 1;
            x = a1.get(x) as usize;
            if x == start {
                break;
            }
        }
        let count = len / stride;
        if count == 0 {
            continue;
        }
        let mut next_offset = 0;
        let mut k = 0;
        let mut x = start;
        for off in 0..len {
            if k < count && off == next_offset {
                sampled.set(x, true);
                k += 1;
                next_offset = k * len / count;
            }
            x = a1.get(x) as usize;
        }
    }
    let sampled = RankSelect::new(sampled);
    if sampled.count_ones() > a2.len() {
        return Err(Error::Invariant(format!(
            "{} samples exceed the {} helper cells",
            sampled.count_ones(),
            a2.len()
        )));
    }
    // second pass: link every sample to the previous sample on its cycle
    visited.clear_all();
    for start in 1..=n {
        if visited.get(start) || !sampled.get(start) {
            continue;
        }
        let mut last = start;
        let mut x = a1.get(start) as usize;
        visited.set(start, true);
        loop {
            if sampled.get(x) {
                a2.set(sampled.rank1_at(x), last as u64);
                visited.set(x, true);
                if x == start {
                    break;
                }
                last = x;
            }
            x = a1.get(x) as usize;
        }
    }
    let samples = sampled.count_ones();
    ws.a2_phase = A2Phase::SampledInverse;
    Ok(SampledInverse {
        sampled,
        stride,
        samples,
    })
}

impl SampledInverse {
    pub fn stride(&self) -> usize {
        self.stride
    }

    pub fn sample_count(&self) -> usize {
        self.samples
    }

    pub fn access<'a>(&'a self, ws: &'a SuffixWorkspace) -> Result<InverseAccess<'a>> {
        ws.expect_a1(A1Phase::InverseSuffixArray)?;
        ws.expect_a2(A2Phase::SampledInverse)?;
        Ok(InverseAccess {
            perm: &ws.a1,
            back: &ws.a2,
            sampled: &self.sampled,
        })
    }

    /// Bits of the sample-marking vector with its directory.
    pub fn marker_bits(&self) -> usize {
        self.sampled.total_bits()
    }
}

/// Suffix array access through the inverse resident in `A_1`.
pub struct InverseAccess<'a> {
    perm: &'a PackedArray,
    back: &'a PackedArray,
    sampled: &'a RankSelect,
}

impl InverseAccess<'_> {
    /// Predecessor of `i` under the resident permutation, with the number of
    /// permutation steps taken.
    pub fn inverse_with_steps(&self, i: usize) -> (usize, usize) {
        let mut steps = 0;
        let mut x = i;
        loop {
            if self.sampled.get(x) {
                break;
            }
            let y = self.perm.get(x) as usize;
            steps += 1;
            if y == i {
                return (x, steps);
            }
            x = y;
        }
        let mut y = self.back.get(self.sampled.rank1_at(x)) as usize;
        loop {
            let z = self.perm.get(y) as usize;
            steps += 1;
            if z == i {
                return (y, steps);
            }
            y = z;
        }
    }
}

impl SaAccess for InverseAccess<'_> {
    #[inline]
    fn sa(&self, i: usize) -> usize {
        self.inverse_with_steps(i).0
    }
}

/// `values[i]` is the longest common prefix of the lexicographically `i`-th
/// and `(i-1)`-th suffixes; `values[1]` is 0.
#[derive(Clone, Debug)]
pub struct LcpArray {
    values: PackedArray,
}

impl LcpArray {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        self.values.get(i) as usize
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.values.iter().map(|v| v as usize).collect()
    }

    pub fn bits(&self) -> usize {
        self.values.bits()
    }
}

/// Computes the LCP array from random suffix-array access. The permuted
/// array is formed in place and then reordered by cycle-walking; the only
/// scratch is an `n`-bit visited vector.
pub fn build_lcp(text: &TextBuffer, sa: &dyn SaAccess) -> LcpArray {
    let n = text.len();
    let s = text.symbols();
    let mut values = PackedArray::new(n, cell_width(n));
    // phi: predecessor in suffix order, 0 for the smallest suffix
    let mut prev = 0u64;
    for i in 1..=n {
        let p = sa.sa(i);
        values.set(p, prev);
        prev = p as u64;
    }
    let mut l = 0usize;
    for j in 1..=n {
        let phi = values.get(j) as usize;
        if phi == 0 {
            values.set(j, 0);
            l = 0;
            continue;
        }
        while s[j - 1 + l] == s[phi - 1 + l] {
            l += 1;
        }
        values.set(j, l as u64);
        l = l.saturating_sub(1);
    }
    // reorder: lcp[i] = plcp[sa[i]]
    let mut visited = BitVector::zeros(n);
    for start in 1..=n {
        if visited.get(start) {
            continue;
        }
        let saved = values.get(start);
        let mut cur = start;
        loop {
            visited.set(cur, true);
            let next = sa.sa(cur);
            if next == start {
                values.set(cur, saved);
                break;
            }
            values.set(cur, values.get(next));
            cur = next;
        }
    }
    LcpArray { values }
}

const RMQ_BLOCK: usize = 32;

/// Range-minimum queries over an owned [`LcpArray`]: per-block minima with a
/// sparse table on top, and linear scans inside the two boundary blocks.
#[derive(Clone, Debug)]
pub struct RmqIndex {
    lcp: LcpArray,
    table: Vec<Vec<u32>>,
}

impl RmqIndex {
    pub fn new(lcp: LcpArray) -> Self {
        let n = lcp.len();
        let blocks = n.div_ceil(RMQ_BLOCK);
        let mut level0 = Vec::with_capacity(blocks);
        for b in 0..blocks {
            let lo = b * RMQ_BLOCK + 1;
            let hi = ((b + 1) * RMQ_BLOCK).min(n);
            level0.push(scan_min(&lcp, lo, hi) as u32);
        }
        let mut table = vec![level0];
        let mut span = 1;
        while 2 * span <= blocks {
            let prev = table.last().unwrap();
            let next: Vec<u32> = (0..=blocks - 2 * span)
                .map(|b| {
                    let (l, r) = (prev[b], prev[b + span]);
                    if lcp.get(r as usize) < lcp.get(l as usize) {
                        r
                    } else {
                        l
                    }
                })
                .collect();
            table.push(next);
            span *= 2;
        }
        RmqIndex { lcp, table }
    }

    pub fn lcp(&self) -> &LcpArray {
        &self.lcp
    }

    /// Leftmost position of a minimum of `LCP[i..=j]`, `2 <= i <= j <= n`.
    pub fn rmq(&self, i: usize, j: usize) -> Result<usize> {
        let n = self.lcp.len();
        if i < 2 || i > n {
            return Err(range(i, n));
        }
        if j < i || j > n {
            return Err(range(j, n));
        }
        Ok(self.rmq_at(i, j))
    }

    pub(crate) fn rmq_at(&self, i: usize, j: usize) -> usize {
        let (bi, bj) = ((i - 1) / RMQ_BLOCK, (j - 1) / RMQ_BLOCK);
        if bi == bj {
            return scan_min(&self.lcp, i, j);
        }
        let mut best = scan_min(&self.lcp, i, (bi + 1) * RMQ_BLOCK);
        let mut consider = |p: usize| {
            if self.lcp.get(p) < self.lcp.get(best) {
                best = p;
            }
        };
        if bi + 1 < bj {
            let (lo, hi) = (bi + 1, bj - 1);
            let k = usize::BITS as usize - 1 - (hi - lo + 1).leading_zeros() as usize;
            consider(self.table[k][lo] as usize);
            consider(self.table[k][hi + 1 - (1 << k)] as usize);
        }
        consider(scan_min(&self.lcp, bj * RMQ_BLOCK + 1, j));
        best
    }

    /// Minimum value of `LCP[i..=j]`.
    #[inline]
    pub fn min_value(&self, i: usize, j: usize) -> usize {
        self.lcp.get(self.rmq_at(i, j))
    }

    /// Bits of the block/sparse-table directory (the LCP array excluded).
    pub fn directory_bits(&self) -> usize {
        self.table.iter().map(|l| l.len() * 32).sum()
    }
}

fn scan_min(lcp: &LcpArray, lo: usize, hi: usize) -> usize {
    let mut best = lo;
    for p in lo + 1..=hi {
        if lcp.get(p) < lcp.get(best) {
            best = p;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn brute_sa(t: &TextBuffer) -> Vec<usize> {
        let s = t.symbols();
        let mut sa: Vec<usize> = (1..=s.len()).collect();
        sa.sort_by(|&a, &b| s[a - 1..].cmp(&s[b - 1..]));
        sa
    }

    fn brute_lcp(t: &TextBuffer, sa: &[usize]) -> Vec<usize> {
        let s = t.symbols();
        let mut out = vec![0];
        for w in sa.windows(2) {
            let (a, b) = (&s[w[0] - 1..], &s[w[1] - 1..]);
            out.push(a.iter().zip(b).take_while(|(x, y)| x == y).count());
        }
        out
    }

    fn sa_of(t: &TextBuffer) -> SuffixWorkspace {
        let mut ws = SuffixWorkspace::new(t.len(), Epsilon::ONE);
        build_suffix_array(t, &mut ws).unwrap();
        ws
    }

    fn running() -> TextBuffer {
        TextBuffer::from_bytes(b"aaabaabaaabaa")
    }

    #[test]
    fn suffix_array_examples() {
        let t = TextBuffer::from_bytes(b"aba");
        assert_eq!(sa_of(&t).a1().to_vec(), vec![4, 3, 1, 2]);
        assert_eq!(
            sa_of(&running()).a1().to_vec(),
            vec![14, 13, 12, 8, 1, 9, 5, 2, 10, 6, 3, 11, 7, 4]
        );
        assert_eq!(sa_of(&TextBuffer::from_bytes(b"")).a1().to_vec(), vec![1]);
    }

    #[test]
    fn suffix_array_rejects_bad_workspace() {
        let t = running();
        let mut ws = SuffixWorkspace::new(3, Epsilon::ONE);
        assert!(matches!(
            build_suffix_array(&t, &mut ws),
            Err(Error::InvalidInput(_))
        ));
        let mut ws = sa_of(&t);
        assert!(matches!(build_suffix_array(&t, &mut ws), Err(Error::State { .. })));
    }

    #[test]
    fn sentinel_validation() {
        assert!(TextBuffer::with_sentinel(vec![1, 0, 2, 0]).is_err());
        assert!(TextBuffer::with_sentinel(vec![1, 2]).is_err());
        assert!(TextBuffer::with_sentinel(vec![]).is_err());
        assert!(TextBuffer::from_symbols(&[1, u32::MAX]).is_err());
        assert_eq!(running().to_string(), "aaabaabaaabaa$");
    }

    #[test]
    fn large_alphabet_is_compacted() {
        let t = TextBuffer::from_symbols(&[4_000_000_000, 7, 4_000_000_000, 12]).unwrap();
        assert_eq!(sa_of(&t).a1().iter().map(|x| x as usize).collect::<Vec<_>>(), brute_sa(&t));
    }

    #[test]
    fn inversion_examples() {
        let t = TextBuffer::from_bytes(b"aba");
        let mut ws = sa_of(&t);
        invert_in_place(&mut ws).unwrap();
        assert_eq!(ws.a1().to_vec(), vec![3, 4, 2, 1]);
        assert_eq!(ws.a1_phase(), A1Phase::InverseSuffixArray);
        assert!(invert_in_place(&mut ws).is_err());

        let mut ws = sa_of(&running());
        invert_in_place(&mut ws).unwrap();
        assert_eq!(
            ws.a1().to_vec(),
            vec![5, 8, 11, 14, 7, 10, 13, 4, 6, 9, 12, 3, 2, 1]
        );
    }

    #[test]
    fn inversion_of_identity() {
        // SA of a strictly decreasing text is the identity
        let t = TextBuffer::from_bytes(b"dcba");
        let mut ws = sa_of(&t);
        assert_eq!(ws.a1().to_vec(), vec![5, 4, 3, 2, 1]);
        let mut ws2 = SuffixWorkspace::new(5, Epsilon::ONE);
        for i in 1..=5 {
            ws2.a1_mut().set(i, i as u64);
        }
        ws2.set_a1_phase(A1Phase::SuffixArray);
        invert_in_place(&mut ws2).unwrap();
        assert_eq!(ws2.a1().to_vec(), vec![1, 2, 3, 4, 5]);
        invert_in_place(&mut ws).unwrap();
    }

    fn workspace_with_perm(perm: &[usize], eps: Epsilon) -> SuffixWorkspace {
        let mut ws = SuffixWorkspace::new(perm.len(), eps);
        for (i, &p) in perm.iter().enumerate() {
            ws.a1_mut().set(i + 1, p as u64);
        }
        ws.set_a1_phase(A1Phase::InverseSuffixArray);
        ws
    }

    #[test]
    fn sampled_inverse_examples() {
        let ws0 = workspace_with_perm(&[3, 4, 2, 1], Epsilon::ONE);
        let mut ws = ws0.clone();
        let inv = build_inverse_access(&mut ws).unwrap();
        assert_eq!(inv.access(&ws).unwrap().sa(3), 1);
        assert!(build_inverse_access(&mut ws).is_err());

        let mut ws = workspace_with_perm(&[1, 2, 3, 4, 5, 6], Epsilon::new(1, 3).unwrap());
        let inv = build_inverse_access(&mut ws).unwrap();
        let acc = inv.access(&ws).unwrap();
        for i in 1..=6 {
            assert_eq!(acc.sa(i), i);
        }

        // epsilon = 1 samples everything: one step per query
        let mut ws = workspace_with_perm(&[5, 8, 11, 14, 7, 10, 13, 4, 6, 9, 12, 3, 2, 1], Epsilon::ONE);
        let inv = build_inverse_access(&mut ws).unwrap();
        assert_eq!(inv.sample_count(), 14);
        let acc = inv.access(&ws).unwrap();
        for i in 1..=14 {
            assert_eq!(acc.inverse_with_steps(i).1, 1);
        }
    }

    #[test]
    fn sampled_inverse_random_permutations() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for round in 0..1000 {
            let n = rng.gen_range(1..=4096);
            let mut perm: Vec<usize> = (1..=n).collect();
            for i in (1..n).rev() {
                perm.swap(i, rng.gen_range(0..=i));
            }
            let eps = [(1, 8), (1, 2), (1, 1)][round % 3];
            let eps = Epsilon::new(eps.0, eps.1).unwrap();
            let mut ws = workspace_with_perm(&perm, eps);
            let inv = build_inverse_access(&mut ws).unwrap();
            assert!(inv.sample_count() <= ws.a2().len());
            let acc = inv.access(&ws).unwrap();
            let mut full = vec![0; n];
            for (i, &p) in perm.iter().enumerate() {
                full[p - 1] = i + 1;
            }
            let bound = 2 * eps.inverse_ceil();
            for _ in 0..32 {
                let i = rng.gen_range(1..=n);
                let (v, steps) = acc.inverse_with_steps(i);
                assert_eq!(v, full[i - 1]);
                assert!(steps <= bound, "{steps} steps > {bound}");
            }
        }
    }

    #[test]
    fn lcp_examples() {
        let t = TextBuffer::from_bytes(b"aba");
        let ws = sa_of(&t);
        let lcp = build_lcp(&t, &ResidentSa::new(&ws).unwrap());
        assert_eq!(lcp.to_vec(), vec![0, 0, 1, 0]);

        let t = running();
        let ws = sa_of(&t);
        let lcp = build_lcp(&t, &ResidentSa::new(&ws).unwrap());
        assert_eq!(lcp.to_vec(), vec![0, 0, 1, 2, 6, 2, 5, 5, 1, 4, 4, 0, 3, 3]);

        let t = TextBuffer::from_bytes(b"abcdef");
        let ws = sa_of(&t);
        let lcp = build_lcp(&t, &ResidentSa::new(&ws).unwrap());
        assert!(lcp.to_vec().iter().all(|&v| v == 0));
    }

    #[test]
    fn lcp_through_sampled_inverse() {
        let t = running();
        let mut ws = sa_of(&t);
        invert_in_place(&mut ws).unwrap();
        let mut ws8 = SuffixWorkspace::new(t.len(), Epsilon::new(1, 8).unwrap());
        for i in 1..=t.len() {
            ws8.a1_mut().set(i, ws.a1().get(i));
        }
        ws8.set_a1_phase(A1Phase::InverseSuffixArray);
        let inv = build_inverse_access(&mut ws8).unwrap();
        let lcp = build_lcp(&t, &inv.access(&ws8).unwrap());
        assert_eq!(lcp.to_vec(), vec![0, 0, 1, 2, 6, 2, 5, 5, 1, 4, 4, 0, 3, 3]);
    }

    #[test]
    fn rmq_examples() {
        let t = running();
        let ws = sa_of(&t);
        let rmq = RmqIndex::new(build_lcp(&t, &ResidentSa::new(&ws).unwrap()));
        assert_eq!(rmq.rmq(3, 5).unwrap(), 3);
        assert_eq!(rmq.rmq(7, 7).unwrap(), 7);
        assert!(rmq.rmq(5, 4).is_err());
        assert!(rmq.rmq(1, 4).is_err());

        let t = TextBuffer::from_bytes(b"aba");
        let ws = sa_of(&t);
        let rmq = RmqIndex::new(build_lcp(&t, &ResidentSa::new(&ws).unwrap()));
        assert_eq!(rmq.rmq(2, 4).unwrap(), 2);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn suffix_structures_match_brute_force(bytes in proptest::collection::vec(0u8..4, 0..300)) {
            let t = TextBuffer::from_bytes(&bytes);
            let mut ws = sa_of(&t);
            let sa = brute_sa(&t);
            prop_assert_eq!(ws.a1().to_vec().iter().map(|&v| v as usize).collect::<Vec<_>>(), sa.clone());
            let lcp = build_lcp(&t, &ResidentSa::new(&ws).unwrap());
            prop_assert_eq!(lcp.to_vec(), brute_lcp(&t, &sa));
            let rmq = RmqIndex::new(lcp.clone());
            let n = t.len();
            if n >= 2 {
                for i in 2..=n {
                    for j in (i..=n).step_by(7) {
                        let expect = (i..=j).min_by_key(|&p| (lcp.get(p), p)).unwrap();
                        prop_assert_eq!(rmq.rmq(i, j).unwrap(), expect);
                    }
                }
            }
            invert_in_place(&mut ws).unwrap();
            for (i, &p) in sa.iter().enumerate() {
                prop_assert_eq!(ws.a1().get(p) as usize, i + 1);
            }
        }
    }
}
