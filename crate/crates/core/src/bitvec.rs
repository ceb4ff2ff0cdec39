//! Plain bit vectors, a two-level rank/select directory, and fixed-width
//! packed integer arrays.
//!
//! All positions are 1-based: `rank1(i)` counts ones in `B[1..=i]` and
//! `select1(k)` returns the position of the `k`-th one.

use crate::error::{range, Error, Result};

const WORD: usize = 64;
const WORDS_PER_SUPER: usize = 8;

/// A growable, mutable sequence of bits.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn zeros(len: usize) -> Self {
        BitVector {
            words: vec![0; len.div_ceil(WORD)],
            len,
        }
    }

    pub fn with_capacity(bits: usize) -> Self {
        BitVector {
            words: Vec::with_capacity(bits.div_ceil(WORD)),
            len: 0,
        }
    }

    /// Parses a string of `0`/`1` characters.
    pub fn from_bit_str(s: &str) -> Result<Self> {
        let mut b = BitVector::with_capacity(s.len());
        for c in s.chars() {
            match c {
                '0' => b.push(false),
                '1' => b.push(true),
                _ => return Err(Error::InvalidInput(format!("not a bit: {c:?}"))),
            }
        }
        Ok(b)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            self.words[self.len / WORD] |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    /// Bit at 1-based position `i`.
    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i >= 1 && i <= self.len, "bit {i} of {}", self.len);
        let p = i - 1;
        (self.words[p / WORD] >> (p % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, bit: bool) {
        debug_assert!(i >= 1 && i <= self.len, "bit {i} of {}", self.len);
        let p = i - 1;
        let mask = 1u64 << (p % WORD);
        if bit {
            self.words[p / WORD] |= mask;
        } else {
            self.words[p / WORD] &= !mask;
        }
    }

    pub fn clear_all(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (1..=self.len).map(move |i| self.get(i))
    }

    /// Storage cost in bits (the payload only).
    pub fn bits(&self) -> usize {
        self.len
    }
}

impl std::fmt::Debug for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "BitVector({self})")
    }
}

impl std::fmt::Display for BitVector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromIterator<bool> for BitVector {
    fn from_iter<I: IntoIterator<Item = bool>>(iter: I) -> Self {
        let mut b = BitVector::new();
        for bit in iter {
            b.push(bit);
        }
        b
    }
}

/// A bit vector frozen together with its rank/select directory.
///
/// The directory stores an absolute count per 512-bit superblock and a
/// 16-bit relative count per 64-bit word; rank is two lookups plus a
/// popcount, select is a binary search over superblocks followed by a scan
/// of at most eight words.
#[derive(Clone, Debug)]
pub struct RankSelect {
    bits: BitVector,
    supers: Vec<u64>,
    blocks: Vec<u16>,
    ones: usize,
}

/// Attaches a rank/select directory to `b`.
pub fn build_index(b: BitVector) -> Result<RankSelect> {
    if b.is_empty() {
        return Err(Error::InvalidInput("cannot index an empty bit vector".into()));
    }
    Ok(RankSelect::new(b))
}

impl RankSelect {
    /// Like [`build_index`] but accepts empty vectors (every query is then
    /// out of range).
    pub fn new(bits: BitVector) -> Self {
        let nwords = bits.words.len();
        let mut supers = Vec::with_capacity(nwords / WORDS_PER_SUPER + 1);
        let mut blocks = Vec::with_capacity(nwords + 1);
        let mut total = 0u64;
        let mut base = 0u64;
        for w in 0..=nwords {
            if w % WORDS_PER_SUPER == 0 {
                supers.push(total);
                base = total;
            }
            blocks.push((total - base) as u16);
            if w < nwords {
                total += bits.words[w].count_ones() as u64;
            }
        }
        RankSelect {
            bits,
            supers,
            blocks,
            ones: total as usize,
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.bits.len - self.ones
    }

    pub fn bit_vector(&self) -> &BitVector {
        &self.bits
    }

    pub fn into_bit_vector(self) -> BitVector {
        self.bits
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        self.bits.get(i)
    }

    /// Number of ones in `B[1..=i]`; `i = 0` gives 0.
    pub fn rank1(&self, i: usize) -> Result<usize> {
        if i > self.len() {
            return Err(range(i, self.len()));
        }
        Ok(self.rank1_at(i))
    }

    pub fn rank0(&self, i: usize) -> Result<usize> {
        Ok(i - self.rank1(i)?)
    }

    /// Position of the `k`-th one.
    pub fn select1(&self, k: usize) -> Result<usize> {
        if k == 0 || k > self.ones {
            return Err(range(k, self.ones));
        }
        Ok(self.select1_at(k))
    }

    /// Position of the `k`-th zero.
    pub fn select0(&self, k: usize) -> Result<usize> {
        let zeros = self.count_zeros();
        if k == 0 || k > zeros {
            return Err(range(k, zeros));
        }
        Ok(self.select0_at(k))
    }

    #[inline]
    pub(crate) fn rank1_at(&self, i: usize) -> usize {
        debug_assert!(i <= self.len());
        let w = i / WORD;
        let r = i % WORD;
        let mut c = self.supers[w / WORDS_PER_SUPER] as usize + self.blocks[w] as usize;
        if r > 0 {
            c += (self.bits.words[w] & ((1u64 << r) - 1)).count_ones() as usize;
        }
        c
    }

    #[inline]
    pub(crate) fn rank0_at(&self, i: usize) -> usize {
        i - self.rank1_at(i)
    }

    pub(crate) fn select1_at(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.ones);
        // last superblock with fewer than k ones before it
        let s = self.supers.partition_point(|&c| (c as usize) < k) - 1;
        let base = self.supers[s] as usize;
        let first = s * WORDS_PER_SUPER;
        let last = (first + WORDS_PER_SUPER).min(self.bits.words.len());
        let mut w = first;
        while w + 1 < last && base + (self.blocks[w + 1] as usize) < k {
            w += 1;
        }
        let before = base + self.blocks[w] as usize;
        w * WORD + select_in_word(self.bits.words[w], k - before) + 1
    }

    pub(crate) fn select0_at(&self, k: usize) -> usize {
        debug_assert!(k >= 1 && k <= self.count_zeros());
        let zeros_before_super = |s: usize| s * WORDS_PER_SUPER * WORD - self.supers[s] as usize;
        let (mut lo, mut hi) = (0usize, self.supers.len());
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if zeros_before_super(mid) < k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let s = lo;
        let base = zeros_before_super(s);
        let first = s * WORDS_PER_SUPER;
        let last = (first + WORDS_PER_SUPER).min(self.bits.words.len());
        let zeros_before_word = |w: usize| (w - first) * WORD - self.blocks[w] as usize;
        let mut w = first;
        while w + 1 < last && base + zeros_before_word(w + 1) < k {
            w += 1;
        }
        let before = base + zeros_before_word(w);
        w * WORD + select_in_word(!self.bits.words[w], k - before) + 1
    }

    /// Payload bits of the underlying vector.
    pub fn payload_bits(&self) -> usize {
        self.bits.len
    }

    /// Bits spent on the rank/select directory.
    pub fn directory_bits(&self) -> usize {
        self.supers.len() * 64 + self.blocks.len() * 16
    }

    pub fn total_bits(&self) -> usize {
        self.payload_bits() + self.directory_bits()
    }
}

/// 0-based offset of the `k`-th (1-based) set bit in `w`.
#[inline]
fn select_in_word(mut w: u64, k: usize) -> usize {
    debug_assert!(k >= 1 && k <= w.count_ones() as usize);
    for _ in 1..k {
        w &= w - 1;
    }
    w.trailing_zeros() as usize
}

/// Fixed-width unsigned integers packed into 64-bit words, 1-based.
#[derive(Clone, PartialEq, Eq)]
pub struct PackedArray {
    data: Vec<u64>,
    width: u32,
    len: usize,
}

impl PackedArray {
    pub fn new(len: usize, width: u32) -> Self {
        assert!((1..=64).contains(&width), "cell width {width}");
        let words = (len * width as usize).div_ceil(WORD);
        PackedArray {
            data: vec![0; words],
            width,
            len,
        }
    }

    /// Smallest width that can hold every value in `0..=max`.
    pub fn width_for(max: u64) -> u32 {
        (64 - max.leading_zeros()).max(1)
    }

    pub fn from_values(values: &[u64]) -> Self {
        let max = values.iter().copied().max().unwrap_or(0);
        let mut a = PackedArray::new(values.len(), Self::width_for(max));
        for (i, &v) in values.iter().enumerate() {
            a.set(i + 1, v);
        }
        a
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn max_value(&self) -> u64 {
        if self.width == 64 {
            u64::MAX
        } else {
            (1u64 << self.width) - 1
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        debug_assert!(i >= 1 && i <= self.len, "cell {i} of {}", self.len);
        let bit = (i - 1) * self.width as usize;
        let (w, off) = (bit / WORD, bit % WORD);
        let mask = self.max_value();
        let lo = self.data[w] >> off;
        if off + self.width as usize <= WORD {
            lo & mask
        } else {
            (lo | (self.data[w + 1] << (WORD - off))) & mask
        }
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: u64) {
        debug_assert!(i >= 1 && i <= self.len, "cell {i} of {}", self.len);
        debug_assert!(value <= self.max_value(), "{value} exceeds {} bits", self.width);
        let bit = (i - 1) * self.width as usize;
        let (w, off) = (bit / WORD, bit % WORD);
        let mask = self.max_value();
        self.data[w] = (self.data[w] & !(mask << off)) | (value << off);
        if off + self.width as usize > WORD {
            let spill = WORD - off;
            let hi_mask = mask >> spill;
            self.data[w + 1] = (self.data[w + 1] & !hi_mask) | (value >> spill);
        }
    }

    pub fn fill(&mut self, value: u64) {
        for i in 1..=self.len {
            self.set(i, value);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        (1..=self.len).map(move |i| self.get(i))
    }

    pub fn to_vec(&self) -> Vec<u64> {
        self.iter().collect()
    }

    /// Storage cost: `len * width`.
    pub fn bits(&self) -> usize {
        self.len * self.width as usize
    }
}

impl std::fmt::Debug for PackedArray {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_list().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn naive_rank1(b: &BitVector, i: usize) -> usize {
        (1..=i).filter(|&p| b.get(p)).count()
    }

    fn naive_select(b: &BitVector, bit: bool, k: usize) -> Option<usize> {
        (1..=b.len()).filter(|&p| b.get(p) == bit).nth(k - 1)
    }

    #[test]
    fn running_example_partition_vector() {
        let rs = build_index(BitVector::from_bit_str("01001011011111011111").unwrap()).unwrap();
        assert_eq!(rs.rank1(20).unwrap(), 14);
        assert_eq!(rs.select1(2).unwrap(), 5);
        assert_eq!(rs.rank0(5).unwrap(), 3);
        // traversal j = 2 spans D[j_b..=j_e]
        let j_b = rs.rank0(rs.select1(1).unwrap()).unwrap() + 1;
        let j_e = rs.rank0(rs.select1(2).unwrap()).unwrap();
        assert_eq!((j_b, j_e), (2, 3));
    }

    #[test]
    fn small_cases() {
        let zeros = build_index(BitVector::zeros(8)).unwrap();
        assert_eq!(zeros.rank1(8).unwrap(), 0);
        assert!(zeros.select1(1).is_err());

        let alt = build_index(BitVector::from_bit_str("10101").unwrap()).unwrap();
        assert_eq!(alt.select1(2).unwrap(), 3);

        let one = build_index(BitVector::from_bit_str("1").unwrap()).unwrap();
        assert_eq!(one.rank1(1).unwrap(), 1);
        assert_eq!(one.select1(1).unwrap(), 1);

        let b = build_index(BitVector::from_bit_str("0011").unwrap()).unwrap();
        assert_eq!(b.select0(2).unwrap(), 2);
        assert_eq!(b.rank1(4).unwrap(), 2);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_index(BitVector::new()), Err(Error::InvalidInput(_))));
        let b = build_index(BitVector::from_bit_str("0110").unwrap()).unwrap();
        assert!(matches!(b.rank1(5), Err(Error::Range { .. })));
        assert!(b.select1(0).is_err());
        assert!(b.select1(3).is_err());
        assert!(b.select0(3).is_err());
    }

    #[test]
    fn random_vectors_match_linear_scan() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let len = rng.gen_range(1..=2048);
            let density: f64 = rng.gen();
            let b: BitVector = (0..len).map(|_| rng.gen_bool(density)).collect();
            let rs = RankSelect::new(b.clone());
            // spot-check a handful of positions per vector against a scan
            for _ in 0..4 {
                let i = rng.gen_range(0..=len);
                assert_eq!(rs.rank1_at(i), naive_rank1(&b, i));
            }
            if rs.count_ones() > 0 {
                let k = rng.gen_range(1..=rs.count_ones());
                assert_eq!(Some(rs.select1_at(k)), naive_select(&b, true, k));
            }
            if rs.count_zeros() > 0 {
                let k = rng.gen_range(1..=rs.count_zeros());
                assert_eq!(Some(rs.select0_at(k)), naive_select(&b, false, k));
            }
        }
    }

    proptest! {
        #[test]
        fn rank_select_identities(bits in proptest::collection::vec(any::<bool>(), 1..1500)) {
            let b: BitVector = bits.iter().copied().collect();
            let rs = build_index(b).unwrap();
            for i in 0..=rs.len() {
                prop_assert_eq!(rs.rank0(i).unwrap() + rs.rank1(i).unwrap(), i);
            }
            for k in 1..=rs.count_ones() {
                let p = rs.select1(k).unwrap();
                prop_assert!(rs.get(p));
                prop_assert_eq!(rs.rank1(p).unwrap(), k);
            }
            for k in 1..=rs.count_zeros() {
                let p = rs.select0(k).unwrap();
                prop_assert!(!rs.get(p));
                prop_assert_eq!(rs.rank0(p).unwrap(), k);
            }
        }

        #[test]
        fn packed_array_holds_values(width in 1u32..=64, raw in proptest::collection::vec(any::<u64>(), 1..300)) {
            let mut a = PackedArray::new(raw.len(), width);
            let vals: Vec<u64> = raw.iter().map(|v| v & a.max_value()).collect();
            for (i, &v) in vals.iter().enumerate() {
                a.set(i + 1, v);
            }
            prop_assert_eq!(a.to_vec(), vals);
        }
    }
}
