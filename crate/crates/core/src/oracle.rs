//! Brute-force reference implementations.
//!
//! Everything here works on plain symbol slices (sentinel included) with
//! straightforward quadratic algorithms and pointer structures, and shares
//! no algorithmic code with the rest of the crate.

use std::collections::BTreeMap;

pub type OracleFactor = crate::Factor;

fn common_prefix(s: &[u32], a: usize, b: usize) -> usize {
    s[a..].iter().zip(&s[b..]).take_while(|(x, y)| x == y).count()
}

/// Greedy LZ77 by scanning all earlier starting positions. References are
/// the leftmost occurrence of the longest previous match; in classic mode
/// every referencing factor carries one extra fresh symbol.
pub fn naive_lz77(s: &[u32], classic: bool) -> Vec<OracleFactor> {
    let n = s.len();
    let mut out = Vec::new();
    let mut i = 0;
    while i < n {
        let (mut best, mut at) = (0, 0);
        for p in 0..i {
            let l = common_prefix(s, p, i);
            if l > best {
                best = l;
                at = p;
            }
        }
        let f = if best == 0 {
            OracleFactor {
                start: i + 1,
                len: 1,
                reference: None,
                literal: Some(s[i]),
            }
        } else if classic {
            OracleFactor {
                start: i + 1,
                len: best + 1,
                reference: Some(at + 1),
                literal: Some(s[i + best]),
            }
        } else {
            OracleFactor {
                start: i + 1,
                len: best,
                reference: Some(at + 1),
                literal: None,
            }
        };
        i += f.len;
        out.push(f);
    }
    out
}

/// LZ78 with an explicit pointer trie. Node `k` of the trie is factor `k`.
pub fn naive_lz78(s: &[u32]) -> Vec<OracleFactor> {
    let mut children: Vec<BTreeMap<u32, usize>> = vec![BTreeMap::new()];
    let mut out = Vec::new();
    let mut i = 0;
    while i < s.len() {
        let mut node = 0;
        let mut len = 0;
        while i + len < s.len() {
            match children[node].get(&s[i + len]) {
                Some(&c) => {
                    node = c;
                    len += 1;
                }
                None => break,
            }
        }
        let c = s[i + len];
        let id = children.len();
        children.push(BTreeMap::new());
        children[node].insert(c, id);
        out.push(OracleFactor {
            start: i + 1,
            len: len + 1,
            reference: (node > 0).then_some(node),
            literal: Some(c),
        });
        i += len + 1;
    }
    out
}

/// A node of the explicit suffix tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleNode {
    pub parent: usize,
    pub children: Vec<usize>,
    pub depth: usize,
    pub str_depth: usize,
    pub leaf_label: Option<usize>,
    /// Smallest leaf label in the subtree.
    pub min_label: usize,
    /// Number of leaves in the subtree.
    pub leaves: usize,
}

/// Suffix array, inverse, LCP and explicit suffix tree, all 1-based.
/// `nodes[0]` is a placeholder; the root is node 1 and nodes are numbered
/// in pre-order with children in lexicographic order.
#[derive(Clone, Debug)]
pub struct OracleStructures {
    pub sa: Vec<usize>,
    pub isa: Vec<usize>,
    pub lcp: Vec<usize>,
    pub nodes: Vec<OracleNode>,
}

impl OracleStructures {
    pub fn node_count(&self) -> usize {
        self.nodes.len() - 1
    }

    /// Node of the leaf for suffix `j`.
    pub fn leaf_of(&self, j: usize) -> usize {
        (1..self.nodes.len())
            .find(|&v| self.nodes[v].leaf_label == Some(j))
            .unwrap()
    }
}

pub fn naive_suffix_structures(s: &[u32]) -> OracleStructures {
    let n = s.len();
    let mut sa: Vec<usize> = (1..=n).collect();
    sa.sort_by(|&a, &b| s[a - 1..].cmp(&s[b - 1..]));
    let mut isa = vec![0; n];
    for (r, &p) in sa.iter().enumerate() {
        isa[p - 1] = r + 1;
    }
    let mut lcp = vec![0; n];
    for i in 1..n {
        lcp[i] = common_prefix(s, sa[i - 1] - 1, sa[i] - 1);
    }

    let placeholder = OracleNode {
        parent: 0,
        children: Vec::new(),
        depth: 0,
        str_depth: 0,
        leaf_label: None,
        min_label: usize::MAX,
        leaves: 0,
    };
    let mut nodes = vec![placeholder.clone()];
    // (lo, hi) ranges of sa, 0-based inclusive, with parent id
    let mut stack = vec![(0usize, n - 1, 0usize)];
    while let Some((lo, hi, parent)) = stack.pop() {
        let id = nodes.len();
        let depth = if parent == 0 { 0 } else { nodes[parent].depth + 1 };
        let mut node = OracleNode {
            parent,
            depth,
            ..placeholder.clone()
        };
        if parent != 0 {
            nodes[parent].children.push(id);
        }
        if lo == hi {
            node.str_depth = n - sa[lo] + 1;
            node.leaf_label = Some(sa[lo]);
            nodes.push(node);
            continue;
        }
        let ell = common_prefix(s, sa[lo] - 1, sa[hi] - 1);
        node.str_depth = ell;
        nodes.push(node);
        let mut groups = Vec::new();
        let mut start = lo;
        for k in lo + 1..=hi + 1 {
            if k > hi || s[sa[k] - 1 + ell] != s[sa[start] - 1 + ell] {
                groups.push((start, k - 1, id));
                start = k;
            }
        }
        stack.extend(groups.into_iter().rev());
    }
    for v in (1..nodes.len()).rev() {
        if let Some(l) = nodes[v].leaf_label {
            nodes[v].min_label = l;
            nodes[v].leaves = 1;
        }
        let p = nodes[v].parent;
        if p != 0 {
            nodes[p].min_label = nodes[p].min_label.min(nodes[v].min_label);
            nodes[p].leaves += nodes[v].leaves;
        }
    }
    OracleStructures {
        sa,
        isa,
        lcp,
        nodes,
    }
}

/// Single-round leaf-to-top LZ77 with the whole explicit tree at hand;
/// referred positions are the smallest leaf label below the stop node.
pub fn easy_lz77(s: &[u32], classic: bool) -> Vec<OracleFactor> {
    let st = naive_suffix_structures(s);
    easy_lz77_with(s, &st, classic)
}

pub fn easy_lz77_with(s: &[u32], st: &OracleStructures, classic: bool) -> Vec<OracleFactor> {
    let n = s.len();
    let mut leaf = vec![0; n + 1];
    for v in 1..st.nodes.len() {
        if let Some(l) = st.nodes[v].leaf_label {
            leaf[l] = v;
        }
    }
    let mut marked = vec![false; st.nodes.len()];
    marked[1] = true;
    let mut out = Vec::new();
    let mut next = 1;
    for j in 1..=n {
        let mut v = leaf[j];
        while !marked[v] {
            marked[v] = true;
            v = st.nodes[v].parent;
        }
        if j != next {
            continue;
        }
        let f = if v == 1 {
            OracleFactor {
                start: j,
                len: 1,
                reference: None,
                literal: Some(s[j - 1]),
            }
        } else {
            let d = st.nodes[v].str_depth;
            let len = if classic { d + 1 } else { d };
            OracleFactor {
                start: j,
                len,
                reference: Some(st.nodes[v].min_label),
                literal: classic.then(|| s[j + len - 2]),
            }
        };
        next += f.len;
        out.push(f);
    }
    out
}

/// Expands an LZ77 factor list back into symbols.
pub fn expand_lz77(factors: &[OracleFactor]) -> Vec<u32> {
    let mut out: Vec<u32> = Vec::new();
    for f in factors {
        match f.reference {
            None => out.push(f.literal.unwrap()),
            Some(r) => {
                let copy = if f.literal.is_some() { f.len - 1 } else { f.len };
                for k in 0..copy {
                    out.push(out[r - 1 + k]);
                }
                if let Some(c) = f.literal {
                    out.push(c);
                }
            }
        }
    }
    out
}

/// Expands an LZ78 factor list back into symbols.
pub fn expand_lz78(factors: &[OracleFactor]) -> Vec<u32> {
    let mut out = Vec::new();
    for f in factors {
        let mut chain = vec![f.literal.unwrap()];
        let mut r = f.reference;
        while let Some(y) = r {
            chain.push(factors[y - 1].literal.unwrap());
            r = factors[y - 1].reference;
        }
        out.extend(chain.into_iter().rev());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> Vec<u32> {
        s.bytes()
            .map(|b| if b == b'$' { 0 } else { b as u32 + 1 })
            .collect()
    }

    fn cuts(f: &[OracleFactor]) -> Vec<usize> {
        f.iter().map(|f| f.len).collect()
    }

    #[test]
    fn lz77_examples() {
        let s = sym("aaabaabaaabaa$");
        let f = naive_lz77(&s, false);
        assert_eq!(cuts(&f), vec![1, 2, 1, 5, 4, 1]);
        let refs: Vec<_> = f.iter().filter_map(|f| f.reference).collect();
        assert_eq!(refs, vec![1, 2, 3]);
        assert_eq!(easy_lz77(&s, false), f);
        assert_eq!(expand_lz77(&f), s);

        let c = naive_lz77(&s, true);
        assert_eq!(cuts(&c), vec![1, 3, 6, 4]);
        assert_eq!(easy_lz77(&s, true), c);
        assert_eq!(expand_lz77(&c), s);

        assert_eq!(cuts(&naive_lz77(&sym("aaaa$"), false)), vec![1, 3, 1]);
    }

    #[test]
    fn lz78_examples() {
        let s = sym("aaabaabaaabaa$");
        let f = naive_lz78(&s);
        assert_eq!(cuts(&f), vec![1, 2, 1, 3, 3, 2, 2]);
        let refs: Vec<_> = f.iter().map(|f| f.reference.unwrap_or(0)).collect();
        assert_eq!(refs, vec![0, 1, 0, 2, 2, 3, 1]);
        assert_eq!(expand_lz78(&f), s);
        assert_eq!(cuts(&naive_lz78(&sym("aaaaaaa$"))), vec![1, 2, 3, 2]);
        assert!(naive_lz78(&sym("ab$")).iter().all(|f| f.reference.is_none()));
    }

    #[test]
    fn structures() {
        let st = naive_suffix_structures(&sym("aba$"));
        assert_eq!(st.sa, vec![4, 3, 1, 2]);
        assert_eq!(st.lcp, vec![0, 0, 1, 0]);
        let st = naive_suffix_structures(&sym("$"));
        assert_eq!(st.sa, vec![1]);
        assert_eq!(st.node_count(), 1);
        let st = naive_suffix_structures(&sym("aaabaabaaabaa$"));
        assert_eq!(st.node_count(), 21);
        assert_eq!(st.lcp, vec![0, 0, 1, 2, 6, 2, 5, 5, 1, 4, 4, 0, 3, 3]);
        assert_eq!(st.nodes[1].leaves, 14);
        assert_eq!(st.nodes[5].str_depth, 2);
        assert_eq!(st.nodes[10].str_depth, 5);
        assert_eq!(st.nodes[14].str_depth, 4);
    }
}
