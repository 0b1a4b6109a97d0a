use serde::Serialize;

/// A finite bounded poset given by its Hasse diagram. Nodes are numbered in
/// a linear extension: node 0 is the bottom, the last node is the top, and
/// every cover goes from a lower to a higher index.
#[derive(Debug, Clone)]
pub struct BoundedPoset {
    up: Vec<Vec<u32>>,
    down: Vec<Vec<u32>>,
}

/// Lengths of maximal chains, measured in cover steps from bottom to top.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GradednessReport {
    pub is_graded: bool,
    pub min_maximal_chain: usize,
    pub max_maximal_chain: usize,
    /// Every length attained by some maximal chain, ascending.
    pub chain_lengths: Vec<usize>,
    /// Node ids of a shortest maximal chain, bottom first.
    pub witness_short: Vec<usize>,
    /// Node ids of a longest maximal chain, bottom first.
    pub witness_long: Vec<usize>,
}

/// Lengths of maximal chains through a fixed node.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainLengthsThrough {
    pub node: usize,
    /// Cover lengths of maximal chains of the interval [bottom, node].
    pub below: Vec<usize>,
    /// Cover lengths of maximal chains of the interval [node, top].
    pub above: Vec<usize>,
    /// Cover lengths of maximal bottom-to-top chains passing through node.
    pub total: Vec<usize>,
}

pub(crate) fn mask_to_vec(mask: u128) -> Vec<usize> {
    (0..128).filter(|&i| mask >> i & 1 == 1).collect()
}

impl BoundedPoset {
    /// Build from upward covers. Panics if the numbering is not a linear
    /// extension with a unique bottom (0) and top (last).
    pub fn from_up_covers(up: Vec<Vec<u32>>) -> BoundedPoset {
        let n = up.len();
        assert!(n >= 1, "a bounded poset needs at least one node");
        let mut down = vec![Vec::new(); n];
        for (x, ys) in up.iter().enumerate() {
            for &y in ys {
                assert!((y as usize) > x && (y as usize) < n, "cover {x} -> {y} breaks the numbering");
                down[y as usize].push(x as u32);
            }
        }
        for d in &mut down {
            d.sort_unstable();
        }
        for x in 1..n {
            assert!(!down[x].is_empty(), "node {x} has no lower cover, bottom is not unique");
        }
        for (x, ups) in up.iter().enumerate().take(n - 1) {
            assert!(!ups.is_empty(), "node {x} has no upper cover, top is not unique");
        }
        BoundedPoset { up, down }
    }

    pub fn len(&self) -> usize {
        self.up.len()
    }

    pub fn is_empty(&self) -> bool {
        self.up.is_empty()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.up.len() - 1
    }

    /// Upper covers of `x`, ascending.
    pub fn up(&self, x: usize) -> &[u32] {
        &self.up[x]
    }

    /// Lower covers of `x`, ascending.
    pub fn down(&self, x: usize) -> &[u32] {
        &self.down[x]
    }

    pub fn cover_count(&self) -> usize {
        self.up.iter().map(Vec::len).sum()
    }

    /// All cover pairs `(lower, upper)` in lexicographic order.
    pub fn cover_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.up.iter().enumerate().flat_map(|(x, ys)| ys.iter().map(move |&y| (x, y as usize)))
    }

    pub fn atoms(&self) -> Vec<usize> {
        if self.len() == 1 {
            return vec![];
        }
        self.up[0].iter().map(|&y| y as usize).collect()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        if self.len() == 1 {
            return vec![];
        }
        self.down[self.top()].iter().map(|&y| y as usize).collect()
    }

    /// For each node, the set of cover lengths of maximal chains of
    /// [bottom, node], as a bit mask.
    pub fn lengths_from_bottom(&self) -> Vec<u128> {
        let mut out = vec![0u128; self.len()];
        out[0] = 1;
        for x in 1..self.len() {
            out[x] = self.down[x].iter().fold(0, |m, &c| m | shift(out[c as usize]));
        }
        out
    }

    /// For each node, the set of cover lengths of maximal chains of
    /// [node, top], as a bit mask.
    pub fn lengths_to_top(&self) -> Vec<u128> {
        let n = self.len();
        let mut out = vec![0u128; n];
        out[n - 1] = 1;
        for x in (0..n - 1).rev() {
            out[x] = self.up[x].iter().fold(0, |m, &c| m | shift(out[c as usize]));
        }
        out
    }

    pub fn gradedness(&self) -> GradednessReport {
        let from_bottom = self.lengths_from_bottom();
        let lengths = mask_to_vec(from_bottom[self.top()]);
        let min = lengths[0];
        let max = *lengths.last().unwrap();
        GradednessReport {
            is_graded: min == max,
            min_maximal_chain: min,
            max_maximal_chain: max,
            witness_short: self.chain_with(&from_bottom, self.top(), min),
            witness_long: self.chain_with(&from_bottom, self.top(), max),
            chain_lengths: lengths,
        }
    }

    pub fn chain_lengths_through(&self, node: usize) -> ChainLengthsThrough {
        let below = self.lengths_from_bottom()[node];
        let above = self.lengths_to_top()[node];
        let mut total = 0u128;
        for a in mask_to_vec(above) {
            total |= below << a;
        }
        ChainLengthsThrough {
            node,
            below: mask_to_vec(below),
            above: mask_to_vec(above),
            total: mask_to_vec(total),
        }
    }

    /// A maximal bottom-to-top chain of exactly `length` covers through
    /// `node`, if one exists.
    pub fn maximal_chain_through(&self, node: usize, length: usize) -> Option<Vec<usize>> {
        let from_bottom = self.lengths_from_bottom();
        let to_top = self.lengths_to_top();
        let below = mask_to_vec(from_bottom[node]).into_iter().find(|&b| {
            length >= b && to_top[node] >> (length - b) & 1 == 1
        })?;
        let mut chain = self.chain_with(&from_bottom, node, below);
        let mut x = node;
        let mut remaining = length - below;
        while remaining > 0 {
            x = self.up[x]
                .iter()
                .map(|&y| y as usize)
                .find(|&y| to_top[y] >> (remaining - 1) & 1 == 1)
                .expect("length mask guarantees a continuation");
            chain.push(x);
            remaining -= 1;
        }
        Some(chain)
    }

    /// Maximal chain of [bottom, x] with `len` covers, bottom first.
    fn chain_with(&self, from_bottom: &[u128], x: usize, len: usize) -> Vec<usize> {
        debug_assert!(from_bottom[x] >> len & 1 == 1);
        let mut chain = vec![x];
        let mut cur = x;
        let mut remaining = len;
        while remaining > 0 {
            cur = self.down[cur]
                .iter()
                .map(|&c| c as usize)
                .find(|&c| from_bottom[c] >> (remaining - 1) & 1 == 1)
                .expect("length mask guarantees a predecessor");
            chain.push(cur);
            remaining -= 1;
        }
        chain.reverse();
        chain
    }

    /// Nodes strictly above `x`, ascending.
    pub fn strict_upset(&self, x: usize) -> Vec<usize> {
        let mut seen = vec![false; self.len()];
        let mut stack: Vec<usize> = self.up[x].iter().map(|&y| y as usize).collect();
        let mut out = Vec::new();
        while let Some(y) = stack.pop() {
            if std::mem::replace(&mut seen[y], true) {
                continue;
            }
            out.push(y);
            stack.extend(self.up[y].iter().map(|&z| z as usize));
        }
        out.sort_unstable();
        out
    }

    /// Whether `x ≤ y`.
    pub fn leq(&self, x: usize, y: usize) -> bool {
        x == y || (x < y && self.strict_upset(x).binary_search(&y).is_ok())
    }
}

fn shift(mask: u128) -> u128 {
    assert!(mask >> 127 == 0, "chains longer than 127 covers are not supported");
    mask << 1
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Pentagon N5: 0 < a < b < 1, 0 < c < 1.
    fn pentagon() -> BoundedPoset {
        BoundedPoset::from_up_covers(vec![vec![1, 3], vec![2], vec![4], vec![4], vec![]])
    }

    /// Oracle: enumerate every maximal chain by DFS.
    fn all_chain_lengths(p: &BoundedPoset) -> Vec<usize> {
        fn go(p: &BoundedPoset, x: usize, len: usize, out: &mut Vec<usize>) {
            if x == p.top() {
                out.push(len);
            }
            for &y in p.up(x) {
                go(p, y as usize, len + 1, out);
            }
        }
        let mut out = Vec::new();
        go(p, 0, 0, &mut out);
        out.sort();
        out.dedup();
        out
    }

    #[test]
    fn pentagon_is_not_graded() {
        let p = pentagon();
        let g = p.gradedness();
        assert!(!g.is_graded);
        assert_eq!(g.chain_lengths, vec![2, 3]);
        assert_eq!(g.chain_lengths, all_chain_lengths(&p));
        assert_eq!(g.witness_short, vec![0, 3, 4]);
        assert_eq!(g.witness_long, vec![0, 1, 2, 4]);
        assert_eq!(p.atoms(), vec![1, 3]);
        assert_eq!(p.coatoms(), vec![2, 3]);
    }

    #[test]
    fn chains_through_a_node() {
        let p = pentagon();
        let c = p.chain_lengths_through(1);
        assert_eq!((c.below, c.above, c.total), (vec![1], vec![2], vec![3]));
        assert_eq!(p.maximal_chain_through(3, 2), Some(vec![0, 3, 4]));
        assert_eq!(p.maximal_chain_through(3, 3), None);
        assert_eq!(p.maximal_chain_through(2, 3), Some(vec![0, 1, 2, 4]));
    }

    #[test]
    fn upsets_and_order() {
        let p = pentagon();
        assert_eq!(p.strict_upset(0), vec![1, 2, 3, 4]);
        assert_eq!(p.strict_upset(1), vec![2, 4]);
        assert!(p.leq(1, 2) && !p.leq(3, 2) && p.leq(3, 3));
    }

    #[test]
    fn single_node() {
        let p = BoundedPoset::from_up_covers(vec![vec![]]);
        let g = p.gradedness();
        assert!(g.is_graded);
        assert_eq!(g.max_maximal_chain, 0);
        assert!(p.atoms().is_empty());
    }

    #[test]
    #[should_panic]
    fn rejects_two_bottoms() {
        BoundedPoset::from_up_covers(vec![vec![2], vec![2], vec![]]);
    }
}
