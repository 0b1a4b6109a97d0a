//! Set partitions, the partition lattice Π_n, the k-equal lattices Π_{n,k},
//! and their relation to racks of cycles.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::groups::{GroupSpec, Permutation};
use crate::lattice::{enumerate_subracks, BoundedPoset, LatticeError, LatticeOptions};
use crate::racks::{build_rack, RackError, RackFilter, RackOptions, RackSpec};
use crate::topology::{order_complex, reduced_homology, HomologyOptions, HomologyResult, TopologyError};

/// Largest ground set accepted.
pub const MAX_N: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PartitionError {
    #[error("parameters out of range: {0}")]
    Bounds(String),
    #[error("cannot parse partition {0:?}")]
    Parse(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error(transparent)]
    Rack(#[from] RackError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Topology(#[from] TopologyError),
}

/// A partition of `{0, .., n-1}` stored as its restricted growth string:
/// `block[i]` is the index of the block containing `i`, blocks numbered in
/// order of their smallest element.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetPartition {
    block: Vec<u8>,
}

impl SetPartition {
    pub fn discrete(n: usize) -> SetPartition {
        SetPartition { block: (0..n as u8).collect() }
    }

    pub fn one_block(n: usize) -> SetPartition {
        SetPartition { block: vec![0; n] }
    }

    /// Canonicalize an arbitrary labelling of blocks.
    pub fn from_labels(labels: &[usize]) -> SetPartition {
        let mut map: Vec<(usize, u8)> = Vec::new();
        let block = labels
            .iter()
            .map(|l| match map.iter().find(|(k, _)| k == l) {
                Some(&(_, b)) => b,
                None => {
                    let b = map.len() as u8;
                    map.push((*l, b));
                    b
                }
            })
            .collect();
        SetPartition { block }
    }

    /// Parse block notation such as `123|45|6` (1-based points).
    pub fn parse(text: &str) -> Result<SetPartition, PartitionError> {
        let bad = || PartitionError::Parse(text.to_string());
        let mut labels: Vec<Option<usize>> = Vec::new();
        for (b, part) in text.split('|').enumerate() {
            if part.is_empty() {
                return Err(bad());
            }
            for ch in part.chars() {
                let d = ch.to_digit(10).ok_or_else(bad)? as usize;
                if d == 0 {
                    return Err(bad());
                }
                if labels.len() < d {
                    labels.resize(d, None);
                }
                if labels[d - 1].replace(b).is_some() {
                    return Err(bad());
                }
            }
        }
        let labels: Vec<usize> = labels.into_iter().collect::<Option<_>>().ok_or_else(bad)?;
        Ok(SetPartition::from_labels(&labels))
    }

    pub fn n(&self) -> usize {
        self.block.len()
    }

    pub fn block_count(&self) -> usize {
        self.block.iter().map(|&b| b as usize + 1).max().unwrap_or(0)
    }

    /// Blocks in order of their smallest element, each ascending.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.block_count()];
        for (i, &b) in self.block.iter().enumerate() {
            out[b as usize].push(i);
        }
        out
    }

    pub fn block_of(&self, i: usize) -> usize {
        self.block[i] as usize
    }

    /// Whether every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &SetPartition) -> bool {
        let mut image = vec![u8::MAX; self.block_count()];
        self.block.iter().zip(&other.block).all(|(&a, &b)| {
            let slot = &mut image[a as usize];
            if *slot == u8::MAX {
                *slot = b;
            }
            *slot == b
        })
    }

    /// Coarsest common refinement.
    pub fn meet(&self, other: &SetPartition) -> SetPartition {
        let labels: Vec<usize> =
            self.block.iter().zip(&other.block).map(|(&a, &b)| a as usize * 256 + b as usize).collect();
        SetPartition::from_labels(&labels)
    }

    /// Finest common coarsening.
    pub fn join(&self, other: &SetPartition) -> SetPartition {
        let n = self.n();
        let mut uf = UnionFind::new(n);
        for p in [self, other] {
            for b in p.blocks() {
                for w in b.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
        }
        uf.partition()
    }

    /// Every block has size 1 or at least `k`.
    pub fn is_k_equal(&self, k: usize) -> bool {
        self.blocks().iter().all(|b| b.len() == 1 || b.len() >= k)
    }
}

impl fmt::Display for SetPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, b) in self.blocks().iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            for &x in b {
                write!(f, "{}", x + 1)?;
            }
        }
        Ok(())
    }
}

impl Serialize for SetPartition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            y = std::mem::replace(&mut self.0[y], r);
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }

    fn partition(&mut self) -> SetPartition {
        let labels: Vec<usize> = (0..self.0.len()).map(|i| self.find(i)).collect();
        SetPartition::from_labels(&labels)
    }
}

/// All partitions of an n-set, generated as restricted growth strings.
pub fn all_partitions(n: usize) -> Vec<SetPartition> {
    fn go(n: usize, cur: &mut Vec<u8>, max: u8, out: &mut Vec<SetPartition>) {
        if cur.len() == n {
            out.push(SetPartition { block: cur.clone() });
            return;
        }
        let limit = if cur.is_empty() { 0 } else { max + 1 };
        for b in 0..=limit {
            cur.push(b);
            go(n, cur, max.max(b), out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, &mut Vec::new(), 0, &mut out);
    out
}

/// Π_n or Π_{n,k} ordered by refinement. Elements are sorted by decreasing
/// number of blocks, so the discrete partition is node 0 and the one-block
/// partition is the last node.
#[derive(Debug, Clone)]
pub struct PartitionLattice {
    pub n: usize,
    pub k: usize,
    pub elements: Vec<SetPartition>,
    pub poset: BoundedPoset,
}

impl PartitionLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn index_of(&self, p: &SetPartition) -> Option<usize> {
        self.elements.iter().position(|q| q == p)
    }
}

fn sorted_elements(mut elements: Vec<SetPartition>) -> Vec<SetPartition> {
    elements.sort_by(|a, b| b.block_count().cmp(&a.block_count()).then_with(|| a.cmp(b)));
    elements
}

/// Π_n. Covers merge exactly two blocks.
pub fn partition_lattice(n: usize) -> Result<PartitionLattice, PartitionError> {
    if n == 0 || n > MAX_N {
        return Err(PartitionError::Bounds(format!("n = {n} must be in 1..={MAX_N}")));
    }
    let elements = sorted_elements(all_partitions(n));
    let index: std::collections::HashMap<&SetPartition, u32> =
        elements.iter().enumerate().map(|(i, p)| (p, i as u32)).collect();
    let up = elements
        .iter()
        .map(|p| {
            let blocks = p.blocks();
            let mut covers = Vec::new();
            for i in 0..blocks.len() {
                for j in i + 1..blocks.len() {
                    let labels: Vec<usize> =
                        (0..n).map(|x| if p.block_of(x) == j { i } else { p.block_of(x) }).collect();
                    covers.push(index[&SetPartition::from_labels(&labels)]);
                }
            }
            covers.sort_unstable();
            covers
        })
        .collect();
    Ok(PartitionLattice { n, k: 1, elements, poset: BoundedPoset::from_up_covers(up) })
}

/// Π_{n,k}: partitions whose blocks all have size 1 or at least k, as an
/// induced subposet of Π_n.
pub fn k_equal_lattice(n: usize, k: usize) -> Result<PartitionLattice, PartitionError> {
    if k == 0 || k > n || n > MAX_N {
        return Err(PartitionError::Bounds(format!("need 1 <= k <= n <= {MAX_N}, got n = {n}, k = {k}")));
    }
    let elements = sorted_elements(all_partitions(n).into_iter().filter(|p| p.is_k_equal(k)).collect());
    let m = elements.len();
    let words = m.div_ceil(64);
    // strict up-sets as bit rows, then remove everything reachable in two steps
    let mut above = vec![vec![0u64; words]; m];
    for i in 0..m {
        for j in i + 1..m {
            if elements[i].refines(&elements[j]) && elements[i] != elements[j] {
                above[i][j / 64] |= 1 << (j % 64);
            }
        }
    }
    let up = (0..m)
        .map(|i| {
            let mut covers = above[i].clone();
            for j in (0..m).filter(|&j| above[i][j / 64] >> (j % 64) & 1 == 1) {
                for w in 0..words {
                    covers[w] &= !above[j][w];
                }
            }
            (0..m).filter(|&j| covers[j / 64] >> (j % 64) & 1 == 1).map(|j| j as u32).collect()
        })
        .collect();
    Ok(PartitionLattice { n, k, elements, poset: BoundedPoset::from_up_covers(up) })
}

/// Orbits on `{0, .., n-1}` of the group generated by `perms`.
pub fn orbit_partition_map(n: usize, perms: &[&Permutation]) -> SetPartition {
    let mut uf = UnionFind::new(n);
    for p in perms {
        for i in 0..n {
            uf.union(i, p.image(i));
        }
    }
    uf.partition()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TranspositionIsoReport {
    pub n: usize,
    pub subracks: usize,
    pub partitions: usize,
    pub bijective: bool,
    pub order_preserving: bool,
    pub order_reflecting: bool,
    pub pass: bool,
}

/// Check that sending a set of transpositions to the components of the graph
/// they form is an isomorphism from the subrack lattice of the transpositions
/// of S_n onto Π_n.
pub fn transposition_rack_isomorphism(n: usize) -> Result<TranspositionIsoReport, PartitionError> {
    if !(2..=6).contains(&n) {
        return Err(PartitionError::Bounds(format!("n = {n} must be in 2..=6")));
    }
    let spec = RackSpec { group: GroupSpec::Symmetric(n), filter: RackFilter::Transpositions };
    let rack = build_rack(&spec, &RackOptions::default())?;
    let lattice = enumerate_subracks(&rack, &LatticeOptions::default())?;
    let pi = partition_lattice(n)?;
    let perms = rack.permutations().expect("built from permutations");
    let image: Vec<SetPartition> = lattice
        .nodes()
        .iter()
        .map(|q| orbit_partition_map(n, &q.iter().map(|i| &perms[i]).collect::<Vec<_>>()))
        .collect();
    let mut sorted = image.clone();
    sorted.sort();
    sorted.dedup();
    let mut all = pi.elements.clone();
    all.sort();
    let bijective = sorted.len() == image.len() && sorted == all;
    let mut order_preserving = true;
    let mut order_reflecting = true;
    for (a, qa) in lattice.nodes().iter().enumerate() {
        for (b, qb) in lattice.nodes().iter().enumerate() {
            let sub = qa.is_subset(*qb);
            let refines = image[a].refines(&image[b]);
            order_preserving &= !sub || refines;
            order_reflecting &= !refines || sub;
        }
    }
    Ok(TranspositionIsoReport {
        n,
        subracks: lattice.len(),
        partitions: pi.len(),
        bijective,
        order_preserving,
        order_reflecting,
        pass: bijective && order_preserving && order_reflecting,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberRecord {
    pub tau: SetPartition,
    /// Size of the largest subrack in the fiber.
    pub max_size: usize,
    pub unique_max: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FiberReport {
    pub n: usize,
    pub p: usize,
    pub rack_size: usize,
    pub subracks: usize,
    pub k_equal_size: usize,
    /// The orbit map sends the subrack lattice onto Π_{n,p}.
    pub image_is_k_equal_lattice: bool,
    pub order_preserving: bool,
    pub fibers: Vec<FiberRecord>,
    pub pass: bool,
}

fn is_odd_prime(p: usize) -> bool {
    p > 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// For the rack of p-cycles in A_n and the orbit map φ into Π_{n,p}: check
/// that φ maps onto Π_{n,p}, preserves order, and that for each proper τ the
/// proper subracks Q with φ(Q) ≤ τ have a unique maximum, namely the
/// p-cycles supported inside blocks of τ.
pub fn quillen_fiber_check(n: usize, p: usize) -> Result<FiberReport, PartitionError> {
    if !is_odd_prime(p) || p + 2 >= n || n > 6 {
        return Err(PartitionError::Bounds(format!("need p an odd prime, p < n - 2, n <= 6; got n = {n}, p = {p}")));
    }
    let spec = RackSpec { group: GroupSpec::Alternating(n), filter: RackFilter::Cycles(p) };
    let rack = build_rack(&spec, &RackOptions::default())?;
    let lattice = enumerate_subracks(&rack, &LatticeOptions::default())?;
    let kl = k_equal_lattice(n, p)?;
    let perms = rack.permutations().expect("built from permutations");
    let phi: Vec<SetPartition> = lattice
        .nodes()
        .iter()
        .map(|q| orbit_partition_map(n, &q.iter().map(|i| &perms[i]).collect::<Vec<_>>()))
        .collect();
    let mut image = phi.clone();
    image.sort();
    image.dedup();
    let mut target = kl.elements.clone();
    target.sort();
    let image_is_k_equal_lattice = image == target;
    let mut order_preserving = true;
    for (a, qa) in lattice.nodes().iter().enumerate() {
        for (b, qb) in lattice.nodes().iter().enumerate() {
            if qa.is_subset(*qb) {
                order_preserving &= phi[a].refines(&phi[b]);
            }
        }
    }
    let (bottom, top) = (kl.poset.bottom(), kl.poset.top());
    let proper_q = 1..lattice.len() - 1;
    let mut fibers = Vec::new();
    for (t, tau) in kl.elements.iter().enumerate() {
        if t == bottom || t == top {
            continue;
        }
        let fiber: Vec<usize> = proper_q.clone().filter(|&q| phi[q].refines(tau)).collect();
        let q_h: ElementSet = (0..rack.size())
            .filter(|&i| {
                let support = perms[i].support();
                support.iter().all(|&x| tau.block_of(x) == tau.block_of(support[0]))
            })
            .collect();
        let unique_max = lattice.id_of(q_h).is_some_and(|id| fiber.contains(&id))
            && fiber.iter().all(|&q| lattice.node(q).is_subset(q_h));
        fibers.push(FiberRecord { tau: tau.clone(), max_size: q_h.len(), unique_max });
    }
    let pass = image_is_k_equal_lattice && order_preserving && fibers.iter().all(|f| f.unique_max);
    Ok(FiberReport {
        n,
        p,
        rack_size: rack.size(),
        subracks: lattice.len(),
        k_equal_size: kl.len(),
        image_is_k_equal_lattice,
        order_preserving,
        fibers,
        pass,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HomologyComparison {
    pub k_equal: HomologyResult,
    /// `None` when the rack side exceeded the budget.
    pub rack: Option<HomologyResult>,
    pub status: ComparisonStatus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ComparisonStatus {
    Match,
    Mismatch,
    SkippedBudget,
}

fn nonzero_groups(h: &HomologyResult) -> (bool, Vec<&crate::topology::HomologyGroup>) {
    (h.empty_complex, h.groups.iter().filter(|g| g.rank > 0 || !g.torsion.is_empty()).collect())
}

/// Homology of Δ(Π_{n,p}) and, budget permitting, of the order complex of
/// the subrack lattice of p-cycles in A_n.
pub fn compare_fiber_homology(
    n: usize,
    p: usize,
    lattice_opts: &LatticeOptions,
    simplex_budget: usize,
    opts: &HomologyOptions,
) -> Result<HomologyComparison, PartitionError> {
    let kl = k_equal_lattice(n, p)?;
    let k_equal = reduced_homology(&order_complex(&kl.poset, simplex_budget)?.complex, opts);
    let spec = RackSpec { group: GroupSpec::Alternating(n), filter: RackFilter::Cycles(p) };
    let rack = build_rack(&spec, &RackOptions::default())?;
    let rack_side = match enumerate_subracks(&rack, lattice_opts) {
        Ok(l) => match order_complex(l.poset(), simplex_budget) {
            Ok(oc) => Some(reduced_homology(&oc.complex, opts)),
            Err(TopologyError::SimplexBudget { .. }) => None,
        },
        Err(LatticeError::Budget { .. } | LatticeError::RackCap { .. }) => None,
        Err(e) => return Err(e.into()),
    };
    let status = match &rack_side {
        None => ComparisonStatus::SkippedBudget,
        Some(h) if nonzero_groups(h) == nonzero_groups(&k_equal) => ComparisonStatus::Match,
        Some(_) => ComparisonStatus::Mismatch,
    };
    Ok(HomologyComparison { k_equal, rack: rack_side, status })
}

#[cfg(test)]
mod tests;
