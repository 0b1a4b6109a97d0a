//! The lattice of subracks of a finite rack and its analytics.

mod analytics;
mod export;
mod poset;

use std::collections::HashMap;

use rayon::prelude::*;
use thiserror::Error;

use crate::bitset::ElementSet;
use crate::groups::{ClassDecomposition, FiniteGroup, GroupError};
use crate::racks::{Rack, RackError};

pub use analytics::{
    compute_m, product_decomposition_check, MEntry, MReport, ProductDecompositionReport, M_CAP,
};
pub use poset::{BoundedPoset, ChainLengthsThrough, GradednessReport};

/// Largest rack whose subracks are enumerated by default.
pub const RACK_CAP: usize = 40;
/// Default bound on the number of lattice nodes.
pub const NODE_BUDGET: usize = 5_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("rack of size {size} exceeds the enumeration cap of {cap}")]
    RackCap { size: usize, cap: usize },
    #[error("node budget of {budget} exceeded after {found} subracks")]
    Budget { found: usize, budget: usize },
    #[error("|G| = {order} exceeds the cap of {cap} for {what}")]
    OrderCap { what: &'static str, order: usize, cap: usize },
    #[error("lattice file line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Rack(#[from] RackError),
    #[error(transparent)]
    Group(#[from] GroupError),
}

#[derive(Debug, Clone, Copy)]
pub struct LatticeOptions {
    pub rack_cap: usize,
    pub node_budget: usize,
}

impl Default for LatticeOptions {
    fn default() -> Self {
        LatticeOptions { rack_cap: RACK_CAP, node_budget: NODE_BUDGET }
    }
}

/// All subracks of a rack ordered by inclusion. Nodes are sorted by size and
/// then lexicographically, so node 0 is the empty subrack and the last node
/// is the whole rack.
#[derive(Debug, Clone)]
pub struct SubrackLattice {
    spec: String,
    labels: Vec<String>,
    nodes: Vec<ElementSet>,
    index: HashMap<ElementSet, u32>,
    poset: BoundedPoset,
    rack: Option<Rack>,
}

/// Enumerate the subracks of `rack` in lectic order of closed sets, then
/// sort them and compute covers.
pub fn enumerate_subracks(rack: &Rack, opts: &LatticeOptions) -> Result<SubrackLattice, LatticeError> {
    let n = rack.size();
    if n > opts.rack_cap {
        return Err(LatticeError::RackCap { size: n, cap: opts.rack_cap });
    }
    let mut nodes = vec![ElementSet::EMPTY];
    let mut current = ElementSet::EMPTY;
    'outer: loop {
        let mut prefix = current;
        for i in (0..n).rev() {
            if prefix.contains(i) {
                prefix.remove(i);
                continue;
            }
            let next = rack.closure_op_only(prefix.with(i));
            if next.difference(prefix).below(i).is_empty() {
                if nodes.len() >= opts.node_budget {
                    return Err(LatticeError::Budget { found: nodes.len(), budget: opts.node_budget });
                }
                nodes.push(next);
                current = next;
                continue 'outer;
            }
        }
        break;
    }
    nodes.sort_unstable_by(ElementSet::canonical_cmp);
    let index: HashMap<ElementSet, u32> =
        nodes.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
    let all = rack.all();
    let up: Vec<Vec<u32>> = nodes
        .par_iter()
        .map(|&q| {
            let mut candidates: Vec<ElementSet> = Vec::new();
            for x in all.difference(q).iter() {
                let c = rack.extend_closure(q, ElementSet::singleton(x));
                if !candidates.contains(&c) {
                    candidates.push(c);
                }
            }
            let mut covers: Vec<u32> = candidates
                .iter()
                .filter(|c| !candidates.iter().any(|d| d.is_proper_subset(**c)))
                .map(|c| index[c])
                .collect();
            covers.sort_unstable();
            covers
        })
        .collect();
    Ok(SubrackLattice {
        spec: rack.provenance().map(|p| p.spec.clone()).unwrap_or_default(),
        labels: rack.labels().to_vec(),
        nodes,
        index,
        poset: BoundedPoset::from_up_covers(up),
        rack: Some(rack.clone()),
    })
}

/// Subracks of the conjugation rack on all of `g`.
pub fn group_lattice(g: &FiniteGroup, opts: &LatticeOptions) -> Result<SubrackLattice, LatticeError> {
    let mut rack = Rack::conjugation(g, g.all())?;
    if rack.provenance().is_none() {
        rack.set_provenance(g.name().to_string());
    }
    enumerate_subracks(&rack, opts)
}

/// Union of the classes of `classes` meeting `set`.
pub fn closure_bar(classes: &ClassDecomposition, set: ElementSet) -> ElementSet {
    classes.saturate(set)
}

impl SubrackLattice {
    pub fn spec(&self) -> &str {
        &self.spec
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn rack(&self) -> Option<&Rack> {
        self.rack.as_ref()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[ElementSet] {
        &self.nodes
    }

    pub fn node(&self, id: usize) -> ElementSet {
        self.nodes[id]
    }

    pub fn id_of(&self, set: ElementSet) -> Option<usize> {
        self.index.get(&set).map(|&i| i as usize)
    }

    pub fn poset(&self) -> &BoundedPoset {
        &self.poset
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.nodes[a].intersection(self.nodes[b])] as usize
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.least_upper_bound(self.nodes[a].union(self.nodes[b]))
    }

    /// Smallest node containing `set`.
    pub fn least_upper_bound(&self, set: ElementSet) -> usize {
        match &self.rack {
            Some(r) => self.index[&r.closure_op_only(set)] as usize,
            // nodes are sorted by size and closed under intersection, so the
            // first node containing `set` is the least one
            None => self.nodes.iter().position(|n| set.is_subset(*n)).expect("top contains every set"),
        }
    }

    pub fn atoms(&self) -> Vec<usize> {
        self.poset.atoms()
    }

    pub fn coatoms(&self) -> Vec<usize> {
        self.poset.coatoms()
    }

    /// Whether every node is the join of the atoms below it.
    pub fn is_atomic(&self) -> bool {
        let atoms: Vec<ElementSet> = self.atoms().iter().map(|&a| self.nodes[a]).collect();
        self.nodes.iter().all(|&x| {
            let below = atoms
                .iter()
                .filter(|a| a.is_subset(x))
                .fold(ElementSet::EMPTY, |acc, a| acc.union(*a));
            self.nodes[self.least_upper_bound(below)] == x
        })
    }

    pub fn gradedness(&self) -> GradednessReport {
        self.poset.gradedness()
    }

    pub fn chain_lengths_through(&self, node: usize) -> ChainLengthsThrough {
        self.poset.chain_lengths_through(node)
    }

    /// Node ids of the interval [lo, hi], ascending.
    pub fn interval(&self, lo: usize, hi: usize) -> Vec<usize> {
        let (l, h) = (self.nodes[lo], self.nodes[hi]);
        (lo..=hi).filter(|&i| l.is_subset(self.nodes[i]) && self.nodes[i].is_subset(h)).collect()
    }

    pub fn format_node(&self, id: usize) -> String {
        let parts: Vec<&str> = self.nodes[id].iter().map(|i| self.labels[i].as_str()).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Meets of all sets of coatoms of the lattice whose top is `top` and whose
/// coatoms are `coatoms` (the empty meet is the top), sorted canonically.
pub fn meets_of(top: ElementSet, coatoms: &[ElementSet]) -> Vec<ElementSet> {
    let mut out = vec![top];
    let mut seen: std::collections::HashSet<ElementSet> = out.iter().copied().collect();
    for &c in coatoms {
        let fresh: Vec<ElementSet> =
            out.iter().map(|x| x.intersection(c)).filter(|m| seen.insert(*m)).collect();
        out.extend(fresh);
    }
    out.sort_unstable_by(ElementSet::canonical_cmp);
    out
}

/// Int(L): meets of all sets of coatoms.
pub fn int_lattice(l: &SubrackLattice) -> Vec<ElementSet> {
    let coatoms: Vec<ElementSet> = l.coatoms().iter().map(|&c| l.node(c)).collect();
    meets_of(l.node(l.top()), &coatoms)
}

/// Whether a family of sets, closed under intersection and ordered by
/// inclusion, is a Boolean lattice.
///
/// Maps every element to the set of atoms below it. The family is Boolean
/// iff this map is injective, every subset of atoms is hit, and every
/// element's complement exists.
pub fn is_boolean(family: &[ElementSet]) -> bool {
    if family.is_empty() {
        return false;
    }
    let bottom = family.iter().fold(family[0], |acc, x| acc.intersection(*x));
    if !family.contains(&bottom) {
        return false;
    }
    let proper: Vec<ElementSet> = family.iter().copied().filter(|&x| x != bottom).collect();
    let atoms: Vec<ElementSet> = proper
        .iter()
        .copied()
        .filter(|a| !proper.iter().any(|b| b.is_proper_subset(*a)))
        .collect();
    let k = atoms.len();
    if k >= 64 || family.len() as u128 != 1u128 << k {
        return false;
    }
    let mut hit = std::collections::HashSet::with_capacity(family.len());
    for &x in family {
        let mask: u64 = atoms
            .iter()
            .enumerate()
            .filter(|(_, a)| a.is_subset(x))
            .fold(0, |m, (i, _)| m | 1 << i);
        if !hit.insert(mask) {
            return false;
        }
    }
    let full = if k == 0 { 0 } else { u64::MAX >> (64 - k) };
    hit.iter().all(|m| hit.contains(&(full & !m)))
}

#[cfg(test)]
mod tests;
