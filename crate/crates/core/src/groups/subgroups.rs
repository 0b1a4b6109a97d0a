use std::collections::HashSet;

use serde::Serialize;

use super::{FiniteGroup, GroupError, SubgroupHandle};
use crate::bitset::ElementSet;

/// Every subgroup of `g` exactly once, sorted by (order, elements).
///
/// Works bottom-up: start from the cyclic subgroups and join with cyclic
/// subgroups until nothing new appears. Every subgroup is generated by
/// cyclic subgroups, so this reaches all of them.
pub fn all_subgroups(g: &FiniteGroup, cap: usize) -> Result<Vec<SubgroupHandle>, GroupError> {
    if g.order() > cap {
        return Err(GroupError::SubgroupCap { what: "all_subgroups", order: g.order(), cap });
    }
    let mut cyclic: Vec<ElementSet> = Vec::new();
    let mut seen = HashSet::new();
    for x in 0..g.order() {
        let c = g.generated(ElementSet::singleton(x));
        if seen.insert(c) {
            cyclic.push(c);
        }
    }
    let mut found: Vec<ElementSet> = cyclic.clone();
    let mut frontier = cyclic.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for h in &frontier {
            for c in &cyclic {
                if c.is_subset(*h) {
                    continue;
                }
                let j = g.generated(h.union(*c));
                if seen.insert(j) {
                    found.push(j);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    found.sort_by(|a, b| a.canonical_cmp(b));

    let all = g.all();
    let mut out: Vec<SubgroupHandle> = found
        .iter()
        .map(|&h| SubgroupHandle {
            elements: h,
            normal: g.is_normal(h),
            maximal: false,
            abelian: g.is_abelian_set(h),
        })
        .collect();
    let proper: Vec<ElementSet> = found.iter().copied().filter(|&h| h != all).collect();
    for s in out.iter_mut() {
        s.maximal = s.elements != all
            && !proper.iter().any(|&k| s.elements.is_proper_subset(k));
    }
    Ok(out)
}

/// Non-abelian subgroups all of whose proper subgroups are abelian.
pub fn minimal_nonabelian_subgroups(
    g: &FiniteGroup,
    cap: usize,
) -> Result<Vec<SubgroupHandle>, GroupError> {
    let subs = all_subgroups(g, cap)?;
    Ok(subs
        .iter()
        .filter(|h| !h.abelian)
        .filter(|h| {
            subs.iter()
                .filter(|k| k.elements.is_proper_subset(h.elements))
                .all(|k| k.abelian)
        })
        .copied()
        .collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidanceWitness {
    /// Elements of the proper subgroup, as indices.
    pub subgroup: Vec<usize>,
    /// Index of a class disjoint from the subgroup.
    pub class_id: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AvoidanceReport {
    pub group: String,
    pub witnesses: Vec<AvoidanceWitness>,
}

/// For every proper subgroup, find a conjugacy class it misses entirely.
/// A subgroup meeting every class is reported as an invariant violation.
pub fn check_class_avoidance(g: &FiniteGroup, cap: usize) -> Result<AvoidanceReport, GroupError> {
    let classes = g.conjugacy_classes();
    let mut witnesses = Vec::new();
    for h in all_subgroups(g, cap)?.iter().filter(|h| h.elements != g.all()) {
        let Some(class_id) = classes.classes.iter().position(|c| c.is_disjoint(h.elements)) else {
            return Err(GroupError::Invariant(format!(
                "proper subgroup {} meets every conjugacy class of {}",
                g.format_set(h.elements),
                g.name()
            )));
        };
        witnesses.push(AvoidanceWitness { subgroup: h.elements.iter().collect(), class_id });
    }
    Ok(AvoidanceReport { group: g.name().to_string(), witnesses })
}
