use serde::Serialize;

use super::subgroups::all_subgroups;
use super::FiniteGroup;
use crate::bitset::ElementSet;

/// Position of a group in the solvability hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GroupProperties {
    pub abelian: bool,
    pub nilpotent: bool,
    pub solvable: bool,
    pub supersolvable: bool,
    pub simple: bool,
}

/// Classify `g`. Nilpotency uses the maximal-subgroup criterion when the
/// group is small enough for subgroup enumeration (`subgroup_cap`), and the
/// lower central series otherwise.
pub fn group_properties(g: &FiniteGroup, subgroup_cap: usize) -> GroupProperties {
    let nilpotent = match all_subgroups(g, subgroup_cap) {
        Ok(subs) => subs.iter().filter(|h| h.maximal).all(|h| h.normal),
        Err(_) => lower_central_series_terminates(g),
    };
    GroupProperties {
        abelian: g.is_abelian(),
        nilpotent,
        solvable: is_solvable(g),
        supersolvable: is_supersolvable(g),
        simple: is_simple(g),
    }
}

pub(crate) fn lower_central_series_terminates(g: &FiniteGroup) -> bool {
    let trivial = ElementSet::singleton(0);
    let mut cur = g.all();
    loop {
        if cur == trivial {
            return true;
        }
        let next = g.commutator_subgroup(cur, g.all());
        if next == cur {
            return false;
        }
        cur = next;
    }
}

fn is_solvable(g: &FiniteGroup) -> bool {
    let trivial = ElementSet::singleton(0);
    let mut cur = g.all();
    loop {
        if cur == trivial {
            return true;
        }
        let next = g.commutator_subgroup(cur, cur);
        if next == cur {
            return false;
        }
        cur = next;
    }
}

fn is_simple(g: &FiniteGroup) -> bool {
    g.order() > 1 && (1..g.order()).all(|x| g.normal_closure(ElementSet::singleton(x)) == g.all())
}

/// All normal subgroups, built from normal closures of single elements.
pub(crate) fn normal_subgroups(g: &FiniteGroup) -> Vec<ElementSet> {
    let mut seen = std::collections::HashSet::new();
    let mut base = Vec::new();
    for x in 0..g.order() {
        let n = g.normal_closure(ElementSet::singleton(x));
        if seen.insert(n) {
            base.push(n);
        }
    }
    let mut all = base.clone();
    let mut frontier = base.clone();
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for a in &frontier {
            for b in &base {
                let j = g.generated(a.union(*b));
                if seen.insert(j) {
                    all.push(j);
                    next.push(j);
                }
            }
        }
        frontier = next;
    }
    all.sort_by(|a, b| a.canonical_cmp(b));
    all
}

/// Exhaustive search for a series of normal subgroups of `g` from 1 to `g`
/// whose successive quotients are cyclic.
fn is_supersolvable(g: &FiniteGroup) -> bool {
    let normals = normal_subgroups(g);
    let top = g.all();
    let mut dead = std::collections::HashSet::new();
    fn search(
        g: &FiniteGroup,
        normals: &[ElementSet],
        cur: ElementSet,
        top: ElementSet,
        dead: &mut std::collections::HashSet<ElementSet>,
    ) -> bool {
        if cur == top {
            return true;
        }
        if dead.contains(&cur) {
            return false;
        }
        for &m in normals.iter().filter(|m| cur.is_proper_subset(**m)) {
            let cyclic_quotient =
                m.difference(cur).iter().any(|x| g.generated(cur.with(x)) == m);
            if cyclic_quotient && search(g, normals, m, top, dead) {
                return true;
            }
        }
        dead.insert(cur);
        false
    }
    search(g, &normals, ElementSet::singleton(0), top, &mut dead)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, parse_group_spec};

    fn props(s: &str) -> GroupProperties {
        group_properties(&build_group(&parse_group_spec(s).unwrap(), 128).unwrap(), 48)
    }

    #[test]
    fn small_groups() {
        assert_eq!(
            props("S3"),
            GroupProperties {
                abelian: false,
                nilpotent: false,
                solvable: true,
                supersolvable: true,
                simple: false
            }
        );
        assert!(props("D8").nilpotent);
        let a4 = props("A4");
        assert!(a4.solvable && !a4.supersolvable && !a4.nilpotent);
        let s4 = props("S4");
        assert!(s4.solvable && !s4.supersolvable);
        let a5 = props("A5");
        assert!(a5.simple && !a5.solvable && !a5.nilpotent);
        assert!(props("Z5").simple);
        assert!(!props("Z1").simple);
        assert!(!props("Z4").simple);
        assert!(props("SL(2,3)").solvable && !props("SL(2,3)").supersolvable);
        assert!(props("TV18").supersolvable);
    }

    #[test]
    fn nilpotency_criteria_agree() {
        for s in [
            "S3", "D8", "Q8", "D10", "A4", "D12", "Dic3", "D14", "D16", "Q16", "SD16", "S3xZ2",
            "S3xZ3", "D8xZ2", "Q8xZ2", "TV18", "S4", "SL(2,3)", "D8xZ3", "Z12", "D18",
        ] {
            let g = build_group(&parse_group_spec(s).unwrap(), 128).unwrap();
            assert_eq!(props(s).nilpotent, lower_central_series_terminates(&g), "{s}");
        }
    }

    #[test]
    fn normal_subgroups_of_s4() {
        let g = build_group(&parse_group_spec("S4").unwrap(), 128).unwrap();
        let sizes: Vec<usize> = normal_subgroups(&g).iter().map(|n| n.len()).collect();
        assert_eq!(sizes, vec![1, 4, 12, 24]);
    }
}
