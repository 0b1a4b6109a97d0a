use std::collections::HashMap;

use serde::Serialize;

use super::{enumerate_subracks, is_boolean, meets_of, LatticeError, LatticeOptions, SubrackLattice};
use crate::bitset::ElementSet;
use crate::groups::FiniteGroup;
use crate::racks::Rack;

/// Largest group order accepted by [`compute_m`].
pub const M_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MEntry {
    pub node: usize,
    pub elements: Vec<usize>,
    /// Union of the classes meeting the subrack.
    pub closure: Vec<usize>,
    pub a: bool,
    pub b: bool,
    pub c: bool,
    pub d: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MReport {
    pub group: String,
    /// Nodes satisfying all four conditions, ascending.
    pub members: Vec<MEntry>,
    /// How many nodes satisfy A, A and B, A to C, and A to D.
    pub satisfied: [usize; 4],
}

/// Subracks `R` of `G` with
/// (A) `R` is not a union of classes,
/// (B) the only cover of `R` is its closure `R̄`,
/// (C) every subrack containing `R̄` is a union of classes,
/// (D) the meets of coatoms of `[∅, R̄]` do not form a Boolean lattice.
///
/// `l` must be the full subrack lattice of `g`.
pub fn compute_m(g: &FiniteGroup, l: &SubrackLattice) -> Result<MReport, LatticeError> {
    if g.order() > M_CAP {
        return Err(LatticeError::OrderCap { what: "M(G)", order: g.order(), cap: M_CAP });
    }
    assert_eq!(l.node(l.top()), g.all(), "lattice must be the subrack lattice of the group");
    let classes = g.conjugacy_classes();
    let p = l.poset();
    let closed: Vec<bool> = l.nodes().iter().map(|&x| classes.is_class_union(x)).collect();
    let mut closed_above = vec![false; l.len()];
    for x in (0..l.len()).rev() {
        closed_above[x] = closed[x] && p.up(x).iter().all(|&y| closed_above[y as usize]);
    }
    let mut d_memo: HashMap<usize, bool> = HashMap::new();
    let mut satisfied = [0usize; 4];
    let mut members = Vec::new();
    for x in 0..l.len() {
        if closed[x] {
            continue;
        }
        satisfied[0] += 1;
        let bar = classes.saturate(l.node(x));
        let bar_id = l.id_of(bar).expect("class unions are subracks");
        if p.up(x) != [bar_id as u32] {
            continue;
        }
        satisfied[1] += 1;
        if !closed_above[bar_id] {
            continue;
        }
        satisfied[2] += 1;
        let d = *d_memo.entry(bar_id).or_insert_with(|| {
            let coatoms: Vec<ElementSet> = p.down(bar_id).iter().map(|&c| l.node(c as usize)).collect();
            !is_boolean(&meets_of(bar, &coatoms))
        });
        if !d {
            continue;
        }
        satisfied[3] += 1;
        members.push(MEntry {
            node: x,
            elements: l.node(x).iter().collect(),
            closure: bar.iter().collect(),
            a: true,
            b: true,
            c: true,
            d: true,
        });
    }
    Ok(MReport { group: g.name().to_string(), members, satisfied })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProductDecompositionReport {
    pub group: String,
    pub lattice_size: usize,
    pub noncentral_size: usize,
    pub noncentral_lattice_size: usize,
    pub center_size: usize,
    /// `Q ↦ (Q ∩ R, Q ∩ Z)` is a bijection onto the product.
    pub bijective: bool,
    /// Covers go to covers and the cover counts agree.
    pub covers_preserved: bool,
    pub pass: bool,
}

/// Check that the subrack lattice of `g` splits as the product of the
/// lattice of the non-central part `R` and the Boolean lattice on the centre.
pub fn product_decomposition_check(
    g: &FiniteGroup,
    l: &SubrackLattice,
    opts: &LatticeOptions,
) -> Result<ProductDecompositionReport, LatticeError> {
    assert_eq!(l.node(l.top()), g.all(), "lattice must be the subrack lattice of the group");
    let z = g.center();
    let r = g.all().difference(z);
    let lr = enumerate_subracks(&Rack::conjugation(g, r)?, opts)?;
    // node ids of lr index subsets of r by position
    let r_elems: Vec<usize> = r.iter().collect();
    let to_r_local = |q: ElementSet| -> ElementSet {
        r_elems.iter().enumerate().filter(|(_, &x)| q.contains(x)).map(|(i, _)| i).collect()
    };
    let zs = z.len();
    let expected = (lr.len() as u128) << zs;
    let mut bijective = expected == l.len() as u128;
    for &q in l.nodes() {
        if lr.id_of(to_r_local(q.intersection(r))).is_none() {
            bijective = false;
        }
    }
    let lr_covers = lr.poset().cover_count() as u128;
    let expected_covers =
        (lr_covers << zs) + if zs == 0 { 0 } else { ((lr.len() as u128) * (zs as u128)) << (zs - 1) };
    let mut covers_preserved = expected_covers == l.poset().cover_count() as u128;
    for (x, y) in l.poset().cover_pairs() {
        let (qx, qy) = (l.node(x), l.node(y));
        let (rx, ry) = (qx.intersection(r), qy.intersection(r));
        let (zx, zy) = (qx.intersection(z), qy.intersection(z));
        let ok = if zx == zy {
            match (lr.id_of(to_r_local(rx)), lr.id_of(to_r_local(ry))) {
                (Some(a), Some(b)) => lr.poset().up(a).contains(&(b as u32)),
                _ => false,
            }
        } else {
            rx == ry && zx.is_subset(zy) && zy.len() == zx.len() + 1
        };
        covers_preserved &= ok;
    }
    Ok(ProductDecompositionReport {
        group: g.name().to_string(),
        lattice_size: l.len(),
        noncentral_size: r.len(),
        noncentral_lattice_size: lr.len(),
        center_size: zs,
        bijective,
        covers_preserved,
        pass: bijective && covers_preserved,
    })
}
