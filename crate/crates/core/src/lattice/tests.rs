use proptest::prelude::*;

use super::*;
use crate::groups::{build_group, parse_group_spec, Permutation};
use crate::racks::{build_rack, parse_rack_spec};

fn group(s: &str) -> FiniteGroup {
    build_group(&parse_group_spec(s).unwrap(), 128).unwrap()
}

fn rack(s: &str) -> Rack {
    build_rack(&parse_rack_spec(s).unwrap(), &Default::default()).unwrap()
}

fn lattice(s: &str) -> SubrackLattice {
    enumerate_subracks(&rack(s), &LatticeOptions::default()).unwrap()
}

/// Oracle: every subset closed under the operation, in canonical order.
fn brute_force_subracks(r: &Rack) -> Vec<ElementSet> {
    let n = r.size();
    assert!(n <= 16);
    let mut out: Vec<ElementSet> = (0u32..1 << n)
        .map(|m| ElementSet::from_bits(m as u128))
        .filter(|s| s.iter().all(|a| s.iter().all(|b| s.contains(r.op(a, b)))))
        .collect();
    out.sort_by(ElementSet::canonical_cmp);
    out
}

/// Oracle: covers by definition, comparing all pairs.
fn brute_force_covers(nodes: &[ElementSet]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (i, a) in nodes.iter().enumerate() {
        for (j, b) in nodes.iter().enumerate() {
            if a.is_proper_subset(*b)
                && !nodes.iter().any(|c| a.is_proper_subset(*c) && c.is_proper_subset(*b))
            {
                out.push((i, j));
            }
        }
    }
    out
}

#[test]
fn s3_matches_exhaustive_search() {
    let r = rack("S3");
    let l = enumerate_subracks(&r, &LatticeOptions::default()).unwrap();
    let oracle = brute_force_subracks(&r);
    assert_eq!(l.nodes(), &oracle[..]);
    assert_eq!(l.len(), 18);
    let covers: Vec<(usize, usize)> = l.poset().cover_pairs().collect();
    let mut expected = brute_force_covers(&oracle);
    expected.sort();
    assert_eq!(covers, expected);
}

#[test]
fn four_cycle_lattice() {
    let r = rack("S4:cycles(4)");
    let l = enumerate_subracks(&r, &LatticeOptions::default()).unwrap();
    assert_eq!(l.nodes(), &brute_force_subracks(&r)[..]);
    assert_eq!(l.len(), 11);
    let sizes: Vec<usize> = l.nodes().iter().map(|s| s.len()).collect();
    assert_eq!(sizes, vec![0, 1, 1, 1, 1, 1, 1, 2, 2, 2, 6]);
    let perms = r.permutations().unwrap();
    for &c in &l.coatoms() {
        let pair: Vec<usize> = l.node(c).iter().collect();
        assert_eq!(pair.len(), 2);
        assert_eq!(perms[pair[0]].inverse(), perms[pair[1]]);
    }
    assert_eq!(l.coatoms().len(), 3);
    assert_eq!(l.atoms().len(), 6);
    assert!(l.is_atomic());
    // every singleton lies in an inverse pair
    let g = l.gradedness();
    assert!(g.is_graded);
    assert_eq!(g.chain_lengths, vec![3]);
}

#[test]
fn meets_and_joins() {
    let r = rack("S3");
    let l = enumerate_subracks(&r, &LatticeOptions::default()).unwrap();
    let id = |labels: &[&str]| {
        let set: ElementSet =
            labels.iter().map(|x| r.labels().iter().position(|l| l == x).unwrap()).collect();
        l.id_of(set).unwrap()
    };
    let t12 = id(&["(12)"]);
    let t13 = id(&["(13)"]);
    assert_eq!(l.join(t12, t13), id(&["(12)", "(13)", "(23)"]));
    assert_eq!(l.meet(t12, t13), l.bottom());
    assert_eq!(l.join(t12, l.top()), l.top());
    assert_eq!(l.meet(l.bottom(), t12), l.bottom());
    for a in 0..l.len() {
        for b in 0..l.len() {
            assert_eq!(l.node(l.meet(a, b)), l.node(a).intersection(l.node(b)));
            assert_eq!(l.node(l.join(a, b)), r.closure(l.node(a).union(l.node(b))));
        }
    }
}

#[test]
fn group_lattice_atoms_and_coatoms() {
    for s in ["S3", "D8", "Q8", "A4", "D10", "Z6", "Dic3"] {
        let g = group(s);
        let l = group_lattice(&g, &LatticeOptions::default()).unwrap();
        let atoms: Vec<ElementSet> = l.atoms().iter().map(|&a| l.node(a)).collect();
        assert_eq!(atoms.len(), g.order(), "{s}");
        assert!(atoms.iter().all(|a| a.len() == 1));
        let classes = g.conjugacy_classes();
        let mut coatoms: Vec<ElementSet> = l.coatoms().iter().map(|&c| l.node(c)).collect();
        let mut expected: Vec<ElementSet> =
            classes.classes.iter().map(|c| g.all().difference(*c)).collect();
        coatoms.sort_by(ElementSet::canonical_cmp);
        expected.sort_by(ElementSet::canonical_cmp);
        assert_eq!(coatoms, expected, "{s}");
        assert!(l.is_atomic());
    }
}

#[test]
fn lattice_sizes() {
    let sizes: Vec<usize> = ["S3", "D8", "A4", "D10", "D12", "Dic3"]
        .iter()
        .map(|s| group_lattice(&group(s), &LatticeOptions::default()).unwrap().len())
        .collect();
    assert_eq!(sizes, vec![18, 56, 52, 50, 148, 148]);
    assert_eq!(lattice("Z4").len(), 16);
}

#[test]
fn gradedness_examples() {
    for n in 1..=6 {
        let g = lattice(&format!("Z{n}")).gradedness();
        assert!(g.is_graded);
        assert_eq!(g.max_maximal_chain, n);
    }
    let g = lattice("S3").gradedness();
    assert!(g.is_graded);
    assert_eq!(g.chain_lengths, vec![4]);
    let l = lattice("A5:cycles(5)");
    let g = l.gradedness();
    assert!(!g.is_graded);
    assert!(g.chain_lengths.contains(&5) && g.chain_lengths.contains(&4));
    for w in [&g.witness_short, &g.witness_long] {
        assert_eq!(w[0], l.bottom());
        assert_eq!(*w.last().unwrap(), l.top());
        for pair in w.windows(2) {
            assert!(l.poset().up(pair[0]).contains(&(pair[1] as u32)));
        }
    }
}

#[test]
fn closure_bar_examples() {
    let s3 = group("S3");
    let c = s3.conjugacy_classes();
    let t = s3.find_label("(12)").unwrap();
    let bar = closure_bar(&c, ElementSet::singleton(t));
    assert_eq!(bar.len(), 3);
    assert_eq!(closure_bar(&c, bar), bar);

    let s4 = group("S4");
    let c = s4.conjugacy_classes();
    let seed: ElementSet =
        [s4.find_label("(12)").unwrap(), s4.find_label("(1234)").unwrap()].into_iter().collect();
    let expected: ElementSet = (0..24)
        .filter(|&i| matches!(s4.permutations().unwrap()[i].cycle_type().as_slice(), [2] | [4]))
        .collect();
    assert_eq!(closure_bar(&c, seed), expected);
}

#[test]
fn int_lattices() {
    let l = group_lattice(&group("S3"), &LatticeOptions::default()).unwrap();
    let int = int_lattice(&l);
    assert_eq!(int.len(), 8);
    assert!(is_boolean(&int));

    let l = lattice("S4:cycles(4)");
    let int = int_lattice(&l);
    // top, the three inverse pairs, and their common meet ∅
    assert_eq!(int.len(), 5);
    assert!(!is_boolean(&int));
}

#[test]
fn boolean_detection() {
    let power_set: Vec<ElementSet> = (0u128..16).map(ElementSet::from_bits).collect();
    assert!(is_boolean(&power_set));
    let chain: Vec<ElementSet> = [0u128, 1, 3].into_iter().map(ElementSet::from_bits).collect();
    assert!(!is_boolean(&chain));
    // M3: three atoms, pairwise joins all equal top
    let m3: Vec<ElementSet> = [0u128, 1, 2, 4, 7].into_iter().map(ElementSet::from_bits).collect();
    assert!(!is_boolean(&m3));
    assert!(is_boolean(&[ElementSet::EMPTY]));
    assert!(is_boolean(lattice("Z3").nodes()));
    assert!(!is_boolean(lattice("S3").nodes()));
}

#[test]
fn m_of_small_groups() {
    let s3 = group("S3");
    let l = group_lattice(&s3, &LatticeOptions::default()).unwrap();
    let m = compute_m(&s3, &l).unwrap();
    let mut members: Vec<Vec<usize>> = m.members.iter().map(|e| e.elements.clone()).collect();
    members.sort();
    let mut order_two: Vec<Vec<usize>> = crate::groups::all_subgroups(&s3, 24)
        .unwrap()
        .iter()
        .filter(|h| h.order() == 2)
        .map(|h| h.elements.iter().collect())
        .collect();
    order_two.sort();
    assert_eq!(members, order_two);

    for s in ["D8", "Z5", "Q8"] {
        let g = group(s);
        let l = group_lattice(&g, &LatticeOptions::default()).unwrap();
        assert!(compute_m(&g, &l).unwrap().members.is_empty(), "{s}");
    }
    let z = group("Z4");
    let l = group_lattice(&z, &LatticeOptions::default()).unwrap();
    assert_eq!(compute_m(&z, &l).unwrap().satisfied, [0, 0, 0, 0]);
}

#[test]
fn m_cap() {
    let g = group("D26");
    let l = SubrackLattice::import(&lattice("Z1").export()).unwrap();
    assert!(matches!(compute_m(&g, &l), Err(LatticeError::OrderCap { .. })));
}

#[test]
fn product_decompositions() {
    for (s, z) in [("D12", 2), ("Q8", 2), ("Z6", 6), ("D8", 2)] {
        let g = group(s);
        let opts = LatticeOptions::default();
        let l = group_lattice(&g, &opts).unwrap();
        let rep = product_decomposition_check(&g, &l, &opts).unwrap();
        assert!(rep.pass, "{s}: {rep:?}");
        assert_eq!(rep.center_size, z);
        assert_eq!(rep.lattice_size, rep.noncentral_lattice_size << z);
    }
    let g = group("D12");
    let l = group_lattice(&g, &LatticeOptions::default()).unwrap();
    let rep = product_decomposition_check(&g, &l, &LatticeOptions::default()).unwrap();
    let r = rack("D12:noncentral");
    assert_eq!(rep.noncentral_lattice_size, brute_force_subracks(&r).len());
    assert_eq!(rep.noncentral_lattice_size * 4, 148);
}

#[test]
fn export_round_trip() {
    let l = lattice("S4:cycles(4)");
    let text = l.export();
    assert!(text.starts_with("racklab-lattice v1\nspec S4:cycles(4)\nlabels 6\n"));
    let back = SubrackLattice::import(&text).unwrap();
    assert_eq!(back.nodes(), l.nodes());
    assert_eq!(back.export(), text);
    assert_eq!(back.gradedness(), l.gradedness());
    for a in 0..l.len() {
        for b in 0..l.len() {
            assert_eq!(back.join(a, b), l.join(a, b));
        }
    }
}

#[test]
fn import_errors() {
    let text = lattice("Z2").export();
    assert!(matches!(SubrackLattice::import(""), Err(LatticeError::Parse { .. })));
    let broken = text.replace("cover 0 1\n", "cover 1 0\n");
    assert!(matches!(SubrackLattice::import(&broken), Err(LatticeError::Parse { .. })));
    let truncated: String = text.lines().take(5).collect::<Vec<_>>().join("\n");
    assert!(matches!(SubrackLattice::import(&truncated), Err(LatticeError::Parse { .. })));
    let swapped = text.replace("node 1 ", "node 9 ");
    assert!(matches!(SubrackLattice::import(&swapped), Err(LatticeError::Parse { line: 8, .. })));
}

#[test]
fn caps_and_budgets() {
    let r = rack("A6:cycles(3)");
    let tight = LatticeOptions { rack_cap: 30, ..Default::default() };
    assert_eq!(enumerate_subracks(&r, &tight).unwrap_err(), LatticeError::RackCap { size: 40, cap: 30 });
    let tiny = LatticeOptions { node_budget: 10, ..Default::default() };
    assert_eq!(
        enumerate_subracks(&rack("S3"), &tiny).unwrap_err(),
        LatticeError::Budget { found: 10, budget: 10 }
    );
}

/// Small racks: subracks of catalog conjugation racks, dihedral quandles and
/// permutation racks.
fn small_rack() -> impl Strategy<Value = Rack> {
    let from_group = (0usize..8, any::<u128>()).prop_map(|(which, seed)| {
        let g = group(["S4", "SL(2,3)", "D12", "Dic3", "TV18", "D16", "SD16", "A4xZ2"][which]);
        let r = Rack::conjugation(&g, g.all()).unwrap();
        let mut q = ElementSet::EMPTY;
        for x in ElementSet::from_bits(seed).intersection(g.all()).iter() {
            let next = r.closure(q.with(x));
            if next.len() <= 14 {
                q = next;
            }
        }
        r.restrict(q).unwrap()
    });
    let dihedral = (1usize..=14).prop_map(Rack::dihedral_quandle);
    let perm = (1usize..=12, any::<u64>()).prop_map(|(n, seed)| {
        let mut images: Vec<u8> = (0..n as u8).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            images.swap(i, (s % (i as u64 + 1)) as usize);
            s /= i as u64 + 1;
        }
        Rack::permutation_rack(&Permutation::from_images(images))
    });
    prop_oneof![3 => from_group, 1 => dihedral, 1 => perm]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn lattice_equals_exhaustive_search(r in small_rack()) {
        let l = enumerate_subracks(&r, &LatticeOptions::default()).unwrap();
        let oracle = brute_force_subracks(&r);
        prop_assert_eq!(l.nodes(), &oracle[..]);
        if l.len() <= 200 {
            let covers: Vec<(usize, usize)> = l.poset().cover_pairs().collect();
            let mut expected = brute_force_covers(&oracle);
            expected.sort();
            prop_assert_eq!(covers, expected);
        }
        if r.is_quandle() {
            prop_assert!(l.is_atomic());
        }
    }

    #[test]
    fn closure_bar_is_a_closure_operator(which in 0usize..4, a in any::<u128>(), b in any::<u128>()) {
        let g = group(["S4", "SL(2,3)", "D12", "TV18"][which]);
        let c = g.conjugacy_classes();
        let x = ElementSet::from_bits(a).intersection(g.all());
        let y = x.union(ElementSet::from_bits(b).intersection(g.all()));
        let bx = closure_bar(&c, x);
        prop_assert!(x.is_subset(bx));
        prop_assert_eq!(closure_bar(&c, bx), bx);
        prop_assert!(bx.is_subset(closure_bar(&c, y)));
    }
}

#[test]
fn closed_nodes_form_a_boolean_lattice() {
    for s in ["S3", "D8", "A4", "Dic3"] {
        let g = group(s);
        let c = g.conjugacy_classes();
        let l = group_lattice(&g, &LatticeOptions::default()).unwrap();
        let mut closed: Vec<ElementSet> = l.nodes().iter().map(|&x| closure_bar(&c, x)).collect();
        closed.sort_by(ElementSet::canonical_cmp);
        closed.dedup();
        assert_eq!(closed.len(), 1 << c.len(), "{s}");
        assert!(is_boolean(&closed));
    }
}
