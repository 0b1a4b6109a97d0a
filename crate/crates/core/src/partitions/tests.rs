use super::*;
use crate::topology::SIMPLEX_BUDGET;
use proptest::prelude::*;

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Count partitions whose blocks have size 1 or at least k by conditioning
/// on the block of the last point.
fn k_equal_count(n: usize, k: usize) -> usize {
    let mut a = vec![1usize];
    for m in 1..=n {
        let mut total = a[m - 1];
        for j in 1..m {
            if j + 1 >= k {
                total += binomial(m - 1, j) * a[m - 1 - j];
            }
        }
        a.push(total);
    }
    a[n]
}

fn bell(n: usize) -> usize {
    let mut row = vec![1usize];
    for _ in 0..n {
        let mut next = vec![*row.last().unwrap()];
        for x in &row {
            next.push(next.last().unwrap() + x);
        }
        row = next;
    }
    row[0]
}

/// Möbius function from bottom to top, by the defining recursion.
fn mobius(p: &BoundedPoset) -> i64 {
    let n = p.len();
    let mut mu = vec![0i64; n];
    mu[0] = 1;
    for y in 1..n {
        mu[y] = -(0..y).filter(|&x| p.leq(x, y)).map(|x| mu[x]).sum::<i64>();
    }
    mu[n - 1]
}

#[test]
fn parse_and_display() {
    let p = SetPartition::parse("123|45|6").unwrap();
    assert_eq!(p.n(), 6);
    assert_eq!(p.blocks(), vec![vec![0, 1, 2], vec![3, 4], vec![5]]);
    assert_eq!(p.to_string(), "123|45|6");
    assert_eq!(SetPartition::parse("6|45|213").unwrap(), p);
    assert_eq!(SetPartition::parse("14|2|3").unwrap().to_string(), "14|2|3");
    for bad in ["", "12||3", "12|2", "13", "1a", "0|1"] {
        assert!(SetPartition::parse(bad).is_err(), "{bad}");
    }
}

#[test]
fn refinement_meet_join() {
    let a = SetPartition::parse("12|34|5").unwrap();
    let b = SetPartition::parse("1|23|45").unwrap();
    assert_eq!(a.meet(&b).to_string(), "1|2|3|4|5");
    assert_eq!(a.join(&b).to_string(), "12345");
    let c = SetPartition::parse("1234|5").unwrap();
    assert!(a.refines(&c));
    assert!(!c.refines(&a));
    assert!(SetPartition::discrete(5).refines(&a));
    assert!(a.refines(&SetPartition::one_block(5)));
}

#[test]
fn bell_numbers() {
    for n in 1..=MAX_N {
        assert_eq!(all_partitions(n).len(), bell(n));
        let pi = partition_lattice(n).unwrap();
        assert_eq!(pi.len(), bell(n));
        assert_eq!(pi.elements[pi.poset.bottom()], SetPartition::discrete(n));
        assert_eq!(pi.elements[pi.poset.top()], SetPartition::one_block(n));
    }
    assert!(partition_lattice(0).is_err());
    assert!(partition_lattice(MAX_N + 1).is_err());
}

#[test]
fn partition_lattice_is_graded_with_mobius() {
    for n in 1..=6 {
        let pi = partition_lattice(n).unwrap();
        let g = pi.poset.gradedness();
        assert!(g.is_graded);
        assert_eq!(g.chain_lengths, vec![n - 1]);
        let fact: i64 = (1..n as i64).product();
        assert_eq!(mobius(&pi.poset), if n % 2 == 1 { fact } else { -fact }, "n = {n}");
    }
}

#[test]
fn merge_covers_match_generic_covers() {
    for n in 1..=6 {
        let a = partition_lattice(n).unwrap();
        let b = k_equal_lattice(n, 1).unwrap();
        assert_eq!(a.elements, b.elements);
        assert!(a.poset.cover_pairs().eq(b.poset.cover_pairs()));
    }
}

#[test]
fn k_equal_sizes() {
    for n in 1..=MAX_N {
        for k in 1..=n {
            assert_eq!(k_equal_lattice(n, k).unwrap().len(), k_equal_count(n, k), "n = {n}, k = {k}");
        }
    }
    assert_eq!(k_equal_lattice(6, 3).unwrap().len(), 53);
    assert!(k_equal_lattice(3, 4).is_err());
}

#[test]
fn partition_lattice_homology() {
    for n in 3..=5 {
        let pi = partition_lattice(n).unwrap();
        let h = reduced_homology(&order_complex(&pi.poset, SIMPLEX_BUDGET).unwrap().complex, &Default::default());
        let fact: usize = (1..n).product();
        assert_eq!(h.nonzero_dimensions(), vec![n as isize - 3]);
        assert_eq!(h.rank(n - 3), fact);
        assert!(h.is_torsion_free());
    }
}

#[test]
fn three_equal_lattice_on_six_points() {
    let kl = k_equal_lattice(6, 3).unwrap();
    let h = reduced_homology(&order_complex(&kl.poset, SIMPLEX_BUDGET).unwrap().complex, &Default::default());
    assert_eq!(h.euler_characteristic, mobius(&kl.poset));
    assert!(h.nonzero_dimensions().len() >= 2, "{h:?}");
    assert!(h.is_torsion_free());
}

#[test]
fn orbit_map_of_cycles() {
    let a = Permutation::from_cycles(6, &[&[1, 2, 3]]);
    let b = Permutation::from_cycles(6, &[&[3, 4, 5]]);
    assert_eq!(orbit_partition_map(6, &[&a]).to_string(), "123|4|5|6");
    assert_eq!(orbit_partition_map(6, &[&a, &b]).to_string(), "12345|6");
    assert_eq!(orbit_partition_map(6, &[]), SetPartition::discrete(6));
}

#[test]
fn transposition_racks_are_partition_lattices() {
    for n in 3..=5 {
        let r = transposition_rack_isomorphism(n).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.subracks, bell(n));
        assert_eq!(r.partitions, bell(n));
    }
    assert!(transposition_rack_isomorphism(1).is_err());
}

#[test]
fn fibers_for_three_cycles_on_six_points() {
    let r = quillen_fiber_check(6, 3).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.rack_size, 40);
    assert_eq!(r.k_equal_size, 53);
    assert_eq!(r.fibers.len(), 51);
    let get = |s: &str| r.fibers.iter().find(|f| f.tau.to_string() == s).unwrap().max_size;
    assert_eq!(get("123|4|5|6"), 2);
    assert_eq!(get("123|456"), 4);
    assert_eq!(get("1234|5|6"), 8);
    assert_eq!(get("12345|6"), 20);
    assert!(quillen_fiber_check(5, 3).is_err());
    assert!(quillen_fiber_check(6, 4).is_err());
}

#[test]
fn fiber_homology_agrees() {
    let c = compare_fiber_homology(6, 3, &LatticeOptions::default(), SIMPLEX_BUDGET, &Default::default()).unwrap();
    assert_eq!(c.status, ComparisonStatus::Match, "{:?} {:?}", c.k_equal.betti_numbers(), c.rack.as_ref().map(|h| h.betti_numbers()));
    assert_eq!(c.k_equal.nonzero_dimensions(), vec![1, 2]);
    let rack = c.rack.unwrap();
    assert_eq!(rack.nonzero_dimensions(), vec![1, 2]);
    let small: usize = c.k_equal.simplex_counts.iter().sum();
    assert!(rack.simplex_counts.iter().sum::<usize>() > small);
    let tight = compare_fiber_homology(6, 3, &LatticeOptions::default(), small, &Default::default()).unwrap();
    assert_eq!(tight.status, ComparisonStatus::SkippedBudget);
}

fn arb_partition() -> impl Strategy<Value = SetPartition> {
    (1..=MAX_N).prop_flat_map(|n| proptest::collection::vec(0..n, n).prop_map(|l| SetPartition::from_labels(&l)))
}

proptest! {
    #[test]
    fn meet_and_join_bound(a in arb_partition(), labels in proptest::collection::vec(0usize..8, MAX_N)) {
        let b = SetPartition::from_labels(&labels[..a.n()]);
        let m = a.meet(&b);
        let j = a.join(&b);
        prop_assert!(m.refines(&a) && m.refines(&b));
        prop_assert!(a.refines(&j) && b.refines(&j));
        prop_assert_eq!(a.refines(&b), a.meet(&b) == a);
        prop_assert_eq!(a.refines(&b), a.join(&b) == b);
    }

    #[test]
    fn display_round_trips(a in arb_partition()) {
        prop_assert_eq!(SetPartition::parse(&a.to_string()).unwrap(), a);
    }
}
