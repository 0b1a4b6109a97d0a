//! Finite groups given by complete multiplication tables.
//!
//! Every group used in this crate is small (at most [`MAX_ELEMENTS`]
//! elements), so a group is stored as its Cayley table over element indices
//! with the identity at index 0. Subsets of a group are [`ElementSet`]s.

mod families;
mod properties;
pub mod spec;
mod subgroups;

use thiserror::Error;

use crate::bitset::{ElementSet, MAX_ELEMENTS};

pub use families::{build_group, Permutation};
pub use properties::{group_properties, GroupProperties};
pub use spec::{parse_group_spec, GroupSpec, SpecError};
pub use subgroups::{
    all_subgroups, check_class_avoidance, minimal_nonabelian_subgroups, AvoidanceReport,
    AvoidanceWitness,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error(transparent)]
    Spec(#[from] SpecError),
    #[error("group order {order} exceeds the cap of {cap}")]
    OrderCap { order: u128, cap: usize },
    #[error("{what} needs subgroup enumeration, but |G| = {order} exceeds the cap of {cap}")]
    SubgroupCap { what: &'static str, order: usize, cap: usize },
    #[error("invalid multiplication table: {0}")]
    InvalidTable(String),
    #[error("invariant violated: {0}")]
    Invariant(String),
}

/// A finite group as a Cayley table.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    name: String,
    order: usize,
    mul: Vec<u8>,
    inv: Vec<u8>,
    labels: Vec<String>,
    perms: Option<Vec<Permutation>>,
}

impl FiniteGroup {
    /// Validate `mul` (row-major, `mul[a * n + b] = ab`) and build a group.
    ///
    /// The identity must be element 0. Associativity is established with
    /// Light's test on a generating set, which is exact.
    pub fn from_table(
        name: impl Into<String>,
        mul: Vec<usize>,
        labels: Vec<String>,
    ) -> Result<FiniteGroup, GroupError> {
        let n = labels.len();
        if n == 0 || n > MAX_ELEMENTS {
            return Err(GroupError::InvalidTable(format!("order {n} outside 1..={MAX_ELEMENTS}")));
        }
        if mul.len() != n * n {
            return Err(GroupError::InvalidTable("table is not square".into()));
        }
        if let Some(&bad) = mul.iter().find(|&&x| x >= n) {
            return Err(GroupError::InvalidTable(format!("entry {bad} out of range")));
        }
        for x in 0..n {
            if mul[x] != x || mul[x * n] != x {
                return Err(GroupError::InvalidTable("element 0 is not the identity".into()));
            }
        }
        let mut inv = vec![0u8; n];
        for a in 0..n {
            let Some(b) = (0..n).find(|&b| mul[a * n + b] == 0) else {
                return Err(GroupError::InvalidTable(format!("element {a} has no right inverse")));
            };
            if mul[b * n + a] != 0 {
                return Err(GroupError::InvalidTable(format!("element {a} has no two-sided inverse")));
            }
            inv[a] = b as u8;
        }
        let group = FiniteGroup {
            name: name.into(),
            order: n,
            mul: mul.into_iter().map(|x| x as u8).collect(),
            inv,
            labels,
            perms: None,
        };
        group.check_associative()?;
        Ok(group)
    }

    pub(crate) fn with_perms(mut self, perms: Vec<Permutation>) -> Self {
        debug_assert_eq!(perms.len(), self.order);
        self.perms = Some(perms);
        self
    }

    fn check_associative(&self) -> Result<(), GroupError> {
        let n = self.order;
        // Light's test: the set of g with (xg)y = x(gy) for all x, y is closed
        // under multiplication, so it is enough to test a generating set.
        let mut gens = Vec::new();
        let mut span = ElementSet::singleton(0);
        for g in 0..n {
            if !span.contains(g) {
                gens.push(g);
                span = self.product_closure(span.with(g));
            }
        }
        for &g in &gens {
            for x in 0..n {
                let xg = self.mul(x, g);
                for y in 0..n {
                    if self.mul(xg, y) != self.mul(x, self.mul(g, y)) {
                        return Err(GroupError::InvalidTable(format!(
                            "associativity fails for ({x}, {g}, {y})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Closure of a set under multiplication only.
    fn product_closure(&self, seed: ElementSet) -> ElementSet {
        let mut set = seed;
        let mut frontier: Vec<usize> = seed.iter().collect();
        while let Some(a) = frontier.pop() {
            for b in set.iter().collect::<Vec<_>>() {
                for c in [self.mul(a, b), self.mul(b, a)] {
                    if set.insert(c) {
                        frontier.push(c);
                    }
                }
            }
        }
        set
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        0
    }

    #[inline]
    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a * self.order + b] as usize
    }

    #[inline]
    pub fn inv(&self, a: usize) -> usize {
        self.inv[a] as usize
    }

    /// `a ▷ b = a b a⁻¹`.
    #[inline]
    pub fn conj(&self, a: usize, b: usize) -> usize {
        self.mul(self.mul(a, b), self.inv(a))
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn find_label(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Underlying permutations, for the symmetric and alternating families.
    pub fn permutations(&self) -> Option<&[Permutation]> {
        self.perms.as_deref()
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.order)
    }

    pub fn element_order(&self, a: usize) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    pub fn commute(&self, a: usize, b: usize) -> bool {
        self.mul(a, b) == self.mul(b, a)
    }

    pub fn is_abelian(&self) -> bool {
        (0..self.order).all(|a| (a + 1..self.order).all(|b| self.commute(a, b)))
    }

    /// `g S g⁻¹`.
    pub fn conjugate_set(&self, set: ElementSet, g: usize) -> ElementSet {
        set.iter().map(|x| self.conj(g, x)).collect()
    }

    /// Smallest subgroup containing `seed`.
    pub fn generated(&self, seed: ElementSet) -> ElementSet {
        let with_inverses: ElementSet = seed.iter().flat_map(|x| [x, self.inv(x)]).collect();
        self.product_closure(with_inverses.with(0))
    }

    pub fn is_subgroup(&self, set: ElementSet) -> bool {
        set.contains(0)
            && set.iter().all(|a| {
                set.contains(self.inv(a)) && set.iter().all(|b| set.contains(self.mul(a, b)))
            })
    }

    pub fn is_normal(&self, set: ElementSet) -> bool {
        (0..self.order).all(|g| self.conjugate_set(set, g) == set)
    }

    pub fn is_abelian_set(&self, set: ElementSet) -> bool {
        set.iter().all(|a| set.iter().all(|b| self.commute(a, b)))
    }

    /// Smallest normal subgroup containing `seed`.
    pub fn normal_closure(&self, seed: ElementSet) -> ElementSet {
        let classes = self.conjugacy_classes();
        let saturated = classes.saturate(seed);
        self.generated(saturated)
    }

    /// Subgroup generated by all commutators `[a, b]` with `a ∈ x`, `b ∈ y`.
    pub fn commutator_subgroup(&self, x: ElementSet, y: ElementSet) -> ElementSet {
        let comms: ElementSet = x
            .iter()
            .flat_map(|a| {
                y.iter().map(move |b| {
                    self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
                })
            })
            .collect();
        self.generated(comms)
    }

    /// Conjugacy classes, sorted by (size, smallest element index).
    pub fn conjugacy_classes(&self) -> ClassDecomposition {
        let n = self.order;
        let mut class_of = vec![usize::MAX; n];
        let mut classes = Vec::new();
        for x in 0..n {
            if class_of[x] != usize::MAX {
                continue;
            }
            let class: ElementSet = (0..n).map(|g| self.conj(g, x)).collect();
            for y in class.iter() {
                class_of[y] = 0;
            }
            classes.push(class);
        }
        classes.sort_by_key(|c| (c.len(), c.first()));
        for (id, c) in classes.iter().enumerate() {
            for y in c.iter() {
                class_of[y] = id;
            }
        }
        let center = classes.iter().filter(|c| c.len() == 1).fold(ElementSet::EMPTY, |a, &c| a.union(c));
        ClassDecomposition { classes, class_of, center }
    }

    /// Describe a subgroup with its normal / maximal / abelian flags.
    pub fn subgroup_handle(&self, elements: ElementSet) -> SubgroupHandle {
        debug_assert!(self.is_subgroup(elements));
        let all = self.all();
        let maximal = elements != all
            && all
                .difference(elements)
                .iter()
                .all(|g| self.generated(elements.with(g)) == all);
        SubgroupHandle {
            elements,
            normal: self.is_normal(elements),
            maximal,
            abelian: self.is_abelian_set(elements),
        }
    }

    pub fn subgroup_generated(&self, seed: ElementSet) -> SubgroupHandle {
        self.subgroup_handle(self.generated(seed))
    }

    /// Core (intersection of all conjugates) and normalizer of `h`.
    pub fn core_and_normalizer(&self, h: &SubgroupHandle) -> (SubgroupHandle, SubgroupHandle) {
        let mut core = h.elements;
        let mut normalizer = ElementSet::EMPTY;
        for g in 0..self.order {
            let conj = self.conjugate_set(h.elements, g);
            core = core.intersection(conj);
            if conj == h.elements {
                normalizer.insert(g);
            }
        }
        (self.subgroup_handle(core), self.subgroup_handle(normalizer))
    }

    pub fn center(&self) -> ElementSet {
        (0..self.order)
            .filter(|&a| (0..self.order).all(|b| self.commute(a, b)))
            .collect()
    }

    pub fn format_set(&self, set: ElementSet) -> String {
        let parts: Vec<&str> = set.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

/// Conjugacy classes of a group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassDecomposition {
    pub classes: Vec<ElementSet>,
    pub class_of: Vec<usize>,
    pub center: ElementSet,
}

impl ClassDecomposition {
    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.classes.iter().map(|c| c.len()).collect()
    }

    /// Union of all classes meeting `set`.
    pub fn saturate(&self, set: ElementSet) -> ElementSet {
        set.iter()
            .map(|x| self.classes[self.class_of[x]])
            .fold(ElementSet::EMPTY, ElementSet::union)
    }

    /// Ids of the classes meeting `set`.
    pub fn class_ids(&self, set: ElementSet) -> ElementSet {
        set.iter().map(|x| self.class_of[x]).collect()
    }

    /// Union of the classes with the given ids.
    pub fn union_of_ids(&self, ids: ElementSet) -> ElementSet {
        ids.iter().fold(ElementSet::EMPTY, |a, i| a.union(self.classes[i]))
    }

    pub fn is_class_union(&self, set: ElementSet) -> bool {
        self.saturate(set) == set
    }
}

/// A subgroup with structural flags relative to its ambient group.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SubgroupHandle {
    pub elements: ElementSet,
    pub normal: bool,
    pub maximal: bool,
    pub abelian: bool,
}

impl SubgroupHandle {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(s: &str) -> FiniteGroup {
        build_group(&parse_group_spec(s).unwrap(), 128).unwrap()
    }

    fn brute_force_classes(g: &FiniteGroup) -> Vec<usize> {
        let mut seen = ElementSet::EMPTY;
        let mut sizes = Vec::new();
        for x in 0..g.order() {
            if seen.contains(x) {
                continue;
            }
            let mut orbit = ElementSet::EMPTY;
            for y in 0..g.order() {
                // y x y^-1 via explicit search for the inverse
                let yi = (0..g.order()).find(|&z| g.mul(y, z) == 0).unwrap();
                orbit.insert(g.mul(g.mul(y, x), yi));
            }
            seen = seen.union(orbit);
            sizes.push(orbit.len());
        }
        sizes.sort();
        sizes
    }

    #[test]
    fn class_sizes() {
        assert_eq!(group("S3").conjugacy_classes().sizes(), vec![1, 2, 3]);
        for (s, expected) in [("D8", vec![1, 1, 2, 2, 2]), ("Q8", vec![1, 1, 2, 2, 2])] {
            let g = group(s);
            assert_eq!(brute_force_classes(&g), expected);
            assert_eq!(g.conjugacy_classes().sizes(), expected);
        }
        assert_eq!(group("SL(2,3)").conjugacy_classes().sizes(), vec![1, 1, 4, 4, 4, 4, 6]);
    }

    #[test]
    fn class_invariants_hold_across_catalog() {
        for s in ["Z1", "S4", "A5", "D18", "TV18", "SD16", "Q16", "Dic3", "S3xZ3", "Q8xZ2"] {
            let g = group(s);
            let cd = g.conjugacy_classes();
            assert_eq!(cd.sizes().iter().sum::<usize>(), g.order(), "{s}");
            assert!(cd.sizes().iter().all(|k| g.order().is_multiple_of(*k)), "{s}");
            assert_eq!(cd.center, g.center(), "{s}");
            assert_eq!(cd.center.len(), cd.sizes().iter().filter(|&&k| k == 1).count());
            assert_eq!(cd.classes[0], ElementSet::singleton(0));
        }
    }

    #[test]
    fn tv18_has_trivial_center() {
        let g = group("TV18");
        assert_eq!(g.order(), 18);
        let center: Vec<usize> =
            (0..18).filter(|&a| (0..18).all(|b| g.mul(a, b) == g.mul(b, a))).collect();
        assert_eq!(center, vec![0]);
    }

    #[test]
    fn generated_subgroups() {
        let s3 = group("S3");
        let c3 = s3.find_label("(123)").unwrap();
        let h = s3.subgroup_generated(ElementSet::singleton(c3));
        let labels: Vec<&str> = h.elements.iter().map(|i| s3.label(i)).collect();
        assert_eq!(labels, vec!["e", "(123)", "(132)"]);
        assert!(h.normal && h.maximal && h.abelian);
        assert_eq!(s3.subgroup_generated(ElementSet::EMPTY).elements, ElementSet::singleton(0));

        let s4 = group("S4");
        let a = s4.find_label("(1234)").unwrap();
        let b = s4.find_label("(1324)").unwrap();
        assert_eq!(s4.generated([a, b].into_iter().collect()), s4.all());
    }

    #[test]
    fn cores_and_normalizers() {
        let s3 = group("S3");
        let t = s3.subgroup_generated(ElementSet::singleton(s3.find_label("(12)").unwrap()));
        let (core, norm) = s3.core_and_normalizer(&t);
        assert_eq!(core.elements, ElementSet::singleton(0));
        assert_eq!(norm.elements, t.elements);

        let d8 = group("D8");
        for h in all_subgroups(&d8, 48).unwrap().iter().filter(|h| h.order() == 4) {
            assert_eq!(d8.core_and_normalizer(h).1.elements, d8.all());
        }

        let s4 = group("S4");
        let stab: ElementSet = (0..24)
            .filter(|&i| s4.permutations().unwrap()[i].image(3) == 3)
            .collect();
        let h = s4.subgroup_handle(stab);
        assert_eq!(h.order(), 6);
        assert!(h.maximal && !h.normal);
        let (core, _) = s4.core_and_normalizer(&h);
        assert_eq!(core.elements, ElementSet::singleton(0));
    }

    #[test]
    fn rejects_non_group_tables() {
        let labels = vec!["e".to_string(), "a".to_string()];
        assert!(FiniteGroup::from_table("bad", vec![0, 1, 1, 1], labels.clone()).is_err());
        assert!(FiniteGroup::from_table("ok", vec![0, 1, 1, 0], labels).is_ok());
        // a Latin square with identity that is not associative (order 5 loop)
        let loop5 = vec![
            0, 1, 2, 3, 4, 1, 0, 3, 4, 2, 2, 4, 0, 1, 3, 3, 2, 4, 0, 1, 4, 3, 1, 2, 0,
        ];
        let labels: Vec<String> = (0..5).map(|i| i.to_string()).collect();
        assert!(matches!(
            FiniteGroup::from_table("loop", loop5, labels),
            Err(GroupError::InvalidTable(_))
        ));
    }

    #[test]
    fn associativity_exhaustive_for_small_catalog() {
        for s in ["S4", "SL(2,3)", "TV18", "SD16", "Q16", "Dic3", "D8xZ3", "Q8xZ2"] {
            let g = group(s);
            let n = g.order();
            for a in 0..n {
                assert_eq!(g.mul(a, g.inv(a)), 0);
                for b in 0..n {
                    let ab = g.mul(a, b);
                    for c in 0..n {
                        assert_eq!(g.mul(ab, c), g.mul(a, g.mul(b, c)), "{s}");
                    }
                }
            }
        }
    }
}
