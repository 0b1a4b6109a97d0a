//! Finite racks stored as operation tables.
//!
//! A rack is a set with a binary operation `▷` that is self-distributive,
//! `a ▷ (b ▷ c) = (a ▷ b) ▷ (a ▷ c)`, and whose left translations
//! `b ↦ a ▷ b` are bijections. Conjugation `a ▷ b = a b a⁻¹` on any subset of
//! a group that is closed under it gives a rack (in fact a quandle).

mod iso;
mod spec;

use thiserror::Error;

use crate::bitset::{ElementSet, MAX_ELEMENTS};
use crate::groups::{FiniteGroup, GroupError, Permutation};

pub use iso::{is_isomorphism, rack_isomorphism, rack_profile, ISOMORPHISM_CAP};
pub use spec::{build_rack, parse_rack_spec, RackFilter, RackOptions, RackSpec};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RackError {
    #[error("operation table is not square ({rows} rows, row {row} has {len} entries)")]
    NotSquare { rows: usize, row: usize, len: usize },
    #[error("rack of size {0} exceeds the limit of {MAX_ELEMENTS}")]
    TooLarge(usize),
    #[error("entry {value} at ({a}, {b}) is out of range")]
    OutOfRange { a: usize, b: usize, value: usize },
    #[error("row {row} is not a bijection")]
    NotBijective { row: usize },
    #[error("self-distributivity fails for ({a}, {b}, {c})")]
    NotSelfDistributive { a: usize, b: usize, c: usize },
    #[error("subset is not closed under conjugation: {a} ▷ {b} leaves it")]
    NotClosed { a: String, b: String },
    #[error("filter {filter} needs a symmetric or alternating group, got {group}")]
    NotPermutationFamily { filter: String, group: String },
    #[error("{group} has no element labelled {label:?}")]
    UnknownLabel { group: String, label: String },
    #[error("rack spec syntax error at position {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("rack size {size} exceeds the cap of {cap}")]
    SizeCap { size: usize, cap: usize },
    #[error(transparent)]
    Group(#[from] GroupError),
}

/// Where a rack came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Provenance {
    /// Rack or group spec text.
    pub spec: String,
    /// Indices of the rack elements in the ambient group, when a Cayley
    /// table was built.
    pub subset: Option<ElementSet>,
}

/// A finite rack given by its operation table and the table of the inverse
/// operation (`inv_op(a, b)` is the unique `c` with `a ▷ c = b`).
#[derive(Debug, Clone)]
pub struct Rack {
    size: usize,
    op: Vec<u8>,
    inv_op: Vec<u8>,
    labels: Vec<String>,
    provenance: Option<Provenance>,
    perms: Option<Vec<Permutation>>,
}

/// Conjugation rack `a ▷ b = a b a⁻¹` on a subset of `g` closed under it.
pub fn conjugation_rack(g: &FiniteGroup, subset: ElementSet) -> Result<Rack, RackError> {
    Rack::conjugation(g, subset)
}

/// Smallest subrack of `r` containing `seed`.
pub fn subrack_closure(r: &Rack, seed: ElementSet) -> ElementSet {
    r.closure(seed)
}

/// Validate an operation table (`table[a][b] = a ▷ b`) and build a rack.
pub fn validate_rack(table: &[Vec<usize>]) -> Result<Rack, RackError> {
    let labels = (0..table.len()).map(|i| i.to_string()).collect();
    Rack::from_table(table, labels)
}

impl Rack {
    pub fn from_table(table: &[Vec<usize>], labels: Vec<String>) -> Result<Rack, RackError> {
        let n = table.len();
        if n > MAX_ELEMENTS {
            return Err(RackError::TooLarge(n));
        }
        debug_assert_eq!(labels.len(), n);
        let mut op = Vec::with_capacity(n * n);
        for (a, row) in table.iter().enumerate() {
            if row.len() != n {
                return Err(RackError::NotSquare { rows: n, row: a, len: row.len() });
            }
            for (b, &v) in row.iter().enumerate() {
                if v >= n {
                    return Err(RackError::OutOfRange { a, b, value: v });
                }
                op.push(v as u8);
            }
        }
        Self::from_flat(n, op, labels)
    }

    fn from_flat(n: usize, op: Vec<u8>, labels: Vec<String>) -> Result<Rack, RackError> {
        let mut inv_op = vec![u8::MAX; n * n];
        for a in 0..n {
            for b in 0..n {
                let c = op[a * n + b] as usize;
                if inv_op[a * n + c] != u8::MAX {
                    return Err(RackError::NotBijective { row: a });
                }
                inv_op[a * n + c] = b as u8;
            }
        }
        let rack = Rack { size: n, op, inv_op, labels, provenance: None, perms: None };
        for a in 0..n {
            for b in 0..n {
                let ab = rack.op(a, b);
                for c in 0..n {
                    if rack.op(a, rack.op(b, c)) != rack.op(ab, rack.op(a, c)) {
                        return Err(RackError::NotSelfDistributive { a, b, c });
                    }
                }
            }
        }
        Ok(rack)
    }

    /// The conjugation rack on `subset` of `g`; elements are ordered by group
    /// index.
    pub fn conjugation(g: &FiniteGroup, subset: ElementSet) -> Result<Rack, RackError> {
        let elems: Vec<usize> = subset.iter().collect();
        let mut pos = vec![usize::MAX; g.order()];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let n = elems.len();
        let mut op = Vec::with_capacity(n * n);
        for &a in &elems {
            for &b in &elems {
                let c = g.conj(a, b);
                if !subset.contains(c) {
                    return Err(RackError::NotClosed {
                        a: g.label(a).to_string(),
                        b: g.label(b).to_string(),
                    });
                }
                op.push(pos[c] as u8);
            }
        }
        let labels = elems.iter().map(|&x| g.label(x).to_string()).collect();
        let mut rack = Self::from_flat(n, op, labels)?;
        rack.provenance = Some(Provenance { spec: g.name().to_string(), subset: Some(subset) });
        Ok(rack)
    }

    /// Conjugation rack on a set of permutations, kept in the given order.
    pub fn from_permutations(perms: Vec<Permutation>) -> Result<Rack, RackError> {
        let n = perms.len();
        if n > MAX_ELEMENTS {
            return Err(RackError::TooLarge(n));
        }
        let index: std::collections::HashMap<&Permutation, usize> =
            perms.iter().enumerate().map(|(i, p)| (p, i)).collect();
        let mut op = Vec::with_capacity(n * n);
        for a in &perms {
            for b in &perms {
                let c = a.conjugate(b);
                let Some(&i) = index.get(&c) else {
                    return Err(RackError::NotClosed { a: a.to_string(), b: b.to_string() });
                };
                op.push(i as u8);
            }
        }
        let labels = perms.iter().map(|p| p.to_string()).collect();
        let mut rack = Self::from_flat(n, op, labels)?;
        rack.perms = Some(perms);
        Ok(rack)
    }

    /// Dihedral quandle on Z/n: `a ▷ b = 2a - b`.
    pub fn dihedral_quandle(n: usize) -> Rack {
        let table: Vec<Vec<usize>> =
            (0..n).map(|a| (0..n).map(|b| (2 * a + n - b) % n).collect()).collect();
        validate_rack(&table).expect("dihedral quandle")
    }

    /// Permutation rack: `a ▷ b = σ(b)` for a fixed permutation σ. Not a
    /// quandle unless σ is the identity.
    pub fn permutation_rack(sigma: &Permutation) -> Rack {
        let n = sigma.degree();
        let table: Vec<Vec<usize>> = (0..n).map(|_| (0..n).map(|b| sigma.image(b)).collect()).collect();
        validate_rack(&table).expect("permutation rack")
    }

    pub(crate) fn set_provenance(&mut self, spec: String) {
        match &mut self.provenance {
            Some(p) => p.spec = spec,
            None => self.provenance = Some(Provenance { spec, subset: None }),
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn op(&self, a: usize, b: usize) -> usize {
        self.op[a * self.size + b] as usize
    }

    /// The unique `c` with `a ▷ c = b`.
    #[inline]
    pub fn inv_op(&self, a: usize, b: usize) -> usize {
        self.inv_op[a * self.size + b] as usize
    }

    pub fn label(&self, a: usize) -> &str {
        &self.labels[a]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn provenance(&self) -> Option<&Provenance> {
        self.provenance.as_ref()
    }

    /// Underlying permutations, for racks built from permutations.
    pub fn permutations(&self) -> Option<&[Permutation]> {
        self.perms.as_deref()
    }

    pub fn all(&self) -> ElementSet {
        ElementSet::full(self.size)
    }

    pub fn table(&self) -> Vec<Vec<usize>> {
        (0..self.size).map(|a| (0..self.size).map(|b| self.op(a, b)).collect()).collect()
    }

    pub fn is_quandle(&self) -> bool {
        (0..self.size).all(|a| self.op(a, a) == a)
    }

    /// Smallest subrack containing `seed`: closed under `▷` and its inverse.
    pub fn closure(&self, seed: ElementSet) -> ElementSet {
        let closed = self.close_with(seed, true);
        debug_assert_eq!(closed, self.close_with(seed, false), "▷-closure must already be a subrack");
        closed
    }

    /// Closure under `▷` alone. For finite racks this coincides with
    /// [`Rack::closure`].
    pub fn closure_op_only(&self, seed: ElementSet) -> ElementSet {
        self.close_with(seed, false)
    }

    /// Closure of `closed ∪ extra`, where `closed` is already a subrack.
    pub fn extend_closure(&self, closed: ElementSet, extra: ElementSet) -> ElementSet {
        debug_assert!(self.is_subrack(closed));
        self.close_from(closed, extra.difference(closed), false)
    }

    fn close_with(&self, seed: ElementSet, with_inverse: bool) -> ElementSet {
        self.close_from(ElementSet::EMPTY, seed, with_inverse)
    }

    fn close_from(&self, done: ElementSet, seed: ElementSet, with_inverse: bool) -> ElementSet {
        let mut done = done;
        let mut set = done.union(seed);
        let mut todo = seed;
        while let Some(x) = todo.first() {
            todo.remove(x);
            done.insert(x);
            for y in done.iter() {
                let mut push = |z: usize| {
                    if set.insert(z) {
                        todo.insert(z);
                    }
                };
                push(self.op(x, y));
                push(self.op(y, x));
                if with_inverse {
                    push(self.inv_op(x, y));
                    push(self.inv_op(y, x));
                }
            }
        }
        set
    }

    /// Whether `set` with the restricted operation is a rack.
    pub fn is_subrack(&self, set: ElementSet) -> bool {
        set.iter().all(|a| set.iter().all(|b| set.contains(self.op(a, b)) && set.contains(self.inv_op(a, b))))
    }

    /// The rack on `set` with the restricted operation, elements in index
    /// order.
    pub fn restrict(&self, set: ElementSet) -> Result<Rack, RackError> {
        let elems: Vec<usize> = set.iter().collect();
        let mut pos = vec![usize::MAX; self.size];
        for (i, &x) in elems.iter().enumerate() {
            pos[x] = i;
        }
        let mut table = Vec::with_capacity(elems.len());
        for &a in &elems {
            let mut row = Vec::with_capacity(elems.len());
            for &b in &elems {
                let c = self.op(a, b);
                if !set.contains(c) {
                    return Err(RackError::NotClosed {
                        a: self.label(a).to_string(),
                        b: self.label(b).to_string(),
                    });
                }
                row.push(pos[c]);
            }
            table.push(row);
        }
        let labels = elems.iter().map(|&x| self.label(x).to_string()).collect();
        let mut r = Rack::from_table(&table, labels)?;
        if let Some(perms) = &self.perms {
            r.perms = Some(elems.iter().map(|&x| perms[x].clone()).collect());
        }
        Ok(r)
    }

    pub fn format_set(&self, set: ElementSet) -> String {
        let parts: Vec<&str> = set.iter().map(|i| self.label(i)).collect();
        format!("{{{}}}", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::groups::{build_group, parse_group_spec};
    use proptest::prelude::*;

    fn group(s: &str) -> FiniteGroup {
        build_group(&parse_group_spec(s).unwrap(), 128).unwrap()
    }

    #[test]
    fn one_element_rack() {
        let r = validate_rack(&[vec![0]]).unwrap();
        assert!(r.is_quandle());
        assert_eq!(r.size(), 1);
        let empty = validate_rack(&[]).unwrap();
        assert_eq!(empty.size(), 0);
    }

    #[test]
    fn conjugation_table_of_s3_is_valid() {
        let g = group("S3");
        let table: Vec<Vec<usize>> =
            (0..6).map(|a| (0..6).map(|b| g.conj(a, b)).collect()).collect();
        let r = validate_rack(&table).unwrap();
        assert!(r.is_quandle());
    }

    #[test]
    fn rejects_non_racks() {
        assert_eq!(
            validate_rack(&[vec![0, 0], vec![0, 1]]).unwrap_err(),
            RackError::NotBijective { row: 0 }
        );
        assert!(matches!(validate_rack(&[vec![0, 1], vec![0]]), Err(RackError::NotSquare { .. })));
        assert!(matches!(validate_rack(&[vec![2]]), Err(RackError::OutOfRange { .. })));
        // bijective rows, not self-distributive: a ▷ b = b + a + 1 mod 3
        let t: Vec<Vec<usize>> = (0..3).map(|a| (0..3).map(|b| (a + b + 1) % 3).collect()).collect();
        assert!(matches!(validate_rack(&t), Err(RackError::NotSelfDistributive { .. })));
    }

    #[test]
    fn quandle_detection() {
        assert!(Rack::dihedral_quandle(5).is_quandle());
        let sigma = Permutation::from_cycles(3, &[&[1, 2, 3]]);
        assert!(!Rack::permutation_rack(&sigma).is_quandle());
    }

    #[test]
    fn conjugation_racks() {
        let s3 = group("S3");
        let r = Rack::conjugation(&s3, s3.all()).unwrap();
        assert_eq!(r.size(), 6);
        assert!(r.is_quandle());

        let s4 = group("S4");
        let four_cycles: ElementSet = (0..24)
            .filter(|&i| s4.permutations().unwrap()[i].cycle_type() == vec![4])
            .collect();
        let r = Rack::conjugation(&s4, four_cycles).unwrap();
        assert_eq!(r.size(), 6);
        assert!(r.is_quandle());

        let bad: ElementSet =
            [s4.find_label("(12)").unwrap(), s4.find_label("(1234)").unwrap()].into_iter().collect();
        assert!(matches!(Rack::conjugation(&s4, bad), Err(RackError::NotClosed { .. })));
    }

    #[test]
    fn closure_examples() {
        let r = build_rack(&parse_rack_spec("S4:cycles(4)").unwrap(), &Default::default()).unwrap();
        let find = |l: &str| r.labels().iter().position(|x| x == l).unwrap();
        let a = ElementSet::singleton(find("(1234)"));
        assert_eq!(r.closure(a), a);
        let ab = a.with(find("(1324)"));
        assert_eq!(r.closure(ab), r.all());
        assert_eq!(r.closure(ElementSet::EMPTY), ElementSet::EMPTY);
    }

    #[test]
    fn closure_for_non_quandles() {
        let sigma = Permutation::from_cycles(5, &[&[1, 2, 3], &[4, 5]]);
        let r = Rack::permutation_rack(&sigma);
        let c = r.closure(ElementSet::singleton(0));
        assert_eq!(c, [0, 1, 2].into_iter().collect());
        assert!(r.is_subrack(c));
    }

    fn sample_racks() -> Vec<Rack> {
        let mut out = vec![Rack::dihedral_quandle(6), Rack::dihedral_quandle(7)];
        out.push(Rack::permutation_rack(&Permutation::from_cycles(6, &[&[1, 2], &[3, 4, 5]])));
        for s in ["S4", "D12", "SL(2,3)", "A4:class((123))", "A5:cycles(5)"] {
            out.push(build_rack(&parse_rack_spec(s).unwrap(), &Default::default()).unwrap());
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_is_a_closure_operator(which in 0usize..8, seed in any::<u128>(), extra in any::<u128>()) {
            let racks = sample_racks();
            let r = &racks[which];
            let a = ElementSet::from_bits(seed).intersection(r.all());
            let b = a.union(ElementSet::from_bits(extra).intersection(r.all()));
            let ca = r.closure(a);
            prop_assert!(a.is_subset(ca));
            prop_assert_eq!(r.closure(ca), ca);
            prop_assert!(ca.is_subset(r.closure(b)));
            prop_assert!(r.is_subrack(ca));
            prop_assert_eq!(ca, r.closure_op_only(a));
            // fixed points are exactly the subsets that restrict to racks
            prop_assert_eq!(r.closure(a) == a, r.restrict(a).is_ok());
        }

        #[test]
        fn generating_subracks_are_class_unions(which in 0usize..4, seed in any::<u128>()) {
            let g = group(["S4", "SL(2,3)", "D12", "TV18"][which]);
            let r = Rack::conjugation(&g, g.all()).unwrap();
            let q = r.closure(ElementSet::from_bits(seed).intersection(g.all()));
            if g.generated(q) == g.all() {
                prop_assert!(g.conjugacy_classes().is_class_union(q));
            }
        }
    }

    #[test]
    fn conjugation_racks_pass_validation() {
        for r in sample_racks().iter().skip(3) {
            assert!(r.is_quandle());
            assert!(validate_rack(&r.table()).is_ok());
        }
    }
}
