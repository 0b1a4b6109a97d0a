//! Rack specifications: a group spec with an optional element filter, e.g.
//! `S4:cycles(4)`, `D8:noncentral`, `SL(2,3):class([11;01])`.

use std::collections::VecDeque;
use std::fmt;

use super::{Rack, RackError};
use crate::bitset::MAX_ELEMENTS;
use crate::groups::{build_group, parse_group_spec, GroupSpec, Permutation};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum RackFilter {
    All,
    Noncentral,
    Transpositions,
    Cycles(usize),
    Class(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RackSpec {
    pub group: GroupSpec,
    pub filter: RackFilter,
}

impl fmt::Display for RackFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RackFilter::All => f.write_str("all"),
            RackFilter::Noncentral => f.write_str("noncentral"),
            RackFilter::Transpositions => f.write_str("transpositions"),
            RackFilter::Cycles(k) => write!(f, "cycles({k})"),
            RackFilter::Class(l) => write!(f, "class({l})"),
        }
    }
}

impl fmt::Display for RackSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.filter {
            RackFilter::All => write!(f, "{}", self.group),
            _ => write!(f, "{}:{}", self.group, self.filter),
        }
    }
}

impl std::str::FromStr for RackSpec {
    type Err = RackError;
    fn from_str(s: &str) -> Result<Self, RackError> {
        parse_rack_spec(s)
    }
}

/// Parse `GROUPSPEC[":" FILTER]`.
pub fn parse_rack_spec(text: &str) -> Result<RackSpec, RackError> {
    let (group_text, filter_text) = match text.find(':') {
        Some(i) => (&text[..i], Some((i + 1, &text[i + 1..]))),
        None => (text, None),
    };
    let group = parse_group_spec(group_text).map_err(crate::groups::GroupError::from)?;
    let Some((offset, f)) = filter_text else {
        return Ok(RackSpec { group, filter: RackFilter::All });
    };
    let syntax = |pos: usize, message: &str| RackError::Syntax { pos: offset + pos, message: message.into() };
    let filter = match f {
        "all" => RackFilter::All,
        "noncentral" => RackFilter::Noncentral,
        "transpositions" => RackFilter::Transpositions,
        _ if f.starts_with("cycles(") => {
            let inner = f["cycles(".len()..]
                .strip_suffix(')')
                .ok_or_else(|| syntax(f.len(), "expected ')'"))?;
            let k: usize = inner.parse().map_err(|_| syntax("cycles(".len(), "expected an integer"))?;
            if k < 2 {
                return Err(syntax("cycles(".len(), "cycle length must be at least 2"));
            }
            RackFilter::Cycles(k)
        }
        _ if f.starts_with("class(") => {
            let inner = f["class(".len()..]
                .strip_suffix(')')
                .ok_or_else(|| syntax(f.len(), "expected ')'"))?;
            if inner.is_empty() {
                return Err(syntax("class(".len(), "expected an element label"));
            }
            RackFilter::Class(inner.to_string())
        }
        _ => return Err(syntax(0, "unknown filter")),
    };
    Ok(RackSpec { group, filter })
}

/// Limits used when building racks.
#[derive(Debug, Clone, Copy)]
pub struct RackOptions {
    /// Largest group whose Cayley table may be built.
    pub max_order: usize,
}

impl Default for RackOptions {
    fn default() -> Self {
        RackOptions { max_order: MAX_ELEMENTS }
    }
}

/// Build the rack a spec describes.
///
/// Symmetric and alternating groups are handled through their permutations
/// directly, so filters such as `A6:cycles(3)` work even when the whole group
/// is too large for a Cayley table.
pub fn build_rack(spec: &RackSpec, opts: &RackOptions) -> Result<Rack, RackError> {
    let mut rack = match &spec.group {
        GroupSpec::Symmetric(n) => permutation_family_rack(*n, false, &spec.filter, &spec.group)?,
        GroupSpec::Alternating(n) => permutation_family_rack(*n, true, &spec.filter, &spec.group)?,
        other => {
            if matches!(spec.filter, RackFilter::Transpositions | RackFilter::Cycles(_)) {
                return Err(RackError::NotPermutationFamily {
                    filter: spec.filter.to_string(),
                    group: other.to_string(),
                });
            }
            let g = build_group(other, opts.max_order)?;
            let subset = match &spec.filter {
                RackFilter::All => g.all(),
                RackFilter::Noncentral => g.all().difference(g.center()),
                RackFilter::Class(label) => {
                    let x = g.find_label(label).ok_or_else(|| RackError::UnknownLabel {
                        group: g.name().to_string(),
                        label: label.clone(),
                    })?;
                    let classes = g.conjugacy_classes();
                    classes.classes[classes.class_of[x]]
                }
                RackFilter::Transpositions | RackFilter::Cycles(_) => unreachable!(),
            };
            Rack::conjugation(&g, subset)?
        }
    };
    rack.set_provenance(spec.to_string());
    Ok(rack)
}

fn permutation_family_rack(
    n: usize,
    even_only: bool,
    filter: &RackFilter,
    group: &GroupSpec,
) -> Result<Rack, RackError> {
    let gens = generators(n, even_only);
    let in_group = |p: &Permutation| !even_only || p.is_even();
    let perms: Vec<Permutation> = match filter {
        RackFilter::All => Permutation::all(n).into_iter().filter(|p| in_group(p)).collect(),
        RackFilter::Noncentral => Permutation::all(n)
            .into_iter()
            .filter(|p| in_group(p) && gens.iter().any(|g| g.compose(p) != p.compose(g)))
            .collect(),
        RackFilter::Transpositions => k_cycles(n, 2, even_only),
        RackFilter::Cycles(k) => k_cycles(n, *k, even_only),
        RackFilter::Class(label) => {
            let unknown = || RackError::UnknownLabel { group: group.to_string(), label: label.clone() };
            let x = parse_cycle_notation(n, label).ok_or_else(unknown)?;
            if !in_group(&x) {
                return Err(unknown());
            }
            let mut orbit = orbit(&x, &gens);
            orbit.sort();
            orbit
        }
    };
    if perms.len() > MAX_ELEMENTS {
        return Err(RackError::TooLarge(perms.len()));
    }
    Rack::from_permutations(perms)
}

/// Generators of S_n, or of A_n when `even_only`.
fn generators(n: usize, even_only: bool) -> Vec<Permutation> {
    if n < 2 {
        return vec![];
    }
    if even_only {
        (3..=n as u8).map(|i| Permutation::from_cycles(n, &[&[1, 2, i]])).collect()
    } else {
        let long: Vec<u8> = (1..=n as u8).collect();
        vec![Permutation::from_cycles(n, &[&[1, 2]]), Permutation::from_cycles(n, &[&long])]
    }
}

fn orbit(x: &Permutation, gens: &[Permutation]) -> Vec<Permutation> {
    let mut seen = std::collections::HashSet::from([x.clone()]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(p) = queue.pop_front() {
        for g in gens {
            let q = g.conjugate(&p);
            if seen.insert(q.clone()) {
                queue.push_back(q);
            }
        }
    }
    seen.into_iter().collect()
}

/// All k-cycles on n points (even ones only when `even_only`), in
/// lexicographic order of image lists.
fn k_cycles(n: usize, k: usize, even_only: bool) -> Vec<Permutation> {
    if even_only && k.is_multiple_of(2) {
        return vec![];
    }
    Permutation::all(n).into_iter().filter(|p| p.cycle_type() == [k]).collect()
}

/// Parse 1-based cycle notation such as `(123)(45)`; `e` is the identity.
fn parse_cycle_notation(n: usize, text: &str) -> Option<Permutation> {
    if text == "e" {
        return Some(Permutation::identity(n));
    }
    let mut cycles: Vec<Vec<u8>> = Vec::new();
    let mut seen = vec![false; n + 1];
    let mut rest = text;
    while !rest.is_empty() {
        let body = rest.strip_prefix('(')?;
        let close = body.find(')')?;
        let mut cyc = Vec::new();
        for ch in body[..close].chars() {
            let d = ch.to_digit(10)? as usize;
            if d == 0 || d > n || std::mem::replace(&mut seen[d], true) {
                return None;
            }
            cyc.push(d as u8);
        }
        if cyc.len() < 2 {
            return None;
        }
        cycles.push(cyc);
        rest = &body[close + 1..];
    }
    let refs: Vec<&[u8]> = cycles.iter().map(Vec::as_slice).collect();
    Some(Permutation::from_cycles(n, &refs))
}

/// Subset of a Cayley-table group selected by a filter; used to cross-check
/// the permutation path.
#[cfg(test)]
pub(crate) fn filter_subset(g: &crate::groups::FiniteGroup, filter: &RackFilter) -> crate::bitset::ElementSet {
    let perms = g.permutations().expect("permutation group");
    match filter {
        RackFilter::All => g.all(),
        RackFilter::Noncentral => g.all().difference(g.center()),
        RackFilter::Transpositions => (0..g.order()).filter(|&i| perms[i].cycle_type() == [2]).collect(),
        RackFilter::Cycles(k) => (0..g.order()).filter(|&i| perms[i].cycle_type() == [*k]).collect(),
        RackFilter::Class(l) => {
            let c = g.conjugacy_classes();
            c.classes[c.class_of[g.find_label(l).unwrap()]]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rack(s: &str) -> Rack {
        build_rack(&parse_rack_spec(s).unwrap(), &RackOptions::default()).unwrap()
    }

    #[test]
    fn parses_filters() {
        let s = parse_rack_spec("S4:cycles(4)").unwrap();
        assert_eq!(s.group, GroupSpec::Symmetric(4));
        assert_eq!(s.filter, RackFilter::Cycles(4));
        assert_eq!(parse_rack_spec("D8").unwrap().filter, RackFilter::All);
        assert_eq!(parse_rack_spec("SL(2,3):class([11;01])").unwrap().filter, RackFilter::Class("[11;01]".into()));
        for s in ["S5:transpositions", "D8:noncentral", "A5:cycles(5)", "Q8", "S4:class((12))"] {
            assert_eq!(parse_rack_spec(s).unwrap().to_string(), s);
        }
        assert!(matches!(parse_rack_spec("S4:cycles(x)"), Err(RackError::Syntax { pos: 10, .. })));
        assert!(matches!(parse_rack_spec("S4:bogus"), Err(RackError::Syntax { pos: 3, .. })));
        assert!(matches!(parse_rack_spec("S4:cycles(4"), Err(RackError::Syntax { .. })));
        assert!(matches!(parse_rack_spec("Y4:all"), Err(RackError::Group(_))));
    }

    #[test]
    fn rack_sizes() {
        assert_eq!(rack("S4:cycles(4)").size(), 6);
        assert_eq!(rack("S5:transpositions").size(), 10);
        assert_eq!(rack("A5:cycles(5)").size(), 24);
        assert_eq!(rack("A6:cycles(3)").size(), 40);
        assert_eq!(rack("A4:cycles(3)").size(), 8);
        assert_eq!(rack("D8:noncentral").size(), 6);
        assert_eq!(rack("Q8").size(), 8);
        assert_eq!(rack("S3:noncentral").size(), 5);
        // the 5-cycles of A5 split into two classes
        assert_eq!(rack("A5:class((12345))").size(), 12);
        assert_eq!(rack("S5:class((12345))").size(), 24);
        assert_eq!(rack("SL(2,3):class([11;01])").size(), 4);
        assert_eq!(rack("A4:cycles(2)").size(), 0);
    }

    #[test]
    fn filter_errors() {
        let opts = RackOptions::default();
        let e = build_rack(&parse_rack_spec("D8:transpositions").unwrap(), &opts).unwrap_err();
        assert!(matches!(e, RackError::NotPermutationFamily { .. }));
        let e = build_rack(&parse_rack_spec("A4:class((12))").unwrap(), &opts).unwrap_err();
        assert!(matches!(e, RackError::UnknownLabel { .. }));
        let e = build_rack(&parse_rack_spec("D8:class(zz)").unwrap(), &opts).unwrap_err();
        assert!(matches!(e, RackError::UnknownLabel { .. }));
        let e = build_rack(&parse_rack_spec("S6").unwrap(), &opts).unwrap_err();
        assert_eq!(e, RackError::TooLarge(720));
        let e = build_rack(&parse_rack_spec("D8xZ3").unwrap(), &RackOptions { max_order: 16 }).unwrap_err();
        assert!(matches!(e, RackError::Group(_)));
    }

    #[test]
    fn permutation_path_matches_cayley_tables() {
        for s in ["S4", "S4:noncentral", "S4:cycles(3)", "A4:class((123))", "A5:cycles(5)", "S5:transpositions"] {
            let spec = parse_rack_spec(s).unwrap();
            let r = build_rack(&spec, &RackOptions::default()).unwrap();
            let g = build_group(&spec.group, 128).unwrap();
            let via_group = Rack::conjugation(&g, filter_subset(&g, &spec.filter)).unwrap();
            assert_eq!(r.labels(), via_group.labels(), "{s}");
            assert_eq!(r.table(), via_group.table(), "{s}");
        }
    }

    #[test]
    fn cycle_notation() {
        let p = parse_cycle_notation(5, "(123)(45)").unwrap();
        assert_eq!(p.to_string(), "(123)(45)");
        assert!(parse_cycle_notation(3, "(14)").is_none());
        assert!(parse_cycle_notation(3, "(121)").is_none());
        assert!(parse_cycle_notation(3, "(1)").is_none());
        assert_eq!(parse_cycle_notation(3, "e").unwrap(), Permutation::identity(3));
    }
}
