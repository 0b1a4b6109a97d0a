//! Line-oriented text format for subrack lattices.
//!
//! ```text
//! racklab-lattice v1
//! spec S4:cycles(4)
//! labels 6
//! label 0 (1234)
//! ...
//! nodes 11
//! node 0 00000000000000000000000000000000
//! ...
//! covers 15
//! cover 0 1
//! ...
//! ```

use std::collections::HashMap;
use std::fmt::Write;

use super::{BoundedPoset, LatticeError, SubrackLattice};
use crate::bitset::ElementSet;

const MAGIC: &str = "racklab-lattice v1";

impl SubrackLattice {
    pub fn export(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{MAGIC}").unwrap();
        writeln!(out, "spec {}", self.spec).unwrap();
        writeln!(out, "labels {}", self.labels.len()).unwrap();
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(out, "label {i} {l}").unwrap();
        }
        writeln!(out, "nodes {}", self.nodes.len()).unwrap();
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(out, "node {i} {}", n.to_hex()).unwrap();
        }
        writeln!(out, "covers {}", self.poset.cover_count()).unwrap();
        for (x, y) in self.poset.cover_pairs() {
            writeln!(out, "cover {x} {y}").unwrap();
        }
        out
    }

    /// Parse the output of [`SubrackLattice::export`]. The result has no
    /// rack attached; joins fall back to a scan of the node list.
    pub fn import(text: &str) -> Result<SubrackLattice, LatticeError> {
        let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
        let mut next = |expect: &str| -> Result<(usize, String), LatticeError> {
            let (no, line) = lines.next().ok_or(LatticeError::Parse {
                line: 0,
                message: format!("unexpected end of input, expected {expect:?}"),
            })?;
            let rest = line.strip_prefix(expect).ok_or_else(|| LatticeError::Parse {
                line: no,
                message: format!("expected {expect:?}"),
            })?;
            Ok((no, rest.strip_prefix(' ').unwrap_or(rest).to_string()))
        };
        let err = |line: usize, message: &str| LatticeError::Parse { line, message: message.into() };
        let num = |line: usize, s: &str| s.parse::<usize>().map_err(|_| err(line, "expected a number"));

        next(MAGIC)?;
        let (_, spec) = next("spec")?;
        let (no, n) = next("labels")?;
        let n = num(no, &n)?;
        if n > crate::bitset::MAX_ELEMENTS {
            return Err(err(no, "too many labels"));
        }
        let mut labels = Vec::with_capacity(n);
        for i in 0..n {
            let (no, rest) = next("label")?;
            let (id, label) = rest.split_once(' ').ok_or_else(|| err(no, "expected id and label"))?;
            if num(no, id)? != i {
                return Err(err(no, "labels out of order"));
            }
            labels.push(label.to_string());
        }
        let (no, count) = next("nodes")?;
        let count = num(no, &count)?;
        if count == 0 {
            return Err(err(no, "a lattice has at least one node"));
        }
        let mut nodes = Vec::with_capacity(count);
        for i in 0..count {
            let (no, rest) = next("node")?;
            let (id, hex) = rest.split_once(' ').ok_or_else(|| err(no, "expected id and bitset"))?;
            if num(no, id)? != i {
                return Err(err(no, "nodes out of order"));
            }
            let set = ElementSet::from_hex(hex).ok_or_else(|| err(no, "bad bitset"))?;
            if !set.is_subset(ElementSet::full(n)) {
                return Err(err(no, "bitset mentions an unknown element"));
            }
            if let Some(prev) = nodes.last() {
                if ElementSet::canonical_cmp(prev, &set) != std::cmp::Ordering::Less {
                    return Err(err(no, "nodes not in canonical order"));
                }
            }
            nodes.push(set);
        }
        if nodes[0] != ElementSet::EMPTY || nodes[count - 1] != ElementSet::full(n) {
            return Err(err(0, "first node must be empty and last node the whole rack"));
        }
        let (no, edges) = next("covers")?;
        let edges = num(no, &edges)?;
        let mut up = vec![Vec::new(); count];
        let mut has_down = vec![false; count];
        for _ in 0..edges {
            let (no, rest) = next("cover")?;
            let (a, b) = rest.split_once(' ').ok_or_else(|| err(no, "expected two node ids"))?;
            let (a, b) = (num(no, a)?, num(no, b)?);
            if a >= count || b >= count || !nodes[a].is_proper_subset(nodes[b]) {
                return Err(err(no, "cover must join a node to a strictly larger node"));
            }
            up[a].push(b as u32);
            has_down[b] = true;
        }
        for x in 0..count {
            if (x > 0 && !has_down[x]) || (x + 1 < count && up[x].is_empty()) {
                return Err(err(0, "cover relation does not connect every node to bottom and top"));
            }
            up[x].sort_unstable();
        }
        let index: HashMap<ElementSet, u32> =
            nodes.iter().enumerate().map(|(i, &s)| (s, i as u32)).collect();
        Ok(SubrackLattice {
            spec,
            labels,
            nodes,
            index,
            poset: BoundedPoset::from_up_covers(up),
            rack: None,
        })
    }
}
