use std::path::Path;

use anyhow::Context;
use racklab_core::groups::{build_group, group_properties, parse_group_spec};
use racklab_core::lattice::{enumerate_subracks, LatticeOptions, SubrackLattice};
use racklab_core::racks::{build_rack, parse_rack_spec, RackOptions};
use racklab_core::topology::{is_homology_sphere, order_complex, reduced_homology, HomologyOptions, SIMPLEX_BUDGET};
use serde_json::json;

use crate::Limits;

/// Subgroup enumeration bound used for solvability data.
const SUBGROUP_CAP: usize = 64;

fn rack_options(limits: &Limits) -> RackOptions {
    let mut opts = RackOptions::default();
    if let Some(m) = limits.max_order {
        opts.max_order = m;
    }
    opts
}

fn lattice_options(limits: &Limits) -> LatticeOptions {
    let mut opts = LatticeOptions::default();
    if let Some(b) = limits.budget_nodes {
        opts.node_budget = b;
    }
    opts
}

fn print(value: &serde_json::Value) -> anyhow::Result<()> {
    write_stdout(&(serde_json::to_string_pretty(value)? + "\n"))
}

/// Write to stdout, treating a closed pipe as success.
pub fn write_stdout(text: &str) -> anyhow::Result<()> {
    use std::io::Write;
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => Ok(r?),
    }
}

pub fn group(spec: &str, limits: &Limits) -> anyhow::Result<()> {
    let parsed = parse_group_spec(spec).with_context(|| format!("cannot parse group {spec:?}"))?;
    let g = build_group(&parsed, rack_options(limits).max_order)?;
    let classes = g.conjugacy_classes();
    let mut sizes = classes.sizes();
    sizes.sort_unstable();
    print(&json!({
        "spec": parsed.to_string(),
        "order": g.order(),
        "class_count": classes.len(),
        "class_sizes": sizes,
        "center": g.center().iter().map(|x| g.label(x)).collect::<Vec<_>>(),
        "properties": group_properties(&g, SUBGROUP_CAP),
    }))
}

fn build_lattice(spec: &str, limits: &Limits) -> anyhow::Result<SubrackLattice> {
    let parsed = parse_rack_spec(spec).with_context(|| format!("cannot parse rack {spec:?}"))?;
    let rack = build_rack(&parsed, &rack_options(limits))?;
    Ok(enumerate_subracks(&rack, &lattice_options(limits))?)
}

pub fn lattice(spec: &str, export: Option<&Path>, limits: &Limits) -> anyhow::Result<()> {
    let l = build_lattice(spec, limits)?;
    if let Some(path) = export {
        std::fs::write(path, l.export()).with_context(|| format!("cannot write {}", path.display()))?;
    }
    let g = l.gradedness();
    print(&json!({
        "spec": l.spec(),
        "rack_size": l.labels().len(),
        "nodes": l.len(),
        "covers": l.poset().cover_count(),
        "atoms": l.atoms().len(),
        "coatoms": l.coatoms().iter().map(|&c| l.format_node(c)).collect::<Vec<_>>(),
        "atomic": l.is_atomic(),
        "graded": g.is_graded,
        "chain_lengths": g.chain_lengths,
    }))
}

pub fn homology(spec: &str, collapse: bool, limits: &Limits) -> anyhow::Result<()> {
    let l = build_lattice(spec, limits)?;
    let budget = limits.budget_simplices.unwrap_or(SIMPLEX_BUDGET);
    let k = order_complex(l.poset(), budget)?.complex;
    let h = reduced_homology(&k, &HomologyOptions { collapse });
    let sphere = (-1..=h.dimension).find(|&d| is_homology_sphere(&h, d));
    print(&json!({
        "spec": l.spec(),
        "lattice_nodes": l.len(),
        "betti_numbers": h.betti_numbers(),
        "nonzero_dimensions": h.nonzero_dimensions(),
        "torsion_free": h.is_torsion_free(),
        "sphere_dimension": sphere,
        "homology": h,
    }))
}
