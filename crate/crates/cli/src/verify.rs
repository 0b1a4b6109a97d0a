//! The verification suite behind `racklab verify`.

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};
use std::time::Instant;

use anyhow::bail;
use racklab_core::groups::{
    all_subgroups, build_group, check_class_avoidance, group_properties, parse_group_spec, FiniteGroup,
};
use racklab_core::lattice::{
    compute_m, enumerate_subracks, group_lattice, int_lattice, is_boolean, product_decomposition_check,
    LatticeError, LatticeOptions, SubrackLattice,
};
use racklab_core::partitions::{
    compare_fiber_homology, k_equal_lattice, quillen_fiber_check, transposition_rack_isomorphism, ComparisonStatus,
};
use racklab_core::racks::{
    build_rack, is_isomorphism, parse_rack_spec, rack_isomorphism, validate_rack, Rack, RackOptions, ISOMORPHISM_CAP,
};
use racklab_core::topology::{
    boundary_squares_to_zero, is_homology_sphere, order_complex, reduced_homology, HomologyOptions, TopologyError,
    SIMPLEX_BUDGET,
};
use racklab_core::ElementSet;
use serde::Serialize;
use serde_json::{json, Value};

use crate::Limits;

const SUITE_VERSION: u32 = 1;
const SUBGROUP_CAP: usize = 128;

const ABELIAN: &[&str] = &[
    "Z1", "Z2", "Z3", "Z4", "Z2xZ2", "Z5", "Z6", "Z7", "Z8", "Z4xZ2", "Z2xZ2xZ2", "Z9", "Z3xZ3", "Z10", "Z11",
    "Z12", "Z6xZ2", "Z13", "Z14", "Z15", "Z16", "Z8xZ2", "Z4xZ4", "Z4xZ2xZ2", "Z2xZ2xZ2xZ2",
];
const NONABELIAN: &[&str] = &[
    "S3", "D8", "Q8", "D10", "D12", "A4", "Dic3", "D14", "D16", "Q16", "SD16", "S3xZ2", "S3xZ3", "D8xZ2", "Q8xZ2",
    "TV18", "S4", "SL(2,3)",
];
/// Groups used by the chain-length check on top of the catalog.
const EXTRA: &[&str] = &["D18", "D8xZ3", "Q8xZ3"];
const GRADED_NONABELIAN: &[&str] = &["S3", "D8", "Q8"];
const SPHERE_GROUPS: &[&str] =
    &["Z2", "Z3", "Z4", "Z5", "Z6", "S3", "D8", "Q8", "D10", "A4", "D12", "Dic3", "S4", "SL(2,3)"];

fn catalog() -> Vec<&'static str> {
    ABELIAN.iter().chain(NONABELIAN).copied().collect()
}

fn wide_catalog() -> Vec<&'static str> {
    catalog().into_iter().chain(EXTRA.iter().copied()).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub max_order: Option<usize>,
    pub lattice: LatticeOptions,
    pub simplex_budget: usize,
}

impl From<Limits> for Settings {
    fn from(l: Limits) -> Self {
        let mut lattice = LatticeOptions::default();
        if let Some(b) = l.budget_nodes {
            lattice.node_budget = b;
        }
        Settings { max_order: l.max_order, lattice, simplex_budget: l.budget_simplices.unwrap_or(SIMPLEX_BUDGET) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

/// Where the expected values of a check come from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Basis {
    /// A stated result.
    Published,
    /// Computed independently.
    Derived,
    /// An algebraic law checked on many instances.
    Property,
}

pub struct Check {
    pub id: &'static str,
    pub anchor: &'static str,
    basis: Basis,
    run: fn(&Ctx) -> Outcome,
}

struct Outcome {
    status: Status,
    computed: Value,
    expected: Value,
    reason: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub basis: Basis,
    pub computed: Value,
    pub expected: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Default, Serialize)]
pub struct Summary {
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Serialize)]
pub struct VerificationReport {
    pub suite: &'static str,
    pub version: u32,
    pub settings: Value,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
}

pub const CHECKS: &[Check] = &[
    Check {
        id: "boolean-abelian",
        anchor: "the subrack lattice of G is Boolean exactly when G is abelian",
        basis: Basis::Published,
        run: boolean_abelian,
    },
    Check {
        id: "class-avoidance",
        anchor: "every proper subgroup misses some conjugacy class",
        basis: Basis::Published,
        run: class_avoidance,
    },
    Check {
        id: "coatom-int",
        anchor: "coatoms are the complements of single classes and their meets form a Boolean lattice on 2^c elements",
        basis: Basis::Published,
        run: coatom_int,
    },
    Check {
        id: "complex-consistency",
        anchor: "boundary maps compose to zero and Euler characteristics agree",
        basis: Basis::Property,
        run: complex_consistency,
    },
    Check {
        id: "d8-q8-rack-iso",
        anchor: "the conjugation racks of D8 and Q8 are isomorphic",
        basis: Basis::Published,
        run: d8_q8_rack_iso,
    },
    Check {
        id: "five-cycles",
        anchor: "the 5-cycles of A5 have 94 subracks and maximal chains of two lengths",
        basis: Basis::Derived,
        run: five_cycles,
    },
    Check {
        id: "four-cycles",
        anchor: "the 4-cycles of S4 have 11 subracks and a disconnected one-dimensional order complex",
        basis: Basis::Published,
        run: four_cycles,
    },
    Check {
        id: "graded-classification",
        anchor: "the subrack lattice of G is graded exactly for abelian G and S3, D8, Q8",
        basis: Basis::Published,
        run: graded_classification,
    },
    Check {
        id: "kequal-fibers",
        anchor: "the orbit map from 3-cycles of A6 onto the 3-equal lattice has fibers with unique maxima",
        basis: Basis::Published,
        run: kequal_fibers,
    },
    Check {
        id: "lattice-brute-force",
        anchor: "subrack enumeration and closures agree with exhaustive search on racks of at most 14 elements",
        basis: Basis::Property,
        run: lattice_brute_force,
    },
    Check {
        id: "m-of-g",
        anchor: "M(G) is empty exactly for nilpotent G and consists of non-normal maximal subgroups for solvable G",
        basis: Basis::Published,
        run: m_of_g,
    },
    Check {
        id: "maxsg-chains",
        anchor: "non-graded subrack lattices contain maximal chains of the prescribed lengths",
        basis: Basis::Published,
        run: maxsg_chains,
    },
    Check {
        id: "partition-iso",
        anchor: "subracks of transpositions of S_n correspond to set partitions of n points",
        basis: Basis::Published,
        run: partition_iso,
    },
    Check {
        id: "product-decomposition",
        anchor: "the subrack lattice is the product of the non-central part and the Boolean lattice on the centre",
        basis: Basis::Published,
        run: product_decomposition,
    },
    Check {
        id: "rack-axioms",
        anchor: "every constructed rack satisfies the rack and quandle axioms",
        basis: Basis::Property,
        run: rack_axioms,
    },
    Check {
        id: "sphere-theorem",
        anchor: "the order complex of the subrack lattice of G is a homology sphere of dimension c(G) - 2",
        basis: Basis::Published,
        run: sphere_theorem,
    },
];

/// Resolve the requested checks, sorted by id.
pub fn select(all: bool, ids: &[String]) -> anyhow::Result<Vec<&'static Check>> {
    if all {
        return Ok(CHECKS.iter().collect());
    }
    if ids.is_empty() {
        bail!("no checks selected; pass --all or --check ID");
    }
    let mut out = Vec::new();
    for id in ids {
        match CHECKS.iter().find(|c| c.id == id) {
            Some(c) => out.push(c),
            None => bail!("unknown check {id:?}; use --list"),
        }
    }
    out.sort_by_key(|c| c.id);
    out.dedup_by_key(|c| c.id);
    Ok(out)
}

/// Run the checks on up to `jobs` threads and assemble the report in id
/// order.
pub fn run(checks: &[&'static Check], settings: &Settings, jobs: Option<usize>, timings: bool) -> VerificationReport {
    let ctx = Ctx { settings: *settings, groups: Mutex::default(), lattices: Mutex::default() };
    let workers = jobs
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, checks.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<CheckRecord>>> = Mutex::new((0..checks.len()).map(|_| None).collect());
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::Relaxed);
                let Some(check) = checks.get(i) else { break };
                let start = Instant::now();
                let outcome = catch_unwind(AssertUnwindSafe(|| (check.run)(&ctx))).unwrap_or_else(|e| {
                    let msg = e
                        .downcast_ref::<String>()
                        .cloned()
                        .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                        .unwrap_or_default();
                    Outcome {
                        status: Status::Fail,
                        computed: Value::Null,
                        expected: Value::Null,
                        reason: Some(format!("panicked: {msg}")),
                    }
                });
                let record = CheckRecord {
                    id: check.id.to_string(),
                    anchor: check.anchor.to_string(),
                    status: outcome.status,
                    basis: check.basis,
                    computed: outcome.computed,
                    expected: outcome.expected,
                    reason: outcome.reason,
                    runtime_ms: timings.then(|| start.elapsed().as_millis() as u64),
                };
                results.lock().unwrap()[i] = Some(record);
            });
        }
    });
    let mut records: Vec<CheckRecord> = results.into_inner().unwrap().into_iter().map(Option::unwrap).collect();
    records.sort_by(|a, b| a.id.cmp(&b.id));
    let mut summary = Summary::default();
    for r in &records {
        match r.status {
            Status::Pass => summary.passed += 1,
            Status::Fail => summary.failed += 1,
            Status::Skipped => summary.skipped += 1,
        }
    }
    VerificationReport {
        suite: "racklab-verify",
        version: SUITE_VERSION,
        settings: json!({
            "max_order": settings.max_order,
            "budget_nodes": settings.lattice.node_budget,
            "budget_simplices": settings.simplex_budget,
        }),
        checks: records,
        summary,
    }
}

pub fn to_csv(report: &VerificationReport, timings: bool) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["id", "status", "basis", "anchor", "reason", "computed", "expected"];
    if timings {
        header.push("runtime_ms");
    }
    w.write_record(&header)?;
    for r in &report.checks {
        let mut row = vec![
            r.id.clone(),
            serde_json::to_value(r.status)?.as_str().unwrap_or_default().to_string(),
            serde_json::to_value(r.basis)?.as_str().unwrap_or_default().to_string(),
            r.anchor.clone(),
            r.reason.clone().unwrap_or_default(),
            serde_json::to_string(&r.computed)?,
            serde_json::to_string(&r.expected)?,
        ];
        if timings {
            row.push(r.runtime_ms.map(|t| t.to_string()).unwrap_or_default());
        }
        w.write_record(&row)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

type Slot<T> = Arc<OnceLock<Result<Arc<T>, Miss>>>;

#[derive(Debug, Clone)]
enum Miss {
    Skip(String),
    Error(String),
}

/// Shared state of one run. Group lattices are built once and reused by
/// every check that needs them.
struct Ctx {
    settings: Settings,
    groups: Mutex<HashMap<String, Slot<FiniteGroup>>>,
    lattices: Mutex<HashMap<String, Slot<SubrackLattice>>>,
}

fn slot<T>(map: &Mutex<HashMap<String, Slot<T>>>, key: &str) -> Slot<T> {
    map.lock().unwrap().entry(key.to_string()).or_default().clone()
}

impl Ctx {
    fn group(&self, spec: &str) -> Result<Arc<FiniteGroup>, Miss> {
        let parsed = parse_group_spec(spec).map_err(|e| Miss::Error(e.to_string()))?;
        if let Some(m) = self.settings.max_order {
            if parsed.order() > m as u128 {
                return Err(Miss::Skip(format!("order {} exceeds max order {m}", parsed.order())));
            }
        }
        slot(&self.groups, spec)
            .get_or_init(|| build_group(&parsed, SUBGROUP_CAP).map(Arc::new).map_err(|e| Miss::Error(e.to_string())))
            .clone()
    }

    fn lattice(&self, spec: &str) -> Result<Arc<SubrackLattice>, Miss> {
        let g = self.group(spec)?;
        slot(&self.lattices, spec)
            .get_or_init(|| match group_lattice(&g, &self.settings.lattice) {
                Ok(l) => Ok(Arc::new(l)),
                Err(e @ (LatticeError::Budget { .. } | LatticeError::RackCap { .. })) => Err(Miss::Skip(e.to_string())),
                Err(e) => Err(Miss::Error(e.to_string())),
            })
            .clone()
    }

    fn rack_lattice(&self, spec: &str) -> Result<(Rack, SubrackLattice), Miss> {
        let parsed = parse_rack_spec(spec).map_err(|e| Miss::Error(e.to_string()))?;
        let rack = build_rack(&parsed, &RackOptions::default()).map_err(|e| Miss::Error(e.to_string()))?;
        match enumerate_subracks(&rack, &self.settings.lattice) {
            Ok(l) => Ok((rack, l)),
            Err(e @ (LatticeError::Budget { .. } | LatticeError::RackCap { .. })) => Err(Miss::Skip(e.to_string())),
            Err(e) => Err(Miss::Error(e.to_string())),
        }
    }

    fn complex_homology(
        &self,
        l: &SubrackLattice,
        collapse: bool,
    ) -> Result<(racklab_core::topology::SimplicialComplex, racklab_core::topology::HomologyResult), Miss> {
        let k = match order_complex(l.poset(), self.settings.simplex_budget) {
            Ok(oc) => oc.complex,
            Err(e @ TopologyError::SimplexBudget { .. }) => return Err(Miss::Skip(e.to_string())),
        };
        let h = reduced_homology(&k, &HomologyOptions { collapse });
        Ok((k, h))
    }
}

/// Per-item results of a check that loops over groups or racks.
#[derive(Default)]
struct Sweep {
    rows: Vec<Value>,
    skipped: Vec<Value>,
    failures: Vec<String>,
}

impl Sweep {
    fn run<I: AsRef<str>>(items: impl IntoIterator<Item = I>, mut f: impl FnMut(&str) -> Result<(bool, Value), Miss>) -> Sweep {
        let mut s = Sweep::default();
        for item in items {
            let name = item.as_ref();
            match f(name) {
                Ok((ok, mut row)) => {
                    if let Value::Object(m) = &mut row {
                        m.insert("item".into(), json!(name));
                        m.insert("ok".into(), json!(ok));
                    }
                    if !ok {
                        s.failures.push(name.to_string());
                    }
                    s.rows.push(row);
                }
                Err(Miss::Skip(reason)) => s.skipped.push(json!({ "item": name, "reason": reason })),
                Err(Miss::Error(e)) => {
                    s.failures.push(name.to_string());
                    s.rows.push(json!({ "item": name, "ok": false, "error": e }));
                }
            }
        }
        s
    }

    fn outcome(self, expected: Value) -> Outcome {
        let status = if !self.failures.is_empty() {
            Status::Fail
        } else if self.rows.is_empty() {
            Status::Skipped
        } else {
            Status::Pass
        };
        let reason = match status {
            Status::Fail => Some(format!("failed for {}", self.failures.join(", "))),
            Status::Skipped => Some("every item was skipped".to_string()),
            Status::Pass => None,
        };
        Outcome {
            status,
            computed: json!({ "rows": self.rows, "skipped": self.skipped }),
            expected,
            reason,
        }
    }
}

fn single(ok: bool, computed: Value, expected: Value) -> Outcome {
    Outcome {
        status: if ok { Status::Pass } else { Status::Fail },
        computed,
        expected,
        reason: (!ok).then(|| "computed values differ from expected".to_string()),
    }
}

fn skipped(reason: String, expected: Value) -> Outcome {
    Outcome { status: Status::Skipped, computed: Value::Null, expected, reason: Some(reason) }
}

fn failed(reason: String, expected: Value) -> Outcome {
    Outcome { status: Status::Fail, computed: Value::Null, expected, reason: Some(reason) }
}

fn sphere_theorem(ctx: &Ctx) -> Outcome {
    Sweep::run(SPHERE_GROUPS, |spec| {
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let (_, h) = ctx.complex_homology(&l, true)?;
        let c = g.conjugacy_classes().len() as isize;
        Ok((
            is_homology_sphere(&h, c - 2),
            json!({
                "classes": c,
                "sphere_dimension": c - 2,
                "nonzero_dimensions": h.nonzero_dimensions(),
                "betti_numbers": h.betti_numbers(),
                "torsion_free": h.is_torsion_free(),
            }),
        ))
    })
    .outcome(json!({ "homology": "Z in dimension c - 2, zero elsewhere, no torsion" }))
}

fn graded_classification(ctx: &Ctx) -> Outcome {
    Sweep::run(catalog(), |spec| {
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let report = l.gradedness();
        let expected = g.is_abelian() || GRADED_NONABELIAN.contains(&spec);
        Ok((
            report.is_graded == expected,
            json!({ "graded": report.is_graded, "expected_graded": expected, "chain_lengths": report.chain_lengths }),
        ))
    })
    .outcome(json!({ "graded": "abelian groups and S3, D8, Q8", "not_graded": "every other catalog group" }))
}

fn maxsg_chains(ctx: &Ctx) -> Outcome {
    // (group, lengths that must occur, (subgroup order, length through it))
    let table: &[(&str, &[usize], &[(usize, usize)])] = &[
        ("SL(2,3)", &[10, 8], &[(8, 10), (6, 8)]),
        ("D18", &[10, 8], &[]),
        ("TV18", &[10, 8], &[]),
        ("S3xZ2", &[8, 7], &[]),
        ("D8xZ3", &[18, 16], &[]),
        ("Q8xZ3", &[18, 16], &[]),
    ];
    let expected: Value = table
        .iter()
        .map(|(g, lengths, through)| {
            json!({ "group": g, "lengths": lengths, "through_subgroup_of_order": through })
        })
        .collect();
    Sweep::run(table.iter().map(|t| t.0), |spec| {
        let (_, lengths, through) = table.iter().find(|t| t.0 == spec).unwrap();
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let report = l.gradedness();
        let mut ok = lengths.iter().all(|n| report.chain_lengths.contains(n));
        let mut witnesses = Vec::new();
        if !through.is_empty() {
            let subs = all_subgroups(&g, SUBGROUP_CAP).map_err(|e| Miss::Error(e.to_string()))?;
            for &(order, length) in *through {
                let chain = subs
                    .iter()
                    .filter(|h| h.order() == order)
                    .filter_map(|h| l.id_of(h.elements))
                    .find_map(|x| l.poset().maximal_chain_through(x, length));
                ok &= chain.is_some();
                witnesses.push(json!({
                    "subgroup_order": order,
                    "length": length,
                    "chain_sizes": chain.map(|c| c.iter().map(|&x| l.node(x).len()).collect::<Vec<_>>()),
                }));
            }
        }
        Ok((ok, json!({ "chain_lengths": report.chain_lengths, "witnesses": witnesses })))
    })
    .outcome(expected)
}

fn coatom_int(ctx: &Ctx) -> Outcome {
    Sweep::run(wide_catalog(), |spec| {
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let classes = g.conjugacy_classes();
        let mut expected: Vec<ElementSet> = classes.classes.iter().map(|&c| g.all().difference(c)).collect();
        let mut coatoms: Vec<ElementSet> = l.coatoms().into_iter().map(|c| l.node(c)).collect();
        expected.sort_by(|a, b| a.canonical_cmp(b));
        coatoms.sort_by(|a, b| a.canonical_cmp(b));
        let int = int_lattice(&l);
        let boolean = is_boolean(&int);
        let c = classes.len();
        let ok = expected == coatoms && boolean && int.len() == 1usize << c;
        Ok((
            ok,
            json!({
                "classes": c,
                "coatoms": coatoms.len(),
                "coatoms_are_class_complements": expected == coatoms,
                "int_size": int.len(),
                "int_boolean": boolean,
            }),
        ))
    })
    .outcome(json!({ "coatoms": "G minus one class, for each class", "int": "Boolean with 2^c elements" }))
}

fn m_of_g(ctx: &Ctx) -> Outcome {
    Sweep::run(wide_catalog(), |spec| {
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let err = |e: &dyn std::fmt::Display| Miss::Error(e.to_string());
        let props = group_properties(&g, SUBGROUP_CAP);
        let subs = all_subgroups(&g, SUBGROUP_CAP).map_err(|e| err(&e))?;
        let m = compute_m(&g, &l).map_err(|e| err(&e))?;
        let mut members: Vec<ElementSet> = m.members.iter().map(|e| l.node(e.node)).collect();
        let mut non_normal_max: Vec<ElementSet> =
            subs.iter().filter(|h| h.maximal && !h.normal).map(|h| h.elements).collect();
        members.sort_by(|a, b| a.canonical_cmp(b));
        non_normal_max.sort_by(|a, b| a.canonical_cmp(b));
        let empty_iff_nilpotent = members.is_empty() == props.nilpotent;
        let equals_non_normal_max = !props.solvable || members == non_normal_max;
        let non_normal_subgroups = members.iter().all(|&x| g.is_subgroup(x) && !g.is_normal(x));
        let maximal: Vec<ElementSet> = members
            .iter()
            .copied()
            .filter(|&x| subs.iter().any(|h| h.maximal && h.elements == x))
            .collect();
        let self_normalizing =
            maximal.iter().all(|&x| g.core_and_normalizer(&g.subgroup_handle(x)).1.elements == x);
        let classes = g.conjugacy_classes();
        let conjugate = |a: ElementSet, b: ElementSet| (0..g.order()).any(|t| g.conjugate_set(a, t) == b);
        let distinct_closures = !props.solvable
            || maximal.iter().enumerate().all(|(i, &a)| {
                maximal[i + 1..].iter().all(|&b| conjugate(a, b) || classes.saturate(a) != classes.saturate(b))
            });
        let ok = empty_iff_nilpotent && equals_non_normal_max && non_normal_subgroups && self_normalizing && distinct_closures;
        Ok((
            ok,
            json!({
                "nilpotent": props.nilpotent,
                "solvable": props.solvable,
                "members": members.len(),
                "member_orders": members.iter().map(|x| x.len()).collect::<Vec<_>>(),
                "non_normal_maximal_subgroups": non_normal_max.len(),
                "conditions_satisfied": m.satisfied,
                "empty_iff_nilpotent": empty_iff_nilpotent,
                "equals_non_normal_maximal": equals_non_normal_max,
                "members_non_normal_subgroups": non_normal_subgroups,
                "maximal_members_self_normalizing": self_normalizing,
                "non_conjugate_maximal_have_distinct_closures": distinct_closures,
            }),
        ))
    })
    .outcome(json!({
        "empty": "exactly when G is nilpotent",
        "solvable": "M(G) equals the set of non-normal maximal subgroups",
        "members": "non-normal subgroups; maximal ones self-normalizing; non-conjugate maximal ones have distinct closures",
    }))
}

fn boolean_abelian(ctx: &Ctx) -> Outcome {
    Sweep::run(wide_catalog(), |spec| {
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let boolean = is_boolean(l.nodes());
        Ok((boolean == g.is_abelian(), json!({ "boolean": boolean, "abelian": g.is_abelian() })))
    })
    .outcome(json!({ "boolean": "exactly the abelian groups" }))
}

/// Bell numbers from the Bell triangle.
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

fn partition_iso(_: &Ctx) -> Outcome {
    let expected: Value = (3..=5).map(|n| json!({ "n": n, "bell": bell(n) })).collect();
    Sweep::run(["3", "4", "5"], |item| {
        let n: usize = item.parse().unwrap();
        let r = transposition_rack_isomorphism(n).map_err(|e| Miss::Error(e.to_string()))?;
        let ok = r.pass && r.subracks == bell(n) && r.partitions == bell(n);
        Ok((ok, serde_json::to_value(r).unwrap()))
    })
    .outcome(expected)
}

fn four_cycles(ctx: &Ctx) -> Outcome {
    let expected = json!({ "subracks": 11, "proper_part_components": 3, "h0_rank": 2, "dimension": 1 });
    let (_, l) = match ctx.rack_lattice("S4:cycles(4)") {
        Ok(x) => x,
        Err(Miss::Skip(r)) => return skipped(r, expected),
        Err(Miss::Error(e)) => return failed(e, expected),
    };
    let (k, h) = match ctx.complex_homology(&l, true) {
        Ok(x) => x,
        Err(Miss::Skip(r)) => return skipped(r, expected),
        Err(Miss::Error(e)) => return failed(e, expected),
    };
    let (bottom, top) = (l.bottom(), l.top());
    let proper: Vec<usize> = (0..l.len()).filter(|&x| x != bottom && x != top).collect();
    let mut parent: Vec<usize> = (0..l.len()).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        if p[x] != x {
            p[x] = find(p, p[x]);
        }
        p[x]
    }
    for (a, b) in l.poset().cover_pairs() {
        if a != bottom && b != top {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent[ra] = rb;
        }
    }
    let mut roots: Vec<usize> = proper.iter().map(|&x| find(&mut parent, x)).collect();
    roots.sort_unstable();
    roots.dedup();
    let computed = json!({
        "subracks": l.len(),
        "proper_part_components": roots.len(),
        "h0_rank": h.rank(0),
        "dimension": k.dim(),
        "graded": l.gradedness().is_graded,
    });
    let ok = l.len() == 11 && roots.len() == 3 && h.rank(0) == 2 && k.dim() == 1;
    single(ok, computed, expected)
}

fn five_cycles(ctx: &Ctx) -> Outcome {
    let expected = json!({
        "subracks": 94,
        "graded": false,
        "chain_lengths_present": [5, 4],
        "note": "lengths count covers from the empty subrack to the whole rack; counting elements of chains in other ways gives 5 and 3",
    });
    let (_, l) = match ctx.rack_lattice("A5:cycles(5)") {
        Ok(x) => x,
        Err(Miss::Skip(r)) => return skipped(r, expected),
        Err(Miss::Error(e)) => return failed(e, expected),
    };
    let g = l.gradedness();
    let sizes = |c: &[usize]| c.iter().map(|&x| l.node(x).len()).collect::<Vec<_>>();
    let computed = json!({
        "subracks": l.len(),
        "graded": g.is_graded,
        "chain_lengths": g.chain_lengths,
        "short_chain_sizes": sizes(&g.witness_short),
        "long_chain_sizes": sizes(&g.witness_long),
    });
    let ok = l.len() == 94 && !g.is_graded && g.chain_lengths.contains(&5) && g.chain_lengths.contains(&4);
    single(ok, computed, expected)
}

fn kequal_fibers(ctx: &Ctx) -> Outcome {
    let expected = json!({
        "image": "the 3-equal lattice on 6 points",
        "fibers": "each has a unique maximum",
        "k_equal_nonzero_dimensions": "at least two",
        "comparison": "match, or skipped(budget)",
    });
    let fibers = match quillen_fiber_check(6, 3) {
        Ok(f) => f,
        Err(e) => return failed(e.to_string(), expected),
    };
    let comparison = match compare_fiber_homology(6, 3, &ctx.settings.lattice, ctx.settings.simplex_budget, &HomologyOptions::default()) {
        Ok(c) => c,
        Err(racklab_core::partitions::PartitionError::Topology(e)) => return skipped(e.to_string(), expected),
        Err(e) => return failed(e.to_string(), expected),
    };
    let dims = comparison.k_equal.nonzero_dimensions();
    let status = match comparison.status {
        ComparisonStatus::Match => "match",
        ComparisonStatus::Mismatch => "mismatch",
        ComparisonStatus::SkippedBudget => "skipped(budget)",
    };
    let kl = k_equal_lattice(6, 3).map(|k| k.len()).unwrap_or(0);
    let computed = json!({
        "subracks": fibers.subracks,
        "k_equal_size": kl,
        "image_is_k_equal_lattice": fibers.image_is_k_equal_lattice,
        "order_preserving": fibers.order_preserving,
        "fibers": fibers.fibers.len(),
        "fibers_with_unique_maximum": fibers.fibers.iter().filter(|f| f.unique_max).count(),
        "k_equal_nonzero_dimensions": dims,
        "k_equal_betti_numbers": comparison.k_equal.betti_numbers(),
        "rack_betti_numbers": comparison.rack.as_ref().map(|h| h.betti_numbers()),
        "comparison": status,
    });
    let ok = fibers.pass && dims.len() >= 2 && comparison.status != ComparisonStatus::Mismatch;
    single(ok, computed, expected)
}

fn d8_q8_rack_iso(_: &Ctx) -> Outcome {
    let expected = json!({ "isomorphic": true });
    let build = |s: &str| build_rack(&parse_rack_spec(s).unwrap(), &RackOptions::default());
    let (d8, q8) = match (build("D8"), build("Q8")) {
        (Ok(a), Ok(b)) => (a, b),
        (Err(e), _) | (_, Err(e)) => return failed(e.to_string(), expected),
    };
    match rack_isomorphism(&d8, &q8, ISOMORPHISM_CAP) {
        Ok(Some(f)) => {
            let verified = is_isomorphism(&d8, &q8, &f);
            let map: Vec<[&str; 2]> = f.iter().enumerate().map(|(i, &j)| [d8.label(i), q8.label(j)]).collect();
            single(verified, json!({ "isomorphic": true, "verified": verified, "map": map }), expected)
        }
        Ok(None) => single(false, json!({ "isomorphic": false }), expected),
        Err(e) => failed(e.to_string(), expected),
    }
}

fn class_avoidance(ctx: &Ctx) -> Outcome {
    Sweep::run(wide_catalog(), |spec| {
        let g = ctx.group(spec)?;
        match check_class_avoidance(&g, SUBGROUP_CAP) {
            Ok(r) => Ok((true, json!({ "proper_subgroups": r.witnesses.len() }))),
            Err(e) => Ok((false, json!({ "error": e.to_string() }))),
        }
    })
    .outcome(json!({ "every_proper_subgroup": "misses at least one class" }))
}

fn product_decomposition(ctx: &Ctx) -> Outcome {
    let specs: Vec<&str> = wide_catalog()
        .into_iter()
        .filter(|s| ctx.group(s).map_or(true, |g| g.center().len() > 1))
        .collect();
    Sweep::run(specs, |spec| {
        let g = ctx.group(spec)?;
        let l = ctx.lattice(spec)?;
        let r = product_decomposition_check(&g, &l, &ctx.settings.lattice).map_err(|e| Miss::Error(e.to_string()))?;
        Ok((r.pass, serde_json::to_value(r).unwrap()))
    })
    .outcome(json!({ "size": "|R(noncentral)| * 2^|Z|", "covers": "preserved" }))
}

/// Racks checked by the property sweeps besides full conjugation racks.
const EXAMPLE_RACKS: &[&str] = &[
    "S4:cycles(4)",
    "S4:transpositions",
    "A4:cycles(3)",
    "D12:noncentral",
    "S5:transpositions",
    "A5:cycles(5)",
    "A5:cycles(3)",
    "A6:cycles(3)",
];

fn rack_axioms(ctx: &Ctx) -> Outcome {
    let mut items: Vec<String> = wide_catalog().iter().map(|s| s.to_string()).collect();
    items.extend(EXAMPLE_RACKS.iter().map(|s| s.to_string()));
    items.extend((3..=8).map(|n| format!("dihedral({n})")));
    Sweep::run(&items, |item| {
        let rack = if let Some(n) = item.strip_prefix("dihedral(").and_then(|s| s.strip_suffix(')')) {
            Rack::dihedral_quandle(n.parse().unwrap())
        } else {
            if let Ok(g) = parse_group_spec(item) {
                if ctx.settings.max_order.is_some_and(|m| g.order() > m as u128) {
                    return Err(Miss::Skip(format!("order {} exceeds max order", g.order())));
                }
            }
            build_rack(&parse_rack_spec(item).unwrap(), &RackOptions::default())
                .map_err(|e| Miss::Error(e.to_string()))?
        };
        let valid = validate_rack(&rack.table()).is_ok();
        let quandle = rack.is_quandle();
        Ok((valid && quandle, json!({ "size": rack.size(), "rack": valid, "quandle": quandle })))
    })
    .outcome(json!({ "rack": true, "quandle": true }))
}

fn brute_force_subracks(r: &Rack) -> Vec<ElementSet> {
    let n = r.size();
    let mut out: Vec<ElementSet> = (0u32..1 << n)
        .map(|m| ElementSet::from_bits(m as u128))
        .filter(|s| s.iter().all(|a| s.iter().all(|b| s.contains(r.op(a, b)) && s.contains(r.inv_op(a, b)))))
        .collect();
    out.sort_by(|a, b| a.canonical_cmp(b));
    out
}

fn lattice_brute_force(ctx: &Ctx) -> Outcome {
    let mut items: Vec<String> = wide_catalog()
        .iter()
        .filter(|s| parse_group_spec(s).is_ok_and(|g| g.order() <= 14))
        .map(|s| s.to_string())
        .collect();
    items.extend(["S4:cycles(4)", "S4:transpositions", "A4:cycles(3)", "D12:noncentral"].map(String::from));
    Sweep::run(&items, |item| {
        let (rack, l) = ctx.rack_lattice(item)?;
        if rack.size() > 14 {
            return Err(Miss::Skip(format!("rack has {} elements", rack.size())));
        }
        let oracle = brute_force_subracks(&rack);
        let same = oracle == l.nodes();
        let mut laws = true;
        let n = rack.size();
        for a in 0..n {
            for b in a..n {
                let seed = ElementSet::singleton(a).with(b);
                let c = rack.closure(seed);
                let smallest = oracle.iter().filter(|s| seed.is_subset(**s)).min_by_key(|s| s.len()).copied();
                laws &= seed.is_subset(c)
                    && rack.closure(c) == c
                    && rack.closure(ElementSet::singleton(a)).is_subset(c)
                    && Some(c) == smallest;
            }
        }
        Ok((same && laws, json!({ "size": n, "subracks": l.len(), "oracle": oracle.len(), "closure_laws": laws })))
    })
    .outcome(json!({ "subracks": "equal to exhaustive search", "closure": "extensive, idempotent, monotone, least" }))
}

fn complex_consistency(ctx: &Ctx) -> Outcome {
    let items: Vec<&str> = SPHERE_GROUPS.iter().copied().chain(["S4:cycles(4)", "A5:cycles(5)"]).collect();
    Sweep::run(items, |item| {
        let l = if item.contains(':') { Arc::new(ctx.rack_lattice(item)?.1) } else { ctx.lattice(item)? };
        let (k, with) = ctx.complex_homology(&l, true)?;
        let without = reduced_homology(&k, &HomologyOptions { collapse: false });
        let squares = boundary_squares_to_zero(&k);
        let euler = with.euler_from_ranks() == with.euler_characteristic;
        let collapse_invariant = with.groups == without.groups;
        Ok((
            squares && euler && collapse_invariant,
            json!({
                "simplices": k.total(),
                "boundary_squares_to_zero": squares,
                "euler_characteristic": with.euler_characteristic,
                "euler_matches_ranks": euler,
                "collapse_invariant": collapse_invariant,
            }),
        ))
    })
    .outcome(json!({ "boundary_squares_to_zero": true, "euler_matches_ranks": true, "collapse_invariant": true }))
}
