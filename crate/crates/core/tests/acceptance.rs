//! Acceptance suite. Prints one PASS/FAIL line per criterion, with the
//! individual checks indented beneath it, and exits non-zero if any
//! criterion fails.
//!
//! ```text
//! cargo test --test acceptance
//! ```

mod support;

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::seq::SliceRandom;
use rand::Rng;

use pvn::lang::{self, print_document};
use pvn::synth::{random_batch, random_network, rng, Shape};
use pvn::{
    apply_batch, diff_visibility, resolve, resolve_by_paths, visible_set, Assignment, ContentId,
    Draft, GroupId, MemberId, Mode, Network, NetworkSnapshot, Protocol, ResolutionTrace, Resolver,
    Subject,
};

// A
const A_RUNTIME: Duration = Duration::from_secs(1);
// B
const B_EXHAUSTIVE_GROUPS: usize = 4;
const B_EXHAUSTIVE_CONTENT: usize = 4;
const B_EXHAUSTIVE_MAX_ASSIGNMENTS: usize = 2;
const B_SMALL_RANDOM: usize = 10_000;
const B_SMALL_BOUNDS: (usize, usize, usize, usize) = (4, 4, 4, 5);
const B_RANDOM: usize = 10_000;
const B_BOUNDS: (usize, usize, usize, usize) = (8, 8, 8, 12);
const B_MISMATCHES: usize = 0;
const B_BUDGET: Duration = Duration::from_secs(300);
// C
const C_CASES: u32 = 1_000;
// D
const D_MEMBERS: usize = 10_000;
const D_GROUPS: usize = 200;
const D_DEPTH: usize = 6;
const D_ASSIGNMENTS: usize = 1_000;
const D_CONTENT: usize = 100;
const D_VIEWERS: usize = 1_000;
const D_BUDGET: Duration = Duration::from_secs(10);

#[derive(Default)]
struct Criterion {
    checks: Vec<(bool, String)>,
}

impl Criterion {
    fn check(&mut self, ok: bool, what: impl Into<String>) {
        self.checks.push((ok, what.into()));
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|(ok, _)| *ok)
    }

    fn report(&self, id: &str, title: &str) -> bool {
        let failed = self.checks.iter().filter(|(ok, _)| !ok).count();
        let verdict = if failed == 0 { "PASS" } else { "FAIL" };
        println!(
            "{id} {verdict} {title} ({}/{} checks)",
            self.checks.len() - failed,
            self.checks.len()
        );
        for (ok, what) in &self.checks {
            println!("    [{}] {what}", if *ok { "ok" } else { "FAIL" });
        }
        self.passed()
    }
}

fn paths(net: &Network, ids: impl IntoIterator<Item = ContentId>) -> BTreeSet<String> {
    ids.into_iter()
        .filter_map(|c| net.content_path(c))
        .collect()
}

fn set(items: &[&str]) -> BTreeSet<String> {
    items.iter().map(|s| s.to_string()).collect()
}

fn show(s: &BTreeSet<String>) -> String {
    let v: Vec<&str> = s.iter().map(String::as_str).collect();
    format!("{{{}}}", v.join(", "))
}

// ---------------------------------------------------------------- A

fn criterion_a() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();
    let net = support::fig1();
    let nina = net.member_id("Nina").unwrap();
    let seen = |net: &Network, who: &str| {
        let v = net.member_id(who).unwrap();
        paths(net, visible_set(net, v, nina).unwrap())
    };
    let all_nodes = paths(&net, net.contents_of(nina));

    let golden: [(&str, BTreeSet<String>); 6] = [
        ("Sue", set(&["/Everything/PersonalInfo/NinaPhoto"])),
        ("Prema", set(&[])),
        (
            "Taylor",
            set(&[
                "/Everything/PersonalInfo",
                "/Everything/PersonalInfo/NinaPhoto",
                "/Everything/PersonalInfo/Phone",
                "/Everything/Blog",
            ]),
        ),
        (
            "Bob",
            set(&[
                "/Everything/PersonalInfo/NinaPhoto",
                "/Everything/Blog",
                "/Everything/PistonPhotos",
            ]),
        ),
        ("JJ", all_nodes.clone()),
        ("Alex", all_nodes.clone()),
    ];
    for (who, want) in &golden {
        let got = seen(&net, who);
        let msg = if &got == want {
            format!("{who} sees {}", show(want))
        } else {
            format!("{who} sees {}, expected {}", show(&got), show(want))
        };
        c.check(&got == want, msg);
    }

    let pess = net
        .set_default_protocol(nina, Protocol::Pessimistic)
        .unwrap();
    let jj_pess = seen(&pess, "JJ");
    let lost: BTreeSet<String> = all_nodes.difference(&jj_pess).cloned().collect();
    let want_lost = set(&[
        "/Everything",
        "/Everything/PersonalInfo",
        "/Everything/PersonalInfo/Phone",
        "/Everything/FamilyPhotos",
    ]);
    c.check(
        lost == want_lost,
        format!(
            "pessimistic: JJ loses {}, expected {}",
            show(&lost),
            show(&want_lost)
        ),
    );

    let doc = lang::parse(support::REASSIGN).unwrap();
    let batch: Vec<_> = lang::mutations_from_document(&doc)
        .unwrap()
        .into_iter()
        .map(|(_, m)| m)
        .collect();
    let after = apply_batch(&net, &batch).unwrap();
    let diff = diff_visibility(&net, &after, "Nina").unwrap();
    let entries: BTreeSet<(String, String, String, String)> = diff
        .entries
        .iter()
        .map(|e| {
            (
                e.viewer.clone(),
                e.path.clone(),
                e.old_label().to_string(),
                e.new_label().to_string(),
            )
        })
        .collect();
    let e = |v: &str, p: &str, o: &str, n: &str| {
        (v.to_string(), p.to_string(), o.to_string(), n.to_string())
    };
    let required = [
        e("Bob", "/Everything/Blog", "visible", "invisible"),
        e("Bob", "/Everything/PistonPhotos", "visible", "invisible"),
        e("Taylor", "/Everything/Blog", "visible", "invisible"),
        e(
            "Mike",
            "/Everything/PersonalInfo/NinaPhoto",
            "absent",
            "visible",
        ),
    ];
    for r in &required {
        c.check(
            entries.contains(r),
            format!("diff has {} {} {}→{}", r.0, r.1, r.2, r.3),
        );
    }
    c.check(
        !entries
            .iter()
            .any(|x| x.0 == "Sue" && x.1 == "/Everything/PersonalInfo/NinaPhoto"),
        "diff has no entry for Sue on NinaPhoto",
    );
    c.check(
        !entries
            .iter()
            .any(|x| x.0 == "Taylor" && x.1.starts_with("/Everything/PersonalInfo")),
        "diff has no entry for Taylor under PersonalInfo",
    );
    let required: BTreeSet<_> = required.into_iter().collect();
    let extra: Vec<String> = entries
        .difference(&required)
        .map(|x| format!("{} {} {}→{}", x.0, x.1, x.2, x.3))
        .collect();
    c.check(
        extra.is_empty(),
        if extra.is_empty() {
            "diff contains exactly the listed entries".to_string()
        } else {
            format!(
                "diff contains exactly the listed entries; extra: {}",
                extra.join("; ")
            )
        },
    );
    let elapsed = start.elapsed();
    c.check(
        elapsed <= A_RUNTIME,
        format!("runtime {elapsed:?} <= {A_RUNTIME:?}"),
    );
    c
}

// ---------------------------------------------------------------- B

type TraceKey = (
    Mode,
    &'static str,
    BTreeSet<(Subject, ContentId, Mode, Protocol)>,
);

fn key(t: &ResolutionTrace) -> TraceKey {
    let winners = t
        .winners
        .iter()
        .map(|w| {
            (
                w.assignment.subject,
                w.assignment.content,
                w.assignment.mode,
                w.protocol,
            )
        })
        .collect();
    (t.verdict, t.combination.as_str(), winners)
}

/// Compares both resolvers on every (viewer, owner, content) triple.
fn compare_all(net: &Network) -> (usize, usize) {
    let mut checked = 0;
    let mut mismatches = 0;
    for owner in net.members() {
        let r = Resolver::new(net, owner).unwrap();
        for content in net.contents_of(owner) {
            for viewer in net.members() {
                let fast = r.trace(viewer, content).unwrap();
                let oracle = resolve_by_paths(net, viewer, owner, content).unwrap();
                checked += 1;
                if key(&fast) != key(&oracle) {
                    mismatches += 1;
                }
            }
        }
    }
    (checked, mismatches)
}

/// Tree shapes on four nodes, as parent indices for nodes 1..4 (node 0 is
/// the root).
const TREES: [[usize; 3]; 4] = [[0, 1, 2], [0, 0, 0], [0, 1, 1], [0, 1, 0]];

fn exhaustive_small() -> (usize, usize, usize, usize) {
    let g = B_EXHAUSTIVE_GROUPS;
    let pairs: Vec<(usize, usize)> = (0..g)
        .flat_map(|i| (i + 1..g).map(move |j| (i, j)))
        .collect();
    let mut networks = 0;
    let mut checked = 0;
    let mut mismatches = 0;
    let mut classes = BTreeSet::new();
    for edge_mask in 0u32..(1 << pairs.len()) {
        for member_mask in 0u32..(1 << g) {
            // relabelling groups maps the assignment pool onto itself, so
            // one representative per isomorphism class suffices
            if !classes.insert(canonical(&pairs, edge_mask, member_mask)) {
                continue;
            }
            for tree in TREES {
                let mut d = NetworkSnapshot::new().edit();
                let owner = d.add_member("O").unwrap();
                let viewer = d.add_member("V").unwrap();
                let mut groups: Vec<GroupId> = Vec::new();
                for j in 0..g {
                    let parents: Vec<GroupId> = pairs
                        .iter()
                        .enumerate()
                        .filter(|&(bit, &(_, child))| child == j && edge_mask & (1 << bit) != 0)
                        .map(|(_, &(parent, _))| groups[parent])
                        .collect();
                    groups.push(d.add_group(&format!("G{j}"), &parents, None).unwrap());
                }
                for (j, &grp) in groups.iter().enumerate() {
                    if member_mask & (1 << j) != 0 {
                        d.set_membership(viewer, grp, true).unwrap();
                    }
                }
                let mut nodes = vec![d.root_of(owner).unwrap()];
                for (i, &p) in tree.iter().enumerate().take(B_EXHAUSTIVE_CONTENT - 1) {
                    let parent = nodes[p];
                    nodes.push(d.add_content(owner, parent, &format!("C{i}")).unwrap());
                }
                let mut subjects = vec![Subject::ALL, Subject::Member(viewer)];
                subjects.extend(groups.iter().map(|&g| Subject::Group(g)));
                let mut pool = Vec::new();
                for &s in &subjects {
                    for &n in &nodes {
                        for mode in [Mode::Visible, Mode::Invisible] {
                            pool.push(Assignment::new(owner, s, n, mode));
                        }
                    }
                }
                let (n, c, m) = assignment_sets(&mut d, owner, viewer, &nodes, &pool);
                networks += n;
                checked += c;
                mismatches += m;
            }
        }
    }
    (classes.len(), networks, checked, mismatches)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Smallest relabelling of a (subgroup edges, viewer memberships) pair.
fn canonical(
    pairs: &[(usize, usize)],
    edge_mask: u32,
    member_mask: u32,
) -> (Vec<(usize, usize)>, Vec<usize>) {
    let edges: Vec<(usize, usize)> = pairs
        .iter()
        .enumerate()
        .filter(|&(bit, _)| edge_mask & (1 << bit) != 0)
        .map(|(_, &e)| e)
        .collect();
    let n = B_EXHAUSTIVE_GROUPS;
    permutations(n)
        .into_iter()
        .map(|p| {
            let mut es: Vec<(usize, usize)> = edges.iter().map(|&(a, b)| (p[a], p[b])).collect();
            es.sort();
            let mut ms: Vec<usize> = (0..n)
                .filter(|&i| member_mask & (1 << i) != 0)
                .map(|i| p[i])
                .collect();
            ms.sort();
            (es, ms)
        })
        .min()
        .expect("at least one permutation")
}

/// Every set of at most `B_EXHAUSTIVE_MAX_ASSIGNMENTS` distinct-key
/// assignments from `pool`, under each protocol arrangement.
fn assignment_sets(
    d: &mut Draft,
    owner: MemberId,
    viewer: MemberId,
    nodes: &[ContentId],
    pool: &[Assignment],
) -> (usize, usize, usize) {
    let mut sets: Vec<Vec<Assignment>> = vec![Vec::new()];
    let mut frontier = sets.clone();
    for _ in 0..B_EXHAUSTIVE_MAX_ASSIGNMENTS {
        let mut next = Vec::new();
        for set in &frontier {
            let start = set
                .last()
                .map_or(0, |l| pool.iter().position(|a| a == l).unwrap() + 1);
            for a in &pool[start..] {
                if set
                    .iter()
                    .all(|b| (a.subject, a.content) != (b.subject, b.content))
                {
                    let mut s = set.clone();
                    s.push(*a);
                    next.push(s);
                }
            }
        }
        sets.extend(next.iter().cloned());
        frontier = next;
    }
    let mut networks = 0;
    let mut checked = 0;
    let mut mismatches = 0;
    for s in &sets {
        // default protocol, plus the first assignment overriding it when
        // there is a conflict to decide
        let mut variants: Vec<(Protocol, Option<Protocol>)> =
            vec![(Protocol::Optimistic, None), (Protocol::Pessimistic, None)];
        if s.len() >= 2 {
            variants.push((Protocol::Optimistic, Some(Protocol::Pessimistic)));
            variants.push((Protocol::Pessimistic, Some(Protocol::Optimistic)));
        }
        for (default, first) in variants {
            d.set_default_protocol(owner, default).unwrap();
            for (i, a) in s.iter().enumerate() {
                let a = match (i, first) {
                    (0, Some(p)) => a.with_protocol(p),
                    _ => *a,
                };
                d.set_assignment(a).unwrap();
            }
            networks += 1;
            let net: &Network = d;
            let r = Resolver::new(net, owner).unwrap();
            for &c in nodes {
                let fast = r.trace(viewer, c).unwrap();
                let oracle = resolve_by_paths(net, viewer, owner, c).unwrap();
                checked += 1;
                if key(&fast) != key(&oracle) {
                    mismatches += 1;
                }
            }
            for a in s {
                d.clear_assignment(owner, a.subject, a.content).unwrap();
            }
        }
    }
    (networks, checked, mismatches)
}

fn random_bounded(bounds: (usize, usize, usize, usize), seed: u64) -> NetworkSnapshot {
    let mut r = rng(seed ^ 0x5eed);
    let (m, g, c, a) = bounds;
    let shape = Shape {
        max_memberships: r.gen_range(0..=3),
        max_parents: r.gen_range(1..=3),
        root_chance: r.gen_range(0.0..0.6),
        user_groups: r.gen_range(0..=2),
        ..Shape::small(
            r.gen_range(1..=m),
            r.gen_range(0..=g),
            r.gen_range(1..=c),
            r.gen_range(0..=a),
        )
    };
    let shape = Shape {
        user_groups: shape.user_groups.min(g.saturating_sub(shape.groups)),
        ..shape
    };
    random_network(&shape, seed)
}

fn criterion_b() -> Criterion {
    let mut c = Criterion::default();
    let start = Instant::now();

    let (classes, n, checked, mismatches) = exhaustive_small();
    c.check(
        mismatches == B_MISMATCHES,
        format!(
            "exhaustive {B_EXHAUSTIVE_GROUPS} groups/{B_EXHAUSTIVE_CONTENT} nodes/<= {B_EXHAUSTIVE_MAX_ASSIGNMENTS} assignments: \
             {classes} group/membership classes x {} trees, {n} networks, {checked} queries, {mismatches} mismatches",
            TREES.len()
        ),
    );

    for (label, count, bounds, base) in [
        ("random small", B_SMALL_RANDOM, B_SMALL_BOUNDS, 1_000_000u64),
        ("random", B_RANDOM, B_BOUNDS, 2_000_000u64),
    ] {
        let mut checked = 0;
        let mut mismatches = 0;
        for i in 0..count as u64 {
            let net = random_bounded(bounds, base + i);
            let (k, m) = compare_all(&net);
            checked += k;
            mismatches += m;
        }
        let (m, g, ct, a) = bounds;
        c.check(
            mismatches == B_MISMATCHES,
            format!(
                "{label} <= {m}/{g}/{ct}/{a}: {count} networks, {checked} queries, {mismatches} mismatches"
            ),
        );
    }
    let elapsed = start.elapsed();
    c.check(
        elapsed <= B_BUDGET,
        format!("runtime {elapsed:.1?} <= {B_BUDGET:?}"),
    );
    c
}

// ---------------------------------------------------------------- C

fn shape_strategy() -> impl Strategy<Value = (Shape, u64)> {
    (
        1usize..=8,
        0usize..=8,
        1usize..=8,
        0usize..=12,
        any::<u64>(),
    )
        .prop_map(|(m, g, c, a, seed)| (Shape::small(m, g, c, a), seed))
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: C_CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

/// Every assignment of every owner forced to one protocol.
fn force_protocol(net: &NetworkSnapshot, p: Protocol) -> NetworkSnapshot {
    net.derive(|d| {
        let all: Vec<Assignment> = d.assignments().copied().collect();
        for a in all {
            d.set_assignment(a.with_protocol(p))?;
        }
        Ok::<_, pvn::ModelError>(())
    })
    .unwrap()
}

fn all_visible_sets(net: &Network) -> BTreeMap<(MemberId, MemberId), BTreeSet<ContentId>> {
    let mut out = BTreeMap::new();
    for owner in net.members() {
        let r = Resolver::new(net, owner).unwrap();
        for viewer in net.members() {
            out.insert((viewer, owner), r.visible_set(viewer).unwrap());
        }
    }
    out
}

fn run_property<S: Strategy>(
    c: &mut Criterion,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) {
    let result = runner().run(&strategy, test);
    match result {
        Ok(()) => c.check(true, format!("{name}: {C_CASES} cases")),
        Err(e) => c.check(false, format!("{name}: {e}")),
    }
}

fn random_assignment(net: &Network, seed: u64, mode: Mode, p: Protocol) -> Option<Assignment> {
    let mut r = rng(seed);
    let owners: Vec<MemberId> = net
        .members()
        .filter(|&m| net.contents_of(m).len() > 1)
        .collect();
    let owner = *owners.choose(&mut r)?;
    let content = *net.contents_of(owner).choose(&mut r)?;
    let mut subjects: Vec<Subject> = net
        .groups()
        .filter(|&g| match net.group_hierarchy(g) {
            Some(pvn::model::Hierarchy::User(o)) => o == owner,
            _ => true,
        })
        .map(Subject::Group)
        .collect();
    subjects.extend(net.members().map(Subject::Member));
    let subject = *subjects.choose(&mut r)?;
    Some(Assignment::new(owner, subject, content, mode).with_protocol(p))
}

fn criterion_c() -> Criterion {
    let mut c = Criterion::default();

    run_property(
        &mut c,
        "protocol containment",
        shape_strategy(),
        |(shape, seed)| {
            let net = random_network(&shape, seed);
            let pess = all_visible_sets(&force_protocol(&net, Protocol::Pessimistic));
            let opt = all_visible_sets(&force_protocol(&net, Protocol::Optimistic));
            for (k, p) in &pess {
                prop_assert!(p.is_subset(&opt[k]), "{:?}", k);
            }
            Ok(())
        },
    );

    run_property(
        &mut c,
        "uniform-protocol grant monotonicity",
        (shape_strategy(), any::<u64>(), any::<bool>(), any::<bool>()),
        |((shape, seed), aseed, optimistic, grant)| {
            let p = if optimistic {
                Protocol::Optimistic
            } else {
                Protocol::Pessimistic
            };
            let net = force_protocol(&random_network(&shape, seed), p);
            let mode = if grant {
                Mode::Visible
            } else {
                Mode::Invisible
            };
            let Some(a) = random_assignment(&net, aseed, mode, p) else {
                return Ok(());
            };
            // a replaced assignment of the opposite mode is a removal too;
            // monotonicity is about adding
            if net.assignment(a.owner, a.subject, a.content).is_some() {
                return Ok(());
            }
            let after = net.set_assignment(a).unwrap();
            let before = all_visible_sets(&net);
            let now = all_visible_sets(&after);
            for (k, b) in &before {
                if grant {
                    prop_assert!(b.is_subset(&now[k]), "grant shrank {:?}", k);
                } else {
                    prop_assert!(now[k].is_subset(b), "denial grew {:?}", k);
                }
            }
            Ok(())
        },
    );

    run_property(
        &mut c,
        "member-level stability under reorganization",
        (shape_strategy(), any::<u64>()),
        |((shape, seed), bseed)| {
            let net = random_network(&shape, seed);
            let batch: Vec<_> = random_batch(&net, 6, bseed)
                .into_iter()
                .filter(|m| !m.is_assignment_edit())
                .collect();
            let after = apply_batch(&net, &batch).unwrap();
            for snap in [&net, &after] {
                for a in snap.assignments() {
                    let Subject::Member(v) = a.subject else {
                        continue;
                    };
                    if v == a.owner {
                        continue;
                    }
                    for n in snap.content_subtree(a.content) {
                        // the deepest member-level assignment covering n decides
                        let decider = snap
                            .content_ancestors(n)
                            .into_iter()
                            .find_map(|x| snap.assignment(a.owner, a.subject, x))
                            .unwrap();
                        let got = resolve(snap, v, a.owner, n).unwrap().verdict;
                        prop_assert_eq!(got, decider.mode);
                    }
                }
            }
            // and the verdicts carry over for surviving nodes
            for a in net.assignments() {
                let Subject::Member(v) = a.subject else {
                    continue;
                };
                if v == a.owner {
                    continue;
                }
                let (Some(vn), Some(on)) = (net.member_name(v), net.member_name(a.owner)) else {
                    continue;
                };
                let (Some(v2), Some(o2)) = (after.member_id(vn), after.member_id(on)) else {
                    continue;
                };
                for n in net.content_subtree(a.content) {
                    let path = net.content_path(n).unwrap();
                    let Ok(n2) = after.resolve_path(o2, &path) else {
                        continue;
                    };
                    let b = resolve(&net, v, a.owner, n).unwrap().verdict;
                    let c = resolve(&after, v2, o2, n2).unwrap().verdict;
                    prop_assert_eq!(b, c, "{} on {}:{}", vn, on, path);
                }
            }
            Ok(())
        },
    );

    run_property(&mut c, "default deny", shape_strategy(), |(shape, seed)| {
        let net = random_network(
            &Shape {
                assignments: 0,
                ..shape
            },
            seed,
        );
        for owner in net.members() {
            for viewer in net.members().filter(|&v| v != owner) {
                prop_assert!(visible_set(&net, viewer, owner).unwrap().is_empty());
            }
        }
        // and nodes no assignment covers stay invisible with assignments present
        let net = random_network(&shape, seed);
        for owner in net.members() {
            let covered: Vec<ContentId> = net.assignments_of(owner).map(|a| a.content).collect();
            for n in net.contents_of(owner) {
                if covered.iter().any(|&t| net.content_covers(t, n)) {
                    continue;
                }
                for viewer in net.members().filter(|&v| v != owner) {
                    prop_assert_eq!(
                        resolve(&net, viewer, owner, n).unwrap().verdict,
                        Mode::Invisible
                    );
                }
            }
        }
        Ok(())
    });

    run_property(
        &mut c,
        "acyclicity preservation",
        (
            shape_strategy(),
            proptest::collection::vec((0usize..16, 0usize..16), 1..40),
        ),
        |((shape, seed), edges)| {
            let mut net = random_network(&shape, seed);
            let groups: Vec<GroupId> = net.groups().collect();
            for (a, b) in edges {
                let (child, parent) = (groups[a % groups.len()], groups[b % groups.len()]);
                if let Ok(next) = net.add_subgroup_edge(child, parent) {
                    net = next;
                }
            }
            // depth-first search for a back edge over the effective parents
            fn visit(net: &Network, g: GroupId, state: &mut BTreeMap<GroupId, bool>) -> bool {
                // false: on the current DFS stack; true: finished
                match state.get(&g) {
                    Some(false) => return false,
                    Some(true) => return true,
                    None => {}
                }
                state.insert(g, false);
                for p in net.group_parents(g) {
                    if !visit(net, p, state) {
                        return false;
                    }
                }
                state.insert(g, true);
                true
            }
            let mut state = BTreeMap::new();
            for g in net.groups() {
                prop_assert!(visit(&net, g, &mut state), "cycle through {:?}", g);
            }
            Ok(())
        },
    );

    run_property(
        &mut c,
        "DSL round-trip and print idempotence",
        support::document(),
        |doc| {
            let text = print_document(&doc);
            let again =
                lang::parse(&text).map_err(|e| TestCaseError::fail(format!("{e}\n{text}")))?;
            prop_assert_eq!(&again, &doc);
            prop_assert_eq!(print_document(&again), text);
            Ok(())
        },
    );

    run_property(
        &mut c,
        "diff exactness vs pointwise recomputation",
        (shape_strategy(), any::<u64>()),
        |((shape, seed), bseed)| {
            let net = random_network(&shape, seed);
            let batch = random_batch(&net, 6, bseed);
            let after = apply_batch(&net, &batch).unwrap();
            let Some(owner) = net.members().next().and_then(|m| net.member_name(m)) else {
                return Ok(());
            };
            let verdicts = |s: &Network| -> BTreeMap<(String, String), Mode> {
                let mut out = BTreeMap::new();
                let Some(o) = s.member_id(owner) else {
                    return out;
                };
                for v in s.members() {
                    for n in s.contents_of(o) {
                        let mode = resolve_by_paths(s, v, o, n).unwrap().verdict;
                        out.insert(
                            (
                                s.member_name(v).unwrap().to_string(),
                                s.content_path(n).unwrap(),
                            ),
                            mode,
                        );
                    }
                }
                out
            };
            let (b, a) = (verdicts(&net), verdicts(&after));
            let keys: BTreeSet<&(String, String)> = b.keys().chain(a.keys()).collect();
            let expected: BTreeSet<(String, String, Option<Mode>, Option<Mode>)> = keys
                .into_iter()
                .filter_map(|k| {
                    let (x, y) = (b.get(k).copied(), a.get(k).copied());
                    let vis = |m: Option<Mode>| m == Some(Mode::Visible);
                    (vis(x) != vis(y)).then(|| (k.0.clone(), k.1.clone(), x, y))
                })
                .collect();
            let diff = diff_visibility(&net, &after, owner)
                .map_err(|e| TestCaseError::fail(e.to_string()))?;
            let got: BTreeSet<_> = diff
                .entries
                .iter()
                .map(|e| (e.viewer.clone(), e.path.clone(), e.old, e.new))
                .collect();
            prop_assert_eq!(got.len(), diff.entries.len());
            prop_assert_eq!(got, expected);
            Ok(())
        },
    );
    c
}

// ---------------------------------------------------------------- D

fn criterion_d() -> Criterion {
    let mut c = Criterion::default();
    let shape = Shape {
        members: D_MEMBERS,
        groups: D_GROUPS,
        user_groups: 0,
        max_depth: D_DEPTH,
        max_parents: 3,
        root_chance: 0.1,
        owners: 1,
        contents: D_CONTENT,
        assignments: D_ASSIGNMENTS,
        max_memberships: 4,
        member_subject_chance: 0.1,
    };
    let net = random_network(&shape, 0xD);
    let owner = net.member_id("M0").unwrap();
    c.check(
        net.member_count() == D_MEMBERS
            && net.group_count() == D_GROUPS + 1
            && net.assignment_count() == D_ASSIGNMENTS
            && net.contents_of(owner).len() == D_CONTENT,
        format!(
            "network: {} members, {} groups + all, {} assignments, {} content nodes",
            net.member_count(),
            net.group_count() - 1,
            net.assignment_count(),
            net.contents_of(owner).len()
        ),
    );
    let depth = max_depth(&net);
    c.check(
        depth <= D_DEPTH,
        format!("group depth {depth} <= {D_DEPTH}"),
    );

    let mut r = rng(0xDD);
    let members: Vec<MemberId> = net.members().collect();
    let viewers: Vec<MemberId> = members
        .choose_multiple(&mut r, D_VIEWERS)
        .copied()
        .collect();
    let start = Instant::now();
    let resolver = Resolver::new(&net, owner).unwrap();
    let mut total = 0;
    for &v in &viewers {
        total += resolver.visible_set(v).unwrap().len();
    }
    let elapsed = start.elapsed();
    c.check(
        elapsed <= D_BUDGET,
        format!("visible_set for {D_VIEWERS} viewers: {elapsed:.2?} <= {D_BUDGET:?} ({total} visible nodes)"),
    );

    // What the path oracle would face: derivation paths per viewer, counted
    // by dynamic programming rather than enumerated.
    let paths_to: Vec<u128> = count_paths_from_roots(&net);
    let per_viewer: u128 = viewers
        .iter()
        .map(|&v| {
            net.member_groups(v)
                .map(|gs| {
                    let direct: u128 = gs.iter().map(|g| paths_to[g.index()]).sum();
                    if direct == 0 {
                        1
                    } else {
                        direct
                    }
                })
                .unwrap_or(1)
        })
        .sum();
    c.check(
        true,
        format!(
            "path oracle would enumerate {per_viewer} derivation paths for these viewers, each scanned against {} content nodes",
            D_CONTENT
        ),
    );
    c
}

fn max_depth(net: &Network) -> usize {
    fn depth(net: &Network, g: GroupId, memo: &mut BTreeMap<GroupId, usize>) -> usize {
        if let Some(&d) = memo.get(&g) {
            return d;
        }
        let d = net
            .declared_parents(g)
            .map(|ps| ps.iter().map(|&p| depth(net, p, memo)).max().unwrap_or(0) + 1)
            .unwrap_or(0);
        memo.insert(g, d);
        d
    }
    let mut memo = BTreeMap::new();
    net.groups()
        .filter(|&g| g != GroupId::ALL)
        .map(|g| depth(net, g, &mut memo))
        .max()
        .unwrap_or(0)
}

/// Number of root-to-group paths for each group, `all` counting as the
/// single root of the system hierarchy.
fn count_paths_from_roots(net: &Network) -> Vec<u128> {
    fn count(net: &Network, g: GroupId, memo: &mut Vec<Option<u128>>) -> u128 {
        if let Some(n) = memo[g.index()] {
            return n;
        }
        let parents = net.group_parents(g);
        let n = if parents.is_empty() {
            1
        } else {
            parents.iter().map(|&p| count(net, p, memo)).sum()
        };
        memo[g.index()] = Some(n);
        n
    }
    let mut memo = vec![None; net.group_index_bound()];
    for g in net.groups() {
        count(net, g, &mut memo);
    }
    memo.into_iter().map(|n| n.unwrap_or(0)).collect()
}

fn main() -> ExitCode {
    let only: Option<String> = std::env::args()
        .skip(1)
        .find(|a| !a.starts_with('-'))
        .map(|s| s.to_uppercase());
    let wanted = |id: &str| only.as_deref().is_none_or(|o| o == id);
    let mut ok = true;
    if wanted("A") {
        ok &= criterion_a().report("A", "Figure 1 golden scenario");
    }
    if wanted("B") {
        ok &= criterion_b().report("B", "pruned resolver matches path oracle");
    }
    if wanted("C") {
        ok &= criterion_c().report("C", "invariant suite");
    }
    if wanted("D") {
        ok &= criterion_d().report("D", "performance smoke");
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
