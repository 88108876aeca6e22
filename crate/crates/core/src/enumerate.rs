//! Exhaustive generation of curve-system graphs at small genus, and batch
//! verification of the library's guarantees over the generated stream.
//!
//! Generation walks vertex counts, non-increasing genus vectors and edge
//! multiset assignments; the surface genus identity pins the edge count of
//! every shape, so the stream is finite and deterministic. Deduplication
//! keeps one representative per isomorphism class, with candidates bucketed
//! by an iterated neighborhood fingerprint and collisions settled by an
//! explicit backtracking search.
//!
//! `verify_theorems` replays every library invariant over the stream:
//! separation tests against the cut lattice, equivalence-relation axioms,
//! the membership oracle against the necklace criterion, rank and bound
//! inequalities, necklace shape theorems, transversal-circle contracts, and
//! normalization round trips.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::Error;
use crate::format::serialize_graph;
use crate::graph::{EdgeId, Mode, SurfaceGraph, VertexId};
use crate::homology::{
    crossing_vector, cut_lattice_member, difference_map_trivial, edge_disjoint_paths,
    homology_equivalent, two_transversal_circles, LatticeContext, LatticeVector, MultiTwist,
    PathSearch,
};
use crate::necklace::{cut_along_only, is_bp_necklace, necklace_is_bp, necklace_partition};
use crate::torelli::{
    multitwist_subgroup_rank, necklace_count_check, rank_upper_bounds, torelli_membership,
    CountCheck,
};

/// What to generate: target genus, edge budget, validity mode, and whether
/// to collapse isomorphic duplicates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumSpec {
    pub genus: u32,
    pub max_edges: u32,
    pub mode: Mode,
    pub dedup: bool,
}

impl EnumSpec {
    /// Defaults: the full edge budget 3g - 3, system mode, dedup on.
    pub fn for_genus(genus: u32) -> Self {
        EnumSpec {
            genus,
            max_edges: 3 * genus.max(1) - 3,
            mode: Mode::System,
            dedup: true,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.genus < 2 {
            return Err(Error::EnumGenusBelowTwo(self.genus));
        }
        let cap = 3 * self.genus - 3;
        if self.mode == Mode::System && self.max_edges > cap {
            return Err(Error::EdgeBudgetTooLarge(self.max_edges, cap, self.genus));
        }
        Ok(())
    }
}

/// Generates every connected genus-labeled multigraph of the requested
/// genus with 1 <= E <= max_edges that passes validation in the requested
/// mode. With dedup, one representative per isomorphism class.
pub fn enumerate_systems(spec: &EnumSpec) -> Result<Vec<SurfaceGraph>, Error> {
    spec.validate()?;
    let g = spec.genus as i64;
    let budget = spec.max_edges as i64;
    // For two or more pieces in system mode every piece has non-negative
    // defect, so 2g - V - 2 = total defect >= 0 caps the vertex count.
    let vmax = match spec.mode {
        Mode::System => (2 * g - 2).max(1),
        Mode::General => budget + 1,
    };
    let mut out = Vec::new();
    for v in 1..=vmax {
        // The genus identity fixes E = g - s + V - 1 for genus sum s, and
        // 1 <= E <= budget brackets s.
        let smin = (g + v - 1 - budget).max(0);
        let smax = g.min(g + v - 2);
        for s in smin..=smax {
            let e = (g - s + v - 1) as usize;
            for gvec in genus_vectors(v as usize, s as u32) {
                let mut batch: Vec<(String, SurfaceGraph)> = Vec::new();
                let mut emit = |mult: &[usize], pairs: &[(usize, usize)]| {
                    let graph = build_graph(spec.mode, &gvec, mult, pairs);
                    if !graph.validate().is_empty() {
                        return;
                    }
                    debug_assert_eq!(graph.genus(), Ok(spec.genus));
                    if spec.dedup {
                        let fp = fingerprint(&graph);
                        if batch
                            .iter()
                            .any(|(f, kept)| *f == fp && isomorphic(kept, &graph))
                        {
                            return;
                        }
                        batch.push((fp, graph));
                    } else {
                        batch.push((String::new(), graph));
                    }
                };
                fill_multiplicities(v as usize, &gvec, e, spec.mode, &mut emit);
                out.extend(batch.into_iter().map(|(_, graph)| graph));
            }
        }
    }
    Ok(out)
}

/// Non-increasing length-v sequences with the given sum.
fn genus_vectors(v: usize, sum: u32) -> Vec<Vec<u32>> {
    fn rec(v: usize, sum: u32, cap: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if v == 0 {
            if sum == 0 {
                out.push(prefix.clone());
            }
            return;
        }
        let hi = cap.min(sum);
        for first in (0..=hi).rev() {
            if first as usize * v < sum as usize {
                continue;
            }
            prefix.push(first);
            rec(v - 1, sum - first, first, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(v, sum, sum, &mut Vec::new(), &mut out);
    out
}

/// Walks every assignment of `e` edges to the vertex pairs (loops allowed),
/// pruning branches that cannot reach the minimum degrees of the mode.
fn fill_multiplicities(
    v: usize,
    genus: &[u32],
    e: usize,
    mode: Mode,
    emit: &mut impl FnMut(&[usize], &[(usize, usize)]),
) {
    let mut pairs = Vec::new();
    for i in 0..v {
        for j in i..v {
            pairs.push((i, j));
        }
    }
    // A lower bound on any valid final degree: genus-0 pieces in system mode
    // need two endpoints even in the single-loop case, everything else needs
    // one endpoint for connectivity once there are two or more pieces.
    let floor: Vec<usize> = (0..v)
        .map(|i| {
            if v == 1 {
                0
            } else if mode == Mode::System && genus[i] == 0 {
                2
            } else {
                1
            }
        })
        .collect();
    let mut mult = vec![0usize; pairs.len()];
    let mut deg = vec![0usize; v];
    let mut loops = vec![0usize; v];

    fn apply(p: (usize, usize), m: usize, deg: &mut [usize], loops: &mut [usize], sign: bool) {
        let (i, j) = p;
        let d = if sign { m as i64 } else { -(m as i64) };
        if i == j {
            deg[i] = (deg[i] as i64 + 2 * d) as usize;
            loops[i] = (loops[i] as i64 + d) as usize;
        } else {
            deg[i] = (deg[i] as i64 + d) as usize;
            deg[j] = (deg[j] as i64 + d) as usize;
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn rec(
        k: usize,
        remaining: usize,
        pairs: &[(usize, usize)],
        floor: &[usize],
        genus: &[u32],
        mode: Mode,
        v: usize,
        mult: &mut Vec<usize>,
        deg: &mut Vec<usize>,
        loops: &mut Vec<usize>,
        emit: &mut impl FnMut(&[usize], &[(usize, usize)]),
    ) {
        if k == pairs.len() - 1 {
            let p = pairs[k];
            mult[k] = remaining;
            apply(p, remaining, deg, loops, true);
            if degrees_admissible(v, genus, mode, deg, loops) {
                emit(mult, pairs);
            }
            apply(p, remaining, deg, loops, false);
            mult[k] = 0;
            return;
        }
        let p = pairs[k];
        for m in 0..=remaining {
            mult[k] = m;
            apply(p, m, deg, loops, true);
            // Vertex p.0 is final once its last column is set.
            let final_ok = p.1 != v - 1 || vertex_admissible(p.0, v, genus, mode, deg, loops);
            if final_ok && deficit(k + 1, pairs, floor, deg) <= 2 * (remaining - m) {
                rec(
                    k + 1,
                    remaining - m,
                    pairs,
                    floor,
                    genus,
                    mode,
                    v,
                    mult,
                    deg,
                    loops,
                    emit,
                );
            }
            apply(p, m, deg, loops, false);
            mult[k] = 0;
        }
    }

    fn deficit(k: usize, pairs: &[(usize, usize)], floor: &[usize], deg: &[usize]) -> usize {
        if k >= pairs.len() {
            return 0;
        }
        let start = pairs[k].0;
        (start..floor.len())
            .map(|i| floor[i].saturating_sub(deg[i]))
            .sum()
    }

    fn vertex_admissible(
        i: usize,
        v: usize,
        genus: &[u32],
        mode: Mode,
        deg: &[usize],
        loops: &[usize],
    ) -> bool {
        if v >= 2 && deg[i] == 0 {
            return false;
        }
        if mode == Mode::System && genus[i] == 0 {
            match deg[i] {
                1 => return false,
                2 if loops[i] != 1 => return false,
                _ => {}
            }
        }
        true
    }

    fn degrees_admissible(
        v: usize,
        genus: &[u32],
        mode: Mode,
        deg: &[usize],
        loops: &[usize],
    ) -> bool {
        (0..v).all(|i| vertex_admissible(i, v, genus, mode, deg, loops))
    }

    if pairs.is_empty() {
        return;
    }
    rec(
        0, e, &pairs, &floor, genus, mode, v, &mut mult, &mut deg, &mut loops, emit,
    );
}

fn build_graph(mode: Mode, genus: &[u32], mult: &[usize], pairs: &[(usize, usize)]) -> SurfaceGraph {
    let vname = |i: usize| VertexId::new(format!("v{:02}", i + 1));
    let verts: Vec<(VertexId, u32)> = genus.iter().enumerate().map(|(i, g)| (vname(i), *g)).collect();
    let mut edges = Vec::new();
    for (k, &(i, j)) in pairs.iter().enumerate() {
        for _ in 0..mult[k] {
            let name = EdgeId::new(format!("c{:02}", edges.len() + 1));
            edges.push((name, vname(i), vname(j)));
        }
    }
    SurfaceGraph::new(mode, verts, edges).expect("generated shape is structurally sound")
}

fn fnv(acc: u64, word: u64) -> u64 {
    let mut h = acc;
    for byte in word.to_le_bytes() {
        h ^= byte as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

const FNV_SEED: u64 = 0xcbf29ce484222325;

fn adjacency(graph: &SurfaceGraph) -> (Vec<u32>, Vec<Vec<usize>>) {
    let v = graph.vertex_count();
    let genus: Vec<u32> = (0..v).map(|i| graph.genus_at(i)).collect();
    let mut mult = vec![vec![0usize; v]; v];
    for i in 0..graph.edge_count() {
        let (t, h) = graph.edge_slots(i);
        mult[t][h] += 1;
        if t != h {
            mult[h][t] += 1;
        }
    }
    (genus, mult)
}

/// Iterated neighborhood colors: content-derived hashes, so comparable
/// across graphs.
fn refined_colors(genus: &[u32], mult: &[Vec<usize>]) -> Vec<u64> {
    let v = genus.len();
    let deg: Vec<usize> = (0..v)
        .map(|i| (0..v).filter(|&j| j != i).map(|j| mult[i][j]).sum::<usize>() + 2 * mult[i][i])
        .collect();
    let mut color: Vec<u64> = (0..v)
        .map(|i| {
            let mut h = fnv(FNV_SEED, genus[i] as u64);
            h = fnv(h, deg[i] as u64);
            fnv(h, mult[i][i] as u64)
        })
        .collect();
    for _ in 0..v {
        let mut next = Vec::with_capacity(v);
        for i in 0..v {
            let mut neighborhood: Vec<(u64, usize)> = (0..v)
                .filter(|&j| j != i && mult[i][j] > 0)
                .map(|j| (color[j], mult[i][j]))
                .collect();
            neighborhood.sort_unstable();
            let mut h = fnv(FNV_SEED, color[i]);
            h = fnv(h, mult[i][i] as u64);
            for (c, m) in neighborhood {
                h = fnv(h, c);
                h = fnv(h, m as u64);
            }
            next.push(h);
        }
        color = next;
    }
    color
}

/// Isomorphism-invariant summary used to bucket candidates before the exact
/// search. Equal fingerprints do not guarantee isomorphism.
pub fn fingerprint(graph: &SurfaceGraph) -> String {
    let (genus, mult) = adjacency(graph);
    let colors = refined_colors(&genus, &mult);
    let mut hist: BTreeMap<u64, usize> = BTreeMap::new();
    for c in colors {
        *hist.entry(c).or_insert(0) += 1;
    }
    let body: Vec<String> = hist
        .into_iter()
        .map(|(c, n)| format!("{c:016x}x{n}"))
        .collect();
    format!(
        "V{}E{}:{}",
        graph.vertex_count(),
        graph.edge_count(),
        body.join(",")
    )
}

/// Exact isomorphism of genus-labeled multigraphs, ignoring identifier
/// names and edge orientations.
pub fn isomorphic(a: &SurfaceGraph, b: &SurfaceGraph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let (ga, ma) = adjacency(a);
    let (gb, mb) = adjacency(b);
    let ca = refined_colors(&ga, &ma);
    let cb = refined_colors(&gb, &mb);
    let mut sa = ca.clone();
    let mut sb = cb.clone();
    sa.sort_unstable();
    sb.sort_unstable();
    if sa != sb {
        return false;
    }
    let v = ga.len();
    let mut map = vec![usize::MAX; v];
    let mut used = vec![false; v];
    fn assign(
        i: usize,
        v: usize,
        ga: &[u32],
        gb: &[u32],
        ca: &[u64],
        cb: &[u64],
        ma: &[Vec<usize>],
        mb: &[Vec<usize>],
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
    ) -> bool {
        if i == v {
            return true;
        }
        for j in 0..v {
            if used[j] || ga[i] != gb[j] || ca[i] != cb[j] || ma[i][i] != mb[j][j] {
                continue;
            }
            if (0..i).any(|k| ma[i][k] != mb[j][map[k]]) {
                continue;
            }
            map[i] = j;
            used[j] = true;
            if assign(i + 1, v, ga, gb, ca, cb, ma, mb, map, used) {
                return true;
            }
            used[j] = false;
            map[i] = usize::MAX;
        }
        false
    }
    assign(0, v, &ga, &gb, &ca, &cb, &ma, &mb, &mut map, &mut used)
}

/// Knobs for the verification sweep.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyOptions {
    /// Seeds the random multi-twist sampling; everything else is exhaustive.
    pub seed: u64,
    /// Random twists per graph where exhaustive enumeration is too large.
    pub twist_samples: usize,
    /// Wall-clock budget; exceeding it stops the sweep and marks the report
    /// incomplete.
    #[serde(skip)]
    pub time_budget: Option<Duration>,
    /// Counterexamples retained per property.
    pub counterexample_cap: usize,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: 0x5eed,
            twist_samples: 100,
            time_budget: None,
            counterexample_cap: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropertyOutcome {
    pub name: String,
    pub checks: u64,
    pub failures: u64,
    pub counterexamples: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub spec: EnumSpec,
    pub graphs: usize,
    pub properties: Vec<PropertyOutcome>,
    pub complete: bool,
    pub elapsed_ms: u128,
}

impl VerificationReport {
    pub fn all_green(&self) -> bool {
        self.complete && self.properties.iter().all(|p| p.failures == 0)
    }
}

const PROPERTIES: [&str; 15] = [
    "separating-trichotomy",
    "cap-genus-arithmetic",
    "equivalence-relation",
    "orientation-independence",
    "isomorphism-invariance",
    "menger-duality",
    "transversal-contract",
    "bp-cycle-structure",
    "bp-whole-necklace",
    "oracle-equivalence",
    "zero-sum-perturbation",
    "rank-consistency",
    "rank-bounds",
    "necklace-lower-bounds",
    "normalize-preservation",
];

const P_SEPARATING: usize = 0;
const P_CAP: usize = 1;
const P_EQUIV: usize = 2;
const P_ORIENT: usize = 3;
const P_ISO: usize = 4;
const P_MENGER: usize = 5;
const P_TRANSVERSAL: usize = 6;
const P_BP_SUBSETS: usize = 7;
const P_BP_WHOLE: usize = 8;
const P_ORACLE: usize = 9;
const P_PERTURB: usize = 10;
const P_RANK: usize = 11;
const P_BOUNDS: usize = 12;
const P_COUNTS: usize = 13;
const P_NORMALIZE: usize = 14;

struct Recorder {
    outcomes: Vec<PropertyOutcome>,
    cap: usize,
}

impl Recorder {
    fn new(cap: usize) -> Self {
        Recorder {
            outcomes: PROPERTIES
                .iter()
                .map(|name| PropertyOutcome {
                    name: (*name).to_owned(),
                    checks: 0,
                    failures: 0,
                    counterexamples: Vec::new(),
                })
                .collect(),
            cap,
        }
    }

    fn check(&mut self, prop: usize, ok: bool, graph: &SurfaceGraph, detail: impl FnOnce() -> String) {
        let outcome = &mut self.outcomes[prop];
        outcome.checks += 1;
        if !ok {
            outcome.failures += 1;
            if outcome.counterexamples.len() < self.cap {
                outcome
                    .counterexamples
                    .push(format!("{}\n{}", detail(), serialize_graph(graph).trim_end()));
            }
        }
    }
}

/// Runs every library invariant over the enumerated stream.
pub fn verify_theorems(spec: &EnumSpec, opts: &VerifyOptions) -> Result<VerificationReport, Error> {
    let started = Instant::now();
    let graphs = enumerate_systems(spec)?;
    let mut rec = Recorder::new(opts.counterexample_cap);
    let mut complete = true;
    for (index, graph) in graphs.iter().enumerate() {
        if let Some(budget) = opts.time_budget {
            if started.elapsed() > budget {
                complete = false;
                break;
            }
        }
        let mut rng = ChaCha8Rng::seed_from_u64(
            opts.seed ^ (index as u64).wrapping_mul(0x9e3779b97f4a7c15),
        );
        verify_graph(graph, &mut rec, &mut rng, opts)?;
    }
    Ok(VerificationReport {
        spec: spec.clone(),
        graphs: graphs.len(),
        properties: rec.outcomes,
        complete,
        elapsed_ms: started.elapsed().as_millis(),
    })
}

fn random_twist(graph: &SurfaceGraph, rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> MultiTwist {
    MultiTwist::new(
        graph
            .edge_ids()
            .map(|e| (e.clone(), rng.gen_range(lo..=hi)))
            .collect::<Vec<_>>(),
    )
}

fn exhaustive_twists(graph: &SurfaceGraph, lo: i64, hi: i64) -> Vec<MultiTwist> {
    let edges: Vec<EdgeId> = graph.edge_ids().cloned().collect();
    let mut out = vec![MultiTwist::default()];
    for e in &edges {
        let mut next = Vec::new();
        for twist in &out {
            for x in lo..=hi {
                let mut t = twist.clone();
                t.set(e.clone(), x);
                next.push(t);
            }
        }
        out = next;
    }
    out
}

fn twist_sum(a: &MultiTwist, b: &MultiTwist) -> MultiTwist {
    let mut out = a.clone();
    for (e, x) in b.entries() {
        out.set(e.clone(), out.exponent(e) + x);
    }
    out
}

fn same_exponents(graph: &SurfaceGraph, a: &MultiTwist, b: &MultiTwist) -> bool {
    graph.edge_ids().all(|e| a.exponent(e) == b.exponent(e))
}

/// Equality of vertices and edges, ignoring the stored mode flag.
fn same_shape(a: &SurfaceGraph, b: &SurfaceGraph) -> bool {
    a.vertices().eq(b.vertices()) && a.edges().eq(b.edges())
}

fn fresh_edge_name(graph: &SurfaceGraph, base: &str) -> EdgeId {
    let mut n = 1;
    loop {
        let candidate = EdgeId::new(format!("{base}~{n}"));
        if !graph.has_edge(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

fn fresh_vertex_name(graph: &SurfaceGraph, base: &str) -> VertexId {
    let mut n = 1;
    loop {
        let candidate = VertexId::new(format!("{base}~{n}"));
        if !graph.has_vertex(&candidate) {
            return candidate;
        }
        n += 1;
    }
}

fn verify_graph(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    rng: &mut ChaCha8Rng,
    opts: &VerifyOptions,
) -> Result<(), Error> {
    let genus = graph.genus()?;
    let system_valid = graph.ensure_valid_system().is_ok();
    let edge_ids: Vec<EdgeId> = graph.edge_ids().cloned().collect();
    let sample_count = opts.twist_samples.min(12).max(4);
    let small_twists: Vec<MultiTwist> = (0..sample_count)
        .map(|_| random_twist(graph, rng, -3, 3))
        .collect();

    check_separating_trichotomy(graph, rec, &edge_ids)?;
    check_cap_arithmetic(graph, rec, genus, &edge_ids)?;
    check_equivalence_relation(graph, rec, &edge_ids)?;
    check_orientation_independence(graph, rec, rng, &edge_ids, &small_twists, system_valid)?;
    check_isomorphism_invariance(graph, rec, rng, &small_twists, system_valid)?;
    check_menger_duality(graph, rec)?;
    if system_valid {
        let partition = necklace_partition(graph)?;
        check_transversal_contract(graph, rec, &partition, &small_twists)?;
        check_bp_structure(graph, rec, &partition)?;
        check_oracle_equivalence(graph, rec, rng, opts, &edge_ids)?;
        check_zero_sum_perturbation(graph, rec, rng, &partition, &small_twists)?;
        check_rank_consistency(graph, rec, rng, &partition)?;
        check_rank_bounds(graph, rec, genus)?;
        check_necklace_lower_bounds(graph, rec)?;
    }
    check_normalize_preservation(graph, rec, &small_twists, system_valid)?;
    Ok(())
}

fn check_separating_trichotomy(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    edge_ids: &[EdgeId],
) -> Result<(), Error> {
    for e in edge_ids {
        let separating = graph.is_separating(e)?;
        let parts = graph.cut(std::slice::from_ref(e))?.components.len();
        let unit = LatticeVector::unit(LatticeContext::Free, e.clone());
        let in_cut = cut_lattice_member(graph, &unit)?;
        let ok = separating == (parts == 2) && separating == in_cut;
        rec.check(P_SEPARATING, ok, graph, || {
            format!("edge {e}: separating={separating} parts={parts} cut-lattice={in_cut}")
        });
    }
    Ok(())
}

fn check_cap_arithmetic(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    genus: u32,
    edge_ids: &[EdgeId],
) -> Result<(), Error> {
    for e in edge_ids {
        let separating = graph.is_separating(e)?;
        let capped = graph.cap_and_delete(e)?;
        let genera: Vec<u32> = capped
            .parts
            .iter()
            .map(|p| p.genus())
            .collect::<Result<_, _>>()?;
        let ok = if separating {
            genera.len() == 2 && genera.iter().sum::<u32>() == genus
        } else {
            genera.len() == 1 && genera[0] + 1 == genus
        };
        rec.check(P_CAP, ok, graph, || {
            format!("edge {e}: separating={separating} part genera {genera:?} vs genus {genus}")
        });
    }
    Ok(())
}

fn check_equivalence_relation(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    edge_ids: &[EdgeId],
) -> Result<(), Error> {
    let mut nonsep = Vec::new();
    for e in edge_ids {
        if !graph.is_separating(e)? {
            nonsep.push(e.clone());
        }
    }
    let n = nonsep.len();
    let mut related = vec![vec![false; n]; n];
    for i in 0..n {
        related[i][i] = true;
        for j in i + 1..n {
            let forward = homology_equivalent(graph, &nonsep[i], &nonsep[j])?;
            let backward = homology_equivalent(graph, &nonsep[j], &nonsep[i])?;
            rec.check(P_EQUIV, forward == backward, graph, || {
                format!("symmetry broken on ({}, {})", nonsep[i], nonsep[j])
            });
            // The 2-cut criterion must agree with the lattice criterion:
            // equivalence means the difference or the sum of the unit
            // vectors is a coboundary.
            let mut diff = BTreeMap::new();
            diff.insert(nonsep[i].clone(), 1);
            diff.insert(nonsep[j].clone(), -1);
            let mut sum = BTreeMap::new();
            sum.insert(nonsep[i].clone(), 1);
            sum.insert(nonsep[j].clone(), 1);
            let lattice = cut_lattice_member(graph, &LatticeVector::new(LatticeContext::Free, diff))?
                || cut_lattice_member(graph, &LatticeVector::new(LatticeContext::Free, sum))?;
            rec.check(P_EQUIV, forward == lattice, graph, || {
                format!(
                    "2-cut and lattice criteria disagree on ({}, {}): {} vs {}",
                    nonsep[i], nonsep[j], forward, lattice
                )
            });
            related[i][j] = forward;
            related[j][i] = forward;
        }
    }
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if related[i][j] && related[j][k] {
                    rec.check(P_EQUIV, related[i][k], graph, || {
                        format!(
                            "transitivity broken on ({}, {}, {})",
                            nonsep[i], nonsep[j], nonsep[k]
                        )
                    });
                }
            }
        }
    }
    Ok(())
}

fn check_orientation_independence(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    rng: &mut ChaCha8Rng,
    edge_ids: &[EdgeId],
    twists: &[MultiTwist],
    system_valid: bool,
) -> Result<(), Error> {
    let flips: Vec<EdgeId> = edge_ids
        .iter()
        .filter(|_| rng.gen_bool(0.5))
        .cloned()
        .collect();
    let flipped = graph.reoriented(&flips)?;
    rec.check(P_ORIENT, flipped.genus()? == graph.genus()?, graph, || {
        format!("genus changed after flipping {flips:?}")
    });
    for e in edge_ids {
        let ok = graph.is_separating(e)? == flipped.is_separating(e)?;
        rec.check(P_ORIENT, ok, graph, || {
            format!("separating verdict on {e} changed after flipping {flips:?}")
        });
    }
    for (i, a) in edge_ids.iter().enumerate() {
        for b in edge_ids.iter().skip(i + 1) {
            if graph.is_separating(a)? || graph.is_separating(b)? {
                continue;
            }
            let ok = homology_equivalent(graph, a, b)? == homology_equivalent(&flipped, a, b)?;
            rec.check(P_ORIENT, ok, graph, || {
                format!("equivalence of ({a}, {b}) changed after flipping {flips:?}")
            });
        }
    }
    for twist in twists {
        let ok = difference_map_trivial(graph, twist)? == difference_map_trivial(&flipped, twist)?;
        rec.check(P_ORIENT, ok, graph, || {
            format!("oracle verdict changed after flipping {flips:?} on twist {twist:?}")
        });
        if system_valid {
            let ok = torelli_membership(graph, twist)?.member
                == torelli_membership(&flipped, twist)?.member;
            rec.check(P_ORIENT, ok, graph, || {
                format!("membership changed after flipping {flips:?} on twist {twist:?}")
            });
        }
    }
    Ok(())
}

fn check_isomorphism_invariance(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    rng: &mut ChaCha8Rng,
    twists: &[MultiTwist],
    system_valid: bool,
) -> Result<(), Error> {
    // A random relabeling is an isomorphism by construction.
    let mut vslots: Vec<usize> = (0..graph.vertex_count()).collect();
    let mut eslots: Vec<usize> = (0..graph.edge_count()).collect();
    for i in (1..vslots.len()).rev() {
        vslots.swap(i, rng.gen_range(0..=i));
    }
    for i in (1..eslots.len()).rev() {
        eslots.swap(i, rng.gen_range(0..=i));
    }
    let vmap: BTreeMap<VertexId, VertexId> = graph
        .vertex_ids()
        .enumerate()
        .map(|(i, v)| (v.clone(), VertexId::new(format!("w{:02}", vslots[i] + 1))))
        .collect();
    let emap: BTreeMap<EdgeId, EdgeId> = graph
        .edge_ids()
        .enumerate()
        .map(|(i, e)| (e.clone(), EdgeId::new(format!("d{:02}", eslots[i] + 1))))
        .collect();
    let relabeled = graph.relabeled(&vmap, &emap)?;

    rec.check(P_ISO, isomorphic(graph, &relabeled), graph, || {
        "explicit isomorphism search fails on a relabeled copy".to_owned()
    });
    rec.check(P_ISO, fingerprint(graph) == fingerprint(&relabeled), graph, || {
        "fingerprint changed under relabeling".to_owned()
    });
    rec.check(P_ISO, relabeled.genus()? == graph.genus()?, graph, || {
        "genus changed under relabeling".to_owned()
    });
    if system_valid {
        let before = necklace_partition(graph)?;
        let after = necklace_partition(&relabeled)?;
        let mut sizes_before: Vec<usize> = before.necklaces.iter().map(Vec::len).collect();
        let mut sizes_after: Vec<usize> = after.necklaces.iter().map(Vec::len).collect();
        sizes_before.sort_unstable();
        sizes_after.sort_unstable();
        let ok = sizes_before == sizes_after
            && before.separating.len() == after.separating.len();
        rec.check(P_ISO, ok, graph, || {
            "necklace partition shape changed under relabeling".to_owned()
        });
        let rank_ok = multitwist_subgroup_rank(graph)?.rank
            == multitwist_subgroup_rank(&relabeled)?.rank;
        rec.check(P_ISO, rank_ok, graph, || {
            "rank changed under relabeling".to_owned()
        });
        for twist in twists {
            let mapped = MultiTwist::new(
                twist
                    .entries()
                    .map(|(e, x)| (emap[e].clone(), x))
                    .collect::<Vec<_>>(),
            );
            let ok = torelli_membership(graph, twist)?.member
                == torelli_membership(&relabeled, &mapped)?.member;
            rec.check(P_ISO, ok, graph, || {
                format!("membership changed under relabeling on twist {twist:?}")
            });
        }
    }
    Ok(())
}

fn check_menger_duality(graph: &SurfaceGraph, rec: &mut Recorder) -> Result<(), Error> {
    let verts: Vec<VertexId> = graph.vertex_ids().cloned().collect();
    for (i, a) in verts.iter().enumerate() {
        for b in verts.iter().skip(i + 1) {
            let result = edge_disjoint_paths(graph, a, b, 2)?;
            let separated_by_one = (0..graph.edge_count()).any(|drop| {
                let (_, comp) = graph.components_skipping(|e| e == drop);
                let ai = graph.vertex_index(a).unwrap();
                let bi = graph.vertex_index(b).unwrap();
                comp[ai] != comp[bi]
            });
            match result {
                PathSearch::Found(paths) => {
                    let mut ok = paths.len() == 2 && !separated_by_one;
                    let mut seen = Vec::new();
                    for path in &paths {
                        ok &= walk_connects(graph, path, a, b);
                        for step in &path.steps {
                            ok &= !seen.contains(&step.edge);
                            seen.push(step.edge.clone());
                        }
                    }
                    rec.check(P_MENGER, ok, graph, || {
                        format!("paths {a} -> {b} fail the disjoint-trail contract")
                    });
                }
                PathSearch::Blocked { max_paths } => {
                    let ok = separated_by_one && max_paths < 2;
                    rec.check(P_MENGER, ok, graph, || {
                        format!(
                            "blocked at {max_paths} paths {a} -> {b} but no single edge separates"
                        )
                    });
                }
            }
        }
    }
    Ok(())
}

fn walk_connects(
    graph: &SurfaceGraph,
    path: &crate::homology::GraphPath,
    from: &VertexId,
    to: &VertexId,
) -> bool {
    let mut at = from.clone();
    for step in &path.steps {
        let Ok((tail, head)) = graph.endpoints(&step.edge) else {
            return false;
        };
        let (dep, arr) = match step.direction {
            crate::homology::Direction::Forward => (tail, head),
            crate::homology::Direction::Backward => (head, tail),
        };
        if *dep != at {
            return false;
        }
        at = arr.clone();
    }
    at == *to
}

fn check_transversal_contract(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    partition: &crate::necklace::NecklacePartition,
    twists: &[MultiTwist],
) -> Result<(), Error> {
    let qualifies = partition.separating.is_empty()
        && partition.necklaces.iter().all(|n| n.len() == 1);
    if !qualifies || graph.edge_count() == 0 {
        return Ok(());
    }
    for target in graph.edge_ids() {
        let (a, b) = two_transversal_circles(graph, target)?;
        let za = crossing_vector(graph, &a)?;
        let zb = crossing_vector(graph, &b)?;
        let mut ok = za.coefficient(target).abs() == 1 && zb.coefficient(target).abs() == 1;
        for e in graph.edge_ids() {
            ok &= za.coefficient(e).abs() <= 1 && zb.coefficient(e).abs() <= 1;
            if e != target {
                ok &= za.coefficient(e) * zb.coefficient(e) == 0;
            }
        }
        rec.check(P_TRANSVERSAL, ok, graph, || {
            format!("crossing contract fails for target {target}: z_A={za} z_B={zb}")
        });
        for twist in twists {
            let pairing: i64 = graph
                .edge_ids()
                .map(|e| twist.exponent(e) * za.coefficient(e) * zb.coefficient(e))
                .sum();
            rec.check(P_TRANSVERSAL, pairing == twist.exponent(target), graph, || {
                format!(
                    "pairing through the transversal circles gives {pairing}, expected exponent of {target}"
                )
            });
        }
    }
    Ok(())
}

fn check_bp_structure(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    partition: &crate::necklace::NecklacePartition,
) -> Result<(), Error> {
    for necklace in &partition.necklaces {
        let n = necklace.len();
        if n >= 2 {
            let verdict = necklace_is_bp(graph, necklace)?;
            rec.check(P_BP_WHOLE, verdict, graph, || {
                format!("whole necklace {necklace:?} does not contract to a cycle")
            });
        }
        // Every subset of two or more pairwise-equivalent circles must
        // contract to a cycle as well.
        for mask in 1u32..(1 << n) {
            if mask.count_ones() < 2 {
                continue;
            }
            let subset: Vec<EdgeId> = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| necklace[i].clone())
                .collect();
            let contracted = cut_along_only(graph, &subset)?;
            rec.check(P_BP_SUBSETS, is_bp_necklace(&contracted), graph, || {
                format!("subset {subset:?} of a necklace does not contract to a cycle")
            });
        }
    }
    Ok(())
}

fn check_oracle_equivalence(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    rng: &mut ChaCha8Rng,
    opts: &VerifyOptions,
    edge_ids: &[EdgeId],
) -> Result<(), Error> {
    let twists = if edge_ids.len() <= 4 {
        exhaustive_twists(graph, -3, 3)
    } else {
        (0..opts.twist_samples.max(100))
            .map(|_| random_twist(graph, rng, -3, 3))
            .collect()
    };
    for twist in &twists {
        let by_necklaces = torelli_membership(graph, twist)?.member;
        let by_oracle = difference_map_trivial(graph, twist)?;
        rec.check(P_ORACLE, by_necklaces == by_oracle, graph, || {
            format!(
                "necklace criterion says {by_necklaces}, difference map says {by_oracle}, twist {twist:?}"
            )
        });
    }
    Ok(())
}

fn check_zero_sum_perturbation(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    rng: &mut ChaCha8Rng,
    partition: &crate::necklace::NecklacePartition,
    twists: &[MultiTwist],
) -> Result<(), Error> {
    for twist in twists {
        for necklace in &partition.necklaces {
            let mut perturbation = MultiTwist::default();
            let mut acc = 0i64;
            for e in &necklace[1..] {
                let x = rng.gen_range(-3..=3);
                perturbation.set(e.clone(), x);
                acc += x;
            }
            perturbation.set(necklace[0].clone(), -acc);
            let shifted = twist_sum(twist, &perturbation);
            let before_oracle = difference_map_trivial(graph, twist)?;
            let after_oracle = difference_map_trivial(graph, &shifted)?;
            rec.check(P_PERTURB, before_oracle == after_oracle, graph, || {
                format!("oracle verdict moved under a zero-sum shift on {necklace:?}")
            });
            let before_member = torelli_membership(graph, twist)?.member;
            let after_member = torelli_membership(graph, &shifted)?.member;
            rec.check(P_PERTURB, before_member == after_member, graph, || {
                format!("membership moved under a zero-sum shift on {necklace:?}")
            });
        }
    }
    Ok(())
}

fn check_rank_consistency(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    rng: &mut ChaCha8Rng,
    partition: &crate::necklace::NecklacePartition,
) -> Result<(), Error> {
    let report = multitwist_subgroup_rank(graph)?;
    let by_classes: usize = partition.separating.len()
        + partition.necklaces.iter().map(|n| n.len() - 1).sum::<usize>();
    let ok = report.rank == graph.edge_count() - partition.necklaces.len()
        && report.rank == by_classes
        && report.basis.len() == report.rank;
    rec.check(P_RANK, ok, graph, || {
        format!(
            "rank {} disagrees with E - n = {} or class sum {}",
            report.rank,
            graph.edge_count() - partition.necklaces.len(),
            by_classes
        )
    });
    for twist in &report.basis {
        rec.check(P_RANK, torelli_membership(graph, twist)?.member, graph, || {
            format!("basis element {twist:?} fails membership")
        });
    }
    // Any solution of the necklace constraints must be an integer
    // combination of the basis, with coefficients read off directly.
    for _ in 0..6 {
        let mut solution = MultiTwist::default();
        for e in &partition.separating {
            solution.set(e.clone(), rng.gen_range(-5..=5));
        }
        for necklace in &partition.necklaces {
            let mut acc = 0i64;
            for e in &necklace[1..] {
                let x = rng.gen_range(-5..=5);
                solution.set(e.clone(), x);
                acc += x;
            }
            solution.set(necklace[0].clone(), -acc);
        }
        rec.check(
            P_RANK,
            torelli_membership(graph, &solution)?.member,
            graph,
            || format!("constructed solution {solution:?} fails membership"),
        );
        let mut rebuilt = MultiTwist::default();
        let mut cursor = 0;
        for e in &partition.separating {
            let lambda = solution.exponent(e);
            add_scaled(&mut rebuilt, &report.basis[cursor], lambda);
            cursor += 1;
        }
        for necklace in &partition.necklaces {
            for e in &necklace[1..] {
                let lambda = solution.exponent(e);
                add_scaled(&mut rebuilt, &report.basis[cursor], lambda);
                cursor += 1;
            }
        }
        rec.check(P_RANK, same_exponents(graph, &rebuilt, &solution), graph, || {
            format!("read-off coefficients do not rebuild {solution:?}")
        });
    }
    Ok(())
}

fn add_scaled(acc: &mut MultiTwist, basis: &MultiTwist, lambda: i64) {
    for (e, x) in basis.entries() {
        acc.set(e.clone(), acc.exponent(e) + lambda * x);
    }
}

fn check_rank_bounds(graph: &SurfaceGraph, rec: &mut Recorder, genus: u32) -> Result<(), Error> {
    if genus < 2 {
        return Ok(());
    }
    let rank = multitwist_subgroup_rank(graph)?.rank as i64;
    let bounds = rank_upper_bounds(graph)?;
    rec.check(P_BOUNDS, rank <= bounds.generic, graph, || {
        format!("rank {rank} exceeds the generic bound {}", bounds.generic)
    });
    rec.check(P_BOUNDS, rank <= bounds.multitwist, graph, || {
        format!("rank {rank} exceeds the defect bound {}", bounds.multitwist)
    });
    let ordered = bounds.generic >= bounds.refined && bounds.refined >= bounds.multitwist;
    rec.check(P_BOUNDS, ordered, graph, || {
        format!(
            "bound family out of order: {} {} {}",
            bounds.generic, bounds.refined, bounds.multitwist
        )
    });
    Ok(())
}

fn check_necklace_lower_bounds(graph: &SurfaceGraph, rec: &mut Recorder) -> Result<(), Error> {
    let report = necklace_count_check(graph)?;
    for check in [&report.base, &report.strengthened] {
        if let CountCheck::Applied { bound, margin, holds } = check {
            rec.check(P_COUNTS, *holds, graph, || {
                format!(
                    "necklace count {} misses the lower bound {bound} (margin {margin})",
                    report.necklaces
                )
            });
        }
    }
    Ok(())
}

fn check_normalize_preservation(
    graph: &SurfaceGraph,
    rec: &mut Recorder,
    twists: &[MultiTwist],
    system_valid: bool,
) -> Result<(), Error> {
    if system_valid {
        // A valid system is a fixed point up to the mode flag.
        for twist in twists.iter().take(2) {
            let (reduced, back) = graph.normalized(twist)?;
            let ok = same_shape(&reduced, graph)
                && reduced.mode() == Mode::System
                && same_exponents(graph, &back, twist);
            rec.check(P_NORMALIZE, ok, graph, || {
                "a valid system moved under normalization".to_owned()
            });
        }
        // Expand with an isotopy chain and a trivial boundary circle, then
        // normalize back down; membership must survive the round trip.
        if graph.edge_count() > 0 {
            let e0 = graph.edge_ids().next().unwrap().clone();
            let (tail, head) = {
                let (t, h) = graph.endpoints(&e0)?;
                (t.clone(), h.clone())
            };
            let waist = fresh_vertex_name(graph, "waist");
            let plug = fresh_vertex_name(graph, "plug");
            let second_half = fresh_edge_name(graph, e0.as_str());
            let plug_edge = fresh_edge_name(graph, "plug");
            let first_vertex = graph.vertex_ids().next().unwrap().clone();
            let mut verts: Vec<(VertexId, u32)> = graph
                .vertices()
                .map(|(v, g)| (v.clone(), g))
                .collect();
            verts.push((waist.clone(), 0));
            verts.push((plug.clone(), 0));
            let mut edges = Vec::new();
            for (e, t, h) in graph.edges() {
                if e == &e0 {
                    edges.push((e0.clone(), t.clone(), waist.clone()));
                    edges.push((second_half.clone(), waist.clone(), h.clone()));
                } else {
                    edges.push((e.clone(), t.clone(), h.clone()));
                }
            }
            edges.push((plug_edge.clone(), first_vertex, plug));
            let expanded = SurfaceGraph::new(Mode::General, verts, edges)?;
            rec.check(P_NORMALIZE, expanded.genus()? == graph.genus()?, graph, || {
                "expansion changed the genus".to_owned()
            });
            for twist in twists.iter().take(3) {
                let mut lifted = MultiTwist::default();
                for (e, x) in twist.entries() {
                    if e == &e0 {
                        lifted.set(e0.clone(), x - 1);
                        lifted.set(second_half.clone(), 1);
                    } else {
                        lifted.set(e.clone(), x);
                    }
                }
                if twist.entry(&e0).is_none() {
                    lifted.set(e0.clone(), -1);
                    lifted.set(second_half.clone(), 1);
                }
                lifted.set(plug_edge.clone(), 7);
                let (reduced, back) = expanded.normalized(&lifted)?;
                let mut ok = same_shape(&reduced, graph) && same_exponents(graph, &back, twist);
                ok &= difference_map_trivial(&expanded, &lifted)?
                    == torelli_membership(graph, twist)?.member;
                rec.check(P_NORMALIZE, ok, graph, || {
                    format!(
                        "normalization round trip broke on twist {twist:?} (tail {tail}, head {head})"
                    )
                });
            }
        }
    } else {
        for twist in twists.iter().take(3) {
            let (reduced, back) = graph.normalized(twist)?;
            let mut ok = reduced.ensure_valid_system().is_ok() || reduced.edge_count() == 0;
            ok &= reduced.genus()? == graph.genus()?;
            ok &= difference_map_trivial(graph, twist)? == difference_map_trivial(&reduced, &back)?;
            let (again, back_again) = reduced.normalized(&back)?;
            ok &= again == reduced && same_exponents(&reduced, &back_again, &back);
            rec.check(P_NORMALIZE, ok, graph, || {
                format!("general-mode normalization misbehaves on twist {twist:?}")
            });
        }
    }
    Ok(())
}
