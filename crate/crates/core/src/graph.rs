//! Labeled access graph over an accessible set, its k-finite layering and
//! the block-by-block member ordering.
//!
//! Vertices are set members. `O_m` and `O_n` are joined by an edge labeled
//! ν when `⌊O_m, ν⌉ = O_n`; the relation is symmetric, so edges are stored
//! once as `u < v`.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;

use serde::Serialize;

use crate::closure::{AccessibleSet, BlockRange};
use crate::error::{Error, Result};
use crate::pauli::{bracket_normalized, PauliString};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: PauliString,
}

#[derive(Clone, Debug)]
pub struct AccessGraph {
    n_vertices: usize,
    edges: Vec<Edge>,
    neighbors: Vec<Vec<usize>>,
}

impl AccessGraph {
    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    /// Edges sorted by `(u, v)`, `u < v`.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    pub fn label(&self, a: usize, b: usize) -> Option<&PauliString> {
        let key = (a.min(b), a.max(b));
        self.edges
            .binary_search_by(|e| (e.u, e.v).cmp(&key))
            .ok()
            .map(|i| &self.edges[i].label)
    }

    /// Symmetric `(row, col)` pattern of the adjacency matrix, row-major.
    pub fn adjacency_pattern(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = self
            .edges
            .iter()
            .flat_map(|e| [(e.u, e.v), (e.v, e.u)])
            .collect();
        out.sort_unstable();
        out
    }
}

fn targets(
    member: &PauliString,
    digamma: &[PauliString],
    index: &HashMap<&PauliString, usize>,
) -> Result<Vec<(usize, usize)>> {
    let mut out = Vec::new();
    for (e, nu) in digamma.iter().enumerate() {
        if let Some(r) = bracket_normalized(member, nu)? {
            let Some(&n) = index.get(&r) else {
                return Err(Error::Inconsistency(format!(
                    "⌊{member}, {nu}⌉ = {r} is not in the set; the set is not closed"
                )));
            };
            out.push((n, e));
        }
    }
    Ok(out)
}

/// Builds the access graph. Fails if some bracket leaves the set.
pub fn build_graph(set: &AccessibleSet, digamma: &[PauliString]) -> Result<AccessGraph> {
    for nu in digamma {
        if nu.n_qubits() != set.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: set.n_qubits(),
                right: nu.n_qubits(),
            });
        }
    }
    let mut digamma = digamma.to_vec();
    digamma.sort();
    digamma.dedup();
    let index = set.index_map();
    let members = set.members();

    #[cfg(feature = "parallel")]
    let found: Vec<Result<Vec<(usize, usize)>>> = {
        use rayon::prelude::*;
        members
            .par_iter()
            .map(|m| targets(m, &digamma, &index))
            .collect()
    };
    #[cfg(not(feature = "parallel"))]
    let found: Vec<Result<Vec<(usize, usize)>>> = members
        .iter()
        .map(|m| targets(m, &digamma, &index))
        .collect();

    let mut edges: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (m, hits) in found.into_iter().enumerate() {
        for (n, e) in hits? {
            if n == m {
                return Err(Error::Inconsistency(format!("loop at {}", members[m])));
            }
            let key = (m.min(n), m.max(n));
            match edges.get(&key) {
                Some(&prev) if prev != e => {
                    return Err(Error::Inconsistency(format!(
                        "{} and {} joined by both {} and {}",
                        members[key.0], members[key.1], digamma[prev], digamma[e]
                    )))
                }
                _ => {
                    edges.insert(key, e);
                }
            }
        }
    }
    let mut neighbors = vec![Vec::new(); set.len()];
    let edges: Vec<Edge> = edges
        .into_iter()
        .map(|((u, v), e)| {
            neighbors[u].push(v);
            neighbors[v].push(u);
            Edge {
                u,
                v,
                label: digamma[e].clone(),
            }
        })
        .collect();
    for list in &mut neighbors {
        list.sort_unstable();
    }
    Ok(AccessGraph {
        n_vertices: set.len(),
        edges,
        neighbors,
    })
}

/// Dense 0/1 adjacency matrix. Materialized on request only.
pub fn adjacency_matrix(graph: &AccessGraph) -> Vec<Vec<bool>> {
    let n = graph.n_vertices;
    let mut m = vec![vec![false; n]; n];
    for e in &graph.edges {
        m[e.u][e.v] = true;
        m[e.v][e.u] = true;
    }
    m
}

/// Components as ascending vertex lists, ordered by smallest vertex.
pub fn connected_components(graph: &AccessGraph) -> Vec<Vec<usize>> {
    let mut seen = vec![false; graph.n_vertices];
    let mut out = Vec::new();
    for start in 0..graph.n_vertices {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        let mut comp = vec![start];
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for &w in &graph.neighbors[v] {
                if !seen[w] {
                    seen[w] = true;
                    comp.push(w);
                    queue.push_back(w);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

pub fn is_connected(graph: &AccessGraph) -> bool {
    connected_components(graph).len() <= 1
}

/// No loops and at most one edge per unordered pair.
pub fn check_simple(graph: &AccessGraph) -> bool {
    let mut pairs = HashSet::new();
    graph
        .edges
        .iter()
        .all(|e| e.u < e.v && pairs.insert((e.u, e.v)))
}

/// Every edge maps each endpoint to the other under its label.
pub fn check_label_symmetry(set: &AccessibleSet, graph: &AccessGraph) -> Result<bool> {
    let m = set.members();
    for e in &graph.edges {
        if bracket_normalized(&m[e.u], &e.label)?.as_ref() != Some(&m[e.v])
            || bracket_normalized(&m[e.v], &e.label)?.as_ref() != Some(&m[e.u])
        {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    /// 1-based highest occupied site shared by the block's members.
    pub k: usize,
    pub members: Vec<usize>,
    pub core: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KFinitePartition {
    pub blocks: Vec<Block>,
}

impl KFinitePartition {
    pub fn block_sizes(&self) -> Vec<(usize, usize)> {
        self.blocks.iter().map(|b| (b.k, b.members.len())).collect()
    }

    pub fn block(&self, k: usize) -> Option<&Block> {
        self.blocks.iter().find(|b| b.k == k)
    }

    /// Replaces the automatically chosen cores with the given strings, one
    /// per block that contains any of them.
    pub fn set_cores(&mut self, set: &AccessibleSet, cores: &[PauliString]) -> Result<()> {
        let index = set.index_map();
        for c in cores {
            let &i = index
                .get(c)
                .ok_or_else(|| Error::InvalidInput(format!("core {c} is not a member")))?;
            let block = self
                .blocks
                .iter_mut()
                .find(|b| b.members.contains(&i))
                .ok_or_else(|| Error::InvalidInput(format!("core {c} is in no block")))?;
            block.core = i;
        }
        Ok(())
    }
}

/// Generation depth of each member: seeds are 0, otherwise parent + 1.
pub fn generation_depth(set: &AccessibleSet) -> Result<Vec<usize>> {
    let prov = set.provenance();
    let mut depth: Vec<Option<usize>> = vec![None; set.len()];
    for i in 0..set.len() {
        let mut chain = Vec::new();
        let mut cur = i;
        let base = loop {
            if let Some(d) = depth[cur] {
                break d;
            }
            match &prov[cur] {
                None => {
                    depth[cur] = Some(0);
                    break 0;
                }
                Some(p) => {
                    if chain.len() > set.len() {
                        return Err(Error::InvalidInput("provenance contains a cycle".into()));
                    }
                    chain.push(cur);
                    cur = p.parent;
                }
            }
        };
        for (offset, &c) in chain.iter().rev().enumerate() {
            depth[c] = Some(base + offset + 1);
        }
    }
    Ok(depth
        .into_iter()
        .map(|d| d.expect("all depths resolved"))
        .collect())
}

fn discovery_rank(set: &AccessibleSet) -> Result<Vec<usize>> {
    let depth = generation_depth(set)?;
    let members = set.members();
    let mut order: Vec<usize> = (0..set.len()).collect();
    order.sort_by(|&a, &b| {
        depth[a]
            .cmp(&depth[b])
            .then_with(|| members[a].cmp(&members[b]))
    });
    let mut rank = vec![0; set.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    Ok(rank)
}

/// Groups members by their highest occupied site.
///
/// Blocks are ascending in `k`, members keep their relative order, and each
/// block's core is its earliest-discovered member (smallest generation
/// depth, ties broken by canonical string order).
pub fn partition_k_finite(set: &AccessibleSet) -> Result<KFinitePartition> {
    let rank = discovery_rank(set)?;
    let mut by_k: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, m) in set.members().iter().enumerate() {
        let k = m.highest_site().ok_or(Error::IdentityMember)? + 1;
        by_k.entry(k).or_default().push(i);
    }
    let blocks = by_k
        .into_iter()
        .map(|(k, members)| {
            let core = *members
                .iter()
                .min_by_key(|&&i| rank[i])
                .expect("blocks are nonempty");
            Block { k, members, core }
        })
        .collect();
    Ok(KFinitePartition { blocks })
}

/// Result of [`order_members`].
#[derive(Clone, Debug)]
pub struct Ordering {
    pub set: AccessibleSet,
    pub warnings: Vec<String>,
}

/// Reorders the set block by block.
///
/// Each connected component is handled on its own, components in order of
/// their earliest-discovered member. Within a component, blocks go in
/// ascending `k`, and each block is laid out breadth first from its core
/// over the block's induced subgraph, visiting neighbours in canonical
/// order. A block whose induced subgraph is disconnected falls back to
/// discovery order and produces a warning.
pub fn order_members(
    set: &AccessibleSet,
    graph: &AccessGraph,
    partition: &KFinitePartition,
) -> Result<Ordering> {
    if graph.n_vertices() != set.len() {
        return Err(Error::InvalidInput("graph and set sizes differ".into()));
    }
    let covered: usize = partition.blocks.iter().map(|b| b.members.len()).sum();
    if covered != set.len() {
        return Err(Error::InvalidInput(
            "partition does not cover the set".into(),
        ));
    }
    let members = set.members();
    let rank = discovery_rank(set)?;
    let mut block_of = vec![usize::MAX; set.len()];
    for (b, block) in partition.blocks.iter().enumerate() {
        for &i in &block.members {
            block_of[i] = b;
        }
    }

    let mut components = connected_components(graph);
    components.sort_by_key(|c| c.iter().map(|&i| rank[i]).min());

    let mut order = Vec::with_capacity(set.len());
    let mut ranges = Vec::new();
    let mut cores = Vec::new();
    let mut warnings = Vec::new();
    for comp in &components {
        let mut per_block: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for &i in comp {
            per_block.entry(block_of[i]).or_default().push(i);
        }
        // Block indices ascend with k.
        for (b, block_members) in per_block {
            let block = &partition.blocks[b];
            let core = if block_members.contains(&block.core) {
                block.core
            } else {
                *block_members
                    .iter()
                    .min_by_key(|&&i| rank[i])
                    .expect("nonempty")
            };
            let inside: HashSet<usize> = block_members.iter().copied().collect();
            let mut seen = HashSet::from([core]);
            let mut laid = vec![core];
            let mut queue = VecDeque::from([core]);
            while let Some(v) = queue.pop_front() {
                let mut next: Vec<usize> = graph
                    .neighbors(v)
                    .iter()
                    .copied()
                    .filter(|w| inside.contains(w) && !seen.contains(w))
                    .collect();
                next.sort_by(|&a, &b| members[a].cmp(&members[b]));
                for w in next {
                    seen.insert(w);
                    laid.push(w);
                    queue.push_back(w);
                }
            }
            if laid.len() != block_members.len() {
                warnings.push(format!(
                    "block k={} has a disconnected induced subgraph; using discovery order",
                    block.k
                ));
                laid = block_members.clone();
                laid.sort_by_key(|&i| rank[i]);
            }
            let start = order.len();
            cores.push(start + laid.iter().position(|&i| i == core).expect("core laid out"));
            order.extend(laid);
            ranges.push(BlockRange {
                k: block.k,
                start,
                end: order.len(),
            });
        }
    }
    let mut out = set.permuted(&order)?;
    out.partition = ranges;
    out.cores = cores;
    Ok(Ordering { set: out, warnings })
}

/// Outcome of regenerating a block from one of its members.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RegenerationCheck {
    pub k: usize,
    pub member: usize,
    pub passed: bool,
}

/// For every block `k` and every member `O` of it, closes `{O}` under the
/// Hamiltonian strings supported on sites `≤ k`, keeping only k-finite
/// results, and compares the result with the block.
pub fn verify_block_regeneration(
    set: &AccessibleSet,
    partition: &KFinitePartition,
    digamma: &[PauliString],
) -> Result<Vec<RegenerationCheck>> {
    let members = set.members();
    let mut out = Vec::new();
    for block in &partition.blocks {
        let local: Vec<&PauliString> = digamma
            .iter()
            .filter(|nu| nu.highest_site().is_some_and(|h| h < block.k))
            .collect();
        let target: HashSet<&PauliString> = block.members.iter().map(|&i| &members[i]).collect();
        for &start in &block.members {
            let mut reached: HashSet<PauliString> = HashSet::from([members[start].clone()]);
            let mut queue = VecDeque::from([members[start].clone()]);
            while let Some(s) = queue.pop_front() {
                for nu in &local {
                    if let Some(r) = bracket_normalized(&s, nu)? {
                        if r.highest_site() == Some(block.k - 1) && !reached.contains(&r) {
                            reached.insert(r.clone());
                            queue.push_back(r);
                        }
                    }
                }
            }
            let passed =
                reached.len() == target.len() && reached.iter().all(|r| target.contains(r));
            out.push(RegenerationCheck {
                k: block.k,
                member: start,
                passed,
            });
        }
    }
    Ok(out)
}

/// Graphviz rendering with one cluster per block.
pub fn export_dot(
    set: &AccessibleSet,
    graph: &AccessGraph,
    partition: &KFinitePartition,
) -> String {
    let members = set.members();
    let mut out = String::from("graph access {\n");
    if set.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  node [shape=box, fontname=\"Helvetica\"];\n");
    out.push_str("  edge [fontname=\"Helvetica\", fontsize=10];\n");
    for (b, block) in partition.blocks.iter().enumerate() {
        let _ = writeln!(out, "  subgraph cluster_{b} {{");
        let _ = writeln!(out, "    label=\"k = {}\";", block.k);
        out.push_str("    style=dashed;\n");
        for &i in &block.members {
            let style = if i == block.core { ", style=bold" } else { "" };
            let _ = writeln!(out, "    n{i} [label=\"{}\"{style}];", members[i]);
        }
        out.push_str("  }\n");
    }
    for e in &graph.edges {
        let _ = writeln!(out, "  n{} -- n{} [label=\"{}\"];", e.u, e.v, e.label);
    }
    out.push_str("}\n");
    out
}

#[derive(Serialize)]
struct EdgeDocument {
    u: usize,
    v: usize,
    label: String,
}

#[derive(Serialize)]
struct GraphDocument {
    vertices: Vec<String>,
    edges: Vec<EdgeDocument>,
    blocks: Vec<Block>,
}

/// JSON form `{vertices, edges: [{u, v, label}], blocks}`.
pub fn export_json(
    set: &AccessibleSet,
    graph: &AccessGraph,
    partition: &KFinitePartition,
) -> String {
    let doc = GraphDocument {
        vertices: set.members().iter().map(|m| m.to_string()).collect(),
        edges: graph
            .edges
            .iter()
            .map(|e| EdgeDocument {
                u: e.u,
                v: e.v,
                label: e.label.to_string(),
            })
            .collect(),
        blocks: partition.blocks.clone(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::closure::generate;
    use crate::hamiltonian::build_exchange_chain;
    use crate::pauli::parse_string;

    fn p(t: &str, n: usize) -> PauliString {
        parse_string(t, n).unwrap()
    }

    fn chain(n: usize) -> Vec<PauliString> {
        build_exchange_chain(n, &vec![1.0; n - 1])
            .unwrap()
            .digamma()
    }

    fn edge_labels(set: &AccessibleSet, g: &AccessGraph) -> Vec<(String, String, String)> {
        let m = set.members();
        let mut v: Vec<_> = g
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (m[e.u].to_string(), m[e.v].to_string());
                let (a, b) = if a < b { (a, b) } else { (b, a) };
                (a, b, e.label.to_string())
            })
            .collect();
        v.sort();
        v
    }

    #[test]
    fn four_cycle_for_z1_on_two_sites() {
        let d = chain(2);
        let set = generate(&d, &[p("Z1", 2)]).unwrap();
        let g = build_graph(&set, &d).unwrap();
        let expected = vec![
            ("X1 Y2".to_string(), "Z1".to_string(), "Y1 Y2".to_string()),
            ("X1 Y2".to_string(), "Z2".to_string(), "X1 X2".to_string()),
            ("Y1 X2".to_string(), "Z1".to_string(), "X1 X2".to_string()),
            ("Y1 X2".to_string(), "Z2".to_string(), "Y1 Y2".to_string()),
        ];
        assert_eq!(edge_labels(&set, &g), expected);
        let adj = adjacency_matrix(&g);
        for (i, row) in adj.iter().enumerate() {
            assert_eq!(row.iter().filter(|&&b| b).count(), 2);
            assert!(!row[i]);
        }
        assert!(check_simple(&g));
        assert!(check_label_symmetry(&set, &g).unwrap());
    }

    #[test]
    fn single_member_without_hamiltonian() {
        let set = generate(&[], &[p("X1", 1)]).unwrap();
        let g = build_graph(&set, &[]).unwrap();
        assert!(g.edges().is_empty());
        assert!(is_connected(&g));
        assert!(adjacency_matrix(&g).iter().flatten().all(|b| !b));
    }

    #[test]
    fn closed_form_chain_is_a_path() {
        let d = chain(6);
        let set = generate(&d, &[p("X1", 6)]).unwrap();
        let g = build_graph(&set, &d).unwrap();
        let adj = adjacency_matrix(&g);
        for (i, row) in adj.iter().enumerate() {
            for (j, &e) in row.iter().enumerate() {
                assert_eq!(e, i.abs_diff(j) == 1, "({i},{j})");
            }
        }
    }

    #[test]
    fn non_fixpoint_is_rejected() {
        let d = chain(2);
        let partial = AccessibleSet::from_parts(2, vec![p("Z1", 2)], vec![None]).unwrap();
        assert!(matches!(
            build_graph(&partial, &d),
            Err(Error::Inconsistency(_))
        ));
    }

    #[test]
    fn two_disjoint_chains_give_two_components() {
        // Chains on sites 1-2 and 3-4 with no link between them.
        let d = vec![p("X1 X2", 4), p("Y1 Y2", 4), p("X3 X4", 4), p("Y3 Y4", 4)];
        let set = generate(&d, &[p("Z1", 4), p("Z3", 4)]).unwrap();
        let g = build_graph(&set, &d).unwrap();
        let comps = connected_components(&g);
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[0].len(), 4);
        let partition = partition_k_finite(&set).unwrap();
        let ordered = order_members(&set, &g, &partition).unwrap();
        // Z3 precedes Z1 canonically, so its component comes first.
        assert_eq!(ordered.set.members()[0], p("Z3", 4));
        assert_eq!(
            ordered.set.partition,
            vec![
                BlockRange {
                    k: 3,
                    start: 0,
                    end: 1
                },
                BlockRange {
                    k: 4,
                    start: 1,
                    end: 4
                },
                BlockRange {
                    k: 1,
                    start: 4,
                    end: 5
                },
                BlockRange {
                    k: 2,
                    start: 5,
                    end: 8
                },
            ]
        );
    }

    #[test]
    fn partition_case_b_two_sites() {
        let d = chain(2);
        let set = generate(&d, &[p("Z1", 2)]).unwrap();
        let part = partition_k_finite(&set).unwrap();
        assert_eq!(part.block_sizes(), vec![(1, 1), (2, 3)]);
        let block2: HashSet<String> = part.blocks[1]
            .members
            .iter()
            .map(|&i| set.members()[i].to_string())
            .collect();
        assert_eq!(
            block2,
            HashSet::from(["Z2".into(), "X1 Y2".into(), "Y1 X2".into()])
        );
    }

    #[test]
    fn partition_rejects_identity() {
        let set = AccessibleSet::from_parts(2, vec![PauliString::identity(2)], vec![None]).unwrap();
        assert!(matches!(
            partition_k_finite(&set),
            Err(Error::IdentityMember)
        ));
    }

    #[test]
    fn closed_form_blocks_are_singletons() {
        let d = chain(5);
        let set = generate(&d, &[p("Z1 Y2", 5)]).unwrap();
        let part = partition_k_finite(&set).unwrap();
        assert!(part.blocks.iter().all(|b| b.members.len() == 1));
    }

    #[test]
    fn single_block_orders_breadth_first_from_seed() {
        let d = vec![p("X1", 1)];
        let set = generate(&d, &[p("Z1", 1)]).unwrap();
        let g = build_graph(&set, &d).unwrap();
        let part = partition_k_finite(&set).unwrap();
        let ordered = order_members(&set, &g, &part).unwrap();
        let labels: Vec<String> = ordered
            .set
            .members()
            .iter()
            .map(|m| m.to_string())
            .collect();
        assert_eq!(labels, ["Z1", "Y1"]);
        assert!(ordered.warnings.is_empty());
    }

    #[test]
    fn regeneration_on_singleton_block_passes() {
        let d = chain(3);
        let set = generate(&d, &[p("X1", 3)]).unwrap();
        let part = partition_k_finite(&set).unwrap();
        let checks = verify_block_regeneration(&set, &part, &d).unwrap();
        assert_eq!(checks.len(), 3);
        assert!(checks.iter().all(|c| c.passed));
    }

    #[test]
    fn empty_dot_is_header_only() {
        let set = AccessibleSet::from_parts(1, vec![], vec![]).unwrap();
        let g = build_graph(&set, &[]).unwrap();
        let part = KFinitePartition { blocks: vec![] };
        assert_eq!(export_dot(&set, &g, &part), "graph access {\n}\n");
    }

    fn ordered(n: usize, seed: &str) -> (AccessibleSet, AccessGraph, KFinitePartition) {
        let d = chain(n);
        let set = generate(&d, &[p(seed, n)]).unwrap();
        let g = build_graph(&set, &d).unwrap();
        let part = partition_k_finite(&set).unwrap();
        let o = order_members(&set, &g, &part).unwrap();
        assert!(o.warnings.is_empty());
        let g = build_graph(&o.set, &d).unwrap();
        let part = partition_k_finite(&o.set).unwrap();
        (o.set, g, part)
    }

    #[test]
    fn case_b_dot_golden() {
        let (set, g, part) = ordered(2, "Z1");
        let expected = "graph access {
  node [shape=box, fontname=\"Helvetica\"];
  edge [fontname=\"Helvetica\", fontsize=10];
  subgraph cluster_0 {
    label=\"k = 1\";
    style=dashed;
    n0 [label=\"Z1\", style=bold];
  }
  subgraph cluster_1 {
    label=\"k = 2\";
    style=dashed;
    n1 [label=\"X1 Y2\", style=bold];
    n2 [label=\"Z2\"];
    n3 [label=\"Y1 X2\"];
  }
  n0 -- n1 [label=\"Y1 Y2\"];
  n0 -- n3 [label=\"X1 X2\"];
  n1 -- n2 [label=\"X1 X2\"];
  n2 -- n3 [label=\"Y1 Y2\"];
}
";
        assert_eq!(export_dot(&set, &g, &part), expected);
    }

    #[test]
    fn case_d_three_sites_dot_clusters() {
        let (set, g, part) = ordered(3, "Y1 Z2");
        let dot = export_dot(&set, &g, &part);
        assert_eq!(dot.matches(" [label=\"").count() - g.edges().len(), 9);
        assert_eq!(part.block_sizes(), vec![(2, 2), (3, 7)]);
        assert_eq!(dot.matches("subgraph cluster_").count(), 2);
    }

    #[test]
    fn case_b_six_sites_ordering_layers() {
        let (set, _, _) = ordered(6, "Z1");
        assert_eq!(set.members()[0], p("Z1", 6));
        let second: HashSet<String> = set.members()[1..4].iter().map(|m| m.to_string()).collect();
        assert_eq!(
            second,
            HashSet::from(["Z2".into(), "X1 Y2".into(), "Y1 X2".into()])
        );
        let ks: Vec<usize> = set
            .members()
            .iter()
            .map(|m| m.highest_site().unwrap())
            .collect();
        assert!(ks.windows(2).all(|w| w[0] <= w[1]));
        assert_eq!(
            set.partition
                .iter()
                .map(|b| b.end - b.start)
                .collect::<Vec<_>>(),
            [1, 3, 5, 7, 9, 11]
        );
    }

    #[test]
    fn ordering_ignores_input_permutation() {
        let (reference, _, _) = ordered(4, "Y1 Z2");
        let d = chain(4);
        let set = generate(&d, &[p("Y1 Z2", 4)]).unwrap();
        let n = set.len();
        for shift in [1, 7, 19] {
            let order: Vec<usize> = (0..n).map(|i| (i * 7 + shift) % n).collect();
            let shuffled = set.permuted(&order).unwrap();
            let g = build_graph(&shuffled, &d).unwrap();
            let part = partition_k_finite(&shuffled).unwrap();
            let o = order_members(&shuffled, &g, &part).unwrap();
            assert_eq!(o.set.members(), reference.members());
            assert_eq!(o.set.partition, reference.partition);
        }
    }

    #[test]
    fn case_d_named_cores_regenerate_their_blocks() {
        // Z2..Z(k-1) X_k for even k, Z2..Z(k-1) Y_k for odd k.
        let d = chain(4);
        let set = generate(&d, &[p("Y1 Z2", 4)]).unwrap();
        let mut part = partition_k_finite(&set).unwrap();
        let named = [p("X2", 4), p("Z2 Y3", 4), p("Z2 Z3 X4", 4)];
        part.set_cores(&set, &named).unwrap();
        for (block, core) in part.blocks.iter().zip(&named) {
            assert_eq!(set.members()[block.core], *core);
        }
        let g = build_graph(&set, &d).unwrap();
        let o = order_members(&set, &g, &part).unwrap();
        assert!(o.warnings.is_empty());
        for (range, core) in o.set.partition.iter().zip(&named) {
            assert_eq!(o.set.members()[range.start], *core);
        }
        assert!(verify_block_regeneration(&set, &part, &d)
            .unwrap()
            .iter()
            .all(|c| c.passed));
    }

    #[test]
    fn regeneration_case_b_and_d() {
        for seed in ["Z1", "Y1 Z2"] {
            let d = chain(4);
            let set = generate(&d, &[p(seed, 4)]).unwrap();
            let part = partition_k_finite(&set).unwrap();
            assert!(
                verify_block_regeneration(&set, &part, &d)
                    .unwrap()
                    .iter()
                    .all(|c| c.passed),
                "{seed}"
            );
        }
    }

    #[test]
    fn json_export_lists_edges_and_blocks() {
        let (set, g, part) = ordered(2, "Z1");
        let v: serde_json::Value = serde_json::from_str(&export_json(&set, &g, &part)).unwrap();
        assert_eq!(v["vertices"].as_array().unwrap().len(), 4);
        assert_eq!(v["edges"].as_array().unwrap().len(), 4);
        assert_eq!(v["edges"][0]["label"], "Y1 Y2");
        assert_eq!(v["blocks"][1]["members"], serde_json::json!([1, 2, 3]));
    }
}
