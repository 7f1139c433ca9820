//! Brute-force reference implementations shared by the integration tests.
//!
//! Distances come from clique expansion followed by Floyd-Warshall; metric
//! values are evaluated straight from their definitions over ordered pairs.

#![allow(dead_code)]

use std::collections::HashMap;

use hotkit_core::hot::Node;
use hotkit_core::TextHypergraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const INF: u32 = u32::MAX;

pub struct Apsp {
    pub position: HashMap<String, usize>,
    pub dist: Vec<Vec<u32>>,
}

impl Apsp {
    pub fn new(hot: &TextHypergraph) -> Self {
        let ids: Vec<String> = hot.node_ids().map(|id| id.to_string()).collect();
        let position: HashMap<String, usize> = ids
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), i))
            .collect();
        let n = ids.len();
        let mut dist = vec![vec![INF; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = 0;
        }
        for (_, edge) in hot.hyperedges() {
            let m: Vec<usize> = edge
                .members()
                .iter()
                .map(|id| position[id.as_str()])
                .collect();
            for &a in &m {
                for &b in &m {
                    if a != b {
                        dist[a][b] = 1;
                    }
                }
            }
        }
        for k in 0..n {
            for i in 0..n {
                if dist[i][k] == INF {
                    continue;
                }
                for j in 0..n {
                    if dist[k][j] != INF && dist[i][k] + dist[k][j] < dist[i][j] {
                        dist[i][j] = dist[i][k] + dist[k][j];
                    }
                }
            }
        }
        Apsp { position, dist }
    }

    pub fn d(&self, a: &str, b: &str) -> u32 {
        self.dist[self.position[a]][self.position[b]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleMetrics {
    pub drel: Option<f64>,
    pub drand: Option<f64>,
    pub er: Option<f64>,
    pub rdp: Option<f64>,
    pub sigma_rel: f64,
    pub sigma_rand: f64,
}

struct Family {
    mean: Option<f64>,
    disconnected: u64,
    one_hop: u64,
    ordered: u64,
}

fn family(apsp: &Apsp, sets: &[Vec<String>]) -> Family {
    let mut f = Family {
        mean: None,
        disconnected: 0,
        one_hop: 0,
        ordered: 0,
    };
    let mut sum = 0.0;
    let mut contributing = 0usize;
    for r in sets {
        let mut total = 0u64;
        let mut connected = 0u64;
        for i in r {
            for j in r {
                if i == j {
                    continue;
                }
                f.ordered += 1;
                let d = apsp.d(i, j);
                if d == INF {
                    f.disconnected += 1;
                } else {
                    total += u64::from(d);
                    connected += 1;
                    f.one_hop += u64::from(d == 1);
                }
            }
        }
        if connected > 0 {
            sum += total as f64 / connected as f64;
            contributing += 1;
        }
    }
    if contributing > 0 {
        f.mean = Some(sum / contributing as f64);
    }
    f
}

pub fn oracle_metrics(
    hot: &TextHypergraph,
    relevant: &[Vec<String>],
    random: &[Vec<String>],
) -> OracleMetrics {
    let apsp = Apsp::new(hot);
    let rel = family(&apsp, relevant);
    let rand = family(&apsp, random);
    let ratio = |num: u64, den: u64| {
        if den == 0 {
            0.0
        } else {
            num as f64 / den as f64
        }
    };
    OracleMetrics {
        drel: rel.mean,
        drand: rand.mean,
        er: rel.mean.zip(rand.mean).map(|(a, b)| a / b),
        rdp: (rel.ordered > 0).then(|| rel.disconnected as f64 / rel.ordered as f64),
        sigma_rel: ratio(rel.one_hop, rel.ordered),
        sigma_rand: ratio(rand.one_hop, rand.ordered),
    }
}

/// Builds a hypergraph from string slices; edges are named `e0`, `e1`, ...
pub fn hot_from(nodes: &[&str], edges: &[&[&str]]) -> TextHypergraph {
    let mut h = TextHypergraph::new();
    for n in nodes {
        h.add_node(*n, Node::new(format!("text of {n}"))).unwrap();
    }
    for (i, e) in edges.iter().enumerate() {
        h.add_hyperedge(format!("e{i}"), format!("edge {i}"), e.iter().copied())
            .unwrap();
    }
    h
}

pub fn strings(sets: &[&[&str]]) -> Vec<Vec<String>> {
    sets.iter()
        .map(|s| s.iter().map(|x| x.to_string()).collect())
        .collect()
}

/// Seeded small hypergraph with up to `max_nodes` nodes and `max_edges`
/// edges of size 1..=5, plus a relevance family of 1..=6 sets.
pub fn random_case(
    seed: u64,
    max_nodes: usize,
    max_edges: usize,
) -> (TextHypergraph, Vec<Vec<String>>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.random_range(4..=max_nodes);
    let mut hot = TextHypergraph::new();
    for i in 0..n {
        hot.add_node(format!("v{i:02}"), Node::new("")).unwrap();
    }
    let ids: Vec<String> = (0..n).map(|i| format!("v{i:02}")).collect();
    for e in 0..rng.random_range(0..=max_edges) {
        let size = rng.random_range(1..=5.min(n));
        let members: Vec<String> = rand::seq::index::sample(&mut rng, n, size)
            .into_iter()
            .map(|i| ids[i].clone())
            .collect();
        hot.add_hyperedge(format!("e{e}"), "", members).unwrap();
    }
    let sets = (0..rng.random_range(1..=6))
        .map(|_| {
            let size = rng.random_range(2..=4.min(n));
            let mut s: Vec<String> = rand::seq::index::sample(&mut rng, n, size)
                .into_iter()
                .map(|i| ids[i].clone())
                .collect();
            s.sort();
            s
        })
        .collect();
    (hot, sets)
}

pub fn fixture_path(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

/// ER from the oracle for explicit families.
pub fn oracle_er(hot: &TextHypergraph, relevant: &[Vec<String>], random: &[Vec<String>]) -> f64 {
    oracle_metrics(hot, relevant, random)
        .er
        .expect("defined ER")
}

/// Chain a-b-c-d-e-f with `R = {a,c},{d,f}` and random sets of distance
/// 3, 3, 3, 5. Every pair is connected and ER < 1. The returned edge
/// `{a,c,e}` has one relevant pair in three, and its shortcut shortens
/// random pairs as much as relevant ones.
pub struct AlignedEdgeFixture {
    pub hot: TextHypergraph,
    pub relevant: Vec<Vec<String>>,
    pub random: Vec<Vec<String>>,
    pub new_edge: Vec<String>,
}

pub fn aligned_edge_fixture() -> AlignedEdgeFixture {
    AlignedEdgeFixture {
        hot: hot_from(
            &["a", "b", "c", "d", "e", "f"],
            &[
                &["a", "b"],
                &["b", "c"],
                &["c", "d"],
                &["d", "e"],
                &["e", "f"],
            ],
        ),
        relevant: strings(&[&["a", "c"], &["d", "f"]]),
        random: strings(&[&["a", "d"], &["b", "e"], &["c", "f"], &["a", "f"]]),
        new_edge: vec!["a".into(), "c".into(), "e".into()],
    }
}

/// Random pairs already one hop apart (sigma_rand = 1) while the single
/// relevant pair is three hops away. Adding `{a,b,f}` (one relevant pair
/// in three) collapses the relevant distance and ER falls.
pub fn pathological_fixture() -> AlignedEdgeFixture {
    AlignedEdgeFixture {
        hot: hot_from(
            &["a", "b", "c", "d", "e", "f"],
            &[&["a", "b", "c", "d"], &["d", "e"], &["e", "f"]],
        ),
        relevant: strings(&[&["a", "f"]]),
        random: strings(&[&["a", "b"], &["c", "d"]]),
        new_edge: vec!["a".into(), "b".into(), "f".into()],
    }
}

pub fn with_edge(hot: &TextHypergraph, members: &[String]) -> TextHypergraph {
    let mut h = hot.clone();
    h.add_hyperedge("added", "added", members.iter().map(String::as_str))
        .unwrap();
    h
}

/// Unordered-pair relevant fraction of `members` under `sets`.
pub fn relevant_fraction(members: &[String], sets: &[Vec<String>]) -> f64 {
    let mut rel = 0;
    let mut total = 0;
    for (i, a) in members.iter().enumerate() {
        for b in &members[i + 1..] {
            total += 1;
            if sets.iter().any(|s| s.contains(a) && s.contains(b)) {
                rel += 1;
            }
        }
    }
    rel as f64 / total as f64
}

/// Twenty nodes in five clusters of four. Relevance covers every pair:
/// one set per cluster plus every cross-cluster pair as its own set.
/// The starting hypergraph has one edge per cluster and a chain of
/// bridges between consecutive clusters.
pub fn clustered_fixture() -> (TextHypergraph, Vec<Vec<String>>) {
    let id = |c: usize, k: usize| format!("c{c}n{k}");
    let mut hot = TextHypergraph::new();
    for c in 0..5 {
        for k in 0..4 {
            hot.add_node(id(c, k), Node::new("")).unwrap();
        }
    }
    let mut sets = Vec::new();
    for c in 0..5 {
        let cluster: Vec<String> = (0..4).map(|k| id(c, k)).collect();
        hot.add_hyperedge(format!("cluster-{c}"), "", cluster.clone())
            .unwrap();
        sets.push(cluster);
        if c + 1 < 5 {
            hot.add_hyperedge(format!("bridge-{c}"), "", [id(c, 3), id(c + 1, 0)])
                .unwrap();
        }
    }
    for c1 in 0..5 {
        for c2 in c1 + 1..5 {
            for k1 in 0..4 {
                for k2 in 0..4 {
                    sets.push(vec![id(c1, k1), id(c2, k2)]);
                }
            }
        }
    }
    (hot, sets)
}
