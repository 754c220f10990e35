//! Finite graphs and deliberately corrupted constructions for tests and
//! negative controls.

use std::collections::HashMap;
use std::sync::Arc;

use crate::cover::{decode_path, encode_path, universal_cover, CoverModel};
use crate::graphs::{GraphModel, SymmetryDecl, VertexRef};

/// Wrap an explicit finite edge list as a [`GraphModel`] rooted at `root`.
/// Neighbor lists are sorted; distances come from a precomputed BFS.
pub fn finite_graph(
    label: &str,
    root: Vec<i64>,
    edges: &[(Vec<i64>, Vec<i64>)],
) -> GraphModel {
    let mut adj: HashMap<VertexRef, Vec<VertexRef>> = HashMap::new();
    for (a, b) in edges {
        let (a, b) = (VertexRef::new(a.clone()), VertexRef::new(b.clone()));
        assert_ne!(a, b, "self-loop in fixture");
        adj.entry(a.clone()).or_default().push(b.clone());
        adj.entry(b).or_default().push(a);
    }
    let mut degree_bound = 1;
    for nbrs in adj.values_mut() {
        nbrs.sort();
        nbrs.dedup();
        degree_bound = degree_bound.max(nbrs.len());
    }
    let root = VertexRef::new(root);
    assert!(adj.contains_key(&root), "root must appear in the edge list");

    // BFS distance map for the dist function.
    let mut dist: HashMap<VertexRef, u32> = HashMap::new();
    dist.insert(root.clone(), 0);
    let mut queue = std::collections::VecDeque::from([root.clone()]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        for w in adj.get(&v).into_iter().flatten() {
            if !dist.contains_key(w) {
                dist.insert(w.clone(), dv + 1);
                queue.push_back(w.clone());
            }
        }
    }

    let adj = Arc::new(adj);
    let dist = Arc::new(dist);
    let adj2 = Arc::clone(&adj);
    GraphModel::new(
        label,
        root,
        Arc::new(move |v: &VertexRef| adj2.get(v).cloned().unwrap_or_default()),
        Arc::new(move |v: &VertexRef| *dist.get(v).expect("vertex outside fixture")),
        degree_bound,
        false,
        SymmetryDecl::none_declared(),
    )
}

/// Small deterministic generator for fixture randomness (SplitMix stream).
#[derive(Clone)]
pub struct FixtureRng(u64);

impl FixtureRng {
    pub fn new(seed: u64) -> Self {
        FixtureRng(seed)
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn unit(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

/// Random finite tree on `n` vertices, rooted at `(0)`, built by attaching
/// each vertex to a uniformly random earlier vertex (biased toward recent
/// vertices half the time to get deeper shapes).
pub fn random_finite_tree(n: usize, seed: u64) -> GraphModel {
    assert!(n >= 2);
    let mut rng = FixtureRng::new(seed);
    let mut edges = Vec::with_capacity(n - 1);
    for i in 1..n as i64 {
        let parent = if i > 3 && rng.unit() < 0.5 {
            // recent attachment: one of the last three vertices
            i - 1 - rng.below(3) as i64
        } else {
            rng.below(i as u64) as i64
        };
        edges.push((vec![parent], vec![i]));
    }
    finite_graph(&format!("random_tree(n={n},seed={seed})"), vec![0], &edges)
}

/// Negative control: the path graph with backtracking allowed. Vertices are
/// all paths from the base vertex, so the strong lifting property fails
/// (the truncation and the backtracking extension project to the same base
/// neighbor) and interior degrees are `d + 1`.
pub fn backtracking_cover(base: &GraphModel) -> CoverModel {
    let base_vertex = base.root().clone();
    let root = encode_path(std::slice::from_ref(&base_vertex));
    let base_for_nbrs = base.clone();
    let neighbor_fn = Arc::new(move |v: &VertexRef| {
        let path = decode_path(v);
        let last = &path[path.len() - 1];
        let mut out = Vec::new();
        if path.len() >= 2 {
            out.push(encode_path(&path[..path.len() - 1]));
        }
        for u in base_for_nbrs.neighbors(last) {
            let mut extended = path.clone();
            extended.push(u);
            out.push(encode_path(&extended));
        }
        out
    });
    let graph = GraphModel::new(
        format!("backtracking_cover({})", base.family()),
        root,
        neighbor_fn,
        Arc::new(|v: &VertexRef| (decode_path(v).len() - 1) as u32),
        base.degree_bound() + 1,
        base.is_declared_regular(),
        SymmetryDecl::none_declared(),
    );
    CoverModel::from_parts(
        base.clone(),
        base_vertex,
        graph,
        Arc::new(|v: &VertexRef| decode_path(v).last().unwrap().clone()),
    )
}

/// Negative control: an honest cover graph with a parity-scrambled
/// projection (even-length paths project to the base vertex instead of
/// their endpoint), which breaks the 1-Lipschitz property.
pub fn scrambled_projection_cover(base: &GraphModel) -> CoverModel {
    let honest = universal_cover(base, base.root());
    let graph = honest.graph().clone();
    CoverModel::from_parts(
        base.clone(),
        base.root().clone(),
        graph,
        Arc::new(|v: &VertexRef| {
            let path = decode_path(v);
            if path.len() % 2 == 0 {
                path[0].clone()
            } else {
                path.last().unwrap().clone()
            }
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::{ball, local_girth};

    #[test]
    fn finite_graph_round_trip() {
        // A 4-cycle with a pendant vertex.
        let g = finite_graph(
            "cycle4+1",
            vec![0],
            &[
                (vec![0], vec![1]),
                (vec![1], vec![2]),
                (vec![2], vec![3]),
                (vec![3], vec![0]),
                (vec![2], vec![4]),
            ],
        );
        let b = ball(&g, 3).unwrap();
        assert_eq!(b.vertex_count(), 5);
        assert_eq!(b.edge_count(), 5);
        assert_eq!(local_girth(&g, g.root(), 10), Some(4));
        assert_eq!(g.distance_to_root(&VertexRef::new(vec![4])), 3);
    }

    #[test]
    fn random_trees_are_trees() {
        for seed in 0..5 {
            let g = random_finite_tree(50, seed);
            let b = ball(&g, 60).unwrap();
            assert_eq!(b.vertex_count(), 50);
            assert_eq!(b.edge_count(), 49);
        }
    }
}
