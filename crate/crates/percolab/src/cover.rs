//! The universal cover of a base graph, built lazily as the tree of
//! non-backtracking paths from a fixed base vertex, plus machine checks of
//! the covering-map properties (1-Lipschitz projection, strong lifting,
//! uniformly non-trivial fibres).

use std::collections::{HashMap, VecDeque};
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::graphs::{ball, GraphError, GraphModel, SymmetryDecl, VertexRef};

/// A vertex of the universal cover: a non-backtracking path in the base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverNode {
    path: Vec<VertexRef>,
}

#[derive(Debug, Error)]
pub enum CoverError {
    #[error("path must start at the fixed base vertex")]
    WrongStart,
    #[error("consecutive path entries {0} and {1} are not adjacent in the base")]
    NotAdjacent(VertexRef, VertexRef),
    #[error("path backtracks at position {0}")]
    Backtracks(usize),
    #[error("path must be non-empty")]
    Empty,
}

impl CoverNode {
    /// Validate a path against the base graph: starts at `base_vertex`,
    /// consecutive entries adjacent, no immediate reversals.
    pub fn new(
        base: &GraphModel,
        base_vertex: &VertexRef,
        path: Vec<VertexRef>,
    ) -> Result<Self, CoverError> {
        if path.is_empty() {
            return Err(CoverError::Empty);
        }
        if path[0] != *base_vertex {
            return Err(CoverError::WrongStart);
        }
        for i in 0..path.len() - 1 {
            if !base.neighbors(&path[i]).contains(&path[i + 1]) {
                return Err(CoverError::NotAdjacent(path[i].clone(), path[i + 1].clone()));
            }
        }
        for i in 0..path.len().saturating_sub(2) {
            if path[i] == path[i + 2] {
                return Err(CoverError::Backtracks(i));
            }
        }
        Ok(CoverNode { path })
    }

    pub fn path(&self) -> &[VertexRef] {
        &self.path
    }

    pub fn encoded(&self) -> VertexRef {
        encode_path(&self.path)
    }

    pub fn from_encoded(v: &VertexRef) -> Self {
        CoverNode {
            path: decode_path(v),
        }
    }
}

/// The covering projection: a path maps to its last vertex.
pub fn project(node: &CoverNode) -> &VertexRef {
    node.path.last().expect("cover nodes are non-empty")
}

/// Canonical encoding of a path as a single integer sequence:
/// length-prefixed concatenation of the entries' payloads.
pub fn encode_path(path: &[VertexRef]) -> VertexRef {
    let mut payload = Vec::with_capacity(path.iter().map(|v| v.payload().len() + 1).sum());
    for v in path {
        payload.push(v.payload().len() as i64);
        payload.extend_from_slice(v.payload());
    }
    VertexRef::new(payload)
}

pub fn decode_path(v: &VertexRef) -> Vec<VertexRef> {
    let p = v.payload();
    let mut out = Vec::new();
    let mut i = 0;
    while i < p.len() {
        let k = p[i] as usize;
        out.push(VertexRef::new(p[i + 1..i + 1 + k].to_vec()));
        i += 1 + k;
    }
    out
}

// Path length (number of entries) without materializing the entries.
fn encoded_len(v: &VertexRef) -> usize {
    let p = v.payload();
    let (mut i, mut n) = (0, 0);
    while i < p.len() {
        i += 1 + p[i] as usize;
        n += 1;
    }
    n
}

// Last path entry without decoding the whole path.
fn encoded_last(v: &VertexRef) -> VertexRef {
    let p = v.payload();
    let mut i = 0;
    loop {
        let k = p[i] as usize;
        if i + 1 + k == p.len() {
            return VertexRef::new(p[i + 1..].to_vec());
        }
        i += 1 + k;
    }
}

type ProjFn = Arc<dyn Fn(&VertexRef) -> VertexRef + Send + Sync>;

/// The universal cover presented as a graph over encoded paths, together
/// with its base and projection.
#[derive(Clone)]
pub struct CoverModel {
    base: GraphModel,
    base_vertex: VertexRef,
    graph: GraphModel,
    projection: ProjFn,
}

impl CoverModel {
    pub fn base(&self) -> &GraphModel {
        &self.base
    }

    pub fn base_vertex(&self) -> &VertexRef {
        &self.base_vertex
    }

    /// The cover as an ordinary lazy graph: usable by every estimator.
    pub fn graph(&self) -> &GraphModel {
        &self.graph
    }

    pub fn project_encoded(&self, v: &VertexRef) -> VertexRef {
        (self.projection)(v)
    }

    /// Assemble a cover from explicit parts. Exists so fixtures can ship
    /// deliberately corrupted covers; [`universal_cover`] is the honest
    /// constructor.
    pub fn from_parts(
        base: GraphModel,
        base_vertex: VertexRef,
        graph: GraphModel,
        projection: ProjFn,
    ) -> Self {
        CoverModel {
            base,
            base_vertex,
            graph,
            projection,
        }
    }
}

/// Build the universal cover at `base_vertex`: vertices are non-backtracking
/// paths, adjacency is extension by one edge (the truncation is listed
/// first, then extensions in base neighbor order).
pub fn universal_cover(base: &GraphModel, base_vertex: &VertexRef) -> CoverModel {
    let root = encode_path(std::slice::from_ref(base_vertex));
    let base_for_nbrs = base.clone();
    let neighbor_fn = Arc::new(move |v: &VertexRef| {
        let path = decode_path(v);
        let last = &path[path.len() - 1];
        let prev = (path.len() >= 2).then(|| &path[path.len() - 2]);
        let mut out = Vec::new();
        if path.len() >= 2 {
            out.push(encode_path(&path[..path.len() - 1]));
        }
        for u in base_for_nbrs.neighbors(last) {
            if Some(&u) != prev {
                let mut extended = path.clone();
                extended.push(u);
                out.push(encode_path(&extended));
            }
        }
        out
    });
    let graph = GraphModel::new(
        format!("cover({})", base.family()),
        root,
        neighbor_fn,
        Arc::new(|v: &VertexRef| (encoded_len(v) - 1) as u32),
        base.degree_bound(),
        base.is_declared_regular(),
        SymmetryDecl::none_declared(),
    );
    CoverModel {
        base: base.clone(),
        base_vertex: base_vertex.clone(),
        graph,
        projection: Arc::new(encoded_last),
    }
}

/// Outcome of one covering-map property check. A failure always carries a
/// concrete counterexample that can be re-checked in isolation.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub property: String,
    pub radius: u32,
    pub passed: bool,
    pub counterexample: Option<String>,
    /// Extremal statistic: property-specific (max distance slack for the
    /// Lipschitz check, empirical fibre radius R for the fibre check).
    pub max_statistic: Option<f64>,
    pub checked: u64,
    pub failures: u64,
}

impl VerificationReport {
    fn new(property: &str, radius: u32) -> Self {
        VerificationReport {
            property: property.to_string(),
            radius,
            passed: true,
            counterexample: None,
            max_statistic: None,
            checked: 0,
            failures: 0,
        }
    }

    fn fail(&mut self, counterexample: String) {
        self.failures += 1;
        if self.passed {
            self.passed = false;
            self.counterexample = Some(counterexample);
        }
    }
}

/// Materialized cover balls must be trees, and `d`-regular for declared
/// `d`-regular bases (interior vertices only; the boundary is unexpanded).
pub fn verify_shape(cover: &CoverModel, radius: u32) -> Result<VerificationReport, GraphError> {
    let b = ball(cover.graph(), radius)?;
    let mut report = VerificationReport::new("acyclic-regular", radius);
    report.checked = b.vertex_count() as u64;
    if b.edge_count() != b.vertex_count() - 1 {
        report.fail(format!(
            "cover ball has {} edges over {} vertices: not a tree",
            b.edge_count(),
            b.vertex_count()
        ));
    }
    if cover.base.is_declared_regular() {
        let d = cover.base.degree_bound();
        for i in b.interior() {
            if b.degree(i) != d {
                report.fail(format!(
                    "interior cover vertex {} has degree {} != {}",
                    b.vertex(i),
                    b.degree(i),
                    d
                ));
            }
        }
    }
    Ok(report)
}

// Tree distance between two cover nodes: ancestors are path prefixes, so the
// distance is the sum of depths above the longest common prefix.
fn cover_distance(a: &[VertexRef], b: &[VertexRef]) -> u32 {
    let lcp = a
        .iter()
        .zip(b.iter())
        .take_while(|(x, y)| x == y)
        .count();
    (a.len() - lcp + b.len() - lcp) as u32
}

/// Exhaustive 1-Lipschitz check over all pairs of the radius-`radius` cover
/// ball: base distance of the projections never exceeds cover distance.
/// Base distances come from per-projection BFS capped at twice the radius;
/// anything undiscovered within the cap already violates the bound.
pub fn verify_lipschitz(cover: &CoverModel, radius: u32) -> Result<VerificationReport, GraphError> {
    let b = ball(cover.graph(), radius)?;
    let paths: Vec<Vec<VertexRef>> = b.vertices().iter().map(decode_path).collect();
    let projections: Vec<VertexRef> = b
        .vertices()
        .iter()
        .map(|v| cover.project_encoded(v))
        .collect();

    let mut distinct: Vec<VertexRef> = projections.clone();
    distinct.sort();
    distinct.dedup();
    let mut base_dist: HashMap<&VertexRef, HashMap<VertexRef, u32>> = HashMap::new();
    for u in &distinct {
        base_dist.insert(u, bfs_distances(&cover.base, u, 2 * radius));
    }

    let mut report = VerificationReport::new("lipschitz", radius);
    let mut max_slack = 0.0f64;
    for i in 0..b.vertex_count() {
        for j in i + 1..b.vertex_count() {
            report.checked += 1;
            let dc = cover_distance(&paths[i], &paths[j]);
            match base_dist[&projections[i]].get(&projections[j]) {
                Some(&db) if db <= dc => max_slack = max_slack.max((dc - db) as f64),
                found => {
                    let shown = found.map(|d| d.to_string()).unwrap_or_else(|| format!(">{}", 2 * radius));
                    report.fail(format!(
                        "pair ({}; {}): base distance {} exceeds cover distance {}",
                        b.vertex(i as u32),
                        b.vertex(j as u32),
                        shown,
                        dc
                    ));
                }
            }
        }
    }
    report.max_statistic = Some(max_slack);
    Ok(report)
}

fn bfs_distances(graph: &GraphModel, from: &VertexRef, cap: u32) -> HashMap<VertexRef, u32> {
    let mut dist = HashMap::from([(from.clone(), 0u32)]);
    let mut queue = VecDeque::from([from.clone()]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv >= cap {
            continue;
        }
        for w in graph.neighbors(&v) {
            if !dist.contains_key(&w) {
                dist.insert(w.clone(), dv + 1);
                queue.push_back(w);
            }
        }
    }
    dist
}

/// Strong lifting: for every interior cover vertex `x` and every base
/// neighbor `u` of its projection, exactly one cover neighbor of `x`
/// projects to `u` (and nothing projects outside the base neighborhood).
pub fn verify_strong_lifting(
    cover: &CoverModel,
    radius: u32,
) -> Result<VerificationReport, GraphError> {
    let b = ball(cover.graph(), radius)?;
    let mut report = VerificationReport::new("strong-lifting", radius);
    for i in b.interior() {
        report.checked += 1;
        let x = b.vertex(i);
        let px = cover.project_encoded(x);
        let base_nbrs = cover.base.neighbors(&px);
        let mut counts: HashMap<VertexRef, u32> = HashMap::new();
        let mut stray = None;
        for nbr in cover.graph().neighbors(x) {
            let pn = cover.project_encoded(&nbr);
            if !base_nbrs.contains(&pn) {
                stray = Some(pn);
                break;
            }
            *counts.entry(pn).or_insert(0) += 1;
        }
        if let Some(pn) = stray {
            report.fail(format!(
                "cover neighbor of {x} projects to {pn}, not a base neighbor of {px}"
            ));
            continue;
        }
        for u in &base_nbrs {
            match counts.get(u).copied().unwrap_or(0) {
                1 => {}
                k => report.fail(format!(
                    "{k} cover neighbors of {x} project to base neighbor {u} of {px}"
                )),
            }
        }
    }
    Ok(report)
}

/// Uniformly non-trivial fibres: every interior cover vertex must see a
/// distinct vertex with the same projection within distance `r_cap` (lazy
/// BFS in the cover). Reports the empirical R, the max over vertices of the
/// minimal fibre-mate distance.
pub fn verify_fibres(
    cover: &CoverModel,
    radius: u32,
    r_cap: u32,
) -> Result<VerificationReport, GraphError> {
    assert!(r_cap >= 1);
    let b = ball(cover.graph(), radius)?;
    let mut report = VerificationReport::new("fibres", radius);
    let mut empirical_r = 0u32;
    for i in b.interior() {
        report.checked += 1;
        let x = b.vertex(i);
        let px = cover.project_encoded(x);
        match fibre_mate_distance(cover, x, &px, r_cap) {
            Some(d) => empirical_r = empirical_r.max(d),
            None => report.fail(format!(
                "no fibre mate of {x} (projection {px}) within distance {r_cap}"
            )),
        }
    }
    report.max_statistic = Some(empirical_r as f64);
    Ok(report)
}

fn fibre_mate_distance(
    cover: &CoverModel,
    x: &VertexRef,
    px: &VertexRef,
    r_cap: u32,
) -> Option<u32> {
    let mut dist = HashMap::from([(x.clone(), 0u32)]);
    let mut queue = VecDeque::from([x.clone()]);
    while let Some(v) = queue.pop_front() {
        let dv = dist[&v];
        if dv >= r_cap {
            continue;
        }
        for w in cover.graph().neighbors(&v) {
            if dist.contains_key(&w) {
                continue;
            }
            if cover.project_encoded(&w) == *px {
                return Some(dv + 1);
            }
            dist.insert(w.clone(), dv + 1);
            queue.push_back(w);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{backtracking_cover, scrambled_projection_cover};
    use crate::graphs::families::*;
    use crate::graphs::rooted_ball_isomorphic;

    #[test]
    fn encode_decode_round_trip() {
        let path = vec![
            VertexRef::new(vec![]),
            VertexRef::new(vec![-3]),
            VertexRef::new(vec![-3, 7, 0]),
        ];
        assert_eq!(decode_path(&encode_path(&path)), path);
        assert_eq!(encoded_len(&encode_path(&path)), 3);
        assert_eq!(encoded_last(&encode_path(&path)), path[2]);
    }

    #[test]
    fn cover_node_validation() {
        let hex = hexagonal_lattice();
        let o = hex.root().clone();
        let a = VertexRef::new(vec![1, 0]);
        let ok = CoverNode::new(&hex, &o, vec![o.clone(), a.clone(), VertexRef::new(vec![2, 0])]);
        assert!(ok.is_ok());
        assert_eq!(project(&ok.unwrap()), &VertexRef::new(vec![2, 0]));

        assert!(matches!(
            CoverNode::new(&hex, &o, vec![o.clone(), a.clone(), o.clone()]),
            Err(CoverError::Backtracks(0))
        ));
        assert!(matches!(
            CoverNode::new(&hex, &o, vec![o.clone(), VertexRef::new(vec![5, 5])]),
            Err(CoverError::NotAdjacent(_, _))
        ));
        assert!(matches!(
            CoverNode::new(&hex, &o, vec![a]),
            Err(CoverError::WrongStart)
        ));
    }

    #[test]
    fn cover_of_tree_is_the_tree() {
        let tree = regular_tree(3).unwrap();
        let cover = universal_cover(&tree, tree.root());
        for r in [2u32, 5] {
            let cb = ball(cover.graph(), r).unwrap();
            let tb = ball(&tree, r).unwrap();
            assert_eq!(cb.vertex_count(), tb.vertex_count());
            assert!(rooted_ball_isomorphic(&cb, &tb));
        }
    }

    #[test]
    fn covers_of_cyclic_bases_are_regular_trees() {
        let t3 = ball(&regular_tree(3).unwrap(), 6).unwrap();
        for base in [hexagonal_lattice(), fig1_graph(3).unwrap(), triangle_cactus()] {
            let cover = universal_cover(&base, base.root());
            let cb = ball(cover.graph(), 6).unwrap();
            assert_eq!(cb.vertex_count(), t3.vertex_count(), "{}", base.family());
            assert!(rooted_ball_isomorphic(&cb, &t3), "{}", base.family());
            let shape = verify_shape(&cover, 6).unwrap();
            assert!(shape.passed);
        }
        let t4 = ball(&regular_tree(4).unwrap(), 4).unwrap();
        let cover = universal_cover(&square_lattice(), square_lattice().root());
        let cb = ball(cover.graph(), 4).unwrap();
        assert!(rooted_ball_isomorphic(&cb, &t4));
    }

    #[test]
    fn projection_is_surjective_onto_base_ball() {
        let base = hexagonal_lattice();
        let cover = universal_cover(&base, base.root());
        let cb = ball(cover.graph(), 4).unwrap();
        let bb = ball(&base, 4).unwrap();
        let mut projected: Vec<VertexRef> = cb
            .vertices()
            .iter()
            .map(|v| cover.project_encoded(v))
            .collect();
        projected.sort();
        projected.dedup();
        let mut base_verts = bb.vertices().to_vec();
        base_verts.sort();
        assert_eq!(projected, base_verts);
    }

    #[test]
    fn truncation_commutes_with_projection() {
        let base = square_lattice();
        let cover = universal_cover(&base, base.root());
        let node = CoverNode::new(
            &base,
            base.root(),
            vec![
                VertexRef::new(vec![0, 0]),
                VertexRef::new(vec![1, 0]),
                VertexRef::new(vec![1, 1]),
            ],
        )
        .unwrap();
        let nbrs = cover.graph().neighbors(&node.encoded());
        // First neighbor is the truncation; its projection is the
        // second-to-last entry.
        assert_eq!(
            cover.project_encoded(&nbrs[0]),
            VertexRef::new(vec![1, 0])
        );
        assert_eq!(nbrs.len(), 4);
    }

    #[test]
    fn lipschitz_passes_with_equality_on_tree_base() {
        let tree = regular_tree(3).unwrap();
        let cover = universal_cover(&tree, tree.root());
        let rep = verify_lipschitz(&cover, 4).unwrap();
        assert!(rep.passed);
        assert_eq!(rep.max_statistic, Some(0.0), "projection is an isometry");
    }

    #[test]
    fn lipschitz_passes_on_cyclic_bases() {
        for base in [hexagonal_lattice(), square_lattice()] {
            let cover = universal_cover(&base, base.root());
            let rep = verify_lipschitz(&cover, 4).unwrap();
            assert!(rep.passed, "{}: {:?}", base.family(), rep.counterexample);
            assert!(rep.max_statistic.unwrap() > 0.0, "cycles force slack");
        }
    }

    #[test]
    fn strong_lifting_passes_on_zoo_covers() {
        for base in [
            hexagonal_lattice(),
            square_lattice(),
            fig1_graph(3).unwrap(),
            triangle_cactus(),
        ] {
            let cover = universal_cover(&base, base.root());
            let rep = verify_strong_lifting(&cover, 5).unwrap();
            assert!(rep.passed, "{}: {:?}", base.family(), rep.counterexample);
        }
    }

    #[test]
    fn fibres_bounded_by_cycle_bound() {
        let hex = hexagonal_lattice();
        let cover = universal_cover(&hex, hex.root());
        let rep = verify_fibres(&cover, 5, 8).unwrap();
        assert!(rep.passed, "{:?}", rep.counterexample);
        assert_eq!(rep.max_statistic, Some(6.0));

        let cactus = triangle_cactus();
        let cover = universal_cover(&cactus, cactus.root());
        let rep = verify_fibres(&cover, 5, 4).unwrap();
        assert!(rep.passed, "{:?}", rep.counterexample);
        assert!(rep.max_statistic.unwrap() <= 3.0);
    }

    #[test]
    fn fibres_fail_on_tree_base() {
        let tree = regular_tree(3).unwrap();
        let cover = universal_cover(&tree, tree.root());
        let rep = verify_fibres(&cover, 4, 6).unwrap();
        assert!(!rep.passed);
        assert!(rep.counterexample.is_some());
        // Trivial fibres everywhere: every interior vertex fails.
        assert_eq!(rep.failures, rep.checked);
    }

    #[test]
    fn corrupted_projection_fails_lipschitz() {
        let hex = hexagonal_lattice();
        let corrupted = scrambled_projection_cover(&hex);
        let rep = verify_lipschitz(&corrupted, 4).unwrap();
        assert!(!rep.passed);
        assert!(rep.counterexample.unwrap().contains("exceeds cover distance"));
    }

    #[test]
    fn backtracking_cover_fails_lifting_and_regularity() {
        let hex = hexagonal_lattice();
        let corrupted = backtracking_cover(&hex);
        let rep = verify_strong_lifting(&corrupted, 4).unwrap();
        assert!(!rep.passed);
        assert!(rep
            .counterexample
            .unwrap()
            .contains("cover neighbors"));
        let shape = verify_shape(&corrupted, 4).unwrap();
        assert!(!shape.passed, "degree d+1 must break declared regularity");
    }
}
