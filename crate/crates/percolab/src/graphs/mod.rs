//! Infinite-graph contract, ball materialization, and girth/orbit diagnostics.
//!
//! A graph is presented lazily: a root vertex plus a pure neighbor function.
//! Everything downstream (percolation, SAW enumeration, covers) explores the
//! graph through this interface and never assumes a finite vertex set.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

pub mod families;

/// Default vertex budget for ball materialization.
pub const DEFAULT_BALL_BUDGET: usize = 5_000_000;

/// Canonical encoding of a vertex: a family-specific integer sequence.
///
/// Two refs are equal iff their payloads are equal, and the lexicographic
/// order on payloads gives the canonical (sorted) edge key.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexRef(Vec<i64>);

impl VertexRef {
    pub fn new(payload: Vec<i64>) -> Self {
        VertexRef(payload)
    }

    pub fn payload(&self) -> &[i64] {
        &self.0
    }

    pub fn into_payload(self) -> Vec<i64> {
        self.0
    }
}

impl fmt::Display for VertexRef {
    /// Whitespace-free encoding, e.g. `(0,-1,2)`; the root of a tree family
    /// is the empty path `()`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for VertexRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical unordered edge key: endpoints in lexicographic payload order.
pub fn edge_key<'a>(a: &'a VertexRef, b: &'a VertexRef) -> (&'a VertexRef, &'a VertexRef) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Declared symmetry metadata. Quasi-transitivity of an infinite graph
/// presentation is not decidable, so families declare it and
/// [`orbit_consistency_check`] validates the declaration on finite balls.
#[derive(Clone, Debug, Serialize)]
pub struct SymmetryDecl {
    pub kind: SymmetryKind,
    /// Upper bound on the length of the shortest cycle through any vertex,
    /// when one is declared for the family.
    pub cycle_bound: Option<u32>,
}

#[derive(Clone, Debug, Serialize)]
pub enum SymmetryKind {
    Transitive,
    QuasiTransitive {
        #[serde(serialize_with = "serialize_refs")]
        orbit_reps: Vec<VertexRef>,
    },
    NoneDeclared,
}

fn serialize_refs<S: serde::Serializer>(v: &[VertexRef], s: S) -> Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(|r| r.to_string()))
}

/// Serialize a single vertex as its canonical text encoding.
pub fn serialize_ref<S: serde::Serializer>(v: &VertexRef, s: S) -> Result<S::Ok, S::Error> {
    s.collect_str(v)
}

impl SymmetryDecl {
    pub fn transitive(cycle_bound: Option<u32>) -> Self {
        SymmetryDecl {
            kind: SymmetryKind::Transitive,
            cycle_bound,
        }
    }

    pub fn none_declared() -> Self {
        SymmetryDecl {
            kind: SymmetryKind::NoneDeclared,
            cycle_bound: None,
        }
    }

    /// Orbit representatives implied by the declaration, headed by `root`
    /// for the transitive case.
    pub fn orbit_reps_or(&self, root: &VertexRef) -> Option<Vec<VertexRef>> {
        match &self.kind {
            SymmetryKind::Transitive => Some(vec![root.clone()]),
            SymmetryKind::QuasiTransitive { orbit_reps } => Some(orbit_reps.clone()),
            SymmetryKind::NoneDeclared => None,
        }
    }
}

type NeighborFn = Arc<dyn Fn(&VertexRef) -> Vec<VertexRef> + Send + Sync>;
type DistFn = Arc<dyn Fn(&VertexRef) -> u32 + Send + Sync>;

/// A rooted, locally finite graph presented by a neighbor generator.
///
/// The neighbor function must be symmetric (`u ∈ N(v) ⇔ v ∈ N(u)`), return
/// no self-loops or duplicates, and respect `degree_bound`. Families also
/// supply an exact distance-to-root function so that estimators can test
/// shell membership without materializing balls.
#[derive(Clone)]
pub struct GraphModel {
    family: String,
    root: VertexRef,
    neighbor_fn: NeighborFn,
    dist_fn: DistFn,
    degree_bound: usize,
    regular: bool,
    symmetry: SymmetryDecl,
}

impl GraphModel {
    pub fn new(
        family: impl Into<String>,
        root: VertexRef,
        neighbor_fn: NeighborFn,
        dist_fn: DistFn,
        degree_bound: usize,
        regular: bool,
        symmetry: SymmetryDecl,
    ) -> Self {
        GraphModel {
            family: family.into(),
            root,
            neighbor_fn,
            dist_fn,
            degree_bound,
            regular,
            symmetry,
        }
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn root(&self) -> &VertexRef {
        &self.root
    }

    /// Ordered neighbor list of `v`. Pure and stateless: safe to call from
    /// many workers concurrently.
    pub fn neighbors(&self, v: &VertexRef) -> Vec<VertexRef> {
        (self.neighbor_fn)(v)
    }

    /// Exact graph distance from the family root.
    pub fn distance_to_root(&self, v: &VertexRef) -> u32 {
        (self.dist_fn)(v)
    }

    pub fn degree_bound(&self) -> usize {
        self.degree_bound
    }

    /// Whether the family declares every vertex to have degree exactly
    /// `degree_bound`.
    pub fn is_declared_regular(&self) -> bool {
        self.regular
    }

    pub fn symmetry(&self) -> &SymmetryDecl {
        &self.symmetry
    }
}

impl fmt::Debug for GraphModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GraphModel")
            .field("family", &self.family)
            .field("root", &self.root)
            .field("degree_bound", &self.degree_bound)
            .finish()
    }
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("vertex budget {budget} exceeded; completed radius {partial_radius}")]
    BudgetExceeded { budget: usize, partial_radius: u32 },
    #[error("operation requires a declared symmetry, but graph declares none")]
    NoSymmetryDeclared,
    #[error("graph contains a cycle (edge {0} - {1}) but a tree was required")]
    NotATree(VertexRef, VertexRef),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

/// Materialized radius-`r` subgraph around the root.
///
/// Vertices carry their BFS distance; edges are those of the induced
/// subgraph on the ball's vertex set (boundary-boundary edges included,
/// though boundary vertices contribute no new vertices). Orderings are
/// deterministic: BFS discovery order over ordered neighbor lists.
#[derive(Clone, Debug)]
pub struct Ball {
    radius: u32,
    vertices: Vec<VertexRef>,
    dist: Vec<u32>,
    index: HashMap<VertexRef, u32>,
    adjacency: Vec<Vec<u32>>,
    edges: Vec<(u32, u32)>,
}

impl Ball {
    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> &[VertexRef] {
        &self.vertices
    }

    pub fn vertex(&self, i: u32) -> &VertexRef {
        &self.vertices[i as usize]
    }

    pub fn distance(&self, i: u32) -> u32 {
        self.dist[i as usize]
    }

    pub fn distance_of(&self, v: &VertexRef) -> Option<u32> {
        self.index.get(v).map(|&i| self.dist[i as usize])
    }

    pub fn index_of(&self, v: &VertexRef) -> Option<u32> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexRef) -> bool {
        self.index.contains_key(v)
    }

    /// Edge list as index pairs `(i, j)` with `i < j` in BFS order.
    pub fn edges(&self) -> &[(u32, u32)] {
        &self.edges
    }

    pub fn adjacency(&self, i: u32) -> &[u32] {
        &self.adjacency[i as usize]
    }

    pub fn degree(&self, i: u32) -> usize {
        self.adjacency[i as usize].len()
    }

    /// Vertices at distance exactly `radius`, in BFS order.
    pub fn boundary(&self) -> Vec<u32> {
        (0..self.vertices.len() as u32)
            .filter(|&i| self.dist[i as usize] == self.radius)
            .collect()
    }

    /// Interior vertices (distance `< radius`), in BFS order.
    pub fn interior(&self) -> Vec<u32> {
        (0..self.vertices.len() as u32)
            .filter(|&i| self.dist[i as usize] < self.radius)
            .collect()
    }

    pub fn is_adjacent(&self, i: u32, j: u32) -> bool {
        self.adjacency[i as usize].binary_search(&j).is_ok()
    }

    /// Edge-list text export: a header line with radius and root, then one
    /// line per edge with the two canonical vertex encodings separated by
    /// whitespace.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "# radius={} root={}\n",
            self.radius, self.vertices[0]
        ));
        for &(i, j) in &self.edges {
            let (a, b) = edge_key(self.vertex(i), self.vertex(j));
            out.push_str(&format!("{a} {b}\n"));
        }
        out
    }
}

/// BFS-materialize the radius-`radius` ball around the root with the default
/// vertex budget.
pub fn ball(graph: &GraphModel, radius: u32) -> Result<Ball, GraphError> {
    ball_around(graph, graph.root(), radius, DEFAULT_BALL_BUDGET)
}

/// Ball around an arbitrary center vertex, with an explicit vertex budget.
pub fn ball_around(
    graph: &GraphModel,
    center: &VertexRef,
    radius: u32,
    budget: usize,
) -> Result<Ball, GraphError> {
    let mut vertices = vec![center.clone()];
    let mut dist = vec![0u32];
    let mut index = HashMap::new();
    index.insert(center.clone(), 0u32);
    let mut adjacency: Vec<Vec<u32>> = vec![Vec::new()];
    let mut edges = Vec::new();
    let mut queue = VecDeque::new();
    queue.push_back(0u32);

    let mut completed_radius = 0u32;
    while let Some(u) = queue.pop_front() {
        let du = dist[u as usize];
        if du >= radius {
            continue;
        }
        for w in graph.neighbors(&vertices[u as usize]) {
            let wi = match index.get(&w) {
                Some(&wi) => wi,
                None => {
                    if vertices.len() >= budget {
                        return Err(GraphError::BudgetExceeded {
                            budget,
                            partial_radius: completed_radius,
                        });
                    }
                    let wi = vertices.len() as u32;
                    vertices.push(w.clone());
                    dist.push(du + 1);
                    index.insert(w, wi);
                    adjacency.push(Vec::new());
                    queue.push_back(wi);
                    wi
                }
            };
            // Each undirected edge is recorded once, when its first endpoint
            // is expanded.
            if !adjacency[u as usize].contains(&wi) {
                adjacency[u as usize].push(wi);
                adjacency[wi as usize].push(u);
                edges.push((u.min(wi), u.max(wi)));
            }
        }
        completed_radius = completed_radius.max(du + 1);
    }

    // Boundary vertices are never expanded above, but edges between two
    // boundary vertices belong to the induced ball: scan their neighbor
    // lists for endpoints that already exist.
    for u in 0..vertices.len() as u32 {
        if dist[u as usize] < radius {
            continue;
        }
        for w in graph.neighbors(&vertices[u as usize]) {
            if let Some(&wi) = index.get(&w) {
                if wi != u && !adjacency[u as usize].contains(&wi) {
                    adjacency[u as usize].push(wi);
                    adjacency[wi as usize].push(u);
                    edges.push((u.min(wi), u.max(wi)));
                }
            }
        }
    }

    for adj in &mut adjacency {
        adj.sort_unstable();
    }
    Ok(Ball {
        radius,
        vertices,
        dist,
        index,
        adjacency,
        edges,
    })
}

/// Length of the shortest cycle through `v` (closed non-backtracking walk
/// from `v` to `v`), or `None` if there is none of length `<= cap`.
///
/// Search runs over directed-edge states `(a, b)` with the transition
/// `(a, b) -> (b, c)` allowed for `c != a`, so the walk may reuse vertices
/// but never immediately reverses an edge. Any closed walk of length `L`
/// splits at its midpoint into two such walks from `v` that end at the same
/// head with distinct tails, and conversely every such pair composes into a
/// closed walk; so a BFS to depth `ceil(cap/2)` plus a meet-in-the-middle
/// scan finds the minimum. On a vertex lying on a simple cycle this is the
/// simple-cycle length; on a tree nothing is found within any cap.
pub fn local_girth(graph: &GraphModel, v: &VertexRef, cap: u32) -> Option<u32> {
    assert!(cap >= 3, "cycle cap must be at least 3");
    let half = cap.div_ceil(2);

    // Intern vertices so states are cheap integer pairs.
    let mut ids: HashMap<VertexRef, u32> = HashMap::new();
    let mut verts: Vec<VertexRef> = Vec::new();
    let intern = |w: VertexRef, verts: &mut Vec<VertexRef>, ids: &mut HashMap<VertexRef, u32>| {
        *ids.entry(w.clone()).or_insert_with(|| {
            verts.push(w);
            (verts.len() - 1) as u32
        })
    };
    let v_id = intern(v.clone(), &mut verts, &mut ids);

    let mut dist: HashMap<(u32, u32), u32> = HashMap::new();
    let mut queue = VecDeque::new();
    for u in graph.neighbors(v) {
        let u_id = intern(u, &mut verts, &mut ids);
        dist.insert((v_id, u_id), 1);
        queue.push_back((v_id, u_id));
    }
    while let Some((a, b)) = queue.pop_front() {
        let len = dist[&(a, b)];
        if len >= half {
            continue;
        }
        for c in graph.neighbors(&verts[b as usize].clone()) {
            let c_id = intern(c, &mut verts, &mut ids);
            if c_id == a {
                continue;
            }
            dist.entry((b, c_id)).or_insert_with(|| {
                queue.push_back((b, c_id));
                len + 1
            });
        }
    }

    // Two cheapest in-states per head vertex; distinct tails are automatic
    // for distinct states sharing a head.
    let mut best: HashMap<u32, (u32, u32)> = HashMap::new();
    for (&(_, head), &d) in &dist {
        let entry = best.entry(head).or_insert((u32::MAX, u32::MAX));
        if d < entry.0 {
            *entry = (d, entry.0);
        } else if d < entry.1 {
            entry.1 = d;
        }
    }
    let shortest = best
        .values()
        .filter(|(d1, d2)| *d1 != u32::MAX && *d2 != u32::MAX)
        .map(|(d1, d2)| d1 + d2)
        .min()?;
    (shortest <= cap).then_some(shortest)
}

/// Report of [`bounded_girth_scan`].
#[derive(Clone, Debug, Serialize)]
pub struct GirthScanReport {
    pub radius: u32,
    pub cap: u32,
    /// Largest finite local girth observed over the ball's vertices.
    pub max_girth_seen: Option<u32>,
    /// Whether any scanned vertex had no cycle of length `<= cap` through it.
    pub any_exceeded_cap: bool,
    /// Distinct finite girth values observed, ascending.
    pub values_seen: Vec<u32>,
}

/// Scan local girth over all vertices of the radius-`radius` ball.
pub fn bounded_girth_scan(
    graph: &GraphModel,
    radius: u32,
    cap: u32,
) -> Result<GirthScanReport, GraphError> {
    let b = ball(graph, radius)?;
    let mut max_girth_seen = None;
    let mut any_exceeded_cap = false;
    let mut values = Vec::new();
    for v in b.vertices() {
        match local_girth(graph, v, cap) {
            Some(g) => {
                max_girth_seen = Some(max_girth_seen.map_or(g, |m: u32| m.max(g)));
                if !values.contains(&g) {
                    values.push(g);
                }
            }
            None => any_exceeded_cap = true,
        }
    }
    values.sort_unstable();
    Ok(GirthScanReport {
        radius,
        cap,
        max_girth_seen,
        any_exceeded_cap,
        values_seen: values,
    })
}

/// Exact root-preserving isomorphism test between two materialized balls.
///
/// Backtracking over BFS order with distance and degree pruning; fine for
/// the small balls the diagnostics use.
pub fn rooted_ball_isomorphic(a: &Ball, b: &Ball) -> bool {
    assert_eq!(a.radius(), b.radius(), "balls must have equal radii");
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let n = a.vertex_count();
    // Per-distance vertex counts must agree.
    let mut layers_a = HashMap::new();
    let mut layers_b = HashMap::new();
    for i in 0..n as u32 {
        *layers_a.entry(a.distance(i)).or_insert(0u32) += 1;
        *layers_b.entry(b.distance(i)).or_insert(0u32) += 1;
    }
    if layers_a != layers_b {
        return false;
    }

    let mut mapping = vec![u32::MAX; n]; // a-index -> b-index
    let mut used = vec![false; n];
    mapping[0] = 0;
    used[0] = true;
    if a.degree(0) != b.degree(0) || a.distance(0) != b.distance(0) {
        return false;
    }
    backtrack_iso(a, b, 1, &mut mapping, &mut used)
}

fn backtrack_iso(a: &Ball, b: &Ball, next: u32, mapping: &mut [u32], used: &mut [bool]) -> bool {
    let n = a.vertex_count() as u32;
    if next == n {
        // Mapping is a bijection preserving all a-edges; equal edge counts
        // make it an isomorphism.
        return true;
    }
    let u = next; // BFS order guarantees an already-mapped neighbor exists
    for cand in 0..n {
        if used[cand as usize]
            || b.distance(cand) != a.distance(u)
            || b.degree(cand) != a.degree(u)
        {
            continue;
        }
        // Every mapped neighbor of u must map to a neighbor of cand, and u
        // must have exactly as many mapped neighbors as cand does.
        let mut ok = true;
        let mut mapped_nbrs = 0;
        for &w in a.adjacency(u) {
            if mapping[w as usize] != u32::MAX {
                mapped_nbrs += 1;
                if !b.is_adjacent(cand, mapping[w as usize]) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            let cand_mapped = b
                .adjacency(cand)
                .iter()
                .filter(|&&w| used[w as usize])
                .count();
            if cand_mapped != mapped_nbrs {
                ok = false;
            }
        }
        if !ok {
            continue;
        }
        mapping[u as usize] = cand;
        used[cand as usize] = true;
        if backtrack_iso(a, b, next + 1, mapping, used) {
            return true;
        }
        mapping[u as usize] = u32::MAX;
        used[cand as usize] = false;
    }
    false
}

/// Outcome of [`orbit_consistency_check`].
#[derive(Clone, Debug, Serialize)]
pub struct OrbitReport {
    pub radius: u32,
    pub vertices_checked: usize,
    pub orbit_rep_count: usize,
    /// Vertices whose rooted ball matched no declared representative.
    pub violations: Vec<String>,
}

impl OrbitReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Finite necessary check of a declared (quasi-)transitivity: every vertex
/// of the radius-`radius` ball must have its rooted radius-`radius` ball
/// isomorphic to that of some declared orbit representative.
pub fn orbit_consistency_check(graph: &GraphModel, radius: u32) -> Result<OrbitReport, GraphError> {
    let reps = graph
        .symmetry()
        .orbit_reps_or(graph.root())
        .ok_or(GraphError::NoSymmetryDeclared)?;
    let rep_balls: Vec<Ball> = reps
        .iter()
        .map(|r| ball_around(graph, r, radius, DEFAULT_BALL_BUDGET))
        .collect::<Result<_, _>>()?;

    let scan = ball(graph, radius)?;
    let mut violations = Vec::new();
    for v in scan.vertices() {
        let vb = ball_around(graph, v, radius, DEFAULT_BALL_BUDGET)?;
        if !rep_balls.iter().any(|rb| rooted_ball_isomorphic(&vb, rb)) {
            violations.push(v.to_string());
        }
    }
    Ok(OrbitReport {
        radius,
        vertices_checked: scan.vertex_count(),
        orbit_rep_count: rep_balls.len(),
        violations,
    })
}
