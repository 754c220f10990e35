//! The instance zoo: lazily generated infinite graph families.
//!
//! Each family fixes a canonical integer encoding for its vertices, an
//! ordered neighbor function, and an exact distance-to-root function (unit
//! tests cross-check the distance formulas against ball BFS).

use std::str::FromStr;
use std::sync::Arc;

use super::{GraphError, GraphModel, SymmetryDecl, SymmetryKind, VertexRef};

/// The `d`-regular tree. Vertices are child-index paths from the root: the
/// root is `()`, its children `(0)..(d-1)`, and every other vertex has
/// `d - 1` children `0..d-2`.
pub fn regular_tree(d: usize) -> Result<GraphModel, GraphError> {
    if d < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "regular_tree requires d >= 2, got {d}"
        )));
    }
    let neighbor_fn = Arc::new(move |v: &VertexRef| {
        let p = v.payload();
        let mut out = Vec::with_capacity(d);
        let child_count = if p.is_empty() { d } else { d - 1 };
        if !p.is_empty() {
            out.push(VertexRef::new(p[..p.len() - 1].to_vec()));
        }
        for j in 0..child_count {
            let mut c = p.to_vec();
            c.push(j as i64);
            out.push(VertexRef::new(c));
        }
        out
    });
    Ok(GraphModel::new(
        format!("regular_tree(d={d})"),
        VertexRef::new(vec![]),
        neighbor_fn,
        Arc::new(|v: &VertexRef| v.payload().len() as u32),
        d,
        true,
        SymmetryDecl::transitive(None),
    ))
}

// Child counts for the pinched tree: the root has d children, its children
// with digits 0 and 1 have d - 2, every other vertex d - 1.
fn pinched_child_count(p: &[i64], d: usize) -> usize {
    match p.len() {
        0 => d,
        1 if p[0] <= 1 => d - 2,
        _ => d - 1,
    }
}

/// The counterexample tree: `d`-regular except for two vertices adjacent to
/// the root (digits 0 and 1) which have degree `d - 1`.
pub fn fig1_tree(d: usize) -> Result<GraphModel, GraphError> {
    if d < 3 {
        return Err(GraphError::InvalidParameter(format!(
            "fig1_tree requires d >= 3, got {d}"
        )));
    }
    let neighbor_fn = Arc::new(move |v: &VertexRef| {
        let p = v.payload();
        let mut out = Vec::with_capacity(d);
        if !p.is_empty() {
            out.push(VertexRef::new(p[..p.len() - 1].to_vec()));
        }
        for j in 0..pinched_child_count(p, d) {
            let mut c = p.to_vec();
            c.push(j as i64);
            out.push(VertexRef::new(c));
        }
        out
    });
    Ok(GraphModel::new(
        format!("fig1_tree(d={d})"),
        VertexRef::new(vec![]),
        neighbor_fn,
        Arc::new(|v: &VertexRef| v.payload().len() as u32),
        d,
        false,
        SymmetryDecl::none_declared(),
    ))
}

/// The counterexample graph: [`fig1_tree`] plus one extra edge joining the
/// two degree-`(d-1)` vertices `(0)` and `(1)`. The result is `d`-regular
/// with exactly one simple cycle, the triangle through the root.
pub fn fig1_graph(d: usize) -> Result<GraphModel, GraphError> {
    if d < 3 {
        return Err(GraphError::InvalidParameter(format!(
            "fig1_graph requires d >= 3, got {d}"
        )));
    }
    let neighbor_fn = Arc::new(move |v: &VertexRef| {
        let p = v.payload();
        let mut out = Vec::with_capacity(d);
        if !p.is_empty() {
            out.push(VertexRef::new(p[..p.len() - 1].to_vec()));
        }
        for j in 0..pinched_child_count(p, d) {
            let mut c = p.to_vec();
            c.push(j as i64);
            out.push(VertexRef::new(c));
        }
        if p == [0] {
            out.push(VertexRef::new(vec![1]));
        } else if p == [1] {
            out.push(VertexRef::new(vec![0]));
        }
        out
    });
    Ok(GraphModel::new(
        format!("fig1_graph(d={d})"),
        VertexRef::new(vec![]),
        neighbor_fn,
        // The extra edge joins two depth-1 vertices, so it never shortens a
        // path from the root: distance stays the path length.
        Arc::new(|v: &VertexRef| v.payload().len() as u32),
        d,
        true,
        SymmetryDecl::none_declared(),
    ))
}

/// The square lattice Z^2; vertices `(x,y)`.
pub fn square_lattice() -> GraphModel {
    let neighbor_fn = Arc::new(|v: &VertexRef| {
        let (x, y) = (v.payload()[0], v.payload()[1]);
        vec![
            VertexRef::new(vec![x - 1, y]),
            VertexRef::new(vec![x + 1, y]),
            VertexRef::new(vec![x, y - 1]),
            VertexRef::new(vec![x, y + 1]),
        ]
    });
    GraphModel::new(
        "square_lattice",
        VertexRef::new(vec![0, 0]),
        neighbor_fn,
        Arc::new(|v: &VertexRef| (v.payload()[0].unsigned_abs() + v.payload()[1].unsigned_abs()) as u32),
        4,
        true,
        SymmetryDecl::transitive(Some(4)),
    )
}

/// The hexagonal (honeycomb) lattice in brick-wall coordinates `(x,y)`:
/// every vertex has left and right neighbors, plus an up neighbor when
/// `x + y` is even and a down neighbor when odd.
pub fn hexagonal_lattice() -> GraphModel {
    let neighbor_fn = Arc::new(|v: &VertexRef| {
        let (x, y) = (v.payload()[0], v.payload()[1]);
        let vertical = if (x + y).rem_euclid(2) == 0 { y + 1 } else { y - 1 };
        vec![
            VertexRef::new(vec![x - 1, y]),
            VertexRef::new(vec![x + 1, y]),
            VertexRef::new(vec![x, vertical]),
        ]
    });
    GraphModel::new(
        "hexagonal_lattice",
        VertexRef::new(vec![0, 0]),
        neighbor_fn,
        Arc::new(|v: &VertexRef| hex_distance(v.payload()[0], v.payload()[1])),
        3,
        true,
        SymmetryDecl::transitive(Some(6)),
    )
}

// Distance from (0,0) in brick-wall coordinates. Vertical moves in the same
// direction need a parity flip between them, which forces extra horizontal
// steps: with v vertical moves the horizontal count h must satisfy
// h >= |x|, h = |x| (mod 2), and h >= v - 1 going up (v going down, since
// the first move from the even origin cannot go down).
fn hex_distance(x: i64, y: i64) -> u32 {
    let dx = x.unsigned_abs() as i64;
    let (v, min_sep) = if y >= 0 { (y, y - 1) } else { (-y, -y) };
    let mut h = dx.max(min_sep);
    if h % 2 != dx % 2 {
        h += 1;
    }
    (v + h) as u32
}

/// The ladder Z x K2; vertices `(x,s)` with rail `s` in `{0,1}`.
pub fn ladder() -> GraphModel {
    let neighbor_fn = Arc::new(|v: &VertexRef| {
        let (x, s) = (v.payload()[0], v.payload()[1]);
        vec![
            VertexRef::new(vec![x - 1, s]),
            VertexRef::new(vec![x + 1, s]),
            VertexRef::new(vec![x, 1 - s]),
        ]
    });
    GraphModel::new(
        "ladder",
        VertexRef::new(vec![0, 0]),
        neighbor_fn,
        Arc::new(|v: &VertexRef| (v.payload()[0].unsigned_abs() + v.payload()[1] as u64) as u32),
        3,
        true,
        SymmetryDecl::transitive(Some(4)),
    )
}

/// Tree of edge-disjoint triangles joined by bridge edges; every vertex lies
/// on exactly one triangle and one bridge, so the graph is 3-regular.
///
/// Encoding: a vertex is `(t_1..t_k, c)` where `t_1..t_k` is the path in the
/// tree of triangles (first digit 0..2, later digits 1..2) and `c` is the
/// corner, with corner 0 the entry corner of every non-root triangle.
pub fn triangle_cactus() -> GraphModel {
    let neighbor_fn = Arc::new(|v: &VertexRef| {
        let p = v.payload();
        let (tpath, c) = (&p[..p.len() - 1], p[p.len() - 1]);
        let mut out = Vec::with_capacity(3);
        for mate in 0..3i64 {
            if mate != c {
                let mut q = tpath.to_vec();
                q.push(mate);
                out.push(VertexRef::new(q));
            }
        }
        // Bridge edge. For corner 0 of a non-root triangle the bridge goes
        // back to the parent triangle, whose payload is exactly the triangle
        // path; otherwise it opens a child triangle.
        if c == 0 && !tpath.is_empty() {
            out.push(VertexRef::new(tpath.to_vec()));
        } else {
            let mut q = tpath.to_vec();
            q.push(c);
            q.push(0);
            out.push(VertexRef::new(q));
        }
        out
    });
    GraphModel::new(
        "triangle_cactus",
        VertexRef::new(vec![0]),
        neighbor_fn,
        Arc::new(|v: &VertexRef| {
            let p = v.payload();
            let (tpath, c) = (&p[..p.len() - 1], p[p.len() - 1]);
            if tpath.is_empty() {
                return (c != 0) as u32;
            }
            let first = if tpath[0] == 0 { 1 } else { 2 };
            first + 2 * (tpath.len() as u32 - 1) + (c != 0) as u32
        }),
        3,
        true,
        SymmetryDecl {
            kind: SymmetryKind::Transitive,
            cycle_bound: Some(3),
        },
    )
}

/// Every zoo instance with its default parameters (`d = 3` for the tree
/// families), for test sweeps and report suites.
pub fn zoo() -> Vec<GraphModel> {
    vec![
        regular_tree(3).unwrap(),
        fig1_tree(3).unwrap(),
        fig1_graph(3).unwrap(),
        square_lattice(),
        hexagonal_lattice(),
        ladder(),
        triangle_cactus(),
    ]
}

/// Structured-text graph selection: a family name plus parameters, e.g.
/// `family=fig1_graph,d=3`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphSpec {
    pub family: String,
    pub d: Option<usize>,
}

impl GraphSpec {
    pub fn new(family: impl Into<String>, d: Option<usize>) -> Self {
        GraphSpec {
            family: family.into(),
            d,
        }
    }

    pub fn build(&self) -> Result<GraphModel, GraphError> {
        let d = self.d.unwrap_or(3);
        match self.family.as_str() {
            "regular_tree" => regular_tree(d),
            "fig1_tree" => fig1_tree(d),
            "fig1_graph" => fig1_graph(d),
            "square_lattice" => Ok(square_lattice()),
            "hexagonal_lattice" => Ok(hexagonal_lattice()),
            "ladder" => Ok(ladder()),
            "triangle_cactus" => Ok(triangle_cactus()),
            other => Err(GraphError::InvalidParameter(format!(
                "unknown family '{other}'"
            ))),
        }
    }
}

impl FromStr for GraphSpec {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut family = None;
        let mut d = None;
        for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let (key, value) = part
                .split_once('=')
                .ok_or_else(|| GraphError::InvalidParameter(format!("expected key=value in '{part}'")))?;
            match key.trim() {
                "family" => family = Some(value.trim().to_string()),
                "d" => {
                    d = Some(value.trim().parse().map_err(|_| {
                        GraphError::InvalidParameter(format!("bad integer '{value}' for d"))
                    })?)
                }
                other => {
                    return Err(GraphError::InvalidParameter(format!(
                        "unknown key '{other}' in graph spec"
                    )))
                }
            }
        }
        Ok(GraphSpec {
            family: family
                .ok_or_else(|| GraphError::InvalidParameter("graph spec missing family".into()))?,
            d,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::ball;

    #[test]
    fn tree_level_sizes() {
        let g = regular_tree(3).unwrap();
        let b = ball(&g, 5).unwrap();
        let mut levels = vec![0usize; 6];
        for i in 0..b.vertex_count() as u32 {
            levels[b.distance(i) as usize] += 1;
        }
        assert_eq!(levels, vec![1, 3, 6, 12, 24, 48]); // 3 * 2^(n-1)
        let line = regular_tree(2).unwrap();
        let lb = ball(&line, 6).unwrap();
        for r in 1..=6u32 {
            assert_eq!(
                (0..lb.vertex_count() as u32).filter(|&i| lb.distance(i) == r).count(),
                2
            );
        }
    }

    #[test]
    fn fig1_tree_level_sizes_match_formula() {
        // |T_1| = d, |T_2| = (d-2)(d+1), |T_{2+n}| = (d-2)(d+1)(d-1)^n.
        for d in [3usize, 4, 5] {
            let g = fig1_tree(d).unwrap();
            let depth = if d == 3 { 8 } else { 6 };
            let b = ball(&g, depth).unwrap();
            let mut levels = vec![0usize; depth as usize + 1];
            for i in 0..b.vertex_count() as u32 {
                levels[b.distance(i) as usize] += 1;
            }
            assert_eq!(levels[0], 1);
            assert_eq!(levels[1], d);
            assert_eq!(levels[2], (d - 2) * (d + 1));
            for n in 0..=(depth as usize - 2) {
                assert_eq!(
                    levels[2 + n],
                    (d - 2) * (d + 1) * (d - 1).pow(n as u32),
                    "d={d} level {}",
                    2 + n
                );
            }
        }
    }

    #[test]
    fn fig1_graph_is_regular_with_one_short_cycle() {
        let g = fig1_graph(3).unwrap();
        let b = ball(&g, 4).unwrap();
        for i in b.interior() {
            assert_eq!(b.degree(i), 3, "vertex {}", b.vertex(i));
        }
        // The unique simple cycle is the triangle; exhaustive search over the
        // ball's edges finds exactly one independent cycle.
        let cycles = b.edge_count() as i64 - b.vertex_count() as i64 + 1;
        assert_eq!(cycles, 1);
    }

    #[test]
    fn parameter_validation() {
        assert!(regular_tree(1).is_err());
        assert!(fig1_tree(2).is_err());
        assert!(fig1_graph(2).is_err());
        assert!(regular_tree(2).is_ok());
    }

    #[test]
    fn cactus_structure() {
        let g = triangle_cactus();
        let b = ball(&g, 5).unwrap();
        for i in b.interior() {
            let v = b.vertex(i);
            let nbrs = g.neighbors(v);
            assert_eq!(nbrs.len(), 3);
            // Exactly two neighbors (the triangle mates) are adjacent to each
            // other; the bridge endpoint is adjacent to neither.
            let mut mate_pairs = 0;
            for a in 0..3 {
                for b2 in a + 1..3 {
                    if g.neighbors(&nbrs[a]).contains(&nbrs[b2]) {
                        mate_pairs += 1;
                    }
                }
            }
            assert_eq!(mate_pairs, 1, "vertex {v} should lie on exactly one triangle");
        }
    }

    #[test]
    fn graph_spec_parses_and_builds() {
        let spec: GraphSpec = "family=fig1_graph,d=3".parse().unwrap();
        assert_eq!(spec, GraphSpec::new("fig1_graph", Some(3)));
        assert_eq!(spec.build().unwrap().family(), "fig1_graph(d=3)");
        let spec: GraphSpec = "family=hexagonal_lattice".parse().unwrap();
        assert_eq!(spec.build().unwrap().family(), "hexagonal_lattice");
        assert!("d=3".parse::<GraphSpec>().is_err());
        assert!("family=unknown".parse::<GraphSpec>().unwrap().build().is_err());
    }
}
