//! Combinatorial ideal triangulations.
//!
//! A triangulation with `T` triangles has sides `0..3T`; triangle `k` owns the
//! sides `3k, 3k+1, 3k+2` in counter-clockwise order. Side `s` runs from the
//! corner `s` (its tail) to the corner `next(s)` (its head). An involution on
//! sides glues them in pairs. In closed mode every side is glued and the result
//! is a punctured surface; in polygon mode the unglued sides form the frontier
//! of an ideal polygon.
//!
//! Edges carry dense ids `0..E`. A freshly validated triangulation numbers its
//! edges in increasing order of their smallest side index; the ids then stay
//! attached to the edges through flips (the new diagonal takes the id of the
//! flipped edge), so edge data transports by replacing a single value.

mod canonical;
mod polygon;
mod region;
pub mod surfaces;

pub use canonical::CanonicalCertificate;
pub use polygon::{
    catalan, enumerate_polygon_triangulations, enumerate_polygon_triangulations_bounded,
    PolygonTriangulation, DEFAULT_POLYGON_BOUND,
};
pub use region::Region;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether the triangulation describes a closed punctured surface or a polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Closed,
    Polygon,
}

/// Dense edge identifier, stable across flips.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeId(pub usize);

impl EdgeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl std::fmt::Display for EdgeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Counter-clockwise successor of a side within its triangle.
#[inline]
pub fn next_side(s: usize) -> usize {
    s - s % 3 + (s % 3 + 1) % 3
}

/// Counter-clockwise predecessor of a side within its triangle.
#[inline]
pub fn prev_side(s: usize) -> usize {
    s - s % 3 + (s % 3 + 2) % 3
}

#[inline]
pub fn triangle_of(s: usize) -> usize {
    s / 3
}

/// The five edges around an interior edge `e`.
///
/// `side1` is the smaller side of `e`; its triangle reads `(e, a, b)` counter-clockwise
/// and the triangle of `side2` reads `(e, c, d)`. The quadrilateral boundary reads
/// `a, b, c, d`, so `(a, c)` and `(b, d)` are the opposite pairs. Coincident edges
/// are kept: `sides` records the side through which each of `a, b, c, d` is seen.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadNeighborhood {
    pub e: EdgeId,
    pub side1: usize,
    pub side2: usize,
    /// Sides carrying `a, b, c, d`.
    pub sides: [usize; 4],
    /// Edges `a, b, c, d`.
    pub edges: [EdgeId; 4],
}

impl QuadNeighborhood {
    pub fn a(&self) -> EdgeId {
        self.edges[0]
    }
    pub fn b(&self) -> EdgeId {
        self.edges[1]
    }
    pub fn c(&self) -> EdgeId {
        self.edges[2]
    }
    pub fn d(&self) -> EdgeId {
        self.edges[3]
    }

    /// Reads `(a, b, c, d, e)` from per-edge data.
    pub fn values<'a, T>(&self, data: &'a [T]) -> [&'a T; 5] {
        [
            &data[self.edges[0].0],
            &data[self.edges[1].0],
            &data[self.edges[2].0],
            &data[self.edges[3].0],
            &data[self.e.0],
        ]
    }
}

/// A validated ideal triangulation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Triangulation {
    mode: Mode,
    gluing: Vec<Option<usize>>,
    side_edge: Vec<EdgeId>,
    /// Smallest side of each edge and its partner (none for frontier edges).
    edge_sides: Vec<(usize, Option<usize>)>,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind((0..n).collect())
    }
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

impl Triangulation {
    /// Validates raw gluing data.
    ///
    /// `pairs` lists glued side pairs; a pair may be given in either or both
    /// directions. Sides not mentioned are frontier sides (polygon mode only).
    pub fn new(mode: Mode, triangle_count: usize, pairs: &[(usize, usize)]) -> Result<Self> {
        let invalid = |msg: String| Err(Error::InvalidTriangulation(msg));
        if triangle_count == 0 {
            return invalid("no triangles".into());
        }
        let n = 3 * triangle_count;
        let mut gluing: Vec<Option<usize>> = vec![None; n];
        for &(s, t) in pairs {
            if s >= n || t >= n {
                return invalid(format!("side index out of range in pair ({s}, {t})"));
            }
            if s == t {
                return invalid(format!("side {s} glued to itself"));
            }
            for (x, y) in [(s, t), (t, s)] {
                match gluing[x] {
                    None => gluing[x] = Some(y),
                    Some(z) if z == y => {}
                    Some(z) => {
                        return invalid(format!("side {x} glued to both {z} and {y}"));
                    }
                }
            }
        }
        if mode == Mode::Closed {
            if let Some(s) = gluing.iter().position(Option::is_none) {
                return invalid(format!("side {s} is unglued in closed mode"));
            }
        }
        let tri = Self::from_gluing_unchecked(mode, gluing);
        tri.check()?;
        Ok(tri)
    }

    pub(crate) fn from_gluing_unchecked(mode: Mode, gluing: Vec<Option<usize>>) -> Self {
        let mut side_edge = vec![EdgeId(usize::MAX); gluing.len()];
        let mut edge_sides = Vec::new();
        for s in 0..gluing.len() {
            match gluing[s] {
                Some(p) if p < s => {}
                other => {
                    let id = EdgeId(edge_sides.len());
                    side_edge[s] = id;
                    if let Some(p) = other {
                        side_edge[p] = id;
                    }
                    edge_sides.push((s, other));
                }
            }
        }
        Triangulation {
            mode,
            gluing,
            side_edge,
            edge_sides,
        }
    }

    fn check(&self) -> Result<()> {
        let invalid = |msg: String| Err(Error::InvalidTriangulation(msg));
        let t = self.triangle_count();
        let mut uf = UnionFind::new(t);
        for s in 0..self.side_count() {
            if let Some(p) = self.gluing[s] {
                uf.union(triangle_of(s), triangle_of(p));
            }
        }
        if (0..t).any(|k| uf.find(k) != 0) {
            return invalid("surface is disconnected".into());
        }
        match self.mode {
            Mode::Closed => {
                let chi = self.vertex_count() as i64 - self.edge_count() as i64 + t as i64;
                if chi > 2 || chi % 2 != 0 {
                    return invalid(format!("impossible Euler characteristic {chi}"));
                }
                let punctured = chi - self.vertex_count() as i64;
                if punctured >= 0 {
                    return invalid(format!(
                        "punctured surface has non-negative Euler characteristic {punctured}"
                    ));
                }
            }
            Mode::Polygon => {
                let frontier = self.gluing.iter().filter(|g| g.is_none()).count();
                if frontier < 3 {
                    return invalid(format!("polygon has {frontier} frontier sides"));
                }
                if self.interior_vertex_count() > 0 {
                    return invalid("polygon has an interior vertex".into());
                }
                if t + 2 != frontier {
                    return invalid(format!(
                        "region with {t} triangles and {frontier} frontier sides is not a disk"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn triangle_count(&self) -> usize {
        self.gluing.len() / 3
    }

    pub fn side_count(&self) -> usize {
        self.gluing.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_sides.len()
    }

    pub fn edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edge_count()).map(EdgeId)
    }

    /// Partner of a side under the gluing, if glued.
    pub fn partner(&self, s: usize) -> Option<usize> {
        self.gluing[s]
    }

    pub fn edge_of(&self, s: usize) -> EdgeId {
        self.side_edge[s]
    }

    pub fn side_edges(&self) -> &[EdgeId] {
        &self.side_edge
    }

    /// Sides of an edge: the smaller side first.
    pub fn sides_of(&self, e: EdgeId) -> (usize, Option<usize>) {
        self.edge_sides[e.0]
    }

    /// External name of an edge: its smallest side index.
    pub fn key(&self, e: EdgeId) -> usize {
        self.edge_sides[e.0].0
    }

    pub fn edge_by_key(&self, key: usize) -> Result<EdgeId> {
        if key < self.side_count() {
            let e = self.side_edge[key];
            if self.key(e) == key {
                return Ok(e);
            }
        }
        Err(Error::UnknownEdge(key))
    }

    pub fn check_edge(&self, e: EdgeId) -> Result<()> {
        if e.0 < self.edge_count() {
            Ok(())
        } else {
            Err(Error::UnknownEdge(e.0))
        }
    }

    pub fn is_frontier(&self, e: EdgeId) -> bool {
        self.edge_sides[e.0].1.is_none()
    }

    pub fn interior_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().filter(|&e| !self.is_frontier(e))
    }

    pub fn frontier_edges(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges().filter(|&e| self.is_frontier(e))
    }

    /// Edges of triangle `t` in counter-clockwise order.
    pub fn triangle_edges(&self, t: usize) -> [EdgeId; 3] {
        [
            self.side_edge[3 * t],
            self.side_edge[3 * t + 1],
            self.side_edge[3 * t + 2],
        ]
    }

    /// Vertex class of every corner (corner `s` is the tail of side `s`).
    pub fn corner_vertices(&self) -> Vec<usize> {
        let n = self.side_count();
        let mut uf = UnionFind::new(n);
        for s in 0..n {
            if let Some(p) = self.gluing[s] {
                uf.union(s, next_side(p));
            }
        }
        let mut label = vec![usize::MAX; n];
        let mut out = vec![0; n];
        let mut count = 0;
        for (s, slot) in out.iter_mut().enumerate() {
            let r = uf.find(s);
            if label[r] == usize::MAX {
                label[r] = count;
                count += 1;
            }
            *slot = label[r];
        }
        out
    }

    pub fn vertex_count(&self) -> usize {
        self.corner_vertices()
            .into_iter()
            .max()
            .map_or(0, |m| m + 1)
    }

    fn interior_vertex_count(&self) -> usize {
        let cv = self.corner_vertices();
        let v = cv.iter().max().map_or(0, |m| m + 1);
        let mut on_frontier = vec![false; v];
        for s in 0..self.side_count() {
            if self.gluing[s].is_none() {
                on_frontier[cv[s]] = true;
                on_frontier[cv[next_side(s)]] = true;
            }
        }
        on_frontier.iter().filter(|b| !**b).count()
    }

    /// Genus of the surface (closed mode) or 0 for polygons.
    pub fn genus(&self) -> usize {
        match self.mode {
            Mode::Polygon => 0,
            Mode::Closed => {
                let chi = self.vertex_count() as i64 - self.edge_count() as i64
                    + self.triangle_count() as i64;
                ((2 - chi) / 2) as usize
            }
        }
    }

    /// Number of punctures (closed mode) or polygon vertices.
    pub fn puncture_count(&self) -> usize {
        self.vertex_count()
    }

    pub fn is_flippable(&self, e: EdgeId) -> bool {
        match self.edge_sides.get(e.0) {
            Some(&(s, Some(p))) => triangle_of(s) != triangle_of(p),
            _ => false,
        }
    }

    /// Labels the edges around an interior edge.
    pub fn quad(&self, e: EdgeId) -> Result<QuadNeighborhood> {
        self.check_edge(e)?;
        let (s1, p) = self.edge_sides[e.0];
        let s2 = p.ok_or(Error::FrontierEdge(self.key(e)))?;
        if triangle_of(s1) == triangle_of(s2) {
            return Err(Error::NotFlippable(self.key(e)));
        }
        let sides = [next_side(s1), prev_side(s1), next_side(s2), prev_side(s2)];
        Ok(QuadNeighborhood {
            e,
            side1: s1,
            side2: s2,
            sides,
            edges: sides.map(|s| self.side_edge[s]),
        })
    }

    /// Flips an interior edge.
    ///
    /// Returns the new triangulation and the side relabelling (old side index to
    /// new side index). The new diagonal keeps the sides and the id of `e`; the
    /// triangles become `(f, b, c)` and `(f, d, a)`.
    pub fn flip(&self, e: EdgeId) -> Result<(Triangulation, Vec<usize>)> {
        let q = self.quad(e)?;
        let (s1, s2) = (q.side1, q.side2);
        let n = self.side_count();
        let mut perm: Vec<usize> = (0..n).collect();
        perm[next_side(s1)] = prev_side(s2); // a
        perm[prev_side(s1)] = next_side(s1); // b
        perm[next_side(s2)] = prev_side(s1); // c
        perm[prev_side(s2)] = next_side(s2); // d
        let mut gluing = vec![None; n];
        let mut side_edge = vec![EdgeId(0); n];
        for x in 0..n {
            gluing[perm[x]] = self.gluing[x].map(|y| perm[y]);
            side_edge[perm[x]] = self.side_edge[x];
        }
        let tri = Self::with_labels(self.mode, gluing, side_edge);
        Ok((tri, perm))
    }

    /// Builds a triangulation from gluing and per-side edge labels.
    fn with_labels(mode: Mode, gluing: Vec<Option<usize>>, side_edge: Vec<EdgeId>) -> Self {
        let e = side_edge.iter().map(|x| x.0 + 1).max().unwrap_or(0);
        let mut edge_sides = vec![(usize::MAX, None); e];
        for s in 0..gluing.len() {
            let slot = &mut edge_sides[side_edge[s].0];
            if s < slot.0 {
                *slot = (s, gluing[s]);
            }
        }
        Triangulation {
            mode,
            gluing,
            side_edge,
            edge_sides,
        }
    }

    /// Renumbers triangles and rotates them, keeping edge ids.
    ///
    /// Triangle `k` becomes triangle `order[k]`, with its side `3k + j` moved to
    /// position `(j + shift[k]) % 3`. Returns the isomorphic triangulation and the
    /// side map.
    pub fn relabel(&self, order: &[usize], shift: &[usize]) -> Result<(Triangulation, Vec<usize>)> {
        let t = self.triangle_count();
        let mut seen = vec![false; t];
        if order.len() != t || shift.len() != t {
            return Err(Error::Precondition("relabelling has wrong length".into()));
        }
        for &o in order {
            if o >= t || std::mem::replace(&mut seen[o], true) {
                return Err(Error::Precondition(
                    "relabelling is not a permutation".into(),
                ));
            }
        }
        let perm: Vec<usize> = (0..3 * t)
            .map(|s| 3 * order[s / 3] + (s % 3 + shift[s / 3]) % 3)
            .collect();
        let n = 3 * t;
        let mut gluing = vec![None; n];
        let mut side_edge = vec![EdgeId(0); n];
        for x in 0..n {
            gluing[perm[x]] = self.gluing[x].map(|y| perm[y]);
            side_edge[perm[x]] = self.side_edge[x];
        }
        Ok((Self::with_labels(self.mode, gluing, side_edge), perm))
    }

    /// Glued pairs `(s, σ(s))` with `s < σ(s)`.
    pub fn gluing_pairs(&self) -> Vec<(usize, usize)> {
        (0..self.side_count())
            .filter_map(|s| self.gluing[s].filter(|&p| p > s).map(|p| (s, p)))
            .collect()
    }

    /// Builds a triangulation from triangles given as counter-clockwise vertex
    /// triples, gluing sides that traverse the same vertex pair in opposite
    /// directions. Also returns each edge's endpoints `(tail, head)` as read on
    /// its smallest side.
    pub fn from_vertex_triangles(
        mode: Mode,
        triangles: &[[usize; 3]],
    ) -> Result<(Triangulation, Vec<(usize, usize)>)> {
        use std::collections::HashMap;
        let mut directed: HashMap<(usize, usize), usize> = HashMap::new();
        for (k, t) in triangles.iter().enumerate() {
            for j in 0..3 {
                let key = (t[j], t[(j + 1) % 3]);
                if directed.insert(key, 3 * k + j).is_some() {
                    return Err(Error::InvalidTriangulation(format!(
                        "directed side {key:?} occurs twice"
                    )));
                }
            }
        }
        let mut pairs = Vec::new();
        for (&(u, v), &s) in &directed {
            if let Some(&p) = directed.get(&(v, u)) {
                if s < p {
                    pairs.push((s, p));
                }
            }
        }
        pairs.sort_unstable();
        let tri = Triangulation::new(mode, triangles.len(), &pairs)?;
        let ends = tri
            .edges()
            .map(|e| {
                let s = tri.key(e);
                let t = &triangles[s / 3];
                (t[s % 3], t[(s % 3 + 1) % 3])
            })
            .collect();
        Ok((tri, ends))
    }

    /// Raw form of the current gluing, as accepted by [`Triangulation::new`].
    pub fn normalized(&self) -> Triangulation {
        Self::from_gluing_unchecked(self.mode, self.gluing.clone())
    }

    /// Map from this triangulation's edge ids to the ids used by [`Triangulation::normalized`].
    pub fn normalized_edge_map(&self) -> Vec<EdgeId> {
        let norm = self.normalized();
        self.edges().map(|e| norm.edge_of(self.key(e))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::surfaces::*;
    use super::*;

    #[test]
    fn torus_is_valid_with_one_puncture() {
        let t = once_punctured_torus();
        assert_eq!(t.triangle_count(), 2);
        assert_eq!(t.edge_count(), 3);
        assert_eq!(t.vertex_count(), 1);
        assert_eq!(t.genus(), 1);
    }

    #[test]
    fn pentagon_counts() {
        let p = pentagon_be_ce();
        assert_eq!(p.tri.mode(), Mode::Polygon);
        assert_eq!(p.tri.triangle_count(), 3);
        assert_eq!(p.tri.interior_edges().count(), 2);
        assert_eq!(p.tri.frontier_edges().count(), 5);
    }

    #[test]
    fn invalid_inputs_rejected() {
        // one triangle, closed: at least one side is left over
        assert!(Triangulation::new(Mode::Closed, 1, &[(0, 1)]).is_err());
        assert!(Triangulation::new(Mode::Closed, 1, &[(0, 0)]).is_err());
        // disconnected: two separate tori
        let pairs = [(0, 3), (1, 4), (2, 5), (6, 9), (7, 10), (8, 11)];
        assert!(matches!(
            Triangulation::new(Mode::Closed, 4, &pairs),
            Err(Error::InvalidTriangulation(_))
        ));
        // the doubled triangle is the thrice-punctured sphere
        let sphere3 = Triangulation::new(Mode::Closed, 2, &[(0, 5), (1, 4), (2, 3)]).unwrap();
        assert_eq!(sphere3.vertex_count(), 3);
        assert_eq!(sphere3.genus(), 0);
        // conflicting pairs
        assert!(Triangulation::new(Mode::Closed, 2, &[(0, 3), (0, 4)]).is_err());
        // polygon with a glued annulus
        assert!(Triangulation::new(Mode::Polygon, 2, &[(0, 3), (1, 5)]).is_err());
    }

    #[test]
    fn torus_quad_has_coincident_edges() {
        let t = once_punctured_torus();
        for e in t.edges() {
            let q = t.quad(e).unwrap();
            let mut counts = std::collections::HashMap::new();
            for x in q.edges {
                *counts.entry(x).or_insert(0) += 1;
            }
            assert_eq!(counts.len(), 2);
            assert!(counts.values().all(|&c| c == 2));
            assert!(!q.edges.contains(&e));
        }
    }

    #[test]
    fn pentagon_quad_pairs_opposites() {
        let p = pentagon_be_ce();
        let q = p.tri.quad(p.edge("BE").unwrap()).unwrap();
        let names = q.edges.iter().map(|&x| p.name(x)).collect::<Vec<String>>();
        // quad ABCE: boundary reads EA, AB, BC, CE (rotated); AB opposite CE, BC opposite EA
        let pos = |n: &str| names.iter().position(|m| m == n).unwrap();
        assert_eq!((pos("AB") + 2) % 4, pos("CE"));
        assert_eq!((pos("BC") + 2) % 4, pos("EA"));
        assert!(matches!(
            p.tri.quad(p.edge("AB").unwrap()),
            Err(Error::FrontierEdge(_))
        ));
    }

    #[test]
    fn pentagon_flip_be_gives_ac() {
        let p = pentagon_be_ce();
        let (flipped, _) = p.tri.flip(p.edge("BE").unwrap()).unwrap();
        let target = pentagon_named(&[[0, 1, 2], [0, 2, 4], [2, 3, 4]]);
        assert_eq!(flipped.certificate(), target.tri.certificate());
    }

    #[test]
    fn flip_twice_is_identity() {
        for tri in [
            once_punctured_torus(),
            genus_two_one_puncture(),
            four_punctured_sphere(),
        ] {
            for e in tri.edges().filter(|&e| tri.is_flippable(e)) {
                let (f1, _) = tri.flip(e).unwrap();
                let (f2, _) = f1.flip(e).unwrap();
                assert_eq!(f2.certificate(), tri.certificate());
            }
        }
    }

    #[test]
    fn pentagon_relation_five_flips() {
        let p = pentagon_be_ce();
        let (be, ce) = (p.edge("BE").unwrap(), p.edge("CE").unwrap());
        // frontier edges are never flipped, so their ids pin the polygon's labelling
        let labels = |t: &Triangulation| -> Vec<usize> {
            t.edges()
                .map(|e| if t.is_frontier(e) { e.0 } else { usize::MAX })
                .collect()
        };
        let start = p.tri.certificate_with(&labels(&p.tri));
        let mut t = p.tri.clone();
        for k in 0..5 {
            t = t.flip(if k % 2 == 0 { be } else { ce }).unwrap().0;
            let cert = t.certificate_with(&labels(&t));
            assert_eq!(cert == start, k == 4, "after {} flips", k + 1);
        }
    }

    #[test]
    fn euler_relation_holds() {
        for (g, s) in [(1, 1), (0, 4), (2, 1), (1, 3), (2, 4)] {
            let t = standard_surface(g, s).unwrap();
            assert_eq!(t.genus(), g);
            assert_eq!(t.puncture_count(), s);
            let chi = t.vertex_count() as i64 - t.edge_count() as i64 + t.triangle_count() as i64;
            assert_eq!(chi, 2 - 2 * g as i64);
        }
    }

    #[test]
    fn edge_keys_round_trip() {
        let t = genus_two_one_puncture();
        for e in t.edges() {
            assert_eq!(t.edge_by_key(t.key(e)).unwrap(), e);
        }
        let (f, _) = t.flip(EdgeId(3)).unwrap();
        for e in f.edges() {
            assert_eq!(f.edge_by_key(f.key(e)).unwrap(), e);
        }
    }
}
