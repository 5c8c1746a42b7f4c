//! Ideal polygons: enumeration of triangulations and frontier bookkeeping.

use super::{next_side, EdgeId, Mode, Triangulation};
use crate::error::{Error, Result};

/// Largest polygon accepted by [`enumerate_polygon_triangulations`] by default.
pub const DEFAULT_POLYGON_BOUND: usize = 12;

/// A triangulation of the convex `n`-gon with vertices `0..n` in counter-clockwise
/// order, remembering the chord carried by each edge.
#[derive(Clone, Debug)]
pub struct PolygonTriangulation {
    pub n: usize,
    pub tri: Triangulation,
    /// Endpoints `(i, j)` with `i < j` of every edge, indexed by edge id.
    pub chords: Vec<(usize, usize)>,
}

impl PolygonTriangulation {
    /// Builds the triangulation with the given counter-clockwise triangles.
    pub fn from_triangles(n: usize, triangles: &[[usize; 3]]) -> Result<Self> {
        if triangles.iter().flatten().any(|&v| v >= n) {
            return Err(Error::InvalidTriangulation("vertex out of range".into()));
        }
        let (tri, ends) = Triangulation::from_vertex_triangles(Mode::Polygon, triangles)?;
        let chords = ends
            .into_iter()
            .map(|(u, v)| (u.min(v), u.max(v)))
            .collect();
        Ok(PolygonTriangulation { n, tri, chords })
    }

    pub fn edge_of_chord(&self, i: usize, j: usize) -> Option<EdgeId> {
        let key = (i.min(j), i.max(j));
        self.chords.iter().position(|&c| c == key).map(EdgeId)
    }

    /// Diagonals of the triangulation as sorted chords.
    pub fn diagonals(&self) -> Vec<(usize, usize)> {
        let mut d: Vec<_> = self
            .tri
            .interior_edges()
            .map(|e| self.chords[e.0])
            .collect();
        d.sort_unstable();
        d
    }

    /// Looks an edge up by vertex letters, e.g. `"BE"` for the chord `(1, 4)`.
    pub fn edge(&self, name: &str) -> Option<EdgeId> {
        let v: Vec<usize> = name.bytes().map(|b| (b - b'A') as usize).collect();
        match v[..] {
            [i, j] => self.edge_of_chord(i, j),
            _ => None,
        }
    }

    /// Vertex letters of an edge, in increasing vertex order (except `EA`-style
    /// frontier sides, which follow the boundary).
    pub fn name(&self, e: EdgeId) -> String {
        let (i, j) = self.chords[e.0];
        let letter = |v: usize| (b'A' + v as u8) as char;
        if i == 0 && j == self.n - 1 {
            format!("{}{}", letter(j), letter(i))
        } else {
            format!("{}{}", letter(i), letter(j))
        }
    }

    /// Applies a flip, updating the chord bookkeeping.
    pub fn flip(&self, e: EdgeId) -> Result<PolygonTriangulation> {
        let q = self.tri.quad(e)?;
        let (tri, _) = self.tri.flip(e)?;
        let mut chords = self.chords.clone();
        // the new diagonal joins the two quad corners not on e
        let (i, j) = self.chords[e.0];
        let mut corners: Vec<usize> = q
            .edges
            .iter()
            .flat_map(|x| [self.chords[x.0].0, self.chords[x.0].1])
            .filter(|&v| v != i && v != j)
            .collect();
        corners.sort_unstable();
        corners.dedup();
        if corners.len() != 2 {
            return Err(Error::Internal("quad corners not found".into()));
        }
        chords[e.0] = (corners[0], corners[1]);
        Ok(PolygonTriangulation {
            n: self.n,
            tri,
            chords,
        })
    }
}

/// Catalan number `C(k)`.
pub fn catalan(k: usize) -> u128 {
    let mut c: u128 = 1;
    for i in 0..k as u128 {
        c = c * 2 * (2 * i + 1) / (i + 2);
    }
    c
}

/// All triangulations of the convex `n`-gon, up to the configured bound.
pub fn enumerate_polygon_triangulations(n: usize) -> Result<Vec<PolygonTriangulation>> {
    enumerate_polygon_triangulations_bounded(n, DEFAULT_POLYGON_BOUND)
}

pub fn enumerate_polygon_triangulations_bounded(
    n: usize,
    bound: usize,
) -> Result<Vec<PolygonTriangulation>> {
    if n < 3 {
        return Err(Error::Precondition(format!(
            "polygon needs 3 sides, got {n}"
        )));
    }
    if n > bound {
        return Err(Error::BoundExceeded(format!(
            "{n}-gon exceeds bound {bound}"
        )));
    }
    triangle_sets(0, n - 1)
        .into_iter()
        .map(|ts| PolygonTriangulation::from_triangles(n, &ts))
        .collect()
}

/// Triangle sets of the sub-polygon `i..=j` (vertices in order), all counter-clockwise.
fn triangle_sets(i: usize, j: usize) -> Vec<Vec<[usize; 3]>> {
    if j < i + 2 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for k in i + 1..j {
        let left = triangle_sets(i, k);
        let right = triangle_sets(k, j);
        for l in &left {
            for r in &right {
                let mut ts = vec![[i, k, j]];
                ts.extend_from_slice(l);
                ts.extend_from_slice(r);
                out.push(ts);
            }
        }
    }
    out
}

impl Triangulation {
    /// Frontier sides of a polygon in counter-clockwise boundary order, starting
    /// with the smallest frontier side.
    pub fn boundary_cycle(&self) -> Result<Vec<usize>> {
        if self.mode != Mode::Polygon {
            return Err(Error::Precondition("boundary of a closed surface".into()));
        }
        let cv = self.corner_vertices();
        let frontier: Vec<usize> = (0..self.side_count())
            .filter(|&s| self.gluing[s].is_none())
            .collect();
        let mut out_of = vec![usize::MAX; cv.iter().max().map_or(0, |m| m + 1)];
        for &s in &frontier {
            out_of[cv[s]] = s;
        }
        let mut cycle = Vec::with_capacity(frontier.len());
        let mut s = frontier[0];
        loop {
            cycle.push(s);
            s = out_of[cv[next_side(s)]];
            if s == usize::MAX {
                return Err(Error::Internal("broken frontier".into()));
            }
            if s == frontier[0] || cycle.len() > frontier.len() {
                break;
            }
        }
        if cycle.len() != frontier.len() {
            return Err(Error::RegionNotDisk(
                "frontier is not a single cycle".into(),
            ));
        }
        Ok(cycle)
    }

    /// Endpoints of every diagonal as positions `(i, j)`, `i < j`, along the
    /// boundary cycle, where frontier side `k` of the cycle runs from position
    /// `k` to `k + 1`. The diagonal separates sides `i..j` from the rest.
    pub fn diagonal_endpoints(&self) -> Result<Vec<(EdgeId, usize, usize)>> {
        let cycle = self.boundary_cycle()?;
        let cv = self.corner_vertices();
        let mut pos = vec![usize::MAX; cv.iter().max().map_or(0, |m| m + 1)];
        for (i, &s) in cycle.iter().enumerate() {
            pos[cv[s]] = i;
        }
        Ok(self
            .interior_edges()
            .map(|e| {
                let s = self.key(e);
                let (u, v) = (pos[cv[s]], pos[cv[next_side(s)]]);
                (e, u.min(v), u.max(v))
            })
            .collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalan_counts() {
        for (n, c) in [(3, 1), (4, 2), (5, 5), (6, 14), (7, 42), (8, 132)] {
            let all = enumerate_polygon_triangulations(n).unwrap();
            assert_eq!(all.len(), c);
            assert_eq!(catalan(n - 2), c as u128);
            let mut certs: Vec<_> = all.iter().map(|p| p.diagonals()).collect();
            certs.sort();
            certs.dedup();
            assert_eq!(certs.len(), c, "duplicates for n = {n}");
        }
    }

    #[test]
    fn bound_is_enforced() {
        assert!(matches!(
            enumerate_polygon_triangulations(13),
            Err(Error::BoundExceeded(_))
        ));
        assert!(enumerate_polygon_triangulations(2).is_err());
    }

    #[test]
    fn enumeration_closed_under_flip() {
        let all = enumerate_polygon_triangulations(6).unwrap();
        let set: std::collections::BTreeSet<_> = all.iter().map(|p| p.diagonals()).collect();
        for p in &all {
            for e in p.tri.interior_edges() {
                assert!(p.tri.is_flippable(e));
                let f = p.flip(e).unwrap();
                assert!(set.contains(&f.diagonals()));
                assert_ne!(f.diagonals(), p.diagonals());
            }
        }
    }

    #[test]
    fn boundary_cycle_follows_polygon() {
        let all = enumerate_polygon_triangulations(7).unwrap();
        for p in &all {
            let cyc = p.tri.boundary_cycle().unwrap();
            assert_eq!(cyc.len(), 7);
            let chords: Vec<_> = cyc.iter().map(|&s| p.chords[p.tri.edge_of(s).0]).collect();
            // consecutive frontier chords share a vertex and go around once
            let start = chords.iter().position(|&c| c == (0, 1)).unwrap();
            for k in 0..7 {
                let (i, j) = chords[(start + k) % 7];
                let expect = (k.min((k + 1) % 7), k.max((k + 1) % 7));
                assert_eq!((i, j), expect);
            }
        }
    }
}
