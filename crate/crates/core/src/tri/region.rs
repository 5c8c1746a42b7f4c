//! Complementary regions of a sub-collection of edges.

use super::{EdgeId, Mode, Triangulation, UnionFind};
use crate::error::{Error, Result};

/// One complementary region, triangulated by the edges outside the cut set.
#[derive(Clone, Debug)]
pub struct Region {
    pub polygon: Triangulation,
    /// Original triangle of each region triangle.
    pub triangles: Vec<usize>,
    /// Original edge of each region edge. Two frontier edges may share an image.
    pub edge_map: Vec<EdgeId>,
}

impl Region {
    /// Original edges carried by the region frontier, in boundary order.
    pub fn frontier(&self) -> Result<Vec<EdgeId>> {
        Ok(self
            .polygon
            .boundary_cycle()?
            .into_iter()
            .map(|s| self.edge_map[self.polygon.edge_of(s).0])
            .collect())
    }

    /// Original edges of the region diagonals.
    pub fn diagonals(&self) -> Vec<EdgeId> {
        self.polygon
            .interior_edges()
            .map(|e| self.edge_map[e.0])
            .collect()
    }
}

impl Triangulation {
    /// Cuts along `cut` (plus the frontier in polygon mode) and returns the pieces.
    pub fn regions(&self, cut: &[EdgeId]) -> Result<Vec<Region>> {
        let mut in_cut = vec![false; self.edge_count()];
        for &e in cut {
            self.check_edge(e)?;
            in_cut[e.0] = true;
        }
        let t = self.triangle_count();
        let mut uf = UnionFind::new(t);
        for e in self.interior_edges().filter(|e| !in_cut[e.0]) {
            let (s, p) = self.sides_of(e);
            uf.union(s / 3, p.expect("interior") / 3);
        }
        let mut comps: Vec<Vec<usize>> = Vec::new();
        let mut comp_of = vec![usize::MAX; t];
        for k in 0..t {
            let r = uf.find(k);
            if comp_of[r] == usize::MAX {
                comp_of[r] = comps.len();
                comps.push(Vec::new());
            }
            comps[comp_of[r]].push(k);
        }
        let mut out = Vec::with_capacity(comps.len());
        for tris in comps {
            let mut local = vec![usize::MAX; t];
            for (i, &k) in tris.iter().enumerate() {
                local[k] = i;
            }
            let map = |s: usize| 3 * local[s / 3] + s % 3;
            let mut pairs = Vec::new();
            for &k in &tris {
                for s in 3 * k..3 * k + 3 {
                    if let Some(p) = self.partner(s) {
                        if s < p && !in_cut[self.edge_of(s).0] {
                            pairs.push((map(s), map(p)));
                        }
                    }
                }
            }
            let polygon = Triangulation::new(Mode::Polygon, tris.len(), &pairs)
                .map_err(|e| Error::RegionNotDisk(format!("region of triangles {tris:?}: {e}")))?;
            let edge_map = polygon
                .edges()
                .map(|e| {
                    let s = polygon.key(e);
                    self.edge_of(3 * tris[s / 3] + s % 3)
                })
                .collect();
            out.push(Region {
                polygon,
                triangles: tris,
                edge_map,
            });
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::super::surfaces::*;
    use super::*;

    #[test]
    fn cutting_everything_gives_triangles() {
        let t = genus_two_one_puncture();
        let all: Vec<_> = t.edges().collect();
        let rs = t.regions(&all).unwrap();
        assert_eq!(rs.len(), t.triangle_count());
        assert!(rs.iter().all(|r| r.polygon.triangle_count() == 1));
    }

    #[test]
    fn pentagon_frontier_gives_one_region() {
        let p = pentagon_be_ce();
        let rs = p.tri.regions(&[]).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].diagonals().len(), 2);
        assert_eq!(rs[0].frontier().unwrap().len(), 5);
    }

    #[test]
    fn torus_single_edge_is_not_a_disk() {
        let t = once_punctured_torus();
        assert!(matches!(
            t.regions(&[EdgeId(0)]),
            Err(Error::RegionNotDisk(_))
        ));
    }

    #[test]
    fn torus_two_edges_leave_a_square() {
        let t = once_punctured_torus();
        let rs = t.regions(&[EdgeId(0), EdgeId(1)]).unwrap();
        assert_eq!(rs.len(), 1);
        let f = rs[0].frontier().unwrap();
        assert_eq!(f.len(), 4);
        assert_eq!(f.iter().filter(|&&e| e == EdgeId(0)).count(), 2);
        assert_eq!(rs[0].diagonals(), vec![EdgeId(2)]);
    }
}
