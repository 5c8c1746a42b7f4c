//! Standard triangulations used as fixtures and test beds.

use super::{Mode, PolygonTriangulation, Triangulation};
use crate::error::{Error, Result};

/// Mutable gluing table used while assembling a surface.
struct Builder {
    gluing: Vec<Option<usize>>,
}

impl Builder {
    fn glue(&mut self, s: usize, t: usize) {
        self.gluing[s] = Some(t);
        self.gluing[t] = Some(s);
    }

    /// Stars triangle `t` from a new puncture in its interior.
    fn split(&mut self, t: usize) {
        let u = self.gluing.len() / 3;
        let w = u + 1;
        self.gluing.extend(std::iter::repeat_n(None, 6));
        let old = [
            self.gluing[3 * t],
            self.gluing[3 * t + 1],
            self.gluing[3 * t + 2],
        ];
        let moved = [3 * t, 3 * u, 3 * w];
        let remap = |p: usize| if p / 3 == t { moved[p % 3] } else { p };
        for (k, p) in old.into_iter().enumerate() {
            if let Some(p) = p {
                self.glue(moved[k], remap(p));
            }
        }
        // spokes: side 1 runs from the corner towards the centre, side 2 back out
        self.glue(3 * t + 1, 3 * u + 2);
        self.glue(3 * u + 1, 3 * w + 2);
        self.glue(3 * w + 1, 3 * t + 2);
    }

    fn finish(self) -> Result<Triangulation> {
        let pairs: Vec<_> = self
            .gluing
            .iter()
            .enumerate()
            .filter_map(|(s, p)| p.map(|p| (s, p)))
            .collect();
        Triangulation::new(Mode::Closed, self.gluing.len() / 3, &pairs)
    }
}

/// A triangulation of the genus `g` surface with `s` punctures.
///
/// Genus zero starts from the doubled triangle; positive genus from the fan
/// triangulation of the `4g`-gon with the usual commutator gluing. Extra
/// punctures are added by starring triangles.
pub fn standard_surface(g: usize, s: usize) -> Result<Triangulation> {
    let (mut b, base) = match g {
        0 if s < 3 => {
            return Err(Error::Precondition(format!(
                "sphere needs at least 3 punctures, got {s}"
            )))
        }
        0 => {
            let mut b = Builder {
                gluing: vec![None; 6],
            };
            b.glue(0, 5);
            b.glue(1, 4);
            b.glue(2, 3);
            (b, 3)
        }
        _ if s == 0 => return Err(Error::Precondition("need at least one puncture".into())),
        _ => {
            let n = 4 * g;
            let t = n - 2;
            let mut b = Builder {
                gluing: vec![None; 3 * t],
            };
            // triangle k-1 has vertices (0, k, k+1); polygon side j runs j -> j+1
            let side_of = |j: usize| match j {
                0 => 0,
                j if j == n - 1 => 3 * (t - 1) + 2,
                j => 3 * (j - 1) + 1,
            };
            for k in 0..t - 1 {
                b.glue(3 * k + 2, 3 * (k + 1));
            }
            for i in 0..g {
                b.glue(side_of(4 * i), side_of(4 * i + 2));
                b.glue(side_of(4 * i + 1), side_of(4 * i + 3));
            }
            (b, 1)
        }
    };
    for k in 0..s.saturating_sub(base) {
        b.split(k);
    }
    b.finish()
}

pub fn once_punctured_torus() -> Triangulation {
    standard_surface(1, 1).expect("torus")
}

pub fn four_punctured_sphere() -> Triangulation {
    standard_surface(0, 4).expect("sphere")
}

pub fn genus_two_one_puncture() -> Triangulation {
    standard_surface(2, 1).expect("genus two")
}

/// Genus two with four punctures: 12 triangles and 18 edges.
pub fn genus_two_four_punctures() -> Triangulation {
    standard_surface(2, 4).expect("genus two")
}

/// Pentagon `ABCDE` from counter-clockwise vertex triples (`A = 0`).
pub fn pentagon_named(triangles: &[[usize; 3]]) -> PolygonTriangulation {
    PolygonTriangulation::from_triangles(5, triangles).expect("pentagon")
}

/// Pentagon with diagonals `BE` and `CE`.
pub fn pentagon_be_ce() -> PolygonTriangulation {
    pentagon_named(&[[0, 1, 4], [1, 2, 4], [2, 3, 4]])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        for (g, s, t) in [
            (1, 1, 2),
            (0, 3, 2),
            (0, 4, 4),
            (2, 1, 6),
            (2, 4, 12),
            (3, 2, 12),
        ] {
            let x = standard_surface(g, s).unwrap();
            assert_eq!(x.triangle_count(), t, "g={g} s={s}");
            assert_eq!(x.edge_count(), 3 * t / 2);
        }
        assert!(standard_surface(0, 2).is_err());
        assert!(standard_surface(1, 0).is_err());
    }
}
