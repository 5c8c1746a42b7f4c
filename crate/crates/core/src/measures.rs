//! Exact tangential measures and the tropical conditions.
//!
//! All arithmetic is over arbitrary-precision rationals. Nothing here rounds.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Index;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::tri::{next_side, prev_side, EdgeId, Mode, QuadNeighborhood, Triangulation};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

fn half(x: Q) -> Q {
    x / q(2)
}

fn max2(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

/// One exact value per edge id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Measure(Vec<Q>);

impl Measure {
    pub fn new(values: Vec<Q>) -> Self {
        Measure(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Measure(values.iter().map(|&v| q(v)).collect())
    }

    pub fn zero(edges: usize) -> Self {
        Measure(vec![Q::zero(); edges])
    }

    pub fn constant(edges: usize, w: Q) -> Self {
        Measure(vec![w; edges])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Q] {
        &self.0
    }

    pub fn into_values(self) -> Vec<Q> {
        self.0
    }

    pub fn set(&mut self, e: EdgeId, v: Q) {
        self.0[e.0] = v;
    }

    pub fn is_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }

    pub fn check_size(&self, tri: &Triangulation) -> Result<()> {
        if self.len() == tri.edge_count() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "measure has {} values for {} edges",
                self.len(),
                tri.edge_count()
            )))
        }
    }

    pub fn scaled(&self, k: &Q) -> Measure {
        Measure(self.0.iter().map(|v| v * k).collect())
    }

    pub fn add(&self, other: &Measure) -> Measure {
        Measure(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Values read through the quadrilateral around an edge: `(a, b, c, d, e)`.
    pub fn quad_values(&self, quad: &QuadNeighborhood) -> [Q; 5] {
        quad.values(&self.0).map(Q::clone)
    }
}

impl Index<EdgeId> for Measure {
    type Output = Q;
    fn index(&self, e: EdgeId) -> &Q {
        &self.0[e.0]
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// Corner coordinates indexed by corner (corner `s` is the tail of side `s`).
///
/// Corner `s` sits between sides `prev(s)` and `s` and has value
/// `(μ(prev s) + μ(s) − μ(next s)) / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CornerCoordinates(pub Vec<Q>);

impl CornerCoordinates {
    /// Value carried by side `s`: the sum of the corners at its two ends.
    pub fn side_value(&self, s: usize) -> Q {
        &self.0[s] + &self.0[next_side(s)]
    }

    pub fn triangle(&self, t: usize) -> [&Q; 3] {
        [&self.0[3 * t], &self.0[3 * t + 1], &self.0[3 * t + 2]]
    }

    pub fn all_nonnegative(&self) -> bool {
        self.0.iter().all(|v| !v.is_negative())
    }
}

pub fn corner_coordinates(tri: &Triangulation, mu: &Measure) -> CornerCoordinates {
    let v = |s: usize| &mu[tri.edge_of(s)];
    CornerCoordinates(
        (0..tri.side_count())
            .map(|s| half(v(prev_side(s)) + v(s) - v(next_side(s))))
            .collect(),
    )
}

/// Strict classical triangle inequalities.
pub fn check_ct(a: &Q, b: &Q, c: &Q) -> bool {
    a < &(b + c) && b < &(a + c) && c < &(a + b)
}

/// Tropical triangle inequality: the maximum is attained at least twice.
pub fn check_tt(a: &Q, b: &Q, c: &Q) -> bool {
    let m = a.max(b).max(c);
    [a, b, c].iter().filter(|x| **x == m).count() >= 2
}

fn polygon_len(values: &[Q]) -> Result<()> {
    if values.len() < 3 {
        Err(Error::Precondition(format!(
            "polygon condition needs at least 3 values, got {}",
            values.len()
        )))
    } else {
        Ok(())
    }
}

/// Generalized classical triangle inequalities: each value below the sum of the others.
pub fn check_cgt(values: &[Q]) -> Result<bool> {
    polygon_len(values)?;
    let total: Q = values.iter().sum();
    Ok(values.iter().all(|a| a + a < total))
}

/// Generalized tropical triangle inequalities: the maximum is attained at least twice.
pub fn check_tgt(values: &[Q]) -> Result<bool> {
    polygon_len(values)?;
    let m = values.iter().max().expect("nonempty");
    Ok(values.iter().filter(|x| *x == m).count() >= 2)
}

/// `f = max(a + c, b + d) − e`.
pub fn ptolemy_value(a: &Q, b: &Q, c: &Q, d: &Q, e: &Q) -> Q {
    max2(a + c, b + d) - e
}

/// Tropical face condition at a quad `(a, b, c, d, e)`.
pub fn check_tf(a: &Q, b: &Q, c: &Q, d: &Q, e: &Q) -> bool {
    let f = ptolemy_value(a, b, c, d, e);
    e + max2(a + b, c + d) <= f + max2(a + d, b + c)
}

/// Flips `e` and transports the measure by the tropical Ptolemy relation.
pub fn tropical_ptolemy(
    tri: &Triangulation,
    mu: &Measure,
    e: EdgeId,
) -> Result<(Triangulation, Measure)> {
    let quad = tri.quad(e)?;
    let [a, b, c, d, ev] = mu.quad_values(&quad);
    let (flipped, _) = tri.flip(e)?;
    let mut out = mu.clone();
    out.set(e, ptolemy_value(&a, &b, &c, &d, &ev));
    Ok((flipped, out))
}

pub fn triangle_values(tri: &Triangulation, mu: &Measure, t: usize) -> [Q; 3] {
    tri.triangle_edges(t).map(|e| mu[e].clone())
}

pub fn check_tt_all(tri: &Triangulation, mu: &Measure) -> bool {
    (0..tri.triangle_count()).all(|t| {
        let [a, b, c] = triangle_values(tri, mu, t);
        check_tt(&a, &b, &c)
    })
}

pub fn check_ct_all(tri: &Triangulation, mu: &Measure) -> bool {
    (0..tri.triangle_count()).all(|t| {
        let [a, b, c] = triangle_values(tri, mu, t);
        check_ct(&a, &b, &c)
    })
}

pub fn check_tf_all(tri: &Triangulation, mu: &Measure) -> bool {
    tri.edges().filter(|&e| tri.is_flippable(e)).all(|e| {
        let q = tri.quad(e).expect("flippable");
        let [a, b, c, d, ev] = mu.quad_values(&q);
        check_tf(&a, &b, &c, &d, &ev)
    })
}

pub fn total_weight(mu: &Measure) -> Q {
    mu.values().iter().sum()
}

/// Descending list of triangle perimeters, ordered lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PerimeterProfile(pub Vec<Q>);

impl PerimeterProfile {
    pub fn max(&self) -> Option<&Q> {
        self.0.first()
    }
}

impl fmt::Display for PerimeterProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", Measure(self.0.clone()))
    }
}

pub fn perimeter(tri: &Triangulation, mu: &Measure, t: usize) -> Q {
    tri.triangle_edges(t).iter().map(|&e| &mu[e]).sum()
}

pub fn perimeter_profile(tri: &Triangulation, mu: &Measure) -> PerimeterProfile {
    let mut p: Vec<Q> = (0..tri.triangle_count())
        .map(|t| perimeter(tri, mu, t))
        .collect();
    p.sort_unstable_by(|a, b| b.cmp(a));
    PerimeterProfile(p)
}

/// Diagonal value of a balanced quadrilateral whose boundary reads `a, b, c, d`
/// with the diagonal separating `a, b` from `c, d`.
pub fn balanced_quad_diagonal(a: &Q, b: &Q, c: &Q, d: &Q) -> Q {
    half(max2(a + c, b + d) + max2(a + d, b + c) - max2(a + b, c + d))
}

/// `min(max A, max A′)` for the frontier values on either side of a diagonal.
pub fn min_max(side_a: &[Q], side_b: &[Q]) -> Q {
    let ma = side_a.iter().max().expect("nonempty side");
    let mb = side_b.iter().max().expect("nonempty side");
    ma.min(mb).clone()
}

/// Completes frontier values of a polygon to the unique balanced measure.
///
/// `frontier` holds a value for every edge; values on interior edges are ignored.
pub fn complete_balanced(tri: &Triangulation, frontier: &Measure) -> Result<Measure> {
    if tri.mode() != Mode::Polygon {
        return Err(Error::Precondition(
            "balanced completion needs a polygon".into(),
        ));
    }
    frontier.check_size(tri)?;
    let cycle = tri.boundary_cycle()?;
    let values: Vec<Q> = cycle
        .iter()
        .map(|&s| frontier[tri.edge_of(s)].clone())
        .collect();
    if !check_tgt(&values)? {
        return Err(Error::Precondition(format!(
            "frontier values {} violate TGT",
            Measure(values)
        )));
    }
    let n = values.len();
    let mut out = frontier.clone();
    for (e, i, j) in tri.diagonal_endpoints()? {
        let outside: Vec<Q> = (j..n).chain(0..i).map(|k| values[k].clone()).collect();
        out.set(e, min_max(&values[i..j], &outside));
    }
    Ok(out)
}

/// Whether `mu` is balanced on every complementary region of `cut`.
pub fn check_balanced_cells(tri: &Triangulation, cut: &[EdgeId], mu: &Measure) -> Result<bool> {
    mu.check_size(tri)?;
    for region in tri.regions(cut)? {
        let poly = &region.polygon;
        let local = Measure(region.edge_map.iter().map(|&e| mu[e].clone()).collect());
        let frontier: Vec<Q> = region.frontier()?.iter().map(|&e| mu[e].clone()).collect();
        if !check_tgt(&frontier)? {
            return Ok(false);
        }
        if complete_balanced(poly, &local)? != local {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Thurston form `2 Σ (da∧db + db∧dc + dc∧da)` over triangles read clockwise.
pub fn symplectic_pairing(tri: &Triangulation, u: &Measure, v: &Measure) -> Q {
    let w = |x: EdgeId, y: EdgeId| &u[x] * &v[y] - &u[y] * &v[x];
    let mut total = Q::zero();
    for t in 0..tri.triangle_count() {
        let [s0, s1, s2] = tri.triangle_edges(t);
        // clockwise: s0, s2, s1
        let (a, b, c) = (s0, s2, s1);
        total += w(a, b) + w(b, c) + w(c, a);
    }
    total * q(2)
}

/// Compares perimeter profiles, then total weights.
pub fn profile_then_total(a: (&PerimeterProfile, &Q), b: (&PerimeterProfile, &Q)) -> Ordering {
    a.0.cmp(b.0).then_with(|| a.1.cmp(b.1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::surfaces::*;

    fn qs(v: &[i64]) -> Vec<Q> {
        v.iter().map(|&x| q(x)).collect()
    }

    #[test]
    fn corner_formulas() {
        let t = once_punctured_torus();
        let mu = Measure::from_ints(&[3, 4, 5]);
        let cc = corner_coordinates(&t, &mu);
        for s in 0..t.side_count() {
            assert_eq!(cc.side_value(s), mu[t.edge_of(s)]);
        }
        let mut tri0: Vec<Q> = cc.triangle(0).into_iter().cloned().collect();
        tri0.sort();
        assert_eq!(tri0, qs(&[1, 2, 3]));
        let w = Measure::constant(3, q(5));
        assert!(corner_coordinates(&t, &w)
            .0
            .iter()
            .all(|c| *c == q_frac(5, 2)));
    }

    #[test]
    fn triangle_conditions() {
        let v = |a, b, c| (q(a), q(b), q(c));
        let (a, b, c) = v(4, 4, 5);
        assert!(!check_tt(&a, &b, &c) && check_ct(&a, &b, &c));
        let (a, b, c) = v(3, 3, 3);
        assert!(check_tt(&a, &b, &c));
        let (a, b, c) = v(0, 1, 1);
        assert!(check_tt(&a, &b, &c) && !check_ct(&a, &b, &c));
        let (a, b, c) = v(0, 0, 0);
        assert!(check_tt(&a, &b, &c));
    }

    #[test]
    fn polygon_conditions() {
        assert!(check_cgt(&qs(&[1, 1, 1, 1])).unwrap());
        assert!(check_tgt(&qs(&[1, 1, 1, 1])).unwrap());
        assert!(!check_cgt(&qs(&[5, 1, 1, 1])).unwrap());
        assert!(!check_tgt(&qs(&[5, 1, 1, 1])).unwrap());
        assert!(check_cgt(&qs(&[3, 3, 1, 2, 2])).unwrap());
        assert!(check_tgt(&qs(&[3, 3, 1, 2, 2])).unwrap());
        assert!(check_tgt(&qs(&[1, 2])).is_err());
    }

    #[test]
    fn face_condition_examples() {
        let t = |v: [i64; 5]| {
            let [a, b, c, d, e] = v.map(q);
            check_tf(&a, &b, &c, &d, &e)
        };
        assert!(t([4, 4, 1, 6, 5]));
        assert!(!t([2, 2, 4, 4, 3]));
        assert!(t([7, 7, 7, 7, 7]));
    }

    #[test]
    fn torus_flip_transport() {
        let t = once_punctured_torus();
        // edges: 0 and 1 are polygon sides, 2 is the fan diagonal
        let mu = Measure::from_ints(&[2, 1, 3]);
        let (t2, mu2) = tropical_ptolemy(&t, &mu, EdgeId(2)).unwrap();
        assert_eq!(mu2, Measure::from_ints(&[2, 1, 1]));
        let (_, back) = tropical_ptolemy(&t2, &mu2, EdgeId(2)).unwrap();
        assert_eq!(back, mu);
    }

    #[test]
    fn pentagon_totals_and_profiles() {
        let p = pentagon_be_ce();
        let mut mu = Measure::zero(p.tri.edge_count());
        for (name, v) in [
            ("EA", 0),
            ("AB", 7),
            ("BC", 15),
            ("CD", 10),
            ("DE", 2),
            ("BE", 7),
            ("CE", 8),
        ] {
            mu.set(p.edge(name).unwrap(), q(v));
        }
        assert_eq!(total_weight(&mu), q(49));
        assert_eq!(perimeter_profile(&p.tri, &mu).0, qs(&[30, 20, 14]));
        let ce = p.edge("CE").unwrap();
        let (_, flipped) = tropical_ptolemy(&p.tri, &mu, ce).unwrap();
        assert_eq!(flipped[ce], q(9));
    }

    #[test]
    fn balanced_examples() {
        assert_eq!(balanced_quad_diagonal(&q(5), &q(5), &q(2), &q(3)), q(3));
        let p = pentagon_with_frontier(&[3, 3, 1, 2, 2]);
        let done = complete_balanced(&p.0.tri, &p.1).unwrap();
        // the diagonal splitting {3,3} from {1,2,2} is AC
        assert_eq!(done[p.0.edge("AC").unwrap()], q(2));
        assert!(check_balanced_cells(
            &p.0.tri,
            &p.0.tri.frontier_edges().collect::<Vec<_>>(),
            &done
        )
        .unwrap());
        let mut bad = done.clone();
        let ac = p.0.edge("AC").unwrap();
        bad.set(ac, &bad[ac] + q(1));
        assert!(!check_balanced_cells(
            &p.0.tri,
            &p.0.tri.frontier_edges().collect::<Vec<_>>(),
            &bad
        )
        .unwrap());
        assert!(complete_balanced(&p.0.tri, &Measure::from_ints(&[5, 1, 1, 1, 0, 0, 0])).is_err());
    }

    /// Pentagon with diagonals AC, AD and frontier AB, BC, CD, DE, EA set to `v`.
    fn pentagon_with_frontier(v: &[i64; 5]) -> (crate::tri::PolygonTriangulation, Measure) {
        let p = pentagon_named(&[[0, 1, 2], [0, 2, 3], [0, 3, 4]]);
        let mut mu = Measure::zero(p.tri.edge_count());
        for (name, x) in ["AB", "BC", "CD", "DE", "EA"].iter().zip(v) {
            mu.set(p.edge(name).unwrap(), q(*x));
        }
        (p, mu)
    }

    #[test]
    fn pairing_is_antisymmetric() {
        let t = once_punctured_torus();
        let u = Measure::from_ints(&[1, 0, 0]);
        let v = Measure::from_ints(&[0, 1, 0]);
        assert_eq!(symplectic_pairing(&t, &u, &u), q(0));
        assert_eq!(
            symplectic_pairing(&t, &u, &v),
            -symplectic_pairing(&t, &v, &u)
        );
        // each triangle contributes u1 v0 - u0 v1 = -1 once
        assert_eq!(symplectic_pairing(&t, &u, &v), q(-4));
    }
}
