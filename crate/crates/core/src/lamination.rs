//! Weighted multicurves carried by nonnegative measures.
//!
//! In each triangle a measure with nonnegative corner coordinates is realized
//! by three bands of arcs cutting off the corners. On side `s` positions run
//! over `[0, μ(s)]` from corner `s`; the band around corner `s` occupies
//! `[0, c_s)` and the band around `next(s)` the rest. Gluing reverses the
//! position. The resulting first-return map is a piecewise translation, and
//! its bands of parallel leaves are found by closing the split points under
//! the map.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::measures::{check_tt_all, corner_coordinates, q, CornerCoordinates, Measure, Q};
use crate::tri::{next_side, prev_side, EdgeId, Mode, Triangulation};

/// One crossing: the edge crossed and the triangle entered.
pub type Crossing = (EdgeId, usize);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub itinerary: Vec<Crossing>,
    pub weight: Q,
}

impl Component {
    /// Number of times the curve crosses each edge.
    pub fn crossings(&self, edges: usize) -> Vec<u64> {
        let mut out = vec![0; edges];
        for &(e, _) in &self.itinerary {
            out[e.0] += 1;
        }
        out
    }

    /// Measure of the curve with weight one.
    pub fn unit_measure(&self, edges: usize) -> Measure {
        Measure::new(
            self.crossings(edges)
                .into_iter()
                .map(|c| q(c as i64))
                .collect(),
        )
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiCurve {
    pub components: Vec<Component>,
}

impl MultiCurve {
    pub fn total_weight(&self) -> Q {
        self.components.iter().map(|c| &c.weight).sum()
    }

    fn from_map(map: BTreeMap<Vec<Crossing>, Q>) -> Self {
        MultiCurve {
            components: map
                .into_iter()
                .filter(|(_, w)| w.is_positive())
                .map(|(itinerary, weight)| Component { itinerary, weight })
                .collect(),
        }
    }
}

/// Smallest rotation of the itinerary over both directions of travel.
pub fn canonical_itinerary(it: &[Crossing]) -> Vec<Crossing> {
    let n = it.len();
    let reversed: Vec<Crossing> = (0..n)
        .rev()
        .map(|i| (it[i].0, it[(i + n - 1) % n].1))
        .collect();
    let mut best: Option<Vec<Crossing>> = None;
    for seq in [it, &reversed[..]] {
        for r in 0..n {
            let rot: Vec<Crossing> = seq[r..].iter().chain(&seq[..r]).copied().collect();
            if best.as_ref().is_none_or(|b| rot < *b) {
                best = Some(rot);
            }
        }
    }
    best.unwrap_or_default()
}

struct Tracer<'a> {
    tri: &'a Triangulation,
    mu: &'a Measure,
    corners: CornerCoordinates,
}

impl<'a> Tracer<'a> {
    fn len(&self, s: usize) -> &Q {
        &self.mu[self.tri.edge_of(s)]
    }

    /// Position on the edge, measured from the tail of its key side.
    fn to_edge(&self, s: usize, x: &Q) -> Q {
        let e = self.tri.edge_of(s);
        if self.tri.key(e) == s {
            x.clone()
        } else {
            &self.mu[e] - x
        }
    }

    /// Enters the triangle of `s` at `x` and returns the side entered next and
    /// the position there. `None` at a split point.
    fn step(&self, s: usize, x: &Q) -> Option<(usize, Q)> {
        let c = &self.corners.0[s];
        let (t, y) = match x.cmp(c) {
            std::cmp::Ordering::Less => (prev_side(s), self.len(prev_side(s)) - x),
            std::cmp::Ordering::Greater => (next_side(s), self.len(s) - x),
            std::cmp::Ordering::Equal => return None,
        };
        let p = self.tri.partner(t)?;
        Some((p, self.len(t) - y))
    }

    /// Interval version of [`Tracer::step`]; the interval must avoid the split.
    fn step_interval(&self, s: usize, lo: &Q, hi: &Q) -> Result<(usize, Q, Q)> {
        let c = &self.corners.0[s];
        let t = if hi <= c {
            prev_side(s)
        } else if lo >= c {
            next_side(s)
        } else {
            return Err(Error::Internal(format!(
                "band straddles the split on side {s}"
            )));
        };
        let p = self
            .tri
            .partner(t)
            .ok_or_else(|| Error::Precondition("leaf reaches the frontier".into()))?;
        // both ends map by x -> x + shift
        let shift = if t == prev_side(s) {
            Q::zero()
        } else {
            self.len(t) - self.len(s)
        };
        Ok((p, lo + &shift, hi + &shift))
    }
}

fn check_input(tri: &Triangulation, mu: &Measure) -> Result<CornerCoordinates> {
    mu.check_size(tri)?;
    if tri.mode() != Mode::Closed {
        return Err(Error::Precondition(
            "multicurves live on closed surfaces".into(),
        ));
    }
    if !mu.is_nonnegative() {
        return Err(Error::Precondition("measure has negative values".into()));
    }
    let corners = corner_coordinates(tri, mu);
    if !corners.all_nonnegative() {
        return Err(Error::Precondition(
            "measure has negative corner coordinates".into(),
        ));
    }
    Ok(corners)
}

/// Upper bound on tracing steps: separatrix points are distinct multiples of
/// `1 / (2D)` where `D` is the common denominator.
fn step_bound(mu: &Measure) -> Result<u64> {
    use num_integer::Integer;
    let den = mu
        .values()
        .iter()
        .fold(num_bigint::BigInt::from(1), |acc, v| acc.lcm(v.denom()));
    let total: Q = mu.values().iter().sum();
    let lattice = (total * Q::from_integer(den * 2)).to_integer();
    let n: u64 = lattice
        .try_into()
        .map_err(|_| Error::BoundExceeded("measure too large to trace".into()))?;
    Ok(2 * (n + mu.len() as u64) + 16)
}

/// Decomposes a nonnegative measure with nonnegative corner coordinates into
/// weighted simple closed curves by band tracing.
pub fn decompose_multicurve(tri: &Triangulation, mu: &Measure) -> Result<MultiCurve> {
    let corners = check_input(tri, mu)?;
    let tr = Tracer { tri, mu, corners };
    let bound = step_bound(mu)?;
    let mut steps = 0u64;
    let mut cuts: Vec<BTreeSet<Q>> = tri
        .edges()
        .map(|e| BTreeSet::from([Q::zero(), mu[e].clone()]))
        .collect();
    for s in 0..tri.side_count() {
        let c = &tr.corners.0[s];
        let e = tri.edge_of(s);
        if !c.is_positive() || c >= &mu[e] {
            continue;
        }
        cuts[e.0].insert(tr.to_edge(s, c));
        // the separatrix leaves the triangle of s through s itself
        let p = tri.partner(s).expect("closed");
        let mut cur = (p, &mu[e] - c);
        loop {
            steps += 1;
            if steps > bound {
                return Err(Error::Internal(
                    "band tracing exceeded its step bound".into(),
                ));
            }
            let e = tri.edge_of(cur.0);
            cuts[e.0].insert(tr.to_edge(cur.0, &cur.1));
            match tr.step(cur.0, &cur.1) {
                Some(next) => cur = next,
                None => break,
            }
        }
    }
    let points: Vec<Vec<Q>> = cuts.into_iter().map(|c| c.into_iter().collect()).collect();
    let mut visited: Vec<Vec<bool>> = points
        .iter()
        .map(|p| vec![false; p.len().saturating_sub(1)])
        .collect();
    let segment = |e: EdgeId, lo: &Q, hi: &Q| -> Result<usize> {
        let pts = &points[e.0];
        let i = pts
            .binary_search(lo)
            .map_err(|_| Error::Internal("band end is not a cut point".into()))?;
        if pts.get(i + 1) != Some(hi) {
            return Err(Error::Internal("band is not a single segment".into()));
        }
        Ok(i)
    };
    let mut found: BTreeMap<Vec<Crossing>, Q> = BTreeMap::new();
    for e in tri.edges() {
        for j in 0..visited[e.0].len() {
            if visited[e.0][j] {
                continue;
            }
            let start = tri.key(e);
            let (lo0, hi0) = (points[e.0][j].clone(), points[e.0][j + 1].clone());
            let weight = &hi0 - &lo0;
            let (mut s, mut lo, mut hi) = (start, lo0.clone(), hi0.clone());
            let mut itinerary = Vec::new();
            loop {
                steps += 1;
                if steps > bound {
                    return Err(Error::Internal(
                        "band tracing exceeded its step bound".into(),
                    ));
                }
                let ed = tri.edge_of(s);
                let (a, b) = if tri.key(ed) == s {
                    (lo.clone(), hi.clone())
                } else {
                    (&mu[ed] - &hi, &mu[ed] - &lo)
                };
                let k = segment(ed, &a, &b)?;
                visited[ed.0][k] = true;
                itinerary.push((ed, s / 3));
                (s, lo, hi) = tr.step_interval(s, &lo, &hi)?;
                if s == start && lo == lo0 {
                    break;
                }
            }
            *found
                .entry(canonical_itinerary(&itinerary))
                .or_insert_with(Q::zero) += weight;
        }
    }
    Ok(MultiCurve::from_map(found))
}

/// Second decomposition path for TT measures: repeatedly peel off the leaves
/// running through the middle of the maximal edges.
///
/// With maximum `m`, the central band on every maximal edge has width `ε`,
/// the least gap `m − m′` over triangles with exactly two maximal edges (or
/// `m` itself when every edge is maximal). Its leaves cross maximal edges only
/// and carry the measure `ε` on each of them; removing them keeps TT and adds
/// at least one maximal edge.
pub fn decompose_by_splitting(tri: &Triangulation, mu: &Measure) -> Result<MultiCurve> {
    check_input(tri, mu)?;
    if !check_tt_all(tri, mu) {
        return Err(Error::Precondition(
            "splitting needs TT on every triangle".into(),
        ));
    }
    let mut rest = mu.clone();
    let mut found: BTreeMap<Vec<Crossing>, Q> = BTreeMap::new();
    for _ in 0..=tri.edge_count() {
        let m = rest.values().iter().max().cloned().unwrap_or_else(Q::zero);
        if m.is_zero() {
            return Ok(MultiCurve::from_map(found));
        }
        let maximal: Vec<bool> = rest.values().iter().map(|v| *v == m).collect();
        let mut eps = m.clone();
        for t in 0..tri.triangle_count() {
            let es = tri.triangle_edges(t);
            let k = es.iter().filter(|e| maximal[e.0]).count();
            if k == 2 {
                let other = es.iter().find(|e| !maximal[e.0]).expect("one non-maximal");
                let gap = &m - &rest[*other];
                if gap < eps {
                    eps = gap;
                }
            }
        }
        let central = Measure::new(
            maximal
                .iter()
                .map(|&b| if b { eps.clone() } else { Q::zero() })
                .collect(),
        );
        for c in decompose_multicurve(tri, &central)?.components {
            *found.entry(c.itinerary).or_insert_with(Q::zero) += c.weight;
        }
        rest = Measure::new(
            rest.values()
                .iter()
                .zip(central.values())
                .map(|(a, b)| a - b)
                .collect(),
        );
    }
    Err(Error::Internal(
        "splitting did not exhaust the measure".into(),
    ))
}

/// Sides realizing an itinerary: the side through which each crossing enters.
fn entry_sides(tri: &Triangulation, it: &[Crossing]) -> Result<Vec<usize>> {
    let n = it.len();
    let bad = |why: &str| Error::Precondition(format!("invalid itinerary: {why}"));
    if n == 0 {
        return Err(bad("empty"));
    }
    for &(e, t) in it {
        tri.check_edge(e)?;
        if t >= tri.triangle_count() {
            return Err(bad("triangle out of range"));
        }
    }
    let (e0, t0) = it[0];
    'start: for first in (3 * t0..3 * t0 + 3).filter(|&s| tri.edge_of(s) == e0) {
        let mut sides = vec![first];
        let mut s = first;
        for i in 1..=n {
            let (e, t) = it[i % n];
            // leave the current triangle through a different side on edge e into t
            let exit = (0..3)
                .map(|k| 3 * (s / 3) + k)
                .filter(|&x| x != s && tri.edge_of(x) == e)
                .filter_map(|x| tri.partner(x))
                .find(|&p| p / 3 == t);
            match exit {
                Some(p) if i < n => {
                    sides.push(p);
                    s = p;
                }
                Some(p) if p == first => return Ok(sides),
                _ => continue 'start,
            }
        }
    }
    Err(bad("consecutive crossings do not chain through triangles"))
}

/// Measure of a weighted multicurve: weight times crossings, summed.
pub fn measure_of_multicurve(tri: &Triangulation, mc: &MultiCurve) -> Result<Measure> {
    let mut out = vec![Q::zero(); tri.edge_count()];
    for c in &mc.components {
        entry_sides(tri, &c.itinerary)?;
        if !c.weight.is_positive() {
            return Err(Error::Precondition(
                "component weight must be positive".into(),
            ));
        }
        for (e, k) in c.crossings(tri.edge_count()).into_iter().enumerate() {
            if k > 0 {
                out[e] += &c.weight * q(k as i64);
            }
        }
    }
    Ok(Measure::new(out))
}

/// Components whose own measure satisfies TT but exceeds three somewhere.
pub fn tt_bound_violations(tri: &Triangulation, mc: &MultiCurve) -> Vec<usize> {
    let n = tri.edge_count();
    mc.components
        .iter()
        .enumerate()
        .filter(|(_, c)| {
            let unit = c.unit_measure(n);
            check_tt_all(tri, &unit) && unit.values().iter().any(|v| *v > q(3))
        })
        .map(|(i, _)| i)
        .collect()
}

/// Every weight-normalized component satisfying TT is at most three on each edge.
pub fn check_tt_bound(tri: &Triangulation, mc: &MultiCurve) -> bool {
    tt_bound_violations(tri, mc).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::q_frac;
    use crate::tri::surfaces::*;

    #[test]
    fn torus_single_curve() {
        let t = once_punctured_torus();
        let mu = Measure::from_ints(&[0, 1, 1]);
        let mc = decompose_multicurve(&t, &mu).unwrap();
        assert_eq!(mc.components.len(), 1);
        assert_eq!(mc.components[0].weight, q(1));
        assert_eq!(mc.components[0].itinerary.len(), 2);
        assert_eq!(measure_of_multicurve(&t, &mc).unwrap(), mu);
        assert_eq!(decompose_by_splitting(&t, &mu).unwrap(), mc);
        assert!(check_tt_bound(&t, &mc));
    }

    #[test]
    fn equal_weights_give_collars() {
        for (t, punctures) in [
            (once_punctured_torus(), 1),
            (four_punctured_sphere(), 4),
            (genus_two_four_punctures(), 4),
        ] {
            let mu = Measure::constant(t.edge_count(), q(3));
            let mc = decompose_multicurve(&t, &mu).unwrap();
            assert_eq!(mc.components.len(), punctures);
            assert!(mc.components.iter().all(|c| c.weight == q_frac(3, 2)));
            assert_eq!(measure_of_multicurve(&t, &mc).unwrap(), mu);
            assert_eq!(decompose_by_splitting(&t, &mu).unwrap(), mc);
        }
    }

    #[test]
    fn zero_measure_is_empty() {
        let t = genus_two_one_puncture();
        let mc = decompose_multicurve(&t, &Measure::zero(t.edge_count())).unwrap();
        assert!(mc.components.is_empty());
    }

    #[test]
    fn non_tt_torus_round_trips() {
        let t = once_punctured_torus();
        for v in [[2, 1, 3], [5, 2, 3], [7, 3, 4], [4, 6, 10]] {
            let mu = Measure::from_ints(&v);
            let mc = decompose_multicurve(&t, &mu).unwrap();
            assert_eq!(measure_of_multicurve(&t, &mc).unwrap(), mu, "{v:?}");
        }
        let mc = decompose_multicurve(&t, &Measure::from_ints(&[2, 1, 3])).unwrap();
        assert_eq!(mc.components.len(), 1);
    }

    #[test]
    fn bad_itinerary_rejected() {
        let t = once_punctured_torus();
        let mc = MultiCurve {
            components: vec![Component {
                itinerary: vec![(EdgeId(0), 0)],
                weight: q(1),
            }],
        };
        assert!(measure_of_multicurve(&t, &mc).is_err());
    }
}
