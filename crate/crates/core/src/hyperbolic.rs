//! Lambda lengths, Ptolemy flips, simplicial coordinates and cyclic polygons.
//!
//! Lengths are stored as logarithms so that degeneration paths with huge
//! exponents stay finite.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::measures::{check_balanced_cells, check_tt_all, Measure, Q};
use crate::tri::{EdgeId, Triangulation};
use num_traits::ToPrimitive;

/// Relative tolerance for the classical conditions.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Positive length per edge, stored as `ln λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct LambdaLengths {
    logs: Vec<f64>,
}

impl LambdaLengths {
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
            return Err(Error::Precondition(format!(
                "lambda length {v} is not positive and finite"
            )));
        }
        Ok(LambdaLengths {
            logs: values.iter().map(|v| v.ln()).collect(),
        })
    }

    pub fn from_logs(logs: Vec<f64>) -> Result<Self> {
        if logs.iter().any(|l| !l.is_finite()) {
            return Err(Error::Precondition(
                "log lambda length is not finite".into(),
            ));
        }
        Ok(LambdaLengths { logs })
    }

    pub fn ones(edges: usize) -> Self {
        LambdaLengths {
            logs: vec![0.0; edges],
        }
    }

    pub fn len(&self) -> usize {
        self.logs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.logs.is_empty()
    }

    pub fn log(&self, e: EdgeId) -> f64 {
        self.logs[e.0]
    }

    pub fn value(&self, e: EdgeId) -> f64 {
        self.logs[e.0].exp()
    }

    pub fn logs(&self) -> &[f64] {
        &self.logs
    }

    pub fn values(&self) -> Vec<f64> {
        self.logs.iter().map(|l| l.exp()).collect()
    }

    pub fn check_size(&self, tri: &Triangulation) -> Result<()> {
        if self.len() == tri.edge_count() {
            Ok(())
        } else {
            Err(Error::Precondition(format!(
                "{} lambda lengths for {} edges",
                self.len(),
                tri.edge_count()
            )))
        }
    }

    fn quad_logs(&self, tri: &Triangulation, e: EdgeId) -> Result<[f64; 5]> {
        let q = tri.quad(e)?;
        Ok(q.values(&self.logs).map(|x| *x))
    }
}

/// `ln(e^x + e^y)`.
pub fn log_add(x: f64, y: f64) -> f64 {
    let m = x.max(y);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + ((x - m).exp() + (y - m).exp()).ln()
}

/// Flips `e`, giving the new diagonal `f = (ac + bd) / e`.
pub fn classical_ptolemy(
    tri: &Triangulation,
    lambda: &LambdaLengths,
    e: EdgeId,
) -> Result<(Triangulation, LambdaLengths)> {
    lambda.check_size(tri)?;
    let [a, b, c, d, ev] = lambda.quad_logs(tri, e)?;
    let (flipped, _) = tri.flip(e)?;
    let mut out = lambda.clone();
    out.logs[e.0] = log_add(a + c, b + d) - ev;
    Ok((flipped, out))
}

/// Cross-ratio `ac / bd` of the quadrilateral around `e`.
pub fn cross_ratio(tri: &Triangulation, lambda: &LambdaLengths, e: EdgeId) -> Result<f64> {
    let [a, b, c, d, _] = lambda.quad_logs(tri, e)?;
    Ok((a + c - b - d).exp())
}

/// `E = (a² + b² − e²)/(abe) + (c² + d² − e²)/(cde)`.
pub fn simplicial_coordinate(a: f64, b: f64, c: f64, d: f64, e: f64) -> f64 {
    (a * a + b * b - e * e) / (a * b * e) + (c * c + d * d - e * e) / (c * d * e)
}

/// The six monomials of `E` as (sign, log magnitude).
fn simplicial_terms(l: [f64; 5]) -> [(f64, f64); 6] {
    let [a, b, c, d, e] = l;
    [
        (1.0, a - b - e),
        (1.0, b - a - e),
        (-1.0, e - a - b),
        (1.0, c - d - e),
        (1.0, d - c - e),
        (-1.0, e - c - d),
    ]
}

/// Sign and log magnitude of a signed sum of exponentials, factoring out the
/// largest term. Returns `(0, -inf)` for an exact zero.
fn signed_log_sum(terms: &[(f64, f64)]) -> (f64, f64) {
    let m = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
    let s: f64 = terms.iter().map(|(sg, l)| sg * (l - m).exp()).sum();
    if s == 0.0 {
        (0.0, f64::NEG_INFINITY)
    } else {
        (s.signum(), m + s.abs().ln())
    }
}

/// Simplicial coordinate evaluated from log lengths, as (sign, log |E|).
pub fn simplicial_coordinate_log(logs: [f64; 5]) -> (f64, f64) {
    signed_log_sum(&simplicial_terms(logs))
}

/// Simplicial coordinate of every flippable edge, from log lengths.
pub fn simplicial_coordinates(
    tri: &Triangulation,
    lambda: &LambdaLengths,
) -> Result<Vec<(EdgeId, f64)>> {
    lambda.check_size(tri)?;
    tri.edges()
        .filter(|&e| tri.is_flippable(e))
        .map(|e| {
            let (sg, l) = simplicial_coordinate_log(lambda.quad_logs(tri, e)?);
            Ok((e, sg * l.exp()))
        })
        .collect()
}

/// Monomials whose logs agree to rounding are added exactly before any
/// exponentials are taken. Along `t^μ` the leading pair of a TT quad cancels
/// identically and the positive remainder can sit far below one ulp of it.
fn merge_equal_logs(mut terms: [(f64, f64); 6]) -> Vec<(f64, f64)> {
    terms.sort_by(|x, y| y.1.total_cmp(&x.1));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(6);
    for (sg, l) in terms {
        match out.last_mut() {
            Some(last) if (last.1 - l).abs() <= 1e-12 * (1.0 + l.abs()) => last.0 += sg,
            _ => out.push((sg, l)),
        }
    }
    out.retain(|t| t.0 != 0.0);
    out
}

/// Every simplicial coordinate exceeds `tol` (relative to the largest monomial).
pub fn in_cell(tri: &Triangulation, lambda: &LambdaLengths, tol: f64) -> Result<bool> {
    lambda.check_size(tri)?;
    for e in tri.edges().filter(|&e| tri.is_flippable(e)) {
        let terms = merge_equal_logs(simplicial_terms(lambda.quad_logs(tri, e)?));
        let m = terms.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = terms.iter().map(|(sg, l)| sg * (l - m).exp()).sum();
        if terms.is_empty() || s <= tol {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical face condition `e(ab + cd) ≤ f(ad + bc)` with relative slack `tol`.
pub fn check_cf(a: f64, b: f64, c: f64, d: f64, e: f64, tol: f64) -> bool {
    let f = (a * c + b * d) / e;
    let lhs = e * (a * b + c * d);
    let rhs = f * (a * d + b * c);
    lhs <= rhs + tol * lhs.abs().max(rhs.abs())
}

/// Strict classical triangle inequalities on lengths.
pub fn check_ct_lengths(a: f64, b: f64, c: f64) -> bool {
    a < b + c && b < a + c && c < a + b
}

/// Classical face condition at every flippable edge.
pub fn check_cf_all(tri: &Triangulation, lambda: &LambdaLengths, tol: f64) -> Result<bool> {
    lambda.check_size(tri)?;
    for e in tri.edges().filter(|&e| tri.is_flippable(e)) {
        let [a, b, c, d, ev] = lambda.quad_logs(tri, e)?.map(f64::exp);
        if !check_cf(a, b, c, d, ev, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Classical triangle inequalities on every triangle.
pub fn check_ct_all(tri: &Triangulation, lambda: &LambdaLengths) -> bool {
    (0..tri.triangle_count()).all(|t| {
        let [a, b, c] = tri.triangle_edges(t).map(|e| lambda.value(e));
        check_ct_lengths(a, b, c)
    })
}

/// `Σ` over triangles of the product of the three lengths.
pub fn lambda_triangle_objective(tri: &Triangulation, lambda: &LambdaLengths) -> f64 {
    lambda_triangle_objective_log(tri, lambda).exp()
}

pub fn lambda_triangle_objective_log(tri: &Triangulation, lambda: &LambdaLengths) -> f64 {
    (0..tri.triangle_count())
        .map(|t| {
            tri.triangle_edges(t)
                .iter()
                .map(|&e| lambda.log(e))
                .sum::<f64>()
        })
        .fold(f64::NEG_INFINITY, log_add)
}

/// A Euclidean polygon inscribed in a circle.
#[derive(Clone, Debug, PartialEq)]
pub struct CyclicPolygon {
    pub log_sides: Vec<f64>,
    /// `ln(2R)`.
    pub log_diameter: f64,
    /// Half the central angle of each side, measured along the polygon.
    pub half_angles: Vec<f64>,
    pub center_inside: bool,
}

impl CyclicPolygon {
    pub fn radius(&self) -> f64 {
        self.log_diameter.exp() / 2.0
    }

    /// Vertex positions on the circle as angles, vertex 0 at angle 0.
    pub fn vertex_angles(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.half_angles.len());
        let mut acc = 0.0;
        for h in &self.half_angles {
            out.push(acc);
            acc += 2.0 * h;
        }
        out
    }

    /// `ln` of the chord between vertices `i < j`.
    pub fn log_chord(&self, i: usize, j: usize) -> f64 {
        let inner: f64 = self.half_angles[i..j].iter().sum();
        let outer: f64 = self.half_angles[j..]
            .iter()
            .chain(&self.half_angles[..i])
            .sum();
        self.log_diameter + inner.min(outer).sin().ln()
    }

    pub fn chord(&self, i: usize, j: usize) -> f64 {
        self.log_chord(i, j).exp()
    }

    /// Largest relative error between a side and its reproduced chord.
    pub fn residual(&self) -> f64 {
        let n = self.half_angles.len();
        (0..n)
            .map(|i| {
                let chord = self.log_diameter + self.half_angles[i].sin().ln();
                (chord - self.log_sides[i]).exp_m1().abs()
            })
            .fold(0.0, f64::max)
            .max(if n > 0 { 0.0 } else { f64::NAN })
    }

    /// Diagonals of the fan from vertex 0, in order `0-2, 0-3, ...`.
    pub fn fan_diagonals(&self) -> Vec<f64> {
        (2..self.half_angles.len() - 1)
            .map(|j| self.chord(0, j))
            .collect()
    }
}

/// Half central angle `asin(a / 2R)` of a side with `ln(2R / a) = w`, computed
/// as `π/2 − atan(√(x² − 1))` near the diameter.
fn half_angle(log_ratio: f64) -> f64 {
    // log_ratio = ln(2R / a) >= 0
    if log_ratio < 0.5 {
        let excess = log_ratio.exp_m1(); // 2R/a - 1
        FRAC_PI_2 - (excess * (2.0 + excess)).sqrt().atan()
    } else {
        (-log_ratio).exp().asin()
    }
}

/// Distance of the half angle from `π/2`, accurate when small.
fn half_angle_defect(log_ratio: f64) -> f64 {
    if log_ratio < 0.5 {
        let excess = log_ratio.exp_m1();
        (excess * (2.0 + excess)).sqrt().atan()
    } else {
        FRAC_PI_2 - (-log_ratio).exp().asin()
    }
}

/// Solves for the cyclic polygon with the given side lengths.
pub fn solve_cyclic(sides: &[f64]) -> Result<CyclicPolygon> {
    if sides.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::Precondition("side lengths must be positive".into()));
    }
    solve_cyclic_log(&sides.iter().map(|s| s.ln()).collect::<Vec<_>>())
}

/// [`solve_cyclic`] from log side lengths.
///
/// With `2R = a_max (1 + u)` the unknown is `v = ln(1 + u) ≥ 0`, found by
/// bisection on `ln v`. Half angles near `π/2` are carried by their defect so
/// nearly degenerate polygons keep full relative precision.
pub fn solve_cyclic_log(log_sides: &[f64]) -> Result<CyclicPolygon> {
    let n = log_sides.len();
    if n < 3 {
        return Err(Error::Precondition(
            "a polygon needs at least 3 sides".into(),
        ));
    }
    if log_sides.iter().any(|l| !l.is_finite()) {
        return Err(Error::Precondition(
            "side lengths must be positive and finite".into(),
        ));
    }
    let imax = (0..n)
        .max_by(|&i, &j| log_sides[i].total_cmp(&log_sides[j]))
        .expect("nonempty");
    let lmax = log_sides[imax];
    // CGT: a_max < sum of the others, evaluated relative to a_max
    let others: f64 = (0..n)
        .filter(|&i| i != imax)
        .map(|i| (log_sides[i] - lmax).exp())
        .sum();
    if others <= 1.0 {
        return Err(Error::Precondition(
            "side lengths violate the generalized triangle inequalities".into(),
        ));
    }
    let ratio = |i: usize, v: f64| lmax - log_sides[i] + v;
    // Σ θ_i − π written as Σ_small θ − Σ_big defect + (big/2 − 1) π
    let inside = |v: f64| -> f64 {
        let mut small = 0.0;
        let mut defects = 0.0;
        let mut big = 0.0;
        for i in 0..n {
            let r = ratio(i, v);
            if r < 0.5 {
                defects += half_angle_defect(r);
                big += 1.0;
            } else {
                small += half_angle(r);
            }
        }
        small - defects + (big / 2.0 - 1.0) * PI
    };
    // Σ_{i≠max} θ_i − θ_max
    let outside = |v: f64| -> f64 {
        let s: f64 = (0..n)
            .filter(|&i| i != imax)
            .map(|i| half_angle(ratio(i, v)))
            .sum();
        s - FRAC_PI_2 + half_angle_defect(v)
    };
    let center_inside = inside(0.0) >= 0.0;
    let g = |v: f64| {
        if center_inside {
            -inside(v)
        } else {
            outside(v)
        }
    };
    // g < 0 below the root and > 0 above it
    let v = if g(0.0) >= 0.0 {
        0.0
    } else {
        let mut hi = 1.0f64;
        let mut steps = 0;
        while g(hi) < 0.0 {
            hi *= 2.0;
            steps += 1;
            if steps > 2000 {
                return Err(Error::Numerical(
                    "cyclic solver cannot bracket the radius".into(),
                ));
            }
        }
        let mut lo = f64::MIN_POSITIVE;
        if g(lo) >= 0.0 {
            lo
        } else {
            for _ in 0..400 {
                let mid = (lo.ln() + (hi.ln() - lo.ln()) / 2.0).exp();
                if mid <= lo || mid >= hi {
                    break;
                }
                if g(mid) < 0.0 {
                    lo = mid;
                } else {
                    hi = mid;
                }
                if (hi - lo) <= 1e-15 * hi {
                    break;
                }
            }
            if (hi - lo) > 1e-12 * hi {
                return Err(Error::Numerical("cyclic solver did not converge".into()));
            }
            (lo + hi) / 2.0
        }
    };
    let half_angles: Vec<f64> = (0..n)
        .map(|i| {
            let h = half_angle(ratio(i, v));
            if i == imax && !center_inside {
                PI - h
            } else {
                h
            }
        })
        .collect();
    Ok(CyclicPolygon {
        log_sides: log_sides.to_vec(),
        log_diameter: lmax + v,
        half_angles,
        center_inside,
    })
}

/// Diagonal `e` of the cyclic quadrilateral with sides `a, b, c, d` in order,
/// separating `a, b` from `c, d`: `e² = (ac + bd)(ad + bc)/(ab + cd)`.
pub fn cyclic_quad_diagonal(a: f64, b: f64, c: f64, d: f64) -> f64 {
    ((a * c + b * d) * (a * d + b * c) / (a * b + c * d)).sqrt()
}

/// `ln t` from a float or a string of the form `1e<k>`.
pub fn parse_log_t(text: &str) -> Result<f64> {
    let bad = || Error::Format(format!("cannot read t from {text:?}"));
    let t = text.trim();
    let log = if let Some(k) = t.strip_prefix("1e").or_else(|| t.strip_prefix("1E")) {
        let k: f64 = k.parse().map_err(|_| bad())?;
        k * std::f64::consts::LN_10
    } else {
        let v: f64 = t.parse().map_err(|_| bad())?;
        if !(v.is_finite() && v > 0.0) {
            return Err(bad());
        }
        v.ln()
    };
    if log < 0.0 {
        return Err(Error::Precondition(format!("t = {text} is below 1")));
    }
    Ok(log)
}

fn q_to_f64(x: &Q) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `λ_t(e) = t^{μ(e)}`, given `ln t`.
pub fn degeneration_path(tri: &Triangulation, mu: &Measure, log_t: f64) -> Result<LambdaLengths> {
    mu.check_size(tri)?;
    if log_t < 0.0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    if !check_tt_all(tri, mu) {
        return Err(Error::Precondition(
            "degeneration needs TT on every triangle".into(),
        ));
    }
    LambdaLengths::from_logs(mu.values().iter().map(|v| q_to_f64(v) * log_t).collect())
}

/// Cell membership of `t^μ` with the monomials of each simplicial coordinate
/// grouped by exact exponent before evaluation.
pub fn in_cell_exponents(tri: &Triangulation, mu: &Measure, log_t: f64) -> Result<bool> {
    mu.check_size(tri)?;
    for e in tri.edges().filter(|&e| tri.is_flippable(e)) {
        let q = tri.quad(e)?;
        let [a, b, c, d, ev] = mu.quad_values(&q);
        let terms: [(i64, Q); 6] = [
            (1, &a - &b - &ev),
            (1, &b - &a - &ev),
            (-1, &ev - &a - &b),
            (1, &c - &d - &ev),
            (1, &d - &c - &ev),
            (-1, &ev - &c - &d),
        ];
        let mut grouped: Vec<(Q, i64)> = Vec::new();
        for (sg, x) in terms {
            match grouped.iter_mut().find(|(y, _)| *y == x) {
                Some(g) => g.1 += sg,
                None => grouped.push((x, sg)),
            }
        }
        let logs: Vec<(f64, f64)> = grouped
            .into_iter()
            .filter(|(_, c)| *c != 0)
            .map(|(x, c)| (c as f64, q_to_f64(&x) * log_t))
            .collect();
        if logs.is_empty() {
            return Ok(false);
        }
        let m = logs.iter().map(|t| t.1).fold(f64::NEG_INFINITY, f64::max);
        let s: f64 = logs.iter().map(|(c, l)| c * (l - m).exp()).sum();
        if s <= 0.0 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Degeneration relative to a cell decomposition: cut edges get `t^μ`, and
/// each region's diagonals get the chords of the cyclic polygon on those sides.
pub fn degeneration_path_icd(
    tri: &Triangulation,
    cut: &[EdgeId],
    mu: &Measure,
    log_t: f64,
) -> Result<LambdaLengths> {
    mu.check_size(tri)?;
    if log_t < 0.0 {
        return Err(Error::Precondition("t must be at least 1".into()));
    }
    if !check_balanced_cells(tri, cut, mu)? {
        return Err(Error::Precondition(
            "measure is not balanced on every region".into(),
        ));
    }
    let mut logs: Vec<f64> = mu.values().iter().map(|v| q_to_f64(v) * log_t).collect();
    for region in tri.regions(cut)? {
        let poly = &region.polygon;
        if poly.triangle_count() == 1 {
            continue;
        }
        let frontier = region.frontier()?;
        let sides: Vec<f64> = frontier.iter().map(|&e| logs[e.0]).collect();
        let cyc = solve_cyclic_log(&sides)?;
        for (d, i, j) in poly.diagonal_endpoints()? {
            logs[region.edge_map[d.0].0] = cyc.log_chord(i, j);
        }
    }
    LambdaLengths::from_logs(logs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::surfaces::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
    }

    #[test]
    fn square_ptolemy() {
        let t = once_punctured_torus();
        let s2 = 2f64.sqrt();
        // torus quad around edge 2 reads (x, y, x, y)
        let lam = LambdaLengths::from_values(&[1.0, 1.0, s2]).unwrap();
        let (t2, l2) = classical_ptolemy(&t, &lam, EdgeId(2)).unwrap();
        assert!(close(l2.value(EdgeId(2)), s2, 1e-12));
        assert!(close(cross_ratio(&t, &lam, EdgeId(2)).unwrap(), 1.0, 1e-12));
        let (_, back) = classical_ptolemy(&t2, &l2, EdgeId(2)).unwrap();
        assert!(close(back.value(EdgeId(2)), s2, 1e-12));
    }

    #[test]
    fn simplicial_examples() {
        assert!(close(
            simplicial_coordinate(1.0, 1.0, 1.0, 1.0, 1.0),
            2.0,
            1e-15
        ));
        let s2 = 2f64.sqrt();
        assert!(simplicial_coordinate(1.0, 1.0, 1.0, 1.0, s2).abs() < 1e-15);
        let e = simplicial_coordinate(3.0, 2.0, 3.0, 3.0, 4.0);
        assert!(close(e, -5.0 / 72.0, 1e-14));
        let (sg, l) = simplicial_coordinate_log([3f64, 2.0, 3.0, 3.0, 4.0].map(f64::ln));
        assert!(close(sg * l.exp(), -5.0 / 72.0, 1e-12));
    }

    #[test]
    fn face_condition_examples() {
        assert!(check_cf(2.0, 2.0, 4.0, 4.0, 3.0, DEFAULT_TOL));
        assert!(!check_cf(3.0, 2.0, 3.0, 3.0, 4.0, DEFAULT_TOL));
        assert!(check_cf(1.0, 1.0, 1.0, 1.0, 1.0, DEFAULT_TOL));
    }

    #[test]
    fn cyclic_examples() {
        let sq = solve_cyclic(&[1.0; 4]).unwrap();
        assert!(close(sq.radius(), 2f64.sqrt() / 2.0, 1e-12));
        assert!(close(sq.chord(0, 2), 2f64.sqrt(), 1e-12));
        let pent = solve_cyclic(&[1.0; 5]).unwrap();
        assert!(close(pent.chord(0, 2), 2.0 * (PI / 5.0).cos(), 1e-12));
        let q = solve_cyclic(&[2.0, 2.0, 4.0, 4.0]).unwrap();
        assert!(close(q.chord(0, 2).powi(2), 12.8, 1e-12));
        assert!(close(
            cyclic_quad_diagonal(2.0, 2.0, 4.0, 4.0).powi(2),
            12.8,
            1e-14
        ));
        assert!(solve_cyclic(&[5.0, 1.0, 1.0, 1.0]).is_err());
    }

    #[test]
    fn center_outside_branch() {
        let p = solve_cyclic(&[3.0, 1.0, 1.2, 1.1]).unwrap();
        assert!(!p.center_inside);
        assert!(p.residual() < 1e-12);
        let d = cyclic_quad_diagonal(3.0, 1.0, 1.2, 1.1);
        assert!(close(p.chord(0, 2), d, 1e-12));
    }

    #[test]
    fn degeneration_on_torus() {
        let t = once_punctured_torus();
        let mu = Measure::from_ints(&[0, 1, 1]);
        let lam = degeneration_path(&t, &mu, 10f64.ln()).unwrap();
        let v = lam.values();
        assert!(close(v[0], 1.0, 1e-15) && close(v[1], 10.0, 1e-14) && close(v[2], 10.0, 1e-14));
        assert!(in_cell(&t, &lam, 0.0).unwrap());
        assert!(in_cell_exponents(&t, &mu, 1e6f64.ln()).unwrap());
        assert!(degeneration_path(&t, &Measure::from_ints(&[2, 1, 3]), 1.0).is_err());
    }

    #[test]
    fn t_parsing() {
        assert!(close(
            parse_log_t("1e8").unwrap(),
            8.0 * std::f64::consts::LN_10,
            1e-15
        ));
        assert!(close(parse_log_t("10").unwrap(), 10f64.ln(), 1e-15));
        assert!(parse_log_t("0.5").is_err());
        assert!(parse_log_t("x").is_err());
    }
}
