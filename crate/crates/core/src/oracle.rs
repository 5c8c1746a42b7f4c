//! Brute-force verification: exhaustive polygon enumeration, a randomized
//! property harness and the worked quadrilateral examples.
//!
//! Nothing here trusts the kernel's shortcuts. Polygon measures come from
//! counting arc crossings chord by chord, balanced values from enumerating
//! both sides of every chord, and minima from scanning every triangulation.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::hyperbolic::{self, check_cf, LambdaLengths, DEFAULT_TOL};
use crate::lamination::{check_tt_bound, decompose_multicurve, measure_of_multicurve};
use crate::measures::{
    balanced_quad_diagonal, check_ct, check_tf, check_tgt, check_tt, check_tt_all,
    complete_balanced, corner_coordinates, perimeter_profile, q, q_frac, total_weight,
    tropical_ptolemy, Measure, PerimeterProfile, Q,
};
use crate::simplify::{
    check_diamond, classify_flip, cycle_extrema, pentagon_cycle, simplify, FlipClass, State,
};
use crate::tri::surfaces::{
    four_punctured_sphere, genus_two_one_puncture, once_punctured_torus, pentagon_be_ce,
};
use crate::tri::{
    enumerate_polygon_triangulations_bounded, next_side, EdgeId, PolygonTriangulation,
    Triangulation,
};

/// Largest polygon accepted by [`polygon_exhaustive`].
pub const ORACLE_POLYGON_BOUND: usize = 10;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Tally {
    pub passed: u64,
    pub failed: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub property: String,
    pub trial: u64,
    pub input: Value,
}

/// Pass and fail counts per property, with the first failure kept for replay.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub seed: Option<u64>,
    pub trials: u64,
    pub properties: BTreeMap<String, Tally>,
    pub counterexample: Option<Counterexample>,
    pub notes: Vec<String>,
}

impl TrialReport {
    pub fn new(seed: Option<u64>, trials: u64) -> Self {
        TrialReport {
            seed,
            trials,
            ..Default::default()
        }
    }

    pub fn record(&mut self, property: &str, trial: u64, ok: bool, input: impl FnOnce() -> Value) {
        let tally = self.properties.entry(property.to_string()).or_default();
        if ok {
            tally.passed += 1;
        } else {
            tally.failed += 1;
            if self.counterexample.is_none() {
                self.counterexample = Some(Counterexample {
                    property: property.to_string(),
                    trial,
                    input: input(),
                });
            }
        }
    }

    pub fn tally(&self, property: &str) -> Tally {
        self.properties.get(property).copied().unwrap_or_default()
    }

    pub fn failures(&self) -> u64 {
        self.properties.values().map(|t| t.failed).sum()
    }

    pub fn all_passed(&self) -> bool {
        self.failures() == 0
    }

    /// Adds the counts of `later`; its counterexample is kept only if none is
    /// recorded yet, so merging in trial order keeps the earliest failure.
    fn absorb(&mut self, later: TrialReport) {
        for (k, t) in later.properties {
            let mine = self.properties.entry(k).or_default();
            mine.passed += t.passed;
            mine.failed += t.failed;
        }
        if self.counterexample.is_none() {
            self.counterexample = later.counterexample;
        }
    }
}

fn qs(values: &[Q]) -> Vec<String> {
    values.iter().map(|v| v.to_string()).collect()
}

// ---------------------------------------------------------------------------
// Quadrilateral conditions

/// The four conditions on the quad `a, b, c, d, e` (triangles `a, b, e` and `c, d, e`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadConditions {
    pub ct: bool,
    pub tt: bool,
    pub cf: bool,
    pub tf: bool,
}

pub fn quad_conditions(v: &[Q; 5]) -> QuadConditions {
    let [a, b, c, d, e] = v;
    let f: [f64; 5] = v.clone().map(|x| hyperbolic_f64(&x));
    QuadConditions {
        ct: check_ct(a, b, e) && check_ct(c, d, e),
        tt: check_tt(a, b, e) && check_tt(c, d, e),
        cf: check_cf(f[0], f[1], f[2], f[3], f[4], DEFAULT_TOL),
        tf: check_tf(a, b, c, d, e),
    }
}

fn hyperbolic_f64(x: &Q) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

/// A quad showing that one condition does not imply another.
#[derive(Clone, Debug)]
pub struct NonImplication {
    pub values: [i64; 5],
    pub holds: &'static str,
    pub fails: &'static str,
}

/// The five witnesses that no implications hold beyond those from TT.
pub fn non_implication_witnesses() -> Vec<NonImplication> {
    let w = |values, holds, fails| NonImplication {
        values,
        holds,
        fails,
    };
    vec![
        w([4, 4, 1, 6, 5], "tf", "tt"),
        w([4, 3, 3, 4, 5], "ct", "tt"),
        w([3, 2, 3, 3, 4], "ct", "cf"),
        w([3, 1, 1, 1, 1], "tf", "ct"),
        w([2, 2, 4, 4, 3], "cf", "tf"),
    ]
}

impl QuadConditions {
    pub fn get(&self, name: &str) -> Option<bool> {
        match name {
            "ct" => Some(self.ct),
            "tt" => Some(self.tt),
            "cf" => Some(self.cf),
            "tf" => Some(self.tf),
            _ => None,
        }
    }
}

// ---------------------------------------------------------------------------
// Polygon laminations by crossing counts

/// Weighted arc joining the interiors of frontier sides `from` and `to`; side
/// `k` of the `n`-gon runs from vertex `k` to vertex `k + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonArc {
    pub from: usize,
    pub to: usize,
    pub weight: Q,
}

/// Bands of arcs cutting off the corners `start, start + 1, ...` with the given weights.
pub fn corner_bands(n: usize, start: usize, weights: &[Q]) -> Result<Vec<PolygonArc>> {
    if weights.len() > n {
        return Err(Error::Precondition(format!(
            "{} corner bands for a {n}-gon",
            weights.len()
        )));
    }
    if weights.iter().any(|w| w.is_negative()) {
        return Err(Error::Precondition(
            "band weights must be nonnegative".into(),
        ));
    }
    Ok(weights
        .iter()
        .enumerate()
        .map(|(k, w)| {
            let v = (start + k) % n;
            PolygonArc {
                from: (v + n - 1) % n,
                to: v,
                weight: w.clone(),
            }
        })
        .collect())
}

/// Weight of the arcs crossing the chord `(i, j)`: those with exactly one
/// endpoint on the sides `i..j`.
pub fn chord_crossings(arcs: &[PolygonArc], chord: (usize, usize)) -> Q {
    let (i, j) = (chord.0.min(chord.1), chord.0.max(chord.1));
    let inside = |k: usize| i <= k && k < j;
    arcs.iter()
        .filter(|a| inside(a.from) != inside(a.to))
        .map(|a| &a.weight)
        .sum()
}

/// Balanced value of the chord `(i, j)` by scanning both sides of it.
pub fn balanced_chord_value(frontier: &[Q], chord: (usize, usize)) -> Q {
    let (i, j) = (chord.0.min(chord.1), chord.0.max(chord.1));
    let mut inner: Option<&Q> = None;
    let mut outer: Option<&Q> = None;
    for (k, v) in frontier.iter().enumerate() {
        let slot = if i <= k && k < j {
            &mut inner
        } else {
            &mut outer
        };
        if slot.is_none_or(|m| v > m) {
            *slot = Some(v);
        }
    }
    match (inner, outer) {
        (Some(a), Some(b)) => a.min(b).clone(),
        _ => Q::zero(),
    }
}

/// What a polygon check is run on.
#[derive(Clone, Debug)]
pub enum PolygonInput {
    /// Frontier values `EA`-style side `k` from vertex `k` to `k + 1`, completed
    /// to the balanced lamination.
    Frontier(Vec<Q>),
    /// Corner bands at consecutive vertices from `start`.
    Bands {
        start: usize,
        weights: Vec<Q>,
    },
    Arcs(Vec<PolygonArc>),
}

impl PolygonInput {
    fn to_json(&self) -> Value {
        match self {
            PolygonInput::Frontier(v) => json!({ "frontier": qs(v) }),
            PolygonInput::Bands { start, weights } => {
                json!({ "bands": qs(weights), "start": start })
            }
            PolygonInput::Arcs(arcs) => json!({
                "arcs": arcs.iter().map(|a| json!([a.from, a.to, a.weight.to_string()])).collect::<Vec<_>>()
            }),
        }
    }
}

/// Measure on every edge of `pt` computed without transport.
pub fn polygon_oracle_measure(pt: &PolygonTriangulation, input: &PolygonInput) -> Result<Measure> {
    let n = pt.n;
    let values: Vec<Q> = match input {
        PolygonInput::Frontier(f) => {
            if f.len() != n {
                return Err(Error::Precondition(format!(
                    "{} frontier values for a {n}-gon",
                    f.len()
                )));
            }
            pt.chords
                .iter()
                .map(|&c| side_or_balanced(f, c, n))
                .collect()
        }
        PolygonInput::Bands { start, weights } => {
            let arcs = corner_bands(n, *start, weights)?;
            pt.chords
                .iter()
                .map(|&c| chord_crossings(&arcs, c))
                .collect()
        }
        PolygonInput::Arcs(arcs) => {
            if arcs
                .iter()
                .any(|a| a.from >= n || a.to >= n || a.from == a.to)
            {
                return Err(Error::Precondition(
                    "arc endpoints must be distinct sides".into(),
                ));
            }
            pt.chords
                .iter()
                .map(|&c| chord_crossings(arcs, c))
                .collect()
        }
    };
    Ok(Measure::new(values))
}

fn side_or_balanced(frontier: &[Q], (i, j): (usize, usize), n: usize) -> Q {
    if j == i + 1 {
        frontier[i].clone()
    } else if i == 0 && j == n - 1 {
        frontier[n - 1].clone()
    } else {
        balanced_chord_value(frontier, (i, j))
    }
}

/// One triangulation of an exhaustive polygon run.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonEntry {
    pub diagonals: Vec<String>,
    pub profile: Vec<String>,
    pub total: String,
    pub tt: bool,
    pub flips: Vec<FlipEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FlipEntry {
    pub edge: String,
    pub replacement: String,
    pub class: String,
    pub total_after: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonReport {
    pub n: usize,
    pub report: TrialReport,
    pub entries: Vec<PolygonEntry>,
    pub min_profile: Vec<String>,
    pub min_total: String,
}

fn class_name(c: FlipClass) -> &'static str {
    match c {
        FlipClass::Reducing => "reducing",
        FlipClass::Neutral => "neutral",
        FlipClass::Increasing => "increasing",
    }
}

fn chord_map(pt: &PolygonTriangulation, mu: &Measure) -> BTreeMap<(usize, usize), Q> {
    pt.tri
        .edges()
        .map(|e| (pt.chords[e.0], mu[e].clone()))
        .collect()
}

fn max_adjacent_perimeter(pt: &PolygonTriangulation, mu: &Measure, e: EdgeId) -> Q {
    let (s, p) = pt.tri.sides_of(e);
    [Some(s), p]
        .into_iter()
        .flatten()
        .map(|side| {
            pt.tri
                .triangle_edges(side / 3)
                .iter()
                .map(|&x| &mu[x])
                .sum::<Q>()
        })
        .max()
        .expect("an edge has a triangle")
}

/// Checks every triangulation of the `n`-gon against the oracle measures.
///
/// Properties: transport along the flip graph reproduces the oracle measure;
/// flip classes agree with perimeters read off the enumerated neighbours;
/// every simplification ends in a class containing the globally smallest
/// profile (empirical); diamond patterns hold. Balanced frontier inputs also
/// check TT everywhere, the kernel completion and the quadrilateral formula.
pub fn polygon_exhaustive(n: usize, input: &PolygonInput) -> Result<PolygonReport> {
    if n > ORACLE_POLYGON_BOUND {
        return Err(Error::BoundExceeded(format!(
            "{n}-gon exceeds the oracle bound {ORACLE_POLYGON_BOUND}"
        )));
    }
    let all = enumerate_polygon_triangulations_bounded(n, ORACLE_POLYGON_BOUND)?;
    if let PolygonInput::Frontier(f) = input {
        if f.len() != n || !check_tgt(f)? {
            return Err(Error::Precondition(
                "frontier values must satisfy TGT".into(),
            ));
        }
    }
    let index: HashMap<Vec<(usize, usize)>, usize> = all
        .iter()
        .enumerate()
        .map(|(i, p)| (p.diagonals(), i))
        .collect();
    let measures: Vec<Measure> = all
        .iter()
        .map(|p| polygon_oracle_measure(p, input))
        .collect::<Result<_>>()?;
    let mut report = TrialReport::new(None, all.len() as u64);
    let input_json = input.to_json();
    let ctx = |i: usize| {
        let mut v = input_json.clone();
        v["n"] = json!(n);
        v["diagonals"] = json!(all[i].diagonals());
        v
    };

    // transport along a spanning tree of the flip graph
    let mut reached = vec![false; all.len()];
    reached[0] = true;
    let mut queue = VecDeque::from([(all[0].clone(), measures[0].clone())]);
    while let Some((pt, mu)) = queue.pop_front() {
        let i = index[&pt.diagonals()];
        let ok = chord_map(&pt, &mu) == chord_map(&all[i], &measures[i]);
        report.record("transport_matches_oracle", i as u64, ok, || ctx(i));
        for e in pt.tri.interior_edges().collect::<Vec<_>>() {
            let next = pt.flip(e)?;
            let j = index[&next.diagonals()];
            if !reached[j] {
                reached[j] = true;
                let (_, m2) = tropical_ptolemy(&pt.tri, &mu, e)?;
                queue.push_back((next, m2));
            }
        }
    }
    report.record(
        "flip_graph_connected",
        0,
        reached.iter().all(|r| *r),
        || ctx(0),
    );

    let profiles: Vec<PerimeterProfile> = all
        .iter()
        .zip(&measures)
        .map(|(p, m)| perimeter_profile(&p.tri, m))
        .collect();
    let min_profile = profiles
        .iter()
        .min()
        .expect("at least one triangulation")
        .clone();
    let min_total = measures.iter().map(total_weight).min().expect("nonempty");

    let mut entries = Vec::with_capacity(all.len());
    for (i, (pt, mu)) in all.iter().zip(&measures).enumerate() {
        let mut flips = Vec::new();
        for e in pt.tri.interior_edges().collect::<Vec<_>>() {
            let next = pt.flip(e)?;
            let j = index[&next.diagonals()];
            let m_old = max_adjacent_perimeter(pt, mu, e);
            let (u, v) = next.chords[e.0];
            let new_edge = all[j].edge_of_chord(u, v).expect("flipped chord");
            let m_new = max_adjacent_perimeter(&all[j], &measures[j], new_edge);
            let expected = match m_new.cmp(&m_old) {
                std::cmp::Ordering::Less => FlipClass::Reducing,
                std::cmp::Ordering::Equal => FlipClass::Neutral,
                std::cmp::Ordering::Greater => FlipClass::Increasing,
            };
            let got = classify_flip(&pt.tri, mu, e)?.class;
            report.record(
                "flip_class_matches_oracle",
                i as u64,
                got == expected,
                || {
                    let mut v = ctx(i);
                    v["edge"] = json!(pt.name(e));
                    v
                },
            );
            flips.push(FlipEntry {
                edge: pt.name(e),
                replacement: next.name(e),
                class: class_name(got).into(),
                total_after: total_weight(&measures[j]).to_string(),
            });
        }
        if matches!(input, PolygonInput::Frontier(_)) {
            report.record("balanced_tt", i as u64, check_tt_all(&pt.tri, mu), || {
                ctx(i)
            });
            let mut frontier = Measure::zero(pt.tri.edge_count());
            for e in pt.tri.frontier_edges() {
                frontier.set(e, mu[e].clone());
            }
            let kernel = complete_balanced(&pt.tri, &frontier)?;
            report.record("completion_matches_oracle", i as u64, &kernel == mu, || {
                ctx(i)
            });
            for e in pt.tri.interior_edges() {
                let qd = pt.tri.quad(e)?;
                let [a, b, c, d, ev] = mu.quad_values(&qd);
                let ok = balanced_quad_diagonal(&a, &b, &c, &d) == ev;
                report.record("balanced_quad_formula", i as u64, ok, || ctx(i));
            }
        }
        let run = simplify(&pt.tri, mu)?;
        let has_min = run.class.iter().any(|m| m.state.profile() == min_profile);
        report.record("simplify_class_has_global_min", i as u64, has_min, || {
            ctx(i)
        });
        let diamond = check_diamond(&pt.tri, mu)?;
        report.record(
            "diamond_pattern",
            i as u64,
            diamond.violations.is_empty(),
            || {
                let mut v = ctx(i);
                v["violations"] = json!(diamond.violations);
                v
            },
        );
        let mut names: Vec<String> = pt.tri.interior_edges().map(|e| pt.name(e)).collect();
        names.sort();
        entries.push(PolygonEntry {
            diagonals: names,
            profile: qs(&profiles[i].0),
            total: total_weight(mu).to_string(),
            tt: check_tt_all(&pt.tri, mu),
            flips,
        });
    }
    report
        .notes
        .push("simplify_class_has_global_min is an empirical property".into());
    Ok(PolygonReport {
        n,
        report,
        entries,
        min_profile: qs(&min_profile.0),
        min_total: min_total.to_string(),
    })
}

// ---------------------------------------------------------------------------
// Random multicurves

/// Number of ends of each edge at every puncture: the measure of the collar
/// curve around that puncture.
pub fn collar_measures(tri: &Triangulation) -> Vec<Measure> {
    let cv = tri.corner_vertices();
    let nv = tri.vertex_count();
    let mut out = vec![vec![0i64; tri.edge_count()]; nv];
    for e in tri.edges() {
        let s = tri.key(e);
        out[cv[s]][e.0] += 1;
        out[cv[next_side(s)]][e.0] += 1;
    }
    out.iter().map(|m| Measure::from_ints(m)).collect()
}

/// Whether `mu` is the measure of a multicurve: integral, nonnegative, with
/// nonnegative integral corner coordinates.
pub fn is_multicurve_measure(tri: &Triangulation, mu: &Measure) -> bool {
    mu.is_nonnegative()
        && mu.values().iter().all(|v| v.is_integer())
        && corner_coordinates(tri, mu)
            .0
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
}

/// Multicurve measures in `tri`: the collars and, for each edge, the boundary of
/// a neighbourhood of the edge with its ends, whenever that is a multicurve.
pub fn seed_multicurves(tri: &Triangulation) -> Vec<Measure> {
    let collars = collar_measures(tri);
    let cv = tri.corner_vertices();
    let mut seeds = collars.clone();
    for e in tri.edges() {
        let s = tri.key(e);
        let (p, r) = (cv[s], cv[next_side(s)]);
        let mut m = if p == r {
            collars[p].scaled(&q(2))
        } else {
            collars[p].add(&collars[r])
        };
        m.set(e, &m[e] - q(2));
        if is_multicurve_measure(tri, &m) && !m.values().iter().all(|v| v.is_zero()) {
            seeds.push(m);
        }
    }
    seeds
}

/// A random multicurve: a nonnegative combination of seeds transported along
/// `flips` random flips. Returns the final triangulation with its measure.
pub fn random_multicurve<R: Rng>(
    tri: &Triangulation,
    rng: &mut R,
    flips: usize,
) -> Result<(Triangulation, Measure)> {
    let seeds = seed_multicurves(tri);
    let mut mu = Measure::zero(tri.edge_count());
    while mu.values().iter().all(|v| v.is_zero()) {
        for s in &seeds {
            let k = rng.gen_range(0..=2i64);
            if k > 0 {
                mu = mu.add(&s.scaled(&q(k)));
            }
        }
    }
    let mut t = tri.clone();
    for _ in 0..flips {
        let edges: Vec<EdgeId> = t.edges().filter(|&e| t.is_flippable(e)).collect();
        let e = edges[rng.gen_range(0..edges.len())];
        let (t2, m2) = tropical_ptolemy(&t, &mu, e)?;
        t = t2;
        mu = m2;
    }
    Ok((t, mu))
}

// ---------------------------------------------------------------------------
// Randomized property suite

#[derive(Clone, Debug)]
pub struct RandomConfig {
    /// Largest numerator before scaling; values lie in `[0, 2^bits]`.
    pub bits: u32,
    /// Run the decomposition round trip on every `k`-th trial (0 disables).
    pub decompose_every: u64,
    /// Trials per parallel work unit.
    pub chunk: u64,
}

impl Default for RandomConfig {
    fn default() -> Self {
        RandomConfig {
            bits: 20,
            decompose_every: 100,
            chunk: 512,
        }
    }
}

/// Generator for the trial with index `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Rational in `[0, 2^bits]` with denominator at most four.
pub fn random_rational<R: Rng>(rng: &mut R, bits: u32) -> Q {
    let den = rng.gen_range(1..=4i64);
    let num = rng.gen_range(0..=(den << bits));
    q_frac(num, den)
}

fn between<R: Rng>(rng: &mut R, lo: &Q, hi: &Q) -> Q {
    let k = rng.gen_range(0..=1024i64);
    lo + (hi - lo) * q_frac(k, 1024)
}

/// Random quad `(a, b, c, d, e)`; on odd draws both triangles are built to satisfy TT.
pub fn random_quad<R: Rng>(rng: &mut R, bits: u32) -> [Q; 5] {
    if rng.gen_bool(0.5) {
        return std::array::from_fn(|_| random_rational(rng, bits));
    }
    let top = q(1i64 << bits);
    let e = random_rational(rng, bits);
    let side = |rng: &mut R| -> (Q, Q) {
        match rng.gen_range(0..3) {
            0 => (e.clone(), between(rng, &Q::zero(), &e)),
            1 => (between(rng, &Q::zero(), &e), e.clone()),
            _ => {
                let x = between(rng, &e, &top);
                (x.clone(), x)
            }
        }
    };
    let (a, b) = side(rng);
    let (c, d) = side(rng);
    [a, b, c, d, e]
}

fn quad_json(v: &[Q]) -> Value {
    json!(qs(v))
}

struct Fixtures {
    surfaces: Vec<(&'static str, Triangulation)>,
    pentagon: PolygonTriangulation,
}

impl Fixtures {
    fn new() -> Self {
        Fixtures {
            surfaces: vec![
                ("torus", once_punctured_torus()),
                ("sphere4", four_punctured_sphere()),
                ("genus2", genus_two_one_puncture()),
            ],
            pentagon: pentagon_be_ce(),
        }
    }
}

fn signed_rational<R: Rng>(rng: &mut R) -> Q {
    q_frac(rng.gen_range(-4096..=4096), rng.gen_range(1..=6))
}

fn run_trial(fx: &Fixtures, config: &RandomConfig, seed: u64, i: u64) -> Result<TrialReport> {
    let mut rng = trial_rng(seed, i);
    let mut r = TrialReport::default();
    let bits = config.bits;

    // implications on a single quad
    let v = random_quad(&mut rng, bits);
    let [a, b, c, d, e] = &v;
    if check_tt(a, b, e) && check_tt(c, d, e) {
        r.record("tt_implies_tf", i, check_tf(a, b, c, d, e), || {
            quad_json(&v)
        });
        if v.iter().all(|x| x.is_positive()) {
            let cond = quad_conditions(&v);
            r.record("tt_implies_cf", i, cond.cf, || quad_json(&v));
            r.record("tt_positive_implies_ct", i, cond.ct, || quad_json(&v));
        }
    }

    // CF implies CT is a statement about a whole closed surface
    let (_, surface) = &fx.surfaces[(i % 2) as usize];
    let lam: Vec<Q> = (0..surface.edge_count())
        .map(|_| random_rational(&mut rng, bits))
        .collect();
    if lam.iter().all(|x| x.is_positive()) {
        let lambda =
            LambdaLengths::from_values(&lam.iter().map(hyperbolic_f64).collect::<Vec<_>>())?;
        if hyperbolic::check_cf_all(surface, &lambda, DEFAULT_TOL)? {
            let ct = (0..surface.triangle_count()).all(|t| {
                let [x, y, z] = surface.triangle_edges(t).map(|e| &lam[e.0]);
                check_ct(x, y, z)
            });
            r.record(
                "cf_implies_ct_positive",
                i,
                ct,
                || json!({ "surface": i % 2, "lambda": qs(&lam) }),
            );
        }
    }

    // flip involution on a random measure
    let (name, surface) = &fx.surfaces[rng.gen_range(0..fx.surfaces.len())];
    let mu = Measure::new(
        (0..surface.edge_count())
            .map(|_| signed_rational(&mut rng))
            .collect(),
    );
    let edges: Vec<EdgeId> = surface
        .edges()
        .filter(|&e| surface.is_flippable(e))
        .collect();
    let e = edges[rng.gen_range(0..edges.len())];
    let (t1, m1) = tropical_ptolemy(surface, &mu, e)?;
    let (t2, m2) = tropical_ptolemy(&t1, &m1, e)?;
    let ok = m2 == mu && t2.certificate_with(m2.values()) == surface.certificate_with(mu.values());
    r.record(
        "flip_involution",
        i,
        ok,
        || json!({ "surface": name, "measure": qs(mu.values()), "edge": e.0 }),
    );

    // pentagon relation: five alternating flips restore every chord value
    let p = &fx.pentagon;
    let pm = Measure::new(
        (0..p.tri.edge_count())
            .map(|_| signed_rational(&mut rng))
            .collect(),
    );
    let diag: Vec<EdgeId> = p.tri.interior_edges().collect();
    let (mut cur, mut cm) = (p.clone(), pm.clone());
    for k in 0..5 {
        let e = diag[k % 2];
        let (_, m) = tropical_ptolemy(&cur.tri, &cm, e)?;
        cur = cur.flip(e)?;
        cm = m;
    }
    let ok = chord_map(&cur, &cm) == chord_map(p, &pm);
    r.record(
        "pentagon_relation",
        i,
        ok,
        || json!({ "measure": qs(pm.values()) }),
    );

    // bands at the five corners give a cycle with one maximum and one minimum
    let w: Vec<Q> = (0..5).map(|_| random_rational(&mut rng, bits)).collect();
    let bm = polygon_oracle_measure(
        p,
        &PolygonInput::Bands {
            start: 0,
            weights: w.clone(),
        },
    )?;
    let classes: Vec<FlipClass> = pentagon_cycle(&State::new(p.tri.clone(), bm), diag[0], diag[1])?
        .into_iter()
        .map(|(_, c)| c)
        .collect();
    r.record(
        "pentagon_extrema",
        i,
        cycle_extrema(&classes) == (1, 1),
        || json!({ "bands": qs(&w) }),
    );

    // tropicalization: log_t of the classical flip tends to the tropical one
    let torus = &fx.surfaces[0].1;
    let tm = Measure::new((0..3).map(|_| random_rational(&mut rng, 6)).collect());
    let log_t = rng.gen_range(1.0..50.0);
    let lam = LambdaLengths::from_logs(
        tm.values()
            .iter()
            .map(|x| hyperbolic_f64(x) * log_t)
            .collect(),
    )?;
    let e = EdgeId(rng.gen_range(0..3));
    let (_, lf) = hyperbolic::classical_ptolemy(torus, &lam, e)?;
    let (_, mf) = tropical_ptolemy(torus, &tm, e)?;
    let gap = lf.log(e) - hyperbolic_f64(&mf[e]) * log_t;
    let slack = 1e-9 * (1.0 + (hyperbolic_f64(&mf[e]) * log_t).abs());
    let ok = gap >= -slack && gap <= std::f64::consts::LN_2 + slack;
    r.record(
        "tropicalization",
        i,
        ok,
        || json!({ "measure": qs(tm.values()), "log_t": log_t, "edge": e.0 }),
    );

    if config.decompose_every > 0 && i.is_multiple_of(config.decompose_every) {
        let (name, surface) = &fx.surfaces[rng.gen_range(0..fx.surfaces.len())];
        let (t, mu) = random_multicurve(surface, &mut rng, 12)?;
        let input =
            || json!({ "surface": name, "gluing": t.gluing_pairs(), "measure": qs(mu.values()) });
        match decompose_multicurve(&t, &mu) {
            Ok(mc) => {
                let back = measure_of_multicurve(&t, &mc)?;
                r.record("decompose_roundtrip", i, back == mu, input);
                r.record("tt_curve_bound", i, check_tt_bound(&t, &mc), input);
            }
            Err(_) => r.record("decompose_roundtrip", i, false, input),
        }
    }
    Ok(r)
}

pub fn random_property_suite(seed: u64, trials: u64) -> Result<TrialReport> {
    random_property_suite_with(seed, trials, &RandomConfig::default())
}

/// Runs `trials` independent trials in parallel. Trial `i` draws from
/// [`trial_rng`]`(seed, i)`, so the report does not depend on scheduling.
pub fn random_property_suite_with(
    seed: u64,
    trials: u64,
    config: &RandomConfig,
) -> Result<TrialReport> {
    let fx = Fixtures::new();
    let chunk = config.chunk.max(1);
    let starts: Vec<u64> = (0..trials).step_by(chunk as usize).collect();
    let parts: Vec<Result<TrialReport>> = starts
        .par_iter()
        .map(|&lo| {
            let mut part = TrialReport::default();
            for i in lo..(lo + chunk).min(trials) {
                part.absorb(run_trial(&fx, config, seed, i)?);
            }
            Ok(part)
        })
        .collect();
    let mut report = TrialReport::new(Some(seed), trials);
    for p in parts {
        report.absorb(p?);
    }
    // witnesses are deterministic and run once per report
    for (k, w) in non_implication_witnesses().iter().enumerate() {
        let v = w.values.map(q);
        let c = quad_conditions(&v);
        let ok = c.get(w.holds) == Some(true) && c.get(w.fails) == Some(false);
        report.record(
            "non_implication_witnesses",
            k as u64,
            ok,
            || json!({ "values": w.values, "holds": w.holds, "fails": w.fails }),
        );
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pentagon_bands_give_published_tuple() {
        let p = pentagon_be_ce();
        let input = PolygonInput::Bands {
            start: 1,
            weights: vec![q(7), q(8), q(2)],
        };
        let mu = polygon_oracle_measure(&p, &input).unwrap();
        let got: Vec<Q> = ["EA", "AB", "BC", "CD", "DE", "BE", "CE"]
            .iter()
            .map(|n| mu[p.edge(n).unwrap()].clone())
            .collect();
        assert_eq!(got, [0, 7, 15, 10, 2, 7, 8].map(q));
    }

    #[test]
    fn balanced_chords_by_scan() {
        let f = [3, 3, 1, 2, 2].map(q);
        // chord AC separates sides AB, BC from the rest
        assert_eq!(balanced_chord_value(&f, (0, 2)), q(2));
        assert_eq!(balanced_chord_value(&f, (2, 4)), q(2));
    }

    #[test]
    fn witnesses_hold() {
        for w in non_implication_witnesses() {
            let c = quad_conditions(&w.values.map(q));
            assert_eq!(c.get(w.holds), Some(true), "{:?}", w.values);
            assert_eq!(c.get(w.fails), Some(false), "{:?}", w.values);
        }
    }

    #[test]
    fn seeds_are_multicurves() {
        for (g, s) in [(1, 1), (0, 4), (2, 1)] {
            let t = crate::tri::surfaces::standard_surface(g, s).unwrap();
            let seeds = seed_multicurves(&t);
            assert!(seeds.len() > t.vertex_count(), "only collars on ({g},{s})");
            assert!(seeds.iter().all(|m| is_multicurve_measure(&t, m)));
        }
    }

    #[test]
    fn empty_suite_is_vacuous() {
        let r = random_property_suite(1, 0).unwrap();
        assert_eq!(r.trials, 0);
        assert!(r.all_passed());
    }

    #[test]
    fn small_suite_is_deterministic() {
        let cfg = RandomConfig {
            decompose_every: 10,
            chunk: 7,
            ..Default::default()
        };
        let a = random_property_suite_with(42, 60, &cfg).unwrap();
        let b = random_property_suite_with(42, 60, &RandomConfig { chunk: 60, ..cfg }).unwrap();
        assert_eq!(a, b);
        assert!(a.all_passed(), "{:?}", a.counterexample);
    }

    #[test]
    fn exhaustive_square_and_pentagon() {
        let r =
            polygon_exhaustive(4, &PolygonInput::Frontier([1, 3, 3, 2].map(q).to_vec())).unwrap();
        assert_eq!(r.entries.len(), 2);
        assert!(r.report.all_passed(), "{:?}", r.report);
        let r = polygon_exhaustive(
            5,
            &PolygonInput::Bands {
                start: 1,
                weights: vec![q(7), q(8), q(2)],
            },
        )
        .unwrap();
        assert_eq!(r.entries.len(), 5);
        assert!(r.report.all_passed(), "{:?}", r.report);
        assert!(polygon_exhaustive(11, &PolygonInput::Frontier(vec![q(1); 11])).is_err());
    }
}
