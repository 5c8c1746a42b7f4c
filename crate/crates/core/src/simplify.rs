//! Flip-based simplification of a triangulation against a fixed measure.
//!
//! A flip is classified by the larger perimeter of the two triangles it
//! changes: reducing if that maximum drops, neutral if it stays, increasing
//! otherwise. Simplification searches the class of states reachable through
//! neutral flips for a reducing flip, applies it, and repeats.

use std::collections::HashSet;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::measures::{
    check_tt_all, corner_coordinates, perimeter_profile, ptolemy_value, total_weight,
    tropical_ptolemy, Measure, PerimeterProfile, Q,
};
use crate::tri::{CanonicalCertificate, EdgeId, Triangulation};

fn max2(a: Q, b: Q) -> Q {
    if a >= b {
        a
    } else {
        b
    }
}

fn min2(a: Q, b: Q) -> Q {
    if a <= b {
        a
    } else {
        b
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FlipClass {
    Reducing,
    Neutral,
    Increasing,
}

/// Which comparison decides whether a flip is neutral.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum NeutralRule {
    /// Larger perimeter of the changed pair of triangles.
    #[default]
    PairMax,
    /// Whole sorted perimeter profile.
    FullProfile,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipClassification {
    pub class: FlipClass,
    /// `e + max(a + b, c + d)`.
    pub m_old: Q,
    /// `f + max(a + d, b + c)`.
    pub m_new: Q,
    pub f: Q,
    /// Corner-width form of the non-decreasing condition.
    pub corner_criterion: bool,
}

impl FlipClassification {
    pub fn is_non_decreasing(&self) -> bool {
        self.class != FlipClass::Reducing
    }
}

pub fn classify_values(a: &Q, b: &Q, c: &Q, d: &Q, e: &Q) -> FlipClassification {
    let f = ptolemy_value(a, b, c, d, e);
    let m_old = e + max2(a + b, c + d);
    let m_new = &f + max2(a + d, b + c);
    let class = match m_new.cmp(&m_old) {
        std::cmp::Ordering::Less => FlipClass::Reducing,
        std::cmp::Ordering::Equal => FlipClass::Neutral,
        std::cmp::Ordering::Greater => FlipClass::Increasing,
    };
    let lhs = min2(min2(a + e - b, e + d - c), min2(b + e - a, c + e - d));
    let rhs = min2(a + b - e, c + d - e);
    FlipClassification {
        class,
        m_old,
        m_new,
        f,
        corner_criterion: lhs <= rhs,
    }
}

pub fn classify_flip(tri: &Triangulation, mu: &Measure, e: EdgeId) -> Result<FlipClassification> {
    let q = tri.quad(e)?;
    let [a, b, c, d, ev] = mu.quad_values(&q);
    Ok(classify_values(&a, &b, &c, &d, &ev))
}

fn classify_with(
    rule: NeutralRule,
    tri: &Triangulation,
    mu: &Measure,
    e: EdgeId,
) -> Result<(FlipClass, Triangulation, Measure)> {
    let (t2, m2) = tropical_ptolemy(tri, mu, e)?;
    let class = match rule {
        NeutralRule::PairMax => classify_flip(tri, mu, e)?.class,
        NeutralRule::FullProfile => {
            match perimeter_profile(&t2, &m2).cmp(&perimeter_profile(tri, mu)) {
                std::cmp::Ordering::Less => FlipClass::Reducing,
                std::cmp::Ordering::Equal => FlipClass::Neutral,
                std::cmp::Ordering::Greater => FlipClass::Increasing,
            }
        }
    };
    Ok((class, t2, m2))
}

/// A triangulation together with its measure.
#[derive(Clone, Debug)]
pub struct State {
    pub tri: Triangulation,
    pub mu: Measure,
}

impl State {
    pub fn new(tri: Triangulation, mu: Measure) -> Self {
        State { tri, mu }
    }

    pub fn certificate(&self) -> CanonicalCertificate {
        self.tri.certificate_with(self.mu.values())
    }

    pub fn profile(&self) -> PerimeterProfile {
        perimeter_profile(&self.tri, &self.mu)
    }

    pub fn flip(&self, e: EdgeId) -> Result<State> {
        let (tri, mu) = tropical_ptolemy(&self.tri, &self.mu, e)?;
        Ok(State { tri, mu })
    }

    pub fn flippable(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.tri.edges().filter(|&e| self.tri.is_flippable(e))
    }
}

/// Flips applied in order, named by stable edge ids.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlipPath {
    pub start_certificate: CanonicalCertificate,
    pub flips: Vec<EdgeId>,
    pub end_certificate: CanonicalCertificate,
}

impl FlipPath {
    /// Replays the path, transporting the measure.
    pub fn replay(&self, tri: &Triangulation, mu: &Measure) -> Result<(Triangulation, Measure)> {
        let mut s = State::new(tri.clone(), mu.clone());
        for &e in &self.flips {
            s = s.flip(e)?;
        }
        Ok((s.tri, s.mu))
    }
}

#[derive(Clone, Debug)]
pub struct ClassMember {
    pub state: State,
    pub certificate: CanonicalCertificate,
    /// Neutral flips leading from the class root to this member.
    pub path: Vec<EdgeId>,
}

#[derive(Clone, Copy, Debug)]
pub struct SimplifyConfig {
    pub class_cap: usize,
    pub flip_cap: usize,
    pub rule: NeutralRule,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig {
            class_cap: 100_000,
            flip_cap: 1_000_000,
            rule: NeutralRule::PairMax,
        }
    }
}

/// Closure of a state under neutral flips, in breadth-first order.
pub fn neutral_class(
    tri: &Triangulation,
    mu: &Measure,
    config: &SimplifyConfig,
) -> Result<Vec<ClassMember>> {
    Ok(explore(tri, mu, config, false)?.members)
}

struct Exploration {
    members: Vec<ClassMember>,
    /// First member in breadth-first order with a reducing flip, the first
    /// such flip, and the state it leads to.
    reducing: Option<(usize, EdgeId, State)>,
}

/// Breadth-first walk over neutral flips. With `stop_at_reducing` the walk
/// ends at the first member that has a reducing flip; members before it in
/// the order are already fully examined, so the choice matches a scan of the
/// complete class.
fn explore(
    tri: &Triangulation,
    mu: &Measure,
    config: &SimplifyConfig,
    stop_at_reducing: bool,
) -> Result<Exploration> {
    mu.check_size(tri)?;
    let root = State::new(tri.clone(), mu.clone());
    let mut seen: HashSet<CanonicalCertificate> = HashSet::new();
    let cert = root.certificate();
    seen.insert(cert.clone());
    let mut members = vec![ClassMember {
        state: root,
        certificate: cert,
        path: Vec::new(),
    }];
    let mut i = 0;
    while i < members.len() {
        let edges: Vec<EdgeId> = members[i].state.flippable().collect();
        for e in edges {
            let s = &members[i].state;
            let (class, next) = match config.rule {
                NeutralRule::PairMax => match classify_flip(&s.tri, &s.mu, e)?.class {
                    FlipClass::Increasing => continue,
                    FlipClass::Reducing if !stop_at_reducing => continue,
                    c => (c, s.flip(e)?),
                },
                NeutralRule::FullProfile => {
                    let (c, t2, m2) = classify_with(config.rule, &s.tri, &s.mu, e)?;
                    (c, State::new(t2, m2))
                }
            };
            match class {
                FlipClass::Reducing if stop_at_reducing => {
                    return Ok(Exploration {
                        members,
                        reducing: Some((i, e, next)),
                    });
                }
                FlipClass::Neutral => {}
                _ => continue,
            }
            let cert = next.certificate();
            if seen.contains(&cert) {
                continue;
            }
            if members.len() >= config.class_cap {
                return Err(Error::CapExceeded(format!(
                    "neutral class exceeds {} members",
                    config.class_cap
                )));
            }
            let mut path = members[i].path.clone();
            path.push(e);
            seen.insert(cert.clone());
            members.push(ClassMember {
                state: next,
                certificate: cert,
                path,
            });
        }
        i += 1;
    }
    Ok(Exploration {
        members,
        reducing: None,
    })
}

/// Record of one reducing step of a simplification run.
#[derive(Clone, Debug)]
pub struct Step {
    pub neutral: Vec<EdgeId>,
    pub reducing: EdgeId,
    pub profile_before: PerimeterProfile,
    pub profile_after: PerimeterProfile,
}

#[derive(Clone, Debug)]
pub struct Simplified {
    pub tri: Triangulation,
    pub mu: Measure,
    pub path: FlipPath,
    pub steps: Vec<Step>,
    /// Neutral class of the final state.
    pub class: Vec<ClassMember>,
    /// Index of the returned state in `class`.
    pub chosen: usize,
}

fn best_member(class: &[ClassMember]) -> usize {
    let keyed: Vec<_> = class
        .iter()
        .map(|m| (m.state.profile(), total_weight(&m.state.mu), &m.certificate))
        .collect();
    (0..class.len())
        .min_by(|&i, &j| keyed[i].cmp(&keyed[j]))
        .expect("class is never empty")
}

pub fn simplify(tri: &Triangulation, mu: &Measure) -> Result<Simplified> {
    simplify_with(tri, mu, &SimplifyConfig::default())
}

pub fn simplify_with(
    tri: &Triangulation,
    mu: &Measure,
    config: &SimplifyConfig,
) -> Result<Simplified> {
    mu.check_size(tri)?;
    let start_certificate = tri.certificate();
    let mut flips = Vec::new();
    let mut steps = Vec::new();
    let mut cur = State::new(tri.clone(), mu.clone());
    loop {
        let Exploration {
            members: class,
            reducing: found,
        } = explore(&cur.tri, &cur.mu, config, true)?;
        match found {
            Some((i, e, next)) => {
                let member = &class[i];
                flips.extend_from_slice(&member.path);
                flips.push(e);
                if flips.len() > config.flip_cap {
                    return Err(Error::CapExceeded(format!(
                        "simplification exceeds {} flips",
                        config.flip_cap
                    )));
                }
                steps.push(Step {
                    neutral: member.path.clone(),
                    reducing: e,
                    profile_before: member.state.profile(),
                    profile_after: next.profile(),
                });
                cur = next;
            }
            None => {
                let b = best_member(&class);
                flips.extend_from_slice(&class[b].path);
                let out = class[b].state.clone();
                return Ok(Simplified {
                    path: FlipPath {
                        start_certificate,
                        flips,
                        end_certificate: out.tri.certificate(),
                    },
                    tri: out.tri,
                    mu: out.mu,
                    steps,
                    class,
                    chosen: b,
                });
            }
        }
    }
}

/// Searches for a triangulation on which the measure satisfies TT everywhere.
///
/// Requires a nonnegative measure with nonnegative corner coordinates.
pub fn find_tt_triangulation(tri: &Triangulation, mu: &Measure) -> Result<Simplified> {
    find_tt_triangulation_with(tri, mu, &SimplifyConfig::default())
}

pub fn find_tt_triangulation_with(
    tri: &Triangulation,
    mu: &Measure,
    config: &SimplifyConfig,
) -> Result<Simplified> {
    mu.check_size(tri)?;
    if !mu.is_nonnegative() || !corner_coordinates(tri, mu).all_nonnegative() {
        return Err(Error::Precondition(
            "measure needs nonnegative values and corner coordinates".into(),
        ));
    }
    let mut run = simplify_with(tri, mu, config)?;
    let mut rounds = 0usize;
    loop {
        let total = total_weight(&run.mu);
        let mut lower = None;
        'search: for m in &run.class {
            for e in m.state.flippable() {
                let next = m.state.flip(e)?;
                if total_weight(&next.mu) < total {
                    lower = Some((m.path.clone(), e, next));
                    break 'search;
                }
            }
        }
        let Some((to_member, e, next)) = lower else {
            break;
        };
        rounds += 1;
        if rounds > config.flip_cap {
            return Err(Error::CapExceeded(
                "total-weight descent does not settle".into(),
            ));
        }
        // neutral flips are involutions on edge ids, so walking back to the
        // class root and out to the member is a valid path
        let mut prefix = run.path.clone();
        prefix.flips.extend(run.class[run.chosen].path.iter().rev());
        prefix.flips.extend_from_slice(&to_member);
        prefix.flips.push(e);
        let again = simplify_with(&next.tri, &next.mu, config)?;
        prefix.flips.extend_from_slice(&again.path.flips);
        prefix.end_certificate = again.path.end_certificate.clone();
        let mut steps = run.steps;
        steps.extend(again.steps);
        run = Simplified {
            tri: again.tri,
            mu: again.mu,
            path: prefix,
            steps,
            class: again.class,
            chosen: again.chosen,
        };
    }
    if !check_tt_all(&run.tri, &run.mu) {
        return Err(Error::TtNotAchievable(format!(
            "no TT triangulation found; profile at the minimum is {}",
            run.mu
        )));
    }
    Ok(run)
}

/// Outcome of a diamond check.
#[derive(Clone, Debug, Default)]
pub struct DiamondReport {
    pub configurations: usize,
    pub violations: Vec<String>,
}

/// Number of local maxima and minima on a cycle of states whose consecutive
/// flips carry the given classes (`classes[i]` is the flip from state `i` to
/// state `i + 1`). Neutral flips merge states into one plateau.
pub fn cycle_extrema(classes: &[FlipClass]) -> (usize, usize) {
    // signs of the comparisons between consecutive plateaus
    let dirs: Vec<i8> = classes
        .iter()
        .filter_map(|c| match c {
            FlipClass::Reducing => Some(-1),
            FlipClass::Increasing => Some(1),
            FlipClass::Neutral => None,
        })
        .collect();
    if dirs.is_empty() {
        return (1, 1);
    }
    let n = dirs.len();
    let mut maxima = 0;
    let mut minima = 0;
    for i in 0..n {
        let (before, after) = (dirs[(i + n - 1) % n], dirs[i]);
        if before > 0 && after < 0 {
            maxima += 1;
        }
        if before < 0 && after > 0 {
            minima += 1;
        }
    }
    (maxima, minima)
}

/// Walks the 5-cycle of an embedded pentagon spanned by the flips `e1`, `e2`.
pub fn pentagon_cycle(state: &State, e1: EdgeId, e2: EdgeId) -> Result<Vec<(State, FlipClass)>> {
    let mut out = Vec::with_capacity(5);
    let mut cur = state.clone();
    for k in 0..5 {
        let e = if k % 2 == 0 { e1 } else { e2 };
        let class = classify_flip(&cur.tri, &cur.mu, e)?.class;
        let next = cur.flip(e)?;
        out.push((cur, class));
        cur = next;
    }
    Ok(out)
}

fn quad_triangles(tri: &Triangulation, e: EdgeId) -> [usize; 2] {
    let (s, p) = tri.sides_of(e);
    [s / 3, p.expect("interior") / 3]
}

/// Checks every pair of reducing flips at a state against the case analysis
/// behind the diamond argument.
///
/// Disjoint quadrilaterals must commute with both orders reducing. Quadrilaterals
/// sharing one triangle span a pentagon whose 5-cycle must have a single maximum
/// and a single minimum. Quadrilaterals sharing both triangles cannot both reduce.
pub fn check_diamond(tri: &Triangulation, mu: &Measure) -> Result<DiamondReport> {
    let state = State::new(tri.clone(), mu.clone());
    let reducing: Vec<EdgeId> = state
        .flippable()
        .filter(|&e| matches!(classify_flip(tri, mu, e), Ok(c) if c.class == FlipClass::Reducing))
        .collect();
    let mut report = DiamondReport::default();
    for (i, &e1) in reducing.iter().enumerate() {
        for &e2 in &reducing[i + 1..] {
            report.configurations += 1;
            let (q1, q2) = (quad_triangles(tri, e1), quad_triangles(tri, e2));
            let shared = q1.iter().filter(|t| q2.contains(t)).count();
            match shared {
                0 => {
                    let s12 = state.flip(e1)?;
                    let s21 = state.flip(e2)?;
                    let c12 = classify_flip(&s12.tri, &s12.mu, e2)?.class;
                    let c21 = classify_flip(&s21.tri, &s21.mu, e1)?.class;
                    let a = s12.flip(e2)?;
                    let b = s21.flip(e1)?;
                    if c12 != FlipClass::Reducing || c21 != FlipClass::Reducing {
                        report
                            .violations
                            .push(format!("disjoint flips {e1}, {e2} stop reducing"));
                    }
                    if a.certificate() != b.certificate() {
                        report
                            .violations
                            .push(format!("disjoint flips {e1}, {e2} do not commute"));
                    }
                }
                1 => {
                    let classes: Vec<FlipClass> = pentagon_cycle(&state, e1, e2)?
                        .into_iter()
                        .map(|(_, c)| c)
                        .collect();
                    let (mx, mn) = cycle_extrema(&classes);
                    if mx != 1 || mn != 1 {
                        report.violations.push(format!(
                            "pentagon on {e1}, {e2} has {mx} maxima and {mn} minima"
                        ));
                    }
                }
                _ => report.violations.push(format!(
                    "flips {e1}, {e2} share both triangles and both reduce"
                )),
            }
        }
    }
    Ok(report)
}

/// Perimeter-profile descent check of a path: reducing steps must strictly
/// lower the profile.
pub fn profiles_decrease(steps: &[Step]) -> bool {
    steps.iter().all(|s| s.profile_after < s.profile_before)
}

/// Whether every value is an integer multiple of `1/den`.
pub fn has_denominator(mu: &Measure, den: &num_bigint::BigInt) -> bool {
    mu.values()
        .iter()
        .all(|v| (v * Q::from_integer(den.clone())).is_integer() && !v.is_negative())
}
