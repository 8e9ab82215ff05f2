//! Numeric execution of construction plans.
//!
//! Every step offers one or more *roots*. Steps with two or more roots are
//! decision points; a [`BranchSelector`] picks one root per decision point,
//! in plan order, defaulting to root 0. Roots are ordered by polar angle
//! around the first circle involved (else lexicographically by coordinates)
//! and lines by `(θ, c)`, so a selector means the same thing on every run.
//!
//! Two failure modes are detected while building:
//!
//! * [`ExecError::EmptyIntersection`]: the loci of a step do not meet;
//! * [`ExecError::UnderDetermined`]: the equations of a step leave the
//!   target free to move, e.g. a line fixed by two angles.
//!
//! A root where two intersection points merge (a tangency) counts as one
//! root and the placed entity is listed in [`Solution::degenerate`].

mod loci;
mod measure;

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::decomp::{Plan, Step};
use crate::geom::{
    fold_angle, intersect_circle_circle, line_angle, rigid_align, CircleRep, GeomError, LineRep,
    Motion, Placement, Point2, EPS,
};
use crate::graph::{ConstraintGraph, ConstraintKind, EntityKind};

use loci::{line_roots, point_roots, Root};
pub use measure::{congruent, measure};

/// Default residual tolerance.
pub const TOL: f64 = 1e-9;

/// One root index per decision point.
pub type BranchSelector = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Solution {
    pub placements: BTreeMap<String, Placement>,
    pub branches: BranchSelector,
    /// Entities placed on a tangent (double) root.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub degenerate: Vec<String>,
}

impl Solution {
    /// Whether both solutions place every entity within `tol` of each other.
    pub fn approx_eq(&self, o: &Solution, tol: f64) -> bool {
        self.placements.len() == o.placements.len()
            && self
                .placements
                .iter()
                .all(|(k, p)| o.placements.get(k).is_some_and(|q| p.approx_eq(q, tol)))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    /// Measured minus specified, one entry per constraint.
    pub residuals: Vec<f64>,
    pub max_abs: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExecError {
    #[error("loci placing '{entity}' do not intersect")]
    EmptyIntersection { entity: String },
    #[error("'{entity}' is not determined by its construction step")]
    UnderDetermined { entity: String },
    #[error("unsupported construction step: {0}")]
    UnsupportedStep(String),
    #[error("branch {choice} at decision point {position} is out of range ({available} roots)")]
    BadBranch {
        position: usize,
        choice: usize,
        available: usize,
    },
    #[error("no placement for '{0}'")]
    MissingPlacement(String),
    #[error("construction is inconsistent (residual {max_abs:e})")]
    Inconsistent { max_abs: f64 },
}

impl ExecError {
    /// Stable snake_case code for machine-readable output.
    pub fn reason(&self) -> &'static str {
        match self {
            ExecError::EmptyIntersection { .. } => "empty_intersection",
            ExecError::UnderDetermined { .. } => "under_determined",
            ExecError::UnsupportedStep(_) => "unsupported_step",
            ExecError::BadBranch { .. } => "bad_branch",
            ExecError::MissingPlacement(_) => "missing_placement",
            ExecError::Inconsistent { .. } => "inconsistent",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExecConfig {
    /// Separates tangent from transversal and empty intersections.
    pub eps: f64,
    /// Largest residual a returned solution may have.
    pub tol: f64,
}

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig { eps: EPS, tol: TOL }
    }
}

type Frame = BTreeMap<String, Placement>;

#[derive(Debug, Clone, Default)]
struct State {
    frames: BTreeMap<usize, Frame>,
    degenerate: BTreeSet<String>,
}

#[derive(Debug, Clone)]
enum Edit {
    Open {
        frame: usize,
        entries: Vec<(String, Placement)>,
    },
    Place {
        frame: usize,
        id: String,
        placement: Placement,
    },
    Merge {
        into: usize,
        from: usize,
        motion: Motion,
    },
}

#[derive(Debug, Clone)]
struct Choice {
    edit: Edit,
    degenerate: Option<String>,
}

impl State {
    fn frame(&self, f: usize) -> Result<&Frame, ExecError> {
        self.frames
            .get(&f)
            .ok_or_else(|| ExecError::UnsupportedStep(format!("frame {f} is not open")))
    }

    fn get(&self, f: usize, id: &str) -> Result<Placement, ExecError> {
        self.frame(f)?
            .get(id)
            .copied()
            .ok_or_else(|| ExecError::MissingPlacement(id.to_string()))
    }

    fn apply(&mut self, choice: Choice) {
        if let Some(id) = choice.degenerate {
            self.degenerate.insert(id);
        }
        match choice.edit {
            Edit::Open { frame, entries } => {
                self.frames.insert(frame, entries.into_iter().collect());
            }
            Edit::Place {
                frame,
                id,
                placement,
            } => {
                self.frames.entry(frame).or_default().insert(id, placement);
            }
            Edit::Merge { into, from, motion } => {
                let src = self.frames.remove(&from).unwrap_or_default();
                let dst = self.frames.entry(into).or_default();
                for (id, p) in src {
                    dst.entry(id).or_insert_with(|| motion.apply(&p));
                }
            }
        }
    }
}

/// Run `plan` choosing roots by `branches`.
pub fn execute(
    plan: &Plan,
    g: &ConstraintGraph,
    branches: &[usize],
) -> Result<Solution, ExecError> {
    execute_with(plan, g, branches, &ExecConfig::default())
}

pub fn execute_with(
    plan: &Plan,
    g: &ConstraintGraph,
    branches: &[usize],
    cfg: &ExecConfig,
) -> Result<Solution, ExecError> {
    let mut state = State::default();
    let mut taken = Vec::new();
    for step in &plan.steps {
        let mut roots = choices(g, &state, step, cfg)?;
        let pick = if roots.len() > 1 {
            let position = taken.len();
            let choice = branches.get(position).copied().unwrap_or(0);
            if choice >= roots.len() {
                return Err(ExecError::BadBranch {
                    position,
                    choice,
                    available: roots.len(),
                });
            }
            taken.push(choice);
            choice
        } else {
            0
        };
        state.apply(roots.swap_remove(pick));
    }
    if branches.len() > taken.len() {
        return Err(ExecError::BadBranch {
            position: taken.len(),
            choice: branches[taken.len()],
            available: 0,
        });
    }
    finish(plan, g, state, taken, cfg)
}

fn finish(
    plan: &Plan,
    g: &ConstraintGraph,
    mut state: State,
    branches: BranchSelector,
    cfg: &ExecConfig,
) -> Result<Solution, ExecError> {
    let placements = state.frames.remove(&plan.root_frame).unwrap_or_default();
    let solution = Solution {
        placements,
        branches,
        degenerate: state.degenerate.into_iter().collect(),
    };
    let report = verify(g, &solution, cfg.tol)?;
    if !report.pass {
        return Err(ExecError::Inconsistent {
            max_abs: report.max_abs,
        });
    }
    Ok(solution)
}

/// Depth-first enumeration of branch assignments, at most `limit` distinct
/// solutions. If no branch succeeds, the first failure is returned.
pub fn enumerate_solutions(
    plan: &Plan,
    g: &ConstraintGraph,
    limit: usize,
) -> Result<Vec<(BranchSelector, Solution)>, ExecError> {
    enumerate_with(plan, g, limit, &ExecConfig::default())
}

pub fn enumerate_with(
    plan: &Plan,
    g: &ConstraintGraph,
    limit: usize,
    cfg: &ExecConfig,
) -> Result<Vec<(BranchSelector, Solution)>, ExecError> {
    let mut search = Search {
        plan,
        g,
        cfg,
        limit,
        found: Vec::new(),
        first_error: None,
    };
    search.dfs(0, State::default(), Vec::new());
    match (search.found.is_empty(), search.first_error) {
        (true, Some(e)) => Err(e),
        _ => Ok(search
            .found
            .into_iter()
            .map(|s| (s.branches.clone(), s))
            .collect()),
    }
}

struct Search<'a> {
    plan: &'a Plan,
    g: &'a ConstraintGraph,
    cfg: &'a ExecConfig,
    limit: usize,
    found: Vec<Solution>,
    first_error: Option<ExecError>,
}

impl Search<'_> {
    fn fail(&mut self, e: ExecError) {
        self.first_error.get_or_insert(e);
    }

    fn dfs(&mut self, at: usize, state: State, taken: BranchSelector) {
        if self.found.len() >= self.limit {
            return;
        }
        let Some(step) = self.plan.steps.get(at) else {
            match finish(self.plan, self.g, state, taken, self.cfg) {
                Ok(s) => {
                    if !self
                        .found
                        .iter()
                        .any(|f| f.approx_eq(&s, 1e3 * self.cfg.eps))
                    {
                        self.found.push(s);
                    }
                }
                Err(e) => self.fail(e),
            }
            return;
        };
        let roots = match choices(self.g, &state, step, self.cfg) {
            Ok(r) => r,
            Err(e) => return self.fail(e),
        };
        let branching = roots.len() > 1;
        for (i, root) in roots.into_iter().enumerate() {
            let mut next = state.clone();
            next.apply(root);
            let mut path = taken.clone();
            if branching {
                path.push(i);
            }
            self.dfs(at + 1, next, path);
        }
    }
}

fn choices(
    g: &ConstraintGraph,
    state: &State,
    step: &Step,
    cfg: &ExecConfig,
) -> Result<Vec<Choice>, ExecError> {
    match step {
        Step::Base { frame, constraint } => base_choices(g, *frame, *constraint, cfg),
        Step::PlaceByTwoLoci {
            frame,
            target,
            constraints,
        } => {
            let entity = g
                .entity(target)
                .ok_or_else(|| ExecError::MissingPlacement(target.clone()))?;
            let cs = [
                &g.constraints()[constraints[0]],
                &g.constraints()[constraints[1]],
            ];
            let roots: Vec<Root> = match entity.kind {
                EntityKind::Point => point_roots(state, *frame, target, cs, None, cfg)?
                    .into_iter()
                    .map(|(p, d)| (Placement::Point(p), d))
                    .collect(),
                EntityKind::Circle { radius_known: true } => {
                    let r = entity.radius.unwrap_or_default();
                    point_roots(state, *frame, target, cs, Some(r), cfg)?
                        .into_iter()
                        .map(|(c, d)| (Placement::Circle(CircleRep::new(c, r)), d))
                        .collect()
                }
                EntityKind::Circle {
                    radius_known: false,
                } => {
                    return Err(ExecError::UnderDetermined {
                        entity: target.clone(),
                    })
                }
                EntityKind::Line => line_roots(state, *frame, target, cs, cfg)?
                    .into_iter()
                    .map(|(l, d)| (Placement::Line(l), d))
                    .collect(),
            };
            Ok(roots
                .into_iter()
                .map(|(placement, degenerate)| Choice {
                    edit: Edit::Place {
                        frame: *frame,
                        id: target.clone(),
                        placement,
                    },
                    degenerate: degenerate.then(|| target.clone()),
                })
                .collect())
        }
        Step::TriangleMerge {
            frame,
            points,
            distances,
        } => {
            let measure = |i: usize| -> Result<f64, ExecError> {
                let v = &distances[i];
                let a = point_in(state, v.frame, &v.a)?;
                let b = point_in(state, v.frame, &v.b)?;
                Ok(a.dist(b))
            };
            let (d01, d02, d12) = (measure(0)?, measure(1)?, measure(2)?);
            if d01 <= cfg.eps {
                return Err(ExecError::UnderDetermined {
                    entity: points[1].clone(),
                });
            }
            let p0 = Point2::ORIGIN;
            let p1 = Point2::new(d01, 0.0);
            let third = intersect_circle_circle(
                &CircleRep::new(p0, d02),
                &CircleRep::new(p1, d12),
                cfg.eps,
            )
            .map_err(|e| geom_error(e, &points[2]))?;
            let degenerate = third.is_degenerate();
            let mut roots = third.points();
            loci::sort_points(&mut roots, Some(p0));
            Ok(roots
                .into_iter()
                .map(|p2| Choice {
                    edit: Edit::Open {
                        frame: *frame,
                        entries: vec![
                            (points[0].clone(), Placement::Point(p0)),
                            (points[1].clone(), Placement::Point(p1)),
                            (points[2].clone(), Placement::Point(p2)),
                        ],
                    },
                    degenerate: degenerate.then(|| points[2].clone()),
                })
                .collect())
        }
        Step::AlignCluster { into, from, pair } => align_choices(state, *into, *from, pair, cfg),
    }
}

fn point_in(state: &State, frame: usize, id: &str) -> Result<Point2, ExecError> {
    state
        .get(frame, id)?
        .as_point()
        .ok_or_else(|| ExecError::UnsupportedStep(format!("'{id}' is not a point")))
}

fn geom_error(e: GeomError, entity: &str) -> ExecError {
    match e {
        GeomError::Coincident | GeomError::CoincidentPoints => ExecError::UnderDetermined {
            entity: entity.to_string(),
        },
        GeomError::EmptyIntersection | GeomError::Parallel => ExecError::EmptyIntersection {
            entity: entity.to_string(),
        },
        GeomError::LengthMismatch(a, b) => ExecError::Inconsistent {
            max_abs: (a - b).abs(),
        },
        GeomError::BadValue(msg) => ExecError::UnsupportedStep(msg),
    }
}

const X_AXIS: LineRep = LineRep {
    theta: std::f64::consts::FRAC_PI_2,
    c: 0.0,
};

/// Canonical placements for the two entities of one constraint.
fn base_choices(
    g: &ConstraintGraph,
    frame: usize,
    ci: usize,
    cfg: &ExecConfig,
) -> Result<Vec<Choice>, ExecError> {
    let c = &g.constraints()[ci];
    let (a, b) = (&c.between.0, &c.between.1);
    let ea = g
        .entity(a)
        .ok_or_else(|| ExecError::MissingPlacement(a.clone()))?;
    let eb = g
        .entity(b)
        .ok_or_else(|| ExecError::MissingPlacement(b.clone()))?;
    for e in [ea, eb] {
        if e.kind
            == (EntityKind::Circle {
                radius_known: false,
            })
        {
            return Err(ExecError::UnderDetermined {
                entity: e.id.clone(),
            });
        }
    }
    let radius = |id: &str| g.entity(id).and_then(|e| e.radius).unwrap_or_default();
    let pt = |x: f64, y: f64| Placement::Point(Point2::new(x, y));
    let circle = |x: f64, y: f64, r: f64| Placement::Circle(CircleRep::new(Point2::new(x, y), r));
    // Orient a (point-like, line-like) pair back to constraint order.
    let ordered = |first_is_a: bool, p: Placement, q: Placement| {
        if first_is_a {
            vec![(a.clone(), p), (b.clone(), q)]
        } else {
            vec![(b.clone(), p), (a.clone(), q)]
        }
    };

    let options: Vec<Vec<(String, Placement)>> = match c.kind {
        ConstraintKind::Distance(d) => {
            vec![vec![(a.clone(), pt(0.0, 0.0)), (b.clone(), pt(d, 0.0))]]
        }
        ConstraintKind::Incidence if ea.kind.is_line() || eb.kind.is_line() => {
            let point_first = !ea.kind.is_line();
            vec![ordered(point_first, pt(0.0, 0.0), Placement::Line(X_AXIS))]
        }
        ConstraintKind::Incidence => {
            // Point on a known circle.
            let (pid, kid) = if ea.kind.is_point() { (a, b) } else { (b, a) };
            let r = radius(kid);
            let first_is_point = pid == a;
            let entries = if first_is_point {
                vec![
                    (pid.clone(), pt(0.0, 0.0)),
                    (kid.clone(), circle(r, 0.0, r)),
                ]
            } else {
                vec![
                    (kid.clone(), circle(0.0, 0.0, r)),
                    (pid.clone(), pt(r, 0.0)),
                ]
            };
            vec![entries]
        }
        ConstraintKind::PointLineDistance(d) => {
            let point_first = ea.kind.is_point();
            let mut out = vec![ordered(point_first, pt(0.0, d), Placement::Line(X_AXIS))];
            if d > cfg.eps {
                out.push(ordered(point_first, pt(0.0, -d), Placement::Line(X_AXIS)));
            }
            out
        }
        ConstraintKind::Angle(alpha) => {
            let mut out: Vec<Vec<(String, Placement)>> = Vec::new();
            let mut seen: Vec<LineRep> = Vec::new();
            for branch in [0, 1] {
                let l =
                    crate::geom::line_through_point_angle(Point2::ORIGIN, &X_AXIS, alpha, branch)
                        .map_err(|e| geom_error(e, b))?;
                if seen.iter().any(|s| s.approx_eq(&l, cfg.eps)) {
                    continue;
                }
                seen.push(l);
                out.push(vec![
                    (a.clone(), Placement::Line(X_AXIS)),
                    (b.clone(), Placement::Line(l)),
                ]);
            }
            out
        }
        ConstraintKind::Tangency if ea.kind.is_line() || eb.kind.is_line() => {
            let (kid, line_first) = if ea.kind.is_line() {
                (b, true)
            } else {
                (a, false)
            };
            let r = radius(kid);
            [r, -r]
                .into_iter()
                .map(|y| ordered(line_first, Placement::Line(X_AXIS), circle(0.0, y, r)))
                .collect()
        }
        ConstraintKind::Tangency => {
            let (ra, rb) = (radius(a), radius(b));
            let mut out = vec![vec![
                (a.clone(), circle(0.0, 0.0, ra)),
                (b.clone(), circle(ra + rb, 0.0, rb)),
            ]];
            if (ra - rb).abs() > cfg.eps {
                out.push(vec![
                    (a.clone(), circle(0.0, 0.0, ra)),
                    (b.clone(), circle((ra - rb).abs(), 0.0, rb)),
                ]);
            }
            out
        }
    };
    Ok(options
        .into_iter()
        .map(|entries| Choice {
            edit: Edit::Open { frame, entries },
            degenerate: None,
        })
        .collect())
}

/// Motions carrying frame `from` onto `into` through the shared pair; mirror
/// images are separate roots unless they coincide.
fn align_choices(
    state: &State,
    into: usize,
    from: usize,
    pair: &(String, String),
    cfg: &ExecConfig,
) -> Result<Vec<Choice>, ExecError> {
    let src = state.frame(from)?;
    let (sa, sb) = (state.get(from, &pair.0)?, state.get(from, &pair.1)?);
    let (da, db) = (state.get(into, &pair.0)?, state.get(into, &pair.1)?);

    // Matched point pairs (source, destination) candidates.
    let mut matches: Vec<((Point2, Point2), (Point2, Point2))> = Vec::new();
    match (sa, sb, da, db) {
        (Placement::Point(p), Placement::Point(q), Placement::Point(p2), Placement::Point(q2)) => {
            matches.push(((p, q), (p2, q2)));
        }
        (Placement::Point(p), Placement::Line(l), Placement::Point(p2), Placement::Line(l2)) => {
            let (s, s2) = (l.signed_distance(p), l2.signed_distance(p2));
            if (s.abs() - s2.abs()).abs() > cfg.tol.max(cfg.eps) {
                return Err(ExecError::Inconsistent {
                    max_abs: (s.abs() - s2.abs()).abs(),
                });
            }
            if s.abs() > cfg.eps {
                matches.push(((p, l.foot(p)), (p2, l2.foot(p2))));
            } else {
                for sign in [1.0, -1.0] {
                    matches.push(((p, p + l.direction()), (p2, p2 + sign * l2.direction())));
                }
            }
        }
        _ => {
            return Err(ExecError::UnsupportedStep(format!(
                "cannot align on ({}, {})",
                pair.0, pair.1
            )))
        }
    }

    let mirrors = if src.len() > 2 {
        vec![false, true]
    } else {
        vec![false]
    };
    let mut images: Vec<Frame> = Vec::new();
    let mut out = Vec::new();
    for (s, d) in matches {
        for &reflect in &mirrors {
            let motion = rigid_align(s, d, reflect).map_err(|e| geom_error(e, &pair.1))?;
            let image: Frame = src
                .iter()
                .map(|(k, p)| (k.clone(), motion.apply(p)))
                .collect();
            let same = |f: &Frame| f.iter().all(|(k, p)| image[k].approx_eq(p, 1e3 * cfg.eps));
            if images.iter().any(same) {
                continue;
            }
            images.push(image);
            out.push(Choice {
                edit: Edit::Merge { into, from, motion },
                degenerate: None,
            });
        }
    }
    Ok(out)
}

/// Residual of every constraint under `s`.
pub fn verify(g: &ConstraintGraph, s: &Solution, tol: f64) -> Result<ResidualReport, ExecError> {
    let at = |id: &str| {
        s.placements
            .get(id)
            .copied()
            .ok_or_else(|| ExecError::MissingPlacement(id.to_string()))
    };
    for e in g.entities() {
        let p = at(&e.id)?;
        let kind_ok = match e.kind {
            EntityKind::Point => p.as_point().is_some(),
            EntityKind::Line => p.as_line().is_some(),
            EntityKind::Circle { .. } => p.as_circle().is_some(),
        };
        if !kind_ok {
            return Err(ExecError::MissingPlacement(e.id.clone()));
        }
    }
    let mut residuals = Vec::with_capacity(g.m());
    for c in g.constraints() {
        let (pa, pb) = (at(&c.between.0)?, at(&c.between.1)?);
        residuals.push(residual(&c.kind, pa, pb));
    }
    // A known radius is part of the entity, not of any constraint.
    let mut max_abs = residuals.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    for e in g.entities() {
        if let (Some(r), Some(k)) = (e.radius, at(&e.id)?.as_circle()) {
            max_abs = max_abs.max((k.r - r).abs());
        }
    }
    Ok(ResidualReport {
        residuals,
        max_abs,
        pass: max_abs <= tol,
    })
}

fn residual(kind: &ConstraintKind, a: Placement, b: Placement) -> f64 {
    use Placement::{Circle, Line, Point};
    match (kind, a, b) {
        (ConstraintKind::Distance(d), Point(p), Point(q)) => p.dist(q) - d,
        (ConstraintKind::PointLineDistance(d), Point(p), Line(l))
        | (ConstraintKind::PointLineDistance(d), Line(l), Point(p)) => {
            l.signed_distance(p).abs() - d
        }
        (ConstraintKind::Incidence, Point(p), Line(l))
        | (ConstraintKind::Incidence, Line(l), Point(p)) => l.signed_distance(p).abs(),
        (ConstraintKind::Incidence, Point(p), Circle(k))
        | (ConstraintKind::Incidence, Circle(k), Point(p)) => (p.dist(k.center) - k.r).abs(),
        (ConstraintKind::Angle(alpha), Line(l1), Line(l2)) => {
            line_angle(&l1, &l2) - fold_angle(*alpha)
        }
        (ConstraintKind::Tangency, Line(l), Circle(k))
        | (ConstraintKind::Tangency, Circle(k), Line(l)) => l.signed_distance(k.center).abs() - k.r,
        (ConstraintKind::Tangency, Circle(k1), Circle(k2)) => {
            let d = k1.center.dist(k2.center);
            let outer = d - (k1.r + k2.r);
            let inner = d - (k1.r - k2.r).abs();
            if outer.abs() <= inner.abs() {
                outer
            } else {
                inner
            }
        }
        _ => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests;
