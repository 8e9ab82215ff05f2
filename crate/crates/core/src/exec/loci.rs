//! Loci imposed on a target entity by constraints against placed entities,
//! and their intersections.

use std::cmp::Ordering;
use std::f64::consts::TAU;

use super::{geom_error, ExecConfig, ExecError, State};
use crate::geom::{
    intersect_circle_circle, intersect_line_circle, intersect_line_line, line_through_point_angle,
    line_through_points, tangents_from_point, CircleRep, GeomError, LineRep, Placement, Point2,
};
use crate::graph::{Constraint, ConstraintKind};

/// A placement together with its tangency flag.
pub(super) type Root = (Placement, bool);

#[derive(Debug, Clone, Copy)]
enum Curve {
    Line(LineRep),
    Circle(CircleRep),
}

fn other<'a>(c: &'a Constraint, target: &str) -> &'a str {
    c.other(target).unwrap_or(&c.between.0)
}

fn unsupported(c: &Constraint, target: &str) -> ExecError {
    ExecError::UnsupportedStep(format!(
        "{} between '{}' and '{}' cannot place '{target}'",
        c.kind.name(),
        c.between.0,
        c.between.1
    ))
}

/// Alternative curves carrying a point target, or the centre of a circle
/// target of known radius `radius`.
fn point_locus(
    state: &State,
    frame: usize,
    target: &str,
    c: &Constraint,
    radius: Option<f64>,
    cfg: &ExecConfig,
) -> Result<Vec<Curve>, ExecError> {
    let placed = state.get(frame, other(c, target))?;
    let lines = |l: LineRep, d: f64| {
        if d <= cfg.eps {
            vec![Curve::Line(l)]
        } else {
            vec![Curve::Line(l.offset(d)), Curve::Line(l.offset(-d))]
        }
    };
    Ok(match (radius, c.kind, placed) {
        (None, ConstraintKind::Distance(d), Placement::Point(p)) => {
            vec![Curve::Circle(CircleRep::new(p, d))]
        }
        (None, ConstraintKind::Incidence, Placement::Line(l)) => vec![Curve::Line(l)],
        (None, ConstraintKind::Incidence, Placement::Circle(k)) => vec![Curve::Circle(k)],
        (None, ConstraintKind::PointLineDistance(d), Placement::Line(l)) => lines(l, d),
        (Some(r), ConstraintKind::Incidence, Placement::Point(p)) => {
            vec![Curve::Circle(CircleRep::new(p, r))]
        }
        (Some(r), ConstraintKind::Tangency, Placement::Line(l)) => lines(l, r),
        (Some(r), ConstraintKind::Tangency, Placement::Circle(k)) => {
            let mut out = vec![Curve::Circle(CircleRep::new(k.center, r + k.r))];
            if (r - k.r).abs() > cfg.eps {
                out.push(Curve::Circle(CircleRep::new(k.center, (r - k.r).abs())));
            }
            out
        }
        _ => return Err(unsupported(c, target)),
    })
}

enum Meet {
    Points(Vec<Point2>, bool),
    Nothing,
    Continuum,
}

fn meet(a: Curve, b: Curve, eps: f64) -> Meet {
    let from = |r: Result<crate::geom::Intersection, GeomError>| match r {
        Ok(i) => Meet::Points(i.points(), i.is_degenerate()),
        Err(GeomError::Coincident) => Meet::Continuum,
        Err(_) => Meet::Nothing,
    };
    match (a, b) {
        (Curve::Line(l1), Curve::Line(l2)) => match intersect_line_line(&l1, &l2, eps) {
            Ok(p) => Meet::Points(vec![p], false),
            Err(_) if l1.approx_eq(&l2, eps) => Meet::Continuum,
            Err(_) => Meet::Nothing,
        },
        (Curve::Line(l), Curve::Circle(k)) | (Curve::Circle(k), Curve::Line(l)) => {
            from(intersect_line_circle(&l, &k, eps))
        }
        (Curve::Circle(k1), Curve::Circle(k2)) => from(intersect_circle_circle(&k1, &k2, eps)),
    }
}

/// Order points by polar angle in `[0, 2π)` around `center`, then by
/// coordinates; without a centre, by coordinates alone.
pub(super) fn sort_points(points: &mut [Point2], center: Option<Point2>) {
    let key = |p: &Point2| {
        let angle = center.map_or(0.0, |c| {
            let d = *p - c;
            d.y.atan2(d.x).rem_euclid(TAU)
        });
        (angle, p.x, p.y)
    };
    points.sort_by(|a, b| key(a).partial_cmp(&key(b)).unwrap_or(Ordering::Equal));
}

/// Candidate positions for a point target (or a circle centre when `radius`
/// is set), each flagged when it is a tangent root.
pub(super) fn point_roots(
    state: &State,
    frame: usize,
    target: &str,
    cs: [&Constraint; 2],
    radius: Option<f64>,
    cfg: &ExecConfig,
) -> Result<Vec<(Point2, bool)>, ExecError> {
    let l0 = point_locus(state, frame, target, cs[0], radius, cfg)?;
    let l1 = point_locus(state, frame, target, cs[1], radius, cfg)?;
    let center = l0.iter().chain(&l1).find_map(|c| match c {
        Curve::Circle(k) => Some(k.center),
        Curve::Line(_) => None,
    });

    let mut roots: Vec<(Point2, bool)> = Vec::new();
    for &a in &l0 {
        for &b in &l1 {
            match meet(a, b, cfg.eps) {
                Meet::Continuum => {
                    return Err(ExecError::UnderDetermined {
                        entity: target.to_string(),
                    })
                }
                Meet::Nothing => {}
                Meet::Points(ps, tangent) => {
                    for p in ps {
                        match roots.iter_mut().find(|(q, _)| q.dist(p) <= 1e3 * cfg.eps) {
                            Some(existing) => existing.1 = true,
                            None => roots.push((p, tangent)),
                        }
                    }
                }
            }
        }
    }
    if roots.is_empty() {
        return Err(ExecError::EmptyIntersection {
            entity: target.to_string(),
        });
    }
    let mut points: Vec<Point2> = roots.iter().map(|r| r.0).collect();
    sort_points(&mut points, center);
    Ok(points
        .into_iter()
        .map(|p| {
            let flag = roots.iter().find(|r| r.0 == p).is_some_and(|r| r.1);
            (p, flag)
        })
        .collect())
}

#[derive(Debug, Clone, Copy)]
enum LineLocus {
    Through(Point2),
    Direction(LineRep, f64),
    Tangent(CircleRep),
}

fn line_locus(
    state: &State,
    frame: usize,
    target: &str,
    c: &Constraint,
    cfg: &ExecConfig,
) -> Result<LineLocus, ExecError> {
    let placed = state.get(frame, other(c, target))?;
    Ok(match (c.kind, placed) {
        (ConstraintKind::Incidence, Placement::Point(p)) => LineLocus::Through(p),
        (ConstraintKind::PointLineDistance(d), Placement::Point(p)) if d <= cfg.eps => {
            LineLocus::Through(p)
        }
        (ConstraintKind::PointLineDistance(d), Placement::Point(p)) => {
            LineLocus::Tangent(CircleRep::new(p, d))
        }
        (ConstraintKind::Angle(alpha), Placement::Line(l)) => LineLocus::Direction(l, alpha),
        (ConstraintKind::Tangency, Placement::Circle(k)) => LineLocus::Tangent(k),
        _ => return Err(unsupported(c, target)),
    })
}

/// Candidate lines for a line target, ordered by `(θ, c)`.
pub(super) fn line_roots(
    state: &State,
    frame: usize,
    target: &str,
    cs: [&Constraint; 2],
    cfg: &ExecConfig,
) -> Result<Vec<(LineRep, bool)>, ExecError> {
    use LineLocus::{Direction, Tangent, Through};
    let a = line_locus(state, frame, target, cs[0], cfg)?;
    let b = line_locus(state, frame, target, cs[1], cfg)?;
    let fail = |e: GeomError| geom_error(e, target);

    let directions = |reference: LineRep, alpha: f64| [0u8, 1].map(|br| (reference, alpha, br));
    let raw: Vec<(LineRep, bool)> = match (a, b) {
        (Through(p), Through(q)) => {
            vec![(line_through_points(p, q, cfg.eps).map_err(fail)?, false)]
        }
        (Through(p), Direction(l, alpha)) | (Direction(l, alpha), Through(p)) => {
            directions(l, alpha)
                .into_iter()
                .map(|(l, alpha, br)| {
                    line_through_point_angle(p, &l, alpha, br).map(|x| (x, false))
                })
                .collect::<Result<_, _>>()
                .map_err(fail)?
        }
        (Through(p), Tangent(k)) | (Tangent(k), Through(p)) => {
            tangents_from_point(p, &k, cfg.eps).map_err(fail)?
        }
        (Direction(..), Direction(..)) => {
            return Err(ExecError::UnderDetermined {
                entity: target.to_string(),
            })
        }
        (Direction(l, alpha), Tangent(k)) | (Tangent(k), Direction(l, alpha)) => {
            let mut out = Vec::new();
            for theta in [l.theta + alpha, l.theta - alpha] {
                let c = Point2::unit(theta).dot(k.center);
                for off in [k.r, -k.r] {
                    out.push((LineRep::new(theta, c + off), false));
                }
            }
            out
        }
        (Tangent(_), Tangent(_)) => {
            return Err(ExecError::UnsupportedStep(format!(
                "'{target}' as a common tangent of two circles"
            )))
        }
    };

    let mut lines: Vec<(LineRep, bool)> = Vec::new();
    for (l, tangent) in raw {
        match lines
            .iter_mut()
            .find(|(m, _)| m.approx_eq(&l, 1e3 * cfg.eps))
        {
            Some(existing) => existing.1 = true,
            None => lines.push((l, tangent)),
        }
    }
    lines.sort_by(|x, y| {
        (x.0.theta, x.0.c)
            .partial_cmp(&(y.0.theta, y.0.c))
            .unwrap_or(Ordering::Equal)
    });
    Ok(lines)
}
