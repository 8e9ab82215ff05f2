use super::*;
use crate::decomp::extract_plan;
use crate::graph::{Constraint, Entity};
use crate::henneberg::fixture;

fn triangle(a: f64, b: f64, c: f64) -> ConstraintGraph {
    ConstraintGraph::new(
        ["A", "B", "C"].map(Entity::point).to_vec(),
        vec![
            Constraint::distance("A", "B", a),
            Constraint::distance("B", "C", b),
            Constraint::distance("C", "A", c),
        ],
    )
    .unwrap()
}

fn point(s: &Solution, id: &str) -> Point2 {
    s.placements[id].as_point().unwrap()
}

fn near(p: Point2, x: f64, y: f64) -> bool {
    p.dist(Point2::new(x, y)) <= 1e-12
}

#[test]
fn triangle_branch_zero_is_above_the_base() {
    let g = triangle(3.0, 5.0, 4.0);
    let plan = extract_plan(&g).unwrap();
    let s = execute(&plan, &g, &[]).unwrap();
    assert!(near(point(&s, "A"), 0.0, 0.0));
    assert!(near(point(&s, "B"), 3.0, 0.0));
    assert!(near(point(&s, "C"), 0.0, 4.0));
    assert_eq!(s.branches, vec![0]);
    let below = execute(&plan, &g, &[1]).unwrap();
    assert!(near(point(&below, "C"), 0.0, -4.0));
}

#[test]
fn triangle_enumerates_two_mirror_solutions() {
    let g = triangle(3.0, 5.0, 4.0);
    let plan = extract_plan(&g).unwrap();
    let all = enumerate_solutions(&plan, &g, 16).unwrap();
    assert_eq!(all.len(), 2);
    assert_eq!(all[0].0, vec![0]);
    assert_eq!(all[1].0, vec![1]);
    let c0 = point(&all[0].1, "C");
    let c1 = point(&all[1].1, "C");
    assert!(near(c1, c0.x, -c0.y));
}

#[test]
fn violated_triangle_inequality_is_empty() {
    let g = triangle(1.0, 1.0, 3.0);
    let plan = extract_plan(&g).unwrap();
    let want = ExecError::EmptyIntersection { entity: "C".into() };
    assert_eq!(execute(&plan, &g, &[]), Err(want.clone()));
    assert_eq!(enumerate_solutions(&plan, &g, 16), Err(want));
}

#[test]
fn flat_triangle_has_one_degenerate_root() {
    let g = fixture("degenerate-triangle").unwrap();
    let plan = extract_plan(&g).unwrap();
    let all = enumerate_solutions(&plan, &g, 16).unwrap();
    assert_eq!(all.len(), 1);
    let s = &all[0].1;
    assert!(s.branches.is_empty());
    assert_eq!(s.degenerate, vec!["C".to_string()]);
    assert!(near(point(s, "C"), 2.0, 0.0));
}

#[test]
fn three_angles_leave_the_last_line_free() {
    let g = fixture("three-angle-triangle").unwrap();
    let plan = extract_plan(&g).unwrap();
    let want = ExecError::UnderDetermined {
        entity: "L3".into(),
    };
    assert_eq!(execute(&plan, &g, &[]), Err(want.clone()));
    assert_eq!(enumerate_solutions(&plan, &g, 16), Err(want.clone()));
    assert_eq!(want.reason(), "under_determined");
}

#[test]
fn bad_branches() {
    let g = triangle(3.0, 5.0, 4.0);
    let plan = extract_plan(&g).unwrap();
    assert_eq!(
        execute(&plan, &g, &[2]),
        Err(ExecError::BadBranch {
            position: 0,
            choice: 2,
            available: 2
        })
    );
    assert!(matches!(
        execute(&plan, &g, &[0, 0]),
        Err(ExecError::BadBranch { position: 1, .. })
    ));
}

#[test]
fn verify_reports_perturbation_and_missing_entities() {
    let g = triangle(3.0, 5.0, 4.0);
    let plan = extract_plan(&g).unwrap();
    let mut s = execute(&plan, &g, &[]).unwrap();
    let ok = verify(&g, &s, TOL).unwrap();
    assert!(ok.pass && ok.max_abs <= 1e-9);

    s.placements
        .insert("B".into(), Placement::Point(Point2::new(3.1, 0.0)));
    let bad = verify(&g, &s, TOL).unwrap();
    assert!(!bad.pass);
    assert!((bad.residuals[0] - 0.1).abs() < 1e-12);
    assert!(bad.residuals[2].abs() < 1e-12);

    s.placements.remove("C");
    assert_eq!(
        verify(&g, &s, TOL),
        Err(ExecError::MissingPlacement("C".into()))
    );
}

#[test]
fn moser_solutions_all_verify() {
    let g = fixture("moser-spindle").unwrap();
    let plan = extract_plan(&g).unwrap();
    let all = enumerate_solutions(&plan, &g, 64).unwrap();
    assert!(!all.is_empty());
    for (_, s) in &all {
        assert!(verify(&g, s, 1e-9).unwrap().pass);
    }
}

#[test]
fn auxiliary_point_makes_ae_parallel_to_cb() {
    let g = fixture("quad-angle-aux").unwrap();
    let plan = extract_plan(&g).unwrap();
    let beta = match g.constraints()[2].kind {
        ConstraintKind::Angle(b) => b,
        _ => unreachable!(),
    };
    let all = enumerate_solutions(&plan, &g, 256).unwrap();
    let hit = all.iter().any(|(_, s)| {
        let lad = s.placements["LAD"].as_line().unwrap();
        let cb = crate::geom::line_through_points(point(s, "C"), point(s, "B"), EPS).unwrap();
        (line_angle(&lad, &cb) - fold_angle(beta)).abs() <= 1e-9
    });
    assert!(hit);
}

#[test]
fn point_line_distance_base_branches() {
    let g = ConstraintGraph::new(
        vec![Entity::point("P"), Entity::line("L"), Entity::point("Q")],
        vec![
            Constraint::point_line_distance("P", "L", 1.0),
            Constraint::incidence("Q", "L"),
            Constraint::distance("P", "Q", 2.0),
        ],
    )
    .unwrap();
    let plan = extract_plan(&g).unwrap();
    let all = enumerate_solutions(&plan, &g, 16).unwrap();
    assert_eq!(all.len(), 4);
    assert!(near(point(&all[0].1, "P"), 0.0, 1.0));
}

#[test]
fn circle_tangent_to_line_touches_once() {
    let g = ConstraintGraph::new(
        vec![
            Entity::circle("K", 1.5),
            Entity::line("L"),
            Entity::point("P"),
        ],
        vec![
            Constraint::tangency("K", "L"),
            Constraint::incidence("P", "L"),
            Constraint::incidence("P", "K"),
        ],
    )
    .unwrap();
    let plan = extract_plan(&g).unwrap();
    let all = enumerate_solutions(&plan, &g, 16).unwrap();
    assert_eq!(all.len(), 2);
    for (_, s) in &all {
        assert_eq!(s.degenerate, vec!["P".to_string()]);
        assert!(near(point(s, "P"), 0.0, 0.0));
    }
}

#[test]
fn line_through_two_points() {
    let g = ConstraintGraph::new(
        vec![Entity::point("A"), Entity::point("B"), Entity::line("L")],
        vec![
            Constraint::distance("A", "B", 2.0),
            Constraint::incidence("A", "L"),
            Constraint::incidence("B", "L"),
        ],
    )
    .unwrap();
    let plan = extract_plan(&g).unwrap();
    let s = execute(&plan, &g, &[]).unwrap();
    let l = s.placements["L"].as_line().unwrap();
    assert!(l.approx_eq(&LineRep::new(std::f64::consts::FRAC_PI_2, 0.0), 1e-12));
}

#[test]
fn solution_json_shape() {
    let mut placements = BTreeMap::new();
    placements.insert("A".to_string(), Placement::Point(Point2::new(1.0, 2.0)));
    placements.insert(
        "L".to_string(),
        Placement::Line(LineRep { theta: 0.5, c: 1.0 }),
    );
    placements.insert(
        "K".to_string(),
        Placement::Circle(CircleRep::new(Point2::new(0.0, 0.0), 2.0)),
    );
    let s = Solution {
        placements,
        branches: vec![0, 1],
        degenerate: vec![],
    };
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(
        text,
        r#"{"placements":{"A":{"point":[1.0,2.0]},"K":{"circle":{"center":[0.0,0.0],"r":2.0}},"L":{"line":{"theta":0.5,"c":1.0}}},"branches":[0,1]}"#
    );
    assert_eq!(serde_json::from_str::<Solution>(&text).unwrap(), s);
}

#[test]
fn base_is_bit_identical_across_runs() {
    let g = fixture("quad-angle-aux").unwrap();
    let plan = extract_plan(&g).unwrap();
    let a = enumerate_solutions(&plan, &g, 8).unwrap();
    let b = enumerate_solutions(&plan, &g, 8).unwrap();
    assert_eq!(a, b);
}
