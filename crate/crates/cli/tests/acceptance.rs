//! Acceptance gate: one line per criterion, non-zero exit if any fails.

use std::collections::BTreeMap;
use std::io::Write;
use std::process::{Command, ExitCode, Stdio};

use gcs_core::decomp::{classify, extract_plan, ReducibilityClass};
use gcs_core::exec::{
    congruent, enumerate_solutions, execute, measure, verify, ExecError, Solution,
};
use gcs_core::geom::{line_through_points, Placement, Point2, EPS};
use gcs_core::graph::{parse, serialize, Constraint, ConstraintGraph, Entity};
use gcs_core::henneberg::{fixture, random_laman, FIXTURE_NAMES};
use gcs_core::rigidity::{diagnose_counting, diagnose_pebble, is_laman, Diagnosis};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("AC1 oracle equivalence", ac1),
        ("AC2 henneberg soundness", ac2),
        ("AC3 minimality", ac3),
        ("AC4 classification corpus", ac4),
        ("AC5 structurally well, geometrically under-determined", ac5),
        ("AC6 empty and degenerate intersections", ac6),
        ("AC7 forward-simulation round trip", ac7),
        ("AC8 branch count", ac8),
        ("AC9 serialization", ac9),
        ("AC10 cli contract", ac10),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        match check() {
            Ok(detail) => println!("[PASS] {name}: {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {name}: {detail}");
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn verdicts_agree(g: &ConstraintGraph) -> Result<(), String> {
    let c = diagnose_counting(g).map_err(|e| e.to_string())?;
    let p = diagnose_pebble(g).map_err(|e| e.to_string())?;
    ensure(c.same_verdict(&p), || {
        format!("counting {c:?} vs pebble {p:?} on {}", serialize(g))
    })
}

fn ac1() -> Check {
    let mut checked = 0;
    for name in FIXTURE_NAMES {
        verdicts_agree(&fixture(name).unwrap())?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for i in 0..200u64 {
        let n = rng.random_range(2..=8);
        let g = random_laman(n, i, rng.random_range(0.0..=1.0)).unwrap();
        verdicts_agree(&g)?;
        let ids: Vec<String> = g.entities().iter().map(|e| e.id.clone()).collect();
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let added = g
            .with_constraint(Constraint::distance(ids[a].clone(), ids[b].clone(), 1.0))
            .unwrap();
        let removed = g.without_constraint(rng.random_range(0..g.m()));
        let both = added.without_constraint(rng.random_range(0..g.m()));
        for h in [&added, &removed, &both] {
            verdicts_agree(h)?;
        }
        checked += 4;
    }
    Ok(format!("0 mismatches over {checked} graphs"))
}

fn ac2() -> Check {
    let mut count = 0;
    for n in 3..=50 {
        for seed in 0..100 {
            let g = random_laman(n, seed, 0.5).map_err(|e| e.to_string())?;
            ensure(g.m() == 2 * n - 3, || {
                format!("n={n} seed={seed}: {} edges", g.m())
            })?;
            ensure(is_laman(&g).unwrap(), || {
                format!("n={n} seed={seed}: not Laman")
            })?;
            count += 1;
        }
    }
    Ok(format!(
        "{count} generated graphs, all Laman with 2n-3 edges"
    ))
}

fn ac3() -> Check {
    let mut deletions = 0;
    for seed in 0..50u64 {
        let n = 2 + (seed as usize % 9);
        let g = random_laman(n, seed, 0.5).unwrap();
        for i in 0..g.m() {
            let d = diagnose_pebble(&g.without_constraint(i)).unwrap();
            ensure(d == Diagnosis::UnderConstrained { deficit: 1 }, || {
                format!("seed {seed}, edge {i}: {d:?}")
            })?;
            deletions += 1;
        }
    }
    Ok(format!(
        "{deletions} single-edge deletions over 50 graphs, all deficit 1"
    ))
}

fn ac4() -> Check {
    let class = |name: &str| classify(&fixture(name).unwrap()).unwrap();
    let fully = ReducibilityClass::FullyReducible;
    let expectations: [(&str, bool); 7] = [
        ("moser-spindle", class("moser-spindle") == fully),
        (
            "three-prism",
            class("three-prism")
                == ReducibilityClass::PartiallyReducible {
                    nontrivial_cluster_count: 2,
                },
        ),
        ("k33", class("k33") == ReducibilityClass::Irreducible),
        ("quad-angle", class("quad-angle") != fully),
        ("quad-angle-aux", class("quad-angle-aux") == fully),
        ("cramer-castillon", class("cramer-castillon") != fully),
        ("malfatti", class("malfatti") != fully),
    ];
    for (name, ok) in expectations {
        ensure(ok, || format!("{name}: got {:?}", class(name)))?;
    }
    Ok("7 fixtures classified as expected".into())
}

fn ac5() -> Check {
    let g = fixture("three-angle-triangle").unwrap();
    ensure(diagnose_counting(&g).unwrap().is_well(), || {
        "counting not well".into()
    })?;
    ensure(diagnose_pebble(&g).unwrap().is_well(), || {
        "pebble not well".into()
    })?;
    let o = gcs(&["solve", "-"], Some(&serialize(&g)));
    let v = parse_json(&o.stdout)?;
    ensure(
        o.code == Some(2) && v["reason"] == "under_determined",
        || format!("exit {:?}, stdout {}", o.code, o.stdout),
    )?;
    Ok("well by both diagnoses; solve exits 2 with under_determined".into())
}

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

fn ac6() -> Check {
    let g = triangle(1.0, 1.0, 3.0);
    let plan = extract_plan(&g).map_err(|e| e.to_string())?;
    let r = execute(&plan, &g, &[]);
    ensure(
        matches!(r, Err(ExecError::EmptyIntersection { .. })),
        || format!("(1,1,3): {r:?}"),
    )?;
    let e = enumerate_solutions(&plan, &g, 16);
    ensure(
        matches!(e, Err(ExecError::EmptyIntersection { .. })),
        || format!("(1,1,3) all: {e:?}"),
    )?;

    let g = triangle(1.0, 1.0, 2.0);
    let plan = extract_plan(&g).map_err(|e| e.to_string())?;
    let all = enumerate_solutions(&plan, &g, 16).map_err(|e| e.to_string())?;
    ensure(all.len() == 1 && !all[0].1.degenerate.is_empty(), || {
        format!("(1,1,2): {all:?}")
    })?;
    Ok("(1,1,3) empty; (1,1,2) one degenerate solution".into())
}

fn pt(p: Point2) -> Placement {
    Placement::Point(p)
}

fn moser_embedding() -> BTreeMap<String, Placement> {
    let s3 = 3f64.sqrt();
    let phi = 2.0 * (1.0 / (2.0 * s3)).asin();
    let (s, c) = phi.sin_cos();
    let rot = |x: f64, y: f64| Point2::new(c * x - s * y, s * x + c * y);
    [
        ("A", Point2::new(0.0, 0.0)),
        ("B", Point2::new(s3 / 2.0, 0.5)),
        ("C", Point2::new(s3 / 2.0, -0.5)),
        ("D", Point2::new(s3, 0.0)),
        ("E", rot(s3 / 2.0, 0.5)),
        ("F", rot(s3 / 2.0, -0.5)),
        ("G", rot(s3, 0.0)),
    ]
    .into_iter()
    .map(|(k, p)| (k.to_string(), pt(p)))
    .collect()
}

/// Solve `template` with values measured on `sample`; some solution must be
/// congruent to the sample and every solution must verify.
fn round_trip(template: &str, sample: &BTreeMap<String, Placement>) -> Result<usize, String> {
    let g = measure(&fixture(template).unwrap(), sample).map_err(|e| e.to_string())?;
    let plan = extract_plan(&g).map_err(|e| format!("{template}: {e}"))?;
    let all = enumerate_solutions(&plan, &g, 256).map_err(|e| format!("{template}: {e}"))?;
    for (_, s) in &all {
        let r = verify(&g, s, 1e-9).map_err(|e| e.to_string())?;
        ensure(r.max_abs <= 1e-9, || {
            format!("{template}: residual {}", r.max_abs)
        })?;
    }
    ensure(
        all.iter()
            .any(|(_, s)| congruent(sample, &s.placements, 1e-7)),
        || format!("{template}: no solution matches the sample"),
    )?;
    Ok(all.len())
}

fn ac7() -> Check {
    let e = moser_embedding();
    let g = fixture("moser-spindle").unwrap();
    for c in g.constraints() {
        let d = e[&c.between.0]
            .as_point()
            .unwrap()
            .dist(e[&c.between.1].as_point().unwrap());
        ensure((d - 1.0).abs() <= 1e-9, || {
            format!("spindle edge {:?} has length {d}", c.between)
        })?;
    }
    let moser = round_trip("moser-spindle", &e)?;

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut point = || Point2::new(rng.random_range(-5.0..5.0), rng.random_range(-5.0..5.0));
    let (a, b, c) = (point(), point(), point());
    let tri: BTreeMap<String, Placement> = [("A", a), ("B", b), ("C", c)]
        .into_iter()
        .map(|(k, p)| (k.to_string(), pt(p)))
        .collect();
    round_trip("triangle", &tri)?;

    let (a, b, c, d) = (point(), point(), point(), point());
    let e = a + c - b;
    let mut quad: BTreeMap<String, Placement> = [("A", a), ("B", b), ("C", c), ("D", d), ("E", e)]
        .into_iter()
        .map(|(k, p)| (k.to_string(), pt(p)))
        .collect();
    quad.insert(
        "LAD".into(),
        Placement::Line(line_through_points(a, d, EPS).unwrap()),
    );
    quad.insert(
        "LAE".into(),
        Placement::Line(line_through_points(a, e, EPS).unwrap()),
    );
    let quads = round_trip("quad-angle-aux", &quad)?;
    Ok(format!(
        "spindle edges unit; matched samples ({moser} spindle, {quads} quad-aux solutions)"
    ))
}

fn ac8() -> Check {
    let o = gcs(
        &["solve", "-", "--all"],
        Some(&serialize(&triangle(3.0, 4.0, 5.0))),
    );
    ensure(o.code == Some(0), || format!("exit {:?}", o.code))?;
    let v = parse_json(&o.stdout)?;
    let sols: Vec<Solution> =
        serde_json::from_value(v["solutions"].clone()).map_err(|e| e.to_string())?;
    ensure(sols.len() == 2, || format!("{} solutions", sols.len()))?;
    for (id, p) in &sols[0].placements {
        let q = p.as_point().unwrap();
        let r = sols[1].placements[id].as_point().unwrap();
        ensure(Point2::new(q.x, -q.y).dist(r) <= 1e-9, || {
            format!("{id} is not mirrored")
        })?;
    }
    Ok("2 solutions, mirror images across the base line".into())
}

fn random_mixed(rng: &mut ChaCha8Rng) -> ConstraintGraph {
    let n = rng.random_range(2..8);
    let entities: Vec<Entity> = (0..n)
        .map(|i| {
            let id = format!("e{i}");
            match rng.random_range(0..4) {
                0 => Entity::point(id),
                1 => Entity::line(id),
                2 => Entity::circle(id, rng.random_range(0.1..10.0)),
                _ => Entity::free_circle(id),
            }
        })
        .collect();
    let mut constraints = Vec::new();
    for _ in 0..rng.random_range(0..12) {
        let (i, j) = (rng.random_range(0..n), rng.random_range(0..n));
        if i == j {
            continue;
        }
        let (a, b) = (&entities[i], &entities[j]);
        let (ida, idb) = (a.id.clone(), b.id.clone());
        let v = rng.random_range(0.01..3.0);
        let c = match (
            a.kind.is_point(),
            a.kind.is_line(),
            b.kind.is_point(),
            b.kind.is_line(),
        ) {
            (true, _, true, _) => Constraint::distance(ida, idb, v),
            (true, _, _, true) | (_, true, true, _) if rng.random_bool(0.5) => {
                Constraint::point_line_distance(ida, idb, v)
            }
            (true, _, _, _) | (_, _, true, _) => Constraint::incidence(ida, idb),
            (_, true, _, true) => Constraint::angle(ida, idb, v),
            _ => Constraint::tangency(ida, idb),
        };
        constraints.push(c);
    }
    ConstraintGraph::new(entities, constraints).unwrap()
}

fn ac9() -> Check {
    let same = |g: &ConstraintGraph| -> Result<(), String> {
        let back = parse(&serialize(g)).map_err(|e| e.to_string())?;
        ensure(&back == g, || {
            format!("round trip changed {}", serialize(g))
        })
    };
    for name in FIXTURE_NAMES {
        same(&fixture(name).unwrap())?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for i in 0..100u64 {
        if i % 2 == 0 {
            same(&random_laman(rng.random_range(2..20), i, 0.5).unwrap())?;
        } else {
            same(&random_mixed(&mut rng))?;
        }
    }
    Ok(format!(
        "{} fixtures and 100 random graphs round-trip exactly",
        FIXTURE_NAMES.len()
    ))
}

struct Run {
    code: Option<i32>,
    stdout: String,
}

fn gcs(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_gcs"))
        .args(args)
        .env_remove("GCS_TOL")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn gcs");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    }
    drop(child.stdin.take());
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code(),
        stdout: String::from_utf8_lossy(&out.stdout).into_owned(),
    }
}

fn parse_json(text: &str) -> Result<Value, String> {
    serde_json::from_str(text).map_err(|e| format!("unparseable stdout ({e}): {text}"))
}

#[derive(Clone, Copy)]
enum Shape {
    Json,
    Dot,
    Svg,
    Empty,
}

fn ac10() -> Check {
    let tri = serialize(&triangle(3.0, 4.0, 5.0));
    let dir = std::env::temp_dir().join(format!("gcs-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).map_err(|e| e.to_string())?;
    let graph = dir.join("triangle.json");
    std::fs::write(&graph, &tri).map_err(|e| e.to_string())?;
    let sol = gcs(&["solve", graph.to_str().unwrap()], None).stdout;
    let sol_path = dir.join("solution.json");
    std::fs::write(&sol_path, &sol).map_err(|e| e.to_string())?;
    let k4 = serialize(&fixture("k4").unwrap());
    let prism = serialize(&fixture("three-prism").unwrap());
    let g = graph.to_str().unwrap();
    let s = sol_path.to_str().unwrap();

    let matrix: Vec<(Vec<&str>, Option<&str>, i32, Shape)> = vec![
        (vec!["analyze", g], None, 0, Shape::Json),
        (vec!["analyze", "-"], Some(&k4), 2, Shape::Json),
        (
            vec!["analyze", "-"],
            Some("{\"entities\": ["),
            1,
            Shape::Empty,
        ),
        (
            vec!["analyze", "/nonexistent/graph.json"],
            None,
            1,
            Shape::Empty,
        ),
        (vec!["classify", "-"], Some(&tri), 0, Shape::Json),
        (vec!["classify", "-"], Some(&prism), 2, Shape::Json),
        (vec!["solve", g, "--all"], None, 0, Shape::Json),
        (vec!["solve", "-"], Some(&prism), 2, Shape::Json),
        (
            vec!["generate", "--n", "7", "--seed", "1"],
            None,
            0,
            Shape::Json,
        ),
        (vec!["fixture", "no-such-fixture"], None, 1, Shape::Empty),
        (vec!["render", g, "--format", "dot"], None, 0, Shape::Dot),
        (
            vec!["render", g, "--format", "svg", "--solution", s],
            None,
            0,
            Shape::Svg,
        ),
    ];
    for (args, stdin, want, shape) in &matrix {
        let run = gcs(args, *stdin);
        ensure(run.code == Some(*want), || {
            format!("{args:?}: exit {:?}, want {want}", run.code)
        })?;
        let out = run.stdout.trim();
        let ok = match shape {
            Shape::Json => serde_json::from_str::<Value>(out).is_ok(),
            Shape::Dot => out.starts_with("graph ") && out.ends_with('}'),
            Shape::Svg => out.starts_with("<svg") && out.ends_with("</svg>"),
            Shape::Empty => out.is_empty(),
        };
        ensure(ok, || format!("{args:?}: unexpected stdout {out}"))?;
    }
    let _ = std::fs::remove_dir_all(&dir);
    Ok(format!(
        "{} invocations with expected exit codes and clean stdout",
        matrix.len()
    ))
}
