use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::ballhull::{bh_contains, build_tree, BallHull};
use crate::clustering::{
    avis_min_max_2cluster, constrained_2cluster, hr_feasible_3cluster_traced, k_cluster_minimize,
    min_enclosing_ball, min_max_3cluster, Measure, Objective, Partition,
};
use crate::error::Error;
use crate::geometry::{convex_hull, diameter, diameter_value, Side};
use crate::norm::{NormedPlane, Point};
use crate::oracle::{diameter_all_pairs, radius_golden};
use crate::separation::{perimeter_check, separate_clusters};

use super::io::{build_plane, load_norm, parse_xy, random_points, read_points};
use super::scenes::LensCounterexample;
use super::svg::{emit_svg, Curve, Layer, Scene};
use super::{Command, Common, Failure, Outcome};

const RANDOM_SPAN: f64 = 10.0;
const ARC_SAMPLES: usize = 24;

pub(super) fn norm_value(common: &Common) -> Value {
    match load_norm(&common.norm) {
        Ok(d) => serde_json::to_value(d).expect("descriptor serializes"),
        Err(_) => json!(common.norm),
    }
}

fn plane(common: &Common) -> Result<NormedPlane, Failure> {
    let descriptor = load_norm(&common.norm).map_err(Failure::Input)?;
    build_plane(descriptor, common.tol).map_err(Failure::Input)
}

fn points(common: &Common) -> Result<Vec<Point>, Failure> {
    match &common.points {
        Some(path) => read_points(path).map_err(Failure::Input),
        None => {
            if common.n == 0 {
                return Err(Failure::Input("--n must be positive".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(common.seed);
            Ok(random_points(&mut rng, common.n, RANDOM_SPAN))
        }
    }
}

fn source(common: &Common) -> Value {
    match &common.points {
        Some(p) => json!(p.display().to_string()),
        None => json!({ "random": common.n, "seed": common.seed }),
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

fn partition_value(p: &Partition) -> Value {
    json!({ "clusters": p.clusters, "measures": p.measures })
}

fn partition_lines(p: &Partition) -> Vec<String> {
    p.clusters
        .iter()
        .zip(&p.measures)
        .enumerate()
        .map(|(i, (c, m))| format!("cluster {i} (measure {m}): {c:?}"))
        .collect()
}

/// Every point in exactly one cluster and each claimed measure recomputed.
fn partition_checks(
    plane: &NormedPlane,
    pts: &[Point],
    p: &Partition,
    measure: Measure,
) -> Vec<(&'static str, bool)> {
    let recomputed = (0..p.k()).all(|c| close(measure.of(plane, &p.cluster_points(pts, c)), p.measures[c]));
    vec![("covers_all_points", p.is_partition_of(pts.len())), ("measures_recomputed", recomputed)]
}

pub(super) fn execute(common: &Common, command: &Command) -> Result<Outcome, Failure> {
    let plane = plane(common)?;
    match command {
        Command::Diameter => {
            let pts = points(common)?;
            let d = diameter(&plane, &pts)?;
            let index = |q: Point| pts.iter().position(|&x| x == q);
            Ok(Outcome {
                algorithm: "diameter",
                parameters: json!({ "points": source(common) }),
                result: json!({
                    "diameter": d.value,
                    "pair": [d.pair.0, d.pair.1],
                    "pair_indices": [index(d.pair.0), index(d.pair.1)],
                }),
                text: vec![format!("diameter: {}", d.value)],
                found: true,
                checks: vec![
                    ("all_pairs", close(d.value, diameter_all_pairs(&plane, &pts))),
                    ("pair_realizes_value", close(d.value, plane.dist(d.pair.0, d.pair.1))),
                ],
            })
        }
        Command::Separate { a, b } => {
            let a_pts = read_points(a).map_err(Failure::Input)?;
            let b_pts = read_points(b).map_err(Failure::Input)?;
            let r = separate_clusters(&plane, &a_pts, &b_pts)?;
            let (da, db) = (diameter_value(&plane, &a_pts), diameter_value(&plane, &b_pts));
            let (da2, db2) = (diameter_value(&plane, &r.a_prime), diameter_value(&plane, &r.b_prime));
            let (before, after) = perimeter_check(&plane, &a_pts, &b_pts, &r);
            let mut union: Vec<Point> = a_pts.iter().chain(&b_pts).copied().collect();
            let mut split: Vec<Point> = r.a_prime.iter().chain(&r.b_prime).copied().collect();
            union.sort_by(Point::lex_cmp);
            split.sort_by(Point::lex_cmp);
            let invariants = [
                ("union_preserved", union == split),
                (
                    "separable",
                    r.a_prime.iter().all(|&p| r.line.side(p) != Side::Right)
                        && r.b_prime.iter().all(|&p| r.line.side(p) != Side::Left),
                ),
                ("diameter_a_not_increased", da2 <= da + 1e-9),
                ("diameter_b_not_increased", db2 <= db + 1e-9),
                ("perimeter_not_increased", after <= before + 1e-9),
            ];
            Ok(Outcome {
                algorithm: "separate",
                parameters: json!({ "a": a.display().to_string(), "b": b.display().to_string() }),
                result: json!({
                    "a_prime": r.a_prime,
                    "b_prime": r.b_prime,
                    "line": r.line,
                    "witness": r.witness,
                    "diameters_before": [da, db],
                    "diameters_after": [da2, db2],
                    "perimeter_before": before,
                    "perimeter_after": after,
                    "invariants": invariants.iter().map(|(k, v)| (k.to_string(), json!(v))).collect::<serde_json::Map<_, _>>(),
                }),
                text: vec![
                    format!("witness: {:?}", r.witness),
                    format!("line: anchor {} direction {}", r.line.anchor, r.line.direction),
                    format!("diameters: {da} -> {da2}, {db} -> {db2}"),
                    format!("perimeter: {before} -> {after}"),
                    format!("A': {} points, B': {} points", r.a_prime.len(), r.b_prime.len()),
                ],
                found: true,
                checks: invariants.to_vec(),
            })
        }
        Command::Cluster2 => {
            let pts = points(common)?;
            let (d, p) = avis_min_max_2cluster(&plane, &pts)?;
            let mut checks = partition_checks(&plane, &pts, &p, Measure::Diameter);
            checks.push(("value_is_max_measure", close(d, p.max_measure())));
            let mut text = vec![format!("d_star: {d}")];
            text.extend(partition_lines(&p));
            Ok(Outcome {
                algorithm: "cluster2",
                parameters: json!({ "points": source(common) }),
                result: json!({ "d_star": d, "partition": partition_value(&p) }),
                text,
                found: true,
                checks,
            })
        }
        Command::Cluster2c { d1, d2 } => {
            let pts = points(common)?;
            let found = constrained_2cluster(&plane, &pts, *d1, *d2)?;
            let parameters = json!({ "points": source(common), "d1": d1, "d2": d2 });
            Ok(match found {
                Some(p) => {
                    let mut checks = partition_checks(&plane, &pts, &p, Measure::Diameter);
                    checks.push(("bounds_hold", p.measures[0] <= *d1 && p.measures[1] <= *d2));
                    Outcome {
                        algorithm: "cluster2c",
                        parameters,
                        result: json!({ "partition": partition_value(&p) }),
                        text: partition_lines(&p),
                        found: true,
                        checks,
                    }
                }
                None => Outcome {
                    algorithm: "cluster2c",
                    parameters,
                    result: Value::Null,
                    text: Vec::new(),
                    found: false,
                    checks: Vec::new(),
                },
            })
        }
        Command::Cluster3 { d: Some(d) } => {
            let pts = points(common)?;
            let (found, trace) = hr_feasible_3cluster_traced(&plane, &pts, *d, common.seed)?;
            let parameters = json!({ "points": source(common), "d": d, "seed": common.seed });
            let trace_value = json!({ "triples": trace.triples, "violations": trace.violations });
            Ok(match found {
                Some(p) => {
                    let mut checks = partition_checks(&plane, &pts, &p, Measure::Diameter);
                    checks.push(("bound_holds", p.max_measure() <= *d));
                    Outcome {
                        algorithm: "cluster3",
                        parameters,
                        result: json!({ "partition": partition_value(&p), "zone_check": trace_value }),
                        text: partition_lines(&p),
                        found: true,
                        checks,
                    }
                }
                None => Outcome {
                    algorithm: "cluster3",
                    parameters,
                    result: json!({ "zone_check": trace_value }),
                    text: Vec::new(),
                    found: false,
                    checks: Vec::new(),
                },
            })
        }
        Command::Cluster3 { d: None } => {
            let pts = points(common)?;
            let (d, p) = min_max_3cluster(&plane, &pts)?;
            let mut checks = partition_checks(&plane, &pts, &p, Measure::Diameter);
            checks.push(("value_is_max_measure", close(d, p.max_measure())));
            let mut text = vec![format!("d_star: {d}")];
            text.extend(partition_lines(&p));
            Ok(Outcome {
                algorithm: "cluster3",
                parameters: json!({ "points": source(common) }),
                result: json!({ "d_star": d, "partition": partition_value(&p) }),
                text,
                found: true,
                checks,
            })
        }
        Command::Clusterk { k, objective, measure } => {
            let pts = points(common)?;
            let obj = Objective::new((*objective).into(), (*measure).into());
            let (v, p) = k_cluster_minimize(&plane, &pts, *k, obj)?;
            let mut checks = partition_checks(&plane, &pts, &p, obj.measure);
            checks.push(("objective_recomputed", close(v, obj.evaluate(&plane, &pts, &p))));
            let mut text = vec![format!("objective: {v}")];
            text.extend(partition_lines(&p));
            Ok(Outcome {
                algorithm: "clusterk",
                parameters: json!({ "points": source(common), "k": k, "objective": obj }),
                result: json!({ "value": v, "partition": partition_value(&p) }),
                text,
                found: true,
                checks,
            })
        }
        Command::Ballhull { d, query, delete } => ballhull(common, &plane, *d, query.as_deref(), delete),
        Command::Mineball => {
            let pts = points(common)?;
            let ball = min_enclosing_ball(&plane, &pts)?;
            let band = 1e-9 * ball.radius.max(1.0);
            Ok(Outcome {
                algorithm: "mineball",
                parameters: json!({ "points": source(common) }),
                result: json!({ "center": ball.center, "radius": ball.radius }),
                text: vec![format!("center: {}", ball.center), format!("radius: {}", ball.radius)],
                found: true,
                checks: vec![
                    ("contains_points", pts.iter().all(|&p| plane.dist(ball.center, p) <= ball.radius + band)),
                    ("radius_matches_search", (ball.radius - radius_golden(&plane, &pts)).abs() <= 1e-6),
                ],
            })
        }
        Command::Plot { out, a, b, d, lens_counterexample } => {
            let scene = if *lens_counterexample {
                LensCounterexample::build()?.scene(256)
            } else if let (Some(a), Some(b)) = (a, b) {
                separation_scene(&plane, a, b)?
            } else {
                point_scene(&plane, &points(common)?, *d)?
            };
            emit_svg(&scene, out).map_err(|e| Failure::Input(format!("{}: {e}", out.display())))?;
            Ok(Outcome {
                algorithm: "plot",
                parameters: json!({ "out": out.display().to_string(), "lens_counterexample": lens_counterexample, "d": d }),
                result: json!({
                    "point_glyphs": scene.layers.iter().map(|l| l.points.len()).sum::<usize>(),
                    "hulls": scene.hulls.len(),
                    "curves": scene.curves.len(),
                    "lines": scene.lines.len(),
                }),
                text: vec![format!("wrote {}", out.display())],
                found: true,
                checks: Vec::new(),
            })
        }
    }
}

fn hull_value(pts: &[Point], h: &BallHull) -> Value {
    let index = |q: &Point| pts.iter().position(|x| x == q);
    json!({
        "vertices": h.vertices,
        "vertex_indices": h.vertices.iter().map(index).collect::<Vec<_>>(),
        "arcs": h.arcs,
        "center_set_corners": h.centers.len(),
    })
}

fn ballhull(
    common: &Common,
    plane: &NormedPlane,
    d: f64,
    query: Option<&str>,
    delete: &[usize],
) -> Result<Outcome, Failure> {
    if !(d > 0.0 && d.is_finite()) {
        return Err(Failure::Input(format!("--d must be positive, got {d}")));
    }
    let pts = points(common)?;
    let query = query.map(parse_xy).transpose().map_err(Failure::Input)?;
    let parameters = json!({ "points": source(common), "d": d, "delete": delete, "query": query });
    let mut tree = match build_tree(plane, &pts, d) {
        Ok(t) => t,
        Err(Error::NoBallContainsS) => {
            return Ok(Outcome {
                algorithm: "ballhull",
                parameters,
                result: json!({ "reason": Error::NoBallContainsS.to_string() }),
                text: vec![format!("no ball of radius {d} contains the points")],
                found: false,
                checks: Vec::new(),
            })
        }
        Err(e) => return Err(e.into()),
    };
    for &i in delete {
        let p = *pts
            .get(i)
            .ok_or_else(|| Failure::Input(format!("--delete {i}: only {} points", pts.len())))?;
        tree.delete_point(p)
            .map_err(|e| Failure::Input(format!("--delete {i}: {e}")))?;
    }
    let live: Vec<Point> = tree.live_points().collect();
    let hull = tree.root().cloned();
    let mut checks = vec![(
        "contains_live_points",
        hull.as_ref().is_none_or(|h| live.iter().all(|&p| bh_contains(plane, h, p))),
    )];
    let mut text = vec![match &hull {
        Some(h) => format!("hull: {} vertices, {} live points", h.vertices.len(), live.len()),
        None => "hull: empty".to_string(),
    }];
    let mut result = json!({
        "hull": hull.as_ref().map(|h| hull_value(&pts, h)),
        "live": live.len(),
    });
    let mut found = true;
    if let Some(u) = query {
        let far = tree.query_far_point(u);
        let expected = live.iter().any(|&p| plane.dist(u, p) >= d);
        checks.push(("query_matches_scan", far.is_some() == expected));
        checks.push(("far_point_is_far", far.is_none_or(|v| plane.dist(u, v) >= d)));
        result["far_point"] = json!(far);
        text.push(match far {
            Some(v) => format!("far point: {v}"),
            None => format!("no live point at distance >= {d}"),
        });
        found = far.is_some();
    }
    Ok(Outcome {
        algorithm: "ballhull",
        parameters,
        result,
        text,
        found,
        checks,
    })
}

fn hull_outline(pts: &[Point]) -> Vec<Point> {
    convex_hull(pts).map(|h| h.vertices).unwrap_or_default()
}

fn separation_scene(plane: &NormedPlane, a: &std::path::Path, b: &std::path::Path) -> Result<Scene, Failure> {
    let a = read_points(a).map_err(Failure::Input)?;
    let b = read_points(b).map_err(Failure::Input)?;
    let r = separate_clusters(plane, &a, &b)?;
    Ok(Scene {
        layers: vec![
            Layer { name: "A".into(), points: r.a_prime.clone() },
            Layer { name: "B".into(), points: r.b_prime.clone() },
        ],
        hulls: vec![hull_outline(&a), hull_outline(&b)],
        lines: vec![r.line],
        ..Scene::default()
    })
}

fn point_scene(plane: &NormedPlane, pts: &[Point], d: Option<f64>) -> Result<Scene, Failure> {
    let mut scene = Scene {
        layers: vec![Layer { name: "S".into(), points: pts.to_vec() }],
        hulls: vec![hull_outline(pts)],
        ..Scene::default()
    };
    if let Some(d) = d {
        let h = crate::ballhull::ball_hull(plane, pts, d)?;
        scene.curves = h
            .arcs
            .iter()
            .map(|arc| Curve {
                class: "arc".into(),
                points: arc.polyline(plane, ARC_SAMPLES),
                closed: false,
            })
            .collect();
    }
    Ok(scene)
}
