use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde_json::{json, Value};

use super::parse::{parse_complex_list, parse_complex_str, parse_point, parse_points, parse_reals};
use super::*;
use crate::basin::{
    bounded_set_probe, dichotomy_probe, dichotomy_search, interior_probe, nonuniformity_witness, planar_homeo,
    sphere_map, OrbitOptions,
};
use crate::chain::{AutoChain, Map2};
use crate::fixed_point::{find_fixed_point, FixedPointInfo, NewtonOptions};
use crate::grid::{parse_plane, Box4, Grid4};
use crate::linalg::Point2;
use crate::nonauto::{
    disjointness_check, nonauto_attracting_probe, nonauto_orbit, planar_witness_points,
    pointwise_vs_uniform_report, sector_sets_membership, MapSequence, SectorSetParams,
};
use crate::output::{fmt_f64, points_csv};
use crate::parabolic::{
    blowup::sector_residence, calibrate_epsilon, characteristic_directions, expansion_check, graph_point,
    normalize, perturbed_normal_form, quadratic_part, GraphPointOptions, HomogeneousQuadratic, SectorPoint,
};
use crate::stable::{
    density_probe, graph_residual, local_stable_graph, local_stable_graph_auto, occupancy, pullback_cloud,
    stability::shear_y_family, stability_experiment, GraphOptions, LocalGraph, PointCloud,
};

type R<T> = std::result::Result<T, CliError>;

pub(super) fn execute(cmd: &Command, ctx: &mut Ctx, out_dir: &Path) -> R<Outcome> {
    match cmd {
        Command::FixedPoint(a) => fixed_point(a, ctx),
        Command::StableGraph(a) => stable_graph(a, ctx),
        Command::Pullback(a) => pullback(a, ctx),
        Command::Density(a) => density(a, ctx),
        Command::Stability(a) => stability(a, ctx),
        Command::CharDirs(a) => char_dirs(a, ctx),
        Command::Normalize(a) => normalize_cmd(a, ctx),
        Command::ParabolicGraph(a) => parabolic_graph(a, ctx),
        Command::ExpansionCheck(a) => expansion(a, ctx),
        Command::Dichotomy(a) => dichotomy(a, ctx),
        Command::Interior(a) => interior(a, ctx),
        Command::BoundedSet(a) => bounded_set(a, ctx),
        Command::Gallery(a) => gallery(a),
        Command::NonautoRun(a) => nonauto(a, ctx),
        Command::SectorSets(a) => sector_sets(a, ctx),
        Command::Report(a) => report(a, out_dir),
    }
}

fn point_arg(s: &Option<String>, default: &str) -> R<Point2> {
    parse_point(s.as_deref().unwrap_or(default)).map_err(config_err)
}

fn fmt_c(z: crate::linalg::C64) -> String {
    if z.im == 0.0 {
        format!("{}", z.re)
    } else {
        format!("{}{:+}i", z.re, z.im)
    }
}

fn fmt_p(p: Point2) -> String {
    format!("({}, {})", fmt_c(p.x), fmt_c(p.y))
}

fn fixed_point_of<M: crate::chain::Differentiable + ?Sized>(map: &M, seed: &Option<String>, ctx: &Ctx) -> R<FixedPointInfo> {
    let seed = point_arg(seed, "0,0")?;
    let mut opts = NewtonOptions::default();
    if let Some(t) = ctx.global.tol {
        opts.tol = t;
    }
    Ok(find_fixed_point(map, seed, opts)?)
}

fn fixed_point(a: &FixedPointArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map = ctx.load_map()?;
    let seed = point_arg(&a.seed_point, "0,0")?;
    let mut opts = NewtonOptions::default();
    if let Some(t) = ctx.global.tol {
        opts.tol = t;
    }
    if let Some(n) = a.max_iter {
        opts.max_iter = n;
    }
    let fp = find_fixed_point(&map, seed, opts)?;
    Ok(Outcome {
        summary: format!("fixed-point: {} at {}", fp.classification, fmt_p(fp.location)),
        artifacts: vec![json_artifact("fixed-point.json", &fp)],
    })
}

fn graph_opts(a: &GraphArgs, ctx: &Ctx) -> GraphOptions {
    let d = GraphOptions::default();
    GraphOptions {
        delta: ctx.global.delta.unwrap_or(d.delta),
        n_r: a.n_r.unwrap_or(d.n_r),
        n_theta: a.n_theta.unwrap_or(d.n_theta),
        tol: ctx.global.tol.unwrap_or(d.tol),
        max_iter: a.max_iter.unwrap_or(d.max_iter),
        slope_cap: d.slope_cap,
    }
}

fn saddle_graph(a: &GraphArgs, ctx: &mut Ctx) -> R<(AutoChain, FixedPointInfo, LocalGraph)> {
    let map = ctx.load_map()?;
    let chain = map.as_automorphism()?.clone();
    let fp = fixed_point_of(&chain, &a.seed_point, ctx)?;
    let opts = graph_opts(a, ctx);
    let graph = if a.auto.unwrap_or(false) {
        local_stable_graph_auto(&chain, &fp, opts, 8)?
    } else {
        local_stable_graph(&chain, &fp, opts)?
    };
    Ok((chain, fp, graph))
}

fn stable_graph(a: &GraphArgs, ctx: &mut Ctx) -> R<Outcome> {
    let (chain, fp, graph) = saddle_graph(a, ctx)?;
    let residual = graph_residual(&chain, &graph);
    let doc = json!({"fixed_point": fp, "graph": graph, "graph_residual": residual});
    Ok(Outcome {
        summary: format!(
            "stable-graph: delta {} converged in {} iterations, residual {:.3e}",
            graph.delta, graph.iterations, residual
        ),
        artifacts: vec![
            json_artifact("stable-graph.json", &doc),
            ("stable-graph.csv".into(), points_csv(&graph.points()).into_bytes()),
        ],
    })
}

fn cloud_csv(cloud: &PointCloud) -> String {
    let mut out = String::from("depth,re_x,im_x,re_y,im_y\n");
    for (p, d) in cloud.points.iter().zip(&cloud.depths) {
        let r = p.to_reals();
        let _ = writeln!(out, "{d},{},{},{},{}", fmt_f64(r[0]), fmt_f64(r[1]), fmt_f64(r[2]), fmt_f64(r[3]));
    }
    out
}

fn pullback(a: &PullbackArgs, ctx: &mut Ctx) -> R<Outcome> {
    let (chain, _, graph) = saddle_graph(&a.graph, ctx)?;
    let depth = a.depth.unwrap_or(4);
    let cloud = pullback_cloud(&chain, &graph, depth, &ctx.map_id());
    let per_depth: Vec<usize> = (0..=depth).map(|k| cloud.at_depth(k).len()).collect();
    let doc = json!({
        "provenance": cloud.provenance,
        "points": cloud.points.len(),
        "per_depth": per_depth,
        "dropped": cloud.dropped,
    });
    Ok(Outcome {
        summary: format!("pullback: {} points to depth {depth} ({} dropped)", cloud.points.len(), cloud.dropped),
        artifacts: vec![
            json_artifact("pullback.json", &doc),
            ("pullback.csv".into(), cloud_csv(&cloud).into_bytes()),
        ],
    })
}

fn density(a: &DensityArgs, ctx: &mut Ctx) -> R<Outcome> {
    let (chain, _, graph) = saddle_graph(&a.graph, ctx)?;
    let depth = a.depth.unwrap_or(8);
    let bounds = Box4::cube(a.box_half.unwrap_or(2.0))?;
    let cells = a.cells.unwrap_or(10);
    let cloud = pullback_cloud(&chain, &graph, depth, &ctx.map_id());
    let mut rows = Vec::new();
    for k in 0..=depth {
        let mut sub = PointCloud::from_points(cloud.up_to_depth(k));
        sub.provenance = cloud.provenance.clone();
        sub.provenance.depth = k;
        rows.push(density_probe(&sub, bounds, cells)?);
    }
    let last = rows.last().expect("depth 0 row");
    let summary = format!(
        "density: {} of {} cells occupied at depth {depth} (depth 0: {})",
        last.occupied, last.total, rows[0].occupied
    );
    let mut artifacts = vec![json_artifact("density.json", &json!({"rows": rows}))];
    if let Some(plane) = &a.plane {
        let (i, j) = parse_plane(plane)?;
        let occ = occupancy(&cloud.points, &Grid4::uniform(bounds, cells)?);
        artifacts.push(("density.ppm".into(), occ.to_ppm(i, j)?));
    }
    Ok(Outcome { summary, artifacts })
}

fn stability(a: &StabilityArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map = ctx.load_map()?;
    let chain = map.as_automorphism()?.clone();
    let fp = fixed_point_of(&chain, &a.graph.seed_point, ctx)?;
    let t_values = parse_reals(a.t_values.as_deref().unwrap_or("1e-2,1e-3,1e-4")).map_err(config_err)?;
    let rows = stability_experiment(
        &chain,
        &fp,
        |t| shear_y_family(&chain, t),
        &t_values,
        graph_opts(&a.graph, ctx),
        a.depth.unwrap_or(2),
    )?;
    let mut csv = String::from("t,fp_offset,graph_distance,cloud_hausdorff\n");
    for r in &rows {
        let _ = writeln!(
            csv,
            "{},{},{},{}",
            fmt_f64(r.t),
            fmt_f64(r.fp_offset),
            fmt_f64(r.graph_distance),
            fmt_f64(r.cloud_hausdorff)
        );
    }
    let summary = match (rows.first(), rows.last()) {
        (Some(f), Some(l)) => format!(
            "stability: graph distance {:.3e} at t = {} down to {:.3e} at t = {}",
            f.graph_distance, f.t, l.graph_distance, l.t
        ),
        _ => "stability: no perturbation sizes".to_string(),
    };
    Ok(Outcome {
        summary,
        artifacts: vec![
            json_artifact("stability.json", &json!({"rows": rows})),
            ("stability.csv".into(), csv.into_bytes()),
        ],
    })
}

fn quadratic_input(a: &QuadraticArgs, ctx: &mut Ctx) -> R<HomogeneousQuadratic> {
    match (&a.c, ctx.map_path()) {
        (Some(c), _) => Ok(HomogeneousQuadratic::normal_form(parse_complex_str(c).map_err(config_err)?)),
        (None, Some(_)) => {
            let map = ctx.load_map()?;
            Ok(quadratic_part(&map.to_polymap())?)
        }
        (None, None) => Err(config_err("give --map or --c")),
    }
}

fn char_dirs(a: &QuadraticArgs, ctx: &mut Ctx) -> R<Outcome> {
    let p2 = quadratic_input(a, ctx)?;
    let set = characteristic_directions(&p2);
    let summary = match &set {
        crate::parabolic::DirectionSet::AllDirections => "char-dirs: every direction is characteristic".to_string(),
        crate::parabolic::DirectionSet::Directions(d) => {
            let nd = d.iter().filter(|x| !x.degenerate).count();
            format!("char-dirs: {} directions ({nd} non-degenerate)", d.len())
        }
    };
    Ok(Outcome {
        summary,
        artifacts: vec![json_artifact("char-dirs.json", &json!({"quadratic": p2, "directions": set}))],
    })
}

fn normalize_cmd(a: &NormalizeArgs, ctx: &mut Ctx) -> R<Outcome> {
    let p2 = quadratic_input(&a.quad, ctx)?;
    let set = characteristic_directions(&p2);
    let dirs = set.directions();
    let (dir, nf) = match a.index {
        Some(i) => {
            let d = dirs
                .get(i)
                .ok_or_else(|| config_err(format!("direction index {i} out of range ({} found)", dirs.len())))?;
            (d, normalize(&p2, d)?)
        }
        None => {
            // prefer a direction whose normal form has b != 0
            let candidates: Vec<_> = dirs.iter().filter(|d| !d.degenerate).collect();
            let first = *candidates
                .first()
                .ok_or(CliError::Domain(crate::error::Error::DegenerateDirection))?;
            let nf = normalize(&p2, first)?;
            if nf.b_zero {
                candidates
                    .iter()
                    .filter_map(|d| normalize(&p2, d).ok().map(|f| (*d, f)))
                    .find(|(_, f)| !f.b_zero)
                    .unwrap_or((first, nf))
            } else {
                (first, nf)
            }
        }
    };
    Ok(Outcome {
        summary: format!("normalize: c = {}{}", fmt_c(nf.c), if nf.b_zero { " (b = 0)" } else { "" }),
        artifacts: vec![json_artifact("normalize.json", &json!({"direction": dir, "normal_form": nf}))],
    })
}

fn parabolic_map(c: f64, kappa: f64, ctx: &mut Ctx) -> R<Box<dyn Map2>> {
    if ctx.map_path().is_some() {
        return Ok(Box::new(ctx.load_map()?));
    }
    Ok(Box::new(perturbed_normal_form(c, kappa)))
}

fn parabolic_graph(a: &ParabolicGraphArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map = parabolic_map(a.c.unwrap_or(0.0), a.kappa.unwrap_or(0.0), ctx)?;
    let xs = parse_complex_list(a.x.as_deref().unwrap_or("-0.005,-0.01,-0.015")).map_err(config_err)?;
    let d = GraphPointOptions::default();
    let opts = GraphPointOptions {
        epsilon: ctx.global.epsilon.unwrap_or(d.epsilon),
        max_iter: a.max_iter.unwrap_or(d.max_iter),
        resolution: a.resolution.unwrap_or(d.resolution),
    };
    let horizon = a.horizon.unwrap_or(200);
    let mut points = Vec::new();
    for &x in &xs {
        let g = graph_point(&map, x, opts)?;
        let residence = sector_residence(&map, SectorPoint::new(g.x, g.u, opts.epsilon), horizon);
        points.push(json!({"point": g, "sector_residence": residence}));
    }
    Ok(Outcome {
        summary: format!("parabolic-graph: {} graph points, epsilon {}", points.len(), opts.epsilon),
        artifacts: vec![json_artifact("parabolic-graph.json", &json!({"options": opts, "points": points}))],
    })
}

fn expansion(a: &ExpansionArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map: Box<dyn Map2> = if ctx.map_path().is_some() {
        Box::new(ctx.load_map()?)
    } else {
        let c = parse_complex_str(a.c.as_deref().unwrap_or("0")).map_err(config_err)?;
        Box::new(AutoChain::parabolic_normal_form(c))
    };
    let trials = a.trials.unwrap_or(10_000);
    let seed = ctx.seed();
    if let Some(cands) = &a.calibrate {
        let cands = parse_reals(cands).map_err(config_err)?;
        let (best, reports) = calibrate_epsilon(&map, &cands, trials, seed)?;
        return Ok(Outcome {
            summary: match best {
                Some(e) => format!("expansion-check: largest passing epsilon {e}"),
                None => "expansion-check: no candidate epsilon passes".to_string(),
            },
            artifacts: vec![json_artifact("expansion-check.json", &json!({"best": best, "reports": reports}))],
        });
    }
    let eps = ctx.global.epsilon.unwrap_or(crate::parabolic::blowup::DEFAULT_EPSILON);
    let rep = expansion_check(&map, eps, trials, seed)?;
    Ok(Outcome {
        summary: format!(
            "expansion-check: {} violations over {} admissible pairs at epsilon {}",
            rep.violations, rep.admissible, rep.epsilon
        ),
        artifacts: vec![json_artifact("expansion-check.json", &rep)],
    })
}

fn dichotomy(a: &DichotomyArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map = ctx.load_map()?;
    let fp = fixed_point_of(&map, &a.seed_point, ctx)?;
    let r = a.radius.unwrap_or(0.5);
    let m_max = a.m_max.unwrap_or(50);
    let samples = a.samples.unwrap_or(2000);
    let rep = if a.control.unwrap_or(false) {
        dichotomy_search(&map, fp.location, fp.unstable_direction, r, m_max, samples, ctx.seed())?
    } else {
        dichotomy_probe(&map, &fp, r, m_max, samples, ctx.seed())?
    };
    let summary = match rep.cutoff {
        Some(m) => format!("dichotomy: no witness from m = {m} ({} fixed point)", fp.classification),
        None => format!("dichotomy: witnesses for every m <= {m_max} ({} fixed point)", fp.classification),
    };
    Ok(Outcome {
        summary,
        artifacts: vec![json_artifact("dichotomy.json", &json!({"fixed_point": fp, "report": rep}))],
    })
}

fn interior(a: &InteriorArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map = ctx.load_map()?;
    let fp = fixed_point_of(&map, &a.seed_point, ctx)?;
    let vp = map.as_automorphism().map(|c| c.volume_preserving()).unwrap_or(false);
    let mut opts = OrbitOptions::new(fp.location);
    if let Some(n) = a.max_iter {
        opts.max_iter = n;
    }
    if let Some(t) = ctx.global.tol {
        opts.conv_tol = t;
    }
    let rep = interior_probe(
        &map,
        &fp,
        vp,
        a.radius.unwrap_or(2.0),
        a.samples.unwrap_or(100_000),
        opts,
        ctx.seed(),
    )?;
    Ok(Outcome {
        summary: format!("interior: {} of {} samples converge (fraction {})", rep.converged, rep.samples, rep.fraction),
        artifacts: vec![json_artifact("interior.json", &rep)],
    })
}

fn bounded_set(a: &BoundedSetArgs, ctx: &mut Ctx) -> R<Outcome> {
    let map = ctx.load_map()?;
    let bounds = Box4::cube(a.box_half.unwrap_or(2.0))?;
    let cells = parse_reals(a.cells.as_deref().unwrap_or("9,1,9,1")).map_err(config_err)?;
    let cells: [usize; 4] = match cells.as_slice() {
        [n] => [*n as usize; 4],
        [a, b, c, d] => [*a as usize, *b as usize, *c as usize, *d as usize],
        _ => return Err(config_err("--cells takes one or four counts")),
    };
    let grid = Grid4::new(bounds, cells)?;
    let occ = bounded_set_probe(&map, &grid, a.max_iter.unwrap_or(200));
    let (i, j) = parse_plane(a.plane.as_deref().unwrap_or("rex,rey"))?;
    let doc = json!({"grid": grid, "marked": occ.count(), "total": grid.total(), "fraction": occ.fraction(),
        "cells": occ.marked.iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| k).collect::<Vec<_>>()});
    Ok(Outcome {
        summary: format!("bounded-set: {} of {} cells bounded", occ.count(), grid.total()),
        artifacts: vec![
            json_artifact("bounded-set.json", &doc),
            ("bounded-set.ppm".into(), occ.to_ppm(i, j)?),
        ],
    })
}

fn gallery(a: &GalleryArgs) -> R<Outcome> {
    let example = a.example.as_deref().unwrap_or("sphere");
    match example {
        "sphere" | "planar" => {
            let z = parse_complex_str(a.z.as_deref().unwrap_or("0.5")).map_err(config_err)?;
            let m = a.m.unwrap_or(1);
            let w = if example == "sphere" {
                sphere_map(m, z)?
            } else {
                (0..m).fold(z, |w, _| planar_homeo(w))
            };
            Ok(Outcome {
                summary: fmt_c(w),
                artifacts: vec![json_artifact(
                    "gallery.json",
                    &json!({"example": example, "z": z, "m": m, "value": w}),
                )],
            })
        }
        "witness" => {
            let m_max = a.m.unwrap_or(30) as usize;
            let ws = (1..=m_max).map(nonuniformity_witness).collect::<crate::error::Result<Vec<_>>>()?;
            Ok(Outcome {
                summary: format!("gallery: {} verified non-uniformity witnesses", ws.len()),
                artifacts: vec![json_artifact("gallery.json", &json!({"example": example, "witnesses": ws}))],
            })
        }
        other => Err(config_err(format!("unknown example {other:?} (sphere, planar, witness)"))),
    }
}

fn nonauto(a: &NonautoArgs, ctx: &mut Ctx) -> R<Outcome> {
    let seq = match (&a.sequence, &a.family) {
        (Some(path), _) => {
            let bytes = ctx.read_input("sequence", path)?;
            let v: Value = serde_json::from_slice(&bytes).map_err(|e| config_err(format!("{}: {e}", path.display())))?;
            MapSequence::from_json(&v)?
        }
        (None, Some(name)) => {
            let params: Value = match &a.params {
                Some(p) => serde_json::from_str(p).map_err(|e| config_err(format!("--params: {e}")))?,
                None => json!({}),
            };
            MapSequence::family(name, params)?
        }
        (None, None) => return Err(config_err("give --sequence or --family")),
    };
    let n = a.n.unwrap_or(30);
    let conv_tol = ctx.global.tol.unwrap_or(1e-3);
    let grid = Grid4::uniform(Box4::cube(a.box_half.unwrap_or(1.0))?, a.cells.unwrap_or(3))?;
    let extra = if a.witnesses.unwrap_or(false) {
        planar_witness_points(n.max(1))?
    } else {
        Vec::new()
    };
    let orbit = match &a.start {
        Some(s) => Some(nonauto_orbit(&seq, parse_point(s).map_err(config_err)?, n)?),
        None => None,
    };
    let rows = pointwise_vs_uniform_report(&seq, &grid, &extra, n, conv_tol)?;
    let attracted = nonauto_attracting_probe(&seq, &grid, n, conv_tol)?;
    let last = rows.last().expect("row for n = 0");
    let doc = json!({
        "orbit": orbit,
        "rows": rows,
        "attracted_cells": attracted.count(),
        "total_cells": grid.total(),
    });
    Ok(Outcome {
        summary: format!(
            "nonauto-run: n = {} converged fraction {} sup {}",
            last.n, last.converged_fraction, last.sup_all
        ),
        artifacts: vec![json_artifact("nonauto-run.json", &doc)],
    })
}

fn sector_sets(a: &SectorSetsArgs, ctx: &mut Ctx) -> R<Outcome> {
    let p = SectorSetParams::new(
        a.big_r.unwrap_or(2.0),
        ctx.global.epsilon.unwrap_or(0.1),
        ctx.global.delta.unwrap_or(0.005),
        a.rho.unwrap_or(0.01),
    )?;
    let rep = disjointness_check(&p, a.samples.unwrap_or(400), ctx.seed())?;
    let mut members = Vec::new();
    if let Some(s) = &a.points {
        for z in parse_points(s).map_err(config_err)? {
            members.push(match sector_sets_membership(&p, z) {
                Ok(c) => json!({"point": z, "component": c}),
                Err(e) => json!({"point": z, "error": e.to_string()}),
            });
        }
    }
    Ok(Outcome {
        summary: format!(
            "sector-sets: {} (min distance {:.6e})",
            if rep.disjoint { "disjoint" } else { "components collide" },
            rep.min_distance
        ),
        artifacts: vec![json_artifact("sector-sets.json", &json!({"report": rep, "membership": members}))],
    })
}

fn report(a: &ReportArgs, out_dir: &Path) -> R<Outcome> {
    let mut runs = Vec::new();
    if let Ok(rd) = fs::read_dir(out_dir) {
        let mut names: Vec<String> = rd
            .filter_map(|e| e.ok())
            .map(|e| e.file_name().to_string_lossy().into_owned())
            .filter(|n| n.ends_with(".manifest.json") && n != "report.manifest.json")
            .collect();
        names.sort();
        for n in names {
            let text = fs::read_to_string(out_dir.join(&n)).map_err(|e| CliError::Io(format!("{n}: {e}")))?;
            let v: Value = serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{n}: {e}")))?;
            runs.push(json!({"subcommand": v["subcommand"], "artifacts": v["artifacts"], "seed": v["seed"]}));
        }
    }
    let summary = if a.list.unwrap_or(false) {
        SUBCOMMANDS
            .iter()
            .map(|(n, anchor)| format!("{n:<16} {anchor}"))
            .collect::<Vec<_>>()
            .join("\n")
    } else {
        format!("report: {} subcommands, {} recorded runs", SUBCOMMANDS.len(), runs.len())
    };
    Ok(Outcome {
        summary,
        artifacts: vec![json_artifact("report.json", &json!({"subcommands": anchors_json(), "runs": runs}))],
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::re;

    #[test]
    fn sphere_gallery_value() {
        let a = GalleryArgs {
            example: Some("sphere".into()),
            z: Some("0.5".into()),
            m: Some(3),
        };
        let out = gallery(&a).unwrap();
        let v: Value = serde_json::from_slice(&out.artifacts[0].1).unwrap();
        assert!((v["value"][0].as_f64().unwrap() - 0.2).abs() < 1e-15);
        assert_eq!(fmt_c(re(0.2)), "0.2");
    }
}
