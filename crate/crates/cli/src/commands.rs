use std::path::Path;

use antichain_core::extremal::{
    construction, layer_construct, max_antichain, wn_construct, GridPoset, DEFAULT_WIDTH_BUDGET,
};
use antichain_core::grid::{box_dimension, covering_bound, grid_cover, GridCover, SetSampler};
use antichain_core::lattice::{parse_point_set, parse_real_points, LatticePointSet, OrderMode};
use antichain_core::measure::{
    default_tolerance, lipschitz_sample_check, projection_measure, shear, shear_inverse, singular_staircase,
    skew_measures_2d, slab_volume, surface_measure, verify_projection_inequality, LipschitzMap,
    MonotoneGraphSurface, ShearParams,
};
use antichain_core::partition::{exhaustive_gap_scan, greedy_partition, projection_gap, random_gap_scan};
use serde_json::{json, Value};

use crate::args::{Command, Global, Order, SurfaceArgs, DEFAULT_BUDGET};
use crate::output::{Report, Table};
use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn points_json(set: &LatticePointSet) -> Value {
    json!(set.iter().map(|p| p.coords().to_vec()).collect::<Vec<_>>())
}

fn point_rows(table: &mut Table, lead: &[String], set: &LatticePointSet) {
    for p in set {
        let mut row = lead.to_vec();
        row.extend(p.coords().iter().map(|c| c.to_string()));
        table.push(row);
    }
}

fn points_report(json: Value, set: &LatticePointSet) -> Report {
    let mut t = Table::coords(Vec::<String>::new(), set.dim());
    point_rows(&mut t, &[], set);
    Report::new(json).with_table(t)
}

fn need<T>(v: Option<T>, flag: &str, family: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("--{flag} is required for the {family} surface")))
}

fn build_surface(
    name: &str,
    n: Option<usize>,
    p: Option<f64>,
    depth: Option<u32>,
) -> Result<MonotoneGraphSurface, CliError> {
    let s = match name {
        "hyperplane" => MonotoneGraphSurface::hyperplane(need(n, "n", name)?),
        "lpsphere" => MonotoneGraphSurface::lp_sphere(need(n, "n", name)?, need(p, "p", name)?),
        "staircase" => Ok(MonotoneGraphSurface::staircase(need(depth, "depth", name)?)),
        path => {
            let path = Path::new(path);
            if !path.is_file() {
                return Err(usage(format!(
                    "`{}` is neither a surface family (hyperplane, lpsphere, staircase) nor a descriptor file",
                    path.display()
                )));
            }
            return Ok(MonotoneGraphSurface::from_descriptor(&read(path)?)?);
        }
    };
    s.map_err(|e| usage(e.to_string()))
}

fn surface(args: &SurfaceArgs) -> Result<MonotoneGraphSurface, CliError> {
    build_surface(&args.surface, args.n, args.p, args.depth)
}

fn tolerance(tol: Option<f64>, s: &MonotoneGraphSurface) -> Result<f64, CliError> {
    let tol = tol.unwrap_or_else(|| default_tolerance(s.dim()));
    if tol > 0.0 && tol.is_finite() {
        Ok(tol)
    } else {
        Err(usage(format!("--tol must be positive, got {tol}")))
    }
}

fn cover_json(cover: &GridCover) -> Result<Value, CliError> {
    let bound = if cover.dim >= 2 {
        Some(covering_bound(cover)?.value)
    } else {
        None
    };
    Ok(json!({
        "m": cover.m,
        "dim": cover.dim,
        "count": cover.count(),
        "bound": bound,
        "volumeRatio": cover.volume_ratio(),
        "exact": cover.exact,
    }))
}

pub fn run(command: &Command, global: &Global) -> Result<Report, CliError> {
    match command {
        Command::Check { points } => {
            let set = parse_point_set(&read(points)?)?;
            let c = set.classify();
            Ok(Report::new(json!({
                "dim": set.dim(),
                "size": set.len(),
                "isAntichain": c.is_antichain,
                "isWeakAntichain": c.is_weak_antichain,
            })))
        }
        Command::Partition { points } => {
            let set = parse_point_set(&read(points)?)?;
            let cert = greedy_partition(&set)?;
            let mut t = Table::coords(["part"], set.dim());
            for (i, part) in cert.parts.iter().enumerate() {
                point_rows(&mut t, &[i.to_string()], part);
            }
            let valid = cert.is_valid();
            Ok(Report::new(json!({
                "dim": set.dim(),
                "size": set.len(),
                "valid": valid,
                "parts": cert.parts.iter().map(points_json).collect::<Vec<_>>(),
                "partSizes": cert.part_sizes(),
                "partProjectionSizes": cert.part_projection_sizes,
            }))
            .with_table(t)
            .failing_if(!valid))
        }
        Command::Gap { points } => {
            let set = parse_point_set(&read(points)?)?;
            let g = projection_gap(&set);
            Ok(Report::new(json!({
                "size": g.set_size,
                "projections": g.projection_sizes,
                "gap": g.gap,
            })))
        }
        Command::GapScan { n, m, k, samples } => {
            if *n == 0 || *m < 1 {
                return Err(usage("--n and --m must be at least 1"));
            }
            let (scan, mode) = match samples {
                Some(s) => (random_gap_scan(*n, *m, *k, *s, global.seed)?, "random"),
                None => (
                    exhaustive_gap_scan(*n, *m, *k, global.budget.unwrap_or(DEFAULT_BUDGET))?,
                    "exhaustive",
                ),
            };
            Ok(Report::new(json!({
                "n": n,
                "m": m,
                "k": k,
                "mode": mode,
                "minGap": scan.min_gap,
                "examined": scan.examined,
                "witness": scan.witness.as_ref().map(points_json),
            })))
        }
        Command::Width { n, m, order, construction: closed } => {
            let mode = match order {
                Order::Strict => OrderMode::StrictProduct,
                Order::Weak => OrderMode::StrongAll,
            };
            let poset = GridPoset::new(*n, *m, mode).map_err(|e| usage(e.to_string()))?;
            let budget = global.budget.map_or(DEFAULT_WIDTH_BUDGET, |b| b.min(usize::MAX as u128) as usize);
            let r = if *closed {
                construction(&poset)?
            } else {
                max_antichain(&poset, budget)?
            };
            let json = json!({
                "n": n,
                "m": m,
                "order": format!("{order:?}").to_lowercase(),
                "width": r.width,
                "method": format!("{:?}", r.method),
                "witness": points_json(&r.witness),
            });
            Ok(points_report(json, &r.witness))
        }
        Command::Layer { n, m, level } => {
            let level = level.unwrap_or(n * m.saturating_sub(1) / 2);
            let set = layer_construct(*n, *m, level).map_err(|e| usage(e.to_string()))?;
            let json = json!({"n": n, "m": m, "level": level, "size": set.len(), "points": points_json(&set)});
            Ok(points_report(json, &set))
        }
        Command::Wn { n, m } => {
            let set = wn_construct(*n, *m).map_err(|e| usage(e.to_string()))?;
            let json = json!({"n": n, "m": m, "size": set.len(), "points": points_json(&set)});
            Ok(points_report(json, &set))
        }
        Command::Cover { m, m_list, surface, n, p, depth, points } => {
            let target = match (surface, points) {
                (Some(name), None) => SetSampler::Surface(build_surface(name, *n, *p, *depth)?),
                (None, Some(path)) => {
                    let (dim, pts) = parse_real_points(&read(path)?)?;
                    SetSampler::points(dim, pts)?
                }
                _ => return Err(usage("give exactly one of --surface or --points")),
            };
            match (m, m_list) {
                (Some(m), None) => {
                    if *m == 0 {
                        return Err(usage("--m must be at least 1"));
                    }
                    Ok(Report::new(cover_json(&grid_cover(&target, *m)?)?))
                }
                (None, Some(ms)) => {
                    if ms.is_empty() || ms.contains(&0) {
                        return Err(usage("--m-list needs positive resolutions"));
                    }
                    let mut curve = Vec::new();
                    let mut t = Table::new(["m", "count", "volumeRatio", "bound"]);
                    for &m in ms {
                        let c = cover_json(&grid_cover(&target, m)?)?;
                        t.push(["m", "count", "volumeRatio", "bound"].iter().map(|k| match &c[*k] {
                            Value::Null => String::new(),
                            v => v.to_string(),
                        }).collect());
                        curve.push(c);
                    }
                    let dim = if ms.iter().collect::<std::collections::BTreeSet<_>>().len() >= 2 {
                        let d = box_dimension(&target, ms)?;
                        json!({"dimension": d.dimension, "residual": d.residual})
                    } else {
                        Value::Null
                    };
                    Ok(Report::new(json!({"curve": curve, "boxDimension": dim})).with_table(t))
                }
                _ => Err(usage("give exactly one of --m or --m-list")),
            }
        }
        Command::Measure { surface: args, axis, tol } => {
            let s = surface(args)?;
            let tol = tolerance(*tol, &s)?;
            let (quantity, estimate) = match axis {
                Some(i) if *i >= s.dim() => {
                    return Err(usage(format!("--axis {i} out of range for n = {}", s.dim())))
                }
                Some(i) => ("projection", projection_measure(&s, *i, tol)?),
                None => ("surface", surface_measure(&s, tol)?),
            };
            let mut json = serde_json::to_value(estimate)?;
            json["surface"] = json!(s.family_name());
            json["n"] = json!(s.dim());
            json["quantity"] = json!(quantity);
            json["axis"] = json!(axis);
            Ok(Report::new(json))
        }
        Command::Verify { surface: args, tol } => {
            let s = surface(args)?;
            let tol = tolerance(*tol, &s)?;
            let r = verify_projection_inequality(&s, tol)?;
            let mut json = serde_json::to_value(&r)?;
            json["surface"] = json!(s.family_name());
            let mut t = Table::new(["surface", "n", "left", "right", "nBound", "passes", "withinNBound"]);
            t.push(vec![
                s.family_name().into(),
                r.n.to_string(),
                r.left.value.to_string(),
                r.right.to_string(),
                r.n_bound.to_string(),
                r.passes.to_string(),
                r.within_n_bound.to_string(),
            ]);
            Ok(Report::new(json).with_table(t).failing_if(!r.passes))
        }
        Command::Skew2d { surface: args, tol } => {
            let s = surface(args)?;
            if !tol.is_finite() || *tol <= 0.0 {
                return Err(usage("--tol must be positive"));
            }
            if s.dim() != 2 {
                return Err(usage(format!("skew2d needs a planar surface, got n = {}", s.dim())));
            }
            let r = skew_measures_2d(&s, *tol)?;
            let mut t = Table::new(["surface", "length", "delta1", "delta2", "deltaSum", "passes"]);
            t.push(vec![
                s.family_name().into(),
                r.surface.value.to_string(),
                r.deltas[0].value.to_string(),
                r.deltas[1].value.to_string(),
                r.delta_sum.value.to_string(),
                r.passes.to_string(),
            ]);
            Ok(Report::new(serde_json::to_value(&r)?).with_table(t).failing_if(!r.passes))
        }
        Command::Shear { points, epsilon, inverse, check_pairs } => {
            let (dim, pts) = parse_real_points(&read(points)?)?;
            let params = ShearParams::new(dim, *epsilon).map_err(|e| usage(e.to_string()))?;
            let mapped = pts
                .iter()
                .map(|x| if *inverse { shear_inverse(x, &params) } else { shear(x, &params) })
                .collect::<Result<Vec<_>, _>>()?;
            let check = match check_pairs {
                Some(k) => Some(lipschitz_sample_check(
                    &LipschitzMap::ShearInverse(params),
                    params.lipschitz(),
                    *k,
                    global.seed,
                )?),
                None => None,
            };
            let mut t = Table::coords(Vec::<String>::new(), dim);
            for y in &mapped {
                t.push(y.iter().map(|v| v.to_string()).collect());
            }
            let failed = check.as_ref().is_some_and(|c| !c.passes);
            Ok(Report::new(json!({
                "n": dim,
                "epsilon": epsilon,
                "lipschitz": params.lipschitz(),
                "inverse": inverse,
                "points": mapped,
                "lipschitzCheck": check,
            }))
            .with_table(t)
            .failing_if(failed))
        }
        Command::Slab { n, c } => {
            let v = slab_volume(*n, *c).map_err(|e| usage(e.to_string()))?;
            Ok(Report::new(json!({"n": n, "c": c, "volume": v})))
        }
        Command::Staircase { depth, vertices } => {
            let s = singular_staircase(*depth).map_err(|e| usage(e.to_string()))?;
            let mut json = json!({"depth": depth, "length": s.length});
            if *vertices {
                json["vertices"] = json!(s.vertices.iter().map(|(x, y)| [x, y]).collect::<Vec<_>>());
                let mut t = Table::new(["x", "y"]);
                for (x, y) in &s.vertices {
                    t.push(vec![x.to_string(), y.to_string()]);
                }
                return Ok(Report::new(json).with_table(t));
            }
            Ok(Report::new(json))
        }
        Command::PSweep { n, p_list, tol } => {
            let mut rows = Vec::new();
            let mut t = Table::new(["p", "value", "errorBound", "method", "converged"]);
            for &p in p_list {
                let s = MonotoneGraphSurface::lp_sphere(*n, p).map_err(|e| usage(e.to_string()))?;
                let e = surface_measure(&s, tolerance(*tol, &s)?)?;
                t.push(vec![
                    p.to_string(),
                    e.value.to_string(),
                    e.error_bound.to_string(),
                    format!("{:?}", e.method),
                    e.converged.to_string(),
                ]);
                let mut row = serde_json::to_value(e)?;
                row["p"] = json!(p);
                rows.push(row);
            }
            Ok(Report::new(json!({"n": n, "rows": rows})).with_table(t))
        }
    }
}
