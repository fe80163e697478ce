use std::fs;

use num_complex::Complex64;
use serde_json::{json, Value};

use selftile::free_group::{
    consistency_check_lambda, endo_subdivision, generator_vectors, standard_endo, Endomorphism, Word,
};
use selftile::geometry::Point;
use selftile::lattice_tiling::{
    grow_tiling_with, overlap_agreement, refine_boundary, subdivide_surrounding, GrowOptions, Lattice,
    LatticePoint, LatticeTriangle, PatchTiling, Setup, Surrounding,
};
use selftile::number_field::{
    classify_perron, cyclotomic_in_field, minimal_factor, roots::find_roots_with, verifies_exactly,
    FieldContext, IntPolynomial, PerronClass,
};
use selftile::par::Exec;
use selftile::spectral::{is_primitive, perron_eigen_with, SpectralError};
use selftile::tiling_render::{
    boundary_sequence, hausdorff_distance, render_svg, signed_area, simplicity_check, subdivision_layout,
    word_to_path, Polyline, RenderConfig, SvgItem,
};

use crate::error::CliError;
use crate::output::{emit, SCHEMA_VERSION};
use crate::{Cli, Command, Global, Result};

pub fn run(cli: &Cli) -> Result<()> {
    let g = &cli.global;
    match &cli.command {
        Command::PerronCheck { poly } => perron_check(g, poly),
        Command::TileEndo { pqr, endo, k } => tile_endo(g, pqr.as_deref(), endo.as_deref(), *k),
        Command::Lattice { poly, generations, symmetric, check_subdivision } => {
            lattice(g, poly, *generations, *symmetric, *check_subdivision, None)
        }
        Command::Grow { poly, generations, n, no_central, cap } => {
            let opts = GrowOptions { max_triangles: *cap, with_central_tile: !no_central, exec: Exec::default() };
            lattice(g, poly, *generations, None, false, Some((*n, opts)))
        }
        Command::RefineBoundary { poly, triangle, k, n } => refine(g, poly, *triangle, *k, *n),
        Command::Zeta { poly, m, require } => zeta(g, poly, *m, *require),
    }
}

fn header(command: &str, g: &Global) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "tol": g.tol,
        "max_iter": g.max_iter,
        "seed": g.seed,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn c(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn parse_poly(s: &str) -> Result<IntPolynomial> {
    s.parse::<IntPolynomial>().map_err(|e| CliError::Usage(e.to_string()))
}

fn class_name(c: PerronClass) -> &'static str {
    match c {
        PerronClass::NotAlgebraicallyValid => "NotAlgebraicallyValid",
        PerronClass::NotPerron => "NotPerron",
        PerronClass::RealPerron => "RealPerron",
        PerronClass::ComplexPerron => "ComplexPerron",
    }
}

fn perron_check(g: &Global, poly: &str) -> Result<()> {
    let p = parse_poly(poly)?;
    let class = classify_perron(&p);
    let roots = find_roots_with(&p, g.tol.max(1e-12), g.max_iter.min(100_000))?;
    let lambda = roots[0].value;
    let report = merge(
        header("perron-check", g),
        json!({
            "polynomial": p.coeffs(),
            "display": p.to_string(),
            "class": class_name(class),
            "roots": roots.iter().map(|r| json!({"value": c(r.value), "radius": r.radius})).collect::<Vec<_>>(),
            "lambda": c(lambda),
            "modulus": lambda.norm(),
            "modulus_sq": lambda.norm_sqr(),
        }),
    );
    emit(g.out.as_deref(), &report, &[])?;
    if class.is_perron() {
        Ok(())
    } else {
        Err(CliError::Refusal(format!("{} is {}", p, class_name(class))))
    }
}

fn load_endo(pqr: Option<&str>, endo: Option<&std::path::Path>) -> Result<Endomorphism> {
    if let Some(s) = pqr {
        let v: Vec<i64> = s
            .split(',')
            .map(|t| t.trim().parse::<i64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| CliError::Usage(format!("--pqr expects n,p,q,r: {e}")))?;
        let [n, p, q, r] = v[..] else {
            return Err(CliError::Usage("--pqr expects four integers n,p,q,r".into()));
        };
        if n < 2 {
            return Err(CliError::Refusal("n must be at least 2".into()));
        }
        return Ok(standard_endo(n as usize, p, q, r)?);
    }
    let path = endo.expect("clap requires one input");
    let text = fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(Endomorphism::from_json(&text)?)
}

/// Lays the polylines out left to right with a gap.
fn side_by_side(lines: Vec<(Polyline, usize)>) -> Vec<SvgItem> {
    let mut x = 0.0;
    let mut out = Vec::new();
    for (p, color) in lines {
        let Some((lo, hi)) = p.bbox() else { continue };
        let shift = Complex64::new(x - lo[0], 0.0);
        x += hi[0] - lo[0] + 0.25 * (hi[1] - lo[1]).max(hi[0] - lo[0]);
        out.push(SvgItem { polyline: p.translate(shift), color });
    }
    out
}

fn tile_endo(g: &Global, pqr: Option<&str>, endo: Option<&std::path::Path>, k: u32) -> Result<()> {
    let phi = load_endo(pqr, endo)?;
    let n = phi.n();
    let charpoly = IntPolynomial::new(phi.characteristic_polynomial())?;
    let poly = minimal_factor(&charpoly)?;
    let class = classify_perron(&poly);
    let lambda = find_roots_with(&poly, g.tol.max(1e-12), g.max_iter)?[0].value;
    if lambda.im == 0.0 {
        return Err(CliError::Refusal(format!(
            "expansion polynomial {poly} has a real dominant root; the path map needs a nonreal λ"
        )));
    }
    let consistency = consistency_check_lambda(&phi, lambda, g.tol);
    if !consistency.passed {
        return Err(CliError::Refusal(format!(
            "endomorphism is not consistent with λ = {lambda}: residuals {:?}",
            consistency.residuals
        )));
    }
    let sub = endo_subdivision(&phi)?;
    let eig = match perron_eigen_with(&sub.matrix, g.tol, g.max_iter) {
        Ok(e) => Some(e),
        Err(SpectralError::NotPrimitive) => None,
        Err(e) => return Err(e.into()),
    };
    let gens = generator_vectors(lambda, n);
    let lsq = lambda.norm_sqr();
    let mut areas = Vec::new();
    for &(i, j) in &sub.pairs {
        areas.push(signed_area(&word_to_path(&Word::basic_commutator(i, j), &gens)?));
    }
    let ma = sub.matrix.apply(&areas);
    let area_residuals: Vec<f64> =
        ma.iter().zip(&areas).map(|(x, a)| (x - lsq * a).abs() / (lsq * a.abs()).max(f64::MIN_POSITIVE)).collect();

    let ks: Vec<u32> = (0..=k).collect();
    let mut approximants = Vec::new();
    let mut finals = Vec::new();
    let mut layout_items = Vec::new();
    for (s, &pair) in sub.pairs.iter().enumerate() {
        let seq = boundary_sequence(Exec::default(), &phi, pair, &ks, lambda)?;
        let mut dists = Vec::new();
        for w in seq.windows(2) {
            dists.push(hausdorff_distance(&w[0], &w[1])?);
        }
        let ratios: Vec<f64> = dists.windows(2).map(|d| d[1] / d[0]).collect();
        approximants.push(json!({
            "pair": [pair.0, pair.1],
            "vertices": seq.iter().map(|p| p.len()).collect::<Vec<_>>(),
            "hausdorff": dists,
            "ratios": ratios,
            "simple": seq.iter().map(simplicity_check).collect::<Vec<_>>(),
        }));
        let last = seq.last().expect("k + 1 approximants").clone();
        finals.push((last.clone(), s));
        if s == 0 {
            let parent = last.scale(lambda);
            let level = k.saturating_sub(1);
            let mut items = vec![SvgItem { polyline: parent, color: 6 }];
            for p in subdivision_layout(&phi, pair, lambda, level)? {
                let t = sub.pairs.iter().position(|&q| q == p.type_index).unwrap_or(0);
                let child = selftile::tiling_render::boundary_approx(&phi, p.type_index, level, lambda)?;
                items.push(SvgItem { polyline: child.translate(p.translation), color: t });
            }
            layout_items = items;
        }
    }
    let placements: Vec<Value> = sub
        .pairs
        .iter()
        .map(|&pair| {
            subdivision_layout(&phi, pair, lambda, k).map(|ps| {
                json!({
                    "pair": [pair.0, pair.1],
                    "placements": serde_json::to_value(ps).expect("placements serialize"),
                })
            })
        })
        .collect::<std::result::Result<_, _>>()?;
    let report = merge(
        header("tile-endo", g),
        json!({
            "endomorphism": serde_json::from_str::<Value>(&phi.to_json()).expect("endomorphism json"),
            "abelianization_charpoly": charpoly.coeffs(),
            "polynomial": poly.coeffs(),
            "class": class_name(class),
            "lambda": c(lambda),
            "lambda_abs_sq": lsq,
            "pairs": sub.pairs.iter().map(|p| [p.0, p.1]).collect::<Vec<_>>(),
            "subdivision_matrix": sub.matrix.entries(),
            "primitive": is_primitive(&sub.matrix),
            "perron_eigenvalue": eig.as_ref().map(|e| e.eigenvalue),
            "perron_eigenvector": eig.as_ref().map(|e| e.eigenvector.clone()),
            "perron_residual": eig.as_ref().map(|e| (e.eigenvalue - lsq).abs() / lsq),
            "areas": areas,
            "area_residuals": area_residuals,
            "consistency_residuals": consistency.residuals,
            "level": k,
            "approximants": approximants,
            "layout": placements,
        }),
    );
    let config = RenderConfig::default();
    let tiles_svg = render_svg(&side_by_side(finals), &config);
    let layout_svg = render_svg(&layout_items, &config);
    emit(g.out.as_deref(), &report, &[(".svg", tiles_svg), ("-layout.svg", layout_svg)])
}

fn field_for(poly: &str) -> Result<(FieldContext, IntPolynomial)> {
    let p = parse_poly(poly)?;
    match classify_perron(&p) {
        PerronClass::ComplexPerron => {}
        PerronClass::RealPerron => {
            return Err(CliError::Refusal(format!(
                "{p} has a real expansion; the lattice construction is only carried out for nonreal λ"
            )))
        }
        other => return Err(CliError::Refusal(format!("{p} is {}", class_name(other)))),
    }
    Ok((FieldContext::new(&p)?, p))
}

fn point_json(lat: &Lattice, v: &LatticePoint) -> Value {
    json!({"coeffs": v.0, "planar": lat.planar(&v.0)})
}

fn triangle_json(lat: &Lattice, t: &LatticeTriangle) -> Value {
    Value::Array(t.vertices.iter().map(|v| point_json(lat, v)).collect())
}

fn polygon_twice_area(lat: &Lattice, pts: &[Vec<i64>]) -> (Option<i128>, f64) {
    let mut exact = Some(0i128);
    let mut approx = 0.0;
    for i in 1..pts.len().saturating_sub(1) {
        exact = match (exact, lat.twice_area_exact(&pts[0], &pts[i], &pts[i + 1])) {
            (Some(a), Some(b)) => Some(a + b),
            _ => None,
        };
        let (a, b, c) = (lat.planar(&pts[0]), lat.planar(&pts[i]), lat.planar(&pts[i + 1]));
        approx += (b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]);
    }
    (exact, approx)
}

fn check(name: &str, passed: bool, detail: Value) -> Value {
    json!({"name": name, "passed": passed, "detail": detail})
}

fn patch_invariants(lat: &Lattice, setup: &Setup, patch: &PatchTiling) -> Vec<Value> {
    let t0: Vec<Vec<i64>> = setup.t0.iter().map(|v| v.0.clone()).collect();
    let (t0_exact, t0_area) = polygon_twice_area(lat, &t0);
    let lsq = setup.consts.lambda_abs * setup.consts.lambda_abs;
    let mut total_exact = Some(0i128);
    let mut total = 0.0;
    let mut add = |pts: &[Vec<i64>]| {
        let (e, a) = polygon_twice_area(lat, pts);
        total_exact = match (total_exact, e) {
            (Some(x), Some(y)) => Some(x + y),
            _ => None,
        };
        total += a;
    };
    for t in &patch.triangles {
        add(&t.triangle.coeffs());
    }
    for tile in &patch.central_tiles {
        add(&tile.vertices.iter().map(|v| v.0.clone()).collect::<Vec<_>>());
    }
    let g = patch.generation as i32;
    let cover = match (total_exact, t0_exact, lat.is_flat()) {
        (Some(tot), Some(a0), true) => {
            // |λ|² is the integer norm of λ for quadratic λ
            let norm = lsq.round() as i128;
            let expected = (0..g).fold(a0, |acc, _| acc * norm);
            check("exact_cover", tot == expected, json!({"exact": true, "residual": (expected - tot).to_string()}))
        }
        _ => {
            let expected = t0_area * lsq.powi(g);
            let r = (expected - total).abs() / expected.abs();
            check("exact_cover", r < 1e-9, json!({"exact": false, "relative_residual": r}))
        }
    };
    let in_t = patch.triangles.iter().all(|t| t.base.in_t(lat, setup.consts.m));
    let labels = patch.triangles.iter().all(|t| (1..=setup.consts.exponent()).contains(&t.label));
    vec![
        cover,
        check("bases_in_T", in_t, Value::Null),
        check("labels_in_range", labels, json!({"max": setup.consts.exponent()})),
        check("label_gaps", patch.label_gaps == 0, json!({"count": patch.label_gaps})),
        check("complete", !patch.truncated, json!({"generation": patch.generation})),
    ]
}

fn patch_svg(lat: &Lattice, patch: &PatchTiling) -> String {
    let poly = |pts: Vec<Point>| Polyline::new(pts, true);
    let mut items: Vec<SvgItem> = patch
        .central_tiles
        .iter()
        .map(|t| SvgItem { polyline: poly(t.vertices.iter().map(|v| lat.planar(&v.0)).collect()), color: 6 })
        .collect();
    for t in &patch.triangles {
        items.push(SvgItem { polyline: poly(t.triangle.planar(lat).to_vec()), color: (t.label as usize - 1) % 6 });
    }
    let config = RenderConfig { scale: 10.0, stroke_width: 0.2, ..RenderConfig::default() };
    render_svg(&items, &config)
}

fn lattice(
    g: &Global,
    poly: &str,
    generations: u32,
    symmetric: Option<u64>,
    check_subdivision: bool,
    grow: Option<(Option<u32>, GrowOptions)>,
) -> Result<()> {
    let (ctx, p) = field_for(poly)?;
    let lat = Lattice::new(&ctx);
    let mut setup = Setup::new(&ctx, symmetric)?;
    let (command, opts) = match grow {
        Some((n, opts)) => {
            if let Some(n) = n {
                setup.consts.n = n;
            }
            ("grow", opts)
        }
        None => ("lattice", GrowOptions::default()),
    };
    let patch = grow_tiling_with(&ctx, &setup, generations, opts)?;
    let mut invariants = patch_invariants(&lat, &setup, &patch);
    let (annulus_exact, annulus_area) = {
        let mut e = Some(0i128);
        let mut a = 0.0;
        for t in &setup.annulus {
            let (x, y) = polygon_twice_area(&lat, &t.coeffs());
            e = e.zip(x).map(|(u, v)| u + v);
            a += y;
        }
        (e, a)
    };
    invariants.push(check(
        "annulus_area",
        true,
        json!({"twice_area": annulus_exact.map(|x| x.to_string()), "twice_area_float": annulus_area}),
    ));
    if check_subdivision {
        let center = &setup.annulus[0];
        let x1 = Surrounding::from_tiles(center, &setup.annulus);
        let sub = subdivide_surrounding(&ctx, &setup, &x1, true)?;
        let bound = setup.consts.m as f64 / setup.consts.lambda_abs;
        let worst = sub
            .triangles
            .iter()
            .chain(&sub.fill)
            .chain(&sub.children)
            .map(|t| t.edge_extent(&lat).0)
            .fold(0.0, f64::max);
        invariants.push(check(
            "subdivision_edges",
            worst < bound,
            json!({"max_edge": worst, "bound": bound, "triangles": sub.triangles.len(), "children": sub.children.len()}),
        ));
        invariants.push(check(
            "subdivision_cover",
            sub.cover_residual == 0.0 || !sub.cover_exact,
            json!({"exact": sub.cover_exact, "residual": sub.cover_residual}),
        ));
        let neighbour = x1
            .ring
            .iter()
            .find(|r| Surrounding::from_tiles(r, &setup.annulus).contains(center))
            .cloned();
        if let Some(nb) = neighbour {
            let x2 = Surrounding::from_tiles(&nb, &setup.annulus);
            let r = overlap_agreement(&ctx, &setup, &x1, &x2, true)?;
            invariants.push(check("overlap_agreement", r.agree, serde_json::to_value(&r).expect("report")));
        }
    }
    let all_pass = invariants.iter().all(|v| v["passed"] == Value::Bool(true) || v["name"] == "complete");
    let report = merge(
        header(command, g),
        json!({
            "polynomial": p.coeffs(),
            "lambda": c(ctx.lambda()),
            "constants": serde_json::to_value(&setup.consts).expect("constants"),
            "t0": setup.t0.iter().map(|v| point_json(&lat, v)).collect::<Vec<_>>(),
            "annulus": setup.annulus.iter().map(|t| triangle_json(&lat, t)).collect::<Vec<_>>(),
            "patch": {
                "generation": patch.generation,
                "subdivisions": patch.subdivisions,
                "truncated": patch.truncated,
                "covered_radius": patch.covered_radius,
                "triangles": patch.triangles.iter().map(|t| json!({
                    "vertices": triangle_json(&lat, &t.triangle),
                    "label": t.label,
                })).collect::<Vec<_>>(),
                "central_tiles": patch.central_tiles.iter().map(|t| json!({
                    "offset": t.offset.0,
                    "vertices": t.vertices.iter().map(|v| point_json(&lat, v)).collect::<Vec<_>>(),
                })).collect::<Vec<_>>(),
            },
            "invariants": invariants,
            "all_invariants_hold": all_pass,
        }),
    );
    emit(g.out.as_deref(), &report, &[(".svg", patch_svg(&lat, &patch))])?;
    if all_pass {
        Ok(())
    } else {
        Err(CliError::Refusal("an invariant check failed; see the report".into()))
    }
}

fn refine(g: &Global, poly: &str, triangle: usize, k: u32, n: Option<u32>) -> Result<()> {
    let (ctx, p) = field_for(poly)?;
    let lat = Lattice::new(&ctx);
    let mut setup = Setup::new(&ctx, None)?;
    if let Some(n) = n {
        setup.consts.n = n;
    }
    let t = setup
        .annulus
        .get(triangle)
        .ok_or_else(|| CliError::Refusal(format!("annulus has {} triangles", setup.annulus.len())))?
        .clone();
    let curve = refine_boundary(&ctx, &setup, &t, k)?;
    let report = merge(
        header("refine-boundary", g),
        json!({
            "polynomial": p.coeffs(),
            "exponent": curve.exponent,
            "triangle": triangle_json(&lat, &t),
            "level": curve.level,
            "vertices": curve.vertices.len(),
            "hausdorff": curve.hausdorff,
            "fitted_c": curve.fitted_c,
            "simple": true,
            "curve": curve.planar,
        }),
    );
    let items = vec![
        SvgItem { polyline: Polyline::new(t.planar(&lat).to_vec(), true), color: 6 },
        SvgItem { polyline: Polyline::new(curve.planar.clone(), true), color: 0 },
    ];
    let config = RenderConfig { scale: 20.0, stroke_width: 0.3, fill: false, ..RenderConfig::default() };
    emit(g.out.as_deref(), &report, &[(".svg", render_svg(&items, &config))])
}

fn zeta(g: &Global, poly: &str, m: u64, require: bool) -> Result<()> {
    let p = parse_poly(poly)?;
    let ctx = FieldContext::new(&p)?;
    let found = cyclotomic_in_field(&ctx, m);
    let representation = found.as_ref().map(|e| match e.to_ints() {
        Some(v) => json!(v),
        None => json!(e.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>()),
    });
    let report = merge(
        header("zeta", g),
        json!({
            "polynomial": p.coeffs(),
            "m": m,
            "present": found.is_some(),
            "representation": representation,
            "verified_exactly": found.as_ref().map(|e| verifies_exactly(&ctx, m, e)),
        }),
    );
    emit(g.out.as_deref(), &report, &[])?;
    if require && found.is_none() {
        return Err(CliError::Refusal(format!("e^(2πi/{m}) is not in ℚ(λ) for {p}")));
    }
    Ok(())
}
