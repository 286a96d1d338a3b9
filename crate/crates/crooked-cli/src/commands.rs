//! The five subcommands: `tiles`, `nielsen`, `domain`, `verify`, `farey`.

use std::collections::{BTreeMap, BTreeSet};

use crooked_core::crooked::{
    analyze_cit, cit_disjointness_check, mesh_crooked_plane, CrookedHalfspace, CrookedPlane,
};
use crooked_core::farey::enumerate_tree;
use crooked_core::lorentz::Isometry;
use crooked_core::margulis::{
    affine_coxeter, chart_coords, corner_matrices, edge_quadrilateral_at, enumerate_tiles,
    node_geometry, polygon_is_convex, tile_contains, NodeGeometry, TileLocation, TilingAtlas,
    VertexCoefficients,
};
use crooked_core::suites::{self, SuiteConfig};
use crooked_core::surface::{
    coxeter_extension, fixed_point_cycle_with_boundary_trace, fundamental_triangle, FuchsianRep,
};

use crate::config::Config;
use crate::report::Report;
use crate::svg::{depth_fill, Svg};
use crate::{obj, CliError, CliResult};

fn build_rep(config: &Config) -> CliResult<FuchsianRep> {
    let (x, y, z) = config.traces;
    FuchsianRep::from_traces(x, y, z).map_err(|e| {
        CliError::invalid(format!(
            "traces ({x}, {y}, {z}) do not give a hyperbolic one-holed torus: {e}"
        ))
    })
}

fn build_atlas(config: &Config, rep: &FuchsianRep) -> CliResult<TilingAtlas> {
    enumerate_tiles(rep, config.depth, config.fixed_point_choice)
        .map_err(|e| CliError::invalid(format!("tiling atlas failed: {e}")))
}

/// Clip the line `p(t) = p0 + t v` (2-d) to a rectangle; returns endpoints.
fn clip_line(
    p0: [f64; 2],
    v: [f64; 2],
    min: [f64; 2],
    max: [f64; 2],
) -> Option<([f64; 2], [f64; 2])> {
    let mut t0 = f64::NEG_INFINITY;
    let mut t1 = f64::INFINITY;
    for axis in 0..2 {
        if v[axis].abs() < 1e-15 {
            if p0[axis] < min[axis] || p0[axis] > max[axis] {
                return None;
            }
            continue;
        }
        let mut a = (min[axis] - p0[axis]) / v[axis];
        let mut b = (max[axis] - p0[axis]) / v[axis];
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        t0 = t0.max(a);
        t1 = t1.min(b);
    }
    if t0 >= t1 {
        return None;
    }
    Some((
        [p0[0] + t0 * v[0], p0[1] + t0 * v[1]],
        [p0[0] + t1 * v[0], p0[1] + t1 * v[1]],
    ))
}

/// Figure of the tiling of the proper deformation space in the chart
/// plane, with the vanishing lines of the enumerated primitives.
pub fn cmd_tiles(config: &Config) -> CliResult<(String, String)> {
    let rep = build_rep(config)?;
    let atlas = build_atlas(config, &rep)?;
    let convex = polygon_is_convex(&atlas.chart_polygon, 1e-9);

    let mut svg = Svg::new();
    svg.comment("tiling of the proper affine deformation space");
    svg.comment(&format!(
        "traces = {},{},{} depth = {}",
        config.traces.0, config.traces.1, config.traces.2, config.depth
    ));
    svg.comment("projection: chart plane alpha_A + alpha_B + alpha_C = 1, orthonormal plane coordinates");

    // Chart bounds from the boundary polygon, padded; the covector lines
    // are clipped against this rectangle.
    let mut min = [f64::INFINITY; 2];
    let mut max = [f64::NEG_INFINITY; 2];
    for p in &atlas.chart_polygon {
        min[0] = min[0].min(p[0]);
        min[1] = min[1].min(p[1]);
        max[0] = max[0].max(p[0]);
        max[1] = max[1].max(p[1]);
    }
    let pad = 0.25 * (max[0] - min[0]).max(max[1] - min[1]);
    let view_min = [min[0] - pad, min[1] - pad];
    let view_max = [max[0] + pad, max[1] + pad];

    // Vanishing lines of the Margulis invariants of the enumerated
    // primitives, drawn underneath the tiles.
    let mut primitives: BTreeMap<(i64, i64), [f64; 6]> = BTreeMap::new();
    for tile in &atlas.tiles {
        let node = &atlas.nodes[tile.node];
        for slot in 0..3 {
            let f = node.triple.fractions()[slot];
            primitives
                .entry((f.p(), f.q()))
                .or_insert(tile.alpha_rows[slot]);
        }
    }
    let mut lines = 0usize;
    for row in primitives.values() {
        let g = atlas.covector(row);
        // Intersection of {g·x = 0} with the chart plane {Σx = 1}:
        // direction v = g × (1,1,1) (sum-free), particular point from the
        // centroid shifted within the plane.
        let v3 = [g[1] - g[2], g[2] - g[0], g[0] - g[1]];
        let norm_v = (v3[0] * v3[0] + v3[1] * v3[1] + v3[2] * v3[2]).sqrt();
        if norm_v < 1e-12 {
            continue;
        }
        let c = [1.0 / 3.0; 3];
        let gc = g[0] * c[0] + g[1] * c[1] + g[2] * c[2];
        let gsum = g[0] + g[1] + g[2];
        let w = [g[0] - gsum / 3.0, g[1] - gsum / 3.0, g[2] - gsum / 3.0];
        let gw = g[0] * w[0] + g[1] * w[1] + g[2] * w[2];
        if gw.abs() < 1e-14 {
            continue;
        }
        let s = -gc / gw;
        let p0 = [c[0] + s * w[0], c[1] + s * w[1], c[2] + s * w[2]];
        let pa = chart_coords(&[p0[0] + v3[0], p0[1] + v3[1], p0[2] + v3[2]]);
        let pb = chart_coords(&p0);
        let (Ok(pa), Ok(pb)) = (pa, pb) else { continue };
        let dir = [pa[0] - pb[0], pa[1] - pb[1]];
        if let Some((a, b)) = clip_line(pb, dir, view_min, view_max) {
            svg.line(a, b, "#c8c8c8", 0.003 * (max[0] - min[0]).max(0.1));
            lines += 1;
        }
    }

    // Tiles, filled by depth, boundary edges stroked.
    let stroke_w = 0.002 * (max[0] - min[0]).max(0.1);
    for tile in &atlas.tiles {
        let node = &atlas.nodes[tile.node];
        let mut pts = Vec::with_capacity(3);
        for c in &tile.corners {
            let p = chart_coords(c)
                .map_err(|e| CliError::invalid(format!("corner outside the chart: {e}")))?;
            pts.push(p);
        }
        svg.polygon(&pts, depth_fill(node.depth), "#1a1a2e", stroke_w);
    }
    // Outer boundary of the tame region.
    let n = atlas.chart_polygon.len();
    for i in 0..n {
        svg.line(
            atlas.chart_polygon[i],
            atlas.chart_polygon[(i + 1) % n],
            "#7a1f1f",
            stroke_w * 1.8,
        );
    }

    let mut report = Report::new("tiles");
    report.kv(
        "traces",
        format!("{},{},{}", config.traces.0, config.traces.1, config.traces.2),
    );
    report.kv("depth", config.depth);
    report.kv("tile_count", atlas.tiles.len());
    report.kv("boundary_edges", atlas.chart_polygon.len());
    report.kv("expected_boundary_edges", 3usize * (1 << config.depth));
    report.kv("convex", convex);
    report.kv("covector_lines", lines);
    if !convex {
        return Err(CliError::verification(
            "chart polygon failed the convexity check".to_string(),
        ));
    }
    Ok((svg.finish(), report.finish()))
}

fn quantized_key(m: &Isometry) -> [i64; 9] {
    let mut key = [0i64; 9];
    let mut k = 0;
    for row in m.matrix() {
        for v in row {
            key[k] = (v * 1e9).round() as i64;
            k += 1;
        }
    }
    key
}

/// Klein-model figure of the orbit of the fundamental ideal triangle under
/// the involution words.
pub fn cmd_nielsen(config: &Config) -> CliResult<(String, usize)> {
    let rep = build_rep(config)?;
    let ext = coxeter_extension(rep.a_mat(), rep.b_mat())
        .map_err(|e| CliError::invalid(format!("extension failed: {e}")))?;
    let (x, y, z) = config.traces;
    let k_trace = x * x + y * y + z * z - x * y * z - 2.0;
    let cycle = fixed_point_cycle_with_boundary_trace(&ext, config.fixed_point_choice, k_trace)
        .map_err(|e| CliError::invalid(format!("fixed point cycle failed: {e}")))?;
    let ftri = fundamental_triangle(&ext, &cycle)
        .map_err(|e| CliError::invalid(format!("fundamental triangle failed: {e}")))?;

    // All reduced involution words of length ≤ bound, the identity
    // included, composed through the 2×2 lifts.
    let mut elements: Vec<Isometry> = vec![Isometry::IDENTITY];
    let mut layer: Vec<(usize, crooked_core::hyperbolic::Mat2)> = Vec::new();
    for len in 1..=config.words {
        if len == 1 {
            layer = (0..3).map(|i| (i, ext.iota_sl2[i])).collect();
        } else {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for (last, g) in &layer {
                for i in 0..3 {
                    if i != *last {
                        next.push((i, g.mul(&ext.iota_sl2[i])));
                    }
                }
            }
            layer = next;
        }
        for (_, m) in &layer {
            elements.push(
                crooked_core::hyperbolic::from_sl2(m)
                    .map_err(|e| CliError::invalid(format!("orbit element failed: {e}")))?,
            );
        }
    }
    let mut seen: BTreeSet<[i64; 9]> = BTreeSet::new();
    let mut triangles = 0usize;

    let mut svg = Svg::new();
    svg.comment("orbit of the fundamental ideal triangle under the involution group");
    svg.comment(&format!(
        "traces = {},{},{} word length <= {}",
        config.traces.0, config.traces.1, config.traces.2, config.words
    ));
    svg.comment("projection: Klein model (x/z, y/z); geodesics are straight chords");
    svg.circle([0.0, 0.0], 1.0, "#333333", 0.004);
    let cusps = [ftri.n, ftri.iota0_n, ftri.iota2_n];
    for g in &elements {
        if !seen.insert(quantized_key(g)) {
            continue;
        }
        let mut pts = Vec::with_capacity(3);
        for cusp in &cusps {
            let v = g.apply(*cusp);
            pts.push([v.x / v.z, v.y / v.z]);
        }
        svg.polygon(&pts, "#dcebf7", "#2a4d69", 0.003);
        triangles += 1;
    }
    Ok((svg.finish(), triangles))
}

/// Coefficient source for `cmd_domain`.
pub enum DomainTarget {
    Coefficients([f64; 6]),
    Alpha([f64; 3]),
}

enum ResolvedDomain {
    Triangle(VertexCoefficients),
    Edge { slot: usize, u1: [f64; 2], u2: [f64; 2] },
}

fn resolve_from_coefficients(u: &[f64; 6]) -> CliResult<ResolvedDomain> {
    let pairs = [[u[0], u[1]], [u[2], u[3]], [u[4], u[5]]];
    if u.iter().any(|v| *v < 0.0) {
        return Err(CliError::invalid(
            "vertex coefficients must be nonnegative".to_string(),
        ));
    }
    let zero_slots: Vec<usize> = (0..3)
        .filter(|&i| pairs[i][0] == 0.0 && pairs[i][1] == 0.0)
        .collect();
    let has_partial_zero = (0..3).any(|i| {
        (pairs[i][0] == 0.0) != (pairs[i][1] == 0.0)
    });
    if has_partial_zero {
        return Err(CliError::invalid(
            "a face degenerates only when both of its coefficients vanish".to_string(),
        ));
    }
    match zero_slots.len() {
        0 => Ok(ResolvedDomain::Triangle(pairs)),
        1 => {
            let slot = zero_slots[0];
            Ok(ResolvedDomain::Edge {
                slot,
                u1: pairs[(slot + 1) % 3],
                u2: pairs[(slot + 2) % 3],
            })
        }
        _ => Err(CliError::invalid(
            "at most one face may degenerate (corners are never proper)".to_string(),
        )),
    }
}

fn resolve_from_alpha(
    config: &Config,
    rep: &FuchsianRep,
    atlas: &TilingAtlas,
    alpha: &[f64; 3],
) -> CliResult<(usize, ResolvedDomain)> {
    for tile in &atlas.tiles {
        let location = tile_contains(tile, alpha)
            .map_err(|e| CliError::invalid(format!("tile membership failed: {e}")))?;
        if location == TileLocation::Outside {
            continue;
        }
        if matches!(location, TileLocation::Corner(_)) {
            return Err(CliError::invalid(
                "the target direction is a tile corner: such deformations are never proper"
                    .to_string(),
            ));
        }
        // Solve ½α = Σ μ_i w_i on this tile, w_i the slot-i corner images.
        let node = &atlas.nodes[tile.node];
        let geom = node_geometry(rep, &node.words, config.fixed_point_choice)
            .map_err(|e| CliError::invalid(format!("node geometry failed: {e}")))?;
        let ms = corner_matrices(&geom.ext, &geom.ftri)
            .map_err(|e| CliError::invalid(format!("corner matrices failed: {e}")))?;
        let mut w = [[0.0f64; 3]; 3]; // w[slot]
        for m in &ms {
            let slot = m.zero_row().ok_or_else(|| {
                CliError::invalid("corner matrix without zero row".to_string())
            })?;
            w[slot] = m.apply([1.0, 1.0]);
        }
        // Node-coordinate α of the requested direction.
        let mut node_alpha = [0.0f64; 3];
        for slot in 0..3 {
            let g = atlas.covector(&tile.alpha_rows[slot]);
            node_alpha[slot] = g[0] * alpha[0] + g[1] * alpha[1] + g[2] * alpha[2];
        }
        let mut mu = [0.0f64; 3];
        if !solve3(&w, &node_alpha, &mut mu) {
            return Err(CliError::invalid("singular corner system".to_string()));
        }
        for m in mu.iter_mut() {
            *m /= 2.0;
        }
        let scale = mu.iter().fold(0.0f64, |a, v| a.max(v.abs()));
        let tol = 1e-8 * scale.max(1e-30);
        let zero: Vec<usize> = (0..3).filter(|&i| mu[i].abs() <= tol).collect();
        if mu.iter().any(|&m| m < -tol) {
            continue; // numerical mismatch with tile_contains; try the next tile
        }
        let resolved = match zero.len() {
            0 => ResolvedDomain::Triangle([[mu[0], mu[0]], [mu[1], mu[1]], [mu[2], mu[2]]]),
            1 => {
                let slot = zero[0];
                ResolvedDomain::Edge {
                    slot,
                    u1: [mu[(slot + 1) % 3], mu[(slot + 1) % 3]],
                    u2: [mu[(slot + 2) % 3], mu[(slot + 2) % 3]],
                }
            }
            _ => {
                return Err(CliError::invalid(
                    "the target direction is a tile corner: such deformations are never proper"
                        .to_string(),
                ))
            }
        };
        return Ok((tile.node, resolved));
    }
    Err(CliError::invalid(format!(
        "target direction is not geometrically tame at depth {} (no tile contains it)",
        config.depth
    )))
}

fn solve3(cols: &[[f64; 3]; 3], rhs: &[f64; 3], out: &mut [f64; 3]) -> bool {
    let m = [
        [cols[0][0], cols[1][0], cols[2][0]],
        [cols[0][1], cols[1][1], cols[2][1]],
        [cols[0][2], cols[1][2], cols[2][2]],
    ];
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    if det.abs() < 1e-300 {
        return false;
    }
    for col in 0..3 {
        let mut mm = m;
        for row in 0..3 {
            mm[row][col] = rhs[row];
        }
        let d = mm[0][0] * (mm[1][1] * mm[2][2] - mm[1][2] * mm[2][1])
            - mm[0][1] * (mm[1][0] * mm[2][2] - mm[1][2] * mm[2][0])
            + mm[0][2] * (mm[1][0] * mm[2][1] - mm[1][1] * mm[2][0]);
        out[col] = d / det;
    }
    true
}

/// Crooked fundamental domain meshes for a deformation given by vertex
/// coefficients or by a Margulis-invariant target.
pub fn cmd_domain(config: &Config, target: &DomainTarget) -> CliResult<(String, String)> {
    let rep = build_rep(config)?;
    let (node_index, resolved) = match target {
        DomainTarget::Coefficients(u) => (0usize, resolve_from_coefficients(u)?),
        DomainTarget::Alpha(alpha) => {
            let atlas = build_atlas(config, &rep)?;
            resolve_from_alpha(config, &rep, &atlas, alpha)?
        }
    };
    let nodes = enumerate_tree(config.depth)
        .map_err(|e| CliError::invalid(format!("tree enumeration failed: {e}")))?;
    let words = &nodes[node_index].words;
    let geom: NodeGeometry = node_geometry(&rep, words, config.fixed_point_choice)
        .map_err(|e| CliError::invalid(format!("node geometry failed: {e}")))?;

    let mut report = Report::new("domain");
    report.kv(
        "traces",
        format!("{},{},{}", config.traces.0, config.traces.1, config.traces.2),
    );
    report.kv("node", node_index);
    report.kv("superbasis", nodes[node_index].triple);

    let (faces, labels): (Vec<CrookedHalfspace>, Vec<String>) = match resolved {
        ResolvedDomain::Triangle(u) => {
            let ac = affine_coxeter(&geom.ext, &geom.ftri, &u)
                .map_err(|e| CliError::invalid(format!("affine extension failed: {e}")))?;
            let domain = ac
                .domain(&geom.ftri)
                .map_err(|e| CliError::invalid(format!("domain construction failed: {e}")))?;
            let analysis = analyze_cit(&domain)
                .map_err(|e| CliError::invalid(format!("domain analysis failed: {e}")))?;
            let disjoint = cit_disjointness_check(&domain);
            report.kv("kind", "crooked_ideal_triangle");
            report.kv("faces", 3);
            report.array(
                "requested_coefficients",
                &[u[0][0], u[0][1], u[1][0], u[1][1], u[2][0], u[2][1]],
            );
            report.array(
                "center",
                &[
                    analysis.center.coords.x,
                    analysis.center.coords.y,
                    analysis.center.coords.z,
                ],
            );
            report.array(
                "slab_coefficients",
                &[
                    analysis.coefficients[0][0],
                    analysis.coefficients[0][1],
                    analysis.coefficients[1][0],
                    analysis.coefficients[1][1],
                    analysis.coefficients[2][0],
                    analysis.coefficients[2][1],
                ],
            );
            report.kv("nondegenerate", analysis.nondegenerate);
            report.kv("faces_pairwise_disjoint", disjoint.all_disjoint);
            if !disjoint.all_disjoint {
                return Err(CliError::verification(
                    "the requested faces are not pairwise disjoint".to_string(),
                ));
            }
            (
                domain.halfspaces().to_vec(),
                vec!["face0".into(), "face1".into(), "face2".into()],
            )
        }
        ResolvedDomain::Edge { slot, u1, u2 } => {
            let eq = edge_quadrilateral_at(&geom.ext, &geom.ftri, slot, u1, u2)
                .map_err(|e| CliError::invalid(format!("edge quadrilateral failed: {e}")))?;
            report.kv("kind", "crooked_ideal_quadrilateral");
            report.kv("faces", 4);
            report.kv("degenerate_slot", slot);
            report.array("edge_coefficients", &[u1[0], u1[1], u2[0], u2[1]]);
            report.kv(
                "faces_pairwise_disjoint",
                eq.disjoint.iter().all(|&d| d),
            );
            if !eq.disjoint.iter().all(|&d| d) {
                return Err(CliError::verification(
                    "the edge quadrilateral faces are not pairwise disjoint".to_string(),
                ));
            }
            let (i, j) = ((slot + 1) % 3, (slot + 2) % 3);
            (
                eq.faces.to_vec(),
                vec![
                    format!("face{i}"),
                    format!("face{j}"),
                    format!("face{i}_reflected"),
                    format!("face{j}_reflected"),
                ],
            )
        }
    };

    let mut meshes = Vec::with_capacity(faces.len());
    for (face, label) in faces.iter().zip(labels.iter()) {
        let mesh = mesh_crooked_plane(&CrookedPlane { halfspace: *face }, config.clip_radius, config.segments)
            .map_err(|e| {
                CliError::invalid(format!(
                    "meshing failed ({e}); try a larger clip_radius than {}",
                    config.clip_radius
                ))
            })?;
        meshes.push((label.clone(), mesh));
    }
    report.kv("clip_radius", config.clip_radius);
    Ok((obj::write_obj(&meshes), report.finish()))
}

/// Run the verification suites; the boolean is the overall verdict.
pub fn cmd_verify(config: &Config) -> CliResult<(String, bool, Vec<String>)> {
    build_rep(config)?; // inadmissible traces are invalid input, not a suite failure
    let suite_cfg = SuiteConfig {
        traces: config.traces,
        seed: config.seed,
        tile_depth: config.depth.clamp(1, 6),
        chart_depth: 6,
        samples: config.samples,
        word_length: config.words,
        tolerance_override: config.tolerance,
        choice: config.fixed_point_choice,
        ..SuiteConfig::default()
    };
    let mut results = suites::run_all(&suite_cfg);
    match suites::check_halfspace_axioms(&suite_cfg) {
        Ok(r) => results.push(r),
        Err(e) => return Err(CliError::invalid(format!("halfspace axiom check: {e}"))),
    }
    let mut lines = Vec::with_capacity(results.len());
    let mut report = Report::new("verify");
    report.kv(
        "traces",
        format!("{},{},{}", config.traces.0, config.traces.1, config.traces.2),
    );
    report.kv("seed", config.seed);
    let mut all = true;
    for r in &results {
        let verdict = if r.passed { "PASS" } else { "FAIL" };
        lines.push(format!("{verdict} {}: {}", r.name, r.detail));
        report.section(r.name);
        report.kv("passed", r.passed);
        report.kv("detail", &r.detail);
        all &= r.passed;
    }
    report.kv("all_passed", all);
    Ok((report.finish(), all, lines))
}

/// Text dump of the superbasis tree.
pub fn cmd_farey(depth: usize) -> CliResult<String> {
    let nodes =
        enumerate_tree(depth).map_err(|e| CliError::invalid(format!("enumeration failed: {e}")))?;
    let mut out = String::new();
    use std::fmt::Write as _;
    let _ = writeln!(out, "# superbasis tree, depth {depth}, {} nodes", nodes.len());
    let _ = writeln!(out, "# index parent slot depth | fractions | words | canonical order");
    for (i, node) in nodes.iter().enumerate() {
        let parent = node
            .parent
            .map(|p| p.to_string())
            .unwrap_or_else(|| "-".to_string());
        let canon = node.triple.canonical_order();
        let _ = writeln!(
            out,
            "{i} {parent} {} {} | {} | {} | {}",
            node.slot, node.depth, node.triple, node.words, canon
        );
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick_config() -> Config {
        Config {
            depth: 2,
            samples: 300,
            words: 3,
            segments: 4,
            ..Config::default()
        }
    }

    #[test]
    fn tiles_produces_svg_and_report() {
        let (svg, report) = cmd_tiles(&quick_config()).unwrap();
        assert!(crate::svg::well_formed(&svg));
        assert!(report.contains("tile_count = 10"));
        assert!(report.contains("boundary_edges = 12"));
        assert!(report.contains("convex = true"));
        // Depth 1: four tiles forming a hexagon; depth 0: one triangle.
        let (svg1, report1) = cmd_tiles(&Config {
            depth: 1,
            ..quick_config()
        })
        .unwrap();
        assert!(crate::svg::well_formed(&svg1));
        assert!(report1.contains("tile_count = 4"));
        assert!(report1.contains("boundary_edges = 6"));
        let (_, report0) = cmd_tiles(&Config {
            depth: 0,
            ..quick_config()
        })
        .unwrap();
        assert!(report0.contains("tile_count = 1"));
        // Depth 3 emits 24 boundary edges.
        let (_, report3) = cmd_tiles(&Config {
            depth: 3,
            ..quick_config()
        })
        .unwrap();
        assert!(report3.contains("boundary_edges = 24"));
    }

    #[test]
    fn nielsen_counts_match_group_enumeration() {
        for bound in [0usize, 1, 2, 3] {
            let (svg, triangles) = cmd_nielsen(&Config {
                words: bound,
                ..quick_config()
            })
            .unwrap();
            assert!(crate::svg::well_formed(&svg));
            // 1 + 3 + 6 + 12 + ...: reduced words in three involutions.
            let expected = 1 + (0..bound).map(|l| 3 * (1usize << l)).sum::<usize>();
            assert_eq!(triangles, expected, "word bound {bound}");
            // Every vertex of every triangle lies in the closed unit disk:
            // parse coordinates back out of the polygon records.
            for line in svg.lines().filter(|l| l.starts_with("<polygon")) {
                let pts = line.split('"').nth(1).unwrap();
                for pair in pts.split_whitespace() {
                    let (x, y) = pair.split_once(',').unwrap();
                    let (x, y): (f64, f64) = (x.parse().unwrap(), y.parse().unwrap());
                    // Coordinates are quantized to 1e-5 in the output.
                    assert!(x * x + y * y <= 1.0 + 1e-4);
                }
            }
        }
    }

    #[test]
    fn domain_produces_meshes() {
        let cfg = quick_config();
        let (objtext, report) =
            cmd_domain(&cfg, &DomainTarget::Coefficients([1.0; 6])).unwrap();
        let parsed = crate::obj::parse_obj(&objtext).unwrap();
        assert_eq!(parsed.objects.len(), 3);
        assert!(report.contains("kind = crooked_ideal_triangle"));
        assert!(report.contains("faces_pairwise_disjoint = true"));

        // Edge case: four faces.
        let (objtext, report) = cmd_domain(
            &cfg,
            &DomainTarget::Coefficients([0.0, 0.0, 1.0, 1.0, 1.0, 1.0]),
        )
        .unwrap();
        let parsed = crate::obj::parse_obj(&objtext).unwrap();
        assert_eq!(parsed.objects.len(), 4);
        assert!(report.contains("kind = crooked_ideal_quadrilateral"));

        // Corner coefficients are rejected.
        let err = cmd_domain(
            &cfg,
            &DomainTarget::Coefficients([0.0, 0.0, 0.0, 0.0, 1.0, 1.0]),
        )
        .unwrap_err();
        assert_eq!(err.outcome, crate::Outcome::InvalidInput);
    }

    #[test]
    fn domain_from_alpha_targets() {
        let cfg = quick_config();
        // An interior direction of the base tile: sum of its corners.
        let rep = build_rep(&cfg).unwrap();
        let atlas = build_atlas(&cfg, &rep).unwrap();
        let c = &atlas.tiles[0].corners;
        let mid = [
            c[0][0] + c[1][0] + c[2][0],
            c[0][1] + c[1][1] + c[2][1],
            c[0][2] + c[1][2] + c[2][2],
        ];
        let (objtext, report) = cmd_domain(&cfg, &DomainTarget::Alpha(mid)).unwrap();
        assert!(report.contains("kind = crooked_ideal_triangle"));
        assert!(crate::obj::parse_obj(&objtext).is_ok());

        // An edge direction: two corners.
        let edge = [
            c[0][0] + c[1][0],
            c[0][1] + c[1][1],
            c[0][2] + c[1][2],
        ];
        let (_, report) = cmd_domain(&cfg, &DomainTarget::Alpha(edge)).unwrap();
        assert!(report.contains("kind = crooked_ideal_quadrilateral"));

        // A corner direction errors: never proper.
        let err = cmd_domain(&cfg, &DomainTarget::Alpha(c[0])).unwrap_err();
        assert_eq!(err.outcome, crate::Outcome::InvalidInput);

        // Opposite-sign directions are not tame at any depth.
        let err = cmd_domain(&cfg, &DomainTarget::Alpha([1.0, -0.5, 0.3])).unwrap_err();
        assert_eq!(err.outcome, crate::Outcome::InvalidInput);
        assert!(err.message.contains("not geometrically tame"));
    }

    #[test]
    fn farey_dump_shape() {
        let text = cmd_farey(3).unwrap();
        assert!(text.contains("22 nodes"));
        assert!(text.lines().count() >= 24);
        assert!(text.contains("1/0, 0/1, 1/1"));
    }
}
