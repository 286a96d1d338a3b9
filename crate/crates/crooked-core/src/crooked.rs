//! Crooked halfspaces, crooked planes, parallel crooked slabs, and crooked
//! ideal triangles, with an exact disjointness decider.
//!
//! A crooked halfspace is determined by a null frame (unit spacelike
//! director `s` with its two null frame vectors `s⁻, s⁺`) and a vertex
//! point. Membership is decided by the signs of `a = v·s`, `b⁺ = v·s⁺`,
//! `b⁻ = v·s⁻` for `v` the displacement from the vertex:
//!
//! * `b⁺ < 0 < b⁻` (the spacelike wedge beyond the stem quadrant), or
//! * `a > 0`, `b⁺ < 0`, `b⁻ ≤ 0` (the future wedge on the positive side), or
//! * `a < 0`, `b⁺ ≥ 0`, `b⁻ > 0` (the past wedge on the negative side).
//!
//! The closed halfspace relaxes every comparison. The formula was derived
//! once in the standard frame `s = (1,0,0)`, `s⁺ = (0,1,1)`, `s⁻ = (0,−1,1)`
//! by splitting the complement of stem ∪ wings into connected components;
//! every test is an inner product, so it transports to arbitrary frames.
//! Its correctness is pinned by the monotonicity, complementarity, and
//! linearization properties in the test suites rather than by fiat.
//!
//! Each open (or closed) halfspace is the disjoint union of the three
//! convex sectors above, so emptiness of an intersection of two halfspaces
//! reduces to nine small linear feasibility problems, decided exactly (up
//! to an explicit margin) by Fourier–Motzkin elimination.

use alloc::vec::Vec;

use crate::lorentz::{AffineIsometry, LorentzVector, NullFrame, Point};
use crate::lp::{feasible, Constraint};
use crate::{flt, GeomError, Result, EPS};

/// Whether a membership or disjointness query concerns the open set or its
/// closure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strictness {
    Open,
    Closed,
}

/// Crooked halfspace with vertex `p` and director frame `s, s⁻, s⁺`.
#[derive(Clone, Copy, Debug)]
pub struct CrookedHalfspace {
    pub frame: NullFrame,
    pub vertex: Point,
}

impl CrookedHalfspace {
    pub const fn new(frame: NullFrame, vertex: Point) -> CrookedHalfspace {
        CrookedHalfspace { frame, vertex }
    }

    pub fn from_director(s: LorentzVector, vertex: Point) -> Result<CrookedHalfspace> {
        Ok(CrookedHalfspace::new(NullFrame::from_spacelike(s)?, vertex))
    }

    /// Membership with a signed `slack`: positive slack loosens every
    /// comparison (grows the set), negative slack shrinks it.
    pub fn contains_with_slack(&self, w: Point, strictness: Strictness, slack: f64) -> bool {
        let v = w - self.vertex;
        let a = v.dot(self.frame.s);
        let bp = v.dot(self.frame.s_plus);
        let bm = v.dot(self.frame.s_minus);
        match strictness {
            Strictness::Open => {
                (bp < slack && bm > -slack)
                    || (a > -slack && bp < slack && bm <= slack)
                    || (a < slack && bp >= -slack && bm > -slack)
            }
            Strictness::Closed => {
                (bp <= slack && bm >= -slack)
                    || (a >= -slack && bp <= slack && bm <= slack)
                    || (a <= slack && bp >= -slack && bm >= -slack)
            }
        }
    }

    #[inline]
    pub fn contains(&self, w: Point, strictness: Strictness) -> bool {
        self.contains_with_slack(w, strictness, 0.0)
    }

    /// Image under a future-preserving affine isometry.
    pub fn transformed(&self, g: &AffineIsometry) -> Result<CrookedHalfspace> {
        let e3 = LorentzVector::E3;
        if g.linear.apply(e3).dot(e3) >= 0.0 {
            return Err(GeomError::NotIsometry);
        }
        // Map the frame parts rather than recomputing the frame: a
        // future-preserving isometry sends the labeled null rays to the
        // labeled null rays, and faces sharing a cusp vector keep sharing
        // its image bit for bit.
        let frame = NullFrame::from_parts(
            g.linear.apply(self.frame.s),
            g.linear.apply(self.frame.s_plus),
            g.linear.apply(self.frame.s_minus),
        )?;
        Ok(CrookedHalfspace::new(frame, g.apply(self.vertex)))
    }

    /// The three convex sectors as linear constraint systems over the point
    /// coordinates, with strict inequalities tightened and non-strict ones
    /// relaxed by `margin`.
    fn sectors(&self, strictness: Strictness, margin: f64) -> [Vec<Constraint>; 3] {
        // inner(x − p, c) ⋖ 0  ⟺  cov(c)·x ⋖ cov(c)·p.
        let row = |c: LorentzVector, positive: bool| {
            let (a, b) = if positive {
                // inner(v, c) > 0 becomes −cov(c)·x ≤ −inner(p, c) ∓ margin.
                ([-c.x, -c.y, c.z], -self.vertex.coords.dot(c))
            } else {
                ([c.x, c.y, -c.z], self.vertex.coords.dot(c))
            };
            (a, b)
        };
        let strict = |c: LorentzVector, positive: bool| {
            let (a, b) = row(c, positive);
            Constraint { a, b: b - margin }
        };
        let relaxed = |c: LorentzVector, positive: bool| {
            let (a, b) = row(c, positive);
            Constraint { a, b: b + margin }
        };
        let s = self.frame.s;
        let sp = self.frame.s_plus;
        let sm = self.frame.s_minus;
        match strictness {
            Strictness::Open => [
                alloc::vec![strict(sp, false), strict(sm, true)],
                alloc::vec![strict(s, true), strict(sp, false), relaxed(sm, false)],
                alloc::vec![strict(s, false), relaxed(sp, true), strict(sm, true)],
            ],
            Strictness::Closed => [
                alloc::vec![relaxed(sp, false), relaxed(sm, true)],
                alloc::vec![relaxed(s, true), relaxed(sp, false), relaxed(sm, false)],
                alloc::vec![relaxed(s, false), relaxed(sp, true), relaxed(sm, true)],
            ],
        }
    }
}

/// The boundary surface of a crooked halfspace: stem, hinges, and wings.
#[derive(Clone, Copy, Debug)]
pub struct CrookedPlane {
    pub halfspace: CrookedHalfspace,
}

/// Decompose a vector of the stem plane `s^⊥` in the basis `(s⁻, −s⁺)`,
/// requiring `|v·s|` below `eps`·scale. Returns `(u⁺, u⁻)` with
/// `v = u⁻ s⁻ − u⁺ s⁺`.
pub fn semigroup_coefficients(frame: &NullFrame, v: LorentzVector) -> Result<(f64, f64)> {
    let scale = v.euclidean_norm().max(1.0);
    if flt::abs(v.dot(frame.s)) > EPS * scale {
        return Err(GeomError::Degenerate("vector off the stem plane"));
    }
    let pairing = frame.s_plus.dot(frame.s_minus); // < 0 always
    let u_minus = v.dot(frame.s_plus) / pairing;
    let u_plus = -v.dot(frame.s_minus) / pairing;
    Ok((u_plus, u_minus))
}

/// Membership of the translational semigroup `{u⁻ s⁻ − u⁺ s⁺ : u± > 0}`
/// (open) or its closure.
pub fn in_translational_semigroup(
    frame: &NullFrame,
    v: LorentzVector,
    strictness: Strictness,
) -> bool {
    let Ok((u_plus, u_minus)) = semigroup_coefficients(frame, v) else {
        return false;
    };
    let scale = v.euclidean_norm().max(1.0);
    match strictness {
        Strictness::Open => u_plus > EPS * scale && u_minus > EPS * scale,
        Strictness::Closed => u_plus >= -EPS * scale && u_minus >= -EPS * scale,
    }
}

/// Normalize a vertex triple against three stem planes in general position:
/// the unique `O` with `(p_i − O)·s_i = 0` for all `i`, together with the
/// offsets `q_i = p_i − O`.
pub fn normalize_vertices(
    sides: &[LorentzVector; 3],
    points: &[Point; 3],
) -> Result<(Point, [LorentzVector; 3])> {
    // The solve is assembled in a canonical row order so the center is
    // bit-stable under permutation of the input indices.
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        (sides[i].x, sides[i].y, sides[i].z)
            .partial_cmp(&(sides[j].x, sides[j].y, sides[j].z))
            .unwrap_or(core::cmp::Ordering::Equal)
    });
    // Rows of the system are the covectors of the sides.
    let rows = [
        [sides[order[0]].x, sides[order[0]].y, -sides[order[0]].z],
        [sides[order[1]].x, sides[order[1]].y, -sides[order[1]].z],
        [sides[order[2]].x, sides[order[2]].y, -sides[order[2]].z],
    ];
    let rhs = [
        points[order[0]].coords.dot(sides[order[0]]),
        points[order[1]].coords.dot(sides[order[1]]),
        points[order[2]].coords.dot(sides[order[2]]),
    ];
    let det = det3x3(&rows);
    let scale = sides.iter().map(|s| s.euclidean_norm()).fold(1.0, f64::max);
    if flt::abs(det) <= 1e-12 * scale * scale * scale {
        return Err(GeomError::Degenerate("dependent stem planes"));
    }
    let mut o = [0.0; 3];
    for (col, slot) in o.iter_mut().enumerate() {
        let mut m = rows;
        for r in 0..3 {
            m[r][col] = rhs[r];
        }
        *slot = det3x3(&m) / det;
    }
    let center = Point::new(crate::lorentz::vec3(o[0], o[1], o[2]));
    Ok((
        center,
        [
            points[0] - center,
            points[1] - center,
            points[2] - center,
        ],
    ))
}

fn det3x3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Region between two parallel crooked planes with common frame:
/// `closure(H(s, inner)) \ H(s, outer)` where `outer − inner` lies in the
/// closed translational semigroup.
#[derive(Clone, Copy, Debug)]
pub struct ParallelCrookedSlab {
    pub frame: NullFrame,
    pub inner: Point,
    pub outer: Point,
}

impl ParallelCrookedSlab {
    pub fn new(frame: NullFrame, inner: Point, outer: Point) -> Result<ParallelCrookedSlab> {
        if !in_translational_semigroup(&frame, outer - inner, Strictness::Closed) {
            return Err(GeomError::Degenerate("slab offset outside the semigroup"));
        }
        Ok(ParallelCrookedSlab {
            frame,
            inner,
            outer,
        })
    }

    pub fn contains(&self, w: Point) -> bool {
        let big = CrookedHalfspace::new(self.frame, self.inner);
        let small = CrookedHalfspace::new(self.frame, self.outer);
        big.contains(w, Strictness::Closed) && !small.contains(w, Strictness::Open)
    }
}

/// Crooked ideal triangle: the complement of three crooked halfspaces whose
/// directors are the sides of an ideal triangle.
#[derive(Clone, Debug)]
pub struct CrookedIdealTriangle {
    pub triangle: crate::hyperbolic::IdealTriangle,
    pub vertices: [Point; 3],
    frames: [NullFrame; 3],
}

/// Frames of the three sides built from shared cusp representatives: side
/// `k` joins cusps `k+1` and `k+2`, and adjacent sides receive bit-identical
/// null vectors for their common cusp. Disjointness decisions depend on
/// those exact cancellations.
pub fn shared_frames(triangle: &crate::hyperbolic::IdealTriangle) -> Result<[NullFrame; 3]> {
    let s = triangle.sides();
    let cusps = triangle.vertices()?;
    let mut frames = [NullFrame::from_spacelike(s[0])?; 3];
    for k in 0..3 {
        frames[k] = NullFrame::from_parts(
            s[k],
            cusps[(k + 1) % 3].vector(),
            cusps[(k + 2) % 3].vector(),
        )?;
    }
    Ok(frames)
}

impl CrookedIdealTriangle {
    pub fn new(
        triangle: crate::hyperbolic::IdealTriangle,
        vertices: [Point; 3],
    ) -> Result<CrookedIdealTriangle> {
        Ok(CrookedIdealTriangle {
            frames: shared_frames(&triangle)?,
            triangle,
            vertices,
        })
    }

    /// Build from a center and semigroup coefficients: vertex `i` is
    /// `O + u⁻_i s⁻_i − u⁺_i s⁺_i`. Coefficients are `[(u⁺_i, u⁻_i); 3]`.
    pub fn from_coefficients(
        triangle: crate::hyperbolic::IdealTriangle,
        center: Point,
        u: [[f64; 2]; 3],
    ) -> Result<CrookedIdealTriangle> {
        let frames = shared_frames(&triangle)?;
        let mut vertices = [Point::ORIGIN; 3];
        for i in 0..3 {
            vertices[i] = center + (frames[i].s_minus * u[i][1] - frames[i].s_plus * u[i][0]);
        }
        Ok(CrookedIdealTriangle {
            triangle,
            vertices,
            frames,
        })
    }

    #[inline]
    pub fn frames(&self) -> &[NullFrame; 3] {
        &self.frames
    }

    pub fn halfspaces(&self) -> [CrookedHalfspace; 3] {
        [
            CrookedHalfspace::new(self.frames[0], self.vertices[0]),
            CrookedHalfspace::new(self.frames[1], self.vertices[1]),
            CrookedHalfspace::new(self.frames[2], self.vertices[2]),
        ]
    }

    /// Membership in the triangle region (the complement of the halfspace
    /// union): closed means outside every open halfspace, open means
    /// outside every closed halfspace.
    pub fn contains(&self, w: Point, strictness: Strictness) -> bool {
        let flip = match strictness {
            Strictness::Closed => Strictness::Open,
            Strictness::Open => Strictness::Closed,
        };
        self.halfspaces().iter().all(|h| !h.contains(w, flip))
    }
}

/// Structure analysis of a crooked ideal triangle: the unique center whose
/// minimal triangle fits inside, the six semigroup coefficients, the
/// nondegeneracy verdict, and the three attached slabs.
#[derive(Clone, Debug)]
pub struct CitAnalysis {
    pub center: Point,
    /// `coefficients[i] = (u⁺_i, u⁻_i)` of `q_i = p_i − center`.
    pub coefficients: [[f64; 2]; 3],
    pub nondegenerate: bool,
    pub minimal: CrookedIdealTriangle,
    pub slabs: [ParallelCrookedSlab; 3],
}

pub fn analyze_cit(t: &CrookedIdealTriangle) -> Result<CitAnalysis> {
    let (center, q) = normalize_vertices(t.triangle.sides(), &t.vertices)?;
    let mut coefficients = [[0.0; 2]; 3];
    let mut scale = 1.0f64;
    for i in 0..3 {
        let (up, um) = semigroup_coefficients(&t.frames[i], q[i])?;
        coefficients[i] = [up, um];
        scale = scale.max(q[i].euclidean_norm());
    }
    let nondegenerate = coefficients
        .iter()
        .all(|c| c[0] > EPS * scale && c[1] > EPS * scale);
    let minimal = CrookedIdealTriangle::new(t.triangle, [center; 3])?;
    let slabs = [
        ParallelCrookedSlab::new(t.frames[0], center, t.vertices[0])?,
        ParallelCrookedSlab::new(t.frames[1], center, t.vertices[1])?,
        ParallelCrookedSlab::new(t.frames[2], center, t.vertices[2])?,
    ];
    Ok(CitAnalysis {
        center,
        coefficients,
        nondegenerate,
        minimal,
        slabs,
    })
}

/// Radius multiple bounding the feasibility search in
/// [`halfspaces_disjoint`]. Inputs carry relative rounding of order 1e−16,
/// so constraint rows that are dependent in exact geometry (shared cusps of
/// an ideal triangle) can open sliver cones, but only beyond radius
/// `margin / noise ≈ 1e7`·scale; genuine intersections of crooked
/// halfspaces reach down to the scale of their vertices.
const DISJOINT_BOX: f64 = 1e4;

/// Decide emptiness of the intersection of two crooked halfspaces (open or
/// closed) by nine sector-pair feasibility problems, with strictness margin
/// `EPS`·scale, within the coordinate box `DISJOINT_BOX`·scale.
pub fn halfspaces_disjoint(
    h1: &CrookedHalfspace,
    h2: &CrookedHalfspace,
    strictness: Strictness,
) -> bool {
    let scale = h1
        .vertex
        .coords
        .euclidean_norm()
        .max(h2.vertex.coords.euclidean_norm())
        .max(1.0);
    let margin = EPS * scale;
    let s1 = h1.sectors(strictness, margin);
    let s2 = h2.sectors(strictness, margin);
    let r = DISJOINT_BOX * scale;
    let center = (h1.vertex.coords + h2.vertex.coords) * 0.5;
    let bounds = [
        Constraint { a: [1.0, 0.0, 0.0], b: center.x + r },
        Constraint { a: [-1.0, 0.0, 0.0], b: r - center.x },
        Constraint { a: [0.0, 1.0, 0.0], b: center.y + r },
        Constraint { a: [0.0, -1.0, 0.0], b: r - center.y },
        Constraint { a: [0.0, 0.0, 1.0], b: center.z + r },
        Constraint { a: [0.0, 0.0, -1.0], b: r - center.z },
    ];
    for a in &s1 {
        for b in &s2 {
            let mut sys: Vec<Constraint> = Vec::with_capacity(a.len() + b.len() + 6);
            sys.extend_from_slice(a);
            sys.extend_from_slice(b);
            sys.extend_from_slice(&bounds);
            if feasible(&sys) {
                return false;
            }
        }
    }
    true
}

/// Pairwise closed disjointness of the three faces of a crooked ideal
/// triangle — the nondegeneracy criterion, decided by the sector LP.
#[derive(Clone, Copy, Debug)]
pub struct CitDisjointness {
    /// Verdicts for the pairs (0,1), (0,2), (1,2).
    pub pairwise: [bool; 3],
    pub all_disjoint: bool,
}

pub fn cit_disjointness_check(t: &CrookedIdealTriangle) -> CitDisjointness {
    let h = t.halfspaces();
    let pairwise = [
        halfspaces_disjoint(&h[0], &h[1], Strictness::Closed),
        halfspaces_disjoint(&h[0], &h[2], Strictness::Closed),
        halfspaces_disjoint(&h[1], &h[2], Strictness::Closed),
    ];
    CitDisjointness {
        pairwise,
        all_disjoint: pairwise.iter().all(|&b| b),
    }
}

/// Labels of the four flat pieces of a crooked plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MeshPart {
    StemFuture,
    StemPast,
    WingPlus,
    WingMinus,
}

/// Piecewise-flat triangulation of a crooked plane (stem and both wings),
/// clipped to the Euclidean coordinate ball of radius `clip_radius` about
/// the origin.
#[derive(Clone, Debug, Default)]
pub struct Mesh {
    pub vertices: Vec<[f64; 3]>,
    pub faces: Vec<[usize; 3]>,
    /// Face ranges per part, in emission order.
    pub parts: Vec<(MeshPart, core::ops::Range<usize>)>,
}

impl Mesh {
    fn push_fan(
        &mut self,
        part: MeshPart,
        apex: Point,
        dirs: &[LorentzVector],
        clip_radius: f64,
    ) {
        let start_face = self.faces.len();
        let apex_idx = self.vertices.len();
        self.vertices
            .push([apex.coords.x, apex.coords.y, apex.coords.z]);
        let mut ring = Vec::with_capacity(dirs.len());
        for d in dirs {
            let t = ray_sphere(apex.coords, *d, clip_radius);
            let v = apex.coords + *d * t;
            ring.push(self.vertices.len());
            self.vertices.push([v.x, v.y, v.z]);
        }
        for w in ring.windows(2) {
            self.faces.push([apex_idx, w[0], w[1]]);
        }
        self.parts.push((part, start_face..self.faces.len()));
    }
}

/// Largest `t ≥ 0` with `|origin + t d| = r` (Euclidean); 0 if none.
fn ray_sphere(origin: LorentzVector, d: LorentzVector, r: f64) -> f64 {
    let dd = d.x * d.x + d.y * d.y + d.z * d.z;
    let od = origin.x * d.x + origin.y * d.y + origin.z * d.z;
    let oo = origin.x * origin.x + origin.y * origin.y + origin.z * origin.z;
    let disc = od * od - dd * (oo - r * r);
    if disc <= 0.0 || dd <= 0.0 {
        return 0.0;
    }
    ((-od + flt::sqrt(disc)) / dd).max(0.0)
}

/// Triangulate the crooked plane bounding `cp.halfspace`, with `segments`
/// subdivisions per quarter-turn of each fan. The apex must lie inside the
/// clip ball.
pub fn mesh_crooked_plane(cp: &CrookedPlane, clip_radius: f64, segments: usize) -> Result<Mesh> {
    if clip_radius <= 0.0 {
        return Err(GeomError::Degenerate("clip radius must be positive"));
    }
    let h = &cp.halfspace;
    if h.vertex.coords.euclidean_norm() >= clip_radius {
        return Err(GeomError::Degenerate("vertex outside clip ball"));
    }
    let n = segments.max(1);
    let f = &h.frame;
    let mut mesh = Mesh::default();
    // Stem wedges: nonnegative (future) and nonpositive (past) spans of
    // (s⁺, s⁻); fan rays include the hinge directions exactly.
    let arc = |from: LorentzVector, to: LorentzVector, count: usize| -> Vec<LorentzVector> {
        (0..=count)
            .map(|k| {
                let phi = core::f64::consts::FRAC_PI_2 * k as f64 / count as f64;
                let (sin, cos) = flt::sin_cos(phi);
                from * cos + to * sin
            })
            .collect()
    };
    mesh.push_fan(
        MeshPart::StemFuture,
        h.vertex,
        &arc(f.s_plus, f.s_minus, n),
        clip_radius,
    );
    mesh.push_fan(
        MeshPart::StemPast,
        h.vertex,
        &arc(-f.s_plus, -f.s_minus, n),
        clip_radius,
    );
    // Wings: the halves {ξ s + τ s⁺ : ξ ≥ 0} and {ξ s + τ s⁻ : ξ ≤ 0},
    // swept from +hinge through ±s to −hinge.
    let sweep = |hinge: LorentzVector, mid: LorentzVector, count: usize| -> Vec<LorentzVector> {
        (0..=2 * count)
            .map(|k| {
                let phi = core::f64::consts::PI * k as f64 / (2 * count) as f64;
                let (sin, cos) = flt::sin_cos(phi);
                hinge * cos + mid * sin
            })
            .collect()
    };
    mesh.push_fan(
        MeshPart::WingPlus,
        h.vertex,
        &sweep(f.s_plus, f.s, n),
        clip_radius,
    );
    mesh.push_fan(
        MeshPart::WingMinus,
        h.vertex,
        &sweep(f.s_minus, -f.s, n),
        clip_radius,
    );
    Ok(mesh)
}
