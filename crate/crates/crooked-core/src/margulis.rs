//! Affine deformations of the surface group and their Margulis invariants.
//!
//! A deformation is a cocycle on the generators; its class is measured by
//! the Margulis invariants `α(W) = W⁰ · u(W)` of the words of a superbasis,
//! which identify the deformation space with `R³`. Affine Coxeter groups
//! built on a vertex triple realize a crooked ideal triangle as fundamental
//! domain; the corner matrices translate the six vertex coefficients into
//! invariants, each tile of the deformation space is the cone spanned by
//! its three rank-one corner rays, and the atlas of tiles over the
//! superbasis tree assembles the region of proper deformations.

use alloc::vec::Vec;

use crate::crooked::{
    halfspaces_disjoint, shared_frames, CrookedHalfspace,
    CrookedIdealTriangle, Strictness,
};
use crate::farey::{enumerate_tree, BasicTriple, F2Word, TreeNode};
use crate::hyperbolic::neutral_vector;
use crate::lorentz::{particle_involution, AffineIsometry, LorentzVector, Point};
use crate::rng::Counter;
use crate::surface::{
    coxeter_extension, fixed_point_cycle_with_boundary_trace, fundamental_triangle,
    CoxeterExtension, FixedPointChoice, FuchsianRep, FundamentalTriangle,
};
use crate::{flt, GeomError, Result};

/// Translational cocycle, determined by its values on the generators.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Cocycle {
    pub ua: LorentzVector,
    pub ub: LorentzVector,
}

impl Cocycle {
    pub const ZERO: Cocycle = Cocycle {
        ua: LorentzVector::ZERO,
        ub: LorentzVector::ZERO,
    };

    /// Coboundary of `v`: `u(g) = v − ρ0(g) v`.
    pub fn coboundary(rep: &FuchsianRep, v: LorentzVector) -> Cocycle {
        Cocycle {
            ua: v - rep.a().apply(v),
            ub: v - rep.b().apply(v),
        }
    }

    pub fn scaled(&self, k: f64) -> Cocycle {
        Cocycle {
            ua: self.ua * k,
            ub: self.ub * k,
        }
    }

    pub fn add(&self, o: &Cocycle) -> Cocycle {
        Cocycle {
            ua: self.ua + o.ua,
            ub: self.ub + o.ub,
        }
    }
}

/// Homomorphic affine evaluation of a word under the deformation
/// `x ↦ ρ0(g) x + u(g)`.
pub fn evaluate_cocycle(rep: &FuchsianRep, u: &Cocycle, w: &F2Word) -> AffineIsometry {
    let gens = [
        AffineIsometry::new(*rep.a(), u.ua),
        AffineIsometry::new(*rep.b(), u.ub),
    ];
    let mut out = AffineIsometry::IDENTITY;
    for (g, inv) in w.letters() {
        let m = if inv { gens[g].inverse() } else { gens[g] };
        out = out.compose(&m);
    }
    out
}

/// Margulis invariant of an affine isometry with non-elliptic linear part.
#[derive(Clone, Copy, Debug)]
pub struct MargulisValue {
    pub alpha: f64,
    /// Set for parabolic linear part, whose neutral vector has no
    /// canonical length.
    pub scale_ambiguous: bool,
}

pub fn margulis_invariant(g: &AffineIsometry) -> Result<MargulisValue> {
    let neutral = neutral_vector(&g.linear)?;
    Ok(MargulisValue {
        alpha: neutral.vector.dot(g.translation),
        scale_ambiguous: neutral.scale_ambiguous,
    })
}

/// The six basis cocycles: standard vectors on `a`, then on `b`.
fn basis_cocycles() -> [Cocycle; 6] {
    let e = [LorentzVector::E1, LorentzVector::E2, LorentzVector::E3];
    let mut out = [Cocycle::ZERO; 6];
    for k in 0..3 {
        out[k] = Cocycle {
            ua: e[k],
            ub: LorentzVector::ZERO,
        };
        out[k + 3] = Cocycle {
            ua: LorentzVector::ZERO,
            ub: e[k],
        };
    }
    out
}

/// Margulis invariant of a word under a deformation, with the neutral
/// vector taken at the 2×2 level and a compensated pairing: translations
/// of long words dwarf the invariant, so the dot product cancels hard.
pub fn word_invariant(rep: &FuchsianRep, u: &Cocycle, w: &F2Word) -> Result<f64> {
    let neutral = crate::surface::sl2_neutral(&rep.evaluate_sl2(w))?;
    let g = evaluate_cocycle(rep, u, w);
    Ok(neutral.dot_compensated(g.translation))
}

/// Margulis invariants of the three words of a basic triple.
pub fn alpha_coordinates(rep: &FuchsianRep, u: &Cocycle, t: &BasicTriple) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for slot in 0..3 {
        out[slot] = word_invariant(rep, u, t.word(slot))?;
    }
    Ok(out)
}

/// The linear map from cocycles to the α-coordinates of a basic triple,
/// with its Gram data for minimum-norm inversion.
#[derive(Clone, Debug)]
pub struct AlphaSystem {
    /// Rows: α of the three words on the six basis cocycles.
    pub matrix: [[f64; 6]; 3],
    /// Condition number of the row-equilibrated map (ratio of extreme
    /// singular values).
    pub condition: f64,
    scaled: [[f64; 6]; 3],
    row_scale: [f64; 3],
    gram_inv: [[f64; 3]; 3],
}

impl AlphaSystem {
    pub fn new(rep: &FuchsianRep, t: &BasicTriple) -> Result<AlphaSystem> {
        let mut matrix = [[0.0; 6]; 3];
        for (k, u) in basis_cocycles().iter().enumerate() {
            let alphas = alpha_coordinates(rep, u, t)?;
            for row in 0..3 {
                matrix[row][k] = alphas[row];
            }
        }
        AlphaSystem::from_matrix(matrix)
    }

    pub fn from_matrix(matrix: [[f64; 6]; 3]) -> Result<AlphaSystem> {
        let system = AlphaSystem::from_matrix_unchecked(matrix)?;
        if system.condition > 3e6 {
            return Err(GeomError::SingularSystem);
        }
        Ok(system)
    }

    /// Build without the conditioning gate. Deep tiling nodes have
    /// genuinely ill-conditioned (yet invertible) α-systems; their corner
    /// output degrades gracefully and is consumed with that understanding.
    pub fn from_matrix_unchecked(matrix: [[f64; 6]; 3]) -> Result<AlphaSystem> {
        // Rows scale like the words' translation lengths and drift apart
        // by orders of magnitude at deep nodes; equilibrate before forming
        // the normal equations (same solution set, far better Gram
        // conditioning).
        let mut row_scale = [0.0f64; 3];
        let mut scaled = matrix;
        for i in 0..3 {
            let norm = flt::sqrt(matrix[i].iter().map(|v| v * v).sum());
            if norm <= 1e-300 {
                return Err(GeomError::SingularSystem);
            }
            row_scale[i] = norm;
            for v in scaled[i].iter_mut() {
                *v /= norm;
            }
        }
        let mut gram = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                gram[i][j] = (0..6).map(|k| scaled[i][k] * scaled[j][k]).sum();
            }
        }
        let eig = sym3_eigenvalues(&gram);
        let scale = eig[2].max(1e-300);
        if eig[0] <= 1e-15 * scale {
            return Err(GeomError::SingularSystem);
        }
        let condition = flt::sqrt(eig[2] / eig[0]);
        let gram_inv = invert3(&gram).ok_or(GeomError::SingularSystem)?;
        Ok(AlphaSystem {
            matrix,
            scaled,
            row_scale,
            condition,
            gram_inv,
        })
    }

    /// α-coordinates of a cocycle under this system.
    pub fn apply(&self, u: &Cocycle) -> [f64; 3] {
        let x = [u.ua.x, u.ua.y, u.ua.z, u.ub.x, u.ub.y, u.ub.z];
        let mut out = [0.0; 3];
        for row in 0..3 {
            out[row] = (0..6).map(|k| self.matrix[row][k] * x[k]).sum();
        }
        out
    }

    /// Minimum-Euclidean-norm cocycle mapping to `target`.
    pub fn solve(&self, target: [f64; 3]) -> Cocycle {
        let scaled_target = [
            target[0] / self.row_scale[0],
            target[1] / self.row_scale[1],
            target[2] / self.row_scale[2],
        ];
        let mut y = [0.0; 3];
        for i in 0..3 {
            y[i] = (0..3).map(|j| self.gram_inv[i][j] * scaled_target[j]).sum();
        }
        let mut x = [0.0; 6];
        for (k, slot) in x.iter_mut().enumerate() {
            *slot = (0..3).map(|i| self.scaled[i][k] * y[i]).sum();
        }
        Cocycle {
            ua: crate::lorentz::vec3(x[0], x[1], x[2]),
            ub: crate::lorentz::vec3(x[3], x[4], x[5]),
        }
    }
}

/// Minimum-norm cocycle with prescribed α-coordinates on a basic triple.
pub fn cocycle_from_alpha(
    rep: &FuchsianRep,
    t: &BasicTriple,
    target: [f64; 3],
) -> Result<Cocycle> {
    Ok(AlphaSystem::new(rep, t)?.solve(target))
}

/// Eigenvalues of a symmetric 3×3 matrix, ascending (closed form).
fn sym3_eigenvalues(m: &[[f64; 3]; 3]) -> [f64; 3] {
    let p1 = m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2];
    let q = (m[0][0] + m[1][1] + m[2][2]) / 3.0;
    if p1 == 0.0 {
        let mut d = [m[0][0], m[1][1], m[2][2]];
        d.sort_by(|a, b| a.partial_cmp(b).unwrap());
        return d;
    }
    let dm = [m[0][0] - q, m[1][1] - q, m[2][2] - q];
    let p2 = dm[0] * dm[0] + dm[1] * dm[1] + dm[2] * dm[2] + 2.0 * p1;
    let p = flt::sqrt(p2 / 6.0);
    let mut b = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            b[i][j] = (m[i][j] - if i == j { q } else { 0.0 }) / p;
        }
    }
    let det_b = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1])
        - b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0])
        + b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
    let r = (det_b / 2.0).clamp(-1.0, 1.0);
    let phi = flt::acos(r) / 3.0;
    let (s0, c0) = flt::sin_cos(phi);
    let big = q + 2.0 * p * c0;
    let small = q + 2.0 * p * (-0.5 * c0 - 0.866_025_403_784_438_6 * s0);
    let mid = 3.0 * q - big - small;
    [small, mid, big]
}

fn invert3(m: &[[f64; 3]; 3]) -> Option<[[f64; 3]; 3]> {
    let det = m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
    let scale = m
        .iter()
        .flatten()
        .fold(0.0f64, |acc, v| acc.max(flt::abs(*v)));
    if flt::abs(det) <= 1e-14 * scale * scale * scale {
        return None;
    }
    let inv_det = 1.0 / det;
    let mut out = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (r0, r1) = ((i + 1) % 3, (i + 2) % 3);
            let (c0, c1) = ((j + 1) % 3, (j + 2) % 3);
            out[j][i] = (m[r0][c0] * m[r1][c1] - m[r0][c1] * m[r1][c0]) * inv_det;
        }
    }
    Some(out)
}

/// Vertex coefficients `(u⁺_i, u⁻_i)` with respect to the null vectors
/// `(n, ι0 n, ι2 n)` of a fundamental triangle:
///
/// ```text
/// q1 = u⁺_1 (ι0 n) − u⁻_1 (ι2 n)
/// q2 = u⁺_2 (ι2 n) − u⁻_2 (n)
/// q0 = u⁺_0 (n)    − u⁻_0 (ι0 n)
/// ```
///
/// With the sides oriented outward (so the three crooked halfspaces are
/// the disjoint complement of the triangle), positive coefficients place
/// each `q_i` inside the translational semigroup of its face.
pub type VertexCoefficients = [[f64; 2]; 3];

/// Affine Coxeter group on a vertex triple: the three particle involutions,
/// the affine boosts they compose to, and the induced cocycle.
#[derive(Clone, Debug)]
pub struct AffineCoxeter {
    pub involutions: [AffineIsometry; 3],
    /// `ρ(A) = ι̃2 ι̃0`, `ρ(B) = ι̃0 ι̃1`, `ρ(C) = ι̃1 ι̃2`.
    pub boosts: [AffineIsometry; 3],
    /// Values on the generators of the extension's own basic triple (for
    /// a non-base superbasis these are not the values on the global
    /// generators).
    pub cocycle: Cocycle,
    /// Vertex points `p_0, p_1, p_2` (the faces' stem vertices).
    pub vertices: [Point; 3],
    /// Offsets `q_i = p_i − O` with `O` the global origin.
    pub offsets: [LorentzVector; 3],
}

pub fn affine_coxeter(
    ext: &CoxeterExtension,
    ftri: &FundamentalTriangle,
    u: &VertexCoefficients,
) -> Result<AffineCoxeter> {
    let n = ftri.n;
    let i0n = ftri.iota0_n;
    let i2n = ftri.iota2_n;
    let q0 = n * u[0][0] - i0n * u[0][1];
    let q1 = i0n * u[1][0] - i2n * u[1][1];
    let q2 = i2n * u[2][0] - n * u[2][1];
    let offsets = [q0, q1, q2];
    let vertices = [
        Point::ORIGIN + q0,
        Point::ORIGIN + q1,
        Point::ORIGIN + q2,
    ];
    let involutions = [
        particle_involution(vertices[0], ext.t[0])?,
        particle_involution(vertices[1], ext.t[1])?,
        particle_involution(vertices[2], ext.t[2])?,
    ];
    let boosts = [
        involutions[2].compose(&involutions[0]),
        involutions[0].compose(&involutions[1]),
        involutions[1].compose(&involutions[2]),
    ];
    let cocycle = Cocycle {
        ua: boosts[0].translation,
        ub: boosts[1].translation,
    };
    Ok(AffineCoxeter {
        involutions,
        boosts,
        cocycle,
        vertices,
        offsets,
    })
}

impl AffineCoxeter {
    /// The crooked ideal triangle whose faces sit at the vertex triple.
    pub fn domain(&self, ftri: &FundamentalTriangle) -> Result<CrookedIdealTriangle> {
        CrookedIdealTriangle::new(ftri.triangle, self.vertices)
    }
}

/// Margulis invariants from the offsets and the neutral vectors of
/// `(A, B, C)`: `(2(q2−q0)·a, 2(q0−q1)·b, 2(q1−q2)·c)`.
pub fn alpha_via_lemma(q: &[LorentzVector; 3], neutrals: &[LorentzVector; 3]) -> [f64; 3] {
    [
        2.0 * (q[2] - q[0]).dot(neutrals[0]),
        2.0 * (q[0] - q[1]).dot(neutrals[1]),
        2.0 * (q[1] - q[2]).dot(neutrals[2]),
    ]
}

/// Neutral vectors of the triple of a Coxeter extension.
pub fn triple_neutrals(ext: &CoxeterExtension) -> Result<[LorentzVector; 3]> {
    Ok(ext.neutrals)
}

/// Rank-one 3×2 matrix mapping one vertex's `(u⁺, u⁻)` to α-contributions.
#[derive(Clone, Copy, Debug)]
pub struct CornerMatrix {
    /// Rows indexed by `(α(A), α(B), α(C))`, columns by `(u⁺, u⁻)`.
    pub m: [[f64; 2]; 3],
}

impl CornerMatrix {
    pub fn apply(&self, u: [f64; 2]) -> [f64; 3] {
        [
            self.m[0][0] * u[0] + self.m[0][1] * u[1],
            self.m[1][0] * u[0] + self.m[1][1] * u[1],
            self.m[2][0] * u[0] + self.m[2][1] * u[1],
        ]
    }

    /// Singular values, descending. The small one is recovered from the
    /// compensated determinant of the nonzero 2×2 block (σ₁σ₂ = |det|):
    /// the Gram-matrix route squares the cancellation noise and buries a
    /// rank-one verdict that the entries actually support.
    pub fn singular_values(&self) -> (f64, f64) {
        let mut g = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                g[i][j] = (0..3).map(|r| self.m[r][i] * self.m[r][j]).sum();
            }
        }
        let tr = g[0][0] + g[1][1];
        let det_gram = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let disc = flt::sqrt((tr * tr / 4.0 - det_gram).max(0.0));
        let s1 = flt::sqrt((tr / 2.0 + disc).max(0.0));
        if s1 <= 0.0 {
            return (0.0, 0.0);
        }
        // |det| of the 3×2 matrix restricted to its two largest rows; with
        // one structurally zero row this is the product of the singular
        // values.
        let rows: Vec<usize> = {
            let mut idx = [0usize, 1, 2];
            idx.sort_by(|&a, &b| {
                let na = self.m[a][0] * self.m[a][0] + self.m[a][1] * self.m[a][1];
                let nb = self.m[b][0] * self.m[b][0] + self.m[b][1] * self.m[b][1];
                nb.partial_cmp(&na).unwrap_or(core::cmp::Ordering::Equal)
            });
            idx[..2].to_vec()
        };
        let (r0, r1) = (rows[0], rows[1]);
        let p1 = self.m[r0][0] * self.m[r1][1];
        let e1 = flt::fma(self.m[r0][0], self.m[r1][1], -p1);
        let p2 = self.m[r0][1] * self.m[r1][0];
        let e2 = flt::fma(self.m[r0][1], self.m[r1][0], -p2);
        let det_block = (p1 - p2) + (e1 - e2);
        (s1, flt::abs(det_block) / s1)
    }

    /// Index of the (numerically) zero row, if exactly one exists.
    pub fn zero_row(&self) -> Option<usize> {
        let scale = self
            .m
            .iter()
            .flatten()
            .fold(0.0f64, |acc, v| acc.max(flt::abs(*v)));
        let mut found = None;
        for (r, row) in self.m.iter().enumerate() {
            if flt::abs(row[0]) <= 1e-10 * scale && flt::abs(row[1]) <= 1e-10 * scale {
                if found.is_some() {
                    return None;
                }
                found = Some(r);
            }
        }
        found
    }
}

/// The three corner matrices `(M_1, M_2, M_0)` of a fundamental triangle:
///
/// ```text
/// α/2 = M_1 (u⁺_1, u⁻_1) + M_2 (u⁺_2, u⁻_2) + M_0 (u⁺_0, u⁻_0)
/// ```
///
/// Each expands the offset formula `α(A)/2 = (q_2 − q_0)·a` (and its
/// cyclic siblings) in the vertex coefficients; the row of the word whose
/// axis meets the vertex is structurally zero, and the orthogonality that
/// makes the remaining 2×2 block singular forces rank one.
pub fn corner_matrices(
    ext: &CoxeterExtension,
    ftri: &FundamentalTriangle,
) -> Result<[CornerMatrix; 3]> {
    let data = CornerData {
        neutrals: triple_neutrals(ext)?,
        cusps: [ftri.n, ftri.iota0_n, ftri.iota2_n],
    };
    Ok(corner_matrices_from(&data))
}

/// Geometric data of one superbasis node of the tiling atlas.
#[derive(Clone, Debug)]
pub struct Tile {
    /// Index into the atlas' tree nodes.
    pub node: usize,
    /// Unit corner directions in the base α-coordinates; corner `i` lies in
    /// the plane where the Margulis invariant of the node's slot-`i` word
    /// vanishes.
    pub corners: [[f64; 3]; 3],
    /// α of the node's words on the six basis cocycles (rows by slot).
    pub alpha_rows: [[f64; 6]; 3],
    /// Traces of the node's words.
    pub traces: [f64; 3],
}

/// The tiling atlas to a fixed depth of the superbasis tree.
#[derive(Clone, Debug)]
pub struct TilingAtlas {
    pub nodes: Vec<TreeNode>,
    pub tiles: Vec<Tile>,
    /// Chart polygon of the tame region in the plane `αA+αB+αC = 1`,
    /// as a closed convex polygon in 2-d chart coordinates.
    pub chart_polygon: Vec<[f64; 2]>,
    pub depth: usize,
    /// The α-system of the base superbasis (the atlas' coordinates).
    pub base_system: AlphaSystem,
}

impl TilingAtlas {
    /// Express an α-functional (a row over the six basis cocycles) as a
    /// covector on the base coordinates.
    pub fn covector(&self, row: &[f64; 6]) -> [f64; 3] {
        base_covector(&self.base_system, row)
    }
}

/// Coefficients of the flip covector identity across one tree edge, and the
/// residual of the identity against the α-rows.
#[derive(Clone, Copy, Debug)]
pub struct FlipCovector {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub residual: f64,
    /// Largest invariant magnitude encountered while testing the identity;
    /// the residual is meaningful relative to it.
    pub scale: f64,
}

fn sinh_half_from_trace(t: f64) -> f64 {
    flt::sqrt((t * t / 4.0 - 1.0).max(0.0))
}

/// Coefficients of `α_{R'} = a α_P + b α_Q − c α_R` for the flip replacing
/// the word of trace `tr_r` by one of trace `tr_p·tr_q − tr_r`.
fn flip_coefficients(tr_p: f64, tr_q: f64, tr_r: f64) -> (f64, f64, f64) {
    let tr_new = tr_p * tr_q - tr_r;
    let sh_new = sinh_half_from_trace(tr_new);
    let a = 2.0 * sinh_half_from_trace(tr_p) * (tr_q / 2.0) / sh_new;
    let b = 2.0 * (tr_p / 2.0) * sinh_half_from_trace(tr_q) / sh_new;
    let c = sinh_half_from_trace(tr_r) / sh_new;
    (a, b, c)
}

/// Per-node geometric pipeline: extension, cycle, triangle.
pub struct NodeGeometry {
    pub ext: CoxeterExtension,
    pub ftri: FundamentalTriangle,
}

/// Evaluate the words of a node and build its Coxeter geometry.
pub fn node_geometry(
    rep: &FuchsianRep,
    words: &BasicTriple,
    choice: FixedPointChoice,
) -> Result<NodeGeometry> {
    let a = rep.evaluate_sl2(&words.a);
    let b = rep.evaluate_sl2(&words.b);
    let ext = coxeter_extension(&a, &b)?;
    // The boundary trace is a Fricke invariant shared by every node.
    let (x, y, z) = rep.traces();
    let k_trace = x * x + y * y + z * z - x * y * z - 2.0;
    let cycle = fixed_point_cycle_with_boundary_trace(&ext, choice, k_trace)?;
    let ftri = fundamental_triangle(&ext, &cycle)?;
    Ok(NodeGeometry { ext, ftri })
}

/// Enumerate the tiling atlas to `depth`.
///
/// Corner rays are produced per node from its corner matrices and
/// transported to the base α-coordinates through a minimum-norm cocycle.
/// The per-node α-rows are propagated down the tree through the flip
/// covector identity, which is numerically stable at every depth, unlike
/// direct word evaluation whose translational parts grow doubly
/// exponentially along unbalanced branches.
pub fn enumerate_tiles(
    rep: &FuchsianRep,
    depth: usize,
    choice: FixedPointChoice,
) -> Result<TilingAtlas> {
    let nodes = enumerate_tree(depth)?;
    let base_system = AlphaSystem::new(rep, &BasicTriple::base())?;
    let mut tiles: Vec<Tile> = Vec::with_capacity(nodes.len());
    for (idx, node) in nodes.iter().enumerate() {
        let (alpha_rows, traces) = match node.parent {
            None => {
                let mut traces = [0.0; 3];
                for slot in 0..3 {
                    traces[slot] = rep.evaluate_sl2(node.words.word(slot)).trace();
                }
                (base_system.matrix, traces)
            }
            Some(parent_idx) => {
                let parent = &tiles[parent_idx];
                propagate_rows(parent, node.slot)
            }
        };
        // Corners of the kept primitives are shared across the whole fan
        // of tiles around them, so a child copies them from its parent and
        // only the new primitive's corner is computed. (Geometric
        // agreement of recomputed shared corners is checked by the test
        // suites at depths where the conditioning supports it.)
        let corners = match node.parent {
            None => compute_corners(rep, &node.words, choice, &alpha_rows, &base_system, None)?,
            Some(parent_idx) => {
                let parent_corners = tiles[parent_idx].corners;
                let mut corners = compute_corners(
                    rep,
                    &node.words,
                    choice,
                    &alpha_rows,
                    &base_system,
                    Some(node.slot),
                )?;
                // The kept words sit in permuted slots; match by the
                // α-functional they annihilate.
                let keep: [usize; 2] = match node.slot {
                    0 => [1, 2],
                    1 => [0, 2],
                    _ => [0, 1],
                };
                let order: [usize; 2] = match node.slot {
                    0 => [2, 1],
                    1 => [2, 0],
                    _ => [1, 0],
                };
                for (dst, src) in keep.iter().zip(order.iter()) {
                    corners[*dst] = parent_corners[*src];
                }
                corners
            }
        };
        let det = det3_arr(&corners);
        if det == 0.0 || !det.is_finite() {
            return Err(GeomError::Degenerate("corner rays dependent"));
        }
        tiles.push(Tile {
            node: idx,
            corners,
            alpha_rows,
            traces,
        });
    }
    let chart_polygon = chart_boundary(&nodes, &tiles, depth)?;
    Ok(TilingAtlas {
        nodes,
        tiles,
        chart_polygon,
        depth,
        base_system,
    })
}

/// Corner matrices of a node, through the light 2×2 extraction (no
/// triangle or involution construction, so it works at depths where the
/// full geometric pipeline degenerates).
pub fn node_corner_matrices(
    rep: &FuchsianRep,
    words: &BasicTriple,
    choice: FixedPointChoice,
) -> Result<[CornerMatrix; 3]> {
    let (x, y, z) = rep.traces();
    let k_trace = x * x + y * y + z * z - x * y * z - 2.0;
    Ok(corner_matrices_from(&corner_data(rep, words, choice, k_trace)?))
}

/// Per-node data for corner construction: neutral vectors of the words
/// and the cusp rays of the fundamental triangle, all extracted at the
/// 2×2 level so the computation survives deep nodes.
struct CornerData {
    neutrals: [LorentzVector; 3],
    /// `(n, ι0 n, ι2 n)` as z-normalized rays.
    cusps: [LorentzVector; 3],
}

fn corner_data(
    rep: &FuchsianRep,
    words: &BasicTriple,
    choice: FixedPointChoice,
    k_trace: f64,
) -> Result<CornerData> {
    let a = rep.evaluate_sl2(&words.a);
    let b = rep.evaluate_sl2(&words.b);
    let c = rep.evaluate_sl2(&words.c);
    let neutrals = [
        crate::surface::sl2_neutral(&a)?,
        crate::surface::sl2_neutral(&b)?,
        crate::surface::sl2_neutral(&c)?,
    ];
    let magnitude = Some(flt::abs(k_trace));
    let pick = |m: &crate::hyperbolic::Mat2| -> Result<LorentzVector> {
        Ok(match crate::hyperbolic::sl2_fixed_null_rays(m, magnitude)? {
            crate::hyperbolic::Sl2Fixed::Parabolic(v) => v,
            crate::hyperbolic::Sl2Fixed::Hyperbolic {
                attracting,
                repelling,
            } => match choice {
                FixedPointChoice::Plus => attracting,
                FixedPointChoice::Minus => repelling,
            },
        })
    };
    // [n] = Fix(BAC)-square root; ι0[n] = Fix(CBA); ι2[n] = Fix(ACB).
    let n = pick(&b.mul(&a).mul(&c))?.z_normalized()?;
    let i0n = pick(&c.mul(&b).mul(&a))?.z_normalized()?;
    let i2n = pick(&a.mul(&c).mul(&b))?.z_normalized()?;
    Ok(CornerData {
        neutrals,
        cusps: [n, i0n, i2n],
    })
}

/// Corner matrices from raw neutral/cusp data.
fn corner_matrices_from(data: &CornerData) -> [CornerMatrix; 3] {
    let [a, b, c] = data.neutrals;
    let [n, i0n, i2n] = data.cusps;
    let d = LorentzVector::dot_compensated;
    let m1 = CornerMatrix {
        m: [
            [0.0, 0.0],
            [-d(b, i0n), d(b, i2n)],
            [d(c, i0n), -d(c, i2n)],
        ],
    };
    let m2 = CornerMatrix {
        m: [
            [d(a, i2n), -d(a, n)],
            [0.0, 0.0],
            [-d(c, i2n), d(c, n)],
        ],
    };
    let m0 = CornerMatrix {
        m: [
            [-d(a, n), d(a, i0n)],
            [d(b, n), -d(b, i0n)],
            [0.0, 0.0],
        ],
    };
    [m1, m2, m0]
}

/// Express the α-functional with the given coefficient row as a covector
/// on the base coordinates: solve `M_baseᵀ g = row` through the (well
/// conditioned) base Gram.
fn base_covector(base_system: &AlphaSystem, row: &[f64; 6]) -> [f64; 3] {
    // With M = D·S (row-equilibrated), g = (M Mᵀ)⁻¹ M row = D⁻¹ G⁻¹ (S row).
    let mut rhs = [0.0; 3];
    for i in 0..3 {
        rhs[i] = (0..6).map(|k| base_system.scaled[i][k] * row[k]).sum();
    }
    let mut g = [0.0; 3];
    for i in 0..3 {
        let t: f64 = (0..3).map(|j| base_system.gram_inv[i][j] * rhs[j]).sum();
        g[i] = t / base_system.row_scale[i];
    }
    g
}

/// Corner rays of a node in base coordinates. Each corner is the
/// intersection of two stable covector planes: the vanishing plane of its
/// own word's invariant, and the plane fixing the ratio of the other two
/// invariants prescribed by the rank-one corner matrix. `only_slot`
/// restricts the work to one corner (the others are fan-shared with the
/// parent).
fn compute_corners(
    rep: &FuchsianRep,
    words: &BasicTriple,
    choice: FixedPointChoice,
    alpha_rows: &[[f64; 6]; 3],
    base_system: &AlphaSystem,
    only_slot: Option<usize>,
) -> Result<[[f64; 3]; 3]> {
    let (x, y, z) = rep.traces();
    let k_trace = x * x + y * y + z * z - x * y * z - 2.0;
    let data = corner_data(rep, words, choice, k_trace)?;
    let ms = corner_matrices_from(&data);
    let g = [
        base_covector(base_system, &alpha_rows[0]),
        base_covector(base_system, &alpha_rows[1]),
        base_covector(base_system, &alpha_rows[2]),
    ];
    let mut corners = [[0.0; 3]; 3];
    let mut seen = [false; 3];
    for m in &ms {
        let row = m
            .zero_row()
            .ok_or(GeomError::Degenerate("corner matrix zero row"))?;
        if seen[row] {
            return Err(GeomError::Degenerate("corner index collision"));
        }
        seen[row] = true;
        if let Some(slot) = only_slot {
            if slot != row {
                continue;
            }
        }
        let (p_slot, q_slot) = ((row + 1) % 3, (row + 2) % 3);
        let target = m.apply([1.0, 1.0]);
        let (p_val, q_val) = (target[p_slot], target[q_slot]);
        // d ⊥ g_row and d ⊥ (q g_P − p g_Q).
        let g1 = g[row];
        let g2 = [
            q_val * g[p_slot][0] - p_val * g[q_slot][0],
            q_val * g[p_slot][1] - p_val * g[q_slot][1],
            q_val * g[p_slot][2] - p_val * g[q_slot][2],
        ];
        let mut d = [
            g1[1] * g2[2] - g1[2] * g2[1],
            g1[2] * g2[0] - g1[0] * g2[2],
            g1[0] * g2[1] - g1[1] * g2[0],
        ];
        let norm = flt::sqrt(d.iter().map(|v| v * v).sum());
        if norm <= 1e-300 {
            return Err(GeomError::Degenerate("zero corner ray"));
        }
        // Positive branch: tiles live in the positive dual cone of the
        // base triple, so corner rays have positive coordinate sum.
        let sum = d[0] + d[1] + d[2];
        let sign = if sum >= 0.0 { 1.0 } else { -1.0 };
        for v in d.iter_mut() {
            *v *= sign / norm;
        }
        corners[row] = d;
    }
    Ok(corners)
}

/// α-rows and traces of a child node from its parent's, by the flip
/// covector identity at the flipped slot.
fn propagate_rows(parent: &Tile, slot: usize) -> ([[f64; 6]; 3], [f64; 3]) {
    let pr = &parent.alpha_rows;
    let pt = &parent.traces;
    // Kept pair (P, Q) in cyclic order after the flipped slot.
    let (p, q) = ((slot + 1) % 3, (slot + 2) % 3);
    let (ca, cb, cc) = flip_coefficients(pt[p], pt[q], pt[slot]);
    let mut new_row = [0.0; 6];
    for k in 0..6 {
        new_row[k] = ca * pr[p][k] + cb * pr[q][k] - cc * pr[slot][k];
    }
    // The flips place the words as: slot 2 → (B⁻¹, A, new); slot 0 →
    // (new, C, B⁻¹); slot 1 → (C⁻¹, new, A); α is inversion-invariant.
    let mut rows = [[0.0; 6]; 3];
    let mut traces = [0.0; 3];
    let order: [usize; 2] = match slot {
        0 => [2, 1], // slots (1,2) of the child hold words (C, B⁻¹)
        1 => [2, 0], // slots (0,2) hold (C⁻¹, A)
        _ => [1, 0], // slots (0,1) hold (B⁻¹, A)
    };
    let others: [usize; 2] = match slot {
        0 => [1, 2],
        1 => [0, 2],
        _ => [0, 1],
    };
    rows[slot] = new_row;
    traces[slot] = pt[p] * pt[q] - pt[slot];
    for (dst, src) in others.iter().zip(order.iter()) {
        rows[*dst] = pr[*src];
        traces[*dst] = pt[*src];
    }
    (rows, traces)
}

fn det3_arr(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Project a positive-branch direction to the chart plane `x+y+z = 1` and
/// return planar coordinates.
pub fn chart_coords(v: &[f64; 3]) -> Result<[f64; 2]> {
    let s = v[0] + v[1] + v[2];
    if s <= 1e-12 {
        return Err(GeomError::Degenerate("direction outside the positive dual cone"));
    }
    let p = [v[0] / s, v[1] / s, v[2] / s];
    // Orthonormal coordinates in the plane around the centroid.
    let x = (p[1] - p[0]) * core::f64::consts::FRAC_1_SQRT_2;
    let y = (2.0 * p[2] - p[0] - p[1]) / flt::sqrt(6.0);
    Ok([x, y])
}

/// Boundary polygon of the depth-`n` tame region: the outer edges of the
/// depth-`n` tiles, chained into a closed cycle in chart coordinates.
fn chart_boundary(nodes: &[TreeNode], tiles: &[Tile], depth: usize) -> Result<Vec<[f64; 2]>> {
    // Shared corners are propagated by copying, so identity is exact.
    let ray_eq = |a: &[f64; 3], b: &[f64; 3]| a == b;
    let mut edges: Vec<([f64; 3], [f64; 3])> = Vec::new();
    for tile in tiles {
        let node = &nodes[tile.node];
        if node.depth != depth {
            continue;
        }
        match node.parent {
            None => {
                for k in 0..3 {
                    edges.push((tile.corners[k], tile.corners[(k + 1) % 3]));
                }
            }
            Some(parent_idx) => {
                let parent = &tiles[parent_idx];
                let mut fresh: Vec<usize> = Vec::new();
                for (k, c) in tile.corners.iter().enumerate() {
                    if !parent.corners.iter().any(|pc| ray_eq(pc, c)) {
                        fresh.push(k);
                    }
                }
                if fresh.len() != 1 {
                    return Err(GeomError::Degenerate("child tile corner sharing"));
                }
                let new = fresh[0];
                edges.push((tile.corners[new], tile.corners[(new + 1) % 3]));
                edges.push((tile.corners[new], tile.corners[(new + 2) % 3]));
            }
        }
    }
    // Chain the edges into a cycle.
    let mut polygon: Vec<[f64; 3]> = Vec::with_capacity(edges.len());
    let mut used = alloc::vec![false; edges.len()];
    let (start, mut current) = edges[0];
    polygon.push(start);
    used[0] = true;
    while polygon.len() < edges.len() {
        polygon.push(current);
        let mut advanced = false;
        for (k, (a, b)) in edges.iter().enumerate() {
            if used[k] {
                continue;
            }
            if ray_eq(a, &current) {
                current = *b;
                used[k] = true;
                advanced = true;
                break;
            }
            if ray_eq(b, &current) {
                current = *a;
                used[k] = true;
                advanced = true;
                break;
            }
        }
        if !advanced {
            return Err(GeomError::Degenerate("boundary chain broken"));
        }
    }
    if !ray_eq(&current, &polygon[0]) {
        return Err(GeomError::Degenerate("boundary chain does not close"));
    }
    polygon.iter().map(chart_coords).collect()
}

/// Convexity check of a closed polygon: all consecutive edge cross products
/// share one sign, within tolerance `tol` on the turn angle. Turns that are
/// unresolvable at f64 vertex precision are skipped: boundary vertices of
/// deep atlases carry absolute position noise of order `1e−11` of the
/// polygon diameter, and tiles on extreme branches shrink below it.
pub fn polygon_is_convex(polygon: &[[f64; 2]], tol: f64) -> bool {
    let n = polygon.len();
    if n < 3 {
        return false;
    }
    let mut diameter = 0.0f64;
    for p in polygon {
        for q in polygon {
            let d = (p[0] - q[0]).abs().max((p[1] - q[1]).abs());
            diameter = diameter.max(d);
        }
    }
    let position_floor = 1e-11 * diameter.max(1e-300);
    let mut sign = 0.0f64;
    for i in 0..n {
        let a = polygon[i];
        let b = polygon[(i + 1) % n];
        let c = polygon[(i + 2) % n];
        let u = [b[0] - a[0], b[1] - a[1]];
        let v = [c[0] - b[0], c[1] - b[1]];
        let cross = u[0] * v[1] - u[1] * v[0];
        let lu = flt::sqrt(u[0] * u[0] + u[1] * u[1]);
        let lv = flt::sqrt(v[0] * v[0] + v[1] * v[1]);
        if flt::abs(cross) <= tol * lu * lv + position_floor * (lu + lv) {
            continue;
        }
        if sign == 0.0 {
            sign = cross.signum();
        } else if cross.signum() != sign {
            return false;
        }
    }
    sign != 0.0
}

/// Location of a unit direction relative to a tile's corner cone.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TileLocation {
    Interior,
    /// The barycentric coordinate of this corner vanishes (the direction
    /// lies on the edge opposite to it).
    Edge(usize),
    /// Only the coordinate of this corner survives.
    Corner(usize),
    Outside,
}

/// Classify a direction against a tile with tolerance `1e−8` on the
/// expansion coefficients.
pub fn tile_contains(tile: &Tile, direction: &[f64; 3]) -> Result<TileLocation> {
    let norm = flt::sqrt(direction.iter().map(|v| v * v).sum());
    if norm <= 1e-300 {
        return Err(GeomError::Degenerate("zero direction"));
    }
    let d = [direction[0] / norm, direction[1] / norm, direction[2] / norm];
    // Solve d = Σ λ_i c_i.
    let cols = tile.corners;
    let m = [
        [cols[0][0], cols[1][0], cols[2][0]],
        [cols[0][1], cols[1][1], cols[2][1]],
        [cols[0][2], cols[1][2], cols[2][2]],
    ];
    let Some(inv) = invert3(&m) else {
        // Sub-float-width sliver tile: classify against the (numerically
        // merged) corner rays directly.
        for (i, c) in tile.corners.iter().enumerate() {
            let dot = c[0] * d[0] + c[1] * d[1] + c[2] * d[2];
            if dot > 1.0 - 1e-12 {
                return Ok(TileLocation::Corner(i));
            }
        }
        return Ok(TileLocation::Outside);
    };
    let mut lambda = [0.0; 3];
    for i in 0..3 {
        lambda[i] = (0..3).map(|j| inv[i][j] * d[j]).sum();
    }
    let eps = 1e-8;
    let zeroes: Vec<usize> = (0..3).filter(|&i| flt::abs(lambda[i]) <= eps).collect();
    if lambda.iter().any(|&l| l < -eps) {
        return Ok(TileLocation::Outside);
    }
    Ok(match zeroes.len() {
        0 => TileLocation::Interior,
        1 => TileLocation::Edge(zeroes[0]),
        2 => TileLocation::Corner((0..3).find(|i| !zeroes.contains(i)).unwrap()),
        _ => TileLocation::Outside,
    })
}

/// Verify the flip covector identity across a tree edge of the atlas by
/// direct evaluation: residual over the six basis cocycles.
pub fn flip_covector_identity(
    rep: &FuchsianRep,
    atlas: &TilingAtlas,
    child_index: usize,
) -> Result<FlipCovector> {
    let child_node = &atlas.nodes[child_index];
    let parent_index = child_node
        .parent
        .ok_or(GeomError::InvalidCombinatorics("root has no parent edge"))?;
    let parent = &atlas.tiles[parent_index];
    let slot = child_node.slot;
    let (p, q) = ((slot + 1) % 3, (slot + 2) % 3);
    let (a, b, c) = flip_coefficients(parent.traces[p], parent.traces[q], parent.traces[slot]);
    // Direct evaluation of every α on the basis cocycles.
    let parent_words = &atlas.nodes[parent_index].words;
    let child_words = &child_node.words;
    let mut residual = 0.0f64;
    let mut scale = 0.0f64;
    for u in basis_cocycles() {
        let alpha = |w: &F2Word| -> Result<f64> { word_invariant(rep, &u, w) };
        let lhs = alpha(child_words.word(slot))?;
        let term_p = a * alpha(parent_words.word(p))?;
        let term_q = b * alpha(parent_words.word(q))?;
        let term_r = c * alpha(parent_words.word(slot))?;
        residual = residual.max(flt::abs(lhs - (term_p + term_q - term_r)));
        // The combination cancels between terms; that is the scale at
        // which the residual is meaningful.
        scale = scale
            .max(flt::abs(lhs))
            .max(flt::abs(term_p))
            .max(flt::abs(term_q))
            .max(flt::abs(term_r));
    }
    Ok(FlipCovector {
        a,
        b,
        c,
        residual,
        scale,
    })
}

/// Pairwise tile-interior disjointness over the whole atlas, decided by
/// separating planes through the origin spanned by pairs of corner rays.
#[derive(Clone, Debug)]
pub struct TileDisjointness {
    pub pairs_checked: usize,
    pub violations: Vec<(usize, usize)>,
}

pub fn tiles_disjoint(atlas: &TilingAtlas) -> TileDisjointness {
    let mut violations = Vec::new();
    let mut pairs_checked = 0;
    for i in 0..atlas.tiles.len() {
        for j in (i + 1)..atlas.tiles.len() {
            pairs_checked += 1;
            if !tiles_separated(&atlas.tiles[i], &atlas.tiles[j]) {
                violations.push((i, j));
            }
        }
    }
    TileDisjointness {
        pairs_checked,
        violations,
    }
}

fn tiles_separated(t1: &Tile, t2: &Tile) -> bool {
    let tol = 1e-9;
    let rays: Vec<[f64; 3]> = t1.corners.iter().chain(t2.corners.iter()).copied().collect();
    for i in 0..rays.len() {
        for j in (i + 1)..rays.len() {
            let n = [
                rays[i][1] * rays[j][2] - rays[i][2] * rays[j][1],
                rays[i][2] * rays[j][0] - rays[i][0] * rays[j][2],
                rays[i][0] * rays[j][1] - rays[i][1] * rays[j][0],
            ];
            let norm = flt::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
            if norm <= 1e-12 {
                continue;
            }
            let side = |c: &[f64; 3]| (c[0] * n[0] + c[1] * n[1] + c[2] * n[2]) / norm;
            let mut lo1 = f64::INFINITY;
            let mut hi1 = f64::NEG_INFINITY;
            for c in &t1.corners {
                let s = side(c);
                lo1 = lo1.min(s);
                hi1 = hi1.max(s);
            }
            let mut lo2 = f64::INFINITY;
            let mut hi2 = f64::NEG_INFINITY;
            for c in &t2.corners {
                let s = side(c);
                lo2 = lo2.min(s);
                hi2 = hi2.max(s);
            }
            if (hi1 <= tol && lo2 >= -tol) || (hi2 <= tol && lo1 >= -tol) {
                return true;
            }
        }
    }
    false
}

/// Crooked ideal quadrilateral at an edge of the deformation space:
/// `u±_0 = 0`, faces `CP_1, CP_2` and their images under the particle
/// involution at the center.
#[derive(Clone, Debug)]
pub struct EdgeQuadrilateral {
    /// Faces in the order `CP_1, CP_2, ι̃0(CP_1), ι̃0(CP_2)`.
    pub faces: [CrookedHalfspace; 4],
    pub reflection: AffineIsometry,
    pub coxeter: AffineCoxeter,
    /// Closed pairwise disjointness of the six face pairs, in the order
    /// (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
    pub disjoint: [bool; 6],
}

pub fn edge_quadrilateral(
    ext: &CoxeterExtension,
    ftri: &FundamentalTriangle,
    u1: [f64; 2],
    u2: [f64; 2],
) -> Result<EdgeQuadrilateral> {
    edge_quadrilateral_at(ext, ftri, 0, u1, u2)
}

/// Edge quadrilateral with the degenerate face at an arbitrary slot: the
/// two remaining faces together with their images under the particle
/// involution at the shared vertex.
pub fn edge_quadrilateral_at(
    ext: &CoxeterExtension,
    ftri: &FundamentalTriangle,
    slot: usize,
    u1: [f64; 2],
    u2: [f64; 2],
) -> Result<EdgeQuadrilateral> {
    if slot > 2 {
        return Err(GeomError::Degenerate("edge slot out of range"));
    }
    if u1[0] <= 0.0 || u1[1] <= 0.0 || u2[0] <= 0.0 || u2[1] <= 0.0 {
        return Err(GeomError::Degenerate("edge coefficients must be positive"));
    }
    let (i, j) = ((slot + 1) % 3, (slot + 2) % 3);
    let mut u: VertexCoefficients = [[0.0, 0.0]; 3];
    u[i] = u1;
    u[j] = u2;
    let coxeter = affine_coxeter(ext, ftri, &u)?;
    let frames = shared_frames(&ftri.triangle)?;
    let cp1 = CrookedHalfspace::new(frames[i], coxeter.vertices[i]);
    let cp2 = CrookedHalfspace::new(frames[j], coxeter.vertices[j]);
    let reflection = coxeter.involutions[slot];
    let cp1_img = cp1.transformed(&reflection)?;
    let cp2_img = cp2.transformed(&reflection)?;
    let faces = [cp1, cp2, cp1_img, cp2_img];
    let mut disjoint = [false; 6];
    let mut k = 0;
    for i in 0..4 {
        for j in (i + 1)..4 {
            disjoint[k] = halfspaces_disjoint(&faces[i], &faces[j], Strictness::Closed);
            k += 1;
        }
    }
    Ok(EdgeQuadrilateral {
        faces,
        reflection,
        coxeter,
        disjoint,
    })
}

/// Report of a fundamental-domain sampling run.
#[derive(Clone, Debug)]
pub struct DomainReport {
    pub samples: usize,
    pub words: usize,
    pub violations: usize,
}

/// One generator of a word enumeration: the affine isometry together
/// with a 2×2 lift of its linear part.
///
/// Words are accumulated as lift products, and each element's linear part
/// is taken from the adjoint of its accumulated lift. Composing the
/// adjoint matrices directly instead squares the intermediate magnitudes:
/// for involutions fixing far-out points the intermediates overflow the
/// f64 significand long before the group element does.
#[derive(Clone, Copy, Debug)]
pub struct LiftedGenerator {
    pub lift: crate::hyperbolic::Mat2,
    pub translation: LorentzVector,
}

impl LiftedGenerator {
    pub fn new(lift: crate::hyperbolic::Mat2, affine: &AffineIsometry) -> LiftedGenerator {
        LiftedGenerator {
            lift,
            translation: affine.translation,
        }
    }
}

fn lifted_layers(
    letters: &[LiftedGenerator],
    blocked: impl Fn(usize, usize) -> bool,
    max_len: usize,
) -> Result<Vec<AffineIsometry>> {
    use crate::hyperbolic::from_sl2;
    struct Partial {
        last: usize,
        lift: crate::hyperbolic::Mat2,
        translation: LorentzVector,
    }
    let mut out: Vec<AffineIsometry> = Vec::new();
    let mut layer: Vec<Partial> = Vec::new();
    for len in 1..=max_len {
        if len == 1 {
            layer = letters
                .iter()
                .enumerate()
                .map(|(k, g)| Partial {
                    last: k,
                    lift: g.lift,
                    translation: g.translation,
                })
                .collect();
        } else {
            let mut next = Vec::with_capacity(layer.len() * (letters.len() - 1));
            for p in &layer {
                let linear_prefix = from_sl2(&p.lift)?;
                for (k, g) in letters.iter().enumerate() {
                    if blocked(p.last, k) {
                        continue;
                    }
                    next.push(Partial {
                        last: k,
                        lift: p.lift.mul(&g.lift),
                        translation: p.translation + linear_prefix.apply(g.translation),
                    });
                }
            }
            layer = next;
        }
        for p in &layer {
            out.push(AffineIsometry::new(from_sl2(&p.lift)?, p.translation));
        }
    }
    Ok(out)
}

/// Nontrivial reduced words of length ≤ `max_len` in the three affine
/// involutions of an extension (no immediate repetitions).
pub fn involution_words_lifted(
    ext: &CoxeterExtension,
    involutions: &[AffineIsometry; 3],
    max_len: usize,
) -> Result<Vec<AffineIsometry>> {
    let letters: Vec<LiftedGenerator> = (0..3)
        .map(|i| LiftedGenerator::new(ext.iota_sl2[i], &involutions[i]))
        .collect();
    lifted_layers(&letters, |last, k| last == k, max_len)
}

/// Reduced words of length ≤ `max_len` in two affine generators and their
/// inverses (no adjacent inverse pairs), composed through 2×2 lifts.
pub fn free_group_words_lifted(
    lifts: &[crate::hyperbolic::Mat2; 2],
    gens: &[AffineIsometry; 2],
    max_len: usize,
) -> Result<Vec<AffineIsometry>> {
    let letters = alloc::vec![
        LiftedGenerator::new(lifts[0], &gens[0]),
        LiftedGenerator::new(lifts[0].inverse_unimodular(), &gens[0].inverse()),
        LiftedGenerator::new(lifts[1], &gens[1]),
        LiftedGenerator::new(lifts[1].inverse_unimodular(), &gens[1].inverse()),
    ];
    lifted_layers(&letters, |last, k| k == last ^ 1, max_len)
}

/// Enumerate the nontrivial reduced words of length ≤ `max_len` in three
/// involution generators (no immediate repetitions) as affine isometries,
/// composed directly. Adequate near the identity; prefer
/// [`involution_words_lifted`] for verification runs.
pub fn involution_words(gens: &[AffineIsometry; 3], max_len: usize) -> Vec<AffineIsometry> {
    let mut out: Vec<AffineIsometry> = Vec::new();
    let mut layer: Vec<(usize, AffineIsometry)> = Vec::new();
    for len in 1..=max_len {
        if len == 1 {
            layer = (0..3).map(|i| (i, gens[i])).collect();
        } else {
            let mut next = Vec::with_capacity(layer.len() * 2);
            for (last, g) in &layer {
                for i in 0..3 {
                    if i != *last {
                        next.push((i, g.compose(&gens[i])));
                    }
                }
            }
            layer = next;
        }
        out.extend(layer.iter().map(|(_, g)| *g));
    }
    out
}

/// Reduced words of length ≤ `max_len` in two generators and their
/// inverses (no adjacent inverse pairs), composed directly.
pub fn free_group_words(gens: &[AffineIsometry; 2], max_len: usize) -> Vec<AffineIsometry> {
    let letters = [
        gens[0],
        gens[0].inverse(),
        gens[1],
        gens[1].inverse(),
    ];
    let inverse_of = |k: usize| k ^ 1;
    let mut out: Vec<AffineIsometry> = Vec::new();
    let mut layer: Vec<(usize, AffineIsometry)> = Vec::new();
    for len in 1..=max_len {
        if len == 1 {
            layer = (0..4).map(|k| (k, letters[k])).collect();
        } else {
            let mut next = Vec::with_capacity(layer.len() * 3);
            for (last, g) in &layer {
                for k in 0..4 {
                    if k != inverse_of(*last) {
                        next.push((k, g.compose(&letters[k])));
                    }
                }
            }
            layer = next;
        }
        out.extend(layer.iter().map(|(_, g)| *g));
    }
    out
}

/// Sample the open domain bounded by `faces` and verify that every word
/// image of every sample leaves the open domain. Sampling is reproducible
/// from the seed; points and their images within `1e−7`·scale of a face
/// are not counted.
pub fn verify_fundamental_domain(
    faces: &[CrookedHalfspace],
    words: &[AffineIsometry],
    samples: usize,
    seed: u64,
) -> DomainReport {
    let mut scale = 1.0f64;
    let mut center = LorentzVector::ZERO;
    for f in faces {
        scale = scale.max(f.vertex.coords.euclidean_norm());
        center = center + f.vertex.coords;
    }
    center = center * (1.0 / faces.len() as f64);
    let slack = 1e-7 * scale;
    let radius = 3.0 + 3.0 * scale;
    let in_open_domain = |p: Point, margin: f64| -> bool {
        faces
            .iter()
            .all(|f| !f.contains_with_slack(p, Strictness::Closed, margin))
    };
    let mut rng = Counter::new(seed, 0);
    let mut accepted = 0usize;
    let mut violations = 0usize;
    let mut attempts = 0usize;
    while accepted < samples && attempts < samples * 200 {
        attempts += 1;
        let p = Point::new(crate::lorentz::vec3(
            center.x + rng.range(-radius, radius),
            center.y + rng.range(-radius, radius),
            center.z + rng.range(-radius, radius),
        ));
        // Robustly interior: stay clear even if the faces grow by slack.
        if !in_open_domain(p, slack) {
            continue;
        }
        accepted += 1;
        for w in words {
            let q = w.apply(p);
            // A confident violation: the image stays robustly interior.
            if in_open_domain(q, slack) {
                violations += 1;
            }
        }
    }
    DomainReport {
        samples: accepted,
        words: words.len(),
        violations,
    }
}

/// Convenience bundle: the full pipeline at a node for a coefficient vector.
pub struct DeformedDomain {
    pub geometry: NodeGeometry,
    pub coxeter: AffineCoxeter,
    pub domain: CrookedIdealTriangle,
}

pub fn deformed_domain(
    rep: &FuchsianRep,
    words: &BasicTriple,
    choice: FixedPointChoice,
    u: &VertexCoefficients,
) -> Result<DeformedDomain> {
    let geometry = node_geometry(rep, words, choice)?;
    let coxeter = affine_coxeter(&geometry.ext, &geometry.ftri, u)?;
    let domain = coxeter.domain(&geometry.ftri)?;
    Ok(DeformedDomain {
        geometry,
        coxeter,
        domain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crooked::{analyze_cit, cit_disjointness_check};
    use crate::lorentz::vec3;

    fn modular() -> FuchsianRep {
        FuchsianRep::from_traces(3.0, 3.0, 3.0).unwrap()
    }

    fn modular_geometry() -> (FuchsianRep, NodeGeometry) {
        let rep = modular();
        let geom = node_geometry(&rep, &BasicTriple::base(), FixedPointChoice::Plus).unwrap();
        (rep, geom)
    }

    fn random_coefficients(rng: &mut Counter) -> VertexCoefficients {
        let mut u = [[0.0; 2]; 3];
        for row in u.iter_mut() {
            row[0] = rng.range(0.1, 10.0);
            row[1] = rng.range(0.1, 10.0);
        }
        u
    }

    #[test]
    fn margulis_invariant_basics() {
        let rep = modular();
        // Zero translation: fixes a point, α = 0.
        let g = AffineIsometry::new(*rep.a(), LorentzVector::ZERO);
        assert_eq!(margulis_invariant(&g).unwrap().alpha, 0.0);
        // Inversion invariance and |n|-homogeneity on powers.
        let mut rng = Counter::new(9, 0);
        for _ in 0..100 {
            let v = vec3(rng.range(-2.0, 2.0), rng.range(-2.0, 2.0), rng.range(-2.0, 2.0));
            let g = AffineIsometry::new(*rep.a(), v);
            let alpha = margulis_invariant(&g).unwrap().alpha;
            let alpha_inv = margulis_invariant(&g.inverse()).unwrap().alpha;
            assert!((alpha - alpha_inv).abs() < 1e-9);
            let mut power = AffineIsometry::IDENTITY;
            for n in 1..=3 {
                power = power.compose(&g);
                let a_n = margulis_invariant(&power).unwrap().alpha;
                assert!((a_n - n as f64 * alpha).abs() < 1e-9 * (1.0 + alpha.abs()));
                let a_neg = margulis_invariant(&power.inverse()).unwrap().alpha;
                assert!((a_neg - n as f64 * alpha).abs() < 1e-9 * (1.0 + alpha.abs()));
            }
        }
    }

    #[test]
    fn margulis_invariant_is_origin_independent() {
        let rep = modular();
        let g = AffineIsometry::new(*rep.b(), vec3(0.7, -0.3, 0.4));
        let neutral = neutral_vector(&g.linear).unwrap().vector;
        let reference = margulis_invariant(&g).unwrap().alpha;
        let mut rng = Counter::new(10, 0);
        for _ in 0..10 {
            let origin = Point::new(vec3(
                rng.range(-5.0, 5.0),
                rng.range(-5.0, 5.0),
                rng.range(-5.0, 5.0),
            ));
            let alpha = neutral.dot(g.translation_at(origin));
            assert!((alpha - reference).abs() < 1e-9);
        }
    }

    #[test]
    fn cocycle_identity_holds() {
        let rep = modular();
        let u = Cocycle {
            ua: vec3(0.3, 0.1, -0.2),
            ub: vec3(-0.4, 0.5, 0.1),
        };
        assert!(
            evaluate_cocycle(&rep, &u, &F2Word::empty())
                .max_abs_diff(&AffineIsometry::IDENTITY)
                < 1e-12
        );
        let words = ["ab", "aB", "bA", "abA", "Bab", "aabB"];
        for w1 in words {
            for w2 in words {
                let g = F2Word::parse(w1).unwrap();
                let h = F2Word::parse(w2).unwrap();
                let lhs = evaluate_cocycle(&rep, &u, &g.concat(&h));
                let rhs = evaluate_cocycle(&rep, &u, &g).compose(&evaluate_cocycle(&rep, &u, &h));
                assert!(lhs.max_abs_diff(&rhs) < 1e-9);
            }
        }
    }

    #[test]
    fn coboundaries_have_vanishing_alpha() {
        let rep = modular();
        let base = BasicTriple::base();
        let mut rng = Counter::new(13, 0);
        for _ in 0..20 {
            let v = vec3(rng.range(-3.0, 3.0), rng.range(-3.0, 3.0), rng.range(-3.0, 3.0));
            let u = Cocycle::coboundary(&rep, v);
            let alphas = alpha_coordinates(&rep, &u, &base).unwrap();
            for a in alphas {
                assert!(a.abs() < 1e-9, "coboundary alpha {a}");
            }
            // Also on a longer hyperbolic word.
            let w = F2Word::parse("aab").unwrap();
            let alpha = margulis_invariant(&evaluate_cocycle(&rep, &u, &w))
                .unwrap()
                .alpha;
            assert!(alpha.abs() < 1e-8);
        }
    }

    #[test]
    fn alpha_coordinates_are_linear() {
        let rep = modular();
        let base = BasicTriple::base();
        let u1 = Cocycle {
            ua: vec3(0.2, -0.7, 0.4),
            ub: vec3(0.9, 0.3, -0.5),
        };
        let u2 = Cocycle {
            ua: vec3(-1.2, 0.5, 0.8),
            ub: vec3(0.1, -0.6, 0.2),
        };
        let a1 = alpha_coordinates(&rep, &u1, &base).unwrap();
        let a2 = alpha_coordinates(&rep, &u2, &base).unwrap();
        let sum = alpha_coordinates(&rep, &u1.add(&u2), &base).unwrap();
        for k in 0..3 {
            assert!((sum[k] - a1[k] - a2[k]).abs() < 1e-9);
        }
        let zero = alpha_coordinates(&rep, &Cocycle::ZERO, &base).unwrap();
        assert_eq!(zero, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn cocycle_from_alpha_round_trip() {
        let rep = modular();
        let base = BasicTriple::base();
        let system = AlphaSystem::new(&rep, &base).unwrap();
        assert!(system.condition.is_finite() && system.condition >= 1.0);
        // Zero target gives the zero cocycle (minimum norm).
        let z = system.solve([0.0, 0.0, 0.0]);
        assert_eq!(z, Cocycle::ZERO);
        let mut rng = Counter::new(14, 0);
        for _ in 0..100 {
            let target = [
                rng.range(-5.0, 5.0),
                rng.range(-5.0, 5.0),
                rng.range(-5.0, 5.0),
            ];
            let u = system.solve(target);
            let back = alpha_coordinates(&rep, &u, &base).unwrap();
            for k in 0..3 {
                assert!((back[k] - target[k]).abs() < 1e-8, "round trip failed");
            }
            // Positive scaling of the target scales the cocycle.
            let u2 = system.solve([2.0 * target[0], 2.0 * target[1], 2.0 * target[2]]);
            assert!((u2.ua - u.ua * 2.0).euclidean_norm() < 1e-8);
            assert!((u2.ub - u.ub * 2.0).euclidean_norm() < 1e-8);
        }
    }

    #[test]
    fn affine_coxeter_relations() {
        let (_rep, geom) = modular_geometry();
        let mut rng = Counter::new(15, 0);
        for trial in 0..20 {
            let u = if trial == 0 {
                [[0.0; 2]; 3]
            } else {
                random_coefficients(&mut rng)
            };
            let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
            // Involutions square to the identity.
            for iota in &ac.involutions {
                assert!(
                    iota.compose(iota).max_abs_diff(&AffineIsometry::IDENTITY) < 1e-8,
                    "involution defect"
                );
            }
            // Defining relation ρ(A)ρ(B)ρ(C) = id.
            let product = ac.boosts[0].compose(&ac.boosts[1]).compose(&ac.boosts[2]);
            assert!(product.max_abs_diff(&AffineIsometry::IDENTITY) < 1e-8);
            if trial == 0 {
                // All-zero coefficients: pure linear representation.
                let alphas =
                    alpha_via_lemma(&ac.offsets, &triple_neutrals(&geom.ext).unwrap());
                for a in alphas {
                    assert!(a.abs() < 1e-12);
                }
                assert!(ac.cocycle.ua.euclidean_norm() < 1e-12);
            }
        }
    }

    #[test]
    fn three_way_alpha_agreement() {
        let (rep, geom) = modular_geometry();
        let neutrals = triple_neutrals(&geom.ext).unwrap();
        let ms = corner_matrices(&geom.ext, &geom.ftri).unwrap();
        let mut rng = Counter::new(16, 0);
        for _ in 0..500 {
            let u = random_coefficients(&mut rng);
            let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
            // Route 1: the defining formula on the boosts.
            let direct = [
                margulis_invariant(&ac.boosts[0]).unwrap().alpha,
                margulis_invariant(&ac.boosts[1]).unwrap().alpha,
                margulis_invariant(&ac.boosts[2]).unwrap().alpha,
            ];
            // Route 2: the offset formula.
            let lemma = alpha_via_lemma(&ac.offsets, &neutrals);
            // Route 3: the corner matrices.
            let mut terms = [0.0; 3];
            for (k, m) in ms.iter().enumerate() {
                let idx = [1, 2, 0][k]; // (M_1, M_2, M_0) order
                let contrib = m.apply(u[idx]);
                for r in 0..3 {
                    terms[r] += 2.0 * contrib[r];
                }
            }
            for r in 0..3 {
                assert!(
                    (direct[r] - lemma[r]).abs() < 1e-8,
                    "direct vs lemma row {r}: {} vs {}",
                    direct[r],
                    lemma[r]
                );
                assert!(
                    (direct[r] - terms[r]).abs() < 1e-8,
                    "direct vs matrices row {r}: {} vs {}",
                    direct[r],
                    terms[r]
                );
            }
            // And the cocycle route agrees with the boost route.
            let coords = alpha_coordinates(&rep, &ac.cocycle, &BasicTriple::base()).unwrap();
            for r in 0..3 {
                assert!((coords[r] - direct[r]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn lemma_is_translation_invariant() {
        let (_rep, geom) = modular_geometry();
        let neutrals = triple_neutrals(&geom.ext).unwrap();
        let q = [
            vec3(0.1, 0.2, 0.3),
            vec3(-0.4, 0.0, 0.6),
            vec3(0.2, -0.9, 0.1),
        ];
        let shift = vec3(5.0, -3.0, 2.0);
        let shifted = [q[0] + shift, q[1] + shift, q[2] + shift];
        let a1 = alpha_via_lemma(&q, &neutrals);
        let a2 = alpha_via_lemma(&shifted, &neutrals);
        for k in 0..3 {
            assert!((a1[k] - a2[k]).abs() < 1e-12);
        }
        let zero = alpha_via_lemma(&[LorentzVector::ZERO; 3], &neutrals);
        assert_eq!(zero, [0.0, 0.0, 0.0]);
    }

    #[test]
    fn corner_matrices_are_rank_one() {
        let (_rep, geom) = modular_geometry();
        let ms = corner_matrices(&geom.ext, &geom.ftri).unwrap();
        // M_1's α(A)-row is zero by construction; the substance is the
        // rank-one property of the nonzero 2×2 block.
        assert_eq!(ms[0].m[0], [0.0, 0.0]);
        assert_eq!(ms[0].zero_row(), Some(0));
        assert_eq!(ms[1].zero_row(), Some(1));
        assert_eq!(ms[2].zero_row(), Some(2));
        for m in &ms {
            let (s1, s2) = m.singular_values();
            assert!(s1 > 0.0);
            assert!(s2 / s1 < 1e-8, "not rank one: {s2} / {s1}");
            // Columns are nonnegatively proportional: the open quadrant
            // maps to a single ray.
            let c1 = [m.m[0][0], m.m[1][0], m.m[2][0]];
            let c2 = [m.m[0][1], m.m[1][1], m.m[2][1]];
            let dot: f64 = (0..3).map(|k| c1[k] * c2[k]).sum();
            assert!(dot >= 0.0);
            let img1 = m.apply([1.0, 1.0]);
            let img2 = m.apply([2.0, 3.0]);
            let n1: f64 = img1.iter().map(|v| v * v).sum::<f64>().sqrt();
            let n2: f64 = img2.iter().map(|v| v * v).sum::<f64>().sqrt();
            let cos: f64 = (0..3).map(|k| img1[k] * img2[k]).sum::<f64>() / (n1 * n2);
            assert!(cos > 1.0 - 1e-8, "image not a ray");
        }
    }

    #[test]
    fn base_tile_corners_in_positive_octant() {
        let rep = modular();
        let atlas = enumerate_tiles(&rep, 0, FixedPointChoice::Plus).unwrap();
        assert_eq!(atlas.tiles.len(), 1);
        let tile = &atlas.tiles[0];
        for (i, c) in tile.corners.iter().enumerate() {
            assert!(c[i].abs() < 1e-8, "corner {i} must kill α of slot {i}");
            for v in c {
                assert!(*v > -1e-9, "corner outside the closed positive octant");
            }
        }
    }

    #[test]
    fn atlas_counts_and_hexagon() {
        let rep = modular();
        let atlas = enumerate_tiles(&rep, 1, FixedPointChoice::Plus).unwrap();
        assert_eq!(atlas.tiles.len(), 4);
        assert_eq!(atlas.chart_polygon.len(), 6, "depth-1 tame region is a hexagon");
        assert!(polygon_is_convex(&atlas.chart_polygon, 1e-9));
        let atlas3 = enumerate_tiles(&rep, 3, FixedPointChoice::Plus).unwrap();
        assert_eq!(atlas3.tiles.len(), 22);
        assert_eq!(atlas3.chart_polygon.len(), 24);
    }

    #[test]
    fn shared_edges_between_neighbors() {
        let rep = modular();
        let atlas = enumerate_tiles(&rep, 4, FixedPointChoice::Plus).unwrap();
        for (idx, node) in atlas.nodes.iter().enumerate() {
            let Some(parent) = node.parent else { continue };
            let child_tile = &atlas.tiles[idx];
            let parent_tile = &atlas.tiles[parent];
            let mut shared = 0;
            for c in &child_tile.corners {
                for p in &parent_tile.corners {
                    let dot: f64 = (0..3).map(|k| c[k] * p[k]).sum();
                    if dot > 1.0 - 1e-8 {
                        shared += 1;
                    }
                }
            }
            assert_eq!(shared, 2, "tree neighbors must share one edge (two rays)");
        }
    }

    #[test]
    fn tile_membership_classification() {
        let rep = modular();
        let atlas = enumerate_tiles(&rep, 0, FixedPointChoice::Plus).unwrap();
        let tile = &atlas.tiles[0];
        let c = &tile.corners;
        let mid = [
            c[0][0] + c[1][0] + c[2][0],
            c[0][1] + c[1][1] + c[2][1],
            c[0][2] + c[1][2] + c[2][2],
        ];
        assert_eq!(tile_contains(tile, &mid).unwrap(), TileLocation::Interior);
        assert_eq!(
            tile_contains(tile, &c[0]).unwrap(),
            TileLocation::Corner(0)
        );
        let neg = [-c[0][0], -c[0][1], -c[0][2]];
        assert_eq!(tile_contains(tile, &neg).unwrap(), TileLocation::Outside);
        let edge = [
            c[0][0] + c[1][0],
            c[0][1] + c[1][1],
            c[0][2] + c[1][2],
        ];
        assert_eq!(tile_contains(tile, &edge).unwrap(), TileLocation::Edge(2));
    }

    #[test]
    fn flip_covector_identity_on_shallow_edges() {
        for traces in [(3.0, 3.0, 3.0), (4.0, 4.0, 4.0)] {
            let rep = FuchsianRep::from_traces(traces.0, traces.1, traces.2).unwrap();
            let atlas = enumerate_tiles(&rep, 2, FixedPointChoice::Plus).unwrap();
            for idx in 1..atlas.nodes.len() {
                let fc = flip_covector_identity(&rep, &atlas, idx).unwrap();
                assert!(fc.a > 0.0 && fc.b > 0.0 && fc.c > 0.0, "coefficients must be positive");
                assert!(fc.residual < 1e-7, "residual {} at node {idx}", fc.residual);
            }
        }
        // Symmetric triple: a = b on the first flip off the root.
        let rep = FuchsianRep::from_traces(3.0, 3.0, 3.0).unwrap();
        let atlas = enumerate_tiles(&rep, 1, FixedPointChoice::Plus).unwrap();
        for idx in 1..4 {
            if atlas.nodes[idx].slot == 2 {
                let fc = flip_covector_identity(&rep, &atlas, idx).unwrap();
                assert!((fc.a - fc.b).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn atlas_tiles_are_pairwise_disjoint_depth_three() {
        let rep = modular();
        let atlas = enumerate_tiles(&rep, 3, FixedPointChoice::Plus).unwrap();
        let report = tiles_disjoint(&atlas);
        assert_eq!(report.pairs_checked, 22 * 21 / 2);
        assert!(
            report.violations.is_empty(),
            "violating pairs: {:?}",
            report.violations
        );
    }

    #[test]
    fn edge_quadrilateral_structure() {
        let (_rep, geom) = modular_geometry();
        let eq = edge_quadrilateral(&geom.ext, &geom.ftri, [1.0, 1.5], [0.8, 1.2]).unwrap();
        // (u⁺_1, u⁻_1) = (1.0, 1.5), (u⁺_2, u⁻_2) = (0.8, 1.2).
        assert!(eq.disjoint.iter().all(|&d| d), "faces must be pairwise disjoint: {:?}", eq.disjoint);
        // Hinge incidences: the stem of CP_2 meets R·n in the past-pointing
        // ray (−u⁻_2 − R⁺)n, the stem of CP_1 meets R·ι0n in the
        // future-pointing ray (u⁺_1 + R⁺)ι0n.
        let n = geom.ftri.n;
        let i0n = geom.ftri.iota0_n;
        let stem_member = |face: &CrookedHalfspace, x: LorentzVector| -> (f64, f64) {
            let v = x - face.vertex.coords;
            (v.dot(face.frame.s), v.norm2())
        };
        // Boundary roots.
        let (u1p, u2m) = (1.0, 1.2);
        let (plane, quad) = stem_member(&eq.faces[1], n * (-u2m));
        assert!(plane.abs() < 1e-8 && quad.abs() < 1e-8, "CP2 root off the hinge");
        let (plane, quad) = stem_member(&eq.faces[0], i0n * u1p);
        assert!(plane.abs() < 1e-8 && quad.abs() < 1e-8, "CP1 root off the hinge");
        // Ray directions: beyond the root lies the stem, before it does not.
        for t in [0.5, 2.0, 10.0] {
            let (_, q_in) = stem_member(&eq.faces[1], n * (-u2m - t));
            let (_, q_out) = stem_member(&eq.faces[1], n * (-u2m + t));
            assert!(q_in < 0.0 && q_out > 0.0, "CP2 stem ray direction");
            let (_, q_in) = stem_member(&eq.faces[0], i0n * (u1p + t));
            let (_, q_out) = stem_member(&eq.faces[0], i0n * (u1p - t));
            assert!(q_in < 0.0 && q_out > 0.0, "CP1 stem ray direction");
        }
        // Degenerate input rejected; vanishing u⁺_1 breaks disjointness.
        assert!(edge_quadrilateral(&geom.ext, &geom.ftri, [0.0, 1.0], [1.0, 1.0]).is_err());
    }

    #[test]
    fn edge_quadrilateral_all_slots() {
        // The degenerate face may sit at any vertex; the construction is
        // the slot-0 case transported by the cyclic relabeling.
        let (_rep, geom) = modular_geometry();
        for slot in 0..3 {
            let eq = edge_quadrilateral_at(&geom.ext, &geom.ftri, slot, [0.9, 1.4], [1.1, 0.7])
                .unwrap();
            assert!(
                eq.disjoint.iter().all(|&d| d),
                "slot {slot}: faces not pairwise disjoint: {:?}",
                eq.disjoint
            );
            // The reflection fixes the shared vertex (the origin).
            let o = Point::ORIGIN;
            assert!((eq.reflection.apply(o) - o).euclidean_norm() < 1e-12);
        }
        assert!(edge_quadrilateral_at(&geom.ext, &geom.ftri, 3, [1.0, 1.0], [1.0, 1.0]).is_err());
    }

    #[test]
    fn edge_quadrilateral_is_a_fundamental_domain_for_the_free_group() {
        // On an edge the group element words are taken in the a, b
        // generators: the quadrilateral tiles under the rank two free
        // group rather than the full involution group.
        let rep = modular();
        let geom = node_geometry(&rep, &BasicTriple::base(), FixedPointChoice::Plus).unwrap();
        let eq = edge_quadrilateral(&geom.ext, &geom.ftri, [1.0, 1.2], [0.8, 1.0]).unwrap();
        // ρ(A), ρ(B) of the affine Coxeter group at the edge coefficients.
        let gens = [eq.coxeter.boosts[0], eq.coxeter.boosts[1]];
        let words = free_group_words_lifted(
            &[geom.ext.a_sl2, geom.ext.b_sl2],
            &gens,
            3,
        )
        .unwrap();
        let direct = free_group_words(&gens, 3);
        for (w, d) in words.iter().zip(direct.iter()) {
            assert!(w.max_abs_diff(d) < 1e-6);
        }
        assert_eq!(words.len(), 4 + 12 + 36);
        let report = verify_fundamental_domain(&eq.faces, &words, 2000, 99);
        assert_eq!(report.samples, 2000);
        assert_eq!(report.violations, 0, "quadrilateral domain violated");
    }

    #[test]
    fn asymmetric_fixture_pipeline() {
        // An asymmetric convex-cocompact fixture exercises every branch
        // away from the symmetric cusped case.
        let rep = FuchsianRep::from_traces(2.2, 9.0, 10.0).unwrap();
        let atlas = enumerate_tiles(&rep, 4, FixedPointChoice::Plus).unwrap();
        assert_eq!(atlas.tiles.len(), 46);
        assert_eq!(atlas.chart_polygon.len(), 48);
        assert!(polygon_is_convex(&atlas.chart_polygon, 1e-9));
        assert!(tiles_disjoint(&atlas).violations.is_empty());
        let geom = node_geometry(&rep, &BasicTriple::base(), FixedPointChoice::Plus).unwrap();
        let u = [[0.5, 2.0], [1.5, 0.3], [0.9, 1.1]];
        let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
        let domain = ac.domain(&geom.ftri).unwrap();
        assert!(cit_disjointness_check(&domain).all_disjoint);
        let words = involution_words_lifted(&geom.ext, &ac.involutions, 3).unwrap();
        let report = verify_fundamental_domain(&domain.halfspaces(), &words, 2000, 5);
        assert_eq!(report.violations, 0);
        // Minus choice drives the other fixed ray end to end.
        let geom = node_geometry(&rep, &BasicTriple::base(), FixedPointChoice::Minus).unwrap();
        let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
        let domain = ac.domain(&geom.ftri).unwrap();
        assert!(cit_disjointness_check(&domain).all_disjoint);
    }

    #[test]
    fn fundamental_domain_sampling_base_tile() {
        let rep = modular();
        let geom = node_geometry(&rep, &BasicTriple::base(), FixedPointChoice::Plus).unwrap();
        let u = [[1.0, 1.0], [1.0, 1.0], [1.0, 1.0]];
        let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
        let domain = ac.domain(&geom.ftri).unwrap();
        assert!(cit_disjointness_check(&domain).all_disjoint);
        let words = involution_words_lifted(&geom.ext, &ac.involutions, 3).unwrap();
        assert_eq!(words.len(), 3 + 6 + 12);
        // The direct composition agrees with the lifted one at this scale.
        let direct = involution_words(&ac.involutions, 3);
        for (w, d) in words.iter().zip(direct.iter()) {
            assert!(w.max_abs_diff(d) < 1e-6);
        }
        let report = verify_fundamental_domain(&domain.halfspaces(), &words, 2000, 42);
        assert_eq!(report.violations, 0);
        assert_eq!(report.samples, 2000);
    }

    #[test]
    fn realized_deformations_land_in_their_tile() {
        // Geometry → coefficients → invariants → membership closes the
        // loop: the direct invariants of a random positive-coefficient
        // deformation at a node decompose on the node's corner rays with
        // positive weights, i.e. the direction is interior to its tile.
        // (At the base node this is also checked in base coordinates.)
        let rep = modular();
        let atlas = enumerate_tiles(&rep, 2, FixedPointChoice::Plus).unwrap();
        let base_system = AlphaSystem::new(&rep, &BasicTriple::base()).unwrap();
        let mut rng = Counter::new(21, 0);
        for tile in &atlas.tiles {
            let node = &atlas.nodes[tile.node];
            let geom = node_geometry(&rep, &node.words, FixedPointChoice::Plus).unwrap();
            let u = random_coefficients(&mut rng);
            let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
            let alphas = [
                margulis_invariant(&ac.boosts[0]).unwrap().alpha,
                margulis_invariant(&ac.boosts[1]).unwrap().alpha,
                margulis_invariant(&ac.boosts[2]).unwrap().alpha,
            ];
            // Decompose ½α on the slot corner targets.
            let ms = corner_matrices(&geom.ext, &geom.ftri).unwrap();
            let mut cols = [[0.0f64; 3]; 3];
            for m in &ms {
                let slot = m.zero_row().unwrap();
                cols[slot] = m.apply([1.0, 1.0]);
            }
            let matrix = [
                [cols[0][0], cols[1][0], cols[2][0]],
                [cols[0][1], cols[1][1], cols[2][1]],
                [cols[0][2], cols[1][2], cols[2][2]],
            ];
            let inv = invert3(&matrix).unwrap();
            for r in 0..3 {
                let mu: f64 = (0..3).map(|j| inv[r][j] * alphas[j] / 2.0).sum();
                assert!(
                    mu > 0.0,
                    "node {}: nonpositive corner weight {mu}",
                    node.triple
                );
            }
            if node.parent.is_none() {
                let coords = base_system.apply(&ac.cocycle);
                assert_eq!(
                    tile_contains(tile, &coords).unwrap(),
                    TileLocation::Interior
                );
            }
        }
    }

    #[test]
    fn opposite_sign_direction_misses_all_tiles() {
        let rep = modular();
        let base = BasicTriple::base();
        let u = cocycle_from_alpha(&rep, &base, [1.0, -0.6, 0.4]).unwrap();
        let coords = alpha_coordinates(&rep, &u, &base).unwrap();
        assert!(coords[0] > 0.0 && coords[1] < 0.0);
        let atlas = enumerate_tiles(&rep, 4, FixedPointChoice::Plus).unwrap();
        for tile in &atlas.tiles {
            assert_eq!(
                tile_contains(tile, &coords).unwrap(),
                TileLocation::Outside
            );
        }
    }

    #[test]
    fn analyze_recovers_positive_coefficients() {
        // The vertex triple of an affine Coxeter group with positive
        // coefficients realizes a nondegenerate crooked ideal triangle.
        let (_rep, geom) = modular_geometry();
        let mut rng = Counter::new(77, 0);
        for _ in 0..20 {
            let u = random_coefficients(&mut rng);
            let ac = affine_coxeter(&geom.ext, &geom.ftri, &u).unwrap();
            let domain = ac.domain(&geom.ftri).unwrap();
            let an = analyze_cit(&domain).unwrap();
            assert!(an.nondegenerate, "positive coefficients must be nondegenerate");
            assert!((an.center - Point::ORIGIN).euclidean_norm() < 1e-8);
        }
    }
}
