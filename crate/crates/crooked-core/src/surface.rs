//! Hyperbolic one-holed torus groups.
//!
//! A representation is built from a trace triple `(x, y, z)` in the Fricke
//! chart, extended by three point involutions `ι0, ι1, ι2` with
//! `A = ι2 ι0`, `B = ι0 ι1`, `C = ι1 ι2`, and realized geometrically by a
//! pointed ideal triangle whose sides pass through the involution fixed
//! points. Doubling the triangle across `ι0` gives the fundamental ideal
//! quadrilateral of the surface group.

use crate::farey::F2Word;
use crate::hyperbolic::{
    from_sl2, sl2_fixed_null_rays, sl2_traceless_ray, Halfplane, IdealPoint, IdealTriangle,
    IsometryClass, Mat2, Sl2Fixed,
};
use crate::lorentz::{cross, linear_involution_unit_timelike, Isometry, LorentzVector};
use crate::{flt, GeomError, Result};

/// Fuchsian representation of the rank two free group with hyperbolic
/// generators, carried both as 2×2 unimodular matrices and as their
/// adjoint isometries.
#[derive(Clone, Debug)]
pub struct FuchsianRep {
    a_mat: Mat2,
    b_mat: Mat2,
    rho_a: Isometry,
    rho_b: Isometry,
    rho_c: Isometry,
    rho_k: Isometry,
    traces: (f64, f64, f64),
}

impl FuchsianRep {
    /// Representation in the normalized gauge `a = diag(λ, 1/λ)` with
    /// `λ + 1/λ = x` and `b` completed from `tr b = y`, `tr(ab) = z`,
    /// upper-right entry 1.
    ///
    /// Requires `x, y, z > 2` and `x² + y² + z² − xyz ≤ 0`, so that the
    /// commutator trace `x² + y² + z² − xyz − 2` is at most −2.
    pub fn from_traces(x: f64, y: f64, z: f64) -> Result<FuchsianRep> {
        if !(x > 2.0 && y > 2.0 && z > 2.0) {
            return Err(GeomError::InadmissibleTraces);
        }
        if x * x + y * y + z * z - x * y * z > 1e-12 {
            return Err(GeomError::InadmissibleTraces);
        }
        let lambda = (x + flt::sqrt(x * x - 4.0)) / 2.0;
        let a = Mat2::new(lambda, 0.0, 0.0, 1.0 / lambda);
        // tr b = y and tr(ab) = z pin the diagonal of b.
        let b11 = (z - y / lambda) / (lambda - 1.0 / lambda);
        let b22 = y - b11;
        let b21 = b11 * b22 - 1.0;
        if flt::abs(b21) < 1e-12 {
            return Err(GeomError::Degenerate("reducible pair"));
        }
        let b = Mat2::new(b11, 1.0, b21, b22);
        let rep = FuchsianRep::from_matrices(a, b)?;
        let (tx, ty, tz) = rep.traces;
        if flt::abs(tx - x) > 1e-9 || flt::abs(ty - y) > 1e-9 || flt::abs(tz - z) > 1e-9 {
            return Err(GeomError::Degenerate("trace reconstruction"));
        }
        Ok(rep)
    }

    /// Wrap an explicit unimodular pair whose basic triple is hyperbolic.
    pub fn from_matrices(a: Mat2, b: Mat2) -> Result<FuchsianRep> {
        if flt::abs(a.det() - 1.0) > 1e-9 || flt::abs(b.det() - 1.0) > 1e-9 {
            return Err(GeomError::NotIsometry);
        }
        let ab = a.mul(&b);
        let c = ab.inverse_unimodular();
        let k = ab.mul(&a.inverse_unimodular()).mul(&b.inverse_unimodular());
        let rho_a = from_sl2(&a)?;
        let rho_b = from_sl2(&b)?;
        let rho_c = from_sl2(&c)?;
        let rho_k = from_sl2(&k)?;
        for m in [&rho_a, &rho_b, &rho_c] {
            if m.class() != IsometryClass::Hyperbolic {
                return Err(GeomError::WrongIsometryClass);
            }
        }
        if k.trace() > -2.0 + 1e-9 {
            return Err(GeomError::InadmissibleTraces);
        }
        Ok(FuchsianRep {
            a_mat: a,
            b_mat: b,
            rho_a,
            rho_b,
            rho_c,
            rho_k,
            traces: (a.trace(), b.trace(), ab.trace()),
        })
    }

    #[inline]
    pub fn traces(&self) -> (f64, f64, f64) {
        self.traces
    }

    #[inline]
    pub fn a(&self) -> &Isometry {
        &self.rho_a
    }

    #[inline]
    pub fn b(&self) -> &Isometry {
        &self.rho_b
    }

    #[inline]
    pub fn c(&self) -> &Isometry {
        &self.rho_c
    }

    #[inline]
    pub fn k(&self) -> &Isometry {
        &self.rho_k
    }

    #[inline]
    pub fn a_mat(&self) -> &Mat2 {
        &self.a_mat
    }

    #[inline]
    pub fn b_mat(&self) -> &Mat2 {
        &self.b_mat
    }

    /// Homomorphic evaluation of a word, `a ↦ ρ(A)`, `b ↦ ρ(B)`.
    pub fn evaluate(&self, w: &F2Word) -> Isometry {
        let gens = [&self.rho_a, &self.rho_b];
        let mut out = Isometry::IDENTITY;
        for (g, inv) in w.letters() {
            let m = if inv { gens[g].inverse() } else { *gens[g] };
            out = out.compose(&m);
        }
        out
    }

    /// Word evaluation at the 2×2 level.
    pub fn evaluate_sl2(&self, w: &F2Word) -> Mat2 {
        let gens = [&self.a_mat, &self.b_mat];
        let mut out = Mat2::IDENTITY;
        for (g, inv) in w.letters() {
            let m = if inv {
                gens[g].inverse_unimodular()
            } else {
                *gens[g]
            };
            out = out.mul(&m);
        }
        out
    }
}

/// Coxeter extension data: the three point involutions, their fixed
/// future unit-timelike vectors, the basic triple they compose to, and
/// the (well-conditioned) 2×2 lifts it was built from.
#[derive(Clone, Debug)]
pub struct CoxeterExtension {
    pub iota: [Isometry; 3],
    pub t: [LorentzVector; 3],
    pub a: Isometry,
    pub b: Isometry,
    pub c: Isometry,
    /// Unit spacelike neutral vectors of `(A, B, C)`, sign-fixed.
    pub neutrals: [LorentzVector; 3],
    pub a_sl2: Mat2,
    pub b_sl2: Mat2,
    pub c_sl2: Mat2,
    /// Trace-zero 2×2 lifts of the involutions.
    pub iota_sl2: [Mat2; 3],
}

/// Extend a hyperbolic basic pair by involutions: `t_0` spans
/// `Axis(A) ∩ Axis(B)`, `ι0` is the point symmetry there, `ι1 = ι0 B`,
/// `ι2 = A ι0`, and the other fixed points are the remaining pairwise
/// axis intersections.
///
/// All axis and fixed-point data is extracted at the 2×2 level (traceless
/// parts), where long word products keep far more significant digits than
/// their adjoints.
pub fn coxeter_extension(a_sl2: &Mat2, b_sl2: &Mat2) -> Result<CoxeterExtension> {
    let c_sl2 = a_sl2.mul(b_sl2).inverse_unimodular();
    let a = from_sl2(a_sl2)?;
    let b = from_sl2(b_sl2)?;
    let c = from_sl2(&c_sl2)?;
    if a.class() != IsometryClass::Hyperbolic || b.class() != IsometryClass::Hyperbolic {
        return Err(GeomError::WrongIsometryClass);
    }
    let a0 = sl2_neutral(a_sl2)?;
    let b0 = sl2_neutral(b_sl2)?;
    let c0 = sl2_neutral(&c_sl2)?;
    // Trace-zero lifts ι̂0, ι̂1 = ι̂0 b, ι̂2 = a ι̂0. The fixed point of a
    // point symmetry is its own (traceless) coordinate vector, with the
    // Lorentzian norm −det exactly: intersecting the axes by a cross
    // product instead cancels catastrophically when they cross far away.
    let iota0_sl2 = sl2_coxeter_involution(a_sl2, b_sl2)?;
    let iota1_sl2 = iota0_sl2.mul(b_sl2);
    let iota2_sl2 = a_sl2.mul(&iota0_sl2);
    let t0 = sl2_fixed_point(&iota0_sl2)?;
    let t1 = sl2_fixed_point(&iota1_sl2)?;
    let t2 = sl2_fixed_point(&iota2_sl2)?;
    let iota0 = linear_involution_unit_timelike(t0);
    let iota1 = linear_involution_unit_timelike(t1);
    let iota2 = linear_involution_unit_timelike(t2);
    Ok(CoxeterExtension {
        iota: [iota0, iota1, iota2],
        t: [t0, t1, t2],
        a,
        b,
        c,
        neutrals: [a0, b0, c0],
        a_sl2: *a_sl2,
        b_sl2: *b_sl2,
        c_sl2,
        iota_sl2: [iota0_sl2, iota1_sl2, iota2_sl2],
    })
}

/// Trace-zero lift of the point symmetry inverting both generators of a
/// hyperbolic basic pair, computed in the diagonalizing gauge of `a`
/// (where it is `[[0, c], [−1/c, 0]]` with `c² = b₁₂/b₂₁`).
pub fn sl2_coxeter_involution(a: &Mat2, b: &Mat2) -> Result<Mat2> {
    let fixed = match crate::hyperbolic::sl2_fixed_null_rays(a, None)? {
        Sl2Fixed::Hyperbolic { .. } => crate::hyperbolic::sl2_eigenbasis(a)?,
        Sl2Fixed::Parabolic(_) => return Err(GeomError::WrongIsometryClass),
    };
    let g = fixed;
    let g_inv = g.inverse_unimodular();
    let bg = g_inv.mul(b).mul(&g);
    let ratio = bg.m[0][1] / bg.m[1][0];
    if !ratio.is_finite() || ratio <= 0.0 {
        return Err(GeomError::Degenerate("reducible pair"));
    }
    let c = flt::sqrt(ratio);
    let j = Mat2::new(0.0, c, -1.0 / c, 0.0);
    Ok(g.mul(&j).mul(&g_inv))
}

/// Fixed future unit-timelike vector of a trace-zero 2×2 element: its
/// own coordinates, normalized through `y·y = tr²/4 − det`, with the
/// compensated determinant tracking the drift of long products.
fn sl2_fixed_point(m: &Mat2) -> Result<LorentzVector> {
    let norm2 = m.trace() * m.trace() / 4.0 - m.det();
    if norm2 >= 0.0 {
        return Err(GeomError::NotUnitTimelike);
    }
    let y = sl2_traceless_ray(m) * (1.0 / flt::sqrt(-norm2));
    Ok(if y.z > 0.0 { y } else { -y })
}

/// Unit neutral vector of a hyperbolic 2×2 element, entirely from its own
/// entries: the ray is the traceless part, its Lorentzian norm is
/// `tr²/4 − 1` (exact by Cayley–Hamilton, immune to the cancellation that
/// hits the coordinate norm for far-conjugated elements), and the sign is
/// pinned against the cross product of the fixed null rays — the rule
/// `X⁰ ∝ cross(X⁺, X⁻)`, which agrees with the timelike-probe rule and
/// stays meaningful at any depth.
pub fn sl2_neutral(m: &Mat2) -> Result<LorentzVector> {
    let t = m.trace();
    let norm2 = t * t / 4.0 - m.det();
    if norm2 <= 0.0 {
        return Err(GeomError::WrongIsometryClass);
    }
    let ray = sl2_traceless_ray(m);
    let unit = ray * (1.0 / flt::sqrt(norm2));
    let (att, rep) = match sl2_fixed_null_rays(m, None)? {
        Sl2Fixed::Hyperbolic {
            attracting,
            repelling,
        } => (attracting, repelling),
        Sl2Fixed::Parabolic(_) => return Err(GeomError::WrongIsometryClass),
    };
    let orient = cross(att, rep).dot(ray);
    if orient == 0.0 {
        return Err(GeomError::Degenerate("neutral vector orientation"));
    }
    Ok(if orient > 0.0 { unit } else { -unit })
}


/// Which fixed null ray of `ι0 ι1 ι2` to use when it is hyperbolic.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixedPointChoice {
    /// Eigenvalue-maximal (attracting) ray — the default.
    Plus,
    /// Eigenvalue-minimal (repelling) ray.
    Minus,
}

/// The fixed point cycle `([n], ι2[n], ι1ι2[n], ι0ι1ι2[n] = [n])` of the
/// product `ι0 ι1 ι2`, together with the cusp rays of the fundamental
/// triangle it generates.
///
/// The cusps are extracted from 2×2 boundary words: `[n]` is fixed by
/// `ι0ι1ι2` whose square is `BAC = [B,A]`, and conjugating gives
/// `ι0[n] = Fix(CBA)`, `ι2[n] = Fix(ACB)`. Fixed points of 2×2 products
/// stay accurate at depths where the involution-matrix route has long
/// drowned in cancellation.
#[derive(Clone, Debug)]
pub struct FixedPointCycle {
    pub n: IdealPoint,
    pub cycle: [IdealPoint; 4],
    /// Whether the product was parabolic (so the choice was ignored).
    pub parabolic: bool,
    /// `ι0[n]`, z-normalized.
    pub iota0_n: IdealPoint,
    /// `ι2[n]`, z-normalized.
    pub iota2_n: IdealPoint,
}

pub fn fixed_point_cycle(
    ext: &CoxeterExtension,
    choice: FixedPointChoice,
) -> Result<FixedPointCycle> {
    fixed_point_cycle_inner(ext, choice, None)
}

/// As [`fixed_point_cycle`], but with the boundary trace magnitude pinned
/// to an exactly known value — it is a Fricke invariant of the whole
/// tiling, while the computed trace of a deep node's boundary word is
/// destroyed by cancellation long before its eigenvectors are.
pub fn fixed_point_cycle_with_boundary_trace(
    ext: &CoxeterExtension,
    choice: FixedPointChoice,
    k_trace: f64,
) -> Result<FixedPointCycle> {
    if k_trace > -2.0 + 1e-9 {
        return Err(GeomError::InadmissibleTraces);
    }
    fixed_point_cycle_inner(ext, choice, Some(flt::abs(k_trace)))
}

fn fixed_point_cycle_inner(
    ext: &CoxeterExtension,
    choice: FixedPointChoice,
    trace_magnitude: Option<f64>,
) -> Result<FixedPointCycle> {
    let pick = |m: &Mat2| -> Result<(LorentzVector, bool)> {
        Ok(match sl2_fixed_null_rays(m, trace_magnitude)? {
            Sl2Fixed::Parabolic(v) => (v, true),
            Sl2Fixed::Hyperbolic {
                attracting,
                repelling,
            } => match choice {
                FixedPointChoice::Plus => (attracting, false),
                FixedPointChoice::Minus => (repelling, false),
            },
        })
    };
    // (ι0ι1ι2)² = BAC; conjugation gives the other cusps, with the same
    // attracting/repelling selection by equivariance.
    let (n_ray, parabolic) = pick(&ext.b_sl2.mul(&ext.a_sl2).mul(&ext.c_sl2))?;
    let (i0n_ray, _) = pick(&ext.c_sl2.mul(&ext.b_sl2).mul(&ext.a_sl2))?;
    let (i2n_ray, _) = pick(&ext.a_sl2.mul(&ext.c_sl2).mul(&ext.b_sl2))?;
    let n = IdealPoint::from_null_ray(n_ray)?;
    let iota0_n = IdealPoint::from_null_ray(i0n_ray)?;
    let iota2_n = IdealPoint::from_null_ray(i2n_ray)?;
    // Cycle ([n], ι2[n], ι1ι2[n] = ι0[n], ι0ι1ι2[n] = [n]).
    Ok(FixedPointCycle {
        n,
        cycle: [n, iota2_n, iota0_n, n],
        parabolic,
        iota0_n,
        iota2_n,
    })
}

/// The pointed fundamental ideal triangle on a fixed null vector `n`:
/// sides are the outward normalizations of `n × ι0n`, `ι0n × ι1ι0n`,
/// `ι1ι0n × n`, and side `i` passes through the involution fixed point
/// `t_i`. The exact null representatives entering the vertex-triple
/// formulas are kept alongside the normalized triangle.
#[derive(Clone, Debug)]
pub struct FundamentalTriangle {
    pub triangle: IdealTriangle,
    /// The chosen null vector `n` (z-normalized).
    pub n: LorentzVector,
    /// `ι0 n`, the image vector (not re-normalized).
    pub iota0_n: LorentzVector,
    /// `ι2 n`, the image vector (not re-normalized).
    pub iota2_n: LorentzVector,
    /// `ι1 ι0 n`, proportional to `ι2 n`.
    pub iota1_iota0_n: LorentzVector,
}

pub fn fundamental_triangle(
    _ext: &CoxeterExtension,
    cycle: &FixedPointCycle,
) -> Result<FundamentalTriangle> {
    let n = cycle.n.vector();
    let i0n = cycle.iota0_n.vector();
    let i10n = cycle.iota2_n.vector(); // ι1ι0[n] = ι2[n] as rays
    let i2n = cycle.iota2_n.vector();
    let raw = [cross(n, i0n), cross(i0n, i10n), cross(i10n, n)];
    let incenter = n + i0n + i10n;
    let mut sides = [LorentzVector::ZERO; 3];
    // Nearly parallel cusp representatives of skinny triangles lose
    // relative precision in the cross products; the Gram tolerance tracks
    // that conditioning.
    let mut cond = 1.0f64;
    let pairs = [(n, i0n), (i0n, i10n), (i10n, n)];
    for (k, c) in raw.into_iter().enumerate() {
        let (u, v) = pairs[k];
        cond = cond.max(u.euclidean_norm() * v.euclidean_norm() / c.euclidean_norm().max(1e-300));
        // (u×v)·(u×v) = (u·v)² for null u, v: positive whenever the cusps
        // are distinct. Deep nodes drive the relative magnitude below any
        // fixed classification threshold, so normalize by the sign alone.
        let q = c.norm2();
        if q <= 0.0 {
            return Err(GeomError::NotSpacelike);
        }
        let s = c * (1.0 / flt::sqrt(q));
        sides[k] = if s.dot(incenter) < 0.0 { s } else { -s };
    }
    let triangle = IdealTriangle::from_sides_with_tol(sides, crate::MAT_EPS * cond)?;
    Ok(FundamentalTriangle {
        triangle,
        n,
        iota0_n: i0n,
        iota2_n: i2n,
        iota1_iota0_n: i10n,
    })
}

/// The fundamental ideal quadrilateral `Q = Δ ∪ ι0 Δ` with its four side
/// halfplanes, in the order `(H_A⁻, H_B⁻, H_A⁺, H_B⁺)`.
#[derive(Clone, Debug)]
pub struct FundamentalQuadrilateral {
    pub delta: IdealTriangle,
    pub flipped: IdealTriangle,
    /// Vertices in clockwise order: `[n], ι2[n], ι0[n], ι0ι2[n]`.
    pub vertices: [IdealPoint; 4],
    pub sides: [Halfplane; 4],
}

pub fn fundamental_quadrilateral(
    ext: &CoxeterExtension,
    ftri: &FundamentalTriangle,
) -> Result<FundamentalQuadrilateral> {
    let n = ftri.n;
    let i0 = &ext.iota[0];
    let i0n = ftri.iota0_n;
    let i2n = ftri.iota2_n;
    let i02n = i0.apply(i2n);

    let delta = ftri.triangle;
    let mut flipped_sides = [LorentzVector::ZERO; 3];
    for (k, s) in delta.sides().iter().enumerate() {
        flipped_sides[k] = i0.apply(*s);
    }
    let flipped = IdealTriangle::from_sides(flipped_sides)?;

    // t0 lies on the diagonal n ∨ ι0 n, interior to Q; orient sides away
    // from it.
    let interior = ext.t[0];
    let side = |u: LorentzVector, v: LorentzVector| -> Result<Halfplane> {
        let s = cross(u, v).unit_spacelike()?;
        Halfplane::new(if s.dot(interior) < 0.0 { s } else { -s })
    };
    let h_a_minus = side(i02n, i0n)?;
    let h_b_minus = side(i0n, i2n)?;
    let h_a_plus = side(i2n, n)?;
    let h_b_plus = side(n, i02n)?;

    Ok(FundamentalQuadrilateral {
        delta,
        flipped,
        vertices: [
            IdealPoint::from_null_ray(n)?,
            IdealPoint::from_null_ray(i2n)?,
            IdealPoint::from_null_ray(i0n)?,
            IdealPoint::from_null_ray(i02n)?,
        ],
        sides: [h_a_minus, h_b_minus, h_a_plus, h_b_plus],
    })
}

/// The flip move on involution triples: `(ι0, ι1, ι2) ↦ (ι0, ι0ι2ι0, ι1)`.
/// The induced basic triple is `(B⁻¹, A, A⁻¹B)`.
pub fn flip_involutions(ext: &CoxeterExtension) -> Result<CoxeterExtension> {
    // (ι0, ι0ι2ι0, ι1) at the 2×2 level; the induced basic triple is
    // (B⁻¹, A, A⁻¹B). The lifts square to −id, so products pick up
    // harmless sign flips; fixed points and adjoints are insensitive.
    let i0_sl2 = ext.iota_sl2[0];
    let i1_sl2 = ext.iota_sl2[0].mul(&ext.iota_sl2[2]).mul(&ext.iota_sl2[0]);
    let i2_sl2 = ext.iota_sl2[1];
    let t1 = sl2_fixed_point(&i1_sl2)?;
    let a_sl2 = ext.b_sl2.inverse_unimodular();
    let b_sl2 = ext.a_sl2;
    let c_sl2 = a_sl2.mul(&b_sl2).inverse_unimodular();
    let a = from_sl2(&a_sl2)?;
    let b = from_sl2(&b_sl2)?;
    let c = from_sl2(&c_sl2)?;
    Ok(CoxeterExtension {
        iota: [
            linear_involution_unit_timelike(ext.t[0]),
            linear_involution_unit_timelike(t1),
            linear_involution_unit_timelike(ext.t[1]),
        ],
        t: [ext.t[0], t1, ext.t[1]],
        neutrals: [sl2_neutral(&a_sl2)?, sl2_neutral(&b_sl2)?, sl2_neutral(&c_sl2)?],
        a,
        b,
        c,
        a_sl2,
        b_sl2,
        c_sl2,
        iota_sl2: [i0_sl2, i1_sl2, i2_sl2],
    })
}
