//! Hyperboloid model of the hyperbolic plane: halfplanes, ideal points and
//! ideal triangles, classification of isometries, and the adjoint lift from
//! 2×2 real unimodular matrices.
//!
//! `H^2` is the set of future unit-timelike directions. A unit spacelike
//! vector `s` bounds the halfplane `{v ∈ H^2 | v·s ≥ 0}`; an ideal triangle
//! is recorded by its three outward side vectors, so the triangle itself is
//! `{v | v·s_i ≤ 0 for all i}`.

use crate::lorentz::{cross, det3, vec3, CausalClass, Isometry, LorentzVector};
use crate::{flt, GeomError, Result, EPS, MAT_EPS};

/// Conjugacy classes of nontrivial elements of `SO(2,1)⁰`, plus the identity.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IsometryClass {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
}

impl Isometry {
    /// Spectral radius, computed from the trace: the eigenvalues of a
    /// future-preserving isometry are `{1, λ, 1/λ}` with `λ ≥ 1` real, or
    /// `{1, e^{iθ}, e^{-iθ}}`, so `tr ≥ 3` distinguishes the boost case.
    pub fn spectral_radius(&self) -> f64 {
        let t = self.trace() - 1.0;
        if t <= 2.0 {
            1.0
        } else {
            (t + flt::sqrt(t * t - 4.0)) / 2.0
        }
    }

    /// Classify with tolerance `eps` on the spectral radius.
    pub fn class_with_eps(&self, eps: f64) -> IsometryClass {
        if self.max_abs_diff(&Isometry::IDENTITY) <= eps {
            return IsometryClass::Identity;
        }
        let t = self.trace();
        if t >= 3.0 {
            let radius = self.spectral_radius();
            if radius > 1.0 + eps {
                IsometryClass::Hyperbolic
            } else {
                IsometryClass::Parabolic
            }
        } else if t > 3.0 - eps {
            IsometryClass::Parabolic
        } else {
            IsometryClass::Elliptic
        }
    }

    #[inline]
    pub fn class(&self) -> IsometryClass {
        // Trace rounding grows with the entry scale; judge relative to it.
        let scale = self
            .matrix()
            .iter()
            .flatten()
            .fold(1.0f64, |m, v| m.max(crate::flt::abs(*v)));
        self.class_with_eps(EPS * scale)
    }
}

/// 2×2 real matrix with the handful of operations needed here.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Mat2 {
    pub m: [[f64; 2]; 2],
}

impl Mat2 {
    pub const IDENTITY: Mat2 = Mat2 {
        m: [[1.0, 0.0], [0.0, 1.0]],
    };

    #[inline]
    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Mat2 {
        Mat2 { m: [[a, b], [c, d]] }
    }

    /// Determinant with a compensated difference: for products of
    /// unimodular matrices the two terms are huge and nearly equal, and
    /// plain evaluation hides the genuine drift of the rounded product.
    pub fn det(&self) -> f64 {
        let p1 = self.m[0][0] * self.m[1][1];
        let e1 = crate::flt::fma(self.m[0][0], self.m[1][1], -p1);
        let p2 = self.m[0][1] * self.m[1][0];
        let e2 = crate::flt::fma(self.m[0][1], self.m[1][0], -p2);
        (p1 - p2) + (e1 - e2)
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2::new(
            self.m[0][0] * o.m[0][0] + self.m[0][1] * o.m[1][0],
            self.m[0][0] * o.m[0][1] + self.m[0][1] * o.m[1][1],
            self.m[1][0] * o.m[0][0] + self.m[1][1] * o.m[1][0],
            self.m[1][0] * o.m[0][1] + self.m[1][1] * o.m[1][1],
        )
    }

    /// Inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Mat2 {
        Mat2::new(self.m[1][1], -self.m[0][1], -self.m[1][0], self.m[0][0])
    }
}

/// Adjoint lift `SL(2,R) → SO(2,1)⁰`.
///
/// The traceless 2×2 matrices are identified with `V` through the basis
/// `E1 = [[1,0],[0,−1]]`, `E2 = [[0,1],[1,0]]`, `E3 = [[0,1],[−1,0]]` and
/// the pairing `½ tr(XY)`, which has signature (2,1); conjugation by `a`
/// then acts as a future-preserving isometry, with kernel `{±id}`.
pub fn from_sl2(a: &Mat2) -> Result<Isometry> {
    let det = a.det();
    let scale = a
        .m
        .iter()
        .flatten()
        .fold(1.0f64, |acc, v| acc.max(flt::abs(*v)));
    if flt::abs(det - 1.0) >= 1e-9 * scale * scale {
        return Err(GeomError::NotIsometry);
    }
    // Long word products drift off the unimodular variety by rounding;
    // rescale so the adjoint is a true isometry.
    let a = if det != 1.0 {
        let k = 1.0 / flt::sqrt(det);
        &Mat2::new(a.m[0][0] * k, a.m[0][1] * k, a.m[1][0] * k, a.m[1][1] * k)
    } else {
        a
    };
    let basis = [
        Mat2::new(1.0, 0.0, 0.0, -1.0),
        Mat2::new(0.0, 1.0, 1.0, 0.0),
        Mat2::new(0.0, 1.0, -1.0, 0.0),
    ];
    let a_inv = a.inverse_unimodular();
    let mut m = [[0.0; 3]; 3];
    for (j, e) in basis.iter().enumerate() {
        let y = a.mul(e).mul(&a_inv);
        // Coordinates of y in the basis: y_k = ±½ tr(y E_k).
        m[0][j] = 0.5 * y.mul(&basis[0]).trace();
        m[1][j] = 0.5 * y.mul(&basis[1]).trace();
        m[2][j] = -0.5 * y.mul(&basis[2]).trace();
    }
    Ok(Isometry::from_matrix_unchecked(m))
}

/// The identification of `V` with traceless 2×2 matrices sends the fixed
/// spacelike direction of a hyperbolic `Ad(m)` to the traceless part of
/// `m` itself; no eigensolve, and exact relative to the entries.
pub fn sl2_traceless_ray(m: &Mat2) -> LorentzVector {
    let h = m.trace() / 2.0;
    let x = Mat2::new(m.m[0][0] - h, m.m[0][1], m.m[1][0], m.m[1][1] - h);
    // Coordinates in the (E1, E2, E3) basis via the pairing ½ tr(X E_k).
    vec3(
        x.m[0][0],
        (x.m[0][1] + x.m[1][0]) / 2.0,
        (x.m[0][1] - x.m[1][0]) / 2.0,
    )
}

/// Future null vector of the boundary fixed point `[v1 : v2] ∈ RP¹` of an
/// `SL(2,R)` action: exactly null by construction.
pub fn sl2_null_ray(v1: f64, v2: f64) -> LorentzVector {
    vec3(
        -v1 * v2,
        (v1 * v1 - v2 * v2) / 2.0,
        (v1 * v1 + v2 * v2) / 2.0,
    )
}

/// Kernel direction of `m − λ id` for a 2×2 matrix: the two rows are
/// (nearly) parallel, so their aligned combination beats either row alone
/// against entry noise.
fn eig2(m: &Mat2, lambda: f64) -> (f64, f64) {
    let a = (m.m[0][1], lambda - m.m[0][0]);
    let b = (lambda - m.m[1][1], m.m[1][0]);
    let na = a.0 * a.0 + a.1 * a.1;
    let nb = b.0 * b.0 + b.1 * b.1;
    if nb == 0.0 {
        return a;
    }
    if na == 0.0 {
        return b;
    }
    let sign = if a.0 * b.0 + a.1 * b.1 >= 0.0 { 1.0 } else { -1.0 };
    (a.0 + sign * b.0, a.1 + sign * b.1)
}

/// Unimodular eigenbasis of a hyperbolic 2×2 element: columns are the
/// attracting and repelling eigenvectors, scaled to determinant one.
pub fn sl2_eigenbasis(m: &Mat2) -> Result<Mat2> {
    let t = m.trace();
    if t * t <= 4.0 {
        return Err(GeomError::WrongIsometryClass);
    }
    let sign = if t >= 0.0 { 1.0 } else { -1.0 };
    let root = flt::sqrt(t * t - 4.0);
    let plus = eig2(m, sign * (flt::abs(t) + root) / 2.0);
    let minus = eig2(m, sign * (flt::abs(t) - root) / 2.0);
    let mut g = Mat2::new(plus.0, minus.0, plus.1, minus.1);
    let det = g.det();
    if flt::abs(det) <= 1e-300 {
        return Err(GeomError::Degenerate("eigenbasis"));
    }
    if det < 0.0 {
        g = Mat2::new(g.m[0][0], -g.m[0][1], g.m[1][0], -g.m[1][1]);
    }
    let k = 1.0 / flt::sqrt(flt::abs(det));
    Ok(Mat2::new(
        g.m[0][0] * k,
        g.m[0][1] * k,
        g.m[1][0] * k,
        g.m[1][1] * k,
    ))
}

/// Fixed null rays of the adjoint of a non-elliptic 2×2 matrix.
#[derive(Clone, Copy, Debug)]
pub enum Sl2Fixed {
    Parabolic(LorentzVector),
    Hyperbolic {
        attracting: LorentzVector,
        repelling: LorentzVector,
    },
}

/// Compute the fixed rays, optionally pinning the trace magnitude to an
/// exactly known value (the computed trace of a long product can lose
/// digits to cancellation while its eigenvectors remain good).
pub fn sl2_fixed_null_rays(m: &Mat2, trace_magnitude: Option<f64>) -> Result<Sl2Fixed> {
    let computed = m.trace();
    let mag = trace_magnitude.unwrap_or_else(|| flt::abs(computed));
    let sign = if computed >= 0.0 { 1.0 } else { -1.0 };
    if mag < 2.0 - 1e-9 {
        return Err(GeomError::WrongIsometryClass);
    }
    if mag <= 2.0 + 1e-9 {
        let v = eig2(m, sign);
        return Ok(Sl2Fixed::Parabolic(sl2_null_ray(v.0, v.1)));
    }
    let root = flt::sqrt(mag * mag - 4.0);
    let big = sign * (mag + root) / 2.0;
    let small = sign * (mag - root) / 2.0;
    let va = eig2(m, big);
    let vr = eig2(m, small);
    Ok(Sl2Fixed::Hyperbolic {
        attracting: sl2_null_ray(va.0, va.1),
        repelling: sl2_null_ray(vr.0, vr.1),
    })
}

/// Ideal boundary point of `H^2`: a future null direction, `z`-normalized.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdealPoint {
    n: LorentzVector,
}

impl IdealPoint {
    pub fn new(v: LorentzVector) -> Result<IdealPoint> {
        match v.classify() {
            CausalClass::NullFuture => Ok(IdealPoint {
                n: v.z_normalized()?,
            }),
            CausalClass::NullPast => Ok(IdealPoint {
                n: (-v).z_normalized()?,
            }),
            _ => Err(GeomError::Degenerate("ideal point from non-null vector")),
        }
    }

    /// Normalize a vector known to span a null ray (an isometry image of a
    /// null vector, say) without re-classifying it: isometries with large
    /// entries contract null directions enough that `v·v` rounding defeats
    /// any fixed relative test.
    pub fn from_null_ray(v: LorentzVector) -> Result<IdealPoint> {
        let v = if v.z >= 0.0 { v } else { -v };
        Ok(IdealPoint {
            n: v.z_normalized()?,
        })
    }

    #[inline]
    pub fn vector(&self) -> LorentzVector {
        self.n
    }

    /// Equality as rays, up to `tol` on the normalized representatives.
    pub fn ray_eq(&self, o: &IdealPoint, tol: f64) -> bool {
        (self.n - o.n).euclidean_norm() <= tol
    }
}

/// Halfplane `{v ∈ H^2 | v·s ≥ 0}` for a unit spacelike `s`.
#[derive(Clone, Copy, Debug)]
pub struct Halfplane {
    s: LorentzVector,
}

impl Halfplane {
    pub fn new(s: LorentzVector) -> Result<Halfplane> {
        Ok(Halfplane {
            s: s.unit_spacelike()?,
        })
    }

    #[inline]
    pub fn director(&self) -> LorentzVector {
        self.s
    }

    /// Membership of a future-timelike vector, boundary inclusive.
    pub fn contains(&self, w: LorentzVector) -> Result<bool> {
        if w.classify() != CausalClass::TimelikeFuture {
            return Err(GeomError::NotUnitTimelike);
        }
        Ok(w.dot(self.s) >= -EPS)
    }
}

/// Ideal triangle, stored by its three unit spacelike side vectors oriented
/// outward: the triangle is the complement of the three open halfplanes, and
/// the side Gram matrix is `[[1,−1,−1],[−1,1,−1],[−1,−1,1]]`.
#[derive(Clone, Copy, Debug)]
pub struct IdealTriangle {
    sides: [LorentzVector; 3],
}

impl IdealTriangle {
    /// Wrap an outward-oriented side triple, checking the Gram matrix.
    pub fn from_sides(sides: [LorentzVector; 3]) -> Result<IdealTriangle> {
        IdealTriangle::from_sides_with_tol(sides, MAT_EPS)
    }

    /// Gram check with an explicit tolerance, for sides produced from
    /// ill-conditioned intermediates (deep tiling nodes).
    pub fn from_sides_with_tol(sides: [LorentzVector; 3], tol: f64) -> Result<IdealTriangle> {
        let t = IdealTriangle { sides };
        let g = t.gram();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { -1.0 };
                if flt::abs(g[i][j] - want) > tol {
                    return Err(GeomError::Degenerate("side Gram matrix"));
                }
            }
        }
        Ok(t)
    }

    /// Triangle spanned by three pairwise distinct cusps: sides are the
    /// normalized cross products of consecutive cusp representatives, with
    /// signs chosen so the incenter direction `n1+n2+n3` lies inside.
    pub fn from_cusps(n1: &IdealPoint, n2: &IdealPoint, n3: &IdealPoint) -> Result<IdealTriangle> {
        let (v1, v2, v3) = (n1.vector(), n2.vector(), n3.vector());
        let incenter = v1 + v2 + v3;
        let mut sides = [LorentzVector::ZERO; 3];
        for (k, (a, b)) in [(v1, v2), (v3, v1), (v2, v3)].into_iter().enumerate() {
            let c = cross(a, b);
            if c.classify() != CausalClass::Spacelike {
                return Err(GeomError::Degenerate("proportional cusps"));
            }
            let s = c.unit_spacelike()?;
            sides[k] = if s.dot(incenter) < 0.0 { s } else { -s };
        }
        IdealTriangle::from_sides(sides)
    }

    #[inline]
    pub fn sides(&self) -> &[LorentzVector; 3] {
        &self.sides
    }

    pub fn gram(&self) -> [[f64; 3]; 3] {
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = self.sides[i].dot(self.sides[j]);
            }
        }
        g
    }

    /// The three ideal vertices. Vertex `k` is the common endpoint of the
    /// two sides other than side `k`.
    pub fn vertices(&self) -> Result<[IdealPoint; 3]> {
        let mut out = [IdealPoint {
            n: LorentzVector::E3,
        }; 3];
        for k in 0..3 {
            let a = self.sides[(k + 1) % 3];
            let b = self.sides[(k + 2) % 3];
            // The intersection of the two bounding geodesics' null spans:
            // cross(a, b) is null exactly when the sides are asymptotic.
            let c = cross(a, b);
            let v = if c.z >= 0.0 { c } else { -c };
            out[k] = IdealPoint::new(vec3(v.x, v.y, v.z))?;
        }
        Ok(out)
    }

    /// Interior sample: the future unit-timelike direction of the incenter.
    pub fn incenter(&self) -> Result<LorentzVector> {
        let v = self.vertices()?;
        (v[0].vector() + v[1].vector() + v[2].vector()).unit_future_timelike()
    }
}

/// Neutral fixed vector of a non-elliptic isometry.
///
/// For hyperbolic `x` this is the unit spacelike fixed vector, for
/// parabolic `x` the `z`-normalized null fixed vector flagged as
/// scale-ambiguous. The sign is pinned by requiring
/// `det3(u, x·u, vector) < 0` for (any) timelike probe `u`: under this
/// crate's orientation (`det3(e1,e2,e3) = 1`, future towards `+z`, wings
/// attached by the null-frame rule) that is the convention which gives
/// affine deformations realized by crooked fundamental domains positive
/// Margulis invariants.
#[derive(Clone, Copy, Debug)]
pub struct Neutral {
    pub vector: LorentzVector,
    pub scale_ambiguous: bool,
}

/// Kernel vector of `m − λ id` via the largest pairwise cross product of
/// its rows; errors if the kernel is (numerically) trivial.
pub(crate) fn eigenvector(m: &Isometry, lambda: f64) -> Result<LorentzVector> {
    let a = m.matrix();
    let rows = [
        vec3(a[0][0] - lambda, a[0][1], a[0][2]),
        vec3(a[1][0], a[1][1] - lambda, a[1][2]),
        vec3(a[2][0], a[2][1], a[2][2] - lambda),
    ];
    let mut best = LorentzVector::ZERO;
    let mut best_norm = 0.0;
    for (i, j) in [(0usize, 1usize), (1, 2), (0, 2)] {
        let r = rows[i];
        let s = rows[j];
        // Euclidean cross product of the rows spans the kernel.
        let c = vec3(
            r.y * s.z - r.z * s.y,
            r.z * s.x - r.x * s.z,
            r.x * s.y - r.y * s.x,
        );
        let n = c.euclidean_norm();
        if n > best_norm {
            best_norm = n;
            best = c;
        }
    }
    let scale = rows.iter().map(|r| r.euclidean_norm()).fold(1.0, f64::max);
    if best_norm <= 1e-14 * scale * scale {
        return Err(GeomError::Degenerate("eigenvector solve"));
    }
    Ok(best * (1.0 / best_norm))
}

pub fn neutral_vector(x: &Isometry) -> Result<Neutral> {
    let class = x.class();
    let (mut v, ambiguous) = match class {
        IsometryClass::Hyperbolic => {
            let v = eigenvector(x, 1.0)?.unit_spacelike()?;
            (v, false)
        }
        IsometryClass::Parabolic => {
            let v = eigenvector(x, 1.0)?;
            let v = if v.z >= 0.0 { v } else { -v };
            (v.z_normalized()?, true)
        }
        _ => return Err(GeomError::WrongIsometryClass),
    };
    let probe = LorentzVector::E3;
    let image = x.apply(probe);
    let orient = det3(probe, image, v);
    if flt::abs(orient) <= 1e-13 * image.euclidean_norm().max(1.0) {
        return Err(GeomError::Degenerate("neutral vector sign probe"));
    }
    if orient > 0.0 {
        v = -v;
    }
    Ok(Neutral {
        vector: v,
        scale_ambiguous: ambiguous,
    })
}

/// Fixed ideal points of a non-elliptic isometry.
#[derive(Clone, Copy, Debug)]
pub enum FixedPoints {
    Hyperbolic {
        attracting: IdealPoint,
        repelling: IdealPoint,
    },
    Parabolic(IdealPoint),
}

impl FixedPoints {
    pub fn attracting(&self) -> IdealPoint {
        match self {
            FixedPoints::Hyperbolic { attracting, .. } => *attracting,
            FixedPoints::Parabolic(p) => *p,
        }
    }
}

pub fn fixed_ideal_points(x: &Isometry) -> Result<FixedPoints> {
    match x.class() {
        IsometryClass::Hyperbolic => {
            let radius = x.spectral_radius();
            let plus = eigenvector(x, radius)?;
            let minus = eigenvector(x, 1.0 / radius)?;
            Ok(FixedPoints::Hyperbolic {
                attracting: IdealPoint::new(plus)?,
                repelling: IdealPoint::new(minus)?,
            })
        }
        IsometryClass::Parabolic => {
            let n = eigenvector(x, 1.0)?;
            Ok(FixedPoints::Parabolic(IdealPoint::new(n)?))
        }
        _ => Err(GeomError::WrongIsometryClass),
    }
}
