//! The Lorentzian vector space `V` of signature (2,1), Minkowski space `E`,
//! and their isometries.
//!
//! Conventions, fixed once for the whole crate:
//!
//! * standard basis `e1 = (1,0,0)`, `e2 = (0,1,0)` spacelike,
//!   `e3 = (0,0,1)` timelike with the future pointing towards positive `z`;
//! * inner product `u·v = ux vx + uy vy − uz vz`;
//! * the alternating form is normalized by `det3(e1,e2,e3) = 1` and the
//!   cross product is defined by `cross(u,v)·w = det3(u,v,w)`;
//! * null vectors are represented with `z = 1` whenever a normalization
//!   is needed.

use core::ops::{Add, Mul, Neg, Sub};

use crate::{flt, GeomError, Result, EPS};

/// Vector in the signature-(2,1) inner product space.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct LorentzVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Shorthand constructor.
#[inline]
pub const fn vec3(x: f64, y: f64, z: f64) -> LorentzVector {
    LorentzVector { x, y, z }
}

/// Sign classes of `v·v` combined with the time orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CausalClass {
    Zero,
    Spacelike,
    NullFuture,
    NullPast,
    TimelikeFuture,
    TimelikePast,
}

impl LorentzVector {
    pub const ZERO: LorentzVector = vec3(0.0, 0.0, 0.0);
    pub const E1: LorentzVector = vec3(1.0, 0.0, 0.0);
    pub const E2: LorentzVector = vec3(0.0, 1.0, 0.0);
    pub const E3: LorentzVector = vec3(0.0, 0.0, 1.0);

    /// Lorentzian inner product (not the Euclidean dot product).
    #[inline]
    pub fn dot(self, o: LorentzVector) -> f64 {
        self.x * o.x + self.y * o.y - self.z * o.z
    }

    /// Inner product with compensated products: the three terms routinely
    /// cancel (null vectors, incidences), and the naive sum hides drift at
    /// the scale of the largest term.
    pub fn dot_compensated(self, o: LorentzVector) -> f64 {
        let p1 = self.x * o.x;
        let e1 = flt::fma(self.x, o.x, -p1);
        let p2 = self.y * o.y;
        let e2 = flt::fma(self.y, o.y, -p2);
        let p3 = self.z * o.z;
        let e3 = flt::fma(self.z, o.z, -p3);
        ((p1 + p2) - p3) + ((e1 + e2) - e3)
    }

    /// `v·v`.
    #[inline]
    pub fn norm2(self) -> f64 {
        self.dot(self)
    }

    /// Euclidean norm in the standard coordinates, used for scale estimates.
    #[inline]
    pub fn euclidean_norm(self) -> f64 {
        flt::sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
    }

    /// Causal class with tolerance `eps` on `v·v`, measured relative to the
    /// squared Euclidean magnitude so the verdict is scale-invariant.
    pub fn classify_with_eps(self, eps: f64) -> CausalClass {
        let scale2 = self.x * self.x + self.y * self.y + self.z * self.z;
        if scale2 < eps * eps {
            return CausalClass::Zero;
        }
        let q = self.norm2();
        if q > eps * scale2 {
            CausalClass::Spacelike
        } else if q < -eps * scale2 {
            if self.z > 0.0 {
                CausalClass::TimelikeFuture
            } else {
                CausalClass::TimelikePast
            }
        } else if self.z > 0.0 {
            CausalClass::NullFuture
        } else {
            CausalClass::NullPast
        }
    }

    #[inline]
    pub fn classify(self) -> CausalClass {
        self.classify_with_eps(EPS)
    }

    #[inline]
    pub fn is_future_timelike(self) -> bool {
        self.classify() == CausalClass::TimelikeFuture
    }

    #[inline]
    pub fn is_future_null(self) -> bool {
        self.classify() == CausalClass::NullFuture
    }

    /// Rescale a causal vector so its `z`-component equals ±1.
    pub fn z_normalized(self) -> Result<LorentzVector> {
        if flt::abs(self.z) < EPS * self.euclidean_norm().max(1.0) {
            return Err(GeomError::Degenerate("z-normalization of a z=0 vector"));
        }
        Ok(self * (1.0 / flt::abs(self.z)))
    }

    /// Rescale a spacelike vector to unit length.
    pub fn unit_spacelike(self) -> Result<LorentzVector> {
        let q = self.norm2();
        let scale2 = self.x * self.x + self.y * self.y + self.z * self.z;
        if q <= EPS * scale2 {
            return Err(GeomError::NotSpacelike);
        }
        Ok(self * (1.0 / flt::sqrt(q)))
    }

    /// Rescale a timelike vector to `t·t = −1` pointing to the future.
    pub fn unit_future_timelike(self) -> Result<LorentzVector> {
        let q = self.norm2();
        let scale2 = self.x * self.x + self.y * self.y + self.z * self.z;
        if q >= -EPS * scale2 {
            return Err(GeomError::NotUnitTimelike);
        }
        let t = self * (1.0 / flt::sqrt(-q));
        Ok(if t.z > 0.0 { t } else { -t })
    }
}

impl Add for LorentzVector {
    type Output = LorentzVector;
    #[inline]
    fn add(self, o: LorentzVector) -> LorentzVector {
        vec3(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for LorentzVector {
    type Output = LorentzVector;
    #[inline]
    fn sub(self, o: LorentzVector) -> LorentzVector {
        vec3(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Neg for LorentzVector {
    type Output = LorentzVector;
    #[inline]
    fn neg(self) -> LorentzVector {
        vec3(-self.x, -self.y, -self.z)
    }
}

impl Mul<f64> for LorentzVector {
    type Output = LorentzVector;
    #[inline]
    fn mul(self, k: f64) -> LorentzVector {
        vec3(self.x * k, self.y * k, self.z * k)
    }
}

impl Mul<LorentzVector> for f64 {
    type Output = LorentzVector;
    #[inline]
    fn mul(self, v: LorentzVector) -> LorentzVector {
        v * self
    }
}

/// Alternating trilinear form with `det3(e1,e2,e3) = 1`.
#[inline]
pub fn det3(u: LorentzVector, v: LorentzVector, w: LorentzVector) -> f64 {
    u.x * (v.y * w.z - v.z * w.y) - u.y * (v.x * w.z - v.z * w.x) + u.z * (v.x * w.y - v.y * w.x)
}

/// Lorentzian cross product, defined by `cross(u,v)·w = det3(u,v,w)`.
#[inline]
pub fn cross(u: LorentzVector, v: LorentzVector) -> LorentzVector {
    // Euclidean cross product with the metric applied to the z slot.
    vec3(
        u.y * v.z - u.z * v.y,
        u.z * v.x - u.x * v.z,
        -(u.x * v.y - u.y * v.x),
    )
}

/// Point of the affine Minkowski space `E`, stored as the displacement
/// from a fixed global origin.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point {
    pub coords: LorentzVector,
}

impl Point {
    pub const ORIGIN: Point = Point {
        coords: LorentzVector::ZERO,
    };

    #[inline]
    pub const fn new(coords: LorentzVector) -> Point {
        Point { coords }
    }
}

impl Sub for Point {
    type Output = LorentzVector;
    #[inline]
    fn sub(self, o: Point) -> LorentzVector {
        self.coords - o.coords
    }
}

impl Add<LorentzVector> for Point {
    type Output = Point;
    #[inline]
    fn add(self, v: LorentzVector) -> Point {
        Point::new(self.coords + v)
    }
}

/// Null frame of a unit spacelike vector `s`: the two future-pointing null
/// directions spanning `s^⊥`, each scaled to `z = 1`, labeled so that
/// `cross(s_plus, s_minus)` is a positive multiple of `s`.
#[derive(Clone, Copy, Debug)]
pub struct NullFrame {
    pub s: LorentzVector,
    pub s_minus: LorentzVector,
    pub s_plus: LorentzVector,
}

impl NullFrame {
    /// Assemble a frame from precomputed parts, fixing the `(s⁻, s⁺)` labels
    /// by the orientation rule. The null vectors must span `s^⊥`; passing
    /// the same representative vector for a cusp shared by two frames keeps
    /// their common constraint rows bit-identical, which downstream
    /// disjointness decisions rely on.
    pub fn from_parts(
        s: LorentzVector,
        null_a: LorentzVector,
        null_b: LorentzVector,
    ) -> Result<NullFrame> {
        let s = s.unit_spacelike()?;
        let a = null_a.z_normalized()?;
        let b = null_b.z_normalized()?;
        let tol = 1e-7;
        for n in [a, b] {
            if flt::abs(n.norm2()) > tol || flt::abs(n.dot(s)) > tol {
                return Err(GeomError::Degenerate("null frame parts"));
            }
        }
        let (s_plus, s_minus) = if cross(a, b).dot(s) > 0.0 { (a, b) } else { (b, a) };
        Ok(NullFrame { s, s_minus, s_plus })
    }

    /// Build the frame of a spacelike vector, normalizing it to unit length.
    pub fn from_spacelike(s: LorentzVector) -> Result<NullFrame> {
        if s.classify() != CausalClass::Spacelike {
            return Err(GeomError::NotSpacelike);
        }
        let s = s.unit_spacelike()?;
        // For unit spacelike s, null vectors n = (n1, n2, 1) in s^⊥ satisfy
        // n1² + n2² = 1 and n1 s1 + n2 s2 = s3; the two solutions are
        // closed-form because s1² + s2² = 1 + s3².
        let r2 = s.x * s.x + s.y * s.y;
        let s_plus = vec3((s.x * s.z - s.y) / r2, (s.y * s.z + s.x) / r2, 1.0);
        let s_minus = vec3((s.x * s.z + s.y) / r2, (s.y * s.z - s.x) / r2, 1.0);
        Ok(NullFrame { s, s_minus, s_plus })
    }
}

/// Linear isometry of `V` with determinant one.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    m: [[f64; 3]; 3],
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Wrap a matrix that is known to be a future-preserving isometry.
    #[inline]
    pub const fn from_matrix_unchecked(m: [[f64; 3]; 3]) -> Isometry {
        Isometry { m }
    }

    /// Validate `mᵀ G m = G`, `det m = 1`, and future preservation.
    pub fn try_new(m: [[f64; 3]; 3]) -> Result<Isometry> {
        let iso = Isometry { m };
        if iso.isometry_defect() > crate::MAT_EPS {
            return Err(GeomError::NotIsometry);
        }
        if flt::abs(iso.det() - 1.0) > crate::MAT_EPS {
            return Err(GeomError::NotIsometry);
        }
        // Future preservation: the image of e3 stays in the future cone,
        // equivalently (m e3)·e3 < 0.
        if iso.apply(LorentzVector::E3).dot(LorentzVector::E3) >= 0.0 {
            return Err(GeomError::NotIsometry);
        }
        Ok(iso)
    }

    #[inline]
    pub fn matrix(&self) -> &[[f64; 3]; 3] {
        &self.m
    }

    #[inline]
    pub fn apply(&self, v: LorentzVector) -> LorentzVector {
        vec3(
            self.m[0][0] * v.x + self.m[0][1] * v.y + self.m[0][2] * v.z,
            self.m[1][0] * v.x + self.m[1][1] * v.y + self.m[1][2] * v.z,
            self.m[2][0] * v.x + self.m[2][1] * v.y + self.m[2][2] * v.z,
        )
    }

    pub fn compose(&self, o: &Isometry) -> Isometry {
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = (0..3).map(|k| self.m[i][k] * o.m[k][j]).sum();
            }
        }
        Isometry { m }
    }

    /// Inverse via `G mᵀ G`, exact for isometries.
    pub fn inverse(&self) -> Isometry {
        let g = [1.0, 1.0, -1.0];
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = g[i] * self.m[j][i] * g[j];
            }
        }
        Isometry { m }
    }

    pub fn det(&self) -> f64 {
        let m = &self.m;
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
            - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    }

    #[inline]
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1] + self.m[2][2]
    }

    /// Largest entry of `mᵀ G m − G`; zero for exact isometries.
    pub fn isometry_defect(&self) -> f64 {
        let g = [1.0f64, 1.0, -1.0];
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let mut acc = 0.0;
                for k in 0..3 {
                    acc += self.m[k][i] * g[k] * self.m[k][j];
                }
                let target = if i == j { g[i] } else { 0.0 };
                worst = worst.max(flt::abs(acc - target));
            }
        }
        worst
    }

    pub fn max_abs_diff(&self, o: &Isometry) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                worst = worst.max(flt::abs(self.m[i][j] - o.m[i][j]));
            }
        }
        worst
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    #[inline]
    fn mul(self, o: Isometry) -> Isometry {
        self.compose(&o)
    }
}

/// The involution of `V` fixing a non-null `u` and acting as −1 on `u^⊥`:
/// `v ↦ −v + 2 (v·u)/(u·u) u`.
pub fn linear_involution(u: LorentzVector) -> Result<Isometry> {
    let q = u.norm2();
    if flt::abs(q) <= EPS * u.euclidean_norm().max(1.0) {
        return Err(GeomError::NullVector);
    }
    let k = 2.0 / q;
    let gu = [u.x, u.y, -u.z];
    let uc = [u.x, u.y, u.z];
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            *cell = -id + k * uc[i] * gu[j];
        }
    }
    Ok(Isometry { m })
}

/// Involution fixing a unit timelike `t`, with `t·t = −1` taken exactly:
/// `v ↦ −v − 2 (v·t) t`. Evaluating `t·t` instead would cost the matrix
/// its relative accuracy once `t` sits far from the origin.
pub fn linear_involution_unit_timelike(t: LorentzVector) -> Isometry {
    let gt = [t.x, t.y, -t.z];
    let tc = [t.x, t.y, t.z];
    let mut m = [[0.0; 3]; 3];
    for (i, row) in m.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            let id = if i == j { 1.0 } else { 0.0 };
            *cell = -id - 2.0 * tc[i] * gt[j];
        }
    }
    Isometry { m }
}

/// Orientation-preserving affine isometry `x ↦ L x + v` of `E`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AffineIsometry {
    pub linear: Isometry,
    pub translation: LorentzVector,
}

impl AffineIsometry {
    pub const IDENTITY: AffineIsometry = AffineIsometry {
        linear: Isometry::IDENTITY,
        translation: LorentzVector::ZERO,
    };

    #[inline]
    pub const fn new(linear: Isometry, translation: LorentzVector) -> AffineIsometry {
        AffineIsometry {
            linear,
            translation,
        }
    }

    #[inline]
    pub fn apply(&self, p: Point) -> Point {
        Point::new(self.linear.apply(p.coords) + self.translation)
    }

    /// `(X1,v1)·(X2,v2) = (X1 X2, v1 + X1 v2)`.
    pub fn compose(&self, o: &AffineIsometry) -> AffineIsometry {
        AffineIsometry {
            linear: self.linear.compose(&o.linear),
            translation: self.translation + self.linear.apply(o.translation),
        }
    }

    pub fn inverse(&self) -> AffineIsometry {
        let inv = self.linear.inverse();
        AffineIsometry {
            linear: inv,
            translation: -inv.apply(self.translation),
        }
    }

    /// Translational part as measured at `origin`, i.e. `g(origin) − L(origin)`.
    pub fn translation_at(&self, origin: Point) -> LorentzVector {
        self.apply(origin).coords - self.linear.apply(origin.coords)
    }

    pub fn max_abs_diff(&self, o: &AffineIsometry) -> f64 {
        let lin = self.linear.max_abs_diff(&o.linear);
        let t = self.translation - o.translation;
        lin.max(flt::abs(t.x)).max(flt::abs(t.y)).max(flt::abs(t.z))
    }
}

impl Mul for AffineIsometry {
    type Output = AffineIsometry;
    #[inline]
    fn mul(self, o: AffineIsometry) -> AffineIsometry {
        self.compose(&o)
    }
}

/// Reflection in the particle `p + R t` for a unit timelike `t`:
/// `p + v ↦ p − v − 2 (v·t) t`. Fixes the particle pointwise.
pub fn particle_involution(p: Point, t: LorentzVector) -> Result<AffineIsometry> {
    let scale2 = t.x * t.x + t.y * t.y + t.z * t.z;
    if flt::abs(t.norm2() + 1.0) > EPS * scale2.max(1.0) {
        return Err(GeomError::NotUnitTimelike);
    }
    let linear = linear_involution_unit_timelike(t);
    let translation = p.coords - linear.apply(p.coords);
    Ok(AffineIsometry {
        linear,
        translation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const E1: LorentzVector = LorentzVector::E1;
    const E2: LorentzVector = LorentzVector::E2;
    const E3: LorentzVector = LorentzVector::E3;

    fn close(u: LorentzVector, v: LorentzVector, tol: f64) -> bool {
        (u - v).euclidean_norm() <= tol
    }

    #[test]
    fn inner_product_on_basis() {
        assert_eq!(E1.dot(E1), 1.0);
        assert_eq!(E3.dot(E3), -1.0);
        assert_eq!(vec3(1.0, 1.0, 1.0).dot(vec3(1.0, 1.0, 1.0)), 1.0);
    }

    #[test]
    fn det3_is_normalized_and_alternating() {
        assert_eq!(det3(E1, E2, E3), 1.0);
        assert_eq!(det3(E2, E1, E3), -1.0);
        assert_eq!(det3(E1, E1, E3), 0.0);
    }

    // Independent oracle: the unique vector c with inner(c, e_k) = det3(u,v,e_k).
    fn cross_oracle(u: LorentzVector, v: LorentzVector) -> LorentzVector {
        vec3(det3(u, v, E1), det3(u, v, E2), -det3(u, v, E3))
    }

    #[test]
    fn cross_product_matches_componentwise_oracle() {
        assert_eq!(cross(E1, E2), cross_oracle(E1, E2));
        assert_eq!(cross(E1, E2), vec3(0.0, 0.0, -1.0));
        assert_eq!(cross(E2, E3), cross_oracle(E2, E3));
        assert_eq!(cross(E2, E3), vec3(1.0, 0.0, 0.0));
        let u = vec3(0.3, -1.2, 0.7);
        assert_eq!(cross(u, u), LorentzVector::ZERO);
        let v = vec3(-0.4, 0.9, 2.0);
        assert!(close(cross(u, v), cross_oracle(u, v), 1e-15));
    }

    #[test]
    fn classification_of_basis_directions() {
        assert_eq!(E3.classify(), CausalClass::TimelikeFuture);
        assert_eq!(vec3(0.0, 1.0, 1.0).classify(), CausalClass::NullFuture);
        assert_eq!(E1.classify(), CausalClass::Spacelike);
        assert_eq!(LorentzVector::ZERO.classify(), CausalClass::Zero);
        assert_eq!(vec3(0.0, 0.0, -2.0).classify(), CausalClass::TimelikePast);
        assert_eq!(vec3(1.0, 0.0, -1.0).classify(), CausalClass::NullPast);
    }

    // Oracle for the null frame: intersect the unit circle n1²+n2²=1 with the
    // line n1 s1 + n2 s2 = s3 and fix the labels by the orientation rule.
    fn null_frame_oracle(s: LorentzVector) -> (LorentzVector, LorentzVector) {
        let s = s.unit_spacelike().unwrap();
        let r2 = s.x * s.x + s.y * s.y;
        let r = r2.sqrt();
        let (ux, uy) = (s.x / r, s.y / r);
        let d = s.z / r;
        let w = (1.0 - d * d).sqrt();
        let a = vec3(d * ux - w * uy, d * uy + w * ux, 1.0);
        let b = vec3(d * ux + w * uy, d * uy - w * ux, 1.0);
        let lambda = cross(a, b).dot(s);
        if lambda > 0.0 {
            (a, b)
        } else {
            (b, a)
        }
    }

    #[test]
    fn null_frame_of_standard_directions() {
        let f = NullFrame::from_spacelike(E1).unwrap();
        assert!(close(f.s_plus, vec3(0.0, 1.0, 1.0), 1e-12));
        assert!(close(f.s_minus, vec3(0.0, -1.0, 1.0), 1e-12));
        let (op, om) = null_frame_oracle(E1);
        assert!(close(f.s_plus, op, 1e-12) && close(f.s_minus, om, 1e-12));

        let g = NullFrame::from_spacelike(-E1).unwrap();
        assert!(close(g.s_plus, vec3(0.0, -1.0, 1.0), 1e-12));
        assert!(close(g.s_minus, vec3(0.0, 1.0, 1.0), 1e-12));

        assert_eq!(
            NullFrame::from_spacelike(E3).unwrap_err(),
            GeomError::NotSpacelike
        );
    }

    #[test]
    fn null_frame_matches_oracle_on_generic_input() {
        for &s in &[
            vec3(1.0, 2.0, -0.5),
            vec3(-3.0, 0.25, 1.0),
            vec3(0.1, -0.9, 0.3),
        ] {
            let f = NullFrame::from_spacelike(s).unwrap();
            let (op, om) = null_frame_oracle(s);
            assert!(close(f.s_plus, op, 1e-12), "s_plus mismatch for {s:?}");
            assert!(close(f.s_minus, om, 1e-12));
            assert!(f.s.norm2() - 1.0 < 1e-12);
            assert!(f.s.dot(f.s_plus).abs() < 1e-12);
            assert!(f.s.dot(f.s_minus).abs() < 1e-12);
            assert!(f.s_plus.norm2().abs() < 1e-12);
            assert!(f.s_minus.norm2().abs() < 1e-12);
            // Round trip: cross(s⁺, s⁻) = λ s with λ > 0.
            let c = cross(f.s_plus, f.s_minus);
            let lambda = c.dot(f.s);
            assert!(lambda > 0.0);
            assert!(close(c * (1.0 / lambda), f.s, 1e-9));
        }
    }

    #[test]
    fn linear_involution_examples() {
        // u = e3: (v·u)/(u·u) = v3, so (1,2,5) ↦ (−1,−2,5).
        let inv = linear_involution(E3).unwrap();
        assert!(close(inv.apply(vec3(1.0, 2.0, 5.0)), vec3(-1.0, -2.0, 5.0), 1e-12));
        let inv1 = linear_involution(E1).unwrap();
        assert!(close(inv1.apply(E1), E1, 1e-12));
        assert_eq!(
            linear_involution(vec3(0.0, 1.0, 1.0)).unwrap_err(),
            GeomError::NullVector
        );
    }

    #[test]
    fn linear_involution_is_an_isometric_involution() {
        let u = vec3(0.4, -0.3, 1.7);
        let inv = linear_involution(u).unwrap();
        assert!(inv.compose(&inv).max_abs_diff(&Isometry::IDENTITY) < 1e-12);
        assert!(inv.isometry_defect() < 1e-12);
        assert!((inv.det() - 1.0).abs() < 1e-12);
        let v = vec3(1.0, 2.0, 0.5);
        let w = vec3(-0.7, 0.2, 1.1);
        assert!((inv.apply(v).dot(inv.apply(w)) - v.dot(w)).abs() < 1e-12);
    }

    #[test]
    fn particle_involution_examples() {
        // At the origin with t = e3 this is the rotation by π about the t axis.
        let iota = particle_involution(Point::ORIGIN, E3).unwrap();
        let p = Point::new(vec3(1.0, 2.0, 3.0));
        assert!(close(iota.apply(p) - Point::ORIGIN, vec3(-1.0, -2.0, 3.0), 1e-12));

        let base = Point::new(vec3(0.3, -0.8, 2.0));
        let t = vec3(0.6, 0.0, 1.0).unit_future_timelike().unwrap();
        let iota = particle_involution(base, t).unwrap();
        assert!(close(iota.apply(base) - base, LorentzVector::ZERO, 1e-12));
        // Involution on a spread of points.
        for k in 0..100 {
            let v = vec3(
                (k as f64 * 0.37).sin(),
                (k as f64 * 0.11).cos() * 2.0,
                (k as f64 * 0.59).sin() * 1.5,
            );
            let q = Point::new(v);
            let back = iota.apply(iota.apply(q));
            assert!(close(back - q, LorentzVector::ZERO, 1e-12));
        }
        assert_eq!(
            particle_involution(Point::ORIGIN, E1).unwrap_err(),
            GeomError::NotUnitTimelike
        );
    }

    #[test]
    fn affine_composition_law() {
        let a = particle_involution(Point::new(vec3(1.0, 0.0, 0.5)), E3).unwrap();
        let b = particle_involution(Point::new(vec3(0.0, 2.0, 0.0)), E3).unwrap();
        let p = Point::new(vec3(0.2, -0.9, 1.4));
        let lhs = a.compose(&b).apply(p);
        let rhs = a.apply(b.apply(p));
        assert!(close(lhs - rhs, LorentzVector::ZERO, 1e-12));
        let inv = a.inverse();
        assert!(a.compose(&inv).max_abs_diff(&AffineIsometry::IDENTITY) < 1e-12);
    }
}
