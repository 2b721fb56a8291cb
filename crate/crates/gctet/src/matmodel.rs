//! 2×2 matrices over ℂ_Λ, the model spaces X_Λ and Y_Λ as hermitian
//! matrices, the isometry action, and tangent vectors.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::gcnum::{c, s, Lambda, GC};

/// Tolerance for projective equality of points and isometries.
pub const PROJ_TOL: f64 = 1e-9;

/// Relative tolerance for the hermitian checks on raw matrices.
const HERM_TOL: f64 = 1e-8;

/// Relative tolerance under which a quadratic form value counts as zero.
pub const CAUSAL_TOL: f64 = 1e-10;

#[derive(Clone, Copy, PartialEq)]
pub struct Mat2 {
    pub a: GC,
    pub b: GC,
    pub c: GC,
    pub d: GC,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub fn new(a: GC, b: GC, c: GC, d: GC) -> Mat2 {
        assert!(
            a.lambda == b.lambda && b.lambda == c.lambda && c.lambda == d.lambda,
            "mixed curvature signs in Mat2"
        );
        Mat2 { a, b, c, d }
    }

    /// Builds `re + ℓ·im` from two real matrices given row-major.
    pub fn from_parts(lam: Lambda, re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> Mat2 {
        Mat2 {
            a: GC::new(lam, re[0][0], im[0][0]),
            b: GC::new(lam, re[0][1], im[0][1]),
            c: GC::new(lam, re[1][0], im[1][0]),
            d: GC::new(lam, re[1][1], im[1][1]),
        }
    }

    pub fn real(lam: Lambda, re: [[f64; 2]; 2]) -> Mat2 {
        Mat2::from_parts(lam, re, [[0.0; 2]; 2])
    }

    /// ℓ·m for a real matrix m.
    pub fn ell(lam: Lambda, im: [[f64; 2]; 2]) -> Mat2 {
        Mat2::from_parts(lam, [[0.0; 2]; 2], im)
    }

    pub fn identity(lam: Lambda) -> Mat2 {
        Mat2::real(lam, [[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn zero(lam: Lambda) -> Mat2 {
        Mat2::real(lam, [[0.0; 2]; 2])
    }

    pub fn diag(a: GC, d: GC) -> Mat2 {
        let z = GC::zero(a.lambda);
        Mat2::new(a, z, z, d)
    }

    pub fn scalar(z: GC) -> Mat2 {
        Mat2::diag(z, z)
    }

    pub fn lambda(&self) -> Lambda {
        self.a.lambda
    }

    pub fn real_part(&self) -> [[f64; 2]; 2] {
        [[self.a.re, self.b.re], [self.c.re, self.d.re]]
    }

    pub fn imag_part(&self) -> [[f64; 2]; 2] {
        [[self.a.im, self.b.im], [self.c.im, self.d.im]]
    }

    pub fn entries(&self) -> [GC; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// The eight real coordinates (re row-major, then im row-major).
    pub fn coords(&self) -> [f64; 8] {
        [
            self.a.re, self.b.re, self.c.re, self.d.re, self.a.im, self.b.im, self.c.im, self.d.im,
        ]
    }

    pub fn frob(&self) -> f64 {
        self.coords().iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn det(&self) -> GC {
        self.a * self.d - self.b * self.c
    }

    pub fn tr(&self) -> GC {
        self.a + self.d
    }

    pub fn conj(&self) -> Mat2 {
        Mat2::new(self.a.conj(), self.b.conj(), self.c.conj(), self.d.conj())
    }

    pub fn transpose(&self) -> Mat2 {
        Mat2::new(self.a, self.c, self.b, self.d)
    }

    /// M† = conjugate transpose.
    pub fn dag(&self) -> Mat2 {
        self.conj().transpose()
    }

    /// M∘ = [[d̄, −b̄], [−c̄, ā]].
    pub fn circ(&self) -> Mat2 {
        Mat2::new(self.d.conj(), -self.b.conj(), -self.c.conj(), self.a.conj())
    }

    pub fn adj(&self) -> Mat2 {
        Mat2::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn inv(&self) -> Result<Mat2> {
        let di = self.det().inv()?;
        Ok(self.adj().scale(di))
    }

    pub fn scale(&self, z: GC) -> Mat2 {
        Mat2::new(self.a * z, self.b * z, self.c * z, self.d * z)
    }

    pub fn scale_real(&self, k: f64) -> Mat2 {
        Mat2::new(self.a * k, self.b * k, self.c * k, self.d * k)
    }

    pub fn traceless_part(&self) -> Mat2 {
        let h = self.tr().scale(0.5);
        *self - Mat2::scalar(h)
    }

    pub fn apply(&self, v: [GC; 2]) -> [GC; 2] {
        [self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1]]
    }

    pub fn is_finite(&self) -> bool {
        self.coords().iter().all(|x| x.is_finite())
    }

    /// Frobenius distance to `o` relative to the larger norm.
    pub fn rel_dist(&self, o: &Mat2) -> f64 {
        let n = self.frob().max(o.frob()).max(f64::MIN_POSITIVE);
        (*self - *o).frob() / n
    }

    /// Whether the matrix is a ℂ_Λ multiple of the identity.
    pub fn is_scalar(&self, tol: f64) -> bool {
        let n = self.frob().max(f64::MIN_POSITIVE);
        self.b.norm_sq_coords().sqrt() <= tol * n
            && self.c.norm_sq_coords().sqrt() <= tol * n
            && self.a.dist(self.d) <= tol * n
    }

    /// exp(tV) for traceless V, using V² = −det(V)·𝟙.
    pub fn exp_traceless(&self, t: f64) -> Mat2 {
        let lam = self.lambda();
        let q = -self.det().re;
        let n = q.abs().sqrt();
        let scale = self.frob().max(1.0);
        if q.abs() <= 1e-14 * scale * scale {
            return Mat2::identity(lam) + self.scale_real(t);
        }
        let mu = Lambda::from_sign(if q > 0.0 { -1 } else { 1 });
        Mat2::scalar(GC::real(lam, c(mu, t * n))) + self.scale_real(s(mu, t * n) / n)
    }
}

impl Add for Mat2 {
    type Output = Mat2;
    fn add(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)
    }
}

impl Sub for Mat2 {
    type Output = Mat2;
    fn sub(self, o: Mat2) -> Mat2 {
        Mat2::new(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)
    }
}

impl Neg for Mat2 {
    type Output = Mat2;
    fn neg(self) -> Mat2 {
        self.scale_real(-1.0)
    }
}

impl Mul for Mat2 {
    type Output = Mat2;
    fn mul(self, o: Mat2) -> Mat2 {
        Mat2::new(
            self.a * o.a + self.b * o.c,
            self.a * o.b + self.b * o.d,
            self.c * o.a + self.d * o.c,
            self.c * o.b + self.d * o.d,
        )
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Involution {
    Circ,
    Dag,
}

pub fn involution(m: &Mat2, kind: Involution) -> Mat2 {
    match kind {
        Involution::Circ => m.circ(),
        Involution::Dag => m.dag(),
    }
}

/// X_Λ (the Lorentzian space) or Y_Λ (its dual).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Space {
    X,
    Y,
}

impl Space {
    pub fn involution(self) -> Involution {
        match self {
            Space::X => Involution::Circ,
            Space::Y => Involution::Dag,
        }
    }

    pub fn hermitian_conj(self, m: &Mat2) -> Mat2 {
        involution(m, self.involution())
    }

    pub fn dual(self) -> Space {
        match self {
            Space::X => Space::Y,
            Space::Y => Space::X,
        }
    }
}

impl fmt::Display for Space {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Space::X => write!(f, "X"),
            Space::Y => write!(f, "Y"),
        }
    }
}

/// φ_X and φ_Y from ℝ⁴.
pub fn embed(lam: Lambda, v: [f64; 4], space: Space) -> Mat2 {
    match space {
        Space::X => {
            let [x1, x2, x3, x4] = v;
            Mat2::from_parts(lam, [[x2, 0.0], [0.0, x2]], [[x4, x3 - x1], [x3 + x1, -x4]])
        }
        Space::Y => {
            let [y1, y2, y3, y4] = v;
            Mat2::from_parts(lam, [[y1 + y3, y4], [y4, y1 - y3]], [[0.0, y2], [-y2, 0.0]])
        }
    }
}

/// Inverse of [`embed`], projecting onto the hermitian part first.
pub fn unembed(m: &Mat2, space: Space) -> [f64; 4] {
    match space {
        Space::X => {
            let x2 = 0.5 * (m.a.re + m.d.re);
            let x4 = 0.5 * (m.a.im - m.d.im);
            let x3 = 0.5 * (m.b.im + m.c.im);
            let x1 = 0.5 * (m.c.im - m.b.im);
            [x1, x2, x3, x4]
        }
        Space::Y => {
            let y1 = 0.5 * (m.a.re + m.d.re);
            let y3 = 0.5 * (m.a.re - m.d.re);
            let y4 = 0.5 * (m.b.re + m.c.re);
            let y2 = 0.5 * (m.b.im - m.c.im);
            [y1, y2, y3, y4]
        }
    }
}

/// det φ(v) as a quadratic form on ℝ⁴.
pub fn quadric(lam: Lambda, v: [f64; 4], space: Space) -> f64 {
    let l = lam.value();
    match space {
        Space::X => {
            let [x1, x2, x3, x4] = v;
            x2 * x2 + l * (x4 * x4 + x3 * x3 - x1 * x1)
        }
        Space::Y => {
            let [y1, y2, y3, y4] = v;
            y1 * y1 - y3 * y3 - y4 * y4 - l * y2 * y2
        }
    }
}

/// Polarization of [`quadric`].
pub fn quadric_bilinear(lam: Lambda, u: [f64; 4], v: [f64; 4], space: Space) -> f64 {
    let l = lam.value();
    match space {
        Space::X => u[1] * v[1] + l * (u[3] * v[3] + u[2] * v[2] - u[0] * v[0]),
        Space::Y => u[0] * v[0] - u[2] * v[2] - u[3] * v[3] - l * u[1] * v[1],
    }
}

pub(crate) fn norm4(v: [f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Distance between the lines spanned by two nonzero vectors of ℝ⁴.
pub fn proj_dist4(u: [f64; 4], v: [f64; 4]) -> f64 {
    let (nu, nv) = (norm4(u), norm4(v));
    let mut plus = 0.0;
    let mut minus = 0.0;
    for i in 0..4 {
        let (a, b) = (u[i] / nu, v[i] / nv);
        plus += (a - b) * (a - b);
        minus += (a + b) * (a + b);
    }
    plus.min(minus).sqrt()
}

/// A point of X_Λ or Y_Λ: a hermitian matrix of positive determinant up to
/// nonzero real scale.
///
/// The stored lift has determinant 1; its sign is the one it was built with,
/// which matters for comparisons of two lifts.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    space: Space,
    rep: Mat2,
    vec: [f64; 4],
}

impl Point {
    /// Validates and normalizes a raw matrix representative.
    pub fn new(space: Space, m: Mat2) -> Result<Point> {
        let n = m.frob();
        if !m.is_finite() || n == 0.0 {
            return Err(Error::DomainError("point representative is zero or not finite".into()));
        }
        let h = space.hermitian_conj(&m);
        if (h - m).frob() > HERM_TOL * n {
            return Err(Error::DomainError(format!(
                "representative is not {}-hermitian",
                if space == Space::X { "∘" } else { "†" }
            )));
        }
        Point::from_vec(m.lambda(), space, unembed(&m, space))
    }

    pub fn from_vec(lam: Lambda, space: Space, v: [f64; 4]) -> Result<Point> {
        let q = quadric(lam, v, space);
        let n = norm4(v);
        if !(q > CAUSAL_TOL * n * n) || !q.is_finite() {
            return Err(Error::DomainError(format!(
                "vector {v:?} does not lie in {space}_{lam} (det = {q})"
            )));
        }
        let k = 1.0 / q.sqrt();
        let vec = v.map(|x| x * k);
        Ok(Point { space, rep: embed(lam, vec, space), vec })
    }

    /// Normalizes a matrix known to be a valid lift up to rounding.
    pub(crate) fn from_raw(space: Space, m: &Mat2) -> Point {
        let lam = m.lambda();
        let v = unembed(m, space);
        let q = quadric(lam, v, space).abs().max(f64::MIN_POSITIVE);
        let k = 1.0 / q.sqrt();
        let vec = v.map(|x| x * k);
        Point { space, rep: embed(lam, vec, space), vec }
    }

    pub fn origin(lam: Lambda, space: Space) -> Point {
        let v = match space {
            Space::X => [0.0, 1.0, 0.0, 0.0],
            Space::Y => [1.0, 0.0, 0.0, 0.0],
        };
        Point { space, rep: embed(lam, v, space), vec: v }
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn lambda(&self) -> Lambda {
        self.rep.lambda()
    }

    /// The stored determinant-one lift.
    pub fn rep(&self) -> Mat2 {
        self.rep
    }

    pub fn vec(&self) -> [f64; 4] {
        self.vec
    }

    /// The same point with the opposite lift.
    pub fn negated(&self) -> Point {
        Point { space: self.space, rep: -self.rep, vec: self.vec.map(|x| -x) }
    }

    /// Determinant-one lift with tr ≥ 0; ties broken by making the first
    /// nonzero coordinate positive.
    pub fn canonical_rep(&self) -> Mat2 {
        if self.lift_sign() < 0.0 {
            -self.rep
        } else {
            self.rep
        }
    }

    pub(crate) fn lift_sign(&self) -> f64 {
        let t = self.rep.tr().re;
        if t.abs() > 1e-14 {
            return t.signum();
        }
        for x in self.vec {
            if x.abs() > 1e-14 {
                return x.signum();
            }
        }
        1.0
    }

    pub fn proj_dist(&self, o: &Point) -> f64 {
        proj_dist4(self.vec, o.vec)
    }

    pub fn approx_eq(&self, o: &Point, tol: f64) -> bool {
        self.space == o.space && self.lambda() == o.lambda() && self.proj_dist(o) <= tol
    }
}

/// An orientation-preserving isometry, represented by a matrix with
/// |det|² > 0, up to multiplication by units of ℂ_Λ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Isometry {
    rep: Mat2,
}

impl Isometry {
    pub fn new(m: Mat2) -> Result<Isometry> {
        let n = m.frob();
        let md = m.det().modulus_sq();
        if !m.is_finite() || n == 0.0 || !(md > 1e-28 * n.powi(4)) {
            return Err(Error::DomainError(format!(
                "matrix is not in PGL⁺(2, ℂ_Λ): |det|² = {md}"
            )));
        }
        Ok(Isometry { rep: m.scale_real(md.powf(-0.25)) })
    }

    pub fn identity(lam: Lambda) -> Isometry {
        Isometry { rep: Mat2::identity(lam) }
    }

    pub fn rep(&self) -> Mat2 {
        self.rep
    }

    pub fn lambda(&self) -> Lambda {
        self.rep.lambda()
    }

    pub fn inverse(&self) -> Isometry {
        // |det|² = ±1 after normalization
        let d = self.rep.det();
        let m = self.rep.adj().scale(d.conj()).scale_real(1.0 / d.modulus_sq());
        Isometry::new(m).expect("inverse of an isometry")
    }

    pub fn compose(&self, o: &Isometry) -> Isometry {
        Isometry::new(self.rep * o.rep).expect("product of isometries")
    }

    /// Raw hermitian action on a matrix, without normalization.
    pub fn act_matrix(&self, space: Space, m: &Mat2) -> Mat2 {
        self.rep * *m * space.hermitian_conj(&self.rep)
    }

    pub fn act(&self, p: &Point) -> Point {
        Point::from_raw(p.space(), &self.act_matrix(p.space(), &p.rep()))
    }

    /// Projective equality: A·B⁻¹ is a ℂ_Λ multiple of the identity.
    pub fn approx_eq(&self, o: &Isometry, tol: f64) -> bool {
        if self.lambda() != o.lambda() {
            return false;
        }
        let c = self.rep * o.rep.adj();
        c.is_scalar(tol)
    }

    /// Projective distance max(|b|, |c|, |a−d|)/‖C‖ for C = A·adj(B).
    pub fn proj_dist(&self, o: &Isometry) -> f64 {
        let c = self.rep * o.rep.adj();
        let n = c.frob().max(f64::MIN_POSITIVE);
        let d = c.b.norm_sq_coords().sqrt().max(c.c.norm_sq_coords().sqrt()).max(c.a.dist(c.d));
        d / n
    }

    /// Real 4×4 matrix of the linear action on ℝ⁴ coordinates of `space`.
    pub fn ambient_matrix(&self, space: Space) -> [[f64; 4]; 4] {
        let lam = self.lambda();
        let mut out = [[0.0; 4]; 4];
        for j in 0..4 {
            let mut e = [0.0; 4];
            e[j] = 1.0;
            let img = unembed(&self.act_matrix(space, &embed(lam, e, space)), space);
            for i in 0..4 {
                out[i][j] = img[i];
            }
        }
        out
    }
}

impl Mul for Isometry {
    type Output = Isometry;
    fn mul(self, o: Isometry) -> Isometry {
        self.compose(&o)
    }
}

pub fn act(a: &Isometry, p: &Point) -> Point {
    a.act(p)
}

/// The hermitian isometry A with A▷𝟙 = p, built as 𝟙 + x′ where x′ is the
/// lift of p with det 1 and tr ≥ 0.
pub fn point_sqrt(p: &Point) -> Result<Isometry> {
    let x = p.canonical_rep();
    let a = Mat2::identity(p.lambda()) + x;
    if !a.is_finite() {
        return Err(Error::NormalizationFailure("non-finite representative".into()));
    }
    Isometry::new(a).map_err(|_| Error::NormalizationFailure("𝟙 + x′ is singular".into()))
}

/// Invariant form on 𝔵_Λ (½ tr(Im X Im Y)) or 𝔶_Λ (½ Re tr(XY)).
pub fn form(space: Space, x: &Mat2, y: &Mat2) -> f64 {
    match space {
        Space::X => {
            let (p, q) = (x.imag_part(), y.imag_part());
            0.5 * (p[0][0] * q[0][0] + p[0][1] * q[1][0] + p[1][0] * q[0][1] + p[1][1] * q[1][1])
        }
        Space::Y => 0.5 * (*x * *y).tr().re,
    }
}

/// Sign of q relative to the scale `n²`.
pub(crate) fn sign_with_tol(q: f64, n: f64) -> i8 {
    if q.abs() <= CAUSAL_TOL * n * n {
        0
    } else if q > 0.0 {
        1
    } else {
        -1
    }
}

/// A tangent vector at the point base▷𝟙, stored as a traceless hermitian
/// matrix at 𝟙 together with the isometry `base`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tangent {
    space: Space,
    base: Isometry,
    vec: Mat2,
}

impl Tangent {
    pub fn at_identity(space: Space, vec: Mat2) -> Result<Tangent> {
        Tangent::with_base(space, Isometry::identity(vec.lambda()), vec)
    }

    pub fn with_base(space: Space, base: Isometry, vec: Mat2) -> Result<Tangent> {
        assert_eq!(base.lambda(), vec.lambda(), "mixed curvature signs");
        let n = vec.frob().max(1.0);
        if vec.tr().norm_sq_coords().sqrt() > HERM_TOL * n {
            return Err(Error::DomainError("tangent vector is not traceless".into()));
        }
        if (space.hermitian_conj(&vec) - vec).frob() > HERM_TOL * n {
            return Err(Error::DomainError("tangent vector is not hermitian".into()));
        }
        let vec = vec.traceless_part();
        let vec = (vec + space.hermitian_conj(&vec)).scale_real(0.5);
        Ok(Tangent { space, base, vec })
    }

    /// ℓ·m for a real traceless m, as a tangent of X_Λ at 𝟙.
    pub fn x_at_identity(lam: Lambda, m: [[f64; 2]; 2]) -> Result<Tangent> {
        Tangent::at_identity(Space::X, Mat2::ell(lam, m))
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn lambda(&self) -> Lambda {
        self.vec.lambda()
    }

    pub fn base(&self) -> Isometry {
        self.base
    }

    /// Model vector at 𝟙.
    pub fn vec(&self) -> Mat2 {
        self.vec
    }

    pub fn base_point(&self) -> Point {
        self.base.act(&Point::origin(self.lambda(), self.space))
    }

    pub fn norm_sq(&self) -> f64 {
        form(self.space, &self.vec, &self.vec)
    }

    /// The vector as a matrix in ambient coordinates (A X A∘ or B Y B†).
    pub fn ambient(&self) -> Mat2 {
        self.base.act_matrix(self.space, &self.vec)
    }

    pub fn normalized(&self) -> Tangent {
        let q = self.norm_sq();
        if causal_type(self) == 0 {
            return *self;
        }
        Tangent { vec: self.vec.scale_real(1.0 / q.abs().sqrt()), ..*self }
    }

    /// Re-expresses the tangent at another isometry with the same base point.
    pub fn rebased(&self, base: &Isometry) -> Result<Tangent> {
        let u = base.inverse().compose(&self.base);
        let lam = self.lambda();
        let one = u.act_matrix(self.space, &Mat2::identity(lam));
        if !one.is_scalar(1e-8) || one.a.im.abs() > 1e-8 * one.frob() {
            return Err(Error::BaseMismatch("tangents are based at different points".into()));
        }
        let k = one.a.re;
        let v = u.act_matrix(self.space, &self.vec).scale_real(1.0 / k);
        Tangent::with_base(self.space, *base, v)
    }
}

pub fn causal_type(t: &Tangent) -> i8 {
    sign_with_tol(t.norm_sq(), t.vec.frob())
}

pub fn normalize_tangent(t: &Tangent) -> Tangent {
    t.normalized()
}

pub fn tangent_metric(t1: &Tangent, t2: &Tangent) -> Result<f64> {
    if t1.space != t2.space || t1.lambda() != t2.lambda() {
        return Err(Error::BaseMismatch("tangents live in different spaces".into()));
    }
    let t2 = if t1.base.approx_eq(&t2.base, 1e-12) {
        let u = t1.base.inverse().compose(&t2.base);
        if u.rep.is_scalar(1e-12) {
            *t2
        } else {
            t2.rebased(&t1.base)?
        }
    } else {
        t2.rebased(&t1.base)?
    };
    Ok(form(t1.space, &t1.vec, &t2.vec))
}

/// The sign μ with exp(tV) = c_μ(t) + s_μ(t)V for a unit or lightlike V:
/// Λσ on 𝔵_Λ and −σ on 𝔶_Λ.
pub fn exp_sign(space: Space, lam: Lambda, sigma: i8) -> Lambda {
    match space {
        Space::X => lam.times(sigma),
        Space::Y => Lambda::from_sign(-sigma),
    }
}

/// exp(θT/2)▷𝟙 followed by the base isometry of T.
pub fn exp_point(theta: f64, t: &Tangent) -> Result<Point> {
    let sigma = causal_type(t);
    if sigma != 0 && (t.norm_sq().abs() - 1.0).abs() > 1e-9 {
        return Err(Error::DomainError("tangent vector is not normalized".into()));
    }
    let mu = exp_sign(t.space, t.lambda(), sigma);
    if theta < 0.0 || (mu == Lambda::Pos && theta >= 2.0 * std::f64::consts::PI) {
        return Err(Error::DomainError(format!("parameter {theta} outside the admissible range")));
    }
    let lam = t.lambda();
    let half = Mat2::scalar(GC::real(lam, c(mu, theta / 2.0))) + t.vec.scale_real(s(mu, theta / 2.0));
    let p = Isometry::new(half)?.act(&Point::origin(lam, t.space));
    Ok(t.base.act(&p))
}
