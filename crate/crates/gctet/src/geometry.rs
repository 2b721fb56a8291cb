//! Geodesics, arc length, planes, the ideal boundary ∂∞Y_Λ ≅ ℂ_ΛP¹, cross
//! ratios and projective duality between X_Λ and Y_Λ.

use nalgebra::{Matrix2, Matrix3, Matrix4, SymmetricEigen};

use crate::error::{Error, Result};
use crate::gcnum::{c, ct_inv_clamped, s, Lambda, GC};
use crate::matmodel::{
    causal_type, embed, exp_sign, form, norm4, point_sqrt, proj_dist4, quadric,
    quadric_bilinear, sign_with_tol, unembed, Isometry, Mat2, Point, Space, Tangent, CAUSAL_TOL,
};

/// Coefficients of the duality pairing −x₁y₁ + x₂y₂ + x₃y₃ + x₄y₄.
pub const ETA: [f64; 4] = [-1.0, 1.0, 1.0, 1.0];

/// Relative tolerance for incidence tests in ℝ⁴.
pub const INCIDENCE_TOL: f64 = 1e-9;

pub(crate) fn dot4(a: [f64; 4], b: [f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub(crate) fn eta(v: [f64; 4]) -> [f64; 4] {
    [-v[0], v[1], v[2], v[3]]
}

/// Vector orthogonal to three vectors of ℝ⁴ (cofactor expansion).
pub(crate) fn cross4(a: [f64; 4], b: [f64; 4], c: [f64; 4]) -> [f64; 4] {
    let m = |i: usize, j: usize, k: usize| {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    [m(1, 2, 3), -m(0, 2, 3), m(0, 1, 3), -m(0, 1, 2)]
}

/// Orthonormal basis of the common kernel of the given covectors.
pub(crate) fn null_space(rows: &[[f64; 4]], rel_tol: f64) -> Vec<[f64; 4]> {
    let mut m = Matrix4::<f64>::zeros();
    for (i, r) in rows.iter().enumerate().take(4) {
        let n = norm4(*r).max(f64::MIN_POSITIVE);
        for j in 0..4 {
            m[(i, j)] = r[j] / n;
        }
    }
    let svd = m.svd(false, true);
    let vt = svd.v_t.expect("requested V");
    let top = svd.singular_values.max().max(1.0);
    let mut out = Vec::new();
    for k in 0..4 {
        if svd.singular_values[k] <= rel_tol * top {
            let v = vt.row(k);
            out.push([v[0], v[1], v[2], v[3]]);
        }
    }
    out
}

/// Residual of v after projection onto span(basis), relative to |v|.
fn span_residual(basis: &[[f64; 4]], v: [f64; 4]) -> f64 {
    let mut ortho: Vec<[f64; 4]> = Vec::new();
    for b in basis {
        let mut w = *b;
        for o in &ortho {
            let d = dot4(w, *o);
            for i in 0..4 {
                w[i] -= d * o[i];
            }
        }
        let n = norm4(w);
        if n > 1e-14 * norm4(*b) {
            ortho.push(w.map(|x| x / n));
        }
    }
    let mut r = v;
    for o in &ortho {
        let d = dot4(r, *o);
        for i in 0..4 {
            r[i] -= d * o[i];
        }
    }
    norm4(r) / norm4(v).max(f64::MIN_POSITIVE)
}

/// 𝔵_Λ ≅ ℝ^{1,2}: ℓ·[[x₄, x₃−x₁], [x₃+x₁, −x₄]] ↦ (x₁, x₃, x₄), with form
/// −x₁y₁ + x₃y₃ + x₄y₄.
pub(crate) fn xfrak_coords(m: &Mat2) -> [f64; 3] {
    let v = unembed(m, Space::X);
    [v[0], v[2], v[3]]
}

pub(crate) fn xfrak_from_coords(lam: Lambda, n: [f64; 3]) -> Mat2 {
    embed(lam, [n[0], 0.0, n[1], n[2]], Space::X)
}

fn xform3(a: [f64; 3], b: [f64; 3]) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// Vector of 𝔵_Λ orthogonal to both arguments.
pub(crate) fn xfrak_cross(lam: Lambda, u: &Mat2, w: &Mat2) -> Mat2 {
    let (a, b) = (xfrak_coords(u), xfrak_coords(w));
    let cr = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
    xfrak_from_coords(lam, [-cr[0], cr[1], cr[2]])
}

/// Basis of the orthogonal complement of n in 𝔵_Λ.
fn xfrak_complement(n: [f64; 3]) -> [[f64; 3]; 2] {
    let row = [-n[0], n[1], n[2]];
    let mut k = 0;
    for i in 1..3 {
        if row[i].abs() > row[k].abs() {
            k = i;
        }
    }
    let mut out = [[0.0; 3]; 2];
    let mut idx = 0;
    for j in 0..3 {
        if j == k {
            continue;
        }
        let mut v = [0.0; 3];
        v[j] = row[k];
        v[k] = -row[j];
        out[idx] = v;
        idx += 1;
    }
    out
}

/// Pulls q back by the square root A of p. Returns A and the image of q as
/// a determinant-one lift aligned with p ↦ +𝟙.
fn pullback(p: &Point, q: &Point) -> Result<(Isometry, Mat2)> {
    if p.space() != q.space() || p.lambda() != q.lambda() {
        return Err(Error::NotComparable("points live in different spaces".into()));
    }
    let a = point_sqrt(p)?;
    let raw = a.inverse().act_matrix(q.space(), &q.rep());
    let d = raw.det().re;
    if !(d > 0.0) {
        return Err(Error::NotComparable("pulled back point has nonpositive determinant".into()));
    }
    let eps = p.lift_sign();
    Ok((a, raw.scale_real(eps / d.sqrt())))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ArcLength {
    /// Causal class of the joining geodesic; 0 for lightlike or coincident.
    pub sigma: i8,
    pub length: f64,
}

/// Arc length between two points joined by a geodesic, read off from the
/// trace ½ tr(q p⁻¹) of determinant-one lifts.
///
/// For Λ = 1 the result depends on the relative sign of the stored lifts:
/// antipodal lifts give d ∈ (π/2, π].
pub fn arc_length(p: &Point, q: &Point) -> Result<ArcLength> {
    let (_, r) = pullback(p, q)?;
    let space = p.space();
    let lam = p.lambda();
    let cv = 0.5 * r.tr().re;
    let w = r.traceless_part();
    let n = form(space, &w, &w);
    let sigma = sign_with_tol(n, w.frob().max(1e-300));
    if w.frob() <= 1e-13 || sigma == 0 {
        return Ok(ArcLength { sigma: 0, length: 0.0 });
    }
    let root = n.abs().sqrt();
    let d = match exp_sign(space, lam, sigma) {
        Lambda::Pos => root.atan2(cv),
        Lambda::Neg => {
            if cv.abs() < 1.0 - 1e-9 {
                return Err(Error::NotComparable(format!("|½ tr| = {} < 1 on a hyperbolic branch", cv.abs())));
            }
            root.asinh()
        }
        Lambda::Zero => {
            if (cv.abs() - 1.0).abs() > 1e-8 {
                return Err(Error::NotComparable(format!("|½ tr| = {} ≠ 1 in flat space", cv.abs())));
            }
            root
        }
    };
    Ok(ArcLength { sigma, length: d })
}

/// Minkowski arc length from σd² = −det Im(q̄ − p̄) with lifts of
/// nonnegative trace.
pub fn arc_length_flat(p: &Point, q: &Point) -> Result<ArcLength> {
    if p.lambda() != Lambda::Zero || p.space() != Space::X || q.space() != Space::X || q.lambda() != Lambda::Zero {
        return Err(Error::NotComparable("flat formula needs two points of Minkowski space".into()));
    }
    let dm = q.canonical_rep() - p.canonical_rep();
    let im = dm.imag_part();
    let val = -(im[0][0] * im[1][1] - im[0][1] * im[1][0]);
    let sigma = sign_with_tol(val, dm.frob().max(1e-300));
    Ok(ArcLength { sigma, length: if sigma == 0 { 0.0 } else { val.abs().sqrt() } })
}

/// A geodesic t ↦ A▷(c_μ(t)𝟙 + s_μ(t)X), parametrized by arc length
/// unless lightlike.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Geodesic {
    space: Space,
    base: Isometry,
    dir: Mat2,
    sigma: i8,
}

impl Geodesic {
    pub fn from_tangent(t: &Tangent) -> Result<Geodesic> {
        if t.vec().frob() == 0.0 {
            return Err(Error::Degenerate("zero direction".into()));
        }
        let t = t.normalized();
        Ok(Geodesic { space: t.space(), base: t.base(), dir: t.vec(), sigma: causal_type(&t) })
    }

    /// The geodesic from p through q, oriented so that q lies at a
    /// positive parameter.
    pub fn through(p: &Point, q: &Point) -> Result<Geodesic> {
        let (a, r) = pullback(p, q)?;
        let space = p.space();
        let lam = p.lambda();
        let w = r.traceless_part();
        if w.frob() <= 1e-13 {
            return Err(Error::Degenerate("coincident points".into()));
        }
        let n = form(space, &w, &w);
        let sigma = sign_with_tol(n, w.frob());
        let cv = 0.5 * r.tr().re;
        let mu = exp_sign(space, lam, sigma);
        let w = if mu != Lambda::Pos && cv < 0.0 { -w } else { w };
        let dir = if sigma == 0 { w.scale_real(1.0 / cv.abs()) } else { w.scale_real(1.0 / n.abs().sqrt()) };
        let dir = (dir + space.hermitian_conj(&dir)).scale_real(0.5);
        Ok(Geodesic { space, base: a, dir, sigma })
    }

    pub fn space(&self) -> Space {
        self.space
    }

    pub fn lambda(&self) -> Lambda {
        self.dir.lambda()
    }

    pub fn sigma(&self) -> i8 {
        self.sigma
    }

    pub fn base(&self) -> Isometry {
        self.base
    }

    /// Direction at 𝟙 (unit or lightlike).
    pub fn direction(&self) -> Mat2 {
        self.dir
    }

    pub fn tangent(&self) -> Tangent {
        Tangent::with_base(self.space, self.base, self.dir).expect("stored direction is valid")
    }

    pub fn base_point(&self) -> Point {
        self.eval(0.0)
    }

    fn mu(&self) -> Lambda {
        exp_sign(self.space, self.lambda(), self.sigma)
    }

    pub fn eval(&self, t: f64) -> Point {
        let lam = self.lambda();
        let mu = self.mu();
        let m = Mat2::scalar(GC::real(lam, c(mu, t))) + self.dir.scale_real(s(mu, t));
        Point::from_raw(self.space, &self.base.act_matrix(self.space, &m))
    }

    /// Closed geodesics: Λσ = 1 in X_Λ, σ = −1 in Y_Λ.
    pub fn is_closed(&self) -> bool {
        self.mu() == Lambda::Pos
    }

    /// The 2-plane of ℝ⁴ whose projectivization is the geodesic.
    pub fn span(&self) -> [[f64; 4]; 2] {
        let lam = self.lambda();
        let p = unembed(&self.base.act_matrix(self.space, &Mat2::identity(lam)), self.space);
        let d = unembed(&self.base.act_matrix(self.space, &self.dir), self.space);
        [p, d]
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.space() == self.space && span_residual(&self.span(), p.vec()) <= INCIDENCE_TOL
    }

    /// Ideal endpoints A▷(𝟙 ± Y) of a spacelike geodesic of Y_Λ.
    pub fn endpoints(&self) -> Result<[BoundaryPoint; 2]> {
        if self.space != Space::Y || self.sigma != 1 {
            return Err(Error::WrongCausalClass("endpoints need a spacelike geodesic of Y".into()));
        }
        let one = Mat2::identity(self.lambda());
        let plus = self.base.act_matrix(Space::Y, &(one + self.dir));
        let minus = self.base.act_matrix(Space::Y, &(one - self.dir));
        Ok([BoundaryPoint::from_rank_one(&plus)?, BoundaryPoint::from_rank_one(&minus)?])
    }
}

pub fn geodesic_eval(g: &Geodesic, t: f64) -> Point {
    g.eval(t)
}

/// The geodesic given by a 2-plane span(u, w) of ℝ⁴, if it meets the model.
pub fn geodesic_from_span(lam: Lambda, space: Space, u: [f64; 4], w: [f64; 4]) -> Result<Geodesic> {
    let g = Matrix2::new(
        quadric(lam, u, space),
        quadric_bilinear(lam, u, w, space),
        quadric_bilinear(lam, w, u, space),
        quadric(lam, w, space),
    );
    let eig = SymmetricEigen::new(g);
    let (i, j) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let scale = norm4(u) * norm4(w);
    if !(eig.eigenvalues[i] > CAUSAL_TOL * scale) {
        return Err(Error::NoIntersection("line misses the model space".into()));
    }
    let comb = |k: usize| {
        let e = eig.eigenvectors.column(k);
        let mut v = [0.0; 4];
        for m in 0..4 {
            v[m] = e[0] * u[m] + e[1] * w[m];
        }
        v
    };
    let p = Point::from_vec(lam, space, comb(i))?;
    let a = point_sqrt(&p)?;
    let d = a.inverse().act_matrix(space, &embed(lam, comb(j), space)).traceless_part();
    let d = (d + space.hermitian_conj(&d)).scale_real(0.5);
    Geodesic::from_tangent(&Tangent::with_base(space, a, d)?)
}

/// A geodesic plane of X_Λ: all geodesics through base▷𝟙 orthogonal to the
/// normal N.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Plane {
    base: Isometry,
    normal: Mat2,
    sigma: i8,
}

impl Plane {
    pub fn base(&self) -> Isometry {
        self.base
    }

    pub fn lambda(&self) -> Lambda {
        self.normal.lambda()
    }

    /// Normal vector at 𝟙.
    pub fn normal(&self) -> Mat2 {
        self.normal
    }

    pub fn normal_tangent(&self) -> Tangent {
        Tangent::with_base(Space::X, self.base, self.normal).expect("stored normal is valid")
    }

    pub fn sigma(&self) -> i8 {
        self.sigma
    }

    pub fn is_lightlike(&self) -> bool {
        self.sigma == 0
    }

    pub fn base_point(&self) -> Point {
        self.base.act(&Point::origin(self.lambda(), Space::X))
    }

    /// Basis X₁, X₂ of N⊥ at 𝟙.
    pub fn tangent_basis(&self) -> [Mat2; 2] {
        let lam = self.lambda();
        xfrak_complement(xfrak_coords(&self.normal)).map(|v| xfrak_from_coords(lam, v))
    }

    /// A▷exp(t₁X₁ + t₂X₂).
    pub fn eval(&self, t1: f64, t2: f64) -> Point {
        let [x1, x2] = self.tangent_basis();
        let v = x1.scale_real(t1) + x2.scale_real(t2);
        let e = v.exp_traceless(0.5);
        Point::from_raw(Space::X, &self.base.act_matrix(Space::X, &(e * e.circ())))
    }

    /// Linear form on ℝ⁴ vanishing on the plane.
    pub fn covector(&self) -> [f64; 4] {
        let n = xfrak_coords(&self.normal);
        let f0 = [-n[0], 0.0, n[1], n[2]];
        let m = self.base.inverse().ambient_matrix(Space::X);
        let mut f = [0.0; 4];
        for j in 0..4 {
            for i in 0..4 {
                f[j] += f0[i] * m[i][j];
            }
        }
        let k = norm4(f);
        f.map(|x| x / k)
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.space() == Space::X && incident(self.covector(), p.vec())
    }

    /// The plane of X_Λ cut out by a linear form, if it meets X_Λ.
    pub fn from_covector(lam: Lambda, f: [f64; 4]) -> Result<Plane> {
        let basis = null_space(&[f], 1e-12);
        if basis.len() != 3 {
            return Err(Error::DegenerateNormal("zero covector".into()));
        }
        let mut g = Matrix3::<f64>::zeros();
        for i in 0..3 {
            for j in 0..3 {
                g[(i, j)] = quadric_bilinear(lam, basis[i], basis[j], Space::X);
            }
        }
        let eig = SymmetricEigen::new(g);
        let mut k = 0;
        for i in 1..3 {
            if eig.eigenvalues[i] > eig.eigenvalues[k] {
                k = i;
            }
        }
        if !(eig.eigenvalues[k] > CAUSAL_TOL) {
            return Err(Error::NoIntersection("plane misses X".into()));
        }
        let e = eig.eigenvectors.column(k);
        let mut v = [0.0; 4];
        for m in 0..4 {
            v[m] = e[0] * basis[0][m] + e[1] * basis[1][m] + e[2] * basis[2][m];
        }
        let p = Point::from_vec(lam, Space::X, v)?;
        let a = point_sqrt(&p)?;
        let m = a.ambient_matrix(Space::X);
        let mut gcov = [0.0; 4];
        for j in 0..4 {
            for i in 0..4 {
                gcov[j] += f[i] * m[i][j];
            }
        }
        let normal = xfrak_from_coords(lam, [-gcov[0], gcov[2], gcov[3]]);
        let k = normal.frob();
        plane_from_tangent(&Tangent::with_base(Space::X, a, normal.scale_real(1.0 / k))?)
    }

    /// The plane through three points of X_Λ. A normal with
    /// |⟨N,N⟩| ≤ tol·|N|² counts as lightlike.
    pub fn through_points(pts: [&Point; 3], tol: f64) -> Result<Plane> {
        let lam = pts[0].lambda();
        let f = cross4(pts[0].vec(), pts[1].vec(), pts[2].vec());
        if norm4(f) <= 1e-12 * pts.iter().map(|p| norm4(p.vec())).product::<f64>() {
            return Err(Error::Degenerate("points are collinear".into()));
        }
        let mut pl = Plane::from_covector(lam, f)?;
        let n = xfrak_coords(&pl.normal);
        if xform3(n, n).abs() <= tol * (n[0] * n[0] + n[1] * n[1] + n[2] * n[2]) {
            pl.sigma = 0;
        }
        Ok(pl)
    }

    pub fn to_projective(&self) -> ProjectivePlane {
        ProjectivePlane { space: Space::X, lambda: self.lambda(), covector: self.covector() }
    }
}

fn incident(f: [f64; 4], v: [f64; 4]) -> bool {
    dot4(f, v).abs() <= INCIDENCE_TOL * norm4(f) * norm4(v)
}

fn plane_from_tangent(n: &Tangent) -> Result<Plane> {
    if n.space() != Space::X {
        return Err(Error::DegenerateNormal("planes are built in X".into()));
    }
    if n.vec().frob() <= 1e-300 {
        return Err(Error::DegenerateNormal("zero normal".into()));
    }
    let n = n.normalized();
    Ok(Plane { base: n.base(), normal: n.vec(), sigma: causal_type(&n) })
}

/// The plane through `base` with normal `n` (a tangent vector at `base`).
pub fn plane_from_normal(base: &Point, n: &Tangent) -> Result<Plane> {
    if n.vec().frob() <= 1e-300 {
        return Err(Error::DegenerateNormal("zero normal".into()));
    }
    if !n.base_point().approx_eq(base, 1e-9) {
        return Err(Error::BaseMismatch("normal is not based at the given point".into()));
    }
    plane_from_tangent(n)
}

pub fn plane_contains(p: &Plane, x: &Point) -> bool {
    p.contains(x)
}

/// The spacelike geodesic where two lightlike planes meet.
pub fn intersect_lightlike_planes(p1: &Plane, p2: &Plane) -> Result<Geodesic> {
    if !p1.is_lightlike() || !p2.is_lightlike() {
        return Err(Error::NotLightlike("both planes must be lightlike".into()));
    }
    let ns = null_space(&[p1.covector(), p2.covector()], 1e-9);
    if ns.len() != 2 {
        return Err(Error::NoIntersection("planes coincide".into()));
    }
    geodesic_from_span(p1.lambda(), Space::X, ns[0], ns[1])
}

/// The two lightlike planes through a spacelike geodesic of X_Λ.
pub fn spacelike_geodesic_to_plane_pair(g: &Geodesic) -> Result<(Plane, Plane)> {
    if g.space() != Space::X || g.sigma() != 1 {
        return Err(Error::WrongCausalClass("need a spacelike geodesic of X".into()));
    }
    let lam = g.lambda();
    let x = xfrak_coords(&g.direction());
    let b = xfrak_complement(x);
    let gram = Matrix2::new(xform3(b[0], b[0]), xform3(b[0], b[1]), xform3(b[1], b[0]), xform3(b[1], b[1]));
    let eig = SymmetricEigen::new(gram);
    let (i, j) = if eig.eigenvalues[0] >= eig.eigenvalues[1] { (0, 1) } else { (1, 0) };
    let (lp, lm) = (eig.eigenvalues[i], eig.eigenvalues[j]);
    if !(lp > 0.0 && lm < 0.0) {
        return Err(Error::WrongCausalClass("orthogonal complement is not Lorentzian".into()));
    }
    let vec = |k: usize, w: f64| {
        let e = eig.eigenvectors.column(k);
        [0, 1, 2].map(|m| w * (e[0] * b[0][m] + e[1] * b[1][m]))
    };
    let (ep, em) = (vec(i, 1.0 / lp.sqrt()), vec(j, 1.0 / (-lm).sqrt()));
    let n1 = [0, 1, 2].map(|m| ep[m] + em[m]);
    let n2 = [0, 1, 2].map(|m| ep[m] - em[m]);
    let mk = |n: [f64; 3]| {
        let t = Tangent::with_base(Space::X, g.base(), xfrak_from_coords(lam, n))?;
        Ok::<Plane, Error>(Plane { base: t.base(), normal: t.vec(), sigma: 0 })
    };
    Ok((mk(n1)?, mk(n2)?))
}

/// Column space of a rank-one real 2×2 matrix.
fn column_space(m: [[f64; 2]; 2]) -> [f64; 2] {
    let c0 = [m[0][0], m[1][0]];
    let c1 = [m[0][1], m[1][1]];
    if c0[0].hypot(c0[1]) >= c1[0].hypot(c1[1]) {
        c0
    } else {
        c1
    }
}

/// The normals ℓ[[0,0],[1,0]], ℓ[[0,−1],[0,0]], ℓ[[1,−1],[1,−1]] of the
/// three standard lightlike planes through 𝟙.
pub fn standard_normals(lam: Lambda) -> [Mat2; 3] {
    [
        Mat2::ell(lam, [[0.0, 0.0], [1.0, 0.0]]),
        Mat2::ell(lam, [[0.0, -1.0], [0.0, 0.0]]),
        Mat2::ell(lam, [[1.0, -1.0], [1.0, -1.0]]),
    ]
}

/// Pulls the covector f back to 𝟙 through A and reads off the normal there.
pub(crate) fn normal_at(a: &Isometry, f: [f64; 4]) -> Mat2 {
    let m = a.ambient_matrix(Space::X);
    let mut g = [0.0; 4];
    for j in 0..4 {
        for i in 0..4 {
            g[j] += f[i] * m[i][j];
        }
    }
    xfrak_from_coords(a.lambda(), [-g[0], g[2], g[3]])
}

/// The common point of three lightlike planes, and an isometry taking it to
/// 𝟙 and the planes to the three standard ones, in order.
pub fn common_point_three_planes(p1: &Plane, p2: &Plane, p3: &Plane) -> Result<(Point, Isometry)> {
    let planes = [p1, p2, p3];
    if planes.iter().any(|p| !p.is_lightlike()) {
        return Err(Error::NotLightlike("all three planes must be lightlike".into()));
    }
    let lam = p1.lambda();
    let fs = planes.map(|p| p.covector());
    let ns = null_space(&fs, 1e-8);
    if ns.len() != 1 {
        return Err(Error::NoCommonPoint(format!("common subspace has dimension {}", ns.len())));
    }
    let pt = Point::from_vec(lam, Space::X, ns[0])
        .or_else(|_| Point::from_vec(lam, Space::X, ns[0].map(|x| -x)))
        .map_err(|_| Error::NoCommonPoint("common line misses X".into()))?;
    let cq = point_sqrt(&pt)?;
    let u = fs.map(|f| column_space(normal_at(&cq, f).imag_part()));
    // λu₂ + μu₁ = u₃
    let det = u[1][0] * u[0][1] - u[0][0] * u[1][1];
    let scale = u[0][0].hypot(u[0][1]) * u[1][0].hypot(u[1][1]);
    if det.abs() <= 1e-12 * scale {
        return Err(Error::NoCommonPoint("normals are not independent".into()));
    }
    let l = (u[2][0] * u[0][1] - u[0][0] * u[2][1]) / det;
    let m = (u[1][0] * u[2][1] - u[2][0] * u[1][1]) / det;
    let um = Mat2::real(lam, [[l * u[1][0], m * u[0][0]], [l * u[1][1], m * u[0][1]]]);
    let uiso = Isometry::new(um).map_err(|_| Error::NoCommonPoint("degenerate normal frame".into()))?;
    Ok((pt, cq.compose(&uiso).inverse()))
}

/// A point of ∂∞Y_Λ: a vector v ∈ ℂ_Λ² with v v† ≠ 0, up to unit scale.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryPoint {
    v: [GC; 2],
}

impl BoundaryPoint {
    pub fn new(v: [GC; 2]) -> Result<BoundaryPoint> {
        assert_eq!(v[0].lambda, v[1].lambda, "mixed curvature signs");
        let b = BoundaryPoint { v };
        let m = b.matrix();
        if m.frob() <= 1e-300 || !m.is_finite() {
            return Err(Error::Degenerate("v v† vanishes".into()));
        }
        Ok(b.canonical())
    }

    /// [z : 1].
    pub fn from_gc(z: GC) -> BoundaryPoint {
        BoundaryPoint { v: [z, GC::one(z.lambda)] }
    }

    pub fn infinity(lam: Lambda) -> BoundaryPoint {
        BoundaryPoint { v: [GC::one(lam), GC::zero(lam)] }
    }

    pub fn zero(lam: Lambda) -> BoundaryPoint {
        BoundaryPoint { v: [GC::zero(lam), GC::one(lam)] }
    }

    pub fn one(lam: Lambda) -> BoundaryPoint {
        BoundaryPoint { v: [GC::one(lam), GC::one(lam)] }
    }

    fn canonical(self) -> BoundaryPoint {
        let [a, b] = self.v;
        if b.is_unit() {
            let bi = b.inv().expect("unit");
            BoundaryPoint { v: [a * bi, GC::one(b.lambda)] }
        } else if a.is_unit() {
            let ai = a.inv().expect("unit");
            BoundaryPoint { v: [GC::one(a.lambda), b * ai] }
        } else {
            let n = (a.norm_sq_coords() + b.norm_sq_coords()).sqrt();
            BoundaryPoint { v: [a.scale(1.0 / n), b.scale(1.0 / n)] }
        }
    }

    pub fn lambda(&self) -> Lambda {
        self.v[0].lambda
    }

    pub fn vector(&self) -> [GC; 2] {
        self.v
    }

    /// v v†.
    pub fn matrix(&self) -> Mat2 {
        let [a, b] = self.v;
        Mat2::new(a * a.conj(), a * b.conj(), b * a.conj(), b * b.conj())
    }

    /// Null vector in the ℝ⁴ coordinates of Y_Λ.
    pub fn vec4(&self) -> [f64; 4] {
        unembed(&self.matrix(), Space::Y)
    }

    /// Recovers v from a rank-one †-hermitian matrix.
    pub fn from_rank_one(m: &Mat2) -> Result<BoundaryPoint> {
        let (d0, d1) = (m.a.re.abs(), m.d.re.abs());
        let n = m.frob();
        let col = if d0 >= d1 { [m.a, m.c] } else { [m.b, m.d] };
        if d0.max(d1) <= 1e-12 * n {
            return Err(Error::Degenerate("rank-one matrix with vanishing diagonal".into()));
        }
        BoundaryPoint::new(col)
    }

    pub fn from_null_vector(lam: Lambda, y: [f64; 4]) -> Result<BoundaryPoint> {
        let q = quadric(lam, y, Space::Y);
        let n = norm4(y);
        if q.abs() > 1e-8 * n * n {
            return Err(Error::Degenerate(format!("vector is not null (det = {q})")));
        }
        BoundaryPoint::from_rank_one(&embed(lam, y, Space::Y))
    }

    pub fn proj_dist(&self, o: &BoundaryPoint) -> f64 {
        proj_dist4(self.vec4(), o.vec4())
    }

    pub fn approx_eq(&self, o: &BoundaryPoint, tol: f64) -> bool {
        self.lambda() == o.lambda() && self.proj_dist(o) <= tol
    }
}

pub fn act_boundary(a: &Isometry, b: &BoundaryPoint) -> BoundaryPoint {
    BoundaryPoint::new(a.rep().apply(b.v)).expect("isometries preserve the boundary")
}

fn minor(v: [GC; 2], w: [GC; 2]) -> GC {
    v[0] * w[1] - v[1] * w[0]
}

/// The isometry B with B▷y₁ = ∞, B▷y₂ = 0, B▷y₃ = 1.
pub fn boundary_normalize(y1: &BoundaryPoint, y2: &BoundaryPoint, y3: &BoundaryPoint) -> Result<Isometry> {
    let lam = y1.lambda();
    let (v1, v2, v3) = (y1.v, y2.v, y3.v);
    let m12 = minor(v1, v2);
    let m13 = minor(v1, v3);
    let m32 = minor(v3, v2);
    for (m, name) in [(m12, "12"), (m13, "13"), (m32, "23")] {
        if !m.is_unit() {
            return Err(Error::NotSpacelikeConnected(format!("minor {name} = {m} is a zero divisor")));
        }
    }
    if m12.modulus_sq() * m13.modulus_sq() * m32.modulus_sq() < 0.0 {
        return Err(Error::NotSpacelikeConnected("minors have moduli of inconsistent sign".into()));
    }
    let cols = Mat2::new(v1[0], v2[0], v1[1], v2[1]);
    let b0 = cols.inv().map_err(|e| Error::NotSpacelikeConnected(e.to_string()))?;
    let w = b0.apply(v3);
    let zz = w[0].checked_div(w[1]).map_err(|e| Error::NotSpacelikeConnected(e.to_string()))?;
    let bd = Mat2::diag(GC::one(lam), zz);
    Isometry::new(bd * b0).map_err(|e| Error::NotSpacelikeConnected(e.to_string()))
}

/// cr(y₁, y₂, y₃, y₄) = z where B▷y₄ = [z : 1] for the normalizing B.
pub fn cross_ratio(y1: &BoundaryPoint, y2: &BoundaryPoint, y3: &BoundaryPoint, y4: &BoundaryPoint) -> Result<GC> {
    let b = boundary_normalize(y1, y2, y3)?;
    let w = b.rep().apply(y4.v);
    let z = w[0].checked_div(w[1]).map_err(|_| Error::Degenerate("fourth point is not spacelike connected to ∞".into()))?;
    let one = GC::one(z.lambda);
    if !z.is_unit() || !(z - one).is_unit() {
        return Err(Error::Degenerate(format!("cross ratio {z} is not in ℂ_Λ^× ∖ {{1}}")));
    }
    Ok(z)
}

/// A projective plane {v : f(v) = 0} in the ℝ⁴ coordinates of a space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjectivePlane {
    pub space: Space,
    pub lambda: Lambda,
    pub covector: [f64; 4],
}

impl ProjectivePlane {
    pub fn contains(&self, p: &Point) -> bool {
        p.space() == self.space && incident(self.covector, p.vec())
    }

    pub fn contains_boundary(&self, b: &BoundaryPoint) -> bool {
        self.space == Space::Y && incident(self.covector, b.vec4())
    }

    pub fn contains_vec(&self, v: [f64; 4]) -> bool {
        incident(self.covector, v)
    }

    pub fn approx_eq(&self, o: &ProjectivePlane, tol: f64) -> bool {
        self.space == o.space && proj_dist4(self.covector, o.covector) <= tol
    }
}

/// Objects exchanged by projective duality.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Dualizable {
    Point(Point),
    Plane(ProjectivePlane),
    Boundary(BoundaryPoint),
    Geodesic(Geodesic),
}

/// The plane of the other space dual to a point.
pub fn dual_point(p: &Point) -> ProjectivePlane {
    ProjectivePlane { space: p.space().dual(), lambda: p.lambda(), covector: eta(p.vec()) }
}

/// The lightlike plane of X_Λ dual to a boundary point of Y_Λ.
pub fn dual_boundary(b: &BoundaryPoint) -> Result<Plane> {
    Plane::from_covector(b.lambda(), eta(b.vec4()))
}

pub fn dual_plane(p: &ProjectivePlane) -> Result<Dualizable> {
    let target = p.space.dual();
    let v = eta(p.covector);
    let q = quadric(p.lambda, v, target);
    let n = norm4(v);
    if q > 1e-9 * n * n {
        return Ok(Dualizable::Point(Point::from_vec(p.lambda, target, v)?));
    }
    if target == Space::Y && q.abs() <= 1e-9 * n * n {
        return Ok(Dualizable::Boundary(BoundaryPoint::from_null_vector(p.lambda, v)?));
    }
    Err(Error::WrongCausalClass("plane is not spacelike".into()))
}

/// The geodesic p* ∩ q* of the other space, for any two points p, q of g.
pub fn dual_geodesic(g: &Geodesic) -> Result<Geodesic> {
    if g.sigma() != 1 {
        return Err(Error::WrongCausalClass("only spacelike geodesics are dualized".into()));
    }
    let [u, w] = g.span();
    let ns = null_space(&[eta(u), eta(w)], 1e-9);
    if ns.len() != 2 {
        return Err(Error::Degenerate("geodesic span is degenerate".into()));
    }
    geodesic_from_span(g.lambda(), g.space().dual(), ns[0], ns[1])
}

pub fn dualize(q: &Dualizable) -> Result<Dualizable> {
    match q {
        Dualizable::Point(p) => Ok(Dualizable::Plane(dual_point(p))),
        Dualizable::Plane(p) => dual_plane(p),
        Dualizable::Boundary(b) => Ok(Dualizable::Plane(dual_boundary(b)?.to_projective())),
        Dualizable::Geodesic(g) => Ok(Dualizable::Geodesic(dual_geodesic(g)?)),
    }
}

/// P·A·P with P = [[0,1],[1,0]]: the isometry of the dual space that
/// corresponds to A under duality.
pub fn dual_isometry(a: &Isometry) -> Isometry {
    let m = a.rep();
    Isometry::new(Mat2::new(m.d, m.c, m.b, m.a)).expect("conjugate of an isometry")
}

/// The angle φ of the rotation U = a + b·X̂ (resp. a + ℓbŶ) about g.
pub fn stabilizer_angle(g: &Geodesic, a: f64, b: f64) -> Result<f64> {
    if g.sigma() == 0 {
        return Err(Error::WrongCausalClass("lightlike geodesic".into()));
    }
    if b == 0.0 {
        return Ok(0.0);
    }
    let mu = match g.space() {
        Space::X => Lambda::from_sign(-g.sigma()),
        Space::Y => g.lambda().times(g.sigma()),
    };
    Ok(2.0 * ct_inv_clamped(mu, a / b))
}

/// A·exp(θX/2)·U·A⁻¹: translation by θ along g composed with the rotation U
/// fixing g pointwise.
pub fn stabilizer_element(g: &Geodesic, theta: f64, a: f64, b: f64) -> Result<Isometry> {
    if g.sigma() == 0 {
        return Err(Error::WrongCausalClass("stabilizers of lightlike geodesics are not supported".into()));
    }
    let lam = g.lambda();
    let sig = g.sigma() as f64;
    let dir = g.direction();
    let one = Mat2::identity(lam);
    let (u, detu) = match g.space() {
        Space::X => (one.scale_real(a) + Mat2::real(lam, dir.imag_part()).scale_real(b), a * a - sig * b * b),
        Space::Y => (one.scale_real(a) + dir.scale(GC::ell(lam)).scale_real(b), a * a + lam.value() * sig * b * b),
    };
    if detu.abs() <= 1e-12 * (a * a + b * b) {
        return Err(Error::Inadmissible(format!("(a, b) = ({a}, {b}) gives a singular rotation")));
    }
    let mu = exp_sign(g.space(), lam, g.sigma());
    let e = Mat2::scalar(GC::real(lam, c(mu, theta / 2.0))) + dir.scale_real(s(mu, theta / 2.0));
    let base = g.base();
    let m = base.rep() * e * u * base.inverse().rep();
    Isometry::new(m).map_err(|e| Error::Inadmissible(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matmodel::tests::{iso, lam, point};
    use proptest::prelude::*;

    fn diag_x(l: Lambda) -> Tangent {
        Tangent::x_at_identity(l, [[1.0, 0.0], [0.0, -1.0]]).unwrap()
    }

    fn lift(l: Lambda, a: &Isometry) -> Option<Isometry> {
        let m = Mat2::from_parts(l, a.rep().real_part(), a.rep().imag_part());
        // keep the lift well conditioned
        if m.det().modulus_sq().abs() < 1e-4 * m.frob().powi(4) {
            return None;
        }
        Isometry::new(m).ok()
    }

    #[test]
    fn cross4_is_orthogonal() {
        let (a, b, c) = ([1.0, 2.0, 0.5, -1.0], [0.3, -0.2, 1.0, 2.0], [2.0, 0.0, 1.0, 1.0]);
        let f = cross4(a, b, c);
        for v in [a, b, c] {
            assert!(dot4(f, v).abs() < 1e-12);
        }
    }

    #[test]
    fn arc_length_along_geodesics() {
        for l in Lambda::ALL {
            let g = Geodesic::from_tangent(&diag_x(l)).unwrap();
            assert!(g.eval(0.0).approx_eq(&Point::origin(l, Space::X), 1e-15));
            for t in [0.3, 1.1, 2.5] {
                let d = arc_length(&g.eval(0.0), &g.eval(t)).unwrap();
                assert_eq!(d.sigma, 1);
                assert!((d.length - t).abs() < 1e-9, "{l} {t} {:?}", d);
            }
            let p = g.eval(0.4);
            assert_eq!(arc_length(&p, &p).unwrap(), ArcLength { sigma: 0, length: 0.0 });
        }
    }

    #[test]
    fn de_sitter_spacelike_geodesics_close() {
        let g = Geodesic::from_tangent(&diag_x(Lambda::Pos)).unwrap();
        assert!(g.is_closed());
        for t in [0.1, 0.9, 2.0] {
            assert!(g.eval(t).approx_eq(&g.eval(t + std::f64::consts::PI), 1e-12));
            assert!(g.eval(t).approx_eq(&g.eval(t + 2.0 * std::f64::consts::PI), 1e-12));
        }
        assert!(!Geodesic::from_tangent(&diag_x(Lambda::Neg)).unwrap().is_closed());
    }

    #[test]
    fn hyperbolic_geodesic_matches_cosh_form() {
        let l = Lambda::Pos;
        let y = Mat2::from_parts(l, [[0.6, 0.8], [0.8, -0.6]], [[0.0; 2]; 2]);
        let g = Geodesic::from_tangent(&Tangent::at_identity(Space::Y, y).unwrap()).unwrap();
        let t: f64 = 0.8;
        let want = Mat2::identity(l).scale_real(t.cosh()) + y.scale_real(t.sinh());
        assert!(g.eval(t).approx_eq(&Point::new(Space::Y, want).unwrap(), 1e-12));
        let [a, b] = g.endpoints().unwrap();
        // translations along g fix both endpoints
        let tr = stabilizer_element(&g, 0.7, 1.0, 0.0).unwrap();
        assert!(act_boundary(&tr, &a).approx_eq(&a, 1e-12));
        assert!(act_boundary(&tr, &b).approx_eq(&b, 1e-12));
    }

    #[test]
    fn lightlike_plane_contains_geodesic() {
        for l in Lambda::ALL {
            let n = Tangent::x_at_identity(l, [[0.0, 0.0], [1.0, 0.0]]).unwrap();
            let o = Point::origin(l, Space::X);
            let p = plane_from_normal(&o, &n).unwrap();
            assert!(p.is_lightlike());
            assert!(p.contains(&o));
            let g = Geodesic::from_tangent(&diag_x(l)).unwrap();
            for t in [0.2, 1.0, -0.7] {
                assert!(p.contains(&g.eval(t)));
            }
            let zero = Tangent::x_at_identity(l, [[0.0, 0.0], [0.0, 0.0]]).unwrap();
            assert!(matches!(plane_from_normal(&o, &zero), Err(Error::DegenerateNormal(_))));
        }
    }

    #[test]
    fn standard_lightlike_pair_meets_in_diagonal() {
        for l in Lambda::ALL {
            let o = Point::origin(l, Space::X);
            let [n1, n2, _] = standard_normals(l);
            let p1 = plane_from_normal(&o, &Tangent::at_identity(Space::X, n1).unwrap()).unwrap();
            let p2 = plane_from_normal(&o, &Tangent::at_identity(Space::X, n2).unwrap()).unwrap();
            let g = intersect_lightlike_planes(&p1, &p2).unwrap();
            assert_eq!(g.sigma(), 1);
            let want = Geodesic::from_tangent(&diag_x(l)).unwrap();
            for t in [0.0, 0.5, 1.3] {
                assert!(g.contains(&want.eval(t)), "{l}");
            }
            let tl = plane_from_normal(&o, &diag_x(l)).unwrap();
            assert!(matches!(intersect_lightlike_planes(&p1, &tl), Err(Error::NotLightlike(_))));
        }
    }

    #[test]
    fn standard_triple() {
        for l in Lambda::ALL {
            let o = Point::origin(l, Space::X);
            let ps = standard_normals(l).map(|n| plane_from_normal(&o, &Tangent::at_identity(Space::X, n).unwrap()).unwrap());
            let (p, a) = common_point_three_planes(&ps[0], &ps[1], &ps[2]).unwrap();
            assert!(p.approx_eq(&o, 1e-12));
            assert!(a.approx_eq(&Isometry::identity(l), 1e-9), "{l} {:?}", a);
        }
    }

    #[test]
    fn boundary_standard_points() {
        for l in Lambda::ALL {
            let b = boundary_normalize(&BoundaryPoint::infinity(l), &BoundaryPoint::zero(l), &BoundaryPoint::one(l)).unwrap();
            assert!(b.approx_eq(&Isometry::identity(l), 1e-15));
            let z = GC::new(l, -0.4, 0.3);
            let cr = cross_ratio(&BoundaryPoint::infinity(l), &BoundaryPoint::zero(l), &BoundaryPoint::one(l), &BoundaryPoint::from_gc(z)).unwrap();
            assert_eq!(cr, z);
        }
    }

    #[test]
    fn split_complex_zero_divisor_breaks_connectivity() {
        let l = Lambda::Neg;
        let y3 = BoundaryPoint::from_gc(GC::new(l, 1.0, 1.0));
        let r = boundary_normalize(&BoundaryPoint::infinity(l), &BoundaryPoint::zero(l), &y3);
        assert!(matches!(r, Err(Error::NotSpacelikeConnected(_))));
    }

    #[test]
    fn cross_ratio_permutation() {
        for l in Lambda::ALL {
            let z = GC::new(l, -0.4, 0.3);
            let (inf, zero, one, zp) = (BoundaryPoint::infinity(l), BoundaryPoint::zero(l), BoundaryPoint::one(l), BoundaryPoint::from_gc(z));
            let one_gc = GC::one(l);
            let want = (z - one_gc).checked_div(z).unwrap();
            let got = cross_ratio(&zero, &one, &inf, &zp).unwrap();
            assert!(got.dist(want) < 1e-12, "{l} {got} {want}");
        }
    }

    #[test]
    fn duality_of_infinity_is_lightlike_through_origin() {
        for l in Lambda::ALL {
            let p = dual_boundary(&BoundaryPoint::infinity(l)).unwrap();
            assert!(p.is_lightlike());
            assert!(p.contains(&Point::origin(l, Space::X)));
            // the plane is the one with normal ℓ[[0,0],[1,0]] at 𝟙
            let std = plane_from_normal(&Point::origin(l, Space::X), &Tangent::at_identity(Space::X, standard_normals(l)[0]).unwrap()).unwrap();
            assert!(p.to_projective().approx_eq(&std.to_projective(), 1e-12), "{l}");
        }
    }

    #[test]
    fn dual_isometry_is_equivariant() {
        let l = Lambda::Neg;
        let a = Isometry::new(Mat2::from_parts(l, [[1.0, 0.3], [-0.2, 0.8]], [[0.1, 0.5], [0.4, -0.3]])).unwrap();
        let x = Point::from_vec(l, Space::X, [0.2, 1.0, 0.1, -0.3]).unwrap();
        let plane = dual_point(&a.act(&x));
        let moved = dual_point(&x);
        let b = dual_isometry(&a);
        // image of x* under PAP is (A▷x)*
        let pts: Vec<Point> = (0..3)
            .map(|k| {
                let ns = null_space(&[moved.covector], 1e-12);
                let v = [0, 1, 2, 3].map(|m| ns[0][m] + (k as f64) * ns[1][m] + 0.3 * ns[2][m]);
                Point::from_vec(l, Space::Y, v).or_else(|_| Point::from_vec(l, Space::Y, [0, 1, 2, 3].map(|m| 3.0 * ns[0][m] + ns[1][m] - (k as f64) * ns[2][m])))
            })
            .filter_map(|p| p.ok())
            .collect();
        for p in pts {
            assert!(moved.contains(&p));
            assert!(plane.contains(&b.act(&p)));
        }
    }

    #[test]
    fn stabilizer_translation_and_angle() {
        for l in Lambda::ALL {
            let g = Geodesic::from_tangent(&diag_x(l)).unwrap();
            let id = stabilizer_element(&g, 0.0, 1.0, 0.0).unwrap();
            assert!(id.approx_eq(&Isometry::identity(l), 1e-15));
            let tr = stabilizer_element(&g, 0.6, 1.0, 0.0).unwrap();
            assert!(tr.act(&g.eval(0.0)).approx_eq(&g.eval(0.6), 1e-12));
            let d = arc_length(&g.eval(0.0), &tr.act(&g.eval(0.0))).unwrap();
            assert!((d.length - 0.6).abs() < 1e-9);
            // σ = 1 on 𝔵: ct_{−1}⁻¹, so |a/b| > 1
            let phi: f64 = 0.8;
            let (a, b) = ((phi / 2.0).cosh(), (phi / 2.0).sinh());
            assert!((stabilizer_angle(&g, a, b).unwrap() - phi).abs() < 1e-12);
            let rot = stabilizer_element(&g, 0.3, a, b).unwrap();
            for t in [0.0, 0.5, -1.0] {
                assert!(rot.act(&g.eval(t)).approx_eq(&g.eval(t + 0.3), 1e-12));
            }
            assert!(matches!(stabilizer_element(&g, 0.3, 1.0, 1.0), Err(Error::Inadmissible(_))));
        }
    }

    proptest! {
        #[test]
        fn arc_length_random_geodesics(l in lam(), m in proptest::array::uniform3(-1.0..1.0f64), t in 0.05..1.4f64) {
            let x = Mat2::ell(l, [[m[0], m[1]], [m[2], -m[0]]]);
            let tg = Tangent::at_identity(Space::X, x).unwrap();
            prop_assume!(tg.norm_sq().abs() > 0.05);
            let g = Geodesic::from_tangent(&tg).unwrap();
            let d = arc_length(&g.eval(0.0), &g.eval(t)).unwrap();
            prop_assert_eq!(d.sigma, g.sigma());
            prop_assert!((d.length - t).abs() < 1e-9);
            if l == Lambda::Zero {
                let f = arc_length_flat(&g.eval(0.0), &g.eval(t)).unwrap();
                prop_assert_eq!(f.sigma, d.sigma);
                prop_assert!((f.length - d.length).abs() < 1e-9);
            }
        }

        #[test]
        fn arc_length_y(l in lam(), m in proptest::array::uniform3(-1.0..1.0f64), t in 0.05..1.4f64) {
            let y = Mat2::from_parts(l, [[m[0], m[1]], [m[1], -m[0]]], [[0.0, m[2]], [-m[2], 0.0]]);
            let tg = Tangent::at_identity(Space::Y, y).unwrap();
            prop_assume!(tg.norm_sq().abs() > 0.05);
            let g = Geodesic::from_tangent(&tg).unwrap();
            let d = arc_length(&g.eval(0.0), &g.eval(t)).unwrap();
            prop_assert_eq!(d.sigma, g.sigma());
            prop_assert!((d.length - t).abs() < 1e-9);
        }

        #[test]
        fn through_hits_second_point(l in lam(), sp in prop_oneof![Just(Space::X), Just(Space::Y)], p in point(Lambda::Pos, Space::X), q in point(Lambda::Pos, Space::X)) {
            let p = Point::from_vec(l, sp, p.vec());
            let q = Point::from_vec(l, sp, q.vec());
            if let (Ok(p), Ok(q)) = (p, q) {
                if let (Ok(g), Ok(d)) = (Geodesic::through(&p, &q), arc_length(&p, &q)) {
                    prop_assert!(g.contains(&p) && g.contains(&q));
                    if d.sigma != 0 {
                        prop_assert!(g.eval(d.length).approx_eq(&q, 1e-8));
                    }
                }
            }
        }

        #[test]
        fn plane_membership_matches_exp(l in lam(), n in proptest::array::uniform3(-1.0..1.0f64), t in proptest::array::uniform2(-1.0..1.0f64), a in iso(Lambda::Pos)) {
            let a = match lift(l, &a) { Some(a) => a, None => return Ok(()) };
            let nv = xfrak_from_coords(l, n);
            prop_assume!(nv.frob() > 0.1);
            let tg = Tangent::with_base(Space::X, a, nv).unwrap();
            let plane = plane_from_normal(&tg.base_point(), &tg).unwrap();
            let p = plane.eval(t[0], t[1]);
            prop_assert!(plane.contains(&p));
            prop_assert!(plane.contains(&tg.base_point()));
            let off = Geodesic::from_tangent(&tg);
            if let Ok(g) = off {
                if g.sigma() != 0 {
                    prop_assert!(!plane.contains(&g.eval(0.3)));
                }
            }
        }

        #[test]
        fn plane_pair_round_trip(l in lam(), a in iso(Lambda::Pos), m in proptest::array::uniform3(-1.0..1.0f64)) {
            let a = match lift(l, &a) { Some(a) => a, None => return Ok(()) };
            let x = xfrak_from_coords(l, m);
            let tg = Tangent::with_base(Space::X, a, x).unwrap();
            prop_assume!(tg.norm_sq() > 0.05);
            let g = Geodesic::from_tangent(&tg).unwrap();
            let (p1, p2) = spacelike_geodesic_to_plane_pair(&g).unwrap();
            prop_assert!(p1.is_lightlike() && p2.is_lightlike());
            let h = intersect_lightlike_planes(&p1, &p2).unwrap();
            for t in [0.0, 0.4, -0.9] {
                prop_assert!(h.contains(&g.eval(t)));
            }
        }

        #[test]
        fn intersection_equivariance(l in lam(), a in iso(Lambda::Pos)) {
            let a = match lift(l, &a) { Some(a) => a, None => return Ok(()) };
            let [n1, n2, _] = standard_normals(l);
            let p1 = plane_from_tangent(&Tangent::with_base(Space::X, a, n1).unwrap()).unwrap();
            let p2 = plane_from_tangent(&Tangent::with_base(Space::X, a, n2).unwrap()).unwrap();
            let g = intersect_lightlike_planes(&p1, &p2).unwrap();
            let std = Geodesic::from_tangent(&diag_x(l)).unwrap();
            for t in [0.0, 0.5, 1.2] {
                prop_assert!(g.contains(&a.act(&std.eval(t))));
            }
        }

        #[test]
        fn triple_equivariance(l in lam(), a in iso(Lambda::Pos)) {
            let a = match lift(l, &a) { Some(a) => a, None => return Ok(()) };
            let ps = standard_normals(l).map(|n| plane_from_tangent(&Tangent::with_base(Space::X, a, n).unwrap()).unwrap());
            let (p, norm) = common_point_three_planes(&ps[0], &ps[1], &ps[2]).unwrap();
            prop_assert!(p.approx_eq(&a.act(&Point::origin(l, Space::X)), 1e-9));
            prop_assert!(norm.act(&p).approx_eq(&Point::origin(l, Space::X), 1e-9));
            for (k, n) in standard_normals(l).iter().enumerate() {
                let std = plane_from_tangent(&Tangent::at_identity(Space::X, *n).unwrap()).unwrap().to_projective();
                // the normalized plane has the standard normal
                let img = Plane::from_covector(l, transform_covector(&norm, ps[k].covector())).unwrap().to_projective();
                prop_assert!(img.approx_eq(&std, 1e-8));
            }
            // idempotent: normalizing the standardized triple gives the identity
            let std_planes = standard_normals(l).map(|n| plane_from_tangent(&Tangent::at_identity(Space::X, n).unwrap()).unwrap());
            let (_, again) = common_point_three_planes(&std_planes[0], &std_planes[1], &std_planes[2]).unwrap();
            prop_assert!(again.approx_eq(&Isometry::identity(l), 1e-9));
        }

        #[test]
        fn cross_ratio_invariance(l in lam(), a in iso(Lambda::Pos), zr in -2.0..-0.1f64, zi in -0.5..0.5f64) {
            let a = match lift(l, &a) { Some(a) => a, None => return Ok(()) };
            let z = GC::new(l, zr, zi);
            let pts = [BoundaryPoint::infinity(l), BoundaryPoint::zero(l), BoundaryPoint::one(l), BoundaryPoint::from_gc(z)];
            let moved = pts.map(|p| act_boundary(&a, &p));
            let cr = cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]).unwrap();
            prop_assert!(cr.dist(z) < 1e-9);
            let b = boundary_normalize(&moved[0], &moved[1], &moved[2]).unwrap();
            prop_assert!(b.approx_eq(&a.inverse(), 1e-8));
        }

        #[test]
        fn duality_exchanges_incidence(l in lam(), x in point(Lambda::Pos, Space::X), y in point(Lambda::Pos, Space::Y)) {
            if let (Ok(x), Ok(y)) = (Point::from_vec(l, Space::X, x.vec()), Point::from_vec(l, Space::Y, y.vec())) {
                prop_assert_eq!(dual_point(&x).contains(&y), dual_point(&y).contains(&x));
                match dualize(&dualize(&Dualizable::Point(x)).unwrap()).unwrap() {
                    Dualizable::Point(back) => prop_assert!(back.approx_eq(&x, 1e-12)),
                    other => prop_assert!(false, "{:?}", other),
                }
            }
        }

        #[test]
        fn dual_geodesic_independent_of_points(l in lam(), m in proptest::array::uniform3(-1.0..1.0f64), s0 in -1.0..1.0f64, s1 in 1.1..2.0f64) {
            let x = xfrak_from_coords(l, m);
            let tg = Tangent::at_identity(Space::X, x).unwrap();
            prop_assume!(tg.norm_sq() > 0.05);
            let g = Geodesic::from_tangent(&tg).unwrap();
            let h = Geodesic::through(&g.eval(s0), &g.eval(s1)).unwrap();
            if let (Ok(d1), Ok(d2)) = (dual_geodesic(&g), dual_geodesic(&h)) {
                for t in [0.0, 0.7] {
                    prop_assert!(d2.contains(&d1.eval(t)));
                }
                // every point of the dual is dual-orthogonal to g
                let p = d1.eval(0.3);
                prop_assert!(dual_point(&p).contains(&g.eval(0.2)));
            }
        }
    }

    fn transform_covector(a: &Isometry, f: [f64; 4]) -> [f64; 4] {
        let m = a.inverse().ambient_matrix(Space::X);
        let mut g = [0.0; 4];
        for j in 0..4 {
            for i in 0..4 {
                g[j] += f[i] * m[i][j];
            }
        }
        g
    }
}
