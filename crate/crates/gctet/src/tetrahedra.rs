//! Lightlike tetrahedra in X_Λ and generalized ideal tetrahedra in Y_Λ.
//!
//! Vertex indices in the public API are 1-based as in the usual notation
//! x₁..x₄, y₁..y₄. Internally index 3 is the vertex x₄ = 𝟙.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::gcnum::{c, ct_inv_clamped, s, t as tan_l, Lambda, GC};
use crate::geometry::{
    boundary_normalize, common_point_three_planes, eta, null_space, BoundaryPoint, Geodesic, Plane,
};
use crate::matmodel::{form, point_sqrt, Isometry, Mat2, Point, Space, Tangent};

/// Relative tolerance for matching reconstructed vertices.
pub const VERTEX_TOL: f64 = 1e-7;
/// Absolute tolerance in chart coordinates for membership tests.
pub const CHART_TOL: f64 = 1e-10;

/// Edges in storage order 12, 13, 14, 23, 24, 34 (0-based pairs).
pub const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Lightlike,
    Ideal,
}

impl Kind {
    pub fn dual(self) -> Kind {
        match self {
            Kind::Lightlike => Kind::Ideal,
            Kind::Ideal => Kind::Lightlike,
        }
    }

    pub fn space(self) -> Space {
        match self {
            Kind::Lightlike => Space::X,
            Kind::Ideal => Space::Y,
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Lightlike => "lightlike",
            Kind::Ideal => "ideal",
        })
    }
}

impl FromStr for Kind {
    type Err = Error;

    fn from_str(v: &str) -> Result<Kind> {
        match v {
            "lightlike" => Ok(Kind::Lightlike),
            "ideal" => Ok(Kind::Ideal),
            _ => Err(Error::DomainError(format!("unknown tetrahedron kind {v:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Vertices {
    Lightlike([Point; 4]),
    Ideal([BoundaryPoint; 4]),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Tetrahedron {
    kind: Kind,
    lambda: Lambda,
    alpha: f64,
    beta: f64,
    pose: Isometry,
    vertices: Vertices,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EdgeData {
    /// 1-based vertex labels.
    pub label: (usize, usize),
    /// Edge length (lightlike) or dihedral angle (ideal).
    pub length: f64,
    pub z: GC,
    /// |z| = √|z z̄|.
    pub modulus: f64,
    /// Lorentzian angle between the internal planes, or shearing distance.
    pub phi: f64,
    pub sigma: i8,
}

pub(crate) fn check_angles(lam: Lambda, alpha: f64, beta: f64) -> Result<()> {
    if !(alpha.is_finite() && beta.is_finite()) || alpha <= 0.0 || beta <= 0.0 {
        return Err(Error::DomainError(format!("need α, β > 0, got ({alpha}, {beta})")));
    }
    if lam == Lambda::Pos && alpha + beta >= std::f64::consts::PI {
        return Err(Error::DomainError(format!("Λ = 1 needs α + β < π, got {}", alpha + beta)));
    }
    Ok(())
}

/// Signed parameters (α₁, α₂, α₃) = (α, β, γ).
fn alphas(alpha: f64, beta: f64) -> [f64; 3] {
    [alpha, beta, -(alpha + beta)]
}

/// X₄₁, X₄₂, X₄₃.
fn x4(lam: Lambda) -> [Mat2; 3] {
    [
        Mat2::ell(lam, [[1.0, -2.0], [0.0, -1.0]]),
        Mat2::ell(lam, [[1.0, 0.0], [2.0, -1.0]]),
        Mat2::ell(lam, [[-1.0, 0.0], [0.0, 1.0]]),
    ]
}

/// Direction X_ij of the edge from x_i towards x_j at 𝟙 (0-based).
fn edge_dir(lam: Lambda, al: [f64; 3], i: usize, j: usize) -> Mat2 {
    let x = x4(lam);
    match (i, j) {
        (3, j) => x[j],
        (i, 3) => -x[i],
        (i, j) => {
            let k = s(lam, al[j]) / s(lam, al[i] + al[j]);
            x[i] - (x[i] + x[j]).scale_real(k)
        }
    }
}

/// A_i with A_i▷𝟙 = x_i.
fn a_mat(lam: Lambda, al: [f64; 3], i: usize) -> Isometry {
    if i == 3 {
        return Isometry::identity(lam);
    }
    Isometry::new(x4(lam)[i].exp_traceless(al[i] / 2.0)).expect("exponential is invertible")
}

/// The signed parameter at which the edge geodesic x_ij reaches x_j.
fn edge_param(al: [f64; 3], i: usize, j: usize) -> f64 {
    match (i, j) {
        (3, m) | (m, 3) => al[m],
        _ => al[3 - i - j],
    }
}

/// Class of an edge: 0 for 12|34, 1 for 13|24, 2 for 23|14.
fn edge_class(i: usize, j: usize) -> usize {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    match (a, b) {
        (0, 1) | (2, 3) => 0,
        (0, 2) | (1, 3) => 1,
        _ => 2,
    }
}

/// (z, σ, angle) for each edge class.
fn shape_table(lam: Lambda, alpha: f64, beta: f64) -> [(GC, i8, f64); 3] {
    let [a, b, g] = alphas(alpha, beta);
    let sl = |x: f64| s(lam, x);
    let entry = |ratio: f64, ang: f64| {
        let sig = if ratio >= 0.0 { 1 } else { -1 };
        (GC::exp_ell(lam, ang) * (-ratio), sig, ang)
    };
    [entry(sl(b) / sl(a), g), entry(sl(a) / sl(g), b), entry(sl(g) / sl(b), a)]
}

/// Standard vertices x₁..x₄ of the lightlike tetrahedron.
pub fn standard_lightlike_vertices(lam: Lambda, alpha: f64, beta: f64) -> [Point; 4] {
    let [a, b, g] = alphas(alpha, beta);
    let e = |x: f64| GC::exp_ell(lam, x);
    let ls = |x: f64| GC::new(lam, 0.0, s(lam, x));
    let z = GC::zero(lam);
    let ms = [
        Mat2::new(e(a), ls(a) * -2.0, z, e(-a)),
        Mat2::new(e(b), z, ls(b) * 2.0, e(-b)),
        Mat2::diag(e(-g), e(g)),
        Mat2::identity(lam),
    ];
    ms.map(|m| Point::new(Space::X, m).expect("standard vertex"))
}

/// Standard vertices ∞, 0, 1, z of the ideal tetrahedron.
pub fn standard_ideal_vertices(lam: Lambda, alpha: f64, beta: f64) -> [BoundaryPoint; 4] {
    let z = shape_table(lam, alpha, beta)[0].0;
    [
        BoundaryPoint::infinity(lam),
        BoundaryPoint::zero(lam),
        BoundaryPoint::one(lam),
        BoundaryPoint::from_gc(z),
    ]
}

pub fn lightlike_from_angles(lam: Lambda, alpha: f64, beta: f64) -> Result<Tetrahedron> {
    check_angles(lam, alpha, beta)?;
    let t = Tetrahedron {
        kind: Kind::Lightlike,
        lambda: lam,
        alpha,
        beta,
        pose: Isometry::identity(lam),
        vertices: Vertices::Lightlike(standard_lightlike_vertices(lam, alpha, beta)),
    };
    for f in 0..4 {
        if !t.face_plane(f + 1)?.is_lightlike() {
            return Err(Error::NotATetrahedron(format!("face opposite x{} is not lightlike", f + 1)));
        }
    }
    Ok(t)
}

pub fn ideal_from_angles(lam: Lambda, alpha: f64, beta: f64) -> Result<Tetrahedron> {
    check_angles(lam, alpha, beta)?;
    Ok(Tetrahedron {
        kind: Kind::Ideal,
        lambda: lam,
        alpha,
        beta,
        pose: Isometry::identity(lam),
        vertices: Vertices::Ideal(standard_ideal_vertices(lam, alpha, beta)),
    })
}

pub fn from_angles(kind: Kind, lam: Lambda, alpha: f64, beta: f64) -> Result<Tetrahedron> {
    match kind {
        Kind::Lightlike => lightlike_from_angles(lam, alpha, beta),
        Kind::Ideal => ideal_from_angles(lam, alpha, beta),
    }
}

/// Result of normalizing four vertices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Recovered {
    pub pose: Isometry,
    pub alpha: f64,
    pub beta: f64,
    /// Input vertex perm[i] is pose▷(standard vertex i).
    pub perm: [usize; 4],
}

fn permutations4() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn is_even(p: [usize; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// Determinant-one lift of a point matrix.
fn unit_lift(p: &Point) -> Mat2 {
    let m = p.rep();
    m.scale_real(1.0 / m.det().re.sqrt())
}

/// Angle θ with (c, s) ∝ (c_Λ(θ), s_Λ(θ)) from a lift of undetermined sign.
/// For Λ = 1 the sign is fixed by the expected sign of s.
fn angle_from(lam: Lambda, cv: f64, sv: f64, s_positive: bool) -> f64 {
    match lam {
        Lambda::Pos => {
            let flip = (sv < 0.0) == s_positive;
            let (cv, sv) = if flip { (-cv, -sv) } else { (cv, sv) };
            sv.atan2(cv)
        }
        _ => {
            let e = cv.signum();
            let (cv, sv) = (e * cv, e * sv);
            if lam == Lambda::Zero {
                sv / cv
            } else {
                (sv / cv).clamp(-1.0, 1.0).atanh()
            }
        }
    }
}

fn try_lightlike(lam: Lambda, w: [&Point; 4]) -> Option<(Isometry, f64, f64)> {
    let face = |f: usize| {
        let others: Vec<&Point> = (0..3).filter(|&m| m != f).map(|m| w[m]).collect();
        Plane::through_points([w[3], others[0], others[1]], 1e-7).ok()
    };
    let (p1, p2, p3) = (face(0)?, face(1)?, face(2)?);
    let (_, norm) = common_point_three_planes(&p1, &p2, &p3).ok()?;
    let sv: Vec<Mat2> = (0..3).map(|i| unit_lift(&norm.act(w[i]))).collect();
    let alpha = angle_from(lam, 0.5 * sv[0].tr().re, -0.5 * sv[0].b.im, true);
    let beta = angle_from(lam, 0.5 * sv[1].tr().re, 0.5 * sv[1].c.im, true);
    if !(alpha > 0.0 && beta > 0.0) || check_angles(lam, alpha, beta).is_err() {
        return None;
    }
    let pose = norm.inverse();
    let std = standard_lightlike_vertices(lam, alpha, beta);
    (0..4).all(|i| pose.act(&std[i]).approx_eq(w[i], VERTEX_TOL)).then_some((pose, alpha, beta))
}

fn try_ideal(lam: Lambda, w: [&BoundaryPoint; 4]) -> Option<(Isometry, f64, f64)> {
    let b = boundary_normalize(w[0], w[1], w[2]).ok()?;
    let v = b.rep().apply(w[3].vector());
    let z = v[0].checked_div(v[1]).ok()?;
    let (r, gamma) = (-z).polar()?;
    if !(r > 0.0 && gamma < 0.0) {
        return None;
    }
    // s(g − α) = r s(α) with g = α + β = −γ
    let g = -gamma;
    let alpha = ct_inv_clamped(lam, (r + c(lam, g)) / s(lam, g));
    let beta = g - alpha;
    if !(alpha > 0.0 && beta > 0.0) || check_angles(lam, alpha, beta).is_err() {
        return None;
    }
    let pose = b.inverse();
    let std = standard_ideal_vertices(lam, alpha, beta);
    (0..4)
        .all(|i| crate::geometry::act_boundary(&pose, &std[i]).approx_eq(w[i], VERTEX_TOL))
        .then_some((pose, alpha, beta))
}

/// Finds the pose and the parameters α, β > 0 of four vertices, trying the
/// input labeling first and then the other 23 in lexicographic order.
pub fn recover_parameters(vertices: &Vertices, lam: Lambda) -> Result<Recovered> {
    for perm in permutations4() {
        let found = match vertices {
            Vertices::Lightlike(v) => {
                if v.iter().any(|p| p.lambda() != lam || p.space() != Space::X) {
                    return Err(Error::NotATetrahedron("vertices must be points of X_Λ".into()));
                }
                try_lightlike(lam, perm.map(|i| &v[i]))
            }
            Vertices::Ideal(v) => {
                if v.iter().any(|p| p.lambda() != lam) {
                    return Err(Error::NotATetrahedron("mixed curvature signs".into()));
                }
                try_ideal(lam, perm.map(|i| &v[i]))
            }
        };
        if let Some((pose, alpha, beta)) = found {
            return Ok(Recovered { pose, alpha, beta, perm });
        }
    }
    Err(Error::NotATetrahedron("no labeling puts the vertices in standard position".into()))
}

impl Tetrahedron {
    /// Normalizes four vertices; the stored labeling is the canonical one.
    pub fn from_vertices(vertices: &Vertices, lam: Lambda) -> Result<Tetrahedron> {
        let rec = recover_parameters(vertices, lam)?;
        let kind = match vertices {
            Vertices::Lightlike(_) => Kind::Lightlike,
            Vertices::Ideal(_) => Kind::Ideal,
        };
        Ok(from_angles(kind, lam, rec.alpha, rec.beta)?.transformed(&rec.pose))
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn gamma(&self) -> f64 {
        -(self.alpha + self.beta)
    }

    pub fn pose(&self) -> Isometry {
        self.pose
    }

    pub fn vertices(&self) -> &Vertices {
        &self.vertices
    }

    pub fn lightlike_vertices(&self) -> Option<&[Point; 4]> {
        match &self.vertices {
            Vertices::Lightlike(v) => Some(v),
            Vertices::Ideal(_) => None,
        }
    }

    pub fn ideal_vertices(&self) -> Option<&[BoundaryPoint; 4]> {
        match &self.vertices {
            Vertices::Ideal(v) => Some(v),
            Vertices::Lightlike(_) => None,
        }
    }

    /// The image under an isometry.
    pub fn transformed(&self, a: &Isometry) -> Tetrahedron {
        let vertices = match &self.vertices {
            Vertices::Lightlike(v) => Vertices::Lightlike((*v).map(|p| a.act(&p))),
            Vertices::Ideal(v) => Vertices::Ideal(v.map(|p| crate::geometry::act_boundary(a, &p))),
        };
        Tetrahedron { pose: a.compose(&self.pose), vertices, ..self.clone() }
    }

    /// The same tetrahedron in standard position.
    pub fn standard(&self) -> Tetrahedron {
        from_angles(self.kind, self.lambda, self.alpha, self.beta).expect("parameters were validated")
    }

    fn al(&self) -> [f64; 3] {
        alphas(self.alpha, self.beta)
    }

    fn require_lightlike(&self) -> Result<()> {
        match self.kind {
            Kind::Lightlike => Ok(()),
            Kind::Ideal => Err(Error::NotLightlike("operation needs a lightlike tetrahedron".into())),
        }
    }

    /// The plane of the face opposite vertex f (1-based).
    pub fn face_plane(&self, f: usize) -> Result<Plane> {
        self.require_lightlike()?;
        let v = self.lightlike_vertices().expect("lightlike");
        let idx: Vec<usize> = (0..4).filter(|&m| m + 1 != f).collect();
        if idx.len() != 3 {
            return Err(Error::DomainError(format!("no vertex {f}")));
        }
        Plane::through_points([&v[idx[0]], &v[idx[1]], &v[idx[2]]], 1e-9)
    }

    /// The geodesic t ↦ x_ij(t) carrying the edge from x_i (1-based).
    pub fn edge_geodesic(&self, i: usize, j: usize) -> Result<Geodesic> {
        self.require_lightlike()?;
        let (i, j) = check_pair(i, j)?;
        let lam = self.lambda;
        let base = self.pose.compose(&a_mat(lam, self.al(), i));
        Geodesic::from_tangent(&Tangent::with_base(Space::X, base, edge_dir(lam, self.al(), i, j))?)
    }

    /// x_ij(t); reaches x_j at t = edge_parameter(i, j).
    pub fn edge_point(&self, i: usize, j: usize, t: f64) -> Result<Point> {
        Ok(self.edge_geodesic(i, j)?.eval(t))
    }

    /// Signed parameter of x_j along x_ij.
    pub fn edge_parameter(&self, i: usize, j: usize) -> Result<f64> {
        let (i, j) = check_pair(i, j)?;
        Ok(edge_param(self.al(), i, j))
    }
}

fn check_pair(i: usize, j: usize) -> Result<(usize, usize)> {
    if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i == j {
        return Err(Error::DomainError(format!("invalid edge {i}{j}")));
    }
    Ok((i - 1, j - 1))
}

/// Shape parameters, lengths (or dihedral angles) and internal angles of the
/// six edges in the order 12, 13, 14, 23, 24, 34.
pub fn edge_data(t: &Tetrahedron) -> [EdgeData; 6] {
    let tab = shape_table(t.lambda, t.alpha, t.beta);
    EDGES.map(|(i, j)| {
        let (z, sigma, ang) = tab[edge_class(i, j)];
        let modulus = z.modulus_sq().abs().sqrt();
        EdgeData { label: (i + 1, j + 1), length: ang.abs(), z, modulus, phi: modulus.ln().abs(), sigma }
    })
}

/// Distance between x₄ᵢ(αᵢ/2 + s) and x_jk(αᵢ/2 + t) from the closed formula.
///
/// Returns (σ, d) where σ is the causal type of the connecting geodesic.
pub fn opposite_edge_distance(t: &Tetrahedron, i: usize, j: usize, k: usize, sp: f64, tp: f64) -> Result<(i8, f64)> {
    t.require_lightlike()?;
    let (i, j, k) = check_opposite(i, j, k)?;
    let al = t.al();
    let half = al[i].abs() / 2.0;
    if !(sp.abs() < half && tp.abs() < half) {
        return Err(Error::DomainError(format!("parameters must lie in (−{half}, {half})")));
    }
    let lam = t.lambda;
    let (aj, ak) = (al[j], al[k]);
    if lam == Lambda::Zero {
        let v = ((sp + tp).powi(2) * aj + (sp - tp).powi(2) * ak) / (aj + ak) - aj * ak;
        let sig = if v > 0.0 { 1 } else if v < 0.0 { -1 } else { 0 };
        return Ok((sig, v.abs().sqrt()));
    }
    let q = ((c(lam, sp + tp) * s(lam, aj) + c(lam, sp - tp) * s(lam, ak)) / s(lam, aj + ak)).abs();
    // |c_{σΛ}(d)| = q: σΛ = 1 is cos, σΛ = −1 is cosh
    let (cos_branch, sig) = match (lam, q <= 1.0) {
        (Lambda::Pos, true) => (true, 1),
        (Lambda::Pos, false) => (false, -1),
        (_, true) => (true, -1),
        (_, false) => (false, 1),
    };
    if q == 1.0 {
        return Ok((0, 0.0));
    }
    Ok((sig, if cos_branch { q.acos() } else { q.acosh() }))
}

/// The two points whose distance `opposite_edge_distance` computes.
pub fn opposite_edge_points(t: &Tetrahedron, i: usize, j: usize, k: usize, sp: f64, tp: f64) -> Result<(Point, Point)> {
    t.require_lightlike()?;
    let (i0, _, _) = check_opposite(i, j, k)?;
    let half = t.al()[i0] / 2.0;
    Ok((t.edge_point(4, i, half + sp)?, t.edge_point(j, k, half + tp)?))
}

fn check_opposite(i: usize, j: usize, k: usize) -> Result<(usize, usize, usize)> {
    let mut v = [i, j, k];
    v.sort();
    if v != [1, 2, 3] {
        return Err(Error::DomainError(format!("edge pair 4{i}|{j}{k} is not a pair of opposite edges")));
    }
    Ok((i - 1, j - 1, k - 1))
}

/// Where the lightlike geodesic from x_i inside the face x_i x_k x_l meets
/// the edge x_kl (1-based; k < l after sorting).
pub fn null_projection(t: &Tetrahedron, i: usize, k: usize, l: usize) -> Result<Point> {
    t.require_lightlike()?;
    if !(1..=4).contains(&i) || !(1..=4).contains(&k) || !(1..=4).contains(&l) || k == l || i == k || i == l {
        return Err(Error::NoIntersection(format!("no null projection of x{i} onto x{k}{l}")));
    }
    let (k, l) = if k < l { (k - 1, l - 1) } else { (l - 1, k - 1) };
    let i = i - 1;
    let al = t.al();
    let (a, b, par) = if i == 3 {
        (k, l, -al[k])
    } else if k == 3 || l == 3 {
        let m = if k == 3 { l } else { k };
        (3, m, -al[i])
    } else {
        (k, l, -al[l])
    };
    t.edge_point(a + 1, b + 1, par)
}

/// Lorentzian angle between the planes spanned by the edge x_i x_j and the
/// null projections of x_i and x_j, computed from the vertices.
pub fn internal_plane_angle(t: &Tetrahedron, i: usize, j: usize) -> Result<f64> {
    t.require_lightlike()?;
    let (i0, j0) = check_pair(i, j)?;
    let (k, l) = {
        let o: Vec<usize> = (0..4).filter(|&m| m != i0 && m != j0).collect();
        (o[0] + 1, o[1] + 1)
    };
    let pi = null_projection(t, i, k, l)?;
    let pj = null_projection(t, j, k, l)?;
    let v = t.lightlike_vertices().expect("lightlike");
    let a = point_sqrt(&v[i0])?.inverse();
    let pull = |p: &Point| a.act_matrix(Space::X, &p.rep()).traceless_part();
    let wj = pull(&v[j0]);
    let lam = t.lambda;
    let n1 = crate::geometry::xfrak_cross(lam, &wj, &pull(&pi));
    let n2 = crate::geometry::xfrak_cross(lam, &wj, &pull(&pj));
    let ch = form(Space::X, &n1, &n2).abs() / (form(Space::X, &n1, &n1) * form(Space::X, &n2, &n2)).abs().sqrt();
    Ok(ch.max(1.0).acosh())
}

/// The isometry T_ij of the edge ij: x_i ↦ x_j for lightlike tetrahedra,
/// fixing y_i, y_j and mapping y_k ↦ y_l for ideal ones.
pub fn edge_symmetry(t: &Tetrahedron, i: usize, j: usize) -> Result<Isometry> {
    let (i, j) = check_pair(i, j)?;
    let lam = t.lambda;
    let (z, sigma, _) = shape_table(lam, t.alpha, t.beta)[edge_class(i, j)];
    let one = Mat2::identity(lam);
    let local = match t.kind {
        Kind::Lightlike => {
            let im = Mat2::real(lam, edge_dir(lam, t.al(), i, j).imag_part());
            let inner = (one + im).scale(z).scale_real(0.5) - (one - im).scale_real(0.5 * sigma as f64);
            let a = a_mat(lam, t.al(), i);
            a.compose(&Isometry::new(inner)?).compose(&a.inverse())
        }
        Kind::Ideal => {
            let b = ideal_edge_frame(lam, t.alpha, t.beta, i, j)?;
            b.compose(&Isometry::new(Mat2::diag(z, GC::one(lam)))?).compose(&b.inverse())
        }
    };
    Ok(t.pose.compose(&local).compose(&t.pose.inverse()))
}

/// B_ij with B_ij▷∞ = y_i, B_ij▷0 = y_j, B_ij▷1 = y_k for (i, j, k, l) even.
fn ideal_edge_frame(lam: Lambda, alpha: f64, beta: f64, i: usize, j: usize) -> Result<Isometry> {
    let v = standard_ideal_vertices(lam, alpha, beta);
    let o: Vec<usize> = (0..4).filter(|&m| m != i && m != j).collect();
    let (k, _) = if is_even([i, j, o[0], o[1]]) { (o[0], o[1]) } else { (o[1], o[0]) };
    Ok(boundary_normalize(&v[i], &v[j], &v[k])?.inverse())
}

/// Shearing distance along the edge ij: the distance between B_ij▷𝟙 and
/// B_ji▷𝟙, computed from the frames.
pub fn shearing_distance(t: &Tetrahedron, i: usize, j: usize) -> Result<f64> {
    if t.kind != Kind::Ideal {
        return Err(Error::WrongCausalClass("shearing needs an ideal tetrahedron".into()));
    }
    let (i, j) = check_pair(i, j)?;
    let lam = t.lambda;
    let o = Point::origin(lam, Space::Y);
    let p = ideal_edge_frame(lam, t.alpha, t.beta, i, j)?.act(&o);
    let q = ideal_edge_frame(lam, t.alpha, t.beta, j, i)?.act(&o);
    let m = unit_lift(&p) * unit_lift(&q).inv()?;
    Ok((0.5 * m.tr().re).abs().max(1.0).acosh())
}

/// The dual tetrahedron: vertex i of the dual is the common point of the
/// planes dual to the other three vertices.
pub fn dualize_tet(t: &Tetrahedron) -> Result<Tetrahedron> {
    let lam = t.lambda;
    let vecs: [[f64; 4]; 4] = match &t.vertices {
        Vertices::Lightlike(v) => (*v).map(|p| p.vec()),
        Vertices::Ideal(v) => v.map(|b| b.vec4()),
    };
    let dual_vec = |i: usize| -> Result<[f64; 4]> {
        let rows: Vec<[f64; 4]> = (0..4).filter(|&m| m != i).map(|m| eta(vecs[m])).collect();
        let ns = null_space(&rows, 1e-9);
        if ns.len() != 1 {
            return Err(Error::Degenerate("dual planes do not meet in a point".into()));
        }
        Ok(ns[0])
    };
    let verts = match t.kind {
        Kind::Lightlike => {
            let mut out = Vec::with_capacity(4);
            for i in 0..4 {
                out.push(BoundaryPoint::from_null_vector(lam, dual_vec(i)?)?);
            }
            Vertices::Ideal([out[0], out[1], out[2], out[3]])
        }
        Kind::Ideal => {
            let mut out = Vec::with_capacity(4);
            for i in 0..4 {
                let v = dual_vec(i)?;
                let p = Point::from_vec(lam, Space::X, v).or_else(|_| Point::from_vec(lam, Space::X, v.map(|x| -x)))?;
                out.push(p);
            }
            Vertices::Lightlike([out[0], out[1], out[2], out[3]])
        }
    };
    Tetrahedron::from_vertices(&verts, lam)
}

/// Chart coordinates of a point of X_Λ pulled back to standard position:
/// (A, B, r) with the point exp(r X̂(A, B)).
fn lightlike_chart(t: &Tetrahedron, p: &Point) -> Result<Option<(f64, f64, f64)>> {
    let lam = t.lambda;
    let q = unit_lift(&t.pose.inverse().act(p));
    let mut w = q.traceless_part();
    let mut cv = 0.5 * q.tr().re;
    if w.frob() <= 1e-14 {
        return Ok(Some((0.0, 0.0, 0.0)));
    }
    let flip = match lam {
        Lambda::Pos => w.a.im < 0.0,
        _ => cv < 0.0,
    };
    if flip {
        w = -w;
        cv = -cv;
    }
    let n2 = form(Space::X, &w, &w);
    if n2 <= 0.0 {
        return Ok(None);
    }
    let sv = n2.sqrt();
    let r = match lam {
        Lambda::Pos => sv.atan2(cv),
        Lambda::Neg => {
            if sv >= cv {
                return Ok(None);
            }
            (sv / cv).atanh()
        }
        Lambda::Zero => sv / cv,
    };
    let xh = w.scale_real(1.0 / sv).imag_part();
    if xh[0][0] <= 1e-12 {
        return Ok(None);
    }
    let n = 1.0 / xh[0][0];
    Ok(Some((-xh[0][1] * n / 2.0, xh[1][0] * n / 2.0, r)))
}

/// r(A, B): where the ray in direction X̂(A, B) leaves the tetrahedron.
fn lightlike_rmax(lam: Lambda, al: [f64; 3], a: f64, b: f64) -> Result<f64> {
    let n2 = 1.0 - 4.0 * a * b;
    if n2 <= 1e-14 {
        return Err(Error::ChartInversionFailure(format!("(A, B) = ({a}, {b}) is on the chart singularity")));
    }
    let tl = |x: f64| tan_l(lam, x);
    let x = (a / tl(al[0]) + b / tl(al[1]) + (a + b - 1.0) / tl(al[2])) / n2.sqrt();
    Ok(match lam {
        Lambda::Pos => 1f64.atan2(x),
        Lambda::Zero => {
            if x <= 0.0 {
                f64::INFINITY
            } else {
                1.0 / x
            }
        }
        Lambda::Neg => {
            if x <= 1.0 {
                f64::INFINITY
            } else {
                (1.0 / x).atanh()
            }
        }
    })
}

fn ideal_rmax(lam: Lambda, alpha: f64, beta: f64, theta: f64) -> f64 {
    let g = -(alpha + beta);
    (s(lam, beta) / s(lam, alpha)) * s(lam, g) / s(lam, theta - beta)
}

fn ideal_tmin_sq(lam: Lambda, alpha: f64, beta: f64, r: f64, theta: f64) -> f64 {
    let g = -(alpha + beta);
    s(lam, theta - g) * r / s(lam, alpha) - r * r
}

/// Membership of a point in the closed tetrahedron, by inverting the
/// global chart.
pub fn contains(t: &Tetrahedron, p: &Point) -> Result<bool> {
    if p.space() != t.kind.space() || p.lambda() != t.lambda {
        return Err(Error::NotComparable("point lives in another space".into()));
    }
    let tol = CHART_TOL;
    match t.kind {
        Kind::Lightlike => {
            let Some((a, b, r)) = lightlike_chart(t, p)? else { return Ok(false) };
            if r == 0.0 {
                return Ok(true);
            }
            if a < -tol || b < -tol || a + b > 1.0 + tol {
                return Ok(false);
            }
            Ok(r <= lightlike_rmax(t.lambda, t.al(), a.max(0.0), b.max(0.0))? + tol)
        }
        Kind::Ideal => {
            let lam = t.lambda;
            let (al, be) = (t.alpha, t.beta);
            let mut y = unit_lift(&t.pose.inverse().act(p));
            if y.d.re < 0.0 {
                y = -y;
            }
            let tt = 1.0 / y.d.re;
            let z = y.b * tt;
            let k = s(lam, be) / s(lam, al);
            let w = z + GC::exp_ell(lam, t.gamma()) * k;
            let Some((r, ph)) = w.polar() else { return Ok(false) };
            if r <= 0.0 {
                return Ok(false);
            }
            let mut th = ph + be;
            if lam == Lambda::Pos {
                let tau = std::f64::consts::TAU;
                th = (th + std::f64::consts::PI).rem_euclid(tau) - std::f64::consts::PI;
            }
            if th < -al - tol || th > tol {
                return Ok(false);
            }
            let th = th.clamp(-al, 0.0);
            if r > ideal_rmax(lam, al, be, th) + tol {
                return Ok(false);
            }
            Ok(tt * tt >= ideal_tmin_sq(lam, al, be, r, th) - tol)
        }
    }
}

/// Membership of a point of X_Λ by writing a lift as a combination of the
/// standard vertex lifts with coefficients of one sign.
pub fn contains_by_lifts(t: &Tetrahedron, p: &Point) -> Result<bool> {
    t.require_lightlike()?;
    let q = t.pose.inverse().act(p);
    let std = standard_lightlike_vertices(t.lambda, t.alpha, t.beta);
    let m = nalgebra::Matrix4::from_fn(|r, col| std[col].vec()[r]);
    let v = nalgebra::Vector4::from_column_slice(&q.vec());
    let coef = m
        .lu()
        .solve(&v)
        .ok_or_else(|| Error::ChartInversionFailure("vertex lifts are linearly dependent".into()))?;
    let scale = coef.amax();
    let tol = 1e-10 * scale;
    Ok(coef.iter().all(|&x| x >= -tol) || coef.iter().all(|&x| x <= tol))
}

/// Points drawn uniformly in chart coordinates. Ideal tetrahedra are
/// unbounded; the height above the lower boundary is exponential.
pub fn sample(t: &Tetrahedron, n: usize, seed: u64) -> Result<Vec<Point>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lam = t.lambda;
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let p = match t.kind {
            Kind::Lightlike => {
                let (mut a, mut b): (f64, f64) = (rng.random(), rng.random());
                if a + b > 1.0 {
                    a = 1.0 - a;
                    b = 1.0 - b;
                }
                let rmax = match lightlike_rmax(lam, t.al(), a, b) {
                    Ok(r) if r.is_finite() => r,
                    _ => continue,
                };
                let r = rng.random::<f64>() * rmax;
                let nn = (1.0 - 4.0 * a * b).sqrt();
                let xh = Mat2::ell(lam, [[1.0, -2.0 * a], [2.0 * b, -1.0]]).scale_real(1.0 / nn);
                let m = Mat2::identity(lam).scale_real(c(lam, r)) + xh.scale_real(s(lam, r));
                Point::new(Space::X, m)?
            }
            Kind::Ideal => {
                let (al, be) = (t.alpha, t.beta);
                let th = -al * rng.random::<f64>();
                let r = ideal_rmax(lam, al, be, th) * rng.random::<f64>();
                let tmin = ideal_tmin_sq(lam, al, be, r, th).max(0.0).sqrt();
                let tt = tmin - (1.0 - rng.random::<f64>()).ln();
                if tt <= 0.0 {
                    continue;
                }
                let k = s(lam, be) / s(lam, al);
                let z = GC::exp_ell(lam, th - be) * r - GC::exp_ell(lam, t.gamma()) * k;
                let zt = z * (1.0 / tt);
                let m = Mat2::new(GC::real(lam, tt + z.modulus_sq() / tt), zt, zt.conj(), GC::real(lam, 1.0 / tt));
                Point::new(Space::Y, m)?
            }
        };
        out.push(t.pose.act(&p));
    }
    Ok(out)
}
