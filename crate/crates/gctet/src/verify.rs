//! Seeded runtime invariant suites.
//!
//! Each suite draws its random inputs from a ChaCha8 stream derived from the
//! seed and the suite name, so suites can be run alone or together with the
//! same results.

use std::f64::consts::PI;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::gcnum::{self, Lambda, GC};
use crate::geometry::{
    act_boundary, arc_length, cross_ratio, dual_point, dualize, stabilizer_element, BoundaryPoint, Dualizable,
    Geodesic, Plane,
};
use crate::matmodel::{embed, point_sqrt, quadric, unembed, Isometry, Mat2, Point, Space};
use crate::quadrature;
use crate::tetrahedra::{
    dualize_tet, edge_data, edge_symmetry, from_angles, lightlike_from_angles, opposite_edge_distance,
    recover_parameters, Kind, Tetrahedron, Vertices, EDGES,
};
use crate::volumes;

/// Failures kept verbatim per suite; the rest are only counted.
const MAX_RECORDED: usize = 8;

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub name: &'static str,
    pub checks: usize,
    pub failed: usize,
    /// Largest error seen relative to its tolerance (≤ 1 on success).
    pub worst_ratio: f64,
    pub failures: Vec<String>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checks > 0
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} checks, {} failed, worst error/tol {:.3e})", self.name, self.checks, self.failed, self.worst_ratio)
    }
}

struct Suite {
    report: SuiteReport,
}

impl Suite {
    fn new(name: &'static str) -> Suite {
        Suite { report: SuiteReport { name, checks: 0, failed: 0, worst_ratio: 0.0, failures: Vec::new() } }
    }

    fn fail(&mut self, what: String) {
        self.report.failed += 1;
        if self.report.failures.len() < MAX_RECORDED {
            self.report.failures.push(what);
        }
    }

    /// Records err ≤ tol.
    fn close<F: FnOnce() -> String>(&mut self, err: f64, tol: f64, what: F) {
        self.report.checks += 1;
        let ratio = if err.is_nan() { f64::INFINITY } else { err / tol };
        self.report.worst_ratio = self.report.worst_ratio.max(ratio);
        if !(err <= tol) {
            self.fail(format!("{}: error {err:.3e} > {tol:.1e}", what()));
        }
    }

    fn holds<F: FnOnce() -> String>(&mut self, ok: bool, what: F) {
        self.report.checks += 1;
        if !ok {
            self.fail(what());
        }
    }

    /// Unwraps `r`, recording the error as a failure.
    fn ok<T, F: FnOnce() -> String>(&mut self, r: Result<T, Error>, what: F) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.report.checks += 1;
                self.fail(format!("{}: {e}", what()));
                None
            }
        }
    }

    fn finish(self) -> SuiteReport {
        self.report
    }
}

fn rng_for(seed: u64, name: &str) -> ChaCha8Rng {
    // FNV-1a of the name mixed into the seed
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

fn random_lambda(rng: &mut ChaCha8Rng) -> Lambda {
    Lambda::ALL[rng.random_range(0..3)]
}

/// Ratio |det|²/‖M‖⁴ of a real 2×2 matrix; at most 1/4, and small when M is
/// badly conditioned.
fn conditioning(m: [[f64; 2]; 2]) -> f64 {
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    let n2: f64 = m.iter().flatten().map(|x| x * x).sum();
    det * det / (n2 * n2)
}

/// A random well-conditioned isometry. For Λ = −1 the split-complex matrix is
/// a pair of real matrices (re ± im) and both must be well conditioned.
pub fn random_isometry(rng: &mut ChaCha8Rng, lam: Lambda) -> Isometry {
    loop {
        let mut v = [0.0; 8];
        for x in v.iter_mut() {
            *x = rng.random_range(-1.0..1.0);
        }
        let (re, im) = ([[v[0], v[1]], [v[2], v[3]]], [[v[4], v[5]], [v[6], v[7]]]);
        let m = Mat2::from_parts(lam, re, im);
        let ok = match lam {
            Lambda::Neg => {
                let part = |sg: f64| [[re[0][0] + sg * im[0][0], re[0][1] + sg * im[0][1]], [re[1][0] + sg * im[1][0], re[1][1] + sg * im[1][1]]];
                conditioning(part(1.0)) >= 0.025 && conditioning(part(-1.0)) >= 0.025 && m.det().modulus_sq() > 0.0
            }
            _ => m.det().modulus_sq() >= 0.025 * m.frob().powi(4),
        };
        if ok {
            if let Ok(a) = Isometry::new(m) {
                return a;
            }
        }
    }
}

fn random_angles(rng: &mut ChaCha8Rng, lam: Lambda) -> (f64, f64) {
    loop {
        let a = rng.random_range(0.1..1.4);
        let b = rng.random_range(0.1..1.4);
        if lam != Lambda::Pos || a + b < PI - 0.1 {
            return (a, b);
        }
    }
}

fn random_permutation(rng: &mut ChaCha8Rng) -> [usize; 4] {
    let mut p = [0, 1, 2, 3];
    for i in (1..4).rev() {
        let j = rng.random_range(0..=i);
        p.swap(i, j);
    }
    p
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

fn gc_rel(a: GC, b: GC) -> f64 {
    a.dist(b) / (1.0 + b.norm_sq_coords().sqrt())
}

/// Sorted {α, β, third edge}; the third edge is π − α − β for Λ = 1, where
/// lengths are only defined mod π.
fn length_multiset(lam: Lambda, a: f64, b: f64) -> [f64; 3] {
    let third = if lam == Lambda::Pos { PI - a - b } else { a + b };
    let mut v = [a, b, third];
    v.sort_by(f64::total_cmp);
    v
}

/// c² + Λs² = 1, both addition formulas and both derivative identities.
pub fn trig_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("trig");
    let mut rng = rng_for(seed, "trig");
    for _ in 0..samples {
        let l = random_lambda(&mut rng);
        let th: f64 = rng.random_range(-3.0..3.0);
        let ph: f64 = rng.random_range(-3.0..3.0);
        let (c, sn, lv) = (|x| gcnum::c(l, x), |x| gcnum::s(l, x), l.value());
        let pyth_scale = 1.0 + c(th) * c(th);
        s.close((c(th) * c(th) + lv * sn(th) * sn(th) - 1.0).abs(), 1e-12 * pyth_scale, || format!("Pythagoras Λ={l} θ={th}"));
        let add_scale = 1.0 + c(th).abs() * c(ph).abs() + sn(th).abs() * sn(ph).abs();
        s.close((c(th) * c(ph) - lv * sn(th) * sn(ph) - c(th + ph)).abs(), 1e-12 * add_scale, || format!("c addition Λ={l} θ={th} φ={ph}"));
        s.close((c(th) * sn(ph) + sn(th) * c(ph) - sn(th + ph)).abs(), 1e-12 * add_scale, || format!("s addition Λ={l} θ={th} φ={ph}"));
        let h = 1e-5;
        let dc = (c(th + h) - c(th - h)) / (2.0 * h);
        let ds = (sn(th + h) - sn(th - h)) / (2.0 * h);
        let d_scale = 1.0 + c(th).abs();
        s.close((dc + lv * sn(th)).abs(), 1e-6 * d_scale, || format!("c' = −Λs at Λ={l} θ={th}"));
        s.close((ds - c(th)).abs(), 1e-6 * d_scale, || format!("s' = c at Λ={l} θ={th}"));
    }
    s.finish()
}

/// Ring laws in ℂ_Λ and unit ⇔ invertible.
pub fn ring_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("ring");
    let mut rng = rng_for(seed, "ring");
    for _ in 0..samples {
        let l = random_lambda(&mut rng);
        let mut g = || GC::new(l, rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
        let (x, y, z) = (g(), g(), g());
        s.close(((x * y) * z).dist(x * (y * z)), 1e-12, || format!("associativity Λ={l}"));
        s.close((x * (y + z)).dist(x * y + x * z), 1e-12, || format!("distributivity Λ={l}"));
        s.close((x * y).dist(y * x), 1e-15, || format!("commutativity Λ={l}"));
        match x.inv() {
            Ok(w) => {
                s.holds(x.is_unit(), || format!("{x} inverted but not a unit"));
                let scale = 1.0 + x.norm_sq_coords() / x.modulus_sq().abs();
                s.close((x * w).dist(GC::one(l)), 1e-9 * scale, || format!("{x}·{x}⁻¹ = 1"));
            }
            Err(_) => s.holds(!x.is_unit(), || format!("{x} is a unit but has no inverse")),
        }
    }
    s.finish()
}

/// Embeddings, the group action and point square roots.
pub fn matmodel_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("matmodel");
    let mut rng = rng_for(seed, "matmodel");
    for _ in 0..samples {
        let l = random_lambda(&mut rng);
        let mut v = [0.0; 4];
        for x in v.iter_mut() {
            *x = rng.random_range(-2.0..2.0);
        }
        for sp in [Space::X, Space::Y] {
            let m = embed(l, v, sp);
            s.close(sp.hermitian_conj(&m).rel_dist(&m), 0.0, || format!("embed is fixed by the {sp} involution"));
            let w = unembed(&m, sp);
            s.close((0..4).map(|i| (w[i] - v[i]).abs()).fold(0.0, f64::max), 1e-15, || format!("unembed∘embed in {sp}"));
            s.close((m.det().re - quadric(l, v, sp)).abs(), 1e-12, || format!("det = quadric in {sp}"));
        }
        // det φ_Y(v) > 0 ⇔ ⟨v,v⟩ < 0
        let y = embed(l, v, Space::Y);
        let lorentz = -v[0] * v[0] + v[2] * v[2] + v[3] * v[3] + l.value() * v[1] * v[1];
        if lorentz.abs() > 1e-9 {
            s.holds((y.det().re > 0.0) == (lorentz < 0.0), || format!("det sign vs form sign at {v:?}"));
        }

        let a = random_isometry(&mut rng, l);
        let b = random_isometry(&mut rng, l);
        for sp in [Space::X, Space::Y] {
            let Ok(p) = Point::from_vec(l, sp, v) else { continue };
            let lhs = a.compose(&b).act(&p);
            let rhs = a.act(&b.act(&p));
            s.close(lhs.proj_dist(&rhs), 1e-9, || format!("(AB)▷p = A▷(B▷p) in {sp}"));
            let raw = a.act_matrix(sp, &p.rep());
            s.close(sp.hermitian_conj(&raw).rel_dist(&raw), 1e-12, || format!("action keeps the {sp} involution class"));
            s.holds(raw.det().re > 0.0, || format!("action keeps det > 0 in {sp}"));
            if let Some(r) = s.ok(point_sqrt(&p), || format!("point_sqrt in {sp}")) {
                s.close(r.act(&Point::origin(l, sp)).proj_dist(&p), 1e-9, || format!("point_sqrt(p)▷𝟙 = p in {sp}"));
            }
        }
        if l == Lambda::Zero {
            // A▷X = Re(A) X Re(A)⁻¹ on 𝔵
            let m = [rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)];
            let x = Mat2::ell(l, [[m[0], m[1]], [m[2], -m[0]]]);
            let re = Mat2::real(l, a.rep().real_part());
            if let Ok(rinv) = re.inv() {
                let lhs = a.act_matrix(Space::X, &x);
                let rhs = (re * x * rinv).scale_real(re.det().re);
                s.close(lhs.rel_dist(&rhs), 1e-9, || "flat action through Re(A)".into());
            }
        }
    }
    s.finish()
}

fn random_point(rng: &mut ChaCha8Rng, l: Lambda, sp: Space) -> Point {
    loop {
        let mut v = [0.0; 4];
        for x in v.iter_mut() {
            *x = rng.random_range(-2.0..2.0);
        }
        let n2: f64 = v.iter().map(|x| x * x).sum();
        if quadric(l, v, sp) > 0.1 * n2 {
            if let Ok(p) = Point::from_vec(l, sp, v) {
                return p;
            }
        }
    }
}

/// Equivariance of constructors, duality of incidence and geodesic endpoints.
pub fn geometry_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("geometry");
    let mut rng = rng_for(seed, "geometry");
    for _ in 0..samples {
        let l = random_lambda(&mut rng);
        let a = random_isometry(&mut rng, l);
        let (p, q) = (random_point(&mut rng, l, Space::X), random_point(&mut rng, l, Space::X));
        if let Ok(g) = Geodesic::through(&p, &q) {
            if let Some(h) = s.ok(Geodesic::through(&a.act(&p), &a.act(&q)), || format!("geodesic through moved points Λ={l}")) {
                for t in [0.2, 0.7] {
                    s.holds(h.contains(&a.act(&g.eval(t))), || format!("A▷geodesic = geodesic(A▷p, A▷q) Λ={l}"));
                }
            }
            if let (Ok(d0), Ok(d1)) = (arc_length(&p, &q), arc_length(&a.act(&p), &a.act(&q))) {
                s.holds(d0.sigma == d1.sigma, || format!("causal class is invariant Λ={l}"));
                if d0.sigma != 0 {
                    s.close((d0.length - d1.length).abs(), 1e-8 * (1.0 + d0.length), || format!("arc length is invariant Λ={l}"));
                }
            }
        }
        let r = random_point(&mut rng, l, Space::X);
        if let Ok(pl) = Plane::through_points([&p, &q, &r], 1e-12) {
            let moved = [a.act(&p), a.act(&q), a.act(&r)];
            if let Some(pm) = s.ok(Plane::through_points([&moved[0], &moved[1], &moved[2]], 1e-12), || format!("plane through moved points Λ={l}")) {
                s.holds(pm.sigma() == pl.sigma(), || format!("plane causal class is invariant Λ={l}"));
                let x = pl.eval(0.1, -0.2);
                s.holds(pm.contains(&a.act(&x)), || format!("A▷plane = plane(A▷p, A▷q, A▷r) Λ={l}"));
            }
        }

        // duality exchanges incidence: build y on x*, then x must lie on y*
        let x = random_point(&mut rng, l, Space::X);
        let f = dual_point(&x).covector;
        let ff: f64 = f.iter().map(|t| t * t).sum();
        let mut w = [0.0; 4];
        for t in w.iter_mut() {
            *t = rng.random_range(-2.0..2.0);
        }
        let fw: f64 = (0..4).map(|i| f[i] * w[i]).sum();
        for i in 0..4 {
            w[i] -= fw / ff * f[i];
        }
        if let Ok(y) = Point::from_vec(l, Space::Y, w) {
            s.holds(dual_point(&x).contains(&y), || format!("constructed y lies on x* Λ={l}"));
            s.holds(dual_point(&y).contains(&x), || format!("y ∈ x* ⇒ x ∈ y* Λ={l}"));
        }
        let y = random_point(&mut rng, l, Space::Y);
        s.holds(dual_point(&x).contains(&y) == dual_point(&y).contains(&x), || format!("incidence symmetric Λ={l}"));
        if let Ok(Dualizable::Point(back)) = dualize(&Dualizable::Plane(dual_point(&x))) {
            s.close(back.proj_dist(&x), 1e-12, || format!("x** = x Λ={l}"));
        } else {
            s.fail(format!("x** is not a point Λ={l}"));
        }

        // endpoints of a spacelike Y geodesic are fixed by its translations
        let (y0, y1) = (random_point(&mut rng, l, Space::Y), random_point(&mut rng, l, Space::Y));
        if let Ok(g) = Geodesic::through(&y0, &y1) {
            if g.sigma() == 1 {
                if let (Ok(ends), Ok(tr)) = (g.endpoints(), stabilizer_element(&g, 0.7, 1.0, 0.0)) {
                    for e in ends {
                        s.close(act_boundary(&tr, &e).proj_dist(&e), 1e-8, || format!("translation fixes geodesic endpoints Λ={l}"));
                    }
                }
            }
        }
    }
    s.finish()
}

/// The order-6 orbit {z, 1/(1−z), (z−1)/z, 1/z, 1−z, z/(z−1)}.
fn orbit(z: GC) -> Result<[GC; 6], Error> {
    let one = GC::one(z.lambda);
    Ok([z, one.checked_div(one - z)?, (z - one).checked_div(z)?, z.inv()?, one - z, z.checked_div(z - one)?])
}

/// Random z with z, 1 − z comfortably invertible and of positive modulus, so
/// that ∞, 0, 1, z are pairwise spacelike connected in every order.
fn random_shape(rng: &mut ChaCha8Rng, l: Lambda) -> GC {
    loop {
        let z = GC::new(l, rng.random_range(-3.0..3.0), rng.random_range(-1.5..1.5));
        let one = GC::one(l);
        let ok = |w: GC| w.modulus_sq() > 0.05 * w.norm_sq_coords();
        if ok(z) && ok(one - z) {
            return z;
        }
    }
}

/// Normalization, orbit, invariance and the product of shape parameters.
pub fn cross_ratio_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("cross_ratio");
    let mut rng = rng_for(seed, "cross_ratio");
    for l in Lambda::ALL {
        let base = |z: GC| [BoundaryPoint::infinity(l), BoundaryPoint::zero(l), BoundaryPoint::one(l), BoundaryPoint::from_gc(z)];
        for _ in 0..samples {
            let z = random_shape(&mut rng, l);
            let pts = base(z);
            let Some(cr) = s.ok(cross_ratio(&pts[0], &pts[1], &pts[2], &pts[3]), || format!("cross_ratio Λ={l} z={z}")) else {
                continue;
            };
            s.holds(cr == z, || format!("cross_ratio(∞, 0, 1, [z:1]) = z exactly, Λ={l} z={z} got {cr}"));

            // all 24 orderings land in the orbit and reach all of it
            let Some(want) = s.ok(orbit(z), || format!("orbit of {z}")) else { continue };
            let mut hit = [false; 6];
            for a in 0..4 {
                for b in 0..4 {
                    for c in 0..4 {
                        for d in 0..4 {
                            let p = [a, b, c, d];
                            if a == b || a == c || a == d || b == c || b == d || c == d {
                                continue;
                            }
                            let Some(w) = s.ok(cross_ratio(&pts[p[0]], &pts[p[1]], &pts[p[2]], &pts[p[3]]), || format!("permuted cross ratio {p:?}")) else {
                                continue;
                            };
                            let best = (0..6).min_by(|&i, &j| gc_rel(w, want[i]).total_cmp(&gc_rel(w, want[j]))).unwrap();
                            hit[best] = true;
                            s.close(gc_rel(w, want[best]), 1e-10, || format!("{p:?} gives {w}, not in the orbit of {z}"));
                        }
                    }
                }
            }
            s.holds(hit.iter().all(|&h| h), || format!("orbit of {z} not exhausted: {hit:?}"));
            s.close(gc_rel(want[0] * want[1] * want[2], GC::real(l, -1.0)), 1e-12, || format!("z z' z'' = −1 for z = {z}"));

            let a = random_isometry(&mut rng, l);
            let moved = pts.map(|p| act_boundary(&a, &p));
            if let Some(w) = s.ok(cross_ratio(&moved[0], &moved[1], &moved[2], &moved[3]), || format!("moved cross ratio Λ={l}")) {
                s.close(gc_rel(w, z), 1e-10, || format!("invariance under isometries Λ={l} z={z}"));
            }
        }
        // the same product on edge data of ideal tetrahedra
        for _ in 0..samples.min(20) {
            let (a, b) = random_angles(&mut rng, l);
            if let Some(t) = s.ok(from_angles(Kind::Ideal, l, a, b), || format!("ideal ({a}, {b})")) {
                let e = edge_data(&t);
                s.close(gc_rel(e[0].z * e[1].z * e[3].z, GC::real(l, -1.0)), 1e-9, || format!("z₁₂ z₁₃ z₂₃ = −1 at Λ={l} ({a}, {b})"));
                let v = t.ideal_vertices().expect("ideal");
                if let Ok(z) = cross_ratio(&v[0], &v[1], &v[2], &v[3]) {
                    s.close(gc_rel(z, e[0].z), 1e-14, || format!("vertex cross ratio is z₁₂ at Λ={l}"));
                }
            }
        }
    }
    s.finish()
}

/// Edge lengths from arc length and causal classes of opposite-edge connections.
pub fn edge_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("edges");
    let mut rng = rng_for(seed, "edges");
    let grid = [0.2, 0.5, 0.9, 1.3];
    for l in Lambda::ALL {
        for &a in &grid {
            for &b in &grid {
                if l == Lambda::Pos && a + b >= PI - 0.1 {
                    continue;
                }
                let Some(t) = s.ok(lightlike_from_angles(l, a, b), || format!("lightlike ({a}, {b}) Λ={l}")) else { continue };
                let v = t.lightlike_vertices().expect("lightlike");
                let mut lengths = Vec::new();
                for e in edge_data(&t) {
                    let (i, j) = e.label;
                    if let Some(d) = s.ok(arc_length(&v[i - 1], &v[j - 1]), || format!("arc length {i}{j}")) {
                        s.holds(d.sigma == 1, || format!("edge {i}{j} spacelike Λ={l}"));
                        s.close((d.length - e.length).abs(), 1e-9, || format!("edge {i}{j} length at Λ={l} ({a}, {b})"));
                        lengths.push(d.length);
                    }
                }
                lengths.sort_by(f64::total_cmp);
                let mut want = [a, a, b, b, a + b, a + b];
                want.sort_by(f64::total_cmp);
                if lengths.len() == 6 {
                    let err = (0..6).map(|k| (lengths[k] - want[k]).abs()).fold(0.0, f64::max);
                    s.close(err, 1e-9, || format!("edge lengths are (α, β, α+β) at Λ={l} ({a}, {b})"));
                }

                // midpoints of the longest opposite pair
                if let Some((sig, d)) = s.ok(opposite_edge_distance(&t, 3, 1, 2, 0.0, 0.0), || "longest pair".into()) {
                    s.holds(sig == -1, || format!("longest pair timelike at Λ={l} ({a}, {b})"));
                    if l == Lambda::Zero {
                        s.close((d * d - a * b).abs(), 1e-9 * (1.0 + a * b), || format!("d² = αβ at ({a}, {b})"));
                    }
                }
                for _ in 0..samples {
                    for (i, j, k) in [(1, 2, 3), (1, 3, 2), (2, 1, 3), (2, 3, 1)] {
                        let half = [a, b][i - 1] / 2.0;
                        // opposite edges have equal length
                        let (sp, tp) = (rng.random_range(-0.9..0.9) * half, rng.random_range(-0.9..0.9) * half);
                        if let Some((sig, _)) = s.ok(opposite_edge_distance(&t, i, j, k, sp, tp), || format!("pair 4{i}|{j}{k}")) {
                            s.holds(sig == 1, || format!("pair 4{i}|{j}{k} spacelike at Λ={l} ({a}, {b}) s={sp} t={tp}"));
                        }
                    }
                }
            }
        }
    }
    s.finish()
}

fn vertices_dist(a: &Vertices, b: &Vertices) -> f64 {
    match (a, b) {
        (Vertices::Lightlike(x), Vertices::Lightlike(y)) => (0..4).map(|i| x[i].proj_dist(&y[i])).fold(0.0, f64::max),
        (Vertices::Ideal(x), Vertices::Ideal(y)) => (0..4).map(|i| x[i].proj_dist(&y[i])).fold(0.0, f64::max),
        _ => f64::INFINITY,
    }
}

/// Double dual is the identity; edge lengths become dihedral angles.
pub fn duality_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("duality");
    let mut rng = rng_for(seed, "duality");
    let grid = [0.2, 0.45, 0.7, 0.95, 1.2];
    for l in Lambda::ALL {
        for &a in &grid {
            for &b in &grid {
                let Some(t) = s.ok(lightlike_from_angles(l, a, b), || format!("lightlike ({a}, {b}) Λ={l}")) else { continue };
                let Some(d) = s.ok(dualize_tet(&t), || format!("dual of ({a}, {b}) Λ={l}")) else { continue };
                s.holds(d.kind() == Kind::Ideal, || "dual of lightlike is ideal".into());
                let (el, ed) = (edge_data(&t), edge_data(&d));
                for k in 0..6 {
                    s.close((el[k].length - ed[k].length).abs(), 1e-9, || format!("edge {:?} length = dual angle at Λ={l} ({a}, {b})", el[k].label));
                }
                if let Some(dd) = s.ok(dualize_tet(&d), || "double dual".into()) {
                    s.close(vertices_dist(t.vertices(), dd.vertices()), 1e-9, || format!("double dual at Λ={l} ({a}, {b})"));
                }
            }
        }
    }
    for _ in 0..samples {
        let l = random_lambda(&mut rng);
        let (a, b) = random_angles(&mut rng, l);
        let kind = if rng.random::<bool>() { Kind::Lightlike } else { Kind::Ideal };
        let g = random_isometry(&mut rng, l);
        let Some(t) = s.ok(from_angles(kind, l, a, b), || format!("{kind} ({a}, {b})")) else { continue };
        let t = t.transformed(&g);
        let Some(d) = s.ok(dualize_tet(&t), || format!("dual of posed {kind} Λ={l}")) else { continue };
        s.holds(d.kind() == kind.dual(), || "dual swaps kind".into());
        s.close((d.alpha() - a).abs().max((d.beta() - b).abs()), 1e-9, || format!("dual keeps (α, β) for posed {kind} Λ={l} ({a}, {b})"));
        if let Some(dd) = s.ok(dualize_tet(&d), || "double dual".into()) {
            s.close(vertices_dist(t.vertices(), dd.vertices()), 1e-9, || format!("posed double dual {kind} Λ={l} ({a}, {b})"));
        }
    }
    s.finish()
}

/// Edge symmetries on random posed tetrahedra.
pub fn symmetry_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("symmetry");
    let mut rng = rng_for(seed, "symmetry");
    for l in Lambda::ALL {
        for _ in 0..samples {
            let (a, b) = random_angles(&mut rng, l);
            let g = random_isometry(&mut rng, l);
            for kind in [Kind::Lightlike, Kind::Ideal] {
                let Some(t) = s.ok(from_angles(kind, l, a, b), || format!("{kind} ({a}, {b})")) else { continue };
                let t = t.transformed(&g);
                check_symmetries(&mut s, &t);
            }
        }
    }
    s.finish()
}

fn check_symmetries(s: &mut Suite, t: &Tetrahedron) {
    let (l, a, b) = (t.lambda(), t.alpha(), t.beta());
    for (i, j) in EDGES {
        for (i, j) in [(i, j), (j, i)] {
            let Some(tij) = s.ok(edge_symmetry(t, i + 1, j + 1), || format!("T{}{}", i + 1, j + 1)) else { continue };
            let o: Vec<usize> = (0..4).filter(|&m| m != i && m != j).collect();
            match t.vertices() {
                Vertices::Lightlike(v) => {
                    s.close(tij.act(&v[i]).proj_dist(&v[j]), 1e-9, || format!("T{}{} x{} → x{} at Λ={l} ({a}, {b})", i + 1, j + 1, i + 1, j + 1));
                    if let Ok(g) = t.edge_geodesic(i + 1, j + 1) {
                        for s0 in [0.1, 0.3] {
                            s.holds(g.contains(&tij.act(&g.eval(s0))), || format!("T{}{} keeps the edge at Λ={l}", i + 1, j + 1));
                        }
                    }
                }
                Vertices::Ideal(v) => {
                    let (k, m) = if is_even([i, j, o[0], o[1]]) { (o[0], o[1]) } else { (o[1], o[0]) };
                    s.close(act_boundary(&tij, &v[i]).proj_dist(&v[i]), 1e-9, || format!("T{}{} fixes y{} at Λ={l}", i + 1, j + 1, i + 1));
                    s.close(act_boundary(&tij, &v[j]).proj_dist(&v[j]), 1e-9, || format!("T{}{} fixes y{} at Λ={l}", i + 1, j + 1, j + 1));
                    s.close(act_boundary(&tij, &v[k]).proj_dist(&v[m]), 1e-9, || format!("T{}{} y{} → y{} at Λ={l} ({a}, {b})", i + 1, j + 1, k + 1, m + 1));
                }
            }
        }
    }
}

/// Projective tolerance on recovered poses. Split-complex poses near the null
/// cone lose a digit or so relative to (α, β).
const POSE_TOL: f64 = 1e-8;

/// recover_parameters under random poses and vertex orders.
pub fn normalization_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("normalization");
    let mut rng = rng_for(seed, "normalization");
    for l in Lambda::ALL {
        for _ in 0..samples {
            let (a, b) = random_angles(&mut rng, l);
            let g = random_isometry(&mut rng, l);
            let perm = random_permutation(&mut rng);
            for kind in [Kind::Lightlike, Kind::Ideal] {
                let Some(t) = s.ok(from_angles(kind, l, a, b), || format!("{kind} ({a}, {b})")) else { continue };
                let t = t.transformed(&g);
                // unpermuted: parameters and pose come back as given
                if let Some(r) = s.ok(recover_parameters(t.vertices(), l), || format!("recover posed {kind} Λ={l}")) {
                    s.close((r.alpha - a).abs().max((r.beta - b).abs()), 1e-9, || format!("posed {kind} Λ={l} ({a}, {b}) gave ({}, {})", r.alpha, r.beta));
                    s.close(r.pose.proj_dist(&g), POSE_TOL, || format!("posed {kind} Λ={l} pose"));
                }
                // permuted: same intrinsic lengths, and the inverse of the
                // recovered pose carries the input onto the standard vertices
                let input = match t.vertices() {
                    Vertices::Lightlike(v) => Vertices::Lightlike(perm.map(|p| v[p])),
                    Vertices::Ideal(v) => Vertices::Ideal(perm.map(|p| v[p])),
                };
                let Some(r) = s.ok(recover_parameters(&input, l), || format!("recover permuted {kind} Λ={l} {perm:?}")) else { continue };
                let (got, want) = (length_multiset(l, r.alpha, r.beta), length_multiset(l, a, b));
                let err = (0..3).map(|k| (got[k] - want[k]).abs()).fold(0.0, f64::max);
                s.close(err, 1e-9, || format!("permuted {kind} Λ={l} ({a}, {b}) {perm:?} gave ({}, {})", r.alpha, r.beta));
                if let Ok(std) = from_angles(kind, l, r.alpha, r.beta) {
                    // compared in the standard frame, where the vertices are O(1)
                    let back = r.pose.inverse();
                    let err = match (std.vertices(), &input) {
                        (Vertices::Lightlike(x), Vertices::Lightlike(y)) => (0..4).map(|i| x[i].proj_dist(&back.act(&y[r.perm[i]]))).fold(0.0, f64::max),
                        (Vertices::Ideal(x), Vertices::Ideal(y)) => (0..4).map(|i| x[i].proj_dist(&act_boundary(&back, &y[r.perm[i]]))).fold(0.0, f64::max),
                        _ => f64::INFINITY,
                    };
                    s.close(err, POSE_TOL, || format!("permuted {kind} Λ={l} pose {perm:?}"));
                }
            }
        }
    }
    s.finish()
}

/// Constructors round-trip through recover_parameters on a grid.
pub fn tetrahedra_suite() -> SuiteReport {
    let mut s = Suite::new("tetrahedra");
    let grid = [0.1, 0.3, 0.5, 0.7, 0.9, 1.1, 1.3, 1.5];
    for l in Lambda::ALL {
        for &a in &grid {
            for &b in &grid {
                if l == Lambda::Pos && a + b >= PI - 0.1 {
                    continue;
                }
                for kind in [Kind::Lightlike, Kind::Ideal] {
                    let Some(t) = s.ok(from_angles(kind, l, a, b), || format!("{kind} ({a}, {b}) Λ={l}")) else { continue };
                    if let Some(r) = s.ok(recover_parameters(t.vertices(), l), || format!("recover {kind} ({a}, {b}) Λ={l}")) {
                        s.close((r.alpha - a).abs().max((r.beta - b).abs()), 1e-9, || format!("round trip {kind} ({a}, {b}) Λ={l}"));
                    }
                    let e = edge_data(&t);
                    for (p, q) in [(0, 5), (1, 4), (2, 3)] {
                        s.close((e[p].length - e[q].length).abs(), 1e-12, || format!("opposite edges {:?} {:?} agree", e[p].label, e[q].label));
                        s.holds(e[p].z == e[q].z, || format!("opposite shape parameters {:?} {:?} agree", e[p].label, e[q].label));
                    }
                }
            }
        }
    }
    s.finish()
}

/// Clausen oddness and definition, closed forms vs the cubature oracle and
/// the series, symmetry and positivity.
pub fn volumes_suite(seed: u64, samples: usize) -> SuiteReport {
    let mut s = Suite::new("volumes");
    let mut rng = rng_for(seed, "volumes");
    for _ in 0..samples {
        let l = random_lambda(&mut rng);
        let x: f64 = rng.random_range(-12.0..12.0);
        s.close((volumes::clausen(l, -x) + volumes::clausen(l, x)).abs(), 1e-12, || format!("Cl odd at Λ={l} x={x}"));
        let x: f64 = rng.random_range(1e-3..3.0);
        let f = |t: f64| (2.0 * gcnum::s(l, 0.5 * t)).abs().ln();
        if let Some(e) = s.ok(quadrature::integrate(f, 0.0, x, 1e-13, 1e-13, 20_000), || "defining integral".into()) {
            s.close((volumes::clausen(l, x) + e.value).abs(), 1e-9, || format!("Cl vs its integral at Λ={l} x={x}"));
        }
    }
    let grid = [0.2, 0.5, 0.9];
    for l in Lambda::ALL {
        for &a in &grid {
            for &b in &grid {
                for kind in [Kind::Ideal, Kind::Lightlike] {
                    let Some(r) = s.ok(volumes::volume_report(kind, l, a, b, Some(1e-9), None), || format!("{kind} volume ({a}, {b}) Λ={l}")) else { continue };
                    s.close(r.rel_discrepancy.unwrap_or(f64::INFINITY), 1e-6, || format!("{kind} closed form vs oracle at Λ={l} ({a}, {b})"));
                    s.holds(r.closed_form > 0.0, || format!("{kind} volume positive at Λ={l} ({a}, {b})"));
                    let swapped = match kind {
                        Kind::Ideal => volumes::ideal_volume(l, b, a),
                        Kind::Lightlike => volumes::lightlike_volume(l, b, a),
                    };
                    if let Some(v) = s.ok(swapped, || "swapped volume".into()) {
                        s.close((v - r.closed_form).abs(), 1e-12 * r.closed_form.abs().max(1.0), || format!("{kind} α↔β symmetry at Λ={l}"));
                    }
                }
            }
        }
    }
    for l in [Lambda::Neg, Lambda::Pos] {
        for &a in &[0.1, 0.25, 0.4] {
            for &b in &[0.1, 0.25, 0.4] {
                let closed = volumes::lightlike_volume(l, a, b);
                let series = volumes::lightlike_volume_series(l.value(), a, b, 20);
                if let (Ok(c), Ok(sr)) = (closed, series) {
                    s.close((c - sr).abs(), 1e-10, || format!("series vs closed form at Λ={l} ({a}, {b})"));
                } else {
                    s.fail(format!("series or closed form failed at Λ={l} ({a}, {b})"));
                }
            }
        }
    }
    s.finish()
}

/// Names accepted by [`run_suite`], in execution order.
pub const SUITES: [&str; 11] = [
    "trig",
    "ring",
    "matmodel",
    "geometry",
    "cross_ratio",
    "edges",
    "duality",
    "symmetry",
    "normalization",
    "tetrahedra",
    "volumes",
];

/// Runs one named suite at its default size.
pub fn run_suite(name: &str, seed: u64) -> Option<SuiteReport> {
    Some(match name {
        "trig" => trig_suite(seed, 10_000),
        "ring" => ring_suite(seed, 2_000),
        "matmodel" => matmodel_suite(seed, 300),
        "geometry" => geometry_suite(seed, 200),
        "cross_ratio" => cross_ratio_suite(seed, 100),
        "edges" => edge_suite(seed, 5),
        "duality" => duality_suite(seed, 50),
        "symmetry" => symmetry_suite(seed, 30),
        "normalization" => normalization_suite(seed, 100),
        "tetrahedra" => tetrahedra_suite(),
        "volumes" => volumes_suite(seed, 100),
        _ => return None,
    })
}

/// Runs every suite in [`SUITES`].
pub fn run_suites(seed: u64) -> Vec<SuiteReport> {
    SUITES.iter().map(|n| run_suite(n, seed).expect("known suite")).collect()
}
