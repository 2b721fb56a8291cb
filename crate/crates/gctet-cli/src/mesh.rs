//! Klein-chart meshes of tetrahedron faces.
//!
//! X_Λ is drawn in the chart x₂ = 1 and Y_Λ in the chart y₁ = 1. A lightlike
//! tetrahedron is the cone over its vertex lifts, so its faces are sampled
//! in ℝ⁴ and projected; an ideal tetrahedron is drawn as the affine hull of
//! its vertices in the chart.

use std::fmt::Write;

use gctet::tetrahedra::{standard_lightlike_vertices, Vertices};
use gctet::{Error, Kind, Tetrahedron};

/// Faces as vertex triples, each opposite one vertex.
const FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];

/// Relative size below which a chart coordinate counts as zero.
const CHART_EPS: f64 = 1e-12;

fn mat_vec(m: &[[f64; 4]; 4], v: [f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (i, row) in m.iter().enumerate() {
        out[i] = (0..4).map(|j| row[j] * v[j]).sum();
    }
    out
}

fn norm(v: [f64; 4]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Vertex lifts in ℝ⁴ and the index of the chart coordinate.
fn lifts(t: &Tetrahedron) -> Result<([[f64; 4]; 4], usize), Error> {
    match (t.kind(), t.vertices()) {
        (Kind::Lightlike, _) => {
            let m = t.pose().ambient_matrix(Kind::Lightlike.space());
            let std = standard_lightlike_vertices(t.lambda(), t.alpha(), t.beta());
            let v = std.map(|p| mat_vec(&m, p.vec()));
            let signs: Vec<f64> = v.iter().map(|x| x[1].signum()).collect();
            if v.iter().any(|x| x[1].abs() <= CHART_EPS * norm(*x)) || signs.iter().any(|s| *s != signs[0]) {
                return Err(Error::ChartInversionFailure("the tetrahedron meets the plane x₂ = 0".into()));
            }
            Ok((v, 1))
        }
        (Kind::Ideal, Vertices::Ideal(b)) => {
            let mut v = b.map(|p| p.vec4());
            for x in v.iter_mut() {
                if x[0].abs() <= CHART_EPS * norm(*x) {
                    return Err(Error::ChartInversionFailure("an ideal vertex lies on the plane y₁ = 0".into()));
                }
                if x[0] < 0.0 {
                    *x = x.map(|c| -c);
                }
            }
            Ok((v, 0))
        }
        _ => unreachable!("kind and vertices agree"),
    }
}

fn chart(v: [f64; 4], k: usize) -> [f64; 3] {
    let mut out = [0.0; 3];
    let mut n = 0;
    for (i, x) in v.iter().enumerate() {
        if i != k {
            out[n] = x / v[k];
            n += 1;
        }
    }
    out
}

/// Plain-text mesh: each face is cut into `density`² triangles.
#[allow(clippy::needless_range_loop)]
pub fn mesh(t: &Tetrahedron, density: usize) -> Result<String, Error> {
    if density == 0 {
        return Err(Error::DomainError("mesh density must be at least 1".into()));
    }
    let (v, k) = lifts(t)?;
    // ideal vertices are joined affinely in the chart
    let v = match t.kind() {
        Kind::Ideal => v.map(|x| x.map(|c| c / x[k])),
        Kind::Lightlike => v,
    };
    let n = density;
    let mut out = String::new();
    writeln!(out, "# gctet mesh lambda={} kind={} alpha={:?} beta={:?}", t.lambda(), t.kind(), t.alpha(), t.beta()).unwrap();
    let chart_name = if k == 1 { "x2 = 1 (coordinates x1 x3 x4)" } else { "y1 = 1 (coordinates y2 y3 y4)" };
    writeln!(out, "# chart {chart_name}, {} faces, density {n}", FACES.len()).unwrap();
    let mut faces = String::new();
    let mut base = 1;
    for f in FACES {
        // grid point (i, j) has barycentric weights ((n − i − j), i, j)/n
        let mut index = vec![vec![0usize; n + 1]; n + 1];
        let mut next = base;
        for i in 0..=n {
            for j in 0..=n - i {
                let w = [(n - i - j) as f64, i as f64, j as f64].map(|x| x / n as f64);
                let p: [f64; 4] = std::array::from_fn(|c| w[0] * v[f[0]][c] + w[1] * v[f[1]][c] + w[2] * v[f[2]][c]);
                let [x, y, z] = chart(p, k);
                writeln!(out, "v {x:?} {y:?} {z:?}").unwrap();
                index[i][j] = next;
                next += 1;
            }
        }
        for i in 0..n {
            for j in 0..n - i {
                writeln!(faces, "f {} {} {}", index[i][j], index[i + 1][j], index[i][j + 1]).unwrap();
                if i + j + 1 < n {
                    writeln!(faces, "f {} {} {}", index[i + 1][j], index[i + 1][j + 1], index[i][j + 1]).unwrap();
                }
            }
        }
        base = next;
    }
    out.push_str(&faces);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use gctet::tetrahedra::from_angles;
    use gctet::Lambda;

    fn count(s: &str, prefix: &str) -> usize {
        s.lines().filter(|l| l.starts_with(prefix)).count()
    }

    #[test]
    fn counts_and_indices() {
        for kind in [Kind::Lightlike, Kind::Ideal] {
            let t = from_angles(kind, Lambda::Pos, 0.6, 0.7).unwrap();
            let m = mesh(&t, 3).unwrap();
            assert_eq!(count(&m, "v "), 4 * 10);
            assert_eq!(count(&m, "f "), 4 * 9);
            for l in m.lines().filter(|l| l.starts_with("f ")) {
                for i in l[2..].split(' ') {
                    let i: usize = i.parse().unwrap();
                    assert!((1..=40).contains(&i));
                }
            }
        }
    }

    #[test]
    fn corners_are_the_projected_vertices() {
        let t = from_angles(Kind::Lightlike, Lambda::Zero, 0.5, 0.8).unwrap();
        let m = mesh(&t, 1).unwrap();
        let pts: Vec<[f64; 3]> = m
            .lines()
            .filter(|l| l.starts_with("v "))
            .map(|l| {
                let v: Vec<f64> = l[2..].split(' ').map(|x| x.parse().unwrap()).collect();
                [v[0], v[1], v[2]]
            })
            .collect();
        let Vertices::Lightlike(xs) = t.vertices() else { unreachable!() };
        for x in xs {
            let want = chart(x.vec(), 1);
            assert!(pts.iter().any(|p| (0..3).all(|c| (p[c] - want[c]).abs() < 1e-12)));
        }
    }
}
