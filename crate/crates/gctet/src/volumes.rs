//! Generalized Clausen functions, closed-form volumes, the Bernoulli power
//! series for lightlike volumes and a cubature oracle built directly from
//! the volume forms of the two tetrahedron parametrizations.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::gcnum::{self, Lambda};
use crate::quadrature::{self, Estimate};
use crate::tetrahedra::{check_angles, Kind};

/// Largest Bernoulli index held in the table.
pub const BERNOULLI_MAX: usize = 60;

/// Split point for the Λ = −1 Clausen integral.
const CLAUSEN_DELTA: f64 = 1e-3;

/// Cell budget of the 2D oracle.
const ORACLE_MAX_CELLS: usize = 400_000;

fn bernoulli_table() -> &'static [BigRational] {
    static TABLE: OnceLock<Vec<BigRational>> = OnceLock::new();
    TABLE.get_or_init(|| {
        // B_m = −1/(m+1) Σ_{k<m} C(m+1, k) B_k
        let mut b: Vec<BigRational> = vec![BigRational::one()];
        for m in 1..=BERNOULLI_MAX {
            let mut acc = BigRational::zero();
            let mut binom = BigInt::one();
            for (k, bk) in b.iter().enumerate() {
                acc += BigRational::from_integer(binom.clone()) * bk;
                binom = binom * BigInt::from(m + 1 - k) / BigInt::from(k + 1);
            }
            b.push(-acc / BigRational::from_integer(BigInt::from(m + 1)));
        }
        b
    })
}

/// B_n as an exact rational, for even n in [0, 60].
pub fn bernoulli_exact(n: usize) -> Result<BigRational> {
    if n % 2 == 1 || n > BERNOULLI_MAX {
        return Err(Error::DomainError(format!("bernoulli needs even n ≤ {BERNOULLI_MAX}, got {n}")));
    }
    Ok(bernoulli_table()[n].clone())
}

/// B_n rounded to double.
pub fn bernoulli(n: usize) -> Result<f64> {
    Ok(bernoulli_exact(n)?.to_f64().expect("finite rational"))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

/// |B_2k| / (2k (2k+1) (2k)!) for k = 1..30.
fn clausen_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        (1..=BERNOULLI_MAX / 2)
            .map(|k| {
                let n = 2 * k;
                let den = BigInt::from(n * (n + 1)) * factorial(n);
                let q = bernoulli_table()[n].clone() / BigRational::from_integer(den);
                q.to_f64().expect("finite").abs()
            })
            .collect()
    })
}

/// 4^k B_2k (−1)^k / (2k+1)! for k = 0..30.
fn series_coeffs() -> &'static [f64] {
    static C: OnceLock<Vec<f64>> = OnceLock::new();
    C.get_or_init(|| {
        (0..=BERNOULLI_MAX / 2)
            .map(|k| {
                let sign = if k % 2 == 0 { 1 } else { -1 };
                let num = BigInt::from(sign) * BigInt::from(4).pow(k as u32);
                let q = bernoulli_table()[2 * k].clone() * BigRational::from_integer(num)
                    / BigRational::from_integer(factorial(2 * k + 1));
                q.to_f64().expect("finite")
            })
            .collect()
    })
}

/// Classical Clausen function on (−π, π] from its Bernoulli expansion.
fn clausen_pos_reduced(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    let x2 = x * x;
    let mut pow = x * x2;
    let mut sum = 0.0;
    for &c in clausen_coeffs() {
        let term = c * pow;
        sum += term;
        if term.abs() < 1e-18 * sum.abs() {
            break;
        }
        pow *= x2;
    }
    x - x * x.abs().ln() + sum
}

/// −∫₀^x log(2 sinh(θ/2)) dθ for x ≥ 0.
fn clausen_neg(x: f64) -> f64 {
    // log(2 sinh(θ/2)) = log θ + θ²/24 − θ⁴/2880 + θ⁶/181440 − …
    let head = |d: f64| d * d.ln() - d + d.powi(3) / 72.0 - d.powi(5) / 14400.0 + d.powi(7) / 1_270_080.0;
    if x <= CLAUSEN_DELTA {
        return if x == 0.0 { 0.0 } else { -head(x) };
    }
    let f = |t: f64| 0.5 * t + (-(-t).exp_m1()).ln();
    let tail = quadrature::integrate(f, CLAUSEN_DELTA, x, 1e-15, 1e-15, 10_000)
        .map(|e| e.value)
        .unwrap_or_else(|e| match e {
            Error::ToleranceNotReached { estimate, .. } => estimate,
            _ => unreachable!(),
        });
    -head(CLAUSEN_DELTA) - tail
}

/// Cl_Λ(x) = −∫₀^x log|2 s_Λ(θ/2)| dθ, extended oddly.
pub fn clausen(lam: Lambda, x: f64) -> f64 {
    if x < 0.0 {
        return -clausen(lam, -x);
    }
    match lam {
        Lambda::Pos => {
            let r = x.rem_euclid(2.0 * PI);
            if r > PI {
                -clausen_pos_reduced(2.0 * PI - r)
            } else {
                clausen_pos_reduced(r)
            }
        }
        Lambda::Zero => {
            if x == 0.0 {
                0.0
            } else {
                x * (1.0 - x.ln())
            }
        }
        Lambda::Neg => clausen_neg(x),
    }
}

/// ½(Cl_Λ(2α) + Cl_Λ(2β) + Cl_Λ(2γ)) with γ = −(α+β).
pub fn ideal_volume(lam: Lambda, alpha: f64, beta: f64) -> Result<f64> {
    check_angles(lam, alpha, beta)?;
    let g = -(alpha + beta);
    Ok(0.5 * (clausen(lam, 2.0 * alpha) + clausen(lam, 2.0 * beta) + clausen(lam, 2.0 * g)))
}

pub fn lightlike_volume(lam: Lambda, alpha: f64, beta: f64) -> Result<f64> {
    check_angles(lam, alpha, beta)?;
    let g = -(alpha + beta);
    if lam == Lambda::Zero {
        return Ok(-alpha * beta * g / 3.0);
    }
    let l = lam.value();
    let cl = clausen(lam, 2.0 * alpha) + clausen(lam, 2.0 * beta) + clausen(lam, 2.0 * g);
    let lg = |a: f64| a * gcnum::s(lam, a).abs().ln();
    Ok(cl / (2.0 * l) + (lg(alpha) + lg(beta) + lg(g)) / l)
}

/// Σ_{j=1}^{n−1} C(n, j) α^j β^{n−j} = (α+β)^n − α^n − β^n without cancellation.
fn binomial_interior(n: usize, alpha: f64, beta: f64) -> f64 {
    let mut binom = 1.0;
    let mut sum = 0.0;
    for j in 1..n {
        binom = binom * (n + 1 - j) as f64 / j as f64;
        sum += binom * alpha.powi(j as i32) * beta.powi((n - j) as i32);
    }
    sum
}

/// Power series of the lightlike volume in (α, β) and real Λ, truncated after
/// `order` terms.
///
/// Outside |α+β| < π/√|Λ| the value is returned inside
/// [`Error::ConvergenceWarning`].
pub fn lightlike_volume_series(lam: f64, alpha: f64, beta: f64, order: usize) -> Result<f64> {
    if !(1..=BERNOULLI_MAX / 2).contains(&order) {
        return Err(Error::DomainError(format!("series order must be in 1..={}, got {order}", BERNOULLI_MAX / 2)));
    }
    if !(lam.is_finite() && alpha.is_finite() && beta.is_finite()) {
        return Err(Error::DomainError("non-finite series argument".into()));
    }
    let coeffs = series_coeffs();
    let mut value = 0.0;
    for (k, &ck) in coeffs.iter().enumerate().take(order + 1).skip(1) {
        value -= ck * lam.powi(k as i32 - 1) * binomial_interior(2 * k + 1, alpha, beta);
    }
    if lam != 0.0 {
        let radius = PI / lam.abs().sqrt();
        if (alpha + beta).abs() >= radius {
            return Err(Error::ConvergenceWarning { value, radius });
        }
    }
    Ok(value)
}

/// x − sin x.
fn x_minus_sin(x: f64) -> f64 {
    if x.abs() < 0.5 {
        // x³/3! − x⁵/5! + …
        let x2 = x * x;
        let (mut term, mut sum, mut n) = (x * x2 / 6.0, 0.0f64, 3.0);
        while term.abs() > 1e-20 * sum.abs().max(f64::MIN_POSITIVE) {
            sum += term;
            term *= -x2 / ((n + 1.0) * (n + 2.0));
            n += 2.0;
        }
        sum
    } else {
        x - x.sin()
    }
}

/// sinh x − x.
fn sinh_minus_x(x: f64) -> f64 {
    if x.abs() < 0.5 {
        let x2 = x * x;
        let (mut term, mut sum, mut n) = (x * x2 / 6.0, 0.0f64, 3.0);
        while term.abs() > 1e-20 * sum.abs().max(f64::MIN_POSITIVE) {
            sum += term;
            term *= x2 / ((n + 1.0) * (n + 2.0));
            n += 2.0;
        }
        sum
    } else {
        x.sinh() - x
    }
}

/// ∫₀^r s_Λ(ρ)² dρ.
fn s_squared_antiderivative(lam: Lambda, r: f64) -> f64 {
    match lam {
        Lambda::Pos => 0.25 * x_minus_sin(2.0 * r),
        Lambda::Zero => r * r * r / 3.0,
        Lambda::Neg => 0.25 * sinh_minus_x(2.0 * r),
    }
}

/// Integrand of the lightlike oracle in (u, v) = (s+t, s−t) ∈ [0, π/2]².
fn lightlike_integrand(lam: Lambda, alpha: f64, beta: f64) -> impl Fn(f64, f64) -> f64 {
    let (sa, sb) = (gcnum::s(lam, alpha), gcnum::s(lam, beta));
    let a = 0.5 * (sa / sb - sb / sa);
    let c = 0.5 * (sa / sb + sb / sa);
    let b = gcnum::c(lam, alpha + beta);
    let d = gcnum::s(lam, alpha + beta);
    move |u, v| {
        let (s, t) = (0.5 * (u + v), 0.5 * (u - v));
        let cs = s.cos();
        if cs <= 0.0 {
            return 0.0;
        }
        let x = (a * t.sin() + b * t.cos() + c * s.sin()) / (d * cs);
        let r = gcnum::ct_inv_clamped(lam, x);
        0.5 * s_squared_antiderivative(lam, r) / (cs * cs)
    }
}

/// Integrand of the ideal oracle on θ ∈ [−α, 0], u ∈ [0, 1] after the
/// t-integral and the rescaling r = u·R(θ).
fn ideal_integrand(lam: Lambda, alpha: f64, beta: f64) -> impl Fn(f64, f64) -> f64 {
    let g = -(alpha + beta);
    let (sa, sb, sg) = (gcnum::s(lam, alpha), gcnum::s(lam, beta), gcnum::s(lam, g));
    move |th, u| {
        let k = gcnum::s(lam, th - g) / sa;
        let r = sb / sa * sg / gcnum::s(lam, th - beta);
        let den = k - u * r;
        if den <= 0.0 {
            return 0.0;
        }
        0.5 * r / den
    }
}

/// Volume by adaptive cubature of the volume form over the parametrization
/// of the tetrahedron. Never evaluates a Clausen function.
pub fn volume_quadrature(kind: Kind, lam: Lambda, alpha: f64, beta: f64, tol: f64) -> Result<Estimate> {
    check_angles(lam, alpha, beta)?;
    if !(tol >= 1e-10) {
        return Err(Error::DomainError(format!("quadrature tolerance must be ≥ 1e-10, got {tol}")));
    }
    match kind {
        Kind::Lightlike => quadrature::integrate_2d(
            lightlike_integrand(lam, alpha, beta),
            (0.0, FRAC_PI_2, 0.0, FRAC_PI_2),
            tol,
            tol,
            ORACLE_MAX_CELLS,
        ),
        Kind::Ideal => quadrature::integrate_2d(ideal_integrand(lam, alpha, beta), (-alpha, 0.0, 0.0, 1.0), tol, tol, ORACLE_MAX_CELLS),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesValue {
    pub order: usize,
    pub value: f64,
    /// False when α+β lies outside the disc of convergence.
    pub converges: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VolumeReport {
    pub kind: Kind,
    pub lambda: Lambda,
    pub alpha: f64,
    pub beta: f64,
    pub closed_form: f64,
    pub oracle: Option<Estimate>,
    pub series: Option<SeriesValue>,
    /// |closed_form − oracle| / max(|closed_form|, 1e−12), when the oracle ran.
    pub rel_discrepancy: Option<f64>,
}

pub fn rel_discrepancy(closed_form: f64, oracle: f64) -> f64 {
    (closed_form - oracle).abs() / closed_form.abs().max(1e-12)
}

/// Closed form plus the optional oracle (`oracle_tol`) and series (`series_order`).
pub fn volume_report(
    kind: Kind,
    lam: Lambda,
    alpha: f64,
    beta: f64,
    oracle_tol: Option<f64>,
    series_order: Option<usize>,
) -> Result<VolumeReport> {
    let closed_form = match kind {
        Kind::Ideal => ideal_volume(lam, alpha, beta)?,
        Kind::Lightlike => lightlike_volume(lam, alpha, beta)?,
    };
    let series = match series_order {
        None => None,
        Some(_) if kind == Kind::Ideal => {
            return Err(Error::DomainError("the power series is defined for lightlike tetrahedra only".into()))
        }
        Some(k) => Some(match lightlike_volume_series(lam.value(), alpha, beta, k) {
            Ok(value) => SeriesValue { order: k, value, converges: true },
            Err(Error::ConvergenceWarning { value, .. }) => SeriesValue { order: k, value, converges: false },
            Err(e) => return Err(e),
        }),
    };
    let oracle = oracle_tol.map(|tol| volume_quadrature(kind, lam, alpha, beta, tol)).transpose()?;
    Ok(VolumeReport {
        kind,
        lambda: lam,
        alpha,
        beta,
        closed_form,
        rel_discrepancy: oracle.map(|o| rel_discrepancy(closed_form, o.value)),
        oracle,
        series,
    })
}
