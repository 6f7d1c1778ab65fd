//! Series coefficients `alpha_j = <f, p_j>` for the functions the solvers
//! expand: `sign`, `1/x`, and caller-supplied analytic `f`.
//!
//! The contour producers quadrature the Cauchy-integral representation
//! `alpha_j = -sum_k f(z_k) w_k C[p_j w](z_k)` over circles around each
//! interval (trapezoid rule) or over the imaginary axis through the gap
//! (principal-value form, Gauss-Legendre after a tangent substitution). The
//! transforms come from the backward-recurrence ladder, so the computed
//! coefficients keep decaying cleanly below machine epsilon instead of
//! flooring at quadrature noise.

use num_complex::Complex64;

use super::cauchy::cauchy_ladder;
use super::{AkhiezerData, CoefficientStream};
use crate::cutdomain::{inverse_rate, Interval};
use crate::error::{Error, Result};
use crate::linalg::gauss_legendre;

/// Contour quadrature controls for the circle/principal-value producers.
#[derive(Clone, Debug)]
pub struct ContourOpts {
    /// Starting node count (per circle, or total Gauss-Legendre points for
    /// the principal-value rule).
    pub nodes: usize,
    /// Doubling cap.
    pub max_nodes: usize,
    /// Circle radius = radius_factor * (half-length + clearance).
    pub radius_factor: f64,
    /// Double the nodes until per-coefficient agreement <= 1e-11; with
    /// `false` a single pass at `nodes` is used (resolution studies).
    pub adaptive: bool,
}

impl Default for ContourOpts {
    fn default() -> Self {
        ContourOpts {
            nodes: 200,
            max_nodes: 3200,
            radius_factor: 1.0,
            adaptive: true,
        }
    }
}

impl ContourOpts {
    pub fn fixed(nodes: usize) -> Self {
        ContourOpts {
            nodes,
            adaptive: false,
            ..ContourOpts::default()
        }
    }
}

const SELF_AGREEMENT: f64 = 1e-11;

#[derive(Clone, Copy)]
struct Circle {
    center: f64,
    radius: f64,
}

/// One circle per interval, radius `radius_factor * (half + clearance)` with
/// clearance a quarter of the adjacent gap (capped by the half-length).
fn circles(data: &AkhiezerData, radius_factor: f64) -> Result<Vec<Circle>> {
    let domain = data.spec.domain();
    let ivs = domain.intervals();
    let mut out = Vec::with_capacity(ivs.len());
    for (i, iv) in ivs.iter().enumerate() {
        let half = iv.half_length();
        let mut clearance = half;
        if i > 0 {
            let (lo, hi) = domain.gap(i - 1);
            clearance = clearance.min((hi - lo) / 4.0);
        }
        if i + 1 < ivs.len() {
            let (lo, hi) = domain.gap(i);
            clearance = clearance.min((hi - lo) / 4.0);
        }
        let radius = radius_factor * (half + clearance);
        if radius <= half {
            return Err(Error::Geometry(format!(
                "circle around [{}, {}] (radius {radius}) does not enclose it",
                iv.lo(),
                iv.hi()
            )));
        }
        out.push(Circle {
            center: iv.midpoint(),
            radius,
        });
    }
    // circles must stay on their side of each separating line (gap midpoint)
    for i in 0..out.len().saturating_sub(1) {
        let (lo, hi) = domain.gap(i);
        let xi = 0.5 * (lo + hi);
        if out[i].center + out[i].radius >= xi || out[i + 1].center - out[i + 1].radius <= xi {
            return Err(Error::Geometry(format!(
                "contour circles cross the separating line at {xi}"
            )));
        }
    }
    Ok(out)
}

/// Table depth needed to evaluate a series of length `count` on the given
/// contour: the backward recurrence needs headroom inversely proportional to
/// the slowest decay rate `re g` over the contour.
pub(crate) fn required_depth(
    spec: &super::WeightSpec,
    count: usize,
    contour: &[Complex64],
) -> Result<usize> {
    let green = spec.domain().green()?;
    let mut min_rate = f64::INFINITY;
    let step = (contour.len() / 64).max(1);
    for z in contour.iter().step_by(step) {
        min_rate = min_rate.min(green.re(*z)?);
    }
    if !(min_rate > 1e-6) {
        return Err(Error::Geometry(
            "contour touches the domain; no decay headroom".into(),
        ));
    }
    let excess = (24.0 / min_rate).ceil() as usize + 64;
    Ok(count + excess.min(60_000))
}

fn circle_nodes(circles: &[Circle], m: usize) -> Vec<Complex64> {
    let mut nodes = Vec::with_capacity(circles.len() * m);
    for c in circles {
        for k in 0..m {
            let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            nodes.push(Complex64::new(
                c.center + c.radius * th.cos(),
                c.radius * th.sin(),
            ));
        }
    }
    nodes
}

/// Sampling points used to size the table for the default circle contour.
pub(crate) fn default_circle_points(data: &AkhiezerData, radius_factor: f64) -> Result<Vec<Complex64>> {
    Ok(circle_nodes(&circles(data, radius_factor)?, 64))
}

/// One trapezoid pass over all circles at `m` nodes each.
fn contour_pass(
    data: &AkhiezerData,
    f: &dyn Fn(Complex64) -> Complex64,
    count: usize,
    circles: &[Circle],
    m: usize,
) -> Result<Vec<Complex64>> {
    let excess = data.table.count().saturating_sub(count);
    let mut alpha = vec![Complex64::new(0.0, 0.0); count];
    for c in circles {
        for k in 0..m {
            let th = 2.0 * std::f64::consts::PI * k as f64 / m as f64;
            let e = Complex64::new(th.cos(), th.sin());
            let z = c.center + c.radius * e;
            let w = Complex64::new(0.0, 2.0 * std::f64::consts::PI * c.radius / m as f64) * e;
            let fz = f(z);
            let ladder = cauchy_ladder(&data.table, &data.quad, z, count, excess)?;
            for (aj, cj) in alpha.iter_mut().zip(&ladder) {
                *aj -= fz * w * cj;
            }
        }
    }
    Ok(alpha)
}

fn realize(alpha: Vec<Complex64>) -> Vec<f64> {
    let worst = alpha.iter().map(|a| a.im.abs()).fold(0.0, f64::max);
    if worst > 1e-12 {
        log::warn!("series coefficients have imaginary residue {worst:e}");
    }
    alpha.into_iter().map(|a| a.re).collect()
}

/// Coefficients of an arbitrary analytic `f` via circle contours. The decay
/// base attached to the stream is the slowest `e^{re g}` over the contour,
/// which is a valid envelope rate for any `f` analytic inside it.
pub fn general_f_coeffs(
    data: &AkhiezerData,
    f: impl Fn(Complex64) -> Complex64,
    count: usize,
    opts: &ContourOpts,
) -> Result<CoefficientStream> {
    assert!(count >= 1);
    let circles = circles(data, opts.radius_factor)?;
    let green = data.spec.domain().green()?;
    let mut min_rate = f64::INFINITY;
    for z in circle_nodes(&circles, 64) {
        min_rate = min_rate.min(green.re(z)?);
    }
    let rho = min_rate.exp();
    let mut m = opts.nodes;
    let mut prev: Option<Vec<Complex64>> = None;
    loop {
        let alpha = contour_pass(data, &f, count, &circles, m)?;
        if !opts.adaptive {
            return Ok(CoefficientStream::with_nodes(realize(alpha), rho, 5.0, m));
        }
        if let Some(p) = &prev {
            let agree = alpha
                .iter()
                .zip(p)
                .all(|(a, b)| (a - b).norm() <= SELF_AGREEMENT);
            if agree {
                return Ok(CoefficientStream::with_nodes(realize(alpha), rho, 5.0, m));
            }
        }
        if m >= opts.max_nodes {
            let worst = prev
                .map(|p| {
                    alpha
                        .iter()
                        .zip(&p)
                        .map(|(a, b)| (a - b).norm())
                        .fold(0.0, f64::max)
                })
                .unwrap_or(f64::INFINITY);
            return Err(Error::Accuracy {
                requested: SELF_AGREEMENT,
                achieved: worst,
                context: format!("contour quadrature hit the {m}-node cap"),
            });
        }
        prev = Some(alpha);
        m *= 2;
    }
}

/// Sign-function coefficients via circle contours: +1 on the circle around
/// the right interval, -1 around the left. Two-interval domains only.
pub fn sign_coeffs_circles(
    data: &AkhiezerData,
    count: usize,
    opts: &ContourOpts,
) -> Result<CoefficientStream> {
    if data.spec.domain().count() != 2 {
        return Err(Error::UnsupportedDomain(
            "sign coefficients need a two-interval domain".into(),
        ));
    }
    let (lo, hi) = data.spec.domain().gap(0);
    let xi = 0.5 * (lo + hi);
    let rho = data.spec.domain().sign_rate()?.rho;
    let sign = move |z: Complex64| {
        if z.re > xi {
            Complex64::new(1.0, 0.0)
        } else {
            Complex64::new(-1.0, 0.0)
        }
    };
    let mut stream = general_f_coeffs(data, sign, count, opts)?;
    stream.rho = rho;
    Ok(stream)
}

/// Sign-function coefficients through the principal-value integral along the
/// imaginary axis, `y = (2/pi) arctan(i z)` mapped to Gauss-Legendre nodes on
/// [-1, 1]. Needs 0 strictly inside the gap.
pub fn sign_coeffs_pv(data: &AkhiezerData, count: usize, opts: &ContourOpts) -> Result<CoefficientStream> {
    assert!(count >= 1);
    let domain = data.spec.domain();
    if domain.contains(0.0) {
        return Err(Error::Geometry("0 lies on the domain".into()));
    }
    let hull_lo = domain.intervals()[0].lo();
    let hull_hi = domain.intervals()[domain.count() - 1].hi();
    if !(hull_lo < 0.0 && 0.0 < hull_hi) {
        return Err(Error::Geometry(
            "0 must lie in a gap of the domain; shift the problem first".into(),
        ));
    }
    let rho = if domain.count() == 2 {
        domain.sign_rate()?.rho
    } else {
        domain.green()?.re(Complex64::new(0.0, 0.0))?.exp()
    };
    let excess = data.table.count().saturating_sub(count);
    let mut m = opts.nodes;
    let mut prev: Option<Vec<f64>> = None;
    loop {
        let (ys, ws) = gauss_legendre(m);
        let mut alpha = vec![0.0; count];
        for (&y, &w) in ys.iter().zip(&ws) {
            let z = (std::f64::consts::FRAC_PI_2 * y).tan();
            let point = Complex64::new(0.0, -z);
            let ladder = cauchy_ladder(&data.table, &data.quad, point, count, excess)?;
            let factor = -std::f64::consts::PI * (z * z + 1.0) * w;
            for (aj, cj) in alpha.iter_mut().zip(&ladder) {
                *aj += factor * cj.im;
            }
        }
        if !opts.adaptive {
            return Ok(CoefficientStream::with_nodes(alpha, rho, 5.0, m));
        }
        if let Some(p) = &prev {
            if alpha.iter().zip(p).all(|(a, b)| (a - b).abs() <= SELF_AGREEMENT) {
                return Ok(CoefficientStream::with_nodes(alpha, rho, 5.0, m));
            }
        }
        if m >= opts.max_nodes {
            let worst = prev
                .map(|p| {
                    alpha
                        .iter()
                        .zip(&p)
                        .map(|(a, b)| (a - b).abs())
                        .fold(0.0, f64::max)
                })
                .unwrap_or(f64::INFINITY);
            return Err(Error::Accuracy {
                requested: SELF_AGREEMENT,
                achieved: worst,
                context: format!("principal-value quadrature hit the {m}-node cap"),
            });
        }
        prev = Some(alpha);
        m *= 2;
    }
}

/// Closed-form `1/x` coefficients on a single interval `[alpha-c, alpha+c]`
/// with 0 outside: the geometric stream `alpha_0 = S_0`,
/// `alpha_k = sqrt(2) S_0 ratio^k` in the orthonormal Chebyshev basis, where
/// `S_0 = 1/(sqrt(alpha-c) sqrt(alpha+c))` and `ratio` is the signed rate.
pub fn inverse_coeffs_chebyshev(interval: Interval, count: usize) -> Result<CoefficientStream> {
    let ratio = inverse_rate(interval)?;
    let prod = interval.lo() * interval.hi();
    debug_assert!(prod > 0.0);
    // principal square roots: both factors negative flips the sign
    let s0 = if interval.lo() > 0.0 {
        1.0 / prod.sqrt()
    } else {
        -1.0 / prod.sqrt()
    };
    let mut alpha = Vec::with_capacity(count);
    let mut sk = s0;
    for k in 0..count {
        alpha.push(if k == 0 { s0 } else { std::f64::consts::SQRT_2 * sk });
        sk *= ratio;
    }
    Ok(CoefficientStream::new(alpha, 1.0 / ratio.abs(), 5.0))
}

/// `1/x` coefficients on an arbitrary cut domain with 0 off the domain:
/// `alpha_j = 2 pi i C[p_j w](0)`.
pub fn inverse_coeffs_general(data: &AkhiezerData, count: usize) -> Result<CoefficientStream> {
    assert!(count >= 1);
    let domain = data.spec.domain();
    if domain.contains(0.0) {
        return Err(Error::SingularDomain("0 lies on the domain".into()));
    }
    let rho = domain.green()?.re(Complex64::new(0.0, 0.0))?.exp();
    let excess = data.table.count().saturating_sub(count);
    let ladder = cauchy_ladder(&data.table, &data.quad, Complex64::new(0.0, 0.0), count, excess)?;
    // 2 pi i C[p_j w](0) is real for a real weight: keep -2 pi Im
    let alpha: Vec<f64> = ladder
        .iter()
        .map(|c| -2.0 * std::f64::consts::PI * c.im)
        .collect();
    Ok(CoefficientStream::new(alpha, rho, 5.0))
}

impl CoefficientStream {
    pub(crate) fn with_nodes(alpha: Vec<f64>, rho: f64, c: f64, nodes: usize) -> Self {
        let mut s = CoefficientStream::new(alpha, rho, c);
        s.contour_nodes = Some(nodes);
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::akhiezer::{poly_values, WeightSpec};
    use crate::cutdomain::CutDomain;

    fn data_for(dom: &str, count: usize) -> AkhiezerData {
        let spec = WeightSpec::akhiezer(CutDomain::parse(dom).unwrap()).unwrap();
        let pts = {
            let d0 = AkhiezerData::with_depth(spec.clone(), 8).unwrap();
            default_circle_points(&d0, 1.0).unwrap()
        };
        AkhiezerData::for_series(spec, count, &pts).unwrap()
    }

    #[test]
    fn constant_function_reproduces_orthonormality() {
        let data = data_for("-1,-0.5;0.5,1", 8);
        let s = general_f_coeffs(&data, |_| Complex64::new(1.0, 0.0), 8, &ContourOpts::default())
            .unwrap();
        assert!((s.alpha[0] - 1.0).abs() <= 1e-12);
        for j in 1..8 {
            assert!(s.alpha[j].abs() <= 1e-12, "alpha_{j} = {}", s.alpha[j]);
        }
    }

    #[test]
    fn sign_equals_general_with_sign_samples() {
        let data = data_for("-1,-0.5;0.5,1", 10);
        let opts = ContourOpts::fixed(128);
        let a = sign_coeffs_circles(&data, 10, &opts).unwrap();
        let b = general_f_coeffs(
            &data,
            |z| Complex64::new(if z.re > 0.0 { 1.0 } else { -1.0 }, 0.0),
            10,
            &opts,
        )
        .unwrap();
        assert_eq!(a.alpha, b.alpha);
    }

    #[test]
    fn circle_and_pv_streams_agree() {
        let data = data_for("-1,-0.5;0.5,1", 24);
        let a = sign_coeffs_circles(&data, 24, &ContourOpts::default()).unwrap();
        let b = sign_coeffs_pv(&data, 24, &ContourOpts::default()).unwrap();
        for j in 0..24 {
            assert!(
                (a.alpha[j] - b.alpha[j]).abs() <= 1e-10,
                "j={j}: {} vs {}",
                a.alpha[j],
                b.alpha[j]
            );
        }
    }

    #[test]
    fn sign_envelope_on_asymmetric_domain() {
        let count = 72;
        let data = data_for("-1.8,-0.5;2,3", count);
        let s = sign_coeffs_circles(&data, count, &ContourOpts::default()).unwrap();
        for j in 0..count {
            let env = s.envelope(j);
            if env < 1e-16 {
                break;
            }
            assert!(s.alpha[j].abs() <= env, "j={j}: {} vs {env}", s.alpha[j]);
        }
    }

    #[test]
    fn inverse_chebyshev_closed_form() {
        // alpha = 1.25, c = 1: S_0 = 4/3, ratio = -1/2, S_1 = -2/3
        let iv = Interval::new(0.25, 2.25).unwrap();
        let s = inverse_coeffs_chebyshev(iv, 4).unwrap();
        assert!((s.alpha[0] - 4.0 / 3.0).abs() <= 1e-14);
        let s1 = s.alpha[1] / std::f64::consts::SQRT_2;
        assert!((s1 + 2.0 / 3.0).abs() <= 1e-14, "S_1 = {s1}");
        // alternation for a positive interval
        assert!(s.alpha[1] < 0.0 && s.alpha[2] > 0.0 && s.alpha[3] < 0.0);
    }

    #[test]
    fn inverse_series_sums_to_reciprocal() {
        let iv = Interval::new(1.0, 4.0).unwrap();
        let table = crate::akhiezer::chebyshev_recurrence(iv, 60);
        let s = inverse_coeffs_chebyshev(iv, 60).unwrap();
        for x in [1.3, 2.5, 3.9] {
            let p = poly_values(&table, 60, x);
            let sum: f64 = s.alpha.iter().zip(&p).map(|(a, b)| a * b).sum();
            assert!((sum - 1.0 / x).abs() <= 1e-12, "x={x}: {sum}");
        }
    }

    #[test]
    fn inverse_general_matches_chebyshev_on_single_interval() {
        let iv = Interval::new(2.5, 4.8).unwrap();
        let spec = WeightSpec::chebyshev(iv);
        let data = AkhiezerData::with_depth(spec, 400).unwrap();
        let a = inverse_coeffs_general(&data, 30).unwrap();
        let b = inverse_coeffs_chebyshev(iv, 30).unwrap();
        for j in 0..30 {
            assert!(
                (a.alpha[j] - b.alpha[j]).abs() <= 1e-11,
                "j={j}: {} vs {}",
                a.alpha[j],
                b.alpha[j]
            );
        }
    }

    #[test]
    fn inverse_two_interval_envelope() {
        // the multi-interval figure domain: decay base e^{re g(0)}
        let spec = WeightSpec::akhiezer(CutDomain::parse("1,2.8;10.5,11.8").unwrap()).unwrap();
        let data = AkhiezerData::with_depth(spec, 220).unwrap();
        let s = inverse_coeffs_general(&data, 40).unwrap();
        for j in 0..40 {
            assert!(s.alpha[j].abs() <= s.envelope(j).max(1e-18), "j={j}");
        }
        assert!(s.alpha.iter().all(|a| a.is_finite()));
    }

    #[test]
    fn exp_coeffs_decay_superexponentially() {
        let data = data_for("-2,-0.5;0.5,6", 40);
        let s = general_f_coeffs(&data, |z| z.exp(), 40, &ContourOpts::default()).unwrap();
        // log|alpha| decrements accelerate (entire function)
        let l: Vec<f64> = s.alpha.iter().map(|a| a.abs().max(1e-300).ln()).collect();
        let d1 = l[5] - l[15];
        let d2 = l[15] - l[25];
        assert!(d2 > d1 + 1.0, "decay not accelerating: {d1} then {d2}");
    }

    #[test]
    fn tight_circles_reject() {
        // near-touching intervals force circles across the separating line
        let spec = WeightSpec::akhiezer(CutDomain::parse("0,1;1.0001,2").unwrap()).unwrap();
        let data = AkhiezerData::with_depth(spec, 16).unwrap();
        let err = general_f_coeffs(
            &data,
            |_| Complex64::new(1.0, 0.0),
            4,
            &ContourOpts {
                radius_factor: 3.0,
                ..ContourOpts::default()
            },
        )
        .unwrap_err();
        assert!(matches!(err, Error::Geometry(_)), "{err}");
    }

    #[test]
    fn pv_rejects_zero_on_or_off_domain() {
        let spec = WeightSpec::akhiezer(CutDomain::parse("-1,0.5;2,3").unwrap()).unwrap();
        let data = AkhiezerData::with_depth(spec, 16).unwrap();
        assert!(matches!(
            sign_coeffs_pv(&data, 4, &ContourOpts::default()),
            Err(Error::Geometry(_))
        ));
        let spec = WeightSpec::akhiezer(CutDomain::parse("1,2;3,4").unwrap()).unwrap();
        let data = AkhiezerData::with_depth(spec, 16).unwrap();
        assert!(matches!(
            sign_coeffs_pv(&data, 4, &ContourOpts::default()),
            Err(Error::Geometry(_))
        ));
    }
}
