//! The "Akhiezer data": weights on cut domains, recurrence coefficients of
//! the associated orthonormal polynomials, weighted Cauchy transforms, and
//! series coefficients for `sign`, `1/x` and general analytic functions.
//!
//! Weights are normalized to unit mass, so `p_0 = 1` and the zeroth moment
//! of every quadrature rule built here is 1. On a single interval the
//! polynomials are scaled Chebyshev; on a symmetric (or balanced) pair of
//! intervals the recurrence has a closed form; everything else goes through
//! the discretized Stieltjes procedure.

mod cauchy;
mod coeffs;

pub use cauchy::cauchy_transform;
pub use coeffs::{
    general_f_coeffs, inverse_coeffs_chebyshev, inverse_coeffs_general, sign_coeffs_circles,
    sign_coeffs_pv, ContourOpts,
};
pub(crate) use coeffs::required_depth;

use crate::cutdomain::{CutDomain, Interval};
use crate::error::{Error, Result};
use crate::linalg::gauss_legendre;

/// Weight function class on a cut domain. Endpoint exponents are half-integer
/// powers: `-1` encodes an inverse square root factor, `+1` a square-root
/// zero.
#[derive(Clone, Debug)]
pub enum WeightKind {
    /// `1/(pi sqrt((x-lo)(hi-x)))` on a single interval.
    ChebyshevFirstKind,
    /// `sqrt(x-g1) / (pi sqrt(g2-x) sqrt(x-b1) sqrt(x-b2))` on
    /// `[b1,g1] u [b2,g2]`, square roots read per interval; unit mass.
    AkhiezerTwoInterval,
    /// Per-interval endpoint exponents `(c_j, d_j)`, each `-1` or `+1`,
    /// normalized numerically.
    GeneralExponent(Vec<(i8, i8)>),
}

/// A weight on a cut domain, normalized so its mass is 1.
#[derive(Clone, Debug)]
pub struct WeightSpec {
    domain: CutDomain,
    kind: WeightKind,
    /// Multiplies the raw formula so the total mass is exactly 1.
    scale: f64,
    /// Mass of the raw (unscaled) formula, kept for diagnostics.
    raw_mass: f64,
}

impl WeightSpec {
    pub fn chebyshev(interval: Interval) -> Self {
        WeightSpec {
            domain: CutDomain::single(interval),
            kind: WeightKind::ChebyshevFirstKind,
            scale: 1.0,
            raw_mass: 1.0,
        }
    }

    pub fn akhiezer(domain: CutDomain) -> Result<Self> {
        if domain.count() != 2 {
            return Err(Error::UnsupportedDomain(format!(
                "the two-interval weight needs two intervals, domain has {}",
                domain.count()
            )));
        }
        let mut spec = WeightSpec {
            domain,
            kind: WeightKind::AkhiezerTwoInterval,
            scale: 1.0,
            raw_mass: 1.0,
        };
        spec.normalize();
        Ok(spec)
    }

    pub fn general(domain: CutDomain, exponents: Vec<(i8, i8)>) -> Result<Self> {
        if exponents.len() != domain.count() {
            return Err(Error::UnsupportedDomain(
                "one exponent pair per interval required".into(),
            ));
        }
        if exponents
            .iter()
            .any(|&(c, d)| (c != 1 && c != -1) || (d != 1 && d != -1))
        {
            return Err(Error::UnsupportedDomain(
                "endpoint exponents must be -1 or +1".into(),
            ));
        }
        let mut spec = WeightSpec {
            domain,
            kind: WeightKind::GeneralExponent(exponents),
            scale: 1.0,
            raw_mass: 1.0,
        };
        spec.normalize();
        Ok(spec)
    }

    /// The natural weight for a domain: Chebyshev on one interval, the
    /// two-interval weight on two.
    pub fn auto(domain: CutDomain) -> Result<Self> {
        match domain.count() {
            1 => Ok(WeightSpec::chebyshev(domain.intervals()[0])),
            2 => WeightSpec::akhiezer(domain),
            _ => {
                let exps = vec![(-1i8, -1i8); domain.count()];
                WeightSpec::general(domain, exps)
            }
        }
    }

    fn normalize(&mut self) {
        // mass from the same theta-substituted rule used everywhere else
        let quad = sigma_quadrature_raw(self, 320);
        let mass: f64 = quad.weights.iter().sum();
        self.raw_mass = mass;
        self.scale = 1.0 / mass;
    }

    pub fn domain(&self) -> &CutDomain {
        &self.domain
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    /// Mass of the unnormalized formula (1 up to quadrature accuracy for the
    /// Chebyshev and two-interval kinds).
    pub fn raw_mass(&self) -> f64 {
        self.raw_mass
    }

    /// Endpoint exponents `(c, d)` of interval `i`.
    fn exponents(&self, i: usize) -> (i32, i32) {
        match &self.kind {
            WeightKind::ChebyshevFirstKind => (-1, -1),
            WeightKind::AkhiezerTwoInterval => {
                if i == 0 {
                    (-1, 1)
                } else {
                    (-1, -1)
                }
            }
            WeightKind::GeneralExponent(e) => (e[i].0 as i32, e[i].1 as i32),
        }
    }

    /// Smooth positive factor of the weight on interval `i` (everything but
    /// that interval's own endpoint powers), including the normalization.
    fn smooth_part(&self, i: usize, x: f64) -> f64 {
        let s = match &self.kind {
            WeightKind::ChebyshevFirstKind => std::f64::consts::FRAC_1_PI,
            WeightKind::AkhiezerTwoInterval => {
                let ivs = self.domain.intervals();
                let (b1, g1) = (ivs[0].lo(), ivs[0].hi());
                let (b2, g2) = (ivs[1].lo(), ivs[1].hi());
                if i == 0 {
                    1.0 / (std::f64::consts::PI * ((g2 - x) * (b2 - x)).sqrt())
                } else {
                    (x - g1).sqrt() / (std::f64::consts::PI * (x - b1).sqrt())
                }
            }
            WeightKind::GeneralExponent(_) => 1.0,
        };
        s * self.scale
    }

    /// Pointwise weight value; `x` must lie strictly inside one interval.
    pub fn eval(&self, x: f64) -> Result<f64> {
        for (i, iv) in self.domain.intervals().iter().enumerate() {
            if iv.lo() < x && x < iv.hi() {
                let (c, d) = self.exponents(i);
                let fac = (x - iv.lo()).powf(c as f64 / 2.0) * (iv.hi() - x).powf(d as f64 / 2.0);
                return Ok(self.smooth_part(i, x) * fac);
            }
        }
        Err(Error::Geometry(format!(
            "{x} is not interior to the domain"
        )))
    }
}

/// Pointwise evaluation of the weight (spec-level name for
/// [`WeightSpec::eval`]).
pub fn weight_eval(spec: &WeightSpec, x: f64) -> Result<f64> {
    spec.eval(x)
}

/// Discrete rule with `sum w_i q(x_i) ~ int q(x) w(x) dx` for smooth `q`.
/// Built per interval through `x = mid + half cos(theta)`; the substitution's
/// Jacobian absorbs every endpoint square-root factor, leaving an analytic
/// integrand for Gauss-Legendre in `theta`.
#[derive(Clone, Debug)]
pub struct SigmaQuadrature {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl SigmaQuadrature {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `int q w` by the rule, compensated summation.
    pub fn integrate(&self, q: impl Fn(f64) -> f64) -> f64 {
        let mut acc = crate::linalg::Kahan::default();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc.add(w * q(x));
        }
        acc.value()
    }
}

/// Gauss-Legendre-in-theta rule absorbing the weight; `nodes_per_interval`
/// must be at least 4.
pub fn sigma_quadrature(spec: &WeightSpec, nodes_per_interval: usize) -> SigmaQuadrature {
    assert!(nodes_per_interval >= 4, "need at least 4 nodes per interval");
    sigma_quadrature_raw(spec, nodes_per_interval)
}

/// Same rule built from the raw (possibly unnormalized) formula; used during
/// construction to measure the mass.
fn sigma_quadrature_raw(spec: &WeightSpec, nodes_per_interval: usize) -> SigmaQuadrature {
    let (t, gw) = gauss_legendre(nodes_per_interval);
    let mut nodes = Vec::with_capacity(nodes_per_interval * spec.domain.count());
    let mut weights = Vec::with_capacity(nodes.capacity());
    for (i, iv) in spec.domain.intervals().iter().enumerate() {
        let mid = iv.midpoint();
        let half = iv.half_length();
        let (c, d) = spec.exponents(i);
        let root2h = (2.0 * half).sqrt();
        // theta descending so the x nodes come out ascending per interval
        for (tk, wk) in t.iter().rev().zip(gw.iter().rev()) {
            let theta = (tk + 1.0) * std::f64::consts::FRAC_PI_2;
            let x = mid + half * theta.cos();
            let (sin_h, cos_h) = (0.5 * theta).sin_cos();
            // (x-lo)^{c/2} (hi-x)^{d/2} dx with the exact theta forms
            // x - lo = 2 h cos^2(theta/2), hi - x = 2 h sin^2(theta/2)
            let endpoint = (root2h * cos_h).powi(c) * (root2h * sin_h).powi(d);
            let jacobian = 2.0 * half * sin_h * cos_h;
            let w = wk * std::f64::consts::FRAC_PI_2 * spec.smooth_part(i, x) * endpoint * jacobian;
            nodes.push(x);
            weights.push(w);
        }
    }
    SigmaQuadrature { nodes, weights }
}

/// Jacobi coefficients `(a_k, b_k)` of the orthonormal three-term recurrence
/// `x p_k = b_{k-1} p_{k-1} + a_k p_k + b_k p_{k+1}`, with `b_k > 0`.
#[derive(Clone, Debug)]
pub struct RecurrenceTable {
    a: Vec<f64>,
    b: Vec<f64>,
}

impl RecurrenceTable {
    pub fn new(a: Vec<f64>, b: Vec<f64>) -> Result<Self> {
        if a.len() != b.len() {
            return Err(Error::DimensionMismatch(
                "recurrence table needs matching a/b lengths".into(),
            ));
        }
        if b.iter().any(|&bk| !(bk > 0.0)) {
            return Err(Error::IllConditioned(
                "recurrence table needs b_k > 0".into(),
            ));
        }
        Ok(RecurrenceTable { a, b })
    }

    pub fn count(&self) -> usize {
        self.a.len()
    }

    pub fn a(&self, k: usize) -> f64 {
        self.a[k]
    }

    pub fn b(&self, k: usize) -> f64 {
        self.b[k]
    }

    pub fn a_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn b_slice(&self) -> &[f64] {
        &self.b
    }
}

/// Scaled-and-shifted Chebyshev (first kind) recurrence on
/// `[alpha - c, alpha + c]`: `a_k = alpha`, `b_0 = c/sqrt(2)`, `b_k = c/2`.
pub fn chebyshev_recurrence(interval: Interval, count: usize) -> RecurrenceTable {
    let alpha = interval.midpoint();
    let c = interval.half_length();
    let a = vec![alpha; count];
    let mut b = vec![c / 2.0; count];
    if count > 0 {
        b[0] = c / std::f64::consts::SQRT_2;
    }
    RecurrenceTable { a, b }
}

/// Closed-form recurrence for the two-interval weight on the symmetric base
/// domain `[-1, -beta] u [beta, 1]`, mapped through `x -> scale x + shift`:
/// `a_n = scale (-1)^n beta + shift`, `b_0 = scale sqrt((1-beta^2)/2)`,
/// `b_n = scale sqrt(1-beta^2)/2`.
pub fn symmetric_akhiezer_recurrence(
    beta: f64,
    shift: f64,
    scale: f64,
    count: usize,
) -> Result<RecurrenceTable> {
    if !(0.0 < beta && beta < 1.0) {
        return Err(Error::UnsupportedDomain(format!(
            "beta must lie in (0,1), got {beta}"
        )));
    }
    if !(scale > 0.0) {
        return Err(Error::UnsupportedDomain("scale must be positive".into()));
    }
    let root = (1.0 - beta * beta).sqrt();
    let a = (0..count)
        .map(|n| scale * if n % 2 == 0 { beta } else { -beta } + shift)
        .collect();
    let mut b = vec![scale * root / 2.0; count];
    if count > 0 {
        b[0] = scale * (0.5 * (1.0 - beta * beta)).sqrt();
    }
    Ok(RecurrenceTable { a, b })
}

/// The symmetric closed form for a balanced two-interval domain
/// (`g1 + b2 = b1 + g2`); errors for unbalanced domains, which need
/// [`stieltjes_recurrence`].
pub fn symmetric_akhiezer_for_domain(domain: &CutDomain, count: usize) -> Result<RecurrenceTable> {
    if domain.count() != 2 {
        return Err(Error::UnsupportedDomain(
            "the closed form needs two intervals".into(),
        ));
    }
    let ivs = domain.intervals();
    let (b1, g1) = (ivs[0].lo(), ivs[0].hi());
    let (b2, g2) = (ivs[1].lo(), ivs[1].hi());
    let span = g2 - b1;
    if ((g1 + b2) - (b1 + g2)).abs() > 1e-12 * span {
        return Err(Error::UnsupportedDomain(
            "domain is not a shift/scale of a symmetric pair; use the Stieltjes route".into(),
        ));
    }
    let shift = 0.5 * (b1 + g2);
    let scale = 0.5 * span;
    let beta = (b2 - g1) / span;
    symmetric_akhiezer_recurrence(beta, shift, scale, count)
}

/// Discretized Stieltjes procedure: the first `count` Jacobi pairs of the
/// orthonormal polynomials of `w`, computed against a discrete inner product
/// that must resolve polynomials up to degree `2 count + 1`.
pub fn stieltjes_recurrence(
    spec: &WeightSpec,
    quad: &SigmaQuadrature,
    count: usize,
) -> Result<RecurrenceTable> {
    let _ = spec;
    let n = quad.len();
    let mut a = Vec::with_capacity(count);
    let mut b = Vec::with_capacity(count);
    let mass: f64 = quad.weights.iter().sum();
    let mut p_prev = vec![0.0; n];
    let mut p: Vec<f64> = vec![1.0 / mass.sqrt(); n];
    let mut b_prev = 0.0;
    for k in 0..count {
        let mut ak_acc = crate::linalg::Kahan::default();
        for i in 0..n {
            ak_acc.add(quad.weights[i] * quad.nodes[i] * p[i] * p[i]);
        }
        let ak = ak_acc.value();
        let mut norm_acc = crate::linalg::Kahan::default();
        let mut v = vec![0.0; n];
        for i in 0..n {
            v[i] = quad.nodes[i] * p[i] - ak * p[i] - b_prev * p_prev[i];
            norm_acc.add(quad.weights[i] * v[i] * v[i]);
        }
        let norm2 = norm_acc.value();
        if !(norm2 > 0.0) {
            return Err(Error::IllConditioned(format!(
                "Stieltjes lost positivity at pair {k}; increase the node count"
            )));
        }
        let bk = norm2.sqrt();
        a.push(ak);
        b.push(bk);
        for i in 0..n {
            let next = v[i] / bk;
            p_prev[i] = p[i];
            p[i] = next;
        }
        b_prev = bk;
    }
    Ok(RecurrenceTable { a, b })
}

/// `p_k(x)` by forward recurrence; `k` must be below the table length.
pub fn poly_eval(table: &RecurrenceTable, k: usize, x: f64) -> Result<f64> {
    if k >= table.count() && k > 0 {
        return Err(Error::DimensionMismatch(format!(
            "p_{k} needs a table of at least {k} pairs, have {}",
            table.count()
        )));
    }
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..k {
        let next = ((x - table.a[j]) * cur - if j > 0 { table.b[j - 1] } else { 0.0 } * prev)
            / table.b[j];
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// `[p_0(x), ..., p_{count-1}(x)]` in one forward pass.
pub fn poly_values(table: &RecurrenceTable, count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    let mut prev = 0.0;
    let mut cur = 1.0;
    for j in 0..count {
        out.push(cur);
        if j + 1 == count {
            break;
        }
        let next = ((x - table.a[j]) * cur - if j > 0 { table.b[j - 1] } else { 0.0 } * prev)
            / table.b[j];
        prev = cur;
        cur = next;
    }
    out
}

/// Series coefficients of a target function together with their decay
/// envelope `c rho^{-j}`.
#[derive(Clone, Debug)]
pub struct CoefficientStream {
    pub alpha: Vec<f64>,
    /// Geometric decay base (> 1).
    pub rho: f64,
    /// Envelope constant; 5 covers the domains used in practice.
    pub c_envelope: f64,
    /// Contour nodes the producer settled on (None for closed forms).
    pub contour_nodes: Option<usize>,
}

impl CoefficientStream {
    pub fn new(alpha: Vec<f64>, rho: f64, c_envelope: f64) -> Self {
        let stream = CoefficientStream {
            alpha,
            rho,
            c_envelope,
            contour_nodes: None,
        };
        let violations = stream.envelope_violations();
        if !violations.is_empty() {
            log::warn!(
                "{} of {} series coefficients exceed the {}*rho^-j envelope (first at j = {})",
                violations.len(),
                stream.alpha.len(),
                stream.c_envelope,
                violations[0]
            );
        }
        stream
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn envelope(&self, j: usize) -> f64 {
        self.c_envelope * self.rho.powi(-(j as i32))
    }

    pub fn envelope_violations(&self) -> Vec<usize> {
        self.alpha
            .iter()
            .enumerate()
            .filter(|(j, a)| a.abs() > self.envelope(*j))
            .map(|(j, _)| j)
            .collect()
    }
}

/// Combined precomputation for one weight: the quadrature and a recurrence
/// table deep enough both for the requested series length and the backward
/// recurrences evaluating Cauchy transforms.
#[derive(Clone, Debug)]
pub struct AkhiezerData {
    pub spec: WeightSpec,
    pub table: RecurrenceTable,
    pub quad: SigmaQuadrature,
}

impl AkhiezerData {
    /// Build with an explicit table depth; the quadrature gets
    /// `8 (depth + 1)` nodes per interval. The closed-form recurrences are
    /// used where they exist (single interval; balanced two-interval
    /// Akhiezer weight), the Stieltjes procedure otherwise.
    pub fn with_depth(spec: WeightSpec, depth: usize) -> Result<Self> {
        let quad = sigma_quadrature(&spec, 8 * (depth + 1));
        let table = match (&spec.kind, spec.domain.count()) {
            (WeightKind::ChebyshevFirstKind, 1) => {
                chebyshev_recurrence(spec.domain.intervals()[0], depth)
            }
            (WeightKind::AkhiezerTwoInterval, 2) => {
                symmetric_akhiezer_for_domain(&spec.domain, depth)
                    .or_else(|_| stieltjes_recurrence(&spec, &quad, depth))?
            }
            _ => stieltjes_recurrence(&spec, &quad, depth)?,
        };
        Ok(AkhiezerData { spec, table, quad })
    }

    /// Depth sized for a series of length `count` evaluated on the given
    /// contour points (the backward recurrence needs headroom set by the
    /// slowest decay rate over the contour).
    pub fn for_series(spec: WeightSpec, count: usize, contour: &[num_complex::Complex64]) -> Result<Self> {
        let depth = required_depth(&spec, count, contour)?;
        Self::with_depth(spec, depth)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym05() -> CutDomain {
        CutDomain::parse("-1,-0.5;0.5,1").unwrap()
    }

    #[test]
    fn chebyshev_weight_values() {
        let spec = WeightSpec::chebyshev(Interval::new(-1.0, 1.0).unwrap());
        let w0 = spec.eval(0.0).unwrap();
        assert!((w0 - std::f64::consts::FRAC_1_PI).abs() < 1e-15);
        assert!(spec.eval(1.5).is_err());
    }

    #[test]
    fn akhiezer_weight_endpoint_zero() {
        // sqrt(g1 - x) zero at the top of the left interval
        let spec = WeightSpec::akhiezer(sym05()).unwrap();
        let near = spec.eval(-0.5 - 1e-8).unwrap();
        let nearer = spec.eval(-0.5 - 1e-10).unwrap();
        assert!(nearer < near);
        assert!((nearer / near - 0.1).abs() < 0.02); // sqrt scaling
    }

    #[test]
    fn akhiezer_mass_is_one() {
        for dom in ["-1,-0.5;0.5,1", "-1.8,-0.5;2,3", "1,2.8;10.5,11.8"] {
            let spec = WeightSpec::akhiezer(CutDomain::parse(dom).unwrap()).unwrap();
            assert!(
                (spec.raw_mass() - 1.0).abs() <= 1e-10,
                "{dom}: mass {}",
                spec.raw_mass()
            );
        }
    }

    #[test]
    fn sigma_quadrature_chebyshev_mass() {
        let spec = WeightSpec::chebyshev(Interval::new(-1.0, 1.0).unwrap());
        let quad = sigma_quadrature(&spec, 16);
        let mass: f64 = quad.weights.iter().sum();
        assert!((mass - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn sigma_quadrature_self_convergence() {
        let spec = WeightSpec::akhiezer(CutDomain::parse("-1.8,-0.5;2,3").unwrap()).unwrap();
        let q1 = sigma_quadrature(&spec, 200);
        let q2 = sigma_quadrature(&spec, 400);
        let table = AkhiezerData::with_depth(spec.clone(), 12).unwrap().table;
        let p10sq = |q: &SigmaQuadrature| q.integrate(|x| poly_eval(&table, 10, x).unwrap().powi(2));
        assert!((p10sq(&q1) - p10sq(&q2)).abs() < 1e-11);
    }

    #[test]
    fn chebyshev_recurrence_values() {
        let t = chebyshev_recurrence(Interval::new(-1.0, 1.0).unwrap(), 3);
        assert_eq!(t.a_slice(), &[0.0, 0.0, 0.0]);
        assert!((t.b(0) - 1.0 / std::f64::consts::SQRT_2).abs() < 1e-16);
        assert!((t.b(1) - 0.5).abs() < 1e-16);
        let t = chebyshev_recurrence(Interval::new(2.5, 4.8).unwrap(), 2);
        assert!((t.a(0) - 3.65).abs() < 1e-14);
        assert!((t.b(0) - 1.15 / std::f64::consts::SQRT_2).abs() < 1e-14);
        assert!((t.b(1) - 0.575).abs() < 1e-14);
    }

    #[test]
    fn chebyshev_moments_match_weight() {
        // first 6 moments of the Jacobi data against direct quadrature
        let iv = Interval::new(2.5, 4.8).unwrap();
        let spec = WeightSpec::chebyshev(iv);
        let quad = sigma_quadrature(&spec, 200);
        let table = chebyshev_recurrence(iv, 10);
        // moments from the quadrature must match <x^m p_0, p_0> built from
        // the recurrence: check int p_i p_j w = delta_ij for i,j <= 5 instead
        for i in 0..6 {
            for j in 0..6 {
                let v = quad.integrate(|x| {
                    poly_eval(&table, i, x).unwrap() * poly_eval(&table, j, x).unwrap()
                });
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() <= 1e-10, "i={i} j={j}: {v}");
            }
        }
    }

    #[test]
    fn symmetric_akhiezer_closed_form() {
        let t = symmetric_akhiezer_recurrence(0.5, 0.0, 1.0, 3).unwrap();
        assert_eq!(t.a_slice(), &[0.5, -0.5, 0.5]);
        assert!((t.b(0) - 0.375f64.sqrt()).abs() < 1e-16);
        assert!((t.b(1) - 0.75f64.sqrt() / 2.0).abs() < 1e-16);
        // scale=2, shift=1 maps the base domain to [-1,0] u [2,3]
        let d = CutDomain::parse("-1,0;2,3").unwrap();
        let t = symmetric_akhiezer_for_domain(&d, 2).unwrap();
        assert!((t.a(0) - 2.0).abs() < 1e-13);
        assert!((t.b(0) - 2.0 * 0.375f64.sqrt()).abs() < 1e-13);
        // unbalanced domain refuses
        let d = CutDomain::parse("-1.8,-0.5;2,3").unwrap();
        assert!(symmetric_akhiezer_for_domain(&d, 2).is_err());
    }

    #[test]
    fn stieltjes_matches_chebyshev_closed_form() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let spec = WeightSpec::chebyshev(iv);
        let quad = sigma_quadrature(&spec, 8 * 13);
        let t = stieltjes_recurrence(&spec, &quad, 12).unwrap();
        let exact = chebyshev_recurrence(iv, 12);
        for k in 0..12 {
            assert!((t.a(k) - exact.a(k)).abs() <= 1e-12, "a_{k}");
            assert!((t.b(k) - exact.b(k)).abs() <= 1e-12, "b_{k}");
        }
    }

    #[test]
    fn stieltjes_matches_symmetric_akhiezer() {
        let spec = WeightSpec::akhiezer(sym05()).unwrap();
        let quad = sigma_quadrature(&spec, 8 * 41);
        let t = stieltjes_recurrence(&spec, &quad, 40).unwrap();
        let exact = symmetric_akhiezer_recurrence(0.5, 0.0, 1.0, 40).unwrap();
        for k in 0..40 {
            assert!((t.a(k) - exact.a(k)).abs() <= 1e-10, "a_{k}: {}", t.a(k));
            assert!((t.b(k) - exact.b(k)).abs() <= 1e-10, "b_{k}: {}", t.b(k));
        }
    }

    #[test]
    fn stieltjes_positivity_on_asymmetric_domain() {
        let spec = WeightSpec::akhiezer(CutDomain::parse("-1.8,-0.5;2,3").unwrap()).unwrap();
        let quad = sigma_quadrature(&spec, 8 * 81);
        let t = stieltjes_recurrence(&spec, &quad, 80).unwrap();
        assert!(t.b_slice().iter().all(|&b| b > 0.0));
    }

    #[test]
    fn poly_eval_basics() {
        let iv = Interval::new(-1.0, 1.0).unwrap();
        let t = chebyshev_recurrence(iv, 5);
        assert_eq!(poly_eval(&t, 0, 0.37).unwrap(), 1.0);
        // p_1 = (x - a_0)/b_0
        let x = 0.3;
        assert!((poly_eval(&t, 1, x).unwrap() - (x - t.a(0)) / t.b(0)).abs() < 1e-15);
        // p_2(0.3) = sqrt(2) T_2(0.3)
        let exact = std::f64::consts::SQRT_2 * (2.0 * 0.09 - 1.0);
        assert!((poly_eval(&t, 2, 0.3).unwrap() - exact).abs() < 1e-14);
        assert!(poly_eval(&t, 7, 0.0).is_err());
        let vals = poly_values(&t, 3, 0.3);
        assert_eq!(vals.len(), 3);
        assert!((vals[2] - exact).abs() < 1e-14);
    }

    #[test]
    fn orthonormality_of_stieltjes_tables() {
        let spec = WeightSpec::akhiezer(CutDomain::parse("-1.8,-0.5;2,3").unwrap()).unwrap();
        let quad = sigma_quadrature(&spec, 8 * 41);
        let t = stieltjes_recurrence(&spec, &quad, 24).unwrap();
        let check = sigma_quadrature(&spec, 8 * 61);
        for i in (0..21).step_by(5) {
            for j in (0..21).step_by(4) {
                let v = check.integrate(|x| {
                    poly_eval(&t, i, x).unwrap() * poly_eval(&t, j, x).unwrap()
                });
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() <= 1e-9, "<p{i},p{j}> = {v}");
            }
        }
    }

    #[test]
    fn affine_covariance_of_recurrences() {
        // tables for s x + m equal mapped tables: a -> s a + m, b -> s b
        let base = WeightSpec::akhiezer(sym05()).unwrap();
        let bq = sigma_quadrature(&base, 8 * 21);
        let bt = stieltjes_recurrence(&base, &bq, 20).unwrap();
        let (s, m) = (2.0, 1.0);
        let mapped = WeightSpec::akhiezer(CutDomain::parse("-1,0;2,3").unwrap()).unwrap();
        let mq = sigma_quadrature(&mapped, 8 * 21);
        let mt = stieltjes_recurrence(&mapped, &mq, 20).unwrap();
        for k in 0..20 {
            assert!((mt.a(k) - (s * bt.a(k) + m)).abs() <= 1e-12, "a_{k}");
            assert!((mt.b(k) - s * bt.b(k)).abs() <= 1e-12, "b_{k}");
        }
    }

    #[test]
    fn first_moment_matches_jacobi_a0() {
        // under the asymmetric two-interval weight the first moment is a_0
        let spec = WeightSpec::akhiezer(sym05()).unwrap();
        let quad = sigma_quadrature(&spec, 400);
        let m1 = quad.integrate(|x| x);
        // a_0 = <x p_0, p_0> = first moment; the closed form gives beta
        assert!((m1 - 0.5).abs() <= 1e-12, "m1 = {m1}");
    }
}
