//! Unions of disjoint real intervals and their logarithmic potential theory:
//! the Green's function with pole at infinity, the saddle point of its real
//! part on a gap, and the convergence rates derived from both.
//!
//! The derivative of the Green's function on a cut domain with `g` gaps is
//! `Q(s) / sqrt(R(s))` where `R` is the monic polynomial vanishing at all
//! interval endpoints and `Q` is monic of degree `g` with one root per gap,
//! fixed by the vanishing of each gap integral of `Q / sqrt(|R|)`. The real
//! part of the Green's function is then a path integral from any endpoint of
//! the domain; square-root endpoint singularities are removed with the
//! substitution `s = endpoint +/- t^2`, and only the magnitude of the real
//! part is kept, which sidesteps all branch bookkeeping.

use num_complex::Complex64;
use std::sync::OnceLock;

use crate::error::{Error, Result};
use crate::linalg::gauss_legendre;

/// Closed real interval with `lo < hi` strictly.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::UnsupportedDomain(format!(
                "interval needs lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Interval { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    pub fn half_length(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }

    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// Ordered union of pairwise disjoint intervals.
#[derive(Clone, Debug, PartialEq)]
pub struct CutDomain {
    intervals: Vec<Interval>,
}

/// Rate data for the solvers: the gap saddle `z*`, the geometric base
/// `rho = e^{re g(z*)} > 1` governing the sign iteration, and (when the
/// domain is a single interval off zero) the signed Chebyshev ratio of the
/// `1/x` series.
#[derive(Clone, Copy, Debug)]
pub struct RateInfo {
    pub z_star: f64,
    pub rho: f64,
    pub rho_inv_signed: Option<f64>,
}

impl CutDomain {
    pub fn new(mut intervals: Vec<Interval>) -> Result<Self> {
        if intervals.is_empty() {
            return Err(Error::UnsupportedDomain("domain needs at least one interval".into()));
        }
        intervals.sort_by(|a, b| a.lo.partial_cmp(&b.lo).unwrap());
        for pair in intervals.windows(2) {
            if pair[0].hi >= pair[1].lo {
                return Err(Error::UnsupportedDomain(format!(
                    "intervals [{}, {}] and [{}, {}] overlap or touch",
                    pair[0].lo, pair[0].hi, pair[1].lo, pair[1].hi
                )));
            }
        }
        Ok(CutDomain { intervals })
    }

    pub fn single(interval: Interval) -> Self {
        CutDomain {
            intervals: vec![interval],
        }
    }

    pub fn pair(a: Interval, b: Interval) -> Result<Self> {
        CutDomain::new(vec![a, b])
    }

    /// Parse the CLI syntax: semicolon-separated intervals, comma-separated
    /// endpoints, e.g. `"-1.8,-0.5;2,3"`.
    pub fn parse(s: &str) -> Result<Self> {
        let mut intervals = Vec::new();
        let mut pos = 0usize;
        for part in s.split(';') {
            let mut ends = part.split(',');
            let lo_str = ends.next().unwrap_or("");
            let hi_str = ends.next().unwrap_or("");
            if ends.next().is_some() || hi_str.is_empty() {
                return Err(Error::Parse {
                    position: pos,
                    message: format!("interval '{part}' must be 'lo,hi'"),
                });
            }
            let lo: f64 = lo_str.trim().parse().map_err(|_| Error::Parse {
                position: pos,
                message: format!("bad number '{lo_str}'"),
            })?;
            let hi: f64 = hi_str.trim().parse().map_err(|_| Error::Parse {
                position: pos + lo_str.len() + 1,
                message: format!("bad number '{hi_str}'"),
            })?;
            intervals.push(Interval::new(lo, hi).map_err(|e| Error::Parse {
                position: pos,
                message: e.to_string(),
            })?);
            pos += part.len() + 1;
        }
        CutDomain::new(intervals)
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn count(&self) -> usize {
        self.intervals.len()
    }

    /// All endpoints in ascending order.
    pub fn endpoints(&self) -> Vec<f64> {
        self.intervals.iter().flat_map(|iv| [iv.lo, iv.hi]).collect()
    }

    pub fn contains(&self, x: f64) -> bool {
        self.intervals.iter().any(|iv| iv.contains(x))
    }

    /// Gap `i` lies between interval `i` and interval `i + 1`.
    pub fn gap(&self, i: usize) -> (f64, f64) {
        (self.intervals[i].hi, self.intervals[i + 1].lo)
    }

    pub fn green(&self) -> Result<Green> {
        Green::new(self.clone())
    }

    /// `re g(z)`, convenience wrapper that rebuilds the Green data each call.
    pub fn green_real(&self, z: Complex64) -> Result<f64> {
        self.green()?.re(z)
    }

    /// Saddle point of `re g` on the gap of a two-interval domain: the root
    /// of the numerator `Q`, i.e. the ratio of the two gap integrals. A
    /// golden-section maximization of `re g` over the gap is available as
    /// [`CutDomain::gap_saddle_golden_section`] for cross-checking; the ratio
    /// is returned here because the maximum is flat and the search is
    /// quadrature-noise limited near it.
    pub fn gap_saddle(&self) -> Result<f64> {
        if self.count() != 2 {
            return Err(Error::UnsupportedDomain(format!(
                "gap saddle needs exactly two intervals, domain has {}",
                self.count()
            )));
        }
        Ok(self.green()?.q_roots()[0])
    }

    /// Independent route to the saddle: golden-section search on `re g` over
    /// the gap, finished with a parabolic vertex fit. The fit uses widely
    /// spaced samples so quadrature noise in the flat maximum does not limit
    /// the answer.
    pub fn gap_saddle_golden_section(&self) -> Result<f64> {
        if self.count() != 2 {
            return Err(Error::UnsupportedDomain(format!(
                "gap saddle needs exactly two intervals, domain has {}",
                self.count()
            )));
        }
        let green = self.green()?;
        let (lo, hi) = self.gap(0);
        let coarse = golden_section_max(|x| green.re_real_axis(x), lo, hi, 1e-6)?;
        let h = 1e-4 * (hi - lo);
        let gm = green.re_real_axis(coarse - h)?;
        let g0 = green.re_real_axis(coarse)?;
        let gp = green.re_real_axis(coarse + h)?;
        let denom = gp + gm - 2.0 * g0;
        if denom >= 0.0 {
            return Ok(coarse);
        }
        Ok(coarse - 0.5 * h * (gp - gm) / denom)
    }

    /// Convergence-rate data for the sign-function iteration on a
    /// two-interval domain: `rho = e^{re g(z*)}`.
    pub fn sign_rate(&self) -> Result<RateInfo> {
        let z_star = self.gap_saddle()?;
        let green = self.green()?;
        let rho = green.re_real_axis(z_star)?.exp();
        if rho <= 1.0 {
            return Err(Error::Accuracy {
                requested: 1.0,
                achieved: rho,
                context: "sign rate did not exceed 1".into(),
            });
        }
        Ok(RateInfo {
            z_star,
            rho,
            rho_inv_signed: None,
        })
    }

    /// Worst-offender rate for spectra off the domain:
    /// `max_lambda re g(lambda) - re g(z_ref)`. Negative means the iteration
    /// anchored at `z_ref` still converges.
    pub fn nu(&self, eigenvalues: &[Complex64], z_ref: Complex64) -> Result<f64> {
        let green = self.green()?;
        let gref = green.re(z_ref)?;
        let mut worst = f64::NEG_INFINITY;
        for &lam in eigenvalues {
            worst = worst.max(green.re(lam)?);
        }
        Ok(worst - gref)
    }

    /// Sample `e^{re g}` on a uniform grid over the rectangle
    /// `[x0, x1] x [y0, y1]`.
    pub fn g_grid(&self, x0: f64, x1: f64, y0: f64, y1: f64, nx: usize, ny: usize) -> Result<GreenGrid> {
        assert!(nx >= 1 && ny >= 1);
        let green = self.green()?;
        let xs: Vec<f64> = (0..nx)
            .map(|i| {
                if nx == 1 {
                    x0
                } else {
                    x0 + (x1 - x0) * i as f64 / (nx - 1) as f64
                }
            })
            .collect();
        let ys: Vec<f64> = (0..ny)
            .map(|j| {
                if ny == 1 {
                    y0
                } else {
                    y0 + (y1 - y0) * j as f64 / (ny - 1) as f64
                }
            })
            .collect();
        let mut values = Vec::with_capacity(nx * ny);
        for &y in &ys {
            for &x in &xs {
                values.push(green.re(Complex64::new(x, y))?.exp());
            }
        }
        Ok(GreenGrid { xs, ys, values })
    }
}

/// Row-major samples of `e^{re g}`: `values[j * xs.len() + i]` belongs to
/// `(xs[i], ys[j])`.
pub struct GreenGrid {
    pub xs: Vec<f64>,
    pub ys: Vec<f64>,
    pub values: Vec<f64>,
}

/// Signed Chebyshev ratio of the `1/x` series on `[alpha - c, alpha + c]`:
/// `-alpha/c + sqrt(alpha/c - 1) sqrt(alpha/c + 1)` with the square roots
/// read as principal complex roots. The magnitude is the convergence rate,
/// the sign encodes the alternation of the series.
pub fn inverse_rate(interval: Interval) -> Result<f64> {
    if interval.lo <= 0.0 && interval.hi >= 0.0 {
        return Err(Error::SingularDomain(format!(
            "0 lies in [{}, {}]",
            interval.lo, interval.hi
        )));
    }
    let alpha = interval.midpoint();
    let c = interval.half_length();
    let t = alpha / c;
    let root = (t * t - 1.0).sqrt();
    // principal roots: sqrt(t-1)sqrt(t+1) = +root for t > 1, -root for t < -1
    let ratio = if t > 0.0 { -t + root } else { -t - root };
    debug_assert!(ratio.abs() < 1.0);
    Ok(ratio)
}

/// Green's function evaluator for one cut domain. Construction solves the
/// small moment system fixing the gap roots of `Q`; evaluation integrates
/// `Q / sqrt(R)` along a singularity-free path.
pub struct Green {
    domain: CutDomain,
    endpoints: Vec<f64>,
    /// Roots of the monic numerator `Q`, one per gap, ascending.
    q_roots: Vec<f64>,
}

impl Green {
    fn new(domain: CutDomain) -> Result<Self> {
        let endpoints = domain.endpoints();
        let gaps = domain.count() - 1;
        let q_roots = if gaps == 0 {
            Vec::new()
        } else if gaps == 1 {
            // z* = (gap integral of s / sqrt|R|) / (gap integral of 1 / sqrt|R|)
            let (lo, hi) = domain.gap(0);
            let m0 = gap_moment(&endpoints, lo, hi, 0)?;
            let m1 = gap_moment(&endpoints, lo, hi, 1)?;
            vec![m1 / m0]
        } else {
            solve_gap_roots(&domain, &endpoints)?
        };
        Ok(Green {
            domain,
            endpoints,
            q_roots,
        })
    }

    pub fn domain(&self) -> &CutDomain {
        &self.domain
    }

    /// Internal gap roots of the numerator polynomial; for two intervals the
    /// single root is the saddle z* (up to quadrature accuracy).
    pub fn q_roots(&self) -> &[f64] {
        &self.q_roots
    }

    fn q_eval(&self, s: Complex64) -> Complex64 {
        self.q_roots
            .iter()
            .fold(Complex64::new(1.0, 0.0), |p, &r| p * (s - r))
    }

    fn q_eval_real(&self, s: f64) -> f64 {
        self.q_roots.iter().fold(1.0, |p, &r| p * (s - r))
    }

    /// `re g(z) >= 0`; zero exactly on the domain.
    pub fn re(&self, z: Complex64) -> Result<f64> {
        let scale = self
            .endpoints
            .iter()
            .fold(1.0_f64, |m, e| m.max(e.abs()))
            .max(z.norm());
        if z.im.abs() <= 1e-300 * scale.max(1.0) {
            return self.re_real_axis(z.re);
        }
        self.re_complex(z)
    }

    /// Real-axis fast path: on the domain the value is zero; elsewhere a
    /// signed desingularized integral from the nearest endpoint.
    pub fn re_real_axis(&self, x: f64) -> Result<f64> {
        if self.domain.contains(x) {
            return Ok(0.0);
        }
        // integrate from the nearest endpoint toward x
        let e = self.nearest_endpoint_real(x);
        let integrand = |s: f64| self.q_eval_real(s) / rest_abs_sqrt(&self.endpoints, e, s);
        // s = e + dir * t^2, ds = 2 dir t dt; the sqrt|s - e| = t factor cancels
        let dir = (x - e).signum();
        let tmax = (x - e).abs().sqrt();
        let val = adaptive_gl(
            |t| 2.0 * integrand(e + dir * t * t),
            0.0,
            tmax,
            1e-12,
        )?;
        Ok(val.abs())
    }

    fn re_complex(&self, z: Complex64) -> Result<f64> {
        let e = self.nearest_endpoint_complex(z);
        // s(t) = e + (z - e) t^2. The path leaves the real axis immediately,
        // so it cannot cross the domain.
        let ze = z - e;
        let sqrt_ze = ze.sqrt();
        let val = path_integral_tracked(&self.endpoints, e, ze, |s, w_rest| {
            2.0 * sqrt_ze * self.q_eval(s) / w_rest
        })?;
        Ok(val.re.abs())
    }

    fn nearest_endpoint_real(&self, x: f64) -> f64 {
        // pick the adjacent endpoint so the segment stays off the domain
        let mut best = self.endpoints[0];
        let mut dist = f64::INFINITY;
        for &e in &self.endpoints {
            let d = (x - e).abs();
            if d < dist {
                dist = d;
                best = e;
            }
        }
        best
    }

    fn nearest_endpoint_complex(&self, z: Complex64) -> f64 {
        let mut best = self.endpoints[0];
        let mut dist = f64::INFINITY;
        for &e in &self.endpoints {
            let d = (z - e).norm();
            if d < dist {
                dist = d;
                best = e;
            }
        }
        best
    }
}

/// `sqrt(prod_{e' != e} |s - e'|)` for real s.
fn rest_abs_sqrt(endpoints: &[f64], skip: f64, s: f64) -> f64 {
    let mut p = 1.0;
    for &e in endpoints {
        if e != skip {
            p *= (s - e).abs();
        }
    }
    p.sqrt()
}

/// Desingularized moment `int_gap s^pow / sqrt(|R(s)|) ds`, splitting the gap
/// at its midpoint with `t^2` substitutions at both singular endpoints.
fn gap_moment(endpoints: &[f64], lo: f64, hi: f64, pow: u32) -> Result<f64> {
    let mid = 0.5 * (lo + hi);
    let f_from = |e: f64, dir: f64, t: f64| {
        let s = e + dir * t * t;
        2.0 * s.powi(pow as i32) / rest_abs_sqrt(endpoints, e, s)
    };
    let left = adaptive_gl(|t| f_from(lo, 1.0, t), 0.0, (mid - lo).sqrt(), 1e-12)?;
    let right = adaptive_gl(|t| f_from(hi, -1.0, t), 0.0, (hi - mid).sqrt(), 1e-12)?;
    Ok(left + right)
}

/// Moment system for `g >= 2` gaps: find the monic, degree-g `Q` whose
/// integral of `Q / sqrt(|R|)` vanishes over every gap, then return its
/// roots (one per gap, found by bisection).
fn solve_gap_roots(domain: &CutDomain, endpoints: &[f64]) -> Result<Vec<f64>> {
    let g = domain.count() - 1;
    // moments m[i][j] = int_{gap i} s^j / sqrt|R|
    let mut moments = vec![vec![0.0; g + 1]; g];
    for (i, row) in moments.iter_mut().enumerate() {
        let (lo, hi) = domain.gap(i);
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = gap_moment(endpoints, lo, hi, j as u32)?;
        }
    }
    // solve sum_j c_j m[i][j] = -m[i][g] for the non-leading coefficients
    let mut a = vec![vec![0.0; g]; g];
    let mut rhs = vec![0.0; g];
    for i in 0..g {
        for j in 0..g {
            a[i][j] = moments[i][j];
        }
        rhs[i] = -moments[i][g];
    }
    let coeffs = solve_small_linear(&mut a, &mut rhs)?;
    // Q(s) = s^g + c_{g-1} s^{g-1} + ... + c_0; one root per gap by theory
    let q = |s: f64| {
        let mut v = 1.0;
        for j in (0..g).rev() {
            v = v * s + coeffs[j];
        }
        v
    };
    let mut roots = Vec::with_capacity(g);
    for i in 0..g {
        let (mut lo, mut hi) = domain.gap(i);
        let (mut flo, fhi) = (q(lo), q(hi));
        if flo == 0.0 {
            roots.push(lo);
            continue;
        }
        if flo * fhi > 0.0 {
            return Err(Error::Accuracy {
                requested: 0.0,
                achieved: flo * fhi,
                context: format!("no sign change of Q in gap {i}"),
            });
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            let fm = q(mid);
            if fm == 0.0 || (hi - lo) <= 1e-15 * mid.abs().max(1.0) {
                lo = mid;
                break;
            }
            if flo * fm < 0.0 {
                hi = mid;
            } else {
                lo = mid;
                flo = fm;
            }
        }
        roots.push(0.5 * (lo + hi));
    }
    Ok(roots)
}

fn solve_small_linear(a: &mut [Vec<f64>], rhs: &mut [f64]) -> Result<Vec<f64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
            .unwrap();
        if a[pivot][col].abs() == 0.0 {
            return Err(Error::SingularOperator("gap moment system".into()));
        }
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..n {
            let f = a[row][col] / a[col][col];
            for k in col..n {
                a[row][k] -= f * a[col][k];
            }
            rhs[row] -= f * rhs[col];
        }
    }
    let mut x = vec![0.0; n];
    for row in (0..n).rev() {
        let mut s = rhs[row];
        for k in row + 1..n {
            s -= a[row][k] * x[k];
        }
        x[row] = s / a[row][row];
    }
    Ok(x)
}

/// Complex path integral along `s(t) = e + ze * t^2`, `t in [0, 1]`, with the
/// square root of `R(s)/(s - e)` tracked for continuity node to node. The
/// integrand closure receives `(s, w_rest)` where `w_rest` is that tracked
/// root; the `sqrt(s - e) = t sqrt(ze)` factor is already cancelled against
/// the Jacobian by the caller.
fn path_integral_tracked(
    endpoints: &[f64],
    e: f64,
    ze: Complex64,
    integrand: impl Fn(Complex64, Complex64) -> Complex64,
) -> Result<Complex64> {
    let rest = |s: Complex64| -> Complex64 {
        let mut p = Complex64::new(1.0, 0.0);
        for &ep in endpoints {
            if ep != e {
                p *= s - ep;
            }
        }
        p
    };
    let (nodes16, weights16) = gl16();
    let mut prev_estimate: Option<Complex64> = None;
    let mut panels = 4usize;
    loop {
        let mut total = Complex64::new(0.0, 0.0);
        // start the branch at the real product over the other endpoints
        let mut w_prev = rest(Complex64::new(e, 0.0)).sqrt();
        for p in 0..panels {
            let t0 = p as f64 / panels as f64;
            let t1 = (p + 1) as f64 / panels as f64;
            let half = 0.5 * (t1 - t0);
            let mid = 0.5 * (t0 + t1);
            for (x, w) in nodes16.iter().zip(weights16.iter()) {
                let t = mid + half * x;
                let s = e + ze * t * t;
                let w0 = rest(s).sqrt();
                let w_rest = if (w0 - w_prev).norm() <= (-w0 - w_prev).norm() {
                    w0
                } else {
                    -w0
                };
                w_prev = w_rest;
                total += w * half * integrand(s, w_rest);
            }
        }
        if let Some(prev) = prev_estimate {
            let diff = (total - prev).norm();
            if diff <= 1e-12 * total.norm().max(1e-30) {
                return Ok(total);
            }
        }
        prev_estimate = Some(total);
        panels *= 2;
        if panels > 1 << 14 {
            return Err(Error::Accuracy {
                requested: 1e-12,
                achieved: f64::NAN,
                context: "complex path integral did not converge".into(),
            });
        }
    }
}

/// Adaptive composite 16-point Gauss-Legendre with panel doubling until the
/// relative change drops below `rel_tol`.
fn adaptive_gl(f: impl Fn(f64) -> f64, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let (nodes16, weights16) = gl16();
    let mut prev: Option<f64> = None;
    let mut panels = 2usize;
    loop {
        let mut total = 0.0;
        let width = (b - a) / panels as f64;
        for p in 0..panels {
            let lo = a + width * p as f64;
            let half = 0.5 * width;
            let mid = lo + half;
            let mut panel = 0.0;
            for (x, w) in nodes16.iter().zip(weights16.iter()) {
                panel += w * f(mid + half * x);
            }
            total += panel * half;
        }
        if let Some(prev) = prev {
            if (total - prev).abs() <= rel_tol * total.abs().max(1e-30) {
                return Ok(total);
            }
        }
        prev = Some(total);
        panels *= 2;
        if panels > 1 << 16 {
            return Err(Error::Accuracy {
                requested: rel_tol,
                achieved: f64::NAN,
                context: "adaptive quadrature did not converge".into(),
            });
        }
    }
}

fn gl16() -> (&'static [f64], &'static [f64]) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = RULE.get_or_init(|| gauss_legendre(16));
    (n, w)
}

/// Golden-section search for the maximizer of `f` on `(lo, hi)`.
fn golden_section_max(
    f: impl Fn(f64) -> Result<f64>,
    lo: f64,
    hi: f64,
    xtol: f64,
) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_8;
    let mut a = lo;
    let mut b = hi;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while (b - a).abs() > xtol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}
