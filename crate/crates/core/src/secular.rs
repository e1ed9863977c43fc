//! The secular function `F(μ) = det[[𝒜, ℬ], [J₊(μ), J₋(μ)]]`, its value at
//! the origin, eigenvalue extraction and the contour-integral determinant.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::expo_poly::{build_p, leading_data, LeadingData};
use crate::extension::{BaseSpectrum, Lagrangian};
use crate::linalg::CMatrix;
use crate::quadrature::{integrate_panels, QuadConfig};
use crate::scalar::{cpowi, creal, Real};
use crate::special::{bessel_j_scaled_escaled, gamma, tilde_j0_escaled_unchecked, SeriesConfig};

/// `|F(0)| ≤ KERNEL_TOL · (1 + Hadamard bound)` means a nontrivial kernel.
pub const KERNEL_TOL: f64 = 1e-10;
/// Roots are accepted when `|F(μ)|` is below this fraction of the local scale.
pub const ROOT_TOL: f64 = 1e-9;
/// Largest `x` examined when scanning `F(ix)` for negative eigenvalues.
pub const NEGATIVE_SCAN_CAP: f64 = 1e8;

#[derive(Debug, Clone)]
pub struct SecularContext<T> {
    l: Lagrangian<T>,
    s: BaseSpectrum<T>,
    cfg: SeriesConfig<T>,
    lead: LeadingData<T>,
    c_const: Complex<T>,
    // 2^ν Γ(1+ν) R^ν and 2^{−ν} Γ(1−ν) R^{−ν} per ν.
    plus_pref: Vec<T>,
    minus_pref: Vec<T>,
    f0: Complex<T>,
    f0_scale: T,
}

/// `[[𝒜, ℬ], [diag(Id, 𝐑^ν), diag(log R · Id, 𝐑^{−ν})]]`.
pub fn f0_matrix<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> CMatrix<T> {
    let r = s.radius();
    let q0 = s.q0();
    let plus: Vec<T> = (0..s.q()).map(|k| if k < q0 { T::one() } else { r.powf(s.nus()[k - q0]) }).collect();
    let minus: Vec<T> = (0..s.q()).map(|k| if k < q0 { r.ln() } else { r.powf(-s.nus()[k - q0]) }).collect();
    CMatrix::block2(l.a(), l.b(), &CMatrix::from_real_diag(&plus), &CMatrix::from_real_diag(&minus))
}

/// `F(0)` from its closed form.
pub fn secular_f0_closed<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<Complex<T>> {
    l.check_spectrum(s)?;
    Ok(f0_matrix(l, s).det())
}

impl<T: Real> SecularContext<T> {
    pub fn new(l: &Lagrangian<T>, s: &BaseSpectrum<T>, cfg: SeriesConfig<T>) -> Result<Self> {
        cfg.validate()?;
        l.check_spectrum(s)?;
        let p = build_p(l, s)?;
        let lead = leading_data(&p, s.q0())?;
        let r = s.radius();
        let two = T::lit(2.0);
        let mut prod = T::one();
        let mut plus_pref = Vec::with_capacity(s.q1());
        let mut minus_pref = Vec::with_capacity(s.q1());
        for &nu in s.nus() {
            let gm = gamma(T::one() - nu)?;
            prod *= two.powf(-nu) * gm;
            plus_pref.push(two.powf(nu) * gamma(T::one() + nu)? * r.powf(nu));
            minus_pref.push(two.powf(-nu) * gm * r.powf(-nu));
        }
        let q = T::from_usize_lossy(s.q());
        let c_const = lead.a_j0alpha0 * ((two * T::PI() * r).powf(-q / two) * prod);
        let m0 = f0_matrix(l, s);
        Ok(Self {
            l: l.clone(),
            s: s.clone(),
            cfg,
            lead,
            c_const,
            plus_pref,
            minus_pref,
            f0: m0.det(),
            f0_scale: m0.hadamard_bound(),
        })
    }

    pub fn lagrangian(&self) -> &Lagrangian<T> {
        &self.l
    }

    pub fn spectrum(&self) -> &BaseSpectrum<T> {
        &self.s
    }

    pub fn config(&self) -> &SeriesConfig<T> {
        &self.cfg
    }

    pub fn leading(&self) -> &LeadingData<T> {
        &self.lead
    }

    /// `a_{j0α0} (2πR)^{−q/2} Π 2^{−ν_j} Γ(1 − ν_j)`.
    pub fn c_const(&self) -> Complex<T> {
        self.c_const
    }

    /// `q0 − j0`.
    pub fn log_power(&self) -> i64 {
        self.s.q0() as i64 - self.lead.j0
    }

    pub fn f0(&self) -> Complex<T> {
        self.f0
    }

    pub fn f0_scale(&self) -> T {
        self.f0_scale
    }

    pub fn kernel_threshold(&self) -> T {
        T::tol(KERNEL_TOL) * (T::one() + self.f0_scale)
    }

    pub fn has_kernel(&self) -> bool {
        self.f0.norm() <= self.kernel_threshold()
    }

    pub fn require_trivial_kernel(&self) -> Result<()> {
        if self.has_kernel() {
            return Err(Error::NontrivialKernel { f0_abs: self.f0.norm().to_f64().unwrap_or(f64::NAN) });
        }
        Ok(())
    }

    /// The secular matrix with each lower row scaled by `e^{−R|Im μ|}`.
    pub fn matrix_escaled(&self, mu: Complex<T>) -> Result<CMatrix<T>> {
        let q = self.s.q();
        let q0 = self.s.q0();
        let r = self.s.radius();
        let z = mu * r;
        let mut plus = Vec::with_capacity(q);
        let mut minus = Vec::with_capacity(q);
        let j0 = if q0 > 0 { Some(bessel_j_scaled_escaled(T::zero(), z, &self.cfg)?) } else { None };
        let tj0 = if q0 > 0 { Some(tilde_j0_escaled_unchecked(mu, r, &self.cfg)?) } else { None };
        for k in 0..q {
            if k < q0 {
                plus.push(j0.expect("q0 > 0"));
                minus.push(tj0.expect("q0 > 0"));
            } else {
                let i = k - q0;
                let nu = self.s.nus()[i];
                plus.push(bessel_j_scaled_escaled(nu, z, &self.cfg)? * self.plus_pref[i]);
                minus.push(bessel_j_scaled_escaled(-nu, z, &self.cfg)? * self.minus_pref[i]);
            }
        }
        Ok(CMatrix::block2(self.l.a(), self.l.b(), &CMatrix::from_diag(&plus), &CMatrix::from_diag(&minus)))
    }

    /// `F(μ) e^{−qR|Im μ|}`, valid on the whole plane (F is entire).
    pub fn f_escaled(&self, mu: Complex<T>) -> Result<Complex<T>> {
        Ok(self.matrix_escaled(mu)?.det())
    }

    /// `F(μ)` with no cut check.
    pub fn f_entire(&self, mu: Complex<T>) -> Result<Complex<T>> {
        let growth = T::from_usize_lossy(self.s.q()) * self.s.radius() * mu.im.abs();
        Ok(self.f_escaled(mu)? * growth.exp())
    }

    /// Magnitude scale of `F` at `μ`: Hadamard bound of the unscaled matrix.
    pub fn local_scale(&self, mu: Complex<T>) -> Result<T> {
        let growth = T::from_usize_lossy(self.s.q()) * self.s.radius() * mu.im.abs();
        Ok(self.matrix_escaled(mu)?.hadamard_bound() * growth.exp())
    }

    /// `F′(μ)` by central differences with one Richardson step.
    pub fn f_prime(&self, mu: Complex<T>) -> Result<Complex<T>> {
        let h = T::lit(1e-5) * (T::one() + mu.norm());
        let d = |h: T| -> Result<Complex<T>> {
            Ok((self.f_entire(mu + h)? - self.f_entire(mu - h)?) / (T::lit(2.0) * h))
        };
        let d1 = d(h)?;
        let d2 = d(h / T::lit(2.0))?;
        Ok((d2 * T::lit(4.0) - d1) / T::lit(3.0))
    }
}

fn on_cut<T: Real>(mu: Complex<T>) -> bool {
    mu.im == T::zero() && mu.re < T::zero()
}

/// `F(μ)` for `μ` off the negative real axis.
pub fn secular_f<T: Real>(ctx: &SecularContext<T>, mu: Complex<T>) -> Result<Complex<T>> {
    if on_cut(mu) {
        return Err(Error::InvalidInput(format!("mu = {mu} lies on the negative real axis")));
    }
    if !(mu.re.is_finite() && mu.im.is_finite()) {
        return Err(Error::InvalidInput("mu must be finite".into()));
    }
    ctx.f_entire(mu)
}

/// `F(0⁺)` from `F(10⁻⁴)` and `F(10⁻⁵)`, eliminating the `μ²` term.
pub fn extrapolate_f0<T: Real>(ctx: &SecularContext<T>) -> Result<Complex<T>> {
    let (h1, h2) = (T::lit(1e-4), T::lit(1e-5));
    let f1 = secular_f(ctx, creal(h1))?;
    let f2 = secular_f(ctx, creal(h2))?;
    Ok((f2 * h1 * h1 - f1 * h2 * h2) / (h1 * h1 - h2 * h2))
}

/// `F(ix) / [C x^{|ν| − q/2 − 2α0} e^{qxR} (γ̃ − log x)^{q0 − j0}]`.
pub fn asymptotic_ratio<T: Real>(ctx: &SecularContext<T>, x: T) -> Result<Complex<T>> {
    if !(x >= T::lit(10.0)) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("asymptotic_ratio needs x ≥ 10, got {x}")));
    }
    let s = ctx.spectrum();
    let fe = ctx.f_escaled(Complex::new(T::zero(), x))?;
    let q = T::from_usize_lossy(s.q());
    let power = s.nu_sum() - q / T::lit(2.0) - T::lit(2.0) * ctx.leading().alpha0_value;
    let log_factor = cpowi(creal(T::gamma_tilde() - x.ln()), ctx.log_power());
    Ok(fe / (ctx.c_const() * x.powf(power) * log_factor))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Root<T> {
    /// `μ > 0` for positive eigenvalues, `x > 0` with `μ = ix` for negative ones, 0 for the kernel.
    pub mu: T,
    pub eigenvalue: T,
    /// `|F| / local scale` at the root.
    pub residual: T,
    pub multiplicity: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSlice<T> {
    pub positive: Vec<Root<T>>,
    pub negative: Vec<Root<T>>,
    /// Present when `F(0) = 0`: eigenvalue 0 with its multiplicity (half the zero order of F).
    pub kernel: Option<Root<T>>,
    pub mu_max: T,
    pub x_max: T,
    pub requested: usize,
    pub shortfall: bool,
    pub warnings: Vec<String>,
}

impl<T: Real> SpectrumSlice<T> {
    /// All eigenvalues in increasing order, each listed once.
    pub fn eigenvalues(&self) -> Vec<T> {
        let mut v: Vec<T> = self.negative.iter().map(|r| r.eigenvalue).collect();
        v.reverse();
        v.extend(self.kernel.iter().map(|r| r.eigenvalue));
        v.extend(self.positive.iter().map(|r| r.eigenvalue));
        v
    }
}

/// Winding number of `f` around a closed polygon given by `path(θ)`, θ ∈ [0, 1].
pub fn winding_number<T: Real, F>(mut f: F, path: impl Fn(T) -> Complex<T>, initial: usize) -> Result<i64>
where
    F: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    let n = initial.max(8);
    let mut total = T::zero();
    let mut prev_t = T::zero();
    let mut prev = f(path(T::zero()))?;
    for k in 1..=n {
        let t = T::from_usize_lossy(k) / T::from_usize_lossy(n);
        total += arg_increment(&mut f, &path, prev_t, prev, t, 0)?;
        prev = f(path(t))?;
        prev_t = t;
    }
    let w = total / (T::lit(2.0) * T::PI());
    Ok(w.round().to_i64().unwrap_or(0))
}

fn arg_increment<T: Real, F>(
    f: &mut F,
    path: &impl Fn(T) -> Complex<T>,
    t0: T,
    f0: Complex<T>,
    t1: T,
    depth: usize,
) -> Result<T>
where
    F: FnMut(Complex<T>) -> Result<Complex<T>>,
{
    let f1 = f(path(t1))?;
    if f0.norm() == T::zero() || f1.norm() == T::zero() {
        return Err(Error::ContourHit("F vanishes on the winding contour".into()));
    }
    let d = (f1 / f0).arg();
    if d.abs() <= T::FRAC_PI_4() || depth >= 30 {
        return Ok(d);
    }
    let tm = (t0 + t1) / T::lit(2.0);
    let fm = f(path(tm))?;
    Ok(arg_increment(f, path, t0, f0, tm, depth + 1)? + arg_increment(f, path, tm, fm, t1, depth + 1)?)
}

fn bisect_root<T: Real>(g: impl Fn(T) -> Result<T>, mut a: T, mut b: T, mut ga: T) -> Result<T> {
    for _ in 0..200 {
        let m = (a + b) / T::lit(2.0);
        if (b - a) <= T::tol(1e-12) * m.abs().max(T::min_positive_value()) {
            return Ok(m);
        }
        let gm = g(m)?;
        if gm == T::zero() {
            return Ok(m);
        }
        if (gm > T::zero()) == (ga > T::zero()) {
            a = m;
            ga = gm;
        } else {
            b = m;
        }
    }
    Ok((a + b) / T::lit(2.0))
}

/// Golden-section minimization of `|h|` on `[a, b]`.
fn golden_min<T: Real>(h: impl Fn(T) -> Result<T>, mut a: T, mut b: T) -> Result<T> {
    let inv_phi = (T::lit(5.0).sqrt() - T::one()) / T::lit(2.0);
    let mut c = b - (b - a) * inv_phi;
    let mut d = a + (b - a) * inv_phi;
    let (mut hc, mut hd) = (h(c)?, h(d)?);
    for _ in 0..120 {
        if (b - a) <= T::tol(1e-13) * (T::one() + a.abs()) {
            break;
        }
        if hc < hd {
            b = d;
            d = c;
            hd = hc;
            c = b - (b - a) * inv_phi;
            hc = h(c)?;
        } else {
            a = c;
            c = d;
            hc = hd;
            d = a + (b - a) * inv_phi;
            hd = h(d)?;
        }
    }
    Ok((a + b) / T::lit(2.0))
}

struct LineScan<'a, T> {
    ctx: &'a SecularContext<T>,
    /// Maps the real scan variable to a point of the complex plane.
    to_mu: fn(T) -> Complex<T>,
    phase: Complex<T>,
}

impl<T: Real> LineScan<'_, T> {
    fn f(&self, u: T) -> Result<Complex<T>> {
        self.ctx.f_escaled((self.to_mu)(u))
    }

    fn g(&self, u: T) -> Result<T> {
        Ok((self.f(u)? * self.phase).re)
    }

    fn residual(&self, u: T) -> Result<T> {
        let mu = (self.to_mu)(u);
        let m = self.ctx.matrix_escaled(mu)?;
        Ok(m.det().norm() / m.hadamard_bound().max(T::min_positive_value()))
    }

    fn multiplicity(&self, u: T, radius: T) -> Result<usize> {
        let center = (self.to_mu)(u);
        let w = winding_number(
            |mu| self.ctx.f_escaled(mu),
            |th: T| center + Complex::from_polar(radius, T::lit(2.0) * T::PI() * th),
            48,
        )?;
        Ok(w.max(1) as usize)
    }

    /// Walks the grid, returning at most `limit` roots in increasing order.
    fn scan(
        &self,
        grid: &mut dyn Iterator<Item = T>,
        limit: usize,
        warnings: &mut Vec<String>,
        eigen: fn(T) -> T,
    ) -> Result<Vec<Root<T>>> {
        let tol = T::tol(ROOT_TOL);
        let mut roots: Vec<Root<T>> = Vec::new();
        let Some(mut u0) = grid.next() else { return Ok(roots) };
        let mut f0 = self.f(u0)?;
        let mut prev_abs: Option<T> = None;
        let mut prev_u = u0;
        while let Some(u1) = grid.next() {
            let f1 = self.f(u1)?;
            let (g0, g1) = ((f0 * self.phase).re, (f1 * self.phase).re);
            let mut found: Option<T> = None;
            let mut from_minimum = false;
            if g0 == T::zero() {
                found = Some(u0);
            } else if (g0 > T::zero()) != (g1 > T::zero()) && g1 != T::zero() {
                let cand = bisect_root(|u| self.g(u), u0, u1, g0)?;
                if self.residual(cand)? <= tol {
                    found = Some(cand);
                } else {
                    warnings.push(format!("sign change of the rotated F near {cand} is not a zero of F"));
                }
            } else if let Some(pa) = prev_abs {
                // Local minimum of |F| at u0 without a sign change: possible double zero.
                let a0 = f0.norm();
                if a0 < pa && a0 < f1.norm() {
                    let cand = golden_min(|u| Ok(self.f(u)?.norm()), prev_u, u1)?;
                    if self.residual(cand)? <= tol * T::lit(1e3) {
                        found = Some(cand);
                        from_minimum = true;
                    }
                }
            }
            if let Some(u) = found {
                if roots.last().is_none_or(|r| (u - r.mu).abs() > T::tol(1e-9) * (T::one() + u)) {
                    if from_minimum {
                        warnings.push(format!("zero near {u} found from a |F| minimum without a sign change"));
                    }
                    let radius = ((u1 - u0) / T::lit(4.0)).min(u / T::lit(2.0));
                    let multiplicity = self.multiplicity(u, radius)?;
                    roots.push(Root { mu: u, eigenvalue: eigen(u), residual: self.residual(u)?, multiplicity });
                    if roots.len() >= limit {
                        break;
                    }
                }
            }
            prev_abs = Some(f0.norm());
            prev_u = u0;
            u0 = u1;
            f0 = f1;
        }
        Ok(roots)
    }
}

fn real_axis<T: Real>(u: T) -> Complex<T> {
    creal(u)
}

fn imag_axis<T: Real>(u: T) -> Complex<T> {
    Complex::new(T::zero(), u)
}

fn phase_at<T: Real>(ctx: &SecularContext<T>, mu: Complex<T>) -> Result<Complex<T>> {
    let f = ctx.f_escaled(mu)?;
    Ok(if f.norm() > T::zero() { f.conj() / f.norm() } else { creal(T::one()) })
}

/// First `k` positive roots of `F` below `mu_max`, the negative eigenvalues
/// (zeros `F(ix) = 0`) and the kernel (`F(0) = 0`).
pub fn find_eigenvalues<T: Real>(ctx: &SecularContext<T>, k: usize, mu_max: T) -> Result<SpectrumSlice<T>> {
    if k == 0 {
        return Err(Error::InvalidInput("eigenvalue count must be at least 1".into()));
    }
    if !(mu_max > T::zero()) || !mu_max.is_finite() {
        return Err(Error::InvalidInput(format!("mu_max must be positive, got {mu_max}")));
    }
    let s = ctx.spectrum();
    let q = s.q();
    let r = s.radius();
    let h = T::PI() / (T::lit(16.0) * T::from_usize_lossy(q) * r);
    let mut warnings = Vec::new();

    let kernel = if ctx.has_kernel() {
        let order = winding_number(
            |mu| ctx.f_escaled(mu),
            |th: T| Complex::from_polar(h / T::lit(2.0), T::lit(2.0) * T::PI() * th),
            48,
        )?;
        Some(Root {
            mu: T::zero(),
            eigenvalue: T::zero(),
            residual: ctx.f0().norm() / (T::one() + ctx.f0_scale()),
            multiplicity: ((order.max(2) + 1) / 2) as usize,
        })
    } else {
        None
    };

    let start = h;
    let positive_scan = LineScan { ctx, to_mu: real_axis, phase: phase_at(ctx, creal(start))? };
    let steps = (mu_max / h).ceil().to_usize().unwrap_or(usize::MAX);
    let mut grid = (1..=steps).map(|i| (T::from_usize_lossy(i) * h).min(mu_max));
    let positive = positive_scan.scan(&mut grid, k, &mut warnings, |u| u * u)?;
    let shortfall = positive.len() < k;
    if shortfall {
        warnings.push(format!("found {} of {} requested positive eigenvalues below mu_max = {mu_max}", positive.len(), k));
    }

    // Negative eigenvalues: F(ix) = 0. There are at most q of them.
    let x_max = negative_scan_limit(ctx, &mut warnings)?;
    let negative_scan = LineScan { ctx, to_mu: imag_axis, phase: phase_at(ctx, imag_axis(start))? };
    let linear_end = (T::lit(10.0) / r).max(T::lit(4.0) * h);
    let mut grid = NegativeGrid { x: T::zero(), h, linear_end, x_max, done: false };
    let negative = negative_scan.scan(&mut grid, q, &mut warnings, |x| -x * x)?;

    Ok(SpectrumSlice { positive, negative, kernel, mu_max, x_max, requested: k, shortfall, warnings })
}

/// Linear steps of `h` up to `linear_end`, then geometric growth by 2%.
struct NegativeGrid<T> {
    x: T,
    h: T,
    linear_end: T,
    x_max: T,
    done: bool,
}

impl<T: Real> Iterator for NegativeGrid<T> {
    type Item = T;
    fn next(&mut self) -> Option<T> {
        if self.done {
            return None;
        }
        self.x = if self.x < self.linear_end { self.x + self.h } else { self.x * T::lit(1.02) };
        if self.x >= self.x_max {
            self.x = self.x_max;
            self.done = true;
        }
        Some(self.x)
    }
}

/// Smallest `x ≥ 10/R` (doubling) where the asymptotic ratio is within 0.1 of 1.
fn negative_scan_limit<T: Real>(ctx: &SecularContext<T>, warnings: &mut Vec<String>) -> Result<T> {
    let mut x = (T::lit(10.0) / ctx.spectrum().radius()).max(T::lit(10.0));
    let cap = T::lit(NEGATIVE_SCAN_CAP);
    loop {
        let ratio = asymptotic_ratio(ctx, x)?;
        if (ratio - T::one()).norm() <= T::lit(0.1) {
            return Ok(x);
        }
        if x >= cap {
            warnings.push(format!("asymptotic regime not reached by x = {x}; negative scan truncated there"));
            return Ok(x);
        }
        x = (x * T::lit(2.0)).min(cap);
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleResult<T> {
    pub value: Complex<T>,
    /// `(1/πi) ∫_{γ_t} log μ F′/F dμ`.
    pub integral: Complex<T>,
    pub f_at_t: Complex<T>,
    pub quad_error: T,
}

/// `(−1)^{q0−j0} 2^{q0−j0} e^{(q0−j0)γ} F(t)/C · exp((1/πi) ∫_{γ_t} log μ F′/F dμ)`
/// with `γ_t` the arc of radius `|t|` from `t` to `−t` through the right half-plane.
pub fn contour_det_oracle<T: Real>(ctx: &SecularContext<T>, t: Complex<T>, n_quad: usize) -> Result<OracleResult<T>> {
    ctx.require_trivial_kernel()?;
    if !(t.im > T::zero()) || !(t.re.is_finite() && t.im.is_finite()) {
        return Err(Error::InvalidInput(format!("t must lie in the open upper half-plane, got {t}")));
    }
    let rho = t.norm();
    let theta1 = t.arg();
    let theta2 = theta1 - T::PI();
    let arc = |th: T| Complex::from_polar(rho, th);

    // Zeros of F inside the half-disk would make the result depend on t.
    let half_disk = |u: T| {
        let two = T::lit(2.0);
        if u <= T::lit(0.5) {
            arc(theta1 - T::PI() * two * u)
        } else {
            t * (T::lit(4.0) * u - T::lit(3.0))
        }
    };
    let zeros_inside = winding_number(|mu| ctx.f_entire(mu), half_disk, 64)
        .map_err(|_| Error::ContourHit(format!("F vanishes on the half-disk boundary for t = {t}")))?;
    if zeros_inside != 0 {
        return Err(Error::ContourHit(format!(
            "F has {zeros_inside} zero(s) inside the half-disk |mu| < {rho}; choose a smaller |t|"
        )));
    }

    let hit_tol = T::tol(1e-10);
    let integrand = |th: T| -> Result<Complex<T>> {
        let mu = arc(th);
        let f = ctx.f_entire(mu)?;
        if f.norm() <= hit_tol * ctx.local_scale(mu)? {
            return Err(Error::ContourHit(format!("contour passes through a zero of F near {mu}")));
        }
        let fp = ctx.f_prime(mu)?;
        Ok(mu.ln() * fp / f * mu)
    };
    // F′ carries finite-difference noise near 1e-11 relative, so tighter targets cannot be met.
    let qcfg = QuadConfig { abs_tol: T::tol(1e-10), rel_tol: T::tol(1e-9), max_intervals: 400 };
    // ∫_{γ_t} … dμ = ∫_{θ1}^{θ2} … iμ dθ; the i cancels against 1/(πi).
    let quad = integrate_panels(integrand, theta2, theta1, n_quad, &qcfg)?;
    let integral = -quad.value / T::PI();

    let f_t = ctx.f_entire(t)?;
    let lp = ctx.log_power();
    let sign = if lp.rem_euclid(2) == 0 { T::one() } else { -T::one() };
    let factor = sign * (T::lit(2.0) * T::EULER_GAMMA.exp()).powi(lp as i32);
    let value = f_t / ctx.c_const() * integral.exp() * factor;
    Ok(OracleResult { value, integral, f_at_t: f_t, quad_error: quad.error / T::PI() })
}
