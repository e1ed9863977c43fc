//! Γ, Bessel functions of real order, Y₀ and the modified J̃₀ used by the
//! secular function.
//!
//! The Bessel primitive is the entire, even function `z^{-v} J_v(z)`. Small
//! arguments use the power series; for `|z|` above `small_z_radius` the Hankel
//! expansion is summed up to its smallest term. The `*_escaled` variants return
//! values multiplied by `exp(-|Im z|)`, which keeps `F(ix)` finite for large `x`.

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesConfig<T> {
    /// Relative size of the last retained series term.
    pub term_tolerance: T,
    pub max_terms: usize,
    /// Switchover radius between the power series and the Hankel expansion.
    pub small_z_radius: T,
}

impl<T: Real> Default for SeriesConfig<T> {
    fn default() -> Self {
        Self { term_tolerance: T::lit(1e-17), max_terms: 80, small_z_radius: T::lit(12.0) }
    }
}

impl<T: Real> SeriesConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.term_tolerance > T::zero()) || self.max_terms < 10 || !(self.small_z_radius > T::zero()) {
            return Err(Error::InvalidInput(
                "series config needs term_tolerance > 0, max_terms >= 10, small_z_radius > 0".into(),
            ));
        }
        Ok(())
    }
}

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn is_nonpositive_integer<T: Real>(x: T) -> bool {
    x <= T::zero() && x == x.round()
}

fn lanczos_gamma<T: Real>(x: T) -> T {
    if x >= T::one() && x <= T::lit(20.0) && x == x.round() {
        let n = x.to_usize().unwrap_or(1);
        return (1..n).fold(T::one(), |acc, k| acc * T::from_usize_lossy(k));
    }
    if x < T::lit(0.5) {
        // Reflection: Γ(x) Γ(1 − x) = π / sin(πx).
        T::PI() / ((T::PI() * x).sin() * lanczos_gamma(T::one() - x))
    } else {
        let x = x - T::one();
        let mut acc = T::lit(LANCZOS[0]);
        for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
            acc += T::lit(c) / (x + T::from_usize_lossy(i));
        }
        let t = x + T::lit(LANCZOS_G + 0.5);
        (T::lit(2.0) * T::PI()).sqrt() * t.powf(x + T::lit(0.5)) * (-t).exp() * acc
    }
}

/// Γ(x) for real `x`; errors at the poles `x = 0, −1, −2, …`.
pub fn gamma<T: Real>(x: T) -> Result<T> {
    if !x.is_finite() || is_nonpositive_integer(x) {
        return Err(Error::InvalidInput(format!("gamma has a pole at {x}")));
    }
    Ok(lanczos_gamma(x))
}

/// 1/Γ(x), entire; zero at the poles of Γ.
pub fn rgamma<T: Real>(x: T) -> T {
    if is_nonpositive_integer(x) {
        T::zero()
    } else {
        T::one() / lanczos_gamma(x)
    }
}

/// τ = 2^{2ν} Γ(1 + ν) / Γ(1 − ν).
pub fn tau_of_nu<T: Real>(nu: T) -> Result<T> {
    Ok(T::lit(2.0).powf(T::lit(2.0) * nu) * gamma(T::one() + nu)? / gamma(T::one() - nu)?)
}

fn check_order<T: Real>(v: T) -> Result<()> {
    if !v.is_finite() || v.abs() >= T::lit(4.0) {
        return Err(Error::InvalidInput(format!("Bessel order {v} outside the supported range |v| < 4")));
    }
    Ok(())
}

/// Power series of `z^{-v} J_v(z)`.
fn scaled_j_series<T: Real>(v: T, z: Complex<T>, cfg: &SeriesConfig<T>) -> Result<Complex<T>> {
    let w = -(z * z) / T::lit(4.0);
    let prefactor = T::lit(2.0).powf(-v);
    // pw = w^k / k!, rg = 1/Γ(v + k + 1)
    let mut pw = creal(T::one());
    let mut rg = rgamma(v + T::one());
    let mut sum = pw * rg;
    let peak = w.norm().sqrt() + T::one();
    for k in 1..cfg.max_terms {
        let kf = T::from_usize_lossy(k);
        pw = pw * w / kf;
        let arg = v + kf;
        rg = if arg == T::zero() || is_nonpositive_integer(arg) { rgamma(arg + T::one()) } else { rg / arg };
        let term = pw * rg;
        sum += term;
        if kf > peak && term.norm() <= cfg.term_tolerance * sum.norm() {
            return Ok(sum * prefactor);
        }
    }
    Err(Error::Numeric(format!("Bessel series for |z| = {} did not converge in {} terms", z.norm(), cfg.max_terms)))
}

/// Hankel-expansion amplitudes (P, Q) for order v at argument z (Re z ≥ 0),
/// summed up to the smallest term.
fn hankel_pq<T: Real>(v: T, z: Complex<T>, cfg: &SeriesConfig<T>) -> (Complex<T>, Complex<T>) {
    let mu = T::lit(4.0) * v * v;
    let mut p = creal(T::one());
    let mut q = creal(T::zero());
    let mut term = creal(T::one());
    let mut last = T::infinity();
    let zinv = z.inv();
    for k in 1..(4 * cfg.max_terms) {
        let kf = T::from_usize_lossy(k);
        let odd = T::lit(2.0) * kf - T::one();
        term = term * (mu - odd * odd) / (kf * T::lit(8.0)) * zinv;
        let mag = term.norm();
        if mag > last {
            break;
        }
        last = mag;
        // a_k z^{-k} enters P (k even) or Q (k odd) with sign (−1)^{⌊k/2⌋}.
        let signed = if (k / 2) % 2 == 0 { term } else { -term };
        if k % 2 == 0 {
            p += signed;
        } else {
            q += signed;
        }
        if mag <= cfg.term_tolerance || mag == T::zero() {
            break;
        }
    }
    (p, q)
}

/// `e^{i ω - s}` and `e^{-i ω - s}` with `s = |Im ω|`.
fn scaled_exps<T: Real>(omega: Complex<T>) -> (Complex<T>, Complex<T>) {
    let s = omega.im.abs();
    let i = Complex::new(T::zero(), T::one());
    ((i * omega - s).exp(), (-i * omega - s).exp())
}

/// (J_v(z), Y_v(z)) · e^{-|Im z|} from the Hankel expansion, Re z ≥ 0.
fn hankel_jy_escaled<T: Real>(v: T, z: Complex<T>, cfg: &SeriesConfig<T>) -> (Complex<T>, Complex<T>) {
    let (p, q) = hankel_pq(v, z, cfg);
    let omega = z - v * T::FRAC_PI_2() - T::FRAC_PI_4();
    let (ep, em) = scaled_exps(omega);
    let two = T::lit(2.0);
    let i = Complex::new(T::zero(), T::one());
    let cos = (ep + em) / two;
    let sin = (ep - em) / (i * two);
    let amp = (creal(two / T::PI()) / z).sqrt();
    (amp * (p * cos - q * sin), amp * (p * sin + q * cos))
}

fn to_right_half<T: Real>(z: Complex<T>) -> Complex<T> {
    if z.re < T::zero() {
        -z
    } else {
        z
    }
}

/// `z^{-v} J_v(z) · e^{-|Im z|}`.
pub fn bessel_j_scaled_escaled<T: Real>(v: T, z: Complex<T>, cfg: &SeriesConfig<T>) -> Result<Complex<T>> {
    check_order(v)?;
    if z.norm() <= cfg.small_z_radius {
        return Ok(scaled_j_series(v, z, cfg)? * (-z.im.abs()).exp());
    }
    let zr = to_right_half(z);
    let (j, _) = hankel_jy_escaled(v, zr, cfg);
    Ok(j * zr.powf(-v))
}

/// The entire, even function `z^{-v} J_v(z)` for real order `|v| < 4`.
pub fn bessel_j_scaled<T: Real>(v: T, z: Complex<T>, cfg: &SeriesConfig<T>) -> Result<Complex<T>> {
    check_order(v)?;
    if z.norm() <= cfg.small_z_radius {
        return scaled_j_series(v, z, cfg);
    }
    let zr = to_right_half(z);
    let (j, _) = hankel_jy_escaled(v, zr, cfg);
    Ok(j * zr.powf(-v) * zr.im.abs().exp())
}

/// `J_v(x)` for real `x > 0`.
pub fn bessel_j<T: Real>(v: T, x: T, cfg: &SeriesConfig<T>) -> Result<T> {
    if !(x > T::zero()) {
        return Err(Error::InvalidInput(format!("bessel_j expects x > 0, got {x}")));
    }
    Ok(bessel_j_scaled(v, creal(x), cfg)?.re * x.powf(v))
}

/// Σ_{k≥1} H_k w^k / (k!)², the logarithm-free part of Y₀.
fn y0_harmonic_series<T: Real>(z: Complex<T>, cfg: &SeriesConfig<T>) -> Result<Complex<T>> {
    let w = -(z * z) / T::lit(4.0);
    let mut u = creal(T::one());
    let mut h = T::zero();
    let mut sum = creal(T::zero());
    let peak = w.norm().sqrt() + T::one();
    for k in 1..cfg.max_terms {
        let kf = T::from_usize_lossy(k);
        u = u * w / (kf * kf);
        h += T::one() / kf;
        let term = u * h;
        sum += term;
        if kf > peak && term.norm() <= cfg.term_tolerance * sum.norm() {
            return Ok(sum);
        }
        if sum.norm() == T::zero() {
            return Ok(sum);
        }
    }
    Err(Error::Numeric(format!("Y0 series for |z| = {} did not converge", z.norm())))
}

/// Y₀(x) for real `x > 0`.
pub fn bessel_y0<T: Real>(x: T, cfg: &SeriesConfig<T>) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::InvalidInput(format!("bessel_y0 expects x > 0, got {x}")));
    }
    let z = creal(x);
    if x <= cfg.small_z_radius {
        let j0 = scaled_j_series(T::zero(), z, cfg)?.re;
        let harm = y0_harmonic_series(z, cfg)?.re;
        let log_part = x.ln() - T::LN_2() + T::EULER_GAMMA;
        return Ok(T::lit(2.0) / T::PI() * (log_part * j0 - harm));
    }
    let (_, y) = hankel_jy_escaled(T::zero(), z, cfg);
    Ok(y.re)
}

fn on_cut<T: Real>(mu: Complex<T>) -> bool {
    mu.im == T::zero() && mu.re < T::zero()
}

/// J̃₀(μr) · e^{-|Im μr|}; no cut check (the function is even and entire).
pub(crate) fn tilde_j0_escaled_unchecked<T: Real>(
    mu: Complex<T>,
    r: T,
    cfg: &SeriesConfig<T>,
) -> Result<Complex<T>> {
    let z = mu * r;
    let damp = (-z.im.abs()).exp();
    if z.norm() <= cfg.small_z_radius {
        let j0 = scaled_j_series(T::zero(), z, cfg)?;
        let harm = y0_harmonic_series(z, cfg)?;
        return Ok((j0 * r.ln() - harm) * damp);
    }
    let mu = to_right_half(mu);
    let z = mu * r;
    let (j0, y0) = hankel_jy_escaled(T::zero(), z, cfg);
    let log_part = mu.ln() - T::LN_2() + T::EULER_GAMMA;
    Ok(y0 * T::FRAC_PI_2() - log_part * j0)
}

/// J̃₀(μr) = (π/2) Y₀(μr) − (log μ − log 2 + γ) J₀(μr), principal log.
pub fn tilde_j0<T: Real>(mu: Complex<T>, r: T, cfg: &SeriesConfig<T>) -> Result<Complex<T>> {
    if on_cut(mu) {
        return Err(Error::InvalidInput(format!("mu = {mu} lies on the negative real axis")));
    }
    if !(r > T::zero()) {
        return Err(Error::InvalidInput(format!("tilde_j0 expects r > 0, got {r}")));
    }
    let z = mu * r;
    Ok(tilde_j0_escaled_unchecked(mu, r, cfg)? * z.im.abs().exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{PI, SQRT_2};

    fn cfg() -> SeriesConfig<f64> {
        SeriesConfig::default()
    }

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    #[test]
    fn gamma_special_values() {
        let sp = PI.sqrt();
        assert!((gamma(1.0f64).unwrap() - 1.0).abs() < 1e-13);
        assert!((gamma(0.5).unwrap() - sp).abs() / sp < 1e-13);
        assert!((gamma(1.5).unwrap() - sp / 2.0).abs() / (sp / 2.0) < 1e-13);
        assert!((gamma(3.0f64).unwrap() - 2.0).abs() < 1e-13);
        // Γ(−1/2) = −2√π
        assert!((gamma(-0.5).unwrap() + 2.0 * sp).abs() / (2.0 * sp) < 1e-13);
    }

    #[test]
    fn gamma_poles_rejected() {
        assert!(gamma(0.0f64).is_err());
        assert!(gamma(-1.0f64).is_err());
        assert_eq!(rgamma(-1.0f64), 0.0);
    }

    #[test]
    fn tau_at_half_is_one() {
        assert!((tau_of_nu(0.5f64).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scaled_j0_at_origin() {
        assert_eq!(bessel_j_scaled(0.0, c(0.0, 0.0), &cfg()).unwrap(), c(1.0, 0.0));
    }

    #[test]
    fn half_order_closed_form() {
        let j = bessel_j(0.5, 1.0, &cfg()).unwrap();
        let exact = (2.0 / PI).sqrt() * 1f64.sin();
        assert!((j - exact).abs() < 1e-15, "{j} vs {exact}");
        assert!((j - 0.671_396_707_141_803_1).abs() < 1e-15);
    }

    #[test]
    fn scaled_j_is_even() {
        for &(v, z) in &[(0.3, c(1.3, 0.4)), (-0.7, c(2.0, -3.0)), (0.9, c(15.0, 2.0)), (0.1, c(0.0, 20.0))] {
            let a = bessel_j_scaled(v, z, &cfg()).unwrap();
            let b = bessel_j_scaled(v, -z, &cfg()).unwrap();
            assert!((a - b).norm() <= 1e-14 * a.norm(), "v={v} z={z}");
        }
    }

    #[test]
    fn y0_reference_and_limits() {
        // Y0(1) = 0.08825696421567695798...
        let y = bessel_y0(1.0, &cfg()).unwrap();
        assert!((y - 0.088_256_964_215_676_96).abs() < 1e-15);
        assert!(bessel_y0(1e-6, &cfg()).unwrap() < 0.0);
        assert!(bessel_y0(0.0f64, &cfg()).is_err());
        // (π/2) Y0 − (log z − log 2 + γ) J0 ≈ H1 z²/4 at z = 1e−3.
        let z = 1e-3;
        let j0 = bessel_j(0.0, z, &cfg()).unwrap();
        let lhs = PI / 2.0 * bessel_y0(z, &cfg()).unwrap() - (z.ln() - 2f64.ln() + f64::EULER_GAMMA) * j0;
        // absolute error is limited by cancellation against log z ≈ −6.9
        assert!((lhs - z * z / 4.0).abs() < 1e-13, "{lhs}");
    }

    #[test]
    fn tilde_j0_limits_and_evenness() {
        let r = 2.5;
        let t0 = tilde_j0(c(0.0, 0.0), r, &cfg()).unwrap();
        assert!((t0 - c(r.ln(), 0.0)).norm() < 1e-15);
        assert!(tilde_j0(c(0.0, 0.0), 1.0, &cfg()).unwrap().norm() < 1e-15);
        let mu = c(0.7, 1.1);
        let a = tilde_j0(mu, r, &cfg()).unwrap();
        let b = tilde_j0(-mu, r, &cfg()).unwrap();
        assert!((a - b).norm() <= 1e-13 * a.norm());
        assert!(tilde_j0(c(-1.0, 0.0), r, &cfg()).is_err());
    }

    #[test]
    fn tilde_j0_matches_definition_on_positive_axis() {
        for &x in &[0.3, 2.0, 7.5, 13.0, 30.0] {
            let y0 = bessel_y0(x, &cfg()).unwrap();
            let j0 = bessel_j(0.0, x, &cfg()).unwrap();
            let direct = PI / 2.0 * y0 - (x.ln() - 2f64.ln() + f64::EULER_GAMMA) * j0;
            let t = tilde_j0(c(x, 0.0), 1.0, &cfg()).unwrap();
            assert!((t.re - direct).abs() < 1e-12 && t.im.abs() < 1e-14, "x={x}");
        }
    }

    #[test]
    fn negative_order_half() {
        // J_{-1/2}(x) = √(2/(πx)) cos x
        for &x in &[0.5, 3.0, 11.0, 20.0] {
            let j = bessel_j(-0.5, x, &cfg()).unwrap();
            let exact = (2.0 / (PI * x)).sqrt() * x.cos();
            assert!((j - exact).abs() < 1e-12, "x={x}: {j} vs {exact}");
        }
        let _ = SQRT_2;
    }

    #[test]
    fn f32_smoke() {
        let c32 = SeriesConfig::<f32>::default();
        let j = bessel_j(0.5f32, 1.0, &c32).unwrap();
        assert!((j - 0.671_396_7).abs() < 1e-5);
        assert!((gamma(0.5f32).unwrap() - std::f32::consts::PI.sqrt()).abs() < 1e-5);
    }
}
