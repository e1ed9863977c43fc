//! Adaptive Gauss–Kronrod (7/15) quadrature for complex-valued integrands of
//! a real variable.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{creal, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_intervals: usize,
}

impl<T: Real> Default for QuadConfig<T> {
    fn default() -> Self {
        Self { abs_tol: T::lit(1e-14), rel_tol: T::tol(1e-12), max_intervals: 2000 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult<T> {
    pub value: Complex<T>,
    pub error: T,
    pub intervals: usize,
}

fn gk15<T: Real, F>(f: &mut F, a: T, b: T) -> Result<(Complex<T>, T)>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    let half = (b - a) * T::lit(0.5);
    let center = (a + b) * T::lit(0.5);
    let fc = f(center)?;
    let mut kronrod = fc * T::lit(WGK[7]);
    let mut gauss = fc * T::lit(WG[3]);
    for (i, (&x, &w)) in XGK.iter().zip(&WGK).take(7).enumerate() {
        let dx = half * T::lit(x);
        let pair = f(center - dx)? + f(center + dx)?;
        kronrod += pair * T::lit(w);
        if i % 2 == 1 {
            gauss += pair * T::lit(WG[i / 2]);
        }
    }
    Ok((kronrod * half, ((kronrod - gauss) * half).norm()))
}

/// Integrates `f` over `[a, b]`, bisecting the interval with the largest
/// error estimate until the total estimate meets the tolerance.
pub fn integrate<T: Real, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<QuadResult<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidInput("integration bounds must be finite".into()));
    }
    if a == b {
        return Ok(QuadResult { value: creal(T::zero()), error: T::zero(), intervals: 0 });
    }
    let (v, e) = gk15(&mut f, a, b)?;
    let mut parts = vec![(a, b, v, e)];
    loop {
        let total = parts.iter().fold(creal(T::zero()), |s, p| s + p.2);
        let err = parts.iter().fold(T::zero(), |s, p| s + p.3);
        if !total.re.is_finite() || !total.im.is_finite() {
            return Err(Error::Numeric("non-finite integrand".into()));
        }
        if err <= cfg.abs_tol.max(cfg.rel_tol * total.norm()) {
            return Ok(QuadResult { value: total, error: err, intervals: parts.len() });
        }
        if parts.len() >= cfg.max_intervals {
            return Err(Error::Numeric(format!(
                "quadrature did not converge: error estimate {err:e} after {} intervals",
                parts.len()
            )));
        }
        let worst = (0..parts.len())
            .max_by(|&i, &j| parts[i].3.partial_cmp(&parts[j].3).unwrap_or(std::cmp::Ordering::Equal))
            .expect("nonempty");
        let (lo, hi, _, _) = parts.swap_remove(worst);
        let mid = (lo + hi) * T::lit(0.5);
        let (v1, e1) = gk15(&mut f, lo, mid)?;
        let (v2, e2) = gk15(&mut f, mid, hi)?;
        parts.push((lo, mid, v1, e1));
        parts.push((mid, hi, v2, e2));
    }
}

/// Splits `[a, b]` into `panels` equal pieces and integrates each adaptively.
pub fn integrate_panels<T: Real, F>(mut f: F, a: T, b: T, panels: usize, cfg: &QuadConfig<T>) -> Result<QuadResult<T>>
where
    F: FnMut(T) -> Result<Complex<T>>,
{
    let panels = panels.max(1);
    let width = (b - a) / T::from_usize_lossy(panels);
    let mut out = QuadResult { value: creal(T::zero()), error: T::zero(), intervals: 0 };
    for k in 0..panels {
        let lo = a + width * T::from_usize_lossy(k);
        let hi = if k + 1 == panels { b } else { lo + width };
        let r = integrate(&mut f, lo, hi, cfg)?;
        out.value += r.value;
        out.error += r.error;
        out.intervals += r.intervals;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exact() {
        let cfg = QuadConfig::default();
        let r = integrate(|x: f64| Ok(Complex::new(x.powi(5), 2.0 * x)), 0.0, 2.0, &cfg).unwrap();
        assert!((r.value - Complex::new(64.0 / 6.0, 4.0)).norm() < 1e-13);
    }

    #[test]
    fn peaked_integrand() {
        let cfg = QuadConfig::default();
        let r = integrate(|x: f64| Ok(Complex::new(1.0 / (1e-4 + x * x), 0.0)), -1.0, 1.0, &cfg).unwrap();
        let exact = 2.0 * (1.0f64 / 1e-2).atan() / 1e-2;
        assert!((r.value.re - exact).abs() < 1e-10 * exact);
    }

    #[test]
    fn oscillatory_complex() {
        let cfg = QuadConfig::default();
        let r = integrate_panels(|t: f64| Ok(Complex::new(0.0, 7.0 * t).exp()), 0.0, 3.0, 4, &cfg).unwrap();
        let exact = (Complex::new(0.0, 21.0).exp() - 1.0) / Complex::new(0.0, 7.0);
        assert!((r.value - exact).norm() < 1e-13);
    }

    #[test]
    fn errors_propagate() {
        let cfg = QuadConfig::default();
        let r = integrate(|_x: f64| Err(Error::Numeric("boom".into())), 0.0, 1.0, &cfg);
        assert!(r.is_err());
        let r = integrate(|x: f64| Ok(Complex::new(1.0 / x, 0.0)), 0.0, 1.0, &QuadConfig { max_intervals: 50, ..cfg });
        assert!(r.is_err());
    }
}
