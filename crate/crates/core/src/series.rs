//! Formal expansion of `log(1 + Σ b_{kβ} x^k y^{2β})` and the singularity
//! structure of the zeta function it encodes.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::expo_poly::{build_p, coincide, leading_data, multi_index_add, multi_index_value, ExpoKey, LeadingData};
use crate::extension::{BaseSpectrum, Lagrangian};
use crate::quadrature::{integrate, QuadConfig};
use crate::scalar::{creal, Real};

pub const DEFAULT_N: f64 = 5.0;
pub const DEFAULT_M: i64 = 10;
/// `c_{ℓξ}` counts as nonzero when `|c| > ZERO_TOL · (1 + Σ|c| at that ξ)`.
pub const ZERO_TOL: f64 = 1e-11;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncation<T> {
    /// ξ cutoff.
    pub n: T,
    /// ℓ cutoff: terms with `−m ≤ ℓ ≤ m` are exact.
    pub m: i64,
    /// Largest power of the remainder used.
    pub k_max: usize,
}

/// Coefficients `c_{ℓξ}` keyed by `ExpoKey { j: ℓ, m: ξ multi-index }`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogSeries<T> {
    pub terms: BTreeMap<ExpoKey, Complex<T>>,
    pub basis: Arc<[T]>,
    pub truncation: Truncation<T>,
}

impl<T: Real> LogSeries<T> {
    pub fn xi(&self, key: &ExpoKey) -> T {
        multi_index_value(&key.m, &self.basis)
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

#[derive(Clone)]
struct SeriesTerm<T> {
    l: i64,
    key: Vec<i32>,
    xi: T,
    c: Complex<T>,
}

struct Window<T> {
    n: T,
    m: i64,
}

impl<T: Real> Window<T> {
    fn xi_ok(&self, xi: T) -> bool {
        xi <= self.n || coincide(xi, self.n)
    }

    fn contains(&self, l: i64, xi: T) -> bool {
        l.abs() <= self.m && self.xi_ok(xi)
    }
}

/// Bounds used to cap the number of factors in a power series of `z`.
struct PowerBounds<T> {
    beta_min: Option<T>,
    k_neg: i64,
    k_pos: i64,
}

impl<T: Real> PowerBounds<T> {
    fn of(z: &[SeriesTerm<T>]) -> Result<Self> {
        let mut beta_min: Option<T> = None;
        let mut k_neg = 0i64;
        let mut k_pos = 0i64;
        for t in z {
            k_pos = k_pos.max(t.l);
            if coincide(t.xi, T::zero()) {
                if t.l < 1 {
                    return Err(Error::Numeric("formal series has a nonnilpotent constant part".into()));
                }
            } else if t.xi < T::zero() {
                return Err(Error::Numeric("formal series has a negative ξ exponent".into()));
            } else {
                beta_min = Some(beta_min.map_or(t.xi, |b: T| b.min(t.xi)));
                k_neg = k_neg.max(-t.l);
            }
        }
        Ok(Self { beta_min, k_neg, k_pos })
    }

    fn positive_factor_cap(&self, xi_budget: T) -> i64 {
        match self.beta_min {
            None => 0,
            Some(b) => {
                let r = xi_budget / b;
                let cap = (r + T::tol(1e-12) * (T::one() + r)).floor();
                cap.to_i64().unwrap_or(i64::MAX).max(0)
            }
        }
    }

    /// Any product of more than `k_max` factors lies outside the window.
    fn k_max(&self, w: &Window<T>) -> usize {
        let p = self.positive_factor_cap(w.n);
        (w.m + p * (1 + self.k_neg)).max(1) as usize
    }
}

/// `Σ_{n ≥ 1} coeff(n) z^n` restricted to the window, with exact pruning.
fn compose<T: Real>(
    z: &[SeriesTerm<T>],
    mut coeff: impl FnMut(usize) -> Complex<T>,
    w: &Window<T>,
) -> Result<(BTreeMap<ExpoKey, Complex<T>>, usize)> {
    let z: Vec<SeriesTerm<T>> = z.iter().filter(|t| w.xi_ok(t.xi)).cloned().collect();
    let mut out: BTreeMap<ExpoKey, Complex<T>> = BTreeMap::new();
    if z.is_empty() {
        return Ok((out, 0));
    }
    let bounds = PowerBounds::of(&z)?;
    let k_max = bounds.k_max(w);
    let keep = |t: &SeriesTerm<T>, remaining: usize| -> bool {
        if !w.xi_ok(t.xi) {
            return false;
        }
        let r = remaining as i64;
        let dec = bounds.k_neg * r.min(bounds.positive_factor_cap((w.n - t.xi).max(T::zero())));
        let inc = bounds.k_pos * r;
        t.l - dec <= w.m && t.l + inc >= -w.m
    };

    let mut power: BTreeMap<(i64, Vec<i32>), SeriesTerm<T>> = BTreeMap::new();
    for t in &z {
        if keep(t, k_max - 1) {
            accumulate(&mut power, t.clone());
        }
    }
    for n in 1..=k_max {
        let cn = coeff(n);
        for t in power.values() {
            if w.contains(t.l, t.xi) {
                let e = out.entry(ExpoKey::new(t.l, t.key.clone())).or_insert_with(|| creal(T::zero()));
                *e += t.c * cn;
            }
        }
        if n == k_max {
            break;
        }
        let mut next: BTreeMap<(i64, Vec<i32>), SeriesTerm<T>> = BTreeMap::new();
        for a in power.values() {
            for b in &z {
                let t = SeriesTerm { l: a.l + b.l, key: multi_index_add(&a.key, &b.key), xi: a.xi + b.xi, c: a.c * b.c };
                if keep(&t, k_max - n - 1) {
                    accumulate(&mut next, t);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        power = next;
    }
    out.retain(|_, c| *c != creal(T::zero()));
    Ok((out, k_max))
}

fn accumulate<T: Real>(map: &mut BTreeMap<(i64, Vec<i32>), SeriesTerm<T>>, t: SeriesTerm<T>) {
    match map.get_mut(&(t.l, t.key.clone())) {
        Some(e) => e.c += t.c,
        None => {
            map.insert((t.l, t.key.clone()), t);
        }
    }
}

fn check_window<T: Real>(n: T, m: i64) -> Result<()> {
    if !(n > T::zero() && n.is_finite()) {
        return Err(Error::InvalidInput(format!("truncation N must be positive, got {n}")));
    }
    if m < 1 {
        return Err(Error::InvalidInput(format!("truncation M must be at least 1, got {m}")));
    }
    Ok(())
}

/// Coefficients of `log(1 + z)` for `ξ ≤ n`, `−m ≤ ℓ ≤ m`.
pub fn log_expand<T: Real>(lead: &LeadingData<T>, n: T, m: i64) -> Result<LogSeries<T>> {
    check_window(n, m)?;
    let z: Vec<SeriesTerm<T>> = lead
        .remainder
        .iter()
        .map(|r| SeriesTerm { l: r.k, key: r.beta_key.clone(), xi: r.beta_value, c: r.coeff })
        .collect();
    let w = Window { n, m };
    let (terms, k_max) = compose(
        &z,
        |k| {
            let sign = if k % 2 == 1 { T::one() } else { -T::one() };
            creal(sign / T::from_usize_lossy(k))
        },
        &w,
    )?;
    Ok(LogSeries { terms, basis: lead.basis.clone(), truncation: Truncation { n, m, k_max } })
}

/// Formal `exp(S) − 1` restricted to the window of `S`.
pub fn exp_minus_one<T: Real>(s: &LogSeries<T>) -> Result<BTreeMap<ExpoKey, Complex<T>>> {
    let z: Vec<SeriesTerm<T>> = s
        .terms
        .iter()
        .map(|(k, &c)| SeriesTerm { l: k.j, key: k.m.clone(), xi: s.xi(k), c })
        .collect();
    let w = Window { n: s.truncation.n, m: s.truncation.m };
    let mut fact = vec![T::one()];
    let (terms, _) = compose(
        &z,
        |k| {
            while fact.len() <= k {
                let next = fact[fact.len() - 1] * T::from_usize_lossy(fact.len());
                fact.push(next);
            }
            creal(T::one() / fact[k])
        },
        &w,
    )?;
    Ok(terms)
}

/// Extra ℓ room that makes `exp(log(1 + z))` exact on the `(n, m)` window.
pub fn roundtrip_margin<T: Real>(lead: &LeadingData<T>, n: T) -> i64 {
    let z: Vec<SeriesTerm<T>> = lead
        .remainder
        .iter()
        .map(|r| SeriesTerm { l: r.k, key: r.beta_key.clone(), xi: r.beta_value, c: r.coeff })
        .collect();
    match PowerBounds::of(&z) {
        Ok(b) => {
            let p = b.beta_min.map_or(0, |beta| (n / beta).ceil().to_i64().unwrap_or(0));
            p * b.k_neg
        }
        Err(_) => 0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrip<T> {
    /// Largest `|exp(log(1 + z)) − (1 + z)|` coefficient inside the window.
    pub max_abs_error: T,
    /// Same, each error divided by `1 + [Σ_n |z|^n]_key`, the rounding scale of that key.
    pub max_scaled_error: T,
    pub keys_checked: usize,
}

/// Exponentiates the log expansion (on a widened ℓ window so every
/// contributing term is present) and compares with `1 + z` on the `(n, m)` window.
pub fn roundtrip_check<T: Real>(lead: &LeadingData<T>, n: T, m: i64) -> Result<RoundTrip<T>> {
    check_window(n, m)?;
    let wide = log_expand(lead, n, m + roundtrip_margin(lead, n))?;
    let back = exp_minus_one(&wide)?;
    let moduli: Vec<SeriesTerm<T>> = lead
        .remainder
        .iter()
        .map(|r| SeriesTerm { l: r.k, key: r.beta_key.clone(), xi: r.beta_value, c: creal(r.coeff.norm()) })
        .collect();
    let (scale, _) = compose(&moduli, |_| creal(T::one()), &Window { n, m: wide.truncation.m })?;
    let mut want: BTreeMap<ExpoKey, Complex<T>> = BTreeMap::new();
    for r in &lead.remainder {
        *want.entry(ExpoKey::new(r.k, r.beta_key.clone())).or_insert_with(|| creal(T::zero())) += r.coeff;
    }
    let window = Window { n, m };
    let mut out = RoundTrip { max_abs_error: T::zero(), max_scaled_error: T::zero(), keys_checked: 0 };
    let keys: std::collections::BTreeSet<&ExpoKey> = back.keys().chain(want.keys()).collect();
    for key in keys {
        if !window.contains(key.j, multi_index_value(&key.m, &lead.basis)) {
            continue;
        }
        let zero = creal(T::zero());
        let err = (back.get(key).copied().unwrap_or(zero) - want.get(key).copied().unwrap_or(zero)).norm();
        let s = scale.get(key).map_or(T::zero(), |c| c.re);
        out.max_abs_error = out.max_abs_error.max(err);
        out.max_scaled_error = out.max_scaled_error.max(err / (T::one() + s));
        out.keys_checked += 1;
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct PoleEntry<T> {
    pub xi: T,
    pub xi_key: Vec<i32>,
    /// `p_ξ ≤ 0`; the pole at `s = −ξ` has order `|p_ξ| + 1`.
    pub p_xi: i64,
    pub order: u64,
    pub coeff: Complex<T>,
    /// `f_ξ(−ξ)`.
    pub f_at_minus_xi: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogEntry<T> {
    pub xi: T,
    pub xi_key: Vec<i32>,
    pub ell_xi: i64,
    pub coeff: Complex<T>,
    /// Leading coefficient of `g_ξ`.
    pub g_leading: Complex<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularityReport<T> {
    pub j0: i64,
    pub q0: usize,
    pub log_branch_coeff_at_0: i64,
    pub alpha0_key: Vec<i32>,
    pub alpha0_value: T,
    pub a_j0alpha0: Complex<T>,
    pub poles: Vec<PoleEntry<T>>,
    pub logs: Vec<LogEntry<T>>,
    pub truncation: Truncation<T>,
    /// log 2 − γ, the constant in the `e^{−2s γ̃}` prefactor of the `log s` terms.
    pub gamma_tilde: T,
    pub warnings: Vec<String>,
}

fn factorial<T: Real>(n: u64) -> T {
    (1..=n).fold(T::one(), |f, k| f * T::from_usize_lossy(k as usize))
}

/// `f_ξ(−ξ)` for a pole with `p_ξ = p ≤ 0`.
pub fn pole_value<T: Real>(c: Complex<T>, p: i64, xi: T) -> Complex<T> {
    let k = p.unsigned_abs();
    let sign = if (k + 1) % 2 == 0 { T::one() } else { -T::one() };
    c * (sign * factorial::<T>(k) / T::lit(2.0).powi(k as i32) * xi)
}

/// Leading coefficient of `g_ξ` for `ℓ_ξ = l ≥ 1`.
pub fn log_leading<T: Real>(c: Complex<T>, l: i64, xi: T) -> Complex<T> {
    let base = T::lit(2.0).powi(l as i32) / factorial::<T>((l - 1) as u64);
    if coincide(xi, T::zero()) {
        c * base
    } else {
        c * (-xi * base)
    }
}

/// Runs the full pipeline: `p(x, y)`, its leading data, the log expansion and
/// the pole/log classification.
pub fn analyze<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>, n: T, m: i64) -> Result<SingularityReport<T>> {
    check_window(n, m)?;
    let p = build_p(l, s)?;
    let lead = leading_data(&p, s.q0())?;
    let series = log_expand(&lead, n, m)?;
    Ok(report_from_series(&lead, &series))
}

pub fn report_from_series<T: Real>(lead: &LeadingData<T>, series: &LogSeries<T>) -> SingularityReport<T> {
    // Group by numeric ξ (merging coincident multi-indices).
    let mut entries: Vec<(T, &ExpoKey, Complex<T>)> =
        series.terms.iter().map(|(k, &c)| (series.xi(k), k, c)).collect();
    entries.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal).then(a.1.cmp(b.1)));
    let mut groups: Vec<(T, Vec<i32>, BTreeMap<i64, Complex<T>>)> = Vec::new();
    for (xi, key, c) in entries {
        match groups.last_mut() {
            Some(g) if coincide(g.0, xi) => *g.2.entry(key.j).or_insert_with(|| creal(T::zero())) += c,
            _ => {
                let mut by_l = BTreeMap::new();
                by_l.insert(key.j, c);
                groups.push((xi, key.m.clone(), by_l));
            }
        }
    }

    let mut poles = Vec::new();
    let mut logs = Vec::new();
    let mut warnings = Vec::new();
    let m = series.truncation.m;
    for (xi, key, by_l) in groups {
        let total = by_l.values().fold(T::zero(), |s, c| s + c.norm());
        let thresh = T::lit(ZERO_TOL) * (T::one() + total);
        let nonzero: Vec<(i64, Complex<T>)> = by_l.into_iter().filter(|(_, c)| c.norm() > thresh).collect();
        if let Some(&(p, c)) = nonzero.iter().find(|(l, _)| *l <= 0) {
            if p == -m {
                warnings.push(format!("pole order at xi = {xi} reaches the ell window edge -{m}; raise M"));
            }
            poles.push(PoleEntry {
                xi,
                xi_key: key.clone(),
                p_xi: p,
                order: p.unsigned_abs() + 1,
                coeff: c,
                f_at_minus_xi: pole_value(c, p, xi),
            });
        }
        if let Some(&(ell, c)) = nonzero.iter().find(|(l, _)| *l > 0) {
            logs.push(LogEntry { xi, xi_key: key, ell_xi: ell, coeff: c, g_leading: log_leading(c, ell, xi) });
        }
    }
    if !lead.flagged_small.is_empty() {
        warnings.push(format!(
            "{} coefficient(s) of p(x, y) are below 1e-13 of the largest and may be rounding noise",
            lead.flagged_small.len()
        ));
    }
    SingularityReport {
        j0: lead.j0,
        q0: lead.q0,
        log_branch_coeff_at_0: lead.j0 - lead.q0 as i64,
        alpha0_key: lead.alpha0_key.clone(),
        alpha0_value: lead.alpha0_value,
        a_j0alpha0: lead.a_j0alpha0,
        poles,
        logs,
        truncation: series.truncation,
        gamma_tilde: T::gamma_tilde(),
        warnings,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogIntCheck<T> {
    pub lhs: T,
    pub rhs: T,
    pub residual: T,
}

/// Compares `∫_{|t|}^∞ x^{−2s−1} / (c − log x) dx` with its small-`s`
/// expansion `e^{−2sc} log s + e^{−2sc} (γ + log(2 (log|t| − c)))`.
pub fn verify_logint<T: Real>(c: T, t_abs: T, s: T) -> Result<LogIntCheck<T>> {
    if !(t_abs > T::zero()) || !(t_abs.ln() > c) {
        return Err(Error::InvalidInput(format!("need log|t| > c, got |t| = {t_abs}, c = {c}")));
    }
    if !(s > T::zero() && s <= T::lit(0.05)) {
        return Err(Error::InvalidInput(format!("s must lie in (0, 0.05], got {s}")));
    }
    let two_s = T::lit(2.0) * s;
    let u0 = t_abs.ln() - c;
    // With x = e^{c+u} and u = e^w the integral becomes
    // −e^{−2sc} ∫ exp(−2s e^w) dw over w > log u0; the cut at 2su = 40
    // leaves a tail below e^{−40}/40.
    let w_hi = (T::lit(40.0) / two_s).ln();
    let w_lo = u0.ln();
    let inner = if w_hi > w_lo {
        let cfg = QuadConfig { abs_tol: T::tol(1e-13), rel_tol: T::tol(1e-12), max_intervals: 500 };
        integrate(|w: T| Ok(creal((-two_s * w.exp()).exp())), w_lo, w_hi, &cfg)?.value.re
    } else {
        T::zero()
    };
    let pref = (-two_s * c).exp();
    let lhs = -pref * inner;
    let rhs = pref * s.ln() + pref * (T::EULER_GAMMA + (T::lit(2.0) * u0).ln());
    Ok(LogIntCheck { lhs, rhs, residual: (lhs - rhs).abs() })
}
