//! Sparse polynomials `Σ a_{jα} x^j y^{2α}` whose y-exponents are integer
//! combinations `α = m · ν` of the base orders.
//!
//! Exponents are kept as exact integer multi-indices; numeric values are only
//! used for ordering. The determinant polynomial `p(x, y)` and its leading
//! term live here.

use std::collections::{BTreeMap, HashMap};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::extension::{BaseSpectrum, Lagrangian};
use crate::linalg::CMatrix;
use crate::scalar::{cpowi, creal, Real};

/// Two exponent values closer than `COINCIDENCE_TOL · (1 + α)` are treated as
/// one value when ordering.
pub const COINCIDENCE_TOL: f64 = 1e-12;
/// Coefficients below this fraction of the largest one are flagged (never dropped).
pub const SMALL_COEFF_FLAG: f64 = 1e-13;

/// Exponent key: `x^j y^{2 (m · ν)}`. Components of `m` are nonnegative for
/// `p` itself; differences of keys (remainder terms) may be signed.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExpoKey {
    pub j: i64,
    pub m: Vec<i32>,
}

impl ExpoKey {
    pub fn new(j: i64, m: Vec<i32>) -> Self {
        Self { j, m }
    }

    pub fn constant(q1: usize) -> Self {
        Self { j: 0, m: vec![0; q1] }
    }

    pub fn alpha<T: Real>(&self, basis: &[T]) -> T {
        multi_index_value(&self.m, basis)
    }
}

/// `Σ m_i ν_i`.
pub fn multi_index_value<T: Real>(m: &[i32], basis: &[T]) -> T {
    m.iter().zip(basis).fold(T::zero(), |s, (&k, &nu)| s + T::from_i64_lossy(k as i64) * nu)
}

pub(crate) fn multi_index_add(a: &[i32], b: &[i32]) -> Vec<i32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub(crate) fn coincide<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= T::tol(COINCIDENCE_TOL) * (T::one() + a.abs().max(b.abs()))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpoPoly<T> {
    terms: BTreeMap<ExpoKey, Complex<T>>,
    basis: Arc<[T]>,
}

impl<T: Real> ExpoPoly<T> {
    pub fn zero(basis: Arc<[T]>) -> Self {
        Self { terms: BTreeMap::new(), basis }
    }

    pub fn constant(basis: Arc<[T]>, c: Complex<T>) -> Self {
        let key = ExpoKey::constant(basis.len());
        Self::monomial(basis, key, c)
    }

    pub fn monomial(basis: Arc<[T]>, key: ExpoKey, c: Complex<T>) -> Self {
        assert_eq!(key.m.len(), basis.len(), "multi-index length must match the nu basis");
        let mut p = Self::zero(basis);
        p.add_term(key, c);
        p
    }

    pub fn from_terms(basis: Arc<[T]>, terms: impl IntoIterator<Item = (ExpoKey, Complex<T>)>) -> Self {
        let mut p = Self::zero(basis);
        for (k, c) in terms {
            assert_eq!(k.m.len(), p.basis.len(), "multi-index length must match the nu basis");
            p.add_term(k, c);
        }
        p
    }

    pub fn basis(&self) -> &Arc<[T]> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExpoKey, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn coeff(&self, key: &ExpoKey) -> Complex<T> {
        self.terms.get(key).copied().unwrap_or_else(|| creal(T::zero()))
    }

    /// Adds `c` at `key`, removing the entry if it cancels exactly.
    pub fn add_term(&mut self, key: ExpoKey, c: Complex<T>) {
        if c == creal(T::zero()) {
            return;
        }
        let sum = self.coeff(&key) + c;
        if sum == creal(T::zero()) {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, sum);
        }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_terms(self.basis.clone(), self.terms.iter().map(|(k, &c)| (k.clone(), c * s)))
    }

    /// Evaluates at `x` (complex) and `y > 0`, using `y^{2α} = exp(2α ln y)`.
    pub fn eval(&self, x: Complex<T>, y: T) -> Complex<T> {
        let ln_y = y.ln();
        self.terms.iter().fold(creal(T::zero()), |s, (k, &c)| {
            let a = k.alpha(&self.basis);
            s + c * cpowi(x, k.j) * (T::lit(2.0) * a * ln_y).exp()
        })
    }

    fn same_basis(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.basis, &other.basis) || self.basis[..] == other.basis[..],
            "ExpoPoly operands must share one nu basis"
        );
    }
}

impl<T: Real> Add for &ExpoPoly<T> {
    type Output = ExpoPoly<T>;
    fn add(self, rhs: &ExpoPoly<T>) -> ExpoPoly<T> {
        self.same_basis(rhs);
        let mut out = self.clone();
        for (k, &c) in &rhs.terms {
            out.add_term(k.clone(), c);
        }
        out
    }
}

impl<T: Real> Neg for &ExpoPoly<T> {
    type Output = ExpoPoly<T>;
    fn neg(self) -> ExpoPoly<T> {
        self.scale(creal(-T::one()))
    }
}

impl<T: Real> Sub for &ExpoPoly<T> {
    type Output = ExpoPoly<T>;
    fn sub(self, rhs: &ExpoPoly<T>) -> ExpoPoly<T> {
        self + &(-rhs)
    }
}

impl<T: Real> Mul for &ExpoPoly<T> {
    type Output = ExpoPoly<T>;
    fn mul(self, rhs: &ExpoPoly<T>) -> ExpoPoly<T> {
        self.same_basis(rhs);
        let mut out = ExpoPoly::zero(self.basis.clone());
        for (ka, &ca) in &self.terms {
            for (kb, &cb) in &rhs.terms {
                out.add_term(ExpoKey { j: ka.j + kb.j, m: multi_index_add(&ka.m, &kb.m) }, ca * cb);
            }
        }
        out
    }
}

/// Determinant of a square matrix over the ExpoPoly ring by Laplace expansion
/// with memoization over column subsets. Cost grows like `n 2^n` products, so
/// this is meant for `n ≤ 8` or so.
pub fn poly_det<T: Real>(m: &[Vec<ExpoPoly<T>>]) -> Result<ExpoPoly<T>> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::InvalidInput("poly_det needs a square matrix".into()));
    }
    if n == 0 {
        return Err(Error::InvalidInput("poly_det of an empty matrix".into()));
    }
    if n > 24 {
        return Err(Error::InvalidInput(format!("poly_det size {n} is beyond the cofactor expansion limit")));
    }
    let basis = m[0][0].basis().clone();
    let mut memo: HashMap<u32, ExpoPoly<T>> = HashMap::new();
    memo.insert(0, ExpoPoly::constant(basis.clone(), creal(T::one())));
    Ok(minor_det(m, (1u32 << n) - 1, &mut memo))
}

/// Determinant of rows `n − |cols| .. n` restricted to the column set `cols`.
fn minor_det<T: Real>(m: &[Vec<ExpoPoly<T>>], cols: u32, memo: &mut HashMap<u32, ExpoPoly<T>>) -> ExpoPoly<T> {
    if let Some(d) = memo.get(&cols) {
        return d.clone();
    }
    let n = m.len();
    let row = n - cols.count_ones() as usize;
    let mut acc = ExpoPoly::zero(m[0][0].basis().clone());
    let mut position = 0usize;
    for j in 0..n {
        if cols & (1 << j) == 0 {
            continue;
        }
        let entry = &m[row][j];
        if !entry.is_zero() {
            let sub = minor_det(m, cols & !(1 << j), memo);
            let prod = entry * &sub;
            acc = if position % 2 == 0 { &acc + &prod } else { &acc - &prod };
        }
        position += 1;
    }
    memo.insert(cols, acc.clone());
    acc
}

fn nu_basis<T: Real>(s: &BaseSpectrum<T>) -> Arc<[T]> {
    Arc::from(s.nus().to_vec())
}

/// Diagonal entry k of the lower-left block: x for k < q0, τ y^{2ν} otherwise.
fn lower_left_entry<T: Real>(s: &BaseSpectrum<T>, basis: &Arc<[T]>, k: usize) -> ExpoPoly<T> {
    let q0 = s.q0();
    if k < q0 {
        ExpoPoly::monomial(basis.clone(), ExpoKey::new(1, vec![0; s.q1()]), creal(T::one()))
    } else {
        let mut m = vec![0; s.q1()];
        m[k - q0] = 1;
        ExpoPoly::monomial(basis.clone(), ExpoKey::new(0, m), creal(s.taus()[k - q0]))
    }
}

/// `p(x, y)` via `det[[𝒜, ℬ], [D, Id]] = det(𝒜 − ℬ D)`.
pub fn build_p<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<ExpoPoly<T>> {
    l.check_spectrum(s)?;
    let q = l.q();
    let basis = nu_basis(s);
    let diag: Vec<_> = (0..q).map(|k| lower_left_entry(s, &basis, k)).collect();
    let m: Vec<Vec<ExpoPoly<T>>> = (0..q)
        .map(|i| {
            (0..q)
                .map(|k| {
                    let a = ExpoPoly::constant(basis.clone(), l.a()[(i, k)]);
                    &a - &diag[k].scale(l.b()[(i, k)])
                })
                .collect()
        })
        .collect();
    poly_det(&m)
}

/// `p(x, y)` from the full 2q × 2q block determinant (reference path).
pub fn build_p_full<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<ExpoPoly<T>> {
    l.check_spectrum(s)?;
    let q = l.q();
    let basis = nu_basis(s);
    let konst = |c: Complex<T>| ExpoPoly::constant(basis.clone(), c);
    let zero = ExpoPoly::zero(basis.clone());
    let m: Vec<Vec<ExpoPoly<T>>> = (0..2 * q)
        .map(|i| {
            (0..2 * q)
                .map(|j| match (i < q, j < q) {
                    (true, true) => konst(l.a()[(i, j)]),
                    (true, false) => konst(l.b()[(i, j - q)]),
                    (false, true) if i - q == j => lower_left_entry(s, &basis, j),
                    (false, false) if i == j => konst(creal(T::one())),
                    _ => zero.clone(),
                })
                .collect()
        })
        .collect();
    poly_det(&m)
}

/// The numeric 2q × 2q matrix of `p` at (x, y), for evaluation cross-checks.
pub fn p_matrix_at<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>, x: Complex<T>, y: T) -> CMatrix<T> {
    let q = l.q();
    let q0 = s.q0();
    let lower: Vec<Complex<T>> = (0..q)
        .map(|k| if k < q0 { x } else { creal(s.taus()[k - q0] * y.powf(T::lit(2.0) * s.nus()[k - q0])) })
        .collect();
    CMatrix::block2(l.a(), l.b(), &CMatrix::from_diag(&lower), &CMatrix::identity(q))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RemainderTerm<T> {
    /// Power of x relative to j0.
    pub k: i64,
    /// Multi-index of β = α − α0 (may have negative components).
    pub beta_key: Vec<i32>,
    pub beta_value: T,
    pub coeff: Complex<T>,
}

/// `p = a x^{j0} y^{2α0} (1 + Σ b_{kβ} x^k y^{2β})`.
#[derive(Debug, Clone, PartialEq)]
pub struct LeadingData<T> {
    pub q0: usize,
    pub j0: i64,
    pub alpha0_key: Vec<i32>,
    pub alpha0_value: T,
    pub a_j0alpha0: Complex<T>,
    pub remainder: Vec<RemainderTerm<T>>,
    /// Keys whose coefficients are tiny relative to the largest one.
    pub flagged_small: Vec<ExpoKey>,
    pub basis: Arc<[T]>,
}

/// Extracts α0 (smallest numeric α), j0 (smallest j at α0), the leading
/// coefficient and the normalized remainder.
pub fn leading_data<T: Real>(p: &ExpoPoly<T>, q0: usize) -> Result<LeadingData<T>> {
    let basis = p.basis().clone();
    let mut terms: Vec<(ExpoKey, T, Complex<T>)> =
        p.terms().map(|(k, &c)| (k.clone(), k.alpha(&basis), c)).collect();
    let scale = terms.iter().fold(T::zero(), |m, t| m.max(t.2.norm()));
    let flagged_small: Vec<ExpoKey> = terms
        .iter()
        .filter(|t| t.2.norm() < T::lit(SMALL_COEFF_FLAG) * scale)
        .map(|t| t.0.clone())
        .collect();

    loop {
        let Some(alpha_min) = terms.iter().map(|t| t.1).reduce(T::min) else {
            return Err(Error::DegenerateDeterminant);
        };
        let at_alpha0: Vec<usize> = (0..terms.len()).filter(|&i| coincide(terms[i].1, alpha_min)).collect();
        let j0 = at_alpha0.iter().map(|&i| terms[i].0.j).min().expect("nonempty");
        let group: Vec<usize> = at_alpha0.into_iter().filter(|&i| terms[i].0.j == j0).collect();
        let a = group.iter().fold(creal(T::zero()), |s, &i| s + terms[i].2);
        if a == creal(T::zero()) {
            // Numerically coincident keys cancelled exactly; the next term leads.
            let drop: Vec<usize> = group;
            terms = terms.into_iter().enumerate().filter(|(i, _)| !drop.contains(i)).map(|(_, t)| t).collect();
            continue;
        }
        let lead_idx = *group.iter().min_by(|&&x, &&y| terms[x].0.cmp(&terms[y].0)).expect("nonempty");
        let alpha0_key = terms[lead_idx].0.m.clone();
        let alpha0_value = terms[lead_idx].1;
        let remainder = terms
            .iter()
            .enumerate()
            .filter(|(i, _)| !group.contains(i))
            .map(|(_, (key, alpha, c))| RemainderTerm {
                k: key.j - j0,
                beta_key: key.m.iter().zip(&alpha0_key).map(|(x, y)| x - y).collect(),
                beta_value: *alpha - alpha0_value,
                coeff: *c / a,
            })
            .collect();
        return Ok(LeadingData {
            q0,
            j0,
            alpha0_key,
            alpha0_value,
            a_j0alpha0: a,
            remainder,
            flagged_small,
            basis,
        });
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extension::{make_friedrichs, make_neumann, random_lagrangian};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex<f64> {
        Complex::new(re, im)
    }

    fn basis(nus: &[f64]) -> Arc<[f64]> {
        Arc::from(nus.to_vec())
    }

    #[test]
    fn neumann_polynomial() {
        for (q0, q1) in [(1, 0), (0, 1), (2, 1), (1, 3)] {
            let nus: Vec<f64> = (0..q1).map(|i| 0.2 + 0.15 * i as f64).collect();
            let s = BaseSpectrum::new(1.3, q0, nus).unwrap();
            let p = build_p(&make_neumann(q0, q1).unwrap(), &s).unwrap();
            let sign = if q0 % 2 == 0 { 1.0 } else { -1.0 };
            let expect = ExpoPoly::monomial(p.basis().clone(), ExpoKey::new(q0 as i64, vec![0; q1]), c(sign, 0.0));
            assert_eq!(p, expect, "q0={q0} q1={q1}");
        }
    }

    #[test]
    fn friedrichs_single_nu() {
        let s = BaseSpectrum::new(1.0, 0, vec![0.3]).unwrap();
        let p = build_p(&make_friedrichs(0, 1).unwrap(), &s).unwrap();
        let tau = s.taus()[0];
        assert_eq!(p.len(), 1);
        let coeff = p.coeff(&ExpoKey::new(0, vec![1]));
        assert!((coeff - c(-tau, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn one_dimensional_q0() {
        let s = BaseSpectrum::new(1.0, 1, vec![]).unwrap();
        let l = Lagrangian::new(CMatrix::from_real_diag(&[0.7]), CMatrix::from_real_diag(&[0.4]), 1).unwrap();
        let p = build_p(&l, &s).unwrap();
        assert_eq!(p.coeff(&ExpoKey::new(0, vec![])), c(0.7, 0.0));
        assert_eq!(p.coeff(&ExpoKey::new(1, vec![])), c(-0.4, 0.0));
        assert_eq!(p.len(), 2);
    }

    #[test]
    fn poly_det_small_cases() {
        let b = basis(&[0.3, 0.6]);
        let mono = |j: i64, m: Vec<i32>, v: f64| ExpoPoly::monomial(b.clone(), ExpoKey::new(j, m), c(v, 0.0));
        let p1 = mono(1, vec![0, 1], 2.0);
        assert_eq!(poly_det(&[vec![p1.clone()]]).unwrap(), p1);
        let p2 = mono(-1, vec![2, 0], -3.0);
        let z = ExpoPoly::zero(b.clone());
        let d = poly_det(&[vec![p1.clone(), z.clone()], vec![z, p2.clone()]]).unwrap();
        assert_eq!(d, &p1 * &p2);
        assert!(poly_det(&[vec![p1.clone(), p2.clone()]]).is_err());
    }

    #[test]
    fn poly_det_matches_leibniz_on_random_monomials() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let b = basis(&[0.25, 0.4]);
        for _ in 0..20 {
            let mut rand_entry = || {
                let terms: Vec<_> = (0..rng.gen_range(1..3))
                    .map(|_| {
                        (
                            ExpoKey::new(rng.gen_range(-1..2), vec![rng.gen_range(0..2), rng.gen_range(0..2)]),
                            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                        )
                    })
                    .collect();
                ExpoPoly::from_terms(b.clone(), terms)
            };
            let (a, bb, cc, d) = (rand_entry(), rand_entry(), rand_entry(), rand_entry());
            let det = poly_det(&[vec![a.clone(), bb.clone()], vec![cc.clone(), d.clone()]]).unwrap();
            let leibniz = &(&a * &d) - &(&bb * &cc);
            assert_same(&det, &leibniz, 1e-14);
        }
    }

    fn assert_same(p: &ExpoPoly<f64>, r: &ExpoPoly<f64>, rel: f64) {
        let scale = p.terms().chain(r.terms()).fold(0.0f64, |m, (_, c)| m.max(c.norm()));
        let keys: std::collections::BTreeSet<_> = p.terms().chain(r.terms()).map(|(k, _)| k.clone()).collect();
        for k in keys {
            let d = (p.coeff(&k) - r.coeff(&k)).norm();
            assert!(d <= rel * scale.max(1e-300), "key {k:?}: {} vs {}", p.coeff(&k), r.coeff(&k));
        }
    }

    #[test]
    fn leading_data_examples() {
        let s = BaseSpectrum::new(1.0, 2, vec![0.4]).unwrap();
        let p = build_p(&make_neumann(2, 1).unwrap(), &s).unwrap();
        let lead = leading_data(&p, 2).unwrap();
        assert_eq!((lead.j0, lead.alpha0_value, lead.a_j0alpha0), (2, 0.0, c(1.0, 0.0)));
        assert!(lead.remainder.is_empty());

        let b = basis(&[]);
        let p = ExpoPoly::from_terms(b, [(ExpoKey::new(0, vec![]), c(2.0, 0.0)), (ExpoKey::new(1, vec![]), c(-3.0, 0.0))]);
        let lead = leading_data(&p, 1).unwrap();
        assert_eq!((lead.j0, lead.a_j0alpha0), (0, c(2.0, 0.0)));
        assert_eq!(lead.remainder.len(), 1);
        assert_eq!((lead.remainder[0].k, lead.remainder[0].coeff), (1, c(-1.5, 0.0)));

        let b = basis(&[0.3]);
        let p = ExpoPoly::monomial(b, ExpoKey::new(0, vec![1]), c(-1.7, 0.0));
        let lead = leading_data(&p, 0).unwrap();
        assert_eq!((lead.j0, lead.alpha0_key.clone(), lead.a_j0alpha0), (0, vec![1], c(-1.7, 0.0)));
        assert!((lead.alpha0_value - 0.3).abs() < 1e-16);
        assert!(lead.remainder.is_empty());
    }

    #[test]
    fn leading_data_rejects_zero() {
        let p = ExpoPoly::<f64>::zero(basis(&[0.5]));
        assert_eq!(leading_data(&p, 0), Err(Error::DegenerateDeterminant));
    }

    #[test]
    fn coincident_alphas_merge_into_leading_term() {
        // ν1 = ν2: keys (1,0) and (0,1) have the same numeric α.
        let b = basis(&[0.4, 0.4]);
        let p = ExpoPoly::from_terms(
            b,
            [
                (ExpoKey::new(0, vec![1, 0]), c(1.0, 0.0)),
                (ExpoKey::new(0, vec![0, 1]), c(2.0, 0.0)),
                (ExpoKey::new(0, vec![1, 1]), c(3.0, 0.0)),
            ],
        );
        let lead = leading_data(&p, 0).unwrap();
        assert_eq!(lead.a_j0alpha0, c(3.0, 0.0));
        assert_eq!(lead.remainder.len(), 1);
        assert!((lead.remainder[0].beta_value - 0.4).abs() < 1e-15);
    }

    #[test]
    fn schur_matches_full_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for (q0, q1) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (0, 3), (2, 2), (1, 3)] {
            for real in [true, false] {
                let nus: Vec<f64> = (0..q1).map(|_| rng.gen_range(0.05..0.95)).collect();
                let s = BaseSpectrum::new(rng.gen_range(0.5..2.0), q0, nus).unwrap();
                let l = random_lagrangian(&mut rng, q0, q1, real).unwrap();
                let fast = build_p(&l, &s).unwrap();
                let full = build_p_full(&l, &s).unwrap();
                let fk: Vec<_> = fast.terms().map(|(k, _)| k.clone()).collect();
                let gk: Vec<_> = full.terms().map(|(k, _)| k.clone()).collect();
                assert_eq!(fk, gk);
                assert_same(&fast, &full, 1e-12);
            }
        }
    }

    #[test]
    fn numeric_evaluation_matches_matrix_determinant() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for (q0, q1) in [(1, 1), (0, 2), (2, 1), (1, 2)] {
            let nus: Vec<f64> = (0..q1).map(|_| rng.gen_range(0.05..0.95)).collect();
            let s = BaseSpectrum::new(1.0, q0, nus).unwrap();
            let l = random_lagrangian(&mut rng, q0, q1, false).unwrap();
            let p = build_p(&l, &s).unwrap();
            for _ in 0..5 {
                let x = c(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
                let y = rng.gen_range(0.1..3.0);
                let direct = p_matrix_at(&l, &s, x, y).det();
                let viap = p.eval(x, y);
                assert!((direct - viap).norm() <= 1e-10 * direct.norm().max(1e-12), "{direct} vs {viap}");
            }
        }
    }

    fn arb_poly(b: Arc<[f64]>) -> impl Strategy<Value = ExpoPoly<f64>> {
        prop::collection::vec(((-2i64..3), (0i32..3), (0i32..3), (-5i32..6), (-5i32..6)), 0..5).prop_map(move |v| {
            ExpoPoly::from_terms(
                b.clone(),
                v.into_iter().map(|(j, m1, m2, re, im)| (ExpoKey::new(j, vec![m1, m2]), c(re as f64, im as f64))),
            )
        })
    }

    proptest! {
        #[test]
        fn distributive_law(p in arb_poly(basis(&[0.3, 0.7])), r in arb_poly(basis(&[0.3, 0.7])), s in arb_poly(basis(&[0.3, 0.7]))) {
            // Integer coefficients keep the arithmetic exact.
            let lhs = &(&p + &r) * &s;
            let rhs = &(&p * &s) + &(&r * &s);
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn product_commutes(p in arb_poly(basis(&[0.3, 0.7])), r in arb_poly(basis(&[0.3, 0.7]))) {
            prop_assert_eq!(&p * &r, &r * &p);
        }
    }
}
