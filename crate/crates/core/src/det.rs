//! Closed-form zeta-regularized determinants of the cone operator.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::expo_poly::{build_p, leading_data, LeadingData};
use crate::extension::{make_neumann, nu_tau_from_lambda, BaseSpectrum, Lagrangian, RANK_REL_TOL};
use crate::linalg::CMatrix;
use crate::scalar::{cpowi, creal, rel_diff, Real};
use crate::secular::{contour_det_oracle, f0_matrix, SecularContext, KERNEL_TOL};
use crate::special::{gamma, SeriesConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Method {
    General,
    Ratio,
    Neumann,
    Rowcol,
    Decomposable,
    Oned,
    ContourOracle,
}

impl Method {
    pub const ALL: [Method; 7] = [
        Method::General,
        Method::Ratio,
        Method::Neumann,
        Method::Rowcol,
        Method::Decomposable,
        Method::Oned,
        Method::ContourOracle,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Method::General => "general",
            Method::Ratio => "ratio",
            Method::Neumann => "neumann",
            Method::Rowcol => "rowcol",
            Method::Decomposable => "decomposable",
            Method::Oned => "oned",
            Method::ContourOracle => "contour_oracle",
        }
    }

    /// Methods whose native output is `det_ζ(Δ_L) / det_ζ(Δ_𝒩)`.
    pub fn yields_ratio(self) -> bool {
        matches!(self, Method::Ratio | Method::Rowcol)
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// User-supplied data for the essentially self-adjoint complement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularPart<T> {
    pub det_tilde: Complex<T>,
    pub c_residue: T,
}

impl<T: Real> Default for RegularPart<T> {
    fn default() -> Self {
        Self { det_tilde: creal(T::one()), c_residue: T::zero() }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetResult<T> {
    /// The method's own output (a ratio for `ratio` and `rowcol`).
    pub value: Complex<T>,
    /// The implied `det_ζ(𝓛_L)`.
    pub cone_det: Complex<T>,
    pub method: Method,
    pub f0: Complex<T>,
    pub inputs_digest: String,
    /// Relative differences against other routes to the same number.
    pub cross_check_residuals: BTreeMap<String, T>,
    pub notes: Vec<String>,
}

/// Kernel gate: `|F(0)|` against `KERNEL_TOL · (1 + Hadamard bound)`.
pub fn invertibility_witness<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<Complex<T>> {
    l.check_spectrum(s)?;
    let m = f0_matrix(l, s);
    let f0 = m.det();
    if f0.norm() <= T::tol(KERNEL_TOL) * (T::one() + m.hadamard_bound()) {
        return Err(Error::NontrivialKernel { f0_abs: f0.norm().to_f64().unwrap_or(f64::NAN) });
    }
    Ok(f0)
}

fn log_factor<T: Real>(power: i64) -> Complex<T> {
    cpowi(creal(-T::lit(2.0) * T::EULER_GAMMA.exp()), power)
}

/// `(2πR)^{q/2} Π 2^{ν_j} / Γ(1 − ν_j)`.
fn cone_prefactor<T: Real>(s: &BaseSpectrum<T>) -> Result<T> {
    let two = T::lit(2.0);
    let mut prod = (two * T::PI() * s.radius()).powf(T::from_usize_lossy(s.q()) / two);
    for &nu in s.nus() {
        prod = prod * two.powf(nu) / gamma(T::one() - nu)?;
    }
    Ok(prod)
}

/// `(2πR)^{q/2} Π 2^{ν_j} R^{−ν_j} / Γ(1 − ν_j)`.
pub fn det_neumann<T: Real>(s: &BaseSpectrum<T>) -> Result<Complex<T>> {
    let r = s.radius();
    let prod = s.nus().iter().fold(T::one(), |p, &nu| p * r.powf(-nu));
    Ok(creal(cone_prefactor(s)? * prod))
}

fn lead_of<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<LeadingData<T>> {
    leading_data(&build_p(l, s)?, s.q0())
}

/// `(2πR)^{q/2}/a · Π 2^ν/Γ(1−ν) · (−2e^γ)^{q0−j0} · F(0)`.
pub fn det_general_value<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<Complex<T>> {
    let f0 = invertibility_witness(l, s)?;
    let lead = lead_of(l, s)?;
    let power = s.q0() as i64 - lead.j0;
    Ok(f0 * cone_prefactor(s)? / lead.a_j0alpha0 * log_factor::<T>(power))
}

/// `[[𝒜, ℬ], [diag(Id, 𝐑^{2ν}), diag(log R · Id, Id)]]`.
fn ratio_matrix<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> CMatrix<T> {
    let r = s.radius();
    let q0 = s.q0();
    let two = T::lit(2.0);
    let plus: Vec<T> = (0..s.q()).map(|k| if k < q0 { T::one() } else { r.powf(two * s.nus()[k - q0]) }).collect();
    let minus: Vec<T> = (0..s.q()).map(|k| if k < q0 { r.ln() } else { T::one() }).collect();
    CMatrix::block2(l.a(), l.b(), &CMatrix::from_real_diag(&plus), &CMatrix::from_real_diag(&minus))
}

/// `det_ζ(Δ_L) / det_ζ(Δ_𝒩) = (−2e^γ)^{q0−j0}/a · det[[𝒜, ℬ], [diag(Id, 𝐑^{2ν}), diag(log R Id, Id)]]`.
pub fn det_ratio<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<Complex<T>> {
    invertibility_witness(l, s)?;
    let lead = lead_of(l, s)?;
    let power = s.q0() as i64 - lead.j0;
    Ok(ratio_matrix(l, s).det() / lead.a_j0alpha0 * log_factor::<T>(power))
}

/// Zero rows/columns of 𝒜 for the row/column theorem: the permutation
/// `i_1 < … < i_r` (zero indices) followed by the rest in increasing order.
pub fn detect_rowcol<T: Real>(l: &Lagrangian<T>) -> Result<(Vec<usize>, usize)> {
    let a = l.a();
    let q = l.q();
    let zero_tol = T::tol(1e-13) * (T::one() + a.max_abs());
    let zero_line = |i: usize| (0..q).all(|j| a[(i, j)].norm() <= zero_tol && a[(j, i)].norm() <= zero_tol);
    let zeros: Vec<usize> = (0..q).filter(|&i| zero_line(i)).collect();
    let r = zeros.len();
    let mut perm = zeros.clone();
    perm.extend((0..q).filter(|i| !zeros.contains(i)));
    Ok((perm, r))
}

fn check_rowcol<T: Real>(l: &Lagrangian<T>, perm: &[usize], r: usize) -> Result<usize> {
    let q = l.q();
    let mut seen = vec![false; q];
    if perm.len() != q || perm.iter().any(|&i| i >= q || std::mem::replace(&mut seen[i], true)) {
        return Err(Error::InvalidInput(format!("{perm:?} is not a permutation of 0..{q}")));
    }
    if r > q {
        return Err(Error::InvalidInput(format!("r = {r} exceeds q = {q}")));
    }
    if perm[..r].windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::RowColumnCondition("the zero indices i_1 < … < i_r must increase".into()));
    }
    let a = l.a();
    let zero_tol = T::tol(1e-13) * (T::one() + a.max_abs());
    for &i in &perm[..r] {
        if (0..q).any(|j| a[(i, j)].norm() > zero_tol || a[(j, i)].norm() > zero_tol) {
            return Err(Error::RowColumnCondition(format!(
                "row/column {i} of A is not zero; use the ratio method instead"
            )));
        }
    }
    let rank = a.numerical_rank(T::lit(RANK_REL_TOL));
    if rank != q - r {
        return Err(Error::RowColumnCondition(format!(
            "rank(A) = {rank} but q − r = {}; use the ratio method instead",
            q - r
        )));
    }
    Ok(perm[..r].iter().filter(|&&i| i < l.q0()).count())
}

/// The row/column formula: the ratio `det_ζ(Δ_L)/det_ζ(Δ_𝒩)` with `a_{j0α0}`
/// replaced by `Π_{j > j0} τ_{i_j} · det[[𝒜, ℬ], [I_r, I_{q−r}]]`.
pub fn det_rowcol<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>, perm: &[usize], r: usize) -> Result<Complex<T>> {
    l.check_spectrum(s)?;
    let j0 = check_rowcol(l, perm, r)?;
    invertibility_witness(l, s)?;
    let q = l.q();
    let mut ir = vec![T::zero(); q];
    let mut iq = vec![T::zero(); q];
    for (pos, &i) in perm.iter().enumerate() {
        if pos < r {
            ir[i] = T::one();
        } else {
            iq[i] = T::one();
        }
    }
    let m = CMatrix::block2(l.a(), l.b(), &CMatrix::from_real_diag(&ir), &CMatrix::from_real_diag(&iq));
    let d = m.det();
    if d.norm() <= T::tol(1e-12) * (T::one() + m.hadamard_bound()) {
        return Err(Error::RowColumnCondition("det[[A, B], [I_r, I_{q-r}]] vanishes".into()));
    }
    let q0 = s.q0();
    let tau_prod = perm[j0..r].iter().fold(T::one(), |p, &i| p * s.taus()[i - q0]);
    let a = d * tau_prod;
    let power = q0 as i64 - j0 as i64;
    Ok(ratio_matrix(l, s).det() / a * log_factor::<T>(power))
}

/// Lowest-order coefficient and index of a block polynomial; empty blocks give (1, 0).
fn block_lead<T: Real>(l: &Lagrangian<T>, s: Option<BaseSpectrum<T>>) -> Result<(Complex<T>, i64)> {
    match s {
        None => Ok((creal(T::one()), 0)),
        Some(s) => {
            let lead = lead_of(l, &s)?;
            Ok((lead.a_j0alpha0, lead.j0))
        }
    }
}

/// Product formula for `L = L0 ⊕ L1` with `L0` on the q0 block and `L1` on the q1 block.
pub fn det_decomposable<T: Real>(l0: &Lagrangian<T>, l1: &Lagrangian<T>, s: &BaseSpectrum<T>) -> Result<Complex<T>> {
    let (q0, q1) = (s.q0(), s.q1());
    if l0.q() != q0 || l1.q() != q1 || l0.q0() != q0 || l1.q0() != 0 {
        return Err(Error::InvalidInput(format!(
            "blocks of size ({}, {}) do not match q0 = {q0}, q1 = {q1}",
            l0.q(),
            l1.q()
        )));
    }
    let full = Lagrangian::block_diagonal(l0, l1)?;
    invertibility_witness(&full, s)?;
    let r = s.radius();
    let s0 = (q0 > 0).then(|| BaseSpectrum::new(r, q0, Vec::new())).transpose()?;
    let s1 = (q1 > 0).then(|| BaseSpectrum::new(r, 0, s.nus().to_vec())).transpose()?;
    let (a_j0, j0) = block_lead(l0, s0)?;
    let (b_alpha0, _) = block_lead(l1, s1)?;
    let id0 = CMatrix::identity(q0);
    let d0 = CMatrix::block2(l0.a(), l0.b(), &id0, &id0.scale(creal(r.ln()))).det();
    let rp: Vec<T> = s.nus().iter().map(|&nu| r.powf(nu)).collect();
    let rm: Vec<T> = s.nus().iter().map(|&nu| r.powf(-nu)).collect();
    let d1 = CMatrix::block2(l1.a(), l1.b(), &CMatrix::from_real_diag(&rp), &CMatrix::from_real_diag(&rm)).det();
    let power = q0 as i64 - j0;
    Ok(d0 * d1 * cone_prefactor(s)? / (a_j0 * b_alpha0) * log_factor::<T>(power))
}

/// The one-dimensional closed forms, without the kernel gate. `(α, β)` are
/// normalized to unit length first.
pub fn oned_closed_form<T: Real>(lambda: T, alpha: T, beta: T, r: T) -> Result<T> {
    let norm = alpha.hypot(beta);
    if !(norm > T::zero()) || !norm.is_finite() {
        return Err(Error::InvalidInput("alpha and beta must not both vanish".into()));
    }
    if !(r > T::zero()) || !r.is_finite() {
        return Err(Error::InvalidInput(format!("R must be positive, got {r}")));
    }
    let (alpha, beta) = (alpha / norm, beta / norm);
    let quarter = T::lit(0.25);
    let pi_r = T::PI() * r;
    let two = T::lit(2.0);
    if lambda == -quarter {
        return Ok(if alpha != T::zero() {
            two * (two * pi_r).sqrt() * T::EULER_GAMMA.exp() * (beta / alpha - r.ln())
        } else {
            (two * pi_r).sqrt()
        });
    }
    let (nu, _) = nu_tau_from_lambda(lambda)?;
    let half = T::lit(0.5);
    Ok(if alpha != T::zero() {
        two.powf(nu + half) * pi_r.sqrt() / gamma(T::one() - nu)? * (r.powf(-nu) - beta / alpha * r.powf(nu))
    } else {
        two.powf(half - nu) * pi_r.sqrt() / gamma(T::one() + nu)? * r.powf(nu)
    })
}

/// The 1×1 Lagrangian `(α, β)` on the base spectrum of `λ`.
pub fn oned_problem<T: Real>(lambda: T, alpha: T, beta: T, r: T) -> Result<(Lagrangian<T>, BaseSpectrum<T>)> {
    let s = if lambda == -T::lit(0.25) {
        BaseSpectrum::new(r, 1, Vec::new())?
    } else {
        BaseSpectrum::from_lambdas(r, 0, &[lambda])?
    };
    let l = Lagrangian::new(CMatrix::from_real_diag(&[alpha]), CMatrix::from_real_diag(&[beta]), s.q0())?;
    Ok((l, s))
}

/// The one-dimensional determinant, refusing extensions with a kernel.
pub fn det_oned<T: Real>(lambda: T, alpha: T, beta: T, r: T) -> Result<T> {
    let value = oned_closed_form(lambda, alpha, beta, r)?;
    let (l, s) = oned_problem(lambda, alpha, beta, r)?;
    invertibility_witness(&l, &s)?;
    Ok(value)
}

/// `det_ζ(Δ_L) = det_ζ(𝓛_L) · det_ζ(Δ̃)`.
pub fn det_full<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>, reg: &RegularPart<T>) -> Result<Complex<T>> {
    Ok(det_general_value(l, s)? * reg.det_tilde)
}

/// Deterministic SHA-256 of the numeric inputs (bit patterns, not decimal text).
pub fn inputs_digest<T: Real>(l: &Lagrangian<T>, s: &BaseSpectrum<T>, tag: &str) -> String {
    let mut h = Sha256::new();
    let mut put = |x: T| h.update(x.to_f64().unwrap_or(f64::NAN).to_bits().to_le_bytes());
    put(s.radius());
    put(T::from_usize_lossy(s.q0()));
    for &nu in s.nus() {
        put(nu);
    }
    for m in [l.a(), l.b()] {
        for i in 0..m.rows() {
            for j in 0..m.cols() {
                put(m[(i, j)].re);
                put(m[(i, j)].im);
            }
        }
    }
    h.update(tag.as_bytes());
    hex::encode(h.finalize())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetOptions<T> {
    pub oracle_t: Complex<T>,
    pub n_quad: usize,
    pub cfg: SeriesConfig<T>,
}

impl<T: Real> Default for DetOptions<T> {
    fn default() -> Self {
        Self { oracle_t: Complex::new(T::zero(), T::lit(0.1)), n_quad: 8, cfg: SeriesConfig::default() }
    }
}

fn is_neumann<T: Real>(l: &Lagrangian<T>) -> Result<bool> {
    let n = make_neumann::<T>(l.q0(), l.q() - l.q0())?;
    let stacked_rows: Vec<Vec<Complex<T>>> = l
        .a()
        .hstack(l.b())
        .to_rows()
        .into_iter()
        .chain(n.a().hstack(n.b()).to_rows())
        .collect();
    let m = CMatrix::from_rows(&stacked_rows).expect("rectangular");
    Ok(m.numerical_rank(T::lit(RANK_REL_TOL)) == l.q())
}

/// Runs one method and cross-checks it against `det_ratio · det_neumann`.
pub fn compute_det<T: Real>(
    l: &Lagrangian<T>,
    s: &BaseSpectrum<T>,
    method: Method,
    opts: &DetOptions<T>,
) -> Result<DetResult<T>> {
    l.check_spectrum(s)?;
    let f0 = invertibility_witness(l, s)?;
    let neumann = det_neumann(s)?;
    let mut notes = Vec::new();
    let mut tag = method.as_str().to_string();
    let value = match method {
        Method::General => det_general_value(l, s)?,
        Method::Ratio => det_ratio(l, s)?,
        Method::Neumann => {
            if !is_neumann(l)? {
                return Err(Error::StructureMismatch("the pair (A, B) is not the Neumann extension".into()));
            }
            neumann
        }
        Method::Rowcol => {
            let (perm, r) = detect_rowcol(l)?;
            notes.push(format!("zero rows/columns of A: {:?}", &perm[..r]));
            det_rowcol(l, s, &perm, r)?
        }
        Method::Decomposable => {
            let (l0, l1) = l.split_decomposable().ok_or_else(|| {
                Error::StructureMismatch("A and B are not block diagonal over the q0/q1 split".into())
            })?;
            det_decomposable(&l0, &l1, s)?
        }
        Method::Oned => {
            if l.q() != 1 {
                return Err(Error::StructureMismatch(format!("the oned method needs q = 1, got q = {}", l.q())));
            }
            let (a, b) = (l.a()[(0, 0)], l.b()[(0, 0)]);
            // α β̄ is real for a Lagrangian pair: rotate the common phase away.
            let pivot = if a.norm() >= b.norm() { a } else { b };
            let phase = pivot.conj() / pivot.norm();
            let (ar, br) = ((a * phase).re, (b * phase).re);
            let norm = ar.hypot(br);
            notes.push(format!("(alpha, beta) normalized to ({}, {})", ar / norm, br / norm));
            tag = format!("{tag}:{}:{}", ar / norm, br / norm);
            let lambda = if s.q0() == 1 { -T::lit(0.25) } else { s.nus()[0] * s.nus()[0] - T::lit(0.25) };
            creal(oned_closed_form(lambda, ar, br, s.radius())?)
        }
        Method::ContourOracle => {
            let ctx = SecularContext::new(l, s, opts.cfg)?;
            let o = contour_det_oracle(&ctx, opts.oracle_t, opts.n_quad)?;
            notes.push(format!("t = {}, n_quad = {}", opts.oracle_t, opts.n_quad));
            o.value
        }
    };
    let cone_det = if method.yields_ratio() { value * neumann } else { value };
    let mut cross_check_residuals = BTreeMap::new();
    if method != Method::ContourOracle {
        let reference = det_ratio(l, s)? * neumann;
        cross_check_residuals.insert("ratio_times_neumann".to_string(), rel_diff(cone_det, reference));
    }
    Ok(DetResult {
        value,
        cone_det,
        method,
        f0,
        inputs_digest: inputs_digest(l, s, &tag),
        cross_check_residuals,
        notes,
    })
}
