//! Base spectrum data and Lagrangian boundary pairs (𝒜, ℬ).
//!
//! A pair defines a self-adjoint extension when `[𝒜 ℬ]` has rank `q` and
//! `𝒜′ℬ*` is Hermitian, `𝒜′` being `𝒜` with its first `q0` columns negated.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::scalar::{creal, Real};
use crate::special::tau_of_nu;

/// Relative singular-value threshold for the rank of `[𝒜 ℬ]`.
pub const RANK_REL_TOL: f64 = 1e-10;
/// Hermiticity tolerance factor, applied as `tol · (1 + max|𝒜| max|ℬ|)`.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Agreement required when a problem supplies both λ and ν.
pub const LAMBDA_NU_AGREEMENT: f64 = 1e-12;

/// What the cone contributes: radius, the multiplicity of λ = −1/4 and the
/// orders ν_j ∈ (0, 1) of the remaining small base eigenvalues.
#[derive(Debug, Clone, PartialEq)]
pub struct BaseSpectrum<T> {
    radius: T,
    q0: usize,
    nus: Vec<T>,
    taus: Vec<T>,
}

impl<T: Real> BaseSpectrum<T> {
    pub fn new(radius: T, q0: usize, nus: Vec<T>) -> Result<Self> {
        if !(radius > T::zero()) || !radius.is_finite() {
            return Err(Error::InvalidInput(format!("cone radius must be positive, got {radius}")));
        }
        if q0 + nus.len() == 0 {
            return Err(Error::InvalidInput("q = q0 + q1 must be at least 1".into()));
        }
        if let Some(bad) = nus.iter().find(|&&nu| !(nu > T::zero() && nu < T::one())) {
            return Err(Error::InvalidInput(format!("every nu must lie in (0, 1), got {bad}")));
        }
        let taus = nus.iter().map(|&nu| tau_of_nu(nu)).collect::<Result<Vec<_>>>()?;
        Ok(Self { radius, q0, nus, taus })
    }

    /// Builds from base eigenvalues in (−1/4, 3/4) via ν = √(λ + 1/4).
    pub fn from_lambdas(radius: T, q0: usize, lambdas: &[T]) -> Result<Self> {
        let nus = lambdas.iter().map(|&l| nu_tau_from_lambda(l).map(|(nu, _)| nu)).collect::<Result<Vec<_>>>()?;
        Self::new(radius, q0, nus)
    }

    pub fn radius(&self) -> T {
        self.radius
    }

    pub fn q0(&self) -> usize {
        self.q0
    }

    pub fn q1(&self) -> usize {
        self.nus.len()
    }

    pub fn q(&self) -> usize {
        self.q0 + self.nus.len()
    }

    pub fn nus(&self) -> &[T] {
        &self.nus
    }

    pub fn taus(&self) -> &[T] {
        &self.taus
    }

    /// |ν| = Σ ν_j.
    pub fn nu_sum(&self) -> T {
        self.nus.iter().fold(T::zero(), |s, &v| s + v)
    }

    /// The same spectrum with its ν list reordered by `perm` (new j ← old perm[j]).
    pub fn permuted(&self, perm: &[usize]) -> Result<Self> {
        if !is_permutation(perm, self.q1()) {
            return Err(Error::InvalidInput("not a permutation of the nu indices".into()));
        }
        Self::new(self.radius, self.q0, perm.iter().map(|&i| self.nus[i]).collect())
    }
}

pub(crate) fn is_permutation(perm: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    perm.len() == n && perm.iter().all(|&i| i < n && !std::mem::replace(&mut seen[i], true))
}

/// The Lagrangian pair (𝒜, ℬ) together with the q0 block split.
#[derive(Debug, Clone, PartialEq)]
pub struct Lagrangian<T> {
    a: CMatrix<T>,
    b: CMatrix<T>,
    q0: usize,
}

impl<T: Real> Lagrangian<T> {
    /// Checks shapes only; see [`Lagrangian::validate`] for the Lagrangian test.
    pub fn new(a: CMatrix<T>, b: CMatrix<T>, q0: usize) -> Result<Self> {
        check_shapes(&a, &b, q0)?;
        Ok(Self { a, b, q0 })
    }

    /// Like [`Lagrangian::new`] but rejects pairs failing validation.
    pub fn new_validated(a: CMatrix<T>, b: CMatrix<T>, q0: usize) -> Result<Self> {
        let l = Self::new(a, b, q0)?;
        let report = l.validate();
        if !report.is_lagrangian {
            return Err(Error::NotLagrangian(report.messages.join("; ")));
        }
        Ok(l)
    }

    pub fn a(&self) -> &CMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &CMatrix<T> {
        &self.b
    }

    pub fn q0(&self) -> usize {
        self.q0
    }

    pub fn q(&self) -> usize {
        self.a.rows()
    }

    pub fn is_real(&self) -> bool {
        self.a.is_real() && self.b.is_real()
    }

    pub fn validate(&self) -> ValidationReport<T> {
        validate_pair(&self.a, &self.b, self.q0)
    }

    pub fn check_spectrum(&self, spectrum: &BaseSpectrum<T>) -> Result<()> {
        if self.q0 != spectrum.q0() || self.q() != spectrum.q() {
            return Err(Error::InvalidInput(format!(
                "Lagrangian has q = {}, q0 = {} but spectrum has q = {}, q0 = {}",
                self.q(),
                self.q0,
                spectrum.q(),
                spectrum.q0()
            )));
        }
        Ok(())
    }

    /// Left-multiplies both matrices by `u` (same subspace when `u` is invertible).
    pub fn row_transformed(&self, u: &CMatrix<T>) -> Result<Self> {
        Self::new(u * &self.a, u * &self.b, self.q0)
    }

    /// Relabels the q1 block: column/row j of that block comes from perm[j].
    pub fn permuted_q1(&self, perm: &[usize]) -> Result<Self> {
        let q = self.q();
        let q0 = self.q0;
        if !is_permutation(perm, q - q0) {
            return Err(Error::InvalidInput("not a permutation of the q1 block".into()));
        }
        let map = |i: usize| if i < q0 { i } else { q0 + perm[i - q0] };
        let a = CMatrix::from_fn(q, q, |i, j| self.a[(map(i), map(j))]);
        let b = CMatrix::from_fn(q, q, |i, j| self.b[(map(i), map(j))]);
        Self::new(a, b, q0)
    }

    /// Block-diagonal assembly of a q0-block pair and a q1-block pair.
    pub fn block_diagonal(l0: &Lagrangian<T>, l1: &Lagrangian<T>) -> Result<Self> {
        if l0.q0 != l0.q() || l1.q0 != 0 {
            return Err(Error::InvalidInput(
                "block_diagonal expects a pure q0 block followed by a pure q1 block".into(),
            ));
        }
        let (n0, n1) = (l0.q(), l1.q());
        let n = n0 + n1;
        let pick = |m0: &CMatrix<T>, m1: &CMatrix<T>| {
            CMatrix::from_fn(n, n, |i, j| match (i < n0, j < n0) {
                (true, true) => m0[(i, j)],
                (false, false) => m1[(i - n0, j - n0)],
                _ => creal(T::zero()),
            })
        };
        Self::new(pick(&l0.a, &l1.a), pick(&l0.b, &l1.b), n0)
    }

    /// Splits into (q0 block, q1 block) when both off-diagonal blocks of 𝒜 and ℬ vanish.
    pub fn split_decomposable(&self) -> Option<(Lagrangian<T>, Lagrangian<T>)> {
        let (q, q0) = (self.q(), self.q0);
        let off_zero = |m: &CMatrix<T>| {
            (0..q).all(|i| (0..q).all(|j| (i < q0) == (j < q0) || m[(i, j)].norm() == T::zero()))
        };
        if !off_zero(&self.a) || !off_zero(&self.b) {
            return None;
        }
        let sub = |m: &CMatrix<T>, lo: usize, hi: usize| CMatrix::from_fn(hi - lo, hi - lo, |i, j| m[(lo + i, lo + j)]);
        let l0 = Lagrangian { a: sub(&self.a, 0, q0), b: sub(&self.b, 0, q0), q0 };
        let l1 = Lagrangian { a: sub(&self.a, q0, q), b: sub(&self.b, q0, q), q0: 0 };
        Some((l0, l1))
    }
}

fn check_shapes<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, q0: usize) -> Result<()> {
    if !a.is_square() || !b.is_square() || a.rows() != b.rows() {
        return Err(Error::InvalidInput(format!(
            "A ({}x{}) and B ({}x{}) must be square of equal size",
            a.rows(),
            a.cols(),
            b.rows(),
            b.cols()
        )));
    }
    if a.rows() == 0 {
        return Err(Error::InvalidInput("q must be at least 1".into()));
    }
    if q0 > a.rows() {
        return Err(Error::InvalidInput(format!("q0 = {q0} exceeds q = {}", a.rows())));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub is_lagrangian: bool,
    pub rank_defect: usize,
    /// Max entry of |A′B* − (A′B*)*|.
    pub hermiticity_residual: T,
    pub hermiticity_tolerance: T,
    pub messages: Vec<String>,
}

fn validate_pair<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, q0: usize) -> ValidationReport<T> {
    let q = a.rows();
    let rank = a.hstack(b).numerical_rank(T::tol(RANK_REL_TOL));
    let rank_defect = q - rank.min(q);

    let a_prime = CMatrix::from_fn(q, q, |i, j| if j < q0 { -a[(i, j)] } else { a[(i, j)] });
    let h = &a_prime * &b.adjoint();
    let hermiticity_residual = (&h - &h.adjoint()).max_abs();
    let hermiticity_tolerance = T::tol(HERMITICITY_TOL) * (T::one() + a.max_abs() * b.max_abs());

    let mut messages = Vec::new();
    if rank_defect > 0 {
        messages.push(format!("[A B] has rank {rank} < q = {q} (defect {rank_defect})"));
    }
    if hermiticity_residual > hermiticity_tolerance {
        messages.push(format!(
            "A'B* is not Hermitian: residual {hermiticity_residual:e} exceeds {hermiticity_tolerance:e}"
        ));
    }
    ValidationReport {
        is_lagrangian: messages.is_empty(),
        rank_defect,
        hermiticity_residual,
        hermiticity_tolerance,
        messages,
    }
}

/// Checks the rank and Hermiticity conditions for (𝒜, ℬ).
pub fn validate_lagrangian<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>, q0: usize) -> Result<ValidationReport<T>> {
    check_shapes(a, b, q0)?;
    Ok(validate_pair(a, b, q0))
}

fn check_block_sizes(q0: usize, q1: usize) -> Result<usize> {
    match q0 + q1 {
        0 => Err(Error::InvalidInput("q = q0 + q1 must be at least 1".into())),
        q => Ok(q),
    }
}

/// 𝒜 = 0, ℬ = Id.
pub fn make_friedrichs<T: Real>(q0: usize, q1: usize) -> Result<Lagrangian<T>> {
    let q = check_block_sizes(q0, q1)?;
    Lagrangian::new(CMatrix::zeros(q, q), CMatrix::identity(q), q0)
}

/// 𝒜 = diag(0_{q0}, Id_{q1}), ℬ = diag(Id_{q0}, 0_{q1}).
pub fn make_neumann<T: Real>(q0: usize, q1: usize) -> Result<Lagrangian<T>> {
    let q = check_block_sizes(q0, q1)?;
    let a: Vec<T> = (0..q).map(|i| if i < q0 { T::zero() } else { T::one() }).collect();
    let b: Vec<T> = a.iter().map(|&x| T::one() - x).collect();
    Lagrangian::new(CMatrix::from_real_diag(&a), CMatrix::from_real_diag(&b), q0)
}

/// ℬ = diag(mask), 𝒜 = Id − ℬ; the first q0 mask entries must be set.
pub fn make_scale_invariant<T: Real>(mask: &[bool], q0: usize) -> Result<Lagrangian<T>> {
    if mask.is_empty() {
        return Err(Error::InvalidInput("q = q0 + q1 must be at least 1".into()));
    }
    if q0 > mask.len() || !mask[..q0].iter().all(|&m| m) {
        return Err(Error::InvalidInput(
            "scale-invariant extensions need the first q0 diagonal entries of B equal to 1".into(),
        ));
    }
    let b: Vec<T> = mask.iter().map(|&m| if m { T::one() } else { T::zero() }).collect();
    let a: Vec<T> = b.iter().map(|&x| T::one() - x).collect();
    Lagrangian::new(CMatrix::from_real_diag(&a), CMatrix::from_real_diag(&b), q0)
}

/// ν = √(λ + 1/4) and τ = 2^{2ν} Γ(1+ν)/Γ(1−ν) for −1/4 < λ < 3/4.
pub fn nu_tau_from_lambda<T: Real>(lambda: T) -> Result<(T, T)> {
    let quarter = T::lit(0.25);
    let lf = lambda.to_f64().unwrap_or(f64::NAN);
    if !lambda.is_finite() {
        return Err(Error::InvalidInput(format!("lambda must be finite, got {lambda}")));
    }
    if lambda <= -quarter {
        if lambda == -quarter {
            return Err(Error::LambdaInQ0Block { lambda: lf });
        }
        return Err(Error::InvalidInput(format!("lambda = {lambda} is below -1/4")));
    }
    if lambda >= T::lit(0.75) {
        return Err(Error::LimitPoint { lambda: lf });
    }
    let nu = (lambda + quarter).sqrt();
    Ok((nu, tau_of_nu(nu)?))
}

fn random_complex<T: Real, R: Rng + ?Sized>(rng: &mut R, real: bool) -> Complex<T> {
    let re = T::lit(rng.gen_range(-1.0..1.0));
    let im = if real { T::zero() } else { T::lit(rng.gen_range(-1.0..1.0)) };
    Complex::new(re, im)
}

/// A random well-conditioned invertible q × q matrix.
fn random_invertible<T: Real, R: Rng + ?Sized>(rng: &mut R, q: usize, real: bool) -> CMatrix<T> {
    let half = T::lit(0.5);
    CMatrix::from_fn(q, q, |i, j| {
        let z: Complex<T> = random_complex(rng, real) * half;
        if i == j {
            z + T::lit(1.5)
        } else {
            z
        }
    })
}

/// A random unitary matrix (Gram–Schmidt on a random complex matrix).
fn random_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, q: usize) -> CMatrix<T> {
    let mut rows: Vec<Vec<Complex<T>>> = Vec::with_capacity(q);
    while rows.len() < q {
        let mut v: Vec<Complex<T>> = (0..q).map(|_| random_complex(rng, false)).collect();
        for r in &rows {
            let proj = (0..q).fold(creal(T::zero()), |s, k| s + v[k] * r[k].conj());
            for k in 0..q {
                v[k] -= proj * r[k];
            }
        }
        let norm = v.iter().fold(T::zero(), |s, z| s + z.norm_sqr()).sqrt();
        if norm > T::lit(1e-3) {
            rows.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    CMatrix::from_rows(&rows).expect("square")
}

/// Samples a valid Lagrangian pair for the block sizes (q0, q1).
///
/// Real pairs come from 𝒜′ = H symmetric, ℬ = Id; complex pairs from the
/// Cayley form 𝒜′ = Id − W, ℬ = i(Id + W) with W unitary. Both are then mixed
/// by a random invertible row transformation.
pub fn random_lagrangian<T: Real, R: Rng + ?Sized>(rng: &mut R, q0: usize, q1: usize, real: bool) -> Result<Lagrangian<T>> {
    let q = check_block_sizes(q0, q1)?;
    let sign = |j: usize| if j < q0 { -T::one() } else { T::one() };
    let (a_prime, b) = if real {
        let mut h = CMatrix::zeros(q, q);
        for i in 0..q {
            for j in i..q {
                let z = random_complex(rng, true);
                h[(i, j)] = z;
                h[(j, i)] = z;
            }
        }
        (h, CMatrix::identity(q))
    } else {
        let w = random_unitary(rng, q);
        let id = CMatrix::identity(q);
        let i = Complex::new(T::zero(), T::one());
        let b = CMatrix::from_fn(q, q, |r, c| i * (id[(r, c)] + w[(r, c)]));
        (&id - &w, b)
    };
    let a = CMatrix::from_fn(q, q, |i, j| a_prime[(i, j)] * sign(j));
    let u = random_invertible(rng, q, real);
    Lagrangian::new(&u * &a, &u * &b, q0)
}
