//! Command implementations. Each returns a report and an exit status.

use std::collections::BTreeMap;

use conedet_core::det::{
    compute_det, det_decomposable, det_full, det_general_value, det_neumann, det_ratio, det_rowcol, detect_rowcol,
    DetOptions, Method,
};
use conedet_core::scalar::rel_diff;
use conedet_core::secular::{asymptotic_ratio, extrapolate_f0, secular_f, secular_f0_closed};
use conedet_core::series::{analyze, DEFAULT_M, DEFAULT_N};
use conedet_core::{
    contour_det_oracle, find_eigenvalues, Complex64, Error, Lagrangian, SecularContext, SeriesConfig,
    SingularityReport, SpectrumSlice,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::exit::{self, CliError};
use crate::problem::Problem;
use crate::report::cnum;

pub const DEFAULT_K: usize = 10;
pub const DEFAULT_T: f64 = 0.1;
pub const DEFAULT_N_QUAD: usize = 8;
pub const SEED_ENV: &str = "CONEDET_SEED";

/// Body of a report: results, residuals, warnings and the exit status.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub results: Value,
    pub residuals: BTreeMap<String, f64>,
    pub warnings: Vec<String>,
    pub code: i32,
}

impl Outcome {
    fn ok(results: Value) -> Self {
        Self { results, residuals: BTreeMap::new(), warnings: Vec::new(), code: exit::OK }
    }
}

pub fn validate(p: &Problem) -> Result<Outcome, CliError> {
    let v = p.validation()?;
    let results = json!({
        "is_lagrangian": v.is_lagrangian,
        "q": p.spectrum.q(),
        "q0": p.spectrum.q0(),
        "nus": p.spectrum.nus(),
        "rank_defect": v.rank_defect,
        "hermiticity_residual": v.hermiticity_residual,
        "hermiticity_tolerance": v.hermiticity_tolerance,
        "messages": v.messages,
    });
    let mut out = Outcome::ok(results);
    if !v.is_lagrangian {
        out.code = exit::EXTENSION;
        out.warnings = v.messages;
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetArgs {
    pub method: Method,
    pub t: f64,
    pub n_quad: usize,
}

pub fn det(p: &Problem, args: DetArgs) -> Result<Outcome, CliError> {
    let l = p.lagrangian()?;
    let s = &p.spectrum;
    let opts = DetOptions { oracle_t: Complex64::new(0.0, args.t), n_quad: args.n_quad, cfg: SeriesConfig::default() };
    let r = compute_det(&l, s, args.method, &opts)?;
    let mut results = json!({
        "method": r.method.as_str(),
        "value": cnum(r.value),
        "cone_det": cnum(r.cone_det),
        "is_ratio": r.method.yields_ratio(),
        "f0": cnum(r.f0),
        "inputs_digest": r.inputs_digest,
        "notes": r.notes,
    });
    if let Some(reg) = p.regular_part() {
        results["det_full"] = cnum(r.cone_det * reg.det_tilde);
        results["det_tilde"] = cnum(reg.det_tilde);
        results["c_residue"] = json!(reg.c_residue);
    }
    let mut out = Outcome::ok(results);
    out.residuals = r.cross_check_residuals;
    Ok(out)
}

fn singularity_json(r: &SingularityReport) -> Value {
    let poles: Vec<Value> = r
        .poles
        .iter()
        .map(|e| {
            json!({
                "xi": e.xi,
                "xi_key": e.xi_key,
                "p_xi": e.p_xi,
                "order": e.order,
                "coeff": cnum(e.coeff),
                "f_at_minus_xi": cnum(e.f_at_minus_xi),
            })
        })
        .collect();
    let logs: Vec<Value> = r
        .logs
        .iter()
        .map(|e| {
            json!({
                "xi": e.xi,
                "xi_key": e.xi_key,
                "ell_xi": e.ell_xi,
                "coeff": cnum(e.coeff),
                "g_leading": cnum(e.g_leading),
            })
        })
        .collect();
    json!({
        "j0": r.j0,
        "q0": r.q0,
        "log_branch_coeff_at_0": r.log_branch_coeff_at_0,
        "alpha0_key": r.alpha0_key,
        "alpha0_value": r.alpha0_value,
        "a_j0alpha0": cnum(r.a_j0alpha0),
        "gamma_tilde": r.gamma_tilde,
        "truncation": {"N": r.truncation.n, "M": r.truncation.m, "K_max": r.truncation.k_max},
        "poles": poles,
        "logs": logs,
    })
}

pub fn singularities(p: &Problem, n: Option<f64>, m: Option<i64>) -> Result<Outcome, CliError> {
    let l = p.lagrangian()?;
    let file = p.file.truncation;
    let n = n.or(file.map(|t| t.n)).unwrap_or(DEFAULT_N);
    let m = m.or(file.map(|t| t.m)).unwrap_or(DEFAULT_M);
    let r = analyze(&l, &p.spectrum, n, m)?;
    let mut out = Outcome::ok(singularity_json(&r));
    out.warnings = r.warnings;
    Ok(out)
}

fn spectrum_json(slice: &SpectrumSlice) -> Value {
    let roots = |v: &[conedet_core::secular::Root<f64>]| -> Vec<Value> {
        v.iter()
            .map(|r| json!({"mu": r.mu, "eigenvalue": r.eigenvalue, "residual": r.residual, "multiplicity": r.multiplicity}))
            .collect()
    };
    let kernel = slice.kernel.as_ref().map(|k| {
        json!({
            "eigenvalue": 0.0,
            "multiplicity": k.multiplicity,
            "note": "F(0) = 0: the extension has a kernel; multiplicity is half the zero order of F at 0",
        })
    });
    json!({
        "eigenvalues": slice.eigenvalues(),
        "positive": roots(&slice.positive),
        "negative": roots(&slice.negative),
        "kernel": kernel,
        "mu_max": slice.mu_max,
        "x_max": slice.x_max,
        "requested": slice.requested,
        "shortfall": slice.shortfall,
    })
}

pub fn spectrum(p: &Problem, k: Option<usize>, mu_max: Option<f64>) -> Result<Outcome, CliError> {
    let l = p.lagrangian()?;
    let file = p.file.solver;
    let k = k.or(file.map(|s| s.k)).unwrap_or(DEFAULT_K);
    let mu_max = mu_max
        .or(file.map(|s| s.mu_max))
        .unwrap_or_else(|| (k as f64 + 2.0) * std::f64::consts::PI / p.spectrum.radius());
    let ctx = SecularContext::new(&l, &p.spectrum, SeriesConfig::default())?;
    let slice = find_eigenvalues(&ctx, k, mu_max)?;
    let mut out = Outcome::ok(spectrum_json(&slice));
    out.warnings = slice.warnings.clone();
    if !slice.negative.is_empty() {
        out.warnings.push(format!("{} negative eigenvalue(s) found", slice.negative.len()));
    }
    if slice.shortfall {
        out.warnings.push(format!("only {} of {k} positive eigenvalues found below mu_max = {mu_max}", slice.positive.len()));
    }
    Ok(out)
}

/// Seed for randomized checks, from `CONEDET_SEED` (default 0).
pub fn seed_from_env() -> Result<u64, CliError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| CliError::input(format!("{SEED_ENV} must be an unsigned integer, got {v:?}"))),
        Err(_) => Ok(0),
    }
}

struct Battery {
    checks: Vec<Value>,
    residuals: BTreeMap<String, f64>,
    failed: usize,
}

impl Battery {
    fn record(&mut self, name: &str, residual: f64, tol: f64) {
        let pass = residual <= tol;
        if !pass {
            self.failed += 1;
        }
        self.residuals.insert(name.to_string(), residual);
        self.checks.push(json!({"name": name, "status": if pass { "pass" } else { "fail" }, "residual": residual, "tolerance": tol}));
    }

    fn skip(&mut self, name: &str, reason: String) {
        self.checks.push(json!({"name": name, "status": "skip", "reason": reason}));
    }

    fn error(&mut self, name: &str, e: &Error) {
        self.failed += 1;
        self.checks.push(json!({"name": name, "status": "fail", "reason": e.to_string()}));
    }

    fn run(&mut self, name: &str, tol: f64, f: impl FnOnce() -> Result<f64, Error>) {
        match f() {
            Ok(r) => self.record(name, r, tol),
            Err(e) => self.error(name, &e),
        }
    }
}

/// Runs the invariant battery on one input. Exit 0 iff every executed check passes.
pub fn verify(p: &Problem, seed: u64) -> Result<Outcome, CliError> {
    let l = p.lagrangian()?;
    let s = &p.spectrum;
    let ctx = SecularContext::new(&l, s, SeriesConfig::default())?;
    let mut b = Battery { checks: Vec::new(), residuals: BTreeMap::new(), failed: 0 };
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = s.radius();

    b.run("evenness", 1e-10, || {
        let mut worst = 0.0f64;
        for _ in 0..8 {
            let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
            let mu = Complex64::new(rng.gen_range(0.1..8.0), sign * rng.gen_range(0.05..2.0)) / r;
            let plus = secular_f(&ctx, mu)?;
            let minus = secular_f(&ctx, -mu)?;
            worst = worst.max((plus - minus).norm() / ctx.local_scale(mu)?);
        }
        Ok(worst)
    });

    b.run("f0_consistency", 1e-8, || {
        let closed = secular_f0_closed(&l, s)?;
        let extrapolated = extrapolate_f0(&ctx)?;
        Ok((closed - extrapolated).norm() / (1.0 + ctx.f0_scale()))
    });

    b.run("asymptotic_trend", 0.0, || {
        let xs = [20.0, 40.0, 80.0].map(|x: f64| (x / r).max(10.0));
        let mut e = Vec::new();
        for x in xs {
            e.push((asymptotic_ratio(&ctx, x)? - 1.0).norm());
        }
        let violations = e.windows(2).filter(|w| !(w[1] < w[0] || w[1] <= 1e-12)).count();
        Ok(violations as f64)
    });

    if ctx.has_kernel() {
        let reason = format!("|F(0)| = {:.3e}: the extension has a kernel", ctx.f0().norm());
        b.skip("ratio_identity", reason.clone());
        b.skip("contour_oracle", reason);
    } else {
        cross_checks(&mut b, &l, p);
        oracle_checks(&mut b, &ctx);
    }

    let results = json!({
        "seed": seed,
        "checks": b.checks,
        "failed": b.failed,
        "all_passed": b.failed == 0,
    });
    let mut out = Outcome::ok(results);
    out.residuals = b.residuals;
    if b.failed > 0 {
        out.code = exit::NUMERIC;
        out.warnings.push(format!("{} check(s) failed", b.failed));
    }
    Ok(out)
}

fn cross_checks(b: &mut Battery, l: &Lagrangian, p: &Problem) {
    let s = &p.spectrum;
    let general = match det_general_value(l, s) {
        Ok(g) => g,
        Err(e) => return b.error("det_general", &e),
    };
    b.run("ratio_identity", 1e-12, || Ok(rel_diff(general, det_ratio(l, s)? * det_neumann(s)?)));
    if let Ok((perm, r)) = detect_rowcol(l) {
        match det_rowcol(l, s, &perm, r) {
            Ok(v) => b.run("rowcol", 1e-11, || Ok(rel_diff(v * det_neumann(s)?, general))),
            Err(e) => b.skip("rowcol", e.to_string()),
        }
    }
    match l.split_decomposable() {
        Some((l0, l1)) => b.run("decomposable", 1e-11, || Ok(rel_diff(det_decomposable(&l0, &l1, s)?, general))),
        None => b.skip("decomposable", "A and B are not block diagonal".into()),
    }
    if l.q() == 1 {
        b.run("oned", 1e-11, || {
            let v = compute_det(l, s, Method::Oned, &DetOptions::default())?;
            Ok(rel_diff(v.value, general))
        });
    }
    if let Some(reg) = p.regular_part() {
        b.run("det_full", 1e-14, || Ok(rel_diff(det_full(l, s, &reg)?, general * reg.det_tilde)));
    }
}

fn oracle_checks(b: &mut Battery, ctx: &SecularContext) {
    let general = match det_general_value(ctx.lagrangian(), ctx.spectrum()) {
        Ok(g) => g,
        Err(_) => return,
    };
    let at = |t: f64| contour_det_oracle(ctx, Complex64::new(0.0, t), DEFAULT_N_QUAD);
    match (at(0.1), at(0.3)) {
        (Ok(o1), Ok(o3)) => {
            b.record("contour_oracle", rel_diff(o1.value, general), 1e-5);
            b.record("contour_oracle_t_independence", rel_diff(o1.value, o3.value), 1e-6);
        }
        (Err(e @ Error::ContourHit(_)), _) | (_, Err(e @ Error::ContourHit(_))) => b.skip("contour_oracle", e.to_string()),
        (Err(e), _) | (_, Err(e)) => b.error("contour_oracle", &e),
    }
}
