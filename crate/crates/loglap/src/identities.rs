//! Identity suites: one checking routine per closed-form identity.
//!
//! Every suite evaluates both sides of its identity by independent means —
//! singular-integral quadrature against closed forms, the Fourier grid path
//! against the point path, numerically integrated functionals against
//! Γ-function constants — and returns a [`CheckReport`]. Each suite also
//! supports a documented deliberate perturbation so that the detectors can
//! be shown to actually fire: a vacuously passing quadrature is worse than
//! a failing one.

use crate::error::Error;
use crate::field::Field;
use crate::grid::{
    boundary_supported, fourier_log_weight_sum, l2_sum, loglap_grid, sample_field,
    spatial_log_weight_sum, GridSpec,
};
use crate::operators::{
    expansion_order, fraclap_point, integrate_functional, loglap_point, fit_loglog_slope,
    FunctionalKind, QuadratureSpec,
};
use crate::report::{CaseResult, CheckReport};
use crate::specfun;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::time::Instant;

/// Deliberate input corruption for detector-honesty runs.
///
/// `Amplitude(ε)` multiplies the field fed to the operator side of the
/// identity by (1+ε); `Offset(ε)` subtracts ε from the computed left-hand
/// number. Which kind a suite documents is fixed (see
/// [`SuiteId::documented_perturbation`]); both are honored if supplied.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Perturbation {
    None,
    Amplitude(f64),
    Offset(f64),
}

impl Perturbation {
    fn factor(self) -> f64 {
        match self {
            Perturbation::Amplitude(e) => 1.0 + e,
            _ => 1.0,
        }
    }

    fn shift(self, lhs: f64) -> f64 {
        match self {
            Perturbation::Offset(e) => lhs - e,
            _ => lhs,
        }
    }

    fn describe(self) -> String {
        match self {
            Perturbation::None => "none".into(),
            Perturbation::Amplitude(e) => format!("amplitude x{}", 1.0 + e),
            Perturbation::Offset(e) => format!("offset {e}"),
        }
    }
}

/// The ten identity suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteId {
    Bubble,
    FracBubble,
    Scaling,
    Kelvin,
    Commutator,
    Pohozaev,
    Pitt,
    Asymptotics,
    Expansion,
    Sublinear,
}

impl SuiteId {
    pub const ALL: [SuiteId; 10] = [
        SuiteId::Bubble,
        SuiteId::FracBubble,
        SuiteId::Scaling,
        SuiteId::Kelvin,
        SuiteId::Commutator,
        SuiteId::Pohozaev,
        SuiteId::Pitt,
        SuiteId::Asymptotics,
        SuiteId::Expansion,
        SuiteId::Sublinear,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Bubble => "bubble",
            SuiteId::FracBubble => "fracbubble",
            SuiteId::Scaling => "scaling",
            SuiteId::Kelvin => "kelvin",
            SuiteId::Commutator => "commutator",
            SuiteId::Pohozaev => "pohozaev",
            SuiteId::Pitt => "pitt",
            SuiteId::Asymptotics => "asymptotics",
            SuiteId::Expansion => "expansion",
            SuiteId::Sublinear => "sublinear",
        }
    }

    pub fn parse(s: &str) -> Result<SuiteId, Error> {
        SuiteId::ALL
            .into_iter()
            .find(|id| id.name() == s)
            .ok_or_else(|| Error::config(format!("unknown suite '{s}'")))
    }

    /// Default tolerance of the suite at dimension n.
    pub fn default_tol(self, n: usize) -> f64 {
        match self {
            SuiteId::Bubble => {
                if n == 1 {
                    1e-5
                } else {
                    1e-4
                }
            }
            SuiteId::FracBubble => 1e-5,
            SuiteId::Scaling => 1e-7,
            SuiteId::Kelvin | SuiteId::Commutator => 1e-4,
            SuiteId::Pohozaev => 1e-3,
            SuiteId::Pitt => 1e-3,
            SuiteId::Asymptotics => 1e-10,
            SuiteId::Expansion => 0.2,
            SuiteId::Sublinear => 1e-9,
        }
    }

    /// The perturbation kind this suite documents for detector-honesty runs.
    pub fn documented_perturbation(self, eps: f64) -> Perturbation {
        match self {
            SuiteId::Bubble
            | SuiteId::FracBubble
            | SuiteId::Scaling
            | SuiteId::Kelvin
            | SuiteId::Commutator
            | SuiteId::Pohozaev => Perturbation::Amplitude(eps),
            SuiteId::Pitt
            | SuiteId::Asymptotics
            | SuiteId::Expansion
            | SuiteId::Sublinear => Perturbation::Offset(eps),
        }
    }
}

/// Shared execution context for one suite run.
#[derive(Debug, Clone)]
pub struct SuiteContext {
    /// Ambient dimension.
    pub n: usize,
    /// Tolerance override (None → suite default).
    pub tol: Option<f64>,
    /// Quadrature controls for the singular-integral path.
    pub quad: QuadratureSpec,
    /// Grid for the Fourier path (absent in n = 3, where only the
    /// quadrature-path suites run).
    pub grid: Option<GridSpec>,
    /// Seed for the randomized suites.
    pub seed: u64,
    /// Deliberate perturbation (detector-honesty runs).
    pub perturb: Perturbation,
}

impl SuiteContext {
    pub fn new(n: usize) -> Result<SuiteContext, Error> {
        if !(1..=3).contains(&n) {
            return Err(Error::domain("suites support n in {1, 2, 3}"));
        }
        Ok(SuiteContext {
            n,
            tol: None,
            quad: QuadratureSpec::default(),
            grid: if n <= 2 { Some(GridSpec::default_for(n)?) } else { None },
            seed: 7,
            perturb: Perturbation::None,
        })
    }

    fn tol_for(&self, id: SuiteId) -> f64 {
        self.tol.unwrap_or_else(|| id.default_tol(self.n))
    }

    fn grid(&self) -> Result<&GridSpec, Error> {
        self.grid
            .as_ref()
            .ok_or_else(|| Error::domain("this suite needs a grid (n must be 1 or 2)"))
    }
}

/// Runs one suite with its default case lists.
pub fn run_suite(id: SuiteId, ctx: &SuiteContext) -> Result<CheckReport, Error> {
    let tol = ctx.tol_for(id);
    match id {
        SuiteId::Bubble => check_bubble_pde(ctx, &[0.5, 1.0, 2.0], 16, tol),
        SuiteId::FracBubble => check_frac_bubble_pde(ctx, &[0.1, 0.25], 1.0, 12, tol),
        SuiteId::Scaling => check_scaling(ctx, &[1.0, 2.0, 0.5], tol),
        SuiteId::Kelvin => check_kelvin(ctx, &[1.0, 2.0], 8, tol),
        SuiteId::Commutator => check_commutator(ctx, 8, tol),
        SuiteId::Pohozaev => check_pohozaev(ctx, 1.0, &[1.0, 2.0, 4.0], tol),
        SuiteId::Pitt => check_pitt(ctx, 32, tol),
        SuiteId::Asymptotics => check_asymptotics(ctx, &[0.5, 1.0, 2.0]),
        SuiteId::Expansion => check_expansion(ctx, tol),
        SuiteId::Sublinear => check_sublinear(ctx, &[0.5, 1.0], tol),
    }
}

fn axis_point(n: usize, x: f64) -> Vec<f64> {
    let mut v = vec![0.0; n];
    v[0] = x;
    v
}

fn linspace(a: f64, b: f64, count: usize) -> Vec<f64> {
    (0..count)
        .map(|i| a + (b - a) * i as f64 / (count - 1) as f64)
        .collect()
}

fn base_report(id: SuiteId, anchor: &str, ctx: &SuiteContext, tol: f64) -> CheckReport {
    let mut report = CheckReport::new(id.name(), anchor, ctx.n);
    report.diag("tolerance", tol);
    report.diag("perturbation", ctx.perturb.describe());
    report.diag("quad_abs_tol", ctx.quad.abs_tol);
    report.diag("quad_rel_tol", ctx.quad.rel_tol);
    report
}

/// Bubble PDE: L_Δ u_t = (4/n) u_t ln u_t for the explicit family
/// u_t(x) = β_n (t/(t²+|x|²))^{n/2}.
pub fn check_bubble_pde(
    ctx: &SuiteContext,
    t_list: &[f64],
    points: usize,
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Bubble,
        "bubble family solves L_Δu = (4/n) u ln u",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let radii = linspace(0.0, 10.0, points);
    let mut jobs = Vec::new();
    for &t in t_list {
        for (i, &r) in radii.iter().enumerate() {
            jobs.push((t, i, r));
        }
    }
    let cases: Vec<CaseResult> = jobs
        .par_iter()
        .map(|&(t, i, r)| {
            let case_id = format!("t={t}/i={i:02}");
            let inputs = format!("t={t}, |x|={r:.4}");
            let work = || -> Result<CaseResult, Error> {
                let u = Field::bubble(ctx.n, t, vec![0.0; ctx.n])?;
                let x = axis_point(ctx.n, r);
                let lhs_field = u.multiply(ctx.perturb.factor());
                let lhs = ctx
                    .perturb
                    .shift(loglap_point(&lhs_field, &x, &ctx.quad)?.value);
                let v = u.eval(&x);
                let rhs = 4.0 / nf * v * v.ln();
                Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, tol * rhs.abs().max(1.0)).at(&x))
            };
            work().unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()))
        })
        .collect();
    report.extend_cases(cases);
    Ok(report.finish(started))
}

/// Fractional bubble PDE: (−Δ)^s u_{s,t} = u_{s,t}^{(n+2s)/(n−2s)}.
pub fn check_frac_bubble_pde(
    ctx: &SuiteContext,
    s_list: &[f64],
    t: f64,
    points: usize,
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::FracBubble,
        "fractional bubble family solves (−Δ)^s u = u^{2*_s − 1}",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let radii = linspace(0.0, 10.0, points);
    let mut jobs = Vec::new();
    for &s in s_list {
        for (i, &r) in radii.iter().enumerate() {
            jobs.push((s, i, r));
        }
    }
    let cases: Vec<CaseResult> = jobs
        .par_iter()
        .map(|&(s, i, r)| {
            let case_id = format!("s={s}/i={i:02}");
            let inputs = format!("s={s}, t={t}, |x|={r:.4}");
            let work = || -> Result<CaseResult, Error> {
                let u = Field::frac_bubble(ctx.n, s, t, vec![0.0; ctx.n])?;
                let x = axis_point(ctx.n, r);
                let lhs_field = u.multiply(ctx.perturb.factor());
                let lhs = ctx
                    .perturb
                    .shift(fraclap_point(&lhs_field, &x, s, &ctx.quad)?.value);
                let rhs = u.eval(&x).powf((nf + 2.0 * s) / (nf - 2.0 * s));
                Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, tol * rhs.abs().max(1.0)).at(&x))
            };
            work().unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()))
        })
        .collect();
    report.extend_cases(cases);
    Ok(report.finish(started))
}

/// Scaling laws: L_Δ(u_l)(x) = l^{−n/2}[(L_Δu)(x/l) − 2 ln l · u(x/l)] for
/// u_l(x) = l^{−n/2} u(x/l), and ‖u_l‖₂ = ‖u‖₂.
pub fn check_scaling(
    ctx: &SuiteContext,
    l_list: &[f64],
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Scaling,
        "dilation conjugation L_Δ(u_l) = (L_Δu − 2 ln l · u)_l and L² invariance",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let u = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 1.0)?;
    let norm_tol = 1e-8;
    for &l in l_list {
        let ul = u.scale(l)?;
        let lhs_field = ul.multiply(ctx.perturb.factor());
        for &r in &[0.0, 0.8, 1.7] {
            let case_id = format!("l={l}/x={r}");
            let inputs = format!("l={l}, |x|={r}, gaussian");
            let x = axis_point(ctx.n, r);
            let y = axis_point(ctx.n, r / l);
            let case = (|| -> Result<CaseResult, Error> {
                let lhs = ctx.perturb.shift(loglap_point(&lhs_field, &x, &ctx.quad)?.value);
                let rhs = l.powf(-nf / 2.0)
                    * (loglap_point(&u, &y, &ctx.quad)?.value - 2.0 * l.ln() * u.eval(&y));
                Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, tol).at(&x))
            })()
            .unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()));
            report.push_case(case);
        }
        let case_id = format!("l={l}/l2-invariance");
        let inputs = format!("l={l}, ‖u_l‖² vs ‖u‖²");
        let case = (|| -> Result<CaseResult, Error> {
            let lhs = ctx.perturb.shift(
                integrate_functional(FunctionalKind::L2Sq, &lhs_field, &ctx.quad)?.value,
            );
            let rhs = integrate_functional(FunctionalKind::L2Sq, &u, &ctx.quad)?.value;
            Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, norm_tol))
        })()
        .unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()));
        report.push_case(case);
    }
    report.diag("l2_invariance_tol", norm_tol);
    Ok(report.finish(started))
}

/// Kelvin conjugation: with u# the Kelvin transform of u about (x̃, r),
/// L_Δ(u#)(x) = (r/|x−x̃|)^n (L_Δu)(x*) − 4(ln|x−x̃| − ln r) u#(x),
/// plus the algebraic family closure kelvin(u_t) = u_{1/t}.
pub fn check_kelvin(
    ctx: &SuiteContext,
    r_list: &[f64],
    points: usize,
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Kelvin,
        "Kelvin inversion conjugates L_Δ up to −4 ln(|x|/r) · u#",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let u = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 1.0)?;
    let center = vec![0.0; ctx.n];
    for &r in r_list {
        let uk = u.kelvin(center.clone(), r)?;
        let lhs_field = uk.multiply(ctx.perturb.factor());
        // Sample radii, plus the sphere |x| = r where the log factor drops.
        let mut sample = linspace(0.3, 5.0, points);
        sample.push(r);
        let cases: Vec<CaseResult> = sample
            .par_iter()
            .enumerate()
            .map(|(i, &rho)| {
                let case_id = format!("r={r}/i={i:02}");
                let inputs = format!("r={r}, |x|={rho:.4}, gaussian");
                let work = || -> Result<CaseResult, Error> {
                    let x = axis_point(ctx.n, rho);
                    let xstar = axis_point(ctx.n, r * r / rho);
                    let lhs =
                        ctx.perturb.shift(loglap_point(&lhs_field, &x, &ctx.quad)?.value);
                    let rhs = (r / rho).powf(nf) * loglap_point(&u, &xstar, &ctx.quad)?.value
                        - 4.0 * (rho.ln() - r.ln()) * uk.eval(&x);
                    Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, tol * rhs.abs().max(1.0)).at(&x))
                };
                work().unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()))
            })
            .collect();
        report.extend_cases(cases);
    }
    // Family closure: the unit Kelvin transform maps u_t to u_{1/t}.
    let t = 2.0;
    let bubble = Field::bubble(ctx.n, t, center.clone())?;
    let closed = bubble.kelvin(center, 1.0)?.multiply(ctx.perturb.factor());
    let target = Field::bubble(ctx.n, 1.0 / t, vec![0.0; ctx.n])?;
    for (i, &rho) in [0.4, 1.0, 1.9, 3.5].iter().enumerate() {
        let x = axis_point(ctx.n, rho);
        report.push_case(CaseResult::new(
            format!("closure/i={i}"),
            format!("kelvin(u_{t}) vs u_{}, |x|={rho}", 1.0 / t),
            ctx.perturb.shift(closed.eval(&x)),
            target.eval(&x),
            1e-12,
        ).at(&x));
    }
    Ok(report.finish(started))
}

/// Commutator with the dilation generator: L_Δ(x·∇φ) − (x·∇)(L_Δφ) = 2φ,
/// checked on a Gaussian by the point path and by the grid path.
pub fn check_commutator(
    ctx: &SuiteContext,
    points: usize,
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Commutator,
        "dilation commutator [L_Δ, x·∇] = 2·id",
        ctx,
        tol,
    );
    let phi = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 1.0)?;
    let lhs_phi = phi.multiply(ctx.perturb.factor());
    let lhs_xdg = lhs_phi.x_dot_grad();
    let sample = linspace(-3.0, 3.0, points);

    // Point path: directional derivative of y ↦ L_Δφ(y) by central
    // differences along each axis.
    let h = 1e-4;
    let cases: Vec<CaseResult> = sample
        .par_iter()
        .enumerate()
        .map(|(i, &r)| {
            let case_id = format!("point/i={i:02}");
            let inputs = format!("x={r:.4}, gaussian, quadrature path");
            let work = || -> Result<CaseResult, Error> {
                let x = axis_point(ctx.n, r);
                let term1 = loglap_point(&lhs_xdg, &x, &ctx.quad)?.value;
                let mut xgrad = 0.0;
                for axis in 0..ctx.n {
                    if x[axis] == 0.0 {
                        continue;
                    }
                    let mut plus = x.clone();
                    let mut minus = x.clone();
                    plus[axis] += h;
                    minus[axis] -= h;
                    let d = (loglap_point(&lhs_phi, &plus, &ctx.quad)?.value
                        - loglap_point(&lhs_phi, &minus, &ctx.quad)?.value)
                        / (2.0 * h);
                    xgrad += x[axis] * d;
                }
                let lhs = ctx.perturb.shift(term1 - xgrad);
                let rhs = 2.0 * phi.eval(&x);
                Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, tol * rhs.abs().max(1.0)).at(&x))
            };
            work().unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()))
        })
        .collect();
    report.extend_cases(cases);

    // Grid path: both operator applications through the Fourier symbol, the
    // directional derivative by a five-point stencil on the grid values.
    match ctx.grid() {
        Ok(spec) => {
            report.diag("zero_mode", format!("{:?}", spec.zero_mode));
            let phi_samples = sample_field(&lhs_phi, spec)?;
            let xdg_samples = sample_field(&lhs_xdg, spec)?;
            let lap_phi = loglap_grid(&phi_samples, spec)?;
            let lap_xdg = loglap_grid(&xdg_samples, spec)?;
            report.diag("grid_imag_residue", lap_phi.max_imag_residue.max(lap_xdg.max_imag_residue));
            let hg = spec.spacing();
            let stride = |axis: usize| -> usize { if axis == 0 { spec.len() / spec.points } else { 1 } };
            for (i, &r) in sample.iter().enumerate() {
                let x = axis_point(ctx.n, r);
                let idx = spec.index_nearest(&x);
                let xg = spec.point(idx);
                let mut xgrad = 0.0;
                for axis in 0..ctx.n {
                    let st = stride(axis);
                    let b = &lap_phi.values;
                    let d = (-b[idx + 2 * st] + 8.0 * b[idx + st] - 8.0 * b[idx - st]
                        + b[idx - 2 * st])
                        / (12.0 * hg);
                    xgrad += xg[axis] * d;
                }
                let lhs = ctx.perturb.shift(lap_xdg.values[idx] - xgrad);
                let rhs = 2.0 * phi.eval(&xg);
                report.push_case(CaseResult::new(
                    format!("grid/i={i:02}"),
                    format!("x={:.4}, gaussian, grid path", xg[0]),
                    lhs,
                    rhs,
                    tol * rhs.abs().max(1.0),
                ).at(&xg));
            }
        }
        Err(e) => report.diag("grid_path", format!("skipped: {e}")),
    }
    Ok(report.finish(started))
}

/// Pohozaev identity and the k-sweep nonexistence mechanism.
pub fn check_pohozaev(
    ctx: &SuiteContext,
    t: f64,
    k_list: &[f64],
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Pohozaev,
        "Pohozaev pairing: 2n∫F(u) − n∫u f(u) + 2∫u² = 0 forces k = 4/n",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let u = Field::bubble(ctx.n, t, vec![0.0; ctx.n])?;
    let up = u.multiply(ctx.perturb.factor());
    let lambda_sq = {
        let tab = specfun::constants_table(ctx.n as u32)?;
        tab.lambda_n * tab.lambda_n
    };
    let k_crit = 4.0 / nf;

    // (a) The nontrivial step: ∫(L_Δu)(x·∇u) = −n∫F_{4/n}(u).
    let case = (|| -> Result<CaseResult, Error> {
        let lhs = ctx.perturb.shift(
            integrate_functional(FunctionalKind::PohozaevLhs, &up, &ctx.quad)?.value,
        );
        let rhs = -nf * integrate_functional(FunctionalKind::FInt(k_crit), &u, &ctx.quad)?.value;
        Ok(CaseResult::new(
            "chain",
            format!("t={t}, ∫(L_Δu)(x·∇u) vs −n∫F(u)"),
            lhs,
            rhs,
            tol * rhs.abs().max(1.0),
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("chain", "operator pairing", &e.to_string()));
    report.push_case(case);

    // (b)+(c) Assembled functional against the closed form 2(1−nk/4)Λ_n².
    let l2 = integrate_functional(FunctionalKind::L2Sq, &up, &ctx.quad)?.value;
    let mut ks: Vec<f64> = k_list.to_vec();
    if !ks.iter().any(|&k| (k - k_crit).abs() < 1e-12) {
        ks.push(k_crit);
    }
    for &k in &ks {
        let case_id = format!("k={k}");
        let inputs = format!("t={t}, k={k}, assembled vs 2(1−nk/4)Λ_n²");
        let case = (|| -> Result<CaseResult, Error> {
            let fint = integrate_functional(FunctionalKind::FInt(k), &up, &ctx.quad)?.value;
            let ufu = integrate_functional(FunctionalKind::UFu(k), &up, &ctx.quad)?.value;
            let lhs = ctx.perturb.shift(2.0 * nf * fint - nf * ufu + 2.0 * l2);
            let rhs = 2.0 * (1.0 - nf * k / 4.0) * lambda_sq;
            Ok(CaseResult::new(&case_id, &inputs, lhs, rhs, tol * rhs.abs().max(lambda_sq)))
        })()
        .unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()));
        report.push_case(case);
    }
    report.diag("lambda_n_sq", lambda_sq);
    report.diag(
        "hypothesis_class_note",
        "f(t) = k·t·ln t satisfies f(t)/t^γ → 0 (t→0) for every γ < 1; the suite \
         documents but does not test this hypothesis class",
    );
    Ok(report.finish(started))
}

/// A Gaussian mixture drawn from the trial's dedicated random substream.
fn random_mixture(n: usize, seed: u64, trial: u64) -> Result<Field, Error> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial + 1);
    let components = rng.gen_range(1..=3usize);
    let mut terms = Vec::with_capacity(components);
    for _ in 0..components {
        let center: Vec<f64> = (0..n).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let sigma = rng.gen_range(0.5..2.0);
        let weight = rng.gen_range(0.2..1.0);
        terms.push(Field::gaussian(n, sigma, center, weight)?);
    }
    Field::sum(terms)
}

/// Pitt's inequality: the D_n form on random mixtures via the grid path, and
/// the sharp-form extremal value ln Λ_n at the normalized bubble.
pub fn check_pitt(ctx: &SuiteContext, trials: u64, tol: f64) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Pitt,
        "Pitt inequality: D_n form on random fields; sharp-form extremal = ln Λ_n",
        ctx,
        tol,
    );
    let spec = ctx.grid()?;
    report.diag("zero_mode", format!("{:?}", spec.zero_mode));
    report.diag("seed", ctx.seed);
    report.diag("trials", trials);
    let nf = ctx.n as f64;
    let tab = specfun::constants_table(ctx.n as u32)?;
    let ineq_tol = 1e-6;
    report.diag("dn_form_slack_tol", ineq_tol);

    let mut boundary_warnings = 0u64;
    let cases: Vec<(CaseResult, bool)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let case_id = format!("dn-form/trial-{trial:02}");
            let work = || -> Result<(CaseResult, bool), Error> {
                let f = random_mixture(ctx.n, ctx.seed, trial)?;
                let samples = sample_field(&f, spec)?;
                let warn = !boundary_supported(&samples, spec);
                let spatial = spatial_log_weight_sum(&samples, spec)?;
                let fourier = fourier_log_weight_sum(&samples, spec)?;
                let mass = l2_sum(&samples, spec);
                let slack = spatial + fourier - tab.d_n * mass;
                let lhs = ctx.perturb.shift(slack.min(0.0));
                let inputs = format!(
                    "seed={}, trial={trial}, slack={slack:.6e}, ∫f²={mass:.6e}",
                    ctx.seed
                );
                Ok((CaseResult::new(&case_id, inputs, lhs, 0.0, ineq_tol), warn))
            };
            work().unwrap_or_else(|e| {
                (CaseResult::errored(&case_id, "random mixture", &e.to_string()), false)
            })
        })
        .collect();
    for (case, warn) in cases {
        boundary_warnings += warn as u64;
        report.push_case(case);
    }
    report.diag("boundary_warnings", boundary_warnings);

    // Extremal: P(f) = (n/2)∫ln|ξ||f̂|² − ∫ln|f| f² at f = u_1/‖u_1‖. The
    // Fourier side comes from the energy identity ∫(L_Δu)u = ∫2 ln|ξ| |û|²
    // (a grid transform of the slowly decaying bubble would periodize badly).
    let case = (|| -> Result<CaseResult, Error> {
        let u = Field::bubble(ctx.n, 1.0, vec![0.0; ctx.n])?;
        let energy = integrate_functional(FunctionalKind::Energy, &u, &ctx.quad)?;
        let entropy = integrate_functional(FunctionalKind::Entropy, &u, &ctx.quad)?;
        let l2 = integrate_functional(FunctionalKind::L2Sq, &u, &ctx.quad)?;
        let p = nf / 4.0 * energy.value / l2.value - entropy.value / l2.value
            + 0.5 * l2.value.ln();
        let lhs = ctx.perturb.shift(p);
        report.diag("extremal_error_budget", energy.error / 4.0 / l2.value + entropy.error);
        // Flagged, never pass/fail: the gap between the extremal value and
        // the printed B_n closed form (expected (n/2)·ln 2).
        report.diag("gap_to_printed_Bn", p - tab.b_n_printed);
        report.diag("gap_expected", nf / 2.0 * std::f64::consts::LN_2);
        Ok(CaseResult::new(
            "extremal",
            format!("P(u_1/‖u_1‖) vs ln Λ_{}", ctx.n),
            lhs,
            tab.ln_lambda_n,
            tol,
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("extremal", "normalized bubble", &e.to_string()));
    report.push_case(case);
    Ok(report.finish(started))
}

/// Algebraic asymptotics of the bubble family: the |x|^{−n} decay limit, the
/// inversion identity, and the center-value × decay-coefficient product β_n².
pub fn check_asymptotics(ctx: &SuiteContext, t_list: &[f64]) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let tol = ctx.tol_for(SuiteId::Asymptotics);
    let mut report = base_report(
        SuiteId::Asymptotics,
        "bubble asymptotics: |x|^n u → β_n t^{n/2}, inversion closure, u(x̃)·u_∞ = β_n²",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let beta = specfun::constants_table(ctx.n as u32)?.beta_n;
    let far = 1e6;
    for &t in t_list {
        let center = vec![0.3; ctx.n];
        let u = Field::bubble(ctx.n, t, center.clone())?;
        // (1) Decay limit at |x − x̃| = 10⁶.
        let mut xfar = center.clone();
        xfar[0] += far;
        let w_inf = far.powf(nf) * u.eval(&xfar);
        report.push_case(CaseResult::new(
            format!("t={t}/decay"),
            format!("t={t}, |x|^n u at |x−x̃|=1e6 vs β_n t^(n/2)"),
            ctx.perturb.shift(w_inf),
            beta * t.powf(nf / 2.0),
            tol,
        ));
        // (2) Inversion: u(t·x + x̃) = |x|^{−n} u(t·x/|x|² + x̃).
        for (i, &r) in [0.7, -1.3, 2.4].iter().enumerate() {
            let x = axis_point(ctx.n, r);
            let norm_sq: f64 = x.iter().map(|v| v * v).sum();
            let arg1: Vec<f64> = x.iter().zip(&center).map(|(v, c)| t * v + c).collect();
            let arg2: Vec<f64> =
                x.iter().zip(&center).map(|(v, c)| t * v / norm_sq + c).collect();
            let lhs = ctx.perturb.shift(u.eval(&arg1));
            let rhs = norm_sq.powf(-nf / 2.0) * u.eval(&arg2);
            report.push_case(CaseResult::new(
                format!("t={t}/inversion-{i}"),
                format!("t={t}, x={r}"),
                lhs,
                rhs,
                tol,
            ));
        }
        // (3) Product: u_t(x̃) · lim |x|^n u_t = β_n².
        report.push_case(CaseResult::new(
            format!("t={t}/product"),
            format!("t={t}, center value × decay coefficient"),
            ctx.perturb.shift(u.eval(&center) * w_inf),
            beta * beta,
            tol,
        ));
    }
    Ok(report.finish(started))
}

/// Small-s expansion rates: the constant expansion b_{n,s} = β_n + s·b_{n,1}
/// + O(s²) and the operator expansion (−Δ)^s = id + s·L_Δ + o(s) on two
/// families.
pub fn check_expansion(ctx: &SuiteContext, tol: f64) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Expansion,
        "first-order s-expansions: constants at rate s², operator families at their stated rates",
        ctx,
        tol,
    );
    let n = ctx.n as u32;
    let nf = ctx.n as f64;
    let offset = match ctx.perturb {
        Perturbation::Offset(e) => e,
        _ => 0.0,
    };

    // (1) Constant expansion: residual of b_{n,s} against β_n + s·b₁ decays
    // like s² (slope 2).
    let case = (|| -> Result<CaseResult, Error> {
        let bexp = specfun::b_expansion(n)?;
        let residuals: Vec<(f64, f64)> = [0.1, 0.05, 0.025, 0.0125]
            .iter()
            .map(|&s| {
                let predicted = bexp.b0 + s * bexp.b1_empirical;
                Ok((s, (specfun::b_ns_analytic(n, s)? - predicted).abs() + offset))
            })
            .collect::<Result<_, Error>>()?;
        report.diag("b1_gap_to_printed", bexp.gap);
        Ok(CaseResult::new(
            "b-slope",
            "residual slope of b_{n,s} − (β_n + s·b₁)",
            fit_loglog_slope(&residuals),
            2.0,
            tol,
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("b-slope", "constant expansion", &e.to_string()));
    report.push_case(case);

    // (2) The empirically measured b₁ against its closed form −(ln2+ψ(n/2))β_n.
    let case = (|| -> Result<CaseResult, Error> {
        let bexp = specfun::b_expansion(n)?;
        let closed = -(specfun::LN_2 + specfun::digamma(nf / 2.0)?)
            * specfun::constants_table(n)?.beta_n;
        Ok(CaseResult::new(
            "b1-empirical",
            "central-difference b₁ vs closed form",
            ctx.perturb.shift(bexp.b1_empirical),
            closed,
            1e-4,
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("b1-empirical", "b expansion", &e.to_string()));
    report.push_case(case);

    // (3) Constant-in-s family u_s = u₀ (Gaussian): the first-order defect
    // ((−Δ)^s u − u)/s − L_Δu vanishes linearly, i.e. E(s)/s has slope 1.
    let case = (|| -> Result<CaseResult, Error> {
        let u0 = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 1.0)?;
        let zero = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 0.0)?;
        let points: Vec<Vec<f64>> =
            [0.0, 0.7, 1.5, 3.0].iter().map(|&r| axis_point(ctx.n, r)).collect();
        let rep = expansion_order(
            |_| u0.scale(1.0),
            &points,
            &[0.2, 0.1, 0.05, 0.025],
            &u0,
            &zero,
            &ctx.quad,
        )?;
        let per_s: Vec<(f64, f64)> =
            rep.errors.iter().map(|&(s, e)| (s, e / s + offset)).collect();
        report.diag(
            "gaussian_family_errors",
            rep.errors.iter().map(|&(s, e)| format!("E({s})={e:.3e}")).collect::<Vec<_>>(),
        );
        Ok(CaseResult::new(
            "gaussian-rate",
            "slope of ((−Δ)^s u − u)/s − L_Δu over s, gaussian",
            fit_loglog_slope(&per_s),
            1.0,
            tol,
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("gaussian-rate", "plain family", &e.to_string()));
    report.push_case(case);

    // (4) The fractional-bubble family with its true first-order correction
    // u₁ = (b₁/β + (2/n)ln β)·u₀ − (2/n)·u₀ ln u₀: second-order rate.
    let case = (|| -> Result<CaseResult, Error> {
        let u0 = Field::bubble(ctx.n, 1.0, vec![0.0; ctx.n])?;
        let bexp = specfun::b_expansion(n)?;
        let beta = bexp.b0;
        let u1 = Field::sum(vec![
            u0.multiply(bexp.b1_empirical / beta + 2.0 / nf * beta.ln()),
            u0.u_log_u().multiply(-2.0 / nf),
        ])?;
        let points: Vec<Vec<f64>> =
            [0.0, 0.5, 1.0, 2.0, 4.0].iter().map(|&r| axis_point(ctx.n, r)).collect();
        let rep = expansion_order(
            |s| Field::frac_bubble(ctx.n, s, 1.0, vec![0.0; ctx.n]),
            &points,
            &[0.1, 0.05, 0.025],
            &u0,
            &u1,
            &ctx.quad,
        )?;
        let shifted: Vec<(f64, f64)> =
            rep.errors.iter().map(|&(s, e)| (s, e + offset)).collect();
        report.diag(
            "bubble_family_errors",
            rep.errors.iter().map(|&(s, e)| format!("E({s})={e:.3e}")).collect::<Vec<_>>(),
        );
        Ok(CaseResult::new(
            "bubble-family-rate",
            "slope of (−Δ)^s u_s − u₀ − s(L_Δu₀ + u₁) over s, fractional bubbles",
            fit_loglog_slope(&shifted),
            2.0,
            tol.max(0.3),
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("bubble-family-rate", "bubble family", &e.to_string()));
    report.push_case(case);
    Ok(report.finish(started))
}

/// Sublinear nonexistence mechanism: for p ∈ (0,1] and u ≥ 0,
/// n(2/(p+1) − 1)∫u^{p+1} + 2∫u² ≥ 2∫u², with equality only at p = 1 or
/// u ≡ 0 — no nonzero field can make the identity's required value 0.
pub fn check_sublinear(
    ctx: &SuiteContext,
    p_list: &[f64],
    tol: f64,
) -> Result<CheckReport, Error> {
    let started = Instant::now();
    let mut report = base_report(
        SuiteId::Sublinear,
        "sublinear functional dominates 2∫u², forcing u ≡ 0 in the identity",
        ctx,
        tol,
    );
    let nf = ctx.n as f64;
    let fields: Vec<(&str, Field)> = vec![
        ("gaussian", Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 1.0)?),
        ("bubble", Field::bubble(ctx.n, 1.0, vec![0.0; ctx.n])?),
    ];
    for &p in p_list {
        for (name, u) in &fields {
            let case_id = format!("p={p}/{name}");
            let inputs = format!("p={p}, field={name}");
            let case = (|| -> Result<CaseResult, Error> {
                let mass =
                    integrate_functional(FunctionalKind::PPow(p + 1.0), u, &ctx.quad)?.value;
                let l2 = integrate_functional(FunctionalKind::L2Sq, u, &ctx.quad)?.value;
                let value = nf * (2.0 / (p + 1.0) - 1.0) * mass + 2.0 * l2;
                if p == 1.0 {
                    // Coefficient vanishes identically: value = 2∫u² exactly.
                    Ok(CaseResult::new(&case_id, &inputs, ctx.perturb.shift(value), 2.0 * l2, 1e-12))
                } else {
                    let lhs = ctx.perturb.shift((value - 2.0 * l2).min(0.0));
                    Ok(CaseResult::new(
                        &case_id,
                        format!("{inputs}, value={value:.6e}, 2∫u²={:.6e}", 2.0 * l2),
                        lhs,
                        0.0,
                        tol,
                    ))
                }
            })()
            .unwrap_or_else(|e| CaseResult::errored(&case_id, &inputs, &e.to_string()));
            report.push_case(case);
        }
    }
    // Closed-form spot check: p = 1/2 Gaussian in n dims,
    // value = (n/3)·(2π/1.5)^{n/2}·(2/(… )) — written via Gaussian moments.
    let case = (|| -> Result<CaseResult, Error> {
        let u = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 1.0)?;
        let mass = integrate_functional(FunctionalKind::PPow(1.5), &u, &ctx.quad)?.value;
        let l2 = integrate_functional(FunctionalKind::L2Sq, &u, &ctx.quad)?.value;
        let value = nf * (2.0 / 1.5 - 1.0) * mass + 2.0 * l2;
        // ∫e^{−q|x|²/2} = (2π/q)^{n/2} with q = 1.5 and q = 2.
        let closed = nf / 3.0 * (2.0 * std::f64::consts::PI / 1.5).powf(nf / 2.0)
            + 2.0 * std::f64::consts::PI.powf(nf / 2.0);
        Ok(CaseResult::new(
            "closed-form/p=0.5",
            "gaussian moments vs quadrature",
            ctx.perturb.shift(value),
            closed,
            1e-8,
        ))
    })()
    .unwrap_or_else(|e| CaseResult::errored("closed-form/p=0.5", "gaussian", &e.to_string()));
    report.push_case(case);
    // The u ≡ 0 degenerate member: every integral vanishes.
    let zero = Field::gaussian(ctx.n, 1.0, vec![0.0; ctx.n], 0.0)?;
    let z = integrate_functional(FunctionalKind::L2Sq, &zero, &ctx.quad)?.value;
    report.push_case(CaseResult::new(
        "zero-field",
        "u ≡ 0 gives value 0",
        ctx.perturb.shift(2.0 * z),
        0.0,
        tol.max(1e-12),
    ));
    Ok(report.finish(started))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx(n: usize) -> SuiteContext {
        SuiteContext::new(n).unwrap()
    }

    #[test]
    fn bubble_suite_passes_in_one_dimension() {
        let report = run_suite(SuiteId::Bubble, &ctx(1)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        assert_eq!(report.cases.len(), 48);
    }

    #[test]
    fn bubble_suite_detects_amplitude_perturbation() {
        let mut c = ctx(1);
        c.perturb = SuiteId::Bubble.documented_perturbation(0.01);
        let report = run_suite(SuiteId::Bubble, &c).unwrap();
        assert!(!report.overall_pass);
    }

    #[test]
    fn scaling_suite_passes() {
        let report = run_suite(SuiteId::Scaling, &ctx(1)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn kelvin_suite_passes() {
        let report = run_suite(SuiteId::Kelvin, &ctx(1)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn commutator_suite_passes_on_both_paths() {
        let report = run_suite(SuiteId::Commutator, &ctx(1)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        assert!(report.cases.iter().any(|c| c.case_id.starts_with("grid/")));
    }

    #[test]
    fn asymptotics_suite_passes() {
        let report = run_suite(SuiteId::Asymptotics, &ctx(2)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn sublinear_suite_passes_and_detects_offset() {
        let report = run_suite(SuiteId::Sublinear, &ctx(1)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
        let mut c = ctx(1);
        c.perturb = SuiteId::Sublinear.documented_perturbation(0.01);
        assert!(!run_suite(SuiteId::Sublinear, &c).unwrap().overall_pass);
    }

    #[test]
    fn suite_runs_are_deterministic() {
        let a = run_suite(SuiteId::Pitt, &ctx(1)).unwrap();
        let b = run_suite(SuiteId::Pitt, &ctx(1)).unwrap();
        for (x, y) in a.cases.iter().zip(&b.cases) {
            assert_eq!(x, y);
        }
    }

    #[test]
    fn pitt_suite_passes_in_one_dimension() {
        let report = run_suite(SuiteId::Pitt, &ctx(1)).unwrap();
        assert!(report.overall_pass, "{:#?}", report.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    }

    #[test]
    fn suite_id_parsing_round_trips() {
        for id in SuiteId::ALL {
            assert_eq!(SuiteId::parse(id.name()).unwrap(), id);
        }
        assert!(SuiteId::parse("nope").is_err());
    }
}
