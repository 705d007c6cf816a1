//! Residual-based verification: pointwise Laplacian residuals, the integral
//! identity against a battery of product test functions, boundary structure,
//! trace behavior, and strip-to-boundary norm ratios.

use rayon::prelude::*;
use thiserror::Error;

use crate::quad::{
    fd_laplacian_max, integrate, Field2D, Grid1D, Grid2D, Interval, QuadError, ScalarFunction1D,
    Smoothness, TWO_PI,
};
use crate::solver::{solve, BoundaryDatum, SolverError, StripSolution};
use crate::weights::{
    strip_norm, weighted_lp_norm_j, weighted_w1p_norm_j, NormKind, Weight, WeightError,
    WeightedNormSpec,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Weight(#[from] WeightError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// A product test function `φ(x, y) = η(x) ψ(y)` with `η(2π) = 0` and `ψ`
/// supported in `(0, ξ_φ)`.
#[derive(Clone, Debug)]
pub struct TestFunction {
    pub eta: ScalarFunction1D,
    pub psi: ScalarFunction1D,
    pub xi: f64,
    pub label: String,
}

impl TestFunction {
    pub fn new(eta: ScalarFunction1D, psi: ScalarFunction1D, xi: f64) -> Self {
        debug_assert!(eta.eval(TWO_PI).abs() <= 1e-12, "eta must vanish at 2π");
        debug_assert!(psi.eval(xi).abs() <= 1e-12, "psi must vanish at its support bound");
        let label = format!("{}*{}", eta.name(), psi.name());
        Self { eta, psi, xi, label }
    }

    pub fn phi(&self, x: f64, y: f64) -> f64 {
        self.eta.eval(x) * self.psi.eval(y)
    }

    pub fn phi_x(&self, x: f64, y: f64) -> f64 {
        self.eta.derivative(x).expect("eta derivative") * self.psi.eval(y)
    }

    pub fn phi_y(&self, x: f64, y: f64) -> f64 {
        self.eta.eval(x) * self.psi.derivative(y).expect("psi derivative")
    }
}

/// Smooth bump supported on `(0, ξ)`: `exp(-1/(1-t²))` in the rescaled
/// variable, zero outside, with all derivatives vanishing at the support ends.
pub fn bump(xi: f64) -> ScalarFunction1D {
    assert!(xi > 0.0);
    let value = move |y: f64| {
        let t = 2.0 * y / xi - 1.0;
        if t.abs() >= 1.0 {
            0.0
        } else {
            (-1.0 / (1.0 - t * t)).exp()
        }
    };
    let deriv = move |y: f64| {
        let t = 2.0 * y / xi - 1.0;
        if t.abs() >= 1.0 {
            0.0
        } else {
            let w = 1.0 - t * t;
            (-1.0 / w).exp() * (-2.0 * t / (w * w)) * (2.0 / xi)
        }
    };
    ScalarFunction1D::new(format!("bump(0,{xi})"), Interval::new(0.0, xi), Smoothness::CInf, value)
        .with_derivative(deriv)
}

fn sine_eta(k: usize) -> ScalarFunction1D {
    let kf = k as f64;
    ScalarFunction1D::new(
        format!("sin{k}x"),
        Interval::period(),
        Smoothness::CInf,
        move |x| (kf * x).sin(),
    )
    .with_derivative(move |x| kf * (kf * x).cos())
}

fn weighted_cosine_eta(k: usize) -> ScalarFunction1D {
    let kf = k as f64;
    ScalarFunction1D::new(
        format!("x(2pi-x)cos{k}x"),
        Interval::period(),
        Smoothness::CInf,
        move |x| x * (TWO_PI - x) * (kf * x).cos(),
    )
    .with_derivative(move |x| {
        (TWO_PI - 2.0 * x) * (kf * x).cos() - kf * x * (TWO_PI - x) * (kf * x).sin()
    })
}

/// The standard sixteen-member battery: sine factors of order 1..=8 and
/// endpoint-weighted cosine factors of order 0..=7, each times a smooth bump.
pub fn standard_battery(xi: f64) -> Vec<TestFunction> {
    let psi = bump(xi);
    let mut out = Vec::with_capacity(16);
    for k in 1..=8 {
        out.push(TestFunction::new(sine_eta(k), psi.clone(), xi));
    }
    for k in 0..8 {
        out.push(TestFunction::new(weighted_cosine_eta(k), psi.clone(), xi));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LaplacianMode {
    Analytic,
    FiniteDifference,
}

#[derive(Clone, Copy, Debug)]
pub struct LaplacianResidual {
    pub max_res: f64,
    /// observed convergence order under one grid refinement (finite
    /// differences only)
    pub order: Option<f64>,
}

/// Grid on `[0, 2π] × [y_min, ξ]`; keeping the bottom row off the boundary
/// avoids the slowest-converging second-derivative tails.
pub fn verification_grid(n_x: usize, n_y: usize, y_min: f64, xi: f64) -> Grid2D {
    let x = Grid1D::uniform(0.0, TWO_PI, n_x).expect("verification grid x");
    let y = Grid1D::uniform(y_min, xi, n_y).expect("verification grid y");
    Grid2D::new(x, y)
}

/// Max Laplacian residual over the grid: termwise second derivatives in
/// analytic mode, 5-point stencil at two resolutions in finite-difference
/// mode (the stencil sees only point values of the field).
pub fn laplacian_residual(field: &dyn Field2D, grid: &Grid2D, mode: LaplacianMode) -> LaplacianResidual {
    match mode {
        LaplacianMode::Analytic => {
            let mut worst = 0.0f64;
            for &y in grid.y().points() {
                for &x in grid.x().points() {
                    worst = worst.max((field.uxx(x, y) + field.uyy(x, y)).abs());
                }
            }
            LaplacianResidual {
                max_res: worst,
                order: None,
            }
        }
        LaplacianMode::FiniteDifference => {
            let coarse = fd_laplacian_max(|x, y| field.u(x, y), grid);
            let fine_grid = Grid2D::new(
                Grid1D::uniform(0.0, grid.x().last(), 2 * (grid.x().len() - 1) + 1).unwrap(),
                Grid1D::uniform(grid.y().first(), grid.y().last(), 2 * (grid.y().len() - 1) + 1).unwrap(),
            );
            let fine = fd_laplacian_max(|x, y| field.u(x, y), &fine_grid);
            LaplacianResidual {
                max_res: fine,
                order: Some((coarse / fine).log2()),
            }
        }
    }
}

/// Absolute value of the integral identity
/// `∬ (u_x φ_x + u_y φ_y) dxdy + ∫ φ(0,y) h(y) dy` for each test function,
/// by iterated quadrature over the test function's support.
pub fn weak_form_residual(
    field: &dyn Field2D,
    h: Option<&ScalarFunction1D>,
    tests: &[TestFunction],
    tol: f64,
) -> Result<Vec<f64>, VerifyError> {
    let results: Result<Vec<f64>, QuadError> = tests
        .par_iter()
        .map(|t| {
            let inner_tol = (tol / (50.0 * t.xi.max(1.0))).max(1e-14);
            let outer = integrate(
                |y| {
                    integrate(
                        |x| field.ux(x, y) * t.phi_x(x, y) + field.uy(x, y) * t.phi_y(x, y),
                        Interval::period(),
                        inner_tol,
                    )
                    .unwrap_or(f64::NAN)
                },
                Interval::new(0.0, t.xi),
                0.5 * tol,
            )?;
            let flux = match h {
                Some(h) => {
                    let eta0 = t.eta.eval(0.0);
                    integrate(|y| eta0 * t.psi.eval(y) * h.eval(y), Interval::new(0.0, t.xi), 0.5 * tol)?
                }
                None => 0.0,
            };
            Ok((outer + flux).abs())
        })
        .collect();
    Ok(results?)
}

/// Boundary structure and trace behavior of a solved field.
#[derive(Clone, Debug)]
pub struct BoundaryReport {
    pub periodicity_max: f64,
    pub ux_at_0_max: f64,
    /// weighted norm of `u(·, 0) − f`
    pub trace_error: f64,
    /// `(y, ‖u(·,y) − f‖)` over the sampled heights, descending y
    pub trace_decay: Vec<(f64, f64)>,
}

pub fn boundary_report(
    sol: &StripSolution,
    f: &ScalarFunction1D,
    y_samples: &[f64],
    w: &Weight,
    p: f64,
    tol: f64,
) -> Result<BoundaryReport, VerifyError> {
    let mut periodicity_max = 0.0f64;
    let mut ux_at_0_max = 0.0f64;
    for &y in y_samples {
        periodicity_max = periodicity_max.max((sol.eval_u(0.0, y) - sol.eval_u(TWO_PI, y)).abs());
        ux_at_0_max = ux_at_0_max.max(sol.eval_ux(0.0, y).abs());
    }
    let diff_at = |y: f64| -> ScalarFunction1D {
        let s = sol.clone();
        let fc = f.clone();
        ScalarFunction1D::new(
            format!("u(.,{y})-f"),
            Interval::period(),
            Smoothness::C2,
            move |x| s.eval_u(x, y) - fc.eval(x),
        )
    };
    let trace_error = weighted_lp_norm_j(&diff_at(0.0), w, p, tol)?;
    let mut trace_decay = Vec::with_capacity(y_samples.len());
    for &y in y_samples {
        trace_decay.push((y, weighted_lp_norm_j(&diff_at(y), w, p, tol)?));
    }
    Ok(BoundaryReport {
        periodicity_max,
        ux_at_0_max,
        trace_error,
        trace_decay,
    })
}

/// Ratio of the strip W^{1,p} mixed norm over the truncated strip to the
/// boundary W^{1,p} norm of the datum; `None` for a vanishing datum.
pub fn norm_estimate_ratio(
    sol: &StripSolution,
    f: &ScalarFunction1D,
    w: &Weight,
    p: f64,
    xi: f64,
    tol: f64,
) -> Result<Option<f64>, VerifyError> {
    let den = weighted_w1p_norm_j(f, w, p, tol)?;
    if den < 1e-14 {
        return Ok(None);
    }
    let spec = WeightedNormSpec {
        p,
        weight: w.clone(),
        kind: NormKind::W1pPiMixed,
    };
    let num = strip_norm(sol, &spec, xi, tol)?;
    Ok(Some(num / den))
}

/// The ratio on a doubling height ladder, exhibiting saturation as the
/// ladder outruns the slowest decaying mode.
pub fn norm_estimate_ladder(
    sol: &StripSolution,
    f: &ScalarFunction1D,
    w: &Weight,
    p: f64,
    heights: &[f64],
    tol: f64,
) -> Result<Vec<(f64, Option<f64>)>, VerifyError> {
    let mut out = Vec::with_capacity(heights.len());
    for &xi in heights {
        out.push((xi, norm_estimate_ratio(sol, f, w, p, xi, tol)?));
    }
    Ok(out)
}

/// Everything a verification run measures, bundled for reporting.
#[derive(Clone, Debug)]
pub struct ResidualReport {
    pub laplacian_max: f64,
    pub laplacian_order: f64,
    pub weak_residuals: Vec<f64>,
    pub ux_at_0_max: f64,
    pub periodicity_max: f64,
    pub trace_error: f64,
    pub trace_decay: Vec<(f64, f64)>,
    pub norm_ratio: Option<f64>,
    pub w2_norm_mixed: f64,
    pub tail_estimate: f64,
    pub lambda_used: f64,
    pub n_modes: usize,
    pub grid: String,
    pub f_name: String,
    pub weight_name: String,
    pub p: f64,
    pub tol: f64,
}

/// Descending dyadic height ladder `1, 1/2, …, 2^-10` for trace decay tables.
pub fn trace_ladder() -> Vec<f64> {
    (0..=10).map(|k| 0.5f64.powi(k)).collect()
}

/// Measurable form of the strong-solution claims: small pointwise Laplacian
/// residual, structural boundary identities, and a finite second-order mixed
/// norm on the truncated strip.
pub fn strong_solution_check(
    sol: &StripSolution,
    f: &ScalarFunction1D,
    w: &Weight,
    p: f64,
    xi: f64,
    grid: &Grid2D,
    tol: f64,
) -> Result<ResidualReport, VerifyError> {
    let analytic = laplacian_residual(sol, grid, LaplacianMode::Analytic);
    let fd = laplacian_residual(sol, grid, LaplacianMode::FiniteDifference);
    let boundary = boundary_report(sol, f, &trace_ladder(), w, p, tol)?;
    let w2 = strip_norm(
        sol,
        &WeightedNormSpec {
            p,
            weight: w.clone(),
            kind: NormKind::W2pPiMixed,
        },
        xi,
        tol,
    )?;
    let ratio = norm_estimate_ratio(sol, f, w, p, xi, tol)?;
    Ok(ResidualReport {
        laplacian_max: analytic.max_res,
        laplacian_order: fd.order.unwrap_or(f64::NAN),
        weak_residuals: Vec::new(),
        ux_at_0_max: boundary.ux_at_0_max,
        periodicity_max: boundary.periodicity_max,
        trace_error: boundary.trace_error,
        trace_decay: boundary.trace_decay,
        norm_ratio: ratio,
        w2_norm_mixed: w2,
        tail_estimate: sol.tail_estimate(grid.y().first()),
        lambda_used: sol.lambda(),
        n_modes: sol.modes(),
        grid: grid.describe(),
        f_name: sol.f_ref().to_string(),
        weight_name: w.descriptor().to_string(),
        p,
        tol,
    })
}

/// Max over the probe points of `|u_{αf1+βf2} − α u_{f1} − β u_{f2}|`.
pub fn superposition_check(
    f1: &BoundaryDatum,
    f2: &BoundaryDatum,
    alpha: f64,
    beta: f64,
    probes: &[(f64, f64)],
    n: usize,
    lambda: f64,
    tol: f64,
) -> Result<f64, VerifyError> {
    let combo = BoundaryDatum::new(ScalarFunction1D::linear_combination(
        format!("{}*{}+{}*{}", alpha, f1.f.name(), beta, f2.f.name()),
        alpha,
        &f1.f,
        beta,
        &f2.f,
    ));
    let s1 = solve(f1, n, lambda, tol)?;
    let s2 = solve(f2, n, lambda, tol)?;
    let sc = solve(&combo, n, lambda, tol)?;
    let mut worst = 0.0f64;
    for &(x, y) in probes {
        worst = worst.max((sc.eval_u(x, y) - alpha * s1.eval_u(x, y) - beta * s2.eval_u(x, y)).abs());
    }
    Ok(worst)
}

/// Fixed 5×5 probe lattice on `[0, 2π] × [0, 3]`.
pub fn probe_lattice() -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(25);
    for i in 0..5 {
        for j in 0..5 {
            out.push((i as f64 * TWO_PI / 4.0, j as f64 * 0.75));
        }
    }
    out
}
