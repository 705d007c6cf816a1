//! Truncated series solution of the non-local problem on the half-strip:
//! dual coefficients of the boundary datum propagated in y by decaying
//! exponentials, with a linear-growth multiplier on the cosine branch.
//!
//! Only decaying exponential branches are ever constructed; bounded behavior
//! at large y holds by construction.

use thiserror::Error;

use crate::basis::{self, BasisError, BiorthoSpectrum, TrigRecurrence};
use crate::quad::{fd_laplacian_max, Field2D, Grid2D, ScalarFunction1D, TWO_PI};

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("flux datum must vanish identically (max |h| = {0:e} at sampled points)")]
    NonzeroH(f64),
    #[error("boundary datum must vanish at both ends: |f({at})| = {value:e}")]
    BadBoundary { at: f64, value: f64 },
    #[error("growth-multiplier calibration inconclusive (residuals {0:e} and {1:e})")]
    Inconclusive(f64, f64),
    #[error(transparent)]
    Basis(#[from] BasisError),
}

/// Boundary data for the strip problem. The side-flux datum `h` is carried
/// for the weak-form checker; the series solver requires it to vanish.
#[derive(Clone, Debug)]
pub struct BoundaryDatum {
    pub f: ScalarFunction1D,
    pub h: Option<ScalarFunction1D>,
}

impl BoundaryDatum {
    pub fn new(f: ScalarFunction1D) -> Self {
        Self { f, h: None }
    }

    pub fn with_flux(mut self, h: ScalarFunction1D) -> Self {
        self.h = Some(h);
        self
    }
}

/// Extra modes computed past the truncation order to estimate the dropped
/// tail's quadratic decay constant.
const TAIL_PROBE_BAND: usize = 16;
/// Coefficients below this are treated as exact zeros of a finite spectrum.
const COEFF_FLOOR: f64 = 1e-12;

/// Truncated series solution on the strip.
#[derive(Clone, Debug)]
pub struct StripSolution {
    spectrum: BiorthoSpectrum,
    lambda: f64,
    f_ref: String,
    tail_decay_c: f64,
}

#[derive(Clone, Copy)]
enum Component {
    U,
    Ux,
    Uy,
    Uxx,
    Uyy,
    Uxy,
}

impl StripSolution {
    pub fn spectrum(&self) -> &BiorthoSpectrum {
        &self.spectrum
    }

    pub fn modes(&self) -> usize {
        self.spectrum.modes()
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn f_ref(&self) -> &str {
        &self.f_ref
    }

    pub fn tail_decay_constant(&self) -> f64 {
        self.tail_decay_c
    }

    /// Rebuild from stored data (deserialized solutions carry no tail probe).
    pub fn from_parts(spectrum: BiorthoSpectrum, lambda: f64, tail_decay_c: f64) -> Self {
        let f_ref = spectrum.source.clone();
        Self {
            spectrum,
            lambda,
            f_ref,
            tail_decay_c,
        }
    }

    fn eval_component(&self, x: f64, y: f64, comp: Component) -> f64 {
        let lam = self.lambda;
        let mut acc = match comp {
            Component::U => self.spectrum.a0c,
            _ => 0.0,
        };
        let ey = (-y).exp();
        let mut e = 1.0;
        let mut trig = TrigRecurrence::new(x);
        for k in 0..self.spectrum.modes() {
            let nf = (k + 1) as f64;
            e *= ey;
            let (c, s) = trig.next_mode();
            let ac = self.spectrum.ac[k];
            let as_ = self.spectrum.as_[k];
            let big_a = (ac + lam * y * as_) * e;
            let big_b = as_ * e;
            acc += match comp {
                Component::U => big_a * c + big_b * (x * s),
                Component::Ux => (big_b - nf * big_a) * s + nf * big_b * (x * c),
                Component::Uy => {
                    let a1 = (lam * as_ - nf * ac - nf * lam * y * as_) * e;
                    a1 * c + (-nf * big_b) * (x * s)
                }
                Component::Uxx => {
                    (2.0 * nf * big_b - nf * nf * big_a) * c - nf * nf * big_b * (x * s)
                }
                Component::Uyy => {
                    let a2 = (nf * nf * ac - 2.0 * nf * lam * as_ + nf * nf * lam * y * as_) * e;
                    a2 * c + nf * nf * big_b * (x * s)
                }
                Component::Uxy => {
                    let a1 = (lam * as_ - nf * ac - nf * lam * y * as_) * e;
                    let b1 = -nf * big_b;
                    (b1 - nf * a1) * s + nf * b1 * (x * c)
                }
            };
        }
        acc
    }

    pub fn eval_u(&self, x: f64, y: f64) -> f64 {
        self.eval_component(x, y, Component::U)
    }

    pub fn eval_ux(&self, x: f64, y: f64) -> f64 {
        self.eval_component(x, y, Component::Ux)
    }

    pub fn eval_uy(&self, x: f64, y: f64) -> f64 {
        self.eval_component(x, y, Component::Uy)
    }

    pub fn eval_uxx(&self, x: f64, y: f64) -> f64 {
        self.eval_component(x, y, Component::Uxx)
    }

    pub fn eval_uyy(&self, x: f64, y: f64) -> f64 {
        self.eval_component(x, y, Component::Uyy)
    }

    pub fn eval_uxy(&self, x: f64, y: f64) -> f64 {
        self.eval_component(x, y, Component::Uxy)
    }

    /// Residuals of the per-mode y-direction boundary-value problems at the
    /// sampled heights: the sine branch against `w'' = n² w`, the cosine
    /// branch against `w'' = n² w − 2λ n u_n^s` (the form consistent with a
    /// vanishing field Laplacian).
    pub fn mode_ode_residual(&self, n: usize, y_samples: &[f64]) -> (f64, f64) {
        assert!(n >= 1 && n <= self.modes());
        let nf = n as f64;
        let (ac, as_) = (self.spectrum.ac[n - 1], self.spectrum.as_[n - 1]);
        let lam = self.lambda;
        let mut res_s = 0.0f64;
        let mut res_c = 0.0f64;
        for &y in y_samples {
            let e = (-nf * y).exp();
            let u_s = as_ * e;
            let d2_s = nf * nf * as_ * e;
            res_s = res_s.max((d2_s - nf * nf * u_s).abs());
            let u_c = (ac + lam * y * as_) * e;
            let d2_c = (nf * nf * ac - 2.0 * nf * lam * as_ + nf * nf * lam * y * as_) * e;
            res_c = res_c.max((d2_c - nf * nf * u_c + 2.0 * lam * nf * u_s).abs());
        }
        (res_s, res_c)
    }

    /// Cosine-branch residual against the literal forcing `−n u_n^s`; for a
    /// construction with λ ≠ ½ this is nonzero and quantifies the mismatch
    /// between that forcing and a harmonic field.
    pub fn mode_ode_residual_literal(&self, n: usize, y_samples: &[f64]) -> f64 {
        assert!(n >= 1 && n <= self.modes());
        let nf = n as f64;
        let (ac, as_) = (self.spectrum.ac[n - 1], self.spectrum.as_[n - 1]);
        let lam = self.lambda;
        let mut res = 0.0f64;
        for &y in y_samples {
            let e = (-nf * y).exp();
            let u_s = as_ * e;
            let u_c = (ac + lam * y * as_) * e;
            let d2_c = (nf * nf * ac - 2.0 * nf * lam * as_ + nf * nf * lam * y * as_) * e;
            res = res.max((d2_c - nf * nf * u_c + nf * u_s).abs());
        }
        res
    }

    /// Upper bound on the dropped series tail at height `y`, from the probed
    /// quadratic decay constant of the coefficients.
    pub fn tail_estimate(&self, y: f64) -> f64 {
        tail_bound(self.tail_decay_c, self.modes(), y, self.lambda)
    }
}

impl Field2D for StripSolution {
    fn u(&self, x: f64, y: f64) -> f64 {
        self.eval_u(x, y)
    }
    fn ux(&self, x: f64, y: f64) -> f64 {
        self.eval_ux(x, y)
    }
    fn uy(&self, x: f64, y: f64) -> f64 {
        self.eval_uy(x, y)
    }
    fn uxx(&self, x: f64, y: f64) -> f64 {
        self.eval_uxx(x, y)
    }
    fn uyy(&self, x: f64, y: f64) -> f64 {
        self.eval_uyy(x, y)
    }
    fn uxy(&self, x: f64, y: f64) -> f64 {
        self.eval_uxy(x, y)
    }
}

/// Tail bound for coefficients obeying `|a_n| ≤ c/n²` past the truncation:
/// at `y = 0` the mode factors are bounded by `1 + 2π` and the mode sum by
/// `1/N`; for `y > 0` each mode contracts by `e^{-ny}` and the sum is
/// dominated by a geometric series.
pub fn tail_bound(c: f64, n_trunc: usize, y: f64, lambda: f64) -> f64 {
    if c == 0.0 {
        return 0.0;
    }
    let n = n_trunc as f64;
    if y <= 0.0 {
        return c * (1.0 + TWO_PI) / n;
    }
    let n1 = n + 1.0;
    c * (1.0 + lambda.abs() * y + TWO_PI) * (-n1 * y).exp() / (n1 * n1 * (1.0 - (-y).exp()))
}

fn check_boundary(f: &ScalarFunction1D) -> Result<(), SolverError> {
    for at in [0.0, TWO_PI] {
        let value = f.eval(at).abs();
        if value > 1e-12 {
            return Err(SolverError::BadBoundary { at, value });
        }
    }
    Ok(())
}

fn check_flux_vanishes(datum: &BoundaryDatum) -> Result<(), SolverError> {
    if let Some(h) = &datum.h {
        let mut worst = 0.0f64;
        for k in 0..64 {
            let y = 1e-3 * (16.0f64 / 1e-3).powf(k as f64 / 63.0);
            worst = worst.max(h.eval(y).abs());
        }
        if worst > 1e-14 {
            return Err(SolverError::NonzeroH(worst));
        }
    }
    Ok(())
}

/// Build the truncated series solution for a vanishing side flux.
pub fn solve(datum: &BoundaryDatum, n: usize, lambda: f64, tol: f64) -> Result<StripSolution, SolverError> {
    assert!(n >= 1, "need at least one mode");
    assert!(lambda.is_finite());
    check_flux_vanishes(datum)?;
    check_boundary(&datum.f)?;
    let extended = basis::biortho_coefficients(&datum.f, n + TAIL_PROBE_BAND, tol)?;
    let mut tail_decay_c = 0.0f64;
    for k in n..n + TAIL_PROBE_BAND {
        let nf2 = ((k + 1) * (k + 1)) as f64;
        for coeff in [extended.ac[k], extended.as_[k]] {
            if coeff.abs() > COEFF_FLOOR {
                tail_decay_c = tail_decay_c.max(nf2 * coeff.abs());
            }
        }
    }
    Ok(StripSolution {
        spectrum: extended.truncated(n),
        lambda,
        f_ref: datum.f.name().to_string(),
        tail_decay_c,
    })
}

/// Outcome of the growth-multiplier calibration.
#[derive(Clone, Debug)]
pub struct LambdaCalibration {
    pub lambda: f64,
    /// candidate multiplier and its max finite-difference Laplacian residual
    pub residuals: Vec<(f64, f64)>,
}

/// Number of modes used by the calibration solves.
const CALIBRATION_MODES: usize = 16;

/// Grid on which the multiplier calibration separates cleanly. The y-window
/// starts away from the boundary: near y = 0 the stencil truncation error of
/// unresolved high modes can drown the residual the calibration compares.
pub fn calibration_grid() -> Grid2D {
    let x = crate::quad::Grid1D::uniform(0.0, TWO_PI, 65).expect("static grid");
    let y = crate::quad::Grid1D::uniform(0.5, 2.5, 33).expect("static grid");
    Grid2D::new(x, y)
}

/// Pick the growth multiplier from `{½, 1}` by the finite-difference
/// Laplacian residual of the resulting field over the grid interior. The
/// stencil sees only point values of `u`, so the verdict is independent of
/// the termwise derivative formulas.
pub fn calibrate_lambda(datum: &BoundaryDatum, grid: &Grid2D) -> Result<LambdaCalibration, SolverError> {
    let mut residuals = Vec::with_capacity(2);
    for lam in [0.5, 1.0] {
        let sol = solve(datum, CALIBRATION_MODES, lam, 1e-10)?;
        let r = fd_laplacian_max(|x, y| sol.eval_u(x, y), grid);
        residuals.push((lam, r));
    }
    let (r_half, r_one) = (residuals[0].1, residuals[1].1);
    if r_half.max(r_one) < 1e-13 {
        return Err(SolverError::Inconclusive(r_half, r_one));
    }
    let ratio = r_half.max(r_one) / r_half.min(r_one).max(1e-300);
    if ratio < 10.0 {
        return Err(SolverError::Inconclusive(r_half, r_one));
    }
    let lambda = if r_one < r_half { 1.0 } else { 0.5 };
    Ok(LambdaCalibration { lambda, residuals })
}
