//! Clamped cubic spline interpolation for functions ingested from sampled CSV
//! data. Endpoint slopes are estimated by one-sided three-point differences.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SplineError {
    #[error("need at least 4 sample points, got {0}")]
    TooFewPoints(usize),
    #[error("sample abscissae must be strictly increasing (violated at index {0})")]
    NonMonotoneAbscissae(usize),
}

/// Piecewise cubic `C^2` interpolant with clamped end conditions.
#[derive(Debug, Clone)]
pub struct CubicSpline {
    xs: Vec<f64>,
    ys: Vec<f64>,
    /// second derivatives at the knots
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn clamped(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self, SplineError> {
        let n = xs.len();
        if n < 4 || ys.len() != n {
            return Err(SplineError::TooFewPoints(n.min(ys.len())));
        }
        for i in 1..n {
            if xs[i] <= xs[i - 1] {
                return Err(SplineError::NonMonotoneAbscissae(i));
            }
        }
        let m = n.min(5);
        let slope_start = stencil_slope(&xs[..m], &ys[..m]);
        let rev_x: Vec<f64> = xs[n - m..].iter().rev().copied().collect();
        let rev_y: Vec<f64> = ys[n - m..].iter().rev().copied().collect();
        let slope_end = stencil_slope(&rev_x, &rev_y);

        // tridiagonal system for knot second derivatives, clamped rows at the ends
        let mut diag = vec![0.0; n];
        let mut upper = vec![0.0; n];
        let mut lower = vec![0.0; n];
        let mut rhs = vec![0.0; n];

        let h0 = xs[1] - xs[0];
        diag[0] = 2.0 * h0;
        upper[0] = h0;
        rhs[0] = 6.0 * ((ys[1] - ys[0]) / h0 - slope_start);

        for i in 1..n - 1 {
            let hm = xs[i] - xs[i - 1];
            let hp = xs[i + 1] - xs[i];
            lower[i] = hm;
            diag[i] = 2.0 * (hm + hp);
            upper[i] = hp;
            rhs[i] = 6.0 * ((ys[i + 1] - ys[i]) / hp - (ys[i] - ys[i - 1]) / hm);
        }

        let hn = xs[n - 1] - xs[n - 2];
        lower[n - 1] = hn;
        diag[n - 1] = 2.0 * hn;
        rhs[n - 1] = 6.0 * (slope_end - (ys[n - 1] - ys[n - 2]) / hn);

        // Thomas algorithm
        for i in 1..n {
            let w = lower[i] / diag[i - 1];
            diag[i] -= w * upper[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        let mut m = vec![0.0; n];
        m[n - 1] = rhs[n - 1] / diag[n - 1];
        for i in (0..n - 1).rev() {
            m[i] = (rhs[i] - upper[i] * m[i + 1]) / diag[i];
        }

        Ok(Self { xs, ys, m })
    }

    fn segment(&self, x: f64) -> usize {
        let n = self.xs.len();
        match self.xs.binary_search_by(|p| p.partial_cmp(&x).unwrap()) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.clamp(1, n - 1) - 1,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.ys[i]
            + b * self.ys[i + 1]
            + ((a * a * a - a) * self.m[i] + (b * b * b - b) * self.m[i + 1]) * h * h / 6.0
    }

    pub fn deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        (self.ys[i + 1] - self.ys[i]) / h
            + ((3.0 * b * b - 1.0) * self.m[i + 1] - (3.0 * a * a - 1.0) * self.m[i]) * h / 6.0
    }

    pub fn second_deriv(&self, x: f64) -> f64 {
        let i = self.segment(x);
        let h = self.xs[i + 1] - self.xs[i];
        let a = (self.xs[i + 1] - x) / h;
        let b = (x - self.xs[i]) / h;
        a * self.m[i] + b * self.m[i + 1]
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.xs[0], *self.xs.last().unwrap())
    }
}

/// Derivative at `xs[0]` of the Newton interpolating polynomial through the
/// stencil points (one-sided, handles non-uniform spacing).
fn stencil_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let m = xs.len();
    let mut dd: Vec<f64> = ys.to_vec();
    let mut coeffs = vec![dd[0]];
    for order in 1..m {
        for i in 0..m - order {
            dd[i] = (dd[i + 1] - dd[i]) / (xs[i + order] - xs[i]);
        }
        coeffs.push(dd[0]);
    }
    // p'(x0) = c1 + c2 (x0-x1) + c3 (x0-x1)(x0-x2) + ...
    let mut slope = 0.0;
    let mut product = 1.0;
    for (order, &c) in coeffs.iter().enumerate().skip(1) {
        slope += c * product;
        product *= xs[0] - xs[order];
    }
    slope
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::TWO_PI;

    #[test]
    fn interpolates_sine_to_spline_accuracy() {
        let n = 1001;
        let xs: Vec<f64> = (0..n).map(|i| i as f64 * TWO_PI / (n - 1) as f64).collect();
        let ys: Vec<f64> = xs.iter().map(|&x| x.sin()).collect();
        let s = CubicSpline::clamped(xs, ys).unwrap();
        let mut worst = 0.0f64;
        let mut worst_d = 0.0f64;
        for k in 0..5000 {
            let x = k as f64 * TWO_PI / 4999.0;
            worst = worst.max((s.eval(x) - x.sin()).abs());
            worst_d = worst_d.max((s.deriv(x) - x.cos()).abs());
        }
        assert!(worst < 1e-9, "sup error {worst}");
        assert!(worst_d < 1e-6, "sup derivative error {worst_d}");
    }

    #[test]
    fn rejects_non_monotone_input() {
        let r = CubicSpline::clamped(vec![0.0, 1.0, 0.5, 2.0], vec![0.0; 4]);
        assert!(matches!(r, Err(SplineError::NonMonotoneAbscissae(2))));
    }

    #[test]
    fn rejects_too_few_points() {
        let r = CubicSpline::clamped(vec![0.0, 1.0], vec![0.0, 1.0]);
        assert!(matches!(r, Err(SplineError::TooFewPoints(2))));
    }
}
