//! Named boundary data and function corpora used by the CLI and the
//! verification harness. All boundary presets vanish at both ends of the
//! period interval.

use crate::quad::{Interval, ScalarFunction1D, Smoothness, TWO_PI};

/// `x sin x`: the datum whose dual spectrum is a single unit sine coefficient.
pub fn xsinx() -> ScalarFunction1D {
    ScalarFunction1D::new("xsinx", Interval::period(), Smoothness::CInf, |x| x * x.sin())
        .with_derivative(|x| x.sin() + x * x.cos())
        .with_second_derivative(|x| 2.0 * x.cos() - x * x.sin())
}

/// `sin x`: full dual spectrum with quadratic cosine decay.
pub fn sinx() -> ScalarFunction1D {
    ScalarFunction1D::new("sinx", Interval::period(), Smoothness::CInf, |x| x.sin())
        .with_derivative(|x| x.cos())
        .with_second_derivative(|x| -x.sin())
}

/// `x(2π−x)(π−x)`: odd-symmetric cubic about the midpoint.
pub fn poly() -> ScalarFunction1D {
    ScalarFunction1D::new("poly", Interval::period(), Smoothness::CInf, |x| {
        x * (TWO_PI - x) * (std::f64::consts::PI - x)
    })
    .with_derivative(|x| 2.0 * std::f64::consts::PI.powi(2) - 6.0 * std::f64::consts::PI * x + 3.0 * x * x)
    .with_second_derivative(|x| 6.0 * x - 6.0 * std::f64::consts::PI)
}

/// `x sin(kx)`: unit dual spectrum concentrated at mode `k`.
pub fn xsin_mode(k: usize) -> ScalarFunction1D {
    let kf = k as f64;
    ScalarFunction1D::new(
        format!("xsin{k}x"),
        Interval::period(),
        Smoothness::CInf,
        move |x| x * (kf * x).sin(),
    )
    .with_derivative(move |x| (kf * x).sin() + kf * x * (kf * x).cos())
    .with_second_derivative(move |x| 2.0 * kf * (kf * x).cos() - kf * kf * x * (kf * x).sin())
}

fn sin_mode(k: usize) -> ScalarFunction1D {
    let kf = k as f64;
    ScalarFunction1D::new(
        format!("sin{k}x"),
        Interval::period(),
        Smoothness::CInf,
        move |x| (kf * x).sin(),
    )
    .with_derivative(move |x| kf * (kf * x).cos())
    .with_second_derivative(move |x| -kf * kf * (kf * x).sin())
}

/// Look up a boundary preset by its CLI name.
pub fn boundary_preset(name: &str) -> Option<ScalarFunction1D> {
    match name {
        "xsinx" => Some(xsinx()),
        "sinx" => Some(sinx()),
        "poly" => Some(poly()),
        _ => None,
    }
}

/// The three named presets.
pub fn boundary_presets() -> Vec<ScalarFunction1D> {
    vec![xsinx(), sinx(), poly()]
}

/// Ten boundary data with vanishing leading dual coefficient.
///
/// The leading dual coefficient multiplies the y-constant mode of the strip
/// solution, whose mixed norm grows linearly with the strip height; data with
/// that coefficient zero make height-ladder norm ratios converge. `x sin kx`
/// has a unit spectrum at mode k, and a combination `Σ c_k sin kx` has zero
/// leading coefficient exactly when `Σ c_k / k = 0`.
pub fn norm_estimate_corpus() -> Vec<ScalarFunction1D> {
    let mut corpus = vec![xsin_mode(1), xsin_mode(2), xsin_mode(3)];
    corpus.push(ScalarFunction1D::linear_combination(
        "xsinx+0.5xsin3x",
        1.0,
        &xsin_mode(1),
        0.5,
        &xsin_mode(3),
    ));
    corpus.push(ScalarFunction1D::linear_combination(
        "sinx-2sin2x",
        1.0,
        &sin_mode(1),
        -2.0,
        &sin_mode(2),
    ));
    corpus.push(ScalarFunction1D::linear_combination(
        "sinx-3sin3x",
        1.0,
        &sin_mode(1),
        -3.0,
        &sin_mode(3),
    ));
    corpus.push(ScalarFunction1D::linear_combination(
        "sin2x-1.5sin3x",
        1.0,
        &sin_mode(2),
        -1.5,
        &sin_mode(3),
    ));
    let s12 = ScalarFunction1D::linear_combination("sinx+sin2x", 1.0, &sin_mode(1), 1.0, &sin_mode(2));
    corpus.push(ScalarFunction1D::linear_combination(
        "sinx+sin2x-4.5sin3x",
        1.0,
        &s12,
        -4.5,
        &sin_mode(3),
    ));
    corpus.push(ScalarFunction1D::linear_combination(
        "xsinx-xsin2x",
        1.0,
        &xsin_mode(1),
        -1.0,
        &xsin_mode(2),
    ));
    // poly has leading dual coefficient 2π³/15; sin x has 1/π — cancel them
    let correction = 2.0 * std::f64::consts::PI.powi(4) / 15.0;
    corpus.push(ScalarFunction1D::linear_combination(
        "poly-corrected",
        1.0,
        &poly(),
        -correction,
        &sin_mode(1),
    ));
    corpus
}

/// Smooth data vanishing at both endpoints, for projector and convergence scans.
pub fn smooth_corpus() -> Vec<ScalarFunction1D> {
    let mut corpus = boundary_presets();
    corpus.push(xsin_mode(2));
    corpus.push(ScalarFunction1D::linear_combination(
        "sinx+0.25sin4x",
        1.0,
        &sin_mode(1),
        0.25,
        &sin_mode(4),
    ));
    corpus.push(ScalarFunction1D::new(
        "sin2half",
        Interval::period(),
        Smoothness::CInf,
        |x| (x / 2.0).sin().powi(2) * x.sin(),
    ));
    corpus
}

/// Twenty-plus smooth functions for projector-norm scans.
pub fn projector_scan_corpus() -> Vec<ScalarFunction1D> {
    let mut corpus = smooth_corpus();
    corpus.extend(norm_estimate_corpus());
    corpus.extend(band_limited_corpus());
    corpus
}

/// Band-limited functions (finite raw trigonometric spectra).
pub fn band_limited_corpus() -> Vec<ScalarFunction1D> {
    let cos_mode = |k: usize| {
        let kf = k as f64;
        ScalarFunction1D::new(
            format!("cos{k}x"),
            Interval::period(),
            Smoothness::CInf,
            move |x| (kf * x).cos(),
        )
    };
    vec![
        sin_mode(1),
        sin_mode(3),
        ScalarFunction1D::linear_combination("sinx-0.5cos2x", 1.0, &sin_mode(1), -0.5, &cos_mode(2)),
        ScalarFunction1D::linear_combination("1+cosx", 1.0, &cos_mode(0), 1.0, &cos_mode(1)),
        ScalarFunction1D::linear_combination("sin2x+2cos5x", 1.0, &sin_mode(2), 2.0, &cos_mode(5)),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_vanish_at_both_ends() {
        for f in boundary_presets() {
            assert!(f.eval(0.0).abs() <= 1e-12, "{} at 0", f.name());
            assert!(f.eval(TWO_PI).abs() <= 1e-12, "{} at 2pi", f.name());
        }
    }

    #[test]
    fn corpus_has_ten_members() {
        assert_eq!(norm_estimate_corpus().len(), 10);
    }

    #[test]
    fn unknown_preset_is_none() {
        assert!(boundary_preset("nope").is_none());
    }
}
