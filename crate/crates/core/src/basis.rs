//! The primal system `{1, cos nx, x sin nx}` and its dual
//! `{(2π−x)/2π², (2π−x)cos nx/π², sin nx/π²}`: coefficients, projectors,
//! raw trigonometric coefficients, coefficient-norm checks, and series
//! synthesis on the period interval.

use rayon::prelude::*;
use thiserror::Error;

use crate::quad::{integrate, Interval, QuadError, ScalarFunction1D, Smoothness, TWO_PI};
use crate::weights::{weighted_lp_norm_j, Weight, WeightError};

const PI: f64 = std::f64::consts::PI;

#[derive(Debug, Error)]
pub enum BasisError {
    #[error("the sine branch has no index 0")]
    InvalidIndex,
    #[error("corpus must be nonempty")]
    EmptyCorpus,
    #[error("corpus function '{0}' has zero norm")]
    ZeroNormCorpusFunction(String),
    #[error(transparent)]
    Quadrature(#[from] QuadError),
    #[error(transparent)]
    Weight(#[from] WeightError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisKind {
    C,
    S,
}

/// Index into either branch of the paired systems. `(S, 0)` is invalid.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BasisIndex {
    pub kind: BasisKind,
    pub n: usize,
}

impl BasisIndex {
    pub fn new(kind: BasisKind, n: usize) -> Result<Self, BasisError> {
        if kind == BasisKind::S && n == 0 {
            return Err(BasisError::InvalidIndex);
        }
        Ok(Self { kind, n })
    }

    /// Interleaved ordering `(C,0), (C,1), (S,1), (C,2), (S,2), …` used by the
    /// Gram matrix; length `2n + 1`.
    pub fn ordered(n: usize) -> Vec<BasisIndex> {
        let mut out = Vec::with_capacity(2 * n + 1);
        out.push(BasisIndex { kind: BasisKind::C, n: 0 });
        for k in 1..=n {
            out.push(BasisIndex { kind: BasisKind::C, n: k });
            out.push(BasisIndex { kind: BasisKind::S, n: k });
        }
        out
    }
}

/// Primal system: `1`, `cos nx`, `x sin nx`.
pub fn eval_primal(idx: BasisIndex, x: f64) -> f64 {
    match (idx.kind, idx.n) {
        (BasisKind::C, 0) => 1.0,
        (BasisKind::C, n) => (n as f64 * x).cos(),
        (BasisKind::S, n) => x * (n as f64 * x).sin(),
    }
}

/// Dual system: `(2π−x)/2π²`, `(2π−x)cos nx/π²`, `sin nx/π²`.
pub fn eval_dual(idx: BasisIndex, x: f64) -> f64 {
    match (idx.kind, idx.n) {
        (BasisKind::C, 0) => (TWO_PI - x) / (2.0 * PI * PI),
        (BasisKind::C, n) => (TWO_PI - x) * (n as f64 * x).cos() / (PI * PI),
        (BasisKind::S, n) => (n as f64 * x).sin() / (PI * PI),
    }
}

/// Coefficients of a function against the dual system.
#[derive(Debug, Clone, PartialEq)]
pub struct BiorthoSpectrum {
    pub a0c: f64,
    /// cosine-branch coefficients, index 1..=n
    pub ac: Vec<f64>,
    /// sine-branch coefficients, index 1..=n
    pub as_: Vec<f64>,
    pub source: String,
}

impl BiorthoSpectrum {
    pub fn modes(&self) -> usize {
        self.ac.len()
    }

    pub fn zero(n: usize, source: impl Into<String>) -> Self {
        Self {
            a0c: 0.0,
            ac: vec![0.0; n],
            as_: vec![0.0; n],
            source: source.into(),
        }
    }

    pub fn is_finite(&self) -> bool {
        self.a0c.is_finite()
            && self.ac.iter().all(|v| v.is_finite())
            && self.as_.iter().all(|v| v.is_finite())
    }

    pub fn truncated(&self, n: usize) -> Self {
        Self {
            a0c: self.a0c,
            ac: self.ac[..n.min(self.ac.len())].to_vec(),
            as_: self.as_[..n.min(self.as_.len())].to_vec(),
            source: self.source.clone(),
        }
    }
}

/// Raw (unnormalized) trigonometric coefficients `∫ f cos nx`, `∫ f sin nx`.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierSpectrum {
    /// cosine integrals, index 0..=n
    pub c: Vec<f64>,
    /// sine integrals, index 1..=n
    pub s: Vec<f64>,
}

/// Incremental `(cos nx, sin nx)` by rotation; one multiply-add pair per mode,
/// summed in fixed low-to-high order for reproducibility.
pub(crate) struct TrigRecurrence {
    c: f64,
    s: f64,
    cx: f64,
    sx: f64,
}

impl TrigRecurrence {
    pub fn new(x: f64) -> Self {
        Self {
            c: 1.0,
            s: 0.0,
            cx: x.cos(),
            sx: x.sin(),
        }
    }

    /// Successive calls yield `(cos nx, sin nx)` for n = 1, 2, …
    pub fn next_mode(&mut self) -> (f64, f64) {
        let c = self.c * self.cx - self.s * self.sx;
        let s = self.s * self.cx + self.c * self.sx;
        self.c = c;
        self.s = s;
        (c, s)
    }
}

// Accumulation shape (one fused add per mode, low to high) matches the
// field evaluator, so the y = 0 trace reproduces the projector bit for bit.
pub(crate) fn eval_series(a0c: f64, ac: &[f64], as_: &[f64], x: f64) -> f64 {
    let mut acc = a0c;
    let mut trig = TrigRecurrence::new(x);
    let n = ac.len().max(as_.len());
    for k in 0..n {
        let (c, s) = trig.next_mode();
        if k < ac.len() && k < as_.len() {
            acc += ac[k] * c + as_[k] * (x * s);
        } else if k < ac.len() {
            acc += ac[k] * c;
        } else {
            acc += as_[k] * (x * s);
        }
    }
    acc
}

/// Gram matrix of primal against dual, interleaved ordering.
#[derive(Debug, Clone)]
pub struct GramMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl GramMatrix {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    pub fn max_identity_deviation(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self.entry(i, j) - target).abs());
            }
        }
        worst
    }
}

/// `(2N+1) × (2N+1)` matrix of scalar products `(primal_i; dual_j)` by
/// quadrature over the period.
pub fn biortho_gram(n: usize, tol: f64) -> Result<GramMatrix, BasisError> {
    assert!(n >= 1);
    let indices = BasisIndex::ordered(n);
    let dim = indices.len();
    let rows: Result<Vec<Vec<f64>>, QuadError> = indices
        .par_iter()
        .map(|&pi| {
            indices
                .iter()
                .map(|&dj| integrate(|x| eval_primal(pi, x) * eval_dual(dj, x), Interval::period(), tol))
                .collect()
        })
        .collect();
    let mut data = Vec::with_capacity(dim * dim);
    for row in rows? {
        data.extend(row);
    }
    Ok(GramMatrix { dim, data })
}

/// Coefficients of `f` against the dual system, modes 0..=n.
pub fn biortho_coefficients(f: &ScalarFunction1D, n: usize, tol: f64) -> Result<BiorthoSpectrum, BasisError> {
    assert!(n >= 1);
    let a0c = integrate(|x| f.eval(x) * (TWO_PI - x), Interval::period(), tol)? / (2.0 * PI * PI);
    let pairs: Result<Vec<(f64, f64)>, QuadError> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let kf = k as f64;
            let ac = integrate(
                |x| f.eval(x) * (TWO_PI - x) * (kf * x).cos(),
                Interval::period(),
                tol,
            )? / (PI * PI);
            let as_ = integrate(|x| f.eval(x) * (kf * x).sin(), Interval::period(), tol)? / (PI * PI);
            Ok((ac, as_))
        })
        .collect();
    let pairs = pairs?;
    Ok(BiorthoSpectrum {
        a0c,
        ac: pairs.iter().map(|p| p.0).collect(),
        as_: pairs.iter().map(|p| p.1).collect(),
        source: f.name().to_string(),
    })
}

/// Cross-check route for the dual coefficients through `g = (2π−x) f / π²`:
/// the cosine-branch coefficients are the raw cosine integrals of `g`, and the
/// sine branch is `∫ f sin nx / π²`.
pub fn biortho_coefficients_via_g(
    f: &ScalarFunction1D,
    n: usize,
    tol: f64,
) -> Result<BiorthoSpectrum, BasisError> {
    let g = {
        let inner = f.clone();
        ScalarFunction1D::new(
            format!("(2pi-x)*{}/pi^2", f.name()),
            Interval::period(),
            Smoothness::CInf,
            move |x| (TWO_PI - x) * inner.eval(x) / (PI * PI),
        )
    };
    let fc = fourier_coefficients(&g, n, tol)?;
    let fs = fourier_coefficients(f, n, tol)?;
    Ok(BiorthoSpectrum {
        a0c: 0.5 * fc.c[0],
        ac: fc.c[1..].to_vec(),
        as_: fs.s.iter().map(|v| v / (PI * PI)).collect(),
        source: f.name().to_string(),
    })
}

/// Evaluate the synthesis `a0c + Σ (ac_n cos nx + as_n · x sin nx)`.
pub fn synthesize(spec: &BiorthoSpectrum, x: f64) -> f64 {
    eval_series(spec.a0c, &spec.ac, &spec.as_, x)
}

/// A projector image: cosine branch through `n`, sine branch through `m`.
#[derive(Debug, Clone)]
pub struct PartialSum {
    pub a0c: f64,
    pub ac: Vec<f64>,
    pub as_: Vec<f64>,
    pub source: String,
}

impl PartialSum {
    pub fn eval(&self, x: f64) -> f64 {
        eval_series(self.a0c, &self.ac, &self.as_, x)
    }

    /// Wrap as an evaluable function (used for norms of projector images).
    pub fn to_function(&self) -> ScalarFunction1D {
        let copy = self.clone();
        ScalarFunction1D::new(
            format!("S[{}]", self.source),
            Interval::period(),
            Smoothness::CInf,
            move |x| copy.eval(x),
        )
    }
}

/// The projector with cosine order `n` (n ≥ 0) and sine order `m` (m ≥ 1).
pub fn projector_snm(f: &ScalarFunction1D, n: usize, m: usize, tol: f64) -> Result<PartialSum, BasisError> {
    assert!(m >= 1, "sine order must be at least 1");
    let full = biortho_coefficients(f, n.max(m).max(1), tol)?;
    Ok(PartialSum {
        a0c: full.a0c,
        ac: full.ac[..n].to_vec(),
        as_: full.as_[..m].to_vec(),
        source: f.name().to_string(),
    })
}

/// For each order, the sup over the corpus of `‖S_{n,m} f‖ / ‖f‖` in the
/// weighted Lebesgue norm.
pub fn projector_norm_scan(
    corpus: &[ScalarFunction1D],
    w: &Weight,
    p: f64,
    orders: &[(usize, usize)],
    tol: f64,
) -> Result<Vec<f64>, BasisError> {
    if corpus.is_empty() {
        return Err(BasisError::EmptyCorpus);
    }
    let max_order = orders
        .iter()
        .map(|&(n, m)| n.max(m))
        .max()
        .unwrap_or(1)
        .max(1);
    let mut spectra = Vec::with_capacity(corpus.len());
    let mut norms = Vec::with_capacity(corpus.len());
    for f in corpus {
        let norm = weighted_lp_norm_j(f, w, p, tol)?;
        if norm < 1e-14 {
            return Err(BasisError::ZeroNormCorpusFunction(f.name().to_string()));
        }
        spectra.push(biortho_coefficients(f, max_order, tol)?);
        norms.push(norm);
    }
    let mut out = Vec::with_capacity(orders.len());
    for &(n, m) in orders {
        let mut sup = 0.0f64;
        for ((f, spec), &norm) in corpus.iter().zip(&spectra).zip(&norms) {
            let partial = PartialSum {
                a0c: spec.a0c,
                ac: spec.ac[..n].to_vec(),
                as_: spec.as_[..m.max(1)].to_vec(),
                source: f.name().to_string(),
            };
            let pn = weighted_lp_norm_j(&partial.to_function(), w, p, tol)?;
            sup = sup.max(pn / norm);
        }
        out.push(sup);
    }
    Ok(out)
}

/// Raw cosine and sine integrals of `f`, modes 0..=n and 1..=n.
pub fn fourier_coefficients(f: &ScalarFunction1D, n: usize, tol: f64) -> Result<FourierSpectrum, BasisError> {
    assert!(n >= 1);
    let c0 = integrate(|x| f.eval(x), Interval::period(), tol)?;
    let pairs: Result<Vec<(f64, f64)>, QuadError> = (1..=n)
        .into_par_iter()
        .map(|k| {
            let kf = k as f64;
            let c = integrate(|x| f.eval(x) * (kf * x).cos(), Interval::period(), tol)?;
            let s = integrate(|x| f.eval(x) * (kf * x).sin(), Interval::period(), tol)?;
            Ok((c, s))
        })
        .collect();
    let pairs = pairs?;
    let mut c = Vec::with_capacity(n + 1);
    c.push(c0);
    c.extend(pairs.iter().map(|p| p.0));
    Ok(FourierSpectrum {
        c,
        s: pairs.iter().map(|p| p.1).collect(),
    })
}

/// Measured coefficient-norm against function-norm pair for `p ∈ (1, 2]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoefficientNormRatio {
    /// `ℓ^{p'}` norm of the raw trigonometric coefficients
    pub lhs: f64,
    /// unweighted `L^p` norm of the function
    pub rhs_norm: f64,
}

impl CoefficientNormRatio {
    /// `lhs / rhs`, undefined for the zero function.
    pub fn ratio(&self) -> Option<f64> {
        if self.rhs_norm == 0.0 {
            None
        } else {
            Some(self.lhs / self.rhs_norm)
        }
    }
}

/// Forward direction: coefficient `ℓ^{p'}` norm against `‖f‖_{L^p}`.
pub fn young_hausdorff_ratio(
    f: &ScalarFunction1D,
    p: f64,
    n: usize,
    tol: f64,
) -> Result<CoefficientNormRatio, BasisError> {
    assert!(p > 1.0 && p <= 2.0, "exponent must lie in (1, 2]");
    let q = p / (p - 1.0);
    let spec = fourier_coefficients(f, n, tol)?;
    let mut sum = spec.c[0].abs().powf(q);
    for k in 1..=n {
        sum += spec.c[k].abs().powf(q) + spec.s[k - 1].abs().powf(q);
    }
    let lhs = sum.powf(1.0 / q);
    let rhs = integrate(|x| f.eval(x).abs().powf(p), Interval::period(), tol)?
        .max(0.0)
        .powf(1.0 / p);
    Ok(CoefficientNormRatio { lhs, rhs_norm: rhs })
}

/// Converse direction: `‖f‖_{L^{p'}}` against the coefficient `ℓ^p` norm.
pub fn young_hausdorff_converse(
    f: &ScalarFunction1D,
    p: f64,
    n: usize,
    tol: f64,
) -> Result<CoefficientNormRatio, BasisError> {
    assert!(p > 1.0 && p <= 2.0, "exponent must lie in (1, 2]");
    let q = p / (p - 1.0);
    let spec = fourier_coefficients(f, n, tol)?;
    let mut sum = spec.c[0].abs().powf(p);
    for k in 1..=n {
        sum += spec.c[k].abs().powf(p) + spec.s[k - 1].abs().powf(p);
    }
    let coeff_norm = sum.powf(1.0 / p);
    let lhs = integrate(|x| f.eval(x).abs().powf(q), Interval::period(), tol)?
        .max(0.0)
        .powf(1.0 / q);
    Ok(CoefficientNormRatio {
        lhs,
        rhs_norm: coeff_norm,
    })
}

/// Gap in the p = 2 coefficient identity
/// `‖f‖² = (f_0^c)²/2π + (1/π) Σ ((f_n^c)² + (f_n^s)²)` for band-limited `f`.
pub fn parseval_gap(f: &ScalarFunction1D, n: usize, tol: f64) -> Result<f64, BasisError> {
    let spec = fourier_coefficients(f, n, tol)?;
    let mut rhs = spec.c[0] * spec.c[0] / TWO_PI;
    for k in 1..=n {
        rhs += (spec.c[k] * spec.c[k] + spec.s[k - 1] * spec.s[k - 1]) / PI;
    }
    let lhs = integrate(|x| f.eval(x) * f.eval(x), Interval::period(), tol)?;
    Ok((lhs - rhs).abs())
}

/// Smallest `c` with `|ac_n| ≤ c/n²` and `|as_n| ≤ c/n²` over the computed modes.
pub fn coeff_decay_bound(spec: &BiorthoSpectrum) -> f64 {
    let mut c = 0.0f64;
    for (k, (&a, &b)) in spec.ac.iter().zip(&spec.as_).enumerate() {
        let n2 = ((k + 1) * (k + 1)) as f64;
        c = c.max(n2 * a.abs()).max(n2 * b.abs());
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    const TOL: f64 = 1e-10;

    #[test]
    fn primal_and_dual_point_values() {
        let c0 = BasisIndex::new(BasisKind::C, 0).unwrap();
        let s1 = BasisIndex::new(BasisKind::S, 1).unwrap();
        let c1 = BasisIndex::new(BasisKind::C, 1).unwrap();
        let c2 = BasisIndex::new(BasisKind::C, 2).unwrap();
        assert_eq!(eval_primal(c0, 1.3), 1.0);
        assert!((eval_primal(s1, PI / 2.0) - PI / 2.0).abs() < 1e-15);
        assert!((eval_primal(c2, PI) - 1.0).abs() < 1e-15);
        assert!((eval_dual(c0, 0.0) - 1.0 / PI).abs() < 1e-15);
        assert!((eval_dual(s1, PI / 2.0) - 1.0 / (PI * PI)).abs() < 1e-15);
        assert!(eval_dual(c1, TWO_PI).abs() < 1e-15);
        assert!(BasisIndex::new(BasisKind::S, 0).is_err());
    }

    #[test]
    fn gram_diagonal_and_off_diagonal_entries() {
        let g = biortho_gram(2, TOL).unwrap();
        // ordering: (C,0), (C,1), (S,1), (C,2), (S,2)
        assert!((g.entry(2, 2) - 1.0).abs() < 1e-9, "x sin x against its dual");
        assert!(g.entry(2, 1).abs() < 1e-9, "sine against cosine dual");
        assert!((g.entry(0, 0) - 1.0).abs() < 1e-9, "constant against its dual");
    }

    #[test]
    fn gram_order_eight_is_near_identity() {
        let g = biortho_gram(8, TOL).unwrap();
        assert!(g.max_identity_deviation() <= 1e-8, "dev = {}", g.max_identity_deviation());
    }

    #[test]
    fn coefficients_of_x_sin_x_are_a_unit_spectrum() {
        let spec = biortho_coefficients(&presets::xsinx(), 6, TOL).unwrap();
        assert!((spec.as_[0] - 1.0).abs() < 1e-9);
        assert!(spec.a0c.abs() < 1e-9);
        for k in 0..6 {
            assert!(spec.ac[k].abs() < 1e-9, "ac[{}]", k + 1);
            if k > 0 {
                assert!(spec.as_[k].abs() < 1e-9, "as[{}]", k + 1);
            }
        }
    }

    #[test]
    fn coefficients_of_sine_match_closed_forms() {
        // ∫ x sin kx dx = -2π/k gives a0c = 1/π, ac1 = 1/2π, as1 = 1/π,
        // and ac_n = -2/(π(n²-1)) for n ≥ 2
        let spec = biortho_coefficients(&presets::sinx(), 5, TOL).unwrap();
        assert!((spec.a0c - 1.0 / PI).abs() < 1e-9);
        assert!((spec.ac[0] - 1.0 / (2.0 * PI)).abs() < 1e-9);
        assert!((spec.as_[0] - 1.0 / PI).abs() < 1e-9);
        assert!((spec.ac[1] + 2.0 / (3.0 * PI)).abs() < 1e-9);
        for n in [3usize, 4, 5] {
            let want = -2.0 / (PI * ((n * n - 1) as f64));
            assert!((spec.ac[n - 1] - want).abs() < 1e-9, "ac[{n}]");
        }
    }

    #[test]
    fn zero_function_has_zero_spectrum() {
        let spec = biortho_coefficients(&ScalarFunction1D::zero(Interval::period()), 4, TOL).unwrap();
        assert_eq!(spec.a0c, 0.0);
        assert!(spec.ac.iter().chain(&spec.as_).all(|&v| v == 0.0));
    }

    #[test]
    fn synthesize_reproduces_unit_spectrum() {
        let spec = biortho_coefficients(&presets::xsinx(), 4, TOL).unwrap();
        for &x in &[0.0, PI / 2.0, 1.9, TWO_PI] {
            assert!((synthesize(&spec, x) - x * x.sin()).abs() < 1e-8, "x = {x}");
        }
        let zero = BiorthoSpectrum::zero(4, "zero");
        assert_eq!(synthesize(&zero, 1.0), 0.0);
    }

    #[test]
    fn round_trip_of_a_random_finite_spectrum() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let n = 10;
        let spec = BiorthoSpectrum {
            a0c: rng.gen_range(-1.0..1.0),
            ac: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            as_: (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect(),
            source: "random".into(),
        };
        let spec_clone = spec.clone();
        let f = ScalarFunction1D::new("synth", Interval::period(), Smoothness::CInf, move |x| {
            synthesize(&spec_clone, x)
        });
        let back = biortho_coefficients(&f, n, TOL).unwrap();
        assert!((back.a0c - spec.a0c).abs() < 1e-8);
        for k in 0..n {
            assert!((back.ac[k] - spec.ac[k]).abs() < 1e-8, "ac[{k}]");
            assert!((back.as_[k] - spec.as_[k]).abs() < 1e-8, "as[{k}]");
        }
    }

    #[test]
    fn coefficients_are_linear() {
        let f = presets::sinx();
        let g = presets::poly();
        let (alpha, beta) = (0.7, -1.3);
        let combo = ScalarFunction1D::linear_combination("combo", alpha, &f, beta, &g);
        let sf = biortho_coefficients(&f, 6, TOL).unwrap();
        let sg = biortho_coefficients(&g, 6, TOL).unwrap();
        let sc = biortho_coefficients(&combo, 6, TOL).unwrap();
        assert!((sc.a0c - (alpha * sf.a0c + beta * sg.a0c)).abs() < 1e-10);
        for k in 0..6 {
            assert!((sc.ac[k] - (alpha * sf.ac[k] + beta * sg.ac[k])).abs() < 1e-10);
            assert!((sc.as_[k] - (alpha * sf.as_[k] + beta * sg.as_[k])).abs() < 1e-10);
        }
    }

    #[test]
    fn projector_reproduces_primal_element() {
        let s = projector_snm(&presets::xsinx(), 0, 1, TOL).unwrap();
        for &x in &[0.3, 2.0, 5.5] {
            assert!((s.eval(x) - x * x.sin()).abs() < 1e-9);
        }
        let s = projector_snm(&presets::xsinx(), 3, 1, TOL).unwrap();
        for &x in &[0.3, 2.0, 5.5] {
            assert!((s.eval(x) - x * x.sin()).abs() < 1e-9);
        }
    }

    #[test]
    fn projector_is_idempotent_on_its_image() {
        let s = projector_snm(&presets::poly(), 8, 8, TOL).unwrap();
        let again = projector_snm(&s.to_function(), 8, 8, TOL).unwrap();
        assert!((s.a0c - again.a0c).abs() < 1e-8);
        for k in 0..8 {
            assert!((s.ac[k] - again.ac[k]).abs() < 1e-8);
            assert!((s.as_[k] - again.as_[k]).abs() < 1e-8);
        }
    }

    #[test]
    fn norm_scan_on_a_primal_element_is_unity() {
        let corpus = vec![presets::xsinx()];
        let ratios = projector_norm_scan(&corpus, &Weight::one(), 2.0, &[(1, 1), (4, 4)], TOL).unwrap();
        for r in ratios {
            assert!((r - 1.0).abs() < 1e-8, "ratio {r}");
        }
        assert!(matches!(
            projector_norm_scan(&[], &Weight::one(), 2.0, &[(1, 1)], TOL),
            Err(BasisError::EmptyCorpus)
        ));
    }

    #[test]
    fn raw_coefficients_of_simple_functions() {
        let spec = fourier_coefficients(&presets::sinx(), 4, TOL).unwrap();
        assert!((spec.s[0] - PI).abs() < 1e-9);
        for k in 1..4 {
            assert!(spec.s[k].abs() < 1e-9);
        }
        for k in 0..=4 {
            assert!(spec.c[k].abs() < 1e-9);
        }
        let one = ScalarFunction1D::new("1", Interval::period(), Smoothness::CInf, |_| 1.0);
        let spec = fourier_coefficients(&one, 3, TOL).unwrap();
        assert!((spec.c[0] - TWO_PI).abs() < 1e-10);
        assert!(spec.c[1..].iter().all(|v| v.abs() < 1e-10));
        assert!(spec.s.iter().all(|v| v.abs() < 1e-10));
    }

    #[test]
    fn dual_coefficients_agree_with_g_substitution_route() {
        for f in [presets::poly(), presets::sinx()] {
            let direct = biortho_coefficients(&f, 8, TOL).unwrap();
            let via_g = biortho_coefficients_via_g(&f, 8, TOL).unwrap();
            assert!((direct.a0c - via_g.a0c).abs() < 1e-9, "{}", f.name());
            for k in 0..8 {
                assert!((direct.ac[k] - via_g.ac[k]).abs() < 1e-9);
                assert!((direct.as_[k] - via_g.as_[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn sine_branch_relates_to_raw_sine_integrals() {
        let f = presets::xsinx();
        let spec = biortho_coefficients(&f, 4, TOL).unwrap();
        let raw = fourier_coefficients(&f, 4, TOL).unwrap();
        for k in 0..4 {
            assert!((spec.as_[k] - raw.s[k] / (PI * PI)).abs() < 1e-9);
        }
    }

    #[test]
    fn coefficient_norm_ratio_of_sine() {
        let r = young_hausdorff_ratio(&presets::sinx(), 2.0, 16, TOL).unwrap();
        assert!((r.lhs - PI).abs() < 1e-8);
        assert!((r.rhs_norm - PI.sqrt()).abs() < 1e-9);
        assert!((r.ratio().unwrap() - PI.sqrt()).abs() < 1e-8);
    }

    #[test]
    fn zero_function_ratio_is_undefined() {
        let r = young_hausdorff_ratio(&ScalarFunction1D::zero(Interval::period()), 2.0, 4, TOL).unwrap();
        assert_eq!(r.lhs, 0.0);
        assert_eq!(r.rhs_norm, 0.0);
        assert!(r.ratio().is_none());
    }

    #[test]
    fn parseval_identity_for_band_limited_functions() {
        for f in presets::band_limited_corpus() {
            let gap = parseval_gap(&f, 8, TOL).unwrap();
            assert!(gap <= 1e-8, "{}: gap {gap}", f.name());
        }
    }

    #[test]
    fn converse_ratio_is_finite_on_the_corpus() {
        for f in presets::smooth_corpus() {
            for p in [1.25, 1.5, 2.0] {
                let r = young_hausdorff_converse(&f, p, 32, TOL).unwrap();
                assert!(r.lhs.is_finite() && r.rhs_norm > 0.0, "{} p={p}", f.name());
            }
        }
    }

    #[test]
    fn decay_bounds() {
        let unit = biortho_coefficients(&presets::xsinx(), 8, TOL).unwrap();
        assert!((coeff_decay_bound(&unit) - 1.0).abs() < 1e-7);
        assert_eq!(coeff_decay_bound(&BiorthoSpectrum::zero(4, "z")), 0.0);
        // for sin x the max of n²|ac_n| sits at n = 2: 8/(3π)
        let s = biortho_coefficients(&presets::sinx(), 32, TOL).unwrap();
        let c = coeff_decay_bound(&s);
        assert!((c - 8.0 / (3.0 * PI)).abs() < 1e-7, "c = {c}");
    }

    #[test]
    fn projector_norms_show_no_blowup_over_the_order_ladder() {
        let corpus = presets::projector_scan_corpus();
        assert!(corpus.len() >= 20);
        let orders = [(8usize, 8usize), (16, 16), (32, 32), (64, 64)];
        let ratios = projector_norm_scan(&corpus, &Weight::one(), 2.0, &orders, TOL).unwrap();
        // recorded regression sup over the corpus; growing orders must not
        // push past it
        let recorded = 1.10;
        for (order, r) in orders.iter().zip(&ratios) {
            assert!(r.is_finite() && *r <= recorded, "{order:?}: sup ratio {r}");
        }
        let first = ratios[0];
        let last = *ratios.last().unwrap();
        assert!(last <= first * 1.05 + 1e-9, "trend {first} -> {last}");
    }

    #[test]
    fn partial_sum_error_ladder_matches_recorded_values() {
        // measured ladder in L²(one); regression values from an independent
        // dense-grid scan
        let sinx = presets::sinx();
        let spec = biortho_coefficients(&sinx, 128, TOL).unwrap();
        let recorded = [(8usize, 2.6416e-2), (32, 3.5174e-3), (128, 4.4743e-4)];
        for &(n, want) in &recorded {
            let partial = PartialSum {
                a0c: spec.a0c,
                ac: spec.ac[..n].to_vec(),
                as_: spec.as_[..n].to_vec(),
                source: "sinx".into(),
            };
            let diff = ScalarFunction1D::new("err", Interval::period(), Smoothness::CInf, {
                let p = partial.clone();
                let f = sinx.clone();
                move |x| p.eval(x) - f.eval(x)
            });
            let err = weighted_lp_norm_j(&diff, &Weight::one(), 2.0, TOL).unwrap();
            assert!(
                ((err - want) / want).abs() < 5e-3,
                "N = {n}: measured {err}, recorded {want}"
            );
        }
    }
}
