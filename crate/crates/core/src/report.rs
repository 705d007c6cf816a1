//! Deterministic report emission: JSON for structured reports, CSV for
//! sampled fields, fixed float formatting, atomic file writes, and solution
//! reload.

use std::fs;
use std::io::Write;
use std::path::Path;

use thiserror::Error;

use crate::basis::{BiorthoSpectrum, GramMatrix};
use crate::quad::Grid2D;
use crate::solver::StripSolution;
use crate::verify::ResidualReport;
use crate::weights::WeightReport;

#[derive(Debug, Error)]
pub enum ReportError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("malformed document: {0}")]
    Parse(String),
}

/// 17 significant digits, lowercase exponent: lossless for binary64 and
/// byte-stable across runs.
pub fn fmt_f64(x: f64) -> String {
    assert!(x.is_finite(), "reports carry finite numbers only");
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{x:.16e}")
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn float_array(values: &[f64]) -> String {
    let items: Vec<String> = values.iter().map(|&v| fmt_f64(v)).collect();
    format!("[{}]", items.join(","))
}

/// Spectrum document: `{"N":…,"a0c":…,"ac":[…],"as":[…],"source":…}`.
pub fn spectrum_to_json(spec: &BiorthoSpectrum) -> String {
    format!(
        "{{\"N\":{},\"a0c\":{},\"ac\":{},\"as\":{},\"source\":\"{}\"}}",
        spec.modes(),
        fmt_f64(spec.a0c),
        float_array(&spec.ac),
        float_array(&spec.as_),
        escape(&spec.source)
    )
}

/// Solution document: the spectrum plus the growth multiplier and the probed
/// tail decay constant.
pub fn solution_to_json(sol: &StripSolution) -> String {
    let spec = sol.spectrum();
    format!(
        "{{\"N\":{},\"a0c\":{},\"ac\":{},\"as\":{},\"source\":\"{}\",\"lambda\":{},\"tail_decay_c\":{}}}",
        sol.modes(),
        fmt_f64(spec.a0c),
        float_array(&spec.ac),
        float_array(&spec.as_),
        escape(&spec.source),
        fmt_f64(sol.lambda()),
        fmt_f64(sol.tail_decay_constant())
    )
}

/// Rebuild a solution from its JSON document.
pub fn solution_from_json(doc: &str) -> Result<StripSolution, ReportError> {
    let v: serde_json::Value =
        serde_json::from_str(doc).map_err(|e| ReportError::Parse(e.to_string()))?;
    let n = v["N"].as_u64().ok_or_else(|| ReportError::Parse("missing N".into()))? as usize;
    let a0c = v["a0c"].as_f64().ok_or_else(|| ReportError::Parse("missing a0c".into()))?;
    let read_array = |key: &str| -> Result<Vec<f64>, ReportError> {
        v[key]
            .as_array()
            .ok_or_else(|| ReportError::Parse(format!("missing {key}")))?
            .iter()
            .map(|x| x.as_f64().ok_or_else(|| ReportError::Parse(format!("bad entry in {key}"))))
            .collect()
    };
    let ac = read_array("ac")?;
    let as_ = read_array("as")?;
    if ac.len() != n || as_.len() != n {
        return Err(ReportError::Parse("coefficient arrays disagree with N".into()));
    }
    let source = v["source"].as_str().unwrap_or("reloaded").to_string();
    let lambda = v["lambda"].as_f64().ok_or_else(|| ReportError::Parse("missing lambda".into()))?;
    let tail = v["tail_decay_c"].as_f64().unwrap_or(0.0);
    let spectrum = BiorthoSpectrum { a0c, ac, as_, source };
    Ok(StripSolution::from_parts(spectrum, lambda, tail))
}

fn opt_f64(v: Option<f64>) -> String {
    match v {
        Some(x) => fmt_f64(x),
        None => "null".into(),
    }
}

pub fn weight_report_to_json(r: &WeightReport, descriptor: &str) -> String {
    format!(
        "{{\"weight\":\"{}\",\"p\":{},\"ap_constant\":{},\"in_ap\":{},\"inclusion_q\":{},\"rh_delta\":{},\"rh_constant\":{},\"resolution\":{}}}",
        escape(descriptor),
        fmt_f64(r.p),
        fmt_f64(r.ap_constant),
        r.in_ap,
        opt_f64(r.inclusion_q),
        opt_f64(r.rh_delta),
        opt_f64(r.rh_constant),
        r.resolution
    )
}

pub fn residual_report_to_json(r: &ResidualReport) -> String {
    let decay: Vec<String> = r
        .trace_decay
        .iter()
        .map(|&(y, e)| format!("[{},{}]", fmt_f64(y), fmt_f64(e)))
        .collect();
    format!(
        concat!(
            "{{\"f\":\"{}\",\"weight\":\"{}\",\"p\":{},\"N\":{},\"lambda\":{},",
            "\"grid\":\"{}\",\"tol\":{},\"laplacian_max\":{},\"laplacian_order\":{},",
            "\"weak_residuals\":{},\"ux_at_0_max\":{},\"periodicity_max\":{},",
            "\"trace_error\":{},\"trace_decay\":[{}],\"norm_ratio\":{},",
            "\"w2_norm_mixed\":{},\"tail_estimate\":{}}}"
        ),
        escape(&r.f_name),
        escape(&r.weight_name),
        fmt_f64(r.p),
        r.n_modes,
        fmt_f64(r.lambda_used),
        escape(&r.grid),
        fmt_f64(r.tol),
        fmt_f64(r.laplacian_max),
        if r.laplacian_order.is_finite() {
            fmt_f64(r.laplacian_order)
        } else {
            "null".into()
        },
        float_array(&r.weak_residuals),
        fmt_f64(r.ux_at_0_max),
        fmt_f64(r.periodicity_max),
        fmt_f64(r.trace_error),
        decay.join(","),
        opt_f64(r.norm_ratio),
        fmt_f64(r.w2_norm_mixed),
        fmt_f64(r.tail_estimate),
    )
}

/// Sampled field over the grid: header `x,y,u,ux,uy,uxx,uyy`, rows in y-major
/// order.
pub fn field_csv(sol: &StripSolution, grid: &Grid2D) -> String {
    let mut out = String::from("x,y,u,ux,uy,uxx,uyy\n");
    for &y in grid.y().points() {
        for &x in grid.x().points() {
            out.push_str(&format!(
                "{},{},{},{},{},{},{}\n",
                fmt_f64(x),
                fmt_f64(y),
                fmt_f64(sol.eval_u(x, y)),
                fmt_f64(sol.eval_ux(x, y)),
                fmt_f64(sol.eval_uy(x, y)),
                fmt_f64(sol.eval_uxx(x, y)),
                fmt_f64(sol.eval_uyy(x, y)),
            ));
        }
    }
    out
}

pub fn gram_csv(g: &GramMatrix) -> String {
    let mut out = String::new();
    for i in 0..g.dim() {
        let row: Vec<String> = (0..g.dim()).map(|j| fmt_f64(g.entry(i, j))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

/// Coefficient-norm table rows: `(f, p, lhs, rhs, ratio)`.
pub fn yh_table_csv(rows: &[(String, f64, f64, f64, Option<f64>)]) -> String {
    let mut out = String::from("f,p,lhs,rhs,ratio\n");
    for (name, p, lhs, rhs, ratio) in rows {
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            name,
            fmt_f64(*p),
            fmt_f64(*lhs),
            fmt_f64(*rhs),
            ratio.map(fmt_f64).unwrap_or_else(|| "nan".into())
        ));
    }
    out
}

/// Write through a temp file in the same directory, then rename into place.
pub fn atomic_write(path: &Path, contents: &str) -> Result<(), ReportError> {
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    fs::create_dir_all(dir)?;
    let mut tmp = path.to_path_buf();
    let name = path
        .file_name()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    tmp.set_file_name(format!(".{name}.tmp"));
    {
        let mut file = fs::File::create(&tmp)?;
        file.write_all(contents.as_bytes())?;
        file.sync_all()?;
    }
    fs::rename(&tmp, path)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::quad::make_uniform_grid2d;
    use crate::solver::{solve, BoundaryDatum};

    #[test]
    fn float_format_is_lossless() {
        for &x in &[
            0.0,
            -0.0,
            1.0,
            std::f64::consts::PI,
            -2.0 / (3.0 * std::f64::consts::PI),
            1.2577e-3,
            f64::MIN_POSITIVE,
        ] {
            let s = fmt_f64(x);
            assert!(s.contains('e') && !s.contains('E'), "{s}");
            let back: f64 = s.parse().unwrap();
            assert_eq!(back, if x == 0.0 { 0.0 } else { x }, "{s}");
        }
    }

    #[test]
    fn solution_round_trip_is_exact() {
        let sol = solve(&BoundaryDatum::new(presets::sinx()), 12, 1.0, 1e-10).unwrap();
        let doc = solution_to_json(&sol);
        let back = solution_from_json(&doc).unwrap();
        assert_eq!(back.modes(), sol.modes());
        assert_eq!(back.lambda(), sol.lambda());
        let grid = make_uniform_grid2d(9, 5, 2.0).unwrap();
        for &y in grid.y().points() {
            for &x in grid.x().points() {
                assert_eq!(back.eval_u(x, y), sol.eval_u(x, y));
                assert_eq!(back.eval_uxx(x, y), sol.eval_uxx(x, y));
            }
        }
    }

    #[test]
    fn emission_is_deterministic() {
        let sol = solve(&BoundaryDatum::new(presets::poly()), 8, 1.0, 1e-10).unwrap();
        let grid = make_uniform_grid2d(5, 4, 1.0).unwrap();
        assert_eq!(solution_to_json(&sol), solution_to_json(&sol));
        assert_eq!(field_csv(&sol, &grid), field_csv(&sol, &grid));
    }

    #[test]
    fn malformed_documents_are_rejected() {
        assert!(solution_from_json("{").is_err());
        assert!(solution_from_json("{\"N\":2}").is_err());
        assert!(solution_from_json(
            "{\"N\":2,\"a0c\":0.0,\"ac\":[1.0],\"as\":[0.0,0.0],\"source\":\"x\",\"lambda\":1.0}"
        )
        .is_err());
    }

    #[test]
    fn atomic_write_creates_parents_and_replaces() {
        let dir = std::env::temp_dir().join(format!("striph-report-{}", std::process::id()));
        let path = dir.join("nested/report.json");
        atomic_write(&path, "one").unwrap();
        atomic_write(&path, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), "two");
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
