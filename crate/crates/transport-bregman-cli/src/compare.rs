//! The `compare` command: evaluate every divergence that applies to a pair
//! of densities, routing each through the best available computation.
//!
//! Routing rules, in order of preference:
//!
//! * both densities Gaussian → covariance closed forms (exact, no grid);
//! * transport divergences otherwise → quantile quadrature, which works for
//!   every density the CLI can describe;
//! * classical KL/JS → shared-grid trapezoid sums, which need both densities
//!   tabulated on identical abscissae (samples carry no density values, so
//!   empirical densities never qualify);
//! * transport cross entropy → needs the reference density `q` tabulated.
//!
//! A divergence that does not apply, or whose computation rejects the pair
//! (infinite KL, degenerate quantiles), gets a reason in its row; the rest
//! of the table still prints and the command still succeeds.

use crate::spec::{DensitySpec, ResolvedDensity};
use crate::{fmt_sig9, CliError};
use std::io::Write;
use transport_bregman::gaussian::{
    classical_kl_gaussian, transport_js_gaussian, transport_kl_gaussian, wasserstein2_gaussian,
};
use transport_bregman::quadrature::QuadratureConfig;
use transport_bregman::transport::{
    classical_divergence_grid, transport_cross_entropy_1d, transport_js_1d, transport_kl_1d,
    wasserstein2_1d, ClassicalDivergence,
};

/// How one divergence row turned out.
#[derive(Debug, Clone, PartialEq)]
pub enum RowOutcome {
    /// Computed successfully, with the route that produced it.
    Value {
        /// The divergence value.
        value: f64,
        /// Short description of the computation route.
        method: String,
    },
    /// Structurally not computable for this pair of densities.
    NotApplicable(String),
    /// The computation itself rejected the pair.
    Failed(String),
}

/// One row of the comparison table.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    /// Short column code (`tkl`, `w2`, …).
    pub code: &'static str,
    /// Human-readable divergence name.
    pub label: &'static str,
    /// Value or the reason there is none.
    pub outcome: RowOutcome,
}

fn quadrature_row(
    result: transport_bregman::Result<transport_bregman::transport::DivergenceResult>,
) -> RowOutcome {
    match result {
        Ok(r) => RowOutcome::Value {
            value: r.value,
            method: format!("quadrature, {} nodes", r.nodes_used),
        },
        Err(err) => RowOutcome::Failed(err.to_string()),
    }
}

fn closed_form_row(result: transport_bregman::Result<f64>) -> RowOutcome {
    match result {
        Ok(value) => RowOutcome::Value {
            value,
            method: String::from("Gaussian closed form"),
        },
        Err(err) => RowOutcome::Failed(err.to_string()),
    }
}

fn grid_row(result: transport_bregman::Result<f64>) -> RowOutcome {
    match result {
        Ok(value) => RowOutcome::Value {
            value,
            method: String::from("shared-grid trapezoid"),
        },
        Err(err) => RowOutcome::Failed(err.to_string()),
    }
}

/// Evaluates the full divergence table for a resolved pair.
pub fn compare_rows(
    p: &ResolvedDensity,
    q: &ResolvedDensity,
    cfg: &QuadratureConfig,
) -> Vec<CompareRow> {
    let gaussian_pair = p.gaussian.as_ref().zip(q.gaussian.as_ref());
    let grid_pair = p.density.as_grid().zip(q.density.as_grid());

    let w2 = match gaussian_pair {
        Some((x, y)) => closed_form_row(wasserstein2_gaussian(x, y)),
        None => quadrature_row(wasserstein2_1d(&p.density, &q.density, cfg)),
    };
    let tkl = match gaussian_pair {
        Some((x, y)) => closed_form_row(transport_kl_gaussian(x, y)),
        None => quadrature_row(transport_kl_1d(&p.density, &q.density, cfg)),
    };
    let tjs = match gaussian_pair {
        Some((x, y)) => closed_form_row(transport_js_gaussian(x, y)),
        None => quadrature_row(transport_js_1d(&p.density, &q.density, cfg)),
    };
    let kl = match (gaussian_pair, grid_pair) {
        (Some((x, y)), _) => closed_form_row(classical_kl_gaussian(x, y)),
        (None, Some((pg, qg))) => grid_row(classical_divergence_grid(ClassicalDivergence::Kl, pg, qg)),
        (None, None) => RowOutcome::NotApplicable(String::from(
            "needs both densities Gaussian, or both tabulated on a shared grid \
             (samples carry no density values)",
        )),
    };
    let js = match grid_pair {
        Some((pg, qg)) => grid_row(classical_divergence_grid(ClassicalDivergence::Js, pg, qg)),
        None => RowOutcome::NotApplicable(String::from(
            "no closed form; needs both densities tabulated on a shared grid",
        )),
    };
    let ht = match q.density.as_grid() {
        Some(qg) => quadrature_row(transport_cross_entropy_1d(&p.density, qg, cfg)),
        None => RowOutcome::NotApplicable(String::from("the reference density q is not grid-backed")),
    };

    vec![
        CompareRow {
            code: "w2",
            label: "squared 2-Wasserstein distance",
            outcome: w2,
        },
        CompareRow {
            code: "tkl",
            label: "transport Kullback-Leibler",
            outcome: tkl,
        },
        CompareRow {
            code: "tjs",
            label: "transport Jensen-Shannon",
            outcome: tjs,
        },
        CompareRow {
            code: "kl",
            label: "classical Kullback-Leibler",
            outcome: kl,
        },
        CompareRow {
            code: "js",
            label: "classical Jensen-Shannon",
            outcome: js,
        },
        CompareRow {
            code: "ht",
            label: "transport cross entropy",
            outcome: ht,
        },
    ]
}

/// Renders the comparison as a fixed-layout text table with a header
/// echoing both densities and the quadrature configuration.
pub fn render_compare(p: &ResolvedDensity, q: &ResolvedDensity, cfg: &QuadratureConfig) -> String {
    let mut out = String::new();
    out.push_str(&format!("p: {}\n", p.label));
    out.push_str(&format!("q: {}\n", q.label));
    out.push_str(&format!(
        "quadrature: {} nodes, {:?}, endpoint clip {:e}\n\n",
        cfg.nodes, cfg.scheme, cfg.clip
    ));
    for row in compare_rows(p, q, cfg) {
        let body = match &row.outcome {
            RowOutcome::Value { value, method } => {
                format!("{:>16}   [{method}]", fmt_sig9(*value))
            }
            RowOutcome::NotApplicable(reason) => format!("{:>16}   {reason}", "n/a"),
            RowOutcome::Failed(reason) => format!("{:>16}   {reason}", "error"),
        };
        out.push_str(&format!("{:<4} {:<31} {body}\n", row.code, row.label));
    }
    out
}

/// Resolves both density specs, applies quadrature overrides, and writes the
/// comparison table to `w`.
///
/// # Errors
/// [`CliError`] for unresolvable specs, out-of-range quadrature overrides,
/// or a failed write. Domain errors of individual divergences do *not* fail
/// the command; they appear in the table.
pub fn cmd_compare(
    p_spec: &DensitySpec,
    q_spec: &DensitySpec,
    nodes: Option<usize>,
    clip: Option<f64>,
    w: &mut dyn Write,
) -> Result<(), CliError> {
    let mut cfg = QuadratureConfig::default();
    if let Some(nodes) = nodes {
        if nodes < 16 {
            return Err(CliError(format!("--nodes must be at least 16, got {nodes}")));
        }
        cfg.nodes = nodes;
    }
    if let Some(clip) = clip {
        if !(clip > 0.0 && clip < 0.01) {
            return Err(CliError(format!(
                "--clip must lie strictly between 0 and 0.01, got {clip}"
            )));
        }
        cfg.clip = clip;
    }
    let p = p_spec.resolve()?;
    let q = q_spec.resolve()?;
    let table = render_compare(&p, &q, &cfg);
    w.write_all(table.as_bytes())
        .map_err(|err| CliError(format!("cannot write comparison: {err}")))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spec::render_grid_text;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::LN_2;
    use transport_bregman::density::{normal_pdf, GridDensity};

    fn resolve(text: &str) -> ResolvedDensity {
        DensitySpec::parse(text).unwrap().resolve().unwrap()
    }

    fn value_of(rows: &[CompareRow], code: &str) -> f64 {
        match &rows.iter().find(|r| r.code == code).unwrap().outcome {
            RowOutcome::Value { value, .. } => *value,
            other => panic!("{code} should have a value, got {other:?}"),
        }
    }

    fn reason_of<'a>(rows: &'a [CompareRow], code: &str) -> &'a str {
        match &rows.iter().find(|r| r.code == code).unwrap().outcome {
            RowOutcome::NotApplicable(reason) => reason,
            other => panic!("{code} should be n/a, got {other:?}"),
        }
    }

    fn gaussian_grid(mean: f64, std: f64, lo: f64, hi: f64, n: usize) -> GridDensity {
        let xs: Vec<f64> = (0..n)
            .map(|i| lo + (hi - lo) * (i as f64) / ((n - 1) as f64))
            .collect();
        let pdf: Vec<f64> = xs.iter().map(|&x| normal_pdf((x - mean) / std) / std).collect();
        GridDensity::new(xs, pdf).unwrap()
    }

    #[test]
    fn gaussian_pairs_use_closed_forms_everywhere_applicable() {
        let p = resolve("gaussian:0:4");
        let q = resolve("gaussian:0:1");
        let rows = compare_rows(&p, &q, &QuadratureConfig::default());
        assert_abs_diff_eq!(value_of(&rows, "tkl"), 1.0 - LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(value_of(&rows, "kl"), 1.5 - LN_2, epsilon = 1e-12);
        assert_abs_diff_eq!(value_of(&rows, "w2"), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(
            value_of(&rows, "tjs"),
            0.5 * (9.0f64 / 8.0).ln(),
            epsilon = 1e-12
        );
        assert!(reason_of(&rows, "js").contains("shared grid"));
        assert!(reason_of(&rows, "ht").contains("not grid-backed"));
    }

    #[test]
    fn identical_specs_compare_to_zero() {
        let p = resolve("gaussian:1.5:2");
        let rows = compare_rows(&p, &p, &QuadratureConfig::default());
        for code in ["w2", "tkl", "tjs", "kl"] {
            assert!(
                value_of(&rows, code).abs() < 1e-12,
                "{code} should vanish on identical densities"
            );
        }
    }

    #[test]
    fn sample_densities_get_transport_but_not_classical_divergences() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("draws.txt");
        let draws: Vec<f64> = (0..400).map(|i| -3.0 + 6.0 * (i as f64 + 0.5) / 400.0).collect();
        std::fs::write(&path, crate::spec::render_samples_text(&draws)).unwrap();
        let p = DensitySpec::SamplesFile { path }.resolve().unwrap();
        let q = resolve("gaussian:0:1");
        let rows = compare_rows(&p, &q, &QuadratureConfig::default());
        assert!(value_of(&rows, "tkl").is_finite());
        assert!(value_of(&rows, "w2").is_finite());
        assert!(reason_of(&rows, "kl").contains("samples carry no density values"));
        assert!(reason_of(&rows, "ht").contains("not grid-backed"));
    }

    #[test]
    fn grid_pairs_unlock_the_classical_rows_and_cross_entropy() {
        let dir = tempfile::tempdir().unwrap();
        let p_path = dir.path().join("p.txt");
        let q_path = dir.path().join("q.txt");
        std::fs::write(&p_path, render_grid_text(&gaussian_grid(0.0, 2.0, -10.0, 10.0, 2001)))
            .unwrap();
        std::fs::write(&q_path, render_grid_text(&gaussian_grid(0.0, 1.0, -10.0, 10.0, 2001)))
            .unwrap();
        let p = DensitySpec::GridFile { path: p_path }.resolve().unwrap();
        let q = DensitySpec::GridFile { path: q_path }.resolve().unwrap();
        let rows = compare_rows(&p, &q, &QuadratureConfig::default());
        // Same pair as the closed-form test, now through tabulated routes.
        assert_abs_diff_eq!(value_of(&rows, "tkl"), 1.0 - LN_2, epsilon = 1e-3);
        assert_abs_diff_eq!(value_of(&rows, "kl"), 1.5 - LN_2, epsilon = 1e-3);
        assert!(value_of(&rows, "js").is_finite());
        assert!(value_of(&rows, "ht").is_finite());
    }

    #[test]
    fn classical_rows_report_infinite_divergences_without_aborting() {
        let dir = tempfile::tempdir().unwrap();
        let p_path = dir.path().join("p.txt");
        let q_path = dir.path().join("q.txt");
        let xs: Vec<f64> = (0..101).map(|i| i as f64 / 100.0).collect();
        let wide: Vec<f64> = xs.iter().map(|_| 1.0).collect();
        let narrow: Vec<f64> = xs
            .iter()
            .map(|&x| if x < 0.5 { 1.0 } else { 0.0 })
            .collect();
        std::fs::write(
            &p_path,
            render_grid_text(&GridDensity::new(xs.clone(), wide).unwrap()),
        )
        .unwrap();
        std::fs::write(
            &q_path,
            render_grid_text(&GridDensity::new(xs, narrow).unwrap()),
        )
        .unwrap();
        let p = DensitySpec::GridFile { path: p_path }.resolve().unwrap();
        let q = DensitySpec::GridFile { path: q_path }.resolve().unwrap();
        let rows = compare_rows(&p, &q, &QuadratureConfig::default());
        let kl = &rows.iter().find(|r| r.code == "kl").unwrap().outcome;
        assert!(matches!(kl, RowOutcome::Failed(_)), "kl row: {kl:?}");
        // The symmetric rows still compute.
        assert!(value_of(&rows, "js").is_finite());
    }

    #[test]
    fn the_rendered_table_lists_every_divergence_once() {
        let p = resolve("gaussian:0:4");
        let q = resolve("gaussian:0:1");
        let text = render_compare(&p, &q, &QuadratureConfig::default());
        for code in ["w2 ", "tkl", "tjs", "kl ", "js ", "ht "] {
            assert_eq!(
                text.lines().filter(|l| l.starts_with(code)).count(),
                1,
                "{code} row in:\n{text}"
            );
        }
        assert!(text.contains("3.06852819e-1"));
        assert!(text.contains("quadrature: 2048 nodes"));
    }

    #[test]
    fn cmd_compare_validates_quadrature_overrides() {
        let p = DensitySpec::parse("gaussian:0:1").unwrap();
        let mut sink = Vec::new();
        let err = cmd_compare(&p, &p, Some(8), None, &mut sink).unwrap_err();
        assert!(err.0.contains("--nodes"));
        let err = cmd_compare(&p, &p, None, Some(0.5), &mut sink).unwrap_err();
        assert!(err.0.contains("--clip"));
        cmd_compare(&p, &p, Some(256), Some(1e-7), &mut sink).unwrap();
        let text = String::from_utf8(sink).unwrap();
        assert!(text.contains("256 nodes"));
        assert!(text.contains("1e-7"));
    }
}
