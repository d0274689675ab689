//! Serializable view of a quadrature report.

use lfe_core::correction::Warning;
use lfe_core::{QuadratureReport, WindowKind};
use serde::Serialize;

#[derive(Debug, Serialize)]
pub struct WindowSummary {
    pub start: usize,
    pub kind: &'static str,
    pub covered: (usize, usize),
    pub eta: f64,
    pub contribution: f64,
}

#[derive(Debug, Serialize)]
pub struct CorrectionSummary {
    pub window: usize,
    pub cell: (f64, f64),
    pub xi: f64,
    pub bracketed: bool,
    pub original_contribution: f64,
    pub replaced_contribution: f64,
}

#[derive(Debug, Serialize)]
pub struct FailureSummary {
    pub window: usize,
    pub reason: String,
}

#[derive(Debug, Serialize)]
pub struct ReportSummary {
    pub value: f64,
    pub imag_residue: f64,
    pub a: f64,
    pub b: f64,
    #[serde(rename = "M")]
    pub m: usize,
    pub n: usize,
    pub m_window: usize,
    #[serde(rename = "T")]
    pub t: f64,
    pub epsilon: f64,
    pub windows: Vec<WindowSummary>,
    pub corrections: Vec<CorrectionSummary>,
    pub failed_corrections: Vec<FailureSummary>,
    pub warnings: Vec<String>,
}

fn warning_text(w: &Warning) -> String {
    match w {
        Warning::AdjacentFlagged { first, second } => format!("adjacent windows {first} and {second} both flagged"),
        Warning::LowConfidence { window_index, xi } => {
            format!("window {window_index}: no sign change on the cell, xi = {xi} from scan")
        }
    }
}

impl ReportSummary {
    pub fn new(r: &QuadratureReport, extra_warnings: &[String]) -> Self {
        let grid = &r.grid;
        let windows = r
            .window_results
            .iter()
            .map(|w| WindowSummary {
                start: w.window.start,
                kind: match w.window.kind {
                    WindowKind::Full => "full",
                    WindowKind::Tail => "tail",
                    WindowKind::Small => "small",
                },
                covered: w.window.covered,
                eta: w.eta,
                contribution: w.contribution,
            })
            .collect();
        let corrections = r
            .corrections
            .iter()
            .map(|c| CorrectionSummary {
                window: c.window_index,
                cell: (grid.node(c.localization.cell.0), grid.node(c.localization.cell.1)),
                xi: c.xi,
                bracketed: c.estimate.bracketed,
                original_contribution: c.original_contribution,
                replaced_contribution: c.replaced_contribution,
            })
            .collect();
        let failed_corrections = r
            .failed_corrections
            .iter()
            .map(|f| FailureSummary { window: f.window_index, reason: f.error.to_string() })
            .collect();
        let mut warnings: Vec<String> = r.warnings.iter().map(warning_text).collect();
        warnings.extend(extra_warnings.iter().cloned());
        let c = &r.config_used;
        Self {
            value: r.value,
            imag_residue: r.imag_residue,
            a: grid.a(),
            b: grid.b(),
            m: grid.cells(),
            n: c.n,
            m_window: c.m,
            t: c.t,
            epsilon: c.epsilon,
            windows,
            corrections,
            failed_corrections,
            warnings,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "value         {:.17e}\nimag_residue  {:.3e}\ngrid          [{}, {}], M = {}\nwindows       {}\n",
            self.value,
            self.imag_residue,
            self.a,
            self.b,
            self.m,
            self.windows.len()
        );
        for c in &self.corrections {
            s.push_str(&format!(
                "corrected     window {} on [{}, {}], xi = {:.15}{}\n",
                c.window,
                c.cell.0,
                c.cell.1,
                c.xi,
                if c.bracketed { "" } else { " (low confidence)" }
            ));
        }
        for f in &self.failed_corrections {
            s.push_str(&format!("uncorrected   window {}: {}\n", f.window, f.reason));
        }
        for w in &self.warnings {
            s.push_str(&format!("warning       {w}\n"));
        }
        s
    }
}
