//! The NMF-vs-RRR comparison table.
//!
//! For each requested square size M = N = s the table reports the NMF RLCT
//! bound and the exact reduced-rank-regression RLCT for the standard row
//! layout: (H = M, H0 = 0), then H = H0 = k for k = 1..5, with the RRR rank
//! r swept over the admissible values in the two top rows' style. Cells are
//! `-` where the configuration is dimensionally impossible, and a value is
//! parenthesized when the (rank, nonnegative rank) pair behind it violates
//! the known nonnegative-rank constraints.

use std::fmt::Write as _;

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::model::{ModelDims, RrrTruth, TrueStructure};
use crate::rational::Rational;
use crate::rlct::{nmf_rlct_bound, rank_feasibility, rrr_rlct, RankFeasibility};

/// One table cell: a dash, or an exact rational possibly parenthesized.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TableCell {
    Dash,
    Value { value: Rational, parenthesized: bool },
}

impl TableCell {
    /// The cell as printed: `-`, `9/2`, or `(9/2)`.
    pub fn text(&self) -> String {
        match self {
            TableCell::Dash => "-".to_string(),
            TableCell::Value { value, parenthesized: false } => value.to_string(),
            TableCell::Value { value, parenthesized: true } => format!("({value})"),
        }
    }

    pub fn value(&self) -> Option<Rational> {
        match self {
            TableCell::Dash => None,
            TableCell::Value { value, .. } => Some(*value),
        }
    }
}

impl Serialize for TableCell {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            TableCell::Dash => {
                let mut s = serializer.serialize_struct("TableCell", 1)?;
                s.serialize_field("text", "-")?;
                s.end()
            }
            TableCell::Value { value, parenthesized } => {
                let mut s = serializer.serialize_struct("TableCell", 3)?;
                s.serialize_field("text", &self.text())?;
                s.serialize_field("value", value)?;
                s.serialize_field("parenthesized", parenthesized)?;
                s.end()
            }
        }
    }
}

/// A model row (one NMF configuration) together with its RRR sub-rows.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TableRowGroup {
    /// Label of the NMF configuration, e.g. `NMF H=M, H0=0` or `NMF H=H0=4`.
    pub label: String,
    /// One NMF cell per requested size.
    pub nmf: Vec<TableCell>,
    /// RRR sub-rows: label (e.g. `RRR r=3`) and one cell per size.
    pub rrr: Vec<(String, Vec<TableCell>)>,
}

/// The full comparison table over square sizes M = N.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonTable {
    pub sizes: Vec<u32>,
    pub groups: Vec<TableRowGroup>,
}

/// Row layout mirrored from the published table: (H, H0, admissible r
/// values); `None` for H means H = M (the size column's value).
const ROW_SPECS: &[(Option<u32>, u32, &[u32])] = &[
    (None, 0, &[0]),
    (Some(1), 1, &[1]),
    (Some(2), 2, &[2]),
    (Some(3), 3, &[3]),
    (Some(4), 4, &[3, 4]),
    (Some(5), 5, &[3, 4, 5]),
];

fn nmf_cell(s: u32, h: u32, h0: u32) -> Result<TableCell> {
    if h0 > s.min(h) {
        return Ok(TableCell::Dash);
    }
    let v = nmf_rlct_bound(&ModelDims::new(s, s, h)?, &TrueStructure::rank_only(h0))?;
    Ok(TableCell::Value { value: v.value, parenthesized: false })
}

fn rrr_cell(s: u32, h: u32, r: u32, h0: u32) -> Result<TableCell> {
    if r > s.min(h) {
        return Ok(TableCell::Dash);
    }
    let v = rrr_rlct(&ModelDims::new(s, s, h)?, &RrrTruth::new(r))?;
    let parenthesized = rank_feasibility(s, s, r, h0) != RankFeasibility::Feasible;
    Ok(TableCell::Value { value: v.value, parenthesized })
}

/// Builds the comparison table for the given square sizes.
pub fn comparison_table(sizes: &[u32]) -> Result<ComparisonTable> {
    let mut groups = Vec::with_capacity(ROW_SPECS.len());
    for &(h_spec, h0, rs) in ROW_SPECS {
        // Labels stay comma-free so the CSV rendering needs no quoting.
        let label = match h_spec {
            None => format!("NMF H=M H0={h0}"),
            Some(h) if h == h0 => format!("NMF H=H0={h0}"),
            Some(h) => format!("NMF H={h} H0={h0}"),
        };
        let mut nmf = Vec::with_capacity(sizes.len());
        for &s in sizes {
            let h = h_spec.unwrap_or(s);
            nmf.push(nmf_cell(s, h, h0)?);
        }
        let mut rrr = Vec::with_capacity(rs.len());
        for &r in rs {
            let mut cells = Vec::with_capacity(sizes.len());
            for &s in sizes {
                let h = h_spec.unwrap_or(s);
                cells.push(rrr_cell(s, h, r, h0)?);
            }
            rrr.push((format!("RRR r={r}"), cells));
        }
        groups.push(TableRowGroup { label, nmf, rrr });
    }
    Ok(ComparisonTable { sizes: sizes.to_vec(), groups })
}

impl ComparisonTable {
    /// CSV rendering: a header of sizes, then one line per table row.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = self.sizes.iter().map(|s| format!("M=N={s}")).collect();
        let _ = writeln!(out, "model,{}", header.join(","));
        for g in &self.groups {
            let cells: Vec<String> = g.nmf.iter().map(TableCell::text).collect();
            let _ = writeln!(out, "{},{}", g.label, cells.join(","));
            for (label, row) in &g.rrr {
                let cells: Vec<String> = row.iter().map(TableCell::text).collect();
                let _ = writeln!(out, "{label},{}", cells.join(","));
            }
        }
        out
    }
}
