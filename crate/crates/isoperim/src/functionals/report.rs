//! One shape's full panel, serialized as a flat JSON object or a CSV row
//! with fixed field names.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct FunctionalReport {
    #[serde(rename = "P")]
    pub perimeter: f64,
    #[serde(rename = "V")]
    pub volume: f64,
    #[serde(rename = "D")]
    pub deficit: f64,
    pub gamma: f64,
    pub y_star: Vec<f64>,
    pub beta: f64,
    pub beta_direct: f64,
    pub alpha: f64,
    pub y_alpha: Vec<f64>,
    #[serde(rename = "A")]
    pub asymmetry: f64,
    #[serde(rename = "y_A")]
    pub y_asymmetry: Vec<f64>,
    pub res_identity: f64,
    #[serde(rename = "ratio_A2_D")]
    pub ratio_a2_d: Option<f64>,
    #[serde(rename = "ratio_b2_D")]
    pub ratio_b2_d: Option<f64>,
    pub ratio_prop: Option<f64>,
    pub sp_lhs: f64,
    pub sp_rhs: f64,
}

pub const CSV_FIELDS_LEN: usize = 17;

/// CSV columns, in order, matching the JSON field names.
pub const CSV_FIELDS: [&str; CSV_FIELDS_LEN] = [
    "P",
    "V",
    "D",
    "gamma",
    "y_star",
    "beta",
    "beta_direct",
    "alpha",
    "y_alpha",
    "A",
    "y_A",
    "res_identity",
    "ratio_A2_D",
    "ratio_b2_D",
    "ratio_prop",
    "sp_lhs",
    "sp_rhs",
];

fn fmt_point(p: &[f64]) -> String {
    p.iter()
        .map(|x| format!("{x}"))
        .collect::<Vec<_>>()
        .join(";")
}

fn parse_point(s: &str) -> Result<Vec<f64>> {
    s.split(';')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|e| Error::NoValidRows(format!("bad point component {t:?}: {e}")))
        })
        .collect()
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x}")).unwrap_or_default()
}

fn parse_f64(s: &str, field: &str) -> Result<f64> {
    s.trim()
        .parse::<f64>()
        .map_err(|e| Error::NoValidRows(format!("bad {field} value {s:?}: {e}")))
}

fn parse_opt(s: &str, field: &str) -> Result<Option<f64>> {
    let t = s.trim();
    if t.is_empty() {
        Ok(None)
    } else {
        parse_f64(t, field).map(Some)
    }
}

impl FunctionalReport {
    pub fn is_finite(&self) -> bool {
        let scalars = [
            self.perimeter,
            self.volume,
            self.deficit,
            self.gamma,
            self.beta,
            self.beta_direct,
            self.alpha,
            self.asymmetry,
            self.res_identity,
            self.sp_lhs,
            self.sp_rhs,
        ];
        scalars.iter().all(|v| v.is_finite())
            && self
                .y_star
                .iter()
                .chain(&self.y_alpha)
                .chain(&self.y_asymmetry)
                .all(|v| v.is_finite())
            && [self.ratio_a2_d, self.ratio_b2_d, self.ratio_prop]
                .iter()
                .flatten()
                .all(|v| v.is_finite())
    }

    /// Structural invariants of the panel.
    pub fn validate(&self) -> Result<()> {
        if !self.is_finite() {
            return Err(Error::InvalidShape("non-finite value in report".into()));
        }
        if self.deficit < -1e-9 {
            return Err(Error::InvalidShape(format!(
                "deficit {} below numerical slack",
                self.deficit
            )));
        }
        Ok(())
    }

    /// The 17 data cells of the fixed CSV schema.
    pub fn to_csv_cells(&self) -> Vec<String> {
        vec![
            format!("{}", self.perimeter),
            format!("{}", self.volume),
            format!("{}", self.deficit),
            format!("{}", self.gamma),
            fmt_point(&self.y_star),
            format!("{}", self.beta),
            format!("{}", self.beta_direct),
            format!("{}", self.alpha),
            fmt_point(&self.y_alpha),
            format!("{}", self.asymmetry),
            fmt_point(&self.y_asymmetry),
            format!("{}", self.res_identity),
            fmt_opt(self.ratio_a2_d),
            fmt_opt(self.ratio_b2_d),
            fmt_opt(self.ratio_prop),
            format!("{}", self.sp_lhs),
            format!("{}", self.sp_rhs),
        ]
    }

    pub fn from_csv_cells(cells: &[&str]) -> Result<Self> {
        if cells.len() != CSV_FIELDS.len() {
            return Err(Error::NoValidRows(format!(
                "expected {} report cells, got {}",
                CSV_FIELDS.len(),
                cells.len()
            )));
        }
        Ok(Self {
            perimeter: parse_f64(cells[0], "P")?,
            volume: parse_f64(cells[1], "V")?,
            deficit: parse_f64(cells[2], "D")?,
            gamma: parse_f64(cells[3], "gamma")?,
            y_star: parse_point(cells[4])?,
            beta: parse_f64(cells[5], "beta")?,
            beta_direct: parse_f64(cells[6], "beta_direct")?,
            alpha: parse_f64(cells[7], "alpha")?,
            y_alpha: parse_point(cells[8])?,
            asymmetry: parse_f64(cells[9], "A")?,
            y_asymmetry: parse_point(cells[10])?,
            res_identity: parse_f64(cells[11], "res_identity")?,
            ratio_a2_d: parse_opt(cells[12], "ratio_A2_D")?,
            ratio_b2_d: parse_opt(cells[13], "ratio_b2_D")?,
            ratio_prop: parse_opt(cells[14], "ratio_prop")?,
            sp_lhs: parse_f64(cells[15], "sp_lhs")?,
            sp_rhs: parse_f64(cells[16], "sp_rhs")?,
        })
    }
}
