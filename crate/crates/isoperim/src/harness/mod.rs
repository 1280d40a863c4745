//! Corpus generation, batch evaluation, empirical constant estimation and
//! machine-readable reporting.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{self, report::CSV_FIELDS_LEN, FunctionalReport, Params};
use crate::geometry::{Polygon, ShapeRep};
use crate::nearly_spherical::{self, SphericalFunction};

/// One named shape generator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "gen", rename_all = "kebab-case")]
pub enum ShapeGen {
    RegularNgon {
        sides: usize,
    },
    Square,
    Rectangle {
        aspect: f64,
    },
    Ellipse {
        aspect: f64,
        #[serde(default = "default_ellipse_vertices")]
        vertices: usize,
    },
    Stadium {
        length: f64,
        #[serde(default = "default_arc_vertices")]
        arc_vertices: usize,
    },
    PerturbedBall {
        mode: usize,
        amplitude: f64,
    },
    RandomFourier {
        seed: u64,
        modes: [usize; 2],
        scale: f64,
        #[serde(default = "default_count")]
        count: usize,
    },
    Translated {
        v: [f64; 2],
        of: Box<ShapeGen>,
    },
    Rotated {
        angle: f64,
        of: Box<ShapeGen>,
    },
}

fn default_ellipse_vertices() -> usize {
    1024
}

fn default_arc_vertices() -> usize {
    512
}

fn default_count() -> usize {
    1
}

/// A corpus: dimension, resolution, seed and the generator list.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusSpec {
    #[serde(default = "default_dim")]
    pub n: usize,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub seed: u64,
    pub shapes: Vec<ShapeGen>,
}

fn default_dim() -> usize {
    2
}

fn default_resolution() -> usize {
    4096
}

impl CorpusSpec {
    pub fn from_json_str(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn params(&self) -> Params {
        Params::with_quadrature_n(self.resolution)
    }
}

/// The 2D corpus used by the verification suites: polygons with corners,
/// elongated convex bodies, and the nearly-spherical band.
pub fn default_corpus() -> CorpusSpec {
    let mut shapes = Vec::new();
    for sides in 3..=12 {
        shapes.push(ShapeGen::RegularNgon { sides });
    }
    shapes.push(ShapeGen::Square);
    for aspect in [1.5, 2.0, 3.0] {
        shapes.push(ShapeGen::Rectangle { aspect });
    }
    for aspect in [1.2, 1.5, 2.0, 3.0] {
        shapes.push(ShapeGen::Ellipse {
            aspect,
            vertices: default_ellipse_vertices(),
        });
    }
    for length in [0.5, 1.0, 2.0] {
        shapes.push(ShapeGen::Stadium {
            length,
            arc_vertices: default_arc_vertices(),
        });
    }
    for mode in 2..=5 {
        for amplitude in [0.05, 0.12] {
            shapes.push(ShapeGen::PerturbedBall { mode, amplitude });
        }
    }
    shapes.push(ShapeGen::RandomFourier {
        seed: 1,
        modes: [2, 8],
        scale: 0.05,
        count: 4,
    });
    CorpusSpec {
        n: 2,
        resolution: 4096,
        seed: 0,
        shapes,
    }
}

fn gen_id(g: &ShapeGen) -> String {
    match g {
        ShapeGen::RegularNgon { sides } => format!("regular-ngon-{sides}"),
        ShapeGen::Square => "square".into(),
        ShapeGen::Rectangle { aspect } => format!("rectangle-{aspect}"),
        ShapeGen::Ellipse { aspect, .. } => format!("ellipse-{aspect}"),
        ShapeGen::Stadium { length, .. } => format!("stadium-{length}"),
        ShapeGen::PerturbedBall { mode, amplitude } => {
            format!("perturbed-ball-m{mode}-a{amplitude}")
        }
        ShapeGen::RandomFourier { seed, .. } => format!("random-fourier-s{seed}"),
        ShapeGen::Translated { of, .. } => format!("translated-{}", gen_id(of)),
        ShapeGen::Rotated { of, .. } => format!("rotated-{}", gen_id(of)),
    }
}

fn build_shapes(g: &ShapeGen, dim: usize) -> Result<Vec<ShapeRep>> {
    if dim != 2 {
        return Err(Error::InvalidConfig(
            "corpus generators are planar; use shape files for 3D".into(),
        ));
    }
    let shape = |s: ShapeRep| -> Vec<ShapeRep> { vec![s] };
    Ok(match g {
        ShapeGen::RegularNgon { sides } => {
            let m = *sides;
            if m < 3 {
                return Err(Error::InvalidConfig("an n-gon needs at least 3 sides".into()));
            }
            let verts = (0..m)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / m as f64
                        + std::f64::consts::PI / m as f64;
                    [t.cos(), t.sin()]
                })
                .collect();
            shape(ShapeRep::Polygon2D(Polygon::new(verts)?))
        }
        ShapeGen::Square => shape(ShapeRep::Polygon2D(Polygon::new(vec![
            [0.5, -0.5],
            [0.5, 0.5],
            [-0.5, 0.5],
            [-0.5, -0.5],
        ])?)),
        ShapeGen::Rectangle { aspect } => {
            let (w, h) = (0.5 * aspect, 0.5);
            shape(ShapeRep::Polygon2D(Polygon::new(vec![
                [w, -h],
                [w, h],
                [-w, h],
                [-w, -h],
            ])?))
        }
        ShapeGen::Ellipse { aspect, vertices } => {
            let verts = (0..*vertices)
                .map(|k| {
                    let t = 2.0 * std::f64::consts::PI * k as f64 / *vertices as f64;
                    [aspect * t.cos(), t.sin()]
                })
                .collect();
            shape(ShapeRep::Polygon2D(Polygon::new(verts)?))
        }
        ShapeGen::Stadium {
            length,
            arc_vertices,
        } => {
            let m = *arc_vertices;
            let half = 0.5 * length;
            let mut verts = Vec::with_capacity(2 * m + 2);
            for k in 0..=m {
                let a = -std::f64::consts::FRAC_PI_2
                    + std::f64::consts::PI * k as f64 / m as f64;
                verts.push([half + a.cos(), a.sin()]);
            }
            for k in 0..=m {
                let a = std::f64::consts::FRAC_PI_2
                    + std::f64::consts::PI * k as f64 / m as f64;
                verts.push([-half + a.cos(), a.sin()]);
            }
            shape(ShapeRep::Polygon2D(Polygon::new(verts)?))
        }
        ShapeGen::PerturbedBall { mode, amplitude } => {
            let u = SphericalFunction::Fourier(crate::geometry::Fourier::mode(
                *mode, *amplitude,
            )?);
            shape(nearly_spherical::normalize(&u)?.shape())
        }
        ShapeGen::RandomFourier {
            seed,
            modes,
            scale,
            count,
        } => {
            let family =
                nearly_spherical::random_family(*seed, *count, (modes[0], modes[1]), *scale);
            family
                .into_iter()
                .map(|f| {
                    nearly_spherical::normalize(&SphericalFunction::Fourier(f)).map(|n| n.shape())
                })
                .collect::<Result<Vec<_>>>()?
        }
        ShapeGen::Translated { v, of } => build_shapes(of, dim)?
            .into_iter()
            .map(|s| s.translate([v[0], v[1], 0.0]))
            .collect::<Result<Vec<_>>>()?,
        ShapeGen::Rotated { angle, of } => build_shapes(of, dim)?
            .into_iter()
            .map(|s| s.rotated(*angle))
            .collect::<Result<Vec<_>>>()?,
    })
}

/// Instantiates the corpus; every shape is rescaled to |E| = ω_n.
pub fn generate(spec: &CorpusSpec) -> Result<Vec<(String, ShapeRep)>> {
    let mut out = Vec::new();
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    for g in &spec.shapes {
        let base = gen_id(g);
        for s in build_shapes(g, spec.n)? {
            let (unit, _) = s.rescale_to_unit_volume();
            let k = seen.entry(base.clone()).or_insert(0);
            let id = if *k == 0 {
                base.clone()
            } else {
                format!("{base}-{k}")
            };
            *k += 1;
            out.push((id, unit));
        }
    }
    Ok(out)
}

/// One evaluated corpus entry.
#[derive(Debug, Clone)]
pub struct CorpusRow {
    pub id: String,
    pub report: Option<FunctionalReport>,
    pub error: Option<String>,
}

/// Evaluates the full panel over the corpus, in parallel, merging in
/// generation order. Individual shape failures (generation or evaluation)
/// become error rows and the run continues.
pub fn run_corpus(spec: &CorpusSpec, params: &Params) -> Result<Vec<CorpusRow>> {
    let mut items: Vec<(String, std::result::Result<ShapeRep, String>)> = Vec::new();
    let mut seen: std::collections::HashMap<String, usize> = std::collections::HashMap::new();
    let mut push = |base: String,
                    item: std::result::Result<ShapeRep, String>,
                    items: &mut Vec<(String, std::result::Result<ShapeRep, String>)>| {
        let k = seen.entry(base.clone()).or_insert(0);
        let id = if *k == 0 { base.clone() } else { format!("{base}-{k}") };
        *k += 1;
        items.push((id, item));
    };
    for g in &spec.shapes {
        let base = gen_id(g);
        match build_shapes(g, spec.n) {
            Ok(shapes) => {
                for s in shapes {
                    let (unit, _) = s.rescale_to_unit_volume();
                    push(base.clone(), Ok(unit), &mut items);
                }
            }
            Err(e) => push(base.clone(), Err(e.to_string()), &mut items),
        }
    }
    Ok(items
        .into_par_iter()
        .map(|(id, item)| match item {
            Err(e) => CorpusRow {
                id,
                report: None,
                error: Some(e),
            },
            Ok(shape) => match functionals::inequality_panel(&shape, params) {
                Ok((report, _)) => CorpusRow {
                    id,
                    report: Some(report),
                    error: None,
                },
                Err(e) => CorpusRow {
                    id,
                    report: None,
                    error: Some(e.to_string()),
                },
            },
        })
        .collect())
}

/// Parameter-free assertion failures per row (empty when all rows pass).
pub fn corpus_violations(rows: &[CorpusRow]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for row in rows {
        if let Some(r) = &row.report {
            for v in functionals::assertion_failures(r) {
                out.push((row.id.clone(), v));
            }
        }
    }
    out
}

/// Writes the fixed-schema CSV: `shape,<report fields>,error`.
pub fn write_corpus_csv<W: std::io::Write>(rows: &[CorpusRow], w: W) -> Result<()> {
    let mut wtr = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(w);
    let mut header = vec!["shape".to_string()];
    header.extend(functionals::report::CSV_FIELDS.iter().map(|s| s.to_string()));
    header.push("error".into());
    wtr.write_record(&header)?;
    for row in rows {
        let mut cells = vec![row.id.clone()];
        match &row.report {
            Some(r) => {
                cells.extend(r.to_csv_cells());
                cells.push(String::new());
            }
            None => {
                cells.extend((0..CSV_FIELDS_LEN).map(|_| String::new()));
                cells.push(row.error.clone().unwrap_or_else(|| "error".into()));
            }
        }
        wtr.write_record(&cells)?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_corpus_csv<R: std::io::Read>(r: R) -> Result<Vec<CorpusRow>> {
    let mut rdr = csv::ReaderBuilder::new().from_reader(r);
    let mut out = Vec::new();
    for rec in rdr.records() {
        let rec = rec?;
        if rec.len() != CSV_FIELDS_LEN + 2 {
            return Err(Error::NoValidRows(format!(
                "expected {} columns, got {}",
                CSV_FIELDS_LEN + 2,
                rec.len()
            )));
        }
        let id = rec[0].to_string();
        let err = rec[rec.len() - 1].trim();
        if !err.is_empty() {
            out.push(CorpusRow {
                id,
                report: None,
                error: Some(err.to_string()),
            });
            continue;
        }
        let cells: Vec<&str> = (1..=CSV_FIELDS_LEN).map(|i| &rec[i]).collect();
        out.push(CorpusRow {
            id,
            report: Some(FunctionalReport::from_csv_cells(&cells)?),
            error: None,
        });
    }
    Ok(out)
}

/// Empirical constants harvested from corpus results.
#[derive(Debug, Clone, Serialize)]
pub struct ConstantsReport {
    /// max A²/D over valid rows.
    pub c_main: f64,
    pub c_main_shape: String,
    /// max A²/D over the nearly-spherical sub-corpus.
    pub c0: Option<f64>,
    pub c0_shape: Option<String>,
    /// max (A + √D)/β.
    pub c_prop: f64,
    pub c_prop_shape: String,
    /// max α²/D, the Fraenkel-only constant estimate.
    pub alpha_sq_over_d_max: f64,
    pub alpha_sq_shape: String,
    /// Analytic lower bound 32/(3π) that the mode-2 family must reproduce.
    pub c_main_lower_bound: f64,
    /// min D/‖u‖² over a random nearly-spherical family, when supplied.
    pub fuglede_c: Option<f64>,
    /// Relative drift of (c_main, c_prop) against a comparison run.
    pub stability: Option<[f64; 2]>,
    pub rows_used: usize,
}

fn is_nearly_spherical_id(id: &str) -> bool {
    id.starts_with("perturbed-ball") || id.starts_with("random-fourier")
}

/// Harvests maxima over all rows with D > 1e-10.
pub fn estimate_constants(
    rows: &[CorpusRow],
    fuglede_c: Option<f64>,
    compare: Option<&[CorpusRow]>,
) -> Result<ConstantsReport> {
    let valid: Vec<(&str, &FunctionalReport)> = rows
        .iter()
        .filter_map(|r| r.report.as_ref().map(|rep| (r.id.as_str(), rep)))
        .filter(|(_, rep)| rep.deficit > 1e-10)
        .collect();
    if valid.is_empty() {
        return Err(Error::NoValidRows(
            "no rows with D > 1e-10; constants are undefined on balls".into(),
        ));
    }
    let max_by = |f: &dyn Fn(&FunctionalReport) -> Option<f64>| -> Option<(f64, String)> {
        let mut best: Option<(f64, String)> = None;
        for (id, rep) in &valid {
            if let Some(v) = f(rep) {
                if best.as_ref().is_none_or(|(b, _)| v > *b) {
                    best = Some((v, id.to_string()));
                }
            }
        }
        best
    };
    let a2d = |r: &FunctionalReport| r.ratio_a2_d;
    let (c_main, c_main_shape) =
        max_by(&a2d).ok_or_else(|| Error::NoValidRows("no A²/D ratios".into()))?;
    let (c_prop, c_prop_shape) = max_by(&|r| r.ratio_prop)
        .ok_or_else(|| Error::NoValidRows("no (A+√D)/β ratios".into()))?;
    let (alpha_max, alpha_shape) = max_by(&|r| {
        (r.deficit > 1e-10).then(|| r.alpha * r.alpha / r.deficit)
    })
    .expect("valid rows exist");
    let mut c0 = None;
    let mut c0_shape = None;
    for (id, rep) in &valid {
        if is_nearly_spherical_id(id) {
            if let Some(v) = rep.ratio_a2_d {
                if c0.is_none_or(|b| v > b) {
                    c0 = Some(v);
                    c0_shape = Some(id.to_string());
                }
            }
        }
    }
    let stability = compare.map(|other| {
        let get = |rows: &[CorpusRow], pick: &dyn Fn(&FunctionalReport) -> Option<f64>| {
            rows.iter()
                .filter_map(|r| r.report.as_ref().and_then(pick))
                .fold(f64::MIN, f64::max)
        };
        let m2 = get(other, &a2d);
        let p2 = get(other, &|r| r.ratio_prop);
        [
            (c_main - m2).abs() / c_main.abs().max(1e-300),
            (c_prop - p2).abs() / c_prop.abs().max(1e-300),
        ]
    });
    Ok(ConstantsReport {
        c_main,
        c_main_shape,
        c0,
        c0_shape,
        c_prop,
        c_prop_shape,
        alpha_sq_over_d_max: alpha_max,
        alpha_sq_shape: alpha_shape,
        c_main_lower_bound: 32.0 / (3.0 * std::f64::consts::PI),
        fuglede_c,
        stability,
        rows_used: valid.len(),
    })
}

/// One row of a quadrature refinement study.
#[derive(Debug, Clone, Serialize)]
pub struct RefineRow {
    pub n: usize,
    #[serde(rename = "P")]
    pub perimeter: f64,
    pub gamma: f64,
    pub beta_sq: f64,
    pub res_identity: f64,
}

/// Evaluates P, γ and β² across the resolutions in `n_list` (ascending).
pub fn refinement_study(
    shape: &ShapeRep,
    n_list: &[usize],
    params: &Params,
) -> Result<Vec<RefineRow>> {
    if n_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidConfig("resolution list must be ascending".into()));
    }
    let (unit, _) = shape.rescale_to_unit_volume();
    let nf = unit.dim() as f64;
    n_list
        .iter()
        .map(|&n| {
            let p_n = match &unit {
                ShapeRep::RadialGraph2D(f) => f.arc_length_at(n),
                other => other.perimeter(),
            };
            let q = unit.boundary_quadrature(n)?;
            let p = Params {
                quadrature_n: n,
                ..*params
            };
            let center = functionals::gamma(&unit, &p)?;
            let beta_sq = (p_n - (nf - 1.0) * center.gamma).max(0.0);
            let direct = functionals::oscillation(&q, center.y_star)?;
            Ok(RefineRow {
                n,
                perimeter: p_n,
                gamma: center.gamma,
                beta_sq,
                res_identity: (beta_sq - direct).abs(),
            })
        })
        .collect()
}

/// Observed convergence order between consecutive errors against a
/// reference value; `None` once the error sits at the noise floor.
pub fn observed_orders(values: &[f64], reference: f64, floor: f64) -> Vec<Option<f64>> {
    values
        .windows(2)
        .map(|w| {
            let e0 = (w[0] - reference).abs();
            let e1 = (w[1] - reference).abs();
            if e0 < floor || e1 < floor {
                None
            } else {
                Some((e0 / e1).log2())
            }
        })
        .collect()
}
