//! File emission and ingestion: grid CSV, trajectory CSV, plain-text PPM
//! heat maps, and the external baseline trace.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use thiserror::Error;

use crate::experiments::{CellMetrics, CellStatus, ErrorGrid, MergedSample, TrajectorySample};
use crate::lidar::PointCloud;

#[derive(Debug, Error)]
pub enum IoError {
    #[error("{path}: {source}")]
    File {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },
    #[error("unknown metric `{0}` (expected center_error, bbox_area_error, yaw_error, or point_count)")]
    UnknownMetric(String),
    #[error("non-positive color scale span: [{0}, {1}]")]
    BadScale(f64, f64),
    #[error("grid is not a complete distance x yaw lattice")]
    IncompleteGrid,
}

fn write_file(path: &Path, contents: &str) -> Result<(), IoError> {
    std::fs::write(path, contents).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })
}

pub const GRID_CSV_HEADER: &str =
    "distance_m,yaw_deg,center_error_m,bbox_area_error_m2,yaw_error_deg,off_by_90,point_count,status";

/// Writes a grid as CSV, distance-major then yaw ascending. Failed cells
/// carry empty metric fields. Float formatting is Rust's shortest
/// round-trippable form, so re-reading reconstructs the grid exactly.
pub fn write_grid_csv(grid: &ErrorGrid, path: &Path) -> Result<(), IoError> {
    let mut out = String::new();
    out.push_str(GRID_CSV_HEADER);
    out.push('\n');
    for cell in &grid.cells {
        let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let off = cell
            .off_by_90
            .map(|b| b.to_string())
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            cell.distance,
            cell.yaw,
            opt(cell.center_error),
            opt(cell.bbox_area_error),
            opt(cell.yaw_error),
            off,
            cell.point_count,
            cell.status.label()
        )
        .expect("string write");
    }
    write_file(path, &out)
}

/// Reads a grid CSV produced by [`write_grid_csv`].
pub fn read_grid_csv(path: &Path) -> Result<ErrorGrid, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    let p = path.display().to_string();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, header)) if header == GRID_CSV_HEADER => {}
        _ => {
            return Err(IoError::Parse {
                path: p,
                line: 1,
                msg: format!("expected header `{GRID_CSV_HEADER}`"),
            })
        }
    }

    let mut cells = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(IoError::Parse {
                path: p.clone(),
                line: line_no,
                msg: format!("expected 8 fields, got {}", fields.len()),
            });
        }
        let req = |s: &str, what: &str| -> Result<f64, IoError> {
            f64::from_str(s).map_err(|_| IoError::Parse {
                path: p.clone(),
                line: line_no,
                msg: format!("bad {what}: `{s}`"),
            })
        };
        let opt = |s: &str, what: &str| -> Result<Option<f64>, IoError> {
            if s.is_empty() {
                Ok(None)
            } else {
                req(s, what).map(Some)
            }
        };
        let status = match fields[7] {
            "ok" => CellStatus::Ok,
            "too_few_points" => CellStatus::TooFewPoints,
            "fit_failed" => CellStatus::FitFailed,
            other => {
                return Err(IoError::Parse {
                    path: p.clone(),
                    line: line_no,
                    msg: format!("bad status: `{other}`"),
                })
            }
        };
        let off_by_90 = match fields[5] {
            "" => None,
            "true" => Some(true),
            "false" => Some(false),
            other => {
                return Err(IoError::Parse {
                    path: p.clone(),
                    line: line_no,
                    msg: format!("bad off_by_90: `{other}`"),
                })
            }
        };
        cells.push(CellMetrics {
            distance: req(fields[0], "distance_m")?,
            yaw: req(fields[1], "yaw_deg")?,
            center_error: opt(fields[2], "center_error_m")?,
            bbox_area_error: opt(fields[3], "bbox_area_error_m2")?,
            yaw_error: opt(fields[4], "yaw_error_deg")?,
            off_by_90,
            point_count: fields[6].parse().map_err(|_| IoError::Parse {
                path: p.clone(),
                line: line_no,
                msg: format!("bad point_count: `{}`", fields[6]),
            })?,
            status,
        });
    }

    // Reconstruct the axes and confirm the lattice is dense and ordered.
    let mut distances: Vec<f64> = Vec::new();
    for c in &cells {
        if distances.last() != Some(&c.distance) {
            distances.push(c.distance);
        }
    }
    distances.dedup();
    let n_dist = distances.len();
    if n_dist == 0 || cells.len() % n_dist != 0 {
        return Err(IoError::IncompleteGrid);
    }
    let n_yaw = cells.len() / n_dist;
    let yaws: Vec<f64> = cells.iter().take(n_yaw).map(|c| c.yaw).collect();
    for (i, c) in cells.iter().enumerate() {
        if c.distance != distances[i / n_yaw] || c.yaw != yaws[i % n_yaw] {
            return Err(IoError::IncompleteGrid);
        }
    }
    Ok(ErrorGrid {
        distances,
        yaws,
        cells,
    })
}

/// Heat-map metric selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    CenterError,
    BboxAreaError,
    YawError,
    PointCount,
}

impl FromStr for Metric {
    type Err = IoError;
    fn from_str(s: &str) -> Result<Self, IoError> {
        match s {
            "center_error" => Ok(Metric::CenterError),
            "bbox_area_error" => Ok(Metric::BboxAreaError),
            "yaw_error" => Ok(Metric::YawError),
            "point_count" => Ok(Metric::PointCount),
            other => Err(IoError::UnknownMetric(other.into())),
        }
    }
}

impl Metric {
    fn value(&self, cell: &CellMetrics) -> Option<f64> {
        match self {
            Metric::CenterError => cell.center_error,
            Metric::BboxAreaError => cell.bbox_area_error,
            Metric::YawError => cell.yaw_error,
            Metric::PointCount => Some(cell.point_count as f64),
        }
    }
}

/// Color of a failed (sentinel) cell: pure red, outside the grayscale ramp.
pub const SENTINEL_RGB: [u8; 3] = [255, 0, 0];

/// Renders one metric as a plain-text PPM (magic `P3`): one pixel per cell,
/// yaw along x, distance along y, grayscale ramp between the scale bounds.
/// No smoothing; every pixel is a pure function of its cell and the scale.
pub fn render_heatmap(
    grid: &ErrorGrid,
    metric: Metric,
    path: &Path,
    scale: (f64, f64),
) -> Result<(), IoError> {
    let (lo, hi) = scale;
    if !(hi > lo) {
        return Err(IoError::BadScale(lo, hi));
    }
    let width = grid.yaws.len();
    let height = grid.distances.len();
    if width == 0 || height == 0 || grid.cells.len() != width * height {
        return Err(IoError::IncompleteGrid);
    }
    let mut out = String::new();
    writeln!(out, "P3\n{width} {height}\n255").expect("string write");
    for di in 0..height {
        for yi in 0..width {
            let cell = grid.cell(di, yi);
            let [r, g, b] = match metric.value(cell) {
                None => SENTINEL_RGB,
                Some(v) => {
                    let t = ((v - lo) / (hi - lo)).clamp(0.0, 1.0);
                    let level = (t * 255.0).round() as u8;
                    [level, level, level]
                }
            };
            write!(out, "{r} {g} {b} ").expect("string write");
        }
        out.push('\n');
    }
    write_file(path, &out)
}

/// Reads an external baseline trace: header `position_m,error_m`, one sample
/// per row, duplicate positions rejected.
pub fn read_baseline_csv(path: &Path) -> Result<Vec<(f64, f64)>, IoError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::File {
        path: path.display().to_string(),
        source,
    })?;
    let p = path.display().to_string();
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h.trim() == "position_m,error_m" => {}
        _ => {
            return Err(IoError::Parse {
                path: p,
                line: 1,
                msg: "expected header `position_m,error_m`".into(),
            })
        }
    }
    let mut trace: Vec<(f64, f64)> = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let (pos_s, err_s) = line.split_once(',').ok_or_else(|| IoError::Parse {
            path: p.clone(),
            line: line_no,
            msg: format!("expected `position,error`, got `{line}`"),
        })?;
        let pos: f64 = pos_s.trim().parse().map_err(|_| IoError::Parse {
            path: p.clone(),
            line: line_no,
            msg: format!("bad position: `{pos_s}`"),
        })?;
        let err: f64 = err_s.trim().parse().map_err(|_| IoError::Parse {
            path: p.clone(),
            line: line_no,
            msg: format!("bad error: `{err_s}`"),
        })?;
        if trace.iter().any(|(q, _)| *q == pos) {
            return Err(IoError::Parse {
                path: p.clone(),
                line: line_no,
                msg: format!("duplicate position {pos}"),
            });
        }
        trace.push((pos, err));
    }
    Ok(trace)
}

/// Writes a trajectory trace as CSV.
pub fn write_trace_csv(trace: &[TrajectorySample], path: &Path) -> Result<(), IoError> {
    let mut out = String::from("position_m,error_m,off_by_90,status\n");
    for s in trace {
        writeln!(
            out,
            "{},{},{},{}",
            s.position,
            s.error.map(|e| e.to_string()).unwrap_or_default(),
            s.off_by_90.map(|b| b.to_string()).unwrap_or_default(),
            s.status.label()
        )
        .expect("string write");
    }
    write_file(path, &out)
}

/// Writes a baseline-joined trace as CSV.
pub fn write_merged_csv(merged: &[MergedSample], path: &Path) -> Result<(), IoError> {
    let mut out = String::from("position_m,error_m,baseline_error_m,status\n");
    for s in merged {
        writeln!(
            out,
            "{},{},{},{}",
            s.position,
            s.error.map(|e| e.to_string()).unwrap_or_default(),
            s.baseline_error.map(|e| e.to_string()).unwrap_or_default(),
            s.status.label()
        )
        .expect("string write");
    }
    write_file(path, &out)
}

/// Debug dump of a cloud with per-point surface tags.
pub fn write_cloud_csv(cloud: &PointCloud, path: &Path) -> Result<(), IoError> {
    let mut out = String::from("x,y,z,surface_tag\n");
    for (p, tag) in cloud.points.iter().zip(&cloud.tags) {
        writeln!(out, "{},{},{},{}", p.x, p.y, p.z, tag.label()).expect("string write");
    }
    write_file(path, &out)
}
