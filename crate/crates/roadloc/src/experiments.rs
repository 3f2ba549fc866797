//! Evaluation harnesses: the distance x yaw error-grid sweep and the
//! straight-road trajectory run.

use rayon::prelude::*;
use thiserror::Error;

use crate::boxfit::{lshape_fit, size_correct, FitError, LShapeConfig};
use crate::geom::{yaw_error_mod90, Pose2D, VehicleDims};
use crate::lidar::{cast_frame, vehicle_point_count, GroundBox, LidarSpec, SceneModel};
use crate::perception::{filter_background, filter_ground, project_to_plane, ReferenceFrame};

#[derive(Debug, Error, PartialEq)]
pub enum ExperimentError {
    #[error("invalid sweep config: {0}")]
    InvalidSweep(String),
    #[error("invalid trajectory config: {0}")]
    InvalidTrajectory(String),
    #[error("baseline positions do not overlap the run")]
    DisjointBaseline,
}

/// Pilot sweep: the vehicle is placed at every (distance, yaw) combination on
/// the +x axis from the LiDAR mount.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub distance_min: f64,
    pub distance_max: f64,
    pub distance_step: f64,
    pub yaw_step: f64,
    pub lidar: LidarSpec,
    pub vehicle: VehicleDims,
    pub correction_enabled: bool,
    pub lshape: LShapeConfig,
    /// Ground-height filter threshold, meters.
    pub z_threshold: f64,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.distance_min < 0.0 {
            return Err(ExperimentError::InvalidSweep(format!(
                "distance_min must be >= 0, got {}",
                self.distance_min
            )));
        }
        if self.distance_step <= 0.0 {
            return Err(ExperimentError::InvalidSweep(format!(
                "distance_step must be > 0, got {}",
                self.distance_step
            )));
        }
        if self.distance_max < self.distance_min {
            return Err(ExperimentError::InvalidSweep(
                "distance_max must be >= distance_min".into(),
            ));
        }
        if self.yaw_step <= 0.0 {
            return Err(ExperimentError::InvalidSweep(format!(
                "yaw_step must be > 0, got {}",
                self.yaw_step
            )));
        }
        let n = 360.0 / self.yaw_step;
        if (n - n.round()).abs() > 1e-9 {
            return Err(ExperimentError::InvalidSweep(format!(
                "yaw_step must divide 360 evenly, got {}",
                self.yaw_step
            )));
        }
        if self.z_threshold < 0.0 {
            return Err(ExperimentError::InvalidSweep(
                "z_threshold must be >= 0".into(),
            ));
        }
        self.lidar
            .validate()
            .map_err(|e| ExperimentError::InvalidSweep(e.to_string()))?;
        self.lshape
            .validate()
            .map_err(|e| ExperimentError::InvalidSweep(e.to_string()))?;
        Ok(())
    }

    pub fn distances(&self) -> Vec<f64> {
        let n = ((self.distance_max - self.distance_min) / self.distance_step + 1e-9).floor()
            as usize
            + 1;
        (0..n)
            .map(|i| self.distance_min + i as f64 * self.distance_step)
            .collect()
    }

    pub fn yaws(&self) -> Vec<f64> {
        let n = (360.0 / self.yaw_step).round() as usize;
        (0..n).map(|i| i as f64 * self.yaw_step).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CellStatus {
    Ok,
    TooFewPoints,
    FitFailed,
}

impl CellStatus {
    pub fn label(&self) -> &'static str {
        match self {
            CellStatus::Ok => "ok",
            CellStatus::TooFewPoints => "too_few_points",
            CellStatus::FitFailed => "fit_failed",
        }
    }
}

/// Metrics for one (distance, yaw) cell. Error fields are `None` unless
/// `status` is `Ok`.
#[derive(Debug, Clone, PartialEq)]
pub struct CellMetrics {
    pub distance: f64,
    pub yaw: f64,
    pub center_error: Option<f64>,
    pub bbox_area_error: Option<f64>,
    pub yaw_error: Option<f64>,
    pub off_by_90: Option<bool>,
    pub point_count: usize,
    pub status: CellStatus,
}

/// Dense grid of cell metrics, distance-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorGrid {
    pub distances: Vec<f64>,
    pub yaws: Vec<f64>,
    pub cells: Vec<CellMetrics>,
}

impl ErrorGrid {
    pub fn cell(&self, distance_idx: usize, yaw_idx: usize) -> &CellMetrics {
        &self.cells[distance_idx * self.yaws.len() + yaw_idx]
    }
}

/// Runs the full pilot sweep. Per-cell failures are recorded in the cell
/// status and never abort the sweep. Deterministic for a fixed config and
/// seed, regardless of evaluation order.
pub fn run_sweep(config: &SweepConfig, seed: u64) -> Result<ErrorGrid, ExperimentError> {
    config.validate()?;
    let distances = config.distances();
    let yaws = config.yaws();
    let n_yaw = yaws.len();
    let cells: Vec<CellMetrics> = (0..distances.len() * n_yaw)
        .into_par_iter()
        .map(|idx| {
            let d = distances[idx / n_yaw];
            let yaw = yaws[idx % n_yaw];
            eval_sweep_cell(config, d, yaw, mix_seed(seed, idx as u64))
        })
        .collect();
    Ok(ErrorGrid {
        distances,
        yaws,
        cells,
    })
}

fn eval_sweep_cell(config: &SweepConfig, distance: f64, yaw: f64, seed: u64) -> CellMetrics {
    let mount = config.lidar.mount;
    let truth = [mount.x + distance, mount.y];
    let pose = Pose2D::new(truth[0], truth[1], yaw).expect("finite pose");
    let scene = SceneModel {
        vehicle: Some((config.vehicle, pose)),
        occluders: vec![],
        ground: true,
    };
    let cloud = cast_frame(&config.lidar, &scene, seed);
    let point_count = vehicle_point_count(&cloud);
    let fg = filter_ground(&cloud, config.z_threshold).expect("threshold validated");
    let pts = project_to_plane(&fg);

    let mut cell = CellMetrics {
        distance,
        yaw,
        center_error: None,
        bbox_area_error: None,
        yaw_error: None,
        off_by_90: None,
        point_count,
        status: CellStatus::Ok,
    };
    let fitted = match lshape_fit(&pts, &config.lshape) {
        Ok(b) => b,
        Err(FitError::TooFewPoints { .. }) => {
            cell.status = CellStatus::TooFewPoints;
            return cell;
        }
        Err(_) => {
            cell.status = CellStatus::FitFailed;
            return cell;
        }
    };
    let center = if config.correction_enabled {
        size_correct(&fitted, &config.vehicle, [mount.x, mount.y]).center
    } else {
        fitted.center()
    };
    let (yaw_err, off90) = yaw_error_mod90(fitted.yaw(), yaw).expect("finite yaws");
    cell.center_error = Some((center[0] - truth[0]).hypot(center[1] - truth[1]));
    cell.bbox_area_error = Some((fitted.area() - config.vehicle.footprint_area()).abs());
    cell.yaw_error = Some(yaw_err);
    cell.off_by_90 = Some(off90);
    cell
}

/// Straight-road run: the vehicle drives along the x axis (y = 0, heading
/// +x); the LiDAR mount pose lives in `lidar.mount`.
#[derive(Debug, Clone)]
pub struct TrajectoryConfig {
    pub longitudinal_min: f64,
    pub longitudinal_max: f64,
    pub sample_step: f64,
    pub lidar: LidarSpec,
    pub vehicle: VehicleDims,
    pub occluders: Vec<GroundBox>,
    /// Background-subtraction correspondence threshold, meters.
    pub epsilon: f64,
    pub lshape: LShapeConfig,
}

impl TrajectoryConfig {
    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.sample_step <= 0.0 {
            return Err(ExperimentError::InvalidTrajectory(format!(
                "sample_step must be > 0, got {}",
                self.sample_step
            )));
        }
        if self.longitudinal_max < self.longitudinal_min {
            return Err(ExperimentError::InvalidTrajectory(
                "empty longitudinal range".into(),
            ));
        }
        if self.epsilon <= 0.0 {
            return Err(ExperimentError::InvalidTrajectory(
                "epsilon must be > 0".into(),
            ));
        }
        self.lidar
            .validate()
            .map_err(|e| ExperimentError::InvalidTrajectory(e.to_string()))?;
        self.lshape
            .validate()
            .map_err(|e| ExperimentError::InvalidTrajectory(e.to_string()))?;
        for o in &self.occluders {
            o.validate()
                .map_err(|e| ExperimentError::InvalidTrajectory(e.to_string()))?;
        }
        Ok(())
    }

    pub fn positions(&self) -> Vec<f64> {
        let n = ((self.longitudinal_max - self.longitudinal_min) / self.sample_step + 1e-9)
            .floor() as usize
            + 1;
        (0..n)
            .map(|i| self.longitudinal_min + i as f64 * self.sample_step)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrajectorySample {
    pub position: f64,
    pub error: Option<f64>,
    pub off_by_90: Option<bool>,
    pub status: CellStatus,
}

/// Runs the trajectory evaluation: background subtraction against a
/// vehicle-free reference frame, then L-shape fitting with size correction
/// always enabled.
pub fn run_trajectory(
    config: &TrajectoryConfig,
    seed: u64,
) -> Result<Vec<TrajectorySample>, ExperimentError> {
    config.validate()?;
    let background_scene = SceneModel {
        vehicle: None,
        occluders: config.occluders.clone(),
        ground: true,
    };
    let reference = ReferenceFrame::new(cast_frame(
        &config.lidar,
        &background_scene,
        mix_seed(seed, u64::MAX),
    ));
    let mount = config.lidar.mount;
    let positions = config.positions();
    let samples: Vec<TrajectorySample> = positions
        .par_iter()
        .enumerate()
        .map(|(i, &x)| {
            eval_trajectory_sample(config, &reference, mount.x, mount.y, x, mix_seed(seed, i as u64))
        })
        .collect();
    Ok(samples)
}

fn eval_trajectory_sample(
    config: &TrajectoryConfig,
    reference: &ReferenceFrame,
    mount_x: f64,
    mount_y: f64,
    x: f64,
    seed: u64,
) -> TrajectorySample {
    let pose = Pose2D::new(x, 0.0, 0.0).expect("finite pose");
    let scene = SceneModel {
        vehicle: Some((config.vehicle, pose)),
        occluders: config.occluders.clone(),
        ground: true,
    };
    let cloud = cast_frame(&config.lidar, &scene, seed);
    let fg = filter_background(&cloud, reference, config.epsilon).expect("epsilon validated");
    let pts = project_to_plane(&fg);

    let mut sample = TrajectorySample {
        position: x,
        error: None,
        off_by_90: None,
        status: CellStatus::Ok,
    };
    let fitted = match lshape_fit(&pts, &config.lshape) {
        Ok(b) => b,
        Err(FitError::TooFewPoints { .. }) => {
            sample.status = CellStatus::TooFewPoints;
            return sample;
        }
        Err(_) => {
            sample.status = CellStatus::FitFailed;
            return sample;
        }
    };
    let corrected = size_correct(&fitted, &config.vehicle, [mount_x, mount_y]);
    let (_, off90) = yaw_error_mod90(fitted.yaw(), 0.0).expect("finite yaws");
    sample.error = Some((corrected.center[0] - x).hypot(corrected.center[1]));
    sample.off_by_90 = Some(off90);
    sample
}

/// Per-range statistics over the status-ok samples of a trajectory trace.
#[derive(Debug, Clone, PartialEq)]
pub struct RangeSummary {
    pub range: (f64, f64),
    pub ok_count: usize,
    pub failed_count: usize,
    /// `None` when the range contains no status-ok samples.
    pub stats: Option<RangeStats>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RangeStats {
    pub mean_abs_error: f64,
    pub p25: f64,
    pub p50: f64,
    pub p75: f64,
}

/// Summarizes a trace over position ranges. Percentiles use linear
/// interpolation between order statistics (the common "type 7" rule:
/// rank = q * (n - 1)).
pub fn summarize(trace: &[TrajectorySample], ranges: &[(f64, f64)]) -> Vec<RangeSummary> {
    ranges
        .iter()
        .map(|&(lo, hi)| {
            let in_range: Vec<&TrajectorySample> = trace
                .iter()
                .filter(|s| s.position >= lo && s.position <= hi)
                .collect();
            let mut errors: Vec<f64> = in_range
                .iter()
                .filter(|s| s.status == CellStatus::Ok)
                .filter_map(|s| s.error)
                .collect();
            let failed_count = in_range.len() - errors.len();
            errors.sort_by(|a, b| a.partial_cmp(b).unwrap());
            let stats = if errors.is_empty() {
                None
            } else {
                let mae =
                    errors.iter().map(|e| e.abs()).sum::<f64>() / errors.len() as f64;
                Some(RangeStats {
                    mean_abs_error: mae,
                    p25: percentile(&errors, 0.25),
                    p50: percentile(&errors, 0.50),
                    p75: percentile(&errors, 0.75),
                })
            };
            RangeSummary {
                range: (lo, hi),
                ok_count: errors.len(),
                failed_count,
                stats,
            }
        })
        .collect()
}

/// Linear-interpolation percentile of an ascending-sorted slice.
pub fn percentile(sorted: &[f64], q: f64) -> f64 {
    assert!(!sorted.is_empty());
    let rank = q * (sorted.len() - 1) as f64;
    let lo = rank.floor() as usize;
    let hi = rank.ceil() as usize;
    let frac = rank - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

/// A trace sample joined with the nearest baseline sample, when one exists
/// within half a sample step.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedSample {
    pub position: f64,
    pub error: Option<f64>,
    pub status: CellStatus,
    pub baseline_error: Option<f64>,
}

/// Nearest-position join of a trajectory trace with an external baseline
/// trace (position, error). Samples with no baseline within
/// `sample_step / 2` are flagged with `baseline_error = None`.
pub fn compare_with_baseline(
    trace: &[TrajectorySample],
    baseline: &[(f64, f64)],
    sample_step: f64,
) -> Result<Vec<MergedSample>, ExperimentError> {
    let merged: Vec<MergedSample> = trace
        .iter()
        .map(|s| {
            let nearest = baseline
                .iter()
                .map(|&(p, e)| ((p - s.position).abs(), e))
                .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let baseline_error = match nearest {
                Some((d, e)) if d <= sample_step / 2.0 => Some(e),
                _ => None,
            };
            MergedSample {
                position: s.position,
                error: s.error,
                status: s.status,
                baseline_error,
            }
        })
        .collect();
    if !trace.is_empty() && merged.iter().all(|m| m.baseline_error.is_none()) {
        return Err(ExperimentError::DisjointBaseline);
    }
    Ok(merged)
}

/// Splitmix64-style mixer deriving independent per-cell seeds.
pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed
        .wrapping_mul(0x9e3779b97f4a7c15)
        .wrapping_add(index.wrapping_mul(0xbf58476d1ce4e5b9))
        .wrapping_add(0x94d049bb133111eb);
    z ^= z >> 30;
    z = z.wrapping_mul(0xbf58476d1ce4e5b9);
    z ^= z >> 27;
    z = z.wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}
