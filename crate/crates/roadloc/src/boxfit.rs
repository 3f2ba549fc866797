//! L-shape rectangle fitting and dimension-based center correction.
//!
//! `lshape_fit` searches rectangle orientations over [0, 90) degrees and keeps
//! the one whose closeness score is highest: points hugging the rectangle's
//! edges contribute large reciprocal distances. `size_correct` then anchors a
//! box of the vehicle's true dimensions at the fitted corner nearest the
//! sensor, which is the most reliably observed one.

use thiserror::Error;

use crate::geom::{GeomError, Obb2D, VehicleDims};

#[derive(Debug, Error, PartialEq)]
pub enum FitError {
    #[error("need at least {need} points, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("points are collinear; no rectangle orientation is defined")]
    Collinear,
    #[error("invalid config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Geom(#[from] GeomError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LShapeConfig {
    /// Orientation search granularity over [0, 90) degrees.
    pub angle_step: f64,
    /// Floor for the closeness-score denominator, meters.
    pub min_dist_clamp: f64,
    pub min_points: usize,
}

impl Default for LShapeConfig {
    fn default() -> Self {
        Self {
            angle_step: 1.0,
            min_dist_clamp: 0.01,
            min_points: 3,
        }
    }
}

impl LShapeConfig {
    pub fn validate(&self) -> Result<(), FitError> {
        if !(self.angle_step > 0.0 && self.angle_step <= 15.0) {
            return Err(FitError::InvalidConfig(format!(
                "angle_step must be in (0, 15], got {}",
                self.angle_step
            )));
        }
        if self.min_dist_clamp <= 0.0 {
            return Err(FitError::InvalidConfig(format!(
                "min_dist_clamp must be > 0, got {}",
                self.min_dist_clamp
            )));
        }
        if self.min_points < 3 {
            return Err(FitError::InvalidConfig(format!(
                "min_points must be >= 3, got {}",
                self.min_points
            )));
        }
        Ok(())
    }
}

/// Closeness score of orientation `theta_deg` for the point set: each point
/// contributes the reciprocal of its distance to the nearer projection
/// extremum on each of the two axes, clamped below by `clamp`.
pub fn closeness_score(points: &[[f64; 2]], theta_deg: f64, clamp: f64) -> f64 {
    let (s, c) = theta_deg.to_radians().sin_cos();
    let mut min1 = f64::INFINITY;
    let mut max1 = f64::NEG_INFINITY;
    let mut min2 = f64::INFINITY;
    let mut max2 = f64::NEG_INFINITY;
    for p in points {
        let c1 = p[0] * c + p[1] * s;
        let c2 = -p[0] * s + p[1] * c;
        min1 = min1.min(c1);
        max1 = max1.max(c1);
        min2 = min2.min(c2);
        max2 = max2.max(c2);
    }
    let mut score = 0.0;
    for p in points {
        let c1 = p[0] * c + p[1] * s;
        let c2 = -p[0] * s + p[1] * c;
        let d1 = (max1 - c1).min(c1 - min1);
        let d2 = (max2 - c2).min(c2 - min2);
        score += 1.0 / d1.max(clamp);
        score += 1.0 / d2.max(clamp);
    }
    score
}

/// Fits a 2D oriented rectangle by maximizing the closeness score over the
/// orientation grid {0, step, 2*step, ...} < 90 degrees. Ties go to the
/// smaller orientation.
pub fn lshape_fit(points: &[[f64; 2]], config: &LShapeConfig) -> Result<Obb2D, FitError> {
    config.validate()?;
    if points.len() < config.min_points {
        return Err(FitError::TooFewPoints {
            got: points.len(),
            need: config.min_points,
        });
    }
    if collinear(points) {
        return Err(FitError::Collinear);
    }

    let mut best_theta = 0.0;
    let mut best_score = f64::NEG_INFINITY;
    let mut theta = 0.0;
    while theta < 90.0 {
        let score = closeness_score(points, theta, config.min_dist_clamp);
        if score > best_score {
            best_score = score;
            best_theta = theta;
        }
        theta += config.angle_step;
    }

    Ok(box_at_orientation(points, best_theta)?)
}

/// Rectangle spanned by the projection extrema at a fixed orientation.
pub fn box_at_orientation(points: &[[f64; 2]], theta_deg: f64) -> Result<Obb2D, GeomError> {
    let (s, c) = theta_deg.to_radians().sin_cos();
    let mut min1 = f64::INFINITY;
    let mut max1 = f64::NEG_INFINITY;
    let mut min2 = f64::INFINITY;
    let mut max2 = f64::NEG_INFINITY;
    for p in points {
        let c1 = p[0] * c + p[1] * s;
        let c2 = -p[0] * s + p[1] * c;
        min1 = min1.min(c1);
        max1 = max1.max(c1);
        min2 = min2.min(c2);
        max2 = max2.max(c2);
    }
    let world = |c1: f64, c2: f64| [c1 * c - c2 * s, c1 * s + c2 * c];
    Obb2D::from_corners([
        world(min1, min2),
        world(max1, min2),
        world(max1, max2),
        world(min1, max2),
    ])
}

fn collinear(points: &[[f64; 2]]) -> bool {
    // Max perpendicular spread from the principal direction through the centroid.
    let n = points.len() as f64;
    let (mut mx, mut my) = (0.0, 0.0);
    for p in points {
        mx += p[0];
        my += p[1];
    }
    mx /= n;
    my /= n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in points {
        let dx = p[0] - mx;
        let dy = p[1] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    // Principal axis of the scatter matrix.
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    let (s, c) = theta.sin_cos();
    points
        .iter()
        .map(|p| (-(p[0] - mx) * s + (p[1] - my) * c).abs())
        .fold(0.0, f64::max)
        < 1e-9
}

/// A size-corrected localization estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectedEstimate {
    pub center: [f64; 2],
    /// Degrees in [0, 180), copied from the fitted box.
    pub yaw: f64,
    /// The fitted corner nearest the sensor that the true-size box was
    /// anchored to.
    pub alignment_point: [f64; 2],
    /// Advisory: the fitted long edge matches the vehicle's short dimension
    /// better than its long one. Never alters the corrected center.
    pub off_by_90_suspect: bool,
}

/// Refines the fitted box center using the vehicle's communicated dimensions.
///
/// The fitted corner nearest the sensor location `sensor` becomes the
/// alignment point; a box of the true dimensions is reconstructed from it,
/// assigning the short dimension along the shorter observed edge and the long
/// dimension along the other.
pub fn size_correct(fitted: &Obb2D, dims: &VehicleDims, sensor: [f64; 2]) -> CorrectedEstimate {
    let corners = fitted.corners();
    let mut nearest = 0;
    let mut nearest_d2 = f64::INFINITY;
    for (i, c) in corners.iter().enumerate() {
        let d2 = (c[0] - sensor[0]).powi(2) + (c[1] - sensor[1]).powi(2);
        // Strict < keeps the first corner in CCW order on exact ties.
        if d2 < nearest_d2 {
            nearest_d2 = d2;
            nearest = i;
        }
    }
    let p = corners[nearest];
    let a = corners[(nearest + 1) % 4];
    let b = corners[(nearest + 3) % 4];
    let la = ((a[0] - p[0]).powi(2) + (a[1] - p[1]).powi(2)).sqrt();
    let lb = ((b[0] - p[0]).powi(2) + (b[1] - p[1]).powi(2)).sqrt();
    let ua = [(a[0] - p[0]) / la, (a[1] - p[1]) / la];
    let ub = [(b[0] - p[0]) / lb, (b[1] - p[1]) / lb];
    let (short_dir, long_dir) = if la < lb { (ua, ub) } else { (ub, ua) };
    let center = [
        p[0] + (short_dir[0] * dims.width + long_dir[0] * dims.length) / 2.0,
        p[1] + (short_dir[1] * dims.width + long_dir[1] * dims.length) / 2.0,
    ];
    let off_by_90_suspect =
        (fitted.long_edge() - dims.width).abs() < (fitted.long_edge() - dims.length).abs();
    CorrectedEstimate {
        center,
        yaw: fitted.yaw(),
        alignment_point: p,
        off_by_90_suspect,
    }
}
