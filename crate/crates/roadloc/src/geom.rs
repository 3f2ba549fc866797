//! Shared geometric types and angle conventions.
//!
//! World frame is z-up with the ground plane at z = 0. Angles are degrees at
//! every public boundary; radians only appear inside computations.

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeomError {
    #[error("non-finite angle: {0}")]
    NonFiniteAngle(f64),
    #[error("invalid vehicle dimensions: {0}")]
    InvalidDims(String),
    #[error("degenerate rectangle: {0}")]
    DegenerateRect(String),
}

/// A raw LiDAR return in the world frame, meters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }
}

/// Planar vehicle pose: position in meters, yaw in degrees normalized to [0, 360).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2D {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
}

impl Pose2D {
    pub fn new(x: f64, y: f64, yaw: f64) -> Result<Self, GeomError> {
        Ok(Self {
            x,
            y,
            yaw: normalize_yaw(yaw)?,
        })
    }
}

/// Vehicle extents in meters. `length` is the longer horizontal edge of the
/// footprint, `width` the shorter one, `height` the vertical extent.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VehicleDims {
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

impl VehicleDims {
    pub fn new(length: f64, width: f64, height: f64) -> Result<Self, GeomError> {
        if !(length.is_finite() && width.is_finite() && height.is_finite()) {
            return Err(GeomError::InvalidDims("non-finite dimension".into()));
        }
        if !(width > 0.0 && width <= length) {
            return Err(GeomError::InvalidDims(format!(
                "require 0 < width <= length, got width {width}, length {length}"
            )));
        }
        if height <= 0.0 {
            return Err(GeomError::InvalidDims(format!(
                "require height > 0, got {height}"
            )));
        }
        Ok(Self {
            length,
            width,
            height,
        })
    }

    pub fn footprint_area(&self) -> f64 {
        self.length * self.width
    }
}

/// Fitted 2D oriented rectangle.
///
/// Corners are stored counter-clockwise; `yaw` is the orientation of the
/// longer edge folded into [0, 180) degrees.
#[derive(Debug, Clone, PartialEq)]
pub struct Obb2D {
    corners: [[f64; 2]; 4],
    center: [f64; 2],
    yaw: f64,
    long_edge: f64,
    short_edge: f64,
}

const RECT_EDGE_TOL: f64 = 1e-9;

impl Obb2D {
    /// Builds a rectangle from four corners given in traversal order
    /// (clockwise inputs are reversed to counter-clockwise). Rejects corner
    /// sets that are not a rectangle or that have a zero-length edge.
    pub fn from_corners(corners: [[f64; 2]; 4]) -> Result<Self, GeomError> {
        for c in &corners {
            if !(c[0].is_finite() && c[1].is_finite()) {
                return Err(GeomError::DegenerateRect("non-finite corner".into()));
            }
        }
        let mut corners = corners;
        if signed_area(&corners) < 0.0 {
            corners.reverse();
        }
        let e = |i: usize, j: usize| {
            [
                corners[j][0] - corners[i][0],
                corners[j][1] - corners[i][1],
            ]
        };
        let e01 = e(0, 1);
        let e12 = e(1, 2);
        let e32 = e(3, 2);
        let e03 = e(0, 3);
        let l01 = norm2(e01);
        let l12 = norm2(e12);
        if l01 <= 0.0 || l12 <= 0.0 {
            return Err(GeomError::DegenerateRect("zero-length edge".into()));
        }
        if (l01 - norm2(e32)).abs() > RECT_EDGE_TOL || (l12 - norm2(e03)).abs() > RECT_EDGE_TOL {
            return Err(GeomError::DegenerateRect(
                "opposite edges differ in length".into(),
            ));
        }
        // |sin| of the deviation from a right angle.
        let cosang = (e01[0] * e12[0] + e01[1] * e12[1]) / (l01 * l12);
        if cosang.abs() > RECT_EDGE_TOL {
            return Err(GeomError::DegenerateRect(
                "adjacent edges not orthogonal".into(),
            ));
        }
        let center = [
            (corners[0][0] + corners[1][0] + corners[2][0] + corners[3][0]) / 4.0,
            (corners[0][1] + corners[1][1] + corners[2][1] + corners[3][1]) / 4.0,
        ];
        let (long_vec, long_edge, short_edge) = if l01 >= l12 {
            (e01, l01, l12)
        } else {
            (e12, l12, l01)
        };
        let yaw = fold_180(long_vec[1].atan2(long_vec[0]).to_degrees());
        Ok(Self {
            corners,
            center,
            yaw,
            long_edge,
            short_edge,
        })
    }

    /// Corners in counter-clockwise order.
    pub fn corners(&self) -> &[[f64; 2]; 4] {
        &self.corners
    }

    pub fn center(&self) -> [f64; 2] {
        self.center
    }

    /// Orientation of the longer edge, degrees in [0, 180).
    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn long_edge(&self) -> f64 {
        self.long_edge
    }

    pub fn short_edge(&self) -> f64 {
        self.short_edge
    }

    pub fn area(&self) -> f64 {
        self.long_edge * self.short_edge
    }
}

fn signed_area(c: &[[f64; 2]; 4]) -> f64 {
    let mut a = 0.0;
    for i in 0..4 {
        let j = (i + 1) % 4;
        a += c[i][0] * c[j][1] - c[j][0] * c[i][1];
    }
    a / 2.0
}

fn norm2(v: [f64; 2]) -> f64 {
    v[0].hypot(v[1])
}

/// Wraps a finite angle into [0, 360) degrees.
pub fn normalize_yaw(deg: f64) -> Result<f64, GeomError> {
    if !deg.is_finite() {
        return Err(GeomError::NonFiniteAngle(deg));
    }
    Ok(wrap_360(deg))
}

pub(crate) fn wrap_360(deg: f64) -> f64 {
    let r = deg.rem_euclid(360.0);
    // rem_euclid can round up to exactly 360 for tiny negative inputs.
    if r >= 360.0 {
        0.0
    } else {
        r
    }
}

/// Folds an angle into [0, 180) degrees (a rectangle's long-edge orientation
/// cannot distinguish front from back).
pub fn fold_180(deg: f64) -> f64 {
    let r = deg.rem_euclid(180.0);
    if r >= 180.0 {
        0.0
    } else {
        r
    }
}

pub const DEFAULT_OFF_BY_90_TOL_DEG: f64 = 15.0;

/// Heading error folded modulo 90 degrees into [0, 45].
///
/// The boolean is true when the best fold is an odd multiple of 90 degrees and
/// the residual is below `tol`, i.e. the estimate looks like a quarter-turn
/// mix-up rather than an ordinary angular error.
pub fn yaw_error_mod90_with_tol(
    estimated: f64,
    truth: f64,
    tol: f64,
) -> Result<(f64, bool), GeomError> {
    if !estimated.is_finite() {
        return Err(GeomError::NonFiniteAngle(estimated));
    }
    if !truth.is_finite() {
        return Err(GeomError::NonFiniteAngle(truth));
    }
    let mut d = wrap_360(estimated - truth);
    if d > 180.0 {
        d -= 360.0;
    }
    let k = (d / 90.0).round();
    let residual = (d - 90.0 * k).abs();
    let odd = (k as i64).rem_euclid(2) == 1;
    Ok((residual, odd && residual < tol))
}

/// [`yaw_error_mod90_with_tol`] with the default 15 degree off-by-90 tolerance.
pub fn yaw_error_mod90(estimated: f64, truth: f64) -> Result<(f64, bool), GeomError> {
    yaw_error_mod90_with_tol(estimated, truth, DEFAULT_OFF_BY_90_TOL_DEG)
}
