//! Foreground extraction: reference-frame background subtraction and the
//! pilot experiment's ground-height filter.

use thiserror::Error;

use crate::kdtree::KdTree;
use crate::lidar::PointCloud;

#[derive(Debug, Error, PartialEq)]
pub enum PerceptionError {
    #[error("epsilon must be > 0, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("z_threshold must be >= 0, got {0}")]
    NegativeThreshold(f64),
}

/// A vehicle-free frame with an exact nearest-neighbor index over its points.
#[derive(Debug, Clone)]
pub struct ReferenceFrame {
    cloud: PointCloud,
    index: KdTree,
}

impl ReferenceFrame {
    pub fn new(cloud: PointCloud) -> Self {
        let index = KdTree::build(cloud.points.iter().map(|p| [p.x, p.y, p.z]).collect());
        Self { cloud, index }
    }

    pub fn cloud(&self) -> &PointCloud {
        &self.cloud
    }

    pub fn is_empty(&self) -> bool {
        self.cloud.is_empty()
    }

    /// Distance from `p` to the closest reference point; infinity when empty.
    pub fn nearest_dist(&self, p: [f64; 3]) -> f64 {
        self.index.nearest_dist2(p).sqrt()
    }
}

/// Keeps the points of `current` whose nearest reference neighbor is farther
/// than `epsilon`; everything else is background.
///
/// An empty reference frame returns the whole input as foreground and logs a
/// warning.
pub fn filter_background(
    current: &PointCloud,
    reference: &ReferenceFrame,
    epsilon: f64,
) -> Result<PointCloud, PerceptionError> {
    if epsilon <= 0.0 {
        return Err(PerceptionError::NonPositiveEpsilon(epsilon));
    }
    if reference.is_empty() {
        log::warn!(
            "empty reference frame: returning all {} points as foreground",
            current.len()
        );
        return Ok(current.clone());
    }
    let eps2 = epsilon * epsilon;
    let mut out = PointCloud::empty(current.frame_id.clone());
    for (p, tag) in current.points.iter().zip(&current.tags) {
        if reference.index.nearest_dist2([p.x, p.y, p.z]) > eps2 {
            out.points.push(*p);
            out.tags.push(*tag);
        }
    }
    Ok(out)
}

/// Keeps points with z strictly above `z_threshold`.
pub fn filter_ground(cloud: &PointCloud, z_threshold: f64) -> Result<PointCloud, PerceptionError> {
    if z_threshold < 0.0 {
        return Err(PerceptionError::NegativeThreshold(z_threshold));
    }
    let mut out = PointCloud::empty(cloud.frame_id.clone());
    for (p, tag) in cloud.points.iter().zip(&cloud.tags) {
        if p.z > z_threshold {
            out.points.push(*p);
            out.tags.push(*tag);
        }
    }
    Ok(out)
}

/// Drops z, preserving order and count.
pub fn project_to_plane(cloud: &PointCloud) -> Vec<[f64; 2]> {
    cloud.points.iter().map(|p| [p.x, p.y]).collect()
}
