//! Deterministic ray-cast LiDAR simulator.
//!
//! The scene is a ground plane, one box-model vehicle, and optional box
//! occluders. Each (channel, azimuth) ray keeps its first hit only; beams do
//! not penetrate surfaces. Identical inputs produce bit-identical clouds.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::geom::{Point3, Pose2D, VehicleDims};

#[derive(Debug, Error, PartialEq)]
pub enum LidarError {
    #[error("invalid lidar spec: {0}")]
    InvalidSpec(String),
    #[error("invalid scene: {0}")]
    InvalidScene(String),
}

/// LiDAR mount pose in the world frame; zero roll and pitch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MountPose {
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub yaw: f64,
}

/// Beam geometry and mount of a spinning LiDAR.
#[derive(Debug, Clone, PartialEq)]
pub struct LidarSpec {
    /// One elevation per channel, degrees, strictly increasing.
    pub elevation_angles: Vec<f64>,
    /// Horizontal angular resolution, degrees.
    pub azimuth_step: f64,
    pub max_range: f64,
    pub mount: MountPose,
    /// Standard deviation of per-return range noise, meters.
    pub range_noise_sigma: f64,
}

impl LidarSpec {
    pub fn validate(&self) -> Result<(), LidarError> {
        if self.elevation_angles.is_empty() {
            return Err(LidarError::InvalidSpec("no elevation angles".into()));
        }
        if self.elevation_angles.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LidarError::InvalidSpec(
                "elevation angles must be strictly increasing".into(),
            ));
        }
        if !(self.azimuth_step > 0.0 && self.azimuth_step <= 10.0) {
            return Err(LidarError::InvalidSpec(format!(
                "azimuth_step must be in (0, 10], got {}",
                self.azimuth_step
            )));
        }
        if self.max_range <= 0.0 {
            return Err(LidarError::InvalidSpec("max_range must be > 0".into()));
        }
        if self.range_noise_sigma < 0.0 {
            return Err(LidarError::InvalidSpec(
                "range_noise_sigma must be >= 0".into(),
            ));
        }
        Ok(())
    }

    /// 16 channels, -15 to +15 degrees in 2 degree steps (30 degree vertical FoV).
    pub fn vlp16(mount: MountPose) -> Self {
        let elevation_angles = (0..16).map(|i| -15.0 + 2.0 * i as f64).collect();
        Self {
            elevation_angles,
            azimuth_step: 0.2,
            max_range: 100.0,
            mount,
            range_noise_sigma: 0.0,
        }
    }

    /// 32 channels with the manufacturer's non-uniform elevation table,
    /// -25 to +15 degrees.
    pub fn vlp32c(mount: MountPose) -> Self {
        let elevation_angles = vec![
            -25.0, -15.639, -11.31, -8.843, -7.254, -6.148, -5.333, -4.667, -4.0, -3.667, -3.333,
            -3.0, -2.667, -2.333, -2.0, -1.667, -1.333, -1.0, -0.667, -0.333, 0.0, 0.333, 0.667,
            1.0, 1.333, 1.667, 2.333, 3.333, 4.667, 7.0, 10.333, 15.0,
        ];
        Self {
            elevation_angles,
            azimuth_step: 0.2,
            max_range: 100.0,
            mount,
            range_noise_sigma: 0.0,
        }
    }

    /// Uniform-spacing fallback: 32 channels evenly spread over -25 to +15 degrees.
    pub fn vlp32c_uniform(mount: MountPose) -> Self {
        let elevation_angles = (0..32).map(|i| -25.0 + 40.0 * i as f64 / 31.0).collect();
        Self {
            elevation_angles,
            azimuth_step: 0.2,
            max_range: 100.0,
            mount,
            range_noise_sigma: 0.0,
        }
    }
}

/// A yawed box resting on the ground plane, footprint centered at (x, y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundBox {
    pub x: f64,
    pub y: f64,
    pub yaw: f64,
    pub length: f64,
    pub width: f64,
    pub height: f64,
}

impl GroundBox {
    pub fn validate(&self) -> Result<(), LidarError> {
        if !(self.length > 0.0 && self.width > 0.0 && self.height > 0.0) {
            return Err(LidarError::InvalidScene(format!(
                "box dims must be positive, got {} x {} x {}",
                self.length, self.width, self.height
            )));
        }
        Ok(())
    }
}

/// Ground plane, one vehicle box, optional occluder boxes.
#[derive(Debug, Clone, PartialEq)]
pub struct SceneModel {
    pub vehicle: Option<(VehicleDims, Pose2D)>,
    pub occluders: Vec<GroundBox>,
    pub ground: bool,
}

impl SceneModel {
    pub fn validate(&self) -> Result<(), LidarError> {
        for o in &self.occluders {
            o.validate()?;
        }
        Ok(())
    }

    fn vehicle_box(&self) -> Option<GroundBox> {
        self.vehicle.map(|(dims, pose)| GroundBox {
            x: pose.x,
            y: pose.y,
            yaw: pose.yaw,
            length: dims.length,
            width: dims.width,
            height: dims.height,
        })
    }
}

/// Identity of the surface a return came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SurfaceTag {
    Ground,
    Vehicle,
    Occluder(usize),
}

impl SurfaceTag {
    pub fn label(&self) -> String {
        match self {
            SurfaceTag::Ground => "ground".into(),
            SurfaceTag::Vehicle => "vehicle".into(),
            SurfaceTag::Occluder(i) => format!("occluder_{i}"),
        }
    }
}

/// One frame of returns, with per-point surface tags.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub points: Vec<Point3>,
    pub tags: Vec<SurfaceTag>,
    pub frame_id: String,
}

impl PointCloud {
    pub fn empty(frame_id: impl Into<String>) -> Self {
        Self {
            points: Vec::new(),
            tags: Vec::new(),
            frame_id: frame_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// Casts one full revolution and returns the first hit of every ray.
///
/// With `range_noise_sigma > 0` each return's range is perturbed by Gaussian
/// noise drawn from a stream seeded by `seed`; the perturbed range is clamped
/// to (0, max_range].
pub fn cast_frame(spec: &LidarSpec, scene: &SceneModel, seed: u64) -> PointCloud {
    debug_assert!(spec.validate().is_ok());
    debug_assert!(scene.validate().is_ok());

    let mut cloud = PointCloud::empty(format!("frame_{seed}"));
    let n_az = (360.0 / spec.azimuth_step).round() as usize;
    let origin = [spec.mount.x, spec.mount.y, spec.mount.z];
    let vehicle_box = scene.vehicle_box();

    let mut noise = if spec.range_noise_sigma > 0.0 {
        Some((
            ChaCha8Rng::seed_from_u64(seed),
            Normal::new(0.0, spec.range_noise_sigma).expect("sigma validated"),
        ))
    } else {
        None
    };

    for &elev in &spec.elevation_angles {
        let (se, ce) = elev.to_radians().sin_cos();
        for az_idx in 0..n_az {
            let az = (spec.mount.yaw + az_idx as f64 * spec.azimuth_step).to_radians();
            let (sa, ca) = az.sin_cos();
            let dir = [ce * ca, ce * sa, se];

            let mut best: Option<(f64, SurfaceTag)> = None;
            let mut consider = |t: Option<f64>, tag: SurfaceTag| {
                if let Some(t) = t {
                    if t > 0.0 && t <= spec.max_range && best.map_or(true, |(bt, _)| t < bt) {
                        best = Some((t, tag));
                    }
                }
            };

            if scene.ground {
                consider(ray_ground(origin, dir), SurfaceTag::Ground);
            }
            if let Some(vb) = &vehicle_box {
                consider(ray_box(origin, dir, vb), SurfaceTag::Vehicle);
            }
            for (i, ob) in scene.occluders.iter().enumerate() {
                consider(ray_box(origin, dir, ob), SurfaceTag::Occluder(i));
            }

            if let Some((mut t, tag)) = best {
                if let Some((rng, dist)) = noise.as_mut() {
                    t = (t + dist.sample(rng)).clamp(f64::MIN_POSITIVE, spec.max_range);
                }
                cloud.points.push(Point3::new(
                    origin[0] + t * dir[0],
                    origin[1] + t * dir[1],
                    origin[2] + t * dir[2],
                ));
                cloud.tags.push(tag);
            }
        }
    }
    cloud
}

/// Number of returns whose first hit was a vehicle face.
pub fn vehicle_point_count(cloud: &PointCloud) -> usize {
    cloud
        .tags
        .iter()
        .filter(|t| **t == SurfaceTag::Vehicle)
        .count()
}

/// Ray / ground-plane (z = 0) intersection distance, if in front of the origin.
pub(crate) fn ray_ground(origin: [f64; 3], dir: [f64; 3]) -> Option<f64> {
    if dir[2] >= 0.0 || origin[2] <= 0.0 {
        return None;
    }
    Some(-origin[2] / dir[2])
}

/// Ray / box intersection via the slab method, in the box's local frame.
/// Returns the entry distance for origins outside the box.
pub(crate) fn ray_box(origin: [f64; 3], dir: [f64; 3], b: &GroundBox) -> Option<f64> {
    let (s, c) = b.yaw.to_radians().sin_cos();
    let ox = origin[0] - b.x;
    let oy = origin[1] - b.y;
    let lo = [ox * c + oy * s, -ox * s + oy * c, origin[2]];
    let ld = [
        dir[0] * c + dir[1] * s,
        -dir[0] * s + dir[1] * c,
        dir[2],
    ];
    let bounds = [
        (-b.length / 2.0, b.length / 2.0),
        (-b.width / 2.0, b.width / 2.0),
        (0.0, b.height),
    ];

    let mut t_enter = f64::NEG_INFINITY;
    let mut t_exit = f64::INFINITY;
    for axis in 0..3 {
        let (lo_b, hi_b) = bounds[axis];
        if ld[axis].abs() < 1e-15 {
            if lo[axis] < lo_b || lo[axis] > hi_b {
                return None;
            }
            continue;
        }
        let t0 = (lo_b - lo[axis]) / ld[axis];
        let t1 = (hi_b - lo[axis]) / ld[axis];
        let (t0, t1) = if t0 <= t1 { (t0, t1) } else { (t1, t0) };
        t_enter = t_enter.max(t0);
        t_exit = t_exit.min(t1);
        if t_enter > t_exit {
            return None;
        }
    }
    if t_enter > 1e-12 {
        Some(t_enter)
    } else {
        None
    }
}
