//! Run configuration: a strict `key = value` file format with sections.
//!
//! Unknown keys and sections are rejected (typo safety); missing required
//! keys are reported collectively. Every other key has a documented default.

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::boxfit::LShapeConfig;
use crate::experiments::{SweepConfig, TrajectoryConfig};
use crate::geom::VehicleDims;
use crate::lidar::{GroundBox, LidarSpec, MountPose};

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unknown keys: {}", .0.join(", "))]
    UnknownKeys(Vec<String>),
    #[error("missing required keys: {}", .0.join(", "))]
    MissingKeys(Vec<String>),
    #[error("invalid value for `{key}` (line {line}): {msg}")]
    InvalidValue {
        key: String,
        line: usize,
        msg: String,
    },
}

/// Which experiment a config drives.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Sweep,
    Trajectory,
}

/// Color-scale bounds used when rendering heat maps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RenderScales {
    pub center_error: (f64, f64),
    pub bbox_area_error: (f64, f64),
    pub yaw_error: (f64, f64),
    pub point_count: (f64, f64),
}

impl Default for RenderScales {
    fn default() -> Self {
        Self {
            center_error: (0.0, 1.0),
            bbox_area_error: (0.0, 5.0),
            yaw_error: (0.0, 45.0),
            point_count: (0.0, 2000.0),
        }
    }
}

/// Fully validated run configuration; exactly one of `sweep` / `trajectory`
/// is populated, matching `mode`.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub mode: Mode,
    pub seed: u64,
    pub sweep: Option<SweepConfig>,
    pub trajectory: Option<TrajectoryConfig>,
    pub render: RenderScales,
}

struct Section {
    name: String,
    entries: BTreeMap<String, (String, usize)>,
    line: usize,
}

fn lex(text: &str) -> Result<Vec<Section>, ConfigError> {
    let mut sections: Vec<Section> = vec![Section {
        name: String::new(),
        entries: BTreeMap::new(),
        line: 0,
    }];
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if let Some(name) = line.strip_prefix('[') {
            let name = name.strip_suffix(']').ok_or(ConfigError::Syntax {
                line: line_no,
                msg: "unterminated section header".into(),
            })?;
            sections.push(Section {
                name: name.trim().to_string(),
                entries: BTreeMap::new(),
                line: line_no,
            });
            continue;
        }
        let (key, value) = line.split_once('=').ok_or(ConfigError::Syntax {
            line: line_no,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        let section = sections.last_mut().expect("at least the top section");
        if section.entries.insert(key.clone(), (value, line_no)).is_some() {
            return Err(ConfigError::Syntax {
                line: line_no,
                msg: format!("duplicate key `{key}`"),
            });
        }
    }
    Ok(sections)
}

/// A section whose keys are consumed as they are read; leftovers are
/// reported as unknown.
struct View {
    prefix: String,
    entries: BTreeMap<String, (String, usize)>,
}

impl View {
    fn empty(prefix: &str) -> Self {
        Self {
            prefix: prefix.to_string(),
            entries: BTreeMap::new(),
        }
    }

    fn qualified(&self, key: &str) -> String {
        if self.prefix.is_empty() {
            key.to_string()
        } else {
            format!("{}.{}", self.prefix, key)
        }
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn take_parsed<T: std::str::FromStr>(
        &mut self,
        key: &str,
        default: T,
    ) -> Result<T, ConfigError> {
        match self.take(key) {
            None => Ok(default),
            Some((v, line)) => v.parse().map_err(|_| ConfigError::InvalidValue {
                key: self.qualified(key),
                line,
                msg: format!("cannot parse `{v}`"),
            }),
        }
    }

    fn leftovers(&self) -> Vec<String> {
        self.entries.keys().map(|k| self.qualified(k)).collect()
    }
}

fn split_sections(
    sections: Vec<Section>,
    allowed: &[&str],
) -> Result<(BTreeMap<String, View>, Vec<View>, Vec<String>), ConfigError> {
    let mut named: BTreeMap<String, View> = BTreeMap::new();
    let mut occluders = Vec::new();
    let mut unknown = Vec::new();
    for s in sections {
        if s.name == "occluder" {
            occluders.push(View {
                prefix: format!("occluder[{}]", occluders.len()),
                entries: s.entries,
            });
            continue;
        }
        if !s.name.is_empty() && !allowed.contains(&s.name.as_str()) {
            unknown.push(format!("[{}] (line {})", s.name, s.line));
            continue;
        }
        let view = named.entry(s.name.clone()).or_insert_with(|| View {
            prefix: s.name.clone(),
            entries: BTreeMap::new(),
        });
        for (k, v) in s.entries {
            if view.entries.insert(k.clone(), v).is_some() {
                return Err(ConfigError::Syntax {
                    line: view.entries[&k].1,
                    msg: format!("duplicate key `{k}` in section [{}]", s.name),
                });
            }
        }
    }
    Ok((named, occluders, unknown))
}

/// Parses and fully validates a configuration file.
pub fn parse_config(path: &Path) -> Result<RunConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config_str(&text)
}

pub fn parse_config_str(text: &str) -> Result<RunConfig, ConfigError> {
    let sections = lex(text)?;

    let mut missing: Vec<String> = Vec::new();

    // Mode decides which sections are legal, so read it first.
    let mode = {
        let top = sections.iter().find(|s| s.name.is_empty());
        match top.and_then(|s| s.entries.get("mode")) {
            None => {
                missing.push("mode".into());
                None
            }
            Some((v, line)) => match v.as_str() {
                "sweep" => Some(Mode::Sweep),
                "trajectory" => Some(Mode::Trajectory),
                other => {
                    return Err(ConfigError::InvalidValue {
                        key: "mode".into(),
                        line: *line,
                        msg: format!("expected `sweep` or `trajectory`, got `{other}`"),
                    })
                }
            },
        }
    };

    let allowed: &[&str] = match mode {
        Some(Mode::Sweep) => &["lidar", "vehicle", "fit", "sweep", "render"],
        Some(Mode::Trajectory) => &["lidar", "vehicle", "fit", "trajectory", "render"],
        None => &["lidar", "vehicle", "fit", "sweep", "trajectory", "render"],
    };
    let (mut named, occluder_views, mut unknown) = split_sections(sections, allowed)?;
    if mode == Some(Mode::Sweep) && !occluder_views.is_empty() {
        unknown.push("[occluder] (sweep mode has no occluders)".into());
    }

    let mut top = named.remove("").unwrap_or_else(|| View::empty(""));
    top.take("mode");
    let seed: u64 = top.take_parsed("seed", 0)?;

    let mut lidar_v = named.remove("lidar").unwrap_or_else(|| View::empty("lidar"));
    let mut vehicle_v = named
        .remove("vehicle")
        .unwrap_or_else(|| View::empty("vehicle"));
    let mut fit_v = named.remove("fit").unwrap_or_else(|| View::empty("fit"));
    let mut render_v = named
        .remove("render")
        .unwrap_or_else(|| View::empty("render"));

    // [lidar]
    let model = lidar_v.take("model");
    let azimuth_step: f64 = lidar_v.take_parsed("azimuth_step_deg", 0.2)?;
    let max_range: f64 = lidar_v.take_parsed("max_range_m", 100.0)?;
    let height: f64 = lidar_v.take_parsed("height_m", 2.0)?;
    let sigma: f64 = lidar_v.take_parsed("range_noise_sigma_m", 0.0)?;
    let lidar_yaw: f64 = lidar_v.take_parsed("yaw_deg", 0.0)?;

    // [vehicle]
    let length: f64 = vehicle_v.take_parsed("length_m", 4.89)?;
    let width: f64 = vehicle_v.take_parsed("width_m", 1.90)?;
    let veh_height: f64 = vehicle_v.take_parsed("height_m", 1.72)?;

    // [fit]
    let lshape = LShapeConfig {
        angle_step: fit_v.take_parsed("angle_step_deg", 1.0)?,
        min_dist_clamp: fit_v.take_parsed("min_dist_clamp_m", 0.01)?,
        min_points: fit_v.take_parsed("min_points", 3)?,
    };

    // [render]
    let defaults = RenderScales::default();
    let render = RenderScales {
        center_error: (
            render_v.take_parsed("center_error_min", defaults.center_error.0)?,
            render_v.take_parsed("center_error_max", defaults.center_error.1)?,
        ),
        bbox_area_error: (
            render_v.take_parsed("bbox_area_error_min", defaults.bbox_area_error.0)?,
            render_v.take_parsed("bbox_area_error_max", defaults.bbox_area_error.1)?,
        ),
        yaw_error: (
            render_v.take_parsed("yaw_error_min", defaults.yaw_error.0)?,
            render_v.take_parsed("yaw_error_max", defaults.yaw_error.1)?,
        ),
        point_count: (
            render_v.take_parsed("point_count_min", defaults.point_count.0)?,
            render_v.take_parsed("point_count_max", defaults.point_count.1)?,
        ),
    };

    let mut sweep_cfg = None;
    let mut trajectory_cfg = None;
    let mut occluders = Vec::new();

    let build_spec = |mount: MountPose| -> Result<Option<LidarSpec>, ConfigError> {
        let (model_name, line) = match &model {
            None => {
                return Ok(None);
            }
            Some(m) => m,
        };
        let mut spec = match model_name.as_str() {
            "vlp16" => LidarSpec::vlp16(mount),
            "vlp32c" => LidarSpec::vlp32c(mount),
            "vlp32c_uniform" => LidarSpec::vlp32c_uniform(mount),
            other => {
                return Err(ConfigError::InvalidValue {
                    key: "lidar.model".into(),
                    line: *line,
                    msg: format!(
                        "expected vlp16, vlp32c, or vlp32c_uniform, got `{other}`"
                    ),
                })
            }
        };
        spec.azimuth_step = azimuth_step;
        spec.max_range = max_range;
        spec.range_noise_sigma = sigma;
        Ok(Some(spec))
    };

    let vehicle = VehicleDims::new(length, width, veh_height).map_err(|e| {
        ConfigError::InvalidValue {
            key: "vehicle".into(),
            line: 0,
            msg: e.to_string(),
        }
    })?;

    match mode {
        Some(Mode::Sweep) => {
            let mut v = named.remove("sweep").unwrap_or_else(|| View::empty("sweep"));
            let lidar_x: f64 = lidar_v.take_parsed("x_m", 0.0)?;
            let lidar_y: f64 = lidar_v.take_parsed("y_m", 0.0)?;
            let mount = MountPose {
                x: lidar_x,
                y: lidar_y,
                z: height,
                yaw: lidar_yaw,
            };
            let cfg = SweepConfig {
                distance_min: v.take_parsed("distance_min_m", 3.0)?,
                distance_max: v.take_parsed("distance_max_m", 40.0)?,
                distance_step: v.take_parsed("distance_step_m", 0.5)?,
                yaw_step: v.take_parsed("yaw_step_deg", 2.0)?,
                lidar: LidarSpec::vlp16(mount), // placeholder until model resolves
                vehicle,
                correction_enabled: v.take_parsed("correction", true)?,
                lshape,
                z_threshold: v.take_parsed("z_threshold_m", 0.05)?,
            };
            unknown.extend(v.leftovers());
            match build_spec(mount)? {
                Some(spec) => {
                    sweep_cfg = Some(SweepConfig { lidar: spec, ..cfg });
                }
                None => missing.push("lidar.model".into()),
            }
        }
        Some(Mode::Trajectory) => {
            let mut v = named
                .remove("trajectory")
                .unwrap_or_else(|| View::empty("trajectory"));
            let lateral: f64 = v.take_parsed("lateral_offset_m", 4.0)?;
            let mount = MountPose {
                x: 0.0,
                y: lateral,
                z: height,
                yaw: lidar_yaw,
            };
            for mut ov in occluder_views {
                let occ = GroundBox {
                    x: ov.take_parsed("x_m", f64::NAN)?,
                    y: ov.take_parsed("y_m", f64::NAN)?,
                    yaw: ov.take_parsed("yaw_deg", 0.0)?,
                    length: ov.take_parsed("length_m", f64::NAN)?,
                    width: ov.take_parsed("width_m", f64::NAN)?,
                    height: ov.take_parsed("height_m", f64::NAN)?,
                };
                for (field, value) in [
                    ("x_m", occ.x),
                    ("y_m", occ.y),
                    ("length_m", occ.length),
                    ("width_m", occ.width),
                    ("height_m", occ.height),
                ] {
                    if value.is_nan() {
                        missing.push(ov.qualified(field));
                    }
                }
                unknown.extend(ov.leftovers());
                occluders.push(occ);
            }
            let cfg = TrajectoryConfig {
                longitudinal_min: v.take_parsed("longitudinal_min_m", -50.0)?,
                longitudinal_max: v.take_parsed("longitudinal_max_m", 50.0)?,
                sample_step: v.take_parsed("sample_step_m", 0.5)?,
                lidar: LidarSpec::vlp16(mount),
                vehicle,
                occluders: occluders.clone(),
                epsilon: v.take_parsed("epsilon_m", 0.1)?,
                lshape,
            };
            unknown.extend(v.leftovers());
            match build_spec(mount)? {
                Some(spec) => {
                    trajectory_cfg = Some(TrajectoryConfig { lidar: spec, ..cfg });
                }
                None => missing.push("lidar.model".into()),
            }
        }
        None => {}
    }

    unknown.extend(top.leftovers());
    unknown.extend(lidar_v.leftovers());
    unknown.extend(vehicle_v.leftovers());
    unknown.extend(fit_v.leftovers());
    unknown.extend(render_v.leftovers());

    if !unknown.is_empty() {
        return Err(ConfigError::UnknownKeys(unknown));
    }
    if !missing.is_empty() {
        return Err(ConfigError::MissingKeys(missing));
    }

    // Semantic validation with errors naming the offending key space.
    if let Some(cfg) = &sweep_cfg {
        cfg.validate().map_err(|e| ConfigError::InvalidValue {
            key: "sweep".into(),
            line: 0,
            msg: e.to_string(),
        })?;
    }
    if let Some(cfg) = &trajectory_cfg {
        cfg.validate().map_err(|e| ConfigError::InvalidValue {
            key: "trajectory".into(),
            line: 0,
            msg: e.to_string(),
        })?;
    }

    Ok(RunConfig {
        mode: mode.expect("missing mode reported above"),
        seed,
        sweep: sweep_cfg,
        trajectory: trajectory_cfg,
        render,
    })
}
