//! End-to-end acceptance suite. Each `criterion_*` test prints one
//! `ACCEPTANCE n: PASS|FAIL` line (visible with `--nocapture`) and then
//! asserts the same condition. All runs are seeded and deterministic.

use std::path::Path;
use std::sync::LazyLock;

use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use roadloc::boxfit::{lshape_fit, size_correct, LShapeConfig};
use roadloc::config::{parse_config, Mode, RunConfig};
use roadloc::experiments::{
    run_sweep, run_trajectory, summarize, CellStatus, ErrorGrid, TrajectorySample,
};
use roadloc::geom::{Obb2D, Point3};
use roadloc::io::{read_baseline_csv, read_grid_csv, write_grid_csv, Metric, SENTINEL_RGB};
use roadloc::lidar::{cast_frame, GroundBox, LidarSpec, MountPose, PointCloud, SurfaceTag};
use roadloc::perception::{filter_background, ReferenceFrame};

fn config_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn load(name: &str) -> RunConfig {
    parse_config(&config_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn sweep_grid(name: &str) -> ErrorGrid {
    let cfg = load(name);
    assert_eq!(cfg.mode, Mode::Sweep);
    run_sweep(cfg.sweep.as_ref().expect("sweep config"), cfg.seed).expect("sweep run")
}

fn trajectory_trace(name: &str) -> Vec<TrajectorySample> {
    let cfg = load(name);
    assert_eq!(cfg.mode, Mode::Trajectory);
    run_trajectory(cfg.trajectory.as_ref().expect("trajectory config"), cfg.seed)
        .expect("trajectory run")
}

static CORRECTED: LazyLock<ErrorGrid> = LazyLock::new(|| sweep_grid("pilot_vlp16.conf"));
static UNCORRECTED: LazyLock<ErrorGrid> =
    LazyLock::new(|| sweep_grid("pilot_vlp16_uncorrected.conf"));
static TRAJ_VLP16: LazyLock<Vec<TrajectorySample>> =
    LazyLock::new(|| trajectory_trace("trajectory_vlp16.conf"));
static TRAJ_VLP32C: LazyLock<Vec<TrajectorySample>> =
    LazyLock::new(|| trajectory_trace("trajectory_vlp32c.conf"));
static TRAJ_VLP16_OCC: LazyLock<Vec<TrajectorySample>> =
    LazyLock::new(|| trajectory_trace("trajectory_vlp16_occluded.conf"));
static TRAJ_VLP32C_OCC: LazyLock<Vec<TrajectorySample>> =
    LazyLock::new(|| trajectory_trace("trajectory_vlp32c_occluded.conf"));

/// Status-ok cells of a grid restricted to a distance band (inclusive).
fn ok_band(grid: &ErrorGrid, lo: f64, hi: f64) -> Vec<&roadloc::experiments::CellMetrics> {
    grid.cells
        .iter()
        .filter(|c| c.status == CellStatus::Ok && c.distance >= lo && c.distance <= hi)
        .collect()
}

fn mean_center_error(grid: &ErrorGrid, lo: f64, hi: f64) -> f64 {
    let band = ok_band(grid, lo, hi);
    assert!(!band.is_empty(), "no status-ok cells in [{lo}, {hi}] band");
    band.iter().map(|c| c.center_error.expect("ok cell")).sum::<f64>() / band.len() as f64
}

#[test]
fn criterion_1_correction_improves_pilot_sweep() {
    let corrected = mean_center_error(&CORRECTED, 6.0, 36.0);
    let uncorrected = mean_center_error(&UNCORRECTED, 6.0, 36.0);
    let pass = corrected < uncorrected;
    println!(
        "ACCEPTANCE 1: {} — mean center error 6-36 m: corrected {corrected:.4} m, \
         uncorrected {uncorrected:.4} m",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "corrected {corrected} must be < uncorrected {uncorrected}");
}

#[test]
fn criterion_2_sub_decimeter_majority() {
    let band = ok_band(&CORRECTED, 6.0, 36.0);
    let under = band
        .iter()
        .filter(|c| c.center_error.expect("ok cell") < 0.1)
        .count();
    let frac = under as f64 / band.len() as f64;
    let pass = frac > 0.5;
    println!(
        "ACCEPTANCE 2: {} — {:.1}% of {} status-ok cells in 6-36 m band under 0.1 m",
        if pass { "PASS" } else { "FAIL" },
        100.0 * frac,
        band.len()
    );
    assert!(pass, "achieved fraction {frac}");
}

#[test]
fn criterion_3_off_by_90_clusters_near_cardinal_yaws() {
    let flagged: Vec<f64> = UNCORRECTED
        .cells
        .iter()
        .filter(|c| c.status == CellStatus::Ok && c.off_by_90 == Some(true))
        .map(|c| c.yaw)
        .collect();
    assert!(
        !flagged.is_empty(),
        "uncorrected sweep produced no off_by_90 cells to classify"
    );
    let near_cardinal = |yaw: f64| {
        let d = yaw.rem_euclid(90.0);
        d.min(90.0 - d) <= 20.0
    };
    let near = flagged.iter().filter(|&&y| near_cardinal(y)).count();
    let frac = near as f64 / flagged.len() as f64;
    let pass = frac >= 0.8;
    println!(
        "ACCEPTANCE 3: {} — {near}/{} off_by_90 cells within 20 deg of a cardinal yaw",
        if pass { "PASS" } else { "FAIL" },
        flagged.len()
    );
    assert!(pass, "achieved fraction {frac}");
}

/// Largest half-width r (on the sample lattice) such that the 75th-percentile
/// error of status-ok samples in [-r, r] stays below 0.3 m.
fn effective_half_range(trace: &[TrajectorySample]) -> f64 {
    let mut radii: Vec<f64> = trace.iter().map(|s| s.position.abs()).collect();
    radii.sort_by(|a, b| a.partial_cmp(b).unwrap());
    radii.dedup();
    let mut best = 0.0;
    for &r in &radii {
        let summary = &summarize(trace, &[(-r, r)])[0];
        if let Some(stats) = &summary.stats {
            if stats.p75 < 0.3 {
                best = r;
            }
        }
    }
    best
}

#[test]
fn criterion_4_vlp32c_effective_range_at_least_vlp16() {
    let r16 = effective_half_range(&TRAJ_VLP16);
    let r32 = effective_half_range(&TRAJ_VLP32C);
    let pass = r32 >= r16;
    println!(
        "ACCEPTANCE 4: {} — sub-0.3 m p75 half-range: VLP-32C {r32} m, VLP-16 {r16} m",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "VLP-32C half-range {r32} must be >= VLP-16 {r16}");
}

#[test]
fn criterion_5_occlusion_outliers_vlp16_only() {
    let occluders = load("trajectory_vlp16_occluded.conf")
        .trajectory
        .expect("trajectory config")
        .occluders;
    assert_eq!(occluders.len(), 1, "bundled config carries one occluder");
    let occ_x = occluders[0].x;
    // The occluder shadow falls down-road of the occluder itself; "near"
    // means within 15 m of its longitudinal position.
    let flagged_near = |trace: &[TrajectorySample]| {
        trace
            .iter()
            .filter(|s| s.off_by_90 == Some(true) && (s.position - occ_x).abs() <= 15.0)
            .count()
    };
    let flagged_16 = flagged_near(&TRAJ_VLP16_OCC);
    let flagged_32_total = TRAJ_VLP32C_OCC
        .iter()
        .filter(|s| s.off_by_90 == Some(true))
        .count();
    let pass = flagged_16 >= 1 && flagged_32_total == 0;
    println!(
        "ACCEPTANCE 5: {} — VLP-16 off_by_90 samples near occluder: {flagged_16}, \
         VLP-32C anywhere: {flagged_32_total}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass);
}

// ---- criterion 6: invariant sub-suites --------------------------------------

/// Independent brute-force foreground split: keep a live point iff its
/// nearest reference point (linear scan) is farther than epsilon.
fn brute_force_foreground(live: &PointCloud, reference: &PointCloud, eps: f64) -> Vec<Point3> {
    live.points
        .iter()
        .filter(|p| {
            reference
                .points
                .iter()
                .map(|q| {
                    (p.x - q.x).powi(2) + (p.y - q.y).powi(2) + (p.z - q.z).powi(2)
                })
                .fold(f64::INFINITY, f64::min)
                > eps * eps
        })
        .copied()
        .collect()
}

fn background_filter_oracle_subsuite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xBACC);
    let rand_cloud = |n: usize, rng: &mut ChaCha8Rng| {
        let points: Vec<Point3> = (0..n)
            .map(|_| {
                Point3::new(
                    rng.gen_range(-40.0..40.0),
                    rng.gen_range(-40.0..40.0),
                    rng.gen_range(0.0..3.0),
                )
            })
            .collect();
        PointCloud {
            tags: vec![SurfaceTag::Ground; points.len()],
            points,
            frame_id: "oracle".into(),
        }
    };
    for trial in 0..8 {
        let n_ref = 250 * (trial + 1); // up to n = 2000
        let reference_cloud = rand_cloud(n_ref, &mut rng);
        let mut live = rand_cloud(300, &mut rng);
        // Mix in exact copies of reference points so both sides of the
        // epsilon test are exercised.
        for i in (0..reference_cloud.points.len()).step_by(7) {
            live.points.push(reference_cloud.points[i]);
            live.tags.push(SurfaceTag::Ground);
        }
        let eps = 0.5;
        let expected = brute_force_foreground(&live, &reference_cloud, eps);
        let reference = ReferenceFrame::new(reference_cloud);
        let got = filter_background(&live, &reference, eps).expect("filter");
        assert_eq!(got.points, expected, "trial {trial}: foreground mismatch");
    }
}

/// Independent closeness score: same definition as the library's, written
/// without sharing its code path.
fn naive_score(points: &[[f64; 2]], theta_deg: f64, clamp: f64) -> f64 {
    let (s, c) = theta_deg.to_radians().sin_cos();
    let mut score = 0.0;
    for axis in [[c, s], [-s, c]] {
        let proj: Vec<f64> = points.iter().map(|p| p[0] * axis[0] + p[1] * axis[1]).collect();
        let lo = proj.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = proj.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for v in &proj {
            let d = (v - lo).min(hi - v).max(clamp);
            score += 1.0 / d;
        }
    }
    score
}

fn lshape_brute_force_subsuite() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x15AFE);
    let config = LShapeConfig {
        angle_step: 0.1,
        ..LShapeConfig::default()
    };
    for case in 0..100 {
        // Random rectangle whose orientation sits on the 0.1 deg search grid,
        // so the aligned angle is a decisive score peak for both searchers.
        let theta = (rng.gen_range(0..900) as f64) * 0.1;
        let (s, c) = theta.to_radians().sin_cos();
        let cx = rng.gen_range(-20.0..20.0);
        let cy = rng.gen_range(-20.0..20.0);
        let half_l = rng.gen_range(1.5..3.0);
        let half_w = rng.gen_range(0.5..1.4);
        // Sample two adjacent edges, as seen from a corner-facing viewpoint.
        let mut points = Vec::new();
        for i in 0..=40 {
            let t = -half_l + (i as f64 / 40.0) * 2.0 * half_l;
            points.push([cx + c * t - s * half_w, cy + s * t + c * half_w]);
        }
        for i in 1..=20 {
            let t = -half_w + (i as f64 / 20.0) * 2.0 * half_w;
            points.push([cx + c * half_l - s * t, cy + s * half_l + c * t]);
        }
        let fitted = lshape_fit(&points, &config).expect("fit");

        // Brute-force oracle over the same angle lattice, ties to smaller
        // theta.
        let mut best = (f64::NEG_INFINITY, 0.0);
        for i in 0..900 {
            let th = i as f64 * 0.1;
            let sc = naive_score(&points, th, config.min_dist_clamp);
            if sc > best.0 {
                best = (sc, th);
            }
        }
        let best_theta = best.1;
        let dyaw = (fitted.yaw() - best_theta).rem_euclid(90.0);
        let dyaw = dyaw.min(90.0 - dyaw);
        assert!(
            dyaw < 1e-9,
            "case {case}: fit yaw {} vs oracle theta {best_theta}",
            fitted.yaw()
        );
        assert!(
            (fitted.yaw() - theta).rem_euclid(90.0) < 1e-6
                || (theta - fitted.yaw()).rem_euclid(90.0) < 1e-6,
            "case {case}: fit missed the generating orientation {theta}"
        );
    }
}

fn corner_anchoring_subsuite() {
    let dims = roadloc::geom::VehicleDims::new(4.89, 1.90, 1.72).expect("dims");
    let mut rng = ChaCha8Rng::seed_from_u64(0xA11C);
    let mut checked = 0;
    while checked < 100 {
        let theta: f64 = rng.gen_range(0.0..180.0);
        let (s, c) = theta.to_radians().sin_cos();
        let cx = rng.gen_range(-15.0..15.0);
        let cy = rng.gen_range(-15.0..15.0);
        let half_l = rng.gen_range(0.5..2.5);
        let half_w = rng.gen_range(0.15..0.5);
        let corners = [
            [cx + c * half_l - s * half_w, cy + s * half_l + c * half_w],
            [cx - c * half_l - s * half_w, cy - s * half_l + c * half_w],
            [cx - c * half_l + s * half_w, cy - s * half_l - c * half_w],
            [cx + c * half_l + s * half_w, cy + s * half_l - c * half_w],
        ];
        let fitted = Obb2D::from_corners(corners).expect("rectangle");
        let sensor_r = rng.gen_range(8.0..50.0);
        let sensor_a: f64 = rng.gen_range(0.0..360.0);
        let sensor = [
            cx + sensor_r * sensor_a.to_radians().cos(),
            cy + sensor_r * sensor_a.to_radians().sin(),
        ];
        let p = *fitted
            .corners()
            .iter()
            .min_by(|a, b| {
                let da = (a[0] - sensor[0]).powi(2) + (a[1] - sensor[1]).powi(2);
                let db = (b[0] - sensor[0]).powi(2) + (b[1] - sensor[1]).powi(2);
                da.partial_cmp(&db).unwrap()
            })
            .expect("4 corners");
        // Unit edge directions from P into the box, shorter observed edge
        // first (it receives the vehicle width during correction).
        let idx = fitted.corners().iter().position(|q| *q == p).expect("corner");
        let a = fitted.corners()[(idx + 1) % 4];
        let d = fitted.corners()[(idx + 3) % 4];
        let la = ((a[0] - p[0]).powi(2) + (a[1] - p[1]).powi(2)).sqrt();
        let ld = ((d[0] - p[0]).powi(2) + (d[1] - p[1]).powi(2)).sqrt();
        let ua = [(a[0] - p[0]) / la, (a[1] - p[1]) / la];
        let ud = [(d[0] - p[0]) / ld, (d[1] - p[1]) / ld];
        let (sw, lw) = if la < ld { (ua, ud) } else { (ud, ua) };
        // The property requires the sensor to face the anchored corner: its
        // projection onto each inward edge direction must stay below half
        // the reconstructed extent along that direction.
        let to_m = [sensor[0] - p[0], sensor[1] - p[1]];
        if sw[0] * to_m[0] + sw[1] * to_m[1] > dims.width / 2.0
            || lw[0] * to_m[0] + lw[1] * to_m[1] > dims.length / 2.0
        {
            continue;
        }
        let est = size_correct(&fitted, &dims, sensor);
        assert!(
            (est.alignment_point[0] - p[0]).abs() < 1e-12
                && (est.alignment_point[1] - p[1]).abs() < 1e-12,
            "alignment point is the fitted corner nearest the sensor"
        );
        // Reconstruct the true-size box from the anchor and assert its
        // corner nearest the sensor is still the anchor.
        let recon = [
            p,
            [p[0] + sw[0] * dims.width, p[1] + sw[1] * dims.width],
            [
                p[0] + sw[0] * dims.width + lw[0] * dims.length,
                p[1] + sw[1] * dims.width + lw[1] * dims.length,
            ],
            [p[0] + lw[0] * dims.length, p[1] + lw[1] * dims.length],
        ];
        let nearest_corner = recon
            .iter()
            .min_by(|a, b| {
                let da = (a[0] - sensor[0]).powi(2) + (a[1] - sensor[1]).powi(2);
                let db = (b[0] - sensor[0]).powi(2) + (b[1] - sensor[1]).powi(2);
                da.partial_cmp(&db).unwrap()
            })
            .expect("4 corners");
        assert!(
            (nearest_corner[0] - p[0]).abs() < 1e-9 && (nearest_corner[1] - p[1]).abs() < 1e-9,
            "reconstructed box corner drifted from anchor"
        );
        let recon_center = [
            p[0] + (sw[0] * dims.width + lw[0] * dims.length) / 2.0,
            p[1] + (sw[1] * dims.width + lw[1] * dims.length) / 2.0,
        ];
        assert!(
            (recon_center[0] - est.center[0]).abs() < 1e-9
                && (recon_center[1] - est.center[1]).abs() < 1e-9,
            "corrected center disagrees with anchored reconstruction"
        );
        checked += 1;
    }
}

fn hand_traced_correction_subsuite() {
    let dims = roadloc::geom::VehicleDims::new(4.0, 2.0, 1.5).expect("dims");
    // Fitted box: axis-aligned 3 x 1 rectangle with corner at the origin,
    // sensor in the third quadrant so the origin corner anchors. Width maps
    // onto the short observed edge (y), length onto x: center = (2, 1).
    let fitted = Obb2D::from_corners([[0.0, 0.0], [3.0, 0.0], [3.0, 1.0], [0.0, 1.0]])
        .expect("rectangle");
    let est = size_correct(&fitted, &dims, [-5.0, -5.0]);
    assert!((est.center[0] - 2.0).abs() < 1e-12 && (est.center[1] - 1.0).abs() < 1e-12);
    assert_eq!(est.alignment_point, [0.0, 0.0]);

    // Swapped observation: fitted long edge along y. The length now runs
    // along y and the width along x: center = (1, 2).
    let swapped = Obb2D::from_corners([[0.0, 0.0], [1.0, 0.0], [1.0, 3.0], [0.0, 3.0]])
        .expect("rectangle");
    let est = size_correct(&swapped, &dims, [-5.0, -5.0]);
    assert!((est.center[0] - 1.0).abs() < 1e-12 && (est.center[1] - 2.0).abs() < 1e-12);
    assert!(est.off_by_90_suspect == false);
}

/// Independent slab-method ray/box test used to audit the caster.
fn oracle_ray_box(origin: [f64; 3], dir: [f64; 3], b: &GroundBox) -> Option<f64> {
    let (s, c) = b.yaw.to_radians().sin_cos();
    let ox = origin[0] - b.x;
    let oy = origin[1] - b.y;
    let local_o = [c * ox + s * oy, -s * ox + c * oy, origin[2]];
    let local_d = [c * dir[0] + s * dir[1], -s * dir[0] + c * dir[1], dir[2]];
    let half = [b.length / 2.0, b.width / 2.0];
    let (mut t0, mut t1) = (f64::NEG_INFINITY, f64::INFINITY);
    for axis in 0..3 {
        let (lo, hi) = if axis < 2 {
            (-half[axis], half[axis])
        } else {
            (0.0, b.height)
        };
        if local_d[axis].abs() < 1e-15 {
            if local_o[axis] < lo || local_o[axis] > hi {
                return None;
            }
            continue;
        }
        let ta = (lo - local_o[axis]) / local_d[axis];
        let tb = (hi - local_o[axis]) / local_d[axis];
        t0 = t0.max(ta.min(tb));
        t1 = t1.min(ta.max(tb));
    }
    (t0 <= t1 && t0 > 1e-12).then_some(t0)
}

fn ray_first_hit_subsuite() {
    let vehicle = roadloc::geom::VehicleDims::new(4.89, 1.90, 1.72).expect("dims");
    let pose = roadloc::geom::Pose2D::new(12.0, 1.0, 37.0).expect("pose");
    let scene = roadloc::lidar::SceneModel {
        vehicle: Some((vehicle, pose)),
        occluders: vec![
            GroundBox { x: 6.0, y: 2.0, yaw: 10.0, length: 1.2, width: 0.8, height: 1.6 },
            GroundBox { x: 18.0, y: -3.0, yaw: 0.0, length: 2.0, width: 2.0, height: 0.9 },
        ],
        ground: true,
    };
    let spec = LidarSpec::vlp16(MountPose { x: 0.0, y: 4.0, z: 2.0, yaw: 0.0 });
    let cloud = cast_frame(&spec, &scene, 0);
    assert!(cloud.len() > 1000, "scene produces a dense frame");
    let origin = [spec.mount.x, spec.mount.y, spec.mount.z];
    let boxes: Vec<GroundBox> = std::iter::once(GroundBox {
        x: pose.x,
        y: pose.y,
        yaw: pose.yaw,
        length: vehicle.length,
        width: vehicle.width,
        height: vehicle.height,
    })
    .chain(scene.occluders.iter().cloned())
    .collect();
    for p in &cloud.points {
        let d = [p.x - origin[0], p.y - origin[1], p.z - origin[2]];
        let t_hit = (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt();
        let dir = [d[0] / t_hit, d[1] / t_hit, d[2] / t_hit];
        // Earliest surface along the ray per the independent oracle.
        let mut t_first = f64::INFINITY;
        if dir[2] < -1e-15 {
            let tg = -origin[2] / dir[2];
            if tg > 1e-12 {
                t_first = t_first.min(tg);
            }
        }
        for b in &boxes {
            if let Some(t) = oracle_ray_box(origin, dir, b) {
                t_first = t_first.min(t);
            }
        }
        assert!(
            (t_hit - t_first).abs() < 1e-6,
            "return at t = {t_hit} but first surface at t = {t_first}"
        );
    }
}

fn csv_ppm_round_trip_subsuite() {
    let tmp = tempfile::tempdir().expect("tempdir");
    let grid = &*CORRECTED;
    let csv_path = tmp.path().join("grid.csv");
    write_grid_csv(grid, &csv_path).expect("write");
    let back = read_grid_csv(&csv_path).expect("read");
    assert_eq!(*grid, back, "grid CSV round trip is lossless");

    let ppm_path = tmp.path().join("center_error.ppm");
    let scale = (0.0, 1.0);
    roadloc::io::render_heatmap(grid, Metric::CenterError, &ppm_path, scale).expect("render");
    let text = std::fs::read_to_string(&ppm_path).expect("read ppm");
    let mut tokens = text.split_ascii_whitespace();
    assert_eq!(tokens.next(), Some("P3"));
    assert_eq!(tokens.next().unwrap(), grid.yaws.len().to_string());
    assert_eq!(tokens.next().unwrap(), grid.distances.len().to_string());
    assert_eq!(tokens.next(), Some("255"));
    let pixels: Vec<u8> = tokens.map(|t| t.parse().expect("pixel value")).collect();
    assert_eq!(pixels.len(), 3 * grid.cells.len());
    for (cell, rgb) in grid.cells.iter().zip(pixels.chunks(3)) {
        let expected = match cell.center_error {
            None => SENTINEL_RGB,
            Some(v) => {
                let t = ((v - scale.0) / (scale.1 - scale.0)).clamp(0.0, 1.0);
                let level = (t * 255.0).round() as u8;
                [level, level, level]
            }
        };
        assert_eq!(rgb, expected, "pixel for cell at ({}, {})", cell.distance, cell.yaw);
    }
}

#[test]
fn criterion_6_invariant_suites() {
    background_filter_oracle_subsuite();
    lshape_brute_force_subsuite();
    hand_traced_correction_subsuite();
    corner_anchoring_subsuite();
    ray_first_hit_subsuite();
    csv_ppm_round_trip_subsuite();
    println!(
        "ACCEPTANCE 6: PASS — background-filter oracle, L-shape brute force, \
         size-correction traces and anchoring, ray first-hit audit, CSV/PPM round trip"
    );
}

/// The bundled NDT reference trace reproduces its published-run region MAEs.
#[test]
fn ndt_reference_trace_region_maes() {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/ndt_reference.csv");
    let baseline = read_baseline_csv(&path).expect("baseline trace");
    assert_eq!(baseline.len(), 201);
    let mae = |lo: f64, hi: f64| {
        let errs: Vec<f64> = baseline
            .iter()
            .filter(|(x, _)| *x >= lo && *x <= hi)
            .map(|(_, e)| e.abs())
            .collect();
        errs.iter().sum::<f64>() / errs.len() as f64
    };
    assert!((mae(-36.0, 36.0) - 0.1927).abs() < 1e-3);
    assert!((mae(-50.0, 50.0) - 0.1704).abs() < 1e-3);
}
