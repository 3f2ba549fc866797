//! Roadside LiDAR vehicle localization.
//!
//! A roadside unit (RSU) carrying a LiDAR observes a vehicle, separates its
//! points from the static background, fits a 2D oriented bounding box with
//! L-shape fitting, and refines the box center using the vehicle's true
//! dimensions shared over V2I. The crate bundles a deterministic ray-cast
//! simulator and two evaluation harnesses: a distance x yaw error-grid sweep
//! and a straight-road trajectory run.

pub mod boxfit;
pub mod config;
pub mod experiments;
pub mod geom;
pub mod io;
pub mod kdtree;
pub mod lidar;
pub mod perception;
