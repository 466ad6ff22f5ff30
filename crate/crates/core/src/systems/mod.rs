//! The three built-in systems: the ladder space, depth-truncated
//! odometers, and the pointed odometer.

mod ladder;
mod odometer;
mod pointed;

pub use ladder::{ladder_embed, LadderPoint, LadderSystem};
pub use odometer::{cylinder_partition, odometer_dist, CylinderPartition, OdometerSystem};
pub use pointed::{pointed_gamma, PointedOdometer, PointedPoint};
