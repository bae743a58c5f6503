//! Exact low-dimensional convex geometry (n = 1, 2): hulls, volumes,
//! intersections, Hausdorff distance, Minkowski sums and regular subdivisions.

mod hull;
mod polyhedron;
mod subdivision;

pub use hull::{hull_1d, hull_2d};
pub use polyhedron::{
    hausdorff_distance, intersect, minkowski_sum, volume, volume_k, Halfspace, Polyhedron,
};
pub use subdivision::{lower_hull, Cell, Face, LiftedPoint, LiftedPointSet, Subdivision};
