//! Population meshes and the four node-placement strategies.

mod mesh;
mod placement;
mod points;

pub use mesh::{
    rank_populations, synthesize_mesh, PopulationMesh, Scatter, SyntheticMesh, DEFAULT_CELL_SIZE,
    DEFAULT_MESH_SIDE,
};
pub use placement::{
    exact_sqrt, lattice_points, place_inverse, place_population, place_uniform,
    place_uniform_snapped, BoundingBox,
};
pub use points::{Placement, Point, PointSet};

pub(crate) use points::check_distinct;
