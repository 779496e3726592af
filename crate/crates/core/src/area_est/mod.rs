//! Surface-area functionals on parametric surfaces and meshes: Lagrange
//! quadrature, Peano's bi-vectorial and geometric areas, the Geöcze area, the
//! Borchardt–Minkowski tube estimate, and the Schwarz lantern.

mod borchardt;
mod estimators;
mod lantern;
mod surface;

pub use borchardt::{
    borchardt_area, borchardt_area_surface, closest_point_on_triangle, extrapolate_to_zero,
    triangulate, BorchardtEstimate, MIN_SAMPLES, SURFACE_GRID,
};
pub use estimators::{
    cell_value, cell_values, coordinate_abs_areas, estimate_cells, fibonacci_directions,
    geocze_area, infinitesimal_ratio, lagrange_area, outer_boundary, peano_bivector_area,
    peano_geometric_area, projected_abs_area, AreaEstimate, CellRule, LevelRecord, Method,
    DEFAULT_DIRS, DEFAULT_K, DEFAULT_MAX_LEVEL, DEFAULT_TOL, MIN_LEVEL,
};
pub use surface::{Domain, ParametricSurface};
pub use lantern::{
    lantern_area_closed_form, lantern_mesh_area, mesh_area, schwarz_lantern, schwarz_lantern_with,
    LanternLayout,
};
