//! Comparison geometry against Minkowski `R^{1,1}`.

mod alexandrov;
mod cosines;
mod curvature;
mod sampling;
mod stacking;
mod triangle;

pub use alexandrov::{
    random_across_data, random_future_data, verify_alexandrov_across, verify_alexandrov_future, AcrossData,
    AlexandrovReport, FutureData, LemmaVersion,
};
pub use cosines::{law_of_cosines_side, solve_angle, vertex_angle, SideTriple, Sigma, SignedAngle};
pub use curvature::{
    hinge_theta, knot_tau_bar, test_curvature, test_curvature_lower0, test_curvature_upper0,
    test_monotonicity_comparison, upper_angle_ladder, BoundMode, CurvatureReport, CurvatureWitness, Hinge, Knot,
    MonotonicityReport, SampledTriangle,
};
pub use sampling::{finite_triangles, random_minkowski_triangle, random_product_triangle};
pub use stacking::{
    angle_equals_comparison_angle, sides_equal_check, verify_stacking, AngleSpreadReport,
    SidesEqualReport, StackingReport,
};
pub use triangle::{
    comparison_point, hyperbolic_angle, locate_third, realize_triangle, side_of, side_triple_of, tau_bar,
    ComparisonTriangle, Oriented,
};
