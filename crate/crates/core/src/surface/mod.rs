//! The quartic family, its symmetries, Condition (A), singular points,
//! real planes and plane sections.

mod condition;
mod family;
mod plane;

pub use condition::{
    classify_singularities, condition_a_check, ConditionAReport, Singularity, SingularityKind,
    SingularityReport, Status,
};
pub use family::{apply_symmetry, ProjPoint, QuarticFamily, Symmetry};
pub use plane::{
    classify_plane, classify_plane_y, plane_section, random_nodal_plane, random_smooth_plane,
    real_form_to_y, real_to_y, trope_forms, y_form_to_real, PlaneChart, PlaneClass, RealPlane,
};
