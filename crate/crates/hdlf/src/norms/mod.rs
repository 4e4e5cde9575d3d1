//! Towers, p-power compatible sequences, the field-of-norms embedding,
//! root descent and the Artin-Schreier/Kummer duality map.

mod compat;
mod descend;
mod duality;
mod tower;

pub use compat::{
    agree_within, build_pi_seq, embed_series, epsilon, random_maximal, zero_seq, Certificate, CompatSeq, EmbeddedSeries,
};
pub use descend::{norm_descend, perturbed_step, step_coefficient_threshold, Descent, DescentCertificate};
pub use duality::{duality_map, epsilon_minus_one, exp_converging, DualityReport, DualityValue};
pub use tower::{
    alpha_ratios, alpha_recursion, alpha_steps_below, basic_tower_spec, verify_tower, BasicTower2D, CycTower, LevelSpec,
    ProjectionReport, TowerSpec,
};
